//! Exact crossing minimization for any number of trees on at most three layers.
//!
//! With the leaf order (layer 1) and the root order (layer 3) fixed, a layer-2
//! order that respects every tree's embedding is an interleaving of `k`
//! sequences, i.e. a monotone lattice path through the grid
//! `{0..=n_1} × … × {0..=n_k}` where `n_i` is the number of layer-2 vertices of
//! tree `i`. Stepping in dimension `j` from coordinate `x` places the next
//! vertex `v` of tree `j` after `x_i` vertices of every other tree `i`, and
//! costs the crossings charged to `v` in that situation. Every crossing is
//! charged to both of its layer-2 endpoints, so a path weighs exactly twice the
//! crossings of its drawing. The grid is never materialized: distances are
//! filled over coordinates in colexicographic order.
//!
//! Without a prescribed root order every arrangement of the layer-3 roots is
//! tried.

use itertools::Itertools;
use thiserror::Error;

use crate::constraint::Constraint;
use crate::forest::{derive_layer_orders, Drawing, LayerOrders, LayeredForest, VertexId};
use crate::Solution;

/// Weight of a forbidden grid edge. Sums saturate at this value.
pub const INFINITE_WEIGHT: u64 = u64::MAX;

pub const DEFAULT_MAX_GRID_CELLS: u128 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GridError {
    #[error("the grid solver needs at most 3 layers, got {0}")]
    NotThreeLayers(usize),
    #[error("no drawing satisfies the constraints")]
    Infeasible,
    #[error("grid would need {cells} cells, above the cap of {cap}")]
    GridTooLarge { cells: u128, cap: u128 },
    #[error("step in dimension {dim} from {coord:?} leaves the grid")]
    OutOfGrid { coord: Vec<usize>, dim: usize },
    #[error("invalid root order: {0}")]
    InvalidRootOrder(String),
    #[error("constraint between {0:?} and {1:?} does not relate vertices of one layer")]
    ConstraintLayerMismatch(String, String),
    #[error("not a valid path or layer-2 order: {0}")]
    InvalidPath(String),
}

#[derive(Clone, Debug)]
pub struct GridOptions {
    pub max_cells: u128,
}

impl Default for GridOptions {
    fn default() -> Self {
        Self {
            max_cells: DEFAULT_MAX_GRID_CELLS,
        }
    }
}

/// Edges of one layer-2 vertex's star, split by strip.
#[derive(Clone, Debug, Default)]
struct Star {
    /// Leaf-order positions of the children.
    leaves: Vec<usize>,
    /// Root-order position of the parent, if the vertex is not itself a root.
    parent: Option<usize>,
}

impl Star {
    /// Crossings between two stars when `self`'s center is left of `other`'s
    /// (`left = true`) or right of it.
    fn crossings_with(&self, other: &Star, left: bool) -> u64 {
        let mut n = 0;
        for &a in &self.leaves {
            for &c in &other.leaves {
                n += u64::from((a < c) != left);
            }
        }
        if let (Some(r), Some(s)) = (self.parent, other.parent) {
            n += u64::from((r < s) != left);
        }
        n
    }
}

fn stars(forest: &LayeredForest, root_pos: &[usize]) -> Vec<Star> {
    let leaf_pos = {
        let mut pos = vec![0; forest.num_vertices()];
        for (i, v) in forest.leaf_order().iter().enumerate() {
            pos[v.index()] = i;
        }
        pos
    };
    let mut out = vec![Star::default(); forest.num_vertices()];
    for v in forest.vertex_ids().filter(|&v| forest.layer_of(v) == 2) {
        out[v.index()] = Star {
            leaves: forest.children(v).iter().map(|c| leaf_pos[c.index()]).collect(),
            parent: forest.parent(v).map(|p| root_pos[p.index()]),
        };
    }
    out
}

/// `cro^v_i(p)`: crossings between the star of layer-2 vertex `v` and tree
/// `i` when `v` is inserted after the first `p` layer-2 vertices of tree `i`.
#[derive(Clone, Debug)]
pub struct InsertionTables {
    /// `table[v][i]`, empty when `v` belongs to tree `i` or is not on layer 2.
    table: Vec<Vec<Vec<u64>>>,
}

impl InsertionTables {
    /// Incremental computation: `cro^v_i(0)` by checking the star of `v`
    /// against every star of tree `i`, then each step `p - 1 -> p` only
    /// re-checks the star of the `p`-th vertex of tree `i`.
    pub fn compute(forest: &LayeredForest, orders: &LayerOrders, root_order: &[VertexId]) -> Result<Self, GridError> {
        if forest.num_layers() > 3 {
            return Err(GridError::NotThreeLayers(forest.num_layers()));
        }
        let root_pos = root_positions(forest, root_order)?;
        let stars = stars(forest, &root_pos);
        let k = forest.num_trees();
        let mut table = vec![Vec::new(); forest.num_vertices()];
        for v in forest.vertex_ids().filter(|&v| forest.layer_of(v) == 2) {
            let sv = &stars[v.index()];
            let mut rows = vec![Vec::new(); k];
            for (i, row) in rows.iter_mut().enumerate() {
                if i == forest.tree_of(v) {
                    continue;
                }
                let others = if forest.num_layers() >= 2 { orders.tree_layer(i, 2) } else { &[] };
                let mut c: u64 = others.iter().map(|d| sv.crossings_with(&stars[d.index()], true)).sum();
                row.reserve(others.len() + 1);
                row.push(c);
                for d in others {
                    let sd = &stars[d.index()];
                    c = c + sv.crossings_with(sd, false) - sv.crossings_with(sd, true);
                    row.push(c);
                }
            }
            table[v.index()] = rows;
        }
        Ok(Self { table })
    }

    /// `cro^v_i(p)`, or `None` when undefined (own tree or `p` out of range).
    pub fn get(&self, v: VertexId, tree: usize, p: usize) -> Option<u64> {
        self.table.get(v.index())?.get(tree)?.get(p).copied()
    }

    pub fn row(&self, v: VertexId, tree: usize) -> &[u64] {
        &self.table[v.index()][tree]
    }

    /// Largest difference between consecutive entries of a row.
    pub fn max_step(&self, v: VertexId, tree: usize) -> u64 {
        self.row(v, tree)
            .windows(2)
            .map(|w| w[0].abs_diff(w[1]))
            .max()
            .unwrap_or(0)
    }
}

/// Star degree of a layer-2 vertex (its children plus its parent edge).
pub fn star_degree(forest: &LayeredForest, v: VertexId) -> usize {
    forest.children(v).len() + usize::from(forest.parent(v).is_some())
}

/// Reference recount of a single `cro^v_i(p)`: places `v` explicitly among
/// the layer-2 vertices of tree `i` and checks every edge pair.
pub fn insertion_crossings_direct(
    forest: &LayeredForest,
    root_order: &[VertexId],
    v: VertexId,
    tree: usize,
    p: usize,
) -> u64 {
    let orders = derive_layer_orders(forest);
    let mut pos = vec![0usize; forest.num_vertices()];
    for (i, l) in forest.leaf_order().iter().enumerate() {
        pos[l.index()] = i;
    }
    for (i, r) in root_order.iter().enumerate() {
        pos[r.index()] = i;
    }
    for (i, d) in orders.tree_layer(tree, 2).iter().enumerate() {
        pos[d.index()] = 2 * i + 1;
    }
    pos[v.index()] = 2 * p;
    let star_v: Vec<_> = forest.edges().filter(|&(a, b)| a == v || b == v).collect();
    let tree_edges: Vec<_> = forest.edges().filter(|&(a, _)| forest.tree_of(a) == tree).collect();
    let mut n = 0;
    for &(a, b) in &star_v {
        for &(c, d) in &tree_edges {
            if forest.layer_of(a) == forest.layer_of(c) && (pos[a.index()] < pos[c.index()]) != (pos[b.index()] < pos[d.index()]) {
                n += 1;
            }
        }
    }
    n
}

fn root_positions(forest: &LayeredForest, root_order: &[VertexId]) -> Result<Vec<usize>, GridError> {
    let expected = if forest.num_layers() >= 3 {
        forest.vertex_ids().filter(|&v| forest.layer_of(v) == 3).count()
    } else {
        0
    };
    if root_order.len() != expected {
        return Err(GridError::InvalidRootOrder(format!(
            "expected {expected} layer-3 vertices, got {}",
            root_order.len()
        )));
    }
    let mut pos = vec![usize::MAX; forest.num_vertices()];
    for (i, &r) in root_order.iter().enumerate() {
        if r.index() >= forest.num_vertices() || forest.layer_of(r) != 3 || pos[r.index()] != usize::MAX {
            return Err(GridError::InvalidRootOrder(format!("bad or repeated entry {r}")));
        }
        pos[r.index()] = i;
    }
    Ok(pos)
}

/// A forbidden step for one vertex, from a cross-tree ordering constraint.
#[derive(Clone, Copy, Debug)]
enum Ban {
    /// Forbidden while `coord[dim] >= bound`.
    AtLeast { dim: usize, bound: usize },
    /// Forbidden while `coord[dim] < bound`.
    Below { dim: usize, bound: usize },
}

/// A monotone path from `(0, …, 0)` to `(n_1, …, n_k)`: `steps[s]` is the
/// dimension (tree) advanced by step `s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridPath {
    pub steps: Vec<usize>,
    pub weight: u64,
    /// The layer-2 order the path encodes.
    pub order: Vec<VertexId>,
}

/// The weighted grid for one fixed root order.
#[derive(Clone, Debug)]
pub struct Grid<'f> {
    forest: &'f LayeredForest,
    root_order: Vec<VertexId>,
    /// Layer-2 vertices of every tree in embedding order.
    layer2: Vec<Vec<VertexId>>,
    strides: Vec<usize>,
    cells: usize,
    tables: InsertionTables,
    bans: Vec<Vec<Ban>>,
}

impl<'f> Grid<'f> {
    pub fn new(
        forest: &'f LayeredForest,
        root_order: &[VertexId],
        constraints: &[Constraint],
        options: &GridOptions,
    ) -> Result<Self, GridError> {
        if forest.num_layers() > 3 {
            return Err(GridError::NotThreeLayers(forest.num_layers()));
        }
        let orders = derive_layer_orders(forest);
        let root_pos = root_positions(forest, root_order)?;
        let layer2: Vec<Vec<VertexId>> = (0..forest.num_trees())
            .map(|t| orders.tree_layer(t, 2).to_vec())
            .collect();
        let cells: u128 = layer2.iter().map(|l| l.len() as u128 + 1).product();
        if cells > options.max_cells {
            return Err(GridError::GridTooLarge {
                cells,
                cap: options.max_cells,
            });
        }
        let mut strides = Vec::with_capacity(layer2.len());
        let mut s = 1usize;
        for l in &layer2 {
            strides.push(s);
            s *= l.len() + 1;
        }

        let mut bans = vec![Vec::new(); forest.num_vertices()];
        for c in constraints {
            let (x, y) = (c.before, c.after);
            let layer = forest.layer_of(x);
            if layer != forest.layer_of(y) {
                return Err(GridError::ConstraintLayerMismatch(
                    forest.name(x).to_owned(),
                    forest.name(y).to_owned(),
                ));
            }
            let ok = match layer {
                1 => forest.leaf_order().iter().position(|&v| v == x) < forest.leaf_order().iter().position(|&v| v == y),
                3 => root_pos[x.index()] < root_pos[y.index()],
                _ if forest.tree_of(x) == forest.tree_of(y) => orders.rank(x) < orders.rank(y),
                _ => {
                    let (a, b) = (forest.tree_of(x), forest.tree_of(y));
                    let (ix, iy) = (orders.rank(x) + 1, orders.rank(y) + 1);
                    bans[x.index()].push(Ban::AtLeast { dim: b, bound: iy });
                    bans[y.index()].push(Ban::Below { dim: a, bound: ix });
                    true
                }
            };
            if !ok {
                return Err(GridError::Infeasible);
            }
        }

        let tables = InsertionTables::compute(forest, &orders, root_order)?;
        Ok(Self {
            forest,
            root_order: root_order.to_vec(),
            layer2,
            strides,
            cells: cells as usize,
            tables,
            bans,
        })
    }

    pub fn dimensions(&self) -> Vec<usize> {
        self.layer2.iter().map(Vec::len).collect()
    }

    pub fn num_cells(&self) -> usize {
        self.cells
    }

    pub fn insertion_tables(&self) -> &InsertionTables {
        &self.tables
    }

    /// Weight of the step in dimension `dim` leaving `coord`:
    /// `Σ_{i != dim} cro^v_i(coord[i])` for the vertex `v` it places, or
    /// [`INFINITE_WEIGHT`] if a constraint forbids placing `v` there.
    pub fn edge_weight(&self, coord: &[usize], dim: usize) -> Result<u64, GridError> {
        let inside = coord.len() == self.layer2.len()
            && dim < coord.len()
            && coord.iter().zip(&self.layer2).all(|(&x, l)| x <= l.len())
            && coord[dim] < self.layer2[dim].len();
        if !inside {
            return Err(GridError::OutOfGrid {
                coord: coord.to_vec(),
                dim,
            });
        }
        Ok(self.weight_unchecked(coord, dim))
    }

    fn weight_unchecked(&self, coord: &[usize], dim: usize) -> u64 {
        let v = self.layer2[dim][coord[dim]];
        for ban in &self.bans[v.index()] {
            let banned = match *ban {
                Ban::AtLeast { dim, bound } => coord[dim] >= bound,
                Ban::Below { dim, bound } => coord[dim] < bound,
            };
            if banned {
                return INFINITE_WEIGHT;
            }
        }
        let row = &self.tables.table[v.index()];
        coord
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != dim)
            .map(|(i, &x)| row[i][x])
            .sum()
    }

    fn check_steps(&self, steps: &[usize]) -> Result<(), GridError> {
        let mut count = vec![0usize; self.layer2.len()];
        for &s in steps {
            if s >= count.len() {
                return Err(GridError::InvalidPath(format!("no dimension {s}")));
            }
            count[s] += 1;
        }
        if count != self.dimensions() {
            return Err(GridError::InvalidPath(format!(
                "steps per dimension {count:?}, expected {:?}",
                self.dimensions()
            )));
        }
        Ok(())
    }

    /// Total weight of an arbitrary s-t path (saturating).
    pub fn path_weight(&self, steps: &[usize]) -> Result<u64, GridError> {
        self.check_steps(steps)?;
        let mut coord = vec![0; self.layer2.len()];
        let mut w: u64 = 0;
        for &d in steps {
            w = w.saturating_add(self.weight_unchecked(&coord, d));
            coord[d] += 1;
        }
        Ok(w)
    }

    /// The layer-2 order a path encodes.
    pub fn decode(&self, steps: &[usize]) -> Result<Vec<VertexId>, GridError> {
        self.check_steps(steps)?;
        let mut next = vec![0; self.layer2.len()];
        Ok(steps
            .iter()
            .map(|&d| {
                next[d] += 1;
                self.layer2[d][next[d] - 1]
            })
            .collect())
    }

    /// The path of a layer-2 order; fails unless the order is a linear
    /// extension of the per-tree orders.
    pub fn encode(&self, order: &[VertexId]) -> Result<Vec<usize>, GridError> {
        let mut next = vec![0; self.layer2.len()];
        let mut steps = Vec::with_capacity(order.len());
        for &v in order {
            if v.index() >= self.forest.num_vertices() || self.forest.layer_of(v) != 2 {
                return Err(GridError::InvalidPath(format!("{v} is not a layer-2 vertex")));
            }
            let t = self.forest.tree_of(v);
            if self.layer2[t].get(next[t]) != Some(&v) {
                return Err(GridError::InvalidPath(format!(
                    "{} is out of its tree's order",
                    self.forest.name(v)
                )));
            }
            next[t] += 1;
            steps.push(t);
        }
        self.check_steps(&steps)?;
        Ok(steps)
    }

    /// Complete drawing for a path: leaves, decoded layer 2, fixed roots.
    pub fn drawing(&self, steps: &[usize]) -> Result<Drawing, GridError> {
        let mut layers = vec![self.forest.leaf_order().to_vec(), self.decode(steps)?];
        if self.forest.num_layers() == 3 {
            layers.push(self.root_order.clone());
        }
        Ok(Drawing::new(layers))
    }

    /// Lightest s-t path by a single sweep over the cells in colexicographic
    /// order (a topological order of the grid). Among equally light
    /// predecessors the colexicographically smallest one wins.
    pub fn lightest_path(&self) -> Result<GridPath, GridError> {
        let k = self.layer2.len();
        let dims = self.dimensions();
        let mut dist = vec![INFINITE_WEIGHT; self.cells];
        let mut pred = vec![u16::MAX; self.cells];
        dist[0] = 0;
        let mut coord = vec![0usize; k];
        for idx in 1..self.cells {
            // odometer increment, first coordinate fastest
            for (c, &n) in coord.iter_mut().zip(&dims) {
                if *c < n {
                    *c += 1;
                    break;
                }
                *c = 0;
            }
            let mut best = INFINITE_WEIGHT;
            let mut from = u16::MAX;
            for d in (0..k).rev() {
                if coord[d] == 0 {
                    continue;
                }
                let prev = idx - self.strides[d];
                if dist[prev] == INFINITE_WEIGHT {
                    continue;
                }
                coord[d] -= 1;
                let w = self.weight_unchecked(&coord, d);
                coord[d] += 1;
                let cand = dist[prev].saturating_add(w);
                if cand < best {
                    best = cand;
                    from = d as u16;
                }
            }
            dist[idx] = best;
            pred[idx] = from;
        }
        let weight = dist[self.cells - 1];
        if weight == INFINITE_WEIGHT {
            return Err(GridError::Infeasible);
        }
        let mut steps = Vec::new();
        let mut idx = self.cells - 1;
        while idx != 0 {
            let d = pred[idx] as usize;
            steps.push(d);
            idx -= self.strides[d];
        }
        steps.reverse();
        let order = self.decode(&steps)?;
        Ok(GridPath { steps, weight, order })
    }
}

/// Lightest path for prescribed leaf and root orders.
pub fn solve_fixed_orders(
    forest: &LayeredForest,
    root_order: &[VertexId],
    constraints: &[Constraint],
    options: &GridOptions,
) -> Result<(GridPath, Drawing), GridError> {
    if forest.num_trees() > u16::MAX as usize {
        return Err(GridError::GridTooLarge {
            cells: u128::MAX,
            cap: options.max_cells,
        });
    }
    let grid = Grid::new(forest, root_order, constraints, options)?;
    let path = grid.lightest_path()?;
    let drawing = grid.drawing(&path.steps)?;
    Ok((path, drawing))
}

/// Layer-3 vertices in tree order.
pub fn layer3_vertices(forest: &LayeredForest) -> Vec<VertexId> {
    if forest.num_layers() < 3 {
        return Vec::new();
    }
    let mut roots: Vec<_> = forest.vertex_ids().filter(|&v| forest.layer_of(v) == 3).collect();
    roots.sort_by_key(|&v| forest.tree_of(v));
    roots
}

/// Minimum-crossing drawing of a forest on at most three layers. Without a
/// fixed root order all arrangements of the layer-3 roots are tried in
/// lexicographic order of tree index; the first lightest one wins.
pub fn solve_three_layer(
    forest: &LayeredForest,
    constraints: &[Constraint],
    fixed_root_order: Option<&[VertexId]>,
    options: &GridOptions,
) -> Result<Solution, GridError> {
    if forest.num_layers() > 3 {
        return Err(GridError::NotThreeLayers(forest.num_layers()));
    }
    let finish = |path: GridPath, drawing: Drawing| {
        debug_assert!(path.weight.is_multiple_of(2));
        Solution {
            drawing,
            crossings: path.weight / 2,
        }
    };
    if let Some(order) = fixed_root_order {
        let (path, drawing) = solve_fixed_orders(forest, order, constraints, options)?;
        return Ok(finish(path, drawing));
    }

    let roots = layer3_vertices(forest);
    // fail fast on the size guard before fanning out
    let cells: u128 = (0..forest.num_trees())
        .map(|t| forest.tree_layer_size(t, 2) as u128 + 1)
        .product();
    if cells > options.max_cells {
        return Err(GridError::GridTooLarge {
            cells,
            cap: options.max_cells,
        });
    }
    let root_constraints: Vec<_> = constraints.iter().filter(|c| forest.layer_of(c.before) == 3).collect();
    let perms: Vec<Vec<VertexId>> = roots
        .iter()
        .copied()
        .permutations(roots.len())
        .filter(|perm| {
            root_constraints.iter().all(|c| {
                let p = |v| perm.iter().position(|&r| r == v);
                p(c.before) < p(c.after)
            })
        })
        .collect();

    let solve = |perm: &Vec<VertexId>| solve_fixed_orders(forest, perm, constraints, options);
    #[cfg(feature = "parallel")]
    let results: Vec<_> = {
        use rayon::prelude::*;
        perms.par_iter().map(solve).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let results: Vec<_> = perms.iter().map(solve).collect();

    let mut best: Option<(GridPath, Drawing)> = None;
    for r in results {
        match r {
            Ok((path, drawing)) => {
                if best.as_ref().is_none_or(|(b, _)| path.weight < b.weight) {
                    best = Some((path, drawing));
                }
            }
            Err(GridError::Infeasible) => {}
            Err(e) => return Err(e),
        }
    }
    best.map(|(p, d)| finish(p, d)).ok_or(GridError::Infeasible)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::tests::{forest, tree};
    use crate::forest::{count_crossings, validate_forest};

    /// T1 = a1,a2 -> A -> R1; T2 = b1,b2 -> B -> R2; leaves a1 b1 a2 b2.
    fn instance_m() -> LayeredForest {
        let t1 = tree(
            "R1",
            &[("a1", "A"), ("a2", "A"), ("A", "R1")],
            &[("R1", 3), ("A", 2), ("a1", 1), ("a2", 1)],
        );
        let t2 = tree(
            "R2",
            &[("b1", "B"), ("b2", "B"), ("B", "R2")],
            &[("R2", 3), ("B", 2), ("b1", 1), ("b2", 1)],
        );
        validate_forest(&forest(3, vec![t1, t2], &["a1", "b1", "a2", "b2"])).unwrap()
    }

    fn ids(f: &LayeredForest, names: &[&str]) -> Vec<VertexId> {
        names.iter().map(|n| f.id(n).unwrap()).collect()
    }

    #[test]
    fn insertion_tables_instance_m() {
        let f = instance_m();
        let roots = ids(&f, &["R1", "R2"]);
        let t = InsertionTables::compute(&f, &derive_layer_orders(&f), &roots).unwrap();
        let (a, b) = (f.id("A").unwrap(), f.id("B").unwrap());
        // placing A after B also crosses the two root edges
        assert_eq!(t.row(a, 1), &[1, 4]);
        assert_eq!(t.row(b, 0), &[4, 1]);
        assert_eq!(t.get(a, 0, 0), None);
        for p in 0..2 {
            assert_eq!(t.get(a, 1, p), Some(insertion_crossings_direct(&f, &roots, a, 1, p)));
            assert_eq!(t.get(b, 0, p), Some(insertion_crossings_direct(&f, &roots, b, 0, p)));
        }
    }

    #[test]
    fn edge_weights_instance_m() {
        let f = instance_m();
        let g = Grid::new(&f, &ids(&f, &["R1", "R2"]), &[], &GridOptions::default()).unwrap();
        assert_eq!(g.edge_weight(&[0, 0], 0).unwrap(), 1);
        assert_eq!(g.edge_weight(&[0, 0], 1).unwrap(), 4);
        assert!(matches!(g.edge_weight(&[1, 0], 0), Err(GridError::OutOfGrid { .. })));
        assert!(matches!(g.edge_weight(&[0], 0), Err(GridError::OutOfGrid { .. })));
        assert_eq!(g.path_weight(&[0, 1]).unwrap(), 2);
        assert_eq!(g.path_weight(&[1, 0]).unwrap(), 8);
    }

    #[test]
    fn fixed_orders_instance_m() {
        let f = instance_m();
        let roots = ids(&f, &["R1", "R2"]);
        let (path, drawing) = solve_fixed_orders(&f, &roots, &[], &GridOptions::default()).unwrap();
        assert_eq!(path.steps, vec![0, 1]);
        assert_eq!(path.weight, 2);
        assert_eq!(path.order, ids(&f, &["A", "B"]));
        assert_eq!(count_crossings(&f, &drawing).unwrap(), 1);

        let c = [Constraint {
            before: f.id("B").unwrap(),
            after: f.id("A").unwrap(),
        }];
        let (path, drawing) = solve_fixed_orders(&f, &roots, &c, &GridOptions::default()).unwrap();
        assert_eq!(path.weight, 8);
        assert_eq!(count_crossings(&f, &drawing).unwrap(), 4);
    }

    #[test]
    fn three_layer_instance_m() {
        let f = instance_m();
        let sol = solve_three_layer(&f, &[], None, &GridOptions::default()).unwrap();
        assert_eq!(sol.crossings, 1);
        assert_eq!(sol.drawing.layer(3), ids(&f, &["R1", "R2"]).as_slice());
        let swapped = ids(&f, &["R2", "R1"]);
        let other = solve_three_layer(&f, &[], Some(&swapped), &GridOptions::default()).unwrap();
        assert!(other.crossings >= 2);
    }

    #[test]
    fn single_tree_and_trivial_grids() {
        let t = tree("r", &[("m", "r"), ("a", "m"), ("b", "m")], &[("r", 3), ("m", 2), ("a", 1), ("b", 1)]);
        let f = validate_forest(&forest(3, vec![t], &["a", "b"])).unwrap();
        let g = Grid::new(&f, &ids(&f, &["r"]), &[], &GridOptions::default()).unwrap();
        assert_eq!(g.edge_weight(&[0], 0).unwrap(), 0);
        let sol = solve_three_layer(&f, &[], None, &GridOptions::default()).unwrap();
        assert_eq!(sol.crossings, 0);

        // degenerate star: a tree whose layer-2 vertex has no edges at all is impossible,
        // but a layer-2 root with children and no parent yields zero root-edge terms
        let t1 = tree("m", &[("a", "m")], &[("m", 2), ("a", 1)]);
        let t2 = tree("x", &[], &[("x", 1)]);
        let f = validate_forest(&forest(3, vec![t1, t2], &["x", "a"])).unwrap();
        let sol = solve_three_layer(&f, &[], None, &GridOptions::default()).unwrap();
        assert_eq!(sol.crossings, 0);
        let orders = derive_layer_orders(&f);
        let t = InsertionTables::compute(&f, &orders, &[]).unwrap();
        assert_eq!(t.row(f.id("m").unwrap(), 1), &[0]);
    }

    #[test]
    fn errors() {
        let f = instance_m();
        let opts = GridOptions { max_cells: 3 };
        assert!(matches!(
            solve_three_layer(&f, &[], None, &opts),
            Err(GridError::GridTooLarge { cells: 4, cap: 3 })
        ));
        assert!(matches!(
            solve_fixed_orders(&f, &ids(&f, &["R1"]), &[], &GridOptions::default()),
            Err(GridError::InvalidRootOrder(_))
        ));
        assert!(matches!(
            solve_fixed_orders(&f, &ids(&f, &["R1", "R1"]), &[], &GridOptions::default()),
            Err(GridError::InvalidRootOrder(_))
        ));
        let id = |n| f.id(n).unwrap();
        let cyc = [
            Constraint { before: id("A"), after: id("B") },
            Constraint { before: id("B"), after: id("A") },
        ];
        assert_eq!(
            solve_three_layer(&f, &cyc, None, &GridOptions::default()).unwrap_err(),
            GridError::Infeasible
        );
        let bad_leaf = [Constraint { before: id("b2"), after: id("a1") }];
        assert_eq!(
            solve_three_layer(&f, &bad_leaf, None, &GridOptions::default()).unwrap_err(),
            GridError::Infeasible
        );
        let cross = [Constraint { before: id("A"), after: id("R2") }];
        assert!(matches!(
            solve_three_layer(&f, &cross, None, &GridOptions::default()),
            Err(GridError::ConstraintLayerMismatch(..))
        ));
        // a root constraint restricts the permutation loop
        let roots = [Constraint { before: id("R2"), after: id("R1") }];
        let sol = solve_three_layer(&f, &roots, None, &GridOptions::default()).unwrap();
        assert_eq!(sol.crossings, 2);

        let t = tree("r", &[("m", "r"), ("n", "m"), ("a", "n")], &[("r", 4), ("m", 3), ("n", 2), ("a", 1)]);
        let tall = validate_forest(&forest(4, vec![t], &["a"])).unwrap();
        assert_eq!(
            solve_three_layer(&tall, &[], None, &GridOptions::default()).unwrap_err(),
            GridError::NotThreeLayers(4)
        );
    }

    #[test]
    fn encode_decode() {
        let f = instance_m();
        let g = Grid::new(&f, &ids(&f, &["R1", "R2"]), &[], &GridOptions::default()).unwrap();
        let order = ids(&f, &["B", "A"]);
        let steps = g.encode(&order).unwrap();
        assert_eq!(steps, vec![1, 0]);
        assert_eq!(g.decode(&steps).unwrap(), order);
        assert!(g.encode(&ids(&f, &["A"])).is_err());
        assert!(g.encode(&ids(&f, &["A", "a1"])).is_err());
        assert!(g.decode(&[0, 0]).is_err());
    }
}
