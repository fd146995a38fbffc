//! Exact crossing minimization for two trees on any number of layers.
//!
//! The first tree is drawn in its (unique) embedding and stays fixed. Every
//! internal vertex of the second tree is assigned a *position* on its layer:
//! the number of first-tree vertices to its left. `o[v, p]` is the minimum
//! number of crossings between the first tree and the subtree below `v` when
//! `v` sits at position `p`; it is filled bottom-up, one layer at a time.

use std::ops::RangeInclusive;

use thiserror::Error;

use crate::forest::{derive_layer_orders, Drawing, LayerOrders, LayeredForest, VertexId};
use crate::Solution;

/// Index of the fixed tree.
pub const FIXED_TREE: usize = 0;
/// Index of the tree inserted by the dynamic program.
pub const FREE_TREE: usize = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DpError {
    #[error("the two-tree solver needs exactly 2 trees, got {0}")]
    NotTwoTrees(usize),
    #[error("no table row for vertex {vertex:?}")]
    TableNotFilled { vertex: String },
}

/// `cro_x(y, z)`: crossings of one free-tree edge from position `y` on layer
/// `x` to position `z` on layer `x + 1` with the fixed tree's edges.
#[derive(Clone, Debug)]
pub struct CrossingTable {
    /// Number of fixed-tree vertices per layer, `sizes[j - 1] = n_{1|j}`.
    sizes: Vec<usize>,
    /// `strips[x - 1]` is row-major over `y`, with `sizes[x] + 1` columns.
    strips: Vec<Vec<u64>>,
    /// `ideal[j - 1][p]` for `j >= 2`; `ideal[0]` is empty.
    ideal: Vec<Vec<usize>>,
}

impl CrossingTable {
    pub fn build(forest: &LayeredForest, orders: &LayerOrders) -> Result<Self, DpError> {
        if forest.num_trees() != 2 {
            return Err(DpError::NotTwoTrees(forest.num_trees()));
        }
        let layers = forest.num_layers();
        let sizes = orders.layer_sizes_of(FIXED_TREE);

        let mut strips = Vec::with_capacity(layers - 1);
        for x in 1..layers {
            let below = orders.tree_layer(FIXED_TREE, x);
            let (rows, cols) = (sizes[x - 1] + 1, sizes[x] + 1);
            // 1-based index of each fixed vertex's parent on layer x + 1
            let parent_idx: Vec<Option<usize>> = below
                .iter()
                .map(|&v| forest.parent(v).map(|p| orders.rank(p) + 1))
                .collect();
            let mut table = vec![0u64; rows * cols];
            for z in 0..cols {
                let mut c = parent_idx.iter().flatten().filter(|&&ib| ib <= z).count() as u64;
                table[z] = c;
                for y in 1..rows {
                    // fixed vertex y moves from the right of the source to its left
                    if let Some(ib) = parent_idx[y - 1] {
                        if ib <= z {
                            c -= 1;
                        } else {
                            c += 1;
                        }
                    }
                    table[y * cols + z] = c;
                }
            }
            strips.push(table);
        }

        let mut ideal = vec![Vec::new(); layers];
        for j in 2..=layers {
            let above = orders.tree_layer(FIXED_TREE, j);
            let mut acc = 0;
            let mut row = Vec::with_capacity(above.len() + 1);
            row.push(0);
            for &w in above {
                acc += forest.children(w).len();
                row.push(acc);
            }
            ideal[j - 1] = row;
        }
        Ok(Self { sizes, strips, ideal })
    }

    /// Number of positions `n_{1|layer} + 1` on `layer`.
    pub fn num_positions(&self, layer: usize) -> usize {
        self.sizes[layer - 1] + 1
    }

    /// `cro_x(y, z)`, or `None` (infinite) outside the domain.
    pub fn get(&self, x: usize, y: usize, z: usize) -> Option<u64> {
        if x == 0 || x >= self.sizes.len() {
            return None;
        }
        let (rows, cols) = (self.sizes[x - 1] + 1, self.sizes[x] + 1);
        (y < rows && z < cols).then(|| self.strips[x - 1][y * cols + z])
    }

    fn at(&self, x: usize, y: usize, z: usize) -> u64 {
        self.strips[x - 1][y * (self.sizes[x] + 1) + z]
    }

    /// The position `p*` on layer `j - 1` below position `p` on layer `j` at
    /// which an edge crosses nothing: the number of fixed vertices on layer
    /// `j - 1` whose parent is among the first `p` fixed vertices of layer `j`.
    pub fn ideal_position(&self, j: usize, p: usize) -> usize {
        self.ideal[j - 1][p]
    }
}

/// The filled table `o[v, p]` together with the child positions chosen for
/// every parent position.
#[derive(Clone, Debug)]
pub struct DpTable {
    /// Indexed by vertex; empty for vertices without a row.
    values: Vec<Vec<u64>>,
    /// `choice[c][p]`: position of `c` when its parent sits at `p`.
    choice: Vec<Vec<usize>>,
    names: Vec<String>,
}

/// An inclusive interval of positions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Interval {
    pub min: usize,
    pub max: usize,
}

impl Interval {
    pub fn contains(&self, p: usize) -> bool {
        self.min <= p && p <= self.max
    }

    pub fn range(&self) -> RangeInclusive<usize> {
        self.min..=self.max
    }

    /// Closest point of the interval to `p`.
    pub fn clamp(&self, p: usize) -> usize {
        p.clamp(self.min, self.max)
    }
}

impl DpTable {
    /// The row `o[v, ·]` of an internal free-tree vertex.
    pub fn values(&self, v: VertexId) -> Result<&[u64], DpError> {
        match self.values.get(v.index()) {
            Some(row) if !row.is_empty() => Ok(row),
            _ => Err(self.not_filled(v)),
        }
    }

    /// `optpos(v)`: the positions minimizing `o[v, ·]`. Reported by its
    /// endpoints; contiguity is a property of the table and is tested
    /// separately.
    pub fn optimal_positions(&self, v: VertexId) -> Result<Interval, DpError> {
        let row = self.values(v)?;
        let best = *row.iter().min().expect("rows are never empty");
        let min = row.iter().position(|&o| o == best).unwrap();
        let max = row.iter().rposition(|&o| o == best).unwrap();
        Ok(Interval { min, max })
    }

    /// The position the program chose for child `c` when its parent sits at
    /// `parent_pos`.
    pub fn chosen_position(&self, c: VertexId, parent_pos: usize) -> Result<usize, DpError> {
        self.choice
            .get(c.index())
            .and_then(|row| row.get(parent_pos))
            .copied()
            .ok_or_else(|| self.not_filled(c))
    }

    fn not_filled(&self, v: VertexId) -> DpError {
        DpError::TableNotFilled {
            vertex: self.names.get(v.index()).cloned().unwrap_or_else(|| v.to_string()),
        }
    }
}

/// A completed run of the two-tree program.
#[derive(Clone, Debug)]
pub struct TwoTreeDp {
    orders: LayerOrders,
    crossings: CrossingTable,
    table: DpTable,
    /// Final position of every free-tree vertex (unused for fixed vertices).
    positions: Vec<usize>,
    min_crossings: u64,
    drawing: Drawing,
}

impl TwoTreeDp {
    pub fn run(forest: &LayeredForest) -> Result<Self, DpError> {
        if forest.num_trees() != 2 {
            return Err(DpError::NotTwoTrees(forest.num_trees()));
        }
        let orders = derive_layer_orders(forest);
        let crossings = CrossingTable::build(forest, &orders)?;
        let n = forest.num_vertices();
        let layers = forest.num_layers();

        // positions of the free leaves are fixed by the leaf order
        let mut leaf_pos = vec![0usize; n];
        let mut fixed_seen = 0;
        for &leaf in forest.leaf_order() {
            if forest.tree_of(leaf) == FIXED_TREE {
                fixed_seen += 1;
            } else {
                leaf_pos[leaf.index()] = fixed_seen;
            }
        }

        let mut values: Vec<Vec<u64>> = vec![Vec::new(); n];
        let mut choice: Vec<Vec<usize>> = vec![Vec::new(); n];
        for j in 2..=layers {
            let below_positions = crossings.num_positions(j - 1);
            let width = crossings.num_positions(j);
            for &v in orders.tree_layer(FREE_TREE, j) {
                let mut row = vec![0u64; width];
                for &c in forest.children(v) {
                    let mut picks = Vec::with_capacity(width);
                    for (p, slot) in row.iter_mut().enumerate() {
                        let q = if j == 2 {
                            leaf_pos[c.index()]
                        } else {
                            best_child_position(&values[c.index()], |q| crossings.at(j - 1, q, p), below_positions)
                        };
                        let below = if j == 2 { 0 } else { values[c.index()][q] };
                        *slot += below + crossings.at(j - 1, q, p);
                        picks.push(q);
                    }
                    choice[c.index()] = picks;
                }
                values[v.index()] = row;
            }
        }

        let root = forest.tree(FREE_TREE).root;
        let mut positions = leaf_pos;
        let min_crossings = if forest.layer_of(root) == 1 {
            0
        } else {
            let row = &values[root.index()];
            let (best_p, &best) = row
                .iter()
                .enumerate()
                .min_by_key(|&(p, &o)| (o, p))
                .expect("non-empty row");
            positions[root.index()] = best_p;
            for j in (2..forest.layer_of(root)).rev() {
                for &v in orders.tree_layer(FREE_TREE, j) {
                    let parent = forest.parent(v).expect("non-root");
                    positions[v.index()] = choice[v.index()][positions[parent.index()]];
                }
            }
            best
        };

        let mut layer_lists = vec![forest.leaf_order().to_vec()];
        for j in 2..=layers {
            let fixed = orders.tree_layer(FIXED_TREE, j);
            let mut free = orders.tree_layer(FREE_TREE, j).to_vec();
            free.sort_by_key(|&v| (positions[v.index()], orders.rank(v)));
            let mut merged = Vec::with_capacity(fixed.len() + free.len());
            let mut it = free.into_iter().peekable();
            for (i, &w) in fixed.iter().enumerate() {
                while let Some(v) = it.next_if(|v| positions[v.index()] <= i) {
                    merged.push(v);
                }
                merged.push(w);
            }
            merged.extend(it);
            layer_lists.push(merged);
        }

        let table = DpTable {
            values,
            choice,
            names: forest.vertex_ids().map(|v| forest.name(v).to_owned()).collect(),
        };
        Ok(Self {
            orders,
            crossings,
            table,
            positions,
            min_crossings,
            drawing: Drawing::new(layer_lists),
        })
    }

    pub fn min_crossings(&self) -> u64 {
        self.min_crossings
    }

    pub fn drawing(&self) -> &Drawing {
        &self.drawing
    }

    pub fn table(&self) -> &DpTable {
        &self.table
    }

    pub fn crossing_table(&self) -> &CrossingTable {
        &self.crossings
    }

    pub fn layer_orders(&self) -> &LayerOrders {
        &self.orders
    }

    /// Final position of a free-tree vertex relative to the fixed tree.
    pub fn position(&self, v: VertexId) -> usize {
        self.positions[v.index()]
    }

    pub fn into_solution(self) -> Solution {
        Solution {
            drawing: self.drawing,
            crossings: self.min_crossings,
        }
    }
}

/// Minimizes `o[c, q] + cro(q, p)` over `q`; among minimizers prefers the
/// largest crossing term, then the smallest `q`.
fn best_child_position(child_row: &[u64], cro: impl Fn(usize) -> u64, positions: usize) -> usize {
    let mut best = 0;
    let mut key = (u64::MAX, 0u64);
    for (q, &o) in child_row.iter().enumerate().take(positions) {
        let c = cro(q);
        let total = o + c;
        if total < key.0 || (total == key.0 && c > key.1) {
            key = (total, c);
            best = q;
        }
    }
    best
}

/// Minimum-crossing drawing of a two-tree forest in which both trees keep
/// their embeddings.
pub fn solve_two_trees(forest: &LayeredForest) -> Result<Solution, DpError> {
    TwoTreeDp::run(forest).map(TwoTreeDp::into_solution)
}
