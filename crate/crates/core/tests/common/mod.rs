#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use treecross::dp::{TwoTreeDp, FIXED_TREE, FREE_TREE};
use treecross::grid::Grid;
use treecross::{crossing_matrix, check_drawing, derive_layer_orders, Drawing, LayeredForest, VertexId};

pub type Check = Result<(), String>;

/// Every tree is drawn by its own embedding: each layer restricted to one tree
/// equals that tree's embedding order, and no two edges of one tree cross.
pub fn embedding_preserved(forest: &LayeredForest, drawing: &Drawing) -> Check {
    check_drawing(forest, drawing).map_err(|e| e.to_string())?;
    let orders = derive_layer_orders(forest);
    for j in 1..=forest.num_layers() {
        for t in 0..forest.num_trees() {
            let sub: Vec<VertexId> = drawing.layer(j).iter().copied().filter(|&v| forest.tree_of(v) == t).collect();
            if sub != orders.tree_layer(t, j) {
                return Err(format!("layer {j}, tree {t} is not in embedding order"));
            }
        }
    }
    let m = crossing_matrix(forest, drawing);
    for (t, row) in m.iter().enumerate() {
        if row[t] != 0 {
            return Err(format!("tree {t} crosses itself {} times", row[t]));
        }
    }
    Ok(())
}

/// `cro_{j-1}(p* ± x, p) = x`, and moving the upper end away from `p` while
/// the lower end stays at `p*` strictly increases the count, which is at
/// least the distance moved.
pub fn ideal_position_law_holds(forest: &LayeredForest, dp: &TwoTreeDp) -> Check {
    let ct = dp.crossing_table();
    let top = forest.layer_of(forest.tree(FIXED_TREE).root);
    for j in 2..=top {
        for p in 0..ct.num_positions(j) {
            let ps = ct.ideal_position(j, p);
            for q in 0..ct.num_positions(j - 1) {
                if ct.get(j - 1, q, p) != Some(q.abs_diff(ps) as u64) {
                    return Err(format!(
                        "layer {j}, p={p}, p*={ps}: cro({q}, {p}) = {:?}",
                        ct.get(j - 1, q, p)
                    ));
                }
            }
            for dir in [-1i64, 1] {
                let at = |x: i64| {
                    let z = p as i64 + dir * x;
                    if z < 0 {
                        None
                    } else {
                        ct.get(j - 1, ps, z as usize)
                    }
                };
                let mut x = 0;
                while let (Some(a), Some(b)) = (at(x), at(x + 1)) {
                    if b <= a || a < x as u64 {
                        return Err(format!("layer {j}, p={p}, dir {dir}, x={x}: {a} then {b}"));
                    }
                    x += 1;
                }
            }
        }
    }
    Ok(())
}

/// optpos intervals are contiguous, their endpoints weakly increase along each
/// layer of the free tree, and outside the interval `o` grows strictly, by at
/// least the distance to it.
pub fn optpos_structure_holds(forest: &LayeredForest, dp: &TwoTreeDp) -> Check {
    let orders = dp.layer_orders();
    let top = forest.layer_of(forest.tree(FREE_TREE).root);
    let table = dp.table();
    for j in 2..=top {
        let mut prev: Option<(usize, usize)> = None;
        for &v in orders.tree_layer(FREE_TREE, j) {
            let row = table.values(v).map_err(|e| e.to_string())?;
            let iv = table.optimal_positions(v).map_err(|e| e.to_string())?;
            let best = row[iv.min];
            if iv.range().any(|p| row[p] != best) {
                return Err(format!("optpos of {} is not an interval: {row:?}", forest.name(v)));
            }
            if let Some((lo, hi)) = prev {
                if iv.min < lo || iv.max < hi {
                    return Err(format!("optpos endpoints decrease at {}", forest.name(v)));
                }
            }
            prev = Some((iv.min, iv.max));
            for x in 0..iv.min {
                let (here, next) = (row[iv.min - x], row[iv.min - x - 1]);
                if next <= here || here - best < x as u64 {
                    return Err(format!("{} left of optpos: {row:?}", forest.name(v)));
                }
            }
            for x in 0..row.len() - 1 - iv.max {
                let (here, next) = (row[iv.max + x], row[iv.max + x + 1]);
                if next <= here || here - best < x as u64 {
                    return Err(format!("{} right of optpos: {row:?}", forest.name(v)));
                }
            }
        }
    }
    Ok(())
}

/// With `natpos(c, p)` the ideal position clamped into `optpos(c)`: natural
/// positions of siblings are ordered, `o[v, p]` decomposes over them, and they
/// are exactly the positions the program picked.
pub fn natural_positions_hold(forest: &LayeredForest, dp: &TwoTreeDp) -> Check {
    let orders = dp.layer_orders();
    let ct = dp.crossing_table();
    let table = dp.table();
    let top = forest.layer_of(forest.tree(FREE_TREE).root);
    for j in 3..=top {
        for &v in orders.tree_layer(FREE_TREE, j) {
            let row = table.values(v).map_err(|e| e.to_string())?;
            for (p, &o) in row.iter().enumerate() {
                let ps = ct.ideal_position(j, p);
                let mut sum = 0;
                let mut last = 0;
                for &c in forest.children(v) {
                    let iv = table.optimal_positions(c).map_err(|e| e.to_string())?;
                    let nat = ps.clamp(iv.min, iv.max);
                    if nat < last {
                        return Err(format!("natural positions below {} at p={p} decrease", forest.name(v)));
                    }
                    last = nat;
                    sum += table.values(c).map_err(|e| e.to_string())?[nat] + ct.get(j - 1, nat, p).unwrap();
                    let chosen = table.chosen_position(c, p).map_err(|e| e.to_string())?;
                    if chosen != nat {
                        return Err(format!("{} at p={p}: chose {chosen}, natural {nat}", forest.name(c)));
                    }
                }
                if sum != o {
                    return Err(format!("o[{}, {p}] = {o} but natural positions give {sum}", forest.name(v)));
                }
            }
        }
    }
    Ok(())
}

/// Incremental insertion tables against an explicit recount.
pub fn tables_match_recount(forest: &LayeredForest, grid: &Grid, root_order: &[VertexId]) -> Check {
    let tables = grid.insertion_tables();
    let orders = derive_layer_orders(forest);
    for v in forest.vertex_ids().filter(|&v| forest.layer_of(v) == 2) {
        for t in 0..forest.num_trees() {
            if t == forest.tree_of(v) {
                continue;
            }
            for p in 0..=orders.tree_layer(t, 2).len() {
                let direct = treecross::grid::insertion_crossings_direct(forest, root_order, v, t, p);
                if tables.get(v, t, p) != Some(direct) {
                    return Err(format!(
                        "cro^{}_{t}({p}): table {:?}, recount {direct}",
                        forest.name(v),
                        tables.get(v, t, p)
                    ));
                }
            }
        }
    }
    Ok(())
}

/// A uniformly shuffled s-t path through the grid.
pub fn random_path<R: Rng>(grid: &Grid, rng: &mut R) -> Vec<usize> {
    let mut steps: Vec<usize> = grid
        .dimensions()
        .iter()
        .enumerate()
        .flat_map(|(d, &n)| std::iter::repeat_n(d, n))
        .collect();
    steps.shuffle(rng);
    steps
}

/// A uniformly random order of the layer-3 vertices.
pub fn random_root_order<R: Rng>(forest: &LayeredForest, rng: &mut R) -> Vec<VertexId> {
    let mut roots = treecross::grid::layer3_vertices(forest);
    roots.shuffle(rng);
    roots
}
