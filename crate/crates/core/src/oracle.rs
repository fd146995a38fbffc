//! Brute-force reference solver: tries every admissible order on every free
//! layer and keeps the best. Exponential; meant for small instances and as the
//! ground truth in tests.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::constraint::{order_satisfies, Constraint};
use crate::forest::{derive_layer_orders, Drawing, LayerOrders, LayeredForest, VertexId};
use crate::Solution;

/// Default cap on the number of drawings the oracle will enumerate.
pub const DEFAULT_MAX_DRAWINGS: u128 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("brute force would enumerate about {0} drawings, above the configured cap")]
    TooLarge(u128),
    #[error("no drawing satisfies the constraints")]
    Infeasible,
}

#[derive(Clone, Debug)]
pub struct OracleOptions {
    pub max_drawings: u128,
    /// Layers whose order is prescribed instead of enumerated.
    pub fixed_layers: BTreeMap<usize, Vec<VertexId>>,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self {
            max_drawings: DEFAULT_MAX_DRAWINGS,
            fixed_layers: BTreeMap::new(),
        }
    }
}

/// All interleavings of the per-tree orders of one layer, i.e. all linear
/// extensions of the layer's partial order. Emitted in lexicographic order of
/// the sequence of tree indices.
pub struct LayerExtensions {
    sequences: Vec<Vec<VertexId>>,
    labels: Vec<usize>,
    done: bool,
}

impl Iterator for LayerExtensions {
    type Item = Vec<VertexId>;

    fn next(&mut self) -> Option<Vec<VertexId>> {
        if self.done {
            return None;
        }
        let mut next_idx = vec![0; self.sequences.len()];
        let order = self
            .labels
            .iter()
            .map(|&t| {
                let v = self.sequences[t][next_idx[t]];
                next_idx[t] += 1;
                v
            })
            .collect();
        self.done = !next_permutation(&mut self.labels);
        Some(order)
    }
}

/// Advances to the next lexicographic permutation of a multiset; returns
/// `false` (leaving the slice unchanged) after the last one.
fn next_permutation(xs: &mut [usize]) -> bool {
    let Some(i) = xs.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = xs.iter().rposition(|&x| x > xs[i]).unwrap();
    xs.swap(i, j);
    xs[i + 1..].reverse();
    true
}

pub fn enumerate_layer_extensions(orders: &LayerOrders, layer: usize) -> LayerExtensions {
    let sequences: Vec<Vec<VertexId>> = (0..orders.num_trees())
        .map(|t| orders.tree_layer(t, layer).to_vec())
        .collect();
    let labels = sequences
        .iter()
        .enumerate()
        .flat_map(|(t, s)| std::iter::repeat_n(t, s.len()))
        .collect();
    LayerExtensions {
        sequences,
        labels,
        done: false,
    }
}

/// `(Σ parts)! / Π parts!`, saturating.
pub fn multinomial(parts: &[usize]) -> u128 {
    let mut acc: u128 = 1;
    let mut n: u128 = 0;
    for &p in parts {
        for i in 1..=p as u128 {
            n += 1;
            // acc holds prior * C(m + i - 1, i - 1), so the division is exact
            acc = match acc.checked_mul(n) {
                Some(x) => x / i,
                None => return u128::MAX,
            };
        }
    }
    acc
}

pub fn brute_force_min(forest: &LayeredForest, constraints: &[Constraint]) -> Result<Solution, OracleError> {
    brute_force_min_with(forest, constraints, &OracleOptions::default())
}

pub fn brute_force_min_with(
    forest: &LayeredForest,
    constraints: &[Constraint],
    options: &OracleOptions,
) -> Result<Solution, OracleError> {
    let orders = derive_layer_orders(forest);
    let layers = forest.num_layers();
    let n = forest.num_vertices();

    let mut estimate: u128 = 1;
    for j in 2..=layers {
        if !options.fixed_layers.contains_key(&j) {
            estimate = estimate.saturating_mul(multinomial(&orders.layer_sizes(j)));
        }
    }
    if estimate > options.max_drawings {
        return Err(OracleError::TooLarge(estimate));
    }

    let leaf_ok = order_satisfies(forest.leaf_order(), constraints, n);
    let mut choices: Vec<Vec<Vec<VertexId>>> = vec![vec![forest.leaf_order().to_vec()]];
    for j in 2..=layers {
        let candidates: Vec<Vec<VertexId>> = match options.fixed_layers.get(&j) {
            Some(order) => vec![order.clone()],
            None => enumerate_layer_extensions(&orders, j).collect(),
        };
        let kept: Vec<_> = candidates
            .into_iter()
            .filter(|o| order_satisfies(o, constraints, n))
            .collect();
        choices.push(kept);
    }
    if !leaf_ok || choices.iter().any(Vec::is_empty) {
        return Err(OracleError::Infeasible);
    }

    // every pair of edges in one strip that does not share a parent
    let mut pairs: Vec<Vec<[VertexId; 4]>> = Vec::with_capacity(layers);
    for j in 1..layers {
        let edges: Vec<_> = forest.edges_from_layer(j).collect();
        let mut strip = Vec::new();
        for (i, &(u1, v1)) in edges.iter().enumerate() {
            for &(u2, v2) in &edges[i + 1..] {
                if v1 != v2 {
                    strip.push([u1, v1, u2, v2]);
                }
            }
        }
        pairs.push(strip);
    }

    let mut pos = vec![0usize; n];
    let mut pick = vec![0usize; layers];
    let place = |pos: &mut Vec<usize>, order: &[VertexId]| {
        for (i, v) in order.iter().enumerate() {
            pos[v.index()] = i;
        }
    };
    for c in &choices {
        place(&mut pos, &c[0]);
    }

    let mut best: Option<(u64, Vec<usize>)> = None;
    loop {
        let total: u64 = pairs
            .iter()
            .flatten()
            .filter(|[u1, v1, u2, v2]| {
                (pos[u1.index()] < pos[u2.index()]) != (pos[v1.index()] < pos[v2.index()])
            })
            .count() as u64;
        if best.as_ref().is_none_or(|(b, _)| total < *b) {
            best = Some((total, pick.clone()));
        }

        // odometer over layers 2..=l, lowest layer fastest
        let mut j = 1;
        loop {
            if j == layers {
                let (crossings, pick) = best.expect("at least one drawing");
                let drawing = Drawing::new(pick.iter().enumerate().map(|(j, &p)| choices[j][p].clone()).collect());
                return Ok(Solution { drawing, crossings });
            }
            pick[j] += 1;
            if pick[j] < choices[j].len() {
                place(&mut pos, &choices[j][pick[j]]);
                break;
            }
            pick[j] = 0;
            place(&mut pos, &choices[j][0]);
            j += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::tests::{forest, tree};
    use crate::forest::{count_crossings, validate_forest};
    use std::collections::HashSet;

    fn sized(sizes: &[usize]) -> LayeredForest {
        let trees = sizes
            .iter()
            .enumerate()
            .map(|(t, &m)| {
                let root = format!("r{t}");
                let mut edges = Vec::new();
                let mut layers = vec![(root.clone(), 3)];
                for i in 0..m {
                    let mid = format!("m{t}_{i}");
                    let leaf = format!("l{t}_{i}");
                    edges.push((mid.clone(), root.clone()));
                    edges.push((leaf.clone(), mid.clone()));
                    layers.push((mid, 2));
                    layers.push((leaf, 1));
                }
                let e: Vec<(&str, &str)> = edges.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
                let l: Vec<(&str, usize)> = layers.iter().map(|(a, b)| (a.as_str(), *b)).collect();
                tree(&root, &e, &l)
            })
            .collect();
        let leaves: Vec<String> = sizes
            .iter()
            .enumerate()
            .flat_map(|(t, &m)| (0..m).map(move |i| format!("l{t}_{i}")))
            .collect();
        let leaves: Vec<&str> = leaves.iter().map(String::as_str).collect();
        validate_forest(&forest(3, trees, &leaves)).unwrap()
    }

    #[test]
    fn extension_counts() {
        for (sizes, expected) in [(vec![1, 1], 2), (vec![2, 1], 3), (vec![2, 2], 6), (vec![3, 2, 1], 60)] {
            let f = sized(&sizes);
            let orders = derive_layer_orders(&f);
            let all: Vec<_> = enumerate_layer_extensions(&orders, 2).collect();
            assert_eq!(all.len(), expected);
            assert_eq!(multinomial(&sizes) as usize, expected);
            let distinct: HashSet<_> = all.iter().cloned().collect();
            assert_eq!(distinct.len(), expected);
            for ext in &all {
                for t in 0..sizes.len() {
                    let sub: Vec<_> = ext.iter().copied().filter(|&v| f.tree_of(v) == t).collect();
                    assert_eq!(sub.as_slice(), orders.tree_layer(t, 2));
                }
            }
        }
    }

    #[test]
    fn multinomial_values() {
        assert_eq!(multinomial(&[]), 1);
        assert_eq!(multinomial(&[0, 0]), 1);
        assert_eq!(multinomial(&[5]), 1);
        assert_eq!(multinomial(&[2, 2, 2]), 90);
        assert_eq!(multinomial(&[200, 200]), u128::MAX);
    }

    #[test]
    fn forced_crossing_and_single_tree() {
        let a = tree("ra", &[("a1", "ra"), ("a2", "ra")], &[("ra", 2), ("a1", 1), ("a2", 1)]);
        let b = tree("rb", &[("b1", "rb"), ("b2", "rb")], &[("rb", 2), ("b1", 1), ("b2", 1)]);
        let f = validate_forest(&forest(2, vec![a.clone(), b], &["a1", "b1", "a2", "b2"])).unwrap();
        let sol = brute_force_min(&f, &[]).unwrap();
        assert_eq!(sol.crossings, 1);
        assert_eq!(count_crossings(&f, &sol.drawing).unwrap(), 1);

        let one = validate_forest(&forest(2, vec![a], &["a1", "a2"])).unwrap();
        assert_eq!(brute_force_min(&one, &[]).unwrap().crossings, 0);
    }

    #[test]
    fn guard_and_infeasible() {
        let f = sized(&[6, 6, 6]);
        let opts = OracleOptions {
            max_drawings: 1000,
            ..OracleOptions::default()
        };
        assert!(matches!(brute_force_min_with(&f, &[], &opts), Err(OracleError::TooLarge(n)) if n > 1000));

        let f = sized(&[1, 1]);
        let id = |n| f.id(n).unwrap();
        let c = [
            Constraint { before: id("m0_0"), after: id("m1_0") },
            Constraint { before: id("m1_0"), after: id("m0_0") },
        ];
        assert_eq!(brute_force_min(&f, &c).unwrap_err(), OracleError::Infeasible);
    }
}
