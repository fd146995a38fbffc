//! Seeded random instances.
//!
//! Randomness comes from ChaCha8 (`rand_chacha::ChaCha8Rng::seed_from_u64`),
//! so an instance is reproducible from its seed on every platform.
//!
//! Trees are grown by random recursive attachment: starting from a path from
//! the root down to layer 1, a uniformly random internal vertex receives a new
//! child, which is extended by a path down to layer 1. Each tree's leaves are
//! then read in embedding order, and the k leaf sequences are riffled together
//! while preserving every sequence's internal order. Such a riffle never breaks
//! the per-tree contiguity requirement, so every output is valid as is.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::forest::{validate_forest, LayeredForest, RawForest, RawTree};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenError {
    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenParams {
    pub trees: usize,
    pub layers: usize,
    /// Total number of vertices; every tree gets at least one.
    pub vertices: usize,
    /// 0 concatenates the leaf sequences block by block, 1 riffles them uniformly.
    pub interleave_bias: f64,
}

impl GenParams {
    fn check(&self) -> Result<(), GenError> {
        if self.trees < 1 {
            return Err(GenError::InvalidParams("need at least one tree".into()));
        }
        if self.layers < 2 {
            return Err(GenError::InvalidParams("need at least two layers".into()));
        }
        if self.vertices < self.trees {
            return Err(GenError::InvalidParams(format!(
                "{} vertices cannot fill {} trees",
                self.vertices, self.trees
            )));
        }
        if !(0.0..=1.0).contains(&self.interleave_bias) {
            return Err(GenError::InvalidParams(format!(
                "interleave bias {} outside [0, 1]",
                self.interleave_bias
            )));
        }
        Ok(())
    }
}

/// Arena-built tree; `children` are kept in embedding order.
struct Growing {
    layer: Vec<usize>,
    children: Vec<Vec<usize>>,
}

impl Growing {
    fn push(&mut self, layer: usize) -> usize {
        self.layer.push(layer);
        self.children.push(Vec::new());
        self.layer.len() - 1
    }

    /// Attaches a new child below `parent` at a random slot and continues with
    /// a path down to layer 1. Returns the number of new vertices.
    fn attach_chain(&mut self, parent: usize, rng: &mut ChaCha8Rng) -> usize {
        let mut above = parent;
        let mut added = 0;
        for layer in (1..self.layer[parent]).rev() {
            let v = self.push(layer);
            let slot = if above == parent {
                rng.gen_range(0..=self.children[parent].len())
            } else {
                0
            };
            self.children[above].insert(slot, v);
            above = v;
            added += 1;
        }
        added
    }

    fn leaves(&self, v: usize, out: &mut Vec<usize>) {
        if self.children[v].is_empty() {
            out.push(v);
        }
        for &c in &self.children[v] {
            self.leaves(c, out);
        }
    }
}

fn grow_tree(budget: usize, layers: usize, rng: &mut ChaCha8Rng) -> Growing {
    let mut t = Growing {
        layer: Vec::new(),
        children: Vec::new(),
    };
    if budget == 1 {
        t.push(1);
        return t;
    }
    let root_layer = rng.gen_range(2..=layers.min(budget));
    let root = t.push(root_layer);
    let mut remaining = budget - t.attach_chain(root, rng) - 1;
    while remaining > 0 {
        let candidates: Vec<usize> = (0..t.layer.len())
            .filter(|&v| t.layer[v] >= 2 && t.layer[v] - 1 <= remaining)
            .collect();
        let parent = *candidates.choose(rng).expect("layer-2 vertices always fit");
        remaining -= t.attach_chain(parent, rng);
    }
    t
}

fn riffle(sequences: &[Vec<String>], bias: f64, rng: &mut ChaCha8Rng) -> Vec<String> {
    let mut next = vec![0usize; sequences.len()];
    let mut left: usize = sequences.iter().map(Vec::len).sum();
    let mut out = Vec::with_capacity(left);
    let mut current: Option<usize> = None;
    while left > 0 {
        let exhausted = current.is_none_or(|c| next[c] == sequences[c].len());
        if exhausted || rng.gen::<f64>() < bias {
            // pick a sequence with probability proportional to what it has left
            let mut r = rng.gen_range(0..left);
            for (i, s) in sequences.iter().enumerate() {
                let rest = s.len() - next[i];
                if r < rest {
                    current = Some(i);
                    break;
                }
                r -= rest;
            }
        }
        let c = current.expect("picked above");
        out.push(sequences[c][next[c]].clone());
        next[c] += 1;
        left -= 1;
    }
    out
}

fn finish(trees: Vec<Growing>, layers: usize, bias: f64, rng: &mut ChaCha8Rng) -> RawForest {
    let mut raw_trees = Vec::with_capacity(trees.len());
    let mut sequences = Vec::with_capacity(trees.len());
    for (i, t) in trees.iter().enumerate() {
        let name = |v: usize| format!("t{i}v{v}");
        let mut raw = RawTree {
            root: name(0),
            ..RawTree::default()
        };
        for v in 0..t.layer.len() {
            raw.layers.insert(name(v), t.layer[v]);
            for &c in &t.children[v] {
                raw.edges.push((name(c), name(v)));
            }
        }
        let mut leaves = Vec::new();
        t.leaves(0, &mut leaves);
        sequences.push(leaves.into_iter().map(name).collect());
        raw_trees.push(raw);
    }
    RawForest {
        num_layers: layers,
        trees: raw_trees,
        leaf_order: riffle(&sequences, bias, rng),
    }
}

/// Raw random instance, as it would be written to an instance file.
pub fn gen_raw_instance(seed: u64, params: &GenParams) -> Result<RawForest, GenError> {
    params.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut budgets = vec![1usize; params.trees];
    for _ in params.trees..params.vertices {
        budgets[rng.gen_range(0..params.trees)] += 1;
    }
    let trees = budgets
        .into_iter()
        .map(|b| grow_tree(b, params.layers, &mut rng))
        .collect();
    Ok(finish(trees, params.layers, params.interleave_bias, &mut rng))
}

pub fn gen_instance(seed: u64, params: &GenParams) -> Result<LayeredForest, GenError> {
    let raw = gen_raw_instance(seed, params)?;
    Ok(validate_forest(&raw).expect("generated forests are valid"))
}

/// Three-layer instance in which every tree has its root on layer 3 and
/// exactly `mids` vertices on layer 2, each with 1 to `max_leaves` leaves.
pub fn gen_three_layer_raw(
    seed: u64,
    trees: usize,
    mids: usize,
    max_leaves: usize,
    interleave_bias: f64,
) -> Result<RawForest, GenError> {
    if trees < 1 || mids < 1 || max_leaves < 1 {
        return Err(GenError::InvalidParams(
            "trees, mids and max_leaves must be positive".into(),
        ));
    }
    if !(0.0..=1.0).contains(&interleave_bias) {
        return Err(GenError::InvalidParams(format!(
            "interleave bias {interleave_bias} outside [0, 1]"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let grown = (0..trees)
        .map(|_| {
            let mut t = Growing {
                layer: Vec::new(),
                children: Vec::new(),
            };
            let root = t.push(3);
            for _ in 0..mids {
                let m = t.push(2);
                t.children[root].push(m);
                for _ in 0..rng.gen_range(1..=max_leaves) {
                    let l = t.push(1);
                    t.children[m].push(l);
                }
            }
            t
        })
        .collect();
    Ok(finish(grown, 3, interleave_bias, &mut rng))
}

pub fn gen_three_layer(
    seed: u64,
    trees: usize,
    mids: usize,
    max_leaves: usize,
    interleave_bias: f64,
) -> Result<LayeredForest, GenError> {
    let raw = gen_three_layer_raw(seed, trees, mids, max_leaves, interleave_bias)?;
    Ok(validate_forest(&raw).expect("generated forests are valid"))
}
