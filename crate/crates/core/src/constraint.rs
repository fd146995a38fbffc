//! Extra ordering requirements between vertices of different trees on one layer.

use thiserror::Error;

use crate::forest::{LayeredForest, VertexId};

/// `before` must be placed to the left of `after` on their common layer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Constraint {
    pub before: VertexId,
    pub after: VertexId,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstraintError {
    #[error("constraint names unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("constraint {before:?} < {after:?} relates vertices on different layers")]
    LayerMismatch { before: String, after: String },
}

impl Constraint {
    pub fn from_names(forest: &LayeredForest, before: &str, after: &str) -> Result<Self, ConstraintError> {
        let lookup = |n: &str| forest.id(n).ok_or_else(|| ConstraintError::UnknownVertex(n.to_owned()));
        let c = Self {
            before: lookup(before)?,
            after: lookup(after)?,
        };
        if forest.layer_of(c.before) != forest.layer_of(c.after) {
            return Err(ConstraintError::LayerMismatch {
                before: before.to_owned(),
                after: after.to_owned(),
            });
        }
        Ok(c)
    }

    pub fn layer(&self, forest: &LayeredForest) -> usize {
        forest.layer_of(self.before)
    }
}

/// Whether `order` (one layer, left to right) respects every constraint whose
/// endpoints both appear in it.
pub fn order_satisfies(order: &[VertexId], constraints: &[Constraint], num_vertices: usize) -> bool {
    if constraints.is_empty() {
        return true;
    }
    let mut pos = vec![usize::MAX; num_vertices];
    for (i, v) in order.iter().enumerate() {
        pos[v.index()] = i;
    }
    constraints.iter().all(|c| {
        let (a, b) = (pos[c.before.index()], pos[c.after.index()]);
        a == usize::MAX || b == usize::MAX || a < b
    })
}
