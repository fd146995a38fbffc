//! JSON instance and drawing documents, SVG output, and the solver dispatch
//! shared by the command line and the browser demo.
//!
//! Instance documents look like
//!
//! ```json
//! {
//!   "layers": 3,
//!   "trees": [{ "root": "r", "edges": [["m", "r"], ["a", "m"]], "layer": {"r": 3, "m": 2, "a": 1} }],
//!   "leaf_order": ["a"],
//!   "root_order": ["r"],
//!   "constraints": [["x", "y"]]
//! }
//! ```
//!
//! Edges may span several layers; they are subdivided before solving.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constraint::{order_satisfies, Constraint, ConstraintError};
use crate::dp::{solve_two_trees, DpError};
use crate::forest::{
    count_crossings, subdivide_long_edges, validate_forest, Drawing, DrawingError, ForestError, LayeredForest,
    RawForest, RawTree, VertexId,
};
use crate::grid::{solve_three_layer, GridError, GridOptions, DEFAULT_MAX_GRID_CELLS};
use crate::oracle::{brute_force_min_with, OracleError, OracleOptions, DEFAULT_MAX_DRAWINGS};
use crate::Solution;

/// Horizontal distance between neighbouring vertices of a layer.
pub const X_SPACING: usize = 40;
/// Vertical distance between layers.
pub const Y_SPACING: usize = 80;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{path}: {message}")]
pub struct SchemaError {
    /// Location in the document, e.g. `trees[0].layer.a`; `.` for the root.
    pub path: String,
    pub message: String,
}

impl SchemaError {
    fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            path: path.into(),
            message: message.into(),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TreeDoc {
    root: String,
    edges: Vec<(String, String)>,
    layer: BTreeMap<String, usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDoc {
    layers: usize,
    trees: Vec<TreeDoc>,
    leaf_order: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    root_order: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    constraints: Vec<(String, String)>,
}

/// A parsed instance document. Vertex references are still names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub forest: RawForest,
    /// Prescribed order of the layer-3 vertices, for three-layer instances.
    pub root_order: Option<Vec<String>>,
    /// `(x, y)`: `x` must be left of `y`.
    pub constraints: Vec<(String, String)>,
}

impl Instance {
    pub fn new(forest: RawForest) -> Self {
        Self {
            forest,
            root_order: None,
            constraints: Vec::new(),
        }
    }
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, SchemaError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        let message = if inner.line() > 0 {
            format!("{} (line {}, column {})", strip_position(&inner.to_string()), inner.line(), inner.column())
        } else {
            inner.to_string()
        };
        SchemaError::new(path, message)
    })
}

fn strip_position(msg: &str) -> &str {
    msg.rfind(" at line ").map_or(msg, |i| &msg[..i])
}

pub fn parse_instance(text: &str) -> Result<Instance, SchemaError> {
    let doc: InstanceDoc = parse_json(text)?;
    if doc.layers < 2 {
        return Err(SchemaError::new("layers", format!("need at least 2 layers, got {}", doc.layers)));
    }
    if doc.trees.is_empty() {
        return Err(SchemaError::new("trees", "at least one tree is required"));
    }
    let mut trees = Vec::with_capacity(doc.trees.len());
    for (i, t) in doc.trees.into_iter().enumerate() {
        for (v, &j) in &t.layer {
            if j < 1 || j > doc.layers {
                return Err(SchemaError::new(
                    format!("trees[{i}].layer.{v}"),
                    format!("layer {j} outside 1..={}", doc.layers),
                ));
            }
        }
        trees.push(RawTree {
            root: t.root,
            edges: t.edges,
            layers: t.layer,
            dummies: Default::default(),
        });
    }
    Ok(Instance {
        forest: RawForest {
            num_layers: doc.layers,
            trees,
            leaf_order: doc.leaf_order,
        },
        root_order: doc.root_order,
        constraints: doc.constraints,
    })
}

/// Pretty-printed instance document. Dummy markers are not part of the
/// format; dummies are written as ordinary vertices.
pub fn emit_instance(instance: &Instance) -> String {
    let doc = InstanceDoc {
        layers: instance.forest.num_layers,
        trees: instance
            .forest
            .trees
            .iter()
            .map(|t| TreeDoc {
                root: t.root.clone(),
                edges: t.edges.clone(),
                layer: t.layers.clone(),
            })
            .collect(),
        leaf_order: instance.forest.leaf_order.clone(),
        root_order: instance.root_order.clone(),
        constraints: instance.constraints.clone(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("instance documents serialize");
    s.push('\n');
    s
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("invalid instance: {0}")]
    Schema(#[from] SchemaError),
    #[error("invalid forest: {0}")]
    Forest(#[from] ForestError),
    #[error("invalid constraint: {0}")]
    Constraint(#[from] ConstraintError),
    #[error("invalid root order: {0}")]
    RootOrder(String),
    #[error("invalid drawing: {0}")]
    Drawing(#[from] DrawingError),
    #[error("{0}")]
    Unsupported(String),
    #[error("no drawing satisfies the constraints")]
    Infeasible,
    #[error("size guard tripped: {0}")]
    TooLarge(String),
}

impl SolveError {
    /// Process exit status: 2 invalid input, 3 infeasible, 4 size guard.
    pub fn exit_code(&self) -> i32 {
        match self {
            SolveError::Infeasible => 3,
            SolveError::TooLarge(_) => 4,
            _ => 2,
        }
    }
}

impl From<GridError> for SolveError {
    fn from(e: GridError) -> Self {
        match e {
            GridError::Infeasible => SolveError::Infeasible,
            GridError::GridTooLarge { .. } => SolveError::TooLarge(e.to_string()),
            GridError::InvalidRootOrder(m) => SolveError::RootOrder(m),
            other => SolveError::Unsupported(other.to_string()),
        }
    }
}

impl From<OracleError> for SolveError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::Infeasible => SolveError::Infeasible,
            OracleError::TooLarge(_) => SolveError::TooLarge(e.to_string()),
        }
    }
}

impl From<DpError> for SolveError {
    fn from(e: DpError) -> Self {
        SolveError::Unsupported(e.to_string())
    }
}

/// Instance with long edges subdivided and every name resolved.
#[derive(Clone, Debug)]
pub struct Prepared {
    pub forest: LayeredForest,
    pub root_order: Option<Vec<VertexId>>,
    pub constraints: Vec<Constraint>,
}

fn resolve_root_order(forest: &LayeredForest, names: &[String]) -> Result<Vec<VertexId>, SolveError> {
    if forest.num_layers() != 3 {
        return Err(SolveError::RootOrder(format!(
            "a root order only applies to three-layer instances, this one has {} layers",
            forest.num_layers()
        )));
    }
    names
        .iter()
        .map(|n| match forest.id(n) {
            Some(v) if forest.layer_of(v) == 3 => Ok(v),
            Some(_) => Err(SolveError::RootOrder(format!("{n:?} is not on layer 3"))),
            None => Err(SolveError::RootOrder(format!("unknown vertex {n:?}"))),
        })
        .collect()
}

/// Subdivides, validates and resolves an instance. `root_order` overrides the
/// one in the document.
pub fn prepare(instance: &Instance, root_order: Option<&[String]>) -> Result<Prepared, SolveError> {
    let forest = validate_forest(&subdivide_long_edges(&instance.forest))?;
    let root_order = match root_order.or(instance.root_order.as_deref()) {
        Some(names) => Some(resolve_root_order(&forest, names)?),
        None => None,
    };
    let constraints = instance
        .constraints
        .iter()
        .map(|(x, y)| Constraint::from_names(&forest, x, y))
        .collect::<Result<_, _>>()?;
    Ok(Prepared {
        forest,
        root_order,
        constraints,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    /// Picks one of the others from the shape of the instance.
    Auto,
    /// Two trees, any number of layers.
    Dp2,
    /// Any number of trees, at most three layers.
    Grid3,
    /// Exhaustive search.
    Oracle,
    /// A single tree drawn by its own embedding.
    Embedding,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Auto => "auto",
            Algorithm::Dp2 => "dp2",
            Algorithm::Grid3 => "grid3",
            Algorithm::Oracle => "oracle",
            Algorithm::Embedding => "embedding",
        }
    }
}

impl std::str::FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "auto" => Ok(Algorithm::Auto),
            "dp2" => Ok(Algorithm::Dp2),
            "grid3" => Ok(Algorithm::Grid3),
            "oracle" => Ok(Algorithm::Oracle),
            "embedding" => Ok(Algorithm::Embedding),
            _ => Err(format!("unknown algorithm {s:?} (expected auto, dp2, grid3, oracle or embedding)")),
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub algorithm: Algorithm,
    pub max_grid_cells: u128,
    pub max_oracle_drawings: u128,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            algorithm: Algorithm::Auto,
            max_grid_cells: DEFAULT_MAX_GRID_CELLS,
            max_oracle_drawings: DEFAULT_MAX_DRAWINGS,
        }
    }
}

/// The algorithm `Auto` resolves to.
pub fn choose_algorithm(p: &Prepared) -> Result<Algorithm, SolveError> {
    let (k, l) = (p.forest.num_trees(), p.forest.num_layers());
    if k == 1 {
        Ok(Algorithm::Embedding)
    } else if k == 2 && p.constraints.is_empty() && p.root_order.is_none() {
        Ok(Algorithm::Dp2)
    } else if l <= 3 {
        Ok(Algorithm::Grid3)
    } else {
        Err(SolveError::Unsupported(format!(
            "no exact algorithm for {k} trees on {l} layers{}: the case of three or more trees on four or \
             more layers is open; use --algorithm oracle for small inputs",
            if k == 2 { " with constraints" } else { "" }
        )))
    }
}

pub fn solve(p: &Prepared, options: &SolveOptions) -> Result<(Algorithm, Solution), SolveError> {
    let algorithm = match options.algorithm {
        Algorithm::Auto => choose_algorithm(p)?,
        a => a,
    };
    let solution = match algorithm {
        Algorithm::Auto => unreachable!("resolved above"),
        Algorithm::Embedding => {
            if p.forest.num_trees() != 1 {
                return Err(SolveError::Unsupported(format!(
                    "the embedding is only optimal for a single tree, got {}",
                    p.forest.num_trees()
                )));
            }
            let drawing = Drawing::by_leftmost_leaf(&p.forest);
            let n = p.forest.num_vertices();
            if let Some(r) = &p.root_order {
                if drawing.layer(3) != r.as_slice() {
                    return Err(SolveError::Infeasible);
                }
            }
            if !drawing.layers().iter().all(|l| order_satisfies(l, &p.constraints, n)) {
                return Err(SolveError::Infeasible);
            }
            Solution { drawing, crossings: 0 }
        }
        Algorithm::Dp2 => {
            if !p.constraints.is_empty() || p.root_order.is_some() {
                return Err(SolveError::Unsupported(
                    "dp2 supports neither constraints nor a fixed root order; use grid3 or oracle".into(),
                ));
            }
            solve_two_trees(&p.forest)?
        }
        Algorithm::Grid3 => solve_three_layer(
            &p.forest,
            &p.constraints,
            p.root_order.as_deref(),
            &GridOptions {
                max_cells: options.max_grid_cells,
            },
        )?,
        Algorithm::Oracle => {
            let mut opts = OracleOptions {
                max_drawings: options.max_oracle_drawings,
                ..OracleOptions::default()
            };
            if let Some(r) = &p.root_order {
                opts.fixed_layers.insert(3, r.clone());
            }
            brute_force_min_with(&p.forest, &p.constraints, &opts)?
        }
    };
    Ok((algorithm, solution))
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct VertexDoc {
    pub id: String,
    pub x: usize,
    pub y: usize,
    pub tree: usize,
    pub dummy: bool,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct LayerDoc {
    pub layer: usize,
    pub vertices: Vec<VertexDoc>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(untagged)]
enum LayerInput {
    Names(Vec<String>),
    Full(LayerDoc),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DrawingDoc<L> {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    algorithm: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    crossings: Option<u64>,
    layers: Vec<L>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Svg,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "svg" => Ok(Format::Svg),
            _ => Err(format!("unknown format {s:?} (expected json or svg)")),
        }
    }
}

pub fn emit_drawing(forest: &LayeredForest, drawing: &Drawing, crossings: u64, algorithm: &str, format: Format) -> String {
    match format {
        Format::Json => drawing_json(forest, drawing, crossings, algorithm),
        Format::Svg => drawing_svg(forest, drawing, crossings, algorithm),
    }
}

fn drawing_json(forest: &LayeredForest, drawing: &Drawing, crossings: u64, algorithm: &str) -> String {
    let layers = drawing
        .layers()
        .iter()
        .enumerate()
        .map(|(j, l)| LayerDoc {
            layer: j + 1,
            vertices: l
                .iter()
                .enumerate()
                .map(|(i, &v)| VertexDoc {
                    id: forest.name(v).to_owned(),
                    x: i * X_SPACING,
                    y: (j + 1) * Y_SPACING,
                    tree: forest.tree_of(v),
                    dummy: forest.vertex(v).dummy,
                })
                .collect(),
        })
        .collect();
    let doc = DrawingDoc {
        algorithm: Some(algorithm.to_owned()),
        crossings: Some(crossings),
        layers,
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("drawing documents serialize");
    s.push('\n');
    s
}

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2",
];

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

fn drawing_svg(forest: &LayeredForest, drawing: &Drawing, crossings: u64, algorithm: &str) -> String {
    let pos = drawing.positions(forest.num_vertices());
    let xy = |v: VertexId| (pos[v.index()] * X_SPACING, forest.layer_of(v) * Y_SPACING);
    let widest = drawing.layers().iter().map(Vec::len).max().unwrap_or(1).max(1);
    let margin = 30;
    let (min_x, min_y) = (-(margin as i64), (Y_SPACING - margin) as i64);
    let width = (widest - 1) * X_SPACING + 2 * margin;
    let height = (drawing.num_layers().max(1) - 1) * Y_SPACING + 2 * margin;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{min_x} {min_y} {width} {height}" width="{width}" height="{height}" font-family="sans-serif" font-size="9">"#
    );
    let _ = writeln!(s, "<title>{} crossings ({})</title>", crossings, escape(algorithm));
    s.push_str("<g stroke-width=\"1.5\">\n");
    for (child, parent) in forest.edges() {
        let ((x1, y1), (x2, y2)) = (xy(child), xy(parent));
        let color = PALETTE[forest.tree_of(child) % PALETTE.len()];
        let _ = writeln!(s, r#"<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="{color}"/>"#);
    }
    s.push_str("</g>\n<g>\n");
    for layer in drawing.layers() {
        for &v in layer {
            let (x, y) = xy(v);
            let color = PALETTE[forest.tree_of(v) % PALETTE.len()];
            if forest.vertex(v).dummy {
                let _ = writeln!(s, r#"<circle cx="{x}" cy="{y}" r="2" fill="{color}"/>"#);
            } else {
                let name = escape(forest.name(v));
                let _ = writeln!(s, r#"<circle cx="{x}" cy="{y}" r="6" fill="{color}"><title>{name}</title></circle>"#);
                let _ = writeln!(s, r#"<text x="{x}" y="{}" text-anchor="middle">{name}</text>"#, y + 18);
            }
        }
    }
    s.push_str("</g>\n</svg>\n");
    s
}

/// A drawing document: layers are either plain name lists or the objects
/// [`emit_drawing`] writes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedDrawing {
    pub algorithm: Option<String>,
    pub crossings: Option<u64>,
    pub layers: Vec<Vec<String>>,
}

pub fn parse_drawing(text: &str) -> Result<ParsedDrawing, SchemaError> {
    let doc: DrawingDoc<LayerInput> = parse_json(text)?;
    let mut layers = Vec::with_capacity(doc.layers.len());
    for (j, l) in doc.layers.into_iter().enumerate() {
        layers.push(match l {
            LayerInput::Names(names) => names,
            LayerInput::Full(full) => {
                if full.layer != j + 1 {
                    return Err(SchemaError::new(
                        format!("layers[{j}].layer"),
                        format!("expected layer {}, found {}", j + 1, full.layer),
                    ));
                }
                full.vertices.into_iter().map(|v| v.id).collect()
            }
        });
    }
    Ok(ParsedDrawing {
        algorithm: doc.algorithm,
        crossings: doc.crossings,
        layers,
    })
}

/// Validates a drawing against a prepared instance (including its root order
/// and constraints) and counts its crossings.
pub fn check(p: &Prepared, drawing: &ParsedDrawing) -> Result<(Drawing, u64), SolveError> {
    let d = Drawing::from_names(&p.forest, &drawing.layers)?;
    let crossings = count_crossings(&p.forest, &d)?;
    if let Some(r) = &p.root_order {
        if d.layer(3) != r.as_slice() {
            return Err(SolveError::Infeasible);
        }
    }
    let n = p.forest.num_vertices();
    if !d.layers().iter().all(|l| order_satisfies(l, &p.constraints, n)) {
        return Err(SolveError::Infeasible);
    }
    Ok((d, crossings))
}
