//! JSON documents for graphs, covers, functions and fixture metadata.
//!
//! Rationals are always strings (`"a/b"` or `"a"`). Serialization is
//! canonical: ids sorted, rationals reduced, two-space indentation and a
//! trailing newline, so `serialize ∘ parse` is the identity on canonical
//! files.

mod render;

pub use render::{render_dot, render_tikz};

use crate::different_fn::{DifferentError, PLFunction};
use crate::harmonic_cover::{CoverError, CoverMap};
use crate::metric_graph::{GraphError, MetricGraph};
use crate::rational::{self, Rational};
use crate::simultaneous::{Locus, SimultaneousSkeleton};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("`{text}` in {field} is not a rational number")]
    BadRational { field: String, text: String },
    #[error("unknown locus `{0}`")]
    BadLocus(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Function(#[from] DifferentError),
    #[error("{path}: {message}")]
    File { path: String, message: String },
}

impl IoError {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            IoError::Json(_) => "malformed-json",
            IoError::BadRational { .. } => "bad-rational",
            IoError::BadLocus(_) => "bad-locus",
            IoError::Graph(e)
            | IoError::Cover(CoverError::Graph(e))
            | IoError::Function(DifferentError::Graph(e)) => graph_code(e),
            IoError::Cover(_) | IoError::Function(DifferentError::Cover(_)) => "invalid-cover",
            IoError::Function(_) => "function-mismatch",
            IoError::File { .. } => "file",
        }
    }
}

fn graph_code(e: &GraphError) -> &'static str {
    match e {
        GraphError::UnknownVertex(_) | GraphError::UnknownEdge(_) => "unknown-id",
        GraphError::NonPositiveLength { .. } => "non-positive-length",
        GraphError::Disconnected(_) => "disconnected",
        GraphError::DuplicateVertex(_) | GraphError::DuplicateEdge(_) => "duplicate-id",
        _ => "invalid-graph",
    }
}

impl From<serde_json::Error> for IoError {
    fn from(e: serde_json::Error) -> Self {
        IoError::Json(e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexDocument {
    pub genus: u64,
    pub id: String,
    pub mult: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDocument {
    pub endpoints: [String; 2],
    pub id: String,
    pub length: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    pub edges: Vec<EdgeDocument>,
    pub vertices: Vec<VertexDocument>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileReference {
    pub file: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GraphSource {
    File(FileReference),
    Inline(GraphDocument),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverDocument {
    pub base: GraphSource,
    pub degree: u64,
    pub edge_map: BTreeMap<String, String>,
    pub total: GraphSource,
    pub vertex_map: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionDocument {
    pub values: BTreeMap<String, String>,
}

/// Metadata of a shipped simultaneous skeleton.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SkeletonDocument {
    pub base_log_different: u64,
    pub curve_chi: i64,
    pub markings: BTreeMap<String, String>,
    pub valuation_bound: u64,
}

fn to_text<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

fn parse_rational(field: &str, text: &str) -> Result<Rational, IoError> {
    rational::parse(text).ok_or_else(|| IoError::BadRational {
        field: field.to_string(),
        text: text.to_string(),
    })
}

pub fn graph_document(graph: &MetricGraph) -> GraphDocument {
    let mut vertices: Vec<VertexDocument> = graph
        .vertices()
        .iter()
        .map(|v| VertexDocument {
            genus: v.genus,
            id: v.id.clone(),
            mult: v.mult,
        })
        .collect();
    vertices.sort_by(|a, b| a.id.cmp(&b.id));
    let mut edges: Vec<EdgeDocument> = graph
        .edges()
        .iter()
        .map(|e| {
            let (a, b) = graph.endpoint_ids(e);
            EdgeDocument {
                endpoints: [a.to_string(), b.to_string()],
                id: e.id.clone(),
                length: rational::format(&e.length),
            }
        })
        .collect();
    edges.sort_by(|a, b| a.id.cmp(&b.id));
    GraphDocument { edges, vertices }
}

pub fn graph_from_document(doc: &GraphDocument) -> Result<MetricGraph, IoError> {
    let mut b = MetricGraph::builder();
    for v in &doc.vertices {
        b.add_vertex(v.id.clone(), v.mult, v.genus);
    }
    for e in &doc.edges {
        let length = parse_rational(&format!("edge `{}`", e.id), &e.length)?;
        b.add_edge(
            e.id.clone(),
            e.endpoints[0].clone(),
            e.endpoints[1].clone(),
            length,
        );
    }
    Ok(b.build()?)
}

pub fn parse_graph(text: &str) -> Result<MetricGraph, IoError> {
    graph_from_document(&serde_json::from_str(text)?)
}

pub fn serialize_graph(graph: &MetricGraph) -> String {
    to_text(&graph_document(graph))
}

/// Parses a cover document. File references are resolved relative to
/// `dir`, or the working directory when `dir` is `None`.
pub fn parse_cover(text: &str, dir: Option<&Path>) -> Result<CoverMap, IoError> {
    let doc: CoverDocument = serde_json::from_str(text)?;
    let load = |source: &GraphSource| -> Result<MetricGraph, IoError> {
        match source {
            GraphSource::Inline(g) => graph_from_document(g),
            GraphSource::File(r) => {
                let path = dir.map_or_else(|| PathBuf::from(&r.file), |d| d.join(&r.file));
                parse_graph(&read_file(&path)?)
            }
        }
    };
    let base = load(&doc.base)?;
    let total = load(&doc.total)?;
    Ok(CoverMap::new(
        base,
        total,
        doc.degree,
        &doc.vertex_map,
        &doc.edge_map,
    )?)
}

/// Serializes a cover, either with inline graphs or with references to the
/// given base and total graph files.
pub fn serialize_cover(cover: &CoverMap, files: Option<(&str, &str)>) -> String {
    let (base, total) = match files {
        Some((b, t)) => (
            GraphSource::File(FileReference {
                file: b.to_string(),
            }),
            GraphSource::File(FileReference {
                file: t.to_string(),
            }),
        ),
        None => (
            GraphSource::Inline(graph_document(cover.base())),
            GraphSource::Inline(graph_document(cover.total())),
        ),
    };
    to_text(&CoverDocument {
        base,
        degree: cover.degree(),
        edge_map: cover.edge_pairs(),
        total,
        vertex_map: cover.vertex_pairs(),
    })
}

/// Parses function values without reference to a graph.
pub fn parse_function_values(text: &str) -> Result<BTreeMap<String, Rational>, IoError> {
    let doc: FunctionDocument = serde_json::from_str(text)?;
    doc.values
        .iter()
        .map(|(k, v)| Ok((k.clone(), parse_rational(&format!("value at `{k}`"), v)?)))
        .collect()
}

pub fn parse_function(text: &str, graph: &MetricGraph) -> Result<PLFunction, IoError> {
    Ok(PLFunction::new(graph, parse_function_values(text)?)?)
}

pub fn serialize_function(f: &PLFunction) -> String {
    to_text(&FunctionDocument {
        values: f
            .values()
            .iter()
            .map(|(k, v)| (k.clone(), rational::format(v)))
            .collect(),
    })
}

pub fn serialize_skeleton_meta(s: &SimultaneousSkeleton) -> String {
    to_text(&SkeletonDocument {
        base_log_different: s.base_log_different,
        curve_chi: s.curve_chi,
        markings: s
            .markings
            .iter()
            .map(|(k, v)| (k.clone(), v.to_string()))
            .collect(),
        valuation_bound: s.valuation_bound,
    })
}

pub fn read_file(path: &Path) -> Result<String, IoError> {
    fs::read_to_string(path).map_err(|e| IoError::File {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn write_file(path: &Path, text: &str) -> Result<(), IoError> {
    fs::write(path, text).map_err(|e| IoError::File {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

/// File names used for a simultaneous skeleton on disk.
pub const BASE_FILE: &str = "base.json";
pub const TOTAL_FILE: &str = "total.json";
pub const COVER_FILE: &str = "cover.json";
pub const DIFFERENT_FILE: &str = "different.json";
pub const SKELETON_FILE: &str = "skeleton.json";

/// Writes the five files of a simultaneous skeleton into `dir`, creating it
/// if needed. Returns the paths written, in a fixed order.
pub fn write_skeleton(dir: &Path, s: &SimultaneousSkeleton) -> Result<Vec<PathBuf>, IoError> {
    fs::create_dir_all(dir).map_err(|e| IoError::File {
        path: dir.display().to_string(),
        message: e.to_string(),
    })?;
    let files = [
        (BASE_FILE, serialize_graph(s.cover.base())),
        (TOTAL_FILE, serialize_graph(s.cover.total())),
        (
            COVER_FILE,
            serialize_cover(&s.cover, Some((BASE_FILE, TOTAL_FILE))),
        ),
        (DIFFERENT_FILE, serialize_function(&s.different)),
        (SKELETON_FILE, serialize_skeleton_meta(s)),
    ];
    let mut written = Vec::new();
    for (name, text) in files {
        let path = dir.join(name);
        write_file(&path, &text)?;
        written.push(path);
    }
    Ok(written)
}

pub fn read_skeleton(dir: &Path) -> Result<SimultaneousSkeleton, IoError> {
    let cover = parse_cover(&read_file(&dir.join(COVER_FILE))?, Some(dir))?;
    let different = parse_function(&read_file(&dir.join(DIFFERENT_FILE))?, cover.total())?;
    let meta: SkeletonDocument = serde_json::from_str(&read_file(&dir.join(SKELETON_FILE))?)?;
    let markings = meta
        .markings
        .iter()
        .map(|(k, v)| {
            Ok((
                k.clone(),
                v.parse::<Locus>()
                    .map_err(|_| IoError::BadLocus(v.clone()))?,
            ))
        })
        .collect::<Result<_, IoError>>()?;
    Ok(SimultaneousSkeleton {
        cover,
        different,
        markings,
        valuation_bound: meta.valuation_bound,
        base_log_different: meta.base_log_different,
        curve_chi: meta.curve_chi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic_reduction::example_ii;

    #[test]
    fn graph_round_trip() {
        let s = example_ii().unwrap();
        let text = serialize_graph(s.cover.base());
        let back = parse_graph(&text).unwrap();
        assert_eq!(serialize_graph(&back), text);
        assert_eq!(back.euler_char(), 0);
        assert!(text.contains("\"length\": \"1/18\""));
    }

    #[test]
    fn cover_round_trip_inline() {
        let s = example_ii().unwrap();
        let text = serialize_cover(&s.cover, None);
        let back = parse_cover(&text, None).unwrap();
        assert_eq!(serialize_cover(&back, None), text);
    }

    #[test]
    fn error_codes() {
        let zero = r#"{"edges":[{"endpoints":["a","b"],"id":"e","length":"0/3"}],
            "vertices":[{"genus":0,"id":"a","mult":1},{"genus":0,"id":"b","mult":1}]}"#;
        assert_eq!(parse_graph(zero).unwrap_err().code(), "non-positive-length");
        let unknown = zero
            .replace("[\"a\",\"b\"]", "[\"a\",\"z\"]")
            .replace("0/3", "1");
        assert_eq!(parse_graph(&unknown).unwrap_err().code(), "unknown-id");
        let split = r#"{"edges":[],
            "vertices":[{"genus":0,"id":"a","mult":1},{"genus":0,"id":"b","mult":1}]}"#;
        assert_eq!(parse_graph(split).unwrap_err().code(), "disconnected");
        assert_eq!(parse_graph("{").unwrap_err().code(), "malformed-json");
        let bad = zero.replace("0/3", "0.5");
        assert_eq!(parse_graph(&bad).unwrap_err().code(), "bad-rational");
        let extra = r#"{"edges":[],"vertices":[{"genus":0,"id":"a","mult":1}],"x":1}"#;
        assert_eq!(parse_graph(extra).unwrap_err().code(), "malformed-json");
    }

    #[test]
    fn function_documents() {
        let s = example_ii().unwrap();
        let text = serialize_function(&s.different);
        assert!(text.contains("\"mid'\": \"3/4\""));
        let back = parse_function(&text, s.cover.total()).unwrap();
        assert_eq!(back, s.different);
        let err = parse_function(&text, s.cover.base()).unwrap_err();
        assert_eq!(err.code(), "function-mismatch");
    }
}
