//! Metric graphs whose vertices carry a multiplicity and a residual genus,
//! with exact rational edge lengths.
//!
//! A [`MetricGraph`] models the skeleton of a model of a curve: vertices are
//! components of the special fiber, edges are intersections, and the edge
//! metric is the conformal metric computed over the base field.

mod blowup;
mod divisor;

pub use blowup::farey_multiplicity;
pub use divisor::Divisor;

use crate::rational::{self, Rational};
use num_traits::Zero;
use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph has no vertices")]
    Empty,
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate edge id `{0}`")]
    DuplicateEdge(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("vertex `{0}` has multiplicity 0")]
    ZeroMultiplicity(String),
    #[error("edge `{id}` has non-positive length {length}")]
    NonPositiveLength { id: String, length: Rational },
    #[error("graph is disconnected: `{0}` is unreachable")]
    Disconnected(String),
    #[error(
        "edge `{id}` has length {length}, expected {expected} for its endpoint multiplicities"
    )]
    NotSncNormalized {
        id: String,
        length: Box<Rational>,
        expected: Box<Rational>,
    },
    #[error("position {t} is outside the open interval (0, {length}) of edge `{id}`")]
    PositionOutOfRange {
        id: String,
        t: Box<Rational>,
        length: Box<Rational>,
    },
    #[error("distance {d} is outside (0, 1/{m}^2]")]
    DistanceOutOfRange { m: u64, d: Rational },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub id: String,
    pub mult: u64,
    pub genus: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    /// Indices into the vertex list; equal for a loop.
    pub ends: (usize, usize),
    pub length: Rational,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.ends.0 == self.ends.1
    }

    /// The endpoint opposite to `v`, assuming `v` is an endpoint.
    pub fn other(&self, v: usize) -> usize {
        if self.ends.0 == v {
            self.ends.1
        } else {
            self.ends.0
        }
    }
}

/// A connected vertex-weighted metric multigraph. Loops are allowed.
///
/// Graphs are immutable; every transformation returns a new graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricGraph {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    vertex_index: BTreeMap<String, usize>,
    edge_index: BTreeMap<String, usize>,
    incidence: Vec<Vec<usize>>,
}

#[derive(Debug, Default, Clone)]
pub struct GraphBuilder {
    vertices: Vec<Vertex>,
    edges: Vec<(String, String, String, Rational)>,
}

impl GraphBuilder {
    pub fn vertex(mut self, id: impl Into<String>, mult: u64, genus: u64) -> Self {
        self.vertices.push(Vertex {
            id: id.into(),
            mult,
            genus,
        });
        self
    }

    pub fn edge(
        mut self,
        id: impl Into<String>,
        from: impl Into<String>,
        to: impl Into<String>,
        length: Rational,
    ) -> Self {
        self.edges.push((id.into(), from.into(), to.into(), length));
        self
    }

    pub fn add_vertex(&mut self, id: impl Into<String>, mult: u64, genus: u64) {
        self.vertices.push(Vertex {
            id: id.into(),
            mult,
            genus,
        });
    }

    pub fn add_edge(
        &mut self,
        id: impl Into<String>,
        from: impl Into<String>,
        to: impl Into<String>,
        length: Rational,
    ) {
        self.edges.push((id.into(), from.into(), to.into(), length));
    }

    pub fn build(self) -> Result<MetricGraph, GraphError> {
        if self.vertices.is_empty() {
            return Err(GraphError::Empty);
        }
        let mut vertex_index = BTreeMap::new();
        for (i, v) in self.vertices.iter().enumerate() {
            if v.mult == 0 {
                return Err(GraphError::ZeroMultiplicity(v.id.clone()));
            }
            if vertex_index.insert(v.id.clone(), i).is_some() {
                return Err(GraphError::DuplicateVertex(v.id.clone()));
            }
        }
        let mut edges = Vec::with_capacity(self.edges.len());
        let mut edge_index = BTreeMap::new();
        let mut incidence = vec![Vec::new(); self.vertices.len()];
        for (id, from, to, length) in self.edges {
            let a = *vertex_index
                .get(&from)
                .ok_or_else(|| GraphError::UnknownVertex(from.clone()))?;
            let b = *vertex_index
                .get(&to)
                .ok_or_else(|| GraphError::UnknownVertex(to.clone()))?;
            if !rational::is_positive(&length) {
                return Err(GraphError::NonPositiveLength { id, length });
            }
            let k = edges.len();
            if edge_index.insert(id.clone(), k).is_some() {
                return Err(GraphError::DuplicateEdge(id));
            }
            incidence[a].push(k);
            if a != b {
                incidence[b].push(k);
            }
            edges.push(Edge {
                id,
                ends: (a, b),
                length,
            });
        }
        let graph = MetricGraph {
            vertices: self.vertices,
            edges,
            vertex_index,
            edge_index,
            incidence,
        };
        if let Some(v) = graph.unreachable_vertex() {
            return Err(GraphError::Disconnected(graph.vertices[v].id.clone()));
        }
        Ok(graph)
    }
}

impl MetricGraph {
    pub fn builder() -> GraphBuilder {
        GraphBuilder::default()
    }

    /// A builder pre-populated with this graph's vertices and edges.
    pub fn to_builder(&self) -> GraphBuilder {
        let mut b = GraphBuilder::default();
        for v in &self.vertices {
            b.add_vertex(v.id.clone(), v.mult, v.genus);
        }
        for e in &self.edges {
            b.add_edge(
                e.id.clone(),
                self.vertices[e.ends.0].id.clone(),
                self.vertices[e.ends.1].id.clone(),
                e.length.clone(),
            );
        }
        b
    }

    fn unreachable_vertex(&self) -> Option<usize> {
        let mut seen = vec![false; self.vertices.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &e in &self.incidence[v] {
                let w = self.edges[e].other(v);
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.iter().position(|s| !s)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_idx(&self, id: &str) -> Result<usize, GraphError> {
        self.vertex_index
            .get(id)
            .copied()
            .ok_or_else(|| GraphError::UnknownVertex(id.to_string()))
    }

    pub fn edge_idx(&self, id: &str) -> Result<usize, GraphError> {
        self.edge_index
            .get(id)
            .copied()
            .ok_or_else(|| GraphError::UnknownEdge(id.to_string()))
    }

    pub fn vertex(&self, id: &str) -> Result<&Vertex, GraphError> {
        Ok(&self.vertices[self.vertex_idx(id)?])
    }

    pub fn edge(&self, id: &str) -> Result<&Edge, GraphError> {
        Ok(&self.edges[self.edge_idx(id)?])
    }

    pub fn contains_vertex(&self, id: &str) -> bool {
        self.vertex_index.contains_key(id)
    }

    /// Vertex ids in sorted order.
    pub fn vertex_ids(&self) -> impl Iterator<Item = &str> {
        self.vertex_index.keys().map(String::as_str)
    }

    /// Edge ids in sorted order.
    pub fn edge_ids(&self) -> impl Iterator<Item = &str> {
        self.edge_index.keys().map(String::as_str)
    }

    /// Indices of the edges incident to vertex `v` (a loop appears once).
    pub fn incident_edges(&self, v: usize) -> &[usize] {
        &self.incidence[v]
    }

    /// Endpoint ids of an edge, in stored orientation.
    pub fn endpoint_ids(&self, e: &Edge) -> (&str, &str) {
        (&self.vertices[e.ends.0].id, &self.vertices[e.ends.1].id)
    }

    /// Number of branches at `v`; a loop contributes two.
    pub fn valency(&self, v: usize) -> usize {
        self.incidence[v]
            .iter()
            .map(|&e| if self.edges[e].is_loop() { 2 } else { 1 })
            .sum()
    }

    fn local_chi_idx(&self, v: usize) -> i64 {
        2 - 2 * self.vertices[v].genus as i64 - self.valency(v) as i64
    }

    /// `2 - 2g(v) - val(v)`.
    pub fn local_chi(&self, id: &str) -> Result<i64, GraphError> {
        Ok(self.local_chi_idx(self.vertex_idx(id)?))
    }

    /// The tropical canonical divisor, with coefficient `m(v)(2 - 2g(v) - val(v))`.
    pub fn canonical_divisor(&self) -> Divisor {
        Divisor::from_pairs(self.vertices.iter().enumerate().map(|(i, v)| {
            (
                v.id.clone(),
                rational::int(v.mult as i64 * self.local_chi_idx(i)),
            )
        }))
    }

    /// Degree of the canonical divisor.
    pub fn euler_char(&self) -> i64 {
        self.vertices
            .iter()
            .enumerate()
            .map(|(i, v)| v.mult as i64 * self.local_chi_idx(i))
            .sum()
    }

    /// Sum of canonical coefficients over a vertex subset; valencies are
    /// those of the whole graph.
    pub fn region_euler_char<'a>(
        &self,
        region: impl IntoIterator<Item = &'a str>,
    ) -> Result<i64, GraphError> {
        let mut seen = BTreeSet::new();
        let mut total = 0;
        for id in region {
            let v = self.vertex_idx(id)?;
            if seen.insert(v) {
                total += self.vertices[v].mult as i64 * self.local_chi_idx(v);
            }
        }
        Ok(total)
    }

    /// Shortest-path distance in the edge metric.
    pub fn distance(&self, from: &str, to: &str) -> Result<Rational, GraphError> {
        let source = self.vertex_idx(from)?;
        let target = self.vertex_idx(to)?;
        Ok(self.distances_from(source).swap_remove(target))
    }

    /// Distances from `source` to every vertex, by vertex index.
    pub fn distances_from(&self, source: usize) -> Vec<Rational> {
        let mut best: Vec<Option<Rational>> = vec![None; self.vertices.len()];
        let mut done = vec![false; self.vertices.len()];
        let mut heap = BinaryHeap::new();
        best[source] = Some(Rational::zero());
        heap.push(Reverse((Rational::zero(), source)));
        while let Some(Reverse((d, v))) = heap.pop() {
            if done[v] {
                continue;
            }
            done[v] = true;
            for &e in &self.incidence[v] {
                let w = self.edges[e].other(v);
                let candidate = &d + &self.edges[e].length;
                if best[w].as_ref().is_none_or(|b| candidate < *b) {
                    best[w] = Some(candidate.clone());
                    heap.push(Reverse((candidate, w)));
                }
            }
        }
        best.into_iter()
            .map(|d| d.expect("graph is connected"))
            .collect()
    }

    pub fn total_length(&self) -> Rational {
        self.edges.iter().map(|e| &e.length).sum()
    }

    /// The length an edge between the given endpoints has in a model whose
    /// special fiber has normal crossings: `1/(m1 m2)`.
    pub fn snc_length(&self, e: &Edge) -> Rational {
        let m1 = self.vertices[e.ends.0].mult as i64;
        let m2 = self.vertices[e.ends.1].mult as i64;
        rational::ratio(1, m1 * m2)
    }

    /// Edges whose length differs from `1/(m1 m2)`.
    pub fn snc_violations(&self) -> Vec<GraphError> {
        self.edges
            .iter()
            .filter_map(|e| {
                let expected = self.snc_length(e);
                (e.length != expected).then(|| GraphError::NotSncNormalized {
                    id: e.id.clone(),
                    length: Box::new(e.length.clone()),
                    expected: Box::new(expected),
                })
            })
            .collect()
    }

    /// True iff every edge has the normal-crossings length `1/(m1 m2)`.
    pub fn snc_edge_check(&self) -> bool {
        self.snc_violations().is_empty()
    }

    /// An id not yet used by any vertex or edge, derived from `stem`.
    pub fn fresh_id(&self, stem: &str) -> String {
        let taken = |s: &str| self.vertex_index.contains_key(s) || self.edge_index.contains_key(s);
        if !taken(stem) {
            return stem.to_string();
        }
        (1u64..)
            .map(|k| format!("{stem}.{k}"))
            .find(|s| !taken(s))
            .unwrap()
    }
}

/// Whether a subgraph can be a skeleton: its Euler characteristic must equal
/// that of the curve.
pub fn skeleton_criterion(chi_graph: i64, chi_curve: i64) -> bool {
    chi_graph == chi_curve
}
