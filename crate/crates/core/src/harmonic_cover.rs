//! Harmonic covers of metric graphs, modelling the map of skeleta induced by
//! a finite base change of the ground field.

use crate::metric_graph::{Divisor, GraphError, MetricGraph};
use crate::rational::{self, Rational};
use num_traits::ToPrimitive;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("cover degree must be positive")]
    ZeroDegree,
    #[error("total vertex `{0}` has no image")]
    UnmappedVertex(String),
    #[error("total edge `{0}` has no image")]
    UnmappedEdge(String),
    #[error("base vertex `{0}` has no preimage")]
    VertexNotCovered(String),
    #[error("base edge `{0}` has no preimage")]
    EdgeNotCovered(String),
    #[error("edge `{total}` with endpoints ({ends:?}) does not lie over edge `{base}`")]
    IncidenceMismatch {
        total: String,
        base: String,
        ends: (String, String),
    },
    #[error("edge `{edge}` has non-integral degree {ratio}")]
    NonIntegralEdgeDegree { edge: String, ratio: Rational },
    #[error("local degree at `{vertex}` depends on the base edge: {sums:?}")]
    IllDefinedVertexDegree {
        vertex: String,
        sums: BTreeMap<String, u64>,
    },
    #[error("isolated vertex `{vertex}`: degree {degree} is not divisible by fiber size {fiber}")]
    IsolatedFiber {
        vertex: String,
        degree: u64,
        fiber: usize,
    },
}

/// A map of metric graphs `total -> base` of a given global degree,
/// specified on vertices and edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverMap {
    base: MetricGraph,
    total: MetricGraph,
    degree: u64,
    vertex_map: Vec<usize>,
    edge_map: Vec<usize>,
    edge_degrees: Vec<u64>,
}

/// Base edges over which the preimage degrees do not add up to the global
/// degree.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BalancingReport {
    pub degree: u64,
    /// Base edge id and the observed sum of preimage degrees.
    pub failures: Vec<(String, u64)>,
}

impl BalancingReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl CoverMap {
    pub fn new(
        base: MetricGraph,
        total: MetricGraph,
        degree: u64,
        vertex_map: &BTreeMap<String, String>,
        edge_map: &BTreeMap<String, String>,
    ) -> Result<Self, CoverError> {
        if degree == 0 {
            return Err(CoverError::ZeroDegree);
        }
        let mut vmap = Vec::with_capacity(total.vertex_count());
        for v in total.vertices() {
            let image = vertex_map
                .get(&v.id)
                .ok_or_else(|| CoverError::UnmappedVertex(v.id.clone()))?;
            vmap.push(base.vertex_idx(image)?);
        }
        for id in vertex_map.keys() {
            total.vertex_idx(id)?;
        }
        let mut emap = Vec::with_capacity(total.edge_count());
        let mut edge_degrees = Vec::with_capacity(total.edge_count());
        for e in total.edges() {
            let image_id = edge_map
                .get(&e.id)
                .ok_or_else(|| CoverError::UnmappedEdge(e.id.clone()))?;
            let k = base.edge_idx(image_id)?;
            let image = &base.edges()[k];
            let mut over = [vmap[e.ends.0], vmap[e.ends.1]];
            let mut under = [image.ends.0, image.ends.1];
            over.sort_unstable();
            under.sort_unstable();
            if over != under {
                let (a, b) = total.endpoint_ids(e);
                return Err(CoverError::IncidenceMismatch {
                    total: e.id.clone(),
                    base: image.id.clone(),
                    ends: (a.to_string(), b.to_string()),
                });
            }
            let ratio = &image.length / &e.length;
            let d = rational::is_integral(&ratio)
                .then(|| ratio.numer().to_u64())
                .flatten()
                .filter(|&d| d > 0)
                .ok_or_else(|| CoverError::NonIntegralEdgeDegree {
                    edge: e.id.clone(),
                    ratio: ratio.clone(),
                })?;
            emap.push(k);
            edge_degrees.push(d);
        }
        for id in edge_map.keys() {
            total.edge_idx(id)?;
        }
        let hit: BTreeSet<usize> = vmap.iter().copied().collect();
        if let Some(v) = (0..base.vertex_count()).find(|v| !hit.contains(v)) {
            return Err(CoverError::VertexNotCovered(base.vertices()[v].id.clone()));
        }
        let hit: BTreeSet<usize> = emap.iter().copied().collect();
        if let Some(e) = (0..base.edge_count()).find(|e| !hit.contains(e)) {
            return Err(CoverError::EdgeNotCovered(base.edges()[e].id.clone()));
        }
        Ok(Self {
            base,
            total,
            degree,
            vertex_map: vmap,
            edge_map: emap,
            edge_degrees,
        })
    }

    /// The identity cover of degree 1.
    pub fn identity(graph: MetricGraph) -> Self {
        let vmap = graph
            .vertex_ids()
            .map(|v| (v.to_string(), v.to_string()))
            .collect();
        let emap = graph
            .edge_ids()
            .map(|e| (e.to_string(), e.to_string()))
            .collect();
        Self::new(graph.clone(), graph, 1, &vmap, &emap).expect("identity is a cover")
    }

    pub fn base(&self) -> &MetricGraph {
        &self.base
    }

    pub fn total(&self) -> &MetricGraph {
        &self.total
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    /// Image of a total vertex, by id.
    pub fn vertex_image(&self, id: &str) -> Result<&str, CoverError> {
        let v = self.total.vertex_idx(id)?;
        Ok(&self.base.vertices()[self.vertex_map[v]].id)
    }

    pub fn edge_image(&self, id: &str) -> Result<&str, CoverError> {
        let e = self.total.edge_idx(id)?;
        Ok(&self.base.edges()[self.edge_map[e]].id)
    }

    /// Vertex map as sorted `(total id, base id)` pairs.
    pub fn vertex_pairs(&self) -> BTreeMap<String, String> {
        self.total
            .vertices()
            .iter()
            .zip(&self.vertex_map)
            .map(|(v, &b)| (v.id.clone(), self.base.vertices()[b].id.clone()))
            .collect()
    }

    pub fn edge_pairs(&self) -> BTreeMap<String, String> {
        self.total
            .edges()
            .iter()
            .zip(&self.edge_map)
            .map(|(e, &b)| (e.id.clone(), self.base.edges()[b].id.clone()))
            .collect()
    }

    /// Total vertices over a base vertex, sorted by id.
    pub fn fiber(&self, base_vertex: &str) -> Result<Vec<&str>, CoverError> {
        let b = self.base.vertex_idx(base_vertex)?;
        let mut out: Vec<&str> = self
            .vertex_map
            .iter()
            .enumerate()
            .filter(|(_, &img)| img == b)
            .map(|(v, _)| self.total.vertices()[v].id.as_str())
            .collect();
        out.sort_unstable();
        Ok(out)
    }

    /// Total edges over a base edge, sorted by id.
    pub fn edge_fiber(&self, base_edge: &str) -> Result<Vec<&str>, CoverError> {
        let b = self.base.edge_idx(base_edge)?;
        let mut out: Vec<&str> = self
            .edge_map
            .iter()
            .enumerate()
            .filter(|(_, &img)| img == b)
            .map(|(e, _)| self.total.edges()[e].id.as_str())
            .collect();
        out.sort_unstable();
        Ok(out)
    }

    /// `length(image) / length(edge)`.
    pub fn edge_degree(&self, edge: &str) -> Result<u64, CoverError> {
        Ok(self.edge_degrees[self.total.edge_idx(edge)?])
    }

    /// Checks that preimage degrees over every base edge sum to the global
    /// degree.
    pub fn check_balancing(&self) -> BalancingReport {
        let mut sums = vec![0u64; self.base.edge_count()];
        for (e, &b) in self.edge_map.iter().enumerate() {
            sums[b] += self.edge_degrees[e];
        }
        let mut failures: Vec<(String, u64)> = sums
            .into_iter()
            .enumerate()
            .filter(|&(_, s)| s != self.degree)
            .map(|(b, s)| (self.base.edges()[b].id.clone(), s))
            .collect();
        failures.sort();
        BalancingReport {
            degree: self.degree,
            failures,
        }
    }

    /// Local degree at a total vertex: for each base edge at its image, the
    /// sum of the degrees of preimage edges incident to the vertex. These
    /// sums must agree.
    ///
    /// A vertex without incident edges (the one-point graph) gets the global
    /// degree divided evenly over its fiber.
    pub fn vertex_degree(&self, vertex: &str) -> Result<u64, CoverError> {
        let v = self.total.vertex_idx(vertex)?;
        let incident = self.total.incident_edges(v);
        if incident.is_empty() {
            let fiber = self
                .vertex_map
                .iter()
                .filter(|&&b| b == self.vertex_map[v])
                .count();
            return if self.degree.is_multiple_of(fiber as u64) {
                Ok(self.degree / fiber as u64)
            } else {
                Err(CoverError::IsolatedFiber {
                    vertex: vertex.to_string(),
                    degree: self.degree,
                    fiber,
                })
            };
        }
        let image = self.vertex_map[v];
        let mut sums: BTreeMap<String, u64> = self
            .base
            .incident_edges(image)
            .iter()
            .map(|&b| (self.base.edges()[b].id.clone(), 0))
            .collect();
        for &e in incident {
            let b = &self.base.edges()[self.edge_map[e]].id;
            *sums.get_mut(b).expect("incidence-compatible") += self.edge_degrees[e];
        }
        let mut values = sums.values();
        let first = *values.next().expect("image has an incident edge");
        if values.all(|&s| s == first) {
            Ok(first)
        } else {
            Err(CoverError::IllDefinedVertexDegree {
                vertex: vertex.to_string(),
                sums,
            })
        }
    }

    /// `phi^*[x] = sum over x' above x of deg_{x'} [x']`, extended linearly.
    pub fn pullback(&self, divisor: &Divisor) -> Result<Divisor, CoverError> {
        let mut out = Divisor::zero();
        for (id, c) in divisor.iter() {
            for v in self.fiber(id)? {
                let d = self.vertex_degree(v)?;
                out.add_at(v, &(c * rational::int(d as i64)));
            }
        }
        Ok(out)
    }
}
