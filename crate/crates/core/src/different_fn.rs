//! Piecewise-linear functions on metric graphs and the different function
//! of a base change.
//!
//! The Laplacian uses the convention `Δ(F)(x) = -Σ_b ∂_b F`, the negated
//! sum of outgoing slopes over the branches at `x`. With this sign the
//! different `δ` of a simultaneous skeleton satisfies the Riemann–Hurwitz
//! identity `Δ(δ) = K_{Γ'} - φ^* K_Γ`.

use crate::harmonic_cover::{CoverError, CoverMap};
use crate::metric_graph::{Divisor, GraphError, MetricGraph};
use crate::rational::{self, Rational};
use num_traits::{Signed, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DifferentError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error("function has no value at vertex `{0}`")]
    MissingValue(String),
    #[error("function has a value at `{0}`, which is not a vertex of the graph")]
    ForeignVertex(String),
    #[error("edge `{edge}` is not incident to `{vertex}`")]
    NotIncident { vertex: String, edge: String },
    #[error("at least one anchor is required")]
    NoAnchors,
    #[error("anchors are inconsistent: residual {residual} at `{vertex}`")]
    InconsistentAnchors { vertex: String, residual: Rational },
}

/// A function on a metric graph, affine on every edge, given by its vertex
/// values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PLFunction {
    values: BTreeMap<String, Rational>,
}

impl PLFunction {
    /// Checks that `values` assigns exactly one value to each vertex of
    /// `graph`.
    pub fn new(
        graph: &MetricGraph,
        values: BTreeMap<String, Rational>,
    ) -> Result<Self, DifferentError> {
        let f = Self { values };
        f.check_graph(graph)?;
        Ok(f)
    }

    pub fn constant(graph: &MetricGraph, c: &Rational) -> Self {
        Self {
            values: graph
                .vertex_ids()
                .map(|v| (v.to_string(), c.clone()))
                .collect(),
        }
    }

    pub fn check_graph(&self, graph: &MetricGraph) -> Result<(), DifferentError> {
        if let Some(v) = graph.vertex_ids().find(|v| !self.values.contains_key(*v)) {
            return Err(DifferentError::MissingValue(v.to_string()));
        }
        if let Some(v) = self.values.keys().find(|v| !graph.contains_vertex(v)) {
            return Err(DifferentError::ForeignVertex(v.clone()));
        }
        Ok(())
    }

    pub fn value(&self, vertex: &str) -> Result<&Rational, DifferentError> {
        self.values
            .get(vertex)
            .ok_or_else(|| DifferentError::MissingValue(vertex.to_string()))
    }

    pub fn values(&self) -> &BTreeMap<String, Rational> {
        &self.values
    }

    pub fn max_value(&self) -> Option<&Rational> {
        self.values.values().max()
    }

    /// `a F + b G`, assuming both live on the same graph.
    pub fn linear_combination(&self, a: &Rational, other: &PLFunction, b: &Rational) -> PLFunction {
        PLFunction {
            values: self
                .values
                .iter()
                .map(|(k, v)| {
                    let w = other.values.get(k).cloned().unwrap_or_else(Rational::zero);
                    (k.clone(), a * v + b * w)
                })
                .collect(),
        }
    }

    fn value_at(&self, graph: &MetricGraph, v: usize) -> &Rational {
        &self.values[&graph.vertices()[v].id]
    }

    /// Slope of the function along edge index `e`, read from its first
    /// endpoint to its second.
    fn edge_slope(&self, graph: &MetricGraph, e: usize) -> Rational {
        let edge = &graph.edges()[e];
        (self.value_at(graph, edge.ends.1) - self.value_at(graph, edge.ends.0)) / &edge.length
    }

    /// Slopes of every edge in stored orientation, keyed by edge id.
    pub fn edge_slopes(
        &self,
        graph: &MetricGraph,
    ) -> Result<BTreeMap<String, Rational>, DifferentError> {
        self.check_graph(graph)?;
        Ok((0..graph.edge_count())
            .map(|e| (graph.edges()[e].id.clone(), self.edge_slope(graph, e)))
            .collect())
    }
}

/// Outgoing slope of `f` at `vertex` along `edge`. On a loop the function
/// is constant, so both branches have slope 0.
pub fn outgoing_slope(
    graph: &MetricGraph,
    f: &PLFunction,
    vertex: &str,
    edge: &str,
) -> Result<Rational, DifferentError> {
    f.check_graph(graph)?;
    let v = graph.vertex_idx(vertex)?;
    let e = graph.edge_idx(edge)?;
    let ends = graph.edges()[e].ends;
    if ends.0 != v && ends.1 != v {
        return Err(DifferentError::NotIncident {
            vertex: vertex.to_string(),
            edge: edge.to_string(),
        });
    }
    let slope = f.edge_slope(graph, e);
    Ok(if ends.0 == v { slope } else { -slope })
}

/// `Δ(F)(x) = -Σ_b ∂_b F` over all branches at `x`.
pub fn laplacian(graph: &MetricGraph, f: &PLFunction) -> Result<Divisor, DifferentError> {
    f.check_graph(graph)?;
    let mut out = Divisor::zero();
    for e in 0..graph.edge_count() {
        let edge = &graph.edges()[e];
        if edge.is_loop() {
            continue;
        }
        let slope = f.edge_slope(graph, e);
        let (a, b) = graph.endpoint_ids(edge);
        // Outgoing slope is +slope at the first end and -slope at the second.
        out.add_at(a, &-&slope);
        out.add_at(b, &slope);
    }
    Ok(out)
}

/// `K_{Γ'} - φ^* K_Γ`, the divisor the Laplacian of the different must
/// equal.
pub fn ramification_divisor(cover: &CoverMap) -> Result<Divisor, DifferentError> {
    let pulled = cover.pullback(&cover.base().canonical_divisor())?;
    Ok(&cover.total().canonical_divisor() - &pulled)
}

/// `Δ(δ) - (K_{Γ'} - φ^* K_Γ)`; zero iff the Riemann–Hurwitz identity
/// holds at every vertex.
pub fn rh_residual(cover: &CoverMap, delta: &PLFunction) -> Result<Divisor, DifferentError> {
    let lap = laplacian(cover.total(), delta)?;
    Ok(&lap - &ramification_divisor(cover)?)
}

/// Recovers the different from its values at `anchors` by solving the
/// Riemann–Hurwitz identity at every other vertex.
///
/// The identity is then re-checked at the anchors themselves; a nonzero
/// residual there means no function satisfies all constraints.
pub fn solve_different(
    cover: &CoverMap,
    anchors: &BTreeMap<String, Rational>,
) -> Result<PLFunction, DifferentError> {
    if anchors.is_empty() {
        return Err(DifferentError::NoAnchors);
    }
    let graph = cover.total();
    for id in anchors.keys() {
        graph.vertex_idx(id)?;
    }
    let target = ramification_divisor(cover)?;

    // Unknowns are the non-anchor vertices, numbered in vertex-index order.
    let n = graph.vertex_count();
    let mut slot = vec![None; n];
    let mut unknowns = Vec::new();
    for (v, vertex) in graph.vertices().iter().enumerate() {
        if !anchors.contains_key(&vertex.id) {
            slot[v] = Some(unknowns.len());
            unknowns.push(v);
        }
    }

    // Row for unknown vertex v: Σ_e (F(v) - F(w)) / len = target(v).
    let mut rows: Vec<BTreeMap<usize, Rational>> = vec![BTreeMap::new(); unknowns.len()];
    let mut rhs: Vec<Rational> = unknowns
        .iter()
        .map(|&v| target.coefficient(&graph.vertices()[v].id))
        .collect();
    for edge in graph.edges() {
        if edge.is_loop() {
            continue;
        }
        let weight = Rational::from_integer(1.into()) / &edge.length;
        for (v, w) in [(edge.ends.0, edge.ends.1), (edge.ends.1, edge.ends.0)] {
            let Some(i) = slot[v] else { continue };
            *rows[i].entry(i).or_insert_with(Rational::zero) += &weight;
            match slot[w] {
                Some(j) => *rows[i].entry(j).or_insert_with(Rational::zero) -= &weight,
                None => {
                    let anchored = &anchors[&graph.vertices()[w].id];
                    rhs[i] += &weight * anchored;
                }
            }
        }
    }
    let solution = solve_sparse(rows, rhs);

    let mut values: BTreeMap<String, Rational> = anchors.clone();
    for (i, &v) in unknowns.iter().enumerate() {
        values.insert(graph.vertices()[v].id.clone(), solution[i].clone());
    }
    let delta = PLFunction::new(graph, values)?;
    let residual = rh_residual(cover, &delta)?;
    if let Some((vertex, r)) = residual.iter().next() {
        return Err(DifferentError::InconsistentAnchors {
            vertex: vertex.to_string(),
            residual: r.clone(),
        });
    }
    Ok(delta)
}

/// Gaussian elimination on sparse rows. The matrix is a Dirichlet
/// Laplacian of a connected graph with at least one anchored vertex, hence
/// nonsingular; diagonal pivots stay positive throughout.
fn solve_sparse(mut rows: Vec<BTreeMap<usize, Rational>>, mut rhs: Vec<Rational>) -> Vec<Rational> {
    let n = rows.len();
    for k in 0..n {
        let pivot = rows[k].get(&k).cloned().expect("Dirichlet Laplacian pivot");
        let pivot_row: Vec<(usize, Rational)> = rows[k]
            .range(k + 1..)
            .map(|(&c, v)| (c, v.clone()))
            .collect();
        let pivot_rhs = rhs[k].clone();
        // Rows that touch column k are exactly the columns of the pivot row
        // by symmetry of the Laplacian.
        for &(r, _) in &pivot_row {
            let Some(entry) = rows[r].remove(&k) else {
                continue;
            };
            let factor = entry / &pivot;
            for (c, v) in &pivot_row {
                let cell = rows[r].entry(*c).or_insert_with(Rational::zero);
                *cell -= &factor * v;
                if cell.is_zero() {
                    rows[r].remove(c);
                }
            }
            rhs[r] -= &factor * &pivot_rhs;
        }
    }
    let mut x = vec![Rational::zero(); n];
    for k in (0..n).rev() {
        let mut acc = rhs[k].clone();
        for (&c, v) in rows[k].range(k + 1..) {
            acc -= v * &x[c];
        }
        x[k] = acc / &rows[k][&k];
    }
    x
}

/// Value of the different above the temperate part: `δ^log_{k'/k} / [k':k]`.
pub fn temperate_value(degree: u64, dlog_base: u64) -> Rational {
    rational::ratio(dlog_base as i64, degree as i64)
}

/// Outgoing slope of the different along a branch whose residual extension
/// has log-different `dlog_residual`, at a vertex of multiplicity `m`.
pub fn residual_slope(m_vertex: u64, dlog_residual: u64) -> u64 {
    m_vertex * dlog_residual
}

/// Outcome of [`validate_different`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DifferentReport {
    pub negative: Vec<(String, Rational)>,
    pub non_integral_slopes: Vec<(String, Rational)>,
    pub above_bound: Vec<(String, Rational)>,
    pub bound: u64,
}

impl DifferentReport {
    pub fn passed(&self) -> bool {
        self.negative.is_empty()
            && self.non_integral_slopes.is_empty()
            && self.above_bound.is_empty()
    }
}

/// Checks non-negativity, integrality of slopes, and the bound
/// `δ <= v_k([k':k])`, the latter supplied by the caller.
pub fn validate_different(
    graph: &MetricGraph,
    delta: &PLFunction,
    v_k_of_degree: u64,
) -> Result<DifferentReport, DifferentError> {
    let bound = rational::int(v_k_of_degree as i64);
    let slopes = delta.edge_slopes(graph)?;
    Ok(DifferentReport {
        negative: delta
            .values()
            .iter()
            .filter(|(_, v)| v.is_negative())
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect(),
        non_integral_slopes: slopes
            .into_iter()
            .filter(|(_, s)| !rational::is_integral(s))
            .collect(),
        above_bound: delta
            .values()
            .iter()
            .filter(|(_, v)| **v > bound)
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect(),
        bound: v_k_of_degree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn chain() -> MetricGraph {
        MetricGraph::builder()
            .vertex("a", 2, 1)
            .vertex("b", 4, 0)
            .vertex("c", 6, 0)
            .vertex("d", 2, 0)
            .vertex("e", 6, 0)
            .edge("ab", "a", "b", ratio(1, 8))
            .edge("bc", "b", "c", ratio(1, 24))
            .edge("cd", "c", "d", ratio(1, 12))
            .edge("ce", "c", "e", ratio(1, 36))
            .build()
            .unwrap()
    }

    fn values(pairs: &[(&str, Rational)]) -> BTreeMap<String, Rational> {
        pairs
            .iter()
            .map(|(k, v)| (k.to_string(), v.clone()))
            .collect()
    }

    fn linear_delta() -> PLFunction {
        PLFunction::new(
            &chain(),
            values(&[
                ("a", int(0)),
                ("b", ratio(3, 4)),
                ("c", int(1)),
                ("d", int(1)),
                ("e", int(1)),
            ]),
        )
        .unwrap()
    }

    #[test]
    fn slopes() {
        let g = chain();
        let f = linear_delta();
        assert_eq!(outgoing_slope(&g, &f, "a", "ab"), Ok(int(6)));
        assert_eq!(outgoing_slope(&g, &f, "c", "bc"), Ok(int(-6)));
        assert_eq!(outgoing_slope(&g, &f, "c", "cd"), Ok(int(0)));
        assert!(matches!(
            outgoing_slope(&g, &f, "a", "cd"),
            Err(DifferentError::NotIncident { .. })
        ));
        let flat = PLFunction::constant(&g, &ratio(5, 3));
        assert_eq!(outgoing_slope(&g, &flat, "b", "bc"), Ok(int(0)));
    }

    #[test]
    fn laplacian_signs() {
        let g = chain();
        let lap = laplacian(&g, &linear_delta()).unwrap();
        assert_eq!(lap.coefficient("a"), int(-6));
        assert_eq!(lap.coefficient("b"), int(0));
        assert_eq!(lap.coefficient("c"), int(6));
        assert!(laplacian(&g, &PLFunction::constant(&g, &int(3)))
            .unwrap()
            .is_zero());
    }

    #[test]
    fn function_must_match_graph() {
        let g = chain();
        assert_eq!(
            PLFunction::new(&g, values(&[("a", int(0))])),
            Err(DifferentError::MissingValue("b".into()))
        );
        let mut vals = linear_delta().values().clone();
        vals.insert("zz".into(), int(0));
        assert_eq!(
            PLFunction::new(&g, vals),
            Err(DifferentError::ForeignVertex("zz".into()))
        );
    }

    #[test]
    fn temperate_and_residual() {
        assert_eq!(temperate_value(2, 2), int(1));
        assert_eq!(temperate_value(2, 1), ratio(1, 2));
        assert_eq!(temperate_value(7, 0), int(0));
        assert_eq!(residual_slope(2, 3), 6);
        assert_eq!(residual_slope(5, 0), 0);
        assert_eq!(residual_slope(2, 1), 2);
    }

    #[test]
    fn validation() {
        let g = chain();
        assert!(validate_different(&g, &linear_delta(), 1).unwrap().passed());
        assert!(
            validate_different(&g, &PLFunction::constant(&g, &int(0)), 0)
                .unwrap()
                .passed()
        );
        let report = validate_different(&g, &linear_delta(), 0).unwrap();
        assert_eq!(report.above_bound.len(), 3 + 1);
        let mut vals = linear_delta().values().clone();
        vals.insert("d".into(), ratio(25, 24));
        let bent = PLFunction::new(&g, vals).unwrap();
        let report = validate_different(&g, &bent, 2).unwrap();
        assert_eq!(
            report.non_integral_slopes,
            vec![("cd".to_string(), ratio(1, 2))]
        );
        let mut vals = linear_delta().values().clone();
        vals.insert("a".into(), int(-1));
        let report = validate_different(&g, &PLFunction::new(&g, vals).unwrap(), 2).unwrap();
        assert_eq!(report.negative, vec![("a".to_string(), int(-1))]);
    }

    #[test]
    fn solver_on_identity_cover() {
        // Identity cover: K - K = 0, so harmonic functions, i.e. constants.
        let cover = CoverMap::identity(chain());
        let solved = solve_different(&cover, &values(&[("d", ratio(2, 3))])).unwrap();
        assert_eq!(solved, PLFunction::constant(cover.total(), &ratio(2, 3)));
        assert!(rh_residual(&cover, &solved).unwrap().is_zero());
        assert_eq!(
            solve_different(&cover, &BTreeMap::new()),
            Err(DifferentError::NoAnchors)
        );
        let err = solve_different(&cover, &values(&[("d", int(0)), ("e", int(1))]));
        assert!(matches!(
            err,
            Err(DifferentError::InconsistentAnchors { .. })
        ));
        assert!(matches!(
            solve_different(&cover, &values(&[("q", int(0))])),
            Err(DifferentError::Graph(GraphError::UnknownVertex(_)))
        ));
    }

    #[test]
    fn sparse_solver_small_system() {
        // [2 -1; -1 2] x = [1; 1] -> x = [1, 1].
        let rows = vec![
            BTreeMap::from([(0, int(2)), (1, int(-1))]),
            BTreeMap::from([(0, int(-1)), (1, int(2))]),
        ];
        assert_eq!(
            solve_sparse(rows, vec![int(1), int(1)]),
            vec![int(1), int(1)]
        );
    }
}
