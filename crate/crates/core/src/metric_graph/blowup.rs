//! Blow-ups of normal-crossings models seen on the skeleton, and the
//! multiplicities of divisorial points inside neat intervals.

use super::{GraphError, MetricGraph};
use crate::rational::{self, Rational};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

/// Multiplicity of the divisorial point at distance `d` from an end of
/// multiplicity `m_end` on a neat interval of length `1/m_end^2`.
///
/// Writing `m_end^2 * d = a/b` in lowest terms, the multiplicity is
/// `b * m_end`.
pub fn farey_multiplicity(m_end: u64, d: &Rational) -> Result<u64, GraphError> {
    let m = BigInt::from(m_end);
    let out_of_range = || GraphError::DistanceOutOfRange {
        m: m_end,
        d: d.clone(),
    };
    if m_end == 0 || d <= &Rational::zero() {
        return Err(out_of_range());
    }
    let q = d * Rational::from_integer(&m * &m);
    if q > Rational::from_integer(1.into()) {
        return Err(out_of_range());
    }
    q.denom()
        .to_u64()
        .map(|b| b * m_end)
        .ok_or_else(out_of_range)
}

impl MetricGraph {
    /// Blows up the node corresponding to `edge`: a new genus-0 vertex of
    /// multiplicity `m1 + m2` splits the edge into pieces of lengths
    /// `1/(m1(m1+m2))` and `1/(m2(m1+m2))`.
    ///
    /// Returns the new graph and the id of the exceptional vertex.
    pub fn blowup_node(&self, edge: &str) -> Result<(MetricGraph, String), GraphError> {
        let e = self.edge(edge)?;
        let expected = self.snc_length(e);
        if e.length != expected {
            return Err(GraphError::NotSncNormalized {
                id: e.id.clone(),
                length: Box::new(e.length.clone()),
                expected: Box::new(expected),
            });
        }
        let m1 = self.vertices[e.ends.0].mult;
        let m2 = self.vertices[e.ends.1].mult;
        let t = rational::ratio(1, (m1 * (m1 + m2)) as i64);
        self.split_edge(edge, t, m1 + m2, 0)
    }

    /// Blows up a smooth point on the component `vertex`: glues a leaf of
    /// the same multiplicity at distance `1/m^2`.
    pub fn blowup_smooth(&self, vertex: &str) -> Result<(MetricGraph, String), GraphError> {
        let v = self.vertex(vertex)?;
        let m = v.mult;
        let leaf = self.fresh_id(&format!("{vertex}+"));
        let mut b = self.to_builder();
        b.add_vertex(leaf.clone(), m, 0);
        let edge_id = self.fresh_id(&format!("{leaf}~"));
        b.add_edge(
            edge_id,
            vertex.to_string(),
            leaf.clone(),
            rational::ratio(1, (m * m) as i64),
        );
        Ok((b.build()?, leaf))
    }

    /// Inserts a degree-2 vertex at distance `t` from the first endpoint of
    /// `edge`.
    pub fn subdivide_edge(
        &self,
        edge: &str,
        t: &Rational,
        mult: u64,
        genus: u64,
    ) -> Result<(MetricGraph, String), GraphError> {
        let e = self.edge(edge)?;
        if t <= &Rational::zero() || t >= &e.length {
            return Err(GraphError::PositionOutOfRange {
                id: e.id.clone(),
                t: Box::new(t.clone()),
                length: Box::new(e.length.clone()),
            });
        }
        if mult == 0 {
            return Err(GraphError::ZeroMultiplicity(format!("{edge}@{t}")));
        }
        self.split_edge(edge, t.clone(), mult, genus)
    }

    fn split_edge(
        &self,
        edge: &str,
        t: Rational,
        mult: u64,
        genus: u64,
    ) -> Result<(MetricGraph, String), GraphError> {
        let k = self.edge_idx(edge)?;
        let e = &self.edges[k];
        let (a, b) = self.endpoint_ids(e);
        let mid = self.fresh_id(&format!("{edge}*"));
        let first = self.fresh_id(&format!("{edge}.a"));
        let second = self.fresh_id(&format!("{edge}.b"));
        let rest = &e.length - &t;

        let mut out = MetricGraph::builder();
        for v in &self.vertices {
            out.add_vertex(v.id.clone(), v.mult, v.genus);
        }
        out.add_vertex(mid.clone(), mult, genus);
        for (i, other) in self.edges.iter().enumerate() {
            if i == k {
                out.add_edge(first.clone(), a.to_string(), mid.clone(), t.clone());
                out.add_edge(second.clone(), mid.clone(), b.to_string(), rest.clone());
            } else {
                let (x, y) = self.endpoint_ids(other);
                out.add_edge(
                    other.id.clone(),
                    x.to_string(),
                    y.to_string(),
                    other.length.clone(),
                );
            }
        }
        Ok((out.build()?, mid))
    }
}
