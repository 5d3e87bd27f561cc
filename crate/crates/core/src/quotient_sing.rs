//! Invariants of quotient singularities of `Z/p`-covers and the ordinary
//! simultaneous skeleton built from them.

use crate::different_fn::{self, laplacian, DifferentError};
use crate::harmonic_cover::CoverError;
use crate::metric_graph::{farey_multiplicity, GraphError, MetricGraph};
use crate::ramification::is_prime;
use crate::rational::{int, ratio, Rational};
use crate::simultaneous::{CoverParts, Locus, SimultaneousSkeleton};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuotientError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("ramification jump must be positive")]
    ZeroJump,
    #[error("1 - chi = {0} is not a positive multiple of p - 1 = {1}")]
    NotAJump(i64, u64),
    #[error("2g' - 2 = {0} does not give a genus")]
    InvalidGenus(i64),
    #[error("2γ' - 2 = {0} does not give a p-rank")]
    InvalidPRank(i64),
    #[error("p-rank {gamma} exceeds genus {genus}")]
    PRankAboveGenus { gamma: u64, genus: u64 },
    #[error("ordinary cover with genus {genus} but p-rank {p_rank}")]
    OrdinaryMismatch { genus: u64, p_rank: u64 },
    #[error("need 0 < r < p, got r = {r}, p = {p}")]
    ResidueOutOfRange { p: u64, r: u64 },
    #[error("{0} must be positive")]
    NonPositive(&'static str),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Different(#[from] DifferentError),
}

fn require_prime(p: u64) -> Result<(), QuotientError> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(QuotientError::NotPrime(p))
    }
}

/// Euler characteristic `1 - (p-1) j` of the resolution graph of the
/// quotient singularity below a point with jump `j`.
pub fn chi_from_jump(p: u64, j: u64) -> Result<i64, QuotientError> {
    require_prime(p)?;
    if j == 0 {
        return Err(QuotientError::ZeroJump);
    }
    Ok(1 - ((p - 1) * j) as i64)
}

pub fn jump_from_chi(p: u64, chi: i64) -> Result<u64, QuotientError> {
    require_prime(p)?;
    let gap = 1 - chi;
    let step = (p - 1) as i64;
    if gap <= 0 || gap % step != 0 {
        return Err(QuotientError::NotAJump(gap, p - 1));
    }
    Ok((gap / step) as u64)
}

fn half_plus_one(
    two_g_minus_two: i64,
    err: fn(i64) -> QuotientError,
) -> Result<u64, QuotientError> {
    if two_g_minus_two < -2 || two_g_minus_two % 2 != 0 {
        return Err(err(two_g_minus_two));
    }
    Ok((two_g_minus_two / 2 + 1) as u64)
}

/// Genus upstairs of a `Z/p`-cover of a genus-`g` curve branched at one
/// point per entry of `jumps`, with those jumps.
pub fn rh_genus(p: u64, g_base: u64, jumps: &[u64]) -> Result<u64, QuotientError> {
    require_prime(p)?;
    if jumps.contains(&0) {
        return Err(QuotientError::ZeroJump);
    }
    let p_i = p as i64;
    let d = jumps.len() as i64;
    let sum: i64 = jumps.iter().map(|&j| j as i64).sum();
    let value = p_i * (2 * g_base as i64 - 2) + d * (p_i - 1) + sum * (p_i - 1);
    half_plus_one(value, QuotientError::InvalidGenus)
}

/// p-rank upstairs of a `Z/p`-cover branched at `d` points.
pub fn crew_p_rank(p: u64, gamma_base: u64, d: u64) -> Result<u64, QuotientError> {
    require_prime(p)?;
    let p_i = p as i64;
    let value = p_i * (2 * gamma_base as i64 - 2) + 2 * d as i64 * (p_i - 1);
    half_plus_one(value, QuotientError::InvalidPRank)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrdinaryReport {
    pub ordinary: bool,
    pub genus: u64,
    pub p_rank: u64,
}

/// Whether the residual cover is ordinary, with the genus and p-rank of the
/// curve upstairs. For ordinary data the two must coincide.
pub fn ordinary_check(
    p: u64,
    g_base: u64,
    gamma_base: u64,
    jumps: &[u64],
) -> Result<OrdinaryReport, QuotientError> {
    if gamma_base > g_base {
        return Err(QuotientError::PRankAboveGenus {
            gamma: gamma_base,
            genus: g_base,
        });
    }
    let genus = rh_genus(p, g_base, jumps)?;
    let p_rank = crew_p_rank(p, gamma_base, jumps.len() as u64)?;
    let ordinary = gamma_base == g_base && jumps.iter().all(|&j| j == 1);
    if ordinary && genus != p_rank {
        return Err(QuotientError::OrdinaryMismatch { genus, p_rank });
    }
    Ok(OrdinaryReport {
        ordinary,
        genus,
        p_rank,
    })
}

/// Multiplicities of the Hirzebruch–Jung chain resolving the `(p, r)` cyclic
/// singularity, starting at `r` and ending at 1.
///
/// `m_{i+1} = c_i m_i - m_{i-1}` with `c_i = ⌈m_{i-1} / m_i⌉` and `m_0 = p`.
pub fn hj_arm(p: u64, r: u64) -> Result<Vec<u64>, QuotientError> {
    if r == 0 || r >= p {
        return Err(QuotientError::ResidueOutOfRange { p, r });
    }
    let (mut prev, mut cur) = (p, r);
    let mut arm = Vec::new();
    while cur > 0 {
        arm.push(cur);
        let next = prev.div_ceil(cur) * cur - prev;
        (prev, cur) = (cur, next);
    }
    Ok(arm)
}

/// Continued-fraction coefficients `c_i` of `p / r` matching [`hj_arm`].
pub fn hj_coefficients(p: u64, r: u64) -> Result<Vec<u64>, QuotientError> {
    let arm = hj_arm(p, r)?;
    let mut prev = p;
    Ok(arm
        .iter()
        .map(|&m| {
            let c = prev.div_ceil(m);
            prev = m;
            c
        })
        .collect())
}

/// Resolution graph of a weakly wild quotient singularity.
///
/// A chain `x, v1, .., y` of `chain_edges` edges of length `1/p²` through
/// multiplicity-`p` vertices, with arms `r1, r2, ..` and `s1, s2, ..` at `y`
/// carrying the Hirzebruch–Jung multiplicities of `r` and `p - r`.
pub fn build_weakly_wild_graph(
    p: u64,
    r: u64,
    chain_edges: u64,
) -> Result<MetricGraph, QuotientError> {
    require_prime(p)?;
    if chain_edges == 0 {
        return Err(QuotientError::NonPositive("chain_edges"));
    }
    let arms = [("r", hj_arm(p, r)?), ("s", hj_arm(p, p - r)?)];
    let chain = |i: u64| match i {
        0 => "x".to_string(),
        i if i == chain_edges => "y".to_string(),
        i => format!("v{i}"),
    };
    let mut b = MetricGraph::builder();
    for i in 0..=chain_edges {
        b.add_vertex(chain(i), p, 0);
    }
    let step = ratio(1, (p * p) as i64);
    for i in 0..chain_edges {
        b.add_edge(
            format!("{}-{}", chain(i), chain(i + 1)),
            chain(i),
            chain(i + 1),
            step.clone(),
        );
    }
    for (name, arm) in arms {
        let mut prev = ("y".to_string(), p);
        for (i, &m) in arm.iter().enumerate() {
            let id = format!("{name}{}", i + 1);
            b.add_vertex(id.clone(), m, 0);
            b.add_edge(
                format!("{}-{id}", prev.0),
                prev.0.clone(),
                id.clone(),
                ratio(1, (prev.1 * m) as i64),
            );
            prev = (id, m);
        }
    }
    Ok(b.build()?)
}

/// Euler characteristic of the weakly wild graph away from its chain end.
pub fn weakly_wild_region_chi(graph: &MetricGraph) -> Result<i64, GraphError> {
    graph.region_euler_char(graph.vertex_ids().filter(|&v| v != "x"))
}

/// Sizes reported alongside the quotient fixture.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientCounts {
    /// Edges on `[x, y]` in each region; equals `jp`.
    pub chain_edges: u64,
    /// Vertices on `[x, y]` counting both ends.
    pub chain_vertices_inclusive: u64,
    /// Vertices on `[x, y]` other than `x`.
    pub chain_vertices_excluding_x: u64,
    /// Vertices strictly inside `[x, y]`.
    pub chain_vertices_interior: u64,
    pub base_distance: Rational,
    pub total_distance: Rational,
    pub genus_total: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientFixture {
    pub skeleton: SimultaneousSkeleton,
    pub counts: QuotientCounts,
    pub p: u64,
    pub j: u64,
    pub d: u64,
    pub g_base: u64,
}

impl QuotientFixture {
    fn region_ids(&self, r: u64) -> Vec<String> {
        let base = self.skeleton.cover.base();
        let prefix = format!("r{r}.");
        base.vertex_ids()
            .filter(|v| v.starts_with(&prefix))
            .map(str::to_string)
            .collect()
    }

    /// Base vertices of region `r` (1-based), excluding the center.
    pub fn base_region(&self, r: u64) -> Vec<String> {
        self.region_ids(r)
    }

    /// Total vertices lying over region `r`.
    pub fn total_region(&self, r: u64) -> Result<Vec<String>, QuotientError> {
        let cover = &self.skeleton.cover;
        let mut out = Vec::new();
        for x in self.region_ids(r) {
            out.extend(cover.fiber(&x)?.into_iter().map(str::to_string));
        }
        Ok(out)
    }

    pub fn base_region_chi(&self, r: u64) -> Result<i64, QuotientError> {
        let ids = self.base_region(r);
        Ok(self
            .skeleton
            .cover
            .base()
            .region_euler_char(ids.iter().map(String::as_str))?)
    }

    /// Sum of the Laplacian of `δ` over the region upstairs. Interior slopes
    /// cancel in pairs, leaving the slope leaving `x'` into the region.
    pub fn region_laplacian_sum(&self, r: u64) -> Result<Rational, QuotientError> {
        let total = self.skeleton.cover.total();
        let lap = laplacian(total, &self.skeleton.different)?;
        let ids = self.total_region(r)?;
        Ok(lap.restricted_degree(ids.iter().map(String::as_str)))
    }

    /// Region-sum identity: the slope out of `x'` equals
    /// `χ(Γ'_Q) - p χ(Γ_Q)`, with `χ(Γ_Q)` from the residual jump 1.
    pub fn region_identity_holds(&self, r: u64) -> Result<bool, QuotientError> {
        let total = self.skeleton.cover.total();
        let ids = self.total_region(r)?;
        let chi_total = total.region_euler_char(ids.iter().map(String::as_str))?;
        let expected = chi_total - self.p as i64 * chi_from_jump(self.p, 1)?;
        let lap = self.region_laplacian_sum(r)?;
        Ok(lap == int(expected)
            && expected == self.p as i64 - self.p as i64 * chi_from_jump(self.p, 1)?)
    }
}

/// Ordinary `Z/p` base change of a curve whose skeleton is a genus-`g_base`
/// center with `d` weakly wild regions, over an extension with jump `j`.
///
/// Region `r` has chain vertices `r{r}.1 .. r{r}.{jp-1}`, node `r{r}.y` and
/// leaves `r{r}.a`, `r{r}.b`; upstairs ids carry a prime.
pub fn build_quotient_cover(
    p: u64,
    j: u64,
    d: u64,
    g_base: u64,
) -> Result<QuotientFixture, QuotientError> {
    require_prime(p)?;
    if j == 0 {
        return Err(QuotientError::ZeroJump);
    }
    if d == 0 {
        return Err(QuotientError::NonPositive("d"));
    }
    let genus_total = rh_genus(p, g_base, &vec![1; d as usize])?;
    let dlog = (p - 1) * j;
    let chain_edges = j * p;
    let p_i = p as i64;
    let base_step = ratio(1, p_i * p_i);
    let total_step = ratio(1, p_i * p_i * p_i);
    let slope = different_fn::residual_slope(p, p - 1);
    let top = different_fn::temperate_value(p, dlog);

    let mut base = MetricGraph::builder();
    let mut parts = CoverParts::new();
    base.add_vertex("x", p, g_base);
    parts.vertex("x'", p, genus_total, "x", int(0), Locus::Unramified);

    for r in 1..=d {
        let node = |i: u64| match i {
            0 => "x".to_string(),
            i if i == chain_edges => format!("r{r}.y"),
            i => format!("r{r}.{i}"),
        };
        let node_up = |i: u64| match i {
            0 => "x'".to_string(),
            i => format!("{}'", node(i)),
        };
        for i in 1..=chain_edges {
            base.add_vertex(node(i), p, 0);
            let position = &total_step * int(i as i64);
            let offset = &total_step * int((i % p) as i64);
            let mult = if i % p == 0 {
                p
            } else {
                farey_multiplicity(p, &offset)?
            };
            let locus = if i == chain_edges {
                Locus::Temperate
            } else {
                Locus::Ramified
            };
            parts.vertex(
                &node_up(i),
                mult,
                0,
                &node(i),
                &position * int(slope as i64),
                locus,
            );
        }
        for i in 0..chain_edges {
            let id = format!("{}-{}", node(i), node(i + 1));
            base.add_edge(id.clone(), node(i), node(i + 1), base_step.clone());
            parts.edge(
                &format!("{}-{}", node_up(i), node_up(i + 1)),
                &node_up(i),
                &node_up(i + 1),
                total_step.clone(),
                &id,
            );
        }
        let y = node(chain_edges);
        let y_up = node_up(chain_edges);
        let leaf_mult = farey_multiplicity(p, &base_step)?;
        for leaf in ["a", "b"] {
            let id = format!("r{r}.{leaf}");
            let id_up = format!("{id}'");
            base.add_vertex(id.clone(), 1, 0);
            let edge = format!("{y}-{id}");
            base.add_edge(edge.clone(), y.clone(), id.clone(), ratio(1, p_i));
            parts.vertex(&id_up, leaf_mult, 0, &id, top.clone(), Locus::Temperate);
            parts.edge(
                &format!("{y_up}-{id_up}"),
                &y_up,
                &id_up,
                base_step.clone(),
                &edge,
            );
        }
    }

    let base = base.build()?;
    let skeleton = parts.finish(base, p, dlog, 2 - 2 * genus_total as i64)?;
    let counts = QuotientCounts {
        chain_edges,
        chain_vertices_inclusive: chain_edges + 1,
        chain_vertices_excluding_x: chain_edges,
        chain_vertices_interior: chain_edges - 1,
        base_distance: skeleton.cover.base().distance("x", "r1.y")?,
        total_distance: skeleton.cover.total().distance("x'", "r1.y'")?,
        genus_total,
    };
    Ok(QuotientFixture {
        skeleton,
        counts,
        p,
        j,
        d,
        g_base,
    })
}
