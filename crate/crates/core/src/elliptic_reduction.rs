//! Kodaira–Néron skeleta and quadratic base change of potentially
//! multiplicative elliptic curves.

use crate::different_fn::{self, DifferentError, PLFunction};
use crate::harmonic_cover::{CoverError, CoverMap};
use crate::metric_graph::{farey_multiplicity, GraphError, MetricGraph};
use crate::rational::{int, ratio, Rational};
use crate::simultaneous::{CoverParts, Locus, SimultaneousSkeleton};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EllipticError {
    #[error("nu must be positive for potentially multiplicative reduction, got {0}")]
    NonPositiveNu(i64),
    #[error("dlog must be non-negative, got {0}")]
    NegativeDlog(i64),
    #[error("the cover construction needs a wild extension (dlog >= 1), got {0}")]
    TameDlog(u64),
    #[error("I_n needs n >= 1")]
    ZeroCycle,
    #[error("unknown Kodaira symbol `{0}`")]
    UnknownSymbol(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Different(#[from] DifferentError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KodairaType {
    I0,
    I(u64),
    IStar(u64),
    II,
    III,
    IV,
    IIStar,
    IIIStar,
    IVStar,
}

impl fmt::Display for KodairaType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KodairaType::I0 => write!(f, "I_0"),
            KodairaType::I(n) => write!(f, "I_{n}"),
            KodairaType::IStar(n) => write!(f, "I*_{n}"),
            KodairaType::II => write!(f, "II"),
            KodairaType::III => write!(f, "III"),
            KodairaType::IV => write!(f, "IV"),
            KodairaType::IIStar => write!(f, "II*"),
            KodairaType::IIIStar => write!(f, "III*"),
            KodairaType::IVStar => write!(f, "IV*"),
        }
    }
}

impl FromStr for KodairaType {
    type Err = EllipticError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let unknown = || EllipticError::UnknownSymbol(s.to_string());
        let t = match s {
            "I_0" | "I0" => KodairaType::I0,
            "II" => KodairaType::II,
            "III" => KodairaType::III,
            "IV" => KodairaType::IV,
            "II*" => KodairaType::IIStar,
            "III*" => KodairaType::IIIStar,
            "IV*" => KodairaType::IVStar,
            _ => {
                if let Some(n) = s.strip_prefix("I*_") {
                    KodairaType::IStar(n.parse().map_err(|_| unknown())?)
                } else if let Some(n) = s.strip_prefix("I_") {
                    match n.parse().map_err(|_| unknown())? {
                        0 => KodairaType::I0,
                        n => KodairaType::I(n),
                    }
                } else {
                    return Err(unknown());
                }
            }
        };
        Ok(t)
    }
}

fn snc(m1: u64, m2: u64) -> Rational {
    ratio(1, (m1 * m2) as i64)
}

/// A genus-0 star: `center` of multiplicity `center_mult`, and each arm a
/// chain of multiplicities read outward from the center.
fn star(center_mult: u64, arms: &[&[u64]]) -> Result<MetricGraph, GraphError> {
    let mut b = MetricGraph::builder();
    b.add_vertex("center", center_mult, 0);
    for (a, arm) in arms.iter().enumerate() {
        let mut prev = ("center".to_string(), center_mult);
        for (i, &m) in arm.iter().enumerate() {
            let id = format!("a{}.{}", a + 1, i + 1);
            b.add_vertex(id.clone(), m, 0);
            b.add_edge(
                format!("{}-{}", prev.0, id),
                prev.0.clone(),
                id.clone(),
                snc(prev.1, m),
            );
            prev = (id, m);
        }
    }
    b.build()
}

/// Minimal skeleton of the given reduction type with its multiplicities.
/// Starred types are drawn with every component of the fibre as a vertex.
pub fn kodaira_skeleton(t: KodairaType) -> Result<MetricGraph, EllipticError> {
    let g = match t {
        KodairaType::I0 => MetricGraph::builder().vertex("v0", 1, 1).build()?,
        KodairaType::I(0) => return Err(EllipticError::ZeroCycle),
        KodairaType::I(n) => {
            let mut b = MetricGraph::builder();
            for i in 0..n {
                b.add_vertex(format!("v{i}"), 1, 0);
            }
            for i in 0..n {
                let j = (i + 1) % n;
                b.add_edge(
                    format!("v{i}-v{j}"),
                    format!("v{i}"),
                    format!("v{j}"),
                    int(1),
                );
            }
            b.build()?
        }
        KodairaType::IStar(n) => istar(n)?,
        KodairaType::II => star(6, &[&[1], &[2], &[3]])?,
        KodairaType::III => star(4, &[&[1], &[1], &[2]])?,
        KodairaType::IV => star(3, &[&[1], &[1], &[1]])?,
        KodairaType::IIStar => star(6, &[&[5, 4, 3, 2, 1], &[4, 2], &[3]])?,
        KodairaType::IIIStar => star(4, &[&[3, 2, 1], &[3, 2, 1], &[2]])?,
        KodairaType::IVStar => star(3, &[&[2, 1], &[2, 1], &[2, 1]])?,
    };
    Ok(g)
}

/// Chain `c0 .. cn` of multiplicity 2 with leaves `w1, w2` at `c0` and
/// `w3, w4` at `cn`.
fn istar(n: u64) -> Result<MetricGraph, GraphError> {
    let mut b = MetricGraph::builder();
    for i in 0..=n {
        b.add_vertex(format!("c{i}"), 2, 0);
    }
    for i in 0..n {
        b.add_edge(
            format!("c{i}-c{}", i + 1),
            format!("c{i}"),
            format!("c{}", i + 1),
            snc(2, 2),
        );
    }
    for (leaf, end) in [("w1", 0), ("w2", 0), ("w3", n), ("w4", n)] {
        b.add_vertex(leaf, 1, 0);
        b.add_edge(format!("c{end}-{leaf}"), format!("c{end}"), leaf, snc(2, 1));
    }
    b.build()
}

/// Reduction types over `k` and over the quadratic extension `k'`
/// trivialising the twist.
pub fn classify_pot_mult(nu: i64, dlog: i64) -> Result<(KodairaType, KodairaType), EllipticError> {
    if nu <= 0 {
        return Err(EllipticError::NonPositiveNu(nu));
    }
    if dlog < 0 {
        return Err(EllipticError::NegativeDlog(dlog));
    }
    let (nu, dlog) = (nu as u64, dlog as u64);
    Ok((KodairaType::IStar(nu + 4 * dlog), KodairaType::I(2 * nu)))
}

/// The constructed cover with the points used in the distance identities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PotMultFixture {
    pub skeleton: SimultaneousSkeleton,
    pub nu: u64,
    pub dlog: u64,
    /// Junction `x'` on the loop where the left tail starts.
    pub junction: String,
    /// Fork node `y'` at the end of the left tail.
    pub fork: String,
}

impl PotMultFixture {
    /// `d(x', y')` in the total graph.
    pub fn total_tail_length(&self) -> Result<Rational, GraphError> {
        self.skeleton
            .cover
            .total()
            .distance(&self.junction, &self.fork)
    }

    /// `d(x, y)` between the images in the base graph.
    pub fn base_tail_length(&self) -> Result<Rational, EllipticError> {
        let cover = &self.skeleton.cover;
        let x = cover.vertex_image(&self.junction)?;
        let y = cover.vertex_image(&self.fork)?;
        Ok(cover.base().distance(x, y)?)
    }
}

/// Simultaneous skeleton of a potentially multiplicative elliptic curve
/// over a wildly ramified quadratic extension.
///
/// The base is the `I*_{ν+4 dlog}` chain. Over `k'` the middle `ν` base edges
/// split into a loop of `2ν` edges; the `2 dlog` base edges on each side are
/// covered by a tail with twice the metric density, ending at a fork node
/// with two leaves.
pub fn build_pot_mult_cover(nu: u64, dlog: u64) -> Result<PotMultFixture, EllipticError> {
    if nu == 0 {
        return Err(EllipticError::NonPositiveNu(0));
    }
    if dlog == 0 {
        return Err(EllipticError::TameDlog(0));
    }
    let (base_type, _) = classify_pot_mult(nu as i64, dlog as i64)?;
    let base = kodaira_skeleton(base_type)?;
    let n = nu + 4 * dlog;
    let tail = 2 * dlog;
    let c = |i: u64| format!("c{i}");
    let c_edge = |i: u64| format!("c{i}-c{}", i + 1);

    let mut parts = CoverParts::new();
    let zero = int(0);
    let eighth = ratio(1, 8);
    let quarter = ratio(1, 4);

    // Split loop over c_{tail} .. c_{tail+nu}.
    parts.vertex("x'L", 2, 0, &c(tail), zero.clone(), Locus::Split);
    parts.vertex("x'R", 2, 0, &c(tail + nu), zero.clone(), Locus::Split);
    for side in ["u", "l"] {
        let node = |i: u64| match i {
            0 => "x'L".to_string(),
            i if i == nu => "x'R".to_string(),
            i => format!("{side}'{i}"),
        };
        for i in 1..nu {
            parts.vertex(&node(i), 2, 0, &c(tail + i), zero.clone(), Locus::Split);
        }
        for i in 0..nu {
            let id = format!("{side}{i}");
            parts.edge(
                &id,
                &node(i),
                &node(i + 1),
                quarter.clone(),
                &c_edge(tail + i),
            );
        }
    }

    // Ramified tails. Position i sits at distance i/8 from the junction and
    // maps to the base vertex i steps away.
    let slope = different_fn::residual_slope(2, 1);
    for (side, junction, step) in [("L", "x'L", -1i64), ("R", "x'R", 1)] {
        let start = if step < 0 { tail } else { tail + nu } as i64;
        let base_at = |i: u64| (start + step * i as i64) as u64;
        let node = |i: u64| match i {
            0 => junction.to_string(),
            i if i == tail => format!("y'{side}"),
            i => format!("t{side}'{i}"),
        };
        for i in 1..=tail {
            let position = &eighth * int(i as i64);
            // Multiplicity from the Farey rule on the neat interval of
            // length 1/4 between consecutive mult-2 points.
            let offset = &position - &quarter * int((i / 2) as i64);
            let mult = if i % 2 == 0 {
                2
            } else {
                farey_multiplicity(2, &offset)?
            };
            let delta = &position * int(slope as i64);
            let locus = if i == tail {
                Locus::Temperate
            } else {
                Locus::Ramified
            };
            parts.vertex(&node(i), mult, 0, &c(base_at(i)), delta, locus);
        }
        for i in 0..tail {
            let (a, b) = (base_at(i), base_at(i + 1));
            let image = c_edge(a.min(b));
            parts.edge(
                &format!("t{side}{i}"),
                &node(i),
                &node(i + 1),
                eighth.clone(),
                &image,
            );
        }
    }

    // Fork leaves, at the temperate value.
    let fork_value = different_fn::temperate_value(2, dlog);
    let fork_mult = farey_multiplicity(2, &quarter)?;
    for (leaf, fork, end) in [
        ("w1", "y'L", 0),
        ("w2", "y'L", 0),
        ("w3", "y'R", n),
        ("w4", "y'R", n),
    ] {
        let id = format!("{leaf}'");
        parts.vertex(
            &id,
            fork_mult,
            0,
            leaf,
            fork_value.clone(),
            Locus::Temperate,
        );
        parts.edge(
            &format!("{fork}-{id}"),
            fork,
            &id,
            quarter.clone(),
            &format!("c{end}-{leaf}"),
        );
    }

    let skeleton = parts.finish(base, 2, dlog, 0)?;
    Ok(PotMultFixture {
        skeleton,
        nu,
        dlog,
        junction: "x'L".to_string(),
        fork: "y'L".to_string(),
    })
}

/// The type II curve `y² = x³ + 2` over the maximal unramified extension of
/// `Q_2`, base changed to the Kummer extension by `√2`, where it acquires
/// good reduction. The genus-1 component sits over `x0`.
pub fn example_ii() -> Result<SimultaneousSkeleton, EllipticError> {
    let base = MetricGraph::builder()
        .vertex("x0", 2, 0)
        .vertex("mid", 2, 0)
        .vertex("y", 6, 0)
        .vertex("z1", 1, 0)
        .vertex("z2", 3, 0)
        .edge("x0-mid", "x0", "mid", ratio(1, 4))
        .edge("mid-y", "mid", "y", ratio(1, 12))
        .edge("y-z1", "y", "z1", ratio(1, 6))
        .edge("y-z2", "y", "z2", ratio(1, 18))
        .build()?;

    // Over k' the distances halve; multiplicities come from the Farey rule
    // on the neat intervals [x0', z1'] and [x0', z2'].
    let m_mid = farey_multiplicity(2, &ratio(1, 8))?;
    let m_y = farey_multiplicity(2, &ratio(1, 12))?;
    let total = MetricGraph::builder()
        .vertex("x0'", 2, 1)
        .vertex("mid'", m_mid, 0)
        .vertex("y'", m_y, 0)
        .vertex("z1'", 2, 0)
        .vertex("z2'", 6, 0)
        .edge("x0'-mid'", "x0'", "mid'", ratio(1, 8))
        .edge("mid'-y'", "mid'", "y'", ratio(1, 24))
        .edge("y'-z1'", "y'", "z1'", ratio(1, 12))
        .edge("y'-z2'", "y'", "z2'", ratio(1, 36))
        .build()?;

    let vmap: BTreeMap<String, String> = [
        ("x0'", "x0"),
        ("mid'", "mid"),
        ("y'", "y"),
        ("z1'", "z1"),
        ("z2'", "z2"),
    ]
    .into_iter()
    .map(|(a, b)| (a.to_string(), b.to_string()))
    .collect();
    let emap: BTreeMap<String, String> = [
        ("x0'-mid'", "x0-mid"),
        ("mid'-y'", "mid-y"),
        ("y'-z1'", "y-z1"),
        ("y'-z2'", "y-z2"),
    ]
    .into_iter()
    .map(|(a, b)| (a.to_string(), b.to_string()))
    .collect();
    let cover = CoverMap::new(base, total, 2, &vmap, &emap)?;

    let dlog = 2;
    let top = different_fn::temperate_value(2, dlog);
    let values: BTreeMap<String, Rational> = [
        ("x0'", int(0)),
        ("mid'", ratio(3, 4)),
        ("y'", top.clone()),
        ("z1'", top.clone()),
        ("z2'", top),
    ]
    .into_iter()
    .map(|(a, b)| (a.to_string(), b))
    .collect();
    let different = PLFunction::new(cover.total(), values)?;

    let markings = [
        ("x0'", Locus::Unramified),
        ("mid'", Locus::Ramified),
        ("y'", Locus::Temperate),
        ("z1'", Locus::Temperate),
        ("z2'", Locus::Temperate),
    ]
    .into_iter()
    .map(|(a, b)| (a.to_string(), b))
    .collect();

    Ok(SimultaneousSkeleton {
        cover,
        different,
        markings,
        valuation_bound: 1,
        base_log_different: dlog,
        curve_chi: 0,
    })
}
