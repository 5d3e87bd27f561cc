//! A cover of skeleta together with its different function and the locus
//! labels used by the invariant checks.

use crate::different_fn::{self, DifferentError, DifferentReport, PLFunction};
use crate::harmonic_cover::{BalancingReport, CoverMap};
use crate::metric_graph::{skeleton_criterion, Divisor, GraphBuilder, MetricGraph};
use crate::ramification::is_prime;
use crate::rational::Rational;
use num_traits::{ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

/// Where a vertex of the total graph sits relative to the base change.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Locus {
    /// The base point has as many preimages as the degree.
    Split,
    /// Single preimage, but the local extension is unramified.
    Unramified,
    /// Interior of the topological ramification locus.
    Ramified,
    /// Above the temperate part of the base.
    Temperate,
}

impl Locus {
    pub fn as_str(self) -> &'static str {
        match self {
            Locus::Split => "split",
            Locus::Unramified => "unramified",
            Locus::Ramified => "ramified",
            Locus::Temperate => "temperate",
        }
    }

    /// Loci on which the different vanishes.
    pub fn is_trivial(self) -> bool {
        matches!(self, Locus::Split | Locus::Unramified)
    }
}

impl fmt::Display for Locus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Locus {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "split" => Ok(Locus::Split),
            "unramified" => Ok(Locus::Unramified),
            "ramified" => Ok(Locus::Ramified),
            "temperate" => Ok(Locus::Temperate),
            other => Err(format!("unknown locus `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimultaneousSkeleton {
    pub cover: CoverMap,
    pub different: PLFunction,
    pub markings: BTreeMap<String, Locus>,
    /// `v_k([k':k])`, the bound on the different.
    pub valuation_bound: u64,
    /// `δ^log_{k'/k}`.
    pub base_log_different: u64,
    /// Euler characteristic `2 - 2g` of the curve.
    pub curve_chi: i64,
}

/// Everything [`SimultaneousSkeleton::audit`] checks, kept separately so a
/// failure can be reported precisely.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Audit {
    pub balancing: BalancingReport,
    pub vertex_degree_errors: Vec<String>,
    pub residual: Divisor,
    pub different: DifferentReport,
    pub base_chi: i64,
    /// `χ(Γ')` over the base field.
    pub total_chi: i64,
    pub base_is_skeleton: bool,
    pub total_is_skeleton: bool,
    /// Vertices where `δ = 0` disagrees with the split/unramified marking.
    pub trivial_locus_mismatches: Vec<String>,
    /// Temperate vertices where `δ` differs from `δ^log_{k'/k} / [k':k]`.
    pub temperate_mismatches: Vec<String>,
    /// Edges where degree 1 disagrees with both ends being split.
    pub split_edge_mismatches: Vec<String>,
    /// Galois degree-p shape violations: fibre sizes other than 1 or p, or
    /// local degrees other than p / fibre size.
    pub fiber_violations: Vec<String>,
    pub unmarked: Vec<String>,
}

impl Audit {
    pub fn passed(&self) -> bool {
        self.balancing.passed()
            && self.vertex_degree_errors.is_empty()
            && self.residual.is_zero()
            && self.different.passed()
            && self.base_is_skeleton
            && self.total_is_skeleton
            && self.trivial_locus_mismatches.is_empty()
            && self.temperate_mismatches.is_empty()
            && self.split_edge_mismatches.is_empty()
            && self.fiber_violations.is_empty()
            && self.unmarked.is_empty()
    }
}

impl SimultaneousSkeleton {
    /// Runs the full invariant suite.
    pub fn audit(&self) -> Result<Audit, DifferentError> {
        let cover = &self.cover;
        let total = cover.total();
        let n = cover.degree();
        let balancing = cover.check_balancing();
        let vertex_degree_errors: Vec<String> = total
            .vertex_ids()
            .filter_map(|v| cover.vertex_degree(v).err().map(|e| e.to_string()))
            .collect();
        let residual = if vertex_degree_errors.is_empty() {
            different_fn::rh_residual(cover, &self.different)?
        } else {
            Divisor::zero()
        };
        let different =
            different_fn::validate_different(total, &self.different, self.valuation_bound)?;

        let base_chi = cover.base().euler_char();
        let total_chi = total.euler_char();
        let total_is_skeleton =
            total_chi % n as i64 == 0 && skeleton_criterion(total_chi / n as i64, self.curve_chi);

        let temperate = different_fn::temperate_value(n, self.base_log_different);
        let mut trivial_locus_mismatches = Vec::new();
        let mut temperate_mismatches = Vec::new();
        let mut unmarked = Vec::new();
        for v in total.vertex_ids() {
            let value = self.different.value(v)?;
            let Some(locus) = self.markings.get(v) else {
                unmarked.push(v.to_string());
                continue;
            };
            if value.is_zero() != locus.is_trivial() {
                trivial_locus_mismatches.push(v.to_string());
            }
            if *locus == Locus::Temperate && *value != temperate {
                temperate_mismatches.push(v.to_string());
            }
        }

        let split = |id: &str| self.markings.get(id) == Some(&Locus::Split);
        let mut split_edge_mismatches = Vec::new();
        for e in total.edges() {
            let (a, b) = total.endpoint_ids(e);
            let degree_one = cover.edge_degree(&e.id)? == 1;
            if degree_one != (split(a) && split(b)) {
                split_edge_mismatches.push(e.id.clone());
            }
        }

        let mut fiber_violations = Vec::new();
        if is_prime(n) {
            for x in cover.base().vertex_ids() {
                let fiber = cover.fiber(x)?;
                let size = fiber.len() as u64;
                if size != 1 && size != n {
                    fiber_violations.push(format!("{x}: {size} preimages"));
                    continue;
                }
                for v in fiber {
                    if let Ok(d) = cover.vertex_degree(v) {
                        if d != n / size {
                            fiber_violations.push(format!("{v}: local degree {d}"));
                        }
                    }
                }
            }
        }

        Ok(Audit {
            balancing,
            vertex_degree_errors,
            residual,
            different,
            base_chi,
            total_chi,
            base_is_skeleton: skeleton_criterion(base_chi, self.curve_chi),
            total_is_skeleton,
            trivial_locus_mismatches,
            temperate_mismatches,
            split_edge_mismatches,
            fiber_violations,
            unmarked,
        })
    }

    /// Value `δ^log_{k'/k} / [k':k]` expected above the temperate part.
    pub fn temperate_value(&self) -> Rational {
        different_fn::temperate_value(self.cover.degree(), self.base_log_different)
    }
}

/// Incremental construction of a cover with its different and markings.
pub(crate) struct CoverParts {
    total: GraphBuilder,
    vmap: BTreeMap<String, String>,
    emap: BTreeMap<String, String>,
    delta: BTreeMap<String, Rational>,
    markings: BTreeMap<String, Locus>,
}

impl CoverParts {
    pub(crate) fn new() -> Self {
        Self {
            total: MetricGraph::builder(),
            vmap: BTreeMap::new(),
            emap: BTreeMap::new(),
            delta: BTreeMap::new(),
            markings: BTreeMap::new(),
        }
    }

    pub(crate) fn vertex(
        &mut self,
        id: &str,
        mult: u64,
        genus: u64,
        image: &str,
        delta: Rational,
        locus: Locus,
    ) {
        self.total.add_vertex(id, mult, genus);
        self.vmap.insert(id.to_string(), image.to_string());
        self.delta.insert(id.to_string(), delta);
        self.markings.insert(id.to_string(), locus);
    }

    pub(crate) fn edge(&mut self, id: &str, from: &str, to: &str, length: Rational, image: &str) {
        self.total.add_edge(id, from, to, length);
        self.emap.insert(id.to_string(), image.to_string());
    }

    /// Assembles the cover, bounding the different by its ceiling.
    pub(crate) fn finish(
        self,
        base: MetricGraph,
        degree: u64,
        base_log_different: u64,
        curve_chi: i64,
    ) -> Result<SimultaneousSkeleton, DifferentError> {
        let total = self.total.build()?;
        let cover = CoverMap::new(base, total, degree, &self.vmap, &self.emap)?;
        let different = PLFunction::new(cover.total(), self.delta)?;
        let top = different
            .max_value()
            .cloned()
            .unwrap_or_else(Rational::zero);
        let valuation_bound = top.ceil().to_integer().to_u64().unwrap_or(0);
        Ok(SimultaneousSkeleton {
            cover,
            different,
            markings: self.markings,
            valuation_bound,
            base_log_different,
            curve_chi,
        })
    }
}
