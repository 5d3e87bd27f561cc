#![allow(dead_code)]

use skeleta::elliptic_reduction::{build_pot_mult_cover, example_ii};
use skeleta::metric_graph::MetricGraph;
use skeleta::quotient_sing::build_quotient_cover;
use skeleta::rational::ratio;
use skeleta::simultaneous::SimultaneousSkeleton;
use std::path::{Path, PathBuf};

pub fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn fixtures_dir() -> PathBuf {
    manifest_dir().join("fixtures")
}

pub fn golden_dir() -> PathBuf {
    manifest_dir().join("tests").join("golden")
}

/// Set `SKELETA_BLESS=1` to rewrite fixtures and golden files.
pub fn blessing() -> bool {
    std::env::var_os("SKELETA_BLESS").is_some_and(|v| v == "1")
}

/// Compares `actual` with the file at `path`, or writes it when blessing.
pub fn check_file(path: &Path, actual: &str) {
    if blessing() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(path, actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(path).unwrap_or_else(|e| {
        panic!(
            "{}: {e} (run with SKELETA_BLESS=1 to create)",
            path.display()
        )
    });
    assert_eq!(actual, expected, "{} differs", path.display());
}

pub const POT_MULT_NU: std::ops::RangeInclusive<u64> = 1..=8;
pub const POT_MULT_DLOG: std::ops::RangeInclusive<u64> = 1..=4;
pub const QUOTIENT_P: [u64; 4] = [2, 3, 5, 7];
pub const QUOTIENT_J: std::ops::RangeInclusive<u64> = 1..=4;
/// Regions and base genus of the shipped quotient fixtures.
pub const QUOTIENT_D: u64 = 2;
pub const QUOTIENT_G: u64 = 0;

/// Every shipped simultaneous skeleton with its directory under
/// `fixtures/`.
pub fn shipped_skeletons() -> Vec<(String, SimultaneousSkeleton)> {
    let mut out = vec![("example-ii".to_string(), example_ii().unwrap())];
    for nu in POT_MULT_NU {
        for dlog in POT_MULT_DLOG {
            let f = build_pot_mult_cover(nu, dlog).unwrap();
            out.push((format!("pot-mult/nu{nu}-dlog{dlog}"), f.skeleton));
        }
    }
    for p in QUOTIENT_P {
        for j in QUOTIENT_J {
            let f = build_quotient_cover(p, j, QUOTIENT_D, QUOTIENT_G).unwrap();
            out.push((format!("quotient/p{p}-j{j}"), f.skeleton));
        }
    }
    out
}

/// The interval from the Gauss point to the point of radius exponent 1/2
/// on the projective line.
pub fn p1_interval() -> MetricGraph {
    MetricGraph::builder()
        .vertex("gauss", 1, 0)
        .vertex("half", 2, 0)
        .edge("gauss-half", "gauss", "half", ratio(1, 2))
        .build()
        .unwrap()
}
