mod common;

use common::*;
use num_traits::Zero;
use proptest::prelude::*;
use skeleta::different_fn::{laplacian, PLFunction};
use skeleta::elliptic_reduction::{classify_pot_mult, kodaira_skeleton, KodairaType};
use skeleta::harmonic_cover::CoverMap;
use skeleta::metric_graph::{Divisor, MetricGraph};
use skeleta::quotient_sing::{
    build_weakly_wild_graph, chi_from_jump, jump_from_chi, weakly_wild_region_chi,
};
use skeleta::rational::{int, ratio, Rational};
use std::collections::BTreeMap;
use std::sync::OnceLock;

fn rational() -> impl Strategy<Value = Rational> {
    (-50i64..=50, 1i64..=12).prop_map(|(a, b)| ratio(a, b))
}

fn positive() -> impl Strategy<Value = Rational> {
    (1i64..=20, 1i64..=12).prop_map(|(a, b)| ratio(a, b))
}

/// Connected multigraph: a random spanning tree plus extra edges, which may
/// be loops or parallel edges.
fn graph() -> impl Strategy<Value = MetricGraph> {
    (1usize..=30)
        .prop_flat_map(|n| {
            let parents: Vec<BoxedStrategy<usize>> = (1..n).map(|i| (0..i).boxed()).collect();
            (
                parents,
                proptest::collection::vec((1u64..=6, 0u64..=2), n),
                proptest::collection::vec(((0..n), (0..n)), 0..=n),
                proptest::collection::vec(positive(), 2 * n),
            )
        })
        .prop_map(|(parents, decorations, extra, lengths)| {
            let mut b = MetricGraph::builder();
            for (i, (m, g)) in decorations.iter().enumerate() {
                b.add_vertex(format!("v{i}"), *m, *g);
            }
            let mut lengths = lengths.into_iter();
            for (i, p) in parents.iter().enumerate() {
                b.add_edge(
                    format!("t{}", i + 1),
                    format!("v{p}"),
                    format!("v{}", i + 1),
                    lengths.next().unwrap(),
                );
            }
            for (k, (a, c)) in extra.iter().enumerate() {
                b.add_edge(
                    format!("x{k}"),
                    format!("v{a}"),
                    format!("v{c}"),
                    lengths.next().unwrap(),
                );
            }
            b.build().unwrap()
        })
}

fn function_on(graph: &MetricGraph, values: &[Rational]) -> PLFunction {
    let map: BTreeMap<String, Rational> = graph
        .vertex_ids()
        .zip(values.iter().cycle())
        .map(|(id, v)| (id.to_string(), v.clone()))
        .collect();
    PLFunction::new(graph, map).unwrap()
}

fn fixture_covers() -> &'static Vec<CoverMap> {
    static COVERS: OnceLock<Vec<CoverMap>> = OnceLock::new();
    COVERS.get_or_init(|| {
        shipped_skeletons()
            .into_iter()
            .map(|(_, s)| s.cover)
            .collect()
    })
}

fn snc_fixtures() -> Vec<MetricGraph> {
    let mut out: Vec<MetricGraph> = [
        KodairaType::I0,
        KodairaType::I(1),
        KodairaType::I(3),
        KodairaType::IStar(2),
        KodairaType::II,
        KodairaType::IIIStar,
    ]
    .into_iter()
    .map(|t| kodaira_skeleton(t).unwrap())
    .collect();
    out.push(p1_interval());
    out.push(
        skeleta::elliptic_reduction::example_ii()
            .unwrap()
            .cover
            .base()
            .clone(),
    );
    out
}

#[derive(Debug, Clone)]
enum Op {
    Node(usize),
    Smooth(usize),
    Subdivide(usize, u64, u64),
}

fn op() -> impl Strategy<Value = Op> {
    prop_oneof![
        any::<usize>().prop_map(Op::Node),
        any::<usize>().prop_map(Op::Smooth),
        (any::<usize>(), 1u64..=9, 1u64..=7).prop_map(|(e, m, k)| Op::Subdivide(e, m, k)),
    ]
}

fn apply(g: &MetricGraph, op: &Op) -> MetricGraph {
    match *op {
        Op::Node(i) => {
            let snc: Vec<&str> = g
                .edges()
                .iter()
                .filter(|e| e.length == g.snc_length(e))
                .map(|e| e.id.as_str())
                .collect();
            match snc.get(i % snc.len().max(1)) {
                Some(e) => g.blowup_node(e).unwrap().0,
                None => g.clone(),
            }
        }
        Op::Smooth(i) => {
            let v = g.vertices()[i % g.vertex_count()].id.clone();
            g.blowup_smooth(&v).unwrap().0
        }
        Op::Subdivide(i, m, k) => {
            if g.edge_count() == 0 {
                return g.clone();
            }
            let e = &g.edges()[i % g.edge_count()];
            let t = &e.length * ratio(k as i64, 8);
            g.subdivide_edge(&e.id.clone(), &t, m, 0).unwrap().0
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn laplacian_has_degree_zero(g in graph(), values in proptest::collection::vec(rational(), 1..=30)) {
        let f = function_on(&g, &values);
        prop_assert!(laplacian(&g, &f).unwrap().degree().is_zero());
    }

    #[test]
    fn laplacian_is_linear(
        g in graph(),
        fv in proptest::collection::vec(rational(), 1..=30),
        gv in proptest::collection::vec(rational(), 1..=30),
        a in rational(),
        b in rational(),
    ) {
        let f = function_on(&g, &fv);
        let h = function_on(&g, &gv);
        let combined = laplacian(&g, &f.linear_combination(&a, &h, &b)).unwrap();
        let expected = &laplacian(&g, &f).unwrap().scale(&a) + &laplacian(&g, &h).unwrap().scale(&b);
        prop_assert_eq!(combined, expected);
    }

    #[test]
    fn constants_are_harmonic(g in graph(), c in rational()) {
        prop_assert!(laplacian(&g, &PLFunction::constant(&g, &c)).unwrap().is_zero());
    }

    #[test]
    fn pullback_multiplies_degree(k in any::<usize>(), coefficients in proptest::collection::vec(rational(), 1..=40)) {
        let covers = fixture_covers();
        let cover = &covers[k % covers.len()];
        let d = Divisor::from_pairs(cover.base().vertex_ids().zip(coefficients.iter().cycle()).map(|(v, c)| (v, c.clone())));
        let pulled = cover.pullback(&d).unwrap();
        prop_assert_eq!(pulled.degree(), d.degree() * int(cover.degree() as i64));
    }

    #[test]
    fn chi_is_invariant_under_blowups(k in any::<usize>(), ops in proptest::collection::vec(op(), 1..=10)) {
        let fixtures = snc_fixtures();
        let mut g = fixtures[k % fixtures.len()].clone();
        let chi = g.euler_char();
        for o in &ops {
            g = apply(&g, o);
            prop_assert_eq!(g.euler_char(), chi);
        }
    }

    #[test]
    fn blowups_keep_snc_models(k in any::<usize>(), ops in proptest::collection::vec(prop_oneof![
        any::<usize>().prop_map(Op::Node),
        any::<usize>().prop_map(Op::Smooth),
    ], 1..=10)) {
        let fixtures = snc_fixtures();
        let mut g = fixtures[k % fixtures.len()].clone();
        for o in &ops {
            g = apply(&g, o);
        }
        prop_assert!(g.snc_edge_check());
    }

    #[test]
    fn jump_dictionary_round_trips(i in 0usize..4, j in 1u64..=50) {
        let p = [2u64, 3, 5, 7][i];
        prop_assert_eq!(jump_from_chi(p, chi_from_jump(p, j).unwrap()).unwrap(), j);
    }

    #[test]
    fn weakly_wild_chi_ignores_arms(i in 0usize..5, r in any::<u64>(), n in 1u64..=6) {
        let p = [2u64, 3, 5, 7, 11][i];
        let r = 1 + r % (p - 1);
        let g = build_weakly_wild_graph(p, r, n).unwrap();
        prop_assert_eq!(weakly_wild_region_chi(&g).unwrap(), 2 - p as i64);
    }

    #[test]
    fn pot_mult_classification_shape(nu in 1i64..=40, dlog in 0i64..=10) {
        let (over_k, over_k2) = classify_pot_mult(nu, dlog).unwrap();
        prop_assert_eq!(over_k2, KodairaType::I(2 * nu as u64));
        prop_assert_eq!(kodaira_skeleton(over_k).unwrap().euler_char(), 0);
        prop_assert_eq!(kodaira_skeleton(over_k2).unwrap().euler_char(), 0);
    }
}
