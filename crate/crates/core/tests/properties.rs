use abelmap::blowup::{distinguished_points, node_pairs, BlowupChoice, ConventionProfile, Gate};
use abelmap::harness::{random_graph, Context, GraphBounds, Suite};
use abelmap::jacobian::{abel_multidegree, apply_twist, is_quasistable, laplacian, Twister, TwistOracle};
use abelmap::tails::nested;
use abelmap::{CurveGraph, Subcurve};
use proptest::prelude::*;

fn graph_strategy(max_components: usize) -> impl Strategy<Value = CurveGraph> {
    (any::<u64>(), 0u64..1000, 0usize..=4, any::<bool>()).prop_map(move |(seed, index, extra, loops)| {
        random_graph(seed, index, &GraphBounds { max_components, max_extra_edges: extra, loops })
    })
}

/// Quasistability checked on every nonempty proper subcurve, connected or not.
fn quasistable_on_all_subcurves(g: &CurveGraph, d: &[i64]) -> bool {
    let p = g.n_components();
    (1..(1u128 << p) - 1).all(|bits| {
        let y = Subcurve(bits);
        let twice = 2 * y.indices().map(|i| d[i]).sum::<i64>() + g.k(y) as i64;
        let k2 = 2 * g.k(y) as i64;
        if y.contains(g.marked()) {
            0 < twice && twice <= k2
        } else {
            0 <= twice && twice < k2
        }
    })
}

fn degree_zero(p: usize, raw: &[i64]) -> Vec<i64> {
    let mut d: Vec<i64> = raw[..p].to_vec();
    let s: i64 = d.iter().sum();
    d[0] -= s;
    d
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn cut_enumeration_matches_subset_enumeration(g in graph_strategy(7)) {
        for k in 1..=3 {
            let mut a: Vec<_> = g.tails_by_cuts(k).into_iter().map(|t| (t.set, t.term)).collect();
            let mut b: Vec<_> = g.tails_by_subsets(Some(k)).into_iter().map(|t| (t.set, t.term)).collect();
            a.sort();
            b.sort();
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn tails_are_connected_with_connected_complement(g in graph_strategy(6)) {
        for z in g.enumerate_tails(None) {
            prop_assert!(!z.is_empty() && z != g.full());
            prop_assert!(g.is_connected(z) && g.is_connected(g.complement(z)));
            prop_assert_eq!(g.is_tail(g.complement(z)), true);
        }
    }

    #[test]
    fn tail_check_matches_all_subcurves(g in graph_strategy(5), raw in prop::collection::vec(-3i64..=3, 5)) {
        let d = degree_zero(g.n_components(), &raw);
        prop_assert_eq!(is_quasistable(&g, &d).unwrap().quasistable, quasistable_on_all_subcurves(&g, &d));
    }

    #[test]
    fn relations_are_symmetric(g in graph_strategy(5)) {
        let tails = g.enumerate_tails(None);
        for &z in &tails {
            for &w in &tails {
                let a = g.relate(z, w);
                let b = g.relate(w, z);
                prop_assert_eq!(a.is_terminal(), b.is_terminal());
                prop_assert_eq!(a.perfect, b.perfect);
                if g.precedes(z, w) {
                    prop_assert!(!g.precedes(w, z));
                }
            }
        }
    }

    #[test]
    fn nested_chains_are_increasing_k_tails(g in graph_strategy(6), a in 0usize..6, b in 0usize..6, s in 1usize..=3) {
        let p = g.n_components();
        let anchors = Subcurve::singleton(a % p).with(b % p);
        let chain = nested(&g, s, anchors).unwrap();
        for z in &chain {
            prop_assert!(g.is_tail(*z) && g.k(*z) == s);
            prop_assert!(anchors.is_subset(*z) && !z.contains(g.marked()));
        }
        for w in chain.windows(2) {
            prop_assert!(w[0].is_proper_subset(w[1]));
        }
    }

    #[test]
    fn twister_is_symmetric_and_vanishes_on_marked(g in graph_strategy(6)) {
        let tw = Twister::compute(&g).unwrap();
        let p = g.n_components();
        for a in 0..p {
            for b in 0..p {
                prop_assert_eq!(tw.alpha(a, b), tw.alpha(b, a));
                prop_assert_eq!(tw.alpha(a, b)[g.marked()], 0);
                prop_assert!(tw.alpha(a, b).iter().all(|&x| x >= 0));
            }
        }
    }

    #[test]
    fn twister_matches_oracle(g in graph_strategy(6)) {
        let tw = Twister::compute(&g).unwrap();
        let or = Twister::from_oracle(&g, None).unwrap();
        let p = g.n_components();
        for a in 0..p {
            for b in 0..p {
                prop_assert_eq!(tw.alpha(a, b), or.alpha(a, b));
                let q = apply_twist(&g, &abel_multidegree(&g, a, b), tw.alpha(a, b));
                prop_assert!(is_quasistable(&g, &q).unwrap().quasistable);
            }
        }
    }

    #[test]
    fn box_scan_agrees_with_class_scan(g in graph_strategy(4), raw in prop::collection::vec(-3i64..=3, 4)) {
        let d = degree_zero(g.n_components(), &raw);
        let mut o = TwistOracle::new(&g);
        prop_assert_eq!(o.scan_box(&d, 3), o.scan_classes(&d, 3).unwrap());
    }

    #[test]
    fn laplacian_rows_sum_to_zero(g in graph_strategy(7)) {
        let l = laplacian(&g);
        for row in &l {
            prop_assert_eq!(row.iter().sum::<i64>(), 0);
        }
        for (i, row) in l.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                prop_assert_eq!(*x, l[j][i]);
            }
        }
    }

    #[test]
    fn graph_json_round_trips(g in graph_strategy(7)) {
        let back = CurveGraph::from_json(&g.to_json()).unwrap();
        prop_assert_eq!(back.to_json(), g.to_json());
    }

    #[test]
    fn matchings_round_trip_through_centers(g in graph_strategy(6)) {
        for (r1, r2) in node_pairs(&g) {
            for y in 0..2 {
                let c = BlowupChoice::new(&g, r1, r2, y).unwrap();
                for (x, z) in c.centers(&g) {
                    prop_assert_eq!(BlowupChoice::from_components(&g, r1, r2, x, z).unwrap(), c);
                    prop_assert_eq!(BlowupChoice::from_components(&g, r2, r1, z, x).unwrap(), c);
                }
                for pt in distinguished_points(&c) {
                    let t = pt.triple(&g);
                    prop_assert!(t.iter().all(|&(a, b)| g.node(r1).side_of(a).is_some() && g.node(r2).side_of(b).is_some()));
                }
            }
        }
    }

    #[test]
    fn every_suite_passes(g in graph_strategy(5)) {
        let ctx = Context::new(&g, ConventionProfile::Reconstructed, Gate::Intersecting);
        for s in Suite::ALL {
            let t = ctx.run(s);
            prop_assert!(t.passed(), "{} failed: {:?}", s, t.violations);
        }
    }
}

#[test]
fn frozen_oracle_totals() {
    // computed once from the oracle side only; the tail side must keep matching
    let b = GraphBounds::default();
    let (mut alpha_sum, mut tails, mut quasistable) = (0i64, 0usize, 0usize);
    for i in 0..40 {
        let g = random_graph(2024, i, &b);
        let tw = Twister::compute(&g).unwrap();
        let p = g.n_components();
        for a in 0..p {
            for c in 0..p {
                alpha_sum += tw.alpha(a, c).iter().sum::<i64>();
            }
        }
        tails += g.enumerate_tails(None).len();
        if p <= 5 {
            quasistable += TwistOracle::new(&g).quasistable_multidegrees().len();
        }
    }
    assert_eq!((alpha_sum, tails, quasistable), (2370, 224, 140));
}

#[test]
fn first_generated_graph_is_a_banana() {
    let g = random_graph(2024, 0, &GraphBounds::default());
    assert_eq!(g.n_components(), 2);
    assert_eq!(g.n_nodes(), 2);
    assert_eq!(g.name(g.marked()), "C2");
}
