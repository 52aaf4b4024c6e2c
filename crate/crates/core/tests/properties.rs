use std::sync::Arc;

use proptest::prelude::*;
use rorg::acceptance::oracle::{brute_force_clique_size, closure_normal_form};
use rorg::decompose::{build_tree, DecomposeOptions};
use rorg::raag::{normalize, Automorphism, GeneratorSymbol, Letter, Word};
use rorg::rorg::Rorg;
use rorg::vcd::{fr_vcd, leaf_vcd, tree_vcd, FrLeafData};
use rorg::witness::witness_fr;
use rorg::{Graph, VertexSet};

fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut k = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if bits[k] {
                        edges.push((u, v));
                    }
                    k += 1;
                }
            }
            Graph::lettered(n, &edges).unwrap()
        })
    })
}

fn rorg(max_n: usize) -> impl Strategy<Value = Rorg> {
    graph(max_n).prop_flat_map(|g| {
        let n = g.len();
        let set = (1u64..1 << n).prop_map(VertexSet::from_bits);
        let coll = proptest::collection::vec(set, 0..=3);
        (Just(g), coll.clone(), coll).prop_map(|(g, p, f)| Rorg::new(Arc::new(g), p, f).unwrap())
    })
}

fn word_over(g: &Graph, max_len: usize) -> impl Strategy<Value = Word> {
    let n = g.len();
    proptest::collection::vec((0..n, any::<bool>()), 0..=max_len).prop_map(|ls| {
        Word(
            ls.into_iter()
                .map(|(vertex, inverse)| Letter { vertex, inverse })
                .collect(),
        )
    })
}

fn graph_and_words(max_n: usize, max_len: usize) -> impl Strategy<Value = (Graph, Word, Word)> {
    graph(max_n).prop_flat_map(move |g| {
        let (a, b) = (word_over(&g, max_len), word_over(&g, max_len));
        (Just(g), a, b)
    })
}

fn graph_and_generators(max_n: usize) -> impl Strategy<Value = (Arc<Graph>, Vec<GeneratorSymbol>)> {
    graph(max_n).prop_flat_map(|g| {
        let gens = Rorg::absolute(g.clone()).admissible_generators();
        let g = Arc::new(g);
        let pick = proptest::sample::select(gens);
        (Just(g), proptest::collection::vec(pick, 3))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn normal_form_is_idempotent_and_matches_closure((g, w, _) in graph_and_words(5, 7)) {
        let nf = normalize(&g, &w).unwrap();
        prop_assert_eq!(&normalize(&g, &nf).unwrap(), &nf);
        prop_assert_eq!(&nf, &closure_normal_form(&g, &w));
    }

    #[test]
    fn inverse_and_product_laws((g, u, v) in graph_and_words(6, 10)) {
        prop_assert!(normalize(&g, &u.concat(&u.inverse())).unwrap().is_empty());
        let nu = normalize(&g, &u).unwrap();
        let nv = normalize(&g, &v).unwrap();
        prop_assert_eq!(normalize(&g, &u.concat(&v)).unwrap(), normalize(&g, &nu.concat(&nv)).unwrap());
    }

    #[test]
    fn generators_are_invertible_homomorphisms((g, gens) in graph_and_generators(5)) {
        for &s in &gens {
            let phi = Automorphism::from_generator(Arc::clone(&g), s).unwrap();
            prop_assert!(phi.is_homomorphism().unwrap());
            let inv = phi.inverse().expect("generator inverse").unwrap();
            prop_assert!(phi.compose(&inv).unwrap().is_identity());
            prop_assert!(inv.compose(&phi).unwrap().is_identity());
        }
    }

    #[test]
    fn composition_is_associative((g, gens) in graph_and_generators(5)) {
        let f: Vec<Automorphism> = gens
            .iter()
            .map(|&s| Automorphism::from_generator(Arc::clone(&g), s).unwrap())
            .collect();
        let left = f[0].compose(&f[1]).unwrap().compose(&f[2]).unwrap();
        let right = f[0].compose(&f[1].compose(&f[2]).unwrap()).unwrap();
        prop_assert_eq!(left.images(), right.images());
    }

    #[test]
    fn maximum_clique_matches_brute_force(g in graph(9)) {
        let all = g.vertices();
        let best = g.least_max_clique(all);
        prop_assert!(g.is_clique(best));
        prop_assert_eq!(best.len(), brute_force_clique_size(&g, all));
        prop_assert!(g.center(all).is_subset(best));
    }

    #[test]
    fn preorder_is_reflexive_and_transitive(r in rorg(6)) {
        let vs: Vec<usize> = r.vertices().iter().collect();
        for &a in &vs {
            prop_assert!(r.leq(a, a));
            for &b in &vs {
                for &c in &vs {
                    if r.leq(a, b) && r.leq(b, c) {
                        prop_assert!(r.leq(a, c));
                    }
                }
            }
        }
    }

    #[test]
    fn saturation_is_monotone_and_idempotent(r in rorg(6)) {
        let s = r.saturate().unwrap();
        prop_assert!(s.is_saturated());
        for set in r.preserved() {
            prop_assert!(s.preserved().contains(set));
        }
        prop_assert_eq!(s.fixed(), r.fixed());
        for &set in s.preserved() {
            prop_assert!(s.is_invariant(set));
        }
        let again = s.saturate().unwrap();
        prop_assert_eq!(again.preserved(), s.preserved());
    }

    #[test]
    fn restriction_lives_on_the_subgroup(r in rorg(6)) {
        let s = r.saturate().unwrap();
        for &delta in s.preserved() {
            if delta == s.vertices() {
                continue;
            }
            let sub = s.restrict(delta);
            prop_assert_eq!(sub.graph().len(), delta.len());
            let (p, f) = s.restrict_collections(delta);
            for set in p.iter().chain(&f) {
                prop_assert!(set.is_subset(delta) && *set != delta && !set.is_empty());
            }
            prop_assert_eq!(sub.preserved().len(), p.len());
        }
    }

    #[test]
    fn tree_value_is_independent_of_choices(r in rorg(6), seed in 1u64..) {
        let a = build_tree(&r, &DecomposeOptions::default()).unwrap();
        let b = build_tree(&r, &DecomposeOptions { choice_seed: seed, ..Default::default() }).unwrap();
        prop_assert_eq!(tree_vcd(&a), tree_vcd(&b));
        prop_assert_eq!(tree_vcd(&a), a.leaves().into_iter().map(leaf_vcd).sum::<usize>());
        for (parent, child) in a.measure_edges().into_iter().chain(b.measure_edges()) {
            prop_assert!(child < parent);
        }
    }

    #[test]
    fn witnesses_verify_on_random_factor_systems(g in graph(6), cut in any::<u64>()) {
        // Components of the graph, some designated free when they are single vertices.
        let comps = g.components(g.vertices());
        let mut factors = Vec::new();
        let mut free = VertexSet::EMPTY;
        for (i, c) in comps.iter().enumerate() {
            if c.len() == 1 && cut >> i & 1 == 1 {
                free = free.union(*c);
            } else {
                factors.push(*c);
            }
        }
        prop_assume!(!factors.is_empty() && factors.len() + free.len() >= 2);
        let data = FrLeafData::new(Arc::new(g), &factors, free);
        let w = witness_fr(&data).unwrap();
        prop_assert_eq!(w.out_rank, fr_vcd(&data));
        let report = w.verify().unwrap();
        prop_assert!(report.passed(), "{:?}", report);
    }
}
