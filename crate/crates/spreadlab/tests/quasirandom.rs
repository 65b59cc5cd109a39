mod common;

use common::{
    box_average_loops, exact, family_gamma_scan, hom_count, mask_edges, q, theta_star_sorted,
};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spreadlab::arrays::Subset;
use spreadlab::constructions::{from_hypergraph, HypergraphSpec};
use spreadlab::quasirandom::*;
use spreadlab::{Limits, Prob};

fn random_kernel(d: usize, omega: usize, rng: &mut ChaCha8Rng, signs: bool) -> KernelFunction {
    KernelFunction::from_fn(d, omega, |_| {
        if signs {
            if rng.random_bool(0.5) {
                1.0
            } else {
                -1.0
            }
        } else {
            rng.random_range(-1.0..1.0)
        }
    })
    .unwrap()
}

#[test]
fn box_norm_matches_nested_loops() {
    let l = Limits::default();
    let eq = KernelFunction::from_fn(2, 2, |w| if w[0] == w[1] { 0.5 } else { -0.5 }).unwrap();
    let f = |w: &[usize]| if w[0] == w[1] { 0.5 } else { -0.5 };
    let want = box_average_loops(2, 2, &[&f, &f, &f, &f]).powf(0.25);
    assert!((box_norm(&eq, 1e-12, &l).unwrap() - want).abs() < 1e-12);
    assert!((want - 0.5).abs() < 1e-12);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for d in [2, 3] {
        let k = random_kernel(d, 3, &mut rng, false);
        let g = |w: &[usize]| k.value(w);
        let refs: Vec<&dyn Fn(&[usize]) -> f64> = vec![&g; 1 << d];
        let lib = box_average(&vec![&k; 1 << d], &l).unwrap();
        assert!((lib - box_average_loops(d, 3, &refs)).abs() < 1e-12);
    }
}

#[test]
fn gowers_cauchy_schwarz_and_triangle() {
    let l = Limits::default();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for trial in 0..100 {
        let d = 2 + trial % 2;
        let omega = 2 + trial % 3;
        let fs: Vec<KernelFunction> = (0..1 << d)
            .map(|_| random_kernel(d, omega, &mut rng, trial % 4 == 0))
            .collect();
        assert!(gcs_defect(&fs, 1e-12, &l).unwrap() <= 1e-9);
        let sum = KernelFunction::new(
            d,
            omega,
            fs[0]
                .values
                .iter()
                .zip(&fs[1].values)
                .map(|(a, b)| a + b)
                .collect(),
        )
        .unwrap();
        let lhs = box_norm(&sum, 1e-12, &l).unwrap();
        assert!(
            lhs <= box_norm(&fs[0], 1e-12, &l).unwrap()
                + box_norm(&fs[1], 1e-12, &l).unwrap()
                + 1e-9
        );
    }
    let mut zero_one = vec![KernelFunction::constant(2, 3, 1.0).unwrap(); 4];
    zero_one[2] = KernelFunction::constant(2, 3, 0.0).unwrap();
    assert_eq!(gcs_defect(&zero_one, 1e-12, &l).unwrap(), 0.0);
}

#[test]
fn uniformity_of_complete_graph_by_hand() {
    // |V| = 4: g = 1_{x≠y} − 3/4 has box average (1/256)·Σ over 4-cycles
    let l = Limits::default();
    let h = HypergraphSpec::complete(4, 2);
    let u = box_uniformity(&h, &l).unwrap();
    let g = |w: &[usize]| if w[0] != w[1] { 0.25 } else { -0.75 };
    let want = box_average_loops(2, 4, &[&g, &g, &g, &g]);
    assert!((u.rho_power.to_f64() - want).abs() < 1e-15);
    assert_eq!(u.density, Prob::ratio(3, 4));
}

#[test]
fn prop82_on_seeded_graphs() {
    let l = Limits::default();
    for seed in 0..10 {
        let h = HypergraphSpec::random(8, 2, 0.5, seed);
        let a = prop82_audit(&h, 4, 1e-12, &l).unwrap();
        assert!(a.part_i && a.part_ii, "{a:?}");
    }
    for h in [
        HypergraphSpec::disjoint_cliques(&[4, 4]),
        HypergraphSpec::complete(6, 2),
        HypergraphSpec::new(6, 2, vec![]).unwrap(),
    ] {
        let a = prop82_audit(&h, 4, 1e-12, &l).unwrap();
        assert!(a.part_i && a.part_ii);
    }
    assert!(
        prop82_audit(&HypergraphSpec::disjoint_cliques(&[4, 4]), 4, 1e-12, &l)
            .unwrap()
            .uniformity
            .rho
            > 0.3
    );
}

#[test]
fn homomorphism_density_against_counter_and_moment() {
    let l = Limits::default();
    let patterns: Vec<(usize, Vec<Vec<usize>>)> = vec![
        (2, vec![vec![1, 2]]),
        (3, vec![vec![1, 2], vec![2, 3], vec![1, 3]]),
        (4, vec![vec![1, 3], vec![1, 4], vec![2, 3], vec![2, 4]]),
        (4, vec![vec![1, 2], vec![2, 3], vec![3, 4]]),
    ];
    for seed in 0..5 {
        let g = HypergraphSpec::random(6, 2, 0.5, 40 + seed);
        for (vf, ef) in &patterns {
            let f = HypergraphSpec::new(*vf, 2, ef.clone()).unwrap();
            let t = homomorphism_density(&f, &g, &l).unwrap();
            let (hits, total) = hom_count(*vf, ef, g.v, &g.edges);
            assert_eq!(exact(&t), q(hits as i64, total as i64));
            let model = from_hypergraph(&g, (*vf).max(2)).unwrap();
            let fam: Vec<Subset> = ef.iter().map(|e| Subset::of(e)).collect();
            assert_eq!(model.moment(&fam).unwrap(), t);
        }
    }
}

fn triangle(g: u64, n: usize) -> bool {
    let e = mask_edges(g, n);
    let has = |a: usize, b: usize| e.contains(&(a.min(b), a.max(b)));
    (1..=n).any(|a| (a + 1..=n).any(|b| (b + 1..=n).any(|c| has(a, b) && has(a, c) && has(b, c))))
}

#[test]
fn family_gamma_matches_scan_and_is_u_independent() {
    let l = Limits::default();
    let mc = MonteCarlo::default();
    let n = 6;
    for name in ["triangle", "edge-count>=8", "contains-K4"] {
        let a = GraphFamily::builtin(name, n)
            .unwrap()
            .materialize(&l)
            .unwrap();
        let us = Subset::range(n).k_subsets(4);
        let first = family_gamma(&a, &us[0].elems(), &mc, &l).unwrap();
        assert!(first.is_exact());
        for u in &us {
            assert_eq!(
                family_gamma(&a, &u.elems(), &mc, &l).unwrap().value,
                first.value,
                "{name} at {u}"
            );
        }
        let e = us[3].elems();
        let scan = family_gamma_scan(n, &|g| a.contains(g), [e[0], e[1], e[2], e[3]]);
        assert_eq!(exact(&first.value), scan);
    }
    let tri = GraphFamily::builtin("triangle", n)
        .unwrap()
        .materialize(&l)
        .unwrap();
    let scan = family_gamma_scan(n, &|g| triangle(g, n), [1, 2, 3, 4]);
    assert_eq!(
        exact(&family_gamma(&tri, &[1, 2, 3, 4], &mc, &l).unwrap().value),
        scan
    );
}

#[test]
fn theta_audit_matches_second_implementation() {
    let l = Limits::default();
    let mc = MonteCarlo::default();
    let n = 6;
    for fam in [
        GraphFamily::builtin("triangle", n)
            .unwrap()
            .materialize(&l)
            .unwrap(),
        GraphFamily::random(n, 0.5, 3, &l).unwrap(),
        GraphFamily::builtin("everything", n)
            .unwrap()
            .materialize(&l)
            .unwrap(),
    ] {
        let audit = theta_quasirandom_audit(&fam, &mc, &l).unwrap();
        let mu = exact(&fam.density(&mc).value);
        let mu4 = &mu * &mu * &mu * &mu;
        let excess: Vec<_> = Subset::range(n)
            .k_subsets(4)
            .into_iter()
            .map(|u| {
                let e = u.elems();
                family_gamma_scan(n, &|g| fam.contains(g), [e[0], e[1], e[2], e[3]]) - &mu4
            })
            .collect();
        assert_eq!(exact(&audit.theta_star), theta_star_sorted(&excess));
    }
}

#[test]
fn predicate_families_are_sampled_with_errors() {
    let l = Limits::default();
    let a = GraphFamily::builtin("edge-count>=20", 8).unwrap();
    let mc = MonteCarlo {
        samples: 4000,
        seed: 1,
    };
    let g = family_gamma(&a, &[1, 2, 3, 4], &mc, &l).unwrap();
    assert!(!g.is_exact() && g.standard_error.unwrap() >= 0.0);
    assert_eq!(
        family_gamma(&a, &[1, 2, 3, 4], &mc, &l).unwrap().value,
        g.value
    );
    assert!(smash_search(&a, 3, &l).is_err());
    // same family exactly at n = 6 agrees with the sampler within a few errors
    let small = GraphFamily::builtin("edge-count>=8", 6).unwrap();
    let est = family_gamma(
        &small,
        &[1, 2, 3, 4],
        &MonteCarlo {
            samples: 20000,
            seed: 2,
        },
        &l,
    )
    .unwrap();
    let ex = family_gamma(&small.materialize(&l).unwrap(), &[1, 2, 3, 4], &mc, &l).unwrap();
    assert!(
        (est.value.to_f64() - ex.value.to_f64()).abs() < 5.0 * est.standard_error.unwrap() + 1e-3
    );
}

#[test]
fn smash_and_invariance() {
    let l = Limits::default();
    let dense = GraphFamily::random(6, 0.95, 17, &l).unwrap();
    assert!(dense.density(&MonteCarlo::default()).value.to_f64() >= 0.9);
    let w = smash_search(&dense, 3, &l)
        .unwrap()
        .expect("dense family smashes");
    let km: Vec<(usize, usize)> = vec![
        (w.k_set[0], w.k_set[1]),
        (w.k_set[0], w.k_set[2]),
        (w.k_set[1], w.k_set[2]),
    ];
    assert!(dense.contains(w.w));
    for e in km {
        assert!(dense.contains(w.w | 1 << edge_rank(e.0, e.1)));
        assert_eq!(w.w >> edge_rank(e.0, e.1) & 1, 0);
    }
    let parity = GraphFamily::builtin("edge-parity", 5)
        .unwrap()
        .materialize(&l)
        .unwrap();
    assert!(smash_search(&parity, 2, &l).unwrap().is_none());
    let tri = GraphFamily::builtin("triangle", 6)
        .unwrap()
        .materialize(&l)
        .unwrap();
    assert!(isomorphic_invariant_check(&tri, &l).unwrap().invariant);
    let rnd = GraphFamily::random(5, 0.5, 4, &l).unwrap();
    let r = isomorphic_invariant_check(&rnd, &l).unwrap();
    assert!(!r.invariant);
    let (x, y) = r.transposition.unwrap();
    let mut perm: Vec<usize> = (1..=5).collect();
    perm.swap(x - 1, y - 1);
    let g = r.graph.unwrap();
    assert!(rnd.contains(g) && !rnd.contains(permute_graph(g, &perm)));
}

#[test]
fn family_ingestion_formats() {
    let l = Limits::default();
    let a = GraphFamily::parse_graph_list(4, "1 2\n3 4\n\nempty\n\n2 3\n", &l).unwrap();
    let mut want = vec![
        0,
        graph_of_edges(&[(2, 3)]),
        graph_of_edges(&[(1, 2), (3, 4)]),
    ];
    want.sort_unstable();
    assert_eq!(a.members().unwrap(), want);
    let back = GraphFamily::from_bitset_bytes(4, &a.to_bitset_bytes().unwrap(), &l).unwrap();
    assert_eq!(back.members().unwrap(), want);
    assert!(GraphFamily::parse_graph_list(4, "1 5\n", &l).is_err());
    assert!(GraphFamily::from_bitset_bytes(4, &[0u8; 3], &l).is_err());
    assert!(GraphFamily::builtin("nonsense", 5).is_err());
    assert!(GraphFamily::random(8, 0.5, 0, &Limits::new(1 << 20)).is_err());
}
