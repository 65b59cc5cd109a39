mod common;

use common::{all_compositions, eq49, gamma_oracle};
use proptest::prelude::*;
use spreadlab::propagation::{closed_bound, gamma_table, k_domain};

const GRID: [f64; 4] = [1e-3, 1e-2, 1e-1, 1.0];

#[test]
fn base_case_matches_hand_substitution() {
    for (k, n, eta, theta, want) in [
        (3, 10, 0.01, 0.04, 0.08 + 2.0 * 0.24f64.sqrt()),
        (1, 2, 0.5, 0.0, 1.0),
        (2, 4, 0.0, 0.5, 1.0),
        (5, 12, 0.1, 1.0, 1.4 + 4.0 * (1.0f64 / 6.0 + 1.0).sqrt()),
    ] {
        let t = gamma_table(eta, theta, 1, n, k).unwrap();
        assert!((t.gamma[k - 1] - want).abs() < 1e-12, "k={k} n={n}");
    }
}

#[test]
fn composition_lists_are_complete() {
    // compositions of 4 into parts ≤ 2: 2+2, 2+1+1 (×3), 1+1+1+1
    assert_eq!(all_compositions(4, 4, 2).len(), 5);
    assert_eq!(all_compositions(4, 2, 4).len(), 4);
    assert_eq!(all_compositions(3, 1, 2).len(), 0);
}

#[test]
fn second_transcription_agrees_on_small_grid() {
    for d in 2..=3 {
        for n in (4 * d..=4 * d + 6).step_by(2) {
            for &eta in &GRID {
                for &theta in &GRID {
                    let kmax = (k_domain(d, n) as usize).min(5);
                    let t = gamma_table(eta, theta, d, n, kmax).unwrap();
                    for k in 1..=kmax {
                        let o = gamma_oracle(k, eta, theta, d, n);
                        assert!(
                            (t.gamma[k - 1] - o).abs() <= 1e-12 * o.max(1.0),
                            "d={d} n={n} η={eta} ϑ={theta} k={k}"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn closed_bound_dominates_on_grid() {
    for d in 1..=3 {
        for n in (4 * d).max(2)..=40 {
            for &eta in &GRID {
                for &theta in &GRID {
                    let kmax = (k_domain(d, n) as usize).min(5);
                    let t = gamma_table(eta, theta, d, n, kmax).unwrap();
                    for k in 1..=kmax {
                        assert!(closed_bound(k, d, n, eta, theta).unwrap() >= t.gamma[k - 1]);
                    }
                }
            }
        }
    }
}

#[test]
fn domain_errors() {
    assert!(gamma_table(0.1, 0.1, 2, 7, 1).is_err());
    assert!(gamma_table(1.5, 0.1, 1, 10, 1).is_err());
    assert!(gamma_table(0.1, -1.0, 1, 10, 1).is_err());
    assert!(gamma_table(0.1, 0.1, 1, 10, 6).is_err());
    assert!(closed_bound(1, 2, 10, 0.1, 2.0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn monotone_in_parameters(eta in 0.0f64..1.0, theta in 0.0f64..2.0, n in 10usize..30, k in 1usize..5) {
        let a = gamma_table(eta, theta, 1, n, k).unwrap().gamma[k - 1];
        let b = gamma_table((eta * 1.5).min(1.0), theta * 1.5, 1, n, k).unwrap().gamma[k - 1];
        prop_assert!(b >= a);
        prop_assert!((a - eq49(k, n, eta, theta)).abs() < 1e-12);
    }

    #[test]
    fn two_dim_monotone_in_k(eta in 0.0f64..0.5, theta in 0.0f64..1.0, n in 8usize..20) {
        let kmax = (k_domain(2, n) as usize).min(5);
        let t = gamma_table(eta, theta, 2, n, kmax).unwrap();
        prop_assert!(t.gamma.windows(2).all(|w| w[0] <= w[1] + 1e-12));
    }
}
