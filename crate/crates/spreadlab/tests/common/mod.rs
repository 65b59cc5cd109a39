//! Independent brute-force references shared by the oracle suites and the
//! acceptance run. Nothing here calls the library's algorithms; only model
//! constructors and plain data types are borrowed.
#![allow(dead_code)]

use std::collections::HashMap;

use num::{BigInt, BigRational, One, Zero};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spreadlab::arrays::{ArrayModel, DenseTable, Subset};
use spreadlab::{Limits, Prob};

pub fn q(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

pub fn exact(p: &Prob) -> BigRational {
    p.exact().expect("exact value").clone()
}

// ---------------------------------------------------------------- recursion

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// `γ_k` at `d = 1`, typed in directly.
pub fn eq49(k: usize, n: usize, eta: f64, theta: f64) -> f64 {
    (3 * k - 1) as f64 * eta + (k - 1) as f64 * (1.0 / (n / 2) as f64 + theta).sqrt()
}

fn compositions(
    k: usize,
    max_parts: usize,
    part_cap: usize,
    out: &mut Vec<Vec<usize>>,
    cur: &mut Vec<usize>,
) {
    if k == 0 {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        return;
    }
    if cur.len() == max_parts {
        return;
    }
    for j in 1..=k.min(part_cap) {
        cur.push(j);
        compositions(k - j, max_parts, part_cap, out, cur);
        cur.pop();
    }
}

/// All compositions of `k` into at most `max_parts` parts, each ≤ `part_cap`.
pub fn all_compositions(k: usize, max_parts: usize, part_cap: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    compositions(k, max_parts, part_cap, &mut out, &mut Vec::new());
    out
}

/// Second transcription of the recursion, maximizing by listing every
/// admissible composition.
pub fn gamma_oracle(k: usize, eta: f64, theta: f64, d: usize, n: usize) -> f64 {
    if d == 1 {
        return eq49(k, n, eta, theta);
    }
    let pw = |x: f64, e: f64| x.powf(e);
    let two_d = (1u64 << d) as f64;
    let t1 = 1.0 / ((n - 2 * d + 2) as f64).sqrt() + (two_d + 5.0) * eta.sqrt() + theta.sqrt();
    let t2 = (1u64 << (d - 1)) as f64 / (n - d + 1) as f64 + two_d * 3.0 * eta + theta;
    let e = 1.0 / (1u64 << (d - 1)) as f64;
    let t3 = (d - 1) as f64 / pw((n - 2 * d + 2) as f64, e)
        + (two_d + 5.0) * pw(eta, e)
        + pw(theta, e)
        + 3.0 * eta;
    let g1 = |j: usize| gamma_oracle(j, eta, t1, d - 1, n - 1) + (j + 1) as f64 * eta;
    let g2 = |j: usize| gamma_oracle(j, eta, t2, d - 1, n - 2);
    let g3 = |j: usize| 2.0 * g1(j) + g2(j) + j as f64 * t3;
    let g4 =
        |j: usize| (g3(j) + 1.0 / (n / 2) as f64 + (2 * j + 1) as f64 * eta).sqrt() + 2.0 * eta;
    let cap = binom((n - 2) / 2, d - 1);
    let best = all_compositions(k, n / 2 - d, cap)
        .into_iter()
        .map(|c| g1(c[0]) + c[1..].iter().map(|&j| g1(j) + g4(j)).sum::<f64>())
        .fold(f64::NEG_INFINITY, f64::max);
    (k + 1) as f64 * eta + best
}

// ---------------------------------------------------------------- arrays

/// Law of `𝑿_{[n]}` for the fair mixture of i.i.d. fair bits and equality
/// sampling, by enumerating the latent coin and labels.
pub fn closed_form_latent_law(n: usize) -> Vec<BigRational> {
    let coords = Subset::range(n).k_subsets(2);
    let r = coords.len();
    let mut law = vec![BigRational::zero(); 1 << r];
    let iid = q(1, 2) / BigRational::from_integer(BigInt::from(1u64 << r));
    for cell in law.iter_mut() {
        *cell += iid.clone();
    }
    let lab = q(1, 2) / BigRational::from_integer(BigInt::from(1u64 << n));
    for xi in 0..1usize << n {
        let mut idx = 0;
        for (pos, s) in coords.iter().enumerate() {
            let e = s.elems();
            if (xi >> (e[0] - 1) & 1) == (xi >> (e[1] - 1) & 1) {
                idx |= 1 << pos;
            }
        }
        law[idx] += lab.clone();
    }
    law
}

/// A dense table with random integer weights, normalized.
pub fn random_dense(n: usize, d: usize, m: usize, seed: u64) -> ArrayModel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = binom(n, d);
    let size = m.pow(r as u32);
    let w: Vec<i64> = (0..size).map(|_| rng.random_range(0..10)).collect();
    let total: i64 = w.iter().sum::<i64>().max(1);
    let probs = w.iter().map(|&x| Prob::ratio(x, total)).collect();
    ArrayModel::Dense(DenseTable::new(n, d, m, probs, &Limits::default()).expect("valid table"))
}

pub fn random_values(len: usize, seed: u64) -> Vec<Prob> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len)
        .map(|_| Prob::ratio(rng.random_range(-20..=20), 7))
        .collect()
}

/// `E[f | coordinates in `keep`]` evaluated at every full configuration, for
/// a table over `𝒳^r` with the first coordinate least significant.
pub fn conditional_on_positions(
    probs: &[BigRational],
    f: &[BigRational],
    m: usize,
    r: usize,
    keep: &[usize],
) -> Vec<BigRational> {
    let key =
        |idx: usize| -> Vec<usize> { keep.iter().map(|&p| idx / m.pow(p as u32) % m).collect() };
    let mut num: HashMap<Vec<usize>, BigRational> = HashMap::new();
    let mut den: HashMap<Vec<usize>, BigRational> = HashMap::new();
    for idx in 0..m.pow(r as u32) {
        let k = key(idx);
        *num.entry(k.clone()).or_insert_with(BigRational::zero) += &probs[idx] * &f[idx];
        *den.entry(k).or_insert_with(BigRational::zero) += probs[idx].clone();
    }
    (0..m.pow(r as u32))
        .map(|idx| {
            let k = key(idx);
            let dn = &den[&k];
            if dn.is_zero() {
                BigRational::zero()
            } else {
                &num[&k] / dn
            }
        })
        .collect()
}

pub fn expect(probs: &[BigRational], g: &[BigRational]) -> BigRational {
    probs
        .iter()
        .zip(g)
        .fold(BigRational::zero(), |acc, (p, x)| acc + p * x)
}

pub fn lp(probs: &[BigRational], g: &[BigRational], p: f64) -> f64 {
    use num::ToPrimitive;
    probs
        .iter()
        .zip(g)
        .map(|(w, x)| w.to_f64().unwrap() * x.to_f64().unwrap().abs().powf(p))
        .sum::<f64>()
        .powf(1.0 / p)
}

// ---------------------------------------------------------------- quasirandom

/// `∫ ∏_ε f_ε(ω_ε)` by nested loops over `Ω^{2d}`; `f` takes its
/// coordinates as a slice.
pub fn box_average_loops(d: usize, omega: usize, fs: &[&dyn Fn(&[usize]) -> f64]) -> f64 {
    let total = omega.pow(2 * d as u32);
    let mut acc = 0.0;
    let mut w0 = vec![0usize; d];
    let mut w1 = vec![0usize; d];
    for t in 0..total {
        let mut x = t;
        for i in 0..d {
            w0[i] = x % omega;
            x /= omega;
            w1[i] = x % omega;
            x /= omega;
        }
        let mut prod = 1.0;
        for (eps, f) in fs.iter().enumerate() {
            let pt: Vec<usize> = (0..d)
                .map(|i| if eps >> i & 1 == 1 { w1[i] } else { w0[i] })
                .collect();
            prod *= f(&pt);
        }
        acc += prod;
    }
    acc / total as f64
}

/// Homomorphisms `F → G` counted recursively with an adjacency set; both
/// graphs given by 1-based edge lists.
pub fn hom_count(vf: usize, ef: &[Vec<usize>], vg: usize, eg: &[Vec<usize>]) -> (u64, u64) {
    let mut adj = vec![vec![false; vg + 1]; vg + 1];
    for e in eg {
        adj[e[0]][e[1]] = true;
        adj[e[1]][e[0]] = true;
    }
    fn go(
        i: usize,
        vf: usize,
        ef: &[Vec<usize>],
        vg: usize,
        adj: &[Vec<bool>],
        phi: &mut Vec<usize>,
    ) -> u64 {
        if i > vf {
            return 1;
        }
        let mut c = 0;
        for x in 1..=vg {
            phi[i] = x;
            // prune on edges whose endpoints are both placed
            let ok = ef.iter().all(|e| {
                let (a, b) = (e[0].max(e[1]), e[0].min(e[1]));
                a != i || adj[phi[a]][phi[b]]
            });
            if ok {
                c += go(i + 1, vf, ef, vg, adj, phi);
            }
        }
        c
    }
    let mut phi = vec![0; vf + 1];
    (
        go(1, vf, ef, vg, &adj, &mut phi),
        (vg as u64).pow(vf as u32),
    )
}

/// Edge list of a graph mask using the colex edge order.
pub fn mask_edges(g: u64, n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut r = 0;
    for j in 2..=n {
        for i in 1..j {
            if g >> r & 1 == 1 {
                out.push((i, j));
            }
            r += 1;
        }
    }
    out
}

/// `γ(𝒜)` at `U` by scanning every graph and keeping those that avoid
/// `C(U,2)`.
pub fn family_gamma_scan(n: usize, member: &dyn Fn(u64) -> bool, u: [usize; 4]) -> BigRational {
    let e = n * (n - 1) / 2;
    let rank = |i: usize, j: usize| (j - 1) * (j - 2) / 2 + i - 1;
    let mut inside = 0u64;
    for a in 0..4 {
        for b in a + 1..4 {
            inside |= 1 << rank(u[a], u[b]);
        }
    }
    let [i, j, k, l] = u;
    let corners = [rank(i, k), rank(i, l), rank(j, k), rank(j, l)];
    let (mut hits, mut total) = (0i64, 0i64);
    for w in 0..1u64 << e {
        if w & inside != 0 {
            continue;
        }
        total += 1;
        if corners.iter().all(|&c| member(w | 1 << c)) {
            hits += 1;
        }
    }
    q(hits, total)
}

/// `min_j max(e_(j+1), j/N)` with excesses sorted descending and
/// `e_(N+1) = 0`: the least θ leaving at most `θN` excesses above θ.
pub fn theta_star_sorted(excess: &[BigRational]) -> BigRational {
    let n = excess.len();
    let mut e = excess.to_vec();
    e.sort_by(|a, b| b.cmp(a));
    (0..=n)
        .map(|j| {
            let next = if j < n {
                e[j].clone().max(BigRational::zero())
            } else {
                BigRational::zero()
            };
            next.max(q(j as i64, n as i64))
        })
        .min()
        .unwrap_or_else(BigRational::one)
}
