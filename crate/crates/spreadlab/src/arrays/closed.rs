use num::BigInt;

use super::index::Subset;
use super::moments::{joint_from_moments, query_from_moments};
use super::query::EventQuery;
use crate::error::{Error, Limits, Result};
use crate::prob::{binomial, binomial_big, Prob};

/// Number of connected components of the graph `(∪ℱ, ℱ)` for 2-sets.
pub fn components(family: &[Subset]) -> usize {
    let verts: Vec<usize> = family
        .iter()
        .fold(Subset::EMPTY, |a, &b| a.union(b))
        .elems();
    let mut parent: Vec<usize> = (0..verts.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let slot = |e: usize| verts.binary_search(&e).expect("vertex in support");
    let mut comps = verts.len();
    for s in family {
        let mut it = s.iter();
        let first = slot(it.next().expect("nonempty"));
        for e in it {
            let (a, b) = (find(&mut parent, first), find(&mut parent, slot(e)));
            if a != b {
                parent[a] = b;
                comps -= 1;
            }
        }
    }
    comps
}

/// The two-dimensional exchangeable array whose moments are
/// `½(½)^{|ℱ|} + ½·2^{−(|∪ℱ| − c(ℱ))}`: a fair mixture of i.i.d. fair bits
/// and graph sampling from the equality relation on `{0,1}`.
#[derive(Clone, Debug)]
pub struct ClosedFormTwoDim {
    pub n: usize,
}

impl ClosedFormTwoDim {
    pub fn new(n: usize) -> Result<Self> {
        if !(4..=64).contains(&n) {
            return Err(Error::Domain(format!(
                "closed-form array needs 4 ≤ n ≤ 64, got {n}"
            )));
        }
        Ok(ClosedFormTwoDim { n })
    }

    pub fn moment(family: &[Subset]) -> Prob {
        let v = family.iter().fold(Subset::EMPTY, |a, &b| a.union(b)).len();
        let c = components(family);
        let half = Prob::ratio(1, 2);
        &half * &(Prob::half_pow(family.len()) + Prob::half_pow(v - c))
    }

    pub fn prob(&self, q: &EventQuery, limits: &Limits) -> Result<Prob> {
        query_from_moments(q, limits, |f| Ok(Self::moment(f)))
    }

    pub fn joint(&self, coords: &[Subset], limits: &Limits) -> Result<Vec<Prob>> {
        joint_from_moments(coords, limits, |f| Ok(Self::moment(f)))
    }
}

/// `X_s = ∏_{i∈s} ξ_i` with independent `ξ_i ~ Bernoulli(p_i)`.
#[derive(Clone, Debug)]
pub struct ProductArray {
    pub d: usize,
    pub p: Vec<Prob>,
}

impl ProductArray {
    pub fn new(p: Vec<Prob>, d: usize) -> Result<Self> {
        if d == 0 || p.len() < d || p.len() > 64 {
            return Err(Error::Domain(format!(
                "product array needs 1 ≤ d ≤ n ≤ 64 (n={}, d={d})",
                p.len()
            )));
        }
        if p.iter().any(|x| x.is_negative() || *x > Prob::one()) {
            return Err(Error::Domain(
                "Bernoulli parameters must lie in [0,1]".into(),
            ));
        }
        Ok(ProductArray { d, p })
    }

    pub fn n(&self) -> usize {
        self.p.len()
    }

    pub fn moment(&self, family: &[Subset]) -> Prob {
        let sup = family.iter().fold(Subset::EMPTY, |a, &b| a.union(b));
        sup.iter().fold(Prob::one(), |acc, i| &acc * &self.p[i - 1])
    }

    /// Sum over the `2^{|∪ℱ|}` vertex labelings.
    pub fn prob(&self, q: &EventQuery, limits: &Limits) -> Result<Prob> {
        if q.is_contradictory() {
            return Ok(Prob::zero());
        }
        let sup = q.support();
        let verts = sup.elems();
        limits.check("vertex labelings", 1u128 << verts.len())?;
        let mut cons = Vec::with_capacity(q.len());
        for (s, a) in q.iter() {
            if a > 1 {
                return Err(Error::Symbol { symbol: a, size: 2 });
            }
            let m = s
                .iter()
                .fold(0u64, |m, e| m | 1 << sup.position(e).expect("in support"));
            cons.push((m, a == 1));
        }
        let mut total = Prob::zero();
        for xi in 0u64..(1u64 << verts.len()) {
            if cons.iter().any(|&(m, want)| (xi & m == m) != want) {
                continue;
            }
            let mut w = Prob::one();
            for (k, &v) in verts.iter().enumerate() {
                let p = &self.p[v - 1];
                w = if xi >> k & 1 == 1 {
                    &w * p
                } else {
                    &w * &(Prob::one() - p)
                };
            }
            total += &w;
        }
        Ok(total)
    }

    pub fn joint(&self, coords: &[Subset], limits: &Limits) -> Result<Vec<Prob>> {
        let sup = coords.iter().fold(Subset::EMPTY, |a, &b| a.union(b));
        let verts = sup.elems();
        limits.check("vertex labelings", 1u128 << verts.len())?;
        limits.check("joint law", 1u128 << coords.len().min(127))?;
        let masks: Vec<u64> = coords
            .iter()
            .map(|s| {
                s.iter()
                    .fold(0u64, |m, e| m | 1 << sup.position(e).expect("in support"))
            })
            .collect();
        let mut out = vec![Prob::zero(); 1 << coords.len()];
        for xi in 0u64..(1u64 << verts.len()) {
            let mut w = Prob::one();
            for (k, &v) in verts.iter().enumerate() {
                let p = &self.p[v - 1];
                w = if xi >> k & 1 == 1 {
                    &w * p
                } else {
                    &w * &(Prob::one() - p)
                };
                if w.is_zero() {
                    break;
                }
            }
            if w.is_zero() {
                continue;
            }
            let cfg = masks
                .iter()
                .enumerate()
                .fold(0usize, |c, (i, &m)| c | ((xi & m == m) as usize) << i);
            out[cfg] += &w;
        }
        Ok(out)
    }
}

/// Uniform law on configurations of `C([n],d)` with exactly `k` ones.
#[derive(Clone, Debug)]
pub struct FixedSizeEr {
    pub n: usize,
    pub d: usize,
    pub k: u64,
    total: u64,
}

impl FixedSizeEr {
    pub fn new(n: usize, d: usize, k: u64) -> Result<Self> {
        if d == 0 || d > n || n > 64 {
            return Err(Error::Domain(format!("need 1 ≤ d ≤ n ≤ 64 (n={n}, d={d})")));
        }
        let total = binomial(n as u64, d as u64);
        if total > u64::MAX as u128 || k as u128 > total {
            return Err(Error::Domain(format!("k={k} exceeds C({n},{d})")));
        }
        Ok(FixedSizeEr {
            n,
            d,
            k,
            total: total as u64,
        })
    }

    /// `P(o given entries are 1 and z given entries are 0)`.
    pub fn pattern(&self, ones: u64, zeros: u64) -> Prob {
        if ones > self.k || ones + zeros > self.total || zeros > self.total - self.k {
            return Prob::zero();
        }
        Prob::Exact(num::BigRational::new(
            binomial_big(self.total - ones - zeros, self.k - ones),
            binomial_big(self.total, self.k),
        ))
    }

    pub fn moment(&self, family: &[Subset]) -> Prob {
        self.pattern(family.len() as u64, 0)
    }

    pub fn prob(&self, q: &EventQuery) -> Result<Prob> {
        if q.is_contradictory() {
            return Ok(Prob::zero());
        }
        let (mut o, mut z) = (0u64, 0u64);
        for (_, a) in q.iter() {
            match a {
                0 => z += 1,
                1 => o += 1,
                _ => return Err(Error::Symbol { symbol: a, size: 2 }),
            }
        }
        Ok(self.pattern(o, z))
    }

    pub fn joint(&self, coords: &[Subset], limits: &Limits) -> Result<Vec<Prob>> {
        let r = coords.len();
        limits.check("joint law", 1u128 << r.min(127))?;
        let by_ones: Vec<Prob> = (0..=r as u64)
            .map(|o| self.pattern(o, r as u64 - o))
            .collect();
        Ok((0..1usize << r)
            .map(|cfg| by_ones[cfg.count_ones() as usize].clone())
            .collect())
    }

    pub fn denominator(&self) -> BigInt {
        binomial_big(self.total, self.k)
    }
}
