use num::BigInt;

use super::index::Subset;
use super::latent::TupleSet;
use super::query::EventQuery;
use crate::error::{pow_sat, Error, Limits, Result};
use crate::prob::Prob;

fn boolean_constraints(q: &EventQuery) -> Result<Vec<(Subset, bool)>> {
    q.iter()
        .map(|(s, a)| match a {
            0 => Ok((s, false)),
            1 => Ok((s, true)),
            _ => Err(Error::Symbol { symbol: a, size: 2 }),
        })
        .collect()
}

/// `X_s = 1_A(ξ_{i_1}, …, ξ_{i_d})` with i.i.d. uniform labels `ξ_i ∈ V`.
#[derive(Clone, Debug)]
pub struct GraphSampling {
    pub n: usize,
    pub a: TupleSet,
    /// tuples added when closing the input under coordinate permutations
    pub closure_added: usize,
}

impl GraphSampling {
    pub fn new(n: usize, mut a: TupleSet) -> Result<Self> {
        if a.d == 0 || n < a.d || n > 64 || a.v == 0 {
            return Err(Error::Domain(format!(
                "graph sampling needs 1 ≤ d ≤ n ≤ 64 and |V| ≥ 1 (n={n}, d={}, |V|={})",
                a.d, a.v
            )));
        }
        let closure_added = a.symmetrize();
        Ok(GraphSampling {
            n,
            a,
            closure_added,
        })
    }

    pub fn d(&self) -> usize {
        self.a.d
    }

    pub fn prob(&self, q: &EventQuery, limits: &Limits) -> Result<Prob> {
        if q.is_contradictory() {
            return Ok(Prob::zero());
        }
        let cons = boolean_constraints(q)?;
        let (count, m) = self.a.count(&cons, limits)?;
        Ok(Prob::ratio(
            BigInt::from(count),
            BigInt::from(self.a.v).pow(m as u32),
        ))
    }

    pub fn joint(&self, coords: &[Subset], limits: &Limits) -> Result<Vec<Prob>> {
        let sup = coords.iter().fold(Subset::EMPTY, |a, &b| a.union(b));
        let m = sup.len();
        let v = self.a.v;
        limits.check(
            format!("latent labelings V^{m} with |V|={v}"),
            pow_sat(v as u128, m as u32),
        )?;
        limits.check("joint law", 1u128 << coords.len().min(127))?;
        let pos: Vec<Vec<usize>> = coords
            .iter()
            .map(|s| {
                s.iter()
                    .map(|e| sup.position(e).expect("in support"))
                    .collect()
            })
            .collect();
        let mut counts = vec![0u64; 1 << coords.len()];
        let mut assign = vec![0usize; m];
        loop {
            let mut cfg = 0usize;
            for (i, p) in pos.iter().enumerate() {
                let idx = p.iter().fold(0, |a, &q| a * v + assign[q]);
                if self.a.members[idx] {
                    cfg |= 1 << i;
                }
            }
            counts[cfg] += 1;
            // odometer
            let mut k = 0;
            while k < m {
                assign[k] += 1;
                if assign[k] < v {
                    break;
                }
                assign[k] = 0;
                k += 1;
            }
            if k == m {
                break;
            }
        }
        let den = BigInt::from(v).pow(m as u32);
        Ok(counts
            .into_iter()
            .map(|c| Prob::ratio(BigInt::from(c), den.clone()))
            .collect())
    }
}

/// The semi-random array: with probability ½ all entries are i.i.d. fair
/// bits, otherwise `X_s = H(ξ_s)` where `H(v) = 1` exactly when the number of
/// coordinates `i` with `v_{[d]∖{i}} ∉ A` is even.
#[derive(Clone, Debug)]
pub struct HighDimSemiRandom {
    pub n: usize,
    pub d: usize,
    pub a: TupleSet,
    pub h: GraphSampling,
}

/// `H` on `V^d` from a symmetric `A ⊆ V^{d−1}`.
pub fn parity_lift(a: &TupleSet) -> TupleSet {
    let d = a.d + 1;
    let mut h = TupleSet::empty(a.v, d);
    let mut sub = vec![0usize; a.d];
    for idx in 0..h.members.len() {
        let labels = h.labels(idx);
        let mut outside = 0;
        for i in 0..d {
            let mut t = 0;
            for (j, &x) in labels.iter().enumerate() {
                if j != i {
                    sub[t] = x;
                    t += 1;
                }
            }
            if !a.contains(&sub) {
                outside += 1;
            }
        }
        h.members[idx] = outside % 2 == 0;
    }
    h
}

impl HighDimSemiRandom {
    pub fn new(n: usize, mut a: TupleSet) -> Result<Self> {
        let d = a.d + 1;
        if d < 2 || n < d {
            return Err(Error::Domain(format!(
                "semi-random array needs 2 ≤ d ≤ n (n={n}, d={d})"
            )));
        }
        a.symmetrize();
        let h = GraphSampling::new(n, parity_lift(&a))?;
        Ok(HighDimSemiRandom { n, d, a, h })
    }

    pub fn prob(&self, q: &EventQuery, limits: &Limits) -> Result<Prob> {
        if q.is_contradictory() {
            return Ok(Prob::zero());
        }
        let half = Prob::ratio(1, 2);
        let structured = self.h.prob(q, limits)?;
        Ok(&half * &(Prob::half_pow(q.len()) + structured))
    }

    pub fn joint(&self, coords: &[Subset], limits: &Limits) -> Result<Vec<Prob>> {
        let h = self.h.joint(coords, limits)?;
        let half = Prob::ratio(1, 2);
        let uniform = Prob::half_pow(coords.len());
        Ok(h.into_iter().map(|p| &half * &(&uniform + &p)).collect())
    }
}
