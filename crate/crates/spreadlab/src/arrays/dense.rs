use super::index::{DSubsetIndex, Subset};
use super::query::EventQuery;
use crate::error::{pow_sat, Error, Limits, Result};
use crate::prob::Prob;

/// Configuration index over `coords` in radix `m`, `coords[0]` least
/// significant.
pub fn config_digits(mut idx: usize, m: usize, r: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(r);
    for _ in 0..r {
        out.push((idx % m) as u32);
        idx /= m;
    }
    out
}

pub fn config_index(digits: &[u32], m: usize) -> usize {
    digits.iter().rev().fold(0, |a, &x| a * m + x as usize)
}

/// An explicit law on `𝒳^{C([n],d)}`.
#[derive(Clone, Debug)]
pub struct DenseTable {
    pub n: usize,
    pub d: usize,
    pub m: usize,
    index: DSubsetIndex,
    pub probs: Vec<Prob>,
}

impl DenseTable {
    pub fn new(n: usize, d: usize, m: usize, probs: Vec<Prob>, limits: &Limits) -> Result<Self> {
        let index = DSubsetIndex::new(n, d)?;
        if m == 0 {
            return Err(Error::Domain("alphabet must be nonempty".into()));
        }
        let want = pow_sat(m as u128, index.len() as u32);
        limits.check("dense table", want)?;
        if probs.len() as u128 != want {
            return Err(Error::Shape(format!(
                "table has {} entries, expected {want}",
                probs.len()
            )));
        }
        if probs.iter().any(Prob::is_negative) {
            return Err(Error::Domain("negative probability".into()));
        }
        let total = Prob::sum(&probs);
        let ok = match &total {
            Prob::Exact(_) => total == Prob::one(),
            Prob::Float(x) => (x - 1.0).abs() <= 1e-12,
        };
        if !ok {
            return Err(Error::Domain(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        Ok(DenseTable {
            n,
            d,
            m,
            index,
            probs,
        })
    }

    pub fn coords(&self) -> Vec<Subset> {
        self.index.all()
    }

    pub fn prob(&self, q: &EventQuery) -> Result<Prob> {
        if q.is_contradictory() {
            return Ok(Prob::zero());
        }
        let mut fixed = Vec::with_capacity(q.len());
        for (s, a) in q.iter() {
            let r = self.index.rank(s)?;
            fixed.push((self.m.pow(r as u32), a as usize));
        }
        let mut total = Prob::zero();
        for (idx, p) in self.probs.iter().enumerate() {
            if fixed.iter().all(|&(w, a)| idx / w % self.m == a) {
                total += p;
            }
        }
        Ok(total)
    }

    pub fn joint(&self, coords: &[Subset]) -> Result<Vec<Prob>> {
        let weights: Vec<usize> = coords
            .iter()
            .map(|&s| self.index.rank(s).map(|r| self.m.pow(r as u32)))
            .collect::<Result<_>>()?;
        let mut out = vec![Prob::zero(); self.m.pow(coords.len() as u32)];
        for (idx, p) in self.probs.iter().enumerate() {
            let sub = weights
                .iter()
                .rev()
                .fold(0, |a, &w| a * self.m + idx / w % self.m);
            out[sub] += p;
        }
        Ok(out)
    }
}
