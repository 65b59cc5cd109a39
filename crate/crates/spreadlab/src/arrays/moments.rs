//! Shared machinery for boolean models that are cheapest to describe by their
//! all-ones moments `E[∏_{s∈ℱ} X_s]`.

use super::index::Subset;
use super::query::EventQuery;
use crate::error::{Error, Limits, Result};
use crate::prob::Prob;

/// Resolve a boolean query by inclusion–exclusion over its zero constraints:
/// `P(ones = 1, zeros = 0) = Σ_{W ⊆ zeros} (−1)^{|W|} m(ones ∪ W)`.
pub fn query_from_moments(
    q: &EventQuery,
    limits: &Limits,
    moment: impl Fn(&[Subset]) -> Result<Prob>,
) -> Result<Prob> {
    if q.is_contradictory() {
        return Ok(Prob::zero());
    }
    let ones = q.keys_with(1);
    let zeros = q.keys_with(0);
    if ones.len() + zeros.len() != q.len() {
        return Err(Error::NonBoolean(3));
    }
    limits.check(
        "inclusion–exclusion over zero constraints",
        1u128 << zeros.len().min(127),
    )?;
    let mut total = Prob::zero();
    let mut fam = ones.clone();
    for w in 0u64..(1u64 << zeros.len()) {
        fam.truncate(ones.len());
        fam.extend(
            zeros
                .iter()
                .enumerate()
                .filter(|(i, _)| w >> i & 1 == 1)
                .map(|(_, &s)| s),
        );
        let m = if fam.is_empty() {
            Prob::one()
        } else {
            moment(&fam)?
        };
        if w.count_ones() % 2 == 0 {
            total += &m;
        } else {
            total = total - m;
        }
    }
    Ok(total)
}

/// Law of `(X_c)_{c ∈ coords}` from all `2^r` moments via the superset Möbius
/// transform. Configuration index: bit `i` is the value of `coords[i]`.
pub fn joint_from_moments(
    coords: &[Subset],
    limits: &Limits,
    moment: impl Fn(&[Subset]) -> Result<Prob>,
) -> Result<Vec<Prob>> {
    let r = coords.len();
    limits.check(
        format!("joint law of {r} boolean coordinates"),
        1u128 << r.min(127),
    )?;
    let size = 1usize << r;
    let mut f = Vec::with_capacity(size);
    let mut fam = Vec::with_capacity(r);
    for mask in 0..size {
        fam.clear();
        fam.extend((0..r).filter(|i| mask >> i & 1 == 1).map(|i| coords[i]));
        f.push(if fam.is_empty() {
            Prob::one()
        } else {
            moment(&fam)?
        });
    }
    for i in 0..r {
        let bit = 1 << i;
        for mask in 0..size {
            if mask & bit == 0 {
                let upper = f[mask | bit].clone();
                f[mask] = &f[mask] - &upper;
            }
        }
    }
    Ok(f)
}
