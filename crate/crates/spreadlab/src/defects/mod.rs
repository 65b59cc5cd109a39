//! Distances from exact symmetry and independence: spreadability, box and
//! `γ`-independence, dissociativity, and mixing between subarray σ-algebras.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::arrays::dense::config_digits;
use crate::arrays::{enumerate_boxes, ArrayModel, BoxKind, BoxSpec, EventQuery, Subset, Symbol};
use crate::error::{pow_sat, Error, Limits, Result};
use crate::prob::Prob;
use crate::report::{serialize_prob, serialize_probs};

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Witness {
    /// two supports whose subarray laws are compared
    Pair { j: Subset, k: Subset },
    BoxSymbol {
        #[serde(rename = "box")]
        bx: BoxSpec,
        symbol: Symbol,
    },
    Family {
        family: Vec<Subset>,
        assignment: Vec<Symbol>,
    },
    /// `A` and `B` as sets of configuration indices of `𝑿_J` and `𝑿_K`
    Events {
        j: Subset,
        k: Subset,
        a: Vec<usize>,
        b: Vec<usize>,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct DefectReport {
    #[serde(serialize_with = "serialize_prob")]
    pub value: Prob,
    pub witness: Option<Witness>,
    pub scanned: u64,
    pub capped: bool,
    /// per-size maxima (spreadability only)
    #[serde(
        skip_serializing_if = "Vec::is_empty",
        serialize_with = "serialize_probs"
    )]
    pub per_size: Vec<Prob>,
}

impl DefectReport {
    fn empty() -> Self {
        DefectReport {
            value: Prob::zero(),
            witness: None,
            scanned: 0,
            capped: false,
            per_size: Vec::new(),
        }
    }

    /// Replace the current maximum only on strict improvement, so the first
    /// candidate in scan order wins ties.
    fn offer(&mut self, value: Prob, witness: impl FnOnce() -> Witness) {
        if self.witness.is_none() || value > self.value {
            self.value = value;
            self.witness = Some(witness());
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoxMode {
    OneSided,
    Absolute,
}

fn total_variation(p: &[Prob], q: &[Prob]) -> Prob {
    let s = Prob::sum(
        p.iter()
            .zip(q)
            .map(|(a, b)| (a - b).abs())
            .collect::<Vec<_>>()
            .iter(),
    );
    &Prob::ratio(1, 2) * &s
}

pub fn spreadability_defect(
    model: &ArrayModel,
    size_cap: usize,
    limits: &Limits,
) -> Result<DefectReport> {
    let (n, d) = (model.n(), model.d());
    if size_cap < d || size_cap > n {
        return Err(Error::Domain(format!(
            "size cap {size_cap} must lie in [d, n] = [{d}, {n}]"
        )));
    }
    let mut rep = DefectReport::empty();
    for m in d..=size_cap {
        let sets = Subset::range(n).k_subsets(m);
        let laws: Vec<Vec<Prob>> = sets
            .par_iter()
            .map(|&j| model.subarray_law(j, limits))
            .collect::<Result<_>>()?;
        // identical laws collapse into one class
        let mut reps: Vec<usize> = Vec::new();
        let mut class = vec![0usize; sets.len()];
        for (i, law) in laws.iter().enumerate() {
            class[i] = match reps.iter().position(|&r| laws[r] == *law) {
                Some(c) => c,
                None => {
                    reps.push(i);
                    reps.len() - 1
                }
            };
        }
        let c = reps.len();
        let mut tv = vec![Prob::zero(); c * c];
        for x in 0..c {
            for y in x + 1..c {
                let v = total_variation(&laws[reps[x]], &laws[reps[y]]);
                tv[x * c + y] = v.clone();
                tv[y * c + x] = v;
            }
        }
        let mut best: Option<(Prob, usize, usize)> = None;
        for i in 0..sets.len() {
            for k in i + 1..sets.len() {
                let v = &tv[class[i] * c + class[k]];
                if best.as_ref().is_none_or(|b| *v > b.0) {
                    best = Some((v.clone(), i, k));
                }
            }
        }
        rep.scanned += (sets.len() * sets.len().saturating_sub(1) / 2) as u64;
        match best {
            Some((v, i, k)) => {
                rep.per_size.push(v.clone());
                rep.offer(v, || Witness::Pair {
                    j: sets[i],
                    k: sets[k],
                });
            }
            None => rep.per_size.push(Prob::zero()),
        }
    }
    Ok(rep)
}

fn singles(
    model: &ArrayModel,
    s: &[Symbol],
    limits: &Limits,
) -> Result<HashMap<(Subset, Symbol), Prob>> {
    let keys: Vec<(Subset, Symbol)> = model
        .index()
        .all()
        .into_iter()
        .flat_map(|t| s.iter().map(move |&a| (t, a)))
        .collect();
    let vals: Vec<Prob> = keys
        .par_iter()
        .map(|&(t, a)| model.event_probability_with(&EventQuery::new().with(t, a), limits))
        .collect::<Result<_>>()?;
    Ok(keys.into_iter().zip(vals).collect())
}

fn check_symbols(model: &ArrayModel, s: &[Symbol]) -> Result<()> {
    if s.is_empty() {
        return Err(Error::Domain("symbol set must be nonempty".into()));
    }
    for &a in s {
        if a as usize >= model.alphabet() {
            return Err(Error::Symbol {
                symbol: a,
                size: model.alphabet(),
            });
        }
    }
    Ok(())
}

/// `max_{B, a∈S} P(⋂_{s∈B}[X_s=a]) − ∏_{s∈B} P(X_s=a)`, clamped at zero or in
/// absolute value.
pub fn box_independence_defect(
    model: &ArrayModel,
    s: &[Symbol],
    mode: BoxMode,
    limits: &Limits,
) -> Result<DefectReport> {
    check_symbols(model, s)?;
    let (n, d) = (model.n(), model.d());
    if n < 2 * d {
        return Err(Error::Domain(format!(
            "box defect needs n ≥ 2d (n={n}, d={d})"
        )));
    }
    let boxes = enumerate_boxes(n, d, BoxKind::Full)?;
    let single = singles(model, s, limits)?;
    let cands: Vec<(usize, Symbol)> = (0..boxes.len())
        .flat_map(|b| s.iter().map(move |&a| (b, a)))
        .collect();
    let vals: Vec<Prob> = cands
        .par_iter()
        .map(|&(b, a)| {
            let members = boxes[b].members();
            let joint = model.event_probability_with(&EventQuery::all(&members, a), limits)?;
            let prod = members
                .iter()
                .fold(Prob::one(), |acc, &t| &acc * &single[&(t, a)]);
            let diff = &joint - &prod;
            Ok(match mode {
                BoxMode::OneSided => diff.clamp_nonneg(),
                BoxMode::Absolute => diff.abs(),
            })
        })
        .collect::<Result<_>>()?;
    let mut rep = DefectReport::empty();
    rep.scanned = cands.len() as u64;
    for (v, &(b, a)) in vals.into_iter().zip(&cands) {
        rep.offer(v, || Witness::BoxSymbol {
            bx: boxes[b].clone(),
            symbol: a,
        });
    }
    Ok(rep)
}

/// Families `ℱ ⊆ C([n],d)` with `1 ≤ |ℱ| ≤ k_max` and `|∪ℱ| ≤ u_max`, in
/// lexicographic order of their colex-rank sequences. Stops (returning
/// `true`) once `cap` families have been produced.
pub fn small_support_families(
    all: &[Subset],
    k_max: usize,
    u_max: usize,
    cap: u64,
) -> (Vec<Vec<usize>>, bool) {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(
        start: usize,
        supp: Subset,
        cur: &mut Vec<usize>,
        all: &[Subset],
        k_max: usize,
        u_max: usize,
        cap: u64,
        out: &mut Vec<Vec<usize>>,
    ) -> bool {
        for i in start..all.len() {
            let s2 = supp.union(all[i]);
            if s2.len() > u_max {
                continue;
            }
            cur.push(i);
            if out.len() as u64 >= cap {
                cur.pop();
                return true;
            }
            out.push(cur.clone());
            if cur.len() < k_max && go(i + 1, s2, cur, all, k_max, u_max, cap, out) {
                cur.pop();
                return true;
            }
            cur.pop();
        }
        false
    }
    let capped = go(0, Subset::EMPTY, &mut cur, all, k_max, u_max, cap, &mut out);
    (out, capped)
}

/// `support` padded with the smallest missing elements up to `size`.
fn pad_support(support: Subset, size: usize) -> Subset {
    let mut u = support;
    let mut e = 1;
    while u.len() < size {
        u = u.with(e);
        e += 1;
    }
    u
}

/// Entry `k − 1` is `max |P(⋂_{s∈ℱ}[X_s=a_s]) − ∏ P(X_s=a_s)|` over `|ℱ| = k`,
/// `|∪ℱ| ≤ n/2` and `a ∈ S^ℱ`.
pub fn gamma_independence_defect(
    model: &ArrayModel,
    s: &[Symbol],
    k_max: usize,
    limits: &Limits,
) -> Result<Vec<DefectReport>> {
    check_symbols(model, s)?;
    let (n, d, m) = (model.n(), model.d(), model.alphabet());
    let u_max = n / 2;
    if u_max < d {
        return Err(Error::Domain(format!("n/2 < d (n={n}, d={d})")));
    }
    let room = crate::prob::binomial(u_max as u64, d as u64);
    if k_max == 0 || k_max as u128 > room {
        return Err(Error::Domain(format!(
            "k_max must lie in [1, C(⌊n/2⌋,d)] = [1, {room}]"
        )));
    }
    let all = model.index().all();
    let (families, capped) = small_support_families(&all, k_max, u_max, limits.cap);
    let single = singles(model, s, limits)?;

    // shared laws of padded supports, when small
    let coords_u = crate::prob::binomial(u_max as u64, d as u64) as u32;
    let use_laws = pow_sat(m as u128, coords_u) <= 1 << 16;
    let mut laws: HashMap<Subset, Vec<Prob>> = HashMap::new();
    if use_laws {
        let mut us: Vec<Subset> = families
            .iter()
            .map(|f| pad_support(f.iter().fold(Subset::EMPTY, |a, &i| a.union(all[i])), u_max))
            .collect();
        us.sort();
        us.dedup();
        let computed: Vec<Vec<Prob>> = us
            .par_iter()
            .map(|&u| model.subarray_law(u, limits))
            .collect::<Result<_>>()?;
        laws = us.into_iter().zip(computed).collect();
    }

    let assignments = |k: usize| -> Vec<Vec<Symbol>> {
        (0..pow_sat(s.len() as u128, k as u32) as usize)
            .map(|idx| {
                config_digits(idx, s.len(), k)
                    .into_iter()
                    .map(|i| s[i as usize])
                    .collect()
            })
            .collect()
    };
    let per_k_assign: Vec<Vec<Vec<Symbol>>> = (0..=k_max).map(assignments).collect();

    let scored: Vec<(Prob, usize)> = families
        .par_iter()
        .map(|f| {
            let fam: Vec<Subset> = f.iter().map(|&i| all[i]).collect();
            let k = fam.len();
            let joint_of: Box<dyn Fn(&[Symbol]) -> Result<Prob> + Sync> = if use_laws {
                let u = pad_support(fam.iter().fold(Subset::EMPTY, |a, &b| a.union(b)), u_max);
                let cu = u.k_subsets(d);
                let pos: Vec<usize> = fam
                    .iter()
                    .map(|t| cu.binary_search(t).expect("inside padded support"))
                    .collect();
                let law = &laws[&u];
                let mut marg = vec![Prob::zero(); m.pow(k as u32)];
                for (idx, p) in law.iter().enumerate() {
                    if p.is_zero() {
                        continue;
                    }
                    let digits = config_digits(idx, m, cu.len());
                    let sub = pos
                        .iter()
                        .rev()
                        .fold(0usize, |acc, &q| acc * m + digits[q] as usize);
                    marg[sub] += p;
                }
                Box::new(move |a: &[Symbol]| {
                    Ok(marg[a.iter().rev().fold(0usize, |acc, &x| acc * m + x as usize)].clone())
                })
            } else {
                let fam = fam.clone();
                Box::new(move |a: &[Symbol]| {
                    model.event_probability_with(
                        &EventQuery::from_pairs(fam.iter().copied().zip(a.iter().copied())),
                        limits,
                    )
                })
            };
            let mut best: Option<(Prob, usize)> = None;
            for (ai, a) in per_k_assign[k].iter().enumerate() {
                let joint = joint_of(a)?;
                let prod = fam
                    .iter()
                    .zip(a)
                    .fold(Prob::one(), |acc, (&t, &x)| &acc * &single[&(t, x)]);
                let v = (&joint - &prod).abs();
                if best.as_ref().is_none_or(|b| v > b.0) {
                    best = Some((v, ai));
                }
            }
            Ok(best.expect("at least one assignment"))
        })
        .collect::<Result<_>>()?;

    let mut reps: Vec<DefectReport> = (0..k_max).map(|_| DefectReport::empty()).collect();
    for (f, (v, ai)) in families.iter().zip(scored) {
        let k = f.len();
        let rep = &mut reps[k - 1];
        rep.scanned += per_k_assign[k].len() as u64;
        rep.offer(v, || Witness::Family {
            family: f.iter().map(|&i| all[i]).collect(),
            assignment: per_k_assign[k][ai].clone(),
        });
    }
    for r in &mut reps {
        r.capped = capped;
    }
    Ok(reps)
}

/// Signed covariance matrix `M_ab = P(𝑿_J=a, 𝑿_K=b) − P(𝑿_J=a)P(𝑿_K=b)`
/// between the atoms of two subarrays, restricted to atoms of positive mass.
struct AtomCovariance {
    rows: Vec<usize>,
    cols: Vec<usize>,
    exact: Vec<Vec<Prob>>,
    float: Vec<Vec<f64>>,
}

impl AtomCovariance {
    fn new(model: &ArrayModel, j: Subset, k: Subset, limits: &Limits) -> Result<Self> {
        let d = model.d();
        if j.len() < d || k.len() < d || !j.intersect(k).is_empty() {
            return Err(Error::Domain(format!(
                "need disjoint supports of size ≥ d, got {j} and {k}"
            )));
        }
        let cj = j.k_subsets(d);
        let ck = k.k_subsets(d);
        let m = model.alphabet();
        let coords: Vec<Subset> = cj.iter().chain(&ck).copied().collect();
        let law = model.joint_law(&coords, limits)?;
        let mj = m.pow(cj.len() as u32);
        let mk = law.len() / mj;
        let mut pa = vec![Prob::zero(); mj];
        let mut pb = vec![Prob::zero(); mk];
        for (idx, p) in law.iter().enumerate() {
            pa[idx % mj] += p;
            pb[idx / mj] += p;
        }
        let rows: Vec<usize> = (0..mj).filter(|&a| !pa[a].is_zero()).collect();
        let cols: Vec<usize> = (0..mk).filter(|&b| !pb[b].is_zero()).collect();
        let exact: Vec<Vec<Prob>> = rows
            .par_iter()
            .map(|&a| {
                cols.iter()
                    .map(|&b| &law[a + mj * b] - &(&pa[a] * &pb[b]))
                    .collect()
            })
            .collect();
        let float = exact
            .iter()
            .map(|r| r.iter().map(Prob::to_f64).collect())
            .collect();
        Ok(AtomCovariance {
            rows,
            cols,
            exact,
            float,
        })
    }

    /// Exact `max_B Σ_{a∈A, b∈B} M_ab` for a row set `A`, with the optimal `B`.
    fn best_cols(&self, a: &[usize]) -> (Prob, Vec<usize>) {
        let mut total = Prob::zero();
        let mut b = Vec::new();
        for c in 0..self.cols.len() {
            let s = Prob::sum(a.iter().map(|&r| &self.exact[r][c]).collect::<Vec<_>>());
            if s > Prob::zero() {
                total += &s;
                b.push(c);
            }
        }
        (total, b)
    }
}

fn transpose(x: &[Vec<f64>]) -> Vec<Vec<f64>> {
    if x.is_empty() {
        return Vec::new();
    }
    (0..x[0].len())
        .map(|c| x.iter().map(|r| r[c]).collect())
        .collect()
}

/// `max_A Σ_b (Σ_{a∈A} M_ab)^+` over all row subsets, by Gray code.
fn gray_search(m: &[Vec<f64>]) -> (f64, u64) {
    let (r, c) = (m.len(), m.first().map_or(0, Vec::len));
    let mut sums = vec![0.0f64; c];
    let mut mask = 0u64;
    let mut best = (0.0f64, 0u64);
    for step in 1u64..(1u64 << r) {
        let bit = step.trailing_zeros() as usize;
        mask ^= 1 << bit;
        let sign = if mask >> bit & 1 == 1 { 1.0 } else { -1.0 };
        let mut v = 0.0;
        for (s, x) in sums.iter_mut().zip(&m[bit]) {
            *s += sign * x;
            if *s > 0.0 {
                v += *s;
            }
        }
        if v > best.0 + 1e-15 {
            best = (v, mask);
        }
    }
    best
}

/// Alternating sign-split ascent from every single-row and single-column
/// start; a lower bound on the exact maximum.
fn alternating_search(m: &[Vec<f64>], starts: usize) -> (f64, Vec<bool>) {
    let (r, c) = (m.len(), m.first().map_or(0, Vec::len));
    let mt = transpose(m);
    let rows_for = |cols: &[bool]| -> Vec<bool> {
        (0..r)
            .map(|a| (0..c).filter(|&b| cols[b]).map(|b| m[a][b]).sum::<f64>() > 0.0)
            .collect()
    };
    let cols_for = |rows: &[bool]| -> Vec<bool> {
        (0..c)
            .map(|b| (0..r).filter(|&a| rows[a]).map(|a| mt[b][a]).sum::<f64>() > 0.0)
            .collect()
    };
    let value = |rows: &[bool], cols: &[bool]| -> f64 {
        (0..r)
            .filter(|&a| rows[a])
            .map(|a| (0..c).filter(|&b| cols[b]).map(|b| m[a][b]).sum::<f64>())
            .sum()
    };
    let mut seeds: Vec<Vec<bool>> = Vec::new();
    for a in 0..r.min(starts) {
        let mut rows = vec![false; r];
        rows[a] = true;
        seeds.push(rows);
    }
    for b in 0..c.min(starts) {
        let mut cols = vec![false; c];
        cols[b] = true;
        seeds.push(rows_for(&cols));
    }
    let results: Vec<(f64, Vec<bool>)> = seeds
        .into_par_iter()
        .map(|mut rows| {
            let mut cols = cols_for(&rows);
            let mut v = value(&rows, &cols);
            loop {
                let r2 = rows_for(&cols);
                let c2 = cols_for(&r2);
                let v2 = value(&r2, &c2);
                if v2 <= v + 1e-15 {
                    break;
                }
                (rows, cols, v) = (r2, c2, v2);
            }
            (v, rows)
        })
        .collect();
    results.into_iter().fold((0.0, vec![false; r]), |best, x| {
        if x.0 > best.0 + 1e-15 {
            x
        } else {
            best
        }
    })
}

struct Mixing {
    value: Prob,
    a: Vec<usize>,
    b: Vec<usize>,
    scanned: u64,
    capped: bool,
}

fn mixing_inner(model: &ArrayModel, j: Subset, k: Subset, limits: &Limits) -> Result<Mixing> {
    let cov = AtomCovariance::new(model, j, k, limits)?;
    let (r, c) = (cov.rows.len(), cov.cols.len());
    // enumerate subsets of the smaller side
    let flip = c < r;
    let small = if flip {
        transpose(&cov.float)
    } else {
        cov.float.clone()
    };
    let (rs, cs) = if flip { (c, r) } else { (r, c) };
    let exhaustive =
        rs < 63 && pow_sat(2, rs as u32).saturating_mul(cs.max(1) as u128) <= limits.cap as u128;
    let (chosen, scanned, capped): (Vec<usize>, u64, bool) = if exhaustive {
        let (_, mask) = gray_search(&small);
        (
            (0..rs).filter(|&i| mask >> i & 1 == 1).collect(),
            1u64 << rs,
            false,
        )
    } else {
        let (_, rows) = alternating_search(&small, 256);
        (
            (0..rs).filter(|&i| rows[i]).collect(),
            (rs + cs) as u64,
            true,
        )
    };
    // exact value of the chosen side with its optimal partner
    let (value, a_rows, b_cols) = if flip {
        let mut total = Prob::zero();
        let mut rows = Vec::new();
        for a in 0..r {
            let s = Prob::sum(
                chosen
                    .iter()
                    .map(|&col| &cov.exact[a][col])
                    .collect::<Vec<_>>(),
            );
            if s > Prob::zero() {
                total += &s;
                rows.push(a);
            }
        }
        (total, rows, chosen)
    } else {
        let (total, cols) = cov.best_cols(&chosen);
        (total, chosen, cols)
    };
    Ok(Mixing {
        value,
        a: a_rows.into_iter().map(|i| cov.rows[i]).collect(),
        b: b_cols.into_iter().map(|i| cov.cols[i]).collect(),
        scanned,
        capped,
    })
}

/// `sup_{A∈ℱ_J, B∈ℱ_K} |P(A∩B) − P(A)P(B)|` for one pair of supports.
pub fn mixing_coefficient(
    model: &ArrayModel,
    j: Subset,
    k: Subset,
    limits: &Limits,
) -> Result<DefectReport> {
    let mx = mixing_inner(model, j, k, limits)?;
    Ok(DefectReport {
        value: mx.value,
        witness: Some(Witness::Events {
            j,
            k,
            a: mx.a,
            b: mx.b,
        }),
        scanned: mx.scanned,
        capped: mx.capped,
        per_size: Vec::new(),
    })
}

/// `max_{B∈ℱ_K} |P(A∩B) − P(A)P(B)|` for a fixed event `A` of `𝑿_J`, given by
/// configuration indices; returns the optimal `B` too.
pub fn mixing_for_event(
    model: &ArrayModel,
    j: Subset,
    k: Subset,
    a: &[usize],
    limits: &Limits,
) -> Result<(Prob, Vec<usize>)> {
    let cov = AtomCovariance::new(model, j, k, limits)?;
    let rows: Vec<usize> = a
        .iter()
        .filter_map(|x| cov.rows.iter().position(|r| r == x))
        .collect();
    let (pos, b) = cov.best_cols(&rows);
    // the negative side is attained by the complementary B
    let mut neg = Prob::zero();
    let mut nb = Vec::new();
    for c in 0..cov.cols.len() {
        let s = Prob::sum(rows.iter().map(|&r| &cov.exact[r][c]).collect::<Vec<_>>());
        if s.is_negative() {
            neg = &neg - &s;
            nb.push(c);
        }
    }
    let (v, cols) = if neg > pos { (neg, nb) } else { (pos, b) };
    Ok((v, cols.into_iter().map(|i| cov.cols[i]).collect()))
}

/// `P(A∩B) − P(A)P(B)` recomputed from the joint law.
pub fn event_pair_value(
    model: &ArrayModel,
    j: Subset,
    k: Subset,
    a: &[usize],
    b: &[usize],
    limits: &Limits,
) -> Result<Prob> {
    let d = model.d();
    let cj = j.k_subsets(d);
    let coords: Vec<Subset> = cj.iter().chain(&k.k_subsets(d)).copied().collect();
    let law = model.joint_law(&coords, limits)?;
    let mj = model.alphabet().pow(cj.len() as u32);
    let (mut pab, mut pa, mut pb) = (Prob::zero(), Prob::zero(), Prob::zero());
    for (idx, p) in law.iter().enumerate() {
        let (x, y) = (a.contains(&(idx % mj)), b.contains(&(idx / mj)));
        if x {
            pa += p;
        }
        if y {
            pb += p;
        }
        if x && y {
            pab += p;
        }
    }
    Ok(&pab - &(&pa * &pb))
}

/// Left/right support pairs with `|J|,|K| ≥ d`, `|J|+|K| = ℓ`, `max J < min K`;
/// every admissible pair with a smaller total extends to one of these.
pub fn maximal_pairs(n: usize, d: usize, ell: usize) -> Vec<(Subset, Subset)> {
    let mut out = Vec::new();
    for u in Subset::range(n).k_subsets(ell) {
        let e = u.elems();
        for split in d..=ell - d {
            out.push((Subset::of(&e[..split]), Subset::of(&e[split..])));
        }
    }
    out
}

/// `max |P(A∩B) − P(A)P(B)|` over `A ∈ ℱ_J`, `B ∈ ℱ_K` with `J` left of `K`
/// and `|J|+|K| ≤ ℓ`.
pub fn dissociativity_defect(
    model: &ArrayModel,
    ell: usize,
    limits: &Limits,
) -> Result<DefectReport> {
    let (n, d) = (model.n(), model.d());
    if ell < 2 * d || ell > n {
        return Err(Error::Domain(format!(
            "ℓ={ell} must lie in [2d, n] = [{}, {n}]",
            2 * d
        )));
    }
    let pairs = maximal_pairs(n, d, ell);
    let results: Vec<Mixing> = pairs
        .par_iter()
        .map(|&(j, k)| mixing_inner(model, j, k, limits))
        .collect::<Result<_>>()?;
    let mut rep = DefectReport::empty();
    for ((j, k), mx) in pairs.into_iter().zip(results) {
        rep.scanned += mx.scanned;
        rep.capped |= mx.capped;
        rep.offer(mx.value, || Witness::Events {
            j,
            k,
            a: mx.a,
            b: mx.b,
        });
    }
    Ok(rep)
}

/// Re-evaluate a witness against the model; used to validate reports.
pub fn witness_value(
    model: &ArrayModel,
    w: &Witness,
    mode: BoxMode,
    limits: &Limits,
) -> Result<Prob> {
    match w {
        Witness::Pair { j, k } => Ok(total_variation(
            &model.subarray_law(*j, limits)?,
            &model.subarray_law(*k, limits)?,
        )),
        Witness::BoxSymbol { bx, symbol } => {
            let members = bx.members();
            let joint =
                model.event_probability_with(&EventQuery::all(&members, *symbol), limits)?;
            let mut prod = Prob::one();
            for &t in &members {
                prod = &prod
                    * &model.event_probability_with(&EventQuery::new().with(t, *symbol), limits)?;
            }
            let diff = &joint - &prod;
            Ok(match mode {
                BoxMode::OneSided => diff.clamp_nonneg(),
                BoxMode::Absolute => diff.abs(),
            })
        }
        Witness::Family { family, assignment } => {
            let q = EventQuery::from_pairs(family.iter().copied().zip(assignment.iter().copied()));
            let joint = model.event_probability_with(&q, limits)?;
            let mut prod = Prob::one();
            for (&t, &a) in family.iter().zip(assignment) {
                prod =
                    &prod * &model.event_probability_with(&EventQuery::new().with(t, a), limits)?;
            }
            Ok((&joint - &prod).abs())
        }
        Witness::Events { j, k, a, b } => Ok(event_pair_value(model, *j, *k, a, b, limits)?.abs()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gray_matches_brute_force() {
        let m = vec![
            vec![0.1, -0.2, 0.05],
            vec![-0.1, 0.3, -0.05],
            vec![0.0, -0.1, 0.0],
        ];
        let (v, _) = gray_search(&m);
        let mut best = 0.0f64;
        for mask in 0..8u32 {
            let mut t = 0.0;
            for c in 0..3 {
                let s: f64 = (0..3).filter(|r| mask >> r & 1 == 1).map(|r| m[r][c]).sum();
                t += s.max(0.0);
            }
            best = best.max(t);
        }
        assert!((v - best).abs() < 1e-15);
    }

    #[test]
    fn family_enumeration_respects_support() {
        let all = Subset::range(4).k_subsets(2);
        let (fams, capped) = small_support_families(&all, 2, 3, u64::MAX);
        assert!(!capped);
        // singletons plus pairs of edges spanning ≤ 3 vertices
        assert_eq!(fams.iter().filter(|f| f.len() == 1).count(), 6);
        assert_eq!(fams.iter().filter(|f| f.len() == 2).count(), 12);
    }

    #[test]
    fn maximal_pairs_at_full_length() {
        assert_eq!(maximal_pairs(8, 2, 8).len(), 5);
        assert_eq!(maximal_pairs(6, 2, 5).len(), 6 * 2);
    }
}
