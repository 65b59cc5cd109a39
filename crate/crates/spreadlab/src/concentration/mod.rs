//! Conditional expectations over subarray σ-algebras, the Doob martingale
//! of successive blocks, energy-increment selection, the anti-concentration
//! witness for non-dissociated arrays and simultaneous selection.

mod constants;

pub use constants::{beta, ell, theorem_constants, TheoremConstants};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arrays::dense::{config_digits, config_index};
use crate::arrays::{support, ArrayModel, Subset};
use crate::defects::{mixing_coefficient, mixing_for_event, spreadability_defect};
use crate::error::{pow_sat, Error, Limits, Result};
use crate::prob::Prob;
use crate::report::{prob_text, prob_text_vec, serialize_prob, serialize_probs};

/// A real function of the whole array, described through the coordinates it
/// actually reads.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FunctionSpec {
    /// `∏_{s∈family} x_s − c`; an empty family gives the constant `1 − c`.
    MonomialMinusConstant {
        family: Vec<Subset>,
        #[serde(with = "prob_text")]
        c: Prob,
    },
    /// Indicator of `𝑿_{[j]} ∈ A′`, with `A′` given by configuration indices
    /// over `C([j],d)` in colex order, first coordinate least significant.
    IndicatorLift { j: usize, event: Vec<usize> },
    /// Values over all of `𝒳^{C([n],d)}`, same indexing.
    ExplicitTable {
        #[serde(with = "prob_text_vec")]
        values: Vec<Prob>,
    },
}

impl FunctionSpec {
    pub fn constant(c: Prob) -> Self {
        FunctionSpec::MonomialMinusConstant {
            family: Vec::new(),
            c: Prob::one() - c,
        }
    }

    /// The box monomial `x13·x14·x23·x24 − 3/32`.
    pub fn box_monomial() -> Self {
        FunctionSpec::MonomialMinusConstant {
            family: [[1, 3], [1, 4], [2, 3], [2, 4]]
                .iter()
                .map(|e| Subset::of(e))
                .collect(),
            c: Prob::ratio(3, 32),
        }
    }

    pub fn coords(&self, n: usize, d: usize) -> Result<Vec<Subset>> {
        match self {
            FunctionSpec::MonomialMinusConstant { family, .. } => {
                for (i, s) in family.iter().enumerate() {
                    if s.len() != d || s.max_elem().unwrap_or(0) > n {
                        return Err(Error::Index(format!("{s} is not in C([{n}],{d})")));
                    }
                    if family[..i].contains(s) {
                        return Err(Error::Shape(format!("{s} repeated in the monomial")));
                    }
                }
                Ok(family.clone())
            }
            FunctionSpec::IndicatorLift { j, .. } => {
                if *j < d || *j > n {
                    return Err(Error::Domain(format!(
                        "indicator lift needs d ≤ j ≤ n, got j={j}"
                    )));
                }
                Ok(Subset::range(*j).k_subsets(d))
            }
            FunctionSpec::ExplicitTable { .. } => Ok(Subset::range(n).k_subsets(d)),
        }
    }

    /// The coordinates read by `f` and its values over their configurations.
    pub fn tabulate(
        &self,
        model: &ArrayModel,
        limits: &Limits,
    ) -> Result<(Vec<Subset>, Vec<Prob>)> {
        let (m, coords) = (model.alphabet(), self.coords(model.n(), model.d())?);
        let size = pow_sat(m as u128, coords.len() as u32);
        limits.check(
            format!("function table over {} coordinates", coords.len()),
            size,
        )?;
        let size = size as usize;
        let values = match self {
            FunctionSpec::MonomialMinusConstant { c, .. } => (0..size)
                .map(|idx| {
                    let prod: i64 = config_digits(idx, m, coords.len())
                        .iter()
                        .map(|&x| x as i64)
                        .product();
                    Prob::int(prod) - c
                })
                .collect(),
            FunctionSpec::IndicatorLift { event, .. } => {
                let mut v = vec![Prob::zero(); size];
                for &e in event {
                    if e >= size {
                        return Err(Error::Index(format!("event configuration {e} ≥ {size}")));
                    }
                    v[e] = Prob::one();
                }
                v
            }
            FunctionSpec::ExplicitTable { values } => {
                if values.len() != size {
                    return Err(Error::Shape(format!(
                        "explicit table has {} values, expected {size}",
                        values.len()
                    )));
                }
                values.clone()
            }
        };
        Ok((coords, values))
    }
}

/// A random variable measurable with respect to `(X_c)_{c∈coords}`.
///
/// `support` is the conditioning set it came from. When the function being
/// conditioned reads only coordinates inside `C(support,d)`, the conditional
/// expectation is the function itself and the table is kept over the
/// function's own coordinates (`compressed`); laws and norms are unaffected.
#[derive(Clone, Debug, Serialize)]
pub struct RandomVariableTable {
    pub support: Subset,
    pub coords: Vec<Subset>,
    pub alphabet: usize,
    #[serde(serialize_with = "serialize_probs")]
    pub probs: Vec<Prob>,
    #[serde(serialize_with = "serialize_probs")]
    pub values: Vec<Prob>,
    pub compressed: bool,
}

impl RandomVariableTable {
    fn rows(&self) -> impl Iterator<Item = (&Prob, &Prob)> {
        self.probs
            .iter()
            .zip(&self.values)
            .filter(|(q, _)| !q.is_zero())
    }

    pub fn expectation(&self) -> Prob {
        let mut acc = Prob::zero();
        for (q, v) in self.rows() {
            acc += q * v;
        }
        acc
    }

    pub fn total_mass(&self) -> Prob {
        Prob::sum(&self.probs)
    }

    /// `E[g²]`, exact whenever the table is.
    pub fn l2_squared(&self) -> Prob {
        let mut acc = Prob::zero();
        for (q, v) in self.rows() {
            acc += q * &(v * v);
        }
        acc
    }

    /// `‖g‖_p`; `p = ∞` is the largest `|value|` of positive probability.
    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::Domain(format!("L_p norm needs p ≥ 1, got {p}")));
        }
        if p.is_infinite() {
            return Ok(self
                .rows()
                .map(|(_, v)| v.to_f64().abs())
                .fold(0.0, f64::max));
        }
        if p == 2.0 {
            return Ok(self.l2_squared().to_f64().max(0.0).sqrt());
        }
        let s: f64 = self
            .rows()
            .map(|(q, v)| q.to_f64() * v.to_f64().abs().powf(p))
            .sum();
        Ok(s.powf(1.0 / p))
    }

    pub fn prob_abs_le(&self, eps: &Prob) -> Prob {
        let mut acc = Prob::zero();
        for (q, _) in self.rows().filter(|(_, v)| v.abs() <= *eps) {
            acc += q;
        }
        acc
    }

    pub fn prob_abs_ge(&self, t: &Prob) -> Prob {
        let mut acc = Prob::zero();
        for (q, _) in self.rows().filter(|(_, v)| v.abs() >= *t) {
            acc += q;
        }
        acc
    }

    /// `g − c`, zero-probability rows kept at 0.
    pub fn shifted(&self, c: &Prob) -> RandomVariableTable {
        let values = self
            .probs
            .iter()
            .zip(&self.values)
            .map(|(q, v)| if q.is_zero() { Prob::zero() } else { v - c })
            .collect();
        RandomVariableTable {
            values,
            ..self.clone()
        }
    }

    pub fn centered(&self) -> RandomVariableTable {
        self.shifted(&self.expectation())
    }
}

pub fn lp_norm(g: &RandomVariableTable, p: f64) -> Result<f64> {
    g.lp_norm(p)
}

fn check_support(model: &ArrayModel, j: Subset) -> Result<()> {
    let (n, d) = (model.n(), model.d());
    if j.len() < d || j.max_elem().unwrap_or(0) > n {
        return Err(Error::Domain(format!(
            "conditioning set {j} needs at least d={d} elements of [{n}]"
        )));
    }
    Ok(())
}

fn law_of(model: &ArrayModel, coords: &[Subset], limits: &Limits) -> Result<Vec<Prob>> {
    if coords.is_empty() {
        return Ok(vec![Prob::one()]);
    }
    model.joint_law(coords, limits)
}

/// Position map from `sub` into `within`, and the index of `sub`'s
/// configuration read off a configuration of `within`.
struct Projection {
    pos: Vec<usize>,
    m: usize,
    r: usize,
}

impl Projection {
    fn new(sub: &[Subset], within: &[Subset], m: usize) -> Self {
        let pos = sub
            .iter()
            .map(|c| within.iter().position(|w| w == c).expect("sub ⊆ within"))
            .collect();
        Projection {
            pos,
            m,
            r: within.len(),
        }
    }

    fn apply(&self, idx: usize) -> usize {
        let digits = config_digits(idx, self.m, self.r);
        let picked: Vec<u32> = self.pos.iter().map(|&p| digits[p]).collect();
        config_index(&picked, self.m)
    }
}

/// `E[g | X_c : c ∈ dc]` for `g` given as values over `fc`.
fn condition_values(
    model: &ArrayModel,
    fc: &[Subset],
    fv: &[Prob],
    support: Subset,
    dc: &[Subset],
    limits: &Limits,
) -> Result<RandomVariableTable> {
    let m = model.alphabet();
    if fc.iter().all(|c| dc.contains(c)) {
        let probs = law_of(model, fc, limits)?;
        let values = probs
            .iter()
            .zip(fv)
            .map(|(q, v)| if q.is_zero() { Prob::zero() } else { v.clone() })
            .collect();
        return Ok(RandomVariableTable {
            support,
            coords: fc.to_vec(),
            alphabet: m,
            probs,
            values,
            compressed: true,
        });
    }
    let w: Vec<Subset> = dc
        .iter()
        .chain(fc.iter().filter(|c| !dc.contains(c)))
        .copied()
        .collect();
    let law = law_of(model, &w, limits)?;
    let proj = Projection::new(fc, &w, m);
    let base = m.pow(dc.len() as u32);
    let mut num = vec![Prob::zero(); base];
    let mut den = vec![Prob::zero(); base];
    for (idx, q) in law.iter().enumerate().filter(|(_, q)| !q.is_zero()) {
        num[idx % base] += q * &fv[proj.apply(idx)];
        den[idx % base] += q;
    }
    let values = num
        .iter()
        .zip(&den)
        .map(|(a, b)| if b.is_zero() { Prob::zero() } else { a / b })
        .collect();
    Ok(RandomVariableTable {
        support,
        coords: dc.to_vec(),
        alphabet: m,
        probs: den,
        values,
        compressed: false,
    })
}

/// The law of `f(𝑿)` as a table over the coordinates `f` reads.
pub fn function_table(
    model: &ArrayModel,
    f: &FunctionSpec,
    limits: &Limits,
) -> Result<RandomVariableTable> {
    let (fc, fv) = f.tabulate(model, limits)?;
    condition_values(model, &fc, &fv, support(&fc), &fc, limits)
}

pub fn conditional_expectation(
    model: &ArrayModel,
    f: &FunctionSpec,
    j: Subset,
    limits: &Limits,
) -> Result<RandomVariableTable> {
    check_support(model, j)?;
    let (fc, fv) = f.tabulate(model, limits)?;
    condition_values(model, &fc, &fv, j, &j.k_subsets(model.d()), limits)
}

/// `P(|E[f | ℱ_J]| ≤ ε)`
pub fn concentration_probability(
    model: &ArrayModel,
    f: &FunctionSpec,
    j: Subset,
    eps: &Prob,
    limits: &Limits,
) -> Result<Prob> {
    Ok(conditional_expectation(model, f, j, limits)?.prob_abs_le(eps))
}

#[derive(Clone, Debug, Serialize)]
pub struct NormEntry {
    /// `null` in JSON stands for `p = ∞`.
    pub p: f64,
    pub value: f64,
}

fn norms_of(t: &RandomVariableTable, ps: &[f64]) -> Result<Vec<NormEntry>> {
    ps.iter()
        .map(|&p| {
            Ok(NormEntry {
                p,
                value: t.lp_norm(p)?,
            })
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct Increment {
    pub block: Subset,
    #[serde(skip)]
    pub table: RandomVariableTable,
    pub norms: Vec<NormEntry>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DoobDecomposition {
    pub blocks: Vec<Subset>,
    #[serde(serialize_with = "serialize_prob")]
    pub mean: Prob,
    pub increments: Vec<Increment>,
    /// `E[f | 𝒜_m]`
    #[serde(skip)]
    pub terminal: RandomVariableTable,
}

impl DoobDecomposition {
    /// `Σ d_i = E[f | 𝒜_m] − E f`
    pub fn sum_of_increments(&self) -> RandomVariableTable {
        self.terminal.shifted(&self.mean)
    }
}

/// Martingale differences of `E[f | 𝒜_i]` for `𝒜_i = σ(ℱ_{J_1},…,ℱ_{J_i})`.
///
/// One joint law over `C(J_1,d) ∪ … ∪ C(J_m,d)` followed by `f`'s remaining
/// coordinates; every level is a marginal of the finest one because the
/// coordinates of `𝒜_i` form a prefix of that list.
pub fn doob_increments(
    model: &ArrayModel,
    f: &FunctionSpec,
    blocks: &[Subset],
    ps: &[f64],
    limits: &Limits,
) -> Result<DoobDecomposition> {
    if blocks.is_empty() {
        return Err(Error::Domain("need at least one block".into()));
    }
    let mut seen = Subset::EMPTY;
    for &b in blocks {
        check_support(model, b)?;
        if !b.intersect(seen).is_empty() {
            return Err(Error::Domain(format!(
                "block {b} overlaps an earlier block"
            )));
        }
        seen = seen.union(b);
    }
    let (m, d) = (model.alphabet(), model.d());
    let (fc, fv) = f.tabulate(model, limits)?;
    let mut dm: Vec<Subset> = Vec::new();
    let mut sizes = vec![0usize];
    for &b in blocks {
        dm.extend(b.k_subsets(d));
        sizes.push(dm.len());
    }
    let w: Vec<Subset> = dm
        .iter()
        .chain(fc.iter().filter(|c| !dm.contains(c)))
        .copied()
        .collect();
    let law = law_of(model, &w, limits)?;
    let proj = Projection::new(&fc, &w, m);
    let bases: Vec<usize> = sizes.iter().map(|&s| m.pow(s as u32)).collect();
    let top = blocks.len();

    let mut num = vec![vec![Prob::zero(); bases[top]]];
    let mut den = vec![vec![Prob::zero(); bases[top]]];
    for (idx, q) in law.iter().enumerate().filter(|(_, q)| !q.is_zero()) {
        let c = idx % bases[top];
        num[0][c] += q * &fv[proj.apply(idx)];
        den[0][c] += q;
    }
    // coarser levels by marginalizing the finer ones
    for lvl in (0..top).rev() {
        let (fin_n, fin_d) = (num.last().expect("level"), den.last().expect("level"));
        let mut cn = vec![Prob::zero(); bases[lvl]];
        let mut cd = vec![Prob::zero(); bases[lvl]];
        for c in 0..fin_n.len() {
            cn[c % bases[lvl]] += &fin_n[c];
            cd[c % bases[lvl]] += &fin_d[c];
        }
        num.push(cn);
        den.push(cd);
    }
    num.reverse();
    den.reverse();
    let cond: Vec<Vec<Prob>> = num
        .iter()
        .zip(&den)
        .map(|(a, b)| {
            a.iter()
                .zip(b)
                .map(|(x, y)| if y.is_zero() { Prob::zero() } else { x / y })
                .collect()
        })
        .collect();

    let mut increments = Vec::with_capacity(top);
    let mut cum = Subset::EMPTY;
    for i in 1..=top {
        cum = cum.union(blocks[i - 1]);
        let values = (0..bases[i])
            .map(|c| {
                if den[i][c].is_zero() {
                    Prob::zero()
                } else {
                    &cond[i][c] - &cond[i - 1][c % bases[i - 1]]
                }
            })
            .collect();
        let table = RandomVariableTable {
            support: cum,
            coords: dm[..sizes[i]].to_vec(),
            alphabet: m,
            probs: den[i].clone(),
            values,
            compressed: false,
        };
        let norms = norms_of(&table, ps)?;
        increments.push(Increment {
            block: blocks[i - 1],
            table,
            norms,
        });
    }
    let terminal = RandomVariableTable {
        support: cum,
        coords: dm.clone(),
        alphabet: m,
        probs: den[top].clone(),
        values: cond[top].clone(),
        compressed: false,
    };
    Ok(DoobDecomposition {
        blocks: blocks.to_vec(),
        mean: cond[0][0].clone(),
        increments,
        terminal,
    })
}

/// The first `⌊|I|/k⌋` successive `k`-blocks of `I`.
pub fn successive_blocks(i: Subset, k: usize) -> Vec<Subset> {
    let elems = i.elems();
    elems.chunks_exact(k.max(1)).map(Subset::of).collect()
}

fn mixing_term(beta: f64, r: f64, p: f64) -> f64 {
    let expo = 1.0 / r - if p.is_infinite() { 0.0 } else { 1.0 / p };
    if beta <= 0.0 {
        0.0
    } else {
        10.0 * beta.powf(expo)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SelectOptions {
    /// Defaults to `(p+1)/2`.
    pub r: Option<f64>,
    /// Mixing level used in the endpoint bound; measured when absent.
    pub beta: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SelectionReport {
    pub blocks: Vec<Subset>,
    /// 1-based.
    pub i0: usize,
    pub chosen: Subset,
    pub chosen_is_interval: bool,
    pub m: usize,
    pub p: f64,
    pub r: f64,
    pub norms: Vec<f64>,
    pub achieved: f64,
    /// `‖f − E f‖_p`; the theorem's normalization divides by it.
    pub scale: f64,
    pub normalized_achieved: f64,
    /// `(m(p−1))^{−1/2}`
    pub guarantee: f64,
    pub guarantee_holds: bool,
    /// `‖E[f | ℱ_J] − E f‖_r` for the chosen block.
    pub endpoint: f64,
    pub beta: Option<f64>,
    /// The measured β is only a lower bound (search capped).
    pub beta_capped: bool,
    /// `((p−1)^{−1/2}√(2k/|I|) + 10β^{1/r−1/p})·‖f − E f‖_p`
    pub rhs: Option<f64>,
    /// Same with `1/√(m(p−1))` in place of the first term.
    pub rhs_tight: Option<f64>,
    pub endpoint_holds: Option<bool>,
}

const SLACK: f64 = 1e-12;

fn argmin_first(xs: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in xs.iter().enumerate() {
        if x < xs[best] {
            best = i;
        }
    }
    best
}

fn check_select_args(model: &ArrayModel, p: f64, i: Subset, k: usize) -> Result<()> {
    if !(p > 1.0 && p <= 2.0) {
        return Err(Error::Domain(format!("p must lie in (1, 2], got {p}")));
    }
    if k < model.d() || k > i.len() / 2 {
        return Err(Error::Domain(format!(
            "k={k} must lie in [d, ⌊|I|/2⌋] = [{}, {}]",
            model.d(),
            i.len() / 2
        )));
    }
    if i.max_elem().unwrap_or(0) > model.n() {
        return Err(Error::Index(format!(
            "{i} is not a subset of [{}]",
            model.n()
        )));
    }
    Ok(())
}

pub fn energy_increment_select(
    model: &ArrayModel,
    f: &FunctionSpec,
    p: f64,
    i: Subset,
    k: usize,
    opts: &SelectOptions,
    limits: &Limits,
) -> Result<SelectionReport> {
    check_select_args(model, p, i, k)?;
    let r = opts.r.unwrap_or((p + 1.0) / 2.0);
    if !(r >= 1.0 && r < p) {
        return Err(Error::Domain(format!(
            "r must satisfy 1 ≤ r < p, got r={r}"
        )));
    }
    let blocks = successive_blocks(i, k);
    let m = blocks.len();
    let doob = doob_increments(model, f, &blocks, &[p], limits)?;
    let norms: Vec<f64> = doob
        .increments
        .iter()
        .map(|inc| inc.norms[0].value)
        .collect();
    let at = argmin_first(&norms);
    let chosen = blocks[at];
    let scale = function_table(model, f, limits)?.centered().lp_norm(p)?;
    let guarantee = 1.0 / (m as f64 * (p - 1.0)).sqrt();
    let achieved = norms[at];

    let endpoint = conditional_expectation(model, f, chosen, limits)?
        .shifted(&doob.mean)
        .lp_norm(r)?;
    let (beta, beta_capped) = match opts.beta {
        Some(b) => (Some(b), false),
        None if at == 0 => (Some(0.0), false),
        None => {
            let earlier = blocks[..at].iter().fold(Subset::EMPTY, |a, &b| a.union(b));
            match mixing_coefficient(model, earlier, chosen, limits) {
                Ok(rep) => (Some(rep.value.to_f64()), rep.capped),
                Err(Error::Capacity { .. }) => (None, false),
                Err(e) => return Err(e),
            }
        }
    };
    let ell = i.len() as f64;
    let rhs = beta
        .map(|b| ((2.0 * k as f64 / ell).sqrt() / (p - 1.0).sqrt() + mixing_term(b, r, p)) * scale);
    let rhs_tight = beta.map(|b| (guarantee + mixing_term(b, r, p)) * scale);
    let chosen_is_interval =
        chosen.max_elem().unwrap_or(0) + 1 - chosen.min_elem().unwrap_or(1) == chosen.len();
    Ok(SelectionReport {
        i0: at + 1,
        chosen,
        chosen_is_interval,
        m,
        p,
        r,
        achieved,
        scale,
        normalized_achieved: if scale > 0.0 { achieved / scale } else { 0.0 },
        guarantee,
        guarantee_holds: achieved <= guarantee * scale + SLACK,
        endpoint,
        beta,
        beta_capped,
        endpoint_holds: rhs_tight.map(|b| endpoint <= b + SLACK),
        rhs,
        rhs_tight,
        norms,
        blocks,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Prop27Report {
    pub j: Subset,
    pub k: Subset,
    pub p: f64,
    pub r: f64,
    pub beta: f64,
    pub beta_capped: bool,
    /// `‖E[E[X|ℱ_J]|ℱ_K] − E X‖_r`
    pub lhs: f64,
    /// `10 β^{1/r−1/p} ‖X − E X‖_p`
    pub rhs: f64,
    pub holds: bool,
}

/// The mixing estimate for `𝒜 = ℱ_J`, `ℬ = ℱ_K` with β measured exactly.
pub fn prop27_check(
    model: &ArrayModel,
    x: &FunctionSpec,
    j: Subset,
    k: Subset,
    p: f64,
    r: f64,
    limits: &Limits,
) -> Result<Prop27Report> {
    if !(r >= 1.0 && r < p) {
        return Err(Error::Domain(format!("need 1 ≤ r < p, got r={r}, p={p}")));
    }
    check_support(model, j)?;
    check_support(model, k)?;
    let d = model.d();
    let (fc, fv) = x.tabulate(model, limits)?;
    let inner = condition_values(model, &fc, &fv, j, &j.k_subsets(d), limits)?;
    let outer = condition_values(
        model,
        &inner.coords,
        &inner.values,
        k,
        &k.k_subsets(d),
        limits,
    )?;
    let own = condition_values(model, &fc, &fv, support(&fc), &fc, limits)?;
    let mean = own.expectation();
    let mix = mixing_coefficient(model, j, k, limits)?;
    let beta = mix.value.to_f64();
    let lhs = outer.shifted(&mean).lp_norm(r)?;
    let rhs = mixing_term(beta, r, p) * own.shifted(&mean).lp_norm(p)?;
    Ok(Prop27Report {
        j,
        k,
        p,
        r,
        beta,
        beta_capped: mix.capped,
        lhs,
        rhs,
        holds: lhs <= rhs + SLACK,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessEntry {
    pub i: Subset,
    #[serde(serialize_with = "crate::report::serialize_opt_prob")]
    pub probability: Option<Prob>,
    pub holds: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessReport {
    pub f: FunctionSpec,
    /// Measured mixing between `ℱ_{[j]}` and `ℱ_{{j+1..j+k}}` for this event.
    #[serde(serialize_with = "serialize_prob")]
    pub beta: Prob,
    pub partner_event: Vec<usize>,
    #[serde(serialize_with = "serialize_prob")]
    pub mean: Prob,
    /// Largest subarray size at which spreadability was verified.
    pub spreadability_size: Option<usize>,
    #[serde(serialize_with = "crate::report::serialize_opt_prob")]
    pub spreadability_defect: Option<Prob>,
    pub spreadable: bool,
    pub vacuous: bool,
    pub ell: usize,
    pub entries: Vec<WitnessEntry>,
    pub checked: usize,
    pub all_hold: bool,
}

/// For `f = 1` of the lift of `A′`, reports `P(|E[f|ℱ_I] − E f| ≥ β/2)`
/// against `β/2` for every `I ∈ C([n],ℓ)`.
#[allow(clippy::too_many_arguments)]
pub fn dissociativity_witness(
    model: &ArrayModel,
    j: usize,
    k: usize,
    event: &[usize],
    ell: usize,
    tolerance: f64,
    limits: &Limits,
) -> Result<WitnessReport> {
    let (n, d) = (model.n(), model.d());
    if j < d || k < d || j + k > ell || ell > n {
        return Err(Error::Domain(format!(
            "need j,k ≥ d={d} and j+k ≤ ℓ ≤ n; got j={j}, k={k}, ℓ={ell}, n={n}"
        )));
    }
    let count = crate::prob::binomial(n as u64, ell as u64);
    limits.check(format!("C({n},{ell}) conditioning sets"), count)?;

    // Spreadability at the largest subarray size that fits under the cap.
    let mut spread = None;
    for size in (d..=(j + k).min(n)).rev() {
        match spreadability_defect(model, size, limits) {
            Ok(rep) => {
                spread = Some((size, rep.value));
                break;
            }
            Err(Error::Capacity { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    let spreadable = spread
        .as_ref()
        .is_some_and(|(_, v)| v.to_f64() <= tolerance);

    let head = Subset::range(j);
    let tail = Subset::interval(j + 1, j + k);
    let (beta, partner_event) = mixing_for_event(model, head, tail, event, limits)?;
    let f = FunctionSpec::IndicatorLift {
        j,
        event: event.to_vec(),
    };
    let mean = function_table(model, &f, limits)?.expectation();
    let half = &beta * &Prob::ratio(1, 2);
    let vacuous = beta.is_zero();

    let entries: Vec<WitnessEntry> = Subset::range(n)
        .k_subsets(ell)
        .into_par_iter()
        .map(|i| match conditional_expectation(model, &f, i, limits) {
            Ok(t) => {
                let pr = t.shifted(&mean).prob_abs_ge(&half);
                let holds = pr >= half;
                WitnessEntry {
                    i,
                    probability: Some(pr),
                    holds: Some(holds),
                    error: None,
                }
            }
            Err(e) => WitnessEntry {
                i,
                probability: None,
                holds: None,
                error: Some(e.to_string()),
            },
        })
        .collect();
    let checked = entries.iter().filter(|e| e.holds.is_some()).count();
    let all_hold = checked == entries.len() && entries.iter().all(|e| e.holds == Some(true));
    Ok(WitnessReport {
        f,
        beta,
        partner_event,
        mean,
        spreadability_size: spread.as_ref().map(|(s, _)| *s),
        spreadability_defect: spread.map(|(_, v)| v),
        spreadable,
        vacuous,
        ell,
        entries,
        checked,
        all_hold,
    })
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub weight: Prob,
    pub model: ArrayModel,
    pub f: FunctionSpec,
}

#[derive(Clone, Debug, Serialize)]
pub struct InstanceReport {
    pub scale: f64,
    /// `‖d_i‖_p / ‖f − E f‖_p` per block.
    pub normalized_norms: Vec<f64>,
    pub in_g: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SimultaneousReport {
    pub blocks: Vec<Subset>,
    pub i0: usize,
    pub chosen: Subset,
    /// λ-average of the squared normalized norms, per block.
    pub averages: Vec<f64>,
    /// `(m(p−1))^{−1/4}`
    pub threshold: f64,
    pub g: Vec<usize>,
    pub lambda_g: f64,
    pub lambda_bound: f64,
    pub bound_holds: bool,
    pub instances: Vec<InstanceReport>,
}

/// One block index good for most instances at once.
pub fn simultaneous_select(
    instances: &[Instance],
    p: f64,
    i: Subset,
    k: usize,
    limits: &Limits,
) -> Result<SimultaneousReport> {
    if instances.is_empty() {
        return Err(Error::Domain("no instances".into()));
    }
    let total = Prob::sum(instances.iter().map(|x| &x.weight));
    let off = (total.clone() - Prob::one()).abs();
    if instances.iter().any(|x| x.weight.is_negative())
        || (total.is_exact() && !off.is_zero())
        || off.to_f64() > 1e-9
    {
        return Err(Error::Domain(format!(
            "weights must be nonnegative and sum to 1, got {}",
            total
        )));
    }
    for (v, x) in instances.iter().enumerate() {
        check_select_args(&x.model, p, i, k)
            .map_err(|e| Error::Domain(format!("instance {v}: {e}")))?;
    }
    let blocks = successive_blocks(i, k);
    let m = blocks.len();
    let per: Vec<(f64, Vec<f64>)> = instances
        .par_iter()
        .enumerate()
        .map(|(v, x)| {
            let run = || -> Result<(f64, Vec<f64>)> {
                let doob = doob_increments(&x.model, &x.f, &blocks, &[p], limits)?;
                let scale = function_table(&x.model, &x.f, limits)?
                    .centered()
                    .lp_norm(p)?;
                let norms = doob
                    .increments
                    .iter()
                    .map(|inc| {
                        if scale > 0.0 {
                            inc.norms[0].value / scale
                        } else {
                            0.0
                        }
                    })
                    .collect();
                Ok((scale, norms))
            };
            run().map_err(|e| match e {
                Error::Capacity {
                    what,
                    required,
                    cap,
                } => Error::Capacity {
                    what: format!("instance {v}: {what}"),
                    required,
                    cap,
                },
                other => Error::Domain(format!("instance {v}: {other}")),
            })
        })
        .collect::<Result<_>>()?;
    let weights: Vec<f64> = instances.iter().map(|x| x.weight.to_f64()).collect();
    let averages: Vec<f64> = (0..m)
        .map(|b| {
            per.iter()
                .zip(&weights)
                .map(|((_, ns), w)| w * ns[b] * ns[b])
                .sum()
        })
        .collect();
    let at = argmin_first(&averages);
    let threshold = (m as f64 * (p - 1.0)).powf(-0.25);
    let mut g = Vec::new();
    let mut lambda_g = 0.0;
    let reports = per
        .into_iter()
        .enumerate()
        .map(|(v, (scale, normalized_norms))| {
            let in_g = normalized_norms[at] <= threshold + SLACK;
            if in_g {
                g.push(v);
                lambda_g += weights[v];
            }
            InstanceReport {
                scale,
                normalized_norms,
                in_g,
            }
        })
        .collect();
    let lambda_bound = 1.0 - threshold;
    Ok(SimultaneousReport {
        i0: at + 1,
        chosen: blocks[at],
        averages,
        threshold,
        bound_holds: lambda_g >= lambda_bound - SLACK,
        g,
        lambda_g,
        lambda_bound,
        instances: reports,
        blocks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{appendix_a_2d, product_array};

    // X_s = ∏_{i∈s} ξ_i with fair vertex bits, so E X_s = 1/4 at d = 2
    fn half_product(n: usize, d: usize) -> ArrayModel {
        product_array(vec![Prob::ratio(1, 2); n], d).unwrap()
    }

    #[test]
    fn constant_and_independent() {
        let m = half_product(5, 2);
        let l = Limits::default();
        let t = conditional_expectation(
            &m,
            &FunctionSpec::constant(Prob::ratio(2, 3)),
            Subset::of(&[1, 2, 3]),
            &l,
        )
        .unwrap();
        assert!(t.values.iter().all(|v| *v == Prob::ratio(2, 3)));
        let f = FunctionSpec::MonomialMinusConstant {
            family: vec![Subset::of(&[4, 5])],
            c: Prob::ratio(1, 4),
        };
        let t = conditional_expectation(&m, &f, Subset::of(&[1, 2, 3]), &l).unwrap();
        assert!(t.values.iter().all(Prob::is_zero));
        assert_eq!(
            concentration_probability(&m, &f, Subset::of(&[1, 2, 3]), &Prob::ratio(1, 1000), &l)
                .unwrap(),
            Prob::one()
        );
    }

    #[test]
    fn box_correlation_against_disjoint_box() {
        // E[E[f|ℱ_J]·1_C] with C the all-ones event on box({5,6},{7,8})
        let m = appendix_a_2d(8).unwrap();
        let l = Limits::default();
        let j = Subset::of(&[5, 6, 7, 8]);
        let t = conditional_expectation(&m, &FunctionSpec::box_monomial(), j, &l).unwrap();
        let bx: Vec<usize> = [[5, 7], [5, 8], [6, 7], [6, 8]]
            .iter()
            .map(|e| t.coords.iter().position(|c| *c == Subset::of(e)).unwrap())
            .collect();
        let mut acc = Prob::zero();
        for (idx, (q, v)) in t.probs.iter().zip(&t.values).enumerate() {
            let dg = config_digits(idx, 2, t.coords.len());
            if bx.iter().all(|&b| dg[b] == 1) {
                acc += q * v;
            }
        }
        assert_eq!(acc, Prob::ratio(1, 1024));
    }

    #[test]
    fn doob_sums_and_orthogonality() {
        let m = half_product(5, 2);
        let l = Limits::default();
        let f = FunctionSpec::MonomialMinusConstant {
            family: vec![
                Subset::of(&[1, 2]),
                Subset::of(&[3, 4]),
                Subset::of(&[2, 5]),
            ],
            c: Prob::ratio(1, 8),
        };
        let doob = doob_increments(
            &m,
            &f,
            &[Subset::of(&[1, 2]), Subset::of(&[3, 4])],
            &[2.0],
            &l,
        )
        .unwrap();
        let s = doob.sum_of_increments();
        let sq: Prob = Prob::sum(
            &doob
                .increments
                .iter()
                .map(|i| i.table.l2_squared())
                .collect::<Vec<_>>(),
        );
        assert_eq!(s.l2_squared(), sq);
        assert!(doob_increments(
            &m,
            &f,
            &[Subset::of(&[1, 2]), Subset::of(&[2, 3])],
            &[2.0],
            &l
        )
        .is_err());
    }

    #[test]
    fn measurable_in_first_block_selects_second() {
        let m = half_product(6, 2);
        let f = FunctionSpec::MonomialMinusConstant {
            family: vec![Subset::of(&[1, 2])],
            c: Prob::ratio(1, 2),
        };
        let rep = energy_increment_select(
            &m,
            &f,
            2.0,
            Subset::range(6),
            2,
            &SelectOptions::default(),
            &Limits::default(),
        )
        .unwrap();
        assert_eq!(rep.i0, 2);
        assert_eq!(rep.achieved, 0.0);
        assert!(rep.guarantee_holds && rep.chosen_is_interval);
        assert_eq!(rep.endpoint_holds, Some(true));
    }

    #[test]
    fn norms() {
        let t = RandomVariableTable {
            support: Subset::of(&[1]),
            coords: vec![],
            alphabet: 2,
            probs: vec![Prob::ratio(1, 2), Prob::ratio(1, 2), Prob::zero()],
            values: vec![Prob::int(1), Prob::int(-1), Prob::int(7)],
            compressed: false,
        };
        for p in [1.0, 1.5, 2.0, f64::INFINITY] {
            assert!((t.lp_norm(p).unwrap() - 1.0).abs() < 1e-12);
        }
        assert!(t.lp_norm(0.5).is_err());
    }
}
