use rand::{Rng, RngExt};

use super::closed::{ClosedFormTwoDim, FixedSizeEr, ProductArray};
use super::dense::{config_digits, config_index, DenseTable};
use super::index::{DSubsetIndex, Subset};
use super::query::{EventQuery, Symbol};
use super::sampling::{GraphSampling, HighDimSemiRandom};
use crate::error::{pow_sat, Error, Limits, Result};
use crate::prob::Prob;

/// A finite `d`-dimensional random array on `[n]` over the alphabet
/// `{0, …, alphabet−1}`, exposed through exact event probabilities.
#[derive(Clone, Debug)]
pub enum ArrayModel {
    Dense(DenseTable),
    GraphSampling(GraphSampling),
    ClosedFormTwoDim(ClosedFormTwoDim),
    HighDim(HighDimSemiRandom),
    Mixture(Mixture),
    Product(ProductArray),
    FixedSizeEr(FixedSizeEr),
    /// `X̃_t = X_{t∪{n}}` on `[n−1]`
    RestrictLast(Box<ArrayModel>),
    /// `X̃′_t = (X_{t∪{n−1}}, X_{t∪{n}})` on `[n−2]`, pair `(a, b)` encoded as `a·|𝒳| + b`
    Doubling(Box<ArrayModel>),
}

#[derive(Clone, Debug)]
pub struct Mixture {
    pub components: Vec<(Prob, ArrayModel)>,
}

impl Mixture {
    pub fn new(components: Vec<(Prob, ArrayModel)>) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| Error::Domain("mixture needs a component".into()))?;
        let shape = (first.1.n(), first.1.d(), first.1.alphabet());
        for (w, c) in &components {
            if (c.n(), c.d(), c.alphabet()) != shape {
                return Err(Error::Shape(format!(
                    "mixture components disagree on (n, d, |𝒳|): {:?} vs {:?}",
                    shape,
                    (c.n(), c.d(), c.alphabet())
                )));
            }
            if w.is_negative() {
                return Err(Error::Domain("negative mixture weight".into()));
            }
        }
        let total = Prob::sum(components.iter().map(|(w, _)| w));
        let ok = match &total {
            Prob::Exact(_) => total == Prob::one(),
            Prob::Float(x) => (x - 1.0).abs() <= 1e-12,
        };
        if !ok {
            return Err(Error::Domain(format!("mixture weights sum to {total}")));
        }
        Ok(Mixture { components })
    }
}

impl ArrayModel {
    pub fn restrict_last(source: ArrayModel) -> Result<ArrayModel> {
        if source.d() < 2 || source.n() < source.d() + 1 {
            return Err(Error::Domain(
                "restriction needs d ≥ 2 and n ≥ d + 1".into(),
            ));
        }
        Ok(ArrayModel::RestrictLast(Box::new(source)))
    }

    pub fn doubling(source: ArrayModel) -> Result<ArrayModel> {
        if source.d() < 2 || source.n() < source.d() + 2 {
            return Err(Error::Domain("doubling needs d ≥ 2 and n ≥ d + 2".into()));
        }
        Ok(ArrayModel::Doubling(Box::new(source)))
    }

    pub fn n(&self) -> usize {
        match self {
            ArrayModel::Dense(m) => m.n,
            ArrayModel::GraphSampling(m) => m.n,
            ArrayModel::ClosedFormTwoDim(m) => m.n,
            ArrayModel::HighDim(m) => m.n,
            ArrayModel::Mixture(m) => m.components[0].1.n(),
            ArrayModel::Product(m) => m.n(),
            ArrayModel::FixedSizeEr(m) => m.n,
            ArrayModel::RestrictLast(s) => s.n() - 1,
            ArrayModel::Doubling(s) => s.n() - 2,
        }
    }

    pub fn d(&self) -> usize {
        match self {
            ArrayModel::Dense(m) => m.d,
            ArrayModel::GraphSampling(m) => m.d(),
            ArrayModel::ClosedFormTwoDim(_) => 2,
            ArrayModel::HighDim(m) => m.d,
            ArrayModel::Mixture(m) => m.components[0].1.d(),
            ArrayModel::Product(m) => m.d,
            ArrayModel::FixedSizeEr(m) => m.d,
            ArrayModel::RestrictLast(s) | ArrayModel::Doubling(s) => s.d() - 1,
        }
    }

    pub fn alphabet(&self) -> usize {
        match self {
            ArrayModel::Dense(m) => m.m,
            ArrayModel::Mixture(m) => m.components[0].1.alphabet(),
            ArrayModel::RestrictLast(s) => s.alphabet(),
            ArrayModel::Doubling(s) => s.alphabet() * s.alphabet(),
            _ => 2,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ArrayModel::Dense(_) => "dense_table",
            ArrayModel::GraphSampling(_) => "graph_sampling",
            ArrayModel::ClosedFormTwoDim(_) => "closed_form_two_dim",
            ArrayModel::HighDim(_) => "high_dim_semi_random",
            ArrayModel::Mixture(_) => "mixture",
            ArrayModel::Product(_) => "product",
            ArrayModel::FixedSizeEr(_) => "fixed_size_er",
            ArrayModel::RestrictLast(_) => "restrict_last",
            ArrayModel::Doubling(_) => "doubling",
        }
    }

    pub fn index(&self) -> DSubsetIndex {
        DSubsetIndex {
            n: self.n(),
            d: self.d(),
        }
    }

    pub fn is_boolean(&self) -> bool {
        self.alphabet() == 2
    }

    /// True when 0-spreadability follows from how the model is built: i.i.d.
    /// vertex labels read in increasing order, exchangeable closed forms, and
    /// anything derived from those by mixing, restriction or doubling.
    pub fn is_spreadable_by_construction(&self) -> bool {
        match self {
            ArrayModel::Dense(_) => false,
            ArrayModel::Product(m) => m.p.windows(2).all(|w| w[0] == w[1]),
            ArrayModel::GraphSampling(_)
            | ArrayModel::ClosedFormTwoDim(_)
            | ArrayModel::HighDim(_)
            | ArrayModel::FixedSizeEr(_) => true,
            ArrayModel::Mixture(m) => m
                .components
                .iter()
                .all(|(_, c)| c.is_spreadable_by_construction()),
            ArrayModel::RestrictLast(s) | ArrayModel::Doubling(s) => {
                s.is_spreadable_by_construction()
            }
        }
    }

    fn check_index(&self, s: Subset) -> Result<()> {
        self.index().validate(s)
    }

    fn check_symbol(&self, a: Symbol) -> Result<()> {
        if a as usize >= self.alphabet() {
            return Err(Error::Symbol {
                symbol: a,
                size: self.alphabet(),
            });
        }
        Ok(())
    }

    pub fn event_probability(&self, q: &EventQuery) -> Result<Prob> {
        self.event_probability_with(q, &Limits::default())
    }

    pub fn event_probability_with(&self, q: &EventQuery, limits: &Limits) -> Result<Prob> {
        for (s, a) in q.iter() {
            self.check_index(s)?;
            self.check_symbol(a)?;
        }
        if q.is_contradictory() {
            return Ok(Prob::zero());
        }
        self.raw_prob(q, limits)
    }

    fn raw_prob(&self, q: &EventQuery, limits: &Limits) -> Result<Prob> {
        if q.is_empty() {
            return Ok(Prob::one());
        }
        match self {
            ArrayModel::Dense(m) => m.prob(q),
            ArrayModel::GraphSampling(m) => m.prob(q, limits),
            ArrayModel::ClosedFormTwoDim(m) => m.prob(q, limits),
            ArrayModel::HighDim(m) => m.prob(q, limits),
            ArrayModel::Product(m) => m.prob(q, limits),
            ArrayModel::FixedSizeEr(m) => m.prob(q),
            ArrayModel::Mixture(m) => {
                let mut total = Prob::zero();
                for (w, c) in &m.components {
                    if w.is_zero() {
                        continue;
                    }
                    total += w * &c.raw_prob(q, limits)?;
                }
                Ok(total)
            }
            ArrayModel::RestrictLast(src) => {
                let last = src.n();
                src.raw_prob(
                    &EventQuery::from_pairs(q.iter().map(|(t, a)| (t.with(last), a))),
                    limits,
                )
            }
            ArrayModel::Doubling(src) => {
                let (n, m) = (src.n(), src.alphabet() as Symbol);
                let mut sq = EventQuery::new();
                for (t, c) in q.iter() {
                    sq.insert(t.with(n - 1), c / m);
                    sq.insert(t.with(n), c % m);
                }
                if sq.is_contradictory() {
                    return Ok(Prob::zero());
                }
                src.raw_prob(&sq, limits)
            }
        }
    }

    /// `E[∏_{s∈ℱ} X_s]` for boolean arrays.
    pub fn moment(&self, family: &[Subset]) -> Result<Prob> {
        self.moment_with(family, &Limits::default())
    }

    pub fn moment_with(&self, family: &[Subset], limits: &Limits) -> Result<Prob> {
        if !self.is_boolean() {
            return Err(Error::NonBoolean(self.alphabet()));
        }
        if family.is_empty() {
            return Err(Error::Domain("moment of an empty family".into()));
        }
        self.event_probability_with(&EventQuery::all(family, 1), limits)
    }

    /// Law of `(X_c)_{c∈coords}`; configuration index in radix `|𝒳|` with
    /// `coords[0]` least significant.
    pub fn joint_law(&self, coords: &[Subset], limits: &Limits) -> Result<Vec<Prob>> {
        for (i, &s) in coords.iter().enumerate() {
            self.check_index(s)?;
            if coords[..i].contains(&s) {
                return Err(Error::Shape(format!("coordinate {s} repeated")));
            }
        }
        limits.check(
            format!(
                "joint law of {} coordinates over {} symbols",
                coords.len(),
                self.alphabet()
            ),
            pow_sat(self.alphabet() as u128, coords.len() as u32),
        )?;
        self.raw_joint(coords, limits)
    }

    fn raw_joint(&self, coords: &[Subset], limits: &Limits) -> Result<Vec<Prob>> {
        match self {
            ArrayModel::Dense(m) => m.joint(coords),
            ArrayModel::GraphSampling(m) => m.joint(coords, limits),
            ArrayModel::ClosedFormTwoDim(m) => m.joint(coords, limits),
            ArrayModel::HighDim(m) => m.joint(coords, limits),
            ArrayModel::Product(m) => m.joint(coords, limits),
            ArrayModel::FixedSizeEr(m) => m.joint(coords, limits),
            ArrayModel::Mixture(m) => {
                let mut out: Option<Vec<Prob>> = None;
                for (w, c) in &m.components {
                    let law = c.raw_joint(coords, limits)?;
                    out = Some(match out {
                        None => law.iter().map(|p| w * p).collect(),
                        Some(acc) => acc.iter().zip(&law).map(|(a, p)| a + &(w * p)).collect(),
                    });
                }
                Ok(out.expect("mixture has components"))
            }
            ArrayModel::RestrictLast(src) => {
                let last = src.n();
                let lifted: Vec<Subset> = coords.iter().map(|t| t.with(last)).collect();
                src.raw_joint(&lifted, limits)
            }
            ArrayModel::Doubling(src) => {
                let (n, m) = (src.n(), src.alphabet());
                let lifted: Vec<Subset> = coords
                    .iter()
                    .flat_map(|t| [t.with(n - 1), t.with(n)])
                    .collect();
                let law = src.raw_joint(&lifted, limits)?;
                let r = coords.len();
                let mut out = vec![Prob::zero(); law.len()];
                for (idx, p) in law.into_iter().enumerate() {
                    let digits = config_digits(idx, m, 2 * r);
                    let pairs: Vec<u32> = digits
                        .chunks(2)
                        .map(|ab| ab[0] * m as u32 + ab[1])
                        .collect();
                    out[config_index(&pairs, m * m)] = p;
                }
                Ok(out)
            }
        }
    }

    /// Law of the subarray `𝑿_J`, coordinates `C(J,d)` in colex order.
    pub fn subarray_law(&self, j: Subset, limits: &Limits) -> Result<Vec<Prob>> {
        if j.len() < self.d() || j.max_elem().unwrap_or(0) > self.n() {
            return Err(Error::Index(format!(
                "{j} is not a valid support for d={} on [{}]",
                self.d(),
                self.n()
            )));
        }
        self.joint_law(&j.k_subsets(self.d()), limits)
    }

    /// One draw of the whole array, coordinates in colex order.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, limits: &Limits) -> Result<Vec<Symbol>> {
        let coords = self.index().all();
        match self {
            ArrayModel::Dense(m) => {
                let u: f64 = rng.random();
                let mut acc = 0.0;
                let mut pick = m.probs.len() - 1;
                for (i, p) in m.probs.iter().enumerate() {
                    acc += p.to_f64();
                    if u < acc {
                        pick = i;
                        break;
                    }
                }
                Ok(config_digits(pick, m.m, coords.len()))
            }
            ArrayModel::FixedSizeEr(m) => {
                let total = coords.len();
                let mut out = vec![0; total];
                let picked = rand::seq::index::sample(rng, total, m.k as usize);
                for i in picked {
                    out[i] = 1;
                }
                Ok(out)
            }
            ArrayModel::GraphSampling(m) => Ok(sample_tuple_set(&m.a, &coords, self.n(), rng)),
            ArrayModel::HighDim(m) => {
                if rng.random_bool(0.5) {
                    Ok(coords.iter().map(|_| rng.random_range(0..2)).collect())
                } else {
                    Ok(sample_tuple_set(&m.h.a, &coords, self.n(), rng))
                }
            }
            ArrayModel::ClosedFormTwoDim(_) => {
                if rng.random_bool(0.5) {
                    Ok(coords.iter().map(|_| rng.random_range(0..2)).collect())
                } else {
                    let bits: Vec<bool> = (0..self.n()).map(|_| rng.random_bool(0.5)).collect();
                    Ok(coords
                        .iter()
                        .map(|s| {
                            let e = s.elems();
                            (bits[e[0] - 1] == bits[e[1] - 1]) as Symbol
                        })
                        .collect())
                }
            }
            ArrayModel::Product(m) => {
                let xi: Vec<bool> =
                    m.p.iter()
                        .map(|p| rng.random::<f64>() < p.to_f64())
                        .collect();
                Ok(coords
                    .iter()
                    .map(|s| s.iter().all(|i| xi[i - 1]) as Symbol)
                    .collect())
            }
            ArrayModel::Mixture(m) => {
                let u: f64 = rng.random();
                let mut acc = 0.0;
                for (w, c) in &m.components {
                    acc += w.to_f64();
                    if u < acc {
                        return c.sample(rng, limits);
                    }
                }
                m.components.last().expect("nonempty").1.sample(rng, limits)
            }
            ArrayModel::RestrictLast(src) => {
                let full = src.sample(rng, limits)?;
                let idx = src.index();
                coords
                    .iter()
                    .map(|t| Ok(full[idx.rank(t.with(src.n()))?]))
                    .collect()
            }
            ArrayModel::Doubling(src) => {
                let full = src.sample(rng, limits)?;
                let (idx, n, m) = (src.index(), src.n(), src.alphabet() as Symbol);
                coords
                    .iter()
                    .map(|t| Ok(full[idx.rank(t.with(n - 1))?] * m + full[idx.rank(t.with(n))?]))
                    .collect()
            }
        }
    }
}

fn sample_tuple_set<R: Rng + ?Sized>(
    a: &super::latent::TupleSet,
    coords: &[Subset],
    n: usize,
    rng: &mut R,
) -> Vec<Symbol> {
    let xi: Vec<usize> = (0..n).map(|_| rng.random_range(0..a.v)).collect();
    coords
        .iter()
        .map(|s| {
            let labels: Vec<usize> = s.iter().map(|i| xi[i - 1]).collect();
            a.contains(&labels) as Symbol
        })
        .collect()
}
