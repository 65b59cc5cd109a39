//! JSON model descriptions with a `kind` discriminator.

use serde::{Deserialize, Serialize};

use super::closed::{ClosedFormTwoDim, FixedSizeEr, ProductArray};
use super::dense::DenseTable;
use super::latent::TupleSet;
use super::model::{ArrayModel, Mixture};
use super::sampling::{GraphSampling, HighDimSemiRandom};
use crate::constructions::HypergraphSpec;
use crate::error::{Error, Limits, Result};
use crate::prob::Prob;

/// A number given either as a JSON number (read as its exact decimal) or as
/// a string such as `"3/32"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Float(f64),
    Text(String),
}

impl Num {
    pub fn to_prob(&self) -> Result<Prob> {
        match self {
            Num::Float(x) => Prob::from_f64_decimal(*x),
            Num::Text(s) => Prob::parse(s),
        }
    }

    pub fn from_prob(p: &Prob) -> Num {
        match p {
            Prob::Exact(_) => Num::Text(p.display_exact()),
            Prob::Float(x) => Num::Float(*x),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixtureComponent {
    pub weight: Num,
    pub model: ModelSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelSpec {
    DenseTable {
        n: usize,
        d: usize,
        alphabet: usize,
        probs: Vec<Num>,
    },
    /// `A` lists label tuples over `V = {0, …, V−1}`.
    GraphSampling {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        n: Option<usize>,
        d: usize,
        #[serde(rename = "V")]
        v: usize,
        #[serde(rename = "A")]
        a: Vec<Vec<usize>>,
    },
    /// `edges` are `d`-sets of 1-based vertices of `[V]`.
    Hypergraph {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        n: Option<usize>,
        d: usize,
        #[serde(rename = "V")]
        v: usize,
        edges: Vec<Vec<usize>>,
    },
    #[serde(alias = "appendix_a_2d")]
    ClosedFormTwoDim {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        n: Option<usize>,
    },
    /// `A` lists `(d−1)`-tuples over `V = {0, …, V−1}`.
    HighDimSemiRandom {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        n: Option<usize>,
        d: usize,
        #[serde(rename = "V")]
        v: usize,
        #[serde(rename = "A")]
        a: Vec<Vec<usize>>,
    },
    Mixture {
        components: Vec<MixtureComponent>,
    },
    Product {
        d: usize,
        p: Vec<Num>,
    },
    FixedSizeEr {
        n: usize,
        d: usize,
        k: u64,
    },
    RestrictLast {
        source: Box<ModelSpec>,
    },
    Doubling {
        source: Box<ModelSpec>,
    },
}

fn tuple_set(v: usize, d: usize, tuples: &[Vec<usize>]) -> Result<TupleSet> {
    if v == 0 {
        return Err(Error::Domain("V must be nonempty".into()));
    }
    let mut a = TupleSet::empty(v, d);
    for t in tuples {
        if t.len() != d || t.iter().any(|&x| x >= v) {
            return Err(Error::Parse(format!(
                "tuple {t:?} is not in V^{d} with |V|={v}"
            )));
        }
        a.insert(t);
    }
    Ok(a)
}

fn tuples_of(a: &TupleSet) -> Vec<Vec<usize>> {
    (0..a.members.len())
        .filter(|&i| a.members[i])
        .map(|i| a.labels(i))
        .collect()
}

fn need_n(n: Option<usize>, fallback: Option<usize>) -> Result<usize> {
    n.or(fallback)
        .ok_or_else(|| Error::Domain("model spec needs n (set it in the spec or pass --n)".into()))
}

impl ModelSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Build the model; `n` fills in specs that leave the ground set open.
    pub fn build(&self, n: Option<usize>, limits: &Limits) -> Result<ArrayModel> {
        Ok(match self {
            ModelSpec::DenseTable {
                n,
                d,
                alphabet,
                probs,
            } => {
                let probs = probs.iter().map(Num::to_prob).collect::<Result<Vec<_>>>()?;
                ArrayModel::Dense(DenseTable::new(*n, *d, *alphabet, probs, limits)?)
            }
            ModelSpec::GraphSampling { n: own, d, v, a } => ArrayModel::GraphSampling(
                GraphSampling::new(need_n(*own, n)?, tuple_set(*v, *d, a)?)?,
            ),
            ModelSpec::Hypergraph {
                n: own,
                d,
                v,
                edges,
            } => {
                let h = HypergraphSpec::new(*v, *d, edges.clone())?;
                crate::constructions::from_hypergraph(&h, need_n(*own, n)?)?
            }
            ModelSpec::ClosedFormTwoDim { n: own } => {
                ArrayModel::ClosedFormTwoDim(ClosedFormTwoDim::new(need_n(*own, n)?)?)
            }
            ModelSpec::HighDimSemiRandom { n: own, d, v, a } => {
                if *d < 2 {
                    return Err(Error::Domain("semi-random array needs d ≥ 2".into()));
                }
                ArrayModel::HighDim(HighDimSemiRandom::new(
                    need_n(*own, n)?,
                    tuple_set(*v, d - 1, a)?,
                )?)
            }
            ModelSpec::Mixture { components } => {
                let comps = components
                    .iter()
                    .map(|c| Ok((c.weight.to_prob()?, c.model.build(n, limits)?)))
                    .collect::<Result<Vec<_>>>()?;
                ArrayModel::Mixture(Mixture::new(comps)?)
            }
            ModelSpec::Product { d, p } => {
                let p = p.iter().map(Num::to_prob).collect::<Result<Vec<_>>>()?;
                ArrayModel::Product(ProductArray::new(p, *d)?)
            }
            ModelSpec::FixedSizeEr { n, d, k } => {
                ArrayModel::FixedSizeEr(FixedSizeEr::new(*n, *d, *k)?)
            }
            ModelSpec::RestrictLast { source } => {
                ArrayModel::restrict_last(source.build(n, limits)?)?
            }
            ModelSpec::Doubling { source } => ArrayModel::doubling(source.build(n, limits)?)?,
        })
    }

    pub fn of_model(model: &ArrayModel) -> ModelSpec {
        match model {
            ArrayModel::Dense(m) => ModelSpec::DenseTable {
                n: m.n,
                d: m.d,
                alphabet: m.m,
                probs: m.probs.iter().map(Num::from_prob).collect(),
            },
            ArrayModel::GraphSampling(m) => ModelSpec::GraphSampling {
                n: Some(m.n),
                d: m.d(),
                v: m.a.v,
                a: tuples_of(&m.a),
            },
            ArrayModel::ClosedFormTwoDim(m) => ModelSpec::ClosedFormTwoDim { n: Some(m.n) },
            ArrayModel::HighDim(m) => ModelSpec::HighDimSemiRandom {
                n: Some(m.n),
                d: m.d,
                v: m.a.v,
                a: tuples_of(&m.a),
            },
            ArrayModel::Mixture(m) => ModelSpec::Mixture {
                components: m
                    .components
                    .iter()
                    .map(|(w, c)| MixtureComponent {
                        weight: Num::from_prob(w),
                        model: ModelSpec::of_model(c),
                    })
                    .collect(),
            },
            ArrayModel::Product(m) => ModelSpec::Product {
                d: m.d,
                p: m.p.iter().map(Num::from_prob).collect(),
            },
            ArrayModel::FixedSizeEr(m) => ModelSpec::FixedSizeEr {
                n: m.n,
                d: m.d,
                k: m.k,
            },
            ArrayModel::RestrictLast(s) => ModelSpec::RestrictLast {
                source: Box::new(ModelSpec::of_model(s)),
            },
            ArrayModel::Doubling(s) => ModelSpec::Doubling {
                source: Box::new(ModelSpec::of_model(s)),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_spec_example_and_reports_closure() {
        let spec = ModelSpec::from_json(
            r#"{"kind":"graph_sampling","V":4,"A":[[0,0],[1,1],[0,1]],"d":2}"#,
        )
        .unwrap();
        let m = spec.build(Some(5), &Limits::default()).unwrap();
        match &m {
            ArrayModel::GraphSampling(g) => assert_eq!(g.closure_added, 1),
            _ => panic!("wrong kind"),
        }
        assert!(spec.build(None, &Limits::default()).is_err());
    }

    #[test]
    fn round_trips_through_json() {
        let spec = ModelSpec::Mixture {
            components: vec![
                MixtureComponent {
                    weight: Num::Text("1/2".into()),
                    model: ModelSpec::ClosedFormTwoDim { n: Some(6) },
                },
                MixtureComponent {
                    weight: Num::Float(0.5),
                    model: ModelSpec::Product {
                        d: 2,
                        p: vec![Num::Text("1/2".into()); 6],
                    },
                },
            ],
        };
        let text = serde_json::to_string(&spec).unwrap();
        let back = ModelSpec::from_json(&text).unwrap();
        assert_eq!(back, spec);
        let m = back.build(None, &Limits::default()).unwrap();
        let again = ModelSpec::of_model(&m)
            .build(None, &Limits::default())
            .unwrap();
        assert_eq!(again.n(), 6);
    }
}
