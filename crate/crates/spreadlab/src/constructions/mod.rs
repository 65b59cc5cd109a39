//! Generators for the concrete array families: hypergraph sampling,
//! mixtures, product arrays, fixed-size Erdős–Rényi arrays and the
//! semi-random counterexamples.

mod symmetric;

pub use symmetric::{
    appendix_a_highd, cell_target, claim_cells, derive_seed, designated_patterns, implied_delta,
    pattern_integral, random_symmetric_set, sample_symmetric, ClaimBounds, Pattern, PatternFamily,
    SymmetricSetSearchResult,
};

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arrays::latent::permutations_of;
use crate::arrays::{
    ArrayModel, ClosedFormTwoDim, FixedSizeEr, GraphSampling, Mixture, ProductArray, TupleSet,
};
use crate::error::{Error, Result};
use crate::prob::Prob;

/// A `d`-uniform hypergraph on the vertex set `{1, …, V}`; edges are sorted
/// `d`-sets of distinct vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HypergraphSpec {
    pub v: usize,
    pub d: usize,
    pub edges: Vec<Vec<usize>>,
}

impl HypergraphSpec {
    pub fn new(v: usize, d: usize, edges: Vec<Vec<usize>>) -> Result<Self> {
        if v == 0 || d == 0 {
            return Err(Error::Domain("hypergraph needs |V| ≥ 1 and d ≥ 1".into()));
        }
        let mut clean = Vec::with_capacity(edges.len());
        for mut e in edges {
            e.sort_unstable();
            let distinct = e.windows(2).all(|w| w[0] < w[1]);
            if e.len() != d || !distinct || e[0] == 0 || e[d - 1] > v {
                return Err(Error::Parse(format!(
                    "{e:?} is not a {d}-set of distinct vertices in 1..={v}"
                )));
            }
            clean.push(e);
        }
        clean.sort();
        clean.dedup();
        Ok(HypergraphSpec { v, d, edges: clean })
    }

    /// Whitespace-separated vertices, one edge per line, 1-based; blank lines
    /// and `#` comments are skipped. `V` defaults to the largest vertex seen.
    pub fn parse_edge_list(text: &str, v: Option<usize>) -> Result<Self> {
        let mut edges = Vec::new();
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let e = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad vertex {t:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            edges.push(e);
        }
        let d = edges
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::Parse("edge list is empty".into()))?;
        let vmax = edges.iter().flatten().copied().max().unwrap_or(0);
        HypergraphSpec::new(v.unwrap_or(vmax), d, edges)
    }

    pub fn complete(v: usize, d: usize) -> Self {
        let edges = crate::arrays::Subset::range(v)
            .k_subsets(d)
            .into_iter()
            .map(|s| s.elems())
            .collect();
        HypergraphSpec { v, d, edges }
    }

    /// Each `d`-set is an edge independently with probability `density`.
    pub fn random(v: usize, d: usize, density: f64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let edges = crate::arrays::Subset::range(v)
            .k_subsets(d)
            .into_iter()
            .filter(|_| rng.random_bool(density))
            .map(|s| s.elems())
            .collect();
        HypergraphSpec { v, d, edges }
    }

    /// Disjoint cliques of the given sizes (graphs only).
    pub fn disjoint_cliques(sizes: &[usize]) -> Self {
        let mut edges = Vec::new();
        let mut base = 0;
        for &k in sizes {
            for i in 1..=k {
                for j in i + 1..=k {
                    edges.push(vec![base + i, base + j]);
                }
            }
            base += k;
        }
        HypergraphSpec {
            v: base,
            d: 2,
            edges,
        }
    }

    /// `𝒢 ⊆ V^d`: every ordering of every edge, with 0-based labels; tuples
    /// with a repeated vertex are never members.
    pub fn tuple_set(&self) -> TupleSet {
        let mut a = TupleSet::empty(self.v, self.d);
        for e in &self.edges {
            let labels: Vec<usize> = e.iter().map(|x| x - 1).collect();
            for p in permutations_of(&labels) {
                a.insert(&p);
            }
        }
        a
    }

    /// `E[1_𝒢]` over uniform `V^d`.
    pub fn density(&self) -> Prob {
        let a = self.tuple_set();
        Prob::ratio(a.len() as u64, a.members.len() as u64)
    }
}

pub fn from_hypergraph(h: &HypergraphSpec, n: usize) -> Result<ArrayModel> {
    Ok(ArrayModel::GraphSampling(GraphSampling::new(
        n,
        h.tuple_set(),
    )?))
}

pub fn mixture(components: Vec<(Prob, ArrayModel)>) -> Result<ArrayModel> {
    Ok(ArrayModel::Mixture(Mixture::new(components)?))
}

pub fn product_array(p: Vec<Prob>, d: usize) -> Result<ArrayModel> {
    Ok(ArrayModel::Product(ProductArray::new(p, d)?))
}

pub fn fixed_size_er(n: usize, d: usize, k: u64) -> Result<ArrayModel> {
    Ok(ArrayModel::FixedSizeEr(FixedSizeEr::new(n, d, k)?))
}

pub fn appendix_a_2d(n: usize) -> Result<ArrayModel> {
    Ok(ArrayModel::ClosedFormTwoDim(ClosedFormTwoDim::new(n)?))
}

/// The graph-sampling array of the equality relation on `{0,1}`, whose
/// half-mixture with fair coins is the closed-form two-dimensional array.
pub fn equality_sampling(n: usize) -> Result<ArrayModel> {
    let mut a = TupleSet::empty(2, 2);
    for t in [[0, 0], [1, 1]] {
        a.insert(&t);
    }
    Ok(ArrayModel::GraphSampling(GraphSampling::new(n, a)?))
}
