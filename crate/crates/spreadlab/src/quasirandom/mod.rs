//! Gowers box norms, box uniformity of hypergraphs and its link with box
//! independence, homomorphism densities, and the quasirandom-family toolkit
//! for families of graphs.

mod family;

pub use family::{
    edge_count, edge_of_rank, edge_rank, family_gamma, graph_edges, graph_of_edges,
    isomorphic_invariant_check, permute_graph, smash_search, theta_quasirandom_audit, theta_star,
    Estimate, GraphFamily, GraphPredicate, InvarianceReport, Membership, MonteCarlo, SmashWitness,
    ThetaAudit, UEntry, BITSET_CAP_N,
};

use num::{BigInt, BigRational};
use serde::Serialize;

use crate::arrays::TupleSet;
use crate::constructions::{from_hypergraph, HypergraphSpec};
use crate::defects::{box_independence_defect, BoxMode};
use crate::error::{pow_sat, Error, Limits, Result};
use crate::prob::Prob;
use crate::report::serialize_prob;

/// A real function on `Ω^d` with `Ω = {0, …, |Ω|−1}` under the uniform
/// measure; `values` is indexed with the first coordinate least significant.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KernelFunction {
    pub d: usize,
    pub omega: usize,
    pub values: Vec<f64>,
    pub symmetric: bool,
}

fn digits(mut idx: usize, base: usize, len: usize) -> Vec<usize> {
    (0..len)
        .map(|_| {
            let x = idx % base;
            idx /= base;
            x
        })
        .collect()
}

fn undigits(ds: &[usize], base: usize) -> usize {
    ds.iter().rev().fold(0, |acc, &x| acc * base + x)
}

fn is_symmetric(values: &[f64], omega: usize, d: usize) -> bool {
    (0..values.len()).all(|i| {
        let mut w = digits(i, omega, d);
        // adjacent transpositions generate all permutations
        (0..d.saturating_sub(1)).all(|a| {
            w.swap(a, a + 1);
            let ok = values[undigits(&w, omega)] == values[i];
            w.swap(a, a + 1);
            ok
        })
    })
}

impl KernelFunction {
    pub fn new(d: usize, omega: usize, values: Vec<f64>) -> Result<Self> {
        if d == 0 || omega == 0 {
            return Err(Error::Domain("kernel needs d ≥ 1 and |Ω| ≥ 1".into()));
        }
        let want = pow_sat(omega as u128, d as u32);
        if values.len() as u128 != want {
            return Err(Error::Shape(format!(
                "kernel has {} values, expected |Ω|^d = {want}",
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("kernel values must be finite".into()));
        }
        let symmetric = is_symmetric(&values, omega, d);
        Ok(KernelFunction {
            d,
            omega,
            values,
            symmetric,
        })
    }

    pub fn from_fn(d: usize, omega: usize, mut f: impl FnMut(&[usize]) -> f64) -> Result<Self> {
        let len = pow_sat(omega as u128, d as u32) as usize;
        KernelFunction::new(
            d,
            omega,
            (0..len).map(|i| f(&digits(i, omega, d))).collect(),
        )
    }

    pub fn constant(d: usize, omega: usize, c: f64) -> Result<Self> {
        KernelFunction::from_fn(d, omega, |_| c)
    }

    pub fn value(&self, w: &[usize]) -> f64 {
        self.values[undigits(w, self.omega)]
    }
}

/// Runs `visit` over every `ω ∈ Ω^{2d}` with the `2^d` indices of `ω_ε`.
fn for_each_cube(
    omega: usize,
    d: usize,
    limits: &Limits,
    mut visit: impl FnMut(&[usize]),
) -> Result<()> {
    let total = pow_sat(omega as u128, 2 * d as u32);
    limits.check(
        format!("box average over |Ω|^{} points", 2 * d),
        total.saturating_mul(1 << d),
    )?;
    let corners = 1usize << d;
    let mut idx = vec![0usize; corners];
    let pw: Vec<usize> = (0..d).map(|i| omega.pow(i as u32)).collect();
    for t in 0..total as usize {
        let w = digits(t, omega, 2 * d);
        for (e, slot) in idx.iter_mut().enumerate() {
            *slot = (0..d).map(|i| w[2 * i + ((e >> i) & 1)] * pw[i]).sum();
        }
        visit(&idx);
    }
    Ok(())
}

/// `∫ ∏_ε f_ε(ω_ε) dμ(ω)`
pub fn box_average(fs: &[&KernelFunction], limits: &Limits) -> Result<f64> {
    let first = fs
        .first()
        .ok_or_else(|| Error::Shape("no functions".into()))?;
    let (d, omega) = (first.d, first.omega);
    if fs.len() != 1 << d || fs.iter().any(|f| f.d != d || f.omega != omega) {
        return Err(Error::Shape(format!(
            "need 2^d = {} kernels on a shared Ω^{d}",
            1usize << d
        )));
    }
    let mut acc = 0.0;
    let mut count = 0usize;
    for_each_cube(omega, d, limits, |idx| {
        acc += idx
            .iter()
            .zip(fs)
            .map(|(&i, f)| f.values[i])
            .product::<f64>();
        count += 1;
    })?;
    Ok(acc / count as f64)
}

fn root_of_average(avg: f64, d: usize, tolerance: f64) -> Result<f64> {
    if avg < 0.0 {
        if avg >= -tolerance {
            log::warn!("box average {avg:e} is negative within tolerance; clamped to 0");
            return Ok(0.0);
        }
        return Err(Error::Domain(format!(
            "box average {avg:e} is negative beyond tolerance"
        )));
    }
    Ok(avg.powf(1.0 / (1u64 << d) as f64))
}

pub fn box_norm(f: &KernelFunction, tolerance: f64, limits: &Limits) -> Result<f64> {
    let copies: Vec<&KernelFunction> = vec![f; 1 << f.d];
    root_of_average(box_average(&copies, limits)?, f.d, tolerance)
}

/// `|∫ ∏ f_ε(ω_ε)| − ∏ ‖f_ε‖_□`; never above the tolerance.
pub fn gcs_defect(fs: &[KernelFunction], tolerance: f64, limits: &Limits) -> Result<f64> {
    let refs: Vec<&KernelFunction> = fs.iter().collect();
    let lhs = box_average(&refs, limits)?.abs();
    let mut rhs = 1.0;
    for f in fs {
        rhs *= box_norm(f, tolerance, limits)?;
    }
    Ok(lhs - rhs)
}

/// `1_𝒢` on `V^d` for a hypergraph.
pub fn hypergraph_kernel(h: &HypergraphSpec) -> Result<KernelFunction> {
    let a: TupleSet = h.tuple_set();
    KernelFunction::from_fn(h.d, h.v, |w| if a.contains(w) { 1.0 } else { 0.0 })
}

#[derive(Clone, Debug, Serialize)]
pub struct BoxUniformity {
    /// `‖1_𝒢 − E 1_𝒢‖_□`
    pub rho: f64,
    /// `ϱ^{2^d}`, exact.
    #[serde(serialize_with = "serialize_prob")]
    pub rho_power: Prob,
    #[serde(serialize_with = "serialize_prob")]
    pub density: Prob,
}

/// Exact through integer scaling: `|V|^d·1_𝒢 − |𝒢|` is an integer kernel.
pub fn box_uniformity(h: &HypergraphSpec, limits: &Limits) -> Result<BoxUniformity> {
    let (v, d) = (h.v, h.d);
    let a = h.tuple_set();
    let big_n = pow_sat(v as u128, d as u32);
    let ones = a.len() as i128;
    let scaled: Vec<i128> = (0..big_n as usize)
        .map(|i| {
            if a.contains(&digits(i, v, d)) {
                big_n as i128 - ones
            } else {
                -ones
            }
        })
        .collect();
    let mut sum = BigInt::from(0);
    let mut chunk: i128 = 0;
    for_each_cube(v, d, limits, |idx| {
        let prod = idx
            .iter()
            .try_fold(1i128, |acc, &i| acc.checked_mul(scaled[i]));
        match prod {
            Some(p) => match chunk.checked_add(p) {
                Some(c) => chunk = c,
                None => {
                    sum += BigInt::from(chunk);
                    chunk = p;
                }
            },
            // wide kernels: fall back to big integers for this term
            None => {
                sum += idx
                    .iter()
                    .fold(BigInt::from(1), |acc, &i| acc * BigInt::from(scaled[i]))
            }
        }
    })?;
    sum += BigInt::from(chunk);
    let denom = BigInt::from(big_n).pow(1u32 << d) * BigInt::from(v).pow(2 * d as u32);
    let power = Prob::Exact(BigRational::new(sum, denom));
    if power.is_negative() {
        return Err(Error::Domain("exact box average is negative".into()));
    }
    let rho = power.to_f64().powf(1.0 / (1u64 << d) as f64);
    Ok(BoxUniformity {
        rho,
        rho_power: power,
        density: Prob::ratio(ones as i64, big_n as i64),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Prop82Audit {
    pub d: usize,
    pub n: usize,
    pub uniformity: BoxUniformity,
    #[serde(serialize_with = "serialize_prob")]
    pub theta: Prob,
    /// `ϑ ≤ 2^d ϱ`
    pub part_i: bool,
    /// `ϱ ≤ 12 ϑ^{1/8^d}`
    pub part_ii: bool,
    pub bound_i: f64,
    pub bound_ii: f64,
}

pub fn prop82_audit(
    h: &HypergraphSpec,
    n: usize,
    tolerance: f64,
    limits: &Limits,
) -> Result<Prop82Audit> {
    let d = h.d;
    if d < 2 || n < 2 * d {
        return Err(Error::Domain(format!(
            "need d ≥ 2 and n ≥ 2d (d={d}, n={n})"
        )));
    }
    let uniformity = box_uniformity(h, limits)?;
    let model = from_hypergraph(h, n)?;
    let theta = box_independence_defect(&model, &[1], BoxMode::OneSided, limits)?.value;
    let bound_i = 2f64.powi(d as i32) * uniformity.rho;
    let bound_ii = 12.0 * theta.to_f64().powf(1.0 / 8f64.powi(d as i32));
    Ok(Prop82Audit {
        d,
        n,
        part_i: theta.to_f64() <= bound_i + tolerance,
        part_ii: uniformity.rho <= bound_ii + tolerance,
        bound_i,
        bound_ii,
        uniformity,
        theta,
    })
}

/// `t(F, G)`: the fraction of maps `V(F) → V(G)` sending every edge of `F`
/// onto an edge of `G`, by direct count.
pub fn homomorphism_density(
    f: &HypergraphSpec,
    g: &HypergraphSpec,
    limits: &Limits,
) -> Result<Prob> {
    if f.d != g.d {
        return Err(Error::Shape(format!(
            "uniformities differ: {} vs {}",
            f.d, g.d
        )));
    }
    let total = pow_sat(g.v as u128, f.v as u32);
    limits.check(format!("maps from {} vertices into {}", f.v, g.v), total)?;
    let a = g.tuple_set();
    let mut hits: u64 = 0;
    let mut img = vec![0usize; f.d];
    for t in 0..total as usize {
        let phi = digits(t, g.v, f.v);
        let ok = f.edges.iter().all(|e| {
            for (slot, &x) in img.iter_mut().zip(e) {
                *slot = phi[x - 1];
            }
            a.contains(&img)
        });
        hits += ok as u64;
    }
    Ok(Prob::Exact(BigRational::new(
        BigInt::from(hits),
        BigInt::from(total),
    )))
}
