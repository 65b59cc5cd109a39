//! Random symmetric subsets `A ⊆ V^{d−1}` whose mixed products of `1_A` and
//! `1_{A^c}` over `(d−1)`-subsets of `[2d]` integrate close to `(½)^{#factors}`,
//! and the semi-random array built from them.

use std::collections::{BTreeSet, HashMap};

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::arrays::latent::permutations_of;
use crate::arrays::{ArrayModel, BoxSpec, HighDimSemiRandom, Subset, TupleSet};
use crate::error::{Error, Limits, Result};

/// A conjunction of `1_A(v_u)` (`true`) and `1_{A^c}(v_u)` (`false`) factors
/// over `(d−1)`-sets `u ⊆ [2d]`.
pub type Pattern = Vec<(Subset, bool)>;

/// Seed for attempt `index` of a run seeded with `seed`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
    mix(seed ^ mix(index))
}

/// `∫ ∏ 1_{A or A^c}(v_u) dμ(v)` by exact summation over the spanned labels.
pub fn pattern_integral(a: &TupleSet, pattern: &[(Subset, bool)], limits: &Limits) -> Result<f64> {
    if pattern.is_empty() {
        return Ok(1.0);
    }
    let (count, m) = a.count(pattern, limits)?;
    Ok(count as f64 / (a.v as f64).powi(m as i32))
}

/// The named index-set families whose `H`-products the semi-random
/// construction controls: `t_1`, `t_1 ∪ t_k`, the face `C` and `Box(d)`.
pub fn claim_cells(d: usize) -> Vec<(String, Vec<Subset>)> {
    let t = |k: usize| Subset::interval(k, k + d - 1);
    let mut out = vec![("t1".to_string(), vec![t(1)])];
    for k in 2..=d + 1 {
        out.push((format!("t1,t{k}"), vec![t(1), t(k)]));
    }
    let apex = 2 * d - 1;
    let face = if d >= 2 {
        BoxSpec::standard(d - 1)
            .members()
            .into_iter()
            .map(|u| u.with(apex))
            .collect()
    } else {
        vec![]
    };
    out.push(("face".to_string(), face));
    out.push(("box".to_string(), BoxSpec::standard(d).members()));
    out
}

/// Target value of `∫ ∏_{s∈cells} H(v_s)` and the coefficient `c` with
/// `|∫ − target| ≤ c·ε` guaranteed by an `ε`-good set.
pub fn cell_target(d: usize, name: &str, cells: usize) -> (f64, f64) {
    let half = |k: usize| 0.5f64.powi(k as i32);
    let df = d as f64;
    match name {
        "t1" => (0.5, 2f64.powi(d as i32 - 1)),
        "face" => (
            half(cells),
            (df + 1.0) * 2f64.powi((d as i32 - 2) + (d as i32 - 1) * (1 << (d - 2))),
        ),
        "box" => (
            2.0 * half(cells),
            df * 2f64.powi(d as i32 + (d as i32 - 2) * (1 << (d - 1))),
        ),
        _ => (0.25, 2f64.powi(2 * d as i32 - 3)),
    }
}

/// Guarantees on the array moments `E ∏ X_s` implied by an `ε`-good set:
/// each field is `(target, allowed deviation)`.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct ClaimBounds {
    pub single: (f64, f64),
    pub pair: (f64, f64),
    pub face: (f64, f64),
    pub full_box: (f64, f64),
}

impl ClaimBounds {
    pub fn new(d: usize, eps: f64) -> Self {
        let moment = |name: &str, cells: usize| {
            let (t, c) = cell_target(d, name, cells);
            (0.5 * 0.5f64.powi(cells as i32) + 0.5 * t, 0.5 * c * eps)
        };
        ClaimBounds {
            single: moment("t1", 1),
            pair: moment("t1,t2", 2),
            face: moment("face", 1 << (d - 1)),
            full_box: moment("box", 1 << d),
        }
    }
}

/// The `δ` certified by `ε` when `ε` is small enough for the construction,
/// i.e. `ε = min{δ·2^{−d2^d}, 2^{−3−(d+2)2^d}}` solved for `δ`.
pub fn implied_delta(d: usize, eps: f64) -> Option<f64> {
    let e = (d as i32) * (1 << d);
    let ceiling = 2f64.powi(-3 - e - 2 * (1 << d));
    (eps <= ceiling).then(|| eps * 2f64.powi(e))
}

/// All face labelings of `cells` with an even number of `A^c` faces in each
/// cell; faces shared between cells get a single label.
fn parity_labelings(cells: &[Subset], d: usize, limits: &Limits) -> Result<Vec<Pattern>> {
    let faces: Vec<Subset> = cells
        .iter()
        .flat_map(|s| s.iter().map(move |i| s.without(i)))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    debug_assert!(faces.iter().all(|f| f.len() == d - 1));
    let cell_faces: Vec<Vec<usize>> = cells
        .iter()
        .map(|s| {
            s.iter()
                .map(|i| faces.binary_search(&s.without(i)).expect("face listed"))
                .collect()
        })
        .collect();
    // a cell can be checked once its last face is labelled
    let mut ready: Vec<Vec<usize>> = vec![Vec::new(); faces.len()];
    for (c, fs) in cell_faces.iter().enumerate() {
        ready[*fs.iter().max().expect("d ≥ 1")].push(c);
    }
    let mut out = Vec::new();
    let mut label = vec![false; faces.len()];
    fn go(
        k: usize,
        label: &mut Vec<bool>,
        faces: &[Subset],
        ready: &[Vec<usize>],
        cell_faces: &[Vec<usize>],
        out: &mut Vec<Pattern>,
        limits: &Limits,
    ) -> Result<()> {
        if k == faces.len() {
            limits.check("designated patterns", out.len() as u128 + 1)?;
            out.push(faces.iter().copied().zip(label.iter().copied()).collect());
            return Ok(());
        }
        for in_a in [true, false] {
            label[k] = in_a;
            let even = ready[k]
                .iter()
                .all(|&c| cell_faces[c].iter().filter(|&&f| !label[f]).count() % 2 == 0);
            if even {
                go(k + 1, label, faces, ready, cell_faces, out, limits)?;
            }
        }
        Ok(())
    }
    go(0, &mut label, &faces, &ready, &cell_faces, &mut out, limits)?;
    Ok(out)
}

type Key = Vec<(u64, bool)>;

/// Canonical form of a vertex-connected pattern under relabelling of its
/// vertices (exhaustive for at most seven vertices).
fn canonical(pattern: &[(Subset, bool)]) -> Key {
    let sup = pattern.iter().fold(Subset::EMPTY, |a, &(s, _)| a.union(s));
    let verts = sup.elems();
    let relabel = |perm: &[usize]| -> Key {
        let mut k: Key = pattern
            .iter()
            .map(|&(s, b)| {
                (
                    s.iter().fold(0u64, |m, e| {
                        m | 1 << perm[sup.position(e).expect("spanned")]
                    }),
                    b,
                )
            })
            .collect();
        k.sort_unstable();
        k
    };
    let ident: Vec<usize> = (0..verts.len()).collect();
    if verts.len() > 7 {
        return relabel(&ident);
    }
    permutations_of(&ident)
        .iter()
        .map(|p| relabel(p))
        .min()
        .expect("at least one permutation")
}

fn split_components(pattern: &[(Subset, bool)]) -> Vec<Pattern> {
    let mut comps: Vec<(Subset, Pattern)> = Vec::new();
    for &(s, b) in pattern {
        let mut merged = (s, vec![(s, b)]);
        let mut rest = Vec::new();
        for c in comps {
            if c.0.intersect(merged.0).is_empty() {
                rest.push(c);
            } else {
                merged.0 = merged.0.union(c.0);
                merged.1.extend(c.1);
            }
        }
        rest.push(merged);
        comps = rest;
    }
    comps.into_iter().map(|(_, p)| p).collect()
}

/// The checked family: every labelling consumed by the cell products above,
/// plus every pattern with between one and four factors, deduplicated up to
/// relabelling of vertices. Each entry stores its connected components as
/// indices into the shared component table.
#[derive(Clone, Debug)]
pub struct PatternFamily {
    pub d: usize,
    pub components: Vec<Pattern>,
    pub patterns: Vec<(Pattern, Vec<usize>)>,
}

pub fn designated_patterns(d: usize, limits: &Limits) -> Result<PatternFamily> {
    if d < 3 {
        return Err(Error::Domain(format!(
            "symmetric-set search needs d ≥ 3, got {d}"
        )));
    }
    let faces = Subset::range(2 * d).k_subsets(d - 1);
    let mut raw: Vec<Pattern> = Vec::new();
    for (_, cells) in claim_cells(d) {
        raw.extend(parity_labelings(&cells, d, limits)?);
    }
    fn small(k: usize, start: usize, faces: &[Subset], cur: &mut Pattern, raw: &mut Vec<Pattern>) {
        if !cur.is_empty() {
            raw.push(cur.clone());
        }
        if k == 4 {
            return;
        }
        for i in start..faces.len() {
            for b in [true, false] {
                cur.push((faces[i], b));
                small(k + 1, i + 1, faces, cur, raw);
                cur.pop();
            }
        }
    }
    small(0, 0, &faces, &mut Vec::new(), &mut raw);
    limits.check("designated patterns", raw.len() as u128)?;

    let keyed: Vec<(Pattern, Vec<Key>)> = raw
        .into_par_iter()
        .map(|p| {
            let comps = split_components(&p);
            let mut keys: Vec<Key> = comps.iter().map(|c| canonical(c)).collect();
            keys.sort();
            (p, keys)
        })
        .collect();
    let mut comp_ids: HashMap<Key, usize> = HashMap::new();
    let mut components = Vec::new();
    let mut seen: BTreeSet<Vec<Key>> = BTreeSet::new();
    let mut patterns = Vec::new();
    for (p, keys) in keyed {
        if !seen.insert(keys.clone()) {
            continue;
        }
        let ids = keys
            .into_iter()
            .map(|k| {
                *comp_ids.entry(k.clone()).or_insert_with(|| {
                    components.push(k.iter().map(|&(m, b)| (Subset(m), b)).collect());
                    components.len() - 1
                })
            })
            .collect();
        patterns.push((p, ids));
    }
    Ok(PatternFamily {
        d,
        components,
        patterns,
    })
}

#[derive(Clone, Debug)]
pub struct SymmetricSetSearchResult {
    pub v: usize,
    pub d: usize,
    /// symmetric subset of `V^{d−1}`
    pub a: TupleSet,
    pub achieved_eps: f64,
    pub target_eps: f64,
    pub met_target: bool,
    pub checked_pairs: usize,
    pub attempts_used: usize,
    pub seed: u64,
    /// the pattern attaining `achieved_eps`
    pub worst: Pattern,
}

impl SymmetricSetSearchResult {
    /// Recompute the maximum deviation over `family` from scratch.
    pub fn reevaluate(&self, family: &PatternFamily, limits: &Limits) -> Result<f64> {
        let mut worst = 0.0f64;
        for (p, _) in &family.patterns {
            let dev = (pattern_integral(&self.a, p, limits)? - 0.5f64.powi(p.len() as i32)).abs();
            worst = worst.max(dev);
        }
        Ok(worst)
    }
}

/// Include each permutation orbit of `V^{d−1}` independently with
/// probability ½.
pub fn sample_symmetric(v: usize, arity: usize, rng: &mut impl rand::Rng) -> TupleSet {
    let mut a = TupleSet::empty(v, arity);
    let mut t = vec![0usize; arity];
    loop {
        if rng.random_bool(0.5) {
            for p in permutations_of(&t) {
                a.insert(&p);
            }
        }
        // next non-decreasing tuple
        let mut k = arity;
        while k > 0 && t[k - 1] == v - 1 {
            k -= 1;
        }
        if k == 0 {
            break;
        }
        t[k - 1] += 1;
        let x = t[k - 1];
        t[k..].iter_mut().for_each(|y| *y = x);
    }
    a
}

fn evaluate(a: &TupleSet, family: &PatternFamily, limits: &Limits) -> Result<(f64, usize)> {
    let comp: Vec<f64> = family
        .components
        .par_iter()
        .map(|c| pattern_integral(a, c, limits))
        .collect::<Result<_>>()?;
    let mut best = (0.0f64, 0usize);
    for (i, (p, ids)) in family.patterns.iter().enumerate() {
        let val: f64 = ids.iter().map(|&c| comp[c]).product();
        let dev = (val - 0.5f64.powi(p.len() as i32)).abs();
        if dev > best.0 {
            best = (dev, i);
        }
    }
    Ok(best)
}

pub fn random_symmetric_set(
    d: usize,
    v: usize,
    target_eps: f64,
    seed: u64,
    attempts: usize,
    limits: &Limits,
) -> Result<SymmetricSetSearchResult> {
    if v == 0 || v % 2 != 0 {
        return Err(Error::Domain(format!(
            "|V| must be a positive even number, got {v}"
        )));
    }
    if attempts == 0 {
        return Err(Error::Domain("need at least one attempt".into()));
    }
    let family = designated_patterns(d, limits)?;
    limits.check(
        format!("labelings V^{} with |V|={v}", 2 * d),
        crate::error::pow_sat(v as u128, 2 * d as u32),
    )?;
    let batch = rayon::current_num_threads().max(1);
    let mut best: Option<(f64, usize, TupleSet, usize)> = None;
    let mut start = 0;
    while start < attempts {
        let end = (start + batch).min(attempts);
        let results: Vec<(usize, TupleSet, f64, usize)> = (start..end)
            .into_par_iter()
            .map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, i as u64));
                let a = sample_symmetric(v, d - 1, &mut rng);
                let (eps, worst) = evaluate(&a, &family, limits)?;
                Ok((i, a, eps, worst))
            })
            .collect::<Result<_>>()?;
        for (i, a, eps, worst) in results {
            if best.as_ref().is_none_or(|b| eps < b.0) {
                best = Some((eps, i, a, worst));
            }
            if eps <= target_eps {
                break;
            }
        }
        if best.as_ref().is_some_and(|b| b.0 <= target_eps) {
            break;
        }
        start = end;
    }
    let (eps, i, a, worst) = best.expect("at least one attempt ran");
    let met = eps <= target_eps;
    Ok(SymmetricSetSearchResult {
        v,
        d,
        a,
        achieved_eps: eps,
        target_eps,
        met_target: met,
        checked_pairs: family.patterns.len(),
        attempts_used: if met { i + 1 } else { attempts },
        seed,
        worst: family.patterns[worst].0.clone(),
    })
}

pub fn appendix_a_highd(
    d: usize,
    search: &SymmetricSetSearchResult,
    n: usize,
) -> Result<ArrayModel> {
    if d != search.d || d < 3 {
        return Err(Error::Domain(format!(
            "search was run for d={}, requested d={d}",
            search.d
        )));
    }
    if n < 4 * d || n > 64 {
        return Err(Error::Domain(format!(
            "semi-random array needs 4d ≤ n ≤ 64 (n={n}, d={d})"
        )));
    }
    if !search.achieved_eps.is_finite() {
        return Err(Error::Domain(
            "search result has no finite deviation".into(),
        ));
    }
    Ok(ArrayModel::HighDim(HighDimSemiRandom::new(
        n,
        search.a.clone(),
    )?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parity_cells_match_counts() {
        let l = Limits::default();
        for (name, cells) in claim_cells(3) {
            let n = parity_labelings(&cells, 3, &l).unwrap().len();
            let want = match name.as_str() {
                "t1" => 4,
                "t1,t2" => 8,
                "face" => 16,
                "box" => 32,
                _ => 16,
            };
            assert_eq!(n, want, "{name}");
        }
    }

    #[test]
    fn orbitwise_sampling_is_symmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = sample_symmetric(6, 3, &mut rng);
        assert!(a.is_symmetric());
        assert!(!a.is_empty());
    }

    #[test]
    fn canonical_form_ignores_relabelling() {
        let p = vec![(Subset::of(&[1, 2]), true), (Subset::of(&[2, 5]), false)];
        let q = vec![(Subset::of(&[3, 6]), false), (Subset::of(&[4, 6]), true)];
        assert_eq!(canonical(&p), canonical(&q));
        assert_eq!(
            split_components(&[(Subset::of(&[1, 2]), true), (Subset::of(&[3, 4]), true)]).len(),
            2
        );
    }
}
