//! Explicit constants of the concentration theorems.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TheoremConstants {
    pub d: usize,
    pub m: usize,
    pub p: f64,
    pub eps: f64,
    pub k: usize,
    pub beta: f64,
    pub ell: u64,
    pub log_c_2d: f64,
    /// `None` when `exp` overflows; the log form is always present.
    pub c_2d: Option<f64>,
    pub log_c_gen: f64,
    pub c_gen: Option<f64>,
    pub c_dissoc: f64,
    pub log_c_simult: f64,
    pub c_simult: Option<f64>,
}

fn check_p_eps(p: f64, eps: f64) -> Result<()> {
    if !(p > 1.0 && p <= 2.0) {
        return Err(Error::Domain(format!("p must lie in (1, 2], got {p}")));
    }
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::Domain(format!("ε must lie in (0, 1], got {eps}")));
    }
    Ok(())
}

/// `β(p, ε) = (ε/10)^{10/(p−1)}`
pub fn beta(p: f64, eps: f64) -> Result<f64> {
    check_p_eps(p, eps)?;
    Ok((eps / 10.0).powf(10.0 / (p - 1.0)))
}

/// `ℓ(p, ε, k) = ⌈4k / (ε⁴(p−1))⌉`. A quotient within rounding noise of an
/// integer is taken to be that integer, so `ε = 1/2` gives 256 and not 257.
pub fn ell(p: f64, eps: f64, k: usize) -> Result<u64> {
    check_p_eps(p, eps)?;
    let x = 4.0 * k as f64 / (eps.powi(4) * (p - 1.0));
    if !x.is_finite() || x > u64::MAX as f64 {
        return Err(Error::Domain(format!("ℓ = {x:e} does not fit in 64 bits")));
    }
    let near = x.round();
    Ok(if (x - near).abs() <= 1e-9 * near.max(1.0) {
        near as u64
    } else {
        x.ceil() as u64
    })
}

fn log_c(d: usize, m: usize, p: f64, eps: f64, k: usize) -> f64 {
    let d_f = d as f64;
    24.0 * d_f * (m as f64).ln() * (k as f64).powf(d_f)
        / (eps.powf(4.0 * d_f) * (p - 1.0).powf(d_f))
}

fn finite_exp(x: f64) -> Option<f64> {
    Some(x.exp()).filter(|v| v.is_finite())
}

pub fn theorem_constants(
    d: usize,
    m: usize,
    p: f64,
    eps: f64,
    k: usize,
) -> Result<TheoremConstants> {
    check_p_eps(p, eps)?;
    if d == 0 || k < d {
        return Err(Error::Domain(format!("need 1 ≤ d ≤ k, got d={d}, k={k}")));
    }
    if m < 2 {
        return Err(Error::Domain(format!(
            "alphabet size m must be at least 2, got {m}"
        )));
    }
    let kf = k as f64;
    let log_c_2d = 34.0 * kf * kf / (eps.powi(8) * (p - 1.0).powi(2));
    let log_c_gen = log_c(d, m, p, eps, k);
    let log_c_simult = log_c(d, m, p, eps.powi(3) / 4.0, k);
    Ok(TheoremConstants {
        d,
        m,
        p,
        eps,
        k,
        beta: beta(p, eps)?,
        ell: ell(p, eps, k)?,
        log_c_2d,
        c_2d: finite_exp(log_c_2d),
        log_c_gen,
        c_gen: finite_exp(log_c_gen),
        c_dissoc: 0.25 * eps.powf(2.0 * (p + 1.0) / p) * (p - 1.0),
        log_c_simult,
        c_simult: finite_exp(log_c_simult),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn substitutions() {
        let c = theorem_constants(2, 2, 2.0, 1.0, 2).unwrap();
        assert!((c.beta - 1e-10).abs() < 1e-22);
        assert_eq!(c.ell, 8);
        assert!((c.log_c_2d - 136.0).abs() < 1e-12);
        assert!((c.c_dissoc - 0.25).abs() < 1e-15);
        assert_eq!(ell(2.0, 0.5, 4).unwrap(), 256);
        assert!(ell(2.0, 0.0, 4).is_err());
        assert!(theorem_constants(3, 2, 2.0, 1.0, 2).is_err());
    }

    #[test]
    fn overflow_keeps_log() {
        let c = theorem_constants(3, 2, 1.1, 0.1, 5).unwrap();
        assert!(c.c_gen.is_none());
        assert!(c.log_c_gen.is_finite() && c.log_c_gen > 0.0);
        assert!(c.log_c_simult > c.log_c_gen);
    }
}
