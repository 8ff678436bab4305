//! Closed-form scheme parameters and work-factor estimates.

use num_bigint::BigUint;
use serde::Serialize;
use thiserror::Error;

use crate::attack::{ceil_log2, Algorithm};
use crate::field::prime_power;
use crate::mceliece::error_budget;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamError {
    #[error("invalid curve parameter: {0}")]
    Curve(String),
    #[error("out of range: {0}")]
    Range(String),
}

/// Curve family and its defining parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CurveFamily {
    Hermitian { r: u32 },
    Suzuki { q0: u32 },
}

impl CurveFamily {
    /// `(q, n, g)`.
    pub fn shape(self) -> Result<(u64, usize, usize), ParamError> {
        match self {
            CurveFamily::Hermitian { r } => {
                if r < 2 || prime_power(r as u64).is_none() {
                    return Err(ParamError::Curve(format!(
                        "Hermitian r = {r} is not a prime power"
                    )));
                }
                let r = r as u64;
                Ok((r * r, (r * r * r) as usize, (r * (r - 1) / 2) as usize))
            }
            CurveFamily::Suzuki { q0 } => {
                if q0 < 2 || !q0.is_power_of_two() {
                    return Err(ParamError::Curve(format!(
                        "Suzuki q0 = {q0} is not a power of two >= 2"
                    )));
                }
                let q0 = q0 as u64;
                let q = 2 * q0 * q0;
                Ok((q, (q * q) as usize, (q0 * (q - 1)) as usize))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParamReport {
    pub q: u64,
    pub g: usize,
    pub n: usize,
    pub m: usize,
    pub k_pub: usize,
    pub d_star: usize,
    pub t: usize,
    pub key_size_bytes: u64,
    /// ISD work factor, bits.
    pub w1_bits: f64,
    /// Attack work factor with Algorithm 2, bits.
    pub w2_bits: f64,
    /// Linear systems solved by Algorithm 2.
    pub lambda: usize,
}

impl ParamReport {
    /// Key size in kilobytes of 1000 bytes, rounded.
    pub fn key_size_kb(&self) -> u64 {
        (self.key_size_bytes + 500) / 1000
    }
}

pub fn scheme_params(family: CurveFamily, m: usize) -> Result<ParamReport, ParamError> {
    let (q, n, g) = family.shape()?;
    if m >= n || m < 3 * g {
        return Err(ParamError::Range(format!(
            "need n > m > 3g - 1, got n = {n}, g = {g}, m = {m}"
        )));
    }
    let k_pub = n - m + g - 1;
    let d_star = m + 2 - 2 * g;
    let t = error_budget(m, g);
    let log_q = (q as f64).log2();
    let key_size_bytes = (n as f64 * k_pub as f64 * log_q / 8.0).round() as u64;
    let lambda = system_count(t, g, Algorithm::Two);
    Ok(ParamReport {
        q,
        g,
        n,
        m,
        k_pub,
        d_star,
        t,
        key_size_bytes,
        w1_bits: isd_workfactor(n, k_pub, t, q)?,
        w2_bits: attack_workfactor(n, q, t, g, Algorithm::Two),
        lambda,
    })
}

fn log2_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 64 {
        return (x.to_u64_digits().first().copied().unwrap_or(0) as f64).log2();
    }
    // Keep the top 64 bits.
    let shift = bits - 64;
    let top = (x >> shift).to_u64_digits()[0] as f64;
    top.log2() + shift as f64
}

fn binomial(n: usize, k: usize) -> BigUint {
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// `log2(k^2 n C(n,t)/C(n-k,t) log2^2 q)`.
pub fn isd_workfactor(n: usize, k: usize, t: usize, q: u64) -> Result<f64, ParamError> {
    if k > n || t > n - k {
        return Err(ParamError::Range(format!(
            "need 0 <= t <= n - k, got n = {n}, k = {k}, t = {t}"
        )));
    }
    let ratio = log2_big(&binomial(n, t)) - log2_big(&binomial(n - k, t));
    let log_q = (q as f64).log2();
    Ok((k as f64 * k as f64 * n as f64 * log_q * log_q).log2() + ratio)
}

/// `t + g` for Algorithm 1, `2⌈log2(t+g)⌉ + 2` for Algorithm 2.
pub fn system_count(t: usize, g: usize, algorithm: Algorithm) -> usize {
    match algorithm {
        Algorithm::One => t + g,
        Algorithm::Two => 2 * ceil_log2(t + g) + 2,
    }
}

/// `log2((λ + 1) n^4 log2^2 q)`.
pub fn attack_workfactor(n: usize, q: u64, t: usize, g: usize, algorithm: Algorithm) -> f64 {
    let lambda = system_count(t, g, algorithm) as f64;
    let log_q = (q as f64).log2();
    (lambda + 1.0).log2() + 4.0 * (n as f64).log2() + 2.0 * log_q.log2()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_rows() {
        let rows = [
            (CurveFamily::Hermitian { r: 7 }, 170, 193, 54, 46),
            (CurveFamily::Hermitian { r: 9 }, 400, 364, 146, 210),
            (CurveFamily::Suzuki { q0: 4 }, 500, 647, 64, 414),
            (CurveFamily::Suzuki { q0: 4 }, 750, 397, 189, 254),
        ];
        for (family, m, k, t, kb) in rows {
            let r = scheme_params(family, m).unwrap();
            assert_eq!(
                (r.k_pub, r.t, r.key_size_kb()),
                (k, t, kb),
                "{family:?} m = {m}"
            );
            assert_eq!(r.d_star, m + 2 - 2 * r.g);
        }
    }

    #[test]
    fn workfactor_anchors() {
        let anchors = [
            (CurveFamily::Hermitian { r: 7 }, 170, 100.0, 38.0),
            (CurveFamily::Hermitian { r: 9 }, 400, 201.0, 43.0),
            (CurveFamily::Suzuki { q0: 4 }, 500, 128.0, 45.0),
            (CurveFamily::Suzuki { q0: 4 }, 750, 182.0, 44.0),
        ];
        for (family, m, w1, w2) in anchors {
            let r = scheme_params(family, m).unwrap();
            assert!(
                (r.w1_bits - w1).abs() <= 15.0,
                "{family:?} m = {m}: w1 = {}",
                r.w1_bits
            );
            assert!(
                (r.w2_bits - w2).abs() <= 8.0,
                "{family:?} m = {m}: w2 = {}",
                r.w2_bits
            );
        }
    }

    #[test]
    fn isd_edge_cases() {
        let base = (10.0f64 * 10.0 * 30.0 * 2.0 * 2.0).log2();
        assert!((isd_workfactor(30, 10, 0, 4).unwrap() - base).abs() < 1e-9);
        let mut last = 0.0;
        for t in 0..=20 {
            let w = isd_workfactor(30, 10, t, 4).unwrap();
            assert!(w >= last);
            last = w;
        }
        assert!(isd_workfactor(30, 10, 21, 4).is_err());
    }

    #[test]
    fn system_counts() {
        // 2⌈log2 x⌉ + 2 <= x holds at 8 and from 10 on, but not at 9.
        for x in (8..200).filter(|&x| x != 9) {
            assert!(system_count(x, 0, Algorithm::Two) <= system_count(x, 0, Algorithm::One));
        }
        assert_eq!(system_count(9, 0, Algorithm::Two), 10);
        for x in 2..100 {
            assert_eq!(
                system_count(2 * x, 0, Algorithm::Two),
                system_count(x, 0, Algorithm::Two) + 2
            );
        }
    }

    #[test]
    fn range_errors() {
        assert!(scheme_params(CurveFamily::Hermitian { r: 3 }, 8).is_err());
        assert_eq!(
            scheme_params(CurveFamily::Hermitian { r: 3 }, 9).unwrap().t,
            0
        );
        assert!(scheme_params(CurveFamily::Hermitian { r: 3 }, 27).is_err());
        assert!(scheme_params(CurveFamily::Hermitian { r: 6 }, 50).is_err());
        assert!(scheme_params(CurveFamily::Suzuki { q0: 3 }, 50).is_err());
    }
}
