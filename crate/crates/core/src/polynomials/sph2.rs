//! Spherical harmonics on S² in the normalization
//! `Y_{l,m}(θ, ψ) = Ñ_{lm} P_l^m(cos θ) e^{imψ}`, `Ñ_{lm} = √((2l+1)(l-m)!/(l+m)!)`,
//! which has unit norm under the normalized measure dS/4π.
//! Associated Legendre functions carry the Condon–Shortley phase.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// P_l^m(x) for 0 ≤ m ≤ l, with the (-1)^m Condon–Shortley phase.
pub fn assoc_legendre(l: usize, m: usize, x: f64) -> Result<f64> {
    if m > l {
        return Err(Error::domain(format!("order m = {m} exceeds degree l = {l}")));
    }
    if !(-1.0..=1.0).contains(&x) {
        return Err(Error::domain(format!("x = {x} outside [-1, 1]")));
    }
    let s = (1.0 - x * x).max(0.0).sqrt();
    // P_m^m = (-1)^m (2m-1)!! s^m
    let mut pmm = 1.0;
    for k in 1..=m {
        pmm *= -((2 * k - 1) as f64) * s;
    }
    if l == m {
        return Ok(pmm);
    }
    let mut prev = pmm;
    let mut cur = x * (2 * m + 1) as f64 * pmm;
    for k in (m + 2)..=l {
        let next = ((2 * k - 1) as f64 * x * cur - (k + m - 1) as f64 * prev) / (k - m) as f64;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// (l-|m|)!/(l+|m|)! as a running product.
fn factorial_ratio(l: usize, m: usize) -> f64 {
    ((l - m + 1)..=(l + m)).fold(1.0, |acc, k| acc / k as f64)
}

/// Ñ_{lm} = √((2l+1)(l-m)!/(l+m)!) for -l ≤ m ≤ l.
pub fn sph2_normalization(l: usize, m: i64) -> Result<f64> {
    let am = m.unsigned_abs() as usize;
    if am > l {
        return Err(Error::domain(format!("|m| = {am} exceeds degree l = {l}")));
    }
    let ratio = if m >= 0 { factorial_ratio(l, am) } else { 1.0 / factorial_ratio(l, am) };
    Ok(((2 * l + 1) as f64 * ratio).sqrt())
}

/// Y_{l,m}(θ, ψ) with colatitude θ ∈ [0, π] and azimuth ψ ∈ [0, 2π).
///
/// Negative orders use P_l^{-m} = (-1)^m (l-m)!/(l+m)! P_l^m, so
/// Y_{l,-m} = (-1)^m conj(Y_{l,m}).
pub fn sph2_harmonic(l: usize, m: i64, theta: f64, psi: f64) -> Result<Complex64> {
    let am = m.unsigned_abs() as usize;
    if am > l {
        return Err(Error::domain(format!("|m| = {am} exceeds degree l = {l}")));
    }
    if !(0.0..=PI).contains(&theta) {
        return Err(Error::domain(format!("colatitude {theta} outside [0, π]")));
    }
    if !(0.0..2.0 * PI).contains(&psi) {
        return Err(Error::domain(format!("azimuth {psi} outside [0, 2π)")));
    }
    let p = assoc_legendre(l, am, theta.cos())?;
    let p = if m >= 0 {
        p
    } else {
        let sign = if am.is_multiple_of(2) { 1.0 } else { -1.0 };
        sign * factorial_ratio(l, am) * p
    };
    let norm = sph2_normalization(l, m)?;
    Ok(Complex64::from_polar(norm * p, m as f64 * psi))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force P_l^m from the Rodrigues form of the Legendre polynomial:
    /// P_l^m(x) = (-1)^m (1-x²)^(m/2) d^(l+m)/dx^(l+m) (x²-1)^l / (2^l l!).
    fn rodrigues_assoc(l: usize, m: usize, x: f64) -> f64 {
        // coefficients of (x²-1)^l
        let mut c = vec![0.0; 2 * l + 1];
        let mut binom = 1.0;
        for i in 0..=l {
            let sign = if (l - i).is_multiple_of(2) { 1.0 } else { -1.0 };
            c[2 * i] = sign * binom;
            binom = binom * (l - i) as f64 / (i + 1) as f64;
        }
        for _ in 0..(l + m) {
            c = c.iter().enumerate().skip(1).map(|(k, v)| k as f64 * v).collect();
            if c.is_empty() {
                c.push(0.0);
            }
        }
        let val = c.iter().rev().fold(0.0, |acc, v| acc * x + v);
        let fact: f64 = (1..=l).map(|k| k as f64).product();
        let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
        sign * (1.0 - x * x).powf(m as f64 / 2.0) * val / (2f64.powi(l as i32) * fact)
    }

    #[test]
    fn associated_legendre_matches_rodrigues_oracle() {
        for l in 0..9 {
            for m in 0..=l {
                for &x in &[-0.95, -0.5, 0.0, 0.3, 0.81] {
                    let a = assoc_legendre(l, m, x).unwrap();
                    let b = rodrigues_assoc(l, m, x);
                    assert!((a - b).abs() < 1e-10 * b.abs().max(1.0), "l={l} m={m} x={x}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn examples() {
        assert!((sph2_harmonic(0, 0, 1.0, 2.0).unwrap() - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((sph2_harmonic(1, 0, 0.0, 0.0).unwrap().re - 3f64.sqrt()).abs() < 1e-15);
        let y = sph2_harmonic(1, 1, PI / 2.0, 0.0).unwrap();
        let oracle = (1.5f64).sqrt() * rodrigues_assoc(1, 1, 0.0);
        assert!((y.re - oracle).abs() < 1e-15 && y.im == 0.0);
        assert!((y.re + 1.5f64.sqrt()).abs() < 1e-15);
        assert!(sph2_harmonic(1, 2, 0.1, 0.1).is_err());
        assert!(sph2_harmonic(1, -2, 0.1, 0.1).is_err());
        assert!(sph2_harmonic(1, 0, 4.0, 0.1).is_err());
    }

    #[test]
    fn negative_orders_are_conjugate_symmetric() {
        for l in 0..7 {
            for m in 1..=l as i64 {
                let a = sph2_harmonic(l, m, 0.7, 1.9).unwrap();
                let b = sph2_harmonic(l, -m, 0.7, 1.9).unwrap();
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                assert!((b - a.conj() * sign).norm() < 1e-13);
            }
        }
    }
}
