//! Hyperspherical Legendre and Gegenbauer polynomials.
//!
//! `P_{l,N}` is the degree-l zonal polynomial for S^(N-1), normalized so that
//! `P_{l,N}(1) = 1`. Four independent evaluation routes are provided and are
//! checked against each other in the test suites:
//!
//! * [`eval_legendre`]: the explicit finite sum (reference oracle),
//! * [`eval_legendre_rodrigues`]: Rodrigues form, differentiated symbolically,
//! * [`eval_legendre_integral`]: Laplace-type integral representation,
//! * [`eval_legendre_recurrence`]: three-term recurrence (the fast path).

mod gegenbauer;
mod legendre;
mod sph2;

pub use gegenbauer::{
    eval_gegenbauer, eval_gegenbauer_integral, gegenbauer_coefficients, gegenbauer_norm, ode_residual, GegenbauerParams,
};
pub use legendre::{
    eval_legendre, eval_legendre_integral, eval_legendre_n2, eval_legendre_recurrence, eval_legendre_rodrigues,
    legendre_coefficients, legendre_table, LegendreMethod, LegendreParams, LEGENDRE_COEFF_MAX_DEGREE,
};
pub(crate) use legendre::{recurrence_fill, recurrence_value};
pub use sph2::{assoc_legendre, sph2_harmonic, sph2_normalization};

use crate::error::{Error, Result};
use crate::geometry::AmbientDim;

/// Dense monomial coefficients, index k holding the coefficient of t^k.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyCoeffs(pub Vec<f64>);

impl PolyCoeffs {
    pub fn coeffs(&self) -> &[f64] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.iter().rposition(|&c| c != 0.0).unwrap_or(0)
    }

    /// Horner evaluation.
    pub fn eval(&self, t: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, &c| acc * t + c)
    }

    pub fn derivative(&self) -> PolyCoeffs {
        if self.0.len() <= 1 {
            return PolyCoeffs(vec![0.0]);
        }
        PolyCoeffs(self.0.iter().enumerate().skip(1).map(|(k, &c)| k as f64 * c).collect())
    }

    /// Σ |c_k|, a bound on |p(t)| over [-1, 1].
    pub fn abs_sum(&self) -> f64 {
        self.0.iter().map(|c| c.abs()).sum()
    }
}

/// Dimension of the space of degree-l spherical harmonics on S^(N-1).
///
/// `(2l+N-2)(l+N-3)! / (l!(N-2)!)` for N ≥ 3; on the circle it is 2 for
/// l ≥ 1 and 1 for l = 0.
pub fn dim_harmonics(l: usize, n: AmbientDim) -> Result<u64> {
    let n = n.get();
    if l == 0 {
        return Ok(1);
    }
    if n == 2 {
        return Ok(2);
    }
    let overflow = || Error::capability(format!("harmonic dimension D({l}, {n}) exceeds 64-bit range"));
    // binom(l+N-3, N-3) · (2l+N-2) / (N-2), exact in u128
    let b = binomial_u128((l + n - 3) as u128, (n - 3) as u128).ok_or_else(overflow)?;
    let num = b.checked_mul((2 * l + n - 2) as u128).ok_or_else(overflow)?;
    let d = num / (n - 2) as u128;
    u64::try_from(d).map_err(|_| overflow())
}

/// The same dimension via `binom(l+N-1, N-1) - binom(l+N-3, N-1)`.
pub fn dim_harmonics_binomial(l: usize, n: AmbientDim) -> Result<u64> {
    let n = n.get();
    let overflow = || Error::capability(format!("harmonic dimension D({l}, {n}) exceeds 64-bit range"));
    let a = binomial_u128((l + n - 1) as u128, (n - 1) as u128).ok_or_else(overflow)?;
    let b = if l + n >= 3 && l + n - 3 >= n - 1 {
        binomial_u128((l + n - 3) as u128, (n - 1) as u128).ok_or_else(overflow)?
    } else {
        0
    };
    u64::try_from(a - b).map_err(|_| overflow())
}

/// D(l, N) as a float, without the 64-bit range limit.
pub(crate) fn dim_harmonics_f64(l: usize, n: AmbientDim) -> f64 {
    let nn = n.get();
    if l == 0 {
        return 1.0;
    }
    if nn == 2 {
        return 2.0;
    }
    let mut b = 1.0;
    for i in 1..=(nn - 3) {
        b = b * (l + i) as f64 / i as f64;
    }
    b * (2 * l + nn - 2) as f64 / (nn - 2) as f64
}

fn binomial_u128(n: u128, k: u128) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 1..=k {
        // acc * (n - k + i) is divisible by i after the multiplication
        acc = acc.checked_mul(n - k + i)? / i;
    }
    Some(acc)
}

/// binom(l + N - 3, l), the factor relating C_l^((N-2)/2) to P_{l,N}.
pub fn gegenbauer_binomial(l: usize, n: AmbientDim) -> f64 {
    let mut b = 1.0;
    for i in 1..=l {
        b = b * (i + n.get() - 3) as f64 / i as f64;
    }
    b
}

/// Truncated generating function next to its closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratingSum {
    /// Σ_{l ≤ L} binom(l+N-3, N-3) P_{l,N}(t) r^l
    pub partial_sum: f64,
    /// (1 + r² - 2rt)^(-(N-2)/2)
    pub closed_form: f64,
    /// C in the truncation bound C · r^(L+1) / (1 - r)
    pub bound_constant: f64,
    /// C · r^(L+1) / (1 - r)
    pub bound: f64,
}

/// Compares the truncated Gegenbauer generating series with its closed form.
///
/// Since |P_{l,N}| ≤ 1 and binom(a+b+k, k) ≤ binom(a+k, k) binom(b+k, k), the
/// tail past degree L is at most binom(L+1+k, k) r^(L+1) / (1-|r|)^(k+1)
/// with k = N - 3; the reported constant is binom(L+1+k, k) / (1-|r|)^k.
pub fn poisson_generating_sum(r: f64, t: f64, n: AmbientDim, truncation: usize) -> Result<GeneratingSum> {
    if n.get() < 3 {
        return Err(Error::domain("generating function requires N >= 3"));
    }
    if !(r.abs() < 1.0) {
        return Err(Error::domain(format!("generating function requires |r| < 1, got {r}")));
    }
    if !(-1.0..=1.0).contains(&t) {
        return Err(Error::domain(format!("t = {t} outside [-1, 1]")));
    }
    let table = legendre_table(truncation, n, t)?;
    let mut partial = 0.0;
    let mut rl = 1.0;
    for (l, p) in table.iter().enumerate() {
        partial += gegenbauer_binomial(l, n) * p * rl;
        rl *= r;
    }
    let k = n.get() - 3;
    let closed = (1.0 + r * r - 2.0 * r * t).powf(-(n.get() as f64 - 2.0) / 2.0);
    let mut c = 1.0;
    for i in 1..=k {
        c = c * (truncation + 1 + i) as f64 / i as f64;
    }
    let c = c / (1.0 - r.abs()).powi(k as i32);
    let bound = c * r.abs().powi(truncation as i32 + 1) / (1.0 - r.abs());
    Ok(GeneratingSum { partial_sum: partial, closed_form: closed, bound_constant: c, bound })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dim(n: usize) -> AmbientDim {
        AmbientDim::new(n).unwrap()
    }

    #[test]
    fn dimension_examples() {
        for n in 2..12 {
            assert_eq!(dim_harmonics(0, dim(n)).unwrap(), 1);
        }
        assert_eq!(dim_harmonics(1, dim(3)).unwrap(), 3);
        assert_eq!(dim_harmonics(2, dim(3)).unwrap(), 5);
        assert_eq!(dim_harmonics(1, dim(2)).unwrap(), 2);
        assert_eq!(dim_harmonics(7, dim(2)).unwrap(), 2);
        // (l+1)² on S³
        assert_eq!(dim_harmonics(4, dim(4)).unwrap(), 25);
    }

    #[test]
    fn dimension_matches_binomial_difference() {
        for n in 2..14 {
            for l in 0..40 {
                let a = dim_harmonics(l, dim(n)).unwrap();
                let b = dim_harmonics_binomial(l, dim(n)).unwrap();
                assert_eq!(a, b, "l={l} N={n}");
                assert_eq!(a as f64, dim_harmonics_f64(l, dim(n)).round());
            }
        }
    }

    #[test]
    fn dimension_overflow_is_reported() {
        assert!(matches!(dim_harmonics(1_000_000, dim(40)), Err(Error::Capability(_))));
    }

    #[test]
    fn generating_examples() {
        let g = poisson_generating_sum(0.0, 0.3, dim(5), 4).unwrap();
        assert_eq!(g.partial_sum, 1.0);
        assert_eq!(g.closed_form, 1.0);
        let g = poisson_generating_sum(0.5, 1.0, dim(4), 60).unwrap();
        assert!((g.closed_form - 4.0).abs() < 1e-15);
        assert!((g.partial_sum - 4.0).abs() < 1e-12);
        let g = poisson_generating_sum(0.3, 0.2, dim(3), 30).unwrap();
        assert!((g.partial_sum - g.closed_form).abs() < 1e-12);
        assert!(poisson_generating_sum(1.0, 0.2, dim(3), 30).is_err());
        assert!(poisson_generating_sum(0.5, 0.2, dim(2), 30).is_err());
    }

    #[test]
    fn generating_error_within_bound_and_geometric() {
        for n in 3..8 {
            for &r in &[0.1, 0.3, 0.5, 0.7] {
                for &t in &[-1.0, -0.4, 0.0, 0.6, 1.0] {
                    let mut prev = f64::INFINITY;
                    for l in [20usize, 30, 40, 60] {
                        let g = poisson_generating_sum(r, t, dim(n), l).unwrap();
                        let err = (g.partial_sum - g.closed_form).abs();
                        assert!(err <= g.bound * (1.0 + 1e-9) + 1e-14, "N={n} r={r} t={t} L={l}");
                        assert!(g.bound < prev);
                        prev = g.bound;
                    }
                }
            }
        }
    }

    #[test]
    fn poly_coeffs_helpers() {
        let p = PolyCoeffs(vec![1.0, -2.0, 0.0, 4.0]);
        assert_eq!(p.degree(), 3);
        assert_eq!(p.eval(2.0), 1.0 - 4.0 + 32.0);
        assert_eq!(p.derivative().0, vec![-2.0, 0.0, 12.0]);
        assert_eq!(p.abs_sum(), 7.0);
    }
}
