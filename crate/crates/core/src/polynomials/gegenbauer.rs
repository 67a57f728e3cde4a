use num_complex::Complex64;

use super::PolyCoeffs;
use crate::error::{Error, Result};
use crate::geometry::AmbientDim;
use crate::quadrature::{gauss_gegenbauer_rule, weight_mass};

/// Degree and index of C_l^α.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GegenbauerParams {
    pub degree: usize,
    pub alpha: f64,
}

impl GegenbauerParams {
    pub fn new(degree: usize, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::domain(format!("Gegenbauer index must be positive, got {alpha}")));
        }
        Ok(GegenbauerParams { degree, alpha })
    }

    /// The index (N-2)/2 tied to P_{l,N}.
    pub fn for_dim(degree: usize, n: AmbientDim) -> Result<Self> {
        Self::new(degree, (n.get() as f64 - 2.0) / 2.0)
    }
}

/// C_l^α(1) = binom(l+2α-1, l) = Γ(l+2α) / (Γ(l+1) Γ(2α)), as a running product.
pub fn gegenbauer_norm(params: GegenbauerParams) -> f64 {
    let two_a = 2.0 * params.alpha;
    (1..=params.degree).fold(1.0, |acc, k| acc * (two_a - 1.0 + k as f64) / k as f64)
}

/// C_l^α(t) by the standard recurrence
/// `k C_k = 2t(k+α-1) C_{k-1} - (k+2α-2) C_{k-2}`.
pub fn eval_gegenbauer(params: GegenbauerParams, t: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&t) {
        return Err(Error::domain(format!("t = {t} outside [-1, 1]")));
    }
    let a = params.alpha;
    let l = params.degree;
    if l == 0 {
        return Ok(1.0);
    }
    let mut prev = 1.0;
    let mut cur = 2.0 * a * t;
    for k in 2..=l {
        let kf = k as f64;
        let next = (2.0 * t * (kf + a - 1.0) * cur - (kf + 2.0 * a - 2.0) * prev) / kf;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// C_l^α(t) from the integral definition
/// `binom(l+2α-1, l) Γ(α+1/2)/(√π Γ(α)) ∫_{-1}^{1} (t + i√(1-t²) s)^l (1-s²)^(α-1) ds`.
pub fn eval_gegenbauer_integral(params: GegenbauerParams, t: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&t) {
        return Err(Error::domain(format!("t = {t} outside [-1, 1]")));
    }
    let l = params.degree;
    let beta = params.alpha - 1.0;
    let rule = gauss_gegenbauer_rule(16.max(l + 4), beta)?;
    let c = (1.0 - t * t).max(0.0).sqrt();
    let z = rule.integrate_complex(|s| Complex64::new(t, c * s).powu(l as u32));
    // Γ(α+1/2)/(√π Γ(α)) is the reciprocal of the weight's total mass
    Ok(gegenbauer_norm(params) * z.re / weight_mass(beta))
}

/// Monomial coefficients of C_l^α from
/// `Σ_k (-1)^k Γ(l-k+α) / (Γ(α) k! (l-2k)!) (2t)^(l-2k)`.
pub fn gegenbauer_coefficients(params: GegenbauerParams) -> PolyCoeffs {
    let l = params.degree;
    let a = params.alpha;
    let mut out = vec![0.0; l + 1];
    // leading term: (α)_l 2^l / l!
    let mut term = (0..l).fold(1.0, |acc, k| acc * 2.0 * (a + k as f64) / (k + 1) as f64);
    for k in 0..=l / 2 {
        out[l - 2 * k] = term;
        if 2 * k + 2 <= l {
            let num = ((l - 2 * k) * (l - 2 * k - 1)) as f64;
            term = -term * num / (4.0 * (k + 1) as f64 * (l as f64 - k as f64 - 1.0 + a));
        }
    }
    PolyCoeffs(out)
}

/// Residual of the eigenvalue equation
/// `(1-t²) C'' - N t C' + l(l+N-1) C = 0` for C = C_l^((N-1)/2).
///
/// Derivatives come from `d/dt C_l^α = 2α C_{l-1}^(α+1)`, each factor
/// evaluated by its own recurrence, which avoids the cancellation of the
/// monomial expansion at high degree.
pub fn ode_residual(l: usize, n: AmbientDim, t: f64) -> Result<f64> {
    if !(t > -1.0 && t < 1.0) {
        return Err(Error::domain(format!("t = {t} outside (-1, 1)")));
    }
    let nf = n.get() as f64;
    let a = (nf - 1.0) / 2.0;
    let c = eval_gegenbauer(GegenbauerParams::new(l, a)?, t)?;
    let d1 = if l >= 1 { 2.0 * a * eval_gegenbauer(GegenbauerParams::new(l - 1, a + 1.0)?, t)? } else { 0.0 };
    let d2 =
        if l >= 2 { 4.0 * a * (a + 1.0) * eval_gegenbauer(GegenbauerParams::new(l - 2, a + 2.0)?, t)? } else { 0.0 };
    let lf = l as f64;
    Ok((1.0 - t * t) * d2 - nf * t * d1 + lf * (lf + nf - 1.0) * c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomials::{eval_legendre, gegenbauer_binomial, LegendreParams};

    #[test]
    fn examples() {
        for &a in &[0.25, 0.5, 1.0, 2.5] {
            let g0 = GegenbauerParams::new(0, a).unwrap();
            assert_eq!(eval_gegenbauer(g0, 0.3).unwrap(), 1.0);
            assert!((eval_gegenbauer_integral(g0, 0.3).unwrap() - 1.0).abs() < 1e-13);
            let g1 = GegenbauerParams::new(1, a).unwrap();
            assert!((eval_gegenbauer(g1, -0.4).unwrap() + 0.8 * a).abs() < 1e-15);
            assert!((eval_gegenbauer_integral(g1, -0.4).unwrap() + 0.8 * a).abs() < 1e-13);
        }
        let g = GegenbauerParams::new(2, 0.5).unwrap();
        assert!((eval_gegenbauer(g, 0.5).unwrap() + 0.125).abs() < 1e-15);
        assert!((eval_gegenbauer(GegenbauerParams::new(1, 1.5).unwrap(), 0.2).unwrap() - 0.6).abs() < 1e-15);
        assert!(matches!(GegenbauerParams::new(2, 0.0), Err(Error::Domain(_))));
        assert!(matches!(GegenbauerParams::new(2, -1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn integral_definition_matches_recurrence() {
        for &a in &[0.3, 0.5, 1.0, 1.5, 2.0, 3.5] {
            for l in 0..18 {
                let g = GegenbauerParams::new(l, a).unwrap();
                let scale = gegenbauer_norm(g);
                for &t in &[-1.0, -0.77, -0.1, 0.0, 0.42, 0.93, 1.0] {
                    let x = eval_gegenbauer(g, t).unwrap();
                    let y = eval_gegenbauer_integral(g, t).unwrap();
                    assert!((x - y).abs() <= 1e-12 * scale.max(1.0), "l={l} a={a} t={t}: {x} vs {y}");
                }
            }
        }
    }

    #[test]
    fn coefficients_match_recurrence() {
        for &a in &[0.5, 1.0, 2.5, 3.5] {
            for l in 0..20 {
                let g = GegenbauerParams::new(l, a).unwrap();
                let c = gegenbauer_coefficients(g);
                assert_eq!(c.degree(), l);
                for &t in &[-0.9, -0.3, 0.1, 0.7] {
                    let x = eval_gegenbauer(g, t).unwrap();
                    assert!((c.eval(t) - x).abs() <= 1e-11 * gegenbauer_norm(g).max(1.0));
                }
            }
        }
    }

    #[test]
    fn relation_to_hyperspherical_legendre() {
        for n in 3..9 {
            let d = AmbientDim::new(n).unwrap();
            for l in 0..16 {
                let g = GegenbauerParams::for_dim(l, d).unwrap();
                let b = gegenbauer_binomial(l, d);
                assert!((gegenbauer_norm(g) - b).abs() <= 1e-12 * b);
                for &t in &[-0.8, 0.15, 0.66] {
                    let c = eval_gegenbauer(g, t).unwrap();
                    let p = eval_legendre(LegendreParams::new(l, n).unwrap(), t).unwrap();
                    assert!((c - b * p).abs() <= 1e-10 * b.max(1.0));
                }
            }
        }
    }

    #[test]
    fn ode_examples() {
        let d3 = AmbientDim::new(3).unwrap();
        assert_eq!(ode_residual(0, d3, 0.4).unwrap(), 0.0);
        assert!(ode_residual(1, d3, 0.4).unwrap().abs() < 1e-12);
        let d5 = AmbientDim::new(5).unwrap();
        assert!(ode_residual(5, d5, -0.7).unwrap().abs() < 1e-9);
        assert!(ode_residual(5, d5, 1.0).is_err());
    }

    #[test]
    fn derivative_identity_matches_coefficients() {
        for &a in &[0.5, 1.5, 3.5] {
            for l in 1..12 {
                let c = gegenbauer_coefficients(GegenbauerParams::new(l, a).unwrap()).derivative();
                let lower = GegenbauerParams::new(l - 1, a + 1.0).unwrap();
                for &t in &[-0.6, 0.2, 0.9] {
                    let d = 2.0 * a * eval_gegenbauer(lower, t).unwrap();
                    assert!((c.eval(t) - d).abs() < 1e-10 * d.abs().max(1.0));
                }
            }
        }
    }
}
