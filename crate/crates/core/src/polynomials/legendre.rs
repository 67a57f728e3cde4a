use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use super::PolyCoeffs;
use crate::error::{Error, Result};
use crate::geometry::{gamma_ratio, AmbientDim};
use crate::quadrature::gauss_gegenbauer_rule;

/// Degree guard for monomial expansions; coefficients grow like 2^l.
pub const LEGENDRE_COEFF_MAX_DEGREE: usize = 60;

/// Degree and ambient dimension of P_{l,N}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LegendreParams {
    pub degree: usize,
    pub dim: AmbientDim,
}

impl LegendreParams {
    pub fn new(degree: usize, n: usize) -> Result<Self> {
        Ok(LegendreParams { degree, dim: AmbientDim::new(n)? })
    }

    /// (N-1)/2, the shift appearing in every Gamma factor.
    fn half_shift(&self) -> f64 {
        (self.dim.get() as f64 - 1.0) / 2.0
    }
}

fn check_closed(t: f64) -> Result<()> {
    if !(-1.0..=1.0).contains(&t) {
        return Err(Error::domain(format!("t = {t} outside [-1, 1]")));
    }
    Ok(())
}

/// Coefficients c_j of the explicit sum, c_0 = 1:
/// P_{l,N}(t) = Σ_j c_j (1-t²)^j t^(l-2j).
fn explicit_sum_coeffs(p: &LegendreParams) -> Vec<f64> {
    let l = p.degree;
    let a = p.half_shift();
    let mut c = Vec::with_capacity(l / 2 + 1);
    c.push(1.0);
    for j in 0..l / 2 {
        let prev = c[j];
        let num = ((l - 2 * j) * (l - 2 * j - 1)) as f64;
        c.push(-prev * num / (4.0 * (j + 1) as f64 * (j as f64 + a)));
    }
    c
}

/// P_{l,N}(t) from the explicit finite sum
/// `l! Γ((N-1)/2) Σ_j (-1)^j (1-t²)^j t^(l-2j) / (4^j j! (l-2j)! Γ(j+(N-1)/2))`.
///
/// The coefficients are generated by their term ratio, so the j = 0 term is
/// exactly one and P_{l,N}(1) = 1 holds to rounding. N = 2 is delegated to
/// the Chebyshev form.
pub fn eval_legendre(params: LegendreParams, t: f64) -> Result<f64> {
    check_closed(t)?;
    if params.dim.get() == 2 {
        return eval_legendre_n2(params.degree, t);
    }
    let l = params.degree;
    let s = 1.0 - t * t;
    let mut acc = 0.0;
    let mut s_pow = 1.0;
    for (j, c) in explicit_sum_coeffs(&params).into_iter().enumerate() {
        acc += c * s_pow * t.powi((l - 2 * j) as i32);
        s_pow *= s;
    }
    Ok(acc)
}

/// P_{l,2}(t) = cos(l arccos t).
pub fn eval_legendre_n2(l: usize, t: f64) -> Result<f64> {
    check_closed(t)?;
    Ok((l as f64 * t.acos()).cos())
}

/// Monomial coefficients of P_{l,N}, expanded from the explicit sum.
pub fn legendre_coefficients(params: LegendreParams) -> Result<PolyCoeffs> {
    let l = params.degree;
    if l > LEGENDRE_COEFF_MAX_DEGREE {
        return Err(Error::capability(format!(
            "monomial expansion limited to degree {LEGENDRE_COEFF_MAX_DEGREE}, got {l}"
        )));
    }
    let mut out = vec![0.0; l + 1];
    for (j, c) in explicit_sum_coeffs(&params).into_iter().enumerate() {
        // (1-t²)^j = Σ_i binom(j, i) (-1)^i t^(2i)
        let mut binom = 1.0;
        for i in 0..=j {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            out[l - 2 * j + 2 * i] += c * sign * binom;
            binom = binom * (j - i) as f64 / (i + 1) as f64;
        }
    }
    Ok(PolyCoeffs(out))
}

/// P_{l,N}(t) from the Rodrigues form
/// `(-1)^l R_{l,N} (1-t²)^((3-N)/2) d^l/dt^l (1-t²)^(l+(N-3)/2)`,
/// `R_{l,N} = Γ((N-1)/2) / (2^l Γ(l+(N-1)/2))`.
///
/// Differentiation is symbolic: each derivative of q(t)(1-t²)^a is
/// (q'(1-t²) - 2a t q)(1-t²)^(a-1), so after l steps the remaining power
/// (1-t²)^((N-3)/2) cancels the prefactor exactly. The constant
/// -1/(2(k + (N-1)/2)) is folded into step k, keeping coefficients bounded.
/// Defined on the open interval only; endpoint values belong to
/// [`eval_legendre`].
pub fn eval_legendre_rodrigues(params: LegendreParams, t: f64) -> Result<f64> {
    if !(t > -1.0 && t < 1.0) {
        return Err(Error::domain(format!("Rodrigues form is evaluated on the open interval (-1, 1), got t = {t}")));
    }
    Ok(rodrigues_polynomial(&params).eval(t))
}

fn rodrigues_polynomial(params: &LegendreParams) -> PolyCoeffs {
    let l = params.degree;
    let shift = params.half_shift();
    let a0 = l as f64 + (params.dim.get() as f64 - 3.0) / 2.0;
    let mut q = vec![1.0];
    for k in 0..l {
        let a = a0 - k as f64;
        let scale = -1.0 / (2.0 * (k as f64 + shift));
        let deg = q.len() - 1;
        let mut next = vec![0.0; deg + 2];
        for (i, slot) in next.iter_mut().enumerate() {
            let up = if i < deg { (i + 1) as f64 * q[i + 1] } else { 0.0 };
            let down = if i >= 1 && i - 1 <= deg { (i as f64 - 1.0 + 2.0 * a) * q[i - 1] } else { 0.0 };
            *slot = scale * (up - down);
        }
        q = next;
    }
    PolyCoeffs(q)
}

/// Default node count for the integral representation.
fn default_integral_order(l: usize) -> usize {
    16.max(l + 4)
}

/// P_{l,N}(t) from the integral representation
/// `|S^(N-3)|/|S^(N-2)| ∫_{-1}^{1} [t + i√(1-t²) s]^l (1-s²)^((N-4)/2) ds`,
/// evaluated with a Gauss–Gegenbauer rule for exponent (N-4)/2.
///
/// The imaginary part vanishes by odd symmetry; a residual above 1e-12 is
/// reported as an internal error.
pub fn eval_legendre_integral(params: LegendreParams, t: f64, quad_order: Option<usize>) -> Result<f64> {
    let n = params.dim.get();
    if n < 3 {
        return Err(Error::domain("integral representation requires N >= 3"));
    }
    check_closed(t)?;
    let l = params.degree;
    let order = quad_order.unwrap_or_else(|| default_integral_order(l));
    if order < l / 2 + 2 {
        return Err(Error::capability(format!(
            "integral route needs at least {} nodes for degree {l}, got {order}",
            l / 2 + 2
        )));
    }
    let rule = gauss_gegenbauer_rule(order, (n as f64 - 4.0) / 2.0)?;
    // |S^(N-3)| / |S^(N-2)| = Γ((N-1)/2) / (√π Γ((N-2)/2))
    let ratio = gamma_ratio((n as f64 - 1.0) / 2.0, (n as f64 - 2.0) / 2.0)? / std::f64::consts::PI.sqrt();
    let c = (1.0 - t * t).max(0.0).sqrt();
    let z = rule.integrate_complex(|s| Complex64::new(t, c * s).powu(l as u32)) * ratio;
    if z.im.abs() > 1e-12 {
        return Err(Error::Internal(format!(
            "integral representation left an imaginary residue {:e} at l={l}, N={n}, t={t}",
            z.im
        )));
    }
    Ok(z.re)
}

/// P_{l,N}(t) by the normalized three-term recurrence
/// `(k+N-2) P_{k+1} = (2k+N-2) t P_k - k P_{k-1}`, seeded with P_0 = 1, P_1 = t.
pub fn eval_legendre_recurrence(params: LegendreParams, t: f64) -> Result<f64> {
    check_closed(t)?;
    Ok(recurrence_value(params.degree, params.dim.get(), t))
}

#[inline]
pub(crate) fn recurrence_value(l: usize, n: usize, t: f64) -> f64 {
    if l == 0 {
        return 1.0;
    }
    let nf = n as f64;
    let mut prev = 1.0;
    let mut cur = t;
    for k in 1..l {
        let kf = k as f64;
        let next = ((2.0 * kf + nf - 2.0) * t * cur - kf * prev) / (kf + nf - 2.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Fills `out[0..=l_max]` with P_{0,N}(t)..P_{l_max,N}(t) by recurrence.
#[inline]
pub(crate) fn recurrence_fill(n: usize, t: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    out[0] = 1.0;
    if out.len() == 1 {
        return;
    }
    out[1] = t;
    let nf = n as f64;
    for k in 1..out.len() - 1 {
        let kf = k as f64;
        out[k + 1] = ((2.0 * kf + nf - 2.0) * t * out[k] - kf * out[k - 1]) / (kf + nf - 2.0);
    }
}

/// P_{0,N}(t), ..., P_{l_max,N}(t) in one recurrence sweep.
pub fn legendre_table(l_max: usize, n: AmbientDim, t: f64) -> Result<Vec<f64>> {
    check_closed(t)?;
    let mut out = vec![0.0; l_max + 1];
    recurrence_fill(n.get(), t, &mut out);
    Ok(out)
}

/// Selects one of the four evaluation routes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LegendreMethod {
    Explicit,
    Rodrigues,
    Integral,
    Recurrence,
}

impl LegendreMethod {
    pub const ALL: [LegendreMethod; 4] =
        [LegendreMethod::Explicit, LegendreMethod::Rodrigues, LegendreMethod::Integral, LegendreMethod::Recurrence];

    pub fn evaluate(self, params: LegendreParams, t: f64) -> Result<f64> {
        match self {
            LegendreMethod::Explicit => eval_legendre(params, t),
            LegendreMethod::Rodrigues => eval_legendre_rodrigues(params, t),
            LegendreMethod::Integral => eval_legendre_integral(params, t, None),
            LegendreMethod::Recurrence => eval_legendre_recurrence(params, t),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            LegendreMethod::Explicit => "explicit",
            LegendreMethod::Rodrigues => "rodrigues",
            LegendreMethod::Integral => "integral",
            LegendreMethod::Recurrence => "recurrence",
        }
    }
}

impl fmt::Display for LegendreMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LegendreMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LegendreMethod::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::domain(format!("unknown method '{s}' (explicit|rodrigues|integral|recurrence)")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p(l: usize, n: usize) -> LegendreParams {
        LegendreParams::new(l, n).unwrap()
    }

    /// Classical Legendre polynomials by Bonnet's recursion, an oracle for N = 3.
    fn bonnet(l: usize, t: f64) -> f64 {
        let (mut a, mut b) = (1.0, t);
        if l == 0 {
            return 1.0;
        }
        for k in 1..l {
            let c = ((2 * k + 1) as f64 * t * b - k as f64 * a) / (k + 1) as f64;
            a = b;
            b = c;
        }
        b
    }

    #[test]
    fn explicit_sum_examples() {
        for n in 3..9 {
            for l in 0..20 {
                assert!((eval_legendre(p(l, n), 1.0).unwrap() - 1.0).abs() < 1e-12);
            }
            assert!((eval_legendre(p(1, n), 0.37).unwrap() - 0.37).abs() < 1e-15);
        }
        assert!((eval_legendre(p(2, 3), 0.5).unwrap() + 0.125).abs() < 1e-15);
        assert!(matches!(eval_legendre(p(2, 3), 1.5), Err(Error::Domain(_))));
        for l in 0..12 {
            for &t in &[-0.9, -0.2, 0.0, 0.33, 0.8] {
                assert!((eval_legendre(p(l, 3), t).unwrap() - bonnet(l, t)).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn chebyshev_case() {
        assert_eq!(eval_legendre_n2(0, 0.4).unwrap(), 1.0);
        assert!((eval_legendre_n2(1, 0.3).unwrap() - 0.3).abs() < 1e-15);
        assert!((eval_legendre_n2(3, 0.5).unwrap() + 1.0).abs() < 1e-14);
        // the explicit sum is valid on the circle too
        for l in 0..10 {
            let t: f64 = 0.27;
            let s = 1.0 - t * t;
            let mut acc = 0.0;
            for (j, c) in explicit_sum_coeffs(&p(l, 2)).into_iter().enumerate() {
                acc += c * s.powi(j as i32) * t.powi((l - 2 * j) as i32);
            }
            assert!((acc - eval_legendre_n2(l, t).unwrap()).abs() < 1e-13);
            assert!((recurrence_value(l, 2, t) - eval_legendre_n2(l, t).unwrap()).abs() < 1e-13);
        }
    }

    #[test]
    fn coefficient_examples() {
        assert_eq!(legendre_coefficients(p(0, 5)).unwrap().0, vec![1.0]);
        assert_eq!(legendre_coefficients(p(1, 5)).unwrap().0, vec![0.0, 1.0]);
        let c = legendre_coefficients(p(2, 3)).unwrap().0;
        assert!((c[0] + 0.5).abs() < 1e-15 && c[1] == 0.0 && (c[2] - 1.5).abs() < 1e-15);
        assert!(matches!(legendre_coefficients(p(61, 3)), Err(Error::Capability(_))));
        for n in 3..7 {
            for l in 0..20 {
                let c = legendre_coefficients(p(l, n)).unwrap();
                assert_eq!(c.degree(), l);
                for (k, v) in c.0.iter().enumerate() {
                    if (l - k) % 2 == 1 {
                        assert_eq!(*v, 0.0);
                    }
                }
                let t = -0.61;
                assert!((c.eval(t) - eval_legendre(p(l, n), t).unwrap()).abs() < 1e-11);
            }
        }
    }

    #[test]
    fn rodrigues_examples() {
        assert_eq!(eval_legendre_rodrigues(p(0, 4), 0.3).unwrap(), 1.0);
        assert!((eval_legendre_rodrigues(p(2, 3), 0.5).unwrap() + 0.125).abs() < 1e-15);
        let a = eval_legendre_rodrigues(p(3, 5), 0.2).unwrap();
        let b = eval_legendre(p(3, 5), 0.2).unwrap();
        assert!((a - b).abs() < 1e-10);
        assert!(eval_legendre_rodrigues(p(3, 5), 1.0).is_err());
        assert!(eval_legendre_rodrigues(p(3, 5), -1.0).is_err());
        for l in 0..10 {
            assert!(
                (eval_legendre_rodrigues(p(l, 2), 0.41).unwrap() - eval_legendre_n2(l, 0.41).unwrap()).abs() < 1e-12
            );
        }
    }

    #[test]
    fn integral_examples() {
        assert!((eval_legendre_integral(p(0, 5), 0.3, None).unwrap() - 1.0).abs() < 1e-14);
        for n in 3..8 {
            for l in 0..16 {
                assert!((eval_legendre_integral(p(l, n), 1.0, None).unwrap() - 1.0).abs() < 1e-12);
            }
        }
        let a = eval_legendre_integral(p(4, 4), -0.3, None).unwrap();
        let b = eval_legendre(p(4, 4), -0.3).unwrap();
        assert!((a - b).abs() < 1e-9);
        assert!(eval_legendre_integral(p(4, 2), 0.3, None).is_err());
        assert!(matches!(eval_legendre_integral(p(10, 4), 0.3, Some(3)), Err(Error::Capability(_))));
    }

    #[test]
    fn recurrence_examples() {
        assert_eq!(eval_legendre_recurrence(p(0, 6), 0.9).unwrap(), 1.0);
        assert_eq!(eval_legendre_recurrence(p(1, 6), 0.9).unwrap(), 0.9);
        assert!((eval_legendre_recurrence(p(2, 3), 0.5).unwrap() + 0.125).abs() < 1e-15);
        let a = eval_legendre_recurrence(p(10, 6), 0.9).unwrap();
        let b = eval_legendre(p(10, 6), 0.9).unwrap();
        assert!((a - b).abs() < 1e-11);
        let table = legendre_table(12, AmbientDim::new(5).unwrap(), -0.3).unwrap();
        for (l, v) in table.iter().enumerate() {
            assert_eq!(*v, recurrence_value(l, 5, -0.3));
        }
    }

    #[test]
    fn recurrence_agrees_with_explicit_sum_to_degree_40() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [3, 4, 5, 7] {
            for l in 0..=40 {
                for _ in 0..10 {
                    let t: f64 = rng.random_range(-1.0..=1.0);
                    let a = eval_legendre_recurrence(p(l, n), t).unwrap();
                    let b = eval_legendre(p(l, n), t).unwrap();
                    assert!((a - b).abs() < 1e-11, "l={l} N={n} t={t}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn method_parsing() {
        for m in LegendreMethod::ALL {
            assert_eq!(m.name().parse::<LegendreMethod>().unwrap(), m);
        }
        assert!("newton".parse::<LegendreMethod>().is_err());
    }
}
