//! Self-contained invariant suite, grouped by module.
//!
//! Each check draws from its own seeded generator and reports the worst
//! deviation it saw against a fixed tolerance, so the rendered report is
//! byte-identical across runs and thread counts.

use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::filtration::{
    convolution_spectrum, decompose, decompose_at, filtrate_direct, filtrate_spectral, gegenbauer_kernel,
    kernel_limit_check, kernel_normalization, project_component, zonal_convolve, zonal_convolve_at, ZonalProfile,
};
use crate::geometry::{
    angles_to_cartesian, apply_rotation, cartesian_to_angles, gamma_fn, orthogonality_defect, random_point,
    random_rotation, rotate_coords, surface_area, surface_area_recursive, AmbientDim, SpherePoint,
};
use crate::polynomials::{
    dim_harmonics, dim_harmonics_binomial, eval_gegenbauer, eval_legendre, gegenbauer_binomial, legendre_table,
    ode_residual, poisson_generating_sum, sph2_harmonic, GegenbauerParams, LegendreMethod, LegendreParams,
};
use crate::quadrature::{
    gauss_gegenbauer_rule, inner_product, integrate_sphere, l2_norm, sphere_grid, weight_mass, SampledFunction,
    SphereGrid,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Geometry,
    Polynomials,
    Quadrature,
    Filtration,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Geometry => "geometry",
            Suite::Polynomials => "polynomials",
            Suite::Quadrature => "quadrature",
            Suite::Filtration => "filtration",
            Suite::All => "all",
        }
    }

    fn members(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![Suite::Geometry, Suite::Polynomials, Suite::Quadrature, Suite::Filtration],
            s => vec![s],
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "geometry" => Ok(Suite::Geometry),
            "polynomials" => Ok(Suite::Polynomials),
            "quadrature" => Ok(Suite::Quadrature),
            "filtration" => Ok(Suite::Filtration),
            "all" => Ok(Suite::All),
            other => Err(Error::domain(format!(
                "unknown suite '{other}' (expected geometry, polynomials, quadrature, filtration or all)"
            ))),
        }
    }
}

/// One named check: worst deviation observed against its tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub suite: Suite,
    pub name: &'static str,
    pub deviation: f64,
    pub tolerance: f64,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.deviation.is_finite() && self.deviation <= self.tolerance
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub results: Vec<CheckResult>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(CheckResult::passed)
    }

    pub fn failures(&self) -> usize {
        self.results.iter().filter(|r| !r.passed()).count()
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let width = self.results.iter().map(|r| r.name.len()).max().unwrap_or(0);
        for r in &self.results {
            let status = if r.passed() { "PASS" } else { "FAIL" };
            writeln!(
                s,
                "{status} {:<12} {:<width$}  max_dev={:.3e}  tol={:.1e}",
                format!("[{}]", r.suite),
                r.name,
                r.deviation,
                r.tolerance
            )
            .unwrap();
        }
        let failed = self.failures();
        writeln!(s, "{} checks, {} passed, {failed} failed", self.results.len(), self.results.len() - failed).unwrap();
        s
    }
}

/// Runs every check of `suite`. Errors raised inside a check count as an
/// infinite deviation rather than aborting the run.
pub fn run_checks(suite: Suite) -> CheckReport {
    let mut results = Vec::new();
    for member in suite.members() {
        let table: &[(&'static str, f64, CheckFn)] = match member {
            Suite::Geometry => GEOMETRY,
            Suite::Polynomials => POLYNOMIALS,
            Suite::Quadrature => QUADRATURE,
            Suite::Filtration => FILTRATION,
            Suite::All => unreachable!(),
        };
        for (i, &(name, tolerance, check)) in table.iter().enumerate() {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0000 + 97 * i as u64 + member as u64);
            let deviation = check(&mut rng).unwrap_or(f64::INFINITY);
            results.push(CheckResult { suite: member, name, deviation, tolerance });
        }
    }
    CheckReport { results }
}

fn dim(n: usize) -> AmbientDim {
    AmbientDim::new(n).expect("valid test dimension")
}

fn grid(n: usize, m: usize) -> Result<Arc<SphereGrid>> {
    Ok(Arc::new(sphere_grid(dim(n), m)?))
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn flag(ok: bool) -> f64 {
    if ok {
        0.0
    } else {
        1.0
    }
}

/// A random real function of band at most `band`: a sum of zonal
/// polynomials P_{l,N}(ξ·a) with random poles and coefficients in [-1, 1].
pub fn random_band_limited<R: Rng + ?Sized>(grid: &Arc<SphereGrid>, band: usize, rng: &mut R) -> SampledFunction {
    let n = grid.dim();
    let mut f = SampledFunction::constant(grid.clone(), rng.random_range(-1.0..1.0));
    for l in 1..=band {
        for _ in 0..2 {
            let c: f64 = rng.random_range(-1.0..1.0);
            let pole = random_point(n, rng);
            let term = ZonalProfile::legendre(n, l)
                .with_pole(pole)
                .and_then(|p| p.sample(grid.clone()))
                .expect("profile matches grid");
            f = f.add(&term.scale(c)).expect("same grid");
        }
    }
    f.with_band_limit(band)
}

type CheckFn = fn(&mut ChaCha8Rng) -> Result<f64>;

// ---------------------------------------------------------------------------
// geometry
// ---------------------------------------------------------------------------

const GEOMETRY: &[(&str, f64, CheckFn)] = &[
    ("surface_area_recursion", 1e-13, surface_area_recursion),
    ("gamma_recurrence", 1e-13, gamma_recurrence),
    ("angle_round_trip", 1e-12, angle_round_trip),
    ("rotation_orthogonality", 1e-12, rotation_orthogonality),
];

fn surface_area_recursion(_: &mut ChaCha8Rng) -> Result<f64> {
    Ok((2..=16).map(|n| rel(surface_area_recursive(dim(n)), surface_area(dim(n)))).fold(0.0, f64::max))
}

fn gamma_recurrence(rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let s: f64 = rng.random_range(0.05..60.0);
        worst = worst.max(rel(gamma_fn(s + 1.0)?, s * gamma_fn(s)?));
    }
    Ok(worst)
}

fn angle_round_trip(rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst = 0.0f64;
    for n in 2..=8 {
        for _ in 0..200 {
            let p = random_point(dim(n), rng);
            let back = angles_to_cartesian(&cartesian_to_angles(&p)?, dim(n))?;
            let d = p.coords().iter().zip(back.coords()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            worst = worst.max(d);
        }
    }
    Ok(worst)
}

fn rotation_orthogonality(rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst = 0.0f64;
    for n in 2..=8 {
        let r = random_rotation(dim(n), rng);
        worst = worst.max(orthogonality_defect(&r));
        let a = random_point(dim(n), rng);
        let b = random_point(dim(n), rng);
        let (ra, rb) = (apply_rotation(&r, &a)?, apply_rotation(&r, &b)?);
        worst = worst.max((ra.dot(&rb) - a.dot(&b)).abs());
        worst = worst.max(flag(r.determinant() > 0.0));
    }
    Ok(worst)
}

// ---------------------------------------------------------------------------
// polynomials
// ---------------------------------------------------------------------------

const POLYNOMIALS: &[(&str, f64, CheckFn)] = &[
    ("legendre_pole_normalization", 1e-12, legendre_pole_normalization),
    ("legendre_four_way_agreement", 1e-9, legendre_four_way),
    ("gegenbauer_binomial_relation", 1e-10, gegenbauer_relation),
    ("harmonic_dimension_forms", 0.0, dimension_forms),
    ("legendre_orthogonality", 1e-10, legendre_orthogonality),
    ("generating_function_l40", 1e-10, generating_function),
    ("eigen_ode_residual", 1e-9, eigen_ode),
    ("addition_theorem_s2", 1e-10, addition_theorem),
];

const DIMS: [usize; 4] = [3, 4, 5, 7];

fn legendre_pole_normalization(_: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst = 0.0f64;
    for &n in &DIMS {
        for l in 0..=15 {
            let p = LegendreParams::new(l, n)?;
            for m in [LegendreMethod::Explicit, LegendreMethod::Integral, LegendreMethod::Recurrence] {
                worst = worst.max((m.evaluate(p, 1.0)? - 1.0).abs());
            }
        }
    }
    Ok(worst)
}

fn legendre_four_way(rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst = 0.0f64;
    for &n in &DIMS {
        for l in 0..=15 {
            let p = LegendreParams::new(l, n)?;
            for _ in 0..50 {
                let t = rng.random_range(-0.999_999..0.999_999);
                let vals = LegendreMethod::ALL.iter().map(|m| m.evaluate(p, t)).collect::<Result<Vec<_>>>()?;
                for a in &vals {
                    for b in &vals {
                        worst = worst.max((a - b).abs());
                    }
                }
            }
        }
    }
    Ok(worst)
}

fn gegenbauer_relation(rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst = 0.0f64;
    for &n in &DIMS {
        for l in 0..=15 {
            let g = GegenbauerParams::for_dim(l, dim(n))?;
            let b = gegenbauer_binomial(l, dim(n));
            for _ in 0..50 {
                let t = rng.random_range(-1.0..=1.0);
                let p = eval_legendre(LegendreParams::new(l, n)?, t)?;
                worst = worst.max((eval_gegenbauer(g, t)? - b * p).abs());
            }
        }
    }
    Ok(worst)
}

fn dimension_forms(_: &mut ChaCha8Rng) -> Result<f64> {
    let mut mismatches = 0usize;
    for n in 2..=16 {
        for l in 0..=60 {
            if dim_harmonics(l, dim(n))? != dim_harmonics_binomial(l, dim(n))? {
                mismatches += 1;
            }
        }
    }
    Ok(mismatches as f64)
}

fn legendre_orthogonality(_: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst = 0.0f64;
    for &n in &DIMS {
        let d = dim(n);
        let rule = gauss_gegenbauer_rule(14, (n as f64 - 3.0) / 2.0)?;
        let tables: Vec<Vec<f64>> = rule.nodes().iter().map(|&t| legendre_table(12, d, t)).collect::<Result<_>>()?;
        for l in 0..=12 {
            for j in 0..=12 {
                let v: f64 = tables.iter().zip(rule.weights()).map(|(p, w)| w * p[l] * p[j]).sum();
                let expected = if l == j { weight_mass(rule.beta()) / dim_harmonics(l, d)? as f64 } else { 0.0 };
                worst = worst.max((v - expected).abs());
            }
        }
    }
    Ok(worst)
}

fn generating_function(rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst = 0.0f64;
    // the tail at L = 40, r = 0.5 exceeds 1e-10 once N >= 5
    for n in [3, 4] {
        for r in [0.0, 0.1, 0.25, 0.4, 0.5] {
            for i in 0..=40 {
                let t = if i == 40 { rng.random_range(-1.0..=1.0) } else { -1.0 + 0.05 * i as f64 };
                let g = poisson_generating_sum(r, t, dim(n), 40)?;
                worst = worst.max((g.partial_sum - g.closed_form).abs());
            }
        }
    }
    Ok(worst)
}

fn eigen_ode(rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst = 0.0f64;
    for n in 2..=8 {
        for l in 0..=20 {
            let scale = eval_gegenbauer(GegenbauerParams::new(l, (n as f64 - 1.0) / 2.0)?, 1.0)?;
            for _ in 0..10 {
                let t = rng.random_range(-0.999..0.999);
                worst = worst.max(ode_residual(l, dim(n), t)?.abs() / scale);
            }
        }
    }
    Ok(worst)
}

fn addition_theorem(rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst = 0.0f64;
    let area = surface_area(dim(3));
    for _ in 0..100 {
        let x = random_point(dim(3), rng);
        let y = random_point(dim(3), rng);
        let (ax, ay) = (cartesian_to_angles(&x)?, cartesian_to_angles(&y)?);
        for l in 0..=8 {
            let mut sum = Complex64::default();
            for m in -(l as i64)..=(l as i64) {
                sum += sph2_harmonic(l, m, ax[0], ax[1])? * sph2_harmonic(l, m, ay[0], ay[1])?.conj();
            }
            let p = eval_legendre(LegendreParams::new(l, 3)?, x.dot(&y).clamp(-1.0, 1.0))?;
            let expected = dim_harmonics(l, dim(3))? as f64 * p / area;
            worst = worst.max((sum / area - expected).norm());
        }
    }
    Ok(worst)
}

// ---------------------------------------------------------------------------
// quadrature
// ---------------------------------------------------------------------------

const QUADRATURE: &[(&str, f64, CheckFn)] = &[
    ("gauss_gegenbauer_exactness", 1e-12, rule_exactness),
    ("grid_weight_sum", 1e-12, grid_weight_sum),
    ("grid_moment_exactness", 1e-12, grid_moments),
];

/// ∫_{-1}^{1} t^k (1-t²)^β dt.
fn beta_moment(k: usize, beta: f64) -> Result<f64> {
    if k % 2 == 1 {
        return Ok(0.0);
    }
    let a = (k as f64 + 1.0) / 2.0;
    Ok(gamma_fn(a)? * gamma_fn(beta + 1.0)? / gamma_fn(a + beta + 1.0)?)
}

fn rule_exactness(_: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst = 0.0f64;
    for beta in [-0.5, 0.0, 0.5, 1.0, 2.5] {
        for m in [1usize, 2, 5, 9, 16] {
            let rule = gauss_gegenbauer_rule(m, beta)?;
            for k in 0..=rule.exact_degree() {
                let v = rule.integrate(|t| t.powi(k as i32));
                let exact = beta_moment(k, beta)?;
                worst = worst.max((v - exact).abs() / beta_moment(k - k % 2, beta)?);
            }
        }
    }
    Ok(worst)
}

fn grid_weight_sum(_: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst = 0.0f64;
    for n in 2..=7 {
        for m in [1, 3, 6] {
            let g = sphere_grid(dim(n), m)?;
            worst = worst.max(rel(g.total_weight(), surface_area(dim(n))));
        }
    }
    Ok(worst)
}

/// ∫_{S^(N-1)} x^α dS = 2 Π Γ((α_i+1)/2) / Γ((|α|+N)/2) for even α, else 0.
fn sphere_moment(alpha: &[usize]) -> Result<f64> {
    if alpha.iter().any(|a| a % 2 == 1) {
        return Ok(0.0);
    }
    let mut num = 2.0;
    for &a in alpha {
        num *= gamma_fn((a as f64 + 1.0) / 2.0)?;
    }
    let total: usize = alpha.iter().sum();
    Ok(num / gamma_fn((total + alpha.len()) as f64 / 2.0)?)
}

fn grid_moments(rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst = 0.0f64;
    for n in 2..=5 {
        let g = grid(n, 4)?;
        let area = surface_area(dim(n));
        for _ in 0..40 {
            let mut alpha = vec![0usize; n];
            for _ in 0..rng.random_range(0..=g.guaranteed_degree()) {
                alpha[rng.random_range(0..n)] += 1;
            }
            let f =
                SampledFunction::from_fn(g.clone(), |x| x.iter().zip(&alpha).map(|(v, &a)| v.powi(a as i32)).product());
            worst = worst.max((integrate_sphere(&f).re - sphere_moment(&alpha)?).abs() / area);
        }
    }
    Ok(worst)
}

// ---------------------------------------------------------------------------
// filtration
// ---------------------------------------------------------------------------

const FILTRATION: &[(&str, f64, CheckFn)] = &[
    ("kernel_normalization", 1e-10, kernel_norm),
    ("kernel_limit_decay", 0.0, kernel_limit),
    ("projection_idempotent", 1e-8, projection_idempotent),
    ("projection_self_adjoint", 1e-8, projection_self_adjoint),
    ("projection_contraction", 1e-10, projection_contraction),
    ("decomposition_sum", 1e-8, decomposition_sum),
    ("filtration_direct_vs_spectral", 1e-8, direct_vs_spectral),
    ("filtration_zonal_scaling", 1e-8, zonal_scaling),
    ("filtration_equals_convolution", 1e-10, filtration_convolution),
    ("convolution_rotation_equivariance", 1e-8, rotation_equivariance),
    ("spectral_multiplicativity", 1e-8, multiplicativity),
];

fn kernel_norm(_: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst = 0.0f64;
    for &n in &DIMS {
        for r in [0.0, 0.3, 0.7, 0.9, 0.99] {
            worst = worst.max((kernel_normalization(dim(n), r)? - 1.0).abs());
        }
    }
    Ok(worst)
}

fn kernel_limit(_: &mut ChaCha8Rng) -> Result<f64> {
    let mut bad = 0.0;
    for &n in &DIMS {
        for t0 in [-0.5, 0.0, 0.5] {
            let rep = kernel_limit_check(dim(n), t0)?;
            bad += flag(rep.passed());
            bad += flag((rep.r0_value - gegenbauer_kernel(dim(n), 0.0, -1.0)?).abs() == 0.0);
        }
    }
    Ok(bad)
}

fn projection_idempotent(rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst = 0.0f64;
    for n in [3, 4, 5] {
        let g = grid(n, 5)?;
        let f = random_band_limited(&g, 4, rng);
        for l in 0..=4 {
            let p = project_component(&f, l)?;
            worst = worst.max(project_component(&p, l)?.max_abs_diff(&p)?);
        }
    }
    Ok(worst)
}

fn projection_self_adjoint(rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst = 0.0f64;
    for n in [3, 4, 5] {
        let g = grid(n, 5)?;
        let f = random_band_limited(&g, 4, rng);
        let h = random_band_limited(&g, 4, rng);
        for l in 0..=4 {
            let a = inner_product(&project_component(&f, l)?, &h)?;
            let b = inner_product(&f, &project_component(&h, l)?)?;
            worst = worst.max((a - b).norm());
        }
    }
    Ok(worst)
}

fn projection_contraction(rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst = 0.0f64;
    for n in [3, 4, 5] {
        let g = grid(n, 5)?;
        for _ in 0..5 {
            let f = random_band_limited(&g, 4, rng);
            let norm = l2_norm(&f);
            for l in 0..=4 {
                worst = worst.max(l2_norm(&project_component(&f, l)?) - norm);
            }
        }
    }
    Ok(worst.max(0.0))
}

fn decomposition_sum(rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst = 0.0f64;
    for n in [3, 4, 5] {
        let g = grid(n, 5)?;
        let f = random_band_limited(&g, 4, rng);
        let comps = decompose(&f, 4)?;
        let mut total = SampledFunction::constant(g.clone(), 0.0);
        for c in &comps {
            total = total.add(c)?;
        }
        worst = worst.max(total.max_abs_diff(&f)?);
    }
    Ok(worst)
}

fn direct_vs_spectral(rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst = 0.0f64;
    for (n, m, r) in [(3, 16, 0.3), (4, 14, 0.2)] {
        let g = grid(n, m)?;
        let f = random_band_limited(&g, 4, rng);
        let direct = filtrate_direct(&f, r)?;
        let spectral = filtrate_spectral(&f, r, 4)?;
        worst = worst.max(direct.max_abs_diff(&spectral)?);
    }
    Ok(worst)
}

fn zonal_scaling(rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst = 0.0f64;
    for n in [3, 4, 5] {
        let g = grid(n, 6)?;
        for l in 0..=5 {
            let pole = random_point(dim(n), rng);
            let f = ZonalProfile::legendre(dim(n), l).with_pole(pole)?.sample(g.clone())?;
            let out = filtrate_spectral(&f, 0.5, l)?;
            worst = worst.max(out.max_abs_diff(&f.scale(0.5f64.powi(l as i32)))?);
        }
    }
    Ok(worst)
}

fn filtration_convolution(rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst = 0.0f64;
    for (n, m) in [(3, 14), (4, 12)] {
        let g = grid(n, m)?;
        let f = random_band_limited(&g, 3, rng);
        for r in [0.0, 0.15, 0.25] {
            let a = filtrate_direct(&f, r)?;
            let b = zonal_convolve(&f, &ZonalProfile::gegenbauer(dim(n), r)?)?;
            worst = worst.max(a.max_abs_diff(&b)?);
        }
    }
    Ok(worst)
}

fn rotation_equivariance(rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst = 0.0f64;
    for n in [3, 4] {
        let d = dim(n);
        let g = grid(n, 6)?;
        let rot = random_rotation(d, rng);
        let poles: Vec<(usize, f64, SpherePoint)> =
            (1..=3).map(|l| (l, rng.random_range(-1.0..1.0), random_point(d, rng))).collect();
        let f_at = |x: &[f64]| -> f64 {
            poles
                .iter()
                .map(|(l, c, a)| {
                    c * crate::polynomials::recurrence_value(
                        *l,
                        n,
                        crate::geometry::dot(x, a.coords()).clamp(-1.0, 1.0),
                    )
                })
                .sum()
        };
        let f = SampledFunction::from_fn(g.clone(), f_at).with_band_limit(3);
        let f_rot = SampledFunction::from_fn(g.clone(), |x| f_at(&rotate_coords(&rot, x))).with_band_limit(3);
        let h = ZonalProfile::expansion(d, vec![0.4, -0.2, 0.7, 0.1, 0.3])?;
        let lhs = zonal_convolve(&f_rot, &h)?;
        let rotated: Vec<SpherePoint> =
            g.points().map(|x| SpherePoint::normalized(rotate_coords(&rot, x))).collect::<Result<_>>()?;
        let rhs = zonal_convolve_at(&f, &h, &rotated)?;
        let d = lhs.values().iter().zip(&rhs).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        worst = worst.max(d);
    }
    Ok(worst)
}

/// Grid base order and largest Gegenbauer r keeping the convolution aliasing
/// of band-3 inputs far below 1e-8.
pub fn multiplicativity_setup(n: usize) -> (usize, f64) {
    match n {
        3 => (8, 0.1),
        4 => (6, 0.05),
        _ => (5, 0.02),
    }
}

/// max over l ≤ band and the sample points of |F_l(f * h) - μ_l F_l f|.
pub fn multiplicativity_deviation(
    f: &SampledFunction,
    h: &ZonalProfile,
    band: usize,
    points: &[SpherePoint],
) -> Result<f64> {
    let conv = zonal_convolve(f, h)?;
    let lhs = decompose_at(&conv, band, points)?;
    let rhs = decompose_at(f, band, points)?;
    let mut worst = 0.0f64;
    for l in 0..=band {
        let mu = convolution_spectrum(h, l)?.multiplier;
        for (a, b) in lhs[l].iter().zip(&rhs[l]) {
            worst = worst.max((a - b * mu).norm());
        }
    }
    Ok(worst)
}

fn multiplicativity(rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst = 0.0f64;
    for n in [3, 4, 5] {
        let d = dim(n);
        let (m, r_max) = multiplicativity_setup(n);
        let g = grid(n, m)?;
        let points: Vec<SpherePoint> = (0..12).map(|_| random_point(d, rng)).collect();
        for trial in 0..2 {
            let f = random_band_limited(&g, 3, rng);
            let h = if trial == 0 {
                let coeffs: Vec<f64> = (0..5).map(|_| rng.random_range(-1.0..1.0)).collect();
                ZonalProfile::expansion(d, coeffs)?
            } else {
                ZonalProfile::gegenbauer(d, rng.random_range(0.0..r_max))?
            };
            worst = worst.max(multiplicativity_deviation(&f, &h, 3, &points)?);
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in [Suite::Geometry, Suite::Polynomials, Suite::Quadrature, Suite::Filtration, Suite::All] {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn every_check_passes() {
        let report = run_checks(Suite::All);
        assert!(report.passed(), "{}", report.render());
    }

    #[test]
    fn failing_check_is_reported() {
        let r = CheckResult { suite: Suite::Geometry, name: "x", deviation: f64::INFINITY, tolerance: 1.0 };
        let report = CheckReport { results: vec![r] };
        assert!(!report.passed());
        assert!(report.render().starts_with("FAIL"));
    }
}
