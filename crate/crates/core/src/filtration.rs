//! Harmonic projection, the Gegenbauer filtration kernel and operator, and
//! convolution with zonal profiles.
//!
//! Every operator here is a quadrature sum of the form
//! `ξ ↦ Σ_j w_j K(ξ·η_j) f(η_j)` over the grid carrying `f`. Target points are
//! processed independently in parallel and each sum is pairwise, so results do
//! not depend on the thread count. The `*_at` variants evaluate the same sums
//! at arbitrary target points instead of at the grid itself.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{area_ratio, dot, ln_gamma, sphere_area, surface_area, AmbientDim, SpherePoint};
use crate::polynomials::{dim_harmonics_f64, legendre_table, recurrence_fill, recurrence_value};
use crate::quadrature::{
    gauss_gegenbauer_rule, integrate_zonal, order_for_degree, pairwise_sum, weight_mass, QuadratureRule1D,
    SampledFunction, SphereGrid,
};

/// Largest aliasing bound the direct filtration path accepts.
pub const DIRECT_ALIASING_TOLERANCE: f64 = 1e-8;

// ---------------------------------------------------------------------------
// Pair sums
// ---------------------------------------------------------------------------

/// For each target ξ and each output k, `Σ_j w_j K_k(ξ·η_j) f(η_j)`.
///
/// `kernel(t, out)` fills `out[0..outputs]`. The result is indexed
/// `[output][target]`.
fn pair_sums<K>(f: &SampledFunction, targets: &[f64], outputs: usize, kernel: K) -> Vec<Vec<Complex64>>
where
    K: Fn(f64, &mut [f64]) + Sync,
{
    let grid = f.grid();
    let n = grid.dim().get();
    let weights = grid.weights();
    let coords = grid.coords();
    let values = f.values();
    let len = grid.len();
    let per_target: Vec<Vec<Complex64>> = targets
        .par_chunks(n)
        .map(|xi| {
            let mut k = vec![0.0; outputs];
            let mut terms = vec![Complex64::default(); outputs * len];
            for j in 0..len {
                let eta = &coords[j * n..(j + 1) * n];
                let t = dot(xi, eta).clamp(-1.0, 1.0);
                kernel(t, &mut k);
                let wf = values[j] * weights[j];
                for (o, &kv) in k.iter().enumerate() {
                    terms[o * len + j] = wf * kv;
                }
            }
            terms.chunks(len).map(pairwise_sum).collect()
        })
        .collect();
    (0..outputs).map(|o| per_target.iter().map(|row| row[o]).collect()).collect()
}

fn target_coords(points: &[SpherePoint], n: AmbientDim) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(points.len() * n.get());
    for p in points {
        if p.dim() != n {
            return Err(Error::contract(format!(
                "target point lives in R^{} but the grid is on S^{}",
                p.dim(),
                n.sphere_dim()
            )));
        }
        out.extend_from_slice(p.coords());
    }
    Ok(out)
}

fn insufficient(grid: &SphereGrid, needed: usize, what: &str) -> Error {
    Error::capability(format!(
        "{what} needs a grid exact to degree {needed}, but base order {} is exact to degree {}; \
         use base order >= {}",
        grid.base_order(),
        grid.guaranteed_degree(),
        order_for_degree(needed)
    ))
}

fn ensure_exact(f: &SampledFunction, degree: usize, what: &str) -> Result<usize> {
    let band = f.effective_band();
    let grid = f.grid();
    if degree + band > grid.guaranteed_degree() {
        return Err(insufficient(grid, degree + band, what));
    }
    Ok(band)
}

fn with_samples(f: &SampledFunction, values: Vec<Complex64>, band: Option<usize>) -> SampledFunction {
    SampledFunction::from_parts(f.grid().clone(), values, f.kind(), band)
}

// ---------------------------------------------------------------------------
// Projection
// ---------------------------------------------------------------------------

/// F_{l,N} f: the degree-l harmonic component of `f`,
/// `ξ ↦ (D(l,N)/|S^(N-1)|) ∫ P_{l,N}(ξ·η) f(η) dS(η)`.
pub fn project_component(f: &SampledFunction, l: usize) -> Result<SampledFunction> {
    let values = project_values(f, l, f.grid().coords())?;
    Ok(with_samples(f, values, Some(l)))
}

/// F_{l,N} f evaluated at arbitrary points.
pub fn project_component_at(f: &SampledFunction, l: usize, points: &[SpherePoint]) -> Result<Vec<Complex64>> {
    let targets = target_coords(points, f.grid().dim())?;
    project_values(f, l, &targets)
}

fn project_values(f: &SampledFunction, l: usize, targets: &[f64]) -> Result<Vec<Complex64>> {
    ensure_exact(f, l, &format!("projection onto degree {l}"))?;
    let n = f.grid().dim();
    let scale = dim_harmonics_f64(l, n) / surface_area(n);
    let nn = n.get();
    let mut out = pair_sums(f, targets, 1, |t, k| k[0] = scale * recurrence_value(l, nn, t));
    Ok(out.pop().expect("one output"))
}

/// Components F_{0,N} f, ..., F_{L,N} f.
pub fn decompose(f: &SampledFunction, l_max: usize) -> Result<Vec<SampledFunction>> {
    let comps = decompose_values(f, l_max, f.grid().coords())?;
    Ok(comps.into_iter().enumerate().map(|(l, v)| with_samples(f, v, Some(l))).collect())
}

/// Components evaluated at arbitrary points, indexed `[degree][point]`.
pub fn decompose_at(f: &SampledFunction, l_max: usize, points: &[SpherePoint]) -> Result<Vec<Vec<Complex64>>> {
    let targets = target_coords(points, f.grid().dim())?;
    decompose_values(f, l_max, &targets)
}

fn decompose_values(f: &SampledFunction, l_max: usize, targets: &[f64]) -> Result<Vec<Vec<Complex64>>> {
    ensure_exact(f, l_max, &format!("decomposition up to degree {l_max}"))?;
    let n = f.grid().dim();
    let area = surface_area(n);
    let scales: Vec<f64> = (0..=l_max).map(|l| dim_harmonics_f64(l, n) / area).collect();
    let nn = n.get();
    Ok(pair_sums(f, targets, l_max + 1, |t, k| {
        recurrence_fill(nn, t, k);
        for (v, s) in k.iter_mut().zip(&scales) {
            *v *= s;
        }
    }))
}

/// ‖F_{l,N} f‖₂ for l = 0..=L, indexed by degree.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub dim: AmbientDim,
    pub coeffs: Vec<f64>,
}

impl Spectrum {
    pub fn max_degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Largest coefficient strictly above `band`, zero if there is none.
    pub fn max_above(&self, band: usize) -> f64 {
        self.coeffs.iter().skip(band + 1).fold(0.0, |a, &c| a.max(c))
    }
}

/// Degree-indexed energy spectrum of `f`.
pub fn spectrum(f: &SampledFunction, l_max: usize) -> Result<Spectrum> {
    let comps = decompose(f, l_max)?;
    Ok(Spectrum { dim: f.grid().dim(), coeffs: comps.iter().map(crate::quadrature::l2_norm).collect() })
}

// ---------------------------------------------------------------------------
// Gegenbauer kernel
// ---------------------------------------------------------------------------

fn check_r(r: f64) -> Result<()> {
    if !(0.0..1.0).contains(&r) {
        return Err(Error::domain(format!("smoothing parameter r must lie in [0, 1), got {r}")));
    }
    Ok(())
}

fn check_t(t: f64) -> Result<()> {
    if !(-1.0..=1.0).contains(&t) {
        return Err(Error::domain(format!("t = {t} outside [-1, 1]")));
    }
    Ok(())
}

/// (1-r²)/(1+r²-2rt)^(N/2) with the denominator written as (1-r)² + 2r(1-t).
#[inline]
fn poisson_core(n: usize, r: f64, t: f64) -> f64 {
    let d = (1.0 - r) * (1.0 - r) + 2.0 * r * (1.0 - t);
    // d^(N/2) without powf
    let mut p = d.powi((n / 2) as i32);
    if n % 2 == 1 {
        p *= d.sqrt();
    }
    (1.0 - r * r) / p
}

/// G_N(r, t) = (|S^(N-2)|/|S^(N-1)|) (1-r²)/(1+r²-2rt)^(N/2).
pub fn gegenbauer_kernel(n: AmbientDim, r: f64, t: f64) -> Result<f64> {
    check_r(r)?;
    check_t(t)?;
    Ok(area_ratio(n) * poisson_core(n.get(), r, t))
}

/// ∫ G_N(r,t) (1-t²)^((N-3)/2) dt, which is 1 for every admissible r.
pub fn kernel_normalization(n: AmbientDim, r: f64) -> Result<f64> {
    check_r(r)?;
    let ratio = area_ratio(n);
    let nn = n.get();
    Ok(integrate_zonal(n, |t| ratio * poisson_core(nn, r, t)))
}

/// Behaviour of G_N(1-ε, ·) as ε → 0 away from and at the pole.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelLimitReport {
    pub dim: AmbientDim,
    pub t0: f64,
    pub epsilons: Vec<f64>,
    /// sup over t ∈ [-1, t0] of G_N(1-ε, t), one per ε.
    pub sups: Vec<f64>,
    /// G_N(1-ε, 1), one per ε.
    pub pole_values: Vec<f64>,
    /// G_N(0, t0) = |S^(N-2)|/|S^(N-1)|.
    pub r0_value: f64,
    /// sups strictly decrease along the schedule.
    pub monotone: bool,
    /// pole values strictly increase along the schedule.
    pub divergent_at_pole: bool,
    /// Smallest ratio sups[k] / sups[k+1].
    pub min_decay_factor: f64,
}

impl KernelLimitReport {
    pub fn passed(&self) -> bool {
        self.monotone && self.divergent_at_pole
    }
}

/// ε schedule used by [`kernel_limit_check`].
pub const LIMIT_EPSILONS: [f64; 6] = [1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6];

/// Tracks the kernel's sup on [-1, t0] and its value at the pole as r → 1⁻.
pub fn kernel_limit_check(n: AmbientDim, t0: f64) -> Result<KernelLimitReport> {
    if !(t0 < 1.0) || t0 < -1.0 {
        return Err(Error::domain(format!("t0 must lie in [-1, 1), got {t0}")));
    }
    const SAMPLES: usize = 257;
    let ts: Vec<f64> = (0..SAMPLES).map(|i| -1.0 + (t0 + 1.0) * i as f64 / (SAMPLES - 1) as f64).collect();
    let mut sups = Vec::with_capacity(LIMIT_EPSILONS.len());
    let mut pole_values = Vec::with_capacity(LIMIT_EPSILONS.len());
    for &eps in &LIMIT_EPSILONS {
        let r = 1.0 - eps;
        let sup = ts.iter().map(|&t| gegenbauer_kernel(n, r, t)).try_fold(0.0f64, |a, v| v.map(|v| a.max(v)))?;
        sups.push(sup);
        pole_values.push(gegenbauer_kernel(n, r, 1.0)?);
    }
    let monotone = sups.windows(2).all(|w| w[1] < w[0]);
    let divergent_at_pole = pole_values.windows(2).all(|w| w[1] > w[0]);
    let min_decay_factor = sups.windows(2).map(|w| w[0] / w[1]).fold(f64::INFINITY, f64::min);
    Ok(KernelLimitReport {
        dim: n,
        t0,
        epsilons: LIMIT_EPSILONS.to_vec(),
        sups,
        pole_values,
        r0_value: gegenbauer_kernel(n, 0.0, t0)?,
        monotone,
        divergent_at_pole,
        min_decay_factor,
    })
}

// ---------------------------------------------------------------------------
// Filtration
// ---------------------------------------------------------------------------

/// Parameters of the filtration operator 𝒢(r).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterConfig {
    pub r: f64,
    /// Spectral truncation degree; `None` selects the direct path.
    pub l_max: Option<usize>,
    pub n: AmbientDim,
}

impl FilterConfig {
    pub fn new(r: f64, l_max: Option<usize>, n: AmbientDim) -> Result<Self> {
        check_r(r)?;
        Ok(FilterConfig { r, l_max, n })
    }
}

/// Applies 𝒢(r), by the spectral sum when `l_max` is set and by direct
/// quadrature of the kernel otherwise.
pub fn filtrate(f: &SampledFunction, cfg: &FilterConfig) -> Result<SampledFunction> {
    check_r(cfg.r)?;
    if f.grid().dim() != cfg.n {
        return Err(Error::contract(format!(
            "filter configured for N = {} applied to samples on S^{}",
            cfg.n,
            f.grid().dim().sphere_dim()
        )));
    }
    match cfg.l_max {
        Some(l_max) => filtrate_spectral(f, cfg.r, l_max),
        None => filtrate_direct(f, cfg.r),
    }
}

/// Upper bound on the quadrature error of the direct path,
/// `2 ‖f‖∞ Σ_{l > g-B} r^l D(l,N)`, for exact degree g and band B.
pub fn direct_aliasing_bound(n: AmbientDim, r: f64, band: usize, exact_degree: usize, sup_norm: f64) -> f64 {
    if exact_degree < band {
        return f64::INFINITY;
    }
    2.0 * sup_norm * kernel_tail(n, r, exact_degree - band + 1)
}

/// Σ_{l ≥ from} r^l D(l,N).
fn kernel_tail(n: AmbientDim, r: f64, from: usize) -> f64 {
    if r == 0.0 {
        return if from == 0 { 1.0 } else { 0.0 };
    }
    let mut total = 0.0;
    let mut l = from;
    let mut rl = r.powi(from as i32);
    loop {
        let term = rl * dim_harmonics_f64(l, n);
        total += term;
        // terms decrease once l exceeds the polynomial growth scale of D(l, N)
        let decreasing = (l as f64) * (1.0 - r) > n.get() as f64;
        if (decreasing && term <= total * 1e-17) || rl == 0.0 || l > from + 200_000 {
            return total;
        }
        rl *= r;
        l += 1;
    }
}

fn direct_check(f: &SampledFunction, r: f64) -> Result<()> {
    let grid = f.grid();
    let band = f.effective_band();
    let n = grid.dim();
    let sup = f.sup_norm();
    let g = grid.guaranteed_degree();
    let bound = direct_aliasing_bound(n, r, band, g, sup);
    if bound <= DIRECT_ALIASING_TOLERANCE {
        return Ok(());
    }
    let mut needed = g.max(band);
    while direct_aliasing_bound(n, r, band, needed, sup) > DIRECT_ALIASING_TOLERANCE {
        needed += 1;
    }
    Err(Error::capability(format!(
        "direct filtration at r = {r} has aliasing bound {bound:.3e} above {DIRECT_ALIASING_TOLERANCE:e}; \
         base order {} is exact to degree {g}, degree {needed} is needed (base order >= {})",
        grid.base_order(),
        order_for_degree(needed)
    )))
}

/// `ξ ↦ (1/|S^(N-2)|) ∫ G_N(r, ξ·η) f(η) dS(η)` by quadrature on the grid.
///
/// Fails with a capability error when the grid cannot resolve the kernel to
/// within [`DIRECT_ALIASING_TOLERANCE`] for the band limit of `f`.
pub fn filtrate_direct(f: &SampledFunction, r: f64) -> Result<SampledFunction> {
    let values = filtrate_direct_values(f, r, f.grid().coords())?;
    Ok(with_samples(f, values, f.band_limit()))
}

pub fn filtrate_direct_at(f: &SampledFunction, r: f64, points: &[SpherePoint]) -> Result<Vec<Complex64>> {
    let targets = target_coords(points, f.grid().dim())?;
    filtrate_direct_values(f, r, &targets)
}

fn filtrate_direct_values(f: &SampledFunction, r: f64, targets: &[f64]) -> Result<Vec<Complex64>> {
    check_r(r)?;
    direct_check(f, r)?;
    let profile = ZonalProfile::gegenbauer(f.grid().dim(), r)?;
    Ok(convolve_values(f, &profile, targets))
}

/// Σ_{l ≤ L} r^l F_{l,N} f.
///
/// Components above the band limit of `f` vanish by assumption and are not
/// computed, so `l_max` must reach the band limit.
pub fn filtrate_spectral(f: &SampledFunction, r: f64, l_max: usize) -> Result<SampledFunction> {
    let values = filtrate_spectral_values(f, r, l_max, f.grid().coords())?;
    let band = f.band_limit().map(|b| b.min(l_max));
    Ok(with_samples(f, values, band))
}

pub fn filtrate_spectral_at(
    f: &SampledFunction,
    r: f64,
    l_max: usize,
    points: &[SpherePoint],
) -> Result<Vec<Complex64>> {
    let targets = target_coords(points, f.grid().dim())?;
    filtrate_spectral_values(f, r, l_max, &targets)
}

fn filtrate_spectral_values(f: &SampledFunction, r: f64, l_max: usize, targets: &[f64]) -> Result<Vec<Complex64>> {
    check_r(r)?;
    let band = f.effective_band();
    if l_max < band {
        return Err(Error::capability(format!(
            "spectral truncation degree {l_max} is below the band limit {band} of the input"
        )));
    }
    ensure_exact(f, band, &format!("spectral filtration with band {band}"))?;
    let n = f.grid().dim();
    let area = surface_area(n);
    let scales: Vec<f64> = (0..=band).map(|l| r.powi(l as i32) * dim_harmonics_f64(l, n) / area).collect();
    let nf = n.get() as f64;
    let mut out = pair_sums(f, targets, 1, |t, k| {
        let (mut prev, mut cur) = (1.0, t);
        let mut acc = scales[0];
        for (l, s) in scales.iter().enumerate().skip(1) {
            if l > 1 {
                let lf = (l - 1) as f64;
                let next = ((2.0 * lf + nf - 2.0) * t * cur - lf * prev) / (lf + nf - 2.0);
                prev = cur;
                cur = next;
            }
            acc += s * cur;
        }
        k[0] = acc;
    });
    Ok(out.pop().expect("one output"))
}

// ---------------------------------------------------------------------------
// Zonal profiles and convolution
// ---------------------------------------------------------------------------

/// The radial part of a zonal function.
#[derive(Clone)]
pub enum ProfileKind {
    Constant(f64),
    /// P_{l,N}(t).
    Legendre(usize),
    /// G_N(r,t)/|S^(N-2)|, the filtration kernel as a convolution profile.
    Gegenbauer(f64),
    /// Σ_l c_l P_{l,N}(t).
    Expansion(Vec<f64>),
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for ProfileKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProfileKind::Constant(c) => write!(f, "Constant({c})"),
            ProfileKind::Legendre(l) => write!(f, "Legendre({l})"),
            ProfileKind::Gegenbauer(r) => write!(f, "Gegenbauer({r})"),
            ProfileKind::Expansion(c) => write!(f, "Expansion({c:?})"),
            ProfileKind::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

/// A real zonal function ξ ↦ φ(ξ·η₀).
#[derive(Debug, Clone)]
pub struct ZonalProfile {
    dim: AmbientDim,
    pole: SpherePoint,
    kind: ProfileKind,
    /// 1/|S^(N-1)|, cached for the Gegenbauer profile.
    inv_area: f64,
}

impl ZonalProfile {
    pub fn new(pole: SpherePoint, kind: ProfileKind) -> Result<Self> {
        match &kind {
            ProfileKind::Gegenbauer(r) => check_r(*r)?,
            ProfileKind::Constant(c) if !c.is_finite() => return Err(Error::domain("constant profile must be finite")),
            ProfileKind::Expansion(c) if c.iter().any(|v| !v.is_finite()) => {
                return Err(Error::domain("expansion coefficients must be finite"))
            }
            _ => {}
        }
        let dim = pole.dim();
        Ok(ZonalProfile { dim, pole, kind, inv_area: 1.0 / surface_area(dim) })
    }

    pub fn constant(n: AmbientDim, c: f64) -> Result<Self> {
        Self::new(SpherePoint::north_pole(n), ProfileKind::Constant(c))
    }

    pub fn legendre(n: AmbientDim, l: usize) -> Self {
        ZonalProfile {
            dim: n,
            pole: SpherePoint::north_pole(n),
            kind: ProfileKind::Legendre(l),
            inv_area: 1.0 / surface_area(n),
        }
    }

    pub fn gegenbauer(n: AmbientDim, r: f64) -> Result<Self> {
        Self::new(SpherePoint::north_pole(n), ProfileKind::Gegenbauer(r))
    }

    pub fn expansion(n: AmbientDim, coeffs: Vec<f64>) -> Result<Self> {
        Self::new(SpherePoint::north_pole(n), ProfileKind::Expansion(coeffs))
    }

    pub fn custom(n: AmbientDim, phi: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        ZonalProfile {
            dim: n,
            pole: SpherePoint::north_pole(n),
            kind: ProfileKind::Custom(Arc::new(phi)),
            inv_area: 1.0 / surface_area(n),
        }
    }

    /// Builds an expansion profile from samples of φ at the nodes of a
    /// Gauss–Gegenbauer rule with exponent (N-3)/2. The discrete projection is
    /// exact when φ is a polynomial of degree below the rule's order.
    pub fn from_samples(n: AmbientDim, rule: &QuadratureRule1D, values: &[f64]) -> Result<Self> {
        let beta = (n.get() as f64 - 3.0) / 2.0;
        if (rule.beta() - beta).abs() > 1e-15 {
            return Err(Error::contract(format!(
                "profile samples for N = {n} need a rule with exponent {beta}, got {}",
                rule.beta()
            )));
        }
        if values.len() != rule.order() {
            return Err(Error::contract(format!(
                "{} profile samples for a rule of order {}",
                values.len(),
                rule.order()
            )));
        }
        let degree = rule.order() - 1;
        let mass = weight_mass(beta);
        let tables: Vec<Vec<f64>> =
            rule.nodes().iter().map(|&t| legendre_table(degree, n, t)).collect::<Result<_>>()?;
        let coeffs = (0..=degree)
            .map(|l| {
                let terms: Vec<f64> =
                    tables.iter().zip(rule.weights()).zip(values).map(|((p, &w), &v)| w * v * p[l]).collect();
                dim_harmonics_f64(l, n) * pairwise_sum(&terms) / mass
            })
            .collect();
        Self::expansion(n, coeffs)
    }

    /// Moves the pole; evaluation depends on ξ only through ξ·η₀.
    pub fn with_pole(mut self, pole: SpherePoint) -> Result<Self> {
        if pole.dim() != self.dim {
            return Err(Error::contract(format!("pole in R^{} for a profile on R^{}", pole.dim(), self.dim)));
        }
        self.pole = pole;
        Ok(self)
    }

    pub fn dim(&self) -> AmbientDim {
        self.dim
    }

    pub fn pole(&self) -> &SpherePoint {
        &self.pole
    }

    pub fn kind(&self) -> &ProfileKind {
        &self.kind
    }

    /// Degree of φ when it is a polynomial.
    pub fn polynomial_degree(&self) -> Option<usize> {
        match &self.kind {
            ProfileKind::Constant(_) => Some(0),
            ProfileKind::Legendre(l) => Some(*l),
            ProfileKind::Expansion(c) => Some(c.len().saturating_sub(1)),
            ProfileKind::Gegenbauer(_) | ProfileKind::Custom(_) => None,
        }
    }

    /// φ(t), for t ∈ [-1, 1].
    pub fn eval(&self, t: f64) -> f64 {
        let n = self.dim.get();
        match &self.kind {
            ProfileKind::Constant(c) => *c,
            ProfileKind::Legendre(l) => recurrence_value(*l, n, t),
            ProfileKind::Gegenbauer(r) => poisson_core(n, *r, t) * self.inv_area,
            ProfileKind::Expansion(c) => {
                let nf = n as f64;
                let (mut prev, mut cur) = (1.0, t);
                let mut acc = c.first().copied().unwrap_or(0.0);
                for (l, cl) in c.iter().enumerate().skip(1) {
                    if l > 1 {
                        let kf = (l - 1) as f64;
                        let next = ((2.0 * kf + nf - 2.0) * t * cur - kf * prev) / (kf + nf - 2.0);
                        prev = cur;
                        cur = next;
                    }
                    acc += cl * cur;
                }
                acc
            }
            ProfileKind::Custom(phi) => phi(t),
        }
    }

    /// φ(ξ·η₀).
    pub fn eval_point(&self, xi: &SpherePoint) -> Result<f64> {
        if xi.dim() != self.dim {
            return Err(Error::contract(format!("point in R^{} for a profile on R^{}", xi.dim(), self.dim)));
        }
        Ok(self.eval(xi.dot(&self.pole).clamp(-1.0, 1.0)))
    }

    /// Samples ξ ↦ φ(ξ·η₀) on a grid; polynomial profiles carry their degree
    /// as band limit.
    pub fn sample(&self, grid: Arc<SphereGrid>) -> Result<SampledFunction> {
        if grid.dim() != self.dim {
            return Err(Error::contract(format!(
                "profile on R^{} sampled on a grid for S^{}",
                self.dim,
                grid.dim().sphere_dim()
            )));
        }
        let pole = self.pole.coords().to_vec();
        let f = SampledFunction::from_fn(grid, |x| self.eval(dot(x, &pole).clamp(-1.0, 1.0)));
        Ok(match self.polynomial_degree() {
            Some(d) => f.with_band_limit(d),
            None => f,
        })
    }
}

/// `ξ ↦ ∫ f(η) conj(φ(ξ·η)) dS(η)` by quadrature on the grid of `f`.
///
/// The pole of `h` plays no role. The result keeps the declared band limit
/// of `f`, since convolution with a zonal kernel cannot raise it.
pub fn zonal_convolve(f: &SampledFunction, h: &ZonalProfile) -> Result<SampledFunction> {
    check_profile_grid(f, h)?;
    let values = convolve_values(f, h, f.grid().coords());
    let kind = f.kind();
    Ok(SampledFunction::from_parts(f.grid().clone(), values, kind, f.band_limit()))
}

pub fn zonal_convolve_at(f: &SampledFunction, h: &ZonalProfile, points: &[SpherePoint]) -> Result<Vec<Complex64>> {
    check_profile_grid(f, h)?;
    let targets = target_coords(points, f.grid().dim())?;
    Ok(convolve_values(f, h, &targets))
}

fn check_profile_grid(f: &SampledFunction, h: &ZonalProfile) -> Result<()> {
    if f.grid().dim() != h.dim() {
        return Err(Error::contract(format!(
            "profile on R^{} convolved with samples on S^{}",
            h.dim(),
            f.grid().dim().sphere_dim()
        )));
    }
    Ok(())
}

fn convolve_values(f: &SampledFunction, h: &ZonalProfile, targets: &[f64]) -> Vec<Complex64> {
    let mut out = pair_sums(f, targets, 1, |t, k| k[0] = h.eval(t));
    out.pop().expect("one output")
}

/// The measured Funk–Hecke multiplier of a profile next to the closed-form
/// coefficient √(Γ(l+N-2)(2l+N-2)/(l! Γ(N-1))) proposed for it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvolutionFactor {
    pub degree: usize,
    pub multiplier: f64,
    pub claimed_factor: f64,
}

/// `|S^(N-2)| ∫ φ(t) P_{l,N}(t) (1-t²)^((N-3)/2) dt`, the eigenvalue of
/// [`zonal_convolve`] on degree-l harmonics.
///
/// Polynomial profiles are integrated exactly by a Gauss–Gegenbauer rule; all
/// others by the graded zonal integrator.
pub fn convolution_spectrum(h: &ZonalProfile, l: usize) -> Result<ConvolutionFactor> {
    let n = h.dim();
    let nn = n.get();
    let slice_area = sphere_area(nn - 1);
    let integral = match h.polynomial_degree() {
        Some(d) => {
            let rule = gauss_gegenbauer_rule(order_for_degree(d + l), (nn as f64 - 3.0) / 2.0)?;
            rule.integrate(|t| h.eval(t) * recurrence_value(l, nn, t))
        }
        None => integrate_zonal(n, |t| h.eval(t) * recurrence_value(l, nn, t)),
    };
    Ok(ConvolutionFactor { degree: l, multiplier: slice_area * integral, claimed_factor: claimed_factor(l, n)? })
}

/// √(Γ(l+N-2)(2l+N-2)/(l! Γ(N-1))); at l = 0 on the circle the removable
/// singularity Γ(0)·0 takes its limit 1.
pub fn claimed_factor(l: usize, n: AmbientDim) -> Result<f64> {
    let nn = n.get();
    if l + nn == 2 {
        return Ok(1.0);
    }
    let lf = l as f64;
    let nf = nn as f64;
    let log_ratio = ln_gamma(lf + nf - 2.0)? - ln_gamma(lf + 1.0)? - ln_gamma(nf - 1.0)?;
    Ok((log_ratio.exp() * (2.0 * lf + nf - 2.0)).sqrt())
}
