//! Gauss–Gegenbauer rules on [-1, 1], tensor-product grids on S^(N-1), and
//! the sampled-function representation used by the filtration operators.
//!
//! Grids follow the slice decomposition of the sphere measure,
//! `dS_{N-1}(t e_N + √(1-t²) ξ') = (1-t²)^((N-3)/2) dt dS_{N-2}(ξ')`,
//! applied recursively down to the circle, which is sampled uniformly.

use std::f64::consts::PI;
use std::sync::{Arc, OnceLock};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::geometry::{self, AmbientDim, SpherePoint};

/// ∫_{-1}^{1} (1-t²)^β dt = √π Γ(β+1) / Γ(β+3/2).
pub fn weight_mass(beta: f64) -> f64 {
    PI.sqrt() * geometry::gamma_ratio(beta + 1.0, beta + 1.5).expect("beta > -1")
}

/// A Gaussian rule for `∫_{-1}^{1} f(t) (1-t²)^β dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule1D {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    beta: f64,
}

impl QuadratureRule1D {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Highest polynomial degree integrated exactly.
    pub fn exact_degree(&self) -> usize {
        2 * self.nodes.len() - 1
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        let terms: Vec<f64> = self.nodes.iter().zip(&self.weights).map(|(&t, &w)| w * f(t)).collect();
        pairwise_sum(&terms)
    }

    pub fn integrate_complex<F: Fn(f64) -> Complex64>(&self, f: F) -> Complex64 {
        let terms: Vec<Complex64> = self.nodes.iter().zip(&self.weights).map(|(&t, &w)| f(t) * w).collect();
        pairwise_sum(&terms)
    }
}

/// Squared off-diagonal entry b_k of the monic recurrence for (1-t²)^β.
fn jacobi_offdiag_sq(k: usize, beta: f64) -> f64 {
    if k == 1 {
        return 1.0 / (2.0 * beta + 3.0);
    }
    let k = k as f64;
    k * (k + 2.0 * beta) / ((2.0 * k + 2.0 * beta + 1.0) * (2.0 * k + 2.0 * beta - 1.0))
}

/// Evaluates the orthonormal polynomials p̂_0..p̂_{m-1} at `x`, returning
/// (Σ p̂_k², q, q') where q is the unnormalized degree-m polynomial.
fn orthonormal_sweep(x: f64, sqrt_b: &[f64], mass: f64) -> (f64, f64, f64) {
    let m = sqrt_b.len() + 1;
    let mut p_prev = 0.0;
    let mut p = 1.0 / mass.sqrt();
    let mut dp_prev = 0.0;
    let mut dp = 0.0;
    let mut sum_sq = p * p;
    for k in 1..m {
        let s = sqrt_b[k - 1];
        let s_prev = if k >= 2 { sqrt_b[k - 2] } else { 0.0 };
        let next = (x * p - s_prev * p_prev) / s;
        let dnext = (p + x * dp - s_prev * dp_prev) / s;
        p_prev = p;
        p = next;
        dp_prev = dp;
        dp = dnext;
        sum_sq += p * p;
    }
    let s_last = if m >= 2 { sqrt_b[m - 2] } else { 0.0 };
    let q = x * p - s_last * p_prev;
    let dq = p + x * dp - s_last * dp_prev;
    (sum_sq, q, dq)
}

/// Gauss rule with `m` nodes for the weight (1-t²)^β (Golub–Welsch).
///
/// Nodes come from the eigenvalues of the symmetric Jacobi matrix and are
/// polished by Newton steps on the degree-m orthogonal polynomial; weights are
/// Christoffel numbers 1/Σ p̂_k(x)². The rule is symmetrized so that nodes are
/// exactly antisymmetric and weights exactly symmetric.
pub fn gauss_gegenbauer_rule(m: usize, beta: f64) -> Result<QuadratureRule1D> {
    if m == 0 {
        return Err(Error::domain("quadrature rule needs at least one node"));
    }
    if !(beta > -1.0) || !beta.is_finite() {
        return Err(Error::domain(format!("weight exponent must exceed -1, got {beta}")));
    }
    let mass = weight_mass(beta);
    if m == 1 {
        return Ok(QuadratureRule1D { nodes: vec![0.0], weights: vec![mass], beta });
    }
    let sqrt_b: Vec<f64> = (1..m).map(|k| jacobi_offdiag_sq(k, beta).sqrt()).collect();
    let mut jacobi = DMatrix::<f64>::zeros(m, m);
    for (k, &s) in sqrt_b.iter().enumerate() {
        jacobi[(k, k + 1)] = s;
        jacobi[(k + 1, k)] = s;
    }
    let eig = SymmetricEigen::try_new(jacobi, 1e-15, 10_000).ok_or_else(|| {
        Error::Internal(format!("Jacobi-matrix eigen-solve did not converge (m = {m}, beta = {beta})"))
    })?;
    let mut nodes: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    nodes.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));

    let mut weights = Vec::with_capacity(m);
    for x in nodes.iter_mut() {
        let mut residual = f64::INFINITY;
        for _ in 0..8 {
            let (_, q, dq) = orthonormal_sweep(*x, &sqrt_b, mass);
            let step = q / dq;
            *x -= step;
            residual = step.abs();
            if residual <= 1e-16 {
                break;
            }
        }
        if !(residual <= 1e-14) || !x.is_finite() {
            return Err(Error::Internal(format!(
                "Newton polish stalled at node {x} (m = {m}, beta = {beta}, last step {residual:e})"
            )));
        }
        let (sum_sq, _, _) = orthonormal_sweep(*x, &sqrt_b, mass);
        weights.push(1.0 / sum_sq);
    }

    for i in 0..m / 2 {
        let j = m - 1 - i;
        let x = 0.5 * (nodes[j] - nodes[i]);
        let w = 0.5 * (weights[i] + weights[j]);
        nodes[i] = -x;
        nodes[j] = x;
        weights[i] = w;
        weights[j] = w;
    }
    if m % 2 == 1 {
        nodes[m / 2] = 0.0;
    }
    if nodes.windows(2).any(|w| w[0] >= w[1]) || weights.iter().any(|&w| !(w > 0.0)) {
        return Err(Error::Internal(format!("degenerate rule for m = {m}, beta = {beta}")));
    }
    Ok(QuadratureRule1D { nodes, weights, beta })
}

fn gauss_legendre_24() -> &'static QuadratureRule1D {
    static RULE: OnceLock<QuadratureRule1D> = OnceLock::new();
    RULE.get_or_init(|| gauss_gegenbauer_rule(24, 0.0).expect("Gauss-Legendre rule"))
}

/// `∫_{-1}^{1} φ(t) (1-t²)^((N-3)/2) dt`, the slice integral of a zonal function.
///
/// Substitutes t = cos θ and applies a 24-point Gauss–Legendre rule on panels
/// graded geometrically toward both poles, so sharply peaked profiles such as
/// the filtration kernel at r → 1 are resolved.
pub fn integrate_zonal<F: Fn(f64) -> f64>(n: AmbientDim, phi: F) -> f64 {
    const LEVELS: i32 = 44;
    let mut breaks = Vec::with_capacity(2 * LEVELS as usize + 4);
    breaks.push(0.0);
    for k in (0..=LEVELS).rev() {
        breaks.push(0.5 * PI * 2f64.powi(-k));
    }
    for k in 1..=LEVELS {
        breaks.push(PI - 0.5 * PI * 2f64.powi(-k));
    }
    breaks.push(PI);

    let rule = gauss_legendre_24();
    let power = n.get() as i32 - 2;
    let mut panels = Vec::with_capacity(breaks.len());
    for w in breaks.windows(2) {
        let (a, b) = (w[0], w[1]);
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        let terms: Vec<f64> = rule
            .nodes()
            .iter()
            .zip(rule.weights())
            .map(|(&x, &wt)| {
                let theta = mid + half * x;
                wt * phi(theta.cos()) * theta.sin().powi(power)
            })
            .collect();
        panels.push(half * pairwise_sum(&terms));
    }
    pairwise_sum(&panels)
}

// ---------------------------------------------------------------------------
// Summation
// ---------------------------------------------------------------------------

/// Deterministic pairwise summation.
pub fn pairwise_sum<T>(xs: &[T]) -> T
where
    T: Copy + Default + std::ops::Add<Output = T>,
{
    const BLOCK: usize = 32;
    if xs.len() <= BLOCK {
        return xs.iter().fold(T::default(), |acc, &x| acc + x);
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

// ---------------------------------------------------------------------------
// Sphere grids
// ---------------------------------------------------------------------------

/// Tensor-product quadrature grid on S^(N-1).
///
/// Points are stored row-major. Ordering is lexicographic in the level
/// indices with the outermost slice height varying slowest and the circle
/// azimuth fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereGrid {
    dim: AmbientDim,
    base_order: usize,
    orders: Vec<usize>,
    coords: Vec<f64>,
    weights: Vec<f64>,
    guaranteed_degree: usize,
    checksum: String,
}

/// Builds the product grid with base order `m`: 2m azimuth nodes on the
/// circle and an m-node Gauss–Gegenbauer rule for each further slice.
/// Integrates polynomials of total degree ≤ 2m - 1 exactly.
pub fn sphere_grid(n: AmbientDim, m: usize) -> Result<SphereGrid> {
    if m == 0 {
        return Err(Error::domain("grid base order must be >= 1"));
    }
    let az = 2 * m;
    let mut coords = Vec::with_capacity(2 * az);
    let mut weights = Vec::with_capacity(az);
    for k in 0..az {
        let phi = PI * k as f64 / m as f64;
        coords.push(phi.cos());
        coords.push(phi.sin());
        weights.push(PI / m as f64);
    }
    let mut orders = vec![az];
    for d in 3..=n.get() {
        let rule = gauss_gegenbauer_rule(m, (d as f64 - 3.0) / 2.0)?;
        let sub_len = weights.len();
        let mut next_coords = Vec::with_capacity(coords.len() / (d - 1) * d * m);
        let mut next_weights = Vec::with_capacity(sub_len * m);
        for (&t, &wt) in rule.nodes().iter().zip(rule.weights()) {
            for (sub, &ws) in coords.chunks_exact(d - 1).zip(&weights) {
                next_coords.extend(geometry::lift_coords(t, sub));
                next_weights.push(wt * ws);
            }
        }
        coords = next_coords;
        weights = next_weights;
        orders.push(m);
    }
    Ok(SphereGrid::assemble(n, m, orders, coords, weights, 2 * m - 1))
}

/// Smallest base order whose grid integrates degree `degree` exactly.
pub fn order_for_degree(degree: usize) -> usize {
    degree / 2 + 1
}

impl SphereGrid {
    fn assemble(
        dim: AmbientDim,
        base_order: usize,
        orders: Vec<usize>,
        coords: Vec<f64>,
        weights: Vec<f64>,
        guaranteed_degree: usize,
    ) -> Self {
        let checksum = grid_checksum(dim, &orders, guaranteed_degree, &coords, &weights);
        SphereGrid { dim, base_order, orders, coords, weights, guaranteed_degree, checksum }
    }

    /// Rebuilds a grid from stored rows, validating the structural invariants.
    pub fn from_parts(
        dim: AmbientDim,
        base_order: usize,
        orders: Vec<usize>,
        guaranteed_degree: usize,
        coords: Vec<f64>,
        weights: Vec<f64>,
    ) -> Result<Self> {
        let n = dim.get();
        if orders.len() != n - 1 {
            return Err(Error::integrity(format!("expected {} level orders for N = {n}, got {}", n - 1, orders.len())));
        }
        let count: usize = orders.iter().product();
        if weights.len() != count || coords.len() != count * n {
            return Err(Error::integrity(format!(
                "grid has {} weights and {} coordinates; level orders imply {count} points",
                weights.len(),
                coords.len()
            )));
        }
        for (i, row) in coords.chunks_exact(n).enumerate() {
            let norm = geometry::euclidean_norm(row);
            if (norm - 1.0).abs() > geometry::UNIT_NORM_TOLERANCE {
                return Err(Error::integrity(format!("grid point {i} is not a unit vector")));
            }
        }
        if weights.iter().any(|&w| !(w > 0.0)) {
            return Err(Error::integrity("grid weights must be positive"));
        }
        let grid = Self::assemble(dim, base_order, orders, coords, weights, guaranteed_degree);
        let area = geometry::surface_area(dim);
        let rel = (grid.total_weight() - area).abs() / area;
        if rel > 1e-10 {
            return Err(Error::integrity(format!(
                "grid weights sum to {} but |S^{}| = {area} (relative deviation {rel:e})",
                grid.total_weight(),
                n - 1
            )));
        }
        Ok(grid)
    }

    pub fn dim(&self) -> AmbientDim {
        self.dim
    }

    pub fn base_order(&self) -> usize {
        self.base_order
    }

    /// Per-level 1D orders, circle first.
    pub fn orders(&self) -> &[usize] {
        &self.orders
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn guaranteed_degree(&self) -> usize {
        self.guaranteed_degree
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Row-major coordinates, `len() * N` entries.
    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn point_coords(&self, i: usize) -> &[f64] {
        let n = self.dim.get();
        &self.coords[i * n..(i + 1) * n]
    }

    pub fn point(&self, i: usize) -> SpherePoint {
        SpherePoint::from_unit_unchecked(self.point_coords(i).to_vec())
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim.get())
    }

    pub fn total_weight(&self) -> f64 {
        pairwise_sum(&self.weights)
    }

    /// Hex SHA-256 over the dimension, level orders, and the bit patterns of
    /// every coordinate and weight.
    pub fn checksum(&self) -> &str {
        &self.checksum
    }

    pub fn same_as(&self, other: &SphereGrid) -> bool {
        std::ptr::eq(self, other) || self.checksum == other.checksum
    }
}

fn grid_checksum(
    dim: AmbientDim,
    orders: &[usize],
    guaranteed_degree: usize,
    coords: &[f64],
    weights: &[f64],
) -> String {
    let mut h = Sha256::new();
    h.update(b"hyperfilt-grid-v1");
    h.update((dim.get() as u64).to_le_bytes());
    h.update((orders.len() as u64).to_le_bytes());
    for &o in orders {
        h.update((o as u64).to_le_bytes());
    }
    h.update((guaranteed_degree as u64).to_le_bytes());
    for &x in coords {
        h.update(x.to_bits().to_le_bytes());
    }
    for &w in weights {
        h.update(w.to_bits().to_le_bytes());
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

// ---------------------------------------------------------------------------
// Sampled functions
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValueKind {
    Real,
    Complex,
}

/// Values of a function at the points of a [`SphereGrid`].
///
/// The band limit is declared by whoever constructs the samples; operations
/// that need one and find none fall back to [`SampledFunction::effective_band`].
#[derive(Debug, Clone)]
pub struct SampledFunction {
    grid: Arc<SphereGrid>,
    values: Vec<Complex64>,
    kind: ValueKind,
    band_limit: Option<usize>,
}

impl SampledFunction {
    pub fn new_real(grid: Arc<SphereGrid>, values: Vec<f64>) -> Result<Self> {
        Self::check_len(&grid, values.len())?;
        let values = values.into_iter().map(|v| Complex64::new(v, 0.0)).collect();
        Ok(SampledFunction { grid, values, kind: ValueKind::Real, band_limit: None })
    }

    pub fn new_complex(grid: Arc<SphereGrid>, values: Vec<Complex64>) -> Result<Self> {
        Self::check_len(&grid, values.len())?;
        Ok(SampledFunction { grid, values, kind: ValueKind::Complex, band_limit: None })
    }

    pub(crate) fn from_parts(
        grid: Arc<SphereGrid>,
        values: Vec<Complex64>,
        kind: ValueKind,
        band_limit: Option<usize>,
    ) -> Self {
        debug_assert_eq!(grid.len(), values.len());
        let values = match kind {
            ValueKind::Real => values.into_iter().map(|v| Complex64::new(v.re, 0.0)).collect(),
            ValueKind::Complex => values,
        };
        SampledFunction { grid, values, kind, band_limit }
    }

    /// Samples a real function of the Cartesian coordinates.
    pub fn from_fn<F: Fn(&[f64]) -> f64>(grid: Arc<SphereGrid>, f: F) -> Self {
        let values = grid.points().map(|x| Complex64::new(f(x), 0.0)).collect();
        SampledFunction { grid, values, kind: ValueKind::Real, band_limit: None }
    }

    pub fn from_fn_complex<F: Fn(&[f64]) -> Complex64>(grid: Arc<SphereGrid>, f: F) -> Self {
        let values = grid.points().map(f).collect();
        SampledFunction { grid, values, kind: ValueKind::Complex, band_limit: None }
    }

    pub fn constant(grid: Arc<SphereGrid>, c: f64) -> Self {
        Self::from_fn(grid, |_| c).with_band_limit(0)
    }

    fn check_len(grid: &SphereGrid, len: usize) -> Result<()> {
        if len != grid.len() {
            return Err(Error::contract(format!("{len} values supplied for a grid of {} points", grid.len())));
        }
        Ok(())
    }

    /// Declares that all harmonic components above degree `band` vanish.
    pub fn with_band_limit(mut self, band: usize) -> Self {
        self.band_limit = Some(band);
        self
    }

    pub fn band_limit(&self) -> Option<usize> {
        self.band_limit
    }

    /// The declared band limit, or half the grid's exact degree when none was
    /// declared (the largest band whose pairwise products the grid resolves).
    pub fn effective_band(&self) -> usize {
        self.band_limit.unwrap_or(self.grid.guaranteed_degree() / 2)
    }

    pub fn grid(&self) -> &Arc<SphereGrid> {
        &self.grid
    }

    pub fn kind(&self) -> ValueKind {
        self.kind
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn real_values(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Largest |f(ξ_i) - g(ξ_i)| over the grid.
    pub fn max_abs_diff(&self, other: &SampledFunction) -> Result<f64> {
        ensure_same_grid(self, other)?;
        Ok(self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, c: f64) -> SampledFunction {
        let values = self.values.iter().map(|v| v * c).collect();
        SampledFunction { values, ..self.clone() }
    }

    /// Pointwise sum; the band limit is the larger of the two when both are declared.
    pub fn add(&self, other: &SampledFunction) -> Result<SampledFunction> {
        ensure_same_grid(self, other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        let kind = if self.kind == ValueKind::Real && other.kind == ValueKind::Real {
            ValueKind::Real
        } else {
            ValueKind::Complex
        };
        let band_limit = match (self.band_limit, other.band_limit) {
            (Some(a), Some(b)) => Some(a.max(b)),
            _ => None,
        };
        Ok(SampledFunction { grid: self.grid.clone(), values, kind, band_limit })
    }
}

pub(crate) fn ensure_same_grid(f: &SampledFunction, g: &SampledFunction) -> Result<()> {
    if !f.grid.same_as(&g.grid) {
        return Err(Error::contract(format!(
            "functions live on different grids ({} vs {})",
            &f.grid.checksum()[..12],
            &g.grid.checksum()[..12]
        )));
    }
    if f.values.len() != g.values.len() {
        return Err(Error::contract("sample vectors have different lengths"));
    }
    Ok(())
}

/// Σ_i w_i f(ξ_i).
pub fn integrate_sphere(f: &SampledFunction) -> Complex64 {
    let terms: Vec<Complex64> = f.values.iter().zip(f.grid.weights()).map(|(v, &w)| v * w).collect();
    pairwise_sum(&terms)
}

/// ⟨f, g⟩ = Σ_i w_i f(ξ_i) conj(g(ξ_i)).
pub fn inner_product(f: &SampledFunction, g: &SampledFunction) -> Result<Complex64> {
    ensure_same_grid(f, g)?;
    let terms: Vec<Complex64> =
        f.values.iter().zip(&g.values).zip(f.grid.weights()).map(|((a, b), &w)| a * b.conj() * w).collect();
    Ok(pairwise_sum(&terms))
}

/// L² norm √⟨f, f⟩.
pub fn l2_norm(f: &SampledFunction) -> f64 {
    let terms: Vec<f64> = f.values.iter().zip(f.grid.weights()).map(|(v, &w)| v.norm_sqr() * w).collect();
    pairwise_sum(&terms).max(0.0).sqrt()
}
