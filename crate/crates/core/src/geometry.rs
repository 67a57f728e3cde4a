//! Ambient-dimension bookkeeping for the unit sphere S^(N-1) in R^N.
//!
//! Throughout the crate `N` is the ambient dimension, so the sphere has
//! intrinsic dimension `N - 1`. Hyperspherical angles follow the chart
//!
//! ```text
//! x_1 = cos θ_1
//! x_2 = sin θ_1 cos θ_2
//! ...
//! x_{N-1} = sin θ_1 ... sin θ_{N-2} cos θ_{N-1}
//! x_N     = sin θ_1 ... sin θ_{N-2} sin θ_{N-1}
//! ```
//!
//! with θ_1..θ_{N-2} in [0, π] and θ_{N-1} in [0, 2π).
//!
//! The polar volume element `dV_N = |x|^(N-1) d|x| dS_{N-1}` is the only other
//! identity used implicitly: functions on the sphere are extended radially.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Tolerance for accepting a caller-supplied vector as a unit vector.
pub const UNIT_NORM_TOLERANCE: f64 = 1e-9;

/// Tolerance on `RᵀR - I` for accepting a matrix as orthogonal.
pub const ORTHOGONALITY_TOLERANCE: f64 = 1e-10;

/// Ambient dimension `N` of R^N containing S^(N-1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AmbientDim(usize);

impl AmbientDim {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain(format!("ambient dimension must be >= 2, got {n}")));
        }
        Ok(AmbientDim(n))
    }

    #[inline]
    pub fn get(self) -> usize {
        self.0
    }

    /// Intrinsic dimension of the sphere, `N - 1`.
    #[inline]
    pub fn sphere_dim(self) -> usize {
        self.0 - 1
    }
}

impl std::fmt::Display for AmbientDim {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

// ---------------------------------------------------------------------------
// Gamma function
// ---------------------------------------------------------------------------

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Largest argument whose Gamma value is representable as a finite `f64`.
pub const GAMMA_MAX_ARG: f64 = 171.624_376_956_302_7;

const SQRT_2PI: f64 = 2.506_628_274_631_000_7;
const SQRT_PI: f64 = 1.772_453_850_905_516;

fn lanczos_sum(z: f64) -> f64 {
    // z = s - 1
    let mut acc = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    acc
}

/// Lanczos evaluation for `s >= 0.5`.
fn gamma_lanczos(s: f64) -> f64 {
    let z = s - 1.0;
    let t = z + LANCZOS_G + 0.5;
    // split the power so t^(s-1/2) never overflows before the exp(-t) factor
    let half = t.powf(0.5 * (z + 0.5));
    SQRT_2PI * lanczos_sum(z) * half * (half * (-t).exp())
}

/// Exact-product fast path for integers and half-integers.
fn gamma_fast_path(s: f64) -> Option<f64> {
    if s > GAMMA_MAX_ARG {
        return None;
    }
    if s.fract() == 0.0 {
        let n = s as u64;
        let mut acc = 1.0;
        for k in 2..n {
            acc *= k as f64;
        }
        return Some(acc);
    }
    if (s - 0.5).fract() == 0.0 {
        // Γ(n + 1/2) = √π · Π_{k=1..n} (k - 1/2)
        let n = (s - 0.5) as u64;
        let mut acc = SQRT_PI;
        for k in 1..=n {
            acc *= k as f64 - 0.5;
        }
        return Some(acc);
    }
    None
}

/// Euler Gamma function for positive real arguments.
///
/// Integers and half-integers use exact factorial products; other arguments
/// use a Lanczos approximation (with reflection below 1/2).
pub fn gamma_fn(s: f64) -> Result<f64> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::domain(format!("gamma requires a positive finite argument, got {s}")));
    }
    if s > GAMMA_MAX_ARG {
        return Err(Error::capability(format!(
            "gamma({s}) overflows f64; use ln_gamma for arguments above {GAMMA_MAX_ARG}"
        )));
    }
    if let Some(v) = gamma_fast_path(s) {
        return Ok(v);
    }
    if s < 0.5 {
        Ok(PI / ((PI * s).sin() * gamma_lanczos(1.0 - s)))
    } else {
        Ok(gamma_lanczos(s))
    }
}

/// Natural logarithm of Γ(s) for s > 0.
pub fn ln_gamma(s: f64) -> Result<f64> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::domain(format!("ln_gamma requires a positive finite argument, got {s}")));
    }
    if s < 100.0 {
        return Ok(gamma_fn(s)?.ln());
    }
    let z = s - 1.0;
    let t = z + LANCZOS_G + 0.5;
    Ok(0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + lanczos_sum(z).ln())
}

/// Γ(a) / Γ(b) for positive a, b, computed without overflow.
pub fn gamma_ratio(a: f64, b: f64) -> Result<f64> {
    if a <= GAMMA_MAX_ARG && b <= GAMMA_MAX_ARG {
        Ok(gamma_fn(a)? / gamma_fn(b)?)
    } else {
        Ok((ln_gamma(a)? - ln_gamma(b)?).exp())
    }
}

/// A computed Gamma value paired with its argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaValue {
    pub s: f64,
    pub value: f64,
}

impl GammaValue {
    pub fn new(s: f64) -> Result<Self> {
        Ok(GammaValue { s, value: gamma_fn(s)? })
    }
}

// ---------------------------------------------------------------------------
// Surface areas
// ---------------------------------------------------------------------------

/// |S^(n-1)| for any n >= 1 (|S^0| = 2 counts the two points of the 0-sphere).
pub(crate) fn sphere_area(n: usize) -> f64 {
    debug_assert!(n >= 1);
    let half = n as f64 / 2.0;
    2.0 * PI.powf(half) / gamma_fn(half).expect("positive half-integer")
}

/// |S^(N-1)| = 2 π^(N/2) / Γ(N/2).
pub fn surface_area(n: AmbientDim) -> f64 {
    sphere_area(n.get())
}

/// |S^(N-1)| obtained by walking the slice recursion
/// |S^(k-1)| = √π Γ((k-1)/2) / Γ(k/2) · |S^(k-2)| up from the circle.
pub fn surface_area_recursive(n: AmbientDim) -> f64 {
    let mut area = 2.0 * PI;
    for k in 3..=n.get() {
        area *= slice_factor(k);
    }
    area
}

/// ∫_{-1}^{1} (1-t²)^((k-3)/2) dt = √π Γ((k-1)/2) / Γ(k/2), the ratio |S^(k-1)| / |S^(k-2)|.
pub(crate) fn slice_factor(k: usize) -> f64 {
    SQRT_PI * gamma_ratio((k as f64 - 1.0) / 2.0, k as f64 / 2.0).expect("positive arguments")
}

/// |S^(N-2)| / |S^(N-1)|.
pub fn area_ratio(n: AmbientDim) -> f64 {
    1.0 / slice_factor(n.get())
}

// ---------------------------------------------------------------------------
// Points and coordinates
// ---------------------------------------------------------------------------

/// A unit vector in R^N, optionally carrying its hyperspherical angles.
#[derive(Debug, Clone, PartialEq)]
pub struct SpherePoint {
    coords: Vec<f64>,
    angles: Option<Vec<f64>>,
}

impl SpherePoint {
    /// Accepts `coords` if its norm is within [`UNIT_NORM_TOLERANCE`] of one,
    /// then rescales it to unit length.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::domain(format!("sphere points need at least 2 coordinates, got {}", coords.len())));
        }
        let norm = euclidean_norm(&coords);
        if !norm.is_finite() || (norm - 1.0).abs() > UNIT_NORM_TOLERANCE {
            return Err(Error::domain(format!("not a unit vector: norm = {norm}")));
        }
        Ok(Self::from_unit_unchecked(coords.into_iter().map(|x| x / norm).collect()))
    }

    /// Projects any nonzero vector onto the sphere.
    pub fn normalized(coords: Vec<f64>) -> Result<Self> {
        let norm = euclidean_norm(&coords);
        if coords.len() < 2 || !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::domain("cannot normalize a zero or non-finite vector"));
        }
        Ok(Self::from_unit_unchecked(coords.into_iter().map(|x| x / norm).collect()))
    }

    pub(crate) fn from_unit_unchecked(coords: Vec<f64>) -> Self {
        SpherePoint { coords, angles: None }
    }

    /// The `k`-th basis vector e_k (1-based, matching the coordinate chart).
    pub fn basis(n: AmbientDim, k: usize) -> Result<Self> {
        if k == 0 || k > n.get() {
            return Err(Error::domain(format!("basis index {k} outside 1..={n}")));
        }
        let mut coords = vec![0.0; n.get()];
        coords[k - 1] = 1.0;
        Ok(Self::from_unit_unchecked(coords))
    }

    /// The "north pole" e_N used by the slice decomposition.
    pub fn north_pole(n: AmbientDim) -> Self {
        Self::basis(n, n.get()).expect("N is a valid index")
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn angles(&self) -> Option<&[f64]> {
        self.angles.as_deref()
    }

    pub fn dim(&self) -> AmbientDim {
        AmbientDim(self.coords.len())
    }

    pub fn dot(&self, other: &SpherePoint) -> f64 {
        dot(&self.coords, &other.coords)
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub(crate) fn euclidean_norm(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

/// Maps hyperspherical angles (θ_1, ..., θ_{N-1}) to Cartesian coordinates.
pub fn angles_to_cartesian(angles: &[f64], n: AmbientDim) -> Result<SpherePoint> {
    let n = n.get();
    if angles.len() != n - 1 {
        return Err(Error::domain(format!(
            "expected {} angles for ambient dimension {n}, got {}",
            n - 1,
            angles.len()
        )));
    }
    for (k, &a) in angles.iter().enumerate() {
        let last = k == n - 2;
        let ok = if last { (0.0..2.0 * PI).contains(&a) } else { (0.0..=PI).contains(&a) };
        if !ok {
            let range = if last { "[0, 2π)" } else { "[0, π]" };
            return Err(Error::domain(format!("angle θ_{} = {a} outside {range}", k + 1)));
        }
    }
    let mut coords = Vec::with_capacity(n);
    let mut sin_prod = 1.0;
    for &a in &angles[..n - 1] {
        coords.push(sin_prod * a.cos());
        sin_prod *= a.sin();
    }
    coords.push(sin_prod);
    Ok(SpherePoint { coords, angles: Some(angles.to_vec()) })
}

/// Inverse of [`angles_to_cartesian`].
///
/// When a tail of the coordinate vector vanishes (sin θ_k = 0) the remaining
/// angles are set to 0; θ_k itself is then 0 or π.
pub fn cartesian_to_angles(p: &SpherePoint) -> Result<Vec<f64>> {
    angles_of(p.coords())
}

pub(crate) fn angles_of(x: &[f64]) -> Result<Vec<f64>> {
    let n = x.len();
    if n < 2 {
        return Err(Error::domain("need at least two coordinates"));
    }
    let norm = euclidean_norm(x);
    if (norm - 1.0).abs() > UNIT_NORM_TOLERANCE {
        return Err(Error::domain(format!("not a unit vector: norm = {norm}")));
    }
    // tails[k] = ‖(x_k, ..., x_N)‖ (0-based)
    let mut tails = vec![0.0f64; n + 1];
    for k in (0..n).rev() {
        tails[k] = tails[k + 1].hypot(x[k]);
    }
    let mut angles = vec![0.0; n - 1];
    // once the tail vanishes, θ_k is 0 or π by the sign of x_k and later angles stay 0
    for k in 0..n - 2 {
        if tails[k] == 0.0 {
            break;
        }
        angles[k] = tails[k + 1].atan2(x[k]);
    }
    if tails[n - 2] != 0.0 {
        let mut phi = x[n - 1].atan2(x[n - 2]);
        if phi < 0.0 {
            phi += 2.0 * PI;
        }
        if phi >= 2.0 * PI {
            phi = 0.0;
        }
        angles[n - 2] = phi;
    }
    Ok(angles)
}

/// ξ = t·e_N + √(1-t²)·(ξ_sub, 0): lifts a point of S^(N-2) to S^(N-1).
pub fn lift_point(t: f64, xi_sub: &SpherePoint) -> Result<SpherePoint> {
    if !(-1.0..=1.0).contains(&t) {
        return Err(Error::domain(format!("lift height t = {t} outside [-1, 1]")));
    }
    Ok(SpherePoint::from_unit_unchecked(lift_coords(t, xi_sub.coords())))
}

pub(crate) fn lift_coords(t: f64, sub: &[f64]) -> Vec<f64> {
    let s = (1.0 - t * t).max(0.0).sqrt();
    let mut out = Vec::with_capacity(sub.len() + 1);
    out.extend(sub.iter().map(|x| s * x));
    out.push(t);
    out
}

/// Largest entry of |RᵀR - I|.
pub fn orthogonality_defect(r: &DMatrix<f64>) -> f64 {
    let gram = r.transpose() * r;
    let mut worst = 0.0_f64;
    for i in 0..gram.nrows() {
        for j in 0..gram.ncols() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((gram[(i, j)] - target).abs());
        }
    }
    worst
}

/// Applies an orthogonal matrix to a sphere point.
pub fn apply_rotation(r: &DMatrix<f64>, p: &SpherePoint) -> Result<SpherePoint> {
    let n = p.coords.len();
    if r.nrows() != n || r.ncols() != n {
        return Err(Error::domain(format!("rotation is {}x{} but the point lives in R^{n}", r.nrows(), r.ncols())));
    }
    let defect = orthogonality_defect(r);
    if defect > ORTHOGONALITY_TOLERANCE {
        return Err(Error::domain(format!("matrix is not orthogonal: max |RᵀR - I| = {defect:e}")));
    }
    Ok(SpherePoint::from_unit_unchecked(rotate_coords(r, &p.coords)))
}

pub(crate) fn rotate_coords(r: &DMatrix<f64>, x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut out: Vec<f64> = (0..n).map(|i| (0..n).map(|j| r[(i, j)] * x[j]).sum()).collect();
    let norm = euclidean_norm(&out);
    out.iter_mut().for_each(|v| *v /= norm);
    out
}

/// Rotation by `angle` in the (x_i, x_j) coordinate plane (0-based indices).
pub fn plane_rotation(n: AmbientDim, i: usize, j: usize, angle: f64) -> DMatrix<f64> {
    let mut r = DMatrix::identity(n.get(), n.get());
    let (s, c) = angle.sin_cos();
    r[(i, i)] = c;
    r[(j, j)] = c;
    r[(i, j)] = -s;
    r[(j, i)] = s;
    r
}

/// Uniformly distributed point on S^(N-1).
pub fn random_point<R: Rng + ?Sized>(n: AmbientDim, rng: &mut R) -> SpherePoint {
    loop {
        let v: Vec<f64> = (0..n.get()).map(|_| rng.sample(StandardNormal)).collect();
        if let Ok(p) = SpherePoint::normalized(v) {
            return p;
        }
    }
}

/// Haar-random element of SO(N) from the QR factorization of a Gaussian matrix.
pub fn random_rotation<R: Rng + ?Sized>(n: AmbientDim, rng: &mut R) -> DMatrix<f64> {
    let n = n.get();
    let g = DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for k in 0..n {
        if r[(k, k)] < 0.0 {
            for i in 0..n {
                q[(i, k)] = -q[(i, k)];
            }
        }
    }
    if q.determinant() < 0.0 {
        for i in 0..n {
            q[(i, 0)] = -q[(i, 0)];
        }
    }
    q
}
