//! Python bindings for hyperfilt.
//!
//! Grids and sampled functions are wrapped as immutable classes; every
//! operation returns a new object. Heavy work runs with the GIL released.

use std::path::PathBuf;
use std::sync::Arc;

use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyOSError, PyValueError};
use pyo3::prelude::*;

use hyperfilt::checks::{run_checks as run_suite, Suite};
use hyperfilt::filtration::{self as filt, ZonalProfile};
use hyperfilt::polynomials::{self as poly, GegenbauerParams, LegendreMethod, LegendreParams};
use hyperfilt::quadrature::{self as quad, SampledFunction};
use hyperfilt::{io, AmbientDim, Error, SpherePoint};

create_exception!(hyperfilt, HyperfiltError, PyException, "Base class of errors raised by hyperfilt.");
create_exception!(hyperfilt, DomainError, HyperfiltError, "Argument outside the domain of an operation.");
create_exception!(hyperfilt, CapabilityError, HyperfiltError, "Request exceeds what the grid or guards can resolve.");
create_exception!(hyperfilt, ContractError, HyperfiltError, "Inputs that do not fit together.");
create_exception!(hyperfilt, IntegrityError, HyperfiltError, "Checksum mismatch or malformed file.");

fn to_py(e: Error) -> PyErr {
    let msg = e.to_string();
    match e {
        Error::Domain(_) => DomainError::new_err(msg),
        Error::Capability(_) => CapabilityError::new_err(msg),
        Error::Contract(_) => ContractError::new_err(msg),
        Error::Integrity(_) => IntegrityError::new_err(msg),
        Error::Io(_) => PyOSError::new_err(msg),
        Error::Internal(_) => HyperfiltError::new_err(msg),
    }
}

fn lift<T>(r: hyperfilt::Result<T>) -> PyResult<T> {
    r.map_err(to_py)
}

fn dim(n: usize) -> PyResult<AmbientDim> {
    lift(AmbientDim::new(n))
}

/// Tensor-product quadrature grid on S^(N-1), exact to degree 2m - 1.
#[pyclass(name = "SphereGrid", module = "hyperfilt", frozen)]
struct PyGrid {
    inner: Arc<quad::SphereGrid>,
}

#[pymethods]
impl PyGrid {
    #[new]
    fn new(n: usize, order: usize) -> PyResult<Self> {
        Ok(Self { inner: Arc::new(lift(quad::sphere_grid(dim(n)?, order))?) })
    }

    /// Reads a grid manifest, verifying its checksum.
    #[staticmethod]
    fn load(path: PathBuf) -> PyResult<Self> {
        Ok(Self { inner: Arc::new(lift(io::read_manifest(&path))?) })
    }

    fn save(&self, path: PathBuf) -> PyResult<()> {
        lift(io::write_manifest(&self.inner, &path))
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim().get()
    }

    #[getter]
    fn base_order(&self) -> usize {
        self.inner.base_order()
    }

    #[getter]
    fn guaranteed_degree(&self) -> usize {
        self.inner.guaranteed_degree()
    }

    #[getter]
    fn checksum(&self) -> String {
        self.inner.checksum().to_string()
    }

    #[getter]
    fn weights(&self) -> Vec<f64> {
        self.inner.weights().to_vec()
    }

    #[getter]
    fn total_weight(&self) -> f64 {
        self.inner.total_weight()
    }

    /// Cartesian coordinates, one list per point.
    fn points(&self) -> Vec<Vec<f64>> {
        self.inner.points().map(|p| p.to_vec()).collect()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "SphereGrid(dim={}, base_order={}, points={}, checksum={})",
            self.inner.dim().get(),
            self.inner.base_order(),
            self.inner.len(),
            self.inner.checksum()
        )
    }
}

/// Values of a function at the nodes of a grid, optionally band-limited.
#[pyclass(name = "SampledFunction", module = "hyperfilt", frozen)]
struct PyFunction {
    inner: SampledFunction,
}

fn wrap(inner: SampledFunction) -> PyFunction {
    PyFunction { inner }
}

fn with_band(f: SampledFunction, band: Option<usize>) -> SampledFunction {
    match band {
        Some(b) => f.with_band_limit(b),
        None => f,
    }
}

#[pymethods]
impl PyFunction {
    /// Real values are kept real; anything else is read as complex.
    #[new]
    #[pyo3(signature = (grid, values, band=None))]
    fn new(grid: &PyGrid, values: &Bound<'_, PyAny>, band: Option<usize>) -> PyResult<Self> {
        let g = grid.inner.clone();
        let f = match values.extract::<Vec<f64>>() {
            Ok(v) => lift(SampledFunction::new_real(g, v))?,
            Err(_) => lift(SampledFunction::new_complex(g, values.extract::<Vec<Complex64>>()?))?,
        };
        Ok(wrap(with_band(f, band)))
    }

    /// Samples a Python callable taking a coordinate list.
    #[staticmethod]
    #[pyo3(signature = (grid, func, band=None))]
    fn from_function(grid: &PyGrid, func: &Bound<'_, PyAny>, band: Option<usize>) -> PyResult<Self> {
        let mut real = Vec::with_capacity(grid.inner.len());
        let mut complex = Vec::new();
        for x in grid.inner.points() {
            let v = func.call1((x.to_vec(),))?;
            match v.extract::<f64>() {
                Ok(r) if complex.is_empty() => real.push(r),
                _ => {
                    if complex.is_empty() {
                        complex.extend(real.drain(..).map(|r| Complex64::new(r, 0.0)));
                    }
                    complex.push(v.extract::<Complex64>()?);
                }
            }
        }
        let g = grid.inner.clone();
        let f = if complex.is_empty() {
            lift(SampledFunction::new_real(g, real))?
        } else {
            lift(SampledFunction::new_complex(g, complex))?
        };
        Ok(wrap(with_band(f, band)))
    }

    /// P_{l,N}(ξ·pole) on the grid; the pole defaults to e_N.
    #[staticmethod]
    #[pyo3(signature = (grid, l, pole=None))]
    fn zonal(grid: &PyGrid, l: usize, pole: Option<Vec<f64>>) -> PyResult<Self> {
        let mut h = ZonalProfile::legendre(grid.inner.dim(), l);
        if let Some(p) = pole {
            h = lift(h.with_pole(lift(SpherePoint::normalized(p))?))?;
        }
        Ok(wrap(lift(h.sample(grid.inner.clone()))?))
    }

    /// Reads values written against `grid`.
    #[staticmethod]
    fn load(grid: &PyGrid, path: PathBuf) -> PyResult<Self> {
        Ok(wrap(lift(io::read_values(&path, grid.inner.clone()))?))
    }

    fn save(&self, path: PathBuf) -> PyResult<()> {
        lift(io::write_values(&self.inner, &path))
    }

    #[getter]
    fn grid(&self) -> PyGrid {
        PyGrid { inner: self.inner.grid().clone() }
    }

    #[getter]
    fn is_complex(&self) -> bool {
        self.inner.kind() == quad::ValueKind::Complex
    }

    #[getter]
    fn band_limit(&self) -> Option<usize> {
        self.inner.band_limit()
    }

    #[getter]
    fn effective_band(&self) -> usize {
        self.inner.effective_band()
    }

    fn values(&self) -> Vec<Complex64> {
        self.inner.values().to_vec()
    }

    fn real_values(&self) -> Vec<f64> {
        self.inner.real_values()
    }

    fn l2_norm(&self) -> f64 {
        quad::l2_norm(&self.inner)
    }

    fn sup_norm(&self) -> f64 {
        self.inner.sup_norm()
    }

    fn integrate(&self) -> Complex64 {
        quad::integrate_sphere(&self.inner)
    }

    fn inner_product(&self, other: &PyFunction) -> PyResult<Complex64> {
        lift(quad::inner_product(&self.inner, &other.inner))
    }

    fn max_abs_diff(&self, other: &PyFunction) -> PyResult<f64> {
        lift(self.inner.max_abs_diff(&other.inner))
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        let band = self.inner.band_limit().map_or_else(|| "None".to_string(), |b| b.to_string());
        format!(
            "SampledFunction(points={}, complex={}, band={band})",
            self.inner.len(),
            self.inner.kind() == quad::ValueKind::Complex
        )
    }
}

#[pyfunction]
fn surface_area(n: usize) -> PyResult<f64> {
    Ok(hyperfilt::surface_area(dim(n)?))
}

#[pyfunction]
fn dim_harmonics(l: usize, n: usize) -> PyResult<u64> {
    lift(poly::dim_harmonics(l, dim(n)?))
}

/// P_{l,N}(t) by one of "explicit", "rodrigues", "integral", "recurrence".
#[pyfunction]
#[pyo3(signature = (l, n, t, method="recurrence"))]
fn eval_legendre(l: usize, n: usize, t: f64, method: &str) -> PyResult<f64> {
    let m: LegendreMethod = lift(method.parse())?;
    lift(m.evaluate(lift(LegendreParams::new(l, n))?, t))
}

#[pyfunction]
fn legendre_table(l_max: usize, n: usize, t: f64) -> PyResult<Vec<f64>> {
    lift(poly::legendre_table(l_max, dim(n)?, t))
}

#[pyfunction]
fn eval_gegenbauer(l: usize, alpha: f64, t: f64) -> PyResult<f64> {
    lift(poly::eval_gegenbauer(lift(GegenbauerParams::new(l, alpha))?, t))
}

/// Nodes and weights of the m-point rule for the weight (1-t²)^beta.
#[pyfunction]
fn gauss_gegenbauer_rule(m: usize, beta: f64) -> PyResult<(Vec<f64>, Vec<f64>)> {
    let rule = lift(quad::gauss_gegenbauer_rule(m, beta))?;
    Ok((rule.nodes().to_vec(), rule.weights().to_vec()))
}

/// (partial sum, closed form, truncation bound) of the generating series.
#[pyfunction]
fn poisson_generating_sum(r: f64, t: f64, n: usize, truncation: usize) -> PyResult<(f64, f64, f64)> {
    let g = lift(poly::poisson_generating_sum(r, t, dim(n)?, truncation))?;
    Ok((g.partial_sum, g.closed_form, g.bound))
}

#[pyfunction]
fn gegenbauer_kernel(n: usize, r: f64, t: f64) -> PyResult<f64> {
    lift(filt::gegenbauer_kernel(dim(n)?, r, t))
}

#[pyfunction]
fn kernel_normalization(n: usize, r: f64) -> PyResult<f64> {
    lift(filt::kernel_normalization(dim(n)?, r))
}

/// (passed, epsilons, sup of the kernel away from the pole per epsilon).
#[pyfunction]
#[pyo3(signature = (n, t0=0.0))]
fn kernel_limit_check(n: usize, t0: f64) -> PyResult<(bool, Vec<f64>, Vec<f64>)> {
    let rep = lift(filt::kernel_limit_check(dim(n)?, t0))?;
    Ok((rep.passed(), rep.epsilons.clone(), rep.sups.clone()))
}

#[pyfunction]
fn project(py: Python<'_>, f: &PyFunction, l: usize) -> PyResult<PyFunction> {
    Ok(wrap(lift(py.detach(|| filt::project_component(&f.inner, l)))?))
}

#[pyfunction]
fn decompose(py: Python<'_>, f: &PyFunction, l_max: usize) -> PyResult<Vec<PyFunction>> {
    Ok(lift(py.detach(|| filt::decompose(&f.inner, l_max)))?.into_iter().map(wrap).collect())
}

/// L2 norms of the harmonic components of degree 0..=l_max.
#[pyfunction]
fn spectrum(py: Python<'_>, f: &PyFunction, l_max: usize) -> PyResult<Vec<f64>> {
    Ok(lift(py.detach(|| filt::spectrum(&f.inner, l_max)))?.coeffs)
}

/// Spectral with `l_max`, otherwise direct quadrature against the kernel.
#[pyfunction]
#[pyo3(signature = (f, r, l_max=None))]
fn filtrate(py: Python<'_>, f: &PyFunction, r: f64, l_max: Option<usize>) -> PyResult<PyFunction> {
    let cfg = lift(filt::FilterConfig::new(r, l_max, f.inner.grid().dim()))?;
    Ok(wrap(lift(py.detach(|| filt::filtrate(&f.inner, &cfg)))?))
}

#[pyfunction]
fn filtrate_direct(py: Python<'_>, f: &PyFunction, r: f64) -> PyResult<PyFunction> {
    Ok(wrap(lift(py.detach(|| filt::filtrate_direct(&f.inner, r)))?))
}

#[pyfunction]
fn filtrate_spectral(py: Python<'_>, f: &PyFunction, r: f64, l_max: usize) -> PyResult<PyFunction> {
    Ok(wrap(lift(py.detach(|| filt::filtrate_spectral(&f.inner, r, l_max)))?))
}

fn profile(n: AmbientDim, r: Option<f64>, l: Option<usize>, coeffs: Option<Vec<f64>>) -> PyResult<ZonalProfile> {
    match (r, l, coeffs) {
        (Some(r), None, None) => lift(ZonalProfile::gegenbauer(n, r)),
        (None, Some(l), None) => Ok(ZonalProfile::legendre(n, l)),
        (None, None, Some(c)) => lift(ZonalProfile::expansion(n, c)),
        _ => Err(PyValueError::new_err("give exactly one of r, l, coeffs")),
    }
}

/// Zonal convolution with the filtration kernel (`r`), P_{l,N} (`l`) or
/// Σ c_k P_{k,N} (`coeffs`).
#[pyfunction]
#[pyo3(signature = (f, r=None, l=None, coeffs=None))]
fn convolve(
    py: Python<'_>,
    f: &PyFunction,
    r: Option<f64>,
    l: Option<usize>,
    coeffs: Option<Vec<f64>>,
) -> PyResult<PyFunction> {
    let h = profile(f.inner.grid().dim(), r, l, coeffs)?;
    Ok(wrap(lift(py.detach(|| filt::zonal_convolve(&f.inner, &h)))?))
}

/// (measured multiplier, closed-form factor) of a profile on degree `degree`.
#[pyfunction]
#[pyo3(signature = (n, degree, r=None, l=None, coeffs=None))]
fn convolution_multiplier(
    n: usize,
    degree: usize,
    r: Option<f64>,
    l: Option<usize>,
    coeffs: Option<Vec<f64>>,
) -> PyResult<(f64, f64)> {
    let c = lift(filt::convolution_spectrum(&profile(dim(n)?, r, l, coeffs)?, degree))?;
    Ok((c.multiplier, c.claimed_factor))
}

/// (all passed, rendered report) for a suite name.
#[pyfunction]
#[pyo3(signature = (suite="all"))]
fn run_checks(py: Python<'_>, suite: &str) -> PyResult<(bool, String)> {
    let s: Suite = lift(suite.parse())?;
    let report = py.detach(|| run_suite(s));
    Ok((report.passed(), report.render()))
}

#[pymodule(name = "hyperfilt")]
fn hyperfilt_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("HyperfiltError", py.get_type::<HyperfiltError>())?;
    m.add("DomainError", py.get_type::<DomainError>())?;
    m.add("CapabilityError", py.get_type::<CapabilityError>())?;
    m.add("ContractError", py.get_type::<ContractError>())?;
    m.add("IntegrityError", py.get_type::<IntegrityError>())?;
    m.add_class::<PyGrid>()?;
    m.add_class::<PyFunction>()?;
    m.add_function(wrap_pyfunction!(surface_area, m)?)?;
    m.add_function(wrap_pyfunction!(dim_harmonics, m)?)?;
    m.add_function(wrap_pyfunction!(eval_legendre, m)?)?;
    m.add_function(wrap_pyfunction!(legendre_table, m)?)?;
    m.add_function(wrap_pyfunction!(eval_gegenbauer, m)?)?;
    m.add_function(wrap_pyfunction!(gauss_gegenbauer_rule, m)?)?;
    m.add_function(wrap_pyfunction!(poisson_generating_sum, m)?)?;
    m.add_function(wrap_pyfunction!(gegenbauer_kernel, m)?)?;
    m.add_function(wrap_pyfunction!(kernel_normalization, m)?)?;
    m.add_function(wrap_pyfunction!(kernel_limit_check, m)?)?;
    m.add_function(wrap_pyfunction!(project, m)?)?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(filtrate, m)?)?;
    m.add_function(wrap_pyfunction!(filtrate_direct, m)?)?;
    m.add_function(wrap_pyfunction!(filtrate_spectral, m)?)?;
    m.add_function(wrap_pyfunction!(convolve, m)?)?;
    m.add_function(wrap_pyfunction!(convolution_multiplier, m)?)?;
    m.add_function(wrap_pyfunction!(run_checks, m)?)?;
    Ok(())
}
