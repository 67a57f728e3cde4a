//! Harmonic analysis on the unit hypersphere S^(N-1).
//!
//! * [`geometry`]: ambient dimension, points, hyperspherical coordinates,
//!   surface areas and rotations.
//! * [`polynomials`]: hyperspherical Legendre and Gegenbauer polynomials,
//!   harmonic dimensions, the generating function and S² harmonics.
//! * [`quadrature`]: Gauss–Gegenbauer rules, tensor-product sphere grids and
//!   sampled functions.
//! * [`filtration`]: harmonic projection, the Gegenbauer filtration kernel
//!   and operator, and zonal convolution.
//! * [`io`]: text formats for grids and sampled values.
//! * [`checks`]: the invariant suite behind `hyperfilt check`.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod checks;
pub mod error;
pub mod filtration;
pub mod geometry;
pub mod io;
pub mod polynomials;
pub mod quadrature;

pub use error::{Error, Result};
pub use filtration::{
    convolution_spectrum, decompose, filtrate, filtrate_direct, filtrate_spectral, gegenbauer_kernel,
    kernel_limit_check, kernel_normalization, project_component, spectrum, zonal_convolve, ConvolutionFactor,
    FilterConfig, KernelLimitReport, ProfileKind, Spectrum, ZonalProfile,
};
pub use geometry::{surface_area, AmbientDim, SpherePoint};
pub use polynomials::{
    dim_harmonics, eval_gegenbauer, eval_legendre, poisson_generating_sum, GegenbauerParams, LegendreMethod,
    LegendreParams,
};
pub use quadrature::{gauss_gegenbauer_rule, sphere_grid, QuadratureRule1D, SampledFunction, SphereGrid, ValueKind};
