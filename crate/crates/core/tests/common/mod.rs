//! Oracles shared by the integration tests. Nothing here calls into the
//! library's polynomial or quadrature code.
#![allow(dead_code)]

use std::f64::consts::PI;

/// C_l^α(cos θ) = Σ_k (α)_k (α)_{l-k} / (k! (l-k)!) cos((l-2k)θ).
/// Every coefficient is positive, so there is no cancellation.
pub fn gegenbauer_cosine_coeffs(l: usize, alpha: f64) -> Vec<f64> {
    // a_k = (α)_k / k!
    let mut a = vec![1.0; l + 1];
    for k in 1..=l {
        a[k] = a[k - 1] * (alpha + k as f64 - 1.0) / k as f64;
    }
    (0..=l).map(|k| a[k] * a[l - k]).collect()
}

pub fn gegenbauer_oracle(l: usize, alpha: f64, t: f64) -> f64 {
    let theta = t.clamp(-1.0, 1.0).acos();
    gegenbauer_cosine_coeffs(l, alpha)
        .iter()
        .enumerate()
        .map(|(k, c)| c * ((l as f64 - 2.0 * k as f64) * theta).cos())
        .sum()
}

/// P_{l,N}(t) as C_l^((N-2)/2)(t) / C_l^((N-2)/2)(1); cos(l arccos t) on the circle.
pub fn legendre_oracle(l: usize, n: usize, t: f64) -> f64 {
    let theta = t.clamp(-1.0, 1.0).acos();
    if n == 2 {
        return (l as f64 * theta).cos();
    }
    let c = gegenbauer_cosine_coeffs(l, (n as f64 - 2.0) / 2.0);
    let total: f64 = c.iter().sum();
    c.iter().enumerate().map(|(k, v)| v * ((l as f64 - 2.0 * k as f64) * theta).cos()).sum::<f64>() / total
}

/// binom(n, k) as a float.
pub fn binom(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (1..=k).fold(1.0, |acc, i| acc * (n - k + i) as f64 / i as f64)
}

/// D(l, N) from binom(l+N-1, N-1) - binom(l+N-3, N-1).
pub fn dim_oracle(l: usize, n: usize) -> f64 {
    let b = if l + n >= 3 { binom(l + n - 3, n - 1) } else { 0.0 };
    binom(l + n - 1, n - 1) - b
}

/// Γ(k/2) for a positive integer k, from Γ(1) = 1, Γ(1/2) = √π.
pub fn gamma_half(k: usize) -> f64 {
    assert!(k >= 1);
    let mut g = if k.is_multiple_of(2) { 1.0 } else { PI.sqrt() };
    let mut s = if k.is_multiple_of(2) { 1.0 } else { 0.5 };
    while s < k as f64 / 2.0 {
        g *= s;
        s += 1.0;
    }
    g
}

/// |S^(n-1)| = 2 π^(n/2) / Γ(n/2).
pub fn area(n: usize) -> f64 {
    2.0 * PI.powf(n as f64 / 2.0) / gamma_half(n)
}

/// Gauss–Legendre nodes and weights on [-1, 1] by Newton iteration.
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; m];
    let mut w = vec![0.0; m];
    for i in 0..m.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=m {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pm = if m == 1 { z } else { p1 };
            let pm1 = if m == 1 { 1.0 } else { p0 };
            dp = m as f64 * (z * pm - pm1) / (z * z - 1.0);
            let dz = pm / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[m - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[m - 1 - i] = w[i];
    }
    (x, w)
}

/// ∫_0^π g(θ) dθ by composite Gauss–Legendre on `panels` equal panels.
pub fn integrate_theta<F: Fn(f64) -> f64>(g: F, panels: usize, order: usize) -> f64 {
    let (x, w) = gauss_legendre(order);
    let h = PI / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let a = p as f64 * h;
        for (xi, wi) in x.iter().zip(&w) {
            total += 0.5 * h * wi * g(a + 0.5 * h * (xi + 1.0));
        }
    }
    total
}

/// G_N(r, t) written out directly.
pub fn kernel_oracle(n: usize, r: f64, t: f64) -> f64 {
    area(n - 1) / area(n) * (1.0 - r * r) / (1.0 + r * r - 2.0 * r * t).powf(n as f64 / 2.0)
}
