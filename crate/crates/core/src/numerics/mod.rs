//! Special functions, quadrature, root finding and random variates.

pub mod dist;
pub mod interp;
pub mod quad;
pub mod rng;
pub mod root;
pub mod special;

pub use dist::{sample, sample_n, Dist, Sampler};
pub use interp::Pchip;
pub use quad::{
    integrate, integrate_points, integrate_semi_infinite, integrate_with_error, peak_breakpoints,
    QuadResult, QuadSpec,
};
pub use rng::{mix_seed, RngStream};
pub use root::find_root;
pub use special::{
    beta_inc, chi_square_cdf, chi_square_quantile, digamma, erf, erfc, f_cdf, gamma_p, gamma_q,
    kolmogorov_sf, ln_gamma, std_normal_cdf, std_normal_pdf, std_normal_quantile, t_cdf, trigamma,
};

use crate::error::{Error, Result};

/// `∫₀^y t^{-1/2} (2+t)^{-a} [ln(2+t)]^k dt` for `k ∈ {0, 1}`.
///
/// `y` may be `f64::INFINITY` when `a > 1/2`. Uses a relative tolerance of
/// 1e-12; see [`integrate_j_with`] to choose another.
pub fn integrate_j(a: f64, y: f64, log_power: u32) -> Result<f64> {
    integrate_j_with(a, y, log_power, &QuadSpec::relative(1e-12))
}

pub fn integrate_j_with(a: f64, y: f64, log_power: u32, spec: &QuadSpec) -> Result<f64> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::domain(format!(
            "integrate_j: a must be positive, got {a}"
        )));
    }
    if !(y >= 0.0) {
        return Err(Error::domain(format!(
            "integrate_j: y must be >= 0, got {y}"
        )));
    }
    if log_power > 1 {
        return Err(Error::input(format!(
            "integrate_j: log_power must be 0 or 1, got {log_power}"
        )));
    }
    if y == 0.0 {
        return Ok(0.0);
    }
    // t = u^2 turns t^{-1/2} dt into 2 du.
    let g = move |u: f64| {
        let l = (2.0 + u * u).ln();
        let base = 2.0 * (-a * l).exp();
        if log_power == 1 {
            base * l
        } else {
            base
        }
    };
    // Near u = 0 the integrand behaves like 2^{1-a} exp(-a u^2 / 2).
    let width = 1.0 / a.sqrt();
    if y.is_infinite() {
        if a <= 0.5 {
            return Err(Error::domain(format!(
                "integrate_j: integral to infinity diverges for a = {a} <= 1/2"
            )));
        }
        let head = integrate_points(g, &peak_breakpoints(0.0, 4.0, 0.0, width), spec)?;
        let tail = integrate_semi_infinite(g, 4.0, spec)?;
        return Ok(head + tail);
    }
    integrate_points(g, &peak_breakpoints(0.0, y.sqrt(), 0.0, width), spec)
}
