//! Conditional medians, the Pitman-closeness clipping rule, and the
//! monotone likelihood-ratio integral used to justify it.

use crate::error::{Error, Result};
use crate::model::{d0, Loss, SuffStats};
use crate::numerics::special::chi_square_quantile;
use crate::numerics::{find_root, integrate_points, peak_breakpoints, QuadSpec};

fn check(w: f64, eta: f64, n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::domain(format!("n must be at least 2, got {n}")));
    }
    if !(eta >= 0.0) || !eta.is_finite() {
        return Err(Error::domain(format!(
            "eta must be finite and >= 0, got {eta}"
        )));
    }
    if !w.is_finite() {
        return Err(Error::domain("w must be finite"));
    }
    Ok(())
}

/// Median of `ln V` given `W = w`, where `V = S²/σ²` and the mean gap is
/// `η`. At `η = 0`, `V | W = w ~ Gamma(n − 1/2, scale 2/(1 + n w²/2))`, which
/// is used directly; otherwise see [`conditional_median_quadrature`].
pub fn conditional_median(w: f64, eta: f64, n: usize) -> Result<f64> {
    check(w, eta, n)?;
    if eta == 0.0 {
        let nf = n as f64;
        let med = chi_square_quantile(2.0 * nf - 1.0, 0.5)?;
        return Ok(med.ln() - (0.5 * nf * w * w).ln_1p());
    }
    conditional_median_quadrature(w, eta, n)
}

/// Same median by numerically integrating the conditional density of
/// `z = ln √V`,
/// `log f(z | w) = (2n − 1)z − e^{2z}/2 − (√n w e^z − η)²/4 + const`,
/// and root-solving its CDF at 1/2. Returns `2 z_med`.
pub fn conditional_median_quadrature(w: f64, eta: f64, n: usize) -> Result<f64> {
    check(w, eta, n)?;
    let nf = n as f64;
    let c = nf.sqrt() * w;
    // Mode: u = e^z solves A u² − B u − C = 0.
    let qa = 1.0 + 0.5 * nf * w * w;
    let qb = 0.5 * eta * c;
    let qc = 2.0 * nf - 1.0;
    let u = (qb + (qb * qb + 4.0 * qa * qc).sqrt()) / (2.0 * qa);
    let mode = u.ln();
    let logf = |z: f64| {
        let e = z.exp();
        let g = c * e - eta;
        qc * z - 0.5 * e * e - 0.25 * g * g
    };
    let curv = 2.0 * u * u + c * c * u * u - 0.5 * eta * c * u;
    if !(curv > 0.0) {
        return Err(Error::numeric(format!(
            "conditional density has no proper mode (w = {w}, eta = {eta}, n = {n})"
        )));
    }
    let sd = 1.0 / curv.sqrt();
    let peak = logf(mode);
    let lo = mode - 70.0 / qc - 10.0 * sd;
    let hi = mode + (10.0 * sd).max(3.0);
    let density = |z: f64| (logf(z) - peak).exp();
    let spec = QuadSpec::relative(1e-13);
    let pts = peak_breakpoints(lo, hi, mode, sd);
    let total = integrate_points(density, &pts, &spec)?;
    let mut first_err: Option<Error> = None;
    let mut cdf_minus_half = |z: f64| -> f64 {
        if z <= lo {
            return -0.5;
        }
        let mut p: Vec<f64> = pts.iter().copied().filter(|&x| x < z).collect();
        p.push(z);
        match integrate_points(density, &p, &spec) {
            Ok(v) => v / total - 0.5,
            Err(e) => {
                first_err.get_or_insert(e);
                f64::NAN
            }
        }
    };
    let z = find_root(&mut cdf_minus_half, lo, hi, 1e-12);
    if let Some(e) = first_err {
        return Err(Error::numeric(format!(
            "conditional median (w = {w}, eta = {eta}, n = {n}): {e}"
        )));
    }
    Ok(2.0 * z?)
}

/// Clip an additive term `φ` against the Pitman target: for `w > 0` the
/// result is at most `target`, for `w < 0` at least `target`; `w = 0`
/// leaves `φ` alone.
pub fn pitman_clip(phi: f64, w: f64, target: f64) -> f64 {
    if w > 0.0 {
        phi.min(target)
    } else if w < 0.0 {
        phi.max(target)
    } else {
        phi
    }
}

/// Default clipping target in additive-term space, `−m_0(w)/2`, with
/// `m_0(w)` the η = 0 conditional median of `ln V`.
pub fn pitman_target(w: f64, n: usize) -> Result<f64> {
    Ok(-0.5 * conditional_median(w, 0.0, n)?)
}

/// `ln s + clip(φ_base(w))`. Without a base, `φ_base ≡ d0(loss, n)`.
pub fn pitman_clipped(
    st: &SuffStats,
    base_phi: Option<&dyn Fn(f64) -> f64>,
    loss: Loss,
) -> Result<f64> {
    let phi = match base_phi {
        Some(f) => f(st.w),
        None => d0(loss, st.n)?,
    };
    if st.w == 0.0 {
        return Ok(st.ln_s() + phi);
    }
    Ok(st.ln_s() + pitman_clip(phi, st.w, pitman_target(st.w, st.n)?))
}

/// `I(y) = ∫_{−α}^{α} exp(−(√n e^y w − η)²/4) dw`, by quadrature.
pub fn lemma_integral(y: f64, n: usize, eta: f64, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) || n < 1 {
        return Err(Error::domain("lemma_integral needs alpha > 0 and n >= 1"));
    }
    let c = (n as f64).sqrt() * y.exp();
    let center = (eta / c).clamp(-alpha, alpha);
    let pts = peak_breakpoints(-alpha, alpha, center, 2f64.sqrt() / c);
    integrate_points(
        |w| {
            let g = c * w - eta;
            (-0.25 * g * g).exp()
        },
        &pts,
        &QuadSpec::relative(1e-14),
    )
}

/// `R(y) = I(y − d2) / I(y − d1)` with `d1 < d2`.
pub fn lemma_ratio(y: f64, n: usize, eta: f64, alpha: f64, d1: f64, d2: f64) -> Result<f64> {
    if !(d1 < d2) {
        return Err(Error::input(format!(
            "lemma_ratio needs d1 < d2, got {d1}, {d2}"
        )));
    }
    Ok(lemma_integral(y - d2, n, eta, alpha)? / lemma_integral(y - d1, n, eta, alpha)?)
}
