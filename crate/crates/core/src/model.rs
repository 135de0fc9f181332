//! Two-sample data, the sufficient reduction, losses, and the equivariant
//! constants `d0` and `m0`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::special::{digamma, ln_gamma, LN2};
use crate::numerics::{find_root, integrate_points, peak_breakpoints, QuadSpec};

/// `1 + ln 2π`; entropy is this plus `2 ln σ`.
pub const ENTROPY_OFFSET: f64 = 2.837_877_066_409_345_5;

pub fn entropy_from_log_sigma(tau: f64) -> f64 {
    ENTROPY_OFFSET + 2.0 * tau
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoSampleData {
    pub sample1: Vec<f64>,
    pub sample2: Vec<f64>,
}

impl TwoSampleData {
    pub fn new(sample1: Vec<f64>, sample2: Vec<f64>) -> Result<Self> {
        let d = TwoSampleData { sample1, sample2 };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        if self.sample1.len() != self.sample2.len() {
            return Err(Error::input(format!(
                "samples must have equal size (got {} and {})",
                self.sample1.len(),
                self.sample2.len()
            )));
        }
        if self.sample1.len() < 2 {
            return Err(Error::input("each sample needs at least 2 observations"));
        }
        if self
            .sample1
            .iter()
            .chain(&self.sample2)
            .any(|x| !x.is_finite())
        {
            return Err(Error::input("observations must be finite"));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.sample1.len()
    }

    /// Swap the two populations.
    pub fn swapped(&self) -> TwoSampleData {
        TwoSampleData {
            sample1: self.sample2.clone(),
            sample2: self.sample1.clone(),
        }
    }

    /// `a·x + b1` on sample 1 and `a·y + b2` on sample 2.
    pub fn affine(&self, a: f64, b1: f64, b2: f64) -> TwoSampleData {
        TwoSampleData {
            sample1: self.sample1.iter().map(|x| a * x + b1).collect(),
            sample2: self.sample2.iter().map(|x| a * x + b2).collect(),
        }
    }
}

/// Air-conditioning failure times (hours) for planes 7907 and 7916.
pub fn boeing() -> TwoSampleData {
    TwoSampleData {
        sample1: vec![194.0, 5.0, 41.0, 29.0, 33.0, 181.0],
        sample2: vec![50.0, 254.0, 5.0, 283.0, 35.0, 12.0],
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuffStats {
    pub n: usize,
    pub mean1: f64,
    pub mean2: f64,
    /// Pooled sum of squared deviations.
    pub s2: f64,
    pub s: f64,
    /// `(mean2 - mean1) / s`.
    pub w: f64,
}

impl SuffStats {
    pub fn from_parts(n: usize, mean1: f64, mean2: f64, s2: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::input(format!("n must be at least 2, got {n}")));
        }
        if !(s2 > 0.0) || !s2.is_finite() {
            return Err(Error::DegenerateData);
        }
        if !(mean1.is_finite() && mean2.is_finite()) {
            return Err(Error::input("means must be finite"));
        }
        let s = s2.sqrt();
        Ok(SuffStats {
            n,
            mean1,
            mean2,
            s2,
            s,
            w: (mean2 - mean1) / s,
        })
    }

    pub fn ln_s(&self) -> f64 {
        self.s.ln()
    }
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn sum_sq_dev(xs: &[f64], m: f64) -> f64 {
    xs.iter().map(|x| (x - m) * (x - m)).sum()
}

pub fn suff_stats(data: &TwoSampleData) -> Result<SuffStats> {
    data.validate()?;
    suff_stats_unchecked(&data.sample1, &data.sample2)
}

/// As [`suff_stats`] on raw slices; lengths must already agree.
pub fn suff_stats_unchecked(x1: &[f64], x2: &[f64]) -> Result<SuffStats> {
    let m1 = mean(x1);
    let m2 = mean(x2);
    let s2 = sum_sq_dev(x1, m1) + sum_sq_dev(x2, m2);
    SuffStats::from_parts(x1.len(), m1, m2, s2)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Loss {
    SquaredError,
    Linex { a1: f64 },
}

impl Loss {
    pub fn linex(a1: f64) -> Result<Loss> {
        if a1 == 0.0 || !a1.is_finite() {
            return Err(Error::input(format!(
                "linex loss needs a finite a1 != 0, got {a1}"
            )));
        }
        Ok(Loss::Linex { a1 })
    }

    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            Loss::SquaredError => t * t,
            Loss::Linex { a1 } => (a1 * t).exp_m1() - a1 * t,
        }
    }

    pub fn deriv(&self, t: f64) -> f64 {
        match *self {
            Loss::SquaredError => 2.0 * t,
            Loss::Linex { a1 } => a1 * (a1 * t).exp_m1(),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Loss::SquaredError => "l1",
            Loss::Linex { .. } => "linex",
        }
    }

    pub fn a1(&self) -> Option<f64> {
        match *self {
            Loss::SquaredError => None,
            Loss::Linex { a1 } => Some(a1),
        }
    }
}

impl std::fmt::Display for Loss {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Loss::SquaredError => write!(f, "l1"),
            Loss::Linex { a1 } => write!(f, "linex(a1={a1})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub mu1: f64,
    pub mu2: f64,
    pub sigma: f64,
}

impl Params {
    pub fn new(mu1: f64, mu2: f64, sigma: f64) -> Result<Self> {
        if !(sigma > 0.0) || !sigma.is_finite() || !mu1.is_finite() || !mu2.is_finite() {
            return Err(Error::input("Params need finite means and sigma > 0"));
        }
        Ok(Params { mu1, mu2, sigma })
    }

    /// Standard simulation parametrization: `mu1 = 0`, `sigma = 1`, and
    /// `mu2 = eta / sqrt(n)`.
    pub fn from_eta(eta: f64, n: usize) -> Params {
        Params {
            mu1: 0.0,
            mu2: eta / (n as f64).sqrt(),
            sigma: 1.0,
        }
    }

    pub fn eta(&self, n: usize) -> f64 {
        (n as f64).sqrt() * (self.mu2 - self.mu1) / self.sigma
    }

    pub fn tau(&self) -> f64 {
        self.sigma.ln()
    }
}

/// Minimizer `c` of `E[L(ln √U + c)]` for `U ~ Gamma(shape, scale 2)`, in
/// closed form for the two built-in losses.
pub fn equivariant_constant(loss: Loss, shape: f64) -> Result<f64> {
    if !(shape > 0.0) {
        return Err(Error::domain(format!(
            "shape must be positive, got {shape}"
        )));
    }
    match loss {
        Loss::SquaredError => Ok(-0.5 * (LN2 + digamma(shape)?)),
        Loss::Linex { a1 } => {
            let arg = shape + 0.5 * a1;
            if !(arg > 0.0) {
                return Err(Error::domain(format!(
                    "linex constant needs shape + a1/2 > 0, got {arg}"
                )));
            }
            Ok(-(0.5 * a1 * LN2 + ln_gamma(arg)? - ln_gamma(shape)?) / a1)
        }
    }
}

/// Same constant from the defining equation `E[L'(ln √U + c)] = 0`, by
/// quadrature over `z = ln √U` and a root solve in `c`.
pub fn equivariant_constant_generic(loss: Loss, shape: f64) -> Result<f64> {
    if !(shape > 0.0) {
        return Err(Error::domain(format!(
            "shape must be positive, got {shape}"
        )));
    }
    // z density ∝ exp(2·shape·z − e^{2z}/2); mode at ½ ln(2·shape).
    let mode = 0.5 * (2.0 * shape).ln();
    let log_at_mode = 2.0 * shape * mode - shape;
    // Lower tail decays like exp(2·shape·z), or slower once a negative linex
    // slope multiplies it in.
    let rate = match loss {
        Loss::Linex { a1 } if a1 < 0.0 => 2.0 * shape + a1,
        _ => 2.0 * shape,
    };
    if !(rate > 0.0) {
        return Err(Error::domain(format!(
            "expected loss diverges for shape {shape} under {loss}"
        )));
    }
    let lo = mode - (80.0 / rate + 5.0);
    let hi = mode + 5.0;
    let spec = QuadSpec::relative(1e-12);
    let pts = peak_breakpoints(lo, hi, mode, 0.5 / shape.sqrt());
    let density = |z: f64| (2.0 * shape * z - 0.5 * (2.0 * z).exp() - log_at_mode).exp();
    let mut first_err: Option<Error> = None;
    let mut moment = |c: f64| -> f64 {
        match integrate_points(|z| loss.deriv(z + c) * density(z), &pts, &spec) {
            Ok(v) => v,
            Err(e) => {
                first_err.get_or_insert(e);
                f64::NAN
            }
        }
    };
    let guess = -mode;
    let (mut a, mut b) = (guess - 1.0, guess + 1.0);
    let mut k = 0;
    while moment(a) > 0.0 {
        a -= 2.0;
        k += 1;
        if k > 30 {
            return Err(Error::numeric("could not bracket equivariant constant"));
        }
    }
    while moment(b) < 0.0 {
        b += 2.0;
        k += 1;
        if k > 60 {
            return Err(Error::numeric("could not bracket equivariant constant"));
        }
    }
    let r = find_root(&mut moment, a, b, 1e-12);
    if let Some(e) = first_err {
        return Err(e);
    }
    r
}

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::domain(format!("n must be at least 2, got {n}")));
    }
    Ok(())
}

/// BAEE constant: shape `n - 1`.
pub fn d0(loss: Loss, n: usize) -> Result<f64> {
    check_n(n)?;
    equivariant_constant(loss, n as f64 - 1.0)
}

/// Stein cutoff constant: shape `(2n - 1) / 2`.
pub fn m0(loss: Loss, n: usize) -> Result<f64> {
    check_n(n)?;
    equivariant_constant(loss, n as f64 - 0.5)
}

pub fn d0_generic(loss: Loss, n: usize) -> Result<f64> {
    check_n(n)?;
    equivariant_constant_generic(loss, n as f64 - 1.0)
}

pub fn m0_generic(loss: Loss, n: usize) -> Result<f64> {
    check_n(n)?;
    equivariant_constant_generic(loss, n as f64 - 0.5)
}
