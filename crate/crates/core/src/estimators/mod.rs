//! Point estimators of `τ = ln σ`.
//!
//! Every estimator has the form `ln S + φ(W)`. Ties at `W = 0` take the
//! baseline branch of piecewise rules.

pub mod bz;
pub mod pitman;

use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{d0, entropy_from_log_sigma, m0, suff_stats, Loss, SuffStats, TwoSampleData};
use crate::numerics::special::chi_square_quantile;

pub use bz::{bz_r0, bz_r0_generic, ierd_check, r0_table, IerdReport, R0Table};
pub use pitman::{
    conditional_median, conditional_median_quadrature, lemma_integral, lemma_ratio, pitman_clip,
    pitman_clipped, pitman_target,
};

/// Additive term tabulated against signed `w`, linearly interpolated and
/// held constant outside the grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhiTable {
    pub w: Vec<f64>,
    pub phi: Vec<f64>,
}

impl PhiTable {
    pub fn new(w: Vec<f64>, phi: Vec<f64>) -> Result<Self> {
        if w.len() != phi.len() || w.is_empty() {
            return Err(Error::input("phi table needs matching, nonempty columns"));
        }
        if w.windows(2).any(|p| !(p[0] < p[1])) {
            return Err(Error::input("phi table grid must be strictly increasing"));
        }
        if phi.iter().chain(&w).any(|v| !v.is_finite()) {
            return Err(Error::input("phi table entries must be finite"));
        }
        Ok(PhiTable { w, phi })
    }

    pub fn eval(&self, w: f64) -> f64 {
        let k = self.w.len();
        if w <= self.w[0] {
            return self.phi[0];
        }
        if w >= self.w[k - 1] {
            return self.phi[k - 1];
        }
        let i = self.w.partition_point(|&v| v <= w) - 1;
        let t = (w - self.w[i]) / (self.w[i + 1] - self.w[i]);
        self.phi[i] + t * (self.phi[i + 1] - self.phi[i])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum EstimatorKind {
    Baee,
    Umvue,
    Mle,
    Rmle,
    Stein,
    ImprovedMle,
    ImprovedRmle,
    BrewsterZidek,
    PitmanClipped,
    Custom(PhiTable),
}

impl EstimatorKind {
    /// The nine built-in estimators in display order.
    pub fn builtin() -> Vec<EstimatorKind> {
        use EstimatorKind::*;
        vec![
            Baee,
            Umvue,
            Mle,
            Rmle,
            Stein,
            ImprovedMle,
            ImprovedRmle,
            BrewsterZidek,
            PitmanClipped,
        ]
    }

    pub fn name(&self) -> &'static str {
        match self {
            EstimatorKind::Baee => "baee",
            EstimatorKind::Umvue => "umvue",
            EstimatorKind::Mle => "mle",
            EstimatorKind::Rmle => "rmle",
            EstimatorKind::Stein => "stein",
            EstimatorKind::ImprovedMle => "improved_mle",
            EstimatorKind::ImprovedRmle => "improved_rmle",
            EstimatorKind::BrewsterZidek => "bz",
            EstimatorKind::PitmanClipped => "pitman_clipped",
            EstimatorKind::Custom(_) => "custom",
        }
    }
}

impl fmt::Display for EstimatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EstimatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        use EstimatorKind::*;
        Ok(
            match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
                "baee" => Baee,
                "umvue" => Umvue,
                "mle" => Mle,
                "rmle" => Rmle,
                "stein" => Stein,
                "improved_mle" | "iml" => ImprovedMle,
                "improved_rmle" | "irml" => ImprovedRmle,
                "bz" | "brewster_zidek" => BrewsterZidek,
                "pitman_clipped" | "pitman" => PitmanClipped,
                other => return Err(Error::input(format!("unknown estimator {other:?}"))),
            },
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateReport {
    pub kind: EstimatorKind,
    pub loss: Loss,
    pub value: f64,
    pub entropy_value: f64,
}

impl EstimateReport {
    pub fn new(kind: EstimatorKind, loss: Loss, value: f64) -> Self {
        EstimateReport {
            kind,
            loss,
            value,
            entropy_value: entropy_from_log_sigma(value),
        }
    }
}

/// `½ ln(1 + n w²/2)`, the Stein shift.
fn stein_shift(n: usize, w: f64) -> f64 {
    0.5 * (0.5 * n as f64 * w * w).ln_1p()
}

/// Piecewise rule shared by Stein and the improved MLE/RMLE:
/// `min{base, cut}` for `w > 0`, `max{base, cut}` for `w < 0`.
fn testimator(w: f64, base_pos: f64, base_neg: f64, cut: f64) -> f64 {
    if w > 0.0 {
        base_pos.min(cut)
    } else if w < 0.0 {
        base_neg.max(cut)
    } else {
        base_pos
    }
}

pub fn baee(st: &SuffStats, loss: Loss) -> Result<f64> {
    Ok(st.ln_s() + d0(loss, st.n)?)
}

pub fn umvue(st: &SuffStats) -> Result<f64> {
    baee(st, Loss::SquaredError)
}

pub fn mle(st: &SuffStats) -> f64 {
    st.ln_s() - 0.5 * (2.0 * st.n as f64).ln()
}

pub fn rmle(st: &SuffStats) -> f64 {
    if st.w < 0.0 {
        mle(st) + 0.5 * (0.5 * st.n as f64 * st.w * st.w).ln_1p()
    } else {
        mle(st)
    }
}

pub fn stein(st: &SuffStats, loss: Loss) -> Result<f64> {
    let d = d0(loss, st.n)?;
    let cut = m0(loss, st.n)? + stein_shift(st.n, st.w);
    Ok(st.ln_s() + testimator(st.w, d, d, cut))
}

pub fn improved_mle(st: &SuffStats, loss: Loss) -> Result<f64> {
    let base = -0.5 * (2.0 * st.n as f64).ln();
    let cut = m0(loss, st.n)? + stein_shift(st.n, st.w);
    Ok(st.ln_s() + testimator(st.w, base, base, cut))
}

pub fn improved_rmle(st: &SuffStats, loss: Loss) -> Result<f64> {
    let base = -0.5 * (2.0 * st.n as f64).ln();
    let shift = stein_shift(st.n, st.w);
    let cut = m0(loss, st.n)? + shift;
    // On w < 0 the RMLE term is ½ ln((1 + n w²/2) / 2n).
    Ok(st.ln_s() + testimator(st.w, base, base + shift, cut))
}

pub fn brewster_zidek(st: &SuffStats, loss: Loss) -> Result<f64> {
    Ok(st.ln_s() + bz_r0(st.w.abs(), st.n, loss)?)
}

/// Evaluate one estimator directly (no cached tables).
pub fn estimate(kind: &EstimatorKind, st: &SuffStats, loss: Loss) -> Result<f64> {
    match kind {
        EstimatorKind::Baee => baee(st, loss),
        EstimatorKind::Umvue => umvue(st),
        EstimatorKind::Mle => Ok(mle(st)),
        EstimatorKind::Rmle => Ok(rmle(st)),
        EstimatorKind::Stein => stein(st, loss),
        EstimatorKind::ImprovedMle => improved_mle(st, loss),
        EstimatorKind::ImprovedRmle => improved_rmle(st, loss),
        EstimatorKind::BrewsterZidek => brewster_zidek(st, loss),
        EstimatorKind::PitmanClipped => pitman_clipped(st, None, loss),
        EstimatorKind::Custom(t) => Ok(st.ln_s() + t.eval(st.w)),
    }
}

/// All built-in estimators on a data set.
pub fn estimate_all(data: &TwoSampleData, loss: Loss) -> Result<Vec<EstimateReport>> {
    let st = suff_stats(data)?;
    EstimatorKind::builtin()
        .into_iter()
        .map(|k| {
            let v = estimate(&k, &st, loss)?;
            Ok(EstimateReport::new(k, loss, v))
        })
        .collect()
}

/// Precomputed constants for fast repeated evaluation at fixed `(loss, n)`.
/// The Brewster–Zidek term comes from the shared interpolation table,
/// fetched on first use. Safe to share between threads.
#[derive(Debug)]
pub struct EstimatorContext {
    pub loss: Loss,
    pub n: usize,
    d0: f64,
    d0_l1: f64,
    m0: f64,
    mle_c: f64,
    ln_chi_median: f64,
    r0: OnceLock<Arc<R0Table>>,
}

impl EstimatorContext {
    pub fn new(loss: Loss, n: usize) -> Result<Self> {
        Ok(EstimatorContext {
            loss,
            n,
            d0: d0(loss, n)?,
            d0_l1: d0(Loss::SquaredError, n)?,
            m0: m0(loss, n)?,
            mle_c: -0.5 * (2.0 * n as f64).ln(),
            ln_chi_median: chi_square_quantile(2.0 * n as f64 - 1.0, 0.5)?.ln(),
            r0: OnceLock::new(),
        })
    }

    pub fn d0(&self) -> f64 {
        self.d0
    }

    pub fn m0(&self) -> f64 {
        self.m0
    }

    fn r0(&self, absw: f64) -> Result<f64> {
        if let Some(t) = self.r0.get() {
            return Ok(t.eval(absw));
        }
        let t = r0_table(self.loss, self.n)?;
        Ok(self.r0.get_or_init(|| t).eval(absw))
    }

    /// Additive term `φ(w)` of the given estimator.
    pub fn phi(&self, kind: &EstimatorKind, w: f64) -> Result<f64> {
        let shift = || stein_shift(self.n, w);
        Ok(match kind {
            EstimatorKind::Baee => self.d0,
            EstimatorKind::Umvue => self.d0_l1,
            EstimatorKind::Mle => self.mle_c,
            EstimatorKind::Rmle => {
                if w < 0.0 {
                    self.mle_c + shift()
                } else {
                    self.mle_c
                }
            }
            EstimatorKind::Stein => testimator(w, self.d0, self.d0, self.m0 + shift()),
            EstimatorKind::ImprovedMle => testimator(w, self.mle_c, self.mle_c, self.m0 + shift()),
            EstimatorKind::ImprovedRmle => {
                let s = shift();
                testimator(w, self.mle_c, self.mle_c + s, self.m0 + s)
            }
            EstimatorKind::BrewsterZidek => self.r0(w.abs())?,
            EstimatorKind::PitmanClipped => {
                // −½ m_0(w) with m_0(w) = ln med χ²_{2n−1} − ln(1 + n w²/2)
                let target = -0.5 * self.ln_chi_median + shift();
                pitman_clip(self.d0, w, target)
            }
            EstimatorKind::Custom(t) => t.eval(w),
        })
    }

    pub fn estimate(&self, kind: &EstimatorKind, st: &SuffStats) -> Result<f64> {
        Ok(st.ln_s() + self.phi(kind, st.w)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::boeing;

    fn boeing_st() -> SuffStats {
        suff_stats(&boeing()).unwrap()
    }

    #[test]
    fn boeing_baee_table() {
        let st = boeing_st();
        let cases = [
            (Loss::SquaredError, 4.7293),
            (Loss::Linex { a1: -3.0 }, 4.8233),
            (Loss::Linex { a1: -2.0 }, 4.7892),
            (Loss::Linex { a1: 2.0 }, 4.6776),
            (Loss::Linex { a1: 4.0 }, 4.6321),
        ];
        for (loss, want) in cases {
            let v = baee(&st, loss).unwrap();
            assert!((v - want).abs() < 5e-4, "{loss}: {v}");
        }
        assert_eq!(umvue(&st).unwrap(), baee(&st, Loss::SquaredError).unwrap());
    }

    #[test]
    fn boeing_mle_family() {
        let st = boeing_st();
        assert!((mle(&st) - 4.586_479_3).abs() < 1e-7);
        assert_eq!(rmle(&st), mle(&st));
        let sw = suff_stats(&boeing().swapped()).unwrap();
        assert!((rmle(&sw) - 4.595_175_2).abs() < 1e-7);
        let l1 = Loss::SquaredError;
        assert_eq!(improved_mle(&st, l1).unwrap(), mle(&st));
        assert!((improved_rmle(&sw, l1).unwrap() - 4.685_508_3).abs() < 1e-7);
    }

    #[test]
    fn boeing_stein() {
        let st = boeing_st();
        let v = stein(&st, Loss::SquaredError).unwrap();
        assert!((v - 4.685_508_3).abs() < 1e-7, "{v}");
    }

    #[test]
    fn zero_w_takes_baselines() {
        let st = SuffStats::from_parts(6, 1.0, 1.0, 4.0).unwrap();
        for loss in [Loss::SquaredError, Loss::Linex { a1: 2.0 }] {
            let b = baee(&st, loss).unwrap();
            assert_eq!(stein(&st, loss).unwrap(), b);
            assert_eq!(pitman_clipped(&st, None, loss).unwrap(), b);
            assert_eq!(improved_mle(&st, loss).unwrap(), mle(&st));
            assert_eq!(improved_rmle(&st, loss).unwrap(), mle(&st));
            let bz = brewster_zidek(&st, loss).unwrap();
            assert!((bz - (st.ln_s() + m0(loss, 6).unwrap())).abs() < 1e-15);
        }
        assert_eq!(rmle(&st), mle(&st));
    }

    #[test]
    fn large_w_saturates() {
        let st = SuffStats::from_parts(6, 0.0, 1e3, 1.0).unwrap();
        let l = Loss::SquaredError;
        assert_eq!(stein(&st, l).unwrap(), baee(&st, l).unwrap());
        assert!((brewster_zidek(&st, l).unwrap() - baee(&st, l).unwrap()).abs() < 1e-4);
    }

    #[test]
    fn context_matches_direct() {
        let loss = Loss::Linex { a1: -3.0 };
        let ctx = EstimatorContext::new(loss, 6).unwrap();
        for &(m2, s2) in &[(0.3, 2.0), (-0.4, 1.5), (0.0, 3.0), (2.0, 0.5)] {
            let st = SuffStats::from_parts(6, 0.0, m2, s2).unwrap();
            for k in EstimatorKind::builtin() {
                let a = ctx.estimate(&k, &st).unwrap();
                let b = estimate(&k, &st, loss).unwrap();
                let tol = if k == EstimatorKind::BrewsterZidek {
                    1e-9
                } else {
                    1e-12
                };
                assert!((a - b).abs() < tol, "{k}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn names_roundtrip() {
        for k in EstimatorKind::builtin() {
            assert_eq!(k.name().parse::<EstimatorKind>().unwrap(), k);
        }
        assert!("nope".parse::<EstimatorKind>().is_err());
    }

    #[test]
    fn report_entropy_offset() {
        let r = EstimateReport::new(EstimatorKind::Baee, Loss::SquaredError, 4.7);
        assert!((r.entropy_value - 2.0 * r.value - crate::model::ENTROPY_OFFSET).abs() < 1e-15);
    }

    #[test]
    fn phi_table_interpolation() {
        let t = PhiTable::new(vec![-1.0, 0.0, 1.0], vec![0.0, 1.0, 3.0]).unwrap();
        assert_eq!(t.eval(-5.0), 0.0);
        assert_eq!(t.eval(0.5), 2.0);
        assert_eq!(t.eval(9.0), 3.0);
        assert!(PhiTable::new(vec![1.0, 0.0], vec![0.0, 0.0]).is_err());
    }
}
