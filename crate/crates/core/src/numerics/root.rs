use crate::error::{Error, Result};

/// Brent's method on a bracketing interval.
///
/// Requires `f(lo)` and `f(hi)` of opposite sign (or one of them zero). Each
/// step falls back to bisection whenever the interpolation step is not
/// safely inside the bracket, so convergence is guaranteed. Terminates when
/// the bracket is narrower than `tol` or `f` hits zero exactly.
pub fn find_root<F>(mut f: F, lo: f64, hi: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    if !(lo.is_finite() && hi.is_finite()) || !(tol > 0.0) {
        return Err(Error::input(format!(
            "find_root requires finite bounds and tol > 0, got [{lo}, {hi}], tol = {tol}"
        )));
    }
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa.is_nan() || fb.is_nan() {
        return Err(Error::numeric(
            "find_root: function is NaN at a bracket end",
        ));
    }
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Bracketing {
            lo,
            hi,
            flo: fa,
            fhi: fb,
        });
    }

    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..500 {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        if d.abs() > tol1 {
            b += d;
        } else {
            b += tol1.copysign(xm);
        }
        fb = f(b);
        if fb.is_nan() {
            return Err(Error::numeric(format!("find_root: function is NaN at {b}")));
        }
    }
    Err(Error::numeric("find_root: iteration limit reached"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::special::digamma;

    #[test]
    fn linear_root() {
        let r = find_root(|x| x - 2.0, 0.0, 5.0, 1e-14).unwrap();
        assert!((r - 2.0).abs() < 1e-13);
    }

    #[test]
    fn digamma_root() {
        let target = digamma(5.0).unwrap();
        let r = find_root(|x| digamma(x).unwrap() - target, 1.0, 10.0, 1e-13).unwrap();
        assert!((r - 5.0).abs() < 1e-10);
    }

    #[test]
    fn cubic_root_at_zero() {
        let r = find_root(|x| x * x * x, -1.0, 2.0, 1e-12).unwrap();
        assert!(r.abs() < 1e-4, "{r}");
    }

    #[test]
    fn no_sign_change() {
        let err = find_root(|x| x * x + 1.0, -1.0, 1.0, 1e-10).unwrap_err();
        assert!(matches!(err, Error::Bracketing { .. }));
    }

    #[test]
    fn reversed_bracket() {
        let r = find_root(|x| x.exp() - 3.0, 5.0, -5.0, 1e-14).unwrap();
        assert!((r - 3f64.ln()).abs() < 1e-12);
    }
}
