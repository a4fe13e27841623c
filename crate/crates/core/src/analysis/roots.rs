use crate::error::{Error, Result};

/// Bisection on a sign-changing bracket; returns the midpoint once `hi - lo <= tol`.
pub fn find_root<F>(f: F, lo: f64, hi: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let (mut lo, mut hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if !(f_lo * f_hi < 0.0) {
        return Err(Error::InvalidBracket { lo, hi, f_lo, f_hi });
    }
    let tol = tol.max(0.0);
    // the iteration cap guards against tol below the spacing of doubles
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Scans `[lo, hi]` left to right in `steps` cells and bisects the first sign change.
pub fn first_root_in<F>(f: F, lo: f64, hi: f64, steps: usize, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let h = (hi - lo) / steps as f64;
    let mut a = lo;
    let mut fa = f(a);
    for i in 1..=steps {
        let b = if i == steps { hi } else { lo + h * i as f64 };
        let fb = f(b);
        if fa == 0.0 {
            return Ok(a);
        }
        if fa * fb <= 0.0 {
            return find_root(&f, a, b, tol);
        }
        a = b;
        fa = fb;
    }
    Err(Error::NoRoot(format!("no sign change on [{lo}, {hi}]")))
}

/// Scans `[lo, hi]` right to left and bisects the last sign change.
pub fn last_root_in<F>(f: F, lo: f64, hi: f64, steps: usize, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let h = (hi - lo) / steps as f64;
    let mut b = hi;
    let mut fb = f(b);
    for i in (0..steps).rev() {
        let a = if i == 0 { lo } else { lo + h * i as f64 };
        let fa = f(a);
        if fb == 0.0 {
            return Ok(b);
        }
        if fa * fb <= 0.0 {
            return find_root(&f, a, b, tol);
        }
        b = a;
        fb = fa;
    }
    Err(Error::NoRoot(format!("no sign change on [{lo}, {hi}]")))
}
