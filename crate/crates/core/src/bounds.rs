//! Piecewise lower bound on the evacuation time of any algorithm.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::CrashTime;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LowerBoundCase {
    /// Crash before reaching the perimeter.
    CenterCrash,
    /// Crash on the perimeter, maximized over the exploration length.
    InnerMax,
    /// Crash before the robots can meet at the midpoint of the fault-free run.
    PreMidpoint,
    /// Crash after the midpoint meeting time.
    PostMidpoint,
    /// Crash too late to matter.
    FaultFree,
}

impl LowerBoundCase {
    pub fn as_str(self) -> &'static str {
        match self {
            LowerBoundCase::CenterCrash => "center-crash",
            LowerBoundCase::InnerMax => "inner-max",
            LowerBoundCase::PreMidpoint => "pre-midpoint",
            LowerBoundCase::PostMidpoint => "post-midpoint",
            LowerBoundCase::FaultFree => "fault-free",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundBreakdown {
    pub value: f64,
    pub active_case: LowerBoundCase,
    pub t_star: Option<f64>,
}

fn fault_free() -> f64 {
    1.0 + 2.0 * PI / 3.0 + 3f64.sqrt()
}

/// Start of the affine pieces.
fn third() -> f64 {
    1.0 + 2.0 * PI / 3.0
}

fn inner_maximand(alpha: f64, t: f64) -> f64 {
    1.0 + t + 2.0 * (alpha + 1.0) * (t / 4.0).cos()
}

/// Maximizer and maximum of the inner piece for `1 <= w <= 1 + 2π/3`.
fn inner_max(alpha: f64, w: f64) -> (f64, f64) {
    let lo = w - 1.0;
    let hi = TAU - 2.0 * (w - 1.0);
    let stationary = 4.0 * (2.0 / (alpha + 1.0)).min(1.0).asin();
    let mut best = (lo, inner_maximand(alpha, lo));
    for t in [stationary, hi] {
        if (lo..=hi).contains(&t) {
            let v = inner_maximand(alpha, t);
            if v > best.1 {
                best = (t, v);
            }
        }
    }
    best
}

fn check(alpha: f64, w: f64) -> Result<()> {
    if !(alpha >= 1.0) || !alpha.is_finite() {
        return Err(Error::OutOfRange {
            what: "alpha",
            value: alpha,
        });
    }
    if !(w >= 0.0) {
        return Err(Error::OutOfRange {
            what: "crash time",
            value: w,
        });
    }
    Ok(())
}

/// Lower bound for crash time `w`; at a piece boundary the larger adjacent
/// piece wins.
pub fn lower_bound(alpha: f64, w: CrashTime) -> Result<LowerBoundBreakdown> {
    let w = match w {
        CrashTime::Never => {
            check(alpha, 0.0)?;
            return Ok(LowerBoundBreakdown {
                value: fault_free(),
                active_case: LowerBoundCase::FaultFree,
                t_star: None,
            });
        }
        CrashTime::At(w) => w,
    };
    check(alpha, w)?;
    let sqrt3 = 3f64.sqrt();
    let mut pieces: Vec<(f64, LowerBoundCase, Option<f64>)> = Vec::with_capacity(2);
    if w <= 1.0 {
        pieces.push((TAU + w + alpha * (1.0 - w), LowerBoundCase::CenterCrash, None));
    }
    if (1.0..=third()).contains(&w) {
        let (t, v) = inner_max(alpha, w);
        pieces.push((v, LowerBoundCase::InnerMax, Some(t)));
    }
    if (third()..=third() + sqrt3 / 2.0).contains(&w) {
        pieces.push((
            third() + (alpha + 1.0) * (third() + sqrt3 - w),
            LowerBoundCase::PreMidpoint,
            None,
        ));
    }
    if (third() + sqrt3 / 2.0..=fault_free()).contains(&w) {
        pieces.push((
            fault_free() + (alpha - 1.0) * (fault_free() - w),
            LowerBoundCase::PostMidpoint,
            None,
        ));
    }
    if w >= fault_free() {
        pieces.push((fault_free(), LowerBoundCase::FaultFree, None));
    }
    let (value, active_case, t_star) = pieces
        .into_iter()
        .fold(None, |best: Option<(f64, LowerBoundCase, Option<f64>)>, p| match best {
            Some(b) if b.0 >= p.0 => Some(b),
            _ => Some(p),
        })
        .ok_or_else(|| Error::Internal(format!("no lower-bound piece covers w = {w}")))?;
    Ok(LowerBoundBreakdown {
        value,
        active_case,
        t_star,
    })
}

/// Bound from a crash at the very moment the exit is found, for
/// `1 <= w <= 1 + 2π/3`.
pub fn lower_bound_case1(alpha: f64, w: f64) -> Result<f64> {
    check(alpha, w)?;
    if !(1.0..=third() + 1e-12).contains(&w) {
        return Err(Error::OutOfRange {
            what: "crash time for the found-exit crash bound",
            value: w,
        });
    }
    Ok(w + 2.0 * (alpha + 1.0) * ((TAU - (w - 1.0)) / 4.0).sin())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lb(alpha: f64, w: f64) -> LowerBoundBreakdown {
        lower_bound(alpha, CrashTime::At(w)).unwrap()
    }

    #[test]
    fn examples() {
        assert!((lb(1.0, 0.0).value - (TAU + 1.0)).abs() < 1e-12);
        for alpha in [1.0, 1.5, 4.0] {
            let b = lb(alpha, fault_free());
            assert!((b.value - (1.0 + 2.0 * PI / 3.0 + 3f64.sqrt())).abs() < 1e-12);
            assert!((b.value - 4.826).abs() < 1e-3);
        }
        let b = lb(2.0, 1.5);
        assert_eq!(b.active_case, LowerBoundCase::InnerMax);
        let t = b.t_star.unwrap();
        assert!((t - 2.9189106249078653).abs() < 1e-12);
        assert!((b.value - 8.391046579907446).abs() < 1e-9);
        assert_eq!(lower_bound(2.0, CrashTime::Never).unwrap().value, fault_free());
        assert!(lower_bound(0.5, CrashTime::At(1.0)).is_err());
        assert!(lower_bound(1.5, CrashTime::At(-0.1)).is_err());
    }

    #[test]
    fn inner_max_against_dense_grid() {
        for alpha in [1.0, 1.30346, 1.5, 2.0, 3.0] {
            for k in 0..=20 {
                let w = 1.0 + (third() - 1.0) * k as f64 / 20.0;
                let (lo, hi) = (w - 1.0, TAU - 2.0 * (w - 1.0));
                let grid = (0..=10_000)
                    .map(|i| inner_maximand(alpha, lo + (hi - lo) * i as f64 / 10_000.0))
                    .fold(f64::MIN, f64::max);
                let (_, v) = inner_max(alpha, w);
                assert!(v >= grid - 1e-12 && v - grid < 1e-6, "alpha {alpha} w {w}");
            }
        }
    }

    #[test]
    fn case1_examples() {
        assert!((lower_bound_case1(1.0, 1.0).unwrap() - 5.0).abs() < 1e-12);
        let v = lower_bound_case1(1.0, third()).unwrap();
        assert!((v - (third() + 2.0 * 3f64.sqrt())).abs() < 1e-12);
        assert!(lower_bound_case1(1.30346, 2.0).unwrap().is_finite());
        assert!(lower_bound_case1(1.0, 0.5).is_err());
    }

    #[test]
    fn continuity_and_anchor() {
        let s3 = 3f64.sqrt();
        for alpha in [1.0, 1.30346, 1.5, 2.0] {
            for b in [third(), third() + s3 / 2.0, fault_free()] {
                let d = 1e-6;
                let v = lb(alpha, b).value;
                assert!((lb(alpha, b - d).value - v).abs() <= 10.0 * d);
                assert!((lb(alpha, b + d).value - v).abs() <= 10.0 * d);
            }
            let anchor = third() + (alpha + 1.0) * s3;
            assert!((inner_maximand(alpha, 2.0 * PI / 3.0) - anchor).abs() < 1e-12);
            assert!((lb(alpha, third()).value - anchor).abs() < 1e-9);
        }
    }

    proptest! {
        #[test]
        fn monotone_in_alpha(a in 1.0f64..4.0, da in 0.0f64..3.0, w in 0.0f64..8.0) {
            let lo = lb(a, w).value;
            let hi = lb(a + da, w).value;
            prop_assert!(lo <= hi + 1e-12);
        }

        #[test]
        fn t_star_in_interval(a in 1.0f64..4.0, w in 1.0f64..3.094) {
            let b = lb(a, w);
            if let Some(t) = b.t_star {
                prop_assert!(t >= w - 1.0 - 1e-12 && t <= TAU - 2.0 * (w - 1.0) + 1e-12);
            }
        }
    }
}
