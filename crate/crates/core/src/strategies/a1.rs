//! Opposite-direction search from a common landing point.
//!
//! R1 sweeps CCW and R2 sweeps CW. The formulas below take R1 as the faulty
//! robot; a faulty R2 is its mirror image, `x -> 2π - x`.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use super::{after_exit_found, check_alpha, check_exit, effective_faulty};
use crate::error::{Error, Result};
use crate::geometry::{circle_point, euclidean_distance, Point};
use crate::model::{CrashTime, FaultModel, RobotId};

/// What the survivor does when it learns of a crash before the exit is known.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "response", rename_all = "kebab-case")]
pub enum A1Response {
    /// Fetch the crashed robot at once and sweep its side together.
    Together,
    /// Keep searching alone, fetch the crashed robot after finding the exit.
    Alone,
    /// `Together` for crashes before `wbar`, `Alone` afterwards.
    Combined { wbar: f64 },
    /// Search a further arc `y` before fetching.
    Delayed { y: f64 },
}

/// Sweep length left unexplored at crash time `w`.
fn unexplored(w: f64) -> f64 {
    (TAU - 2.0 * (w - 1.0)).max(0.0)
}

fn check_regime_w(w: f64) -> Result<()> {
    if w >= 1.0 {
        Ok(())
    } else {
        Err(Error::Regime(format!(
            "crash at w = {w} happens before landing; use the moving-together form"
        )))
    }
}

fn check_unexplored(w: f64, x: f64) -> Result<()> {
    if x + 1e-12 < w - 1.0 {
        Err(Error::Regime(format!("exit x = {x} lies in the arc explored before w = {w}")))
    } else {
        Ok(())
    }
}

/// Survivor fetches the crashed robot over the chord, then they sweep its side.
pub fn a1_together_evac_time(alpha: f64, w: f64, x: f64) -> Result<f64> {
    check_alpha(alpha)?;
    check_regime_w(w)?;
    check_unexplored(w, x)?;
    Ok(w + 2.0 * (w - 1.0).sin() + alpha * (x - w + 1.0))
}

/// Supremum of the together response over the unexplored arc.
pub fn a1_together_sup(alpha: f64, w: f64) -> Result<f64> {
    check_alpha(alpha)?;
    check_regime_w(w)?;
    Ok(w + 2.0 * (w - 1.0).sin() + alpha * unexplored(w))
}

/// Survivor keeps sweeping, then fetches the crashed robot.
///
/// For `w < 1` the crashed robot lies on the radius at distance `w`, and the
/// survivor reaches the exit after a CW arc of `(2π - x) mod 2π`.
pub fn a1_alone_evac_time(alpha: f64, w: f64, x: f64) -> Result<f64> {
    check_alpha(alpha)?;
    check_exit(x)?;
    if !(w >= 0.0) {
        return Err(Error::OutOfRange {
            what: "crash time",
            value: w,
        });
    }
    if w >= 1.0 {
        check_unexplored(w, x)?;
        let back = 2.0 * ((x - (w - 1.0)) / 2.0).sin();
        Ok(1.0 + TAU - x + (1.0 + alpha) * back)
    } else {
        let travelled = if x == 0.0 { 0.0 } else { TAU - x };
        let crash = Point::new(w, 0.0);
        Ok(1.0 + travelled + (1.0 + alpha) * euclidean_distance(crash, circle_point(x)))
    }
}

/// Exit placement that maximizes the alone response for a crash at `w >= 1`.
pub fn a1_alone_worst_x(alpha: f64, w: f64) -> f64 {
    w - 1.0 + 2.0 * (1.0 / (1.0 + alpha)).acos()
}

pub fn a1_combined_evac_time(alpha: f64, w: f64, x: f64, wbar: f64) -> Result<f64> {
    if w < wbar {
        if w < 1.0 {
            check_alpha(alpha)?;
            return Ok(w + alpha * (x - w + 1.0));
        }
        a1_together_evac_time(alpha, w, x)
    } else {
        a1_alone_evac_time(alpha, w, x)
    }
}

/// Delayed response with the exit still unexplored at crash time `w >= 1`.
pub fn a1_delayed_evac_time(alpha: f64, w: f64, x: f64, y: f64) -> Result<f64> {
    check_alpha(alpha)?;
    check_regime_w(w)?;
    check_unexplored(w, x)?;
    if !(y >= 0.0) {
        return Err(Error::OutOfRange {
            what: "search delay y",
            value: y,
        });
    }
    // a delay longer than the unexplored arc just finishes the search alone
    let y = y.min(unexplored(w));
    if x < TAU - (w - 1.0) - y {
        Ok(w + y + 2.0 * (w - 1.0 + y / 2.0).sin() + alpha * (x - w + 1.0))
    } else {
        a1_alone_evac_time(alpha, w, x)
    }
}

fn check_delay(w: f64, y: f64) -> Result<()> {
    let y_max = unexplored(w);
    if !(y >= 0.0) || y > y_max + 1e-12 {
        return Err(Error::OutOfRange {
            what: "search delay y",
            value: y,
        });
    }
    Ok(())
}

/// Supremum of the delayed response, reached as the exit approaches the far
/// end of the delay arc.
pub fn delayed_pickup_time(alpha: f64, w: f64, y: f64) -> Result<f64> {
    check_alpha(alpha)?;
    check_regime_w(w)?;
    check_delay(w, y)?;
    Ok(w + y + 2.0 * (w - 1.0 + y / 2.0).sin() + alpha * (TAU - 2.0 * (w - 1.0) - y))
}

/// Full piecewise evacuation time, including exits found before the crash.
pub fn a1_evac_time(response: A1Response, fault: &FaultModel, x: f64) -> Result<f64> {
    let alpha = fault.alpha;
    check_alpha(alpha)?;
    check_exit(x)?;
    if let A1Response::Delayed { y } = response {
        if !(y >= 0.0) {
            return Err(Error::OutOfRange {
                what: "search delay y",
                value: y,
            });
        }
    }
    // reduce to a faulty R1
    let x = if effective_faulty(fault) == RobotId::R2 && x > 0.0 {
        TAU - x
    } else {
        x
    };
    let (found, faulty_found_it) = if x <= PI {
        (1.0 + x, true)
    } else {
        (1.0 + TAU - x, false)
    };
    let gap = 2.0 * x.sin().abs();
    let w = match fault.crash_time {
        CrashTime::At(w) if w < found => w,
        w => return Ok(after_exit_found(alpha, w, found, gap, faulty_found_it)),
    };
    let fetch_now = match response {
        A1Response::Together | A1Response::Delayed { .. } => true,
        A1Response::Alone => false,
        A1Response::Combined { wbar } => w < wbar,
    };
    if w < 1.0 {
        return if fetch_now {
            Ok(w + alpha * (x - w + 1.0))
        } else {
            a1_alone_evac_time(alpha, w, x)
        };
    }
    match response {
        A1Response::Delayed { y } => a1_delayed_evac_time(alpha, w, x, y),
        _ if fetch_now => a1_together_evac_time(alpha, w, x),
        _ => a1_alone_evac_time(alpha, w, x),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fault(alpha: f64, w: CrashTime) -> FaultModel {
        FaultModel::new(alpha, w, RobotId::R1)
    }

    #[test]
    fn together_examples() {
        let t = a1_together_sup(1.0, 1.0).unwrap();
        assert!((t - (1.0 + TAU)).abs() < 1e-12);
        let t = a1_together_evac_time(1.0, 2.0, TAU - 1.0).unwrap();
        assert!((t - 7.96612727679538).abs() < 1e-9);
        assert!(matches!(a1_together_evac_time(1.0, 0.5, 1.0), Err(Error::Regime(_))));
    }

    #[test]
    fn together_critical_point_at_alpha_1_2() {
        let alpha = 1.2;
        let (mut best_w, mut best) = (1.0, f64::MIN);
        let n = 200_000;
        for i in 0..=n {
            let w = 1.0 + PI * i as f64 / n as f64;
            let v = a1_together_sup(alpha, w).unwrap();
            if v > best {
                best = v;
                best_w = w;
            }
        }
        assert!((best_w - 1.7953988301841437).abs() < 1e-3, "argmax {best_w}");
    }

    #[test]
    fn alone_examples() {
        let x = a1_alone_worst_x(1.0, 1.0);
        assert!((x - 2.0 * PI / 3.0).abs() < 1e-12);
        let t = a1_alone_evac_time(1.0, 1.0, x).unwrap();
        let expected = 1.0 + TAU - 2.0 * PI / 3.0 + 2.0 * 3f64.sqrt();
        assert!((t - expected).abs() < 1e-9);
        assert!((expected - 8.6529).abs() < 1e-3);
        let t = a1_alone_evac_time(1.0, 1.0 + PI, PI).unwrap();
        assert!((t - (1.0 + PI)).abs() < 1e-12);
        let early = a1_alone_evac_time(2.0, 1.5, 3.0).unwrap();
        let late = a1_alone_evac_time(2.0, 2.0, 3.0).unwrap();
        assert!(early > late);
    }

    #[test]
    fn alone_closed_form_supremum() {
        for alpha in [1.0, 1.3, 2.0, 3.5] {
            let x = a1_alone_worst_x(alpha, 1.0);
            let t = a1_alone_evac_time(alpha, 1.0, x).unwrap();
            let closed = 1.0 + TAU - 2.0 * (1.0 / (1.0 + alpha)).acos()
                + 2.0 * (alpha * alpha + 2.0 * alpha).sqrt();
            assert!((t - closed).abs() < 1e-9);
        }
    }

    #[test]
    fn combined_dispatch() {
        let wbar = 1.5371577243015613;
        let (alpha, x) = (1.1, 4.0);
        assert_eq!(
            a1_combined_evac_time(alpha, 1.0, x, wbar).unwrap(),
            a1_together_evac_time(alpha, 1.0, x).unwrap()
        );
        assert_eq!(
            a1_combined_evac_time(alpha, 3.0, x, wbar).unwrap(),
            a1_alone_evac_time(alpha, 3.0, x).unwrap()
        );
    }

    #[test]
    fn delayed_examples() {
        for (alpha, w) in [(1.0, 1.0), (1.7, 1.8), (2.5, 2.9)] {
            let f = delayed_pickup_time(alpha, w, 0.0).unwrap();
            assert!((f - a1_together_sup(alpha, w).unwrap()).abs() < 1e-12);
        }
        let f = delayed_pickup_time(1.0, 1.0, PI).unwrap();
        assert!((f - (3.0 + TAU)).abs() < 1e-12);
        assert!(delayed_pickup_time(1.0, 2.0, 6.0).is_err());
        assert!(delayed_pickup_time(1.0, 0.5, 1.0).is_err());
    }

    #[test]
    fn fault_free_worst_case_value() {
        let f = fault(1.7, CrashTime::Never);
        let t = a1_evac_time(A1Response::Alone, &f, 2.0 * PI / 3.0).unwrap();
        assert!((t - (1.0 + 2.0 * PI / 3.0 + 3f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn early_crash_together_matches_moving_together() {
        for (alpha, w, x) in [(1.5, 0.3, 2.0), (2.0, 0.9, 5.5), (1.0, 0.0, 0.1)] {
            let t = a1_evac_time(A1Response::Together, &fault(alpha, CrashTime::At(w)), x).unwrap();
            let a0 = super::super::a0_evac_time(alpha, CrashTime::At(w), x).unwrap();
            assert!((t - a0).abs() < 1e-12);
        }
    }

    #[test]
    fn faulty_r2_is_the_mirror_image() {
        let f1 = fault(1.4, CrashTime::At(1.6));
        let f2 = FaultModel::new(1.4, CrashTime::At(1.6), RobotId::R2);
        for x in [0.0, 0.4, 1.0, 3.0, 5.0] {
            let mirrored = if x == 0.0 { 0.0 } else { TAU - x };
            let a = a1_evac_time(A1Response::Alone, &f2, x).unwrap();
            let b = a1_evac_time(A1Response::Alone, &f1, mirrored).unwrap();
            assert_eq!(a, b);
        }
    }
}
