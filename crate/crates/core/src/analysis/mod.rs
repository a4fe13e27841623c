//! Worst-case searches, sweeps and the crossover constants.

pub mod golden;
pub mod roots;
pub mod sweep;
pub mod worst;

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::model::{CrashTime, Strategy};

pub use roots::find_root;
pub use sweep::{sweep, SweepRow, SweepSpec};
pub use worst::{a1_best_worst_case, maximize_over_exit, worst_case, ExitMax, SearchOptions};

/// Chauffeuring cost at which moving together and searching alone have the
/// same worst case: the root of `(1+α) cos(π(1-α) + √(α²+2α)) - 1` in `[1.2, 1.4]`.
pub fn crossover_alpha() -> f64 {
    static VALUE: OnceLock<f64> = OnceLock::new();
    *VALUE.get_or_init(|| {
        find_root(crossover_residual, 1.2, 1.4, 0.0).expect("crossover root is bracketed")
    })
}

pub fn crossover_residual(alpha: f64) -> f64 {
    (1.0 + alpha) * (PI * (1.0 - alpha) + (alpha * alpha + 2.0 * alpha).sqrt()).cos() - 1.0
}

/// Residual of the threshold equation equalizing the together and alone
/// worst cases for a crash at `w`.
pub fn wbar_residual(alpha: f64, w: f64) -> f64 {
    let lhs = (w - 1.0) * (1.0 - alpha) + (w - 1.0).sin();
    let rhs = PI * (1.0 - alpha) - (1.0 / (1.0 + alpha)).acos() + (alpha * (alpha + 2.0)).sqrt();
    lhs - rhs
}

/// Smallest crash time in `(1, 1 + π]` at which switching from fetching to
/// searching alone keeps the worst case continuous.
pub fn solve_wbar(alpha: f64) -> Result<f64> {
    if !(alpha >= 1.0) || alpha >= crossover_alpha() {
        return Err(Error::OutOfRange {
            what: "alpha for the threshold combination (expected 1 <= alpha < crossover)",
            value: alpha,
        });
    }
    roots::first_root_in(|w| wbar_residual(alpha, w), 1.0, 1.0 + PI, 3142, 1e-13)
}

/// Grid separation minimizing A2's worst case; ties go to the larger angle.
pub fn best_zeta(
    alpha: f64,
    w: CrashTime,
    zetas: &[f64],
    opts: &SearchOptions,
) -> Result<(f64, f64)> {
    let mut best: Option<(f64, f64)> = None;
    for &zeta in zetas {
        let r = worst_case(&Strategy::A2 { zeta }, alpha, w, opts)?;
        best = match best {
            Some((bz, bt)) if r.worst_time > bt + 1e-12 || (r.worst_time >= bt - 1e-12 && zeta < bz) => {
                Some((bz, bt))
            }
            _ => Some((zeta, r.worst_time)),
        };
    }
    best.ok_or_else(|| Error::InvalidScenario("empty separation grid".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strategies::{a1_alone_evac_time, a1_alone_worst_x, a1_together_sup};

    #[test]
    fn crossover_value() {
        let a = crossover_alpha();
        assert!((a - 1.3034603314736934).abs() < 1e-12);
        assert!(crossover_residual(a).abs() < 1e-8);
        let r = find_root(crossover_residual, 1.2, 1.4, 1e-10).unwrap();
        assert!((r - 1.30346).abs() < 1e-5);
    }

    #[test]
    fn wbar_values() {
        let expected = [
            (1.0, 1.7544022972530349),
            (1.1, 1.5371577243015613),
            (1.2, 1.295791508093523),
            (1.3, 1.0110778312106403),
        ];
        for (alpha, w) in expected {
            assert!((solve_wbar(alpha).unwrap() - w).abs() < 1e-10, "alpha {alpha}");
        }
        let at_one = 1.0 + (3f64.sqrt() - PI / 3.0).asin();
        assert!((solve_wbar(1.0).unwrap() - at_one).abs() < 1e-10);
        assert!(solve_wbar(1.5).is_err());
    }

    #[test]
    fn wbar_equalizes_the_worst_cases() {
        for alpha in [1.0, 1.1, 1.25] {
            let w = solve_wbar(alpha).unwrap();
            let together = a1_together_sup(alpha, w).unwrap();
            let alone = a1_alone_evac_time(alpha, w, a1_alone_worst_x(alpha, w)).unwrap();
            assert!((together - alone).abs() < 1e-6, "alpha {alpha}");
        }
    }
}
