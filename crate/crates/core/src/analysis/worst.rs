//! Adversarial exit placement.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use super::golden::golden_max;
use crate::error::{Error, Result};
use crate::geometry::normalize_angle;
use crate::model::{CrashTime, FaultModel, RobotId, Strategy, StrategyId, WorstCaseRecord};
use crate::strategies::a2::Role;
use crate::strategies::{
    a0_evac_time, a1_evac_time, A1Response, A2Cell, A2Layout, A2Params, A2Pickup, ShortFinish,
};

/// Offset used to probe one-sided limits at candidate boundaries.
pub const BOUNDARY_OFFSET: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchOptions {
    /// Number of uniform grid points on `[0, 2π)`.
    pub resolution: usize,
    /// Golden-section stopping width.
    pub tolerance: f64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            resolution: 2048,
            tolerance: 1e-9,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExitMax {
    pub x: f64,
    pub time: f64,
    pub supremum: bool,
}

/// Maximizes `f` over `x ∈ [0, 2π)`.
///
/// A uniform grid seeds golden-section refinement of every local maximum.
/// Each candidate boundary is also probed on both sides; when a one-sided
/// limit (linear extrapolation from two offset samples) exceeds the value at
/// the boundary, it is reported as a supremum located at the boundary.
pub fn maximize_over_exit<F>(f: F, candidates: &[f64], opts: &SearchOptions) -> ExitMax
where
    F: Fn(f64) -> f64,
{
    let n = opts.resolution.max(3);
    let h = TAU / n as f64;
    let last = TAU - BOUNDARY_OFFSET;
    let grid: Vec<f64> = (0..n).map(|i| f(h * i as f64)).collect();
    let mut best = ExitMax {
        x: 0.0,
        time: f64::NEG_INFINITY,
        supremum: false,
    };
    let offer = |x: f64, time: f64, supremum: bool, best: &mut ExitMax| {
        if time > best.time {
            *best = ExitMax { x, time, supremum };
        }
    };
    for (i, &g) in grid.iter().enumerate() {
        offer(h * i as f64, g, false, &mut best);
    }
    for i in 0..n {
        let left = if i == 0 { f64::NEG_INFINITY } else { grid[i - 1] };
        let right = if i + 1 == n { f64::NEG_INFINITY } else { grid[i + 1] };
        if grid[i] > left && grid[i] >= right {
            let lo = if i == 0 { 0.0 } else { h * (i - 1) as f64 };
            let hi = (h * (i + 1) as f64).min(last);
            let (x, v) = golden_max(&f, lo, hi, opts.tolerance);
            offer(x, v, false, &mut best);
        }
    }
    for &b in candidates {
        if !(0.0..=TAU).contains(&b) {
            continue;
        }
        let at = (b < TAU).then(|| f(b));
        if let Some(v) = at {
            offer(b, v, false, &mut best);
        }
        let reference = at.unwrap_or(f64::NEG_INFINITY);
        for side in [-1.0, 1.0] {
            let near = b + side * BOUNDARY_OFFSET;
            let far = b + side * 2.0 * BOUNDARY_OFFSET;
            if !(0.0..TAU).contains(&near) || !(0.0..TAU).contains(&far) {
                continue;
            }
            let (v1, v2) = (f(near), f(far));
            offer(near, v1, false, &mut best);
            let limit = 2.0 * v1 - v2;
            if limit > reference + 1e-7 && limit > best.time {
                best = ExitMax {
                    x: b,
                    time: limit,
                    supremum: true,
                };
            }
        }
    }
    best
}

fn base_candidates(alpha: f64, w: CrashTime) -> Vec<f64> {
    let mut c = vec![0.0, TAU, PI, 2.0 * PI / 3.0, 4.0 * PI / 3.0];
    if let CrashTime::At(w) = w {
        c.push(w - 1.0);
        c.push(TAU - (w - 1.0));
        c.push(w - 1.0 + 2.0 * (1.0 / (1.0 + alpha)).acos());
    }
    c
}

fn record(
    strategy: &Strategy,
    alpha: f64,
    w: CrashTime,
    best: ExitMax,
    faulty: Option<RobotId>,
) -> WorstCaseRecord {
    WorstCaseRecord {
        strategy_id: strategy.id(),
        alpha,
        w,
        zeta: strategy.zeta(),
        worst_x: best.x,
        worst_time: best.time,
        supremum: best.supremum,
        faulty_robot: faulty,
    }
}

/// Worst case of A2 against a given faulty robot.
pub fn a2_worst_for(
    alpha: f64,
    w: CrashTime,
    params: &A2Params,
    faulty: RobotId,
    pickup: A2Pickup,
    opts: &SearchOptions,
) -> ExitMax {
    let layout = A2Layout::new(params, faulty);
    let cell = A2Cell::new(alpha, w, layout, pickup);
    let zf = layout.zeta_f;
    let mut candidates = vec![0.0, TAU, zf];
    if let CrashTime::At(w) = w {
        candidates.extend([w - 1.0, zf + w - 1.0]);
        if let ShortFinish::CatchUp { chord } = params.finish {
            let short = if layout.faulty_short {
                Role::Faulty
            } else {
                Role::Survivor
            };
            let meet = layout.landing(short) + 2.0 * params.short_arc + chord;
            candidates.push(normalize_angle(meet));
            candidates.push(normalize_angle(meet + w - 1.0 - params.short_arc - chord));
        }
    }
    maximize_over_exit(|x| cell.evaluate(x).time, &candidates, opts)
}

/// Supremum of the evacuation time over exit positions.
///
/// For A2 the adversary also picks which robot is crash-prone; A0 and A1 are
/// mirror-symmetric in that choice.
pub fn worst_case(
    strategy: &Strategy,
    alpha: f64,
    w: CrashTime,
    opts: &SearchOptions,
) -> Result<WorstCaseRecord> {
    FaultModel::new(alpha, w, RobotId::R1).validate()?;
    let fault = FaultModel::new(alpha, w, RobotId::R1);
    let eval_err = |e: Error| Error::Mismatch(format!("{}: {e}", strategy.id()));
    match *strategy {
        Strategy::A0 => {
            a0_evac_time(alpha, w, 0.0).map_err(eval_err)?;
            let best = maximize_over_exit(
                |x| a0_evac_time(alpha, w, x).unwrap_or(f64::NAN),
                &base_candidates(alpha, w),
                opts,
            );
            Ok(record(strategy, alpha, w, best, None))
        }
        Strategy::A2 { zeta } => {
            let params = A2Params::new(zeta).map_err(eval_err)?;
            let mut best = a2_worst_for(alpha, w, &params, RobotId::R1, A2Pickup::AfterOwnArc, opts);
            let mut faulty = RobotId::R1;
            if !w.is_never() {
                let other = a2_worst_for(alpha, w, &params, RobotId::R2, A2Pickup::AfterOwnArc, opts);
                if other.time > best.time {
                    best = other;
                    faulty = RobotId::R2;
                }
            }
            Ok(record(strategy, alpha, w, best, Some(faulty)))
        }
        _ => {
            let response = match *strategy {
                Strategy::A1Together => A1Response::Together,
                Strategy::A1Alone => A1Response::Alone,
                Strategy::A1Combined { wbar } => A1Response::Combined { wbar },
                Strategy::A1Delayed { y } => A1Response::Delayed { y },
                _ => unreachable!("handled above"),
            };
            // surface parameter errors once instead of per probe
            a1_evac_time(response, &fault, 0.5).map_err(eval_err)?;
            let mut candidates = base_candidates(alpha, w);
            if let (A1Response::Delayed { y }, CrashTime::At(w)) = (response, w) {
                candidates.push(TAU - (w - 1.0) - y);
            }
            let best = maximize_over_exit(
                |x| a1_evac_time(response, &fault, x).unwrap_or(f64::NAN),
                &candidates,
                opts,
            );
            if best.time.is_nan() {
                return Err(Error::Internal("evaluation produced NaN".into()));
            }
            Ok(record(strategy, alpha, w, best, Some(RobotId::R1)))
        }
    }
}

/// The A1 row of the sweep: the threshold combination below the crossover
/// cost, otherwise the better of the two pure responses.
pub fn a1_best_worst_case(
    alpha: f64,
    w: CrashTime,
    opts: &SearchOptions,
) -> Result<WorstCaseRecord> {
    if alpha < super::crossover_alpha() {
        if let Ok(wbar) = super::solve_wbar(alpha) {
            return worst_case(&Strategy::A1Combined { wbar }, alpha, w, opts);
        }
    }
    let together = worst_case(&Strategy::A1Together, alpha, w, opts)?;
    let alone = worst_case(&Strategy::A1Alone, alpha, w, opts)?;
    Ok(if alone.worst_time < together.worst_time {
        alone
    } else {
        together
    })
}

/// Strategy ids accepted by the worst-case entry points.
pub fn is_a1(id: StrategyId) -> bool {
    matches!(
        id,
        StrategyId::A1Together | StrategyId::A1Alone | StrategyId::A1Combined | StrategyId::A1Delayed
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> SearchOptions {
        SearchOptions::default()
    }

    #[test]
    fn fault_free_a1() {
        let r = worst_case(&Strategy::A1Together, 1.0, CrashTime::Never, &opts()).unwrap();
        assert!((r.worst_time - (1.0 + 2.0 * PI / 3.0 + 3f64.sqrt())).abs() < 1e-9);
        assert!((r.worst_x - 2.0 * PI / 3.0).abs() < 1e-4 || (r.worst_x - 4.0 * PI / 3.0).abs() < 1e-4);
    }

    #[test]
    fn alone_alpha_two() {
        let r = worst_case(&Strategy::A1Alone, 2.0, CrashTime::At(1.0), &opts()).unwrap();
        assert!((r.worst_time - 10.478120721990418).abs() < 1e-8);
    }

    #[test]
    fn a0_supremum_is_flagged() {
        let r = worst_case(&Strategy::A0, 1.5, CrashTime::At(0.0), &opts()).unwrap();
        assert!(r.supremum);
        assert_eq!(r.worst_x, TAU);
        assert!((r.worst_time - 10.92477796076938).abs() < 1e-9);
    }

    #[test]
    fn together_with_no_unexplored_arc() {
        let r = worst_case(&Strategy::A1Together, 1.0, CrashTime::At(1.0 + TAU), &opts()).unwrap();
        assert!((r.worst_time - (1.0 + 2.0 * PI / 3.0 + 3f64.sqrt())).abs() < 1e-9);
    }

    #[test]
    fn refinement_dominates_grid_and_is_stable() {
        let coarse = opts();
        let fine = SearchOptions {
            resolution: 4 * coarse.resolution,
            ..coarse
        };
        let cases = [
            (Strategy::A0, 1.3, CrashTime::At(0.4)),
            (Strategy::A1Alone, 1.7, CrashTime::At(1.4)),
            (Strategy::A1Together, 1.2, CrashTime::At(2.3)),
            (Strategy::A2 { zeta: PI }, 1.5, CrashTime::At(2.0)),
            (Strategy::A2 { zeta: 1.1 }, 2.0, CrashTime::At(0.7)),
        ];
        for (s, a, w) in cases {
            let r = worst_case(&s, a, w, &coarse).unwrap();
            let r4 = worst_case(&s, a, w, &fine).unwrap();
            assert!((r.worst_time - r4.worst_time).abs() < 1e-4, "{s:?}");
            let fault = FaultModel::new(a, w, RobotId::R1);
            for i in 0..coarse.resolution {
                let x = TAU * i as f64 / coarse.resolution as f64;
                let v = crate::strategies::evacuation_time(&s, &fault, x).unwrap();
                assert!(r.worst_time >= v - 1e-12);
            }
        }
    }

    #[test]
    fn mismatched_parameters_are_rejected() {
        let r = worst_case(&Strategy::A1Delayed { y: -0.5 }, 1.5, CrashTime::At(2.5), &opts());
        assert!(matches!(r, Err(Error::Mismatch(_))));
        let r = worst_case(&Strategy::A2 { zeta: 7.0 }, 1.5, CrashTime::At(2.5), &opts());
        assert!(matches!(r, Err(Error::Mismatch(_))));
    }
}
