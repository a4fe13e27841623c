//! Randomized agreement between the closed forms and the simulator.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::{circle_point, euclidean_distance, Point};
use crate::model::{CrashTime, ExitPlacement, FaultModel, RobotId, Scenario, Strategy};
use crate::simulator::{simulate, MotionProgram};
use crate::strategies::a2::{
    fetch_first_time, fetch_first_time_as_printed, late_crash_time, survivor_first_time,
};
use crate::strategies::{
    a0_evac_time, a1_alone_evac_time, a1_together_evac_time, a2_crash_position,
    a2_meeting_chord, coincidence_zeta, delayed_pickup_time, A2Pickup,
};

/// Distance below the end of the delay arc at which the delayed response's
/// supremum is probed; well above the simulator's geometric tolerance.
const PROBE_OFFSET: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValidationConfig {
    pub samples: usize,
    pub seed: u64,
    pub tolerance: f64,
}

impl Default for ValidationConfig {
    fn default() -> Self {
        ValidationConfig {
            samples: 10_000,
            seed: 2024,
            tolerance: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormulaCheck {
    pub name: String,
    pub samples: usize,
    pub max_error: f64,
    pub mismatches: usize,
    /// First disagreeing sample, if any.
    pub first_mismatch: Option<String>,
}

impl FormulaCheck {
    pub fn passed(&self) -> bool {
        self.mismatches == 0
    }
}

/// How far the fetch-first formula as printed is from the simulated time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrintedFormulaReport {
    pub samples: usize,
    pub max_abs_difference: f64,
    /// Largest deviation of `(simulated - printed) / α` from 2.
    pub max_offset_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub config: ValidationConfig,
    pub checks: Vec<FormulaCheck>,
    pub fetch_first_as_printed: PrintedFormulaReport,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(FormulaCheck::passed)
    }
}

fn simulated(strategy: Strategy, pickup: A2Pickup, alpha: f64, w: f64, x: f64) -> Result<f64> {
    let scenario = Scenario::new(
        FaultModel::new(alpha, CrashTime::At(w), RobotId::R1),
        ExitPlacement::new(x),
        strategy.params(),
    );
    Ok(simulate(&MotionProgram::new(strategy).with_pickup(pickup), &scenario)?.evac_time)
}

struct Checker<'a> {
    cfg: &'a ValidationConfig,
    check: FormulaCheck,
}

impl<'a> Checker<'a> {
    fn new(cfg: &'a ValidationConfig, name: &str) -> Self {
        Checker {
            cfg,
            check: FormulaCheck {
                name: name.to_string(),
                samples: 0,
                max_error: 0.0,
                mismatches: 0,
                first_mismatch: None,
            },
        }
    }

    fn record(&mut self, formula: f64, sim: f64, describe: impl FnOnce() -> String) {
        let err = (formula - sim).abs();
        self.check.samples += 1;
        self.check.max_error = self.check.max_error.max(err);
        if !(err <= self.cfg.tolerance) {
            self.check.mismatches += 1;
            if self.check.first_mismatch.is_none() {
                self.check.first_mismatch = Some(format!("{}: formula {formula} simulated {sim}", describe()));
            }
        }
    }
}

fn alpha(rng: &mut ChaCha8Rng) -> f64 {
    rng.gen_range(1.0..3.0)
}

/// Short arc with a catch-up chord, away from the degenerate ends.
fn catch_up_zeta(rng: &mut ChaCha8Rng) -> (f64, f64) {
    let zeta = rng.gen_range(0.05..coincidence_zeta() - 0.05);
    let m = a2_meeting_chord(zeta).expect("zeta is inside the catch-up range");
    (zeta, m)
}

/// Survivor's position at time `w` for a faulty R1 owning the short arc.
fn survivor_position(zeta: f64, w: f64) -> Point {
    if w < 1.0 {
        circle_point(zeta) * w
    } else {
        circle_point(zeta + w - 1.0)
    }
}

/// Runs every formula check with `cfg.samples` random scenarios each.
pub fn run_validation(cfg: &ValidationConfig) -> Result<ValidationReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n = cfg.samples;
    let mut checks = Vec::new();

    let mut c = Checker::new(cfg, "z0");
    for _ in 0..n {
        let (a, w, x) = (alpha(&mut rng), rng.gen_range(0.0..TAU + 2.0), rng.gen_range(0.0..TAU));
        let f = a0_evac_time(a, CrashTime::At(w), x)?;
        let s = simulated(Strategy::A0, A2Pickup::AfterOwnArc, a, w, x)?;
        c.record(f, s, || format!("alpha {a} w {w} x {x}"));
    }
    checks.push(c.check);

    // exit still unexplored when a perimeter crash happens
    for (name, strategy) in [("z11", Strategy::A1Together), ("z12", Strategy::A1Alone)] {
        let mut c = Checker::new(cfg, name);
        for _ in 0..n {
            let a = alpha(&mut rng);
            let w = rng.gen_range(1.0..1.0 + std::f64::consts::PI);
            let x = rng.gen_range(w - 1.0..TAU - (w - 1.0));
            let f = match strategy {
                Strategy::A1Together => a1_together_evac_time(a, w, x)?,
                _ => a1_alone_evac_time(a, w, x)?,
            };
            let s = simulated(strategy, A2Pickup::AfterOwnArc, a, w, x)?;
            c.record(f, s, || format!("alpha {a} w {w} x {x}"));
        }
        checks.push(c.check);
    }

    let mut c = Checker::new(cfg, "z13");
    for _ in 0..n {
        let (a, w, x) = (alpha(&mut rng), rng.gen_range(0.0..1.0), rng.gen_range(0.0..TAU));
        let f = a1_alone_evac_time(a, w, x)?;
        let s = simulated(Strategy::A1Alone, A2Pickup::AfterOwnArc, a, w, x)?;
        c.record(f, s, || format!("alpha {a} w {w} x {x}"));
    }
    checks.push(c.check);

    let mut c = Checker::new(cfg, "z21");
    for _ in 0..n {
        let a = alpha(&mut rng);
        let (zeta, m) = catch_up_zeta(&mut rng);
        let x = rng.gen_range(zeta..TAU);
        let w = rng.gen_range(0.0..(1.0 + zeta + m).min(1.0 + x - zeta));
        let d = euclidean_distance(a2_crash_position(zeta, w, m)?, circle_point(x));
        let f = survivor_first_time(a, x, zeta, d);
        let s = simulated(Strategy::A2 { zeta }, A2Pickup::AfterOwnArc, a, w, x)?;
        c.record(f, s, || format!("alpha {a} zeta {zeta} w {w} x {x}"));
    }
    checks.push(c.check);

    let mut c = Checker::new(cfg, "z22-kinematic");
    let mut printed = PrintedFormulaReport {
        samples: 0,
        max_abs_difference: 0.0,
        max_offset_deviation: 0.0,
    };
    for _ in 0..n {
        let a = alpha(&mut rng);
        let (zeta, m) = catch_up_zeta(&mut rng);
        let w = rng.gen_range(0.0..1.0 + zeta);
        let x = rng.gen_range((w - 1.0).max(0.0)..zeta);
        let d = euclidean_distance(survivor_position(zeta, w), a2_crash_position(zeta, w, m)?);
        let s = simulated(Strategy::A2 { zeta }, A2Pickup::Immediate, a, w, x)?;
        c.record(fetch_first_time(a, w, x, d), s, || {
            format!("alpha {a} zeta {zeta} w {w} x {x}")
        });
        let literal = fetch_first_time_as_printed(a, w, x, d);
        printed.samples += 1;
        printed.max_abs_difference = printed.max_abs_difference.max((s - literal).abs());
        printed.max_offset_deviation = printed.max_offset_deviation.max(((s - literal) / a - 2.0).abs());
    }
    checks.push(c.check);

    let mut c = Checker::new(cfg, "z23");
    for _ in 0..n {
        let a = alpha(&mut rng);
        let (zeta, m) = catch_up_zeta(&mut rng);
        // the survivor finds the exit the instant the other robot crashes
        let x = rng.gen_range(zeta..(2.0 * zeta + m).min(TAU));
        let w = 1.0 + x - zeta;
        let d = euclidean_distance(survivor_position(zeta, w), a2_crash_position(zeta, w, m)?);
        let f = late_crash_time(a, w, d);
        let s = simulated(Strategy::A2 { zeta }, A2Pickup::AfterOwnArc, a, w, x)?;
        c.record(f, s, || format!("alpha {a} zeta {zeta} w {w} x {x}"));
    }
    checks.push(c.check);

    let mut c = Checker::new(cfg, "f");
    for _ in 0..n {
        let a = alpha(&mut rng);
        let w = rng.gen_range(1.0..1.0 + std::f64::consts::PI - 0.01);
        let y = rng.gen_range(0.0..TAU - 2.0 * (w - 1.0) - 0.01);
        let x = TAU - (w - 1.0) - y - PROBE_OFFSET;
        let f = delayed_pickup_time(a, w, y)?;
        let s = simulated(Strategy::A1Delayed { y }, A2Pickup::AfterOwnArc, a, w, x)?;
        c.record(f, s + a * PROBE_OFFSET, || format!("alpha {a} w {w} y {y}"));
    }
    checks.push(c.check);

    Ok(ValidationReport {
        config: *cfg,
        checks,
        fetch_first_as_printed: printed,
    })
}
