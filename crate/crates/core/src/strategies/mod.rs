//! Closed-form evacuation times.
//!
//! Exit coordinates are CCW arc lengths from the faulty robot's landing point
//! (R1's landing point when nobody crashes).

pub mod a1;
pub mod a2;

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::model::{CrashTime, FaultModel, RobotId, Strategy};

pub use a1::{
    a1_alone_evac_time, a1_combined_evac_time, a1_delayed_evac_time, a1_evac_time,
    a1_together_evac_time, a1_together_sup, a1_alone_worst_x, delayed_pickup_time, A1Response,
};
pub use a2::{
    a2_crash_position, a2_evac_time, a2_meeting_chord, coincidence_zeta, A2Case, A2Cell,
    A2Evaluation, A2Layout, A2Params, A2Pickup, ShortFinish,
};

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha >= 1.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            what: "alpha",
            value: alpha,
        })
    }
}

pub(crate) fn check_exit(x: f64) -> Result<()> {
    if (0.0..TAU).contains(&x) {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            what: "exit position",
            value: x,
        })
    }
}

/// Evacuation time once the exit is known at `found`, with the two robots a
/// straight distance `gap` apart and heading for the midpoint of that gap.
///
/// `faulty_found_it` tells whether the crash-prone robot is the one standing at
/// the exit. A crash after the robots meet turns the rest of the walk into
/// chauffeuring; an earlier crash sends the survivor to the crash point first.
pub fn after_exit_found(
    alpha: f64,
    w: CrashTime,
    found: f64,
    gap: f64,
    faulty_found_it: bool,
) -> f64 {
    let done = found + gap;
    let w = match w {
        CrashTime::Never => return done,
        CrashTime::At(w) if w >= done => return done,
        CrashTime::At(w) => w,
    };
    if w >= found + 0.5 * gap {
        return w + alpha * (done - w);
    }
    let s = (w - found).max(0.0);
    let carry = if faulty_found_it { s } else { gap - s };
    w + (gap - 2.0 * s) + alpha * carry
}

/// Moving-together strategy.
pub fn a0_evac_time(alpha: f64, w: CrashTime, x: f64) -> Result<f64> {
    check_alpha(alpha)?;
    check_exit(x)?;
    let arrival = 1.0 + x;
    Ok(match w {
        CrashTime::At(w) if w < arrival => w + alpha * (arrival - w),
        _ => arrival,
    })
}

/// Evacuation time of any strategy for one fault model and exit position.
pub fn evacuation_time(strategy: &Strategy, fault: &FaultModel, x: f64) -> Result<f64> {
    fault.validate()?;
    match *strategy {
        Strategy::A0 => a0_evac_time(fault.alpha, fault.crash_time, x),
        Strategy::A1Together => a1_evac_time(A1Response::Together, fault, x),
        Strategy::A1Alone => a1_evac_time(A1Response::Alone, fault, x),
        Strategy::A1Combined { wbar } => a1_evac_time(A1Response::Combined { wbar }, fault, x),
        Strategy::A1Delayed { y } => a1_evac_time(A1Response::Delayed { y }, fault, x),
        Strategy::A2 { zeta } => {
            let params = A2Params::new(zeta)?;
            let layout = A2Layout::new(&params, effective_faulty(fault));
            check_exit(x)?;
            Ok(A2Cell::new(fault.alpha, fault.crash_time, layout, A2Pickup::AfterOwnArc)
                .evaluate(x)
                .time)
        }
    }
}

/// The robot whose landing point anchors the exit coordinate.
pub fn effective_faulty(fault: &FaultModel) -> RobotId {
    if fault.crash_time.is_never() {
        RobotId::R1
    } else {
        fault.faulty_robot
    }
}
