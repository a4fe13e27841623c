//! Separated landings: the robots land `ζ` apart and both sweep CCW.
//!
//! R1 lands at angle 0 and owns the arc `[0, ζ]`; R2 lands at `ζ` and owns
//! `[ζ, 2π]`. The robot with the shorter arc (R1 when `ζ <= π`) finishes
//! first. If its arc is shorter than the coincidence angle it cuts across a
//! chord to meet the other robot and they continue as a pair; otherwise it
//! walks the chord back to its own landing point and waits there.
//!
//! All evaluations work in the faulty robot's frame: the faulty robot `F`
//! lands at angle 0 and owns `[0, ζ_f]`, the survivor `S` lands at `ζ_f`.

use std::f64::consts::{PI, TAU};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::{after_exit_found, check_alpha, check_exit};
use crate::analysis::roots::{find_root, last_root_in};
use crate::error::{Error, Result};
use crate::geometry::{ccw_arc, circle_point, euclidean_distance, Point};
use crate::model::{CrashTime, RobotId};

/// Short-arc length at which the catch-up meeting point reaches the short
/// robot's own landing point: the root of `2π - 2ζ - 2 sin(ζ/2)`.
pub fn coincidence_zeta() -> f64 {
    static VALUE: OnceLock<f64> = OnceLock::new();
    *VALUE.get_or_init(|| {
        find_root(|z| TAU - 2.0 * z - 2.0 * (z / 2.0).sin(), 2.0, 2.5, 0.0)
            .expect("coincidence angle is bracketed by [2, 2.5]")
    })
}

/// Length of the catch-up chord after a short arc `zeta`: the positive root of
/// `m = 2 sin((ζ + m)/2)`.
///
/// `m = 0` always solves the equation; the positive root is unique because
/// `m - 2 sin((ζ + m)/2)` is convex on `[0, 2π - ζ]`. It is a usable meeting
/// point only while `ζ` is below [`coincidence_zeta`].
pub fn a2_meeting_chord(zeta: f64) -> Result<f64> {
    if !(zeta > 0.0 && zeta <= PI) {
        return Err(Error::OutOfRange {
            what: "short arc for the catch-up chord (expected 0 < zeta <= pi; use the direct chord otherwise)",
            value: zeta,
        });
    }
    last_root_in(
        |m| m - 2.0 * ((zeta + m) / 2.0).sin(),
        0.0,
        TAU - zeta,
        64,
        0.0,
    )
}

/// Crash position of a faulty R1 that owns the short arc `zeta` and catches
/// up along a chord of length `m`.
pub fn a2_crash_position(zeta: f64, w: f64, m: f64) -> Result<Point> {
    if !(w >= 0.0) {
        return Err(Error::OutOfRange {
            what: "crash time",
            value: w,
        });
    }
    if w < 1.0 {
        return Ok(Point::new(w, 0.0));
    }
    if w <= 1.0 + zeta {
        return Ok(Point::new((w - 1.0).cos(), (w - 1.0).sin()));
    }
    if w <= 1.0 + zeta + m {
        let lambda = (w - zeta - 1.0) / m;
        let a = 2.0 * zeta + m;
        return Ok(Point::new(
            lambda * a.cos() + (1.0 - lambda) * zeta.cos(),
            lambda * a.sin() + (1.0 - lambda) * zeta.sin(),
        ));
    }
    Err(Error::Regime(format!(
        "crash at w = {w} is after the catch-up move ends at {}",
        1.0 + zeta + m
    )))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ShortFinish {
    /// Cut across to meet the other robot and continue together.
    CatchUp { chord: f64 },
    /// Walk straight back to the own landing point.
    Return { chord: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct A2Params {
    pub zeta: f64,
    pub short_arc: f64,
    pub finish: ShortFinish,
}

impl A2Params {
    pub fn new(zeta: f64) -> Result<Self> {
        if !(0.0..=TAU).contains(&zeta) {
            return Err(Error::OutOfRange {
                what: "zeta",
                value: zeta,
            });
        }
        let short_arc = zeta.min(TAU - zeta);
        let finish = if short_arc == 0.0 {
            ShortFinish::CatchUp { chord: 0.0 }
        } else if short_arc < coincidence_zeta() {
            ShortFinish::CatchUp {
                chord: a2_meeting_chord(short_arc)?,
            }
        } else {
            ShortFinish::Return {
                chord: 2.0 * (short_arc / 2.0).sin(),
            }
        };
        Ok(A2Params {
            zeta,
            short_arc,
            finish,
        })
    }

    /// The catch-up chord, when the short robot catches up.
    pub fn meeting_chord(&self) -> Option<f64> {
        match self.finish {
            ShortFinish::CatchUp { chord } => Some(chord),
            ShortFinish::Return { .. } => None,
        }
    }

    /// Which robot owns the short arc.
    pub fn short_robot(&self) -> RobotId {
        if self.zeta <= PI {
            RobotId::R1
        } else {
            RobotId::R2
        }
    }
}

/// Fault-free whereabouts of one robot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Phase {
    Radial,
    /// On its own arc at the given angle.
    Arc(f64),
    /// On the catch-up or return chord.
    Chord,
    /// Travelling with the other robot, at the given angle.
    United(f64),
    /// Waiting after its route ended.
    Holding,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Track {
    pub point: Point,
    pub phase: Phase,
}

/// A2 seen from the faulty robot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct A2Layout {
    pub params: A2Params,
    pub faulty: RobotId,
    /// Arc owned by the faulty robot; the survivor lands at this angle.
    pub zeta_f: f64,
    pub faulty_short: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Faulty,
    Survivor,
}

impl A2Layout {
    pub fn new(params: &A2Params, faulty: RobotId) -> Self {
        let zeta_f = match faulty {
            RobotId::R1 => params.zeta,
            RobotId::R2 => TAU - params.zeta,
        };
        A2Layout {
            params: *params,
            faulty,
            zeta_f,
            faulty_short: params.short_robot() == faulty,
        }
    }

    pub fn landing(&self, role: Role) -> f64 {
        match role {
            Role::Faulty => 0.0,
            Role::Survivor => self.zeta_f,
        }
    }

    pub fn arc(&self, role: Role) -> f64 {
        match role {
            Role::Faulty => self.zeta_f,
            Role::Survivor => TAU - self.zeta_f,
        }
    }

    pub fn is_short(&self, role: Role) -> bool {
        (role == Role::Faulty) == self.faulty_short
    }

    /// Time from which the pair travels together, if ever.
    pub fn unite_time(&self) -> Option<f64> {
        self.params
            .meeting_chord()
            .map(|m| 1.0 + self.params.short_arc + m)
    }

    /// Fault-free position of a robot at time `t`.
    pub fn track(&self, role: Role, t: f64) -> Track {
        let land = self.landing(role);
        if t <= 1.0 {
            return Track {
                point: circle_point(land) * t.max(0.0),
                phase: Phase::Radial,
            };
        }
        let arc = self.arc(role);
        if !self.is_short(role) {
            let along = (t - 1.0).min(arc);
            let phase = if t - 1.0 <= arc {
                Phase::Arc(land + along)
            } else {
                Phase::Holding
            };
            return Track {
                point: circle_point(land + along),
                phase,
            };
        }
        if t <= 1.0 + arc {
            return Track {
                point: circle_point(land + t - 1.0),
                phase: Phase::Arc(land + t - 1.0),
            };
        }
        let from = circle_point(land + arc);
        let since = t - 1.0 - arc;
        match self.params.finish {
            ShortFinish::CatchUp { chord } => {
                if since <= chord {
                    let to = circle_point(land + 2.0 * arc + chord);
                    let point = if chord > 0.0 {
                        from.lerp(to, since / chord)
                    } else {
                        from
                    };
                    Track {
                        point,
                        phase: Phase::Chord,
                    }
                } else {
                    // the long robot's arc ends after 2π - arc
                    let along = (t - 1.0).min(TAU - arc);
                    let angle = land + arc + along;
                    Track {
                        point: circle_point(angle),
                        phase: if t - 1.0 <= TAU - arc {
                            Phase::United(angle)
                        } else {
                            Phase::Holding
                        },
                    }
                }
            }
            ShortFinish::Return { chord } => {
                if since <= chord {
                    Track {
                        point: from.lerp(circle_point(land), since / chord),
                        phase: Phase::Chord,
                    }
                } else {
                    Track {
                        point: circle_point(land),
                        phase: Phase::Holding,
                    }
                }
            }
        }
    }

    /// Fault-free time at which the exit at `x` is first reached, and whether
    /// the faulty robot is the one reaching it.
    pub fn exit_found(&self, x: f64) -> (f64, bool) {
        if x < self.zeta_f {
            (1.0 + x, true)
        } else {
            (1.0 + x - self.zeta_f, false)
        }
    }
}

/// How the survivor reacts to a crash while the exit is still unknown.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum A2Pickup {
    /// Finish its own arc first, then fetch the crashed robot and sweep the
    /// crashed robot's remaining arc.
    #[default]
    AfterOwnArc,
    /// Fetch the crashed robot at once, sweep its remaining arc, then the
    /// survivor's own remaining arc.
    Immediate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum A2Case {
    /// No crash before the robots are out.
    NoCrash,
    /// Crash after the exit became known.
    CrashAfterExitFound,
    /// Crash while the robots travel as a pair.
    Carried,
    /// Exit on the survivor's unexplored arc: it finds the exit, then fetches.
    SurvivorFindsExit,
    /// Exit on the faulty robot's unexplored arc: fetch, then sweep it.
    ExitOnFaultyArc,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct A2Evaluation {
    pub time: f64,
    pub case: A2Case,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct CrashState {
    w: f64,
    at: Point,
    united: Option<f64>,
    /// Time and place from which the survivor heads for the crashed robot
    /// when the exit lies on the faulty robot's arc.
    fetch_time: f64,
    fetch_from: Point,
    /// Immediate policy only: carried sweep up to the survivor's landing, and
    /// the survivor's search frontier.
    faulty_rest: f64,
    faulty_rest_end: Point,
    frontier: f64,
}

/// Precomputed evaluator for one `(α, w, layout, policy)` over exit positions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct A2Cell {
    pub alpha: f64,
    pub w: CrashTime,
    pub layout: A2Layout,
    pub pickup: A2Pickup,
    crash: Option<CrashState>,
}

impl A2Cell {
    pub fn new(alpha: f64, w: CrashTime, layout: A2Layout, pickup: A2Pickup) -> Self {
        let crash = w.time().map(|w| {
            let f = layout.track(Role::Faulty, w);
            let s = layout.track(Role::Survivor, w);
            let united = match layout.unite_time() {
                Some(t) if w > t => {
                    let long = if layout.faulty_short {
                        Role::Survivor
                    } else {
                        Role::Faulty
                    };
                    Some(layout.landing(long) + (w - 1.0).min(layout.arc(long)))
                }
                _ => None,
            };
            let own_done = 1.0 + layout.arc(Role::Survivor);
            let (fetch_time, fetch_from) = match pickup {
                A2Pickup::AfterOwnArc if w < own_done => (own_done, circle_point(0.0)),
                _ => (w, s.point),
            };
            let (faulty_rest, faulty_rest_end) = match f.phase {
                Phase::Radial => (1.0 - w + layout.zeta_f, circle_point(layout.zeta_f)),
                Phase::Arc(angle) => (layout.zeta_f - angle, circle_point(layout.zeta_f)),
                _ => (0.0, f.point),
            };
            let frontier = match s.phase {
                Phase::Radial => layout.zeta_f,
                Phase::Arc(angle) => angle,
                _ => TAU,
            };
            CrashState {
                w,
                at: f.point,
                united,
                fetch_time,
                fetch_from,
                faulty_rest,
                faulty_rest_end,
                frontier,
            }
        });
        A2Cell {
            alpha,
            w,
            layout,
            pickup,
            crash,
        }
    }

    pub fn evaluate(&self, x: f64) -> A2Evaluation {
        let alpha = self.alpha;
        let exit = circle_point(x);
        let (found, faulty_found_it) = self.layout.exit_found(x);
        let crash = match self.crash {
            Some(c) if c.w < found => c,
            _ => {
                let other = if faulty_found_it {
                    Role::Survivor
                } else {
                    Role::Faulty
                };
                let gap = euclidean_distance(self.layout.track(other, found).point, exit);
                let time = after_exit_found(alpha, self.w, found, gap, faulty_found_it);
                let case = if self.w.not_before(time) {
                    A2Case::NoCrash
                } else {
                    A2Case::CrashAfterExitFound
                };
                return A2Evaluation { time, case };
            }
        };
        if let Some(angle) = crash.united {
            return A2Evaluation {
                time: crash.w + alpha * ccw_arc(angle, x),
                case: A2Case::Carried,
            };
        }
        if x >= self.layout.zeta_f {
            let time = match self.pickup {
                A2Pickup::AfterOwnArc => found + (1.0 + alpha) * euclidean_distance(crash.at, exit),
                A2Pickup::Immediate => {
                    let reach = euclidean_distance(crash.at, crash.fetch_from);
                    let hop = euclidean_distance(crash.faulty_rest_end, circle_point(crash.frontier));
                    crash.w
                        + reach
                        + alpha * (crash.faulty_rest + hop + ccw_arc(crash.frontier, x))
                }
            };
            return A2Evaluation {
                time,
                case: A2Case::SurvivorFindsExit,
            };
        }
        A2Evaluation {
            time: crash.fetch_time
                + euclidean_distance(crash.fetch_from, crash.at)
                + alpha * (x - (crash.w - 1.0)),
            case: A2Case::ExitOnFaultyArc,
        }
    }
}

/// Evacuation time with a faulty R1 and the default pickup policy.
pub fn a2_evac_time(alpha: f64, w: CrashTime, x: f64, zeta: f64) -> Result<A2Evaluation> {
    check_alpha(alpha)?;
    check_exit(x)?;
    let params = A2Params::new(zeta)?;
    let layout = A2Layout::new(&params, RobotId::R1);
    Ok(A2Cell::new(alpha, w, layout, A2Pickup::AfterOwnArc).evaluate(x))
}

/// Survivor finds the exit on its own arc, then fetches the crashed robot
/// lying at distance `d` from the exit.
pub fn survivor_first_time(alpha: f64, x: f64, zeta_f: f64, d: f64) -> f64 {
    1.0 + x - zeta_f + (alpha + 1.0) * d
}

/// Survivor at distance `d` from the crash point fetches at once and carries
/// the crashed robot to an exit on the faulty robot's arc.
pub fn fetch_first_time(alpha: f64, w: f64, x: f64, d: f64) -> f64 {
    w + d + alpha * (x - w + 1.0)
}

/// [`fetch_first_time`] with the carried distance printed as `x - w - 1`; it
/// differs from the kinematic value by exactly `2α`.
pub fn fetch_first_time_as_printed(alpha: f64, w: f64, x: f64, d: f64) -> f64 {
    w + d + alpha * (x - w - 1.0)
}

/// Non-finder crashing at distance `d` from the exit the instant it is found.
pub fn late_crash_time(alpha: f64, w: f64, d: f64) -> f64 {
    w + (alpha + 1.0) * d
}
