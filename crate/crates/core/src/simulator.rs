//! Event-driven simulation of the two robots.
//!
//! Every motion is a straight line or a unit-circle arc, so the simulator
//! jumps from event to event and solves each "reaches point P" condition in
//! closed form. Coordinates are taken in the faulty robot's frame: its landing
//! point is angle 0 (R1's landing point when no crash happens).

use std::collections::VecDeque;
use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{ccw_arc, circle_point, euclidean_distance, normalize_angle, Point};
use crate::model::{
    validate_scenario, CrashTime, EvacuationOutcome, Event, EventKind, MotionKind, RobotId,
    Scenario, Strategy, Trajectory, TrajectorySegment, TOLERANCE,
};
use crate::strategies::{effective_faulty, A2Case, A2Layout, A2Params, A2Pickup, ShortFinish};

/// Events closer than this are treated as simultaneous.
const MERGE: f64 = 1e-12;
/// Largest gap tolerated when two robots are supposed to coincide.
const MEET: f64 = 1e-7;
const MAX_EVENTS: usize = 100_000;

/// A strategy's motion rules, ready to run against a scenario.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MotionProgram {
    pub strategy: Strategy,
    /// A2 only: survivor's reaction to a crash while the exit is unknown.
    #[serde(default)]
    pub a2_pickup: A2Pickup,
}

impl MotionProgram {
    pub fn new(strategy: Strategy) -> Self {
        MotionProgram {
            strategy,
            a2_pickup: A2Pickup::AfterOwnArc,
        }
    }

    pub fn with_pickup(mut self, pickup: A2Pickup) -> Self {
        self.a2_pickup = pickup;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Step {
    Line(Point),
    Arc { ccw: bool, len: f64 },
    /// Take the co-located crashed robot along.
    Pickup,
    /// Wait for the partner and travel with it.
    Join,
    Evacuate,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Shape {
    Line { from: Point, to: Point, len: f64 },
    Arc { start: f64, ccw: bool, len: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Leg {
    t0: f64,
    shape: Shape,
    /// Time per unit distance.
    pace: f64,
}

impl Leg {
    fn len(&self) -> f64 {
        match self.shape {
            Shape::Line { len, .. } | Shape::Arc { len, .. } => len,
        }
    }

    fn end_time(&self) -> f64 {
        self.t0 + self.len() * self.pace
    }

    fn travelled(&self, t: f64) -> f64 {
        ((t - self.t0) / self.pace).clamp(0.0, self.len())
    }

    fn point_at(&self, t: f64) -> Point {
        let s = self.travelled(t);
        match self.shape {
            Shape::Line { from, to, len } => {
                if s >= len {
                    to
                } else {
                    from.lerp(to, s / len)
                }
            }
            Shape::Arc { start, ccw, .. } => circle_point(if ccw { start + s } else { start - s }),
        }
    }

    fn end_point(&self) -> Point {
        match self.shape {
            Shape::Line { to, .. } => to,
            Shape::Arc { start, ccw, len } => circle_point(if ccw { start + len } else { start - len }),
        }
    }

    /// Unfinished part of the leg as a plan step.
    fn remainder(&self, t: f64) -> Step {
        match self.shape {
            Shape::Line { to, .. } => Step::Line(to),
            Shape::Arc { ccw, len, .. } => Step::Arc {
                ccw,
                len: (len - self.travelled(t)).max(0.0),
            },
        }
    }

    /// Earliest time the leg passes through `p`, if it does.
    fn reaches(&self, p: Point) -> Option<f64> {
        match self.shape {
            Shape::Line { from, to, len } => {
                let dir = (to - from) * (1.0 / len);
                let rel = p - from;
                let s = rel.x * dir.x + rel.y * dir.y;
                let off = rel.cross(dir).abs();
                (off <= TOLERANCE && s >= -TOLERANCE && s <= len + TOLERANCE)
                    .then(|| self.t0 + s.clamp(0.0, len) * self.pace)
            }
            Shape::Arc { start, ccw, len } => {
                if (p.norm() - 1.0).abs() > TOLERANCE {
                    return None;
                }
                let phi = p.angle();
                let mut d = if ccw {
                    ccw_arc(start, phi)
                } else {
                    ccw_arc(phi, start)
                };
                if d > TAU - TOLERANCE {
                    d = 0.0;
                }
                (d <= len + TOLERANCE).then(|| self.t0 + d.min(len) * self.pace)
            }
        }
    }

    fn kind(&self) -> MotionKind {
        match self.shape {
            Shape::Line { from, to, len } => {
                if from.cross(to).abs() <= TOLERANCE * len.max(1.0) {
                    MotionKind::RadialLine
                } else {
                    MotionKind::Chord
                }
            }
            Shape::Arc { ccw: true, .. } => MotionKind::ArcCcw,
            Shape::Arc { ccw: false, .. } => MotionKind::ArcCw,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct OpenSegment {
    t_start: f64,
    p_start: Point,
    kind: MotionKind,
    speed: f64,
    chauffeuring: bool,
}

#[derive(Debug, Clone)]
struct Robot {
    id: RobotId,
    pos: Point,
    leg: Option<Leg>,
    plan: VecDeque<Step>,
    crashed: bool,
    follows: Option<usize>,
    carrying: bool,
    waiting_join: bool,
    evacuated: Option<f64>,
    on_perimeter: bool,
    segments: Vec<TrajectorySegment>,
    open: Option<OpenSegment>,
}

impl Robot {
    fn new(id: RobotId, plan: Vec<Step>) -> Self {
        Robot {
            id,
            pos: Point::ORIGIN,
            leg: None,
            plan: plan.into(),
            crashed: false,
            follows: None,
            carrying: false,
            waiting_join: false,
            evacuated: None,
            on_perimeter: false,
            segments: Vec::new(),
            open: None,
        }
    }
}

/// Which crash response the survivor runs when the exit is still unknown.
#[derive(Debug, Clone, Copy)]
enum Controller {
    Together,
    Alone,
    /// Fetch for crashes before the threshold, otherwise keep searching.
    Threshold(f64),
    /// Search a bit further before fetching; crashes before the perimeter are
    /// fetched at once.
    Delayed(f64),
    A2 { pickup: A2Pickup },
}

struct Sim {
    robots: [Robot; 2],
    exit: Point,
    alpha: f64,
    crash: Option<(usize, f64)>,
    crashed_at: Option<f64>,
    found_at: Option<f64>,
    events: Vec<Event>,
    controller: Controller,
    /// Sweep direction of each robot (A1 only).
    ccw: [bool; 2],
}

fn other(i: usize) -> usize {
    1 - i
}

/// Steps of a plan that still belong to the robot's own sweep: everything up
/// to and including its arc, if the arc is not finished yet.
fn own_sweep_rest(plan: &VecDeque<Step>) -> Vec<Step> {
    match plan.iter().position(|s| matches!(s, Step::Arc { .. })) {
        Some(k) => plan.iter().take(k + 1).copied().collect(),
        None => Vec::new(),
    }
}

impl Sim {
    fn log(&mut self, time: f64, kind: EventKind, robot: usize) {
        self.events.push(Event {
            time,
            kind,
            robot: RobotId::from_index(robot),
        });
    }

    fn leader_of(&self, i: usize) -> usize {
        self.robots[i].follows.unwrap_or(i)
    }

    fn active(&self, i: usize) -> bool {
        self.robots[i].evacuated.is_none()
    }

    fn next_event(&self, t: f64) -> f64 {
        let mut next = f64::INFINITY;
        if let Some((_, w)) = self.crash {
            if self.crashed_at.is_none() && w >= t {
                next = next.min(w);
            }
        }
        for i in 0..2 {
            if !self.active(i) {
                continue;
            }
            if let Some(leg) = &self.robots[i].leg {
                next = next.min(leg.end_time());
                if self.found_at.is_none() {
                    if let Some(tr) = leg.reaches(self.exit) {
                        if tr > t + MERGE {
                            next = next.min(tr);
                        }
                    }
                }
            }
            if self.robots[i].waiting_join {
                if let Some(leg) = &self.robots[self.leader_of(other(i))].leg {
                    if let Some(tr) = leg.reaches(self.robots[i].pos) {
                        if tr > t + MERGE {
                            next = next.min(tr);
                        }
                    }
                }
            }
        }
        next
    }

    fn advance(&mut self, t: f64) {
        for i in 0..2 {
            let r = &mut self.robots[i];
            if let Some(leg) = r.leg.take() {
                if leg.end_time() <= t + MERGE {
                    r.pos = leg.end_point();
                } else {
                    r.pos = leg.point_at(t);
                    r.plan.push_front(leg.remainder(t));
                }
            }
        }
        for i in 0..2 {
            if let Some(l) = self.robots[i].follows {
                self.robots[i].pos = self.robots[l].pos;
            }
        }
        for i in 0..2 {
            if !self.robots[i].on_perimeter && self.robots[i].pos.norm() >= 1.0 - TOLERANCE {
                self.robots[i].on_perimeter = true;
                self.log(t, EventKind::ReachPerimeter, i);
            }
        }
    }

    fn close_segments(&mut self, t: f64) {
        for r in &mut self.robots {
            if let Some(open) = r.open.take() {
                if t > open.t_start {
                    r.segments.push(TrajectorySegment {
                        t_start: open.t_start,
                        t_end: t,
                        p_start: open.p_start,
                        p_end: r.pos,
                        motion_kind: open.kind,
                        speed: open.speed,
                        chauffeuring: open.chauffeuring,
                    });
                }
            }
        }
    }

    fn open_segments(&mut self, t: f64) {
        for i in 0..2 {
            if !self.active(i) {
                continue;
            }
            let leader = self.leader_of(i);
            let (kind, speed) = match &self.robots[leader].leg {
                Some(leg) => (leg.kind(), 1.0 / leg.pace),
                None => (MotionKind::Stationary, 0.0),
            };
            let chauffeuring = self.robots[leader].carrying || self.robots[i].carrying;
            self.robots[i].open = Some(OpenSegment {
                t_start: t,
                p_start: self.robots[i].pos,
                kind,
                speed,
                chauffeuring: chauffeuring && kind != MotionKind::Stationary,
            });
        }
    }

    fn pickup(&mut self, t: f64, i: usize) -> Result<()> {
        let j = other(i);
        if !self.robots[j].crashed {
            return Err(Error::Internal(format!("{} picks up a working robot", self.robots[i].id)));
        }
        let gap = euclidean_distance(self.robots[i].pos, self.robots[j].pos);
        if gap > MEET {
            return Err(Error::Internal(format!(
                "{} tries a pickup {gap} away from the crashed robot at t = {t}",
                self.robots[i].id
            )));
        }
        self.robots[j].follows = Some(i);
        self.robots[j].pos = self.robots[i].pos;
        self.robots[i].carrying = true;
        self.log(t, EventKind::Pickup, i);
        Ok(())
    }

    fn evacuate(&mut self, t: f64, i: usize) -> Result<()> {
        let gap = euclidean_distance(self.robots[i].pos, self.exit);
        if gap > MEET {
            return Err(Error::Internal(format!(
                "{} evacuates {gap} away from the exit at t = {t}",
                self.robots[i].id
            )));
        }
        for k in 0..2 {
            if k == i || self.robots[k].follows == Some(i) {
                self.robots[k].pos = self.exit;
                self.robots[k].evacuated = Some(t);
                self.log(t, EventKind::Evacuate, k);
            }
        }
        Ok(())
    }

    fn try_join(&mut self, t: f64, i: usize) -> bool {
        let j = self.leader_of(other(i));
        if euclidean_distance(self.robots[i].pos, self.robots[j].pos) <= MEET {
            self.robots[i].waiting_join = false;
            self.robots[i].follows = Some(j);
            self.robots[i].pos = self.robots[j].pos;
            self.log(t, EventKind::Meet, i);
            true
        } else {
            self.robots[i].waiting_join = true;
            false
        }
    }

    /// Starts legs and executes instantaneous steps until every robot either
    /// moves, waits, follows or is done.
    fn settle(&mut self, t: f64) -> Result<()> {
        for i in 0..2 {
            if self.robots[i].waiting_join {
                self.try_join(t, i);
            }
        }
        loop {
            let mut changed = false;
            for i in 0..2 {
                let r = &self.robots[i];
                if r.leg.is_some()
                    || r.follows.is_some()
                    || r.evacuated.is_some()
                    || r.crashed
                    || r.waiting_join
                {
                    continue;
                }
                let Some(step) = self.robots[i].plan.pop_front() else {
                    continue;
                };
                changed = true;
                let pace = if self.robots[i].carrying { self.alpha } else { 1.0 };
                let pos = self.robots[i].pos;
                match step {
                    Step::Line(to) => {
                        let len = euclidean_distance(pos, to);
                        if len > MERGE {
                            self.robots[i].leg = Some(Leg {
                                t0: t,
                                shape: Shape::Line { from: pos, to, len },
                                pace,
                            });
                        } else {
                            self.robots[i].pos = to;
                        }
                    }
                    Step::Arc { ccw, len } => {
                        if len > MERGE {
                            self.robots[i].leg = Some(Leg {
                                t0: t,
                                shape: Shape::Arc {
                                    start: pos.angle(),
                                    ccw,
                                    len,
                                },
                                pace,
                            });
                        }
                    }
                    Step::Pickup => self.pickup(t, i)?,
                    Step::Join => {
                        self.try_join(t, i);
                    }
                    Step::Evacuate => self.evacuate(t, i)?,
                }
            }
            if !changed {
                return Ok(());
            }
        }
    }

    fn process_crash(&mut self, t: f64, f: usize) {
        let s = other(f);
        self.crashed_at = Some(t);
        self.log(t, EventKind::Crash, f);
        self.log(t, EventKind::CrashDetected, s);
        let faulty_plan = std::mem::take(&mut self.robots[f].plan);
        self.robots[f].crashed = true;
        self.robots[f].waiting_join = false;
        if self.robots[f].follows == Some(s) {
            self.robots[s].carrying = true;
            self.log(t, EventKind::Pickup, s);
            return;
        }
        self.robots[s].waiting_join = false;
        if self.robots[s].follows == Some(f) {
            self.robots[s].follows = None;
            let mut plan: VecDeque<Step> = faulty_plan;
            plan.push_front(Step::Pickup);
            self.robots[s].plan = plan;
            return;
        }
        let crash_point = self.robots[f].pos;
        if self.found_at.is_some() {
            self.robots[s].plan =
                VecDeque::from(vec![Step::Line(crash_point), Step::Pickup, Step::Line(self.exit), Step::Evacuate]);
            return;
        }
        let fetch = vec![Step::Line(crash_point), Step::Pickup];
        let new_plan: Option<Vec<Step>> = match self.controller {
            Controller::Alone => None,
            Controller::Together => Some(self.a1_fetch_plan(f, t, 0.0)),
            Controller::Threshold(wbar) => (t < wbar).then(|| self.a1_fetch_plan(f, t, 0.0)),
            Controller::Delayed(y) => Some(self.a1_fetch_plan(f, t, y)),
            Controller::A2 { pickup } => {
                let own = own_sweep_rest(&self.robots[s].plan);
                let faulty_rest = own_sweep_rest(&faulty_plan);
                let mut plan = Vec::new();
                match pickup {
                    A2Pickup::AfterOwnArc => {
                        plan.extend(own);
                        plan.extend(fetch);
                        plan.extend(faulty_rest);
                    }
                    A2Pickup::Immediate => {
                        plan.extend(fetch);
                        plan.extend(faulty_rest);
                        if let Some(Step::Arc { .. }) = own.first() {
                            plan.push(Step::Line(self.robots[s].pos));
                        }
                        plan.extend(own);
                    }
                }
                Some(plan)
            }
        };
        if let Some(plan) = new_plan {
            self.robots[s].plan = plan.into();
        }
    }

    /// Fetch the crashed robot (after an optional extra search `delay`) and
    /// sweep the part of the perimeter nobody has seen.
    fn a1_fetch_plan(&self, f: usize, t: f64, delay: f64) -> Vec<Step> {
        let s = other(f);
        let crash_point = self.robots[f].pos;
        if t < 1.0 {
            return vec![
                Step::Line(crash_point),
                Step::Pickup,
                Step::Line(circle_point(0.0)),
                Step::Arc {
                    ccw: self.ccw[f],
                    len: TAU,
                },
            ];
        }
        let unexplored = (TAU - 2.0 * (t - 1.0)).max(0.0);
        let delay = delay.min(unexplored);
        vec![
            Step::Arc {
                ccw: self.ccw[s],
                len: delay,
            },
            Step::Line(crash_point),
            Step::Pickup,
            Step::Arc {
                ccw: self.ccw[f],
                len: unexplored - delay,
            },
        ]
    }

    fn process_exit_found(&mut self, t: f64, finder: usize) {
        self.found_at = Some(t);
        self.log(t, EventKind::ExitFound, finder);
        self.log(t, EventKind::Message, finder);
        for r in &mut self.robots {
            r.plan.clear();
            r.waiting_join = false;
        }
        let exit = self.exit;
        if let Some(f) = (0..2).find(|&i| self.robots[i].crashed) {
            let s = other(f);
            self.robots[s].plan = if self.robots[f].follows == Some(s) {
                VecDeque::from(vec![Step::Line(exit), Step::Evacuate])
            } else {
                VecDeque::from(vec![
                    Step::Line(self.robots[f].pos),
                    Step::Pickup,
                    Step::Line(exit),
                    Step::Evacuate,
                ])
            };
            return;
        }
        if let Some(i) = (0..2).find(|&i| self.robots[i].follows.is_some()) {
            let leader = other(i);
            self.robots[leader].plan = VecDeque::from(vec![Step::Line(exit), Step::Evacuate]);
            return;
        }
        let mid = self.robots[0].pos.midpoint(self.robots[1].pos);
        let lead = other(finder);
        self.robots[lead].plan = VecDeque::from(vec![Step::Line(mid), Step::Line(exit), Step::Evacuate]);
        self.robots[finder].plan = VecDeque::from(vec![Step::Line(mid), Step::Join]);
    }

    fn run(mut self, cap: f64) -> Result<EvacuationOutcome> {
        let mut t = 0.0;
        self.settle(t)?;
        self.open_segments(t);
        for _ in 0..MAX_EVENTS {
            if (0..2).all(|i| !self.active(i)) {
                return self.finish();
            }
            let next = self.next_event(t);
            if !next.is_finite() {
                return Err(Error::Deadlock {
                    time: t,
                    reason: "no robot can move and nobody has evacuated".into(),
                });
            }
            if next > cap {
                return Err(Error::TimeCap { cap, time: next });
            }
            t = next.max(t);
            self.advance(t);
            self.close_segments(t);
            if let Some((f, w)) = self.crash {
                if self.crashed_at.is_none() && w <= t + MERGE {
                    self.process_crash(t, f);
                }
            }
            if self.found_at.is_none() {
                let finder = (0..2).find(|&i| {
                    self.active(i) && euclidean_distance(self.robots[i].pos, self.exit) <= TOLERANCE
                });
                if let Some(i) = finder {
                    self.process_exit_found(t, i);
                }
            }
            self.settle(t)?;
            self.open_segments(t);
        }
        Err(Error::Internal(format!("more than {MAX_EVENTS} events")))
    }

    fn finish(self) -> Result<EvacuationOutcome> {
        let evac_time = self
            .robots
            .iter()
            .filter_map(|r| r.evacuated)
            .fold(f64::NEG_INFINITY, f64::max);
        let exit_found_time = self
            .found_at
            .ok_or_else(|| Error::Internal("evacuated without finding the exit".into()))?;
        let [r1, r2] = self.robots;
        let outcome = EvacuationOutcome {
            evac_time,
            exit_found_time,
            crash_detected_time: self.crashed_at,
            trajectories: [
                Trajectory {
                    segments: r1.segments,
                },
                Trajectory {
                    segments: r2.segments,
                },
            ],
            event_log: self.events,
        };
        Ok(outcome)
    }
}

fn initial_plans(program: &MotionProgram, faulty: RobotId) -> Result<([Vec<Step>; 2], [bool; 2], bool)> {
    let a = circle_point(0.0);
    let full = |ccw| Step::Arc { ccw, len: TAU };
    Ok(match program.strategy {
        Strategy::A0 => ([vec![Step::Line(a), full(true)], vec![]], [true, true], true),
        Strategy::A2 { zeta } => {
            let params = A2Params::new(zeta)?;
            let layout = A2Layout::new(&params, faulty);
            let (f, s) = (faulty.index(), faulty.other().index());
            let mut plans: [Vec<Step>; 2] = [Vec::new(), Vec::new()];
            for (idx, land, arc, short) in [
                (f, 0.0, layout.zeta_f, layout.faulty_short),
                (s, layout.zeta_f, TAU - layout.zeta_f, !layout.faulty_short),
            ] {
                let mut plan = vec![Step::Line(circle_point(land)), Step::Arc { ccw: true, len: arc }];
                if short {
                    match params.finish {
                        ShortFinish::CatchUp { chord } => {
                            if chord > 0.0 {
                                plan.push(Step::Line(circle_point(land + 2.0 * arc + chord)));
                            }
                            plan.push(Step::Join);
                        }
                        ShortFinish::Return { .. } => plan.push(Step::Line(circle_point(land))),
                    }
                }
                plans[idx] = plan;
            }
            (plans, [true, true], false)
        }
        _ => (
            [vec![Step::Line(a), full(true)], vec![Step::Line(a), full(false)]],
            [true, false],
            false,
        ),
    })
}

/// Runs `program` on the scenario and returns the full outcome.
pub fn simulate(program: &MotionProgram, s: &Scenario) -> Result<EvacuationOutcome> {
    let s = validate_scenario(*s)?;
    if program.strategy.params() != s.strategy_params {
        return Err(Error::Mismatch(format!(
            "program {:?} runs with parameters {:?}",
            program.strategy, s.strategy_params
        )));
    }
    let alpha = s.fault.alpha;
    let faulty = effective_faulty(&s.fault);
    let (plans, ccw, together) = initial_plans(program, faulty)?;
    let [p1, p2] = plans;
    let mut robots = [Robot::new(RobotId::R1, p1), Robot::new(RobotId::R2, p2)];
    if together {
        robots[1].follows = Some(0);
    }
    let controller = match program.strategy {
        Strategy::A0 | Strategy::A1Together => Controller::Together,
        Strategy::A1Alone => Controller::Alone,
        Strategy::A1Combined { wbar } => Controller::Threshold(wbar),
        Strategy::A1Delayed { y } => Controller::Delayed(y),
        Strategy::A2 { .. } => Controller::A2 {
            pickup: program.a2_pickup,
        },
    };
    let crash = match s.fault.crash_time {
        CrashTime::At(w) => Some((faulty.index(), w)),
        CrashTime::Never => None,
    };
    let sim = Sim {
        robots,
        exit: circle_point(s.exit.x),
        alpha,
        crash,
        crashed_at: None,
        found_at: None,
        events: Vec::new(),
        controller,
        ccw,
    };
    sim.run(4.0 * std::f64::consts::PI * (1.0 + alpha) + 2.0)
}

/// A2 case read off a simulated event log of the default pickup policy.
pub fn a2_case(outcome: &EvacuationOutcome) -> A2Case {
    let time = |kind| outcome.first_event(kind).map(|e| e.time);
    let crash = match time(EventKind::Crash) {
        Some(c) if c < outcome.evac_time => c,
        _ => return A2Case::NoCrash,
    };
    let found = outcome.exit_found_time;
    if found <= crash {
        return A2Case::CrashAfterExitFound;
    }
    if time(EventKind::Meet).is_some_and(|m| m < crash) {
        return A2Case::Carried;
    }
    match time(EventKind::Pickup) {
        Some(p) if p <= found => A2Case::ExitOnFaultyArc,
        _ => A2Case::SurvivorFindsExit,
    }
}

/// Position on a recorded trajectory at time `t`.
pub fn position_at(traj: &Trajectory, t: f64) -> Result<Point> {
    let (first, last) = match (traj.segments.first(), traj.segments.last()) {
        (Some(a), Some(b)) => (a, b),
        _ => {
            return Err(Error::OutOfRange {
                what: "time on an empty trajectory",
                value: t,
            })
        }
    };
    if t < first.t_start || t > last.t_end {
        return Err(Error::OutOfRange {
            what: "time outside the trajectory",
            value: t,
        });
    }
    let k = traj.segments.partition_point(|s| s.t_end < t);
    let seg = &traj.segments[k.min(traj.segments.len() - 1)];
    let dt = t - seg.t_start;
    Ok(match seg.motion_kind {
        MotionKind::Stationary => seg.p_start,
        MotionKind::RadialLine | MotionKind::Chord => {
            let d = seg.duration();
            if d > 0.0 {
                seg.p_start.lerp(seg.p_end, dt / d)
            } else {
                seg.p_start
            }
        }
        MotionKind::ArcCcw => circle_point(seg.p_start.angle() + seg.speed * dt),
        MotionKind::ArcCw => circle_point(normalize_angle(seg.p_start.angle() - seg.speed * dt)),
    })
}
