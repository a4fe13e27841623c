//! Domain types shared by the simulator, the closed forms and the CLI.

use std::f64::consts::TAU;
use std::fmt;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::geometry::Point;

/// Default geometric tolerance.
pub const TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RobotId {
    R1,
    R2,
}

impl RobotId {
    pub fn index(self) -> usize {
        match self {
            RobotId::R1 => 0,
            RobotId::R2 => 1,
        }
    }

    pub fn from_index(i: usize) -> Self {
        if i == 0 {
            RobotId::R1
        } else {
            RobotId::R2
        }
    }

    pub fn other(self) -> Self {
        match self {
            RobotId::R1 => RobotId::R2,
            RobotId::R2 => RobotId::R1,
        }
    }
}

impl fmt::Display for RobotId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RobotId::R1 => "R1",
            RobotId::R2 => "R2",
        })
    }
}

/// Time at which the faulty robot stops, or `Never`.
///
/// Serialized as a JSON number or the string `"never"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CrashTime {
    At(f64),
    Never,
}

impl CrashTime {
    pub fn time(self) -> Option<f64> {
        match self {
            CrashTime::At(w) => Some(w),
            CrashTime::Never => None,
        }
    }

    /// True when the crash happens at or after `t` (always true for `Never`).
    pub fn not_before(self, t: f64) -> bool {
        match self {
            CrashTime::At(w) => w >= t,
            CrashTime::Never => true,
        }
    }

    pub fn is_never(self) -> bool {
        matches!(self, CrashTime::Never)
    }
}

impl fmt::Display for CrashTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CrashTime::At(w) => write!(f, "{w}"),
            CrashTime::Never => f.write_str("never"),
        }
    }
}

impl Serialize for CrashTime {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            CrashTime::At(w) => serializer.serialize_f64(*w),
            CrashTime::Never => serializer.serialize_str("never"),
        }
    }
}

impl<'de> Deserialize<'de> for CrashTime {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct CrashVisitor;

        impl Visitor<'_> for CrashVisitor {
            type Value = CrashTime;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a non-negative number or \"never\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<CrashTime, E> {
                Ok(CrashTime::At(v))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<CrashTime, E> {
                Ok(CrashTime::At(v as f64))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<CrashTime, E> {
                Ok(CrashTime::At(v as f64))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<CrashTime, E> {
                if v == "never" {
                    Ok(CrashTime::Never)
                } else {
                    Err(E::invalid_value(de::Unexpected::Str(v), &self))
                }
            }
        }

        deserializer.deserialize_any(CrashVisitor)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FaultModel {
    pub alpha: f64,
    pub crash_time: CrashTime,
    pub faulty_robot: RobotId,
}

impl FaultModel {
    pub fn new(alpha: f64, crash_time: CrashTime, faulty_robot: RobotId) -> Self {
        FaultModel {
            alpha,
            crash_time,
            faulty_robot,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha >= 1.0) || !self.alpha.is_finite() {
            return Err(Error::InvalidScenario(format!("alpha < 1 (alpha = {})", self.alpha)));
        }
        if let CrashTime::At(w) = self.crash_time {
            if !(w >= 0.0) || !w.is_finite() {
                return Err(Error::InvalidScenario(format!("crash time must be >= 0 (w = {w})")));
            }
        }
        Ok(())
    }
}

/// Exit position as CCW arc length from the faulty robot's landing point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExitPlacement {
    pub x: f64,
}

impl ExitPlacement {
    pub fn new(x: f64) -> Self {
        ExitPlacement { x }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..TAU).contains(&self.x) {
            return Err(Error::InvalidScenario(format!("exit x = {} not in [0, 2pi)", self.x)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum StrategyParams {
    None,
    /// Landing separation of the two robots.
    Separation { zeta: f64 },
    /// Extra search distance before fetching the crashed robot.
    Delay { y: f64 },
    /// Crash time below which the survivor fetches immediately.
    Threshold { wbar: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrategyId {
    A0,
    A1Together,
    A1Alone,
    A1Combined,
    A1Delayed,
    A2,
}

impl StrategyId {
    pub fn as_str(self) -> &'static str {
        match self {
            StrategyId::A0 => "a0",
            StrategyId::A1Together => "a1-together",
            StrategyId::A1Alone => "a1-alone",
            StrategyId::A1Combined => "a1-combined",
            StrategyId::A1Delayed => "a1-delayed",
            StrategyId::A2 => "a2",
        }
    }
}

impl fmt::Display for StrategyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A strategy together with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "strategy", rename_all = "kebab-case")]
pub enum Strategy {
    A0,
    A1Together,
    A1Alone,
    A1Combined { wbar: f64 },
    A1Delayed { y: f64 },
    A2 { zeta: f64 },
}

impl Strategy {
    pub fn id(&self) -> StrategyId {
        match self {
            Strategy::A0 => StrategyId::A0,
            Strategy::A1Together => StrategyId::A1Together,
            Strategy::A1Alone => StrategyId::A1Alone,
            Strategy::A1Combined { .. } => StrategyId::A1Combined,
            Strategy::A1Delayed { .. } => StrategyId::A1Delayed,
            Strategy::A2 { .. } => StrategyId::A2,
        }
    }

    pub fn params(&self) -> StrategyParams {
        match *self {
            Strategy::A0 | Strategy::A1Together | Strategy::A1Alone => StrategyParams::None,
            Strategy::A1Combined { wbar } => StrategyParams::Threshold { wbar },
            Strategy::A1Delayed { y } => StrategyParams::Delay { y },
            Strategy::A2 { zeta } => StrategyParams::Separation { zeta },
        }
    }

    pub fn zeta(&self) -> Option<f64> {
        match *self {
            Strategy::A2 { zeta } => Some(zeta),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub fault: FaultModel,
    pub exit: ExitPlacement,
    pub strategy_params: StrategyParams,
}

impl Scenario {
    pub fn new(fault: FaultModel, exit: ExitPlacement, strategy_params: StrategyParams) -> Self {
        Scenario {
            fault,
            exit,
            strategy_params,
        }
    }
}

/// Returns the scenario unchanged if every invariant holds.
pub fn validate_scenario(s: Scenario) -> Result<Scenario> {
    s.fault.validate()?;
    s.exit.validate()?;
    match s.strategy_params {
        StrategyParams::None => {}
        StrategyParams::Separation { zeta } => {
            if !(0.0..=TAU).contains(&zeta) {
                return Err(Error::InvalidScenario(format!("zeta = {zeta} not in [0, 2pi]")));
            }
        }
        StrategyParams::Delay { y } => {
            if !(y >= 0.0) || !y.is_finite() {
                return Err(Error::InvalidScenario(format!("y = {y} must be >= 0")));
            }
        }
        StrategyParams::Threshold { wbar } => {
            if !wbar.is_finite() {
                return Err(Error::InvalidScenario(format!("wbar = {wbar} must be finite")));
            }
        }
    }
    Ok(s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MotionKind {
    RadialLine,
    ArcCcw,
    ArcCw,
    Chord,
    Stationary,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectorySegment {
    pub t_start: f64,
    pub t_end: f64,
    pub p_start: Point,
    pub p_end: Point,
    pub motion_kind: MotionKind,
    pub speed: f64,
    pub chauffeuring: bool,
}

impl TrajectorySegment {
    pub fn duration(&self) -> f64 {
        self.t_end - self.t_start
    }

    /// Distance travelled along the segment's own shape.
    pub fn path_length(&self) -> f64 {
        match self.motion_kind {
            MotionKind::Stationary => 0.0,
            MotionKind::RadialLine | MotionKind::Chord => (self.p_end - self.p_start).norm(),
            MotionKind::ArcCcw | MotionKind::ArcCw => self.speed * self.duration(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Trajectory {
    pub segments: Vec<TrajectorySegment>,
}

impl Trajectory {
    pub fn start_time(&self) -> Option<f64> {
        self.segments.first().map(|s| s.t_start)
    }

    pub fn end_time(&self) -> Option<f64> {
        self.segments.last().map(|s| s.t_end)
    }

    pub fn end_point(&self) -> Option<Point> {
        self.segments.last().map(|s| s.p_end)
    }

    /// Checks that consecutive segments share their boundary time and point.
    pub fn check_contiguous(&self, tol: f64) -> Result<()> {
        for (i, pair) in self.segments.windows(2).enumerate() {
            let (a, b) = (&pair[0], &pair[1]);
            if (a.t_end - b.t_start).abs() > tol || (a.p_end - b.p_start).norm() > tol {
                return Err(Error::Internal(format!(
                    "trajectory gap between segments {i} and {}: t {} vs {}, p {:?} vs {:?}",
                    i + 1,
                    a.t_end,
                    b.t_start,
                    a.p_end,
                    b.p_start
                )));
            }
        }
        for s in &self.segments {
            if s.t_end < s.t_start - tol {
                return Err(Error::Internal(format!("segment runs backwards in time: {s:?}")));
            }
            if s.p_start.norm() > 1.0 + tol || s.p_end.norm() > 1.0 + tol {
                return Err(Error::Internal(format!("segment leaves the disk: {s:?}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EventKind {
    ReachPerimeter,
    Crash,
    CrashDetected,
    ExitFound,
    Message,
    Meet,
    Pickup,
    Evacuate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub time: f64,
    pub kind: EventKind,
    pub robot: RobotId,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvacuationOutcome {
    pub evac_time: f64,
    pub exit_found_time: f64,
    pub crash_detected_time: Option<f64>,
    pub trajectories: [Trajectory; 2],
    pub event_log: Vec<Event>,
}

impl EvacuationOutcome {
    pub fn events(&self, kind: EventKind) -> impl Iterator<Item = &Event> {
        self.event_log.iter().filter(move |e| e.kind == kind)
    }

    pub fn first_event(&self, kind: EventKind) -> Option<&Event> {
        self.events(kind).next()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorstCaseRecord {
    pub strategy_id: StrategyId,
    pub alpha: f64,
    pub w: CrashTime,
    pub zeta: Option<f64>,
    pub worst_x: f64,
    pub worst_time: f64,
    /// The worst time is a limit approached as x tends to `worst_x`.
    pub supremum: bool,
    /// Crash-prone robot realizing the worst case, when the strategy is not symmetric.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub faulty_robot: Option<RobotId>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use proptest::strategy::Strategy as _;
    #[allow(unused_imports)]
    use super::Strategy;
    use std::f64::consts::PI;

    fn scenario(alpha: f64, w: CrashTime, x: f64) -> Scenario {
        Scenario::new(
            FaultModel::new(alpha, w, RobotId::R1),
            ExitPlacement::new(x),
            StrategyParams::None,
        )
    }

    #[test]
    fn validation_examples() {
        assert!(validate_scenario(scenario(1.0, CrashTime::At(0.0), 0.0)).is_ok());
        let err = validate_scenario(scenario(0.5, CrashTime::At(1.0), 1.0)).unwrap_err();
        assert!(err.to_string().contains("alpha < 1"));
        assert!(validate_scenario(scenario(2.0, CrashTime::Never, PI)).is_ok());
        assert!(validate_scenario(scenario(2.0, CrashTime::At(-1.0), PI)).is_err());
        assert!(validate_scenario(scenario(2.0, CrashTime::Never, TAU)).is_err());
        let mut s = scenario(2.0, CrashTime::Never, 1.0);
        s.strategy_params = StrategyParams::Separation { zeta: 7.0 };
        assert!(validate_scenario(s).is_err());
        s.strategy_params = StrategyParams::Delay { y: -0.5 };
        assert!(validate_scenario(s).is_err());
    }

    #[test]
    fn crash_time_json() {
        assert_eq!(serde_json::to_string(&CrashTime::Never).unwrap(), "\"never\"");
        assert_eq!(serde_json::to_string(&CrashTime::At(1.5)).unwrap(), "1.5");
        assert_eq!(serde_json::from_str::<CrashTime>("2").unwrap(), CrashTime::At(2.0));
        assert!(serde_json::from_str::<CrashTime>("\"soon\"").is_err());
    }

    fn arb_crash() -> impl proptest::strategy::Strategy<Value = CrashTime> {
        prop_oneof![Just(CrashTime::Never), (0.0f64..10.0).prop_map(CrashTime::At)]
    }

    fn arb_params() -> impl proptest::strategy::Strategy<Value = StrategyParams> {
        prop_oneof![
            Just(StrategyParams::None),
            (0.0f64..TAU).prop_map(|zeta| StrategyParams::Separation { zeta }),
            (0.0f64..6.0).prop_map(|y| StrategyParams::Delay { y }),
            (1.0f64..4.0).prop_map(|wbar| StrategyParams::Threshold { wbar }),
        ]
    }

    proptest! {
        #[test]
        fn scenario_json_round_trip(alpha in 1.0f64..5.0, w in arb_crash(), x in 0.0f64..TAU,
                                    r2 in any::<bool>(), params in arb_params()) {
            let robot = if r2 { RobotId::R2 } else { RobotId::R1 };
            let s = Scenario::new(FaultModel::new(alpha, w, robot), ExitPlacement::new(x), params);
            let text = serde_json::to_string(&s).unwrap();
            let back: Scenario = serde_json::from_str(&text).unwrap();
            prop_assert_eq!(back, s);
        }

        #[test]
        fn record_json_round_trip(alpha in 1.0f64..5.0, w in arb_crash(), zeta in proptest::option::of(0.0f64..PI),
                                  x in 0.0f64..TAU, t in 1.0f64..20.0, sup in any::<bool>()) {
            let r = WorstCaseRecord {
                strategy_id: StrategyId::A2,
                alpha,
                w,
                zeta,
                worst_x: x,
                worst_time: t,
                supremum: sup,
                faulty_robot: Some(RobotId::R2),
            };
            let back: WorstCaseRecord = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
            prop_assert_eq!(back, r);
        }

        #[test]
        fn segment_json_round_trip(t0 in 0.0f64..10.0, dt in 0.0f64..3.0, a in 0.0f64..TAU, b in 0.0f64..TAU) {
            let seg = TrajectorySegment {
                t_start: t0,
                t_end: t0 + dt,
                p_start: crate::geometry::circle_point(a),
                p_end: crate::geometry::circle_point(b),
                motion_kind: MotionKind::Chord,
                speed: 1.0,
                chauffeuring: false,
            };
            let traj = Trajectory { segments: vec![seg] };
            let back: Trajectory = serde_json::from_str(&serde_json::to_string(&traj).unwrap()).unwrap();
            prop_assert_eq!(back, traj);
        }
    }
}
