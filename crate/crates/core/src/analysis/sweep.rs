//! Grid sweeps over chauffeuring cost, crash time and separation.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::worst::{a1_best_worst_case, a2_worst_for, worst_case, SearchOptions};
use crate::bounds::lower_bound;
use crate::error::{Error, Result};
use crate::model::{CrashTime, RobotId, Strategy};
use crate::strategies::{A2Params, A2Pickup};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub alpha_values: Vec<f64>,
    pub w_start: f64,
    pub w_end: f64,
    pub w_step: f64,
    pub zeta_start: f64,
    pub zeta_end: f64,
    pub zeta_step: f64,
    pub search: SearchOptions,
    /// Emit one row per separation angle.
    pub zeta_rows: bool,
    /// Emit the best-separation row.
    pub best_zeta: bool,
}

impl Default for SweepSpec {
    fn default() -> Self {
        SweepSpec {
            alpha_values: vec![1.0, 1.30346, 1.5, 2.0],
            w_start: 0.0,
            w_end: TAU + 1.0,
            w_step: PI / 120.0,
            zeta_start: 0.0,
            zeta_end: PI,
            zeta_step: PI / 600.0,
            search: SearchOptions::default(),
            zeta_rows: true,
            best_zeta: true,
        }
    }
}

/// `start + k·step` for every `k` that stays within `end` (up to rounding).
pub fn grid(start: f64, end: f64, step: f64) -> Vec<f64> {
    let count = ((end - start) / step + 1e-9).floor() as usize;
    (0..=count).map(|k| start + step * k as f64).collect()
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidScenario(format!("sweep spec: {what}")));
        if self.alpha_values.is_empty() {
            return bad("no alpha values");
        }
        if self.alpha_values.iter().any(|a| !(*a >= 1.0) || !a.is_finite()) {
            return bad("alpha values must be >= 1");
        }
        if !(self.w_step > 0.0) || !(self.zeta_step > 0.0) {
            return bad("steps must be positive");
        }
        if !(self.w_start >= 0.0) || !(self.w_end >= self.w_start) || !self.w_end.is_finite() {
            return bad("crash-time range must be a nonempty subrange of [0, inf)");
        }
        if !(self.zeta_start >= 0.0) || !(self.zeta_end >= self.zeta_start) || self.zeta_end > TAU {
            return bad("separation range must be a nonempty subrange of [0, 2pi]");
        }
        if self.search.resolution < 3 || !(self.search.tolerance > 0.0) {
            return bad("exit search needs at least 3 grid points and a positive tolerance");
        }
        Ok(())
    }

    pub fn w_grid(&self) -> Vec<f64> {
        grid(self.w_start, self.w_end, self.w_step)
    }

    pub fn zeta_grid(&self) -> Vec<f64> {
        grid(self.zeta_start, self.zeta_end, self.zeta_step)
    }

    pub fn rows_per_cell(&self) -> usize {
        2 + if self.zeta_rows { self.zeta_grid().len() } else { 0 }
            + usize::from(self.best_zeta)
            + 1
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub strategy: String,
    pub alpha: f64,
    pub w: CrashTime,
    pub zeta: Option<f64>,
    pub worst_x: Option<f64>,
    pub worst_time: f64,
    pub lower_bound: f64,
    pub supremum: bool,
}

fn a2_symmetric(
    alpha: f64,
    w: CrashTime,
    params: &A2Params,
    search: &SearchOptions,
) -> super::worst::ExitMax {
    let first = a2_worst_for(alpha, w, params, RobotId::R1, A2Pickup::AfterOwnArc, search);
    let second = a2_worst_for(alpha, w, params, RobotId::R2, A2Pickup::AfterOwnArc, search);
    if second.time > first.time {
        second
    } else {
        first
    }
}

fn cell_rows(
    spec: &SweepSpec,
    zetas: &[(f64, A2Params)],
    alpha: f64,
    w: f64,
) -> Result<Vec<SweepRow>> {
    let crash = CrashTime::At(w);
    let lb = lower_bound(alpha, crash)?;
    let row = |strategy: &str, zeta: Option<f64>, x: Option<f64>, time: f64, sup: bool| SweepRow {
        strategy: strategy.to_string(),
        alpha,
        w: crash,
        zeta,
        worst_x: x,
        worst_time: time,
        lower_bound: lb.value,
        supremum: sup,
    };
    let mut rows = Vec::with_capacity(spec.rows_per_cell());
    let a0 = worst_case(&Strategy::A0, alpha, crash, &spec.search)?;
    rows.push(row("a0", None, Some(a0.worst_x), a0.worst_time, a0.supremum));
    let a1 = a1_best_worst_case(alpha, crash, &spec.search)?;
    rows.push(row(
        a1.strategy_id.as_str(),
        None,
        Some(a1.worst_x),
        a1.worst_time,
        a1.supremum,
    ));
    let mut best: Option<(f64, super::worst::ExitMax)> = None;
    for (zeta, params) in zetas {
        let m = a2_symmetric(alpha, crash, params, &spec.search);
        if spec.zeta_rows {
            rows.push(row("a2", Some(*zeta), Some(m.x), m.time, m.supremum));
        }
        // ascending separations: a later tie replaces the earlier one
        if best.map_or(true, |(_, b)| m.time <= b.time + 1e-12) {
            best = Some((*zeta, m));
        }
    }
    if spec.best_zeta {
        if let Some((zeta, m)) = best {
            rows.push(row("a2-best", Some(zeta), Some(m.x), m.time, m.supremum));
        }
    }
    rows.push(row("lower-bound", None, None, lb.value, false));
    Ok(rows)
}

/// Runs the sweep on the current rayon pool. Rows come out ordered by
/// `(alpha, w)` and, within a cell, as a0, a1, a2 by separation, a2-best,
/// lower-bound.
pub fn sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let zetas: Vec<(f64, A2Params)> = spec
        .zeta_grid()
        .into_iter()
        .map(|z| A2Params::new(z).map(|p| (z, p)))
        .collect::<Result<_>>()?;
    let cells: Vec<(f64, f64)> = spec
        .alpha_values
        .iter()
        .flat_map(|&a| spec.w_grid().into_iter().map(move |w| (a, w)))
        .collect();
    let chunks: Vec<Vec<SweepRow>> = cells
        .par_iter()
        .map(|&(alpha, w)| cell_rows(spec, &zetas, alpha, w))
        .collect::<Result<_>>()?;
    Ok(chunks.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grids() {
        let spec = SweepSpec::default();
        assert_eq!(spec.w_grid().len(), 279);
        assert_eq!(spec.zeta_grid().len(), 601);
        assert!((spec.zeta_grid()[600] - PI).abs() < 1e-12);
        assert_eq!(spec.rows_per_cell(), 2 + 601 + 1 + 1);
    }

    #[test]
    fn single_cell_at_center_crash() {
        let spec = SweepSpec {
            alpha_values: vec![1.0],
            w_end: 0.0,
            zeta_step: PI / 4.0,
            ..SweepSpec::default()
        };
        let rows = sweep(&spec).unwrap();
        assert_eq!(rows.len(), spec.rows_per_cell());
        assert_eq!(rows[0].strategy, "a0");
        assert!((rows[0].worst_time - (1.0 + TAU)).abs() < 1e-9);
        assert_eq!(rows.last().unwrap().strategy, "lower-bound");
    }

    #[test]
    fn late_crashes_hit_the_fault_free_bound() {
        let spec = SweepSpec {
            alpha_values: vec![1.5, 2.0],
            w_start: 5.0,
            w_end: 6.0,
            w_step: 0.5,
            zeta_step: PI / 2.0,
            search: SearchOptions {
                resolution: 256,
                tolerance: 1e-9,
            },
            ..SweepSpec::default()
        };
        for r in sweep(&spec).unwrap() {
            assert!((r.lower_bound - (1.0 + 2.0 * PI / 3.0 + 3f64.sqrt())).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_spec() {
        let spec = SweepSpec {
            w_step: 0.0,
            ..SweepSpec::default()
        };
        assert!(sweep(&spec).is_err());
        let spec = SweepSpec {
            alpha_values: vec![],
            ..SweepSpec::default()
        };
        assert!(sweep(&spec).is_err());
    }
}
