//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::f64::consts::{PI, TAU};
use std::process::{Command, ExitCode};
use std::time::Instant;

use disk_evac::analysis::{best_zeta, crossover_alpha, worst_case, SearchOptions, SweepSpec};
use disk_evac::bounds::lower_bound;
use disk_evac::model::{CrashTime, Strategy};
use disk_evac::strategies::{
    a1_together_sup, a2_meeting_chord, coincidence_zeta, delayed_pickup_time,
};
use disk_evac::validation::{run_validation, ValidationConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn fault_free() -> f64 {
    1.0 + 2.0 * PI / 3.0 + 3f64.sqrt()
}

fn binary() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_disk-evac"));
    c.env_remove("EVAC_OUTPUT_DIR");
    c
}

fn fault_free_worst_case() -> Outcome {
    let started = Instant::now();
    let out = binary()
        .args(["worst-case", "--strategy", "a1", "--no-fault", "--alpha", "1"])
        .output()
        .expect("binary runs");
    let elapsed = started.elapsed().as_secs_f64();
    let v: serde_json::Value = match serde_json::from_slice(&out.stdout) {
        Ok(v) => v,
        Err(e) => return outcome(false, format!("unparseable output: {e}")),
    };
    let t = v["worst_time"].as_f64().unwrap_or(f64::NAN);
    let err = (t - fault_free()).abs();
    outcome(
        out.status.success() && err < 1e-6 && elapsed < 1.0,
        format!("worst {t:.10}, |err| {err:.1e}, {elapsed:.3} s"),
    )
}

fn crossover() -> Outcome {
    let alpha = crossover_alpha();
    let opts = SearchOptions::default();
    let w = CrashTime::At(1.0);
    let a0 = worst_case(&Strategy::A0, alpha, w, &opts).unwrap().worst_time;
    let alone = worst_case(&Strategy::A1Alone, alpha, w, &opts).unwrap().worst_time;
    outcome(
        (1.3030..=1.3040).contains(&alpha) && (a0 - alone).abs() < 1e-3,
        format!("alpha* {alpha:.8}, A0 {a0:.8}, A1-alone {alone:.8} at w = 1"),
    )
}

fn coincidence() -> Outcome {
    // independent bisection on zeta + chord = 2pi - zeta with chord = 2 sin(zeta/2)
    let residual = |z: f64| TAU - 2.0 * z - 2.0 * (z / 2.0).sin();
    let (mut lo, mut hi) = (2.0, 2.5);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if residual(lo) * residual(mid) <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let zc = coincidence_zeta();
    let below = zc - 1e-4;
    let m = a2_meeting_chord(below).unwrap();
    let meets_before_far_end = below + m < TAU - below;
    outcome(
        (zc - 2.24123).abs() < 5e-4 && (zc - lo).abs() < 1e-12 && meets_before_far_end,
        format!("zeta_c {zc:.8}, bisection {lo:.8}"),
    )
}

fn oracle_equivalence() -> Outcome {
    let started = Instant::now();
    let report = run_validation(&ValidationConfig::default()).unwrap();
    let elapsed = started.elapsed().as_secs_f64();
    let worst = report.checks.iter().map(|c| c.max_error).fold(0.0, f64::max);
    let failing: Vec<&str> = report
        .checks
        .iter()
        .filter(|c| !c.passed() || c.samples < 10_000)
        .map(|c| c.name.as_str())
        .collect();
    let printed = report.fetch_first_as_printed;
    outcome(
        failing.is_empty() && elapsed < 60.0,
        format!(
            "{} checks x {} samples, max |err| {worst:.1e}, {elapsed:.1} s, failing {failing:?}; \
             fetch-first as printed: max |diff| {:.3}, offset 2*alpha within {:.1e}",
            report.checks.len(),
            report.config.samples,
            printed.max_abs_difference,
            printed.max_offset_deviation
        ),
    )
}

struct SweepRun {
    csv: Vec<u8>,
    seconds: f64,
    ok: bool,
}

fn default_sweep() -> SweepRun {
    let started = Instant::now();
    let out = binary().arg("sweep").output().expect("binary runs");
    SweepRun {
        csv: out.stdout,
        seconds: started.elapsed().as_secs_f64(),
        ok: out.status.success(),
    }
}

fn bound_dominance(csv: &[u8]) -> Outcome {
    let text = String::from_utf8_lossy(csv);
    let mut cells = std::collections::BTreeSet::new();
    let mut checked = 0usize;
    let mut worst_gap = f64::INFINITY;
    let mut violations = Vec::new();
    for line in text.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 8 {
            return outcome(false, format!("malformed row {line:?}"));
        }
        cells.insert((f[1].to_string(), f[2].to_string()));
        if f[0] == "lower-bound" {
            continue;
        }
        let time: f64 = f[5].parse().unwrap();
        let lb: f64 = f[6].parse().unwrap();
        checked += 1;
        worst_gap = worst_gap.min(time - lb);
        if lb > time + 1e-6 {
            violations.push(line.to_string());
        }
    }
    let spec = SweepSpec::default();
    let expected_cells = spec.alpha_values.len() * spec.w_grid().len();
    outcome(
        violations.is_empty() && cells.len() == expected_cells && checked > 0,
        format!(
            "{} cells, {checked} strategy rows, min(worst - bound) {worst_gap:.3e}, {} violations{}",
            cells.len(),
            violations.len(),
            violations.first().map(|v| format!(", first {v}")).unwrap_or_default()
        ),
    )
}

fn lower_bound_anchors() -> Outcome {
    let third = 1.0 + 2.0 * PI / 3.0;
    let joints = [third, third + 3f64.sqrt() / 2.0, fault_free()];
    let mut jump: f64 = 0.0;
    let mut anchor: f64 = 0.0;
    for alpha in SweepSpec::default().alpha_values {
        let at = |w: f64| lower_bound(alpha, CrashTime::At(w)).unwrap().value;
        for b in joints {
            jump = jump.max((at(b - 1e-10) - at(b + 1e-10)).abs());
            jump = jump.max((at(b - 1e-10) - at(b)).abs());
        }
        anchor = anchor.max((at(third) - (third + (alpha + 1.0) * 3f64.sqrt())).abs());
    }
    outcome(
        jump < 1e-6 && anchor < 1e-6,
        format!("max jump {jump:.1e}, anchor |err| {anchor:.1e}"),
    )
}

fn a0_optimal_at_unit_cost() -> Outcome {
    let w = CrashTime::At(0.0);
    let a0 = worst_case(&Strategy::A0, 1.0, w, &SearchOptions::default()).unwrap();
    let lb = lower_bound(1.0, w).unwrap().value;
    let target = 1.0 + TAU;
    outcome(
        (a0.worst_time - target).abs() < 1e-9 && (lb - target).abs() < 1e-9,
        format!(
            "sup A0 {:.12} (supremum: {}), bound {lb:.12}, 1+2pi {target:.12}",
            a0.worst_time, a0.supremum
        ),
    )
}

fn best_separation_is_pi() -> Outcome {
    let spec = SweepSpec::default();
    let zetas = spec.zeta_grid();
    let mut misses = Vec::new();
    for alpha in [1.5, 2.0] {
        for k in 1..=5 {
            let w = k as f64 * (1.0 + 2.0 * PI / 3.0) / 6.0;
            let (zeta, _) = best_zeta(alpha, CrashTime::At(w), &zetas, &spec.search).unwrap();
            if (zeta - PI).abs() > 1e-12 {
                misses.push(format!("alpha {alpha} w {w:.4} -> {zeta:.4}"));
            }
        }
    }
    outcome(
        misses.is_empty(),
        format!("{} separations, 10 cells, misses {misses:?}", zetas.len()),
    )
}

fn delay_endpoints() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut bad = Vec::new();
    let (mut at_zero, mut at_max) = (0, 0);
    for _ in 0..100 {
        let alpha = rng.gen_range(1.0..2.5);
        let w = rng.gen_range(1.0..1.0 + PI);
        let y_max = TAU - 2.0 * (w - 1.0);
        let f = |y: f64| delayed_pickup_time(alpha, w, y).unwrap();
        let n = 4000;
        let (argmin, min) = (0..=n)
            .map(|i| y_max * i as f64 / n as f64)
            .map(|y| (y, f(y)))
            .fold((0.0, f64::INFINITY), |b, p| if p.1 < b.1 { p } else { b });
        let endpoint = if argmin < 0.5 * y_max { 0.0 } else { y_max };
        let at_endpoint = (f(endpoint) - min).abs() < 1e-12;
        // slope of f in y is cos(w - 1 + y/2) - (alpha - 1), decreasing in y
        let slope = |y: f64| (w - 1.0 + y / 2.0).cos() - (alpha - 1.0);
        let predicted = if slope(0.0) <= 0.0 || f(y_max) < f(0.0) { y_max } else { 0.0 };
        if !at_endpoint || predicted != endpoint || slope(y_max) > 0.0 {
            bad.push(format!("alpha {alpha:.4} w {w:.4} argmin {argmin:.4}"));
        }
        if endpoint == 0.0 {
            at_zero += 1;
        } else {
            at_max += 1;
        }
    }
    outcome(
        bad.is_empty(),
        format!("minimum at y = 0: {at_zero}, at y_max: {at_max}, disagreements {bad:?}"),
    )
}

fn z11_critical_points() -> Outcome {
    let step = 1e-4;
    let argmax = |alpha: f64| {
        let n = (PI / step) as usize;
        (0..=n)
            .map(|i| 1.0 + step * i as f64)
            .map(|w| (w, a1_together_sup(alpha, w).unwrap()))
            .fold((1.0, f64::NEG_INFINITY), |b, p| if p.1 > b.1 { p } else { b })
            .0
    };
    let mut details = Vec::new();
    let mut ok = true;
    for alpha in [1.1f64, 1.2, 1.4] {
        let expected = 1.0 + ((2.0 * alpha - 1.0) / 2.0).acos();
        let got = argmax(alpha);
        ok &= (got - expected).abs() < 1e-3;
        details.push(format!("alpha {alpha}: {got:.4} vs {expected:.4}"));
    }
    let boundary = argmax(1.6);
    ok &= boundary == 1.0;
    details.push(format!("alpha 1.6: {boundary}"));
    outcome(ok, details.join(", "))
}

fn determinism(first: &SweepRun, second: &SweepRun) -> Outcome {
    let rows = first.csv.iter().filter(|&&b| b == b'\n').count();
    outcome(
        first.ok && second.ok && first.csv == second.csv && first.seconds < 300.0 && second.seconds < 300.0,
        format!(
            "{rows} lines, identical: {}, runs {:.1} s and {:.1} s",
            first.csv == second.csv,
            first.seconds,
            second.seconds
        ),
    )
}

fn main() -> ExitCode {
    let mut failures = 0;
    let mut report = |n: usize, name: &str, o: Outcome| {
        let tag = if o.passed { "PASS" } else { "FAIL" };
        if !o.passed {
            failures += 1;
        }
        println!("{tag} criterion {n:>2} {name}: {}", o.detail);
    };
    report(1, "fault-free worst case", fault_free_worst_case());
    report(2, "crossover cost", crossover());
    report(3, "coincidence angle", coincidence());
    report(4, "closed forms match the simulator", oracle_equivalence());
    let first = default_sweep();
    let second = default_sweep();
    report(5, "lower bound dominance", bound_dominance(&first.csv));
    report(6, "lower bound continuity and anchor", lower_bound_anchors());
    report(7, "A0 optimal at unit cost", a0_optimal_at_unit_cost());
    report(8, "best separation is pi for early crashes", best_separation_is_pi());
    report(9, "delay minimum at an endpoint", delay_endpoints());
    report(10, "moving-together critical points", z11_critical_points());
    report(11, "sweep determinism", determinism(&first, &second));
    if failures == 0 {
        println!("acceptance: all criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failures} criteria fail");
        ExitCode::FAILURE
    }
}
