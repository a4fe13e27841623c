//! Number formatting, angle parsing and CSV rendering.

use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::analysis::SweepRow;
use crate::model::CrashTime;

pub const CSV_HEADER: &str = "strategy,alpha,w,zeta,worst_x,worst_time,lower_bound,supremum";

/// Renders `v` with 12 significant digits, trailing zeros trimmed, switching
/// to exponent notation for very small or large magnitudes.
pub fn fmt_num(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let sci = format!("{v:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent notation");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_string()
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn fmt_crash(w: CrashTime) -> String {
    match w {
        CrashTime::At(w) => fmt_num(w),
        CrashTime::Never => "never".into(),
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_num).unwrap_or_default()
}

pub fn csv_row(row: &SweepRow) -> String {
    format!(
        "{},{},{},{},{},{},{},{}",
        row.strategy,
        fmt_num(row.alpha),
        fmt_crash(row.w),
        fmt_opt(row.zeta),
        fmt_opt(row.worst_x),
        fmt_num(row.worst_time),
        fmt_num(row.lower_bound),
        row.supremum
    )
}

/// Header plus one line per row, newline-terminated.
pub fn csv_table(rows: &[SweepRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in rows {
        let _ = writeln!(out, "{}", csv_row(row));
    }
    out
}

/// Parses an angle in radians: a decimal, or a sum of terms such as `pi/3`,
/// `2pi/3`, `2*pi/3` and `2pi+1`.
pub fn parse_angle(s: &str) -> Result<f64, String> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err("empty angle".into());
    }
    if let Ok(v) = compact.parse::<f64>() {
        return finite(v, s);
    }
    let mut total = 0.0;
    let mut rest = compact.as_str();
    let mut sign = 1.0;
    if let Some(r) = rest.strip_prefix('-') {
        sign = -1.0;
        rest = r;
    } else if let Some(r) = rest.strip_prefix('+') {
        rest = r;
    }
    loop {
        // split at the next top-level sign that is not part of an exponent
        let bytes = rest.as_bytes();
        let split = (1..bytes.len()).find(|&i| {
            (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E')
        });
        let (term, tail) = match split {
            Some(i) => (&rest[..i], Some(&rest[i..])),
            None => (rest, None),
        };
        total += sign * parse_term(term).map_err(|e| format!("bad angle {s:?}: {e}"))?;
        match tail {
            None => break,
            Some(t) => {
                sign = if t.starts_with('-') { -1.0 } else { 1.0 };
                rest = &t[1..];
            }
        }
    }
    finite(total, s)
}

fn finite(v: f64, s: &str) -> Result<f64, String> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("angle {s:?} is not finite"))
    }
}

fn parse_number(s: &str) -> Result<f64, String> {
    s.parse::<f64>().map_err(|_| format!("{s:?} is not a number"))
}

fn parse_term(term: &str) -> Result<f64, String> {
    let lower = term.to_ascii_lowercase();
    let (numerator, denominator) = match lower.split_once('/') {
        Some((n, d)) => (n, Some(parse_number(d)?)),
        None => (lower.as_str(), None),
    };
    let value = match numerator.find("pi") {
        Some(at) => {
            if !numerator[at + 2..].is_empty() {
                return Err(format!("unexpected {:?} after pi", &numerator[at + 2..]));
            }
            let coef = numerator[..at].trim_end_matches('*');
            let coef = if coef.is_empty() { 1.0 } else { parse_number(coef)? };
            coef * PI
        }
        None => parse_number(numerator)?,
    };
    match denominator {
        Some(d) if d == 0.0 => Err("division by zero".into()),
        Some(d) => Ok(value / d),
        None => Ok(value),
    }
}

/// `never` or an angle-like number.
pub fn parse_crash_time(s: &str) -> Result<CrashTime, String> {
    if s.trim().eq_ignore_ascii_case("never") {
        Ok(CrashTime::Never)
    } else {
        parse_angle(s).map(CrashTime::At)
    }
}
