//! Output records and their CSV/JSON rendering.

use serde::Serialize;

use super::config::ScenarioConfig;

/// C-style `%.15e`: 15 fractional digits, signed exponent of at least two digits.
pub fn fmt_e15(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let s = format!("{x:.15e}");
    let (mant, exp) = s.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mant}e{sign}{:02}", exp.abs())
}

/// Header plus rows of numbers, LF-terminated.
pub fn csv_table(header: &[&str], rows: &[Vec<f64>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|x| fmt_e15(*x)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// JSON array of objects keyed by the header.
pub fn json_table(header: &[&str], rows: &[Vec<f64>], config: &ScenarioConfig) -> String {
    let records: Vec<serde_json::Map<String, serde_json::Value>> = rows
        .iter()
        .map(|row| {
            header
                .iter()
                .zip(row)
                .map(|(k, v)| (k.to_string(), serde_json::json!(v)))
                .collect()
        })
        .collect();
    let doc = serde_json::json!({
        "version": env!("CARGO_PKG_VERSION"),
        "config": config,
        "rows": records,
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
    s.push('\n');
    s
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AbsErrors {
    pub tanh_r: f64,
    pub theta: f64,
    pub fidelity: f64,
}

/// Outcome of one `simulate` run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub version: String,
    pub config: ScenarioConfig,
    pub tanh_r: f64,
    pub theta: f64,
    pub fidelity: f64,
    pub closed_form_tanh_r: f64,
    pub closed_form_theta: f64,
    pub closed_form_fidelity: f64,
    pub abs_errors: AbsErrors,
    pub probabilities: Vec<f64>,
    pub tail_bound: f64,
}

impl RunReport {
    /// Two-column `key,value` listing; numbers in `%.15e`.
    pub fn to_csv(&self) -> String {
        let c = &self.config;
        let mut out = String::from("key,value\n");
        let mut text = |k: &str, v: String| {
            out.push_str(k);
            out.push(',');
            out.push_str(&v);
            out.push('\n');
        };
        text("version", self.version.clone());
        text("format", "csv".into());
        for (k, v) in [
            ("alpha", c.alpha),
            ("g", c.g),
            ("t_start", c.t_start),
            ("t_end", c.t_end),
            ("tol", c.tol),
        ] {
            text(k, fmt_e15(v));
        }
        text("n_max", c.n_max.to_string());
        for (k, v) in [
            ("tanh_r", self.tanh_r),
            ("theta", self.theta),
            ("fidelity", self.fidelity),
            ("closed_form_tanh_r", self.closed_form_tanh_r),
            ("closed_form_theta", self.closed_form_theta),
            ("closed_form_fidelity", self.closed_form_fidelity),
            ("abs_error_tanh_r", self.abs_errors.tanh_r),
            ("abs_error_theta", self.abs_errors.theta),
            ("abs_error_fidelity", self.abs_errors.fidelity),
            ("tail_bound", self.tail_bound),
        ] {
            text(k, fmt_e15(v));
        }
        for (n, p) in self.probabilities.iter().enumerate() {
            text(&format!("p_{n}"), fmt_e15(*p));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }
}
