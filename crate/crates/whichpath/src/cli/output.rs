//! File emission: fixed-header CSV, JSON reports, atomic writes.
//!
//! Floats print with 17 significant digits so every CSV value round-trips to
//! the exact f64 that produced it, making reruns byte-comparable.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::analysis::PatternReport;
use crate::sampler::{EventRecord, GofResult, Histogram};
use crate::statevec::MeasureOutcome;
use crate::{Result, SimError};

/// 17 significant digits: exact f64 round-trip.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> SimError + '_ {
    move |source| SimError::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Write via a temp file in the same directory, then rename into place.
pub fn atomic_write(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(io_err(path))?;
        }
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = std::path::PathBuf::from(tmp);
    std::fs::write(&tmp, contents).map_err(io_err(&tmp))?;
    std::fs::rename(&tmp, path).map_err(io_err(path))?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("report serializes");
    text.push('\n');
    atomic_write(path, &text)
}

pub fn pattern_csv(pr: &PatternReport) -> String {
    let mut out = String::from("element_index,position_m,probability\n");
    for (j, (x, p)) in pr.positions.iter().zip(&pr.probs).enumerate() {
        let _ = writeln!(out, "{j},{},{}", fmt_f64(*x), fmt_f64(*p));
    }
    out
}

pub fn events_csv(events: &[EventRecord], positions: &[f64]) -> String {
    let mut out = String::from("sample_index,element_index,position_m,internal_outcome\n");
    for e in events {
        let outcome = e
            .internal_outcome
            .map(|o| o.to_string())
            .unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{}",
            e.sample_index,
            e.element,
            fmt_f64(positions[e.element]),
            outcome
        );
    }
    out
}

pub fn histogram_csv(h: &Histogram, positions: &[f64]) -> String {
    let mut header = String::from("element_index,position_m,count");
    for label in &h.outcome_labels {
        let _ = write!(header, ",count_{}", column_name(*label));
    }
    let mut out = header;
    out.push('\n');
    for (j, c) in h.counts.iter().enumerate() {
        let _ = write!(out, "{j},{},{c}", fmt_f64(positions[j]));
        for per in &h.by_outcome {
            let _ = write!(out, ",{}", per[j]);
        }
        out.push('\n');
    }
    out
}

fn column_name(o: MeasureOutcome) -> &'static str {
    match o {
        MeasureOutcome::ModeA => "a",
        MeasureOutcome::ModeB => "b",
        MeasureOutcome::Plus => "plus",
        MeasureOutcome::Minus => "minus",
        MeasureOutcome::Idle => "idle",
        MeasureOutcome::Fired(_) => "fired",
    }
}

/// One sweep row: the swept parameter's value and the derived metrics.
#[derive(Clone, Copy, Debug)]
pub struct SweepRow {
    pub value: f64,
    pub visibility: f64,
    pub distinguishability: f64,
    pub duality_sum: f64,
    pub mutual_information_bits: f64,
}

pub fn sweep_csv(parameter: &str, rows: &[SweepRow]) -> String {
    let mut out = String::from(
        "parameter,value,visibility,distinguishability,duality_v2_plus_d2,mutual_information_bits\n",
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{parameter},{},{},{},{},{}",
            fmt_f64(r.value),
            fmt_f64(r.visibility),
            fmt_f64(r.distinguishability),
            fmt_f64(r.duality_sum),
            fmt_f64(r.mutual_information_bits)
        );
    }
    out
}

// JSON report documents. Everything emitted validates against
// report.schema.json (one schema, discriminated on "kind").

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Report {
    Verify(VerifyReport),
    Pattern(PatternJson),
    Eraser(EraserJson),
    SampleGof(GofJson),
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub observed: f64,
    pub bound: f64,
    /// "<=" or ">=": how `observed` must relate to `bound`
    pub comparison: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckResult {
    pub fn at_most(name: &str, observed: f64, bound: f64) -> Self {
        Self {
            name: name.to_string(),
            observed,
            bound,
            comparison: "<=".into(),
            passed: observed <= bound,
            note: None,
        }
    }

    pub fn at_least(name: &str, observed: f64, bound: f64) -> Self {
        Self {
            name: name.to_string(),
            observed,
            bound,
            comparison: ">=".into(),
            passed: observed >= bound,
            note: None,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub variant: String,
    pub gamma: f64,
    pub sigma: f64,
    pub n_elements: usize,
    pub seed: u64,
    pub checks: Vec<CheckResult>,
    pub all_passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PatternJson {
    pub variant: String,
    pub gamma: f64,
    pub sigma: f64,
    pub n_elements: usize,
    pub visibility: f64,
    pub visibility_raw: f64,
    pub fringe_spacing_m: Option<f64>,
    pub phase_constraint_residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct EraserJson {
    pub variant: String,
    pub phi_rad: f64,
    pub n_elements: usize,
    pub p_plus: f64,
    pub p_minus: f64,
    pub visibility_plus: f64,
    pub visibility_minus: f64,
    pub decomposition_residual: f64,
    pub marginal_flatness_defect: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct GofJson {
    pub variant: String,
    pub seed: u64,
    pub n_samples: u64,
    pub n_elements: usize,
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

impl GofJson {
    pub fn new(
        variant: String,
        seed: u64,
        n_samples: u64,
        n_elements: usize,
        gof: &GofResult,
    ) -> Self {
        Self {
            variant,
            seed,
            n_samples,
            n_elements,
            statistic: gof.statistic,
            dof: gof.dof,
            p_value: gof.p_value,
        }
    }
}
