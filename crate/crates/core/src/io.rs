//! Text, CSV, JSON and PGM input/output.
//!
//! Matrix text format: first line `n`, then `n` rows of `n`
//! whitespace-separated decimals. The CSV form is the same rows separated by
//! commas, without the size line. Floats are written in Rust's shortest
//! round-trip representation, so reading back yields identical values.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::balance::{BalanceReport, FactionPartition, FixedPointClass};
use crate::dynamics::StepSummary;
use crate::error::{Error, Result};
use crate::experiments::{McResult, SweepCell, TrialRecord};
use crate::matrix::{AppraisalMatrix, ToleranceConfig};

/// Version tag carried by every JSON summary.
pub const SCHEMA_VERSION: u32 = 1;

fn fmt_f64(v: f64) -> String {
    format!("{v:?}")
}

pub fn matrix_to_text(x: &AppraisalMatrix) -> String {
    let mut out = format!("{}\n", x.n());
    for row in x.rows() {
        let cells: Vec<String> = row.iter().map(|&v| fmt_f64(v)).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}

pub fn matrix_to_csv(x: &AppraisalMatrix) -> String {
    let mut out = String::new();
    for row in x.rows() {
        let cells: Vec<String> = row.iter().map(|&v| fmt_f64(v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

fn parse_value(tok: &str) -> Result<f64> {
    tok.trim()
        .parse::<f64>()
        .map_err(|e| Error::Parse(format!("bad number {tok:?}: {e}")))
}

/// Parses either format. Input whose first non-empty line is a lone unsigned
/// integer followed by more lines is the text format, anything else is CSV
/// (so a 1x1 CSV such as `-0.05` still parses).
pub fn matrix_from_str(s: &str) -> Result<AppraisalMatrix> {
    let first = s
        .lines()
        .find(|l| !l.trim().is_empty())
        .ok_or_else(|| Error::Parse("empty matrix input".into()))?;
    let is_text = first.trim().parse::<usize>().is_ok() && s.trim().lines().count() > 1;
    if !is_text {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .from_reader(s.as_bytes());
        let rows = reader
            .records()
            .map(|rec| rec?.iter().map(parse_value).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        return AppraisalMatrix::from_rows(&rows);
    }
    let mut tokens = s.split_whitespace();
    let n: usize = tokens
        .next()
        .ok_or_else(|| Error::Parse("missing size".into()))?
        .parse()
        .map_err(|e| Error::Parse(format!("bad size: {e}")))?;
    let data = tokens.map(parse_value).collect::<Result<Vec<_>>>()?;
    AppraisalMatrix::new(n, data)
}

pub fn read_matrix(path: &Path) -> Result<AppraisalMatrix> {
    matrix_from_str(&fs::read_to_string(path)?)
}

/// Writes CSV when the extension is `.csv`, the text format otherwise.
pub fn write_matrix(x: &AppraisalMatrix, path: &Path) -> Result<()> {
    let body = if path.extension().is_some_and(|e| e == "csv") {
        matrix_to_csv(x)
    } else {
        matrix_to_text(x)
    };
    fs::write(path, body)?;
    Ok(())
}

/// Three-level grayscale rendering of a sign pattern.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HeatmapSpec {
    pub negative: u8,
    pub positive: u8,
    pub zero: u8,
    pub cell_pixels: usize,
    /// Times at which a simulation should snapshot its state.
    pub frame_times: Vec<usize>,
}

impl Default for HeatmapSpec {
    fn default() -> Self {
        Self {
            negative: 96,
            positive: 200,
            zero: 255,
            cell_pixels: 8,
            frame_times: vec![0],
        }
    }
}

/// Plain (P2) PGM image with one `cell_pixels` square per entry.
pub fn heatmap_pgm(x: &AppraisalMatrix, spec: &HeatmapSpec, tol: &ToleranceConfig) -> String {
    let signs = x.sign_pattern(tol);
    let cell = spec.cell_pixels.max(1);
    let side = x.n() * cell;
    let mut out = format!("P2\n{side} {side}\n255\n");
    for i in 0..x.n() {
        let levels: Vec<String> = signs
            .row(i)
            .iter()
            .flat_map(|&s| {
                let level = match s {
                    1 => spec.positive,
                    -1 => spec.negative,
                    _ => spec.zero,
                };
                std::iter::repeat_n(level.to_string(), cell)
            })
            .collect();
        let line = levels.join(" ");
        for _ in 0..cell {
            out.push_str(&line);
            out.push('\n');
        }
    }
    out
}

pub fn emit_heatmap(x: &AppraisalMatrix, spec: &HeatmapSpec, tol: &ToleranceConfig, path: &Path) -> Result<()> {
    fs::write(path, heatmap_pgm(x, spec, tol))?;
    Ok(())
}

fn csv_string(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// `t,max_norm,min_abs,balanced,sign_changed`
pub fn summaries_csv(summaries: &[StepSummary]) -> Result<String> {
    csv_string(
        &["t", "max_norm", "min_abs", "balanced", "sign_changed"],
        summaries.iter().map(|s| {
            vec![
                s.t.to_string(),
                fmt_f64(s.max_norm),
                fmt_f64(s.min_abs),
                s.balanced.to_string(),
                s.sign_changed.to_string(),
            ]
        }),
    )
}

/// `trials,successes,p_hat,std_err`
pub fn mc_result_csv(r: &McResult) -> Result<String> {
    csv_string(
        &["trials", "successes", "p_hat", "std_err"],
        [vec![
            r.trials.to_string(),
            r.successes.to_string(),
            fmt_f64(r.p_hat),
            fmt_f64(r.std_err),
        ]],
    )
}

/// `trial,seed,z,balance_time` (empty balance time when none).
pub fn trials_csv(records: &[TrialRecord]) -> Result<String> {
    csv_string(
        &["trial", "seed", "z", "balance_time"],
        records.iter().map(|r| {
            vec![
                r.trial.to_string(),
                r.seed.to_string(),
                r.z.to_string(),
                r.balance_time.map_or_else(String::new, |t| t.to_string()),
            ]
        }),
    )
}

/// `n,ave,x_min,x_max,samples,one_faction,two_factions,indeterminate,class`
pub fn sweep_csv(cells: &[SweepCell]) -> Result<String> {
    csv_string(
        &[
            "n",
            "ave",
            "x_min",
            "x_max",
            "samples",
            "one_faction",
            "two_factions",
            "indeterminate",
            "class",
        ],
        cells.iter().map(|c| {
            vec![
                c.n.to_string(),
                fmt_f64(c.ave),
                fmt_f64(c.x_min),
                fmt_f64(c.x_max),
                c.samples.to_string(),
                c.one_faction.to_string(),
                c.two_factions.to_string(),
                c.indeterminate.to_string(),
                serde_json::to_value(c.class)
                    .ok()
                    .and_then(|v| v.as_str().map(str::to_owned))
                    .unwrap_or_default(),
            ]
        }),
    )
}

/// `node,component,faction`
pub fn partition_csv(p: &FactionPartition) -> Result<String> {
    csv_string(
        &["node", "component", "faction"],
        p.component_of
            .iter()
            .zip(&p.faction_of)
            .enumerate()
            .map(|(i, (c, f))| vec![i.to_string(), c.to_string(), f.to_string()]),
    )
}

/// JSON object `{"schema_version", "params", "result"}` with a trailing newline.
pub fn json_summary<P: Serialize, R: Serialize>(params: &P, result: &R) -> Result<String> {
    let value = serde_json::json!({
        "schema_version": SCHEMA_VERSION,
        "params": params,
        "result": result,
    });
    let mut s = serde_json::to_string_pretty(&value)?;
    s.push('\n');
    Ok(s)
}

/// `key: value` lines describing a balance report.
pub fn balance_report_text(r: &BalanceReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "balanced: {}", r.balanced);
    let _ = writeln!(s, "method: {:?}", r.method);
    let _ = writeln!(s, "violations: {}", r.violations.len());
    for v in r.violations.iter().take(20) {
        let _ = writeln!(s, "violation: {}", serde_json::to_string(v).unwrap_or_default());
    }
    if let Some(f) = &r.factions {
        let _ = writeln!(s, "factions: {}", f.groups().len());
        for g in f.groups() {
            let _ = writeln!(s, "group: {g:?}");
        }
    }
    s
}

/// `key: value` lines describing a fixed-point classification.
pub fn fixed_point_text(label: &str, c: &FixedPointClass) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{label}.member: {}", c.member);
    let _ = writeln!(s, "{label}.rank_one: {}", c.rank_one);
    let _ = writeln!(s, "{label}.residual: {}", fmt_f64(c.residual));
    let _ = writeln!(s, "{label}.blocks: {}", c.partition.len());
    for (block, params) in c.partition.iter().zip(&c.per_block) {
        let _ = writeln!(
            s,
            "{label}.block: {block:?} {}",
            serde_json::to_string(params).unwrap_or_default()
        );
    }
    s
}
