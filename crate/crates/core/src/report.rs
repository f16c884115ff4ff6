//! Number formatting and the CSV / JSON / Markdown renderers shared by the
//! CLI and the FFI layer. Output is byte-stable: rows are emitted in
//! ascending `k` or label order and JSON objects keep declaration order.

use serde::Serialize;

use crate::catalog::{CatalogIndex, TableRow};
use crate::error::Result;
use crate::grover::ShotCounts;
use crate::statevec::{BasisLabel, StateVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
    Markdown,
}

/// Three decimals, halves rounded up.
pub fn round3(p: f64) -> String {
    let v = (p * 1000.0 + 0.5 + 1e-9).floor() / 1000.0;
    format!("{v:.3}")
}

/// Twelve significant digits in plain decimal notation.
pub fn sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (11 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.starts_with('-') && s[1..].bytes().all(|b| b == b'0' || b == b'.') {
        s[1..].to_string()
    } else {
        s
    }
}

/// `x` rounded to twelve significant digits.
pub fn round12(x: f64) -> f64 {
    sig12(x).parse().unwrap_or(x)
}

/// A probability with its exact value and its three-decimal rendering.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Prob {
    pub exact: f64,
    pub rounded: String,
}

impl From<f64> for Prob {
    fn from(p: f64) -> Self {
        Prob {
            exact: round12(p),
            rounded: round3(p),
        }
    }
}

/// One amplitude as `[re, im]` rounded to twelve significant digits.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AmpEntry {
    pub basis: String,
    pub amp: [f64; 2],
    pub prob: f64,
}

/// Basis-labelled amplitudes, omitting exact zeros.
pub fn amplitude_entries(s: &StateVector) -> Vec<AmpEntry> {
    BasisLabel::all(s.num_qubits())
        .zip(s.amplitudes())
        .filter(|(_, a)| a.norm() > 1e-15)
        .map(|(l, a)| AmpEntry {
            basis: l.to_string(),
            amp: [round12(a.re), round12(a.im)],
            prob: round12(a.norm_sqr()),
        })
        .collect()
}

/// Markdown table with every column padded to its widest cell.
pub fn markdown_table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cells: &mut dyn Iterator<Item = &str>| -> String {
        let padded: Vec<String> = cells
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        format!("| {} |\n", padded.join(" | "))
    };
    let mut out = line(&mut headers.iter().copied());
    let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
    out.push_str(&format!("| {} |\n", rule.join(" | ")));
    for row in rows {
        out.push_str(&line(&mut row.iter().map(String::as_str)));
    }
    out
}

pub fn csv_string(headers: &[&str], rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(headers).map_err(csv_err)?;
    for row in rows {
        w.write_record(row).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| csv_err(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn csv_err(e: impl Into<std::io::Error>) -> crate::error::QssError {
    crate::error::QssError::Io(e.into())
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn label_list(v: &[BasisLabel]) -> String {
    v.iter()
        .map(|l| l.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

#[derive(Serialize)]
struct JsonTableRow {
    k: CatalogIndex,
    #[serde(skip_serializing_if = "Option::is_none")]
    phase1_outcomes: Option<Vec<BasisLabel>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    phase1_p: Option<Prob>,
    #[serde(rename = "M")]
    chosen_m: BasisLabel,
    final_outcomes: Vec<BasisLabel>,
    final_p: Prob,
}

#[derive(Serialize)]
struct JsonTable {
    table: u8,
    enc_k: CatalogIndex,
    m: BasisLabel,
    rows: Vec<JsonTableRow>,
}

/// Context printed alongside a generated decode table.
#[derive(Clone, Copy, Debug)]
pub struct TableHeader {
    pub which: u8,
    pub enc_k: CatalogIndex,
    pub m: BasisLabel,
}

const TABLE_COLUMNS: [&str; 8] = [
    "k",
    "phase1_outcomes",
    "phase1_p",
    "M",
    "final_outcomes",
    "final_p",
    "phase1_p_exact",
    "final_p_exact",
];

pub fn render_table(
    header: TableHeader,
    rows: &[TableRow],
    format: OutputFormat,
) -> Result<String> {
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.k.to_string(),
                label_list(&r.phase1_outcomes),
                r.phase1_prob.map(round3).unwrap_or_default(),
                r.chosen_m.to_string(),
                label_list(&r.final_outcomes),
                round3(r.final_prob),
                r.phase1_prob.map(sig12).unwrap_or_default(),
                sig12(r.final_prob),
            ]
        })
        .collect();
    match format {
        OutputFormat::Csv => csv_string(&TABLE_COLUMNS, &cells),
        OutputFormat::Markdown => Ok(markdown_table(&TABLE_COLUMNS, &cells)),
        OutputFormat::Json => to_json(&JsonTable {
            table: header.which,
            enc_k: header.enc_k,
            m: header.m,
            rows: rows
                .iter()
                .map(|r| JsonTableRow {
                    k: r.k,
                    phase1_outcomes: r.phase1_prob.map(|_| r.phase1_outcomes.clone()),
                    phase1_p: r.phase1_prob.map(Prob::from),
                    chosen_m: r.chosen_m,
                    final_outcomes: r.final_outcomes.clone(),
                    final_p: r.final_prob.into(),
                })
                .collect(),
        }),
    }
}

#[derive(Serialize)]
struct JsonShotRow {
    outcome: BasisLabel,
    count: u64,
    empirical: f64,
    exact: Prob,
}

#[derive(Serialize)]
struct JsonShots {
    k: CatalogIndex,
    m: BasisLabel,
    shots: u64,
    seed: u64,
    outcomes: Vec<JsonShotRow>,
}

/// Shot counts next to the exact distribution they were drawn from.
pub fn render_shots(
    k: CatalogIndex,
    m: BasisLabel,
    counts: &ShotCounts,
    exact: &[f64],
    format: OutputFormat,
) -> Result<String> {
    let headers = ["outcome", "count", "empirical", "exact", "exact_rounded"];
    let rows: Vec<Vec<String>> = counts
        .counts
        .iter()
        .map(|(l, c)| {
            vec![
                l.to_string(),
                c.to_string(),
                sig12(*c as f64 / counts.shots as f64),
                sig12(exact[l.index()]),
                round3(exact[l.index()]),
            ]
        })
        .collect();
    match format {
        OutputFormat::Csv => csv_string(&headers, &rows),
        OutputFormat::Markdown => Ok(format!(
            "k = {k}, m = {m}, shots = {}, seed = {}\n\n{}",
            counts.shots,
            counts.seed,
            markdown_table(&headers, &rows)
        )),
        OutputFormat::Json => to_json(&JsonShots {
            k,
            m,
            shots: counts.shots,
            seed: counts.seed,
            outcomes: counts
                .counts
                .iter()
                .map(|(l, c)| JsonShotRow {
                    outcome: *l,
                    count: *c,
                    empirical: round12(*c as f64 / counts.shots as f64),
                    exact: exact[l.index()].into(),
                })
                .collect(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_decimal_rounding() {
        assert_eq!(round3(25.0 / 32.0), "0.781");
        assert_eq!(round3(9.0 / 32.0), "0.281");
        assert_eq!(round3(121.0 / 128.0), "0.945");
        assert_eq!(round3(61.0 / 128.0), "0.477");
        assert_eq!(round3(25.0 / 128.0), "0.195");
        assert_eq!(round3(37.0 / 128.0), "0.289");
        assert_eq!(round3(13.0 / 32.0), "0.406");
        assert_eq!(round3(0.0625), "0.063");
        assert_eq!(round3(1.0), "1.000");
    }

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(sig12(0.78125), "0.781250000000");
        assert_eq!(sig12(121.0 / 128.0), "0.945312500000");
        assert_eq!(sig12(1.0), "1.00000000000");
        assert_eq!(sig12(0.0), "0");
        assert_eq!(sig12(-1e-20), "-0.0000000000000000000100000000000");
        assert_eq!(sig12(1.0 / 3.0), "0.333333333333");
    }

    #[test]
    fn markdown_alignment() {
        let t = markdown_table(&["a", "long"], &[vec!["xyz".into(), "1".into()]]);
        assert_eq!(t, "| a   | long |\n| --- | ---- |\n| xyz | 1    |\n");
    }
}
