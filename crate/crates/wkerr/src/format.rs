// Copyright 2026 The wkerr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! JSON and CSV renderings of the core types.
//!
//! CSV output uses a comma separator, a header row and LF line endings.
//! Floating-point values are printed with 6 significant digits.

use std::collections::BTreeMap;

use serde::Serialize;
use wkerr_core::homodyne::BranchPartition;
use wkerr_core::{
    ConfusionMatrix, DistinguishabilityReport, MeasurementOutcome, NetworkTopology, PhaseTable,
    Rail, Side,
};

/// `x` rounded to 6 significant digits.
pub fn round6(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.5e}").parse().expect("formatted float parses")
}

/// `x` with 6 significant digits in the style of C's `%g`.
pub fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    let rounded = round6(x);
    // rounding may carry into the next decade
    let exp = if rounded.abs() >= 10f64.powi(exp + 1) {
        exp + 1
    } else {
        exp
    };
    if (-5..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        trim_zeros(format!("{rounded:.decimals$}"))
    } else {
        let s = format!("{rounded:.5e}");
        let (mantissa, e) = s.split_once('e').expect("exponent form");
        format!("{}e{e}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn csv_string<F>(write: F) -> anyhow::Result<String>
where
    F: FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>,
{
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    write(&mut w)?;
    Ok(String::from_utf8(w.into_inner()?)?)
}

pub fn table_csv(table: &PhaseTable, modes: &[String]) -> anyhow::Result<String> {
    csv_string(|w| {
        let mut header = vec!["input".to_string()];
        header.extend(modes.iter().cloned());
        header.push("total".into());
        w.write_record(&header)?;
        for row in table.rows() {
            let mut record = vec![row.basis.to_string()];
            record.extend(row.occupation.counts().iter().map(|c| c.to_string()));
            record.push(row.total.to_string());
            w.write_record(&record)?;
        }
        Ok(())
    })
}

#[derive(Debug, Serialize)]
pub struct TableJson {
    pub n: usize,
    pub coefficients: Vec<i64>,
    pub modes: Vec<String>,
    pub rows: Vec<TableRowJson>,
}

#[derive(Debug, Serialize)]
pub struct TableRowJson {
    pub input: String,
    pub occupation: Vec<u8>,
    pub total: i64,
}

pub fn table_json(table: &PhaseTable, modes: &[String]) -> TableJson {
    TableJson {
        n: table.n(),
        coefficients: table.coefficients().as_slice().to_vec(),
        modes: modes.to_vec(),
        rows: table
            .rows()
            .iter()
            .map(|r| TableRowJson {
                input: r.basis.to_string(),
                occupation: r.occupation.counts().to_vec(),
                total: r.total,
            })
            .collect(),
    }
}

#[derive(Debug, Serialize)]
pub struct ReportJson {
    pub n: usize,
    pub coefficients: Vec<i64>,
    pub pass: bool,
    pub w_totals: BTreeMap<String, i64>,
    pub collisions: Vec<CollisionJson>,
    pub integer_margin: u64,
}

#[derive(Debug, Serialize)]
pub struct CollisionJson {
    pub w_component: String,
    pub other: String,
    pub abs_total: u64,
}

pub fn report_json(report: &DistinguishabilityReport) -> ReportJson {
    ReportJson {
        n: report.n,
        coefficients: report.coefficients.as_slice().to_vec(),
        pass: report.pass,
        w_totals: report
            .w_totals
            .iter()
            .map(|(w, t)| (w.to_string(), *t))
            .collect(),
        collisions: report
            .collisions
            .iter()
            .map(|c| CollisionJson {
                w_component: c.w_component.to_string(),
                other: c.other.to_string(),
                abs_total: c.abs_total,
            })
            .collect(),
        integer_margin: report.integer_margin,
    }
}

#[derive(Debug, Serialize)]
pub struct TopologyJson {
    pub n: usize,
    pub pbs: Vec<PbsJson>,
    pub mode_labels: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct PbsJson {
    pub label: String,
    pub side: &'static str,
    pub inputs: [String; 2],
    pub outputs: [String; 2],
}

fn rail_name(rail: Rail, modes: &[String]) -> String {
    match rail {
        Rail::Input(i) => format!("in{}", i + 1),
        Rail::LeftLink(k) => format!("link{}", k + 1),
        Rail::Kerr(k) => modes[k].clone(),
        Rail::RightLink(k) => format!("link{}'", k + 1),
        Rail::Output(i) => format!("out{}", i + 1),
    }
}

pub fn topology_json(t: &NetworkTopology) -> TopologyJson {
    let modes = t.mode_labels();
    let pbs = t
        .left()
        .iter()
        .chain(t.right())
        .map(|p| PbsJson {
            label: p.label.clone(),
            side: match p.side {
                Side::Left => "left",
                Side::Right => "right",
            },
            inputs: p.inputs.map(|r| rail_name(r, modes)),
            outputs: p.outputs.map(|r| rail_name(r, modes)),
        })
        .collect();
    TopologyJson {
        n: t.n(),
        pbs,
        mode_labels: modes.to_vec(),
    }
}

/// One row per basis state: input, routed occupations, photon total.
pub fn occupations_csv(t: &NetworkTopology) -> anyhow::Result<String> {
    let mut rows = Vec::with_capacity(1 << t.n());
    for v in wkerr_core::BasisState::enumerate(t.n())? {
        rows.push((v, t.route_basis(&v)?));
    }
    csv_string(|w| {
        let mut header = vec!["input".to_string()];
        header.extend(t.mode_labels().iter().cloned());
        w.write_record(&header)?;
        for (v, occ) in &rows {
            let mut record = vec![v.to_string()];
            record.extend(occ.counts().iter().map(|c| c.to_string()));
            w.write_record(&record)?;
        }
        Ok(())
    })
}

fn abs_label(abs_totals: &[u64]) -> String {
    abs_totals
        .iter()
        .map(|a| a.to_string())
        .collect::<Vec<_>>()
        .join("|")
}

pub fn confusion_csv(m: &ConfusionMatrix, partition: &BranchPartition) -> anyhow::Result<String> {
    csv_string(|w| {
        let mut header = vec!["true_branch".to_string(), "abs_totals".to_string()];
        header.extend((0..m.size()).map(|b| format!("b{b}")));
        w.write_record(&header)?;
        for (b, row) in m.counts.iter().enumerate() {
            let mut record = vec![
                b.to_string(),
                abs_label(&partition.branches()[b].abs_totals),
            ];
            record.extend(row.iter().map(|c| c.to_string()));
            w.write_record(&record)?;
        }
        Ok(())
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorCurvePoint {
    pub alpha: f64,
    pub min_separation: f64,
    pub worst_error: f64,
    pub w_min_separation: f64,
    pub w_worst_error: f64,
}

pub fn error_curve_csv(points: &[ErrorCurvePoint]) -> anyhow::Result<String> {
    csv_string(|w| {
        w.write_record([
            "alpha",
            "min_separation",
            "worst_error",
            "w_min_separation",
            "w_worst_error",
        ])?;
        for p in points {
            w.write_record([
                sig6(p.alpha),
                sig6(p.min_separation),
                sig6(p.worst_error),
                sig6(p.w_min_separation),
                sig6(p.w_worst_error),
            ])?;
        }
        Ok(())
    })
}

#[derive(Debug, Serialize)]
pub struct TranscriptLine {
    pub seed: u64,
    pub trial: u64,
    pub x: f64,
    pub true_branch: usize,
    pub classified_branch: usize,
    /// `None` when the classified branch carries no amplitude.
    pub posterior_support: Option<Vec<String>>,
}

impl TranscriptLine {
    pub fn new(seed: u64, trial: u64, out: &MeasurementOutcome) -> Self {
        TranscriptLine {
            seed,
            trial,
            x: round6(out.x),
            true_branch: out.true_branch,
            classified_branch: out.branch,
            posterior_support: out
                .posterior
                .as_ref()
                .map(|p| p.support().map(|v| v.to_string()).collect()),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct BranchCount {
    pub branch: usize,
    pub abs_totals: Vec<u64>,
    pub count: u64,
    pub frequency: f64,
}

#[derive(Debug, Serialize)]
pub struct SimulationSummary {
    pub seed: u64,
    pub trials: u64,
    pub ideal: bool,
    pub branches: Vec<BranchCount>,
    pub misclassified: u64,
    pub misclassification_rate: f64,
    pub invalid_classifications: u64,
}
