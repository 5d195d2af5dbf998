//! Study response ingestion and the per-condition accuracy report.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::fmt;

/// Answer columns, in file order.
pub const ANSWER_ATTRIBUTES: [&str; 5] = ["legs", "color", "background", "shape", "posture"];

/// Ground truth: legs, color, and shape are relevant; background and posture
/// are not.
pub const GROUND_TRUTH_KEY: [bool; 5] = [true, true, false, true, false];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Condition {
    Base,
    Inn,
    Con,
}

impl Condition {
    fn parse(s: &str) -> Option<Condition> {
        match s.trim().to_ascii_uppercase().as_str() {
            "BASE" => Some(Condition::Base),
            "INN" => Some(Condition::Inn),
            "CON" => Some(Condition::Con),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Condition::Base => "BASE",
            Condition::Inn => "INN",
            Condition::Con => "CON",
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResponseRow {
    pub participant_id: String,
    pub condition: Condition,
    /// Relevance answers for {legs, color, background, shape, posture}.
    pub answers: [bool; 5],
    /// Human-judgment inclusion flag from the file.
    pub included: bool,
}

/// Ingested responses after automatic exclusions.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StudyResponses {
    pub rows: Vec<ResponseRow>,
    /// All data rows present in the file, before any exclusion.
    pub n_collected: usize,
    /// Rows dropped automatically (missing answers, duplicate participant).
    pub n_auto_excluded: usize,
}

impl StudyResponses {
    /// Rows that survive both automatic exclusions and the inclusion flag.
    pub fn retained(&self) -> impl Iterator<Item = &ResponseRow> {
        self.rows.iter().filter(|r| r.included)
    }
}

fn parse_bool(field: &str) -> Option<bool> {
    match field.trim() {
        "0" => Some(false),
        "1" => Some(true),
        _ => None,
    }
}

/// Parses the response CSV with header
/// `participant_id,condition,legs,color,background,shape,posture,included`.
///
/// Automatic exclusions (kept out of `rows`, counted in `n_auto_excluded`):
/// missing or unparsable answer cells, and repeated participant ids (first
/// occurrence wins). An unknown condition label is a hard ingestion error
/// with its row number; it indicates a malformed file rather than a
/// low-quality response.
pub fn parse_responses_csv(text: &str) -> Result<StudyResponses> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(text.as_bytes());

    let expected = [
        "participant_id",
        "condition",
        "legs",
        "color",
        "background",
        "shape",
        "posture",
        "included",
    ];
    let headers = reader
        .headers()
        .map_err(|e| Error::Ingest { row: 0, message: e.to_string() })?
        .clone();
    if headers.iter().collect::<Vec<_>>() != expected {
        return Err(Error::Ingest {
            row: 0,
            message: format!("unexpected header: {:?}", headers.iter().collect::<Vec<_>>()),
        });
    }

    let mut seen: HashSet<String> = HashSet::new();
    let mut rows = Vec::new();
    let mut n_collected = 0;
    let mut n_auto_excluded = 0;

    for (idx, record) in reader.records().enumerate() {
        let row_no = idx + 2; // 1-based, after the header line
        let record = record.map_err(|e| Error::Ingest { row: row_no, message: e.to_string() })?;
        n_collected += 1;

        let get = |i: usize| record.get(i).unwrap_or("");
        let condition = Condition::parse(get(1)).ok_or_else(|| Error::Ingest {
            row: row_no,
            message: format!("unknown condition label {:?}", get(1)),
        })?;

        let id = get(0).trim().to_string();
        if id.is_empty() || !seen.insert(id.clone()) {
            n_auto_excluded += 1;
            continue;
        }

        let mut answers = [false; 5];
        let mut complete = true;
        for (k, slot) in answers.iter_mut().enumerate() {
            match parse_bool(get(2 + k)) {
                Some(v) => *slot = v,
                None => {
                    complete = false;
                    break;
                }
            }
        }
        if !complete {
            n_auto_excluded += 1;
            continue;
        }

        let included = parse_bool(get(7)).ok_or_else(|| Error::Ingest {
            row: row_no,
            message: format!("inclusion flag must be 0 or 1, got {:?}", get(7)),
        })?;

        rows.push(ResponseRow { participant_id: id, condition, answers, included });
    }

    Ok(StudyResponses { rows, n_collected, n_auto_excluded })
}

/// One Table-3-style row.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConditionSummary {
    pub condition: String,
    pub n_collected: usize,
    pub n_filtered: usize,
    /// Mean per-participant accuracy, percent.
    pub overall: f64,
    /// Fraction of retained participants answering each attribute correctly,
    /// percent, in `ANSWER_ATTRIBUTES` order.
    pub per_attribute: [f64; 5],
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AccuracyReport {
    pub conditions: Vec<ConditionSummary>,
    pub pooled: ConditionSummary,
}

fn summarize<'a>(
    label: &str,
    collected: usize,
    rows: impl Iterator<Item = &'a ResponseRow>,
) -> ConditionSummary {
    let rows: Vec<&ResponseRow> = rows.collect();
    let n = rows.len();
    let mut per_attr = [0.0f64; 5];
    let mut total_acc = 0.0;
    for row in &rows {
        let mut correct = 0;
        for k in 0..5 {
            if row.answers[k] == GROUND_TRUTH_KEY[k] {
                correct += 1;
                per_attr[k] += 1.0;
            }
        }
        total_acc += correct as f64 / 5.0;
    }
    if n > 0 {
        for v in &mut per_attr {
            *v *= 100.0 / n as f64;
        }
        total_acc *= 100.0 / n as f64;
    }
    ConditionSummary {
        condition: label.to_string(),
        n_collected: collected,
        n_filtered: n,
        overall: total_acc,
        per_attribute: per_attr,
    }
}

/// Per-condition and pooled accuracy against the ground-truth key, computed
/// over retained participants only.
pub fn accuracy_report(responses: &StudyResponses) -> AccuracyReport {
    let mut conditions = Vec::new();
    for cond in [Condition::Base, Condition::Inn, Condition::Con] {
        let collected = responses.rows.iter().filter(|r| r.condition == cond).count();
        if collected == 0 {
            continue;
        }
        conditions.push(summarize(
            cond.label(),
            collected,
            responses.retained().filter(|r| r.condition == cond),
        ));
    }
    let pooled = summarize("ALL", responses.n_collected, responses.retained());
    AccuracyReport { conditions, pooled }
}

impl AccuracyReport {
    /// Aligned text table mirroring the published accuracy table's columns.
    pub fn to_text_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{:<10} {:>11} {:>10} {:>8} {:>6} {:>6} {:>8} {:>6} {:>8}\n",
            "Condition", "N_collected", "N_filtered", "Overall", "Legs", "Color", "Backgr.",
            "Shape", "Posture"
        ));
        for row in self.conditions.iter().chain(std::iter::once(&self.pooled)) {
            let a = &row.per_attribute;
            out.push_str(&format!(
                "{:<10} {:>11} {:>10} {:>8.1} {:>6.1} {:>6.1} {:>8.1} {:>6.1} {:>8.1}\n",
                row.condition, row.n_collected, row.n_filtered, row.overall, a[0], a[1], a[2],
                a[3], a[4]
            ));
        }
        out
    }

    /// CSV rendering with the same columns as the text table.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "condition,n_collected,n_filtered,overall,legs,color,background,shape,posture\n",
        );
        for row in self.conditions.iter().chain(std::iter::once(&self.pooled)) {
            let a = &row.per_attribute;
            out.push_str(&format!(
                "{},{},{},{:.4},{:.4},{:.4},{:.4},{:.4},{:.4}\n",
                row.condition, row.n_collected, row.n_filtered, row.overall, a[0], a[1], a[2],
                a[3], a[4]
            ));
        }
        out
    }
}
