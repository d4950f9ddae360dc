//! Output documents: every document carries the command, its configuration,
//! the seed and the crate version.

use std::io::Write;

use serde::Serialize;

use crate::adversary::{AttackReport, Rate};
use crate::error::Result;

#[derive(Debug, Clone, Serialize)]
pub struct Meta<C: Serialize> {
    pub command: &'static str,
    pub version: &'static str,
    pub seed: u64,
    pub generator: &'static str,
    pub config: C,
}

impl<C: Serialize> Meta<C> {
    pub fn new(command: &'static str, seed: u64, config: C) -> Self {
        Self { command, version: crate::VERSION, seed, generator: crate::rng::GENERATOR, config }
    }
}

#[derive(Debug, Serialize)]
pub struct Document<'a, C: Serialize, B: Serialize> {
    pub meta: &'a Meta<C>,
    #[serde(flatten)]
    pub body: B,
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Columns of the flat attack CSV, in order.
pub const ATTACK_CSV_COLUMNS: [&str; 22] = [
    "model",
    "n",
    "trials",
    "seed",
    "a",
    "b",
    "eve_correct_coeff_rate",
    "eve_correct_coeff_se",
    "eve_channel_correct_rate",
    "eve_channel_correct_se",
    "detection_rate",
    "detection_se",
    "detection_length_check_rate",
    "detection_length_check_se",
    "detection_inconclusive_rate",
    "detection_inconclusive_se",
    "undetected_error_rate",
    "undetected_error_se",
    "eve_secret_rate",
    "eve_secret_se",
    "dishonest_guess_rate",
    "dishonest_guess_se",
];

fn rate_cells(r: Option<&Rate>) -> [String; 2] {
    match r {
        Some(r) => [r.rate.to_string(), r.std_err.to_string()],
        None => [String::new(), String::new()],
    }
}

pub fn attack_csv_record(r: &AttackReport) -> Vec<String> {
    let mut row = vec![
        r.model.clone(),
        r.n.to_string(),
        r.trials.to_string(),
        r.seed.to_string(),
        r.a.to_string(),
        r.b.to_string(),
    ];
    for rate in [
        r.eve_correct_coeff_rate.as_ref(),
        r.eve_channel_correct_rate.as_ref(),
        Some(&r.detection_rate),
        Some(&r.detection_length_check_rate),
        Some(&r.detection_inconclusive_rate),
        Some(&r.undetected_error_rate),
        r.eve_secret_rate.as_ref(),
        r.dishonest_guess_rate.as_ref(),
    ] {
        row.extend(rate_cells(rate));
    }
    row
}

pub fn write_attack_csv<W: Write>(w: W, reports: &[AttackReport]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(ATTACK_CSV_COLUMNS)?;
    for r in reports {
        out.write_record(attack_csv_record(r))?;
    }
    out.flush()?;
    Ok(())
}

/// Columns of the entropy sweep CSV.
pub const SWEEP_CSV_COLUMNS: [&str; 9] = [
    "a2",
    "n",
    "eve_closed_form",
    "eve_eigenvalue",
    "eve_normalized",
    "dishonest_closed_form",
    "dishonest_eigenvalue",
    "dishonest_normalized",
    "max_route_gap",
];
