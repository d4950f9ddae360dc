//! Command-line front end.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Ratio;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::adversary::{
    dishonest_entropy, dishonest_entropy_eigen, dishonest_entropy_normalized, eve_entropy, eve_entropy_eigen,
    eve_entropy_normalized, monte_carlo_with_tables, Adversary, AttackReport, DishonestModel, EveKind, EveModel,
};
use crate::error::{Error, Result};
use crate::protocol::{check_tables, run_rounds, AbortCause, RunSummary};
use crate::report::{self, Document, Meta, SWEEP_CSV_COLUMNS};
use crate::rng;
use crate::tables::{self, generate_tables_with, GenerationConfig, TableSet};
use crate::SecretCoefficients;

const AFTER_HELP: &str = "\
CSV columns
  attack: model,n,trials,seed,a,b, then (rate, standard error) pairs for
          eve_correct_coeff, eve_channel_correct, detection,
          detection_length_check, detection_inconclusive, undetected_error,
          eve_secret, dishonest_guess (empty when not applicable)
  sweep:  a2,n,eve_closed_form,eve_eigenvalue,eve_normalized,
          dishonest_closed_form,dishonest_eigenvalue,dishonest_normalized,
          max_route_gap
  run:    rounds,correct,wrong,abort_captured,abort_inconclusive

Tables are read from --tables when given, otherwise generated from --seed.";

#[derive(Debug, Parser)]
#[command(name = "geoqss", version, about = "Line-geometry (n,n) quantum secret sharing simulator", after_help = AFTER_HELP)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a coefficient table file.
    GenTables(CommonArgs),
    /// Run honest (or attacked) protocol rounds and report transcripts.
    Run(RunArgs),
    /// Monte Carlo attack simulation.
    Attack(AttackArgs),
    /// Evaluate the entropy bounds for one (a², N).
    Entropy(CommonArgs),
    /// Evaluate the entropy bounds over a grid of a².
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CommonArgs {
    /// Number of participants (N).
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// a² as a fraction (`1/2`) or decimal (`0.5`); b² = 1 − a².
    #[arg(long = "a2", default_value = "1/2")]
    pub a_squared: ASquared,
    /// Coefficient table file; generated from the seed when absent.
    #[arg(long = "tables")]
    pub table_path: Option<PathBuf>,
    #[arg(long = "output-path")]
    pub output_path: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Largest coefficient magnitude for generated tables.
    #[arg(long, default_value_t = tables::DEFAULT_COEFF_BOUND)]
    pub coeff_bound: i64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RunArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub adversary: AdversaryArgs,
    /// Omit per-round transcripts from structured output.
    #[arg(long)]
    pub no_transcripts: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct AttackArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub adversary: AdversaryArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct AdversaryArgs {
    #[arg(long = "model", value_enum)]
    pub eve_model: Option<ModelArg>,
    /// Targeted participants (comma separated); all when absent.
    #[arg(long, value_delimiter = ',')]
    pub targets: Vec<usize>,
    #[arg(long, default_value_t = 1)]
    pub dishonest_party: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SweepArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonArgs,
    /// Grid resolution: a² runs over k/steps for k = 1..steps−1.
    #[arg(long, default_value_t = 100)]
    pub steps: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Text,
    Structured,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelArg {
    Capture,
    GuessResend,
    ComputationalResend,
    Dishonest,
}

/// a² held exactly as a rational in (0, 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ASquared(pub Ratio<i64>);

impl ASquared {
    pub fn coefficients(&self) -> Result<SecretCoefficients> {
        let x = self.0.to_f64().ok_or_else(|| Error::InvalidCoefficients("a² not representable".into()))?;
        SecretCoefficients::from_a_squared(x)
    }

    pub fn to_f64(self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl FromStr for ASquared {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let s = s.trim();
        let ratio = if let Some((num, den)) = s.split_once('/') {
            let num: i64 = num.trim().parse().map_err(|e| format!("bad numerator: {e}"))?;
            let den: i64 = den.trim().parse().map_err(|e| format!("bad denominator: {e}"))?;
            if den == 0 {
                return Err("zero denominator".into());
            }
            Ratio::new(num, den)
        } else {
            if s.starts_with('-') {
                return Err(format!("a² must be positive, got {s}"));
            }
            let (int, frac) = s.split_once('.').unwrap_or((s, ""));
            if frac.len() > 15 || !frac.chars().all(|c| c.is_ascii_digit()) {
                return Err(format!("bad decimal '{s}'"));
            }
            let int: i64 = if int.is_empty() { 0 } else { int.parse().map_err(|e| format!("bad decimal: {e}"))? };
            let scale = 10i64.pow(frac.len() as u32);
            let frac: i64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|e| format!("bad decimal: {e}"))? };
            Ratio::new(int * scale + frac, scale)
        };
        if ratio <= Ratio::from_integer(0) || ratio >= Ratio::from_integer(1) {
            return Err(format!("a² must lie strictly between 0 and 1, got {ratio}"));
        }
        Ok(Self(ratio))
    }
}

impl Serialize for ASquared {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl std::fmt::Display for ASquared {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Parses `args` (including the program name) and runs the command, writing
/// to `out` unless an output path is given. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 { out.write_all(rendered.as_bytes()) } else { err.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    match execute(&cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

pub fn execute(command: &Command, out: &mut dyn Write) -> Result<()> {
    let (output_path, text) = match command {
        Command::GenTables(args) => (None, gen_tables(args)?),
        Command::Run(args) => (args.common.output_path.clone(), run_cmd(args)?),
        Command::Attack(args) => (args.common.output_path.clone(), attack(args)?),
        Command::Entropy(args) => (args.output_path.clone(), entropy(args)?),
        Command::Sweep(args) => (args.common.output_path.clone(), sweep(args)?),
    };
    match output_path {
        Some(path) => fs::write(path, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn obtain_tables(args: &CommonArgs) -> Result<TableSet> {
    let ts = match &args.table_path {
        Some(path) => tables::load_tables(path)?,
        None => {
            let config = GenerationConfig { coeff_bound: args.coeff_bound, ..GenerationConfig::default() };
            generate_tables_with(args.n, args.seed, &config, &mut rng::stream(args.seed, rng::TABLE_STREAM))?
        }
    };
    check_tables(&ts, args.n)?;
    Ok(ts)
}

fn gen_tables(args: &CommonArgs) -> Result<String> {
    let config = GenerationConfig { coeff_bound: args.coeff_bound, ..GenerationConfig::default() };
    let ts = generate_tables_with(args.n, args.seed, &config, &mut rng::stream(args.seed, rng::TABLE_STREAM))?;
    let doc = tables::to_document_string(&ts)?;
    let Some(path) = &args.output_path else {
        return Ok(doc);
    };
    fs::write(path, &doc)?;

    #[derive(Serialize)]
    struct Receipt<'a> {
        path: &'a PathBuf,
        sha256: String,
        n: usize,
    }
    let meta = Meta::new("gen-tables", args.seed, args);
    let receipt = Receipt { path, sha256: ts.digest(), n: ts.n() };
    match args.format {
        Format::Structured => report::to_json(&Document { meta: &meta, body: receipt }),
        _ => Ok(format!(
            "wrote {} tables for n = {} (seed {}) to {}\nsha256 {}\n",
            ts.n(),
            ts.n(),
            args.seed,
            path.display(),
            receipt.sha256
        )),
    }
}

fn build_adversary(args: &AdversaryArgs, n: usize) -> Result<Option<Adversary>> {
    let Some(model) = args.eve_model else {
        return Ok(None);
    };
    let targets: Vec<usize> = if args.targets.is_empty() { (1..=n).collect() } else { args.targets.clone() };
    let adv = match model {
        ModelArg::Capture => Adversary::Eve(EveModel::new(EveKind::InterceptCapture, targets)?),
        ModelArg::GuessResend => Adversary::Eve(EveModel::new(EveKind::MeasureResendGuess, targets)?),
        ModelArg::ComputationalResend => Adversary::Eve(EveModel::new(EveKind::MeasureResendComputational, targets)?),
        ModelArg::Dishonest => Adversary::Dishonest(DishonestModel { dishonest_party: args.dishonest_party }),
    };
    adv.validate(n)?;
    Ok(Some(adv))
}

fn run_cmd(args: &RunArgs) -> Result<String> {
    let common = &args.common;
    let ts = obtain_tables(common)?;
    let coeffs = common.a_squared.coefficients()?;
    let adversary = build_adversary(&args.adversary, common.n)?;
    let rounds = usize::try_from(common.trials).map_err(|_| Error::NoTrials)?;
    if rounds == 0 {
        return Err(Error::NoTrials);
    }
    let (transcripts, summary) = run_rounds(&ts, coeffs, adversary.as_ref(), common.seed, rounds)?;
    let meta = Meta::new("run", common.seed, args);

    match common.format {
        Format::Structured => {
            #[derive(Serialize)]
            struct Body<'a> {
                table_sha256: String,
                summary: &'a RunSummary,
                #[serde(skip_serializing_if = "Option::is_none")]
                transcripts: Option<&'a [crate::protocol::ProtocolTranscript]>,
            }
            let body = Body {
                table_sha256: ts.digest(),
                summary: &summary,
                transcripts: (!args.no_transcripts).then_some(&transcripts[..]),
            };
            report::to_json(&Document { meta: &meta, body })
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["rounds", "correct", "wrong", "abort_captured", "abort_inconclusive"])?;
            w.write_record([
                summary.rounds.to_string(),
                summary.correct.to_string(),
                summary.wrong.to_string(),
                abort_count(&summary, AbortCause::Captured).to_string(),
                abort_count(&summary, AbortCause::Inconclusive).to_string(),
            ])?;
            csv_string(w)
        }
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "run: n = {}, rounds = {}, seed = {}, a² = {}", common.n, rounds, common.seed, common.a_squared);
            if let Some(adv) = &adversary {
                let _ = writeln!(s, "adversary: {}", adv.label());
            }
            let _ = writeln!(s, "correct: {}/{}", summary.correct, summary.rounds);
            let _ = writeln!(s, "wrong:   {}", summary.wrong);
            let _ = writeln!(s, "abort:   {} (captured {}, inconclusive {})",
                summary.aborted(),
                abort_count(&summary, AbortCause::Captured),
                abort_count(&summary, AbortCause::Inconclusive));
            Ok(s)
        }
    }
}

fn abort_count(summary: &RunSummary, cause: AbortCause) -> usize {
    summary.abort.get(&cause).copied().unwrap_or(0)
}

fn csv_string(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn attack(args: &AttackArgs) -> Result<String> {
    let common = &args.common;
    let adversary = build_adversary(&args.adversary, common.n)?
        .ok_or_else(|| Error::InvalidAdversary("attack needs --model".into()))?;
    let ts = obtain_tables(common)?;
    let coeffs = common.a_squared.coefficients()?;
    let report = monte_carlo_with_tables(&adversary, &ts, common.trials, common.seed, coeffs)?;
    let meta = Meta::new("attack", common.seed, args);

    match common.format {
        Format::Structured => {
            #[derive(Serialize)]
            struct Body<'a> {
                report: &'a AttackReport,
            }
            report::to_json(&Document { meta: &meta, body: Body { report: &report } })
        }
        Format::Csv => {
            let mut buf = Vec::new();
            report::write_attack_csv(&mut buf, std::slice::from_ref(&report))?;
            Ok(String::from_utf8(buf).expect("csv output is utf-8"))
        }
        Format::Text => Ok(attack_text(&report)),
    }
}

fn attack_text(r: &AttackReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "attack: model = {}, n = {}, trials = {}, seed = {}", r.model, r.n, r.trials, r.seed);
    let mut line = |name: &str, rate: Option<&crate::adversary::Rate>| {
        if let Some(rate) = rate {
            let _ = writeln!(s, "{name:<28} {:.6} ± {:.6} ({}/{})", rate.rate, rate.std_err, rate.hits, rate.total);
        }
    };
    line("eve all-correct rate", r.eve_correct_coeff_rate.as_ref());
    line("eve per-channel rate", r.eve_channel_correct_rate.as_ref());
    line("detection rate", Some(&r.detection_rate));
    line("  length check", Some(&r.detection_length_check_rate));
    line("  inconclusive verdict", Some(&r.detection_inconclusive_rate));
    line("undetected error rate", Some(&r.undetected_error_rate));
    line("eve secret rate", r.eve_secret_rate.as_ref());
    line("dishonest guess rate", r.dishonest_guess_rate.as_ref());
    line("dishonest (pair known)", r.dishonest_pair_known_rate.as_ref());
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyRow {
    pub a2: f64,
    pub n: u32,
    pub eve_closed_form: f64,
    pub eve_eigenvalue: f64,
    pub eve_normalized: f64,
    pub dishonest_closed_form: f64,
    pub dishonest_eigenvalue: f64,
    pub dishonest_normalized: f64,
}

impl EntropyRow {
    pub fn compute(a2: f64, n: u32) -> Result<Self> {
        let c = SecretCoefficients::from_a_squared(a2)?;
        Ok(Self {
            a2,
            n,
            eve_closed_form: eve_entropy(&c, n)?,
            eve_eigenvalue: eve_entropy_eigen(&c, n)?,
            eve_normalized: eve_entropy_normalized(&c, n)?,
            dishonest_closed_form: dishonest_entropy(&c),
            dishonest_eigenvalue: dishonest_entropy_eigen(&c),
            dishonest_normalized: dishonest_entropy_normalized(&c),
        })
    }

    pub fn max_route_gap(&self) -> f64 {
        (self.eve_closed_form - self.eve_eigenvalue)
            .abs()
            .max((self.dishonest_closed_form - self.dishonest_eigenvalue).abs())
    }

    fn csv_record(&self) -> Vec<String> {
        vec![
            self.a2.to_string(),
            self.n.to_string(),
            self.eve_closed_form.to_string(),
            self.eve_eigenvalue.to_string(),
            self.eve_normalized.to_string(),
            self.dishonest_closed_form.to_string(),
            self.dishonest_eigenvalue.to_string(),
            self.dishonest_normalized.to_string(),
            self.max_route_gap().to_string(),
        ]
    }
}

fn channel_count(n: usize) -> Result<u32> {
    u32::try_from(n).map_err(|_| Error::ChannelCountTooSmall(0))
}

fn entropy(args: &CommonArgs) -> Result<String> {
    let row = EntropyRow::compute(args.a_squared.to_f64(), channel_count(args.n)?)?;
    let meta = Meta::new("entropy", args.seed, args);
    match args.format {
        Format::Structured => report::to_json(&Document { meta: &meta, body: row }),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(SWEEP_CSV_COLUMNS)?;
            w.write_record(row.csv_record())?;
            csv_string(w)
        }
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "a² = {}, N = {}", args.a_squared, args.n);
            let _ = writeln!(s, "eavesdropper entropy (closed form):    {} bits", row.eve_closed_form);
            let _ = writeln!(s, "eavesdropper entropy (eigenvalues):    {}", row.eve_eigenvalue);
            let _ = writeln!(s, "eavesdropper entropy (unit trace):     {}", row.eve_normalized);
            let _ = writeln!(s, "dishonest entropy (closed form):       {} bits", row.dishonest_closed_form);
            let _ = writeln!(s, "dishonest entropy (eigenvalues):       {}", row.dishonest_eigenvalue);
            let _ = writeln!(s, "dishonest entropy (unit trace):        {}", row.dishonest_normalized);
            let _ = writeln!(s, "max |closed form - eigenvalues|:       {:e}", row.max_route_gap());
            Ok(s)
        }
    }
}

fn sweep(args: &SweepArgs) -> Result<String> {
    let common = &args.common;
    if args.steps < 2 {
        return Err(Error::InvalidCoefficients("--steps must be at least 2".into()));
    }
    let n = channel_count(common.n)?;
    let rows = (1..args.steps)
        .map(|k| EntropyRow::compute(f64::from(k) / f64::from(args.steps), n))
        .collect::<Result<Vec<_>>>()?;
    let meta = Meta::new("sweep", common.seed, args);
    match common.format {
        Format::Structured => {
            #[derive(Serialize)]
            struct Body<'a> {
                rows: &'a [EntropyRow],
            }
            report::to_json(&Document { meta: &meta, body: Body { rows: &rows } })
        }
        // CSV is the sweep's natural output; text falls back to it.
        Format::Csv | Format::Text => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(SWEEP_CSV_COLUMNS)?;
            for row in &rows {
                w.write_record(row.csv_record())?;
            }
            csv_string(w)
        }
    }
}
