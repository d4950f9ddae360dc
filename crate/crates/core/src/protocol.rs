//! The (n,n) sharing round: dealer choices, GHZ transmission over the
//! simulated channel, participant measurement and lookup, group decode, and
//! the dealer's public declaration. The two-party scheme is the `n = 2` case.
//!
//! Party 0 is the dealer; participants are `1..=n`, and participant `p` owns
//! table `p - 1` of the [`TableSet`].

use std::collections::BTreeMap;

use rand::seq::IndexedRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::adversary::{self, Adversary, EveRecord};
use crate::error::{Error, Result};
use crate::geometry::{decode, judging_matrix, DecodeVerdict, JudgingMatrix, Line};
use crate::qstate::{ghz_basis, measure_in_ghz_basis, EntangledBasisIndex, GhzIndex};
use crate::tables::{lookup, verify_tables, FamilyLabel, TableSet};
use crate::{SecretCoefficients, StateVector};

pub const DEALER: usize = 0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SecretBit {
    M0,
    M1,
}

impl SecretBit {
    pub fn family(self) -> FamilyLabel {
        match self {
            SecretBit::M0 => FamilyLabel::ParallelFamily,
            SecretBit::M1 => FamilyLabel::IntersectFamily,
        }
    }

    pub fn from_verdict(v: DecodeVerdict) -> Option<Self> {
        match v {
            DecodeVerdict::M0 => Some(SecretBit::M0),
            DecodeVerdict::M1 => Some(SecretBit::M1),
            DecodeVerdict::Inconclusive => None,
        }
    }
}

/// The dealer's private choice: two of the four entangled bases, one labelled
/// `M0` and the other `M1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SecretConfig {
    pub coeffs: SecretCoefficients,
    pub m0: EntangledBasisIndex,
    pub m1: EntangledBasisIndex,
}

impl SecretConfig {
    pub fn new(coeffs: SecretCoefficients, m0: EntangledBasisIndex, m1: EntangledBasisIndex) -> Result<Self> {
        if m0 == m1 {
            return Err(Error::InvalidCoefficients("M0 and M1 must use distinct bases".into()));
        }
        Ok(Self { coeffs, m0, m1 })
    }

    /// The unordered pair, smaller index first.
    pub fn pair(&self) -> (EntangledBasisIndex, EntangledBasisIndex) {
        (self.m0.min(self.m1), self.m0.max(self.m1))
    }

    pub fn basis_for(&self, bit: SecretBit) -> EntangledBasisIndex {
        match bit {
            SecretBit::M0 => self.m0,
            SecretBit::M1 => self.m1,
        }
    }
}

/// The six unordered pairs of entangled bases, in lexicographic order.
pub fn basis_pairs() -> Vec<(EntangledBasisIndex, EntangledBasisIndex)> {
    let all: Vec<_> = EntangledBasisIndex::all().collect();
    let mut out = Vec::with_capacity(6);
    for (k, &x) in all.iter().enumerate() {
        for &y in &all[k + 1..] {
            out.push((x, y));
        }
    }
    out
}

/// Uniform pair, uniform label assignment, uniform bit to share.
pub fn dealer_choose_secret<R: Rng + ?Sized>(
    coeffs: SecretCoefficients,
    rng: &mut R,
) -> (SecretConfig, SecretBit) {
    let pairs = basis_pairs();
    let (x, y) = pairs[rng.random_range(0..pairs.len())];
    let (m0, m1) = if rng.random::<bool>() { (x, y) } else { (y, x) };
    let bit = if rng.random::<bool>() { SecretBit::M1 } else { SecretBit::M0 };
    (SecretConfig { coeffs, m0, m1 }, bit)
}

/// One uniformly chosen index per participant from the family matching
/// `secret`.
pub fn dealer_select_ghz<R: Rng + ?Sized>(secret: SecretBit, ts: &TableSet, rng: &mut R) -> Vec<GhzIndex> {
    ts.tables()
        .iter()
        .map(|t| {
            *t.family(secret.family())
                .choose(rng)
                .expect("every table has four rows per family")
        })
        .collect()
}

pub fn length_check(expected: usize, received: usize) -> bool {
    expected == received
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AdversaryAction {
    None,
    Captured,
    MeasuredAndResent,
}

/// One triplet sent from the dealer to a participant. A captured event has no
/// payload.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChannelEvent {
    pub from: usize,
    pub to: usize,
    pub payload: Option<StateVector>,
    pub adversary_action: AdversaryAction,
}

impl ChannelEvent {
    pub fn new(from: usize, to: usize, payload: StateVector) -> Self {
        Self { from, to, payload: Some(payload), adversary_action: AdversaryAction::None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AbortCause {
    /// Fewer particles arrived than declared.
    Captured,
    /// The judging matrix rank was neither 0 nor n.
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RecoveredSecret {
    Secret(SecretBit),
    Abort(AbortCause),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRef {
    pub generation_seed: u64,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProtocolTranscript {
    pub n: usize,
    pub rng_seed: u64,
    pub rng_stream: u64,
    pub generator: &'static str,
    pub table_set: TableRef,
    pub secret_config: SecretConfig,
    pub secret_bit_sent: SecretBit,
    pub ghz_selection: Vec<GhzIndex>,
    pub channel_events: Vec<ChannelEvent>,
    pub expected_particles: usize,
    pub received_particles: usize,
    /// Absent for participants whose particle never arrived.
    pub measurement_outcomes: Vec<Option<GhzIndex>>,
    pub lines: Vec<Option<Line>>,
    pub matrix: Option<JudgingMatrix>,
    pub verdict: Option<DecodeVerdict>,
    pub declared_basis: Option<EntangledBasisIndex>,
    pub recovered_secret: RecoveredSecret,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub eve_records: Vec<EveRecord>,
}

impl ProtocolTranscript {
    pub fn abort_cause(&self) -> Option<AbortCause> {
        match self.recovered_secret {
            RecoveredSecret::Abort(c) => Some(c),
            RecoveredSecret::Secret(_) => None,
        }
    }

    pub fn is_correct(&self) -> bool {
        self.recovered_secret == RecoveredSecret::Secret(self.secret_bit_sent)
    }
}

/// Where a round's randomness came from, recorded in the transcript.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct StreamId {
    pub seed: u64,
    pub stream: u64,
}

/// Runs one complete round. The adversary, if any, acts on every channel it
/// targets between transmission and measurement.
pub fn run_round<R: Rng + ?Sized>(
    n: usize,
    ts: &TableSet,
    coeffs: SecretCoefficients,
    adversary: Option<&Adversary>,
    stream: StreamId,
    rng: &mut R,
) -> Result<ProtocolTranscript> {
    if ts.n() != n || ts.tables().len() != n {
        return Err(Error::TableMismatch(format!(
            "round for {n} participants, table set has {}",
            ts.tables().len()
        )));
    }
    if let Some(adv) = adversary {
        adv.validate(n)?;
    }

    let (secret_config, secret_bit_sent) = dealer_choose_secret(coeffs, rng);
    let ghz_selection = dealer_select_ghz(secret_bit_sent, ts, rng);

    let mut channel_events = Vec::with_capacity(n);
    let mut eve_records = Vec::new();
    for (k, &index) in ghz_selection.iter().enumerate() {
        let participant = k + 1;
        let event = ChannelEvent::new(DEALER, participant, ghz_basis(index));
        let event = match adversary {
            Some(Adversary::Eve(model)) if model.targets(participant) => {
                let (event, record) = adversary::eve_act(model, event, rng)?;
                eve_records.push(record);
                event
            }
            _ => event,
        };
        channel_events.push(event);
    }

    let expected_particles = n;
    let received_particles = channel_events.iter().filter(|e| e.payload.is_some()).count();

    let mut measurement_outcomes = Vec::with_capacity(n);
    for event in &channel_events {
        let outcome = match &event.payload {
            Some(state) => Some(measure_in_ghz_basis(state, rng)?.0),
            None => None,
        };
        measurement_outcomes.push(outcome);
    }
    let lines: Vec<Option<Line>> = measurement_outcomes
        .iter()
        .zip(ts.tables())
        .map(|(o, t)| o.map(|i| lookup(t, i)))
        .collect();

    let mut transcript = ProtocolTranscript {
        n,
        rng_seed: stream.seed,
        rng_stream: stream.stream,
        generator: crate::rng::GENERATOR,
        table_set: TableRef { generation_seed: ts.generation_seed(), sha256: ts.digest() },
        secret_config,
        secret_bit_sent,
        ghz_selection,
        channel_events,
        expected_particles,
        received_particles,
        measurement_outcomes,
        lines,
        matrix: None,
        verdict: None,
        declared_basis: None,
        recovered_secret: RecoveredSecret::Abort(AbortCause::Captured),
        eve_records,
    };

    if !length_check(expected_particles, received_particles) {
        return Ok(transcript);
    }

    let lines: Vec<Line> = transcript.lines.iter().map(|l| l.expect("all particles arrived")).collect();
    let matrix = judging_matrix(&lines)?;
    let verdict = decode(&matrix);
    transcript.matrix = Some(matrix);
    transcript.verdict = Some(verdict);
    transcript.recovered_secret = match SecretBit::from_verdict(verdict) {
        Some(bit) => {
            transcript.declared_basis = Some(secret_config.basis_for(secret_bit_sent));
            RecoveredSecret::Secret(bit)
        }
        None => RecoveredSecret::Abort(AbortCause::Inconclusive),
    };
    Ok(transcript)
}

/// Checks a table set against `n` and its own invariants before a run.
pub fn check_tables(ts: &TableSet, n: usize) -> Result<()> {
    if ts.n() != n {
        return Err(Error::TableMismatch(format!("requested n = {n}, table set has {}", ts.n())));
    }
    if let Some(v) = verify_tables(ts).first() {
        return Err(Error::TableInvariant(v.to_string()));
    }
    Ok(())
}

/// Counts of round outcomes.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct RunSummary {
    pub rounds: usize,
    pub correct: usize,
    pub wrong: usize,
    pub abort: BTreeMap<AbortCause, usize>,
}

impl RunSummary {
    pub fn record(&mut self, t: &ProtocolTranscript) {
        self.rounds += 1;
        match t.recovered_secret {
            RecoveredSecret::Secret(bit) if bit == t.secret_bit_sent => self.correct += 1,
            RecoveredSecret::Secret(_) => self.wrong += 1,
            RecoveredSecret::Abort(cause) => *self.abort.entry(cause).or_default() += 1,
        }
    }

    pub fn aborted(&self) -> usize {
        self.abort.values().sum()
    }
}

/// Runs `rounds` independent honest or attacked rounds; round `k` draws from
/// stream `k` of `seed`.
pub fn run_rounds(
    ts: &TableSet,
    coeffs: SecretCoefficients,
    adversary: Option<&Adversary>,
    seed: u64,
    rounds: usize,
) -> Result<(Vec<ProtocolTranscript>, RunSummary)> {
    let mut summary = RunSummary::default();
    let mut transcripts = Vec::with_capacity(rounds);
    for k in 0..rounds as u64 {
        let mut rng = crate::rng::stream(seed, k);
        let t = run_round(ts.n(), ts, coeffs, adversary, StreamId { seed, stream: k }, &mut rng)?;
        summary.record(&t);
        transcripts.push(t);
    }
    Ok((transcripts, summary))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversary::EveModel;
    use crate::geometry::JudgingMatrix;
    use crate::rng;
    use crate::tables::generate_tables;

    fn tables(n: usize, seed: u64) -> TableSet {
        generate_tables(n, seed, &mut rng::from_seed(seed)).unwrap()
    }

    fn sigma3(p: f64, trials: usize) -> f64 {
        3.0 * (p * (1.0 - p) / trials as f64).sqrt()
    }

    #[test]
    fn six_pairs() {
        let pairs = basis_pairs();
        assert_eq!(pairs.len(), 6);
        assert!(pairs.iter().all(|(x, y)| x < y));
    }

    #[test]
    fn dealer_choice_statistics() {
        let mut r = rng::from_seed(2024);
        let trials = 100_000;
        let mut pair_counts = BTreeMap::new();
        let mut basis_counts = [0usize; 4];
        let mut m0 = 0usize;
        for _ in 0..trials {
            let (cfg, bit) = dealer_choose_secret(SecretCoefficients::balanced(), &mut r);
            *pair_counts.entry(cfg.pair()).or_insert(0usize) += 1;
            let (x, y) = cfg.pair();
            basis_counts[x.value() as usize] += 1;
            basis_counts[y.value() as usize] += 1;
            m0 += (bit == SecretBit::M0) as usize;
        }
        assert_eq!(pair_counts.len(), 6);
        for &c in pair_counts.values() {
            assert!((c as f64 / trials as f64 - 1.0 / 6.0).abs() < sigma3(1.0 / 6.0, trials));
        }
        for &c in &basis_counts {
            assert!((c as f64 / trials as f64 - 0.5).abs() < sigma3(0.5, trials));
        }
        assert!((m0 as f64 / trials as f64 - 0.5).abs() < sigma3(0.5, trials));
    }

    #[test]
    fn selection_matches_family() {
        let ts = tables(4, 1);
        let mut r = rng::from_seed(5);
        for k in 0..10_000 {
            let bit = if k % 2 == 0 { SecretBit::M0 } else { SecretBit::M1 };
            let sel = dealer_select_ghz(bit, &ts, &mut r);
            for (t, &i) in ts.tables().iter().zip(&sel) {
                assert_eq!(t.row(i).family, bit.family());
            }
        }
    }

    #[test]
    fn selection_decodes() {
        let ts = tables(5, 3);
        let mut r = rng::from_seed(8);
        for _ in 0..200 {
            let mut lines = |bit| -> Vec<Line> {
                dealer_select_ghz(bit, &ts, &mut r)
                    .iter()
                    .zip(ts.tables())
                    .map(|(&i, t)| lookup(t, i))
                    .collect()
            };
            let m0 = judging_matrix(&lines(SecretBit::M0)).unwrap();
            assert_eq!(m0, JudgingMatrix::zeros(5).unwrap());
            let m1 = judging_matrix(&lines(SecretBit::M1)).unwrap();
            assert_eq!(m1, JudgingMatrix::all_intersecting(5).unwrap());
            assert_eq!(m1.rank(), 5);
        }
    }

    #[test]
    fn length_check_examples() {
        assert!(length_check(3, 3));
        assert!(!length_check(3, 2));
    }

    #[test]
    fn honest_rounds_are_correct() {
        for n in 2..=6 {
            let ts = tables(n, n as u64);
            let (transcripts, summary) =
                run_rounds(&ts, SecretCoefficients::balanced(), None, 99, 1000).unwrap();
            assert_eq!(summary.correct, 1000, "n = {n}");
            for t in &transcripts {
                assert!(t.declared_basis.is_some());
                assert_eq!(t.declared_basis, Some(t.secret_config.basis_for(t.secret_bit_sent)));
            }
        }
    }

    #[test]
    fn transcript_consistency() {
        let ts = tables(3, 17);
        let (transcripts, _) =
            run_rounds(&ts, SecretCoefficients::balanced(), None, 4, 50).unwrap();
        for t in transcripts {
            let lines: Vec<Line> = t
                .measurement_outcomes
                .iter()
                .zip(ts.tables())
                .map(|(o, tab)| lookup(tab, o.unwrap()))
                .collect();
            assert_eq!(t.lines, lines.iter().copied().map(Some).collect::<Vec<_>>());
            let m = judging_matrix(&lines).unwrap();
            assert_eq!(t.matrix.as_ref(), Some(&m));
            assert_eq!(t.verdict, Some(decode(&m)));
        }
    }

    #[test]
    fn capture_aborts_on_length_check() {
        let ts = tables(3, 2);
        let adv = Adversary::Eve(EveModel::intercept_capture([2]).unwrap());
        let (transcripts, summary) =
            run_rounds(&ts, SecretCoefficients::balanced(), Some(&adv), 1, 200).unwrap();
        assert_eq!(summary.abort.get(&AbortCause::Captured), Some(&200));
        for t in transcripts {
            assert!(!length_check(t.expected_particles, t.received_particles));
            assert_eq!(t.declared_basis, None);
            assert_eq!(t.matrix, None);
            assert_eq!(t.channel_events[1].adversary_action, AdversaryAction::Captured);
            assert!(t.channel_events[1].payload.is_none());
        }
    }

    #[test]
    fn rounds_are_reproducible() {
        let ts = tables(3, 6);
        let a = run_rounds(&ts, SecretCoefficients::balanced(), None, 12, 30).unwrap().0;
        let b = run_rounds(&ts, SecretCoefficients::balanced(), None, 12, 30).unwrap().0;
        assert_eq!(a, b);
    }

    #[test]
    fn adversary_channel_out_of_range() {
        let ts = tables(2, 0);
        let adv = Adversary::Eve(EveModel::intercept_capture([5]).unwrap());
        let mut r = rng::from_seed(0);
        let err = run_round(2, &ts, SecretCoefficients::balanced(), Some(&adv), StreamId::default(), &mut r);
        assert!(matches!(err, Err(Error::InvalidAdversary(_))));
        let err = run_round(3, &ts, SecretCoefficients::balanced(), None, StreamId::default(), &mut r);
        assert!(matches!(err, Err(Error::TableMismatch(_))));
    }
}
