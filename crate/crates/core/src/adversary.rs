//! Attack models and security analysis.
//!
//! Three eavesdropper variants act on in-flight triplets:
//!
//! * `InterceptCapture` keeps the particle; the length check always fires.
//! * `MeasureResendGuess` picks a uniformly random GHZ index and resends that
//!   basis state. This reproduces the 1/8-per-channel success figure.
//! * `MeasureResendComputational` measures in the computational basis and
//!   forwards the collapsed product state. This is the physical disturbance
//!   model: the participant's GHZ outcome becomes the true index or its sign
//!   partner with probability 1/2 each.
//!
//! The analytic entropy bounds come in two routes that must agree: a closed
//! form, and `−Σ λ log₂ λ` over the density-operator diagonal.

use std::collections::BTreeSet;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{decode, judging_matrix, Line};
use crate::protocol::{
    run_round, AbortCause, AdversaryAction, ChannelEvent, ProtocolTranscript, RecoveredSecret, SecretBit,
    StreamId,
};
use crate::qstate::{
    ghz_basis, measure_computational, normalized_entropy, von_neumann_entropy, EntangledBasisIndex, GhzIndex,
    SecretCoefficients,
};
use crate::SecretCoefficients as Coefficients;
use crate::rng::{self, GENERATOR};
use crate::scalar::Real;
use crate::tables::{generate_tables, lookup, TableSet};
use crate::StateVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EveKind {
    InterceptCapture,
    MeasureResendGuess,
    MeasureResendComputational,
}

impl EveKind {
    pub fn label(self) -> &'static str {
        match self {
            EveKind::InterceptCapture => "capture",
            EveKind::MeasureResendGuess => "guess-resend",
            EveKind::MeasureResendComputational => "computational-resend",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EveModel {
    pub kind: EveKind,
    targeted_channels: BTreeSet<usize>,
}

impl EveModel {
    pub fn new(kind: EveKind, targeted: impl IntoIterator<Item = usize>) -> Result<Self> {
        let targeted_channels: BTreeSet<usize> = targeted.into_iter().collect();
        if targeted_channels.is_empty() {
            return Err(Error::InvalidAdversary("no targeted channels".into()));
        }
        Ok(Self { kind, targeted_channels })
    }

    pub fn intercept_capture(targeted: impl IntoIterator<Item = usize>) -> Result<Self> {
        Self::new(EveKind::InterceptCapture, targeted)
    }

    pub fn guess_resend(targeted: impl IntoIterator<Item = usize>) -> Result<Self> {
        Self::new(EveKind::MeasureResendGuess, targeted)
    }

    pub fn computational_resend(targeted: impl IntoIterator<Item = usize>) -> Result<Self> {
        Self::new(EveKind::MeasureResendComputational, targeted)
    }

    pub fn targets(&self, participant: usize) -> bool {
        self.targeted_channels.contains(&participant)
    }

    pub fn targeted_channels(&self) -> &BTreeSet<usize> {
        &self.targeted_channels
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DishonestModel {
    pub dishonest_party: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Adversary {
    Eve(EveModel),
    Dishonest(DishonestModel),
}

impl Adversary {
    pub fn label(&self) -> &'static str {
        match self {
            Adversary::Eve(m) => m.kind.label(),
            Adversary::Dishonest(_) => "dishonest",
        }
    }

    /// Checks that every party the adversary names is a participant in `1..=n`.
    pub fn validate(&self, n: usize) -> Result<()> {
        let in_range = |p: usize| (1..=n).contains(&p);
        match self {
            Adversary::Eve(m) => match m.targeted_channels.iter().find(|&&p| !in_range(p)) {
                Some(p) => Err(Error::InvalidAdversary(format!("channel {p} outside 1..={n}"))),
                None => Ok(()),
            },
            Adversary::Dishonest(d) if !in_range(d.dishonest_party) => Err(Error::InvalidAdversary(
                format!("dishonest party {} outside 1..={n}", d.dishonest_party),
            )),
            Adversary::Dishonest(_) => Ok(()),
        }
    }
}

/// What the eavesdropper learned from one channel.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EveRecord {
    pub participant: usize,
    pub kind: EveKind,
    /// The particle kept by a capturing adversary.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stolen: Option<StateVector>,
    /// Bitstring observed by a computational-basis measurement.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bits: Option<usize>,
    /// Eve's estimate of the GHZ index sent on this channel.
    pub inferred_index: GhzIndex,
}

/// Applies the eavesdropper to one channel event.
pub fn eve_act<R: Rng + ?Sized>(
    model: &EveModel,
    mut event: ChannelEvent,
    rng: &mut R,
) -> Result<(ChannelEvent, EveRecord)> {
    if !model.targets(event.to) {
        return Err(Error::UntargetedChannel(event.to));
    }
    let payload = event
        .payload
        .take()
        .ok_or_else(|| Error::InvalidAdversary(format!("channel {} carries no particle", event.to)))?;
    let record = match model.kind {
        EveKind::InterceptCapture => {
            event.adversary_action = AdversaryAction::Captured;
            // measuring the stolen particle in a randomly chosen basis
            let guess = random_index(rng);
            EveRecord {
                participant: event.to,
                kind: model.kind,
                stolen: Some(payload),
                bits: None,
                inferred_index: guess,
            }
        }
        EveKind::MeasureResendGuess => {
            let guess = random_index(rng);
            event.payload = Some(ghz_basis(guess));
            event.adversary_action = AdversaryAction::MeasuredAndResent;
            EveRecord { participant: event.to, kind: model.kind, stolen: None, bits: None, inferred_index: guess }
        }
        EveKind::MeasureResendComputational => {
            let (bits, collapsed) = measure_computational(&payload, rng)?;
            let (plus, minus) = GhzIndex::pair_for_bits(bits);
            // the sign is invisible in the computational basis
            let inferred_index = if rng.random::<bool>() { minus } else { plus };
            event.payload = Some(collapsed);
            event.adversary_action = AdversaryAction::MeasuredAndResent;
            EveRecord { participant: event.to, kind: model.kind, stolen: None, bits: Some(bits), inferred_index }
        }
    };
    Ok((event, record))
}

fn random_index<R: Rng + ?Sized>(rng: &mut R) -> GhzIndex {
    GhzIndex::new(rng.random_range(0..GhzIndex::COUNT as u8)).expect("in range")
}

/// What a dishonest participant knows before the dealer's declaration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PublicKnowledge {
    pub coeffs: Coefficients,
    /// Set when the dealer's pair has leaked; the label assignment stays hidden.
    pub known_pair: Option<(EntangledBasisIndex, EntangledBasisIndex)>,
}

/// Uniform guess over the candidate bases.
pub fn dishonest_guess<R: Rng + ?Sized>(knowledge: &PublicKnowledge, rng: &mut R) -> EntangledBasisIndex {
    match knowledge.known_pair {
        Some((x, y)) => {
            if rng.random::<bool>() {
                y
            } else {
                x
            }
        }
        None => EntangledBasisIndex::new(rng.random_range(0..EntangledBasisIndex::COUNT as u8))
            .expect("in range"),
    }
}

/// `[a², a², b², b²] / 2^(3N−1)`, as printed; the trace is `1/2^(3N−2)`.
pub fn eve_density_diagonal<T: Real>(coeffs: &SecretCoefficients<T>, channels: u32) -> Result<[T; 4]> {
    if channels < 2 {
        return Err(Error::ChannelCountTooSmall(channels));
    }
    let scale = T::from_f64_lossy(2f64).powi(3 * channels as i32 - 1);
    let (a2, b2) = (coeffs.a() * coeffs.a() / scale, coeffs.b() * coeffs.b() / scale);
    Ok([a2, a2, b2, b2])
}

/// `(3N−1)/2^(3N−2) − (a² log₂ a + b² log₂ b)/2^(3N−3)`.
pub fn eve_entropy<T: Real>(coeffs: &SecretCoefficients<T>, channels: u32) -> Result<T> {
    if channels < 2 {
        return Err(Error::ChannelCountTooSmall(channels));
    }
    let two = T::from_f64_lossy(2f64);
    let n3 = 3 * channels as i32;
    let lead = T::from_f64_lossy(f64::from(3 * channels - 1)) / two.powi(n3 - 2);
    Ok(lead - weighted_log(coeffs) / two.powi(n3 - 3))
}

/// Entropy of the unit-trace rescaling of [`eve_density_diagonal`].
pub fn eve_entropy_normalized<T: Real>(coeffs: &SecretCoefficients<T>, channels: u32) -> Result<T> {
    normalized_entropy(&eve_density_diagonal(coeffs, channels)?)
}

/// `[a²/2, a²/2, b²/2, b²/2]`, which has unit trace.
pub fn dishonest_density_diagonal<T: Real>(coeffs: &SecretCoefficients<T>) -> [T; 4] {
    let two = T::from_f64_lossy(2f64);
    let (a2, b2) = (coeffs.a() * coeffs.a() / two, coeffs.b() * coeffs.b() / two);
    [a2, a2, b2, b2]
}

/// `1 − 2(a² log₂ a + b² log₂ b)`.
pub fn dishonest_entropy<T: Real>(coeffs: &SecretCoefficients<T>) -> T {
    T::one() - T::from_f64_lossy(2f64) * weighted_log(coeffs)
}

pub fn dishonest_entropy_normalized<T: Real>(coeffs: &SecretCoefficients<T>) -> T {
    normalized_entropy(&dishonest_density_diagonal(coeffs)).expect("diagonal is nonnegative")
}

fn weighted_log<T: Real>(c: &SecretCoefficients<T>) -> T {
    c.a() * c.a() * c.a().log2() + c.b() * c.b() * c.b().log2()
}

/// Eigenvalue-route entropy of the eavesdropper's diagonal.
pub fn eve_entropy_eigen<T: Real>(coeffs: &SecretCoefficients<T>, channels: u32) -> Result<T> {
    von_neumann_entropy(&eve_density_diagonal(coeffs, channels)?)
}

/// Eigenvalue-route entropy of the dishonest participant's diagonal.
pub fn dishonest_entropy_eigen<T: Real>(coeffs: &SecretCoefficients<T>) -> T {
    von_neumann_entropy(&dishonest_density_diagonal(coeffs)).expect("diagonal is nonnegative")
}

/// Empirical rate with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Rate {
    pub hits: u64,
    pub total: u64,
    pub rate: f64,
    pub std_err: f64,
}

impl Rate {
    pub fn new(hits: u64, total: u64) -> Self {
        let rate = if total == 0 { 0.0 } else { hits as f64 / total as f64 };
        let std_err = if total == 0 { 0.0 } else { (rate * (1.0 - rate) / total as f64).sqrt() };
        Self { hits, total, rate, std_err }
    }

    /// `|rate − p| ≤ k·σ(p)` with `σ(p) = √(p(1−p)/total)`.
    pub fn within_sigma(&self, p: f64, k: f64) -> bool {
        let sigma = (p * (1.0 - p) / self.total as f64).sqrt();
        (self.rate - p).abs() <= k * sigma
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttackReport {
    pub model: String,
    pub scenario: Adversary,
    pub n: usize,
    pub trials: u64,
    pub seed: u64,
    pub generator: &'static str,
    pub a: f64,
    pub b: f64,
    pub table_sha256: String,
    /// Rounds in which Eve inferred every targeted index correctly.
    pub eve_correct_coeff_rate: Option<Rate>,
    /// Per-channel correct inference, over all targeted channel events.
    pub eve_channel_correct_rate: Option<Rate>,
    /// Rounds aborted by the length check or an inconclusive verdict.
    pub detection_rate: Rate,
    pub detection_length_check_rate: Rate,
    pub detection_inconclusive_rate: Rate,
    /// Rounds where the participants decoded the wrong secret undetected.
    pub undetected_error_rate: Rate,
    /// Rounds where Eve's own reconstruction (holding all tables) decodes to
    /// the secret that was sent.
    pub eve_secret_rate: Option<Rate>,
    /// Rounds where the dishonest party's blind guess equals the declared basis.
    pub dishonest_guess_rate: Option<Rate>,
    /// Same, when the dealer's pair has leaked.
    pub dishonest_pair_known_rate: Option<Rate>,
}

/// Runs `trials` independent rounds with `scenario` installed. Tables come from
/// stream [`rng::TABLE_STREAM`] of `seed`; trial `k` uses stream `k`.
pub fn monte_carlo(
    scenario: &Adversary,
    n: usize,
    trials: u64,
    seed: u64,
    coeffs: Coefficients,
) -> Result<AttackReport> {
    let ts = generate_tables(n, seed, &mut rng::stream(seed, rng::TABLE_STREAM))?;
    monte_carlo_with_tables(scenario, &ts, trials, seed, coeffs)
}

pub fn monte_carlo_with_tables(
    scenario: &Adversary,
    ts: &TableSet,
    trials: u64,
    seed: u64,
    coeffs: Coefficients,
) -> Result<AttackReport> {
    if trials == 0 {
        return Err(Error::NoTrials);
    }
    let n = ts.n();
    scenario.validate(n)?;

    let mut tally = Tally::default();
    for k in 0..trials {
        let mut rng = rng::stream(seed, k);
        let t = run_round(n, ts, coeffs, Some(scenario), StreamId { seed, stream: k }, &mut rng)?;
        tally.record(scenario, ts, &t, &mut rng);
    }

    let is_eve = matches!(scenario, Adversary::Eve(_));
    let is_dishonest = matches!(scenario, Adversary::Dishonest(_));
    Ok(AttackReport {
        model: scenario.label().to_string(),
        scenario: scenario.clone(),
        n,
        trials,
        seed,
        generator: GENERATOR,
        a: coeffs.a(),
        b: coeffs.b(),
        table_sha256: ts.digest(),
        eve_correct_coeff_rate: is_eve.then(|| Rate::new(tally.eve_all_correct, trials)),
        eve_channel_correct_rate: is_eve.then(|| Rate::new(tally.eve_channel_correct, tally.eve_channels)),
        detection_rate: Rate::new(tally.captured + tally.inconclusive, trials),
        detection_length_check_rate: Rate::new(tally.captured, trials),
        detection_inconclusive_rate: Rate::new(tally.inconclusive, trials),
        undetected_error_rate: Rate::new(tally.wrong, trials),
        eve_secret_rate: is_eve.then(|| Rate::new(tally.eve_secret, trials)),
        dishonest_guess_rate: is_dishonest.then(|| Rate::new(tally.dishonest_hits, tally.declared)),
        dishonest_pair_known_rate: is_dishonest.then(|| Rate::new(tally.dishonest_pair_hits, tally.declared)),
    })
}

#[derive(Default)]
struct Tally {
    eve_all_correct: u64,
    eve_channel_correct: u64,
    eve_channels: u64,
    captured: u64,
    inconclusive: u64,
    wrong: u64,
    eve_secret: u64,
    declared: u64,
    dishonest_hits: u64,
    dishonest_pair_hits: u64,
}

impl Tally {
    fn record<R: Rng + ?Sized>(&mut self, scenario: &Adversary, ts: &TableSet, t: &ProtocolTranscript, rng: &mut R) {
        match t.recovered_secret {
            RecoveredSecret::Abort(AbortCause::Captured) => self.captured += 1,
            RecoveredSecret::Abort(AbortCause::Inconclusive) => self.inconclusive += 1,
            RecoveredSecret::Secret(bit) if bit != t.secret_bit_sent => self.wrong += 1,
            RecoveredSecret::Secret(_) => {}
        }
        match scenario {
            Adversary::Eve(_) => {
                let mut all = true;
                for rec in &t.eve_records {
                    let ok = rec.inferred_index == t.ghz_selection[rec.participant - 1];
                    self.eve_channels += 1;
                    self.eve_channel_correct += ok as u64;
                    all &= ok;
                }
                self.eve_all_correct += all as u64;
                if eve_reconstruct(ts, t, rng) == Some(t.secret_bit_sent) {
                    self.eve_secret += 1;
                }
            }
            Adversary::Dishonest(_) => {
                if let Some(declared) = t.declared_basis {
                    self.declared += 1;
                    let blind = PublicKnowledge { coeffs: t.secret_config.coeffs, known_pair: None };
                    self.dishonest_hits += (dishonest_guess(&blind, rng) == declared) as u64;
                    let leaked = PublicKnowledge { known_pair: Some(t.secret_config.pair()), ..blind };
                    self.dishonest_pair_hits += (dishonest_guess(&leaked, rng) == declared) as u64;
                }
            }
        }
    }
}

/// Eve's decode from her inferred indices, using every participant's table.
/// Channels she did not touch are filled with uniform guesses.
pub fn eve_reconstruct<R: Rng + ?Sized>(ts: &TableSet, t: &ProtocolTranscript, rng: &mut R) -> Option<SecretBit> {
    let mut indices: Vec<Option<GhzIndex>> = vec![None; ts.n()];
    for rec in &t.eve_records {
        indices[rec.participant - 1] = Some(rec.inferred_index);
    }
    let lines: Vec<Line> = indices
        .into_iter()
        .zip(ts.tables())
        .map(|(i, tab)| lookup(tab, i.unwrap_or_else(|| random_index(rng))))
        .collect();
    SecretBit::from_verdict(decode(&judging_matrix(&lines).ok()?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::measure_in_ghz_basis;

    const TOL: f64 = 1e-12;

    #[test]
    fn entropy_values_at_balanced_coefficients() {
        let c = Coefficients::balanced();
        let d = eve_density_diagonal(&c, 2).unwrap();
        for x in d {
            assert!((x - 1.0 / 64.0).abs() < TOL);
        }
        assert!((eve_entropy(&c, 2).unwrap() - 0.375).abs() < TOL);
        assert!((eve_entropy_eigen(&c, 2).unwrap() - 0.375).abs() < TOL);
        // N = 3: four eigenvalues of 2⁻⁹, so −4·2⁻⁹·log₂ 2⁻⁹ = 36/512 = 9/128
        assert!((eve_entropy(&c, 3).unwrap() - 9.0 / 128.0).abs() < TOL);
        assert!((eve_entropy_eigen(&c, 3).unwrap() - 9.0 / 128.0).abs() < TOL);
        assert!((dishonest_entropy(&c) - 2.0).abs() < TOL);
        assert!((dishonest_entropy_eigen(&c) - 2.0).abs() < TOL);
        assert!((eve_entropy_normalized(&c, 2).unwrap() - 2.0).abs() < TOL);
        assert!((dishonest_entropy_normalized(&c) - 2.0).abs() < TOL);
    }

    #[test]
    fn diagonal_traces() {
        let c = Coefficients::from_a_squared(0.3).unwrap();
        for channels in 2..=10u32 {
            let sum: f64 = eve_density_diagonal(&c, channels).unwrap().iter().sum();
            assert!((sum - 0.5f64.powi(3 * channels as i32 - 2)).abs() < TOL);
        }
        // a²/2 + a²/2 + b²/2 + b²/2 = a² + b² = 1
        let sum: f64 = dishonest_density_diagonal(&c).iter().sum();
        assert!((sum - 1.0).abs() < TOL);
        assert!(matches!(eve_density_diagonal(&c, 1), Err(Error::ChannelCountTooSmall(1))));
        assert!(matches!(eve_entropy(&c, 0), Err(Error::ChannelCountTooSmall(0))));
    }

    #[test]
    fn dishonest_entropy_three_quarters() {
        // oracle: −Σ λ log₂ λ over [3/8, 3/8, 1/8, 1/8], computed directly
        let oracle: f64 = [0.375f64, 0.375, 0.125, 0.125].iter().map(|&l| -l * l.log2()).sum();
        let c = Coefficients::from_a_squared(0.75).unwrap();
        assert!((dishonest_entropy(&c) - oracle).abs() < TOL);
        let printed = 1.0 - 2.0 * (0.75 * (3f64.sqrt() / 2.0).log2() + 0.25 * 0.5f64.log2());
        assert!((printed - oracle).abs() < TOL);
    }

    #[test]
    fn single_precision_entropy() {
        let c = SecretCoefficients::<f32>::balanced();
        assert!((eve_entropy(&c, 2).unwrap() - 0.375).abs() < 1e-5);
        assert!((dishonest_entropy(&c) - 2.0).abs() < 1e-5);
    }

    #[test]
    fn eve_act_rejects_untargeted() {
        let model = EveModel::guess_resend([1]).unwrap();
        let event = ChannelEvent::new(0, 2, ghz_basis(GhzIndex::new(0).unwrap()));
        let mut r = rng::from_seed(0);
        assert!(matches!(eve_act(&model, event, &mut r), Err(Error::UntargetedChannel(2))));
        assert!(EveModel::guess_resend([]).is_err());
    }

    #[test]
    fn guess_resend_outcome_equals_guess() {
        let model = EveModel::guess_resend([1]).unwrap();
        let mut r = rng::from_seed(21);
        for k in 0..2000u32 {
            let sent = GhzIndex::new((k % 8) as u8).unwrap();
            let (ev, rec) = eve_act(&model, ChannelEvent::new(0, 1, ghz_basis(sent)), &mut r).unwrap();
            assert_eq!(ev.adversary_action, AdversaryAction::MeasuredAndResent);
            let (out, _) = measure_in_ghz_basis(ev.payload.as_ref().unwrap(), &mut r).unwrap();
            assert_eq!(out, rec.inferred_index);
        }
    }

    #[test]
    fn guess_resend_single_channel_rate() {
        let model = EveModel::guess_resend([1]).unwrap();
        let mut r = rng::from_seed(8);
        let trials = 100_000u64;
        let mut hits = 0;
        for k in 0..trials {
            let sent = GhzIndex::new((k % 8) as u8).unwrap();
            let (_, rec) = eve_act(&model, ChannelEvent::new(0, 1, ghz_basis(sent)), &mut r).unwrap();
            hits += (rec.inferred_index == sent) as u64;
        }
        assert!(Rate::new(hits, trials).within_sigma(0.125, 3.0));
    }

    #[test]
    fn capture_keeps_particle() {
        let model = EveModel::intercept_capture([1]).unwrap();
        let sent = ghz_basis(GhzIndex::new(3).unwrap());
        let (ev, rec) = eve_act(&model, ChannelEvent::new(0, 1, sent.clone()), &mut rng::from_seed(1)).unwrap();
        assert!(ev.payload.is_none());
        assert_eq!(ev.adversary_action, AdversaryAction::Captured);
        assert_eq!(rec.stolen, Some(sent));
    }

    #[test]
    fn dishonest_guess_rates() {
        let mut r = rng::from_seed(31);
        let coeffs = Coefficients::balanced();
        let trials = 100_000u64;
        let (mut blind, mut leaked) = (0, 0);
        for _ in 0..trials {
            let (cfg, bit) = crate::protocol::dealer_choose_secret(coeffs, &mut r);
            let declared = cfg.basis_for(bit);
            let g = dishonest_guess(&PublicKnowledge { coeffs, known_pair: None }, &mut r);
            assert!(g.value() < 4);
            blind += (g == declared) as u64;
            let g = dishonest_guess(&PublicKnowledge { coeffs, known_pair: Some(cfg.pair()) }, &mut r);
            leaked += (g == declared) as u64;
        }
        assert!(Rate::new(blind, trials).within_sigma(0.25, 3.0));
        assert!(Rate::new(leaked, trials).within_sigma(0.5, 3.0));
    }

    #[test]
    fn monte_carlo_deterministic() {
        let adv = Adversary::Eve(EveModel::computational_resend([1, 2]).unwrap());
        let a = monte_carlo(&adv, 2, 500, 3, Coefficients::balanced()).unwrap();
        let b = monte_carlo(&adv, 2, 500, 3, Coefficients::balanced()).unwrap();
        assert_eq!(a, b);
        assert!(monte_carlo(&adv, 2, 0, 3, Coefficients::balanced()).is_err());
    }

    #[test]
    fn rate_standard_error() {
        let r = Rate::new(25, 100);
        assert!((r.std_err - (0.25f64 * 0.75 / 100.0).sqrt()).abs() < TOL);
        assert_eq!(Rate::new(100, 100).std_err, 0.0);
    }
}
