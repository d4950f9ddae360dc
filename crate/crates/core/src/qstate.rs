//! Small exact-dimension quantum states: the four two-qubit secret bases, the
//! eight three-qubit GHZ bases, Born-rule measurement and Von Neumann entropy
//! of diagonal density operators.
//!
//! Basis states are indexed by bitstring with the first qubit as the most
//! significant bit, so `|100⟩` is index 4.

use std::fmt;

use num_complex::Complex;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Index of one of the eight GHZ basis states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct GhzIndex(u8);

impl GhzIndex {
    pub const COUNT: usize = 8;

    pub fn new(i: u8) -> Result<Self> {
        if (i as usize) < Self::COUNT {
            Ok(Self(i))
        } else {
            Err(Error::GhzIndexOutOfRange(i))
        }
    }

    pub fn all() -> impl Iterator<Item = GhzIndex> {
        (0..Self::COUNT as u8).map(GhzIndex)
    }

    pub fn value(self) -> u8 {
        self.0
    }

    pub fn as_usize(self) -> usize {
        self.0 as usize
    }

    /// Leading bit pattern `φψϕ` as a 3-bit number.
    pub fn pattern(self) -> usize {
        match self.0 >> 1 {
            0 => 0b000,
            1 => 0b001,
            2 => 0b010,
            _ => 0b100,
        }
    }

    /// `true` when the superposition carries a minus sign.
    pub fn is_negative(self) -> bool {
        self.0 & 1 == 1
    }

    /// Index with the same bit pattern and the opposite sign.
    pub fn sign_partner(self) -> GhzIndex {
        GhzIndex(self.0 ^ 1)
    }

    /// The (+, −) pair whose support contains the 3-bit string `bits`.
    pub fn pair_for_bits(bits: usize) -> (GhzIndex, GhzIndex) {
        let bits = bits & 0b111;
        // leading patterns have at most one set bit, complements at least two
        let leading = if bits.count_ones() <= 1 { bits } else { !bits & 0b111 };
        let base = match leading {
            0b000 => 0,
            0b001 => 2,
            0b010 => 4,
            0b100 => 6,
            _ => unreachable!("every 3-bit string is a pattern or its complement"),
        };
        (GhzIndex(base), GhzIndex(base + 1))
    }
}

impl TryFrom<u8> for GhzIndex {
    type Error = Error;

    fn try_from(value: u8) -> Result<Self> {
        Self::new(value)
    }
}

impl From<GhzIndex> for u8 {
    fn from(value: GhzIndex) -> Self {
        value.0
    }
}

impl fmt::Display for GhzIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GHZ{}", self.0)
    }
}

/// Index of one of the four entangled secret bases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct EntangledBasisIndex(u8);

impl EntangledBasisIndex {
    pub const COUNT: usize = 4;

    pub fn new(i: u8) -> Result<Self> {
        if (i as usize) < Self::COUNT {
            Ok(Self(i))
        } else {
            Err(Error::EntangledIndexOutOfRange(i))
        }
    }

    pub fn all() -> impl Iterator<Item = EntangledBasisIndex> {
        (0..Self::COUNT as u8).map(EntangledBasisIndex)
    }

    pub fn value(self) -> u8 {
        self.0
    }

    /// Leading two-bit pattern `φψ`.
    pub fn pattern(self) -> usize {
        if self.0 < 2 {
            0b00
        } else {
            0b01
        }
    }

    pub fn is_negative(self) -> bool {
        self.0 & 1 == 1
    }
}

impl TryFrom<u8> for EntangledBasisIndex {
    type Error = Error;

    fn try_from(value: u8) -> Result<Self> {
        Self::new(value)
    }
}

impl From<EntangledBasisIndex> for u8 {
    fn from(value: EntangledBasisIndex) -> Self {
        value.0
    }
}

impl fmt::Display for EntangledBasisIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S{}", self.0)
    }
}

/// Coefficients `(a, b)` of the secret bases, with `a² + b² = 1` and both
/// strictly positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SecretCoefficients<T> {
    a: T,
    b: T,
}

impl<T: Real> SecretCoefficients<T> {
    pub fn new(a: T, b: T) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidCoefficients("non-finite coefficient".into()));
        }
        if a <= T::zero() || b <= T::zero() {
            return Err(Error::InvalidCoefficients(format!(
                "a and b must be positive (a = {a}, b = {b})"
            )));
        }
        let norm = a * a + b * b;
        if (norm - T::one()).abs() > T::TOLERANCE {
            return Err(Error::InvalidCoefficients(format!("a² + b² = {norm}, expected 1")));
        }
        Ok(Self { a, b })
    }

    /// Builds `a = √a², b = √(1 − a²)`.
    pub fn from_a_squared(a_squared: T) -> Result<Self> {
        if !(a_squared > T::zero() && a_squared < T::one()) {
            return Err(Error::InvalidCoefficients(format!(
                "a² must lie strictly between 0 and 1, got {a_squared}"
            )));
        }
        Self::new(a_squared.sqrt(), (T::one() - a_squared).sqrt())
    }

    /// `a = b = 1/√2`.
    pub fn balanced() -> Self {
        let h = T::FRAC_1_SQRT_2();
        Self { a: h, b: h }
    }

    pub fn a(&self) -> T {
        self.a
    }

    pub fn b(&self) -> T {
        self.b
    }
}

/// Pure state on 2 or 3 qubits.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = "T: Real"))]
pub struct StateVector<T> {
    num_qubits: usize,
    #[serde(serialize_with = "serialize_amps")]
    amps: Vec<Complex<T>>,
}

fn serialize_amps<T: Real, S: serde::Serializer>(
    amps: &[Complex<T>],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(amps.len()))?;
    for z in amps {
        seq.serialize_element(&(z.re, z.im))?;
    }
    seq.end()
}

impl<T: Real> StateVector<T> {
    /// Wraps raw amplitudes; the caller is responsible for normalization.
    pub fn from_amplitudes(num_qubits: usize, amps: Vec<Complex<T>>) -> Result<Self> {
        if !(2..=3).contains(&num_qubits) {
            return Err(Error::UnsupportedQubitCount(num_qubits));
        }
        if amps.len() != 1 << num_qubits {
            return Err(Error::DimensionMismatch {
                left: num_qubits,
                right: amps.len().trailing_zeros() as usize,
            });
        }
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFiniteAmplitude);
        }
        Ok(Self { num_qubits, amps })
    }

    /// Computational basis state `|bits⟩`.
    pub fn basis(num_qubits: usize, bits: usize) -> Result<Self> {
        if !(2..=3).contains(&num_qubits) {
            return Err(Error::UnsupportedQubitCount(num_qubits));
        }
        let mut amps = vec![Complex::new(T::zero(), T::zero()); 1 << num_qubits];
        if bits >= amps.len() {
            return Err(Error::InvalidBasisState { num_qubits, bits });
        }
        amps[bits] = Complex::new(T::one(), T::zero());
        Self::from_amplitudes(num_qubits, amps)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> T {
        self.amps.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr())
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - T::one()).abs() <= T::TOLERANCE
    }

    fn require_normalized(&self) -> Result<()> {
        if self.is_normalized() {
            Ok(())
        } else {
            Err(Error::NotNormalized(self.norm_sqr().to_f64().unwrap_or(f64::NAN)))
        }
    }

    fn two_term(num_qubits: usize, lo: usize, hi: usize, x: T, y: T) -> Self {
        let mut amps = vec![Complex::new(T::zero(), T::zero()); 1 << num_qubits];
        amps[lo] = Complex::new(x, T::zero());
        amps[hi] = Complex::new(y, T::zero());
        Self { num_qubits, amps }
    }
}

/// `(|φψϕ⟩ + (−1)^i |complement⟩)/√2`.
pub fn ghz_basis<T: Real>(i: GhzIndex) -> StateVector<T> {
    let h = T::FRAC_1_SQRT_2();
    let pattern = i.pattern();
    let sign = if i.is_negative() { -h } else { h };
    StateVector::two_term(3, pattern, !pattern & 0b111, h, sign)
}

/// `a|φψ⟩ + (−1)^i b|complement⟩`.
pub fn entangled_basis<T: Real>(i: EntangledBasisIndex, coeffs: &SecretCoefficients<T>) -> StateVector<T> {
    let pattern = i.pattern();
    let b = if i.is_negative() { -coeffs.b() } else { coeffs.b() };
    StateVector::two_term(2, pattern, !pattern & 0b11, coeffs.a(), b)
}

/// `⟨u|v⟩`, conjugate-linear in `u`.
pub fn inner_product<T: Real>(u: &StateVector<T>, v: &StateVector<T>) -> Result<Complex<T>> {
    if u.num_qubits != v.num_qubits {
        return Err(Error::DimensionMismatch { left: u.num_qubits, right: v.num_qubits });
    }
    Ok(u
        .amps
        .iter()
        .zip(&v.amps)
        .fold(Complex::new(T::zero(), T::zero()), |acc, (x, y)| acc + x.conj() * y))
}

/// Born-rule probabilities of the eight GHZ outcomes, in index order.
pub fn ghz_probabilities<T: Real>(state: &StateVector<T>) -> Result<[T; 8]> {
    if state.num_qubits != 3 {
        return Err(Error::DimensionMismatch { left: 3, right: state.num_qubits });
    }
    state.require_normalized()?;
    let mut probs = [T::zero(); 8];
    for (slot, i) in probs.iter_mut().zip(GhzIndex::all()) {
        *slot = inner_product(&ghz_basis(i), state)?.norm_sqr();
    }
    let total = probs.iter().fold(T::zero(), |acc, &p| acc + p);
    if (total - T::one()).abs() > T::TOLERANCE {
        return Err(Error::NotNormalized(total.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(probs)
}

// Inverse CDF over the ordered outcome list with one uniform draw. Draws that
// land past the accumulated mass (rounding) fall back to the last outcome with
// nonzero probability.
fn sample_index<T: Real, R: Rng + ?Sized>(probs: &[T], rng: &mut R) -> usize {
    let u = T::from_f64_lossy(rng.random::<f64>());
    let mut acc = T::zero();
    let mut last_nonzero = 0;
    for (k, &p) in probs.iter().enumerate() {
        if p > T::zero() {
            last_nonzero = k;
        }
        acc = acc + p;
        if u < acc && p > T::zero() {
            return k;
        }
    }
    last_nonzero
}

/// Projective measurement in the GHZ basis; returns the outcome and the
/// post-measurement state.
pub fn measure_in_ghz_basis<T: Real, R: Rng + ?Sized>(
    state: &StateVector<T>,
    rng: &mut R,
) -> Result<(GhzIndex, StateVector<T>)> {
    let probs = ghz_probabilities(state)?;
    let outcome = GhzIndex(sample_index(&probs, rng) as u8);
    Ok((outcome, ghz_basis(outcome)))
}

/// Projective measurement in the computational basis; returns the observed
/// bitstring (as an integer) and the collapsed basis state.
pub fn measure_computational<T: Real, R: Rng + ?Sized>(
    state: &StateVector<T>,
    rng: &mut R,
) -> Result<(usize, StateVector<T>)> {
    state.require_normalized()?;
    let probs: Vec<T> = state.amps.iter().map(|z| z.norm_sqr()).collect();
    let bits = sample_index(&probs, rng);
    Ok((bits, StateVector::basis(state.num_qubits, bits)?))
}

/// `−Σ λ log₂ λ` over the given eigenvalues, with `0·log 0 = 0`. The trace is
/// not required to be 1.
pub fn von_neumann_entropy<T: Real>(diagonal: &[T]) -> Result<T> {
    let mut s = T::zero();
    for &lambda in diagonal {
        if lambda < T::zero() || lambda.is_nan() {
            return Err(Error::NegativeEigenvalue(lambda.to_f64().unwrap_or(f64::NAN)));
        }
        if lambda > T::zero() {
            s = s - lambda * lambda.log2();
        }
    }
    Ok(s)
}

/// Entropy of the diagonal after rescaling it to unit trace.
pub fn normalized_entropy<T: Real>(diagonal: &[T]) -> Result<T> {
    let trace = diagonal.iter().fold(T::zero(), |acc, &x| acc + x);
    if trace <= T::zero() {
        return von_neumann_entropy(diagonal);
    }
    let scaled: Vec<T> = diagonal.iter().map(|&x| x / trace).collect();
    von_neumann_entropy(&scaled)
}
