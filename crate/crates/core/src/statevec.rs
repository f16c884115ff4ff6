//! Complex amplitude vectors over the computational basis of 1 to 4 qubits.
//!
//! Bit ordering is big-endian: the leftmost ket symbol is the most
//! significant bit of the index, so `|110>` on three qubits is index 6.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QssError, Result};

pub type C64 = Complex64;

pub const MAX_QUBITS: usize = 4;

/// Absolute tolerance for amplitude comparisons and normalization checks.
pub const TOLERANCE: f64 = 1e-12;

/// A computational basis state written the way kets are written: `110`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct BasisLabel {
    // Field order gives the derived `Ord` lexicographic order within one width.
    num_qubits: u8,
    index: u8,
}

impl BasisLabel {
    pub fn new(index: usize, num_qubits: usize) -> Result<Self> {
        if num_qubits == 0 || num_qubits > MAX_QUBITS {
            return Err(QssError::TooManyQubits(num_qubits));
        }
        if index >= 1 << num_qubits {
            return Err(QssError::InvalidLabel(format!(
                "index {index} on {num_qubits} qubits"
            )));
        }
        Ok(Self {
            num_qubits: num_qubits as u8,
            index: index as u8,
        })
    }

    /// Parses a bit string such as `"110"`; its length fixes the qubit count.
    pub fn from_bits(bits: &str) -> Result<Self> {
        let n = bits.len();
        if n == 0 || n > MAX_QUBITS || !bits.bytes().all(|b| b == b'0' || b == b'1') {
            return Err(QssError::InvalidLabel(bits.to_string()));
        }
        let index =
            usize::from_str_radix(bits, 2).map_err(|_| QssError::InvalidLabel(bits.into()))?;
        Self::new(index, n)
    }

    pub fn index(self) -> usize {
        self.index as usize
    }

    pub fn num_qubits(self) -> usize {
        self.num_qubits as usize
    }

    /// Bit held by the qubit at `position`, counted from 0 at the left.
    pub fn bit(self, position: usize) -> u8 {
        let shift = self.num_qubits() - 1 - position;
        (self.index >> shift) & 1
    }

    pub fn bits(self) -> Vec<u8> {
        (0..self.num_qubits()).map(|p| self.bit(p)).collect()
    }

    pub fn from_bit_slice(bits: &[u8]) -> Result<Self> {
        if bits.iter().any(|&b| b > 1) {
            return Err(QssError::InvalidLabel(format!("{bits:?}")));
        }
        let index = bits.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
        Self::new(index, bits.len())
    }

    pub fn with_bit_flipped(self, position: usize) -> Self {
        let shift = self.num_qubits() - 1 - position;
        Self {
            num_qubits: self.num_qubits,
            index: self.index ^ (1 << shift),
        }
    }

    /// Every label on `num_qubits` qubits in ascending index order.
    pub fn all(num_qubits: usize) -> impl Iterator<Item = BasisLabel> {
        (0..1usize << num_qubits).map(move |i| BasisLabel {
            num_qubits: num_qubits as u8,
            index: i as u8,
        })
    }
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:0width$b}", self.index, width = self.num_qubits())
    }
}

impl FromStr for BasisLabel {
    type Err = QssError;

    fn from_str(s: &str) -> Result<Self> {
        Self::from_bits(s.trim())
    }
}

impl TryFrom<String> for BasisLabel {
    type Error = QssError;

    fn try_from(s: String) -> Result<Self> {
        Self::from_bits(&s)
    }
}

impl From<BasisLabel> for String {
    fn from(l: BasisLabel) -> String {
        l.to_string()
    }
}

/// The four single-qubit eigenstates used to build initial states.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EigenAxis {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
    #[serde(rename = "+i")]
    PlusI,
    #[serde(rename = "-i")]
    MinusI,
}

impl EigenAxis {
    pub const ALL: [EigenAxis; 4] = [Self::Plus, Self::Minus, Self::PlusI, Self::MinusI];

    pub fn symbol(self) -> &'static str {
        match self {
            Self::Plus => "+",
            Self::Minus => "-",
            Self::PlusI => "+i",
            Self::MinusI => "-i",
        }
    }

    /// Relative phase of the `|1>` component.
    fn one_phase(self) -> C64 {
        match self {
            Self::Plus => C64::new(1.0, 0.0),
            Self::Minus => C64::new(-1.0, 0.0),
            Self::PlusI => C64::new(0.0, 1.0),
            Self::MinusI => C64::new(0.0, -1.0),
        }
    }
}

impl fmt::Display for EigenAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for EigenAxis {
    type Err = QssError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "+" => Ok(Self::Plus),
            "-" => Ok(Self::Minus),
            "+i" => Ok(Self::PlusI),
            "-i" => Ok(Self::MinusI),
            other => Err(QssError::InvalidAxis(other.to_string())),
        }
    }
}

/// Normalized amplitude vector of 1 to 4 qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<C64>,
}

impl StateVector {
    /// Validates length, finiteness and normalization (within [`TOLERANCE`]).
    pub fn from_amplitudes(amps: Vec<C64>) -> Result<Self> {
        let state = Self::from_unnormalized(amps)?;
        let n = state.norm_sqr();
        if (n - 1.0).abs() > TOLERANCE {
            return Err(QssError::NotNormalized(n));
        }
        Ok(state)
    }

    /// Like [`from_amplitudes`](Self::from_amplitudes) but rescales to unit norm.
    pub fn normalized(amps: Vec<C64>) -> Result<Self> {
        let mut state = Self::from_unnormalized(amps)?;
        let n = state.norm_sqr().sqrt();
        if n == 0.0 {
            return Err(QssError::NotNormalized(0.0));
        }
        state.amps.iter_mut().for_each(|a| *a /= n);
        Ok(state)
    }

    fn from_unnormalized(amps: Vec<C64>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(QssError::BadLength(len));
        }
        let num_qubits = len.trailing_zeros() as usize;
        if num_qubits > MAX_QUBITS {
            return Err(QssError::TooManyQubits(num_qubits));
        }
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(QssError::NonFinite);
        }
        Ok(Self { num_qubits, amps })
    }

    /// Internal constructor for results of unitary maps on valid states.
    pub(crate) fn from_raw(num_qubits: usize, amps: Vec<C64>) -> Self {
        debug_assert_eq!(amps.len(), 1 << num_qubits);
        Self { num_qubits, amps }
    }

    pub fn basis(label: BasisLabel) -> Self {
        let mut amps = vec![C64::new(0.0, 0.0); 1 << label.num_qubits()];
        amps[label.index()] = C64::new(1.0, 0.0);
        Self::from_raw(label.num_qubits(), amps)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitude(&self, label: BasisLabel) -> Result<C64> {
        self.check_label(label)?;
        Ok(self.amps[label.index()])
    }

    pub(crate) fn check_label(&self, label: BasisLabel) -> Result<()> {
        if label.num_qubits() != self.num_qubits {
            return Err(QssError::DimensionMismatch {
                left: self.num_qubits,
                right: label.num_qubits(),
            });
        }
        Ok(())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Multiplies every amplitude by a unit-modulus scalar.
    pub fn with_global_phase(&self, phase: C64) -> Result<Self> {
        if (phase.norm() - 1.0).abs() > TOLERANCE {
            return Err(QssError::NotNormalized(phase.norm_sqr()));
        }
        Ok(Self::from_raw(
            self.num_qubits,
            self.amps.iter().map(|a| a * phase).collect(),
        ))
    }

    /// Largest componentwise deviation `max_i |a_i - b_i|`.
    pub fn max_deviation(&self, other: &StateVector) -> Result<f64> {
        self.check_same_size(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn approx_eq(&self, other: &StateVector, tol: f64) -> bool {
        self.max_deviation(other).is_ok_and(|d| d <= tol)
    }

    /// Unit phase `c` minimizing `|c * other - self|`, i.e. the phase of `<other|self>`.
    pub fn relative_phase(&self, other: &StateVector) -> Result<C64> {
        let overlap = inner(other, self)?;
        if overlap.norm() == 0.0 {
            return Ok(C64::new(1.0, 0.0));
        }
        Ok(overlap / overlap.norm())
    }

    fn check_same_size(&self, other: &StateVector) -> Result<()> {
        if self.num_qubits != other.num_qubits {
            return Err(QssError::DimensionMismatch {
                left: self.num_qubits,
                right: other.num_qubits,
            });
        }
        Ok(())
    }
}

/// Single-qubit eigenstate `(|0> + phase |1>) / sqrt(2)`.
pub fn eigen_vector(axis: EigenAxis) -> StateVector {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    StateVector::from_raw(1, vec![C64::new(h, 0.0), axis.one_phase() * h])
}

/// Kronecker product; `a` supplies the more significant bits.
pub fn tensor(a: &StateVector, b: &StateVector) -> Result<StateVector> {
    let n = a.num_qubits + b.num_qubits;
    if n > MAX_QUBITS {
        return Err(QssError::TooManyQubits(n));
    }
    let amps = a
        .amps
        .iter()
        .flat_map(|x| b.amps.iter().map(move |y| x * y))
        .collect();
    Ok(StateVector::from_raw(n, amps))
}

/// `<a|b>`, conjugating `a`.
pub fn inner(a: &StateVector, b: &StateVector) -> Result<C64> {
    a.check_same_size(b)?;
    Ok(a.amps.iter().zip(&b.amps).map(|(x, y)| x.conj() * y).sum())
}

/// Outcome probabilities `|a_i|^2` in index order.
pub fn distribution(s: &StateVector) -> Vec<f64> {
    s.amps.iter().map(|a| a.norm_sqr()).collect()
}
