//! State vectors, explicit unitaries and Weyl operators.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::algebra::{check_odd_prime, reduce};
use crate::error::{Error, Result};
use crate::frame::CliffordGate;
use crate::rng::Randomness;

/// Largest `d^n` the dense routines accept.
pub const ORACLE_LIMIT: usize = 2401;

pub const TOLERANCE: f64 = 1e-9;

pub(crate) fn omega_powers(d: u32) -> Vec<Complex64> {
    (0..d)
        .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / d as f64))
        .collect()
}

pub(crate) fn dense_size(n: usize, d: u32) -> Result<usize> {
    if n == 0 {
        return Err(Error::NoQudits);
    }
    if d != 2 {
        check_odd_prime(d)?;
    }
    match (d as usize).checked_pow(n as u32) {
        Some(s) if s <= ORACLE_LIMIT => Ok(s),
        _ => Err(Error::TooLargeForOracle {
            n,
            d,
            limit: ORACLE_LIMIT,
        }),
    }
}

/// Row-major square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for k in 0..dim {
            m.data[k * dim + k] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.dim + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[r * self.dim + c] = v;
    }

    pub fn mul(&self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..n {
                    out.data[r * n + c] += a * rhs.data[k * n + c];
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> DenseMatrix {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for c in 0..n {
                out.data[c * n + r] = self.data[r * n + c].conj();
            }
        }
        out
    }

    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_unitary(&self) -> bool {
        self.adjoint().mul(self).max_abs_diff(&Self::identity(self.dim)) < TOLERANCE
    }

    /// The unit-modulus `c` with `self = c · other`, if there is one.
    pub fn phase_relative_to(&self, other: &DenseMatrix) -> Option<Complex64> {
        let (k, pivot) = other
            .data
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))?;
        if pivot.norm() < TOLERANCE {
            return None;
        }
        let c = self.data[k] / pivot;
        if (c.norm() - 1.0).abs() > TOLERANCE {
            return None;
        }
        let scaled = DenseMatrix {
            dim: other.dim,
            data: other.data.iter().map(|v| v * c).collect(),
        };
        (self.max_abs_diff(&scaled) < TOLERANCE).then_some(c)
    }
}

/// `e^{iπ·phase/d} ⊗_j X_j^{a_j} Z_j^{b_j}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeylOperator {
    pub a: Vec<u32>,
    pub b: Vec<u32>,
    /// Exponent of `e^{iπ/d}`, kept mod `2d`.
    pub phase: u32,
}

impl WeylOperator {
    pub fn new(a: Vec<u32>, b: Vec<u32>, phase: u32) -> Self {
        assert_eq!(a.len(), b.len());
        Self { a, b, phase }
    }

    pub fn identity(n: usize) -> Self {
        Self::new(vec![0; n], vec![0; n], 0)
    }

    pub fn apply(&self, state: &mut DenseState) {
        let d = state.d;
        for j in 0..state.n {
            if self.b[j] % d != 0 {
                state.apply_z_power(j, self.b[j]);
            }
            if self.a[j] % d != 0 {
                state.apply_x_power(j, self.a[j]);
            }
        }
        let phase = self.phase % (2 * d);
        if phase != 0 {
            let c = Complex64::from_polar(1.0, PI * phase as f64 / d as f64);
            state.scale(c);
        }
    }

    pub fn matrix(&self, d: u32) -> DenseMatrix {
        matrix_of(self.a.len(), d, |s| self.apply(s))
    }
}

/// `⊗_j X_j^{a_j} Z_j^{b_j}` as a matrix.
pub fn weyl_operator(a: &[u32], b: &[u32], d: u32) -> DenseMatrix {
    WeylOperator::new(a.to_vec(), b.to_vec(), 0).matrix(d)
}

fn matrix_of(n: usize, d: u32, f: impl Fn(&mut DenseState)) -> DenseMatrix {
    let dim = (d as usize).pow(n as u32);
    let mut m = DenseMatrix::zeros(dim);
    for col in 0..dim {
        let mut s = DenseState::basis_index(n, d, col);
        f(&mut s);
        for (row, v) in s.amps.iter().enumerate() {
            m.data[row * dim + col] = *v;
        }
    }
    m
}

/// The unitary the oracle uses for `gate`.
pub fn gate_unitary(gate: &CliffordGate, n: usize, d: u32) -> Result<DenseMatrix> {
    dense_size(n, d)?;
    gate.validate(n)?;
    Ok(matrix_of(n, d, |s| s.apply_gate(gate).expect("validated gate")))
}

/// Amplitudes over position labels `(q_1, …, q_n)`; `q_1` is the most
/// significant digit.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseState {
    n: usize,
    d: u32,
    amps: Vec<Complex64>,
}

impl DenseState {
    /// `|0…0⟩`.
    pub fn new(n: usize, d: u32) -> Result<Self> {
        let size = dense_size(n, d)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); size];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(Self { n, d, amps })
    }

    pub fn basis(n: usize, d: u32, digits: &[u32]) -> Result<Self> {
        if digits.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: digits.len(),
            });
        }
        let mut s = Self::new(n, d)?;
        s.amps[0] = Complex64::new(0.0, 0.0);
        let idx = s.index_of(digits);
        s.amps[idx] = Complex64::new(1.0, 0.0);
        Ok(s)
    }

    fn basis_index(n: usize, d: u32, idx: usize) -> Self {
        let size = (d as usize).pow(n as u32);
        let mut amps = vec![Complex64::new(0.0, 0.0); size];
        amps[idx] = Complex64::new(1.0, 0.0);
        Self { n, d, amps }
    }

    pub fn from_amplitudes(n: usize, d: u32, amps: Vec<Complex64>) -> Result<Self> {
        let size = dense_size(n, d)?;
        if amps.len() != size {
            return Err(Error::DimensionMismatch {
                expected: size,
                found: amps.len(),
            });
        }
        Ok(Self { n, d, amps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn stride(&self, i: usize) -> usize {
        (self.d as usize).pow((self.n - 1 - i) as u32)
    }

    pub fn index_of(&self, digits: &[u32]) -> usize {
        digits
            .iter()
            .fold(0usize, |acc, &q| acc * self.d as usize + (q % self.d) as usize)
    }

    pub fn digits_of(&self, mut idx: usize) -> Vec<u32> {
        let d = self.d as usize;
        let mut out = vec![0u32; self.n];
        for slot in out.iter_mut().rev() {
            *slot = (idx % d) as u32;
            idx /= d;
        }
        out
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn inner(&self, other: &DenseState) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn max_abs_diff(&self, other: &DenseState) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub(crate) fn scale(&mut self, c: Complex64) {
        for a in &mut self.amps {
            *a *= c;
        }
    }

    fn digit(&self, idx: usize, i: usize) -> u32 {
        ((idx / self.stride(i)) % self.d as usize) as u32
    }

    /// Applies the `d × d` row-major matrix `u` to qudit `i`.
    fn apply_local(&mut self, i: usize, u: &[Complex64]) {
        let d = self.d as usize;
        let stride = self.stride(i);
        let mut buf = vec![Complex64::new(0.0, 0.0); d];
        for base in 0..self.amps.len() {
            if (base / stride) % d != 0 {
                continue;
            }
            for (k, slot) in buf.iter_mut().enumerate() {
                *slot = self.amps[base + k * stride];
            }
            for r in 0..d {
                let mut acc = Complex64::new(0.0, 0.0);
                for (c, v) in buf.iter().enumerate() {
                    acc += u[r * d + c] * v;
                }
                self.amps[base + r * stride] = acc;
            }
        }
    }

    fn apply_diagonal(&mut self, i: usize, diag: &[Complex64]) {
        for idx in 0..self.amps.len() {
            let q = self.digit(idx, i) as usize;
            self.amps[idx] *= diag[q];
        }
    }

    /// `Z^k`: `|q⟩ ↦ ω^{kq}|q⟩`.
    pub(crate) fn apply_z_power(&mut self, i: usize, k: u32) {
        let d = self.d;
        let w = omega_powers(d);
        let diag: Vec<Complex64> = (0..d).map(|q| w[((k as u64 * q as u64) % d as u64) as usize]).collect();
        self.apply_diagonal(i, &diag);
    }

    /// `X^k`: `|q⟩ ↦ |q + k⟩`.
    pub(crate) fn apply_x_power(&mut self, i: usize, k: u32) {
        let d = self.d as usize;
        let k = k as usize % d;
        if k == 0 {
            return;
        }
        let stride = self.stride(i);
        let old = self.amps.clone();
        for (idx, v) in old.into_iter().enumerate() {
            let q = (idx / stride) % d;
            let moved = idx - q * stride + ((q + k) % d) * stride;
            self.amps[moved] = v;
        }
    }

    fn check_qudit(&self, i: usize) -> Result<()> {
        if i < self.n {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index: i, n: self.n })
        }
    }

    /// `F = d^{-1/2} Σ ω^{kl} |k⟩⟨l|`.
    pub fn apply_fourier(&mut self, i: usize) -> Result<()> {
        self.check_qudit(i)?;
        let d = self.d as usize;
        let w = omega_powers(self.d);
        let norm = 1.0 / (d as f64).sqrt();
        let u: Vec<Complex64> = (0..d * d).map(|rc| w[((rc / d) * (rc % d)) % d] * norm).collect();
        self.apply_local(i, &u);
        Ok(())
    }

    /// `diag(ω^{q²})` for odd `d`; the qubit phase gate `diag(1, i)` for `d = 2`.
    pub fn apply_phase(&mut self, i: usize) -> Result<()> {
        self.check_qudit(i)?;
        let diag: Vec<Complex64> = if self.d == 2 {
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)]
        } else {
            let w = omega_powers(self.d);
            (0..self.d as usize).map(|q| w[(q * q) % self.d as usize]).collect()
        };
        self.apply_diagonal(i, &diag);
        Ok(())
    }

    /// `|q_i, q_j⟩ ↦ |q_i, q_j + q_i⟩`.
    pub fn apply_cnot(&mut self, control: usize, target: usize) -> Result<()> {
        self.check_qudit(control)?;
        self.check_qudit(target)?;
        if control == target {
            return Err(Error::ControlEqualsTarget(control));
        }
        let d = self.d as usize;
        let st = self.stride(target);
        let old = self.amps.clone();
        for (idx, v) in old.into_iter().enumerate() {
            let a = self.digit(idx, control) as usize;
            let b = (idx / st) % d;
            let moved = idx - b * st + ((b + a) % d) * st;
            self.amps[moved] = v;
        }
        Ok(())
    }

    pub fn apply_gate(&mut self, gate: &CliffordGate) -> Result<()> {
        match gate {
            CliffordGate::Hadamard(i) => self.apply_fourier(*i),
            CliffordGate::Phase(i) => self.apply_phase(*i),
            CliffordGate::Cnot { control, target } => self.apply_cnot(*control, *target),
            CliffordGate::WeylTranslation { xpow, zpow } => {
                gate.validate(self.n)?;
                WeylOperator::new(xpow.clone(), zpow.clone(), 0).apply(self);
                Ok(())
            }
        }
    }

    /// Marginal distribution of qudit `i` in the position basis.
    pub fn born_distribution(&self, i: usize) -> Result<Vec<f64>> {
        self.check_qudit(i)?;
        let total = self.norm_sqr();
        if total < TOLERANCE {
            return Err(Error::ZeroNorm);
        }
        let mut probs = vec![0.0; self.d as usize];
        for (idx, a) in self.amps.iter().enumerate() {
            probs[self.digit(idx, i) as usize] += a.norm_sqr();
        }
        for p in &mut probs {
            *p /= total;
        }
        Ok(probs)
    }

    /// Samples (or forces) an outcome for qudit `i`, then projects and
    /// renormalizes.
    pub fn born_measure(&mut self, i: usize, randomness: Randomness<'_>) -> Result<u32> {
        let probs = self.born_distribution(i)?;
        let outcome = match randomness {
            Randomness::Forced(v) => {
                if v >= self.d {
                    return Err(Error::OutcomeOutOfRange { outcome: v, d: self.d });
                }
                if probs[v as usize] < TOLERANCE {
                    let actual = probs
                        .iter()
                        .enumerate()
                        .max_by(|a, b| a.1.total_cmp(b.1))
                        .map(|(k, _)| k as u32)
                        .unwrap_or(0);
                    return Err(Error::ImpossibleOutcome {
                        qudit: i,
                        forced: v,
                        actual,
                    });
                }
                v
            }
            Randomness::Seeded(rng) => {
                let u = rng.uniform_f64();
                let mut acc = 0.0;
                let mut pick = None;
                for (k, p) in probs.iter().enumerate() {
                    acc += p;
                    if u < acc {
                        pick = Some(k as u32);
                        break;
                    }
                }
                // rounding can leave u just above the final partial sum
                pick.unwrap_or_else(|| {
                    probs.iter().rposition(|&p| p > 0.0).unwrap_or(0) as u32
                })
            }
        };
        let keep = probs[outcome as usize];
        let scale = 1.0 / (keep * self.norm_sqr()).sqrt();
        for idx in 0..self.amps.len() {
            if self.digit(idx, i) == outcome {
                self.amps[idx] *= scale;
            } else {
                self.amps[idx] = Complex64::new(0.0, 0.0);
            }
        }
        Ok(outcome)
    }

    /// True when `other = c · self` for some unit `c`.
    pub fn equal_up_to_phase(&self, other: &DenseState) -> bool {
        let overlap = self.inner(other).norm();
        (overlap - 1.0).abs() < TOLERANCE
            && (self.norm_sqr() - 1.0).abs() < TOLERANCE
            && (other.norm_sqr() - 1.0).abs() < TOLERANCE
    }
}

/// Reduces a signed power into `0..d`.
pub(crate) fn power(value: i64, d: u32) -> u32 {
    reduce(value, d)
}
