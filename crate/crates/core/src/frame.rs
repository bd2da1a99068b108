//! Stabilizer states of odd-prime qudits as the affine system `Φ_t x = r_t`.
//!
//! The Wigner function of the state is `d^{-n}` on the solutions of the
//! bottom `n` rows and zero elsewhere. The top `n` rows are carried along as
//! the conjugate ("destabilizer") system; they make the deterministic
//! measurement outcome readable in O(n²).
//!
//! Gates update Φ by right-multiplying with the inverse stability matrix,
//! which for every generator touches at most two columns. `r` never moves
//! under the generators; only Weyl translations and measurements write it.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::symplectic::generators;
use crate::algebra::zmod::{add_mod, inv_mod, mul_mod, neg_mod, sub_mod};
use crate::algebra::{check_odd_prime, is_symplectic, ZMatrix, ZMod, ZVector};
use crate::error::{Error, Result};
use crate::rng::Randomness;

/// Largest support the enumerators will materialize.
pub const SUPPORT_LIMIT: usize = 1 << 20;

/// A Clifford generator or a Weyl translation. Qudit indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum CliffordGate {
    Hadamard(usize),
    Phase(usize),
    Cnot { control: usize, target: usize },
    /// `X^{xpow} Z^{zpow}` (all X factors to the left of all Z factors).
    WeylTranslation { xpow: Vec<u32>, zpow: Vec<u32> },
}

impl CliffordGate {
    /// Stability matrix `M` (none for translations, whose linear part is I).
    pub fn stability_matrix(&self, n: usize, d: u32) -> Option<ZMatrix> {
        match *self {
            CliffordGate::Hadamard(i) => Some(generators::fourier(n, i, d)),
            CliffordGate::Phase(i) => Some(generators::phase(n, i, d)),
            CliffordGate::Cnot { control, target } => {
                Some(generators::cnot(n, control, target, d))
            }
            CliffordGate::WeylTranslation { .. } => None,
        }
    }

    /// `M⁻¹`, the factor Φ is multiplied by on the right.
    pub fn inverse_stability_matrix(&self, n: usize, d: u32) -> Option<ZMatrix> {
        match *self {
            CliffordGate::Hadamard(i) => Some(generators::fourier_inverse(n, i, d)),
            CliffordGate::Phase(i) => Some(generators::phase_inverse(n, i, d)),
            CliffordGate::Cnot { control, target } => {
                Some(generators::cnot_inverse(n, control, target, d))
            }
            CliffordGate::WeylTranslation { .. } => None,
        }
    }

    pub(crate) fn validate(&self, n: usize) -> Result<()> {
        let check = |i: usize| {
            if i < n {
                Ok(())
            } else {
                Err(Error::IndexOutOfRange { index: i, n })
            }
        };
        match self {
            CliffordGate::Hadamard(i) | CliffordGate::Phase(i) => check(*i),
            CliffordGate::Cnot { control, target } => {
                check(*control)?;
                check(*target)?;
                if control == target {
                    return Err(Error::ControlEqualsTarget(*control));
                }
                Ok(())
            }
            CliffordGate::WeylTranslation { xpow, zpow } => {
                for v in [xpow, zpow] {
                    if v.len() != n {
                        return Err(Error::DimensionMismatch {
                            expected: n,
                            found: v.len(),
                        });
                    }
                }
                Ok(())
            }
        }
    }
}

/// Result of one Z-basis measurement. Indices are 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasurementRecord {
    qudit: usize,
    outcome: u32,
    deterministic: bool,
    pivot_row: Option<usize>,
}

impl MeasurementRecord {
    pub fn deterministic(qudit: usize, outcome: u32) -> Self {
        Self {
            qudit,
            outcome,
            deterministic: true,
            pivot_row: None,
        }
    }

    pub fn random(qudit: usize, outcome: u32, pivot_row: usize) -> Self {
        Self {
            qudit,
            outcome,
            deterministic: false,
            pivot_row: Some(pivot_row),
        }
    }

    /// A random outcome from an engine that has no pivot rows.
    pub fn sampled(qudit: usize, outcome: u32) -> Self {
        Self {
            qudit,
            outcome,
            deterministic: false,
            pivot_row: None,
        }
    }

    pub fn qudit(&self) -> usize {
        self.qudit
    }

    pub fn outcome(&self) -> u32 {
        self.outcome
    }

    pub fn is_deterministic(&self) -> bool {
        self.deterministic
    }

    pub fn pivot_row(&self) -> Option<usize> {
        self.pivot_row
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasurementKind {
    Deterministic,
    Random { pivot_row: usize },
}

/// Column rules for the generators, acting on any `2n × 2n` matrix.
///
/// These equal `phi · M⁻¹` for the respective generator. Each returns the
/// number of entries it wrote.
pub mod rules {
    use super::*;

    /// Column `i` takes column `n+i`; column `n+i` takes `−(old column i)`.
    pub fn hadamard(phi: &mut ZMatrix, n: usize, i: usize) -> usize {
        let d = phi.modulus();
        let (ci, cni) = phi.column_pair_mut(i, n + i);
        for (a, b) in ci.iter_mut().zip(cni.iter_mut()) {
            let old = *a;
            *a = *b;
            *b = neg_mod(old, d);
        }
        2 * ci.len()
    }

    /// `Φ_{j,n+i} ← Φ_{j,n+i} ⊖ 2 Φ_{j,i}`.
    pub fn phase(phi: &mut ZMatrix, n: usize, i: usize) -> usize {
        let d = phi.modulus();
        let two = 2 % d;
        let (ci, cni) = phi.column_pair_mut(i, n + i);
        for (a, b) in ci.iter().zip(cni.iter_mut()) {
            *b = sub_mod(*b, mul_mod(two, *a, d), d);
        }
        ci.len()
    }

    /// `Φ_{k,j} ← Φ_{k,j} ⊕ Φ_{k,i}` and `Φ_{k,n+i} ← Φ_{k,n+i} ⊖ Φ_{k,n+j}`.
    pub fn cnot(phi: &mut ZMatrix, n: usize, control: usize, target: usize) -> usize {
        let d = phi.modulus();
        let (ci, cj) = phi.column_pair_mut(control, target);
        for (a, b) in ci.iter().zip(cj.iter_mut()) {
            *b = add_mod(*b, *a, d);
        }
        let (qi, qj) = phi.column_pair_mut(n + control, n + target);
        for (a, b) in qi.iter_mut().zip(qj.iter()) {
            *a = sub_mod(*a, *b, d);
        }
        2 * qi.len()
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct StabilizerFrame {
    n: usize,
    d: u32,
    phi: ZMatrix,
    r: ZVector,
    writes: u64,
}

impl StabilizerFrame {
    /// `|0…0⟩` with `Φ₀ = I_{2n}` and `r₀ = 0`.
    pub fn new(n: usize, d: u32) -> Result<Self> {
        check_odd_prime(d)?;
        if n == 0 {
            return Err(Error::NoQudits);
        }
        Ok(Self {
            n,
            d,
            phi: ZMatrix::identity(2 * n, d),
            r: ZVector::zeros(2 * n, d),
            writes: 0,
        })
    }

    /// Wraps an existing `(Φ, r)` pair. Φ must be square of even size and
    /// symplectic.
    pub fn from_parts(phi: ZMatrix, r: ZVector) -> Result<Self> {
        let d = phi.modulus();
        check_odd_prime(d)?;
        if !phi.is_square() || phi.rows() % 2 != 0 || phi.rows() == 0 {
            return Err(Error::DimensionMismatch {
                expected: phi.rows() + phi.rows() % 2,
                found: phi.cols(),
            });
        }
        if r.len() != phi.rows() || r.modulus() != d {
            return Err(Error::DimensionMismatch {
                expected: phi.rows(),
                found: r.len(),
            });
        }
        if !is_symplectic(&phi) {
            return Err(Error::NotSymplectic);
        }
        Ok(Self {
            n: phi.rows() / 2,
            d,
            phi,
            r,
            writes: 0,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn phi(&self) -> &ZMatrix {
        &self.phi
    }

    pub fn r(&self) -> &ZVector {
        &self.r
    }

    /// Matrix entries written since construction (gates and measurements).
    pub fn entry_writes(&self) -> u64 {
        self.writes
    }

    /// Dits held by Φ and r: `2n(2n + 1)`.
    pub fn storage_dits(&self) -> usize {
        self.phi.rows() * self.phi.cols() + self.r.len()
    }

    fn check_qudit(&self, i: usize) -> Result<()> {
        if i < self.n {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index: i, n: self.n })
        }
    }

    pub fn apply_hadamard(&mut self, i: usize) -> Result<()> {
        self.check_qudit(i)?;
        self.writes += rules::hadamard(&mut self.phi, self.n, i) as u64;
        Ok(())
    }

    pub fn apply_phase(&mut self, i: usize) -> Result<()> {
        self.check_qudit(i)?;
        self.writes += rules::phase(&mut self.phi, self.n, i) as u64;
        Ok(())
    }

    pub fn apply_cnot(&mut self, control: usize, target: usize) -> Result<()> {
        self.check_qudit(control)?;
        self.check_qudit(target)?;
        if control == target {
            return Err(Error::ControlEqualsTarget(control));
        }
        self.writes += rules::cnot(&mut self.phi, self.n, control, target) as u64;
        Ok(())
    }

    /// Translates the Wigner function by `(zpow, xpow)` in `(p, q)`:
    /// `r ← r + Φ·(zpow, xpow)`. Φ is untouched.
    pub fn apply_weyl_translation(&mut self, xpow: &[u32], zpow: &[u32]) -> Result<()> {
        for v in [xpow, zpow] {
            if v.len() != self.n {
                return Err(Error::DimensionMismatch {
                    expected: self.n,
                    found: v.len(),
                });
            }
        }
        let d = self.d;
        let r = self.r.as_mut_slice();
        for (k, &power) in zpow.iter().chain(xpow).enumerate() {
            let s = power % d;
            if s == 0 {
                continue;
            }
            // zpow moves p (columns 0..n), xpow moves q (columns n..2n)
            for (rv, &phi) in r.iter_mut().zip(self.phi.column(k)) {
                *rv = add_mod(*rv, mul_mod(phi, s, d), d);
            }
        }
        self.writes += r.len() as u64;
        Ok(())
    }

    pub fn apply(&mut self, gate: &CliffordGate) -> Result<()> {
        match gate {
            CliffordGate::Hadamard(i) => self.apply_hadamard(*i),
            CliffordGate::Phase(i) => self.apply_phase(*i),
            CliffordGate::Cnot { control, target } => self.apply_cnot(*control, *target),
            CliffordGate::WeylTranslation { xpow, zpow } => {
                self.apply_weyl_translation(xpow, zpow)
            }
        }
    }

    /// Random iff some bottom row carries `p_i`; the pivot is the first such row.
    pub fn classify_measurement(&self, i: usize) -> Result<MeasurementKind> {
        self.check_qudit(i)?;
        let col = self.phi.column(i);
        Ok(match col[self.n..].iter().position(|&v| v != 0) {
            Some(k) => MeasurementKind::Random {
                pivot_row: self.n + k,
            },
            None => MeasurementKind::Deterministic,
        })
    }

    /// Projects qudit `i` onto position `outcome` using bottom row `pivot`.
    ///
    /// The pivot equation is normalized to a unit `p_i` coefficient and
    /// eliminated from every other row; the top row paired with the pivot
    /// inherits it, and the pivot becomes `q_i = outcome`.
    pub fn collapse_random(&mut self, i: usize, pivot: usize, outcome: u32) -> Result<()> {
        self.check_qudit(i)?;
        let n = self.n;
        let d = self.d;
        if !(n..2 * n).contains(&pivot) {
            return Err(Error::BadPivot { row: pivot });
        }
        if outcome >= d {
            return Err(Error::OutcomeOutOfRange { outcome, d });
        }
        let lead = self.phi.get(pivot, i);
        if lead == 0 {
            return Err(Error::BadPivot { row: pivot });
        }
        let size = 2 * n;

        let inv = inv_mod(lead, d).expect("prime modulus");
        if inv != 1 {
            for col in 0..size {
                let v = self.phi.get(pivot, col);
                self.phi.set(pivot, col, mul_mod(v, inv, d));
            }
            let rv = self.r.as_slice()[pivot];
            self.r.as_mut_slice()[pivot] = mul_mod(rv, inv, d);
            self.writes += size as u64 + 1;
        }

        let factors: Vec<(usize, u32)> = self
            .phi
            .column(i)
            .iter()
            .enumerate()
            .filter(|&(k, &f)| k != pivot && f != 0)
            .map(|(k, &f)| (k, f))
            .collect();
        for col in 0..size {
            let column = self.phi.column_mut(col);
            let pv = column[pivot];
            if pv == 0 {
                continue;
            }
            for &(k, f) in &factors {
                column[k] = sub_mod(column[k], mul_mod(f, pv, d), d);
            }
            self.writes += factors.len() as u64;
        }
        let r_pivot = self.r.as_slice()[pivot];
        let r = self.r.as_mut_slice();
        for &(k, f) in &factors {
            r[k] = sub_mod(r[k], mul_mod(f, r_pivot, d), d);
        }

        let top = pivot - n;
        for col in 0..size {
            let column = self.phi.column_mut(col);
            column[top] = column[pivot];
            column[pivot] = 0;
        }
        self.phi.set(pivot, n + i, 1);
        let r = self.r.as_mut_slice();
        r[top] = r_pivot;
        r[pivot] = outcome;
        self.writes += 2 * size as u64 + 2;
        Ok(())
    }

    /// `c_j = Φ_{j,i}` for the top rows: the weights that combine bottom rows
    /// into `q_i`.
    pub fn deterministic_coefficients(&self, i: usize) -> Result<ZVector> {
        self.check_qudit(i)?;
        Ok(ZVector::from_raw(
            self.phi.column(i)[..self.n].to_vec(),
            self.d,
        ))
    }

    /// Outcome `Σ_j c_j r_{n+j}` of a deterministic measurement, after
    /// checking that `Σ_j c_j · row_{n+j}` is exactly `e_{n+i}`.
    pub fn deterministic_outcome(&self, i: usize) -> Result<ZMod> {
        if let MeasurementKind::Random { pivot_row } = self.classify_measurement(i)? {
            return Err(Error::InconsistentFrame(format!(
                "qudit {i} is not deterministic (row {pivot_row} carries p_{i})"
            )));
        }
        let n = self.n;
        let d = self.d;
        let weights: Vec<(usize, u32)> = self.phi.column(i)[..n]
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c != 0)
            .map(|(j, &c)| (j, c))
            .collect();
        for col in 0..2 * n {
            let bottom = &self.phi.column(col)[n..];
            let s = weights
                .iter()
                .fold(0u32, |acc, &(j, c)| add_mod(acc, mul_mod(c, bottom[j], d), d));
            let expected = (col == n + i) as u32;
            if s != expected {
                return Err(Error::InconsistentFrame(format!(
                    "bottom rows combine to {s} instead of {expected} in column {col}"
                )));
            }
        }
        let r = &self.r.as_slice()[n..];
        let outcome = weights
            .iter()
            .fold(0u32, |acc, &(j, c)| add_mod(acc, mul_mod(c, r[j], d), d));
        Ok(ZMod::new(outcome as i64, d))
    }

    pub fn measure_z(&mut self, i: usize, randomness: Randomness<'_>) -> Result<MeasurementRecord> {
        match self.classify_measurement(i)? {
            MeasurementKind::Deterministic => {
                let actual = self.deterministic_outcome(i)?.value();
                if let Randomness::Forced(forced) = randomness {
                    if forced >= self.d {
                        return Err(Error::OutcomeOutOfRange {
                            outcome: forced,
                            d: self.d,
                        });
                    }
                    if forced != actual {
                        return Err(Error::ImpossibleOutcome {
                            qudit: i,
                            forced,
                            actual,
                        });
                    }
                }
                Ok(MeasurementRecord::deterministic(i, actual))
            }
            MeasurementKind::Random { pivot_row } => {
                let outcome = match randomness {
                    Randomness::Seeded(rng) => rng.uniform_mod(self.d),
                    Randomness::Forced(v) => v,
                };
                self.collapse_random(i, pivot_row, outcome)?;
                Ok(MeasurementRecord::random(i, outcome, pivot_row))
            }
        }
    }

    fn satisfies_bottom(&self, x: &[u32]) -> bool {
        let n = self.n;
        let d = self.d;
        let mut lhs = vec![0u32; n];
        for (col, &xc) in x.iter().enumerate() {
            if xc == 0 {
                continue;
            }
            for (l, &v) in lhs.iter_mut().zip(&self.phi.column(col)[n..]) {
                *l = add_mod(*l, mul_mod(v, xc, d), d);
            }
        }
        lhs == self.r.as_slice()[n..]
    }

    /// `d^{-n}` on the support, zero elsewhere, as an exact rational.
    pub fn wigner_value(&self, x: &ZVector) -> Result<BigRational> {
        if x.len() != 2 * self.n {
            return Err(Error::DimensionMismatch {
                expected: 2 * self.n,
                found: x.len(),
            });
        }
        if x.modulus() != self.d {
            return Err(Error::ModulusMismatch {
                left: self.d,
                right: x.modulus(),
            });
        }
        if self.satisfies_bottom(x.as_slice()) {
            let denom = BigInt::from(self.d).pow(self.n as u32);
            Ok(BigRational::new(BigInt::one(), denom))
        } else {
            Ok(BigRational::zero())
        }
    }

    fn half_support(&self, rows: std::ops::Range<usize>) -> Result<Vec<ZVector>> {
        let limit_ok = (self.d as usize)
            .checked_pow(self.n as u32)
            .is_some_and(|s| s <= SUPPORT_LIMIT);
        if !limit_ok {
            return Err(Error::TooLarge {
                what: "Wigner support",
                limit: SUPPORT_LIMIT,
            });
        }
        let system = self.phi.row_block(rows.start, rows.end);
        let rhs = ZVector::from_raw(self.r.as_slice()[rows].to_vec(), self.d);
        let solution = system.solve_affine(&rhs)?.ok_or_else(|| {
            Error::InconsistentFrame("half system has no solution".to_string())
        })?;
        Ok(solution.enumerate())
    }

    /// Solutions of the bottom-half system, in lexicographic order.
    pub fn wigner_support(&self) -> Result<Vec<ZVector>> {
        self.half_support(self.n..2 * self.n)
    }

    /// Solutions of the top-half system, in lexicographic order.
    pub fn destabilizer_support(&self) -> Result<Vec<ZVector>> {
        self.half_support(0..self.n)
    }

    pub fn is_symplectic(&self) -> bool {
        is_symplectic(&self.phi)
    }

    pub fn determinant(&self) -> ZMod {
        self.phi.determinant().expect("square")
    }

    /// Symplecticity and invertibility of Φ.
    pub fn check_invariants(&self) -> Result<()> {
        if !self.is_symplectic() {
            return Err(Error::InconsistentFrame("Φ J Φᵀ ≠ J".to_string()));
        }
        if self.determinant().is_zero() {
            return Err(Error::InconsistentFrame("det Φ = 0".to_string()));
        }
        Ok(())
    }
}

/// Φ one row per line, then `r:` and the vector.
impl fmt::Display for StabilizerFrame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.phi)?;
        writeln!(f, "r: {}", self.r)
    }
}

impl fmt::Debug for StabilizerFrame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "StabilizerFrame n={} d={}", self.n, self.d)?;
        write!(f, "{self}")
    }
}
