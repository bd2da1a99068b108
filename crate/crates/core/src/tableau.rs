//! Binary stabilizer tableau for qubits (d = 2).
//!
//! Rows `0..n` are destabilizers, rows `n..2n` stabilizers, and row `2n` is
//! scratch space for deterministic measurement. A row `(x, z, r)` stands for
//! `(−1)^r ⊗_k P_k` with `P = I, X, Y, Z` for `(x, z) = (0,0), (1,0), (1,1),
//! (0,1)`.

use std::fmt;

use crate::algebra::ZMatrix;
use crate::error::{Error, Result};
use crate::frame::MeasurementRecord;
use crate::rng::Randomness;

/// One Pauli row detached from a tableau.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliRow {
    pub x: Vec<bool>,
    pub z: Vec<bool>,
    pub r: bool,
}

impl PauliRow {
    pub fn identity(n: usize) -> Self {
        Self {
            x: vec![false; n],
            z: vec![false; n],
            r: false,
        }
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }
}

/// Exponent of `i` picked up when the single-qubit Pauli `(x1, z1)` is
/// multiplied on the left of `(x2, z2)`, in −1, 0, 1.
pub fn phase_exponent(x1: bool, z1: bool, x2: bool, z2: bool) -> i32 {
    let (x2, z2) = (x2 as i32, z2 as i32);
    match (x1, z1) {
        (false, false) => 0,
        (true, true) => z2 - x2,
        (true, false) => z2 * (2 * x2 - 1),
        (false, true) => x2 * (1 - 2 * z2),
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct QubitTableau {
    n: usize,
    x: Vec<bool>,
    z: Vec<bool>,
    r: Vec<bool>,
}

impl QubitTableau {
    /// `|0…0⟩`: destabilizers `X_i`, stabilizers `Z_i`.
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::NoQudits);
        }
        let rows = 2 * n + 1;
        let mut t = Self {
            n,
            x: vec![false; rows * n],
            z: vec![false; rows * n],
            r: vec![false; rows],
        };
        for i in 0..n {
            t.x[i * n + i] = true;
            t.z[(n + i) * n + i] = true;
        }
        Ok(t)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn scratch(&self) -> usize {
        2 * self.n
    }

    pub fn x(&self, row: usize, col: usize) -> bool {
        self.x[row * self.n + col]
    }

    pub fn z(&self, row: usize, col: usize) -> bool {
        self.z[row * self.n + col]
    }

    pub fn r(&self, row: usize) -> bool {
        self.r[row]
    }

    pub fn row(&self, row: usize) -> PauliRow {
        let span = row * self.n..(row + 1) * self.n;
        PauliRow {
            x: self.x[span.clone()].to_vec(),
            z: self.z[span].to_vec(),
            r: self.r[row],
        }
    }

    pub fn stabilizers(&self) -> Vec<PauliRow> {
        (self.n..2 * self.n).map(|k| self.row(k)).collect()
    }

    pub fn destabilizers(&self) -> Vec<PauliRow> {
        (0..self.n).map(|k| self.row(k)).collect()
    }

    fn check_qubit(&self, i: usize) -> Result<()> {
        if i < self.n {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index: i, n: self.n })
        }
    }

    fn rows(&self) -> std::ops::Range<usize> {
        0..2 * self.n
    }

    pub fn apply_h(&mut self, i: usize) -> Result<()> {
        self.check_qubit(i)?;
        let n = self.n;
        for row in self.rows() {
            let k = row * n + i;
            self.r[row] ^= self.x[k] & self.z[k];
            std::mem::swap(&mut self.x[k], &mut self.z[k]);
        }
        Ok(())
    }

    pub fn apply_s(&mut self, i: usize) -> Result<()> {
        self.check_qubit(i)?;
        let n = self.n;
        for row in self.rows() {
            let k = row * n + i;
            self.r[row] ^= self.x[k] & self.z[k];
            self.z[k] ^= self.x[k];
        }
        Ok(())
    }

    pub fn apply_cnot(&mut self, control: usize, target: usize) -> Result<()> {
        self.check_qubit(control)?;
        self.check_qubit(target)?;
        if control == target {
            return Err(Error::ControlEqualsTarget(control));
        }
        let n = self.n;
        for row in self.rows() {
            let a = row * n + control;
            let b = row * n + target;
            self.r[row] ^= self.x[a] & self.z[b] & (self.x[b] ^ self.z[a] ^ true);
            self.x[b] ^= self.x[a];
            self.z[a] ^= self.z[b];
        }
        Ok(())
    }

    /// Pauli X on qubit `i`: flips the sign of every row with a Z component.
    pub fn apply_x(&mut self, i: usize) -> Result<()> {
        self.check_qubit(i)?;
        for row in self.rows() {
            self.r[row] ^= self.z[row * self.n + i];
        }
        Ok(())
    }

    pub fn apply_z(&mut self, i: usize) -> Result<()> {
        self.check_qubit(i)?;
        for row in self.rows() {
            self.r[row] ^= self.x[row * self.n + i];
        }
        Ok(())
    }

    /// Replaces row `h` by the product `row_j · row_h`.
    pub fn rowsum(&mut self, h: usize, j: usize) -> Result<()> {
        let rows = 2 * self.n + 1;
        for idx in [h, j] {
            if idx >= rows {
                return Err(Error::IndexOutOfRange { index: idx, n: rows });
            }
        }
        if h == j {
            return Err(Error::SelfSum(h));
        }
        let n = self.n;
        let mut total = 2 * self.r[h] as i32 + 2 * self.r[j] as i32;
        for k in 0..n {
            let (hk, jk) = (h * n + k, j * n + k);
            total += phase_exponent(self.x[jk], self.z[jk], self.x[hk], self.z[hk]);
            self.x[hk] ^= self.x[jk];
            self.z[hk] ^= self.z[jk];
        }
        // odd totals only arise for anticommuting rows, whose result is
        // discarded by the caller
        self.r[h] = total.rem_euclid(4) != 0;
        Ok(())
    }

    fn copy_row(&mut self, dst: usize, src: usize) {
        let n = self.n;
        self.x.copy_within(src * n..(src + 1) * n, dst * n);
        self.z.copy_within(src * n..(src + 1) * n, dst * n);
        self.r[dst] = self.r[src];
    }

    fn clear_row(&mut self, row: usize) {
        let n = self.n;
        self.x[row * n..(row + 1) * n].fill(false);
        self.z[row * n..(row + 1) * n].fill(false);
        self.r[row] = false;
    }

    /// Z-basis measurement of qubit `i`.
    pub fn measure(&mut self, i: usize, randomness: Randomness<'_>) -> Result<MeasurementRecord> {
        self.check_qubit(i)?;
        let n = self.n;
        if let Randomness::Forced(v) = randomness {
            if v > 1 {
                return Err(Error::OutcomeOutOfRange { outcome: v, d: 2 });
            }
        }
        let pivot = (n..2 * n).find(|&p| self.x(p, i));
        match pivot {
            Some(p) => {
                for k in 0..2 * n {
                    if k != p && self.x(k, i) {
                        self.rowsum(k, p)?;
                    }
                }
                self.copy_row(p - n, p);
                self.clear_row(p);
                self.z[p * n + i] = true;
                let outcome = match randomness {
                    Randomness::Seeded(rng) => rng.uniform_mod(2),
                    Randomness::Forced(v) => v,
                };
                self.r[p] = outcome == 1;
                Ok(MeasurementRecord::random(i, outcome, p))
            }
            None => {
                let s = self.scratch();
                self.clear_row(s);
                for j in 0..n {
                    if self.x(j, i) {
                        self.rowsum(s, n + j)?;
                    }
                }
                let actual = self.r[s] as u32;
                if let Randomness::Forced(forced) = randomness {
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
        }
    }

    fn commutes(&self, a: usize, b: usize) -> bool {
        let n = self.n;
        let mut acc = false;
        for k in 0..n {
            acc ^= (self.x[a * n + k] & self.z[b * n + k]) ^ (self.z[a * n + k] & self.x[b * n + k]);
        }
        !acc
    }

    /// Stabilizers commute pairwise, destabilizers commute pairwise, and
    /// destabilizer `h` anticommutes with exactly stabilizer `n+h`.
    pub fn check_commutation(&self) -> Result<()> {
        let n = self.n;
        for a in 0..2 * n {
            for b in a + 1..2 * n {
                let paired = a < n && b == a + n;
                if self.commutes(a, b) == paired {
                    return Err(Error::InconsistentFrame(format!(
                        "rows {a} and {b} have the wrong commutation relation"
                    )));
                }
            }
        }
        Ok(())
    }

    /// The 2n rows are linearly independent over GF(2).
    pub fn check_independence(&self) -> Result<()> {
        if self.binary_matrix().rank() == 2 * self.n {
            Ok(())
        } else {
            Err(Error::InconsistentFrame("tableau rows are dependent".to_string()))
        }
    }

    pub fn check_invariants(&self) -> Result<()> {
        self.check_commutation()?;
        self.check_independence()
    }

    /// The `(x | z)` blocks of the 2n main rows as a matrix over ℤ/2ℤ.
    pub fn binary_matrix(&self) -> ZMatrix {
        let n = self.n;
        let mut m = ZMatrix::zeros(2 * n, 2 * n, 2);
        for row in 0..2 * n {
            for k in 0..n {
                m.set(row, k, self.x(row, k) as u32);
                m.set(row, n + k, self.z(row, k) as u32);
            }
        }
        m
    }

    pub fn storage_bits(&self) -> usize {
        self.x.len() + self.z.len() + self.r.len()
    }
}

/// One row per line: x bits, z bits, then the sign bit after `|`.
impl fmt::Display for QubitTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in 0..2 * self.n {
            let bits: Vec<&str> = (0..self.n)
                .map(|k| self.x(row, k))
                .chain((0..self.n).map(|k| self.z(row, k)))
                .map(|b| if b { "1" } else { "0" })
                .collect();
            writeln!(f, "{} | {}", bits.join(" "), self.r[row] as u8)?;
        }
        Ok(())
    }
}

impl fmt::Debug for QubitTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QubitTableau n={}", self.n)?;
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::MeasurementRng;
    use num_complex::Complex64;

    fn bits(t: &QubitTableau, row: usize) -> (Vec<bool>, Vec<bool>, bool) {
        let r = t.row(row);
        (r.x, r.z, r.r)
    }

    #[test]
    fn fresh_tableau() {
        let t = QubitTableau::new(1).unwrap();
        assert_eq!(bits(&t, 0), (vec![true], vec![false], false));
        assert_eq!(bits(&t, 1), (vec![false], vec![true], false));
        let t2 = QubitTableau::new(2).unwrap();
        t2.check_invariants().unwrap();
        assert_eq!(t2.to_string(), "1 0 0 0 | 0\n0 1 0 0 | 0\n0 0 1 0 | 0\n0 0 0 1 | 0\n");
        assert_eq!(QubitTableau::new(0), Err(Error::NoQudits));
    }

    #[test]
    fn single_gate_conjugations() {
        let mut t = QubitTableau::new(1).unwrap();
        t.apply_h(0).unwrap();
        assert_eq!(bits(&t, 0), (vec![false], vec![true], false));
        assert_eq!(bits(&t, 1), (vec![true], vec![false], false));

        let mut s = QubitTableau::new(1).unwrap();
        s.apply_s(0).unwrap();
        assert_eq!(bits(&s, 0), (vec![true], vec![true], false));
        assert_eq!(bits(&s, 1), (vec![false], vec![true], false));

        let mut c = QubitTableau::new(2).unwrap();
        c.apply_cnot(0, 1).unwrap();
        assert_eq!(bits(&c, 0), (vec![true, true], vec![false, false], false));
        assert_eq!(bits(&c, 2), (vec![false, false], vec![true, false], false));
        assert_eq!(bits(&c, 3), (vec![false, false], vec![true, true], false));
        assert_eq!(c.apply_cnot(1, 1), Err(Error::ControlEqualsTarget(1)));
        assert!(matches!(c.apply_h(2), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn s_squared_flips_x_sign() {
        // S X S† = Y, S Y S† = −X
        let mut t = QubitTableau::new(1).unwrap();
        t.apply_s(0).unwrap();
        t.apply_s(0).unwrap();
        assert_eq!(bits(&t, 0), (vec![true], vec![false], true));
    }

    fn pauli(x: bool, z: bool) -> [[Complex64; 2]; 2] {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match (x, z) {
            (false, false) => [[l, o], [o, l]],
            (true, false) => [[o, l], [l, o]],
            (true, true) => [[o, -i], [i, o]],
            (false, true) => [[l, o], [o, -l]],
        }
    }

    fn mul(a: [[Complex64; 2]; 2], b: [[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
        let mut c = [[Complex64::new(0.0, 0.0); 2]; 2];
        for r in 0..2 {
            for k in 0..2 {
                for s in 0..2 {
                    c[r][s] += a[r][k] * b[k][s];
                }
            }
        }
        c
    }

    #[test]
    fn phase_exponent_matches_pauli_products() {
        let i = Complex64::new(0.0, 1.0);
        for code1 in 0..4u8 {
            for code2 in 0..4u8 {
                let (x1, z1) = (code1 & 1 == 1, code1 & 2 == 2);
                let (x2, z2) = (code2 & 1 == 1, code2 & 2 == 2);
                let product = mul(pauli(x1, z1), pauli(x2, z2));
                let expected = pauli(x1 ^ x2, z1 ^ z2);
                let g = phase_exponent(x1, z1, x2, z2);
                let scaled = i.powi(g);
                for r in 0..2 {
                    for c in 0..2 {
                        assert!((product[r][c] - scaled * expected[r][c]).norm() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn rowsum_single_qubit_against_matrix_products() {
        // every commuting pair of single-qubit rows, with all sign bits
        for code_h in 0..4u8 {
            for code_j in 0..4u8 {
                for rh in [false, true] {
                    for rj in [false, true] {
                        let (xh, zh) = (code_h & 1 == 1, code_h & 2 == 2);
                        let (xj, zj) = (code_j & 1 == 1, code_j & 2 == 2);
                        let mut t = QubitTableau::new(1).unwrap();
                        t.x = vec![xh, xj, false];
                        t.z = vec![zh, zj, false];
                        t.r = vec![rh, rj, false];
                        let g = phase_exponent(xj, zj, xh, zh);
                        if g.rem_euclid(2) != 0 {
                            continue;
                        }
                        t.rowsum(0, 1).unwrap();
                        let sign = |b: bool| if b { -1.0 } else { 1.0 };
                        let product = mul(pauli(xj, zj), pauli(xh, zh));
                        let result = pauli(t.x[0], t.z[0]);
                        let scale = Complex64::new(sign(rh) * sign(rj), 0.0);
                        let expected_sign = sign(t.r[0]);
                        for r in 0..2 {
                            for c in 0..2 {
                                let lhs = scale * product[r][c];
                                let rhs = expected_sign * result[r][c];
                                assert!((lhs - rhs).norm() < 1e-12, "{code_h} {code_j} {rh} {rj}");
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn rowsum_identity_is_noop() {
        let mut t = QubitTableau::new(2).unwrap();
        t.apply_h(0).unwrap();
        t.apply_cnot(0, 1).unwrap();
        t.clear_row(4);
        let before = t.row(2);
        let mut u = t.clone();
        u.copy_row(3, 4);
        u.rowsum(2, 3).unwrap();
        assert_eq!(u.row(2), before);
        assert_eq!(t.rowsum(1, 1), Err(Error::SelfSum(1)));
    }

    #[test]
    fn fresh_measurement_is_deterministic_zero() {
        let mut t = QubitTableau::new(3).unwrap();
        let rec = t.measure(1, Randomness::Forced(0)).unwrap();
        assert_eq!(rec, MeasurementRecord::deterministic(1, 0));
        t.apply_x(1).unwrap();
        let mut rng = MeasurementRng::new(0);
        let rec = t.measure(1, Randomness::Seeded(&mut rng)).unwrap();
        assert_eq!(rec.outcome(), 1);
    }

    #[test]
    fn hadamard_measurement_is_balanced() {
        let mut counts = [0usize; 2];
        for shot in 0..2000 {
            let mut rng = MeasurementRng::for_shot(11, shot);
            let mut t = QubitTableau::new(1).unwrap();
            t.apply_h(0).unwrap();
            let rec = t.measure(0, Randomness::Seeded(&mut rng)).unwrap();
            assert!(!rec.is_deterministic());
            counts[rec.outcome() as usize] += 1;
        }
        // 5σ for Binomial(2000, 1/2) is about 112
        assert!((counts[0] as i64 - 1000).abs() < 112, "{counts:?}");
    }

    #[test]
    fn bell_correlation() {
        for forced in [0u32, 1] {
            let mut t = QubitTableau::new(2).unwrap();
            t.apply_h(0).unwrap();
            t.apply_cnot(0, 1).unwrap();
            let a = t.measure(0, Randomness::Forced(forced)).unwrap();
            assert!(!a.is_deterministic());
            let mut rng = MeasurementRng::new(3);
            let b = t.measure(1, Randomness::Seeded(&mut rng)).unwrap();
            assert!(b.is_deterministic());
            assert_eq!(b.outcome(), forced);
            t.check_invariants().unwrap();
            assert_eq!(
                t.measure(1, Randomness::Forced(1 - forced)),
                Err(Error::ImpossibleOutcome {
                    qudit: 1,
                    forced: 1 - forced,
                    actual: forced
                })
            );
        }
    }

    #[test]
    fn invariants_survive_random_sequences() {
        let mut rng = MeasurementRng::new(99);
        for _ in 0..200 {
            let n = 1 + rng.uniform_mod(5) as usize;
            let mut t = QubitTableau::new(n).unwrap();
            for _ in 0..40 {
                let i = rng.uniform_mod(n as u32) as usize;
                match rng.uniform_mod(6) {
                    0 => t.apply_h(i).unwrap(),
                    1 => t.apply_s(i).unwrap(),
                    2 if n > 1 => {
                        let j = (i + 1 + rng.uniform_mod(n as u32 - 1) as usize) % n;
                        t.apply_cnot(i, j).unwrap();
                    }
                    3 => t.apply_x(i).unwrap(),
                    4 => t.apply_z(i).unwrap(),
                    _ => {
                        t.measure(i, Randomness::Seeded(&mut rng)).unwrap();
                    }
                }
                t.check_invariants().unwrap();
            }
        }
    }

    #[test]
    fn corrupted_tableau_fails_checks() {
        let mut t = QubitTableau::new(2).unwrap();
        // stabilizer Z₁ becomes Y₁X₂, which anticommutes with Z₂
        t.x[2 * 2] = true;
        t.x[2 * 2 + 1] = true;
        assert!(t.check_commutation().is_err());
    }
}
