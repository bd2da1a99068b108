//! The symplectic structure of the 2n-dimensional discrete phase space and
//! the stability matrices of the Clifford generators.

use super::matrix::ZMatrix;
use super::zmod::{add_mod, mul_mod, neg_mod, sub_mod, ZMod, ZVector};
use crate::error::{Error, Result};

/// The form `J = [[0, -I_n], [I_n, 0]]` on `(p, q)` coordinates.
///
/// Only `n` is stored; `J` is materialized on request.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymplecticForm {
    n: usize,
}

impl SymplecticForm {
    pub fn new(n: usize) -> Self {
        Self { n }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `J[r][c]` without building the matrix.
    pub fn entry(&self, r: usize, c: usize, modulus: u32) -> u32 {
        let n = self.n;
        if r < n && c == r + n {
            neg_mod(1, modulus)
        } else if r >= n && c + n == r {
            1
        } else {
            0
        }
    }

    pub fn matrix(&self, modulus: u32) -> ZMatrix {
        let size = 2 * self.n;
        let mut j = ZMatrix::zeros(size, size, modulus);
        for r in 0..size {
            for c in 0..size {
                let v = self.entry(r, c, modulus);
                if v != 0 {
                    j.set(r, c, v);
                }
            }
        }
        j
    }
}

fn check_phase_space(u: &ZVector, v: &ZVector) -> Result<usize> {
    u.check_conformant(v)?;
    if u.len() % 2 != 0 {
        return Err(Error::DimensionMismatch {
            expected: u.len() + 1,
            found: u.len(),
        });
    }
    Ok(u.len() / 2)
}

/// `Σ_i (u_{p,i} v_{q,i} − u_{q,i} v_{p,i})`.
pub fn symplectic_product(u: &ZVector, v: &ZVector) -> Result<ZMod> {
    let n = check_phase_space(u, v)?;
    let m = u.modulus();
    Ok(ZMod::new(
        raw_symplectic_product(u.as_slice(), v.as_slice(), n, m) as i64,
        m,
    ))
}

pub(crate) fn raw_symplectic_product(u: &[u32], v: &[u32], n: usize, m: u32) -> u32 {
    let mut acc = 0u32;
    for i in 0..n {
        acc = add_mod(acc, mul_mod(u[i], v[n + i], m), m);
        acc = sub_mod(acc, mul_mod(u[n + i], v[i], m), m);
    }
    acc
}

fn half_dimension(m: &ZMatrix) -> Option<usize> {
    (m.is_square() && m.rows() % 2 == 0).then(|| m.rows() / 2)
}

/// True iff `M J Mᵀ = J`.
pub fn is_symplectic(m: &ZMatrix) -> bool {
    let Some(n) = half_dimension(m) else {
        return false;
    };
    let d = m.modulus();
    let form = SymplecticForm::new(n);
    let rows: Vec<Vec<u32>> = m.to_rows();
    // (M J Mᵀ)_{ab} = −symplectic_product(row_a, row_b)
    for a in 0..2 * n {
        for b in a..2 * n {
            let mjm = neg_mod(raw_symplectic_product(&rows[a], &rows[b], n, d), d);
            if mjm != form.entry(a, b, d) {
                return false;
            }
            if a != b && neg_mod(mjm, d) != form.entry(b, a, d) {
                return false;
            }
        }
    }
    true
}

/// `M⁻¹ = −J Mᵀ J`, which in blocks is `[[Dᵀ, −Bᵀ], [−Cᵀ, Aᵀ]]` for
/// `M = [[A, B], [C, D]]`.
pub fn symplectic_inverse(m: &ZMatrix) -> Result<ZMatrix> {
    if !is_symplectic(m) {
        return Err(Error::NotSymplectic);
    }
    let n = m.rows() / 2;
    let d = m.modulus();
    let swap = |k: usize| if k < n { k + n } else { k - n };
    let mut out = ZMatrix::zeros(2 * n, 2 * n, d);
    for r in 0..2 * n {
        for c in 0..2 * n {
            let v = m.get(swap(c), swap(r));
            // −J_{r,σ(r)} · J_{σ(c),c}: + on diagonal blocks, − off them
            let same_block = (r < n) == (c < n);
            out.set(r, c, if same_block { v } else { neg_mod(v, d) });
        }
    }
    Ok(out)
}

fn delta(a: usize, b: usize) -> i64 {
    (a == b) as i64
}

fn from_delta_formula(n: usize, d: u32, f: impl Fn(usize, usize) -> i64) -> ZMatrix {
    let size = 2 * n;
    let rows: Vec<Vec<i64>> = (0..size)
        .map(|j| (0..size).map(|k| f(j, k)).collect())
        .collect();
    ZMatrix::from_rows(&rows, d)
}

/// Stability matrices of the generators, built entry by entry from their
/// Kronecker-delta definitions. Qudit indices are 0-based.
pub mod generators {
    use super::*;

    /// `M_{P'_i}`: `δ_{j,k} + 2 δ_{i,j} δ_{n+i,k}`.
    pub fn phase(n: usize, i: usize, d: u32) -> ZMatrix {
        from_delta_formula(n, d, |j, k| delta(j, k) + 2 * delta(i, j) * delta(n + i, k))
    }

    /// `M_{P'_i}⁻¹`: `δ_{j,k} − 2 δ_{i,j} δ_{n+i,k}`.
    pub fn phase_inverse(n: usize, i: usize, d: u32) -> ZMatrix {
        from_delta_formula(n, d, |j, k| delta(j, k) - 2 * delta(i, j) * delta(n + i, k))
    }

    /// `M_{F_i}`.
    pub fn fourier(n: usize, i: usize, d: u32) -> ZMatrix {
        from_delta_formula(n, d, |j, k| {
            delta(j, k) - delta(i, j) * delta(i, k) - delta(n + i, j) * delta(n + i, k)
                + delta(i, j) * delta(n + i, k)
                - delta(n + i, j) * delta(i, k)
        })
    }

    /// `M_{F_i}⁻¹`.
    pub fn fourier_inverse(n: usize, i: usize, d: u32) -> ZMatrix {
        from_delta_formula(n, d, |j, k| {
            delta(j, k) - delta(i, j) * delta(i, k) - delta(n + i, j) * delta(n + i, k)
                - delta(i, j) * delta(n + i, k)
                + delta(n + i, j) * delta(i, k)
        })
    }

    /// `M_{C_ij}`: `δ_{k,l} − δ_{i,k} δ_{j,l} + δ_{n+j,k} δ_{n+i,l}`.
    pub fn cnot(n: usize, i: usize, j: usize, d: u32) -> ZMatrix {
        from_delta_formula(n, d, |k, l| {
            delta(k, l) - delta(i, k) * delta(j, l) + delta(n + j, k) * delta(n + i, l)
        })
    }

    /// `M_{C_ij}⁻¹`: `δ_{k,l} + δ_{i,k} δ_{j,l} − δ_{n+j,k} δ_{n+i,l}`.
    pub fn cnot_inverse(n: usize, i: usize, j: usize, d: u32) -> ZMatrix {
        from_delta_formula(n, d, |k, l| {
            delta(k, l) + delta(i, k) * delta(j, l) - delta(n + j, k) * delta(n + i, l)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::generators::*;
    use super::*;
    use crate::algebra::matrix::mat_mul;

    #[test]
    fn j_squares_to_minus_identity() {
        for n in 1..4 {
            let j = SymplecticForm::new(n).matrix(5);
            let jj = mat_mul(&j, &j).unwrap();
            assert_eq!(jj, ZMatrix::identity(2 * n, 5).negate());
        }
    }

    #[test]
    fn product_examples() {
        let u = ZVector::from_signed(&[1, 0], 3);
        let v = ZVector::from_signed(&[0, 1], 3);
        assert_eq!(symplectic_product(&u, &v).unwrap().value(), 1);
        assert_eq!(symplectic_product(&u, &u).unwrap().value(), 0);
        // rows 1 and 3 of the post-measurement two-qutrit frame
        let r1 = ZVector::from_signed(&[1, 1, 0, 0], 3);
        let r3 = ZVector::from_signed(&[0, 0, 1, 0], 3);
        assert_eq!(symplectic_product(&r1, &r3).unwrap().value(), 1);
    }

    #[test]
    fn product_rejects_bad_shapes() {
        let u = ZVector::zeros(4, 3);
        assert!(symplectic_product(&u, &ZVector::zeros(2, 3)).is_err());
        assert!(symplectic_product(&ZVector::zeros(3, 3), &ZVector::zeros(3, 3)).is_err());
    }

    #[test]
    fn symplectic_examples() {
        assert!(is_symplectic(&ZMatrix::identity(4, 3)));
        assert_eq!(phase(1, 0, 3), ZMatrix::from_rows(&[[1, 2], [0, 1]], 3));
        assert!(is_symplectic(&phase(1, 0, 3)));
        assert!(!is_symplectic(&ZMatrix::from_rows(&[[1, 1], [1, 1]], 3)));
        assert!(!is_symplectic(&ZMatrix::zeros(3, 3, 3)));
    }

    #[test]
    fn literal_definition_agrees() {
        // brute check of M J Mᵀ = J via explicit products
        let j = SymplecticForm::new(2).matrix(5);
        for m in [phase(2, 1, 5), fourier(2, 0, 5), cnot(2, 0, 1, 5), cnot(2, 1, 0, 5)] {
            let mjmt = mat_mul(&mat_mul(&m, &j).unwrap(), &m.transpose()).unwrap();
            assert_eq!(mjmt, j);
            assert!(is_symplectic(&m));
        }
        let bad = ZMatrix::from_rows(&[[1, 0, 1, 0], [0, 1, 0, 0], [0, 0, 1, 0], [1, 0, 0, 1]], 5);
        let mjmt = mat_mul(&mat_mul(&bad, &j).unwrap(), &bad.transpose()).unwrap();
        assert_eq!(is_symplectic(&bad), mjmt == j);
    }

    #[test]
    fn inverse_examples() {
        let inv = symplectic_inverse(&phase(1, 0, 3)).unwrap();
        assert_eq!(inv, ZMatrix::from_rows(&[[1, -2], [0, 1]], 3));
        assert_eq!(inv, ZMatrix::from_rows(&[[1, 1], [0, 1]], 3));
        assert_eq!(
            symplectic_inverse(&ZMatrix::identity(4, 7)).unwrap(),
            ZMatrix::identity(4, 7)
        );
        assert_eq!(
            symplectic_inverse(&fourier(1, 0, 3)).unwrap(),
            fourier_inverse(1, 0, 3)
        );
        assert_eq!(fourier_inverse(1, 0, 3), ZMatrix::from_rows(&[[0, -1], [1, 0]], 3));
        assert_eq!(
            symplectic_inverse(&ZMatrix::from_rows(&[[1, 1], [1, 1]], 3)),
            Err(Error::NotSymplectic)
        );
    }

    #[test]
    fn generators_are_symplectic_and_invert() {
        for d in [3u32, 5, 7] {
            for n in 1..=6 {
                let id = ZMatrix::identity(2 * n, d);
                let mut mats = Vec::new();
                for i in 0..n {
                    mats.push((phase(n, i, d), phase_inverse(n, i, d)));
                    mats.push((fourier(n, i, d), fourier_inverse(n, i, d)));
                    for j in 0..n {
                        if i != j {
                            mats.push((cnot(n, i, j, d), cnot_inverse(n, i, j, d)));
                        }
                    }
                }
                for (m, printed_inverse) in mats {
                    assert!(is_symplectic(&m));
                    let inv = symplectic_inverse(&m).unwrap();
                    assert_eq!(inv, printed_inverse);
                    assert_eq!(mat_mul(&m, &inv).unwrap(), id);
                    assert_eq!(mat_mul(&inv, &m).unwrap(), id);
                }
            }
        }
    }
}
