//! Dense matrices over ℤ/dℤ.
//!
//! Indexing is `(row, column)`, but entries are stored column by column: the
//! Clifford generators act on columns of Φ, so each gate touches a handful of
//! contiguous slices. Row operations (measurement) are written column-outer
//! for the same reason.

use std::fmt;

use super::zmod::{add_mod, inv_mod, mul_mod, neg_mod, reduce, sub_mod, ZMod, ZVector};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ZMatrix {
    modulus: u32,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl ZMatrix {
    pub fn zeros(rows: usize, cols: usize, modulus: u32) -> Self {
        assert!(modulus >= 2, "modulus must be at least 2");
        Self {
            modulus,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(size: usize, modulus: u32) -> Self {
        let mut m = Self::zeros(size, size, modulus);
        for k in 0..size {
            m.data[k * size + k] = 1 % modulus;
        }
        m
    }

    /// Builds a matrix from signed row data, reducing every entry.
    ///
    /// Panics if the rows are ragged.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R], modulus: u32) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut m = Self::zeros(nrows, ncols, modulus);
        for (r, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            assert_eq!(row.len(), ncols, "ragged rows");
            for (c, &v) in row.iter().enumerate() {
                m.data[c * nrows + r] = reduce(v, modulus);
            }
        }
        m
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> u32 {
        assert!(row < self.rows && col < self.cols);
        self.data[col * self.rows + row]
    }

    pub fn entry(&self, row: usize, col: usize) -> ZMod {
        ZMod::new(self.get(row, col) as i64, self.modulus)
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: u32) {
        assert!(row < self.rows && col < self.cols);
        debug_assert!(value < self.modulus);
        self.data[col * self.rows + row] = value;
    }

    pub fn column(&self, col: usize) -> &[u32] {
        &self.data[col * self.rows..(col + 1) * self.rows]
    }

    pub(crate) fn column_mut(&mut self, col: usize) -> &mut [u32] {
        &mut self.data[col * self.rows..(col + 1) * self.rows]
    }

    /// Two distinct columns, mutably.
    pub(crate) fn column_pair_mut(&mut self, a: usize, b: usize) -> (&mut [u32], &mut [u32]) {
        assert_ne!(a, b);
        let rows = self.rows;
        if a < b {
            let (lo, hi) = self.data.split_at_mut(b * rows);
            (&mut lo[a * rows..(a + 1) * rows], &mut hi[..rows])
        } else {
            let (lo, hi) = self.data.split_at_mut(a * rows);
            (&mut hi[..rows], &mut lo[b * rows..(b + 1) * rows])
        }
    }

    pub fn row(&self, row: usize) -> ZVector {
        let entries = (0..self.cols).map(|c| self.get(row, c)).collect();
        ZVector::from_raw(entries, self.modulus)
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c)).collect())
            .collect()
    }

    /// Rows `start..end` as a new matrix.
    pub fn row_block(&self, start: usize, end: usize) -> ZMatrix {
        assert!(start <= end && end <= self.rows);
        let h = end - start;
        let mut out = ZMatrix::zeros(h, self.cols, self.modulus);
        for c in 0..self.cols {
            out.column_mut(c).copy_from_slice(&self.column(c)[start..end]);
        }
        out
    }

    pub fn transpose(&self) -> ZMatrix {
        let mut out = ZMatrix::zeros(self.cols, self.rows, self.modulus);
        for c in 0..self.cols {
            for (r, &v) in self.column(c).iter().enumerate() {
                out.data[r * self.cols + c] = v;
            }
        }
        out
    }

    pub fn scale(&self, k: ZMod) -> ZMatrix {
        assert_eq!(k.modulus(), self.modulus);
        let mut out = self.clone();
        for v in &mut out.data {
            *v = mul_mod(*v, k.value(), self.modulus);
        }
        out
    }

    pub fn negate(&self) -> ZMatrix {
        let mut out = self.clone();
        for v in &mut out.data {
            *v = neg_mod(*v, self.modulus);
        }
        out
    }

    pub fn mul(&self, rhs: &ZMatrix) -> Result<ZMatrix> {
        mat_mul(self, rhs)
    }

    pub fn mul_vec(&self, v: &ZVector) -> Result<ZVector> {
        mat_vec(self, v)
    }

    /// Rank over the field ℤ/pℤ. The modulus must be prime.
    pub fn rank(&self) -> usize {
        let mut rows = self.to_rows();
        eliminate(&mut rows, self.cols, self.modulus).pivots.len()
    }

    /// Determinant over ℤ/pℤ. The modulus must be prime.
    pub fn determinant(&self) -> Result<ZMod> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        let mut rows = self.to_rows();
        let reduction = eliminate(&mut rows, self.cols, self.modulus);
        if reduction.pivots.len() < self.rows {
            return Ok(ZMod::zero(self.modulus));
        }
        Ok(ZMod::new(reduction.det_factor as i64, self.modulus))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// General solution of `self · x = rhs`, or `None` when inconsistent.
    ///
    /// The modulus must be prime.
    pub fn solve_affine(&self, rhs: &ZVector) -> Result<Option<AffineSolution>> {
        if rhs.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: rhs.len(),
            });
        }
        let m = self.modulus;
        let mut rows = self.to_rows();
        for (row, &b) in rows.iter_mut().zip(rhs.as_slice()) {
            row.push(b);
        }
        let reduction = eliminate(&mut rows, self.cols, m);
        // a pivot-free row with nonzero right-hand side means 0 = b
        if rows[reduction.pivots.len()..]
            .iter()
            .any(|row| row[self.cols] != 0)
        {
            return Ok(None);
        }
        let mut particular = vec![0u32; self.cols];
        for (k, &pc) in reduction.pivots.iter().enumerate() {
            particular[pc] = rows[k][self.cols];
        }
        let free: Vec<usize> = (0..self.cols)
            .filter(|c| !reduction.pivots.contains(c))
            .collect();
        let kernel = free
            .iter()
            .map(|&fc| {
                let mut v = vec![0u32; self.cols];
                v[fc] = 1;
                for (k, &pc) in reduction.pivots.iter().enumerate() {
                    v[pc] = neg_mod(rows[k][fc], m);
                }
                ZVector::from_raw(v, m)
            })
            .collect();
        Ok(Some(AffineSolution {
            particular: ZVector::from_raw(particular, m),
            kernel,
        }))
    }
}

/// `particular + span(kernel)`: the full solution set of a linear system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineSolution {
    pub particular: ZVector,
    pub kernel: Vec<ZVector>,
}

impl AffineSolution {
    /// Number of solutions, `d^dim(kernel)`, if it fits in `usize`.
    pub fn count(&self) -> Option<usize> {
        (self.particular.modulus() as usize).checked_pow(self.kernel.len() as u32)
    }

    /// Every solution, sorted lexicographically.
    pub fn enumerate(&self) -> Vec<ZVector> {
        let m = self.particular.modulus();
        let k = self.kernel.len();
        let mut out = Vec::with_capacity(self.count().unwrap_or(0));
        let mut coeffs = vec![0u32; k];
        loop {
            let mut v = self.particular.as_slice().to_vec();
            for (c, basis) in coeffs.iter().zip(&self.kernel) {
                if *c != 0 {
                    for (x, &b) in v.iter_mut().zip(basis.as_slice()) {
                        *x = add_mod(*x, mul_mod(*c, b, m), m);
                    }
                }
            }
            out.push(ZVector::from_raw(v, m));
            // odometer over the kernel coefficients
            let mut pos = 0;
            loop {
                if pos == k {
                    out.sort_by(|a, b| a.as_slice().cmp(b.as_slice()));
                    return out;
                }
                coeffs[pos] += 1;
                if coeffs[pos] < m {
                    break;
                }
                coeffs[pos] = 0;
                pos += 1;
            }
        }
    }
}

struct Reduction {
    pivots: Vec<usize>,
    det_factor: u32,
}

/// In-place reduced row echelon form over the first `ncols` columns.
fn eliminate(rows: &mut [Vec<u32>], ncols: usize, m: u32) -> Reduction {
    let mut pivots = Vec::new();
    let mut det = 1u32;
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&k| rows[k][c] != 0) else {
            continue;
        };
        if p != r {
            rows.swap(p, r);
            det = neg_mod(det, m);
        }
        let lead = rows[r][c];
        det = mul_mod(det, lead, m);
        let inv = inv_mod(lead, m).expect("elimination needs a prime modulus");
        for v in rows[r].iter_mut() {
            *v = mul_mod(*v, inv, m);
        }
        let pivot_row = rows[r].clone();
        for (k, row) in rows.iter_mut().enumerate() {
            if k == r || row[c] == 0 {
                continue;
            }
            let f = row[c];
            for (x, &y) in row.iter_mut().zip(&pivot_row) {
                *x = sub_mod(*x, mul_mod(f, y, m), m);
            }
        }
        pivots.push(c);
        r += 1;
    }
    Reduction {
        pivots,
        det_factor: det,
    }
}

fn check_modulus(a: u32, b: u32) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::ModulusMismatch { left: a, right: b })
    }
}

/// Exact product `a · b`.
pub fn mat_mul(a: &ZMatrix, b: &ZMatrix) -> Result<ZMatrix> {
    check_modulus(a.modulus, b.modulus)?;
    if a.cols != b.rows {
        return Err(Error::DimensionMismatch {
            expected: a.cols,
            found: b.rows,
        });
    }
    let m = a.modulus;
    let mut out = ZMatrix::zeros(a.rows, b.cols, m);
    for j in 0..b.cols {
        for (k, &bkj) in b.column(j).iter().enumerate() {
            if bkj == 0 {
                continue;
            }
            let src = &a.data[k * a.rows..(k + 1) * a.rows];
            let dst = &mut out.data[j * a.rows..(j + 1) * a.rows];
            for (d, &s) in dst.iter_mut().zip(src) {
                *d = add_mod(*d, mul_mod(s, bkj, m), m);
            }
        }
    }
    Ok(out)
}

/// Exact product `a · v`.
pub fn mat_vec(a: &ZMatrix, v: &ZVector) -> Result<ZVector> {
    check_modulus(a.modulus, v.modulus())?;
    if a.cols != v.len() {
        return Err(Error::DimensionMismatch {
            expected: a.cols,
            found: v.len(),
        });
    }
    let m = a.modulus;
    let mut out = vec![0u32; a.rows];
    for (k, &vk) in v.as_slice().iter().enumerate() {
        if vk == 0 {
            continue;
        }
        for (o, &x) in out.iter_mut().zip(a.column(k)) {
            *o = add_mod(*o, mul_mod(x, vk, m), m);
        }
    }
    Ok(ZVector::from_raw(out, m))
}

impl fmt::Debug for ZMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ZMatrix {}x{} mod {}", self.rows, self.cols, self.modulus)?;
        write!(f, "{self}")
    }
}

/// One line per row, entries separated by single spaces.
impl fmt::Display for ZMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            for c in 0..self.cols {
                if c > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_neutral() {
        let b = ZMatrix::from_rows(&[[1, 2, 3], [4, 0, 1], [2, 2, 2]], 5);
        let i = ZMatrix::identity(3, 5);
        assert_eq!(mat_mul(&i, &b).unwrap(), b);
        assert_eq!(mat_mul(&b, &i).unwrap(), b);
    }

    #[test]
    fn dimension_mismatch() {
        let a = ZMatrix::zeros(2, 3, 3);
        let b = ZMatrix::zeros(2, 3, 3);
        assert!(matches!(mat_mul(&a, &b), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(
            mat_vec(&a, &ZVector::zeros(2, 3)),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            mat_mul(&ZMatrix::zeros(2, 2, 3), &ZMatrix::zeros(2, 2, 5)),
            Err(Error::ModulusMismatch { .. })
        ));
    }

    #[test]
    fn row_access_and_transpose() {
        let a = ZMatrix::from_rows(&[[1, -1], [0, 2]], 3);
        assert_eq!(a.row(0).as_slice(), &[1, 2]);
        assert_eq!(a.column(1), &[2, 2]);
        assert_eq!(a.transpose().to_rows(), vec![vec![1, 0], vec![2, 2]]);
    }

    #[test]
    fn determinant_and_rank() {
        let a = ZMatrix::from_rows(&[[1, 1], [1, 1]], 3);
        assert_eq!(a.rank(), 1);
        assert!(a.determinant().unwrap().is_zero());
        let b = ZMatrix::from_rows(&[[0, 1], [1, 0]], 5);
        assert_eq!(b.determinant().unwrap().value(), 4);
        let c = ZMatrix::from_rows(&[[2, 3, 1], [1, 0, 4], [3, 3, 3]], 7);
        // 2(0-12) - 3(3-12) + 1(3-0) = -24 + 27 + 3 = 6
        assert_eq!(c.determinant().unwrap().value(), 6);
    }

    #[test]
    fn affine_solution_enumerates_all_points() {
        // p1 + p2 = 0, -q1 + q2 = 0 over Z_3: nine solutions
        let a = ZMatrix::from_rows(&[[1, 1, 0, 0], [0, 0, -1, 1]], 3);
        let sol = a.solve_affine(&ZVector::zeros(2, 3)).unwrap().unwrap();
        assert_eq!(sol.count(), Some(9));
        let pts = sol.enumerate();
        assert_eq!(pts.len(), 9);
        for p in &pts {
            let v = p.as_slice();
            assert_eq!((v[0] + v[1]) % 3, 0);
            assert_eq!(v[2], v[3]);
        }
        assert!(pts.windows(2).all(|w| w[0].as_slice() < w[1].as_slice()));
    }

    #[test]
    fn inconsistent_system() {
        let a = ZMatrix::from_rows(&[[1, 0], [2, 0]], 3);
        let rhs = ZVector::from_signed(&[1, 1], 3);
        assert_eq!(a.solve_affine(&rhs).unwrap(), None);
    }

    #[test]
    fn display_is_canonical() {
        let a = ZMatrix::from_rows(&[[0, 0, -1, 0], [0, 1, 0, 0]], 3);
        assert_eq!(a.to_string(), "0 0 2 0\n0 1 0 0\n");
    }
}
