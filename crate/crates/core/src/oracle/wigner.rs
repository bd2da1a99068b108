//! The discrete Wigner function of a dense state, for odd `d`.
//!
//! `W(p, q) = d^{-n} Σ_ξ ω^{-ξ·p} ψ(q + hξ) ψ*(q − hξ)` with `h = (d+1)/2`.
//! The ξ sum factorizes over qudits, so it is evaluated as one d-point
//! transform per axis.

use num_complex::Complex64;

use super::dense::{omega_powers, DenseState};
use crate::error::{Error, Result};

/// Real part of the Wigner function at every phase point, plus the largest
/// imaginary residue seen while computing it.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerTable {
    n: usize,
    d: u32,
    /// Indexed by `(p_1 … p_n, q_1 … q_n)` as a mixed-radix number, `p_1`
    /// most significant.
    values: Vec<f64>,
    max_imag: f64,
}

impl WignerTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn max_imag(&self) -> f64 {
        self.max_imag
    }

    pub fn point_of(&self, mut idx: usize) -> Vec<u32> {
        let d = self.d as usize;
        let mut out = vec![0u32; 2 * self.n];
        for slot in out.iter_mut().rev() {
            *slot = (idx % d) as u32;
            idx /= d;
        }
        out
    }

    pub fn index_of(&self, point: &[u32]) -> usize {
        point
            .iter()
            .fold(0usize, |acc, &v| acc * self.d as usize + (v % self.d) as usize)
    }

    pub fn value(&self, point: &[u32]) -> f64 {
        self.values[self.index_of(point)]
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Points with value above `threshold`, in lexicographic order.
    pub fn support(&self, threshold: f64) -> Vec<Vec<u32>> {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, &v)| v > threshold)
            .map(|(k, _)| self.point_of(k))
            .collect()
    }
}

pub fn discrete_wigner(state: &DenseState) -> Result<WignerTable> {
    let d = state.d();
    if d % 2 == 0 {
        return Err(Error::EvenDimension(d));
    }
    let n = state.n();
    let du = d as usize;
    let size = state.len();
    let h = (du + 1) / 2;
    let psi = state.amplitudes();
    let w = omega_powers(d);
    // kernel[p * d + ξ] = ω^{-ξp}
    let kernel: Vec<Complex64> = (0..du * du)
        .map(|k| w[(du - (k / du) * (k % du) % du) % du])
        .collect();
    let digits: Vec<Vec<usize>> = (0..size)
        .map(|idx| state.digits_of(idx).into_iter().map(|v| v as usize).collect())
        .collect();
    let strides: Vec<usize> = (0..n).map(|i| state.stride(i)).collect();
    let scale = 1.0 / size as f64;

    let mut values = vec![0.0; size * size];
    let mut max_imag: f64 = 0.0;
    let mut g = vec![Complex64::new(0.0, 0.0); size];
    let mut line = vec![Complex64::new(0.0, 0.0); du];

    for q in 0..size {
        let qd = &digits[q];
        for (xi, slot) in g.iter_mut().enumerate() {
            let xd = &digits[xi];
            let mut plus = 0;
            let mut minus = 0;
            for k in 0..n {
                let shift = h * xd[k] % du;
                plus += ((qd[k] + shift) % du) * strides[k];
                minus += ((qd[k] + du - shift) % du) * strides[k];
            }
            *slot = psi[plus] * psi[minus].conj();
        }
        for &stride in &strides {
            for base in 0..size {
                if (base / stride) % du != 0 {
                    continue;
                }
                for (xi, slot) in line.iter_mut().enumerate() {
                    *slot = g[base + xi * stride];
                }
                for (p, row) in kernel.chunks_exact(du).enumerate() {
                    let acc: Complex64 = row.iter().zip(&line).map(|(k, v)| k * v).sum();
                    g[base + p * stride] = acc;
                }
            }
        }
        for (p, v) in g.iter().enumerate() {
            let v = v * scale;
            max_imag = max_imag.max(v.im.abs());
            values[p * size + q] = v.re;
        }
    }

    Ok(WignerTable {
        n,
        d,
        values,
        max_imag,
    })
}
