//! Plain modular linear algebra kept apart from the library, used as a
//! reference for what the engines compute.

#![allow(dead_code)]

use wigstab::algebra::ZMatrix;

pub type Mat = Vec<Vec<i64>>;

pub fn modp(v: i64, d: u32) -> i64 {
    v.rem_euclid(d as i64)
}

pub fn from_lib(m: &ZMatrix) -> Mat {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| m.get(r, c) as i64).collect())
        .collect()
}

pub fn identity(size: usize) -> Mat {
    (0..size)
        .map(|r| (0..size).map(|c| (r == c) as i64).collect())
        .collect()
}

pub fn mul(a: &Mat, b: &Mat, d: u32) -> Mat {
    let inner = b.len();
    let cols = b[0].len();
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|c| modp((0..inner).map(|k| row[k] * b[k][c]).sum(), d))
                .collect()
        })
        .collect()
}

pub fn transpose(a: &Mat) -> Mat {
    (0..a[0].len())
        .map(|c| a.iter().map(|row| row[c]).collect())
        .collect()
}

pub fn reduce(a: &Mat, d: u32) -> Mat {
    a.iter()
        .map(|row| row.iter().map(|&v| modp(v, d)).collect())
        .collect()
}

fn inv(a: i64, d: u32) -> i64 {
    // Fermat, d prime
    let mut result = 1i64;
    let mut base = modp(a, d);
    let mut e = d as i64 - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % d as i64;
        }
        base = base * base % d as i64;
        e >>= 1;
    }
    result
}

pub fn determinant(a: &Mat, d: u32) -> i64 {
    let mut m = reduce(a, d);
    let size = m.len();
    let mut det = 1i64;
    for col in 0..size {
        let Some(p) = (col..size).find(|&r| m[r][col] != 0) else {
            return 0;
        };
        if p != col {
            m.swap(p, col);
            det = modp(-det, d);
        }
        det = det * m[col][col] % d as i64;
        let pinv = inv(m[col][col], d);
        for r in col + 1..size {
            let f = m[r][col] * pinv % d as i64;
            if f != 0 {
                for c in col..size {
                    m[r][c] = modp(m[r][c] - f * m[col][c], d);
                }
            }
        }
    }
    det
}

pub fn inverse(a: &Mat, d: u32) -> Option<Mat> {
    let size = a.len();
    let mut m: Mat = reduce(a, d)
        .into_iter()
        .zip(identity(size))
        .map(|(mut l, r)| {
            l.extend(r);
            l
        })
        .collect();
    for col in 0..size {
        let p = (col..size).find(|&r| m[r][col] != 0)?;
        m.swap(p, col);
        let pinv = inv(m[col][col], d);
        for v in m[col].iter_mut() {
            *v = *v * pinv % d as i64;
        }
        for r in 0..size {
            if r != col && m[r][col] != 0 {
                let f = m[r][col];
                for c in 0..2 * size {
                    m[r][c] = modp(m[r][c] - f * m[col][c], d);
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[size..].to_vec()).collect())
}

/// `[[0, -I], [I, 0]]`.
pub fn j_form(n: usize, d: u32) -> Mat {
    let mut j = vec![vec![0i64; 2 * n]; 2 * n];
    for i in 0..n {
        j[i][n + i] = modp(-1, d);
        j[n + i][i] = 1;
    }
    j
}

pub fn is_symplectic(a: &Mat, d: u32) -> bool {
    let n = a.len() / 2;
    mul(&mul(a, &j_form(n, d), d), &transpose(a), d) == j_form(n, d)
}

/// Action on `(p, q)` of a gate, where `T(p, q) = X^q Z^p` and
/// `U T(λ) U† ∝ T(Mλ)`.
///
/// Fourier: `X → Z`, `Z → X^{-1}`. Phase `diag(ω^{q²})`: `X → Z² X`.
/// CNOT `|a, b⟩ → |a, a+b⟩`: `X_c → X_c X_t`, `Z_t → Z_c^{-1} Z_t`.
pub enum Gen {
    Fourier(usize),
    Phase(usize),
    Cnot(usize, usize),
}

pub fn action(g: &Gen, n: usize, d: u32) -> Mat {
    let mut m = identity(2 * n);
    match *g {
        Gen::Fourier(i) => {
            // columns: image of e_{p_i} is -e_{q_i}; image of e_{q_i} is e_{p_i}
            m[i][i] = 0;
            m[n + i][n + i] = 0;
            m[n + i][i] = modp(-1, d);
            m[i][n + i] = 1;
        }
        Gen::Phase(i) => {
            m[i][n + i] = 2 % d as i64;
        }
        Gen::Cnot(c, t) => {
            m[n + t][n + c] = 1;
            m[c][t] = modp(-1, d);
        }
    }
    m
}
