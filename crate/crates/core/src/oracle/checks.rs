//! Cross-checks between the symbolic engines and dense linear algebra.

use super::dense::{power, weyl_operator, DenseMatrix, DenseState, WeylOperator, TOLERANCE};
use super::wigner::discrete_wigner;
use crate::algebra::ZMatrix;
use crate::error::{Error, Result};
use crate::frame::StabilizerFrame;
use crate::tableau::QubitTableau;

/// Weyl operator of the phase-space point `λ = (p, q)`: `X^q Z^p`.
fn displacement(lambda: &[u32], n: usize, d: u32) -> DenseMatrix {
    weyl_operator(&lambda[n..], &lambda[..n], d)
}

/// True iff `U T(λ) U† ∝ T(Mλ)` for every unit vector `λ`.
pub fn conjugation_check(unitary: &DenseMatrix, m: &ZMatrix) -> bool {
    if !m.is_square() || m.rows() % 2 != 0 {
        return false;
    }
    let n = m.rows() / 2;
    let d = m.modulus();
    match (d as usize).checked_pow(n as u32) {
        Some(dim) if dim == unitary.dim() => {}
        _ => return false,
    }
    let adjoint = unitary.adjoint();
    (0..2 * n).all(|k| {
        let mut lambda = vec![0u32; 2 * n];
        lambda[k] = 1;
        let conjugated = unitary.mul(&displacement(&lambda, n, d)).mul(&adjoint);
        let image = m.column(k).to_vec();
        conjugated
            .phase_relative_to(&displacement(&image, n, d))
            .is_some()
    })
}

fn check_shape(frame_n: usize, frame_d: u32, state: &DenseState) -> Result<()> {
    if frame_n != state.n() {
        return Err(Error::DimensionMismatch {
            expected: frame_n,
            found: state.n(),
        });
    }
    if frame_d != state.d() {
        return Err(Error::ModulusMismatch {
            left: frame_d,
            right: state.d(),
        });
    }
    Ok(())
}

/// The operator that bottom row `k` says fixes the state.
///
/// With `a` and `b` the p- and q-parts of the row, this is
/// `ω^{-(r + h·a·b)} X^{-a} Z^{b}`, where `h = (d+1)/2` is one half mod d.
/// The `h·a·b` term converts the exponential of the sum into the ordered
/// product.
pub fn frame_stabilizer(frame: &StabilizerFrame, k: usize) -> WeylOperator {
    let n = frame.n();
    let d = frame.d();
    let row = frame.phi().row(n + k);
    let row = row.as_slice();
    let a: Vec<u32> = row[..n].iter().map(|&v| power(-(v as i64), d)).collect();
    let b: Vec<u32> = row[n..].to_vec();
    let overlap: u64 = row[..n]
        .iter()
        .zip(&row[n..])
        .map(|(&x, &y)| x as u64 * y as u64)
        .sum();
    let h = (d as u64 + 1) / 2;
    let r = frame.r().as_slice()[n + k] as u64;
    let exponent = (r + h * overlap) % d as u64;
    // ω^{-e} = e^{iπ(2d - 2e)/d}
    let phase = ((2 * d as u64 - 2 * exponent) % (2 * d as u64)) as u32;
    WeylOperator::new(a, b, phase)
}

/// Every bottom row's operator fixes `state` to within the tolerance.
pub fn stabilizer_check(frame: &StabilizerFrame, state: &DenseState) -> Result<bool> {
    check_shape(frame.n(), frame.d(), state)?;
    Ok((0..frame.n()).all(|k| {
        let mut image = state.clone();
        frame_stabilizer(frame, k).apply(&mut image);
        image.max_abs_diff(state) < TOLERANCE
    }))
}

/// `(−1)^r i^{#Y} X^x Z^z` for stabilizer row `k`.
pub fn tableau_stabilizer(tableau: &QubitTableau, k: usize) -> WeylOperator {
    let row = tableau.row(tableau.n() + k);
    let ys = row.x.iter().zip(&row.z).filter(|(&x, &z)| x && z).count() as u32;
    let phase = (2 * row.r as u32 + ys) % 4;
    WeylOperator::new(
        row.x.iter().map(|&b| b as u32).collect(),
        row.z.iter().map(|&b| b as u32).collect(),
        phase,
    )
}

/// Every stabilizer row's signed Pauli operator fixes `state`.
pub fn qubit_stabilizer_check(tableau: &QubitTableau, state: &DenseState) -> Result<bool> {
    check_shape(tableau.n(), 2, state)?;
    Ok((0..tableau.n()).all(|k| {
        let mut image = state.clone();
        tableau_stabilizer(tableau, k).apply(&mut image);
        image.max_abs_diff(state) < TOLERANCE
    }))
}

/// Compares the frame's Wigner support with the dense state's Wigner table.
///
/// Every table value must lie within the tolerance of `0` or `d^{-n}`, and
/// the nonzero set must equal the frame's support exactly.
pub fn check_wigner_support(frame: &StabilizerFrame, state: &DenseState) -> Result<()> {
    check_shape(frame.n(), frame.d(), state)?;
    let table = discrete_wigner(state)?;
    let level = 1.0 / state.len() as f64;
    if table.max_imag() > TOLERANCE {
        return Err(Error::InconsistentFrame(format!(
            "Wigner table has imaginary residue {}",
            table.max_imag()
        )));
    }
    if let Some(bad) = table
        .values()
        .iter()
        .find(|&&v| v.abs() > TOLERANCE && (v - level).abs() > TOLERANCE)
    {
        return Err(Error::InconsistentFrame(format!(
            "Wigner value {bad} is neither 0 nor {level}"
        )));
    }
    let oracle = table.support(0.5 * level);
    let engine: Vec<Vec<u32>> = frame
        .wigner_support()?
        .into_iter()
        .map(|x| x.as_slice().to_vec())
        .collect();
    if oracle != engine {
        return Err(Error::InconsistentFrame(format!(
            "support differs: engine has {} points, oracle {}",
            engine.len(),
            oracle.len()
        )));
    }
    Ok(())
}

/// True when the Born distribution is a point mass on `outcome`.
pub fn is_point_mass(probs: &[f64], outcome: u32) -> bool {
    probs
        .iter()
        .enumerate()
        .all(|(k, &p)| if k as u32 == outcome { (p - 1.0).abs() < TOLERANCE } else { p < TOLERANCE })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::generators;
    use crate::frame::CliffordGate;
    use crate::oracle::dense::gate_unitary;
    use crate::rng::Randomness;

    #[test]
    fn generators_conjugate_as_their_matrices() {
        for d in [3u32, 5, 7] {
            let f = gate_unitary(&CliffordGate::Hadamard(0), 1, d).unwrap();
            assert!(conjugation_check(&f, &generators::fourier(1, 0, d)));
            let p = gate_unitary(&CliffordGate::Phase(0), 1, d).unwrap();
            assert!(conjugation_check(&p, &generators::phase(1, 0, d)));
            let c = gate_unitary(&CliffordGate::Cnot { control: 0, target: 1 }, 2, d).unwrap();
            assert!(conjugation_check(&c, &generators::cnot(2, 0, 1, d)));
            let c = gate_unitary(&CliffordGate::Cnot { control: 1, target: 0 }, 2, d).unwrap();
            assert!(conjugation_check(&c, &generators::cnot(2, 1, 0, d)));
        }
    }

    #[test]
    fn linear_phase_candidate_is_rejected() {
        // diag(ω^q) is just Z, which commutes with Z and maps X to ωX
        let z = weyl_operator(&[0], &[1], 3);
        assert!(!conjugation_check(&z, &generators::phase(1, 0, 3)));
        assert!(conjugation_check(&DenseMatrix::identity(9), &ZMatrix::identity(4, 3)));
    }

    #[test]
    fn wrong_matrix_is_rejected() {
        let f = gate_unitary(&CliffordGate::Hadamard(0), 1, 5).unwrap();
        assert!(!conjugation_check(&f, &generators::fourier_inverse(1, 0, 5)));
    }

    #[test]
    fn fresh_frame_is_stabilized() {
        let f = StabilizerFrame::new(2, 3).unwrap();
        let s = DenseState::new(2, 3).unwrap();
        assert!(stabilizer_check(&f, &s).unwrap());
        check_wigner_support(&f, &s).unwrap();
    }

    #[test]
    fn post_measurement_frame_fixes_one_one() {
        let mut f = StabilizerFrame::new(2, 3).unwrap();
        f.apply_hadamard(0).unwrap();
        f.apply_cnot(0, 1).unwrap();
        f.measure_z(0, Randomness::Forced(1)).unwrap();
        let s = DenseState::basis(2, 3, &[1, 1]).unwrap();
        assert!(stabilizer_check(&f, &s).unwrap());
        check_wigner_support(&f, &s).unwrap();
    }

    #[test]
    fn corrupted_phase_is_detected() {
        let mut f = StabilizerFrame::new(2, 3).unwrap();
        f.apply_hadamard(0).unwrap();
        let s = {
            let mut s = DenseState::new(2, 3).unwrap();
            s.apply_fourier(0).unwrap();
            s
        };
        assert!(stabilizer_check(&f, &s).unwrap());
        let mut r = f.r().clone();
        r.set(3, r.get(3) + crate::algebra::ZMod::one(3));
        let bad = StabilizerFrame::from_parts(f.phi().clone(), r).unwrap();
        assert!(!stabilizer_check(&bad, &s).unwrap());
    }

    #[test]
    fn mixed_rows_need_the_half_overlap_term() {
        // F then P' gives a bottom row with both p and q parts
        let mut f = StabilizerFrame::new(1, 5).unwrap();
        let mut s = DenseState::new(1, 5).unwrap();
        for g in [CliffordGate::Hadamard(0), CliffordGate::Phase(0), CliffordGate::Hadamard(0)] {
            f.apply(&g).unwrap();
            s.apply_gate(&g).unwrap();
        }
        let row = f.phi().row(1);
        assert!(row.as_slice()[0] != 0 && row.as_slice()[1] != 0);
        assert!(stabilizer_check(&f, &s).unwrap());
        // without the overlap correction the same row would not fix the state
        let op = frame_stabilizer(&f, 0);
        let naive = WeylOperator::new(op.a.clone(), op.b.clone(), {
            let r = f.r().as_slice()[1];
            (10 - 2 * r) % 10
        });
        let mut image = s.clone();
        naive.apply(&mut image);
        assert!(image.max_abs_diff(&s) > 1e-3);
    }

    #[test]
    fn translations_match_dense_states() {
        let mut f = StabilizerFrame::new(1, 3).unwrap();
        f.apply_weyl_translation(&[0], &[1]).unwrap();
        let mut s = DenseState::new(1, 3).unwrap();
        s.apply_gate(&CliffordGate::WeylTranslation { xpow: vec![0], zpow: vec![1] })
            .unwrap();
        assert!(stabilizer_check(&f, &s).unwrap());

        let mut g = StabilizerFrame::new(1, 3).unwrap();
        g.apply_weyl_translation(&[1], &[0]).unwrap();
        let one = DenseState::basis(1, 3, &[1]).unwrap();
        assert!(stabilizer_check(&g, &one).unwrap());
        check_wigner_support(&g, &one).unwrap();
        let support = g.wigner_support().unwrap();
        assert!(support.iter().all(|x| x.as_slice()[1] == 1));
    }

    #[test]
    fn qubit_checks() {
        let mut t = QubitTableau::new(2).unwrap();
        let mut s = DenseState::new(2, 2).unwrap();
        t.apply_h(0).unwrap();
        s.apply_fourier(0).unwrap();
        t.apply_s(0).unwrap();
        s.apply_phase(0).unwrap();
        t.apply_cnot(0, 1).unwrap();
        s.apply_cnot(0, 1).unwrap();
        assert!(qubit_stabilizer_check(&t, &s).unwrap());
        t.apply_z(1).unwrap();
        assert!(!qubit_stabilizer_check(&t, &s).unwrap());
    }

    #[test]
    fn point_mass() {
        assert!(is_point_mass(&[0.0, 1.0, 0.0], 1));
        assert!(!is_point_mass(&[0.5, 0.5, 0.0], 0));
    }
}
