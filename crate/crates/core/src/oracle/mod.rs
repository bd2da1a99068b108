//! Brute-force reference simulation on explicit state vectors.
//!
//! Everything here is exponential in `n` and guarded by [`ORACLE_LIMIT`].

pub mod checks;
pub mod dense;
pub mod wigner;

pub use checks::{
    check_wigner_support, conjugation_check, frame_stabilizer, is_point_mass,
    qubit_stabilizer_check, stabilizer_check, tableau_stabilizer,
};
pub use dense::{
    gate_unitary, weyl_operator, DenseMatrix, DenseState, WeylOperator, ORACLE_LIMIT, TOLERANCE,
};
pub use wigner::{discrete_wigner, WignerTable};
