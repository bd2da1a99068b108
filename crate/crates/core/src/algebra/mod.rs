//! Exact linear algebra over ℤ/dℤ and the symplectic form on phase space.

pub mod matrix;
pub mod symplectic;
pub mod zmod;

pub use matrix::{mat_mul, mat_vec, AffineSolution, ZMatrix};
pub use symplectic::{
    generators, is_symplectic, symplectic_inverse, symplectic_product, SymplecticForm,
};
pub use zmod::{check_odd_prime, is_prime, mod_inverse, reduce, ZMod, ZVector};
