//! A numerical laboratory for the free classical Dirac field.
//!
//! The field is represented on a periodic cubic lattice through its
//! plane-wave mode amplitudes, and evolved exactly by phase rotation. On top
//! of that representation the crate computes two families of observables:
//!
//! * the *original* ones, where every mode carries negative charge and the
//!   negative-frequency modes carry negative energy, and
//! * the *revised* ones, where the field is split into an electron field
//!   (positive frequency) and a positron field (conjugate of the negative
//!   frequency part), both with positive energy and opposite charges.
//!
//! Alongside the Dirac field there are four smaller engines:
//!
//! * [`em`]: the electromagnetic φ-field built from `E + iB`, whose energy
//!   takes the same sign structure as the revised Dirac energy,
//! * [`fock`]: exact finite-mode fermionic Fock space (Jordan–Wigner), with the
//!   naive and normal-ordered Hamiltonian and charge operators,
//! * [`grassmann`]: a sparse Grassmann algebra used to lift complex field
//!   configurations to anticommuting ones,
//! * [`experiment`]: config-driven runners behind the `diraclab` binary.
//!
//! Units are carried explicitly in [`Units`]; the defaults are natural units
//! (ħ = c = m = e = 1).

// Index loops mirror the component formulas; `!(x > 0.0)` also rejects NaN.
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod em;
pub mod error;
pub mod experiment;
pub mod field;
pub mod fock;
pub mod grassmann;
pub mod lattice;
pub mod observables;
pub mod spinor;
pub mod units;

pub use error::{Error, Result};
pub use field::{FieldSplit, FieldState, ModeAmplitudes};
pub use lattice::{Lattice, Units};

pub use num_complex::Complex64;
