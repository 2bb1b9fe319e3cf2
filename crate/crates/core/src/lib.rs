//! Exact residue calculus over hyperplane arrangements.
//!
//! The crate computes iterated and Jeffrey-Kirwan residues of rational
//! functions with poles on an arrangement of integer linear forms, and uses
//! them to evaluate constant terms of multidimensional Eisenstein series:
//! sums `sum' e^{2 i pi <t, n>} / prod <alpha_j, n>^{m_j}` over the regular
//! points of a lattice, returned as an exact rational times a power of
//! `2 i pi`. A brute-force numeric [`oracle`] is included for cross-checks.

pub mod arrangement;
pub mod cli;
pub mod eisenstein;
pub mod error;
pub mod oracle;
pub mod ratlinalg;
pub mod residues;
pub mod series;

pub use arrangement::{Arrangement, DiagonalBasis, LinearForm, OrderedBasis};
pub use error::{Error, Result};
pub use ratlinalg::Rational;
pub use residues::{RationalFunction, SimpleElement};
