//! Path realizations of level-1 perfect crystals for six affine types:
//! Demazure crystals and characters, one-dimensional sums, their closed
//! q-multinomial forms, Kostka-Foulkes polynomials and string functions.
//!
//! Everything is exact: q-series are [`qring::LaurentPoly`] values with
//! big-integer coefficients and half-integer exponents.

pub mod crystals;
pub mod demazure;
pub mod error;
pub mod formulas;
pub mod onedsums;
pub mod paths;
pub mod qring;
pub mod tensor;
pub mod weights;

pub use error::{Error, Result};
