//! Ring class polynomials from singular values of principal moduli at the
//! fixed points of Fricke-type elliptic involutions.

pub mod error;
pub mod exactpoly;
pub mod numerics;
pub mod quadforms;
pub mod elliptic;
pub mod eta;
pub mod hauptmodul;
pub mod classfield;
pub mod cli;

pub use error::{Error, Result};
