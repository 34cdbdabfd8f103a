//! Selberg zeta functions of infinite-area Hecke triangle surfaces computed as
//! Fredholm determinants of discretised transfer operators.

// negated comparisons are used on purpose: they also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod moebius;
pub mod specialfun;
pub mod domains;
pub mod layout;
pub mod symbolic;
pub mod transferop;
pub mod zeta;
pub mod resonances;

pub use error::{Error, Result};

pub type C64 = num_complex::Complex64;
