//! Exact polynomials in the plane order `q` and linear expressions in the
//! superfiguration counts.

mod expr;
mod qpoly;

pub use expr::{Basis, CountExpression};
pub use qpoly::QPoly;
