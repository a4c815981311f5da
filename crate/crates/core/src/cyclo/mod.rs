//! Exact arithmetic in cyclotomic fields.

mod field;
mod matrix;
pub mod modular;
mod num;

pub use field::{cyclotomic_polynomial, CyclotomicField, ModularImage};
pub use matrix::CycMatrix;
pub use num::CycNum;
