pub mod arithfn;
pub mod cli;
pub mod classical;
pub mod error;
pub mod favard;
pub mod grid;
pub mod poly;
pub mod scalar;
pub mod turan;
pub mod zeros;

pub use arithfn::ArithmeticFunctionSpec;
pub use error::{Error, Result};
pub use scalar::{Precision, Scalar, Sign};
pub use poly::{DensePolynomial, GeneratedFamily, GenerationMethod};
