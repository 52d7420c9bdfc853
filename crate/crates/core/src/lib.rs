//! Dense tensors over exact and floating-point fields, the truncated tensor
//! algebra, signatures of piecewise-linear paths, matrix rank decompositions
//! and factoring of tensor-product expressions into fewer terms.
//!
//! The `examples/` directory walks through each module; the `tenfac` binary
//! exposes the same operations from the command line.

pub mod algebra;
pub mod cli;
pub mod error;
pub mod expr;
pub mod json;
pub mod rank2;
pub mod scalar;
pub mod signature;
pub mod tensor;
