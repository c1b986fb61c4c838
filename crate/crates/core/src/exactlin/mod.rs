//! Exact rational linear algebra: the scalar field, dense matrices,
//! elimination, kernels, symmetric forms and subspaces.

mod form;
mod matrix;
mod rational;
mod reduce;
mod subspace;

pub use form::{NotSymmetric, Signature, SymmetricForm};
pub use matrix::Matrix;
pub use rational::{
    add, axpy, display_rational, dot, format_rational, int, ints, is_zero_vec, one, parse_rational, rat,
    scale, sign, sub, unit_vec, zero, zero_vec, ParseRationalError, Rational,
};
pub use reduce::{
    inverse, min_norm_preimage, nullspace, rank, reducer_of, row_space, rref, solve, NotInColumnSpace,
    RowReducer,
};
pub use subspace::{DimensionMismatch, Subspace};
