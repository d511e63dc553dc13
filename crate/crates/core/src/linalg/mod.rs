//! Exact dense linear algebra over the rationals and prime fields.
//!
//! Everything above this layer reduces to rank computations, so all bases are
//! kept canonical (reduced row echelon form) and no floating point is used.

mod field;
mod matrix;
mod subspace;

pub use field::{is_prime, FieldSpec, Scalar, MAX_CHARACTERISTIC};
pub use matrix::{tensor_product, Matrix, Rref};
pub use subspace::{quotient_of, HomogeneousSolver, QuotientSpace, Subspace};

/// Zero vector of length `n`.
pub fn zero_vector(field: FieldSpec, n: usize) -> Vec<Scalar> {
    vec![field.zero(); n]
}

/// Standard basis vector `e_i` of length `n`.
pub fn unit_vector(field: FieldSpec, n: usize, i: usize) -> Vec<Scalar> {
    let mut v = zero_vector(field, n);
    v[i] = field.one();
    v
}

pub fn vectors_to_json(vs: &[Vec<Scalar>]) -> serde_json::Value {
    serde_json::Value::Array(vs.iter().map(|v| vector_to_json(v)).collect())
}

pub fn vector_to_json(v: &[Scalar]) -> serde_json::Value {
    serde_json::Value::Array(v.iter().map(Scalar::to_json).collect())
}
