use serde_json::json;

use crate::error::{Error, Result};
use crate::linalg::{unit_vector, vector_to_json, FieldSpec, Matrix, Scalar};
use crate::report::AuditReport;

/// A finite-dimensional associative algebra given by structure constants:
/// `e_i * e_j = sum_k c[i][j][k] e_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebra {
    field: FieldSpec,
    dim: usize,
    /// Flattened `c[i][j][k]` at index `(i * n + j) * n + k`.
    structure: Vec<Scalar>,
    unit: Vec<Scalar>,
    left_mult: Vec<Matrix>,
}

impl Algebra {
    /// Builds an algebra after shape checks. Axioms are checked separately by
    /// [`validate_algebra`].
    pub fn new(field: FieldSpec, dim: usize, structure: Vec<Scalar>, unit: Vec<Scalar>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("zero-dimensional algebras have no unit"));
        }
        if structure.len() != dim * dim * dim {
            return Err(Error::invalid(format!(
                "structure array has {} entries, expected {}",
                structure.len(),
                dim * dim * dim
            )));
        }
        if unit.len() != dim {
            return Err(Error::invalid(format!(
                "unit vector has length {}, expected {dim}",
                unit.len()
            )));
        }
        if structure.iter().chain(&unit).any(|s| s.field() != field) {
            return Err(Error::invalid("scalars from a different field"));
        }
        let mut alg = Algebra { field, dim, structure, unit, left_mult: Vec::new() };
        alg.left_mult = (0..dim).map(|i| alg.left_mult_basis(i)).collect();
        Ok(alg)
    }

    /// Builds an algebra from a multiplication rule on basis indices.
    pub fn from_rule<F>(field: FieldSpec, dim: usize, unit: Vec<Scalar>, rule: F) -> Result<Self>
    where
        F: Fn(usize, usize) -> Vec<Scalar>,
    {
        let mut structure = Vec::with_capacity(dim * dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                let prod = rule(i, j);
                assert_eq!(prod.len(), dim);
                structure.extend(prod);
            }
        }
        Algebra::new(field, dim, structure, unit)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn unit(&self) -> &[Scalar] {
        &self.unit
    }
    pub fn structure(&self) -> &[Scalar] {
        &self.structure
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.structure[(i * self.dim + j) * self.dim + k]
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Scalar> {
        unit_vector(self.field, self.dim, i)
    }

    pub fn mul(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        self.left_mult(x).mul_vec(y)
    }

    fn left_mult_basis(&self, i: usize) -> Matrix {
        let n = self.dim;
        let mut m = Matrix::zeros(self.field, n, n);
        for j in 0..n {
            for k in 0..n {
                m.set(k, j, self.constant(i, j, k).clone());
            }
        }
        m
    }

    /// Matrix of `y -> x * y`.
    pub fn left_mult(&self, x: &[Scalar]) -> Matrix {
        Matrix::combination(self.field, self.dim, self.dim, x, &self.left_mult)
    }

    /// Left multiplication by basis element `e_i`; the regular representation.
    pub fn left_mult_by_basis(&self, i: usize) -> &Matrix {
        &self.left_mult[i]
    }

    /// Matrix of `y -> y * x`.
    pub fn right_mult(&self, x: &[Scalar]) -> Matrix {
        let n = self.dim;
        let mut m = Matrix::zeros(self.field, n, n);
        for j in 0..n {
            for k in 0..n {
                let mut acc = self.field.zero();
                for (i, xi) in x.iter().enumerate() {
                    acc.add_product(xi, self.constant(j, i, k));
                }
                m.set(k, j, acc);
            }
        }
        m
    }

    pub fn to_json(&self) -> serde_json::Value {
        let n = self.dim;
        let structure: Vec<serde_json::Value> = (0..n)
            .map(|i| {
                serde_json::Value::Array(
                    (0..n)
                        .map(|j| {
                            vector_to_json(&self.structure[(i * n + j) * n..(i * n + j + 1) * n])
                        })
                        .collect(),
                )
            })
            .collect();
        json!({ "dim": n, "structure": structure, "unit": vector_to_json(&self.unit) })
    }
}

/// Checks associativity on every basis triple and both unit laws.
pub fn validate_algebra(a: &Algebra) -> AuditReport {
    let n = a.dim();
    let mut report = AuditReport::new("algebra");
    let mut bad_triples = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let eij: Vec<Scalar> = (0..n).map(|m| a.constant(i, j, m).clone()).collect();
            for k in 0..n {
                // (e_i e_j) e_k versus e_i (e_j e_k)
                let lhs = a.right_mult(&a.basis_vector(k)).mul_vec(&eij);
                let ejk: Vec<Scalar> = (0..n).map(|m| a.constant(j, k, m).clone()).collect();
                let rhs = a.left_mult_by_basis(i).mul_vec(&ejk);
                if lhs != rhs {
                    bad_triples.push(json!([i, j, k]));
                }
            }
        }
    }
    report.check(
        "associativity",
        "associative-algebra",
        bad_triples.is_empty(),
        json!({ "violating_triples": bad_triples }),
    );

    let lu = a.left_mult(a.unit());
    let ru = a.right_mult(a.unit());
    let left_bad: Vec<usize> = (0..n).filter(|&j| lu.column(j) != a.basis_vector(j)).collect();
    let right_bad: Vec<usize> = (0..n).filter(|&j| ru.column(j) != a.basis_vector(j)).collect();
    report.check(
        "unit-law",
        "unital-algebra",
        left_bad.is_empty() && right_bad.is_empty(),
        json!({ "left_failures": left_bad, "right_failures": right_bad }),
    );
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::algebras;

    #[test]
    fn matrix_algebra_validates() {
        let a = algebras::matrix_full(2, FieldSpec::Rationals).unwrap();
        assert!(validate_algebra(&a).passed());
    }

    #[test]
    fn broken_associativity_names_triple() {
        let a = algebras::matrix_full(2, FieldSpec::Rationals).unwrap();
        // Perturb e_1 e_1 (basis index 1 is E_12, so E_12 E_12 = 0 normally).
        let mut structure = a.structure().to_vec();
        let q = FieldSpec::Rationals;
        structure[(4 + 1) * 4 + 3] = q.one();
        let b = Algebra::new(q, 4, structure, a.unit().to_vec()).unwrap();
        let r = validate_algebra(&b);
        assert!(!r.passed());
        let w = &r.find("associativity").unwrap().witness["violating_triples"];
        assert!(w.as_array().unwrap().contains(&json!([1, 1, 2])));
    }

    #[test]
    fn zero_unit_fails_unit_law() {
        let a = algebras::matrix_full(2, FieldSpec::Rationals).unwrap();
        let b = Algebra::new(a.field(), 4, a.structure().to_vec(), vec![a.field().zero(); 4]).unwrap();
        let r = validate_algebra(&b);
        assert_eq!(r.find("unit-law").unwrap().verdict, crate::report::Verdict::Fail);
    }

    #[test]
    fn shape_errors_are_rejected() {
        let q = FieldSpec::Rationals;
        assert!(Algebra::new(q, 2, vec![q.zero(); 7], vec![q.one(), q.zero()]).is_err());
        assert!(Algebra::new(q, 0, vec![], vec![]).is_err());
    }
}
