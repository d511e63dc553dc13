use std::sync::Arc;

use serde_json::json;

use super::structure::Algebra;
use crate::error::{Error, Result};
use crate::linalg::{quotient_of, FieldSpec, HomogeneousSolver, Matrix, QuotientSpace, Scalar, Subspace};
use crate::report::AuditReport;

/// A finite-dimensional left module: one action matrix per algebra basis element.
#[derive(Clone, Debug)]
pub struct AlgebraModule {
    algebra: Arc<Algebra>,
    dim: usize,
    action: Vec<Matrix>,
}

impl PartialEq for AlgebraModule {
    fn eq(&self, other: &Self) -> bool {
        same_algebra(&self.algebra, &other.algebra) && self.dim == other.dim && self.action == other.action
    }
}

pub(crate) fn same_algebra(a: &Arc<Algebra>, b: &Arc<Algebra>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl AlgebraModule {
    /// Builds a module after shape checks; axioms are checked by [`validate_module`].
    pub fn new(algebra: Arc<Algebra>, dim: usize, action: Vec<Matrix>) -> Result<Self> {
        if action.len() != algebra.dim() {
            return Err(Error::invalid(format!(
                "module has {} action matrices, algebra has dimension {}",
                action.len(),
                algebra.dim()
            )));
        }
        for (i, m) in action.iter().enumerate() {
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::invalid(format!(
                    "action matrix {i} is {}x{}, expected {dim}x{dim}",
                    m.rows(),
                    m.cols()
                )));
            }
            if m.field() != algebra.field() {
                return Err(Error::invalid(format!("action matrix {i} is over another field")));
            }
        }
        Ok(AlgebraModule { algebra, dim, action })
    }

    pub fn regular(algebra: Arc<Algebra>) -> Self {
        let action = (0..algebra.dim()).map(|i| algebra.left_mult_by_basis(i).clone()).collect();
        let dim = algebra.dim();
        AlgebraModule { algebra, dim, action }
    }

    pub fn zero(algebra: Arc<Algebra>) -> Self {
        let f = algebra.field();
        let action = (0..algebra.dim()).map(|_| Matrix::zeros(f, 0, 0)).collect();
        AlgebraModule { algebra, dim: 0, action }
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }
    pub fn field(&self) -> FieldSpec {
        self.algebra.field()
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn action(&self) -> &[Matrix] {
        &self.action
    }

    /// Action matrix of an arbitrary algebra element.
    pub fn act(&self, x: &[Scalar]) -> Matrix {
        Matrix::combination(self.field(), self.dim, self.dim, x, &self.action)
    }

    pub fn direct_sum(&self, other: &AlgebraModule) -> AlgebraModule {
        let d = self.dim + other.dim;
        let action = self
            .action
            .iter()
            .zip(&other.action)
            .map(|(a, b)| {
                let mut m = Matrix::zeros(self.field(), d, d);
                m.set_block(0, 0, a);
                m.set_block(self.dim, self.dim, b);
                m
            })
            .collect();
        AlgebraModule { algebra: self.algebra.clone(), dim: d, action }
    }

    /// Module structure on an action-stable subspace, in its canonical basis.
    pub fn submodule(&self, sub: &Subspace) -> Result<AlgebraModule> {
        let basis = sub.vectors();
        let mut action = Vec::with_capacity(self.action.len());
        for rho in &self.action {
            let mut cols = Vec::with_capacity(basis.len());
            for b in &basis {
                let image = rho.mul_vec(b);
                cols.push(sub.coordinates(&image).ok_or_else(|| {
                    Error::inconsistent("subspace is not stable under the action")
                })?);
            }
            action.push(Matrix::from_columns(self.field(), basis.len(), &cols));
        }
        Ok(AlgebraModule { algebra: self.algebra.clone(), dim: basis.len(), action })
    }

    /// Quotient by an action-stable subspace, with the quotient coordinates.
    pub fn quotient(&self, sub: &Subspace) -> Result<(AlgebraModule, QuotientSpace)> {
        let q = quotient_of(self.dim, sub);
        let mut action = Vec::with_capacity(self.action.len());
        for rho in &self.action {
            if !sub.is_stable_under(rho) {
                return Err(Error::inconsistent("quotient by a non-submodule"));
            }
            action.push(q.induced(rho));
        }
        Ok((AlgebraModule { algebra: self.algebra.clone(), dim: q.dim(), action }, q))
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "dim": self.dim,
            "action": self.action.iter().map(Matrix::to_json).collect::<Vec<_>>(),
        })
    }
}

/// Checks `rho(e_i) rho(e_j) = sum_k c_ij^k rho(e_k)` and `rho(1) = id`.
pub fn validate_module(v: &AlgebraModule) -> AuditReport {
    let a = v.algebra();
    let n = a.dim();
    let mut report = AuditReport::new("module");
    let mut bad = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let lhs = v.action[i].mul(&v.action[j]);
            let coeffs: Vec<Scalar> = (0..n).map(|k| a.constant(i, j, k).clone()).collect();
            if lhs != v.act(&coeffs) {
                bad.push(json!([i, j]));
            }
        }
    }
    report.check(
        "multiplicativity",
        "module-action",
        bad.is_empty(),
        json!({ "violating_pairs": bad }),
    );
    report.check(
        "unit-acts-as-identity",
        "module-action",
        v.act(a.unit()).is_identity(),
        json!(null),
    );
    report
}

/// A module homomorphism, stored as its matrix (target dim x source dim).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleMap {
    pub matrix: Matrix,
}

impl ModuleMap {
    pub fn new(matrix: Matrix) -> Self {
        ModuleMap { matrix }
    }

    pub fn is_intertwining(&self, source: &AlgebraModule, target: &AlgebraModule) -> bool {
        self.matrix.rows() == target.dim()
            && self.matrix.cols() == source.dim()
            && source
                .action()
                .iter()
                .zip(target.action())
                .all(|(s, t)| self.matrix.mul(s) == t.mul(&self.matrix))
    }
}

/// A basis of `Hom_A(V, W)` together with coordinates.
///
/// Maps are flattened row-major (`x[r * dim V + c]` is entry `(r, c)`) and the
/// basis is the canonical RREF basis of the solution space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomSpace {
    source_dim: usize,
    target_dim: usize,
    span: Subspace,
    basis: Vec<Matrix>,
}

impl HomSpace {
    pub fn from_span(source_dim: usize, target_dim: usize, span: Subspace) -> Self {
        assert_eq!(span.ambient(), source_dim * target_dim);
        let basis = span
            .vectors()
            .into_iter()
            .map(|v| Matrix::from_vec(span.field(), target_dim, source_dim, v))
            .collect();
        HomSpace { source_dim, target_dim, span, basis }
    }

    /// Canonical basis of the span of the given maps.
    pub fn from_maps(field: FieldSpec, source_dim: usize, target_dim: usize, maps: &[Matrix]) -> Self {
        let span = Subspace::from_vectors(
            field,
            source_dim * target_dim,
            maps.iter().map(|m| m.data().to_vec()),
        );
        HomSpace::from_span(source_dim, target_dim, span)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }
    pub fn source_dim(&self) -> usize {
        self.source_dim
    }
    pub fn target_dim(&self) -> usize {
        self.target_dim
    }
    pub fn basis(&self) -> &[Matrix] {
        &self.basis
    }
    pub fn span(&self) -> &Subspace {
        &self.span
    }

    pub fn maps(&self) -> Vec<ModuleMap> {
        self.basis.iter().cloned().map(ModuleMap::new).collect()
    }

    /// Coordinates of a map in the basis; `None` if it is not in the space.
    pub fn coordinates(&self, m: &Matrix) -> Option<Vec<Scalar>> {
        assert_eq!((m.rows(), m.cols()), (self.target_dim, self.source_dim), "map shape mismatch");
        self.span.coordinates(m.data())
    }

    pub fn combine(&self, coords: &[Scalar]) -> Matrix {
        Matrix::combination(self.span.field(), self.target_dim, self.source_dim, coords, &self.basis)
    }
}

/// `Hom_A(V, W)` as the solution space of the intertwining equations
/// `X rho_V(e_i) = rho_W(e_i) X`.
pub fn hom_space(v: &AlgebraModule, w: &AlgebraModule) -> HomSpace {
    assert!(same_algebra(v.algebra(), w.algebra()), "modules over different algebras");
    let field = v.field();
    let (dv, dw) = (v.dim(), w.dim());
    let mut solver = HomogeneousSolver::new(field, dv * dw);
    for (rv, rw) in v.action().iter().zip(w.action()) {
        if rv.is_identity() && rw.is_identity() {
            continue;
        }
        solver.constrain(|x| {
            let xm = Matrix::from_vec(field, dw, dv, x.to_vec());
            xm.mul(rv).sub(&rw.mul(&xm)).into_data()
        });
    }
    HomSpace::from_span(dv, dw, solver.finish())
}

/// Smallest action-stable subspace containing `vectors`.
pub fn generated_submodule(v: &AlgebraModule, vectors: &[Vec<Scalar>]) -> Subspace {
    spin(v.field(), v.dim(), v.action(), vectors)
}

/// Closure of a span under a set of matrices; iterates until the dimension
/// stabilizes (at most `dim` rounds).
pub fn spin(field: FieldSpec, dim: usize, mats: &[Matrix], vectors: &[Vec<Scalar>]) -> Subspace {
    let mut current = Subspace::from_vectors(field, dim, vectors.iter().cloned());
    let mut frontier = current.vectors();
    while !frontier.is_empty() && !current.is_full() {
        let mut next = Vec::new();
        for v in &frontier {
            for m in mats {
                let image = m.mul_vec(v);
                if !current.contains(&image) {
                    current = current.sum(&Subspace::from_vectors(field, dim, vec![image.clone()]));
                    next.push(image);
                }
            }
        }
        frontier = next;
    }
    current
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::algebras;
    use crate::linalg::unit_vector;

    #[test]
    fn regular_module_validates_and_transpose_breaks_it() {
        let a = Arc::new(algebras::matrix_full(2, FieldSpec::Rationals).unwrap());
        let reg = AlgebraModule::regular(a.clone());
        assert!(validate_module(&reg).passed());

        let mut action = reg.action().to_vec();
        action[1] = action[1].transpose();
        let broken = AlgebraModule::new(a.clone(), 4, action).unwrap();
        assert!(!validate_module(&broken).passed());

        assert!(validate_module(&AlgebraModule::zero(a)).passed());
    }

    #[test]
    fn hom_from_regular_has_module_dimension() {
        let a = Arc::new(algebras::upper_triangular(2, FieldSpec::Rationals).unwrap());
        let reg = AlgebraModule::regular(a.clone());
        let s1 = algebras::upper_triangular_simple(&a, 2, 0);
        assert_eq!(hom_space(&reg, &reg).dim(), 3);
        assert_eq!(hom_space(&reg, &s1).dim(), 1);
    }

    #[test]
    fn no_maps_between_distinct_simples_of_t2() {
        let a = Arc::new(algebras::upper_triangular(2, FieldSpec::Rationals).unwrap());
        let s1 = algebras::upper_triangular_simple(&a, 2, 0);
        let s2 = algebras::upper_triangular_simple(&a, 2, 1);
        assert_eq!(hom_space(&s1, &s2).dim(), 0);
        assert_eq!(hom_space(&s2, &s1).dim(), 0);
        assert_eq!(hom_space(&s1, &s1).dim(), 1);
    }

    #[test]
    fn spin_trivial_cases() {
        let a = Arc::new(algebras::matrix_full(2, FieldSpec::Rationals).unwrap());
        let reg = AlgebraModule::regular(a.clone());
        assert!(generated_submodule(&reg, &[]).is_zero());
        let all: Vec<_> = (0..4).map(|i| unit_vector(a.field(), 4, i)).collect();
        assert!(generated_submodule(&reg, &all).is_full());
        // The unit generates the regular module.
        assert!(generated_submodule(&reg, &[a.unit().to_vec()]).is_full());
    }
}
