use super::field::{FieldSpec, Scalar};
use super::matrix::{rref_rows, Matrix};

/// A subspace of `k^ambient`, stored as the nonzero rows of its reduced row
/// echelon basis. Equal subspaces have identical representations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: FieldSpec, ambient: usize) -> Self {
        Subspace { ambient, basis: Matrix::zeros(field, 0, ambient), pivots: Vec::new() }
    }

    pub fn full(field: FieldSpec, ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::identity(field, ambient),
            pivots: (0..ambient).collect(),
        }
    }

    pub fn from_vectors<I>(field: FieldSpec, ambient: usize, vectors: I) -> Self
    where
        I: IntoIterator<Item = Vec<Scalar>>,
    {
        let mut rows: Vec<Vec<Scalar>> = vectors.into_iter().collect();
        for r in &rows {
            assert_eq!(r.len(), ambient, "vector length differs from ambient dimension");
        }
        let pivots = rref_rows(&mut rows, ambient);
        rows.truncate(pivots.len());
        Subspace { ambient, basis: Matrix::from_rows(field, ambient, &rows), pivots }
    }

    pub fn field(&self) -> FieldSpec {
        self.basis.field()
    }
    pub fn ambient(&self) -> usize {
        self.ambient
    }
    pub fn dim(&self) -> usize {
        self.pivots.len()
    }
    pub fn codim(&self) -> usize {
        self.ambient - self.dim()
    }
    pub fn is_zero(&self) -> bool {
        self.pivots.is_empty()
    }
    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }
    /// RREF basis, one vector per row.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }
    pub fn vectors(&self) -> Vec<Vec<Scalar>> {
        self.basis.row_vecs()
    }
    pub fn vector(&self, i: usize) -> Vec<Scalar> {
        self.basis.row(i).to_vec()
    }

    /// Coordinates of `v` in the canonical basis, or `None` if `v` is not in
    /// the subspace. With an RREF basis the candidate coordinates are the
    /// entries of `v` at the pivot columns.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(v.len(), self.ambient, "vector length differs from ambient dimension");
        let coords: Vec<Scalar> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut residual = v.to_vec();
        for (c, row) in coords.iter().zip(0..self.dim()) {
            for (x, b) in residual.iter_mut().zip(self.basis.row(row)) {
                x.sub_product(c, b);
            }
        }
        residual.iter().all(Scalar::is_zero).then_some(coords)
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.vectors().iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient, "ambient mismatch");
        let mut vs = self.vectors();
        vs.extend(other.vectors());
        Subspace::from_vectors(self.field(), self.ambient, vs)
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient, "ambient mismatch");
        let field = self.field();
        // x in both iff x = a.U = b.W; solve [U^T | -W^T] (a, b) = 0.
        let ut = self.basis.transpose();
        let wt = other.basis.transpose().scale(&field.from_i64(-1));
        let ker = ut.hstack(&wt).kernel();
        let vectors = ker.vectors().into_iter().map(|ab| ut.mul_vec(&ab[..self.dim()]));
        Subspace::from_vectors(field, self.ambient, vectors)
    }

    /// Image of the subspace under a linear map with `map.cols() == ambient`.
    pub fn map(&self, map: &Matrix) -> Subspace {
        assert_eq!(map.cols(), self.ambient, "map source dimension mismatch");
        Subspace::from_vectors(
            self.field(),
            map.rows(),
            self.vectors().iter().map(|v| map.mul_vec(v)),
        )
    }

    /// Whether `map` sends the subspace into itself.
    pub fn is_stable_under(&self, map: &Matrix) -> bool {
        self.vectors().iter().all(|v| self.contains(&map.mul_vec(v)))
    }

    /// Matrix whose columns are the basis vectors (ambient x dim).
    pub fn basis_columns(&self) -> Matrix {
        self.basis.transpose()
    }

    pub fn to_json(&self) -> serde_json::Value {
        self.basis.to_json()
    }
}

/// A quotient `k^ambient / killed` with explicit coordinates.
///
/// Quotient coordinates are the non-pivot columns of the killed subspace;
/// `section` sends a quotient coordinate vector to the representative that is
/// zero on pivot columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientSpace {
    pub ambient: usize,
    pub killed: Subspace,
    /// (quotient dim) x ambient
    pub projection: Matrix,
    /// ambient x (quotient dim)
    pub section: Matrix,
    /// Ambient coordinates used as quotient coordinates.
    pub free_columns: Vec<usize>,
}

impl QuotientSpace {
    pub fn dim(&self) -> usize {
        self.free_columns.len()
    }

    pub fn project(&self, v: &[Scalar]) -> Vec<Scalar> {
        self.projection.mul_vec(v)
    }

    pub fn lift(&self, q: &[Scalar]) -> Vec<Scalar> {
        self.section.mul_vec(q)
    }

    /// Induced endomorphism `projection * map * section`, valid when `map`
    /// preserves `killed`.
    pub fn induced(&self, map: &Matrix) -> Matrix {
        self.projection.mul(map).mul(&self.section)
    }
}

pub fn quotient_of(ambient: usize, killed: &Subspace) -> QuotientSpace {
    assert_eq!(killed.ambient(), ambient, "killed subspace lives in a different space");
    let field = killed.field();
    let mut is_pivot = vec![false; ambient];
    for &p in killed.pivots() {
        is_pivot[p] = true;
    }
    let free_columns: Vec<usize> = (0..ambient).filter(|&c| !is_pivot[c]).collect();
    let q = free_columns.len();
    let mut projection = Matrix::zeros(field, q, ambient);
    let mut section = Matrix::zeros(field, ambient, q);
    for (j, &c) in free_columns.iter().enumerate() {
        projection.set(j, c, field.one());
        section.set(c, j, field.one());
        for (r, &p) in killed.pivots().iter().enumerate() {
            let coeff = killed.basis().get(r, c);
            if !coeff.is_zero() {
                projection.set(j, p, -coeff);
            }
        }
    }
    QuotientSpace { ambient, killed: killed.clone(), projection, section, free_columns }
}

/// Incrementally intersects solution spaces of homogeneous linear constraints.
///
/// Starts from the full space `k^unknowns`. Each constraint is a linear map
/// given as a closure; the current basis is pushed through it and the
/// combinations with zero residual are kept. This avoids materializing the
/// full stacked coefficient matrix.
pub struct HomogeneousSolver {
    field: FieldSpec,
    unknowns: usize,
    basis: Vec<Vec<Scalar>>,
}

impl HomogeneousSolver {
    pub fn new(field: FieldSpec, unknowns: usize) -> Self {
        let basis = Matrix::identity(field, unknowns).row_vecs();
        HomogeneousSolver { field, unknowns, basis }
    }

    pub fn from_subspace(space: &Subspace) -> Self {
        HomogeneousSolver {
            field: space.field(),
            unknowns: space.ambient(),
            basis: space.vectors(),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Keeps the solutions `x` with `residual(x) = 0`. `residual` must be linear.
    pub fn constrain<F>(&mut self, residual: F)
    where
        F: Fn(&[Scalar]) -> Vec<Scalar>,
    {
        if self.basis.is_empty() {
            return;
        }
        let columns: Vec<Vec<Scalar>> = self.basis.iter().map(|b| residual(b)).collect();
        let len = columns[0].len();
        if columns.iter().all(|c| c.iter().all(Scalar::is_zero)) {
            return;
        }
        let m = Matrix::from_columns(self.field, len, &columns);
        let ker = m.kernel();
        self.basis = ker
            .vectors()
            .iter()
            .map(|y| {
                let mut v = vec![self.field.zero(); self.unknowns];
                for (c, b) in y.iter().zip(&self.basis) {
                    if c.is_zero() {
                        continue;
                    }
                    for (x, bb) in v.iter_mut().zip(b) {
                        x.add_product(c, bb);
                    }
                }
                v
            })
            .collect();
    }

    pub fn finish(self) -> Subspace {
        Subspace::from_vectors(self.field, self.unknowns, self.basis)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldSpec = FieldSpec::Rationals;

    fn v(xs: &[i64]) -> Vec<Scalar> {
        xs.iter().map(|&x| Q.from_i64(x)).collect()
    }

    #[test]
    fn canonical_form_is_independent_of_spanning_set() {
        let a = Subspace::from_vectors(Q, 3, vec![v(&[1, 1, 0]), v(&[0, 1, 1])]);
        let b = Subspace::from_vectors(Q, 3, vec![v(&[1, 2, 1]), v(&[2, 1, -1]), v(&[1, 1, 0])]);
        assert_eq!(a, b);
    }

    #[test]
    fn quotient_trivial_cases() {
        let q = quotient_of(3, &Subspace::zero(Q, 3));
        assert!(q.projection.is_identity());
        let q = quotient_of(3, &Subspace::full(Q, 3));
        assert_eq!(q.dim(), 0);
    }

    #[test]
    fn quotient_by_diagonal_line() {
        let killed = Subspace::from_vectors(Q, 2, vec![v(&[1, 1])]);
        let q = quotient_of(2, &killed);
        assert_eq!(q.dim(), 1);
        assert!(q.projection.mul(&q.section).is_identity());
        // Kernel of the projection is the killed line.
        assert_eq!(q.projection.kernel(), killed);
        // The quotient generator lifts to the representative (0, 1).
        assert_eq!(q.lift(&v(&[1])), v(&[0, 1]));
    }

    #[test]
    fn intersection_and_sum() {
        let a = Subspace::from_vectors(Q, 3, vec![v(&[1, 0, 0]), v(&[0, 1, 0])]);
        let b = Subspace::from_vectors(Q, 3, vec![v(&[0, 1, 0]), v(&[0, 0, 1])]);
        assert_eq!(a.intersection(&b), Subspace::from_vectors(Q, 3, vec![v(&[0, 1, 0])]));
        assert!(a.sum(&b).is_full());
    }

    #[test]
    fn homogeneous_solver_matches_kernel() {
        let m = Matrix::from_i64(Q, &[&[1, 2, 3], &[0, 1, 1]]);
        let mut s = HomogeneousSolver::new(Q, 3);
        s.constrain(|x| vec![m.mul_vec(x)[0].clone()]);
        s.constrain(|x| vec![m.mul_vec(x)[1].clone()]);
        assert_eq!(s.finish(), m.kernel());
    }
}
