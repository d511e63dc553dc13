use std::sync::Arc;

use serde_json::json;

use super::module::{hom_space, same_algebra, spin, AlgebraModule, HomSpace, ModuleMap};
use super::structure::{validate_algebra, Algebra};
use crate::error::{Error, Result};
use crate::linalg::{vectors_to_json, HomogeneousSolver, Matrix, QuotientSpace, Scalar, Subspace};
use crate::report::AuditReport;

/// A left ideal with its generators and closed basis.
#[derive(Clone, Debug)]
pub struct LeftIdeal {
    algebra: Arc<Algebra>,
    generators: Vec<Vec<Scalar>>,
    basis: Subspace,
}

impl PartialEq for LeftIdeal {
    /// Ideals are identified by their subspace, not their generators.
    fn eq(&self, other: &Self) -> bool {
        same_algebra(&self.algebra, &other.algebra) && self.basis == other.basis
    }
}

impl LeftIdeal {
    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }
    pub fn generators(&self) -> &[Vec<Scalar>] {
        &self.generators
    }
    pub fn basis(&self) -> &Subspace {
        &self.basis
    }
    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn zero(algebra: Arc<Algebra>) -> Self {
        let basis = Subspace::zero(algebra.field(), algebra.dim());
        LeftIdeal { algebra, generators: Vec::new(), basis }
    }

    pub fn whole(algebra: Arc<Algebra>) -> Self {
        let gens = vec![algebra.unit().to_vec()];
        let basis = Subspace::full(algebra.field(), algebra.dim());
        LeftIdeal { algebra, generators: gens, basis }
    }

    pub fn contains_ideal(&self, other: &LeftIdeal) -> bool {
        self.basis.contains_subspace(&other.basis)
    }

    /// Whether `I + J = A`.
    pub fn is_comaximal_with(&self, other: &LeftIdeal) -> bool {
        self.basis.sum(&other.basis).is_full()
    }
}

/// Smallest left ideal containing `gens`: the closure of their span under
/// left multiplication by every basis element.
pub fn left_ideal_closure(a: &Arc<Algebra>, gens: &[Vec<Scalar>]) -> Result<LeftIdeal> {
    for (i, g) in gens.iter().enumerate() {
        if g.len() != a.dim() {
            return Err(Error::invalid(format!(
                "generator {i} has length {}, algebra has dimension {}",
                g.len(),
                a.dim()
            )));
        }
        if g.iter().any(|s| s.field() != a.field()) {
            return Err(Error::invalid(format!("generator {i} is over another field")));
        }
    }
    let mats: Vec<Matrix> = (0..a.dim()).map(|i| a.left_mult_by_basis(i).clone()).collect();
    let basis = spin(a.field(), a.dim(), &mats, gens);
    Ok(LeftIdeal { algebra: a.clone(), generators: gens.to_vec(), basis })
}

/// The cyclic module `A/I` with its quotient coordinates.
#[derive(Clone, Debug)]
pub struct CyclicModule {
    pub ideal: LeftIdeal,
    pub module: AlgebraModule,
    pub quotient: QuotientSpace,
}

impl CyclicModule {
    /// Class `x + I` in quotient coordinates.
    pub fn class_of(&self, x: &[Scalar]) -> Vec<Scalar> {
        self.quotient.project(x)
    }

    /// Class of the unit, `1 + I`.
    pub fn unit_class(&self) -> Vec<Scalar> {
        self.class_of(self.ideal.algebra().unit())
    }

    pub fn dim(&self) -> usize {
        self.module.dim()
    }
}

pub fn cyclic_module(a: &Arc<Algebra>, i: &LeftIdeal) -> Result<CyclicModule> {
    if !same_algebra(a, i.algebra()) {
        return Err(Error::invalid("ideal belongs to another algebra"));
    }
    let regular = AlgebraModule::regular(a.clone());
    let (module, quotient) = regular
        .quotient(i.basis())
        .map_err(|_| Error::inconsistent("ideal basis is not a left ideal"))?;
    Ok(CyclicModule { ideal: i.clone(), module, quotient })
}

/// `V^I = { v : I v = 0 }`, the joint kernel of the action of a basis of `I`.
pub fn invariant_subspace(v: &AlgebraModule, i: &LeftIdeal) -> Subspace {
    assert!(same_algebra(v.algebra(), i.algebra()), "ideal and module over different algebras");
    let mut solver = HomogeneousSolver::new(v.field(), v.dim());
    for b in i.basis().vectors() {
        let m = v.act(&b);
        solver.constrain(|x| m.mul_vec(x));
    }
    solver.finish()
}

/// `Hom_A(A/I, V)` through the invariants: `v in V^I` gives `a + I -> a v`.
///
/// Returns the same canonical basis as [`hom_space`] applied to `A/I`.
pub fn hom_from_cyclic(c: &CyclicModule, v: &AlgebraModule) -> HomSpace {
    let inv = invariant_subspace(v, &c.ideal);
    let maps: Vec<Matrix> = inv
        .vectors()
        .iter()
        .map(|x| {
            let cols: Vec<Vec<Scalar>> = c
                .quotient
                .free_columns
                .iter()
                .map(|&col| v.action()[col].mul_vec(x))
                .collect();
            Matrix::from_columns(v.field(), v.dim(), &cols)
        })
        .collect();
    HomSpace::from_maps(v.field(), c.dim(), v.dim(), &maps)
}

/// `{ x in A : J x subset I }`.
pub fn relative_normalizer(a: &Algebra, target: &LeftIdeal, source: &LeftIdeal) -> Subspace {
    let q = crate::linalg::quotient_of(a.dim(), target.basis());
    let mut solver = HomogeneousSolver::new(a.field(), a.dim());
    for b in source.basis().vectors() {
        let m = q.projection.mul(&a.left_mult(&b));
        solver.constrain(|x| m.mul_vec(x));
    }
    solver.finish()
}

/// `N_A(I) = { a : I a subset I }`.
pub fn normalizer(a: &Algebra, i: &LeftIdeal) -> Subspace {
    relative_normalizer(a, i, i)
}

/// `{ a + I : J a subset I }` inside `A/I` (quotient coordinates of `c`).
pub fn idealizer_space(a: &Algebra, c: &CyclicModule, source: &LeftIdeal) -> Subspace {
    relative_normalizer(a, &c.ideal, source).map(&c.quotient.projection)
}

/// The eigenring `S = N_A(I)/I` and its anti-isomorphism onto `End_A(A/I)`.
#[derive(Clone, Debug)]
pub struct Eigenring {
    pub algebra: Arc<Algebra>,
    /// The image of `N_A(I)` in `A/I`; its canonical basis is the basis of `S`.
    pub classes: Subspace,
    /// A representative in `N_A(I)` of each basis element of `S`.
    pub representatives: Vec<Vec<Scalar>>,
    /// `phi_a : b + I -> b a + I` for each basis representative `a`.
    pub phi: Vec<ModuleMap>,
    pub report: AuditReport,
}

impl Eigenring {
    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    /// Right action of the `j`-th basis element of `S` on `A/I`: `x + I -> x s_j + I`.
    pub fn right_action(&self, j: usize) -> &Matrix {
        &self.phi[j].matrix
    }
}

pub fn eigenring(a: &Arc<Algebra>, i: &LeftIdeal) -> Result<Eigenring> {
    let c = cyclic_module(a, i)?;
    eigenring_of(a, &c)
}

pub fn eigenring_of(a: &Arc<Algebra>, c: &CyclicModule) -> Result<Eigenring> {
    let field = a.field();
    let n_space = normalizer(a, &c.ideal);
    let classes = n_space.map(&c.quotient.projection);
    let representatives: Vec<Vec<Scalar>> =
        classes.vectors().iter().map(|w| c.quotient.lift(w)).collect();
    let d = representatives.len();
    for r in &representatives {
        if !n_space.contains(r) {
            return Err(Error::inconsistent("eigenring representative outside the normalizer"));
        }
    }

    let mut structure = Vec::with_capacity(d * d * d);
    for sj in &representatives {
        for sk in &representatives {
            let prod = c.class_of(&a.mul(sj, sk));
            let coords = classes.coordinates(&prod).ok_or_else(|| {
                Error::inconsistent("product of normalizer elements left the normalizer")
            })?;
            structure.extend(coords);
        }
    }
    let unit = classes
        .coordinates(&c.unit_class())
        .ok_or_else(|| Error::inconsistent("unit is not in the normalizer"))?;
    let s = Arc::new(Algebra::new(field, d, structure, unit)?);

    let phi: Vec<ModuleMap> = representatives
        .iter()
        .map(|r| ModuleMap::new(c.quotient.projection.mul(&a.right_mult(r)).mul(&c.quotient.section)))
        .collect();

    let mut report = AuditReport::new("eigenring");
    report.absorb("eigenring-algebra", validate_algebra(&s));

    let non_module: Vec<usize> =
        (0..d).filter(|&j| !phi[j].is_intertwining(&c.module, &c.module)).collect();
    report.check(
        "phi-is-module-map",
        "eigenring-acts-by-endomorphisms",
        non_module.is_empty(),
        json!({ "failing_basis_indices": non_module }),
    );

    let end = hom_space(&c.module, &c.module);
    let phi_span = HomSpace::from_maps(
        field,
        c.dim(),
        c.dim(),
        &phi.iter().map(|p| p.matrix.clone()).collect::<Vec<_>>(),
    );
    report.check(
        "phi-is-bijective",
        "eigenring-anti-isomorphic-to-endomorphisms",
        phi_span.dim() == d && d == end.dim() && phi_span.span() == end.span(),
        json!({ "eigenring_dim": d, "image_dim": phi_span.dim(), "end_dim": end.dim() }),
    );

    let mut reversed = Vec::new();
    for j in 0..d {
        for k in 0..d {
            let coeffs: Vec<Scalar> = (0..d).map(|l| s.constant(j, k, l).clone()).collect();
            let phi_prod = Matrix::combination(
                field,
                c.dim(),
                c.dim(),
                &coeffs,
                &phi.iter().map(|p| p.matrix.clone()).collect::<Vec<_>>(),
            );
            if phi_prod != phi[k].matrix.mul(&phi[j].matrix) {
                reversed.push(json!([j, k]));
            }
        }
    }
    report.check(
        "phi-reverses-products",
        "eigenring-anti-isomorphic-to-endomorphisms",
        reversed.is_empty(),
        json!({ "violating_pairs": reversed }),
    );
    if !report.passed() {
        return Err(Error::inconsistent(format!(
            "eigenring checks failed: {}",
            report.failures().map(|c| c.name.as_str()).collect::<Vec<_>>().join(", ")
        )));
    }
    report.pass("eigenring-representatives", "eigenring", vectors_to_json(&representatives));
    Ok(Eigenring { algebra: s, classes, representatives, phi, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::algebras;
    use crate::linalg::FieldSpec;

    const Q: FieldSpec = FieldSpec::Rationals;

    fn v(xs: &[i64]) -> Vec<Scalar> {
        xs.iter().map(|&x| Q.from_i64(x)).collect()
    }

    fn m2() -> Arc<Algebra> {
        Arc::new(algebras::matrix_full(2, Q).unwrap())
    }
    fn t2() -> Arc<Algebra> {
        Arc::new(algebras::upper_triangular(2, Q).unwrap())
    }

    /// Brute-force oracle: the span of all products e_i * g, iterated.
    fn naive_ideal(a: &Algebra, gens: &[Vec<Scalar>]) -> Subspace {
        let mut span = Subspace::from_vectors(a.field(), a.dim(), gens.iter().cloned());
        loop {
            let mut vs = span.vectors();
            for g in span.vectors() {
                for i in 0..a.dim() {
                    vs.push(a.mul(&a.basis_vector(i), &g));
                }
            }
            let next = Subspace::from_vectors(a.field(), a.dim(), vs);
            if next == span {
                return span;
            }
            span = next;
        }
    }

    #[test]
    fn column_ideal_of_m2() {
        // basis E11, E12, E21, E22
        let a = m2();
        let i = left_ideal_closure(&a, &[v(&[0, 1, 0, 0])]).unwrap();
        assert_eq!(i.dim(), 2);
        let expected = Subspace::from_vectors(Q, 4, vec![v(&[0, 1, 0, 0]), v(&[0, 0, 0, 1])]);
        assert_eq!(i.basis(), &expected);
        assert_eq!(i.basis(), &naive_ideal(&a, &[v(&[0, 1, 0, 0])]));
    }

    #[test]
    fn trivial_closures() {
        let a = m2();
        assert_eq!(left_ideal_closure(&a, &[]).unwrap().dim(), 0);
        assert_eq!(left_ideal_closure(&a, &[a.unit().to_vec()]).unwrap().dim(), 4);
        assert!(left_ideal_closure(&a, &[v(&[1, 0])]).is_err());
    }

    #[test]
    fn closure_is_idempotent() {
        let a = t2();
        let i = left_ideal_closure(&a, &[v(&[1, 1, 0])]).unwrap();
        let again = left_ideal_closure(&a, &i.basis().vectors()).unwrap();
        assert_eq!(i, again);
    }

    #[test]
    fn cyclic_modules() {
        let a = m2();
        let zero = LeftIdeal::zero(a.clone());
        let c = cyclic_module(&a, &zero).unwrap();
        assert_eq!(c.module, AlgebraModule::regular(a.clone()));
        let whole = LeftIdeal::whole(a.clone());
        assert_eq!(cyclic_module(&a, &whole).unwrap().dim(), 0);

        let col = left_ideal_closure(&a, &[v(&[0, 1, 0, 0])]).unwrap();
        let c = cyclic_module(&a, &col).unwrap();
        assert_eq!(c.dim(), 2);
        assert!(super::super::module::validate_module(&c.module).passed());
        // Quotient coordinates are the classes of E11 and E21; E11 fixes E11 and kills E21.
        assert_eq!(c.quotient.free_columns, vec![0, 2]);
        assert_eq!(c.module.action()[0], Matrix::from_i64(Q, &[&[1, 0], &[0, 0]]));
        // E21 sends class of E11 to class of E21.
        assert_eq!(c.module.action()[2], Matrix::from_i64(Q, &[&[0, 0], &[1, 0]]));
    }

    #[test]
    fn endomorphisms_of_column_module() {
        let a = m2();
        let col = left_ideal_closure(&a, &[v(&[0, 1, 0, 0])]).unwrap();
        let c = cyclic_module(&a, &col).unwrap();
        assert_eq!(hom_space(&c.module, &c.module).dim(), 1);
    }

    #[test]
    fn invariants_of_column_module() {
        let a = m2();
        let col = left_ideal_closure(&a, &[v(&[0, 1, 0, 0])]).unwrap();
        let nat = algebras::matrix_natural_module(&a, 2);
        let inv = invariant_subspace(&nat, &col);
        assert_eq!(inv, Subspace::from_vectors(Q, 2, vec![v(&[1, 0])]));
        assert!(invariant_subspace(&nat, &LeftIdeal::zero(a.clone())).is_full());
        assert!(invariant_subspace(&nat, &LeftIdeal::whole(a.clone())).is_zero());
    }

    #[test]
    fn invariants_match_hom_from_cyclic() {
        let a = t2();
        let i = left_ideal_closure(&a, &[v(&[1, 0, 0])]).unwrap();
        let c = cyclic_module(&a, &i).unwrap();
        for target in [
            AlgebraModule::regular(a.clone()),
            c.module.clone(),
            algebras::upper_triangular_simple(&a, 2, 0),
            algebras::upper_triangular_simple(&a, 2, 1),
        ] {
            let fast = hom_from_cyclic(&c, &target);
            let slow = hom_space(&c.module, &target);
            assert_eq!(fast, slow);
            assert_eq!(fast.dim(), invariant_subspace(&target, &i).dim());
        }
    }

    #[test]
    fn normalizer_examples() {
        let a = m2();
        assert!(normalizer(&a, &LeftIdeal::zero(a.clone())).is_full());
        let col = left_ideal_closure(&a, &[v(&[0, 1, 0, 0])]).unwrap();
        let n = normalizer(&a, &col);
        assert_eq!(n.dim(), 3);
        // {a : a21 = 0}
        for x in n.vectors() {
            assert!(x[2].is_zero());
        }

        let t = t2();
        let i = left_ideal_closure(&t, &[v(&[1, 0, 0])]).unwrap();
        let n = normalizer(&t, &i);
        assert_eq!(n, Subspace::from_vectors(Q, 3, vec![v(&[1, 0, 0]), v(&[0, 0, 1])]));
        assert!(n.contains(t.unit()));
    }

    #[test]
    fn eigenring_examples() {
        let a = m2();
        let s = eigenring(&a, &LeftIdeal::zero(a.clone())).unwrap();
        assert_eq!(s.dim(), 4);
        assert!(s.report.passed());
        // phi_a is right multiplication by a.
        for (r, p) in s.representatives.iter().zip(&s.phi) {
            assert_eq!(p.matrix, a.right_mult(r));
        }

        let col = left_ideal_closure(&a, &[v(&[0, 1, 0, 0])]).unwrap();
        assert_eq!(eigenring(&a, &col).unwrap().dim(), 1);

        let t = t2();
        let i = left_ideal_closure(&t, &[v(&[1, 0, 0])]).unwrap();
        let s = eigenring(&t, &i).unwrap();
        assert_eq!(s.dim(), 1);
        // Spanned by the class of e22.
        let c = cyclic_module(&t, &i).unwrap();
        assert!(s.classes.contains(&c.class_of(&v(&[0, 0, 1]))));
    }
}
