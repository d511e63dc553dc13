use serde_json::{json, Value};

use super::category::SubcategoryB;
use crate::algebra::{hom_from_cyclic, AlgebraModule, HomSpace};
use crate::error::{Error, Result};
use crate::linalg::{quotient_of, FieldSpec, HomogeneousSolver, Matrix, QuotientSpace, Scalar, Subspace};
use crate::report::AuditReport;

/// A finite-dimensional contravariant functor `B^op -> vect`.
///
/// `maps[s][t][k]` is `F(f_k): F(t) -> F(s)` for the `k`-th basis map
/// `f_k: s -> t`, stored as a `dim F(s) x dim F(t)` matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctorRep {
    pub spaces: Vec<usize>,
    pub maps: Vec<Vec<Vec<Matrix>>>,
}

impl FunctorRep {
    pub fn zero(b: &SubcategoryB) -> Self {
        let k = b.len();
        let field = b.field();
        FunctorRep {
            spaces: vec![0; k],
            maps: (0..k)
                .map(|s| (0..k).map(|t| vec![Matrix::zeros(field, 0, 0); b.hom(s, t).dim()]).collect())
                .collect(),
        }
    }

    pub fn total_dim(&self) -> usize {
        self.spaces.iter().sum()
    }

    /// `F(f)` for `f = sum_k coords[k] f_k`.
    pub fn map_of(&self, field: FieldSpec, s: usize, t: usize, coords: &[Scalar]) -> Matrix {
        Matrix::combination(field, self.spaces[s], self.spaces[t], coords, &self.maps[s][t])
    }

    pub fn direct_sum(&self, other: &FunctorRep, field: FieldSpec) -> FunctorRep {
        let k = self.spaces.len();
        let spaces: Vec<usize> = (0..k).map(|o| self.spaces[o] + other.spaces[o]).collect();
        let maps = (0..k)
            .map(|s| {
                (0..k)
                    .map(|t| {
                        self.maps[s][t]
                            .iter()
                            .zip(&other.maps[s][t])
                            .map(|(x, y)| {
                                let mut m = Matrix::zeros(field, spaces[s], spaces[t]);
                                m.set_block(0, 0, x);
                                m.set_block(self.spaces[s], self.spaces[t], y);
                                m
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        FunctorRep { spaces, maps }
    }

    /// Checks that the shapes fit the subcategory.
    pub fn check_shape(&self, b: &SubcategoryB) -> Result<()> {
        let k = b.len();
        if self.spaces.len() != k || self.maps.len() != k {
            return Err(Error::invalid(format!("functor has {} objects, expected {k}", self.spaces.len())));
        }
        for s in 0..k {
            if self.maps[s].len() != k {
                return Err(Error::invalid("functor map table is not square"));
            }
            for t in 0..k {
                if self.maps[s][t].len() != b.hom(s, t).dim() {
                    return Err(Error::invalid(format!(
                        "functor gives {} maps for {} basis morphisms {}->{}",
                        self.maps[s][t].len(),
                        b.hom(s, t).dim(),
                        b.object(s).name,
                        b.object(t).name
                    )));
                }
                for m in &self.maps[s][t] {
                    if m.rows() != self.spaces[s] || m.cols() != self.spaces[t] || m.field() != b.field() {
                        return Err(Error::invalid(format!(
                            "functor map on {} has shape {}x{}, expected {}x{}",
                            b.hom_id(s, t, 0),
                            m.rows(),
                            m.cols(),
                            self.spaces[s],
                            self.spaces[t]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self, b: &SubcategoryB) -> Value {
        let mut spaces = serde_json::Map::new();
        for (o, d) in self.spaces.iter().enumerate() {
            spaces.insert(b.object(o).name.clone(), json!(d));
        }
        let mut maps = serde_json::Map::new();
        for (s, t, k) in b.hom_basis_ids() {
            maps.insert(b.hom_id(s, t, k), self.maps[s][t][k].to_json());
        }
        json!({ "spaces": spaces, "maps": maps })
    }
}

/// A natural transformation `F => G`, one component `F(o) -> G(o)` per object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NatTrans {
    pub components: Vec<Matrix>,
}

impl NatTrans {
    pub fn identity(f: &FunctorRep, field: FieldSpec) -> Self {
        NatTrans { components: f.spaces.iter().map(|&d| Matrix::identity(field, d)).collect() }
    }

    pub fn zero(f: &FunctorRep, g: &FunctorRep, field: FieldSpec) -> Self {
        NatTrans {
            components: f.spaces.iter().zip(&g.spaces).map(|(&a, &b)| Matrix::zeros(field, b, a)).collect(),
        }
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &NatTrans) -> NatTrans {
        NatTrans {
            components: self.components.iter().zip(&other.components).map(|(a, b)| b.mul(a)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Matrix::is_zero)
    }

    /// Componentwise injective.
    pub fn is_monic(&self) -> bool {
        self.components.iter().all(|c| c.rank() == c.cols())
    }

    /// Componentwise surjective.
    pub fn is_epic(&self) -> bool {
        self.components.iter().all(|c| c.rank() == c.rows())
    }

    pub fn is_iso(&self) -> bool {
        self.is_monic() && self.is_epic()
    }

    /// Objects at which naturality fails, as `(s, t, k)` basis morphism ids.
    pub fn naturality_failures(&self, b: &SubcategoryB, f: &FunctorRep, g: &FunctorRep) -> Vec<(usize, usize, usize)> {
        b.hom_basis_ids()
            .filter(|&(s, t, k)| {
                // θ_s F(f) = G(f) θ_t
                self.components[s].mul(&f.maps[s][t][k]) != g.maps[s][t][k].mul(&self.components[t])
            })
            .collect()
    }

    pub fn is_natural(&self, b: &SubcategoryB, f: &FunctorRep, g: &FunctorRep) -> bool {
        self.naturality_failures(b, f, g).is_empty()
    }

    pub fn to_json(&self, b: &SubcategoryB) -> Value {
        let mut out = serde_json::Map::new();
        for (o, c) in self.components.iter().enumerate() {
            out.insert(b.object(o).name.clone(), c.to_json());
        }
        Value::Object(out)
    }
}

/// Checks the functor laws on basis morphisms.
pub fn validate_functor(b: &SubcategoryB, f: &FunctorRep) -> AuditReport {
    let mut report = AuditReport::new("functor");
    if let Err(e) = f.check_shape(b) {
        report.fail("shape", "functor-data", json!(e.to_string()));
        return report;
    }
    let field = b.field();
    let k = b.len();
    let mut ident = Vec::new();
    for o in 0..k {
        if !f.map_of(field, o, o, b.identity(o)).is_identity() {
            ident.push(json!(b.object(o).name));
        }
    }
    report.check("preserves-identities", "functor-laws", ident.is_empty(), json!({ "violating": ident }));
    let mut comp = Vec::new();
    for s in 0..k {
        for m in 0..k {
            for t in 0..k {
                for fi in 0..b.hom(s, m).dim() {
                    for gi in 0..b.hom(m, t).dim() {
                        // F(g ∘ f) = F(f) F(g)
                        let lhs = f.map_of(field, s, t, b.compose_basis(s, m, t, fi, gi));
                        let rhs = f.maps[s][m][fi].mul(&f.maps[m][t][gi]);
                        if lhs != rhs {
                            comp.push(json!([b.hom_id(s, m, fi), b.hom_id(m, t, gi)]));
                        }
                    }
                }
            }
        }
    }
    report.check("reverses-composition", "functor-laws", comp.is_empty(), json!({ "violating": comp }));
    report
}

/// `Y(V) = Hom_A(i(-), V)` restricted to the subcategory, with the chosen
/// bases of each `Hom_A(A/I, V)`.
#[derive(Clone, Debug)]
pub struct YonedaImage {
    pub functor: FunctorRep,
    pub bases: Vec<HomSpace>,
}

pub fn yoneda_with_bases(b: &SubcategoryB, v: &AlgebraModule) -> YonedaImage {
    let bases: Vec<HomSpace> = b.objects().iter().map(|o| hom_from_cyclic(&o.cyclic, v)).collect();
    let k = b.len();
    let maps = (0..k)
        .map(|s| {
            (0..k)
                .map(|t| {
                    b.hom(s, t)
                        .basis()
                        .iter()
                        .map(|f| precompose_matrix(&bases[s], &bases[t], f, b.field()))
                        .collect()
                })
                .collect()
        })
        .collect();
    YonedaImage { functor: FunctorRep { spaces: bases.iter().map(HomSpace::dim).collect(), maps }, bases }
}

pub fn yoneda(b: &SubcategoryB, v: &AlgebraModule) -> FunctorRep {
    yoneda_with_bases(b, v).functor
}

/// Matrix of `φ -> φ ∘ f` from `Hom(t, V)` to `Hom(s, V)` in the given bases.
fn precompose_matrix(hs: &HomSpace, ht: &HomSpace, f: &Matrix, field: FieldSpec) -> Matrix {
    let cols: Vec<Vec<Scalar>> = ht
        .basis()
        .iter()
        .map(|phi| hs.coordinates(&phi.mul(f)).expect("precomposition stays in the hom space"))
        .collect();
    Matrix::from_columns(field, hs.dim(), &cols)
}

/// `Y(h)` for a module map `h: V -> W`, given the Yoneda images of both ends.
pub fn yoneda_on_map(yv: &YonedaImage, yw: &YonedaImage, h: &Matrix, field: FieldSpec) -> NatTrans {
    NatTrans {
        components: yv
            .bases
            .iter()
            .zip(&yw.bases)
            .map(|(bv, bw)| {
                let cols: Vec<Vec<Scalar>> = bv
                    .basis()
                    .iter()
                    .map(|phi| bw.coordinates(&h.mul(phi)).expect("postcomposition with a module map"))
                    .collect();
                Matrix::from_columns(field, bw.dim(), &cols)
            })
            .collect(),
    }
}

/// The space `Nat(F, G)` with a canonical basis.
///
/// Unknowns are the components `θ_o` flattened row-major and concatenated in
/// object order.
#[derive(Clone, Debug)]
pub struct NatSpace {
    pub span: Subspace,
    pub basis: Vec<NatTrans>,
    offsets: Vec<usize>,
    shapes: Vec<(usize, usize)>,
}

impl NatSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn flatten(&self, theta: &NatTrans) -> Vec<Scalar> {
        theta.components.iter().flat_map(|c| c.data().iter().cloned()).collect()
    }

    pub fn unflatten(&self, field: FieldSpec, x: &[Scalar]) -> NatTrans {
        NatTrans {
            components: self
                .shapes
                .iter()
                .zip(&self.offsets)
                .map(|(&(r, c), &off)| Matrix::from_vec(field, r, c, x[off..off + r * c].to_vec()))
                .collect(),
        }
    }

    pub fn coordinates(&self, theta: &NatTrans) -> Option<Vec<Scalar>> {
        self.span.coordinates(&self.flatten(theta))
    }

    pub fn combine(&self, field: FieldSpec, coords: &[Scalar]) -> NatTrans {
        let mut x = vec![field.zero(); self.span.ambient()];
        for (c, v) in coords.iter().zip(self.span.vectors()) {
            for (xi, vi) in x.iter_mut().zip(&v) {
                xi.add_product(c, vi);
            }
        }
        self.unflatten(field, &x)
    }
}

pub fn nat_space(b: &SubcategoryB, f: &FunctorRep, g: &FunctorRep) -> NatSpace {
    let field = b.field();
    let k = b.len();
    let shapes: Vec<(usize, usize)> = (0..k).map(|o| (g.spaces[o], f.spaces[o])).collect();
    let mut offsets = Vec::with_capacity(k);
    let mut total = 0;
    for &(r, c) in &shapes {
        offsets.push(total);
        total += r * c;
    }
    let comp = |x: &[Scalar], o: usize| {
        let (r, c) = shapes[o];
        Matrix::from_vec(field, r, c, x[offsets[o]..offsets[o] + r * c].to_vec())
    };
    let mut solver = HomogeneousSolver::new(field, total);
    for (s, t, i) in b.hom_basis_ids() {
        let ff = &f.maps[s][t][i];
        let gf = &g.maps[s][t][i];
        solver.constrain(|x| {
            let lhs = comp(x, s).mul(ff);
            let rhs = gf.mul(&comp(x, t));
            lhs.sub(&rhs).into_data()
        });
    }
    let span = solver.finish();
    let mut out = NatSpace { span, basis: Vec::new(), offsets, shapes };
    out.basis = out.span.vectors().iter().map(|v| out.unflatten(field, v)).collect();
    out
}

/// Pointwise kernel of `θ: F => G` with its inclusion into `F`.
pub fn kernel_functor(b: &SubcategoryB, f: &FunctorRep, theta: &NatTrans) -> (FunctorRep, NatTrans) {
    let field = b.field();
    let kernels: Vec<Subspace> = theta.components.iter().map(Matrix::kernel).collect();
    let k = b.len();
    let maps = (0..k)
        .map(|s| {
            (0..k)
                .map(|t| {
                    f.maps[s][t]
                        .iter()
                        .map(|m| {
                            let cols: Vec<Vec<Scalar>> = kernels[t]
                                .vectors()
                                .iter()
                                .map(|v| kernels[s].coordinates(&m.mul_vec(v)).expect("kernels are preserved"))
                                .collect();
                            Matrix::from_columns(field, kernels[s].dim(), &cols)
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let inclusion = NatTrans { components: kernels.iter().map(Subspace::basis_columns).collect() };
    (FunctorRep { spaces: kernels.iter().map(Subspace::dim).collect(), maps }, inclusion)
}

/// Pointwise cokernel of `θ: F => G` with its projection from `G`.
pub fn cokernel_functor(b: &SubcategoryB, g: &FunctorRep, theta: &NatTrans) -> (FunctorRep, NatTrans) {
    let quotients: Vec<QuotientSpace> = theta
        .components
        .iter()
        .map(|c| quotient_of(c.rows(), &c.image()))
        .collect();
    let k = b.len();
    let maps = (0..k)
        .map(|s| {
            (0..k)
                .map(|t| {
                    g.maps[s][t]
                        .iter()
                        .map(|m| quotients[s].projection.mul(m).mul(&quotients[t].section))
                        .collect()
                })
                .collect()
        })
        .collect();
    let projection = NatTrans { components: quotients.iter().map(|q| q.projection.clone()).collect() };
    (FunctorRep { spaces: quotients.iter().map(QuotientSpace::dim).collect(), maps }, projection)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::algebra::{left_ideal_closure, LeftIdeal};
    use crate::corpus::algebras;
    use crate::subcategory::build_subcategory;

    const Q: FieldSpec = FieldSpec::Rationals;

    fn v(xs: &[i64]) -> Vec<Scalar> {
        xs.iter().map(|&x| Q.from_i64(x)).collect()
    }

    fn truncated() -> (Arc<crate::algebra::Algebra>, SubcategoryB) {
        let a = Arc::new(algebras::truncated_poly(&[0, 0, -1, 1], Q).unwrap());
        let ix = left_ideal_closure(&a, &[v(&[0, 1, 0])]).unwrap();
        let ix2 = left_ideal_closure(&a, &[v(&[0, 0, 1])]).unwrap();
        let ix1 = left_ideal_closure(&a, &[v(&[-1, 1, 0])]).unwrap();
        let b = build_subcategory(&a, &[("x".into(), ix), ("x^2".into(), ix2), ("x-1".into(), ix1)]).unwrap();
        (a, b)
    }

    #[test]
    fn yoneda_of_regular_module_is_a_functor() {
        let (a, b) = truncated();
        let y = yoneda(&b, &AlgebraModule::regular(a));
        assert!(validate_functor(&b, &y).passed());
        assert_eq!(y.spaces, vec![1, 2, 1]);
    }

    #[test]
    fn representable_is_yoneda_of_object() {
        let (_, b) = truncated();
        for o in 0..b.len() {
            let y = yoneda(&b, &b.object(o).cyclic.module);
            let dims: Vec<usize> = (0..b.len()).map(|s| b.hom(s, o).dim()).collect();
            assert_eq!(y.spaces, dims);
            assert!(validate_functor(&b, &y).passed());
        }
    }

    #[test]
    fn yoneda_lemma_dimension() {
        // Nat(Y(A/I), F) ≅ F(A/I) for a representable
        let (a, b) = truncated();
        let f = yoneda(&b, &AlgebraModule::regular(a));
        for o in 0..b.len() {
            let rep = yoneda(&b, &b.object(o).cyclic.module);
            assert_eq!(nat_space(&b, &rep, &f).dim(), f.spaces[o]);
        }
    }

    #[test]
    fn nat_basis_is_natural_and_identity_lies_in_it() {
        let (a, b) = truncated();
        let f = yoneda(&b, &AlgebraModule::regular(a));
        let n = nat_space(&b, &f, &f);
        for t in &n.basis {
            assert!(t.is_natural(&b, &f, &f));
        }
        assert!(n.coordinates(&NatTrans::identity(&f, Q)).is_some());
    }

    #[test]
    fn broken_functor_fails_validation() {
        let (a, b) = truncated();
        let mut f = yoneda(&b, &AlgebraModule::regular(a));
        let id_x2 = &mut f.maps[1][1];
        id_x2[0] = id_x2[0].scale(&Q.from_i64(2));
        assert!(!validate_functor(&b, &f).passed());
    }

    #[test]
    fn kernel_and_cokernel_are_functors() {
        let (a, b) = truncated();
        let reg = yoneda(&b, &AlgebraModule::regular(a.clone()));
        let rep = yoneda(&b, &b.object(1).cyclic.module);
        let n = nat_space(&b, &rep, &reg);
        for theta in &n.basis {
            let (kf, inc) = kernel_functor(&b, &rep, theta);
            assert!(validate_functor(&b, &kf).passed());
            assert!(inc.is_natural(&b, &kf, &rep));
            assert!(inc.then(theta).is_zero());
            let (cf, proj) = cokernel_functor(&b, &reg, theta);
            assert!(validate_functor(&b, &cf).passed());
            assert!(proj.is_natural(&b, &reg, &cf));
            assert!(theta.then(&proj).is_zero());
        }
    }

    #[test]
    fn direct_sum_of_functors() {
        let (a, b) = truncated();
        let f = yoneda(&b, &AlgebraModule::regular(a));
        let g = yoneda(&b, &b.object(0).cyclic.module);
        let s = f.direct_sum(&g, Q);
        assert!(validate_functor(&b, &s).passed());
        assert_eq!(nat_space(&b, &s, &s).dim(), {
            let d = |x: &FunctorRep, y: &FunctorRep| nat_space(&b, x, y).dim();
            d(&f, &f) + d(&f, &g) + d(&g, &f) + d(&g, &g)
        });
    }

    #[test]
    fn zero_object_subcategory_functor() {
        let a = Arc::new(algebras::matrix_full(2, Q).unwrap());
        let b = build_subcategory(&a, &[("0".into(), LeftIdeal::zero(a.clone()))]).unwrap();
        let z = FunctorRep::zero(&b);
        assert!(validate_functor(&b, &z).passed());
        let nat = algebras::matrix_natural_module(&a, 2);
        let y = yoneda(&b, &nat);
        assert_eq!(y.spaces, vec![2]);
    }

    #[test]
    fn yoneda_on_identity_is_identity() {
        let (a, b) = truncated();
        let reg = AlgebraModule::regular(a);
        let y = yoneda_with_bases(&b, &reg);
        let t = yoneda_on_map(&y, &y, &Matrix::identity(Q, reg.dim()), Q);
        assert_eq!(t, NatTrans::identity(&y.functor, Q));
    }
}
