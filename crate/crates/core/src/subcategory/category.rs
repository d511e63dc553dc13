use std::sync::Arc;

use serde_json::json;

use crate::algebra::{
    cyclic_module, hom_space, idealizer_space, same_algebra, Algebra, CyclicModule, HomSpace,
    LeftIdeal,
};
use crate::error::{Error, Result};
use crate::linalg::{FieldSpec, Matrix, Scalar};
use crate::report::AuditReport;

/// An object `A/I` of the subcategory.
#[derive(Clone, Debug)]
pub struct Object {
    pub name: String,
    pub cyclic: CyclicModule,
}

impl Object {
    pub fn ideal(&self) -> &LeftIdeal {
        &self.cyclic.ideal
    }
    pub fn dim(&self) -> usize {
        self.cyclic.dim()
    }
}

/// The full subcategory on a list of cyclic modules `A/I`, presented by hom
/// bases and composition structure constants.
#[derive(Clone, Debug)]
pub struct SubcategoryB {
    algebra: Arc<Algebra>,
    objects: Vec<Object>,
    /// `homs[s][t]` is a basis of `Hom_A(A/I_s, A/I_t)`.
    homs: Vec<Vec<HomSpace>>,
    /// Indexed by `(s, m, t)`: `[f][g]` holds the coordinates of `g ∘ f` in
    /// `homs[s][t]`, for `f` in `homs[s][m]` and `g` in `homs[m][t]`.
    composition: Vec<Vec<Vec<Scalar>>>,
    identities: Vec<Vec<Scalar>>,
    pub report: AuditReport,
}

impl SubcategoryB {
    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }
    pub fn field(&self) -> FieldSpec {
        self.algebra.field()
    }
    pub fn objects(&self) -> &[Object] {
        &self.objects
    }
    pub fn len(&self) -> usize {
        self.objects.len()
    }
    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }
    pub fn object(&self, i: usize) -> &Object {
        &self.objects[i]
    }
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o.name == name)
    }

    pub fn hom(&self, s: usize, t: usize) -> &HomSpace {
        &self.homs[s][t]
    }

    /// Coordinates of `g ∘ f` for basis maps `f: s -> m` (index `fi`), `g: m -> t` (index `gi`).
    pub fn compose_basis(&self, s: usize, m: usize, t: usize, fi: usize, gi: usize) -> &[Scalar] {
        let k = self.len();
        &self.composition[(s * k + m) * k + t][fi * self.homs[m][t].dim() + gi]
    }

    /// Coordinates of the identity of object `o` in its endomorphism basis.
    pub fn identity(&self, o: usize) -> &[Scalar] {
        &self.identities[o]
    }

    /// Identifier of a hom basis element, as used in functor JSON.
    pub fn hom_id(&self, s: usize, t: usize, k: usize) -> String {
        format!("{}->{}#{}", self.objects[s].name, self.objects[t].name, k)
    }

    /// Iterates over every `(source, target, basis index)`.
    pub fn hom_basis_ids(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        let k = self.len();
        (0..k).flat_map(move |s| {
            (0..k).flat_map(move |t| (0..self.homs[s][t].dim()).map(move |i| (s, t, i)))
        })
    }

    pub fn total_hom_dim(&self) -> usize {
        self.homs.iter().flatten().map(HomSpace::dim).sum()
    }
}

/// Builds the full subcategory on `{A/I : I in x}`.
///
/// Hom bases come from the intertwining equations; the build report records
/// that each `Hom(A/J, A/I)` is spanned by the maps `b + J -> b a + I` for
/// `a + I` with `J a ⊆ I`, and that composition is associative and unital.
pub fn build_subcategory(a: &Arc<Algebra>, x: &[(String, LeftIdeal)]) -> Result<SubcategoryB> {
    for (i, (ni, ii)) in x.iter().enumerate() {
        if !same_algebra(a, ii.algebra()) {
            return Err(Error::invalid(format!("ideal {ni} belongs to another algebra")));
        }
        for (nj, ij) in &x[..i] {
            if ii == ij {
                return Err(Error::invalid(format!("ideals {nj} and {ni} coincide")));
            }
        }
    }
    let field = a.field();
    let objects: Vec<Object> = x
        .iter()
        .map(|(name, ideal)| {
            Ok(Object { name: name.clone(), cyclic: cyclic_module(a, ideal)? })
        })
        .collect::<Result<_>>()?;
    let k = objects.len();
    let homs: Vec<Vec<HomSpace>> = objects
        .iter()
        .map(|s| objects.iter().map(|t| hom_space(&s.cyclic.module, &t.cyclic.module)).collect())
        .collect();

    let mut report = AuditReport::new("subcategory");
    for (s, src) in objects.iter().enumerate() {
        for (t, tgt) in objects.iter().enumerate() {
            let classes = idealizer_space(a, &tgt.cyclic, src.ideal());
            let phis: Vec<Matrix> = classes
                .vectors()
                .iter()
                .map(|cls| {
                    let rep = tgt.cyclic.quotient.lift(cls);
                    tgt.cyclic
                        .quotient
                        .projection
                        .mul(&a.right_mult(&rep))
                        .mul(&src.cyclic.quotient.section)
                })
                .collect();
            let phi_span = HomSpace::from_maps(field, src.dim(), tgt.dim(), &phis);
            let hom = &homs[s][t];
            report.check(
                format!("hom-dim:{}->{}", src.name, tgt.name),
                "hom-between-cyclics-is-idealizer-quotient",
                classes.dim() == hom.dim() && phi_span.span() == hom.span(),
                json!({ "hom_dim": hom.dim(), "idealizer_quotient_dim": classes.dim() }),
            );
        }
    }

    let mut composition = Vec::with_capacity(k * k * k);
    for s in 0..k {
        for m in 0..k {
            for t in 0..k {
                let mut table = Vec::with_capacity(homs[s][m].dim() * homs[m][t].dim());
                for f in homs[s][m].basis() {
                    for g in homs[m][t].basis() {
                        let gf = g.mul(f);
                        table.push(homs[s][t].coordinates(&gf).ok_or_else(|| {
                            Error::inconsistent("composite of module maps left the hom space")
                        })?);
                    }
                }
                composition.push(table);
            }
        }
    }
    let identities: Vec<Vec<Scalar>> = (0..k)
        .map(|o| {
            homs[o][o]
                .coordinates(&Matrix::identity(field, objects[o].dim()))
                .ok_or_else(|| Error::inconsistent("identity is not an endomorphism"))
        })
        .collect::<Result<_>>()?;

    let b = SubcategoryB { algebra: a.clone(), objects, homs, composition, identities, report };
    let (assoc, unital) = composition_audit(&b);
    let mut b = b;
    b.report.check(
        "composition-associative",
        "category-axioms",
        assoc.is_empty(),
        json!({ "violating": assoc }),
    );
    b.report.check(
        "composition-unital",
        "category-axioms",
        unital.is_empty(),
        json!({ "violating": unital }),
    );
    Ok(b)
}

/// Checks associativity and unitality of the composition constants on all
/// basis triples and pairs.
fn composition_audit(b: &SubcategoryB) -> (Vec<serde_json::Value>, Vec<serde_json::Value>) {
    let k = b.len();
    let field = b.field();
    let mut assoc = Vec::new();
    let mut unital = Vec::new();
    // Extends composition bilinearly: coordinates of g ∘ f from coordinates of f and g.
    let compose = |s: usize, m: usize, t: usize, f: &[Scalar], g: &[Scalar]| -> Vec<Scalar> {
        let mut out = vec![field.zero(); b.hom(s, t).dim()];
        for (fi, fc) in f.iter().enumerate() {
            if fc.is_zero() {
                continue;
            }
            for (gi, gc) in g.iter().enumerate() {
                if gc.is_zero() {
                    continue;
                }
                let w = fc * gc;
                for (o, c) in out.iter_mut().zip(b.compose_basis(s, m, t, fi, gi)) {
                    o.add_product(&w, c);
                }
            }
        }
        out
    };
    let unit = |n: usize, i: usize| crate::linalg::unit_vector(field, n, i);
    for s in 0..k {
        for m in 0..k {
            let dsm = b.hom(s, m).dim();
            for f in 0..dsm {
                let fv = unit(dsm, f);
                if compose(s, s, m, b.identity(s), &fv) != fv || compose(s, m, m, &fv, b.identity(m)) != fv {
                    unital.push(json!(b.hom_id(s, m, f)));
                }
                for t in 0..k {
                    let dmt = b.hom(m, t).dim();
                    for g in 0..dmt {
                        let gv = unit(dmt, g);
                        let gf = compose(s, m, t, &fv, &gv);
                        for u in 0..k {
                            let dtu = b.hom(t, u).dim();
                            for h in 0..dtu {
                                let hv = unit(dtu, h);
                                let lhs = compose(s, t, u, &gf, &hv);
                                let hg = compose(m, t, u, &gv, &hv);
                                let rhs = compose(s, m, u, &fv, &hg);
                                if lhs != rhs {
                                    assoc.push(json!([
                                        b.hom_id(s, m, f),
                                        b.hom_id(m, t, g),
                                        b.hom_id(t, u, h)
                                    ]));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    (assoc, unital)
}
