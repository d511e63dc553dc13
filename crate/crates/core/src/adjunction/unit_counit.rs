use serde::Serialize;
use serde_json::{json, Value};

use super::realization::{realize, realize_map, structure_image, Realization};
use crate::algebra::{hom_space, AlgebraModule};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Scalar};
use crate::report::AuditReport;
use crate::subcategory::{
    nat_space, yoneda_on_map, yoneda_with_bases, FunctorRep, NatTrans, SubcategoryB, YonedaImage,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MapClassification {
    pub is_mono: bool,
    pub is_epi: bool,
    pub is_iso: bool,
    pub rank: usize,
    pub source_dim: usize,
    pub target_dim: usize,
}

impl MapClassification {
    fn from_counts(rank: usize, source_dim: usize, target_dim: usize) -> Self {
        let is_mono = rank == source_dim;
        let is_epi = rank == target_dim;
        MapClassification { is_mono, is_epi, is_iso: is_mono && is_epi, rank, source_dim, target_dim }
    }

    pub fn label(&self) -> &'static str {
        match (self.is_mono, self.is_epi) {
            (true, true) => "iso",
            (true, false) => "mono only",
            (false, true) => "epi only",
            (false, false) => "neither mono nor epi",
        }
    }

    pub fn to_json(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("plain struct");
        v["label"] = json!(self.label());
        v
    }
}

pub fn classify_matrix(m: &Matrix) -> MapClassification {
    MapClassification::from_counts(m.rank(), m.cols(), m.rows())
}

/// A transformation is mono/epi/iso exactly when each component is.
pub fn classify_nat(t: &NatTrans) -> MapClassification {
    let parts: Vec<MapClassification> = t.components.iter().map(classify_matrix).collect();
    MapClassification {
        is_mono: parts.iter().all(|c| c.is_mono),
        is_epi: parts.iter().all(|c| c.is_epi),
        is_iso: parts.iter().all(|c| c.is_iso),
        rank: parts.iter().map(|c| c.rank).sum(),
        source_dim: parts.iter().map(|c| c.source_dim).sum(),
        target_dim: parts.iter().map(|c| c.target_dim).sum(),
    }
}

/// The counit `ε_V: |Y(V)| -> V`, `x ⊗ φ -> φ(x)`.
#[derive(Clone, Debug)]
pub struct Counit {
    pub yoneda: YonedaImage,
    pub realization: Realization,
    pub map: Matrix,
    pub classification: MapClassification,
}

pub fn counit(b: &SubcategoryB, v: &AlgebraModule) -> Result<Counit> {
    counit_from(b, yoneda_with_bases(b, v), v)
}

/// Counit at `v` given a Yoneda image of `v` whose bases will be used.
pub fn counit_from(b: &SubcategoryB, yoneda: YonedaImage, v: &AlgebraModule) -> Result<Counit> {
    let realization = realize(b, &yoneda.functor)?;
    let field = b.field();
    let mut eval = Matrix::zeros(field, v.dim(), realization.ambient);
    for (o, hom) in yoneda.bases.iter().enumerate() {
        for (j, phi) in hom.basis().iter().enumerate() {
            for x in 0..realization.block_dims[o].0 {
                let col = realization.index(o, x, j);
                for r in 0..v.dim() {
                    eval.set(r, col, phi.get(r, x).clone());
                }
            }
        }
    }
    let killed = realization.quotient.killed.map(&eval);
    if !killed.is_zero() {
        return Err(Error::inconsistent("evaluation does not vanish on the coend relations"));
    }
    let map = eval.mul(&realization.quotient.section);
    let classification = classify_matrix(&map);
    Ok(Counit { yoneda, realization, map, classification })
}

/// The unit `η_F: F => Y(|F|)`.
#[derive(Clone, Debug)]
pub struct Unit {
    pub realization: Realization,
    /// Yoneda image of `|F|`, whose bases give the coordinates of `η`.
    pub yoneda: YonedaImage,
    pub eta: NatTrans,
    pub components: Vec<MapClassification>,
    pub classification: MapClassification,
}

pub fn unit(b: &SubcategoryB, f: &FunctorRep) -> Result<Unit> {
    unit_from(b, f, realize(b, f)?)
}

pub fn unit_from(b: &SubcategoryB, f: &FunctorRep, realization: Realization) -> Result<Unit> {
    let field = b.field();
    let yoneda = yoneda_with_bases(b, &realization.module);
    let mut components = Vec::with_capacity(b.len());
    for (o, hom) in yoneda.bases.iter().enumerate() {
        let dx = b.object(o).dim();
        let dv = f.spaces[o];
        let cols: Vec<Vec<Scalar>> = (0..dv)
            .map(|y| {
                let ey = crate::linalg::unit_vector(field, dv, y);
                let mcols: Vec<Vec<Scalar>> = (0..dx).map(|x| structure_image(&realization, o, x, &ey)).collect();
                let m = Matrix::from_columns(field, realization.dim(), &mcols);
                hom.coordinates(&m)
                    .ok_or_else(|| Error::inconsistent("b -> κ(b ⊗ v) is not a module map"))
            })
            .collect::<Result<_>>()?;
        components.push(Matrix::from_columns(field, hom.dim(), &cols));
    }
    let eta = NatTrans { components };
    if !eta.is_natural(b, f, &yoneda.functor) {
        return Err(Error::inconsistent("unit is not natural"));
    }
    let parts = eta.components.iter().map(classify_matrix).collect();
    let classification = classify_nat(&eta);
    Ok(Unit { realization, yoneda, eta, components: parts, classification })
}

/// Whether a module lies in `Fix_ε` or a functor in `Fix_η`, with the
/// classification of the relevant map.
#[derive(Clone, Debug)]
pub struct FixMembership {
    pub classification: MapClassification,
    pub in_fix: bool,
}

impl FixMembership {
    pub fn to_json(&self) -> Value {
        json!({ "in_fix": self.in_fix, "classification": self.classification.to_json() })
    }
}

pub fn fix_module(b: &SubcategoryB, v: &AlgebraModule) -> Result<FixMembership> {
    let c = counit(b, v)?;
    Ok(FixMembership { classification: c.classification, in_fix: c.classification.is_iso })
}

pub fn fix_functor(b: &SubcategoryB, f: &FunctorRep) -> Result<FixMembership> {
    let u = unit(b, f)?;
    Ok(FixMembership { classification: u.classification, in_fix: u.classification.is_iso })
}

/// Cross-checks a classification against kernel and image computed directly.
pub fn classification_agrees(m: &Matrix, c: &MapClassification) -> bool {
    let ker = m.kernel().dim();
    let img = m.image().dim();
    c.is_mono == (ker == 0) && c.is_epi == (img == m.rows()) && c.rank == img && ker + img == m.cols()
}

/// Membership report for a module: classification of `ε_V` and the derived verdict.
pub fn fix_membership_module(b: &SubcategoryB, v: &AlgebraModule, name: &str) -> Result<AuditReport> {
    let c = counit(b, v)?;
    let mut report = AuditReport::new(format!("fix:{name}"));
    report.check(
        "counit-classification-consistent",
        "pointwise-mono-epi-by-rank",
        classification_agrees(&c.map, &c.classification),
        c.classification.to_json(),
    );
    report.pass(
        format!("counit is {}", c.classification.label()),
        "fix-epsilon-definition",
        json!({ "in_fix_epsilon": c.classification.is_iso }),
    );
    Ok(report)
}

/// Membership report for a functor: per-object classification of `η_F`.
pub fn fix_membership_functor(b: &SubcategoryB, f: &FunctorRep, name: &str) -> Result<AuditReport> {
    let u = unit(b, f)?;
    let mut report = AuditReport::new(format!("fix:{name}"));
    let consistent = u.eta.components.iter().zip(&u.components).all(|(m, c)| classification_agrees(m, c));
    report.check(
        "unit-classification-consistent",
        "pointwise-mono-epi-by-rank",
        consistent,
        json!(u.components.iter().map(MapClassification::to_json).collect::<Vec<_>>()),
    );
    report.pass(
        format!("unit is {}", u.classification.label()),
        "fix-eta-definition",
        json!({ "in_fix_eta": u.classification.is_iso }),
    );
    Ok(report)
}

/// `Hom_A(|F|, V) ≅ Nat(F, Y(V))`: dimensions, plus the explicit currying
/// bijection `h -> Y(h) ∘ η_F` and its inverse `θ -> ε_V ∘ |θ|`.
pub fn adjunction_dim_check(b: &SubcategoryB, f: &FunctorRep, v: &AlgebraModule) -> Result<AuditReport> {
    let field = b.field();
    let mut report = AuditReport::new("adjunction");
    let u = unit(b, f)?;
    let c = counit(b, v)?;
    let hom = hom_space(&u.realization.module, v);
    let nat = nat_space(b, f, &c.yoneda.functor);
    report.check(
        "hom-nat-dimensions",
        "realization-left-adjoint-to-yoneda",
        hom.dim() == nat.dim(),
        json!({ "hom_dim": hom.dim(), "nat_dim": nat.dim(), "realization_dim": u.realization.dim() }),
    );

    let curry = |h: &Matrix| u.eta.then(&yoneda_on_map(&u.yoneda, &c.yoneda, h, field));
    let uncurry = |theta: &NatTrans| -> Result<Matrix> {
        Ok(c.map.mul(&realize_map(&u.realization, &c.realization, theta)?))
    };

    let mut bad_curry = Vec::new();
    let mut coords = Vec::new();
    for (k, h) in hom.basis().iter().enumerate() {
        let theta = curry(h);
        match nat.coordinates(&theta) {
            Some(x) if theta.is_natural(b, f, &c.yoneda.functor) => coords.push(x),
            _ => bad_curry.push(k),
        }
        if uncurry(&theta)? != *h {
            bad_curry.push(k);
        }
    }
    let injective = bad_curry.is_empty()
        && (coords.is_empty() || Matrix::from_rows(field, nat.dim(), &coords).rank() == hom.dim());
    report.check(
        "currying-is-injective-and-inverted",
        "realization-left-adjoint-to-yoneda",
        injective,
        json!({ "failing_hom_basis_indices": bad_curry }),
    );

    let mut bad_uncurry = Vec::new();
    for (k, theta) in nat.basis.iter().enumerate() {
        let h = uncurry(theta)?;
        if !crate::algebra::ModuleMap::new(h.clone()).is_intertwining(&u.realization.module, v) || curry(&h) != *theta {
            bad_uncurry.push(k);
        }
    }
    report.check(
        "uncurrying-is-inverse",
        "realization-left-adjoint-to-yoneda",
        bad_uncurry.is_empty(),
        json!({ "failing_nat_basis_indices": bad_uncurry }),
    );
    Ok(report)
}

/// Both triangle identities: `ε_{|F|} ∘ |η_F| = 1` and `Y(ε_V) ∘ η_{Y(V)} = 1`.
pub fn triangle_audit(b: &SubcategoryB, f: &FunctorRep, v: &AlgebraModule) -> Result<AuditReport> {
    let field = b.field();
    let mut report = AuditReport::new("triangle");

    let u = unit(b, f)?;
    let cf = counit_from(b, u.yoneda.clone(), &u.realization.module)?;
    let lifted = realize_map(&u.realization, &cf.realization, &u.eta)?;
    let first = cf.map.mul(&lifted);
    report.check(
        "counit-after-realized-unit",
        "adjunction-triangle-identities",
        first.is_identity(),
        json!({ "composite": first.to_json() }),
    );

    let cv = counit(b, v)?;
    let uy = unit_from(b, &cv.yoneda.functor, cv.realization.clone())?;
    let y_eps = yoneda_on_map(&uy.yoneda, &cv.yoneda, &cv.map, field);
    let second = uy.eta.then(&y_eps);
    let ok = second == NatTrans::identity(&cv.yoneda.functor, field);
    report.check(
        "yoneda-counit-after-unit",
        "adjunction-triangle-identities",
        ok,
        if ok { Value::Null } else { second.to_json(b) },
    );
    Ok(report)
}

/// Instance form of the equivalence `Fix_ε ≅ Fix_η`: for `V` in `Fix_ε`,
/// `Y(V)` is in `Fix_η`; for `F` in `Fix_η`, `|F|` is in `Fix_ε`.
pub fn equivalence_audit(
    b: &SubcategoryB,
    modules: &[AlgebraModule],
    functors: &[FunctorRep],
) -> Result<AuditReport> {
    let mut report = AuditReport::new("fix-equivalence");
    let mut module_failures = Vec::new();
    let mut in_fix_modules = 0;
    for (k, v) in modules.iter().enumerate() {
        let c = counit(b, v)?;
        if !c.classification.is_iso {
            continue;
        }
        in_fix_modules += 1;
        let u = unit_from(b, &c.yoneda.functor, c.realization.clone())?;
        if !u.classification.is_iso || c.realization.dim() != v.dim() {
            module_failures.push(k);
        }
    }
    report.check(
        "fix-epsilon-maps-into-fix-eta",
        "adjunction-restricts-to-equivalence",
        module_failures.is_empty(),
        json!({ "modules_in_fix": in_fix_modules, "failing_samples": module_failures }),
    );
    let mut functor_failures = Vec::new();
    let mut in_fix_functors = 0;
    for (k, f) in functors.iter().enumerate() {
        let u = unit(b, f)?;
        if !u.classification.is_iso {
            continue;
        }
        in_fix_functors += 1;
        let c = counit_from(b, u.yoneda.clone(), &u.realization.module)?;
        if !c.classification.is_iso || u.yoneda.functor.spaces != f.spaces {
            functor_failures.push(k);
        }
    }
    report.check(
        "fix-eta-maps-into-fix-epsilon",
        "adjunction-restricts-to-equivalence",
        functor_failures.is_empty(),
        json!({ "functors_in_fix": in_fix_functors, "failing_samples": functor_failures }),
    );
    Ok(report)
}
