//! Weight and generalized weight modules with respect to families of left
//! ideals, and the audits relating them to the fixed points of the counit.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::adjunction::{counit, unit};
use crate::algebra::{
    generated_submodule, invariant_subspace, is_simple, is_simple_action, left_ideal_closure, Algebra,
    AlgebraModule, LeftIdeal, Simplicity, SimplicityBudget,
};
use crate::error::{Error, Result};
use crate::linalg::Subspace;
use crate::random::{random_module, random_nat, sparse_vector};
use crate::report::AuditReport;
use crate::subcategory::{build_subcategory, cokernel_functor, kernel_functor, yoneda_with_bases, SubcategoryB};

pub type NamedIdeal = (String, LeftIdeal);

/// Pairwise comaximal left ideals.
#[derive(Clone, Debug)]
pub struct IdealFamily {
    pub algebra: Arc<Algebra>,
    pub ideals: Vec<NamedIdeal>,
}

/// Downward directed blocks of left ideals, comaximal across blocks.
#[derive(Clone, Debug)]
pub struct BlockFamily {
    pub algebra: Arc<Algebra>,
    pub blocks: Vec<Vec<NamedIdeal>>,
}

impl BlockFamily {
    /// Every ideal of every block once, in block order.
    pub fn all_ideals(&self) -> Vec<NamedIdeal> {
        let mut out: Vec<NamedIdeal> = Vec::new();
        for (name, i) in self.blocks.iter().flatten() {
            if !out.iter().any(|(_, j)| j == i) {
                out.push((name.clone(), i.clone()));
            }
        }
        out
    }
}

fn comaximal(i: &LeftIdeal, j: &LeftIdeal) -> bool {
    i.is_comaximal_with(j)
}

pub fn check_family(x: &IdealFamily) -> AuditReport {
    let mut report = AuditReport::new("ideal-family");
    let mut bad = Vec::new();
    for (k, (ni, i)) in x.ideals.iter().enumerate() {
        for (nj, j) in &x.ideals[k + 1..] {
            if !comaximal(i, j) {
                bad.push(json!([ni, nj]));
            }
        }
    }
    report.check("pairwise-comaximal", "comaximal-family", bad.is_empty(), json!({ "offending_pairs": bad }));
    report
}

pub fn check_blocks(xx: &BlockFamily) -> AuditReport {
    let mut report = AuditReport::new("block-family");
    let mut undirected = Vec::new();
    for block in &xx.blocks {
        for (k, (ni, i)) in block.iter().enumerate() {
            for (nj, j) in &block[k + 1..] {
                if !block.iter().any(|(_, l)| i.contains_ideal(l) && j.contains_ideal(l)) {
                    undirected.push(json!([ni, nj]));
                }
            }
        }
    }
    report.check(
        "blocks-downward-directed",
        "downward-directed-blocks",
        undirected.is_empty(),
        json!({ "offending_pairs": undirected }),
    );
    let mut bad = Vec::new();
    for (p, bp) in xx.blocks.iter().enumerate() {
        for bq in &xx.blocks[p + 1..] {
            for (ni, i) in bp {
                for (nj, j) in bq {
                    if !comaximal(i, j) {
                        bad.push(json!([ni, nj]));
                    }
                }
            }
        }
    }
    report.check("cross-block-comaximal", "comaximal-blocks", bad.is_empty(), json!({ "offending_pairs": bad }));
    report
}

#[derive(Clone, Debug)]
pub struct WeightDecomposition {
    pub pieces: Vec<Subspace>,
    pub sum: Subspace,
    pub is_direct: bool,
    pub is_full: bool,
}

impl WeightDecomposition {
    fn from_pieces(field: crate::linalg::FieldSpec, dim: usize, pieces: Vec<Subspace>) -> Result<Self> {
        let sum = pieces.iter().fold(Subspace::zero(field, dim), |acc, p| acc.sum(p));
        let total: usize = pieces.iter().map(Subspace::dim).sum();
        let is_direct = total == sum.dim();
        if !is_direct {
            return Err(Error::inconsistent(format!(
                "weight spaces are not independent ({total} > {}); the family is not comaximal",
                sum.dim()
            )));
        }
        let is_full = sum.is_full();
        Ok(WeightDecomposition { pieces, sum, is_direct, is_full })
    }

    pub fn piece_dims(&self) -> Vec<usize> {
        self.pieces.iter().map(Subspace::dim).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "piece_dims": self.piece_dims(),
            "sum_dim": self.sum.dim(),
            "module_dim": self.sum.ambient(),
            "is_direct": self.is_direct,
            "is_full": self.is_full,
        })
    }
}

pub fn weight_decomposition(x: &IdealFamily, v: &AlgebraModule) -> Result<WeightDecomposition> {
    let pieces = x.ideals.iter().map(|(_, i)| invariant_subspace(v, i)).collect();
    WeightDecomposition::from_pieces(v.field(), v.dim(), pieces)
}

pub fn is_weight_module(x: &IdealFamily, v: &AlgebraModule) -> Result<bool> {
    Ok(weight_decomposition(x, v)?.is_full)
}

/// `V(𝕀)`: vectors killed by some ideal of the block, computed as the sum of
/// the invariant subspaces.
pub fn generalized_weight_space(block: &[NamedIdeal], v: &AlgebraModule) -> Subspace {
    block
        .iter()
        .fold(Subspace::zero(v.field(), v.dim()), |acc, (_, i)| acc.sum(&invariant_subspace(v, i)))
}

pub fn generalized_weight_decomposition(xx: &BlockFamily, v: &AlgebraModule) -> Result<WeightDecomposition> {
    let pieces = xx.blocks.iter().map(|b| generalized_weight_space(b, v)).collect();
    WeightDecomposition::from_pieces(v.field(), v.dim(), pieces)
}

pub fn is_generalized_weight_module(xx: &BlockFamily, v: &AlgebraModule) -> Result<bool> {
    Ok(generalized_weight_decomposition(xx, v)?.is_full)
}

/// The block `{A m^k : k >= 0}` for the left ideal `m` generated by
/// `generators`, listed until the powers stabilize. Names are `prefix^k`.
pub fn power_block(a: &Arc<Algebra>, generators: &[Vec<crate::linalg::Scalar>], prefix: &str) -> Result<Vec<NamedIdeal>> {
    let m = left_ideal_closure(a, generators)?;
    let mut out = vec![(format!("{prefix}^0"), LeftIdeal::whole(a.clone()))];
    let mut current = LeftIdeal::whole(a.clone());
    for k in 1..=a.dim() + 1 {
        let mut products = Vec::new();
        for x in current.basis().vectors() {
            for y in m.basis().vectors() {
                products.push(a.mul(&x, &y));
            }
        }
        let next = left_ideal_closure(a, &products)?;
        if next == current {
            return Ok(out);
        }
        out.push((format!("{prefix}^{k}"), next.clone()));
        current = next;
    }
    Err(Error::inconsistent("ideal powers did not stabilize"))
}

#[derive(Clone, Copy, Debug)]
pub struct WeightOptions {
    /// Random modules added to the probe list.
    pub module_samples: usize,
    pub functor_samples: usize,
    /// Transformations sampled for the kernel/cokernel closure check.
    pub transformation_samples: usize,
    /// Random submodules and quotients drawn per weight probe.
    pub closure_samples: usize,
    pub max_module_dim: usize,
    pub max_functor_dim: usize,
    pub seed: u64,
    pub budget: SimplicityBudget,
}

impl Default for WeightOptions {
    fn default() -> Self {
        WeightOptions {
            module_samples: 50,
            functor_samples: 50,
            transformation_samples: 20,
            closure_samples: 2,
            max_module_dim: 6,
            max_functor_dim: 4,
            seed: 0,
            budget: SimplicityBudget::default(),
        }
    }
}

fn sampled_probes(
    a: &Arc<Algebra>,
    probes: &[(String, AlgebraModule)],
    opts: &WeightOptions,
    rng: &mut ChaCha8Rng,
) -> Vec<(String, AlgebraModule)> {
    let mut all = probes.to_vec();
    for k in 0..opts.module_samples {
        all.push((format!("random{k}"), random_module(a, opts.max_module_dim, rng)));
    }
    all
}

/// Random generated submodules and the corresponding quotients of `v`.
fn closure_samples(v: &AlgebraModule, count: usize, rng: &mut ChaCha8Rng) -> Result<Vec<AlgebraModule>> {
    let mut out = Vec::new();
    if v.dim() == 0 {
        return Ok(out);
    }
    for _ in 0..count {
        let sub = generated_submodule(v, &[sparse_vector(v.field(), v.dim(), rng)]);
        out.push(v.submodule(&sub)?);
        out.push(v.quotient(&sub)?.0);
    }
    Ok(out)
}

/// Audits, for a comaximal family whose cyclic modules are weight modules,
/// that the counit is an isomorphism exactly on weight modules, that the unit
/// is always an isomorphism, that weight modules are closed under
/// submodules and quotients, and that a simple module with a nonzero weight
/// space gives a simple module over the endomorphisms of the object.
pub fn verify_weightfix(
    x: &IdealFamily,
    probes: &[(String, AlgebraModule)],
    opts: &WeightOptions,
) -> Result<AuditReport> {
    let a = &x.algebra;
    let mut report = AuditReport::new("weight");
    let fam = check_family(x);
    let family_ok = fam.passed();
    report.absorb("family", fam);
    if !family_ok {
        return Ok(report);
    }
    let b = build_subcategory(a, &x.ideals)?;
    report.absorb("subcategory", b.report.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);

    let object_weight: Vec<bool> =
        b.objects().iter().map(|o| is_weight_module(x, &o.cyclic.module)).collect::<Result<_>>()?;
    let hypothesis = object_weight.iter().all(|&w| w);
    report.pass(
        "objects-are-weight-modules",
        "weight-hypothesis",
        json!({ "holds": hypothesis, "per_object": object_weight }),
    );

    let all = sampled_probes(a, probes, opts, &mut rng);
    let mut mismatches = Vec::new();
    let mut weight_probes = Vec::new();
    let mut in_fix = 0;
    for (name, v) in &all {
        let dec = weight_decomposition(x, v)?;
        let c = counit(&b, v)?;
        if c.classification.is_iso {
            in_fix += 1;
        }
        if is_named_probe(name, probes) {
            report.pass(
                format!("observation:{name}"),
                "weight-hypothesis",
                json!({
                    "counit": c.classification.to_json(),
                    "weight_module": dec.is_full,
                    "note": format!(
                        "ε_{name} {}; weight module: {}",
                        if c.classification.is_epi { "epi" } else { "not epi" },
                        dec.is_full
                    ),
                }),
            );
        }
        if c.classification.is_iso != dec.is_full {
            mismatches.push(json!({ "probe": name, "counit_iso": c.classification.is_iso, "decomposition": dec.to_json() }));
        }
        if dec.is_full {
            weight_probes.push((name.clone(), v.clone()));
        }
    }
    let probe_summary = json!({ "probes": all.len(), "in_fix_epsilon": in_fix, "mismatches": mismatches });
    if hypothesis {
        report.check(
            "fix-epsilon-iff-weight",
            "weight-modules-are-counit-fixed",
            mismatches.is_empty(),
            probe_summary,
        );
    } else {
        report.skip("fix-epsilon-iff-weight", "weight-modules-are-counit-fixed", "some object is not a weight module");
    }

    let mut unit_failures = Vec::new();
    for k in 0..opts.functor_samples {
        let f = crate::random::random_functor(&b, opts.max_functor_dim, &mut rng);
        if !unit(&b, &f)?.classification.is_iso {
            unit_failures.push(k);
        }
    }
    if hypothesis {
        report.check(
            "unit-iso-on-all-functors",
            "weight-functors-are-unit-fixed",
            unit_failures.is_empty(),
            json!({ "samples": opts.functor_samples, "failing_samples": unit_failures }),
        );
    } else {
        report.skip("unit-iso-on-all-functors", "weight-functors-are-unit-fixed", "some object is not a weight module");
    }

    let mut closure_failures = Vec::new();
    for (name, v) in &weight_probes {
        for (k, w) in closure_samples(v, opts.closure_samples, &mut rng)?.iter().enumerate() {
            if !is_weight_module(x, w)? {
                closure_failures.push(json!({ "probe": name, "sample": k }));
            }
        }
    }
    report.check(
        "weight-closed-under-sub-and-quotient",
        "weight-category-closure",
        closure_failures.is_empty(),
        json!({ "weight_probes": weight_probes.len(), "failing": closure_failures }),
    );

    // Simple modules with a nonzero weight space.
    let mut simple_failures = Vec::new();
    let mut correspondence_failures = Vec::new();
    let mut checked = 0;
    for (name, v) in &all {
        if is_simple(v, &opts.budget)?.verdict != Simplicity::Simple {
            continue;
        }
        let y = yoneda_with_bases(&b, v);
        for (o, (iname, _)) in x.ideals.iter().enumerate() {
            if y.functor.spaces[o] == 0 {
                continue;
            }
            if object_weight[o] && !is_weight_module(x, v)? {
                simple_failures.push(json!({ "probe": name, "ideal": iname }));
            }
            if !hypothesis {
                continue;
            }
            checked += 1;
            let verdict = is_simple_action(v.field(), y.functor.spaces[o], &y.functor.maps[o][o], &opts.budget)?;
            match verdict.verdict {
                Simplicity::Simple => {}
                Simplicity::NotSimple => correspondence_failures.push(json!({
                    "probe": name,
                    "ideal": iname,
                    "witness": verdict.witness.as_deref().map(crate::linalg::vector_to_json),
                })),
                Simplicity::Unknown => {
                    correspondence_failures.push(json!({ "probe": name, "ideal": iname, "undecided": verdict.certificate }))
                }
            }
        }
    }
    report.check(
        "simple-with-weight-is-weight",
        "weight-category-closure",
        simple_failures.is_empty(),
        json!({ "failing": simple_failures }),
    );
    if hypothesis {
        report.check(
            "simple-weight-space-is-simple-over-endomorphisms",
            "irreducibles-correspond-to-endomorphism-irreducibles",
            correspondence_failures.is_empty(),
            json!({ "pairs_checked": checked, "failing": correspondence_failures }),
        );
    } else {
        report.skip(
            "simple-weight-space-is-simple-over-endomorphisms",
            "irreducibles-correspond-to-endomorphism-irreducibles",
            "some object is not a weight module",
        );
    }
    Ok(report)
}

fn is_named_probe(name: &str, probes: &[(String, AlgebraModule)]) -> bool {
    probes.iter().any(|(n, _)| n == name)
}

/// Audits for a block family: counit fixed points are the generalized weight
/// modules, the unit is an isomorphism on Yoneda images, generalized weight
/// modules are closed under sums, submodules and quotients, invariant spaces
/// grow as ideals shrink, and kernels and cokernels of transformations
/// between unit-fixed functors stay unit-fixed.
pub fn verify_genfix(
    xx: &BlockFamily,
    probes: &[(String, AlgebraModule)],
    opts: &WeightOptions,
) -> Result<AuditReport> {
    let a = &xx.algebra;
    let mut report = AuditReport::new("generalized-weight");
    let fam = check_blocks(xx);
    let family_ok = fam.passed();
    report.absorb("family", fam);
    if !family_ok {
        return Ok(report);
    }
    let ideals = xx.all_ideals();
    let b = build_subcategory(a, &ideals)?;
    report.absorb("subcategory", b.report.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);

    let object_gw: Vec<bool> = b
        .objects()
        .iter()
        .map(|o| is_generalized_weight_module(xx, &o.cyclic.module))
        .collect::<Result<_>>()?;
    let hypothesis = object_gw.iter().all(|&w| w);
    report.pass(
        "objects-are-generalized-weight-modules",
        "generalized-weight-hypothesis",
        json!({ "holds": hypothesis, "per_object": object_gw }),
    );

    let all = sampled_probes(a, probes, opts, &mut rng);
    let mut mismatches = Vec::new();
    let mut unit_failures = Vec::new();
    let mut monotone_failures = Vec::new();
    let mut gw_probes = Vec::new();
    let mut in_fix = 0;
    for (name, v) in &all {
        let dec = generalized_weight_decomposition(xx, v)?;
        let c = counit(&b, v)?;
        if c.classification.is_iso {
            in_fix += 1;
            gw_probes.push((name.clone(), v.clone()));
        }
        if c.classification.is_iso != dec.is_full {
            mismatches.push(json!({ "probe": name, "counit_iso": c.classification.is_iso, "decomposition": dec.to_json() }));
        }
        if hypothesis {
            let u = crate::adjunction::unit_from(&b, &c.yoneda.functor, c.realization.clone())?;
            if !u.classification.is_iso {
                unit_failures.push(json!(name));
            }
        }
        for block in &xx.blocks {
            for (ni, i) in block {
                for (nj, j) in block {
                    if ni != nj && i.contains_ideal(j) && !invariant_subspace(v, j).contains_subspace(&invariant_subspace(v, i)) {
                        monotone_failures.push(json!({ "probe": name, "larger": ni, "smaller": nj }));
                    }
                }
            }
        }
    }
    if hypothesis {
        report.check(
            "fix-epsilon-iff-generalized-weight",
            "generalized-weight-modules-are-counit-fixed",
            mismatches.is_empty(),
            json!({ "probes": all.len(), "in_fix_epsilon": in_fix, "mismatches": mismatches }),
        );
        report.check(
            "unit-iso-on-yoneda-images",
            "unit-fixed-functors-are-yoneda-images",
            unit_failures.is_empty(),
            json!({ "probes": all.len(), "failing": unit_failures }),
        );
    } else {
        for (n, an) in [
            ("fix-epsilon-iff-generalized-weight", "generalized-weight-modules-are-counit-fixed"),
            ("unit-iso-on-yoneda-images", "unit-fixed-functors-are-yoneda-images"),
        ] {
            report.skip(n, an, "some object is not a generalized weight module");
        }
    }
    report.check(
        "invariants-grow-as-ideals-shrink",
        "generalized-weight-space-is-directed-union",
        monotone_failures.is_empty(),
        json!({ "failing": monotone_failures }),
    );

    let mut closure_failures = Vec::new();
    for (name, v) in &gw_probes {
        for (k, w) in closure_samples(v, opts.closure_samples, &mut rng)?.iter().enumerate() {
            if !is_generalized_weight_module(xx, w)? {
                closure_failures.push(json!({ "probe": name, "sample": k }));
            }
        }
    }
    for pair in gw_probes.windows(2).take(opts.closure_samples.max(1)) {
        if !is_generalized_weight_module(xx, &pair[0].1.direct_sum(&pair[1].1))? {
            closure_failures.push(json!({ "sum": [pair[0].0, pair[1].0] }));
        }
    }
    report.check(
        "generalized-weight-closed-under-sum-sub-quotient",
        "generalized-weight-category-closure",
        closure_failures.is_empty(),
        json!({ "generalized_weight_probes": gw_probes.len(), "failing": closure_failures }),
    );

    const KERNEL: (&str, &str) = ("unit-fixed-closed-under-kernel", "unit-fixed-functors-closed-under-pointwise-kernels");
    const COKERNEL: (&str, &str) =
        ("unit-fixed-closed-under-cokernel", "unit-fixed-functors-closed-under-pointwise-cokernels");
    if hypothesis {
        let closure = abelian_closure(&b, &gw_probes, opts, &mut rng)?;
        report.check(
            KERNEL.0,
            KERNEL.1,
            closure.kernel_failures.is_empty(),
            json!({ "transformations": closure.tested, "failing": closure.kernel_failures }),
        );
        report.check(
            COKERNEL.0,
            COKERNEL.1,
            closure.cokernel_failures.is_empty(),
            json!({ "transformations": closure.tested, "failing": closure.cokernel_failures }),
        );
    } else {
        for (n, an) in [KERNEL, COKERNEL] {
            report.skip(n, an, "some object is not a generalized weight module");
        }
    }
    Ok(report)
}

struct AbelianClosure {
    tested: usize,
    kernel_failures: Vec<Value>,
    cokernel_failures: Vec<Value>,
}

/// Samples transformations `θ: Y(V) => Y(W)` between unit-fixed functors and
/// checks whether the pointwise kernel and cokernel are unit-fixed.
///
/// Kernels always are, since `Y` is left exact. Cokernels need not be when
/// some object is not projective: for `P -> S` surjective with `Hom(S, P) -> Hom(S, S)`
/// zero, the cokernel of `Y(P) => Y(S)` is nonzero at `S` but realizes to 0.
fn abelian_closure(
    b: &SubcategoryB,
    fixed_probes: &[(String, AlgebraModule)],
    opts: &WeightOptions,
    rng: &mut ChaCha8Rng,
) -> Result<AbelianClosure> {
    use rand::Rng;
    let mut out = AbelianClosure { tested: 0, kernel_failures: Vec::new(), cokernel_failures: Vec::new() };
    if fixed_probes.is_empty() {
        return Ok(out);
    }
    let images: Vec<_> = fixed_probes.iter().map(|(_, v)| yoneda_with_bases(b, v).functor).collect();
    for k in 0..opts.transformation_samples {
        let s = rng.gen_range(0..images.len());
        let t = rng.gen_range(0..images.len());
        let theta = random_nat(b, &images[s], &images[t], rng);
        let (kf, _) = kernel_functor(b, &images[s], &theta);
        let (cf, _) = cokernel_functor(b, &images[t], &theta);
        let witness = |kind: &str, f: &crate::subcategory::FunctorRep| {
            json!({
                "sample": k,
                "source": fixed_probes[s].0,
                "target": fixed_probes[t].0,
                kind: f.spaces,
                "transformation": theta.to_json(b),
            })
        };
        if !unit(b, &kf)?.classification.is_iso {
            out.kernel_failures.push(witness("kernel_dims", &kf));
        }
        if !unit(b, &cf)?.classification.is_iso {
            out.cokernel_failures.push(witness("cokernel_dims", &cf));
        }
    }
    out.tested = opts.transformation_samples;
    Ok(out)
}
