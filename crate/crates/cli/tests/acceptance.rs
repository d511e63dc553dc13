//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::io::Write;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use yoneda_core::adjunction::{
    counit, density_systems_solvable, equivalence_audit, s_complement, s_freeness, single_object_audit,
    SingleObjectOptions,
};
use yoneda_core::algebra::{cyclic_module, generated_submodule, invariant_subspace, is_simple, Simplicity, SimplicityBudget};
use yoneda_core::corpus::{builtin, BUILTINS};
use yoneda_core::fleet::{run_fleet, FleetConfig, FleetKind};
use yoneda_core::linalg::{FieldSpec, Subspace};
use yoneda_core::par::Strategy;
use yoneda_core::random::{random_functor, random_module};
use yoneda_core::report::{AuditReport, Verdict};
use yoneda_core::subcategory::yoneda;
use yoneda_core::weight::{
    generalized_weight_decomposition, verify_genfix, verify_weightfix, weight_decomposition, WeightOptions,
};
use yoneda_lab::{run_report, Flags};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn passes(r: &AuditReport, name: &str) -> Result<(), String> {
    match r.find(name) {
        Some(c) if c.verdict == Verdict::Pass => Ok(()),
        Some(c) => Err(format!("{name}: {:?} {}", c.verdict, c.witness)),
        None => Err(format!("{name}: check missing")),
    }
}

fn fleet_config() -> FleetConfig {
    FleetConfig { count: 100, seed: 1, ..FleetConfig::default() }
}

fn fleet_criterion(kind: FleetKind) -> Outcome {
    let config = fleet_config();
    let start = Instant::now();
    let fleet = run_fleet(&config, kind, Strategy::Parallel).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(fleet.entries.len() >= 100, "fewer than 100 instances")?;
    for e in &fleet.entries {
        ensure(
            e.algebra_dim <= 8 && e.ideal_dims.len() <= 3 && e.module_dim <= 6,
            format!("instance {} outside the size bounds", e.index),
        )?;
    }
    let fields: std::collections::BTreeSet<String> = fleet.entries.iter().map(|e| e.field.label()).collect();
    ensure(fields.len() == 2, format!("fields used: {fields:?}"))?;
    let failures: Vec<usize> = fleet.entries.iter().filter(|e| !e.passed()).map(|e| e.index).collect();
    ensure(failures.is_empty(), format!("failing instances {failures:?}"))?;
    ensure(elapsed < Duration::from_secs(60), format!("took {elapsed:?}"))?;
    Ok(format!("{}/{} over Q and F5 in {:.2?}", fleet.passed_count(), fleet.entries.len(), elapsed))
}

/// Adjunction identity on the seeded fleet.
fn criterion_1() -> Outcome {
    fleet_criterion(FleetKind::Adjunction).map(|s| format!("dim Nat(F, Y(V)) = dim Hom(|F|, V): {s}"))
}

/// Triangle identities on the same fleet.
fn criterion_2() -> Outcome {
    fleet_criterion(FleetKind::Triangle).map(|s| format!("both triangle composites are identities: {s}"))
}

/// Counit epi iff generated by invariants, and image equals A·V^I.
fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut probes_checked = 0;
    let mut objects = 0;
    for name in BUILTINS {
        let inst = builtin(name, FieldSpec::Rationals).map_err(|e| e.to_string())?;
        for iname in inst.ideals.keys() {
            let i = inst.ideal(iname).map_err(|e| e.to_string())?;
            let b = inst.subcategory(std::slice::from_ref(iname)).map_err(|e| e.to_string())?;
            objects += 1;
            let mut probes: Vec<(String, _)> = inst.modules.iter().map(|(n, m)| (n.clone(), m.clone())).collect();
            for k in 0..50 {
                probes.push((format!("random{k}"), random_module(&inst.algebra, 6, &mut rng)));
            }
            for (pn, v) in &probes {
                let c = counit(&b, v).map_err(|e| e.to_string())?;
                let generated = generated_submodule(v, &invariant_subspace(v, i).vectors());
                let image = c.map.image();
                ensure(
                    image == generated,
                    format!("{name}/{iname}/{pn}: image of the counit differs from A·V^I"),
                )?;
                ensure(
                    c.classification.is_epi == (generated.dim() == v.dim()),
                    format!("{name}/{iname}/{pn}: epi verdict disagrees with A·V^I = V"),
                )?;
                probes_checked += 1;
            }
        }
    }
    Ok(format!("{probes_checked} probes across {objects} single-object instances, 0 mismatches"))
}

/// Simple quotient on matrix_full_2.
fn criterion_4() -> Outcome {
    let inst = builtin("matrix_full_2", FieldSpec::Rationals).map_err(|e| e.to_string())?;
    let a = &inst.algebra;
    let i = inst.ideal("col").map_err(|e| e.to_string())?;
    let c = cyclic_module(a, i).map_err(|e| e.to_string())?;
    let v = is_simple(&c.module, &SimplicityBudget::default()).map_err(|e| e.to_string())?;
    ensure(v.verdict == Simplicity::Simple, format!("verdict {:?}", v.verdict))?;
    ensure(
        v.certificate.contains("mod 2") && v.certificate.contains("3 spins"),
        format!("certificate {:?}", v.certificate),
    )?;
    let basis = s_freeness(a, i).map_err(|e| e.to_string())?.ok_or("no free basis over the eigenring")?;
    let density = density_systems_solvable(a, &c, &basis.basis);
    ensure(density == vec![true, true], format!("density systems {density:?}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut probes: Vec<(String, _)> = inst.modules.iter().map(|(n, m)| (n.clone(), m.clone())).collect();
    for k in 0..50 {
        probes.push((format!("random{k}"), random_module(a, 6, &mut rng)));
    }
    let opts = SingleObjectOptions { functor_samples: 50, seed: 4, ..SingleObjectOptions::default() };
    let r = single_object_audit(a, i, &probes, &opts).map_err(|e| e.to_string())?;
    for name in ["counit-monic-for-simple-quotient", "unit-iso-for-simple-quotient", "density-systems-solvable"] {
        passes(&r, name)?;
    }
    ensure(r.passed(), format!("audit failures: {:?}", r.failures().map(|c| &c.name).collect::<Vec<_>>()))?;
    Ok(format!(
        "A/I simple ({}); counit monic on {} probes; unit iso on 50 functors; density systems solvable",
        v.certificate,
        probes.len()
    ))
}

/// Complement and non-simple witness on upper_triangular_2.
fn criterion_5() -> Outcome {
    let inst = builtin("upper_triangular_2", FieldSpec::Rationals).map_err(|e| e.to_string())?;
    let q = FieldSpec::Rationals;
    let a = &inst.algebra;
    let i = inst.ideal("I").map_err(|e| e.to_string())?;
    let e12 = Subspace::from_vectors(q, 2, [vec![q.one(), q.zero()]]);
    let complement = s_complement(a, i).map_err(|e| e.to_string())?.ok_or("no complement found")?;
    ensure(complement == e12, format!("complement {}", complement.to_json()))?;
    let c = cyclic_module(a, i).map_err(|e| e.to_string())?;
    let v = is_simple(&c.module, &SimplicityBudget::default()).map_err(|e| e.to_string())?;
    ensure(v.verdict == Simplicity::NotSimple, format!("verdict {:?}", v.verdict))?;
    let w = v.witness.ok_or("no witness")?;
    ensure(e12.contains(&w) && w.iter().any(|x| !x.is_zero()), "witness is not a multiple of the class of E12")?;
    let probes: Vec<(String, _)> = inst.modules.iter().map(|(n, m)| (n.clone(), m.clone())).collect();
    let opts = SingleObjectOptions { functor_samples: 50, seed: 5, ..SingleObjectOptions::default() };
    let r = single_object_audit(a, i, &probes, &opts).map_err(|e| e.to_string())?;
    passes(&r, "unit-monic-given-complement")?;
    ensure(r.passed(), format!("audit failures: {:?}", r.failures().map(|c| &c.name).collect::<Vec<_>>()))?;
    Ok("complement span{class of E12}; unit monic on 50 functors; NotSimple witnessed by the class of E12".into())
}

fn weight_opts(seed: u64) -> WeightOptions {
    WeightOptions { module_samples: 50, functor_samples: 50, transformation_samples: 20, seed, ..WeightOptions::default() }
}

/// Weight modules on split_idempotent over Q and F3; correspondence over F2.
fn criterion_6() -> Outcome {
    for (field, seed) in [(FieldSpec::Rationals, 6), (FieldSpec::prime(3).map_err(|e| e.to_string())?, 7)] {
        let inst = builtin("split_idempotent", field).map_err(|e| e.to_string())?;
        let x = inst.flat_family("weights").map_err(|e| e.to_string())?;
        let probes: Vec<(String, _)> = inst.modules.iter().map(|(n, m)| (n.clone(), m.clone())).collect();
        let r = verify_weightfix(&x, &probes, &weight_opts(seed)).map_err(|e| e.to_string())?;
        passes(&r, "fix-epsilon-iff-weight").map_err(|e| format!("{}: {e}", field.label()))?;
        passes(&r, "unit-iso-on-all-functors").map_err(|e| format!("{}: {e}", field.label()))?;
        ensure(r.passed(), format!("{}: failures {:?}", field.label(), r.failures().map(|c| &c.name).collect::<Vec<_>>()))?;
    }
    let f2 = FieldSpec::prime(2).map_err(|e| e.to_string())?;
    let inst = builtin("split_idempotent", f2).map_err(|e| e.to_string())?;
    let x = inst.flat_family("weights").map_err(|e| e.to_string())?;
    let probes: Vec<(String, _)> = inst.modules.iter().map(|(n, m)| (n.clone(), m.clone())).collect();
    let r = verify_weightfix(&x, &probes, &weight_opts(8)).map_err(|e| e.to_string())?;
    passes(&r, "simple-weight-space-is-simple-over-endomorphisms").map_err(|e| format!("F2: {e}"))?;
    ensure(r.passed(), format!("F2: failures {:?}", r.failures().map(|c| &c.name).collect::<Vec<_>>()))?;
    Ok("Fix_eps = weight modules and unit iso on 50+50 samples over Q and F3; F2 correspondence exhaustive".into())
}

/// Generalized weight modules on truncated_poly_x2x1.
fn criterion_7() -> Outcome {
    let inst = builtin("truncated_poly_x2x1", FieldSpec::Rationals).map_err(|e| e.to_string())?;
    let regular = inst.module("regular").map_err(|e| e.to_string())?;
    let flat = weight_decomposition(&inst.flat_family("weights").map_err(|e| e.to_string())?, regular)
        .map_err(|e| e.to_string())?;
    ensure(!flat.is_full && flat.sum.dim() == 2, format!("flat family: {}", flat.to_json()))?;
    let blocks = inst.block_family("generalized").map_err(|e| e.to_string())?;
    let gen = generalized_weight_decomposition(&blocks, regular).map_err(|e| e.to_string())?;
    ensure(gen.is_full && gen.piece_dims() == vec![2, 1], format!("block family: {}", gen.to_json()))?;
    let probes = vec![("regular".to_string(), regular.clone())];
    let r = verify_genfix(&blocks, &probes, &weight_opts(9)).map_err(|e| e.to_string())?;
    passes(&r, "fix-epsilon-iff-generalized-weight")?;
    passes(&r, "unit-fixed-closed-under-kernel")?;
    passes(&r, "unit-fixed-closed-under-cokernel")?;
    ensure(r.passed(), format!("failures {:?}", r.failures().map(|c| &c.name).collect::<Vec<_>>()))?;
    Ok("flat: not weight (2 of 3); blocks: generalized weight (2+1); Fix_eps = GenWt on 50 modules; 20 transformations closed".into())
}

/// The adjunction restricts to an equivalence on the fixed points.
fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut total = 0;
    for name in BUILTINS {
        let inst = builtin(name, FieldSpec::Rationals).map_err(|e| e.to_string())?;
        let names: Vec<String> = inst.ideals.keys().cloned().collect();
        let b = inst.subcategory(&names).map_err(|e| e.to_string())?;
        let mut modules: Vec<_> = inst.modules.values().cloned().collect();
        for _ in 0..20 {
            modules.push(random_module(&inst.algebra, 6, &mut rng));
        }
        let mut functors: Vec<_> = modules.iter().map(|v| yoneda(&b, v)).collect();
        for _ in 0..20 {
            functors.push(random_functor(&b, 6, &mut rng));
        }
        let r = equivalence_audit(&b, &modules, &functors).map_err(|e| e.to_string())?;
        ensure(r.passed(), format!("{name}: {}", r.to_json()))?;
        total += modules.len() + functors.len();
    }
    Ok(format!("{total} sampled modules and functors across {} corpus instances, 0 failures", BUILTINS.len()))
}

/// Byte-identical reruns and corpus self-test on load.
fn criterion_9() -> Outcome {
    let runs: Vec<(&str, Option<&str>, Flags)> = vec![
        ("single-object-audit", Some("upper_triangular_2"), Flags { seed: 7, ..Flags::default() }),
        ("weight", Some("split_idempotent"), Flags { seed: 3, ..Flags::default() }),
        ("genweight", Some("truncated_poly_x2x1"), Flags { probe: Some("regular".into()), ..Flags::default() }),
        ("fix", Some("matrix_full_2"), Flags { seed: 11, ..Flags::default() }),
        ("adjunction-fleet", None, Flags { seed: 1, count: Some(30), ..Flags::default() }),
        ("triangle-fleet", None, Flags { seed: 2, count: Some(30), ..Flags::default() }),
    ];
    for (command, inst, flags) in &runs {
        let render = || -> Result<String, String> {
            let loaded = match inst {
                Some(n) => Some(builtin(n, FieldSpec::Rationals).map_err(|e| e.to_string())?),
                None => None,
            };
            Ok(run_report(loaded.as_ref(), command, flags).map_err(|e| e.to_string())?.render())
        };
        ensure(render()? == render()?, format!("{command}: reruns differ"))?;
    }
    let config = FleetConfig { count: 30, ..fleet_config() };
    let seq = run_fleet(&config, FleetKind::Adjunction, Strategy::Sequential).map_err(|e| e.to_string())?;
    let par = run_fleet(&config, FleetKind::Adjunction, Strategy::Parallel).map_err(|e| e.to_string())?;
    ensure(seq.to_json() == par.to_json(), "sequential and parallel fleets differ")?;
    let mut loaded = 0;
    for name in BUILTINS {
        for field in [FieldSpec::Rationals, FieldSpec::prime(2).unwrap(), FieldSpec::prime(3).unwrap(), FieldSpec::prime(5).unwrap()] {
            builtin(name, field).map_err(|e| format!("{name} over {}: {e}", field.label()))?;
            loaded += 1;
        }
    }
    Ok(format!("{} commands byte-identical on rerun; {loaded} corpus loads self-tested", runs.len()))
}

fn main() {
    let criteria: [(u32, fn() -> Outcome); 9] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
    ];
    let mut out = std::io::stdout().lock();
    let mut failed = Vec::new();
    for (n, run) in criteria {
        let line = match run() {
            Ok(detail) => format!("criterion {n}: PASS: {detail}"),
            Err(detail) => {
                failed.push(n);
                format!("criterion {n}: FAIL: {detail}")
            }
        };
        writeln!(out, "{line}").unwrap();
    }
    writeln!(out, "acceptance: {}/9 criteria pass", 9 - failed.len()).unwrap();
    drop(out);
    if !failed.is_empty() {
        std::process::exit(1);
    }
}
