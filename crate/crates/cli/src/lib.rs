//! Batch front end: load an instance, run one named audit, emit a JSON report.
//!
//! Exit codes: 0 when every check passes, 1 when a property check fails (the
//! failing check carries its witness), 2 on invalid input.

use std::path::PathBuf;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};
use yoneda_core::adjunction::{
    classification_agrees, counit, equivalence_audit, fix_membership_functor, fix_membership_module, realize,
    single_object_audit, unit, SingleObjectOptions,
};
use yoneda_core::algebra::{
    cyclic_module, eigenring, is_simple, validate_algebra, validate_module, AlgebraModule, SimplicityBudget,
};
use yoneda_core::corpus;
use yoneda_core::fleet::{run_fleet, FleetConfig, FleetKind};
use yoneda_core::instance::{FamilySpec, Instance};
use yoneda_core::linalg::FieldSpec;
use yoneda_core::par::Strategy;
use yoneda_core::random::random_functor;
use yoneda_core::report::{AuditReport, SCHEMA_TAG};
use yoneda_core::subcategory::{validate_functor, yoneda, FunctorRep, SubcategoryB};
use yoneda_core::weight::{
    check_blocks, check_family, generalized_weight_decomposition, verify_genfix, verify_weightfix,
    weight_decomposition, WeightOptions,
};
use yoneda_core::{Error, Result};

pub const COMMANDS: &[&str] = &[
    "validate",
    "export",
    "eigenring",
    "subcategory",
    "realize",
    "counit",
    "unit",
    "fix",
    "single-object-audit",
    "weight",
    "genweight",
    "adjunction-fleet",
    "triangle-fleet",
];

#[derive(Clone, Debug, Default)]
pub struct Flags {
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub field: Option<FieldSpec>,
    pub count: Option<usize>,
    pub max_dim: Option<usize>,
    pub probe: Option<String>,
    pub ideal: Option<String>,
}

/// Parses `q` or `fp:<p>`.
pub fn parse_field(text: &str) -> Result<FieldSpec> {
    match text {
        "q" | "Q" => Ok(FieldSpec::Rationals),
        _ => {
            let p = text
                .strip_prefix("fp:")
                .and_then(|p| p.parse::<u64>().ok())
                .ok_or_else(|| Error::invalid(format!("field must be q or fp:<prime>, got {text:?}")))?;
            FieldSpec::prime(p)
        }
    }
}

/// Loads `corpus:<name>` or a JSON instance file.
pub fn load_instance(address: &str, field: Option<FieldSpec>) -> Result<Instance> {
    if let Some(name) = address.strip_prefix("corpus:") {
        return corpus::builtin(name, field.unwrap_or(FieldSpec::Rationals));
    }
    let text = std::fs::read_to_string(address).map_err(|e| Error::invalid(format!("cannot read {address}: {e}")))?;
    let inst = Instance::from_json_str(&text)?;
    if let Some(f) = field {
        if f != inst.field() {
            return Err(Error::invalid(format!(
                "--field {} does not match the instance field {}",
                f.label(),
                inst.field().label()
            )));
        }
    }
    Ok(inst)
}

/// The result of one command: a report and the full JSON document to emit.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: AuditReport,
    pub document: Value,
    pub summary: String,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.report.passed() {
            0
        } else {
            1
        }
    }

    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.document).expect("json values serialize");
        s.push('\n');
        s
    }
}

pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::InvalidInput(_) | Error::Validation { .. } => 2,
        // An internal construction failed: report it as a failed property.
        Error::Inconsistent(_) => 1,
    }
}

fn need<'a>(instance: Option<&'a Instance>, command: &str) -> Result<&'a Instance> {
    instance.ok_or_else(|| Error::invalid(format!("{command} needs an instance (file path or corpus:<name>)")))
}

fn probes(inst: &Instance, flags: &Flags) -> Result<Vec<(String, AlgebraModule)>> {
    match &flags.probe {
        Some(p) => Ok(vec![(p.clone(), inst.module(p)?.clone())]),
        None => Ok(inst.modules.iter().map(|(n, m)| (n.clone(), m.clone())).collect()),
    }
}

fn ideal_names(inst: &Instance, flags: &Flags) -> Result<Vec<String>> {
    match &flags.ideal {
        Some(i) => {
            inst.ideal(i)?;
            Ok(vec![i.clone()])
        }
        None => Ok(inst.ideals.keys().cloned().collect()),
    }
}

/// The subcategory on every named ideal of the instance.
fn full_subcategory(inst: &Instance, flags: &Flags) -> Result<SubcategoryB> {
    let names = ideal_names(inst, flags)?;
    if names.is_empty() {
        return Err(Error::invalid("instance has no ideals"));
    }
    inst.subcategory(&names)
}

/// Functors on `b`: instance functors over the same objects, Yoneda images of
/// the probes, and `samples` seeded random functors.
fn functors(inst: &Instance, b: &SubcategoryB, flags: &Flags, samples: usize) -> Result<Vec<(String, FunctorRep)>> {
    let names: Vec<String> = b.objects().iter().map(|o| o.name.clone()).collect();
    let mut out: Vec<(String, FunctorRep)> = inst
        .functors
        .iter()
        .filter(|(_, f)| f.objects == names)
        .map(|(n, f)| (n.clone(), f.functor.clone()))
        .collect();
    for (n, v) in probes(inst, flags)? {
        out.push((format!("Y({n})"), yoneda(b, &v)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(flags.seed);
    for k in 0..samples {
        out.push((format!("random{k}"), random_functor(b, 4, &mut rng)));
    }
    Ok(out)
}

fn envelope(command: &str, instance: &str, flags: &Flags, report: &AuditReport, data: Value) -> Value {
    json!({
        "schema": SCHEMA_TAG,
        "command": command,
        "instance": instance,
        "seed": flags.seed,
        "data": data,
        "report": report.to_json(),
    })
}

fn summarize(command: &str, instance: &str, report: &AuditReport, extra: &str) -> String {
    let t = report.tally();
    let mut s = format!(
        "{command} {instance}: {} passed, {} failed, {} skipped{extra}",
        t.passed, t.failed, t.skipped
    );
    for f in report.failures() {
        s.push_str(&format!("\n  FAIL {} [{}]", f.name, f.anchor));
    }
    s
}

/// Runs `command` and returns its outcome.
pub fn run_report(instance: Option<&Instance>, command: &str, flags: &Flags) -> Result<Outcome> {
    let (report, data, extra, name) = match command {
        "adjunction-fleet" | "triangle-fleet" => {
            let kind = if command == "adjunction-fleet" { FleetKind::Adjunction } else { FleetKind::Triangle };
            let mut config = FleetConfig { seed: flags.seed, ..FleetConfig::default() };
            if let Some(c) = flags.count {
                config.count = c;
            }
            if let Some(d) = flags.max_dim {
                if d == 0 {
                    return Err(Error::invalid("--max-dim must be at least 1"));
                }
                config.max_algebra_dim = d;
            }
            if let Some(f) = flags.field {
                config.fields = vec![f];
            }
            let fleet = run_fleet(&config, kind, Strategy::Parallel)?;
            let what = if kind == FleetKind::Adjunction { "dimension identities" } else { "triangle identities" };
            let extra = format!("; {}/{} {what}", fleet.passed_count(), fleet.entries.len());
            let data = json!({ "count": fleet.entries.len(), "passed": fleet.passed_count(), "max_dim": config.max_algebra_dim });
            (fleet.audit(), data, extra, command.to_string())
        }
        _ => {
            let inst = need(instance, command)?;
            let (report, data) = run_instance_command(inst, command, flags)?;
            (report, data, String::new(), inst.name.clone())
        }
    };
    let document = if command == "export" {
        data.clone()
    } else {
        envelope(command, &name, flags, &report, data)
    };
    let summary = summarize(command, &name, &report, &extra);
    Ok(Outcome { report, document, summary })
}

fn run_instance_command(inst: &Instance, command: &str, flags: &Flags) -> Result<(AuditReport, Value)> {
    let a = &inst.algebra;
    let mut report = AuditReport::new(inst.name.clone());
    let data = match command {
        "validate" => {
            report.absorb("algebra", validate_algebra(a));
            for (n, m) in &inst.modules {
                report.absorb(&format!("module:{n}"), validate_module(m));
            }
            for (n, f) in &inst.families {
                let r = match f {
                    FamilySpec::Flat(_) => check_family(&inst.flat_family(n)?),
                    FamilySpec::Blocks(_) => check_blocks(&inst.block_family(n)?),
                };
                report.absorb(&format!("family:{n}"), r);
            }
            for (n, f) in &inst.functors {
                let b = inst.subcategory(&f.objects)?;
                report.absorb(&format!("functor:{n}"), validate_functor(&b, &f.functor));
            }
            report.absorb("", inst.self_test());
            json!({
                "algebra_dim": a.dim(),
                "ideals": inst.ideals.iter().map(|(n, i)| (n.clone(), json!(i.dim()))).collect::<Map<_, _>>(),
                "modules": inst.modules.iter().map(|(n, m)| (n.clone(), json!(m.dim()))).collect::<Map<_, _>>(),
            })
        }
        "export" => inst.to_json(),
        "eigenring" => {
            let mut out = Map::new();
            for n in ideal_names(inst, flags)? {
                let i = inst.ideal(&n)?;
                let s = eigenring(a, i)?;
                let c = cyclic_module(a, i)?;
                let simple = is_simple(&c.module, &SimplicityBudget::default())?;
                report.absorb(&format!("eigenring:{n}"), s.report.clone());
                report.absorb(&format!("eigenring:{n}/algebra"), validate_algebra(&s.algebra));
                out.insert(
                    n.clone(),
                    json!({
                        "dim": s.dim(),
                        "quotient_dim": c.dim(),
                        "structure": s.algebra.to_json(),
                        "right_action": (0..s.dim()).map(|j| s.right_action(j).to_json()).collect::<Vec<_>>(),
                        "simplicity": simple.verdict,
                        "certificate": simple.certificate,
                    }),
                );
            }
            Value::Object(out)
        }
        "subcategory" => {
            let b = full_subcategory(inst, flags)?;
            report.absorb("", b.report.clone());
            let mut homs = Map::new();
            for s in 0..b.len() {
                for t in 0..b.len() {
                    homs.insert(
                        format!("{}->{}", b.object(s).name, b.object(t).name),
                        json!(b.hom(s, t).dim()),
                    );
                }
            }
            json!({
                "objects": b.objects().iter().map(|o| json!({ "name": o.name, "dim": o.dim() })).collect::<Vec<_>>(),
                "hom_dims": homs,
            })
        }
        "realize" => {
            let b = full_subcategory(inst, flags)?;
            let mut out = Map::new();
            for (n, f) in functors(inst, &b, flags, 0)? {
                let r = realize(&b, &f)?;
                report.absorb(&format!("realization:{n}"), validate_module(&r.module));
                out.insert(n, json!({ "functor_dim": f.total_dim(), "dim": r.dim(), "module": r.module.to_json() }));
            }
            Value::Object(out)
        }
        "counit" => {
            let b = full_subcategory(inst, flags)?;
            let mut out = Map::new();
            for (n, v) in probes(inst, flags)? {
                let c = counit(&b, &v)?;
                report.check(
                    format!("classification:{n}"),
                    "rank-classification-agrees-with-kernel-and-image",
                    classification_agrees(&c.map, &c.classification),
                    c.classification.to_json(),
                );
                out.insert(n, json!({ "classification": c.classification.to_json(), "matrix": c.map.to_json() }));
            }
            Value::Object(out)
        }
        "unit" => {
            let b = full_subcategory(inst, flags)?;
            let samples = flags.count.unwrap_or(10);
            let mut out = Map::new();
            for (n, f) in functors(inst, &b, flags, samples)? {
                let u = unit(&b, &f)?;
                let agrees = u.eta.components.iter().zip(&u.components).all(|(m, c)| classification_agrees(m, c));
                report.check(
                    format!("classification:{n}"),
                    "rank-classification-agrees-with-kernel-and-image",
                    agrees,
                    u.classification.to_json(),
                );
                out.insert(n, u.classification.to_json());
            }
            Value::Object(out)
        }
        "fix" => {
            let b = full_subcategory(inst, flags)?;
            let samples = flags.count.unwrap_or(10);
            let ps = probes(inst, flags)?;
            for (n, v) in &ps {
                report.absorb("", fix_membership_module(&b, v, n)?);
            }
            let fs = functors(inst, &b, flags, samples)?;
            for (n, f) in &fs {
                report.absorb("", fix_membership_functor(&b, f, n)?);
            }
            let modules: Vec<AlgebraModule> = ps.into_iter().map(|(_, v)| v).collect();
            let funcs: Vec<FunctorRep> = fs.into_iter().map(|(_, f)| f).collect();
            report.absorb("equivalence", equivalence_audit(&b, &modules, &funcs)?);
            json!({ "objects": b.objects().iter().map(|o| o.name.clone()).collect::<Vec<_>>() })
        }
        "single-object-audit" => {
            let names = ideal_names(inst, flags)?;
            if names.is_empty() {
                return Err(Error::invalid("instance has no ideals"));
            }
            let opts = SingleObjectOptions { seed: flags.seed, ..SingleObjectOptions::default() };
            let ps = probes(inst, flags)?;
            for n in &names {
                let r = single_object_audit(a, inst.ideal(n)?, &ps, &opts)?;
                let prefix = if names.len() == 1 { String::new() } else { format!("ideal:{n}") };
                report.absorb(&prefix, r);
            }
            json!({ "ideals": names, "probes": ps.iter().map(|(n, _)| n.clone()).collect::<Vec<_>>() })
        }
        "weight" | "genweight" => weight_command(inst, command, flags, &mut report)?,
        _ => return Err(Error::invalid(format!("unknown command {command:?}; known: {}", COMMANDS.join(", ")))),
    };
    Ok((report, data))
}

fn weight_options(flags: &Flags) -> WeightOptions {
    let mut opts = WeightOptions { seed: flags.seed, ..WeightOptions::default() };
    if let Some(c) = flags.count {
        opts.module_samples = c;
        opts.functor_samples = c;
    }
    opts
}

fn weight_command(inst: &Instance, command: &str, flags: &Flags, report: &mut AuditReport) -> Result<Value> {
    let ps = probes(inst, flags)?;
    let opts = weight_options(flags);
    let mut verdicts = Map::new();
    let mut audited = 0;
    for (fname, spec) in &inst.families {
        let mut per_probe = Map::new();
        for (pn, v) in &ps {
            let d = match spec {
                FamilySpec::Flat(_) => weight_decomposition(&inst.flat_family(fname)?, v)?,
                FamilySpec::Blocks(_) => generalized_weight_decomposition(&inst.block_family(fname)?, v)?,
            };
            let mut entry = d.to_json();
            entry["verdict"] = json!(d.is_full);
            per_probe.insert(pn.clone(), entry);
        }
        let kind = match spec {
            FamilySpec::Flat(_) => "flat",
            FamilySpec::Blocks(_) => "blocks",
        };
        verdicts.insert(fname.clone(), json!({ "kind": kind, "probes": per_probe }));
        match (command, spec) {
            ("weight", FamilySpec::Flat(_)) => {
                report.absorb(&format!("family:{fname}"), verify_weightfix(&inst.flat_family(fname)?, &ps, &opts)?);
                audited += 1;
            }
            ("genweight", FamilySpec::Blocks(_)) => {
                report.absorb(&format!("family:{fname}"), verify_genfix(&inst.block_family(fname)?, &ps, &opts)?);
                audited += 1;
            }
            _ => {}
        }
    }
    if audited == 0 {
        let want = if command == "weight" { "a flat family" } else { "a block family" };
        return Err(Error::invalid(format!("{command} needs {want} in the instance")));
    }
    Ok(json!({ "families": verdicts }))
}

/// Writes the document to `--out` or stdout and the summary to stderr.
pub fn emit(outcome: &Outcome, flags: &Flags) -> Result<()> {
    let text = outcome.render();
    match &flags.out {
        Some(p) => std::fs::write(p, &text).map_err(|e| Error::invalid(format!("cannot write {}: {e}", p.display())))?,
        None => print!("{text}"),
    }
    eprintln!("{}", outcome.summary);
    Ok(())
}
