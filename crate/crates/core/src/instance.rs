//! Validated problem instances and their JSON form.
//!
//! An instance bundles an algebra with named left ideals, modules, ideal
//! families, functors and a table of expected facts. Every table is a sorted
//! map, so export is deterministic and `export(load(export(x)))` is
//! byte-identical to `export(x)`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::adjunction::{counit, s_complement};
use crate::algebra::{
    cyclic_module, eigenring, hom_space, invariant_subspace, is_simple, left_ideal_closure, validate_algebra,
    validate_module, Algebra, AlgebraModule, LeftIdeal, SimplicityBudget,
};
use crate::error::{Error, Result};
use crate::linalg::{vector_to_json, FieldSpec, Matrix, Scalar, Subspace};
use crate::report::{AuditReport, SCHEMA_TAG};
use crate::subcategory::{build_subcategory, validate_functor, FunctorRep, SubcategoryB};
use crate::weight::{
    generalized_weight_decomposition, weight_decomposition, BlockFamily, IdealFamily, NamedIdeal,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilySpec {
    Flat(Vec<String>),
    Blocks(Vec<Vec<String>>),
}

#[derive(Clone, Debug)]
pub struct FunctorEntry {
    /// Ideal names of the subcategory objects, in object order.
    pub objects: Vec<String>,
    pub functor: FunctorRep,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Expected {
    pub value: Value,
    pub provenance: String,
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub name: String,
    pub algebra: Arc<Algebra>,
    pub ideals: BTreeMap<String, LeftIdeal>,
    pub modules: BTreeMap<String, AlgebraModule>,
    pub families: BTreeMap<String, FamilySpec>,
    pub functors: BTreeMap<String, FunctorEntry>,
    pub expected: BTreeMap<String, Expected>,
}

impl Instance {
    pub fn new(name: impl Into<String>, algebra: Arc<Algebra>) -> Self {
        Instance {
            name: name.into(),
            algebra,
            ideals: BTreeMap::new(),
            modules: BTreeMap::new(),
            families: BTreeMap::new(),
            functors: BTreeMap::new(),
            expected: BTreeMap::new(),
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.algebra.field()
    }

    pub fn ideal(&self, name: &str) -> Result<&LeftIdeal> {
        self.ideals.get(name).ok_or_else(|| Error::invalid(format!("unknown ideal {name:?}")))
    }

    pub fn module(&self, name: &str) -> Result<&AlgebraModule> {
        self.modules.get(name).ok_or_else(|| Error::invalid(format!("unknown module {name:?}")))
    }

    fn named(&self, names: &[String]) -> Result<Vec<NamedIdeal>> {
        names.iter().map(|n| Ok((n.clone(), self.ideal(n)?.clone()))).collect()
    }

    pub fn flat_family(&self, name: &str) -> Result<IdealFamily> {
        match self.families.get(name) {
            Some(FamilySpec::Flat(names)) => {
                Ok(IdealFamily { algebra: self.algebra.clone(), ideals: self.named(names)? })
            }
            Some(FamilySpec::Blocks(_)) => Err(Error::invalid(format!("family {name:?} is a block family"))),
            None => Err(Error::invalid(format!("unknown family {name:?}"))),
        }
    }

    pub fn block_family(&self, name: &str) -> Result<BlockFamily> {
        match self.families.get(name) {
            Some(FamilySpec::Blocks(blocks)) => Ok(BlockFamily {
                algebra: self.algebra.clone(),
                blocks: blocks.iter().map(|b| self.named(b)).collect::<Result<_>>()?,
            }),
            Some(FamilySpec::Flat(_)) => Err(Error::invalid(format!("family {name:?} is a flat family"))),
            None => Err(Error::invalid(format!("unknown family {name:?}"))),
        }
    }

    pub fn subcategory(&self, names: &[String]) -> Result<SubcategoryB> {
        build_subcategory(&self.algebra, &self.named(names)?)
    }

    /// Adds an ideal given by generators.
    pub fn add_ideal(&mut self, name: &str, generators: Vec<Vec<Scalar>>) -> Result<()> {
        let i = left_ideal_closure(&self.algebra, &generators)?;
        self.ideals.insert(name.to_string(), i);
        Ok(())
    }

    pub fn expect(&mut self, key: &str, value: Value, provenance: &str) {
        self.expected.insert(key.to_string(), Expected { value, provenance: provenance.to_string() });
    }

    pub fn to_json(&self) -> Value {
        let mut ideals = Map::new();
        for (n, i) in &self.ideals {
            ideals.insert(
                n.clone(),
                json!({ "generators": i.generators().iter().map(|g| vector_to_json(g)).collect::<Vec<_>>() }),
            );
        }
        let mut modules = Map::new();
        for (n, m) in &self.modules {
            modules.insert(n.clone(), m.to_json());
        }
        let mut families = Map::new();
        for (n, f) in &self.families {
            families.insert(
                n.clone(),
                match f {
                    FamilySpec::Flat(names) => json!({ "ideals": names }),
                    FamilySpec::Blocks(blocks) => json!({ "blocks": blocks }),
                },
            );
        }
        let mut functors = Map::new();
        for (n, f) in &self.functors {
            let b = self.subcategory(&f.objects).expect("functor subcategory validated on load");
            let mut entry = f.functor.to_json(&b);
            entry["objects"] = json!(f.objects);
            functors.insert(n.clone(), entry);
        }
        let mut expected = Map::new();
        for (k, e) in &self.expected {
            expected.insert(k.clone(), json!({ "value": e.value, "provenance": e.provenance }));
        }
        json!({
            "schema": SCHEMA_TAG,
            "name": self.name,
            "field": serde_json::to_value(self.field()).expect("field spec serializes"),
            "algebra": self.algebra.to_json(),
            "ideals": ideals,
            "modules": modules,
            "families": families,
            "functors": functors,
            "expected": expected,
        })
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("json values serialize");
        s.push('\n');
        s
    }

    pub fn from_json_str(text: &str) -> Result<Instance> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::invalid(format!("malformed JSON: {e}")))?;
        Instance::from_json(&v)
    }

    /// Parses and fully validates an instance.
    pub fn from_json(v: &Value) -> Result<Instance> {
        let obj = v.as_object().ok_or_else(|| Error::invalid("instance must be a JSON object"))?;
        if let Some(tag) = obj.get("schema") {
            if tag != SCHEMA_TAG {
                return Err(Error::invalid(format!("unsupported schema {tag}, expected {SCHEMA_TAG:?}")));
            }
        }
        let name = obj.get("name").and_then(Value::as_str).unwrap_or("instance").to_string();
        let field: FieldSpec = serde_json::from_value(
            obj.get("field").cloned().ok_or_else(|| Error::invalid("missing field"))?,
        )
        .map_err(|e| Error::invalid(format!("field: {e}")))?;
        let field = field.validate()?;
        let algebra = Arc::new(parse_algebra(field, obj.get("algebra").ok_or_else(|| Error::invalid("missing algebra"))?)?);
        let check = validate_algebra(&algebra);
        if let Some(f) = check.failures().next() {
            return Err(Error::validation("algebra", format!("{} fails: {}", f.name, f.witness)));
        }
        let mut inst = Instance::new(name, algebra.clone());
        let n = algebra.dim();

        for (iname, spec) in table(obj, "ideals")? {
            let gens = spec
                .get("generators")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::invalid(format!("ideals.{iname}: missing generators")))?;
            let gens: Vec<Vec<Scalar>> = gens
                .iter()
                .enumerate()
                .map(|(k, g)| {
                    let g = parse_vector(field, g).map_err(|e| Error::invalid(format!("ideals.{iname}.generators[{k}]: {e}")))?;
                    if g.len() != n {
                        return Err(Error::invalid(format!(
                            "ideals.{iname}.generators[{k}] has length {}, expected {n}",
                            g.len()
                        )));
                    }
                    Ok(g)
                })
                .collect::<Result<_>>()?;
            inst.add_ideal(iname, gens)?;
        }

        for (mname, spec) in table(obj, "modules")? {
            let m = parse_module(&algebra, spec).map_err(|e| prefix_error(&format!("modules.{mname}"), e))?;
            let check = validate_module(&m);
            if let Some(f) = check.failures().next() {
                return Err(Error::validation(format!("modules.{mname}"), format!("{} fails: {}", f.name, f.witness)));
            }
            inst.modules.insert(mname.clone(), m);
        }

        for (fname, spec) in table(obj, "families")? {
            let fam = if let Some(ideals) = spec.get("ideals") {
                FamilySpec::Flat(parse_names(ideals).map_err(|e| prefix_error(&format!("families.{fname}"), e))?)
            } else if let Some(blocks) = spec.get("blocks") {
                let blocks = blocks
                    .as_array()
                    .ok_or_else(|| Error::invalid(format!("families.{fname}.blocks must be a list")))?
                    .iter()
                    .map(parse_names)
                    .collect::<Result<_>>()
                    .map_err(|e| prefix_error(&format!("families.{fname}"), e))?;
                FamilySpec::Blocks(blocks)
            } else {
                return Err(Error::invalid(format!("families.{fname}: expected \"ideals\" or \"blocks\"")));
            };
            inst.families.insert(fname.clone(), fam);
            match &inst.families[fname] {
                FamilySpec::Flat(_) => {
                    inst.flat_family(fname)?;
                }
                FamilySpec::Blocks(_) => {
                    inst.block_family(fname)?;
                }
            }
        }

        for (fname, spec) in table(obj, "functors")? {
            let objects = parse_names(spec.get("objects").ok_or_else(|| Error::invalid(format!("functors.{fname}: missing objects")))?)?;
            let b = inst.subcategory(&objects).map_err(|e| prefix_error(&format!("functors.{fname}"), e))?;
            let functor = parse_functor(&b, spec).map_err(|e| prefix_error(&format!("functors.{fname}"), e))?;
            let check = validate_functor(&b, &functor);
            if let Some(f) = check.failures().next() {
                return Err(Error::validation(format!("functors.{fname}"), format!("{} fails: {}", f.name, f.witness)));
            }
            inst.functors.insert(fname.clone(), FunctorEntry { objects, functor });
        }

        for (key, spec) in table(obj, "expected")? {
            let value = spec.get("value").cloned().ok_or_else(|| Error::invalid(format!("expected.{key}: missing value")))?;
            let provenance = spec.get("provenance").and_then(Value::as_str).unwrap_or("").to_string();
            inst.expected.insert(key.clone(), Expected { value, provenance });
        }
        Ok(inst)
    }

    /// Computes the fact named by `key`. Keys have the forms
    /// `algebra.dim`, `ideal.<I>.dim`, `quotient.<I>.dim`, `eigenring.<I>.dim`,
    /// `simplicity.<I>`, `simplicity_witness.<I>`, `complement.<I>`,
    /// `hom.<I>-><J>.dim`, `invariants.<I>.<V>.dim`, `counit_epi.<I>.<V>`,
    /// `weight.<family>.<V>` and `weight_sum.<family>.<V>`.
    pub fn evaluate(&self, key: &str) -> Result<Value> {
        let parts: Vec<&str> = key.split('.').collect();
        let a = &self.algebra;
        let budget = SimplicityBudget::default();
        Ok(match parts.as_slice() {
            ["algebra", "dim"] => json!(a.dim()),
            ["ideal", i, "dim"] => json!(self.ideal(i)?.dim()),
            ["quotient", i, "dim"] => json!(cyclic_module(a, self.ideal(i)?)?.dim()),
            ["eigenring", i, "dim"] => json!(eigenring(a, self.ideal(i)?)?.dim()),
            ["simplicity", i] => {
                json!(format!("{:?}", is_simple(&cyclic_module(a, self.ideal(i)?)?.module, &budget)?.verdict))
            }
            ["simplicity_witness", i] => {
                let c = cyclic_module(a, self.ideal(i)?)?;
                let w = is_simple(&c.module, &budget)?.witness;
                // Report the spanned line canonically.
                match w {
                    Some(w) => Subspace::from_vectors(a.field(), c.dim(), [w]).to_json(),
                    None => Value::Null,
                }
            }
            ["complement", i] => match s_complement(a, self.ideal(i)?)? {
                Some(s) => s.to_json(),
                None => Value::Null,
            },
            ["hom", pair, "dim"] => {
                let (s, t) = pair.split_once("->").ok_or_else(|| Error::invalid(format!("bad hom key {key:?}")))?;
                let cs = cyclic_module(a, self.ideal(s)?)?;
                let ct = cyclic_module(a, self.ideal(t)?)?;
                json!(hom_space(&cs.module, &ct.module).dim())
            }
            ["invariants", i, v, "dim"] => json!(invariant_subspace(self.module(v)?, self.ideal(i)?).dim()),
            ["counit_epi", i, v] => {
                let b = self.subcategory(&[i.to_string()])?;
                json!(counit(&b, self.module(v)?)?.classification.is_epi)
            }
            ["weight", f, v] => json!(self.weight_decomposition(f, v)?.is_full),
            ["weight_sum", f, v] => json!(self.weight_decomposition(f, v)?.sum.dim()),
            _ => return Err(Error::invalid(format!("unknown fact key {key:?}"))),
        })
    }

    fn weight_decomposition(&self, family: &str, module: &str) -> Result<crate::weight::WeightDecomposition> {
        let v = self.module(module)?;
        match self.families.get(family) {
            Some(FamilySpec::Flat(_)) => weight_decomposition(&self.flat_family(family)?, v),
            Some(FamilySpec::Blocks(_)) => generalized_weight_decomposition(&self.block_family(family)?, v),
            None => Err(Error::invalid(format!("unknown family {family:?}"))),
        }
    }

    /// Re-derives every expected fact.
    pub fn self_test(&self) -> AuditReport {
        let mut report = AuditReport::new(format!("self-test:{}", self.name));
        for (key, e) in &self.expected {
            match self.evaluate(key) {
                Ok(actual) => {
                    report.check(
                        format!("expected:{key}"),
                        "corpus-ground-truth",
                        actual == e.value,
                        json!({ "expected": e.value, "actual": actual, "provenance": e.provenance }),
                    );
                }
                Err(err) => report.fail(
                    format!("expected:{key}"),
                    "corpus-ground-truth",
                    json!({ "error": err.to_string(), "provenance": e.provenance }),
                ),
            }
        }
        report
    }
}

fn prefix_error(path: &str, e: Error) -> Error {
    match e {
        Error::InvalidInput(m) => Error::InvalidInput(format!("{path}: {m}")),
        Error::Validation { entity, message } => Error::Validation { entity: format!("{path}.{entity}"), message },
        other => other,
    }
}

fn table<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<Vec<(&'a String, &'a Value)>> {
    match obj.get(key) {
        None => Ok(Vec::new()),
        Some(Value::Object(m)) => Ok(m.iter().collect()),
        Some(_) => Err(Error::invalid(format!("{key} must be an object"))),
    }
}

fn parse_names(v: &Value) -> Result<Vec<String>> {
    v.as_array()
        .ok_or_else(|| Error::invalid("expected a list of names"))?
        .iter()
        .map(|x| x.as_str().map(str::to_string).ok_or_else(|| Error::invalid("names must be strings")))
        .collect()
}

fn parse_vector(field: FieldSpec, v: &Value) -> Result<Vec<Scalar>> {
    v.as_array()
        .ok_or_else(|| Error::invalid("expected a list of scalars"))?
        .iter()
        .map(|x| Scalar::from_json(field, x))
        .collect()
}

fn parse_matrix(field: FieldSpec, v: &Value, rows: usize, cols: usize) -> Result<Matrix> {
    let data = v.as_array().ok_or_else(|| Error::invalid("expected a matrix (list of rows)"))?;
    if data.len() != rows {
        return Err(Error::invalid(format!("matrix has {} rows, expected {rows}", data.len())));
    }
    let mut out = Vec::with_capacity(rows * cols);
    for (r, row) in data.iter().enumerate() {
        let row = parse_vector(field, row)?;
        if row.len() != cols {
            return Err(Error::invalid(format!("matrix row {r} has {} entries, expected {cols}", row.len())));
        }
        out.extend(row);
    }
    Ok(Matrix::from_vec(field, rows, cols, out))
}

fn parse_algebra(field: FieldSpec, v: &Value) -> Result<Algebra> {
    let n = v.get("dim").and_then(Value::as_u64).ok_or_else(|| Error::invalid("algebra.dim must be a positive integer"))?
        as usize;
    let structure = v.get("structure").and_then(Value::as_array).ok_or_else(|| Error::invalid("algebra.structure missing"))?;
    if structure.len() != n {
        return Err(Error::invalid(format!("algebra.structure has {} slices, expected {n}", structure.len())));
    }
    let mut flat = Vec::with_capacity(n * n * n);
    for (i, slice) in structure.iter().enumerate() {
        let m = parse_matrix(field, slice, n, n).map_err(|e| prefix_error(&format!("algebra.structure[{i}]"), e))?;
        flat.extend(m.into_data());
    }
    let unit = parse_vector(field, v.get("unit").ok_or_else(|| Error::invalid("algebra.unit missing"))?)?;
    if unit.len() != n {
        return Err(Error::invalid(format!("algebra.unit has length {}, expected {n}", unit.len())));
    }
    Algebra::new(field, n, flat, unit)
}

fn parse_module(a: &Arc<Algebra>, v: &Value) -> Result<AlgebraModule> {
    let d = v.get("dim").and_then(Value::as_u64).ok_or_else(|| Error::invalid("dim must be a nonnegative integer"))? as usize;
    let action = v.get("action").and_then(Value::as_array).ok_or_else(|| Error::invalid("action missing"))?;
    if action.len() != a.dim() {
        return Err(Error::invalid(format!("action has {} matrices, expected {}", action.len(), a.dim())));
    }
    let mats = action
        .iter()
        .enumerate()
        .map(|(k, m)| {
            if d == 0 {
                return Ok(Matrix::zeros(a.field(), 0, 0));
            }
            parse_matrix(a.field(), m, d, d).map_err(|e| prefix_error(&format!("action[{k}]"), e))
        })
        .collect::<Result<_>>()?;
    AlgebraModule::new(a.clone(), d, mats)
}

fn parse_functor(b: &SubcategoryB, v: &Value) -> Result<FunctorRep> {
    let field = b.field();
    let spaces_v = v.get("spaces").and_then(Value::as_object).ok_or_else(|| Error::invalid("spaces missing"))?;
    let spaces: Vec<usize> = b
        .objects()
        .iter()
        .map(|o| {
            spaces_v
                .get(&o.name)
                .and_then(Value::as_u64)
                .map(|x| x as usize)
                .ok_or_else(|| Error::invalid(format!("spaces.{} missing", o.name)))
        })
        .collect::<Result<_>>()?;
    let maps_v = v.get("maps").and_then(Value::as_object).ok_or_else(|| Error::invalid("maps missing"))?;
    let k = b.len();
    let mut maps: Vec<Vec<Vec<Matrix>>> = (0..k).map(|_| (0..k).map(|_| Vec::new()).collect()).collect();
    for (s, t, i) in b.hom_basis_ids() {
        let id = b.hom_id(s, t, i);
        let m = maps_v.get(&id).ok_or_else(|| Error::invalid(format!("maps.{id} missing")))?;
        let m = if spaces[s] == 0 {
            Matrix::zeros(field, 0, spaces[t])
        } else {
            parse_matrix(field, m, spaces[s], spaces[t]).map_err(|e| prefix_error(&format!("maps.{id}"), e))?
        };
        maps[s][t].push(m);
    }
    let f = FunctorRep { spaces, maps };
    f.check_shape(b)?;
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::algebras;

    fn sample() -> Instance {
        let q = FieldSpec::Rationals;
        let a = Arc::new(algebras::matrix_full(2, q).unwrap());
        let mut inst = Instance::new("m2", a.clone());
        inst.add_ideal("col", vec![vec![q.zero(), q.zero(), q.zero(), q.one()]]).unwrap();
        inst.modules.insert("nat".into(), algebras::matrix_natural_module(&a, 2));
        inst.expect("quotient.col.dim", json!(2), "dim A - dim I");
        inst
    }

    #[test]
    fn round_trip_is_byte_identical() {
        let inst = sample();
        let text = inst.to_json_string();
        let back = Instance::from_json_str(&text).unwrap();
        assert_eq!(back.to_json_string(), text);
        assert!(back.self_test().passed());
    }

    #[test]
    fn broken_associativity_names_triple() {
        let inst = sample();
        let mut v = inst.to_json();
        // c[1][1][3] = 1 makes (e1 e1) e2 differ from e1 (e1 e2).
        v["algebra"]["structure"][1][1][3] = json!("1");
        let err = Instance::from_json(&v).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("associativity"), "{msg}");
        assert!(msg.contains("[1,1,2]") || msg.contains("violating"), "{msg}");
    }

    #[test]
    fn wrong_generator_length_rejected() {
        let mut v = sample().to_json();
        v["ideals"]["col"]["generators"] = json!([["1", "0"]]);
        let err = Instance::from_json(&v).unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)), "{err}");
    }

    #[test]
    fn unknown_fact_fails_self_test() {
        let mut inst = sample();
        inst.expect("quotient.col.dim", json!(3), "deliberately wrong");
        assert!(!inst.self_test().passed());
    }
}
