//! Built-in instances with hand-computed ground truth.
//!
//! Every builtin carries a table of expected facts and is self-tested when it
//! is loaded; a mismatch is reported as an error rather than silently served.

pub mod algebras;

use std::sync::Arc;

use serde_json::json;

use crate::algebra::AlgebraModule;
use crate::error::{Error, Result};
use crate::instance::{FamilySpec, Instance};
use crate::linalg::{unit_vector, FieldSpec, Scalar, Subspace};

/// Canonical builtin names. Parameterized families also accept other sizes,
/// e.g. `matrix_full_3` or `group_algebra_cyclic_5`.
pub const BUILTINS: &[&str] = &[
    "matrix_full_2",
    "upper_triangular_2",
    "truncated_poly_x2x1",
    "split_idempotent",
    "dual_numbers",
    "group_algebra_cyclic_3",
];

/// Loads a builtin by name over `field` and runs its self-test.
pub fn builtin(name: &str, field: FieldSpec) -> Result<Instance> {
    let field = field.validate()?;
    let inst = build(name, field)?;
    let report = inst.self_test();
    if let Some(f) = report.failures().next() {
        return Err(Error::inconsistent(format!(
            "builtin {name} failed its self-test at {}: {}",
            f.name, f.witness
        )));
    }
    Ok(inst)
}

fn size_suffix(name: &str, prefix: &str, max: usize) -> Result<Option<usize>> {
    let Some(rest) = name.strip_prefix(prefix) else {
        return Ok(None);
    };
    match rest.parse::<usize>() {
        Ok(n) if (1..=max).contains(&n) => Ok(Some(n)),
        _ => Err(Error::invalid(format!("{name}: size must be an integer in 1..={max}"))),
    }
}

fn build(name: &str, field: FieldSpec) -> Result<Instance> {
    if let Some(n) = size_suffix(name, "matrix_full_", 4)? {
        return matrix_full(n, field);
    }
    if let Some(n) = size_suffix(name, "upper_triangular_", 4)? {
        return upper_triangular(n, field);
    }
    if let Some(m) = size_suffix(name, "group_algebra_cyclic_", 12)? {
        return group_algebra_cyclic(m, field);
    }
    match name {
        "truncated_poly_x2x1" => truncated_poly_x2x1(field),
        "split_idempotent" => split_idempotent(field),
        "dual_numbers" => dual_numbers(field),
        _ => Err(Error::invalid(format!(
            "unknown builtin {name:?}; known: {}",
            BUILTINS.join(", ")
        ))),
    }
}

fn add_quotients(inst: &mut Instance) -> Result<()> {
    let names: Vec<String> = inst.ideals.keys().cloned().collect();
    for n in names {
        let c = crate::algebra::cyclic_module(&inst.algebra, inst.ideal(&n)?)?;
        inst.modules.insert(format!("A/{n}"), c.module);
    }
    inst.modules.insert("regular".into(), AlgebraModule::regular(inst.algebra.clone()));
    Ok(())
}

/// `M_n(k)` with the ideal of matrices whose first column vanishes.
fn matrix_full(n: usize, field: FieldSpec) -> Result<Instance> {
    let a = Arc::new(algebras::matrix_full(n, field)?);
    let mut inst = Instance::new(format!("matrix_full_{n}"), a.clone());
    // 1 - E_00 generates { X : X e_0 = 0 }.
    let mut g = a.unit().to_vec();
    g[0] = field.zero();
    inst.add_ideal("col", vec![g])?;
    add_quotients(&mut inst)?;
    inst.modules.insert("nat".into(), algebras::matrix_natural_module(&a, n));

    let why = "A/col is the column space k^n";
    inst.expect("algebra.dim", json!(n * n), "n^2 matrix units");
    inst.expect("ideal.col.dim", json!(n * (n - 1)), "first column zero, other columns free");
    inst.expect("quotient.col.dim", json!(n), why);
    inst.expect("simplicity.col", json!("Simple"), "k^n is simple over M_n(k)");
    inst.expect("eigenring.col.dim", json!(1), "End of the natural module is the scalars");
    inst.expect("hom.col->col.dim", json!(1), "End of the natural module is the scalars");
    inst.expect("invariants.col.nat.dim", json!(1), "vectors killed by every X with zero first column: span{e_0}");
    inst.expect("invariants.col.regular.dim", json!(n), "matrices whose rows 1..n vanish");
    inst.expect("counit_epi.col.nat", json!(true), "the natural module is generated by e_0");
    inst.expect("counit_epi.col.regular", json!(true), "A is a sum of copies of k^n");
    Ok(inst)
}

/// Upper triangular `T_n(k)` with `I = A E_00 = span{E_00}`.
fn upper_triangular(n: usize, field: FieldSpec) -> Result<Instance> {
    let a = Arc::new(algebras::upper_triangular(n, field)?);
    let d = a.dim();
    let mut inst = Instance::new(format!("upper_triangular_{n}"), a.clone());
    inst.add_ideal("I", vec![unit_vector(field, d, 0)])?;
    add_quotients(&mut inst)?;
    for k in 0..n {
        inst.modules.insert(format!("S{}", k + 1), algebras::upper_triangular_simple(&a, n, k));
    }
    inst.expect("algebra.dim", json!(d), "n(n+1)/2 matrix units");
    inst.expect("ideal.I.dim", json!(1), "only E_00 has a nonzero product with E_00 on the left");
    inst.expect("quotient.I.dim", json!(d - 1), "dim A - dim I");
    inst.expect("counit_epi.I.S1", json!(false), "E_00 acts by 1 on S1, so S1^I = 0");
    if n >= 2 {
        inst.expect("counit_epi.I.S2", json!(true), "I kills S2, so S2^I = S2");
        inst.expect("counit_epi.I.regular", json!(false), "A^I = span{E_ij : i >= 1} generates a proper ideal");
    }
    if n == 2 {
        inst.expect("simplicity.I", json!("NotSimple"), "A/I has the submodule spanned by the class of E_01");
        let line = Subspace::from_vectors(field, 2, [vec![field.one(), field.zero()]]);
        inst.expect("simplicity_witness.I", line.to_json(), "the only proper submodule of A/I");
        inst.expect("eigenring.I.dim", json!(1), "A/I is the indecomposable projective P2");
        inst.expect(
            "complement.I",
            line.to_json(),
            "(A/I)^I is spanned by the class of E_11; its S-stable complement is the class of E_01",
        );
    }
    Ok(inst)
}

fn scalars(field: FieldSpec, coeffs: &[i64]) -> Vec<Scalar> {
    coeffs.iter().map(|&c| field.from_i64(c)).collect()
}

/// `k[x]/(x^2 (x - 1))` with its weight and generalized weight families.
fn truncated_poly_x2x1(field: FieldSpec) -> Result<Instance> {
    let a = Arc::new(algebras::truncated_poly(&[0, 0, -1, 1], field)?);
    let mut inst = Instance::new("truncated_poly_x2x1", a);
    inst.add_ideal("x", vec![scalars(field, &[0, 1, 0])])?;
    inst.add_ideal("x^2", vec![scalars(field, &[0, 0, 1])])?;
    inst.add_ideal("x-1", vec![scalars(field, &[-1, 1, 0])])?;
    add_quotients(&mut inst)?;
    inst.families.insert("weights".into(), FamilySpec::Flat(vec!["x".into(), "x-1".into()]));
    inst.families.insert(
        "generalized".into(),
        FamilySpec::Blocks(vec![vec!["x".into(), "x^2".into()], vec!["x-1".into()]]),
    );
    inst.expect("algebra.dim", json!(3), "degree of x^2(x-1)");
    inst.expect("ideal.x^2.dim", json!(1), "A x^2 is spanned by x^2");
    inst.expect("weight.weights.regular", json!(false), "x acts on A with a nilpotent Jordan block of size 2");
    inst.expect("weight_sum.weights.regular", json!(2), "one eigenvector for each of the roots 0 and 1");
    inst.expect("weight.generalized.regular", json!(true), "A = k[x]/(x^2) x k[x]/(x-1)");
    inst.expect("weight_sum.generalized.regular", json!(3), "generalized eigenspaces fill A");
    inst.expect("invariants.x^2.regular.dim", json!(2), "the annihilator of x^2 is A(x-1)");
    inst.expect("hom.x^2->x.dim", json!(1), "A/x is a quotient of A/x^2");
    inst.expect("hom.x->x-1.dim", json!(0), "distinct eigenvalues");
    Ok(inst)
}

/// `k[x]/(x^2 - x) = k x k` with the two idempotent weights.
fn split_idempotent(field: FieldSpec) -> Result<Instance> {
    let a = Arc::new(algebras::truncated_poly(&[0, -1, 1], field)?);
    let mut inst = Instance::new("split_idempotent", a);
    inst.add_ideal("x", vec![scalars(field, &[0, 1])])?;
    inst.add_ideal("x-1", vec![scalars(field, &[-1, 1])])?;
    add_quotients(&mut inst)?;
    inst.families.insert("weights".into(), FamilySpec::Flat(vec!["x".into(), "x-1".into()]));
    inst.families.insert(
        "generalized".into(),
        FamilySpec::Blocks(vec![vec!["x".into()], vec!["x-1".into()]]),
    );
    inst.expect("algebra.dim", json!(2), "degree of x^2 - x");
    inst.expect("hom.x->x-1.dim", json!(0), "orthogonal idempotents");
    inst.expect("hom.x->x.dim", json!(1), "A/x is one-dimensional");
    inst.expect("weight.weights.regular", json!(true), "x is diagonalizable with eigenvalues 0 and 1");
    inst.expect("weight_sum.weights.regular", json!(2), "x is diagonalizable with eigenvalues 0 and 1");
    inst.expect("counit_epi.x.regular", json!(false), "A^(Ax) = A(x-1) generates only A(x-1)");
    inst.expect("counit_epi.x.A/x", json!(true), "A/x is generated by its unit class");
    Ok(inst)
}

/// `k[x]/(x^2)`, the smallest local algebra that is not a field.
fn dual_numbers(field: FieldSpec) -> Result<Instance> {
    let a = Arc::new(algebras::truncated_poly(&[0, 0, 1], field)?);
    let mut inst = Instance::new("dual_numbers", a);
    inst.add_ideal("x", vec![scalars(field, &[0, 1])])?;
    add_quotients(&mut inst)?;
    inst.families.insert("weights".into(), FamilySpec::Flat(vec!["x".into()]));
    inst.expect("quotient.x.dim", json!(1), "A/x = k");
    inst.expect("simplicity.x", json!("Simple"), "one-dimensional");
    inst.expect("weight.weights.regular", json!(false), "x acts nilpotently but not by zero");
    inst.expect("weight_sum.weights.regular", json!(1), "the socle is spanned by x");
    inst.expect("counit_epi.x.regular", json!(false), "A^(Ax) = Ax");
    Ok(inst)
}

/// Group algebra of `C_m` with augmentation and norm ideals.
fn group_algebra_cyclic(m: usize, field: FieldSpec) -> Result<Instance> {
    let a = Arc::new(algebras::group_algebra_cyclic(m, field)?);
    let mut inst = Instance::new(format!("group_algebra_cyclic_{m}"), a.clone());
    if m >= 2 {
        let mut aug = vec![field.zero(); m];
        aug[0] = -&field.one();
        aug[1] = field.one();
        inst.add_ideal("aug", vec![aug])?;
        inst.expect("ideal.aug.dim", json!(m - 1), "spanned by g^i - 1");
        inst.expect("quotient.aug.dim", json!(1), "the trivial module");
        inst.expect("simplicity.aug", json!("Simple"), "one-dimensional");
    }
    inst.add_ideal("norm", vec![vec![field.one(); m]])?;
    add_quotients(&mut inst)?;
    inst.expect("algebra.dim", json!(m), "one basis element per group element");
    inst.expect("ideal.norm.dim", json!(1), "g fixes the norm element");
    Ok(inst)
}
