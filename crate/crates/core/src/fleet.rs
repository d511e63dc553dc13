//! Seeded fleets of random adjunction instances.
//!
//! Instance `i` draws everything from a ChaCha8 stream keyed by `(seed, i)`,
//! so each instance is reproducible on its own and the fleet does not depend
//! on evaluation order.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::adjunction::{adjunction_dim_check, triangle_audit};
use crate::error::Result;
use crate::linalg::FieldSpec;
use crate::par::{map_indexed, Strategy};
use crate::random::{random_algebra, random_functor, random_ideals, random_module};
use crate::report::{AuditReport, SCHEMA_TAG};
use crate::subcategory::build_subcategory;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FleetKind {
    /// `dim Nat(F, Y(V)) = dim Hom(|F|, V)` and the explicit bijection.
    Adjunction,
    /// Both triangle identities as exact matrix equations.
    Triangle,
}

impl FleetKind {
    pub fn label(self) -> &'static str {
        match self {
            FleetKind::Adjunction => "adjunction-fleet",
            FleetKind::Triangle => "triangle-fleet",
        }
    }
}

#[derive(Clone, Debug)]
pub struct FleetConfig {
    pub count: usize,
    pub max_algebra_dim: usize,
    pub max_ideals: usize,
    pub max_module_dim: usize,
    pub max_functor_dim: usize,
    pub seed: u64,
    /// Instance `i` uses `fields[i % fields.len()]`.
    pub fields: Vec<FieldSpec>,
}

impl Default for FleetConfig {
    fn default() -> Self {
        FleetConfig {
            count: 100,
            max_algebra_dim: 8,
            max_ideals: 3,
            max_module_dim: 6,
            max_functor_dim: 8,
            seed: 0,
            fields: vec![FieldSpec::Rationals, FieldSpec::PrimeField { characteristic: 5 }],
        }
    }
}

#[derive(Clone, Debug)]
pub struct FleetEntry {
    pub index: usize,
    pub field: FieldSpec,
    pub algebra: String,
    pub algebra_dim: usize,
    pub ideal_dims: Vec<usize>,
    pub functor_dim: usize,
    pub module_dim: usize,
    pub report: AuditReport,
}

impl FleetEntry {
    pub fn passed(&self) -> bool {
        self.report.passed()
    }

    fn summary(&self) -> Value {
        json!({
            "index": self.index,
            "field": self.field.label(),
            "algebra": self.algebra,
            "algebra_dim": self.algebra_dim,
            "ideal_dims": self.ideal_dims,
            "functor_dim": self.functor_dim,
            "module_dim": self.module_dim,
        })
    }
}

#[derive(Clone, Debug)]
pub struct FleetReport {
    pub kind: FleetKind,
    pub seed: u64,
    pub entries: Vec<FleetEntry>,
}

impl FleetReport {
    pub fn passed_count(&self) -> usize {
        self.entries.iter().filter(|e| e.passed()).count()
    }

    /// One check per instance; failing instances carry their full sub-report.
    pub fn audit(&self) -> AuditReport {
        let mut report = AuditReport::new(self.kind.label());
        for e in &self.entries {
            let mut witness = e.summary();
            if e.passed() {
                if let Some(c) = e.report.find("hom-nat-dimensions") {
                    witness["dimensions"] = c.witness.clone();
                }
            } else {
                witness["report"] = e.report.to_json();
            }
            let anchor = match self.kind {
                FleetKind::Adjunction => "adjunction-hom-nat-bijection",
                FleetKind::Triangle => "triangle-identities",
            };
            report.check(format!("instance-{}", e.index), anchor, e.passed(), witness);
        }
        report
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema": SCHEMA_TAG,
            "command": self.kind.label(),
            "seed": self.seed,
            "count": self.entries.len(),
            "passed": self.passed_count(),
            "report": self.audit().to_json(),
        })
    }
}

fn instance_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// Builds and audits fleet instance `index`.
pub fn run_instance(config: &FleetConfig, kind: FleetKind, index: usize) -> Result<FleetEntry> {
    let mut rng = instance_rng(config.seed, index);
    let field = config.fields[index % config.fields.len()];
    let (algebra, a) = random_algebra(field, config.max_algebra_dim, &mut rng);
    let a = Arc::new(a);
    let ideals = random_ideals(&a, config.max_ideals, &mut rng);
    let b = build_subcategory(&a, &ideals)?;
    let f = random_functor(&b, config.max_functor_dim, &mut rng);
    let v = random_module(&a, config.max_module_dim, &mut rng);
    let mut report = match kind {
        FleetKind::Adjunction => adjunction_dim_check(&b, &f, &v)?,
        FleetKind::Triangle => triangle_audit(&b, &f, &v)?,
    };
    report.instance = format!("{}-{index}", kind.label());
    Ok(FleetEntry {
        index,
        field,
        algebra,
        algebra_dim: a.dim(),
        ideal_dims: ideals.iter().map(|(_, i)| i.dim()).collect(),
        functor_dim: f.total_dim(),
        module_dim: v.dim(),
        report,
    })
}

pub fn run_fleet(config: &FleetConfig, kind: FleetKind, strategy: Strategy) -> Result<FleetReport> {
    let entries = map_indexed(config.count, strategy, |i| run_instance(config, kind, i));
    Ok(FleetReport { kind, seed: config.seed, entries: entries.into_iter().collect::<Result<_>>()? })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> FleetConfig {
        FleetConfig { count: 6, max_algebra_dim: 4, max_functor_dim: 3, max_module_dim: 4, ..Default::default() }
    }

    #[test]
    fn small_fleets_pass() {
        for kind in [FleetKind::Adjunction, FleetKind::Triangle] {
            let r = run_fleet(&small(), kind, Strategy::Parallel).unwrap();
            assert_eq!(r.passed_count(), 6, "{}", r.to_json());
        }
    }

    #[test]
    fn order_and_strategy_do_not_matter() {
        let c = small();
        let seq = run_fleet(&c, FleetKind::Adjunction, Strategy::Sequential).unwrap().to_json();
        let par = run_fleet(&c, FleetKind::Adjunction, Strategy::Parallel).unwrap().to_json();
        assert_eq!(seq, par);
        let alone = run_instance(&c, FleetKind::Adjunction, 4).unwrap();
        assert_eq!(alone.summary(), run_fleet(&c, FleetKind::Adjunction, Strategy::Sequential).unwrap().entries[4].summary());
    }
}
