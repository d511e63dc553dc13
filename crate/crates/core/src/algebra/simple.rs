//! Deciding simplicity of modules.
//!
//! Over a small prime field the decision is exhaustive: every projective point
//! of `V` is spun. Over the rationals, a proper submodule found by probing
//! proves non-simplicity; simplicity is certified by reducing the action
//! matrices modulo a prime `p` that divides no denominator and running the
//! exhaustive test there. A proper rational submodule `W` gives the saturated
//! lattice `W ∩ Z_(p)^m`, which reduces to a proper nonzero stable subspace, so
//! a simple reduction implies a simple rational module.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::module::{spin, AlgebraModule};
use crate::error::{Error, Result};
use crate::linalg::{is_prime, FieldSpec, Matrix, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Simplicity {
    Simple,
    NotSimple,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicityVerdict {
    pub verdict: Simplicity,
    /// A vector generating a proper nonzero submodule. Absent only for the
    /// zero module, which has no nonzero vectors.
    pub witness: Option<Vec<Scalar>>,
    pub certificate: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SimplicityBudget {
    /// Largest `p^dim` for which exhaustive enumeration is attempted.
    pub max_enumeration: u64,
    /// Number of seeded random probe vectors over the rationals.
    pub random_probes: usize,
    /// Number of sampled algebra elements whose kernels are probed.
    pub kernel_probes: usize,
    /// Primes tried for the reduction certificate are below this bound.
    pub prime_search_limit: u64,
    pub seed: u64,
}

impl Default for SimplicityBudget {
    fn default() -> Self {
        SimplicityBudget {
            max_enumeration: 1 << 20,
            random_probes: 8,
            kernel_probes: 8,
            prime_search_limit: 100,
            seed: 0,
        }
    }
}

impl SimplicityBudget {
    pub fn validate(&self) -> Result<()> {
        if self.max_enumeration < 2 {
            return Err(Error::invalid("enumeration budget must be at least 2"));
        }
        Ok(())
    }
}

pub fn is_simple(v: &AlgebraModule, budget: &SimplicityBudget) -> Result<SimplicityVerdict> {
    budget.validate()?;
    is_simple_action(v.field(), v.dim(), v.action(), budget)
}

/// Simplicity of `k^dim` under the algebra generated by `mats`.
pub fn is_simple_action(
    field: FieldSpec,
    dim: usize,
    mats: &[Matrix],
    budget: &SimplicityBudget,
) -> Result<SimplicityVerdict> {
    budget.validate()?;
    if dim == 0 {
        return Ok(SimplicityVerdict {
            verdict: Simplicity::NotSimple,
            witness: None,
            certificate: "zero module: simple modules are nonzero".into(),
        });
    }
    if let FieldSpec::PrimeField { characteristic: p } = field {
        if let Some(count) = enumeration_size(p, dim, budget.max_enumeration) {
            return Ok(exhaustive(field, dim, mats, count));
        }
    }
    if let Some(verdict) = probe(field, dim, mats, budget) {
        return Ok(verdict);
    }
    match field {
        FieldSpec::Rationals => Ok(reduction_certificate(dim, mats, budget)),
        FieldSpec::PrimeField { characteristic } => Ok(SimplicityVerdict {
            verdict: Simplicity::Unknown,
            witness: None,
            certificate: format!(
                "{characteristic}^{dim} exceeds the enumeration budget and probes found no submodule"
            ),
        }),
    }
}

/// Number of projective points `(p^dim - 1)/(p - 1)` if `p^dim` fits the budget.
fn enumeration_size(p: u64, dim: usize, budget: u64) -> Option<u64> {
    let mut total: u64 = 1;
    for _ in 0..dim {
        total = total.checked_mul(p)?;
        if total > budget {
            return None;
        }
    }
    Some((total - 1) / (p - 1))
}

/// Spins every nonzero vector up to scalars (leading nonzero coordinate 1).
fn exhaustive(field: FieldSpec, dim: usize, mats: &[Matrix], count: u64) -> SimplicityVerdict {
    let p = field.characteristic();
    let mut spins = 0u64;
    for lead in 0..dim {
        let tail = dim - lead - 1;
        let combos = p.pow(tail as u32);
        for code in 0..combos {
            let mut v = vec![field.zero(); dim];
            v[lead] = field.one();
            let mut c = code;
            for slot in v.iter_mut().skip(lead + 1) {
                *slot = field.from_i64((c % p) as i64);
                c /= p;
            }
            spins += 1;
            let sub = spin(field, dim, mats, std::slice::from_ref(&v));
            if !sub.is_full() {
                return SimplicityVerdict {
                    verdict: Simplicity::NotSimple,
                    witness: Some(v),
                    certificate: format!(
                        "vector generates a proper submodule of dimension {}",
                        sub.dim()
                    ),
                };
            }
        }
    }
    debug_assert_eq!(spins, count);
    SimplicityVerdict {
        verdict: Simplicity::Simple,
        witness: None,
        certificate: format!("exhaustive over {field}: all {spins} spins generate"),
    }
}

fn probe(field: FieldSpec, dim: usize, mats: &[Matrix], budget: &SimplicityBudget) -> Option<SimplicityVerdict> {
    let proper = |v: &Vec<Scalar>, how: &str| -> Option<SimplicityVerdict> {
        if v.iter().all(Scalar::is_zero) {
            return None;
        }
        let sub = spin(field, dim, mats, std::slice::from_ref(v));
        (!sub.is_full()).then(|| SimplicityVerdict {
            verdict: Simplicity::NotSimple,
            witness: Some(v.clone()),
            certificate: format!("{how} generates a proper submodule of dimension {}", sub.dim()),
        })
    };
    for i in 0..dim {
        if let Some(v) = proper(&crate::linalg::unit_vector(field, dim, i), "basis vector") {
            return Some(v);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    for _ in 0..budget.random_probes {
        let v: Vec<Scalar> = (0..dim).map(|_| field.sample(&mut rng)).collect();
        if let Some(v) = proper(&v, "random probe") {
            return Some(v);
        }
    }
    for _ in 0..budget.kernel_probes {
        let coeffs: Vec<Scalar> = mats.iter().map(|_| field.sample(&mut rng)).collect();
        let element = Matrix::combination(field, dim, dim, &coeffs, mats);
        for k in element.kernel().vectors() {
            if let Some(v) = proper(&k, "kernel vector of a sampled element") {
                return Some(v);
            }
        }
    }
    None
}

fn reduction_certificate(dim: usize, mats: &[Matrix], budget: &SimplicityBudget) -> SimplicityVerdict {
    let mut tried = Vec::new();
    for p in 2..budget.prime_search_limit {
        if !is_prime(p) {
            continue;
        }
        let Some(count) = enumeration_size(p, dim, budget.max_enumeration) else {
            break;
        };
        let Some(reduced) = reduce_matrices(mats, p) else {
            tried.push(format!("{p}: divides a denominator"));
            continue;
        };
        let fp = FieldSpec::PrimeField { characteristic: p };
        let v = exhaustive(fp, dim, &reduced, count);
        if v.verdict == Simplicity::Simple {
            return SimplicityVerdict {
                verdict: Simplicity::Simple,
                witness: None,
                certificate: format!("reduction mod {p} is simple ({})", v.certificate),
            };
        }
        tried.push(format!("{p}: reduction not simple"));
    }
    SimplicityVerdict {
        verdict: Simplicity::Unknown,
        witness: None,
        certificate: if tried.is_empty() {
            "no reduction prime within the enumeration budget".into()
        } else {
            format!("no certifying reduction prime ({})", tried.join("; "))
        },
    }
}

fn reduce_matrices(mats: &[Matrix], p: u64) -> Option<Vec<Matrix>> {
    let fp = FieldSpec::PrimeField { characteristic: p };
    mats.iter()
        .map(|m| {
            let data = m.data().iter().map(|x| x.reduce_mod(p)).collect::<Option<Vec<_>>>()?;
            Some(Matrix::from_vec(fp, m.rows(), m.cols(), data))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::algebra::{cyclic_module, left_ideal_closure};
    use crate::corpus::algebras;

    #[test]
    fn zero_module_is_not_simple() {
        let a = Arc::new(algebras::matrix_full(2, FieldSpec::Rationals).unwrap());
        let v = is_simple(&AlgebraModule::zero(a), &SimplicityBudget::default()).unwrap();
        assert_eq!(v.verdict, Simplicity::NotSimple);
    }

    #[test]
    fn column_module_over_f2_takes_three_spins() {
        let f2 = FieldSpec::prime(2).unwrap();
        let a = Arc::new(algebras::matrix_full(2, f2).unwrap());
        let nat = algebras::matrix_natural_module(&a, 2);
        let v = is_simple(&nat, &SimplicityBudget::default()).unwrap();
        assert_eq!(v.verdict, Simplicity::Simple);
        assert!(v.certificate.contains("3 spins"), "{}", v.certificate);
    }

    #[test]
    fn rational_column_module_certified_mod_two() {
        let q = FieldSpec::Rationals;
        let a = Arc::new(algebras::matrix_full(2, q).unwrap());
        let col = left_ideal_closure(&a, &[vec![q.zero(), q.one(), q.zero(), q.zero()]]).unwrap();
        let c = cyclic_module(&a, &col).unwrap();
        let v = is_simple(&c.module, &SimplicityBudget::default()).unwrap();
        assert_eq!(v.verdict, Simplicity::Simple);
        assert!(v.certificate.contains("mod 2"), "{}", v.certificate);
        assert!(v.certificate.contains("3 spins"), "{}", v.certificate);
    }

    #[test]
    fn t2_quotient_is_not_simple() {
        let q = FieldSpec::Rationals;
        let a = Arc::new(algebras::upper_triangular(2, q).unwrap());
        let i = left_ideal_closure(&a, &[vec![q.one(), q.zero(), q.zero()]]).unwrap();
        let c = cyclic_module(&a, &i).unwrap();
        let v = is_simple(&c.module, &SimplicityBudget::default()).unwrap();
        assert_eq!(v.verdict, Simplicity::NotSimple);
        let w = v.witness.unwrap();
        // The witness spans the class of e12.
        assert_eq!(w, c.class_of(&[q.zero(), q.one(), q.zero()]));
    }

    #[test]
    fn field_extension_needs_inert_prime() {
        // Q[x]/(x^2+1) acting on itself: simple over Q, splits mod 5, stays simple mod 3.
        let q = FieldSpec::Rationals;
        let a = Arc::new(algebras::truncated_poly(&[1, 0, 1], q).unwrap());
        let reg = AlgebraModule::regular(a);
        let v = is_simple(&reg, &SimplicityBudget::default()).unwrap();
        assert_eq!(v.verdict, Simplicity::Simple);
        assert!(v.certificate.contains("mod 3"), "{}", v.certificate);
    }

    #[test]
    fn invalid_budget_rejected() {
        let a = Arc::new(algebras::matrix_full(1, FieldSpec::Rationals).unwrap());
        let b = SimplicityBudget { max_enumeration: 0, ..Default::default() };
        assert!(is_simple(&AlgebraModule::regular(a), &b).is_err());
    }
}
