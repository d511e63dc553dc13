//! Seeded sampling of algebras, ideals, modules and functors.
//!
//! Scalars are drawn with [`FieldSpec::sample`]: uniform in `{-2..2}` over
//! the rationals and uniform over `F_p`. Vectors are made sparse by zeroing
//! each coordinate with probability 1/2, which makes proper submodules and
//! nontrivial quotients common. Every object is built by a construction that
//! is valid by design (quotients, submodules, kernels and cokernels of
//! natural transformations); the result is then validated.

use std::sync::Arc;

use rand::Rng;

use crate::algebra::{generated_submodule, left_ideal_closure, Algebra, AlgebraModule, LeftIdeal};
use crate::corpus::algebras;
use crate::error::{Error, Result};
use crate::linalg::{FieldSpec, Matrix, Scalar, Subspace};
use crate::subcategory::{cokernel_functor, kernel_functor, nat_space, yoneda, FunctorRep, NatTrans, SubcategoryB};

pub fn sparse_vector<R: Rng + ?Sized>(field: FieldSpec, n: usize, rng: &mut R) -> Vec<Scalar> {
    (0..n).map(|_| if rng.gen_bool(0.5) { field.zero() } else { field.sample(rng) }).collect()
}

pub fn dense_vector<R: Rng + ?Sized>(field: FieldSpec, n: usize, rng: &mut R) -> Vec<Scalar> {
    (0..n).map(|_| field.sample(rng)).collect()
}

fn free_module(a: &Arc<Algebra>, copies: usize) -> AlgebraModule {
    let reg = AlgebraModule::regular(a.clone());
    let mut m = reg.clone();
    for _ in 1..copies {
        m = m.direct_sum(&reg);
    }
    m
}

/// A module of dimension at most `max_dim`: a quotient or submodule of a
/// small free module, or a direct sum of two such.
pub fn random_module<R: Rng + ?Sized>(a: &Arc<Algebra>, max_dim: usize, rng: &mut R) -> AlgebraModule {
    let field = a.field();
    let n = a.dim();
    match rng.gen_range(0..4) {
        0 => {
            // generated submodule of A or A^2
            let copies = if 2 * n <= 12 && rng.gen_bool(0.3) { 2 } else { 1 };
            let free = free_module(a, copies);
            let v = sparse_vector(field, free.dim(), rng);
            let sub = generated_submodule(&free, &[v]);
            if sub.dim() <= max_dim {
                return free.submodule(&sub).expect("generated submodules are stable");
            }
            random_quotient(a, &free, max_dim, rng)
        }
        1 if max_dim >= 2 => {
            let d1 = rng.gen_range(1..max_dim);
            let x = random_module(a, d1, rng);
            let y = random_module(a, max_dim - x.dim(), rng);
            x.direct_sum(&y)
        }
        _ => {
            let copies = if 2 * n <= 12 && rng.gen_bool(0.3) { 2 } else { 1 };
            let free = free_module(a, copies);
            random_quotient(a, &free, max_dim, rng)
        }
    }
}

/// Quotients `free` by random generated submodules until the dimension fits.
fn random_quotient<R: Rng + ?Sized>(a: &Arc<Algebra>, free: &AlgebraModule, max_dim: usize, rng: &mut R) -> AlgebraModule {
    let field = a.field();
    let mut gens = Vec::new();
    for _ in 0..rng.gen_range(0..=2) {
        gens.push(sparse_vector(field, free.dim(), rng));
    }
    loop {
        let sub = generated_submodule(free, &gens);
        if free.dim() - sub.dim() <= max_dim {
            return free.quotient(&sub).expect("generated submodules are stable").0;
        }
        gens.push(sparse_vector(field, free.dim(), rng));
    }
}

/// Random proper left ideal: the zero ideal or the closure of one or two
/// sparse elements. Returns `None` if every attempt produced the whole algebra.
pub fn random_left_ideal<R: Rng + ?Sized>(a: &Arc<Algebra>, rng: &mut R) -> Option<LeftIdeal> {
    for _ in 0..16 {
        if rng.gen_bool(0.15) {
            return Some(LeftIdeal::zero(a.clone()));
        }
        let k = rng.gen_range(1..=2);
        let gens: Vec<Vec<Scalar>> = (0..k).map(|_| sparse_vector(a.field(), a.dim(), rng)).collect();
        let i = left_ideal_closure(a, &gens).ok()?;
        if i.dim() < a.dim() {
            return Some(i);
        }
    }
    None
}

/// Up to `max` pairwise distinct proper left ideals, at least one.
pub fn random_ideals<R: Rng + ?Sized>(a: &Arc<Algebra>, max: usize, rng: &mut R) -> Vec<(String, LeftIdeal)> {
    let want = rng.gen_range(1..=max.max(1));
    let mut out: Vec<LeftIdeal> = Vec::new();
    for _ in 0..8 * want {
        if out.len() == want {
            break;
        }
        if let Some(i) = random_left_ideal(a, rng) {
            if !out.contains(&i) {
                out.push(i);
            }
        }
    }
    if out.is_empty() {
        out.push(LeftIdeal::zero(a.clone()));
    }
    out.into_iter().enumerate().map(|(k, i)| (format!("I{k}"), i)).collect()
}

/// Random combination of a basis of `Nat(F, G)`.
pub fn random_nat<R: Rng + ?Sized>(b: &SubcategoryB, f: &FunctorRep, g: &FunctorRep, rng: &mut R) -> NatTrans {
    let field = b.field();
    let space = nat_space(b, f, g);
    let coeffs: Vec<Scalar> = (0..space.dim()).map(|_| field.sample(rng)).collect();
    space.combine(field, &coeffs)
}

fn representable_sum<R: Rng + ?Sized>(b: &SubcategoryB, reps: &[FunctorRep], count: usize, rng: &mut R) -> FunctorRep {
    let mut f = FunctorRep::zero(b);
    for _ in 0..count {
        f = f.direct_sum(&reps[rng.gen_range(0..reps.len())], b.field());
    }
    f
}

/// A functor `B^op -> vect` of total dimension at most `max_total`.
///
/// Drawn as `Y(V)` for a random module, a cokernel of a random map between
/// sums of representables, a kernel of a random map `Y(V) => Y(W)`, or a
/// direct sum of smaller samples, retrying draws that come out zero or too
/// large. Falls back to the smallest representable that fits, then to zero.
pub fn random_functor<R: Rng + ?Sized>(b: &SubcategoryB, max_total: usize, rng: &mut R) -> FunctorRep {
    let field = b.field();
    let a = b.algebra();
    let reps: Vec<FunctorRep> = b.objects().iter().map(|o| yoneda(b, &o.cyclic.module)).collect();
    for attempt in 0..12 {
        let mut branch = rng.gen_range(0..10);
        if branch == 0 && attempt > 0 {
            branch = 3;
        }
        if branch == 9 && max_total < 2 {
            branch = 1;
        }
        let f = match branch {
            0 => return FunctorRep::zero(b),
            1 | 2 => yoneda(b, &random_module(a, max_total.max(1), rng)),
            3..=6 => {
                let p0 = representable_sum(b, &reps, rng.gen_range(1..=2), rng);
                let p1 = representable_sum(b, &reps, rng.gen_range(0..=2), rng);
                let theta = random_nat(b, &p1, &p0, rng);
                cokernel_functor(b, &p0, &theta).0
            }
            7 | 8 => {
                let v = yoneda(b, &random_module(a, max_total.max(1) + 2, rng));
                let w = yoneda(b, &random_module(a, max_total.max(1), rng));
                let theta = random_nat(b, &v, &w, rng);
                kernel_functor(b, &v, &theta).0
            }
            _ => {
                let half = max_total / 2;
                random_functor(b, half, rng).direct_sum(&random_functor(b, half, rng), field)
            }
        };
        // Only the explicit branch may return zero.
        if f.total_dim() <= max_total && f.total_dim() > 0 {
            return f;
        }
    }
    reps.into_iter()
        .filter(|r| r.total_dim() <= max_total)
        .min_by_key(|r| r.total_dim())
        .unwrap_or_else(|| FunctorRep::zero(b))
}

/// Subalgebra of `M_k` generated by the given matrices, with the canonical
/// basis of its span.
pub fn matrix_subalgebra(field: FieldSpec, k: usize, generators: &[Matrix]) -> Result<Algebra> {
    let flat = |m: &Matrix| m.data().to_vec();
    let mut span = Subspace::from_vectors(field, k * k, std::iter::once(flat(&Matrix::identity(field, k))));
    span = span.sum(&Subspace::from_vectors(field, k * k, generators.iter().map(flat)));
    loop {
        let basis: Vec<Matrix> = span.vectors().into_iter().map(|v| Matrix::from_vec(field, k, k, v)).collect();
        let mut products = Vec::new();
        for x in &basis {
            for y in &basis {
                products.push(flat(&x.mul(y)));
            }
        }
        let next = span.sum(&Subspace::from_vectors(field, k * k, products));
        if next.dim() == span.dim() {
            break;
        }
        span = next;
    }
    let basis: Vec<Matrix> = span.vectors().into_iter().map(|v| Matrix::from_vec(field, k, k, v)).collect();
    let d = basis.len();
    let unit = span
        .coordinates(&flat(&Matrix::identity(field, k)))
        .ok_or_else(|| Error::inconsistent("identity missing from generated subalgebra"))?;
    let mut structure = Vec::with_capacity(d * d * d);
    for x in &basis {
        for y in &basis {
            structure.extend(
                span.coordinates(&flat(&x.mul(y)))
                    .ok_or_else(|| Error::inconsistent("generated subalgebra not closed"))?,
            );
        }
    }
    Algebra::new(field, d, structure, unit)
}

/// A random algebra of dimension at most `max_dim` (at least 4 is useful)
/// with a short description of how it was built.
pub fn random_algebra<R: Rng + ?Sized>(field: FieldSpec, max_dim: usize, rng: &mut R) -> (String, Algebra) {
    for _ in 0..32 {
        let pick: Result<(String, Algebra)> = match rng.gen_range(0..7) {
            0 => {
                let k = rng.gen_range(2..=3);
                let gens: Vec<Matrix> = (0..rng.gen_range(1..=2))
                    .map(|_| Matrix::from_vec(field, k, k, sparse_vector(field, k * k, rng)))
                    .collect();
                matrix_subalgebra(field, k, &gens).map(|a| (format!("subalgebra of M{k}"), a))
            }
            1 => {
                // product of (x - r) over small integer roots, repeated
                let deg = rng.gen_range(1..=max_dim.min(4));
                let mut poly = vec![1i64];
                let mut roots = Vec::new();
                for _ in 0..deg {
                    let r: i64 = rng.gen_range(-1..=2);
                    roots.push(r);
                    let mut next = vec![0i64; poly.len() + 1];
                    for (i, c) in poly.iter().enumerate() {
                        next[i + 1] += c;
                        next[i] -= r * c;
                    }
                    poly = next;
                }
                algebras::truncated_poly(&poly, field).map(|a| (format!("truncated poly with roots {roots:?}"), a))
            }
            2 => algebras::upper_triangular(rng.gen_range(2..=3), field).map(|a| ("upper triangular".into(), a)),
            3 => algebras::matrix_full(2, field).map(|a| ("M2".into(), a)),
            4 => {
                let m = rng.gen_range(2..=max_dim.clamp(2, 6));
                algebras::group_algebra_cyclic(m, field).map(|a| (format!("cyclic group algebra C{m}"), a))
            }
            5 => {
                let (n1, a1) = random_algebra(field, 4, rng);
                let (n2, a2) = random_algebra(field, 4, rng);
                algebras::direct_product(&a1, &a2).map(|a| (format!("({n1}) x ({n2})"), a))
            }
            _ => algebras::truncated_poly(&[0, 0, 1], field).map(|a| ("dual numbers".into(), a)),
        };
        if let Ok((name, a)) = pick {
            if a.dim() <= max_dim {
                return (name, a);
            }
        }
    }
    ("dual numbers".into(), algebras::truncated_poly(&[0, 0, 1], field).expect("valid"))
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::algebra::{validate_algebra, validate_module};
    use crate::subcategory::{build_subcategory, validate_functor};

    #[test]
    fn sampled_objects_validate() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for field in [FieldSpec::Rationals, FieldSpec::prime(5).unwrap()] {
            for _ in 0..6 {
                let (_, a) = random_algebra(field, 8, &mut rng);
                assert!(a.dim() <= 8);
                assert!(validate_algebra(&a).passed());
                let a = Arc::new(a);
                let v = random_module(&a, 6, &mut rng);
                assert!(v.dim() <= 6);
                assert!(validate_module(&v).passed());
                let ideals = random_ideals(&a, 3, &mut rng);
                let b = build_subcategory(&a, &ideals).unwrap();
                let f = random_functor(&b, 4, &mut rng);
                assert!(f.total_dim() <= 4);
                assert!(validate_functor(&b, &f).passed());
            }
        }
    }

    #[test]
    fn matrix_subalgebra_of_diagonal() {
        let q = FieldSpec::Rationals;
        let d = Matrix::from_i64(q, &[&[1, 0], &[0, 2]]);
        let a = matrix_subalgebra(q, 2, &[d]).unwrap();
        assert_eq!(a.dim(), 2);
        let n = Matrix::from_i64(q, &[&[0, 1], &[0, 0]]);
        assert_eq!(matrix_subalgebra(q, 2, &[n]).unwrap().dim(), 2);
    }

    #[test]
    fn sampling_is_deterministic() {
        let q = FieldSpec::Rationals;
        let draw = || {
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            let (name, a) = random_algebra(q, 8, &mut rng);
            let a = Arc::new(a);
            (name, random_module(&a, 6, &mut rng).action().to_vec())
        };
        assert_eq!(draw(), draw());
    }
}
