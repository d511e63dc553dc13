//! Structure constants for the built-in algebra families.

use std::sync::Arc;

use crate::algebra::{Algebra, AlgebraModule};
use crate::error::{Error, Result};
use crate::linalg::{unit_vector, zero_vector, FieldSpec, Matrix, Scalar};

/// `M_n(k)` with basis `E_ij` at index `i * n + j`.
pub fn matrix_full(n: usize, field: FieldSpec) -> Result<Algebra> {
    if n == 0 {
        return Err(Error::invalid("matrix algebra needs n >= 1"));
    }
    let d = n * n;
    let mut unit = zero_vector(field, d);
    for i in 0..n {
        unit[i * n + i] = field.one();
    }
    Algebra::from_rule(field, d, unit, |x, y| {
        let (i, j) = (x / n, x % n);
        let (k, l) = (y / n, y % n);
        if j == k {
            unit_vector(field, d, i * n + l)
        } else {
            zero_vector(field, d)
        }
    })
}

/// Column vectors `k^n` as a module over `M_n(k)`.
pub fn matrix_natural_module(a: &Arc<Algebra>, n: usize) -> AlgebraModule {
    let field = a.field();
    let action = (0..n * n)
        .map(|x| {
            let mut m = Matrix::zeros(field, n, n);
            m.set(x / n, x % n, field.one());
            m
        })
        .collect();
    AlgebraModule::new(a.clone(), n, action).expect("natural module shapes")
}

/// Index pairs `(i, j)`, `i <= j`, in lexicographic order.
pub fn upper_triangular_basis(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect()
}

/// Upper triangular `n x n` matrices with basis `E_ij`, `i <= j`, lexicographic.
pub fn upper_triangular(n: usize, field: FieldSpec) -> Result<Algebra> {
    if n == 0 {
        return Err(Error::invalid("triangular algebra needs n >= 1"));
    }
    let basis = upper_triangular_basis(n);
    let d = basis.len();
    let index = |p: (usize, usize)| basis.iter().position(|&q| q == p).unwrap();
    let mut unit = zero_vector(field, d);
    for i in 0..n {
        unit[index((i, i))] = field.one();
    }
    Algebra::from_rule(field, d, unit, |x, y| {
        let (i, j) = basis[x];
        let (k, l) = basis[y];
        if j == k {
            unit_vector(field, d, index((i, l)))
        } else {
            zero_vector(field, d)
        }
    })
}

/// The one-dimensional simple module on which `E_kk` acts by 1 and every
/// other basis element by 0.
pub fn upper_triangular_simple(a: &Arc<Algebra>, n: usize, k: usize) -> AlgebraModule {
    let field = a.field();
    let action = upper_triangular_basis(n)
        .into_iter()
        .map(|(i, j)| {
            let x = if i == k && j == k { field.one() } else { field.zero() };
            Matrix::from_vec(field, 1, 1, vec![x])
        })
        .collect();
    AlgebraModule::new(a.clone(), 1, action).expect("simple module shapes")
}

/// `k[x]/(f)` with basis `1, x, ..., x^(d-1)`; `coeffs` lists `f` from the
/// constant term up.
pub fn truncated_poly(coeffs: &[i64], field: FieldSpec) -> Result<Algebra> {
    let f: Vec<Scalar> = coeffs.iter().map(|&c| field.from_i64(c)).collect();
    truncated_poly_scalars(&f, field)
}

pub fn truncated_poly_scalars(f: &[Scalar], field: FieldSpec) -> Result<Algebra> {
    let Some(deg) = f.iter().rposition(|c| !c.is_zero()) else {
        return Err(Error::invalid("relation polynomial is zero"));
    };
    if deg == 0 {
        return Err(Error::invalid("relation polynomial must have degree >= 1"));
    }
    let lead_inv = f[deg].inv();
    // x^d = -sum_{i<d} (c_i / c_d) x^i
    let top: Vec<Scalar> = f[..deg].iter().map(|c| -&(c * &lead_inv)).collect();
    // powers[k] = coordinates of x^k for k < 2d - 1
    let mut powers: Vec<Vec<Scalar>> = (0..deg).map(|k| unit_vector(field, deg, k)).collect();
    for k in deg..(2 * deg - 1) {
        let prev = &powers[k - 1];
        // shift up by one, fold the overflow through x^d
        let mut next = zero_vector(field, deg);
        next[1..].clone_from_slice(&prev[..deg - 1]);
        let overflow = prev[deg - 1].clone();
        for (slot, t) in next.iter_mut().zip(&top) {
            slot.add_product(&overflow, t);
        }
        powers.push(next);
    }
    Algebra::from_rule(field, deg, unit_vector(field, deg, 0), |i, j| powers[i + j].clone())
}

/// Group algebra of the cyclic group of order `m`, basis `g^0, ..., g^(m-1)`.
pub fn group_algebra_cyclic(m: usize, field: FieldSpec) -> Result<Algebra> {
    if m == 0 {
        return Err(Error::invalid("cyclic group order must be >= 1"));
    }
    Algebra::from_rule(field, m, unit_vector(field, m, 0), |i, j| unit_vector(field, m, (i + j) % m))
}

/// Direct product `A x B` with basis `(e_i, 0)` followed by `(0, f_j)`.
pub fn direct_product(a: &Algebra, b: &Algebra) -> Result<Algebra> {
    if a.field() != b.field() {
        return Err(Error::invalid("direct product of algebras over different fields"));
    }
    let field = a.field();
    let (n, m) = (a.dim(), b.dim());
    let mut unit = a.unit().to_vec();
    unit.extend(b.unit().iter().cloned());
    Algebra::from_rule(field, n + m, unit, |x, y| {
        let mut out = zero_vector(field, n + m);
        if x < n && y < n {
            for (k, slot) in out[..n].iter_mut().enumerate() {
                *slot = a.constant(x, y, k).clone();
            }
        } else if x >= n && y >= n {
            for k in 0..m {
                out[n + k] = b.constant(x - n, y - n, k).clone();
            }
        }
        out
    })
}
