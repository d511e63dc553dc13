use crate::algebra::AlgebraModule;
use crate::error::{Error, Result};
use crate::linalg::{quotient_of, Matrix, QuotientSpace, Scalar, Subspace};
use crate::subcategory::{FunctorRep, NatTrans, SubcategoryB};

/// The realization `|F|`: the direct sum of blocks `i(B) ⊗ F(B)` modulo the
/// relations `g(b) ⊗ v - b ⊗ F(g)(v)`.
///
/// Within block `B`, the tensor `e_x ⊗ e_v` sits at `offset_B + x * dim F(B) + v`.
#[derive(Clone, Debug)]
pub struct Realization {
    pub module: AlgebraModule,
    /// `κ_B`: the projection restricted to the `B`-block.
    pub structure_maps: Vec<Matrix>,
    pub ambient: usize,
    pub offsets: Vec<usize>,
    pub block_dims: Vec<(usize, usize)>,
    pub quotient: QuotientSpace,
}

impl Realization {
    pub fn dim(&self) -> usize {
        self.module.dim()
    }

    /// Ambient index of `e_x ⊗ e_v` in block `o`.
    pub fn index(&self, o: usize, x: usize, v: usize) -> usize {
        self.offsets[o] + x * self.block_dims[o].1 + v
    }
}

pub fn realize(b: &SubcategoryB, f: &FunctorRep) -> Result<Realization> {
    f.check_shape(b)?;
    let field = b.field();
    let k = b.len();
    let block_dims: Vec<(usize, usize)> = (0..k).map(|o| (b.object(o).dim(), f.spaces[o])).collect();
    let mut offsets = Vec::with_capacity(k);
    let mut ambient = 0;
    for &(x, v) in &block_dims {
        offsets.push(ambient);
        ambient += x * v;
    }
    let at = |o: usize, x: usize, v: usize| offsets[o] + x * block_dims[o].1 + v;

    let mut relations = Vec::new();
    for (s, t, i) in b.hom_basis_ids() {
        let g = &b.hom(s, t).basis()[i];
        let fg = &f.maps[s][t][i];
        for x in 0..block_dims[s].0 {
            for y in 0..block_dims[t].1 {
                // g(e_x) ⊗ e_y  -  e_x ⊗ F(g)(e_y)
                let mut r = vec![field.zero(); ambient];
                for xp in 0..block_dims[t].0 {
                    let c = g.get(xp, x);
                    if !c.is_zero() {
                        r[at(t, xp, y)] = &r[at(t, xp, y)] + c;
                    }
                }
                for u in 0..block_dims[s].1 {
                    let c = fg.get(u, y);
                    if !c.is_zero() {
                        r[at(s, x, u)] = &r[at(s, x, u)] - c;
                    }
                }
                relations.push(r);
            }
        }
    }
    let rel = Subspace::from_vectors(field, ambient, relations);
    let quotient = quotient_of(ambient, &rel);

    let a = b.algebra();
    let mut action = Vec::with_capacity(a.dim());
    for e in 0..a.dim() {
        let mut big = Matrix::zeros(field, ambient, ambient);
        for o in 0..k {
            let (dx, dv) = block_dims[o];
            if dx * dv == 0 {
                continue;
            }
            let rho = &b.object(o).cyclic.module.action()[e];
            big.set_block(offsets[o], offsets[o], &rho.kron(&Matrix::identity(field, dv)));
        }
        if !rel.is_stable_under(&big) {
            return Err(Error::inconsistent(format!(
                "relation subspace is not stable under basis element {e}"
            )));
        }
        action.push(quotient.induced(&big));
    }
    let module = AlgebraModule::new(a.clone(), quotient.dim(), action)?;
    let structure_maps = (0..k)
        .map(|o| {
            let (dx, dv) = block_dims[o];
            quotient.projection.block(0, offsets[o], quotient.dim(), dx * dv)
        })
        .collect();
    Ok(Realization { module, structure_maps, ambient, offsets, block_dims, quotient })
}

/// `|θ|` for `θ: F => G`, induced blockwise by `1 ⊗ θ_B`.
pub fn realize_map(rf: &Realization, rg: &Realization, theta: &NatTrans) -> Result<Matrix> {
    let field = rf.module.field();
    let mut big = Matrix::zeros(field, rg.ambient, rf.ambient);
    for (o, t) in theta.components.iter().enumerate() {
        let (dx, _) = rf.block_dims[o];
        if t.rows() * t.cols() * dx == 0 {
            continue;
        }
        big.set_block(rg.offsets[o], rf.offsets[o], &Matrix::identity(field, dx).kron(t));
    }
    let image = rf.quotient.killed.map(&big);
    if !rg.quotient.killed.contains_subspace(&image) {
        return Err(Error::inconsistent("transformation does not preserve the coend relations"));
    }
    Ok(rg.quotient.projection.mul(&big).mul(&rf.quotient.section))
}

/// Image of `e_x ⊗ v` under `κ_o`.
pub fn structure_image(r: &Realization, o: usize, x: usize, v: &[Scalar]) -> Vec<Scalar> {
    let field = r.module.field();
    let dv = r.block_dims[o].1;
    let mut t = vec![field.zero(); r.block_dims[o].0 * dv];
    t[x * dv..(x + 1) * dv].clone_from_slice(v);
    r.structure_maps[o].mul_vec(&t)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::algebra::{left_ideal_closure, validate_module, LeftIdeal};
    use crate::corpus::algebras;
    use crate::linalg::FieldSpec;
    use crate::subcategory::{build_subcategory, yoneda};

    const Q: FieldSpec = FieldSpec::Rationals;

    #[test]
    fn realization_of_regular_representable_is_the_algebra() {
        let a = Arc::new(algebras::upper_triangular(2, Q).unwrap());
        let b = build_subcategory(&a, &[("0".into(), LeftIdeal::zero(a.clone()))]).unwrap();
        let f = yoneda(&b, &AlgebraModule::regular(a.clone()));
        let r = realize(&b, &f).unwrap();
        assert_eq!(r.dim(), 3);
        assert!(validate_module(&r.module).passed());
    }

    #[test]
    fn zero_functor_realizes_to_zero() {
        let a = Arc::new(algebras::matrix_full(2, Q).unwrap());
        let b = build_subcategory(&a, &[("0".into(), LeftIdeal::zero(a.clone()))]).unwrap();
        let r = realize(&b, &FunctorRep::zero(&b)).unwrap();
        assert_eq!(r.dim(), 0);
    }

    #[test]
    fn split_idempotent_realization_adds_dimensions() {
        let a = Arc::new(algebras::truncated_poly(&[0, -1, 1], Q).unwrap());
        let v = |xs: &[i64]| xs.iter().map(|&x| Q.from_i64(x)).collect::<Vec<_>>();
        let ix = left_ideal_closure(&a, &[v(&[0, 1])]).unwrap();
        let ix1 = left_ideal_closure(&a, &[v(&[-1, 1])]).unwrap();
        let b = build_subcategory(&a, &[("x".into(), ix), ("x-1".into(), ix1)]).unwrap();
        let mut f = FunctorRep::zero(&b);
        f.spaces = vec![2, 3];
        f.maps[0][0] = vec![Matrix::identity(Q, 2)];
        f.maps[1][1] = vec![Matrix::identity(Q, 3)];
        let r = realize(&b, &f).unwrap();
        assert_eq!(r.dim(), 5);
    }

    #[test]
    fn misshapen_functor_is_rejected() {
        let a = Arc::new(algebras::truncated_poly(&[0, 0, 1], Q).unwrap());
        let b = build_subcategory(&a, &[("0".into(), LeftIdeal::zero(a.clone()))]).unwrap();
        let mut f = yoneda(&b, &AlgebraModule::regular(a));
        f.maps[0][0].pop();
        assert!(realize(&b, &f).is_err());
    }
}
