//! Finite-dimensional associative algebras, their modules, left ideals,
//! Hom-spaces, invariants, normalizers and eigenrings.

mod ideal;
mod module;
mod simple;
mod structure;

pub use ideal::{
    cyclic_module, eigenring, eigenring_of, hom_from_cyclic, idealizer_space, invariant_subspace,
    left_ideal_closure, normalizer, relative_normalizer, CyclicModule, Eigenring, LeftIdeal,
};
pub use module::{
    generated_submodule, hom_space, spin, validate_module, AlgebraModule, HomSpace, ModuleMap,
};
pub(crate) use module::same_algebra;
pub use simple::{is_simple, is_simple_action, Simplicity, SimplicityBudget, SimplicityVerdict};
pub use structure::{validate_algebra, Algebra};
