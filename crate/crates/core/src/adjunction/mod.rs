//! The realization functor, unit and counit of the adjunction with the
//! restricted Yoneda functor, and the audits built on them.

mod realization;
mod single;
mod unit_counit;

pub use realization::{realize, realize_map, structure_image, Realization};
pub use single::{
    density_systems_solvable, s_complement, s_freeness, single_object_audit, SFreeBasis,
    SingleObjectOptions,
};
pub use unit_counit::{
    adjunction_dim_check, classification_agrees, classify_matrix, classify_nat, counit, counit_from,
    equivalence_audit, fix_functor, fix_membership_functor, fix_membership_module, fix_module,
    triangle_audit, unit, unit_from, Counit, FixMembership, MapClassification, Unit,
};
