//! Finite full subcategories of cyclic modules and finite-dimensional
//! functors on them.

mod category;
mod functor;

pub use category::{build_subcategory, Object, SubcategoryB};
pub use functor::{
    cokernel_functor, kernel_functor, nat_space, validate_functor, yoneda, yoneda_on_map,
    yoneda_with_bases, FunctorRep, NatSpace, NatTrans, YonedaImage,
};
