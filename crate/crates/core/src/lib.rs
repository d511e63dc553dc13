pub mod adjunction;
pub mod algebra;
pub mod corpus;
pub mod error;
pub mod fleet;
pub mod instance;
pub mod linalg;
pub mod par;
pub mod random;
pub mod report;
pub mod subcategory;
pub mod weight;

pub use error::{Error, Result};
