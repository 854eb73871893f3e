//! Exact computations on finite metric spaces.

pub mod error;
pub mod generate;
pub mod gh;
pub mod limits;
pub mod lsm;
pub mod morphism;
pub mod space;
pub mod submetry;
pub mod value;

pub use error::{Error, Result, SpaceViolation};
pub use limits::{colimit_glue, fiber_product, l_infty_product, metric_identification, quotient_by_group, Colimit, GroupAction, Span};
pub use morphism::{check_morphism, Morphism};
pub use space::{validate_space, FinSpace, SpaceClass};
pub use value::ExtValue;
