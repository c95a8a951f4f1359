//! Index of seaweed (biparabolic) subalgebras of gl(n), so(2n+1), sp(2n) and
//! so(2n).
//!
//! Four independent routes to the same number:
//!
//! * [`meander`]: build the meander graph and count cycles and segments;
//! * [`reduction`]: a Euclid-style rewriting of the compositions that works
//!   for block sizes of any magnitude;
//! * [`formulas`]: closed forms for few-block shapes;
//! * [`oracle`]: realize the subalgebra as matrices and compute the generic
//!   rank of `f([x, y])` directly.
//!
//! ```
//! use seaweed_core::{reduction, SeaweedSpec};
//!
//! let spec: SeaweedSpec = "C:200:15,185|17,61,117".parse().unwrap();
//! let (index, _trace) = reduction::index(&spec).unwrap();
//! assert_eq!(index, 0u32.into());
//! ```

pub mod composition;
pub mod enumerate;
pub mod error;
pub mod formulas;
pub mod meander;
pub mod oracle;
pub mod reduction;
pub mod render;
pub mod spec;

pub use composition::{normalize, normalize_i64, Composition};
pub use error::{Error, Result};
pub use meander::{ComponentKind, ComponentReport, Meander};
pub use reduction::{ReductionState, ReductionTrace};
pub use spec::{make_spec, xi_membership, AlgebraType, SeaweedSpec, Side, XiMembership};
