//! Flag manifolds embedded as isospectral symmetric matrices.
//!
//! A flag `0 ⊂ V₁ ⊂ … ⊂ V_p ⊂ ℝⁿ` is represented by a rotation `Q` whose
//! columns are adapted to the flag, and embedded as `Q diag(a) Qᵀ` with one
//! spectrum value per block. The modules cover the embedding itself
//! ([`embed`]), its Riemannian geometry and optimization ([`geometry`]),
//! exact `SO(n)` representation dimensions behind the minimality argument
//! ([`repdim`]) and comparisons with classical embedding bounds ([`bounds`]).

pub mod bounds;
pub mod embed;
pub mod error;
pub mod flagcore;
pub mod geometry;
pub mod repdim;

pub use bounds::{bound_table, BoundReport, IsospectralStatus, NamedComparison, StiefelMinimal};
pub use embed::{embed, recover, EmbeddedFlag};
pub use error::{Error, Result};
pub use flagcore::{
    flags_equal, random_flag_point, FlagPoint, FlagSignature, Spectrum, SymmetricMatrix,
    TangentBlock, Tolerances,
};
pub use geometry::{
    gradient_descent, nearest_point, DescentOptions, DescentReport, EmbeddedTangent, MetricSpec,
};
pub use repdim::{weyl_dim, ClassificationReport, EnumerationReport, HighestWeight};
