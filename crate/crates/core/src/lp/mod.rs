//! Exact linear programming and the triangle-LP bound driver.

pub mod proof;
pub mod simplex;
pub mod triangle;

pub use proof::{verify_proposition_33, ProofReplay, ProofStep};
pub use simplex::{FarkasCertificate, Feasibility, LinearSystem, LpOutcome, Optimum, Row, Sense, Simplex};
pub use triangle::{
    feasibility_at_level, triangle_bound, BisectionStep, ConstraintTag, LevelCertificate,
    LevelResult, TaggedConstraint, TriangleBound, TriangleLpInstance,
};
