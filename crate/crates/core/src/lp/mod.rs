//! Exact linear programming and feasibility with certificates.

pub mod alternative;
pub mod simplex;
pub mod system;

pub use alternative::{alternative_strict, alternative_weak, Alternative};
pub use simplex::{Domain, LinearProgram, LpOutcome, Relation, Sense};
pub use system::{solve_feasibility, FeasibilityResult, LinearSystem, Rel, VarSign};
