//! Finite AG-groups (left almost groups) and their fuzzy AG-subgroups.
//!
//! Groups are Cayley tables over dense element indices; membership grades
//! are exact rationals. Every construction (fuzzy cosets, the quotients
//! `G/mu` and `G/H`, induced fuzzy subsets, the natural homomorphism) is
//! verified on the instance rather than trusted, and the [`sweep`] module
//! checks each statement over every small AG-group.

pub mod error;
pub mod fixtures;
pub mod fuzzy;
pub mod grade;
pub mod group;
pub mod par;
pub mod quotient;
pub mod report;
pub mod sampling;
pub mod search;
pub mod sweep;
pub mod table;

pub use error::{AlgebraError, Result};
pub use fuzzy::{FuzzySubset, LevelSet};
pub use grade::Grade;
pub use group::{AgGroup, Homomorphism, Subgroup};
pub use par::Execution;
pub use quotient::{FuzzyCoset, InducedFuzzySubset, QuotientStructure};
pub use report::{Finding, Format, Record, Report, TheoremId, Witness};
pub use table::CayleyTable;
