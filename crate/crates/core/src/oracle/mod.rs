//! Reference implementations used to check the samplers.

pub mod audit;
pub mod batteries;
pub mod chi_square;
pub mod enumerate;

pub use audit::{exhaustive_path_audit, explore, AuditFamily, ChoiceWalker, PathAudit};
pub use batteries::BatteryReport;
pub use chi_square::{chi_square_quantile, chi_square_test, ChiSquareOutcome, TreeClassTable};
pub use enumerate::{
    count_binary, count_motzkin, enumerate_binary, enumerate_motzkin, weighted_mass,
    ENUMERATION_CAP,
};
