//! Compatibility criteria on classical systems: verdicts with exact
//! witnesses, compatibility matrices, repeatability and sharpness audits,
//! interference deficits, and the search for criterion-separating systems.

mod audit;
mod criteria;
pub mod enumeration;
mod interference;
mod search;

pub use audit::{
    FamilyRow, RelationAudit, RelationRow, RepeatabilityCell, RepeatabilityReport, SharpnessAudit, SharpnessEntry,
};
pub use criteria::{
    check_ignored, check_nondisturbance, check_order_exchange, compatibility_matrix, criterion_sides, holds_at,
    ignored_sides, nondisturbance_sides, order_exchange_sides, witness_reproduces, Analyzer, CompatibilityMatrix,
    CriterionKind, CriterionReport, Pair, Sides, Verdict, VerdictPattern, Witness,
};
pub use interference::{describe_state, interference_deficit, InterferenceRecord, WeightedConfig};
pub use search::{pattern_table, search_counterexamples, Finding, PairFinding, SearchParams, SearchReport, TargetPattern};

use crate::error::Result;
use crate::measure::MeasurementSystem;

pub fn repeatability_check(sys: &MeasurementSystem, variable: &str) -> Result<RepeatabilityReport> {
    Analyzer::new(sys).repeatability_check(variable)
}

pub fn sharpness_audit(sys: &MeasurementSystem) -> Result<SharpnessAudit> {
    Analyzer::new(sys).sharpness_audit()
}

pub fn relation_audit(sys: &MeasurementSystem) -> Result<RelationAudit> {
    Analyzer::new(sys).relation_audit()
}
