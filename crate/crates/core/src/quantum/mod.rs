//! Projector counterpart of the classical criteria.
//!
//! Values are projectors, preparations are density operators and a
//! measurement reporting `p` maps `rho` to `P rho P / Tr(rho P)`. Each
//! criterion holding for every `rho` is an operator identity, and each of
//! those identities holds exactly when the projectors commute. The
//! experiment here checks that numerically on seeded random pairs.

mod experiment;
mod identity;
mod ops;

pub use experiment::{
    equivalence_experiment, gaussian_vector, gen_pair, random_pure_state, run_experiment, spanning_set, Confusion,
    ConfusionSummary, CriterionConfusion, ExperimentConfig, ExperimentReport, IdentityDefects, PairMode, Probe,
    RhoWitness, SampledViolations, TrialRecord, GENERIC_MIN_DEFECT,
};
pub use identity::{
    criterion_identity_check, ignored_defect, nondisturbance_family_defect, nondisturbance_pair_defect,
    order_exchange_defect, IdentityCheck, IdentityForm, Operand,
};
pub use ops::{
    c, commutator_defect, lueders_condition, make_projector, orthonormalize, outer, seq_prob_q, ComplexMatrix,
    ComplexVector, DensityOp, Projector, ProjectorFamily, C64, CONSTRUCTION_TOL, IDENTITY_TOL,
};
