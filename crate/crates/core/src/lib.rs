//! Undoing mind swaps under the rule that no group of people may use the
//! machine together twice.
//!
//! Plans are chronological lists of machine uses; the composite of a plan
//! is the right-to-left product of its uses, so the earliest use acts
//! first. A plan inverts a scramble `σ` when its composite is `σ⁻¹`.

pub mod document;
pub mod infinite;
pub mod keeler;
pub mod machine;
pub mod optimal;
pub mod oracle;
pub mod perm;

pub use document::{DocumentError, PlanDocument, SCHEMA_VERSION};
pub use keeler::{solve_two_machine, taubar, taucar, KeelerError, TwoMachinePlan};
pub use machine::{
    generator_identity_check, invert_transposition_even_m, membership_check, outsider_pool_size,
    plan_product, solve_m_machine, MPlan, MachineError, MachineMove,
};
pub use optimal::{
    f_construction, g_construction, insider_count, lower_bound, solve_three_machine_optimal,
    OptimalError, ThreePlan,
};
pub use oracle::{
    search_min_plan, search_min_plan_with, verify_plan, OracleError, RuleSet, SearchOptions,
    SearchOutcome, VerificationReport, Violation, ViolationKind,
};
pub use perm::{Cycle, Element, Parity, ParseError, Permutation};
