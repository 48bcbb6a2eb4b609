//! Reference implementations and seeded instance generators for checking
//! the learners.

pub mod brute;
pub mod finite_diff;
pub mod generate;
pub mod grid;
pub mod verify;

pub use brute::{brute_knn_majority, brute_nb_total, random_feasible_slack};
pub use finite_diff::{central_difference, relative_error};
pub use generate::{
    generate_instance, BaseFunction, FeatureDraw, LabelScheme, RandomInstance, SyntheticDependence,
};
pub use grid::{grid_search_linear, GridBox, MAX_GRID_POINTS};
pub use verify::{
    check_objectives_agree, check_slack_feasible, check_slack_minimal, check_inconsistency_is_slack, check_tiny_argmin, run_check,
    verify_equivalence, verify_equivalence_with, CheckOutcome, ClosedFormSlack, SlackRule, TrialBudget,
    VerifySummary,
};
