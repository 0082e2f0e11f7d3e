//! Closed-form manipulability analysis for binary-accuracy populations.

mod candidates;
mod classify;
mod thresholds;

pub use candidates::{candidate_signals, CandidateId, CandidateSignal};
pub use classify::{
    analytic_classification, bias_direction, bias_regime_intervals, classify, large_lambda_threshold, BiasDirection,
    BiasRegime, BiasSigns, CandidateEvaluation, Classification, ManipulabilityReport,
};
pub use thresholds::{lambda_under, q_bar, q_ni};

pub(crate) use candidates::normalized;
pub(crate) use classify::wins_both;
