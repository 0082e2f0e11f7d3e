//! Brute-force checks that do not rely on the candidate reduction.

mod grid;
mod multi;

pub use grid::{
    grid_search, perturbed_candidates, rounded_down_candidate, verify_lemma1, Discrepancy, GridPoint, GridReport,
    Lemma1Verification, DEFAULT_STEP, PERTURBATION,
};
pub use multi::{decompose, multi_vote_share, reduce_to_binary, Decomposition, MultiSignal};
