//! Exact probability algebra for a binary-state, two-alternative election.
//!
//! The prior over states is uniform. A designer signal is identified with the
//! pair of posteriors it induces from that prior; voters combine it with a
//! private exogenous signal of known accuracy and vote sincerely.

mod belief;
mod profile;
mod share;
mod signal;

pub use belief::{election_outcome, sincere_vote, update_belief, Belief};
pub use profile::PopulationProfile;
pub use share::{
    accuracy_vote_share, combine_posteriors, exact_vote_share, voter_cells, DesignerRealization,
    ExoRealization, VoterCell,
};
pub use signal::{bias, conditionals_to_posteriors, posteriors_to_conditionals, Conditionals, SignalSpec};

use serde::{Deserialize, Serialize};

/// Absolute tolerance for comparing a posterior against 1/2.
pub const POSTERIOR_TOL: f64 = 1e-12;

/// Absolute tolerance for comparing a vote share against 1/2.
pub const SHARE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StateOfWorld {
    ThetaA,
    ThetaB,
}

impl StateOfWorld {
    pub const BOTH: [StateOfWorld; 2] = [StateOfWorld::ThetaA, StateOfWorld::ThetaB];

    /// The alternative that is better in this state.
    pub fn correct(self) -> Alternative {
        match self {
            StateOfWorld::ThetaA => Alternative::A,
            StateOfWorld::ThetaB => Alternative::B,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Alternative {
    A,
    B,
}

/// How indifferent voters vote and how an exactly split electorate is decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TieRule {
    #[default]
    FavorA,
    FavorB,
}

impl TieRule {
    pub fn favored(self) -> Alternative {
        match self {
            TieRule::FavorA => Alternative::A,
            TieRule::FavorB => Alternative::B,
        }
    }
}
