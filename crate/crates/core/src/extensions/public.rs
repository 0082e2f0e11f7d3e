use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::signal_grid;
use crate::analysis::{classify, Classification};
use crate::error::{Error, Result};
use crate::model::{accuracy_vote_share, election_outcome, Alternative, PopulationProfile, SignalSpec, StateOfWorld, TieRule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Medium {
    Private,
    Public,
    Indifferent,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PublicReport {
    pub private_classification: Classification,
    /// `(P(A | θ_A), P(A | θ_B))` for the best private signal.
    pub private_p_a: (f64, f64),
    pub best_public: SignalSpec,
    pub public_p_a: (f64, f64),
    pub preferred_medium: Medium,
    pub evaluated: usize,
}

/// `(P(A | θ_A), P(A | θ_B))` when every voter sees the same realization.
/// Given the realization the outcome is deterministic, so each probability is
/// the mass of realizations after which A wins.
pub fn public_win_probabilities(profile: &PopulationProfile, signal: &SignalSpec, tie: TieRule) -> (f64, f64) {
    let p_a = |state: StateOfWorld| {
        signal
            .realizations(state)
            .into_iter()
            .filter(|&(posterior, _)| {
                let share: f64 = profile
                    .classes()
                    .iter()
                    .filter(|(w, _)| *w > 0.0)
                    .map(|&(w, q)| w * accuracy_vote_share(q, &[(posterior, 1.0)], state, tie))
                    .sum();
                election_outcome(share, tie) == Alternative::A
            })
            .map(|(_, p)| p)
            .sum::<f64>()
    };
    (p_a(StateOfWorld::ThetaA), p_a(StateOfWorld::ThetaB))
}

/// Searches binary public signals on a grid for the highest probability that
/// A is elected (states equally likely; ties broken by the probability in
/// θ_B), and compares it with what a private signal achieves.
pub fn public_persuasion_compare(profile: &PopulationProfile, step: f64) -> Result<PublicReport> {
    if !(step.is_finite() && step > 0.0 && step <= 0.01) {
        return Err(Error::OutsideDomain {
            function: "public_persuasion_compare",
            value: step,
            reason: "step must lie in (0, 0.01]",
        });
    }
    let tie = TieRule::FavorA;
    let (ql, qh) = (profile.q_low(), profile.q_high());
    let mut signals = vec![SignalSpec::uninformative()];
    signals.extend(signal_grid(step, &[ql, qh], &[0.0, 1.0 - qh, 1.0 - ql]));
    let scored: Vec<(SignalSpec, (f64, f64))> =
        signals.par_iter().map(|s| (*s, public_win_probabilities(profile, s, tie))).collect();
    let better = |x: (f64, f64), y: (f64, f64)| {
        let (ax, ay) = (x.0 + x.1, y.0 + y.1);
        ax > ay + 1e-12 || ((ax - ay).abs() <= 1e-12 && x.1 > y.1 + 1e-12)
    };
    let (best_public, public_p_a) = scored
        .iter()
        .copied()
        .reduce(|best, c| if better(c.1, best.1) { c } else { best })
        .expect("signal list is never empty");

    let private_classification = classify(profile).classification;
    let private_p_a = match private_classification {
        Classification::AlwaysA | Classification::Manipulable => (1.0, 1.0),
        Classification::NotManipulable => (1.0, 0.0),
    };
    let diff = (public_p_a.0 + public_p_a.1) - (private_p_a.0 + private_p_a.1);
    let preferred_medium = if diff > 1e-12 {
        Medium::Public
    } else if diff < -1e-12 {
        Medium::Private
    } else {
        Medium::Indifferent
    };
    Ok(PublicReport {
        private_classification,
        private_p_a,
        best_public,
        public_p_a,
        preferred_medium,
        evaluated: scored.len(),
    })
}
