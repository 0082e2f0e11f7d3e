use serde::{Deserialize, Serialize};

use super::{sincere_vote, Alternative, Belief, PopulationProfile, SignalSpec, StateOfWorld, TieRule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExoRealization {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DesignerRealization {
    A,
    B,
}

impl ExoRealization {
    /// `P(realization | state)` for a symmetric signal of the given accuracy.
    pub fn probability(self, accuracy: f64, state: StateOfWorld) -> f64 {
        match (self, state) {
            (ExoRealization::A, StateOfWorld::ThetaA) | (ExoRealization::B, StateOfWorld::ThetaB) => accuracy,
            _ => 1.0 - accuracy,
        }
    }

    /// Posterior on θ_A from the uniform prior after this realization alone.
    pub fn posterior(self, accuracy: f64) -> f64 {
        match self {
            ExoRealization::A => accuracy,
            ExoRealization::B => 1.0 - accuracy,
        }
    }
}

/// One voter contingency: an accuracy class together with the realizations of
/// the exogenous and designer signals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VoterCell {
    pub accuracy: f64,
    pub exo: ExoRealization,
    pub designer: DesignerRealization,
}

impl VoterCell {
    pub fn probability(&self, signal: &SignalSpec, state: StateOfWorld) -> f64 {
        let p_a = signal.prob_a_given(state);
        let p_designer = match self.designer {
            DesignerRealization::A => p_a,
            DesignerRealization::B => 1.0 - p_a,
        };
        self.exo.probability(self.accuracy, state) * p_designer
    }

    /// Posterior after both realizations; `None` if the pair is impossible.
    pub fn posterior(&self, signal: &SignalSpec) -> Option<Belief> {
        let designer_posterior = match self.designer {
            DesignerRealization::A => signal.alpha(),
            DesignerRealization::B => signal.beta(),
        };
        combine_posteriors(self.exo.posterior(self.accuracy), designer_posterior)
            .map(|p| Belief::new(p).expect("combined posterior is a probability"))
    }

    pub fn vote(&self, signal: &SignalSpec, tie: TieRule) -> Option<Alternative> {
        self.posterior(signal).map(|p| sincere_vote(p, tie))
    }
}

/// Combines two posteriors that were each formed from the uniform prior by
/// conditionally independent observations.
///
/// Returns `None` when the observations are jointly impossible (one certain of
/// θ_A, the other certain of θ_B).
pub fn combine_posteriors(first: f64, second: f64) -> Option<f64> {
    let num = first * second;
    let den = num + (1.0 - first) * (1.0 - second);
    (den > 0.0).then(|| num / den)
}

/// The eight cells (two classes, four realization pairs) of a profile.
pub fn voter_cells(profile: &PopulationProfile) -> Vec<(f64, VoterCell)> {
    let mut cells = Vec::with_capacity(8);
    for (weight, accuracy) in profile.classes() {
        for exo in [ExoRealization::A, ExoRealization::B] {
            for designer in [DesignerRealization::A, DesignerRealization::B] {
                cells.push((
                    weight,
                    VoterCell {
                        accuracy,
                        exo,
                        designer,
                    },
                ));
            }
        }
    }
    cells
}

/// Share of A-votes among voters of one accuracy, for a designer signal given
/// as `(posterior on A, P(realization | state))` pairs.
pub fn accuracy_vote_share(
    accuracy: f64,
    realizations: &[(f64, f64)],
    state: StateOfWorld,
    tie: TieRule,
) -> f64 {
    let mut share = 0.0;
    for exo in [ExoRealization::A, ExoRealization::B] {
        let p_exo = exo.probability(accuracy, state);
        if p_exo == 0.0 {
            continue;
        }
        for &(designer_posterior, p_designer) in realizations {
            if p_designer == 0.0 {
                continue;
            }
            let Some(post) = combine_posteriors(exo.posterior(accuracy), designer_posterior) else {
                continue;
            };
            if sincere_vote(Belief(post), tie) == Alternative::A {
                share += p_exo * p_designer;
            }
        }
    }
    share
}

/// Exact share of A-votes in the continuum population, summed over the
/// voter cells.
pub fn exact_vote_share(
    profile: &PopulationProfile,
    signal: &SignalSpec,
    state: StateOfWorld,
    tie: TieRule,
) -> f64 {
    let realizations = signal.realizations(state);
    profile
        .classes()
        .iter()
        .filter(|(w, _)| *w > 0.0)
        .map(|&(w, q)| w * accuracy_vote_share(q, &realizations, state, tie))
        .sum()
}
