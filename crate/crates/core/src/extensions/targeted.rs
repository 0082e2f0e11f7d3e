use serde::{Deserialize, Serialize};

use super::ContinuousProfile;
use crate::analysis::Classification;
use crate::model::{
    accuracy_vote_share, combine_posteriors, sincere_vote, Alternative, Belief, ExoRealization, PopulationProfile,
    SignalSpec, StateOfWorld, TieRule, POSTERIOR_TOL, SHARE_TOL,
};

/// Accuracy at which `(q, 0)` and `(q, 1 − q)` move the same share of a class
/// in θ_B: `(√5 − 1)/2`.
pub const CROSSOVER: f64 = 0.618_033_988_749_894_8;

/// The class signal that maximizes the A-share in θ_B among voters of
/// accuracy `q`.
pub fn targeted_signal(q: f64) -> SignalSpec {
    if q <= 0.5 + POSTERIOR_TOL {
        return SignalSpec::uninformative();
    }
    let beta = if q < CROSSOVER { 0.0 } else { 1.0 - q };
    SignalSpec::new(q, beta).expect("q in (1/2, 1] gives a valid signal")
}

/// Exact A-share among voters of accuracy `q` under their targeted signal.
pub fn targeted_class_share(q: f64, state: StateOfWorld, tie: TieRule) -> f64 {
    accuracy_vote_share(q, &targeted_signal(q).realizations(state), state, tie)
}

fn g_targeted(q: f64) -> f64 {
    ((1.0 - q) / q).max(1.0 - q * q)
}

fn g_targeted_antiderivative(x: f64) -> f64 {
    let low = |q: f64| q.ln() - q;
    let high = |q: f64| q - q * q * q / 3.0;
    if x <= CROSSOVER {
        low(x) - low(0.5)
    } else {
        low(CROSSOVER) - low(0.5) + high(x) - high(CROSSOVER)
    }
}

fn decide(lhs: f64) -> Classification {
    if lhs >= 0.5 - SHARE_TOL {
        Classification::Manipulable
    } else {
        Classification::NotManipulable
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassAssignment {
    pub weight: f64,
    pub accuracy: f64,
    pub signal: SignalSpec,
    pub a_share_theta_a: f64,
    pub a_share_theta_b: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetedPlan {
    pub classes: Vec<ClassAssignment>,
}

impl TargetedPlan {
    pub fn a_share(&self, state: StateOfWorld) -> f64 {
        self.classes
            .iter()
            .map(|c| {
                c.weight
                    * match state {
                        StateOfWorld::ThetaA => c.a_share_theta_a,
                        StateOfWorld::ThetaB => c.a_share_theta_b,
                    }
            })
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetedReport {
    /// `λ·g(q_ℓ) + (1 − λ)·g(q_h)` with `g(q) = max{(1 − q)/q, 1 − q²}`, or
    /// its integral against a density.
    pub lhs: f64,
    pub classification: Classification,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub plan: Option<TargetedPlan>,
}

/// One signal per accuracy class.
pub fn targeted_classify(profile: &PopulationProfile) -> TargetedReport {
    let tie = TieRule::FavorA;
    let classes: Vec<ClassAssignment> = profile
        .classes()
        .into_iter()
        .filter(|(w, _)| *w > 0.0)
        .map(|(weight, accuracy)| ClassAssignment {
            weight,
            accuracy,
            signal: targeted_signal(accuracy),
            a_share_theta_a: targeted_class_share(accuracy, StateOfWorld::ThetaA, tie),
            a_share_theta_b: targeted_class_share(accuracy, StateOfWorld::ThetaB, tie),
        })
        .collect();
    let lhs = profile.lambda() * g_targeted(profile.q_low()) + (1.0 - profile.lambda()) * g_targeted(profile.q_high());
    TargetedReport {
        lhs,
        classification: decide(lhs),
        plan: Some(TargetedPlan { classes }),
    }
}

pub fn targeted_classify_continuous(profile: &ContinuousProfile) -> TargetedReport {
    let lhs = profile.integrate_exact(g_targeted, g_targeted_antiderivative);
    TargetedReport {
        lhs,
        classification: decide(lhs),
        plan: None,
    }
}

/// Exact A-share among voters of accuracy `q` when those with realization
/// `a` get no signal and those with `b` get `(q, 0)`.
pub fn strongly_targeted_share(q: f64, state: StateOfWorld, tie: TieRule) -> f64 {
    let mut share = 0.0;
    for exo in [ExoRealization::A, ExoRealization::B] {
        let signal = match exo {
            ExoRealization::A => SignalSpec::uninformative(),
            ExoRealization::B => targeted_signal_after_b(q),
        };
        let interim = exo.posterior(q);
        for (posterior, p) in signal.realizations(state) {
            let Some(post) = combine_posteriors(interim, posterior) else {
                continue;
            };
            if sincere_vote(Belief::new(post).expect("posterior is a probability"), tie) == Alternative::A {
                share += exo.probability(q, state) * p;
            }
        }
    }
    share
}

fn targeted_signal_after_b(q: f64) -> SignalSpec {
    if q <= 0.5 + POSTERIOR_TOL {
        SignalSpec::uninformative()
    } else {
        SignalSpec::new(q, 0.0).expect("q in (1/2, 1] gives a valid signal")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrongAssignment {
    pub weight: f64,
    pub accuracy: f64,
    pub signal_after_a: SignalSpec,
    pub signal_after_b: SignalSpec,
    pub a_share_theta_b: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StronglyTargetedReport {
    /// `2λ(1 − q_ℓ) + 2(1 − λ)(1 − q_h)`, or `2∫(1 − q) f(q) dq`.
    pub lhs: f64,
    pub classification: Classification,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub plan: Option<Vec<StrongAssignment>>,
}

/// One signal per accuracy class and exogenous realization.
pub fn strongly_targeted_classify(profile: &PopulationProfile) -> StronglyTargetedReport {
    let plan = profile
        .classes()
        .into_iter()
        .filter(|(w, _)| *w > 0.0)
        .map(|(weight, accuracy)| StrongAssignment {
            weight,
            accuracy,
            signal_after_a: SignalSpec::uninformative(),
            signal_after_b: targeted_signal_after_b(accuracy),
            a_share_theta_b: strongly_targeted_share(accuracy, StateOfWorld::ThetaB, TieRule::FavorA),
        })
        .collect();
    let lhs = 2.0 * profile.lambda() * (1.0 - profile.q_low()) + 2.0 * (1.0 - profile.lambda()) * (1.0 - profile.q_high());
    StronglyTargetedReport {
        lhs,
        classification: decide(lhs),
        plan: Some(plan),
    }
}

pub fn strongly_targeted_classify_continuous(profile: &ContinuousProfile) -> StronglyTargetedReport {
    let lhs = profile.integrate_exact(|q| 2.0 * (1.0 - q), |x| 2.0 * x - x * x);
    StronglyTargetedReport {
        lhs,
        classification: decide(lhs),
        plan: None,
    }
}
