use serde::{Deserialize, Serialize};

use crate::error::{check_probability, Error, Result};

use super::{Alternative, TieRule, POSTERIOR_TOL, SHARE_TOL};

/// Probability that the state is θ_A.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Belief(pub(crate) f64);

impl Belief {
    pub const PRIOR: Belief = Belief(0.5);

    pub fn new(p_theta_a: f64) -> Result<Self> {
        check_probability("belief", p_theta_a).map(Belief)
    }

    pub fn p_theta_a(self) -> f64 {
        self.0
    }
}

/// Bayes' rule in odds form: posterior odds = prior odds × ratio, where
/// `ratio = P(observation | θ_A) / P(observation | θ_B)`.
///
/// Degenerate priors absorb any finite positive ratio. A certain prior
/// contradicted by an observation impossible under it is an error.
pub fn update_belief(prior: Belief, ratio: f64) -> Result<Belief> {
    if ratio.is_nan() || ratio < 0.0 {
        return Err(Error::OutsideDomain {
            function: "update_belief",
            value: ratio,
            reason: "likelihood ratio must be non-negative",
        });
    }
    let p = prior.0;
    let contradiction = (p == 1.0 && ratio == 0.0) || (p == 0.0 && ratio.is_infinite());
    if contradiction {
        return Err(Error::ContradictoryEvidence { prior: p, ratio });
    }
    if p == 0.0 || p == 1.0 {
        return Ok(prior);
    }
    if ratio.is_infinite() {
        return Ok(Belief(1.0));
    }
    let num = p * ratio;
    Ok(Belief(num / (num + (1.0 - p))))
}

/// Votes for the alternative the posterior deems more likely.
pub fn sincere_vote(posterior: Belief, tie: TieRule) -> Alternative {
    let p = posterior.0;
    if p > 0.5 + POSTERIOR_TOL {
        Alternative::A
    } else if p < 0.5 - POSTERIOR_TOL {
        Alternative::B
    } else {
        tie.favored()
    }
}

/// Majority rule on the A-vote share.
pub fn election_outcome(share_a: f64, tie: TieRule) -> Alternative {
    if share_a > 0.5 + SHARE_TOL {
        Alternative::A
    } else if share_a < 0.5 - SHARE_TOL {
        Alternative::B
    } else {
        tie.favored()
    }
}
