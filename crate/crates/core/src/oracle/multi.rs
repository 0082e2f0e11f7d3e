//! Signals with more than two realizations, and their reduction to binary
//! signals by repeated two-way splitting.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{accuracy_vote_share, PopulationProfile, SignalSpec, StateOfWorld, TieRule};

const MASS_TOL: f64 = 1e-9;
const MERGE_TOL: f64 = 1e-12;

/// A finite signal described by the posterior on θ_A (from the uniform prior)
/// and unconditional probability of each realization.
///
/// Stored canonically: zero-probability realizations dropped, equal
/// posteriors merged, posteriors strictly decreasing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiSignal {
    posteriors: Vec<f64>,
    probs: Vec<f64>,
}

impl MultiSignal {
    pub fn new(posteriors: Vec<f64>, probs: Vec<f64>) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidMultiSignal(m));
        if posteriors.len() != probs.len() {
            return bad(format!("{} posteriors but {} probabilities", posteriors.len(), probs.len()));
        }
        if posteriors.is_empty() {
            return bad("no realizations".into());
        }
        if let Some(a) = posteriors.iter().find(|a| !(a.is_finite() && (0.0..=1.0).contains(*a))) {
            return bad(format!("posterior {a} outside [0, 1]"));
        }
        if let Some(p) = probs.iter().find(|p| !(p.is_finite() && **p >= 0.0)) {
            return bad(format!("probability {p} is negative"));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > MASS_TOL {
            return bad(format!("probabilities sum to {total}"));
        }
        let mean: f64 = posteriors.iter().zip(&probs).map(|(a, p)| a * p).sum();
        if (mean - 0.5).abs() > MASS_TOL {
            return bad(format!("posteriors average to {mean}, not the prior 1/2"));
        }
        let mut pairs: Vec<(f64, f64)> = posteriors.into_iter().zip(probs).filter(|&(_, p)| p > 0.0).collect();
        pairs.sort_by(|x, y| y.0.total_cmp(&x.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(pairs.len());
        for (a, p) in pairs {
            match merged.last_mut() {
                Some((ma, mp)) if (*ma - a).abs() <= MERGE_TOL => {
                    *ma = (*ma * *mp + a * p) / (*mp + p);
                    *mp += p;
                }
                _ => merged.push((a, p)),
            }
        }
        let (posteriors, probs) = merged.into_iter().unzip();
        Ok(Self { posteriors, probs })
    }

    pub fn from_binary(signal: &SignalSpec) -> Self {
        if !signal.is_informative() {
            return Self {
                posteriors: vec![0.5],
                probs: vec![1.0],
            };
        }
        let p_a = signal.prob_a();
        Self {
            posteriors: vec![signal.alpha(), signal.beta()],
            probs: vec![p_a, 1.0 - p_a],
        }
    }

    pub fn posteriors(&self) -> &[f64] {
        &self.posteriors
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.posteriors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.posteriors.is_empty()
    }

    pub fn is_informative(&self) -> bool {
        self.posteriors.iter().any(|&a| a > 0.5 + MERGE_TOL)
    }

    /// `P(realization i | state)`.
    pub fn conditional(&self, i: usize, state: StateOfWorld) -> f64 {
        let (a, p) = (self.posteriors[i], self.probs[i]);
        match state {
            StateOfWorld::ThetaA => 2.0 * a * p,
            StateOfWorld::ThetaB => 2.0 * (1.0 - a) * p,
        }
    }

    /// `(posterior, P(realization | state))` for every realization.
    pub fn realizations(&self, state: StateOfWorld) -> Vec<(f64, f64)> {
        (0..self.len()).map(|i| (self.posteriors[i], self.conditional(i, state))).collect()
    }

    /// Bayes plausibility residual `Σ α_i p_i − 1/2`.
    pub fn plausibility_residual(&self) -> f64 {
        self.posteriors.iter().zip(&self.probs).map(|(a, p)| a * p).sum::<f64>() - 0.5
    }

    fn to_binary(&self) -> Result<SignalSpec> {
        match self.len() {
            1 => Ok(SignalSpec::uninformative()),
            2 => SignalSpec::new(self.posteriors[0], self.posteriors[1]),
            n => Err(Error::Precondition(format!("signal has {n} realizations"))),
        }
    }
}

/// Share of A-votes for a multi-realization designer signal.
pub fn multi_vote_share(profile: &PopulationProfile, signal: &MultiSignal, state: StateOfWorld, tie: TieRule) -> f64 {
    let realizations = signal.realizations(state);
    profile
        .classes()
        .iter()
        .filter(|(w, _)| *w > 0.0)
        .map(|&(w, q)| w * accuracy_vote_share(q, &realizations, state, tie))
        .sum()
}

/// `s = η·first + (1 − η)·second` as state-conditional distributions.
/// Supports index the realizations of the (canonical) input signal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    pub eta: f64,
    pub first: MultiSignal,
    pub first_support: Vec<usize>,
    pub second: MultiSignal,
    pub second_support: Vec<usize>,
}

/// Splits a signal with `n > 2` realizations into the binary signal on its
/// extreme posteriors `(α_1, α_n)` and a remainder with fewer realizations,
/// the two sharing at most one realization (with equal posterior).
///
/// An uninformative signal splits trivially into two copies of itself.
pub fn decompose(signal: &MultiSignal) -> Result<Decomposition> {
    if !signal.is_informative() {
        let trivial = MultiSignal {
            posteriors: vec![0.5],
            probs: vec![1.0],
        };
        return Ok(Decomposition {
            eta: 0.5,
            first: trivial.clone(),
            first_support: vec![0],
            second: trivial,
            second_support: vec![0],
        });
    }
    let n = signal.len();
    if n <= 2 {
        return Err(Error::Precondition(format!(
            "decomposition needs more than two realizations, got {n}"
        )));
    }
    let (post, probs) = (&signal.posteriors, &signal.probs);
    let (a1, an) = (post[0], post[n - 1]);
    let (p1, pn) = (probs[0], probs[n - 1]);
    let p_a = (0.5 - an) / (a1 - an);
    let p_b = (a1 - 0.5) / (a1 - an);
    let first = MultiSignal {
        posteriors: vec![a1, an],
        probs: vec![p_a, p_b],
    };
    let first_support = vec![0, n - 1];

    // Compare p_a/p_b with p_1/p_n without dividing.
    let lhs = p_a * pn;
    let rhs = p1 * p_b;
    let (eta, keep_first, keep_last) = if (lhs - rhs).abs() <= 1e-14 {
        (p1 + pn, false, false)
    } else if lhs < rhs {
        // All of r_n goes to the binary part; r_1 is shared.
        (pn / p_b, true, false)
    } else {
        (p1 / p_a, false, true)
    };
    let rest = 1.0 - eta;
    let mut second_support = Vec::with_capacity(n - 1);
    let mut second_post = Vec::with_capacity(n - 1);
    let mut second_probs = Vec::with_capacity(n - 1);
    for i in 0..n {
        let p = if i == 0 {
            if !keep_first {
                continue;
            }
            (p1 - eta * p_a) / rest
        } else if i == n - 1 {
            if !keep_last {
                continue;
            }
            (pn - eta * p_b) / rest
        } else {
            probs[i] / rest
        };
        second_support.push(i);
        second_post.push(post[i]);
        second_probs.push(p.max(0.0));
    }
    Ok(Decomposition {
        eta,
        first,
        first_support,
        second: MultiSignal {
            posteriors: second_post,
            probs: second_probs,
        },
        second_support,
    })
}

/// Repeatedly decomposes `signal`, keeping the part with the weakly higher
/// A-share in θ_B (the binary extreme part on ties), until at most two
/// realizations remain.
pub fn reduce_to_binary(signal: &MultiSignal, profile: &PopulationProfile) -> Result<SignalSpec> {
    let share = |s: &MultiSignal| multi_vote_share(profile, s, StateOfWorld::ThetaB, TieRule::FavorA);
    let mut current = signal.clone();
    loop {
        if !current.is_informative() {
            return Ok(SignalSpec::uninformative());
        }
        if current.len() <= 2 {
            return current.to_binary();
        }
        let d = decompose(&current)?;
        current = if share(&d.first) >= share(&d.second) {
            d.first
        } else {
            d.second
        };
    }
}
