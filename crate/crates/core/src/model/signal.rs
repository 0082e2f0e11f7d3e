use serde::{Deserialize, Serialize};

use crate::error::{check_probability, Error, Result};

use super::StateOfWorld;

/// A binary designer signal, stored as the posteriors `(alpha, beta)` on
/// state A induced by realizations 𝔞 and 𝔟 from the uniform prior.
///
/// Informative signals satisfy `0 <= beta < 1/2 < alpha <= 1`. The
/// uninformative signal is stored as `alpha = beta = 1/2` and always emits 𝔞.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignalSpec {
    alpha: f64,
    beta: f64,
}

/// State-conditional probabilities of realization 𝔞.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Conditionals {
    pub a_given_theta_a: f64,
    pub a_given_theta_b: f64,
}

impl SignalSpec {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        check_probability("alpha", alpha)?;
        check_probability("beta", beta)?;
        if alpha == 0.5 && beta == 0.5 {
            return Ok(Self::uninformative());
        }
        if alpha <= beta {
            return Err(Error::MalformedSignal {
                alpha,
                beta,
                reason: "alpha must exceed beta",
            });
        }
        if !(beta < 0.5 && alpha > 0.5) {
            return Err(Error::MalformedSignal {
                alpha,
                beta,
                reason: "posteriors must straddle the prior 1/2",
            });
        }
        Ok(Self { alpha, beta })
    }

    pub const fn uninformative() -> Self {
        Self {
            alpha: 0.5,
            beta: 0.5,
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn is_informative(&self) -> bool {
        self.alpha > self.beta
    }

    /// Unconditional probability of realization 𝔞.
    pub fn prob_a(&self) -> f64 {
        if !self.is_informative() {
            return 1.0;
        }
        ((0.5 - self.beta) / (self.alpha - self.beta)).clamp(0.0, 1.0)
    }

    pub fn conditionals(&self) -> Conditionals {
        if !self.is_informative() {
            return Conditionals {
                a_given_theta_a: 1.0,
                a_given_theta_b: 1.0,
            };
        }
        let (a, b) = (self.alpha, self.beta);
        let d = a - b;
        Conditionals {
            a_given_theta_a: ((a - 2.0 * a * b) / d).clamp(0.0, 1.0),
            a_given_theta_b: ((1.0 - 2.0 * b - a + 2.0 * a * b) / d).clamp(0.0, 1.0),
        }
    }

    /// `P(𝔞 | state)`.
    pub fn prob_a_given(&self, state: StateOfWorld) -> f64 {
        let c = self.conditionals();
        match state {
            StateOfWorld::ThetaA => c.a_given_theta_a,
            StateOfWorld::ThetaB => c.a_given_theta_b,
        }
    }

    /// Realizations as `(posterior on A, P(realization | state))` pairs.
    /// Zero-probability realizations are omitted.
    pub fn realizations(&self, state: StateOfWorld) -> Vec<(f64, f64)> {
        if !self.is_informative() {
            return vec![(0.5, 1.0)];
        }
        let p_a = self.prob_a_given(state);
        [(self.alpha, p_a), (self.beta, 1.0 - p_a)]
            .into_iter()
            .filter(|&(_, p)| p > 0.0)
            .collect()
    }

    pub fn bias(&self) -> Option<f64> {
        bias(self)
    }
}

impl std::fmt::Display for SignalSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_informative() {
            write!(f, "({}, {})", self.alpha, self.beta)
        } else {
            write!(f, "uninformative")
        }
    }
}

/// Converts a posterior pair to `(P(𝔞|θ_A), P(𝔞|θ_B))`.
///
/// `(1/2, 1/2)` is the uninformative signal and maps to `(1, 1)`.
pub fn posteriors_to_conditionals(alpha: f64, beta: f64) -> Result<Conditionals> {
    Ok(SignalSpec::new(alpha, beta)?.conditionals())
}

/// Recovers the posterior pair from state-conditional probabilities of 𝔞.
///
/// Equal inputs (within 1e-12) carry no information and give the
/// uninformative signal. If `P(𝔞|θ_A) < P(𝔞|θ_B)` the realizations are
/// relabelled so that 𝔞 is the realization favouring A.
pub fn conditionals_to_posteriors(a_given_theta_a: f64, a_given_theta_b: f64) -> Result<SignalSpec> {
    let (mut pa, mut pb) = (
        check_probability("P(a|theta_A)", a_given_theta_a)?,
        check_probability("P(a|theta_B)", a_given_theta_b)?,
    );
    if (pa - pb).abs() <= 1e-12 {
        return Ok(SignalSpec::uninformative());
    }
    if pa < pb {
        (pa, pb) = (1.0 - pa, 1.0 - pb);
    }
    let alpha = pa / (pa + pb);
    let beta = (1.0 - pa) / ((1.0 - pa) + (1.0 - pb));
    SignalSpec::new(alpha, beta)
}

/// `P(s(θ_B)=𝔞) − P(s(θ_A)=𝔟)`, or `None` for the uninformative signal.
pub fn bias(signal: &SignalSpec) -> Option<f64> {
    if !signal.is_informative() {
        return None;
    }
    let (a, b) = (signal.alpha, signal.beta);
    Some((1.0 - b - a) / (a - b))
}
