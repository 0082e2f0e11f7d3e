//! Finite-population Monte Carlo elections.
//!
//! Every trial draws a fresh electorate: each voter's accuracy class, exogenous
//! realization and designer realization are sampled independently given the
//! state. Trial `t` uses a ChaCha stream selected by `t` under the configured
//! seed, so results do not depend on how trials are scheduled across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_probability, Error, Result};
use crate::model::{
    accuracy_vote_share, exact_vote_share, Alternative, DesignerRealization, ExoRealization, PopulationProfile,
    SignalSpec, StateOfWorld, TieRule, VoterCell,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimConfig {
    pub n_voters: u64,
    pub trials: u64,
    pub seed: u64,
    pub tie: TieRule,
    /// Use exactly `round(lambda * n)` low-accuracy voters instead of drawing
    /// each voter's class.
    pub fixed_split: bool,
    pub keep_tallies: bool,
}

impl SimConfig {
    pub fn new(n_voters: u64, trials: u64, seed: u64) -> Result<Self> {
        let config = Self {
            n_voters,
            trials,
            seed,
            tie: TieRule::FavorA,
            fixed_split: false,
            keep_tallies: false,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_voters == 0 {
            return Err(Error::Precondition("n_voters must be at least 1".into()));
        }
        if self.trials == 0 {
            return Err(Error::Precondition("trials must be at least 1".into()));
        }
        Ok(())
    }

    fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if self.n_voters.is_multiple_of(2) {
            w.push(format!(
                "n_voters = {} is even; exact ties are decided by the tie rule",
                self.n_voters
            ));
        }
        w
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElectionResult {
    pub state: StateOfWorld,
    pub config: SimConfig,
    pub a_win_frequency: f64,
    pub b_win_frequency: f64,
    /// Frequency with which the majority picked the alternative that is
    /// better in `state`.
    pub correct_frequency: f64,
    pub mean_a_share: f64,
    /// Sample variance of the per-trial A-share.
    pub var_a_share: f64,
    /// Continuum A-share the empirical mean should approach.
    pub exact_a_share: f64,
    /// A-vote counts, one per trial, when requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tallies: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl ElectionResult {
    /// `sqrt(s(1-s) / (n * trials))` at the exact share.
    pub fn standard_error(&self) -> f64 {
        let s = self.exact_a_share;
        (s * (1.0 - s) / (self.config.n_voters as f64 * self.config.trials as f64)).sqrt()
    }
}

/// Vote and probabilities for every (class, exogenous, designer) combination.
struct Electorate {
    lambda: f64,
    classes: [ClassTable; 2],
}

struct ClassTable {
    p_exo_a: f64,
    p_designer_a: f64,
    // Indexed by [exo is a][designer is 𝔞].
    votes_a: [[bool; 2]; 2],
}

impl Electorate {
    fn new(profile: &PopulationProfile, signal: &SignalSpec, state: StateOfWorld, tie: TieRule) -> Self {
        let table = |accuracy: f64| {
            let mut votes_a = [[false; 2]; 2];
            for (i, exo) in [ExoRealization::B, ExoRealization::A].into_iter().enumerate() {
                for (j, designer) in [DesignerRealization::B, DesignerRealization::A].into_iter().enumerate() {
                    let cell = VoterCell {
                        accuracy,
                        exo,
                        designer,
                    };
                    // Impossible cells have zero probability and are never drawn.
                    votes_a[i][j] = cell.vote(signal, tie).unwrap_or(tie.favored()) == Alternative::A;
                }
            }
            ClassTable {
                p_exo_a: ExoRealization::A.probability(accuracy, state),
                p_designer_a: signal.prob_a_given(state),
                votes_a,
            }
        };
        Self {
            lambda: profile.lambda(),
            classes: [table(profile.q_low()), table(profile.q_high())],
        }
    }

    fn draw_vote(&self, class: usize, rng: &mut ChaCha8Rng) -> bool {
        let t = &self.classes[class];
        let exo = rng.gen::<f64>() < t.p_exo_a;
        let designer = rng.gen::<f64>() < t.p_designer_a;
        t.votes_a[exo as usize][designer as usize]
    }

    fn run_trial(&self, config: &SimConfig, rng: &mut ChaCha8Rng) -> u64 {
        let n = config.n_voters;
        let mut a_votes = 0;
        if config.fixed_split {
            let n_low = (self.lambda * n as f64).round() as u64;
            for i in 0..n {
                a_votes += self.draw_vote(usize::from(i >= n_low), rng) as u64;
            }
        } else {
            for _ in 0..n {
                let class = usize::from(rng.gen::<f64>() >= self.lambda);
                a_votes += self.draw_vote(class, rng) as u64;
            }
        }
        a_votes
    }
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn majority(a_votes: u64, n: u64, tie: TieRule) -> Alternative {
    match (2 * a_votes).cmp(&n) {
        std::cmp::Ordering::Greater => Alternative::A,
        std::cmp::Ordering::Less => Alternative::B,
        std::cmp::Ordering::Equal => tie.favored(),
    }
}

pub fn simulate(
    profile: &PopulationProfile,
    signal: &SignalSpec,
    state: StateOfWorld,
    config: &SimConfig,
) -> Result<ElectionResult> {
    config.validate()?;
    let electorate = Electorate::new(profile, signal, state, config.tie);
    let tallies: Vec<u64> = (0..config.trials)
        .into_par_iter()
        .map(|t| electorate.run_trial(config, &mut trial_rng(config.seed, t)))
        .collect();

    let n = config.n_voters;
    let trials = config.trials as f64;
    let a_wins = tallies.iter().filter(|&&a| majority(a, n, config.tie) == Alternative::A).count() as f64;
    let shares: Vec<f64> = tallies.iter().map(|&a| a as f64 / n as f64).collect();
    let mean = shares.iter().sum::<f64>() / trials;
    let var = if config.trials > 1 {
        shares.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (trials - 1.0)
    } else {
        0.0
    };
    let a_win_frequency = a_wins / trials;
    let b_win_frequency = 1.0 - a_win_frequency;
    Ok(ElectionResult {
        state,
        config: *config,
        a_win_frequency,
        b_win_frequency,
        correct_frequency: match state {
            StateOfWorld::ThetaA => a_win_frequency,
            StateOfWorld::ThetaB => b_win_frequency,
        },
        mean_a_share: mean,
        var_a_share: var,
        exact_a_share: exact_vote_share(profile, signal, state, config.tie),
        tallies: config.keep_tallies.then_some(tallies),
        warnings: config.warnings(),
    })
}

/// Exact probability that a lone voter of the given accuracy picks the
/// alternative that is better in `state`.
pub fn single_voter(accuracy: f64, signal: &SignalSpec, state: StateOfWorld, tie: TieRule) -> Result<f64> {
    check_probability("accuracy", accuracy)?;
    let a = accuracy_vote_share(accuracy, &signal.realizations(state), state, tie);
    Ok(match state {
        StateOfWorld::ThetaA => a,
        StateOfWorld::ThetaB => 1.0 - a,
    })
}

/// Like [`single_voter`] for a voter drawn from `profile`.
pub fn single_voter_in(profile: &PopulationProfile, signal: &SignalSpec, state: StateOfWorld, tie: TieRule) -> f64 {
    let a = exact_vote_share(profile, signal, state, tie);
    match state {
        StateOfWorld::ThetaA => a,
        StateOfWorld::ThetaB => 1.0 - a,
    }
}

/// Frequency with which a majority of `n_voters` independent voters of the
/// given accuracy, with no designer, picks the better alternative. The state
/// is drawn uniformly in every trial.
pub fn condorcet_baseline(accuracy: f64, n_voters: u64, trials: u64, seed: u64) -> Result<f64> {
    if !(accuracy > 0.5 && accuracy <= 1.0) {
        return Err(Error::OutsideDomain {
            function: "condorcet_baseline",
            value: accuracy,
            reason: "accuracy must lie in (1/2, 1]",
        });
    }
    let config = SimConfig::new(n_voters, trials, seed)?;
    let profile = PopulationProfile::homogeneous(accuracy)?;
    let signal = SignalSpec::uninformative();
    let electorates = StateOfWorld::BOTH.map(|s| Electorate::new(&profile, &signal, s, config.tie));
    let correct = (0..trials)
        .into_par_iter()
        .filter(|&t| {
            let mut rng = trial_rng(seed, t);
            let state = if rng.gen_bool(0.5) {
                StateOfWorld::ThetaA
            } else {
                StateOfWorld::ThetaB
            };
            let a_votes = electorates[state as usize].run_trial(&config, &mut rng);
            majority(a_votes, n_voters, config.tie) == state.correct()
        })
        .count();
    Ok(correct as f64 / trials as f64)
}
