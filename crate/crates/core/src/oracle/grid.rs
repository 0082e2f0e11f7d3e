use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{candidate_signals, normalized, wins_both};
use crate::error::{Error, Result};
use crate::model::{PopulationProfile, SignalSpec, TieRule, POSTERIOR_TOL};

pub const DEFAULT_STEP: f64 = 0.005;

/// Offset applied to the candidates when ties favour B. Indifferent voters
/// then vote B, so each candidate is nudged up to make them strict.
pub const PERTURBATION: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub alpha: f64,
    pub beta: f64,
    pub a_share_theta_b: f64,
    pub bias: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridReport {
    pub resolution: f64,
    pub tie: TieRule,
    pub evaluated: usize,
    /// Grid signals under which A wins both states.
    pub optimal_set: Vec<GridPoint>,
    pub max_share: f64,
    pub argmax: GridPoint,
    pub bias_range: Option<(f64, f64)>,
}

impl GridReport {
    pub fn manipulable(&self) -> bool {
        !self.optimal_set.is_empty()
    }
}

fn check_step(step: f64) -> Result<()> {
    if step.is_finite() && step > 0.0 && step <= 0.01 {
        Ok(())
    } else {
        Err(Error::OutsideDomain {
            function: "grid_search",
            value: step,
            reason: "step must lie in (0, 0.01]",
        })
    }
}

/// `(q + ε, β + ε)` and `(1/2 + ε, β + ε)` for every candidate posterior pair,
/// where ties favouring B leave the unperturbed candidates one voter short.
pub fn perturbed_candidates(profile: &PopulationProfile, eps: f64) -> Vec<SignalSpec> {
    let (_, ql, qh) = normalized(profile);
    let alphas = [0.5, ql, qh];
    let betas = [0.0, 1.0 - qh, 1.0 - ql];
    let mut out = Vec::new();
    for a in alphas {
        for b in betas {
            if let Ok(s) = SignalSpec::new((a + eps).min(1.0), b + eps) {
                if s.is_informative() && !out.contains(&s) {
                    out.push(s);
                }
            }
        }
    }
    out
}

/// All signals on the `(alpha, beta)` grid plus the injected candidates.
fn signal_grid(profile: &PopulationProfile, step: f64, tie: TieRule) -> Vec<SignalSpec> {
    let mut signals: Vec<SignalSpec> = candidate_signals(profile).into_iter().map(|c| c.signal).collect();
    if tie == TieRule::FavorB {
        signals.extend(perturbed_candidates(profile, PERTURBATION));
    }
    let key = |s: &SignalSpec| ((s.alpha() * 1e10).round() as i64, (s.beta() * 1e10).round() as i64);
    let mut seen: std::collections::HashSet<(i64, i64)> = signals.iter().map(key).collect();
    let n_alpha = (0.5 / step + 1e-9).floor() as usize;
    for i in 1..=n_alpha {
        let alpha = (0.5 + i as f64 * step).min(1.0);
        for j in 0.. {
            let beta = j as f64 * step;
            if beta >= 0.5 - 1e-12 {
                break;
            }
            if let Ok(s) = SignalSpec::new(alpha, beta) {
                if seen.insert(key(&s)) {
                    signals.push(s);
                }
            }
        }
    }
    signals
}

/// Exhaustive evaluation of the A-share in θ_B over a grid of binary signals
/// with `beta ∈ [0, 1/2)`, `alpha ∈ (1/2, 1]`. The candidate signals are
/// always included exactly (and, under B-favourable ties, their
/// perturbations), whatever the step.
pub fn grid_search(profile: &PopulationProfile, step: f64, tie: TieRule) -> Result<GridReport> {
    check_step(step)?;
    let signals = signal_grid(profile, step, tie);
    let evaluated: Vec<(GridPoint, bool)> = signals
        .par_iter()
        .map(|s| {
            let (win, _, b) = wins_both(profile, s, tie);
            let point = GridPoint {
                alpha: s.alpha(),
                beta: s.beta(),
                a_share_theta_b: b,
                bias: s.bias().expect("grid signals are informative"),
            };
            (point, win)
        })
        .collect();
    let argmax = evaluated
        .iter()
        .map(|(p, _)| *p)
        .reduce(|best, p| if p.a_share_theta_b > best.a_share_theta_b { p } else { best })
        .expect("grid is never empty");
    let optimal_set: Vec<GridPoint> = evaluated.iter().filter(|(_, w)| *w).map(|(p, _)| *p).collect();
    let bias_range = optimal_set.iter().fold(None, |acc: Option<(f64, f64)>, p| {
        Some(acc.map_or((p.bias, p.bias), |(lo, hi)| (lo.min(p.bias), hi.max(p.bias))))
    });
    Ok(GridReport {
        resolution: step,
        tie,
        evaluated: evaluated.len(),
        optimal_set,
        max_share: argmax.a_share_theta_b,
        argmax,
        bias_range,
    })
}

/// Lowers `(alpha, beta)` to the largest table values not above them:
/// `alpha` to `{q_ℓ, q_h}`, `beta` to `{0, 1 − q_h, 1 − q_ℓ}`. `None` if
/// `alpha < q_ℓ`. A result with `alpha = 1/2` is the uninformative signal.
pub fn rounded_down_candidate(profile: &PopulationProfile, alpha: f64, beta: f64) -> Option<SignalSpec> {
    let (_, ql, qh) = normalized(profile);
    let pick = |options: &[f64], x: f64| {
        options
            .iter()
            .copied()
            .filter(|&q| q <= x + POSTERIOR_TOL)
            .fold(None, |m: Option<f64>, q| Some(m.map_or(q, |m| m.max(q))))
    };
    let a = pick(&[ql, qh], alpha)?;
    let b = pick(&[0.0, 1.0 - qh, 1.0 - ql], beta)?;
    if a <= 0.5 {
        return Some(SignalSpec::uninformative());
    }
    SignalSpec::new(a, b).ok()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub alpha: f64,
    pub beta: f64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lemma1Verification {
    pub holds: bool,
    pub grid_manipulable: bool,
    pub candidate_manipulable: bool,
    pub discrepancies: Vec<Discrepancy>,
    pub grid: GridReport,
}

/// Checks the candidate reduction against the grid: the grid has an optimal
/// signal iff some candidate is optimal, and every grid-optimal signal
/// rounds down to an optimal signal.
pub fn verify_lemma1(profile: &PopulationProfile, step: f64) -> Result<Lemma1Verification> {
    let grid = grid_search(profile, step, TieRule::FavorA)?;
    let candidate_manipulable = candidate_signals(profile)
        .iter()
        .any(|c| wins_both(profile, &c.signal, TieRule::FavorA).0);
    let mut discrepancies = Vec::new();
    if grid.manipulable() != candidate_manipulable {
        discrepancies.push(Discrepancy {
            alpha: grid.argmax.alpha,
            beta: grid.argmax.beta,
            reason: format!(
                "grid manipulable = {}, candidates manipulable = {}",
                grid.manipulable(),
                candidate_manipulable
            ),
        });
    }
    for p in &grid.optimal_set {
        match rounded_down_candidate(profile, p.alpha, p.beta) {
            None => discrepancies.push(Discrepancy {
                alpha: p.alpha,
                beta: p.beta,
                reason: "optimal signal with alpha below q_low".into(),
            }),
            Some(c) if !wins_both(profile, &c, TieRule::FavorA).0 => discrepancies.push(Discrepancy {
                alpha: p.alpha,
                beta: p.beta,
                reason: format!("rounded-down signal {c} is not optimal"),
            }),
            Some(_) => {}
        }
    }
    Ok(Lemma1Verification {
        holds: discrepancies.is_empty(),
        grid_manipulable: grid.manipulable(),
        candidate_manipulable,
        discrepancies,
        grid,
    })
}
