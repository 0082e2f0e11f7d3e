use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::signal_grid;
use crate::analysis::Classification;
use crate::error::{Error, Result};
use crate::model::{
    accuracy_vote_share, PopulationProfile, SignalSpec, StateOfWorld, TieRule, SHARE_TOL,
};

const MASS_TOL: f64 = 1e-9;

/// A distribution of exogenous accuracies on `[1/2, 1]`: a piecewise-constant
/// density plus optional point masses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuousProfile {
    /// `(lo, hi, density)` with `lo < hi`, sorted and non-overlapping.
    pieces: Vec<(f64, f64, f64)>,
    /// `(accuracy, mass)`.
    atoms: Vec<(f64, f64)>,
}

impl ContinuousProfile {
    pub fn new(pieces: Vec<(f64, f64, f64)>, atoms: Vec<(f64, f64)>) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidDensity(m));
        let in_range = |x: f64| x.is_finite() && (0.5..=1.0).contains(&x);
        let mut prev_hi = 0.5;
        for &(lo, hi, d) in &pieces {
            if !in_range(lo) || !in_range(hi) {
                return bad(format!("piece [{lo}, {hi}) leaves [0.5, 1]"));
            }
            if lo >= hi {
                return bad(format!("piece [{lo}, {hi}) is empty"));
            }
            if lo < prev_hi {
                return bad(format!("piece starting at {lo} overlaps its predecessor"));
            }
            if !(d.is_finite() && d >= 0.0) {
                return bad(format!("density {d} on [{lo}, {hi}) is negative"));
            }
            prev_hi = hi;
        }
        for &(q, m) in &atoms {
            if !in_range(q) {
                return bad(format!("atom at {q} outside [0.5, 1]"));
            }
            if !(m.is_finite() && m >= 0.0) {
                return bad(format!("atom mass {m} is negative"));
            }
        }
        let integral: f64 = pieces.iter().map(|(lo, hi, d)| d * (hi - lo)).sum::<f64>()
            + atoms.iter().map(|(_, m)| m).sum::<f64>();
        if (integral - 1.0).abs() > MASS_TOL {
            return Err(Error::UnnormalizedDensity { integral });
        }
        Ok(Self {
            pieces: pieces.into_iter().filter(|p| p.2 > 0.0).collect(),
            atoms: atoms.into_iter().filter(|a| a.1 > 0.0).collect(),
        })
    }

    pub fn uniform(lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![(lo, hi, 1.0 / (hi - lo))], Vec::new())
    }

    pub fn point_mass(q: f64) -> Result<Self> {
        Self::new(Vec::new(), vec![(q, 1.0)])
    }

    /// The two accuracy classes as atoms.
    pub fn from_binary(profile: &PopulationProfile) -> Self {
        let mut atoms: Vec<(f64, f64)> = Vec::with_capacity(2);
        for (w, q) in profile.classes() {
            match atoms.iter_mut().find(|(a, _)| *a == q) {
                Some(atom) => atom.1 += w,
                None => atoms.push((q, w)),
            }
        }
        Self {
            pieces: Vec::new(),
            atoms: atoms.into_iter().filter(|a| a.1 > 0.0).collect(),
        }
    }

    /// Parses the text table format.
    ///
    /// ```text
    /// breakpoint value
    /// 0.5  1.0
    /// 0.75 3.0
    /// 1.0  0
    /// atom 0.6 0.25
    /// ```
    ///
    /// Each `value` is the density on `[breakpoint, next breakpoint)`; the
    /// value on the last row is ignored. `atom q mass` lines add point
    /// masses. Blank lines and lines starting with `#` are skipped.
    pub fn from_table(text: &str) -> Result<Self> {
        let bad = |line: usize, m: &str| Err(Error::InvalidDensity(format!("line {line}: {m}")));
        let mut rows: Vec<(f64, f64)> = Vec::new();
        let mut atoms = Vec::new();
        let mut header_seen = false;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if !header_seen {
                header_seen = true;
                if fields == ["breakpoint", "value"] {
                    continue;
                }
                return bad(i + 1, "expected header \"breakpoint value\"");
            }
            let num = |s: &str| s.parse::<f64>().ok();
            match fields.as_slice() {
                ["atom", q, m] => match (num(q), num(m)) {
                    (Some(q), Some(m)) => atoms.push((q, m)),
                    _ => return bad(i + 1, "atom needs two numbers"),
                },
                [b, v] => match (num(b), num(v)) {
                    (Some(b), Some(v)) => rows.push((b, v)),
                    _ => return bad(i + 1, "expected two decimal numbers"),
                },
                _ => return bad(i + 1, "expected two columns"),
            }
        }
        if !header_seen {
            return Err(Error::InvalidDensity("empty table".into()));
        }
        if let Some(&(last, _)) = rows.last() {
            if last > 1.0 {
                return Err(Error::InvalidDensity(format!("last breakpoint {last} exceeds 1")));
            }
        }
        let pieces = rows.windows(2).map(|w| (w[0].0, w[1].0, w[0].1)).collect();
        Self::new(pieces, atoms)
    }

    pub fn pieces(&self) -> &[(f64, f64, f64)] {
        &self.pieces
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    /// Smallest and largest accuracy carrying mass.
    pub fn support_bounds(&self) -> (f64, f64) {
        let lows = self.pieces.iter().map(|p| p.0).chain(self.atoms.iter().map(|a| a.0));
        let highs = self.pieces.iter().map(|p| p.1).chain(self.atoms.iter().map(|a| a.0));
        (lows.fold(f64::INFINITY, f64::min), highs.fold(f64::NEG_INFINITY, f64::max))
    }

    /// `∫ g(q) f(q) dq` from a continuous antiderivative `big_g` of `g`, with
    /// `g` itself evaluated at the atoms.
    pub(crate) fn integrate_exact(&self, g: impl Fn(f64) -> f64, big_g: impl Fn(f64) -> f64) -> f64 {
        let dens: f64 = self.pieces.iter().map(|&(lo, hi, d)| d * (big_g(hi) - big_g(lo))).sum();
        dens + self.atoms.iter().map(|&(q, m)| m * g(q)).sum::<f64>()
    }

    /// Points carrying mass or bounding a piece.
    fn landmarks(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.pieces.iter().flat_map(|p| [p.0, p.1]).chain(self.atoms.iter().map(|a| a.0)).collect();
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    }
}

/// A-share for a signal given to everyone. The per-accuracy share is linear
/// in `q` between `alpha` and `1 − beta`, so the midpoint rule on each
/// sub-interval is exact.
pub fn continuous_vote_share(profile: &ContinuousProfile, signal: &SignalSpec, state: StateOfWorld, tie: TieRule) -> f64 {
    let realizations = signal.realizations(state);
    let share = |q: f64| accuracy_vote_share(q, &realizations, state, tie);
    let kinks = [signal.alpha(), 1.0 - signal.beta()];
    let mut total = 0.0;
    for &(lo, hi, d) in &profile.pieces {
        let mut cuts = vec![lo];
        cuts.extend(kinks.iter().copied().filter(|k| *k > lo && *k < hi));
        cuts.push(hi);
        cuts.sort_by(f64::total_cmp);
        for w in cuts.windows(2) {
            total += d * (w[1] - w[0]) * share(0.5 * (w[0] + w[1]));
        }
    }
    total + profile.atoms.iter().map(|&(q, m)| m * share(q)).sum::<f64>()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ContinuousDecision {
    Manipulable,
    NotManipulable,
    Undetermined,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecisionBasis {
    Analytic,
    Numeric,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuousReport {
    pub support: (f64, f64),
    /// What the support bounds alone decide.
    pub analytic: ContinuousDecision,
    pub classification: Classification,
    pub basis: DecisionBasis,
    pub uninformative_a_share_theta_b: f64,
    /// Best signal found and its A-share in θ_B (numeric basis only, or the
    /// witness of the analytic manipulable case).
    pub best_signal: Option<SignalSpec>,
    pub best_a_share_theta_b: Option<f64>,
    pub evaluated: usize,
}

/// Decides manipulability for a continuum of accuracies. The support bounds
/// settle the cases `supp ⊆ [√2/2, 1]` and `supp ⊆ [1/2, 2/3]`; elsewhere a
/// grid of binary signals of the given step is searched, with the support
/// landmarks injected as posteriors.
pub fn continuous_classify(profile: &ContinuousProfile, step: f64) -> Result<ContinuousReport> {
    if !(step.is_finite() && step > 0.0 && step <= 0.01) {
        return Err(Error::OutsideDomain {
            function: "continuous_classify",
            value: step,
            reason: "step must lie in (0, 0.01]",
        });
    }
    let tie = TieRule::FavorA;
    let support = profile.support_bounds();
    let root_half = std::f64::consts::FRAC_1_SQRT_2;
    // An atom sitting exactly at √2/2 is a knife edge: such voters can be
    // split evenly, so leave it to the search.
    let atom_at_root = profile.atoms.iter().any(|a| (a.0 - root_half).abs() < 1e-12);
    let analytic = if support.0 >= root_half - 1e-12 && !atom_at_root {
        ContinuousDecision::NotManipulable
    } else if support.1 <= 2.0 / 3.0 + 1e-12 {
        ContinuousDecision::Manipulable
    } else {
        ContinuousDecision::Undetermined
    };
    let unin = continuous_vote_share(profile, &SignalSpec::uninformative(), StateOfWorld::ThetaB, tie);
    let mut report = ContinuousReport {
        support,
        analytic,
        classification: Classification::NotManipulable,
        basis: DecisionBasis::Analytic,
        uninformative_a_share_theta_b: unin,
        best_signal: None,
        best_a_share_theta_b: None,
        evaluated: 0,
    };
    if unin >= 0.5 - SHARE_TOL {
        report.classification = Classification::AlwaysA;
        return Ok(report);
    }
    match analytic {
        ContinuousDecision::NotManipulable => return Ok(report),
        ContinuousDecision::Manipulable => {
            let witness = SignalSpec::new(support.1, 0.0)?;
            report.classification = Classification::Manipulable;
            report.best_a_share_theta_b = Some(continuous_vote_share(profile, &witness, StateOfWorld::ThetaB, tie));
            report.best_signal = Some(witness);
            return Ok(report);
        }
        ContinuousDecision::Undetermined => {}
    }
    let marks = profile.landmarks();
    let betas: Vec<f64> = marks.iter().map(|q| 1.0 - q).collect();
    let mut signals = vec![SignalSpec::uninformative()];
    signals.extend(signal_grid(step, &marks, &betas));
    let (best, share) = signals
        .par_iter()
        .map(|s| (*s, continuous_vote_share(profile, s, StateOfWorld::ThetaB, tie)))
        .reduce_with(|x, y| if y.1 > x.1 || (y.1 == x.1 && (y.0.alpha(), y.0.beta()) < (x.0.alpha(), x.0.beta())) { y } else { x })
        .expect("signal grid is never empty");
    report.basis = DecisionBasis::Numeric;
    report.evaluated = signals.len();
    report.best_signal = Some(best);
    report.best_a_share_theta_b = Some(share);
    if share >= 0.5 - SHARE_TOL {
        report.classification = Classification::Manipulable;
    }
    Ok(report)
}
