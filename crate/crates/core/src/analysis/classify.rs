use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    election_outcome, exact_vote_share, Alternative, PopulationProfile, SignalSpec, StateOfWorld, TieRule, SHARE_TOL,
};

use super::candidates::{candidate_signals, normalized, CandidateId, CandidateSignal};
use super::thresholds::{lambda_under, q_bar, q_ni};

const SQRT2_2: f64 = std::f64::consts::FRAC_1_SQRT_2;
const TWO_THIRDS: f64 = 2.0 / 3.0;
const BIAS_ZERO_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Classification {
    /// A wins both states even without a designer signal.
    AlwaysA,
    /// Some designer signal makes A win both states.
    Manipulable,
    /// A wins only in θ_A whatever the designer does.
    NotManipulable,
}

impl Classification {
    pub fn name(self) -> &'static str {
        match self {
            Classification::AlwaysA => "AlwaysA",
            Classification::Manipulable => "Manipulable",
            Classification::NotManipulable => "NotManipulable",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BiasSigns {
    AllPositive,
    /// Every bias `<= 0`, at least one exactly zero.
    AllNonpositive,
    AllNegative,
    /// Both signs present, none unbiased.
    Mixed,
    /// An unbiased signal alongside a positively biased one.
    ContainsUnbiased,
}

impl BiasSigns {
    pub fn from_biases(biases: impl IntoIterator<Item = f64>) -> Option<Self> {
        let (mut pos, mut neg, mut zero, mut any) = (false, false, false, false);
        for b in biases {
            any = true;
            if b > BIAS_ZERO_TOL {
                pos = true;
            } else if b < -BIAS_ZERO_TOL {
                neg = true;
            } else {
                zero = true;
            }
        }
        if !any {
            return None;
        }
        Some(match (pos, neg, zero) {
            (true, false, false) => BiasSigns::AllPositive,
            (false, true, false) => BiasSigns::AllNegative,
            (false, _, true) => BiasSigns::AllNonpositive,
            (true, true, false) => BiasSigns::Mixed,
            _ => BiasSigns::ContainsUnbiased,
        })
    }

    pub fn all_nonpositive(self) -> bool {
        matches!(self, BiasSigns::AllNonpositive | BiasSigns::AllNegative)
    }
}

/// A candidate evaluated by exact cell summation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CandidateEvaluation {
    #[serde(flatten)]
    pub candidate: CandidateSignal,
    pub bias: f64,
    pub a_share_theta_a: f64,
    pub a_share_theta_b: f64,
    pub optimal: bool,
}

impl CandidateEvaluation {
    pub fn id(&self) -> CandidateId {
        self.candidate.id
    }

    pub fn signal(&self) -> SignalSpec {
        self.candidate.signal
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManipulabilityReport {
    pub profile: PopulationProfile,
    pub classification: Classification,
    /// Candidates under which A wins both states.
    pub witnesses: Vec<CandidateEvaluation>,
    pub bias_signs: Option<BiasSigns>,
    /// Every candidate, optimal or not.
    pub candidates: Vec<CandidateEvaluation>,
    pub uninformative_a_share_theta_b: f64,
    /// What the closed-form threshold results predict, where one applies.
    pub analytic: Option<Classification>,
}

impl ManipulabilityReport {
    /// Whether the closed-form prediction (if any) agrees with enumeration.
    pub fn consistent(&self) -> bool {
        self.analytic.is_none_or(|a| a == self.classification)
    }

    /// The candidate with the highest A-share in θ_B.
    pub fn best_candidate(&self) -> Option<&CandidateEvaluation> {
        self.candidates
            .iter()
            .fold(None, |best: Option<&CandidateEvaluation>, c| match best {
                Some(b) if b.a_share_theta_b >= c.a_share_theta_b => Some(b),
                _ => Some(c),
            })
    }
}

/// A wins both states under `signal` with A-favourable ties.
pub(crate) fn wins_both(profile: &PopulationProfile, signal: &SignalSpec, tie: TieRule) -> (bool, f64, f64) {
    let a = exact_vote_share(profile, signal, StateOfWorld::ThetaA, tie);
    let b = exact_vote_share(profile, signal, StateOfWorld::ThetaB, tie);
    let win = election_outcome(a, tie) == Alternative::A && election_outcome(b, tie) == Alternative::A;
    (win, a, b)
}

pub(crate) fn evaluate(profile: &PopulationProfile, candidate: CandidateSignal) -> CandidateEvaluation {
    let (optimal, a, b) = wins_both(profile, &candidate.signal, TieRule::FavorA);
    CandidateEvaluation {
        candidate,
        bias: candidate.signal.bias().expect("candidates are informative"),
        a_share_theta_a: a,
        a_share_theta_b: b,
        optimal,
    }
}

/// Decides manipulability by enumerating the candidate signals, under
/// A-favourable tie-breaking.
pub fn classify(profile: &PopulationProfile) -> ManipulabilityReport {
    let (always_a, _, uninformative_b) = wins_both(profile, &SignalSpec::uninformative(), TieRule::FavorA);
    let candidates: Vec<_> = candidate_signals(profile)
        .into_iter()
        .map(|c| evaluate(profile, c))
        .collect();
    let (classification, witnesses) = if always_a {
        (Classification::AlwaysA, Vec::new())
    } else {
        let w: Vec<_> = candidates.iter().copied().filter(|c| c.optimal).collect();
        if w.is_empty() {
            (Classification::NotManipulable, w)
        } else {
            (Classification::Manipulable, w)
        }
    };
    let bias_signs = BiasSigns::from_biases(witnesses.iter().map(|w| w.bias));
    ManipulabilityReport {
        profile: *profile,
        classification,
        witnesses,
        bias_signs,
        candidates,
        uninformative_a_share_theta_b: uninformative_b,
        analytic: analytic_classification(profile),
    }
}

/// The classification implied by the threshold results alone, or `None`
/// where they are silent.
///
/// Populations with an uninformed share use the `q_NI` / `q̄` thresholds;
/// informed heterogeneous populations use the `√2/2`, `2/3` and `λ̲` bounds
/// and, for the "λ large enough" branches, [`large_lambda_threshold`].
pub fn analytic_classification(profile: &PopulationProfile) -> Option<Classification> {
    let (l, ql, qh) = normalized(profile);
    let tol = 1e-12;
    if ql == qh || ql == 0.5 {
        // Uninformed share λ (zero when homogeneous) with accuracy q_h.
        let lambda = if ql == qh { 0.0 } else { l };
        let q = qh;
        if q == 0.5 || q <= q_ni(lambda).ok()? + tol {
            return Some(Classification::AlwaysA);
        }
        let bar = q_bar(lambda).ok()?;
        return Some(if q <= bar + tol {
            Classification::Manipulable
        } else {
            Classification::NotManipulable
        });
    }
    if ql > SQRT2_2 + tol {
        return Some(Classification::NotManipulable);
    }
    if qh <= TWO_THIRDS + tol {
        return Some(Classification::Manipulable);
    }
    let by_large_lambda = |l: f64| match large_lambda_threshold(ql, qh) {
        Some(t) if l >= t - 1e-9 => Classification::Manipulable,
        _ => Classification::NotManipulable,
    };
    if qh <= SQRT2_2 + tol {
        let under = lambda_under(qh.min(SQRT2_2)).ok()?;
        if l <= under + tol {
            return Some(Classification::Manipulable);
        }
        // Near the boundaries the bisected threshold is only 1e-9 accurate.
        if (l - under).abs() < 1e-8 {
            return None;
        }
        return Some(by_large_lambda(l));
    }
    if ql < SQRT2_2 - tol {
        if large_lambda_threshold(ql, qh).is_some_and(|t| (l - t).abs() < 1e-8) {
            return None;
        }
        return Some(by_large_lambda(l));
    }
    None
}

/// Smallest `λ` at which one of the λ-decreasing candidates
/// (`L0`, `LL`, `LH`, `HL`) brings the B-share in θ_B down to 1/2, found by
/// bisection on their closed forms to 1e-12. `None` if not even `λ = 1`
/// suffices. Requires `1/2 < q_low < q_high`.
pub fn large_lambda_threshold(q_low: f64, q_high: f64) -> Option<f64> {
    if !(q_low > 0.5 && q_low < q_high && q_high <= 1.0) {
        return None;
    }
    let ids = [CandidateId::L0, CandidateId::LL, CandidateId::LH, CandidateId::HL];
    let excess = |l: f64| {
        ids.iter()
            .map(|id| id.table_b_share(l, q_low, q_high))
            .fold(f64::INFINITY, f64::min)
            - 0.5
    };
    if excess(1.0) > SHARE_TOL {
        return None;
    }
    if excess(0.0) <= SHARE_TOL {
        return Some(0.0);
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if excess(mid) <= SHARE_TOL {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}

/// Analytic regimes in which the sign of every optimal signal's bias is known.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BiasRegime {
    /// Uninformed or homogeneous population with `q_h ∈ (2/3, q̄(λ)]`:
    /// every optimal signal has `alpha >= q_h`, `beta >= 1 − q_h`.
    PartiallyUninformedNonpositive,
    /// `q_h > 2/3` and only `(q_ℓ, 0)` / `(q_ℓ, 1 − q_h)` win: every optimal
    /// signal lies in `[q_ℓ, q_h) × [0, 1 − q_ℓ)` and the non-positively
    /// biased part of that box leaves a B-majority.
    PositiveLowAccuracy,
    /// `q_h ∈ (2/3, √2/2)` and `(q_h, 1 − q_ℓ)` is the unique winning
    /// candidate: every optimal signal has `alpha + beta > 1`.
    NegativeNearHomogeneous,
}

impl BiasRegime {
    pub fn agrees_with(self, signs: BiasSigns) -> bool {
        match self {
            BiasRegime::PartiallyUninformedNonpositive => signs.all_nonpositive(),
            BiasRegime::PositiveLowAccuracy => signs == BiasSigns::AllPositive,
            BiasRegime::NegativeNearHomogeneous => signs == BiasSigns::AllNegative,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BiasDirection {
    pub signs: BiasSigns,
    pub regimes: Vec<BiasRegime>,
    /// Every regime tag agrees with the computed witness signs.
    pub consistent: bool,
    pub witnesses: Vec<CandidateEvaluation>,
}

fn regimes_of(report: &ManipulabilityReport) -> Vec<BiasRegime> {
    let mut out = Vec::new();
    if report.classification != Classification::Manipulable {
        return out;
    }
    let (l, ql, qh) = normalized(&report.profile);
    if ql == qh || ql == 0.5 {
        let lambda = if ql == qh { 0.0 } else { l };
        if let Ok(bar) = q_bar(lambda) {
            if qh > TWO_THIRDS && qh <= bar + 1e-12 {
                out.push(BiasRegime::PartiallyUninformedNonpositive);
            }
        }
        return out;
    }
    let ids: Vec<_> = report.witnesses.iter().map(|w| w.id()).collect();
    if qh > TWO_THIRDS && ids.iter().all(|id| matches!(id, CandidateId::L0 | CandidateId::LH)) {
        out.push(BiasRegime::PositiveLowAccuracy);
    }
    if qh > TWO_THIRDS && qh < SQRT2_2 && ids == [CandidateId::HL] {
        out.push(BiasRegime::NegativeNearHomogeneous);
    }
    out
}

/// Sign pattern of the optimal signals' biases, tagged with the analytic
/// regime the profile falls in (if any).
pub fn bias_direction(profile: &PopulationProfile) -> Result<BiasDirection> {
    let report = classify(profile);
    if report.classification != Classification::Manipulable {
        return Err(Error::NotManipulable);
    }
    let signs = report.bias_signs.expect("manipulable profiles have witnesses");
    let regimes = regimes_of(&report);
    let consistent = regimes.iter().all(|r| r.agrees_with(signs));
    Ok(BiasDirection {
        signs,
        regimes,
        consistent,
        witnesses: report.witnesses,
    })
}

/// Open `λ`-intervals on which `regime` applies for fixed accuracies, located
/// by scanning `λ` at step 1e-3 and refining each endpoint by bisection to
/// 1e-9.
pub fn bias_regime_intervals(q_low: f64, q_high: f64, regime: BiasRegime) -> Result<Vec<(f64, f64)>> {
    PopulationProfile::new(0.5, q_low, q_high)?;
    let holds = |l: f64| {
        PopulationProfile::new(l, q_low, q_high)
            .map(|p| regimes_of(&classify(&p)).contains(&regime))
            .unwrap_or(false)
    };
    let refine = |mut inside: f64, mut outside: f64| {
        while (inside - outside).abs() > 1e-9 {
            let mid = 0.5 * (inside + outside);
            if holds(mid) {
                inside = mid;
            } else {
                outside = mid;
            }
        }
        0.5 * (inside + outside)
    };
    const STEPS: usize = 1000;
    let grid: Vec<(f64, bool)> = (0..=STEPS)
        .map(|i| {
            let l = i as f64 / STEPS as f64;
            (l, holds(l))
        })
        .collect();
    let mut intervals = Vec::new();
    let mut start: Option<usize> = None;
    for (i, &(_, ok)) in grid.iter().enumerate() {
        match (start, ok) {
            (None, true) => start = Some(i),
            (Some(s), false) => {
                intervals.push((s, i - 1));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        intervals.push((s, STEPS));
    }
    Ok(intervals
        .into_iter()
        .map(|(s, e)| {
            let lo = if s == 0 { 0.0 } else { refine(grid[s].0, grid[s - 1].0) };
            let hi = if e == STEPS { 1.0 } else { refine(grid[e].0, grid[e + 1].0) };
            (lo, hi)
        })
        .collect())
}
