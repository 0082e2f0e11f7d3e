//! Variants of the model: a continuum of accuracies, signals targeted at
//! accuracy classes (or at classes and exogenous realizations), and public
//! signals whose realization every voter shares.

mod continuous;
mod public;
mod targeted;

pub use continuous::{
    continuous_classify, continuous_vote_share, ContinuousDecision, ContinuousProfile, ContinuousReport,
    DecisionBasis,
};
pub use public::{public_persuasion_compare, public_win_probabilities, Medium, PublicReport};
pub use targeted::{
    strongly_targeted_classify, strongly_targeted_classify_continuous, strongly_targeted_share, targeted_class_share,
    targeted_classify, targeted_classify_continuous, targeted_signal, ClassAssignment, StronglyTargetedReport,
    TargetedPlan, TargetedReport, CROSSOVER,
};

use crate::model::SignalSpec;

/// Informative signals on an `(alpha, beta)` grid of the given step, plus
/// every pair from the extra values.
fn signal_grid(step: f64, extra_alphas: &[f64], extra_betas: &[f64]) -> Vec<SignalSpec> {
    let n = (0.5 / step + 1e-9).floor() as usize;
    let mut alphas: Vec<f64> = (1..=n).map(|i| (0.5 + i as f64 * step).min(1.0)).collect();
    let mut betas: Vec<f64> = (0..=n).map(|j| j as f64 * step).filter(|b| *b < 0.5 - 1e-12).collect();
    alphas.extend(extra_alphas.iter().copied().filter(|a| *a > 0.5 && *a <= 1.0));
    betas.extend(extra_betas.iter().copied().filter(|b| *b >= 0.0 && *b < 0.5));
    for v in [&mut alphas, &mut betas] {
        v.sort_by(f64::total_cmp);
        v.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    }
    let mut out = Vec::with_capacity(alphas.len() * betas.len());
    for &a in &alphas {
        for &b in &betas {
            if let Ok(s) = SignalSpec::new(a, b) {
                if s.is_informative() {
                    out.push(s);
                }
            }
        }
    }
    out
}
