//! The finite candidate set that decides manipulability of a binary profile.
//!
//! Lowering either posterior of an optimal signal down to the nearest point
//! of `{q_ℓ, q_h} × {0, 1 − q_h, 1 − q_ℓ}` changes no voter's behaviour but
//! raises the chance of the A-favourable realization. So if any signal wins
//! θ_B, one of these at most six signals does.

use serde::{Deserialize, Serialize};

use crate::model::{PopulationProfile, SignalSpec};

/// Row of the candidate table: first letter picks `alpha ∈ {q_ℓ, q_h}`,
/// second picks `beta ∈ {0, 1 − q_ℓ, 1 − q_h}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CandidateId {
    /// `(q_ℓ, 0)`
    L0,
    /// `(q_h, 0)`
    H0,
    /// `(q_ℓ, 1 − q_ℓ)`
    LL,
    /// `(q_ℓ, 1 − q_h)`
    LH,
    /// `(q_h, 1 − q_ℓ)`
    HL,
    /// `(q_h, 1 − q_h)`
    HH,
}

impl CandidateId {
    pub const ALL: [CandidateId; 6] = [
        CandidateId::L0,
        CandidateId::H0,
        CandidateId::LL,
        CandidateId::LH,
        CandidateId::HL,
        CandidateId::HH,
    ];

    pub fn posteriors(self, q_low: f64, q_high: f64) -> (f64, f64) {
        match self {
            CandidateId::L0 => (q_low, 0.0),
            CandidateId::H0 => (q_high, 0.0),
            CandidateId::LL => (q_low, 1.0 - q_low),
            CandidateId::LH => (q_low, 1.0 - q_high),
            CandidateId::HL => (q_high, 1.0 - q_low),
            CandidateId::HH => (q_high, 1.0 - q_high),
        }
    }

    /// Closed-form share of B-votes in θ_B, valid for `1/2 < q_ℓ < q_h`.
    /// `L0` and `LL` need `q_ℓ > 1/2`; `H0` and `HH` also hold at `q_ℓ = 1/2`.
    pub fn table_b_share(self, lambda: f64, q_low: f64, q_high: f64) -> f64 {
        let (l, ql, qh) = (lambda, q_low, q_high);
        match self {
            CandidateId::L0 => 1.0 - (1.0 - ql) * (1.0 - qh + l * qh) / ql,
            CandidateId::H0 => (2.0 * qh - 1.0) / qh,
            CandidateId::LL => qh - l * (qh - ql * ql),
            CandidateId::LH => l * qh * (2.0 * ql - 1.0) / (qh + ql - 1.0) + (1.0 - l) * qh,
            CandidateId::HL => (l * ql + (1.0 - l) * qh) * ql * (2.0 * qh - 1.0) / (qh + ql - 1.0),
            CandidateId::HH => qh * qh + l * qh * (1.0 - qh),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CandidateId::L0 => "L0",
            CandidateId::H0 => "H0",
            CandidateId::LL => "LL",
            CandidateId::LH => "LH",
            CandidateId::HL => "HL",
            CandidateId::HH => "HH",
        }
    }
}

impl std::fmt::Display for CandidateId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CandidateSignal {
    pub id: CandidateId,
    pub signal: SignalSpec,
    /// Closed-form share of B-votes in θ_B.
    pub b_share_theta_b: f64,
}

/// The effective `(lambda, q_low, q_high)` used for the candidate table.
/// Homogeneous populations are folded to `lambda = 0` with a single accuracy.
pub(crate) fn normalized(profile: &PopulationProfile) -> (f64, f64, f64) {
    let (l, ql, qh) = (profile.lambda(), profile.q_low(), profile.q_high());
    if ql == qh || l == 0.0 {
        (0.0, qh, qh)
    } else if l == 1.0 {
        (0.0, ql, ql)
    } else {
        (l, ql, qh)
    }
}

/// Candidate signals of a profile, deduplicated, in table order.
///
/// With `q_ℓ = 1/2` the low-accuracy rows are dropped (their `alpha` would be
/// the prior) and only `(q_h, 0)`, `(q_h, 1 − q_h)` remain; homogeneous
/// populations likewise reduce to those two rows.
pub fn candidate_signals(profile: &PopulationProfile) -> Vec<CandidateSignal> {
    let (l, ql, qh) = normalized(profile);
    let homogeneous = ql == qh;
    let ids: &[CandidateId] = if homogeneous || ql == 0.5 {
        &[CandidateId::H0, CandidateId::HH]
    } else {
        &CandidateId::ALL
    };
    let mut out: Vec<CandidateSignal> = Vec::with_capacity(6);
    for &id in ids {
        let (a, b) = id.posteriors(ql, qh);
        let signal = match SignalSpec::new(a, b) {
            Ok(s) if s.is_informative() => s,
            _ => continue,
        };
        if out.iter().any(|c| c.signal == signal) {
            continue;
        }
        let b_share_theta_b = if homogeneous {
            // HH at λ = 0 is q², H0 is (2q − 1)/q.
            id.table_b_share(0.0, qh, qh)
        } else {
            id.table_b_share(l, ql, qh)
        };
        out.push(CandidateSignal {
            id,
            signal,
            b_share_theta_b,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{exact_vote_share, StateOfWorld, TieRule};
    use approx::assert_abs_diff_eq;

    fn profile(l: f64, ql: f64, qh: f64) -> PopulationProfile {
        PopulationProfile::new(l, ql, qh).unwrap()
    }

    #[test]
    fn six_rows_for_a_generic_profile() {
        let p = profile(0.3, 0.6, 0.7);
        let c = candidate_signals(&p);
        assert_eq!(c.len(), 6);
        let hl = c.iter().find(|c| c.id == CandidateId::HL).unwrap();
        assert_abs_diff_eq!(hl.signal.alpha(), 0.7);
        assert_abs_diff_eq!(hl.signal.beta(), 0.4, epsilon = 1e-15);
        assert_abs_diff_eq!(hl.b_share_theta_b, (0.3 * 0.6 + 0.7 * 0.7) * 0.8, epsilon = 1e-12);
        let expected = [0.66, 0.4 / 0.7, 0.598, 0.63, 0.536, 0.553];
        for (cand, want) in c.iter().zip(expected) {
            assert_abs_diff_eq!(cand.b_share_theta_b, want, epsilon = 1e-12);
        }
    }

    #[test]
    fn uninformed_low_class_leaves_two_rows() {
        let c = candidate_signals(&profile(0.4, 0.5, 0.7));
        let ids: Vec<_> = c.iter().map(|c| c.id).collect();
        assert_eq!(ids, vec![CandidateId::H0, CandidateId::HH]);
    }

    #[test]
    fn homogeneous_collapses() {
        for p in [profile(0.0, 0.7, 0.7), profile(0.4, 0.7, 0.7)] {
            let c = candidate_signals(&p);
            assert_eq!(c.len(), 2);
            assert_abs_diff_eq!(c[1].b_share_theta_b, 0.49, epsilon = 1e-12);
        }
        assert_eq!(candidate_signals(&profile(0.0, 1.0, 1.0)).len(), 1);
        assert!(candidate_signals(&profile(0.0, 0.5, 0.5)).is_empty());
    }

    #[test]
    fn perfectly_informed_high_class_dedupes() {
        let c = candidate_signals(&profile(0.3, 0.6, 1.0));
        let ids: Vec<_> = c.iter().map(|c| c.id).collect();
        assert_eq!(ids, vec![CandidateId::L0, CandidateId::H0, CandidateId::LL, CandidateId::HL]);
    }

    #[test]
    fn table_matches_cells_on_worked_profiles() {
        for (l, ql, qh) in [(0.3, 0.6, 0.7), (0.95, 0.6, 0.7), (0.04, 0.6, 0.7), (0.32, 0.51, 0.7), (0.4, 0.69, 0.7)] {
            let p = profile(l, ql, qh);
            for c in candidate_signals(&p) {
                let cells = 1.0 - exact_vote_share(&p, &c.signal, StateOfWorld::ThetaB, TieRule::FavorA);
                assert_abs_diff_eq!(cells, c.b_share_theta_b, epsilon = 1e-9);
            }
        }
    }
}
