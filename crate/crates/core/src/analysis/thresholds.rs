//! Closed-form accuracy and population-share thresholds.

use crate::error::{Error, Result};

fn check_lambda(function: &'static str, lambda: f64) -> Result<()> {
    if lambda.is_finite() && (0.0..=1.0).contains(&lambda) {
        Ok(())
    } else {
        Err(Error::OutsideDomain {
            function,
            value: lambda,
            reason: "lambda must lie in [0, 1]",
        })
    }
}

/// Highest accuracy of the informed voters for which A wins both states
/// without any designer signal, when a `lambda` share is uninformed:
/// `1 / (2(1 − λ))`.
///
/// At `lambda = 1` everyone is uninformed and the threshold is `+∞`: A wins
/// for every accuracy. Values above 1 mean the same.
pub fn q_ni(lambda: f64) -> Result<f64> {
    check_lambda("q_ni", lambda)?;
    if lambda == 1.0 {
        return Ok(f64::INFINITY);
    }
    Ok(1.0 / (2.0 * (1.0 - lambda)))
}

/// Highest informed accuracy at which the unbiased signal `(q, 1 − q)` still
/// wins θ_B when a `lambda` share is uninformed. Root of
/// `λ(1 − q) + (1 − λ)(1 − q²) = 1/2`.
pub fn q_bar(lambda: f64) -> Result<f64> {
    check_lambda("q_bar", lambda)?;
    if lambda == 1.0 {
        return Err(Error::OutsideDomain {
            function: "q_bar",
            value: lambda,
            reason: "undefined for a fully uninformed population",
        });
    }
    Ok((-lambda + (lambda * lambda + 2.0 - 2.0 * lambda).sqrt()) / (2.0 - 2.0 * lambda))
}

/// Largest low-accuracy share for which `(q_h, 1 − q_h)` still wins θ_B,
/// whatever the low accuracy: `(1/2 − q_h²) / (q_h (1 − q_h))`.
///
/// Defined on `(1/2, √2/2]`.
pub fn lambda_under(q_high: f64) -> Result<f64> {
    let upper = std::f64::consts::FRAC_1_SQRT_2;
    if !(q_high > 0.5 && q_high <= upper + 1e-12) {
        return Err(Error::OutsideDomain {
            function: "lambda_under",
            value: q_high,
            reason: "q_high must lie in (1/2, sqrt(2)/2]",
        });
    }
    Ok(((0.5 - q_high * q_high) / (q_high * (1.0 - q_high))).max(0.0))
}
