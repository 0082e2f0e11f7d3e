//! Classification over a `(q_low, lambda)` grid at fixed `q_high`, written as
//! CSV for heat-map plotting.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::classify;
use crate::error::{Error, Result};
use crate::model::PopulationProfile;

/// Inclusive range `start, start + step, …, end`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Range {
    pub start: f64,
    pub end: f64,
    pub step: f64,
}

impl Range {
    pub fn new(start: f64, end: f64, step: f64) -> Result<Self> {
        if !(start.is_finite() && end.is_finite() && step.is_finite()) {
            return Err(Error::InvalidSweep("range bounds must be finite".into()));
        }
        if step <= 0.0 {
            return Err(Error::InvalidSweep(format!("step {step} must be positive")));
        }
        if start > end {
            return Err(Error::InvalidSweep(format!("start {start} exceeds end {end}")));
        }
        Ok(Self { start, end, step })
    }

    pub fn single(value: f64) -> Self {
        Self {
            start: value,
            end: value,
            step: 1.0,
        }
    }

    /// Values rounded to 1e-10 so that accumulated steps land on decimals.
    pub fn values(&self) -> Vec<f64> {
        let n = ((self.end - self.start) / self.step + 1e-9).floor() as usize;
        (0..=n)
            .map(|i| ((self.start + i as f64 * self.step) * 1e10).round() / 1e10)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub q_high: f64,
    pub q_low: Range,
    pub lambda: Range,
}

impl SweepSpec {
    pub fn new(q_high: f64, q_low: Range, lambda: Range) -> Result<Self> {
        let spec = Self { q_high, q_low, lambda };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidSweep(m));
        if !(self.q_high > 0.5 - 1e-12 && self.q_high <= 1.0) {
            return bad(format!("q_high = {} outside [0.5, 1]", self.q_high));
        }
        let ql = self.q_low.values();
        if ql[0] < 0.5 || *ql.last().unwrap() > self.q_high {
            return bad(format!("q_low range must lie in [0.5, q_high = {}]", self.q_high));
        }
        let l = self.lambda.values();
        if l[0] < 0.0 || *l.last().unwrap() > 1.0 {
            return bad("lambda range must lie in [0, 1]".into());
        }
        Ok(())
    }

    pub fn cells(&self) -> Vec<(f64, f64)> {
        let lambdas = self.lambda.values();
        self.q_low
            .values()
            .into_iter()
            .flat_map(|ql| lambdas.iter().map(move |&l| (ql, l)))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub q_low: f64,
    pub q_high: f64,
    pub lambda: f64,
    pub classification: String,
    pub n_witnesses: usize,
    pub bias_min: Option<f64>,
    pub bias_max: Option<f64>,
    /// Candidate with the highest A-share in θ_B.
    pub best_candidate_id: Option<String>,
}

pub fn sweep_row(profile: &PopulationProfile) -> SweepRow {
    let report = classify(profile);
    let biases = report.witnesses.iter().map(|w| w.bias);
    let bias_min = biases.clone().reduce(f64::min);
    let bias_max = biases.reduce(f64::max);
    SweepRow {
        q_low: profile.q_low(),
        q_high: profile.q_high(),
        lambda: profile.lambda(),
        classification: report.classification.name().to_string(),
        n_witnesses: report.witnesses.len(),
        bias_min,
        bias_max,
        best_candidate_id: report.best_candidate().map(|c| c.id().name().to_string()),
    }
}

/// Rows ordered by `q_low`, then `lambda`.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    spec.cells()
        .par_iter()
        .map(|&(ql, l)| PopulationProfile::new(l, ql, spec.q_high).map(|p| sweep_row(&p)))
        .collect()
}

pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(|e| Error::Csv(e.to_string()))?;
    Ok(())
}
