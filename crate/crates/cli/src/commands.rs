use std::fs;
use std::io::{self, Read, Write};
use std::path::Path;

use condorcet_core::analysis::{
    bias_direction, classify, lambda_under, large_lambda_threshold, q_bar, q_ni, Classification,
};
use condorcet_core::extensions::{
    continuous_classify, public_persuasion_compare, strongly_targeted_classify, strongly_targeted_classify_continuous,
    targeted_classify, targeted_classify_continuous, ContinuousProfile,
};
use condorcet_core::model::{conditionals_to_posteriors, PopulationProfile, SignalSpec};
use condorcet_core::oracle::{grid_search, verify_lemma1};
use condorcet_core::sim::{simulate, SimConfig};
use condorcet_core::sweep::{run_sweep, write_csv, Range, SweepSpec};
use condorcet_core::Error;
use serde_json::{json, Value};

use crate::{Cli, Command, Extension, ExtensionProfile, ProfileArgs, SignalArgs};

pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        Self {
            code: 2,
            message: e.to_string(),
        }
    }
}

fn domain(message: impl Into<String>) -> CliError {
    CliError {
        code: 2,
        message: message.into(),
    }
}

fn internal(message: impl Into<String>) -> CliError {
    CliError {
        code: 3,
        message: message.into(),
    }
}

type CliResult<T> = Result<T, CliError>;

impl ProfileArgs {
    fn resolve(&self) -> CliResult<PopulationProfile> {
        let (ql, qh) = match (self.q, self.q_low, self.q_high) {
            (Some(q), _, _) => (q, q),
            (None, Some(l), Some(h)) => (l, h),
            (None, Some(l), None) => (l, l),
            (None, None, Some(h)) => (h, h),
            (None, None, None) => return Err(domain("give --q or --q-low/--q-high")),
        };
        Ok(PopulationProfile::new(self.lambda.unwrap_or(0.0), ql, qh)?)
    }
}

fn profile_json(p: &PopulationProfile) -> Value {
    json!({ "lambda": p.lambda(), "q_low": p.q_low(), "q_high": p.q_high() })
}

impl SignalArgs {
    fn resolve(&self) -> CliResult<SignalSpec> {
        if let Some(c) = &self.signal_cond {
            return Ok(conditionals_to_posteriors(c[0], c[1])?);
        }
        let Some(text) = &self.signal else {
            return Ok(SignalSpec::uninformative());
        };
        if text == "none" || text == "uninformative" {
            return Ok(SignalSpec::uninformative());
        }
        let (mut alpha, mut beta) = (None, None);
        for part in text.split(',') {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| domain(format!("malformed signal component {part:?}")))?;
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| domain(format!("{v:?} is not a number")))?;
            match k.trim() {
                "alpha" => alpha = Some(v),
                "beta" => beta = Some(v),
                other => return Err(domain(format!("unknown signal key {other:?}"))),
            }
        }
        match (alpha, beta) {
            (Some(a), Some(b)) => Ok(SignalSpec::new(a, b)?),
            _ => Err(domain("signal needs both alpha and beta")),
        }
    }
}

fn parse_range(text: &str) -> CliResult<Range> {
    let nums: Vec<f64> = text
        .split(':')
        .map(|s| s.trim().parse::<f64>().map_err(|_| domain(format!("bad range {text:?}"))))
        .collect::<CliResult<_>>()?;
    match nums.as_slice() {
        [v] => Ok(Range::single(*v)),
        [a, b, s] => Ok(Range::new(*a, *b, *s)?),
        _ => Err(domain(format!("range {text:?} must be START:END:STEP or a single value"))),
    }
}

fn read_table(path: &Path) -> CliResult<ContinuousProfile> {
    let text = if path == Path::new("-") {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| domain(format!("reading stdin: {e}")))?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| domain(format!("reading {}: {e}", path.display())))?
    };
    Ok(ContinuousProfile::from_table(&text)?)
}

fn envelope(command: &str, inputs: Value, result: Value) -> Value {
    json!({
        "tool": "condorcet",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "inputs": inputs,
        "result": result,
    })
}

fn emit(cli: &Cli, bytes: &[u8]) -> CliResult<()> {
    match &cli.output {
        Some(path) => fs::write(path, bytes).map_err(|e| domain(format!("writing {}: {e}", path.display()))),
        None => io::stdout()
            .write_all(bytes)
            .map_err(|e| internal(format!("writing stdout: {e}"))),
    }
}

fn emit_json(cli: &Cli, value: &Value) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| internal(e.to_string()))?;
    text.push('\n');
    emit(cli, text.as_bytes())
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

pub fn run(cli: &Cli) -> CliResult<()> {
    if cli.csv && !matches!(cli.command, Command::Sweep { .. }) {
        return Err(domain("--csv is only available for sweep"));
    }
    match &cli.command {
        Command::Analyze { profile, full } => analyze(cli, profile, *full),
        Command::Simulate {
            profile,
            signal,
            state,
            n,
            trials,
            seed,
            tie,
            fixed_split,
            tallies,
        } => {
            let p = profile.resolve()?;
            let s = signal.resolve()?;
            let config = SimConfig {
                n_voters: *n,
                trials: *trials,
                seed: *seed,
                tie: (*tie).into(),
                fixed_split: *fixed_split,
                keep_tallies: *tallies,
            };
            let result = simulate(&p, &s, *state, &config)?;
            for w in &result.warnings {
                eprintln!("warning: {w}");
            }
            let inputs = json!({
                "profile": profile_json(&p),
                "signal": to_value(&s),
                "conditionals": to_value(&s.conditionals()),
                "state": to_value(state),
                "n_voters": n,
                "trials": trials,
                "seed": seed,
                "tie": to_value(&config.tie),
                "fixed_split": fixed_split,
            });
            let mut r = to_value(&result);
            r["standard_error"] = json!(result.standard_error());
            emit_json(cli, &envelope("simulate", inputs, r))
        }
        Command::Sweep { q_high, q_low, lambda } => {
            let ql = match q_low {
                Some(t) => parse_range(t)?,
                None => Range::new(0.5, *q_high, 0.01)?,
            };
            let spec = SweepSpec::new(*q_high, ql, parse_range(lambda)?)?;
            let rows = run_sweep(&spec)?;
            if cli.json {
                let inputs = to_value(&spec);
                emit_json(cli, &envelope("sweep", inputs, to_value(&rows)))
            } else {
                let mut buf = Vec::new();
                write_csv(&rows, &mut buf)?;
                emit(cli, &buf)
            }
        }
        Command::Oracle {
            profile,
            step,
            tie,
            full,
        } => {
            let p = profile.resolve()?;
            let verification = verify_lemma1(&p, *step)?;
            let tie = (*tie).into();
            let grid = if tie == condorcet_core::model::TieRule::FavorA {
                verification.grid.clone()
            } else {
                grid_search(&p, *step, tie)?
            };
            let report = classify(&p);
            let mut grid_json = json!({
                "resolution": grid.resolution,
                "tie": to_value(&grid.tie),
                "evaluated": grid.evaluated,
                "manipulable": grid.manipulable(),
                "optimal_count": grid.optimal_set.len(),
                "max_share": grid.max_share,
                "argmax": to_value(&grid.argmax),
                "bias_range": to_value(&grid.bias_range),
            });
            if *full {
                grid_json["optimal_set"] = to_value(&grid.optimal_set);
            }
            let result = json!({
                "grid": grid_json,
                "lemma1": {
                    "holds": verification.holds,
                    "grid_manipulable": verification.grid_manipulable,
                    "candidate_manipulable": verification.candidate_manipulable,
                    "discrepancies": to_value(&verification.discrepancies),
                },
                "classification": to_value(&report.classification),
            });
            let inputs = json!({ "profile": profile_json(&p), "step": step, "tie": to_value(&tie) });
            emit_json(cli, &envelope("oracle", inputs, result))?;
            if !verification.holds {
                return Err(internal("grid search disagrees with the candidate reduction"));
            }
            Ok(())
        }
        Command::Extensions(ext) => extensions(cli, ext),
    }
}

fn analyze(cli: &Cli, profile: &ProfileArgs, full: bool) -> CliResult<()> {
    let p = profile.resolve()?;
    let report = classify(&p);
    let candidate_json = |c: &condorcet_core::analysis::CandidateEvaluation| {
        let mut v = to_value(c);
        v["conditionals"] = to_value(&c.signal().conditionals());
        v
    };
    let witnesses: Vec<Value> = report.witnesses.iter().map(candidate_json).collect();
    let mut result = json!({
        "classification": to_value(&report.classification),
        "witnesses": witnesses,
        "bias_signs": to_value(&report.bias_signs),
        "uninformative_a_share_theta_b": report.uninformative_a_share_theta_b,
        "analytic": to_value(&report.analytic),
        "best_candidate": report.best_candidate().map(|c| c.id().name()),
        "thresholds": {
            "q_ni": q_ni(p.lambda()).ok(),
            "q_bar": q_bar(p.lambda()).ok(),
            "lambda_under": lambda_under(p.q_high()).ok(),
            "large_lambda": large_lambda_threshold(p.q_low(), p.q_high()),
        },
    });
    if report.classification == Classification::Manipulable {
        let d = bias_direction(&p)?;
        result["regimes"] = to_value(&d.regimes);
        result["regimes_consistent"] = json!(d.consistent);
    }
    if full {
        result["candidates"] = Value::Array(report.candidates.iter().map(candidate_json).collect());
    }
    let regimes_consistent = result.get("regimes_consistent").and_then(Value::as_bool);
    emit_json(cli, &envelope("analyze", json!({ "profile": profile_json(&p) }), result))?;
    if !report.consistent() {
        return Err(internal(format!(
            "enumeration gives {} but the threshold results give {:?}",
            report.classification.name(),
            report.analytic
        )));
    }
    if regimes_consistent == Some(false) {
        return Err(internal("bias regime tags contradict the witness biases"));
    }
    Ok(())
}

enum Population {
    Binary(PopulationProfile),
    Continuous(ContinuousProfile),
}

impl ExtensionProfile {
    fn resolve(&self) -> CliResult<(Population, Value)> {
        match &self.file {
            Some(path) => {
                let c = read_table(path)?;
                let echo = json!({ "file": path.display().to_string(), "density": to_value(&c) });
                Ok((Population::Continuous(c), echo))
            }
            None => {
                let p = self.profile.resolve()?;
                Ok((Population::Binary(p), json!({ "profile": profile_json(&p) })))
            }
        }
    }
}

fn extensions(cli: &Cli, ext: &Extension) -> CliResult<()> {
    let (name, inputs, result) = match ext {
        Extension::Continuous { file, step } => {
            let c = read_table(file)?;
            let r = continuous_classify(&c, *step)?;
            let inputs = json!({ "file": file.display().to_string(), "density": to_value(&c), "step": step });
            ("extensions continuous", inputs, to_value(&r))
        }
        Extension::Targeted(args) => {
            let (pop, inputs) = args.resolve()?;
            let r = match pop {
                Population::Binary(p) => targeted_classify(&p),
                Population::Continuous(c) => targeted_classify_continuous(&c),
            };
            ("extensions targeted", inputs, to_value(&r))
        }
        Extension::StronglyTargeted(args) => {
            let (pop, inputs) = args.resolve()?;
            let r = match pop {
                Population::Binary(p) => strongly_targeted_classify(&p),
                Population::Continuous(c) => strongly_targeted_classify_continuous(&c),
            };
            ("extensions strongly-targeted", inputs, to_value(&r))
        }
        Extension::Public { profile, step } => {
            let p = profile.resolve()?;
            let r = public_persuasion_compare(&p, *step)?;
            let inputs = json!({ "profile": profile_json(&p), "step": step });
            ("extensions public", inputs, to_value(&r))
        }
    };
    emit_json(cli, &envelope(name, inputs, result))
}
