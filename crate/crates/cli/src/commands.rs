use std::fs;
use std::io::Read;

use frechet_core::frechet::{
    check_membership_classical, check_membership_tropical, compute_bounds, random_feasible,
    sandwich_check_against,
};
use frechet_core::verify::{run_all, VerifyConfig};
use frechet_core::{
    ContingencyTable, Error, FrechetInstance, MassVector, NumericMode, Rational, Scalar,
};
use serde_json::{json, Value};

use crate::input::{parse_marginals, parse_matrix_pair, MarginalInput};
use crate::{CliError, Command, Format, RunConfig, Side};

/// What a command produced: the document for the output sink, diagnostics
/// for standard error, and the exit status.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub body: String,
    pub diagnostics: Vec<String>,
    pub exit_code: i32,
}

impl Outcome {
    fn new(body: String, ok: bool) -> Self {
        Self {
            body,
            diagnostics: Vec::new(),
            exit_code: if ok { 0 } else { 1 },
        }
    }
}

pub fn run(config: &RunConfig) -> Result<Outcome, CliError> {
    if config.command == Command::Verify {
        return cmd_verify(config);
    }
    let text = read_input(config)?;
    match config.mode {
        NumericMode::Exact { .. } => dispatch::<Rational>(config, &text),
        NumericMode::Float { .. } => dispatch::<f64>(config, &text),
    }
}

fn dispatch<T: Scalar>(config: &RunConfig, text: &str) -> Result<Outcome, CliError> {
    match config.command {
        Command::Bounds => cmd_bounds::<T>(config, text),
        Command::Check => cmd_check::<T>(config, text),
        Command::Sample => cmd_sample::<T>(config, text),
        Command::Residuate => cmd_residuate::<T>(config, text),
        Command::Verify => cmd_verify(config),
    }
}

fn read_input(config: &RunConfig) -> Result<String, CliError> {
    match &config.input {
        Some(path) => fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display()))),
        None => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| CliError::Input(format!("cannot read standard input: {e}")))?;
            Ok(buf)
        }
    }
}

fn mode_name(mode: &NumericMode) -> &'static str {
    if mode.is_exact() {
        "exact"
    } else {
        "float"
    }
}

fn build_instance<T: Scalar>(
    config: &RunConfig,
    input: &MarginalInput<T>,
) -> Result<FrechetInstance<T>, CliError> {
    let p = MassVector::new_allow_zero(input.p.clone()).map_err(|e| CliError::Input(format!("p: {e}")))?;
    let q = MassVector::new_allow_zero(input.q.clone()).map_err(|e| CliError::Input(format!("q: {e}")))?;
    Ok(FrechetInstance::new(p, q, config.mode.tolerance())?)
}

fn render(format: Format, doc: &Value) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(doc).expect("serializable");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut out = String::new();
            render_csv(doc, None, &mut out);
            out
        }
    }
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn is_matrix(v: &Value) -> bool {
    v.as_array()
        .is_some_and(|rows| !rows.is_empty() && rows.iter().all(|r| r.is_array()))
}

/// Flattens a JSON document into CSV: scalars become `key,value` lines,
/// vectors `key,v1,v2,…`, matrices a `key` header followed by their rows.
fn render_csv(doc: &Value, prefix: Option<&str>, out: &mut String) {
    let name = |key: &str| match prefix {
        Some(p) => format!("{p}.{key}"),
        None => key.to_string(),
    };
    match doc {
        Value::Object(map) => {
            for (key, v) in map {
                let key = name(key);
                if is_matrix(v) {
                    out.push_str(&key);
                    out.push('\n');
                    for row in v.as_array().expect("matrix") {
                        let cells: Vec<String> = row.as_array().expect("row").iter().map(csv_cell).collect();
                        out.push_str(&cells.join(","));
                        out.push('\n');
                    }
                } else if let Value::Array(items) = v {
                    if items.iter().any(Value::is_object) {
                        for (k, item) in items.iter().enumerate() {
                            render_csv(item, Some(&format!("{key}[{k}]")), out);
                        }
                    } else {
                        let cells: Vec<String> = items.iter().map(csv_cell).collect();
                        out.push_str(&format!("{key},{}\n", cells.join(",")));
                    }
                } else if v.is_object() {
                    render_csv(v, Some(&key), out);
                } else {
                    out.push_str(&format!("{key},{}\n", csv_cell(v)));
                }
            }
        }
        other => {
            out.push_str(&csv_cell(other));
            out.push('\n');
        }
    }
}

pub fn cmd_bounds<T: Scalar>(config: &RunConfig, text: &str) -> Result<Outcome, CliError> {
    let input = parse_marginals::<T>(text)?;
    let inst = build_instance(config, &input)?;
    let bounds = compute_bounds(&inst)?;
    let mut doc = bounds.to_json(&inst);
    doc["mode"] = json!(mode_name(&config.mode));
    Ok(Outcome::new(render(config.format, &doc), true))
}

pub fn cmd_check<T: Scalar>(config: &RunConfig, text: &str) -> Result<Outcome, CliError> {
    let input = parse_marginals::<T>(text)?;
    if input.tables.is_empty() {
        return Err(CliError::Input("no candidate table in input".into()));
    }
    let inst = build_instance(config, &input)?;
    let bounds = compute_bounds(&inst)?;

    let mut results = Vec::new();
    let mut diagnostics = Vec::new();
    let mut all_members = true;
    for (label, rows) in &input.tables {
        let table = ContingencyTable::from_rows(rows.clone())
            .map_err(|e| CliError::Input(format!("{label}: {e}")))?;
        let classical = check_membership_classical(&table, &inst)?;
        let tropical = check_membership_tropical(&table, &inst)?;
        if classical != tropical {
            diagnostics.push(format!(
                "{label}: classical ({classical}) and tropical ({tropical}) membership disagree"
            ));
        }
        let sandwich = if classical {
            Some(sandwich_check_against(&table, &inst, &bounds)?)
        } else {
            diagnostics.push(format!("{label}: not a member of the Fréchet class"));
            None
        };
        let member = classical && tropical && sandwich.is_some_and(|s| s.holds());
        all_members &= member;
        results.push(json!({
            "label": label,
            "classical_member": classical,
            "tropical_member": tropical,
            "sandwich": sandwich.map(|s| s.to_json()),
        }));
    }

    let doc = json!({
        "n": inst.n(),
        "m": inst.m(),
        "sigma": inst.sigma().to_json(),
        "mode": mode_name(&config.mode),
        "member": all_members,
        "results": results,
    });
    let mut outcome = Outcome::new(render(config.format, &doc), all_members);
    outcome.diagnostics = diagnostics;
    Ok(outcome)
}

pub const DEFAULT_SAMPLE_COUNT: usize = 10;

pub fn cmd_sample<T: Scalar>(config: &RunConfig, text: &str) -> Result<Outcome, CliError> {
    let input = parse_marginals::<T>(text)?;
    let inst = build_instance(config, &input)?;
    let bounds = compute_bounds(&inst)?;
    let seed = config.seed.unwrap_or(0);
    let count = config.count.unwrap_or(DEFAULT_SAMPLE_COUNT);

    let mut samples = Vec::with_capacity(count);
    let mut failures = 0usize;
    for k in 0..count {
        let table_seed = seed.wrapping_add(k as u64);
        let table = random_feasible(&inst, table_seed)?;
        let report = sandwich_check_against(&table, &inst, &bounds)?;
        if !report.holds() {
            failures += 1;
        }
        samples.push(json!({
            "index": k,
            "seed": table_seed,
            "table": table.to_json(),
            "sandwich": report.to_json(),
        }));
    }

    let doc = json!({
        "n": inst.n(),
        "m": inst.m(),
        "sigma": inst.sigma().to_json(),
        "mode": mode_name(&config.mode),
        "seed": seed,
        "count": count,
        "all_pass": failures == 0,
        "samples": samples,
    });
    let mut outcome = Outcome::new(render(config.format, &doc), failures == 0);
    if failures > 0 {
        outcome
            .diagnostics
            .push(format!("{failures} of {count} sampled tables violate the bounds"));
    }
    Ok(outcome)
}

pub fn cmd_verify(config: &RunConfig) -> Result<Outcome, CliError> {
    let defaults = VerifyConfig::default();
    let verify = VerifyConfig {
        iterations: config.count.unwrap_or(defaults.iterations),
        max_dim: config.max_dim.unwrap_or(defaults.max_dim).max(1),
        seed: config.seed.unwrap_or(defaults.seed),
        ..defaults
    };
    let report = run_all(&verify);

    let mut diagnostics = Vec::new();
    if verify.iterations == 0 {
        diagnostics.push("warning: zero iterations, every suite passes vacuously".to_string());
    }
    for suite in &report.suites {
        diagnostics.push(format!(
            "{}: {} passed, {} failed",
            suite.name, suite.passed, suite.failed
        ));
        if let Some(cx) = &suite.counterexample {
            diagnostics.push(format!("counterexample: {cx}"));
        }
    }
    let mut outcome = Outcome::new(render(config.format, &report.to_json()), report.all_passed());
    outcome.diagnostics = diagnostics;
    Ok(outcome)
}

pub fn cmd_residuate<T: Scalar>(config: &RunConfig, text: &str) -> Result<Outcome, CliError> {
    let (a, b) = parse_matrix_pair::<T>(text)?;
    let result = match config.side {
        Side::Left => a.ldiv(&b),
        Side::Right => a.rdiv(&b),
    }
    .map_err(|e: Error| CliError::Input(e.to_string()))?;
    let doc = json!({
        "side": match config.side { Side::Left => "left", Side::Right => "right" },
        "rows": result.rows(),
        "cols": result.cols(),
        "result": result.to_json(),
    });
    Ok(Outcome::new(render(config.format, &doc), true))
}
