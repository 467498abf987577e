//! Command-line front end: `fit`, `eval`, `bench`, `bounds`, `shatter`.
//!
//! Every command writes human-readable text followed by a single JSON line,
//! so scripts can take the last line of output.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::bench::run_bench;
use crate::bounds::{
    consistency_condition, envelope_bound, envelope_report, k_term, kterm_series, ulln_bound,
    vc_covering_bound, BoundInputs, Rate,
};
use crate::data::{load_csv, summarize, Dataset};
use crate::error::{Error, Result};
use crate::loss::{empirical_risk, extended_real, risk_report, LossKind, RiskReport};
use crate::regress::{fit, predict, LinearModel};
use crate::shatter::{compare_mape_mae, FiniteModelClass};

#[derive(Debug, Parser)]
#[command(
    name = "mape",
    version,
    about = "Linear regression under MSE, MAE and MAPE losses"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit a linear model and write it as JSON.
    Fit {
        csv: PathBuf,
        #[arg(long)]
        target: String,
        #[arg(long)]
        loss: LossKind,
        /// Output path for the model.
        #[arg(long, default_value = "model.json")]
        out: PathBuf,
    },
    /// Evaluate a saved model on a dataset.
    Eval {
        csv: PathBuf,
        #[arg(long)]
        target: String,
        #[arg(long)]
        model: PathBuf,
    },
    /// Fit all three losses and print the cross-loss risk matrix.
    Bench {
        csv: PathBuf,
        #[arg(long)]
        target: String,
    },
    /// Evaluate a learning-theory bound.
    Bounds(BoundsArgs),
    /// Compare VC dimensions under MAPE and threshold-rescaled MAE.
    Shatter { spec: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormulaArg {
    Envelope,
    Covering,
    Ulln,
    Kterm,
    Consistency,
}

#[derive(Debug, Clone, clap::Args)]
pub struct BoundsArgs {
    #[arg(long, value_enum)]
    pub formula: FormulaArg,
    #[arg(long, default_value = "mape")]
    pub loss: LossKind,
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub bg: Option<f64>,
    #[arg(long)]
    pub by: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long, default_value_t = 2)]
    pub vc: u32,
    #[arg(long, default_value_t = 1)]
    pub p: u32,
    /// Growth of the VC dimension, e.g. `n^(1/3)` (kterm series, consistency).
    #[arg(long)]
    pub v_rate: Option<Rate>,
    /// Growth of the model bound, e.g. `n^0.25` or `log(n)`.
    #[arg(long)]
    pub bg_rate: Option<Rate>,
    /// Largest sample size of the consistency grid.
    #[arg(long, default_value_t = 100_000_000)]
    pub n_max: u64,
    /// Largest exponent of the `n = 2^j` grid for kterm series.
    #[arg(long, default_value_t = 200)]
    pub j_max: u32,
}

impl ValueEnum for LossKind {
    fn value_variants<'a>() -> &'a [Self] {
        &LossKind::ALL
    }

    fn to_possible_value(&self) -> Option<clap::builder::PossibleValue> {
        Some(clap::builder::PossibleValue::new(self.name()))
    }
}

/// Raw empirical risks, always defined for finite data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainingRisks {
    #[serde(with = "extended_real")]
    pub mse: f64,
    #[serde(with = "extended_real")]
    pub mae: f64,
    #[serde(with = "extended_real")]
    pub mape: f64,
}

/// What `fit` and `eval` print as their final JSON line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub n_rows: usize,
    pub risks: TrainingRisks,
    /// Normalized report; absent when the target has zero spread or median.
    pub report: Option<RiskReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

pub fn evaluate(model: &LinearModel, ds: &Dataset) -> Result<Evaluation> {
    let predictions = predict(model, ds.features())?;
    let targets = ds.target().as_slice();
    let risks = TrainingRisks {
        mse: empirical_risk(LossKind::Mse, &predictions, targets)?,
        mae: empirical_risk(LossKind::Mae, &predictions, targets)?,
        mape: empirical_risk(LossKind::Mape, &predictions, targets)?,
    };
    let (report, note) = match summarize(ds).and_then(|s| risk_report(&predictions, &s, targets)) {
        Ok(r) => (Some(r), None),
        Err(e @ (Error::TooFewRows { .. } | Error::NormalizationUndefined(_))) => {
            (None, Some(e.to_string()))
        }
        Err(e) => return Err(e),
    };
    Ok(Evaluation {
        n_rows: ds.n_rows(),
        risks,
        report,
        note,
    })
}

fn print_evaluation(out: &mut dyn Write, ev: &Evaluation) -> Result<()> {
    let r = &ev.risks;
    writeln!(
        out,
        "risks (N = {}): mse = {:.6}, mae = {:.6}, mape = {:.6}",
        ev.n_rows, r.mse, r.mae, r.mape
    )
    .map_err(stdout_err)?;
    match (&ev.report, &ev.note) {
        (Some(rep), _) => writeln!(
            out,
            "normalized: nrmse = {:.3}, nmae = {:.3}, mape = {:.3}",
            rep.nrmse, rep.nmae, rep.mape
        ),
        (None, Some(note)) => writeln!(out, "normalized report unavailable: {note}"),
        (None, None) => Ok(()),
    }
    .map_err(stdout_err)?;
    writeln!(out, "{}", serde_json::to_string(ev)?).map_err(stdout_err)
}

fn stdout_err(source: std::io::Error) -> Error {
    Error::Io {
        path: PathBuf::from("<stdout>"),
        source,
    }
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    std::fs::write(path, text + "\n").map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn cmd_fit(
    csv: &Path,
    target: &str,
    loss: LossKind,
    model_out: &Path,
    out: &mut dyn Write,
) -> Result<Evaluation> {
    let ds = load_csv(csv, target)?;
    let model = fit(&ds, loss)?;
    write_json(model_out, &model)?;
    writeln!(
        out,
        "trained on {loss}: intercept = {}, coefficients = {:?}",
        model.intercept, model.coefficients
    )
    .map_err(stdout_err)?;
    writeln!(out, "model written to {}", model_out.display()).map_err(stdout_err)?;
    let ev = evaluate(&model, &ds)?;
    print_evaluation(out, &ev)?;
    Ok(ev)
}

pub fn cmd_eval(
    csv: &Path,
    target: &str,
    model_path: &Path,
    out: &mut dyn Write,
) -> Result<Evaluation> {
    let ds = load_csv(csv, target)?;
    let text = std::fs::read_to_string(model_path).map_err(|source| Error::Io {
        path: model_path.to_path_buf(),
        source,
    })?;
    let model: LinearModel = serde_json::from_str(&text)?;
    let ev = evaluate(&model, &ds)?;
    print_evaluation(out, &ev)?;
    Ok(ev)
}

pub fn cmd_bench(
    csv: &Path,
    target: &str,
    out: &mut dyn Write,
) -> Result<crate::bench::BenchResult> {
    let ds = load_csv(csv, target)?;
    let result = run_bench(&ds)?;
    write!(out, "{}", result.render_table()).map_err(stdout_err)?;
    writeln!(out, "(* marks the column minimum)").map_err(stdout_err)?;
    writeln!(out, "{}", serde_json::to_string(&result)?).map_err(stdout_err)?;
    Ok(result)
}

fn need<T>(value: Option<T>, flag: &str) -> Result<T> {
    value.ok_or_else(|| Error::InvalidBoundInput(format!("--{flag} is required for this formula")))
}

pub fn cmd_bounds(args: &BoundsArgs, out: &mut dyn Write) -> Result<serde_json::Value> {
    let inputs = || -> Result<BoundInputs> {
        Ok(BoundInputs {
            n: args.n.unwrap_or(1),
            epsilon: args.epsilon.unwrap_or(f64::NAN),
            b_g: need(args.bg, "bg")?,
            b_y: args.by,
            lambda: args.lambda,
            vc: args.vc,
            p: args.p,
        })
    };
    let value = match args.formula {
        FormulaArg::Envelope => serde_json::to_value(envelope_report(&inputs()?, args.loss)?)?,
        FormulaArg::Covering => {
            need(args.epsilon, "epsilon")?;
            serde_json::to_value(vc_covering_bound(&inputs()?, args.loss)?)?
        }
        FormulaArg::Ulln => {
            need(args.epsilon, "epsilon")?;
            need(args.n, "n")?;
            serde_json::to_value(ulln_bound(&inputs()?, args.loss)?)?
        }
        FormulaArg::Kterm => {
            let lambda = need(args.lambda, "lambda")?;
            let epsilon = need(args.epsilon, "epsilon")?;
            match (&args.v_rate, &args.bg_rate) {
                (Some(v), Some(bg)) => {
                    serde_json::to_value(kterm_series(v, bg, lambda, epsilon, args.j_max)?)?
                }
                (None, None) => {
                    let n = need(args.n, "n")?;
                    let b_g = need(args.bg, "bg")?;
                    let envelope = envelope_bound(LossKind::Mape, b_g, None, Some(lambda))?;
                    let k = k_term(n, epsilon, args.vc as f64, b_g, lambda)?;
                    let mut v = serde_json::to_value(k)?;
                    v["formula"] = "kterm".into();
                    v["n"] = n.into();
                    v["epsilon"] = epsilon.into();
                    v["vc"] = args.vc.into();
                    v["b_g"] = b_g.into();
                    v["lambda"] = lambda.into();
                    v["envelope"] = envelope.into();
                    v
                }
                _ => {
                    return Err(Error::InvalidBoundInput(
                        "--v-rate and --bg-rate must be given together".into(),
                    ))
                }
            }
        }
        FormulaArg::Consistency => {
            let v = need(args.v_rate, "v-rate")?;
            let bg = need(args.bg_rate, "bg-rate")?;
            let report = consistency_condition(|n| v.eval(n), |n| bg.eval(n), args.n_max)?;
            let mut value = serde_json::to_value(report)?;
            value["v_rate"] = v.to_string().into();
            value["bg_rate"] = bg.to_string().into();
            value
        }
    };
    writeln!(out, "{}", serde_json::to_string_pretty(&value)?).map_err(stdout_err)?;
    Ok(value)
}

pub fn cmd_shatter(spec: &Path, out: &mut dyn Write) -> Result<crate::shatter::ShatterComparison> {
    let cls = FiniteModelClass::from_json_file(spec)?;
    let cmp = compare_mape_mae(&cls)?;
    writeln!(
        out,
        "models = {}, probes = {}",
        cls.models().len(),
        cls.probes().len()
    )
    .map_err(stdout_err)?;
    writeln!(out, "VC dimension under MAPE: {}", cmp.mape).map_err(stdout_err)?;
    writeln!(
        out,
        "VC dimension under MAE (thresholds scaled by |y|): {}",
        cmp.mae_scaled
    )
    .map_err(stdout_err)?;
    writeln!(out, "{}", if cmp.pass { "PASS" } else { "FAIL" }).map_err(stdout_err)?;
    writeln!(out, "{}", serde_json::to_string(&cmp)?).map_err(stdout_err)?;
    Ok(cmp)
}

/// Runs a parsed command line; the returned error carries the exit code.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Fit {
            csv,
            target,
            loss,
            out: model_out,
        } => cmd_fit(&csv, &target, loss, &model_out, out).map(drop),
        Command::Eval { csv, target, model } => cmd_eval(&csv, &target, &model, out).map(drop),
        Command::Bench { csv, target } => cmd_bench(&csv, &target, out).map(drop),
        Command::Bounds(args) => cmd_bounds(&args, out).map(drop),
        Command::Shatter { spec } => cmd_shatter(&spec, out).map(drop),
    }
}
