use std::fmt::Display;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cfgm::dataio::{self, NamedSeries, ReportDocument, ReportFormat, Table};
use cfgm::evaluation::{
    alpha_distribution, rolling_multistep, tscv_run, Aggregation, ModelSpec, RollingOptions,
    TscvOptions,
};
use cfgm::greymodel::{fit, AccumulationKind, GreyModelFit};
use cfgm::order_search::{brute_force_alpha, SearchSpec};

mod example;

const EXIT_CODES: &str = "\
Exit codes:
  0  success
  2  usage error (unknown flag, bad flag value or combination)
  3  input error (unreadable file, malformed CSV, missing series)
  4  model error (fit, search or evaluation failed)
  5  output error (cannot write results)";

#[derive(Parser)]
#[command(
    name = "cfgm",
    version,
    about = "Fractional-order grey model forecasting",
    after_help = EXIT_CODES
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit a grey model and print its order, parameters and fitted MAPE.
    Fit {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        model: ModelArgs,
        /// Write the actual and fitted series as CSV.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Forecast past the end of a series.
    Predict {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        model: ModelArgs,
        /// Number of steps to forecast.
        #[arg(long, default_value_t = 3)]
        horizon: usize,
        /// Forecast CSV destination (stdout when omitted).
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Brute-force order search; prints α* and the MAPE-vs-α trace.
    Search {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value = "conformable")]
        kind: AccumulationKind,
        #[command(flatten)]
        grid: GridArgs,
        /// Trace CSV destination (stdout when omitted).
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Rolling-origin 1..max-step prediction test of CFGM, FGM and AR.
    Rolling {
        #[command(flatten)]
        input: InputArgs,
        /// Training window length.
        #[arg(long, default_value_t = 5)]
        window: usize,
        /// Longest forecast step evaluated.
        #[arg(long, default_value_t = 3)]
        max_step: usize,
        /// Lag order of the AR baseline (capped at window - 2).
        #[arg(long, default_value_t = 5)]
        ar_order: usize,
        #[command(flatten)]
        report: ReportArgs,
    },
    /// Time-series cross-validation of CFGM and FGM over every subcase.
    Tscv {
        #[command(flatten)]
        input: InputArgs,
        /// Shortest training length.
        #[arg(long, default_value_t = 4)]
        min_train: usize,
        #[command(flatten)]
        report: ReportArgs,
    },
    /// Walk through the five-point worked example, printing every
    /// intermediate value.
    Example,
}

#[derive(Args)]
struct InputArgs {
    /// CSV file, or `bundled:ng` for the built-in natural gas dataset.
    #[arg(long)]
    input: String,
    /// Series (column) to use when the input holds several.
    #[arg(long)]
    series: Option<String>,
}

#[derive(Args)]
struct GridArgs {
    /// Lowest order searched [default: 0 conformable, -2 wu].
    #[arg(long, allow_negative_numbers = true)]
    lo: Option<f64>,
    /// Highest order searched [default: 2].
    #[arg(long, allow_negative_numbers = true)]
    hi: Option<f64>,
    /// Grid spacing [default: 0.01].
    #[arg(long)]
    step: Option<f64>,
}

#[derive(Args)]
struct ModelArgs {
    /// Accumulation: conformable (CFGM) or wu (FGM).
    #[arg(long, default_value = "conformable")]
    kind: AccumulationKind,
    /// Fixed fractional order, |α| ≤ 4.
    #[arg(long, conflicts_with = "auto", allow_negative_numbers = true, value_parser = parse_alpha)]
    alpha: Option<f64>,
    /// Select the order by brute-force search (the default).
    #[arg(long)]
    auto: bool,
    #[command(flatten)]
    grid: GridArgs,
}

#[derive(Args)]
struct ReportArgs {
    /// Report destination: a file for json, a directory for csv. Summary
    /// tables go to stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    format: ReportFormat,
    /// How errors are combined across origins/subcases: pooled or mean.
    #[arg(long, default_value = "pooled")]
    aggregation: Aggregation,
}

fn parse_alpha(s: &str) -> Result<f64, String> {
    let alpha: f64 = s.parse().map_err(|_| format!("'{s}' is not a number"))?;
    if !alpha.is_finite() || alpha.abs() > 4.0 {
        return Err(format!("order must satisfy |α| ≤ 4, got {s}"));
    }
    Ok(alpha)
}

struct Failure {
    code: u8,
    message: String,
}

fn input_err(e: impl Display) -> Failure {
    Failure {
        code: 3,
        message: e.to_string(),
    }
}

fn model_err(e: impl Display) -> Failure {
    Failure {
        code: 4,
        message: e.to_string(),
    }
}

fn output_err(e: impl Display) -> Failure {
    Failure {
        code: 5,
        message: e.to_string(),
    }
}

type CliResult<T = ()> = Result<T, Failure>;

fn load(input: &InputArgs) -> CliResult<Vec<NamedSeries>> {
    let all = if input.input == "bundled:ng" {
        dataio::bundled_ng_dataset()
    } else {
        dataio::read_csv(&input.input).map_err(|e| match e {
            cfgm::Error::Io { .. } => input_err(e),
            e => input_err(format!("{}: {e}", input.input)),
        })?
    };
    match &input.series {
        None => Ok(all),
        Some(name) => {
            let found: Vec<NamedSeries> = all.iter().filter(|s| &s.name == name).cloned().collect();
            if found.is_empty() {
                let names: Vec<&str> = all.iter().map(|s| s.name.as_str()).collect();
                return Err(input_err(format!(
                    "{}: no series named '{name}' (available: {})",
                    input.input,
                    names.join(", ")
                )));
            }
            Ok(found)
        }
    }
}

fn load_one(input: &InputArgs) -> CliResult<NamedSeries> {
    let mut all = load(input)?;
    if all.len() != 1 {
        return Err(input_err(format!(
            "{}: holds {} series; choose one with --series",
            input.input,
            all.len()
        )));
    }
    Ok(all.remove(0))
}

fn search_spec(kind: AccumulationKind, grid: &GridArgs) -> CliResult<SearchSpec> {
    let d = SearchSpec::default_for(kind);
    SearchSpec::new(
        grid.lo.unwrap_or(d.lo),
        grid.hi.unwrap_or(d.hi),
        grid.step.unwrap_or(d.step),
        kind,
    )
    .map_err(|e| Failure {
        code: 2,
        message: e.to_string(),
    })
}

/// Fits with the fixed order, or with the searched one.
fn fit_model(series: &NamedSeries, model: &ModelArgs) -> CliResult<GreyModelFit> {
    let alpha = match model.alpha {
        Some(alpha) => alpha,
        None => {
            let spec = search_spec(model.kind, &model.grid)?;
            brute_force_alpha(&series.values, &spec)
                .map_err(|e| model_err(format!("series '{}': {e}", series.name)))?
                .alpha_star
        }
    };
    fit(&series.values, alpha, model.kind)
        .map_err(|e| model_err(format!("series '{}' at α = {alpha}: {e}", series.name)))
}

fn write_text(path: Option<&Path>, text: &str) -> CliResult {
    match path {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                fs::create_dir_all(parent)
                    .map_err(|e| output_err(format!("{}: {e}", parent.display())))?;
            }
            fs::write(path, text).map_err(|e| output_err(format!("{}: {e}", path.display())))
        }
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| output_err(format!("stdout: {e}"))),
    }
}

fn label_cell(series: &NamedSeries, i: usize) -> dataio::Cell {
    series.label(i).map(str::to_string).into()
}

fn cmd_fit(input: &InputArgs, model: &ModelArgs, output: Option<&Path>) -> CliResult {
    let series = load_one(input)?;
    let f = fit_model(&series, model)?;
    let mape = f.fitted_mape(&series.values).map_err(model_err)?;
    println!("model = {}", f.kind.model_name());
    println!("alpha = {}", f.alpha);
    println!("a = {}", f.a);
    println!("b = {}", f.b);
    println!("fitted MAPE = {mape}");
    if let Some(path) = output {
        let mut table = Table::new("fitted", &["k", "label", "actual", "fitted"]);
        for (i, (x, y)) in series.values.iter().zip(&f.fitted_restored).enumerate() {
            table.push(vec![
                (i + 1).into(),
                label_cell(&series, i),
                (*x).into(),
                (*y).into(),
            ]);
        }
        write_text(Some(path), &table.to_csv())?;
    }
    Ok(())
}

fn cmd_predict(
    input: &InputArgs,
    model: &ModelArgs,
    horizon: usize,
    output: Option<&Path>,
) -> CliResult {
    let series = load_one(input)?;
    let f = fit_model(&series, model)?;
    let mut table = Table::new("forecast", &["step", "k", "forecast"]);
    let n = series.values.len();
    for (s, v) in f.predict(horizon).into_iter().enumerate() {
        table.push(vec![(s + 1).into(), (n + s + 1).into(), v.into()]);
    }
    write_text(output, &table.to_csv())
}

fn cmd_search(
    input: &InputArgs,
    kind: AccumulationKind,
    grid: &GridArgs,
    output: Option<&Path>,
) -> CliResult {
    let series = load_one(input)?;
    let spec = search_spec(kind, grid)?;
    let result = brute_force_alpha(&series.values, &spec)
        .map_err(|e| model_err(format!("series '{}': {e}", series.name)))?;
    println!("alpha* = {}", result.alpha_star);
    println!("MAPE = {}", result.mape_min);
    if result.failures() > 0 {
        eprintln!(
            "note: {} grid point(s) failed and are marked in the trace",
            result.failures()
        );
    }
    let mut doc = ReportDocument::new();
    doc.add_search_trace("trace", &result);
    write_text(output, &doc.tables[0].to_csv())
}

fn emit_report(doc: &ReportDocument, args: &ReportArgs) -> CliResult {
    match &args.output {
        Some(path) => doc
            .write(args.format, path)
            .map_err(|e| output_err(format!("{}: {e}", path.display()))),
        None => match args.format {
            ReportFormat::Json => {
                let mut text = doc.to_json().map_err(output_err)?;
                text.push('\n');
                write_text(None, &text)
            }
            ReportFormat::Csv => {
                let mut text = String::new();
                for t in doc.tables.iter().filter(|t| t.name.ends_with("summary")) {
                    text.push_str(&format!("# {}\n{}\n", t.name, t.to_csv()));
                }
                write_text(None, &text)
            }
        },
    }
}

fn cmd_rolling(
    input: &InputArgs,
    opts: RollingOptions,
    ar_order: usize,
    args: &ReportArgs,
) -> CliResult {
    let all = load(input)?;
    let models = [ModelSpec::cfgm(), ModelSpec::fgm(), ModelSpec::ar(ar_order)];
    let mut doc = ReportDocument::new()
        .with_meta("command", "rolling")
        .with_meta("input", &input.input)
        .with_meta("window", opts.window)
        .with_meta("max_step", opts.max_step)
        .with_meta("ar_order", ar_order)
        .with_meta(
            "aggregation",
            format!("{:?}", opts.aggregation).to_lowercase(),
        );
    for series in &all {
        let report = rolling_multistep(&series.values, &models, &opts)
            .map_err(|e| model_err(format!("series '{}': {e}", series.name)))?;
        for skip in &report.skipped {
            eprintln!(
                "skipped: {} {} {}: {}",
                series.name, skip.model, skip.location, skip.reason
            );
        }
        doc.add_rolling(&series.name, &report);
    }
    emit_report(&doc, args)
}

fn cmd_tscv(input: &InputArgs, opts: TscvOptions, args: &ReportArgs) -> CliResult {
    let all = load(input)?;
    let models = [ModelSpec::cfgm(), ModelSpec::fgm()];
    let mut doc = ReportDocument::new()
        .with_meta("command", "tscv")
        .with_meta("input", &input.input)
        .with_meta("min_train", opts.min_train)
        .with_meta(
            "aggregation",
            format!("{:?}", opts.aggregation).to_lowercase(),
        );
    let mut reports = Vec::new();
    for series in &all {
        let report = tscv_run(&series.values, &models, &opts)
            .map_err(|e| model_err(format!("series '{}': {e}", series.name)))?;
        for skip in &report.skipped {
            eprintln!(
                "skipped: {} {} {}: {}",
                series.name, skip.model, skip.location, skip.reason
            );
        }
        doc.add_tscv(&series.name, &report);
        reports.push(report);
    }
    for model in ["CFGM", "FGM"] {
        if let Ok(hist) = alpha_distribution(&reports, model) {
            doc.add_alpha_histogram("alpha_distribution", model, &hist);
        }
    }
    emit_report(&doc, args)
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Fit {
            input,
            model,
            output,
        } => cmd_fit(&input, &model, output.as_deref()),
        Command::Predict {
            input,
            model,
            horizon,
            output,
        } => cmd_predict(&input, &model, horizon, output.as_deref()),
        Command::Search {
            input,
            kind,
            grid,
            output,
        } => cmd_search(&input, kind, &grid, output.as_deref()),
        Command::Rolling {
            input,
            window,
            max_step,
            ar_order,
            report,
        } => {
            let opts = RollingOptions {
                window,
                max_step,
                aggregation: report.aggregation,
            };
            cmd_rolling(&input, opts, ar_order, &report)
        }
        Command::Tscv {
            input,
            min_train,
            report,
        } => {
            let opts = TscvOptions {
                min_train,
                aggregation: report.aggregation,
            };
            cmd_tscv(&input, opts, &report)
        }
        Command::Example => example::print().map_err(model_err),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
