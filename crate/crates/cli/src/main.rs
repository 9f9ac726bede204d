//! descent-lab: run the regression experiment cases, sweep singular
//! spectra, and check interlacing on randomized matrices.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use chrono::{SecondsFormat, Utc};
use clap::{Args, Parser, Subcommand};

use descent_lab::estimators::EstimatorKind;
use descent_lab::harness::{
    double_descent_profile, run_case, AlphaMode, CaseId, CaseResult, DescentVerdict,
    ExperimentConfig, FamilyLabel,
};
use descent_lab::model::StructureFamily;
use descent_lab::rng::{random_complex_matrix, random_complex_vector, substream, RngCore, TRIAL_STREAM};
use descent_lab::spectrum::{sweep_spectrum, verify_interlacing, SpectrumSweep};

use descent_lab_cli::config::parse_config;
use descent_lab_cli::manifest::RunManifest;
use descent_lab_cli::report::{format_csv, rows_from_case, rows_from_sweep};
use descent_lab_cli::svg::{render_log_chart, Series};

const SEED_ENV: &str = "DESCENT_LAB_SEED";

#[derive(Parser)]
#[command(
    name = "descent-lab",
    version,
    about = "Minimum-norm / ridge regression experiments over complex exponential bases"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment case (A-D or a config file) and emit CSV + SVG.
    Run(RunArgs),
    /// Sweep 1/sigma_min of a structure family across model orders.
    Spectrum(SpectrumArgs),
    /// Randomized interlacing check for column appends.
    Interlace(InterlaceArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Predefined case id: A, B, C or D.
    #[arg(long, conflicts_with = "config")]
    case: Option<String>,
    /// Key=value config file (see README for the format).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Base seed; falls back to the config file, then $DESCENT_LAB_SEED, then 0.
    #[arg(long)]
    seed: Option<u64>,
    /// Number of Monte-Carlo replicates.
    #[arg(long)]
    replicates: Option<usize>,
    /// Switch the estimator to ridge regression with this penalty.
    #[arg(long)]
    lambda: Option<f64>,
    /// Test-grid offset.
    #[arg(long)]
    epsilon: Option<f64>,
    /// fixed_per_case or resample_per_replicate.
    #[arg(long)]
    alpha_mode: Option<String>,
    /// Output directory.
    #[arg(long, default_value = "results")]
    out: PathBuf,
}

#[derive(Args)]
struct SpectrumArgs {
    /// Structure family: linear or optimal.
    #[arg(long)]
    family: String,
    /// Number of training samples (and the optimal-ordering denominator).
    #[arg(long = "N", default_value_t = 10)]
    n_train: usize,
    /// Largest model order.
    #[arg(long = "nmax", default_value_t = 30)]
    n_max: usize,
    /// Output directory.
    #[arg(long, default_value = "results")]
    out: PathBuf,
}

#[derive(Args)]
struct InterlaceArgs {
    /// Number of randomized matrices to check.
    #[arg(long, default_value_t = 500)]
    trials: usize,
    /// Base seed; falls back to $DESCENT_LAB_SEED, then 0.
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    match dispatch() {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch() -> anyhow::Result<()> {
    match Cli::parse().command {
        Command::Run(args) => cmd_run(args),
        Command::Spectrum(args) => cmd_spectrum(args),
        Command::Interlace(args) => cmd_interlace(args),
    }
}

fn env_seed() -> anyhow::Result<Option<u64>> {
    match std::env::var(SEED_ENV) {
        Ok(value) => {
            let seed = value
                .parse()
                .with_context(|| format!("bad {SEED_ENV} value '{value}'"))?;
            Ok(Some(seed))
        }
        Err(_) => Ok(None),
    }
}

fn timestamp() -> String {
    Utc::now().to_rfc3339_opts(SecondsFormat::Secs, true)
}

fn write_file(dir: &Path, name: &str, contents: &str) -> anyhow::Result<()> {
    let path = dir.join(name);
    fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))
}

/// File-name-safe version of a case label.
fn sanitize(label: &str) -> String {
    label
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect()
}

fn cmd_run(args: RunArgs) -> anyhow::Result<()> {
    let mut config: ExperimentConfig<f64> = match (&args.case, &args.config) {
        (Some(case), None) => {
            let case_id = CaseId::parse(case);
            ExperimentConfig::for_case(case_id, 0)
                .with_context(|| format!("case '{case}' is not one of A, B, C, D"))?
        }
        (None, Some(path)) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading config {}", path.display()))?;
            parse_config(&text)?
        }
        (None, None) => bail!("one of --case or --config is required"),
        (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
    };

    // seed resolution: flag, then config file, then environment, then 0
    let file_sets_seed = args.config.is_some(); // parse_config applied any file value already
    if let Some(seed) = args.seed {
        config.base_seed = seed;
    } else if !file_sets_seed {
        if let Some(seed) = env_seed()? {
            config.base_seed = seed;
        }
    }
    if let Some(replicates) = args.replicates {
        config.replicates = replicates;
    }
    if let Some(lambda) = args.lambda {
        config.estimator = EstimatorKind::Ridge { lambda };
    }
    if let Some(epsilon) = args.epsilon {
        config.epsilon = epsilon;
    }
    if let Some(mode) = &args.alpha_mode {
        config.alpha_mode = AlphaMode::parse(mode)?;
    }
    config.validate()?;

    let result = run_case(&config)?;

    fs::create_dir_all(&args.out)
        .with_context(|| format!("creating {}", args.out.display()))?;
    let label = sanitize(config.case_id.label());
    let csv_name = format!("case{label}.csv");
    let linear_svg = format!("case{label}_linear.svg");
    let optimal_svg = format!("case{label}_optimal.svg");

    write_file(&args.out, &csv_name, &format_csv(&rows_from_case(&result)))?;
    write_file(&args.out, &linear_svg, &case_chart(&result, FamilyLabel::Linear))?;
    write_file(&args.out, &optimal_svg, &case_chart(&result, FamilyLabel::Optimal))?;

    let manifest = RunManifest {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        timestamp: timestamp(),
        command: "run".to_string(),
        base_seed: Some(config.base_seed),
        parameters: vec![],
        outputs: vec![csv_name.clone(), linear_svg, optimal_svg],
        config: Some(config.clone()),
    };
    write_file(&args.out, "manifest.txt", &manifest.render())?;

    println!(
        "case {} ({} replicates, seed {}): wrote {} and companions to {}",
        config.case_id.label(),
        config.replicates,
        config.base_seed,
        csv_name,
        args.out.display()
    );
    for family in [FamilyLabel::Linear, FamilyLabel::Optimal] {
        match double_descent_profile(&result, family) {
            DescentVerdict::Peak {
                order,
                peak_nmse,
                descends,
                ..
            } => println!(
                "  {} family: noisy-NMSE peak at order {order} ({peak_nmse:.4e}), descends again: {descends}",
                family.as_str()
            ),
            DescentVerdict::Flat => {
                println!("  {} family: flat noisy-NMSE curve", family.as_str())
            }
        }
        let failures = &result.family(family).failures;
        for failure in failures {
            println!(
                "  {} family: order {} failed: {}",
                family.as_str(),
                failure.order,
                failure.message
            );
        }
    }
    Ok(())
}

fn case_chart(result: &CaseResult<f64>, family: FamilyLabel) -> String {
    let records = &result.family(family).records;
    let noisy = Series {
        label: "noisy training data".into(),
        color: "#1f77b4",
        points: records
            .iter()
            .map(|r| (r.order as f64, r.nmse_noisy_mean))
            .collect(),
    };
    let noisefree = Series {
        label: "noise-free training data".into(),
        color: "#ff7f0e",
        points: records
            .iter()
            .map(|r| (r.order as f64, r.nmse_noisefree_mean))
            .collect(),
    };
    let title = format!(
        "Case {}: {} ordering",
        result.config.case_id.label(),
        family.as_str()
    );
    render_log_chart(&title, "model order", "NMSE", &[noisy, noisefree])
}

fn spectrum_chart(sweep: &SpectrumSweep<f64>, family: &str) -> String {
    let series = Series {
        label: format!("{family} ordering"),
        color: "#2ca02c",
        points: sweep
            .orders()
            .iter()
            .zip(sweep.inv_sigma_min())
            .map(|(o, v)| (*o as f64, *v))
            .collect(),
    };
    render_log_chart(
        &format!("Inverse smallest singular value: {family} ordering"),
        "model order",
        "1/sigma_min",
        &[series],
    )
}

fn cmd_spectrum(args: SpectrumArgs) -> anyhow::Result<()> {
    let family = match args.family.as_str() {
        "linear" => StructureFamily::Linear { n_max: args.n_max },
        "optimal" => StructureFamily::Optimal {
            n_train: args.n_train,
            n_max: args.n_max,
        },
        other => bail!("unknown family '{other}' (expected linear or optimal)"),
    };
    let inputs: Vec<f64> = (0..args.n_train).map(|t| t as f64).collect();
    let sweep = sweep_spectrum(&family, &inputs, args.n_max, None)?;

    fs::create_dir_all(&args.out)
        .with_context(|| format!("creating {}", args.out.display()))?;
    let csv_name = format!("spectrum_{}.csv", args.family);
    let svg_name = format!("spectrum_{}.svg", args.family);
    write_file(&args.out, &csv_name, &format_csv(&rows_from_sweep(&sweep, &args.family)))?;
    write_file(&args.out, &svg_name, &spectrum_chart(&sweep, &args.family))?;

    let manifest = RunManifest {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        timestamp: timestamp(),
        command: "spectrum".to_string(),
        base_seed: None,
        parameters: vec![
            ("family".to_string(), args.family.clone()),
            ("n_train".to_string(), args.n_train.to_string()),
            ("n_max".to_string(), args.n_max.to_string()),
        ],
        outputs: vec![csv_name.clone(), svg_name],
        config: None,
    };
    write_file(&args.out, "manifest.txt", &manifest.render())?;

    println!(
        "spectrum sweep ({} family, N={}, n_max={}): peak 1/sigma_min at order {}; wrote {} to {}",
        args.family,
        args.n_train,
        args.n_max,
        sweep.peak_order(),
        csv_name,
        args.out.display()
    );
    Ok(())
}

fn cmd_interlace(args: InterlaceArgs) -> anyhow::Result<()> {
    if args.trials == 0 {
        bail!("--trials must be at least 1");
    }
    let seed = match args.seed {
        Some(seed) => seed,
        None => env_seed()?.unwrap_or(0),
    };

    let mut violations = 0usize;
    let mut tall = 0usize;
    for trial in 0..args.trials {
        let mut rng = substream(seed, &[TRIAL_STREAM, trial as u64]);
        let rows = 1 + (rng.next_u64() % 12) as usize;
        let cols = 1 + (rng.next_u64() % 14) as usize;
        if cols < rows {
            tall += 1;
        }
        let phi = random_complex_matrix::<f64>(rows, cols, &mut rng);
        let column = random_complex_vector::<f64>(rows, &mut rng);
        let verdict = verify_interlacing(&phi, &column)?;
        if !verdict.holds() {
            violations += 1;
            for violation in verdict.violations() {
                println!(
                    "trial {trial} ({rows}x{cols}): chain position {} broke: {} < {} (slack {})",
                    violation.position,
                    violation.upper,
                    violation.lower,
                    verdict.slack()
                );
            }
        }
    }

    println!(
        "interlace: {} trials (seed {seed}, {} underparametrized / {} overparametrized-or-square), {} violation(s)",
        args.trials,
        tall,
        args.trials - tall,
        violations
    );
    if violations > 0 {
        bail!("{violations} interlacing violation(s) found");
    }
    Ok(())
}
