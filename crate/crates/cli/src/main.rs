use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use orlicz_radius::bounds::{evaluate_bound, BoundId, Instance, Variant, DEFAULT_TOL};
use orlicz_radius::harness::{
    evaluate_fixtures, parse_phi, run_campaign, tightness_compare, violation_table, CampaignConfig, ExampleFixtures,
};
use orlicz_radius::state::{numerical_range_boundary, DEFAULT_RADIUS_TOL};
use orlicz_radius::{ComplexMatrix, Error, Weight};

const EXIT_OK: u8 = 0;
const EXIT_INPUT: u8 = 2;
const EXIT_VIOLATION: u8 = 3;

#[derive(Parser)]
#[command(name = "orlicz-radius", version, about = "Numerical radius bounds via Orlicz functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one bound on matrices read from JSON files
    Eval {
        #[arg(long)]
        bound: String,
        #[command(flatten)]
        instance: InstanceArgs,
    },
    /// Rank the right-hand sides of several bounds on one instance
    Compare {
        /// Comma-separated bound identifiers
        #[arg(long, value_delimiter = ',', required = true)]
        bounds: Vec<String>,
        #[command(flatten)]
        instance: InstanceArgs,
    },
    /// Run a randomized verification campaign
    Verify {
        /// JSON campaign configuration; defaults apply to omitted fields
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Reproduce the two worked examples
    Repro {
        /// JSON file overriding the example inputs
        #[arg(long)]
        fixtures: Option<PathBuf>,
    },
    /// Print the numerical-range boundary as CSV rows (theta, re, im)
    Range {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        weight: Option<PathBuf>,
        #[arg(long, default_value_t = 360)]
        points: usize,
    },
}

#[derive(Args)]
struct InstanceArgs {
    /// Role assignment `role=file.json`, repeatable
    #[arg(long = "in", value_name = "ROLE=FILE")]
    inputs: Vec<String>,
    /// Weight matrix file, or `identity`
    #[arg(long, default_value = "identity")]
    weight: String,
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    r: f64,
    #[arg(long, default_value_t = 1.0)]
    s: f64,
    #[arg(long, default_value_t = 2)]
    n: u32,
    /// Comma-separated probability vector (sumpi)
    #[arg(long, value_delimiter = ',')]
    probs: Vec<f64>,
    /// Orlicz function name or density CSV path
    #[arg(long, default_value = "t")]
    phi: String,
    #[arg(long, default_value = "proof")]
    variant: String,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
}

/// Failure with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::FixtureMismatch { .. } => EXIT_VIOLATION,
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: message.into(),
    }
}

fn read_matrix(path: &Path) -> Result<ComplexMatrix, Failure> {
    let text = fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn read_weight(spec: &str, dim: usize) -> Result<Weight, Failure> {
    if spec == "identity" {
        return Ok(Weight::identity(dim));
    }
    Ok(Weight::new(read_matrix(Path::new(spec))?)?)
}

fn build_instance(args: &InstanceArgs) -> Result<(Instance, f64), Failure> {
    let mut matrices = BTreeMap::new();
    for spec in &args.inputs {
        let (role, file) = spec
            .split_once('=')
            .ok_or_else(|| input_error(format!("--in expects ROLE=FILE, got `{spec}`")))?;
        matrices.insert(role.to_string(), read_matrix(Path::new(file))?);
    }
    let dim = match (matrices.values().next(), args.weight.as_str()) {
        (Some(m), _) => m.dim(),
        (None, "identity") => return Err(input_error("no input matrices given")),
        (None, path) => read_matrix(Path::new(path))?.dim(),
    };
    let mut inst = Instance::new(read_weight(&args.weight, dim)?);
    inst.matrices = matrices;
    inst.alpha = args.alpha;
    inst.r = args.r;
    inst.s = args.s;
    inst.n = args.n;
    inst.probs = args.probs.clone();
    inst.phi = parse_phi(&args.phi)?;
    inst.variant = args.variant.parse::<Variant>()?;
    inst.radius_tol = DEFAULT_RADIUS_TOL;
    if !(args.tol > 0.0) {
        return Err(input_error("--tol must be positive"));
    }
    Ok((inst, args.tol))
}

fn to_json(value: &impl serde::Serialize) -> Result<String, Failure> {
    serde_json::to_string_pretty(value).map_err(|e| input_error(e.to_string()))
}

fn cmd_eval(bound: &str, args: &InstanceArgs) -> Result<u8, Failure> {
    let id: BoundId = bound.parse()?;
    let (inst, tol) = build_instance(args)?;
    let report = evaluate_bound(id, &inst, tol)?;
    println!("{}", to_json(&report)?);
    Ok(if report.holds { EXIT_OK } else { EXIT_VIOLATION })
}

fn cmd_compare(bounds: &[String], args: &InstanceArgs) -> Result<u8, Failure> {
    let ids = bounds.iter().map(|b| b.parse::<BoundId>()).collect::<Result<Vec<_>, _>>()?;
    let (inst, tol) = build_instance(args)?;
    let table = tightness_compare(&ids, &[inst], tol)?;
    println!("{}", to_json(&table)?);
    Ok(EXIT_OK)
}

fn cmd_verify(config: Option<&Path>, out: &Path) -> Result<u8, Failure> {
    let cfg = match config {
        Some(path) => CampaignConfig::from_json_file(path)?,
        None => CampaignConfig::default(),
    };
    let report = run_campaign(&cfg)?;
    report.save(out)?;
    for (id, count) in violation_table(&report) {
        if count > 0 {
            println!("{id}: {count} violation(s)");
        }
    }
    println!(
        "violations={} errors={} oracle_checked={} oracle_failures={} wall_time={:.1}s",
        report.violation_count(),
        report.error_count(),
        report.oracle.checked,
        report.oracle.failures.len(),
        report.wall_time_secs
    );
    Ok(if report.is_clean() { EXIT_OK } else { EXIT_VIOLATION })
}

fn cmd_repro(fixtures: Option<&Path>) -> Result<u8, Failure> {
    let fx = match fixtures {
        Some(path) => ExampleFixtures::from_json_file(path)?,
        None => ExampleFixtures::default(),
    };
    let report = evaluate_fixtures(&fx)?;
    for q in &report.quantities {
        println!(
            "{:<10} computed={:.12} expected={:.12} {}",
            q.name,
            q.computed,
            q.expected,
            if q.matches { "ok" } else { "MISMATCH" }
        );
    }
    report.into_result()?;
    Ok(EXIT_OK)
}

fn cmd_range(input: &Path, weight: Option<&Path>, points: usize) -> Result<u8, Failure> {
    let x = read_matrix(input)?;
    let x = match weight {
        Some(path) => Weight::new(read_matrix(path)?)?.reduce(&x)?,
        None => x,
    };
    let boundary = numerical_range_boundary(&x, points)?;
    println!("theta,re,im");
    for (theta, z) in boundary {
        println!("{theta},{},{}", z.re, z.im);
    }
    Ok(EXIT_OK)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Eval { bound, instance } => cmd_eval(bound, instance),
        Command::Compare { bounds, instance } => cmd_compare(bounds, instance),
        Command::Verify { config, out } => cmd_verify(config.as_deref(), out),
        Command::Repro { fixtures } => cmd_repro(fixtures.as_deref()),
        Command::Range { input, weight, points } => cmd_range(input, weight.as_deref(), *points),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
