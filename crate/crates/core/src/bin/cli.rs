//! Command-line front end for the path laboratory.
//!
//! Exit codes: 0 on success, 1 when a requested check fails (a certificate
//! is not found, a convergence trend breaks, an example inequality or
//! property suite is violated), 2 on usage or input errors.

use clap::{Args, Parser, Subcommand, ValueEnum};
use ctrw_lab::lab::{
    run_example1, run_marginal_convergence, run_property_suites, run_tracking_sequences,
    simulate_ensemble, ExperimentConfig, WalkKind,
};
use ctrw_lab::path::CadlagPath;
use ctrw_lab::skorokhod::{
    build_m1_certificate, j1_distance, m1_distance, uniform_distance, CertificateOutcome,
};
use ctrw_lab::transform::stair_fill;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "ctrw-lab",
    version,
    about = "Simulate heavy-tailed walks, fill path stairs, and certify Skorokhod convergence"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Draw a seeded replicate ensemble of one walk and save its paths and
    /// marginals
    Simulate(SimulateArgs),
    /// Replace every jump-terminated plateau of a path by a linear ramp
    Stairfill(StairfillArgs),
    /// Uniform, J1 and M1 distance brackets between two paths
    Distance(DistanceArgs),
    /// Build an ordered-subset convergence certificate for a path sequence
    Certify(CertifyArgs),
    /// Marginal KS comparison of scaled walks against their limit walk
    Converge(ConvergeArgs),
    /// The worked counterexample family and the stair-tracking sequences
    Example1(Example1Args),
    /// Randomized invariant suites over paths, transforms and walks
    Proptest(ProptestArgs),
}

#[derive(Args)]
struct SimulateArgs {
    /// Flat KEY=VALUE experiment config
    #[arg(long, value_name = "FILE")]
    config: PathBuf,
    /// Override the config seed
    #[arg(long, value_name = "U64")]
    seed: Option<u64>,
    /// Directory for paths.jsonl and marginals.csv
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Stdout format when --out is not given
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Walk kind (defaults to the config's walk)
    #[arg(long, value_name = "KIND")]
    walk: Option<String>,
    /// Scale index (defaults to the config's first n)
    #[arg(long, value_name = "N")]
    n: Option<usize>,
    /// Replicate count (defaults to the config's)
    #[arg(long, value_name = "R")]
    replicates: Option<usize>,
}

#[derive(Args)]
struct StairfillArgs {
    /// Path JSON file
    #[arg(value_name = "PATH_JSON")]
    input: PathBuf,
    /// Directory for filled.json (stdout when absent)
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DistanceArgs {
    #[arg(value_name = "PATH_JSON_A")]
    a: PathBuf,
    #[arg(value_name = "PATH_JSON_B")]
    b: PathBuf,
    /// Comparison horizon (defaults to the smaller path horizon)
    #[arg(long, value_name = "REAL")]
    t_max: Option<f64>,
    /// Step used to move t_max off jump times and to pitch upper-bound grids
    #[arg(long, value_name = "REAL", default_value_t = 1.0 / 256.0)]
    mesh: f64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct CertifyArgs {
    /// Target path JSON file
    #[arg(value_name = "TARGET_JSON")]
    target: PathBuf,
    /// Sequence member path JSON files, in order
    #[arg(value_name = "MEMBER_JSON", required = true, num_args = 1..)]
    members: Vec<PathBuf>,
    /// Certificate resolution
    #[arg(long, value_name = "REAL")]
    epsilon: f64,
    /// Comparison horizon (defaults to the smallest path horizon)
    #[arg(long, value_name = "REAL")]
    t_max: Option<f64>,
    #[arg(long, value_name = "REAL", default_value_t = 1.0 / 256.0)]
    mesh: f64,
    /// Directory for certificate.json
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ConvergeArgs {
    /// Flat KEY=VALUE experiment config
    #[arg(long, value_name = "FILE")]
    config: PathBuf,
    /// Override the config seed
    #[arg(long, value_name = "U64")]
    seed: Option<u64>,
    /// Directory for report.json and ks.csv (defaults to the config's out,
    /// if set)
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct Example1Args {
    /// Certificate resolutions, comma separated
    #[arg(long, value_name = "LIST", default_value = "0.2,0.1,0.05")]
    eps: String,
    /// Largest member index of the counterexample table
    #[arg(long, value_name = "N", default_value_t = 128)]
    n_max: usize,
    /// Member ladder for the stair-tracking sequences, comma separated
    #[arg(long, value_name = "LIST", default_value = "2,4,8,16,32,64,128,256")]
    ladder: String,
    /// Final upper bound the tracking sequences must beat
    #[arg(long, value_name = "REAL", default_value_t = 0.02)]
    threshold: f64,
    /// Directory for the CSV tables and JSON reports
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct ProptestArgs {
    #[arg(long, value_name = "U64", default_value_t = 2024)]
    seed: u64,
    /// Cases per suite
    #[arg(long, value_name = "N", default_value_t = 300)]
    cases: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

fn main() -> ExitCode {
    // Die quietly when a pipe consumer (head, grep -m) closes stdout early
    // instead of panicking on the failed write.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> ctrw_lab::Result<u8> {
    match command {
        Command::Simulate(args) => simulate(args),
        Command::Stairfill(args) => stairfill(args),
        Command::Distance(args) => distance(args),
        Command::Certify(args) => certify(args),
        Command::Converge(args) => converge(args),
        Command::Example1(args) => example1(args),
        Command::Proptest(args) => proptest(args),
    }
}

fn load_path(file: &Path) -> ctrw_lab::Result<CadlagPath> {
    CadlagPath::from_json_str(&std::fs::read_to_string(file)?)
}

fn write_file(dir: &Path, name: &str, contents: &[u8]) -> ctrw_lab::Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let target = dir.join(name);
    std::fs::write(&target, contents)?;
    Ok(target)
}

fn simulate(args: SimulateArgs) -> ctrw_lab::Result<u8> {
    let mut config = ExperimentConfig::from_flat_path(&args.config)?;
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    let kind = match &args.walk {
        Some(raw) => raw.parse::<WalkKind>()?,
        None => config.walk,
    };
    let n = args.n.unwrap_or(config.n_values[0]);
    let replicates = args.replicates.unwrap_or(config.replicates);
    let ensemble = simulate_ensemble(&config, kind, n, replicates)?;

    let out = args.out.or_else(|| config.output_dir.as_ref().map(PathBuf::from));
    match out {
        Some(dir) => {
            let mut paths = Vec::new();
            ensemble.write_jsonl(&mut paths)?;
            let mut marginals = Vec::new();
            ensemble.write_marginals_csv(&mut marginals)?;
            let a = write_file(&dir, "paths.jsonl", &paths)?;
            let b = write_file(&dir, "marginals.csv", &marginals)?;
            println!(
                "simulated {replicates} x {kind} (n = {n}, seed = {}): {} and {}",
                config.seed,
                a.display(),
                b.display()
            );
        }
        None => {
            let mut buf = Vec::new();
            match args.format {
                Format::Csv => ensemble.write_marginals_csv(&mut buf)?,
                Format::Json => ensemble.write_jsonl(&mut buf)?,
            }
            print!("{}", String::from_utf8_lossy(&buf));
        }
    }
    Ok(0)
}

fn stairfill(args: StairfillArgs) -> ctrw_lab::Result<u8> {
    let filled = stair_fill(&load_path(&args.input)?);
    match args.out {
        Some(dir) => {
            let target = write_file(&dir, "filled.json", filled.to_json_string().as_bytes())?;
            println!("wrote {}", target.display());
        }
        None => println!("{}", filled.to_json_string()),
    }
    Ok(0)
}

fn distance(args: DistanceArgs) -> ctrw_lab::Result<u8> {
    let a = load_path(&args.a)?;
    let b = load_path(&args.b)?;
    let t_max = args.t_max.unwrap_or_else(|| a.horizon().min(b.horizon()));
    let uniform = uniform_distance(&a, &b, t_max)?;
    let j1 = j1_distance(&a, &b, t_max, args.mesh)?;
    let m1 = m1_distance(&a, &b, t_max, args.mesh)?;
    match args.format {
        Format::Csv => {
            println!("metric,lower,upper");
            println!("uniform,{uniform},{uniform}");
            println!("j1,{},{}", j1.0, j1.1);
            println!("m1,{},{}", m1.0, m1.1);
        }
        Format::Json => {
            let doc = serde_json::json!({
                "t_max": t_max,
                "mesh": args.mesh,
                "uniform": uniform,
                "j1": { "lower": j1.0, "upper": j1.1 },
                "m1": { "lower": m1.0, "upper": m1.1 },
            });
            println!("{}", serde_json::to_string_pretty(&doc)?);
        }
    }
    Ok(0)
}

fn certify(args: CertifyArgs) -> ctrw_lab::Result<u8> {
    let target = load_path(&args.target)?;
    let members: Vec<CadlagPath> =
        args.members.iter().map(|p| load_path(p)).collect::<ctrw_lab::Result<_>>()?;
    let t_max = args.t_max.unwrap_or_else(|| {
        members
            .iter()
            .map(CadlagPath::horizon)
            .fold(target.horizon(), f64::min)
    });
    let outcome = build_m1_certificate(&target, &members, t_max, args.epsilon, args.mesh)?;
    if let Some(dir) = &args.out {
        let json = serde_json::to_string_pretty(&outcome)?;
        let file = write_file(dir, "certificate.json", json.as_bytes())?;
        println!("wrote {}", file.display());
    }
    match &outcome {
        CertificateOutcome::Found(cert) => {
            println!(
                "certificate found: epsilon = {}, t_max = {}, holds from member {} of {}, {} subset points",
                cert.epsilon,
                cert.t_max,
                cert.n1,
                members.len(),
                cert.a.len()
            );
            Ok(0)
        }
        CertificateOutcome::Failed { base_spread, bounds } => {
            let worst = bounds
                .last()
                .map_or(f64::NAN, |b| b.spread.max(b.offset));
            println!(
                "no certificate at epsilon = {}: base spread {base_spread}, final member gap {worst}",
                args.epsilon
            );
            Ok(1)
        }
    }
}

fn converge(args: ConvergeArgs) -> ctrw_lab::Result<u8> {
    let mut config = ExperimentConfig::from_flat_path(&args.config)?;
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    let report = run_marginal_convergence(&config)?;

    let out = args.out.or_else(|| config.output_dir.as_ref().map(PathBuf::from));
    if let Some(dir) = &out {
        let mut csv = Vec::new();
        report.write_csv(&mut csv)?;
        write_file(dir, "ks.csv", &csv)?;
        let file = write_file(dir, "report.json", report.to_json_string().as_bytes())?;
        println!("wrote {} and ks.csv", file.display());
    }
    match args.format {
        Format::Csv => {
            let mut csv = Vec::new();
            report.write_csv(&mut csv)?;
            print!("{}", String::from_utf8_lossy(&csv));
            for flag in &report.trends {
                println!(
                    "t = {}: nonincreasing = {}, final below 1% critical = {}",
                    flag.t, flag.nonincreasing, flag.final_below_critical
                );
            }
        }
        Format::Json => println!("{}", report.to_json_string()),
    }
    Ok(if report.all_trends_hold() { 0 } else { 1 })
}

fn parse_f64_list(raw: &str, what: &str) -> ctrw_lab::Result<Vec<f64>> {
    raw.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .map_err(|e| ctrw_lab::Error::InvalidConfig(format!("{what}: {e}")))
        })
        .collect()
}

fn parse_usize_list(raw: &str, what: &str) -> ctrw_lab::Result<Vec<usize>> {
    raw.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<usize>()
                .map_err(|e| ctrw_lab::Error::InvalidConfig(format!("{what}: {e}")))
        })
        .collect()
}

fn example1(args: Example1Args) -> ctrw_lab::Result<u8> {
    let eps = parse_f64_list(&args.eps, "--eps")?;
    let ladder = parse_usize_list(&args.ladder, "--ladder")?;
    let example = run_example1(&eps, args.n_max)?;
    let sequences = run_tracking_sequences(&ladder)?;

    if let Some(dir) = &args.out {
        let mut rows = Vec::new();
        example.write_csv(&mut rows)?;
        write_file(dir, "example1_rows.csv", &rows)?;
        let mut certs = Vec::new();
        example.write_certificates_csv(&mut certs)?;
        write_file(dir, "example1_certificates.csv", &certs)?;
        write_file(dir, "example1.json", example.to_json_string().as_bytes())?;
        let mut seq_csv = Vec::new();
        sequences.write_csv(&mut seq_csv)?;
        write_file(dir, "sequences.csv", &seq_csv)?;
        let file = write_file(dir, "sequences.json", sequences.to_json_string().as_bytes())?;
        println!("wrote 5 report files next to {}", file.display());
    }

    match args.format {
        Format::Csv => {
            let mut buf = Vec::new();
            example.write_csv(&mut buf)?;
            example.write_certificates_csv(&mut buf)?;
            sequences.write_csv(&mut buf)?;
            print!("{}", String::from_utf8_lossy(&buf));
        }
        Format::Json => {
            let doc = serde_json::json!({
                "example": serde_json::to_value(&example)?,
                "sequences": serde_json::to_value(&sequences)?,
            });
            println!("{}", serde_json::to_string_pretty(&doc)?);
        }
    }

    let example_ok = example.meets_expectations();
    let sequences_ok = sequences.meets_expectations(args.threshold);
    println!(
        "counterexample inequalities: {}; tracking sequences: {}",
        verdict(example_ok),
        verdict(sequences_ok)
    );
    Ok(if example_ok && sequences_ok { 0 } else { 1 })
}

fn proptest(args: ProptestArgs) -> ctrw_lab::Result<u8> {
    let report = run_property_suites(args.seed, args.cases);
    match args.format {
        Format::Csv => {
            println!("suite,cases,checks,failures");
            for suite in &report.suites {
                println!(
                    "{},{},{},{}",
                    suite.name, suite.cases, suite.checks, suite.failures
                );
                if let Some(first) = &suite.first_failure {
                    eprintln!("{}: first failure: {first}", suite.name);
                }
            }
        }
        Format::Json => println!("{}", serde_json::to_string_pretty(&report)?),
    }
    Ok(if report.all_passed() { 0 } else { 1 })
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}
