use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use latdense::acceptance;
use latdense::density::{density_experiment, write_csv, ExperimentConfig};
use latdense::embed::find_primitive_embedding;
use latdense::json::{parse_matrix_str, parse_vector_str, BigJson};
use latdense::orbits::{
    enumerate_classes, f_invariant, f_trace, orbit_count_formula_for, sigma_report, Kind, Model,
};
use latdense::wedge::{wedge_report, DEFAULT_SIGN};
use latdense::{make_standard, Error, Lattice};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "latdense", version, about = "Exact computations with even lattices of hyperkähler type")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Standard lattices.
    Lattice {
        #[command(subcommand)]
        command: LatticeCommand,
    },
    /// Orbit classes of exceptional vectors.
    Orbits {
        #[command(subcommand)]
        command: OrbitsCommand,
    },
    /// Exceptional-class test.
    Sigma {
        #[command(subcommand)]
        command: SigmaCommand,
    },
    /// Orbit invariant of an exceptional class, with its saturation trace.
    FInvariant(VectorArgs),
    /// Primitive embeddings.
    Embed {
        #[command(subcommand)]
        command: EmbedCommand,
    },
    /// Density experiment.
    Density {
        #[command(subcommand)]
        command: DensityCommand,
    },
    /// Wedge-square computations.
    Wedge {
        #[command(subcommand)]
        command: WedgeCommand,
    },
    /// Runs the acceptance suite.
    Selftest {
        /// Only these criteria.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u32>,
    },
}

#[derive(Subcommand)]
enum LatticeCommand {
    /// Gram matrix, signature, |det| and discriminant invariant factors.
    Info {
        #[arg(long)]
        name: String,
        #[arg(long)]
        n: Option<i64>,
    },
}

#[derive(Subcommand)]
enum OrbitsCommand {
    Enumerate {
        #[arg(long)]
        n: i64,
        #[arg(long, default_value = "hilbert")]
        kind: Kind,
    },
    /// Closed formula against enumeration.
    Count {
        #[arg(long)]
        n: i64,
        #[arg(long, default_value = "hilbert")]
        kind: Kind,
    },
}

#[derive(Subcommand)]
enum SigmaCommand {
    Check(VectorArgs),
}

#[derive(Args)]
struct VectorArgs {
    #[arg(long)]
    n: i64,
    #[arg(long, default_value = "hilbert")]
    kind: Kind,
    /// JSON integer array in lattice coordinates.
    #[arg(long)]
    vector: String,
}

#[derive(Subcommand)]
enum EmbedCommand {
    Find {
        /// JSON Gram matrix of the source lattice.
        #[arg(long)]
        source: String,
        /// Standard lattice name.
        #[arg(long)]
        target: String,
        #[arg(long)]
        n: Option<i64>,
        #[arg(long, default_value_t = 2)]
        bound: i64,
    },
}

#[derive(Subcommand)]
enum DensityCommand {
    Run(DensityArgs),
}

#[derive(Args)]
struct DensityArgs {
    #[arg(long, default_value_t = 2)]
    n: i64,
    #[arg(long, default_value = "hilbert")]
    kind: Kind,
    #[arg(long, default_value_t = 10)]
    trials: usize,
    #[arg(long, default_value_t = 0.01)]
    epsilon: f64,
    #[arg(long, env = "LATDENSE_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    kmax: Option<u64>,
    /// Search height for orbit realization.
    #[arg(long)]
    realize_bound: Option<i64>,
    /// Leave the millis column empty so output is byte-reproducible.
    #[arg(long)]
    no_timing: bool,
    /// Write CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Read the whole configuration from a JSON file; other flags are ignored.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Print the effective configuration as JSON and exit.
    #[arg(long)]
    print_config: bool,
}

#[derive(Subcommand)]
enum WedgeCommand {
    Verify {
        #[arg(long, default_value_t = DEFAULT_SIGN, allow_negative_numbers = true)]
        sign: i32,
    },
}

/// Exit status 1: a verification failed or nothing was found.
/// Exit status 2: malformed input.
enum Failure {
    Check(String),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_)
            | Error::Precondition(_)
            | Error::BadN(_)
            | Error::UnknownLattice(_)
            | Error::InvalidLattice(_)
            | Error::DimensionMismatch { .. }
            | Error::ZeroVector => Failure::Input(e.to_string()),
            _ => Failure::Check(e.to_string()),
        }
    }
}

fn print_json(v: &Value) {
    let text = serde_json::to_string_pretty(v).expect("values serialize");
    // a closed pipe downstream is not an error of ours
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn to_value(x: &impl serde::Serialize) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn lattice_info(name: &str, n: Option<i64>) -> Result<Value, Failure> {
    let l: Lattice = make_standard(name, n)?;
    let d = l.disc_group();
    let (p, q) = l.signature();
    let det = l.det();
    let abs_det = if det < 0.into() { -det } else { det };
    Ok(json!({
        "name": name,
        "n": n,
        "rank": l.rank(),
        "gram": l.gram().to_json(),
        "signature": [p, q],
        "abs_det": abs_det.to_json(),
        "disc": d.invariant_factors.to_json(),
    }))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Lattice {
            command: LatticeCommand::Info { name, n },
        } => print_json(&lattice_info(&name, n)?),
        Command::Orbits { command } => match command {
            OrbitsCommand::Enumerate { n, kind } => print_json(&to_value(&enumerate_classes(n, kind)?)),
            OrbitsCommand::Count { n, kind } => {
                let formula = orbit_count_formula_for(n, kind)?;
                let enumerated = enumerate_classes(n, kind)?.len() as u64;
                print_json(&json!({"formula": formula, "enumerated": enumerated, "agree": formula == enumerated}));
                if formula != enumerated {
                    return Err(Failure::Check("formula and enumeration disagree".into()));
                }
            }
        },
        Command::Sigma {
            command: SigmaCommand::Check(a),
        } => {
            let d = parse_vector_str(&a.vector)?;
            let r = sigma_report(a.n, a.kind, &d)?;
            let mut reasons = Vec::new();
            if !r.primitive {
                reasons.push("not primitive".to_string());
            }
            if r.norm != r.expected_norm.into() {
                reasons.push(format!("norm {} is not {}", r.norm, r.expected_norm));
            }
            if !(&r.divisibility % r.required_divisor).eq(&0.into()) {
                reasons.push(format!("divisibility {} is not a multiple of {}", r.divisibility, r.required_divisor));
            }
            let mut v = to_value(&r);
            v["reasons"] = json!(reasons);
            print_json(&v);
            if !r.is_sigma {
                return Err(Failure::Check("not an exceptional class".into()));
            }
        }
        Command::FInvariant(a) => {
            let d = parse_vector_str(&a.vector)?;
            let class = f_invariant(a.n, a.kind, &d)?;
            let trace = f_trace(&Model::new(a.n, a.kind)?, &d)?;
            print_json(&json!({"class": to_value(&class), "trace": to_value(&trace)}));
        }
        Command::Embed {
            command: EmbedCommand::Find { source, target, n, bound },
        } => {
            let source = Lattice::new(parse_matrix_str(&source)?)?;
            let target_lattice = make_standard(&target, n)?;
            match find_primitive_embedding(&source, &target_lattice, bound)? {
                Some(e) => print_json(&json!({"found": true, "embedding": to_value(&e)})),
                None => {
                    print_json(&json!({"found": false, "bound": bound}));
                    return Err(Failure::Check(format!("no primitive embedding into {target} within bound {bound}")));
                }
            }
        }
        Command::Density {
            command: DensityCommand::Run(a),
        } => density(a)?,
        Command::Wedge {
            command: WedgeCommand::Verify { sign },
        } => {
            let r = wedge_report(sign)?;
            print_json(&to_value(&r));
            let psi_ok = r.psi.table_matches
                && r.psi.det_psi == (-1).into()
                && r.psi.conventions.iter().all(|c| c.decomposition_holds && c.block_structure_holds);
            let tau_ok = r.tau.iter().all(|t| t.det_chi == -1 && t.involution);
            if !(psi_ok && tau_ok && r.unit_check.all_agree) {
                return Err(Failure::Check("wedge verification failed".into()));
            }
        }
        Command::Selftest { only } => {
            let ids: Vec<u32> = if only.is_empty() {
                acceptance::CRITERIA.iter().map(|c| c.0).collect()
            } else {
                only
            };
            let mut all = true;
            for id in ids {
                let r = acceptance::run_criterion(id)
                    .ok_or_else(|| Failure::Input(format!("no criterion {id}")))?;
                let _ = writeln!(std::io::stdout().lock(), "{}", r.line());
                all &= r.pass;
            }
            if !all {
                return Err(Failure::Check("acceptance suite failed".into()));
            }
        }
    }
    Ok(())
}

fn density(a: DensityArgs) -> Result<(), Failure> {
    let cfg = match &a.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            serde_json::from_str::<ExperimentConfig>(&text).map_err(|e| Failure::Input(format!("config: {e}")))?
        }
        None => {
            let mut cfg = ExperimentConfig::new(a.n, a.kind, a.trials, a.epsilon, a.seed);
            if let Some(k) = a.kmax {
                cfg.kmax = k;
            }
            cfg.realize_bound = a.realize_bound;
            cfg.timing = !a.no_timing;
            cfg
        }
    };
    if a.print_config {
        print_json(&to_value(&cfg));
        return Ok(());
    }
    let rows = density_experiment(&cfg)?;
    match &a.out {
        Some(path) => {
            let f = fs::File::create(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            write_csv(&rows, f)?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            write_csv(&rows, &mut lock)?;
            let _ = lock.flush();
        }
    }
    let failed = rows.iter().filter(|r| r.status != "ok").count();
    if failed > 0 {
        eprintln!("{failed} of {} trials reported errors", rows.len());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("latdense: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("latdense: {msg}");
            ExitCode::from(2)
        }
    }
}
