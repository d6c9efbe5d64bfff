//! Command-line front end: cost sweeps, channel decompositions, sampling
//! runs, ansatz cost reports and the oracle self-test suite, emitted as
//! CSV or JSON with the version stamped into every output.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use flonl::channels::ptm_noisy_rot_zz;
use flonl::nonlinearity::{solve_l1, DEFAULT_RESIDUAL_TOL};
use flonl::uccsd::{build_circuit, cost_report, extrapolate, load_amplitudes};
use flonl::{validate, BasisChannelSet, CircuitIR, DecompositionCache, Error, N4Formula};
use flonl::{sampler, SampleBudget};

const VERSION: &str = env!("CARGO_PKG_VERSION");

const EXIT_INFEASIBLE: u8 = 2;
const EXIT_VALIDATION: u8 = 3;
const EXIT_BAD_INPUT: u8 = 4;

#[derive(Parser)]
#[command(name = "flonl", version, about = "Simulation-cost analysis of noisy fermionic circuits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the cost measure W(theta, p) over an angle grid; emits CSV
    Nonlinearity {
        /// Angle grid as start:end:count, endpoints inclusive
        #[arg(long, value_parser = parse_grid)]
        theta_grid: Grid,
        /// Comma-separated dephasing strengths
        #[arg(long, value_delimiter = ',', default_value = "0.0")]
        p: Vec<f64>,
        /// Enlarge the basis with e^{±i phi G} for each extra angle phi
        #[arg(long, value_delimiter = ',')]
        extra_angles: Vec<f64>,
        /// Write here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// L1-minimal decomposition of one noisy rotation; emits JSON
    Decompose {
        /// Rotation angle
        #[arg(long)]
        theta: f64,
        /// Dephasing strength
        #[arg(long, default_value_t = 0.0)]
        p: f64,
        #[arg(long, value_delimiter = ',')]
        extra_angles: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte-Carlo estimate of a circuit observable; emits JSON
    Simulate {
        /// Circuit description (JSON)
        circuit: PathBuf,
        /// Fixed sample count
        #[arg(long, conflicts_with_all = ["epsilon", "delta"])]
        samples: Option<u64>,
        /// Additive accuracy target (needs --delta)
        #[arg(long, requires = "delta")]
        epsilon: Option<f64>,
        /// Failure probability for the accuracy target (needs --epsilon)
        #[arg(long, requires = "epsilon")]
        delta: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Sampler threads; default uses every core
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cost report for a singles-doubles ansatz amplitude file
    UccsdCost {
        /// Amplitude set (JSON)
        #[arg(long)]
        amps: PathBuf,
        /// Dephasing strength applied to every four-body rotation
        #[arg(long, default_value_t = 0.0)]
        noise_p: f64,
        /// First-order product-formula steps
        #[arg(long, default_value_t = 1)]
        trotter: usize,
        /// Also extrapolate the geometric-mean cost out to m orbital pairs
        #[arg(long, value_name = "M")]
        extrapolate: Option<u64>,
        /// Write the per-gate table here as CSV
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cross-check every layer against the dense oracle; exits 3 on failure
    Validate {
        /// Random circuits to draw
        #[arg(long, default_value_t = 200)]
        circuits: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// An inclusive linear grid, written start:end:count on the command line.
#[derive(Debug, Clone)]
struct Grid {
    start: f64,
    end: f64,
    count: usize,
}

fn parse_grid(text: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = text.split(':').collect();
    let [start, end, count] = parts.as_slice() else {
        return Err(format!("expected start:end:count, got `{text}`"));
    };
    let start: f64 = start.parse().map_err(|e| format!("bad grid start: {e}"))?;
    let end: f64 = end.parse().map_err(|e| format!("bad grid end: {e}"))?;
    let count: usize = count.parse().map_err(|e| format!("bad grid count: {e}"))?;
    if !start.is_finite() || !end.is_finite() {
        return Err("grid endpoints must be finite".into());
    }
    if count == 0 {
        return Err("grid needs at least one point".into());
    }
    Ok(Grid { start, end, count })
}

impl Grid {
    fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let step = (self.end - self.start) / (self.count - 1) as f64;
        (0..self.count).map(|k| self.start + step * k as f64).collect()
    }
}

/// A terminal failure: exit code plus the machine-readable report that
/// goes to stderr.
struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

impl Failure {
    fn bad_input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_BAD_INPUT,
            kind: "bad-input",
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, kind) = match &e {
            Error::InfeasibleTarget { .. } => (EXIT_INFEASIBLE, "infeasible-target"),
            Error::SolverStalled { .. } => (EXIT_INFEASIBLE, "solver-stalled"),
            _ => (EXIT_BAD_INPUT, "bad-input"),
        };
        Failure {
            code,
            kind,
            message: e.to_string(),
        }
    }
}

fn emit_failure(f: &Failure) {
    let doc = json!({
        "version": VERSION,
        "error": {"kind": f.kind, "message": f.message},
    });
    eprintln!("{doc}");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) if matches!(err.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = err.print();
            return ExitCode::SUCCESS;
        }
        Err(err) => {
            emit_failure(&Failure {
                code: EXIT_BAD_INPUT,
                kind: "bad-arguments",
                message: err.to_string(),
            });
            return ExitCode::from(EXIT_BAD_INPUT);
        }
    };
    match dispatch(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            emit_failure(&failure);
            ExitCode::from(failure.code)
        }
    }
}

/// FLONL_RESIDUAL_TOL overrides the acceptance threshold for decomposition
/// residuals (default 1e-8).
fn residual_tol() -> Result<f64, Failure> {
    match std::env::var("FLONL_RESIDUAL_TOL") {
        Ok(text) => text
            .trim()
            .parse()
            .map_err(|e| Failure::bad_input(format!("FLONL_RESIDUAL_TOL: {e}"))),
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_RESIDUAL_TOL),
        Err(e) => Err(Failure::bad_input(format!("FLONL_RESIDUAL_TOL: {e}"))),
    }
}

fn csv_header() -> String {
    format!("# flonl {VERSION}\n")
}

fn write_output(out: Option<&PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::bad_input(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn stamped(value: &impl serde::Serialize) -> Value {
    let mut doc = serde_json::to_value(value).expect("serializable report");
    doc.as_object_mut()
        .expect("object report")
        .insert("version".into(), json!(VERSION));
    doc
}

fn pretty(doc: &Value) -> String {
    let mut text = serde_json::to_string_pretty(doc).expect("serializable document");
    text.push('\n');
    text
}

fn dispatch(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Nonlinearity {
            theta_grid,
            p,
            extra_angles,
            out,
        } => {
            let basis = BasisChannelSet::with_extra_angles(&extra_angles)?;
            let tol = residual_tol()?;
            let mut csv = csv_header();
            csv.push_str("theta,p,W\n");
            for &p in &p {
                for &theta in &theta_grid.points() {
                    let w = solve_l1(&ptm_noisy_rot_zz(theta, p)?, &basis, tol)?.l1_norm;
                    writeln!(csv, "{theta:.16e},{p:.16e},{w:.16e}").unwrap();
                }
            }
            write_output(out.as_ref(), &csv)?;
            Ok(0)
        }
        Command::Decompose {
            theta,
            p,
            extra_angles,
            out,
        } => {
            let basis = BasisChannelSet::with_extra_angles(&extra_angles)?;
            let deco = solve_l1(&ptm_noisy_rot_zz(theta, p)?, &basis, residual_tol()?)?;
            let weights: Vec<Value> = basis
                .channels()
                .iter()
                .zip(&deco.weights)
                .map(|(ch, &q)| json!({"label": ch.ptm.label, "q": q}))
                .collect();
            let doc = json!({
                "version": VERSION,
                "target": {"theta": theta, "p": p},
                "l1": deco.l1_norm,
                "residual": deco.residual,
                "weights": weights,
            });
            write_output(out.as_ref(), &pretty(&doc))?;
            Ok(0)
        }
        Command::Simulate {
            circuit,
            samples,
            epsilon,
            delta,
            seed,
            workers,
            out,
        } => {
            if let Some(n) = workers {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global()
                    .map_err(|e| Failure::bad_input(format!("--workers: {e}")))?;
            }
            let budget = match (samples, epsilon, delta) {
                (Some(n), _, _) => SampleBudget::Fixed(n),
                (None, Some(epsilon), Some(delta)) => SampleBudget::Accuracy { epsilon, delta },
                _ => {
                    return Err(Failure::bad_input(
                        "one of --samples or --epsilon with --delta is required",
                    ))
                }
            };
            let text = std::fs::read_to_string(&circuit)
                .map_err(|e| Failure::bad_input(format!("{}: {e}", circuit.display())))?;
            let circuit: CircuitIR = serde_json::from_str(&text).map_err(Error::from)?;
            circuit.validate()?;
            let cache = DecompositionCache::new(BasisChannelSet::standard(), residual_tol()?);
            let estimate = sampler::run(&circuit, &cache, budget, seed)?;
            write_output(out.as_ref(), &pretty(&stamped(&estimate)))?;
            Ok(0)
        }
        Command::UccsdCost {
            amps,
            noise_p,
            trotter,
            extrapolate: target_m,
            csv,
            out,
        } => {
            let amps = load_amplitudes(&amps)?;
            let circuit = build_circuit(&amps, trotter, noise_p)?;
            let cache = DecompositionCache::new(BasisChannelSet::standard(), residual_tol()?);
            let report = cost_report(&circuit, &cache)?;

            if let Some(path) = &csv {
                let mut table = csv_header();
                table.push_str("gate,angle,p,W\n");
                for g in &report.cost.per_gate {
                    writeln!(table, "{},{:.16e},{:.16e},{:.16e}", g.gate, g.theta, g.p, g.w)
                        .unwrap();
                }
                write_output(Some(path), &table)?;
            }

            let mut doc = stamped(&report);
            if let Some(m) = target_m {
                let ws: Vec<f64> = report.cost.per_gate.iter().map(|g| g.w).collect();
                let ext = extrapolate(&ws, N4Formula::HydrogenChain)?;
                let mut section = stamped(&ext);
                let fields = section.as_object_mut().expect("object report");
                fields.remove("version");
                fields.insert("m".into(), json!(m));
                fields.insert("predicted_w".into(), json!(ext.predicted_w(m)));
                // stays finite (as a log) even when the prediction overflows
                fields.insert(
                    "predicted_log10_w".into(),
                    json!(ext.formula.n4(m) as f64 * ext.geo_mean_w.log10()),
                );
                fields.insert(
                    "largest_simulatable_m".into(),
                    json!(ext.largest_within(report.budget)),
                );
                doc.as_object_mut()
                    .expect("object report")
                    .insert("extrapolation".into(), section);
            }
            write_output(out.as_ref(), &pretty(&doc))?;
            Ok(0)
        }
        Command::Validate {
            circuits,
            seed,
            out,
        } => {
            let report = validate::run_suite(circuits, seed)?;
            write_output(out.as_ref(), &pretty(&stamped(&report)))?;
            Ok(if report.passed() { 0 } else { EXIT_VALIDATION })
        }
    }
}
