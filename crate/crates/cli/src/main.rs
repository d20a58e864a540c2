//! Command-line front end: sample graphs, print spectra and energies,
//! evaluate the asymptotic predictions, run Monte Carlo sweeps, and run
//! the self-verification battery.
//!
//! Data goes to stdout, logs and progress go to stderr. Exit codes:
//! 0 success, 2 usage or configuration error, 3 domain error (the weight
//! cannot be evaluated on this input), 4 verification battery failure.

use clap::{Args, Parser, Subcommand, ValueEnum};
use lapenergy::energies::{full_report, EnergyError};
use lapenergy::graph::{generate_gnp, read_edge_list, write_edge_list, Graph, GraphError};
use lapenergy::matrices::{
    build_laplacian_family, build_weight_matrix, build_weighted_adjacency, MatrixError, SymMatrix,
};
use lapenergy::predict::{
    predict_bulk_eigenvalue, predict_quantity, PredictError, Quantity, ALL_QUANTITIES,
};
use lapenergy::spectral::{esd_histogram, sym_eigenvalues, EsdScaling, SpectralError};
use lapenergy::experiments::{render_csv, run_sweep, SweepConfig, SweepError};
use lapenergy::verify::{run_battery, BatteryScale};
use lapenergy::weights::{WeightContext, WeightError, WeightFunction};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

#[derive(Parser)]
#[command(
    name = "lapenergy",
    version,
    about = "Weighted distance matrices of G(n,p): spectra, energies, and asymptotic predictions"
)]
struct Cli {
    /// Worker threads for sweeps and verification (default: all cores).
    /// Results never depend on this.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a G(n,p) graph and print its edge list
    Gen {
        /// Number of vertices
        #[arg(long)]
        n: usize,
        /// Edge probability
        #[arg(long)]
        p: f64,
        /// RNG seed
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write to a file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the eigenvalues of a graph matrix, largest first
    Spectrum {
        #[command(flatten)]
        input: GraphInput,
        #[command(flatten)]
        weight: WeightArgs,
        /// Which matrix to solve (weight applies to Lf and Lf+)
        #[arg(long, value_enum, default_value_t = MatrixChoice::Lf)]
        matrix: MatrixChoice,
    },
    /// Compute all five energies of one graph under one weight (JSON)
    Energy {
        #[command(flatten)]
        input: GraphInput,
        #[command(flatten)]
        weight: WeightArgs,
    },
    /// Print the asymptotic predictions for given n and p (JSON)
    Predict {
        #[command(flatten)]
        weight: WeightArgs,
        /// Number of vertices
        #[arg(long)]
        n: usize,
        /// Edge probability
        #[arg(long)]
        p: f64,
        /// Restrict to one quantity (E_adj, E_Wf, LE_f, LE_plus_f, LEL_f, IE_f)
        #[arg(long)]
        quantity: Option<String>,
    },
    /// Run a Monte Carlo sweep from a TOML config and emit CSV
    Sweep {
        /// Sweep configuration file
        #[arg(long)]
        config: PathBuf,
        /// Write the CSV to a file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the self-verification battery (exit 4 when a criterion fails)
    Verify {
        /// Reduced scale: smaller graphs, fewer trials
        #[arg(long)]
        fast: bool,
    },
    /// Histogram of the empirical spectral distribution (CSV)
    Esd {
        #[command(flatten)]
        input: GraphInput,
        #[command(flatten)]
        weight: WeightArgs,
        /// Which matrix to solve (weight applies to Lf and Lf+)
        #[arg(long, value_enum, default_value_t = MatrixChoice::Lf)]
        matrix: MatrixChoice,
        /// Number of histogram bins
        #[arg(long, default_value_t = 40)]
        bins: usize,
        /// Rescale eigenvalues before binning
        #[arg(long, value_enum, default_value_t = ScalingChoice::None)]
        scaling: ScalingChoice,
    },
}

#[derive(Args)]
struct GraphInput {
    /// Read the graph from an edge-list file instead of sampling
    #[arg(long, conflicts_with_all = ["n", "p", "seed"])]
    graph: Option<PathBuf>,
    /// Number of vertices to sample
    #[arg(long, required_unless_present = "graph")]
    n: Option<usize>,
    /// Edge probability to sample with
    #[arg(long, required_unless_present = "graph")]
    p: Option<f64>,
    /// RNG seed for sampling
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct WeightArgs {
    /// Weight function name
    #[arg(long, default_value = "unweighted")]
    weight: String,
    /// Exponent for the one weight that takes it
    #[arg(long)]
    alpha: Option<f64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MatrixChoice {
    /// Plain adjacency matrix
    #[value(name = "A")]
    A,
    /// Classical Laplacian
    #[value(name = "L")]
    L,
    /// Classical signless Laplacian
    #[value(name = "L+")]
    LPlus,
    /// Weighted Laplacian of W_f
    #[value(name = "Lf")]
    Lf,
    /// Weighted signless Laplacian of W_f
    #[value(name = "Lf+")]
    LfPlus,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScalingChoice {
    /// Raw eigenvalues
    None,
    /// Divide by sqrt(n)
    InvSqrtN,
    /// Divide by n
    InvN,
}

impl From<ScalingChoice> for EsdScaling {
    fn from(c: ScalingChoice) -> EsdScaling {
        match c {
            ScalingChoice::None => EsdScaling::None,
            ScalingChoice::InvSqrtN => EsdScaling::InvSqrtN,
            ScalingChoice::InvN => EsdScaling::InvN,
        }
    }
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}: {1}")]
    Io(PathBuf, std::io::Error),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Predict(#[from] PredictError),
    #[error(transparent)]
    Sweep(#[from] SweepError),
}

impl From<EnergyError> for CliError {
    fn from(e: EnergyError) -> CliError {
        match e {
            EnergyError::Matrix(m) => CliError::Matrix(m),
            EnergyError::Spectral(s) => CliError::Spectral(s),
        }
    }
}

fn weight_code(e: &WeightError) -> u8 {
    match e {
        WeightError::UnknownWeight(_)
        | WeightError::AlphaNotApplicable
        | WeightError::InvalidAlpha(_)
        | WeightError::InvalidProbability(_)
        | WeightError::TooFewVertices(_) => 2,
        _ => 3,
    }
}

fn matrix_code(e: &MatrixError) -> u8 {
    match e {
        MatrixError::DisconnectedGraph { .. } => 3,
        MatrixError::Weight(w) => weight_code(w),
        _ => 1,
    }
}

fn predict_code(e: &PredictError) -> u8 {
    match e {
        PredictError::InvalidProbability(_) | PredictError::TooFewVertices(_) => 2,
        PredictError::NotAdjacencyBased { .. } => 3,
        PredictError::Weight(w) => weight_code(w),
    }
}

fn exit_code(e: &CliError) -> u8 {
    match e {
        CliError::Io(..) | CliError::Usage(_) | CliError::Graph(_) => 2,
        CliError::Weight(w) => weight_code(w),
        CliError::Matrix(m) => matrix_code(m),
        CliError::Spectral(_) => 1,
        CliError::Predict(p) => predict_code(p),
        CliError::Sweep(s) => match s {
            SweepError::Config(_) => 2,
            SweepError::Weight(w) => weight_code(w),
            SweepError::Predict(p) => predict_code(p),
            SweepError::Graph(_) => 2,
            SweepError::Matrix(m) => matrix_code(m),
            SweepError::Spectral(_) => 1,
        },
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

fn write_output(path: Option<&Path>, data: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, data).map_err(|e| CliError::Io(p.to_path_buf(), e)),
        None => {
            print!("{data}");
            Ok(())
        }
    }
}

fn load_graph(input: &GraphInput) -> Result<Graph, CliError> {
    match &input.graph {
        Some(path) => Ok(read_edge_list(&read_file(path)?)?),
        None => {
            let n = input.n.expect("clap enforces n without --graph");
            let p = input.p.expect("clap enforces p without --graph");
            Ok(generate_gnp(n, p, input.seed)?)
        }
    }
}

fn resolve_weight(args: &WeightArgs) -> Result<WeightFunction, CliError> {
    Ok(WeightFunction::by_name(&args.weight, args.alpha)?)
}

fn build_matrix(g: &Graph, choice: MatrixChoice, args: &WeightArgs) -> Result<SymMatrix, CliError> {
    match choice {
        MatrixChoice::A | MatrixChoice::L | MatrixChoice::LPlus => {
            let unweighted = WeightFunction::by_name("unweighted", None)?;
            let ctx = WeightContext::new(g.n(), None);
            let a = build_weighted_adjacency(g, &unweighted, &ctx)?;
            Ok(match choice {
                MatrixChoice::A => a,
                MatrixChoice::L => build_laplacian_family(&a).laplacian,
                _ => build_laplacian_family(&a).signless,
            })
        }
        MatrixChoice::Lf | MatrixChoice::LfPlus => {
            let w = resolve_weight(args)?;
            let wf = build_weight_matrix(g, &w)?;
            let fam = build_laplacian_family(&wf);
            Ok(if choice == MatrixChoice::Lf { fam.laplacian } else { fam.signless })
        }
    }
}

fn cmd_gen(n: usize, p: f64, seed: u64, out: Option<&Path>) -> Result<(), CliError> {
    let g = generate_gnp(n, p, seed)?;
    write_output(out, &write_edge_list(&g))
}

fn cmd_spectrum(
    input: &GraphInput,
    weight: &WeightArgs,
    matrix: MatrixChoice,
) -> Result<(), CliError> {
    let g = load_graph(input)?;
    let m = build_matrix(&g, matrix, weight)?;
    let spectrum = sym_eigenvalues(&m)?;
    let mut out = String::new();
    for v in spectrum.values() {
        out.push_str(&v.to_string());
        out.push('\n');
    }
    print!("{out}");
    Ok(())
}

fn cmd_energy(input: &GraphInput, weight: &WeightArgs) -> Result<(), CliError> {
    let g = load_graph(input)?;
    let w = resolve_weight(weight)?;
    let mut report = full_report(&g, &w)?;
    if input.graph.is_none() {
        report.meta.p = input.p;
        report.meta.seed = Some(input.seed);
    }
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    println!("{json}");
    Ok(())
}

fn cmd_predict(
    weight: &WeightArgs,
    n: usize,
    p: f64,
    quantity: Option<&str>,
) -> Result<(), CliError> {
    let w = resolve_weight(weight)?;
    let quantities: Vec<Quantity> = match quantity {
        Some(s) => vec![Quantity::from_str(s).map_err(CliError::Usage)?],
        None => ALL_QUANTITIES.to_vec(),
    };
    let mut predictions = Vec::new();
    for q in quantities {
        predictions.push(predict_quantity(q, &w, n, p)?);
    }
    let bulk = predict_bulk_eigenvalue(&w, n, p)?;
    let mut doc = serde_json::json!({
        "weight": w.name(),
        "n": n,
        "p": p,
        "predictions": predictions,
        "bulk_location": bulk,
    });
    if let Some(a) = weight.alpha {
        doc["alpha"] = serde_json::json!(a);
    }
    let json = serde_json::to_string_pretty(&doc).expect("predictions serialize");
    println!("{json}");
    Ok(())
}

fn cmd_sweep(config: &Path, out: Option<&Path>) -> Result<(), CliError> {
    let cfg = SweepConfig::from_toml_str(&read_file(config)?)?;
    eprintln!(
        "sweep: {} weight(s) x {} size(s), p = {}, {} trial(s) per cell",
        cfg.weights.len(),
        cfg.n_values.len(),
        cfg.p,
        cfg.trials
    );
    let outcome = run_sweep(&cfg)?;
    for cell in &outcome.verdict.cells {
        let status = if !cell.determinate {
            "SKIP (no prediction)".to_string()
        } else if cell.pass {
            "PASS".to_string()
        } else {
            "FAIL".to_string()
        };
        match cell.mean_ratio {
            Some(r) => eprintln!(
                "cell {} {} n={}: mean ratio {:.4} -> {}",
                cell.weight, cell.quantity, cell.n, r, status
            ),
            None => eprintln!("cell {} {} n={}: -> {}", cell.weight, cell.quantity, cell.n, status),
        }
    }
    eprintln!(
        "sweep verdict: {}",
        if outcome.verdict.all_pass { "all cells pass" } else { "some cells fail" }
    );
    write_output(out, &render_csv(&outcome))
}

fn cmd_verify(fast: bool) -> Result<bool, CliError> {
    let scale = if fast { BatteryScale::Fast } else { BatteryScale::Full };
    let report = run_battery(scale, &mut |msg| eprintln!("verify: {msg}"))?;
    print!("{}", report.render());
    Ok(report.all_pass())
}

fn cmd_esd(
    input: &GraphInput,
    weight: &WeightArgs,
    matrix: MatrixChoice,
    bins: usize,
    scaling: ScalingChoice,
) -> Result<(), CliError> {
    let g = load_graph(input)?;
    let m = build_matrix(&g, matrix, weight)?;
    let spectrum = sym_eigenvalues(&m)?;
    let hist = esd_histogram(&spectrum, bins, scaling.into())?;
    print!("{}", hist.to_csv());
    Ok(())
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    match &cli.command {
        Command::Gen { n, p, seed, out } => {
            cmd_gen(*n, *p, *seed, out.as_deref())?;
            Ok(true)
        }
        Command::Spectrum { input, weight, matrix } => {
            cmd_spectrum(input, weight, *matrix)?;
            Ok(true)
        }
        Command::Energy { input, weight } => {
            cmd_energy(input, weight)?;
            Ok(true)
        }
        Command::Predict { weight, n, p, quantity } => {
            cmd_predict(weight, *n, *p, quantity.as_deref())?;
            Ok(true)
        }
        Command::Sweep { config, out } => {
            cmd_sweep(config, out.as_deref())?;
            Ok(true)
        }
        Command::Verify { fast } => cmd_verify(*fast),
        Command::Esd { input, weight, matrix, bins, scaling } => {
            cmd_esd(input, weight, *matrix, *bins, *scaling)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        // ignore the error: the pool can only be set once per process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(4),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
