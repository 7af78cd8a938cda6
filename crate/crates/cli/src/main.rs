//! `polypick`: command-line front end for grids, rational inner functions,
//! Pick classification and uniqueness certificates.
//!
//! Exit codes: 0 when the command succeeded (and, for `certify`, `refine`
//! and `sweep`, the check passed), 2 when a check ran but failed, 1 on usage,
//! input or validation errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use polypick::geometry::{generate_nodes, BasePoints};
use polypick::json::{self, ComplexJson};
use polypick::pick::{classify_problem, reconstruct_unique};
use polypick::report::certificate_csv;
use polypick::sample::random_rif;
use polypick::verify::{
    certify_uniqueness_with, certify_with_values, equality_sweep, refined_certify_with, sample_nodes, sharpness_demo,
    ChainInterpolant, SweepParams,
};
use polypick::{
    AnalyticDisc, Execution, GridConfig, NodeGrid, PickProblem, RationalInnerFunction, Tolerances, UniquenessCertificate,
    C64,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

const PROFILE_ENV: &str = "POLYPICK_TOLERANCE_PROFILE";

#[derive(Debug, Parser)]
#[command(name = "polypick", version, about = "Pick interpolation uniqueness sets on the polydisc")]
struct RunConfig {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate the N^n node lattice on N^(n-1) flat discs.
    GenNodes(GenNodes),
    /// Validate a rational inner function (or draw a random one) and write it.
    MakeRif(MakeRif),
    /// Evaluate a rational inner function at points of the open polydisc.
    Eval(Eval),
    /// Restrict a rational inner function to an analytic disc.
    Restrict(Restrict),
    /// Classify a one-variable Pick problem.
    Pick(Pick),
    /// Run the uniqueness certificate with N nodes on every disc.
    Certify(Certify),
    /// Run the certificate with deg + 1 nodes per disc.
    Refine(Refine),
    /// Two distinct interpolants after dropping one node of a disc.
    Sharpness(Sharpness),
    /// Compare f with the node-data interpolant along nearby Möbius graphs.
    Sweep(Sweep),
}

#[derive(Debug, Args)]
struct Output {
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Schedule {
    Parallel,
    Sequential,
}

#[derive(Debug, Args)]
struct TolArgs {
    /// Tolerance preset: default, strict or loose.
    #[arg(long, env = PROFILE_ENV, default_value = "default")]
    profile: String,
    #[arg(long)]
    psd_tol: Option<f64>,
    #[arg(long)]
    rank_tol: Option<f64>,
    #[arg(long)]
    residual_tol: Option<f64>,
    /// Seed for Möbius choices and fresh sample points.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value = "parallel")]
    schedule: Schedule,
}

impl TolArgs {
    fn tolerances(&self) -> Result<Tolerances> {
        let mut t = Tolerances::profile(&self.profile)?;
        if let Some(v) = self.psd_tol {
            t.pick.psd = v;
        }
        if let Some(v) = self.rank_tol {
            t.pick.rank = v;
        }
        if let Some(v) = self.residual_tol {
            t.residual = v;
            t.consistency = v;
        }
        if let Some(s) = self.seed {
            t.seed = s;
        }
        t.validate()?;
        Ok(t)
    }

    fn exec(&self) -> Execution {
        match self.schedule {
            Schedule::Parallel => Execution::Parallel,
            Schedule::Sequential => Execution::Sequential,
        }
    }
}

#[derive(Debug, Args)]
struct GenNodes {
    /// Strict degree bound N (nodes per disc).
    #[arg(long = "N")]
    big_n: usize,
    /// Number of variables.
    #[arg(long = "n")]
    n: usize,
    /// Draw random base points from this seed; without it the base points
    /// are j/(N+1).
    #[arg(long)]
    seed: Option<u64>,
    /// JSON file with multiplier rows (n-1 rows of N unimodular numbers).
    #[arg(long)]
    multipliers: Option<PathBuf>,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct MakeRif {
    /// JSON file `{"tau": .., "d": [..], "q": ..}`.
    #[arg(long, conflicts_with = "random", required_unless_present = "random")]
    spec: Option<PathBuf>,
    /// Draw a random function instead.
    #[arg(long, requires = "n")]
    random: bool,
    #[arg(long = "n")]
    n: Option<usize>,
    #[arg(long, default_value_t = 2)]
    max_degree: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct Eval {
    #[arg(long)]
    rif: PathBuf,
    /// JSON array of points, each an array of complex coordinates.
    #[arg(long)]
    points: PathBuf,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct Restrict {
    #[arg(long)]
    rif: PathBuf,
    /// JSON file holding an analytic disc.
    #[arg(long, conflicts_with_all = ["grid", "index"], required_unless_present = "grid")]
    disc: Option<PathBuf>,
    /// Take the disc from a grid file instead.
    #[arg(long, requires = "index")]
    grid: Option<PathBuf>,
    #[arg(long)]
    index: Option<usize>,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct Pick {
    #[arg(long)]
    problem: PathBuf,
    /// Also write the unique interpolant here when there is one.
    #[arg(long)]
    reconstruct: Option<PathBuf>,
    #[command(flatten)]
    tol: TolArgs,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct CertArgs {
    #[arg(long)]
    rif: PathBuf,
    #[arg(long)]
    grid: PathBuf,
    /// Certificate JSON path.
    #[arg(long, default_value = "certificate.json")]
    out: PathBuf,
    /// CSV summary path; defaults to the certificate path with a .csv extension.
    #[arg(long)]
    csv: Option<PathBuf>,
    #[command(flatten)]
    tol: TolArgs,
}

#[derive(Debug, Args)]
struct Certify {
    #[command(flatten)]
    common: CertArgs,
    /// Node values to certify instead of sampling f (JSON array, grid order).
    #[arg(long)]
    values: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Refine {
    #[command(flatten)]
    common: CertArgs,
}

#[derive(Debug, Args)]
struct Sharpness {
    #[arg(long)]
    rif: PathBuf,
    #[arg(long)]
    grid: PathBuf,
    /// Disc index; the first disc on which f has degree N-1 when omitted.
    #[arg(long)]
    disc: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    z_re: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    z_im: f64,
    #[command(flatten)]
    tol: TolArgs,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct Sweep {
    #[arg(long)]
    rif: PathBuf,
    /// Two-variable grid; the sweep centres on its multiplier row.
    #[arg(long)]
    grid: PathBuf,
    /// Node values for the interpolant (JSON array, grid order); sampled from f when omitted.
    #[arg(long)]
    values: Option<PathBuf>,
    #[arg(long, default_value_t = 3)]
    t_steps: usize,
    #[arg(long, default_value_t = 6)]
    a_angles: usize,
    #[arg(long, default_value_t = 8)]
    points_per_map: usize,
    #[command(flatten)]
    tol: TolArgs,
    #[command(flatten)]
    output: Output,
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn emit<T: Serialize>(output: &Output, value: &T) -> Result<()> {
    let text = json::to_string_pretty(value) + "\n";
    match &output.out {
        Some(path) => write_text(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn complex_list(path: &Path) -> Result<Vec<C64>> {
    let raw: Vec<ComplexJson> = read_json(path)?;
    Ok(raw.into_iter().map(Into::into).collect())
}

fn gen_nodes(args: &GenNodes) -> Result<ExitCode> {
    let multipliers = match &args.multipliers {
        Some(path) => {
            let rows: Vec<Vec<ComplexJson>> = read_json(path)?;
            Some(rows.into_iter().map(|r| r.into_iter().map(Into::into).collect()).collect())
        }
        None => None,
    };
    let base_points = args.seed.map_or(BasePoints::Default, |seed| BasePoints::Random { seed });
    let grid = generate_nodes(args.big_n, args.n, &GridConfig { multipliers, base_points })?;
    emit(&args.output, &grid)?;
    Ok(ExitCode::SUCCESS)
}

fn make_rif(args: &MakeRif) -> Result<ExitCode> {
    let f: RationalInnerFunction = match (&args.spec, args.n) {
        (Some(path), _) => read_json(path)?,
        (None, None) => bail!("--random needs --n"),
        (None, Some(n)) => {
            if n == 0 {
                bail!("--n must be positive");
            }
            random_rif(&mut ChaCha8Rng::seed_from_u64(args.seed), n, args.max_degree)
        }
    };
    emit(&args.output, &f)?;
    Ok(ExitCode::SUCCESS)
}

fn eval(args: &Eval) -> Result<ExitCode> {
    let f: RationalInnerFunction = read_json(&args.rif)?;
    let points: Vec<Vec<ComplexJson>> = read_json(&args.points)?;
    let values = points
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let z: Vec<C64> = p.iter().map(|&c| c.into()).collect();
            f.eval(&z).map(ComplexJson::from).with_context(|| format!("point {i}"))
        })
        .collect::<Result<Vec<_>>>()?;
    emit(&args.output, &values)?;
    Ok(ExitCode::SUCCESS)
}

fn restrict(args: &Restrict) -> Result<ExitCode> {
    let f: RationalInnerFunction = read_json(&args.rif)?;
    let disc: AnalyticDisc = match (&args.disc, &args.grid, args.index) {
        (Some(path), _, _) => read_json(path)?,
        (None, Some(path), Some(k)) => {
            let grid: NodeGrid = read_json(path)?;
            grid.discs().get(k).cloned().with_context(|| format!("grid has {} discs, no index {k}", grid.discs().len()))?
        }
        _ => bail!("either --disc or --grid with --index is required"),
    };
    disc.validate()?;
    emit(&args.output, &f.restrict(&disc)?)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct PickOutput {
    classification: &'static str,
    verdict: polypick::UniquenessVerdict,
}

fn pick(args: &Pick) -> Result<ExitCode> {
    let tol = args.tol.tolerances()?;
    let problem: PickProblem = read_json(&args.problem)?;
    let (matrix, verdict) = classify_problem(&problem, &tol.pick)?;
    let classification = match (verdict.solvable, verdict.unique) {
        (false, _) => "unsolvable",
        (true, true) => "unique",
        (true, false) => "non-unique",
    };
    if let Some(path) = &args.reconstruct {
        if !verdict.unique {
            bail!("--reconstruct needs a unique problem, this one is {classification}");
        }
        let g = reconstruct_unique(&problem, &matrix, &tol.pick)?;
        write_text(path, &(json::to_string_pretty(&g) + "\n"))?;
    }
    emit(&args.output, &PickOutput { classification, verdict })?;
    Ok(ExitCode::SUCCESS)
}

fn finish_certificate(args: &CertArgs, cert: &UniquenessCertificate) -> Result<ExitCode> {
    write_text(&args.out, &(json::to_string_pretty(cert) + "\n"))?;
    let csv_path = args.csv.clone().unwrap_or_else(|| args.out.with_extension("csv"));
    write_text(&csv_path, &certificate_csv(cert)?)?;
    if cert.overall {
        println!("certificate passed; max residual {:e}", cert.max_residual());
        Ok(ExitCode::SUCCESS)
    } else {
        println!("certificate failed at {}", cert.failing_stage.as_deref().unwrap_or("unknown stage"));
        Ok(ExitCode::from(2))
    }
}

fn certify(args: &Certify) -> Result<ExitCode> {
    let c = &args.common;
    let tol = c.tol.tolerances()?;
    let f: RationalInnerFunction = read_json(&c.rif)?;
    let grid: NodeGrid = read_json(&c.grid)?;
    let cert = match &args.values {
        Some(path) => certify_with_values(&f, &grid, &complex_list(path)?, &tol, c.tol.exec())?,
        None => certify_uniqueness_with(&f, &grid, &tol, c.tol.exec())?,
    };
    finish_certificate(c, &cert)
}

fn refine(args: &Refine) -> Result<ExitCode> {
    let c = &args.common;
    let tol = c.tol.tolerances()?;
    let f: RationalInnerFunction = read_json(&c.rif)?;
    let grid: NodeGrid = read_json(&c.grid)?;
    finish_certificate(c, &refined_certify_with(&f, &grid, &tol, c.tol.exec())?)
}

fn sharpness(args: &Sharpness) -> Result<ExitCode> {
    let tol = args.tol.tolerances()?;
    let f: RationalInnerFunction = read_json(&args.rif)?;
    let grid: NodeGrid = read_json(&args.grid)?;
    let disc = match args.disc {
        Some(k) => k,
        None => {
            let target = grid.degree_bound() - 1;
            let mut found = None;
            for (k, d) in grid.discs().iter().enumerate() {
                if f.disc_degree(d)? == target {
                    found = Some(k);
                    break;
                }
            }
            found.with_context(|| format!("no disc on which f has degree {target}"))?
        }
    };
    let report = sharpness_demo(&f, &grid, disc, C64::new(args.z_re, args.z_im), &tol.pick)?;
    emit(&args.output, &report)?;
    Ok(ExitCode::SUCCESS)
}

fn sweep(args: &Sweep) -> Result<ExitCode> {
    let tol = args.tol.tolerances()?;
    let f: RationalInnerFunction = read_json(&args.rif)?;
    let grid: NodeGrid = read_json(&args.grid)?;
    if grid.dim() != 2 {
        bail!("sweep needs a two-variable grid, got n = {}", grid.dim());
    }
    let values = match &args.values {
        Some(path) => complex_list(path)?,
        None => sample_nodes(&f, &grid)?,
    };
    let chain = ChainInterpolant::from_values(&grid, &values, &tol.pick)?;
    let params = SweepParams {
        t_steps: args.t_steps,
        a_angles: args.a_angles,
        points_per_map: args.points_per_map,
        seed: tol.seed,
        ..SweepParams::default()
    };
    let report = equality_sweep(&f, &chain, &grid.tau_table()[0], &params, args.tol.exec())?;
    emit(&args.output, &report)?;
    let passed = report.failed_maps == 0 && report.max_deviation <= tol.residual;
    Ok(if passed { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

fn run(config: &RunConfig) -> Result<ExitCode> {
    match &config.command {
        Command::GenNodes(a) => gen_nodes(a),
        Command::MakeRif(a) => make_rif(a),
        Command::Eval(a) => eval(a),
        Command::Restrict(a) => restrict(a),
        Command::Pick(a) => pick(a),
        Command::Certify(a) => certify(a),
        Command::Refine(a) => refine(a),
        Command::Sharpness(a) => sharpness(a),
        Command::Sweep(a) => sweep(a),
    }
}

fn main() -> ExitCode {
    let config = match RunConfig::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&config) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
