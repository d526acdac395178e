use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crowdsel::bench::{self, ExperimentConfig, TrialReport, TrialRow};
use crowdsel::io::{self, Input, InputKind};
use crowdsel::pbd::{self, DemandWindow, OpinionVector};
use crowdsel::profile::{self, Experience, SimpleTokenizer, TopicModel};
use crowdsel::smodel::{self, SimilarityMatrix};
use crowdsel::tmodel::{CandidatePool, Method, SaParams};

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Runtime(String),
    #[error(transparent)]
    Core(#[from] crowdsel::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Runtime(_) => 3,
            CliError::Core(e) if e.is_validation() => 2,
            CliError::Core(_) => 3,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Parser)]
#[command(name = "crowdsel", version, about = "Select crowds of workers with diverse opinions")]
struct Cli {
    /// Write the primary output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format; JSON by default, CSV for benchmark reports.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Poisson-Binomial distribution of a crowd's opinions.
    #[command(subcommand)]
    Pbd(PbdCommand),
    /// Select a crowd.
    #[command(subcommand)]
    Select(SelectCommand),
    /// Seeded synthetic experiments.
    #[command(subcommand)]
    Bench(BenchCommand),
    /// Topic models and similarity from worker experience.
    #[command(subcommand)]
    Profile(ProfileCommand),
}

#[derive(Subcommand)]
enum PbdCommand {
    /// Probability mass function of the number of positive opinions.
    Pmf {
        #[arg(long)]
        probs: String,
        #[arg(long, value_enum, default_value_t = PmfMethod::Dftcf)]
        method: PmfMethod,
    },
    /// Probability that the crowd meets the demand window.
    Tau {
        #[arg(long)]
        probs: String,
        #[arg(long)]
        theta1: usize,
        #[arg(long)]
        theta0: usize,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PmfMethod {
    Dftcf,
    Bruteforce,
}

#[derive(Subcommand)]
enum SelectCommand {
    /// Similarity-driven selection from a similarity matrix.
    S {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(short, long)]
        k: usize,
        #[arg(long, value_enum)]
        method: SMethod,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Task-driven selection from opinion probabilities.
    T(TArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SMethod {
    Exact,
    Greedy,
    Random,
}

#[derive(Args)]
struct TArgs {
    /// Comma-separated probabilities; workers are named by index.
    #[arg(long, required_unless_present = "pool", conflicts_with = "pool")]
    probs: Option<String>,
    /// Pool CSV with header `worker_id,p`.
    #[arg(long)]
    pool: Option<PathBuf>,
    #[arg(short, long)]
    k: usize,
    #[arg(long)]
    theta1: usize,
    #[arg(long)]
    theta0: usize,
    #[arg(long)]
    method: String,
    #[arg(long, default_value_t = SaParams::default().t_ini)]
    t_ini: f64,
    #[arg(long, default_value_t = SaParams::default().t_end)]
    t_end: f64,
    #[arg(long, default_value_t = SaParams::default().r)]
    sa_r: u32,
    #[arg(long, default_value_t = SaParams::default().c)]
    sa_c: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum BenchCommand {
    /// Run the experiment described by a JSON config.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Leave the wall-time column empty so reports are byte-identical across runs.
        #[arg(long)]
        no_timing: bool,
    },
}

#[derive(Subcommand)]
enum ProfileCommand {
    /// Fit a topic model to a JSON-lines corpus.
    Fit {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        topics: usize,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long, default_value_t = 200)]
        max_iter: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Worker similarity matrix from experience.
    Similarity {
        #[arg(long)]
        corpus: PathBuf,
        /// Previously fitted model; fitted on the fly when absent.
        #[arg(long, conflicts_with = "topics")]
        model: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        topics: usize,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long, default_value_t = 200)]
        max_iter: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("crowdsel: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: &Cli) -> Result<()> {
    let format = cli.format;
    let output = match &cli.command {
        Command::Pbd(cmd) => pbd_command(cmd, format)?,
        Command::Select(SelectCommand::S { matrix, k, method, seed }) => select_s(matrix, *k, *method, *seed, format)?,
        Command::Select(SelectCommand::T(args)) => select_t(args, format)?,
        Command::Bench(BenchCommand::Run { config, no_timing }) => {
            return bench_run(config, *no_timing, format, cli.out.as_deref());
        }
        Command::Profile(cmd) => profile_command(cmd, format)?,
    };
    emit(cli.out.as_deref(), &output)
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Runtime(format!("cannot read {}: {e}", path.display())))
}

fn load(path: &Path, kind: InputKind) -> Result<Input> {
    io::load_inputs(path, kind).map_err(|e| match e {
        crowdsel::Error::Io(e) => CliError::Runtime(format!("cannot read {}: {e}", path.display())),
        other => CliError::Invalid(format!("{}: {other}", path.display())),
    })
}

fn to_json(value: &impl Serialize) -> String {
    serde_json::to_string_pretty(value).expect("output serializes") + "\n"
}

fn csv_lines(header: &str, rows: impl IntoIterator<Item = String>) -> String {
    let mut s = format!("{header}\n");
    for r in rows {
        s.push_str(&r);
        s.push('\n');
    }
    s
}

fn opinions(probs: &str) -> Result<OpinionVector> {
    Ok(OpinionVector::new(io::parse_probs(probs)?)?)
}

fn pbd_command(cmd: &PbdCommand, format: Option<Format>) -> Result<String> {
    match cmd {
        PbdCommand::Pmf { probs, method } => {
            let p = opinions(probs)?;
            let pmf = match method {
                PmfMethod::Dftcf => pbd::pmf_dftcf(&p),
                PmfMethod::Bruteforce => pbd::pmf_bruteforce(&p)?,
            };
            Ok(match format.unwrap_or(Format::Json) {
                Format::Json => to_json(&json!({ "n": p.len(), "pmf": pmf.mass() })),
                Format::Csv => csv_lines("i,mass", pmf.mass().iter().enumerate().map(|(i, m)| format!("{i},{m}"))),
            })
        }
        PbdCommand::Tau { probs, theta1, theta0 } => {
            let p = opinions(probs)?;
            let w = DemandWindow::new(p.len(), *theta1, *theta0)?;
            let tau = pbd::tau_exact(&p, &w)?;
            Ok(match format.unwrap_or(Format::Json) {
                Format::Json => to_json(&json!({
                    "k": w.k(), "theta1": w.theta1(), "theta0": w.theta0(), "theta2": w.theta2(), "tau": tau
                })),
                Format::Csv => csv_lines("k,theta1,theta0,tau", [format!("{},{},{},{tau}", w.k(), theta1, theta0)]),
            })
        }
    }
}

fn load_matrix(path: &Path) -> Result<SimilarityMatrix> {
    match load(path, InputKind::Matrix)? {
        Input::Matrix(m) => Ok(m),
        _ => unreachable!("matrix input requested"),
    }
}

fn select_s(path: &Path, k: usize, method: SMethod, seed: u64, format: Option<Format>) -> Result<String> {
    let m = load_matrix(path)?;
    let crowd = match method {
        SMethod::Exact => smodel::exact_select(&m, k)?,
        SMethod::Greedy => smodel::greedy_select(&m, k)?,
        SMethod::Random => smodel::random_select(&m, k, seed)?,
    };
    let div = smodel::diversity(&crowd, &m)?;
    let ids: Vec<&str> = crowd.members().iter().map(|&i| m.ids()[i].as_str()).collect();
    let tag = method.to_possible_value().expect("no skipped variants").get_name().to_string();
    Ok(match format.unwrap_or(Format::Json) {
        Format::Json => to_json(&json!({
            "method": tag, "k": k, "members": crowd.members(), "ids": ids, "diversity": div
        })),
        Format::Csv => csv_lines("index,id", crowd.members().iter().zip(&ids).map(|(i, id)| format!("{i},{id}"))),
    })
}

fn select_t(args: &TArgs, format: Option<Format>) -> Result<String> {
    let pool = match (&args.probs, &args.pool) {
        (Some(text), _) => CandidatePool::from_probs(&io::parse_probs(text)?)?,
        (None, Some(path)) => match load(path, InputKind::Pool)? {
            Input::Pool(p) => p,
            _ => unreachable!("pool input requested"),
        },
        (None, None) => return Err(CliError::Invalid("one of --probs or --pool is required".into())),
    };
    let method: Method = args.method.parse()?;
    let w = DemandWindow::new(args.k, args.theta1, args.theta0)?;
    let sa = bench::SaSchedule { t_ini: args.t_ini, t_end: args.t_end, r: args.sa_r, c: args.sa_c };
    let far_future = Instant::now() + std::time::Duration::from_secs(u32::MAX as u64);
    let r = bench::run_tmodel(&pool, &w, method, &sa, args.seed, far_future)?;
    Ok(match format.unwrap_or(Format::Json) {
        Format::Json => to_json(&json!({
            "method": method.tag(),
            "k": args.k,
            "theta1": args.theta1,
            "theta0": args.theta0,
            "subset": r.subset,
            "ids": r.ids,
            "tau": r.tau,
            "objective": r.objective,
        })),
        Format::Csv => csv_lines("index,id", r.subset.iter().zip(&r.ids).map(|(i, id)| format!("{i},{id}"))),
    })
}

fn bench_run(config: &Path, no_timing: bool, format: Option<Format>, out: Option<&Path>) -> Result<()> {
    let cfg = ExperimentConfig::from_json(&read(config)?)?;
    let mut report = bench::run_experiment(&cfg)?;
    if no_timing {
        report = TrialReport { rows: report.rows.into_iter().map(|r| TrialRow { wall_time_s: None, ..r }).collect() };
    }
    match format.unwrap_or(Format::Csv) {
        Format::Json => emit(out, &(report.summary_json() + "\n")),
        Format::Csv => {
            emit(out, &report.to_csv())?;
            if let Some(path) = out {
                emit(Some(&path.with_extension("summary.json")), &(report.summary_json() + "\n"))?;
            }
            Ok(())
        }
    }
}

fn corpus_experiences(path: &Path) -> Result<(Vec<String>, Vec<Experience>)> {
    let records = match load(path, InputKind::Corpus)? {
        Input::Corpus(r) => r,
        _ => unreachable!("corpus input requested"),
    };
    Ok(io::experiences_by_worker(&records, &SimpleTokenizer).into_iter().unzip())
}

fn json_only(format: Option<Format>, what: &str) -> Result<()> {
    match format {
        Some(Format::Csv) => Err(CliError::Invalid(format!("{what} is only available as JSON"))),
        _ => Ok(()),
    }
}

fn profile_command(cmd: &ProfileCommand, format: Option<Format>) -> Result<String> {
    match cmd {
        ProfileCommand::Fit { corpus, topics, tol, max_iter, seed } => {
            json_only(format, "a topic model")?;
            let (_, docs) = corpus_experiences(corpus)?;
            let model = profile::em_fit(&docs, *topics, *tol, *max_iter, *seed)?;
            Ok(to_json(&model))
        }
        ProfileCommand::Similarity { corpus, model, topics, tol, max_iter, seed } => {
            let (ids, docs) = corpus_experiences(corpus)?;
            let model = match model {
                Some(path) => {
                    let m: TopicModel = serde_json::from_str(&read(path)?)
                        .map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?;
                    m.validate()?;
                    m
                }
                None => profile::em_fit(&docs, *topics, *tol, *max_iter, *seed)?,
            };
            let m = profile::experience_similarity_matrix(&docs, &model)?;
            let n = m.n();
            let sim: Vec<f64> = (0..n * n).map(|x| if x / n == x % n { 0.0 } else { m.get(x / n, x % n) }).collect();
            let m = SimilarityMatrix::with_ids(ids, sim)?;
            Ok(match format.unwrap_or(Format::Json) {
                Format::Json => {
                    let rows: Vec<Vec<f64>> =
                        (0..n).map(|i| (0..n).map(|j| if i == j { 0.0 } else { m.get(i, j) }).collect()).collect();
                    to_json(&json!({ "ids": m.ids(), "sim": rows }))
                }
                Format::Csv => io::matrix_to_csv(&m),
            })
        }
    }
}
