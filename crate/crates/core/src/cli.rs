//! Command-line front end. Exit codes: 0 success, 1 I/O or parse failure,
//! 2 invalid input, 3 non-convergence or divergence.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bench::{bench_dynamics_config, emit_report, run_cv, CvOptions, GridSpec, Mode, ReportFormat, Solver};
use crate::data::{load_csv, make_synthetic, split_cv, CsvOptions, Dataset, LabelColumn, SyntheticKind};
use crate::dynamics::{integrate, integrate_traced, recommend_k, DynamicsConfig, Integrator};
use crate::error::{Error, Result};
use crate::lp::{solve_reference, StandardFormLP};
use crate::mcm::{build_mcm, support_vectors, train, Backend, KPolicy, KernelSpec, McmLayout, McmModel, TrainConfig};

#[derive(Debug, Parser)]
#[command(name = "mcm", version, about = "Minimal Complexity Machine classifiers trained by primal-dual dynamics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Train a model on a CSV dataset and write it as JSON.
    Train(TrainArgs),
    /// Classify the rows of a CSV file with a saved model.
    Predict(PredictArgs),
    /// Cross-validated grid search; writes a markdown, CSV or JSON report.
    Cv(CvArgs),
    /// Integrate the dynamics for one training problem and export the trajectory as CSV.
    Trace(TraceArgs),
    /// Solve an LP given in the text format.
    SolveLp(SolveLpArgs),
    /// Write a synthetic two-class dataset as CSV.
    Synth(SynthArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KernelArg {
    Linear,
    Rbf,
    Poly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum IntegratorArg {
    Euler,
    Rk4,
    Rk45,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Dynamics,
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Md,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    SeparableBlobs,
    GaussianOverlap,
}

#[derive(Debug, Args)]
pub struct DataArgs {
    /// CSV file with one sample per row.
    #[arg(long, value_name = "PATH")]
    pub data: PathBuf,
    /// Label column: `last`, a 0-based index, or a header name.
    #[arg(long = "label-col", value_name = "NAME", default_value = "last")]
    pub label_col: String,
    /// Label value mapped to +1; every other value becomes −1.
    #[arg(long, value_name = "LABEL", default_value = "1")]
    pub positive: String,
}

impl DataArgs {
    fn load(&self) -> Result<Dataset> {
        load_csv(&self.data, &CsvOptions::new(LabelColumn::parse(&self.label_col), self.positive.clone()))
    }
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    /// Coupling gain, or `auto` for 1.1/√λ_min(GᵀG).
    #[arg(long, value_name = "F|auto", default_value = "auto")]
    pub k: String,
    /// Integration step (initial step for rk45). Default 1e-3; `cv` defaults to 2.
    #[arg(long, value_name = "F")]
    pub step: Option<f64>,
    /// Convergence threshold on the derivative ∞-norms.
    #[arg(long, value_name = "F", default_value_t = 1e-6)]
    pub tol: f64,
    /// Integration horizon. Default 1e4; `cv` defaults to 2e4.
    #[arg(long = "max-time", value_name = "F")]
    pub max_time: Option<f64>,
    #[arg(long, value_enum, default_value_t = IntegratorArg::Rk4)]
    pub integrator: IntegratorArg,
    #[arg(long, value_enum, default_value_t = BackendArg::Dynamics)]
    pub backend: BackendArg,
}

impl SolverArgs {
    fn k_policy(&self) -> Result<KPolicy> {
        if self.k.eq_ignore_ascii_case("auto") {
            return Ok(KPolicy::default());
        }
        let k: f64 = self
            .k
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("--k expects a number or `auto`, got {:?}", self.k)))?;
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::InvalidArgument(format!("--k must be positive, got {k}")));
        }
        Ok(KPolicy::Fixed(k))
    }

    fn dynamics(&self, base: DynamicsConfig, seed: u64) -> DynamicsConfig {
        DynamicsConfig {
            step_size: self.step.unwrap_or(base.step_size),
            max_time: self.max_time.unwrap_or(base.max_time),
            convergence_tol: self.tol,
            integrator: match self.integrator {
                IntegratorArg::Euler => Integrator::Euler,
                IntegratorArg::Rk4 => Integrator::Rk4,
                IntegratorArg::Rk45 => Integrator::Rk45,
            },
            rng_seed: seed,
            ..base
        }
    }

    fn backend(&self, seed: u64) -> Result<Backend> {
        Ok(match self.backend {
            BackendArg::Oracle => Backend::Oracle,
            BackendArg::Dynamics => Backend::Dynamics {
                config: self.dynamics(DynamicsConfig::default(), seed),
                k_policy: self.k_policy()?,
            },
        })
    }
}

#[derive(Debug, Args)]
pub struct KernelArgs {
    /// Omit for a linear model.
    #[arg(long, value_enum)]
    pub kernel: Option<KernelArg>,
    /// Polynomial degree.
    #[arg(long, default_value_t = 3)]
    pub degree: u32,
    /// Polynomial offset.
    #[arg(long, default_value_t = 1.0)]
    pub coef0: f64,
}

impl KernelArgs {
    fn spec(&self, gamma: f64) -> Option<KernelSpec> {
        self.kernel.map(|k| match k {
            KernelArg::Linear => KernelSpec::Linear,
            KernelArg::Rbf => KernelSpec::Rbf { gamma },
            KernelArg::Poly => KernelSpec::Polynomial {
                degree: self.degree,
                coef0: self.coef0,
            },
        })
    }
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub kernel: KernelArgs,
    /// RBF width.
    #[arg(long, value_name = "F", default_value_t = 1.0)]
    pub gamma: f64,
    /// Slack penalty.
    #[arg(long = "C", value_name = "F", default_value_t = 1.0)]
    pub c: f64,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Seed for randomized initial conditions.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Model output path.
    #[arg(long, value_name = "PATH", default_value = "model.json")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    /// Model written by `train`.
    #[arg(long, value_name = "PATH")]
    pub model: PathBuf,
    #[command(flatten)]
    pub data: DataArgs,
    /// Write one predicted label per line here instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CvArgs {
    /// CSV dataset; repeat for several.
    #[arg(long, value_name = "PATH", required = true)]
    pub data: Vec<PathBuf>,
    #[arg(long = "label-col", value_name = "NAME", default_value = "last")]
    pub label_col: String,
    /// Positive label; give once for all datasets or once per `--data`.
    #[arg(long, value_name = "LABEL", default_value = "1")]
    pub positive: Vec<String>,
    #[command(flatten)]
    pub kernel: KernelArgs,
    /// RBF width grid (comma separated). Default 2^-4,2^-2,1,4.
    #[arg(long, value_name = "F", value_delimiter = ',')]
    pub gamma: Vec<f64>,
    /// C grid (comma separated). Default 2^-5,2^-3,…,2^5.
    #[arg(long = "C", value_name = "F", value_delimiter = ',')]
    pub c: Vec<f64>,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Fold-assignment seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 5)]
    pub folds: usize,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Report path; stdout when omitted.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Md)]
    pub format: FormatArg,
}

#[derive(Debug, Args)]
pub struct TraceArgs {
    /// CSV dataset; alternatively use `--kind`/`--m`.
    #[arg(long, value_name = "PATH", conflicts_with = "kind")]
    pub data: Option<PathBuf>,
    #[arg(long = "label-col", value_name = "NAME", default_value = "last")]
    pub label_col: String,
    #[arg(long, value_name = "LABEL", default_value = "1")]
    pub positive: String,
    /// Synthetic dataset to trace instead of a file.
    #[arg(long, value_enum)]
    pub kind: Option<KindArg>,
    /// Synthetic sample count.
    #[arg(long, default_value_t = 40)]
    pub m: usize,
    #[command(flatten)]
    pub kernel: KernelArgs,
    #[arg(long, value_name = "F", default_value_t = 1.0)]
    pub gamma: f64,
    #[arg(long = "C", value_name = "F", default_value_t = 1.0)]
    pub c: f64,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Seed for synthetic data and randomized initial conditions.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Record every N-th step.
    #[arg(long = "trace-stride", default_value_t = 100)]
    pub trace_stride: usize,
    /// Trace CSV path; stdout when omitted.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SolveLpArgs {
    /// LP in the text format (`n m max|min`, objective, `g… | p` rows, sign row).
    #[arg(long, value_name = "PATH")]
    pub lp: PathBuf,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the primal solution here, one value per line.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long, value_enum)]
    pub kind: KindArg,
    /// Sample count (even, at least 4).
    #[arg(long, default_value_t = 40)]
    pub m: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// CSV path; stdout when omitted.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

/// Failure classes mapped onto exit codes.
#[derive(Debug)]
enum Failure {
    Error(Error),
    NotConverged,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io { .. } | Error::Parse { .. } | Error::MissingValue { .. } | Error::Json(_) | Error::Csv(_) => 1,
        Error::Divergence { .. } => 3,
        _ => 2,
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::io(p, e)),
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes()).map_err(|e| Error::io("<stdout>", e))
        }
    }
}

fn synth_kind(k: KindArg) -> SyntheticKind {
    match k {
        KindArg::SeparableBlobs => SyntheticKind::SeparableBlobs,
        KindArg::GaussianOverlap => SyntheticKind::GaussianOverlap,
    }
}

fn cmd_train(a: &TrainArgs) -> std::result::Result<(), Failure> {
    let dataset = a.data.load()?;
    let cfg = TrainConfig {
        kernel: a.kernel.spec(a.gamma),
        backend: a.solver.backend(a.seed)?,
        ..TrainConfig::linear(a.c)
    };
    let out = train(&dataset, &cfg)?;
    out.model.save(&a.out)?;
    let sv_tol = match out.model {
        McmModel::Linear(_) => 1e-4,
        McmModel::Kernel(_) => 1e-6,
    };
    let svs = support_vectors(&out.model, &dataset, sv_tol)?;
    let acc = out.model.accuracy(&dataset)?;
    println!(
        "h={:.10} objective={:.10} support_vectors={} training_accuracy={:.2}% converged={}{}",
        out.model.h(),
        out.objective,
        svs.len(),
        acc,
        out.converged,
        out.k.map_or_else(String::new, |k| format!(" k={k:.6}"))
    );
    if out.converged {
        Ok(())
    } else {
        Err(Failure::NotConverged)
    }
}

fn cmd_predict(a: &PredictArgs) -> std::result::Result<(), Failure> {
    let model = McmModel::load(&a.model)?;
    let dataset = a.data.load()?;
    let labels = model.predict_dataset(&dataset)?;
    let mut text = String::new();
    for l in &labels {
        text.push_str(&format!("{l}\n"));
    }
    emit(a.out.as_deref(), &text)?;
    if a.out.is_some() {
        println!("accuracy={:.2}%", model.accuracy(&dataset)?);
    }
    Ok(())
}

fn cmd_cv(a: &CvArgs) -> std::result::Result<(), Failure> {
    if a.positive.len() != 1 && a.positive.len() != a.data.len() {
        return Err(Error::InvalidArgument("give --positive once or once per --data".into()).into());
    }
    let defaults = GridSpec::default();
    let grid = GridSpec {
        c_values: if a.c.is_empty() { defaults.c_values } else { a.c.clone() },
        gamma_values: if a.gamma.is_empty() { defaults.gamma_values } else { a.gamma.clone() },
        k_policy: a.solver.k_policy()?,
    };
    let mode = match a.kernel.spec(1.0) {
        None => Mode::Linear,
        Some(k) => Mode::Kernel(k),
    };
    let options = CvOptions {
        solver: match a.solver.backend {
            BackendArg::Dynamics => Solver::Dynamics,
            BackendArg::Oracle => Solver::Oracle,
        },
        dynamics: a.solver.dynamics(bench_dynamics_config(), 0),
        jobs: a.jobs,
        ..Default::default()
    };
    let mut results = Vec::new();
    for (i, path) in a.data.iter().enumerate() {
        let positive = if a.positive.len() == 1 { &a.positive[0] } else { &a.positive[i] };
        let dataset = load_csv(path, &CsvOptions::new(LabelColumn::parse(&a.label_col), positive.clone()))?;
        let plan = split_cv(&dataset, a.folds, a.seed)?;
        results.push(run_cv(&dataset, mode, &grid, &plan, &options)?);
    }
    let format = match a.format {
        FormatArg::Md => ReportFormat::Markdown,
        FormatArg::Csv => ReportFormat::Csv,
        FormatArg::Json => ReportFormat::Json,
    };
    emit(a.out.as_deref(), &emit_report(&results, format)?)?;
    if results.iter().all(|r| r.all_converged()) {
        Ok(())
    } else {
        Err(Failure::NotConverged)
    }
}

fn cmd_trace(a: &TraceArgs) -> std::result::Result<(), Failure> {
    let dataset = match (&a.data, a.kind) {
        (Some(path), _) => load_csv(path, &CsvOptions::new(LabelColumn::parse(&a.label_col), a.positive.clone()))?,
        (None, Some(kind)) => make_synthetic(synth_kind(kind), a.m, a.seed)?,
        (None, None) => return Err(Error::InvalidArgument("trace needs --data or --kind".into()).into()),
    };
    let kernel = a.kernel.spec(a.gamma);
    let cfg = TrainConfig::linear(a.c);
    let scaled = dataset.scaled(cfg.scaling);
    let lp = build_mcm(&scaled, a.c, kernel, &cfg.options)?;
    let layout = match kernel {
        None => McmLayout::linear(scaled.n_features(), scaled.n_samples()),
        Some(_) => McmLayout::kernel(scaled.n_samples()),
    };
    let k = a.solver.k_policy()?.resolve(&lp)?;
    let config = DynamicsConfig {
        k,
        trace_stride: a.trace_stride,
        ..a.solver.dynamics(DynamicsConfig::default(), a.seed)
    };
    let run = integrate_traced(&lp, &config, &layout.trace_spec())?;
    emit(a.out.as_deref(), &run.trace.to_csv())?;
    let (nx, nz) = run.state.derivative_norms();
    eprintln!(
        "t={} steps={} objective={:.10} dX_inf={nx:.3e} dZ_inf={nz:.3e} converged={}",
        run.state.t,
        run.steps,
        run.objective(),
        run.converged
    );
    if run.converged {
        Ok(())
    } else {
        Err(Failure::NotConverged)
    }
}

fn cmd_solve_lp(a: &SolveLpArgs) -> std::result::Result<(), Failure> {
    let lp = StandardFormLP::read_text(&a.lp)?;
    let (x, objective, converged) = match a.solver.backend {
        BackendArg::Oracle => {
            let sol = solve_reference(&lp)?;
            (sol.primal, sol.objective, true)
        }
        BackendArg::Dynamics => {
            let k = match a.solver.k_policy()? {
                KPolicy::Fixed(k) => k,
                KPolicy::Recommend { safety } => recommend_k(&lp, safety)?.k,
            };
            let config = DynamicsConfig {
                k,
                ..a.solver.dynamics(DynamicsConfig::default(), a.seed)
            };
            let run = integrate(&lp, &config)?;
            let obj = run.objective();
            (run.state.x, obj, run.converged)
        }
    };
    println!("objective {objective}");
    let text: String = x.iter().map(|v| format!("{v}\n")).collect();
    match &a.out {
        Some(p) => emit(Some(p), &text)?,
        None => print!("{text}"),
    }
    if converged {
        Ok(())
    } else {
        Err(Failure::NotConverged)
    }
}

fn cmd_synth(a: &SynthArgs) -> std::result::Result<(), Failure> {
    let d = make_synthetic(synth_kind(a.kind), a.m, a.seed)?;
    let mut text = String::from("x1,x2,label\n");
    for i in 0..d.n_samples() {
        let r = d.row(i);
        text.push_str(&format!("{:.17e},{:.17e},{}\n", r[0], r[1], d.labels()[i]));
    }
    emit(a.out.as_deref(), &text)?;
    Ok(())
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: &Cli) -> ExitCode {
    let result = match &cli.command {
        Command::Train(a) => cmd_train(a),
        Command::Predict(a) => cmd_predict(a),
        Command::Cv(a) => cmd_cv(a),
        Command::Trace(a) => cmd_trace(a),
        Command::SolveLp(a) => cmd_solve_lp(a),
        Command::Synth(a) => cmd_synth(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::NotConverged) => {
            eprintln!("error: integration did not converge within max-time");
            ExitCode::from(3)
        }
        Err(Failure::Error(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
