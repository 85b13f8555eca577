//! The `simulate`, `fit`, `sample` and `demo` workflows.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use refl_core::de::run_de;
use refl_core::inference::with_gaussian_noise;
use refl_core::kernel::{dynamical_reflectivity, kinematic_reflectivity};
use refl_core::mcmc::{
    posterior_predictive, run_chains, summarize, Chain, McmcConfig, PredictiveDraw,
};
use refl_core::seed::{derive_seed, rng_from_seed};
use refl_core::toy::{
    demo_abscissa, demo_space, synthesize_dataset, AckleyObjective, GaussianPairForward,
    GaussianPairModel,
};
use refl_core::{Dataset, ForwardModel, LogLikelihood, Objective, ParameterSpace, WavevectorGrid};
use serde::Serialize;

use crate::config::{read_model_config, DeSettings, ModelConfig};
use crate::data::{format_columns, read_reflectivity_file};
use crate::error::CliError;
use crate::plot::{self, histogram_svg, scatter_matrix_svg, Plot, Series, Style};
use crate::report::{
    estimates, FitReport, OptimizerSummary, PosteriorReport, Seeds, Timings, TOOL, VERSION,
};

pub const DEFAULT_SEED: u64 = 42;
const PREDICTIVE_DRAWS: usize = 50;
const LOW_ACCEPTANCE: f64 = 0.05;

#[derive(Debug, Parser)]
#[command(
    name = "refl",
    version,
    about = "Neutron reflectivity simulation, fitting and sampling"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute a model reflectivity curve.
    Simulate(SimulateArgs),
    /// Fit a model to data by differential evolution.
    Fit(FitArgs),
    /// Sample parameter uncertainties by Metropolis MCMC.
    Sample(SampleArgs),
    /// Run a built-in demonstration.
    Demo(DemoArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Dynamical,
    Kinematic,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long, default_value_t = 0.005)]
    pub qmin: f64,
    #[arg(long, default_value_t = 0.3)]
    pub qmax: f64,
    #[arg(long, default_value_t = 200)]
    pub points: usize,
    #[arg(long, value_enum, default_value_t = Method::Dynamical)]
    pub method: Method,
    /// Write both kinematic and dynamical columns.
    #[arg(long)]
    pub compare: bool,
    /// Write synthetic data: R perturbed by Gaussian noise of this relative size, plus a dR column.
    #[arg(long, conflicts_with = "compare")]
    pub noise: Option<f64>,
    #[command(flatten)]
    pub seed: SeedArg,
    #[arg(long)]
    pub plot: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SeedArg {
    /// Master seed; every random stream is derived from it.
    #[arg(long, env = "REFL_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub config: PathBuf,
    #[command(flatten)]
    pub seed: SeedArg,
    /// Report destination (JSON).
    #[arg(long)]
    pub out: PathBuf,
    /// Best-fit curve on the data grid; defaults to the report path with a `.curve.dat` extension.
    #[arg(long)]
    pub curve: Option<PathBuf>,
    #[arg(long)]
    pub plot: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub config: PathBuf,
    /// Fit report supplying the start point; updated with the posterior summary.
    #[arg(long)]
    pub report: PathBuf,
    /// Post-burn-in samples (CSV).
    #[arg(long)]
    pub chains: PathBuf,
    /// Start point overriding the report's best fit, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub start: Option<Vec<f64>>,
    #[command(flatten)]
    pub seed: SeedArg,
    #[arg(long)]
    pub plot_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DemoName {
    Ackley,
    Gaussians,
}

#[derive(Debug, Args)]
pub struct DemoArgs {
    #[arg(value_enum)]
    pub name: DemoName,
    #[command(flatten)]
    pub seed: SeedArg,
    #[arg(long)]
    pub out_dir: PathBuf,
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Simulate(a) => simulate(&a),
        Command::Fit(a) => fit(&a),
        Command::Sample(a) => sample(&a),
        Command::Demo(a) => demo(&a),
    }
}

/// Writes through a temporary file in the destination directory, then renames.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    use std::io::Write;
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut file = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(path, e))?;
    file.write_all(contents)
        .map_err(|e| CliError::io(path, e))?;
    file.persist(path)
        .map_err(|e| CliError::io(path, e.error))?;
    log::info!("wrote {}", path.display());
    Ok(())
}

fn create_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

pub fn simulate(args: &SimulateArgs) -> Result<(), CliError> {
    let config = read_model_config(&args.config)?;
    let structure = config.structure();
    let grid = WavevectorGrid::linear(args.qmin, args.qmax, args.points)?;
    let q = grid.q();
    let mut plot = Plot::new("Reflectivity", "q (1/Å)", "R(q)").log_y();
    let text = if args.compare {
        let kin = kinematic_reflectivity(&structure, &grid)?;
        let dynamical = dynamical_reflectivity(&structure, &grid)?;
        plot = plot
            .with(Series::new(q, &kin.r, Style::line(plot::palette(0))).label("kinematic"))
            .with(Series::new(q, &dynamical.r, Style::line(plot::palette(1))).label("dynamical"))
            .hline(1.0, plot::ORANGE, Some("R = 1"));
        format_columns(
            &["q", "R_kinematic", "R_dynamical"],
            &[q, &kin.r, &dynamical.r],
        )
    } else {
        let (curve, label, color) = match args.method {
            Method::Dynamical => (
                dynamical_reflectivity(&structure, &grid)?,
                "dynamical",
                plot::palette(1),
            ),
            Method::Kinematic => (
                kinematic_reflectivity(&structure, &grid)?,
                "kinematic",
                plot::palette(0),
            ),
        };
        plot = plot.with(Series::new(q, &curve.r, Style::line(color)).label(label));
        if args.method == Method::Kinematic {
            plot = plot.hline(1.0, plot::ORANGE, Some("R = 1"));
        }
        match args.noise {
            Some(fraction) => {
                if !(fraction > 0.0 && fraction.is_finite()) {
                    return Err(CliError::Usage(format!(
                        "--noise must be > 0, got {fraction}"
                    )));
                }
                let noise_seed = derive_seed(args.seed.seed, "simulate/noise");
                let data =
                    with_gaussian_noise(q, &curve.r, fraction, f64::MIN_POSITIVE, noise_seed)?;
                plot = plot.with(
                    Series::new(q, data.y(), Style::points(plot::palette(0)))
                        .errors(data.dy())
                        .label("synthetic data"),
                );
                format_columns(&["q", "R", "dR"], &[q, data.y(), data.dy()])
            }
            None => format_columns(&["q", "R"], &[q, &curve.r]),
        }
    };
    write_atomic(&args.out, text.as_bytes())?;
    if let Some(path) = &args.plot {
        write_atomic(path, plot.render().as_bytes())?;
    }
    Ok(())
}

fn load_dataset(path: &Path) -> Result<Dataset, CliError> {
    Ok(read_reflectivity_file(path)?.into_dataset()?)
}

fn free_space(config: &ModelConfig) -> Result<ParameterSpace, CliError> {
    if config.fit.is_empty() {
        return Err(CliError::Usage(
            "the config has no [[fit]] entries, so there is nothing to fit".into(),
        ));
    }
    Ok(config.space()?)
}

fn default_curve_path(report: &Path) -> PathBuf {
    report.with_extension("curve.dat")
}

fn fit_plot<M: ForwardModel>(
    objective: &Objective<M>,
    best: &[f64],
    draws: &[PredictiveDraw],
    log_y: bool,
    x_label: &str,
    y_label: &str,
) -> Result<Plot, CliError> {
    let data = objective.dataset();
    let mut plot = Plot::new(
        if draws.is_empty() {
            "Best fit"
        } else {
            "Posterior predictive"
        },
        x_label,
        y_label,
    );
    if log_y {
        plot = plot.log_y();
    }
    for (i, d) in draws.iter().enumerate() {
        let s = Series::new(data.x(), &d.curve, Style::faint_line(plot::GREY, 0.25));
        plot = plot.with(if i == 0 {
            s.label("posterior samples")
        } else {
            s
        });
    }
    plot = plot
        .with(
            Series::new(data.x(), data.y(), Style::points(plot::palette(0)))
                .errors(data.dy())
                .label("data"),
        )
        .with(
            Series::new(
                data.x(),
                &objective.model_curve(best)?,
                Style::line(plot::ORANGE),
            )
            .label("optimum"),
        );
    Ok(plot)
}

pub fn fit(args: &FitArgs) -> Result<(), CliError> {
    let config = read_model_config(&args.config)?;
    let dataset = load_dataset(&args.data)?;
    let space = free_space(&config)?;
    let objective = Objective::new(dataset, space.clone(), config.forward_model())?;
    let de_seed = derive_seed(args.seed.seed, "de");
    let started = Instant::now();
    let result = run_de(&objective, &config.de.to_config(de_seed))?;
    let elapsed = started.elapsed().as_secs_f64();

    let report = FitReport {
        tool: TOOL.into(),
        version: VERSION.into(),
        parameters: estimates(&space, &result.best_theta),
        best_ln_likelihood: result.best_ln_likelihood,
        n_points: objective.dataset().len(),
        optimizer: Some(OptimizerSummary::from(&result)),
        posterior: None,
        config,
        seeds: Seeds {
            master: args.seed.seed,
            de: Some(de_seed),
            mcmc: None,
        },
        timings: Timings {
            de_seconds: Some(elapsed),
            mcmc_seconds: None,
        },
    };
    let data = objective.dataset();
    let model = objective.model_curve(&result.best_theta)?;
    let curve = format_columns(
        &["q", "R", "dR", "R_fit"],
        &[data.x(), data.y(), data.dy(), &model],
    );
    write_atomic(
        &args.out,
        report.to_json().expect("serializable").as_bytes(),
    )?;
    let curve_path = args
        .curve
        .clone()
        .unwrap_or_else(|| default_curve_path(&args.out));
    write_atomic(&curve_path, curve.as_bytes())?;
    if let Some(path) = &args.plot {
        let plot = fit_plot(&objective, &result.best_theta, &[], true, "q (1/Å)", "R(q)")?;
        write_atomic(path, plot.render().as_bytes())?;
    }
    log::info!(
        "best lnL {:.6} after {} generations",
        result.best_ln_likelihood,
        result.generations_run
    );
    Ok(())
}

/// Post-burn-in samples as CSV: chain index, absolute step, parameters, lnL.
pub fn chains_csv(names: &[String], chains: &[Chain]) -> String {
    let mut out = format!("chain,step,{},ln_likelihood\n", names.join(","));
    for (k, chain) in chains.iter().enumerate() {
        let cut = chain.burn_in.min(chain.len());
        for step in cut..chain.len() {
            let values: Vec<String> = chain.samples[step]
                .iter()
                .map(|v| format!("{v:e}"))
                .collect();
            let _ = writeln!(
                out,
                "{k},{step},{},{:e}",
                values.join(","),
                chain.ln_likelihood[step]
            );
        }
    }
    out
}

/// Fraction of all predictive points lying within three uncertainties of the data.
pub fn predictive_coverage(dataset: &Dataset, draws: &[PredictiveDraw]) -> f64 {
    let mut inside = 0usize;
    let mut total = 0usize;
    for d in draws {
        for ((m, y), dy) in d.curve.iter().zip(dataset.y()).zip(dataset.dy()) {
            total += 1;
            if (m - y).abs() <= 3.0 * dy {
                inside += 1;
            }
        }
    }
    if total == 0 {
        0.0
    } else {
        inside as f64 / total as f64
    }
}

fn file_stem(name: &str) -> String {
    name.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

struct Posterior {
    chains: Vec<Chain>,
    report: PosteriorReport,
    draws: Vec<PredictiveDraw>,
}

fn sample_posterior<M: ForwardModel>(
    objective: &Objective<M>,
    start: &[f64],
    config: &McmcConfig,
    predictive_seed: u64,
) -> Result<Posterior, CliError> {
    let chains = run_chains(objective, start, config)?;
    for (k, chain) in chains.iter().enumerate() {
        let rate = chain.acceptance_rate();
        if rate < LOW_ACCEPTANCE {
            log::warn!(
                "chain {k} accepted only {:.1}% of proposals; set a smaller [mcmc] step_scale or a longer burn_in",
                100.0 * rate
            );
        }
    }
    let summary = summarize(&chains)?;
    let available = summary.n_samples;
    let mut rng = rng_from_seed(predictive_seed);
    let draws = posterior_predictive(
        objective,
        &chains,
        PREDICTIVE_DRAWS.min(available),
        &mut rng,
    )?;
    let coverage = predictive_coverage(objective.dataset(), &draws);
    let report = PosteriorReport::new(objective.space(), summary, &chains, coverage);
    Ok(Posterior {
        chains,
        report,
        draws,
    })
}

fn posterior_plots(
    dir: &Path,
    names: &[String],
    chains: &[Chain],
    markers: &[f64],
    predictive: &Plot,
) -> Result<(), CliError> {
    create_dir(dir)?;
    let pooled = refl_core::mcmc::pooled_samples(chains);
    for (i, name) in names.iter().enumerate() {
        let values: Vec<f64> = pooled.iter().map(|s| s[i]).collect();
        let svg = histogram_svg(&values, 40, name, markers.get(i).copied());
        write_atomic(
            &dir.join(format!("hist_{}.svg", file_stem(name))),
            svg.as_bytes(),
        )?;
    }
    write_atomic(
        &dir.join("scatter_matrix.svg"),
        scatter_matrix_svg(names, &pooled, 2000).as_bytes(),
    )?;
    write_atomic(&dir.join("predictive.svg"), predictive.render().as_bytes())
}

pub fn sample(args: &SampleArgs) -> Result<(), CliError> {
    let config = read_model_config(&args.config)?;
    let dataset = load_dataset(&args.data)?;
    let space = free_space(&config)?;
    let names = config.parameter_names();
    let existing = match std::fs::read_to_string(&args.report) {
        Ok(text) => Some(FitReport::from_json(&text).map_err(|e| {
            CliError::Usage(format!("{}: not a fit report: {e}", args.report.display()))
        })?),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => None,
        Err(e) => return Err(CliError::io(&args.report, e)),
    };
    let start = match (&args.start, &existing) {
        (Some(start), _) => start.clone(),
        (None, Some(report)) => {
            let reported: Vec<&str> = report.parameters.iter().map(|p| p.name.as_str()).collect();
            if reported != names.iter().map(String::as_str).collect::<Vec<_>>() {
                return Err(CliError::Usage(format!(
                    "report parameters {reported:?} do not match the config's fit entries {names:?}"
                )));
            }
            report.best_theta()
        }
        (None, None) => {
            return Err(CliError::Usage(format!(
                "no start point: {} does not exist and --start was not given",
                args.report.display()
            )))
        }
    };
    if start.len() != space.dim() {
        return Err(CliError::Usage(format!(
            "start has {} values but there are {} fit parameters",
            start.len(),
            space.dim()
        )));
    }

    let objective = Objective::new(dataset, space.clone(), config.forward_model())?;
    let mcmc_seed = derive_seed(args.seed.seed, "mcmc");
    let mcmc = config.mcmc.to_config(mcmc_seed, &space);
    let started = Instant::now();
    let posterior = sample_posterior(
        &objective,
        &start,
        &mcmc,
        derive_seed(args.seed.seed, "mcmc/predictive"),
    )?;
    let elapsed = started.elapsed().as_secs_f64();

    let mut report = existing.unwrap_or_else(|| FitReport {
        tool: TOOL.into(),
        version: VERSION.into(),
        parameters: estimates(&space, &start),
        best_ln_likelihood: objective.ln_likelihood(&start),
        n_points: objective.dataset().len(),
        optimizer: None,
        posterior: None,
        config: config.clone(),
        seeds: Seeds {
            master: args.seed.seed,
            de: None,
            mcmc: None,
        },
        timings: Timings::default(),
    });
    report.posterior = Some(posterior.report);
    report.seeds.mcmc = Some(mcmc_seed);
    report.timings.mcmc_seconds = Some(elapsed);

    write_atomic(
        &args.chains,
        chains_csv(&names, &posterior.chains).as_bytes(),
    )?;
    write_atomic(
        &args.report,
        report.to_json().expect("serializable").as_bytes(),
    )?;
    if let Some(dir) = &args.plot_dir {
        let best = report.best_theta();
        let predictive = fit_plot(&objective, &best, &posterior.draws, true, "q (1/Å)", "R(q)")?;
        posterior_plots(dir, &names, &posterior.chains, &best, &predictive)?;
    }
    Ok(())
}

pub fn demo(args: &DemoArgs) -> Result<(), CliError> {
    create_dir(&args.out_dir)?;
    match args.name {
        DemoName::Ackley => demo_ackley(args.seed.seed, &args.out_dir),
        DemoName::Gaussians => demo_gaussians(args.seed.seed, &args.out_dir),
    }
}

#[derive(Debug, Serialize)]
struct AckleyReport {
    demo: &'static str,
    note: &'static str,
    seed: u64,
    de_seed: u64,
    de: DeSettings,
    half_width: f64,
    best_theta: Vec<f64>,
    best_value: f64,
    distance_from_origin: f64,
    generations_run: usize,
    best_per_generation: Vec<f64>,
    timings: Timings,
}

pub const ACKLEY_HALF_WIDTH: f64 = 5.0;

fn demo_ackley(seed: u64, dir: &Path) -> Result<(), CliError> {
    let objective = AckleyObjective::new(ACKLEY_HALF_WIDTH)?;
    let settings = DeSettings::default();
    let de_seed = derive_seed(seed, "de");
    let started = Instant::now();
    let result = run_de(&objective, &settings.to_config(de_seed))?;
    let elapsed = started.elapsed().as_secs_f64();

    let population = settings.population;
    let mut csv = String::from("generation");
    for i in 0..population {
        let _ = write!(csv, ",candidate_{i}");
    }
    csv.push('\n');
    for (g, generation) in result.history.iter().enumerate() {
        let values: Vec<String> = generation
            .ln_likelihood
            .iter()
            .map(|v| format!("{v:e}"))
            .collect();
        let _ = writeln!(csv, "{g},{}", values.join(","));
    }

    let generations: Vec<f64> = (0..result.history.len()).map(|g| g as f64).collect();
    let mut plot = Plot::new(
        "Differential evolution on the negative Ackley function",
        "generation",
        "lnL",
    );
    for i in 0..population {
        let trajectory: Vec<f64> = result.history.iter().map(|g| g.ln_likelihood[i]).collect();
        plot = plot.with(Series::new(
            &generations,
            &trajectory,
            Style::faint_line(plot::palette(i), 0.7),
        ));
    }
    let best: Vec<f64> = result
        .history
        .iter()
        .map(|g| g.best_ln_likelihood)
        .collect();
    plot = plot.with(Series::new(&generations, &best, Style::line("#000000")).label("best"));

    let report = AckleyReport {
        demo: "ackley",
        note: "search box [-5, 5]^2 and population size are this tool's defaults",
        seed,
        de_seed,
        de: settings,
        half_width: ACKLEY_HALF_WIDTH,
        distance_from_origin: result.best_theta.iter().map(|v| v * v).sum::<f64>().sqrt(),
        best_theta: result.best_theta,
        best_value: result.best_ln_likelihood,
        generations_run: result.generations_run,
        best_per_generation: best,
        timings: Timings {
            de_seconds: Some(elapsed),
            mcmc_seconds: None,
        },
    };
    write_atomic(&dir.join("ackley.json"), to_json(&report).as_bytes())?;
    write_atomic(&dir.join("ackley_trajectories.csv"), csv.as_bytes())?;
    write_atomic(
        &dir.join("ackley_trajectories.svg"),
        plot.render().as_bytes(),
    )
}

pub const GAUSSIAN_NOISE_FRACTION: f64 = 0.05;
pub const GAUSSIAN_NOISE_FLOOR: f64 = 0.01;

#[derive(Debug, Serialize)]
struct GaussianFit {
    best_theta: Vec<f64>,
    best_ln_likelihood: f64,
    generations_run: usize,
}

#[derive(Debug, Serialize)]
struct GaussianReport {
    demo: &'static str,
    note: &'static str,
    seed: u64,
    data_seed: u64,
    de_seed: u64,
    mcmc_seed: u64,
    truth: [f64; 4],
    width: f64,
    noise_fraction: f64,
    noise_floor: f64,
    fit: GaussianFit,
    posterior: PosteriorReport,
    /// |posterior mean - truth| / posterior std for each parameter.
    truth_z_scores: Vec<f64>,
    timings: Timings,
}

fn demo_gaussians(seed: u64, dir: &Path) -> Result<(), CliError> {
    let truth = GaussianPairModel::demo_truth();
    let x = demo_abscissa();
    let data_seed = derive_seed(seed, "demo/data");
    let dataset = synthesize_dataset(
        &truth,
        &x,
        GAUSSIAN_NOISE_FRACTION,
        GAUSSIAN_NOISE_FLOOR,
        data_seed,
    )?;
    let space = demo_space();
    let objective = Objective::new(
        dataset,
        space.clone(),
        GaussianPairForward { width: truth.width },
    )?;

    let de_seed = derive_seed(seed, "de");
    let started = Instant::now();
    let fit = run_de(&objective, &DeSettings::default().to_config(de_seed))?;
    let de_seconds = started.elapsed().as_secs_f64();

    let mcmc_seed = derive_seed(seed, "mcmc");
    let mut mcmc = McmcConfig::for_space(&space);
    mcmc.seed = mcmc_seed;
    let started = Instant::now();
    let posterior = sample_posterior(
        &objective,
        &fit.best_theta,
        &mcmc,
        derive_seed(seed, "mcmc/predictive"),
    )?;
    let mcmc_seconds = started.elapsed().as_secs_f64();

    let names = space.names().to_vec();
    let summary = &posterior.report.summary;
    let truth_theta = truth.theta();
    let truth_z_scores = (0..4)
        .map(|i| (summary.mean[i] - truth_theta[i]).abs() / summary.std[i])
        .collect();

    let data = objective.dataset();
    let data_text = format_columns(&["x", "y", "dy"], &[data.x(), data.y(), data.dy()]);
    let predictive = fit_plot(
        &objective,
        &fit.best_theta,
        &posterior.draws,
        false,
        "x",
        "y",
    )?;
    let report = GaussianReport {
        demo: "gaussians",
        note:
            "truth, width, noise level and x grid are illustrative defaults, not published values",
        seed,
        data_seed,
        de_seed,
        mcmc_seed,
        truth: truth_theta,
        width: truth.width,
        noise_fraction: GAUSSIAN_NOISE_FRACTION,
        noise_floor: GAUSSIAN_NOISE_FLOOR,
        fit: GaussianFit {
            best_theta: fit.best_theta.clone(),
            best_ln_likelihood: fit.best_ln_likelihood,
            generations_run: fit.generations_run,
        },
        posterior: posterior.report,
        truth_z_scores,
        timings: Timings {
            de_seconds: Some(de_seconds),
            mcmc_seconds: Some(mcmc_seconds),
        },
    };
    write_atomic(&dir.join("gaussians_data.dat"), data_text.as_bytes())?;
    write_atomic(&dir.join("gaussians.json"), to_json(&report).as_bytes())?;
    write_atomic(
        &dir.join("gaussians_chains.csv"),
        chains_csv(&names, &posterior.chains).as_bytes(),
    )?;
    posterior_plots(dir, &names, &posterior.chains, &truth_theta, &predictive)
}
