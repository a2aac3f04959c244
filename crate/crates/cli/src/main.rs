use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nonstat_spectral::experiment::{
    run_bench, run_fig1, run_fig2, BandwidthSource, ExperimentConfig, ProfileSpec,
};
use nonstat_spectral::io::{
    self as nio, read_ensemble, read_spectrum, write_bispectrum, write_ensemble, write_json,
    write_lag_function, write_spectrum,
};
use nonstat_spectral::sampling::{
    fractional_bandwidth, make_plan, reconstruction_mse, sinc_reconstruct, subsample,
};
use nonstat_spectral::spectral::{
    averaged_autocorrelation, check_assumptions, estimate_autocorrelation,
    estimate_generalized_psd, estimate_psd, verify_wk_convergence, Normalization,
};
use nonstat_spectral::synthesis::synthesize;
use nonstat_spectral::{Ensemble, Error, FrequencyGrid, Result, SamplingPlan, TemporalModel};

#[derive(Parser)]
#[command(
    name = "nonstat",
    version,
    about = "Spectral analysis and subsampling of nonstationary ensembles"
)]
struct Cli {
    /// Experiment configuration JSON; command-line flags override its values
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Output file for single-artifact commands, output directory for
    /// `experiment` and `bench`. Single artifacts go to stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Default)]
struct ModelArgs {
    #[arg(long = "K")]
    len: Option<usize>,
    #[arg(long = "P")]
    realizations: Option<usize>,
    /// Feedback coefficients a_1..a_q, comma separated (empty for none)
    #[arg(long, value_parser = parse_list)]
    ar: Option<Coeffs>,
    /// Feedforward coefficients b_0..b_r, comma separated
    #[arg(long, value_parser = parse_list)]
    ma: Option<Coeffs>,
    /// paper | const:<v> | file:<path>
    #[arg(long)]
    profile: Option<String>,
    /// iid | ar1:<rho>
    #[arg(long)]
    temporal: Option<String>,
    /// Samples to synthesize and discard before the record
    #[arg(long)]
    warmup: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize filtered nonstationary white noise to ensemble CSV
    Synth(ModelArgs),
    /// Ensemble PSD of the first N samples
    Psd {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        window: Option<usize>,
    },
    /// Time-averaged autocorrelation
    AvgAcf {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "unbiased")]
        normalization: String,
    },
    /// Generalized 2-D PSD on the K-point DFT grid, or a uniform grid of the given size
    GenPsd {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Sup-norm distance of windowed PSDs to the transformed averaged autocorrelation
    VerifyWk {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_delimiter = ',')]
        windows: Vec<usize>,
    },
    /// Boundedness and summability diagnostics of the autocorrelation
    CheckAssumptions {
        #[arg(long)]
        input: PathBuf,
    },
    /// Fractional bandwidth of a spectrum CSV and the resulting sampling plan
    Bandwidth {
        #[arg(long)]
        spectrum: PathBuf,
        #[arg(long, default_value_t = 0.9)]
        fraction: f64,
        /// Cap on the decimation factor (default: a quarter of the grid size)
        #[arg(long)]
        max_decimation: Option<usize>,
    },
    /// Keep every M-th sample
    Subsample {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        plan: PathBuf,
    },
    /// Sinc reconstruction of a subsampled ensemble
    Reconstruct {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        plan: PathBuf,
        /// Output length (default: recorded in the input header)
        #[arg(long = "K")]
        len: Option<usize>,
    },
    /// Normalised reconstruction error in percent
    Mse {
        #[arg(long)]
        original: PathBuf,
        #[arg(long)]
        reconstructed: PathBuf,
    },
    /// Run a full experiment and write its CSV/JSON bundle
    Experiment {
        #[command(subcommand)]
        which: Experiment,
    },
    /// Time the PSD and generalized-PSD pipelines
    Bench {
        /// Sizes as PxT, comma separated
        #[arg(long, value_delimiter = ',', default_value = "64x256,64x512,64x1024")]
        sizes: Vec<String>,
        #[arg(long, default_value_t = 5)]
        reps: usize,
    },
}

#[derive(Args)]
struct ExperimentArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, value_delimiter = ',')]
    windows: Option<Vec<usize>>,
    #[arg(long)]
    fraction: Option<f64>,
    /// estimated | theoretical
    #[arg(long)]
    bandwidth_source: Option<String>,
    #[arg(long)]
    max_decimation: Option<usize>,
}

#[derive(Subcommand)]
enum Experiment {
    /// Windowed PSDs converging to the transformed averaged autocorrelation
    Fig1(ExperimentArgs),
    /// Fractional-bandwidth subsampling and reconstruction
    Fig2(ExperimentArgs),
}

#[derive(Clone)]
struct Coeffs(Vec<f64>);

fn parse_list(s: &str) -> std::result::Result<Coeffs, String> {
    if s.trim().is_empty() {
        return Ok(Coeffs(Vec::new()));
    }
    s.split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| format!("'{v}' is not a number"))
        })
        .collect::<std::result::Result<_, _>>()
        .map(Coeffs)
}

fn parse_size(s: &str) -> Result<(usize, usize)> {
    let (p, t) = s
        .split_once('x')
        .ok_or_else(|| Error::InvalidArgument(format!("size '{s}' is not PxT")))?;
    let num = |v: &str| {
        v.parse::<usize>()
            .map_err(|_| Error::InvalidArgument(format!("size '{s}' is not PxT")))
    };
    Ok((num(p)?, num(t)?))
}

impl ModelArgs {
    fn apply(&self, cfg: &mut ExperimentConfig) -> Result<()> {
        if let Some(k) = self.len {
            cfg.len = k;
        }
        if let Some(p) = self.realizations {
            cfg.realizations = p;
        }
        if let Some(ar) = &self.ar {
            cfg.ar = ar.0.clone();
        }
        if let Some(ma) = &self.ma {
            cfg.ma = ma.0.clone();
        }
        if let Some(profile) = &self.profile {
            cfg.profile = profile.parse::<ProfileSpec>()?;
        }
        if let Some(t) = &self.temporal {
            cfg.temporal = t.parse::<TemporalModel>()?;
        }
        if let Some(w) = self.warmup {
            cfg.warmup = w;
        }
        Ok(())
    }
}

impl ExperimentArgs {
    fn apply(&self, cfg: &mut ExperimentConfig) -> Result<()> {
        self.model.apply(cfg)?;
        if let Some(w) = &self.windows {
            cfg.windows = w.clone();
        }
        if let Some(f) = self.fraction {
            cfg.fraction = f;
        }
        if let Some(src) = &self.bandwidth_source {
            cfg.bandwidth_source = src.parse::<BandwidthSource>()?;
        }
        if let Some(m) = self.max_decimation {
            cfg.max_decimation = Some(m);
        }
        Ok(())
    }
}

fn load_ensemble(path: &Path) -> Result<Ensemble> {
    read_ensemble(BufReader::new(nio::open(path)?))
}

fn load_plan(path: &Path) -> Result<SamplingPlan> {
    let plan: SamplingPlan = serde_json::from_reader(BufReader::new(nio::open(path)?))?;
    plan.validate()?;
    Ok(plan)
}

/// Runs `write` against the `--out` file, or stdout.
fn emit(out: Option<&Path>, write: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match out {
        Some(path) => {
            let mut w = nio::create(path)?;
            write(&mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            write(&mut lock)?;
            lock.flush()?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    }
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    let out = cli.out.as_deref();

    match cli.command {
        Command::Synth(model) => {
            model.apply(&mut cfg)?;
            cfg.validate()?;
            let x = synthesize(
                &cfg.variance_profile()?,
                &cfg.filter()?,
                cfg.realizations,
                cfg.temporal,
                cfg.seed,
                cfg.warmup,
            )?;
            emit(out, |w| write_ensemble(&x, w))
        }
        Command::Psd { input, window } => {
            let x = load_ensemble(&input)?;
            let s = estimate_psd(&x, window.unwrap_or(x.len()))?;
            emit(out, |w| write_spectrum(&s, w))
        }
        Command::AvgAcf {
            input,
            normalization,
        } => {
            let norm: Normalization = normalization.parse()?;
            let x = load_ensemble(&input)?;
            let lag = averaged_autocorrelation(&estimate_autocorrelation(&x), norm);
            emit(out, |w| write_lag_function(&lag, w))
        }
        Command::GenPsd { input, grid } => {
            let x = load_ensemble(&input)?;
            let g = match grid {
                Some(n) => FrequencyGrid::uniform(n),
                None => FrequencyGrid::dft(x.len()),
            };
            let bs = estimate_generalized_psd(&estimate_autocorrelation(&x), &g, &g)?;
            emit(out, |w| write_bispectrum(&bs, w))
        }
        Command::VerifyWk { input, windows } => {
            let x = load_ensemble(&input)?;
            let windows = if windows.is_empty() {
                cfg.windows.clone()
            } else {
                windows
            };
            let c = verify_wk_convergence(&x, &windows)?;
            emit(out, |w| {
                writeln!(w, "window,distance")?;
                for (n, d) in c.windows.iter().zip(&c.distances) {
                    writeln!(w, "{n},{d:?}")?;
                }
                Ok(())
            })
        }
        Command::CheckAssumptions { input } => {
            let x = load_ensemble(&input)?;
            let report = check_assumptions(&estimate_autocorrelation(&x));
            emit(out, |w| write_json(&report, w))
        }
        Command::Bandwidth {
            spectrum,
            fraction,
            max_decimation,
        } => {
            let s = read_spectrum(BufReader::new(File::open(&spectrum)?))?;
            let b = fractional_bandwidth(&s, fraction)?;
            let plan = make_plan(b, fraction, max_decimation.unwrap_or(s.len() / 4))?;
            emit(out, |w| write_json(&plan, w))
        }
        Command::Subsample { input, plan } => {
            let x = load_ensemble(&input)?;
            let s = subsample(&x, &load_plan(&plan)?)?;
            emit(out, |w| write_ensemble(&s, w))
        }
        Command::Reconstruct { input, plan, len } => {
            let s = load_ensemble(&input)?;
            let len = len
                .or(s.decimation().map(|d| d.original_len))
                .ok_or_else(|| Error::InvalidArgument("output length unknown; pass --K".into()))?;
            let y = sinc_reconstruct(&s, &load_plan(&plan)?, len)?;
            emit(out, |w| write_ensemble(&y, w))
        }
        Command::Mse {
            original,
            reconstructed,
        } => {
            let report =
                reconstruction_mse(&load_ensemble(&original)?, &load_ensemble(&reconstructed)?)?;
            emit(out, |w| write_json(&report, w))
        }
        Command::Experiment { which } => {
            if let Some(dir) = out {
                cfg.out_dir = dir.to_path_buf();
            }
            match which {
                Experiment::Fig1(args) => {
                    args.apply(&mut cfg)?;
                    let res = run_fig1(&cfg)?;
                    for (n, d) in res
                        .convergence
                        .windows
                        .iter()
                        .zip(&res.convergence.distances)
                    {
                        println!("N={n:<6} sup distance {d:.6e}");
                    }
                }
                Experiment::Fig2(args) => {
                    args.apply(&mut cfg)?;
                    let res = run_fig2(&cfg)?;
                    println!("{}", serde_json::to_string_pretty(&res.summary)?);
                }
            }
            Ok(())
        }
        Command::Bench { sizes, reps } => {
            let sizes = sizes
                .iter()
                .map(|s| parse_size(s))
                .collect::<Result<Vec<_>>>()?;
            let rows = run_bench(&sizes, reps, cfg.seed)?;
            let dir = out.map_or_else(|| cfg.out_dir.clone(), Path::to_path_buf);
            let mut w = nio::create(&dir.join("bench.csv"))?;
            writeln!(w, "P,T,psd_seconds,generalized_seconds,ratio")?;
            for r in &rows {
                writeln!(
                    w,
                    "{},{},{:e},{:e},{:.3}",
                    r.realizations, r.len, r.psd_seconds, r.generalized_seconds, r.ratio
                )?;
                println!(
                    "P={:<6} T={:<6} psd {:.3e}s  generalized {:.3e}s  ratio {:.1}",
                    r.realizations, r.len, r.psd_seconds, r.generalized_seconds, r.ratio
                );
            }
            w.flush()?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_invariant_violation() { 2 } else { 1 })
        }
    }
}
