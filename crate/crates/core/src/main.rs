use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{error, info};

use pointsp::corruption::{corrupt, parse_manifest, CorruptionFamily, CorruptionSpec};
use pointsp::geometry::build_neighbor_graph;
use pointsp::io::{load_cloud, read_indices, save_cloud, write_column, write_floats, CloudFormat};
use pointsp::pipeline::{
    run_inference_pipeline, run_training_pipeline, ProtocolConfig, DEFAULT_K, DEFAULT_M, DEFAULT_OMEGA,
    DEFAULT_RHO, DEFAULT_TARGET_N,
};
use pointsp::report::report_metrics;
use pointsp::resampling::{inference_resample, train_resample};
use pointsp::reweighting::{filter_mask, isolation_rates, sampling_weights};
use pointsp::sampling::{ffps, fps, resolve_start, sws, SampleResult};
use pointsp::{Error, ErrorKind, PointCloud, Result};

const EXIT_IO: u8 = 1;
const EXIT_PARSE: u8 = 3;
const EXIT_PARAMETER: u8 = 4;
const EXIT_DEGENERATE: u8 = 5;

#[derive(Parser)]
#[command(name = "pointsp", version, about = "Robust point-cloud sampling and resampling")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Protocol {
    /// Neighbor count for isolation rates and interpolation.
    #[arg(long, default_value_t = DEFAULT_K)]
    k: usize,
    /// Quantile threshold for filtered FPS.
    #[arg(long, default_value_t = DEFAULT_OMEGA)]
    omega: f64,
    /// Training size-jitter fraction.
    #[arg(long, default_value_t = DEFAULT_RHO)]
    rho: f64,
    /// Canonical cloud size at inference.
    #[arg(long = "target-n", default_value_t = DEFAULT_TARGET_N)]
    target_n: usize,
    /// Number of key points.
    #[arg(long, default_value_t = DEFAULT_M)]
    m: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// first, centroid, random or random:<seed>.
    #[arg(long = "start-rule", default_value = "centroid")]
    start_rule: String,
    /// xyz or ply; inferred from the file extension when omitted.
    #[arg(long)]
    format: Option<String>,
}

impl Protocol {
    fn config(&self) -> Result<ProtocolConfig> {
        Ok(ProtocolConfig {
            k: self.k,
            omega: self.omega,
            rho: self.rho,
            target_n: self.target_n,
            m: self.m,
            seed: self.seed,
            start_rule: self.start_rule.parse()?,
            ..Default::default()
        })
    }

    fn format(&self) -> Result<Option<CloudFormat>> {
        self.format.as_deref().map(str::parse).transpose()
    }

    fn load(&self, path: &Path) -> Result<PointCloud> {
        load_cloud(path, self.format()?)
    }

    fn save(&self, cloud: &PointCloud, path: &Path) -> Result<()> {
        save_cloud(cloud, path, self.format()?)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum WeightKind {
    Isolation,
    Sampling,
    Mask,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Fps,
    Ffps,
    Sws,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Train,
    Inference,
}

#[derive(Subcommand)]
enum Command {
    /// Write per-point isolation rates (or derived weights / mask), one per line.
    Weights {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long, value_enum, default_value = "isolation")]
        kind: WeightKind,
        #[command(flatten)]
        protocol: Protocol,
    },
    /// Select key points and write their indices, one per line.
    Sample {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long, value_enum, default_value = "ffps")]
        method: Method,
        /// Also write the selected sub-cloud.
        #[arg(long)]
        cloud_out: Option<PathBuf>,
        #[command(flatten)]
        protocol: Protocol,
    },
    /// Resize a cloud: random jitter (train) or restore to --target-n (inference).
    Resample {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long, value_enum, default_value = "inference")]
        mode: Mode,
        #[command(flatten)]
        protocol: Protocol,
    },
    /// Training-time size augmentation; same as `resample --mode train`.
    Augment {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[command(flatten)]
        protocol: Protocol,
    },
    /// Apply a synthetic corruption, or a whole manifest of them.
    Corrupt {
        input: PathBuf,
        #[arg(short, long, required_unless_present = "manifest")]
        output: Option<PathBuf>,
        #[arg(long, required_unless_present = "manifest")]
        family: Option<String>,
        #[arg(long, default_value_t = 1)]
        severity: u8,
        /// File with one `family severity seed` triple per line.
        #[arg(long, conflicts_with_all = ["family", "output"])]
        manifest: Option<PathBuf>,
        #[arg(long, requires = "manifest")]
        out_dir: Option<PathBuf>,
        #[command(flatten)]
        protocol: Protocol,
    },
    /// Run a full protocol and write cloud, key-point indices and weights.
    Pipeline {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "inference")]
        mode: Mode,
        #[arg(long)]
        out_dir: PathBuf,
        #[command(flatten)]
        protocol: Protocol,
    },
    /// Compare a processed cloud to a clean one; prints key=value lines.
    Eval {
        clean: PathBuf,
        processed: PathBuf,
        /// Outlier indices, one per line.
        #[arg(long)]
        outliers: Option<PathBuf>,
        /// Selected key-point indices, one per line.
        #[arg(long)]
        indices: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        protocol: Protocol,
    },
}

fn write_indices(path: &Path, result: &SampleResult) -> Result<()> {
    write_column(path, result.indices.iter())
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.to_path_buf(),
        source,
    })
}

fn cloud_extension(protocol: &Protocol, input: &Path) -> Result<&'static str> {
    let format = protocol.format()?.unwrap_or_else(|| CloudFormat::from_path(input));
    Ok(match format {
        CloudFormat::Xyz => "xyz",
        CloudFormat::PlyAscii => "ply",
    })
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Weights {
            input,
            output,
            kind,
            protocol,
        } => {
            let cfg = protocol.config()?;
            let cloud = protocol.load(&input)?;
            let graph = build_neighbor_graph(&cloud, cfg.k)?;
            let wv = isolation_rates(&graph);
            match kind {
                WeightKind::Isolation => write_floats(&output, wv.isolation()),
                WeightKind::Sampling => {
                    let wv = sampling_weights(wv);
                    write_floats(&output, wv.sampling_weight().expect("populated"))
                }
                WeightKind::Mask => {
                    let wv = filter_mask(wv, cfg.omega)?;
                    write_column(&output, wv.mask().expect("populated").iter().map(|&b| u8::from(b)))
                }
            }
        }
        Command::Sample {
            input,
            output,
            method,
            cloud_out,
            protocol,
        } => {
            let cfg = protocol.config()?;
            let cloud = protocol.load(&input)?;
            let result = match method {
                Method::Fps => fps(&cloud, cfg.m, resolve_start(&cloud, None, cfg.start_rule)?)?,
                Method::Ffps => {
                    let graph = build_neighbor_graph(&cloud, cfg.k)?;
                    let wv = filter_mask(isolation_rates(&graph), cfg.omega)?;
                    ffps(&cloud, &wv, cfg.m, cfg.start_rule)?
                }
                Method::Sws => {
                    let graph = build_neighbor_graph(&cloud, cfg.k)?;
                    let wv = sampling_weights(isolation_rates(&graph));
                    sws(&cloud, &wv, cfg.m, cfg.seed)?
                }
            };
            write_indices(&output, &result)?;
            if let Some(path) = cloud_out {
                protocol.save(&cloud.select(&result.indices)?, &path)?;
            }
            Ok(())
        }
        Command::Resample {
            input,
            output,
            mode,
            protocol,
        } => {
            let cfg = protocol.config()?;
            let cloud = protocol.load(&input)?;
            let out = match mode {
                Mode::Train => {
                    let (out, plan) = train_resample(&cloud, cfg.rho, cfg.k, cfg.seed)?;
                    info!("delta_n = {}", plan.delta_n);
                    out
                }
                Mode::Inference => inference_resample(&cloud, cfg.target_n, cfg.k, cfg.seed)?,
            };
            protocol.save(&out, &output)
        }
        Command::Augment {
            input,
            output,
            protocol,
        } => {
            let cfg = protocol.config()?;
            let cloud = protocol.load(&input)?;
            let (out, plan) = train_resample(&cloud, cfg.rho, cfg.k, cfg.seed)?;
            info!("delta_n = {}", plan.delta_n);
            protocol.save(&out, &output)
        }
        Command::Corrupt {
            input,
            output,
            family,
            severity,
            manifest,
            out_dir,
            protocol,
        } => {
            let cloud = protocol.load(&input)?;
            if let Some(manifest) = manifest {
                let text = fs::read_to_string(&manifest).map_err(|source| Error::Io {
                    path: manifest.clone(),
                    source,
                })?;
                let specs = parse_manifest(&text, &manifest)?;
                let dir = out_dir.unwrap_or_else(|| PathBuf::from("."));
                create_dir(&dir)?;
                let stem = input.file_stem().and_then(|s| s.to_str()).unwrap_or("cloud");
                let ext = cloud_extension(&protocol, &input)?;
                for spec in specs {
                    let out = corrupt(&cloud, &spec)?;
                    let name = format!(
                        "{stem}_{}_{}_{}.{ext}",
                        spec.family(),
                        spec.severity(),
                        spec.seed()
                    );
                    protocol.save(&out, &dir.join(name))?;
                }
                Ok(())
            } else {
                let family: CorruptionFamily = family.expect("required by clap").parse()?;
                let spec = CorruptionSpec::new(family, severity, protocol.seed)?;
                let out = corrupt(&cloud, &spec)?;
                protocol.save(&out, &output.expect("required by clap"))
            }
        }
        Command::Pipeline {
            input,
            mode,
            out_dir,
            protocol,
        } => {
            let cfg = protocol.config()?;
            let cloud = protocol.load(&input)?;
            create_dir(&out_dir)?;
            let ext = cloud_extension(&protocol, &input)?;
            let (prepared, samples, weights) = match mode {
                Mode::Inference => {
                    let out = run_inference_pipeline(&cloud, &cfg)?;
                    (out.cloud, out.samples, out.weights)
                }
                Mode::Train => {
                    let out = run_training_pipeline(&cloud, &cfg)?;
                    (out.cloud, out.samples, out.weights)
                }
            };
            protocol.save(&prepared, &out_dir.join(format!("cloud.{ext}")))?;
            write_indices(&out_dir.join("indices.txt"), &samples)?;
            write_floats(&out_dir.join("weights.txt"), weights.isolation())?;
            Ok(())
        }
        Command::Eval {
            clean,
            processed,
            outliers,
            indices,
            csv,
            protocol,
        } => {
            let clean = protocol.load(&clean)?;
            let processed = protocol.load(&processed)?;
            let outliers = outliers.as_deref().map(read_indices).transpose()?;
            let indices = indices.as_deref().map(read_indices).transpose()?;
            let report = report_metrics(&clean, &processed, outliers.as_deref(), indices.as_deref());
            print!("{}", report.to_key_value());
            if let Some(path) = csv {
                fs::write(&path, report.to_csv()).map_err(|source| Error::Io { path, source })?;
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            error!("{e}");
            eprintln!("error: {e}");
            ExitCode::from(match e.kind() {
                ErrorKind::Io => EXIT_IO,
                ErrorKind::Parse => EXIT_PARSE,
                ErrorKind::Parameter => EXIT_PARAMETER,
                ErrorKind::Degenerate => EXIT_DEGENERATE,
            })
        }
    }
}
