use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use toposcope_core::diagram::diagram_svg;
use toposcope_core::distance::Metric;
use toposcope_core::homology::vr_persistence_cloud;
use toposcope_core::io::parse_point_cloud;
use toposcope_core::mapper::{run_mapper, Clusterer, FilterSpec, MapperParams};
use toposcope_core::pipeline::{load_sample, parse_config, run_pipeline, Format, SampleError, SampleOutput};
use toposcope_core::Execution;

use crate::service::{serve, AppState};

#[derive(Debug, Parser)]
#[command(name = "toposcope", version, about = "Persistent homology pipelines and Mapper graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a JSON pipeline config over one CSV file or a directory of them.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the input path of the config.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Overrides the output path of the config.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Process samples one after another on the calling thread.
        #[arg(long)]
        sequential: bool,
    },
    /// Vietoris-Rips persistence diagram of a point cloud.
    Diagram {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 1)]
        max_dim: usize,
        /// A distance cutoff, or "auto" for the full complex.
        #[arg(long, default_value = "auto", value_parser = parse_max_edge)]
        max_edge: MaxEdge,
        #[arg(long, default_value = "euclidean")]
        metric: Metric,
        #[arg(long, value_enum, default_value_t = DiagramFormat::Json)]
        format: DiagramFormat,
        /// Writes to stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Mapper graph of a point cloud as JSON.
    Mapper {
        #[arg(long)]
        input: PathBuf,
        /// `proj:AXIS`, `height:X,Y,..`, `l2` or `ecc[:max|mean]`; join two with `+`.
        #[arg(long, default_value = "proj:0")]
        filter: FilterSpec,
        #[arg(long, default_value_t = 10)]
        intervals: usize,
        #[arg(long, default_value_t = 0.3)]
        overlap: f64,
        /// `sl:EPS` or `dbscan:EPS:MIN_SAMPLES`.
        #[arg(long, default_value = "sl:0.5")]
        clusterer: Clusterer,
        #[arg(long, default_value_t = 1)]
        min_intersection: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Serve the HTTP API.
    Serve {
        #[arg(long, default_value = "127.0.0.1:8080")]
        bind: String,
        /// CSV point clouds to load at startup.
        #[arg(long)]
        preload: Vec<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxEdge(pub Option<f64>);

fn parse_max_edge(s: &str) -> std::result::Result<MaxEdge, String> {
    if s == "auto" {
        return Ok(MaxEdge(None));
    }
    match s.parse::<f64>() {
        Ok(x) if x >= 0.0 && x.is_finite() => Ok(MaxEdge(Some(x))),
        _ => Err(format!("expected a non-negative number or 'auto', got '{s}'")),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DiagramFormat {
    Json,
    Svg,
}

pub fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run { config, input, out, sequential } => {
            let exec = if sequential { Execution::Sequential } else { Execution::Parallel };
            let summary = run_command(&config, input.as_deref(), out.as_deref(), exec)?;
            eprintln!("{} samples, {} failed, written to {}", summary.samples, summary.failed, summary.out.display());
            Ok(())
        }
        Command::Diagram { input, max_dim, max_edge, metric, format, out } => {
            let text = diagram_command(&input, max_dim, max_edge.0, metric, format)?;
            emit(out.as_deref(), &text)
        }
        Command::Mapper { input, filter, intervals, overlap, clusterer, min_intersection, out } => {
            let params =
                MapperParams::new(filter, intervals, overlap, clusterer).with_min_intersection(min_intersection);
            let text = mapper_command(&input, &params)?;
            emit(out.as_deref(), &text)
        }
        Command::Serve { bind, preload } => {
            let state = Arc::new(AppState::default());
            for path in &preload {
                let cloud = parse_point_cloud(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
                eprintln!("loaded {} as dataset {}", path.display(), state.insert(cloud));
            }
            tokio::runtime::Runtime::new()?.block_on(serve(&bind, state))
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn diagram_command(
    input: &Path,
    max_dim: usize,
    max_edge: Option<f64>,
    metric: Metric,
    format: DiagramFormat,
) -> Result<String> {
    let cloud = parse_point_cloud(&read(input)?).with_context(|| format!("parsing {}", input.display()))?;
    let dgm = vr_persistence_cloud(&cloud, metric, max_dim, max_edge)?.sorted();
    Ok(match format {
        DiagramFormat::Json => serde_json::to_string_pretty(&dgm)? + "\n",
        DiagramFormat::Svg => diagram_svg(&dgm),
    })
}

pub fn mapper_command(input: &Path, params: &MapperParams) -> Result<String> {
    let cloud = parse_point_cloud(&read(input)?).with_context(|| format!("parsing {}", input.display()))?;
    let graph = run_mapper(&cloud, params)?;
    Ok(serde_json::to_string_pretty(&graph)? + "\n")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunSummary {
    pub samples: usize,
    pub failed: usize,
    pub out: PathBuf,
}

/// CSV files of a directory in name order, or the single file given.
fn sample_files(input: &Path) -> Result<Vec<PathBuf>> {
    if !input.is_dir() {
        return Ok(vec![input.to_path_buf()]);
    }
    let mut files: Vec<PathBuf> = fs::read_dir(input)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "csv"))
        .collect();
    files.sort();
    if files.is_empty() {
        bail!("no .csv files in {}", input.display());
    }
    Ok(files)
}

fn sample_name(path: &Path) -> String {
    path.file_stem().map_or_else(|| "sample".into(), |s| s.to_string_lossy().into_owned())
}

/// Writes `outputs.json` plus one `.csv` / `.svg` per sample when those formats are requested.
pub fn run_command(config: &Path, input: Option<&Path>, out: Option<&Path>, exec: Execution) -> Result<RunSummary> {
    let cfg = parse_config(&read(config)?).map_err(|e| anyhow::anyhow!("invalid config {}:\n{e}", config.display()))?;
    let input = match (input, &cfg.input.path) {
        (Some(p), _) => p.to_path_buf(),
        (None, Some(p)) => PathBuf::from(p),
        (None, None) => bail!("no input path given on the command line or in the config"),
    };
    let out = match (out, &cfg.output.path) {
        (Some(p), _) => p.to_path_buf(),
        (None, Some(p)) => PathBuf::from(p),
        (None, None) => bail!("no output path given on the command line or in the config"),
    };
    let files = sample_files(&input)?;
    let loaded: Vec<_> = files.iter().map(|f| read(f).and_then(|t| Ok(load_sample(cfg.input.kind, &t)?))).collect();
    let valid: Vec<_> = loaded.iter().filter_map(|r| r.as_ref().ok().cloned()).collect();
    let mut results = run_pipeline(&cfg, &valid, exec).into_iter();
    let outputs: Vec<SampleOutput> = loaded
        .iter()
        .map(|r| match r {
            Ok(_) => results.next().expect("one result per valid sample"),
            Err(e) => SampleOutput::Error(SampleError { stage: None, op: None, message: format!("{e:#}") }),
        })
        .collect();

    fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
    let records: Vec<_> =
        files.iter().zip(&outputs).map(|(f, o)| json!({ "sample": sample_name(f), "output": o })).collect();
    fs::write(out.join("outputs.json"), serde_json::to_string_pretty(&records)? + "\n")?;
    for (file, output) in files.iter().zip(&outputs) {
        let (name, Some(value)) = (sample_name(file), output.value()) else { continue };
        for format in &cfg.output.formats {
            match format {
                Format::Json => {}
                Format::Csv => {
                    if let Some(csv) = value.to_csv() {
                        fs::write(out.join(format!("{name}.csv")), csv)?;
                    }
                }
                Format::Svg => match value.to_svg().as_deref() {
                    Some([one]) => fs::write(out.join(format!("{name}.svg")), one)?,
                    Some(many) => {
                        for (i, svg) in many.iter().enumerate() {
                            fs::write(out.join(format!("{name}_{i}.svg")), svg)?;
                        }
                    }
                    None => {}
                },
            }
        }
    }
    let failed = outputs.iter().filter(|o| o.value().is_none()).count();
    Ok(RunSummary { samples: outputs.len(), failed, out })
}
