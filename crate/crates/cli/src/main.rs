use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod serve;

#[derive(Parser)]
#[command(name = "layerdepth", version, about = "Layer-index depth toolkit for layered illustrations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Merge same-colored consecutive layers and drop ambiguous documents.
    Curate {
        #[arg(long)]
        in_dir: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
        /// Resolution for the overlap test, e.g. `512` or `640x480`.
        #[arg(long, value_parser = parse_size)]
        size: Option<(u32, u32)>,
        /// Reject strokes and translucency instead of converting them.
        #[arg(long)]
        strict: bool,
    },
    /// Render an SVG to a color image and a layer-index depth image.
    Rasterize {
        #[arg(long)]
        svg: PathBuf,
        #[arg(long)]
        out_color: PathBuf,
        #[arg(long)]
        out_index: PathBuf,
        #[arg(long, value_parser = parse_size)]
        size: Option<(u32, u32)>,
        #[arg(long, value_enum, default_value_t = IndexFormat::FalseColor)]
        index_format: IndexFormat,
        /// Supersampling per axis for the color image; 1 disables anti-aliasing.
        #[arg(long, default_value_t = 1)]
        antialias: u8,
        #[arg(long)]
        strict: bool,
    },
    /// Compare a predicted depth image with ground truth.
    EvalDepth {
        #[arg(long)]
        gt: PathBuf,
        #[arg(long)]
        pred: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Sampled pixel pairs; defaults to one per 50 pixels.
        #[arg(long)]
        pairs: Option<usize>,
    },
    /// Trace an image into depth-ordered layers.
    Vectorize(VectorizeArgs),
    /// Extrude a depth image into an OBJ heightfield mesh.
    Relief {
        #[arg(long)]
        depth: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Height of the nearest layer; defaults to a tenth of the longer side.
        #[arg(long)]
        scale: Option<f64>,
        #[arg(long, default_value_t = 1)]
        stride: u32,
        /// Comma-separated bin edges for a stepped relief.
        #[arg(long, value_delimiter = ',')]
        bins: Option<Vec<f64>>,
    },
    /// Pack an image and its depth into a JSON bundle for the layer explorer.
    Bundle {
        #[arg(long)]
        image: PathBuf,
        #[arg(long)]
        depth: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Also run color clustering and record per-cluster summaries.
        #[arg(long)]
        clusters: bool,
    },
    /// Serve a bundle at `/bundle.json` and the explorer UI at `/`.
    Serve {
        #[arg(long)]
        bundle: PathBuf,
        #[arg(long, default_value_t = 8000)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        /// Directory with the explorer's static files.
        #[arg(long)]
        ui_dir: Option<PathBuf>,
    },
}

#[derive(Args)]
struct VectorizeArgs {
    #[arg(long)]
    image: PathBuf,
    #[arg(long)]
    depth: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// TOML or JSON file with pipeline settings; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Ground-truth depth image to score the output's layering against.
    #[arg(long)]
    gt_depth: Option<PathBuf>,
    /// Ground-truth SVG for the path-count error.
    #[arg(long)]
    gt_svg: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    filter_speckle: Option<usize>,
    #[arg(long)]
    color_precision: Option<u8>,
    #[arg(long)]
    layer_difference: Option<f64>,
    #[arg(long)]
    merge_tau: Option<f64>,
    #[arg(long)]
    trace_epsilon: Option<f64>,
    #[arg(long)]
    curve_fit: bool,
    #[arg(long)]
    fit_tolerance: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum IndexFormat {
    FalseColor,
    Gray16,
}

fn parse_size(s: &str) -> Result<(u32, u32), String> {
    let parse = |v: &str| v.trim().parse::<u32>().map_err(|e| format!("bad size {s:?}: {e}"));
    let (w, h) = match s.split_once(['x', 'X']) {
        Some((w, h)) => (parse(w)?, parse(h)?),
        None => {
            let n = parse(s)?;
            (n, n)
        }
    };
    if w == 0 || h == 0 {
        return Err(format!("size {s:?} has a zero side"));
    }
    Ok((w, h))
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let out = match cli.command {
        Command::Curate { in_dir, out_dir, size, strict } => commands::curate(&in_dir, &out_dir, size, strict)?,
        Command::Rasterize { svg, out_color, out_index, size, index_format, antialias, strict } => {
            let format = match index_format {
                IndexFormat::FalseColor => layerdepth::io::DepthFormat::FalseColor24,
                IndexFormat::Gray16 => layerdepth::io::DepthFormat::Gray16,
            };
            commands::rasterize(&svg, &out_color, &out_index, size, format, antialias, strict)?
        }
        Command::EvalDepth { gt, pred, seed, pairs } => commands::eval_depth(&gt, &pred, seed, pairs)?,
        Command::Vectorize(a) => {
            let overrides = commands::ConfigOverrides {
                filter_speckle: a.filter_speckle,
                color_precision: a.color_precision,
                layer_difference: a.layer_difference,
                merge_tau: a.merge_tau,
                trace_epsilon: a.trace_epsilon,
                curve_fit: a.curve_fit.then_some(true),
                fit_tolerance: a.fit_tolerance,
            };
            let cfg = commands::load_config(a.config.as_deref(), &overrides)?;
            commands::vectorize(&a.image, &a.depth, &cfg, &a.out, a.gt_depth.as_deref(), a.gt_svg.as_deref(), a.seed)?
        }
        Command::Relief { depth, out, scale, stride, bins } => commands::relief(&depth, &out, scale, stride, bins)?,
        Command::Bundle { image, depth, out, clusters } => commands::bundle(&image, &depth, &out, clusters)?,
        Command::Serve { bundle, port, host, ui_dir } => {
            serve::serve(&bundle, &host, port, ui_dir.as_deref())?;
            return Ok(());
        }
    };
    println!("{out}");
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!(parse_size("1536"), Ok((1536, 1536)));
        assert_eq!(parse_size("640x480"), Ok((640, 480)));
        assert!(parse_size("0").is_err());
        assert!(parse_size("ax3").is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
