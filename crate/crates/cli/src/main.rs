use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};

use regfm_cli::commands::{self, DATA_FILE};
use regfm_cli::config::{GridConfig, Mode, Overrides, RunConfig};

/// Synthetic scattering data and regularized factorization-method imaging.
///
/// Defaults: far mode, star, k = 4, q = 1+i, 64 directions, measurement radius 5,
/// Tikhonov with alpha = 1e-6, grid [-1,1]^2 at 128x128, output directory ./out.
#[derive(Parser)]
#[command(name = "regfm", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the noise-free data matrix to <out>/data.csv.
    Synth(RunArgs),
    /// Image from a data file; writes w.csv, w.pgm and boundary.csv into <out>.
    Image {
        #[command(flatten)]
        run: RunArgs,
        /// Data file [default: <out>/data.csv].
        #[arg(long)]
        data: Option<PathBuf>,
    },
    /// Check special-function fixtures, the disk-oracle transform and filter bounds.
    Selftest {
        /// Multiply the Q kernel by this factor (sensitivity check).
        #[arg(long, default_value_t = 1.0, hide = true)]
        q_scale: f64,
    },
}

#[derive(Args)]
struct RunArgs {
    /// JSON configuration file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Data model: far | near [default: far].
    #[arg(long)]
    mode: Option<Mode>,
    /// rounded-square | star | acorn | peanut | disk:<radius> [default: star].
    #[arg(long)]
    shape: Option<String>,
    /// Wave number [default: 4].
    #[arg(long)]
    k: Option<f64>,
    /// Regularization parameter [default: 1e-6].
    #[arg(long)]
    alpha: Option<f64>,
    /// tikhonov | landweber | cutoff [default: tikhonov].
    #[arg(long)]
    filter: Option<String>,
    /// Relative noise level applied at imaging time [default: 0].
    #[arg(long)]
    noise: Option<f64>,
    /// Noise seed [default: 0].
    #[arg(long)]
    seed: Option<u64>,
    /// Sampling grid as xmin,xmax,ymin,ymax,nx,ny [default: -1,1,-1,1,128,128].
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<GridConfig>,
    /// Output directory [default: out].
    #[arg(long)]
    out: Option<PathBuf>,
}

impl RunArgs {
    fn resolve(self) -> Result<RunConfig> {
        let overrides = Overrides {
            mode: self.mode,
            shape: self.shape,
            k: self.k,
            alpha: self.alpha,
            filter: self.filter,
            noise: self.noise,
            seed: self.seed,
            grid: self.grid,
            out: self.out,
        };
        RunConfig::resolve(self.config.as_deref(), overrides)
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Synth(args) => {
            let cfg = args.resolve()?;
            let out = commands::synth(&cfg)?;
            if let Some(r) = &out.residual {
                eprintln!(
                    "boundary residual: max {:.3e} over {} sources",
                    r.max,
                    r.per_source.len()
                );
                if r.is_warning() {
                    eprintln!("warning: boundary residual exceeds {:.2}; k may be near an interior eigenvalue or the truncation too small", regfm::forward::RESIDUAL_WARNING);
                }
            }
            println!("{}", out.path.display());
        }
        Command::Image { run, data } => {
            let cfg = run.resolve()?;
            let data = data.unwrap_or_else(|| cfg.out.join(DATA_FILE));
            let out = commands::image(&cfg, &data)?;
            for f in &out.files {
                println!("{}", f.display());
            }
        }
        Command::Selftest { q_scale } => {
            let results = commands::selftest(q_scale);
            for r in &results {
                println!(
                    "{} {}: {}",
                    if r.pass { "PASS" } else { "FAIL" },
                    r.name,
                    r.detail
                );
            }
            return Ok(results.iter().all(|r| r.pass));
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
