//! `macrb`: Cramér-Rao bound analysis and robust placement search for
//! movable-antenna transmit arrays.
//!
//! Every subcommand reads the same layered configuration (built-in defaults,
//! then an optional TOML file, then flags), writes CSV files that embed the
//! fully resolved configuration, and is deterministic for a fixed seed.

mod commands;
mod config;
mod output;
mod selector;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};

use crate::config::{Overrides, RunConfig};
use crate::selector::ApvSelector;

#[derive(Parser)]
#[command(
    name = "macrb",
    version,
    about = "Angle-of-departure Cramér-Rao bounds for movable-antenna arrays",
    after_help = "Angles are degrees and positions are wavelengths at every boundary. \
                  Outputs are CSV files under --out (default `out/`), each prefixed \
                  with a `# config:` line recording the resolved configuration."
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

/// Flags shared by all subcommands; each overrides the like-named config key.
#[derive(Args)]
struct GlobalArgs {
    /// TOML configuration file
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Output directory for CSV files
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Base seed for the Monte-Carlo trials
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Transmit SNR in dB
    #[arg(long, global = true, allow_hyphen_values = true)]
    snr_db: Option<f64>,
    /// Spatial-correlation sidelobe threshold κ
    #[arg(long, global = true)]
    kappa_scc: Option<f64>,
    /// Placement lattice step in wavelengths
    #[arg(long, global = true)]
    grid_step: Option<f64>,
    /// Uncertainty region as min:max:center, degrees
    #[arg(
        long,
        global = true,
        value_name = "MIN:MAX:CENTER",
        allow_hyphen_values = true
    )]
    region: Option<String>,
    /// Angular grid step over the region, degrees
    #[arg(long, global = true)]
    region_step: Option<f64>,
    /// Power fraction on the steering beam (0, 1)
    #[arg(long, global = true)]
    gamma: Option<f64>,
    /// Beamwidth criterion: magnitude or power
    #[arg(long, global = true, value_name = "NAME")]
    criterion: Option<String>,
    /// Number of array elements
    #[arg(long, global = true)]
    num_elements: Option<usize>,
    /// Aperture length in wavelengths
    #[arg(long, global = true)]
    aperture: Option<f64>,
    /// Minimum inter-element spacing in wavelengths
    #[arg(long, global = true)]
    min_spacing: Option<f64>,
    /// Carrier wavelength (scales positions only)
    #[arg(long, global = true)]
    wavelength: Option<f64>,
    /// Placement lattice lower bound for a, wavelengths
    #[arg(long, global = true)]
    a_min: Option<f64>,
    /// Placement lattice upper bound for a, wavelengths
    #[arg(long, global = true)]
    a_max: Option<f64>,
    /// Placement lattice lower bound for b, wavelengths
    #[arg(long, global = true)]
    b_min: Option<f64>,
    /// Placement lattice upper bound for b, wavelengths
    #[arg(long, global = true)]
    b_max: Option<f64>,
    /// Number of Monte-Carlo trials
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// Number of pilot symbols per burst
    #[arg(long, global = true)]
    pilots: Option<usize>,
    /// True departure angle for the simulation, degrees
    #[arg(long, global = true, allow_hyphen_values = true)]
    theta_true: Option<f64>,
    /// Comma-separated SNR list in dB for the simulation
    #[arg(
        long,
        global = true,
        value_name = "DB,DB,...",
        allow_hyphen_values = true
    )]
    snr_list: Option<String>,
    /// Comma-separated region spans in degrees for the sweep
    #[arg(long, global = true, value_name = "DEG,DEG,...")]
    spans: Option<String>,
    /// Search the full angular domain instead of region ± beamwidth
    #[arg(long, global = true)]
    full_search: bool,
    /// Omit the `# generated:` timestamp line for byte-identical reruns
    #[arg(long, global = true)]
    no_timestamp: bool,
}

impl GlobalArgs {
    fn to_overrides(&self) -> Overrides {
        Overrides {
            num_elements: self.num_elements,
            aperture: self.aperture,
            min_spacing: self.min_spacing,
            wavelength: self.wavelength,
            snr_db: self.snr_db,
            gamma: self.gamma,
            criterion: self.criterion.clone(),
            region: self.region.clone(),
            region_step: self.region_step,
            kappa_scc: self.kappa_scc,
            a_min: self.a_min,
            a_max: self.a_max,
            b_min: self.b_min,
            b_max: self.b_max,
            grid_step: self.grid_step,
            trials: self.trials,
            pilots: self.pilots,
            theta_true: self.theta_true,
            snr_list: self.snr_list.clone(),
            spans: self.spans.clone(),
            full_search: self.full_search,
            seed: self.seed,
            out: self.out.clone(),
            no_timestamp: self.no_timestamp,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Worst-case CRB over the whole placement lattice, per cell
    CrbMap {
        /// Skip CRB evaluation of constraint-violating cells
        #[arg(long)]
        no_diagnostics: bool,
    },
    /// Min-max placement search under the correlation constraint
    Optimize,
    /// Spatial-correlation profile over the region per layout
    SccProfile {
        /// Layout: maxvar | ufa | uhw | opt | opt:min:max:center | p1,p2,...
        #[arg(long = "apv", value_name = "LAYOUT", allow_hyphen_values = true)]
        apv: Vec<String>,
    },
    /// CRB-vs-angle profile over the region per layout
    CrbProfile {
        /// Layout: maxvar | ufa | uhw | opt | opt:min:max:center | p1,p2,...
        #[arg(long = "apv", value_name = "LAYOUT", allow_hyphen_values = true)]
        apv: Vec<String>,
    },
    /// Worst-case CRB of each solution versus region span
    Sweep,
    /// Monte-Carlo RMSE of the ML estimator against the bound
    Simulate {
        /// Layout: maxvar | ufa | uhw | opt | opt:min:max:center | p1,p2,...
        #[arg(long = "apv", value_name = "LAYOUT", allow_hyphen_values = true)]
        apv: Vec<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: &Cli) -> Result<()> {
    let rc = RunConfig::resolve(cli.global.config.as_deref(), &cli.global.to_overrides())?;
    match &cli.command {
        Command::CrbMap { no_diagnostics } => commands::cmd_crb_map(&rc, !no_diagnostics),
        Command::Optimize => commands::cmd_optimize(&rc),
        Command::SccProfile { apv } => {
            commands::cmd_scc_profile(&rc, &parse_selectors(apv, &["maxvar", "ufa", "uhw"])?)
        }
        Command::CrbProfile { apv } => commands::cmd_crb_profile(
            &rc,
            &parse_selectors(apv, &["opt", "maxvar", "ufa", "uhw"])?,
        ),
        Command::Sweep => commands::cmd_sweep(&rc),
        Command::Simulate { apv } => {
            commands::cmd_simulate(&rc, &parse_selectors(apv, &["maxvar"])?)
        }
    }
}

/// Parses `--apv` occurrences, falling back to the subcommand's default set.
fn parse_selectors(given: &[String], defaults: &[&str]) -> Result<Vec<ApvSelector>> {
    if given.is_empty() {
        defaults.iter().map(|s| ApvSelector::parse(s)).collect()
    } else {
        given.iter().map(|s| ApvSelector::parse(s)).collect()
    }
}
