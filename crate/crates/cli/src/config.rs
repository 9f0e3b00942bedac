//! Run configuration: built-in defaults, an optional TOML file, and
//! command-line overrides, merged in that order.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use macrb::model::{BeamwidthCriterion, ScenarioConfig};
use macrb::optimizer::GridSpec;
use macrb::scc::UncertaintyRegion;
use serde::Deserialize;

/// Angular uncertainty region parameters, degrees.
#[derive(Debug, Clone, Copy)]
pub struct RegionConfig {
    pub min_deg: f64,
    pub max_deg: f64,
    pub center_deg: f64,
    pub step_deg: f64,
    pub kappa_scc: f64,
}

/// `(a, b)` placement lattice parameters, wavelengths.
#[derive(Debug, Clone, Copy)]
pub struct PlacementConfig {
    pub a_min: f64,
    pub a_max: f64,
    pub b_min: f64,
    pub b_max: f64,
    pub step: f64,
}

/// Monte-Carlo parameters.
#[derive(Debug, Clone)]
pub struct SimulateConfig {
    pub trials: usize,
    pub pilots: usize,
    pub theta_true_deg: f64,
    pub snr_list_db: Vec<f64>,
    pub full_search: bool,
    pub seed: u64,
}

/// Fully resolved configuration for one invocation; every field is concrete
/// and already validated.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub scenario: ScenarioConfig,
    pub snr_db: f64,
    pub region: RegionConfig,
    pub placement: PlacementConfig,
    pub simulate: SimulateConfig,
    pub sweep_spans_deg: Vec<f64>,
    pub out_dir: PathBuf,
    pub timestamp: bool,
}

/// Command-line values that take precedence over the config file. `None`
/// means the flag was not given.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub num_elements: Option<usize>,
    pub aperture: Option<f64>,
    pub min_spacing: Option<f64>,
    pub wavelength: Option<f64>,
    pub snr_db: Option<f64>,
    pub gamma: Option<f64>,
    pub criterion: Option<String>,
    pub region: Option<String>,
    pub region_step: Option<f64>,
    pub kappa_scc: Option<f64>,
    pub a_min: Option<f64>,
    pub a_max: Option<f64>,
    pub b_min: Option<f64>,
    pub b_max: Option<f64>,
    pub grid_step: Option<f64>,
    pub trials: Option<usize>,
    pub pilots: Option<usize>,
    pub theta_true: Option<f64>,
    pub snr_list: Option<String>,
    pub spans: Option<String>,
    pub full_search: bool,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub no_timestamp: bool,
}

// ---------------------------------------------------------------------------
// TOML schema: every key optional, unknown keys rejected with a located error
// ---------------------------------------------------------------------------

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    scenario: Option<FileScenario>,
    region: Option<FileRegion>,
    placement: Option<FilePlacement>,
    simulate: Option<FileSimulate>,
    sweep: Option<FileSweep>,
    output: Option<FileOutput>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileScenario {
    num_elements: Option<usize>,
    aperture_lambda: Option<f64>,
    min_spacing_lambda: Option<f64>,
    wavelength_lambda: Option<f64>,
    snr_db: Option<f64>,
    gamma: Option<f64>,
    beamwidth_criterion: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileRegion {
    min_deg: Option<f64>,
    max_deg: Option<f64>,
    center_deg: Option<f64>,
    span_deg: Option<f64>,
    step_deg: Option<f64>,
    kappa_scc: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FilePlacement {
    a_min: Option<f64>,
    a_max: Option<f64>,
    b_min: Option<f64>,
    b_max: Option<f64>,
    step: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileSimulate {
    trials: Option<usize>,
    pilots: Option<usize>,
    theta_true_deg: Option<f64>,
    snr_list_db: Option<Vec<f64>>,
    full_search: Option<bool>,
    seed: Option<u64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileSweep {
    spans_deg: Option<Vec<f64>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileOutput {
    dir: Option<String>,
    timestamp: Option<bool>,
}

impl RunConfig {
    /// Merges defaults ← config file ← command-line flags and validates the
    /// result.
    pub fn resolve(config_path: Option<&Path>, ov: &Overrides) -> Result<RunConfig> {
        let file: FileConfig = match config_path {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("reading config file {}", path.display()))?;
                toml::from_str(&text)
                    .with_context(|| format!("parsing config file {}", path.display()))?
            }
            None => FileConfig::default(),
        };
        let fs = file.scenario.unwrap_or_default();
        let fr = file.region.unwrap_or_default();
        let fp = file.placement.unwrap_or_default();
        let fm = file.simulate.unwrap_or_default();
        let fw = file.sweep.unwrap_or_default();
        let fo = file.output.unwrap_or_default();

        // scenario
        let num_elements = ov.num_elements.or(fs.num_elements).unwrap_or(6);
        let aperture = ov.aperture.or(fs.aperture_lambda).unwrap_or(10.0);
        let min_spacing = ov.min_spacing.or(fs.min_spacing_lambda).unwrap_or(0.5);
        let wavelength = ov.wavelength.or(fs.wavelength_lambda).unwrap_or(1.0);
        let snr_db = ov.snr_db.or(fs.snr_db).unwrap_or(0.0);
        let gamma = ov.gamma.or(fs.gamma).unwrap_or(0.5);
        let criterion_name = ov
            .criterion
            .clone()
            .or(fs.beamwidth_criterion)
            .unwrap_or_else(|| "magnitude".into());
        let beamwidth_criterion: BeamwidthCriterion = criterion_name
            .parse()
            .map_err(|e: macrb::Error| anyhow::anyhow!("scenario.beamwidth_criterion: {e}"))?;
        let scenario = ScenarioConfig {
            num_elements,
            aperture,
            min_spacing,
            wavelength,
            snr_linear: 10f64.powf(snr_db / 10.0),
            gamma,
            beamwidth_criterion,
        };
        scenario.validate().context("scenario")?;

        // region: span and explicit bounds are mutually exclusive
        let (mut min_deg, mut max_deg) = (0.0, 20.0);
        let center_deg = parse_region_center(ov, &fr)?;
        match (&fr.span_deg, fr.min_deg.is_some() || fr.max_deg.is_some()) {
            (Some(_), true) => {
                bail!("region: specify either span_deg or min_deg/max_deg, not both")
            }
            (Some(span), false) => {
                min_deg = center_deg - span / 2.0;
                max_deg = center_deg + span / 2.0;
            }
            (None, _) => {
                min_deg = fr.min_deg.unwrap_or(min_deg);
                max_deg = fr.max_deg.unwrap_or(max_deg);
            }
        }
        if let Some(triplet) = &ov.region {
            let (min, max, center) = parse_region_triplet(triplet)?;
            min_deg = min;
            max_deg = max;
            // center re-parsed above for ordering; keep values consistent
            debug_assert_eq!(center, center_deg);
        }
        let region = RegionConfig {
            min_deg,
            max_deg,
            center_deg,
            step_deg: ov.region_step.or(fr.step_deg).unwrap_or(0.1),
            kappa_scc: ov.kappa_scc.or(fr.kappa_scc).unwrap_or(0.5),
        };

        // placement lattice
        let family_max = (aperture - 3.0 * min_spacing) / 2.0;
        let placement = PlacementConfig {
            a_min: ov.a_min.or(fp.a_min).unwrap_or(min_spacing),
            a_max: ov.a_max.or(fp.a_max).unwrap_or(family_max),
            b_min: ov.b_min.or(fp.b_min).unwrap_or(min_spacing),
            b_max: ov.b_max.or(fp.b_max).unwrap_or(family_max),
            step: ov.grid_step.or(fp.step).unwrap_or(0.05),
        };

        // simulation
        let snr_list_db = match &ov.snr_list {
            Some(list) => parse_float_list(list).context("--snr-list")?,
            None => fm.snr_list_db.unwrap_or_default(),
        };
        let snr_list_db = if snr_list_db.is_empty() {
            vec![snr_db]
        } else {
            snr_list_db
        };
        let simulate = SimulateConfig {
            trials: ov.trials.or(fm.trials).unwrap_or(1000),
            pilots: ov.pilots.or(fm.pilots).unwrap_or(16),
            theta_true_deg: ov
                .theta_true
                .or(fm.theta_true_deg)
                .unwrap_or(region.center_deg),
            snr_list_db,
            full_search: ov.full_search || fm.full_search.unwrap_or(false),
            seed: ov.seed.or(fm.seed).unwrap_or(1),
        };
        if simulate.trials == 0 {
            bail!("simulate.trials must be positive");
        }
        if simulate.pilots == 0 {
            bail!("simulate.pilots must be positive");
        }

        // sweep
        let sweep_spans_deg = match &ov.spans {
            Some(list) => parse_float_list(list).context("--spans")?,
            None => fw
                .spans_deg
                .unwrap_or_else(|| vec![2.0, 5.0, 8.0, 15.0, 25.0, 40.0]),
        };
        if sweep_spans_deg.is_empty() {
            bail!("sweep.spans_deg must not be empty");
        }

        let out_dir = ov
            .out
            .clone()
            .or_else(|| fo.dir.map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("out"));
        let timestamp = if ov.no_timestamp {
            false
        } else {
            fo.timestamp.unwrap_or(true)
        };

        let rc = RunConfig {
            scenario,
            snr_db,
            region,
            placement,
            simulate,
            sweep_spans_deg,
            out_dir,
            timestamp,
        };
        // construct the derived objects once so invalid values fail at parse
        // time with a precise message rather than mid-command
        rc.uncertainty_region().context("region")?;
        rc.grid_spec().context("placement")?;
        Ok(rc)
    }

    /// Region object for this configuration.
    pub fn uncertainty_region(&self) -> Result<UncertaintyRegion> {
        Ok(UncertaintyRegion::new(
            self.region.min_deg,
            self.region.max_deg,
            self.region.center_deg,
            self.region.step_deg,
            self.region.kappa_scc,
        )?)
    }

    /// Placement lattice for this configuration.
    pub fn grid_spec(&self) -> Result<GridSpec> {
        Ok(GridSpec::new(
            self.placement.a_min,
            self.placement.a_max,
            self.placement.b_min,
            self.placement.b_max,
            self.placement.step,
            &self.scenario,
        )?)
    }

    /// One-line rendering of every resolved value, embedded in each output
    /// file for provenance. Field order is fixed so reruns are byte-stable.
    pub fn provenance_line(&self) -> String {
        let mut s = String::new();
        let _ = write!(
            s,
            "num_elements={} aperture_lambda={} min_spacing_lambda={} wavelength_lambda={} \
             snr_db={} gamma={} beamwidth_criterion={}",
            self.scenario.num_elements,
            self.scenario.aperture,
            self.scenario.min_spacing,
            self.scenario.wavelength,
            self.snr_db,
            self.scenario.gamma,
            self.scenario.beamwidth_criterion.name(),
        );
        let _ = write!(
            s,
            " region={}:{}:{} region_step_deg={} kappa_scc={}",
            self.region.min_deg,
            self.region.max_deg,
            self.region.center_deg,
            self.region.step_deg,
            self.region.kappa_scc,
        );
        let _ = write!(
            s,
            " a=[{},{}] b=[{},{}] grid_step={}",
            self.placement.a_min,
            self.placement.a_max,
            self.placement.b_min,
            self.placement.b_max,
            self.placement.step,
        );
        let _ = write!(
            s,
            " trials={} pilots={} theta_true_deg={} snr_list_db={} full_search={} seed={}",
            self.simulate.trials,
            self.simulate.pilots,
            self.simulate.theta_true_deg,
            join_floats(&self.simulate.snr_list_db),
            self.simulate.full_search,
            self.simulate.seed,
        );
        let _ = write!(s, " sweep_spans_deg={}", join_floats(&self.sweep_spans_deg));
        s
    }
}

fn parse_region_center(ov: &Overrides, fr: &FileRegion) -> Result<f64> {
    if let Some(triplet) = &ov.region {
        let (_, _, center) = parse_region_triplet(triplet)?;
        return Ok(center);
    }
    Ok(fr.center_deg.unwrap_or(10.0))
}

/// Parses the `--region min:max:center` triplet.
pub fn parse_region_triplet(s: &str) -> Result<(f64, f64, f64)> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        bail!("region must be min_deg:max_deg:center_deg, got {s:?}");
    }
    let mut vals = [0.0f64; 3];
    for (v, p) in vals.iter_mut().zip(&parts) {
        *v = p
            .trim()
            .parse()
            .with_context(|| format!("region component {p:?} is not a number"))?;
    }
    Ok((vals[0], vals[1], vals[2]))
}

/// Parses a comma-separated list of reals.
pub fn parse_float_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .with_context(|| format!("list entry {p:?} is not a number"))
        })
        .collect()
}

fn join_floats(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    parts.join(",")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_resolve_to_the_reference_setup() {
        let rc = RunConfig::resolve(None, &Overrides::default()).unwrap();
        assert_eq!(rc.scenario.num_elements, 6);
        assert_eq!(rc.scenario.aperture, 10.0);
        assert_eq!(rc.scenario.min_spacing, 0.5);
        assert_eq!(rc.snr_db, 0.0);
        assert_eq!(rc.region.min_deg, 0.0);
        assert_eq!(rc.region.max_deg, 20.0);
        assert_eq!(rc.region.center_deg, 10.0);
        assert_eq!(rc.region.kappa_scc, 0.5);
        assert_eq!(rc.placement.step, 0.05);
        assert_eq!(rc.simulate.trials, 1000);
        assert_eq!(rc.simulate.theta_true_deg, 10.0);
        assert_eq!(rc.simulate.snr_list_db, vec![0.0]);
        assert!(rc.timestamp);
    }

    #[test]
    fn flags_override_defaults() {
        let ov = Overrides {
            region: Some("-10:30:10".into()),
            kappa_scc: Some(0.7),
            grid_step: Some(0.25),
            snr_db: Some(20.0),
            no_timestamp: true,
            ..Overrides::default()
        };
        let rc = RunConfig::resolve(None, &ov).unwrap();
        assert_eq!(rc.region.min_deg, -10.0);
        assert_eq!(rc.region.max_deg, 30.0);
        assert_eq!(rc.region.kappa_scc, 0.7);
        assert_eq!(rc.placement.step, 0.25);
        assert!((rc.scenario.snr_linear - 100.0).abs() < 1e-12);
        assert!(!rc.timestamp);
    }

    #[test]
    fn bad_region_triplet_is_rejected() {
        let ov = Overrides {
            region: Some("30:-10:10".into()),
            ..Overrides::default()
        };
        assert!(RunConfig::resolve(None, &ov).is_err());
        let ov = Overrides {
            region: Some("0:20".into()),
            ..Overrides::default()
        };
        assert!(RunConfig::resolve(None, &ov).is_err());
    }

    #[test]
    fn provenance_line_is_stable() {
        let rc = RunConfig::resolve(None, &Overrides::default()).unwrap();
        assert_eq!(rc.provenance_line(), rc.provenance_line());
        assert!(rc.provenance_line().contains("kappa_scc=0.5"));
        assert!(rc.provenance_line().contains("region=0:20:10"));
    }
}
