//! Layout selectors: named reference layouts, the optimizer's solution, or
//! explicit positions.

use anyhow::{bail, Context, Result};
use macrb::geometry::{maxvar_apv, symmetric_apv, ufa_apv, uhw_apv, AntennaPositionVector, Apv};
use macrb::optimizer::{optimize_placement, OptimizeOptions};
use macrb::scc::UncertaintyRegion;

use crate::config::{parse_float_list, parse_region_triplet, RunConfig};

/// One `--apv` argument.
#[derive(Debug, Clone, PartialEq)]
pub enum ApvSelector {
    MaxVar,
    Ufa,
    Uhw,
    /// Min-max optimum; `None` uses the configured region, `Some` an
    /// explicit `min:max:center` one.
    Opt(Option<(f64, f64, f64)>),
    /// Explicit comma-separated positions in wavelengths.
    Explicit(Vec<f64>),
}

impl ApvSelector {
    /// Parses `maxvar | ufa | uhw | opt | opt:<min>:<max>:<center> |
    /// <p1>,<p2>,…`.
    pub fn parse(s: &str) -> Result<Self> {
        let trimmed = s.trim();
        match trimmed {
            "maxvar" => return Ok(ApvSelector::MaxVar),
            "ufa" => return Ok(ApvSelector::Ufa),
            "uhw" => return Ok(ApvSelector::Uhw),
            "opt" => return Ok(ApvSelector::Opt(None)),
            _ => {}
        }
        if let Some(region) = trimmed.strip_prefix("opt:") {
            return Ok(ApvSelector::Opt(Some(parse_region_triplet(region)?)));
        }
        let positions = parse_float_list(trimmed)
            .with_context(|| format!("APV selector {trimmed:?} is neither a name nor positions"))?;
        Ok(ApvSelector::Explicit(positions))
    }

    /// File-name fragment for this selector.
    pub fn tag(&self) -> String {
        match self {
            ApvSelector::MaxVar => "maxvar".into(),
            ApvSelector::Ufa => "ufa".into(),
            ApvSelector::Uhw => "uhw".into(),
            ApvSelector::Opt(None) => "opt".into(),
            ApvSelector::Opt(Some((min, max, center))) => {
                format!("opt_{min}_{max}_{center}").replace('.', "p")
            }
            ApvSelector::Explicit(_) => "custom".into(),
        }
    }

    /// Builds the layout, running the placement search for `opt` selectors.
    pub fn resolve(&self, rc: &RunConfig) -> Result<Apv> {
        let cfg = &rc.scenario;
        match self {
            ApvSelector::MaxVar => Ok(maxvar_apv(cfg)?),
            ApvSelector::Ufa => Ok(ufa_apv(cfg)?),
            ApvSelector::Uhw => Ok(uhw_apv(cfg)?),
            ApvSelector::Explicit(positions) => {
                Ok(AntennaPositionVector::new(positions.clone(), cfg)?)
            }
            ApvSelector::Opt(region_spec) => {
                let region = match region_spec {
                    None => rc.uncertainty_region()?,
                    Some((min, max, center)) => UncertaintyRegion::new(
                        *min,
                        *max,
                        *center,
                        rc.region.step_deg,
                        rc.region.kappa_scc,
                    )?,
                };
                let grid = rc.grid_spec()?;
                let report = optimize_placement(&grid, &region, cfg, OptimizeOptions::default())?;
                match report.best {
                    Some(best) => Ok(symmetric_apv(&best.params, cfg)?),
                    None => match report.least_violating {
                        Some(lv) => bail!(
                            "no feasible placement on [{}, {}]° at κ_SCC = {}; closest cell \
                             (a, b) = ({}, {}) reaches max sidelobe {:.4}",
                            region.min_deg(),
                            region.max_deg(),
                            region.kappa_scc(),
                            lv.params.a(),
                            lv.params.b(),
                            lv.max_sidelobe_scc
                        ),
                        None => bail!("placement lattice contains no valid layout"),
                    },
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Overrides;

    #[test]
    fn named_selectors_parse() {
        assert_eq!(ApvSelector::parse("maxvar").unwrap(), ApvSelector::MaxVar);
        assert_eq!(ApvSelector::parse("ufa").unwrap(), ApvSelector::Ufa);
        assert_eq!(ApvSelector::parse("uhw").unwrap(), ApvSelector::Uhw);
        assert_eq!(ApvSelector::parse("opt").unwrap(), ApvSelector::Opt(None));
        assert_eq!(
            ApvSelector::parse("opt:-10:30:10").unwrap(),
            ApvSelector::Opt(Some((-10.0, 30.0, 10.0)))
        );
    }

    #[test]
    fn explicit_positions_parse() {
        let sel = ApvSelector::parse("-5,-4.5,-4,4,4.5,5").unwrap();
        assert_eq!(
            sel,
            ApvSelector::Explicit(vec![-5.0, -4.5, -4.0, 4.0, 4.5, 5.0])
        );
        assert!(ApvSelector::parse("maxvar,ufa").is_err());
    }

    #[test]
    fn tags_are_filename_safe() {
        assert_eq!(ApvSelector::parse("maxvar").unwrap().tag(), "maxvar");
        let tag = ApvSelector::parse("opt:-10:30.5:10").unwrap().tag();
        assert_eq!(tag, "opt_-10_30p5_10");
    }

    #[test]
    fn explicit_resolves_to_validated_layout() {
        let rc = RunConfig::resolve(None, &Overrides::default()).unwrap();
        let apv = ApvSelector::parse("-5,-4.5,-4,4,4.5,5")
            .unwrap()
            .resolve(&rc)
            .unwrap();
        let reference = ApvSelector::MaxVar.resolve(&rc).unwrap();
        assert_eq!(apv.positions(), reference.positions());
        // spacing violation rejected
        assert!(ApvSelector::parse("-5,-4.9,0,1,2,5")
            .unwrap()
            .resolve(&rc)
            .is_err());
    }
}
