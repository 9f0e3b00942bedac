//! Spatial correlation, half-power beamwidth, main-lobe sets and the
//! ambiguity-feasibility test.
//!
//! The spatial correlation coefficient `SCC(θᵢ, θⱼ, r) = |aᴴ(θᵢ)a(θⱼ)|/L`
//! measures how well the array distinguishes two directions; a high value at
//! a sidelobe angle signals a grating-lobe estimation ambiguity. A placement
//! is feasible for an uncertainty region `P` if the correlation with the
//! region center stays at or below `κ` everywhere in `P` outside the main
//! lobe.

use crate::error::{Error, Result};
use crate::exec;
use crate::geometry::AntennaPositionVector;
use crate::model::{steering_vector, Angle, ScenarioConfig, ANGLE_LIMIT_DEG};
use crate::util::grid_values;

/// Default fine-grid step (degrees) for beamwidth scans, independent of the
/// region grid.
pub const DEFAULT_FINE_STEP_DEG: f64 = 0.01;

/// Discretized set of candidate directions `P` with its center `θ_c` and the
/// ambiguity threshold `κ`.
#[derive(Debug, Clone, PartialEq)]
pub struct UncertaintyRegion {
    angles: Vec<Angle>,
    center: Angle,
    grid_step_deg: f64,
    kappa_scc: f64,
}

impl UncertaintyRegion {
    /// Builds the ascending grid `min, min+step, …, max` (1e−9-rounded).
    pub fn new(
        min_deg: f64,
        max_deg: f64,
        center_deg: f64,
        step_deg: f64,
        kappa_scc: f64,
    ) -> Result<Self> {
        if !step_deg.is_finite() || step_deg <= 0.0 {
            return Err(Error::Config(format!(
                "region grid step must be positive, got {step_deg}"
            )));
        }
        if !(kappa_scc > 0.0 && kappa_scc <= 1.0) {
            return Err(Error::Config(format!(
                "kappa_scc must lie in (0, 1], got {kappa_scc}"
            )));
        }
        if !min_deg.is_finite() || !max_deg.is_finite() || min_deg > max_deg {
            return Err(Error::Config(format!(
                "region bounds out of order: [{min_deg}, {max_deg}]"
            )));
        }
        if !(min_deg <= center_deg && center_deg <= max_deg) {
            return Err(Error::Config(format!(
                "region center {center_deg}° outside [{min_deg}, {max_deg}]"
            )));
        }
        let center = Angle::from_degrees(center_deg)?;
        let angles = grid_values(min_deg, max_deg, step_deg)
            .into_iter()
            .map(Angle::from_degrees)
            .collect::<Result<Vec<_>>>()?;
        Ok(UncertaintyRegion {
            angles,
            center,
            grid_step_deg: step_deg,
            kappa_scc,
        })
    }

    /// Region of width `span_deg` centered on `center_deg`.
    pub fn from_span(
        center_deg: f64,
        span_deg: f64,
        step_deg: f64,
        kappa_scc: f64,
    ) -> Result<Self> {
        if span_deg < 0.0 {
            return Err(Error::Config(format!(
                "region span must be nonnegative, got {span_deg}"
            )));
        }
        Self::new(
            crate::util::round9(center_deg - span_deg / 2.0),
            crate::util::round9(center_deg + span_deg / 2.0),
            center_deg,
            step_deg,
            kappa_scc,
        )
    }

    pub fn angles(&self) -> &[Angle] {
        &self.angles
    }

    pub fn center(&self) -> Angle {
        self.center
    }

    pub fn grid_step_deg(&self) -> f64 {
        self.grid_step_deg
    }

    pub fn kappa_scc(&self) -> f64 {
        self.kappa_scc
    }

    pub fn min_deg(&self) -> f64 {
        self.angles[0].degrees()
    }

    pub fn max_deg(&self) -> f64 {
        self.angles[self.angles.len() - 1].degrees()
    }

    /// Span `ΔP = max(P) − min(P)` in degrees.
    pub fn span_deg(&self) -> f64 {
        self.max_deg() - self.min_deg()
    }

    /// Same grid and center with a different threshold.
    pub fn with_kappa(&self, kappa_scc: f64) -> Result<Self> {
        if !(kappa_scc > 0.0 && kappa_scc <= 1.0) {
            return Err(Error::Config(format!(
                "kappa_scc must lie in (0, 1], got {kappa_scc}"
            )));
        }
        Ok(UncertaintyRegion {
            kappa_scc,
            ..self.clone()
        })
    }
}

/// Spatial correlation magnitude `|aᴴ(θᵢ, r)·a(θⱼ, r)|/L ∈ [0, 1]`.
pub fn scc(theta_i: Angle, theta_j: Angle, r: &AntennaPositionVector, cfg: &ScenarioConfig) -> f64 {
    let ai = steering_vector(theta_i, r, cfg);
    let aj = steering_vector(theta_j, r, cfg);
    let inner: num_complex::Complex64 = ai
        .entries()
        .iter()
        .zip(aj.entries())
        .map(|(x, y)| x.conj() * y)
        .sum();
    inner.norm() / r.len() as f64
}

/// A half-power beamwidth measurement. `clipped` flags scans that reached the
/// angle-domain edge before crossing the half-power level on at least one
/// side (the width then extends to that edge).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Beamwidth {
    pub width_deg: f64,
    pub clipped: bool,
}

/// Half-power beamwidth around `theta_c`: the width of the contiguous
/// interval where the correlation with `theta_c` stays above the half-power
/// level, measured by outward fine-grid scans with linear interpolation at
/// the crossing.
///
/// The level is 0.5 applied to `|SCC|` or `|SCC|²` according to
/// `cfg.beamwidth_criterion`.
pub fn half_power_beamwidth(
    r: &AntennaPositionVector,
    theta_c: Angle,
    fine_step_deg: f64,
    cfg: &ScenarioConfig,
) -> Result<Beamwidth> {
    if !fine_step_deg.is_finite() || fine_step_deg <= 0.0 {
        return Err(Error::Config(format!(
            "beamwidth fine step must be positive, got {fine_step_deg}"
        )));
    }
    let level = 0.5;
    let tc = theta_c.degrees();
    let scan = |sign: f64| -> (f64, bool) {
        let lim = sign * ANGLE_LIMIT_DEG;
        let n = ((lim - tc).abs() / fine_step_deg + 1e-12).floor() as usize;
        let mut prev_t = tc;
        let mut prev_q = cfg.beamwidth_criterion.apply(1.0);
        for i in 1..=n {
            let t = tc + sign * i as f64 * fine_step_deg;
            let q = cfg.beamwidth_criterion.apply(scc(
                theta_c,
                Angle::from_degrees(t).unwrap(),
                r,
                cfg,
            ));
            if q < level {
                // linear interpolation in the criterion domain
                let crossing = prev_t + (level - prev_q) * (t - prev_t) / (q - prev_q);
                return (crossing, false);
            }
            prev_t = t;
            prev_q = q;
        }
        (lim, true)
    };
    let (right, clip_r) = scan(1.0);
    let (left, clip_l) = scan(-1.0);
    Ok(Beamwidth {
        width_deg: right - left,
        clipped: clip_r || clip_l,
    })
}

/// Main-lobe subset of a region: the grid angles with
/// `|θ − θ_c| < beamwidth/2` (strict).
#[derive(Debug, Clone, PartialEq)]
pub struct MainlobeSet {
    /// Mask aligned with `region.angles()`.
    pub mask: Vec<bool>,
    pub beamwidth: Beamwidth,
}

pub fn mainlobe_set(
    r: &AntennaPositionVector,
    region: &UncertaintyRegion,
    cfg: &ScenarioConfig,
) -> Result<MainlobeSet> {
    let beamwidth = half_power_beamwidth(r, region.center(), DEFAULT_FINE_STEP_DEG, cfg)?;
    let half = beamwidth.width_deg / 2.0;
    let tc = region.center().degrees();
    let mask = region
        .angles()
        .iter()
        .map(|t| (t.degrees() - tc).abs() < half)
        .collect();
    Ok(MainlobeSet { mask, beamwidth })
}

/// Outcome of the ambiguity-feasibility test
/// `max_{θ ∈ P∖L(r)} SCC(θ_c, θ, r) ≤ κ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SccFeasibility {
    pub feasible: bool,
    /// Maximal sidelobe correlation (0 when the main lobe covers the region).
    pub max_sidelobe: f64,
    /// Angle attaining the maximum, if any sidelobe angles exist.
    pub worst_angle: Option<Angle>,
    pub beamwidth: Beamwidth,
}

pub fn scc_feasible(
    r: &AntennaPositionVector,
    region: &UncertaintyRegion,
    cfg: &ScenarioConfig,
) -> Result<SccFeasibility> {
    let ml = mainlobe_set(r, region, cfg)?;
    let mut max_sidelobe = 0.0f64;
    let mut worst_angle = None;
    for (angle, in_mainlobe) in region.angles().iter().zip(&ml.mask) {
        if *in_mainlobe {
            continue;
        }
        let v = scc(region.center(), *angle, r, cfg);
        if worst_angle.is_none() || v > max_sidelobe {
            max_sidelobe = v;
            worst_angle = Some(*angle);
        }
    }
    if worst_angle.is_none() {
        max_sidelobe = 0.0;
    }
    Ok(SccFeasibility {
        feasible: max_sidelobe <= region.kappa_scc(),
        max_sidelobe,
        worst_angle,
        beamwidth: ml.beamwidth,
    })
}

/// Correlation-vs-angle profile over a region: the data behind a sidelobe
/// plot.
#[derive(Debug, Clone, PartialEq)]
pub struct SccProfile {
    pub angles: Vec<Angle>,
    /// `|SCC(θ_c, θ, r)|` per grid angle.
    pub values: Vec<f64>,
    /// Main-lobe membership per grid angle.
    pub mainlobe: Vec<bool>,
    pub beamwidth: Beamwidth,
}

pub fn scc_profile(
    r: &AntennaPositionVector,
    region: &UncertaintyRegion,
    cfg: &ScenarioConfig,
) -> Result<SccProfile> {
    let ml = mainlobe_set(r, region, cfg)?;
    let angles = region.angles();
    let values = exec::map_indexed(angles.len(), |i| scc(region.center(), angles[i], r, cfg));
    Ok(SccProfile {
        angles: angles.to_vec(),
        values,
        mainlobe: ml.mask,
        beamwidth: ml.beamwidth,
    })
}
