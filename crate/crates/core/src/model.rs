//! Scenario configuration, angle handling and array steering vectors — the
//! shared vocabulary of every other module.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::AntennaPositionVector;

/// Angles are confined to `|θ| ≤ 89.9°`: the closed-form CRB carries a
/// `1/cos²θ` factor and degenerates at endfire.
pub const ANGLE_LIMIT_DEG: f64 = 89.9;

/// Which function of the spatial correlation the half-power beamwidth
/// criterion thresholds at 0.5.
///
/// `Magnitude` bounds the main lobe where `|SCC| ≥ 0.5`; `Power` where
/// `|SCC|² ≥ 0.5` (i.e. `|SCC| ≥ 1/√2`). Magnitude is the default: under the
/// power criterion the first correlation sample just outside the main lobe
/// sits at `|SCC| ≈ 0.707` for every array, so any ambiguity threshold
/// `κ < 0.707` would be unsatisfiable by construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BeamwidthCriterion {
    #[default]
    Magnitude,
    Power,
}

impl BeamwidthCriterion {
    /// Maps `|SCC|` into the thresholded domain.
    pub(crate) fn apply(self, scc_mag: f64) -> f64 {
        match self {
            BeamwidthCriterion::Magnitude => scc_mag,
            BeamwidthCriterion::Power => scc_mag * scc_mag,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BeamwidthCriterion::Magnitude => "magnitude",
            BeamwidthCriterion::Power => "power",
        }
    }
}

impl std::str::FromStr for BeamwidthCriterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "magnitude" | "mag" => Ok(BeamwidthCriterion::Magnitude),
            "power" => Ok(BeamwidthCriterion::Power),
            other => Err(Error::Config(format!(
                "unknown beamwidth criterion `{other}` (expected `magnitude` or `power`)"
            ))),
        }
    }
}

/// Physical and statistical constants of a scenario.
///
/// Lengths (`aperture`, `min_spacing`, antenna positions) are in wavelength
/// units; `wavelength` is the unit itself and stays at 1 unless a different
/// length scale is wanted. `snr_linear` is the post-processing ratio
/// `K·P·ρ²/σ²`; `gamma` the fraction of transmit power in the directional
/// beam.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub num_elements: usize,
    pub aperture: f64,
    pub min_spacing: f64,
    pub wavelength: f64,
    pub snr_linear: f64,
    pub gamma: f64,
    pub beamwidth_criterion: BeamwidthCriterion,
}

impl Default for ScenarioConfig {
    /// Canonical demo setup: `L = 6` antennas on a `10λ` segment with minimum
    /// spacing `λ/2`, unit SNR (0 dB) and an even power split.
    fn default() -> Self {
        ScenarioConfig {
            num_elements: 6,
            aperture: 10.0,
            min_spacing: 0.5,
            wavelength: 1.0,
            snr_linear: 1.0,
            gamma: 0.5,
            beamwidth_criterion: BeamwidthCriterion::Magnitude,
        }
    }
}

impl ScenarioConfig {
    /// Builds a configuration with unit wavelength and the default beamwidth
    /// criterion, validating every invariant.
    pub fn new(
        num_elements: usize,
        aperture: f64,
        min_spacing: f64,
        snr_linear: f64,
        gamma: f64,
    ) -> Result<Self> {
        let cfg = ScenarioConfig {
            num_elements,
            aperture,
            min_spacing,
            wavelength: 1.0,
            snr_linear,
            gamma,
            beamwidth_criterion: BeamwidthCriterion::default(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_elements < 2 {
            return Err(Error::Config(format!(
                "num_elements must be ≥ 2, got {}",
                self.num_elements
            )));
        }
        if !self.min_spacing.is_finite() || self.min_spacing <= 0.0 {
            return Err(Error::Config(format!(
                "min_spacing must be positive, got {}",
                self.min_spacing
            )));
        }
        if !self.wavelength.is_finite() || self.wavelength <= 0.0 {
            return Err(Error::Config(format!(
                "wavelength must be positive, got {}",
                self.wavelength
            )));
        }
        // strict: an aperture exactly equal to (L−1)·d admits only the
        // uniform minimal layout and no strictly-spaced alternatives
        if !self.aperture.is_finite()
            || self.aperture <= (self.num_elements - 1) as f64 * self.min_spacing
        {
            return Err(Error::Config(format!(
                "aperture {} too small for {} elements at min spacing {}",
                self.aperture, self.num_elements, self.min_spacing
            )));
        }
        if !self.snr_linear.is_finite() || self.snr_linear <= 0.0 {
            return Err(Error::Config(format!(
                "snr_linear must be positive, got {}",
                self.snr_linear
            )));
        }
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return Err(Error::Config(format!(
                "gamma must lie in (0, 1), got {}",
                self.gamma
            )));
        }
        Ok(())
    }

    /// Wavenumber `2π/λ`.
    pub fn wavenumber(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.wavelength
    }
}

/// An angle of departure, kept in radians internally and confined to
/// `|θ| ≤ 89.9°`. Construct from degrees at external boundaries.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Angle {
    radians: f64,
}

impl Angle {
    pub fn from_degrees(degrees: f64) -> Result<Self> {
        if !degrees.is_finite() || degrees.abs() > ANGLE_LIMIT_DEG {
            return Err(Error::AngleDomain {
                degrees,
                limit: ANGLE_LIMIT_DEG,
            });
        }
        Ok(Angle {
            radians: degrees.to_radians(),
        })
    }

    pub fn from_radians(radians: f64) -> Result<Self> {
        Self::from_degrees(radians.to_degrees())
    }

    pub fn degrees(self) -> f64 {
        self.radians.to_degrees()
    }

    pub fn radians(self) -> f64 {
        self.radians
    }
}

/// Marks whether a [`SteeringVector`] holds the response itself or its
/// derivative with respect to the angle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SteeringKind {
    Plain,
    Derivative,
}

/// Array response `a(θ, r)` (unit-modulus entries) or its angle derivative
/// `ȧ(θ, r)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SteeringVector {
    entries: Vec<Complex64>,
    kind: SteeringKind,
}

impl SteeringVector {
    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn kind(&self) -> SteeringKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Squared Euclidean norm. `L` exactly for the plain response;
    /// `(2π/λ)²·cos²θ·rᵀr` for the derivative.
    pub fn norm_sq(&self) -> f64 {
        self.entries.iter().map(|e| e.norm_sqr()).sum()
    }
}

/// Steering vector with entries `exp(j·(2π/λ)·sinθ·r_l)`.
pub fn steering_vector(
    theta: Angle,
    r: &AntennaPositionVector,
    cfg: &ScenarioConfig,
) -> SteeringVector {
    let phase_per_unit = cfg.wavenumber() * theta.radians().sin();
    let entries = r
        .positions()
        .iter()
        .map(|&rl| Complex64::from_polar(1.0, phase_per_unit * rl))
        .collect();
    SteeringVector {
        entries,
        kind: SteeringKind::Plain,
    }
}

/// Entry-wise angle derivative of the steering vector:
/// `j·(2π/λ)·cosθ·r_l·exp(j·(2π/λ)·sinθ·r_l)`.
pub fn steering_derivative(
    theta: Angle,
    r: &AntennaPositionVector,
    cfg: &ScenarioConfig,
) -> SteeringVector {
    let k = cfg.wavenumber();
    let phase_per_unit = k * theta.radians().sin();
    let scale = k * theta.radians().cos();
    let entries = r
        .positions()
        .iter()
        .map(|&rl| Complex64::i() * (scale * rl) * Complex64::from_polar(1.0, phase_per_unit * rl))
        .collect();
    SteeringVector {
        entries,
        kind: SteeringKind::Derivative,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{maxvar_apv, AntennaPositionVector};
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn two_element(cfg: &ScenarioConfig, positions: [f64; 2]) -> AntennaPositionVector {
        let mut cfg2 = cfg.clone();
        cfg2.num_elements = 2;
        AntennaPositionVector::new(positions.to_vec(), &cfg2).unwrap()
    }

    #[test]
    fn angle_domain_enforced() {
        assert!(Angle::from_degrees(89.9).is_ok());
        assert!(Angle::from_degrees(-89.9).is_ok());
        assert!(Angle::from_degrees(89.91).is_err());
        assert!(Angle::from_degrees(f64::NAN).is_err());
        assert_abs_diff_eq!(
            Angle::from_degrees(30.0).unwrap().radians(),
            0.5235987755982988
        );
    }

    #[test]
    fn config_invariants_enforced() {
        assert!(ScenarioConfig::new(1, 10.0, 0.5, 1.0, 0.5).is_err());
        assert!(ScenarioConfig::new(6, 2.5, 0.5, 1.0, 0.5).is_err()); // aperture = (L−1)d
        assert!(ScenarioConfig::new(6, 10.0, 0.5, 0.0, 0.5).is_err());
        assert!(ScenarioConfig::new(6, 10.0, 0.5, 1.0, 1.0).is_err());
        assert!(ScenarioConfig::new(6, 10.0, 0.5, 1.0, 0.5).is_ok());
    }

    #[test]
    fn steering_at_broadside_is_all_ones() {
        let cfg = ScenarioConfig::default();
        let r = maxvar_apv(&cfg).unwrap();
        let a = steering_vector(Angle::from_degrees(0.0).unwrap(), &r, &cfg);
        for e in a.entries() {
            assert_abs_diff_eq!(e.re, 1.0, epsilon = 1e-15);
            assert_abs_diff_eq!(e.im, 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn steering_quarter_wavelength_pair() {
        // r = [−0.25, 0.25]λ at sinθ → 1 gives phases ∓π/2, i.e. [−j, +j]
        let cfg = ScenarioConfig::default();
        let r = two_element(&cfg, [-0.25, 0.25]);
        let theta = Angle::from_radians((89.9f64).to_radians()).unwrap();
        let a = steering_vector(theta, &r, &cfg);
        let s = theta.radians().sin();
        assert_relative_eq!(
            a.entries()[0].im,
            -(std::f64::consts::FRAC_PI_2 * s).sin(),
            epsilon = 1e-12
        );
        assert_relative_eq!(
            a.entries()[1].im,
            (std::f64::consts::FRAC_PI_2 * s).sin(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn steering_half_wavelength_pair_at_30_degrees() {
        // sin 30° = 1/2 and r = [−1, 1]λ give phases ∓π, i.e. [−1, −1]
        let cfg = ScenarioConfig::default();
        let r = two_element(&cfg, [-1.0, 1.0]);
        let a = steering_vector(Angle::from_degrees(30.0).unwrap(), &r, &cfg);
        for e in a.entries() {
            assert_relative_eq!(e.re, -1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(e.im, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn derivative_at_broadside() {
        // θ = 0, r = [−1, 1]λ → [−j2π, +j2π]
        let cfg = ScenarioConfig::default();
        let r = two_element(&cfg, [-1.0, 1.0]);
        let da = steering_derivative(Angle::from_degrees(0.0).unwrap(), &r, &cfg);
        let two_pi = 2.0 * std::f64::consts::PI;
        assert_abs_diff_eq!(da.entries()[0].re, 0.0, epsilon = 1e-12);
        assert_relative_eq!(da.entries()[0].im, -two_pi, epsilon = 1e-12);
        assert_relative_eq!(da.entries()[1].im, two_pi, epsilon = 1e-12);
    }

    #[test]
    fn derivative_vanishes_at_origin_element() {
        let cfg = ScenarioConfig {
            num_elements: 3,
            ..ScenarioConfig::default()
        };
        let r = AntennaPositionVector::new(vec![-1.0, 0.0, 1.0], &cfg).unwrap();
        let da = steering_derivative(Angle::from_degrees(25.0).unwrap(), &r, &cfg);
        assert_eq!(da.entries()[1], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn steering_norm_is_num_elements() {
        let cfg = ScenarioConfig::default();
        let r = maxvar_apv(&cfg).unwrap();
        for deg in [-80.0, -15.5, 0.0, 10.0, 47.3] {
            let a = steering_vector(Angle::from_degrees(deg).unwrap(), &r, &cfg);
            assert_relative_eq!(a.norm_sq(), 6.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let cfg = ScenarioConfig::default();
        let r = maxvar_apv(&cfg).unwrap();
        let h = 1e-6;
        for deg in [-60.0, -10.0, 0.0, 10.0, 33.3, 80.0] {
            let theta = Angle::from_degrees(deg).unwrap();
            let plus = steering_vector(Angle::from_radians(theta.radians() + h).unwrap(), &r, &cfg);
            let minus =
                steering_vector(Angle::from_radians(theta.radians() - h).unwrap(), &r, &cfg);
            let da = steering_derivative(theta, &r, &cfg);
            let mut err = 0.0f64;
            let mut scale = 0.0f64;
            for l in 0..r.len() {
                let fd = (plus.entries()[l] - minus.entries()[l]) / (2.0 * h);
                err += (fd - da.entries()[l]).norm_sqr();
                scale += da.entries()[l].norm_sqr();
            }
            assert!((err / scale).sqrt() < 1e-6, "fd mismatch at θ = {deg}°");
        }
    }
}
