//! Antenna position vectors: validation, the symmetric two-parameter
//! placement family, and the MaxVar/UFA/UHW reference layouts.

use crate::error::{Error, Result};
use crate::model::ScenarioConfig;

/// Tolerance for spacing and aperture comparisons; grid arithmetic in binary
/// floating point makes exact comparisons brittle.
pub const SPACING_TOL: f64 = 1e-9;

/// Sorted antenna positions along the array axis, in wavelength units.
///
/// Valid position vectors keep every neighboring pair at least the minimum
/// spacing `d` apart, span at most the aperture `D`, and stay inside
/// `[−D/2, D/2]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AntennaPositionVector {
    positions: Vec<f64>,
}

/// Shorthand used throughout the crate.
pub type Apv = AntennaPositionVector;

impl AntennaPositionVector {
    /// Validates and wraps a sorted position vector.
    pub fn new(positions: Vec<f64>, cfg: &ScenarioConfig) -> Result<Self> {
        if positions.len() != cfg.num_elements {
            return Err(Error::Constraint {
                constraint: "element count",
                detail: format!(
                    "expected {} positions, got {}",
                    cfg.num_elements,
                    positions.len()
                ),
            });
        }
        if positions.iter().any(|p| !p.is_finite()) {
            return Err(Error::Constraint {
                constraint: "finite positions",
                detail: "non-finite entry".into(),
            });
        }
        for w in positions.windows(2) {
            if w[1] - w[0] < cfg.min_spacing - SPACING_TOL {
                return Err(Error::Constraint {
                    constraint: "minimum spacing",
                    detail: format!(
                        "gap {} between {} and {} is below d = {}",
                        w[1] - w[0],
                        w[0],
                        w[1],
                        cfg.min_spacing
                    ),
                });
            }
        }
        let span = positions[positions.len() - 1] - positions[0];
        if span > cfg.aperture + SPACING_TOL {
            return Err(Error::Constraint {
                constraint: "aperture",
                detail: format!("span {} exceeds D = {}", span, cfg.aperture),
            });
        }
        let half = cfg.aperture / 2.0 + SPACING_TOL;
        if positions.iter().any(|&p| p.abs() > half) {
            return Err(Error::Constraint {
                constraint: "segment bounds",
                detail: format!("positions must lie within ±{}", cfg.aperture / 2.0),
            });
        }
        Ok(AntennaPositionVector { positions })
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Second moment `rᵀr` in λ².
    pub fn position_moment(&self) -> f64 {
        self.positions.iter().map(|p| p * p).sum()
    }

    pub fn mean(&self) -> f64 {
        self.positions.iter().sum::<f64>() / self.positions.len() as f64
    }

    pub fn aperture(&self) -> f64 {
        self.positions[self.positions.len() - 1] - self.positions[0]
    }
}

/// Second moment `rᵀr` of a position vector, in λ².
pub fn position_moment(r: &AntennaPositionVector) -> f64 {
    r.position_moment()
}

/// Parameters `(a, b)` of the six-element symmetric family: outermost pairs
/// pinned at `±D/2`, then spacing `a` inward, then `b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetricFamilyParams {
    a: f64,
    b: f64,
}

impl SymmetricFamilyParams {
    /// Validates `a, b ∈ [d, (D−3d)/2]` and the center gap
    /// `2·(D/2 − a − b) ≥ d`.
    pub fn new(a: f64, b: f64, cfg: &ScenarioConfig) -> Result<Self> {
        let d = cfg.min_spacing;
        let hi = (cfg.aperture - 3.0 * d) / 2.0;
        for (name, v) in [("a", a), ("b", b)] {
            if !(d - SPACING_TOL..=hi + SPACING_TOL).contains(&v) {
                return Err(Error::Constraint {
                    constraint: "family parameter range",
                    detail: format!("{name} = {v} outside [{d}, {hi}]"),
                });
            }
        }
        let inner_gap = cfg.aperture - 2.0 * (a + b);
        if inner_gap < d - SPACING_TOL {
            return Err(Error::Constraint {
                constraint: "center gap",
                detail: format!("inner gap {inner_gap} below d = {d} (a + b too large)"),
            });
        }
        Ok(SymmetricFamilyParams { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }
}

/// Builds the symmetric six-element layout
/// `[−D/2, −(D/2−a), −(D/2−a−b), D/2−a−b, D/2−a, D/2]`.
pub fn symmetric_apv(
    params: &SymmetricFamilyParams,
    cfg: &ScenarioConfig,
) -> Result<AntennaPositionVector> {
    if cfg.num_elements != 6 {
        return Err(Error::Config(format!(
            "the symmetric (a, b) family is defined for six elements, got L = {}",
            cfg.num_elements
        )));
    }
    let half = cfg.aperture / 2.0;
    let (a, b) = (params.a, params.b);
    let positions = vec![
        -half,
        -(half - a),
        -(half - a - b),
        half - a - b,
        half - a,
        half,
    ];
    AntennaPositionVector::new(positions, cfg)
}

/// Maximum-variance layout: antennas split into two groups packed at the
/// segment ends with minimal spacing `d`. Maximizes `rᵀr` under the aperture
/// and spacing constraints. For odd `L` the extra element goes to the `+D/2`
/// group.
pub fn maxvar_apv(cfg: &ScenarioConfig) -> Result<AntennaPositionVector> {
    cfg.validate()?;
    let half = cfg.aperture / 2.0;
    let d = cfg.min_spacing;
    let n_plus = cfg.num_elements.div_ceil(2);
    let n_minus = cfg.num_elements / 2;
    let mut positions = Vec::with_capacity(cfg.num_elements);
    for i in 0..n_minus {
        positions.push(-half + i as f64 * d);
    }
    for i in 0..n_plus {
        positions.push(half - (n_plus - 1 - i) as f64 * d);
    }
    AntennaPositionVector::new(positions, cfg)
}

/// Uniform full-aperture layout: spacing `D/(L−1)`, centered.
pub fn ufa_apv(cfg: &ScenarioConfig) -> Result<AntennaPositionVector> {
    cfg.validate()?;
    let spacing = cfg.aperture / (cfg.num_elements - 1) as f64;
    if spacing < cfg.min_spacing - SPACING_TOL {
        return Err(Error::Constraint {
            constraint: "minimum spacing",
            detail: format!(
                "uniform full-aperture spacing {spacing} below d = {}",
                cfg.min_spacing
            ),
        });
    }
    let half = cfg.aperture / 2.0;
    let positions = (0..cfg.num_elements)
        .map(|i| -half + i as f64 * spacing)
        .collect();
    AntennaPositionVector::new(positions, cfg)
}

/// Uniform half-wavelength layout: spacing `λ/2`, centered at 0.
pub fn uhw_apv(cfg: &ScenarioConfig) -> Result<AntennaPositionVector> {
    cfg.validate()?;
    let spacing = cfg.wavelength / 2.0;
    if spacing < cfg.min_spacing - SPACING_TOL {
        return Err(Error::Constraint {
            constraint: "minimum spacing",
            detail: format!(
                "half-wavelength spacing {spacing} below d = {}",
                cfg.min_spacing
            ),
        });
    }
    let l = cfg.num_elements;
    let offset = (l - 1) as f64 / 2.0;
    let positions = (0..l).map(|i| (i as f64 - offset) * spacing).collect();
    AntennaPositionVector::new(positions, cfg)
}
