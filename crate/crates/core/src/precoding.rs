//! Two-beam precoding: the optimal directional + derivative beam pair and
//! general precoding-matrix handling.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::AntennaPositionVector;
use crate::model::{steering_derivative, steering_vector, Angle, ScenarioConfig, SteeringVector};

/// Tolerance on the unit-power invariant `trace(FFᴴ) = 1`.
pub const TRACE_TOL: f64 = 1e-10;

/// Fraction `γ ∈ (0, 1)` of the transmit power allocated to the directional
/// beam; the derivative beam gets `1 − γ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerAllocation {
    gamma: f64,
}

impl PowerAllocation {
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma < 1.0) {
            return Err(Error::Config(format!(
                "power allocation gamma must lie in (0, 1), got {gamma}"
            )));
        }
        Ok(PowerAllocation { gamma })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// The diagonal power split `(γ, 1 − γ)`; nonnegative entries summing
    /// to 1 by construction.
    pub fn lambda(&self) -> [f64; 2] {
        [self.gamma, 1.0 - self.gamma]
    }
}

/// Complex `L×G` precoding matrix `F = [f_1 … f_G]` with unit total power
/// `trace(FFᴴ) = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct PrecodingMatrix {
    /// Column-major storage: `cols[g][l]`.
    cols: Vec<Vec<Complex64>>,
}

impl PrecodingMatrix {
    /// Wraps explicit columns, enforcing equal lengths and unit total power.
    pub fn from_columns(cols: Vec<Vec<Complex64>>) -> Result<Self> {
        if cols.is_empty() || cols[0].is_empty() {
            return Err(Error::Config("precoding matrix must be nonempty".into()));
        }
        let l = cols[0].len();
        if cols.iter().any(|c| c.len() != l) {
            return Err(Error::Config(
                "precoding matrix columns must have equal lengths".into(),
            ));
        }
        let f = PrecodingMatrix { cols };
        let trace = f.trace_gram();
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::Config(format!(
                "trace(FFᴴ) = {trace} violates the unit-power constraint"
            )));
        }
        Ok(f)
    }

    pub fn num_elements(&self) -> usize {
        self.cols[0].len()
    }

    pub fn num_beams(&self) -> usize {
        self.cols.len()
    }

    pub fn columns(&self) -> &[Vec<Complex64>] {
        &self.cols
    }

    /// `trace(FFᴴ) = Σ_g ‖f_g‖²`.
    pub fn trace_gram(&self) -> f64 {
        self.cols
            .iter()
            .map(|c| c.iter().map(|e| e.norm_sqr()).sum::<f64>())
            .sum()
    }

    /// Beam responses `w_g = vᵀ f_g` for a steering vector `v` (plain or
    /// derivative). Note the transpose — no conjugation of `v`.
    pub fn response(&self, v: &SteeringVector) -> Vec<Complex64> {
        debug_assert_eq!(v.len(), self.num_elements());
        self.cols
            .iter()
            .map(|col| {
                v.entries()
                    .iter()
                    .zip(col)
                    .map(|(a, f)| a * f)
                    .sum::<Complex64>()
            })
            .collect()
    }
}

/// The optimal two-beam precoder matched to direction `theta`:
/// column 1 is `√γ·a*/‖a‖` (directional), column 2 is `√(1−γ)·ȧ*/‖ȧ‖`
/// (derivative). Unit total power holds by construction.
pub fn optimal_precoder(
    theta: Angle,
    r: &AntennaPositionVector,
    gamma: &PowerAllocation,
    cfg: &ScenarioConfig,
) -> Result<PrecodingMatrix> {
    let a = steering_vector(theta, r, cfg);
    let da = steering_derivative(theta, r, cfg);
    let a_norm = a.norm_sq().sqrt();
    let da_norm = da.norm_sq().sqrt();
    if da_norm <= 1e-300 {
        return Err(Error::DegenerateGeometry(format!(
            "derivative beam has zero norm at θ = {}° (all positions zero?)",
            theta.degrees()
        )));
    }
    let [g1, g2] = gamma.lambda();
    let c1 = g1.sqrt() / a_norm;
    let c2 = g2.sqrt() / da_norm;
    let col1 = a.entries().iter().map(|e| e.conj() * c1).collect();
    let col2 = da.entries().iter().map(|e| e.conj() * c2).collect();
    // construction satisfies the trace invariant; from_columns re-checks it
    PrecodingMatrix::from_columns(vec![col1, col2])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::maxvar_apv;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn setup() -> (ScenarioConfig, AntennaPositionVector) {
        let cfg = ScenarioConfig::default();
        let r = maxvar_apv(&cfg).unwrap();
        (cfg, r)
    }

    #[test]
    fn power_allocation_bounds() {
        assert!(PowerAllocation::new(0.0).is_err());
        assert!(PowerAllocation::new(1.0).is_err());
        let p = PowerAllocation::new(0.3).unwrap();
        assert_relative_eq!(p.lambda()[0] + p.lambda()[1], 1.0);
    }

    #[test]
    fn optimal_precoder_has_unit_power_and_split() {
        let (cfg, r) = setup();
        for gamma in [0.1, 0.5, 0.9] {
            let f = optimal_precoder(
                Angle::from_degrees(10.0).unwrap(),
                &r,
                &PowerAllocation::new(gamma).unwrap(),
                &cfg,
            )
            .unwrap();
            assert_abs_diff_eq!(f.trace_gram(), 1.0, epsilon = 1e-12);
            let p1: f64 = f.columns()[0].iter().map(|e| e.norm_sqr()).sum();
            let p2: f64 = f.columns()[1].iter().map(|e| e.norm_sqr()).sum();
            assert_abs_diff_eq!(p1, gamma, epsilon = 1e-12);
            assert_abs_diff_eq!(p2, 1.0 - gamma, epsilon = 1e-12);
        }
    }

    #[test]
    fn beams_are_orthogonal_for_zero_mean_layouts() {
        // aᵀ·conj(ȧ) ∝ Σ r_l, which vanishes for symmetric layouts, so the
        // cross response aᵀFFᴴȧ* must vanish too
        let (cfg, r) = setup();
        let theta = Angle::from_degrees(10.0).unwrap();
        let f = optimal_precoder(theta, &r, &PowerAllocation::new(0.5).unwrap(), &cfg).unwrap();
        let w = f.response(&crate::model::steering_vector(theta, &r, &cfg));
        let wd = f.response(&crate::model::steering_derivative(theta, &r, &cfg));
        let cross: Complex64 = w.iter().zip(&wd).map(|(a, b)| a * b.conj()).sum();
        assert_abs_diff_eq!(cross.norm(), 0.0, epsilon = 1e-10);
    }

    #[test]
    fn gamma_to_one_shrinks_derivative_column() {
        let (cfg, r) = setup();
        let theta = Angle::from_degrees(10.0).unwrap();
        let f =
            optimal_precoder(theta, &r, &PowerAllocation::new(1.0 - 1e-9).unwrap(), &cfg).unwrap();
        let p2: f64 = f.columns()[1].iter().map(|e| e.norm_sqr()).sum();
        assert!(p2 < 2e-9);
    }

    #[test]
    fn from_columns_rejects_power_violation() {
        let col = vec![Complex64::new(1.0, 0.0); 4];
        assert!(PrecodingMatrix::from_columns(vec![col]).is_err());
    }
}
