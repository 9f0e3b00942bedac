//! Cramér-Rao bound evaluation: the general form for arbitrary precoders and
//! its closed form under the matched two-beam precoder.

use crate::error::{Error, Result};
use crate::exec;
use crate::geometry::AntennaPositionVector;
use crate::model::{steering_derivative, steering_vector, Angle, ScenarioConfig};
use crate::precoding::{optimal_precoder, PowerAllocation, PrecodingMatrix};
use crate::scc::UncertaintyRegion;

/// Tolerance below which the numerically evaluated Fisher term is treated as
/// a genuine negative (Cauchy-Schwarz guarantees it is nonnegative in exact
/// arithmetic).
const FISHER_NEG_TOL: f64 = -1e-9;

/// Tolerance on the zero-mean precondition of [`crb_closed_form`].
const ZERO_MEAN_TOL: f64 = 1e-9;

/// A CRB on the angle-estimate variance, in rad².
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct CrbValue {
    variance: f64,
}

impl CrbValue {
    pub fn from_variance(variance: f64) -> Result<Self> {
        if !(variance.is_finite() && variance > 0.0) {
            return Err(Error::Config(format!(
                "CRB variance must be positive and finite, got {variance}"
            )));
        }
        Ok(CrbValue { variance })
    }

    /// The bound itself: a variance in rad².
    pub fn rad2(self) -> f64 {
        self.variance
    }

    /// Root-CRB in degrees — the scale used for external reporting.
    pub fn sqrt_degrees(self) -> f64 {
        self.variance.sqrt().to_degrees()
    }
}

/// CRB for an arbitrary precoder:
/// `[2·SNR·(‖Fᴴȧ*‖² − |aᵀFFᴴȧ*|²/‖Fᴴa*‖²)]⁻¹`
/// evaluated through the beam responses `w_g = aᵀf_g`, `ẇ_g = ȧᵀf_g`.
pub fn crb_general(
    r: &AntennaPositionVector,
    f: &PrecodingMatrix,
    theta: Angle,
    cfg: &ScenarioConfig,
) -> Result<CrbValue> {
    let a = steering_vector(theta, r, cfg);
    let da = steering_derivative(theta, r, cfg);
    let w = f.response(&a);
    let wd = f.response(&da);
    let sum_w2: f64 = w.iter().map(|e| e.norm_sqr()).sum();
    let sum_wd2: f64 = wd.iter().map(|e| e.norm_sqr()).sum();
    if sum_w2 <= 1e-30 {
        return Err(Error::Evaluation {
            theta_deg: theta.degrees(),
            reason: "precoder blind at θ (zero directional response)".into(),
        });
    }
    let cross: num_complex::Complex64 = w.iter().zip(&wd).map(|(wg, dg)| wg * dg.conj()).sum();
    let fisher = 2.0 * cfg.snr_linear * (sum_wd2 - cross.norm_sqr() / sum_w2);
    if fisher < FISHER_NEG_TOL {
        return Err(Error::Evaluation {
            theta_deg: theta.degrees(),
            reason: format!("negative Fisher term {fisher}"),
        });
    }
    if fisher <= 0.0 {
        return Err(Error::Evaluation {
            theta_deg: theta.degrees(),
            reason: "nonpositive Fisher term (uninformative precoder)".into(),
        });
    }
    CrbValue::from_variance(1.0 / fisher)
}

/// Closed-form CRB under the matched optimal precoder:
/// `[2·SNR·(1−γ)·((2π/λ)·cosθ)²·rᵀr]⁻¹`.
///
/// Exact only for zero-mean position vectors (the directional/derivative
/// cross term is proportional to `Σ r_l`), so a zero mean is enforced as a
/// precondition; [`crb_general`] is the ground truth for non-centered
/// layouts.
pub fn crb_closed_form(
    r: &AntennaPositionVector,
    theta: Angle,
    cfg: &ScenarioConfig,
) -> Result<CrbValue> {
    if r.mean().abs() > ZERO_MEAN_TOL {
        return Err(Error::Constraint {
            constraint: "zero mean",
            detail: format!(
                "closed form requires Σ r_l = 0, got mean {}; use crb_general",
                r.mean()
            ),
        });
    }
    let moment = r.position_moment();
    if moment <= 0.0 {
        return Err(Error::DegenerateGeometry(
            "closed form requires rᵀr > 0".into(),
        ));
    }
    let slope = cfg.wavenumber() * theta.radians().cos();
    let fisher = 2.0 * cfg.snr_linear * (1.0 - cfg.gamma) * slope * slope * moment;
    CrbValue::from_variance(1.0 / fisher)
}

/// Worst case over an uncertainty region: the maximal CRB and its attaining
/// angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorstCase {
    pub crb: CrbValue,
    pub angle: Angle,
}

/// Per-angle CRB curve under the precoder matched to the region center.
/// Individual angles may fail (blind precoder); such rows carry the error.
pub fn crb_profile(
    r: &AntennaPositionVector,
    region: &UncertaintyRegion,
    cfg: &ScenarioConfig,
) -> Result<Vec<(Angle, Result<CrbValue>)>> {
    let f = matched_precoder(region.center(), r, cfg)?;
    Ok(profile_values(r, &f, region, cfg, false))
}

/// Maximum of [`crb_general`] over the region under the precoder matched to
/// the region center, with the attaining angle. Ties break toward the angle
/// nearest the center, then toward the smaller angle, independently of
/// evaluation order.
pub fn worst_case_crb(
    r: &AntennaPositionVector,
    region: &UncertaintyRegion,
    cfg: &ScenarioConfig,
) -> Result<WorstCase> {
    worst_case_crb_impl(r, region, cfg, false)
}

/// Strategy-explicit worst case: `force_seq` keeps the angle scan on the
/// current thread (used by the optimizer, whose cells are already parallel).
pub(crate) fn worst_case_crb_impl(
    r: &AntennaPositionVector,
    region: &UncertaintyRegion,
    cfg: &ScenarioConfig,
    force_seq: bool,
) -> Result<WorstCase> {
    let f = matched_precoder(region.center(), r, cfg)?;
    let values = profile_values(r, &f, region, cfg, force_seq);
    reduce_worst(region, values)
}

/// Builds the optimal precoder at the region center with the configured
/// power split.
fn matched_precoder(
    center: Angle,
    r: &AntennaPositionVector,
    cfg: &ScenarioConfig,
) -> Result<PrecodingMatrix> {
    optimal_precoder(center, r, &PowerAllocation::new(cfg.gamma)?, cfg)
}

fn profile_values(
    r: &AntennaPositionVector,
    f: &PrecodingMatrix,
    region: &UncertaintyRegion,
    cfg: &ScenarioConfig,
    force_seq: bool,
) -> Vec<(Angle, Result<CrbValue>)> {
    let angles = region.angles();
    let eval = |i: usize| (angles[i], crb_general(r, f, angles[i], cfg));
    if force_seq {
        exec::map_indexed_seq(angles.len(), eval)
    } else {
        exec::map_indexed(angles.len(), eval)
    }
}

/// Sequential, order-independent arg-max reduction with the documented
/// tie-break (nearest to the center, then smaller angle).
fn reduce_worst(
    region: &UncertaintyRegion,
    values: Vec<(Angle, Result<CrbValue>)>,
) -> Result<WorstCase> {
    let center = region.center().degrees();
    let mut best: Option<WorstCase> = None;
    for (angle, value) in values {
        let crb = value?;
        let better = match &best {
            None => true,
            Some(cur) => {
                let (v, bv) = (crb.rad2(), cur.crb.rad2());
                if v != bv {
                    v > bv
                } else {
                    let (d, bd) = (
                        (angle.degrees() - center).abs(),
                        (cur.angle.degrees() - center).abs(),
                    );
                    d < bd || (d == bd && angle.degrees() < cur.angle.degrees())
                }
            }
        };
        if better {
            best = Some(WorstCase { crb, angle });
        }
    }
    best.ok_or_else(|| Error::Config("uncertainty region has no angles".into()))
}
