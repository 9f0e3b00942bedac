//! Exhaustive min-max placement search over the symmetric `(a, b)` family,
//! and the region-size sweep comparing the optimized placement against the
//! fixed reference layouts.

use crate::crb::{worst_case_crb_impl, CrbValue};
use crate::error::{Error, Result};
use crate::exec;
use crate::geometry::{maxvar_apv, symmetric_apv, ufa_apv, uhw_apv, SymmetricFamilyParams};
use crate::model::{Angle, ScenarioConfig};
use crate::scc::{scc_feasible, UncertaintyRegion};
use crate::util::grid_values;

/// Rectangular `(a, b)` search lattice in λ units.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    a_min: f64,
    a_max: f64,
    b_min: f64,
    b_max: f64,
    step: f64,
}

impl GridSpec {
    /// Validates bounds against the family parameter range `[d, (D−3d)/2]`.
    pub fn new(
        a_min: f64,
        a_max: f64,
        b_min: f64,
        b_max: f64,
        step: f64,
        cfg: &ScenarioConfig,
    ) -> Result<Self> {
        if !step.is_finite() || step <= 0.0 {
            return Err(Error::Config(format!(
                "placement grid step must be positive, got {step}"
            )));
        }
        let lo = cfg.min_spacing;
        let hi = (cfg.aperture - 3.0 * cfg.min_spacing) / 2.0;
        for (name, min, max) in [("a", a_min, a_max), ("b", b_min, b_max)] {
            if !min.is_finite() || !max.is_finite() || min > max {
                return Err(Error::Config(format!(
                    "{name} bounds out of order: [{min}, {max}]"
                )));
            }
            if min < lo - 1e-9 || max > hi + 1e-9 {
                return Err(Error::Config(format!(
                    "{name} bounds [{min}, {max}] outside the family range [{lo}, {hi}]"
                )));
            }
        }
        Ok(GridSpec {
            a_min,
            a_max,
            b_min,
            b_max,
            step,
        })
    }

    /// Full parameter box `[d, (D−3d)/2]²` at the given step.
    pub fn full_box(step: f64, cfg: &ScenarioConfig) -> Result<Self> {
        let lo = cfg.min_spacing;
        let hi = (cfg.aperture - 3.0 * cfg.min_spacing) / 2.0;
        Self::new(lo, hi, lo, hi, step, cfg)
    }

    pub fn a_values(&self) -> Vec<f64> {
        grid_values(self.a_min, self.a_max, self.step)
    }

    pub fn b_values(&self) -> Vec<f64> {
        grid_values(self.b_min, self.b_max, self.step)
    }

    pub fn step(&self) -> f64 {
        self.step
    }
}

/// Search options. `diagnostics` evaluates the worst-case CRB on
/// SCC-infeasible (but geometrically valid) cells too, so that a feasibility
/// map can shade them; the arg-min ignores them either way.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OptimizeOptions {
    pub diagnostics: bool,
}

/// Per-cell search record.
#[derive(Debug, Clone, PartialEq)]
pub struct CellRecord {
    pub a: f64,
    pub b: f64,
    /// Whether `(a, b)` yields a valid placement at all (spacing, aperture,
    /// center gap).
    pub geometry_ok: bool,
    /// Geometry valid *and* the ambiguity constraint holds.
    pub feasible: bool,
    /// Maximal sidelobe correlation (absent for invalid geometry).
    pub max_sidelobe_scc: Option<f64>,
    /// Worst-case CRB over the region (absent for infeasible cells unless
    /// diagnostics are on).
    pub worst_crb: Option<CrbValue>,
    pub worst_angle: Option<Angle>,
}

/// The search winner.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BestCell {
    pub params: SymmetricFamilyParams,
    pub worst_crb: CrbValue,
    pub worst_angle: Angle,
}

/// Least-violating cell, reported for diagnostics when the constraint cannot
/// be met anywhere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeastViolating {
    pub params: SymmetricFamilyParams,
    pub max_sidelobe_scc: f64,
}

/// Outcome of [`optimize_placement`]: every cell, the feasible arg-min (ties
/// broken toward lexicographically smallest `(a, b)`), and the cell closest
/// to feasibility.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationReport {
    pub cells: Vec<CellRecord>,
    pub best: Option<BestCell>,
    pub least_violating: Option<LeastViolating>,
    pub feasible_count: usize,
    pub total_cells: usize,
}

impl OptimizationReport {
    pub fn feasible_fraction(&self) -> f64 {
        if self.total_cells == 0 {
            0.0
        } else {
            self.feasible_count as f64 / self.total_cells as f64
        }
    }
}

fn evaluate_cell(
    a: f64,
    b: f64,
    region: &UncertaintyRegion,
    cfg: &ScenarioConfig,
    opts: OptimizeOptions,
) -> Result<CellRecord> {
    let mut record = CellRecord {
        a,
        b,
        geometry_ok: false,
        feasible: false,
        max_sidelobe_scc: None,
        worst_crb: None,
        worst_angle: None,
    };
    let params = match SymmetricFamilyParams::new(a, b, cfg) {
        Ok(p) => p,
        Err(_) => return Ok(record), // outside the family: recorded infeasible
    };
    let r = symmetric_apv(&params, cfg)?;
    record.geometry_ok = true;
    let feas = scc_feasible(&r, region, cfg)?;
    record.max_sidelobe_scc = Some(feas.max_sidelobe);
    record.feasible = feas.feasible;
    if record.feasible || opts.diagnostics {
        // cells already run in parallel; keep the inner angle scan sequential
        let wc = worst_case_crb_impl(&r, region, cfg, true);
        match wc {
            Ok(wc) => {
                record.worst_crb = Some(wc.crb);
                record.worst_angle = Some(wc.angle);
            }
            Err(e) if record.feasible => return Err(e),
            Err(_) => {} // diagnostics-only cell: leave the CRB absent
        }
    }
    Ok(record)
}

fn reduce_report(
    cells: Vec<Result<CellRecord>>,
    total: usize,
    cfg: &ScenarioConfig,
) -> Result<OptimizationReport> {
    let cells = cells.into_iter().collect::<Result<Vec<_>>>()?;
    let mut best: Option<BestCell> = None;
    let mut least: Option<LeastViolating> = None;
    let mut feasible_count = 0usize;
    // cells arrive in lexicographic (a, b) order; strict comparisons keep the
    // first minimum, which realizes the documented tie-break
    for cell in &cells {
        if let (true, Some(scc)) = (cell.geometry_ok, cell.max_sidelobe_scc) {
            if least.as_ref().is_none_or(|l| scc < l.max_sidelobe_scc) {
                least = Some(LeastViolating {
                    params: SymmetricFamilyParams::new(cell.a, cell.b, cfg)?,
                    max_sidelobe_scc: scc,
                });
            }
        }
        if !cell.feasible {
            continue;
        }
        feasible_count += 1;
        let (crb, angle) = match (cell.worst_crb, cell.worst_angle) {
            (Some(c), Some(w)) => (c, w),
            _ => continue,
        };
        if best
            .as_ref()
            .is_none_or(|b| crb.rad2() < b.worst_crb.rad2())
        {
            best = Some(BestCell {
                params: SymmetricFamilyParams::new(cell.a, cell.b, cfg)?,
                worst_crb: crb,
                worst_angle: angle,
            });
        }
    }
    Ok(OptimizationReport {
        cells,
        best,
        least_violating: least,
        feasible_count,
        total_cells: total,
    })
}

fn optimize_with<M>(
    grid: &GridSpec,
    region: &UncertaintyRegion,
    cfg: &ScenarioConfig,
    opts: OptimizeOptions,
    mapper: M,
) -> Result<OptimizationReport>
where
    M: Fn(usize, &(dyn Fn(usize) -> Result<CellRecord> + Sync)) -> Vec<Result<CellRecord>>,
{
    let a_values = grid.a_values();
    let b_values = grid.b_values();
    let total = a_values.len() * b_values.len();
    if total == 0 {
        return Err(Error::Config("placement grid is empty".into()));
    }
    let eval = |idx: usize| {
        let a = a_values[idx / b_values.len()];
        let b = b_values[idx % b_values.len()];
        evaluate_cell(a, b, region, cfg, opts)
    };
    let cells = mapper(total, &eval);
    reduce_report(cells, total, cfg)
}

/// Min-max placement search: for every `(a, b)` cell, checks geometric
/// validity and the ambiguity constraint, evaluates the worst-case CRB under
/// the center-matched precoder, and returns the feasible arg-min.
///
/// Cells are evaluated in parallel when the `parallel` feature is enabled;
/// the reduction is sequential and order-independent, so reports are
/// identical across strategies.
pub fn optimize_placement(
    grid: &GridSpec,
    region: &UncertaintyRegion,
    cfg: &ScenarioConfig,
    opts: OptimizeOptions,
) -> Result<OptimizationReport> {
    optimize_with(grid, region, cfg, opts, |n, f| exec::map_indexed(n, f))
}

/// Single-threaded variant of [`optimize_placement`] with identical output;
/// kept public for benchmarking and verification.
pub fn optimize_placement_sequential(
    grid: &GridSpec,
    region: &UncertaintyRegion,
    cfg: &ScenarioConfig,
    opts: OptimizeOptions,
) -> Result<OptimizationReport> {
    optimize_with(grid, region, cfg, opts, |n, f| exec::map_indexed_seq(n, f))
}

/// Identity of a sweep curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolutionKind {
    /// Per-span optimized placement.
    Opt,
    MaxVar,
    Ufa,
    Uhw,
    /// The largest-span optimum, re-evaluated (pinned) at every span.
    OptPinned,
}

impl SolutionKind {
    pub fn name(self) -> &'static str {
        match self {
            SolutionKind::Opt => "opt",
            SolutionKind::MaxVar => "maxvar",
            SolutionKind::Ufa => "ufa",
            SolutionKind::Uhw => "uhw",
            SolutionKind::OptPinned => "opt-pinned",
        }
    }
}

/// One sweep table entry: a solution evaluated on one region size.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub span_deg: f64,
    pub solution: SolutionKind,
    /// Family parameters for the optimized rows, when a feasible optimum
    /// exists.
    pub params: Option<SymmetricFamilyParams>,
    pub feasible: bool,
    /// Worst-case CRB; for the fixed layouts it is reported even when the
    /// ambiguity constraint fails (flagged infeasible), mirroring a plotted
    /// curve. Absent only when no feasible optimum exists for an `opt` row.
    pub worst_crb: Option<CrbValue>,
}

/// Worst-case CRB of each solution for a list of region spans `ΔP`, all
/// centered on `theta_c`: the per-span optimum, the three reference layouts,
/// and the largest-span optimum pinned across every span.
pub fn sweep_region_size(
    spans_deg: &[f64],
    theta_c: Angle,
    grid: &GridSpec,
    region_step_deg: f64,
    kappa_scc: f64,
    cfg: &ScenarioConfig,
) -> Result<Vec<SweepRow>> {
    if spans_deg.is_empty() {
        return Err(Error::Config("sweep span list is empty".into()));
    }
    if spans_deg.iter().any(|s| !s.is_finite() || *s < 0.0) {
        return Err(Error::Config("sweep spans must be nonnegative".into()));
    }
    let tc = theta_c.degrees();
    let region_for = |span: f64| UncertaintyRegion::from_span(tc, span, region_step_deg, kappa_scc);

    // per-span optima
    let mut optima = Vec::with_capacity(spans_deg.len());
    for &span in spans_deg {
        let report = optimize_placement(grid, &region_for(span)?, cfg, OptimizeOptions::default())?;
        optima.push(report.best);
    }

    // pin the optimum of the largest span
    let largest_idx = spans_deg
        .iter()
        .enumerate()
        .max_by(|(_, x), (_, y)| x.partial_cmp(y).expect("spans validated finite"))
        .map(|(i, _)| i)
        .expect("nonempty");
    let pinned = optima[largest_idx].map(|b| b.params);
    let pinned_apv = pinned.map(|p| symmetric_apv(&p, cfg)).transpose()?;

    let maxvar = maxvar_apv(cfg)?;
    let ufa = ufa_apv(cfg)?;
    let uhw = uhw_apv(cfg)?;

    let mut rows = Vec::with_capacity(spans_deg.len() * 5);
    for (i, &span) in spans_deg.iter().enumerate() {
        let region = region_for(span)?;
        rows.push(match &optima[i] {
            Some(best) => SweepRow {
                span_deg: span,
                solution: SolutionKind::Opt,
                params: Some(best.params),
                feasible: true,
                worst_crb: Some(best.worst_crb),
            },
            None => SweepRow {
                span_deg: span,
                solution: SolutionKind::Opt,
                params: None,
                feasible: false,
                worst_crb: None,
            },
        });
        for (solution, r) in [
            (SolutionKind::MaxVar, &maxvar),
            (SolutionKind::Ufa, &ufa),
            (SolutionKind::Uhw, &uhw),
        ] {
            let feas = scc_feasible(r, &region, cfg)?;
            let wc = worst_case_crb_impl(r, &region, cfg, false)?;
            rows.push(SweepRow {
                span_deg: span,
                solution,
                params: None,
                feasible: feas.feasible,
                worst_crb: Some(wc.crb),
            });
        }
        rows.push(match (&pinned, &pinned_apv) {
            (Some(params), Some(apv)) => {
                let feas = scc_feasible(apv, &region, cfg)?;
                let wc = worst_case_crb_impl(apv, &region, cfg, false)?;
                SweepRow {
                    span_deg: span,
                    solution: SolutionKind::OptPinned,
                    params: Some(*params),
                    feasible: feas.feasible,
                    worst_crb: Some(wc.crb),
                }
            }
            _ => SweepRow {
                span_deg: span,
                solution: SolutionKind::OptPinned,
                params: None,
                feasible: false,
                worst_crb: None,
            },
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn cfg() -> ScenarioConfig {
        ScenarioConfig::default()
    }

    fn p1() -> UncertaintyRegion {
        UncertaintyRegion::new(0.0, 20.0, 10.0, 0.1, 0.5).unwrap()
    }

    #[test]
    fn grid_spec_validation() {
        let cfg = cfg();
        assert!(GridSpec::new(0.5, 4.25, 0.5, 4.25, 0.05, &cfg).is_ok());
        assert!(GridSpec::new(0.3, 4.25, 0.5, 4.25, 0.05, &cfg).is_err());
        assert!(GridSpec::new(0.5, 4.5, 0.5, 4.25, 0.05, &cfg).is_err());
        assert!(GridSpec::new(0.5, 4.25, 0.5, 4.25, 0.0, &cfg).is_err());
        let g = GridSpec::full_box(0.05, &cfg).unwrap();
        assert_eq!(g.a_values().len(), 76);
        assert_eq!(g.b_values().len(), 76);
    }

    #[test]
    fn coarse_search_on_p1_avoids_packed_ends() {
        // coarse grid for speed; the packed-ends cell (d, d) is ambiguous and
        // must lose to spread layouts under the constraint
        let cfg = cfg();
        let grid = GridSpec::full_box(0.25, &cfg).unwrap();
        let report = optimize_placement(&grid, &p1(), &cfg, OptimizeOptions::default()).unwrap();
        let best = report.best.expect("feasible optimum exists");
        assert!(
            !(best.params.a() == 0.5 && best.params.b() == 0.5),
            "packed-ends layout cannot be the constrained optimum"
        );
        assert!(report.feasible_count > 0);
        assert!(report.feasible_count < report.total_cells);
        assert!(report.least_violating.is_some());
    }

    #[test]
    fn disabled_constraint_selects_packed_ends() {
        let cfg = cfg();
        let grid = GridSpec::full_box(0.25, &cfg).unwrap();
        let region = p1().with_kappa(1.0).unwrap();
        let report = optimize_placement(&grid, &region, &cfg, OptimizeOptions::default()).unwrap();
        let best = report.best.unwrap();
        assert_eq!((best.params.a(), best.params.b()), (0.5, 0.5));
    }

    #[test]
    fn parallel_and_sequential_reports_agree() {
        let cfg = cfg();
        let grid = GridSpec::new(0.5, 2.0, 0.5, 2.0, 0.25, &cfg).unwrap();
        let region = UncertaintyRegion::new(0.0, 20.0, 10.0, 0.5, 0.5).unwrap();
        let opts = OptimizeOptions { diagnostics: true };
        let par = optimize_placement(&grid, &region, &cfg, opts).unwrap();
        let seq = optimize_placement_sequential(&grid, &region, &cfg, opts).unwrap();
        assert_eq!(par, seq);
    }

    #[test]
    fn repeated_runs_are_identical() {
        let cfg = cfg();
        let grid = GridSpec::new(0.5, 2.0, 0.5, 2.0, 0.5, &cfg).unwrap();
        let region = UncertaintyRegion::new(5.0, 15.0, 10.0, 0.5, 0.5).unwrap();
        let a = optimize_placement(&grid, &region, &cfg, OptimizeOptions::default()).unwrap();
        let b = optimize_placement(&grid, &region, &cfg, OptimizeOptions::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn diagnostics_fill_infeasible_cells() {
        let cfg = cfg();
        // the packed-ends corner alone: SCC-infeasible on P¹
        let grid = GridSpec::new(0.5, 0.5, 0.5, 0.5, 0.05, &cfg).unwrap();
        let without = optimize_placement(&grid, &p1(), &cfg, OptimizeOptions::default()).unwrap();
        assert!(without.best.is_none());
        assert!(without.cells[0].worst_crb.is_none());
        assert!(without.cells[0].max_sidelobe_scc.is_some());
        let with =
            optimize_placement(&grid, &p1(), &cfg, OptimizeOptions { diagnostics: true }).unwrap();
        assert!(with.cells[0].worst_crb.is_some());
        // least-violating diagnostics carried on the infeasible result
        let lv = without.least_violating.unwrap();
        assert_relative_eq!(lv.max_sidelobe_scc, 0.9601138341256434, max_relative = 1e-9);
    }

    #[test]
    fn geometry_invalid_cells_are_marked() {
        let cfg = cfg();
        // a + b beyond (D−d)/2: no valid layout
        let grid = GridSpec::new(4.25, 4.25, 4.25, 4.25, 0.05, &cfg).unwrap();
        let report = optimize_placement(&grid, &p1(), &cfg, OptimizeOptions::default()).unwrap();
        assert!(!report.cells[0].geometry_ok);
        assert!(report.cells[0].max_sidelobe_scc.is_none());
        assert!(report.best.is_none());
        assert!(report.least_violating.is_none());
    }

    #[test]
    fn cell_records_match_scalar_reevaluation() {
        let cfg = cfg();
        let grid = GridSpec::new(1.0, 2.0, 1.0, 2.0, 0.5, &cfg).unwrap();
        let region = UncertaintyRegion::new(5.0, 15.0, 10.0, 0.2, 0.5).unwrap();
        let report =
            optimize_placement(&grid, &region, &cfg, OptimizeOptions { diagnostics: true })
                .unwrap();
        for cell in &report.cells {
            if !cell.geometry_ok {
                continue;
            }
            let p = SymmetricFamilyParams::new(cell.a, cell.b, &cfg).unwrap();
            let r = symmetric_apv(&p, &cfg).unwrap();
            let wc = crate::crb::worst_case_crb(&r, &region, &cfg).unwrap();
            assert_relative_eq!(
                cell.worst_crb.unwrap().rad2(),
                wc.crb.rad2(),
                max_relative = 1e-12
            );
            assert_eq!(cell.worst_angle.unwrap(), wc.angle);
        }
    }

    #[test]
    fn sweep_has_expected_shape() {
        let cfg = cfg();
        let grid = GridSpec::full_box(0.75, &cfg).unwrap();
        let rows = sweep_region_size(
            &[0.0, 5.0],
            Angle::from_degrees(10.0).unwrap(),
            &grid,
            0.5,
            0.5,
            &cfg,
        )
        .unwrap();
        assert_eq!(rows.len(), 10);
        // singleton region: every layout is trivially feasible and ordered by
        // its position spread
        let at_zero: Vec<_> = rows.iter().filter(|r| r.span_deg == 0.0).collect();
        assert!(at_zero.iter().all(|r| r.feasible));
        let crb = |kind: SolutionKind| {
            at_zero
                .iter()
                .find(|r| r.solution == kind)
                .unwrap()
                .worst_crb
                .unwrap()
                .rad2()
        };
        assert!(crb(SolutionKind::MaxVar) < crb(SolutionKind::Ufa));
        assert!(crb(SolutionKind::Ufa) < crb(SolutionKind::Uhw));
    }
}
