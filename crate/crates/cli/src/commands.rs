//! The six subcommands: placement search, worst-case CRB map, correlation
//! and CRB profiles, region-size sweep, and Monte-Carlo validation.

use std::collections::HashSet;

use anyhow::Result;
use macrb::crb::crb_profile;
use macrb::model::Angle;
use macrb::optimizer::{optimize_placement, sweep_region_size, OptimizeOptions, SolutionKind};
use macrb::scc::{half_power_beamwidth, scc_feasible, scc_profile, DEFAULT_FINE_STEP_DEG};
use macrb::simulate::{monte_carlo, MlSearch, SignalScenario};
use macrb::ScenarioConfig;

use crate::config::RunConfig;
use crate::output::{flag, num, opt_num, CsvSink};
use crate::selector::ApvSelector;

/// Min-max placement search; writes a one-row `optimize.csv` with the
/// optimum (or the least-violating cell when the constraint cannot be met).
pub fn cmd_optimize(rc: &RunConfig) -> Result<()> {
    let region = rc.uncertainty_region()?;
    let grid = rc.grid_spec()?;
    let report = optimize_placement(&grid, &region, &rc.scenario, OptimizeOptions::default())?;

    let mut sink = CsvSink::create(&rc.out_dir, "optimize.csv", rc)?;
    sink.header(&[
        "status",
        "best_a_lambda",
        "best_b_lambda",
        "worst_crb_deg",
        "worst_crb_rad2",
        "worst_angle_deg",
        "feasible_count",
        "total_cells",
        "feasible_fraction",
        "least_violating_a_lambda",
        "least_violating_b_lambda",
        "least_violating_scc",
    ])?;
    sink.row([
        if report.best.is_some() {
            "ok"
        } else {
            "infeasible"
        }
        .to_string(),
        opt_num(report.best.map(|b| b.params.a())),
        opt_num(report.best.map(|b| b.params.b())),
        opt_num(report.best.map(|b| b.worst_crb.sqrt_degrees())),
        opt_num(report.best.map(|b| b.worst_crb.rad2())),
        opt_num(report.best.map(|b| b.worst_angle.degrees())),
        report.feasible_count.to_string(),
        report.total_cells.to_string(),
        num(report.feasible_fraction()),
        opt_num(report.least_violating.map(|lv| lv.params.a())),
        opt_num(report.least_violating.map(|lv| lv.params.b())),
        opt_num(report.least_violating.map(|lv| lv.max_sidelobe_scc)),
    ])?;
    let path = sink.finish()?;

    match &report.best {
        Some(best) => println!(
            "optimum (a, b) = ({}, {}) λ; worst-case CRB {:.6}° at {}°; {}/{} cells feasible",
            best.params.a(),
            best.params.b(),
            best.worst_crb.sqrt_degrees(),
            best.worst_angle.degrees(),
            report.feasible_count,
            report.total_cells
        ),
        None => println!(
            "no feasible placement at κ_SCC = {}; closest cell {}",
            rc.region.kappa_scc,
            report
                .least_violating
                .map(|lv| format!(
                    "(a, b) = ({}, {}) with max sidelobe {:.4}",
                    lv.params.a(),
                    lv.params.b(),
                    lv.max_sidelobe_scc
                ))
                .unwrap_or_else(|| "none".into())
        ),
    }
    println!("wrote {}", path.display());
    Ok(())
}

/// Worst-case CRB over the whole `(a, b)` lattice; writes the per-cell map
/// (`crb_map.csv`) and a one-row summary (`crb_map_summary.csv`).
///
/// With diagnostics on (default), SCC-infeasible cells still carry their
/// worst-case CRB so the map can be shaded; the search optimum ignores them
/// either way.
pub fn cmd_crb_map(rc: &RunConfig, diagnostics: bool) -> Result<()> {
    let region = rc.uncertainty_region()?;
    let grid = rc.grid_spec()?;
    let report = optimize_placement(
        &grid,
        &region,
        &rc.scenario,
        OptimizeOptions { diagnostics },
    )?;

    let mut map = CsvSink::create(&rc.out_dir, "crb_map.csv", rc)?;
    map.header(&[
        "a_lambda",
        "b_lambda",
        "feasible",
        "worst_crb_deg",
        "worst_crb_rad2",
        "max_sidelobe_scc",
    ])?;
    for cell in &report.cells {
        map.row([
            num(cell.a),
            num(cell.b),
            flag(cell.feasible),
            opt_num(cell.worst_crb.map(|c| c.sqrt_degrees())),
            opt_num(cell.worst_crb.map(|c| c.rad2())),
            opt_num(cell.max_sidelobe_scc),
        ])?;
    }
    let map_path = map.finish()?;

    let mut summary = CsvSink::create(&rc.out_dir, "crb_map_summary.csv", rc)?;
    summary.header(&[
        "best_a_lambda",
        "best_b_lambda",
        "worst_crb_deg",
        "worst_crb_rad2",
        "worst_angle_deg",
        "feasible_count",
        "total_cells",
        "feasible_fraction",
    ])?;
    summary.row([
        opt_num(report.best.map(|b| b.params.a())),
        opt_num(report.best.map(|b| b.params.b())),
        opt_num(report.best.map(|b| b.worst_crb.sqrt_degrees())),
        opt_num(report.best.map(|b| b.worst_crb.rad2())),
        opt_num(report.best.map(|b| b.worst_angle.degrees())),
        report.feasible_count.to_string(),
        report.total_cells.to_string(),
        num(report.feasible_fraction()),
    ])?;
    let summary_path = summary.finish()?;

    match &report.best {
        Some(best) => println!(
            "best cell (a, b) = ({}, {}) λ; worst-case CRB {:.6}°; feasible fraction {:.4}",
            best.params.a(),
            best.params.b(),
            best.worst_crb.sqrt_degrees(),
            report.feasible_fraction()
        ),
        None => println!(
            "no feasible cell; feasible fraction {:.4}",
            report.feasible_fraction()
        ),
    }
    println!("wrote {}", map_path.display());
    println!("wrote {}", summary_path.display());
    Ok(())
}

/// Correlation profile over the region for each selected layout.
pub fn cmd_scc_profile(rc: &RunConfig, selectors: &[ApvSelector]) -> Result<()> {
    let region = rc.uncertainty_region()?;
    let mut used = HashSet::new();
    for selector in selectors {
        let r = selector.resolve(rc)?;
        let profile = scc_profile(&r, &region, &rc.scenario)?;
        let feas = scc_feasible(&r, &region, &rc.scenario)?;

        let name = format!("scc_profile_{}.csv", unique_tag(&selector.tag(), &mut used));
        let mut sink = CsvSink::create(&rc.out_dir, &name, rc)?;
        sink.header(&["theta_deg", "scc_mag", "in_mainlobe"])?;
        for ((angle, value), in_lobe) in profile
            .angles
            .iter()
            .zip(&profile.values)
            .zip(&profile.mainlobe)
        {
            sink.row([num(angle.degrees()), num(*value), flag(*in_lobe)])?;
        }
        let path = sink.finish()?;
        println!(
            "{}: beamwidth {:.4}°, max sidelobe {:.4} ({} at κ_SCC = {}); wrote {}",
            selector.tag(),
            profile.beamwidth.width_deg,
            feas.max_sidelobe,
            if feas.feasible {
                "feasible"
            } else {
                "infeasible"
            },
            region.kappa_scc(),
            path.display()
        );
    }
    Ok(())
}

/// Per-angle CRB under the center-matched precoder for each selected layout.
/// Angles where the bound degenerates are kept as rows with an error note.
pub fn cmd_crb_profile(rc: &RunConfig, selectors: &[ApvSelector]) -> Result<()> {
    let region = rc.uncertainty_region()?;
    let mut used = HashSet::new();
    for selector in selectors {
        let r = selector.resolve(rc)?;
        let rows = crb_profile(&r, &region, &rc.scenario)?;

        let name = format!("crb_profile_{}.csv", unique_tag(&selector.tag(), &mut used));
        let mut sink = CsvSink::create(&rc.out_dir, &name, rc)?;
        sink.header(&["theta_deg", "crb_rad2", "crb_deg", "error"])?;
        let mut worst: Option<f64> = None;
        let mut failed = 0usize;
        for (angle, value) in &rows {
            match value {
                Ok(crb) => {
                    worst =
                        Some(worst.map_or(crb.sqrt_degrees(), |w: f64| w.max(crb.sqrt_degrees())));
                    sink.row([
                        num(angle.degrees()),
                        num(crb.rad2()),
                        num(crb.sqrt_degrees()),
                        String::new(),
                    ])?;
                }
                Err(e) => {
                    failed += 1;
                    sink.row([
                        num(angle.degrees()),
                        String::new(),
                        String::new(),
                        e.to_string(),
                    ])?;
                }
            }
        }
        let path = sink.finish()?;
        match worst {
            Some(w) => println!(
                "{}: worst CRB over region {:.6}°{}; wrote {}",
                selector.tag(),
                w,
                if failed > 0 {
                    format!(" ({failed} angles degenerate)")
                } else {
                    String::new()
                },
                path.display()
            ),
            None => println!(
                "{}: bound degenerate at every region angle; wrote {}",
                selector.tag(),
                path.display()
            ),
        }
    }
    Ok(())
}

/// Worst-case CRB of each solution versus region span.
pub fn cmd_sweep(rc: &RunConfig) -> Result<()> {
    let grid = rc.grid_spec()?;
    let center = Angle::from_degrees(rc.region.center_deg)?;
    let rows = sweep_region_size(
        &rc.sweep_spans_deg,
        center,
        &grid,
        rc.region.step_deg,
        rc.region.kappa_scc,
        &rc.scenario,
    )?;

    let mut sink = CsvSink::create(&rc.out_dir, "sweep.csv", rc)?;
    sink.header(&["span_deg", "solution_name", "feasible", "worst_crb_deg"])?;
    for row in &rows {
        sink.row([
            num(row.span_deg),
            row.solution.name().to_string(),
            flag(row.feasible),
            opt_num(row.worst_crb.map(|c| c.sqrt_degrees())),
        ])?;
    }
    let path = sink.finish()?;

    for span in &rc.sweep_spans_deg {
        if let Some(opt) = rows
            .iter()
            .find(|r| r.span_deg == *span && r.solution == SolutionKind::Opt)
        {
            match (&opt.params, &opt.worst_crb) {
                (Some(p), Some(crb)) => println!(
                    "ΔP = {span}°: optimum (a, b) = ({}, {}) λ, worst-case CRB {:.6}°",
                    p.a(),
                    p.b(),
                    crb.sqrt_degrees()
                ),
                _ => println!("ΔP = {span}°: no feasible placement"),
            }
        }
    }
    println!("wrote {}", path.display());
    Ok(())
}

/// Monte-Carlo RMSE-versus-bound validation, one file per layout and SNR.
pub fn cmd_simulate(rc: &RunConfig, selectors: &[ApvSelector]) -> Result<()> {
    let region = rc.uncertainty_region()?;
    let theta_true = Angle::from_degrees(rc.simulate.theta_true_deg)?;
    let mut used = HashSet::new();
    for selector in selectors {
        let r = selector.resolve(rc)?;
        let tag = unique_tag(&selector.tag(), &mut used);
        for &snr_db in &rc.simulate.snr_list_db {
            let cfg = ScenarioConfig {
                snr_linear: 10f64.powf(snr_db / 10.0),
                ..rc.scenario
            };
            let search = if rc.simulate.full_search {
                MlSearch::full_domain()
            } else {
                let bw = half_power_beamwidth(&r, region.center(), DEFAULT_FINE_STEP_DEG, &cfg)?;
                MlSearch::from_region(&region, bw.width_deg)?
            };
            let scenario = SignalScenario::for_snr(&cfg, rc.simulate.pilots, rc.simulate.seed)?;
            let report = monte_carlo(
                &r,
                &region,
                theta_true,
                rc.simulate.trials,
                &scenario,
                &search,
                &cfg,
            )?;

            let name = format!("simulate_{tag}_{}db.csv", num(snr_db));
            let mut sink = CsvSink::create(&rc.out_dir, &name, rc)?;
            sink.header(&[
                "trial",
                "seed",
                "theta_true_deg",
                "theta_hat_deg",
                "error_deg",
                "rmse_deg",
                "sqrt_crb_deg",
            ])?;
            for trial in &report.trials {
                sink.row([
                    trial.trial.to_string(),
                    trial.seed.to_string(),
                    num(trial.theta_true.degrees()),
                    num(trial.theta_hat.degrees()),
                    num(trial.error_deg),
                    String::new(),
                    String::new(),
                ])?;
            }
            sink.row([
                "summary".to_string(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                num(report.rmse_deg),
                num(report.sqrt_crb_deg),
            ])?;
            let path = sink.finish()?;
            println!(
                "{tag} @ {snr_db} dB: RMSE {:.6}°, √CRB {:.6}°, ratio {:.4}, boundary hits {}; wrote {}",
                report.rmse_deg,
                report.sqrt_crb_deg,
                report.rmse_ratio(),
                report.boundary_count,
                path.display()
            );
        }
    }
    Ok(())
}

/// Appends `_2`, `_3`, … when the same tag repeats across selectors.
fn unique_tag(base: &str, used: &mut HashSet<String>) -> String {
    if used.insert(base.to_string()) {
        return base.to_string();
    }
    let mut n = 2usize;
    loop {
        let candidate = format!("{base}_{n}");
        if used.insert(candidate.clone()) {
            return candidate;
        }
        n += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tags_deduplicate() {
        let mut used = HashSet::new();
        assert_eq!(unique_tag("custom", &mut used), "custom");
        assert_eq!(unique_tag("custom", &mut used), "custom_2");
        assert_eq!(unique_tag("custom", &mut used), "custom_3");
        assert_eq!(unique_tag("maxvar", &mut used), "maxvar");
    }
}
