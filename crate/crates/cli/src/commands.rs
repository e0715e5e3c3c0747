use std::path::{Path, PathBuf};

use elephant_abm::analytics::{
    cluster_count, convergence_cv, convergence_kl, dbscan, displacement_stats, kde_grid, kde_layout, level_area,
    mcp_area, occupancy_grid, prefix_occupancy, raid_stats, silverman_bandwidth, DailyDisplacement, LevelArea,
};
use elephant_abm::calibration::{
    calibrate_abm, extract_steps_with, fit_report, nsga2, read_track_csv, track_objectives, tune_slope_tolerance,
    NsgaConfig, ParetoFront, ABM_VARIABLES,
};
use elephant_abm::engine::{read_summary, read_trajectory_csv, run_batch, write_batch, write_json};
use elephant_abm::terrain::{write_ascii_grid, GridHeader};
use serde::Serialize;

use crate::config::{load_config, CliConfig};
use crate::error::CliError;
use crate::io::{csv_writer, emit_json, read_points, trajectory_files};
use crate::{ConfigArgs, Metric, Problem};

fn load(args: &ConfigArgs) -> Result<CliConfig, CliError> {
    load_config(args.config.as_ref(), &args.set)
}

pub fn simulate(args: &ConfigArgs, out: &Path, threads: Option<usize>) -> Result<(), CliError> {
    let config = load(args)?;
    let run = config.run_config();
    let batch = run_batch(&run, threads)?;
    write_batch(out, &batch)?;
    write_json(&out.join("resolved-config.json"), &config)?;
    eprintln!(
        "{} replicates, raid probability {:.3}, deaths {}",
        batch.summary.replicates, batch.summary.raid_probability, batch.summary.deaths
    );
    Ok(())
}

pub fn calibrate_hmm(args: &ConfigArgs, track: &Path, out: Option<&Path>) -> Result<(), CliError> {
    let config = load(args)?;
    let track = read_track_csv(track)?;
    let series = extract_steps_with(&track, config.calibration.nominal_interval_s)?;
    let report = fit_report(&series, &config.calibration.hmm)?;
    emit_json(out, &report)
}

pub struct GaArgs {
    pub problem: Option<Problem>,
    pub track: Option<PathBuf>,
    pub generations: Option<usize>,
    pub pop: Option<usize>,
    pub seed: Option<u64>,
}

fn write_front(out: Option<&Path>, front: &ParetoFront, vars: &[String], objs: &[String]) -> Result<(), CliError> {
    let mut w = csv_writer(out)?;
    let err = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(vars.iter().chain(objs)).map_err(err)?;
    for m in &front.members {
        w.write_record(m.x.iter().chain(&m.objectives).map(|v| v.to_string()))
            .map_err(err)?;
    }
    w.flush().map_err(|e| CliError::Io(e.to_string()))
}

pub fn calibrate_ga(args: &ConfigArgs, ga: GaArgs, out: Option<&Path>) -> Result<(), CliError> {
    let config = load(args)?;
    let mut nsga: NsgaConfig = config.calibration.ga.clone();
    if let Some(g) = ga.generations {
        nsga.generations = g;
    }
    if let Some(p) = ga.pop {
        nsga.population = p;
    }
    if let Some(s) = ga.seed {
        nsga.seed = s;
    }
    match (ga.problem, ga.track) {
        (Some(Problem::Schaffer), _) => {
            let front = nsga2(|x| Ok(vec![x[0] * x[0], (x[0] - 2.0).powi(2)]), &[(-5.0, 5.0)], &nsga)?;
            write_front(out, &front, &["x".into()], &["f1".into(), "f2".into()])
        }
        (None, Some(track)) => {
            let track = read_track_csv(&track)?;
            let targets = track_objectives(&track, config.calibration.bootstrap_seed)?;
            log::info!("targets: {targets:?}");
            let front = calibrate_abm(&config.run_config(), &targets, &config.calibration.bounds, &nsga)?;
            let vars: Vec<String> = ABM_VARIABLES.iter().map(|s| s.to_string()).collect();
            let objs = ["mcp_penalty", "diel_penalty", "net_penalty"].map(String::from);
            write_front(out, &front, &vars, &objs)
        }
        (None, None) => Err(CliError::Config("calibrate ga needs --problem or --track".into())),
    }
}

pub fn calibrate_slope(
    args: &ConfigArgs,
    tolerances: &[f64],
    out: Option<&Path>,
    threads: Option<usize>,
) -> Result<(), CliError> {
    let config = load(args)?;
    let tols = if tolerances.is_empty() {
        &config.calibration.slope_tolerances
    } else {
        tolerances
    };
    let report = tune_slope_tolerance(&config.run_config(), tols, threads)?;
    emit_json(out, &report)
}

#[derive(Serialize)]
struct McpOutput {
    points: usize,
    area_km2: f64,
}

pub fn analyze_mcp(points: &Path, out: Option<&Path>) -> Result<(), CliError> {
    let table = read_points(points, None)?;
    emit_json(
        out,
        &McpOutput {
            points: table.points.len(),
            area_km2: mcp_area(&table.points),
        },
    )
}

#[derive(Serialize)]
struct KdeOutput {
    points: usize,
    bandwidth_m: (f64, f64),
    cellsize_m: f64,
    areas: Vec<LevelArea>,
}

pub fn analyze_kde(
    args: &ConfigArgs,
    points: &Path,
    levels: &[f64],
    grid_out: Option<&Path>,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let config = load(args)?;
    let levels = if levels.is_empty() {
        &config.analysis.kde_levels
    } else {
        levels
    };
    if let Some(l) = levels.iter().find(|l| !(**l > 0.0 && **l <= 1.0)) {
        return Err(CliError::Config(format!("kde level {l} not in (0, 1]")));
    }
    let pts = read_points(points, None)?.points;
    let h = silverman_bandwidth(&pts)?;
    let header = kde_layout(&pts, h, config.analysis.kde_cellsize);
    let grid = kde_grid(&pts, &header, h)?;
    if let Some(p) = grid_out {
        write_ascii_grid(&grid, p)?;
    }
    let areas = levels
        .iter()
        .map(|q| LevelArea {
            level: *q,
            area_km2: level_area(&grid, *q),
        })
        .collect();
    emit_json(
        out,
        &KdeOutput {
            points: pts.len(),
            bandwidth_m: h,
            cellsize_m: header.cellsize,
            areas,
        },
    )
}

#[derive(Serialize)]
struct DisplacementOutput {
    days: Vec<DailyDisplacement>,
    mean_diel_km: Option<f64>,
    mean_net_km: Option<f64>,
}

fn mean(xs: impl ExactSizeIterator<Item = f64>) -> Option<f64> {
    let n = xs.len();
    (n > 0).then(|| xs.sum::<f64>() / n as f64)
}

pub fn analyze_displacement(args: &ConfigArgs, points: &Path, out: Option<&Path>) -> Result<(), CliError> {
    let config = load(args)?;
    let pts = read_points(points, None)?.points;
    let days = displacement_stats(&pts, config.analysis.ticks_per_day);
    emit_json(
        out,
        &DisplacementOutput {
            mean_diel_km: mean(days.iter().map(|d| d.diel_km)),
            mean_net_km: mean(days.iter().map(|d| d.net_km)),
            days,
        },
    )
}

pub fn analyze_dbscan(
    args: &ConfigArgs,
    points: &Path,
    eps: Option<f64>,
    min_pts: Option<usize>,
    kind: Option<&str>,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let config = load(args)?;
    let eps = eps.unwrap_or(config.analysis.dbscan_eps);
    let min_pts = min_pts.unwrap_or(config.analysis.dbscan_min_pts);
    if !(eps > 0.0) || min_pts == 0 {
        return Err(CliError::Config("dbscan needs eps > 0 and min_pts >= 1".into()));
    }
    let table = read_points(points, kind)?;
    let labels = dbscan(&table.points, eps, min_pts);
    let mut w = csv_writer(out)?;
    let err = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(table.headers.iter().map(String::as_str).chain(["cluster"]))
        .map_err(err)?;
    for (row, label) in table.rows.iter().zip(&labels) {
        let cluster = label.map_or("-1".to_string(), |c| c.to_string());
        w.write_record(row.iter().map(String::as_str).chain([cluster.as_str()]))
            .map_err(err)?;
    }
    w.flush().map_err(|e| CliError::Io(e.to_string()))?;
    eprintln!("{} points, {} clusters", labels.len(), cluster_count(&labels));
    Ok(())
}

pub fn analyze_raids(args: &ConfigArgs, runs: &Path, out: Option<&Path>) -> Result<(), CliError> {
    let config = load(args)?;
    let summary = read_summary(&runs.join("summary.json"))?;
    let stats = raid_stats(&summary.per_replicate, config.analysis.ddmi_kg)?;
    emit_json(out, &stats)
}

fn read_trajectories(runs: &Path) -> Result<Vec<Vec<(f64, f64)>>, CliError> {
    trajectory_files(runs)?
        .iter()
        .map(|p| Ok(read_trajectory_csv(p)?.iter().map(|r| (r.x, r.y)).collect()))
        .collect()
}

pub fn analyze_converge(
    args: &ConfigArgs,
    runs: &Path,
    metric: Metric,
    eps: &[f64],
    out: Option<&Path>,
) -> Result<(), CliError> {
    let config = load(args)?;
    let eps = if eps.is_empty() { &config.analysis.epsilons } else { eps };
    let trajectories = read_trajectories(runs)?;
    let tpd = config.analysis.ticks_per_day;
    let per_day_mean = |t: &[(f64, f64)], f: fn(&DailyDisplacement) -> f64| {
        mean(displacement_stats(t, tpd).iter().map(f)).unwrap_or(0.0)
    };
    let report = match metric {
        Metric::Mcp => {
            let v: Vec<f64> = trajectories.iter().map(|t| mcp_area(t)).collect();
            convergence_cv("mcp", &v, eps)?
        }
        Metric::Diel => {
            let v: Vec<f64> = trajectories.iter().map(|t| per_day_mean(t, |d| d.diel_km)).collect();
            convergence_cv("diel", &v, eps)?
        }
        Metric::Net => {
            let v: Vec<f64> = trajectories.iter().map(|t| per_day_mean(t, |d| d.net_km)).collect();
            convergence_cv("net", &v, eps)?
        }
        Metric::Kl => {
            let header = occupancy_layout(&trajectories, config.analysis.occupancy_cellsize)?;
            let grids: Vec<Vec<f64>> = trajectories.iter().map(|t| occupancy_grid(t, &header).values).collect();
            convergence_kl(&prefix_occupancy(&grids), eps)?
        }
    };
    emit_json(out, &report)
}

/// A grid covering every trajectory point.
fn occupancy_layout(trajectories: &[Vec<(f64, f64)>], cellsize: f64) -> Result<GridHeader, CliError> {
    if !(cellsize > 0.0) {
        return Err(CliError::Config("analysis.occupancy_cellsize must be > 0".into()));
    }
    let pts = trajectories.iter().flatten();
    let (mut x0, mut y0, mut x1, mut y1) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in pts {
        x0 = x0.min(p.0);
        y0 = y0.min(p.1);
        x1 = x1.max(p.0);
        y1 = y1.max(p.1);
    }
    if !x0.is_finite() {
        return Err(CliError::Numerical("no trajectory points".into()));
    }
    let ncols = ((x1 - x0) / cellsize).floor() as usize + 1;
    let nrows = ((y1 - y0) / cellsize).floor() as usize + 1;
    Ok(GridHeader::new(nrows, ncols, x0, y0, cellsize))
}
