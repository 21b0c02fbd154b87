use rayon::prelude::*;

use super::svg::{line_plot, Series};
use super::{format_real, CliError, ResultTable, RunConfig};
use crate::asymptotics::{horn_location, LimitDensity};
use crate::exact::{compare_densities, energy_leakage, exact_lattice_state};
use crate::initial::{gaussian_profile, initial_lattice_state, WalkInitConfig};
use crate::walk::{evolve, position_distribution, LatticeState, WalkConfig, WalkReport};
use crate::Helicity;

pub const FIGURE1_NUS: [f64; 3] = [1.9, 2.5, 2.9];
const FIGURE1_SAMPLES: usize = 1001;
const HISTOGRAM_BINS: usize = 200;

fn initial_state(nu: f64, dt: f64, helicity: Helicity) -> Result<LatticeState, CliError> {
    let profile = gaussian_profile(nu)?;
    Ok(initial_lattice_state(
        &profile,
        &WalkInitConfig::new(nu, dt, helicity)?,
    )?)
}

fn walked(nu: f64, dt: f64, n: usize, helicity: Helicity) -> Result<(LatticeState, WalkReport), CliError> {
    let mut state = initial_state(nu, dt, helicity)?;
    let report = evolve(&mut state, &WalkConfig::new(n, helicity))?;
    Ok((state, report))
}

fn exact_state(
    nu: f64,
    dt: f64,
    t: f64,
    sites: (i64, i64),
    helicity: Helicity,
) -> Result<LatticeState, CliError> {
    let profile = gaussian_profile(nu)?;
    Ok(exact_lattice_state(&profile, dt, 0.0, sites, t, helicity)?)
}

fn distribution_table(config: &RunConfig, state: &LatticeState) -> Result<ResultTable, CliError> {
    let mut table = ResultTable::new(["site", "x", "probability"]);
    config.echo(&mut table);
    for (m, p) in state.sites().zip(position_distribution(state)) {
        table.push_row(vec![m as f64, state.position(m), p])?;
    }
    Ok(table)
}

/// Site distribution of the walk after `round(t/dt)` steps.
pub fn cmd_walk(config: &RunConfig) -> Result<ResultTable, CliError> {
    let (state, report) = walked(config.nu, config.dt, config.n_steps, config.helicity)?;
    let mut table = distribution_table(config, &state)?;
    table.meta("initial_norm", format_real(report.initial_norm));
    table.meta("final_norm", format_real(report.final_norm));
    table.meta("max_norm_drift", format_real(report.max_drift));
    Ok(table)
}

/// Site distribution of the exactly evolved state on the walk's light cone.
pub fn cmd_exact(config: &RunConfig) -> Result<ResultTable, CliError> {
    let start = initial_state(config.nu, config.dt, config.helicity)?;
    let n = config.n_steps as i64;
    let sites = (start.first_site() - n, start.last_site() + n);
    let state = exact_state(config.nu, config.dt, config.t, sites, config.helicity)?;
    let mut table = distribution_table(config, &state)?;
    table.meta("norm", format_real(state.norm_sqr()));
    table.meta(
        "energy_leakage",
        format_real(energy_leakage(&state, config.helicity)?),
    );
    Ok(table)
}

/// Least-squares slope of `ln(err)` against `ln(dt)`.
pub fn fitted_order(dts: &[f64], errors: &[f64]) -> f64 {
    let xs: Vec<f64> = dts.iter().map(|d| d.ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// One row per lattice step: walk vs exact distances and walk energy leakage.
pub fn cmd_compare(config: &RunConfig) -> Result<ResultTable, CliError> {
    let rows: Vec<Result<Vec<f64>, CliError>> = config
        .dt_list
        .par_iter()
        .map(|&dt| {
            let n = (config.t_requested / dt).round() as usize;
            let (walk, _) = walked(config.nu, dt, n, config.helicity)?;
            let exact = exact_state(
                config.nu,
                dt,
                n as f64 * dt,
                (walk.first_site(), walk.last_site()),
                config.helicity,
            )?;
            let report = compare_densities(&walk, &exact)?;
            let leakage = energy_leakage(&walk, config.helicity)?;
            Ok(vec![dt, n as f64, report.l1, report.l2, report.sup, leakage])
        })
        .collect();

    let mut table = ResultTable::new(["dt", "n_steps", "l1", "l2", "sup", "leakage"]);
    config.echo(&mut table);
    table.meta("method", "lattice-sampling");
    for row in rows {
        table.push_row(row?)?;
    }
    let l1 = table.column("l1").unwrap_or_default();
    let order = if l1.iter().all(|e| *e > 0.0) {
        format_real(fitted_order(&config.dt_list, &l1))
    } else {
        "undefined".to_string()
    };
    table.meta("fitted_order_l1", order);
    Ok(table)
}

/// Parabolic refinement of the maximum of `h` over the bins whose centers
/// satisfy `keep`.
fn histogram_peak(centers: &[f64], h: &[f64], keep: impl Fn(f64) -> bool) -> Option<f64> {
    let best = (0..h.len())
        .filter(|&i| keep(centers[i]))
        .max_by(|&a, &b| h[a].total_cmp(&h[b]))?;
    if best == 0 || best + 1 >= h.len() {
        return Some(centers[best]);
    }
    let (l, c, r) = (h[best - 1], h[best], h[best + 1]);
    let curvature = l - 2.0 * c + r;
    let shift = if curvature < 0.0 {
        0.5 * (l - r) / curvature
    } else {
        0.0
    };
    Some(centers[best] + shift.clamp(-0.5, 0.5) * (centers[1] - centers[0]))
}

/// Histogram of `X_n / (n dt)` compared with the limit density.
pub fn cmd_asymptotic(config: &RunConfig) -> Result<ResultTable, CliError> {
    if config.n_steps == 0 {
        return Err(CliError::Usage("asymptotic needs at least one step".into()));
    }
    let (state, report) = walked(config.nu, config.dt, config.n_steps, config.helicity)?;
    let n = config.n_steps as f64;
    let probs = position_distribution(&state);
    let total: f64 = probs.iter().sum();

    let width = 2.0 / HISTOGRAM_BINS as f64;
    let mut mass = vec![0.0; HISTOGRAM_BINS];
    let mut outside = 0.0;
    let mut moments = [0.0f64; 3];
    for (m, p) in state.sites().zip(&probs) {
        let p = p / total;
        let y = state.position(m) / config.t;
        for (slot, k) in moments.iter_mut().zip([1, 2, 4]) {
            *slot += p * y.powi(k);
        }
        let (lo, hi) = (y - 0.5 / n, y + 0.5 / n);
        let first = ((lo + 1.0) / width).floor().max(0.0) as usize;
        let last = (((hi + 1.0) / width).floor() as i64).min(HISTOGRAM_BINS as i64 - 1);
        let mut placed = 0.0;
        for b in first..=last.max(0) as usize {
            let (b_lo, b_hi) = (-1.0 + b as f64 * width, -1.0 + (b + 1) as f64 * width);
            let overlap = (hi.min(b_hi) - lo.max(b_lo)).max(0.0) * n;
            mass[b] += p * overlap;
            placed += p * overlap;
        }
        outside += p - placed;
    }

    let limit = LimitDensity::new(config.nu)?;
    let mut table = ResultTable::new(["y", "empirical_density", "limit_density", "limit_bin_mean"]);
    config.echo(&mut table);
    let mut centers = Vec::with_capacity(HISTOGRAM_BINS);
    let mut heights = Vec::with_capacity(HISTOGRAM_BINS);
    let mut l1 = outside.abs();
    for (b, m) in mass.iter().enumerate() {
        let (lo, hi) = (-1.0 + b as f64 * width, -1.0 + (b + 1) as f64 * width);
        let center = 0.5 * (lo + hi);
        let bin_mass = limit.probability(lo, hi)?;
        l1 += (m - bin_mass).abs();
        centers.push(center);
        heights.push(m / width);
        table.push_row(vec![center, m / width, limit.density(center)?, bin_mass / width])?;
    }

    table.meta("max_norm_drift", format_real(report.max_drift));
    table.meta("bins", HISTOGRAM_BINS);
    table.meta("mass_outside", format_real(outside));
    table.meta("l1_distance", format_real(l1));
    for (value, k) in moments.iter().zip([1u32, 2, 4]) {
        table.meta(&format!("moment_{k}_empirical"), format_real(*value));
        table.meta(&format!("moment_{k}_limit"), format_real(limit.moment(k)?));
    }
    if let Ok(horn) = horn_location(config.nu) {
        table.meta("horn_limit", format_real(horn));
        if let Some(right) = histogram_peak(&centers, &heights, |c| c > 0.0) {
            table.meta("horn_right", format_real(right));
        }
        if let Some(left) = histogram_peak(&centers, &heights, |c| c < 0.0) {
            table.meta("horn_left", format_real(left));
        }
    }
    Ok(table)
}

/// Limit densities on `N` interior points of `(-1, 1)` and their plot.
pub fn cmd_figure1(config: &RunConfig) -> Result<(ResultTable, String), CliError> {
    let densities: Vec<LimitDensity> = FIGURE1_NUS
        .iter()
        .map(|&nu| LimitDensity::new(nu))
        .collect::<Result<_, _>>()?;
    let mut table = ResultTable::new(["y", "F_nu_1.9", "F_nu_2.5", "F_nu_2.9"]);
    config.echo(&mut table);
    table.meta("samples", FIGURE1_SAMPLES);
    let mut curves = vec![Vec::with_capacity(FIGURE1_SAMPLES); FIGURE1_NUS.len()];
    let mut peak: f64 = 0.0;
    for i in 1..=FIGURE1_SAMPLES {
        let y = -1.0 + 2.0 * i as f64 / (FIGURE1_SAMPLES + 1) as f64;
        let mut row = vec![y];
        for (d, curve) in densities.iter().zip(curves.iter_mut()) {
            let f = d.density(y)?;
            peak = peak.max(f);
            curve.push((y, f));
            row.push(f);
        }
        table.push_row(row)?;
    }
    let colors = ["#1f77b4", "#d62728", "#2ca02c"];
    let series: Vec<Series> = curves
        .into_iter()
        .zip(FIGURE1_NUS)
        .zip(colors)
        .map(|((points, nu), color)| Series {
            label: format!("nu = {nu}"),
            color,
            points,
        })
        .collect();
    let y_top = (peak * 1.1 * 10.0).ceil() / 10.0;
    let svg = line_plot(
        "Limit density F(y; nu)",
        "y",
        "F(y; nu)",
        (-1.0, 1.0),
        (0.0, y_top),
        &series,
    );
    Ok((table, svg))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_of_exact_power_law() {
        let dts = [0.04, 0.02, 0.01];
        let errs: Vec<f64> = dts.iter().map(|d| 3.0 * d * d).collect();
        assert!((fitted_order(&dts, &errs) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn peak_refinement() {
        let centers: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let h: Vec<f64> = centers.iter().map(|c| -(c - 4.3f64).powi(2)).collect();
        assert!((histogram_peak(&centers, &h, |_| true).unwrap() - 4.3).abs() < 1e-12);
        assert_eq!(histogram_peak(&centers, &h, |c| c > 20.0), None);
    }
}
