//! Evaluate a scenario with the analytic engine, the simulator, or both.

use std::time::Instant;

use pbcov_core::analytic::CoverageSource;
use pbcov_core::analytic::{asymptotic_power_coverage, asymptotic_total_coverage, total_coverage};
use pbcov_core::simcore::simulate_coverage;
use pbcov_core::{CoverageResult, SimConfig, SimMode};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Point, Scenario};
use crate::error::CliError;
use crate::quantity;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RowSource {
    Analytic,
    Faithful,
    Matched,
    /// Limit of unbounded PB power.
    Asymptote,
    /// Simulation minus analysis, faithful mode.
    DeltaFaithful,
    /// Simulation minus analysis, assumption-matched mode.
    DeltaMatched,
}

impl RowSource {
    pub fn as_str(&self) -> &'static str {
        match self {
            RowSource::Analytic => "analytic",
            RowSource::Faithful => "faithful",
            RowSource::Matched => "matched",
            RowSource::Asymptote => "asymptote",
            RowSource::DeltaFaithful => "delta_faithful",
            RowSource::DeltaMatched => "delta_matched",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRow {
    pub series: String,
    /// Swept parameter name(s), empty without a sweep.
    pub parameter: String,
    /// Sweep value in `unit`; infinite for the asymptote row.
    pub value: Option<f64>,
    pub unit: String,
    pub source: RowSource,
    pub power_cov: f64,
    pub channel_cov: f64,
    pub total_cov: f64,
    /// 95% confidence half-widths, simulation rows only.
    pub power_ci: Option<f64>,
    pub channel_ci: Option<f64>,
    pub total_ci: Option<f64>,
    pub trials: Option<u64>,
    /// Not part of the data files; reported in the metadata sidecar.
    #[serde(skip)]
    pub wall_time_s: f64,
}

/// Which engines to run.
#[derive(Debug, Clone, Default)]
pub struct Plan {
    pub analytic: bool,
    pub sim: Option<SimConfig>,
    /// Add simulation-minus-analysis rows (needs both engines).
    pub deltas: bool,
}

fn row(
    sc: &Scenario,
    point: &Point,
    source: RowSource,
    r: &CoverageResult,
    wall: f64,
) -> ResultRow {
    let (parameter, value, unit) = match (&sc.sweep, point.value) {
        (Some(sw), Some(v)) => {
            let (dv, unit) = quantity::display(v, sw.class());
            (sw.label(), Some(dv), unit.to_string())
        }
        _ => (String::new(), None, String::new()),
    };
    let (power_ci, channel_ci, total_ci, trials) = match &r.meta {
        CoverageSource::Simulation {
            trials,
            power_ci,
            channel_ci,
            total_ci,
            ..
        } => (
            Some(power_ci.half_width()),
            Some(channel_ci.half_width()),
            Some(total_ci.half_width()),
            Some(*trials),
        ),
        CoverageSource::Analytic => (None, None, None, None),
    };
    ResultRow {
        series: point.series.clone(),
        parameter,
        value,
        unit,
        source,
        power_cov: r.power_cov,
        channel_cov: r.channel_cov,
        total_cov: r.total_cov,
        power_ci,
        channel_ci,
        total_ci,
        trials,
        wall_time_s: wall,
    }
}

fn evaluate(sc: &Scenario, point: &Point, plan: &Plan) -> Result<Vec<ResultRow>, CliError> {
    let p = &point.params;
    let mut rows = Vec::new();
    let mut analytic = None;
    if plan.analytic {
        let start = Instant::now();
        let r = total_coverage(p.gamma_pt, p.gamma_tr, p, &sc.inversion)?;
        rows.push(row(
            sc,
            point,
            RowSource::Analytic,
            &r,
            start.elapsed().as_secs_f64(),
        ));
        analytic = Some(r);
    }
    if let Some(sim) = &plan.sim {
        let start = Instant::now();
        let r = simulate_coverage(p, sim)?;
        let source = match sim.mode {
            SimMode::Faithful => RowSource::Faithful,
            SimMode::AssumptionMatched => RowSource::Matched,
        };
        let wall = start.elapsed().as_secs_f64();
        rows.push(row(sc, point, source, &r, wall));
        if let (true, Some(a)) = (plan.deltas, &analytic) {
            let delta = CoverageResult {
                power_cov: r.power_cov - a.power_cov,
                channel_cov: r.channel_cov - a.channel_cov,
                total_cov: r.total_cov - a.total_cov,
                meta: r.meta.clone(),
            };
            let source = match sim.mode {
                SimMode::Faithful => RowSource::DeltaFaithful,
                SimMode::AssumptionMatched => RowSource::DeltaMatched,
            };
            rows.push(row(sc, point, source, &delta, wall));
        }
    }
    Ok(rows)
}

fn asymptote_row(sc: &Scenario, point: &Point) -> Result<ResultRow, CliError> {
    let start = Instant::now();
    let power = asymptotic_power_coverage(&point.params);
    let total = asymptotic_total_coverage(&point.params)?;
    let r = CoverageResult {
        power_cov: power,
        channel_cov: if power > 0.0 { total / power } else { 0.0 },
        total_cov: total,
        meta: CoverageSource::Analytic,
    };
    let mut out = row(
        sc,
        point,
        RowSource::Asymptote,
        &r,
        start.elapsed().as_secs_f64(),
    );
    out.value = Some(f64::INFINITY);
    Ok(out)
}

/// Evaluate every point of the scenario. Points run in parallel; rows come
/// back in scenario order (series, then sweep value), with each series'
/// asymptote row last when requested.
pub fn run(sc: &Scenario, plan: &Plan) -> Result<Vec<ResultRow>, CliError> {
    sc.validate()?;
    let points = sc.points()?;
    let per_point = points
        .par_iter()
        .map(|pt| evaluate(sc, pt, plan))
        .collect::<Result<Vec<_>, _>>()?;
    let want_asymptote = plan.analytic && sc.sweep.as_ref().is_some_and(|s| s.asymptote);
    let mut rows = Vec::new();
    for (i, (pt, pt_rows)) in points.iter().zip(per_point).enumerate() {
        rows.extend(pt_rows);
        let series_ends = points
            .get(i + 1)
            .is_none_or(|next| next.series != pt.series);
        if want_asymptote && series_ends {
            rows.push(asymptote_row(sc, pt)?);
        }
    }
    Ok(rows)
}
