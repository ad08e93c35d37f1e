//! Power sweeps and batch solves.

use serde::Serialize;

use crate::par::Execution;
use crate::scenario::{db_to_linear, ScenarioError, WiretapScenario};
use crate::solver::{worst_case_secrecy_rate, SolverOutput};

/// One row of a power sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub power_db: f64,
    pub power_linear: f64,
    pub secrecy_rate_bits: f64,
    pub positive: bool,
    pub z_star: Option<f64>,
}

/// Solves `s` at every power in `powers_db`; rows keep the input order.
pub fn power_sweep(s: &WiretapScenario, powers_db: &[f64], exec: Execution) -> Result<Vec<SweepRow>, ScenarioError> {
    exec.map_slice(powers_db, |&db| {
        let scenario = s.with_power(db_to_linear(db))?;
        let out = worst_case_secrecy_rate(&scenario)?;
        Ok(SweepRow {
            power_db: db,
            power_linear: scenario.power(),
            secrecy_rate_bits: out.secrecy_rate_bits,
            positive: out.positive,
            z_star: out.z_star,
        })
    })
    .into_iter()
    .collect()
}

/// Solves independent scenarios, preserving order.
pub fn solve_batch(scenarios: &[WiretapScenario], exec: Execution) -> Vec<Result<SolverOutput, ScenarioError>> {
    exec.map_slice(scenarios, worst_case_secrecy_rate)
}

/// `start, start + step, …` up to and including `stop` (within `1e-9·step`).
pub fn power_grid(start: f64, stop: f64, step: f64) -> Option<Vec<f64>> {
    if !(start.is_finite() && stop.is_finite() && step.is_finite()) || step <= 0.0 || stop < start {
        return None;
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Some((0..count).map(|i| start + step * i as f64).collect())
}
