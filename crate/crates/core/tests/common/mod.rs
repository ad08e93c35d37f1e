#![allow(dead_code)]

use rand::Rng;
use wiretap_core::sampling::{random_scenario, rng_for, ScenarioSpec};
use wiretap_core::scenario::db_to_linear;
use wiretap_core::{ComplexVec, WiretapScenario};

pub fn cv(pairs: &[[f64; 2]]) -> ComplexVec {
    ComplexVec::from_pairs(pairs).unwrap()
}

pub fn example1_channels() -> (ComplexVec, ComplexVec) {
    (
        cv(&[
            [-1.0301, 0.3060],
            [-0.0162, 0.5618],
            [0.7134, -0.1504],
            [1.0488, 0.1086],
        ]),
        cv(&[
            [-0.3475, -0.0816],
            [0.3662, -0.1442],
            [0.2450, -0.4282],
            [0.2369, 0.2346],
        ]),
    )
}

/// Four antennas, radii 0.01, 5 dB.
pub fn example1() -> WiretapScenario {
    let (hr, he) = example1_channels();
    WiretapScenario::new(hr, he, 0.01, 0.01, db_to_linear(5.0)).unwrap()
}

pub fn example1_beam() -> ComplexVec {
    cv(&[
        [0.4692, -0.3024],
        [0.1854, -0.4521],
        [-0.3258, -0.1020],
        [-0.5655, 0.1153],
    ])
}

/// Radii 0.05: no positive rate at any power.
pub fn example2(power_db: f64) -> WiretapScenario {
    let hr = cv(&[
        [0.1216, 0.0118],
        [0.0106, -0.0316],
        [-0.0856, -0.1063],
        [0.2241, -0.0216],
    ]);
    let he = cv(&[
        [0.3599, 0.0174],
        [0.1655, -0.1923],
        [-0.2323, -0.4065],
        [0.7313, -0.2272],
    ]);
    WiretapScenario::new(hr, he, 0.05, 0.05, db_to_linear(power_db)).unwrap()
}

pub fn rel_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs()
}

/// Random scenario with radii scaled to the channel norms so that a
/// healthy share of draws has a positive rate.
pub fn random_case(seed: u64, antennas: usize) -> WiretapScenario {
    let spec = ScenarioSpec {
        antennas,
        eps_r: 0.0,
        eps_e: 0.0,
        power_db: 0.0,
    };
    let base = random_scenario(&spec, seed).unwrap();
    let mut rng = rng_for(seed, 1);
    let eps_r = 0.15 * rng.random::<f64>() * base.hbar_r().norm();
    let eps_e = 0.15 * rng.random::<f64>() * base.hbar_e().norm();
    let power = db_to_linear(rng.random_range(-5.0..25.0));
    base.with_radii(eps_r, eps_e).unwrap().with_power(power).unwrap()
}

/// Antenna counts cycled by the randomised suites.
pub const ANTENNAS: [usize; 3] = [2, 4, 8];
