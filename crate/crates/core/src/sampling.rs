//! Seeded random draws: complex Gaussian channels, uniform points in complex
//! balls, Haar-like unitaries and whole random scenarios.
//!
//! Every generator is a ChaCha stream, so a `(seed, stream)` pair fixes the
//! output on every platform and under every thread schedule.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{CMatrix, ComplexVec};
use crate::scenario::{db_to_linear, ScenarioError, WiretapScenario};

/// Generator for stream `stream` of `seed`.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Entries i.i.d. circularly-symmetric standard complex Gaussian, `CN(0, 1)`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexVec {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let v = (0..n)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re * s, im * s)
        })
        .collect();
    ComplexVec::new(v).expect("gaussian draws are finite")
}

/// Uniform direction on the unit sphere of `ℂⁿ`.
pub fn unit_sphere<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexVec {
    loop {
        if let Some(u) = complex_gaussian(rng, n).normalized() {
            return u;
        }
    }
}

/// Uniform point in the ball `‖h − center‖ ≤ radius`. The ball has `2n`
/// real dimensions, so the radius is drawn as `ε·U^{1/(2n)}`.
pub fn uniform_in_ball<R: Rng + ?Sized>(rng: &mut R, center: &ComplexVec, radius: f64) -> ComplexVec {
    if radius == 0.0 {
        return center.clone();
    }
    let n = center.len();
    let dir = unit_sphere(rng, n);
    let u: f64 = rng.random();
    let rho = radius * u.powf(1.0 / (2 * n) as f64);
    center.axpy(Complex64::new(rho, 0.0), &dir)
}

/// Random unitary from Gram–Schmidt on complex Gaussian columns.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    let mut cols: Vec<ComplexVec> = Vec::with_capacity(n);
    while cols.len() < n {
        let mut v = complex_gaussian(rng, n);
        for _ in 0..2 {
            for q in &cols {
                let proj = q.dot(&v);
                v = v.axpy(-proj, q);
            }
        }
        if let Some(v) = v.normalized() {
            cols.push(v);
        }
    }
    CMatrix::from_columns(&cols)
}

/// Parameters for [`random_scenario`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioSpec {
    pub antennas: usize,
    pub eps_r: f64,
    pub eps_e: f64,
    pub power_db: f64,
}

/// Scenario with `CN(0, 1)` estimated channels drawn from `seed`.
pub fn random_scenario(spec: &ScenarioSpec, seed: u64) -> Result<WiretapScenario, ScenarioError> {
    let mut rng = rng_for(seed, 0);
    let hbar_r = complex_gaussian(&mut rng, spec.antennas.max(1));
    let hbar_e = complex_gaussian(&mut rng, spec.antennas.max(1));
    WiretapScenario::new(hbar_r, hbar_e, spec.eps_r, spec.eps_e, db_to_linear(spec.power_db))
}
