//! Independent checks on the closed-form solver.
//!
//! None of these reuse the polynomial path: the grid oracle maximises `g`
//! by exhaustive evaluation, the Monte-Carlo oracle samples the uncertainty
//! balls directly, the projection brute force searches beam vectors, and
//! the perfect-CSI oracle solves a 2×2 generalised eigenproblem.

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::inner::{lemma1_solve, worst_eaves_channel, worst_legit_channel, UNIT_TOL};
use crate::linalg::{CMatrix, ComplexVec};
use crate::par::{chunk_ranges, Execution};
use crate::sampling::{rng_for, uniform_in_ball, unit_sphere};
use crate::scenario::{derive_params, ScalarParams, WiretapScenario, DEGENERACY_TOL};
use crate::solver::{beam_rate, beam_worst_case_rate, g_unchecked, worst_case_secrecy_rate, Branch};

pub const DEFAULT_GRID_POINTS: usize = 100_000;
pub const DEFAULT_MC_SAMPLES: usize = 10_000;
pub const DEFAULT_LEMMA1_POINTS: usize = 1_000_000;

/// Solver may not fall below the grid maximum by more than this (bits).
pub const GRID_TOL_BELOW: f64 = 1e-8;
/// Solver may exceed the grid maximum by at most this, relative to
/// `max(1, rate)`.
pub const GRID_TOL_ABOVE: f64 = 1e-6;
pub const ATTAINMENT_TOL: f64 = 1e-9;
pub const MC_TOL: f64 = 1e-9;
pub const LEMMA1_TOL: f64 = 1e-3;
pub const PERFECT_CSI_TOL: f64 = 1e-6;

const MC_CHUNK: usize = 1024;
const GRID_CHUNK: usize = 8192;
const LEMMA1_ZOOM_ROUNDS: usize = 6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error("grid needs at least two points, got {0}")]
    GridTooSmall(usize),
    #[error("feasible interval is empty (z0 = {0} > 1)")]
    EmptyDomain(f64),
    #[error("beam must have unit norm, got {0}")]
    NotUnit(f64),
    #[error("beam length {beam} does not match {antennas} antennas")]
    Length { beam: usize, antennas: usize },
    #[error("inputs are parallel (r = {0})")]
    Parallel(f64),
    #[error("level q = {0} outside [0, 1]")]
    LevelOutOfRange(f64),
    #[error("perfect-CSI oracle requires zero uncertainty radii")]
    NonzeroRadii,
    #[error("need at least one sample")]
    NoSamples,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridResult {
    pub z: f64,
    pub rate_bits: f64,
}

/// Maximises `g` over `n_grid` equispaced points of `[z0, 1]` and returns
/// the arg max and `log2` of the maximum (not clamped at zero).
pub fn grid_oracle(p: &ScalarParams, n_grid: usize) -> Result<GridResult, VerifyError> {
    grid_oracle_with(Execution::default(), p, n_grid)
}

pub fn grid_oracle_with(exec: Execution, p: &ScalarParams, n_grid: usize) -> Result<GridResult, VerifyError> {
    if n_grid < 2 {
        return Err(VerifyError::GridTooSmall(n_grid));
    }
    if p.z0 > 1.0 {
        return Err(VerifyError::EmptyDomain(p.z0));
    }
    let z0 = p.z0;
    let step = (1.0 - z0) / (n_grid - 1) as f64;
    let point = |i: usize| if i + 1 == n_grid { 1.0 } else { z0 + step * i as f64 };
    // (g, index); ties go to the smaller index so the result is schedule-free.
    let better = |a: (f64, usize), b: (f64, usize)| {
        if a.0 > b.0 || (a.0 == b.0 && a.1 < b.1) {
            a
        } else {
            b
        }
    };
    let chunks = chunk_ranges(n_grid, GRID_CHUNK);
    let (g, idx) = exec.map_reduce(
        chunks.len(),
        (f64::NEG_INFINITY, usize::MAX),
        |ci| {
            chunks[ci]
                .clone()
                .map(|i| (g_unchecked(point(i), p), i))
                .fold((f64::NEG_INFINITY, usize::MAX), better)
        },
        better,
    );
    Ok(GridResult {
        z: point(idx),
        rate_bits: g.log2(),
    })
}

fn check_beam(s: &WiretapScenario, u: &ComplexVec) -> Result<(), VerifyError> {
    if u.len() != s.antennas() {
        return Err(VerifyError::Length {
            beam: u.len(),
            antennas: s.antennas(),
        });
    }
    let n = u.norm();
    if (n - 1.0).abs() > UNIT_TOL {
        return Err(VerifyError::NotUnit(n));
    }
    Ok(())
}

/// The adversaries' optimal channels against beam `u`. When the
/// legitimate ball reaches `u†h = 0`, that zero-projection channel is used.
pub fn explicit_worst_pair(s: &WiretapScenario, u: &ComplexVec) -> (ComplexVec, ComplexVec) {
    let h_r = match worst_legit_channel(u, s.hbar_r(), s.eps_r()) {
        Ok(sol) => sol.worst_channel,
        Err(_) => s.hbar_r().axpy(-u.dot(s.hbar_r()), u),
    };
    let h_e = worst_eaves_channel(u, s.hbar_e(), s.eps_e())
        .expect("beam checked to be unit")
        .worst_channel;
    (h_r, h_e)
}

/// Smallest rate of beam `u` over `n_samples` channel pairs drawn uniformly
/// from the two uncertainty balls, plus the explicit worst pair.
pub fn monte_carlo_worst_case(
    s: &WiretapScenario,
    u: &ComplexVec,
    n_samples: usize,
    seed: u64,
) -> Result<f64, VerifyError> {
    monte_carlo_with(Execution::default(), s, u, n_samples, seed, true)
}

/// Like [`monte_carlo_worst_case`] but with random samples only.
pub fn monte_carlo_sampled_min(
    s: &WiretapScenario,
    u: &ComplexVec,
    n_samples: usize,
    seed: u64,
) -> Result<f64, VerifyError> {
    monte_carlo_with(Execution::default(), s, u, n_samples, seed, false)
}

/// Sample `i` comes from chunk `i / 1024`, whose generator is stream
/// `chunk + 1` of `seed`, so the result depends only on `(seed, n_samples)`.
pub fn monte_carlo_with(
    exec: Execution,
    s: &WiretapScenario,
    u: &ComplexVec,
    n_samples: usize,
    seed: u64,
    inject_worst: bool,
) -> Result<f64, VerifyError> {
    check_beam(s, u)?;
    if n_samples == 0 {
        return Err(VerifyError::NoSamples);
    }
    let power = s.power();
    if s.eps_r() == 0.0 && s.eps_e() == 0.0 {
        return Ok(beam_rate(power, u, s.hbar_r(), s.hbar_e()));
    }
    let chunks = chunk_ranges(n_samples, MC_CHUNK);
    let sampled = exec.map_reduce(
        chunks.len(),
        f64::INFINITY,
        |ci| {
            let mut rng = rng_for(seed, ci as u64 + 1);
            chunks[ci]
                .clone()
                .map(|_| {
                    let h_r = uniform_in_ball(&mut rng, s.hbar_r(), s.eps_r());
                    let h_e = uniform_in_ball(&mut rng, s.hbar_e(), s.eps_e());
                    beam_rate(power, u, &h_r, &h_e)
                })
                .fold(f64::INFINITY, f64::min)
        },
        f64::min,
    );
    if !inject_worst {
        return Ok(sampled);
    }
    let (h_r, h_e) = explicit_worst_pair(s, u);
    Ok(sampled.min(beam_rate(power, u, &h_r, &h_e)))
}

/// Brute-force minimum of `|u†b|²` over unit `u` with `|u†a|² = q`.
///
/// Beams are parametrised as `u = c1·a + c2·b + c3·n` with `n` a unit
/// vector orthogonal to both (present when the dimension allows). A grid
/// over the phase of `c1` and over `c2 ≥ 0` is searched; for each grid
/// point `|c1|` is solved from the `q` constraint and `c3` from the norm,
/// and the best cell is then zoomed into a few times. About `n` objective
/// evaluations are spent per round. The seed jitters the phase grid.
pub fn lemma1_bruteforce(a: &ComplexVec, b: &ComplexVec, q: f64, n: usize, seed: u64) -> Result<f64, VerifyError> {
    lemma1_bruteforce_with(Execution::default(), a, b, q, n, seed)
}

pub fn lemma1_bruteforce_with(
    exec: Execution,
    a: &ComplexVec,
    b: &ComplexVec,
    q: f64,
    n: usize,
    seed: u64,
) -> Result<f64, VerifyError> {
    for v in [a, b] {
        let norm = v.norm();
        if (norm - 1.0).abs() > UNIT_TOL {
            return Err(VerifyError::NotUnit(norm));
        }
    }
    if !(0.0..=1.0).contains(&q) {
        return Err(VerifyError::LevelOutOfRange(q));
    }
    let w = a.dot(b);
    let r = w.norm().min(1.0);
    if 1.0 - r * r < DEGENERACY_TOL {
        return Err(VerifyError::Parallel(r));
    }
    let has_perp = a.len() >= 3;
    let ba = w.conj();
    // ‖u − (a†u)a‖² = c2²(1 − r²) + c3² = 1 − q bounds c2.
    let c2_max = ((1.0 - q) / (1.0 - r * r)).max(0.0).sqrt();

    // Value of the objective at (theta, c2), minimised over both roots of
    // the |c1| quadratic.
    let objective = |theta: f64, c2: f64| -> f64 {
        let e = Complex64::from_polar(1.0, theta);
        // |ρe^{iθ} + c2·w|² = q  →  ρ² + 2ρ·c2·Re(e^{−iθ}w) + c2²r² − q = 0
        let proj = (e.conj() * w).re * c2;
        let disc = proj * proj - c2 * c2 * r * r + q;
        if disc < 0.0 {
            return f64::INFINITY;
        }
        let c3_sq = 1.0 - q - c2 * c2 * (1.0 - r * r);
        if !has_perp && c3_sq.abs() > 1e-12 {
            return f64::INFINITY;
        }
        let sd = disc.sqrt();
        [-proj + sd, -proj - sd]
            .into_iter()
            .filter(|&rho| rho >= 0.0)
            .map(|rho| (e * rho * ba + c2).norm_sqr())
            .fold(f64::INFINITY, f64::min)
    };

    let (n_theta, n_c2) = if has_perp {
        let side = (n as f64).sqrt().ceil().max(2.0) as usize;
        (side, side)
    } else {
        (n.max(2), 1)
    };
    let jitter: f64 = rng_for(seed, 0).random::<f64>();
    let two_pi = std::f64::consts::TAU;

    let mut theta_lo = 0.0;
    let mut theta_width = two_pi;
    let mut c2_lo = 0.0;
    let mut c2_width = c2_max;
    let mut best = (f64::INFINITY, 0.0, if has_perp { 0.0 } else { c2_max });
    for round in 0..=LEMMA1_ZOOM_ROUNDS {
        let d_theta = theta_width / n_theta as f64;
        let offset = if round == 0 { jitter * d_theta } else { 0.0 };
        let d_c2 = if n_c2 > 1 { c2_width / (n_c2 - 1) as f64 } else { 0.0 };
        let lower = |x: (f64, f64, f64), y: (f64, f64, f64)| {
            if y.0 < x.0 || (y.0 == x.0 && (y.1, y.2) < (x.1, x.2)) {
                y
            } else {
                x
            }
        };
        let chunks = chunk_ranges(n_theta * n_c2, GRID_CHUNK);
        let found = exec.map_reduce(
            chunks.len(),
            (f64::INFINITY, 0.0, 0.0),
            |ci| {
                chunks[ci]
                    .clone()
                    .map(|k| {
                        let theta = theta_lo + offset + d_theta * (k / n_c2) as f64;
                        let c2 = if n_c2 > 1 {
                            (c2_lo + d_c2 * (k % n_c2) as f64).clamp(0.0, c2_max)
                        } else {
                            c2_max
                        };
                        (objective(theta, c2), theta, c2)
                    })
                    .fold((f64::INFINITY, 0.0, 0.0), lower)
            },
            lower,
        );
        if found.0 < best.0 {
            best = found;
        }
        // Zoom: a window of a few cells around the best point.
        theta_width = 4.0 * d_theta;
        theta_lo = best.1 - 2.0 * d_theta;
        if n_c2 > 1 {
            c2_width = 4.0 * d_c2;
            c2_lo = (best.2 - 2.0 * d_c2).max(0.0);
        }
    }
    Ok(best.0)
}

/// Largest secrecy rate achievable with perfect channel knowledge,
/// `log2 λ_max(I + P h_R h_R†, I + P h_E h_E†)`, clamped at zero. Computed on
/// the span of the two channels, where the pencil is 2×2.
pub fn perfect_csi_oracle(s: &WiretapScenario) -> Result<f64, VerifyError> {
    if s.eps_r() != 0.0 || s.eps_e() != 0.0 {
        return Err(VerifyError::NonzeroRadii);
    }
    let p = s.power();
    let e1 = s.hbar_r().normalized().expect("validated channel is nonzero");
    let e2 = {
        let resid = s.hbar_e().axpy(-e1.dot(s.hbar_e()), &e1);
        if resid.norm() > 1e-12 * s.hbar_e().norm() {
            resid.normalized()
        } else {
            None
        }
    };
    let lambda = match e2 {
        None => {
            let gr = e1.dot(s.hbar_r()).norm_sqr();
            let ge = e1.dot(s.hbar_e()).norm_sqr();
            (1.0 + p * gr) / (1.0 + p * ge)
        }
        Some(e2) => {
            let gr = [e1.dot(s.hbar_r()), e2.dot(s.hbar_r())];
            let ge = [e1.dot(s.hbar_e()), e2.dot(s.hbar_e())];
            let gram = |g: [Complex64; 2]| {
                (
                    1.0 + p * g[0].norm_sqr(),
                    1.0 + p * g[1].norm_sqr(),
                    g[0] * g[1].conj() * p,
                )
            };
            let (a11, a22, a12) = gram(gr);
            let (b11, b22, b12) = gram(ge);
            // det(A − λB) = αλ² − βλ + γ
            let alpha = b11 * b22 - b12.norm_sqr();
            let beta = a11 * b22 + a22 * b11 - 2.0 * (a12 * b12.conj()).re;
            let gamma = a11 * a22 - a12.norm_sqr();
            let disc = (beta * beta - 4.0 * alpha * gamma).max(0.0);
            (beta + disc.sqrt()) / (2.0 * alpha)
        }
    };
    Ok(lambda.log2().max(0.0))
}

/// Worst-case rate of covariance `q`, estimated from above.
///
/// The inner minimum over the legitimate ball is convex and solved by
/// projected gradient descent; the eavesdropper maximum is approached by
/// projected gradient ascent from `hint` (when given) and from random
/// starts. Any feasible pair bounds the true worst case from above.
pub fn covariance_rate_upper_bound(
    s: &WiretapScenario,
    q: &CMatrix,
    hint: Option<(&ComplexVec, &ComplexVec)>,
    n_starts: usize,
    seed: u64,
) -> f64 {
    let step = 1.0 / q.trace().re.max(f64::MIN_POSITIVE);
    let project = |h: ComplexVec, center: &ComplexVec, eps: f64| {
        let d = &h - center;
        let n = d.norm();
        if n <= eps {
            h
        } else {
            center.axpy(Complex64::new(eps / n, 0.0), &d)
        }
    };
    let descend = |start: ComplexVec, sign: f64, center: &ComplexVec, eps: f64| {
        let mut h = project(start, center, eps);
        for _ in 0..400 {
            let g = q.mul_vec(&h);
            h = project(h.axpy(Complex64::new(sign * step, 0.0), &g), center, eps);
        }
        h
    };
    let mut rng = rng_for(seed, 0);
    let mut starts_r = vec![s.hbar_r().clone()];
    let mut starts_e = vec![s.hbar_e().clone()];
    if let Some((hr, he)) = hint {
        starts_r.push(hr.clone());
        starts_e.push(he.clone());
    }
    for _ in 0..n_starts {
        let dir = unit_sphere(&mut rng, s.antennas());
        starts_r.push(s.hbar_r().axpy(Complex64::new(s.eps_r(), 0.0), &dir));
        let dir = unit_sphere(&mut rng, s.antennas());
        starts_e.push(s.hbar_e().axpy(Complex64::new(s.eps_e(), 0.0), &dir));
    }
    let legit = starts_r
        .into_iter()
        .map(|h| q.quad_form(&descend(h, -1.0, s.hbar_r(), s.eps_r())))
        .fold(f64::INFINITY, f64::min);
    let eaves = starts_e
        .into_iter()
        .map(|h| q.quad_form(&descend(h, 1.0, s.hbar_e(), s.eps_e())))
        .fold(f64::NEG_INFINITY, f64::max);
    ((1.0 + legit) / (1.0 + eaves)).log2()
}

/// Settings for [`verify_scenario`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub grid_points: usize,
    pub mc_samples: usize,
    pub lemma1_points: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            grid_points: DEFAULT_GRID_POINTS,
            mc_samples: DEFAULT_MC_SAMPLES,
            lemma1_points: DEFAULT_LEMMA1_POINTS,
            seed: 0,
        }
    }
}

/// Outcome of running every applicable oracle on one scenario.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub secrecy_rate_bits: f64,
    pub positive: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_rate_bits: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_z: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mc_min_rate_bits: Option<f64>,
    /// Solver rate minus the rate at the explicit worst channels.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub attainment_gap: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lemma1_max_violation: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub perfect_csi_rate_bits: Option<f64>,
    pub samples: usize,
    pub seed: u64,
    pub notes: Vec<String>,
    pub passed: bool,
}

/// Runs the solver and cross-checks it against every applicable oracle.
pub fn verify_scenario(s: &WiretapScenario, opts: &VerifyOptions) -> Result<VerificationReport, VerifyError> {
    let out = worst_case_secrecy_rate(s).expect("scenario was validated on construction");
    let params = derive_params(s);
    let rate = out.secrecy_rate_bits;
    let mut notes = Vec::new();
    let mut passed = true;
    let mut fail = |notes: &mut Vec<String>, msg: String| {
        passed = false;
        notes.push(msg);
    };

    let grid = if params.z0 <= 1.0 {
        Some(grid_oracle(&params, opts.grid_points)?)
    } else {
        notes.push("legitimate uncertainty ball contains the origin; grid skipped".into());
        None
    };

    let mut report = VerificationReport {
        secrecy_rate_bits: rate,
        positive: out.positive,
        grid_rate_bits: grid.map(|g| g.rate_bits),
        grid_z: grid.map(|g| g.z),
        mc_min_rate_bits: None,
        attainment_gap: None,
        lemma1_max_violation: None,
        perfect_csi_rate_bits: None,
        samples: opts.mc_samples,
        seed: opts.seed,
        notes: Vec::new(),
        passed: true,
    };

    if !out.positive {
        notes.push(format!(
            "rate is not positive (branch {:?}); only the positivity recheck was run",
            out.diagnostics.branch
        ));
        if let Some(g) = grid {
            if g.rate_bits > MC_TOL {
                fail(
                    &mut notes,
                    format!("grid finds positive rate {} where none was expected", g.rate_bits),
                );
            }
        }
        if out.diagnostics.branch != Branch::Neither && !out.legit_ball_contains_origin {
            notes.push("positivity conditions hold but the optimum is numerically 1".into());
        }
    } else {
        let u = out.u_star.as_ref().expect("positive output has a beam");
        if let Some(g) = grid {
            let diff = rate - g.rate_bits;
            if diff < -GRID_TOL_BELOW || diff > GRID_TOL_ABOVE * rate.abs().max(1.0) {
                fail(&mut notes, format!("grid deviation {diff:e} outside tolerance"));
            }
        }

        let (h_r, h_e) = explicit_worst_pair(s, u);
        let gap = rate - beam_rate(s.power(), u, &h_r, &h_e);
        report.attainment_gap = Some(gap);
        if gap.abs() > ATTAINMENT_TOL {
            fail(&mut notes, format!("attainment gap {gap:e} exceeds {ATTAINMENT_TOL:e}"));
        }

        let mc = monte_carlo_worst_case(s, u, opts.mc_samples, opts.seed)?;
        report.mc_min_rate_bits = Some(mc);
        if mc < rate - MC_TOL {
            fail(&mut notes, format!("sampled rate {mc} below closed form {rate}"));
        }
        let closed = beam_worst_case_rate(s, u);
        if (closed - rate).abs() > ATTAINMENT_TOL {
            fail(
                &mut notes,
                format!("closed-form inner rate {closed} differs from {rate}"),
            );
        }

        if s.antennas() >= 2 && !params.is_parallel() && !params.is_orthogonal() {
            let violation = lemma1_spot_check(s, &params, out.z_star.unwrap_or(1.0), opts)?;
            report.lemma1_max_violation = Some(violation);
            if violation > LEMMA1_TOL {
                fail(&mut notes, format!("projection lemma violation {violation:e}"));
            }
        }
    }

    if s.eps_r() == 0.0 && s.eps_e() == 0.0 {
        let pcsi = perfect_csi_oracle(s)?;
        report.perfect_csi_rate_bits = Some(pcsi);
        if (pcsi - rate).abs() > PERFECT_CSI_TOL {
            fail(&mut notes, format!("perfect-CSI oracle {pcsi} differs from {rate}"));
        }
    }

    report.notes = notes;
    report.passed = passed;
    Ok(report)
}

/// Compares the closed-form projection lemma with brute force at
/// `q = z*²` and a few levels above `1 − r²`, including constraint
/// residuals of the constructed minimiser.
fn lemma1_spot_check(
    s: &WiretapScenario,
    p: &ScalarParams,
    z_star: f64,
    opts: &VerifyOptions,
) -> Result<f64, VerifyError> {
    let a = s.hbar_r().normalized().expect("validated channel is nonzero");
    let b = s.hbar_e().normalized().expect("validated channel is nonzero");
    let floor = 1.0 - p.r * p.r;
    let mut levels = vec![z_star * z_star];
    levels.extend((1..=3).map(|k| floor + (1.0 - floor) * k as f64 / 4.0));
    let per_level = (opts.lemma1_points / levels.len()).max(16);
    let mut worst = 0.0_f64;
    for (i, &q) in levels.iter().enumerate() {
        let q = q.clamp(0.0, 1.0);
        let closed = lemma1_solve(&a, &b, q).map_err(|_| VerifyError::Parallel(p.r))?;
        let brute = lemma1_bruteforce(&a, &b, q, per_level, opts.seed.wrapping_add(i as u64))?;
        worst = worst.max((brute - closed.value).abs());
        if let Some(u) = closed.u {
            worst = worst
                .max((u.norm_sqr() - 1.0).abs())
                .max((u.dot(&a).norm_sqr() - q).abs())
                .max((u.dot(&b).norm_sqr() - closed.value).abs());
        }
    }
    Ok(worst)
}
