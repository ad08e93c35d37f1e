//! Explicit maximiser of the worst-case secrecy rate.
//!
//! With a rank-one covariance `Q = P·uu†`, the worst-case problem collapses
//! onto the legitimate projection level `z = |u†h̄_R|/‖h̄_R‖ ∈ [z0, 1]` and the
//! objective
//!
//! ```text
//! g(z) = (1 + b(z − c)²) / (1 + a(rz − √(1−r²)√(1−z²) + d)²).
//! ```
//!
//! The substitution `z = 2x/(1+x²)` turns `g` into a ratio of quartics in
//! `x ∈ [x_lo, 1]` whose stationary points are the roots of a degree-six
//! polynomial. The optimum is the best of those roots and the left end
//! point. Rates are reported in bits per channel use (base-2 logarithm).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::inner::{worst_eaves_channel, worst_legit_channel};
use crate::linalg::{CMatrix, ComplexVec};
use crate::polyroots::{filter_feasible, roots, PolyError, RealPolynomial};
use crate::scenario::{derive_params, validate_scenario, ScalarParams, ScenarioError, WiretapScenario};

/// Slack allowed when checking `z ∈ [z0, 1]`.
const DOMAIN_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error("z = {z} outside the feasible interval [{z0}, 1]")]
    OutOfDomain { z: f64, z0: f64 },
    #[error("feasible interval is empty (z0 = {0} > 1)")]
    EmptyDomain(f64),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Which of the two positivity conditions holds, if any.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Cond1,
    Cond2,
    Neither,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PositivityDiagnostics {
    pub branch: Branch,
    /// `√(1−r²)·z0 + (r − √(b/a))·√(1−z0²)`; its sign picks the condition.
    pub expr_sign: f64,
    /// Left minus right side of the governing strict inequality.
    pub expr_margin: f64,
}

/// Decides whether any positive worst-case secrecy rate is achievable.
///
/// Depends on the power only through `b/a`, so scaling `P` never changes
/// the branch.
pub fn positivity_check(p: &ScalarParams) -> PositivityDiagnostics {
    let s = (p.b / p.a).sqrt();
    let rp = p.r_perp();
    let z0p = (1.0 - p.z0 * p.z0).max(0.0).sqrt();
    let rhs = p.c * s + p.d;
    let expr_sign = rp * p.z0 + (p.r - s) * z0p;

    if p.c >= 1.0 {
        // The legitimate ball reaches the origin: compare at z = 1, the only
        // point where the legitimate term could still be nonzero.
        return PositivityDiagnostics {
            branch: Branch::Neither,
            expr_sign,
            expr_margin: s * (1.0 - p.c) - p.r - p.d,
        };
    }

    if expr_sign >= 0.0 {
        let margin = rp * z0p - (p.r - s) * p.z0 - rhs;
        PositivityDiagnostics {
            branch: if margin > 0.0 { Branch::Cond1 } else { Branch::Neither },
            expr_sign,
            expr_margin: margin,
        }
    } else {
        let margin = (1.0 - p.r * p.r + (s - p.r).powi(2)).sqrt() - rhs;
        PositivityDiagnostics {
            branch: if margin > 0.0 { Branch::Cond2 } else { Branch::Neither },
            expr_sign,
            expr_margin: margin,
        }
    }
}

/// `g(z)` on `[z0, 1]`.
pub fn objective_g(z: f64, p: &ScalarParams) -> Result<f64, SolverError> {
    if !(z >= p.z0 - DOMAIN_SLACK && z <= 1.0 + DOMAIN_SLACK) {
        return Err(SolverError::OutOfDomain { z, z0: p.z0 });
    }
    Ok(g_unchecked(z.clamp(p.z0.min(1.0), 1.0), p))
}

pub(crate) fn g_unchecked(z: f64, p: &ScalarParams) -> f64 {
    let zp = (1.0 - z * z).max(0.0).sqrt();
    let leak = p.r * z - p.r_perp() * zp + p.d;
    (1.0 + p.b * (z - p.c).powi(2)) / (1.0 + p.a * leak * leak)
}

/// Coefficients of `F(x) = g(2x/(1+x²))` as a ratio of quartics,
/// numerator `(p0, p1, p2, p1, p0)` and denominator `(q0, …, q4)`, highest
/// degree first.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RationalCoefficients {
    pub p: [f64; 3],
    pub q: [f64; 5],
}

impl RationalCoefficients {
    pub fn numerator(&self) -> [f64; 5] {
        let [p0, p1, p2] = self.p;
        [p0, p1, p2, p1, p0]
    }

    /// `F(x)`.
    pub fn eval(&self, x: f64) -> f64 {
        let horner = |c: &[f64]| c.iter().fold(0.0, |acc, &k| acc * x + k);
        horner(&self.numerator()) / horner(&self.q)
    }
}

pub fn rational_coefficients(p: &ScalarParams) -> RationalCoefficients {
    let (a, b, c, d, r) = (p.a, p.b, p.c, p.d, p.r);
    let rp = p.r_perp();
    RationalCoefficients {
        p: [1.0 + b * c * c, -4.0 * b * c, 4.0 * b + 2.0 * b * c * c + 2.0],
        q: [
            1.0 + a * (rp + d).powi(2),
            4.0 * a * r * (rp + d),
            2.0 - 2.0 * a + 6.0 * a * r * r + 2.0 * a * d * d,
            4.0 * a * r * (d - rp),
            1.0 + a * (d - rp).powi(2),
        ],
    }
}

/// Degree-six polynomial whose roots include every stationary point of
/// `F`. It equals `N·D' − N'·D`. Returns `None` when `F` is constant.
pub fn stationarity_polynomial(pq: &RationalCoefficients) -> Option<RealPolynomial> {
    let [p0, p1, p2] = pq.p;
    let [q0, q1, q2, q3, q4] = pq.q;
    let coeffs = vec![
        p1 * q0 - p0 * q1,
        2.0 * p2 * q0 - 2.0 * p0 * q2,
        3.0 * p1 * q0 + p2 * q1 - p1 * q2 - 3.0 * p0 * q3,
        4.0 * p0 * q0 + 2.0 * p1 * q1 - 2.0 * p1 * q3 - 4.0 * q4 * p0,
        3.0 * p0 * q1 + p1 * q2 - p2 * q3 - 3.0 * q4 * p1,
        2.0 * p0 * q2 - 2.0 * q4 * p2,
        p0 * q3 - q4 * p1,
    ];
    RealPolynomial::new(coeffs).ok()
}

/// Left end of the `x` interval, the preimage of `z0`. Written as
/// `z0 / (1 + √(1−z0²))` to avoid cancellation for small `z0`.
pub fn x_lower(z0: f64) -> f64 {
    z0 / (1.0 + (1.0 - z0 * z0).max(0.0).sqrt())
}

pub fn z_from_x(x: f64) -> f64 {
    2.0 * x / (1.0 + x * x)
}

/// A point at which `g` was evaluated during candidate selection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub x: f64,
    pub z: f64,
    pub g: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZStar {
    pub z_star: f64,
    pub x_star: f64,
    pub candidates: Vec<Candidate>,
}

/// Maximises `g` over `[z0, 1]` through the stationary points of `F`.
pub fn solve_z_star(p: &ScalarParams) -> Result<ZStar, SolverError> {
    if p.z0 > 1.0 {
        return Err(SolverError::EmptyDomain(p.z0));
    }
    let x_lo = x_lower(p.z0);
    let mut xs = vec![x_lo];
    let stationary = match stationarity_polynomial(&rational_coefficients(p)) {
        Some(poly) => filter_feasible(&roots(&poly)?, x_lo, 1.0),
        None => Vec::new(),
    };
    if stationary.is_empty() {
        xs.push(1.0);
    } else {
        xs.extend(stationary);
    }
    Ok(select_best(p, &xs))
}

fn select_best(p: &ScalarParams, xs: &[f64]) -> ZStar {
    let candidates: Vec<Candidate> = xs
        .iter()
        .map(|&x| {
            let z = z_from_x(x).clamp(p.z0.min(1.0), 1.0);
            Candidate {
                x,
                z,
                g: g_unchecked(z, p),
            }
        })
        .collect();
    let best = candidates
        .iter()
        .copied()
        .reduce(|best, c| {
            if c.g > best.g || (c.g == best.g && c.x < best.x) {
                c
            } else {
                best
            }
        })
        .expect("candidate list always holds the left end point");
    ZStar {
        z_star: best.z,
        x_star: best.x,
        candidates,
    }
}

/// Optimal unit beam achieving legitimate projection level `z_star` with
/// the least eavesdropper leakage. Lies in the span of the two estimated
/// channels; degenerate geometries use the fallbacks below.
pub fn beamformer(s: &WiretapScenario, p: &ScalarParams, z_star: f64) -> ComplexVec {
    let ahat = s.hbar_r().normalized().expect("validated channel is nonzero");
    if s.antennas() == 1 || p.is_orthogonal() {
        return ahat;
    }
    let z = z_star.clamp(0.0, 1.0);
    let zp = (1.0 - z * z).sqrt();
    if p.is_parallel() {
        let n = ahat.orthogonal_unit().expect("n_T ≥ 2 has an orthogonal direction");
        return ahat.scale_real(z).axpy(Complex64::new(zp, 0.0), &n);
    }
    let bhat = s.hbar_e().normalized().expect("validated channel is nonzero");
    let k = zp / p.r_perp();
    let w = ahat.dot(&bhat);
    let u = bhat.scale_real(k).axpy(-(w * (k + z / p.r)), &ahat);
    u.normalized().expect("beam is a nonzero combination")
}

/// Closed-form worst-case rate (bits) of the beam `u` at full power:
/// both adversaries play their optimal channels.
pub fn beam_worst_case_rate(s: &WiretapScenario, u: &ComplexVec) -> f64 {
    let legit = (u.dot(s.hbar_r()).norm() - s.eps_r()).max(0.0).powi(2);
    let eaves = (u.dot(s.hbar_e()).norm() + s.eps_e()).powi(2);
    ((1.0 + s.power() * legit) / (1.0 + s.power() * eaves)).log2()
}

/// Rate (bits) of covariance `P·uu†` on a specific channel pair.
pub fn beam_rate(power: f64, u: &ComplexVec, h_r: &ComplexVec, h_e: &ComplexVec) -> f64 {
    ((1.0 + power * u.dot(h_r).norm_sqr()) / (1.0 + power * u.dot(h_e).norm_sqr())).log2()
}

/// Full solution of one scenario.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolverOutput {
    pub secrecy_rate_bits: f64,
    pub positive: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z_star: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x_star: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u_star: Option<ComplexVec>,
    /// `P·u*u*†`.
    #[serde(skip)]
    pub q_star: Option<CMatrix>,
    pub candidates: Vec<Candidate>,
    pub diagnostics: PositivityDiagnostics,
    #[serde(skip)]
    pub params: ScalarParams,
    #[serde(skip)]
    pub legit_ball_contains_origin: bool,
}

impl SolverOutput {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("solver output always serialises")
    }

    /// Legitimate and eavesdropper channels that realise the worst case for
    /// the optimal beam. `None` when the rate is not positive.
    pub fn worst_channels(&self, s: &WiretapScenario) -> Option<(ComplexVec, ComplexVec)> {
        let u = self.u_star.as_ref()?;
        let legit = worst_legit_channel(u, s.hbar_r(), s.eps_r()).ok()?;
        let eaves = worst_eaves_channel(u, s.hbar_e(), s.eps_e()).ok()?;
        Some((legit.worst_channel, eaves.worst_channel))
    }
}

/// Maximum worst-case secrecy rate and the optimal rank-one covariance.
pub fn worst_case_secrecy_rate(s: &WiretapScenario) -> Result<SolverOutput, ScenarioError> {
    let validation = validate_scenario(s)?;
    let params = derive_params(s);
    let diagnostics = positivity_check(&params);

    let zero = |candidates| SolverOutput {
        secrecy_rate_bits: 0.0,
        positive: false,
        z_star: None,
        x_star: None,
        u_star: None,
        q_star: None,
        candidates,
        diagnostics,
        params,
        legit_ball_contains_origin: validation.legit_ball_contains_origin,
    };

    if validation.legit_ball_contains_origin || diagnostics.branch == Branch::Neither {
        return Ok(zero(Vec::new()));
    }

    let zs = if s.antennas() == 1 {
        // A scalar beam always has z = 1.
        select_best(&params, &[1.0])
    } else {
        match solve_z_star(&params) {
            Ok(zs) => zs,
            // z0 ≤ 1 holds here and the polynomial path only fails on QR
            // non-convergence; fall back to the end points.
            Err(_) => select_best(&params, &[x_lower(params.z0), 1.0]),
        }
    };
    let g = g_unchecked(zs.z_star, &params);
    if g.is_nan() || g <= 1.0 {
        return Ok(zero(zs.candidates));
    }
    let u = beamformer(s, &params, zs.z_star);
    let q = u.outer(s.power());
    Ok(SolverOutput {
        secrecy_rate_bits: g.log2(),
        positive: true,
        z_star: Some(zs.z_star),
        x_star: Some(zs.x_star),
        u_star: Some(u),
        q_star: Some(q),
        candidates: zs.candidates,
        diagnostics,
        params,
        legit_ball_contains_origin: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_cond2_example() {
        // a=1, b=100, r=0.5, c=d=0: z0=√0.75, expr_sign = 0.75 − 9.5·0.5, margin = √91
        let p = ScalarParams::new(1.0, 100.0, 0.0, 0.0, 0.5);
        let d = positivity_check(&p);
        assert_eq!(d.branch, Branch::Cond2);
        assert!((d.expr_sign - (-4.0)).abs() < 1e-12);
        assert!((d.expr_margin - 91f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn g_trivial_cases() {
        let flat = ScalarParams::new(0.0, 0.0, 0.1, 0.2, 0.3);
        for z in [flat.z0, 0.97, 1.0] {
            assert_eq!(objective_g(z, &flat).unwrap(), 1.0);
        }
        // r = 1, d = 0, z = c → 1/(1 + a c²)
        let p = ScalarParams::new(2.0, 3.0, 0.4, 0.0, 1.0);
        let g = objective_g(0.4, &p).unwrap();
        assert!((g - 1.0 / (1.0 + 2.0 * 0.16)).abs() < 1e-15);
    }

    #[test]
    fn g_rejects_out_of_domain() {
        let p = ScalarParams::new(1.0, 1.0, 0.0, 0.0, 0.6);
        assert!(matches!(objective_g(0.5, &p), Err(SolverError::OutOfDomain { .. })));
        assert!(matches!(objective_g(1.1, &p), Err(SolverError::OutOfDomain { .. })));
    }

    #[test]
    fn rational_coefficients_simple() {
        let pq = rational_coefficients(&ScalarParams::new(1.0, 1.0, 0.0, 0.0, 0.0));
        assert_eq!(pq.p, [1.0, 0.0, 6.0]);
        assert_eq!(pq.q, [2.0, 0.0, 0.0, 0.0, 2.0]);
        let b0 = rational_coefficients(&ScalarParams::new(1.5, 0.0, 0.7, 0.1, 0.4));
        assert_eq!(b0.p, [1.0, 0.0, 2.0]);
    }

    #[test]
    fn stationarity_degenerate_case_drops_degree() {
        let pq = rational_coefficients(&ScalarParams::new(1.0, 1.0, 0.0, 0.0, 0.0));
        let poly = stationarity_polynomial(&pq).unwrap();
        let c = poly.coeffs();
        assert_eq!(c[0], 0.0);
        assert_eq!(c[1], 24.0);
        assert_eq!(c[6], 0.0);
        assert!(poly.stripped().degree() < 6);
    }

    #[test]
    fn constant_objective_has_no_stationary_polynomial() {
        let pq = rational_coefficients(&ScalarParams::new(0.0, 0.0, 0.3, 0.1, 0.5));
        assert!(stationarity_polynomial(&pq).is_none());
    }

    #[test]
    fn orthogonal_channels_collapse_interval() {
        let p = ScalarParams::new(1.0, 4.0, 0.2, 0.0, 0.0);
        let zs = solve_z_star(&p).unwrap();
        assert_eq!(zs.x_star, 1.0);
        assert_eq!(zs.z_star, 1.0);
    }

    #[test]
    fn x_lower_maps_to_z0() {
        for z0 in [1e-9, 0.1, 0.5, 0.841120, 0.999, 1.0] {
            assert!((z_from_x(x_lower(z0)) - z0).abs() < 1e-15);
        }
    }

    #[test]
    fn legit_ball_containing_origin_gives_zero_rate() {
        let s = WiretapScenario::new(
            ComplexVec::from_pairs(&[[0.05, 0.0]]).unwrap(),
            ComplexVec::from_pairs(&[[0.01, 0.0]]).unwrap(),
            0.1,
            0.0,
            10.0,
        )
        .unwrap();
        let out = worst_case_secrecy_rate(&s).unwrap();
        assert!(!out.positive);
        assert_eq!(out.secrecy_rate_bits, 0.0);
        assert!(out.legit_ball_contains_origin);
        assert_eq!(out.diagnostics.branch, Branch::Neither);
    }

    #[test]
    fn single_antenna_uses_full_projection() {
        let s = WiretapScenario::new(
            ComplexVec::from_pairs(&[[2.0, 1.0]]).unwrap(),
            ComplexVec::from_pairs(&[[0.3, -0.2]]).unwrap(),
            0.1,
            0.05,
            4.0,
        )
        .unwrap();
        let out = worst_case_secrecy_rate(&s).unwrap();
        assert!(out.positive);
        assert_eq!(out.z_star, Some(1.0));
        let nr: f64 = 5f64.sqrt();
        let ne: f64 = 0.13f64.sqrt();
        let want = ((1.0 + 4.0 * (nr - 0.1).powi(2)) / (1.0 + 4.0 * (ne + 0.05).powi(2))).log2();
        assert!((out.secrecy_rate_bits - want).abs() < 1e-12);
    }

    #[test]
    fn json_omits_absent_fields() {
        let s = WiretapScenario::new(
            ComplexVec::basis(2, 0).scale_real(0.1),
            ComplexVec::basis(2, 0),
            0.0,
            0.0,
            1.0,
        )
        .unwrap();
        let out = worst_case_secrecy_rate(&s).unwrap();
        assert!(!out.positive);
        let v: serde_json::Value = serde_json::from_str(&out.to_json()).unwrap();
        let obj = v.as_object().unwrap();
        assert!(!obj.contains_key("z_star"));
        assert!(!obj.contains_key("u_star"));
        assert_eq!(v["diagnostics"]["branch"], "neither");
        assert_eq!(v["secrecy_rate_bits"], 0.0);
    }
}
