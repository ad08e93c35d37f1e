//! Closed forms for the inner worst-case subproblems.
//!
//! For a fixed unit beam `u`, the adversary picks the legitimate channel in
//! its ball to minimise `|u†h_R|²` and the eavesdropper channel in its ball
//! to maximise `|u†h_E|²`; both optima sit on the sphere, displaced along
//! `u`. The second half of the module solves the projection problem
//!
//! ```text
//! min |u†b|²  s.t.  |u†a|² = q,  ‖u‖ = 1
//! ```
//!
//! for unit vectors `a`, `b`, which gives the smallest eavesdropper leakage
//! attainable at a fixed legitimate projection level.

use num_complex::Complex64;
use thiserror::Error;

use crate::linalg::ComplexVec;
use crate::scenario::{ScalarParams, DEGENERACY_TOL};

/// Tolerance on the unit-norm preconditions.
pub const UNIT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InnerError {
    #[error("|u†h̄_R| = {projection} does not exceed eps_r = {eps}; the legitimate worst case is zero")]
    LegitUnreachable { projection: f64, eps: f64 },
    #[error("vector must have unit norm, got {0}")]
    NotUnit(f64),
    #[error("vectors have different lengths")]
    Length,
    #[error("inputs are parallel (r = {0}); handle the degenerate case separately")]
    Parallel(f64),
    #[error("level q = {0} outside [0, 1]")]
    LevelOutOfRange(f64),
}

/// Optimal value and optimising channel of an inner subproblem.
#[derive(Debug, Clone, PartialEq)]
pub struct InnerSolution {
    pub value: f64,
    pub worst_channel: ComplexVec,
}

fn check_unit(u: &ComplexVec) -> Result<(), InnerError> {
    let n = u.norm();
    if (n - 1.0).abs() > UNIT_TOL {
        return Err(InnerError::NotUnit(n));
    }
    Ok(())
}

fn unit_phase(z: Complex64) -> Complex64 {
    z / z.norm()
}

/// `min_{‖h−h̄_R‖≤ε_R} |u†h|² = (|u†h̄_R| − ε_R)²`, attained at
/// `h̄_R − ε_R·e^{i∠(u†h̄_R)}·u`. Requires `|u†h̄_R| > ε_R`.
pub fn worst_legit_channel(u: &ComplexVec, hbar_r: &ComplexVec, eps_r: f64) -> Result<InnerSolution, InnerError> {
    check_unit(u)?;
    if u.len() != hbar_r.len() {
        return Err(InnerError::Length);
    }
    let proj = u.dot(hbar_r);
    if proj.norm() <= eps_r {
        return Err(InnerError::LegitUnreachable {
            projection: proj.norm(),
            eps: eps_r,
        });
    }
    let worst_channel = if eps_r == 0.0 {
        hbar_r.clone()
    } else {
        hbar_r.axpy(-unit_phase(proj) * eps_r, u)
    };
    Ok(InnerSolution {
        value: (proj.norm() - eps_r).powi(2),
        worst_channel,
    })
}

/// `max_{‖h−h̄_E‖≤ε_E} |u†h|² = (|u†h̄_E| + ε_E)²`, attained at
/// `h̄_E + ε_E·e^{i∠(u†h̄_E)}·u` (or `h̄_E + ε_E·u` when `u†h̄_E = 0`).
pub fn worst_eaves_channel(u: &ComplexVec, hbar_e: &ComplexVec, eps_e: f64) -> Result<InnerSolution, InnerError> {
    check_unit(u)?;
    if u.len() != hbar_e.len() {
        return Err(InnerError::Length);
    }
    let proj = u.dot(hbar_e);
    let phase = if proj.norm() == 0.0 {
        Complex64::new(1.0, 0.0)
    } else {
        unit_phase(proj)
    };
    let worst_channel = if eps_e == 0.0 {
        hbar_e.clone()
    } else {
        hbar_e.axpy(phase * eps_e, u)
    };
    Ok(InnerSolution {
        value: (proj.norm() + eps_e).powi(2),
        worst_channel,
    })
}

/// Smallest `|u†h̄_E|` over unit `u` with `|u†h̄_R| = ‖h̄_R‖·z`.
pub fn psi(z: f64, p: &ScalarParams, hbar_e_norm: f64) -> f64 {
    let rp = p.r_perp();
    if z < rp {
        return 0.0;
    }
    let zp = (1.0 - z * z).max(0.0).sqrt();
    (hbar_e_norm * (p.r * z - rp * zp)).max(0.0)
}

/// Result of [`lemma1_solve`].
#[derive(Debug, Clone, PartialEq)]
pub struct Lemma1Solution {
    pub value: f64,
    /// Minimiser; absent in the zero-value regime `q ≤ 1 − r²`.
    pub u: Option<ComplexVec>,
}

/// Minimises `|u†b|²` subject to `|u†a|² = q` and `‖u‖ = 1` for unit `a`,
/// `b` with `r = |b†a| < 1`.
///
/// For `q ≤ 1 − r²` the value is zero provided the ambient dimension leaves
/// room for a vector orthogonal to `b` with the requested `a`-projection
/// (always when `n ≥ 3`; only at `q = 1 − r²` when `n = 2`).
pub fn lemma1_solve(a: &ComplexVec, b: &ComplexVec, q: f64) -> Result<Lemma1Solution, InnerError> {
    check_unit(a)?;
    check_unit(b)?;
    if a.len() != b.len() {
        return Err(InnerError::Length);
    }
    if !(0.0..=1.0).contains(&q) {
        return Err(InnerError::LevelOutOfRange(q));
    }
    let ab = a.dot(b);
    let r = ab.norm().min(1.0);
    let r2perp = 1.0 - r * r;
    if r2perp < DEGENERACY_TOL {
        return Err(InnerError::Parallel(r));
    }
    if q <= r2perp {
        return Ok(Lemma1Solution { value: 0.0, u: None });
    }
    // q > 1 − r² implies r > 0.
    let rp = r2perp.sqrt();
    let sq = q.sqrt();
    let value = (r * sq - rp * (1.0 - q).sqrt()).powi(2);
    let k = ((1.0 - q) / r2perp).sqrt();
    let u = a.scale(-(ab * (k + sq / r))).axpy(Complex64::new(k, 0.0), b);
    Ok(Lemma1Solution { value, u: Some(u) })
}
