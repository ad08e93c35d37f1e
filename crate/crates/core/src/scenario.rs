//! Problem input and its reduction to six real parameters.
//!
//! A [`WiretapScenario`] holds the estimated legitimate and eavesdropper
//! channels, the radii of the spherical uncertainty balls around them and the
//! transmit power budget. Everything downstream only ever sees the
//! [`ScalarParams`] derived from it, plus the channel directions when the
//! beamformer is rebuilt.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{ComplexVec, VecError};

/// Below this, `1 − r²` or `r` is treated as exactly zero.
pub const DEGENERACY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error("dimension mismatch: hbar_r has {legit} entries, hbar_e has {eaves}")]
    DimensionMismatch { legit: usize, eaves: usize },
    #[error("invalid {name} channel: {source}")]
    Channel {
        name: &'static str,
        #[source]
        source: VecError,
    },
    #[error("{0} estimated channel has zero norm")]
    ZeroChannel(&'static str),
    #[error("{name} must be finite and nonnegative, got {value}")]
    BadRadius { name: &'static str, value: f64 },
    #[error("power must be finite and positive, got {0}")]
    BadPower(f64),
    #[error("scenario must give exactly one of power_linear or power_db")]
    PowerSpec,
    #[error("malformed scenario JSON: {0}")]
    Json(String),
}

/// Estimated channels, uncertainty radii and power budget (linear).
#[derive(Debug, Clone, PartialEq)]
pub struct WiretapScenario {
    hbar_r: ComplexVec,
    hbar_e: ComplexVec,
    eps_r: f64,
    eps_e: f64,
    power: f64,
}

/// Outcome of [`validate_scenario`] for an accepted scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Validation {
    /// `‖h̄_R‖ ≤ ε_R`: the zero channel lies inside the legitimate
    /// uncertainty ball, so no positive worst-case rate exists.
    pub legit_ball_contains_origin: bool,
}

impl WiretapScenario {
    /// Builds and validates a scenario.
    pub fn new(
        hbar_r: ComplexVec,
        hbar_e: ComplexVec,
        eps_r: f64,
        eps_e: f64,
        power: f64,
    ) -> Result<Self, ScenarioError> {
        let s = Self {
            hbar_r,
            hbar_e,
            eps_r,
            eps_e,
            power,
        };
        validate_scenario(&s)?;
        Ok(s)
    }

    pub fn hbar_r(&self) -> &ComplexVec {
        &self.hbar_r
    }

    pub fn hbar_e(&self) -> &ComplexVec {
        &self.hbar_e
    }

    pub fn eps_r(&self) -> f64 {
        self.eps_r
    }

    pub fn eps_e(&self) -> f64 {
        self.eps_e
    }

    pub fn power(&self) -> f64 {
        self.power
    }

    pub fn antennas(&self) -> usize {
        self.hbar_r.len()
    }

    pub fn with_power(&self, power: f64) -> Result<Self, ScenarioError> {
        Self::new(self.hbar_r.clone(), self.hbar_e.clone(), self.eps_r, self.eps_e, power)
    }

    pub fn with_radii(&self, eps_r: f64, eps_e: f64) -> Result<Self, ScenarioError> {
        Self::new(self.hbar_r.clone(), self.hbar_e.clone(), eps_r, eps_e, self.power)
    }

    pub fn with_channels(&self, hbar_r: ComplexVec, hbar_e: ComplexVec) -> Result<Self, ScenarioError> {
        Self::new(hbar_r, hbar_e, self.eps_r, self.eps_e, self.power)
    }

    pub fn validation(&self) -> Validation {
        Validation {
            legit_ball_contains_origin: self.hbar_r.norm() <= self.eps_r,
        }
    }

    /// Parses the scenario JSON file format.
    pub fn from_json(text: &str) -> Result<Self, ScenarioError> {
        let file: ScenarioFile = serde_json::from_str(text).map_err(|e| ScenarioError::Json(e.to_string()))?;
        file.into_scenario()
    }
}

/// Checks every scenario invariant. A legitimate ball that contains the
/// origin is reported through [`Validation`], not rejected.
pub fn validate_scenario(s: &WiretapScenario) -> Result<Validation, ScenarioError> {
    if s.hbar_r.len() != s.hbar_e.len() {
        return Err(ScenarioError::DimensionMismatch {
            legit: s.hbar_r.len(),
            eaves: s.hbar_e.len(),
        });
    }
    // Entries are finite by construction of ComplexVec.
    for (name, v) in [("legitimate", &s.hbar_r), ("eavesdropper", &s.hbar_e)] {
        if v.norm() == 0.0 {
            return Err(ScenarioError::ZeroChannel(name));
        }
    }
    for (name, value) in [("eps_r", s.eps_r), ("eps_e", s.eps_e)] {
        if !(value.is_finite() && value >= 0.0) {
            return Err(ScenarioError::BadRadius { name, value });
        }
    }
    if !(s.power.is_finite() && s.power > 0.0) {
        return Err(ScenarioError::BadPower(s.power));
    }
    Ok(s.validation())
}

/// The reduced real parameters of the worst-case problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalarParams {
    /// `P‖h̄_E‖²`
    pub a: f64,
    /// `P‖h̄_R‖²`
    pub b: f64,
    /// `ε_R/‖h̄_R‖`
    pub c: f64,
    /// `ε_E/‖h̄_E‖`
    pub d: f64,
    /// `|h̄_E†h̄_R| / (‖h̄_R‖‖h̄_E‖)`, clamped to `[0, 1]`
    pub r: f64,
    /// `max(c, √(1−r²))`, the lower end of the feasible z interval
    pub z0: f64,
}

impl ScalarParams {
    /// Assembles parameters directly, computing `z0` from `c` and `r`.
    pub fn new(a: f64, b: f64, c: f64, d: f64, r: f64) -> Self {
        let r = r.clamp(0.0, 1.0);
        Self {
            a,
            b,
            c,
            d,
            r,
            z0: c.max((1.0 - r * r).sqrt()),
        }
    }

    /// `√(1 − r²)`.
    pub fn r_perp(&self) -> f64 {
        (1.0 - self.r * self.r).max(0.0).sqrt()
    }

    pub fn is_parallel(&self) -> bool {
        1.0 - self.r * self.r < DEGENERACY_TOL
    }

    pub fn is_orthogonal(&self) -> bool {
        self.r < DEGENERACY_TOL
    }
}

pub fn derive_params(s: &WiretapScenario) -> ScalarParams {
    let nr = s.hbar_r.norm();
    let ne = s.hbar_e.norm();
    let r = s.hbar_e.dot(&s.hbar_r).norm() / (nr * ne);
    ScalarParams::new(s.power * ne * ne, s.power * nr * nr, s.eps_r / nr, s.eps_e / ne, r)
}

pub fn db_to_linear(p_db: f64) -> f64 {
    10f64.powf(p_db / 10.0)
}

/// On-disk scenario format: channels as `[re, im]` pairs, exactly one of the
/// two power keys.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub hbar_r: Vec<[f64; 2]>,
    pub hbar_e: Vec<[f64; 2]>,
    pub eps_r: f64,
    pub eps_e: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub power_linear: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub power_db: Option<f64>,
}

impl ScenarioFile {
    pub fn power(&self) -> Result<f64, ScenarioError> {
        match (self.power_linear, self.power_db) {
            (Some(p), None) => Ok(p),
            (None, Some(db)) => {
                if !db.is_finite() {
                    return Err(ScenarioError::BadPower(db));
                }
                Ok(db_to_linear(db))
            }
            _ => Err(ScenarioError::PowerSpec),
        }
    }

    pub fn into_scenario(self) -> Result<WiretapScenario, ScenarioError> {
        let power = self.power()?;
        let parse = |name, pairs: &[[f64; 2]]| {
            ComplexVec::from_pairs(pairs).map_err(|source| ScenarioError::Channel { name, source })
        };
        WiretapScenario::new(
            parse("legitimate", &self.hbar_r)?,
            parse("eavesdropper", &self.hbar_e)?,
            self.eps_r,
            self.eps_e,
            power,
        )
    }

    pub fn from_scenario(s: &WiretapScenario) -> Self {
        Self {
            hbar_r: s.hbar_r.to_pairs(),
            hbar_e: s.hbar_e.to_pairs(),
            eps_r: s.eps_r,
            eps_e: s.eps_e,
            power_linear: Some(s.power),
            power_db: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn cv(pairs: &[[f64; 2]]) -> ComplexVec {
        ComplexVec::from_pairs(pairs).unwrap()
    }

    #[test]
    fn db_conversion() {
        assert_eq!(db_to_linear(0.0), 1.0);
        assert!((db_to_linear(10.0) - 10.0).abs() < 1e-12);
        assert!((db_to_linear(5.0) - 3.16228).abs() < 1e-5);
    }

    #[test]
    fn mismatched_lengths_rejected() {
        let err = WiretapScenario::new(ComplexVec::basis(3, 0), ComplexVec::basis(4, 0), 0.0, 0.0, 1.0).unwrap_err();
        assert!(matches!(err, ScenarioError::DimensionMismatch { legit: 3, eaves: 4 }));
        assert!(err.to_string().contains("dimension mismatch"));
    }

    #[test]
    fn bad_power_and_radii_rejected() {
        let e1 = ComplexVec::basis(2, 0);
        let e2 = ComplexVec::basis(2, 1);
        for p in [0.0, -1.0, f64::NAN, f64::INFINITY] {
            assert!(matches!(
                WiretapScenario::new(e1.clone(), e2.clone(), 0.0, 0.0, p),
                Err(ScenarioError::BadPower(_))
            ));
        }
        assert!(matches!(
            WiretapScenario::new(e1.clone(), e2.clone(), -0.1, 0.0, 1.0),
            Err(ScenarioError::BadRadius { name: "eps_r", .. })
        ));
        assert!(matches!(
            WiretapScenario::new(e1, e2, 0.0, f64::NAN, 1.0),
            Err(ScenarioError::BadRadius { name: "eps_e", .. })
        ));
    }

    #[test]
    fn zero_channel_rejected() {
        let err = WiretapScenario::new(ComplexVec::zeros(2), ComplexVec::basis(2, 1), 0.0, 0.0, 1.0).unwrap_err();
        assert_eq!(err, ScenarioError::ZeroChannel("legitimate"));
    }

    #[test]
    fn origin_inside_legit_ball_is_flagged_not_rejected() {
        let s = WiretapScenario::new(cv(&[[0.05, 0.0]]), cv(&[[1.0, 0.0]]), 0.1, 0.0, 1.0).unwrap();
        assert!(validate_scenario(&s).unwrap().legit_ball_contains_origin);
    }

    #[test]
    fn orthonormal_channels() {
        let s = WiretapScenario::new(ComplexVec::basis(3, 0), ComplexVec::basis(3, 1), 0.0, 0.0, 1.0).unwrap();
        let p = derive_params(&s);
        assert_eq!((p.a, p.b, p.c, p.d, p.r, p.z0), (1.0, 1.0, 0.0, 0.0, 0.0, 1.0));
    }

    #[test]
    fn identical_channels() {
        let e1 = ComplexVec::basis(2, 0);
        let s = WiretapScenario::new(e1.clone(), e1, 0.1, 0.2, 2.0).unwrap();
        let p = derive_params(&s);
        assert_eq!((p.a, p.b, p.c, p.d, p.r), (2.0, 2.0, 0.1, 0.2, 1.0));
        assert!((p.z0 - 0.1).abs() < 1e-15);
        assert!(p.is_parallel());
    }

    #[test]
    fn r_is_clamped() {
        let p = ScalarParams::new(1.0, 1.0, 0.0, 0.0, 1.0 + 1e-16);
        assert_eq!(p.r, 1.0);
        assert_eq!(p.r_perp(), 0.0);
    }

    #[test]
    fn json_requires_exactly_one_power() {
        let base = r#""hbar_r": [[1, 0]], "hbar_e": [[0.5, 0.1]], "eps_r": 0.01, "eps_e": 0.02"#;
        let both = format!("{{{base}, \"power_db\": 5, \"power_linear\": 2}}");
        let none = format!("{{{base}}}");
        let db = format!("{{{base}, \"power_db\": 10}}");
        let unknown = format!("{{{base}, \"power_db\": 10, \"noise\": 1}}");
        assert_eq!(WiretapScenario::from_json(&both), Err(ScenarioError::PowerSpec));
        assert_eq!(WiretapScenario::from_json(&none), Err(ScenarioError::PowerSpec));
        assert!(matches!(
            WiretapScenario::from_json(&unknown),
            Err(ScenarioError::Json(_))
        ));
        let s = WiretapScenario::from_json(&db).unwrap();
        assert!((s.power() - 10.0).abs() < 1e-12);
        assert_eq!(s.hbar_e()[0], Complex64::new(0.5, 0.1));
    }

    #[test]
    fn json_roundtrip_through_file_format() {
        let s = WiretapScenario::new(
            cv(&[[1.0, -2.0], [0.3, 0.0]]),
            cv(&[[0.1, 0.2], [-1.0, 0.5]]),
            0.01,
            0.03,
            3.5,
        )
        .unwrap();
        let text = serde_json::to_string(&ScenarioFile::from_scenario(&s)).unwrap();
        assert_eq!(WiretapScenario::from_json(&text).unwrap(), s);
    }
}
