//! Worst-case secrecy rate of a MISO wiretap channel with norm-bounded
//! channel uncertainty.
//!
//! The transmitter knows estimates `h̄_R`, `h̄_E` of the legitimate and
//! eavesdropper channels, each accurate to within a Euclidean ball. The
//! max–min rate reduces to a one-dimensional rational maximisation over the
//! normalised legitimate projection `z ∈ [z0, 1]`, which is solved exactly
//! through the real roots of a degree-six polynomial. The optimum is
//! attained by beamforming, `Q* = P·u*u*†`.
//!
//! ```
//! use wiretap_core::{worst_case_secrecy_rate, ComplexVec, WiretapScenario};
//!
//! let h_r = ComplexVec::from_pairs(&[[1.0, 0.0], [0.0, 1.0]]).unwrap();
//! let h_e = ComplexVec::from_pairs(&[[0.3, 0.0], [0.0, -0.1]]).unwrap();
//! let s = WiretapScenario::new(h_r, h_e, 0.05, 0.05, 10.0).unwrap();
//! let out = worst_case_secrecy_rate(&s).unwrap();
//! assert!(out.positive && out.secrecy_rate_bits > 0.0);
//! ```

pub mod inner;
pub mod linalg;
pub mod par;
pub mod polyroots;
pub mod sampling;
pub mod scenario;
pub mod solver;
pub mod sweep;
pub mod verification;

pub use linalg::{CMatrix, ComplexVec};
pub use par::Execution;
pub use scenario::{derive_params, validate_scenario, ScalarParams, ScenarioError, ScenarioFile, WiretapScenario};
pub use solver::{positivity_check, worst_case_secrecy_rate, Branch, SolverOutput};
pub use verification::{verify_scenario, VerificationReport, VerifyOptions};
