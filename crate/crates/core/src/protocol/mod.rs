//! The repeated-GBSM teleportation protocol.
//!
//! Attempt `t` measures qubits `(0, 1)` for even `t` and `(0, 2)` for odd
//! `t`; the other of qubits 1 and 2 is the spare. An outcome succeeds when,
//! for both results of a sigma_x measurement on the spare, Bob can undo his
//! state with a Pauli for every input. A failed outcome leaves the register
//! in `|B>_{pair} (x) residual` and the next attempt measures the other pair.
//!
//! Structural decisions (which outcomes succeed, which exponents the next
//! basis uses) are taken at [`decision_chi`], a generic angle at which every
//! exponent mismatch is visible; the branch structure is the same for every
//! `chi` in `(0, pi/4)`. Probabilities and fidelities use the actual angle.

mod classify;
mod plan;
mod sample;
mod select;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::PauliCorrection;
use crate::state::{Amplitude, PureState};

pub use classify::{classify, derive_correction, Classification};
pub use plan::{
    plan, run_enumeration, terminate_with_vnm, LeafPart, PlanLeaf, PlanNode, ProtocolPlan,
};
pub use sample::{run_sampled, sample_plan, SampleSummary};
pub use select::{select_basis, SMALL_EXPONENT_SCAN};

/// Angle used for structural decisions: `tan(chi) = exp(-1e-4)`.
pub fn decision_chi() -> f64 {
    (-1e-4f64).exp().atan()
}

pub const DEFAULT_ATTEMPT_CEILING: usize = 12;

/// Pair measured at attempt `t` and the spare qubit left with the sender.
pub fn attempt_pair(t: usize) -> ((usize, usize), usize) {
    if t.is_multiple_of(2) {
        ((0, 1), 2)
    } else {
        ((0, 2), 1)
    }
}

pub const BOB: usize = 3;

/// What the sender does when the last allowed attempt fails.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    /// Report the failure; Bob's fidelity assumes an implicit sigma_x measurement.
    Continue,
    /// Measure the spare qubit in the sigma_x eigenbasis.
    PlainVnm,
    /// Measure the spare qubit in the best generalized basis `C(r, j)`.
    MatchedVnm,
}

impl Termination {
    pub const ALL: [Termination; 3] = [Self::Continue, Self::PlainVnm, Self::MatchedVnm];

    pub fn name(self) -> &'static str {
        match self {
            Self::Continue => "continue",
            Self::PlainVnm => "plain-vnm",
            Self::MatchedVnm => "matched-vnm",
        }
    }
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Termination {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "continue" => Ok(Self::Continue),
            "plain-vnm" | "plain" => Ok(Self::PlainVnm),
            "matched-vnm" | "matched" => Ok(Self::MatchedVnm),
            other => Err(Error::InvalidSpec(format!("unknown strategy `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProtocolConfig {
    pub max_repetitions: usize,
    pub termination: Termination,
    /// Used by sampling mode only.
    pub rng_seed: u64,
    pub attempt_ceiling: usize,
}

impl Default for ProtocolConfig {
    fn default() -> Self {
        Self {
            max_repetitions: 0,
            termination: Termination::Continue,
            rng_seed: 0,
            attempt_ceiling: DEFAULT_ATTEMPT_CEILING,
        }
    }
}

impl ProtocolConfig {
    pub fn new(max_repetitions: usize, termination: Termination) -> Self {
        Self {
            max_repetitions,
            termination,
            ..Self::default()
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.rng_seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_repetitions > self.attempt_ceiling {
            return Err(Error::OutOfRange {
                what: "max_repetitions",
                value: self.max_repetitions as f64,
                range: "<= attempt ceiling",
            });
        }
        Ok(())
    }

    /// Largest GBSM exponent the basis search may use.
    pub fn exponent_limit(&self) -> u64 {
        3u64.pow(self.attempt_ceiling as u32 + 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BranchStatus {
    Success,
    Failure,
    Terminated,
}

impl BranchStatus {
    pub fn name(self) -> &'static str {
        match self {
            Self::Success => "success",
            Self::Failure => "failure",
            Self::Terminated => "terminated",
        }
    }
}

/// One leaf of the measurement tree for a concrete input.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BranchRecord {
    /// GBSM outcomes, then the spare-qubit outcome when one was measured.
    pub path: Vec<usize>,
    pub attempt_count: usize,
    pub probability: f64,
    pub status: BranchStatus,
    pub correction: Option<PauliCorrection>,
    /// Zero-weight leaves report 1 if structurally correctable, else 0.
    pub bob_fidelity: f64,
    /// True when the leaf reaches unit fidelity for every input.
    pub unit_fidelity: bool,
    /// Bob's qubit before correction; the `(spare, bob)` pair for `Continue` failures.
    pub collapsed: Option<PureState>,
}

/// One GBSM outcome (internal node or success) for a concrete input.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OutcomeRecord {
    pub path: Vec<usize>,
    pub attempt: usize,
    pub pair: (usize, usize),
    pub exponents: (u64, u64),
    pub probability: f64,
    pub success: bool,
    /// Residual state of `(spare, bob)`.
    pub residual: Option<PureState>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProtocolTrace {
    pub branches: Vec<BranchRecord>,
    pub outcomes: Vec<OutcomeRecord>,
    /// Cumulative GBSM success probability after attempts `0..=n`.
    pub per_attempt_success: Vec<f64>,
    /// Probability of unit-fidelity leaves created by the final VNM.
    pub termination_success: f64,
    pub chi: f64,
    pub a: Amplitude,
    pub b: Amplitude,
}

impl ProtocolTrace {
    pub fn gbsm_success(&self) -> f64 {
        self.per_attempt_success.last().copied().unwrap_or(0.0)
    }

    pub fn total_success(&self) -> f64 {
        self.gbsm_success() + self.termination_success
    }

    pub fn total_probability(&self) -> f64 {
        self.branches.iter().map(|b| b.probability).sum()
    }

    /// Expected fidelity of Bob's corrected qubit over all leaves.
    pub fn mean_fidelity(&self) -> f64 {
        self.branches
            .iter()
            .map(|b| b.probability * b.bob_fidelity)
            .sum()
    }

    pub fn outcomes_at(&self, attempt: usize) -> impl Iterator<Item = &OutcomeRecord> {
        self.outcomes.iter().filter(move |o| o.attempt == attempt)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategy_names_round_trip() {
        for t in Termination::ALL {
            assert_eq!(t.name().parse::<Termination>().unwrap(), t);
        }
        assert!("nope".parse::<Termination>().is_err());
    }

    #[test]
    fn pairs_alternate() {
        assert_eq!(attempt_pair(0), ((0, 1), 2));
        assert_eq!(attempt_pair(1), ((0, 2), 1));
        assert_eq!(attempt_pair(4), ((0, 1), 2));
    }

    #[test]
    fn config_ceiling() {
        assert!(ProtocolConfig::new(12, Termination::Continue)
            .validate()
            .is_ok());
        assert!(ProtocolConfig::new(13, Termination::Continue)
            .validate()
            .is_err());
    }

    #[test]
    fn decision_angle_is_generic() {
        let chi = decision_chi();
        assert!(chi < std::f64::consts::FRAC_PI_4);
        assert!((chi.tan().ln() + 1e-4).abs() < 1e-12);
    }
}
