//! Probabilistic gate implementation under incomplete Bell measurements.
//!
//! Linear optical elements can perfectly distinguish Φ⁺, Ψ⁺ and the merged
//! pair {Φ⁻, Ψ⁻}, but not all four Bell states. Running the teleportation
//! protocol with this coarse-grained measurement makes gate application
//! probabilistic: a general two-qubit gate succeeds only when both parties
//! find Φ⁺ (probability 1/16), while the phase-gate family also tolerates
//! Ψ⁺ outcomes with a σx touch-up, raising the success probability to 1/4.
//! A merged outcome reveals nothing usable and the input is discarded.
//!
//! The incomplete measurement is modelled abstractly as the three-outcome
//! projective coarse-graining {P_Φ⁺, P_Ψ⁺, P_Φ⁻ + P_Ψ⁻}; no optical modes
//! are simulated.

use crate::duality::{choi_of_channel, DualityError, TeleportProtocol};
use crate::linalg::{operator_distance, ComplexMatrix, LinalgError};
use crate::qobjects::{
    bell_state, named_gate, phase_gate, plain_bell_amplitudes, psi_alpha, BellIndex, Channel,
    MultiState, StateError,
};
use rand::Rng;
use thiserror::Error;

/// Errors from the photonic layer.
#[derive(Debug, Error)]
pub enum PhotonicError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),

    #[error(transparent)]
    State(#[from] StateError),

    #[error(transparent)]
    Duality(#[from] DualityError),

    #[error("expected a two-qubit pair state, got dimension {0}")]
    NotAPair(usize),

    #[error("unknown resource gate `{0}`")]
    UnknownResource(String),
}

/// Outcome class of the incomplete Bell measurement.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BellClass {
    PhiPlus,
    PsiPlus,
    /// Φ⁻ and Ψ⁻ cannot be told apart; the run is discarded.
    Merged,
}

impl BellClass {
    /// Coarse-graining of the fine-grained Bell index.
    pub fn of(idx: BellIndex) -> Self {
        match (idx.i1, idx.i2) {
            (1, 1) => BellClass::PhiPlus,
            (1, 2) => BellClass::PsiPlus,
            _ => BellClass::Merged,
        }
    }
}

/// Result of one incomplete Bell measurement on a qubit pair.
#[derive(Clone, Debug)]
pub struct IncompleteBellOutcome {
    pub class: BellClass,
    pub probability: f64,
    /// Post-measurement state; present for the two rank-one outcomes.
    pub post_state: Option<MultiState>,
}

/// Exact Born probabilities of the three coarse outcomes on a pair state,
/// in the order (Φ⁺, Ψ⁺, merged).
pub fn class_probabilities(pair: &MultiState) -> Result<[f64; 3], PhotonicError> {
    if pair.dim() != 4 {
        return Err(PhotonicError::NotAPair(pair.dim()));
    }
    let rho = pair.to_density();
    let bells = plain_bell_amplitudes();
    let expectation = |v: &[num_complex::Complex64]| -> f64 {
        let mut p = 0.0;
        for (r, zr) in v.iter().enumerate() {
            for (c, zc) in v.iter().enumerate() {
                p += (zr.conj() * rho.get(r, c) * zc).re;
            }
        }
        p.max(0.0)
    };
    let p_phi = expectation(&bells[0]);
    let p_psi = expectation(&bells[1]);
    let merged = (1.0 - p_phi - p_psi).max(0.0);
    Ok([p_phi, p_psi, merged])
}

/// Sample the incomplete Bell measurement on a two-qubit state.
pub fn incomplete_bell_measure(
    pair: &MultiState,
    rng: &mut impl Rng,
) -> Result<IncompleteBellOutcome, PhotonicError> {
    let probs = class_probabilities(pair)?;
    let k = crate::rng::sample_index(&probs, rng);
    let (class, post_state) = match k {
        0 => (BellClass::PhiPlus, Some(bell_state(BellIndex { i1: 1, i2: 1 }))),
        1 => (BellClass::PsiPlus, Some(bell_state(BellIndex { i1: 1, i2: 2 }))),
        _ => (BellClass::Merged, None),
    };
    Ok(IncompleteBellOutcome { class, probability: probs[k], post_state })
}

/// Named resource states for the probabilistic protocol.
#[derive(Clone, Debug)]
pub enum ResourceGate {
    Cnot,
    Swap,
    Phase(f64),
}

impl ResourceGate {
    pub fn matrix(&self) -> Result<ComplexMatrix, PhotonicError> {
        Ok(match self {
            ResourceGate::Cnot => named_gate("cnot")?,
            ResourceGate::Swap => named_gate("swap")?,
            ResourceGate::Phase(alpha) => phase_gate(*alpha),
        })
    }
}

/// The entangled resource state of a named gate, from its closed form:
/// the controlled-not dual (|00⟩_A|Φ⁺⟩_B + |11⟩_A|Ψ⁺⟩_B)/√2, the swap dual
/// |Φ⁺⟩_{A1B2}|Φ⁺⟩_{A2B1}, or the phase-family dual. Each equals the dual
/// state computed through the channel map.
pub fn resource_state(gate: &ResourceGate) -> Result<MultiState, PhotonicError> {
    use crate::linalg::{SubsystemLayout, C_ZERO};
    use num_complex::Complex64;
    match gate {
        ResourceGate::Cnot => {
            let mut amps = vec![C_ZERO; 16];
            let half = Complex64::new(0.5, 0.0);
            amps[0b0000] = half;
            amps[0b0011] = half;
            amps[0b1101] = half;
            amps[0b1110] = half;
            Ok(MultiState::pure(amps, SubsystemLayout::pair_layout(2, 2))?)
        }
        ResourceGate::Swap => {
            let mut amps = vec![C_ZERO; 16];
            let half = Complex64::new(0.5, 0.0);
            for x in 0..2usize {
                for y in 0..2usize {
                    // ψ[a1 a2 b1 b2] with a1 = b2 = x and a2 = b1 = y.
                    amps[(x << 3) | (y << 2) | (y << 1) | x] = half;
                }
            }
            Ok(MultiState::pure(amps, SubsystemLayout::pair_layout(2, 2))?)
        }
        ResourceGate::Phase(alpha) => Ok(psi_alpha(*alpha, 2)?),
    }
}

/// The phase-family angle of a gate, if it is one: gates equal to
/// e^{iφ}·U(α) up to 1e-10 admit the enlarged accepting set.
pub fn phase_family_angle(gate: &ComplexMatrix) -> Option<f64> {
    if gate.rows() != 4 {
        return None;
    }
    let zc = gate.get(0, 0);
    let zs = gate.get(3, 0);
    let alpha = zs.norm().atan2(zc.norm());
    for candidate in [alpha, -alpha] {
        let reference = phase_gate(candidate);
        if let Ok(d) = operator_distance(gate, &reference, true) {
            if d <= 1e-10 {
                return Some(candidate);
            }
        }
    }
    None
}

/// Result of one probabilistic run.
#[derive(Clone, Debug)]
pub struct PhotonicOutcome {
    pub success: bool,
    /// Coarse outcome class at each party.
    pub classes: (BellClass, BellClass),
    /// Born probability of the sampled fine-grained outcome.
    pub probability: f64,
    /// Corrected output on success; the input is discarded otherwise.
    pub state: Option<MultiState>,
}

/// A prepared probabilistic run over a fixed gate and input.
///
/// Construction computes the exact outcome distribution once; repeated
/// sampling is constant time per trial.
pub struct PhotonicProtocol {
    teleport: TeleportProtocol,
    phase_family: bool,
    exact_success: f64,
}

impl PhotonicProtocol {
    pub fn new(gate: &ComplexMatrix, rho: &MultiState) -> Result<Self, PhotonicError> {
        let channel = Channel::unitary(gate, 2)?;
        let e = choi_of_channel(&channel, 2)?;
        let teleport = TeleportProtocol::new(&e, rho)?;
        let phase_family = phase_family_angle(gate).is_some();
        let mut exact_success = 0.0;
        for (flat, &p) in teleport.outcome_probabilities().iter().enumerate() {
            let a = BellIndex::from_flat(flat / 4);
            let b = BellIndex::from_flat(flat % 4);
            if Self::accepted(phase_family, BellClass::of(a), BellClass::of(b)) {
                exact_success += p;
            }
        }
        Ok(Self { teleport, phase_family, exact_success })
    }

    fn accepted(phase_family: bool, a: BellClass, b: BellClass) -> bool {
        let ok = |c: BellClass| {
            matches!(c, BellClass::PhiPlus) || (phase_family && matches!(c, BellClass::PsiPlus))
        };
        ok(a) && ok(b)
    }

    /// Whether the gate enjoys the enlarged phase-family accepting set.
    pub fn is_phase_family(&self) -> bool {
        self.phase_family
    }

    /// Exact success probability: 1/16 for a generic gate, 1/4 for the
    /// phase family.
    pub fn exact_success_probability(&self) -> f64 {
        self.exact_success
    }

    /// Sample only the success flag, without building the output state.
    pub fn sample_success(&self, rng: &mut impl Rng) -> bool {
        let indices = self.teleport.sample_outcome(rng);
        Self::accepted(
            self.phase_family,
            BellClass::of(indices[0]),
            BellClass::of(indices[1]),
        )
    }

    /// Run one full trial.
    pub fn sample(&self, rng: &mut impl Rng) -> Result<PhotonicOutcome, PhotonicError> {
        let indices = self.teleport.sample_outcome(rng);
        let classes = (BellClass::of(indices[0]), BellClass::of(indices[1]));
        let success = Self::accepted(self.phase_family, classes.0, classes.1);
        if !success {
            let flat = indices[0].flat() * 4 + indices[1].flat();
            let probability = self.teleport.outcome_probabilities()[flat];
            return Ok(PhotonicOutcome { success, classes, probability, state: None });
        }
        // The accepted fine outcomes are rank one, so the teleport branch
        // (whose Pauli correction is exactly the required σx touch-up for a
        // Ψ⁺ outcome) gives the conditioned state directly.
        let branch = self.teleport.outcome_result(&indices)?;
        Ok(PhotonicOutcome {
            success,
            classes,
            probability: branch.probability,
            state: Some(branch.output_state),
        })
    }
}

/// One-shot probabilistic application of a two-qubit gate.
pub fn photonic_apply(
    gate: &ComplexMatrix,
    rho: &MultiState,
    rng: &mut impl Rng,
) -> Result<PhotonicOutcome, PhotonicError> {
    PhotonicProtocol::new(gate, rho)?.sample(rng)
}
