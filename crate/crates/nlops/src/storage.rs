//! Storage and compression rates for ensembles of phase-gate operations.
//!
//! Storing an operation means storing the entangled program states that the
//! deterministic cascade would consume, column by column: step k of any
//! cascade draws from the same slot, slot k is needed with probability
//! 2^{1−k}, and unused slots hold the idle state Ψ₀. Each slot is an
//! ensemble of non-orthogonal pure states and compresses independently at
//! its ensemble entropy.
//!
//! Local mode compresses the pure program states themselves; the slot
//! entropy is the entropy of the mixture of their projectors (two
//! dimensional, since every program state lives in span{Φ⁺Φ⁺, Ψ⁺Ψ⁺}).
//! Non-local mode stores each party's half under local operations only; the
//! published rates correspond to slot mixtures of diagonal operators with
//! *unsquared* weights diag(cos α, sin α) per program state, and this module
//! reproduces that convention while also reporting the squared-weight
//! (Schmidt-coefficient) variant alongside.
//!
//! The infinite-family rates use the two-state slot entropies
//! H((1+cos α_k)/2) (local) and H((1+cos²α_k)/2) (non-local); the published
//! totals are the bound 2·Σ S_k, and the exact weighted series
//! Σ S_k·(2−2^{1−k}) is computed next to it.

use crate::linalg::{binary_entropy, LinalgError};
use std::f64::consts::PI;
use thiserror::Error;

/// Errors from the storage-rate calculators.
#[derive(Debug, Error)]
pub enum StorageError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),

    #[error("step index must be at least 1")]
    BadStep,

    #[error("ensemble size must be at least 1")]
    BadEnsembleSize,

    #[error("quantum-communication rates are defined for α_max ∈ {{π, π/8}}")]
    UnsupportedQcomm,

    #[error("series failed to certify its tail within {0} terms")]
    NoTailCertificate(usize),
}

/// Whether the stored operations act at one site or across two.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Locality {
    Local,
    Nonlocal,
}

/// Supported angle ranges for the infinite uniform family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlphaMax {
    Pi,
    PiOver8,
    PiOver32,
}

impl AlphaMax {
    /// First binary digit that can be non-zero for this range.
    pub fn first_step(self) -> u32 {
        match self {
            AlphaMax::Pi => 1,
            AlphaMax::PiOver8 => 4,
            AlphaMax::PiOver32 => 6,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            AlphaMax::Pi => "pi",
            AlphaMax::PiOver8 => "pi8",
            AlphaMax::PiOver32 => "pi32",
        }
    }
}

/// One row of a rate breakdown.
#[derive(Clone, Debug)]
pub struct StepRow {
    pub k: u32,
    /// Angle π/2^k of the slot, in radians.
    pub angle: f64,
    /// Slot ensemble entropy S_k in qubits.
    pub entropy: f64,
    /// Weight applied to this slot in the reported rate.
    pub weight: f64,
    /// weight × entropy.
    pub contribution: f64,
}

/// Result of a rate calculation.
#[derive(Clone, Debug)]
pub struct RateReport {
    /// Qubits per operation in the published convention.
    pub qubits_per_operation: f64,
    /// The exact weighted series Σ S_k (2 − 2^{1−k}) for infinite
    /// ensembles, which the published bound dominates.
    pub exact_series: Option<f64>,
    /// For finite non-local ensembles: the squared-weight (Schmidt
    /// coefficient) variant of the rate.
    pub schmidt_squared_rate: Option<f64>,
    /// Certified bound on the truncated tail of infinite series.
    pub tail_bound: f64,
    pub steps: Vec<StepRow>,
}

/// Slot entropy of the two-state mixture {Ψ₀, Ψ_{π/2^k}}:
/// H((1+cos α)/2) for local storage, H((1+cos²α)/2) for non-local.
pub fn step_entropy(k: u32, locality: Locality) -> Result<f64, StorageError> {
    if k < 1 {
        return Err(StorageError::BadStep);
    }
    let angle = PI / 2f64.powi(k as i32);
    // The complementary population keeps precision for tiny angles:
    // 1 − (1+cos α)/2 = sin²(α/2), and 1 − (1+cos²α)/2 = sin²α/2.
    let tail = match locality {
        Locality::Local => (angle / 2.0).sin().powi(2),
        Locality::Nonlocal => angle.sin().powi(2) / 2.0,
    };
    Ok(binary_entropy(tail)?)
}

/// Average storage per operation for the uniform infinite family of phase
/// gates with 0 ≤ α ≤ α_max: the published value 2·Σ_{k≥k₀} S_k, truncated
/// with a certified geometric tail bound.
pub fn infinite_rate(alpha_max: AlphaMax, locality: Locality) -> Result<RateReport, StorageError> {
    let k0 = alpha_max.first_step();
    let mut steps = Vec::new();
    let mut bound_total = 0.0;
    let mut exact_total = 0.0;
    let mut prev = f64::INFINITY;
    let mut tail_bound = f64::INFINITY;
    let max_terms = 200usize;
    for k in k0..k0 + max_terms as u32 {
        let s = step_entropy(k, locality)?;
        bound_total += 2.0 * s;
        exact_total += s * (2.0 - 2f64.powi(1 - k as i32));
        steps.push(StepRow {
            k,
            angle: PI / 2f64.powi(k as i32),
            entropy: s,
            weight: 2.0,
            contribution: 2.0 * s,
        });
        let ratio = s / prev;
        if s < 1e-9 && ratio < 0.5 {
            // Geometric tail: Σ_{j>k} S_j ≤ S_k·r/(1−r) with r < 1/2.
            tail_bound = 2.0 * s * ratio / (1.0 - ratio);
            break;
        }
        prev = s;
    }
    if !tail_bound.is_finite() {
        return Err(StorageError::NoTailCertificate(max_terms));
    }
    Ok(RateReport {
        qubits_per_operation: bound_total,
        exact_series: Some(exact_total),
        schmidt_squared_rate: None,
        tail_bound,
        steps,
    })
}

/// Slot composition for the finite family U(α_N), 0 ≤ N ≤ M: slot k holds
/// (number of idle states, angles π/2^j for j = 1..jmax).
fn finite_column(m: usize, k: u32) -> (usize, u32) {
    // Rows are the M+1 operations N = 0..M; rows N < k hold the idle state
    // at position k (the N = 0 gate is the identity up to phase and stores
    // nothing but idles).
    (k as usize, (m as u32).saturating_sub(k) + 1)
}

/// Average storage per operation for the finite family U(π/2^N), N ≤ M,
/// all equally likely: Σ_{k=1}^{M} S(ρ_k)·2^{1−k}.
///
/// Local slots mix the program-state projectors. Non-local slots mix
/// diagonal operators per program state; the reported rate uses the
/// unsquared weights diag(cos α, sin α) that reproduce the published
/// figures, and the squared-weight variant diag(cos²α, sin²α) is returned
/// alongside.
pub fn finite_rate(m: usize, locality: Locality) -> Result<RateReport, StorageError> {
    if m < 1 {
        return Err(StorageError::BadEnsembleSize);
    }
    let total_states = (m + 1) as f64;
    let mut steps = Vec::new();
    let mut total = 0.0;
    let mut squared_total = 0.0;
    for k in 1..=(m as u32) {
        let (idle, jmax) = finite_column(m, k);
        let weight = 2f64.powi(1 - k as i32);

        // Second moments of the 2-dim amplitude vectors (cos α, sin α); the
        // idle states contribute (1, 0).
        let mut m00 = idle as f64;
        let mut m01 = 0.0;
        let mut m11 = 0.0;
        let mut unsquared = idle as f64;
        for j in 1..=jmax {
            let angle = PI / 2f64.powi(j as i32);
            let (s, c) = angle.sin_cos();
            m00 += c * c;
            m01 += c * s;
            m11 += s * s;
            unsquared += 1.0 - s;
        }
        m00 /= total_states;
        m01 /= total_states;
        m11 /= total_states;
        unsquared /= total_states;

        let entropy = match locality {
            Locality::Local => {
                let det = m00 * m11 - m01 * m01;
                let tr = m00 + m11;
                let top = 0.5 * (tr + (tr * tr - 4.0 * det).max(0.0).sqrt());
                two_level_entropy(top, tr - top)
            }
            Locality::Nonlocal => binary_entropy(1.0 - unsquared)?,
        };
        let squared_entropy = binary_entropy(1.0 - m00)?;
        total += weight * entropy;
        squared_total += weight * squared_entropy;
        steps.push(StepRow {
            k,
            angle: PI / 2f64.powi(k as i32),
            entropy,
            weight,
            contribution: weight * entropy,
        });
    }
    Ok(RateReport {
        qubits_per_operation: total,
        exact_series: None,
        schmidt_squared_rate: match locality {
            Locality::Nonlocal => Some(squared_total),
            Locality::Local => None,
        },
        tail_bound: 0.0,
        steps,
    })
}

fn two_level_entropy(l1: f64, l2: f64) -> f64 {
    let mut s = 0.0;
    for l in [l1, l2] {
        if l > 1e-300 {
            s -= l * l.log2();
        }
    }
    s.max(0.0)
}

/// Quantum communication per operation when one party stores a non-local
/// family and ships the partner halves: the non-local storage rate minus
/// the k = 1 slot, whose state Ψ_{π/2} is separable and travels for free.
/// The restriction to α ≤ π/8 starts beyond k = 1, so its rate is
/// unchanged.
pub fn qcomm_rate(alpha_max: AlphaMax) -> Result<RateReport, StorageError> {
    let base = infinite_rate(alpha_max, Locality::Nonlocal)?;
    match alpha_max {
        AlphaMax::Pi => {
            let first = step_entropy(1, Locality::Nonlocal)?;
            let mut steps = base.steps.clone();
            steps.remove(0);
            Ok(RateReport {
                qubits_per_operation: base.qubits_per_operation - 2.0 * first,
                exact_series: None,
                schmidt_squared_rate: None,
                tail_bound: base.tail_bound,
                steps,
            })
        }
        AlphaMax::PiOver8 => Ok(base),
        AlphaMax::PiOver32 => Err(StorageError::UnsupportedQcomm),
    }
}
