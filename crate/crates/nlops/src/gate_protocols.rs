//! Teleportation protocols for two-qubit and N-qubit phase gates, and the
//! canonical decomposition that reduces arbitrary two-qubit gates to three
//! phase-gate synthesis problems.
//!
//! The building block is the single probabilistic shot: consuming the dual
//! state of U(α) = exp(−iα σx⊗σx), a Bell measurement at each party either
//! applies U(α) or U(−α), each with probability 1/2. The doubling cascade
//! turns this into a deterministic implementation of any binary angle
//! α_N = π/2^N: after a failure at angle α the next round runs at 2α, and the
//! N-th round is the local gate U(π/2), so every branch history lands on
//! U(α_N) exactly (up to a global sign). Binary expansion of an arbitrary
//! angle chains these cascades, and the canonical decomposition
//! U = (V⊗W)·exp(−iΣ μ_k σ_k⊗σ_k)·(Ṽ⊗W̃) covers every two-qubit gate
//! with three such chains.

use crate::duality::{DualityError, TeleportProtocol};
use crate::linalg::{
    binary_entropy, herm_eig, kron, operator_distance, ComplexMatrix, LinalgError,
    SubsystemLayout, C_I, C_ONE, C_ZERO,
};
use crate::qobjects::{
    phase_gate, phase_gate_n, psi_alpha, sigma_x, sigma_y, sigma_z, MultiState, StateError,
};
use num_complex::Complex64;
use rand::Rng;
use std::f64::consts::{FRAC_PI_2, PI};
use thiserror::Error;

/// Default number of binary digits used when synthesising arbitrary angles.
/// π·2⁻³⁰ ≈ 3e-9 sits above accumulated float error and below every test
/// tolerance in this crate.
pub const DEFAULT_SYNTHESIS_BITS: usize = 30;

/// Errors from the gate-protocol layer.
#[derive(Debug, Error)]
pub enum ProtocolError {
    #[error(transparent)]
    Duality(#[from] DualityError),

    #[error(transparent)]
    State(#[from] StateError),

    #[error(transparent)]
    Linalg(#[from] LinalgError),

    #[error("cascade depth must be at least 1")]
    BadDepth,

    #[error("angle {0} outside [0, π]")]
    AngleOutOfRange(f64),

    #[error("matrix is not unitary within tolerance")]
    NotUnitary,

    #[error("canonical decomposition failed: {0}")]
    DecompositionFailed(String),
}

/// Record of one cascade (or cascade chain) run.
#[derive(Clone, Debug)]
pub struct CascadeTrace {
    /// (angle used, branch ±1) per executed round, in order.
    pub rounds: Vec<(f64, i8)>,
    /// Entanglement consumed, in ebits: Σ H(cos² angle) over teleported
    /// rounds. Locally implemented rounds are free.
    pub ebits_consumed: f64,
    /// Classical communication used. The two-party cascade counts one bit
    /// per teleported round (the value of i₁ travels one way and j₁ the
    /// other; the published average 2−(1/2)^{N−2} uses this per-direction
    /// count). The N-party cascade counts one bit per party per round.
    pub classical_bits: f64,
    /// The net unitary actually applied across all rounds.
    pub net_operation: ComplexMatrix,
}

impl CascadeTrace {
    fn empty(dim: usize) -> Self {
        Self {
            rounds: Vec::new(),
            ebits_consumed: 0.0,
            classical_bits: 0.0,
            net_operation: ComplexMatrix::identity(dim),
        }
    }

    fn absorb(&mut self, other: CascadeTrace) {
        self.rounds.extend(other.rounds);
        self.ebits_consumed += other.ebits_consumed;
        self.classical_bits += other.classical_bits;
        self.net_operation = other.net_operation.mul(&self.net_operation);
    }

    fn apply_local(&mut self, op: &ComplexMatrix) {
        self.net_operation = op.mul(&self.net_operation);
    }
}

/// One probabilistic shot of U(α) on a two-qubit state.
///
/// Returns branch +1 with the state U(α)ρU(α)†, or branch −1 with
/// U(−α)ρU(−α)†, each with probability 1/2; consumes H(cos²α) ebits.
pub fn single_shot(
    alpha: f64,
    rho: &MultiState,
    rng: &mut impl Rng,
) -> Result<(i8, MultiState), ProtocolError> {
    let e = psi_alpha(alpha, 2)?;
    let protocol = TeleportProtocol::new(&e, rho)?;
    let outcome = protocol.sample(rng)?;
    let branch = if outcome.outcome_indices[0].i1 == outcome.outcome_indices[1].i1 {
        1
    } else {
        -1
    };
    Ok((branch, outcome.output_state))
}

/// N-party analogue of [`single_shot`] for U_N(α) = exp(−iα σx^⊗N).
///
/// The branch is +1 exactly when an even number of parties found a Bell
/// outcome with first index 2 (σy or σz correction), because conjugating
/// σx^⊗N by the corrections flips the sign of α once per such party.
pub fn multiparty_single_shot(
    alpha: f64,
    parties: usize,
    rho: &MultiState,
    rng: &mut impl Rng,
) -> Result<(i8, MultiState), ProtocolError> {
    let e = psi_alpha(alpha, parties)?;
    let protocol = TeleportProtocol::new(&e, rho)?;
    let outcome = protocol.sample(rng)?;
    let flips = outcome.outcome_indices.iter().filter(|idx| idx.i1 == 2).count();
    let branch = if flips % 2 == 0 { 1 } else { -1 };
    Ok((branch, outcome.output_state))
}

fn cascade_core<F>(
    parties: usize,
    depth: u32,
    bits_per_round: f64,
    rho: &MultiState,
    mut round: F,
) -> Result<(CascadeTrace, MultiState), ProtocolError>
where
    F: FnMut(f64, &MultiState) -> Result<(i8, MultiState), ProtocolError>,
{
    if depth < 1 {
        return Err(ProtocolError::BadDepth);
    }
    let dim = 1usize << parties;
    let mut trace = CascadeTrace::empty(dim);
    let mut state = rho.clone();
    for k in 1..=depth {
        let angle = PI / 2f64.powi((depth - k + 1) as i32);
        if k == depth {
            // Final round is U(π/2), a local gate: deterministic and free.
            let u = phase_gate_n(angle, parties);
            let out = u.mul(&state.to_density()).mul(&u.dagger());
            state = MultiState::density_unchecked(out, state.layout().clone());
            trace.rounds.push((angle, 1));
            trace.apply_local(&u);
            break;
        }
        let (branch, next) = round(angle, &state)?;
        state = next;
        trace.rounds.push((angle, branch));
        trace.ebits_consumed += binary_entropy(angle.cos().powi(2))?;
        trace.classical_bits += bits_per_round;
        let applied = phase_gate_n(branch as f64 * angle, parties);
        trace.apply_local(&applied);
        if branch == 1 {
            break;
        }
    }
    Ok((trace, state))
}

/// Deterministic implementation of U(π/2^depth) on a two-qubit state by the
/// doubling cascade: round k runs at angle 2^{k−1}·π/2^depth, and the final
/// round is local. Every branch history yields U(π/2^depth) up to a global
/// phase.
pub fn cascade(
    depth: u32,
    rho: &MultiState,
    rng: &mut impl Rng,
) -> Result<(CascadeTrace, MultiState), ProtocolError> {
    cascade_core(2, depth, 1.0, rho, |angle, state| single_shot(angle, state, rng))
}

/// Cascade with a forced branch sequence instead of sampled Bell outcomes,
/// for exhaustive enumeration of branch histories. The state evolves by
/// direct conjugation with U(±angle).
pub fn cascade_forced(
    depth: u32,
    rho: &MultiState,
    branches: &[i8],
) -> Result<(CascadeTrace, MultiState), ProtocolError> {
    let mut iter = branches.iter();
    cascade_core(2, depth, 1.0, rho, |angle, state| {
        let branch = *iter.next().unwrap_or(&-1);
        let u = phase_gate(branch as f64 * angle);
        let out = u.mul(&state.to_density()).mul(&u.dagger());
        Ok((branch, MultiState::density_unchecked(out, state.layout().clone())))
    })
}

/// N-party cascade for U_N(π/2^depth) = exp(−i(π/2^depth)·σx^⊗N).
pub fn multiparty_cascade(
    parties: usize,
    depth: u32,
    rho: &MultiState,
    rng: &mut impl Rng,
) -> Result<(CascadeTrace, MultiState), ProtocolError> {
    cascade_core(parties, depth, parties as f64, rho, |angle, state| {
        multiparty_single_shot(angle, parties, state, rng)
    })
}

/// Expected entanglement cost of the depth-N cascade:
/// Σ_{k=1}^{N} (1/2)^{k−1} · H(cos²(π/2^{N−k+1})) ebits.
pub fn avg_entanglement(depth: u32) -> Result<f64, ProtocolError> {
    if depth < 1 {
        return Err(ProtocolError::BadDepth);
    }
    let mut total = 0.0;
    for k in 1..=depth {
        let angle = PI / 2f64.powi((depth - k + 1) as i32);
        // H(cos²α) = H(sin²α); the sine form stays accurate for tiny α.
        total += 0.5f64.powi(k as i32 - 1) * binary_entropy(angle.sin().powi(2))?;
    }
    Ok(total)
}

/// Expected classical communication of the depth-N cascade, in bits per
/// direction: 2 − (1/2)^{N−2}.
pub fn avg_classical_bits(depth: u32) -> f64 {
    2.0 - 0.5f64.powi(depth as i32 - 2)
}

/// The scale factor f_N = (1/π) Σ_{k=1}^{N} 2^k · H(cos²(π/2^k)), so that
/// the cascade's expected cost is exactly (π/2^N)·f_N ebits. Monotone in N
/// and convergent; sixty terms pin the limit to well below 1e-6.
pub fn f_factor(terms: u32) -> f64 {
    let mut total = 0.0;
    for k in 1..=terms {
        let angle = PI / 2f64.powi(k as i32);
        let h = binary_entropy(angle.sin().powi(2)).expect("sin² is in range");
        total += 2f64.powi(k as i32) * h;
    }
    total / PI
}

/// The converged limit of [`f_factor`].
pub fn f_infinity() -> f64 {
    f_factor(60)
}

/// Binary digits n_k with α ≈ π Σ n_k 2^{−k}, truncated at `bits` digits.
/// The truncation error is at most π·2^{−bits}.
pub fn binary_decompose(alpha: f64, bits: usize) -> Result<Vec<bool>, ProtocolError> {
    if !(-1e-12..=PI + 1e-12).contains(&alpha) {
        return Err(ProtocolError::AngleOutOfRange(alpha));
    }
    let mut rem = (alpha / PI).clamp(0.0, 1.0);
    let mut out = Vec::with_capacity(bits);
    for k in 1..=bits {
        let w = 0.5f64.powi(k as i32);
        // Small slack absorbs float error for exactly dyadic angles.
        if rem + 1e-13 >= w {
            out.push(true);
            rem -= w;
        } else {
            out.push(false);
        }
    }
    Ok(out)
}

/// The angle encoded by a digit list from [`binary_decompose`].
pub fn binary_angle(bits: &[bool]) -> f64 {
    bits.iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(i, _)| PI * 0.5f64.powi(i as i32 + 1))
        .sum()
}

/// Implement U(α) for arbitrary α ∈ [0, π] by running one cascade per set
/// binary digit.
pub fn apply_phase_synthesis(
    alpha: f64,
    bits: usize,
    rho: &MultiState,
    rng: &mut impl Rng,
) -> Result<(CascadeTrace, MultiState), ProtocolError> {
    let digits = binary_decompose(alpha, bits)?;
    let mut trace = CascadeTrace::empty(4);
    let mut state = rho.clone();
    for (i, &digit) in digits.iter().enumerate() {
        if !digit {
            continue;
        }
        let (sub, next) = cascade(i as u32 + 1, &state, rng)?;
        state = next;
        trace.absorb(sub);
    }
    Ok((trace, state))
}

/// Canonical parameters of a two-qubit gate:
/// u = (v⊗w) · exp(−i Σ_k μ_k σ_k⊗σ_k) · (ṽ⊗w̃) with the global phase
/// folded into `v`, and π/2 ≥ μ₁ ≥ μ₂ ≥ μ₃ ≥ 0.
#[derive(Clone, Debug)]
pub struct CanonicalParams {
    /// Interaction strengths per axis (x, y, z), sorted descending.
    pub mu: [f64; 3],
    pub v: ComplexMatrix,
    pub w: ComplexMatrix,
    pub v_tilde: ComplexMatrix,
    pub w_tilde: ComplexMatrix,
}

impl CanonicalParams {
    /// exp(−i Σ_k μ_k σ_k⊗σ_k).
    pub fn interaction(&self) -> ComplexMatrix {
        middle_operator(self.mu)
    }

    /// (v⊗w) · interaction · (ṽ⊗w̃); equals the source gate including phase.
    pub fn reconstruct(&self) -> ComplexMatrix {
        kron(&self.v, &self.w)
            .mul(&self.interaction())
            .mul(&kron(&self.v_tilde, &self.w_tilde))
    }

    /// Upper bound on the expected teleportation cost of the gate:
    /// f_∞·(μ₁+μ₂+μ₃) ebits.
    pub fn ebit_bound(&self) -> f64 {
        f_infinity() * self.mu.iter().sum::<f64>()
    }
}

/// exp(−i(c₀·XX + c₁·YY + c₂·ZZ)) as the product of the three commuting
/// single-axis exponentials.
pub fn middle_operator(c: [f64; 3]) -> ComplexMatrix {
    let axes = [sigma_x(), sigma_y(), sigma_z()];
    let mut out = ComplexMatrix::identity(4);
    for (ck, axis) in c.iter().zip(&axes) {
        let pair = kron(axis, axis);
        let term = ComplexMatrix::identity(4)
            .scale(Complex64::new(ck.cos(), 0.0))
            .add(&pair.scale(Complex64::new(0.0, -ck.sin())));
        out = term.mul(&out);
    }
    out
}

/// Magic-basis change: columns are Φ⁺, iΦ⁻, iΨ⁺, Ψ⁻.
fn magic_basis() -> ComplexMatrix {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let ih = Complex64::new(0.0, std::f64::consts::FRAC_1_SQRT_2);
    ComplexMatrix::new(
        4,
        4,
        vec![
            h, ih, C_ZERO, C_ZERO, //
            C_ZERO, C_ZERO, ih, h, //
            C_ZERO, C_ZERO, ih, -h, //
            h, -ih, C_ZERO, C_ZERO,
        ],
    )
    .unwrap()
}

/// Split a 4×4 product gate into its 2×2 factors: l = v ⊗ w, with any
/// global phase absorbed into `v`.
fn factor_product_gate(l: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix), ProtocolError> {
    let block = |a: usize, b: usize| {
        ComplexMatrix::from_fn(2, 2, |i, j| l.get(a * 2 + i, b * 2 + j))
    };
    let (mut best, mut best_norm) = ((0, 0), -1.0);
    for a in 0..2 {
        for b in 0..2 {
            let n = block(a, b).frobenius_norm();
            if n > best_norm {
                best_norm = n;
                best = (a, b);
            }
        }
    }
    let w_raw = block(best.0, best.1);
    let det = w_raw.determinant();
    if det.norm() < 1e-12 {
        return Err(ProtocolError::DecompositionFailed(
            "local factor has numerically singular block".into(),
        ));
    }
    let w = w_raw.scale(C_ONE / det.sqrt());
    // w ∈ SU(2), so w⁻¹ is its adjugate.
    let w_inv = ComplexMatrix::new(
        2,
        2,
        vec![w.get(1, 1), -w.get(0, 1), -w.get(1, 0), w.get(0, 0)],
    )
    .unwrap();
    let v = ComplexMatrix::from_fn(2, 2, |a, b| {
        let blk = block(a, b);
        blk.mul(&w_inv).trace() * Complex64::new(0.5, 0.0)
    });
    let recon = kron(&v, &w);
    if recon.sub(l).max_norm() > 1e-8 {
        return Err(ProtocolError::DecompositionFailed(
            "matrix is not a product of single-qubit factors".into(),
        ));
    }
    Ok((v, w))
}

/// Canonical decomposition of a two-qubit unitary via the magic-basis
/// spectral method: transform to the magic basis, diagonalise MᵀM with a
/// real orthogonal congruence, split the diagonal phases into interaction
/// strengths, and reduce them into the chamber π/2 ≥ μ₁ ≥ μ₂ ≥ μ₃ ≥ 0 by
/// tracked local symmetries. Correctness is enforced by the reconstruction
/// residual, not by the intermediate steps.
pub fn canonical_params(u: &ComplexMatrix) -> Result<CanonicalParams, ProtocolError> {
    if u.rows() != 4 || !u.is_unitary(1e-10) {
        return Err(ProtocolError::NotUnitary);
    }
    let b = magic_basis();
    let bd = b.dagger();

    // Normalise the determinant to 1.
    let det = u.determinant();
    let gamma = det.powf(0.25);
    let u1 = u.scale(C_ONE / gamma);
    let mut phase = gamma;

    let m = bd.mul(&u1).mul(&b);
    let m2 = {
        let raw = m.transpose().mul(&m);
        // Symmetrise: MᵀM is complex symmetric by construction.
        raw.add(&raw.transpose()).scale(Complex64::new(0.5, 0.0))
    };

    let x_part = ComplexMatrix::from_fn(4, 4, |i, j| Complex64::new(m2.get(i, j).re, 0.0));
    let y_part = ComplexMatrix::from_fn(4, 4, |i, j| Complex64::new(m2.get(i, j).im, 0.0));

    let mut chosen: Option<(ComplexMatrix, Vec<f64>)> = None;
    for &t in &[0.719_386_241_f64, 0.333_217_19, 1.279_441_3, 2.130_997_1, 0.071_772_9] {
        let z = x_part.add(&y_part.scale(Complex64::new(t, 0.0)));
        let eig = herm_eig(&z)?;
        // Real symmetric input: eigenvectors are real up to noise.
        let mut o = ComplexMatrix::from_fn(4, 4, |i, j| {
            Complex64::new(eig.eigenvectors.get(i, j).re, 0.0)
        });
        // Re-orthonormalise the real columns.
        for col in 0..4 {
            for prev in 0..col {
                let dot: f64 = (0..4).map(|r| o.get(r, prev).re * o.get(r, col).re).sum();
                for r in 0..4 {
                    let v = o.get(r, col) - Complex64::new(dot, 0.0) * o.get(r, prev);
                    o.set(r, col, v);
                }
            }
            let norm: f64 =
                (0..4).map(|r| o.get(r, col).re * o.get(r, col).re).sum::<f64>().sqrt();
            for r in 0..4 {
                let v = o.get(r, col).unscale(norm);
                o.set(r, col, v);
            }
        }
        if o.determinant().re < 0.0 {
            for r in 0..4 {
                let v = -o.get(r, 3);
                o.set(r, 3, v);
            }
        }
        let d_cand = o.transpose().mul(&m2).mul(&o);
        let mut off: f64 = 0.0;
        let mut phases = Vec::with_capacity(4);
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    off = off.max(d_cand.get(i, j).norm());
                }
            }
            phases.push(d_cand.get(i, i).arg());
        }
        if off < 1e-9 {
            chosen = Some((o, phases));
            break;
        }
    }
    let (o, theta2) = chosen.ok_or_else(|| {
        ProtocolError::DecompositionFailed("could not jointly diagonalise MᵀM".into())
    })?;

    // Half phases define Δ with Δ² = D; fix the branch so Q = M·O·Δ⁻¹ has
    // determinant +1 (it is automatically real orthogonal).
    let mut half: Vec<f64> = theta2.iter().map(|t| t / 2.0).collect();
    let build_q = |half: &[f64]| -> ComplexMatrix {
        let delta_inv = ComplexMatrix::from_fn(4, 4, |i, j| {
            if i == j {
                Complex64::from_polar(1.0, -half[i])
            } else {
                C_ZERO
            }
        });
        m.mul(&o).mul(&delta_inv)
    };
    let mut q = build_q(&half);
    if q.determinant().re < 0.0 {
        half[0] += PI;
        q = build_q(&half);
    }
    let imag_mass = q.data().iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    if imag_mass > 1e-7 || !q.is_unitary(1e-8) {
        return Err(ProtocolError::DecompositionFailed(format!(
            "orthogonal factor has imaginary residue {imag_mass:.2e}"
        )));
    }

    // Δ_jj = e^{i·half_j} must be e^{−iθ_j} with Σθ_j = 0: split off the
    // mean as a tracked global phase.
    let mut theta: Vec<f64> = half.iter().map(|h| -h).collect();
    let mean = theta.iter().sum::<f64>() / 4.0;
    for t in &mut theta {
        *t -= mean;
    }
    phase *= Complex64::from_polar(1.0, -mean);

    let mut c = [
        (theta[0] + theta[2]) / 2.0,
        (theta[1] + theta[2]) / 2.0,
        (theta[0] + theta[1]) / 2.0,
    ];

    let mut l1 = b.mul(&q).mul(&bd);
    let mut l2 = b.mul(&o.transpose()).mul(&bd);

    // Chamber reduction. Every move preserves phase · l1 · exp(−iΣcσσ) · l2:
    //  - shifting c_k by s·π/2 absorbs (−i σ_k⊗σ_k)^s, which is local;
    //  - a pair (c_k, c_l) is negated by conjugation with σ_m⊗1;
    //  - axes are permuted by conjugation with R_m⊗R_m, R_m = exp(−iπ/4 σ_m).
    let locals = [sigma_x(), sigma_y(), sigma_z()];
    let reduce_quarter =
        |c: &mut [f64; 3], phase: &mut Complex64, l2: &mut ComplexMatrix| {
            for k in 0..3 {
                let s = (c[k] / FRAC_PI_2).floor() as i64;
                if s != 0 {
                    c[k] -= s as f64 * FRAC_PI_2;
                    *phase *= (-C_I).powi(s as i32);
                    if s.rem_euclid(2) == 1 {
                        let sig = kron(&locals[k], &locals[k]);
                        *l2 = sig.mul(l2);
                    }
                }
            }
        };
    let negate_pair = |c: &mut [f64; 3],
                       k: usize,
                       l: usize,
                       l1: &mut ComplexMatrix,
                       l2: &mut ComplexMatrix| {
        let m_axis = 3 - k - l;
        let sig = kron(&locals[m_axis], &ComplexMatrix::identity(2));
        *l1 = l1.mul(&sig);
        *l2 = sig.mul(l2);
        c[k] = -c[k];
        c[l] = -c[l];
    };
    let swap_axes = |c: &mut [f64; 3],
                     k: usize,
                     l: usize,
                     l1: &mut ComplexMatrix,
                     l2: &mut ComplexMatrix| {
        let m_axis = 3 - k - l;
        let r = rotation_about(m_axis);
        let cmat = kron(&r, &r);
        *l1 = l1.mul(&cmat.dagger());
        *l2 = cmat.mul(l2);
        c.swap(k, l);
    };
    let sort_desc = |c: &mut [f64; 3], l1: &mut ComplexMatrix, l2: &mut ComplexMatrix| {
        if c[0] < c[1] {
            swap_axes(c, 0, 1, l1, l2);
        }
        if c[1] < c[2] {
            swap_axes(c, 1, 2, l1, l2);
        }
        if c[0] < c[1] {
            swap_axes(c, 0, 1, l1, l2);
        }
    };

    reduce_quarter(&mut c, &mut phase, &mut l2);
    sort_desc(&mut c, &mut l1, &mut l2);
    // Fold into the cell c₀ + c₁ ≤ π/2 via (c₀, c₁) → (π/2−c₁, π/2−c₀);
    // a single application suffices because c₂ ≤ c₁ bounds the new sum.
    if c[0] + c[1] > FRAC_PI_2 + 1e-12 {
        negate_pair(&mut c, 0, 1, &mut l1, &mut l2);
        reduce_quarter(&mut c, &mut phase, &mut l2);
        sort_desc(&mut c, &mut l1, &mut l2);
    }
    // On the c₁ = c₂ = 0 edge, c₀ and π/2−c₀ are the same class; take the
    // smaller representative.
    if c[1] < 1e-12 && c[0] > PI / 4.0 + 1e-12 {
        negate_pair(&mut c, 0, 1, &mut l1, &mut l2);
        reduce_quarter(&mut c, &mut phase, &mut l2);
        sort_desc(&mut c, &mut l1, &mut l2);
    }
    for ck in &mut c {
        if !(-1e-9..=FRAC_PI_2 + 1e-9).contains(ck) {
            return Err(ProtocolError::DecompositionFailed(format!(
                "chamber reduction left μ = {c:?}"
            )));
        }
        *ck = ck.clamp(0.0, FRAC_PI_2).abs();
    }

    let (v, w) = factor_product_gate(&l1.scale(phase))?;
    let (v_tilde, w_tilde) = factor_product_gate(&l2)?;
    let params = CanonicalParams { mu: c, v, w, v_tilde, w_tilde };

    let residual = operator_distance(&params.reconstruct(), u, true)?;
    if residual > 1e-8 {
        return Err(ProtocolError::DecompositionFailed(format!(
            "reconstruction residual {residual:.2e}"
        )));
    }
    Ok(params)
}

/// exp(−i(π/4)σ_m): the single-qubit rotation whose two-sided conjugation
/// swaps the other two interaction axes.
fn rotation_about(m: usize) -> ComplexMatrix {
    let sigma = [sigma_x(), sigma_y(), sigma_z()][m].clone();
    ComplexMatrix::identity(2)
        .scale(Complex64::new((PI / 4.0).cos(), 0.0))
        .add(&sigma.scale(Complex64::new(0.0, -(PI / 4.0).sin())))
}

/// Basis change T_k with T_k σx T_k† = σ_k, applied on both qubits to turn
/// U(α) into exp(−iα σ_k⊗σ_k).
fn axis_basis_change(axis: usize) -> ComplexMatrix {
    match axis {
        0 => ComplexMatrix::identity(2),
        // Rotation about z by +π/2 sends x to y.
        1 => rotation_about(2),
        // Rotation about y by −π/2 sends x to z.
        2 => {
            let s = sigma_y();
            ComplexMatrix::identity(2)
                .scale(Complex64::new((PI / 4.0).cos(), 0.0))
                .add(&s.scale(Complex64::new(0.0, (PI / 4.0).sin())))
        }
        _ => unreachable!(),
    }
}

/// Implement an arbitrary two-qubit unitary by canonical decomposition plus
/// three binary-angle cascade chains, interleaved with the local factors.
pub fn apply_arbitrary(
    u: &ComplexMatrix,
    rho: &MultiState,
    rng: &mut impl Rng,
) -> Result<(CascadeTrace, MultiState, CanonicalParams), ProtocolError> {
    apply_arbitrary_with_bits(u, rho, rng, DEFAULT_SYNTHESIS_BITS)
}

/// [`apply_arbitrary`] with an explicit synthesis precision.
pub fn apply_arbitrary_with_bits(
    u: &ComplexMatrix,
    rho: &MultiState,
    rng: &mut impl Rng,
    bits: usize,
) -> Result<(CascadeTrace, MultiState, CanonicalParams), ProtocolError> {
    let params = canonical_params(u)?;
    let mut trace = CascadeTrace::empty(4);
    let mut state = rho.clone();

    let apply_local = |op: &ComplexMatrix, state: &mut MultiState, trace: &mut CascadeTrace| {
        let out = op.mul(&state.to_density()).mul(&op.dagger());
        *state = MultiState::density_unchecked(out, state.layout().clone());
        trace.apply_local(op);
    };

    let before = kron(&params.v_tilde, &params.w_tilde);
    apply_local(&before, &mut state, &mut trace);

    for axis in 0..3 {
        let mu = params.mu[axis];
        if mu <= 1e-12 {
            continue;
        }
        let t = axis_basis_change(axis);
        let basis = kron(&t, &t);
        apply_local(&basis.dagger(), &mut state, &mut trace);
        let (sub, next) = apply_phase_synthesis(mu, bits, &state, rng)?;
        state = next;
        trace.absorb(sub);
        apply_local(&basis, &mut state, &mut trace);
    }

    let after = kron(&params.v, &params.w);
    apply_local(&after, &mut state, &mut trace);
    Ok((trace, state, params))
}

/// Glue layout for two-qubit inputs used by the protocol examples.
pub fn two_qubit_input(amps: Vec<Complex64>) -> Result<MultiState, ProtocolError> {
    Ok(MultiState::pure(amps, SubsystemLayout::parties(2, 2))?)
}
