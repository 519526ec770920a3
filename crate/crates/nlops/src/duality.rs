//! The channel ↔ state correspondence and both of its directions.
//!
//! A completely positive map acting on one d-level system per party is
//! isomorphic to the state obtained by feeding the first half of a local
//! maximally entangled pair through it at every site. The state lives on the
//! pair layout `A1 A2 B1 B2 …`, where the `…1` subsystems carried the action
//! of the map.
//!
//! The reverse direction comes in two flavours:
//!
//! - [`apply_via_choi`] is the exact, post-selected evaluation: project every
//!   `(…2, input)` pair onto the maximally entangled state and keep the
//!   conditional output. For a trace-preserving channel the projection
//!   succeeds with probability exactly 1/d^{2N}.
//! - [`TeleportProtocol`] samples a full Bell measurement at every party by
//!   the Born rule from the exact joint outcome distribution, applies the
//!   Pauli correction dictated by each outcome, and reports the branch. This
//!   is the protocol actually run by the gate-teleportation machinery.

use crate::linalg::{
    embed_operator, kron, kron_vec, ComplexMatrix, LinalgError, SubsystemLayout, C_ZERO,
};
use crate::qobjects::{mes, pauli, BellIndex, Channel, MultiState, StateError};
use crate::rng::sample_index;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

/// Errors from duality-layer operations.
#[derive(Debug, Error)]
pub enum DualityError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),

    #[error(transparent)]
    State(#[from] StateError),

    #[error("dual state has dimension {0}, expected {1}")]
    DualDimension(usize, usize),

    #[error("input state has dimension {0}, expected {1}")]
    InputDimension(usize, usize),

    #[error("channel acts on {0} parties, expected {1}")]
    PartyMismatch(usize, usize),

    #[error("teleportation requires qubit subsystems")]
    NonQubit,

    #[error("measurement branch has probability {0:.3e}, cannot condition on it")]
    ZeroProbability(f64),
}

/// Result of one (deterministic or sampled) duality application.
#[derive(Clone, Debug)]
pub struct DualityOutcome {
    /// Whether the run landed on the branch that implements the channel
    /// itself (all parties found the maximally entangled outcome).
    pub success: bool,
    /// Bell outcome per party, in party order.
    pub outcome_indices: Vec<BellIndex>,
    /// Normalised conditional state on the output subsystems, after the
    /// Pauli corrections.
    pub output_state: MultiState,
    /// Born probability of this branch.
    pub probability: f64,
}

fn pair_labels(layout: &SubsystemLayout) -> (Vec<String>, Vec<String>) {
    let labels = layout.labels();
    let outputs = labels.iter().step_by(2).cloned().collect();
    let inputs = labels.iter().skip(1).step_by(2).cloned().collect();
    (outputs, inputs)
}

fn check_dual_input(
    e: &MultiState,
    rho: &MultiState,
    parties: usize,
) -> Result<usize, DualityError> {
    let e_layout = e.layout();
    if e_layout.len() != 2 * parties {
        return Err(DualityError::PartyMismatch(e_layout.len() / 2, parties));
    }
    let d = e_layout.dims()[0];
    if e_layout.dims().iter().any(|&x| x != d) {
        return Err(DualityError::DualDimension(e.dim(), d.pow(2 * parties as u32)));
    }
    let expected_in = d.pow(parties as u32);
    if rho.dim() != expected_in {
        return Err(DualityError::InputDimension(rho.dim(), expected_in));
    }
    Ok(d)
}

/// Contract the dual state against an input operator:
/// (1/d^N)·tr_{…2}[E·(1_{…1} ⊗ m^T)], an operator on the output halves.
///
/// Evaluated as R[o,o'] = (1/D)·Σ_{i,i'} E[(o,i),(o',i')]·m[i,i'] with a
/// precomputed interleaved-index table; the protocols call this once per
/// Bell outcome, so it stays allocation-light.
fn contract(e_mat: &ComplexMatrix, e_layout: &SubsystemLayout, m: &ComplexMatrix) -> ComplexMatrix {
    let pairs = e_layout.len() / 2;
    let dims = e_layout.dims();
    let strides = e_layout.strides();
    let d_out: usize = (0..pairs).map(|p| dims[2 * p]).product();
    let d_in: usize = (0..pairs).map(|p| dims[2 * p + 1]).product();
    debug_assert_eq!(m.rows(), d_in);

    // Flat index of output part o and input part i, both big-endian over
    // the parties, interleaved as (o₀, i₀, o₁, i₁, …).
    let mut table = vec![0usize; d_out * d_in];
    for o in 0..d_out {
        for i in 0..d_in {
            let (mut op, mut ip, mut idx) = (o, i, 0usize);
            for p in (0..pairs).rev() {
                idx += (op % dims[2 * p]) * strides[2 * p];
                op /= dims[2 * p];
                idx += (ip % dims[2 * p + 1]) * strides[2 * p + 1];
                ip /= dims[2 * p + 1];
            }
            table[o * d_in + i] = idx;
        }
    }

    let mut out = ComplexMatrix::zeros(d_out, d_out);
    let scale = 1.0 / d_in as f64;
    for o in 0..d_out {
        for o2 in 0..d_out {
            let mut acc = C_ZERO;
            for i in 0..d_in {
                let row = table[o * d_in + i];
                for i2 in 0..d_in {
                    let z = e_mat.get(row, table[o2 * d_in + i2]);
                    if z != C_ZERO {
                        acc += z * m.get(i, i2);
                    }
                }
            }
            out.set(o, o2, acc.scale(scale));
        }
    }
    out
}

fn output_layout(e_layout: &SubsystemLayout) -> SubsystemLayout {
    let positions: Vec<usize> = (0..e_layout.len()).step_by(2).collect();
    e_layout.restrict(&positions)
}

/// Dual state of a channel: apply it to the `…1` halves of one local
/// maximally entangled pair per party.
///
/// Unitary channels produce a pure state; everything else a density matrix.
/// The result has unit trace for a trace-preserving channel.
pub fn choi_of_channel(c: &Channel, parties: usize) -> Result<MultiState, DualityError> {
    if c.parties() != parties {
        return Err(DualityError::PartyMismatch(c.parties(), parties));
    }
    let total = c.dim_in();
    let d = (total as f64).powf(1.0 / parties as f64).round() as usize;
    if d.pow(parties as u32) != total {
        return Err(DualityError::InputDimension(total, d.pow(parties as u32)));
    }
    let layout = SubsystemLayout::pair_layout(parties, d);
    let (outputs, _) = pair_labels(&layout);
    let output_refs: Vec<&str> = outputs.iter().map(String::as_str).collect();

    let phi = mes(d)?;
    let factors: Vec<&[Complex64]> =
        (0..parties).map(|_| phi.amplitudes().expect("mes is pure")).collect();
    let base = kron_vec(&factors);

    if c.kraus().len() == 1 {
        let k = embed_operator(&c.kraus()[0], &layout, &output_refs)?;
        let amps = k.mul_vec(&base);
        return Ok(MultiState::pure_unchecked(amps, layout));
    }

    let p = ComplexMatrix::outer(&base, &base);
    let mut out = ComplexMatrix::zeros(p.rows(), p.cols());
    for k in c.kraus() {
        let embedded = embed_operator(k, &layout, &output_refs)?;
        out = out.add(&embedded.mul(&p).mul(&embedded.dagger()));
    }
    Ok(MultiState::density_unchecked(out, layout))
}

/// Deterministic application of a dual state to an input: the post-selected
/// branch in which every party finds the maximally entangled outcome.
///
/// Returns the normalised conditional output and the branch probability,
/// which equals 1/d^{2N} whenever `e` is the dual of a trace-preserving
/// channel.
pub fn apply_via_choi(
    e: &MultiState,
    rho: &MultiState,
    parties: usize,
) -> Result<DualityOutcome, DualityError> {
    check_dual_input(e, rho, parties)?;
    let e_mat = e.to_density();
    let unnorm = contract(&e_mat, e.layout(), &rho.to_density());
    let p = unnorm.trace().re;
    if p < 1e-14 {
        return Err(DualityError::ZeroProbability(p));
    }
    let out_layout = output_layout(e.layout());
    let output = unnorm.scale(Complex64::new(1.0 / p, 0.0));
    Ok(DualityOutcome {
        success: true,
        outcome_indices: vec![BellIndex { i1: 1, i2: 1 }; parties],
        output_state: MultiState::density_unchecked(output, out_layout),
        probability: p,
    })
}

/// The channel action reconstructed from a dual state: d^{2N} times the
/// unnormalised conditional output. For duals of trace-preserving channels
/// this is the channel output itself.
pub fn channel_action_via_choi(
    e: &MultiState,
    rho: &MultiState,
    parties: usize,
) -> Result<ComplexMatrix, DualityError> {
    let d = check_dual_input(e, rho, parties)?;
    let e_mat = e.to_density();
    let unnorm = contract(&e_mat, e.layout(), &rho.to_density());
    let scale = (d as f64).powi(2 * parties as i32);
    Ok(unnorm.scale(Complex64::new(scale, 0.0)))
}

/// A prepared teleportation run: dual state, input, and the exact joint
/// distribution of the 4^N Bell outcomes.
///
/// Construction computes the outcome table once; sampling afterwards is
/// constant time, so Monte Carlo loops over a fixed (E, ρ) pair stay cheap.
pub struct TeleportProtocol {
    e_mat: ComplexMatrix,
    e_layout: SubsystemLayout,
    parties: usize,
    rho: ComplexMatrix,
    corrections: Vec<ComplexMatrix>,
    probabilities: Vec<f64>,
}

impl TeleportProtocol {
    pub fn new(e: &MultiState, rho: &MultiState) -> Result<Self, DualityError> {
        if !e.layout().len().is_multiple_of(2) {
            return Err(DualityError::PartyMismatch(0, e.layout().len()));
        }
        let parties = e.layout().len() / 2;
        let d = check_dual_input(e, rho, parties)?;
        if d != 2 {
            return Err(DualityError::NonQubit);
        }
        let e_mat = e.to_density();
        let rho_mat = rho.to_density();

        let n_outcomes = 4usize.pow(parties as u32);
        let mut corrections = Vec::with_capacity(n_outcomes);
        let mut probabilities = Vec::with_capacity(n_outcomes);
        for flat in 0..n_outcomes {
            let indices = Self::decode(flat, parties);
            let mut corr = ComplexMatrix::identity(1);
            for idx in &indices {
                corr = kron(&corr, &pauli(*idx));
            }
            let m = corr.mul(&rho_mat).mul(&corr);
            let unnorm = contract(&e_mat, e.layout(), &m);
            probabilities.push(unnorm.trace().re.max(0.0));
            corrections.push(corr);
        }
        Ok(Self {
            e_mat,
            e_layout: e.layout().clone(),
            parties,
            rho: rho_mat,
            corrections,
            probabilities,
        })
    }

    fn decode(flat: usize, parties: usize) -> Vec<BellIndex> {
        (0..parties)
            .map(|p| BellIndex::from_flat((flat >> (2 * (parties - 1 - p))) & 3))
            .collect()
    }

    fn encode(indices: &[BellIndex]) -> usize {
        indices.iter().fold(0usize, |acc, idx| acc * 4 + idx.flat())
    }

    /// Joint Born probabilities of all 4^N outcomes, party A most
    /// significant, Bell index order (1,1), (1,2), (2,1), (2,2).
    pub fn outcome_probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    /// Sample only the joint outcome, without building the output state.
    pub fn sample_outcome(&self, rng: &mut impl Rng) -> Vec<BellIndex> {
        Self::decode(sample_index(&self.probabilities, rng), self.parties)
    }

    /// The full result of a given joint outcome: Born probability and the
    /// corrected conditional output state.
    pub fn outcome_result(&self, indices: &[BellIndex]) -> Result<DualityOutcome, DualityError> {
        let flat = Self::encode(indices);
        let p = self.probabilities[flat];
        if p < 1e-14 {
            return Err(DualityError::ZeroProbability(p));
        }
        let corr = &self.corrections[flat];
        let m = corr.mul(&self.rho).mul(corr);
        let unnorm = contract(&self.e_mat, &self.e_layout, &m);
        let corrected = corr.mul(&unnorm).mul(corr).scale(Complex64::new(1.0 / p, 0.0));
        let success = indices.iter().all(|idx| idx.flat() == 0);
        Ok(DualityOutcome {
            success,
            outcome_indices: indices.to_vec(),
            output_state: MultiState::density_unchecked(corrected, output_layout(&self.e_layout)),
            probability: p,
        })
    }

    /// Sample a joint Bell outcome and return the corrected branch.
    pub fn sample(&self, rng: &mut impl Rng) -> Result<DualityOutcome, DualityError> {
        let indices = self.sample_outcome(rng);
        self.outcome_result(&indices)
    }

    /// All joint outcomes in flat order, for exhaustive checks.
    pub fn all_outcomes(&self) -> Vec<Vec<BellIndex>> {
        (0..self.probabilities.len()).map(|f| Self::decode(f, self.parties)).collect()
    }
}

/// One-shot teleportation: Bell-measure every party, apply the Pauli
/// corrections, and report the sampled branch.
pub fn teleport_apply(
    e: &MultiState,
    rho: &MultiState,
    rng: &mut impl Rng,
) -> Result<DualityOutcome, DualityError> {
    TeleportProtocol::new(e, rho)?.sample(rng)
}

/// A spanning set of d² density matrices for the Hermitian operators on a
/// d-dimensional space: basis projectors plus two superpositions per pair.
pub fn spanning_density_states(d: usize) -> Vec<ComplexMatrix> {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let hi = Complex64::new(0.0, std::f64::consts::FRAC_1_SQRT_2);
    let mut out = Vec::with_capacity(d * d);
    for i in 0..d {
        let v = crate::qobjects::basis_state(d, i);
        out.push(ComplexMatrix::outer(&v, &v));
    }
    for i in 0..d {
        for j in i + 1..d {
            let mut plus = vec![crate::linalg::C_ZERO; d];
            plus[i] = h;
            plus[j] = h;
            out.push(ComplexMatrix::outer(&plus, &plus));
            let mut yplus = vec![crate::linalg::C_ZERO; d];
            yplus[i] = h;
            yplus[j] = hi;
            out.push(ComplexMatrix::outer(&yplus, &yplus));
        }
    }
    out
}

/// Largest deviation between direct channel application and the value
/// reconstructed through the dual state, over a spanning input set.
pub fn roundtrip_check(c: &Channel) -> Result<f64, DualityError> {
    let parties = c.parties();
    let e = choi_of_channel(c, parties)?;
    let d_total = c.dim_in();
    let d_local = e.layout().dims()[0];
    let rho_layout = SubsystemLayout::parties(parties, d_local);
    let mut worst: f64 = 0.0;
    for rho in spanning_density_states(d_total) {
        let direct = c.apply(&rho);
        let state = MultiState::density_unchecked(rho, rho_layout.clone());
        let via = channel_action_via_choi(&e, &state, parties)?;
        worst = worst.max(direct.sub(&via).max_norm());
    }
    Ok(worst)
}

/// Haar-random unitary from Gram–Schmidt on a complex Ginibre matrix.
pub fn haar_random_unitary(dim: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    for _ in 0..dim {
        let mut v: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        for prev in &cols {
            let overlap: Complex64 = prev.iter().zip(&v).map(|(p, x)| p.conj() * x).sum();
            for (x, p) in v.iter_mut().zip(prev) {
                *x -= overlap * p;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for x in &mut v {
            *x /= norm;
        }
        cols.push(v);
    }
    ComplexMatrix::from_fn(dim, dim, |i, j| cols[j][i])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::binary_entropy;
    use crate::qobjects::{
        basis_state, bell_state, depolarize, entanglement_entropy, named_gate, phase_gate,
        phase_gate_n, psi_alpha,
    };
    use crate::rng::seeded;
    use std::f64::consts::PI;

    const TOL: f64 = 1e-12;

    fn qubit_input(parties: usize, amps: Vec<Complex64>) -> MultiState {
        MultiState::pure(amps, SubsystemLayout::parties(parties, 2)).unwrap()
    }

    fn basis_input(parties: usize, index: usize) -> MultiState {
        qubit_input(parties, basis_state(1 << parties, index))
    }

    #[test]
    fn choi_of_identity_is_double_pair() {
        let id = Channel::unitary(&ComplexMatrix::identity(4), 2).unwrap();
        let e = choi_of_channel(&id, 2).unwrap();
        let phi = bell_state(BellIndex { i1: 1, i2: 1 });
        let expect = kron_vec(&[phi.amplitudes().unwrap(), phi.amplitudes().unwrap()]);
        let expect_density = ComplexMatrix::outer(&expect, &expect);
        assert!(e.to_density().sub(&expect_density).max_norm() < TOL);
    }

    #[test]
    fn choi_of_phase_gate_is_psi_alpha() {
        for &alpha in &[0.0, 0.3, PI / 8.0, PI / 4.0, 1.2] {
            let c = Channel::unitary(&phase_gate(alpha), 2).unwrap();
            let e = choi_of_channel(&c, 2).unwrap();
            assert!(e.is_pure());
            let expect = psi_alpha(alpha, 2).unwrap();
            assert!(e.density_distance(&expect) < TOL);
        }
    }

    #[test]
    fn choi_of_cnot_matches_closed_form() {
        let c = Channel::unitary(&named_gate("cnot").unwrap(), 2).unwrap();
        let e = choi_of_channel(&c, 2).unwrap();
        // (|00⟩_A |Φ⁺⟩_B + |11⟩_A |Ψ⁺⟩_B)/√2 on layout (A1 A2 B1 B2).
        let mut expect = vec![crate::linalg::C_ZERO; 16];
        expect[0b0000] = Complex64::new(0.5, 0.0); // |00⟩_A |00⟩_B
        expect[0b0011] = Complex64::new(0.5, 0.0); // |00⟩_A |11⟩_B
        expect[0b1101] = Complex64::new(0.5, 0.0); // |11⟩_A |01⟩_B
        expect[0b1110] = Complex64::new(0.5, 0.0); // |11⟩_A |10⟩_B
        let expect_density = ComplexMatrix::outer(&expect, &expect);
        assert!(e.to_density().sub(&expect_density).max_norm() < TOL);
    }

    #[test]
    fn choi_entanglement_matches_phase_entanglement() {
        for &alpha in &[0.1, PI / 8.0, PI / 4.0, 0.9] {
            let c = Channel::unitary(&phase_gate(alpha), 2).unwrap();
            let e = choi_of_channel(&c, 2).unwrap();
            let ent = entanglement_entropy(&e, &["A1", "A2"]).unwrap();
            let expect = binary_entropy(alpha.cos().powi(2)).unwrap();
            assert!((ent - expect).abs() < 1e-11);
        }
    }

    #[test]
    fn choi_is_linear_in_channel_mixtures() {
        let mut rng = seeded(21);
        for _ in 0..5 {
            let u1 = haar_random_unitary(4, &mut rng);
            let u2 = haar_random_unitary(4, &mut rng);
            let lambda: f64 = 0.37;
            let kraus = vec![
                u1.scale(Complex64::new(lambda.sqrt(), 0.0)),
                u2.scale(Complex64::new((1.0 - lambda).sqrt(), 0.0)),
            ];
            let mix = Channel::new(kraus, 4, 4, 2).unwrap();
            let e_mix = choi_of_channel(&mix, 2).unwrap().to_density();
            let e1 = choi_of_channel(&Channel::unitary(&u1, 2).unwrap(), 2).unwrap().to_density();
            let e2 = choi_of_channel(&Channel::unitary(&u2, 2).unwrap(), 2).unwrap().to_density();
            let expect = e1
                .scale(Complex64::new(lambda, 0.0))
                .add(&e2.scale(Complex64::new(1.0 - lambda, 0.0)));
            assert!(e_mix.sub(&expect).max_norm() < 1e-10);
        }
    }

    #[test]
    fn apply_via_choi_identity_returns_input() {
        let id = Channel::unitary(&ComplexMatrix::identity(4), 2).unwrap();
        let e = choi_of_channel(&id, 2).unwrap();
        let mut rng = seeded(3);
        let u = haar_random_unitary(4, &mut rng);
        let rho = qubit_input(2, u.mul_vec(&basis_state(4, 0)));
        let out = apply_via_choi(&e, &rho, 2).unwrap();
        assert!((out.probability - 1.0 / 16.0).abs() < TOL);
        assert!(out.output_state.to_density().sub(&rho.to_density()).max_norm() < TOL);
        assert!(out.success);
    }

    #[test]
    fn apply_via_choi_phase_gate_matches_conjugation() {
        // Oracle: direct matrix conjugation.
        let alpha = 0.77;
        let e = psi_alpha(alpha, 2).unwrap();
        let rho = basis_input(2, 0);
        let out = apply_via_choi(&e, &rho, 2).unwrap();
        let u = phase_gate(alpha);
        let expect = u.mul(&rho.to_density()).mul(&u.dagger());
        assert!(out.output_state.to_density().sub(&expect).max_norm() < TOL);
        assert!((out.probability - 1.0 / 16.0).abs() < TOL);
    }

    #[test]
    fn apply_via_choi_three_party_probability() {
        let alpha = PI / 8.0;
        let e = psi_alpha(alpha, 3).unwrap();
        let rho = basis_input(3, 5);
        let out = apply_via_choi(&e, &rho, 3).unwrap();
        assert!((out.probability - 1.0 / 64.0).abs() < TOL);
        let u = phase_gate_n(alpha, 3);
        let expect = u.mul(&rho.to_density()).mul(&u.dagger());
        assert!(out.output_state.to_density().sub(&expect).max_norm() < TOL);
    }

    #[test]
    fn teleport_identity_every_branch_returns_input() {
        let id = Channel::unitary(&ComplexMatrix::identity(4), 2).unwrap();
        let e = choi_of_channel(&id, 2).unwrap();
        let mut rng = seeded(5);
        let u = haar_random_unitary(4, &mut rng);
        let rho = qubit_input(2, u.mul_vec(&basis_state(4, 0)));
        let protocol = TeleportProtocol::new(&e, &rho).unwrap();
        for indices in protocol.all_outcomes() {
            let out = protocol.outcome_result(&indices).unwrap();
            assert!((out.probability - 1.0 / 16.0).abs() < TOL);
            assert!(out.output_state.to_density().sub(&rho.to_density()).max_norm() < 1e-11);
        }
    }

    #[test]
    fn teleport_phase_gate_branches_by_first_indices() {
        let alpha = 0.61;
        let e = psi_alpha(alpha, 2).unwrap();
        let rho = basis_input(2, 2);
        let protocol = TeleportProtocol::new(&e, &rho).unwrap();
        let plus = phase_gate(alpha);
        let minus = phase_gate(-alpha);
        for indices in protocol.all_outcomes() {
            let out = protocol.outcome_result(&indices).unwrap();
            let gate = if indices[0].i1 == indices[1].i1 { &plus } else { &minus };
            let expect = gate.mul(&rho.to_density()).mul(&gate.dagger());
            assert!(
                out.output_state.to_density().sub(&expect).max_norm() < 1e-11,
                "branch mismatch at outcome {indices:?}"
            );
        }
    }

    #[test]
    fn teleport_outcomes_are_uniform_for_unitary_duals() {
        let e = psi_alpha(PI / 8.0, 2).unwrap();
        let rho = basis_input(2, 1);
        let protocol = TeleportProtocol::new(&e, &rho).unwrap();
        for &p in protocol.outcome_probabilities() {
            assert!((p - 1.0 / 16.0).abs() < TOL);
        }
        // Monte Carlo branch frequencies: U(+α) branch within 3σ of 1/2.
        let mut rng = seeded(11);
        let trials = 100_000usize;
        let mut plus = 0usize;
        for _ in 0..trials {
            let indices = protocol.sample_outcome(&mut rng);
            if indices[0].i1 == indices[1].i1 {
                plus += 1;
            }
        }
        let frac = plus as f64 / trials as f64;
        let sigma = 0.5 / (trials as f64).sqrt();
        assert!((frac - 0.5).abs() < 3.0 * sigma, "frac = {frac}");
    }

    #[test]
    fn teleport_all_phi_plus_matches_apply_via_choi() {
        let alpha = 1.0;
        let e = psi_alpha(alpha, 2).unwrap();
        let rho = basis_input(2, 3);
        let protocol = TeleportProtocol::new(&e, &rho).unwrap();
        let branch = protocol
            .outcome_result(&[BellIndex { i1: 1, i2: 1 }, BellIndex { i1: 1, i2: 1 }])
            .unwrap();
        let direct = apply_via_choi(&e, &rho, 2).unwrap();
        assert!(branch.success);
        let diff = branch
            .output_state
            .to_density()
            .sub(&direct.output_state.to_density())
            .max_norm();
        assert!(diff < TOL);
        assert!((branch.probability - direct.probability).abs() < TOL);
    }

    #[test]
    fn teleport_rejects_non_qubit_duals() {
        let phi3 = mes(3).unwrap();
        let rho = MultiState::pure(basis_state(3, 0), SubsystemLayout::parties(1, 3)).unwrap();
        assert!(matches!(TeleportProtocol::new(&phi3, &rho), Err(DualityError::NonQubit)));
    }

    #[test]
    fn roundtrip_identity_channel() {
        let id = Channel::unitary(&ComplexMatrix::identity(4), 2).unwrap();
        assert!(roundtrip_check(&id).unwrap() < TOL);
    }

    #[test]
    fn roundtrip_random_unitary_channels() {
        let mut rng = seeded(17);
        for _ in 0..5 {
            let u = haar_random_unitary(4, &mut rng);
            let c = Channel::unitary(&u, 2).unwrap();
            assert!(roundtrip_check(&c).unwrap() <= 1e-10);
        }
    }

    #[test]
    fn roundtrip_depolarized_cnot() {
        let c = depolarize(&named_gate("cnot").unwrap(), 0.3).unwrap();
        assert!(roundtrip_check(&c).unwrap() <= 1e-10);
    }

    #[test]
    fn haar_unitaries_are_unitary() {
        let mut rng = seeded(23);
        for dim in [2, 4, 8] {
            let u = haar_random_unitary(dim, &mut rng);
            assert!(u.is_unitary(1e-12));
        }
    }

    #[test]
    fn spanning_states_are_valid_and_complete() {
        let set = spanning_density_states(4);
        assert_eq!(set.len(), 16);
        for rho in &set {
            assert!((rho.trace().re - 1.0).abs() < TOL);
            assert!(rho.is_hermitian(TOL));
        }
    }
}
