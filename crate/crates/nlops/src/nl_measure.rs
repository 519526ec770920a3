//! Constructions for non-local von Neumann measurements.
//!
//! Three routes with very different entanglement accounting:
//!
//! 1. teleport one system across, measure locally, optionally teleport back
//!    — log₂d ebits for the outcome alone, 2·log₂d with the post-state;
//! 2. for rank-one measurements, rotate the measurement basis onto a local
//!    product basis with a non-local unitary U = Σ|a_k b_k⟩⟨φ_k| and read
//!    the outcome from local measurements — the cost is whatever U costs,
//!    and the label assignment changes it (identity labels cost nothing,
//!    crossed labels cost a full swap);
//! 3. for arbitrary-rank projector sets, entangle an ancilla that indexes
//!    the outcome: U = Σ_j S_{0j}⊗P_j with S_{0j} the ancilla transposition
//!    0↔j. Measuring the ancilla leaves the system in the projected state.
//!
//! The parity measurement demo shows route 3 creating one ebit from a
//! separable input: both outcomes of the two-outcome parity measurement
//! project the mixture ½(Φ⁺ + Ψ⁺) onto a maximally entangled state.

use crate::linalg::{
    embed_operator, herm_eig, kron, partial_trace, partial_transpose, von_neumann_entropy,
    ComplexMatrix, LinalgError, SubsystemLayout, C_ONE, C_ZERO,
};
use crate::qobjects::{bell_state, BellIndex, MultiState, StateError};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors from measurement constructions.
#[derive(Debug, Error)]
pub enum MeasureError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),

    #[error(transparent)]
    State(#[from] StateError),

    #[error("projectors must be square matrices of equal dimension")]
    BadProjectors,

    #[error("projector {0} is not idempotent (deviation {1:.3e})")]
    NotIdempotent(usize, f64),

    #[error("projectors {0} and {1} are not orthogonal (deviation {2:.3e})")]
    NotOrthogonal(usize, usize, f64),

    #[error("projectors do not resolve the identity (deviation {0:.3e})")]
    NotComplete(f64),

    #[error("measurement basis is not orthonormal (deviation {0:.3e})")]
    NotOrthonormal(f64),

    #[error("labels must be a bijection onto the product basis")]
    BadLabels,

    #[error("dimension mismatch: {0} vs {1}")]
    Dimension(usize, usize),

    #[error("invalid measurement JSON: {0}")]
    Json(String),
}

/// A complete projective measurement: orthogonal projectors summing to the
/// identity, with arbitrary ranks.
#[derive(Clone, Debug)]
pub struct MeasurementSpec {
    projectors: Vec<ComplexMatrix>,
    ranks: Vec<usize>,
    dim: usize,
}

impl MeasurementSpec {
    pub fn new(projectors: Vec<ComplexMatrix>) -> Result<Self, MeasureError> {
        let dim = match projectors.first() {
            Some(p) if p.is_square() => p.rows(),
            _ => return Err(MeasureError::BadProjectors),
        };
        if projectors.iter().any(|p| !p.is_square() || p.rows() != dim) {
            return Err(MeasureError::BadProjectors);
        }
        for (i, p) in projectors.iter().enumerate() {
            let idem = p.mul(p).sub(p).max_norm();
            if idem > 1e-10 {
                return Err(MeasureError::NotIdempotent(i, idem));
            }
            for (j, q) in projectors.iter().enumerate().skip(i + 1) {
                let cross = p.mul(q).max_norm();
                if cross > 1e-10 {
                    return Err(MeasureError::NotOrthogonal(i, j, cross));
                }
            }
        }
        let mut sum = ComplexMatrix::zeros(dim, dim);
        for p in &projectors {
            sum = sum.add(p);
        }
        let complete = sum.sub(&ComplexMatrix::identity(dim)).max_norm();
        if complete > 1e-10 {
            return Err(MeasureError::NotComplete(complete));
        }
        let ranks = projectors.iter().map(|p| p.trace().re.round() as usize).collect();
        Ok(Self { projectors, ranks, dim })
    }

    pub fn projectors(&self) -> &[ComplexMatrix] {
        &self.projectors
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn outcomes(&self) -> usize {
        self.projectors.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Exact outcome probabilities and normalised post-states on a density
    /// matrix: p_k = tr(P_k ρ), ρ_k = P_k ρ P_k / p_k.
    pub fn born_outcomes(&self, rho: &ComplexMatrix) -> Vec<(f64, Option<ComplexMatrix>)> {
        self.projectors
            .iter()
            .map(|p| {
                let projected = p.mul(rho).mul(p);
                let prob = projected.trace().re.max(0.0);
                if prob > 1e-14 {
                    (prob, Some(projected.scale(Complex64::new(1.0 / prob, 0.0))))
                } else {
                    (prob, None)
                }
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        let dto = MeasurementJson {
            projectors: self
                .projectors
                .iter()
                .map(|p| {
                    (0..p.rows())
                        .map(|i| (0..p.cols()).map(|j| [p.get(i, j).re, p.get(i, j).im]).collect())
                        .collect()
                })
                .collect(),
        };
        serde_json::to_string(&dto).expect("measurement serialisation cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self, MeasureError> {
        let dto: MeasurementJson =
            serde_json::from_str(s).map_err(|e| MeasureError::Json(e.to_string()))?;
        let projectors = dto
            .projectors
            .iter()
            .map(|rows| {
                let r = rows.len();
                let c = rows.first().map_or(0, Vec::len);
                if rows.iter().any(|row| row.len() != c) {
                    return Err(MeasureError::Json("ragged projector matrix".into()));
                }
                let data = rows
                    .iter()
                    .flat_map(|row| row.iter().map(|e| Complex64::new(e[0], e[1])))
                    .collect();
                ComplexMatrix::new(r, c, data).map_err(MeasureError::from)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(projectors)
    }
}

#[derive(Serialize, Deserialize)]
struct MeasurementJson {
    projectors: Vec<Vec<Vec<[f64; 2]>>>,
}

/// What the measurement must deliver.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeasurementMode {
    /// Only the classical outcome is needed.
    OutcomeOnly,
    /// The system must also be left in the projected state.
    WithPostState,
}

/// Entanglement cost of the teleport-measure-teleport route on two d-level
/// systems: log₂d ebits for the outcome, twice that with the post-state.
pub fn proposal1_cost(d: usize, mode: MeasurementMode) -> f64 {
    let base = (d as f64).log2();
    match mode {
        MeasurementMode::OutcomeOnly => base,
        MeasurementMode::WithPostState => 2.0 * base,
    }
}

/// The basis-rotation unitary of the rank-one route: U = Σ_k |a_k b_k⟩⟨φ_k|,
/// where `basis[k]` is the k-th measured state on the d×d joint space and
/// `labels[k] = (a_k, b_k)` names the local product state that should flag
/// outcome k.
///
/// Measuring both sites in their computational bases after U reproduces the
/// statistics of the rank-one measurement {|φ_k⟩⟨φ_k|} on any input.
pub fn proposal2_unitary(
    basis: &[Vec<Complex64>],
    labels: &[(usize, usize)],
    d: usize,
) -> Result<ComplexMatrix, MeasureError> {
    let dim = d * d;
    if basis.len() != dim || labels.len() != dim {
        return Err(MeasureError::Dimension(basis.len(), dim));
    }
    if basis.iter().any(|v| v.len() != dim) {
        return Err(MeasureError::Dimension(basis[0].len(), dim));
    }
    let mut gram_dev: f64 = 0.0;
    for (i, u) in basis.iter().enumerate() {
        for (j, v) in basis.iter().enumerate() {
            let overlap: Complex64 = u.iter().zip(v).map(|(x, y)| x.conj() * y).sum();
            let expect = if i == j { C_ONE } else { C_ZERO };
            gram_dev = gram_dev.max((overlap - expect).norm());
        }
    }
    if gram_dev > 1e-10 {
        return Err(MeasureError::NotOrthonormal(gram_dev));
    }
    let mut seen = vec![false; dim];
    for &(a, b) in labels {
        if a >= d || b >= d || seen[a * d + b] {
            return Err(MeasureError::BadLabels);
        }
        seen[a * d + b] = true;
    }
    let mut u = ComplexMatrix::zeros(dim, dim);
    for (k, phi) in basis.iter().enumerate() {
        let row = labels[k].0 * d + labels[k].1;
        for (c, amp) in phi.iter().enumerate() {
            let v = u.get(row, c) + amp.conj();
            u.set(row, c, v);
        }
    }
    debug_assert!(u.is_unitary(1e-9));
    Ok(u)
}

/// Outcome statistics of the rank-one route: apply U, then measure the
/// local product basis.
pub fn proposal2_statistics(
    u: &ComplexMatrix,
    labels: &[(usize, usize)],
    d: usize,
    input: &[Complex64],
) -> Vec<f64> {
    let rotated = u.mul_vec(input);
    labels.iter().map(|&(a, b)| rotated[a * d + b].norm_sqr()).collect()
}

/// The ancilla-indexed unitary of the arbitrary-rank route:
/// U = Σ_j S_{0j} ⊗ P_j on an M-level ancilla times the measured system,
/// where S_{0j} swaps ancilla levels 0 and j. Self-inverse by construction.
pub fn proposal3_unitary(spec: &MeasurementSpec) -> Result<ComplexMatrix, MeasureError> {
    let m = spec.outcomes();
    let d = spec.dim();
    let mut u = ComplexMatrix::zeros(m * d, m * d);
    for (j, p) in spec.projectors().iter().enumerate() {
        // S_{0j} on the ancilla.
        let mut swap = ComplexMatrix::identity(m);
        if j != 0 {
            swap.set(0, 0, C_ZERO);
            swap.set(j, j, C_ZERO);
            swap.set(0, j, C_ONE);
            swap.set(j, 0, C_ONE);
        }
        u = u.add(&kron(&swap, p));
    }
    let unitary_dev = u.dagger().mul(&u).sub(&ComplexMatrix::identity(m * d)).max_norm();
    if unitary_dev > 1e-12 {
        return Err(MeasureError::NotComplete(unitary_dev));
    }
    Ok(u)
}

/// Run the ancilla route end to end on a density matrix: prepare the
/// ancilla in its first basis state, apply U, measure the ancilla. Returns
/// (probability, post-state on the system) per outcome.
pub fn proposal3_measure(
    spec: &MeasurementSpec,
    rho: &ComplexMatrix,
) -> Result<Vec<(f64, Option<ComplexMatrix>)>, MeasureError> {
    let m = spec.outcomes();
    let d = spec.dim();
    if rho.rows() != d {
        return Err(MeasureError::Dimension(rho.rows(), d));
    }
    let u = proposal3_unitary(spec)?;
    let mut anc0 = ComplexMatrix::zeros(m, m);
    anc0.set(0, 0, C_ONE);
    let joint = kron(&anc0, rho);
    let evolved = u.mul(&joint).mul(&u.dagger());

    let layout = SubsystemLayout::new(vec![m, d], vec!["anc".into(), "sys".into()])
        .expect("two labelled subsystems");
    let mut out = Vec::with_capacity(m);
    for j in 0..m {
        let mut proj = ComplexMatrix::zeros(m, m);
        proj.set(j, j, C_ONE);
        let measured = embed_operator(&proj, &layout, &["anc"])?;
        let conditioned = measured.mul(&evolved).mul(&measured);
        let prob = conditioned.trace().re.max(0.0);
        if prob > 1e-14 {
            let system = partial_trace(&conditioned, &layout, &["sys"])?;
            out.push((prob, Some(system.scale(Complex64::new(1.0 / prob, 0.0)))));
        } else {
            out.push((prob, None));
        }
    }
    Ok(out)
}

/// The two-qubit parity measurement: P₁ = |00⟩⟨00| + |11⟩⟨11| and its
/// complement.
pub fn parity_spec() -> MeasurementSpec {
    let mut even = ComplexMatrix::zeros(4, 4);
    even.set(0, 0, C_ONE);
    even.set(3, 3, C_ONE);
    let odd = ComplexMatrix::identity(4).sub(&even);
    MeasurementSpec::new(vec![even, odd]).expect("parity projectors are valid")
}

/// Result of the one-ebit parity demonstration.
#[derive(Clone, Debug)]
pub struct ParityDemo {
    /// Minimum partial-transpose eigenvalue of the separable input.
    pub input_pt_min_eig: f64,
    /// Per outcome: probability, post-state on the two qubits, and its
    /// entropy of entanglement.
    pub outcomes: Vec<(f64, MultiState, f64)>,
}

/// Measure the parity of the separable mixture ½(Φ⁺⟨Φ⁺| + Ψ⁺⟨Ψ⁺|): either
/// outcome projects onto a maximally entangled state, creating one ebit.
pub fn parity_ebit_demo() -> Result<ParityDemo, MeasureError> {
    let phi = bell_state(BellIndex { i1: 1, i2: 1 });
    let psi = bell_state(BellIndex { i1: 1, i2: 2 });
    let layout = SubsystemLayout::new(vec![2, 2], vec!["A".into(), "B".into()])
        .expect("two qubits");
    let rho = phi
        .to_density()
        .scale(Complex64::new(0.5, 0.0))
        .add(&psi.to_density().scale(Complex64::new(0.5, 0.0)));

    let pt = partial_transpose(&rho, &layout, &["B"])?;
    let input_pt_min_eig = *herm_eig(&pt)?.eigenvalues.last().expect("non-empty");

    let spec = parity_spec();
    let mut outcomes = Vec::new();
    for (prob, post) in proposal3_measure(&spec, &rho)? {
        let post = post.expect("both parity outcomes occur with probability 1/2");
        let reduced = partial_trace(&post, &layout, &["A"])?;
        let entropy = von_neumann_entropy(&reduced)?;
        outcomes.push((prob, MultiState::density_unchecked(post, layout.clone()), entropy));
    }
    Ok(ParityDemo { input_pt_min_eig, outcomes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::duality::haar_random_unitary;
    use crate::qobjects::{basis_state, named_gate, plain_bell_amplitudes};
    use crate::rng::seeded;

    #[test]
    fn proposal1_costs() {
        assert_eq!(proposal1_cost(2, MeasurementMode::OutcomeOnly), 1.0);
        assert_eq!(proposal1_cost(2, MeasurementMode::WithPostState), 2.0);
        assert_eq!(proposal1_cost(4, MeasurementMode::WithPostState), 4.0);
    }

    fn computational_basis(dim: usize) -> Vec<Vec<Complex64>> {
        (0..dim).map(|k| basis_state(dim, k)).collect()
    }

    #[test]
    fn proposal2_identity_and_swap_labels() {
        let basis = computational_basis(4);
        let identity_labels = [(0, 0), (0, 1), (1, 0), (1, 1)];
        let u = proposal2_unitary(&basis, &identity_labels, 2).unwrap();
        assert_eq!(u, ComplexMatrix::identity(4));

        let crossed_labels = [(0, 0), (1, 0), (0, 1), (1, 1)];
        let u = proposal2_unitary(&basis, &crossed_labels, 2).unwrap();
        assert_eq!(u, named_gate("swap").unwrap());
    }

    #[test]
    fn proposal2_rejects_bad_inputs() {
        let mut basis = computational_basis(4);
        basis[1] = basis[0].clone();
        assert!(matches!(
            proposal2_unitary(&basis, &[(0, 0), (0, 1), (1, 0), (1, 1)], 2),
            Err(MeasureError::NotOrthonormal(_))
        ));
        let basis = computational_basis(4);
        assert!(matches!(
            proposal2_unitary(&basis, &[(0, 0), (0, 0), (1, 0), (1, 1)], 2),
            Err(MeasureError::BadLabels)
        ));
    }

    #[test]
    fn proposal2_bell_measurement_statistics() {
        // Oracle: Born-rule comparison against direct projections.
        let bells = plain_bell_amplitudes();
        let basis: Vec<Vec<Complex64>> = bells.to_vec();
        let labels = [(0, 0), (0, 1), (1, 0), (1, 1)];
        let u = proposal2_unitary(&basis, &labels, 2).unwrap();
        let mut rng = seeded(81);
        for _ in 0..25 {
            let random = haar_random_unitary(4, &mut rng);
            let input = random.mul_vec(&basis_state(4, 0));
            let via = proposal2_statistics(&u, &labels, 2, &input);
            for (k, phi) in basis.iter().enumerate() {
                let overlap: Complex64 = phi.iter().zip(&input).map(|(a, b)| a.conj() * b).sum();
                assert!((via[k] - overlap.norm_sqr()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn proposal3_trivial_measurement_is_identity_on_system() {
        let spec = MeasurementSpec::new(vec![ComplexMatrix::identity(4)]).unwrap();
        let u = proposal3_unitary(&spec).unwrap();
        assert!(u.sub(&ComplexMatrix::identity(4)).max_norm() < 1e-14);
    }

    #[test]
    fn proposal3_is_self_inverse() {
        let spec = parity_spec();
        let u = proposal3_unitary(&spec).unwrap();
        assert!(u.mul(&u).sub(&ComplexMatrix::identity(8)).max_norm() < 1e-12);
    }

    #[test]
    fn proposal3_parity_on_plus_plus() {
        // Oracle: direct Born rule on |++⟩.
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let plus = vec![Complex64::new(h, 0.0); 2];
        let amps = crate::linalg::kron_vec(&[&plus, &plus]);
        let rho = ComplexMatrix::outer(&amps, &amps);
        let outcomes = proposal3_measure(&parity_spec(), &rho).unwrap();
        assert!((outcomes[0].0 - 0.5).abs() < 1e-12);
        assert!((outcomes[1].0 - 0.5).abs() < 1e-12);
    }

    #[test]
    fn proposal3_supports_rank_deficient_outcomes() {
        let mut p1 = ComplexMatrix::zeros(4, 4);
        p1.set(0, 0, C_ONE);
        let p2 = ComplexMatrix::identity(4).sub(&p1);
        let spec = MeasurementSpec::new(vec![p1.clone(), p2.clone()]).unwrap();
        assert_eq!(spec.ranks(), &[1, 3]);
        let mut rng = seeded(82);
        let random = haar_random_unitary(4, &mut rng);
        let input = random.mul_vec(&basis_state(4, 0));
        let rho = ComplexMatrix::outer(&input, &input);
        let outcomes = proposal3_measure(&spec, &rho).unwrap();
        for ((prob, post), p) in outcomes.iter().zip([&p1, &p2]) {
            let expect_p = p.mul(&rho).trace().re;
            assert!((prob - expect_p).abs() < 1e-12);
            let expect_post = p.mul(&rho).mul(p).scale(Complex64::new(1.0 / expect_p, 0.0));
            assert!(post.as_ref().unwrap().sub(&expect_post).max_norm() < 1e-12);
        }
    }

    #[test]
    fn proposal2_and_proposal3_statistics_agree_for_rank_one_specs() {
        // Fifty random (measurement, input) pairs: the probability tables
        // of the two routes must agree to 1e-12.
        let mut rng = seeded(83);
        for _ in 0..10 {
            let basis_unitary = haar_random_unitary(4, &mut rng);
            let basis: Vec<Vec<Complex64>> = (0..4)
                .map(|k| (0..4).map(|i| basis_unitary.get(i, k)).collect())
                .collect();
            let labels = [(0, 0), (0, 1), (1, 0), (1, 1)];
            let u2 = proposal2_unitary(&basis, &labels, 2).unwrap();
            let projectors: Vec<ComplexMatrix> =
                basis.iter().map(|v| ComplexMatrix::outer(v, v)).collect();
            let spec = MeasurementSpec::new(projectors).unwrap();

            for _ in 0..5 {
                let input_unitary = haar_random_unitary(4, &mut rng);
                let input = input_unitary.mul_vec(&basis_state(4, 0));
                let rho = ComplexMatrix::outer(&input, &input);

                let via2 = proposal2_statistics(&u2, &labels, 2, &input);
                let via3 = proposal3_measure(&spec, &rho).unwrap();
                for (a, (b, _)) in via2.iter().zip(&via3) {
                    assert!((a - b).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn parity_demo_creates_one_ebit_from_separable_input() {
        let demo = parity_ebit_demo().unwrap();
        assert!(demo.input_pt_min_eig >= -1e-12, "input must be PPT");
        assert_eq!(demo.outcomes.len(), 2);
        let phi = bell_state(BellIndex { i1: 1, i2: 1 });
        let psi = bell_state(BellIndex { i1: 1, i2: 2 });
        for ((prob, post, entropy), bell) in demo.outcomes.iter().zip([phi, psi]) {
            assert!((prob - 0.5).abs() < 1e-12);
            assert!(post.to_density().sub(&bell.to_density()).max_norm() < 1e-12);
            assert!((entropy - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn measurement_spec_validation_and_json() {
        let spec = parity_spec();
        let json = spec.to_json();
        let parsed = MeasurementSpec::from_json(&json).unwrap();
        assert_eq!(json, parsed.to_json());
        assert_eq!(parsed.ranks(), &[2, 2]);

        let bad = ComplexMatrix::diag(&[0.5, 0.0, 0.0, 0.0]);
        assert!(matches!(
            MeasurementSpec::new(vec![bad.clone(), ComplexMatrix::identity(4).sub(&bad)]),
            Err(MeasureError::NotIdempotent(_, _))
        ));
        let p = ComplexMatrix::diag(&[1.0, 0.0, 0.0, 0.0]);
        assert!(matches!(
            MeasurementSpec::new(vec![p.clone(), p]),
            Err(MeasureError::NotOrthogonal(_, _, _)) | Err(MeasureError::NotComplete(_))
        ));
    }
}
