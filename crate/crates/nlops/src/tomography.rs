//! Process tomography of unknown channels from local expectation values.
//!
//! The dual state of a two-qubit channel lives on two four-level parties
//! (one qubit pair each). Expanding it in a Hilbert–Schmidt orthonormal
//! basis of self-adjoint operators, E = Σ λ_ij A_i⊗B_j with
//! λ_ij = tr((A_i⊗B_j)·E), reduces channel identification to measuring the
//! local observables A_i and B_j on fresh copies and correlating outcomes
//! classically. Exact coefficients reproduce the channel to machine
//! precision; finite-shot estimates converge at the usual 1/√S rate and are
//! repaired back into the physical cone (eigenvalue clipping plus trace
//! renormalisation) before a Kraus decomposition is read off.

use crate::duality::{choi_of_channel, spanning_density_states, DualityError};
use crate::linalg::{herm_eig, kron, ComplexMatrix, LinalgError, SubsystemLayout};
use crate::qobjects::{pauli, BellIndex, Channel, MultiState, StateError};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Binomial, Distribution};
use thiserror::Error;

/// Errors from the tomography layer.
#[derive(Debug, Error)]
pub enum TomographyError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),

    #[error(transparent)]
    State(#[from] StateError),

    #[error(transparent)]
    Duality(#[from] DualityError),

    #[error("operator basis is only defined for party dimension 4, got {0}")]
    UnsupportedDimension(usize),

    #[error("state has dimension {0}, expected 16")]
    WrongStateDimension(usize),

    #[error("shot count must be at least 1")]
    NoShots,
}

/// One self-adjoint basis element with its spectral data.
#[derive(Clone, Debug)]
pub struct BasisOperator {
    /// Two-letter Pauli label, e.g. `IX` or `ZY`.
    pub label: String,
    pub matrix: ComplexMatrix,
    /// Eigenvalues, descending.
    pub eigenvalues: Vec<f64>,
    /// Eigenvectors as columns, matching the eigenvalue order.
    pub eigenvectors: ComplexMatrix,
}

/// The sixteen normalised Pauli products σ_{i₁,i₂}⊗σ_{i₃,i₄}/2 on one
/// four-level party, Hilbert–Schmidt orthonormal: tr(B_a B_b) = δ_ab.
pub fn operator_basis(party_dim: usize) -> Result<Vec<BasisOperator>, TomographyError> {
    if party_dim != 4 {
        return Err(TomographyError::UnsupportedDimension(party_dim));
    }
    let letter = |idx: BellIndex| match (idx.i1, idx.i2) {
        (1, 1) => 'I',
        (1, 2) => 'X',
        (2, 1) => 'Y',
        _ => 'Z',
    };
    let mut out = Vec::with_capacity(16);
    for first in BellIndex::all() {
        for second in BellIndex::all() {
            let matrix =
                kron(&pauli(first), &pauli(second)).scale(Complex64::new(0.5, 0.0));
            let eig = herm_eig(&matrix)?;
            out.push(BasisOperator {
                label: format!("{}{}", letter(first), letter(second)),
                matrix,
                eigenvalues: eig.eigenvalues,
                eigenvectors: eig.eigenvectors,
            });
        }
    }
    Ok(out)
}

/// Result of one tomography pass: the coefficient table, its statistical
/// errors (zero in exact mode), and the reconstructed dual state.
#[derive(Clone, Debug)]
pub struct TomographyRecord {
    /// Basis labels shared by rows (party A) and columns (party B).
    pub labels: Vec<String>,
    /// λ_ij = tr((A_i⊗B_j)·E), row-major 16×16.
    pub coefficients: Vec<Vec<f64>>,
    /// Standard error per coefficient; zeros in exact mode.
    pub stderr: Vec<Vec<f64>>,
    /// Shots per observable, or `None` for exact expectations.
    pub shots: Option<u64>,
    /// Σ λ_ij A_i⊗B_j on the pair layout, before any positivity repair.
    pub reconstructed: MultiState,
}

fn resum(
    basis: &[BasisOperator],
    coefficients: &[Vec<f64>],
) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(16, 16);
    for (i, a) in basis.iter().enumerate() {
        for (j, b) in basis.iter().enumerate() {
            let lambda = coefficients[i][j];
            if lambda == 0.0 {
                continue;
            }
            out = out.add(&kron(&a.matrix, &b.matrix).scale(Complex64::new(lambda, 0.0)));
        }
    }
    out
}

fn record_from(
    coefficients: Vec<Vec<f64>>,
    stderr: Vec<Vec<f64>>,
    shots: Option<u64>,
    basis: &[BasisOperator],
) -> TomographyRecord {
    let reconstructed = resum(basis, &coefficients);
    TomographyRecord {
        labels: basis.iter().map(|b| b.label.clone()).collect(),
        coefficients,
        stderr,
        shots,
        reconstructed: MultiState::density_unchecked(
            reconstructed,
            SubsystemLayout::pair_layout(2, 2),
        ),
    }
}

/// Exact expansion coefficients λ_ij = tr((A_i⊗B_j)·E) of a dual state on
/// two four-level parties. Resumming them reproduces the state exactly.
pub fn coefficients_exact(e: &MultiState) -> Result<TomographyRecord, TomographyError> {
    if e.dim() != 16 {
        return Err(TomographyError::WrongStateDimension(e.dim()));
    }
    let basis = operator_basis(4)?;
    let rho = e.to_density();
    let mut coefficients = vec![vec![0.0; 16]; 16];
    for (i, a) in basis.iter().enumerate() {
        for (j, b) in basis.iter().enumerate() {
            coefficients[i][j] = kron(&a.matrix, &b.matrix).mul(&rho).trace().re;
        }
    }
    let stderr = vec![vec![0.0; 16]; 16];
    Ok(record_from(coefficients, stderr, None, &basis))
}

/// Estimate the coefficients from `shots` Born-rule samples per observable
/// pair: each copy is measured locally in the eigenbases of A_i and B_j and
/// the eigenvalue product is averaged.
///
/// Sampling draws the multinomial outcome counts of the exact joint
/// distribution, which is distributed identically to per-shot sampling.
pub fn coefficients_sampled(
    e: &MultiState,
    shots: u64,
    rng: &mut impl Rng,
) -> Result<TomographyRecord, TomographyError> {
    if shots == 0 {
        return Err(TomographyError::NoShots);
    }
    if e.dim() != 16 {
        return Err(TomographyError::WrongStateDimension(e.dim()));
    }
    let basis = operator_basis(4)?;
    let rho = e.to_density();
    let mut coefficients = vec![vec![0.0; 16]; 16];
    let mut stderr = vec![vec![0.0; 16]; 16];
    for (i, a) in basis.iter().enumerate() {
        for (j, b) in basis.iter().enumerate() {
            // Joint Born distribution over eigenvector pairs (m, n).
            let mut cells: Vec<(f64, f64)> = Vec::with_capacity(16);
            for m in 0..4 {
                for n in 0..4 {
                    let vm = a.eigenvector_column(m);
                    let wn = b.eigenvector_column(n);
                    let joint = crate::linalg::kron_vec(&[&vm, &wn]);
                    let mut p = 0.0;
                    for (r, zr) in joint.iter().enumerate() {
                        for (c, zc) in joint.iter().enumerate() {
                            p += (zr.conj() * rho.get(r, c) * zc).re;
                        }
                    }
                    cells.push((p.max(0.0), a.eigenvalues[m] * b.eigenvalues[n]));
                }
            }
            let total: f64 = cells.iter().map(|(p, _)| p).sum();
            // Multinomial counts via chained binomials.
            let mut remaining = shots;
            let mut mass_left = total;
            let mut mean = 0.0;
            let mut sq = 0.0;
            for (p, value) in &cells {
                if remaining == 0 {
                    break;
                }
                let cond = if mass_left > 0.0 { (p / mass_left).clamp(0.0, 1.0) } else { 0.0 };
                let count = if cond >= 1.0 {
                    remaining
                } else {
                    Binomial::new(remaining, cond).expect("valid binomial").sample(rng)
                };
                mean += count as f64 * value;
                sq += count as f64 * value * value;
                remaining -= count;
                mass_left -= p;
            }
            let s = shots as f64;
            mean /= s;
            let var = ((sq / s) - mean * mean).max(0.0) * s / (s - 1.0).max(1.0);
            coefficients[i][j] = mean;
            stderr[i][j] = (var / s).sqrt();
        }
    }
    Ok(record_from(coefficients, stderr, Some(shots), &basis))
}

impl BasisOperator {
    fn eigenvector_column(&self, k: usize) -> Vec<Complex64> {
        (0..self.eigenvectors.rows()).map(|i| self.eigenvectors.get(i, k)).collect()
    }
}

/// A channel reconstructed from tomography, with its repair diagnostics.
#[derive(Clone, Debug)]
pub struct ChannelEstimate {
    pub channel: Channel,
    /// Max-norm deviation of Σ K†K from identity.
    pub tp_deviation: f64,
    /// Whether eigenvalue clipping had to repair the reconstruction.
    pub repaired: bool,
    /// Total negative eigenvalue mass removed by the repair.
    pub clipped_mass: f64,
    pub record: TomographyRecord,
}

/// Complete process tomography of a two-qubit channel: prepare its dual
/// state, expand it in the local operator basis (exactly or from finite
/// statistics), repair the estimate into the physical cone, and read off a
/// Kraus decomposition.
pub fn channel_tomography(
    c: &Channel,
    shots: Option<u64>,
    rng: &mut impl Rng,
) -> Result<ChannelEstimate, TomographyError> {
    let e = choi_of_channel(c, 2)?;
    let record = match shots {
        None => coefficients_exact(&e)?,
        Some(s) => coefficients_sampled(&e, s, rng)?,
    };
    estimate_from_record(record)
}

/// Build the channel estimate from an existing coefficient record.
pub fn estimate_from_record(
    record: TomographyRecord,
) -> Result<ChannelEstimate, TomographyError> {
    let raw = record.reconstructed.to_density();
    // Positivity repair: clip negative eigenvalues, renormalise the trace.
    let eig = herm_eig(&raw)?;
    let clipped_mass: f64 =
        eig.eigenvalues.iter().filter(|&&l| l < 0.0).map(|l| -l).sum();
    let repaired = clipped_mass > 1e-12;
    let kept: Vec<f64> = eig.eigenvalues.iter().map(|&l| l.max(0.0)).collect();
    let norm: f64 = kept.iter().sum();
    let kept: Vec<f64> = kept.iter().map(|l| l / norm).collect();

    // Regroup (A1 A2 B1 B2) into (outputs; inputs) = ((A1,B1),(A2,B2)) and
    // read Kraus operators off the spectral decomposition.
    let layout = SubsystemLayout::pair_layout(2, 2);
    let perm_index = |flat: usize| -> (usize, usize) {
        let parts = layout.decompose(flat);
        let out = parts[0] * 2 + parts[2];
        let inp = parts[1] * 2 + parts[3];
        (out, inp)
    };
    let mut kraus = Vec::new();
    for (k, &lk) in kept.iter().enumerate() {
        if lk <= 1e-12 {
            continue;
        }
        let v = eig.eigenvector(k);
        let mut op = ComplexMatrix::zeros(4, 4);
        for (flat, &amp) in v.iter().enumerate() {
            let (out, inp) = perm_index(flat);
            op.set(out, inp, amp);
        }
        // √(λ·D) scaling makes Σ K†K ≈ 1 for a trace-preserving source.
        kraus.push(op.scale(Complex64::new((lk * 4.0).sqrt(), 0.0)));
    }
    let probe = Channel::with_tolerance(kraus.clone(), 4, 4, 2, f64::INFINITY)?;
    let tp_deviation = probe.trace_preservation_deviation();
    Ok(ChannelEstimate {
        channel: probe,
        tp_deviation,
        repaired,
        clipped_mass,
        record,
    })
}

/// Largest action difference between two channels over the spanning input
/// set.
pub fn action_residual(a: &Channel, b: &Channel) -> f64 {
    let mut worst: f64 = 0.0;
    for rho in spanning_density_states(a.dim_in()) {
        worst = worst.max(a.apply(&rho).sub(&b.apply(&rho)).max_norm());
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qobjects::{depolarize, named_gate, phase_gate};
    use crate::rng::seeded;
    use std::f64::consts::PI;

    #[test]
    fn basis_contains_normalised_identity_and_is_orthonormal() {
        let basis = operator_basis(4).unwrap();
        assert_eq!(basis.len(), 16);
        assert_eq!(basis[0].label, "II");
        let half_id = ComplexMatrix::identity(4).scale(Complex64::new(0.5, 0.0));
        assert!(basis[0].matrix.sub(&half_id).max_norm() < 1e-14);
        // Oracle: full 16×16 Gram matrix of Hilbert–Schmidt inner products.
        for (i, a) in basis.iter().enumerate() {
            for (j, b) in basis.iter().enumerate() {
                let gram = a.matrix.mul(&b.matrix).trace().re;
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((gram - expect).abs() < 1e-12, "gram({i},{j}) = {gram}");
            }
        }
        assert!(operator_basis(3).is_err());
    }

    #[test]
    fn basis_expansion_recombines_projector() {
        // Oracle: project-and-sum on a rank-one matrix.
        let basis = operator_basis(4).unwrap();
        let m = ComplexMatrix::diag(&[1.0, 0.0, 0.0, 0.0]);
        let mut rebuilt = ComplexMatrix::zeros(4, 4);
        for b in &basis {
            let coeff = b.matrix.mul(&m).trace().re;
            rebuilt = rebuilt.add(&b.matrix.scale(Complex64::new(coeff, 0.0)));
        }
        assert!(rebuilt.sub(&m).max_norm() < 1e-12);
    }

    #[test]
    fn exact_coefficients_of_maximally_mixed_state() {
        let e = MultiState::density(
            ComplexMatrix::identity(16).scale(Complex64::new(1.0 / 16.0, 0.0)),
            SubsystemLayout::pair_layout(2, 2),
        )
        .unwrap();
        let record = coefficients_exact(&e).unwrap();
        for i in 0..16 {
            for j in 0..16 {
                let expect = if i == 0 && j == 0 { 0.25 } else { 0.0 };
                assert!(
                    (record.coefficients[i][j] - expect).abs() < 1e-12,
                    "λ({i},{j}) = {}",
                    record.coefficients[i][j]
                );
            }
        }
    }

    #[test]
    fn exact_resummation_reproduces_cnot_dual() {
        let c = Channel::unitary(&named_gate("cnot").unwrap(), 2).unwrap();
        let e = choi_of_channel(&c, 2).unwrap();
        let record = coefficients_exact(&e).unwrap();
        assert!(record.reconstructed.density_distance(&e) < 1e-12);
    }

    #[test]
    fn exact_resummation_is_identity_on_random_hermitian_expansions() {
        use rand::Rng as _;
        let mut rng = seeded(61);
        let basis = operator_basis(4).unwrap();
        // Random Hermitian built in the basis, then expanded back.
        let mut target = ComplexMatrix::zeros(16, 16);
        let mut coeffs = vec![vec![0.0; 16]; 16];
        for i in 0..16 {
            for j in 0..16 {
                let x: f64 = rng.gen_range(-1.0..1.0);
                coeffs[i][j] = x;
                target = target
                    .add(&kron(&basis[i].matrix, &basis[j].matrix).scale(Complex64::new(x, 0.0)));
            }
        }
        for (i, a) in basis.iter().enumerate() {
            for (j, b) in basis.iter().enumerate() {
                let lambda = kron(&a.matrix, &b.matrix).mul(&target).trace().re;
                assert!((lambda - coeffs[i][j]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn exact_tomography_matches_phase_gate_action() {
        let mut rng = seeded(62);
        let c = Channel::unitary(&phase_gate(PI / 8.0), 2).unwrap();
        let estimate = channel_tomography(&c, None, &mut rng).unwrap();
        assert!(estimate.tp_deviation < 1e-10);
        assert!(!estimate.repaired);
        assert!(action_residual(&c, &estimate.channel) < 1e-10);
    }

    #[test]
    fn exact_tomography_of_identity_and_noisy_channels() {
        let mut rng = seeded(63);
        let id = Channel::unitary(&ComplexMatrix::identity(4), 2).unwrap();
        let estimate = channel_tomography(&id, None, &mut rng).unwrap();
        assert!(action_residual(&id, &estimate.channel) < 1e-10);

        let noisy = depolarize(&phase_gate(PI / 8.0), 0.7).unwrap();
        let estimate = channel_tomography(&noisy, None, &mut rng).unwrap();
        assert!(action_residual(&noisy, &estimate.channel) < 1e-10);
    }

    #[test]
    fn sampled_coefficients_concentrate_on_exact_values() {
        let mut rng = seeded(64);
        let c = Channel::unitary(&named_gate("cnot").unwrap(), 2).unwrap();
        let e = choi_of_channel(&c, 2).unwrap();
        let exact = coefficients_exact(&e).unwrap();
        let shots = 100_000u64;
        let sampled = coefficients_sampled(&e, shots, &mut rng).unwrap();
        let bound = 5.0 / (shots as f64).sqrt();
        let mut worst: f64 = 0.0;
        for i in 0..16 {
            for j in 0..16 {
                worst = worst
                    .max((sampled.coefficients[i][j] - exact.coefficients[i][j]).abs());
            }
        }
        assert!(worst < bound, "worst deviation {worst} vs bound {bound}");
    }

    #[test]
    fn sampled_reconstruction_improves_with_shots() {
        // Monotone trend of the median action residual over three shot
        // budgets, nine repetitions each.
        let c = depolarize(&phase_gate(PI / 8.0), 0.7).unwrap();
        let mut medians = Vec::new();
        for (case, shots) in [(0u64, 100u64), (1, 1000), (2, 10_000)] {
            let mut residuals: Vec<f64> = (0..9)
                .map(|rep| {
                    let mut rng = crate::rng::substream(900 + case, rep);
                    let est = channel_tomography(&c, Some(shots), &mut rng).unwrap();
                    action_residual(&c, &est.channel)
                })
                .collect();
            residuals.sort_by(|a, b| a.partial_cmp(b).unwrap());
            medians.push(residuals[4]);
        }
        assert!(
            medians[0] > medians[1] && medians[1] > medians[2],
            "medians {medians:?}"
        );
    }

    #[test]
    fn sampled_tomography_repairs_and_reports() {
        let mut rng = seeded(65);
        let c = depolarize(&named_gate("cnot").unwrap(), 0.5).unwrap();
        let est = channel_tomography(&c, Some(2000), &mut rng).unwrap();
        // Finite statistics leave the cone; the repair must be visible, the
        // estimate close.
        assert!(est.repaired);
        assert!(est.clipped_mass > 0.0);
        assert!(est.tp_deviation < 0.2);
        assert!(action_residual(&c, &est.channel) < 0.2);
    }

    #[test]
    fn sampled_coefficients_are_unbiased() {
        // Mean over 100 independent runs within four standard errors of the
        // exact value, for every coefficient.
        let c = Channel::unitary(&phase_gate(PI / 8.0), 2).unwrap();
        let e = choi_of_channel(&c, 2).unwrap();
        let exact = coefficients_exact(&e).unwrap();
        let runs = 100usize;
        let shots = 1000u64;
        let mut sums = vec![vec![0.0f64; 16]; 16];
        let mut sq = vec![vec![0.0f64; 16]; 16];
        for rep in 0..runs {
            let mut rng = crate::rng::substream(6400, rep as u64);
            let sampled = coefficients_sampled(&e, shots, &mut rng).unwrap();
            for i in 0..16 {
                for j in 0..16 {
                    let x = sampled.coefficients[i][j];
                    sums[i][j] += x;
                    sq[i][j] += x * x;
                }
            }
        }
        for i in 0..16 {
            for j in 0..16 {
                let mean = sums[i][j] / runs as f64;
                let var = (sq[i][j] / runs as f64 - mean * mean).max(0.0);
                let se = (var / runs as f64).sqrt().max(1e-12);
                let dev = (mean - exact.coefficients[i][j]).abs();
                assert!(dev <= 4.0 * se, "λ({i},{j}): mean {mean} vs {} (se {se})", exact.coefficients[i][j]);
            }
        }
    }

    #[test]
    fn stderr_scales_inversely_with_sqrt_shots() {
        let c = Channel::unitary(&named_gate("cnot").unwrap(), 2).unwrap();
        let e = choi_of_channel(&c, 2).unwrap();
        let mut rng = seeded(66);
        let small = coefficients_sampled(&e, 100, &mut rng).unwrap();
        let big = coefficients_sampled(&e, 10_000, &mut rng).unwrap();
        let avg = |r: &TomographyRecord| {
            r.stderr.iter().flatten().sum::<f64>() / 256.0
        };
        let ratio = avg(&small) / avg(&big);
        assert!((ratio - 10.0).abs() < 2.0, "ratio {ratio}");
    }
}
