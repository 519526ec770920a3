//! Named states, bases, gates, noise models and channels.
//!
//! The Bell basis here is deliberately redundant: the four states are indexed
//! by a pair (i₁, i₂) ∈ {1,2}² and defined as |Ψ_{i₁,i₂}⟩ = (1 ⊗ σ_{i₁,i₂})|Φ⁺⟩
//! with σ_{1,1} = 1, σ_{1,2} = σx, σ_{2,1} = σy, σ_{2,2} = σz. This puts a
//! phase i on the singlet (|Ψ_{2,1}⟩ = i|Ψ⁻⟩) and in exchange makes every
//! teleportation correction exactly the Pauli `pauli(idx)` with no
//! case analysis.

use crate::linalg::{
    kron, kron_vec, partial_trace, von_neumann_entropy, ComplexMatrix, LinalgError,
    SubsystemLayout, C_I, C_ONE, C_ZERO,
};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_1_SQRT_2;
use thiserror::Error;

/// Errors from state, gate and channel construction.
#[derive(Debug, Error)]
pub enum StateError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),

    #[error("local dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),

    #[error("need at least {0} parties, got {1}")]
    TooFewParties(usize, usize),

    #[error("state is not normalised: norm² = {0}")]
    NotNormalised(f64),

    #[error("density matrix is not positive semidefinite (min eigenvalue {0:.3e})")]
    NotPositive(f64),

    #[error("density matrix trace {0} is not 1")]
    BadTrace(f64),

    #[error("expected a pure state")]
    NotPure,

    #[error("probability {0} outside [0, 1]")]
    BadProbability(f64),

    #[error("matrix is not unitary")]
    NotUnitary,

    #[error("unknown gate name `{0}`")]
    UnknownGate(String),

    #[error("channel needs at least one Kraus operator")]
    EmptyChannel,

    #[error("Kraus operators do not resolve the identity (deviation {0:.3e})")]
    NotTracePreserving(f64),

    #[error("Kraus operator shape {0}x{1} does not match dims ({2}, {3})")]
    KrausShape(usize, usize, usize, usize),

    #[error("invalid channel JSON: {0}")]
    Json(String),
}

/// Index (i₁, i₂) ∈ {1,2}² into the redundant Bell basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BellIndex {
    pub i1: u8,
    pub i2: u8,
}

impl BellIndex {
    pub fn new(i1: u8, i2: u8) -> Option<Self> {
        if (1..=2).contains(&i1) && (1..=2).contains(&i2) {
            Some(Self { i1, i2 })
        } else {
            None
        }
    }

    /// All four indices in the fixed order (1,1), (1,2), (2,1), (2,2).
    pub fn all() -> [BellIndex; 4] {
        [
            BellIndex { i1: 1, i2: 1 },
            BellIndex { i1: 1, i2: 2 },
            BellIndex { i1: 2, i2: 1 },
            BellIndex { i1: 2, i2: 2 },
        ]
    }

    /// Flat index 0..4 in the order of [`BellIndex::all`].
    pub fn flat(&self) -> usize {
        ((self.i1 - 1) * 2 + (self.i2 - 1)) as usize
    }

    pub fn from_flat(k: usize) -> Self {
        Self::all()[k]
    }
}

/// Pure amplitudes or a density matrix, tagged with its subsystem layout.
#[derive(Clone, Debug)]
pub enum StateData {
    Pure(Vec<Complex64>),
    Density(ComplexMatrix),
}

/// A quantum state over an ordered list of labelled subsystems.
#[derive(Clone, Debug)]
pub struct MultiState {
    data: StateData,
    layout: SubsystemLayout,
}

impl MultiState {
    /// A pure state from amplitudes; must be normalised within 1e-10.
    pub fn pure(amplitudes: Vec<Complex64>, layout: SubsystemLayout) -> Result<Self, StateError> {
        if amplitudes.len() != layout.total_dim() {
            return Err(LinalgError::LayoutMismatch(layout.total_dim(), amplitudes.len()).into());
        }
        let norm2: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm2 - 1.0).abs() > 1e-10 {
            return Err(StateError::NotNormalised(norm2));
        }
        Ok(Self { data: StateData::Pure(amplitudes), layout })
    }

    /// A density matrix; must be positive semidefinite with unit trace
    /// within 1e-10.
    pub fn density(matrix: ComplexMatrix, layout: SubsystemLayout) -> Result<Self, StateError> {
        layout.check_matches(&matrix)?;
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
            return Err(StateError::BadTrace(tr.re));
        }
        let eig = crate::linalg::herm_eig(&matrix)?;
        let min = eig.eigenvalues.last().copied().unwrap_or(0.0);
        if min < -1e-10 {
            return Err(StateError::NotPositive(min));
        }
        Ok(Self { data: StateData::Density(matrix), layout })
    }

    /// Density construction without the positivity scan, for internal states
    /// that are valid by construction (normalised measurement branches).
    pub(crate) fn density_unchecked(matrix: ComplexMatrix, layout: SubsystemLayout) -> Self {
        debug_assert!(layout.check_matches(&matrix).is_ok());
        Self { data: StateData::Density(matrix), layout }
    }

    pub(crate) fn pure_unchecked(amplitudes: Vec<Complex64>, layout: SubsystemLayout) -> Self {
        debug_assert_eq!(amplitudes.len(), layout.total_dim());
        Self { data: StateData::Pure(amplitudes), layout }
    }

    pub fn is_pure(&self) -> bool {
        matches!(self.data, StateData::Pure(_))
    }

    pub fn layout(&self) -> &SubsystemLayout {
        &self.layout
    }

    pub fn dim(&self) -> usize {
        self.layout.total_dim()
    }

    /// Pure amplitudes, if this state is stored as a vector.
    pub fn amplitudes(&self) -> Option<&[Complex64]> {
        match &self.data {
            StateData::Pure(v) => Some(v),
            StateData::Density(_) => None,
        }
    }

    /// The state as a density matrix (projector for pure states).
    pub fn to_density(&self) -> ComplexMatrix {
        match &self.data {
            StateData::Pure(v) => ComplexMatrix::outer(v, v),
            StateData::Density(m) => m.clone(),
        }
    }

    /// Reduced density matrix on the named subsystems.
    pub fn reduced(&self, keep: &[&str]) -> Result<ComplexMatrix, StateError> {
        Ok(partial_trace(&self.to_density(), &self.layout, keep)?)
    }

    /// Overlap ⟨self|other⟩ for two pure states.
    pub fn overlap(&self, other: &MultiState) -> Result<Complex64, StateError> {
        let a = self.amplitudes().ok_or(StateError::NotPure)?;
        let b = other.amplitudes().ok_or(StateError::NotPure)?;
        if a.len() != b.len() {
            return Err(LinalgError::LayoutMismatch(a.len(), b.len()).into());
        }
        Ok(a.iter().zip(b).map(|(x, y)| x.conj() * y).sum())
    }

    /// Max-norm distance between density representations.
    pub fn density_distance(&self, other: &MultiState) -> f64 {
        self.to_density().sub(&other.to_density()).max_norm()
    }
}

/// Maximally entangled state (1/√d) Σ|i⟩|i⟩ on two d-level subsystems.
pub fn mes(d: usize) -> Result<MultiState, StateError> {
    if d < 2 {
        return Err(StateError::DimensionTooSmall(d));
    }
    let mut amps = vec![C_ZERO; d * d];
    let w = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
    for i in 0..d {
        amps[i * d + i] = w;
    }
    let layout = SubsystemLayout::pair_layout(1, d);
    MultiState::pure(amps, layout)
}

/// The 2×2 Pauli matrix σ_{i₁,i₂}: identity, σx, σy, σz.
pub fn pauli(idx: BellIndex) -> ComplexMatrix {
    let entries = match (idx.i1, idx.i2) {
        (1, 1) => vec![C_ONE, C_ZERO, C_ZERO, C_ONE],
        (1, 2) => vec![C_ZERO, C_ONE, C_ONE, C_ZERO],
        (2, 1) => vec![C_ZERO, -C_I, C_I, C_ZERO],
        (2, 2) => vec![C_ONE, C_ZERO, C_ZERO, -C_ONE],
        _ => unreachable!("BellIndex is validated on construction"),
    };
    ComplexMatrix::new(2, 2, entries).unwrap()
}

/// Bell state |Ψ_{i₁,i₂}⟩ = (1 ⊗ σ_{i₁,i₂})|Φ⁺⟩ on a qubit pair.
pub fn bell_state(idx: BellIndex) -> MultiState {
    let phi = mes(2).expect("d = 2 is always valid");
    let amps = phi.amplitudes().unwrap();
    let sigma = pauli(idx);
    // (1 ⊗ σ) acts on the second qubit: amplitude blocks of the first index.
    let mut out = vec![C_ZERO; 4];
    for a in 0..2 {
        for b in 0..2 {
            for bp in 0..2 {
                out[a * 2 + b] += sigma.get(b, bp) * amps[a * 2 + bp];
            }
        }
    }
    MultiState::pure_unchecked(out, phi.layout().clone())
}

/// σx.
pub fn sigma_x() -> ComplexMatrix {
    pauli(BellIndex { i1: 1, i2: 2 })
}

/// σy.
pub fn sigma_y() -> ComplexMatrix {
    pauli(BellIndex { i1: 2, i2: 1 })
}

/// σz.
pub fn sigma_z() -> ComplexMatrix {
    pauli(BellIndex { i1: 2, i2: 2 })
}

/// All 4^N N-qubit Pauli products, first qubit most significant.
pub fn pauli_group(n: usize) -> Vec<ComplexMatrix> {
    let singles: Vec<ComplexMatrix> = BellIndex::all().iter().map(|&i| pauli(i)).collect();
    let mut out = vec![ComplexMatrix::identity(1)];
    for _ in 0..n {
        let mut next = Vec::with_capacity(out.len() * 4);
        for m in &out {
            for s in &singles {
                next.push(kron(m, s));
            }
        }
        out = next;
    }
    out
}

/// Two-qubit phase gate exp(−iα σx⊗σx) = cos α·1 − i sin α·σx⊗σx.
pub fn phase_gate(alpha: f64) -> ComplexMatrix {
    let xx = kron(&pauli(BellIndex { i1: 1, i2: 2 }), &pauli(BellIndex { i1: 1, i2: 2 }));
    let id = ComplexMatrix::identity(4);
    id.scale(Complex64::new(alpha.cos(), 0.0))
        .add(&xx.scale(Complex64::new(0.0, -alpha.sin())))
}

/// N-qubit phase gate exp(−iα σx⊗…⊗σx).
pub fn phase_gate_n(alpha: f64, parties: usize) -> ComplexMatrix {
    let x = pauli(BellIndex { i1: 1, i2: 2 });
    let mut xs = ComplexMatrix::identity(1);
    for _ in 0..parties {
        xs = kron(&xs, &x);
    }
    let id = ComplexMatrix::identity(1 << parties);
    id.scale(Complex64::new(alpha.cos(), 0.0)).add(&xs.scale(Complex64::new(0.0, -alpha.sin())))
}

/// The dual state of the N-party phase gate:
/// cos α·|Φ⁺⟩^⊗N − i sin α·|Ψ⁺⟩^⊗N on N qubit pairs (A1 A2 B1 B2 …).
pub fn psi_alpha(alpha: f64, parties: usize) -> Result<MultiState, StateError> {
    if parties < 2 {
        return Err(StateError::TooFewParties(2, parties));
    }
    let phi = bell_state(BellIndex { i1: 1, i2: 1 });
    let psi = bell_state(BellIndex { i1: 1, i2: 2 });
    let phis: Vec<&[Complex64]> = (0..parties).map(|_| phi.amplitudes().unwrap()).collect();
    let psis: Vec<&[Complex64]> = (0..parties).map(|_| psi.amplitudes().unwrap()).collect();
    let phi_n = kron_vec(&phis);
    let psi_n = kron_vec(&psis);
    let c = Complex64::new(alpha.cos(), 0.0);
    let ms = Complex64::new(0.0, -alpha.sin());
    let amps: Vec<Complex64> =
        phi_n.iter().zip(&psi_n).map(|(&a, &b)| c * a + ms * b).collect();
    let layout = SubsystemLayout::pair_layout(parties, 2);
    MultiState::pure(amps, layout)
}

/// Entropy of entanglement of a pure state across the given cut, in ebits.
///
/// `cut` names the subsystems on one side; the entropy of the reduced state
/// on that side equals the entropy on the complementary side.
pub fn entanglement_entropy(state: &MultiState, cut: &[&str]) -> Result<f64, StateError> {
    if !state.is_pure() {
        return Err(StateError::NotPure);
    }
    let reduced = state.reduced(cut)?;
    Ok(von_neumann_entropy(&reduced)?)
}

/// Standard named two-qubit gates.
pub fn named_gate(name: &str) -> Result<ComplexMatrix, StateError> {
    match name.to_ascii_lowercase().as_str() {
        "identity" | "id" => Ok(ComplexMatrix::identity(4)),
        "cnot" => {
            let mut m = ComplexMatrix::zeros(4, 4);
            m.set(0, 0, C_ONE);
            m.set(1, 1, C_ONE);
            m.set(2, 3, C_ONE);
            m.set(3, 2, C_ONE);
            Ok(m)
        }
        "swap" => {
            let mut m = ComplexMatrix::zeros(4, 4);
            m.set(0, 0, C_ONE);
            m.set(1, 2, C_ONE);
            m.set(2, 1, C_ONE);
            m.set(3, 3, C_ONE);
            Ok(m)
        }
        other => Err(StateError::UnknownGate(other.to_string())),
    }
}

/// A completely positive trace-preserving map in Kraus form.
#[derive(Clone, Debug)]
pub struct Channel {
    kraus: Vec<ComplexMatrix>,
    dim_in: usize,
    dim_out: usize,
    parties: usize,
}

impl Channel {
    /// Build a channel, checking Σ K†K = 1 within 1e-10.
    pub fn new(
        kraus: Vec<ComplexMatrix>,
        dim_in: usize,
        dim_out: usize,
        parties: usize,
    ) -> Result<Self, StateError> {
        Self::with_tolerance(kraus, dim_in, dim_out, parties, 1e-10)
    }

    /// Build a channel with an explicit trace-preservation tolerance.
    ///
    /// Reconstructions from finite statistics are not exactly trace
    /// preserving; they use a loose tolerance and report the deviation.
    pub fn with_tolerance(
        kraus: Vec<ComplexMatrix>,
        dim_in: usize,
        dim_out: usize,
        parties: usize,
        tol: f64,
    ) -> Result<Self, StateError> {
        if kraus.is_empty() {
            return Err(StateError::EmptyChannel);
        }
        for k in &kraus {
            if k.rows() != dim_out || k.cols() != dim_in {
                return Err(StateError::KrausShape(k.rows(), k.cols(), dim_out, dim_in));
            }
        }
        let channel = Self { kraus, dim_in, dim_out, parties };
        let dev = channel.trace_preservation_deviation();
        if dev > tol {
            return Err(StateError::NotTracePreserving(dev));
        }
        Ok(channel)
    }

    /// The unitary channel ρ ↦ UρU†.
    pub fn unitary(u: &ComplexMatrix, parties: usize) -> Result<Self, StateError> {
        if !u.is_unitary(1e-10) {
            return Err(StateError::NotUnitary);
        }
        Self::new(vec![u.clone()], u.cols(), u.rows(), parties)
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn parties(&self) -> usize {
        self.parties
    }

    /// Max-norm deviation of Σ K†K from the identity.
    pub fn trace_preservation_deviation(&self) -> f64 {
        let mut acc = ComplexMatrix::zeros(self.dim_in, self.dim_in);
        for k in &self.kraus {
            acc = acc.add(&k.dagger().mul(k));
        }
        acc.sub(&ComplexMatrix::identity(self.dim_in)).max_norm()
    }

    /// Apply the channel to a density matrix.
    pub fn apply(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim_out, self.dim_out);
        for k in &self.kraus {
            out = out.add(&k.mul(rho).mul(&k.dagger()));
        }
        out
    }

    /// Serialise to the interchange JSON format.
    pub fn to_json(&self) -> String {
        let dto = ChannelJson {
            dims: [self.dim_in, self.dim_out],
            parties: self.parties,
            kraus: self
                .kraus
                .iter()
                .map(|k| {
                    (0..k.rows())
                        .map(|i| {
                            (0..k.cols()).map(|j| [k.get(i, j).re, k.get(i, j).im]).collect()
                        })
                        .collect()
                })
                .collect(),
        };
        serde_json::to_string(&dto).expect("channel serialisation cannot fail")
    }

    /// Parse the interchange JSON format.
    pub fn from_json(s: &str) -> Result<Self, StateError> {
        let dto: ChannelJson = serde_json::from_str(s).map_err(|e| StateError::Json(e.to_string()))?;
        let kraus = dto
            .kraus
            .iter()
            .map(|rows| {
                let r = rows.len();
                let c = rows.first().map_or(0, Vec::len);
                if rows.iter().any(|row| row.len() != c) {
                    return Err(StateError::Json("ragged Kraus matrix".into()));
                }
                let data = rows
                    .iter()
                    .flat_map(|row| row.iter().map(|e| Complex64::new(e[0], e[1])))
                    .collect();
                ComplexMatrix::new(r, c, data).map_err(StateError::from)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(kraus, dto.dims[0], dto.dims[1], dto.parties)
    }
}

#[derive(Serialize, Deserialize)]
struct ChannelJson {
    dims: [usize; 2],
    parties: usize,
    kraus: Vec<Vec<Vec<[f64; 2]>>>,
}

/// Depolarising noise around a unitary: ρ ↦ q·UρU† + (1−q)·1/2^N.
///
/// Realised with the Kraus set {√q · U} ∪ {√((1−q)/4^N) · P·U} over all 4^N
/// Pauli products P, whose uniform twirl maps any state to the maximally
/// mixed one.
pub fn depolarize(u: &ComplexMatrix, q: f64) -> Result<Channel, StateError> {
    if !(0.0..=1.0).contains(&q) {
        return Err(StateError::BadProbability(q));
    }
    if !u.is_unitary(1e-10) {
        return Err(StateError::NotUnitary);
    }
    let dim = u.rows();
    let n = dim.trailing_zeros() as usize;
    assert_eq!(1 << n, dim, "depolarize expects qubit systems");
    let mut kraus = Vec::new();
    if q > 0.0 {
        kraus.push(u.scale(Complex64::new(q.sqrt(), 0.0)));
    }
    if q < 1.0 {
        let w = Complex64::new(((1.0 - q) / (4.0f64).powi(n as i32)).sqrt(), 0.0);
        for p in pauli_group(n) {
            kraus.push(p.mul(u).scale(w));
        }
    }
    Channel::new(kraus, dim, dim, n)
}

/// |0⟩, |1⟩ and friends as amplitude vectors.
pub fn basis_state(dim: usize, index: usize) -> Vec<Complex64> {
    let mut v = vec![C_ZERO; dim];
    v[index] = C_ONE;
    v
}

/// The four Bell amplitudes Φ⁺, Ψ⁺, Φ⁻, Ψ⁻ without the redundant phase.
pub fn plain_bell_amplitudes() -> [Vec<Complex64>; 4] {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    [
        vec![h, C_ZERO, C_ZERO, h],
        vec![C_ZERO, h, h, C_ZERO],
        vec![h, C_ZERO, C_ZERO, -h],
        vec![C_ZERO, h, -h, C_ZERO],
    ]
}
