//! Dense complex linear algebra for small Hilbert spaces.
//!
//! Everything in this crate runs on explicit row-major [`ComplexMatrix`]
//! values sized for Hilbert-space dimensions up to a few dozen, so all
//! algorithms here favour exactness and simplicity over asymptotic speed.
//! The Hermitian eigensolver is a cyclic Jacobi iteration, which at these
//! sizes is both fast enough and accurate to near machine precision.
//!
//! Multipartite structure is described by a [`SubsystemLayout`]: an ordered
//! list of local dimensions with one label per subsystem. The index
//! convention is fixed once, globally, as big-endian — the *first* subsystem
//! in a layout is the most significant tensor index, so `kron(a, b)` places
//! `a`'s indices first. Partial trace, partial transpose and operator
//! embedding all rely on this single convention.

use num_complex::Complex64;
use std::f64::consts::PI;
use std::fmt;
use thiserror::Error;

/// Complex zero.
pub const C_ZERO: Complex64 = Complex64::new(0.0, 0.0);
/// Complex one.
pub const C_ONE: Complex64 = Complex64::new(1.0, 0.0);
/// The imaginary unit.
pub const C_I: Complex64 = Complex64::new(0.0, 1.0);

/// Errors from the linear-algebra layer.
#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("matrix shape mismatch: {0}x{1} vs {2}x{3}")]
    ShapeMismatch(usize, usize, usize, usize),

    #[error("matrix is not square: {0}x{1}")]
    NotSquare(usize, usize),

    #[error("entry count {0} does not match {1}x{2}")]
    BadEntryCount(usize, usize, usize),

    #[error("matrix is not Hermitian (deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("layout dimension {0} does not match matrix dimension {1}")]
    LayoutMismatch(usize, usize),

    #[error("unknown subsystem label `{0}`")]
    UnknownLabel(String),

    #[error("layout has {0} dims but {1} labels")]
    BadLayout(usize, usize),

    #[error("subsystem dimensions must be positive")]
    ZeroDimension,

    #[error("eigenvalue {0:.3e} below the positive-semidefinite tolerance")]
    NegativeEigenvalue(f64),

    #[error("trace {0:.12} deviates from 1 beyond tolerance")]
    TraceDeviation(f64),

    #[error("argument {0} outside [0, 1]")]
    OutOfRange(f64),
}

/// Dense complex matrix in row-major order.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self.get(i, j);
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl ComplexMatrix {
    /// Build a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::BadEntryCount(data.len(), rows, cols));
        }
        Ok(Self { rows, cols, data })
    }

    /// All-zero matrix.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![C_ZERO; rows * cols] }
    }

    /// Identity matrix.
    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m.set(i, i, C_ONE);
        }
        m
    }

    /// Build from a function of the index pair.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Square diagonal matrix from real entries.
    pub fn diag(entries: &[f64]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &x) in entries.iter().enumerate() {
            m.set(i, i, Complex64::new(x, 0.0));
        }
        m
    }

    /// Outer product |u⟩⟨v|.
    pub fn outer(u: &[Complex64], v: &[Complex64]) -> Self {
        Self::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, z: Complex64) {
        self.data[i * self.cols + j] = z;
    }

    /// Row-major entry slice.
    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    /// Plain transpose.
    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    /// Entry-wise complex conjugate.
    pub fn conj(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j).conj())
    }

    pub fn trace(&self) -> Complex64 {
        debug_assert!(self.is_square());
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    pub fn scale(&self, z: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&w| w * z).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in add");
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in sub");
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| a - b).collect(),
        }
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimension mismatch in mul");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == C_ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Matrix–vector product.
    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len(), "vector length mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    /// Largest entry magnitude.
    pub fn max_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Hermiticity deviation: the largest |m(i,j) − conj(m(j,i))|.
    pub fn hermiticity_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                dev = dev.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.hermiticity_deviation() <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        let res = self.dagger().mul(self).sub(&Self::identity(self.rows));
        res.max_norm() <= tol
    }

    pub fn is_positive_semidefinite(&self, tol: f64) -> bool {
        if !self.is_hermitian(tol.max(1e-10)) {
            return false;
        }
        match herm_eig(self) {
            Ok(eig) => eig.eigenvalues.iter().all(|&l| l >= -tol),
            Err(_) => false,
        }
    }

    /// Determinant by LU elimination with partial pivoting.
    pub fn determinant(&self) -> Complex64 {
        assert!(self.is_square(), "determinant of non-square matrix");
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = C_ONE;
        for col in 0..n {
            let (mut pivot, mut pmag) = (col, a[col * n + col].norm());
            for r in col + 1..n {
                let mag = a[r * n + col].norm();
                if mag > pmag {
                    pivot = r;
                    pmag = mag;
                }
            }
            if pmag == 0.0 {
                return C_ZERO;
            }
            if pivot != col {
                for j in 0..n {
                    a.swap(col * n + j, pivot * n + j);
                }
                det = -det;
            }
            let p = a[col * n + col];
            det *= p;
            for r in col + 1..n {
                let f = a[r * n + col] / p;
                for j in col..n {
                    let v = a[col * n + j];
                    a[r * n + j] -= f * v;
                }
            }
        }
        det
    }
}

/// Kronecker product; `a`'s indices are the most significant.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(a.rows() * b.rows(), a.cols() * b.cols());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let z = a.get(i, j);
            if z == C_ZERO {
                continue;
            }
            for k in 0..b.rows() {
                for l in 0..b.cols() {
                    out.set(i * b.rows() + k, j * b.cols() + l, z * b.get(k, l));
                }
            }
        }
    }
    out
}

/// Kronecker product of a list of vectors, first factor most significant.
pub fn kron_vec(factors: &[&[Complex64]]) -> Vec<Complex64> {
    let mut out = vec![C_ONE];
    for f in factors {
        let mut next = Vec::with_capacity(out.len() * f.len());
        for &a in &out {
            for &b in f.iter() {
                next.push(a * b);
            }
        }
        out = next;
    }
    out
}

/// Ordered subsystem structure: local dimensions plus one label per factor.
///
/// The first subsystem is the most significant tensor index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsystemLayout {
    dims: Vec<usize>,
    labels: Vec<String>,
}

impl SubsystemLayout {
    pub fn new(dims: Vec<usize>, labels: Vec<String>) -> Result<Self, LinalgError> {
        if dims.len() != labels.len() {
            return Err(LinalgError::BadLayout(dims.len(), labels.len()));
        }
        if dims.contains(&0) {
            return Err(LinalgError::ZeroDimension);
        }
        Ok(Self { dims, labels })
    }

    /// `n` qubits labelled `q0, q1, …`.
    pub fn qubits(n: usize) -> Self {
        Self {
            dims: vec![2; n],
            labels: (0..n).map(|i| format!("q{i}")).collect(),
        }
    }

    /// One `d`-level system per party, labelled `A, B, …`.
    pub fn parties(n: usize, d: usize) -> Self {
        Self {
            dims: vec![d; n],
            labels: (0..n).map(party_letter).collect(),
        }
    }

    /// Two `d`-level systems per party, labelled `A1, A2, B1, B2, …`.
    ///
    /// This is the layout of every operator–state dual in this crate: the
    /// `…1` subsystems are the halves a channel acts on, the `…2` subsystems
    /// the retained halves of the local maximally entangled pairs.
    pub fn pair_layout(parties: usize, d: usize) -> Self {
        let mut labels = Vec::with_capacity(2 * parties);
        for p in 0..parties {
            labels.push(format!("{}1", party_letter(p)));
            labels.push(format!("{}2", party_letter(p)));
        }
        Self { dims: vec![d; 2 * parties], labels }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    /// Positions of the given labels, in the order given.
    pub fn positions(&self, labels: &[&str]) -> Result<Vec<usize>, LinalgError> {
        labels
            .iter()
            .map(|l| {
                self.labels
                    .iter()
                    .position(|have| have == l)
                    .ok_or_else(|| LinalgError::UnknownLabel((*l).to_string()))
            })
            .collect()
    }

    /// Layout restricted to the given positions, in the order given.
    pub fn restrict(&self, positions: &[usize]) -> Self {
        Self {
            dims: positions.iter().map(|&p| self.dims[p]).collect(),
            labels: positions.iter().map(|&p| self.labels[p].clone()).collect(),
        }
    }

    /// Check that the layout matches a square matrix dimension.
    pub fn check_matches(&self, m: &ComplexMatrix) -> Result<(), LinalgError> {
        if !m.is_square() {
            return Err(LinalgError::NotSquare(m.rows(), m.cols()));
        }
        if self.total_dim() != m.rows() {
            return Err(LinalgError::LayoutMismatch(self.total_dim(), m.rows()));
        }
        Ok(())
    }

    /// Big-endian strides of each subsystem.
    pub fn strides(&self) -> Vec<usize> {
        let n = self.dims.len();
        let mut s = vec![1usize; n];
        for i in (0..n.saturating_sub(1)).rev() {
            s[i] = s[i + 1] * self.dims[i + 1];
        }
        s
    }

    /// Decompose a flat index into per-subsystem indices.
    pub fn decompose(&self, mut index: usize) -> Vec<usize> {
        let strides = self.strides();
        let mut out = Vec::with_capacity(self.dims.len());
        for s in strides {
            out.push(index / s);
            index %= s;
        }
        out
    }

    /// Compose per-subsystem indices into a flat index.
    pub fn compose(&self, parts: &[usize]) -> usize {
        let strides = self.strides();
        parts.iter().zip(strides).map(|(&p, s)| p * s).sum()
    }
}

fn party_letter(p: usize) -> String {
    let letter = (b'A' + (p % 26) as u8) as char;
    if p < 26 {
        letter.to_string()
    } else {
        format!("{letter}{}", p / 26)
    }
}

/// Trace out every subsystem not named in `keep`; the result is ordered as
/// the kept labels appear in `keep`.
pub fn partial_trace(
    m: &ComplexMatrix,
    layout: &SubsystemLayout,
    keep: &[&str],
) -> Result<ComplexMatrix, LinalgError> {
    layout.check_matches(m)?;
    let keep_pos = layout.positions(keep)?;
    let mut traced_pos: Vec<usize> = (0..layout.len()).filter(|p| !keep_pos.contains(p)).collect();
    traced_pos.sort_unstable();

    let keep_layout = layout.restrict(&keep_pos);
    let traced_layout = layout.restrict(&traced_pos);
    let dk = keep_layout.total_dim();
    let dt = traced_layout.total_dim();
    let strides = layout.strides();

    let mut out = ComplexMatrix::zeros(dk, dk);
    for rk in 0..dk {
        let rk_parts = keep_layout.decompose(rk);
        for ck in 0..dk {
            let ck_parts = keep_layout.decompose(ck);
            let mut acc = C_ZERO;
            for t in 0..dt {
                let t_parts = traced_layout.decompose(t);
                let mut row = 0usize;
                let mut col = 0usize;
                for (i, &pos) in keep_pos.iter().enumerate() {
                    row += rk_parts[i] * strides[pos];
                    col += ck_parts[i] * strides[pos];
                }
                for (i, &pos) in traced_pos.iter().enumerate() {
                    row += t_parts[i] * strides[pos];
                    col += t_parts[i] * strides[pos];
                }
                acc += m.get(row, col);
            }
            out.set(rk, ck, acc);
        }
    }
    Ok(out)
}

/// Transpose the indices of the named subsystems, leaving the rest alone.
pub fn partial_transpose(
    m: &ComplexMatrix,
    layout: &SubsystemLayout,
    party: &[&str],
) -> Result<ComplexMatrix, LinalgError> {
    layout.check_matches(m)?;
    let flip = layout.positions(party)?;
    let d = layout.total_dim();
    let mut out = ComplexMatrix::zeros(d, d);
    for r in 0..d {
        let r_parts = layout.decompose(r);
        for c in 0..d {
            let c_parts = layout.decompose(c);
            let mut rp = r_parts.clone();
            let mut cp = c_parts.clone();
            for &pos in &flip {
                rp[pos] = c_parts[pos];
                cp[pos] = r_parts[pos];
            }
            out.set(layout.compose(&rp), layout.compose(&cp), m.get(r, c));
        }
    }
    Ok(out)
}

/// Embed an operator acting on the named target subsystems (in the order
/// given) into the full space, acting as identity elsewhere.
pub fn embed_operator(
    op: &ComplexMatrix,
    layout: &SubsystemLayout,
    targets: &[&str],
) -> Result<ComplexMatrix, LinalgError> {
    let target_pos = layout.positions(targets)?;
    let target_layout = layout.restrict(&target_pos);
    if !op.is_square() || op.rows() != target_layout.total_dim() {
        return Err(LinalgError::LayoutMismatch(target_layout.total_dim(), op.rows()));
    }
    let d = layout.total_dim();
    let dt = target_layout.total_dim();
    let strides = layout.strides();
    let mut out = ComplexMatrix::zeros(d, d);
    for r in 0..d {
        let r_parts = layout.decompose(r);
        let rt = target_layout
            .compose(&target_pos.iter().map(|&p| r_parts[p]).collect::<Vec<_>>());
        let rest: usize = (0..layout.len())
            .filter(|p| !target_pos.contains(p))
            .map(|p| r_parts[p] * strides[p])
            .sum();
        for ct in 0..dt {
            let z = op.get(rt, ct);
            if z == C_ZERO {
                continue;
            }
            let ct_parts = target_layout.decompose(ct);
            let mut c = rest;
            for (i, &pos) in target_pos.iter().enumerate() {
                c += ct_parts[i] * strides[pos];
            }
            out.set(r, c, z);
        }
    }
    Ok(out)
}

/// Eigendecomposition of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermEig {
    /// Eigenvalues in descending order.
    pub eigenvalues: Vec<f64>,
    /// Eigenvectors as columns, matching the eigenvalue order.
    pub eigenvectors: ComplexMatrix,
}

impl HermEig {
    /// The eigenvector for the k-th eigenvalue.
    pub fn eigenvector(&self, k: usize) -> Vec<Complex64> {
        (0..self.eigenvectors.rows()).map(|i| self.eigenvectors.get(i, k)).collect()
    }
}

/// Cyclic Jacobi diagonalisation of a Hermitian matrix.
///
/// Sweeps until the off-diagonal Frobenius mass drops below `1e-14` relative
/// to the matrix scale. Input must be Hermitian within `1e-10`.
pub fn herm_eig(m: &ComplexMatrix) -> Result<HermEig, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare(m.rows(), m.cols()));
    }
    let dev = m.hermiticity_deviation();
    if dev > 1e-10 {
        return Err(LinalgError::NotHermitian(dev));
    }
    let n = m.rows();
    let mut a = m.clone();
    // Symmetrise away sub-tolerance asymmetry so the iteration sees an
    // exactly Hermitian matrix.
    for i in 0..n {
        a.set(i, i, Complex64::new(a.get(i, i).re, 0.0));
        for j in i + 1..n {
            let avg = (a.get(i, j) + a.get(j, i).conj()) * Complex64::new(0.5, 0.0);
            a.set(i, j, avg);
            a.set(j, i, avg.conj());
        }
    }
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm().max(1.0);

    for _sweep in 0..100 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in p + 1..n {
                off += 2.0 * a.get(p, q).norm_sqr();
            }
        }
        if off.sqrt() <= 1e-14 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a.get(p, q);
                let mag = apq.norm();
                if mag <= 1e-300 {
                    continue;
                }
                // Component-wise division; complex division would square
                // `mag` and can underflow for near-zero pivots.
                let phase = apq.unscale(mag);
                let app = a.get(p, p).re;
                let aqq = a.get(q, q).re;
                let tau = (aqq - app) / (2.0 * mag);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = Complex64::new(1.0 / (1.0 + t * t).sqrt(), 0.0);
                let jpq = phase * Complex64::new(t, 0.0) * c;

                // Columns p and q of A·J, then rows of J†·A, then V·J.
                for k in 0..n {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, akp * c - akq * jpq.conj());
                    a.set(k, q, akp * jpq + akq * c);
                }
                for k in 0..n {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, apk * c - aqk * jpq);
                    a.set(q, k, apk * jpq.conj() + aqk * c);
                }
                for k in 0..n {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, vkp * c - vkq * jpq.conj());
                    v.set(k, q, vkp * jpq + vkq * c);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a.get(i, i).re).collect();
    order.sort_by(|&i, &j| diag[j].partial_cmp(&diag[i]).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, j| v.get(i, order[j]));
    Ok(HermEig { eigenvalues, eigenvectors })
}

/// Von Neumann entropy −Σ λ log₂ λ in qubits, with 0·log₂0 = 0.
///
/// Requires a positive-semidefinite unit-trace input: eigenvalues below
/// −1e-8 and trace deviations beyond 1e-8 are rejected; eigenvalues in the
/// numerical-noise band just below zero are clipped to zero.
pub fn von_neumann_entropy(rho: &ComplexMatrix) -> Result<f64, LinalgError> {
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > 1e-8 || tr.im.abs() > 1e-8 {
        return Err(LinalgError::TraceDeviation(tr.re));
    }
    let eig = herm_eig(rho)?;
    let mut s = 0.0;
    for &l in &eig.eigenvalues {
        if l < -1e-8 {
            return Err(LinalgError::NegativeEigenvalue(l));
        }
        if l > 0.0 {
            s -= l * l.log2();
        }
    }
    Ok(s.max(0.0))
}

/// Binary entropy H(x) = −x log₂x − (1−x) log₂(1−x).
pub fn binary_entropy(x: f64) -> Result<f64, LinalgError> {
    if !(-1e-12..=1.0 + 1e-12).contains(&x) {
        return Err(LinalgError::OutOfRange(x));
    }
    let x = x.clamp(0.0, 1.0);
    let mut h = 0.0;
    if x > 0.0 {
        h -= x * x.log2();
    }
    if x < 1.0 {
        // log2(1−x) via ln_1p keeps precision for small x.
        h -= (1.0 - x) * (-x).ln_1p() / std::f64::consts::LN_2;
    }
    Ok(h.max(0.0))
}

/// Max-norm distance between two same-shape matrices, optionally minimised
/// over a global phase on `b`.
///
/// With the phase flag set this evaluates min_θ ‖a − e^{iθ}b‖_max by testing
/// the Frobenius-optimal phase arg tr(b†a) and refining a coarse grid scan.
/// When `a` and `b` actually agree up to a phase the Frobenius candidate is
/// the exact minimiser, so the result lands at numerical zero.
pub fn operator_distance(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    up_to_global_phase: bool,
) -> Result<f64, LinalgError> {
    if (a.rows(), a.cols()) != (b.rows(), b.cols()) {
        return Err(LinalgError::ShapeMismatch(a.rows(), a.cols(), b.rows(), b.cols()));
    }
    let dist_at = |theta: f64| -> f64 {
        let ph = Complex64::from_polar(1.0, theta);
        a.data
            .iter()
            .zip(&b.data)
            .map(|(&x, &y)| (x - ph * y).norm())
            .fold(0.0, f64::max)
    };
    if !up_to_global_phase {
        return Ok(dist_at(0.0));
    }

    let overlap: Complex64 = b.data.iter().zip(&a.data).map(|(&y, &x)| y.conj() * x).sum();
    let mut best = f64::INFINITY;
    if overlap.norm() > 1e-300 {
        best = dist_at(overlap.arg());
    }

    let grid = 1024usize;
    let mut best_theta = 0.0;
    let mut best_grid = f64::INFINITY;
    for k in 0..grid {
        let theta = 2.0 * PI * k as f64 / grid as f64;
        let d = dist_at(theta);
        if d < best_grid {
            best_grid = d;
            best_theta = theta;
        }
    }
    let (mut lo, mut hi) =
        (best_theta - 2.0 * PI / grid as f64, best_theta + 2.0 * PI / grid as f64);
    for _ in 0..90 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if dist_at(m1) <= dist_at(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    best = best.min(dist_at(0.5 * (lo + hi))).min(best_grid);
    Ok(best)
}
