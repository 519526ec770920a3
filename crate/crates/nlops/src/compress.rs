//! Local compression of entangled-state sequences.
//!
//! Both parties of a sequence of states c|00⟩+s|11⟩ (shared Schmidt basis,
//! independent draws) can compress their halves with purely local
//! operations: project onto the band of Hamming weights around the expected
//! zero count, keep the span, and relabel. The retained dimension is
//! 2^{N·S(ρ̃)+O(N^β)} for the averaged reduced operator ρ̃, and the global
//! fidelity of whole sequences tends to one because the binomial weight
//! outside the band vanishes.
//!
//! Everything here runs in the log domain (binomials up to N ≈ 2000
//! overflow long before f64 does) with compensated summation, and the
//! fidelity is accumulated through the *excluded* mass, so values
//! indistinguishable from 1 keep meaningful deficits.

use crate::linalg::LinalgError;
use std::f64::consts::PI;
use thiserror::Error;

/// Errors from the compression calculators.
#[derive(Debug, Error)]
pub enum CompressError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),

    #[error("window parameters must satisfy μ > 1 and 1/2 < β < 1, got μ = {0}, β = {1}")]
    BadWindow(f64, f64),

    #[error("ensemble priors must sum to 1, got {0}")]
    BadPriors(f64),

    #[error("Schmidt pair ({0}, {1}) is not normalised")]
    BadPair(f64, f64),

    #[error("ensemble must contain at least one state")]
    EmptyEnsemble,

    #[error("sequence position {0} exceeds length {1}")]
    BadCount(usize, usize),

    #[error("the exact average fidelity needs the two-state equal-prior ensemble with α₁ = 0")]
    UnsupportedEnsemble,
}

/// A finite ensemble of Schmidt-form signal states c|00⟩+s|11⟩ with priors.
#[derive(Clone, Debug)]
pub struct SignalEnsemble {
    pairs: Vec<(f64, f64)>,
    priors: Vec<f64>,
}

impl SignalEnsemble {
    pub fn new(pairs: Vec<(f64, f64)>, priors: Vec<f64>) -> Result<Self, CompressError> {
        if pairs.is_empty() || pairs.len() != priors.len() {
            return Err(CompressError::EmptyEnsemble);
        }
        for &(c, s) in &pairs {
            if (c * c + s * s - 1.0).abs() > 1e-10 {
                return Err(CompressError::BadPair(c, s));
            }
        }
        let total: f64 = priors.iter().sum();
        if (total - 1.0).abs() > 1e-10 || priors.iter().any(|p| *p < 0.0) {
            return Err(CompressError::BadPriors(total));
        }
        Ok(Self { pairs, priors })
    }

    /// The pedagogical two-state ensemble: |00⟩ and cos α|00⟩+sin α|11⟩,
    /// equal priors.
    pub fn two_state(alpha: f64) -> Self {
        Self {
            pairs: vec![(1.0, 0.0), (alpha.cos(), alpha.sin())],
            priors: vec![0.5, 0.5],
        }
    }

    pub fn pairs(&self) -> &[(f64, f64)] {
        &self.pairs
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    /// Mean zero-population Σ p_i c_i² of the reduced operators.
    pub fn mean_population(&self) -> f64 {
        self.pairs.iter().zip(&self.priors).map(|(&(c, _), &p)| p * c * c).sum()
    }
}

/// Entropy of the prior-weighted average of the reduced operators, in
/// qubits per signal; the asymptotic compression rate.
pub fn ensemble_entropy(e: &SignalEnsemble) -> Result<f64, CompressError> {
    Ok(crate::linalg::binary_entropy(e.mean_population())?)
}

fn check_window(mu: f64, beta: f64) -> Result<(), CompressError> {
    let valid = mu > 1.0 && beta > 0.5 && beta < 1.0;
    if !valid {
        return Err(CompressError::BadWindow(mu, beta));
    }
    Ok(())
}

/// Natural-log factorials 0..=n with compensated accumulation.
fn ln_factorials(n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    out.push(0.0);
    for k in 1..=n {
        // Kahan–Babuška–Neumaier compensation.
        let x = (k as f64).ln();
        let t = sum + x;
        comp += if sum.abs() >= x.abs() { (sum - t) + x } else { (x - t) + sum };
        sum = t;
        out.push(sum + comp);
    }
    out
}

/// ln C(n, k) from a factorial table.
fn ln_binomial(table: &[f64], n: usize, k: usize) -> f64 {
    table[n] - table[k] - table[n - k]
}

/// Log-domain sum of exp(terms): returns ln Σ exp(t_i), or −∞ for none.
fn ln_sum_exp(terms: &[f64]) -> f64 {
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return f64::NEG_INFINITY;
    }
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for &t in terms {
        let x = (t - max).exp();
        let s = sum + x;
        comp += if sum.abs() >= x.abs() { (sum - s) + x } else { (x - s) + sum };
        sum = s;
    }
    max + (sum + comp).ln()
}

/// The retained Hamming-weight band and its dimension.
#[derive(Clone, Debug)]
pub struct TypicalWindow {
    pub k_lo: usize,
    pub k_hi: usize,
    /// log₂ of the retained dimension Σ_k C(N, k).
    pub log2_dim: f64,
    /// Whether the raw band [center−δ, center+δ] was clamped to [0, N].
    pub clamped: bool,
    /// Deterministic signals collapse the band to their single weight.
    pub degenerate: bool,
}

impl TypicalWindow {
    pub fn rate(&self, n: usize) -> f64 {
        self.log2_dim / n as f64
    }

    pub fn contains(&self, weight: usize) -> bool {
        (self.k_lo..=self.k_hi).contains(&weight)
    }
}

/// The typical window for sequences of length `n`:
/// k± = N·Σp_i c_i² ± μN^β, clamped to [0, N].
///
/// A deterministic signal (all states |00⟩ or all |11⟩) has zero weight
/// variance; its band degenerates to the single exact weight and the
/// retained dimension is 1.
pub fn typical_window(
    n: usize,
    e: &SignalEnsemble,
    mu: f64,
    beta: f64,
) -> Result<TypicalWindow, CompressError> {
    check_window(mu, beta)?;
    let population = e.mean_population();
    if population >= 1.0 - 1e-15 || population <= 1e-15 {
        let weight = if population >= 0.5 { n } else { 0 };
        return Ok(TypicalWindow {
            k_lo: weight,
            k_hi: weight,
            log2_dim: 0.0,
            clamped: true,
            degenerate: true,
        });
    }
    let center = n as f64 * population;
    let delta = mu * (n as f64).powf(beta);
    let raw_lo = center - delta;
    let raw_hi = center + delta;
    let k_lo = raw_lo.ceil().max(0.0) as usize;
    let k_hi = raw_hi.floor().min(n as f64) as usize;
    let clamped = raw_lo < 0.0 || raw_hi > n as f64;

    let table = ln_factorials(n);
    let terms: Vec<f64> = (k_lo..=k_hi).map(|k| ln_binomial(&table, n, k)).collect();
    let log2_dim = ln_sum_exp(&terms) / std::f64::consts::LN_2;
    Ok(TypicalWindow { k_lo, k_hi, log2_dim, clamped, degenerate: false })
}

/// Binomial mass of the entangled factors that the window rejects, for a
/// sequence with `j` product states out of `n`: Σ over k outside the band
/// of c^{2k}·s^{2(n−j−k)}·C(n−j, k).
fn excluded_mass(
    j: usize,
    n: usize,
    c2: f64,
    s2: f64,
    window: &TypicalWindow,
    table: &[f64],
) -> f64 {
    let m = n - j;
    let (ln_c2, ln_s2) = (c2.ln(), s2.ln());
    let mut terms = Vec::new();
    for k in 0..=m {
        if window.contains(j + k) {
            continue;
        }
        if c2 == 0.0 && k != 0 {
            continue;
        }
        if s2 == 0.0 && k != m {
            continue;
        }
        let mut t = ln_binomial(table, m, k);
        if k > 0 {
            t += k as f64 * ln_c2;
        }
        if m - k > 0 {
            t += (m - k) as f64 * ln_s2;
        }
        terms.push(t);
    }
    if terms.is_empty() {
        0.0
    } else {
        ln_sum_exp(&terms).exp().min(1.0)
    }
}

/// Global fidelity of one sequence class: a sequence with `j` product
/// states keeps the squared binomial mass the window retains,
/// F_j = (Σ_{k: k⁻ ≤ j+k ≤ k⁺} c^{2k} s^{2(n−j−k)} C(n−j, k))².
///
/// An all-covering window gives exactly 1.
pub fn sequence_fidelity(
    j: usize,
    n: usize,
    alpha: f64,
    window: &TypicalWindow,
) -> Result<f64, CompressError> {
    if j > n {
        return Err(CompressError::BadCount(j, n));
    }
    let c2 = alpha.cos().powi(2);
    let s2 = alpha.sin().powi(2);
    let table = ln_factorials(n);
    let excluded = excluded_mass(j, n, c2, s2, &window.clone(), &table);
    let retained = (1.0 - excluded).max(0.0);
    Ok(retained * retained)
}

/// Deficit 1 − F̄ of the average global fidelity over all sequences of the
/// two-state equal-prior ensemble: Σ_j 2^{−N} C(N,j) · (1 − F_j), with the
/// excluded masses accumulated directly so that deficits far below machine
/// epsilon of 1 remain exact.
pub fn average_fidelity_deficit(
    n: usize,
    e: &SignalEnsemble,
    mu: f64,
    beta: f64,
) -> Result<f64, CompressError> {
    check_window(mu, beta)?;
    if e.pairs.len() != 2
        || (e.priors[0] - 0.5).abs() > 1e-12
        || (e.pairs[0].0 - 1.0).abs() > 1e-12
    {
        return Err(CompressError::UnsupportedEnsemble);
    }
    let (c, s) = e.pairs[1];
    let (c2, s2) = (c * c, s * s);
    if s2 < 1e-300 {
        return Ok(0.0);
    }
    let window = typical_window(n, e, mu, beta)?;
    let table = ln_factorials(n);
    let ln_half = 0.5f64.ln();
    let mut deficit = 0.0f64;
    let mut comp = 0.0f64;
    for j in 0..=n {
        let excl = excluded_mass(j, n, c2, s2, &window, &table);
        if excl == 0.0 {
            continue;
        }
        let ln_weight = ln_binomial(&table, n, j) + n as f64 * ln_half;
        let x = ln_weight.exp() * excl * (2.0 - excl);
        let t = deficit + x;
        comp += if deficit.abs() >= x.abs() { (deficit - t) + x } else { (x - t) + deficit };
        deficit = t;
    }
    Ok((deficit + comp).clamp(0.0, 1.0))
}

/// Average global fidelity F̄ = 1 − deficit.
pub fn average_fidelity(
    n: usize,
    e: &SignalEnsemble,
    mu: f64,
    beta: f64,
) -> Result<f64, CompressError> {
    Ok(1.0 - average_fidelity_deficit(n, e, mu, beta)?)
}

/// The Gaussian lower bound Φ(2μN^{β−1/2}) on the per-sequence fidelity,
/// with Φ the standard normal mass of [−x, x].
pub fn gaussian_bound(n: usize, mu: f64, beta: f64) -> Result<f64, CompressError> {
    check_window(mu, beta)?;
    let x = 2.0 * mu * (n as f64).powf(beta - 0.5);
    Ok(erf(x / std::f64::consts::SQRT_2))
}

/// Error function by Taylor series for small arguments and a Lentz
/// continued fraction for the complement at large ones; accurate to about
/// 1e-14 either way.
pub fn erf(z: f64) -> f64 {
    let a = z.abs();
    let sign = if z < 0.0 { -1.0 } else { 1.0 };
    if a < 3.0 {
        // erf(z) = (2/√π) Σ (−1)^k z^{2k+1} / (k!(2k+1))
        let mut term = a;
        let mut sum = a;
        let z2 = a * a;
        for k in 1..200 {
            term *= -z2 / k as f64;
            let add = term / (2 * k + 1) as f64;
            sum += add;
            if add.abs() < 1e-18 * sum.abs() {
                break;
            }
        }
        sign * (2.0 / PI.sqrt()) * sum
    } else {
        sign * (1.0 - erfc_large(a))
    }
}

fn erfc_large(z: f64) -> f64 {
    // erfc(z) = (e^{−z²}/√π) · 1/(z + (1/2)/(z + 1/(z + (3/2)/(z + …)))),
    // evaluated by the modified Lentz method.
    let z2 = z * z;
    if z2 > 700.0 {
        return 0.0;
    }
    let tiny = 1e-300;
    let mut f = tiny;
    let mut c = f;
    let mut d = 0.0;
    for n in 1..300 {
        let a = if n == 1 { 1.0 } else { (n - 1) as f64 / 2.0 };
        d = z + a * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = z + a / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-17 {
            break;
        }
    }
    f * (-z2).exp() / PI.sqrt()
}

/// One full compression run for reporting.
#[derive(Clone, Debug)]
pub struct CompressionRun {
    pub n: usize,
    pub alpha: f64,
    pub mu: f64,
    pub beta: f64,
    pub k_window: (usize, usize),
    pub log2_dim: f64,
    /// Stored qubits per signal, log2_dim / N.
    pub rate: f64,
    /// Asymptotic rate S(ρ̃).
    pub s_tilde: f64,
    pub avg_fidelity: f64,
    pub avg_fidelity_deficit: f64,
    pub gaussian_bound: f64,
    pub clamped: bool,
}

/// Evaluate the two-state protocol at one sequence length.
pub fn compression_run(
    n: usize,
    alpha: f64,
    mu: f64,
    beta: f64,
) -> Result<CompressionRun, CompressError> {
    let e = SignalEnsemble::two_state(alpha);
    let window = typical_window(n, &e, mu, beta)?;
    let deficit = average_fidelity_deficit(n, &e, mu, beta)?;
    Ok(CompressionRun {
        n,
        alpha,
        mu,
        beta,
        k_window: (window.k_lo, window.k_hi),
        log2_dim: window.log2_dim,
        rate: window.rate(n),
        s_tilde: ensemble_entropy(&e)?,
        avg_fidelity: 1.0 - deficit,
        avg_fidelity_deficit: deficit,
        gaussian_bound: gaussian_bound(n, mu, beta)?,
        clamped: window.clamped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const MU: f64 = 2.0;
    const BETA: f64 = 0.6;

    #[test]
    fn ensemble_validation() {
        assert!(SignalEnsemble::new(vec![(1.0, 0.5)], vec![1.0]).is_err());
        assert!(SignalEnsemble::new(vec![(1.0, 0.0)], vec![0.7]).is_err());
        let e = SignalEnsemble::two_state(PI / 4.0);
        assert!((e.mean_population() - 0.75).abs() < 1e-15);
    }

    #[test]
    fn ensemble_entropy_known_values() {
        // Two states with α = π/4: S = H(3/4).
        let e = SignalEnsemble::two_state(PI / 4.0);
        let s = ensemble_entropy(&e).unwrap();
        assert!((s - 0.8112781244591328).abs() < 1e-12);
        // A single deterministic state has no entropy.
        let single = SignalEnsemble::new(vec![(1.0, 0.0)], vec![1.0]).unwrap();
        assert_eq!(ensemble_entropy(&single).unwrap(), 0.0);
        // General formula: H((1+c²)/2) for the two-state ensemble.
        for alpha in [0.3, 1.0, 1.4] {
            let e = SignalEnsemble::two_state(alpha);
            let expect =
                crate::linalg::binary_entropy((1.0 + alpha.cos().powi(2)) / 2.0).unwrap();
            assert!((ensemble_entropy(&e).unwrap() - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn deterministic_signal_degenerates() {
        let e = SignalEnsemble::new(vec![(1.0, 0.0)], vec![1.0]).unwrap();
        let w = typical_window(100, &e, MU, BETA).unwrap();
        assert!(w.degenerate);
        assert_eq!((w.k_lo, w.k_hi), (100, 100));
        assert_eq!(w.log2_dim, 0.0);
        assert_eq!(w.rate(100), 0.0);
    }

    #[test]
    fn window_rate_brackets_ensemble_entropy() {
        // Oracle: exact log-domain binomial summation.
        let e = SignalEnsemble::two_state(PI / 4.0);
        let s = ensemble_entropy(&e).unwrap();
        for n in [100usize, 400, 1600] {
            let w = typical_window(n, &e, MU, BETA).unwrap();
            let rate = w.rate(n);
            let slack = MU * (n as f64).powf(BETA - 1.0) * (1.0 + (n as f64).log2());
            assert!(rate >= s - 1e-12, "n = {n}: rate {rate} < {s}");
            assert!(rate <= s + slack, "n = {n}: rate {rate} vs {s} + {slack}");
        }
    }

    #[test]
    fn window_rate_decreases_toward_entropy() {
        let e = SignalEnsemble::two_state(PI / 4.0);
        let rates: Vec<f64> = [100usize, 400, 1600]
            .iter()
            .map(|&n| typical_window(n, &e, MU, BETA).unwrap().rate(n))
            .collect();
        assert!(rates[0] > rates[1] && rates[1] > rates[2], "{rates:?}");
    }

    #[test]
    fn window_excess_stays_of_order_n_beta() {
        let e = SignalEnsemble::two_state(PI / 4.0);
        let s = ensemble_entropy(&e).unwrap();
        for n in [50usize, 100, 200, 400, 800, 1600] {
            let w = typical_window(n, &e, MU, BETA).unwrap();
            let excess = (w.log2_dim - n as f64 * s) / (n as f64).powf(BETA);
            assert!(excess.abs() < 8.0, "n = {n}: excess ratio {excess}");
        }
    }

    #[test]
    fn full_window_gives_unit_fidelity() {
        let window = TypicalWindow {
            k_lo: 0,
            k_hi: 60,
            log2_dim: 60.0,
            clamped: false,
            degenerate: false,
        };
        for j in [0usize, 17, 60] {
            let f = sequence_fidelity(j, 60, PI / 4.0, &window).unwrap();
            assert_eq!(f, 1.0);
        }
        assert!(sequence_fidelity(61, 60, PI / 4.0, &window).is_err());
    }

    #[test]
    fn all_product_sequence_needs_its_weight_in_window() {
        let e = SignalEnsemble::two_state(PI / 4.0);
        let n = 80;
        let w = typical_window(n, &e, MU, BETA).unwrap();
        // j = N puts total weight N in or out of the window.
        let f = sequence_fidelity(n, n, PI / 4.0, &w).unwrap();
        let expect = if w.contains(n) { 1.0 } else { 0.0 };
        assert_eq!(f, expect);
    }

    #[test]
    fn binomial_normalisation_identities() {
        // Retained + excluded = 1 to 1e-12, i.e. the binomial expansion of
        // (c² + s²)^{N−j} in the log domain; and the sequence weights
        // 2^{−N}·C(N,j) sum to 1.
        let n = 2000usize;
        let table = ln_factorials(n);
        let c2 = (PI / 4.0f64).cos().powi(2);
        let s2 = 1.0 - c2;
        for j in [0usize, 700, 1999] {
            let m = n - j;
            let terms: Vec<f64> = (0..=m)
                .map(|k| {
                    ln_binomial(&table, m, k) + k as f64 * c2.ln() + (m - k) as f64 * s2.ln()
                })
                .collect();
            let total = ln_sum_exp(&terms).exp();
            assert!((total - 1.0).abs() < 1e-12, "j = {j}: {total}");
        }
        let weights: Vec<f64> =
            (0..=n).map(|j| ln_binomial(&table, n, j) + n as f64 * 0.5f64.ln()).collect();
        let total = ln_sum_exp(&weights).exp();
        assert!((total - 1.0).abs() < 1e-12, "weights sum to {total}");
    }

    #[test]
    fn average_fidelity_degenerate_ensemble_is_exact_one() {
        let e = SignalEnsemble::new(vec![(1.0, 0.0), (1.0, 0.0)], vec![0.5, 0.5]).unwrap();
        assert_eq!(average_fidelity(60, &e, MU, BETA).unwrap(), 1.0);
    }

    #[test]
    fn average_fidelity_increases_with_length() {
        let e = SignalEnsemble::two_state(PI / 4.0);
        let deficits: Vec<f64> = [25usize, 100, 400]
            .iter()
            .map(|&n| average_fidelity_deficit(n, &e, MU, BETA).unwrap())
            .collect();
        assert!(
            deficits[0] > deficits[1] && deficits[1] > deficits[2],
            "deficits {deficits:?}"
        );
        for d in &deficits {
            assert!(*d > 0.0 && *d < 1.0);
        }
        // F̄ → 1: by N = 400 the deficit is far below one percent.
        assert!(deficits[2] < 1e-4, "deficit at 400: {}", deficits[2]);
    }

    #[test]
    fn sequence_fidelity_beats_gaussian_bound_in_central_band() {
        // Finite-N check of the asymptotic claim; violations are reported,
        // not asserted.
        let n = 200usize;
        let e = SignalEnsemble::two_state(PI / 4.0);
        let w = typical_window(n, &e, MU, BETA).unwrap();
        let bound = gaussian_bound(n, MU, BETA).unwrap();
        assert!((0.0..=1.0).contains(&bound));
        let half_band = MU / 3.0 * (n as f64).powf(BETA);
        let j_lo = ((n as f64 / 2.0) - half_band).ceil().max(0.0) as usize;
        let j_hi = ((n as f64 / 2.0) + half_band).floor().min(n as f64) as usize;
        let mut violations = 0usize;
        for j in j_lo..=j_hi {
            let f = sequence_fidelity(j, n, PI / 4.0, &w).unwrap();
            assert!((0.0..=1.0).contains(&f));
            if f < bound {
                violations += 1;
            }
        }
        println!(
            "gaussian bound {bound:.12} over j ∈ [{j_lo}, {j_hi}]: {violations} violations"
        );
    }

    #[test]
    fn erf_matches_quadrature_oracle() {
        // Oracle: Simpson integration of the Gaussian kernel.
        let quad = |x: f64| {
            let steps = 40_000usize;
            let h = x / steps as f64;
            let g = |t: f64| (-t * t).exp();
            let mut acc = g(0.0) + g(x);
            for i in 1..steps {
                let t = i as f64 * h;
                acc += g(t) * if i % 2 == 1 { 4.0 } else { 2.0 };
            }
             2.0 / PI.sqrt() * acc * h / 3.0
        };
        for x in [0.1, 0.9, 2.0, 3.5, 5.0] {
            let direct = erf(x);
            let oracle = quad(x);
            assert!((direct - oracle).abs() < 1e-10, "x = {x}: {direct} vs {oracle}");
            assert!((erf(-x) + direct).abs() < 1e-15);
        }
        assert!(erf(10.0) <= 1.0 && erf(10.0) > 1.0 - 1e-15);
    }

    #[test]
    fn gaussian_bound_increases_with_length() {
        let values: Vec<f64> =
            [50usize, 100, 400].iter().map(|&n| gaussian_bound(n, MU, BETA).unwrap()).collect();
        assert!(values[0] < values[1] && values[1] < values[2]);
        // N = 100, μ = 2, β = 0.6: Φ(4·100^{0.1}).
        let x: f64 = 4.0 * 100f64.powf(0.1);
        let expect = erf(x / std::f64::consts::SQRT_2);
        assert!((values[1] - expect).abs() < 1e-14);
    }

    #[test]
    fn compression_run_bundles_consistent_fields() {
        let run = compression_run(100, PI / 4.0, MU, BETA).unwrap();
        assert_eq!(run.n, 100);
        assert!((run.avg_fidelity + run.avg_fidelity_deficit - 1.0).abs() < 1e-15);
        assert!(run.rate >= run.s_tilde);
        assert!(run.k_window.0 < run.k_window.1);
        assert!(compression_run(100, PI / 4.0, 0.5, BETA).is_err());
    }
}
