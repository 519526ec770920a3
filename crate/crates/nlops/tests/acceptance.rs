//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line (run with `--nocapture` to see them all).
//!
//! Statistical criteria use fixed seeds, so every run is reproducible.

use nlops::compress::{
    average_fidelity_deficit, ensemble_entropy, typical_window, SignalEnsemble,
};
use nlops::duality::{
    apply_via_choi, choi_of_channel, haar_random_unitary, roundtrip_check, TeleportProtocol,
};
use nlops::gate_protocols::{
    avg_classical_bits, avg_entanglement, cascade, cascade_forced, f_factor, multiparty_cascade,
};
use nlops::linalg::{operator_distance, ComplexMatrix, SubsystemLayout};
use nlops::nl_measure::{parity_ebit_demo, proposal2_unitary};
use nlops::photonic::PhotonicProtocol;
use nlops::purify::{
    project_unknown, random_walk_success, threshold_bisection, threshold_closed_form, GateFamily,
};
use nlops::qobjects::{
    basis_state, depolarize, named_gate, phase_gate, phase_gate_n, psi_alpha, Channel, MultiState,
};
use nlops::rng::{seeded, substream};
use nlops::storage::{finite_rate, infinite_rate, qcomm_rate, AlphaMax, Locality};
use nlops::tomography::{action_residual, channel_tomography};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::time::Instant;

fn verdict(criterion: &str, pass: bool, detail: &str) -> bool {
    println!("[{}] {criterion}: {detail}", if pass { "PASS" } else { "FAIL" });
    pass
}

fn plus_state() -> MultiState {
    let h = Complex64::new(0.5, 0.0);
    MultiState::pure(vec![h, h, h, h], SubsystemLayout::parties(2, 2)).unwrap()
}

fn mean_and_stderr(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[test]
fn criterion_01_cascade_cost_factor() {
    let start = Instant::now();
    let value = f_factor(60);
    let elapsed = start.elapsed();
    let pass = (value - 5.97932).abs() <= 1e-4 && elapsed.as_secs_f64() < 1.0;
    assert!(
        verdict(
            "criterion 1 (cost-factor limit)",
            pass,
            &format!("f_60 = {value:.6}, computed in {elapsed:?}")
        )
    );
}

#[test]
fn criterion_02_cascade_exactness_and_costs() {
    // Exhaustive branch histories for every depth up to ten.
    let rho = plus_state();
    let mut worst = 0.0f64;
    for depth in 2..=10u32 {
        let target = phase_gate(PI / 2f64.powi(depth as i32));
        for mask in 0..(1u64 << depth) {
            let branches: Vec<i8> =
                (0..depth).map(|k| if mask & (1 << k) != 0 { 1 } else { -1 }).collect();
            let (trace, _) = cascade_forced(depth, &rho, &branches).unwrap();
            worst = worst
                .max(operator_distance(&trace.net_operation, &target, true).unwrap());
        }
    }
    let exhaustive_pass = worst <= 1e-10;

    // Monte Carlo costs at depth 4.
    let depth = 4u32;
    let runs = 10_000usize;
    let mut ebits = Vec::with_capacity(runs);
    let mut bits = Vec::with_capacity(runs);
    for t in 0..runs {
        let mut rng = substream(2024, t as u64);
        let (trace, _) = cascade(depth, &rho, &mut rng).unwrap();
        ebits.push(trace.ebits_consumed);
        bits.push(trace.classical_bits);
    }
    let (me, se) = mean_and_stderr(&ebits);
    let (mb, sb) = mean_and_stderr(&bits);
    let expect_e = avg_entanglement(depth).unwrap();
    let expect_b = avg_classical_bits(depth);
    let mc_pass = (me - expect_e).abs() <= 3.0 * se && (mb - expect_b).abs() <= 3.0 * sb;

    let pass = exhaustive_pass && mc_pass;
    assert!(verdict(
        "criterion 2 (cascade exactness + costs)",
        pass,
        &format!(
            "exhaustive worst distance {worst:.2e}; ebits {me:.4} vs {expect_e:.4} (se {se:.4}), \
             bits {mb:.4} vs {expect_b:.4} (se {sb:.4})"
        )
    ));
}

#[test]
fn criterion_03_purification_thresholds() {
    let cnot_q = threshold_bisection(&named_gate("cnot").unwrap()).unwrap();
    let cnot_pass = (cnot_q - 1.0 / 9.0).abs() <= 1e-9;

    let mut grid_worst = 0.0f64;
    for i in 1..=50 {
        let alpha = PI / 4.0 * i as f64 / 50.0;
        let closed = threshold_closed_form(&GateFamily::Phase(alpha)).unwrap();
        let bisected = threshold_bisection(&phase_gate(alpha)).unwrap();
        grid_worst = grid_worst.max((closed - bisected).abs());
    }
    let grid_pass = grid_worst <= 1e-9;

    let alpha13 = PI / 2f64.powi(13);
    let closed13 = threshold_closed_form(&GateFamily::Phase(alpha13)).unwrap();
    let bisect13 = threshold_bisection(&phase_gate(alpha13)).unwrap();
    let tiny_pass = (0.9938..=0.9940).contains(&closed13) && (0.9938..=0.9940).contains(&bisect13);

    let pass = cnot_pass && grid_pass && tiny_pass;
    assert!(verdict(
        "criterion 3 (purification thresholds)",
        pass,
        &format!(
            "cnot {cnot_q:.10}; 50-point grid worst |closed − bisect| = {grid_worst:.2e}; \
             α = π/2¹³ gives {closed13:.5}"
        )
    ));
}

#[test]
fn criterion_04_storage_numbers() {
    // Published decimals may be rounded or truncated; a computed value
    // matches when it lies in [printed − u/2, printed + u) for u one unit
    // of the last printed digit.
    let matches = |computed: f64, printed: f64, unit: f64| {
        computed >= printed - unit / 2.0 && computed < printed + unit
    };
    let mut all = true;
    let mut check = |name: &str, computed: f64, printed: f64, unit: f64| {
        let ok = matches(computed, printed, unit);
        all &= verdict(
            &format!("criterion 4 ({name})"),
            ok,
            &format!("computed {computed:.6}, published {printed}"),
        );
    };

    for (name, range, locality, printed) in [
        ("local ∞ π", AlphaMax::Pi, Locality::Local, 3.8942),
        ("local ∞ π/8", AlphaMax::PiOver8, Locality::Local, 0.2257),
        ("local ∞ π/32", AlphaMax::PiOver32, Locality::Local, 0.0206),
        ("nonlocal ∞ π", AlphaMax::Pi, Locality::Nonlocal, 4.7758),
        ("nonlocal ∞ π/8", AlphaMax::PiOver8, Locality::Nonlocal, 0.3976),
        ("nonlocal ∞ π/32", AlphaMax::PiOver32, Locality::Nonlocal, 0.0379),
    ] {
        let computed = infinite_rate(range, locality).unwrap().qubits_per_operation;
        check(name, computed, printed, 1e-4);
    }
    for (name, m, locality, printed, unit) in [
        ("finite local M=100", 100usize, Locality::Local, 0.245, 1e-3),
        ("finite local M=1000", 1000, Locality::Local, 0.0361, 1e-4),
        ("finite nonlocal M=100", 100, Locality::Nonlocal, 0.333, 1e-3),
        ("finite nonlocal M=1000", 1000, Locality::Nonlocal, 0.050, 1e-3),
    ] {
        let computed = finite_rate(m, locality).unwrap().qubits_per_operation;
        check(name, computed, printed, unit);
    }
    check("qcomm π", qcomm_rate(AlphaMax::Pi).unwrap().qubits_per_operation, 2.7758, 1e-4);
    check("qcomm π/8", qcomm_rate(AlphaMax::PiOver8).unwrap().qubits_per_operation, 0.3976, 1e-4);

    // The finite local M = 100 slot construction lands at 0.24438, between
    // the two natural readings of the published table and 1.2e-4 outside
    // the printed window of 0.245; every other constant reproduces. The
    // assertion stays faithful to the criterion and this one stays red.
    assert!(all, "storage numbers outside printed precision; see output above");
}

#[test]
fn criterion_05_duality_roundtrip() {
    let mut rng = seeded(55);
    let mut worst = 0.0f64;
    for i in 0..100 {
        let u = haar_random_unitary(4, &mut rng);
        let channel = if i % 2 == 0 {
            Channel::unitary(&u, 2).unwrap()
        } else {
            use rand::Rng;
            let q: f64 = rng.gen_range(0.0..1.0);
            depolarize(&u, q).unwrap()
        };
        worst = worst.max(roundtrip_check(&channel).unwrap());
    }
    let roundtrip_pass = worst <= 1e-10;

    let probe = MultiState::pure(basis_state(4, 1), SubsystemLayout::parties(2, 2)).unwrap();
    let e2 = choi_of_channel(&Channel::unitary(&named_gate("cnot").unwrap(), 2).unwrap(), 2)
        .unwrap();
    let p2 = apply_via_choi(&e2, &probe, 2).unwrap().probability;
    let probe3 = MultiState::pure(basis_state(8, 3), SubsystemLayout::parties(3, 2)).unwrap();
    let e3 = psi_alpha(PI / 8.0, 3).unwrap();
    let p3 = apply_via_choi(&e3, &probe3, 3).unwrap().probability;
    let prob_pass = (p2 - 1.0 / 16.0).abs() <= 1e-12 && (p3 - 1.0 / 64.0).abs() <= 1e-12;

    let pass = roundtrip_pass && prob_pass;
    assert!(verdict(
        "criterion 5 (duality round trip)",
        pass,
        &format!("worst residual over 100 channels {worst:.2e}; p = {p2:.10} / {p3:.10}")
    ));
}

#[test]
fn criterion_06_photonic_success() {
    let rho = plus_state();
    let trials = 100_000usize;
    let mut all = true;
    for (name, gate, p, seed) in [
        ("cnot", named_gate("cnot").unwrap(), 1.0 / 16.0, 66u64),
        ("phase(π/8)", phase_gate(PI / 8.0), 0.25, 67),
    ] {
        let protocol = PhotonicProtocol::new(&gate, &rho).unwrap();
        let mut rng = seeded(seed);
        let mut hits = 0usize;
        for _ in 0..trials {
            if protocol.sample_success(&mut rng) {
                hits += 1;
            }
        }
        let p_hat = hits as f64 / trials as f64;
        let sigma = (p * (1.0 - p) / trials as f64).sqrt();
        let stat_pass = (p_hat - p).abs() <= 3.0 * sigma;
        let exact_pass = (protocol.exact_success_probability() - p).abs() < 1e-12;

        // Success-conditioned output must match the gate exactly.
        let expect = gate.mul(&rho.to_density()).mul(&gate.dagger());
        let mut cond_worst = 0.0f64;
        let mut successes = 0;
        while successes < 10 {
            let out = protocol.sample(&mut rng).unwrap();
            if out.success {
                successes += 1;
                cond_worst = cond_worst
                    .max(out.state.unwrap().to_density().sub(&expect).max_norm());
            }
        }
        let pass = stat_pass && exact_pass && cond_worst <= 1e-10;
        all &= verdict(
            &format!("criterion 6 (photonic {name})"),
            pass,
            &format!("p̂ = {p_hat:.5} vs {p:.5} (σ = {sigma:.5}), conditioned residual {cond_worst:.2e}"),
        );
    }
    assert!(all);
}

#[test]
fn criterion_07_tomography() {
    let channel = depolarize(&phase_gate(PI / 8.0), 0.7).unwrap();
    let mut rng = seeded(77);
    let exact = channel_tomography(&channel, None, &mut rng).unwrap();
    let exact_residual = action_residual(&channel, &exact.channel);
    let exact_pass = exact_residual <= 1e-10;

    let mut residuals: Vec<f64> = (0..20)
        .map(|rep| {
            let mut rng = substream(770, rep);
            let estimate = channel_tomography(&channel, Some(10_000), &mut rng).unwrap();
            action_residual(&channel, &estimate.channel)
        })
        .collect();
    residuals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = 0.5 * (residuals[9] + residuals[10]);
    let sampled_pass = median < 0.05;

    let pass = exact_pass && sampled_pass;
    assert!(verdict(
        "criterion 7 (tomography)",
        pass,
        &format!("exact residual {exact_residual:.2e}; median sampled residual {median:.4}")
    ));
}

#[test]
fn criterion_08_nonlocal_measurements() {
    let demo = parity_ebit_demo().unwrap();
    let ppt_pass = demo.input_pt_min_eig >= -1e-12;
    let entropy_pass = demo.outcomes.iter().all(|(_, _, e)| (e - 1.0).abs() <= 1e-10);

    let basis: Vec<Vec<Complex64>> = (0..4).map(|k| basis_state(4, k)).collect();
    let straight =
        proposal2_unitary(&basis, &[(0, 0), (0, 1), (1, 0), (1, 1)], 2).unwrap();
    let crossed = proposal2_unitary(&basis, &[(0, 0), (1, 0), (0, 1), (1, 1)], 2).unwrap();
    let unitary_pass =
        straight == ComplexMatrix::identity(4) && crossed == named_gate("swap").unwrap();

    let pass = ppt_pass && entropy_pass && unitary_pass;
    assert!(verdict(
        "criterion 8 (non-local measurements)",
        pass,
        &format!(
            "input PT min eig {:.2e}; post entropies ({:.10}, {:.10}); label unitaries exact: {}",
            demo.input_pt_min_eig, demo.outcomes[0].2, demo.outcomes[1].2, unitary_pass
        )
    ));
}

#[test]
fn criterion_09_local_purification_pipeline() {
    use nlops::qobjects::sigma_x;
    let mut worst_lambda = 0.0f64;
    let mut worst_success = 0.0f64;
    for i in 1..=20 {
        let q = i as f64 / 20.0;
        let alpha = 0.3 + 0.05 * i as f64;
        let u = ComplexMatrix::identity(2)
            .scale(Complex64::new(alpha.cos(), 0.0))
            .add(&sigma_x().scale(Complex64::new(0.0, -alpha.sin())));
        let dual = choi_of_channel(&depolarize(&u, q).unwrap(), 1).unwrap();
        let projected = project_unknown(&dual).unwrap();
        worst_lambda = worst_lambda.max((projected.lambda - 2.0 * q / (1.0 + q)).abs());
        worst_success =
            worst_success.max((projected.success_probability - (q + 1.0) / 2.0).abs());
    }
    let formula_pass = worst_lambda <= 1e-12 && worst_success <= 1e-12;

    let trials = 4000;
    let mut rng = seeded(99);
    let f10 = random_walk_success(10, trials, &mut rng).unwrap();
    let f1000 = random_walk_success(1000, trials, &mut rng).unwrap();
    let f100k = random_walk_success(100_000, trials, &mut rng).unwrap();
    let walk_pass = f100k >= 0.98 && f10 < f1000 && f1000 < f100k;

    let pass = formula_pass && walk_pass;
    assert!(verdict(
        "criterion 9 (unknown-gate purification)",
        pass,
        &format!(
            "worst |λ − 2q/(1+q)| = {worst_lambda:.2e}, worst success dev {worst_success:.2e}; \
             walk fractions {f10:.4} < {f1000:.4} < {f100k:.4}"
        )
    ));
}

#[test]
fn criterion_10_sequence_compression() {
    let alpha = PI / 4.0;
    let (mu, beta) = (2.0, 0.6);
    let e = SignalEnsemble::two_state(alpha);
    let s = ensemble_entropy(&e).unwrap();

    let deficits: Vec<f64> = [25usize, 100, 400]
        .iter()
        .map(|&n| average_fidelity_deficit(n, &e, mu, beta).unwrap())
        .collect();
    let fidelity_pass = deficits[0] > deficits[1] && deficits[1] > deficits[2];

    let mut rate_pass = true;
    for &n in &[25usize, 100, 400] {
        let w = typical_window(n, &e, mu, beta).unwrap();
        let rate = w.rate(n);
        let upper = s + mu * (n as f64).powf(beta - 1.0) * (1.0 + (n as f64).log2());
        rate_pass &= rate >= s - 1e-12 && rate <= upper;
    }

    // Normalisation identities in the log domain.
    let n = 400usize;
    let full = nlops::compress::TypicalWindow { k_lo: 0, k_hi: n, log2_dim: 0.0, clamped: false, degenerate: false };
    let mut norm_pass = true;
    for j in [0usize, 123, 399] {
        let f = nlops::compress::sequence_fidelity(j, n, alpha, &full).unwrap();
        norm_pass &= (f - 1.0).abs() <= 1e-12;
    }

    let pass = fidelity_pass && rate_pass && norm_pass;
    assert!(verdict(
        "criterion 10 (sequence compression)",
        pass,
        &format!(
            "deficits {:?} strictly decreasing: {fidelity_pass}; rates bracketed: {rate_pass}; \
             normalisation: {norm_pass}",
            deficits
        )
    ));
}

#[test]
fn criterion_11_multiparty() {
    let parties = 3usize;
    let depth = 3u32;
    let rho = MultiState::pure(basis_state(8, 5), SubsystemLayout::parties(parties, 2)).unwrap();
    let target = phase_gate_n(PI / 8.0, parties);

    // Exhaustive branch histories of the three-party cascade.
    let mut exhaustive_worst = 0.0f64;
    for mask in 0..(1u32 << depth) {
        let mut net = ComplexMatrix::identity(8);
        for k in 1..=depth {
            let angle = PI / 2f64.powi((depth - k + 1) as i32);
            if k == depth {
                net = phase_gate_n(angle, parties).mul(&net);
                break;
            }
            let branch = if mask & (1 << (k - 1)) != 0 { 1.0 } else { -1.0 };
            net = phase_gate_n(branch * angle, parties).mul(&net);
            if branch > 0.0 {
                break;
            }
        }
        exhaustive_worst =
            exhaustive_worst.max(operator_distance(&net, &target, true).unwrap());
    }

    // Sampled cascade runs.
    let mut sampled_worst = 0.0f64;
    for t in 0..1000u64 {
        let mut rng = substream(1100, t);
        let (trace, _) = multiparty_cascade(parties, depth, &rho, &mut rng).unwrap();
        sampled_worst =
            sampled_worst.max(operator_distance(&trace.net_operation, &target, true).unwrap());
    }
    let cascade_pass = exhaustive_worst <= 1e-10 && sampled_worst <= 1e-10;

    // All-Φ⁺ post-selection frequency over 10⁵ trials.
    let e = psi_alpha(PI / 8.0, parties).unwrap();
    let protocol = TeleportProtocol::new(&e, &rho).unwrap();
    let mut rng = seeded(111);
    let trials = 100_000usize;
    let mut hits = 0usize;
    for _ in 0..trials {
        if protocol.sample_outcome(&mut rng).iter().all(|idx| idx.flat() == 0) {
            hits += 1;
        }
    }
    let p = 1.0 / 64.0;
    let p_hat = hits as f64 / trials as f64;
    let sigma = (p * (1.0 - p) / trials as f64).sqrt();
    let choi_pass = (p_hat - p).abs() <= 3.0 * sigma;

    let pass = cascade_pass && choi_pass;
    assert!(verdict(
        "criterion 11 (multiparty)",
        pass,
        &format!(
            "exhaustive {exhaustive_worst:.2e}, sampled {sampled_worst:.2e}; \
             all-Φ⁺ frequency {p_hat:.5} vs {p:.5} (σ = {sigma:.5})"
        )
    ));
}
