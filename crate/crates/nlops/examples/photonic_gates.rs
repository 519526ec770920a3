//! Probabilistic gates with incomplete Bell measurements.
//!
//! When only Φ⁺ and Ψ⁺ can be told apart (the other two Bell states merge),
//! teleported gates become probabilistic: generic gates succeed at 1/16,
//! the phase family at 1/4 with a σx touch-up on Ψ⁺ outcomes.
//!
//!     cargo run --example photonic_gates

use nlops::linalg::SubsystemLayout;
use nlops::photonic::{
    class_probabilities, incomplete_bell_measure, resource_state, PhotonicProtocol, ResourceGate,
};
use nlops::qobjects::{bell_state, entanglement_entropy, named_gate, phase_gate, BellIndex,
    MultiState};
use nlops::rng::seeded;
use num_complex::Complex64;
use std::f64::consts::PI;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("incomplete Bell measurement on named pair states");
    for (name, state) in [
        ("phi+", bell_state(BellIndex { i1: 1, i2: 1 })),
        ("psi+", bell_state(BellIndex { i1: 1, i2: 2 })),
        ("phi-", bell_state(BellIndex { i1: 2, i2: 2 })),
    ] {
        let probs = class_probabilities(&state)?;
        println!("  {name}: P(phi+) = {:.3}, P(psi+) = {:.3}, P(merged) = {:.3}", probs[0], probs[1], probs[2]);
    }
    let mixed = MultiState::density(
        nlops::linalg::ComplexMatrix::identity(4).scale(Complex64::new(0.25, 0.0)),
        SubsystemLayout::parties(2, 2),
    )?;
    let probs = class_probabilities(&mixed)?;
    println!("  maximally mixed: ({:.3}, {:.3}, {:.3})", probs[0], probs[1], probs[2]);
    let mut rng = seeded(2);
    let outcome = incomplete_bell_measure(&mixed, &mut rng)?;
    println!("  one sampled outcome on the mixed state: {:?}", outcome.class);

    println!();
    println!("resource states (A:B entanglement in ebits)");
    for (name, gate) in [
        ("cnot", ResourceGate::Cnot),
        ("swap", ResourceGate::Swap),
        ("phase(pi/8)", ResourceGate::Phase(PI / 8.0)),
    ] {
        let state = resource_state(&gate)?;
        let ent = entanglement_entropy(&state, &["A1", "A2"])?;
        println!("  {name:<12} {ent:.4}");
    }

    println!();
    println!("success statistics, 100000 trials");
    let h = Complex64::new(0.5, 0.0);
    let rho = MultiState::pure(vec![h, h, h, h], SubsystemLayout::parties(2, 2))?;
    let trials = 100_000usize;
    for (name, gate) in [("cnot", named_gate("cnot")?), ("phase(pi/8)", phase_gate(PI / 8.0))] {
        let protocol = PhotonicProtocol::new(&gate, &rho)?;
        let mut hits = 0usize;
        for _ in 0..trials {
            if protocol.sample_success(&mut rng) {
                hits += 1;
            }
        }
        println!(
            "  {name:<12} p_hat = {:.5}, exact = {:.5}, phase family: {}",
            hits as f64 / trials as f64,
            protocol.exact_success_probability(),
            protocol.is_phase_family()
        );
    }
    Ok(())
}
