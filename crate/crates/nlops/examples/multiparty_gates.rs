//! Beyond two parties: N-site phase gates.
//!
//! The correspondence and the cascade generalise verbatim: the dual of
//! exp(−iα σx⊗…⊗σx) lives on N qubit pairs, post-selection succeeds at
//! 1/4^N, and the sampled branch is fixed by the parity of the Bell
//! outcomes' first indices.
//!
//!     cargo run --example multiparty_gates

use nlops::duality::{apply_via_choi, TeleportProtocol};
use nlops::gate_protocols::multiparty_cascade;
use nlops::linalg::{operator_distance, SubsystemLayout};
use nlops::qobjects::{basis_state, entanglement_entropy, phase_gate_n, psi_alpha, MultiState};
use nlops::rng::seeded;
use std::f64::consts::PI;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let parties = 3usize;
    let alpha = PI / 8.0;
    let dual = psi_alpha(alpha, parties)?;
    println!("three-party phase gate at alpha = pi/8");
    println!(
        "  dual-state entanglement across A : rest = {:.6} ebits",
        entanglement_entropy(&dual, &["A1", "A2"])?
    );

    let rho = MultiState::pure(basis_state(8, 5), SubsystemLayout::parties(parties, 2))?;
    let out = apply_via_choi(&dual, &rho, parties)?;
    println!("  post-selected success probability: {:.6} (1/64 = 0.015625)", out.probability);

    let mut rng = seeded(21);
    let protocol = TeleportProtocol::new(&dual, &rho)?;
    let trials = 100_000usize;
    let mut all_phi = 0usize;
    let mut plus_branch = 0usize;
    for _ in 0..trials {
        let outcome = protocol.sample_outcome(&mut rng);
        if outcome.iter().all(|idx| idx.flat() == 0) {
            all_phi += 1;
        }
        if outcome.iter().filter(|idx| idx.i1 == 2).count() % 2 == 0 {
            plus_branch += 1;
        }
    }
    println!("  sampled all-phi+ frequency: {:.5}", all_phi as f64 / trials as f64);
    println!("  U(+alpha) branch frequency: {:.5} (expect 0.5)", plus_branch as f64 / trials as f64);

    println!();
    println!("deterministic three-party cascade, depth 3, 300 runs");
    let target = phase_gate_n(PI / 8.0, parties);
    let mut worst = 0.0f64;
    let mut bits = 0.0;
    for _ in 0..300 {
        let (trace, _) = multiparty_cascade(parties, 3, &rho, &mut rng)?;
        worst = worst.max(operator_distance(&trace.net_operation, &target, true)?);
        bits += trace.classical_bits;
    }
    println!("  worst net-operation distance: {worst:.2e}");
    println!("  mean classical bits: {:.3} (one per party per teleported round)", bits / 300.0);
    Ok(())
}
