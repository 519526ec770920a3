//! The operation ↔ state correspondence, both ways.
//!
//! Builds dual states of a few channels, applies them back to inputs via
//! the post-selected projection, and checks the round trip against direct
//! channel application.
//!
//!     cargo run --example duality_roundtrip

use nlops::duality::{apply_via_choi, choi_of_channel, haar_random_unitary, roundtrip_check};
use nlops::linalg::{ComplexMatrix, SubsystemLayout};
use nlops::qobjects::{
    basis_state, depolarize, entanglement_entropy, named_gate, phase_gate, Channel, MultiState,
};
use nlops::rng::seeded;
use std::f64::consts::PI;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("dual states of named channels");
    println!("-----------------------------");
    for (name, gate) in [
        ("identity", ComplexMatrix::identity(4)),
        ("cnot", named_gate("cnot")?),
        ("swap", named_gate("swap")?),
        ("phase(pi/8)", phase_gate(PI / 8.0)),
    ] {
        let channel = Channel::unitary(&gate, 2)?;
        let dual = choi_of_channel(&channel, 2)?;
        let ent = entanglement_entropy(&dual, &["A1", "A2"])?;
        let residual = roundtrip_check(&channel)?;
        println!("  {name:<12} entanglement {ent:.6} ebits, round-trip residual {residual:.2e}");
    }

    let noisy = depolarize(&named_gate("cnot")?, 0.3)?;
    println!("  depolarized cnot (q = 0.3): residual {:.2e}", roundtrip_check(&noisy)?);

    let mut rng = seeded(42);
    let worst = (0..25)
        .map(|_| {
            let u = haar_random_unitary(4, &mut rng);
            roundtrip_check(&Channel::unitary(&u, 2).unwrap()).unwrap()
        })
        .fold(0.0f64, f64::max);
    println!("  25 random unitary channels: worst residual {worst:.2e}");

    println!();
    println!("post-selected application");
    println!("-------------------------");
    let rho = MultiState::pure(basis_state(4, 2), SubsystemLayout::parties(2, 2))?;
    let dual = choi_of_channel(&Channel::unitary(&named_gate("cnot")?, 2)?, 2)?;
    let out = apply_via_choi(&dual, &rho, 2)?;
    println!("  two parties:   success probability {:.6} (expect 1/16 = 0.0625)", out.probability);

    let dual3 = choi_of_channel(&Channel::unitary(&nlops::qobjects::phase_gate_n(PI / 8.0, 3), 3)?, 3)?;
    let rho3 = MultiState::pure(basis_state(8, 5), SubsystemLayout::parties(3, 2))?;
    let out3 = apply_via_choi(&dual3, &rho3, 3)?;
    println!("  three parties: success probability {:.6} (expect 1/64 = 0.015625)", out3.probability);
    Ok(())
}
