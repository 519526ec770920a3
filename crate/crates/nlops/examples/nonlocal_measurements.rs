//! Implementing joint measurements across two sites.
//!
//! Three constructions with different entanglement price tags, and the
//! parity measurement that mints one ebit from a separable input.
//!
//!     cargo run --example nonlocal_measurements

use nlops::nl_measure::{
    parity_ebit_demo, proposal1_cost, proposal2_unitary, proposal3_measure, proposal3_unitary,
    parity_spec, MeasurementMode,
};
use nlops::qobjects::{basis_state, named_gate, plain_bell_amplitudes};
use num_complex::Complex64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("teleport-and-measure costs (d = 2)");
    println!("  outcome only:    {} ebit", proposal1_cost(2, MeasurementMode::OutcomeOnly));
    println!("  with post-state: {} ebits", proposal1_cost(2, MeasurementMode::WithPostState));

    println!();
    println!("basis-rotation route: the label assignment sets the cost");
    let computational: Vec<Vec<Complex64>> = (0..4).map(|k| basis_state(4, k)).collect();
    let straight = proposal2_unitary(&computational, &[(0, 0), (0, 1), (1, 0), (1, 1)], 2)?;
    let crossed = proposal2_unitary(&computational, &[(0, 0), (1, 0), (0, 1), (1, 1)], 2)?;
    println!(
        "  straight labels: U = identity ({})",
        if straight == nlops::linalg::ComplexMatrix::identity(4) { "free" } else { "?" }
    );
    println!(
        "  crossed labels:  U = swap ({})",
        if crossed == named_gate("swap")? { "two ebits" } else { "?" }
    );
    let bells: Vec<Vec<Complex64>> = plain_bell_amplitudes().to_vec();
    let bell_rotation = proposal2_unitary(&bells, &[(0, 0), (0, 1), (1, 0), (1, 1)], 2)?;
    println!("  Bell labels map the Bell basis onto products (unitary: {})",
        bell_rotation.is_unitary(1e-12));

    println!();
    println!("ancilla route on the parity measurement");
    let spec = parity_spec();
    let u = proposal3_unitary(&spec)?;
    println!("  outcome-indexing unitary is self-inverse: {}",
        u.mul(&u).sub(&nlops::linalg::ComplexMatrix::identity(8)).max_norm() < 1e-12);
    let plus = {
        let h = Complex64::new(0.5, 0.0);
        nlops::linalg::ComplexMatrix::outer(&[h, h, h, h], &[h, h, h, h])
    };
    let outcomes = proposal3_measure(&spec, &plus)?;
    println!("  parity of |++>: probabilities ({:.3}, {:.3})", outcomes[0].0, outcomes[1].0);

    println!();
    println!("one ebit from a separable state");
    let demo = parity_ebit_demo()?;
    println!("  input min partial-transpose eigenvalue: {:.2e} (separable)", demo.input_pt_min_eig);
    for (i, (prob, _, entropy)) in demo.outcomes.iter().enumerate() {
        println!("  outcome {}: probability {prob:.3}, post-state entanglement {entropy:.6} ebits", i + 1);
    }
    Ok(())
}
