//! Deterministic phase gates from probabilistic teleportation.
//!
//! A single teleported shot applies U(α) or U(−α) with even odds; the
//! doubling cascade retries at twice the angle until the final round is the
//! free local gate U(π/2), so the target always lands. This example runs
//! the cascade at several depths and compares Monte Carlo costs against the
//! closed-form accounting.
//!
//!     cargo run --example gate_teleportation

use nlops::gate_protocols::{
    avg_classical_bits, avg_entanglement, binary_decompose, cascade, f_factor, single_shot,
};
use nlops::linalg::{operator_distance, SubsystemLayout};
use nlops::qobjects::{phase_gate, MultiState};
use nlops::rng::seeded;
use num_complex::Complex64;
use std::f64::consts::PI;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let h = Complex64::new(0.5, 0.0);
    let rho = MultiState::pure(vec![h, h, h, h], SubsystemLayout::parties(2, 2))?;
    let mut rng = seeded(11);

    println!("single probabilistic shots at alpha = pi/4");
    for _ in 0..6 {
        let (branch, _) = single_shot(PI / 4.0, &rho, &mut rng)?;
        print!("{} ", if branch == 1 { "+" } else { "-" });
    }
    println!("(each sign applies U(±pi/4))");
    println!();

    println!("deterministic cascades, 2000 runs each");
    println!("depth  mean ebits  expected   mean bits  expected  max distance");
    for depth in 1..=6u32 {
        let target = phase_gate(PI / 2f64.powi(depth as i32));
        let runs = 2000;
        let (mut ebits, mut bits, mut worst) = (0.0, 0.0, 0.0f64);
        for _ in 0..runs {
            let (trace, _) = cascade(depth, &rho, &mut rng)?;
            ebits += trace.ebits_consumed;
            bits += trace.classical_bits;
            worst = worst.max(operator_distance(&trace.net_operation, &target, true)?);
        }
        println!(
            "{depth:>5}  {:>10.5}  {:>8.5}  {:>9.4}  {:>8.4}  {:.2e}",
            ebits / runs as f64,
            avg_entanglement(depth)?,
            bits / runs as f64,
            avg_classical_bits(depth),
            worst
        );
    }

    println!();
    println!("cost scale factor: f_60 = {:.5} (limit 5.97932)", f_factor(60));
    let alpha = 1.0f64;
    let digits = binary_decompose(alpha, 20)?;
    let set: Vec<usize> =
        digits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i + 1).collect();
    println!("binary synthesis of alpha = {alpha}: cascades at k = {set:?}");
    println!("expected cost <= f_inf * alpha = {:.4} ebits", f_factor(60) * alpha);
    Ok(())
}
