//! Purifying noisy operations.
//!
//! Known non-local gates under depolarising noise are purifiable exactly
//! when their dual state is distillable; the partial-transpose boundary of
//! the noisy dual gives the threshold. Unknown noisy local rotations are
//! purified by projecting their dual onto a qubit subspace and running
//! single-qubit purification plus a repeat-until-success random walk.
//!
//!     cargo run --example purification_thresholds

use nlops::duality::choi_of_channel;
use nlops::linalg::ComplexMatrix;
use nlops::purify::{
    fd_scaling, project_unknown, random_walk_success, threshold_bisection, threshold_closed_form,
    GateFamily,
};
use nlops::qobjects::{depolarize, named_gate, sigma_x};
use nlops::rng::seeded;
use num_complex::Complex64;
use std::f64::consts::PI;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("noise thresholds of known non-local gates");
    println!("gate          alpha      closed form   bisection");
    for family in [
        GateFamily::Cnot,
        GateFamily::Phase(PI / 4.0),
        GateFamily::Phase(PI / 8.0),
        GateFamily::Phase(PI / 64.0),
        GateFamily::Phase(PI / 2f64.powi(13)),
    ] {
        let gate = family.matrix()?;
        let closed = threshold_closed_form(&family)?;
        let bisected = threshold_bisection(&gate)?;
        let alpha = match family {
            GateFamily::Phase(a) => format!("{a:.6}"),
            _ => "-".into(),
        };
        println!("{:<12}  {alpha:>9}  {closed:.9}  {bisected:.9}", family.name());
    }
    let swap_q = threshold_bisection(&named_gate("swap")?)?;
    println!("{:<12}  {:>9}  {:>11}  {swap_q:.9}", "swap", "-", "(none)");

    println!();
    println!("unknown noisy local rotation, q = 1/3");
    let alpha: f64 = 0.7;
    let u = ComplexMatrix::identity(2)
        .scale(Complex64::new(alpha.cos(), 0.0))
        .add(&sigma_x().scale(Complex64::new(0.0, -alpha.sin())));
    let dual = choi_of_channel(&depolarize(&u, 1.0 / 3.0)?, 1)?;
    let projected = project_unknown(&dual)?;
    println!(
        "  projection succeeds with p = {:.6} (expect 2/3), lambda = {:.6} (expect 1/2)",
        projected.success_probability, projected.lambda
    );
    println!("  recovered rotation angle: {:.6} (actual {alpha})", projected.alpha_estimate);
    for copies in [10u64, 100, 1000] {
        let (f, d) = fd_scaling(projected.lambda, copies)?;
        println!("  {copies:>5} copies: fidelity {f:.5}, yield {d:.5}");
    }

    println!();
    println!("repeat-until-success random walk (10000 trials per cap)");
    let mut rng = seeded(9);
    for cap in [1u64, 101, 1001, 100_001] {
        let frac = random_walk_success(cap, 10_000, &mut rng)?;
        println!("  cap {cap:>7}: success fraction {frac:.4}");
    }
    Ok(())
}
