//! Storing and compressing phase-gate programs.
//!
//! The program states of the deterministic cascade compress slot by slot;
//! this example reproduces the storage-rate tables for infinite and finite
//! gate families, locally stored or split across two sites, and the
//! quantum-communication rate when one site ships halves to the other.
//!
//!     cargo run --example storage_rates

use nlops::storage::{
    finite_rate, infinite_rate, qcomm_rate, step_entropy, AlphaMax, Locality,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("slot entropies H for the two-state mixtures");
    println!("  k   angle       local      nonlocal");
    for k in 1..=6u32 {
        println!(
            "  {k}   pi/2^{k:<2}   {:.6}   {:.6}",
            step_entropy(k, Locality::Local)?,
            step_entropy(k, Locality::Nonlocal)?
        );
    }

    println!();
    println!("uniform infinite family, qubits per operation (published bound)");
    println!("  range     local     nonlocal");
    for range in [AlphaMax::Pi, AlphaMax::PiOver8, AlphaMax::PiOver32] {
        let local = infinite_rate(range, Locality::Local)?;
        let nonlocal = infinite_rate(range, Locality::Nonlocal)?;
        println!(
            "  {:<6}  {:.6}  {:.6}   (exact series: {:.6} / {:.6})",
            range.label(),
            local.qubits_per_operation,
            nonlocal.qubits_per_operation,
            local.exact_series.unwrap(),
            nonlocal.exact_series.unwrap()
        );
    }

    println!();
    println!("finite family of M binary-angle gates");
    println!("  M      local      nonlocal   (squared-weight variant)");
    for m in [10usize, 100, 1000] {
        let local = finite_rate(m, Locality::Local)?;
        let nonlocal = finite_rate(m, Locality::Nonlocal)?;
        println!(
            "  {m:<5}  {:.6}   {:.6}   ({:.6})",
            local.qubits_per_operation,
            nonlocal.qubits_per_operation,
            nonlocal.schmidt_squared_rate.unwrap()
        );
    }

    println!();
    println!("quantum communication per operation (storage at one site)");
    for range in [AlphaMax::Pi, AlphaMax::PiOver8] {
        println!("  {:<6} {:.6}", range.label(), qcomm_rate(range)?.qubits_per_operation);
    }
    Ok(())
}
