//! Every closed-form constant this crate reproduces, in one table.
//!
//! Equivalent to `nlops paper-numbers`; each row compares a computed value
//! against its published reference at the printed precision.
//!
//!     cargo run --example reproduce_constants

use nlops::report::paper_numbers_report;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let report = paper_numbers_report()?;
    println!(
        "{:<34} {:>12} {:>20} {:>11} {:>6}",
        "name", "published", "computed", "abs error", "status"
    );
    for row in &report.rows {
        let published: f64 = row[1].parse().unwrap_or(f64::NAN);
        let computed: f64 = row[2].parse().unwrap_or(f64::NAN);
        let error: f64 = row[3].parse().unwrap_or(f64::NAN);
        println!(
            "{:<34} {published:>12.6} {computed:>20.12} {error:>11.2e} {:>6}",
            row[0], row[4]
        );
    }
    if report.failed {
        println!("\nnote: the finite local M = 100 storage rate sits between the two");
        println!("natural slot-ensemble constructions (0.2444 and 0.2463) and misses");
        println!("its printed value 0.245 by about 1e-4; every other constant lands");
        println!("inside its printed precision.");
    }
    Ok(())
}
