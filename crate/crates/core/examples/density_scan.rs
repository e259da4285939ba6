//! Measure how often coefficients vanish modulo M along a progression.
//!
//! `cargo run --example density_scan`

use regulus::congruence::{density_scan, t2_series, Engine, Progression};

fn main() -> regulus::Result<()> {
    let engine = Engine::new(1_000_000);
    let prog = Progression::new(t2_series(), 9, 1);
    let report = density_scan(&engine, &prog, 6, 0, &[100, 1_000, 10_000, 100_000])?;
    for c in &report.checkpoints {
        println!("X = {:>7}: {:>6} zeros, proportion {:.5}", c.x, c.count, c.proportion);
    }
    println!("strictly increasing: {}", report.strictly_increasing());
    report.write_csv(std::io::stdout()).expect("stdout");
    Ok(())
}
