//! ω(p) and the Newman recurrence for the coefficients of f_3^6 / f_1.
//!
//! `cargo run --example newman_recurrence`

use regulus::congruence::omega_parity;
use regulus::numtheory::{newman_alpha, newman_verify, omega, NewmanParams};

fn main() -> regulus::Result<()> {
    for p in [5u64, 7, 11, 13] {
        let params = NewmanParams::f3_6_over_f1(p);
        let delta = params.delta()?;
        let a = params.phi_series((p * p * 100) as usize + delta as usize)?;
        let report = newman_verify(&params, &a, 100)?;
        println!(
            "p = {p}: Δ = {delta}, ω = {}, ω / p^3 = {}, recurrence to n = 100: {}",
            omega(p, &a)?,
            newman_alpha(&params, &a)?,
            if report.passed() { "holds" } else { "fails" }
        );
    }
    println!("ω(17) mod 2 = {}", omega_parity(17)?);
    Ok(())
}
