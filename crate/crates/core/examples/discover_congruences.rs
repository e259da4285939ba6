//! Scan progressions a n + b for coefficients that vanish modulo M.
//!
//! `cargo run --example discover_congruences`

use regulus::congruence::{discover, Engine};
use regulus::FQuotient;

fn main() -> regulus::Result<()> {
    let engine = Engine::new(200_000);
    let t4 = FQuotient::tuple_regular(4, 3);
    let found = discover(&engine, &t4, 3, 27, 300, 50)?;
    let (primitive, implied): (Vec<_>, Vec<_>) = found.iter().partition(|c| c.implied_by.is_none());
    for c in &primitive {
        println!("EMPIRICAL T4({}n+{}) ≡ 0 mod 3 ({} terms, re-verified to 2x)", c.a, c.b, c.checked);
    }
    println!("{} further progressions are implied by the ones above", implied.len());
    Ok(())
}
