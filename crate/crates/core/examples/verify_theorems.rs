//! Generate congruence families and verify them with one shared expansion cache.
//!
//! `cargo run --example verify_theorems`

use regulus::congruence::{generate_family, Engine, FamilyParams};

fn main() -> regulus::Result<()> {
    // A smaller budget keeps the example quick; the CLI defaults to 2,000,000.
    let engine = Engine::new(200_000);
    for theorem in ["c1.4", "t0.1.0.0", "t4", "thm1.00-cor"] {
        let family = generate_family(theorem, &FamilyParams::default())?;
        for note in &family.notes {
            println!("note: {note}");
        }
        for report in engine.verify_all(&family.claims, None)? {
            println!("{}", report.summary());
        }
    }
    println!("expansions built: {}", engine.cache().constructions());
    Ok(())
}
