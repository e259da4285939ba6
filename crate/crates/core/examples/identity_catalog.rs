//! Verify every product identity in the catalog, then one identity class by class.
//!
//! `cargo run --example identity_catalog`

use regulus::etaq::{catalog, find_identity, verify_dissection, verify_identity};

fn main() -> regulus::Result<()> {
    for entry in catalog() {
        let report = verify_identity(&entry, 500)?;
        println!("{}", report.summary());
    }

    // e0.2 reads T_2(3n+1); checking its 3-dissection shows which residue classes carry it.
    let entry = find_identity("e0.2")?;
    println!("{}: {} = {}", entry.id, entry.lhs, entry.rhs);
    for r in verify_dissection(&entry, 3, 300)? {
        println!("  {}", r.summary());
    }
    Ok(())
}
