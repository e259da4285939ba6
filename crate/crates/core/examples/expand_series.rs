//! Expand f-quotients exactly and modulo M, and compare against brute-force counts.
//!
//! `cargo run --example expand_series`

use regulus::oracles::count_tuple;
use regulus::{expand_fquotient, FQuotient, Ring};

fn main() -> regulus::Result<()> {
    // Triples of 2-regular partitions: f_2^3 / f_1^3.
    let t2: FQuotient = "f2^3/f1^3".parse()?;
    let exact = expand_fquotient(&t2, 15, Ring::Integer)?;
    println!("{t2} = {exact}");

    let oracle = count_tuple(2, 3, 15);
    assert_eq!(exact.to_bigints(), oracle.values);
    println!("matches the counting oracle through q^15");

    // The same series modulo 24 keeps only residues, which is what congruence checks read.
    let m24 = expand_fquotient(&t2, 15, Ring::modulo(24)?)?;
    println!("mod 24: {m24}");

    // Quotients with a scalar and several factors parse from the usual notation.
    let q: FQuotient = "3 * f2^4 f3^5 / (f1^8 f6)".parse()?;
    println!("{q} = {}", expand_fquotient(&q, 8, Ring::Integer)?);
    Ok(())
}
