//! Weight, character and cusp orders of eta-quotients, and the B-series check.
//!
//! `cargo run --example modular_checks`

use regulus::modform::{b_series_check, BSeriesParams, EtaQuotientSpec};

fn main() -> regulus::Result<()> {
    let spec: EtaQuotientSpec = "N=16; eta(4)^6".parse()?;
    let check = spec.check_ono_conditions();
    println!("{spec}: weight {}, {}", spec.weight(), check.reason());
    println!("character {:?}", spec.character_of()?);
    for (d, order) in spec.cusp_orders() {
        println!("  cusp 1/{d}: order {order}");
    }
    println!("{:?}", spec.is_holomorphic()?);

    let params: BSeriesParams = "l=2 p=2 a=1 m=2 k=3".parse()?;
    let report = b_series_check(params, 1200)?;
    println!(
        "B-series {params}: passed {}, level 576ℓ = {}, minimal level {}, min cusp order {}",
        report.passed(),
        report.stated_level,
        report.minimal_level,
        report.min_cusp_order
    );
    for note in &report.notes {
        println!("  note: {note}");
    }
    Ok(())
}
