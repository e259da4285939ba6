//! Ramanujan τ and the Hecke operators acting on Δ and on η(4z)^6.
//!
//! `cargo run --example tau_hecke`

use num_bigint::BigInt;
use regulus::modform::EtaQuotientSpec;
use regulus::numtheory::{discriminant_series, hecke_tp, tau_exact, tau_mod2, CharacterSpec};
use regulus::Ring;

fn main() -> regulus::Result<()> {
    let tau = tau_exact(12)?;
    println!("τ(1..12) = {:?}", tau[1..].iter().map(|t| t.to_string()).collect::<Vec<_>>());
    println!("τ(n) odd exactly at odd squares: τ(9) mod 2 = {}", tau_mod2(9));

    let delta = discriminant_series(300, Ring::Integer)?;
    let t5 = hecke_tp(&delta, 5, 12, &CharacterSpec::trivial(1));
    let eigen = t5.to_bigints() == delta.truncate(t5.trunc()).scale(4830).to_bigints();
    println!("Δ | T_5 = τ(5) Δ: {eigen}");

    let spec: EtaQuotientSpec = "N=16; eta(4)^6".parse()?;
    let f = spec.q_expansion(600, Ring::Integer)?;
    let chi = spec.character_of()?;
    for p in [3u64, 5, 13] {
        let tp = hecke_tp(&f, p, 3, &chi);
        let ap = f.coeff(p as i64);
        let scaled: Vec<BigInt> = f.truncate(tp.trunc()).to_bigints().into_iter().map(|c| c * &ap).collect();
        println!("η(4z)^6 | T_{p} = {ap} · η(4z)^6: {}", tp.to_bigints() == scaled);
    }
    Ok(())
}
