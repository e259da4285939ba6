//! Brute-force counting tables used as ground truth.
//!
//! `cargo run --example oracles`

use regulus::oracles::{count_lregular, count_tuple, is_triangular, partition_count, ped_count, repr_x2_2y2};

fn main() {
    let show = |name: &str, v: &[num_bigint::BigInt]| {
        println!("{name:<12} {}", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "));
    };
    show("p(n)", &partition_count(12).values);
    show("ped(n)", &ped_count(12).values);
    show("b_3(n)", &count_lregular(3, 12).values);
    show("T_(2,3)(n)", &count_tuple(2, 3, 12).values);

    let tri: Vec<u64> = (0..50).filter(|&n| is_triangular(n).is_some()).collect();
    println!("triangular below 50: {tri:?}");
    let forms: Vec<u64> = (1..30).filter(|&n| repr_x2_2y2(n)).collect();
    println!("n = x^2 + 2y^2 below 30: {forms:?}");
}
