//! Algebraic invariants of truncated series, checked on random inputs.

use num_bigint::BigInt;
use proptest::prelude::*;
use regulus::{Error, Ring, TruncatedSeries};

fn coeffs(len: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-50i64..50, len)
}

/// Series with constant term ±1, so they are units over every ring.
fn unit_coeffs(len: usize) -> impl Strategy<Value = Vec<i64>> {
    (prop::bool::ANY, coeffs(len - 1)).prop_map(|(neg, mut rest)| {
        rest.insert(0, if neg { -1 } else { 1 });
        rest
    })
}

fn modulus() -> impl Strategy<Value = u64> {
    prop_oneof![Just(2u64), Just(3), Just(6), Just(12), Just(24), 2u64..1000]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn multiplication_commutes_and_associates(a in coeffs(30), b in coeffs(30), c in coeffs(30), m in modulus()) {
        for ring in [Ring::Integer, Ring::Mod(m)] {
            let (x, y, z) = (
                TruncatedSeries::from_coeffs(ring, &a),
                TruncatedSeries::from_coeffs(ring, &b),
                TruncatedSeries::from_coeffs(ring, &c),
            );
            prop_assert_eq!(x.mul(&y).unwrap(), y.mul(&x).unwrap());
            prop_assert_eq!(x.mul(&y).unwrap().mul(&z).unwrap(), x.mul(&y.mul(&z).unwrap()).unwrap());
            let distributed = x.mul(&y).unwrap().add(&x.mul(&z).unwrap()).unwrap();
            prop_assert_eq!(x.mul(&y.add(&z).unwrap()).unwrap(), distributed);
        }
    }

    #[test]
    fn division_inverts_multiplication(a in coeffs(40), u in unit_coeffs(40), m in modulus()) {
        for ring in [Ring::Integer, Ring::Mod(m)] {
            let x = TruncatedSeries::from_coeffs(ring, &a);
            let d = TruncatedSeries::from_coeffs(ring, &u);
            prop_assert_eq!(x.mul(&d).unwrap().div(&d).unwrap(), x.clone());
            let inv = d.invert().unwrap();
            prop_assert_eq!(d.mul(&inv).unwrap(), TruncatedSeries::one(ring, d.trunc()));
        }
    }

    #[test]
    fn reduction_is_a_ring_homomorphism(a in coeffs(25), b in coeffs(25), m in modulus()) {
        let x = TruncatedSeries::from_coeffs(Ring::Integer, &a);
        let y = TruncatedSeries::from_coeffs(Ring::Integer, &b);
        let exact = x.mul(&y).unwrap().reduce_mod(m).unwrap();
        let reduced = x.reduce_mod(m).unwrap().mul(&y.reduce_mod(m).unwrap()).unwrap();
        prop_assert_eq!(exact, reduced);
        prop_assert_eq!(
            x.sub(&y).unwrap().reduce_mod(m).unwrap(),
            x.reduce_mod(m).unwrap().sub(&y.reduce_mod(m).unwrap()).unwrap()
        );
    }

    #[test]
    fn magnify_then_extract_is_identity(a in coeffs(20), t in 1usize..6) {
        let x = TruncatedSeries::from_coeffs(Ring::Integer, &a);
        let y = x.magnify(t);
        prop_assert_eq!(y.trunc(), x.trunc() * t);
        prop_assert_eq!(y.extract_ap(t, 0), x.clone());
        for r in 1..t {
            prop_assert!(y.extract_ap(t, r).is_zero());
        }
    }

    #[test]
    fn dissection_reassembles(a in coeffs(36), m in 1usize..6) {
        let x = TruncatedSeries::from_coeffs(Ring::Integer, &a);
        let mut total = TruncatedSeries::zero(Ring::Integer, x.trunc());
        for r in 0..m {
            let part = x.extract_ap(m, r).magnify(m).shift(r);
            let part = TruncatedSeries::from_bigints(Ring::Integer, {
                let mut v = part.to_bigints();
                v.resize(x.trunc() + 1, BigInt::from(0));
                v
            });
            total = total.add(&part).unwrap();
        }
        prop_assert_eq!(total, x);
    }

    #[test]
    fn powers_agree_with_repeated_products(a in unit_coeffs(15), e in -4i64..6) {
        let x = TruncatedSeries::from_coeffs(Ring::Integer, &a);
        let mut expected = TruncatedSeries::one(Ring::Integer, x.trunc());
        let base = if e < 0 { x.invert().unwrap() } else { x.clone() };
        for _ in 0..e.unsigned_abs() {
            expected = expected.mul(&base).unwrap();
        }
        prop_assert_eq!(x.pow(e).unwrap(), expected);
    }

    #[test]
    fn binary_ops_truncate_to_the_shorter(a in coeffs(10), b in coeffs(25)) {
        let x = TruncatedSeries::from_coeffs(Ring::Integer, &a);
        let y = TruncatedSeries::from_coeffs(Ring::Integer, &b);
        prop_assert_eq!(x.add(&y).unwrap().trunc(), 9);
        prop_assert_eq!(x.mul(&y).unwrap().trunc(), 9);
    }
}

#[test]
fn ring_errors() {
    let a = TruncatedSeries::from_coeffs(Ring::Mod(6), &[1, 2, 3]);
    let b = TruncatedSeries::from_coeffs(Ring::Mod(5), &[1, 2, 3]);
    assert!(matches!(a.mul(&b), Err(Error::RingMismatch(..))));
    let non_unit = TruncatedSeries::from_coeffs(Ring::Mod(6), &[2, 1]);
    assert!(matches!(a.div(&non_unit), Err(Error::NonUnitConstantTerm(..))));
    assert!(matches!(a.reduce_mod(4), Err(Error::IncompatibleModulus { .. })));
    assert!(matches!(Ring::modulo(1), Err(Error::InvalidModulus(1))));
    assert!(matches!(Ring::modulo(0), Err(Error::InvalidModulus(0))));
}
