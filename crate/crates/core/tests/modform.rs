//! Eta-quotient arithmetic: weights, characters, cusp orders and B-series.

use num_rational::Ratio;
use num_traits::Signed;
use regulus::modform::{b_series_check, divisors, BSeriesParams, EtaQuotientSpec, Holomorphy};
use regulus::numtheory::{is_prime, CharacterSpec};
use regulus::oracles::nu_p;
use regulus::{Error, Ring};

#[test]
fn eta_4z_sixth_power_certificate() {
    let spec: EtaQuotientSpec = "N=16; eta(4)^6".parse().unwrap();
    assert_eq!(spec.weight(), Ratio::from_integer(3));
    assert!(spec.check_ono_conditions().passed());
    assert_eq!(spec.character_of().unwrap(), CharacterSpec::kronecker(-4, 16));
    assert_eq!(spec.is_holomorphic().unwrap(), Holomorphy::Cusp);
    assert_eq!(spec.cusp_orders().len(), divisors(16).len());
    assert_eq!(spec.to_string(), "N=16; eta(4)^6");
}

#[test]
fn delta_and_non_holomorphic_quotients() {
    let delta: EtaQuotientSpec = "N=1; eta(1)^24".parse().unwrap();
    assert_eq!(delta.weight(), Ratio::from_integer(12));
    assert!(delta.character_of().unwrap().is_trivial());
    let expansion = delta.q_expansion(10, Ring::Integer).unwrap();
    assert_eq!(expansion.coeff(2), (-24).into());

    let inverse: EtaQuotientSpec = "N=2; eta(1)^-24".parse().unwrap();
    assert!(matches!(inverse.is_holomorphic().unwrap(), Holomorphy::NotHolomorphic { .. }));

    let bad: EtaQuotientSpec = "N=4; eta(2)^1".parse().unwrap();
    assert!(!bad.check_ono_conditions().passed());
    assert!(matches!(bad.character_of(), Err(Error::ConditionsNotMet(_))));
    assert!(matches!(bad.q_expansion(10, Ring::Integer), Err(Error::ConditionsNotMet(_))));
}

#[test]
fn literal_errors_report_positions() {
    assert!(matches!("N=16; eta(3)^6".parse::<EtaQuotientSpec>(), Err(Error::Parse { pos: 6, .. })));
    assert_eq!(EtaQuotientSpec::new(16, [(3, 6)]).unwrap_err(), Error::NotADivisor { d: 3, level: 16 });
    assert!(matches!("M=16; eta(4)^6".parse::<EtaQuotientSpec>(), Err(Error::Parse { pos: 0, .. })));
    assert!(matches!("l=2 p=2 a=1 m=2".parse::<BSeriesParams>(), Err(Error::Parse { .. })));
    assert!(matches!("l=2 p=2 a=1 m=2 k=x".parse::<BSeriesParams>(), Err(Error::Parse { .. })));
    let b: BSeriesParams = "k=3 m=2 a=1 p=2 l=2".parse().unwrap();
    assert_eq!(b, BSeriesParams::new(2, 2, 1, 2, 3));
    assert_eq!(b.to_string().parse::<BSeriesParams>().unwrap(), b);
}

/// Every parameter set with ℓ <= 32 that meets the hypotheses has an eta-quotient
/// that is holomorphic on Γ_0(576ℓ) with the predicted weight.
#[test]
fn lemma_bounds_scan() {
    let mut admissible = 0;
    let mut rejected_with_negative_cusp = 0;
    for ell in 2..=32u64 {
        for p in (2..=ell).filter(|&p| is_prime(p) && ell % p == 0) {
            let a = nu_p(p, ell).unwrap();
            for m in a + 1..=a + 3 {
                if p.checked_pow(m + a).is_none_or(|v| v > 10_000_000) {
                    continue;
                }
                for k in 1..=60u64 {
                    let params = BSeriesParams::new(ell, p, a, m, k);
                    let spec = params.spec(params.stated_level()).unwrap();
                    let min_order = spec.cusp_orders().into_iter().map(|(_, o)| o).min().unwrap();
                    if params.check_hypotheses().is_err() {
                        rejected_with_negative_cusp += usize::from(min_order.is_negative());
                        continue;
                    }
                    admissible += 1;
                    assert!(spec.check_ono_conditions().passed(), "{params}: {}", spec.check_ono_conditions().reason());
                    assert_eq!(spec.weight(), params.expected_weight(), "{params}");
                    assert!(!min_order.is_negative(), "{params}: cusp order {min_order}");
                    for (t, s) in params.lemma_classes() {
                        assert!(!params.lemma_bound(t, s).is_negative(), "{params}: class ({t}, {s})");
                    }
                    assert_eq!(params.stated_level() % params.minimal_level(), 0, "{params}");
                }
            }
        }
    }
    assert!(admissible > 100, "only {admissible} admissible parameter sets");
    assert!(rejected_with_negative_cusp > 0, "the hypotheses never excluded a non-holomorphic case");
}

#[test]
fn b_series_reports() {
    let r = b_series_check(BSeriesParams::new(2, 2, 1, 2, 3), 1200).unwrap();
    assert!(r.passed());
    assert_eq!((r.stated_level, r.minimal_level), (1152, 384));
    assert!(!r.notes.is_empty());
    assert!(r.cusp_table().iter().all(|row| row[2] != "-"));

    let r = b_series_check(BSeriesParams::new(3, 3, 1, 2, 5), 600).unwrap();
    assert!(r.passed(), "{:?}", r.congruence);

    assert!(matches!(
        b_series_check(BSeriesParams::new(2, 2, 1, 2, 7), 100),
        Err(Error::HypothesisViolated(_))
    ));
    assert!(matches!(
        b_series_check(BSeriesParams::new(6, 2, 2, 3, 1), 100),
        Err(Error::HypothesisViolated(_))
    ));
}
