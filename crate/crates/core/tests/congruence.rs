//! Claim generation and verification, cross-checked against brute-force counts.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use regulus::congruence::{
    all_claims, claims_from_json, claims_to_json, density_scan, discover, generate_family, partition_series,
    t2_series, Claim, CongruenceClaim, Engine, FamilyParams, IndexFilter, Progression, RelationClaim, THEOREMS,
};
use regulus::oracles::{count_lregular, partition_count};
use regulus::{Error, FQuotient, Tag};

/// `T_{ℓ,k}(n) mod m` for `n <= nmax` by convolving brute-force ℓ-regular counts.
fn oracle_residues(ell: u64, k: u32, nmax: usize, m: u64) -> Vec<u64> {
    let big = BigInt::from(m);
    let base: Vec<u64> = count_lregular(ell, nmax)
        .values
        .iter()
        .map(|v| (v % &big).to_u64().unwrap())
        .collect();
    let mut acc = base.clone();
    for _ in 1..k {
        acc = (0..=nmax)
            .map(|n| (0..=n).map(|j| acc[j] as u128 * base[n - j] as u128 % m as u128).sum::<u128>() as u64 % m)
            .collect();
    }
    acc
}

fn small(theorem: &str, params: FamilyParams) -> Vec<CongruenceClaim> {
    generate_family(theorem, &params)
        .unwrap()
        .claims
        .into_iter()
        .filter_map(|c| match c {
            Claim::Congruence(c) => Some(c),
            Claim::Relation(_) => None,
        })
        .collect()
}

#[test]
fn generated_families_hold_on_brute_force_counts() {
    const TOP: usize = 6000;
    let t2 = oracle_residues(2, 3, TOP, 24);
    let t4 = oracle_residues(4, 3, TOP, 12);
    let mut checked = 0;
    let alpha0 = || FamilyParams {
        alpha: Some(vec![0]),
        ..Default::default()
    };
    let mut claims = small("c1.4", alpha0());
    claims.extend(small("t0.1", FamilyParams::default()));
    claims.extend(small("t0.1.0.0", FamilyParams::default()));
    claims.extend(small("t0.0.1", alpha0()));
    claims.extend(small("thm1.00-cor", FamilyParams { k: Some(vec![0]), ..Default::default() }));
    claims.extend(small("t4", FamilyParams { k: Some(vec![1]), primes: Some(vec![3, 5]), ..Default::default() }));
    claims.extend(small("c1.4.1", FamilyParams { alpha: Some(vec![1]), ..Default::default() }));
    claims.extend(small("remark-t4", FamilyParams::default()));
    for c in &claims {
        let table = if c.series == t2_series() { &t2 } else { &t4 };
        let mut n = 0;
        while (c.a * n + c.b) as usize <= TOP {
            if c.filter.admits(n) {
                let got = table[(c.a * n + c.b) as usize] % c.modulus;
                assert_eq!(got, c.expected_at(n), "{} at n = {n}", c.claim_id);
                checked += 1;
            }
            n += 1;
        }
    }
    assert!(checked > 5000, "{checked}");
}

#[test]
fn engine_agrees_with_oracle_on_counterexamples() {
    let engine = Engine::new(50_000);
    let t2 = oracle_residues(2, 3, 5000, 24);
    // T2(9n+5) mod 24 is not a congruence; the engine must name the same first failure as the oracle.
    let claim = CongruenceClaim::new("false", t2_series(), 9, 5, 24);
    let r = engine.verify_instance(&claim, 500).unwrap();
    let first = (0..=500u64).find(|&n| t2[(9 * n + 5) as usize] != 0).unwrap();
    let ce = r.first_counterexample.unwrap();
    assert_eq!(ce.n, first);
    assert_eq!(ce.value, t2[(9 * first + 5) as usize].to_string());
}

#[test]
fn the_filter_is_load_bearing() {
    let engine = Engine::new(100_000);
    let claims = small("t0.0.1", FamilyParams { primes: Some(vec![5]), alpha: Some(vec![0]), ..Default::default() });
    let filtered = &claims[0];
    assert_eq!(filtered.filter, IndexFilter::NotDivisibleBy { p: 5 });
    assert!(engine.verify_instance(filtered, 1000).unwrap().passed());
    let unfiltered = filtered.clone().filtered(IndexFilter::All);
    let r = engine.verify_instance(&unfiltered, 1000).unwrap();
    assert!(!r.passed());
    assert_eq!(r.first_counterexample.unwrap().n % 5, 0);
}

#[test]
fn relations_and_scales() {
    let engine = Engine::new(200_000);
    let lemmas = generate_family("c1.4-lemmas", &FamilyParams::default()).unwrap().claims;
    for r in engine.verify_all(&lemmas, Some(500)).unwrap() {
        assert!(r.passed(), "{}", r.summary());
    }
    let Claim::Relation(rel) = &lemmas[0] else { panic!("expected a relation") };
    let broken = RelationClaim {
        lhs_scale: 1,
        ..rel.clone()
    };
    assert!(!engine.verify_relation(&broken, 500).unwrap().passed());
}

#[test]
fn one_expansion_serves_every_modulus() {
    let engine = Engine::new(300_000);
    let mut claims = generate_family("c1.4", &FamilyParams::default()).unwrap().claims;
    claims.extend(generate_family("t0.1", &FamilyParams::default()).unwrap().claims);
    claims.extend(generate_family("t4", &FamilyParams { primes: Some(vec![3]), ..Default::default() }).unwrap().claims);
    let reports = engine.verify_all(&claims, None).unwrap();
    assert!(reports.iter().all(|r| r.passed()));
    assert_eq!(engine.cache().constructions(), 1);
    assert!(reports.windows(2).all(|w| w[0].claim_id <= w[1].claim_id));
}

#[test]
fn budgets_and_side_conditions() {
    let engine = Engine::new(1000);
    let claim = CongruenceClaim::new("big", t2_series(), 9, 1, 6);
    assert!(matches!(engine.verify_instance(&claim, 200), Err(Error::BudgetExceeded { needed: 1801, budget: 1000 })));
    assert_eq!(engine.verify(&Claim::Congruence(claim), None).unwrap().n_max, 111);

    let bad = |theorem: &str, primes: Vec<u64>| {
        generate_family(theorem, &FamilyParams { primes: Some(primes), ..Default::default() })
    };
    assert!(matches!(bad("t0.0.1", vec![17]), Err(Error::SideConditionViolated(_))));
    assert!(matches!(bad("thm1.00", vec![17]), Err(Error::SideConditionViolated(_))));
    assert!(matches!(bad("conjp", vec![17]), Err(Error::SideConditionViolated(_))));
    assert!(matches!(bad("t2", vec![4]), Err(Error::SideConditionViolated(_))));
    assert!(matches!(generate_family("nope", &FamilyParams::default()), Err(Error::UnknownSelection(_))));
}

#[test]
fn catalog_of_claims() {
    let claims = all_claims().unwrap();
    for t in THEOREMS {
        assert!(claims.iter().any(|c| c.id().starts_with(t)), "{t} generated nothing");
    }
    let ids: std::collections::BTreeSet<&str> = claims.iter().map(|c| c.id()).collect();
    assert_eq!(ids.len(), claims.len(), "duplicate claim ids");
    assert!(claims.iter().filter(|c| c.id().starts_with("conjp")).all(|c| c.tag() == Tag::Conjecture));
    assert_eq!(claims_from_json(&claims_to_json(&claims)).unwrap(), claims);

    let t2 = generate_family("t2", &FamilyParams::default()).unwrap();
    assert!(t2.notes.iter().any(|n| n.contains("no prime 5 <= p <= 257 has ω(p) odd")));
}

#[test]
fn densities_count_exactly() {
    let engine = Engine::new(10_000);
    let p = partition_count(2000);
    let zeros = p.values[..1000].iter().filter(|v| (*v % 2u32) == BigInt::from(0)).count() as u64;
    let d = density_scan(&engine, &Progression::new(partition_series(), 1, 0), 2, 0, &[1000, 10, 100]).unwrap();
    assert_eq!(d.checkpoints.iter().map(|c| c.x).collect::<Vec<_>>(), [10, 100, 1000]);
    assert_eq!(d.checkpoints[2].count, zeros);
    assert!(d.checkpoints.iter().all(|c| (0.0..=1.0).contains(&c.proportion)));
    let mut csv = Vec::new();
    d.write_csv(&mut csv).unwrap();
    assert!(String::from_utf8(csv).unwrap().starts_with("X,count,proportion\n10,"));
    assert!(density_scan(&engine, &Progression::new(partition_series(), 1, 0), 2, 0, &[]).is_err());
}

#[test]
fn discovery_finds_ramanujan() {
    let engine = Engine::new(100_000);
    let found = discover(&engine, &partition_series(), 5, 10, 400, 50).unwrap();
    let primitive: Vec<(u64, u64)> = found.iter().filter(|c| c.implied_by.is_none()).map(|c| (c.a, c.b)).collect();
    assert_eq!(primitive, [(5, 4)]);
    assert!(found.iter().any(|c| (c.a, c.b) == (10, 9) && c.implied_by == Some((5, 4))));
    assert!(found.iter().all(|c| c.tag == Tag::Empirical && c.reverified));
    assert!(matches!(discover(&engine, &partition_series(), 1, 5, 10, 1), Err(Error::InvalidModulus(1))));
    assert!(discover(&engine, &FQuotient::f(1), 7, 3, 10, 100).unwrap().is_empty());
}
