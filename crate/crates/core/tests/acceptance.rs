//! Acceptance suite: one PASS/FAIL line per criterion, exact comparisons throughout.
//!
//! Runs without the libtest harness so every line is printed even when an
//! earlier criterion fails. The process exits non-zero if any gating
//! criterion fails; criterion 13 concerns a conjecture and never gates.

use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use regulus::congruence::{
    density_scan, generate_family, t2_series, Claim, Engine, FamilyParams, Progression, DEFAULT_BUDGET,
};
use regulus::etaq::{expand_fquotient, verify_identity_by_id, FQuotient, CORE_IDENTITIES};
use regulus::modform::{b_series_check, BSeriesParams, EtaQuotientSpec, Holomorphy};
use regulus::numtheory::{
    hecke_tp, newman_verify, omega, omega_divisible_by_p_cubed, primes_between, tau_exact, tau_mod2,
    NewmanParams,
};
use regulus::oracles::count_tuple;
use regulus::{Ring, Tag, VerificationReport};

/// First verified run: `(X, count)` of zero residues for each density scan.
const GOLDEN_T2_9N1_MOD6: [(u64, u64); 3] = [(1_000, 955), (10_000, 9859), (100_000, 99553)];
const GOLDEN_T23_MOD2: [(u64, u64); 2] = [(1_000, 955), (10_000, 9859)];
const GOLDEN_T33_MOD3: [(u64, u64); 2] = [(1_000, 823), (10_000, 8566)];

struct Outcome {
    passed: bool,
    gating: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        gating: true,
        detail: detail.into(),
    }
}

fn params() -> FamilyParams {
    FamilyParams::default()
}

fn family(theorem: &str, p: FamilyParams) -> Vec<Claim> {
    generate_family(theorem, &p).expect("family generates").claims
}

/// Verify claims; returns (all passed, description of the first failure).
fn run_claims(engine: &Engine, claims: &[Claim], n_max: Option<u64>) -> (bool, String) {
    let reports: Vec<VerificationReport> = engine.verify_all(claims, n_max).expect("verification runs");
    let failed: Vec<&VerificationReport> = reports.iter().filter(|r| !r.passed()).collect();
    let checked: u64 = reports.iter().map(|r| r.checked).sum();
    match failed.first() {
        None => (true, format!("{} claims, {checked} indices checked", reports.len())),
        Some(f) => (false, format!("{} of {} claims fail; first: {}", failed.len(), reports.len(), f.summary())),
    }
}

fn criterion_1() -> Outcome {
    for ell in [2u64, 3, 4, 5, 9] {
        for k in [1u32, 2, 3, 5, 7] {
            let s = expand_fquotient(&FQuotient::tuple_regular(ell, k as i64), 200, Ring::Integer).unwrap();
            let oracle = count_tuple(ell, k, 200);
            if s.to_bigints() != oracle.values {
                return outcome(false, format!("series and oracle differ at ℓ={ell}, k={k}"));
            }
        }
    }
    outcome(true, "25 (ℓ,k) pairs agree with the counting oracle for n <= 200")
}

fn criterion_2() -> Outcome {
    for id in CORE_IDENTITIES {
        let r = verify_identity_by_id(id, 300).unwrap();
        if !r.passed() {
            return outcome(false, r.summary());
        }
    }
    outcome(true, format!("{} identities hold to q^300", CORE_IDENTITIES.len()))
}

fn criterion_3(engine: &Engine) -> Outcome {
    let claims = family("prime-tuple", params());
    let (ok, d) = run_claims(engine, &claims, Some(2000));
    outcome(ok && claims.len() == 3 * (1 + 2 + 4 + 6), d)
}

fn criterion_4(engine: &Engine) -> Outcome {
    let (ok, d) = run_claims(engine, &family("t0.1", params()), Some(10_000));
    outcome(ok, d)
}

fn criterion_5(engine: &Engine) -> Outcome {
    let p = FamilyParams {
        alpha: Some(vec![0, 1]),
        ..params()
    };
    let (ok, d) = run_claims(engine, &family("c1.4", p), None);
    outcome(ok, format!("to the {DEFAULT_BUDGET} budget: {d}"))
}

fn criterion_6(engine: &Engine) -> Outcome {
    let p = FamilyParams {
        alpha: Some(vec![0, 1, 2]),
        ..params()
    };
    let (ok1, d1) = run_claims(engine, &family("c1.4.1", p), None);
    let (ok2, d2) = run_claims(engine, &family("remark-t4", params()), Some(10_000));
    outcome(ok1 && ok2, format!("mod-3 families: {d1}; T4(81n+57) mod 12: {d2}"))
}

fn criterion_7(engine: &Engine) -> Outcome {
    let t1 = family(
        "t0.1.0.0",
        FamilyParams {
            primes: Some(vec![7]),
            ..params()
        },
    );
    let valid_r = t1.len();
    let t2 = family(
        "t0.0.1",
        FamilyParams {
            primes: Some(vec![5]),
            alpha: Some(vec![0, 1]),
            ..params()
        },
    );
    let (ok1, d1) = run_claims(engine, &t1, Some(1000));
    let (ok2, d2) = run_claims(engine, &t2, Some(1000));
    outcome(ok1 && ok2 && valid_r == 3 && t2.len() == 2, format!("p=7 ({valid_r} valid r): {d1}; p=5: {d2}"))
}

fn criterion_8(engine: &Engine) -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    let p5 = NewmanParams::f3_6_over_f1(5);
    let p7 = NewmanParams::f3_6_over_f1(7);
    let phi5 = p5.phi_series(25 * 300 + p5.delta().unwrap() as usize).unwrap();
    let phi7 = p7.phi_series(49 * 300 + p7.delta().unwrap() as usize).unwrap();
    let w5 = omega(5, &phi5).unwrap();
    let a17 = phi5.coeff(17);
    let remark = w5.is_even() && a17.is_odd();
    ok &= remark;
    parts.push(format!("ω(5) = {w5}, a(17) = {a17}: remark {}", if remark { "reproduced" } else { "not reproduced" }));

    let (inst, d) = run_claims(engine, &family("t2-remark", params()), Some(1000));
    ok &= inst;
    parts.push(format!("T2(1875n+1703) mod 12: {d}"));

    for (params, phi) in [(&p5, &phi5), (&p7, &phi7)] {
        let r = newman_verify(params, phi, 300).unwrap();
        ok &= r.passed();
        parts.push(format!("Newman p={}: {}", params.p, if r.passed() { "holds" } else { "FAILS" }));
    }
    for (p, phi) in [(5u64, &phi5), (7, &phi7)] {
        let div = omega_divisible_by_p_cubed(p, phi).unwrap();
        ok &= div;
        parts.push(format!("p^3 | ω({p}) = {}: {div}", omega(p, phi).unwrap()));
    }
    outcome(ok, parts.join("; "))
}

fn criterion_9(engine: &Engine) -> Outcome {
    let claims = family(
        "t4",
        FamilyParams {
            primes: Some(vec![3, 7]),
            k: Some(vec![1]),
            ..params()
        },
    );
    let (first, rest): (Vec<Claim>, Vec<Claim>) = claims.into_iter().partition(|c| c.id().starts_with("t4:e12.0.1"));
    let (ok1, d1) = run_claims(engine, &first, Some(10_000));
    let (ok2, d2) = run_claims(engine, &rest, None);
    let tau = tau_exact(3000).unwrap();
    let two = BigInt::from(2);
    let parity_ok = (1..=3000u64).all(|n| u8::from(tau[n as usize].mod_floor(&two).is_one()) == tau_mod2(n));
    outcome(
        ok1 && ok2 && parity_ok,
        format!("e12.0.1: {d1}; e12.0.2/e12.0.3 at k=1: {d2}; τ parity oracle agrees for n <= 3000: {parity_ok}"),
    )
}

fn criterion_10(engine: &Engine) -> Outcome {
    let cor = family(
        "thm1.00-cor",
        FamilyParams {
            primes: Some(vec![5]),
            k: Some(vec![0]),
            ..params()
        },
    );
    let (ok1, d1) = run_claims(engine, &cor, Some(400));
    let spec: EtaQuotientSpec = "N=16; eta(4)^6".parse().unwrap();
    let f = spec.q_expansion(2000, Ring::Integer).unwrap();
    let chi = spec.character_of().unwrap();
    let mut eigen = true;
    for p in [5u64, 7, 13, 17] {
        let tp = hecke_tp(&f, p, 3, &chi);
        let ap = f.coeff(p as i64);
        let scaled: Vec<BigInt> = f.truncate(tp.trunc()).to_bigints().into_iter().map(|c| c * &ap).collect();
        eigen &= tp.to_bigints() == scaled;
    }
    let off: Vec<u64> = primes_between(2, 100).into_iter().filter(|p| p % 8 != 1).collect();
    let nonzero = off.iter().find(|&&p| !f.coeff(p as i64).is_zero());
    let vanish = nonzero.is_none();
    let even = off.iter().all(|&p| f.coeff(p as i64).is_even());
    let vanish_detail = match nonzero {
        None => "true".to_string(),
        Some(&p) => format!("false, a({p}) = {} (all such a(p) even: {even})", f.coeff(p as i64)),
    };
    outcome(
        ok1 && cor.len() == 4 && eigen && vanish,
        format!("corollary p=5: {d1}; T_p f = a(p) f at p ∈ {{5,7,13,17}}: {eigen}; a(p) = 0 for p <= 100, p ≢ 1 mod 8: {vanish_detail}"),
    )
}

fn criterion_11() -> Outcome {
    let r = b_series_check(BSeriesParams::new(2, 2, 1, 2, 3), 2400).unwrap();
    let spec: EtaQuotientSpec = "N=16; eta(4)^6".parse().unwrap();
    let w3 = spec.weight() == num_rational::Ratio::from_integer(3);
    let cusp = spec.check_ono_conditions().passed() && spec.is_holomorphic().unwrap() == Holomorphy::Cusp;
    let level = r.stated_level == 576 * 2 && r.stated_level_valid;
    outcome(
        r.passed() && level && w3 && cusp,
        format!(
            "B-series (2,2,1,2,3) to q^2400: congruence {}, level 576ℓ = {} valid {} (minimal {}), min cusp order {}; η(4z)^6 weight 3 cusp form on Γ0(16): {}",
            if r.congruence.passed() { "holds" } else { "FAILS" },
            r.stated_level,
            r.stated_level_valid,
            r.minimal_level,
            r.min_cusp_order,
            w3 && cusp
        ),
    )
}

fn counts(engine: &Engine, prog: Progression, m: u64, xs: &[u64]) -> Vec<(u64, u64)> {
    let d = density_scan(engine, &prog, m, 0, xs).unwrap();
    d.checkpoints.iter().map(|c| (c.x, c.count)).collect()
}

fn increasing(c: &[(u64, u64)]) -> bool {
    c.windows(2).all(|w| (w[0].1 as u128) * (w[1].0 as u128) < (w[1].1 as u128) * (w[0].0 as u128))
}

fn criterion_12(engine: &Engine) -> Outcome {
    let a = counts(engine, Progression::new(t2_series(), 9, 1), 6, &[1_000, 10_000, 100_000]);
    let b = counts(engine, Progression::new(FQuotient::tuple_regular(2, 3), 1, 0), 2, &[1_000, 10_000]);
    let c = counts(engine, Progression::new(FQuotient::tuple_regular(3, 3), 1, 0), 3, &[1_000, 10_000]);
    let monotone = increasing(&a) && increasing(&b) && increasing(&c);
    let golden = a == GOLDEN_T2_9N1_MOD6 && b == GOLDEN_T23_MOD2 && c == GOLDEN_T33_MOD3;
    outcome(
        monotone && golden,
        format!("T2(9n+1) mod 6 {a:?}; T_(2,3) mod 2 {b:?}; T_(3,3) mod 3 {c:?}; increasing {monotone}; golden {golden}"),
    )
}

fn criterion_13(engine: &Engine) -> Outcome {
    let claims = family(
        "conjp",
        FamilyParams {
            primes: Some(vec![5]),
            ..params()
        },
    );
    let tagged = claims.iter().all(|c| c.tag() == Tag::Conjecture);
    let (ok, d) = run_claims(engine, &claims, Some(400));
    Outcome {
        passed: ok && tagged && claims.len() == 4,
        gating: false,
        detail: format!("CONJECTURE (non-gating): {d}"),
    }
}

type Criterion = Box<dyn Fn(&Engine) -> Outcome>;

fn main() {
    // `cargo test -- --list` and filters come through here; there is a single suite.
    if std::env::args().any(|a| a == "--list") {
        println!("acceptance: test");
        return;
    }
    let engine = Engine::new(DEFAULT_BUDGET);
    let criteria: Vec<(&str, Criterion)> = vec![
        ("oracle equivalence", Box::new(|_| criterion_1())),
        ("identity catalog", Box::new(|_| criterion_2())),
        ("prime-tuple congruences", Box::new(criterion_3)),
        ("T2(9n+1) mod 6 at triangular n", Box::new(criterion_4)),
        ("mod-24 families", Box::new(criterion_5)),
        ("T4 mod-3 families", Box::new(criterion_6)),
        ("Legendre-filtered mod-6 families", Box::new(criterion_7)),
        ("ω(p), Newman recurrence, mod-12 instance", Box::new(criterion_8)),
        ("mod-2 families and τ parity", Box::new(criterion_9)),
        ("corollary and Hecke eigenform", Box::new(criterion_10)),
        ("eta-quotient machinery", Box::new(|_| criterion_11())),
        ("zero-residue densities", Box::new(criterion_12)),
        ("conjectured family", Box::new(criterion_13)),
    ];
    let start = Instant::now();
    let mut gating_failures = 0;
    let mut passed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = check(&engine);
        let status = if o.passed { "PASS" } else { "FAIL" };
        passed += usize::from(o.passed);
        if !o.passed && o.gating {
            gating_failures += 1;
        }
        println!(
            "criterion {:>2} {status} {name} ({:.1}s): {}",
            i + 1,
            t.elapsed().as_secs_f64(),
            o.detail
        );
    }
    println!(
        "acceptance: {passed} of {} criteria passed, {gating_failures} gating failure(s), {:.1}s total",
        criteria.len(),
        start.elapsed().as_secs_f64()
    );
    if gating_failures > 0 {
        std::process::exit(1);
    }
}
