//! Congruence claims, the families that generate them, and the engine that checks them.
//!
//! A [`CongruenceClaim`] says that the coefficients `c(a n + b)` of an
//! f-quotient are `≡ r (mod M)` for every admitted `n`. A [`RelationClaim`]
//! compares two progressions against each other. Families expand a theorem's
//! parameters into concrete claims with their side conditions checked.
//!
//! The [`Engine`] owns a shared [`ExpansionCache`], so one expansion of
//! `f_2^3 / f_1^3` modulo 24 serves every claim modulo 24, 12, 6 or 2.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::etaq::{ExpansionCache, FQuotient};
use crate::numtheory::{is_prime, legendre, omega, tau_mod2, NewmanParams};
use crate::oracles::is_triangular;
use crate::report::{Counterexample, Tag, VerificationReport};
use crate::series::{Ring, TruncatedSeries};

/// Largest coefficient index any expansion may reach unless configured otherwise.
pub const DEFAULT_BUDGET: usize = 2_000_000;

/// Which progression indices `n` a claim asserts anything about.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum IndexFilter {
    #[default]
    All,
    /// `p ∤ n`.
    NotDivisibleBy { p: u64 },
    /// `n ≢ residue (mod modulus)`.
    NotCongruent { modulus: u64, residue: u64 },
}

impl IndexFilter {
    pub fn admits(&self, n: u64) -> bool {
        match *self {
            IndexFilter::All => true,
            IndexFilter::NotDivisibleBy { p } => !n.is_multiple_of(p),
            IndexFilter::NotCongruent { modulus, residue } => n % modulus != residue % modulus,
        }
    }
}

impl fmt::Display for IndexFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexFilter::All => f.write_str("all n"),
            IndexFilter::NotDivisibleBy { p } => write!(f, "{p} ∤ n"),
            IndexFilter::NotCongruent { modulus, residue } => write!(f, "n ≢ {residue} mod {modulus}"),
        }
    }
}

/// Residue that depends on `n` instead of being constant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ResidueRule {
    /// `on` when `n` is a triangular number, the claim's `expected_residue` otherwise.
    Triangular { on: u64 },
}

/// `c(a n + b) ≡ expected (mod modulus)` for the coefficients `c` of `series`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceClaim {
    pub claim_id: String,
    pub series: FQuotient,
    pub a: u64,
    pub b: u64,
    pub modulus: u64,
    #[serde(default)]
    pub expected_residue: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residue_rule: Option<ResidueRule>,
    #[serde(default)]
    pub filter: IndexFilter,
    #[serde(default)]
    pub provenance: String,
    #[serde(default)]
    pub tag: Tag,
    /// Range checked when the caller does not choose one; the whole budget when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<u64>,
}

impl CongruenceClaim {
    pub fn new(claim_id: impl Into<String>, series: FQuotient, a: u64, b: u64, modulus: u64) -> Self {
        CongruenceClaim {
            claim_id: claim_id.into(),
            series,
            a,
            b,
            modulus,
            expected_residue: 0,
            residue_rule: None,
            filter: IndexFilter::All,
            provenance: String::new(),
            tag: Tag::Theorem,
            n_max: None,
        }
    }

    pub fn filtered(mut self, filter: IndexFilter) -> Self {
        self.filter = filter;
        self
    }

    pub fn from_source(mut self, provenance: impl Into<String>) -> Self {
        self.provenance = provenance.into();
        self
    }

    pub fn tagged(mut self, tag: Tag) -> Self {
        self.tag = tag;
        self
    }

    pub fn expected_at(&self, n: u64) -> u64 {
        match self.residue_rule {
            Some(ResidueRule::Triangular { on }) if is_triangular(n).is_some() => on,
            _ => self.expected_residue,
        }
    }

    pub fn validate(&self) -> Result<()> {
        Ring::modulo(self.modulus)?;
        if self.a == 0 {
            return Err(Error::Domain(format!("{}: a must be positive", self.claim_id)));
        }
        if self.expected_residue >= self.modulus {
            return Err(Error::Domain(format!("{}: residue out of range", self.claim_id)));
        }
        Ok(())
    }
}

impl fmt::Display for CongruenceClaim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}]({}n+{}) ≡ {} mod {}",
            self.series, self.a, self.b, self.expected_residue, self.modulus
        )?;
        if self.filter != IndexFilter::All {
            write!(f, " for {}", self.filter)?;
        }
        Ok(())
    }
}

/// The coefficients `c(a n + b)` of `series`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Progression {
    pub series: FQuotient,
    pub a: u64,
    pub b: u64,
}

impl Progression {
    pub fn new(series: FQuotient, a: u64, b: u64) -> Self {
        Progression { series, a, b }
    }

    pub fn index(&self, n: u64) -> u64 {
        self.a * n + self.b
    }
}

/// `lhs_scale · lhs(n) ≡ rhs_scale · rhs(n) (mod modulus)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationClaim {
    pub claim_id: String,
    pub lhs: Progression,
    #[serde(default = "one")]
    pub lhs_scale: i64,
    pub rhs: Progression,
    #[serde(default = "one")]
    pub rhs_scale: i64,
    pub modulus: u64,
    #[serde(default)]
    pub filter: IndexFilter,
    #[serde(default)]
    pub provenance: String,
    #[serde(default)]
    pub tag: Tag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<u64>,
}

fn one() -> i64 {
    1
}

/// Anything the engine can verify.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Claim {
    Congruence(CongruenceClaim),
    Relation(RelationClaim),
}

impl Claim {
    pub fn id(&self) -> &str {
        match self {
            Claim::Congruence(c) => &c.claim_id,
            Claim::Relation(r) => &r.claim_id,
        }
    }

    pub fn tag(&self) -> Tag {
        match self {
            Claim::Congruence(c) => c.tag,
            Claim::Relation(r) => r.tag,
        }
    }

    pub fn modulus(&self) -> u64 {
        match self {
            Claim::Congruence(c) => c.modulus,
            Claim::Relation(r) => r.modulus,
        }
    }

    /// The claim's own default range, if it has one.
    pub fn default_n_max(&self) -> Option<u64> {
        match self {
            Claim::Congruence(c) => c.n_max,
            Claim::Relation(r) => r.n_max,
        }
    }

    fn set_default_n_max(&mut self, n: u64) {
        let slot = match self {
            Claim::Congruence(c) => &mut c.n_max,
            Claim::Relation(r) => &mut r.n_max,
        };
        slot.get_or_insert(n);
    }

    /// `(series, largest a, largest b)` for each progression read.
    fn progressions(&self) -> Vec<(&FQuotient, u64, u64)> {
        match self {
            Claim::Congruence(c) => vec![(&c.series, c.a, c.b)],
            Claim::Relation(r) => vec![(&r.lhs.series, r.lhs.a, r.lhs.b), (&r.rhs.series, r.rhs.a, r.rhs.b)],
        }
    }
}

impl From<CongruenceClaim> for Claim {
    fn from(c: CongruenceClaim) -> Self {
        Claim::Congruence(c)
    }
}

impl From<RelationClaim> for Claim {
    fn from(r: RelationClaim) -> Self {
        Claim::Relation(r)
    }
}

/// Verification with shared, memoized expansions and a truncation budget.
pub struct Engine {
    cache: ExpansionCache,
    budget: usize,
}

impl Default for Engine {
    fn default() -> Self {
        Engine::new(DEFAULT_BUDGET)
    }
}

impl Engine {
    pub fn new(budget: usize) -> Self {
        Engine {
            cache: ExpansionCache::new(),
            budget,
        }
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn cache(&self) -> &ExpansionCache {
        &self.cache
    }

    /// Expansion of `q` over a ring refining `Z/modulus`, known to at least `q^trunc`.
    pub fn series(&self, q: &FQuotient, modulus: u64, trunc: usize) -> Result<Arc<TruncatedSeries>> {
        if trunc > self.budget {
            return Err(Error::BudgetExceeded {
                needed: trunc,
                budget: self.budget,
            });
        }
        self.cache.get(q, Ring::modulo(modulus)?, trunc)
    }

    /// Largest `n` with `a n + b` inside the budget.
    pub fn budget_n_max(&self, a: u64, b: u64) -> Result<u64> {
        if b as usize > self.budget {
            return Err(Error::BudgetExceeded {
                needed: b as usize,
                budget: self.budget,
            });
        }
        Ok((self.budget as u64 - b) / a)
    }

    /// An explicit `n_max` wins; otherwise the claim's default, capped by the budget.
    pub fn resolve_n_max(&self, claim: &Claim, n_max: Option<u64>) -> Result<u64> {
        if let Some(n) = n_max {
            return Ok(n);
        }
        let cap = claim
            .progressions()
            .into_iter()
            .map(|(_, a, b)| self.budget_n_max(a, b))
            .try_fold(u64::MAX, |acc, n| n.map(|n| acc.min(n)))?;
        Ok(claim.default_n_max().map_or(cap, |d| d.min(cap)))
    }

    pub fn verify_instance(&self, claim: &CongruenceClaim, n_max: u64) -> Result<VerificationReport> {
        claim.validate()?;
        let top = (claim.a * n_max + claim.b) as usize;
        let s = self.series(&claim.series, claim.modulus, top)?;
        let m = claim.modulus;
        let mut checked = 0;
        let mut failure = None;
        for n in (0..=n_max).filter(|&n| claim.filter.admits(n)) {
            checked += 1;
            let got = s.residue((claim.a * n + claim.b) as i64, m);
            let want = claim.expected_at(n);
            if got != want {
                failure = Some(Counterexample {
                    n,
                    value: got.to_string(),
                    expected: want.to_string(),
                });
                break;
            }
        }
        let mut report = VerificationReport::from_outcome(claim.claim_id.clone(), n_max, checked, s.trunc(), failure)
            .with_tag(claim.tag);
        if claim.filter != IndexFilter::All {
            report = report.with_note(format!("filter: {}", claim.filter));
        }
        Ok(report)
    }

    pub fn verify_relation(&self, rel: &RelationClaim, n_max: u64) -> Result<VerificationReport> {
        let m = rel.modulus;
        Ring::modulo(m)?;
        let ls = self.series(&rel.lhs.series, m, rel.lhs.index(n_max) as usize)?;
        let rs = self.series(&rel.rhs.series, m, rel.rhs.index(n_max) as usize)?;
        let lscale = rel.lhs_scale.rem_euclid(m as i64) as u128;
        let rscale = rel.rhs_scale.rem_euclid(m as i64) as u128;
        let mut checked = 0;
        let mut failure = None;
        for n in (0..=n_max).filter(|&n| rel.filter.admits(n)) {
            checked += 1;
            let l = (lscale * ls.residue(rel.lhs.index(n) as i64, m) as u128 % m as u128) as u64;
            let r = (rscale * rs.residue(rel.rhs.index(n) as i64, m) as u128 % m as u128) as u64;
            if l != r {
                failure = Some(Counterexample {
                    n,
                    value: l.to_string(),
                    expected: r.to_string(),
                });
                break;
            }
        }
        let mut report =
            VerificationReport::from_outcome(rel.claim_id.clone(), n_max, checked, ls.trunc().min(rs.trunc()), failure)
                .with_tag(rel.tag);
        if rel.filter != IndexFilter::All {
            report = report.with_note(format!("filter: {}", rel.filter));
        }
        Ok(report)
    }

    /// Verify a claim up to `n_max`, or as far as the budget allows when `None`.
    pub fn verify(&self, claim: &Claim, n_max: Option<u64>) -> Result<VerificationReport> {
        let n = self.resolve_n_max(claim, n_max)?;
        match claim {
            Claim::Congruence(c) => self.verify_instance(c, n),
            Claim::Relation(r) => self.verify_relation(r, n),
        }
    }

    /// Build each distinct series once, over the lcm of the moduli that read it and to the
    /// largest index any of them needs, so later lookups all hit the cache.
    pub fn prewarm(&self, claims: &[Claim], n_max: Option<u64>) -> Result<()> {
        let mut plan: BTreeMap<FQuotient, (u64, usize)> = BTreeMap::new();
        for c in claims {
            let n = self.resolve_n_max(c, n_max)?;
            for (q, a, b) in c.progressions() {
                let top = (a * n + b) as usize;
                let e = plan.entry(q.clone()).or_insert((1, 0));
                e.0 = e.0.lcm(&c.modulus());
                e.1 = e.1.max(top);
            }
        }
        plan.into_par_iter()
            .try_for_each(|(q, (m, top))| self.series(&q, m, top).map(|_| ()))
    }

    /// Verify every claim in parallel; reports come back sorted by claim id.
    pub fn verify_all(&self, claims: &[Claim], n_max: Option<u64>) -> Result<Vec<VerificationReport>> {
        self.prewarm(claims, n_max)?;
        let mut reports = claims
            .par_iter()
            .map(|c| self.verify(c, n_max))
            .collect::<Result<Vec<_>>>()?;
        reports.sort_by(|a, b| a.claim_id.cmp(&b.claim_id));
        Ok(reports)
    }
}

/// Parameter overrides for [`generate_family`]; `None` selects each theorem's defaults.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FamilyParams {
    pub alpha: Option<Vec<u32>>,
    pub k: Option<Vec<u32>>,
    pub primes: Option<Vec<u64>>,
    pub j: Option<Vec<u64>>,
}

/// Concrete instances of one theorem, plus what the generator learned choosing them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Family {
    pub theorem: String,
    pub claims: Vec<Claim>,
    pub notes: Vec<String>,
}

/// Every theorem id understood by [`generate_family`].
pub const THEOREMS: &[&str] = &[
    "prime-tuple",
    "ramanujan",
    "t0.1",
    "c1.4",
    "c1.4-lemmas",
    "c1.4.1",
    "remark-t4",
    "ped",
    "t0.1.0.0",
    "t0.0.1",
    "t2",
    "t2-remark",
    "t4",
    "thm1.00",
    "thm1.00-cor",
    "conjp",
];

/// `f_2^3 / f_1^3`.
pub fn t2_series() -> FQuotient {
    FQuotient::tuple_regular(2, 3)
}

/// `f_4^3 / f_1^3`.
pub fn t4_series() -> FQuotient {
    FQuotient::tuple_regular(4, 3)
}

/// `f_4 / f_1`.
pub fn ped_series() -> FQuotient {
    FQuotient::tuple_regular(4, 1)
}

/// `1 / f_1`.
pub fn partition_series() -> FQuotient {
    FQuotient::one().with(1, -1)
}

/// `f_3^6 / f_1`.
pub fn f3_6_over_f1() -> FQuotient {
    FQuotient::one().with(3, 6).with(1, -1)
}

fn pw(p: u64, e: u32) -> u64 {
    p.checked_pow(e).expect("parameter overflow")
}

fn cong(id: String, q: FQuotient, a: u64, b: u64, m: u64, src: &str) -> Claim {
    CongruenceClaim::new(id, q, a, b, m).from_source(src).into()
}

fn choose<T: Clone>(given: &Option<Vec<T>>, default: &[T]) -> Vec<T> {
    given.clone().unwrap_or_else(|| default.to_vec())
}

/// `ω(p) mod 2`, from `f_3^6 / f_1` reduced mod 2.
pub fn omega_parity(p: u64) -> Result<u8> {
    let delta = NewmanParams::f3_6_over_f1(p).delta()? as usize;
    let a = crate::etaq::expand_fquotient(&f3_6_over_f1(), delta, Ring::Mod(2))?;
    let w = omega(p, &a)?;
    Ok((w.mod_floor(&BigInt::from(2))).to_u8().unwrap())
}

/// Expand a theorem into concrete claims, enforcing its side conditions.
pub fn generate_family(theorem: &str, params: &FamilyParams) -> Result<Family> {
    let mut notes = Vec::new();
    let t2 = t2_series();
    let mut claims: Vec<Claim> = Vec::new();
    let explicit_primes = params.primes.is_some();
    match theorem {
        "prime-tuple" => {
            for p in choose(&params.primes, &[2, 3, 5, 7]) {
                if !is_prime(p) {
                    return Err(Error::SideConditionViolated(format!("{p} is not prime")));
                }
                for ell in [2u64, 3, 4] {
                    for r in 1..p {
                        claims.push(cong(
                            format!("prime-tuple[l={ell},p={p},r={r}]"),
                            FQuotient::tuple_regular(ell, p as i64),
                            p,
                            r,
                            p,
                            "T_{l,p}(pn+r) ≡ 0 mod p",
                        ));
                    }
                }
            }
        }
        "ramanujan" => {
            for (m, b) in [(5u64, 4u64), (7, 5), (11, 6)] {
                claims.push(cong(format!("ramanujan-{m}"), partition_series(), m, b, m, "Ramanujan"));
            }
        }
        "t0.1" => {
            let mut c = CongruenceClaim::new("t0.1", t2, 9, 1, 6).from_source("T2(9n+1) mod 6 at triangular n");
            c.residue_rule = Some(ResidueRule::Triangular { on: 3 });
            claims.push(c.into());
        }
        "c1.4" => {
            for alpha in choose(&params.alpha, &[0, 1]) {
                let s_even: u64 = (0..=2 * alpha).map(|i| pw(9, i)).sum();
                let s_odd: u64 = (0..=2 * alpha + 1).map(|i| pw(9, i)).sum();
                let a1 = pw(3, 4 * alpha + 2);
                let a2 = pw(3, 4 * alpha + 4);
                for (eq, a, b) in [
                    ("c0.1.4", a1, s_even + pw(3, 4 * alpha + 1)),
                    ("c1.1.4", a1, s_even + 2 * pw(3, 4 * alpha + 1)),
                    ("c2.1.4", a2, s_odd + pw(3, 4 * alpha + 3)),
                    ("c3.1.4", a2, s_odd + 2 * pw(3, 4 * alpha + 3)),
                ] {
                    claims.push(cong(format!("c1.4:{eq}[alpha={alpha}]"), t2.clone(), a, b, 24, eq));
                }
            }
        }
        "c1.4-lemmas" => {
            claims.push(
                RelationClaim {
                    claim_id: "c1.4-lemmas:e1.5".into(),
                    lhs: Progression::new(t2.clone(), 3, 1),
                    lhs_scale: 3,
                    rhs: Progression::new(t2.clone(), 27, 10),
                    rhs_scale: 1,
                    modulus: 24,
                    filter: IndexFilter::All,
                    provenance: "3 T2(3n+1) ≡ T2(27n+10) mod 24".into(),
                    tag: Tag::Theorem,
                    n_max: None,
                }
                .into(),
            );
            claims.push(
                RelationClaim {
                    claim_id: "c1.4-lemmas:e1.6".into(),
                    lhs: Progression::new(t2.clone(), 3, 1),
                    lhs_scale: 1,
                    rhs: Progression::new(t2.clone(), 243, 91),
                    rhs_scale: 1,
                    modulus: 24,
                    filter: IndexFilter::All,
                    provenance: "T2(3n+1) ≡ T2(243n+91) mod 24".into(),
                    tag: Tag::Theorem,
                    n_max: None,
                }
                .into(),
            );
        }
        "c1.4.1" => {
            let t4 = t4_series();
            for alpha in choose(&params.alpha, &[0, 1, 2]) {
                let e30 = (pw(3, 2 * alpha + 2), (17 * pw(3, 2 * alpha + 1) - 3) / 8);
                let e31 = (pw(3, 2 * alpha + 3), (19 * pw(3, 2 * alpha + 2) - 3) / 8);
                let e29 = (27 * pw(25, alpha), (171 * pw(25, alpha) - 3) / 8);
                for (eq, (a, b)) in [("e3.0", e30), ("e3.1", e31), ("e2.9", e29)] {
                    claims.push(cong(format!("c1.4.1:{eq}[alpha={alpha}]"), t4.clone(), a, b, 3, eq));
                }
            }
        }
        "remark-t4" => {
            claims.push(cong("remark-t4".into(), t4_series(), 81, 57, 12, "T4(81n+57) ≡ 0 mod 12"));
        }
        "ped" => {
            let ped = ped_series();
            claims.push(cong("ped:e2.6".into(), ped.clone(), 9, 7, 12, "ped(9n+7) ≡ 0 mod 12"));
            for alpha in choose(&params.alpha, &[0, 1]) {
                claims.push(cong(
                    format!("ped:e2.7[alpha={alpha}]"),
                    ped.clone(),
                    pw(3, 2 * alpha + 1),
                    (17 * pw(3, 2 * alpha) - 1) / 8,
                    6,
                    "e2.7",
                ));
                claims.push(cong(
                    format!("ped:e2.8[alpha={alpha}]"),
                    ped.clone(),
                    pw(3, 2 * alpha + 2),
                    (19 * pw(3, 2 * alpha + 1) - 1) / 8,
                    6,
                    "e2.8",
                ));
                claims.push(
                    RelationClaim {
                        claim_id: format!("ped:e3.2[alpha={alpha}]"),
                        lhs: Progression::new(ped.clone(), 9, 7),
                        lhs_scale: 1,
                        rhs: Progression::new(ped.clone(), 9 * pw(25, alpha), (57 * pw(25, alpha) - 1) / 8),
                        rhs_scale: 1,
                        modulus: 24,
                        filter: IndexFilter::All,
                        provenance: "e3.2".into(),
                        tag: Tag::Theorem,
                        n_max: None,
                    }
                    .into(),
                );
            }
        }
        "t0.1.0.0" => {
            for p in choose(&params.primes, &[3, 5, 7, 11, 13]) {
                if p < 3 || !is_prime(p) {
                    return Err(Error::SideConditionViolated(format!("p = {p} must be an odd prime")));
                }
                let valid: Vec<u64> = (1..p).filter(|&r| legendre(8 * r as i64 + 1, p) == Ok(-1)).collect();
                notes.push(format!("p = {p}: r with ((8r+1)/p) = -1 are {valid:?}"));
                for r in valid {
                    claims.push(cong(
                        format!("t0.1.0.0[p={p},r={r}]"),
                        t2.clone(),
                        9 * p,
                        9 * r + 1,
                        6,
                        "T2(9(pn+r)+1) ≡ 0 mod 6",
                    ));
                }
            }
        }
        "t0.0.1" => {
            for p in choose(&params.primes, &[5, 7, 13]) {
                if p < 5 || !is_prime(p) {
                    return Err(Error::SideConditionViolated(format!("p = {p} must be a prime >= 5")));
                }
                if legendre(-2, p)? != -1 {
                    if explicit_primes {
                        return Err(Error::SideConditionViolated(format!("(-2/{p}) = 1, need -1")));
                    }
                    continue;
                }
                for alpha in choose(&params.alpha, &[0, 1]) {
                    let a = 9 * pw(p, 2 * alpha + 1);
                    let b = (9 * pw(p, 2 * alpha + 2) - 1) / 8;
                    claims.push(
                        CongruenceClaim::new(format!("t0.0.1[p={p},alpha={alpha}]"), t2.clone(), a, b, 6)
                            .filtered(IndexFilter::NotDivisibleBy { p })
                            .from_source("e50.0")
                            .into(),
                    );
                }
            }
        }
        "t2" | "t2-remark" => {
            let remark = theorem == "t2-remark";
            let primes = if remark { choose(&params.primes, &[5]) } else { choose(&params.primes, &[5, 7]) };
            let ks = choose(&params.k, &[0]);
            for p in primes {
                if p < 5 || !is_prime(p) {
                    return Err(Error::SideConditionViolated(format!("p = {p} must be a prime >= 5")));
                }
                let parity = omega_parity(p)?;
                notes.push(format!("ω({p}) ≡ {parity} mod 2"));
                let js = choose(&params.j, &if remark { vec![1] } else { (1..p).collect::<Vec<_>>() });
                for &j in &js {
                    if j == 0 || j >= p {
                        return Err(Error::SideConditionViolated(format!("j = {j} must lie in [1, p-1]")));
                    }
                }
                if parity == 0 {
                    for &k in &ks {
                        for &j in &js {
                            let a = 3 * pw(p, 4 * k + 4);
                            let b = 3 * pw(p, 4 * k + 3) * j + (17 * pw(p, 4 * k + 4) - 1) / 8;
                            let id = if remark {
                                format!("t2-remark[k={k},j={j}]")
                            } else {
                                format!("t2:t3.1[p={p},k={k},j={j}]")
                            };
                            claims.push(cong(id, t2.clone(), a, b, 12, "t3.1"));
                        }
                    }
                } else {
                    if remark {
                        return Err(Error::SideConditionViolated(format!("ω({p}) is odd")));
                    }
                    for &k in &ks {
                        for &j in &js {
                            let a = 3 * pw(p, 6 * k + 6);
                            let b = 3 * pw(p, 6 * k + 5) * j + (17 * pw(p, 6 * k + 6) - 1) / 8;
                            claims.push(cong(format!("t2:t2.2[p={p},k={k},j={j}]"), t2.clone(), a, b, 12, "t2.2"));
                        }
                        // p ∤ (24n+17) and n ≢ -17/24 mod p describe the same residue class.
                        let inv24 = (1..p).find(|x| (24 * x) % p == 1).unwrap();
                        let bad = ((p - 17 % p) % p * inv24) % p;
                        claims.push(
                            CongruenceClaim::new(
                                format!("t2:t3.3[p={p},k={k}]"),
                                t2.clone(),
                                3 * pw(p, 6 * k + 2),
                                (17 * pw(p, 6 * k + 2) - 1) / 8,
                                12,
                            )
                            .filtered(IndexFilter::NotCongruent { modulus: p, residue: bad })
                            .from_source("t3.3")
                            .into(),
                        );
                    }
                }
            }
            if !remark {
                if params.primes.is_none() {
                    let odd: Vec<u64> = crate::numtheory::primes_between(5, 257)
                        .into_iter()
                        .filter(|&p| omega_parity(p).map(|v| v == 1).unwrap_or(false))
                        .collect();
                    match odd.first() {
                        Some(p) => notes.push(format!("smallest prime with ω(p) odd: {p}")),
                        None => notes.push("no prime 5 <= p <= 257 has ω(p) odd; the odd case has no instance".into()),
                    }
                    for &p in odd.iter().take(1) {
                        let fam = generate_family(
                            "t2",
                            &FamilyParams {
                                primes: Some(vec![p]),
                                ..params.clone()
                            },
                        )?;
                        claims.extend(fam.claims);
                    }
                }
                // The 17-relation; "17 ∤ (24n+17)" and "n ≢ 0 mod 17" are the same condition.
                for &k in &ks {
                    claims.push(
                        RelationClaim {
                            claim_id: format!("t2:t3.3.1[k={k}]"),
                            lhs: Progression::new(t2.clone(), 3, 2),
                            lhs_scale: 1,
                            rhs: Progression::new(t2.clone(), 3 * pw(17, 4 * k + 2), (pw(17, 4 * k + 3) - 1) / 8),
                            rhs_scale: 1,
                            modulus: 12,
                            filter: IndexFilter::NotDivisibleBy { p: 17 },
                            provenance: "t3.3.1".into(),
                            tag: Tag::Theorem,
                            n_max: None,
                        }
                        .into(),
                    );
                }
            }
        }
        "t4" => {
            for p in choose(&params.primes, &[3, 5, 7]) {
                if p < 3 || !is_prime(p) {
                    return Err(Error::SideConditionViolated(format!("p = {p} must be an odd prime")));
                }
                // No prime is an odd square, so τ(p) is always even and the k >= 1 families apply.
                let tau_even = tau_mod2(p) == 0;
                notes.push(format!("τ({p}) ≡ {} mod 2", u8::from(!tau_even)));
                let ss: Vec<u64> = (1..=8 * p)
                    .filter(|&s| s % 8 == 1 && legendre(s as i64, p) == Ok(-1))
                    .collect();
                let rs: Vec<u64> = (1..=8 * p).filter(|&r| (r * p) % 8 == 1 && r.gcd(&p) == 1).collect();
                notes.push(format!("p = {p}: s in {ss:?}, r in {rs:?}"));
                for &s in &ss {
                    claims.push(cong(format!("t4:e12.0.1[p={p},s={s}]"), t2.clone(), p, (s - 1) / 8, 2, "e12.0.1"));
                }
                if tau_even {
                    for k in choose(&params.k, &[1]) {
                        if k == 0 {
                            return Err(Error::SideConditionViolated("k must be at least 1".into()));
                        }
                        for &s in &ss {
                            claims.push(cong(
                                format!("t4:e12.0.2[p={p},s={s},k={k}]"),
                                t2.clone(),
                                pw(p, 2 * k + 1),
                                (s * pw(p, 2 * k) - 1) / 8,
                                2,
                                "e12.0.2",
                            ));
                        }
                        for &r in &rs {
                            claims.push(cong(
                                format!("t4:e12.0.3[p={p},r={r},k={k}]"),
                                t2.clone(),
                                pw(p, 2 * k + 2),
                                (r * pw(p, 2 * k + 1) - 1) / 8,
                                2,
                                "e12.0.3",
                            ));
                        }
                    }
                }
            }
        }
        "thm1.00" => {
            let tuples: Vec<Vec<u64>> = match &params.primes {
                Some(ps) => vec![ps.clone()],
                None => vec![vec![5], vec![7], vec![5, 7]],
            };
            for ps in tuples {
                for &p in &ps {
                    if p < 5 || !is_prime(p) || p % 8 == 1 {
                        return Err(Error::SideConditionViolated(format!(
                            "p = {p} must be a prime >= 5 with p ≢ 1 mod 8"
                        )));
                    }
                }
                let (&last, init) = ps.split_last().expect("at least one prime");
                let sq_init: u64 = init.iter().map(|p| p * p).product();
                let a = 9 * sq_init * last * last;
                let name = ps.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(",");
                for j in choose(&params.j, &(1..last).collect::<Vec<_>>()) {
                    if j % last == 0 {
                        return Err(Error::SideConditionViolated(format!("j = {j} is divisible by {last}")));
                    }
                    let b = (9 * sq_init * last * (8 * j + last) - 1) / 8;
                    claims.push(cong(format!("thm1.00[p={name},j={j}]"), t2.clone(), a, b, 6, "thm1.00"));
                }
            }
        }
        "thm1.00-cor" => {
            for p in choose(&params.primes, &[5, 7]) {
                if p < 5 || !is_prime(p) || p % 8 == 1 {
                    return Err(Error::SideConditionViolated(format!(
                        "p = {p} must be a prime >= 5 with p ≢ 1 mod 8"
                    )));
                }
                for k in choose(&params.k, &[0, 1]) {
                    for j in choose(&params.j, &(1..p).collect::<Vec<_>>()) {
                        if j % p == 0 {
                            return Err(Error::SideConditionViolated(format!("j = {j} is divisible by {p}")));
                        }
                        let a = 9 * pw(p, 2 * k + 2);
                        let b = 9 * pw(p, 2 * k + 1) * j + (9 * pw(p, 2 * k + 2) - 1) / 8;
                        claims.push(cong(format!("thm1.00-cor[p={p},k={k},j={j}]"), t2.clone(), a, b, 6, "corollary"));
                    }
                }
            }
        }
        "conjp" => {
            // Default t = p, the smallest t with gcd(t, 6) = 1 and p | t.
            for p in choose(&params.primes, &[5, 7]) {
                if p < 5 || !is_prime(p) || legendre(-2, p)? != -1 {
                    return Err(Error::SideConditionViolated(format!("p = {p} needs p >= 5 prime with (-2/p) = -1")));
                }
                let t = p;
                for j in choose(&params.j, &(1..p).collect::<Vec<_>>()) {
                    let a = 9 * t * t;
                    let b = 9 * t * t * j / p + (57 * t * t - 1) / 8;
                    claims.push(
                        CongruenceClaim::new(format!("conjp[p={p},t={t},j={j}]"), t2.clone(), a, b, 6)
                            .from_source("conjecture")
                            .tagged(Tag::Conjecture)
                            .into(),
                    );
                }
            }
        }
        other => return Err(Error::UnknownSelection(other.to_string())),
    }
    if let Some(n) = stated_range(theorem) {
        for c in claims.iter_mut().filter(|c| theorem != "t4" || c.id().starts_with("t4:e12.0.1")) {
            c.set_default_n_max(n);
        }
    }
    Ok(Family {
        theorem: theorem.to_string(),
        claims,
        notes,
    })
}

/// Families stated or customarily checked over a fixed range rather than the whole budget.
fn stated_range(theorem: &str) -> Option<u64> {
    match theorem {
        "prime-tuple" => Some(2000),
        "ramanujan" | "t0.1" | "remark-t4" | "t4" => Some(10_000),
        "t0.1.0.0" | "t0.0.1" | "t2-remark" => Some(1000),
        "thm1.00" | "thm1.00-cor" | "conjp" => Some(400),
        _ => None,
    }
}

/// Every family with default parameters.
pub fn all_claims() -> Result<Vec<Claim>> {
    let mut out = Vec::new();
    for t in THEOREMS {
        out.extend(generate_family(t, &FamilyParams::default())?.claims);
    }
    Ok(out)
}

/// Look up a generated claim by id.
pub fn find_claim(id: &str) -> Result<Claim> {
    all_claims()?
        .into_iter()
        .find(|c| c.id() == id)
        .ok_or_else(|| Error::UnknownSelection(id.to_string()))
}

pub fn claims_to_json(claims: &[Claim]) -> String {
    serde_json::to_string_pretty(claims).expect("claims serialize")
}

pub fn claims_from_json(text: &str) -> Result<Vec<Claim>> {
    serde_json::from_str(text).map_err(|e| Error::parse(e.column(), e.to_string()))
}

/// One density checkpoint: `count` of the first `x` progression terms hit the residue.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityPoint {
    pub x: u64,
    pub count: u64,
    pub proportion: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub series: String,
    pub a: u64,
    pub b: u64,
    pub modulus: u64,
    pub residue: u64,
    pub checkpoints: Vec<DensityPoint>,
}

impl DensityReport {
    pub fn proportions(&self) -> Vec<f64> {
        self.checkpoints.iter().map(|c| c.proportion).collect()
    }

    pub fn strictly_increasing(&self) -> bool {
        self.checkpoints.windows(2).all(|w| {
            // count_1 / x_1 < count_2 / x_2, compared exactly.
            (w[0].count as u128) * (w[1].x as u128) < (w[1].count as u128) * (w[0].x as u128)
        })
    }

    /// CSV with header `X,count,proportion`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["X", "count", "proportion"])?;
        for c in &self.checkpoints {
            w.write_record([c.x.to_string(), c.count.to_string(), format!("{:.6}", c.proportion)])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Fraction of the first `X` terms `c(a n + b)`, `0 <= n < X`, that are `≡ residue (mod modulus)`.
pub fn density_scan(
    engine: &Engine,
    prog: &Progression,
    modulus: u64,
    residue: u64,
    checkpoints: &[u64],
) -> Result<DensityReport> {
    Ring::modulo(modulus)?;
    if checkpoints.is_empty() || checkpoints.contains(&0) {
        return Err(Error::Domain("checkpoints must be at least 1".into()));
    }
    let mut xs = checkpoints.to_vec();
    xs.sort_unstable();
    xs.dedup();
    let xmax = *xs.last().unwrap();
    let s = engine.series(&prog.series, modulus, prog.index(xmax - 1) as usize)?;
    let target = residue % modulus;
    let mut count = 0;
    let mut points = Vec::new();
    let mut next = xs.iter().peekable();
    for n in 0..xmax {
        if s.residue(prog.index(n) as i64, modulus) == target {
            count += 1;
        }
        if next.peek() == Some(&&(n + 1)) {
            next.next();
            points.push(DensityPoint {
                x: n + 1,
                count,
                proportion: count as f64 / (n + 1) as f64,
            });
        }
    }
    Ok(DensityReport {
        series: prog.series.to_string(),
        a: prog.a,
        b: prog.b,
        modulus,
        residue: target,
        checkpoints: points,
    })
}

/// A progression whose sampled coefficients all vanish modulo `M`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Candidate {
    pub a: u64,
    pub b: u64,
    pub checked: u64,
    /// Held on the re-verification pass to twice the sampled range.
    pub reverified: bool,
    /// A coarser progression already found that contains this one.
    pub implied_by: Option<(u64, u64)>,
    pub tag: Tag,
}

/// Scan `(a, b)` with `a <= a_max`, `b < a` for `c(a n + b) ≡ 0 (mod modulus)` on `n <= n_max`.
///
/// Survivors are re-checked up to `2 n_max` and only those that hold are returned.
pub fn discover(
    engine: &Engine,
    series: &FQuotient,
    modulus: u64,
    a_max: u64,
    n_max: u64,
    min_support: u64,
) -> Result<Vec<Candidate>> {
    Ring::modulo(modulus)?;
    if a_max == 0 {
        return Ok(Vec::new());
    }
    if n_max + 1 < min_support {
        return Ok(Vec::new());
    }
    let long = 2 * n_max;
    let s = engine.series(series, modulus, (a_max * long + a_max - 1) as usize)?;
    let zero_on = |a: u64, b: u64, upto: u64| (0..=upto).all(|n| s.residue((a * n + b) as i64, modulus) == 0);
    let mut found: Vec<Candidate> = Vec::new();
    for a in 1..=a_max {
        for b in 0..a {
            if !zero_on(a, b, n_max) {
                continue;
            }
            let reverified = zero_on(a, b, long);
            if !reverified {
                continue;
            }
            let implied_by = found
                .iter()
                .find(|c| c.implied_by.is_none() && a % c.a == 0 && b % c.a == c.b)
                .map(|c| (c.a, c.b));
            found.push(Candidate {
                a,
                b,
                checked: n_max + 1,
                reverified,
                implied_by,
                tag: Tag::Empirical,
            });
        }
    }
    Ok(found)
}
