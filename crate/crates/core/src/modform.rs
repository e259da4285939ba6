//! Eta-quotient modularity arithmetic.
//!
//! For `f(z) = prod_{δ | N} η(δ z)^(r_δ)` this module computes the weight, the
//! conditions of Gordon–Hughes–Newman type under which `f` transforms on
//! `Γ_0(N)`, its Nebentypus character, and the exact rational order of `f` at
//! every cusp `c/d`. All arithmetic is exact; there is no floating point.
//!
//! It also builds the B-series eta-quotients
//! `η(24ℓz)^k η(24z)^(p^(a+m) - k) / η(24 p^a z)^(p^m)` whose expansions are
//! congruent to `sum T_{ℓ,k}(n) q^(24n + k(ℓ-1))` modulo `p^m`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::etaq::{Expr, FQuotient};
use crate::numtheory::{is_prime, CharacterSpec};
use crate::oracles::nu_p;
use crate::report::{Counterexample, VerificationReport};
use crate::series::{Ring, TruncatedSeries};

pub type Q = Ratio<i128>;

pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// `prod_{δ | N} η(δ z)^(r_δ)` on `Γ_0(N)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EtaQuotientSpec {
    pub level: u64,
    exps: BTreeMap<u64, i64>,
}

impl EtaQuotientSpec {
    pub fn new(level: u64, exps: impl IntoIterator<Item = (u64, i64)>) -> Result<Self> {
        if level == 0 {
            return Err(Error::Domain("level must be positive".into()));
        }
        let mut map = BTreeMap::new();
        for (d, r) in exps {
            if d == 0 || !level.is_multiple_of(d) {
                return Err(Error::NotADivisor { d, level });
            }
            *map.entry(d).or_insert(0) += r;
        }
        map.retain(|_, r| *r != 0);
        if map.is_empty() {
            return Err(Error::Domain("an eta-quotient needs a nonzero exponent".into()));
        }
        Ok(EtaQuotientSpec { level, exps: map })
    }

    pub fn exps(&self) -> &BTreeMap<u64, i64> {
        &self.exps
    }

    /// The same exponents viewed on `Γ_0(level)`.
    pub fn at_level(&self, level: u64) -> Result<Self> {
        EtaQuotientSpec::new(level, self.exps.iter().map(|(&d, &r)| (d, r)))
    }

    /// `(1/2) sum r_δ`.
    pub fn weight(&self) -> Ratio<i64> {
        Ratio::new(self.exps.values().sum(), 2)
    }

    /// `sum δ r_δ`; the q-expansion starts at `q^(this / 24)`.
    pub fn delta_sum(&self) -> i64 {
        self.exps.iter().map(|(&d, &r)| d as i64 * r).sum()
    }

    /// `sum (N/δ) r_δ`.
    pub fn codelta_sum(&self) -> i64 {
        self.exps.iter().map(|(&d, &r)| (self.level / d) as i64 * r).sum()
    }

    /// The underlying f-quotient `prod f_δ^(r_δ)`.
    pub fn fquotient(&self) -> FQuotient {
        FQuotient::from_factors(1, self.exps.iter().map(|(&d, &r)| (d, r)))
    }

    pub fn check_ono_conditions(&self) -> OnoCheck {
        OnoCheck {
            weight: self.weight(),
            delta_sum: self.delta_sum(),
            codelta_sum: self.codelta_sum(),
        }
    }

    /// `q^(sum δ r_δ / 24) prod f_δ^(r_δ)` to `q^trunc`.
    pub fn q_expansion(&self, trunc: usize, ring: Ring) -> Result<TruncatedSeries> {
        let s = self.delta_sum();
        if s.rem_euclid(24) != 0 || s < 0 {
            return Err(Error::ConditionsNotMet(format!(
                "sum δ r_δ = {s} is not a nonnegative multiple of 24"
            )));
        }
        let offset = (s / 24) as usize;
        if offset > trunc {
            return Ok(TruncatedSeries::zero(ring, trunc));
        }
        Ok(crate::etaq::expand_fquotient(&self.fquotient(), trunc - offset, ring)?.shift(offset))
    }

    /// `χ(d) = ((-1)^k prod δ^(r_δ) / d)`, reduced to a Kronecker symbol of a fundamental discriminant.
    pub fn character_of(&self) -> Result<CharacterSpec> {
        let check = self.check_ono_conditions();
        if !check.passed() {
            return Err(Error::ConditionsNotMet(check.reason()));
        }
        let k = check.weight.to_integer();
        // Square class of prod δ^(r_δ): only the parity of each prime's exponent matters.
        let mut parity: BTreeMap<u64, i64> = BTreeMap::new();
        for (&d, &r) in &self.exps {
            for (prime, e) in factorize(d) {
                *parity.entry(prime).or_insert(0) += e as i64 * r;
            }
        }
        let core: i64 = parity
            .iter()
            .filter(|(_, e)| e.rem_euclid(2) == 1)
            .map(|(&p, _)| p as i64)
            .product();
        let core = if k % 2 == 0 { core } else { -core };
        let disc = if core.rem_euclid(4) == 1 { core } else { 4 * core };
        Ok(CharacterSpec::kronecker(disc, self.level))
    }

    /// Order of vanishing at the cusp `c/d`:
    /// `(N/24) sum gcd(d,δ)^2 r_δ / (gcd(d, N/d) d δ)`. Independent of `c`.
    pub fn cusp_order(&self, d: u64) -> Result<Q> {
        let n = self.level;
        if d == 0 || !n.is_multiple_of(d) {
            return Err(Error::NotADivisor { d, level: n });
        }
        let g = d.gcd(&(n / d)) as i128;
        let sum = self.exps.iter().fold(Q::zero(), |acc, (&delta, &r)| {
            let gd = d.gcd(&delta) as i128;
            acc + Q::new(gd * gd * r as i128, g * d as i128 * delta as i128)
        });
        Ok(sum * Q::new(n as i128, 24))
    }

    /// Orders at every `d | N`, in increasing `d`.
    pub fn cusp_orders(&self) -> Vec<(u64, Q)> {
        divisors(self.level)
            .into_iter()
            .map(|d| (d, self.cusp_order(d).expect("d divides N")))
            .collect()
    }

    pub fn is_holomorphic(&self) -> Result<Holomorphy> {
        let check = self.check_ono_conditions();
        if !check.passed() {
            return Err(Error::ConditionsNotMet(check.reason()));
        }
        let orders = self.cusp_orders();
        if let Some((d, o)) = orders.iter().find(|(_, o)| o.is_negative()) {
            return Ok(Holomorphy::NotHolomorphic { d: *d, order: *o });
        }
        Ok(if orders.iter().all(|(_, o)| o.is_positive()) {
            Holomorphy::Cusp
        } else {
            Holomorphy::Holomorphic
        })
    }
}

impl fmt::Display for EtaQuotientSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "N={};", self.level)?;
        for (d, r) in &self.exps {
            write!(f, " eta({d})^{r}")?;
        }
        Ok(())
    }
}

/// Parses `N=16; eta(4)^6` and `N=48; eta(24)^5 eta(48)^-1`.
impl FromStr for EtaQuotientSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bytes = s.as_bytes();
        let mut pos = 0;
        let skip = |pos: &mut usize| {
            while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
                *pos += 1;
            }
        };
        let expect = |pos: &mut usize, lit: &str| -> Result<()> {
            skip(pos);
            if s[*pos..].starts_with(lit) {
                *pos += lit.len();
                Ok(())
            } else {
                Err(Error::parse(*pos, format!("expected `{lit}`")))
            }
        };
        let int = |pos: &mut usize| -> Result<i64> {
            skip(pos);
            let start = *pos;
            if *pos < bytes.len() && bytes[*pos] == b'-' {
                *pos += 1;
            }
            while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
                *pos += 1;
            }
            s[start..*pos]
                .parse()
                .map_err(|_| Error::parse(start, "expected an integer"))
        };
        expect(&mut pos, "N")?;
        expect(&mut pos, "=")?;
        let level = int(&mut pos)?;
        if level < 1 {
            return Err(Error::parse(pos, "level must be positive"));
        }
        expect(&mut pos, ";")?;
        let mut exps = Vec::new();
        loop {
            skip(&mut pos);
            if pos == bytes.len() {
                break;
            }
            let at = pos;
            expect(&mut pos, "eta")?;
            expect(&mut pos, "(")?;
            let d = int(&mut pos)?;
            expect(&mut pos, ")")?;
            let r = if s[pos..].trim_start().starts_with('^') {
                expect(&mut pos, "^")?;
                int(&mut pos)?
            } else {
                1
            };
            if d < 1 || level % d != 0 {
                return Err(Error::parse(at, format!("{d} does not divide the level {level}")));
            }
            exps.push((d as u64, r));
        }
        if exps.is_empty() {
            return Err(Error::parse(pos, "expected at least one eta factor"));
        }
        EtaQuotientSpec::new(level as u64, exps).map_err(|e| Error::parse(0, e.to_string()))
    }
}

/// Outcome of the three arithmetic conditions for modularity on `Γ_0(N)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OnoCheck {
    pub weight: Ratio<i64>,
    pub delta_sum: i64,
    pub codelta_sum: i64,
}

impl OnoCheck {
    pub fn passed(&self) -> bool {
        self.weight.is_integer() && self.delta_sum % 24 == 0 && self.codelta_sum % 24 == 0
    }

    pub fn reason(&self) -> String {
        let mut r = Vec::new();
        if !self.weight.is_integer() {
            r.push(format!("weight {} is not an integer", self.weight));
        }
        if self.delta_sum % 24 != 0 {
            r.push(format!("sum δ r_δ = {} is not divisible by 24", self.delta_sum));
        }
        if self.codelta_sum % 24 != 0 {
            r.push(format!("sum (N/δ) r_δ = {} is not divisible by 24", self.codelta_sum));
        }
        if r.is_empty() {
            "all conditions hold".into()
        } else {
            r.join("; ")
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "verdict")]
pub enum Holomorphy {
    /// Strictly positive order at every cusp.
    Cusp,
    /// Nonnegative order at every cusp, zero somewhere.
    Holomorphic,
    NotHolomorphic { d: u64, order: Q },
}

/// Parameters `(ℓ, p, a, m, k)` of a B-series with `p^a || ℓ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BSeriesParams {
    pub ell: u64,
    pub p: u64,
    pub a: u32,
    pub m: u32,
    pub k: u64,
}

impl BSeriesParams {
    pub fn new(ell: u64, p: u64, a: u32, m: u32, k: u64) -> Self {
        BSeriesParams { ell, p, a, m, k }
    }

    fn pw(&self, e: u32) -> i128 {
        (self.p as i128).pow(e)
    }

    /// Structural hypotheses: `p` prime, `p^a || ℓ`, `a >= 1`, `m > a`, `k >= 1`.
    pub fn check_structure(&self) -> Result<()> {
        let fail = |m: String| Err(Error::HypothesisViolated(m));
        if self.ell < 2 {
            return fail(format!("ℓ = {} must be at least 2", self.ell));
        }
        if !is_prime(self.p) {
            return fail(format!("p = {} is not prime", self.p));
        }
        if self.a < 1 || nu_p(self.p, self.ell)? != self.a {
            return fail(format!("p^a = {}^{} is not the exact power of p dividing ℓ = {}", self.p, self.a, self.ell));
        }
        if self.m <= self.a {
            return fail(format!("m = {} must exceed a = {}", self.m, self.a));
        }
        if self.k < 1 {
            return fail("k must be at least 1".into());
        }
        Ok(())
    }

    /// Holomorphy hypotheses: `p^(2a) >= ℓ` and `k <= p^(m+a)(1 - p^(2s-2a))` for every `s` in `[0, a)`.
    pub fn check_bounds(&self) -> Result<()> {
        if self.pw(2 * self.a) < self.ell as i128 {
            return Err(Error::HypothesisViolated(format!(
                "p^(2a) = {} is smaller than ℓ = {}",
                self.pw(2 * self.a),
                self.ell
            )));
        }
        for s in 0..self.a {
            if Q::from_integer(self.k as i128) > self.k_bound(s) {
                return Err(Error::HypothesisViolated(format!(
                    "k = {} exceeds p^(m+a)(1 - p^(2s-2a)) = {} at s = {s}",
                    self.k,
                    self.k_bound(s)
                )));
            }
        }
        Ok(())
    }

    /// `p^(m+a) (1 - p^(2s-2a))`.
    pub fn k_bound(&self, s: u32) -> Q {
        Q::from_integer(self.pw(self.m + self.a)) * (Q::from_integer(1) - Q::new(self.pw(2 * s), self.pw(2 * self.a)))
    }

    pub fn check_hypotheses(&self) -> Result<()> {
        self.check_structure()?;
        self.check_bounds()
    }

    /// Exponents `{24ℓ: k, 24: p^(a+m) - k, 24 p^a: -p^m}` (merged when deltas coincide).
    pub fn exponents(&self) -> Vec<(u64, i64)> {
        vec![
            (24 * self.ell, self.k as i64),
            (24, self.pw(self.a + self.m) as i64 - self.k as i64),
            (24 * self.pw(self.a) as u64, -(self.pw(self.m) as i64)),
        ]
    }

    pub fn spec(&self, level: u64) -> Result<EtaQuotientSpec> {
        EtaQuotientSpec::new(level, self.exponents())
    }

    /// `p^m (p^a - 1) / 2`.
    pub fn expected_weight(&self) -> Ratio<i64> {
        Ratio::new((self.pw(self.m) * (self.pw(self.a) - 1)) as i64, 2)
    }

    /// `576 ℓ`.
    pub fn stated_level(&self) -> u64 {
        576 * self.ell
    }

    /// Smallest `24ℓu` with `u (k(1 - ℓ) + ℓ p^(m-a) (p^(2a) - 1)) ≡ 0 (mod 24)`.
    pub fn minimal_level(&self) -> u64 {
        let c = self.k as i128 * (1 - self.ell as i128)
            + self.ell as i128 * self.pw(self.m - self.a) * (self.pw(2 * self.a) - 1);
        let u = (1..=24).find(|u| (u * c).rem_euclid(24) == 0).unwrap() as u64;
        24 * self.ell * u
    }

    /// `(ℓ/t^2) ((p^(m+a) - k)/p^(2s) - p^(m-a)) + k`, the cusp-order bound at divisors of class `(t, s)`.
    pub fn lemma_bound(&self, t: u64, s: u32) -> Q {
        let ell = self.ell as i128;
        let t2 = (t as i128) * (t as i128);
        Q::new(ell, t2)
            * (Q::new(self.pw(self.m + self.a) - self.k as i128, self.pw(2 * s)) - Q::from_integer(self.pw(self.m - self.a)))
            + Q::from_integer(self.k as i128)
    }

    /// Every `(t, s)` class: `t | ℓ` with `p ∤ t` and `0 <= s <= a`.
    pub fn lemma_classes(&self) -> Vec<(u64, u32)> {
        divisors(self.ell)
            .into_iter()
            .filter(|t| t % self.p != 0)
            .flat_map(|t| (0..=self.a).map(move |s| (t, s)))
            .collect()
    }
}

impl fmt::Display for BSeriesParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "l={} p={} a={} m={} k={}", self.ell, self.p, self.a, self.m, self.k)
    }
}

/// Parses `l=2 p=2 a=1 m=2 k=3`; keys may appear in any order, all five are required.
impl FromStr for BSeriesParams {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut vals: [Option<u64>; 5] = [None; 5];
        let mut pos = 0;
        for tok in s.split(|c: char| c.is_whitespace() || c == ',') {
            if tok.is_empty() {
                pos += 1;
                continue;
            }
            let (key, val) = tok
                .split_once('=')
                .ok_or_else(|| Error::parse(pos, format!("expected key=value, found `{tok}`")))?;
            let slot = match key {
                "l" | "ell" => 0,
                "p" => 1,
                "a" => 2,
                "m" => 3,
                "k" => 4,
                _ => return Err(Error::parse(pos, format!("unknown key `{key}`"))),
            };
            let v = val
                .parse::<u64>()
                .map_err(|_| Error::parse(pos + key.len() + 1, format!("`{val}` is not a nonnegative integer")))?;
            vals[slot] = Some(v);
            pos += tok.len() + 1;
        }
        let names = ["l", "p", "a", "m", "k"];
        let mut out = [0u64; 5];
        for (i, v) in vals.iter().enumerate() {
            out[i] = v.ok_or_else(|| Error::parse(s.len(), format!("missing `{}`", names[i])))?;
        }
        Ok(BSeriesParams::new(out[0], out[1], out[2] as u32, out[3] as u32, out[4]))
    }
}

/// Everything checked about one B-series.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BSeriesReport {
    pub params: BSeriesParams,
    /// Expansion of the eta-quotient against `sum T_{ℓ,k}(n) q^(24n + k(ℓ-1))` mod `p^m`.
    pub congruence: VerificationReport,
    pub weight: Ratio<i64>,
    pub weight_matches: bool,
    pub minimal_level: u64,
    pub stated_level: u64,
    /// The three arithmetic conditions hold at `576ℓ`.
    pub stated_level_valid: bool,
    pub minimal_divides_stated: bool,
    pub character: CharacterSpec,
    /// Orders at every `d | 576ℓ`.
    pub cusp_orders: Vec<(u64, Q)>,
    pub min_cusp_order: Q,
    /// Lemma bound over every `(t, s)` class.
    pub lemma_bounds: Vec<(u64, u32, Q)>,
    pub notes: Vec<String>,
}

impl BSeriesReport {
    pub fn cusps_nonnegative(&self) -> bool {
        !self.min_cusp_order.is_negative()
    }

    pub fn lemma_bounds_nonnegative(&self) -> bool {
        self.lemma_bounds.iter().all(|(_, _, b)| !b.is_negative())
    }

    pub fn passed(&self) -> bool {
        self.congruence.passed()
            && self.weight_matches
            && self.stated_level_valid
            && self.minimal_divides_stated
            && self.cusps_nonnegative()
            && self.lemma_bounds_nonnegative()
    }

    /// CSV rows `d,order,sign`.
    pub fn cusp_table(&self) -> Vec<[String; 3]> {
        cusp_table(&self.cusp_orders)
    }
}

pub fn cusp_table(orders: &[(u64, Q)]) -> Vec<[String; 3]> {
    orders
        .iter()
        .map(|(d, o)| {
            let sign = if o.is_positive() {
                "+"
            } else if o.is_zero() {
                "0"
            } else {
                "-"
            };
            [d.to_string(), o.to_string(), sign.to_string()]
        })
        .collect()
}

/// Verify the B-series congruence to `q^trunc`, its weight and level, and its cusp orders on `Γ_0(576ℓ)`.
pub fn b_series_check(params: BSeriesParams, trunc: usize) -> Result<BSeriesReport> {
    params.check_hypotheses()?;
    let stated = params.stated_level();
    let spec = params.spec(stated)?;
    let modulus = params.pw(params.m) as u64;
    let ring = Ring::modulo(modulus)?;

    let lhs = spec.q_expansion(trunc, ring)?;
    let offset = (params.k * (params.ell - 1)) as usize;
    let rhs = Expr::quotient(FQuotient::tuple_regular(params.ell, params.k as i64))
        .magnify(24)
        .shift(offset)
        .evaluate(trunc, ring)?;
    let failure = lhs.first_difference(&rhs)?.map(|i| Counterexample {
        n: i as u64,
        value: lhs.coeff(i as i64).to_string(),
        expected: rhs.coeff(i as i64).to_string(),
    });
    let congruence = VerificationReport::from_outcome(
        format!("bseries[{params}]"),
        trunc as u64,
        trunc as u64 + 1,
        trunc,
        failure,
    );

    let check = spec.check_ono_conditions();
    let minimal = params.minimal_level();
    let orders = spec.cusp_orders();
    let min_order = orders.iter().map(|(_, o)| *o).min().expect("at least one cusp");
    let mut notes = Vec::new();
    if minimal != stated {
        notes.push(format!(
            "the smallest admissible level 24ℓu is {minimal}, which divides but differs from 576ℓ = {stated}"
        ));
    }
    if params.m <= 2 {
        notes.push("m <= 2: the congruence is checked even though the lemma is stated for m > 2".into());
    }
    if params.a > 1 {
        notes.push("the k-bound is imposed for every s in [0, a)".into());
    }
    Ok(BSeriesReport {
        params,
        congruence,
        weight: spec.weight(),
        weight_matches: spec.weight() == params.expected_weight(),
        minimal_level: minimal,
        stated_level: stated,
        stated_level_valid: check.passed(),
        minimal_divides_stated: stated.is_multiple_of(minimal),
        character: spec.character_of()?,
        cusp_orders: orders,
        min_cusp_order: min_order,
        lemma_bounds: params
            .lemma_classes()
            .into_iter()
            .map(|(t, s)| (t, s, params.lemma_bound(t, s)))
            .collect(),
        notes,
    })
}
