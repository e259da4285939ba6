//! Eta-quotient and theta-series expansion, plus the identity catalog.
//!
//! `f_d` denotes the product `(q^d; q^d)_inf = prod_{i >= 1} (1 - q^(d i))`.
//! An [`FQuotient`] is a finite product `c * prod f_d^(r_d)`; its expansion
//! uses Euler's pentagonal series for single powers and the Jacobi cube
//! series for each block of three, so every factor stays sparse.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::Roots;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::{Counterexample, VerificationReport};
use crate::series::{Ring, TruncatedSeries};

/// `scalar * prod_d f_d^(r_d)` with no zero exponents stored.
///
/// Serializes as its display form, e.g. `"f2^3 / f1^3"`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct FQuotient {
    pub scalar: i64,
    factors: BTreeMap<u64, i64>,
}

impl From<FQuotient> for String {
    fn from(q: FQuotient) -> String {
        q.to_string()
    }
}

impl TryFrom<String> for FQuotient {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl Default for FQuotient {
    fn default() -> Self {
        FQuotient::one()
    }
}

impl FQuotient {
    pub fn one() -> Self {
        FQuotient::scalar(1)
    }

    pub fn scalar(scalar: i64) -> Self {
        FQuotient {
            scalar,
            factors: BTreeMap::new(),
        }
    }

    /// The single factor `f_delta`.
    pub fn f(delta: u64) -> Self {
        FQuotient::one().with(delta, 1)
    }

    /// Multiply in `f_delta^exp`. Panics if `delta == 0`.
    pub fn with(mut self, delta: u64, exp: i64) -> Self {
        assert!(delta >= 1, "f_0 is not defined");
        let e = self.factors.entry(delta).or_insert(0);
        *e += exp;
        if *e == 0 {
            self.factors.remove(&delta);
        }
        self
    }

    pub fn times(mut self, c: i64) -> Self {
        self.scalar *= c;
        self
    }

    /// Build from `(delta, exponent)` pairs, merging repeated deltas.
    pub fn from_factors(scalar: i64, factors: impl IntoIterator<Item = (u64, i64)>) -> Self {
        factors
            .into_iter()
            .fold(FQuotient::scalar(scalar), |q, (d, e)| q.with(d, e))
    }

    /// Generating function `f_ell^k / f_1^k` of k-tuple ell-regular partitions.
    pub fn tuple_regular(ell: u64, k: i64) -> Self {
        FQuotient::one().with(ell, k).with(1, -k)
    }

    pub fn factors(&self) -> &BTreeMap<u64, i64> {
        &self.factors
    }

    pub fn exponent(&self, delta: u64) -> i64 {
        self.factors.get(&delta).copied().unwrap_or(0)
    }

    pub fn mul(&self, other: &FQuotient) -> FQuotient {
        other
            .factors
            .iter()
            .fold(self.clone(), |q, (&d, &e)| q.with(d, e))
            .times(other.scalar)
    }

    /// Substitute `q -> q^t`, i.e. `f_d -> f_(t d)`.
    pub fn magnify(&self, t: u64) -> FQuotient {
        FQuotient::from_factors(self.scalar, self.factors.iter().map(|(&d, &e)| (d * t, e)))
    }

    /// `sum_d d * r_d`; the eta-quotient with these exponents is `q^(this/24)` times the f-quotient.
    pub fn weighted_exponent_sum(&self) -> i64 {
        self.factors.iter().map(|(&d, &e)| d as i64 * e).sum()
    }
}

impl fmt::Display for FQuotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let render = |fs: &[(u64, i64)]| {
            fs.iter()
                .map(|&(d, e)| if e == 1 { format!("f{d}") } else { format!("f{d}^{e}") })
                .collect::<Vec<_>>()
                .join(" ")
        };
        let num: Vec<_> = self.factors.iter().filter(|(_, &e)| e > 0).map(|(&d, &e)| (d, e)).collect();
        let den: Vec<_> = self.factors.iter().filter(|(_, &e)| e < 0).map(|(&d, &e)| (d, -e)).collect();
        let mut out = String::new();
        if num.is_empty() {
            out.push_str(&self.scalar.to_string());
        } else {
            match self.scalar {
                1 => {}
                -1 => out.push('-'),
                c => out.push_str(&format!("{c} * ")),
            }
            out.push_str(&render(&num));
        }
        match den.len() {
            0 => {}
            1 => out.push_str(&format!(" / {}", render(&den))),
            _ => out.push_str(&format!(" / ({})", render(&den))),
        }
        f.write_str(&out)
    }
}

/// Parses literals such as `3 * f2^4 f3^5 / (f1^8 f6)`, `f2^3 / f1^3` or `-f1^-2`.
impl FromStr for FQuotient {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser { src: s.as_bytes(), pos: 0 };
        let q = p.quotient()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(Error::parse(p.pos, "unexpected trailing input"));
        }
        Ok(q)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if self.src.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        let digits = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == digits {
            return Err(Error::parse(start, "expected an integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::parse(start, "integer out of range"))
    }

    fn factor(&mut self) -> Result<(u64, i64)> {
        self.skip_ws();
        let start = self.pos;
        if !self.eat(b'f') {
            return Err(Error::parse(start, "expected a factor like `f3`"));
        }
        let d = self.integer()?;
        if d < 1 {
            return Err(Error::parse(start + 1, "factor index must be positive"));
        }
        let e = if self.eat(b'^') { self.integer()? } else { 1 };
        Ok((d as u64, e))
    }

    fn product(&mut self, into: &mut Vec<(u64, i64)>) -> Result<()> {
        loop {
            self.eat(b'*');
            match self.peek() {
                Some(b'f') => into.push(self.factor()?),
                _ => return Ok(()),
            }
        }
    }

    fn quotient(&mut self) -> Result<FQuotient> {
        let mut scalar = 1;
        match self.peek() {
            Some(c) if c.is_ascii_digit() => scalar = self.integer()?,
            Some(b'-') => {
                let save = self.pos;
                self.pos += 1;
                if self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    self.pos = save;
                    scalar = self.integer()?;
                } else {
                    scalar = -1;
                }
            }
            None => return Err(Error::parse(self.pos, "empty quotient")),
            _ => {}
        }
        let mut num = Vec::new();
        self.product(&mut num)?;
        let mut den = Vec::new();
        if self.eat(b'/') {
            if self.eat(b'(') {
                self.product(&mut den)?;
                if !self.eat(b')') {
                    return Err(Error::parse(self.pos, "expected `)`"));
                }
            } else {
                den.push(self.factor()?);
            }
            if den.is_empty() {
                return Err(Error::parse(self.pos, "empty denominator"));
            }
        }
        Ok(FQuotient::from_factors(
            scalar,
            num.into_iter().chain(den.into_iter().map(|(d, e)| (d, -e))),
        ))
    }
}

fn pentagonal_terms(delta: usize, trunc: usize) -> Vec<(usize, i64)> {
    let mut terms = vec![(0, 1)];
    for m in 1usize.. {
        let a = delta * m * (3 * m - 1) / 2;
        if a > trunc {
            break;
        }
        let sign = if m % 2 == 1 { -1 } else { 1 };
        terms.push((a, sign));
        let b = delta * m * (3 * m + 1) / 2;
        if b <= trunc {
            terms.push((b, sign));
        }
    }
    terms
}

fn cube_terms(delta: usize, trunc: usize) -> Vec<(usize, i64)> {
    (0usize..)
        .map(|n| (delta * n * (n + 1) / 2, n))
        .take_while(|&(e, _)| e <= trunc)
        .map(|(e, n)| (e, if n % 2 == 0 { 2 * n as i64 + 1 } else { -(2 * n as i64 + 1) }))
        .collect()
}

/// `f_delta` through Euler's pentagonal number theorem.
pub fn expand_f(delta: u64, trunc: usize, ring: Ring) -> TruncatedSeries {
    assert!(delta >= 1);
    TruncatedSeries::from_terms(ring, trunc, pentagonal_terms(delta as usize, trunc))
}

/// `f_1^3 = sum_{n >= 0} (-1)^n (2n + 1) q^(n(n+1)/2)`.
pub fn jacobi_cube_series(trunc: usize, ring: Ring) -> TruncatedSeries {
    cube_of_f(1, trunc, ring)
}

/// `f_delta^3` from the triangular-number expansion.
pub fn cube_of_f(delta: u64, trunc: usize, ring: Ring) -> TruncatedSeries {
    TruncatedSeries::from_terms(ring, trunc, cube_terms(delta as usize, trunc))
}

/// `prod_{i >= 1} (1 - q^(delta i))` multiplied out factor by factor.
///
/// Quadratic cost; this is the independent route for checking [`expand_f`].
pub fn euler_product(delta: u64, trunc: usize, ring: Ring) -> TruncatedSeries {
    let mut acc = TruncatedSeries::one(ring, trunc);
    let mut i = delta as usize;
    while i <= trunc {
        let factor = TruncatedSeries::from_terms(ring, trunc, [(0, 1), (i, -1)]);
        acc = acc.mul(&factor).expect("same ring");
        i += delta as usize;
    }
    acc
}

/// Borweins' cubic theta `a(q^scale) = sum_{j,k} q^(scale (j^2 + j k + k^2))`.
pub fn borwein_a_series(scale: u64, trunc: usize, ring: Ring) -> TruncatedSeries {
    assert!(scale >= 1);
    let scale = scale as usize;
    let top = (trunc / scale) as i64;
    let bound = ((4 * top + 2) / 3).sqrt() + 2;
    let mut counts = vec![0i64; top as usize + 1];
    for j in -bound..=bound {
        for k in -bound..=bound {
            let m = j * j + j * k + k * k;
            if m <= top {
                counts[m as usize] += 1;
            }
        }
    }
    TruncatedSeries::from_terms(
        ring,
        trunc,
        counts.into_iter().enumerate().map(|(m, c)| (m * scale, c)),
    )
}

/// Expand `scalar * prod f_d^(r_d)` to `q^trunc`.
///
/// Positive powers are multiplied first, sparsest factor first; negative
/// powers are then divided out one sparse factor at a time.
pub fn expand_fquotient(fq: &FQuotient, trunc: usize, ring: Ring) -> Result<TruncatedSeries> {
    let mut num: Vec<TruncatedSeries> = Vec::new();
    let mut den: Vec<TruncatedSeries> = Vec::new();
    for (&d, &r) in fq.factors() {
        let target = if r > 0 { &mut num } else { &mut den };
        let r = r.unsigned_abs();
        for _ in 0..r / 3 {
            target.push(cube_of_f(d, trunc, ring));
        }
        for _ in 0..r % 3 {
            target.push(expand_f(d, trunc, ring));
        }
    }
    num.sort_by_key(|s| s.nonzero_count());
    let mut factors = num.into_iter();
    let mut acc = match factors.next() {
        Some(first) => {
            let mut acc = first;
            for s in factors {
                acc = acc.mul(&s)?;
            }
            acc.scale(fq.scalar)
        }
        None => TruncatedSeries::constant(ring, fq.scalar, trunc),
    };
    for s in &den {
        acc = acc.div(s)?;
    }
    Ok(acc)
}

/// Sparse theta-type building blocks allowed inside catalog expressions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Theta {
    /// `sum_{n in Z} (-1)^n q^(delta n (3n-1)/2)`.
    Pentagonal { delta: u64 },
    /// `sum_{n >= 0} (-1)^n (2n+1) q^(delta n (n+1)/2)`.
    JacobiCube { delta: u64 },
    /// `prod_{i >= 1} (1 - q^(delta i))`, expanded directly.
    EulerProduct { delta: u64 },
    /// Borweins' cubic theta `a(q^scale)`.
    Borwein { scale: u64 },
}

impl Theta {
    fn expand(&self, trunc: usize, ring: Ring) -> TruncatedSeries {
        match *self {
            Theta::Pentagonal { delta } => expand_f(delta, trunc, ring),
            Theta::JacobiCube { delta } => cube_of_f(delta, trunc, ring),
            Theta::EulerProduct { delta } => euler_product(delta, trunc, ring),
            Theta::Borwein { scale } => borwein_a_series(scale, trunc, ring),
        }
    }

    fn scale(&self) -> u64 {
        match *self {
            Theta::Pentagonal { delta } | Theta::JacobiCube { delta } | Theta::EulerProduct { delta } => delta,
            Theta::Borwein { scale } => scale,
        }
    }
}

impl fmt::Display for Theta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Theta::Pentagonal { delta } => write!(f, "pent{delta}"),
            Theta::JacobiCube { delta } => write!(f, "jac{delta}"),
            Theta::EulerProduct { delta } => write!(f, "prod{delta}"),
            Theta::Borwein { scale } => write!(f, "a{scale}"),
        }
    }
}

/// `q^shift * quotient * prod theta^power`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub quotient: FQuotient,
    #[serde(default)]
    pub shift: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub thetas: Vec<(Theta, u32)>,
}

impl Term {
    pub fn new(quotient: FQuotient) -> Self {
        Term {
            quotient,
            shift: 0,
            thetas: Vec::new(),
        }
    }

    pub fn shifted(mut self, d: usize) -> Self {
        self.shift += d;
        self
    }

    pub fn theta(mut self, theta: Theta, power: u32) -> Self {
        self.thetas.push((theta, power));
        self
    }

    fn evaluate(&self, trunc: usize, ring: Ring) -> Result<TruncatedSeries> {
        if self.shift > trunc {
            return Ok(TruncatedSeries::zero(ring, trunc));
        }
        let inner = trunc - self.shift;
        let mut acc = expand_fquotient(&self.quotient, inner, ring)?;
        for (theta, power) in &self.thetas {
            let t = theta.expand(inner, ring);
            for _ in 0..*power {
                acc = acc.mul(&t)?;
            }
        }
        Ok(acc.shift(self.shift))
    }

    /// Residue class mod `m` carrying this term, if every factor is a series in `q^m`.
    fn residue_class(&self, m: u64) -> Option<usize> {
        let in_qm = self.quotient.factors().keys().all(|d| d % m == 0)
            && self.thetas.iter().all(|(t, _)| t.scale() % m == 0);
        in_qm.then_some(self.shift % m as usize)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.shift == 1 {
            parts.push("q".to_string());
        } else if self.shift > 1 {
            parts.push(format!("q^{}", self.shift));
        }
        for (t, p) in &self.thetas {
            parts.push(if *p == 1 { t.to_string() } else { format!("{t}^{p}") });
        }
        parts.push(format!("[{}]", self.quotient));
        f.write_str(&parts.join(" "))
    }
}

/// Catalog expression: a sum of terms, optionally viewed through dissection operators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Expr {
    Sum { terms: Vec<Term> },
    /// `n -> c(m n + r)` of the inner expression.
    Extract { m: usize, r: usize, inner: Box<Expr> },
    /// `q -> q^t`.
    Magnify { t: usize, inner: Box<Expr> },
    /// Multiply by `q^d`.
    Shift { d: usize, inner: Box<Expr> },
}

impl Expr {
    pub fn quotient(q: FQuotient) -> Self {
        Expr::Sum {
            terms: vec![Term::new(q)],
        }
    }

    pub fn terms(terms: Vec<Term>) -> Self {
        Expr::Sum { terms }
    }

    pub fn extract(self, m: usize, r: usize) -> Self {
        Expr::Extract {
            m,
            r,
            inner: Box::new(self),
        }
    }

    pub fn magnify(self, t: usize) -> Self {
        Expr::Magnify {
            t,
            inner: Box::new(self),
        }
    }

    pub fn shift(self, d: usize) -> Self {
        Expr::Shift {
            d,
            inner: Box::new(self),
        }
    }

    /// Expand to exactly `q^trunc`.
    pub fn evaluate(&self, trunc: usize, ring: Ring) -> Result<TruncatedSeries> {
        match self {
            Expr::Sum { terms } => terms
                .iter()
                .try_fold(TruncatedSeries::zero(ring, trunc), |acc, t| {
                    acc.add(&t.evaluate(trunc, ring)?)
                }),
            Expr::Extract { m, r, inner } => Ok(inner.evaluate(m * trunc + r, ring)?.extract_ap(*m, *r)),
            Expr::Magnify { t, inner } => {
                // Exponents between t * floor(trunc / t) and trunc are not multiples of t.
                let m = inner.evaluate(trunc / t, ring)?.magnify(*t);
                Ok(pad_zeros(m, trunc))
            }
            Expr::Shift { d, inner } => {
                if *d > trunc {
                    Ok(TruncatedSeries::zero(ring, trunc))
                } else {
                    Ok(inner.evaluate(trunc - d, ring)?.shift(*d))
                }
            }
        }
    }
}

fn pad_zeros(s: TruncatedSeries, trunc: usize) -> TruncatedSeries {
    if s.trunc() >= trunc {
        return s.truncate(trunc);
    }
    let mut values = s.to_bigints();
    values.resize(trunc + 1, Default::default());
    TruncatedSeries::from_bigints(s.ring(), values)
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Sum { terms } => {
                let parts: Vec<_> = terms.iter().map(|t| t.to_string()).collect();
                f.write_str(&parts.join(" + "))
            }
            Expr::Extract { m, r, inner } => write!(f, "extract[{m}n+{r}]({inner})"),
            Expr::Magnify { t, inner } => write!(f, "magnify[{t}]({inner})"),
            Expr::Shift { d, inner } => write!(f, "q^{d}*({inner})"),
        }
    }
}

/// One catalogued identity `lhs = rhs`, or `lhs ≡ rhs (mod modulus)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityEntry {
    pub id: String,
    pub anchor: String,
    pub modulus: Option<u64>,
    pub lhs: Expr,
    pub rhs: Expr,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
}

impl IdentityEntry {
    fn new(id: &str, anchor: &str, modulus: Option<u64>, lhs: Expr, rhs: Expr) -> Self {
        IdentityEntry {
            id: id.to_string(),
            anchor: anchor.to_string(),
            modulus,
            lhs,
            rhs,
            notes: None,
        }
    }

    fn note(mut self, n: &str) -> Self {
        self.notes = Some(n.to_string());
        self
    }

    pub fn ring(&self) -> Result<Ring> {
        match self.modulus {
            None => Ok(Ring::Integer),
            Some(m) => Ring::modulo(m),
        }
    }
}

fn fq(scalar: i64, factors: &[(u64, i64)]) -> FQuotient {
    FQuotient::from_factors(scalar, factors.iter().copied())
}

fn t2() -> Expr {
    Expr::quotient(FQuotient::tuple_regular(2, 3))
}

/// Every product identity, dissection and intermediate congruence used in the
/// proofs, as declarative data.
pub fn catalog() -> Vec<IdentityEntry> {
    use Theta::*;
    let a3 = Borwein { scale: 3 };
    let mut entries = vec![
        IdentityEntry::new(
            "e2.0.3.4",
            "Euler's pentagonal number theorem",
            None,
            Expr::terms(vec![Term::new(FQuotient::one()).theta(EulerProduct { delta: 1 }, 1)]),
            Expr::terms(vec![Term::new(FQuotient::one()).theta(Pentagonal { delta: 1 }, 1)]),
        ),
        IdentityEntry::new(
            "e2.0.3.3",
            "Jacobi's triple product, cube of f1",
            None,
            Expr::terms(vec![Term::new(FQuotient::one()).theta(EulerProduct { delta: 1 }, 3)]),
            Expr::terms(vec![Term::new(FQuotient::one()).theta(JacobiCube { delta: 1 }, 1)]),
        ),
        IdentityEntry::new(
            "e0.7",
            "3-dissection of f1^2/f2",
            None,
            Expr::quotient(fq(1, &[(1, 2), (2, -1)])),
            Expr::terms(vec![
                Term::new(fq(1, &[(9, 2), (18, -1)])),
                Term::new(fq(-2, &[(3, 1), (18, 2), (6, -1), (9, -1)])).shifted(1),
            ]),
        ),
        IdentityEntry::new(
            "e0.8",
            "3-dissection of f1^3",
            None,
            Expr::quotient(fq(1, &[(1, 3)])),
            Expr::terms(vec![
                Term::new(fq(1, &[(6, 1), (9, 6), (3, -1), (18, -3)])),
                Term::new(fq(-3, &[(9, 3)])).shifted(1),
                Term::new(fq(4, &[(3, 2), (18, 6), (6, -2), (9, -3)])).shifted(3),
            ]),
        )
        .note("the first denominator is printed as f_{18^3}; read as f18^3"),
        IdentityEntry::new(
            "e0.8.0",
            "3-dissection of 1/f1^3",
            None,
            Expr::quotient(fq(1, &[(1, -3)])),
            Expr::terms(vec![
                Term::new(fq(1, &[(9, 3), (3, -10)])).theta(a3.clone(), 2),
                Term::new(fq(3, &[(9, 6), (3, -11)])).shifted(1).theta(a3.clone(), 1),
                Term::new(fq(9, &[(9, 9), (3, -12)])).shifted(2),
            ]),
        ),
        IdentityEntry::new(
            "e0.7.0",
            "Borweins' cubic theta, a1 = a3 + 6q f9^3/f3",
            None,
            Expr::terms(vec![Term::new(FQuotient::one()).theta(Borwein { scale: 1 }, 1)]),
            Expr::terms(vec![
                Term::new(FQuotient::one()).theta(a3.clone(), 1),
                Term::new(fq(6, &[(9, 3), (3, -1)])).shifted(1),
            ]),
        ),
        IdentityEntry::new(
            "e0.2",
            "sum T2(3n+1) q^n",
            None,
            t2().extract(3, 1),
            Expr::quotient(fq(3, &[(2, 4), (3, 5), (1, -8), (6, -1)])),
        ),
        IdentityEntry::new(
            "e0.2.1",
            "sum T2(3n+2) q^n",
            None,
            t2().extract(3, 2),
            Expr::quotient(fq(6, &[(2, 3), (3, 2), (6, 2), (1, -7)])),
        ),
        IdentityEntry::new(
            "e0.3",
            "sum T2(3n+1) q^n mod 24",
            Some(24),
            t2().extract(3, 1),
            Expr::quotient(fq(3, &[(3, 5), (6, -1)])),
        ),
        IdentityEntry::new(
            "e0.3.exact-side",
            "3 f2^4 f3^5/(f1^8 f6) mod 24",
            Some(24),
            Expr::quotient(fq(3, &[(2, 4), (3, 5), (1, -8), (6, -1)])),
            Expr::quotient(fq(3, &[(3, 5), (6, -1)])),
        ),
        IdentityEntry::new(
            "e0.4",
            "sum T2(9n+1) q^n mod 24",
            Some(24),
            t2().extract(9, 1),
            Expr::quotient(fq(3, &[(1, 5), (2, -1)])),
        ),
        IdentityEntry::new(
            "e1.0",
            "sum T2(27n+10) q^n mod 24",
            Some(24),
            t2().extract(27, 10),
            Expr::quotient(fq(9, &[(3, 5), (6, -1)])),
        ),
        IdentityEntry::new(
            "e1.1",
            "sum T2(81n+10) q^n mod 24",
            Some(24),
            t2().extract(81, 10),
            Expr::quotient(fq(9, &[(1, 5), (2, -1)])),
        ),
        IdentityEntry::new(
            "e1.4",
            "sum T2(243n+91) q^n mod 24",
            Some(24),
            t2().extract(243, 91),
            Expr::quotient(fq(3, &[(3, 5), (6, -1)])),
        ),
        IdentityEntry::new(
            "e50.1",
            "sum T2(9n+1) q^n mod 6",
            Some(6),
            t2().extract(9, 1),
            Expr::quotient(fq(3, &[(1, 1), (2, 1)])),
        ),
        IdentityEntry::new(
            "e10",
            "sum T2(3n+2) q^n mod 12",
            Some(12),
            t2().extract(3, 2),
            Expr::quotient(fq(6, &[(3, 6), (1, -1)])),
        ),
        IdentityEntry::new(
            "e2.0",
            "T4 generating function mod 3",
            Some(3),
            Expr::quotient(FQuotient::tuple_regular(4, 3)),
            Expr::quotient(fq(1, &[(12, 1), (3, -1)])),
        ),
        IdentityEntry::new(
            "e2.5",
            "sum T4(3n) q^n mod 3",
            Some(3),
            Expr::quotient(FQuotient::tuple_regular(4, 3)).extract(3, 0),
            Expr::quotient(fq(1, &[(4, 1), (1, -1)])),
        ),
        IdentityEntry::new(
            "e4",
            "sum T2(n) q^(8n+1) mod 2 against the discriminant q f1^24",
            Some(2),
            t2().magnify(8).shift(1),
            Expr::terms(vec![Term::new(fq(1, &[(1, 24)])).shifted(1)]),
        ),
        IdentityEntry::new(
            "e4.exact",
            "sum T2(n) q^(8n+1) = q f16^3/f8^3",
            None,
            t2().magnify(8).shift(1),
            Expr::terms(vec![Term::new(fq(1, &[(16, 3), (8, -3)])).shifted(1)]),
        ),
    ];
    // Frobenius-type congruence f_k^(p^l) ≡ f_(pk)^(p^(l-1)) mod p^l.
    for &(p, l, k) in &[(2u64, 1u32, 1u64), (2, 3, 1), (3, 1, 1), (3, 2, 2), (5, 1, 1), (7, 1, 1)] {
        let pl = p.pow(l);
        entries.push(IdentityEntry::new(
            &format!("e0.1[p={p},l={l},k={k}]"),
            "f_k^(p^l) ≡ f_(pk)^(p^(l-1)) mod p^l",
            Some(pl),
            Expr::quotient(fq(1, &[(k, pl as i64)])),
            Expr::quotient(fq(1, &[(p * k, p.pow(l - 1) as i64)])),
        ));
    }
    entries
}

/// Ids required by the acceptance gate, in catalog order.
pub const CORE_IDENTITIES: &[&str] = &[
    "e2.0.3.4", "e2.0.3.3", "e0.7", "e0.8", "e0.8.0", "e0.7.0", "e0.2", "e0.2.1", "e0.3", "e0.4",
    "e1.0", "e1.1", "e1.4", "e50.1", "e10", "e2.0", "e2.5", "e4",
];

pub fn find_identity(id: &str) -> Result<IdentityEntry> {
    catalog()
        .into_iter()
        .find(|e| e.id == id)
        .ok_or_else(|| Error::UnknownIdentity(id.to_string()))
}

/// Expand both sides of `entry` to `q^trunc` and compare.
pub fn verify_identity(entry: &IdentityEntry, trunc: usize) -> Result<VerificationReport> {
    if trunc < 16 {
        return Err(Error::Domain(format!("identity checks need trunc >= 16, got {trunc}")));
    }
    let ring = entry.ring()?;
    let lhs = entry.lhs.evaluate(trunc, ring)?;
    let rhs = entry.rhs.evaluate(trunc, ring)?;
    let failure = lhs.first_difference(&rhs)?.map(|i| Counterexample {
        n: i as u64,
        value: lhs.coeff(i as i64).to_string(),
        expected: rhs.coeff(i as i64).to_string(),
    });
    let mut report = VerificationReport::from_outcome(
        entry.id.clone(),
        trunc as u64,
        trunc as u64 + 1,
        trunc,
        failure,
    );
    if let Some(n) = &entry.notes {
        report = report.with_note(n.clone());
    }
    Ok(report)
}

pub fn verify_identity_by_id(id: &str, trunc: usize) -> Result<VerificationReport> {
    verify_identity(&find_identity(id)?, trunc)
}

/// Check a dissection entry class by class: each right-hand term must live on
/// a single residue class mod `m`, and for every class the matching left-hand
/// component must equal the sum of the terms on that class.
pub fn verify_dissection(entry: &IdentityEntry, m: usize, trunc: usize) -> Result<Vec<VerificationReport>> {
    let ring = entry.ring()?;
    let Expr::Sum { terms } = &entry.rhs else {
        return Err(Error::Domain(format!("{} has no termwise right-hand side", entry.id)));
    };
    let mut classes: Vec<Vec<&Term>> = vec![Vec::new(); m];
    for t in terms {
        let c = t.residue_class(m as u64).ok_or_else(|| {
            Error::Domain(format!("term {t} of {} is not a series in q^{m}", entry.id))
        })?;
        classes[c].push(t);
    }
    let lhs = entry.lhs.evaluate(trunc, ring)?;
    let mut reports = Vec::with_capacity(m);
    for (j, ts) in classes.iter().enumerate() {
        let len = (trunc - j) / m;
        let mut rhs = TruncatedSeries::zero(ring, trunc);
        let mut off_class = None;
        for t in ts {
            let s = t.evaluate(trunc, ring)?;
            off_class = off_class.or_else(|| s.support().into_iter().find(|(n, _)| n % m != j).map(|(n, _)| n));
            rhs = rhs.add(&s)?;
        }
        let lhs_j = lhs.extract_ap(m, j);
        let rhs_j = rhs.extract_ap(m, j);
        let failure = match off_class {
            Some(n) => Some(Counterexample {
                n: n as u64,
                value: "nonzero".into(),
                expected: format!("support on class {j} mod {m}"),
            }),
            None => lhs_j.first_difference(&rhs_j)?.map(|i| Counterexample {
                n: (m * i + j) as u64,
                value: lhs_j.coeff(i as i64).to_string(),
                expected: rhs_j.coeff(i as i64).to_string(),
            }),
        };
        reports.push(VerificationReport::from_outcome(
            format!("{}[class {j} mod {m}]", entry.id),
            len as u64,
            len as u64 + 1,
            trunc,
            failure,
        ));
    }
    Ok(reports)
}

type SlotKey = (FQuotient, Ring, usize);
type Slot = Arc<OnceLock<Result<Arc<TruncatedSeries>>>>;

/// Memoized f-quotient expansions shared between workers.
///
/// Each `(quotient, ring, trunc)` is built at most once. A lookup is also
/// served by any finished expansion over a ring that determines the requested
/// one (for example mod 24 serves mod 6) with at least the requested truncation.
#[derive(Default)]
pub struct ExpansionCache {
    slots: Mutex<HashMap<SlotKey, Slot>>,
    built: AtomicUsize,
}

impl ExpansionCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// A series over a ring refining `ring`, known at least to `q^trunc`.
    pub fn get(&self, q: &FQuotient, ring: Ring, trunc: usize) -> Result<Arc<TruncatedSeries>> {
        let slot = {
            let mut slots = self.slots.lock().unwrap();
            let reusable = slots.iter().find_map(|((k, r, t), slot)| {
                (k == q && r.refines(ring) && *t >= trunc)
                    .then(|| slot.get().and_then(|v| v.as_ref().ok().cloned()))
                    .flatten()
            });
            if let Some(s) = reusable {
                return Ok(s);
            }
            slots
                .entry((q.clone(), ring, trunc))
                .or_insert_with(|| Arc::new(OnceLock::new()))
                .clone()
        };
        slot.get_or_init(|| {
            self.built.fetch_add(1, Ordering::Relaxed);
            expand_fquotient(q, trunc, ring).map(Arc::new)
        })
        .clone()
    }

    /// Exactly `ring` and `trunc`, derived from a cached expansion when possible.
    pub fn expand(&self, q: &FQuotient, ring: Ring, trunc: usize) -> Result<TruncatedSeries> {
        let s = self.get(q, ring, trunc)?;
        let s = if s.trunc() == trunc { (*s).clone() } else { s.truncate(trunc) };
        s.into_ring(ring)
    }

    /// Number of expansions actually computed.
    pub fn constructions(&self) -> usize {
        self.built.load(Ordering::Relaxed)
    }
}
