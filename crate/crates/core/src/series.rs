//! Truncated formal power series over the integers or over `Z/MZ`.
//!
//! A [`TruncatedSeries`] stores the coefficients of `q^0 ..= q^N` and
//! carries `N` (its truncation) with it. Binary operations return a series
//! truncated at the smaller of the two inputs. Exact coefficients are
//! arbitrary-precision integers; modular coefficients are machine-word
//! residues in `[0, M)` with `M < 2^63`.
//!
//! Products and quotients iterate only over the nonzero coefficients of the
//! sparser operand, so multiplying by a theta-type factor (pentagonal or
//! triangular support) costs `O(N * nnz)` rather than `O(N^2)`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coefficient ring of a series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ring {
    Integer,
    Mod(u64),
}

impl Ring {
    /// `Z/mZ`, rejecting `m < 2` and `m >= 2^63`.
    pub fn modulo(m: u64) -> Result<Ring> {
        if !(2..1 << 63).contains(&m) {
            return Err(Error::InvalidModulus(m));
        }
        Ok(Ring::Mod(m))
    }

    pub fn modulus(self) -> Option<u64> {
        match self {
            Ring::Integer => None,
            Ring::Mod(m) => Some(m),
        }
    }

    /// Whether coefficients in `self` determine coefficients in `target`.
    pub fn refines(self, target: Ring) -> bool {
        match (self, target) {
            (Ring::Integer, _) => true,
            (Ring::Mod(_), Ring::Integer) => false,
            (Ring::Mod(a), Ring::Mod(b)) => a % b == 0,
        }
    }

    fn check(self) -> Result<Self> {
        match self {
            Ring::Integer => Ok(self),
            Ring::Mod(m) => Ring::modulo(m),
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Integer => write!(f, "Z"),
            Ring::Mod(m) => write!(f, "Z/{m}Z"),
        }
    }
}

/// Residue arithmetic modulo `m`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Zm {
    m: u64,
}

impl Zm {
    pub(crate) fn new(m: u64) -> Self {
        debug_assert!((2..1 << 63).contains(&m));
        Zm { m }
    }

    #[inline]
    pub(crate) fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.m {
            s - self.m
        } else {
            s
        }
    }

    #[inline]
    pub(crate) fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.m - b
        }
    }

    #[inline]
    pub(crate) fn mul(self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.m as u128) as u64
    }

    pub(crate) fn reduce_i64(self, v: i64) -> u64 {
        v.rem_euclid(self.m as i64) as u64
    }

    pub(crate) fn reduce_big(self, v: &BigInt) -> u64 {
        v.mod_floor(&BigInt::from(self.m))
            .to_u64()
            .expect("residue fits in u64")
    }

    pub(crate) fn inv(self, a: u64) -> Option<u64> {
        let (mut r0, mut r1) = (self.m as i128, a as i128);
        let (mut s0, mut s1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        (r0 == 1).then(|| s0.rem_euclid(self.m as i128) as u64)
    }

    /// Number of residue products that can be summed in a `u64` before a reduction.
    fn lazy_budget(self) -> usize {
        let sq = (self.m - 1) as u128 * (self.m - 1) as u128;
        (u64::MAX as u128 / sq).min(usize::MAX as u128) as usize
    }

    /// `sum c * v[n - j]` over the sparse terms `(j, c)` with `j <= n`.
    #[inline]
    fn dot(self, terms: &[(usize, u64)], v: &[u64], n: usize, budget: usize) -> u64 {
        let end = terms.partition_point(|&(j, _)| j <= n);
        let terms = &terms[..end];
        if budget >= terms.len() {
            let mut acc = 0u64;
            for &(j, c) in terms {
                acc += c * v[n - j];
            }
            acc % self.m
        } else if budget > 1 {
            let mut acc = 0u64;
            for chunk in terms.chunks(budget - 1) {
                for &(j, c) in chunk {
                    acc += c * v[n - j];
                }
                acc %= self.m;
            }
            acc
        } else {
            terms
                .iter()
                .fold(0, |acc, &(j, c)| self.add(acc, self.mul(c, v[n - j])))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Coeffs {
    Exact(Vec<BigInt>),
    Residues(Vec<u64>),
}

/// A power series `c(0) + c(1) q + ... + c(N) q^N` known up to `q^N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    ring: Ring,
    coeffs: Coeffs,
}

#[derive(Clone, Debug)]
enum ExactTerm {
    PlusOne,
    MinusOne,
    Small(i64),
    Big(BigInt),
}

impl ExactTerm {
    fn of(c: &BigInt) -> Self {
        match c.to_i64() {
            Some(1) => ExactTerm::PlusOne,
            Some(-1) => ExactTerm::MinusOne,
            Some(v) => ExactTerm::Small(v),
            None => ExactTerm::Big(c.clone()),
        }
    }

    #[inline]
    fn accumulate(&self, acc: &mut BigInt, v: &BigInt) {
        if v.is_zero() {
            return;
        }
        match self {
            ExactTerm::PlusOne => *acc += v,
            ExactTerm::MinusOne => *acc -= v,
            ExactTerm::Small(c) => *acc += v * *c,
            ExactTerm::Big(c) => *acc += v * c,
        }
    }
}

impl TruncatedSeries {
    pub fn zero(ring: Ring, trunc: usize) -> Self {
        let coeffs = match ring {
            Ring::Integer => Coeffs::Exact(vec![BigInt::zero(); trunc + 1]),
            Ring::Mod(_) => Coeffs::Residues(vec![0; trunc + 1]),
        };
        TruncatedSeries { ring, coeffs }
    }

    /// The constant series `value`, reduced into `ring`.
    pub fn constant(ring: Ring, value: i64, trunc: usize) -> Self {
        Self::from_terms(ring, trunc, [(0, value)])
    }

    pub fn one(ring: Ring, trunc: usize) -> Self {
        Self::constant(ring, 1, trunc)
    }

    /// Series with the given leading coefficients; `trunc = values.len() - 1`.
    ///
    /// Panics if `values` is empty.
    pub fn from_coeffs(ring: Ring, values: &[i64]) -> Self {
        assert!(!values.is_empty(), "a series has at least one coefficient");
        Self::from_terms(ring, values.len() - 1, values.iter().copied().enumerate())
    }

    pub fn from_bigints(ring: Ring, values: Vec<BigInt>) -> Self {
        assert!(!values.is_empty(), "a series has at least one coefficient");
        let coeffs = match ring {
            Ring::Integer => Coeffs::Exact(values),
            Ring::Mod(m) => {
                let zm = Zm::new(m);
                Coeffs::Residues(values.iter().map(|v| zm.reduce_big(v)).collect())
            }
        };
        TruncatedSeries { ring, coeffs }
    }

    /// Sum of `c q^n` over the given terms; terms beyond `trunc` are dropped.
    pub fn from_terms(
        ring: Ring,
        trunc: usize,
        terms: impl IntoIterator<Item = (usize, i64)>,
    ) -> Self {
        let mut s = Self::zero(ring, trunc);
        match &mut s.coeffs {
            Coeffs::Exact(v) => {
                for (n, c) in terms {
                    if n <= trunc {
                        v[n] += c;
                    }
                }
            }
            Coeffs::Residues(v) => {
                let zm = Zm::new(ring.modulus().unwrap());
                for (n, c) in terms {
                    if n <= trunc {
                        v[n] = zm.add(v[n], zm.reduce_i64(c));
                    }
                }
            }
        }
        s
    }

    pub(crate) fn from_residues(m: u64, values: Vec<u64>) -> Self {
        debug_assert!(values.iter().all(|&r| r < m));
        TruncatedSeries {
            ring: Ring::Mod(m),
            coeffs: Coeffs::Residues(values),
        }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn trunc(&self) -> usize {
        self.len() - 1
    }

    pub fn len(&self) -> usize {
        match &self.coeffs {
            Coeffs::Exact(v) => v.len(),
            Coeffs::Residues(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn as_exact(&self) -> Option<&[BigInt]> {
        match &self.coeffs {
            Coeffs::Exact(v) => Some(v),
            Coeffs::Residues(_) => None,
        }
    }

    pub fn as_residues(&self) -> Option<&[u64]> {
        match &self.coeffs {
            Coeffs::Residues(v) => Some(v),
            Coeffs::Exact(_) => None,
        }
    }

    /// Coefficient of `q^n`; negative exponents read as zero.
    ///
    /// Panics if `n > trunc`, since that coefficient is unknown.
    pub fn coeff(&self, n: i64) -> BigInt {
        if n < 0 {
            return BigInt::zero();
        }
        let n = self.index(n);
        match &self.coeffs {
            Coeffs::Exact(v) => v[n].clone(),
            Coeffs::Residues(v) => BigInt::from(v[n]),
        }
    }

    /// Coefficient of `q^n` reduced modulo `m`, which must be compatible with the ring.
    pub fn residue(&self, n: i64, m: u64) -> u64 {
        if n < 0 {
            return 0;
        }
        let n = self.index(n);
        match &self.coeffs {
            Coeffs::Exact(v) => Zm::new(m).reduce_big(&v[n]),
            Coeffs::Residues(v) => {
                debug_assert!(self.ring.refines(Ring::Mod(m)));
                v[n] % m
            }
        }
    }

    fn index(&self, n: i64) -> usize {
        let n = n as usize;
        assert!(
            n <= self.trunc(),
            "coefficient q^{n} requested beyond truncation {}",
            self.trunc()
        );
        n
    }

    pub fn to_bigints(&self) -> Vec<BigInt> {
        match &self.coeffs {
            Coeffs::Exact(v) => v.clone(),
            Coeffs::Residues(v) => v.iter().map(|&r| BigInt::from(r)).collect(),
        }
    }

    pub fn nonzero_count(&self) -> usize {
        match &self.coeffs {
            Coeffs::Exact(v) => v.iter().filter(|c| !c.is_zero()).count(),
            Coeffs::Residues(v) => v.iter().filter(|&&c| c != 0).count(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.nonzero_count() == 0
    }

    /// First `trunc + 1` coefficients. Panics if `trunc` exceeds the current truncation.
    pub fn truncate(&self, trunc: usize) -> Self {
        assert!(trunc <= self.trunc(), "cannot extend a truncated series");
        let coeffs = match &self.coeffs {
            Coeffs::Exact(v) => Coeffs::Exact(v[..=trunc].to_vec()),
            Coeffs::Residues(v) => Coeffs::Residues(v[..=trunc].to_vec()),
        };
        TruncatedSeries {
            ring: self.ring,
            coeffs,
        }
    }

    fn same_ring(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(self.ring, other.ring));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b, |zm, a, b| zm.add(a, b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b, |zm, a, b| zm.sub(a, b))
    }

    fn zip_with(
        &self,
        other: &Self,
        exact: impl Fn(&BigInt, &BigInt) -> BigInt,
        residue: impl Fn(Zm, u64, u64) -> u64,
    ) -> Result<Self> {
        self.same_ring(other)?;
        let len = self.len().min(other.len());
        let coeffs = match (&self.coeffs, &other.coeffs) {
            (Coeffs::Exact(a), Coeffs::Exact(b)) => {
                Coeffs::Exact((0..len).map(|i| exact(&a[i], &b[i])).collect())
            }
            (Coeffs::Residues(a), Coeffs::Residues(b)) => {
                let zm = Zm::new(self.ring.modulus().unwrap());
                Coeffs::Residues((0..len).map(|i| residue(zm, a[i], b[i])).collect())
            }
            _ => unreachable!("ring and storage agree"),
        };
        Ok(TruncatedSeries {
            ring: self.ring,
            coeffs,
        })
    }

    pub fn neg(&self) -> Self {
        self.scale(-1)
    }

    /// Multiply every coefficient by `c`.
    pub fn scale(&self, c: i64) -> Self {
        let coeffs = match &self.coeffs {
            Coeffs::Exact(v) => Coeffs::Exact(v.iter().map(|x| x * c).collect()),
            Coeffs::Residues(v) => {
                let zm = Zm::new(self.ring.modulus().unwrap());
                let c = zm.reduce_i64(c);
                Coeffs::Residues(v.iter().map(|&x| zm.mul(x, c)).collect())
            }
        };
        TruncatedSeries {
            ring: self.ring,
            coeffs,
        }
    }

    /// Cauchy product truncated at `min(self.trunc, other.trunc)`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let trunc = self.trunc().min(other.trunc());
        // Iterate over the sparser factor's support.
        let (sparse, dense) = if self.support_within(trunc) <= other.support_within(trunc) {
            (self, other)
        } else {
            (other, self)
        };
        let coeffs = match (&sparse.coeffs, &dense.coeffs) {
            (Coeffs::Exact(s), Coeffs::Exact(d)) => {
                let terms = exact_terms(s, trunc, 0);
                Coeffs::Exact(
                    (0..=trunc)
                        .map(|n| {
                            let mut acc = BigInt::zero();
                            for (j, c) in terms.iter().take_while(|(j, _)| *j <= n) {
                                c.accumulate(&mut acc, &d[n - j]);
                            }
                            acc
                        })
                        .collect(),
                )
            }
            (Coeffs::Residues(s), Coeffs::Residues(d)) => {
                let zm = Zm::new(self.ring.modulus().unwrap());
                let terms = residue_terms(s, trunc, 0);
                let budget = zm.lazy_budget();
                Coeffs::Residues((0..=trunc).map(|n| zm.dot(&terms, d, n, budget)).collect())
            }
            _ => unreachable!("ring and storage agree"),
        };
        Ok(TruncatedSeries {
            ring: self.ring,
            coeffs,
        })
    }

    fn support_within(&self, trunc: usize) -> usize {
        match &self.coeffs {
            Coeffs::Exact(v) => v[..=trunc].iter().filter(|c| !c.is_zero()).count(),
            Coeffs::Residues(v) => v[..=trunc].iter().filter(|&&c| c != 0).count(),
        }
    }

    /// `self / divisor`, truncated at the smaller truncation.
    ///
    /// Computed by forward substitution over the divisor's nonzero
    /// coefficients, so dividing by a sparse series is cheap.
    pub fn div(&self, divisor: &Self) -> Result<Self> {
        self.same_ring(divisor)?;
        let trunc = self.trunc().min(divisor.trunc());
        let coeffs = match (&self.coeffs, &divisor.coeffs) {
            (Coeffs::Exact(a), Coeffs::Exact(d)) => {
                let sign = match d[0].to_i64() {
                    Some(1) => 1,
                    Some(-1) => -1,
                    _ => return Err(Error::NonUnitConstantTerm(d[0].to_string(), self.ring)),
                };
                let terms = exact_terms(d, trunc, 1);
                let mut q: Vec<BigInt> = Vec::with_capacity(trunc + 1);
                for n in 0..=trunc {
                    let mut acc = BigInt::zero();
                    for (j, c) in terms.iter().take_while(|(j, _)| *j <= n) {
                        c.accumulate(&mut acc, &q[n - j]);
                    }
                    let mut v = &a[n] - acc;
                    if sign < 0 {
                        v = -v;
                    }
                    q.push(v);
                }
                Coeffs::Exact(q)
            }
            (Coeffs::Residues(a), Coeffs::Residues(d)) => {
                let zm = Zm::new(self.ring.modulus().unwrap());
                let inv0 = zm
                    .inv(d[0])
                    .ok_or_else(|| Error::NonUnitConstantTerm(d[0].to_string(), self.ring))?;
                let terms = residue_terms(d, trunc, 1);
                let budget = zm.lazy_budget();
                let mut q = vec![0u64; trunc + 1];
                for n in 0..=trunc {
                    let acc = zm.dot(&terms, &q, n, budget);
                    let v = zm.sub(a[n], acc);
                    q[n] = if inv0 == 1 { v } else { zm.mul(v, inv0) };
                }
                Coeffs::Residues(q)
            }
            _ => unreachable!("ring and storage agree"),
        };
        Ok(TruncatedSeries {
            ring: self.ring,
            coeffs,
        })
    }

    /// Multiplicative inverse; the constant term must be a unit.
    pub fn invert(&self) -> Result<Self> {
        Self::one(self.ring, self.trunc()).div(self)
    }

    /// `self^e` by repeated squaring; negative `e` inverts first.
    pub fn pow(&self, e: i64) -> Result<Self> {
        let mut base = if e < 0 { self.invert()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc: Option<Self> = None;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base)?,
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc.unwrap_or_else(|| Self::one(self.ring, self.trunc())))
    }

    /// Substitute `q -> q^t`; the result is known up to `q^(t * trunc)`.
    pub fn magnify(&self, t: usize) -> Self {
        assert!(t >= 1, "magnification factor must be positive");
        let len = self.trunc() * t + 1;
        let coeffs = match &self.coeffs {
            Coeffs::Exact(v) => {
                let mut out = vec![BigInt::zero(); len];
                for (n, c) in v.iter().enumerate() {
                    out[n * t] = c.clone();
                }
                Coeffs::Exact(out)
            }
            Coeffs::Residues(v) => {
                let mut out = vec![0; len];
                for (n, &c) in v.iter().enumerate() {
                    out[n * t] = c;
                }
                Coeffs::Residues(out)
            }
        };
        TruncatedSeries {
            ring: self.ring,
            coeffs,
        }
    }

    /// Multiply by `q^d`; the result is known up to `q^(trunc + d)`.
    pub fn shift(&self, d: usize) -> Self {
        let coeffs = match &self.coeffs {
            Coeffs::Exact(v) => {
                let mut out = vec![BigInt::zero(); d];
                out.extend(v.iter().cloned());
                Coeffs::Exact(out)
            }
            Coeffs::Residues(v) => {
                let mut out = vec![0; d];
                out.extend_from_slice(v);
                Coeffs::Residues(out)
            }
        };
        TruncatedSeries {
            ring: self.ring,
            coeffs,
        }
    }

    /// The progression `n -> c(m n + r)`.
    ///
    /// Panics if `m == 0`, `r >= m` or `r > trunc`.
    pub fn extract_ap(&self, m: usize, r: usize) -> Self {
        assert!(m >= 1 && r < m, "need 0 <= r < m");
        assert!(r <= self.trunc(), "residue {r} beyond truncation");
        let count = (self.trunc() - r) / m + 1;
        let coeffs = match &self.coeffs {
            Coeffs::Exact(v) => Coeffs::Exact((0..count).map(|n| v[m * n + r].clone()).collect()),
            Coeffs::Residues(v) => Coeffs::Residues((0..count).map(|n| v[m * n + r]).collect()),
        };
        TruncatedSeries {
            ring: self.ring,
            coeffs,
        }
    }

    /// Reduce coefficients modulo `m`.
    pub fn reduce_mod(&self, m: u64) -> Result<Self> {
        let target = Ring::modulo(m)?;
        match &self.coeffs {
            Coeffs::Exact(v) => {
                let zm = Zm::new(m);
                Ok(Self::from_residues(m, v.iter().map(|c| zm.reduce_big(c)).collect()))
            }
            Coeffs::Residues(v) => {
                if !self.ring.refines(target) {
                    return Err(Error::IncompatibleModulus {
                        from: self.ring,
                        to: m,
                    });
                }
                Ok(Self::from_residues(m, v.iter().map(|&c| c % m).collect()))
            }
        }
    }

    /// Change of ring for a compatible target (no-op when equal).
    pub fn into_ring(self, ring: Ring) -> Result<Self> {
        ring.check()?;
        if self.ring == ring {
            return Ok(self);
        }
        match ring {
            Ring::Mod(m) => self.reduce_mod(m),
            Ring::Integer => Err(Error::RingMismatch(self.ring, ring)),
        }
    }

    /// Sorted `(exponent, coefficient)` pairs of the nonzero terms.
    pub fn support(&self) -> Vec<(usize, BigInt)> {
        match &self.coeffs {
            Coeffs::Exact(v) => v
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(n, c)| (n, c.clone()))
                .collect(),
            Coeffs::Residues(v) => v
                .iter()
                .enumerate()
                .filter(|(_, c)| **c != 0)
                .map(|(n, &c)| (n, BigInt::from(c)))
                .collect(),
        }
    }

    /// First index where `self` and `other` differ, comparing up to the shorter truncation.
    pub fn first_difference(&self, other: &Self) -> Result<Option<usize>> {
        self.same_ring(other)?;
        let len = self.len().min(other.len());
        Ok(match (&self.coeffs, &other.coeffs) {
            (Coeffs::Exact(a), Coeffs::Exact(b)) => (0..len).find(|&i| a[i] != b[i]),
            (Coeffs::Residues(a), Coeffs::Residues(b)) => (0..len).find(|&i| a[i] != b[i]),
            _ => unreachable!("ring and storage agree"),
        })
    }

    /// Largest absolute value of an exact coefficient, in bits. Zero for modular series.
    pub fn max_bits(&self) -> u64 {
        match &self.coeffs {
            Coeffs::Exact(v) => v.iter().map(|c| c.abs().bits()).max().unwrap_or(0),
            Coeffs::Residues(_) => 0,
        }
    }
}

fn exact_terms(v: &[BigInt], trunc: usize, from: usize) -> Vec<(usize, ExactTerm)> {
    v[..=trunc]
        .iter()
        .enumerate()
        .skip(from)
        .filter(|(_, c)| !c.is_zero())
        .map(|(j, c)| (j, ExactTerm::of(c)))
        .collect()
}

fn residue_terms(v: &[u64], trunc: usize, from: usize) -> Vec<(usize, u64)> {
    v[..=trunc]
        .iter()
        .enumerate()
        .skip(from)
        .filter(|(_, &c)| c != 0)
        .map(|(j, &c)| (j, c))
        .collect()
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.support() {
            let (neg, mag) = if c.is_negative() { (true, -c) } else { (false, c) };
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
                (true, false) => {}
            }
            first = false;
            match n {
                0 => write!(f, "{mag}")?,
                _ if mag.is_one() => write!(f, "q^{n}")?,
                _ => write!(f, "{mag}q^{n}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.trunc() + 1)
    }
}
