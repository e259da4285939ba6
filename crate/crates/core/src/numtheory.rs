//! Quadratic symbols, Ramanujan's τ, Hecke operators and Newman's recurrence.

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::Ratio;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::etaq::{expand_fquotient, FQuotient};
use crate::report::{Counterexample, VerificationReport};
use crate::series::{Ring, TruncatedSeries};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Primes in `lo..=hi`.
pub fn primes_between(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|&n| is_prime(n)).collect()
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc as u128 * b as u128 % m as u128) as u64;
        }
        b = (b as u128 * b as u128 % m as u128) as u64;
        e >>= 1;
    }
    acc
}

/// Legendre symbol `(a / p)` for an odd prime `p`, by Euler's criterion.
pub fn legendre(a: i64, p: u64) -> Result<i8> {
    if p == 2 || !is_prime(p) {
        return Err(Error::Domain(format!("{p} is not an odd prime")));
    }
    let r = a.rem_euclid(p as i64) as u64;
    Ok(match pow_mod(r, (p - 1) / 2, p) {
        0 => 0,
        1 => 1,
        _ => -1,
    })
}

/// Kronecker symbol `(a / n)` for arbitrary integers.
pub fn kronecker(a: i64, n: i64) -> i8 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut a = a as i128;
    let mut n = n as i128;
    let mut result: i8 = 1;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -result;
        }
    }
    let twos = n.trailing_zeros();
    if twos > 0 {
        if a % 2 == 0 {
            return 0;
        }
        if twos % 2 == 1 && matches!(a.rem_euclid(8), 3 | 5) {
            result = -result;
        }
        n >>= twos;
    }
    // Jacobi symbol (a / n) for odd positive n.
    a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// Largest `n` for which [`tau_exact`] agrees to run.
pub const TAU_LIMIT: usize = 5000;

/// `τ(0..=nmax)` with `τ(0) = 0`, from `Δ = q f_1^24`.
pub fn tau_exact(nmax: usize) -> Result<Vec<BigInt>> {
    if nmax > TAU_LIMIT {
        return Err(Error::CostLimit(format!(
            "tau_exact is limited to n <= {TAU_LIMIT}, asked for {nmax}"
        )));
    }
    let delta = discriminant_series(nmax, Ring::Integer)?;
    Ok(delta.to_bigints())
}

/// `Δ = q f_1^24` to `q^trunc`.
pub fn discriminant_series(trunc: usize, ring: Ring) -> Result<TruncatedSeries> {
    if trunc == 0 {
        return Ok(TruncatedSeries::zero(ring, 0));
    }
    Ok(expand_fquotient(&FQuotient::f(1).with(1, 23), trunc - 1, ring)?.shift(1))
}

/// `τ(n) mod 2`: odd exactly when `n` is an odd square.
pub fn tau_mod2(n: u64) -> u8 {
    let r = n.sqrt();
    u8::from(n % 2 == 1 && r * r == n)
}

/// Dirichlet character `d -> (D / d)`, zero on `d` sharing a factor with the level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterSpec {
    /// `1` for the trivial character.
    pub discriminant: i64,
    pub level: u64,
}

impl CharacterSpec {
    pub fn trivial(level: u64) -> Self {
        CharacterSpec {
            discriminant: 1,
            level,
        }
    }

    pub fn kronecker(discriminant: i64, level: u64) -> Self {
        CharacterSpec { discriminant, level }
    }

    pub fn is_trivial(&self) -> bool {
        self.discriminant == 1
    }

    pub fn eval(&self, d: i64) -> i8 {
        if d.unsigned_abs().gcd(&self.level) != 1 {
            return 0;
        }
        kronecker(self.discriminant, d)
    }
}

/// `a(n) -> a(p n) + χ(p) p^(k-1) a(n / p)`; the result is known to `q^(trunc / p)`.
pub fn hecke_tp(series: &TruncatedSeries, p: u64, weight: u32, chi: &CharacterSpec) -> TruncatedSeries {
    let p = p as usize;
    let out_trunc = series.trunc() / p;
    let factor = BigInt::from(chi.eval(p as i64)) * BigInt::from(p).pow(weight.saturating_sub(1));
    let values = (0..=out_trunc)
        .map(|n| {
            let mut v = series.coeff((p * n) as i64);
            if n % p == 0 && !factor.is_zero() {
                v += &factor * series.coeff((n / p) as i64);
            }
            v
        })
        .collect();
    TruncatedSeries::from_bigints(series.ring(), values)
}

/// Parameters of Newman's recurrence for `prod (1 - x^n)^r (1 - x^(n q))^s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewmanParams {
    pub r: i64,
    pub s: i64,
    pub qprime: u64,
    pub p: u64,
}

impl NewmanParams {
    /// The setting of `f_3^6 / f_1` at the prime `p`.
    pub fn f3_6_over_f1(p: u64) -> Self {
        NewmanParams {
            r: -1,
            s: 6,
            qprime: 3,
            p,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.r == 0 || self.s == 0 || (self.r - self.s) % 2 == 0 {
            return Err(Error::Domain("need r, s nonzero with r, s of opposite parity".into()));
        }
        if !is_prime(self.qprime) || !is_prime(self.p) || self.qprime == self.p {
            return Err(Error::Domain("need distinct primes p and q".into()));
        }
        if self.r + self.s < 3 {
            return Err(Error::Domain("need r + s >= 3 for integral powers of p".into()));
        }
        if self.p < 5 {
            return Err(Error::Domain("need p >= 5".into()));
        }
        self.delta().map(|_| ())
    }

    /// `t = (r + s q) / 24`.
    pub fn t(&self) -> Ratio<i64> {
        Ratio::new(self.r + self.s * self.qprime as i64, 24)
    }

    /// `Δ = t (p^2 - 1)`, which must be an integer.
    pub fn delta(&self) -> Result<i64> {
        let p = self.p as i64;
        let d = self.t() * Ratio::from_integer(p * p - 1);
        if d.is_integer() && d >= Ratio::zero() {
            Ok(d.to_integer())
        } else {
            Err(Error::Domain(format!("Δ = {d} is not a nonnegative integer")))
        }
    }

    /// `θ = (-1)^(1/2 - ε) 2 q^s` with `ε = (r + s) / 2`; the sign exponent `(1 - r - s) / 2` is an integer.
    pub fn theta(&self) -> BigInt {
        let e = (1 - self.r - self.s) / 2;
        let sign = if e.rem_euclid(2) == 0 { 1 } else { -1 };
        BigInt::from(sign * 2) * BigInt::from(self.qprime).pow(self.s.unsigned_abs() as u32)
    }

    /// `(θ / p)`.
    pub fn theta_symbol(&self) -> Result<i8> {
        let m = BigInt::from(self.p);
        let r = ((self.theta() % &m) + &m) % &m;
        legendre(i64::try_from(r).unwrap(), self.p)
    }

    /// `p^(2ε - 2)`.
    pub fn outer_power(&self) -> BigInt {
        BigInt::from(self.p).pow((self.r + self.s - 2) as u32)
    }

    /// `p^(ε - 3/2)`.
    pub fn inner_power(&self) -> BigInt {
        BigInt::from(self.p).pow(((self.r + self.s - 3) / 2) as u32)
    }

    /// `prod (1 - x^n)^r (1 - x^(n q))^s` exactly, to `x^trunc`.
    pub fn phi_series(&self, trunc: usize) -> Result<TruncatedSeries> {
        expand_fquotient(
            &FQuotient::from_factors(1, [(1, self.r), (self.qprime, self.s)]),
            trunc,
            Ring::Integer,
        )
    }
}

/// `a(Δ) + p^(ε-3/2) (θ/p) (-Δ/p)`, the value `γ(0) + p^(ε-3/2)(θ/p)(-Δ/p)` that Newman writes `p^(2ε-2) α`.
pub fn omega_general(params: &NewmanParams, aseries: &TruncatedSeries) -> Result<BigInt> {
    params.validate()?;
    let delta = params.delta()?;
    if aseries.trunc() < delta as usize {
        return Err(Error::TruncationTooSmall {
            needed: delta as usize,
            available: aseries.trunc(),
        });
    }
    let sym = i64::from(params.theta_symbol()?) * i64::from(legendre(-delta, params.p)?);
    Ok(aseries.coeff(delta) + params.inner_power() * sym)
}

/// `ω(p) = a(17 (p^2 - 1) / 24) + p (2/p) (-17 (p^2 - 1) / 24 / p)` for `a` the coefficients of `f_3^6 / f_1`.
pub fn omega(p: u64, aseries: &TruncatedSeries) -> Result<BigInt> {
    omega_general(&NewmanParams::f3_6_over_f1(p), aseries)
}

/// Check `a(p^2 n + Δ) = (ω - p^(ε-3/2)(θ/p)((n-Δ)/p)) a(n) - p^(2ε-2) a((n-Δ)/p^2)` for `n <= nmax`.
pub fn newman_verify(params: &NewmanParams, phiseries: &TruncatedSeries, nmax: u64) -> Result<VerificationReport> {
    params.validate()?;
    let p = params.p as i64;
    let delta = params.delta()?;
    let needed = (p * p) as usize * nmax as usize + delta as usize;
    if phiseries.trunc() < needed {
        return Err(Error::TruncationTooSmall {
            needed,
            available: phiseries.trunc(),
        });
    }
    let w = omega_general(params, phiseries)?;
    let theta = i64::from(params.theta_symbol()?);
    let inner = params.inner_power();
    let outer = params.outer_power();
    let mut failure = None;
    for n in 0..=nmax as i64 {
        let lhs = phiseries.coeff(p * p * n + delta);
        let gamma = &w - &inner * (theta * i64::from(legendre(n - delta, params.p)?));
        let m = n - delta;
        let tail = if m >= 0 && m % (p * p) == 0 {
            phiseries.coeff(m / (p * p))
        } else {
            BigInt::zero()
        };
        let rhs = gamma * phiseries.coeff(n) - &outer * tail;
        if lhs != rhs {
            failure = Some(Counterexample {
                n: n as u64,
                value: lhs.to_string(),
                expected: rhs.to_string(),
            });
            break;
        }
    }
    Ok(VerificationReport::from_outcome(
        format!("newman[r={},s={},q={},p={}]", params.r, params.s, params.qprime, params.p),
        nmax,
        nmax + 1,
        phiseries.trunc(),
        failure,
    )
    .with_note(format!("omega = {w}, delta = {delta}")))
}

/// Whether `p^3` divides `ω(p)`, i.e. whether Newman's constant `α = ω(p)/p^3` is an integer.
pub fn omega_divisible_by_p_cubed(p: u64, aseries: &TruncatedSeries) -> Result<bool> {
    let w = omega(p, aseries)?;
    Ok((w % BigInt::from(p).pow(3)).is_zero())
}

/// Exact `α = ω(p) / p^(2ε-2)` as a rational.
pub fn newman_alpha(params: &NewmanParams, aseries: &TruncatedSeries) -> Result<Ratio<BigInt>> {
    Ok(Ratio::new(omega_general(params, aseries)?, params.outer_power()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre(3, 7), Ok(-1));
        assert_eq!(legendre(14, 7), Ok(0));
        assert_eq!(legendre(4, 5), Ok(1));
        assert!(legendre(1, 2).is_err());
        assert!(legendre(1, 9).is_err());
    }

    #[test]
    fn kronecker_examples() {
        assert_eq!(kronecker(5, 1), 1);
        assert_eq!(kronecker(2, 7), 1);
        assert_eq!(kronecker(-1, 13), 1);
        assert_eq!(kronecker(-4, 3), -1);
        assert_eq!(kronecker(-4, 2), 0);
        assert_eq!(kronecker(5, 2), -1);
        assert_eq!(kronecker(3, -1), 1);
        assert_eq!(kronecker(-3, -1), -1);
        for p in [3u64, 5, 7, 11, 13, 101] {
            for a in -30i64..30 {
                assert_eq!(kronecker(a, p as i64), legendre(a, p).unwrap());
            }
        }
    }

    #[test]
    fn tau_values() {
        let t = tau_exact(12).unwrap();
        let expect = [0i64, 1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920, 534612, -370944];
        assert_eq!(t, expect.iter().map(|&v| BigInt::from(v)).collect::<Vec<_>>());
        assert!(matches!(tau_exact(5001), Err(Error::CostLimit(_))));
        assert_eq!(tau_mod2(9), 1);
        assert_eq!(tau_mod2(7), 0);
        assert_eq!(tau_mod2(4), 0);
    }

    #[test]
    fn hecke_on_discriminant() {
        let d = discriminant_series(200, Ring::Integer).unwrap();
        let chi = CharacterSpec::trivial(1);
        for p in [2u64, 3, 5] {
            let tp = hecke_tp(&d, p, 12, &chi);
            let tau_p = d.coeff(p as i64);
            let scaled: Vec<BigInt> = d.truncate(tp.trunc()).to_bigints().into_iter().map(|c| c * &tau_p).collect();
            assert_eq!(tp.to_bigints(), scaled);
        }
        let z = TruncatedSeries::zero(Ring::Integer, 30);
        assert!(hecke_tp(&z, 3, 12, &chi).is_zero());
    }

    #[test]
    fn newman_small() {
        let params = NewmanParams::f3_6_over_f1(5);
        assert_eq!(params.delta(), Ok(17));
        assert_eq!(params.theta(), BigInt::from(2 * 729));
        assert_eq!(params.theta_symbol(), legendre(2, 5));
        let a = params.phi_series(25 * 40 + 17).unwrap();
        assert_eq!(a.coeff(17).clone() % 2, BigInt::one());
        assert_eq!(omega(5, &a).unwrap(), BigInt::from(6));
        assert!(newman_verify(&params, &a, 40).unwrap().passed());
        assert!(matches!(newman_verify(&params, &a, 41), Err(Error::TruncationTooSmall { .. })));
    }
}
