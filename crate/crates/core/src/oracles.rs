//! Brute-force partition counts, used as ground truth for the series engine.
//!
//! Everything here works on exact integers with plain dynamic programs and
//! never touches [`crate::series`], so agreement between the two is evidence
//! rather than tautology.

use std::io::Write;

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleKind {
    LRegular { ell: u64 },
    TupleLRegular { ell: u64, k: u32 },
    Ped,
    Partition,
    DistinctParts,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleTable {
    pub kind: OracleKind,
    pub values: Vec<BigInt>,
}

impl OracleTable {
    pub fn get(&self, n: usize) -> &BigInt {
        &self.values[n]
    }

    pub fn nmax(&self) -> usize {
        self.values.len() - 1
    }

    /// CSV with header `n,value`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["n", "value"])?;
        for (n, v) in self.values.iter().enumerate() {
            w.write_record([n.to_string(), v.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Unbounded-multiplicity parts from `parts`, counted for `0..=nmax`.
fn unrestricted(parts: impl Iterator<Item = usize>, nmax: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); nmax + 1];
    v[0] = BigInt::one();
    for part in parts {
        for n in part..=nmax {
            let prev = v[n - part].clone();
            v[n] += prev;
        }
    }
    v
}

/// Partitions of `n` with no part divisible by `ell`.
pub fn count_lregular(ell: u64, nmax: usize) -> OracleTable {
    assert!(ell >= 2, "ell must be at least 2");
    OracleTable {
        kind: OracleKind::LRegular { ell },
        values: unrestricted((1..=nmax).filter(|i| i % ell as usize != 0), nmax),
    }
}

/// Ordered k-tuples of ell-regular partitions with total size `n`.
pub fn count_tuple(ell: u64, k: u32, nmax: usize) -> OracleTable {
    assert!(k >= 1, "k must be at least 1");
    let base = count_lregular(ell, nmax).values;
    let mut acc = base.clone();
    for _ in 1..k {
        acc = (0..=nmax)
            .map(|n| (0..=n).map(|j| &acc[j] * &base[n - j]).sum())
            .collect();
    }
    OracleTable {
        kind: OracleKind::TupleLRegular { ell, k },
        values: acc,
    }
}

/// Partitions whose even parts are distinct (odd parts unrestricted).
pub fn ped_count(nmax: usize) -> OracleTable {
    let mut v = unrestricted((1..=nmax).step_by(2), nmax);
    for part in (2..=nmax).step_by(2) {
        for n in (part..=nmax).rev() {
            let prev = v[n - part].clone();
            v[n] += prev;
        }
    }
    OracleTable {
        kind: OracleKind::Ped,
        values: v,
    }
}

pub fn partition_count(nmax: usize) -> OracleTable {
    OracleTable {
        kind: OracleKind::Partition,
        values: unrestricted(1..=nmax, nmax),
    }
}

pub fn distinct_parts_count(nmax: usize) -> OracleTable {
    let mut v = vec![BigInt::zero(); nmax + 1];
    v[0] = BigInt::one();
    for part in 1..=nmax {
        for n in (part..=nmax).rev() {
            let prev = v[n - part].clone();
            v[n] += prev;
        }
    }
    OracleTable {
        kind: OracleKind::DistinctParts,
        values: v,
    }
}

/// `Some(m)` with `m (m + 1) / 2 = n` when `n` is triangular.
pub fn is_triangular(n: u64) -> Option<u64> {
    let disc = 8 * n as u128 + 1;
    let r = disc.sqrt();
    (r * r == disc).then(|| ((r - 1) / 2) as u64)
}

/// Whether `n = x^2 + 2 y^2` for some integers `x, y`.
pub fn repr_x2_2y2(n: u64) -> bool {
    let ymax = (n / 2).sqrt();
    (0..=ymax).any(|y| {
        let rest = n - 2 * y * y;
        let x = rest.sqrt();
        x * x == rest
    })
}

/// Whether `n = x^2 + 2 y^2` with `x ≡ ±1` and `y ≡ ±1 (mod 6)`.
pub fn repr_x2_2y2_restricted(n: u64) -> bool {
    let unit6 = |v: u64| v % 6 == 1 || v % 6 == 5;
    let ymax = (n / 2).sqrt();
    (1..=ymax).filter(|&y| unit6(y)).any(|y| {
        let rest = n - 2 * y * y;
        let x = rest.sqrt();
        x * x == rest && unit6(x)
    })
}

/// Exponent of the prime `p` in `n`.
pub fn nu_p(p: u64, n: u64) -> Result<u32> {
    if n == 0 {
        return Err(Error::Domain("nu_p(0) is undefined".into()));
    }
    if p < 2 {
        return Err(Error::Domain(format!("{p} is not a prime")));
    }
    let (mut n, mut e) = (n, 0);
    while n % p == 0 {
        n /= p;
        e += 1;
    }
    Ok(e)
}

/// Table for a CLI oracle name: `partition`, `ped`, `distinct`, `lregular` or `tuple`.
pub fn table_by_name(name: &str, ell: u64, k: u32, nmax: usize) -> Result<OracleTable> {
    match name {
        "partition" | "p" => Ok(partition_count(nmax)),
        "ped" => Ok(ped_count(nmax)),
        "distinct" => Ok(distinct_parts_count(nmax)),
        "lregular" | "b" => Ok(count_lregular(ell, nmax)),
        "tuple" | "T" => Ok(count_tuple(ell, k, nmax)),
        other => Err(Error::UnknownSelection(other.to_string())),
    }
}
