//! Exact counts of nested canalyzing functions.
//!
//! `RNCF(n)` counts the NCFs that factor as a product of at least two NCFs,
//! `INCF(n) = (p-1) RNCF(n)` the rest, and `NCF(n) = p RNCF(n)`.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{NcfError, Result};
use crate::field::is_prime;

fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(NcfError::NotPrime(p))
    }
}

fn big(v: u64) -> BigUint {
    BigUint::from(v)
}

fn pow(base: u64, e: usize) -> BigUint {
    num_traits::pow(big(base), e)
}

/// Binomial coefficient as a big integer.
pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigUint::one(), |acc, i| acc * big((n - i) as u64) / big((i + 1) as u64))
}

/// Bottom-up table of `RNCF(1..=n)` for a fixed prime.
#[derive(Debug, Clone)]
pub struct RncfTable {
    p: u64,
    values: Vec<BigUint>,
}

impl RncfTable {
    pub fn new(p: u64) -> Result<Self> {
        check_prime(p)?;
        Ok(Self { p, values: Vec::new() })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// `RNCF(n)`, extending the table as needed.
    pub fn get(&mut self, n: usize) -> Result<&BigUint> {
        if n == 0 {
            return Err(NcfError::BadArity(0));
        }
        let p = self.p;
        while self.values.len() < n {
            let m = self.values.len() + 1;
            let next = match m {
                1 => pow(p - 1, 2),
                2 => big(4) * pow(p - 1, 4),
                _ => {
                    let mut acc = rncf_nn_unchecked(p, m);
                    for r in 2..m {
                        acc += binomial(m, r - 1) * pow(2, r - 1) * pow(p - 1, r) * &self.values[m - r];
                    }
                    acc
                }
            };
            self.values.push(next);
        }
        Ok(&self.values[n - 1])
    }
}

/// Number of reducible NCFs in `n` variables.
pub fn rncf(p: u64, n: usize) -> Result<BigUint> {
    RncfTable::new(p)?.get(n).cloned()
}

/// Number of NCFs in `n` variables: `p RNCF(n)`.
pub fn ncf_count(p: u64, n: usize) -> Result<BigUint> {
    Ok(big(p) * rncf(p, n)?)
}

/// Number of irreducible NCFs: `(p-1) RNCF(n)`.
pub fn incf(p: u64, n: usize) -> Result<BigUint> {
    Ok(big(p - 1) * rncf(p, n)?)
}

fn rncf_nn_unchecked(p: u64, n: usize) -> BigUint {
    // 2 + n(p-2) is nonnegative for every prime
    pow(2, n - 1) * pow(p - 1, n + 1) * (big(2) + big(n as u64) * big(p - 2))
}

/// NCFs that factor into exactly `n` NCFs: `2^(n-1) (p-1)^(n+1) (2 + n(p-2))`, for `n >= 3`.
pub fn rncf_nn(p: u64, n: usize) -> Result<BigUint> {
    check_prime(p)?;
    if n < 3 {
        return Err(NcfError::BadArity(n));
    }
    Ok(rncf_nn_unchecked(p, n))
}

/// NCFs that factor into exactly `n - r` NCFs, `1 <= r <= n-2`:
/// `C(n, r+1) 2^(n-r-1) (p-1)^(n-r-1) INCF(r+1)`.
pub fn rncf_by_factors(p: u64, n: usize, r: usize) -> Result<BigUint> {
    check_prime(p)?;
    if n < 3 || r == 0 || r > n - 2 {
        return Err(NcfError::BadArity(n));
    }
    Ok(binomial(n, r + 1) * pow(2, n - r - 1) * pow(p - 1, n - r - 1) * incf(p, r + 1)?)
}

/// Sasao-Kinoshita count of Boolean unate cascade functions, computed by its
/// own recursion from `E(1) = 2`, `E(2) = 4`.
pub fn boolean_e(n: usize) -> Result<BigUint> {
    if n == 0 {
        return Err(NcfError::BadArity(0));
    }
    let mut e: Vec<BigUint> = vec![big(2), big(4)];
    for m in 3..=n {
        let mut acc = pow(2, m);
        for r in 2..m {
            acc += binomial(m, r - 1) * pow(2, r - 1) * &e[m - r];
        }
        e.push(acc);
    }
    Ok(e.swap_remove(n - 1))
}

/// `log_b(x)` for a positive big integer, accurate far beyond `f64` range.
pub fn log_base(x: &BigUint, base: f64) -> f64 {
    let bits = x.bits();
    let ln = if bits <= 1000 {
        x.to_f64().expect("fits in f64").ln()
    } else {
        let shift = bits - 64;
        let top = (x >> shift).to_f64().expect("64-bit head");
        top.ln() + shift as f64 * std::f64::consts::LN_2
    };
    ln / base.ln()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsRow {
    pub n: usize,
    #[serde(serialize_with = "as_decimal")]
    pub rncf: BigUint,
    #[serde(serialize_with = "as_decimal")]
    pub rncf_nn: BigUint,
    /// `2^(n(n-1)) (p-1)^(2n)`.
    #[serde(serialize_with = "as_decimal")]
    pub rncf_bound: BigUint,
    /// `2^(2n) (p-1)^(n+2)`.
    #[serde(serialize_with = "as_decimal")]
    pub rncf_nn_bound: BigUint,
    /// Every `2^(r-1) (p-1)^r RNCF(n-r+1) <= RNCF(n)` for `2 <= r <= n-1`.
    pub single_term_bound_holds: bool,
    pub rncf_nn_bound_holds: bool,
    pub rncf_bound_holds: bool,
    /// `log_p NCF(n) - p^n`; diagnostic only.
    pub log_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsReport {
    pub p: u64,
    pub rows: Vec<BoundsRow>,
    /// The log-ratio column decreases strictly with `n`.
    pub log_ratio_decreasing: bool,
}

impl BoundsReport {
    pub fn all_bounds_hold(&self) -> bool {
        self.rows
            .iter()
            .all(|r| r.single_term_bound_holds && r.rncf_nn_bound_holds && r.rncf_bound_holds)
    }
}

fn as_decimal<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// Checks the upper bounds exactly for `3 <= n <= n_max`.
pub fn bounds_report(p: u64, n_max: usize) -> Result<BoundsReport> {
    if n_max < 3 {
        return Err(NcfError::BadArity(n_max));
    }
    let mut table = RncfTable::new(p)?;
    table.get(n_max)?;
    let mut rows = Vec::with_capacity(n_max - 2);
    for n in 3..=n_max {
        let value = table.get(n)?.clone();
        let single_term_bound_holds = (2..n).all(|r| {
            let term = pow(2, r - 1) * pow(p - 1, r) * &table.values[n - r];
            term <= value
        });
        let nn = rncf_nn_unchecked(p, n);
        let nn_bound = pow(2, 2 * n) * pow(p - 1, n + 2);
        let bound = pow(2, n * (n - 1)) * pow(p - 1, 2 * n);
        let ncf = big(p) * &value;
        let log_ratio = log_base(&ncf, p as f64) - (p as f64).powi(n as i32);
        rows.push(BoundsRow {
            n,
            rncf_nn_bound_holds: nn <= nn_bound,
            rncf_bound_holds: value <= bound,
            rncf: value,
            rncf_nn: nn,
            rncf_bound: bound,
            rncf_nn_bound: nn_bound,
            single_term_bound_holds,
            log_ratio,
        });
    }
    let log_ratio_decreasing = rows.windows(2).all(|w| w[1].log_ratio < w[0].log_ratio);
    Ok(BoundsReport {
        p,
        rows,
        log_ratio_decreasing,
    })
}
