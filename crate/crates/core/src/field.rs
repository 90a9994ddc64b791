//! Arithmetic in the prime field F_p under the canonical order `0 < 1 < ... < p-1`,
//! and the catalog of admissible canalyzing input sets.
//!
//! Elements are plain `u8` values in canonical form. Every value passed to a
//! [`PrimeField`] method must already be reduced; the methods do not re-check
//! this on the hot path.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{NcfError, Result};

/// Largest prime accepted for table-based work (elements are stored as bytes).
pub const MAX_TABLE_PRIME: u64 = 97;

/// Trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// The field F_p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct PrimeField {
    p: u8,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(NcfError::NotPrime(p));
        }
        if p > MAX_TABLE_PRIME {
            return Err(NcfError::FieldTooLarge(p));
        }
        Ok(Self { p: p as u8 })
    }

    #[inline]
    pub fn p(&self) -> u8 {
        self.p
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.p as usize
    }

    /// Iterates the elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = u8> + Clone {
        0..self.p
    }

    /// Reduces an arbitrary integer to its canonical representative.
    #[inline]
    pub fn reduce(&self, v: i64) -> u8 {
        v.rem_euclid(self.p as i64) as u8
    }

    /// Validates that `v` is a canonical element.
    pub fn element(&self, v: u64) -> Result<u8> {
        if v < self.p as u64 {
            Ok(v as u8)
        } else {
            Err(NcfError::ElementOutOfRange { value: v, p: self.p })
        }
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        ((a as u16 + b as u16) % self.p as u16) as u8
    }

    #[inline]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        ((a as u16 + self.p as u16 - b as u16) % self.p as u16) as u8
    }

    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        self.sub(0, a)
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        ((a as u16 * b as u16) % self.p as u16) as u8
    }

    /// `a^e` with the convention `0^0 = 1`.
    pub fn pow(&self, a: u8, mut e: u64) -> u8 {
        let mut base = a;
        let mut acc = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via Fermat's little theorem.
    pub fn inv(&self, a: u8) -> Result<u8> {
        if a == 0 {
            return Err(NcfError::ZeroInverse);
        }
        Ok(self.pow(a, self.p as u64 - 2))
    }

    /// Embeds a nonnegative integer (e.g. a set cardinality) into the field.
    #[inline]
    pub fn from_usize(&self, v: usize) -> u8 {
        (v % self.p as usize) as u8
    }

    /// All `2(p-1)` admissible canalyzing input sets: prefixes by ascending
    /// threshold, then suffixes by ascending threshold.
    pub fn interval_sets(&self) -> Vec<IntervalSet> {
        let p = self.p;
        (0..p - 1)
            .map(IntervalSet::Prefix)
            .chain((1..p).map(IntervalSet::Suffix))
            .collect()
    }
}

impl TryFrom<u64> for PrimeField {
    type Error = NcfError;

    fn try_from(p: u64) -> Result<Self> {
        Self::new(p)
    }
}

impl From<PrimeField> for u64 {
    fn from(f: PrimeField) -> u64 {
        f.p as u64
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

/// A proper nonempty subinterval of F_p whose complement is also an interval.
///
/// `Prefix(t)` is `{0..=t}` and `Suffix(t)` is `{t..=p-1}`; thresholds are
/// inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IntervalSet {
    Prefix(u8),
    Suffix(u8),
}

impl IntervalSet {
    pub fn new_prefix(t: u8, field: PrimeField) -> Result<Self> {
        let s = IntervalSet::Prefix(t);
        s.validate(field)?;
        Ok(s)
    }

    pub fn new_suffix(t: u8, field: PrimeField) -> Result<Self> {
        let s = IntervalSet::Suffix(t);
        s.validate(field)?;
        Ok(s)
    }

    pub fn validate(&self, field: PrimeField) -> Result<()> {
        let p = field.p();
        let ok = match *self {
            IntervalSet::Prefix(t) => t + 2 <= p,
            IntervalSet::Suffix(t) => t >= 1 && t < p,
        };
        if ok {
            Ok(())
        } else {
            Err(NcfError::InvalidIntervalSet(format!("{self} is not proper in {field}")))
        }
    }

    #[inline]
    pub fn contains(&self, x: u8) -> bool {
        match *self {
            IntervalSet::Prefix(t) => x <= t,
            IntervalSet::Suffix(t) => x >= t,
        }
    }

    pub fn complement(&self, field: PrimeField) -> IntervalSet {
        match *self {
            IntervalSet::Prefix(t) => IntervalSet::Suffix(t + 1),
            IntervalSet::Suffix(t) => {
                debug_assert!(t >= 1 && t < field.p());
                IntervalSet::Prefix(t - 1)
            }
        }
    }

    /// Number of elements in the set.
    pub fn len(&self, field: PrimeField) -> usize {
        match *self {
            IntervalSet::Prefix(t) => t as usize + 1,
            IntervalSet::Suffix(t) => field.order() - t as usize,
        }
    }

    /// Explicit members in ascending order.
    pub fn members(&self, field: PrimeField) -> Vec<u8> {
        field.elements().filter(|&x| self.contains(x)).collect()
    }

    /// Members of the complement in ascending order.
    pub fn complement_members(&self, field: PrimeField) -> Vec<u8> {
        field.elements().filter(|&x| !self.contains(x)).collect()
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IntervalSet::Prefix(t) => write!(f, "P{t}"),
            IntervalSet::Suffix(t) => write!(f, "S{t}"),
        }
    }
}

impl FromStr for IntervalSet {
    type Err = NcfError;

    /// Parses `P<t>` or `S<t>`. Field-dependent validity is checked separately.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || NcfError::InvalidIntervalSet(format!("cannot parse {s:?}; expected P<t> or S<t>"));
        let (kind, rest) = s.split_at_checked(1).ok_or_else(bad)?;
        let t: u8 = rest.parse().map_err(|_| bad())?;
        match kind {
            "P" | "p" => Ok(IntervalSet::Prefix(t)),
            "S" | "s" => Ok(IntervalSet::Suffix(t)),
            _ => Err(bad()),
        }
    }
}

impl Serialize for IntervalSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for IntervalSet {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn construction_rejects_composites() {
        assert_eq!(PrimeField::new(4), Err(NcfError::NotPrime(4)));
        assert_eq!(PrimeField::new(1), Err(NcfError::NotPrime(1)));
        assert_eq!(PrimeField::new(0), Err(NcfError::NotPrime(0)));
        assert_eq!(PrimeField::new(101), Err(NcfError::FieldTooLarge(101)));
        assert!(PrimeField::new(97).is_ok());
    }

    #[test]
    fn add_examples() {
        assert_eq!(f(5).add(0, 3), 3);
        assert_eq!(f(3).add(2, 2), 1);
        assert_eq!(f(5).add(4, 4), 3);
    }

    #[test]
    fn inv_examples() {
        assert_eq!(f(7).inv(1), Ok(1));
        assert_eq!(f(5).inv(2), Ok(3));
        assert_eq!(f(7).inv(4), Ok(2));
        assert_eq!(f(7).inv(0), Err(NcfError::ZeroInverse));
    }

    #[test]
    fn inverse_property() {
        for p in [2u64, 3, 5, 7, 11, 13, 97] {
            let fp = f(p);
            for a in 1..fp.p() {
                assert_eq!(fp.mul(a, fp.inv(a).unwrap()), 1, "p={p} a={a}");
            }
        }
    }

    #[test]
    fn interval_sets_small_fields() {
        let sets: Vec<Vec<u8>> = f(2).interval_sets().iter().map(|s| s.members(f(2))).collect();
        assert_eq!(sets, vec![vec![0], vec![1]]);

        let sets: Vec<Vec<u8>> = f(3).interval_sets().iter().map(|s| s.members(f(3))).collect();
        assert_eq!(sets, vec![vec![0], vec![0, 1], vec![1, 2], vec![2]]);
        assert_eq!(
            f(3).interval_sets(),
            vec![
                IntervalSet::Prefix(0),
                IntervalSet::Prefix(1),
                IntervalSet::Suffix(1),
                IntervalSet::Suffix(2)
            ]
        );

        assert_eq!(f(5).interval_sets().len(), 8);
    }

    /// Brute force: every subset of F_p that is a proper nonempty interval with
    /// an interval complement appears exactly once in the catalog.
    #[test]
    fn interval_sets_match_subset_enumeration() {
        for p in [2u64, 3, 5, 7] {
            let fp = f(p);
            let is_interval = |m: u32| {
                let xs: Vec<u32> = (0..p as u32).filter(|x| m >> x & 1 == 1).collect();
                xs.windows(2).all(|w| w[1] == w[0] + 1)
            };
            let full = (1u32 << p) - 1;
            let mut expected: Vec<u32> = (1..full)
                .filter(|&m| is_interval(m) && is_interval(full & !m))
                .collect();
            expected.sort();
            let mut got: Vec<u32> = fp
                .interval_sets()
                .iter()
                .map(|s| s.members(fp).iter().fold(0u32, |m, &x| m | 1 << x))
                .collect();
            got.sort();
            assert_eq!(got, expected, "p={p}");
            assert_eq!(got.len(), 2 * (p as usize - 1));
        }
    }

    #[test]
    fn complement_examples() {
        assert_eq!(IntervalSet::Prefix(0).complement(f(3)), IntervalSet::Suffix(1));
        assert_eq!(IntervalSet::Suffix(4).complement(f(5)), IntervalSet::Prefix(3));
        assert_eq!(IntervalSet::Prefix(1).complement(f(5)), IntervalSet::Suffix(2));
    }

    #[test]
    fn complement_permutes_catalog() {
        for p in [2u64, 3, 5, 7, 11] {
            let fp = f(p);
            let sets = fp.interval_sets();
            let mut images: Vec<IntervalSet> = sets.iter().map(|s| s.complement(fp)).collect();
            for (s, c) in sets.iter().zip(&images) {
                assert_eq!(c.complement(fp), *s);
                assert_eq!(c.members(fp), s.complement_members(fp));
                c.validate(fp).unwrap();
            }
            images.sort();
            let mut sorted = sets.clone();
            sorted.sort();
            assert_eq!(images, sorted);
        }
    }

    #[test]
    fn text_form() {
        assert_eq!("P1".parse::<IntervalSet>().unwrap(), IntervalSet::Prefix(1));
        assert_eq!("S2".parse::<IntervalSet>().unwrap(), IntervalSet::Suffix(2));
        assert!("Q2".parse::<IntervalSet>().is_err());
        assert!("P".parse::<IntervalSet>().is_err());
        assert!(IntervalSet::Prefix(2).validate(f(3)).is_err());
        assert!(IntervalSet::Suffix(0).validate(f(3)).is_err());
        assert_eq!(IntervalSet::Suffix(3).to_string(), "S3");
    }
}
