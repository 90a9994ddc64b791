//! Brute-force ground truth: sweep every descriptor and deduplicate the
//! resulting truth tables, or scan every function with the detector.

use std::collections::HashSet;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{NcfError, Result};
use crate::field::{IntervalSet, PrimeField};
use crate::functions::{table_size, Points, TruthTable};
use crate::ncf::{detect, NcfDescriptor};

pub const DEFAULT_DESCRIPTOR_BUDGET: u64 = 10_000_000;
pub const DEFAULT_FUNCTION_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationResult {
    pub p: u64,
    pub n: usize,
    pub descriptor_count: BigUint,
    pub distinct_function_count: BigUint,
    /// Distinct tables sorted by value vector, when requested.
    pub tables: Option<Vec<TruthTable>>,
}

#[derive(Serialize)]
struct EnumerationSummary {
    p: u64,
    n: usize,
    descriptors: String,
    distinct: String,
}

impl EnumerationResult {
    pub fn summary_json(&self) -> serde_json::Value {
        serde_json::to_value(EnumerationSummary {
            p: self.p,
            n: self.n,
            descriptors: self.descriptor_count.to_string(),
            distinct: self.distinct_function_count.to_string(),
        })
        .expect("summary serializes")
    }
}

/// `n! (2(p-1))^n p^n (p-1)`: permutations, set choices, free outputs
/// `b_1..b_n`, and `b_{n+1} != b_n`.
pub fn descriptor_space_size(p: u64, n: usize) -> BigUint {
    let factorial = (1..=n as u64).fold(BigUint::from(1u8), |acc, k| acc * k);
    factorial
        * num_traits::pow(BigUint::from(2 * (p - 1)), n)
        * num_traits::pow(BigUint::from(p), n)
        * BigUint::from(p - 1)
}

/// `p^(p^n)`, the number of functions `F_p^n -> F_p`.
pub fn function_space_size(p: u64, n: usize) -> BigUint {
    let exponent = num_traits::pow(BigUint::from(p), n);
    match exponent.to_usize() {
        Some(e) if e <= 1 << 20 => num_traits::pow(BigUint::from(p), e),
        // far beyond any budget; a lower bound suffices for the budget check
        _ => num_traits::pow(BigUint::from(2u8), 1 << 20),
    }
}

fn check_budget(required: &BigUint, budget: u64) -> Result<()> {
    if *required > BigUint::from(budget) {
        Err(NcfError::BudgetExceeded {
            required: required.to_string(),
            budget,
        })
    } else {
        Ok(())
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                rec(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}

/// Advances a mixed-radix counter; returns false after the last value.
fn advance(digits: &mut [usize], radix: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < radix {
            return true;
        }
        *d = 0;
    }
    false
}

/// Sweeps every descriptor for `(p, n)` and counts the distinct functions.
pub fn enumerate_ncfs(p: u64, n: usize, budget: u64, keep_tables: bool) -> Result<EnumerationResult> {
    let field = PrimeField::new(p)?;
    if n == 0 {
        return Err(NcfError::BadArity(0));
    }
    let required = descriptor_space_size(p, n);
    check_budget(&required, budget)?;

    let sets = field.interval_sets();
    let points: Vec<Vec<u8>> = Points::new(field, n).collect();
    let size = table_size(field, n);
    let q = field.order();

    let partials: Vec<(u64, HashSet<Vec<u8>>)> = permutations(n)
        .into_par_iter()
        .map(|sigma| {
            let mut seen = HashSet::new();
            let mut swept = 0u64;
            let mut set_idx = vec![0usize; n];
            loop {
                let chosen: Vec<IntervalSet> = set_idx.iter().map(|&i| sets[i]).collect();
                // layer at which each point first canalyzes (n = falls through)
                let layer_of: Vec<usize> = points
                    .iter()
                    .map(|pt| (0..n).find(|&l| chosen[l].contains(pt[sigma[l]])).unwrap_or(n))
                    .collect();
                let mut outputs = vec![0usize; n + 1];
                loop {
                    if outputs[n] != outputs[n - 1] {
                        swept += 1;
                        let values: Vec<u8> = layer_of.iter().map(|&l| outputs[l] as u8).collect();
                        debug_assert_eq!(values.len(), size);
                        seen.insert(values);
                    }
                    if !advance(&mut outputs, q) {
                        break;
                    }
                }
                if !advance(&mut set_idx, sets.len()) {
                    break;
                }
            }
            (swept, seen)
        })
        .collect();

    let mut swept = 0u64;
    let mut all: HashSet<Vec<u8>> = HashSet::new();
    for (count, part) in partials {
        swept += count;
        all.extend(part);
    }
    let distinct = all.len();
    let tables = keep_tables.then(|| {
        let mut v: Vec<Vec<u8>> = all.into_iter().collect();
        v.sort_unstable();
        v.into_iter()
            .map(|values| TruthTable::from_raw(field, n, values))
            .collect()
    });
    Ok(EnumerationResult {
        p,
        n,
        descriptor_count: BigUint::from(swept),
        distinct_function_count: BigUint::from(distinct),
        tables,
    })
}

/// Table with value vector given by the base-`p` digits of `code`, least significant first.
pub fn table_from_code(field: PrimeField, n: usize, mut code: u64) -> TruthTable {
    let p = field.p() as u64;
    let values = (0..table_size(field, n))
        .map(|_| {
            let d = (code % p) as u8;
            code /= p;
            d
        })
        .collect();
    TruthTable::from_raw(field, n, values)
}

/// Runs the detector on every function `F_p^n -> F_p` and counts the NCFs.
pub fn census(p: u64, n: usize, budget: u64) -> Result<BigUint> {
    let field = PrimeField::new(p)?;
    if n == 0 {
        return Err(NcfError::BadArity(0));
    }
    let total = function_space_size(p, n);
    check_budget(&total, budget)?;
    let total = total.to_u64().expect("bounded by budget");
    let count = (0..total)
        .into_par_iter()
        .filter(|&code| detect(&table_from_code(field, n, code)).is_ncf())
        .count();
    Ok(BigUint::from(count))
}

/// Samples a descriptor uniformly from the descriptor space (not uniformly
/// over distinct functions). Deterministic for a fixed seed.
pub fn random_ncf(field: PrimeField, n: usize, seed: u64) -> Result<NcfDescriptor> {
    if n == 0 {
        return Err(NcfError::BadArity(0));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(random_ncf_with(field, n, &mut rng))
}

/// Same as [`random_ncf`] but drawing from a caller-supplied generator.
pub fn random_ncf_with<R: Rng>(field: PrimeField, n: usize, rng: &mut R) -> NcfDescriptor {
    let catalog = field.interval_sets();
    let p = field.p();
    let mut sigma: Vec<usize> = (0..n).collect();
    sigma.shuffle(rng);
    let sets = (0..n).map(|_| catalog[rng.gen_range(0..catalog.len())]).collect();
    let mut outputs: Vec<u8> = (0..n).map(|_| rng.gen_range(0..p)).collect();
    // uniform over the p-1 values different from b_n
    let offset = rng.gen_range(1..p);
    outputs.push(field.add(outputs[n - 1], offset));
    NcfDescriptor::new(field, sigma, sets, outputs).expect("sampled descriptor is valid")
}
