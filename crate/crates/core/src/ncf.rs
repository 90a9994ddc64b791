//! Nested canalyzing function descriptors: construction of truth tables and
//! polynomials, detection, and the complement/shift symmetries.
//!
//! Layer `i` of a descriptor tests variable `x_sigma(i)` against `S_i`; the
//! first layer whose test succeeds yields `b_i`, and if every test fails the
//! output is `b_{n+1}`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{NcfError, Result};
use crate::field::{IntervalSet, PrimeField};
use crate::functions::{Points, TruthTable};
use crate::poly::{set_indicator, PolyR};

/// Parameters `(sigma, S_1..S_n, b_1..b_{n+1})` of a nested canalyzing function.
///
/// `sigma` is stored zero-based; the text and JSON forms are one-based.
/// A descriptor with `b_n == b_{n+1}` can be constructed (it still describes a
/// canalyzing ladder) but is rejected by the operations that need a genuine NCF.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NcfDescriptor {
    field: PrimeField,
    sigma: Vec<usize>,
    sets: Vec<IntervalSet>,
    outputs: Vec<u8>,
}

impl NcfDescriptor {
    pub fn new(field: PrimeField, sigma: Vec<usize>, sets: Vec<IntervalSet>, outputs: Vec<u8>) -> Result<Self> {
        let n = sigma.len();
        if n == 0 {
            return Err(NcfError::BadArity(0));
        }
        let mut seen = vec![false; n];
        for &v in &sigma {
            if v >= n || std::mem::replace(&mut seen[v], true) {
                return Err(NcfError::InvalidDescriptor(format!(
                    "sigma {:?} is not a permutation of 1..={n}",
                    sigma.iter().map(|v| v + 1).collect::<Vec<_>>()
                )));
            }
        }
        if sets.len() != n {
            return Err(NcfError::InvalidDescriptor(format!(
                "expected {n} sets, found {}",
                sets.len()
            )));
        }
        if outputs.len() != n + 1 {
            return Err(NcfError::InvalidDescriptor(format!(
                "expected {} outputs, found {}",
                n + 1,
                outputs.len()
            )));
        }
        for s in &sets {
            s.validate(field)?;
        }
        for &b in &outputs {
            field.element(b as u64)?;
        }
        Ok(Self {
            field,
            sigma,
            sets,
            outputs,
        })
    }

    /// Variable order `x_1, ..., x_n`.
    pub fn identity_order(field: PrimeField, sets: Vec<IntervalSet>, outputs: Vec<u8>) -> Result<Self> {
        let sigma = (0..sets.len()).collect();
        Self::new(field, sigma, sets, outputs)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn arity(&self) -> usize {
        self.sigma.len()
    }

    /// Zero-based variable tested by each layer.
    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    pub fn sets(&self) -> &[IntervalSet] {
        &self.sets
    }

    pub fn outputs(&self) -> &[u8] {
        &self.outputs
    }

    /// True when `b_n != b_{n+1}`.
    pub fn is_nested(&self) -> bool {
        let n = self.arity();
        self.outputs[n - 1] != self.outputs[n]
    }

    fn require_nested(&self) -> Result<()> {
        if self.is_nested() {
            Ok(())
        } else {
            Err(NcfError::InvalidDescriptor("b_n must differ from b_{n+1}".into()))
        }
    }

    /// Output of the case ladder at one point (no validation).
    pub fn ladder_value(&self, point: &[u8]) -> u8 {
        for (layer, (&var, set)) in self.sigma.iter().zip(&self.sets).enumerate() {
            if set.contains(point[var]) {
                return self.outputs[layer];
            }
        }
        self.outputs[self.arity()]
    }

    pub fn build_table(&self) -> Result<TruthTable> {
        self.require_nested()?;
        let values = Points::new(self.field, self.arity())
            .map(|pt| self.ladder_value(&pt))
            .collect();
        Ok(TruthTable::from_raw(self.field, self.arity(), values))
    }

    /// Expands `b_1 + sum_k (b_{k+1} - b_k) prod_{i<=k} Q_{S_i}(x_sigma(i))`.
    pub fn build_polynomial(&self) -> Result<PolyR> {
        self.require_nested()?;
        let field = self.field;
        let n = self.arity();
        let p = field.order();
        let mut result = PolyR::constant(field, n, self.outputs[0]);
        let mut prefix = PolyR::constant(field, n, 1);
        for k in 0..n {
            let q = set_indicator(self.sets[k], field);
            prefix = multiply_fresh_variable(&prefix, self.sigma[k], q.coeffs());
            let step = field.sub(self.outputs[k + 1], self.outputs[k]);
            if step != 0 {
                for (c, &t) in result.coeffs_mut().iter_mut().zip(prefix.coeffs()) {
                    *c = field.add(*c, field.mul(step, t));
                }
            }
        }
        debug_assert_eq!(result.coeffs().len(), p.pow(n as u32));
        Ok(result)
    }

    /// Swaps the last set for its complement and exchanges `b_n`, `b_{n+1}`.
    /// The function is unchanged.
    pub fn complement_last(&self) -> NcfDescriptor {
        let n = self.arity();
        let mut out = self.clone();
        out.sets[n - 1] = self.sets[n - 1].complement(self.field);
        out.outputs.swap(n - 1, n);
        out
    }

    /// Adds `b` to every output value, which adds `b` to the function.
    pub fn shift(&self, b: u8) -> NcfDescriptor {
        let mut out = self.clone();
        for v in &mut out.outputs {
            *v = self.field.add(*v, b);
        }
        out
    }

    /// Parses `sigma=2,1 sets=P0,S2 b=0,1,2`. Fields may appear in any order,
    /// separated by whitespace.
    pub fn parse(field: PrimeField, text: &str) -> Result<Self> {
        let mut sigma = None;
        let mut sets = None;
        let mut outputs = None;
        for part in text.split_whitespace() {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| NcfError::InvalidDescriptor(format!("expected key=value, found {part:?}")))?;
            match key {
                "sigma" => sigma = Some(parse_list(value, parse_var)?),
                "sets" => sets = Some(parse_list(value, |s| s.parse::<IntervalSet>())?),
                "b" => outputs = Some(parse_list(value, |s| parse_elem(s, field))?),
                other => return Err(NcfError::InvalidDescriptor(format!("unknown key {other:?}"))),
            }
        }
        let missing = |k: &str| NcfError::InvalidDescriptor(format!("missing {k}="));
        let sets = sets.ok_or_else(|| missing("sets"))?;
        let outputs = outputs.ok_or_else(|| missing("b"))?;
        let sigma = sigma.unwrap_or_else(|| (0..sets.len()).collect());
        Self::new(field, sigma, sets, outputs)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(DescriptorJson::from(self)).expect("descriptor serializes")
    }

    pub fn from_json(input: &str) -> Result<Self> {
        let raw: DescriptorJson = serde_json::from_str(input).map_err(|e| NcfError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        let field = PrimeField::new(raw.p)?;
        let sigma = raw
            .sigma
            .iter()
            .map(|&v| {
                v.checked_sub(1)
                    .ok_or_else(|| NcfError::InvalidDescriptor("sigma is one-based".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(field, sigma, raw.sets, raw.b)
    }
}

fn parse_list<T>(value: &str, item: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    value.split(',').map(|s| item(s.trim())).collect()
}

fn parse_var(s: &str) -> Result<usize> {
    match s.parse::<usize>() {
        Ok(v) if v >= 1 => Ok(v - 1),
        _ => Err(NcfError::InvalidDescriptor(format!(
            "bad variable {s:?} in sigma (one-based)"
        ))),
    }
}

fn parse_elem(s: &str, field: PrimeField) -> Result<u8> {
    let v: u64 = s
        .parse()
        .map_err(|_| NcfError::InvalidDescriptor(format!("bad output value {s:?}")))?;
    field.element(v)
}

impl fmt::Display for NcfDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |items: Vec<String>| items.join(",");
        write!(
            f,
            "sigma={} sets={} b={}",
            join(self.sigma.iter().map(|v| (v + 1).to_string()).collect()),
            join(self.sets.iter().map(|s| s.to_string()).collect()),
            join(self.outputs.iter().map(|b| b.to_string()).collect()),
        )
    }
}

#[derive(Serialize, Deserialize)]
struct DescriptorJson {
    p: u64,
    sigma: Vec<usize>,
    sets: Vec<IntervalSet>,
    b: Vec<u8>,
}

impl From<&NcfDescriptor> for DescriptorJson {
    fn from(d: &NcfDescriptor) -> Self {
        Self {
            p: d.field.p() as u64,
            sigma: d.sigma.iter().map(|v| v + 1).collect(),
            sets: d.sets.clone(),
            b: d.outputs.clone(),
        }
    }
}

/// Multiplies `poly` (which must not involve `x_var`) by the univariate `q(x_var)`.
fn multiply_fresh_variable(poly: &PolyR, var: usize, q: &[u8]) -> PolyR {
    let field = poly.field();
    let n = poly.arity();
    let p = field.order();
    let stride = p.pow((n - 1 - var) as u32);
    let mut out = PolyR::zero(field, n);
    let src = poly.coeffs();
    let dst = out.coeffs_mut();
    for hi in 0..src.len() / (stride * p) {
        let base = hi * p * stride;
        for lo in 0..stride {
            let c = src[base + lo];
            if c == 0 {
                continue;
            }
            for (e, &qe) in q.iter().enumerate() {
                dst[base + e * stride + lo] = field.mul(c, qe);
            }
        }
    }
    out
}

/// Outcome of [`detect`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Detection {
    Ncf(NcfDescriptor),
    NotNcf,
}

impl Detection {
    pub fn is_ncf(&self) -> bool {
        matches!(self, Detection::Ncf(_))
    }

    pub fn descriptor(&self) -> Option<&NcfDescriptor> {
        match self {
            Detection::Ncf(d) => Some(d),
            Detection::NotNcf => None,
        }
    }
}

/// Decides whether `table` is nested canalyzing.
///
/// Backtracking over (variable, interval set) per layer, variables in ascending
/// index and sets in catalog order. The first descriptor found is returned,
/// so among equivalent descriptors the lexicographically first one wins.
pub fn detect(table: &TruthTable) -> Detection {
    let field = table.field();
    let sets = field.interval_sets();
    let vars: Vec<usize> = (0..table.arity()).collect();
    let mut layers = Vec::with_capacity(table.arity());
    match search(table, &vars, &sets, &mut layers) {
        Some(last) => {
            let sigma = layers.iter().map(|l| l.0).collect();
            let chosen = layers.iter().map(|l| l.1).collect();
            let mut outputs: Vec<u8> = layers.iter().map(|l| l.2).collect();
            outputs.push(last);
            let d = NcfDescriptor::new(field, sigma, chosen, outputs).expect("search yields valid descriptors");
            debug_assert_eq!(d.build_table().as_ref(), Ok(table));
            Detection::Ncf(d)
        }
        None => Detection::NotNcf,
    }
}

fn search(
    table: &TruthTable,
    vars: &[usize],
    sets: &[IntervalSet],
    layers: &mut Vec<(usize, IntervalSet, u8)>,
) -> Option<u8> {
    for pos in 0..table.arity() {
        for &set in sets {
            let r = table.restrict_at(pos, set);
            let (Some(value), Some(rest)) = (r.on_set, r.on_complement) else {
                continue;
            };
            if rest.arity() == 0 {
                let last = rest.values()[0];
                if last != value {
                    layers.push((vars[pos], set, value));
                    return Some(last);
                }
                continue;
            }
            layers.push((vars[pos], set, value));
            let remaining: Vec<usize> = vars
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != pos)
                .map(|(_, &v)| v)
                .collect();
            if let Some(last) = search(&rest, &remaining, sets, layers) {
                return Some(last);
            }
            layers.pop();
        }
    }
    None
}
