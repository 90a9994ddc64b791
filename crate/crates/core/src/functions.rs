//! Dense truth tables for functions `F_p^n -> F_p`.
//!
//! Points are indexed in mixed radix with `x_1` most significant, so the
//! lexicographic order of points coincides with index order.

use serde::{Deserialize, Serialize};

use crate::error::{NcfError, Result};
use crate::field::{IntervalSet, PrimeField};
use crate::text::Tokens;

/// `p^n` as a `usize`, panicking on overflow.
pub fn table_size(field: PrimeField, n: usize) -> usize {
    field.order().checked_pow(n as u32).expect("p^n overflows usize")
}

/// Index of a point: `sum_i a_i p^(n-i)`.
pub fn index_of(field: PrimeField, n: usize, point: &[u8]) -> Result<usize> {
    if point.len() != n {
        return Err(NcfError::ArityMismatch {
            expected: n,
            found: point.len(),
        });
    }
    let p = field.order();
    point.iter().try_fold(0usize, |acc, &a| {
        if a >= field.p() {
            Err(NcfError::ElementOutOfRange {
                value: a as u64,
                p: field.p(),
            })
        } else {
            Ok(acc * p + a as usize)
        }
    })
}

/// Inverse of [`index_of`].
pub fn point_of(field: PrimeField, n: usize, mut index: usize) -> Vec<u8> {
    let p = field.order();
    let mut pt = vec![0u8; n];
    for slot in pt.iter_mut().rev() {
        *slot = (index % p) as u8;
        index /= p;
    }
    pt
}

/// Iterates all points of `F_p^n` in index order.
pub struct Points {
    p: u8,
    current: Vec<u8>,
    done: bool,
}

impl Points {
    pub fn new(field: PrimeField, n: usize) -> Self {
        Self {
            p: field.p(),
            current: vec![0; n],
            done: false,
        }
    }
}

impl Iterator for Points {
    type Item = Vec<u8>;

    fn next(&mut self) -> Option<Vec<u8>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        // odometer increment, last coordinate fastest
        let mut i = self.current.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            self.current[i] += 1;
            if self.current[i] < self.p {
                break;
            }
            self.current[i] = 0;
        }
        Some(out)
    }
}

/// A function `F_p^n -> F_p` stored as its value vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruthTable {
    field: PrimeField,
    n: usize,
    values: Vec<u8>,
}

/// Result of splitting a table along one variable by an interval set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Restriction {
    /// The common value on the regime `x_var in S`, if the table is constant there.
    pub on_set: Option<u8>,
    /// The `(n-1)`-ary table on the regime `x_var not in S`, present only when
    /// the table does not depend on `x_var` there.
    pub on_complement: Option<TruthTable>,
}

impl TruthTable {
    pub fn new(field: PrimeField, n: usize, values: Vec<u8>) -> Result<Self> {
        if n == 0 {
            return Err(NcfError::BadArity(0));
        }
        Self::new_internal(field, n, values)
    }

    fn new_internal(field: PrimeField, n: usize, values: Vec<u8>) -> Result<Self> {
        let expected = table_size(field, n);
        if values.len() != expected {
            return Err(NcfError::InvalidDescriptor(format!(
                "table for p={} n={n} needs {expected} values, got {}",
                field.p(),
                values.len()
            )));
        }
        if let Some(&bad) = values.iter().find(|&&v| v >= field.p()) {
            return Err(NcfError::ElementOutOfRange {
                value: bad as u64,
                p: field.p(),
            });
        }
        Ok(Self { field, n, values })
    }

    /// Builds a table without validating entries. Callers guarantee the invariants.
    pub(crate) fn from_raw(field: PrimeField, n: usize, values: Vec<u8>) -> Self {
        debug_assert_eq!(values.len(), table_size(field, n));
        debug_assert!(values.iter().all(|&v| v < field.p()));
        Self { field, n, values }
    }

    pub fn constant(field: PrimeField, n: usize, c: u8) -> Result<Self> {
        let c = field.element(c as u64)?;
        Self::new(field, n, vec![c; table_size(field, n)])
    }

    /// Tabulates `f` over all points in index order.
    pub fn from_fn(field: PrimeField, n: usize, mut f: impl FnMut(&[u8]) -> u8) -> Result<Self> {
        let values = Points::new(field, n).map(|pt| f(&pt)).collect();
        Self::new(field, n, values)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[u8] {
        &self.values
    }

    pub fn into_values(self) -> Vec<u8> {
        self.values
    }

    pub fn eval(&self, point: &[u8]) -> Result<u8> {
        Ok(self.values[index_of(self.field, self.n, point)?])
    }

    /// The common value if the table is constant.
    pub fn constant_value(&self) -> Option<u8> {
        let first = *self.values.first()?;
        self.values.iter().all(|&v| v == first).then_some(first)
    }

    /// Splits along variable `var` (1-based) by `set`.
    pub fn restrict(&self, var: usize, set: IntervalSet) -> Result<Restriction> {
        if var == 0 || var > self.n {
            return Err(NcfError::BadVariable { var, n: self.n });
        }
        set.validate(self.field)?;
        Ok(self.restrict_at(var - 1, set))
    }

    /// Zero-based worker behind [`restrict`](Self::restrict); may return a 0-ary table.
    pub(crate) fn restrict_at(&self, pos: usize, set: IntervalSet) -> Restriction {
        let p = self.field.order();
        let stride = p.pow((self.n - 1 - pos) as u32);
        let blocks = self.values.len() / (stride * p);

        let mut on_set: Option<u8> = None;
        let mut constant = true;
        'outer: for hi in 0..blocks {
            for x in (0..p).filter(|&x| set.contains(x as u8)) {
                let base = (hi * p + x) * stride;
                for &v in &self.values[base..base + stride] {
                    match on_set {
                        None => on_set = Some(v),
                        Some(c) if c != v => {
                            constant = false;
                            break 'outer;
                        }
                        _ => {}
                    }
                }
            }
        }
        let on_set = if constant { on_set } else { None };

        let comp: Vec<usize> = (0..p).filter(|&x| !set.contains(x as u8)).collect();
        let first = comp[0];
        let mut sub = Vec::with_capacity(blocks * stride);
        let mut independent = true;
        'scan: for hi in 0..blocks {
            let base0 = (hi * p + first) * stride;
            let slice0 = &self.values[base0..base0 + stride];
            for &x in &comp[1..] {
                let base = (hi * p + x) * stride;
                if &self.values[base..base + stride] != slice0 {
                    independent = false;
                    break 'scan;
                }
            }
            sub.extend_from_slice(slice0);
        }
        let on_complement = independent.then(|| TruthTable::from_raw(self.field, self.n - 1, sub));
        Restriction { on_set, on_complement }
    }

    /// Adds `b` to every value.
    pub fn shifted(&self, b: u8) -> TruthTable {
        let values = self.values.iter().map(|&v| self.field.add(v, b)).collect();
        TruthTable::from_raw(self.field, self.n, values)
    }

    /// Text form: `p n` on the first line, the `p^n` values on the second.
    pub fn to_text(&self) -> String {
        format!("{} {}\n{}\n", self.field.p(), self.n, self.values_line())
    }

    /// The values as one space-separated line (no newline).
    pub fn values_line(&self) -> String {
        let mut s = String::with_capacity(self.values.len() * 3);
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                s.push(' ');
            }
            s.push_str(&v.to_string());
        }
        s
    }

    /// Parses the text form. Values may wrap over several lines.
    pub fn parse_text(input: &str) -> Result<Self> {
        let mut tokens = Tokens::new(input);
        let (field, n) = parse_header(&mut tokens)?;
        let size = table_size(field, n);
        let mut values = Vec::with_capacity(size);
        for _ in 0..size {
            let tok = tokens.next_token("table value")?;
            values.push(tok.element(field)?);
        }
        tokens.expect_end()?;
        Self::new(field, n, values)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(TableJson {
            p: self.field.p() as u64,
            n: self.n,
            values: self.values.clone(),
        })
        .expect("table serializes")
    }

    pub fn from_json(input: &str) -> Result<Self> {
        let raw: TableJson = serde_json::from_str(input).map_err(|e| NcfError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        let field = PrimeField::new(raw.p)?;
        Self::new(field, raw.n, raw.values)
    }

    /// Parses either the JSON or the text form, sniffing the first non-blank byte.
    pub fn parse_any(input: &str) -> Result<Self> {
        if input.trim_start().starts_with('{') {
            Self::from_json(input)
        } else {
            Self::parse_text(input)
        }
    }
}

/// Reads a `p n` header and validates both numbers.
pub(crate) fn parse_header(tokens: &mut Tokens<'_>) -> Result<(PrimeField, usize)> {
    let p_tok = tokens.next_token("prime p")?;
    let p = p_tok.number()?;
    let field = PrimeField::new(p).map_err(|e| p_tok.error(e.to_string()))?;
    let n_tok = tokens.next_token("arity n")?;
    let n = n_tok.number()? as usize;
    if n == 0 {
        return Err(n_tok.error("arity must be at least 1".into()));
    }
    if (field.order() as f64).powi(n as i32) > (1u64 << 32) as f64 {
        return Err(n_tok.error(format!("p^n is too large for a dense table (p={p}, n={n})")));
    }
    Ok((field, n))
}

#[derive(Serialize, Deserialize)]
struct TableJson {
    p: u64,
    n: usize,
    values: Vec<u8>,
}
