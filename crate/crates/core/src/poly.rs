//! The ring of reduced polynomials over F_p (every exponent at most `p-1`),
//! which is in bijection with the functions `F_p^n -> F_p`.
//!
//! Coefficients are stored densely: `coeffs[index_of(e)]` is the coefficient of
//! `x_1^e_1 ... x_n^e_n`, using the same mixed-radix layout as truth tables.

use serde::{Deserialize, Serialize};

use crate::error::{NcfError, Result};
use crate::field::{IntervalSet, PrimeField};
use crate::functions::{index_of, parse_header, point_of, table_size, TruthTable};
use crate::text::{line_tokens, Tokens};

/// Univariate polynomial of degree at most `p-1`; `coeffs[k]` multiplies `x^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniPoly {
    field: PrimeField,
    coeffs: Vec<u8>,
}

impl UniPoly {
    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn coeffs(&self) -> &[u8] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> u8 {
        self.coeffs[k]
    }

    /// Horner evaluation.
    pub fn eval(&self, x: u8) -> u8 {
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| self.field.add(self.field.mul(acc, x), c))
    }

    /// Values at `0, 1, ..., p-1`.
    pub fn pointwise(&self) -> Vec<u8> {
        self.field.elements().map(|x| self.eval(x)).collect()
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| self.field.add(a, b))
            .collect();
        UniPoly {
            field: self.field,
            coeffs,
        }
    }
}

/// Indicator polynomial of the point `r`, built from its expanded form
/// `(p-1) [x^(p-1) + r x^(p-2) + ... + r^(p-2) x + prod_{a != r} a]`.
pub fn point_indicator(r: u8, field: PrimeField) -> UniPoly {
    let p = field.order();
    let lead = field.p() - 1;
    let mut coeffs = vec![0u8; p];
    // x^(p-1-k) carries r^k for k = 0..p-2
    let mut rk = 1u8;
    for k in 0..p - 1 {
        coeffs[p - 1 - k] = field.mul(lead, rk);
        rk = field.mul(rk, r);
    }
    let tail = field
        .elements()
        .filter(|&a| a != r)
        .fold(1u8, |acc, a| field.mul(acc, a));
    // for p = 2 the x^1 slot and the constant slot are distinct, so this never
    // overwrites the loop above
    coeffs[0] = field.mul(lead, tail);
    let poly = UniPoly { field, coeffs };
    for x in field.elements() {
        assert_eq!(poly.eval(x), u8::from(x == r), "P_{r} wrong at {x} for p={}", field.p());
    }
    poly
}

/// Indicator of the complement of `set`: zero on `set`, one elsewhere.
pub fn set_indicator(set: IntervalSet, field: PrimeField) -> UniPoly {
    let zero = UniPoly {
        field,
        coeffs: vec![0; field.order()],
    };
    set.complement_members(field)
        .into_iter()
        .fold(zero, |acc, r| acc.add(&point_indicator(r, field)))
}

/// A reduced polynomial in `n` variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolyR {
    field: PrimeField,
    n: usize,
    coeffs: Vec<u8>,
}

impl PolyR {
    pub fn zero(field: PrimeField, n: usize) -> Self {
        Self {
            field,
            n,
            coeffs: vec![0; table_size(field, n)],
        }
    }

    pub fn constant(field: PrimeField, n: usize, c: u8) -> Self {
        let mut poly = Self::zero(field, n);
        poly.coeffs[0] = c % field.p();
        poly
    }

    pub fn from_coeffs(field: PrimeField, n: usize, coeffs: Vec<u8>) -> Result<Self> {
        let expected = table_size(field, n);
        if coeffs.len() != expected {
            return Err(NcfError::ArityMismatch {
                expected,
                found: coeffs.len(),
            });
        }
        if let Some(&bad) = coeffs.iter().find(|&&c| c >= field.p()) {
            return Err(NcfError::ElementOutOfRange {
                value: bad as u64,
                p: field.p(),
            });
        }
        Ok(Self { field, n, coeffs })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[u8] {
        &self.coeffs
    }

    pub(crate) fn coeffs_mut(&mut self) -> &mut [u8] {
        &mut self.coeffs
    }

    fn exponent_index(&self, exponents: &[u8]) -> Result<usize> {
        if exponents.len() != self.n {
            return Err(NcfError::ArityMismatch {
                expected: self.n,
                found: exponents.len(),
            });
        }
        if let Some(&e) = exponents.iter().find(|&&e| e >= self.field.p()) {
            return Err(NcfError::BadExponent {
                exponent: e as u64,
                max: self.field.p() - 1,
            });
        }
        index_of(self.field, self.n, exponents)
    }

    pub fn coefficient_at(&self, exponents: &[u8]) -> Result<u8> {
        Ok(self.coeffs[self.exponent_index(exponents)?])
    }

    pub fn set_coefficient(&mut self, exponents: &[u8], value: u8) -> Result<()> {
        let idx = self.exponent_index(exponents)?;
        self.coeffs[idx] = self.field.element(value as u64)?;
        Ok(())
    }

    /// Evaluates at a point, with `0^0 = 1`.
    pub fn evaluate(&self, point: &[u8]) -> Result<u8> {
        index_of(self.field, self.n, point)?;
        Ok(self.evaluate_unchecked(point))
    }

    fn evaluate_unchecked(&self, point: &[u8]) -> u8 {
        let f = self.field;
        let p = f.order();
        let mut cur = self.coeffs.clone();
        // fold away the least significant variable first
        for &a in point.iter().rev() {
            let powers: Vec<u8> = (0..p as u64).map(|e| f.pow(a, e)).collect();
            cur = cur
                .chunks_exact(p)
                .map(|chunk| {
                    chunk
                        .iter()
                        .zip(&powers)
                        .fold(0u8, |acc, (&c, &pw)| f.add(acc, f.mul(c, pw)))
                })
                .collect();
        }
        cur[0]
    }

    /// Tabulates the polynomial function.
    pub fn to_table(&self) -> TruthTable {
        let values = (0..self.coeffs.len())
            .map(|i| self.evaluate_unchecked(&point_of(self.field, self.n, i)))
            .collect();
        TruthTable::from_raw(self.field, self.n, values)
    }

    /// Interpolates a table as `sum_a f(a) prod_i P_{a_i}(x_i)`.
    pub fn interpolate(table: &TruthTable) -> PolyR {
        let field = table.field();
        let n = table.arity();
        let indicators: Vec<UniPoly> = field.elements().map(|r| point_indicator(r, field)).collect();
        let mut out = PolyR::zero(field, n);
        for (idx, &value) in table.values().iter().enumerate() {
            if value == 0 {
                continue;
            }
            let point = point_of(field, n, idx);
            let mut term = vec![value];
            for &a in &point {
                term = kron(field, &term, indicators[a as usize].coeffs());
            }
            for (c, t) in out.coeffs.iter_mut().zip(&term) {
                *c = field.add(*c, *t);
            }
        }
        out
    }

    /// Nonzero terms as `(exponents, coefficient)` in index order.
    pub fn terms(&self) -> impl Iterator<Item = (Vec<u8>, u8)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (point_of(self.field, self.n, i), c))
    }

    /// Text form: header `p n`, then `e_1 ... e_n : c` per nonzero term.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.field.p(), self.n);
        for (exp, c) in self.terms() {
            let exps: Vec<String> = exp.iter().map(|e| e.to_string()).collect();
            out.push_str(&format!("{} : {c}\n", exps.join(" ")));
        }
        out
    }

    pub fn parse_text(input: &str) -> Result<Self> {
        let mut header_line = None;
        for (li, line) in input.lines().enumerate() {
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            header_line = Some(li);
            break;
        }
        let Some(h) = header_line else {
            return Err(NcfError::Parse {
                line: 1,
                column: 1,
                message: "empty input".into(),
            });
        };
        let header_src: String = input.lines().nth(h).unwrap_or_default().to_string();
        let mut header_tokens = Tokens::new(&header_src);
        let (field, n) = parse_header(&mut header_tokens).map_err(|e| relocate(e, h + 1))?;
        header_tokens.expect_end().map_err(|e| relocate(e, h + 1))?;

        let mut poly = PolyR::zero(field, n);
        let mut seen = vec![false; poly.coeffs.len()];
        for (li, line) in input.lines().enumerate().skip(h + 1) {
            let line_no = li + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let tokens = line_tokens(line, line_no);
            let Some(colon) = tokens.iter().position(|t| t.text == ":") else {
                return Err(tokens[0].error("expected `e_1 ... e_n : c`".into()));
            };
            let (exp_tokens, rest) = tokens.split_at(colon);
            if exp_tokens.len() != n {
                return Err(tokens[0].error(format!("expected {n} exponents, found {}", exp_tokens.len())));
            }
            let mut exps = Vec::with_capacity(n);
            for t in exp_tokens {
                let e = t.number()?;
                if e >= field.p() as u64 {
                    return Err(t.error(format!("exponent {e} exceeds p-1 = {}", field.p() - 1)));
                }
                exps.push(e as u8);
            }
            let coeff_tok = rest.get(1).ok_or_else(|| rest[0].error("missing coefficient".into()))?;
            if let Some(extra) = rest.get(2) {
                return Err(extra.error(format!("unexpected trailing token {:?}", extra.text)));
            }
            let c = coeff_tok.element(field)?;
            let idx = index_of(field, n, &exps)?;
            if seen[idx] {
                return Err(tokens[0].error("duplicate term".into()));
            }
            seen[idx] = true;
            poly.coeffs[idx] = c;
        }
        Ok(poly)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms = self.terms().map(|(exp, coeff)| TermJson { exp, coeff }).collect();
        serde_json::to_value(PolyJson {
            p: self.field.p() as u64,
            n: self.n,
            terms,
        })
        .expect("poly serializes")
    }

    pub fn from_json(input: &str) -> Result<Self> {
        let raw: PolyJson = serde_json::from_str(input).map_err(|e| NcfError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        let field = PrimeField::new(raw.p)?;
        let mut poly = PolyR::zero(field, raw.n);
        for term in raw.terms {
            poly.set_coefficient(&term.exp, term.coeff)?;
        }
        Ok(poly)
    }
}

fn relocate(e: NcfError, line: usize) -> NcfError {
    match e {
        NcfError::Parse { column, message, .. } => NcfError::Parse { line, column, message },
        other => other,
    }
}

/// Kronecker product of coefficient vectors; `a` indexes the more significant digits.
pub(crate) fn kron(field: PrimeField, a: &[u8], b: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for &x in a {
        out.extend(b.iter().map(|&y| field.mul(x, y)));
    }
    out
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    p: u64,
    n: usize,
    terms: Vec<TermJson>,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    exp: Vec<u8>,
    coeff: u8,
}
