//! Coefficient-level characterization of nested canalyzing polynomials.
//!
//! A descriptor pins every coefficient of its polynomial through a handful of
//! relations between building blocks:
//!
//! * the top coefficient `C_[p-1]` (all exponents `p-1`),
//! * interior blocks: all exponents `p-1` except one in `1..p-2`,
//! * zero blocks: all exponents `p-1` except a single `0`,
//! * corner sums: exponents `p-1` on the first `m` layers and `0` after,
//! * the product relation expressing any coefficient through its corner and blocks,
//! * the constant-term relation.
//!
//! Relations are stated in layer order (layer `i` reads `x_sigma(i)`); a
//! coefficient vector is permuted into layer order before checking.
//!
//! Two readings of the relations are supported. [`Reading::Corrected`] is the
//! one satisfied by every nested canalyzing polynomial. [`Reading::Literal`]
//! applies the textbook statement verbatim: an extra `(p-1)` factor in the
//! interior blocks, and corner sums that index the `Q_S(0)` factor by the
//! summation variable and omit the `b_{n+1} - b_n` summand.

use serde::Serialize;

use crate::error::{NcfError, Result};
use crate::field::PrimeField;
use crate::functions::{index_of, point_of, table_size};
use crate::ncf::NcfDescriptor;
use crate::poly::PolyR;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Reading {
    Corrected,
    Literal,
}

/// The relation a violation belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    ProductRelation,
    TopCoefficient,
    InteriorBlock,
    ZeroBlock,
    CornerSum,
    ConstantTerm,
}

impl Relation {
    pub const ALL: [Relation; 6] = [
        Relation::ProductRelation,
        Relation::TopCoefficient,
        Relation::InteriorBlock,
        Relation::ZeroBlock,
        Relation::CornerSum,
        Relation::ConstantTerm,
    ];
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub relation: Relation,
    /// Exponent tuple in variable order.
    pub exponents: Vec<u8>,
    /// Value the relation requires (`None` when it is undefined, e.g. a zero top coefficient).
    pub expected: Option<u8>,
    pub found: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParamReport {
    pub reading: Reading,
    pub product_relation: bool,
    pub top_coefficient: bool,
    pub interior_blocks: bool,
    pub zero_blocks: bool,
    pub corner_sums: bool,
    pub constant_term: bool,
    pub violations: Vec<Violation>,
}

impl ParamReport {
    fn new(reading: Reading) -> Self {
        Self {
            reading,
            product_relation: true,
            top_coefficient: true,
            interior_blocks: true,
            zero_blocks: true,
            corner_sums: true,
            constant_term: true,
            violations: Vec::new(),
        }
    }

    pub fn all_pass(&self) -> bool {
        Relation::ALL.iter().all(|&r| self.passes(r))
    }

    pub fn passes(&self, relation: Relation) -> bool {
        match relation {
            Relation::ProductRelation => self.product_relation,
            Relation::TopCoefficient => self.top_coefficient,
            Relation::InteriorBlock => self.interior_blocks,
            Relation::ZeroBlock => self.zero_blocks,
            Relation::CornerSum => self.corner_sums,
            Relation::ConstantTerm => self.constant_term,
        }
    }

    fn fail(&mut self, v: Violation) {
        let flag = match v.relation {
            Relation::ProductRelation => &mut self.product_relation,
            Relation::TopCoefficient => &mut self.top_coefficient,
            Relation::InteriorBlock => &mut self.interior_blocks,
            Relation::ZeroBlock => &mut self.zero_blocks,
            Relation::CornerSum => &mut self.corner_sums,
            Relation::ConstantTerm => &mut self.constant_term,
        };
        *flag = false;
        self.violations.push(v);
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

/// Per-layer quantities derived from a descriptor.
struct Blocks {
    field: PrimeField,
    n: usize,
    /// `|S_i^c|` as a field element, never zero.
    comp_size: Vec<u8>,
    /// `Q_{S_i}(0)`.
    q_at_zero: Vec<u8>,
    /// `sum_{r in S_i^c} r^(p-1-k)` for `k` in `0..p`.
    power_sums: Vec<Vec<u8>>,
    /// `B_k = b_{k+1} - b_k` for `k = 1..n` (index `k-1`).
    steps: Vec<u8>,
    b1: u8,
    minus_one: u8,
}

impl Blocks {
    fn new(d: &NcfDescriptor) -> Result<Self> {
        if !d.is_nested() {
            return Err(NcfError::DegenerateDescriptor);
        }
        let field = d.field();
        let p = field.order();
        let comp_size = d.sets().iter().map(|s| field.from_usize(p - s.len(field))).collect();
        let q_at_zero = d.sets().iter().map(|s| u8::from(!s.contains(0))).collect();
        let power_sums = d
            .sets()
            .iter()
            .map(|s| {
                let comp = s.complement_members(field);
                (0..p)
                    .map(|k| {
                        comp.iter()
                            .fold(0u8, |acc, &r| field.add(acc, field.pow(r, (p - 1 - k) as u64)))
                    })
                    .collect()
            })
            .collect();
        let b = d.outputs();
        let steps = b.windows(2).map(|w| field.sub(w[1], w[0])).collect();
        Ok(Self {
            field,
            n: d.arity(),
            comp_size,
            q_at_zero,
            power_sums,
            steps,
            b1: b[0],
            minus_one: field.p() - 1,
        })
    }

    fn inv_comp(&self, layer: usize) -> u8 {
        self.field.inv(self.comp_size[layer]).expect("|S^c| is nonzero mod p")
    }

    /// Leading coefficient of `Q_{S_i}`: `(p-1)|S_i^c|`.
    fn lead(&self, layer: usize) -> u8 {
        self.field.mul(self.minus_one, self.comp_size[layer])
    }

    /// `C_[p-1] = B_n (p-1)^n prod |S_i^c|`.
    fn top(&self) -> u8 {
        let f = self.field;
        (0..self.n).fold(self.steps[self.n - 1], |acc, i| f.mul(acc, self.lead(i)))
    }

    /// Block coefficient over `C_[p-1]` for exponent `k` at `layer`.
    fn ratio(&self, layer: usize, k: usize, reading: Reading) -> u8 {
        let f = self.field;
        let p = f.order();
        if k == p - 1 {
            1
        } else if k == 0 {
            f.mul(f.mul(self.minus_one, self.inv_comp(layer)), self.q_at_zero[layer])
        } else {
            let base = f.mul(self.inv_comp(layer), self.power_sums[layer][k]);
            match reading {
                Reading::Corrected => base,
                Reading::Literal => f.mul(self.minus_one, base),
            }
        }
    }

    /// Corner value for the first `m` layers at exponent `p-1`, the rest at `0`.
    fn corner(&self, m: usize, reading: Reading) -> u8 {
        let f = self.field;
        let n = self.n;
        let head = (0..m).fold(1u8, |acc, i| f.mul(acc, self.lead(i)));
        let mu = n - m;
        let first = match reading {
            Reading::Corrected => 0,
            Reading::Literal => 1,
        };
        let mut sum = 0u8;
        for j in first..=mu {
            // B_{n-j}, layers m+1..n-j (1-based)
            let mut term = self.steps[n - j - 1];
            for i in m..n - j {
                let q = match reading {
                    Reading::Corrected => self.q_at_zero[i],
                    Reading::Literal => self.q_at_zero[j - 1],
                };
                term = f.mul(term, q);
            }
            sum = f.add(sum, term);
        }
        f.mul(head, sum)
    }

    fn constant(&self) -> u8 {
        let f = self.field;
        let mut acc = self.b1;
        let mut prefix = 1u8;
        for k in 0..self.n {
            prefix = f.mul(prefix, self.q_at_zero[k]);
            acc = f.add(acc, f.mul(self.steps[k], prefix));
        }
        acc
    }
}

/// Coefficient access in layer order.
struct LayerView<'a> {
    poly: &'a PolyR,
    sigma: &'a [usize],
}

impl LayerView<'_> {
    fn to_vars(&self, layer_exps: &[u8]) -> Vec<u8> {
        let mut vars = vec![0u8; layer_exps.len()];
        for (i, &e) in layer_exps.iter().enumerate() {
            vars[self.sigma[i]] = e;
        }
        vars
    }

    fn get(&self, layer_exps: &[u8]) -> u8 {
        let vars = self.to_vars(layer_exps);
        self.poly.coeffs()[index_of(self.poly.field(), vars.len(), &vars).expect("valid exponents")]
    }
}

/// Checks every relation for `poly` against descriptor `d`.
pub fn check_parametrization(poly: &PolyR, d: &NcfDescriptor, reading: Reading) -> Result<ParamReport> {
    if poly.arity() != d.arity() {
        return Err(NcfError::ArityMismatch {
            expected: d.arity(),
            found: poly.arity(),
        });
    }
    if poly.field() != d.field() {
        return Err(NcfError::InvalidDescriptor(format!(
            "descriptor is over {} but the polynomial is over {}",
            d.field(),
            poly.field()
        )));
    }
    let blocks = Blocks::new(d)?;
    let f = d.field();
    let p = f.order();
    let n = d.arity();
    let top_exp = (p - 1) as u8;
    let view = LayerView { poly, sigma: d.sigma() };
    let mut report = ParamReport::new(reading);

    let check = |report: &mut ParamReport, relation, layer_exps: &[u8], expected: Option<u8>, found: u8| {
        if expected != Some(found) {
            report.fail(Violation {
                relation,
                exponents: view.to_vars(layer_exps),
                expected,
                found,
            });
        }
    };

    let all_top = vec![top_exp; n];
    let top = view.get(&all_top);
    check(&mut report, Relation::TopCoefficient, &all_top, Some(blocks.top()), top);

    let block_at = |layer: usize, k: u8| {
        let mut e = all_top.clone();
        e[layer] = k;
        e
    };

    for layer in 0..n {
        for k in 1..p - 1 {
            let e = block_at(layer, k as u8);
            let expected = f.mul(blocks.ratio(layer, k, reading), top);
            check(&mut report, Relation::InteriorBlock, &e, Some(expected), view.get(&e));
        }
    }
    for layer in 0..n - 1 {
        let e = block_at(layer, 0);
        let expected = f.mul(blocks.ratio(layer, 0, reading), top);
        check(&mut report, Relation::ZeroBlock, &e, Some(expected), view.get(&e));
    }

    let corner_exps = |m: usize| -> Vec<u8> { (0..n).map(|i| if i < m { top_exp } else { 0 }).collect() };
    for m in 1..=n {
        let e = corner_exps(m);
        check(
            &mut report,
            Relation::CornerSum,
            &e,
            Some(blocks.corner(m, reading)),
            view.get(&e),
        );
    }

    // product relation over every nonzero exponent tuple
    let top_inv = f.inv(top).ok();
    for idx in 1..table_size(f, n) {
        let e = point_of(f, n, idx);
        let m = e.iter().rposition(|&x| x != 0).expect("nonzero tuple") + 1;
        let expected = top_inv.map(|ti| {
            let corner = view.get(&corner_exps(m));
            (0..m).fold(corner, |acc, j| f.mul(acc, f.mul(ti, view.get(&block_at(j, e[j])))))
        });
        check(&mut report, Relation::ProductRelation, &e, expected, view.get(&e));
    }

    // C^{p-1}_{[0]\{1}} * C^0_{[p-1]\{1}} = C_[p-1] (C_[0] - b_1); for n = 1 the zero
    // block is the constant itself, so its predicted value stands in.
    let zeros = vec![0u8; n];
    let constant = view.get(&zeros);
    let zero_block = if n >= 2 {
        view.get(&block_at(0, 0))
    } else {
        f.mul(blocks.ratio(0, 0, reading), top)
    };
    let lhs = f.mul(view.get(&corner_exps(1)), zero_block);
    let rhs = f.mul(top, f.sub(constant, blocks.b1));
    if lhs != rhs {
        // report the constant the relation would require, when it is determined
        let expected = top_inv.map(|ti| f.add(blocks.b1, f.mul(lhs, ti)));
        check(&mut report, Relation::ConstantTerm, &zeros, expected, constant);
    }

    Ok(report)
}

/// Relations that hold under the corrected reading but fail under the literal one.
pub fn literal_divergence(poly: &PolyR, d: &NcfDescriptor) -> Result<Vec<Relation>> {
    let corrected = check_parametrization(poly, d, Reading::Corrected)?;
    let literal = check_parametrization(poly, d, Reading::Literal)?;
    Ok(Relation::ALL
        .into_iter()
        .filter(|&r| corrected.passes(r) && !literal.passes(r))
        .collect())
}

/// Builds the polynomial of `d` directly from the closed-form coefficient relations.
pub fn coefficients_from_parameters(d: &NcfDescriptor) -> Result<PolyR> {
    let blocks = Blocks::new(d)?;
    let f = d.field();
    let p = f.order();
    let n = d.arity();
    let corners: Vec<u8> = (0..=n)
        .map(|m| {
            if m == 0 {
                0
            } else {
                blocks.corner(m, Reading::Corrected)
            }
        })
        .collect();
    let mut coeffs = vec![0u8; table_size(f, n)];
    let mut vars = vec![0u8; n];
    for idx in 0..coeffs.len() {
        let e = point_of(f, n, idx);
        let value = match e.iter().rposition(|&x| x != 0) {
            None => blocks.constant(),
            Some(last) => (0..=last).fold(corners[last + 1], |acc, j| {
                f.mul(acc, blocks.ratio(j, e[j] as usize, Reading::Corrected))
            }),
        };
        for (i, &x) in e.iter().enumerate() {
            vars[d.sigma()[i]] = x;
        }
        coeffs[index_of(f, n, &vars)?] = value;
    }
    debug_assert_eq!(p.pow(n as u32), coeffs.len());
    PolyR::from_coeffs(f, n, coeffs)
}
