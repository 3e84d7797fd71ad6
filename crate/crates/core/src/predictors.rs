//! Closed-form predictions for shifted Hankel determinants and the checkers
//! for the recurrences and quadratic identities they satisfy.
//!
//! Every claim compares an *actual* value computed by elimination with a
//! *predicted* value. For most claims the actual value is a single
//! determinant `D_{m,k,n}` and the prediction is a closed form in Fibonacci
//! and Lucas polynomials. A few claims relate determinants to each other
//! (backward shifts, recurrences, joint residues); their cell documentation
//! says what `actual` holds.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::admissible::{build_table, shift_spec, AdmissibleTable, TypeSpec};
use crate::arith::{Int, Poly, Var};
use crate::error::{Error, Result};
use crate::fib_lucas::{detect_period, fib, fib_seq, lucas, PERIOD_HORIZON};
use crate::hankel::det_seq;

/// Parity of an exponent of `-1`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct SignExponent(bool);

impl SignExponent {
    pub fn new(e: i64) -> Self {
        SignExponent(e.rem_euclid(2) == 1)
    }

    pub fn plus(self, e: i64) -> Self {
        SignExponent(self.0 ^ (e.rem_euclid(2) == 1))
    }

    pub fn is_negative(self) -> bool {
        self.0
    }

    pub fn apply(self, p: Poly) -> Poly {
        if self.0 {
            -p
        } else {
            p
        }
    }

    pub fn as_poly(self) -> Poly {
        self.apply(Poly::one())
    }
}

/// `C(n, 2) = n(n-1)/2`.
pub fn binom2(n: i64) -> i64 {
    n * (n - 1) / 2
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ClaimId {
    #[serde(rename = "THM1")]
    Thm1,
    #[serde(rename = "CONJ2")]
    Conj2,
    #[serde(rename = "THM3")]
    Thm3,
    #[serde(rename = "THM4")]
    Thm4,
    #[serde(rename = "CONJ5")]
    Conj5,
    #[serde(rename = "CONJ6")]
    Conj6,
    #[serde(rename = "EQ13")]
    Eq13,
    #[serde(rename = "EQ15")]
    Eq15,
    #[serde(rename = "EQ16")]
    Eq16,
    #[serde(rename = "EQ17")]
    Eq17,
    #[serde(rename = "EQ18")]
    Eq18,
    #[serde(rename = "CONJ7")]
    Conj7,
    #[serde(rename = "CONJ8")]
    Conj8,
    #[serde(rename = "CONJ9")]
    Conj9,
    #[serde(rename = "EQ31")]
    Eq31,
    #[serde(rename = "EQ32_33")]
    Eq32_33,
    #[serde(rename = "EQ53")]
    Eq53,
    #[serde(rename = "EQ54")]
    Eq54,
    #[serde(rename = "EQ56")]
    Eq56,
    #[serde(rename = "EQ57")]
    Eq57,
    #[serde(rename = "EQ58")]
    Eq58,
}

impl ClaimId {
    pub const ALL: [ClaimId; 21] = [
        ClaimId::Thm1,
        ClaimId::Conj2,
        ClaimId::Thm3,
        ClaimId::Thm4,
        ClaimId::Conj5,
        ClaimId::Conj6,
        ClaimId::Eq13,
        ClaimId::Eq15,
        ClaimId::Eq16,
        ClaimId::Eq17,
        ClaimId::Eq18,
        ClaimId::Conj7,
        ClaimId::Conj8,
        ClaimId::Conj9,
        ClaimId::Eq31,
        ClaimId::Eq32_33,
        ClaimId::Eq53,
        ClaimId::Eq54,
        ClaimId::Eq56,
        ClaimId::Eq57,
        ClaimId::Eq58,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ClaimId::Thm1 => "THM1",
            ClaimId::Conj2 => "CONJ2",
            ClaimId::Thm3 => "THM3",
            ClaimId::Thm4 => "THM4",
            ClaimId::Conj5 => "CONJ5",
            ClaimId::Conj6 => "CONJ6",
            ClaimId::Eq13 => "EQ13",
            ClaimId::Eq15 => "EQ15",
            ClaimId::Eq16 => "EQ16",
            ClaimId::Eq17 => "EQ17",
            ClaimId::Eq18 => "EQ18",
            ClaimId::Conj7 => "CONJ7",
            ClaimId::Conj8 => "CONJ8",
            ClaimId::Conj9 => "CONJ9",
            ClaimId::Eq31 => "EQ31",
            ClaimId::Eq32_33 => "EQ32_33",
            ClaimId::Eq53 => "EQ53",
            ClaimId::Eq54 => "EQ54",
            ClaimId::Eq56 => "EQ56",
            ClaimId::Eq57 => "EQ57",
            ClaimId::Eq58 => "EQ58",
        }
    }

    /// The shift `m` a claim is stated for, when it is not a free parameter.
    pub fn fixed_m(self) -> Option<i64> {
        match self {
            ClaimId::Thm3 | ClaimId::Conj7 | ClaimId::Eq17 | ClaimId::Eq18 => Some(0),
            ClaimId::Eq56 | ClaimId::Eq58 => Some(0),
            ClaimId::Thm4 | ClaimId::Conj8 | ClaimId::Eq57 => Some(1),
            ClaimId::Conj5 | ClaimId::Conj9 | ClaimId::Eq13 | ClaimId::Eq54 => Some(2),
            ClaimId::Eq32_33 => Some(-1),
            _ => None,
        }
    }
}

impl fmt::Display for ClaimId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ClaimId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let upper = s.to_ascii_uppercase();
        ClaimId::ALL
            .into_iter()
            .find(|c| c.as_str() == upper)
            .ok_or_else(|| Error::Parse(format!("unknown claim `{s}`")))
    }
}

/// One point of a claim's grid. The meaning of `(m, k, n)` is the claim's own
/// parametrization; see [`Claim::actual`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Cell {
    pub m: i64,
    pub k: usize,
    pub n: usize,
}

impl Cell {
    pub fn new(m: i64, k: usize, n: usize) -> Self {
        Cell { m, k, n }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Prediction {
    Value(Poly),
    /// The claim forces this value to vanish.
    Zero,
    NotCovered,
    /// The closed form could not be formed (e.g. a quotient that must be
    /// exact was not); always a counterexample.
    Invalid(String),
}

impl Prediction {
    pub fn value(&self) -> Option<Poly> {
        match self {
            Prediction::Value(p) => Some(p.clone()),
            Prediction::Zero => Some(Poly::zero()),
            _ => None,
        }
    }

    pub fn negated(self) -> Prediction {
        match self {
            Prediction::Value(p) => Prediction::Value(-p),
            other => other,
        }
    }
}

/// Lazily computed Hankel determinant sequences of one type.
#[derive(Debug)]
pub struct Determinants {
    spec: TypeSpec,
    table: Option<AdmissibleTable>,
    seqs: HashMap<(i64, usize), Vec<Poly>>,
}

impl Determinants {
    pub fn new(spec: TypeSpec) -> Self {
        Determinants {
            spec,
            table: None,
            seqs: HashMap::new(),
        }
    }

    pub fn spec(&self) -> &TypeSpec {
        &self.spec
    }

    fn table_with(&mut self, rows: usize) -> Result<&AdmissibleTable> {
        let have = self.table.as_ref().map_or(0, |t| t.rows());
        if self.table.is_none() || have < rows {
            let wanted = rows.max(have * 3 / 2);
            let table = match build_table(&self.spec, wanted) {
                Ok(t) => t,
                Err(Error::SpecTooShort(_)) if wanted > rows => build_table(&self.spec, rows)?,
                Err(e) => return Err(e),
            };
            self.table = Some(table);
        }
        Ok(self.table.as_ref().unwrap())
    }

    /// `D_{m,k,n}`.
    pub fn get(&mut self, m: i64, k: usize, n: usize) -> Result<Poly> {
        if let Some(v) = self.seqs.get(&(m, k)).and_then(|s| s.get(n)) {
            return Ok(v.clone());
        }
        let old = self.seqs.get(&(m, k)).map_or(0, Vec::len);
        let target = n.max(old + old / 4);
        let needed = (m + 2 * (target as i64 - 1)).max(0) as usize;
        let seq = match self.table_with(needed) {
            Ok(table) => det_seq(table, m, k, target)?,
            Err(Error::SpecTooShort(_)) if target > n => {
                let needed = (m + 2 * (n as i64 - 1)).max(0) as usize;
                det_seq(self.table_with(needed)?, m, k, n)?
            }
            Err(e) => return Err(e),
        };
        let v = seq.values[n].clone();
        self.seqs.insert((m, k), seq.values);
        Ok(v)
    }

    /// `D_{m,k,0..=n_max}`.
    pub fn seq(&mut self, m: i64, k: usize, n_max: usize) -> Result<Vec<Poly>> {
        self.get(m, k, n_max)?;
        Ok(self.seqs[&(m, k)][..=n_max].to_vec())
    }
}

/// Determinant sources a claim may consult for one type sequence.
#[derive(Debug)]
pub struct Evaluator {
    base: Determinants,
    shifted: Option<Determinants>,
    xy: Option<Determinants>,
}

impl Evaluator {
    pub fn new(spec: TypeSpec) -> Self {
        Evaluator {
            base: Determinants::new(spec),
            shifted: None,
            xy: None,
        }
    }

    pub fn spec(&self) -> &TypeSpec {
        self.base.spec()
    }

    pub fn det(&mut self, m: i64, k: usize, n: usize) -> Result<Poly> {
        self.base.get(m, k, n)
    }

    /// Determinants of the shifted type `Es`.
    pub fn det_shifted(&mut self, m: i64, k: usize, n: usize) -> Result<Poly> {
        if self.shifted.is_none() {
            self.shifted = Some(Determinants::new(shift_spec(self.base.spec())?));
        }
        self.shifted.as_mut().unwrap().get(m, k, n)
    }

    /// Determinants of the two-parameter `(x, y)` table.
    pub fn det_xy(&mut self, m: i64, k: usize, n: usize) -> Result<Poly> {
        self.xy
            .get_or_insert_with(|| Determinants::new(TypeSpec::XY))
            .get(m, k, n)
    }
}

/// The four lines relating `D_{-1,k,.}(1,c)` to `D_{1,k,.}(1,c)`, in print
/// order: two plain negations and two negated quotients by `c+2`.
#[derive(Clone, Copy, Debug)]
pub struct BackwardLine {
    pub label: &'static str,
    /// Left index is `p*(j + base_block + offset) + left_residue(k)`.
    base_block: usize,
    left: fn(usize) -> usize,
    right: fn(usize) -> usize,
    divide: bool,
}

pub const BACKWARD_LINES: [BackwardLine; 4] = [
    BackwardLine {
        label: "negation, residue 0",
        base_block: 1,
        left: |_| 0,
        right: |_| 0,
        divide: false,
    },
    BackwardLine {
        label: "negation, residue k+2",
        base_block: 0,
        left: |k| k + 2,
        right: |k| k,
        divide: false,
    },
    BackwardLine {
        label: "quotient, residue 1",
        base_block: 0,
        left: |_| 1,
        right: |k| 2 * k,
        divide: true,
    },
    BackwardLine {
        label: "quotient, residue k+1",
        base_block: 0,
        left: |k| k + 1,
        right: |k| k + 1,
        divide: true,
    },
];

impl BackwardLine {
    /// The `j` for which this line (anchored with `offset`) addresses left
    /// index `n`.
    fn block_for(&self, k: usize, offset: usize, n: usize) -> Option<usize> {
        let p = 2 * k + 1;
        let start = p * (self.base_block + offset) + (self.left)(k);
        (n >= start && (n - start).is_multiple_of(p)).then(|| (n - start) / p)
    }

    fn predict(&self, ev: &mut Evaluator, c: &Poly, k: usize, j: usize) -> Result<Prediction> {
        let p = 2 * k + 1;
        let rhs = -ev.det(1, k, p * j + (self.right)(k))?;
        if !self.divide {
            return Ok(Prediction::Value(rhs));
        }
        Ok(match rhs.exact_div(&(c + &Poly::constant(2))) {
            Ok(q) => Prediction::Value(q),
            Err(_) => Prediction::Invalid(format!("{} is not divisible by c+2", rhs)),
        })
    }

    /// Whether the line holds on every left index up to `n_max`.
    pub fn holds(&self, ev: &mut Evaluator, k: usize, offset: usize, n_max: usize) -> Result<bool> {
        let c = bc_parts(ev.spec())
            .map(|(_, c)| c)
            .ok_or(Error::Unsupported("non-(b,c) type"))?;
        for n in 0..=n_max {
            if let Some(j) = self.block_for(k, offset, n) {
                let pred = self.predict(ev, &c, k, j)?;
                if pred.value() != Some(ev.det(-1, k, n)?) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

fn constant_param(spec: &TypeSpec) -> Option<Poly> {
    match spec {
        TypeSpec::Constant(c) => Some(c.clone()),
        _ => None,
    }
}

fn bc_parts(spec: &TypeSpec) -> Option<(Poly, Poly)> {
    match spec {
        TypeSpec::BC { b, c } => Some((b.clone(), c.clone())),
        _ => None,
    }
}

fn bc_with_b(spec: &TypeSpec, b: i64) -> Option<Poly> {
    bc_parts(spec)
        .filter(|(bb, _)| *bb == Poly::constant(b))
        .map(|(_, c)| c)
}

fn int_value(p: &Poly) -> Option<Int> {
    p.as_constant()
}

fn at_least(c: &Poly, bound: i64) -> bool {
    // symbolic parameters stand for the whole claimed range
    int_value(c).is_none_or(|v| v >= Int::from(bound))
}

fn split(n: usize, p: usize) -> (usize, usize) {
    (n / p, n % p)
}

/// A claim together with the anchoring of the backward-shift lines, which is
/// only meaningful for [`ClaimId::Eq32_33`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Claim {
    pub id: ClaimId,
    pub backward_offsets: [usize; 4],
}

impl Claim {
    pub fn new(id: ClaimId) -> Self {
        Claim {
            id,
            backward_offsets: [0; 4],
        }
    }

    pub fn with_offsets(id: ClaimId, backward_offsets: [usize; 4]) -> Self {
        Claim {
            id,
            backward_offsets,
        }
    }

    /// Whether the type family matches the claim. Cells of a non-matching
    /// family are never covered.
    pub fn applies_to(&self, spec: &TypeSpec) -> bool {
        use ClaimId::*;
        match self.id {
            Thm1 => !matches!(spec, TypeSpec::XY),
            Conj2 | Thm3 | Thm4 | Conj5 | Conj6 | Eq13 | Eq53 | Eq54 | Eq58 => {
                matches!(spec, TypeSpec::Constant(_))
            }
            Eq15 => *spec == TypeSpec::constant(2),
            Eq16 | Eq17 | Eq18 => matches!(spec, TypeSpec::BC { .. }),
            Conj7 | Conj8 | Conj9 | Eq32_33 => bc_with_b(spec, 1).is_some(),
            Eq31 => *spec == TypeSpec::bc(-1, 2),
            Eq56 | Eq57 => matches!(spec, TypeSpec::XY),
        }
    }

    /// The computed side of a cell.
    ///
    /// * `THM1`: `D_{-m,0,n}(s)`; `CONJ2`: `D_{-m,k,n}(c)`.
    /// * `EQ31`: `D_{1-m,k,n+m+k}(-1,2)`.
    /// * `EQ17`: the recurrence combination starting at offset `n`.
    /// * `EQ18`: the left side `h_n h_{n-2k-2} - b^2 h_{n-1} h_{n-1-2k}`.
    /// * `CONJ9`: at the joint residue (`2k`) the combination on the left of
    ///   the joint relation.
    /// * `EQ58`: the `(x,y)` determinant specialized to `x+y = c`, `xy = 1`.
    /// * everything else: `D_{m,k,n}` of the cell's type.
    pub fn actual(&self, cell: &Cell, ev: &mut Evaluator) -> Result<Poly> {
        use ClaimId::*;
        let Cell { m, k, n } = *cell;
        match self.id {
            Thm1 | Conj2 => ev.det(-m, k, n),
            Eq31 => ev.det(1 - m, k, n + m as usize + k),
            Eq17 => {
                let b = bc_parts(ev.spec()).map(|(b, _)| b).unwrap_or_default();
                let coeffs = recurrence17_coefficients(k, &b)?;
                let mut acc = Poly::zero();
                for (i, coef) in coeffs.iter().enumerate().rev() {
                    if !coef.is_zero() {
                        acc += &(coef * &ev.det(0, k, n + i)?);
                    }
                }
                Ok(acc)
            }
            Eq18 if n >= 2 * k + 2 => {
                let b = bc_parts(ev.spec()).map(|(b, _)| b).unwrap_or_default();
                let h = |ev: &mut Evaluator, i: usize| ev.det(0, k, i);
                Ok(h(ev, n)? * h(ev, n - 2 * k - 2)?
                    - &b * &b * h(ev, n - 1)? * h(ev, n - 1 - 2 * k)?)
            }
            Conj9 => {
                let p = 2 * k + 1;
                let (j, r) = split(n, p);
                if k >= 1 && r == 2 * k {
                    let partner = if k == 1 {
                        Poly::one()
                    } else {
                        SignExponent::new(binom2(k as i64 - 1)).as_poly()
                    };
                    Ok(ev.det(2, k, n)? + partner * ev.det(2, k, p * j + k)?)
                } else {
                    ev.det(m, k, n)
                }
            }
            Eq58 => {
                let c = constant_param(ev.spec()).unwrap_or_else(|| Poly::var(Var::C));
                let raw = ev.det_xy(0, k, n)?;
                specialize_symmetric(&raw, &c, &Poly::one())
            }
            _ => ev.det(m, k, n),
        }
    }

    pub fn predict(&self, cell: &Cell, ev: &mut Evaluator) -> Result<Prediction> {
        if !self.applies_to(ev.spec()) {
            return Ok(Prediction::NotCovered);
        }
        if let Some(fixed) = self.id.fixed_m() {
            if cell.m != fixed {
                return Ok(Prediction::NotCovered);
            }
        }
        self.predict_inner(cell, ev, false)
    }

    /// For cells outside a claim's stated parameter range, the value the
    /// closed form would give there. Only `CONJ9` (at `c = 0`, `k >= 2`) has
    /// such cells.
    pub fn predict_outside_range(
        &self,
        cell: &Cell,
        ev: &mut Evaluator,
    ) -> Result<Option<Prediction>> {
        if self.id != ClaimId::Conj9 || !self.applies_to(ev.spec()) || cell.m != 2 {
            return Ok(None);
        }
        if matches!(self.predict(cell, ev)?, Prediction::NotCovered) {
            let p = self.predict_inner(cell, ev, true)?;
            if !matches!(p, Prediction::NotCovered) {
                return Ok(Some(p));
            }
        }
        Ok(None)
    }

    fn predict_inner(
        &self,
        cell: &Cell,
        ev: &mut Evaluator,
        ignore_range: bool,
    ) -> Result<Prediction> {
        use ClaimId::*;
        use Prediction::{NotCovered, Value, Zero};
        let Cell { m, k, n } = *cell;
        let ki = k as i64;
        Ok(match self.id {
            Thm1 => {
                if m < 0 || k != 0 {
                    NotCovered
                } else if n == 0 {
                    Value(Poly::one())
                } else if (n as i64) <= m {
                    Zero
                } else {
                    let d = ev.det_shifted(m, 0, n - m as usize - 1)?;
                    Value(SignExponent::new(binom2(m + 1)).apply(d))
                }
            }
            Conj2 => {
                if m < 0 {
                    NotCovered
                } else if n == 0 {
                    Value(Poly::one())
                } else if (n as i64) < m + ki + 1 {
                    Zero
                } else {
                    let d = ev.det(m, k, n - m as usize - k - 1)?;
                    Value(SignExponent::new(binom2(m + ki + 1)).apply(d))
                }
            }
            Thm3 => {
                let (j, r) = split(n, k + 1);
                if r == 0 {
                    Value(SignExponent::new(j as i64 * binom2(ki + 1)).as_poly())
                } else {
                    Zero
                }
            }
            Thm4 => {
                let c = constant_param(ev.spec()).unwrap();
                let (j, r) = split(n, k + 1);
                let base = SignExponent::new(j as i64 * binom2(ki + 1));
                let f = || fib(j + 1, &lucas(k + 1, &c));
                if r == 0 {
                    Value(base.apply(f()))
                } else if r == k {
                    Value(base.plus(binom2(ki)).apply(f()))
                } else {
                    Zero
                }
            }
            Conj5 => {
                if k == 0 {
                    return Ok(NotCovered);
                }
                let c = constant_param(ev.spec()).unwrap();
                let l = lucas(k + 1, &c);
                let fl = fib_seq(n / (k + 1) + 2, &l);
                let (j, r) = split(n, k + 1);
                let base = SignExponent::new(j as i64 * binom2(ki + 1));
                let sq = |i: usize| &fl[i] * &fl[i];
                if r == 0 {
                    Value(base.apply(sq(j + 1)))
                } else if r + 1 == k {
                    Value(base.plus(binom2(ki - 1)).apply(sq(j + 1)))
                } else if r == k {
                    let sum: Poly = (0..=j).map(|i| sq(i + 1)).sum();
                    let factor = fib(k + 1, &c).scale(&Int::from(k + 1));
                    Value(base.plus(binom2(ki)).apply(factor * sum))
                } else {
                    Zero
                }
            }
            Conj6 | Eq15 => {
                if m < 0 || m > ki + 1 {
                    return Ok(NotCovered);
                }
                let c = constant_param(ev.spec()).unwrap();
                let (j, r) = split(n, k + 1);
                if r != 0 {
                    return Ok(NotCovered);
                }
                let sign = SignExponent::new(j as i64 * binom2(ki + 1));
                let core = if self.id == Eq15 {
                    Poly::constant(j as i64 + 1).pow(m as u32)
                } else {
                    fib(j + 1, &lucas(k + 1, &c)).pow(m as u32)
                };
                Value(sign.apply(core))
            }
            Eq13 | Eq54 => {
                if k != 0 {
                    return Ok(NotCovered);
                }
                let c = constant_param(ev.spec()).unwrap();
                let f = fib_seq(n + 2, &c);
                let sum: Poly = if self.id == Eq13 {
                    (0..=n).map(|j| &f[j + 1] * &f[j + 1]).sum()
                } else {
                    (0..=n + 1).map(|j| &f[j] * &f[j]).sum()
                };
                Value(sum)
            }
            Eq53 => {
                if k != 0 {
                    return Ok(NotCovered);
                }
                let c = constant_param(ev.spec()).unwrap();
                match m {
                    0 => Value(Poly::one()),
                    1 => Value(fib(n + 1, &c)),
                    _ => NotCovered,
                }
            }
            Eq16 => {
                if k != 0 {
                    return Ok(NotCovered);
                }
                let (b, c) = bc_parts(ev.spec()).unwrap();
                let f = fib_seq(n + 2, &c);
                let g = |j: usize| &f[j + 1] + &(&b * &f[j]);
                match m {
                    0 => Value(Poly::one()),
                    1 => Value(g(n)),
                    2 => Value((0..=n).map(|j| g(j).pow(2)).sum()),
                    _ => NotCovered,
                }
            }
            Eq17 => {
                if !(1..=3).contains(&k) {
                    NotCovered
                } else {
                    Zero
                }
            }
            Eq18 => {
                if k == 0 || n < 2 * k + 2 {
                    return Ok(NotCovered);
                }
                let (b, _) = bc_parts(ev.spec()).unwrap();
                let h = ev.det(0, k, n - 1 - k)?;
                Value((Poly::one() - &b * &b) * &h * &h)
            }
            Conj7 => {
                if k == 0 {
                    return Ok(NotCovered);
                }
                let (_, r) = split(n, 2 * k + 1);
                if r == 0 {
                    Value(Poly::one())
                } else if r == k + 1 {
                    Value(SignExponent::new(binom2(ki + 1)).as_poly())
                } else {
                    Zero
                }
            }
            Conj8 => {
                if k == 0 {
                    return Ok(NotCovered);
                }
                let c = bc_with_b(ev.spec(), 1).unwrap();
                let (j, r) = split(n, 2 * k + 1);
                let l = lucas(2 * k + 1, &c);
                let lead = || fib(j, &l) + fib(j + 1, &l);
                let luc = || lucas(k, &c) + lucas(k + 1, &c);
                if r == 0 {
                    Value(lead())
                } else if r == k {
                    Value(SignExponent::new(binom2(ki)).apply(lead()))
                } else if r == k + 1 {
                    Value(SignExponent::new(binom2(ki + 1)).apply(luc() * fib(j + 1, &l)))
                } else if r == 2 * k {
                    Value(SignExponent::new(ki).apply(luc() * fib(j + 1, &l)))
                } else {
                    Zero
                }
            }
            Conj9 => self.predict_conj9(cell, ev, ignore_range)?,
            Eq31 => {
                if m < 0 {
                    return Ok(NotCovered);
                }
                let d = ev.det(m, k, n)?;
                Value(SignExponent::new(binom2(m + ki)).apply(d))
            }
            Eq32_33 => {
                if k == 0 || n == 0 {
                    return Ok(NotCovered);
                }
                let c = bc_with_b(ev.spec(), 1).unwrap();
                for (line, &offset) in BACKWARD_LINES.iter().zip(&self.backward_offsets) {
                    if let Some(j) = line.block_for(k, offset, n) {
                        return line.predict(ev, &c, k, j);
                    }
                }
                Zero
            }
            Eq56 | Eq57 => {
                let shift = if self.id == Eq56 { 0 } else { 1 };
                match xy_predict(shift, k, n) {
                    Ok(p) if p.is_zero() => Zero,
                    Ok(p) => Value(p),
                    Err(e) => Prediction::Invalid(e.to_string()),
                }
            }
            Eq58 => {
                let (j, r) = split(n, k + 1);
                if r == 0 {
                    Value(SignExponent::new(j as i64 * binom2(ki + 1)).as_poly())
                } else {
                    Zero
                }
            }
        })
    }

    fn predict_conj9(
        &self,
        cell: &Cell,
        ev: &mut Evaluator,
        ignore_range: bool,
    ) -> Result<Prediction> {
        use Prediction::{NotCovered, Value, Zero};
        let Cell { k, n, .. } = *cell;
        if k == 0 {
            return Ok(NotCovered);
        }
        let c = bc_with_b(ev.spec(), 1).unwrap();
        let in_range = if k == 1 {
            at_least(&c, 0)
        } else {
            at_least(&c, 1)
        };
        if !in_range && !ignore_range {
            return Ok(NotCovered);
        }
        let ki = k as i64;
        let p = 2 * k + 1;
        let (j, r) = split(n, p);
        let l = lucas(p, &c);
        let fj = fib(j, &l);
        let fj1 = fib(j + 1, &l);
        let lead_sq = (&fj + &fj1).pow(2);
        let c2 = (&c + &Poly::constant(2)).pow(2);
        let fdiff = fib(k + 1, &c) - fib(k, &c);
        let tail = &fj1 * &fj1 * c2 * fdiff.pow(2);
        Ok(if r == 0 {
            Value(lead_sq)
        } else if k == 1 {
            match r {
                1 => NotCovered,
                _ => Value(-tail),
            }
        } else if r + 1 == k {
            Value(SignExponent::new(binom2(ki - 1)).apply(lead_sq))
        } else if r == k + 1 {
            Value(SignExponent::new(binom2(ki + 1)).apply(tail))
        } else if r + 1 == 2 * k {
            Value(-tail)
        } else if r == k {
            NotCovered
        } else if r == 2 * k {
            let cv = Poly::var(Var::C);
            let dc = (fib(k + 1, &cv).derivative(Var::C) - fib(k, &cv).derivative(Var::C))
                .eval_var(Var::C, &c);
            Value(SignExponent::new(ki).apply(tail * dc))
        } else {
            Zero
        })
    }
}

/// Coefficients `(e_0, ..., e_{2^k})` of the order-`2^k` recurrence
/// `sum e_i h_{n+i} = 0` for `k = 1, 2, 3`.
pub fn recurrence17_coefficients(k: usize, b: &Poly) -> Result<Vec<Poly>> {
    let one = Poly::one;
    let b2 = b * b;
    let b3 = &b2 * b;
    Ok(match k {
        1 => vec![one(), b.clone(), one()],
        2 => vec![one(), one(), b2, one(), one()],
        3 => {
            let b3b = &b3 - b;
            vec![
                one(),
                -b,
                Poly::zero(),
                -&b3b,
                &(&b3 * b) + &b2 - Poly::constant(2),
                -&b3b,
                Poly::zero(),
                -b,
                one(),
            ]
        }
        _ => return Err(Error::Unsupported("recurrences beyond k = 3")),
    })
}

/// True iff `hseq` satisfies the order-`2^k` recurrence (symbolic in `b`)
/// at every offset the sequence length allows.
pub fn check_recurrence17(hseq: &[Poly], k: usize) -> Result<bool> {
    let coeffs = recurrence17_coefficients(k, &Poly::var(Var::B))?;
    let order = coeffs.len();
    Ok((0..=hseq.len().saturating_sub(order)).all(|n| {
        coeffs
            .iter()
            .enumerate()
            .map(|(i, e)| e * &hseq[n + i])
            .sum::<Poly>()
            .is_zero()
    }) || hseq.len() < order)
}

/// True iff `h_n h_{n-2k-2} - b^2 h_{n-1} h_{n-1-2k} = (1-b^2) h_{n-1-k}^2`
/// at every `n` with all indices available.
pub fn check_identity18(hseq: &[Poly], k: usize) -> bool {
    let b = Poly::var(Var::B);
    let b2 = &b * &b;
    let one_minus = Poly::one() - &b2;
    (2 * k + 2..hseq.len()).all(|n| {
        let lhs = &hseq[n] * &hseq[n - 2 * k - 2] - &b2 * &hseq[n - 1] * &hseq[n - 1 - 2 * k];
        let mid = &hseq[n - 1 - k];
        lhs == &one_minus * mid * mid
    })
}

/// `D_{0,k,n}(b,c)` for `n = 0..=n_max`, symbolic in `b`.
pub fn bc_column_determinants(k: usize, c: &Poly, n_max: usize) -> Result<Vec<Poly>> {
    let mut d = Determinants::new(TypeSpec::bc(Poly::var(Var::B), c.clone()));
    d.seq(0, k, n_max)
}

/// True iff `D_{0,k,n}(b,c)` (symbolic in `b`) agrees for `c = 0, 1, 2, 3`
/// and all `n <= rows`.
pub fn c_independence_check(k: usize, rows: usize) -> Result<bool> {
    let reference = bc_column_determinants(k, &Poly::zero(), rows)?;
    for c in 1..=3 {
        if bc_column_determinants(k, &Poly::constant(c), rows)? != reference {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The stated period of `(D_{0,k,n}(b,c))_n`: `2(k+1)` at `b = 0` and `2k+1`
/// at `b = +-1`.
pub fn stated_period(k: usize, b: i64) -> Option<usize> {
    match b {
        0 => Some(2 * (k + 1)),
        1 | -1 => Some(2 * k + 1),
        _ => None,
    }
}

/// Least periods of `(D_{0,k,n}(b,c))_{n < 64}` at `c = 2` and `c = 3`.
pub fn detected_periods_bc(k: usize, b: i64) -> Result<Vec<Option<usize>>> {
    [2, 3]
        .into_iter()
        .map(|c| {
            let mut d = Determinants::new(TypeSpec::bc(b, c));
            Ok(detect_period(&d.seq(0, k, PERIOD_HORIZON - 1)?))
        })
        .collect()
}

/// True iff the stated period is a period at both sampled `c`, i.e. the
/// detected least period divides it.
pub fn periodicity_check_bc(k: usize, b: i64) -> Result<bool> {
    let stated =
        stated_period(k, b).ok_or(Error::Unsupported("periodicity outside b in {0, 1, -1}"))?;
    Ok(detected_periods_bc(k, b)?
        .iter()
        .all(|p| p.is_some_and(|p| stated % p == 0)))
}

/// True iff `d_{n+p} = -d_n` for the stated period `p` at both sampled `c`.
pub fn antiperiod_holds(k: usize, b: i64) -> Result<bool> {
    let p = stated_period(k, b).ok_or(Error::Unsupported("periodicity outside b in {0, 1, -1}"))?;
    for c in [2, 3] {
        let seq = Determinants::new(TypeSpec::bc(b, c)).seq(0, k, PERIOD_HORIZON - 1)?;
        if (0..seq.len() - p).any(|i| seq[i + p] != -&seq[i]) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Closed forms of `det(c_{i+j+shift,k}(x,y))` of the given order.
pub fn xy_predict(shift: usize, k: usize, order: usize) -> Result<Poly> {
    let kk = k + 1;
    let (blocks, r) = split(order, kk);
    let ki = k as i64;
    let mi = blocks as i64;
    let x = Poly::var(Var::X);
    let y = Poly::var(Var::Y);
    let xy = &x * &y;
    let sign = SignExponent::new(mi * binom2(ki + 1));
    let xy_exp = (kk * kk) as i64 * binom2(mi);
    match shift {
        0 => Ok(if r == 0 {
            sign.apply(xy.pow(xy_exp as u32))
        } else {
            Poly::zero()
        }),
        1 => {
            let quotient = || -> Result<Poly> {
                let e = (kk * (blocks + 1)) as u32;
                (y.pow(e) - x.pow(e)).exact_div(&(y.pow(kk as u32) - x.pow(kk as u32)))
            };
            if r == 0 {
                Ok(sign.apply(xy.pow(xy_exp as u32) * quotient()?))
            } else if r == k {
                let e = xy_exp + mi * ki * (ki + 1);
                Ok(sign.plus(binom2(ki)).apply(xy.pow(e as u32) * quotient()?))
            } else {
                Ok(Poly::zero())
            }
        }
        _ => Err(Error::Unsupported("shifts other than 0 and 1")),
    }
}

/// Rewrites a symmetric polynomial in `x, y` through `x+y -> e1`,
/// `xy -> e2`.
pub fn specialize_symmetric(p: &Poly, e1: &Poly, e2: &Poly) -> Result<Poly> {
    let x = Poly::var(Var::X);
    let y = Poly::var(Var::Y);
    let sum = &x + &y;
    let prod = &x * &y;
    let mut rest = p.clone();
    let mut out = Poly::zero();
    while let Some((mono, coef)) = rest.leading_term() {
        let a = mono.exponent(Var::X);
        let b = mono.exponent(Var::Y);
        if a < b || mono.degree() != a + b {
            return Err(Error::Unsupported("non-symmetric polynomial in x, y"));
        }
        let coef = Poly::from_int(coef.clone());
        let basis = sum.pow(a - b) * prod.pow(b);
        out += &(&coef * &(e1.pow(a - b) * e2.pow(b)));
        rest -= &(&coef * &basis);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Poly {
        s.parse().unwrap()
    }

    fn predict(id: ClaimId, spec: TypeSpec, m: i64, k: usize, n: usize) -> Prediction {
        let mut ev = Evaluator::new(spec);
        Claim::new(id)
            .predict(&Cell::new(m, k, n), &mut ev)
            .unwrap()
    }

    #[test]
    fn sign_exponent_parity() {
        assert!(SignExponent::new(3).is_negative());
        assert!(!SignExponent::new(-2).is_negative());
        assert!(!SignExponent::new(1).plus(1).is_negative());
        assert_eq!(SignExponent::new(15).as_poly(), Poly::constant(-1));
        assert_eq!(binom2(6), 15);
        assert_eq!(binom2(0), 0);
    }

    #[test]
    fn claim_ids_round_trip() {
        for id in ClaimId::ALL {
            assert_eq!(id.as_str().parse::<ClaimId>().unwrap(), id);
        }
        assert!("THM9".parse::<ClaimId>().is_err());
        assert_eq!("conj6".parse::<ClaimId>().unwrap(), ClaimId::Conj6);
    }

    #[test]
    fn theorem3_example() {
        for c in [p("c"), Poly::constant(0), Poly::constant(5)] {
            let v = predict(ClaimId::Thm3, TypeSpec::Constant(c), 0, 2, 3);
            assert_eq!(v, Prediction::Value(Poly::constant(-1)));
        }
        assert_eq!(
            predict(ClaimId::Thm3, TypeSpec::constant(1), 0, 2, 4),
            Prediction::Zero
        );
    }

    #[test]
    fn theorem4_example() {
        let v = predict(ClaimId::Thm4, TypeSpec::constant(3), 1, 1, 2);
        assert_eq!(v, Prediction::Value(Poly::constant(-7)));
        let m = crate::matrix::Matrix::from_ints(&[&[1, 6], &[6, 29]]);
        assert_eq!(crate::hankel::det_cofactor(&m).unwrap(), Poly::constant(-7));
        let t = build_table(&TypeSpec::constant(3), 4).unwrap();
        assert_eq!(t.entry(2, 1).unwrap(), Poly::constant(6));
        assert_eq!(t.entry(3, 1).unwrap(), Poly::constant(29));
    }

    #[test]
    fn conjecture8_examples() {
        let spec = TypeSpec::bc(1, 3);
        let v = |n| {
            predict(ClaimId::Conj8, spec.clone(), 1, 1, n)
                .value()
                .unwrap()
        };
        assert_eq!(v(0), Poly::constant(1));
        assert_eq!(v(3), Poly::constant(19));
        assert_eq!(v(2), Poly::constant(-10));
    }

    #[test]
    fn eq15_example() {
        let v = predict(ClaimId::Eq15, TypeSpec::constant(2), 2, 1, 2);
        assert_eq!(v, Prediction::Value(Poly::constant(-4)));
    }

    #[test]
    fn eq16_example() {
        let v = predict(ClaimId::Eq16, TypeSpec::bc(p("b"), p("c")), 1, 0, 2);
        assert_eq!(v, Prediction::Value(p("c^2-1+b*c")));
    }

    #[test]
    fn out_of_family_is_not_covered() {
        assert_eq!(
            predict(ClaimId::Thm4, TypeSpec::bc(1, 3), 1, 1, 2),
            Prediction::NotCovered
        );
        assert_eq!(
            predict(ClaimId::Conj6, TypeSpec::constant(2), 4, 2, 3),
            Prediction::NotCovered
        );
        assert_eq!(
            predict(ClaimId::Thm3, TypeSpec::constant(2), 1, 2, 3),
            Prediction::NotCovered
        );
        assert_eq!(
            predict(ClaimId::Eq56, TypeSpec::constant(2), 0, 1, 2),
            Prediction::NotCovered
        );
    }

    #[test]
    fn recurrences_on_printed_lists() {
        let b = |s: &str| p(s);
        let h1 = [
            b("1"),
            b("0"),
            b("-1"),
            b("b"),
            b("1-b^2"),
            b("-2*b+b^3"),
            b("-1+3*b^2-b^4"),
            b("3*b-4*b^3+b^5"),
        ];
        assert!(check_recurrence17(&h1, 1).unwrap());
        let h2 = [
            b("1"),
            b("0"),
            b("0"),
            b("-1"),
            b("0"),
            b("b^2"),
            b("1-b^2"),
            b("b^2-b^4"),
            b("-3*b^2+2*b^4"),
            b("-1+3*b^2-3*b^4+b^6"),
        ];
        assert!(check_recurrence17(&h2, 2).unwrap());
        assert!(check_recurrence17(&vec![Poly::zero(); 6], 1).unwrap());
        let mut broken = h1.to_vec();
        broken[5] = b("b^3");
        assert!(!check_recurrence17(&broken, 1).unwrap());
        assert!(check_recurrence17(&h1, 4).is_err());
    }

    #[test]
    fn quadratic_identity_on_printed_list() {
        let h2: Vec<Poly> = [
            "1",
            "0",
            "0",
            "-1",
            "0",
            "b^2",
            "1-b^2",
            "b^2-b^4",
            "-3*b^2+2*b^4",
            "-1+3*b^2-3*b^4+b^6",
        ]
        .iter()
        .map(|s| p(s))
        .collect();
        assert!(check_identity18(&h2, 2));
        let h1 = bc_column_determinants(1, &Poly::zero(), 20).unwrap();
        assert!(check_identity18(&h1, 1));
    }

    #[test]
    fn quadratic_identity_at_b_zero() {
        for k in 1..=3 {
            let h = Determinants::new(TypeSpec::constant(0))
                .seq(0, k, 30)
                .unwrap();
            let ok = (2 * k + 2..h.len())
                .all(|n| &h[n] * &h[n - 2 * k - 2] == &h[n - 1 - k] * &h[n - 1 - k]);
            assert!(ok, "k={k}");
        }
    }

    #[test]
    fn c_independence_small() {
        assert!(c_independence_check(0, 8).unwrap());
        assert!(c_independence_check(1, 12).unwrap());
        assert!(c_independence_check(2, 12).unwrap());
    }

    #[test]
    fn periods() {
        assert_eq!(detected_periods_bc(1, 0).unwrap(), vec![Some(4), Some(4)]);
        assert_eq!(detected_periods_bc(1, 1).unwrap(), vec![Some(3), Some(3)]);
        assert_eq!(detected_periods_bc(2, 1).unwrap(), vec![Some(5), Some(5)]);
        assert!(periodicity_check_bc(1, 0).unwrap());
        assert!(periodicity_check_bc(2, 1).unwrap());
        assert!(periodicity_check_bc(1, 2).is_err());
        // at b = -1 the sign flips by (-1)^{kn}, so odd k only anti-repeats
        assert!(!periodicity_check_bc(1, -1).unwrap());
        assert!(antiperiod_holds(1, -1).unwrap());
        assert!(periodicity_check_bc(2, -1).unwrap());
        assert!(periodicity_check_bc(3, 0).unwrap());
    }

    #[test]
    fn xy_closed_forms() {
        assert!(xy_predict(0, 3, 0).unwrap().is_one());
        assert_eq!(xy_predict(0, 1, 2).unwrap(), Poly::constant(-1));
        assert_eq!(xy_predict(1, 0, 1).unwrap(), p("x+y"));
        assert!(xy_predict(1, 1, 1).unwrap().is_one());
        assert_eq!(xy_predict(1, 1, 3).unwrap(), p("-x^4*y^2-x^2*y^4"));
        assert!(xy_predict(2, 1, 3).is_err());
        let t = build_table(&TypeSpec::XY, 4).unwrap();
        let m = crate::hankel::hankel_matrix(&t, crate::hankel::HankelQuery::new(0, 1, 2)).unwrap();
        assert_eq!(crate::hankel::det_cofactor(&m).unwrap(), Poly::constant(-1));
        let m = crate::hankel::hankel_matrix(&t, crate::hankel::HankelQuery::new(1, 0, 1)).unwrap();
        assert_eq!(crate::hankel::det_cofactor(&m).unwrap(), p("x+y"));
    }

    #[test]
    fn symmetric_specialization() {
        let v = specialize_symmetric(&p("x^2+y^2"), &p("c"), &Poly::one()).unwrap();
        assert_eq!(v, p("c^2-2"));
        assert!(specialize_symmetric(&p("x"), &p("c"), &Poly::one()).is_err());
        let v = specialize_symmetric(&p("x^3*y+x*y^3"), &p("c"), &p("b")).unwrap();
        assert_eq!(v, p("c^2*b-2*b^2"));
    }

    #[test]
    fn backward_line_indices() {
        let l = BACKWARD_LINES[0];
        assert_eq!(l.block_for(1, 0, 3), Some(0));
        assert_eq!(l.block_for(1, 0, 0), None);
        let l = BACKWARD_LINES[2];
        assert_eq!(l.block_for(2, 0, 1), Some(0));
        assert_eq!(l.block_for(2, 1, 1), None);
        assert_eq!(l.block_for(2, 1, 6), Some(0));
    }
}
