//! Sparse multivariate polynomials with arbitrary-precision integer
//! coefficients.
//!
//! Variables come from the fixed ordered universe `b, c, x, y, s0, s1, ...`.
//! A [`Poly`] keeps its terms sorted in descending graded-lexicographic order
//! with no zero coefficients and no repeated monomials, so structural equality
//! is polynomial equality.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Arbitrary-precision signed integer.
pub type Int = BigInt;

/// A variable of the polynomial universe, in canonical order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    B,
    C,
    X,
    Y,
    S(u16),
}

impl Var {
    fn index(self) -> u16 {
        match self {
            Var::B => 0,
            Var::C => 1,
            Var::X => 2,
            Var::Y => 3,
            Var::S(i) => 4 + i,
        }
    }

    fn from_index(i: u16) -> Var {
        match i {
            0 => Var::B,
            1 => Var::C,
            2 => Var::X,
            3 => Var::Y,
            _ => Var::S(i - 4),
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::B => f.write_str("b"),
            Var::C => f.write_str("c"),
            Var::X => f.write_str("x"),
            Var::Y => f.write_str("y"),
            Var::S(i) => write!(f, "s{i}"),
        }
    }
}

impl FromStr for Var {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "b" => Ok(Var::B),
            "c" => Ok(Var::C),
            "x" => Ok(Var::X),
            "y" => Ok(Var::Y),
            _ => s
                .strip_prefix('s')
                .and_then(|rest| rest.parse::<u16>().ok())
                .filter(|&i| i < u16::MAX - 4)
                .map(Var::S)
                .ok_or_else(|| Error::Parse(format!("unknown variable `{s}`"))),
        }
    }
}

/// The ordered variable universe `{b, c, x, y, s0, ..., sN}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Universe {
    max_s: usize,
}

impl Default for Universe {
    fn default() -> Self {
        Universe { max_s: 32 }
    }
}

impl Universe {
    pub fn new(max_s: usize) -> Self {
        Universe { max_s }
    }

    pub fn max_s(&self) -> usize {
        self.max_s
    }

    pub fn contains(&self, v: Var) -> bool {
        match v {
            Var::S(i) => (i as usize) <= self.max_s,
            _ => true,
        }
    }

    /// The polynomial `s_i`.
    pub fn s(&self, i: usize) -> Result<Poly> {
        if i > self.max_s {
            return Err(Error::OutsideUniverse(i, self.max_s));
        }
        Ok(Poly::var(Var::S(i as u16)))
    }
}

/// A power product of variables, stored sparsely as `(variable index, exponent)`
/// pairs sorted by variable index.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial {
    degree: u32,
    powers: SmallVec<[(u16, u32); 4]>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(v: Var, exp: u32) -> Self {
        if exp == 0 {
            return Monomial::one();
        }
        let mut powers = SmallVec::new();
        powers.push((v.index(), exp));
        Monomial {
            degree: exp,
            powers,
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_one(&self) -> bool {
        self.powers.is_empty()
    }

    pub fn exponent(&self, v: Var) -> u32 {
        let idx = v.index();
        self.powers
            .iter()
            .find(|(i, _)| *i == idx)
            .map_or(0, |&(_, e)| e)
    }

    pub fn powers(&self) -> impl Iterator<Item = (Var, u32)> + '_ {
        self.powers.iter().map(|&(i, e)| (Var::from_index(i), e))
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut powers = SmallVec::with_capacity(self.powers.len() + other.powers.len());
        let (mut i, mut j) = (0, 0);
        while i < self.powers.len() && j < other.powers.len() {
            let (a, ea) = self.powers[i];
            let (b, eb) = other.powers[j];
            match a.cmp(&b) {
                Ordering::Less => {
                    powers.push((a, ea));
                    i += 1;
                }
                Ordering::Greater => {
                    powers.push((b, eb));
                    j += 1;
                }
                Ordering::Equal => {
                    powers.push((a, ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        powers.extend_from_slice(&self.powers[i..]);
        powers.extend_from_slice(&other.powers[j..]);
        Monomial {
            degree: self.degree + other.degree,
            powers,
        }
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if other.degree > self.degree {
            return None;
        }
        let mut powers = SmallVec::new();
        let mut j = 0;
        for &(v, e) in &self.powers {
            if j < other.powers.len() && other.powers[j].0 == v {
                let eo = other.powers[j].1;
                if eo > e {
                    return None;
                }
                if e > eo {
                    powers.push((v, e - eo));
                }
                j += 1;
            } else if j < other.powers.len() && other.powers[j].0 < v {
                return None;
            } else {
                powers.push((v, e));
            }
        }
        if j < other.powers.len() {
            return None;
        }
        Some(Monomial {
            degree: self.degree - other.degree,
            powers,
        })
    }
}

impl Ord for Monomial {
    /// Graded lexicographic with `b > c > x > y > s0 > s1 > ...`.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree.cmp(&other.degree).then_with(|| {
            for (&(va, ea), &(vb, eb)) in self.powers.iter().zip(other.powers.iter()) {
                if va != vb {
                    return vb.cmp(&va);
                }
                if ea != eb {
                    return ea.cmp(&eb);
                }
            }
            self.powers.len().cmp(&other.powers.len())
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Multivariate polynomial over the integers in canonical form.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    // descending monomial order, nonzero coefficients
    terms: Vec<(Monomial, Int)>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(1)
    }

    pub fn constant(c: impl Into<Int>) -> Self {
        Poly::from_int(c.into())
    }

    pub fn from_int(c: Int) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly {
                terms: vec![(Monomial::one(), c)],
            }
        }
    }

    pub fn var(v: Var) -> Self {
        Poly::monomial(Int::one(), Monomial::var(v, 1))
    }

    pub fn monomial(coef: Int, mono: Monomial) -> Self {
        if coef.is_zero() {
            Poly::zero()
        } else {
            Poly {
                terms: vec![(mono, coef)],
            }
        }
    }

    /// Builds a canonical polynomial from arbitrary (possibly repeated or zero) terms.
    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Int)>) -> Self {
        let mut terms: Vec<_> = terms.into_iter().collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        let mut out: Vec<(Monomial, Int)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc += c,
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Poly { terms: out }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    /// The integer value of a constant polynomial.
    pub fn as_constant(&self) -> Option<Int> {
        match self.terms.as_slice() {
            [] => Some(Int::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        match self.terms.as_slice() {
            [] => true,
            [(m, _)] => m.is_one(),
            _ => false,
        }
    }

    pub fn terms(&self) -> &[(Monomial, Int)] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Total degree; `None` stands for the `-inf` degree of the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.first().map(|(m, _)| m.degree())
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Int)> {
        self.terms.first().map(|(m, c)| (m, c))
    }

    /// Variables that occur with a positive exponent, in canonical order.
    pub fn variables(&self) -> Vec<Var> {
        let mut vars: Vec<Var> = self
            .terms
            .iter()
            .flat_map(|(m, _)| m.powers().map(|(v, _)| v))
            .collect();
        vars.sort();
        vars.dedup();
        vars
    }

    pub fn scale(&self, k: &Int) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    fn mul_monomial(&self, mono: &Monomial, k: &Int) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.mul(mono), c * k))
                .collect(),
        }
    }

    fn merge(&self, other: &Poly, negate_other: bool) -> Poly {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let a = &self.terms;
        let b = &other.terms;
        let take_b = |c: &Int| if negate_other { -c } else { c.clone() };
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((b[j].0.clone(), take_b(&b[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate_other {
                        &a[i].1 - &b[j].1
                    } else {
                        &a[i].1 + &b[j].1
                    };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|(m, c)| (m.clone(), take_b(c))));
        Poly { terms: out }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut result = Poly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Exact quotient `self / q` in the polynomial ring.
    pub fn exact_div(&self, q: &Poly) -> Result<Poly> {
        if q.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Poly::zero());
        }
        if let Some(k) = q.as_constant() {
            let mut terms = Vec::with_capacity(self.terms.len());
            for (m, c) in &self.terms {
                let (quo, rem) = c.div_rem(&k);
                if !rem.is_zero() {
                    return Err(Error::NotDivisible);
                }
                terms.push((m.clone(), quo));
            }
            return Ok(Poly { terms });
        }
        let (q_lm, q_lc) = q.leading_term().expect("nonzero divisor");
        let mut rem: BTreeMap<Monomial, Int> = self.terms.iter().cloned().collect();
        let mut quotient = Vec::new();
        while let Some((lm, lc)) = rem.pop_last() {
            let mono = lm.div(q_lm).ok_or(Error::NotDivisible)?;
            let (coef, r) = lc.div_rem(q_lc);
            if !r.is_zero() {
                return Err(Error::NotDivisible);
            }
            for (m, c) in q.terms.iter().skip(1) {
                let key = m.mul(&mono);
                let delta = c * &coef;
                match rem.get_mut(&key) {
                    Some(v) => {
                        *v -= delta;
                        if v.is_zero() {
                            rem.remove(&key);
                        }
                    }
                    None => {
                        rem.insert(key, -delta);
                    }
                }
            }
            quotient.push((mono, coef));
        }
        Ok(Poly { terms: quotient })
    }

    /// Formal partial derivative with respect to `v`.
    pub fn derivative(&self, v: Var) -> Poly {
        let idx = v.index();
        let terms = self.terms.iter().filter_map(|(m, c)| {
            let e = m.exponent(v);
            if e == 0 {
                return None;
            }
            let powers = m
                .powers
                .iter()
                .filter_map(|&(i, x)| match (i == idx, x) {
                    (true, 1) => None,
                    (true, x) => Some((i, x - 1)),
                    (false, x) => Some((i, x)),
                })
                .collect();
            Some((
                Monomial {
                    degree: m.degree - 1,
                    powers,
                },
                c * Int::from(e),
            ))
        });
        Poly::from_terms(terms)
    }

    /// Substitutes the bound variables; unbound ones stay symbolic.
    pub fn eval(&self, bindings: &[(Var, Poly)]) -> Poly {
        let mut acc = Vec::new();
        let mut cache: BTreeMap<(Var, u32), Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut rest = Monomial::one();
            let mut factor = Poly::constant(c.clone());
            for (v, e) in m.powers() {
                match bindings.iter().find(|(bv, _)| *bv == v) {
                    Some((_, value)) => {
                        let p = cache.entry((v, e)).or_insert_with(|| value.pow(e)).clone();
                        factor = &factor * &p;
                    }
                    None => rest = rest.mul(&Monomial::var(v, e)),
                }
            }
            acc.extend(factor.mul_monomial(&rest, &Int::one()).terms);
        }
        Poly::from_terms(acc)
    }

    pub fn eval_var(&self, v: Var, value: &Poly) -> Poly {
        self.eval(&[(v, value.clone())])
    }
}

impl From<i64> for Poly {
    fn from(c: i64) -> Self {
        Poly::constant(c)
    }
}

impl From<Int> for Poly {
    fn from(c: Int) -> Self {
        Poly::from_int(c)
    }
}

impl From<Var> for Poly {
    fn from(v: Var) -> Self {
        Poly::var(v)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.merge(rhs, false)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.merge(rhs, true)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        if let [(m, c)] = rhs.terms.as_slice() {
            return self.mul_monomial(m, c);
        }
        if let [(m, c)] = self.terms.as_slice() {
            return rhs.mul_monomial(m, c);
        }
        let mut terms = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                terms.push((ma.mul(mb), ca * cb));
            }
        }
        Poly::from_terms(terms)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(mut self) -> Poly {
        for (_, c) in &mut self.terms {
            *c = -std::mem::take(c);
        }
        self
    }
}

macro_rules! forward_owned {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr for Poly {
            type Output = Poly;
            fn $f(self, rhs: Poly) -> Poly { (&self).$f(&rhs) }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $f(self, rhs: &Poly) -> Poly { (&self).$f(rhs) }
        }
        impl $tr<Poly> for &Poly {
            type Output = Poly;
            fn $f(self, rhs: Poly) -> Poly { self.$f(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Poly> for Poly {
    fn sub_assign(&mut self, rhs: &Poly) {
        *self = &*self - rhs;
    }
}

impl std::iter::Sum for Poly {
    fn sum<I: Iterator<Item = Poly>>(iter: I) -> Poly {
        iter.fold(Poly::zero(), |acc, p| acc + p)
    }
}

impl std::iter::Product for Poly {
    fn product<I: Iterator<Item = Poly>>(iter: I) -> Poly {
        iter.fold(Poly::one(), |acc, p| acc * p)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            if c.is_negative() {
                f.write_str("-")?;
            } else if idx > 0 {
                f.write_str("+")?;
            }
            let abs = c.abs();
            let mut first = true;
            if m.is_one() || !abs.is_one() {
                write!(f, "{abs}")?;
                first = false;
            }
            for (v, e) in m.powers() {
                if !first {
                    f.write_str("*")?;
                }
                first = false;
                if e == 1 {
                    write!(f, "{v}")?;
                } else {
                    write!(f, "{v}^{e}")?;
                }
            }
        }
        Ok(())
    }
}

impl FromStr for Poly {
    type Err = Error;

    /// Parses the rendering produced by `Display` (sums of `coef*var^e*...`
    /// terms, no parentheses). Whitespace is ignored.
    fn from_str(s: &str) -> Result<Self> {
        let src: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if src.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut terms = Vec::new();
        let mut rest = src.as_str();
        while !rest.is_empty() {
            let (neg, body) = match rest.as_bytes()[0] {
                b'-' => (true, &rest[1..]),
                b'+' => (false, &rest[1..]),
                _ => (false, rest),
            };
            let end = body.find(['+', '-']).unwrap_or(body.len());
            let term = &body[..end];
            rest = &body[end..];
            if term.is_empty() {
                return Err(Error::Parse(format!("dangling sign in `{s}`")));
            }
            let mut coef = Int::one();
            let mut mono = Monomial::one();
            for factor in term.split('*') {
                if factor.is_empty() {
                    return Err(Error::Parse(format!("empty factor in `{s}`")));
                }
                if factor.as_bytes()[0].is_ascii_digit() {
                    let n: Int = factor
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad integer `{factor}`")))?;
                    coef *= n;
                } else {
                    let (name, exp) = match factor.split_once('^') {
                        Some((name, e)) => (
                            name,
                            e.parse::<u32>()
                                .map_err(|_| Error::Parse(format!("bad exponent `{e}`")))?,
                        ),
                        None => (factor, 1),
                    };
                    mono = mono.mul(&Monomial::var(name.parse()?, exp));
                }
            }
            if neg {
                coef = -coef;
            }
            terms.push((mono, coef));
        }
        Ok(Poly::from_terms(terms))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Poly {
        s.parse().unwrap()
    }

    #[test]
    fn additive_inverse_cancels() {
        let c = Poly::var(Var::C);
        assert!((&c + &(-&c)).is_zero());
    }

    #[test]
    fn difference_of_squares() {
        assert_eq!(p("c+1") * p("c-1"), p("c^2-1"));
    }

    #[test]
    fn catalan_like_a3_sum() {
        let sum = p("s0^3+2*s0") + p("s1");
        assert_eq!(sum.to_string(), "s0^3+2*s0+s1");
    }

    #[test]
    fn exact_division_cases() {
        assert_eq!(p("c^2-1").exact_div(&p("c-1")).unwrap(), p("c+1"));
        assert_eq!(Poly::zero().exact_div(&p("c+7")).unwrap(), Poly::zero());
        assert_eq!(p("c^2-4").exact_div(&p("c+1")), Err(Error::NotDivisible));
        assert_eq!(p("c").exact_div(&Poly::zero()), Err(Error::DivisionByZero));
        assert_eq!(p("6*b+4").exact_div(&p("2")).unwrap(), p("3*b+2"));
        assert_eq!(p("6*b+3").exact_div(&p("2")), Err(Error::NotDivisible));
    }

    #[test]
    fn multivariate_division() {
        let q = p("x^2+x*y+y^2");
        let r = p("x-y");
        assert_eq!((&q * &r).exact_div(&r).unwrap(), q);
        assert_eq!(p("y^3-x^3").exact_div(&p("y-x")).unwrap(), q);
    }

    #[test]
    fn derivatives() {
        assert_eq!(p("c^2-1").derivative(Var::C), p("2*c"));
        assert!(p("b^2").derivative(Var::C).is_zero());
        assert_eq!(p("c^3-2*c").derivative(Var::C), p("3*c^2-2"));
        assert_eq!(p("b*c^2+s3").derivative(Var::B), p("c^2"));
    }

    #[test]
    fn evaluation() {
        let a3 = p("s0^3+2*s0+s1");
        let v = a3.eval(&[(Var::S(0), 1.into()), (Var::S(1), 2.into())]);
        assert_eq!(v, Poly::constant(5));
        assert!(p("b^2-1").eval_var(Var::B, &1.into()).is_zero());
        assert_eq!(p("c^2-2").eval_var(Var::C, &3.into()), Poly::constant(7));
        assert_eq!(p("b*c+c").eval_var(Var::B, &p("c")), p("c^2+c"));
    }

    #[test]
    fn rendering_and_order() {
        assert_eq!(p("1-b^2").to_string(), "-b^2+1");
        assert_eq!(
            p("s1^2+2+3*s0^2+s0^4+2*s0*s1").to_string(),
            "s0^4+3*s0^2+2*s0*s1+s1^2+2"
        );
        assert_eq!(Poly::zero().to_string(), "0");
        assert_eq!(p("-1").to_string(), "-1");
        assert_eq!(p("x*y+x^2").to_string(), "x^2+x*y");
        assert_eq!(p("-2*b*c^3").to_string(), "-2*b*c^3");
    }

    #[test]
    fn universe_bounds() {
        let u = Universe::new(4);
        assert!(u.s(4).is_ok());
        assert_eq!(u.s(5), Err(Error::OutsideUniverse(5, 4)));
        assert!(u.contains(Var::B));
        assert!(!u.contains(Var::S(9)));
        assert_eq!(Universe::default().max_s(), 32);
    }

    #[test]
    fn degree_of_zero_is_none() {
        assert_eq!(Poly::zero().degree(), None);
        assert_eq!(p("b*c^2+1").degree(), Some(3));
    }

    #[test]
    fn parse_errors() {
        assert!("".parse::<Poly>().is_err());
        assert!("c+".parse::<Poly>().is_err());
        assert!("z".parse::<Poly>().is_err());
        assert!("c^x".parse::<Poly>().is_err());
    }
}
