//! Admissible matrices `a_{n,k}(s)`, their generating series and the
//! tridiagonal factorization `B_n = A_n J_n`.

use std::fmt;

use crate::arith::{Poly, Series, Universe, Var};
use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// The type sequence `s` driving the recurrence
/// `a_{n,k} = a_{n-1,k-1} + s_k a_{n-1,k} + w a_{n-1,k+1}`.
///
/// `w` (the up-weight) is `1` except for [`TypeSpec::XY`], where the diagonal
/// is `x+y` and `w = x*y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TypeSpec {
    General(Vec<Poly>),
    Constant(Poly),
    /// `s = (c+b, c, c, ...)`.
    BC {
        b: Poly,
        c: Poly,
    },
    XY,
}

impl TypeSpec {
    pub fn constant(c: impl Into<Poly>) -> Self {
        TypeSpec::Constant(c.into())
    }

    pub fn bc(b: impl Into<Poly>, c: impl Into<Poly>) -> Self {
        TypeSpec::BC {
            b: b.into(),
            c: c.into(),
        }
    }

    pub fn from_ints(s: &[i64]) -> Self {
        TypeSpec::General(s.iter().map(|&v| Poly::constant(v)).collect())
    }

    /// `(s0, s1, ..., s_{len-1})` as indeterminates.
    pub fn symbolic(len: usize, universe: &Universe) -> Result<Self> {
        Ok(TypeSpec::General(
            (0..len).map(|i| universe.s(i)).collect::<Result<_>>()?,
        ))
    }

    /// Diagonal weight `s_k`.
    pub fn diagonal(&self, k: usize) -> Result<Poly> {
        match self {
            TypeSpec::General(s) => s.get(k).cloned().ok_or(Error::SpecTooShort(k)),
            TypeSpec::Constant(c) => Ok(c.clone()),
            TypeSpec::BC { b, c } => Ok(if k == 0 { c + b } else { c.clone() }),
            TypeSpec::XY => Ok(Poly::var(Var::X) + Poly::var(Var::Y)),
        }
    }

    pub fn up_weight(&self) -> Poly {
        match self {
            TypeSpec::XY => Poly::var(Var::X) * Poly::var(Var::Y),
            _ => Poly::one(),
        }
    }

    /// True when every diagonal entry is an integer.
    pub fn is_numeric(&self) -> bool {
        match self {
            TypeSpec::General(s) => s.iter().all(Poly::is_constant),
            TypeSpec::Constant(c) => c.is_constant(),
            TypeSpec::BC { b, c } => b.is_constant() && c.is_constant(),
            TypeSpec::XY => false,
        }
    }

    /// `-s`, entrywise.
    pub fn negate(&self) -> Result<TypeSpec> {
        match self {
            TypeSpec::General(s) => Ok(TypeSpec::General(s.iter().map(|v| -v).collect())),
            TypeSpec::Constant(c) => Ok(TypeSpec::Constant(-c)),
            TypeSpec::BC { b, c } => Ok(TypeSpec::BC { b: -b, c: -c }),
            TypeSpec::XY => Err(Error::Unsupported("negating the (x,y) type")),
        }
    }
}

impl fmt::Display for TypeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeSpec::General(s) => {
                let items: Vec<String> = s.iter().map(Poly::to_string).collect();
                write!(f, "general({})", items.join(","))
            }
            TypeSpec::Constant(c) => write!(f, "const(c={c})"),
            TypeSpec::BC { b, c } => write!(f, "bc(b={b},c={c})"),
            TypeSpec::XY => f.write_str("xy"),
        }
    }
}

/// Left shift `Es = (s1, s2, ...)`.
pub fn shift_spec(spec: &TypeSpec) -> Result<TypeSpec> {
    match spec {
        TypeSpec::General(s) => Ok(TypeSpec::General(s.iter().skip(1).cloned().collect())),
        TypeSpec::Constant(c) => Ok(TypeSpec::Constant(c.clone())),
        TypeSpec::BC { c, .. } => Ok(TypeSpec::Constant(c.clone())),
        TypeSpec::XY => Err(Error::Unsupported("shifting the (x,y) type")),
    }
}

/// Triangle `a_{n,k}` for `0 <= k <= n <= rows`.
#[derive(Clone, Debug)]
pub struct AdmissibleTable {
    spec: TypeSpec,
    rows: usize,
    entries: Vec<Vec<Poly>>,
}

static ZERO: std::sync::OnceLock<Poly> = std::sync::OnceLock::new();

fn zero_ref() -> &'static Poly {
    ZERO.get_or_init(Poly::zero)
}

impl AdmissibleTable {
    pub fn spec(&self) -> &TypeSpec {
        &self.spec
    }

    /// Largest row index stored.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// `a_{n,k}` with the zero convention outside the triangle (including all
    /// negative `n`).
    pub fn entry(&self, n: i64, k: i64) -> Result<Poly> {
        self.get(n, k).cloned()
    }

    pub(crate) fn get(&self, n: i64, k: i64) -> Result<&Poly> {
        if n > self.rows as i64 {
            return Err(Error::OutOfRange {
                requested: n,
                bound: self.rows,
            });
        }
        if n < 0 || k < 0 || k > n {
            return Ok(zero_ref());
        }
        Ok(&self.entries[n as usize][k as usize])
    }

    pub fn row(&self, n: usize) -> &[Poly] {
        &self.entries[n]
    }

    /// `(a_{0,k}, a_{1,k}, ..., a_{rows,k})`.
    pub fn column(&self, k: usize) -> Vec<Poly> {
        (0..=self.rows)
            .map(|n| self.get(n as i64, k as i64).unwrap().clone())
            .collect()
    }
}

pub fn build_table(spec: &TypeSpec, rows: usize) -> Result<AdmissibleTable> {
    let weight = spec.up_weight();
    let diag: Vec<Poly> = (0..rows).map(|k| spec.diagonal(k)).collect::<Result<_>>()?;
    let mut entries: Vec<Vec<Poly>> = Vec::with_capacity(rows + 1);
    entries.push(vec![Poly::one()]);
    for n in 1..=rows {
        let prev = &entries[n - 1];
        let row: Vec<Poly> = (0..=n)
            .map(|k| {
                let mut v = if k >= 1 {
                    prev[k - 1].clone()
                } else {
                    Poly::zero()
                };
                if k < prev.len() && !prev[k].is_zero() {
                    v += &(&diag[k] * &prev[k]);
                }
                if k + 1 < prev.len() && !prev[k + 1].is_zero() {
                    if weight.is_one() {
                        v += &prev[k + 1];
                    } else {
                        v += &(&weight * &prev[k + 1]);
                    }
                }
                v
            })
            .collect();
        entries.push(row);
    }
    Ok(AdmissibleTable {
        spec: spec.clone(),
        rows,
        entries,
    })
}

/// Checks `a_{n,k}(-s) = (-1)^{n-k} a_{n,k}(s)` for all `n <= rows`.
pub fn negate_type_check(spec: &TypeSpec, rows: usize) -> Result<bool> {
    let plain = build_table(spec, rows)?;
    let negated = build_table(&spec.negate()?, rows)?;
    for n in 0..=rows {
        for k in 0..=n {
            let a = &plain.row(n)[k];
            let expect = if (n - k) % 2 == 0 { a.clone() } else { -a };
            if negated.row(n)[k] != expect {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `A(x, s) = sum a_n(s) x^n` modulo `x^order`, via the nested continued
/// fraction `A(x, s) = 1 / (1 - s0 x - x^2 A(x, Es))`.
pub fn generating_series(spec: &TypeSpec, order: usize) -> Result<Series> {
    if matches!(spec, TypeSpec::XY) {
        return Err(Error::Unsupported("generating series of the (x,y) type"));
    }
    series_level(spec, 0, order)
}

fn series_level(spec: &TypeSpec, level: usize, order: usize) -> Result<Series> {
    // level L only reaches coefficients of x^{2L} and beyond
    if 2 * level >= order {
        return Ok(Series::one(order));
    }
    let inner = series_level(spec, level + 1, order)?;
    let s = spec.diagonal(level)?;
    let mut denom = inner.shift(2).scale(&Poly::constant(-1));
    let mut coeffs = denom.coeffs().to_vec();
    coeffs[0] = &coeffs[0] + &Poly::one();
    if order > 1 {
        coeffs[1] = &coeffs[1] - &s;
    }
    denom = Series::new(coeffs, order);
    denom.inverse()
}

/// Column `k` of a constant-type table against `x^k A(x,c)^{k+1}`.
pub fn column_series_check(spec: &TypeSpec, k: usize, order: usize) -> Result<bool> {
    if !matches!(spec, TypeSpec::Constant(_)) {
        return Err(Error::Unsupported("column series outside constant type"));
    }
    let a = generating_series(spec, order)?;
    let expected = a.pow(k as u32 + 1).shift(k);
    let table = build_table(spec, order.saturating_sub(1))?;
    Ok((0..order).all(|n| table.get(n as i64, k as i64).unwrap() == &expected.coeff(n)))
}

/// Tridiagonal `J_n` with `s_0..s_{n-1}` on the diagonal and ones beside it.
pub fn jacobi_matrix(spec: &TypeSpec, n: usize) -> Result<Matrix> {
    if matches!(spec, TypeSpec::XY) {
        return Err(Error::Unsupported("jacobi matrix of the (x,y) type"));
    }
    let diag: Vec<Poly> = (0..n).map(|i| spec.diagonal(i)).collect::<Result<_>>()?;
    Ok(Matrix::from_fn(n, |i, j| {
        if i == j {
            diag[i].clone()
        } else if i.abs_diff(j) == 1 {
            Poly::one()
        } else {
            Poly::zero()
        }
    }))
}

/// Verifies `A_n A_n^T = (a_{i+j,0})` and `A_n J_n = (a_{i+1,j})`.
pub fn factorization_check(spec: &TypeSpec, n: usize) -> Result<bool> {
    if matches!(spec, TypeSpec::XY) {
        return Err(Error::Unsupported("factorization of the (x,y) type"));
    }
    let table = build_table(spec, (2 * n).saturating_sub(1).max(n))?;
    let at = |i: usize, j: usize| table.get(i as i64, j as i64).unwrap().clone();
    let a = Matrix::from_fn(n, at);
    let gram = Matrix::from_fn(n, |i, j| at(i + j, 0));
    let shifted = Matrix::from_fn(n, |i, j| at(i + 1, j));
    let j = jacobi_matrix(spec, n)?;
    Ok(a.mul(&a.transpose()) == gram && a.mul(&j) == shifted)
}
