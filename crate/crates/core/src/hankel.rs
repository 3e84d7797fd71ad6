//! Shifted Hankel matrices `A_{m,k,n} = (a_{m+i+j,k})` of admissible-table
//! columns and their determinants.
//!
//! Determinants come from fraction-free (Bareiss) elimination. A single
//! elimination of the largest matrix yields every leading principal minor,
//! which is all a Hankel determinant sequence needs, since `A_{m,k,n}` is the
//! leading block of `A_{m,k,n+1}`. Cofactor expansion is kept as an
//! independent oracle for small orders.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::admissible::AdmissibleTable;
use crate::arith::{Poly, Series};
use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Largest order accepted by [`det_cofactor`].
pub const COFACTOR_MAX_ORDER: usize = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HankelQuery {
    pub m: i64,
    pub k: usize,
    pub n: usize,
}

impl HankelQuery {
    pub fn new(m: i64, k: usize, n: usize) -> Self {
        HankelQuery { m, k, n }
    }

    /// Largest row index the matrix reads.
    pub fn last_row(&self) -> i64 {
        self.m + 2 * (self.n as i64 - 1)
    }
}

/// `values[n] = D_{m,k,n}` for `0 <= n <= n_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DetSeq {
    pub m: i64,
    pub k: usize,
    pub values: Vec<Poly>,
}

pub fn hankel_matrix(table: &AdmissibleTable, q: HankelQuery) -> Result<Matrix> {
    if q.n > 0 && q.last_row() > table.rows() as i64 {
        return Err(Error::InsufficientRows {
            needed: q.last_row(),
            available: table.rows(),
        });
    }
    let k = q.k as i64;
    Ok(Matrix::from_fn(q.n, |i, j| {
        table
            .get(q.m + (i + j) as i64, k)
            .expect("row bound checked")
            .clone()
    }))
}

/// Laplace expansion along the first row; orders above
/// [`COFACTOR_MAX_ORDER`] are rejected.
pub fn det_cofactor(m: &Matrix) -> Result<Poly> {
    let n = m.order();
    if n > COFACTOR_MAX_ORDER {
        return Err(Error::TooLarge(n));
    }
    let cols: Vec<usize> = (0..n).collect();
    Ok(laplace(m, 0, &cols))
}

fn laplace(m: &Matrix, row: usize, cols: &[usize]) -> Poly {
    if cols.is_empty() {
        return Poly::one();
    }
    let mut acc = Poly::zero();
    for (pos, &c) in cols.iter().enumerate() {
        let entry = m.get(row, c);
        if entry.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let term = entry * &laplace(m, row + 1, &rest);
        if pos % 2 == 0 {
            acc += &term;
        } else {
            acc -= &term;
        }
    }
    acc
}

trait Ring: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn neg(&self) -> Self;
    /// `(a*d - b*c) / p`, exact.
    fn cross_div(a: &Self, d: &Self, b: &Self, c: &Self, p: &Self) -> Result<Self>;
}

impl Ring for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn neg(&self) -> Self {
        -self
    }
    fn cross_div(a: &Self, d: &Self, b: &Self, c: &Self, p: &Self) -> Result<Self> {
        let num = a * d - b * c;
        if p.is_one() {
            return Ok(num);
        }
        let (q, r) = num.div_rem(p);
        if !Zero::is_zero(&r) {
            return Err(Error::InternalNonExactDivision);
        }
        Ok(q)
    }
}

impl Ring for Poly {
    fn zero() -> Self {
        Poly::zero()
    }
    fn one() -> Self {
        Poly::one()
    }
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
    fn neg(&self) -> Self {
        -self
    }
    fn cross_div(a: &Self, d: &Self, b: &Self, c: &Self, p: &Self) -> Result<Self> {
        let ad = if a.is_zero() || d.is_zero() {
            Poly::zero()
        } else {
            a * d
        };
        let bc = if b.is_zero() || c.is_zero() {
            Poly::zero()
        } else {
            b * c
        };
        let num = &ad - &bc;
        if p.is_one() {
            return Ok(num);
        }
        num.exact_div(p)
            .map_err(|_| Error::InternalNonExactDivision)
    }
}

/// All leading principal minors `det M[0..n, 0..n]`, `n = 1..=N`, from one
/// Bareiss elimination of the full `N x N` matrix.
///
/// Zero pivots are replaced by the first lower row with a nonzero entry.
/// The `n`-minor is the Bareiss pivot candidate at step `n-1` provided no
/// earlier step pulled its pivot from a row `>= n`; otherwise the leading
/// block had a zero column in its own elimination and the minor is zero.
fn leading_minors<R: Ring>(n: usize, mut a: Vec<R>) -> Result<Vec<R>> {
    let mut minors = Vec::with_capacity(n);
    let mut prev = R::one();
    let mut negated = false;
    let mut max_pivot_row = 0usize;
    let idx = |i: usize, j: usize| i * n + j;
    for t in 0..n {
        let here = &a[idx(t, t)];
        if max_pivot_row <= t {
            minors.push(if negated { here.neg() } else { here.clone() });
        } else {
            minors.push(R::zero());
        }
        let Some(r) = (t..n).find(|&r| !a[idx(r, t)].is_zero()) else {
            minors.resize(n, R::zero());
            return Ok(minors);
        };
        if r != t {
            for j in 0..n {
                a.swap(idx(t, j), idx(r, j));
            }
            negated = !negated;
            max_pivot_row = max_pivot_row.max(r);
        }
        let pivot = a[idx(t, t)].clone();
        for i in t + 1..n {
            let lead = a[idx(i, t)].clone();
            for j in t + 1..n {
                let v = R::cross_div(&a[idx(i, j)], &pivot, &lead, &a[idx(t, j)], &prev)?;
                a[idx(i, j)] = v;
            }
            a[idx(i, t)] = R::zero();
        }
        prev = pivot;
    }
    Ok(minors)
}

fn as_integers(m: &Matrix) -> Option<Vec<BigInt>> {
    m.entries().iter().map(Poly::as_constant).collect()
}

/// Leading principal minors of orders `1..=m.order()`.
pub fn leading_principal_minors(m: &Matrix) -> Result<Vec<Poly>> {
    let n = m.order();
    match as_integers(m) {
        Some(ints) => Ok(leading_minors(n, ints)?
            .into_iter()
            .map(Poly::from_int)
            .collect()),
        None => leading_minors(n, m.entries().to_vec()),
    }
}

/// Determinant by fraction-free elimination in the polynomial ring.
pub fn det_fraction_free(m: &Matrix) -> Result<Poly> {
    Ok(leading_principal_minors(m)?.pop().unwrap_or_else(Poly::one))
}

/// `D_{m,k,n}` for `n = 0..=n_max`.
pub fn det_seq(table: &AdmissibleTable, m: i64, k: usize, n_max: usize) -> Result<DetSeq> {
    let mat = hankel_matrix(table, HankelQuery::new(m, k, n_max))?;
    let mut values = vec![Poly::one()];
    values.extend(leading_principal_minors(&mat)?);
    Ok(DetSeq { m, k, values })
}

/// `lambda T_r`: `(1, 0, ..., 0, lambda*seq[0], lambda*seq[1], ...)` with the
/// first `lambda` term at index `r`.
pub fn apply_shift_transform(seq: &[Poly], r: usize, lambda: &Poly) -> Vec<Poly> {
    assert!(r >= 1, "shift must be positive");
    let mut out = Vec::with_capacity(r + seq.len());
    out.push(Poly::one());
    out.extend(std::iter::repeat_n(Poly::zero(), r - 1));
    out.extend(seq.iter().map(|v| v * lambda));
    out
}

/// Desnanot-Jacobi:
/// `det A * det A_{1,n}^{1,n} = det A_1^1 det A_n^n - det A_1^n det A_n^1`.
pub fn condensation_check(m: &Matrix) -> Result<bool> {
    let n = m.order();
    if n > COFACTOR_MAX_ORDER {
        return Err(Error::TooLarge(n));
    }
    assert!(n >= 2, "condensation needs order >= 2");
    let last = n - 1;
    let lhs = det_cofactor(m)? * det_cofactor(&m.minor(&[0, last], &[0, last]))?;
    let rhs = det_cofactor(&m.minor(&[0], &[0]))? * det_cofactor(&m.minor(&[last], &[last]))?
        - det_cofactor(&m.minor(&[0], &[last]))? * det_cofactor(&m.minor(&[last], &[0]))?;
    Ok(lhs == rhs)
}

/// `v_k(n) = det A_{k-n,0,n}` for `n = k..=n_max` (index 0 of the result is
/// `v_k(k)`).
pub fn antidiag_seq(table: &AdmissibleTable, k: usize, n_max: usize) -> Result<Vec<Poly>> {
    (k..=n_max)
        .map(|n| {
            let mat = hankel_matrix(table, HankelQuery::new(k as i64 - n as i64, 0, n))?;
            det_fraction_free(&mat)
        })
        .collect()
}

/// Checks `(a(i+j-n)) (b(n-j-k)) = (c(i-k))` for `i, j, k = 0..=n`, with
/// all three sequences zero at negative indices.
pub fn triangular_product_check(a: &[Poly], b: &[Poly], c: &[Poly], n: usize) -> bool {
    let at = |s: &[Poly], i: i64| -> Poly {
        if i < 0 {
            Poly::zero()
        } else {
            s.get(i as usize).cloned().unwrap_or_default()
        }
    };
    let n_i = n as i64;
    let left = Matrix::from_fn(n + 1, |i, j| at(a, i as i64 + j as i64 - n_i));
    let right = Matrix::from_fn(n + 1, |j, k| at(b, n_i - j as i64 - k as i64));
    let target = Matrix::from_fn(n + 1, |i, k| at(c, i as i64 - k as i64));
    left.mul(&right) == target
}

/// Whether `sum a x^i * sum b x^i = sum c x^i` through `x^n`.
pub fn series_product_holds(a: &[Poly], b: &[Poly], c: &[Poly], n: usize) -> bool {
    let s = |v: &[Poly]| Series::new(v.to_vec(), n + 1);
    s(a).mul(&s(b)) == s(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::admissible::{build_table, TypeSpec};
    use crate::arith::Universe;

    fn p(s: &str) -> Poly {
        s.parse().unwrap()
    }

    fn ints(v: &[i64]) -> Vec<Poly> {
        v.iter().map(|&x| Poly::constant(x)).collect()
    }

    fn sym_table(rows: usize) -> AdmissibleTable {
        build_table(
            &TypeSpec::symbolic(rows + 1, &Universe::default()).unwrap(),
            rows,
        )
        .unwrap()
    }

    #[test]
    fn backward_shift_matrix_is_anti_triangular() {
        let t = sym_table(4);
        let m = hankel_matrix(&t, HankelQuery::new(-2, 0, 3)).unwrap();
        let expect = Matrix::from_rows(vec![
            vec![p("0"), p("0"), p("1")],
            vec![p("0"), p("1"), p("s0")],
            vec![p("1"), p("s0"), p("s0^2+1")],
        ]);
        assert_eq!(m, expect);
        assert_eq!(det_fraction_free(&m).unwrap(), Poly::constant(-1));
    }

    #[test]
    fn trivial_queries() {
        let t = sym_table(4);
        let m = hankel_matrix(&t, HankelQuery::new(0, 0, 1)).unwrap();
        assert_eq!(m, Matrix::identity(1));
        let z = hankel_matrix(&t, HankelQuery::new(-5, 0, 2)).unwrap();
        assert!(z.entries().iter().all(Poly::is_zero));
        assert_eq!(
            det_fraction_free(&Matrix::identity(0)).unwrap(),
            Poly::one()
        );
        assert!(matches!(
            hankel_matrix(&t, HankelQuery::new(2, 0, 3)),
            Err(Error::InsufficientRows { .. })
        ));
    }

    #[test]
    fn cofactor_basics() {
        let m = Matrix::from_rows(vec![vec![p("b"), p("c")], vec![p("x"), p("y")]]);
        assert_eq!(det_cofactor(&m).unwrap(), p("b*y-c*x"));
        assert_eq!(det_cofactor(&Matrix::identity(4)).unwrap(), Poly::one());
        assert_eq!(det_cofactor(&Matrix::identity(8)), Err(Error::TooLarge(8)));
    }

    #[test]
    fn worked_three_by_three() {
        let m = Matrix::from_rows(vec![
            vec![p("0"), p("1"), p("s0")],
            vec![p("1"), p("s0"), p("1+s0^2")],
            vec![p("s0"), p("1+s0^2"), p("2*s0+s0^3+s1")],
        ]);
        assert_eq!(det_cofactor(&m).unwrap(), p("-s1"));
        assert_eq!(det_fraction_free(&m).unwrap(), p("-s1"));
    }

    #[test]
    fn zero_column_and_pivoting() {
        let m = Matrix::from_ints(&[&[0, 0, 1], &[0, 0, 2], &[3, 4, 5]]);
        assert!(det_fraction_free(&m).unwrap().is_zero());
        let m = Matrix::from_ints(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]);
        assert_eq!(det_fraction_free(&m).unwrap(), Poly::constant(-1));
        let minors = leading_principal_minors(&m).unwrap();
        assert_eq!(minors, ints(&[0, -1, -1]));
    }

    #[test]
    fn leading_minors_match_individual_determinants() {
        let m = Matrix::from_ints(&[
            &[0, 2, 0, 1, 3],
            &[2, 0, 1, 0, 0],
            &[0, 1, 0, 0, 2],
            &[1, 0, 0, 0, 1],
            &[3, 0, 2, 1, 0],
        ]);
        let minors = leading_principal_minors(&m).unwrap();
        for n in 1..=5 {
            assert_eq!(minors[n - 1], det_cofactor(&m.leading(n)).unwrap(), "n={n}");
        }
    }

    #[test]
    fn backward_shift_determinants() {
        let t = sym_table(10);
        for m in 0..=6usize {
            let mat = hankel_matrix(&t, HankelQuery::new(-(m as i64), 0, m + 1)).unwrap();
            let sign = if (m * (m + 1) / 2) % 2 == 0 { 1 } else { -1 };
            assert_eq!(
                det_fraction_free(&mat).unwrap(),
                Poly::constant(sign),
                "m={m}"
            );
        }
    }

    #[test]
    fn catalan_like_gram_determinant() {
        let t = sym_table(18);
        for n in 0..=10 {
            let mat = hankel_matrix(&t, HankelQuery::new(0, 0, n)).unwrap();
            assert!(det_fraction_free(&mat).unwrap().is_one(), "n={n}");
        }
    }

    #[test]
    fn sequences_from_the_literature() {
        let t = build_table(&TypeSpec::constant(0), 40).unwrap();
        let d = det_seq(&t, 2, 3, 18).unwrap();
        assert_eq!(
            d.values,
            ints(&[1, 0, -1, 0, 4, 0, -4, 0, 9, 0, -9, 0, 16, 0, -16, 0, 25, 0, -25])
        );

        let mut s = vec![1];
        s.extend([0; 40]);
        let t = build_table(&TypeSpec::from_ints(&s), 40).unwrap();
        let d = det_seq(&t, -2, 0, 12).unwrap();
        assert_eq!(
            d.values,
            ints(&[1, 0, 0, -1, -1, -2, -2, -3, -3, -4, -4, -5, -5])
        );

        let t = build_table(&TypeSpec::bc(1, 3), 40).unwrap();
        let d = det_seq(&t, 1, 1, 8).unwrap();
        assert_eq!(d.values, ints(&[1, 1, -10, 19, 19, -180, 341, 341, -3230]));
    }

    #[test]
    fn shift_transform() {
        let t = build_table(&TypeSpec::constant(0), 40).unwrap();
        let d = det_seq(&t, 2, 3, 8).unwrap();
        let shifted = apply_shift_transform(&d.values, 6, &Poly::constant(-1));
        assert_eq!(
            &shifted[..13],
            ints(&[1, 0, 0, 0, 0, 0, -1, 0, 1, 0, -4, 0, 4]).as_slice()
        );
        assert_eq!(
            apply_shift_transform(&ints(&[1, 1, 1]), 1, &Poly::one()),
            ints(&[1, 1, 1, 1])
        );
        let d = det_seq(&t, 2, 0, 6).unwrap();
        assert_eq!(d.values, ints(&[1, 1, 2, 2, 3, 3, 4]));
        let shifted = apply_shift_transform(&d.values, 3, &Poly::constant(-1));
        assert_eq!(shifted, ints(&[1, 0, 0, -1, -1, -2, -2, -3, -3, -4]));
    }

    #[test]
    fn condensation_small_cases() {
        let m = Matrix::from_rows(vec![vec![p("b"), p("c")], vec![p("x"), p("y")]]);
        assert!(condensation_check(&m).unwrap());
        let t = sym_table(6);
        let h = hankel_matrix(&t, HankelQuery::new(0, 0, 3)).unwrap();
        assert!(condensation_check(&h).unwrap());
        let h = hankel_matrix(&t, HankelQuery::new(1, 1, 3)).unwrap();
        assert!(condensation_check(&h).unwrap());
    }

    #[test]
    fn antidiagonal_examples() {
        let t = sym_table(12);
        let v1 = antidiag_seq(&t, 1, 10).unwrap();
        for (i, v) in v1.iter().enumerate() {
            let n = i + 1;
            let sign = if (n * (n - 1) / 2) % 2 == 0 { 1 } else { -1 };
            assert_eq!(v, &Poly::constant(sign));
        }
        let v2 = antidiag_seq(&t, 2, 3).unwrap();
        assert_eq!(v2[1], p("-s1"));
    }

    #[test]
    fn triangular_product_instances() {
        let e = ints(&[1]);
        assert!(triangular_product_check(&e, &e, &e, 5));
        let spec = TypeSpec::symbolic(6, &Universe::default()).unwrap();
        let a = crate::admissible::generating_series(&spec, 5).unwrap();
        let b = a.inverse().unwrap();
        assert!(triangular_product_check(a.coeffs(), b.coeffs(), &e, 4));
        let a = ints(&[2, -1, 3, 0, 1, 4]);
        let b = ints(&[1, 1, -2, 5, 0, 2]);
        let c = Series::new(a.clone(), 6).mul(&Series::new(b.clone(), 6));
        assert!(triangular_product_check(&a, &b, c.coeffs(), 5));
        let mut wrong = c.coeffs().to_vec();
        wrong[3] = &wrong[3] + &Poly::one();
        assert!(!triangular_product_check(&a, &b, &wrong, 5));
        assert!(!series_product_holds(&a, &b, &wrong, 5));
    }
}
