//! Truncated formal power series with polynomial coefficients.

use crate::arith::Poly;
use crate::error::{Error, Result};

/// `coeffs[i]` is the coefficient of `x^i`; the series is known modulo
/// `x^order` where `order == coeffs.len()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    coeffs: Vec<Poly>,
}

impl Series {
    /// Pads with zeros or truncates to exactly `order` coefficients.
    pub fn new(mut coeffs: Vec<Poly>, order: usize) -> Self {
        coeffs.resize(order, Poly::zero());
        Series { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Series::new(Vec::new(), order)
    }

    pub fn one(order: usize) -> Self {
        Series::new(vec![Poly::one()], order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Poly> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Poly {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    fn common_order(&self, other: &Series) -> usize {
        self.order().min(other.order())
    }

    pub fn add(&self, other: &Series) -> Series {
        let n = self.common_order(other);
        Series {
            coeffs: (0..n).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect(),
        }
    }

    pub fn sub(&self, other: &Series) -> Series {
        let n = self.common_order(other);
        Series {
            coeffs: (0..n).map(|i| &self.coeffs[i] - &other.coeffs[i]).collect(),
        }
    }

    pub fn scale(&self, k: &Poly) -> Series {
        Series {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    /// Multiplication by `x^k`, keeping the order.
    pub fn shift(&self, k: usize) -> Series {
        let n = self.order();
        let mut coeffs = vec![Poly::zero(); k.min(n)];
        coeffs.extend(self.coeffs.iter().take(n.saturating_sub(k)).cloned());
        Series { coeffs }
    }

    /// Truncated product; coefficient `i` only reads coefficients `0..=i`.
    pub fn mul(&self, other: &Series) -> Series {
        let n = self.common_order(other);
        let coeffs = (0..n)
            .map(|i| {
                (0..=i)
                    .filter(|&j| !self.coeffs[j].is_zero() && !other.coeffs[i - j].is_zero())
                    .map(|j| &self.coeffs[j] * &other.coeffs[i - j])
                    .sum()
            })
            .collect();
        Series { coeffs }
    }

    pub fn pow(&self, e: u32) -> Series {
        (0..e).fold(Series::one(self.order()), |acc, _| acc.mul(self))
    }

    /// Multiplicative inverse; requires constant term 1.
    pub fn inverse(&self) -> Result<Series> {
        if self.order() == 0 {
            return Ok(Series::zero(0));
        }
        if !self.coeffs[0].is_one() {
            return Err(Error::NotInvertible);
        }
        let n = self.order();
        let mut inv: Vec<Poly> = Vec::with_capacity(n);
        inv.push(Poly::one());
        for i in 1..n {
            let acc: Poly = (1..=i)
                .filter(|&j| !self.coeffs[j].is_zero() && !inv[i - j].is_zero())
                .map(|j| &self.coeffs[j] * &inv[i - j])
                .sum();
            inv.push(-acc);
        }
        Ok(Series { coeffs: inv })
    }

    pub fn is_one(&self) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(i, c)| if i == 0 { c.is_one() } else { c.is_zero() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(vals: &[i64], order: usize) -> Series {
        Series::new(vals.iter().map(|&v| Poly::constant(v)).collect(), order)
    }

    #[test]
    fn inverse_of_one() {
        assert_eq!(Series::one(6).inverse().unwrap(), Series::one(6));
    }

    #[test]
    fn inverse_rejects_bad_constant() {
        assert_eq!(s(&[2, 1], 4).inverse(), Err(Error::NotInvertible));
        assert_eq!(s(&[0, 1], 4).inverse(), Err(Error::NotInvertible));
    }

    #[test]
    fn geometric_series() {
        let inv = s(&[1, -1], 8).inverse().unwrap();
        assert_eq!(inv, s(&[1, 1, 1, 1, 1, 1, 1, 1], 8));
    }

    #[test]
    fn shift_truncates() {
        assert_eq!(s(&[1, 2, 3], 3).shift(2), s(&[0, 0, 1], 3));
        assert_eq!(s(&[1, 2, 3], 3).shift(5), s(&[], 3));
    }

    #[test]
    fn product_respects_truncation() {
        let f = s(&[1, 1], 3);
        assert_eq!(f.mul(&f), s(&[1, 2, 1], 3));
        assert_eq!(f.pow(3), s(&[1, 3, 3], 3));
        assert_eq!(f.mul(&s(&[1], 2)).order(), 2);
    }
}
