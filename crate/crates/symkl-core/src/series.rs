//! Truncated integer power series with exact arithmetic.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// A finite prefix c[0..=order] of a formal power series with integer
/// coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSeriesZ {
    pub c: Vec<BigInt>,
}

impl PowerSeriesZ {
    pub fn new(c: Vec<BigInt>) -> Self {
        PowerSeriesZ { c }
    }

    pub fn one(order: usize) -> Self {
        let mut c = vec![BigInt::zero(); order + 1];
        c[0] = BigInt::one();
        PowerSeriesZ { c }
    }

    pub fn order(&self) -> usize {
        self.c.len() - 1
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.c.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn mul_trunc(&self, other: &Self, order: usize) -> Self {
        let mut c = vec![BigInt::zero(); order + 1];
        for (i, a) in self.c.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.c.iter().enumerate().take(order + 1 - i) {
                if b.is_zero() {
                    continue;
                }
                c[i + j] += a * b;
            }
        }
        PowerSeriesZ { c }
    }

    /// Multiply by (1 - x^e) in place, truncated to the current order.
    pub fn mul_one_minus_pow(&mut self, e: usize) {
        let n = self.c.len();
        for i in (e..n).rev() {
            let sub = self.c[i - e].clone();
            self.c[i] -= sub;
        }
    }

    /// Inverse series, requiring constant term +1 or -1.
    pub fn inverse_trunc(&self, order: usize) -> Result<Self> {
        if self.c.is_empty() || (!self.c[0].is_one() && self.c[0] != BigInt::from(-1)) {
            return Err(Error::InvalidParameter(
                "series inverse requires constant term +-1".into(),
            ));
        }
        let c0 = self.c[0].clone();
        let mut inv = vec![BigInt::zero(); order + 1];
        inv[0] = c0.clone(); // 1/c0 = c0 for c0 = +-1
        for m in 1..=order {
            let mut s = BigInt::zero();
            for i in 1..=m.min(self.c.len() - 1) {
                if self.c[i].is_zero() {
                    continue;
                }
                s += &self.c[i] * &inv[m - i];
            }
            // c0 * inv[m] + s = 0  =>  inv[m] = -s / c0 = -s * c0
            inv[m] = -(s * &c0);
        }
        Ok(PowerSeriesZ { c: inv })
    }

    /// self / den truncated; den must have constant term +-1 so the quotient
    /// stays integral.
    pub fn div_trunc(&self, den: &Self, order: usize) -> Result<Self> {
        let inv = den.inverse_trunc(order)?;
        Ok(self.mul_trunc(&inv, order))
    }

    /// Product prefix of (1 - x^e) over the given exponents.
    pub fn product_one_minus(exponents: impl IntoIterator<Item = usize>, order: usize) -> Self {
        let mut s = Self::one(order);
        for e in exponents {
            if e <= order {
                s.mul_one_minus_pow(e);
            }
        }
        s
    }

    /// Trailing run of zero coefficients at the end of the prefix.
    pub fn trailing_zeros(&self) -> usize {
        self.c.iter().rev().take_while(|c| c.is_zero()).count()
    }
}
