//! Integer polynomials (constant coefficient first) and rational functions
//! in 1 + T Z[T], with exact division and gcd over the rationals.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::series::PowerSeriesZ;

/// Polynomial with integer coefficients, low degree first.
#[derive(Clone, PartialEq, Eq)]
pub struct IntPoly {
    pub c: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut c: Vec<BigInt>) -> Self {
        while c.len() > 1 && c.last().map(|x| x.is_zero()).unwrap_or(false) {
            c.pop();
        }
        if c.is_empty() {
            c.push(BigInt::zero());
        }
        IntPoly { c }
    }

    pub fn one() -> Self {
        IntPoly {
            c: vec![BigInt::one()],
        }
    }

    pub fn zero() -> Self {
        IntPoly {
            c: vec![BigInt::zero()],
        }
    }

    /// 1 - s*T
    pub fn one_minus(s: BigInt) -> Self {
        IntPoly {
            c: vec![BigInt::one(), -s],
        }
    }

    /// 1 + s*T
    pub fn one_plus(s: BigInt) -> Self {
        IntPoly {
            c: vec![BigInt::one(), s],
        }
    }

    pub fn degree(&self) -> usize {
        self.c.len() - 1
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0].is_one()
    }

    pub fn is_zero(&self) -> bool {
        self.c.len() == 1 && self.c[0].is_zero()
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.c.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Constant term is 1, as required of every L-factor.
    pub fn in_one_plus_t_z(&self) -> bool {
        self.c[0].is_one()
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut c = vec![BigInt::zero(); self.c.len() + other.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        IntPoly::new(c)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Exact polynomial division; an error means self is not a multiple of
    /// other.
    pub fn div_exact(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::InexactDivision("division by zero polynomial".into()));
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        if self.degree() < other.degree() {
            return Err(Error::InexactDivision(
                "degree of dividend below divisor".into(),
            ));
        }
        // long division over Q, then integrality check
        let mut rem: Vec<BigRational> = self
            .c
            .iter()
            .map(|x| BigRational::from_integer(x.clone()))
            .collect();
        let dd = other.degree();
        let lead = BigRational::from_integer(other.c[dd].clone());
        let qdeg = self.degree() - dd;
        let mut q = vec![BigRational::zero(); qdeg + 1];
        for k in (0..=qdeg).rev() {
            let t = &rem[k + dd] / &lead;
            if !t.is_zero() {
                for (j, b) in other.c.iter().enumerate() {
                    let sub = &t * BigRational::from_integer(b.clone());
                    rem[k + j] -= sub;
                }
            }
            q[k] = t;
        }
        if rem.iter().any(|r| !r.is_zero()) {
            return Err(Error::InexactDivision(format!(
                "{} does not divide {}",
                other, self
            )));
        }
        let mut out = Vec::with_capacity(q.len());
        for r in q {
            if !r.is_integer() {
                return Err(Error::InexactDivision(
                    "quotient has non-integer coefficients".into(),
                ));
            }
            out.push(r.to_integer());
        }
        Ok(IntPoly::new(out))
    }

    pub fn derivative(&self) -> Self {
        if self.degree() == 0 {
            return Self::zero();
        }
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, a)| a * BigInt::from(i))
            .collect();
        IntPoly::new(c)
    }

    /// Primitive gcd with the sign normalized so the lowest nonzero
    /// coefficient is positive.
    pub fn gcd(&self, other: &Self) -> Self {
        // Euclid over Q, then primitive part.
        let mut a: Vec<BigRational> = self
            .c
            .iter()
            .map(|x| BigRational::from_integer(x.clone()))
            .collect();
        let mut b: Vec<BigRational> = other
            .c
            .iter()
            .map(|x| BigRational::from_integer(x.clone()))
            .collect();
        let trim = |v: &mut Vec<BigRational>| {
            while v.len() > 1 && v.last().map(|x| x.is_zero()).unwrap_or(false) {
                v.pop();
            }
        };
        trim(&mut a);
        trim(&mut b);
        let is_zero_poly = |v: &Vec<BigRational>| v.len() == 1 && v[0].is_zero();
        while !is_zero_poly(&b) {
            // a mod b
            let db = b.len() - 1;
            let lead = b[db].clone();
            while a.len() - 1 >= db && !is_zero_poly(&a) {
                let da = a.len() - 1;
                let t = &a[da] / &lead;
                let shift = da - db;
                for (j, bc) in b.iter().enumerate() {
                    let sub = &t * bc;
                    a[shift + j] -= sub;
                }
                trim(&mut a);
                if da == 0 {
                    break;
                }
            }
            std::mem::swap(&mut a, &mut b);
        }
        // a holds the gcd over Q; clear denominators and take primitive part
        let mut den = BigInt::one();
        for r in &a {
            den = num_integer::lcm(den, r.denom().clone());
        }
        let ints: Vec<BigInt> = a.iter().map(|r| (r * BigRational::from_integer(den.clone())).to_integer()).collect();
        let mut g = BigInt::zero();
        for x in &ints {
            g = num_integer::gcd(g, x.clone());
        }
        if g.is_zero() {
            return IntPoly::zero();
        }
        let mut out: Vec<BigInt> = ints.iter().map(|x| x / &g).collect();
        if let Some(first_nonzero) = out.iter().find(|x| !x.is_zero()) {
            if first_nonzero.is_negative() {
                for x in &mut out {
                    *x = -&*x;
                }
            }
        }
        IntPoly::new(out)
    }

    pub fn series_prefix(&self, order: usize) -> PowerSeriesZ {
        let mut c = vec![BigInt::zero(); order + 1];
        for (i, a) in self.c.iter().enumerate().take(order + 1) {
            c[i] = a.clone();
        }
        PowerSeriesZ::new(c)
    }

    pub fn from_series_prefix(s: &PowerSeriesZ, degree: usize) -> Self {
        IntPoly::new(s.c[..=degree.min(s.order())].to_vec())
    }

    /// Greatest e with other^e dividing self; returns (e, self / other^e).
    pub fn peel_factor(&self, other: &Self) -> (u32, IntPoly) {
        let mut e = 0;
        let mut cur = self.clone();
        loop {
            match cur.div_exact(other) {
                Ok(q) => {
                    cur = q;
                    e += 1;
                }
                Err(_) => return (e, cur),
            }
        }
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly{:?}", self.c)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() && !(i == 0 && self.c.len() == 1) {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", a)?,
                1 => write!(f, "{}*T", a)?,
                _ => write!(f, "{}*T^{}", a, i)?,
            }
        }
        Ok(())
    }
}

/// Quotient of two coprime integer polynomials, both in 1 + T Z[T].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFunc {
    pub num: IntPoly,
    pub den: IntPoly,
}

impl RatFunc {
    /// Reduce num/den to lowest terms, checking both end up in 1 + T Z[T].
    pub fn reduced(num: IntPoly, den: IntPoly) -> Result<Self> {
        let g = num.gcd(&den);
        let (num, den) = if g.degree() > 0 {
            (num.div_exact(&g)?, den.div_exact(&g)?)
        } else {
            (num, den)
        };
        // normalize so constant terms are 1
        let fix = |p: IntPoly| -> Result<IntPoly> {
            if p.c[0].is_one() {
                Ok(p)
            } else if p.c[0] == BigInt::from(-1) {
                Ok(IntPoly::new(p.c.iter().map(|x| -x).collect()))
            } else {
                Err(Error::Internal(format!(
                    "rational function factor has constant term {}",
                    p.c[0]
                )))
            }
        };
        // a shared -1 normalization must flip both
        if num.c[0] == BigInt::from(-1) && den.c[0] == BigInt::from(-1) {
            return Ok(RatFunc {
                num: fix(num)?,
                den: fix(den)?,
            });
        }
        let num = fix(num)?;
        let den = fix(den)?;
        Ok(RatFunc { num, den })
    }

    pub fn from_poly(p: IntPoly) -> Self {
        RatFunc {
            num: p,
            den: IntPoly::one(),
        }
    }

    pub fn series_prefix(&self, order: usize) -> Result<PowerSeriesZ> {
        self.num
            .series_prefix(order)
            .div_trunc(&self.den.series_prefix(order), order)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(v: &[i64]) -> IntPoly {
        IntPoly::new(v.iter().map(|&x| BigInt::from(x)).collect())
    }

    #[test]
    fn exact_division() {
        let a = poly(&[1, -1]).mul(&poly(&[1, -3]));
        assert_eq!(a.div_exact(&poly(&[1, -1])).unwrap(), poly(&[1, -3]));
        assert!(a.div_exact(&poly(&[1, -2])).is_err());
    }

    #[test]
    fn gcd_of_products() {
        let a = poly(&[1, -1]).mul(&poly(&[1, -3])).mul(&poly(&[1, 2]));
        let b = poly(&[1, -3]).mul(&poly(&[1, 5]));
        let g = a.gcd(&b);
        assert_eq!(g, poly(&[1, -3]));
    }

    #[test]
    fn peel_counts_multiplicity() {
        let f = poly(&[1, -1]).pow(3).mul(&poly(&[1, -9]));
        let (e, rest) = f.peel_factor(&poly(&[1, -1]));
        assert_eq!(e, 3);
        assert_eq!(rest, poly(&[1, -9]));
    }

    #[test]
    fn ratfunc_reduces() {
        let num = poly(&[1, -1]).mul(&poly(&[1, -2]));
        let den = poly(&[1, -2]).mul(&poly(&[1, -5]));
        let r = RatFunc::reduced(num, den).unwrap();
        assert_eq!(r.num, poly(&[1, -1]));
        assert_eq!(r.den, poly(&[1, -5]));
    }

    #[test]
    fn geometric_series_prefix() {
        let r = RatFunc::reduced(poly(&[1, -1]), poly(&[1, -3])).unwrap();
        let s = r.series_prefix(3).unwrap();
        let want: Vec<BigInt> = [1, 2, 6, 18].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(s.c, want);
    }
}
