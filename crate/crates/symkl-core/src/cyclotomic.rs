//! Exact arithmetic in Z[zeta_p] for a small prime p, the value ring of all
//! additive character sums.
//!
//! Elements are stored on the power basis {1, zeta, ..., zeta^(p-2)}; the
//! relation zeta^(p-1) = -(1 + zeta + ... + zeta^(p-2)) reduces everything
//! into canonical form, so equality is coordinate-wise. For p = 2 the basis
//! is {1} and zeta_2 = -1.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// An element of Z[zeta_p] in canonical coordinates of length p - 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycInt {
    prime: u32,
    coords: Vec<BigInt>,
}

impl CycInt {
    /// Canonical element from raw coefficients of 1, zeta, ..., zeta^(p-1)
    /// (length at most p). The zeta^(p-1) coefficient is folded in via the
    /// minimal-polynomial relation.
    pub fn normalize(prime: u32, raw: &[BigInt]) -> Result<Self> {
        check_prime(prime)?;
        let p = prime as usize;
        if raw.len() > p {
            return Err(Error::InvalidParameter(format!(
                "raw coefficient vector of length {} exceeds p = {}",
                raw.len(),
                p
            )));
        }
        let mut acc = vec![BigInt::zero(); p];
        for (i, c) in raw.iter().enumerate() {
            acc[i] += c;
        }
        Ok(Self::fold(prime, acc))
    }

    /// Reduce a length-p accumulator (coefficients of zeta^0..zeta^(p-1))
    /// into canonical form.
    fn fold(prime: u32, mut acc: Vec<BigInt>) -> Self {
        let p = prime as usize;
        debug_assert_eq!(acc.len(), p);
        let last = acc.pop().expect("accumulator is nonempty");
        let coords = acc.into_iter().map(|c| c - &last).collect();
        CycInt { prime, coords }
    }

    pub fn zero(prime: u32) -> Self {
        CycInt {
            prime,
            coords: vec![BigInt::zero(); prime as usize - 1],
        }
    }

    pub fn one(prime: u32) -> Self {
        Self::from_int(prime, BigInt::from(1))
    }

    pub fn from_int(prime: u32, value: BigInt) -> Self {
        let mut coords = vec![BigInt::zero(); prime as usize - 1];
        coords[0] = value;
        CycInt { prime, coords }
    }

    /// zeta_p^t in canonical form (t taken mod p).
    pub fn root_power(prime: u32, t: u64) -> Self {
        let p = prime as usize;
        let t = (t % prime as u64) as usize;
        let mut acc = vec![BigInt::zero(); p];
        acc[t] = BigInt::from(1);
        Self::fold(prime, acc)
    }

    /// Canonical element directly from p - 1 coordinates.
    pub fn from_coords(prime: u32, coords: Vec<BigInt>) -> Result<Self> {
        check_prime(prime)?;
        if coords.len() != prime as usize - 1 {
            return Err(Error::InvalidParameter(format!(
                "expected {} coordinates for p = {}, got {}",
                prime - 1,
                prime,
                coords.len()
            )));
        }
        Ok(CycInt { prime, coords })
    }

    pub fn prime(&self) -> u32 {
        self.prime
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.prime, other.prime, "mismatched primes in CycInt add");
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a + b)
            .collect();
        CycInt {
            prime: self.prime,
            coords,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.prime, other.prime, "mismatched primes in CycInt sub");
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a - b)
            .collect();
        CycInt {
            prime: self.prime,
            coords,
        }
    }

    pub fn neg(&self) -> Self {
        CycInt {
            prime: self.prime,
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }

    /// Exact product, reduced to canonical form.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.prime, other.prime, "mismatched primes in CycInt mul");
        let p = self.prime as usize;
        let mut acc = vec![BigInt::zero(); p];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coords.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let mut e = i + j;
                if e >= p {
                    e -= p;
                }
                acc[e] += a * b;
            }
        }
        Self::fold(self.prime, acc)
    }

    pub fn mul_int(&self, s: &BigInt) -> Self {
        CycInt {
            prime: self.prime,
            coords: self.coords.iter().map(|c| c * s).collect(),
        }
    }

    /// The rational integer this element equals, when it is one.
    pub fn as_integer(&self) -> Option<BigInt> {
        if self.coords[1..].iter().all(|c| c.is_zero()) {
            Some(self.coords[0].clone())
        } else {
            None
        }
    }

    /// Image under the Galois automorphism zeta |-> zeta^t, gcd(t, p) = 1.
    pub fn apply_galois(&self, t: u64) -> Result<Self> {
        let p = self.prime as u64;
        if t % p == 0 {
            return Err(Error::InvalidParameter(format!(
                "galois exponent {} is divisible by p = {}",
                t, p
            )));
        }
        let t = t % p;
        let mut acc = vec![BigInt::zero(); p as usize];
        for (i, c) in self.coords.iter().enumerate() {
            let e = (i as u64 * t % p) as usize;
            acc[e] += c;
        }
        Ok(Self::fold(self.prime, acc))
    }

    /// Evaluation at zeta_p = exp(2 pi i / p).
    pub fn to_complex(&self) -> Complex64 {
        let p = self.prime as f64;
        let mut z = Complex64::new(0.0, 0.0);
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let theta = 2.0 * std::f64::consts::PI * (i as f64) / p;
            let coeff = c.to_f64().unwrap_or_else(|| {
                if c.is_negative() {
                    f64::NEG_INFINITY
                } else {
                    f64::INFINITY
                }
            });
            z += Complex64::new(theta.cos(), theta.sin()) * coeff;
        }
        z
    }

    /// Exact division of every coordinate by an integer; fails when any
    /// coordinate is not divisible.
    pub fn div_exact_int(&self, s: &BigInt) -> Result<Self> {
        use num_integer::Integer;
        if s.is_zero() {
            return Err(Error::InexactDivision("division by zero".into()));
        }
        let mut coords = Vec::with_capacity(self.coords.len());
        for c in &self.coords {
            let (q, r) = c.div_rem(s);
            if !r.is_zero() {
                return Err(Error::InexactDivision(format!(
                    "coordinate {} not divisible by {}",
                    c, s
                )));
            }
            coords.push(q);
        }
        Ok(CycInt {
            prime: self.prime,
            coords,
        })
    }
}

fn check_prime(p: u32) -> Result<()> {
    if p < 2 || !is_small_prime(p as u64) {
        return Err(Error::InvalidParameter(format!("{} is not prime", p)));
    }
    Ok(())
}

/// Trial-division primality test, sufficient for the small characteristics
/// handled here.
pub fn is_small_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl fmt::Debug for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycInt(p={}; {:?})", self.prime, self.coords)
    }
}

impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if i == 0 {
                write!(f, "{}", c)?;
            } else {
                write!(f, "{}*z^{}", c, i)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
