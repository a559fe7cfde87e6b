//! Complex root location for integer polynomials whose coefficients can be
//! far beyond f64 range, and clustering of reciprocal-root moduli by
//! half-integer weights |alpha| = q^(w/2).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::poly::IntPoly;

/// log2 of |a| with ~1e-15 relative accuracy; None for a = 0.
pub fn log2_abs(a: &BigInt) -> Option<f64> {
    if a.is_zero() {
        return None;
    }
    let bits = a.bits();
    if bits <= 53 {
        return Some(a.abs().to_f64().expect("small magnitude fits f64").log2());
    }
    let shift = bits - 53;
    let top = (a.abs() >> shift).to_f64().expect("53-bit top fits f64");
    Some(top.log2() + shift as f64)
}

/// Roots of an integer polynomial (low degree first, degree >= 1), with
/// multiplicities resolved exactly through a gcd chain so the numerical
/// solver only ever sees squarefree inputs.
pub fn roots_with_multiplicity(p: &IntPoly) -> Vec<(Complex64, u32)> {
    let mut out = Vec::new();
    let mut level = p.clone();
    let mut mult = 1u32;
    while level.degree() >= 1 {
        let g = level.gcd(&level.derivative());
        let squarefree = level
            .div_exact(&g)
            .expect("gcd divides the polynomial exactly");
        if squarefree.degree() >= 1 {
            for r in roots_squarefree(&squarefree) {
                // a root of the level-i squarefree part may reappear deeper in
                // the chain; merge multiplicities by nearest match
                if let Some(entry) = out
                    .iter_mut()
                    .find(|(z, _): &&mut (Complex64, u32)| (*z - r).norm() < 1e-6 * (1.0 + r.norm()))
                {
                    entry.1 += 1;
                } else {
                    out.push((r, mult));
                }
            }
        }
        level = g;
        mult += 1;
    }
    out
}

/// Durand-Kerner on a squarefree polynomial. Coefficients are rescaled as
/// b_j = a_j * 2^(-j s) so both endpoints have unit magnitude, keeping
/// everything within f64 range even for coefficients near 2^1000.
fn roots_squarefree(p: &IntPoly) -> Vec<Complex64> {
    let d = p.degree();
    let la0 = log2_abs(&p.c[0]).expect("L-factors have nonzero constant term");
    let lad = log2_abs(&p.c[d]).expect("leading coefficient nonzero");
    let s = (lad - la0) / d as f64;
    let b: Vec<Complex64> = p
        .c
        .iter()
        .enumerate()
        .map(|(j, a)| match log2_abs(a) {
            None => Complex64::new(0.0, 0.0),
            Some(l) => {
                let m = l - j as f64 * s;
                let v = m.exp2();
                let v = if a.is_negative() { -v } else { v };
                Complex64::new(v, 0.0)
            }
        })
        .collect();
    // scaled roots have geometric-mean modulus 1
    let mut z: Vec<Complex64> = (0..d)
        .map(|i| {
            let theta = 2.0 * std::f64::consts::PI * (i as f64 + 0.354) / d as f64;
            Complex64::from_polar(1.0 + 0.13 * (i as f64 % 3.0), theta)
        })
        .collect();
    let eval = |x: Complex64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for a in b.iter().rev() {
            acc = acc * x + a;
        }
        acc
    };
    for _ in 0..2000 {
        let mut max_step = 0.0f64;
        for i in 0..d {
            let mut denom = b[d];
            for j in 0..d {
                if j != i {
                    denom *= z[i] - z[j];
                }
            }
            if denom.norm() == 0.0 {
                continue;
            }
            let step = eval(z[i]) / denom;
            z[i] -= step;
            let rel = step.norm() / (1.0 + z[i].norm());
            if rel > max_step {
                max_step = rel;
            }
        }
        if max_step < 1e-14 {
            break;
        }
    }
    // undo the scaling: true root = scaled root * 2^(-s)
    z.iter().map(|&r| r * (-s).exp2()).collect()
}

/// Result of clustering the roots of a polynomial by weight, where a
/// reciprocal root alpha carries weight w when |alpha| = q^(w/2).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightSplit {
    /// degree carried by each weight, keyed by 2w so half-integers stay exact
    pub by_two_w: BTreeMap<i64, usize>,
    /// number of roots not within tolerance of any half-integer weight
    pub unassigned: usize,
}

impl WeightSplit {
    pub fn total_degree(&self) -> usize {
        self.by_two_w.values().sum::<usize>() + self.unassigned
    }

    pub fn degree_at(&self, two_w: i64) -> usize {
        self.by_two_w.get(&two_w).copied().unwrap_or(0)
    }
}

/// Cluster the roots of p by |root| = q^(-w/2) with the given relative
/// tolerance. Unmatched roots are reported, not fatal.
pub fn weight_split(p: &IntPoly, q: u64, rel_tol: f64) -> WeightSplit {
    let mut by_two_w: BTreeMap<i64, usize> = BTreeMap::new();
    let mut unassigned = 0usize;
    if p.degree() == 0 {
        return WeightSplit {
            by_two_w,
            unassigned,
        };
    }
    let lq = (q as f64).ln();
    for (root, mult) in roots_with_multiplicity(p) {
        // reciprocal root alpha = 1/root has |alpha| = q^(w/2)
        let modulus = root.norm();
        let w_est = -2.0 * modulus.ln() / lq;
        let two_w = (2.0 * w_est).round() as i64;
        // |root| should equal q^(-w/2) = q^(-two_w/4)
        let target = (-(two_w as f64) * lq / 4.0).exp();
        let ok = (modulus - target).abs() <= rel_tol * target;
        if ok {
            *by_two_w.entry(two_w).or_insert(0) += mult as usize;
        } else {
            unassigned += mult as usize;
        }
    }
    by_two_w.retain(|_, v| *v > 0);
    WeightSplit {
        by_two_w,
        unassigned,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(v: &[i64]) -> IntPoly {
        IntPoly::new(v.iter().map(|&x| BigInt::from(x)).collect())
    }

    #[test]
    fn weight_split_of_linear_factors() {
        // 1 - T at q = 3: weight 0
        let ws = weight_split(&poly(&[1, -1]), 3, 1e-6);
        assert_eq!(ws.degree_at(0), 1);
        assert_eq!(ws.unassigned, 0);
        // (1 - T)(1 - 9T): weights 0 and 4
        let p = poly(&[1, -1]).mul(&poly(&[1, -9]));
        let ws = weight_split(&p, 3, 1e-6);
        assert_eq!(ws.degree_at(0), 1);
        assert_eq!(ws.degree_at(8), 1);
        assert_eq!(ws.unassigned, 0);
    }

    #[test]
    fn repeated_roots_are_counted() {
        let p = poly(&[1, -1]).pow(3).mul(&poly(&[1, -3]));
        let ws = weight_split(&p, 3, 1e-6);
        assert_eq!(ws.degree_at(0), 3);
        assert_eq!(ws.degree_at(4), 1);
        assert_eq!(ws.total_degree(), 4);
    }

    #[test]
    fn quadratic_with_conjugate_roots() {
        // 1 + 3T + 9T^2: reciprocal roots are complex of modulus 3
        let ws = weight_split(&poly(&[1, 3, 9]), 3, 1e-6);
        assert_eq!(ws.degree_at(4), 2);
    }

    #[test]
    fn off_weight_roots_reported() {
        // 1 - 2T at q = 3: |alpha| = 2 is no power of sqrt(3)
        let ws = weight_split(&poly(&[1, -2]), 3, 1e-6);
        assert_eq!(ws.unassigned, 1);
    }

    #[test]
    fn huge_coefficients_stay_finite() {
        // (1 - 3^40 T)(1 - T): coefficients overflow f64^2 territory
        let big = BigInt::from(3u32).pow(40);
        let p = IntPoly::one_minus(big).mul(&poly(&[1, -1]));
        let ws = weight_split(&p, 3, 1e-6);
        assert_eq!(ws.degree_at(160), 1);
        assert_eq!(ws.degree_at(0), 1);
    }
}
