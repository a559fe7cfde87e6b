//! The d-series controlling guaranteed trivial zeros, the m_k(j) = d_j
//! stabilization, coefficientwise congruences between non-trivial factors,
//! and finite-precision convergence diagnostics along p-adically Cauchy
//! weight sequences.
//!
//! Entireness of the limit L-function is not decidable by computation;
//! everything here reports finite-precision evidence only.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::pipeline::{LResult, Pipeline};
use crate::poly::IntPoly;
use crate::series::PowerSeriesZ;
use crate::trivial::m_coefficients;

/// d_j = number of partitions of j into parts from {2, ..., n-1}: the
/// prefix of 1/((1-x^2)(1-x^3)...(1-x^(n-1))).
pub fn d_series(n: u32, u_max: u32) -> Result<PowerSeriesZ> {
    if n < 2 {
        return Err(Error::InvalidParameter("d-series needs n >= 2".into()));
    }
    let order = u_max as usize;
    let den = PowerSeriesZ::product_one_minus((2..n as usize).map(|i| i), order);
    PowerSeriesZ::one(order).div_trunc(&den, order)
}

/// Report of the m_k(j) = d_j identity under k >= n.
#[derive(Clone, Debug)]
pub struct StabilityReport {
    pub n: u32,
    pub k: u32,
    pub r: u32,
    pub applicable: bool,
    pub violations: Vec<u32>,
}

impl StabilityReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Verify m_k(j) = d_j for j <= min(k, r) whenever k >= n.
pub fn stability_check(n: u32, k: u32, r: u32) -> Result<StabilityReport> {
    if k < n {
        return Ok(StabilityReport {
            n,
            k,
            r,
            applicable: false,
            violations: Vec::new(),
        });
    }
    let jmax = k.min(r);
    let m = m_coefficients(n, k, jmax)?;
    let d = d_series(n, jmax)?;
    let violations = (0..=jmax)
        .filter(|&j| m.c[j as usize] != d.c[j as usize])
        .collect();
    Ok(StabilityReport {
        n,
        k,
        r,
        applicable: true,
        violations,
    })
}

/// Per-coefficient p-adic valuations of K1 - K2 (None marks a zero
/// difference, i.e. infinite valuation).
#[derive(Clone, Debug)]
pub struct CongruenceReport {
    pub p: u64,
    pub required: u32,
    pub valuations: Vec<Option<u32>>,
    pub ok: bool,
}

pub fn padic_valuation(p: u64, x: &BigInt) -> Option<u32> {
    if x.is_zero() {
        return None;
    }
    let pb = BigInt::from(p);
    let mut v = 0u32;
    let mut cur = x.clone();
    loop {
        let (q, r) = num_integer::Integer::div_rem(&cur, &pb);
        if !r.is_zero() {
            return Some(v);
        }
        v += 1;
        cur = q;
    }
}

/// True iff every coefficient of K1 - K2 has p-adic valuation >= required,
/// aligning the shorter polynomial with zeros.
pub fn congruence_check(k1: &IntPoly, k2: &IntPoly, p: u64, required: u32) -> CongruenceReport {
    let len = k1.c.len().max(k2.c.len());
    let mut valuations = Vec::with_capacity(len);
    let mut ok = true;
    for i in 0..len {
        let diff = k1.coeff(i) - k2.coeff(i);
        let v = padic_valuation(p, &diff);
        if let Some(v) = v {
            if v < required {
                ok = false;
            }
        }
        valuations.push(v);
    }
    CongruenceReport {
        p,
        required,
        valuations,
        ok,
    }
}

/// One step of the diagnostic: consecutive weights k_i, k_(i+1) and what the
/// congruence theory guarantees for K(k_(i+1)) - K(k_i).
#[derive(Clone, Debug)]
pub struct LimitStep {
    pub k_lo: u32,
    pub k_hi: u32,
    /// v_p(k_hi - k_lo)
    pub m: u32,
    /// min(m, floor(k_lo / 2))
    pub guaranteed: u32,
    pub congruence: CongruenceReport,
}

/// Finite-precision convergence evidence for the p-adic limit.
#[derive(Clone, Debug)]
pub struct PadicDiagnostics {
    pub p: u64,
    pub n: u32,
    pub q: u64,
    pub k_sequence: Vec<u32>,
    pub truncation_radius: u32,
    pub d_prefix: Vec<BigInt>,
    /// per k_i: exponents of exact divisibility of P = K det0 detInf by
    /// (1 - q^j T)^(d_j), j <= min(k_i, r)
    pub divisibility: Vec<Vec<(u32, u32)>>,
    pub steps: Vec<LimitStep>,
    pub results: Vec<LResult>,
}

impl PadicDiagnostics {
    pub fn all_consecutive_congruences_hold(&self) -> bool {
        self.steps.iter().all(|s| s.congruence.ok)
    }
}

/// Run the pipeline along an increasing, p-adically converging sequence of
/// weights, verify the forced (1 - q^j T)^(d_j) divisibilities of
/// P(k, n, T) = K det0 detInf, and report valuations of successive
/// coefficient differences of K.
pub fn limit_diagnostic(
    pipe: &mut Pipeline,
    k_sequence: &[u32],
    truncation_radius: u32,
) -> Result<PadicDiagnostics> {
    let p = pipe.config().p;
    let n = pipe.config().n;
    let q = pipe.q();
    if k_sequence.len() < 2 {
        return Err(Error::InvalidParameter(
            "limit diagnostic needs at least two weights".into(),
        ));
    }
    if k_sequence.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter(
            "weight sequence must be strictly increasing".into(),
        ));
    }
    let d = d_series(n, truncation_radius)?;
    let mut results = Vec::new();
    let mut divisibility = Vec::new();
    for &k in k_sequence {
        let r = pipe.lfunction(k)?;
        let poly = r.nontrivial.mul(&r.det0).mul(r.det_inf.poly());
        let mut here = Vec::new();
        for j in 0..=truncation_radius.min(k) {
            let dj: u32 = (&d.c[j as usize])
                .try_into()
                .map_err(|_| Error::Internal("d_j exceeds u32".into()))?;
            if dj == 0 {
                continue;
            }
            let factor = IntPoly::one_minus(BigInt::from(q).pow(j)).pow(dj);
            if poly.div_exact(&factor).is_err() {
                return Err(Error::InexactDivision(format!(
                    "P({}, {}, T) is not divisible by (1 - q^{} T)^{}",
                    k, n, j, dj
                )));
            }
            here.push((j, dj));
        }
        divisibility.push(here);
        results.push(r);
    }
    let mut steps = Vec::new();
    for w in k_sequence.windows(2) {
        let (k_lo, k_hi) = (w[0], w[1]);
        let m = padic_valuation(p, &BigInt::from(k_hi as i64 - k_lo as i64))
            .expect("strictly increasing");
        let guaranteed = m.min(k_lo / 2);
        let lo = &results[k_sequence.iter().position(|&k| k == k_lo).unwrap()];
        let hi = &results[k_sequence.iter().position(|&k| k == k_hi).unwrap()];
        let congruence = congruence_check(&hi.nontrivial, &lo.nontrivial, p, guaranteed);
        steps.push(LimitStep {
            k_lo,
            k_hi,
            m,
            guaranteed,
            congruence,
        });
    }
    Ok(PadicDiagnostics {
        p,
        n,
        q,
        k_sequence: k_sequence.to_vec(),
        truncation_radius,
        d_prefix: d.c,
        divisibility,
        steps,
        results,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bigs(vs: &[i64]) -> Vec<BigInt> {
        vs.iter().map(|&v| BigInt::from(v)).collect()
    }

    #[test]
    fn d_series_examples() {
        assert_eq!(d_series(2, 4).unwrap().c, bigs(&[1, 0, 0, 0, 0]));
        assert_eq!(d_series(3, 5).unwrap().c, bigs(&[1, 0, 1, 0, 1, 0]));
        assert_eq!(d_series(5, 7).unwrap().c, bigs(&[1, 0, 1, 1, 2, 1, 3, 2]));
        assert!(d_series(1, 3).is_err());
    }

    #[test]
    fn d_series_matches_partition_oracle() {
        // dynamic programming count of partitions into parts 2..n-1
        for n in 2..=8u32 {
            let jmax = 40usize;
            let mut dp = vec![0u64; jmax + 1];
            dp[0] = 1;
            for part in 2..n as usize {
                for j in part..=jmax {
                    dp[j] += dp[j - part];
                }
            }
            let d = d_series(n, jmax as u32).unwrap();
            for j in 0..=jmax {
                assert_eq!(d.c[j], BigInt::from(dp[j]), "n={} j={}", n, j);
            }
        }
    }

    #[test]
    fn stability_examples() {
        let r = stability_check(3, 5, 5).unwrap();
        assert!(r.applicable && r.pass());
        let r = stability_check(4, 3, 5).unwrap();
        assert!(!r.applicable);
        let r = stability_check(2, 9, 4).unwrap();
        assert!(r.applicable && r.pass());
    }

    #[test]
    fn stability_sweep() {
        for n in 2..=5u32 {
            for k in n..=10 {
                let r = stability_check(n, k, 10).unwrap();
                assert!(r.pass(), "n={} k={} violations {:?}", n, k, r.violations);
            }
        }
    }

    #[test]
    fn congruence_examples() {
        let p = |v: &[i64]| IntPoly::new(bigs(v));
        let k1 = p(&[1, 6, 9]);
        assert!(congruence_check(&k1, &k1, 3, 7).ok);
        // 1+3T vs 1+6T differ by 3T: valuation 1 < 2
        let r = congruence_check(&p(&[1, 3]), &p(&[1, 6]), 3, 2);
        assert!(!r.ok);
        assert_eq!(r.valuations, vec![None, Some(1)]);
    }

    #[test]
    fn valuations() {
        assert_eq!(padic_valuation(3, &BigInt::from(18)), Some(2));
        assert_eq!(padic_valuation(3, &BigInt::from(-5)), Some(0));
        assert_eq!(padic_valuation(3, &BigInt::from(0)), None);
    }
}
