//! Global power sums of Sym^k traces over closed points, the exponential
//! expansion of the L-series, and exact rational-function recovery from a
//! series prefix.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::frobenius::{symk_trace, CharPoly};
use crate::poly::{IntPoly, RatFunc};
use crate::rep::binomial_big;
use crate::series::PowerSeriesZ;

pub use crate::roots::{weight_split, WeightSplit};

/// S_m = sum over x in F_(q^m)^* of Tr(F_(x,m), Sym^k), all rational
/// integers.
#[derive(Clone, Debug)]
pub struct PowerSumSequence {
    pub k: u32,
    pub n: u32,
    pub q: u64,
    /// s[i] = S_(i+1)
    pub s: Vec<BigInt>,
}

impl PowerSumSequence {
    /// Archimedean sanity: |S_m| <= (q^m - 1) C(k+n-1, n-1) q^(m k (n-1)/2),
    /// checked exactly by squaring.
    pub fn check_weil_bound(&self) -> bool {
        let c = binomial_big(self.k as i64 + self.n as i64 - 1, self.n as i64 - 1);
        for (i, s) in self.s.iter().enumerate() {
            let m = (i + 1) as u32;
            let outer = (BigInt::from(self.q).pow(m) - 1) * &c;
            let lhs = s * s;
            let rhs = &outer * &outer * BigInt::from(self.q).pow(m * self.k * (self.n - 1));
            if lhs > rhs {
                return false;
            }
        }
        true
    }
}

/// S_m from the characteristic polynomials of all closed points of degree
/// dividing m: S_m = sum_(d|m) sum_(points of degree d) d * h_k(F_x^(m/d)).
/// The sum must land in Z; anything else signals a field or embedding bug.
pub fn global_power_sum(
    k: u32,
    m: u32,
    points_by_degree: &BTreeMap<u32, Vec<CharPoly>>,
) -> Result<BigInt> {
    let mut acc: Option<crate::cyclotomic::CycInt> = None;
    for (&d, points) in points_by_degree.iter() {
        if m % d != 0 {
            continue;
        }
        let r = m / d;
        for cp in points {
            let powered = if r == 1 { cp.clone() } else { cp.power(r) };
            let h = symk_trace(&powered, k).mul_int(&BigInt::from(d));
            acc = Some(match acc {
                None => h,
                Some(a) => a.add(&h),
            });
        }
    }
    let total = acc.ok_or_else(|| {
        Error::InvalidParameter(format!("no points of degree dividing {}", m))
    })?;
    total.as_integer().ok_or_else(|| {
        Error::NonRational(format!(
            "S_{} is not a rational integer: {}",
            m, total
        ))
    })
}

/// First M+1 coefficients of exp(sum_m S_m T^m / m), all divisions exact.
pub fn series_from_power_sums(seq: &PowerSumSequence) -> Result<PowerSeriesZ> {
    let m_max = seq.s.len();
    let mut c = Vec::with_capacity(m_max + 1);
    c.push(BigInt::one());
    for m in 1..=m_max {
        let mut acc = BigInt::zero();
        for i in 1..=m {
            acc += &seq.s[i - 1] * &c[m - i];
        }
        let (q, r) = num_integer::Integer::div_rem(&acc, &BigInt::from(m as u64));
        if !r.is_zero() {
            return Err(Error::NonRational(format!(
                "L-series coefficient {} is not integral",
                m
            )));
        }
        c.push(q);
    }
    Ok(PowerSeriesZ::new(c))
}

/// Recover the minimal rational function in 1 + T Z[T] matching the whole
/// prefix, where the last `slack` coefficients are pure verification and
/// never enter the linear solve.
pub fn rational_reconstruct(
    prefix: &[BigInt],
    max_num_deg: usize,
    max_den_deg: usize,
    slack: usize,
) -> Result<RatFunc> {
    let len = prefix.len();
    if len < max_num_deg + max_den_deg + slack + 1 {
        return Err(Error::InvalidParameter(format!(
            "prefix of {} coefficients is too short for degrees ({}, {}) with slack {}",
            len, max_num_deg, max_den_deg, slack
        )));
    }
    if prefix[0] != BigInt::one() {
        return Err(Error::InvalidParameter(
            "series prefix must start at 1".into(),
        ));
    }
    // solve sum_(i=0)^(dd) den_i c_(t-i) = 0 on the non-slack window
    let dd = max_den_deg;
    let window: Vec<usize> = (max_num_deg + 1..len - slack).collect();
    let mut matrix: Vec<Vec<BigRational>> = Vec::with_capacity(window.len());
    for &t in &window {
        let mut row = Vec::with_capacity(dd + 1);
        for i in 1..=dd {
            let c = if t >= i { prefix[t - i].clone() } else { BigInt::zero() };
            row.push(BigRational::from_integer(c));
        }
        row.push(BigRational::from_integer(-prefix[t].clone()));
        matrix.push(row);
    }
    let den_tail = solve_linear(matrix, dd).ok_or_else(|| {
        Error::ReconstructionFailed(format!(
            "no rational function with degrees ({}, {}) matches the prefix",
            max_num_deg, max_den_deg
        ))
    })?;
    let mut den: Vec<BigRational> = Vec::with_capacity(dd + 1);
    den.push(BigRational::one());
    den.extend(den_tail);
    // numerator = den * prefix, truncated at max_num_deg
    let mut num = vec![BigRational::zero(); max_num_deg + 1];
    for (j, nj) in num.iter_mut().enumerate() {
        for i in 0..=j.min(dd) {
            *nj += &den[i] * BigRational::from_integer(prefix[j - i].clone());
        }
    }
    // full-prefix verification including the slack region
    for t in max_num_deg + 1..len {
        let mut acc = BigRational::zero();
        for i in 0..=t.min(dd) {
            acc += &den[i] * BigRational::from_integer(prefix[t - i].clone());
        }
        if !acc.is_zero() {
            return Err(Error::ReconstructionFailed(format!(
                "candidate fails the prefix at T^{}",
                t
            )));
        }
    }
    // clear denominators with one shared scale so the quotient is unchanged,
    // then reduce to lowest terms in 1 + T Z[T]
    let mut lcm = BigInt::one();
    for r in num.iter().chain(den.iter()) {
        lcm = num_integer::lcm(lcm, r.denom().clone());
    }
    let scale = BigRational::from_integer(lcm);
    let num_int = IntPoly::new(
        num.iter()
            .map(|r| (r * &scale).to_integer())
            .collect(),
    );
    let den_int = IntPoly::new(
        den.iter()
            .map(|r| (r * &scale).to_integer())
            .collect(),
    );
    let reduced = RatFunc::reduced(num_int, den_int).map_err(|_| {
        Error::ReconstructionFailed("solution is not in 1 + T Z[T] after reduction".into())
    })?;
    if !reduced.num.in_one_plus_t_z() || !reduced.den.in_one_plus_t_z() {
        return Err(Error::ReconstructionFailed(
            "reconstructed factors lack constant term 1".into(),
        ));
    }
    Ok(reduced)
}

/// Gaussian elimination over Q with free variables pinned to zero;
/// rows are [a_1 .. a_dd | rhs]. Returns None when inconsistent.
fn solve_linear(mut rows: Vec<Vec<BigRational>>, unknowns: usize) -> Option<Vec<BigRational>> {
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; unknowns];
    let mut pivot_row = 0usize;
    for col in 0..unknowns {
        let sel = (pivot_row..rows.len()).find(|&r| !rows[r][col].is_zero());
        let Some(sel) = sel else { continue };
        rows.swap(pivot_row, sel);
        let inv = rows[pivot_row][col].recip();
        for c in col..=unknowns {
            rows[pivot_row][c] = &rows[pivot_row][c] * &inv;
        }
        for r in 0..rows.len() {
            if r != pivot_row && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                for c in col..=unknowns {
                    let sub = &f * &rows[pivot_row][c];
                    rows[r][c] -= sub;
                }
            }
        }
        pivot_of_col[col] = Some(pivot_row);
        pivot_row += 1;
        if pivot_row == rows.len() {
            break;
        }
    }
    // inconsistency: zero row with nonzero rhs
    for r in &rows {
        if r[..unknowns].iter().all(|x| x.is_zero()) && !r[unknowns].is_zero() {
            return None;
        }
    }
    let mut x = vec![BigRational::zero(); unknowns];
    for col in 0..unknowns {
        if let Some(pr) = pivot_of_col[col] {
            // back-substitute taking free variables as zero: after full
            // elimination each pivot row reads x_col + (free terms) = rhs
            let mut v = rows[pr][unknowns].clone();
            for c in col + 1..unknowns {
                if pivot_of_col[c].is_none() && !rows[pr][c].is_zero() {
                    // free variable pinned to zero contributes nothing
                    let _ = &rows[pr][c];
                }
                if pivot_of_col[c].is_some() {
                    // eliminated already by full reduction
                    debug_assert!(rows[pr][c].is_zero());
                }
            }
            std::mem::swap(&mut x[col], &mut v);
        }
    }
    Some(x)
}
