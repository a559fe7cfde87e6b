//! Characteristic polynomial of Frobenius at a closed point, recovered from
//! Kloosterman power sums by Newton's identities, together with powers of
//! Frobenius and symmetric-power traces.
//!
//! The determinant is not computed from character sums: the monodromy lands
//! in SL/Sp/SO/G_2, so det(F_x) is forced to q^(d n(n-1)/2); the deep
//! determinant check in the pipeline re-derives it from an independent table
//! level wherever that level is affordable.

use num_bigint::BigInt;

use crate::cyclotomic::CycInt;
use crate::error::{Error, Result};
use crate::kloosterman::KloostermanTable;

/// Local Frobenius data at a closed point of degree d: the elementary
/// symmetric functions e_1..e_n of the eigenvalues.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharPoly {
    pub n: u32,
    pub d: u32,
    pub q: u64,
    /// e[j] = e_(j+1)
    pub e: Vec<CycInt>,
}

/// Access to Kloosterman tables by level (extension degree over the base
/// field F_q) with subfield embeddings between levels.
pub trait KlSource {
    fn table(&mut self, level: u32) -> Result<&KloostermanTable>;
    /// Map the dlog exponent of a point representative living at level
    /// `from` to the element index of its image at level `to`.
    fn embed_exponent(&mut self, rep_exponent: u64, from: u32, to: u32) -> Result<u32>;
}

/// p_j = (-1)^(n-1) Kl_n(F_(q^(d j)), x) for j = 1..n-1.
pub fn power_sums_at_point(
    rep_exponent: u64,
    d: u32,
    n: u32,
    src: &mut impl KlSource,
) -> Result<Vec<CycInt>> {
    let mut out = Vec::with_capacity(n as usize - 1);
    let sign_flip = n % 2 == 0;
    for j in 1..n {
        let level = d * j;
        let idx = src.embed_exponent(rep_exponent, d, level)?;
        let value = src.table(level)?.value_by_index(idx)?;
        out.push(if sign_flip { value.neg() } else { value });
    }
    Ok(out)
}

/// Newton's identities: e_j = (1/j) sum_(i=1)^(j) (-1)^(i-1) e_(j-i) p_i,
/// every division exact in Z[zeta_p]; e_n = q^(d n(n-1)/2).
pub fn charpoly_from_power_sums(
    power_sums: &[CycInt],
    n: u32,
    d: u32,
    q: u64,
) -> Result<CharPoly> {
    if power_sums.len() != n as usize - 1 {
        return Err(Error::InvalidParameter(format!(
            "expected {} power sums, got {}",
            n - 1,
            power_sums.len()
        )));
    }
    let p = if n >= 2 {
        power_sums[0].prime()
    } else {
        2 // unused: n = 1 has no power-sum input
    };
    let mut e: Vec<CycInt> = Vec::with_capacity(n as usize);
    for j in 1..n as usize {
        let mut acc = CycInt::zero(p);
        for i in 1..=j {
            let prev = if j == i {
                CycInt::one(p)
            } else {
                e[j - i - 1].clone()
            };
            let term = prev.mul(&power_sums[i - 1]);
            if i % 2 == 1 {
                acc = acc.add(&term);
            } else {
                acc = acc.sub(&term);
            }
        }
        let ej = acc.div_exact_int(&BigInt::from(j as u64)).map_err(|_| {
            Error::InexactDivision(format!(
                "Newton identity for e_{} not divisible by {}; upstream corruption",
                j, j
            ))
        })?;
        e.push(ej);
    }
    e.push(determinant_value(n, d, q, if n >= 2 { p } else { 2 }));
    Ok(CharPoly { n, d, q, e })
}

/// det(F_x) = q^(d n(n-1)/2) embedded in Z[zeta_p].
fn determinant_value(n: u32, d: u32, q: u64, p: u32) -> CycInt {
    let exp = d as u64 * (n as u64 * (n as u64 - 1) / 2);
    CycInt::from_int(p, BigInt::from(q).pow(exp as u32))
}

impl CharPoly {
    pub fn prime(&self) -> u32 {
        self.e[0].prime()
    }

    /// Power sums p_1, p_2, ..., p_upto of the eigenvalues via the Newton
    /// recurrence (valid beyond n as the linear recurrence of the
    /// characteristic polynomial).
    pub fn power_sums(&self, upto: u32) -> Vec<CycInt> {
        let p = self.prime();
        let n = self.n as usize;
        let mut ps: Vec<CycInt> = Vec::with_capacity(upto as usize);
        for j in 1..=upto as usize {
            let mut acc = CycInt::zero(p);
            for i in 1..=j.min(n) {
                let term = if i == j {
                    // + (-1)^(i-1) * i * e_i
                    self.e[i - 1].mul_int(&BigInt::from(i as u64))
                } else {
                    self.e[i - 1].mul(&ps[j - i - 1])
                };
                if i % 2 == 1 {
                    acc = acc.add(&term);
                } else {
                    acc = acc.sub(&term);
                }
            }
            ps.push(acc);
        }
        ps
    }

    /// Characteristic data of the r-th power of Frobenius, via the r-th
    /// power of the companion matrix.
    pub fn power(&self, r: u32) -> CharPoly {
        if r == 1 {
            return self.clone();
        }
        let p = self.prime();
        let n = self.n as usize;
        let companion = self.companion_matrix();
        let mr = mat_pow(&companion, r, p);
        // traces of M^r, M^(2r), ..., M^((n-1)r)
        let mut traces = Vec::with_capacity(n - 1);
        let mut cur = mr.clone();
        for j in 1..n {
            traces.push(mat_trace(&cur, p));
            if j < n - 1 {
                cur = mat_mul(&cur, &mr, p);
            }
        }
        // Newton from the powered traces; determinant is det^r
        let mut e: Vec<CycInt> = Vec::with_capacity(n);
        for j in 1..n {
            let mut acc = CycInt::zero(p);
            for i in 1..=j {
                let prev = if j == i {
                    CycInt::one(p)
                } else {
                    e[j - i - 1].clone()
                };
                let term = prev.mul(&traces[i - 1]);
                if i % 2 == 1 {
                    acc = acc.add(&term);
                } else {
                    acc = acc.sub(&term);
                }
            }
            let ej = acc
                .div_exact_int(&BigInt::from(j as u64))
                .expect("Newton divisions on powered companion traces are exact");
            e.push(ej);
        }
        e.push(determinant_value(self.n, self.d * r, self.q, p));
        CharPoly {
            n: self.n,
            d: self.d, // degree of the underlying point is unchanged
            q: self.q,
            e,
        }
    }

    /// Companion matrix of T^n - e_1 T^(n-1) + ... + (-1)^n e_n.
    fn companion_matrix(&self) -> Vec<Vec<CycInt>> {
        let p = self.prime();
        let n = self.n as usize;
        let mut m = vec![vec![CycInt::zero(p); n]; n];
        for i in 1..n {
            m[i][i - 1] = CycInt::one(p);
        }
        // last column: T^n = e_1 T^(n-1) - e_2 T^(n-2) + ...
        for (j, ej) in self.e.iter().enumerate() {
            let sign_pos = j % 2 == 0;
            let v = if sign_pos { ej.clone() } else { ej.neg() };
            m[n - 1 - j][n - 1] = v;
        }
        m
    }
}

fn mat_mul(a: &[Vec<CycInt>], b: &[Vec<CycInt>], p: u32) -> Vec<Vec<CycInt>> {
    let n = a.len();
    let mut out = vec![vec![CycInt::zero(p); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if b[k][j].is_zero() {
                    continue;
                }
                out[i][j] = out[i][j].add(&a[i][k].mul(&b[k][j]));
            }
        }
    }
    out
}

fn mat_pow(a: &[Vec<CycInt>], mut r: u32, p: u32) -> Vec<Vec<CycInt>> {
    let n = a.len();
    let mut acc = vec![vec![CycInt::zero(p); n]; n];
    for (i, row) in acc.iter_mut().enumerate() {
        row[i] = CycInt::one(p);
    }
    let mut base = a.to_vec();
    while r > 0 {
        if r & 1 == 1 {
            acc = mat_mul(&acc, &base, p);
        }
        r >>= 1;
        if r > 0 {
            base = mat_mul(&base, &base, p);
        }
    }
    acc
}

fn mat_trace(a: &[Vec<CycInt>], p: u32) -> CycInt {
    let mut t = CycInt::zero(p);
    for (i, row) in a.iter().enumerate() {
        t = t.add(&row[i]);
    }
    t
}

/// Trace of Frobenius on Sym^k: the complete homogeneous symmetric function
/// h_k of the eigenvalues, by the recurrence
/// h_m = sum_(i=1)^(min(m,n)) (-1)^(i-1) e_i h_(m-i).
pub fn symk_trace(c: &CharPoly, k: u32) -> CycInt {
    let p = c.prime();
    let n = c.n as usize;
    let mut h: Vec<CycInt> = Vec::with_capacity(k as usize + 1);
    h.push(CycInt::one(p));
    for m in 1..=k as usize {
        let mut acc = CycInt::zero(p);
        for i in 1..=m.min(n) {
            let term = c.e[i - 1].mul(&h[m - i]);
            if i % 2 == 1 {
                acc = acc.add(&term);
            } else {
                acc = acc.sub(&term);
            }
        }
        h.push(acc);
    }
    h.pop().expect("h_k was just pushed")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(v: i64, p: u32) -> CycInt {
        CycInt::from_int(p, BigInt::from(v))
    }

    fn charpoly_n2_q3(p1: i64) -> CharPoly {
        charpoly_from_power_sums(&[int(p1, 3)], 2, 1, 3).unwrap()
    }

    #[test]
    fn newton_examples() {
        // n=2, q=3, d=1: e = (p_1, 3)
        let c = charpoly_n2_q3(1);
        assert_eq!(c.e, vec![int(1, 3), int(3, 3)]);
        let c = charpoly_n2_q3(-2);
        assert_eq!(c.e, vec![int(-2, 3), int(3, 3)]);
        // n=3, d=1: e_3 = q^3
        let c = charpoly_from_power_sums(&[int(-1, 2), int(1, 2)], 3, 1, 2).unwrap();
        assert_eq!(c.e[2], int(8, 2));
    }

    #[test]
    fn newton_round_trip() {
        // e -> power sums -> Newton reconstruction reproduces e exactly;
        // the chosen e_n match the forced determinant q^(d n(n-1)/2)
        let cases: Vec<(Vec<i64>, u32, u64, u32)> = vec![
            (vec![1, 3], 2, 3, 3),
            (vec![-2, 3], 2, 3, 3),
            (vec![3, -5, 343], 3, 7, 7),
            (vec![0, 2, -1, 15625], 4, 5, 5),
        ];
        for (evals, n, q, p) in cases {
            let e: Vec<CycInt> = evals.iter().map(|&v| int(v, p)).collect();
            let c = CharPoly {
                n,
                d: 1,
                q,
                e: e.clone(),
            };
            let ps = c.power_sums(n - 1);
            let back = charpoly_from_power_sums(&ps, n, 1, q).unwrap();
            assert_eq!(back.e, e, "n={} q={}", n, q);
        }
    }

    #[test]
    fn power_examples() {
        // n=2, e=(1,3), r=2 -> e' = (-5, 9)
        let c = charpoly_n2_q3(1);
        let c2 = c.power(2);
        assert_eq!(c2.e, vec![int(-5, 3), int(9, 3)]);
        // n=2, e=(-2,3), r=2 -> e' = (-2, 9)
        let c = charpoly_n2_q3(-2);
        let c2 = c.power(2);
        assert_eq!(c2.e, vec![int(-2, 3), int(9, 3)]);
        // r=1 is the identity
        assert_eq!(c.power(1), c);
    }

    #[test]
    fn power_matches_power_sum_recurrence() {
        // traces of the r-th power are the (r j)-th power sums
        let c = CharPoly {
            n: 3,
            d: 1,
            q: 5,
            e: vec![int(2, 5), int(-3, 5), int(125, 5)],
        };
        let ps = c.power_sums(9);
        for r in 2..=3u32 {
            let cr = c.power(r);
            let ps_r = cr.power_sums(2);
            assert_eq!(ps_r[0], ps[(r - 1) as usize]);
            assert_eq!(ps_r[1], ps[(2 * r - 1) as usize]);
        }
    }

    #[test]
    fn symk_trace_examples() {
        let c = charpoly_n2_q3(1);
        assert_eq!(symk_trace(&c, 0), int(1, 3));
        assert_eq!(symk_trace(&c, 1), int(1, 3));
        // h_2 = e_1 h_1 - e_2 h_0 = 1 - 3 = -2
        assert_eq!(symk_trace(&c, 2), int(-2, 3));
    }

    #[test]
    fn rank_one_degenerates_to_powers() {
        // n=1: h_k = e_1^k with e_1 = determinant q^0 = 1
        let c = charpoly_from_power_sums(&[], 1, 1, 3).unwrap();
        assert_eq!(c.e.len(), 1);
        for k in 0..5 {
            assert_eq!(symk_trace(&c, k), int(1, 2));
        }
    }

    #[test]
    fn weight_of_roots_is_pure() {
        // complex roots of T^n - e_1 T^(n-1) + ... all have |alpha| = q^(d(n-1)/2)
        // for honest Kloosterman data; take the F_3 points
        use crate::field::FieldDescriptor;
        use crate::kloosterman::{Budgets, KloostermanTable};
        use std::sync::Arc;
        let f3 = Arc::new(FieldDescriptor::build(3, 1, 1 << 24).unwrap());
        let t = KloostermanTable::build_direct(f3.clone(), 2, 1, &Budgets::default()).unwrap();
        for idx in 1..3u32 {
            let kl = t.value_by_index(idx).unwrap();
            let p1 = kl.neg(); // (-1)^(n-1) with n = 2
            let c = charpoly_from_power_sums(&[p1], 2, 1, 3).unwrap();
            // T^2 - e1 T + e2: roots via quadratic formula in complex doubles
            let e1 = c.e[0].to_complex();
            let e2 = c.e[1].to_complex();
            let disc = (e1 * e1 - 4.0 * e2).sqrt();
            for root in [(e1 + disc) / 2.0, (e1 - disc) / 2.0] {
                assert!((root.norm() - 3f64.sqrt()).abs() < 1e-9);
            }
        }
    }
}
