//! sl(2) weight-space bookkeeping for symmetric powers, a brute-force
//! nilpotent-kernel oracle over the monomial basis, Weyl dimension closed
//! forms, and the Sym^k decompositions they control.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::IntPoly;

/// Monodromy targets of the Kloosterman sheaf, plus the parameters that
/// drive the dimension formulas.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlgebraId {
    /// sl(n)
    Sl(u32),
    /// sp(n) with n = 2m even
    Sp(u32),
    /// so(n), n even or odd
    So(u32),
    G2,
}

impl AlgebraId {
    pub fn standard_dim(&self) -> u32 {
        match self {
            AlgebraId::Sl(n) => *n,
            AlgebraId::Sp(n) => *n,
            AlgebraId::So(n) => *n,
            AlgebraId::G2 => 7,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            AlgebraId::Sl(n) if *n >= 2 => Ok(()),
            AlgebraId::Sp(n) if *n >= 2 && n % 2 == 0 => Ok(()),
            AlgebraId::So(n) if *n >= 3 => Ok(()),
            AlgebraId::G2 => Ok(()),
            _ => Err(Error::InvalidParameter(format!(
                "unsupported algebra parameters {:?}",
                self
            ))),
        }
    }
}

/// Highest weight: k L_1 for the classical algebras, a alpha_3 + b alpha_4
/// for g_2 (the standard representation is alpha_3).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HighestWeight {
    KL1(u32),
    G2 { a: u32, b: u32 },
}

/// The Zariski closure of the monodromy of Kl_n, after Katz.
pub fn monodromy_algebra(n: u32, p: u64) -> AlgebraId {
    if n % 2 == 0 {
        AlgebraId::Sp(n)
    } else if p != 2 {
        AlgebraId::Sl(n)
    } else if n == 7 {
        AlgebraId::G2
    } else {
        AlgebraId::So(n)
    }
}

/// H-eigenvalue multiplicities of Sym^k of the n-dimensional irreducible
/// sl(2)-module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightMultiset {
    pub n: u32,
    pub k: u32,
    pub counts: BTreeMap<i64, u64>,
}

/// Enumerate monomials e_0^(i_0) ... e_(n-1)^(i_(n-1)) of total degree k;
/// the monomial has H-eigenvalue sum_j (n-1-2j) i_j.
pub fn symmetric_power_weights(n: u32, k: u32) -> WeightMultiset {
    let mut counts = BTreeMap::new();
    let mut comp = vec![0u32; n as usize];
    comp[0] = k;
    loop {
        let w: i64 = comp
            .iter()
            .enumerate()
            .map(|(j, &i)| (n as i64 - 1 - 2 * j as i64) * i as i64)
            .sum();
        *counts.entry(w).or_insert(0) += 1;
        if !next_composition(&mut comp) {
            break;
        }
    }
    WeightMultiset { n, k, counts }
}

/// Advance a weak composition of fixed total; starting from (k, 0, ..., 0)
/// this visits every composition exactly once. Returns false after the last
/// one, (0, ..., 0, k).
pub(crate) fn next_composition(comp: &mut [u32]) -> bool {
    let n = comp.len();
    if n <= 1 {
        return false;
    }
    let i = match comp.iter().position(|&c| c > 0) {
        Some(i) => i,
        None => return false, // k = 0 has the single empty composition
    };
    if i == n - 1 {
        return false;
    }
    let v = comp[i];
    comp[i] = 0;
    comp[i + 1] += 1;
    comp[0] = v - 1;
    true
}

/// dim(ker X on the w-eigenspace) = d(w) - d(w+2) for w >= 0, re-indexed by
/// the Frobenius exponent u = (k(n-1) - w)/2.
pub fn kernel_dimensions(wm: &WeightMultiset) -> Result<BTreeMap<u32, u64>> {
    let mut out = BTreeMap::new();
    let top = wm.k as i64 * (wm.n as i64 - 1);
    for (&w, &d) in wm.counts.iter() {
        if w < 0 {
            continue;
        }
        let d2 = wm.counts.get(&(w + 2)).copied().unwrap_or(0);
        if d < d2 {
            return Err(Error::Internal(format!(
                "d({}) = {} < d({}) = {}: not an sl(2) module",
                w,
                d,
                w + 2,
                d2
            )));
        }
        let m = d - d2;
        if m > 0 {
            debug_assert_eq!((top - w) % 2, 0);
            let u = ((top - w) / 2) as u32;
            out.insert(u, m);
        }
    }
    Ok(out)
}

/// det(1 - F_0 T) on ker(N: Sym^k V -> Sym^k V) computed from the explicit
/// nilpotent Leibniz action on monomials, with exact integer rank
/// computations per graded block.
pub fn jordan_oracle(n: u32, k: u32, q: u64, size_budget: u64) -> Result<IntPoly> {
    let dim = binomial(k as u64 + n as u64 - 1, n as u64 - 1);
    if dim > size_budget {
        return Err(Error::BudgetExceeded(format!(
            "Sym^{} of rank {} has dimension {} > budget {}",
            k, n, dim, size_budget
        )));
    }
    // monomials graded by u = sum_j j * i_j
    let umax = (k * (n - 1)) as usize;
    let mut grades: Vec<Vec<Vec<u32>>> = vec![Vec::new(); umax + 1];
    let mut comp = vec![0u32; n as usize];
    comp[0] = k;
    loop {
        let u: usize = comp
            .iter()
            .enumerate()
            .map(|(j, &i)| j * i as usize)
            .sum();
        grades[u].push(comp.clone());
        if !next_composition(&mut comp) {
            break;
        }
    }
    // N e_i = e_(i-1) extends by Leibniz: N maps grade u to grade u-1
    let mut factor = IntPoly::one();
    for u in 0..=umax {
        let cols = &grades[u];
        if cols.is_empty() {
            continue;
        }
        let rows = if u == 0 { Vec::new() } else { grades[u - 1].clone() };
        let mut row_index: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
        for (i, r) in rows.iter().enumerate() {
            row_index.insert(r.clone(), i);
        }
        let mut mat = vec![vec![BigInt::zero(); cols.len()]; rows.len()];
        for (cj, c) in cols.iter().enumerate() {
            for i in 1..n as usize {
                if c[i] == 0 {
                    continue;
                }
                let mut image = c.clone();
                image[i] -= 1;
                image[i - 1] += 1;
                let ri = row_index[&image];
                mat[ri][cj] += BigInt::from(c[i]);
            }
        }
        let rank = integer_rank(mat, cols.len());
        let ker = cols.len() - rank;
        if ker > 0 {
            let factor_u = IntPoly::one_minus(BigInt::from(q).pow(u as u32));
            for _ in 0..ker {
                factor = factor.mul(&factor_u);
            }
        }
    }
    Ok(factor)
}

/// Rank over Q by fraction-free elimination.
fn integer_rank(mut mat: Vec<Vec<BigInt>>, cols: usize) -> usize {
    let rows = mat.len();
    let mut rank = 0usize;
    let mut pivot_row = 0usize;
    for col in 0..cols {
        let mut sel = None;
        for r in pivot_row..rows {
            if !mat[r][col].is_zero() {
                sel = Some(r);
                break;
            }
        }
        let Some(sel) = sel else { continue };
        mat.swap(pivot_row, sel);
        let piv = mat[pivot_row][col].clone();
        for r in pivot_row + 1..rows {
            if mat[r][col].is_zero() {
                continue;
            }
            let f = mat[r][col].clone();
            for c in col..cols {
                let v = &mat[r][c] * &piv - &mat[pivot_row][c] * &f;
                mat[r][c] = v;
            }
        }
        pivot_row += 1;
        rank += 1;
        if pivot_row == rows {
            break;
        }
    }
    rank
}

/// Explicit matrices of (F, N) on Sym^k for the commutation test NF = qFN:
/// returns (N, diag exponents u with F = diag(q^u)).
pub fn jordan_matrices(n: u32, k: u32) -> (Vec<Vec<BigInt>>, Vec<u32>) {
    let mut basis: Vec<Vec<u32>> = Vec::new();
    let mut comp = vec![0u32; n as usize];
    comp[0] = k;
    loop {
        basis.push(comp.clone());
        if !next_composition(&mut comp) {
            break;
        }
    }
    let index: BTreeMap<Vec<u32>, usize> = basis
        .iter()
        .enumerate()
        .map(|(i, b)| (b.clone(), i))
        .collect();
    let dim = basis.len();
    let mut nmat = vec![vec![BigInt::zero(); dim]; dim];
    let mut fexp = vec![0u32; dim];
    for (j, b) in basis.iter().enumerate() {
        fexp[j] = b
            .iter()
            .enumerate()
            .map(|(i, &c)| i as u32 * c)
            .sum::<u32>();
        for i in 1..n as usize {
            if b[i] == 0 {
                continue;
            }
            let mut image = b.clone();
            image[i] -= 1;
            image[i - 1] += 1;
            nmat[index[&image]][j] += BigInt::from(b[i]);
        }
    }
    (nmat, fexp)
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1u64;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

pub fn binomial_big(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Exact irreducible dimensions from the closed forms of the Weyl formula.
pub fn weyl_dimension(alg: AlgebraId, weight: HighestWeight) -> Result<BigInt> {
    alg.validate()?;
    match (alg, weight) {
        (AlgebraId::Sl(n), HighestWeight::KL1(k)) => {
            Ok(binomial_big(k as i64 + n as i64 - 1, n as i64 - 1))
        }
        (AlgebraId::Sp(n), HighestWeight::KL1(k)) => {
            Ok(binomial_big(k as i64 + n as i64 - 1, n as i64 - 1))
        }
        (AlgebraId::So(n), HighestWeight::KL1(k)) => {
            let (n, k) = (n as i64, k as i64);
            Ok(binomial_big(k + n - 1, k) - binomial_big(k + n - 3, k - 2))
        }
        (AlgebraId::G2, HighestWeight::G2 { a, b }) => {
            let (a, b) = (a as i64, b as i64);
            let num = BigInt::from(a + 1)
                * BigInt::from(a + b + 2)
                * BigInt::from(2 * a + 3 * b + 5)
                * BigInt::from(a + 2 * b + 3)
                * BigInt::from(a + 3 * b + 4)
                * BigInt::from(b + 1);
            let (q, r) = num_integer::Integer::div_rem(&num, &BigInt::from(120));
            debug_assert!(r.is_zero());
            Ok(q)
        }
        (AlgebraId::G2, HighestWeight::KL1(k)) => weyl_dimension(
            AlgebraId::G2,
            HighestWeight::G2 { a: k, b: 0 },
        ),
        _ => Err(Error::InvalidParameter(
            "unsupported weight shape for this algebra".into(),
        )),
    }
}

/// Sym^k of the standard representation: irreducible for sl and sp; for so
/// and g_2 it splits off one Gamma_((k-2i)L_1) per contraction step.
pub fn symmetric_power_decomposition(
    alg: AlgebraId,
    k: u32,
) -> Result<Vec<(HighestWeight, u32)>> {
    alg.validate()?;
    let wrap = |j: u32| match alg {
        AlgebraId::G2 => HighestWeight::G2 { a: j, b: 0 },
        _ => HighestWeight::KL1(j),
    };
    match alg {
        AlgebraId::Sl(_) | AlgebraId::Sp(_) => Ok(vec![(wrap(k), 1)]),
        AlgebraId::So(_) | AlgebraId::G2 => {
            Ok((0..=k / 2).map(|i| (wrap(k - 2 * i), 1)).collect())
        }
    }
}

/// Multiplicity of the trivial representation inside Sym^k.
pub fn trivial_multiplicity(alg: AlgebraId, k: u32) -> u32 {
    match alg {
        AlgebraId::Sl(_) | AlgebraId::Sp(_) => u32::from(k == 0),
        AlgebraId::So(_) | AlgebraId::G2 => u32::from(k % 2 == 0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composition_enumeration_is_complete() {
        let mut comp = vec![0u32; 3];
        comp[0] = 4;
        let mut count = 0;
        loop {
            assert_eq!(comp.iter().sum::<u32>(), 4);
            count += 1;
            if !next_composition(&mut comp) {
                break;
            }
        }
        assert_eq!(count, 15); // C(6,2)
    }

    #[test]
    fn weight_examples() {
        let wm = symmetric_power_weights(2, 3);
        let want: BTreeMap<i64, u64> = [(3, 1), (1, 1), (-1, 1), (-3, 1)].into_iter().collect();
        assert_eq!(wm.counts, want);
        let wm = symmetric_power_weights(3, 2);
        let want: BTreeMap<i64, u64> = [(4, 1), (2, 1), (0, 2), (-2, 1), (-4, 1)]
            .into_iter()
            .collect();
        assert_eq!(wm.counts, want);
        let wm = symmetric_power_weights(4, 0);
        let want: BTreeMap<i64, u64> = [(0, 1)].into_iter().collect();
        assert_eq!(wm.counts, want);
    }

    #[test]
    fn weight_multiset_invariants() {
        for n in 2..=5u32 {
            for k in 0..=6u32 {
                let wm = symmetric_power_weights(n, k);
                let total: u64 = wm.counts.values().sum();
                assert_eq!(
                    BigInt::from(total),
                    binomial_big(k as i64 + n as i64 - 1, n as i64 - 1)
                );
                // symmetry under w -> -w
                for (&w, &d) in &wm.counts {
                    assert_eq!(wm.counts.get(&-w).copied().unwrap_or(0), d);
                }
                // parity vanishing: w = k(n-1) mod 2
                let parity = (k * (n - 1)) % 2;
                for &w in wm.counts.keys() {
                    assert_eq!((w.rem_euclid(2)) as u32, parity);
                }
            }
        }
    }

    #[test]
    fn kernel_dimension_examples() {
        let km = kernel_dimensions(&symmetric_power_weights(3, 2)).unwrap();
        let want: BTreeMap<u32, u64> = [(0, 1), (2, 1)].into_iter().collect();
        assert_eq!(km, want);
        let km = kernel_dimensions(&symmetric_power_weights(2, 3)).unwrap();
        let want: BTreeMap<u32, u64> = [(0, 1)].into_iter().collect();
        assert_eq!(km, want);
        let km = kernel_dimensions(&symmetric_power_weights(4, 0)).unwrap();
        let want: BTreeMap<u32, u64> = [(0, 1)].into_iter().collect();
        assert_eq!(km, want);
    }

    #[test]
    fn jordan_examples() {
        let p = |v: &[i64]| IntPoly::new(v.iter().map(|&x| BigInt::from(x)).collect());
        assert_eq!(jordan_oracle(2, 5, 3, 5000).unwrap(), p(&[1, -1]));
        assert_eq!(
            jordan_oracle(3, 2, 3, 5000).unwrap(),
            p(&[1, -1]).mul(&p(&[1, -9]))
        );
        assert_eq!(jordan_oracle(4, 0, 7, 5000).unwrap(), p(&[1, -1]));
        assert!(jordan_oracle(6, 30, 3, 5000).is_err());
    }

    #[test]
    fn commutation_nf_equals_qfn() {
        // on Sym^k and (k = 1) on V itself: (NF)_ij = N_ij q^(u_j),
        // (qFN)_ij = q^(u_i + 1) N_ij, equal elementwise
        for (n, k, q) in [(2u32, 3u32, 3u64), (3, 2, 5), (4, 2, 2), (3, 1, 7), (2, 1, 3)] {
            let (nmat, fexp) = jordan_matrices(n, k);
            let dim = fexp.len();
            let qb = BigInt::from(q);
            for i in 0..dim {
                for j in 0..dim {
                    let nf = &nmat[i][j] * qb.pow(fexp[j]);
                    let qfn = &qb * qb.pow(fexp[i]) * &nmat[i][j];
                    assert_eq!(nf, qfn, "n={} k={} i={} j={}", n, k, i, j);
                }
            }
        }
    }

    #[test]
    fn weyl_dimension_examples() {
        assert_eq!(
            weyl_dimension(AlgebraId::G2, HighestWeight::G2 { a: 1, b: 0 }).unwrap(),
            BigInt::from(7)
        );
        assert_eq!(
            weyl_dimension(AlgebraId::Sl(3), HighestWeight::KL1(2)).unwrap(),
            BigInt::from(6)
        );
        let g2_27 = weyl_dimension(AlgebraId::G2, HighestWeight::G2 { a: 2, b: 0 }).unwrap();
        assert_eq!(g2_27, BigInt::from(27));
        let so7 = weyl_dimension(AlgebraId::So(7), HighestWeight::KL1(2)).unwrap();
        assert_eq!(so7, g2_27);
        assert_eq!(
            weyl_dimension(AlgebraId::Sp(4), HighestWeight::KL1(3)).unwrap(),
            BigInt::from(20)
        );
    }

    #[test]
    fn dimension_telescoping() {
        // dim Gamma_(k L_1) = dim Sym^k V - dim Sym^(k-2) V for so and g2
        let sym_dim = |dim_v: i64, k: i64| binomial_big(k + dim_v - 1, dim_v - 1);
        for m in 2..=5u32 {
            for &n in &[2 * m, 2 * m + 1] {
                for k in 0..=12u32 {
                    let lhs = weyl_dimension(AlgebraId::So(n), HighestWeight::KL1(k)).unwrap();
                    let rhs = sym_dim(n as i64, k as i64) - sym_dim(n as i64, k as i64 - 2);
                    assert_eq!(lhs, rhs, "so({}) k={}", n, k);
                }
            }
        }
        for k in 0..=12u32 {
            let lhs = weyl_dimension(AlgebraId::G2, HighestWeight::G2 { a: k, b: 0 }).unwrap();
            let rhs = sym_dim(7, k as i64) - sym_dim(7, k as i64 - 2);
            assert_eq!(lhs, rhs, "g2 k={}", k);
        }
    }

    #[test]
    fn decomposition_examples() {
        assert_eq!(
            symmetric_power_decomposition(AlgebraId::Sp(4), 3).unwrap(),
            vec![(HighestWeight::KL1(3), 1)]
        );
        assert_eq!(
            symmetric_power_decomposition(AlgebraId::So(7), 4).unwrap(),
            vec![
                (HighestWeight::KL1(4), 1),
                (HighestWeight::KL1(2), 1),
                (HighestWeight::KL1(0), 1)
            ]
        );
        assert_eq!(
            symmetric_power_decomposition(AlgebraId::G2, 0).unwrap(),
            vec![(HighestWeight::G2 { a: 0, b: 0 }, 1)]
        );
    }

    #[test]
    fn decomposition_dimensions_add_up() {
        for alg in [
            AlgebraId::Sl(3),
            AlgebraId::Sp(4),
            AlgebraId::So(7),
            AlgebraId::So(8),
            AlgebraId::G2,
        ] {
            let dv = alg.standard_dim() as i64;
            for k in 0..=8u32 {
                let total: BigInt = symmetric_power_decomposition(alg, k)
                    .unwrap()
                    .into_iter()
                    .map(|(w, mult)| weyl_dimension(alg, w).unwrap() * BigInt::from(mult))
                    .sum();
                assert_eq!(
                    total,
                    binomial_big(k as i64 + dv - 1, dv - 1),
                    "{:?} k={}",
                    alg,
                    k
                );
            }
        }
    }

    #[test]
    fn trivial_multiplicity_rules() {
        assert_eq!(trivial_multiplicity(AlgebraId::So(7), 4), 1);
        assert_eq!(trivial_multiplicity(AlgebraId::G2, 3), 0);
        assert_eq!(trivial_multiplicity(AlgebraId::Sl(5), 2), 0);
        assert_eq!(trivial_multiplicity(AlgebraId::Sl(5), 0), 1);
        assert_eq!(trivial_multiplicity(AlgebraId::Sp(4), 0), 1);
    }

    #[test]
    fn monodromy_table() {
        assert_eq!(monodromy_algebra(2, 3), AlgebraId::Sp(2));
        assert_eq!(monodromy_algebra(4, 2), AlgebraId::Sp(4));
        assert_eq!(monodromy_algebra(3, 7), AlgebraId::Sl(3));
        assert_eq!(monodromy_algebra(3, 2), AlgebraId::So(3));
        assert_eq!(monodromy_algebra(7, 2), AlgebraId::G2);
    }

    /// General Weyl product formula evaluated from explicit positive-root
    /// data, as an independent oracle for the closed forms at small rank.
    mod weyl_product_oracle {
        use super::*;
        use num_rational::BigRational;

        fn dim_from_roots(
            positive_roots: &[Vec<BigRational>],
            lambda: &[BigRational],
            rho: &[BigRational],
        ) -> BigRational {
            let dot = |a: &[BigRational], b: &[BigRational]| -> BigRational {
                a.iter().zip(b).map(|(x, y)| x * y).sum()
            };
            let mut acc = BigRational::from_integer(BigInt::one());
            for alpha in positive_roots {
                let lr: Vec<BigRational> =
                    lambda.iter().zip(rho).map(|(a, b)| a + b).collect();
                acc *= dot(&lr, alpha) / dot(rho, alpha);
            }
            acc
        }

        fn rat(n: i64) -> BigRational {
            BigRational::from_integer(BigInt::from(n))
        }

        fn rat2(n: i64, d: i64) -> BigRational {
            BigRational::new(BigInt::from(n), BigInt::from(d))
        }

        #[test]
        fn sl_rank_le_4_matches() {
            // roots L_i - L_j in the hyperplane sum = 0; use coordinates in R^n
            for n in 2..=4usize {
                let mut pos = Vec::new();
                for i in 0..n {
                    for j in i + 1..n {
                        let mut v = vec![rat(0); n];
                        v[i] = rat(1);
                        v[j] = rat(-1);
                        pos.push(v);
                    }
                }
                let rho: Vec<BigRational> = (0..n).map(|i| rat((n - i) as i64 - 1)).collect();
                for k in 0..=6u32 {
                    let mut lambda = vec![rat(0); n];
                    lambda[0] = rat(k as i64);
                    let d = dim_from_roots(&pos, &lambda, &rho);
                    assert!(d.is_integer());
                    assert_eq!(
                        d.to_integer(),
                        weyl_dimension(AlgebraId::Sl(n as u32), HighestWeight::KL1(k)).unwrap()
                    );
                }
            }
        }

        #[test]
        fn sp_and_so_small_rank_match() {
            // sp(2m): roots {±L_i ± L_j} ∪ {±2L_i}; rho = (m+1-i) L_i
            for m in 1..=2usize {
                let mut pos = Vec::new();
                for i in 0..m {
                    for j in i + 1..m {
                        for (si, sj) in [(1, -1), (1, 1)] {
                            let mut v = vec![rat(0); m];
                            v[i] = rat(si);
                            v[j] = rat(sj);
                            pos.push(v);
                        }
                    }
                    let mut v = vec![rat(0); m];
                    v[i] = rat(2);
                    pos.push(v);
                }
                let rho: Vec<BigRational> = (0..m).map(|i| rat((m + 1 - i) as i64 - 1)).collect();
                for k in 0..=6u32 {
                    let mut lambda = vec![rat(0); m];
                    lambda[0] = rat(k as i64);
                    let d = dim_from_roots(&pos, &lambda, &rho);
                    assert_eq!(
                        d.to_integer(),
                        weyl_dimension(AlgebraId::Sp(2 * m as u32), HighestWeight::KL1(k))
                            .unwrap(),
                        "sp({}) k={}",
                        2 * m,
                        k
                    );
                }
            }
            // so(2m+1): roots {±L_i ± L_j} ∪ {±L_i}; rho = (m - i + 1/2) L_i
            for m in 2..=3usize {
                let mut pos = Vec::new();
                for i in 0..m {
                    for j in i + 1..m {
                        for (si, sj) in [(1, -1), (1, 1)] {
                            let mut v = vec![rat(0); m];
                            v[i] = rat(si);
                            v[j] = rat(sj);
                            pos.push(v);
                        }
                    }
                    let mut v = vec![rat(0); m];
                    v[i] = rat(1);
                    pos.push(v);
                }
                let rho: Vec<BigRational> =
                    (0..m).map(|i| rat2((2 * (m - i)) as i64 - 1, 2)).collect();
                for k in 0..=6u32 {
                    let mut lambda = vec![rat(0); m];
                    lambda[0] = rat(k as i64);
                    let d = dim_from_roots(&pos, &lambda, &rho);
                    assert_eq!(
                        d.to_integer(),
                        weyl_dimension(AlgebraId::So(2 * m as u32 + 1), HighestWeight::KL1(k))
                            .unwrap(),
                        "so({}) k={}",
                        2 * m + 1,
                        k
                    );
                }
            }
            // so(2m): roots {±L_i ± L_j}; rho = (m - 1 - i) L_i
            for m in 2..=4usize {
                let mut pos = Vec::new();
                for i in 0..m {
                    for j in i + 1..m {
                        for (si, sj) in [(1, -1), (1, 1)] {
                            let mut v = vec![rat(0); m];
                            v[i] = rat(si);
                            v[j] = rat(sj);
                            pos.push(v);
                        }
                    }
                }
                let rho: Vec<BigRational> = (0..m).map(|i| rat((m - 1 - i) as i64)).collect();
                for k in 0..=6u32 {
                    let mut lambda = vec![rat(0); m];
                    lambda[0] = rat(k as i64);
                    let d = dim_from_roots(&pos, &lambda, &rho);
                    assert_eq!(
                        d.to_integer(),
                        weyl_dimension(AlgebraId::So(2 * m as u32), HighestWeight::KL1(k))
                            .unwrap(),
                        "so({}) k={}",
                        2 * m,
                        k
                    );
                }
            }
        }

        #[test]
        fn g2_matches_planar_roots() {
            // the six positive roots in the plane, Killing-normalized
            let sqrt3_free_roots: Vec<Vec<BigRational>> = vec![
                // store (x, y/sqrt(3)) so all inner products stay rational:
                // (x1,y1).(x2,y2) = x1 x2 + 3 (y1' y2')
                vec![rat(1), rat(0)],
                vec![rat2(3, 2), rat2(1, 2)],
                vec![rat2(1, 2), rat2(1, 2)],
                vec![rat(0), rat(1)],
                vec![rat2(-1, 2), rat2(1, 2)],
                vec![rat2(-3, 2), rat2(1, 2)],
            ];
            let dot = |a: &[BigRational], b: &[BigRational]| -> BigRational {
                &a[0] * &b[0] + rat(3) * &a[1] * &b[1]
            };
            let mut rho = vec![rat(0), rat(0)];
            for r in &sqrt3_free_roots {
                rho[0] += &r[0] * rat2(1, 2);
                rho[1] += &r[1] * rat2(1, 2);
            }
            for (a, b) in [(1u32, 0u32), (2, 0), (0, 1), (3, 0), (2, 1)] {
                // lambda = a alpha_3 + b alpha_4
                let lambda = vec![
                    rat2(a as i64, 2),
                    rat2(a as i64, 2) + rat(b as i64),
                ];
                let mut acc = BigRational::from_integer(BigInt::one());
                for alpha in &sqrt3_free_roots {
                    let lr = vec![&lambda[0] + &rho[0], &lambda[1] + &rho[1]];
                    acc *= dot(&lr, alpha) / dot(&rho, alpha);
                }
                assert!(acc.is_integer());
                assert_eq!(
                    acc.to_integer(),
                    weyl_dimension(AlgebraId::G2, HighestWeight::G2 { a, b }).unwrap(),
                    "g2 ({}, {})",
                    a,
                    b
                );
            }
        }
    }
}
