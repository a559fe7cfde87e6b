//! Closed-form trivial factors of L(k, n, T): the local factor at 0 from
//! the m-series, the local factor at infinity from the sigma-orbit census
//! of S_k(n, p), the H^0/H^2 boundary factors, and the extraction and
//! purity check of the non-trivial factor.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::field::FieldDescriptor;
use crate::poly::{IntPoly, RatFunc};
use crate::rep::{monodromy_algebra, next_composition, trivial_multiplicity};
use crate::roots::{log2_abs, roots_with_multiplicity};
use crate::series::PowerSeriesZ;

/// c_k(u) for all u at once: the number of compositions of k into n parts
/// with weight sum j * i_j equal to u.
pub fn compositions_weight_counts(n: u32, k: u32) -> Vec<u64> {
    let umax = (k * (n - 1)) as usize;
    let mut counts = vec![0u64; umax + 1];
    let mut comp = vec![0u32; n as usize];
    comp[0] = k;
    loop {
        let u: usize = comp
            .iter()
            .enumerate()
            .map(|(j, &i)| j * i as usize)
            .sum();
        counts[u] += 1;
        if !next_composition(&mut comp) {
            break;
        }
    }
    counts
}

/// c_k(u) by exhaustive enumeration.
pub fn composition_count(n: u32, k: u32, u: u32) -> u64 {
    if u > k * (n - 1) {
        return 0;
    }
    compositions_weight_counts(n, k)[u as usize]
}

/// Prefix of the m-series
/// (1-x^n)...(1-x^(n+k-1)) / ((1-x^2)...(1-x^k)) = sum m_k(u) x^u,
/// computed by exact series division and cross-checked against
/// c_k(u) - c_k(u-1).
pub fn m_coefficients(n: u32, k: u32, u_max: u32) -> Result<PowerSeriesZ> {
    let order = u_max as usize;
    let num = PowerSeriesZ::product_one_minus(
        (n as usize..n as usize + k as usize).map(|i| i),
        order,
    );
    let den = PowerSeriesZ::product_one_minus((2..=k as usize).map(|i| i), order);
    let series = num.div_trunc(&den, order)?;
    if k == 0 {
        // Sym^0: both products are empty and the series is 1; the
        // composition-difference identity needs k >= 1
        return Ok(series);
    }
    // independent route: difference of composition counts
    let counts = compositions_weight_counts(n, k);
    for u in 0..=order {
        let c = counts.get(u).copied().unwrap_or(0) as i64;
        let c_prev = if u == 0 {
            0
        } else {
            counts.get(u - 1).copied().unwrap_or(0) as i64
        };
        if series.c[u] != BigInt::from(c - c_prev) {
            return Err(Error::Internal(format!(
                "m-series disagrees with composition counts at u={} (n={}, k={})",
                u, n, k
            )));
        }
    }
    Ok(series)
}

/// det(1 - F_0 T) on the inertia invariants at 0:
/// product over 0 <= u <= floor(k(n-1)/2) of (1 - q^u T)^(m_k(u)).
pub fn local_factor_at_zero(n: u32, k: u32, q: u64) -> Result<IntPoly> {
    let top = k * (n - 1) / 2;
    let m = m_coefficients(n, k, top)?;
    let mut out = IntPoly::one();
    for u in 0..=top {
        let mu = &m.c[u as usize];
        if mu.is_negative() {
            return Err(Error::Internal(format!(
                "negative multiplicity m_{}({}) = {} inside the product range",
                k, u, mu
            )));
        }
        if mu.is_zero() {
            continue;
        }
        let e: u32 = mu.try_into().map_err(|_| {
            Error::Internal("multiplicity exceeds u32".into())
        })?;
        out = out.mul(&IntPoly::one_minus(BigInt::from(q).pow(u)).pow(e));
    }
    Ok(out)
}

/// One sigma-orbit of S_k(n, p).
#[derive(Clone, Debug)]
pub struct Orbit {
    /// lexicographically least rotation
    pub representative: Vec<u32>,
    pub size: u32,
    /// whether v_j != 0; well-defined on the orbit for even k
    pub signed_nonzero: Option<bool>,
    /// parity of j_1 + 2 j_2 + ... + (n-1) j_(n-1) for the representative
    pub parity_odd: bool,
}

/// The set S_k(n, p) with its sigma-orbit decomposition and the counts
/// a_k, b_k, c_k that drive the infinity-factor case analysis.
#[derive(Clone, Debug)]
pub struct OrbitCensus {
    pub n: u32,
    pub k: u32,
    pub p: u64,
    pub q: u64,
    /// element index of the chosen primitive n-th root of unity in F_q
    pub zeta_index: u32,
    pub tuples: Vec<Vec<u32>>,
    pub orbits: Vec<Orbit>,
    pub a: u64,
    pub b: Option<u64>,
    pub c: Option<u64>,
}

fn rotate_right(t: &[u32]) -> Vec<u32> {
    let n = t.len();
    let mut out = Vec::with_capacity(n);
    out.push(t[n - 1]);
    out.extend_from_slice(&t[..n - 1]);
    out
}

fn least_rotation(t: &[u32]) -> Vec<u32> {
    let mut best = t.to_vec();
    let mut cur = t.to_vec();
    for _ in 1..t.len() {
        cur = rotate_right(&cur);
        if cur < best {
            best = cur.clone();
        }
    }
    best
}

/// v_j as a signed combination of monomials: the n signed terms
/// (-1)^(j_(n-1)+...+j_(n-i)) e^(sigma^i(j)) accumulated literally.
pub fn signed_vector_support(tuple: &[u32]) -> BTreeMap<Vec<u32>, i64> {
    let n = tuple.len();
    let mut map: BTreeMap<Vec<u32>, i64> = BTreeMap::new();
    let mut rotated = tuple.to_vec();
    let mut sign_exp = 0u64;
    for i in 0..n {
        if i > 0 {
            sign_exp += tuple[n - i] as u64;
            rotated = rotate_right(&rotated);
        }
        let sign = if sign_exp % 2 == 0 { 1i64 } else { -1 };
        *map.entry(rotated.clone()).or_insert(0) += sign;
    }
    map.retain(|_, v| *v != 0);
    map
}

fn parity_odd(tuple: &[u32]) -> bool {
    tuple
        .iter()
        .enumerate()
        .map(|(i, &j)| i as u64 * j as u64)
        .sum::<u64>()
        % 2
        == 1
}

/// Enumerate S_k(n, p) over the base field (which supplies q and the
/// canonical generator), decompose into sigma-orbits and compute the counts.
/// Requires n | q - 1. An explicit zeta may be supplied to probe
/// primitive-root independence; None selects g^((q-1)/n).
pub fn tuple_census(
    n: u32,
    k: u32,
    base: &FieldDescriptor,
    zeta_override: Option<u32>,
) -> Result<OrbitCensus> {
    let q = base.order();
    let p = base.p();
    if n == 0 || (q - 1) % n as u64 != 0 {
        return Err(Error::InvalidParameter(format!(
            "n = {} does not divide q - 1 = {}",
            n,
            q - 1
        )));
    }
    let zeta_idx = match zeta_override {
        Some(z) => {
            // must have exact multiplicative order n
            let e = base.dlog(&base.element_of_index(z))?;
            let ord = (q - 1) / num_integer::gcd(q - 1, e);
            if ord != n as u64 {
                return Err(Error::InvalidParameter(format!(
                    "supplied zeta has order {}, expected {}",
                    ord, n
                )));
            }
            z
        }
        None => base.exp_table()[((q - 1) / n as u64) as usize],
    };
    let zeta_pows: Vec<u32> = {
        let mut v = Vec::with_capacity(n as usize);
        let mut cur = 1u32;
        for _ in 0..n {
            v.push(cur);
            cur = base.mul_idx(cur, zeta_idx);
        }
        v
    };
    // members of S_k(n, p): compositions with sum_i j_i zeta^i = 0 in F_q
    let mut tuples: Vec<Vec<u32>> = Vec::new();
    let mut comp = vec![0u32; n as usize];
    comp[0] = k;
    loop {
        let mut acc = 0u32;
        for (i, &j) in comp.iter().enumerate() {
            let scalar = (j as u64 % p) as u32;
            if scalar != 0 {
                acc = base.add_idx(acc, base.mul_idx(scalar, zeta_pows[i]));
            }
        }
        if acc == 0 {
            tuples.push(comp.clone());
        }
        if !next_composition(&mut comp) {
            break;
        }
    }
    // sigma-orbit decomposition
    let mut by_canon: BTreeMap<Vec<u32>, Vec<Vec<u32>>> = BTreeMap::new();
    for t in &tuples {
        by_canon
            .entry(least_rotation(t))
            .or_default()
            .push(t.clone());
    }
    let even_k = k % 2 == 0;
    let mut orbits = Vec::new();
    for (canon, members) in by_canon.iter() {
        let signed_nonzero = if even_k {
            // the flag must be orbit-well-defined: v_(sigma(j)) = +-v_j
            let base_support = signed_vector_support(canon);
            let nz = !base_support.is_empty();
            let mut cur = canon.clone();
            for _ in 1..canon.len() {
                let prev = cur.clone();
                cur = rotate_right(&cur);
                let s = signed_vector_support(&cur);
                let expected_sign = if prev[prev.len() - 1] % 2 == 0 { 1 } else { -1 };
                let mut flipped: BTreeMap<Vec<u32>, i64> = signed_vector_support(&prev);
                for v in flipped.values_mut() {
                    *v *= expected_sign;
                }
                if s != flipped {
                    return Err(Error::Internal(format!(
                        "v_(sigma j) != +-v_j on orbit {:?}",
                        canon
                    )));
                }
                if s.is_empty() != base_support.is_empty() {
                    return Err(Error::Internal(format!(
                        "signed-vanishing flag not orbit-constant on {:?}",
                        canon
                    )));
                }
            }
            Some(nz)
        } else {
            None
        };
        orbits.push(Orbit {
            representative: canon.clone(),
            size: members.len() as u32,
            signed_nonzero,
            parity_odd: parity_odd(canon),
        });
    }
    let a = orbits.len() as u64;
    let (b, c) = if even_k {
        let b = orbits
            .iter()
            .filter(|o| o.signed_nonzero == Some(true))
            .count() as u64;
        let c = orbits
            .iter()
            .filter(|o| o.signed_nonzero == Some(true) && o.parity_odd)
            .count() as u64;
        (Some(b), Some(c))
    } else {
        (None, None)
    };
    Ok(OrbitCensus {
        n,
        k,
        p,
        q,
        zeta_index: zeta_idx,
        tuples,
        orbits,
        a,
        b,
        c,
    })
}

/// det(1 - F_infinity T) on the inertia invariants at infinity, by the
/// three-way case analysis keyed on the census counts.
pub fn local_factor_at_infinity(census: &OrbitCensus) -> IntPoly {
    let (n, k, q) = (census.n, census.k, census.q);
    if n % 2 == 1 {
        let e = BigInt::from(q).pow(k * (n - 1) / 2);
        return IntPoly::one_minus(e).pow(census.a as u32);
    }
    if k % 2 == 1 {
        return IntPoly::one();
    }
    let b = census.b.expect("k even") as u32;
    let c = census.c.expect("k even") as u32;
    let e = BigInt::from(q).pow(k * (n - 1) / 2);
    let minus = IntPoly::one_minus(e.clone());
    let plus = IntPoly::one_plus(e);
    if (q - 1) % (2 * n as u64) == 0 {
        minus.pow(b)
    } else if n % 4 == 0 || k % 4 == 0 {
        plus.pow(c).mul(&minus.pow(b - c))
    } else {
        minus.pow(c).mul(&plus.pow(b - c))
    }
}

/// H^0 and H^2 factors: nontrivial exactly when Sym^k of the standard
/// representation of the monodromy group contains the trivial
/// representation (so/g2 with k even, and k = 0 for every group).
pub fn boundary_cohomology_factors(n: u32, k: u32, q: u64, p: u64) -> (IntPoly, IntPoly) {
    let alg = monodromy_algebra(n, p);
    if trivial_multiplicity(alg, k) == 1 {
        let h0 = IntPoly::one_minus(BigInt::from(q).pow(k * (n - 1) / 2));
        let h2 = IntPoly::one_minus(BigInt::from(q).pow((k * (n - 1) + 2) / 2));
        (h0, h2)
    } else {
        (IntPoly::one(), IntPoly::one())
    }
}

/// Provenance of the infinity factor: the closed form needs n | q - 1;
/// otherwise the factor is recovered empirically by peeling weight-k(n-1)
/// linear factors.
#[derive(Clone, Debug)]
pub enum DetInf {
    Closed(IntPoly),
    Empirical(IntPoly),
}

impl DetInf {
    pub fn poly(&self) -> &IntPoly {
        match self {
            DetInf::Closed(p) | DetInf::Empirical(p) => p,
        }
    }

    pub fn is_closed(&self) -> bool {
        matches!(self, DetInf::Closed(_))
    }
}

/// All trivial factors for one (n, k, q, p).
#[derive(Clone, Debug)]
pub struct TrivialFactorBundle {
    pub n: u32,
    pub k: u32,
    pub q: u64,
    pub p: u64,
    pub det0: IntPoly,
    pub det_inf: DetInf,
    pub h0: IntPoly,
    pub h2: IntPoly,
    /// the geometrically-trivial-subquotient case, where L acquires the
    /// pole 1 - q^((k(n-1)+2)/2) T
    pub exceptional: bool,
}

impl TrivialFactorBundle {
    pub fn closed(n: u32, k: u32, base: &FieldDescriptor) -> Result<Self> {
        let census = tuple_census(n, k, base, None)?;
        Self::from_census(n, k, base, &census)
    }

    pub fn from_census(
        n: u32,
        k: u32,
        base: &FieldDescriptor,
        census: &OrbitCensus,
    ) -> Result<Self> {
        let q = base.order();
        let p = base.p();
        let det0 = local_factor_at_zero(n, k, q)?;
        let det_inf = DetInf::Closed(local_factor_at_infinity(census));
        let (h0, h2) = boundary_cohomology_factors(n, k, q, p);
        let exceptional = !h2.is_one();
        Ok(TrivialFactorBundle {
            n,
            k,
            q,
            p,
            det0,
            det_inf,
            h0,
            h2,
            exceptional,
        })
    }

    pub fn with_empirical_det_inf(mut self, det_inf: IntPoly) -> Self {
        self.det_inf = DetInf::Empirical(det_inf);
        self
    }
}

/// K = L * h0 * h2 / (det0 * detInf), every division exact. An inexact
/// division falsifies the factorization and is the primary regression
/// signal.
pub fn extract_nontrivial_factor(l: &RatFunc, bundle: &TrivialFactorBundle) -> Result<IntPoly> {
    let numerator = l.num.mul(&bundle.h0).mul(&bundle.h2);
    let denominator = l
        .den
        .mul(&bundle.det0)
        .mul(bundle.det_inf.poly());
    let k = numerator.div_exact(&denominator).map_err(|e| {
        Error::InexactDivision(format!(
            "trivial-factor division failed for (n={}, k={}, q={}): {}",
            bundle.n, bundle.k, bundle.q, e
        ))
    })?;
    if !k.in_one_plus_t_z() {
        return Err(Error::Internal(
            "non-trivial factor does not lie in 1 + T Z[T]".into(),
        ));
    }
    Ok(k)
}

/// Purity report for the non-trivial factor at weight w.
#[derive(Clone, Debug)]
pub struct PurityReport {
    pub weight: u32,
    pub degree: usize,
    pub max_rel_deviation: f64,
    pub functional_equation_ok: bool,
    pub violations: Vec<String>,
    pub pass: bool,
}

/// Check that all reciprocal roots have |alpha| = q^(w/2) within rel_tol,
/// and that the coefficients satisfy the reversal identity
/// a_(D-j) = eps * a_j * q^(w(D-2j)/2) forced by purity over the reals.
pub fn purity_check(k_poly: &IntPoly, q: u64, w: u32, rel_tol: f64) -> PurityReport {
    let d = k_poly.degree();
    let mut violations = Vec::new();
    let mut max_rel = 0.0f64;
    if d > 0 {
        let target_log2 = w as f64 * (q as f64).log2() / 2.0;
        for (root, mult) in roots_with_multiplicity(k_poly) {
            // |alpha| = 1/|root|
            let alpha_log2 = -root.norm().log2();
            let rel = ((alpha_log2 - target_log2) * std::f64::consts::LN_2).abs();
            // log deviation ~ relative deviation for small values
            let rel = rel.min(f64::MAX);
            if rel > max_rel {
                max_rel = rel;
            }
            if rel > rel_tol {
                violations.push(format!(
                    "root of multiplicity {} has |alpha| = 2^{:.6}, expected 2^{:.6}",
                    mult, alpha_log2, target_log2
                ));
            }
        }
    }
    let functional_equation_ok = functional_equation_holds(k_poly, q, w, &mut violations);
    let pass = violations.is_empty() && functional_equation_ok;
    PurityReport {
        weight: w,
        degree: d,
        max_rel_deviation: max_rel,
        functional_equation_ok,
        violations,
        pass,
    }
}

fn functional_equation_holds(
    k_poly: &IntPoly,
    q: u64,
    w: u32,
    violations: &mut Vec<String>,
) -> bool {
    let d = k_poly.degree();
    if d == 0 {
        return true;
    }
    if (w as usize * d) % 2 == 1 {
        violations.push(format!(
            "odd weight {} with odd degree {} admits no integral functional equation",
            w, d
        ));
        return false;
    }
    // eps from j = 0: a_D = eps q^(wD/2)
    let qw = BigInt::from(q);
    let top = qw.pow((w as usize * d / 2) as u32);
    let a_d = k_poly.coeff(d);
    let eps = if a_d == top {
        1i64
    } else if a_d == -&top {
        -1
    } else {
        violations.push(format!(
            "leading coefficient {} is not +-q^(wD/2)",
            a_d
        ));
        return false;
    };
    for j in 0..=d / 2 {
        let t2 = w as usize * (d - 2 * j);
        if t2 % 2 == 1 {
            // only possible when both paired coefficients vanish
            if !k_poly.coeff(j).is_zero() || !k_poly.coeff(d - j).is_zero() {
                violations.push(format!(
                    "half-integral exponent at j = {} with nonzero coefficients",
                    j
                ));
                return false;
            }
            continue;
        }
        let scale = qw.pow((t2 / 2) as u32);
        let lhs = k_poly.coeff(d - j);
        let rhs = BigInt::from(eps) * k_poly.coeff(j) * &scale;
        if lhs != rhs {
            violations.push(format!(
                "functional equation fails at j = {}: {} != {}",
                j, lhs, rhs
            ));
            return false;
        }
    }
    true
}

/// Peel the maximal powers of (1 -+ q^(k(n-1)/2) T) off a polynomial:
/// the empirical route to det_inf when the closed form is not available.
/// Returns (peeled factor, remaining polynomial).
pub fn peel_weight_factors(poly: &IntPoly, q: u64, two_w_half: u32) -> (IntPoly, IntPoly) {
    let e = BigInt::from(q).pow(two_w_half);
    let minus = IntPoly::one_minus(e.clone());
    let plus = IntPoly::one_plus(e);
    let (em, rest) = poly.peel_factor(&minus);
    let (ep, rest) = rest.peel_factor(&plus);
    (minus.pow(em).mul(&plus.pow(ep)), rest)
}

/// Re-exported root-modulus histogram, used by callers wiring the
/// weight-split fallback; documented here because the weights of trivial
/// factors are integers <= k(n-1) while the non-trivial factor sits at
/// k(n-1) + 1.
pub fn weight_histogram(poly: &IntPoly, q: u64, rel_tol: f64) -> crate::roots::WeightSplit {
    crate::roots::weight_split(poly, q, rel_tol)
}

/// Scale sanity for huge coefficients: |a_j| may exceed f64; expose the
/// log2 magnitude for reporting.
pub fn coeff_log2(poly: &IntPoly, j: usize) -> Option<f64> {
    log2_abs(&poly.coeff(j))
}
