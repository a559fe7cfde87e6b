//! Explicit finite fields F_{p^d} with canonical moduli, dense exp/log
//! tables, absolute traces, subfield embeddings, and Frobenius orbits of
//! G_m = A^1 - {0}.
//!
//! Elements are coefficient vectors modulo the canonical irreducible, and
//! are also addressed by their mixed-radix index sum(coeffs[i] p^i), which
//! indexes every dense table below.

use crate::cyclotomic::is_small_prime;
use crate::error::{Error, Result};

pub const DEFAULT_FIELD_BUDGET: u64 = 1 << 24;

/// An explicit finite field F_{p^d}.
#[derive(Clone)]
pub struct FieldDescriptor {
    p: u64,
    d: u32,
    q: u64,
    /// monic canonical irreducible, low coefficients first, length d+1
    modulus: Vec<u64>,
    generator_idx: u32,
    /// exp[e] = index of generator^e, length q-1
    exp: Vec<u32>,
    /// log[idx] = e with exp[e] = idx; log[0] is a sentinel
    log: Vec<u32>,
    /// absolute trace to F_p per element index
    trace: Vec<u32>,
}

/// A field element as a reduced coefficient vector of length d.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    pub coeffs: Vec<u64>,
}

impl FieldDescriptor {
    /// Deterministic construction: the modulus is the lexicographically
    /// smallest monic irreducible of degree d (constant coefficient compared
    /// first), the generator is the least element index generating the
    /// multiplicative group.
    pub fn build(p: u64, d: u32, field_budget: u64) -> Result<Self> {
        if !is_small_prime(p) {
            return Err(Error::InvalidParameter(format!("{} is not prime", p)));
        }
        if d == 0 {
            return Err(Error::InvalidParameter("extension degree must be >= 1".into()));
        }
        let q = checked_pow(p, d, field_budget)?;
        let modulus = canonical_irreducible(p, d);
        let mut field = FieldDescriptor {
            p,
            d,
            q,
            modulus,
            generator_idx: 0,
            exp: Vec::new(),
            log: Vec::new(),
            trace: Vec::new(),
        };
        field.generator_idx = field.find_generator()?;
        field.build_log_tables();
        field.build_trace_table();
        Ok(field)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn generator(&self) -> FieldElement {
        self.element_of_index(self.generator_idx)
    }

    pub fn generator_index(&self) -> u32 {
        self.generator_idx
    }

    // ----- element <-> index -----

    pub fn index_of(&self, x: &FieldElement) -> u32 {
        debug_assert_eq!(x.coeffs.len(), self.d as usize);
        let mut idx = 0u64;
        for c in x.coeffs.iter().rev() {
            idx = idx * self.p + c;
        }
        idx as u32
    }

    pub fn element_of_index(&self, idx: u32) -> FieldElement {
        let mut coeffs = vec![0u64; self.d as usize];
        let mut rest = idx as u64;
        for c in coeffs.iter_mut() {
            *c = rest % self.p;
            rest /= self.p;
        }
        FieldElement { coeffs }
    }

    pub fn zero(&self) -> FieldElement {
        self.element_of_index(0)
    }

    pub fn one(&self) -> FieldElement {
        self.element_of_index(1)
    }

    /// Constant element for a residue mod p.
    pub fn constant(&self, c: u64) -> FieldElement {
        self.element_of_index((c % self.p) as u32)
    }

    // ----- arithmetic on indices -----

    pub fn add_idx(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        let (mut a, mut b) = (a as u64, b as u64);
        let mut out = 0u64;
        let mut place = 1u64;
        while a != 0 || b != 0 {
            let s = (a % self.p + b % self.p) % self.p;
            out += s * place;
            place *= self.p;
            a /= self.p;
            b /= self.p;
        }
        out as u32
    }

    pub fn neg_idx(&self, a: u32) -> u32 {
        if self.p == 2 {
            return a;
        }
        let mut a = a as u64;
        let mut out = 0u64;
        let mut place = 1u64;
        while a != 0 {
            let digit = a % self.p;
            let nd = if digit == 0 { 0 } else { self.p - digit };
            out += nd * place;
            place *= self.p;
            a /= self.p;
        }
        out as u32
    }

    pub fn sub_idx(&self, a: u32, b: u32) -> u32 {
        self.add_idx(a, self.neg_idx(b))
    }

    pub fn mul_idx(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let e = (self.log[a as usize] as u64 + self.log[b as usize] as u64) % (self.q - 1);
        self.exp[e as usize]
    }

    pub fn inv_idx(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::InvalidParameter("inverse of zero".into()));
        }
        let e = self.log[a as usize] as u64;
        let inv = (self.q - 1 - e) % (self.q - 1);
        Ok(self.exp[inv as usize])
    }

    pub fn pow_idx(&self, a: u32, e: u64) -> u32 {
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let le = (self.log[a as usize] as u128 * e as u128 % (self.q - 1) as u128) as u64;
        self.exp[le as usize]
    }

    /// x^p on indices.
    pub fn frobenius_idx(&self, a: u32) -> u32 {
        self.pow_idx(a, self.p)
    }

    // ----- element-level operations -----

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(x, y)| (x + y) % self.p)
            .collect();
        FieldElement { coeffs }
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.element_of_index(self.mul_idx(self.index_of(a), self.index_of(b)))
    }

    /// Absolute trace Tr(x) = x + x^p + ... + x^(p^(d-1)) as a residue mod p.
    pub fn absolute_trace(&self, x: &FieldElement) -> u64 {
        self.trace[self.index_of(x) as usize] as u64
    }

    pub fn trace_of_index(&self, idx: u32) -> u32 {
        self.trace[idx as usize]
    }

    /// Discrete logarithm with generator |-> 1.
    pub fn dlog(&self, x: &FieldElement) -> Result<u64> {
        let idx = self.index_of(x);
        if idx == 0 {
            return Err(Error::InvalidParameter("dlog of zero".into()));
        }
        Ok(self.log[idx as usize] as u64)
    }

    /// The full index -> exponent table (index 0 holds a sentinel).
    pub fn dlog_table(&self) -> &[u32] {
        &self.log
    }

    pub fn exp_table(&self) -> &[u32] {
        &self.exp
    }

    // ----- construction internals -----

    fn find_generator(&self) -> Result<u32> {
        let group = self.q - 1;
        let prime_factors = distinct_prime_factors(group);
        'cand: for idx in 1..self.q {
            let cand = self.poly_of_index(idx as u32);
            for &ell in &prime_factors {
                let e = group / ell;
                if poly_pow_mod(&cand, e, &self.modulus, self.p) == vec![1] {
                    continue 'cand;
                }
            }
            return Ok(idx as u32);
        }
        Err(Error::Internal("no multiplicative generator found".into()))
    }

    fn poly_of_index(&self, idx: u32) -> Vec<u64> {
        let e = self.element_of_index(idx);
        poly_trim(e.coeffs)
    }

    fn build_log_tables(&mut self) {
        let q = self.q as usize;
        let mut exp = Vec::with_capacity(q - 1);
        let mut log = vec![u32::MAX; q];
        let g = self.poly_of_index(self.generator_idx);
        let mut cur = vec![1u64];
        for e in 0..(q - 1) {
            let idx = self.index_of_poly(&cur);
            exp.push(idx);
            log[idx as usize] = e as u32;
            cur = poly_mul_mod(&cur, &g, &self.modulus, self.p);
        }
        self.exp = exp;
        self.log = log;
    }

    fn index_of_poly(&self, poly: &[u64]) -> u32 {
        let mut idx = 0u64;
        for c in poly.iter().rev() {
            idx = idx * self.p + c;
        }
        idx as u32
    }

    fn build_trace_table(&mut self) {
        // traces of the basis monomials t^i via Frobenius iterates
        let mut basis_tr = vec![0u64; self.d as usize];
        for i in 0..self.d as usize {
            let mut acc = vec![0u64; 1];
            let mut x = if i == 0 { vec![1u64] } else {
                let mut v = vec![0u64; i + 1];
                v[i] = 1;
                v
            };
            for _ in 0..self.d {
                acc = poly_add(&acc, &x, self.p);
                x = poly_pow_mod(&x, self.p, &self.modulus, self.p);
            }
            debug_assert!(acc.len() <= 1, "trace must lie in the prime field");
            basis_tr[i] = acc.first().copied().unwrap_or(0);
        }
        let q = self.q as usize;
        let mut trace = vec![0u32; q];
        let mut digits = vec![0u64; self.d as usize];
        let mut tr = 0u64;
        for idx in 0..q {
            trace[idx] = (tr % self.p) as u32;
            // increment the mixed-radix counter and update the linear form
            for (i, dg) in digits.iter_mut().enumerate() {
                *dg += 1;
                tr += basis_tr[i];
                if *dg < self.p {
                    break;
                }
                *dg = 0;
                tr += self.p * self.p - self.p * basis_tr[i]; // keep tr nonnegative; multiples of p cancel mod p
            }
        }
        self.trace = trace;
    }
}

impl std::fmt::Debug for FieldDescriptor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "FieldDescriptor(p={}, d={}, q={}, modulus={:?}, g=idx {})",
            self.p, self.d, self.q, self.modulus, self.generator_idx
        )
    }
}

fn checked_pow(p: u64, d: u32, budget: u64) -> Result<u64> {
    let mut q = 1u64;
    for _ in 0..d {
        q = q
            .checked_mul(p)
            .ok_or_else(|| Error::BudgetExceeded("field order overflows u64".into()))?;
        if q > budget {
            return Err(Error::BudgetExceeded(format!(
                "field order {}^{} exceeds budget {}",
                p, d, budget
            )));
        }
    }
    Ok(q)
}

pub fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut f = 2u64;
    while f * f <= n {
        if n % f == 0 {
            out.push(f);
            while n % f == 0 {
                n /= f;
            }
        }
        f += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// ----- dense polynomial arithmetic over F_p used only for construction -----

fn poly_trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
    if v.is_empty() {
        v.push(0);
    }
    v
}

fn poly_add(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out = vec![0u64; n];
    for i in 0..n {
        let x = a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0);
        out[i] = x % p;
    }
    poly_trim(out)
}

fn poly_mul_mod(a: &[u64], b: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    poly_rem(&prod, modulus, p)
}

fn poly_rem(a: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
    let d = modulus.len() - 1;
    let mut rem = a.to_vec();
    while rem.len() > d {
        let k = rem.len() - 1;
        let lead = rem[k];
        if lead != 0 {
            // modulus is monic
            for (j, &m) in modulus.iter().enumerate().take(d) {
                let sub = lead * m % p;
                let pos = k - d + j;
                rem[pos] = (rem[pos] + p - sub) % p;
            }
        }
        rem.pop();
    }
    poly_trim(rem)
}

fn poly_pow_mod(a: &[u64], mut e: u64, modulus: &[u64], p: u64) -> Vec<u64> {
    let mut base = poly_rem(a, modulus, p);
    let mut acc = vec![1u64];
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mul_mod(&acc, &base, modulus, p);
        }
        e >>= 1;
        if e > 0 {
            base = poly_mul_mod(&base, &base, modulus, p);
        }
    }
    acc
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = poly_trim(a.to_vec());
    let mut b = poly_trim(b.to_vec());
    while !(b.len() == 1 && b[0] == 0) {
        let r = poly_mod_general(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn poly_mod_general(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let db = b.len() - 1;
    let lead_inv = mod_inverse(b[db], p);
    let mut rem = a.to_vec();
    while rem.len() > db {
        let k = rem.len() - 1;
        let f = rem[k] * lead_inv % p;
        if f != 0 {
            for (j, &m) in b.iter().enumerate().take(db) {
                let pos = k - db + j;
                rem[pos] = (rem[pos] + p - f * m % p) % p;
            }
        }
        rem.pop();
    }
    poly_trim(rem)
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // p is prime
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

/// Irreducibility over F_p via the gcd criterion: f of degree d is
/// irreducible iff gcd(f, t^(p^i) - t) = 1 for all 1 <= i <= d/2.
pub fn is_irreducible(modulus: &[u64], p: u64) -> bool {
    let d = modulus.len() - 1;
    if d == 1 {
        return true;
    }
    // x^(p^i) mod f by iterated p-th powers
    let t = vec![0u64, 1];
    let mut xp = t.clone();
    for _ in 1..=(d / 2) {
        xp = poly_pow_mod(&xp, p, modulus, p);
        // xp - t
        let mut diff = xp.clone();
        if diff.len() < 2 {
            diff.resize(2, 0);
        }
        diff[1] = (diff[1] + p - 1) % p;
        let diff = poly_trim(diff);
        let g = poly_gcd(modulus, &diff, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

/// Lexicographically least monic irreducible of degree d over F_p,
/// comparing coefficient vectors low-to-high.
fn canonical_irreducible(p: u64, d: u32) -> Vec<u64> {
    let d = d as usize;
    let total = p.pow(d as u32);
    for code in 0..total {
        // c_0 is the most significant digit of the scan order
        let mut coeffs = vec![0u64; d + 1];
        coeffs[d] = 1;
        let mut rest = code;
        for i in (0..d).rev() {
            coeffs[i] = rest % p;
            rest /= p;
        }
        if is_irreducible(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials of every degree exist")
}

// ----- subfield embeddings -----

/// A ring embedding F_{p^d} -> F_{p^(de)} determined by sending the residue
/// class of t to the least-index root of the small modulus in the big field.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub small_q: u64,
    pub big_q: u64,
    /// indices in the big field of root^i for i < small.d
    pub powers: Vec<u32>,
}

/// All roots of the small modulus lie in the unique subfield of order
/// small.q, so scanning that subfield in index order finds the same first
/// root as a full index scan of the big field.
pub fn embed_subfield(small: &FieldDescriptor, big: &FieldDescriptor) -> Result<Embedding> {
    if small.p != big.p {
        return Err(Error::InvalidParameter(
            "embedding requires equal characteristic".into(),
        ));
    }
    if big.d % small.d != 0 {
        return Err(Error::InvalidParameter(format!(
            "degree {} does not divide {}",
            small.d, big.d
        )));
    }
    let root = find_min_root(small, big)?;
    let mut powers = Vec::with_capacity(small.d as usize);
    let mut cur = 1u32;
    for _ in 0..small.d {
        powers.push(cur);
        cur = big.mul_idx(cur, root);
    }
    Ok(Embedding {
        small_q: small.q,
        big_q: big.q,
        powers,
    })
}

fn find_min_root(small: &FieldDescriptor, big: &FieldDescriptor) -> Result<u32> {
    let eval = |x: u32| -> u32 {
        // Horner over the big field; modulus coefficients are prime-field
        // constants whose big-field index equals their value
        let mut acc = 0u32;
        for &c in small.modulus.iter().rev() {
            acc = big.mul_idx(acc, x);
            acc = big.add_idx(acc, c as u32);
        }
        acc
    };
    let mut best: Option<u32> = None;
    if eval(0) == 0 {
        return Ok(0);
    }
    let stride = (big.q - 1) / (small.q - 1);
    let mut e = 0u64;
    for _ in 0..(small.q - 1) {
        let cand = big.exp[e as usize];
        if eval(cand) == 0 {
            best = Some(match best {
                None => cand,
                Some(b) => b.min(cand),
            });
        }
        e += stride;
        if e >= big.q - 1 {
            e -= big.q - 1;
        }
    }
    best.ok_or_else(|| {
        Error::Internal("no root of subfield modulus found; corrupted descriptor".into())
    })
}

impl Embedding {
    pub fn apply_idx(&self, small: &FieldDescriptor, big: &FieldDescriptor, idx: u32) -> u32 {
        let x = small.element_of_index(idx);
        let mut acc = 0u32;
        for (i, &c) in x.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let term = big.mul_idx(c as u32, self.powers[i]);
            acc = big.add_idx(acc, term);
        }
        acc
    }
}

// ----- closed points of G_m -----

/// A closed point of G_m over F_q: a Frobenius orbit in some F_{q^m}.
#[derive(Clone, Debug)]
pub struct ClosedPoint {
    pub degree: u32,
    pub representative: FieldElement,
    pub orbit: Vec<FieldElement>,
}

/// Partition F_{q^m}^* (the field must have degree a*m over F_p, q = p^a)
/// into orbits of x -> x^q. Representatives are the least discrete-log
/// exponent in each orbit.
pub fn closed_points(field: &FieldDescriptor, base_a: u32, m: u32) -> Result<Vec<ClosedPoint>> {
    let reps = closed_point_reps(field, base_a, m)?;
    let q = field.p.pow(base_a);
    let group = field.q - 1;
    Ok(reps
        .into_iter()
        .map(|(degree, e)| {
            let mut orbit = Vec::with_capacity(degree as usize);
            let mut cur = e;
            for _ in 0..degree {
                orbit.push(field.element_of_index(field.exp[cur as usize]));
                cur = ((cur as u128 * q as u128) % group as u128) as u64;
            }
            ClosedPoint {
                degree,
                representative: orbit[0].clone(),
                orbit,
            }
        })
        .collect())
}

/// Slim orbit enumeration: (degree, representative dlog exponent) pairs.
pub fn closed_point_reps(
    field: &FieldDescriptor,
    base_a: u32,
    m: u32,
) -> Result<Vec<(u32, u64)>> {
    if field.d != base_a * m {
        return Err(Error::InvalidParameter(format!(
            "field degree {} is not a*m = {}*{}",
            field.d, base_a, m
        )));
    }
    let q = field.p.pow(base_a);
    let group = field.q - 1;
    let mut visited = vec![false; group as usize];
    let mut out = Vec::new();
    for e in 0..group {
        if visited[e as usize] {
            continue;
        }
        let mut size = 0u32;
        let mut cur = e;
        loop {
            visited[cur as usize] = true;
            size += 1;
            cur = ((cur as u128 * q as u128) % group as u128) as u64;
            if cur == e {
                break;
            }
        }
        out.push((size, e));
    }
    Ok(out)
}
