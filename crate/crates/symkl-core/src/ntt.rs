//! Exact cyclic convolution of nonnegative integer sequences via
//! number-theoretic transforms with CRT moduli chosen to exceed the
//! coefficient bound, plus a naive reference kernel.
//!
//! The tables this backs are group-ring valued: a function on a cyclic
//! group of order `len` with values in Z[Z/p] (p slots of counts). One
//! convolution step multiplies by the fixed additive-character layer, whose
//! slot-r component is the 0/1 indicator of elements with trace r.

use crate::error::{Error, Result};

/// (prime, max power-of-two transform length exponent, primitive root)
const NTT_PRIMES: [(u64, u32, u64); 5] = [
    (2013265921, 27, 31),
    (469762049, 26, 3),
    (167772161, 25, 3),
    (754974721, 24, 11),
    (998244353, 23, 3),
];

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, m);
        }
        a = mulmod(a, a, m);
        e >>= 1;
    }
    r
}

/// In-place iterative radix-2 NTT of power-of-two length.
fn ntt(data: &mut [u64], prime: u64, invert: bool, generator: u64) {
    let n = data.len();
    debug_assert!(n.is_power_of_two());
    // bit reversal
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            data.swap(i, j);
        }
    }
    let mut len = 2usize;
    while len <= n {
        let mut w = powmod(generator, (prime - 1) / len as u64, prime);
        if invert {
            w = powmod(w, prime - 2, prime);
        }
        for start in (0..n).step_by(len) {
            let mut wn = 1u64;
            for k in 0..len / 2 {
                let u = data[start + k];
                let v = mulmod(data[start + k + len / 2], wn, prime);
                data[start + k] = if u + v >= prime { u + v - prime } else { u + v };
                data[start + k + len / 2] = if u >= v { u - v } else { u + prime - v };
                wn = mulmod(wn, w, prime);
            }
        }
        len <<= 1;
    }
    if invert {
        let n_inv = powmod(n as u64, prime - 2, prime);
        for x in data.iter_mut() {
            *x = mulmod(*x, n_inv, prime);
        }
    }
}

/// One multiplication layer by the additive character, ready to apply to
/// group-ring tables over a cyclic group of order `len`.
pub struct ConvolutionEngine {
    len: usize,
    p: usize,
    mode: Mode,
}

enum Mode {
    Naive {
        trace_by_dlog: Vec<u32>,
    },
    Fft {
        padded: usize,
        primes: Vec<(u64, u64)>, // (prime, generator)
        /// forward spectra of the 0/1 trace-class indicators,
        /// per prime then per class
        char_spectra: Vec<Vec<Vec<u64>>>,
    },
}

impl ConvolutionEngine {
    /// `trace_by_dlog[e]` is the trace class of g^e; `bound` bounds every
    /// count that will ever appear in an output entry.
    pub fn new_naive(trace_by_dlog: Vec<u32>, p: usize) -> Self {
        let len = trace_by_dlog.len();
        ConvolutionEngine {
            len,
            p,
            mode: Mode::Naive { trace_by_dlog },
        }
    }

    pub fn new_fft(trace_by_dlog: &[u32], p: usize, bound: u128) -> Result<Self> {
        let len = trace_by_dlog.len();
        let padded = (2 * len).next_power_of_two();
        let log2n = padded.trailing_zeros();
        let mut primes = Vec::new();
        let mut product: u128 = 1;
        for &(prime, two_adic, generator) in NTT_PRIMES.iter() {
            if two_adic < log2n {
                continue;
            }
            primes.push((prime, generator));
            product = product.saturating_mul(prime as u128);
            if product > 2 * bound + 1 {
                break;
            }
        }
        if product <= 2 * bound + 1 {
            return Err(Error::BudgetExceeded(format!(
                "no NTT prime set covers length {} with bound {}",
                len, bound
            )));
        }
        let mut char_spectra = Vec::with_capacity(primes.len());
        for &(prime, generator) in &primes {
            let mut per_class = vec![vec![0u64; padded]; p];
            for (e, &t) in trace_by_dlog.iter().enumerate() {
                per_class[t as usize][e] = 1;
            }
            for row in per_class.iter_mut() {
                ntt(row, prime, false, generator);
            }
            char_spectra.push(per_class);
        }
        Ok(ConvolutionEngine {
            len,
            p,
            mode: Mode::Fft {
                padded,
                primes,
                char_spectra,
            },
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// out_c[e] = sum over e' of a[(c - t(e-e')) mod p][e'], the cyclic
    /// convolution of `a` with the character layer.
    pub fn apply(&self, a: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
        debug_assert_eq!(a.len(), self.p);
        match &self.mode {
            Mode::Naive { trace_by_dlog } => Ok(self.apply_naive(a, trace_by_dlog)),
            Mode::Fft {
                padded,
                primes,
                char_spectra,
            } => self.apply_fft(a, *padded, primes, char_spectra),
        }
    }

    fn apply_naive(&self, a: &[Vec<i64>], trace_by_dlog: &[u32]) -> Vec<Vec<i64>> {
        let (l, p) = (self.len, self.p);
        let mut out = vec![vec![0i64; l]; p];
        for (j, &t) in trace_by_dlog.iter().enumerate() {
            let t = t as usize;
            for c in 0..p {
                let src = &a[(c + p - t) % p];
                let dst = &mut out[c];
                // dst[(e + j) mod l] += src[e]
                let split = l - j;
                for e in 0..split {
                    dst[e + j] += src[e];
                }
                for e in split..l {
                    dst[e + j - l] += src[e];
                }
            }
        }
        out
    }

    fn apply_fft(
        &self,
        a: &[Vec<i64>],
        padded: usize,
        primes: &[(u64, u64)],
        char_spectra: &[Vec<Vec<u64>>],
    ) -> Result<Vec<Vec<i64>>> {
        let (l, p) = (self.len, self.p);
        // residues per prime per class, inverse-transformed and folded
        let mut folded: Vec<Vec<Vec<u64>>> = Vec::with_capacity(primes.len());
        for (pi, &(prime, generator)) in primes.iter().enumerate() {
            let mut a_spec = Vec::with_capacity(p);
            for row in a {
                let mut buf = vec![0u64; padded];
                for (e, &v) in row.iter().enumerate() {
                    debug_assert!(v >= 0);
                    buf[e] = (v as u64) % prime;
                }
                ntt(&mut buf, prime, false, generator);
                a_spec.push(buf);
            }
            let mut per_class = Vec::with_capacity(p);
            for c in 0..p {
                let mut acc = vec![0u64; padded];
                for r in 0..p {
                    let asrc = &a_spec[(c + p - r) % p];
                    let bsrc = &char_spectra[pi][r];
                    for i in 0..padded {
                        let t = acc[i] + mulmod(asrc[i], bsrc[i], prime);
                        acc[i] = if t >= prime { t - prime } else { t };
                    }
                }
                ntt(&mut acc, prime, true, generator);
                // fold linear convolution of length 2l-1 back to cyclic length l
                let mut row = vec![0u64; l];
                for e in 0..l {
                    let mut v = acc[e];
                    if e + l < padded {
                        v = (v + acc[e + l]) % prime;
                    }
                    row[e] = v;
                }
                per_class.push(row);
            }
            folded.push(per_class);
        }
        // CRT across primes
        let mut out = vec![vec![0i64; l]; p];
        for c in 0..p {
            for e in 0..l {
                let mut x: u128 = 0;
                let mut m: u128 = 1;
                for (pi, &(prime, _)) in primes.iter().enumerate() {
                    let r = folded[pi][c][e] as u128;
                    // t = (r - x) / m mod prime
                    let xm = (x % prime as u128) as u64;
                    let rm = r as u64;
                    let diff = if rm >= xm { rm - xm } else { rm + prime - xm };
                    let minv = powmod((m % prime as u128) as u64, prime - 2, prime);
                    let t = mulmod(diff, minv, prime);
                    x += m * t as u128;
                    m *= prime as u128;
                }
                if x > i64::MAX as u128 {
                    return Err(Error::Internal(
                        "convolution value exceeds i64; coefficient bound was wrong".into(),
                    ));
                }
                out[c][e] = x as i64;
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference(a: &[Vec<i64>], trace: &[u32], p: usize) -> Vec<Vec<i64>> {
        let l = trace.len();
        let mut out = vec![vec![0i64; l]; p];
        for e1 in 0..l {
            for (e2, &t) in trace.iter().enumerate() {
                for c in 0..p {
                    out[(c + t as usize) % p][(e1 + e2) % l] += a[c][e1];
                }
            }
        }
        out
    }

    #[test]
    fn naive_matches_reference() {
        let trace = vec![0u32, 1, 2, 1, 0, 2, 2];
        let p = 3;
        let a = vec![
            vec![1i64, 0, 2, 5, 1, 0, 3],
            vec![0i64, 4, 1, 1, 0, 2, 0],
            vec![2i64, 2, 0, 0, 1, 1, 7],
        ];
        let eng = ConvolutionEngine::new_naive(trace.clone(), p);
        assert_eq!(eng.apply(&a).unwrap(), reference(&a, &trace, p));
    }

    #[test]
    fn fft_matches_naive() {
        let l = 100usize;
        let p = 5usize;
        let trace: Vec<u32> = (0..l).map(|i| ((i * 7 + 3) % p) as u32).collect();
        let a: Vec<Vec<i64>> = (0..p)
            .map(|c| (0..l).map(|i| ((i * 13 + c * 31) % 97) as i64).collect())
            .collect();
        let naive = ConvolutionEngine::new_naive(trace.clone(), p);
        let bound = (l as u128) * 97;
        let fft = ConvolutionEngine::new_fft(&trace, p, bound).unwrap();
        assert_eq!(naive.apply(&a).unwrap(), fft.apply(&a).unwrap());
    }

    #[test]
    fn fft_large_values() {
        let l = 64usize;
        let p = 2usize;
        let trace: Vec<u32> = (0..l).map(|i| (i % 2) as u32).collect();
        let big = 1i64 << 40;
        let a: Vec<Vec<i64>> = (0..p)
            .map(|c| (0..l).map(|i| big + (i as i64) + c as i64).collect())
            .collect();
        let naive = ConvolutionEngine::new_naive(trace.clone(), p);
        let bound = (l as u128) * ((big as u128) + 100);
        let fft = ConvolutionEngine::new_fft(&trace, p, bound).unwrap();
        assert_eq!(naive.apply(&a).unwrap(), fft.apply(&a).unwrap());
    }
}
