//! End-to-end assembly of L(k, n, T): field towers, Kloosterman tables by
//! level, closed-point characteristic polynomials, global power sums, and
//! extraction of the non-trivial factor against the closed-form trivial
//! factors.
//!
//! The series of L times h0 h2 / (det0 detInf) is a polynomial of small
//! degree (the non-trivial factor), so the escalation loop grows the number
//! of computed power sums until that series terminates with `slack` zero
//! coefficients to spare, instead of reconstructing L itself, whose degree
//! would demand table levels far beyond budget for n >= 3.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::Arc;

use num_bigint::BigInt;

use crate::cache::TableCache;
use crate::error::{Error, Result};
use crate::field::{closed_point_reps, embed_subfield, Embedding, FieldDescriptor};
use crate::frobenius::{charpoly_from_power_sums, power_sums_at_point, CharPoly, KlSource};
use crate::kloosterman::{Budgets, KloostermanTable};
use crate::lfunction::{global_power_sum, series_from_power_sums, PowerSumSequence};
use crate::poly::{IntPoly, RatFunc};
use crate::series::PowerSeriesZ;
use crate::trivial::{
    boundary_cohomology_factors, extract_nontrivial_factor, local_factor_at_infinity,
    local_factor_at_zero, peel_weight_factors, purity_check, tuple_census, DetInf, OrbitCensus,
    PurityReport, TrivialFactorBundle,
};

pub const DEFAULT_SLACK: usize = 3;
pub const PURITY_REL_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MethodChoice {
    Auto,
    Direct,
    Convolution,
}

#[derive(Clone, Debug)]
pub struct PipelineConfig {
    pub p: u64,
    pub a: u32,
    pub n: u32,
    pub budgets: Budgets,
    pub method: MethodChoice,
    pub slack: usize,
    pub m_max_override: Option<u32>,
    pub cache_dir: Option<PathBuf>,
}

impl PipelineConfig {
    pub fn new(p: u64, a: u32, n: u32) -> Self {
        PipelineConfig {
            p,
            a,
            n,
            budgets: Budgets::default(),
            method: MethodChoice::Auto,
            slack: DEFAULT_SLACK,
            m_max_override: None,
            cache_dir: None,
        }
    }

    pub fn q(&self) -> u64 {
        self.p.pow(self.a)
    }
}

/// Everything the pipeline produces for one k.
#[derive(Clone, Debug)]
pub struct LResult {
    pub n: u32,
    pub k: u32,
    pub q: u64,
    pub l: RatFunc,
    pub nontrivial: IntPoly,
    pub det0: IntPoly,
    pub det_inf: DetInf,
    pub h0: IntPoly,
    pub h2: IntPoly,
    pub exceptional: bool,
    pub census: Option<OrbitCensus>,
    pub s_values: Vec<BigInt>,
    pub series: PowerSeriesZ,
    pub m_used: u32,
    pub purity: PurityReport,
}

pub struct Pipeline {
    cfg: PipelineConfig,
    q: u64,
    base: Arc<FieldDescriptor>,
    fields: BTreeMap<u32, Arc<FieldDescriptor>>,
    tables: BTreeMap<u32, KloostermanTable>,
    embeddings: BTreeMap<(u32, u32), Embedding>,
    /// characteristic polynomials of points of each exact degree
    points: BTreeMap<u32, Vec<CharPoly>>,
    point_reps: BTreeMap<u32, Vec<u64>>,
    s_cache: BTreeMap<(u32, u32), BigInt>,
    cache: Option<TableCache>,
}

impl Pipeline {
    pub fn new(cfg: PipelineConfig) -> Result<Self> {
        if cfg.n < 2 {
            return Err(Error::InvalidParameter(
                "rank n must be at least 2".into(),
            ));
        }
        if cfg.a < 1 {
            return Err(Error::InvalidParameter("base degree a must be >= 1".into()));
        }
        let base = Arc::new(FieldDescriptor::build(
            cfg.p,
            cfg.a,
            cfg.budgets.field_budget,
        )?);
        let q = base.order();
        let cache = match &cfg.cache_dir {
            Some(dir) => Some(TableCache::new(dir)?),
            None => None,
        };
        let mut fields = BTreeMap::new();
        fields.insert(1, base.clone());
        Ok(Pipeline {
            cfg,
            q,
            base,
            fields,
            tables: BTreeMap::new(),
            embeddings: BTreeMap::new(),
            points: BTreeMap::new(),
            point_reps: BTreeMap::new(),
            s_cache: BTreeMap::new(),
            cache,
        })
    }

    pub fn config(&self) -> &PipelineConfig {
        &self.cfg
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn base_field(&self) -> &Arc<FieldDescriptor> {
        &self.base
    }

    pub fn field(&mut self, level: u32) -> Result<Arc<FieldDescriptor>> {
        if let Some(f) = self.fields.get(&level) {
            return Ok(f.clone());
        }
        let f = Arc::new(FieldDescriptor::build(
            self.cfg.p,
            self.cfg.a * level,
            self.cfg.budgets.field_budget,
        )?);
        self.fields.insert(level, f.clone());
        Ok(f)
    }

    pub fn ensure_table(&mut self, level: u32) -> Result<()> {
        if self.tables.contains_key(&level) {
            return Ok(());
        }
        let field = self.field(level)?;
        if let Some(cache) = &self.cache {
            if let Some(t) = cache.load(field.clone(), self.cfg.a, self.cfg.n)? {
                self.tables.insert(level, t);
                return Ok(());
            }
        }
        let t = match self.cfg.method {
            MethodChoice::Direct => KloostermanTable::build_direct(
                field,
                self.cfg.n,
                self.cfg.a,
                &self.cfg.budgets,
            )?,
            MethodChoice::Auto | MethodChoice::Convolution => {
                KloostermanTable::build_convolution(
                    field,
                    self.cfg.n,
                    self.cfg.a,
                    &self.cfg.budgets,
                    false,
                )?
            }
        };
        if let Some(cache) = &self.cache {
            cache.store(&t)?;
        }
        self.tables.insert(level, t);
        Ok(())
    }

    pub fn table(&mut self, level: u32) -> Result<&KloostermanTable> {
        self.ensure_table(level)?;
        Ok(self.tables.get(&level).expect("table just ensured"))
    }

    fn ensure_embedding(&mut self, from: u32, to: u32) -> Result<()> {
        if from == to || self.embeddings.contains_key(&(from, to)) {
            return Ok(());
        }
        let small = self.field(from)?;
        let big = self.field(to)?;
        let emb = embed_subfield(&small, &big)?;
        self.embeddings.insert((from, to), emb);
        Ok(())
    }

    /// Characteristic polynomials of all closed points of exact degree d.
    pub fn ensure_points(&mut self, d: u32) -> Result<()> {
        if self.points.contains_key(&d) {
            return Ok(());
        }
        for j in 1..self.cfg.n {
            self.ensure_table(d * j)?;
        }
        let field = self.field(d)?;
        let reps = closed_point_reps(&field, self.cfg.a, d)?;
        let n = self.cfg.n;
        let q = self.q;
        let mut charpolys = Vec::new();
        let mut exps = Vec::new();
        for (degree, e) in reps {
            if degree != d {
                continue;
            }
            let ps = power_sums_at_point(e, d, n, self)?;
            let cp = charpoly_from_power_sums(&ps, n, d, q)?;
            charpolys.push(cp);
            exps.push(e);
        }
        self.points.insert(d, charpolys);
        self.point_reps.insert(d, exps);
        Ok(())
    }

    /// S_m for the given k, cached.
    pub fn power_sum(&mut self, k: u32, m: u32) -> Result<BigInt> {
        if let Some(v) = self.s_cache.get(&(k, m)) {
            return Ok(v.clone());
        }
        for d in 1..=m {
            if m % d == 0 {
                self.ensure_points(d)?;
            }
        }
        let s = global_power_sum(k, m, &self.points)?;
        self.s_cache.insert((k, m), s.clone());
        Ok(s)
    }

    fn level_feasible(&self, level: u32) -> bool {
        let mut size = 1u64;
        for _ in 0..self.cfg.a * level {
            size = match size.checked_mul(self.cfg.p) {
                Some(s) if s <= self.cfg.budgets.field_budget => s,
                _ => return false,
            };
        }
        let l = size - 1;
        let p = self.cfg.p as u128;
        let n = self.cfg.n as u128;
        let naive = (n - 1) * (l as u128) * (l as u128) * p;
        if naive <= self.cfg.budgets.op_budget as u128 {
            return true;
        }
        let padded = (2 * l).next_power_of_two() as u128;
        let fft = (n - 1) * 3 * (p + 1) * padded * (padded.trailing_zeros() as u128) * 2;
        fft <= self.cfg.budgets.op_budget as u128
    }

    /// Largest m such that every table level needed for S_1..S_m fits the
    /// budgets.
    pub fn max_feasible_m(&self) -> u32 {
        let mut m = 0u32;
        while m < 64 {
            let next = m + 1;
            if !self.level_feasible(next * (self.cfg.n - 1)) {
                break;
            }
            m = next;
        }
        m
    }

    /// The full pipeline for one k.
    pub fn lfunction(&mut self, k: u32) -> Result<LResult> {
        let n = self.cfg.n;
        let p = self.cfg.p;
        let q = self.q;
        let census = if (q - 1) % n as u64 == 0 {
            Some(tuple_census(n, k, &self.base, None)?)
        } else {
            None
        };
        let det0 = local_factor_at_zero(n, k, q)?;
        let (h0, h2) = boundary_cohomology_factors(n, k, q, p);
        let closed_inf: Option<IntPoly> = match &census {
            Some(c) => Some(local_factor_at_infinity(c)),
            None if n % 2 == 0 && k % 2 == 1 => Some(IntPoly::one()),
            None => None,
        };
        if closed_inf.is_none() && (k * (n - 1)) % 2 == 1 {
            return Err(Error::Internal(
                "empirical infinity factor needs an integral weight".into(),
            ));
        }
        let slack = self.cfg.slack;
        let m_feasible = self.max_feasible_m();
        if m_feasible == 0 {
            return Err(Error::BudgetExceeded(
                "not even S_1 is computable within the budgets".into(),
            ));
        }
        let mut m_cap = match self.cfg.m_max_override {
            Some(m) => m.min(m_feasible).max(1),
            None => (slack as u32 + 2).min(m_feasible),
        };
        let (target, lser, seq, m_used) = loop {
            let mut s_values = Vec::with_capacity(m_cap as usize);
            for m in 1..=m_cap {
                s_values.push(self.power_sum(k, m)?);
            }
            let seq = PowerSumSequence {
                k,
                n,
                q,
                s: s_values,
            };
            if !seq.check_weil_bound() {
                return Err(Error::Internal(
                    "global power sums violate the Weil bound".into(),
                ));
            }
            let lser = series_from_power_sums(&seq)?;
            let order = m_cap as usize;
            let mut target = lser.mul_trunc(&h0.series_prefix(order), order);
            target = target.mul_trunc(&h2.series_prefix(order), order);
            target = target.div_trunc(&det0.series_prefix(order), order)?;
            if let Some(di) = &closed_inf {
                target = target.div_trunc(&di.series_prefix(order), order)?;
            }
            let tz = target.trailing_zeros().min(order);
            if tz >= slack {
                break (target, lser, seq, m_cap);
            }
            if self.cfg.m_max_override.is_some() {
                return Err(Error::ReconstructionFailed(format!(
                    "series did not terminate by the requested m = {} (trailing zeros {} < slack {})",
                    m_cap, tz, slack
                )));
            }
            let next = (m_cap + (m_cap / 2).max(2)).min(m_feasible);
            if next == m_cap {
                return Err(Error::BudgetExceeded(format!(
                    "series still untermimated at m = {}, and larger table levels exceed the budgets",
                    m_cap
                )));
            }
            m_cap = next;
        };
        let deg = m_used as usize - target.trailing_zeros().min(m_used as usize);
        let poly = IntPoly::from_series_prefix(&target, deg);
        let (det_inf, k_poly) = match closed_inf {
            Some(di) => (DetInf::Closed(di), poly),
            None => {
                let (peeled, rest) = peel_weight_factors(&poly, q, k * (n - 1) / 2);
                (DetInf::Empirical(peeled), rest)
            }
        };
        let bundle = TrivialFactorBundle {
            n,
            k,
            q,
            p,
            det0: det0.clone(),
            det_inf: det_inf.clone(),
            h0: h0.clone(),
            h2: h2.clone(),
            exceptional: !h2.is_one(),
        };
        // assemble L and close the loop through the factorization identity
        let num = k_poly.mul(&det0).mul(det_inf.poly());
        let den = h0.mul(&h2);
        let l = RatFunc::reduced(num, den)?;
        let lhs = l.num.mul(&h0).mul(&h2);
        let rhs = l.den.mul(&k_poly).mul(&det0).mul(det_inf.poly());
        if lhs != rhs {
            return Err(Error::Internal(
                "assembled L fails the trivial-factor identity".into(),
            ));
        }
        let back = l.series_prefix(m_used as usize)?;
        if back.c != lser.c {
            return Err(Error::Internal(
                "assembled L disagrees with the computed power sums".into(),
            ));
        }
        let extracted = extract_nontrivial_factor(&l, &bundle)?;
        if extracted != k_poly {
            return Err(Error::Internal(
                "extractor round-trip produced a different non-trivial factor".into(),
            ));
        }
        let purity = purity_check(&k_poly, q, k * (n - 1) + 1, PURITY_REL_TOL);
        Ok(LResult {
            n,
            k,
            q,
            l,
            nontrivial: k_poly,
            det0,
            det_inf,
            h0,
            h2,
            exceptional: bundle.exceptional,
            census,
            s_values: seq.s,
            series: lser,
            m_used,
            purity,
        })
    }

    /// Validate the forced determinant: for every point of degree d with
    /// q^(dn) within `max_field`, the n-th power sum predicted by the
    /// characteristic polynomial equals the directly computed Kloosterman
    /// value at level d n.
    pub fn determinant_check(&mut self, max_field: u64) -> Result<Vec<(u32, usize)>> {
        let n = self.cfg.n;
        let mut checked = Vec::new();
        let mut d = 1u32;
        loop {
            let mut size: u64 = 1;
            let mut overflow = false;
            for _ in 0..(d * n) {
                size = match size.checked_mul(self.q) {
                    Some(s) => s,
                    None => {
                        overflow = true;
                        break;
                    }
                };
            }
            if overflow || size > max_field {
                break;
            }
            if !self.level_feasible(d * n) {
                break;
            }
            self.ensure_points(d)?;
            self.ensure_table(d * n)?;
            let reps = self.point_reps.get(&d).expect("points ensured").clone();
            let charpolys = self.points.get(&d).expect("points ensured").clone();
            let mut count = 0usize;
            for (e, cp) in reps.iter().zip(charpolys.iter()) {
                let predicted = cp.power_sums(n)[n as usize - 1].clone();
                let idx = self.embed_exponent(*e, d, d * n)?;
                let direct = self.table(d * n)?.value_by_index(idx)?;
                let direct = if n % 2 == 0 { direct.neg() } else { direct };
                if predicted != direct {
                    return Err(Error::Internal(format!(
                        "determinant assumption fails at a degree-{} point",
                        d
                    )));
                }
                count += 1;
            }
            checked.push((d, count));
            d += 1;
        }
        Ok(checked)
    }
}

impl KlSource for Pipeline {
    fn table(&mut self, level: u32) -> Result<&KloostermanTable> {
        Pipeline::table(self, level)
    }

    fn embed_exponent(&mut self, rep_exponent: u64, from: u32, to: u32) -> Result<u32> {
        if from == to {
            let f = self.field(from)?;
            return Ok(f.exp_table()[rep_exponent as usize]);
        }
        self.ensure_embedding(from, to)?;
        let small = self.field(from)?;
        let big = self.field(to)?;
        let emb = self
            .embeddings
            .get(&(from, to))
            .expect("embedding just ensured");
        let idx_small = small.exp_table()[rep_exponent as usize];
        Ok(emb.apply_idx(&small, &big, idx_small))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pipeline(p: u64, a: u32, n: u32) -> Pipeline {
        Pipeline::new(PipelineConfig::new(p, a, n)).unwrap()
    }

    fn poly(v: &[i64]) -> IntPoly {
        IntPoly::new(v.iter().map(|&x| BigInt::from(x)).collect())
    }

    #[test]
    fn anchor_l_1_2_over_f3() {
        // L(1, 2, T) over F_3 is exactly 1 - T with K = 1
        let mut pipe = pipeline(3, 1, 2);
        let r = pipe.lfunction(1).unwrap();
        assert_eq!(r.l.num, poly(&[1, -1]));
        assert!(r.l.den.is_one());
        assert!(r.nontrivial.is_one());
        assert!(r.purity.pass);
        // the documented S_1 value
        assert_eq!(r.s_values[0], BigInt::from(-1));
    }

    #[test]
    fn k0_truncates_to_zeta_function() {
        // Sym^0: L = (1-T)/(1-qT), K = 1
        let mut pipe = pipeline(3, 1, 2);
        let r = pipe.lfunction(0).unwrap();
        assert_eq!(r.l.num, poly(&[1, -1]));
        assert_eq!(r.l.den, poly(&[1, -3]));
        assert!(r.nontrivial.is_one());
        assert!(r.exceptional);
    }

    #[test]
    fn k2_over_f3_factorization() {
        let mut pipe = pipeline(3, 1, 2);
        let r = pipe.lfunction(2).unwrap();
        // S_1 = -2 + 1 from the two points of F_3^*
        assert_eq!(r.s_values[0], BigInt::from(-1));
        assert!(r.purity.pass, "{:?}", r.purity.violations);
        // identity L h0 h2 = K det0 detInf holds by construction; sanity:
        let lhs = r.l.num.mul(&r.h0).mul(&r.h2);
        let rhs = r
            .l
            .den
            .mul(&r.nontrivial)
            .mul(&r.det0)
            .mul(r.det_inf.poly());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn exceptional_case_q4_n3_k2() {
        // p = 2, n = 3 odd, k = 2 even: nontrivial h0, h2 and the L-pole
        let mut pipe = pipeline(2, 2, 3);
        let r = pipe.lfunction(2).unwrap();
        assert!(r.exceptional);
        assert_eq!(r.h0, poly(&[1, -16]));
        assert_eq!(r.h2, poly(&[1, -64]));
        // denominator of L is the H^2 pole after h0 cancels into detInf
        assert_eq!(r.l.den, poly(&[1, -64]));
        assert!(r.purity.pass, "{:?}", r.purity.violations);
    }

    #[test]
    fn determinant_check_small() {
        let mut pipe = pipeline(3, 1, 2);
        let checked = pipe.determinant_check(1 << 14).unwrap();
        assert!(!checked.is_empty());
        let total: usize = checked.iter().map(|&(_, c)| c).sum();
        assert!(total > 0);
    }

    #[test]
    fn cached_pipeline_matches_cold() {
        let dir = std::env::temp_dir().join(format!(
            "symkl-pipe-cache-{}",
            std::process::id()
        ));
        let _ = std::fs::remove_dir_all(&dir);
        let mut cfg = PipelineConfig::new(3, 1, 2);
        cfg.cache_dir = Some(dir.clone());
        let mut warm = Pipeline::new(cfg.clone()).unwrap();
        let first = warm.lfunction(2).unwrap();
        // second pipeline hits the cache files written by the first
        let mut cached = Pipeline::new(cfg).unwrap();
        let second = cached.lfunction(2).unwrap();
        assert_eq!(first.l, second.l);
        assert_eq!(first.nontrivial, second.nontrivial);
        assert_eq!(first.s_values, second.s_values);
        let _ = std::fs::remove_dir_all(&dir);
    }
}
