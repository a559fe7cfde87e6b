//! Command-line interface: `compute` emits canonical JSON (or CSV) for one
//! object, `verify` runs a named invariant suite and exits nonzero on any
//! failure.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use symkl::cache::entry_from_table;
use symkl::cyclotomic::is_small_prime;
use symkl::error::{Error, Result};
use symkl::kloosterman::Budgets;
use symkl::padic::limit_diagnostic;
use symkl::pipeline::{MethodChoice, Pipeline, PipelineConfig};
use symkl::rep::{weyl_dimension, AlgebraId, HighestWeight};
use symkl::report;
use symkl::suites;
use symkl::trivial::{tuple_census, TrivialFactorBundle};

#[derive(Parser)]
#[command(name = "symkl", version, about = "Symmetric-power Kloosterman L-functions over small finite fields")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute one object and emit canonical JSON
    Compute {
        #[command(subcommand)]
        object: ComputeCmd,
    },
    /// Run a named verification suite
    Verify {
        /// mseries | census | factorization | purity | congruence | padic |
        /// repdims | tables | all
        suite: String,
        #[arg(long, default_value_t = 5)]
        nmax: u32,
        #[arg(long, default_value_t = 8)]
        kmax: u32,
        /// table sweep bound for the `tables` suite
        #[arg(long, default_value_t = 1 << 10)]
        qmax: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
enum MethodArg {
    #[default]
    Auto,
    Direct,
    Conv,
}

impl From<MethodArg> for MethodChoice {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Auto => MethodChoice::Auto,
            MethodArg::Direct => MethodChoice::Direct,
            MethodArg::Conv => MethodChoice::Convolution,
        }
    }
}

#[derive(Args, Clone)]
struct BaseArgs {
    /// characteristic; may be omitted when --q is given
    #[arg(long)]
    p: Option<u64>,
    /// base extension degree, q = p^a
    #[arg(long)]
    a: Option<u32>,
    /// base field size q = p^a; may replace --p/--a
    #[arg(long)]
    q: Option<u64>,
    /// sheaf rank
    #[arg(long)]
    n: u32,
    /// elementary-operation budget
    #[arg(long)]
    budget: Option<u64>,
    /// largest field size the tower may use
    #[arg(long)]
    field_budget: Option<u64>,
    /// table cache directory
    #[arg(long, default_value = "./.klcache")]
    cache_dir: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    method: MethodArg,
}

#[derive(Subcommand)]
enum ComputeCmd {
    /// Kloosterman table over F_(q^ell)
    KlTable {
        #[command(flatten)]
        base: BaseArgs,
        /// table level: extension degree over the base field
        #[arg(long, default_value_t = 1)]
        ell: u32,
    },
    /// L(k, n, T) with all factors
    Lfunction {
        #[command(flatten)]
        base: BaseArgs,
        #[arg(long)]
        k: u32,
        /// pin the number of power sums instead of escalating
        #[arg(long)]
        m_max: Option<u32>,
        /// emit coefficient tables as CSV instead of JSON
        #[arg(long)]
        csv: bool,
    },
    /// Trivial factors and the orbit census
    Factors {
        #[command(flatten)]
        base: BaseArgs,
        #[arg(long)]
        k: u32,
    },
    /// The non-trivial factor K and its purity report
    Nontrivial {
        #[command(flatten)]
        base: BaseArgs,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        m_max: Option<u32>,
    },
    /// Weyl dimension of Gamma_(k L_1) (or a alpha_3 + b alpha_4 for g2)
    Repdim {
        /// sl | sp | so | g2
        #[arg(long)]
        alg: String,
        /// algebra parameter n for sl(n), sp(n), so(n)
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        k: u32,
        /// second g2 weight coordinate
        #[arg(long, default_value_t = 0)]
        b: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Convergence diagnostics along a p-adically Cauchy weight sequence
    Padic {
        #[command(flatten)]
        base: BaseArgs,
        /// comma-separated increasing weights, e.g. 2,11,29
        #[arg(long)]
        k_seq: String,
        /// truncation radius for the forced zero factors
        #[arg(long, default_value_t = 6)]
        r: u32,
    },
}

fn resolve_base(base: &BaseArgs) -> Result<(u64, u32)> {
    match (base.p, base.a, base.q) {
        (Some(p), a, None) => Ok((p, a.unwrap_or(1))),
        (p_opt, a_opt, Some(q)) => {
            let (p, a) = factor_prime_power(q)?;
            if let Some(p_given) = p_opt {
                if p_given != p {
                    return Err(Error::InvalidParameter(format!(
                        "--p {} conflicts with --q {} = {}^{}",
                        p_given, q, p, a
                    )));
                }
            }
            if let Some(a_given) = a_opt {
                if a_given != a {
                    return Err(Error::InvalidParameter(format!(
                        "--a {} conflicts with --q {} = {}^{}",
                        a_given, q, p, a
                    )));
                }
            }
            Ok((p, a))
        }
        (None, _, None) => Err(Error::InvalidParameter(
            "supply either --q or --p (with optional --a)".into(),
        )),
    }
}

fn factor_prime_power(q: u64) -> Result<(u64, u32)> {
    if q < 2 {
        return Err(Error::InvalidParameter(format!("{} is not a prime power", q)));
    }
    let mut p = 2u64;
    while p * p <= q {
        if q % p == 0 {
            let mut a = 0u32;
            let mut rest = q;
            while rest % p == 0 {
                rest /= p;
                a += 1;
            }
            if rest != 1 {
                return Err(Error::InvalidParameter(format!(
                    "{} is not a prime power",
                    q
                )));
            }
            return Ok((p, a));
        }
        p += 1;
    }
    Ok((q, 1))
}

fn pipeline_config(base: &BaseArgs, m_max: Option<u32>) -> Result<PipelineConfig> {
    let (p, a) = resolve_base(base)?;
    if base.n < 2 {
        return Err(Error::InvalidParameter("rank n must be at least 2".into()));
    }
    let mut budgets = Budgets::default();
    if let Some(b) = base.budget {
        budgets.op_budget = b;
    }
    if let Some(b) = base.field_budget {
        budgets.field_budget = b;
    }
    Ok(PipelineConfig {
        p,
        a,
        n: base.n,
        budgets,
        method: base.method.into(),
        slack: symkl::pipeline::DEFAULT_SLACK,
        m_max_override: m_max,
        cache_dir: Some(base.cache_dir.clone()),
    })
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, text)?;
        }
        None => println!("{}", text),
    }
    Ok(())
}

fn run_compute(object: ComputeCmd) -> Result<()> {
    match object {
        ComputeCmd::KlTable { base, ell } => {
            let cfg = pipeline_config(&base, None)?;
            let mut pipe = Pipeline::new(cfg)?;
            let table = pipe.table(ell)?;
            let entry = entry_from_table(table);
            let value = serde_json::to_value(&entry).expect("cache entry serializes");
            emit(&base.out, &report::to_canonical_string(&value))
        }
        ComputeCmd::Lfunction { base, k, m_max, csv } => {
            let cfg = pipeline_config(&base, m_max)?;
            let mut pipe = Pipeline::new(cfg)?;
            let r = pipe.lfunction(k)?;
            if csv {
                emit(&base.out, &report::lresult_csv(&r))
            } else {
                emit(&base.out, &report::to_canonical_string(&report::lresult_json(&r)))
            }
        }
        ComputeCmd::Factors { base, k } => {
            let (p, a) = resolve_base(&base)?;
            if base.n < 2 {
                return Err(Error::InvalidParameter("rank n must be at least 2".into()));
            }
            let mut budgets = Budgets::default();
            if let Some(b) = base.field_budget {
                budgets.field_budget = b;
            }
            let field = symkl::field::FieldDescriptor::build(p, a, budgets.field_budget)?;
            if (field.order() - 1) % base.n as u64 != 0 {
                return Err(Error::InvalidParameter(format!(
                    "closed infinity factor needs n | q - 1, got n = {}, q = {}",
                    base.n,
                    field.order()
                )));
            }
            let census = tuple_census(base.n, k, &field, None)?;
            let bundle = TrivialFactorBundle::from_census(base.n, k, &field, &census)?;
            let value = json!({
                "object": "factors",
                "p": report::int_str(p),
                "a": report::int_str(a),
                "q": report::int_str(field.order()),
                "n": report::int_str(base.n),
                "k": report::int_str(k),
                "det0": report::poly_json(&bundle.det0),
                "det_inf": report::det_inf_json(&bundle.det_inf),
                "h0": report::poly_json(&bundle.h0),
                "h2": report::poly_json(&bundle.h2),
                "exceptional": bundle.exceptional,
                "census": report::census_json(&census),
            });
            emit(&base.out, &report::to_canonical_string(&value))
        }
        ComputeCmd::Nontrivial { base, k, m_max } => {
            let cfg = pipeline_config(&base, m_max)?;
            let mut pipe = Pipeline::new(cfg)?;
            let r = pipe.lfunction(k)?;
            let ws = symkl::lfunction::weight_split(&r.nontrivial, r.q, 1e-6);
            let weights: Vec<Value> = ws
                .by_two_w
                .iter()
                .map(|(&two_w, &deg)| {
                    json!({"two_w": report::int_str(two_w), "degree": report::int_str(deg)})
                })
                .collect();
            let value = json!({
                "object": "nontrivial",
                "n": report::int_str(r.n),
                "k": report::int_str(r.k),
                "q": report::int_str(r.q),
                "nontrivial": report::poly_json(&r.nontrivial),
                "purity": report::purity_json(&r.purity),
                "weight_split": weights,
                "unassigned_roots": report::int_str(ws.unassigned),
            });
            emit(&base.out, &report::to_canonical_string(&value))
        }
        ComputeCmd::Repdim { alg, n, k, b, out } => {
            let (alg_id, weight) = match alg.as_str() {
                "sl" => {
                    let n = n.ok_or_else(|| Error::InvalidParameter("sl needs --n".into()))?;
                    (AlgebraId::Sl(n), HighestWeight::KL1(k))
                }
                "sp" => {
                    let n = n.ok_or_else(|| Error::InvalidParameter("sp needs --n".into()))?;
                    (AlgebraId::Sp(n), HighestWeight::KL1(k))
                }
                "so" => {
                    let n = n.ok_or_else(|| Error::InvalidParameter("so needs --n".into()))?;
                    (AlgebraId::So(n), HighestWeight::KL1(k))
                }
                "g2" => (AlgebraId::G2, HighestWeight::G2 { a: k, b }),
                other => {
                    return Err(Error::InvalidParameter(format!(
                        "unknown algebra {}",
                        other
                    )))
                }
            };
            let dim = weyl_dimension(alg_id, weight)?;
            let value = json!({
                "object": "repdim",
                "alg": alg,
                "n": n.map(report::int_str).unwrap_or(Value::Null),
                "k": report::int_str(k),
                "b": report::int_str(b),
                "dimension": report::big_str(&dim),
            });
            emit(&out, &report::to_canonical_string(&value))
        }
        ComputeCmd::Padic { base, k_seq, r } => {
            let cfg = pipeline_config(&base, None)?;
            if !is_small_prime(cfg.p) {
                return Err(Error::InvalidParameter("p must be prime".into()));
            }
            let mut pipe = Pipeline::new(cfg)?;
            let ks: Vec<u32> = k_seq
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<u32>()
                        .map_err(|_| Error::InvalidParameter(format!("bad weight {}", s)))
                })
                .collect::<Result<_>>()?;
            let diag = limit_diagnostic(&mut pipe, &ks, r)?;
            emit(&base.out, &report::to_canonical_string(&report::padic_json(&diag)))
        }
    }
}

fn run_verify(suite: &str, nmax: u32, kmax: u32, qmax: u64, out: Option<PathBuf>) -> Result<bool> {
    let rep = match suite {
        "mseries" => suites::mseries(nmax, kmax)?,
        "census" => suites::census()?,
        "factorization" => suites::factorization()?,
        "purity" => suites::purity()?,
        "congruence" => suites::congruence()?,
        "padic" => suites::padic()?,
        "repdims" => suites::repdims()?,
        "tables" => suites::tables(qmax, 4.min(nmax.max(2)))?,
        "anchor" => suites::anchor()?,
        "determinant" => suites::determinant()?,
        "all" => suites::all()?,
        other => {
            return Err(Error::InvalidParameter(format!(
                "unknown suite {}; expected mseries|census|factorization|purity|congruence|padic|repdims|tables|anchor|determinant|all",
                other
            )))
        }
    };
    for line in &rep.lines {
        println!(
            "{} {}{}",
            if line.pass { "PASS" } else { "FAIL" },
            line.name,
            if line.detail.is_empty() {
                String::new()
            } else {
                format!(" [{}]", line.detail)
            }
        );
    }
    println!(
        "{}: suite {} ({} checks)",
        if rep.pass() { "PASS" } else { "FAIL" },
        rep.suite,
        rep.lines.len()
    );
    if let Some(path) = out {
        std::fs::write(path, report::to_canonical_string(&report::suite_json(&rep)))?;
    }
    Ok(rep.pass())
}

fn main() {
    let cli = Cli::parse();
    let code = match cli.cmd {
        Cmd::Compute { object } => match run_compute(object) {
            Ok(()) => 0,
            Err(e) => {
                println!("{}", report::to_canonical_string(&report::error_json(&e)));
                2
            }
        },
        Cmd::Verify {
            suite,
            nmax,
            kmax,
            qmax,
            out,
        } => match run_verify(&suite, nmax, kmax, qmax, out) {
            Ok(true) => 0,
            Ok(false) => 1,
            Err(e) => {
                println!("{}", report::to_canonical_string(&report::error_json(&e)));
                2
            }
        },
    };
    std::process::exit(code);
}
