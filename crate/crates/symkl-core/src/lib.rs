//! Exact computation of symmetric-power L-functions of Kloosterman sheaves
//! over small finite fields: character-sum tables in Z[zeta_p], local
//! Frobenius data from Newton's identities, closed-form trivial factors,
//! extraction and purity checks of the non-trivial factor, and p-adic
//! variation diagnostics.
//!
//! The main entry point is [`pipeline::Pipeline`], which owns the field
//! tower, the Kloosterman tables per level, and the closed-point data, and
//! assembles `L(k, n, T)` together with all of its factors. The named
//! invariant suites live in [`suites`] and back both the CLI `verify`
//! subcommand and the acceptance test target.

pub mod cache;
pub mod cyclotomic;
pub mod error;
pub mod field;
pub mod frobenius;
pub mod kloosterman;
pub mod lfunction;
pub mod ntt;
pub mod padic;
pub mod pipeline;
pub mod poly;
pub mod rep;
pub mod report;
pub mod roots;
pub mod series;
pub mod suites;
pub mod trivial;

pub use cyclotomic::CycInt;
pub use error::{Error, Result};
pub use field::{ClosedPoint, FieldDescriptor, FieldElement};
pub use frobenius::CharPoly;
pub use kloosterman::{Budgets, KloostermanTable, TableMethod};
pub use lfunction::PowerSumSequence;
pub use pipeline::{LResult, Pipeline, PipelineConfig};
pub use poly::{IntPoly, RatFunc};
pub use series::PowerSeriesZ;
pub use trivial::{OrbitCensus, TrivialFactorBundle};
