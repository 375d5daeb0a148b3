//! Exact counts of oriented Hamiltonian paths, by type, in transitive
//! tournaments.
//!
//! The count for a type is given by a recursive path-function over
//! compositions ([`engine`]); a brute-force census over vertex permutations
//! ([`oracle`]) checks it on small tournaments, and [`analysis`] runs scans and
//! property checks on top of both.
//!
//! All counting is generic over an exact integer type ([`Count`]). The
//! defaults use unbounded integers; `u64`/`u128` work for small inputs and
//! report overflow as an error.
//!
//! ```
//! use pathcensus::{Composition, Engine};
//!
//! let f = Engine::new();
//! let c: Composition = "2,11,5".parse().unwrap();
//! assert_eq!(f.value(&c).unwrap().to_string(), "637924");
//! ```

pub mod analysis;
pub mod count;
pub mod engine;
pub mod oracle;
pub mod types;

pub use analysis::{
    check_conjecture, run_property_suite, scan, tt_count, verify, verify_against_oracle,
    AnalysisError, ConjectureVerdict, OracleReport, PropertyLimits, PropertyReport, ScanLimits,
    ScanReport, VerifyKind,
};
pub use count::Count;
pub use engine::{f_two_block, CacheError, EngineError, MemoStats, MemoTable, PathFunction};
pub use oracle::{OracleError, Tournament, TypeCensus};
pub use types::{compositions, Composition, RawTuple, SignedType, TypeError};

/// Unbounded nonnegative integer; the default count type.
pub type BigCount = num_bigint::BigUint;

/// Path-function evaluator over unbounded counts.
pub type Engine = PathFunction<BigCount>;
/// Path-function evaluator over `u64`, for totals up to about 20.
pub type Engine64 = PathFunction<u64>;
/// Path-function evaluator over `u128`.
pub type Engine128 = PathFunction<u128>;

/// Brute-force census over unbounded counts.
pub type Census = TypeCensus<BigCount>;
