//! Mod-16 machinery: Galois classes of Frobenius, Lefschetz conversions,
//! the trace congruence system and the trace table.

mod galois;
mod init;
mod solver;
mod table;

use thiserror::Error;

use crate::counters::CountError;
use crate::modarith::{mod_inverse, ArithError};

pub use galois::{class_moduli, galois_class, GaloisClass};
pub use init::{init_direct, init_efficient, DirectInit, EfficientInit};
pub use solver::{
    trace_expansion, unknown_count, CongruenceSystem, Insertion, TraceCongruence, TraceUnknowns,
};
pub use table::{build_table, TraceTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TwoAdicError {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Count(#[from] CountError),
    #[error("symbol ({d}/{p}) vanished at a good prime")]
    SymbolZero { d: i64, p: u64 },
    #[error("class {class}: trace {rhs} and n = {n} differ by an odd amount")]
    OddDifference { class: u32, rhs: u8, n: u32 },
    #[error("class {class}: prime {first} gives trace {first_rhs} but prime {second} gives {second_rhs}")]
    InconsistentDuplicate {
        class: u32,
        first: u64,
        first_rhs: u8,
        second: u64,
        second_rhs: u8,
    },
    #[error("congruence system has no solution")]
    Inconsistent,
    #[error("class has length {got}, expected {want}")]
    ClassLength { got: usize, want: usize },
    #[error("table initialisation needs six rational lines with trivial Galois action on Pic")]
    NotApplicable,
    #[error("no initialisation reached within primes up to {0}")]
    Exhausted(u64),
    #[error("table fingerprint {table} does not match surface {surface}")]
    FingerprintMismatch { table: String, surface: String },
    #[error("malformed trace table: {0}")]
    TableShape(String),
}

impl TwoAdicError {
    /// Whether the error signals a mathematical contradiction rather than bad
    /// input.
    pub fn is_inconsistency(&self) -> bool {
        matches!(
            self,
            TwoAdicError::OddDifference { .. }
                | TwoAdicError::InconsistentDuplicate { .. }
                | TwoAdicError::Inconsistent
                | TwoAdicError::SymbolZero { .. }
        )
    }
}

/// `Tr(Frob_l | T) mod 16` from an exact count, assuming trivial action on
/// Pic: `(count − l² − r·l − 1)·l⁻¹ mod 16`.
pub fn trace_from_count(r: u32, l: u64, count: u64) -> u8 {
    let l128 = l as i128;
    let diff = (count as i128 - l128 * l128 - r as i128 * l128 - 1).rem_euclid(16);
    let inv = mod_inverse((l % 16) as i64, 16).expect("odd prime") as i128;
    (diff * inv % 16) as u8
}

/// `(p² + r·p + t·p + 1) mod 16`.
pub fn count_mod16_from_trace(r: u32, p: u64, t: u8) -> u8 {
    let p = (p % 16) as u128;
    ((p * p + r as u128 * p + t as u128 * p + 1) % 16) as u8
}
