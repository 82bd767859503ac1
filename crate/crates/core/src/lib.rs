//! Exact point counts of K3 surfaces `w² = l_1⋯l_6` over `F_p`.
//!
//! A count is fixed modulo `16p` and then inside the Weil window: modulo `p`
//! by a coefficient of a power of the branch sextic, modulo 16 by a table of
//! Frobenius traces indexed by Galois classes of `p`. The table is
//! initialized once per surface from naive counts at small primes.
//!
//! The `lattice` and `brauer` modules are self-test laboratories for the
//! 2-adic and `F_2` structure behind the table; the counting path does not
//! use them.

pub mod assembler;
pub mod brauer;
pub mod counters;
pub mod fixtures;
pub mod io;
pub mod lattice;
pub mod modarith;
pub mod par;
pub mod perm;
pub mod s5_mode;
pub mod surface;
pub mod two_adic;

use thiserror::Error;

pub use assembler::{count_one, count_primes, count_range, PointCount, RangeEntry};
pub use counters::{CoefficientBackend, ModPBackend, NaiveBackend};
pub use par::Execution;
pub use surface::SixLineSurface;
pub use two_adic::TraceTable;

/// Coarse classification used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Usage,
    Io,
    Validation,
    MathInconsistency,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Io(#[from] io::IoError),
    #[error(transparent)]
    Surface(#[from] surface::SurfaceError),
    #[error(transparent)]
    Arith(#[from] modarith::ArithError),
    #[error(transparent)]
    Count(#[from] counters::CountError),
    #[error(transparent)]
    TwoAdic(#[from] two_adic::TwoAdicError),
    #[error(transparent)]
    Assemble(#[from] assembler::AssembleError),
    #[error(transparent)]
    Rm(#[from] s5_mode::RmError),
    #[error(transparent)]
    Lattice(#[from] lattice::LatticeError),
    #[error(transparent)]
    Brauer(#[from] brauer::BrauerError),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Inconsistency(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Io(io::IoError::Surface(_) | io::IoError::Json(_) | io::IoError::Format(_))
            | Error::Surface(_) => ErrorKind::Validation,
            Error::Io(_) => ErrorKind::Io,
            Error::Usage(_) => ErrorKind::Usage,
            Error::Inconsistency(_) | Error::Brauer(_) => ErrorKind::MathInconsistency,
            Error::TwoAdic(e) if e.is_inconsistency() => ErrorKind::MathInconsistency,
            Error::Assemble(e) if e.is_inconsistency() => ErrorKind::MathInconsistency,
            Error::Rm(e) if e.is_inconsistency() => ErrorKind::MathInconsistency,
            Error::Lattice(lattice::LatticeError::Internal(_)) => ErrorKind::MathInconsistency,
            _ => ErrorKind::Validation,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
