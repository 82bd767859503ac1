//! Combining the mod-16 trace information with a mod-p count and selecting
//! the unique representative inside the Deligne window.

use thiserror::Error;

use crate::counters::{CountError, ModPBackend};
use crate::modarith::{check_prime_bound, crt_pair, ArithError, PrimeIter, ResidueClass};
use crate::par::Execution;
use crate::s5_mode::{self, RmError};
use crate::surface::SixLineSurface;
use crate::two_adic::{count_mod16_from_trace, galois_class, TraceTable, TwoAdicError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AssembleError {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Count(#[from] CountError),
    #[error(transparent)]
    TwoAdic(#[from] TwoAdicError),
    #[error(transparent)]
    Rm(#[from] RmError),
    #[error("no count in [{lo}, {hi}] is {residue} mod {modulus}")]
    ImpossibleResidue {
        residue: u64,
        modulus: u64,
        lo: i64,
        hi: i64,
    },
    #[error("window [{lo}, {hi}] holds several counts {residue} mod {modulus}")]
    Ambiguous {
        residue: u64,
        modulus: u64,
        lo: i64,
        hi: i64,
    },
    #[error("p = {0} is not a good prime")]
    BadPrime(u64),
    #[error("a trace table is required for this surface")]
    MissingTable,
}

impl AssembleError {
    pub fn is_inconsistency(&self) -> bool {
        match self {
            AssembleError::ImpossibleResidue { .. } | AssembleError::Ambiguous { .. } => true,
            AssembleError::TwoAdic(e) => e.is_inconsistency(),
            AssembleError::Rm(e) => e.is_inconsistency(),
            _ => false,
        }
    }
}

/// `|#S(F_p) − center| ≤ halfwidth`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DeligneWindow {
    pub center: i64,
    pub halfwidth: i64,
}

impl DeligneWindow {
    pub fn lo(&self) -> i64 {
        self.center - self.halfwidth
    }

    pub fn hi(&self) -> i64 {
        self.center + self.halfwidth
    }

    pub fn contains(&self, v: i64) -> bool {
        (self.lo()..=self.hi()).contains(&v)
    }
}

pub fn deligne_window(r: u32, p: u64) -> DeligneWindow {
    let (r, p) = (r as i64, p as i64);
    DeligneWindow {
        center: p * p + r * p + 1,
        halfwidth: (22 - r) * p,
    }
}

/// All integers of `window` congruent to `class`.
pub fn window_candidates(window: &DeligneWindow, class: ResidueClass) -> Vec<i64> {
    let m = class.modulus() as i64;
    let lo = window.lo();
    let first = lo + (class.value() as i64 - lo).rem_euclid(m);
    (0..)
        .map(|k| first + k * m)
        .take_while(|&v| v <= window.hi())
        .collect()
}

/// The unique count in the window with the given residues mod 16 and mod p.
pub fn pick_count(window: &DeligneWindow, mod16: u8, modp: u64, p: u64) -> Result<u64, AssembleError> {
    let class = crt_pair(ResidueClass::new(mod16 as u64, 16)?, ResidueClass::new(modp, p)?)?;
    let c = window_candidates(window, class);
    let err = |ambiguous: bool| {
        let (residue, modulus, lo, hi) = (class.value(), class.modulus(), window.lo(), window.hi());
        if ambiguous {
            AssembleError::Ambiguous { residue, modulus, lo, hi }
        } else {
            AssembleError::ImpossibleResidue { residue, modulus, lo, hi }
        }
    };
    match c.as_slice() {
        [v] if *v >= 0 => Ok(*v as u64),
        [] | [_] => Err(err(false)),
        _ => Err(err(true)),
    }
}

/// [`pick_count`] for a resolved surface, whose count is always even: the
/// transcendental trace has the parity of `r`, so `p² + 1 + (r + t)·p` is
/// even. An odd `mod16` therefore signals an inconsistent table.
pub fn pick_resolved_count(window: &DeligneWindow, mod16: u8, modp: u64, p: u64) -> Result<u64, AssembleError> {
    if mod16 % 2 == 1 {
        return Err(AssembleError::ImpossibleResidue {
            residue: mod16 as u64,
            modulus: 16,
            lo: window.lo(),
            hi: window.hi(),
        });
    }
    pick_count(window, mod16, modp, p)
}

/// One assembled count with the mod-16 data it came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PointCount {
    pub p: u64,
    pub count: u64,
    /// Transcendental trace mod 16 (for `S_5`, the trace after removing the
    /// algebraic part).
    pub trace_mod16: u8,
    /// Galois class index (for `S_5`, `p mod 5`).
    pub class_index: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RangeEntry {
    Counted(PointCount),
    Skipped { p: u64 },
    Failed { p: u64, error: String },
}

impl RangeEntry {
    pub fn p(&self) -> u64 {
        match self {
            RangeEntry::Counted(c) => c.p,
            RangeEntry::Skipped { p } | RangeEntry::Failed { p, .. } => *p,
        }
    }
}

pub fn count_one(
    surface: &SixLineSurface,
    table: Option<&TraceTable>,
    p: u64,
    backend: &dyn ModPBackend,
) -> Result<PointCount, AssembleError> {
    check_prime_bound(p)?;
    let inv = surface.bad_primes();
    if !inv.is_good_prime(p) {
        return Err(AssembleError::BadPrime(p));
    }
    if surface.is_rm() {
        return Ok(s5_mode::rm_point_count(surface, p, backend)?);
    }
    let table = table.ok_or(AssembleError::MissingTable)?;
    table.check_surface(surface)?;
    let cls = galois_class(&inv, p)?;
    let t = table.lookup(&cls)?;
    let mod16 = count_mod16_from_trace(surface.picard_rank, p, t);
    let modp = backend.count_mod_p(surface, p)?;
    let count = pick_resolved_count(&deligne_window(surface.picard_rank, p), mod16, modp, p)?;
    Ok(PointCount {
        p,
        count,
        trace_mod16: t,
        class_index: cls.index(),
    })
}

/// Counts every prime in `[p_min, p_max]`; bad primes become skip markers and
/// per-prime failures are recorded without stopping the batch.
pub fn count_range(
    surface: &SixLineSurface,
    table: Option<&TraceTable>,
    p_min: u64,
    p_max: u64,
    backend: &dyn ModPBackend,
    exec: Execution,
) -> Vec<RangeEntry> {
    let primes: Vec<u64> = PrimeIter::new(p_min.max(2), p_max).collect();
    count_primes(surface, table, &primes, backend, exec)
}

/// [`count_range`] over an explicit prime list; output follows its order.
pub fn count_primes(
    surface: &SixLineSurface,
    table: Option<&TraceTable>,
    primes: &[u64],
    backend: &dyn ModPBackend,
    exec: Execution,
) -> Vec<RangeEntry> {
    let inv = surface.bad_primes();
    exec.map(primes, |&p| {
        if !inv.is_good_prime(p) {
            return RangeEntry::Skipped { p };
        }
        match count_one(surface, table, p, backend) {
            Ok(c) => RangeEntry::Counted(c),
            Err(e) => RangeEntry::Failed {
                p,
                error: e.to_string(),
            },
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counters::{resolved_count, NaiveBackend};
    use crate::fixtures;
    use crate::two_adic::init_efficient;

    #[test]
    fn windows() {
        assert_eq!(deligne_window(16, 101), DeligneWindow { center: 11818, halfwidth: 606 });
        assert_eq!(deligne_window(17, 101), DeligneWindow { center: 11919, halfwidth: 505 });
        let w = deligne_window(16, 3);
        assert_eq!((w.lo(), w.hi()), (40, 76));
        for r in 16..=20 {
            for p in [3u64, 101, 99_999_989] {
                let w = deligne_window(r, p);
                assert!(2 * w.halfwidth + 1 < 16 * p as i64);
            }
        }
    }

    #[test]
    fn pick_examples() {
        let w = deligne_window(16, 101);
        assert_eq!(pick_count(&w, 10, 1, 101), Ok(11818));
        assert_eq!(pick_count(&deligne_window(16, 7), 7, 183 % 7, 7), Ok(183));
        // 11818 + 101k with |k| ≤ 6 misses the residues k ≡ 7, 8, 9 mod 16
        // 11515 fits 11 mod 16 but is odd
        assert_eq!(pick_count(&w, 11, 1, 101), Ok(11515));
        assert!(matches!(
            pick_resolved_count(&w, 11, 1, 101),
            Err(AssembleError::ImpossibleResidue { .. })
        ));
        assert_eq!(pick_resolved_count(&w, 10, 1, 101), Ok(11818));
        // 11818 + 101k with |k| ≤ 6 misses the residues k ≡ 7, 8, 9 mod 16
        assert!(matches!(
            pick_count(&w, 2, 1, 101),
            Err(AssembleError::ImpossibleResidue { .. })
        ));
    }

    /// Independent scan of the window, without CRT.
    #[test]
    fn pick_matches_window_scan() {
        for p in [3u64, 7, 31, 101] {
            for r in [16u32, 17] {
                let w = deligne_window(r, p);
                for m16 in 0..16u8 {
                    for mp in 0..p {
                        let hits: Vec<i64> = (w.lo()..=w.hi())
                            .filter(|v| v.rem_euclid(16) == m16 as i64 && v.rem_euclid(p as i64) == mp as i64)
                            .collect();
                        match pick_count(&w, m16, mp, p) {
                            Ok(v) => assert_eq!(hits, vec![v as i64]),
                            Err(_) => assert!(hits.is_empty()),
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn count_one_matches_oracle() {
        let s1 = fixtures::s1();
        let t1 = init_efficient(&s1, Execution::default()).unwrap().table;
        let c = count_one(&s1, Some(&t1), 31, &NaiveBackend).unwrap();
        assert_eq!(c.count, resolved_count(&s1, 31).unwrap());
        let s3 = fixtures::s3();
        let t3 = init_efficient(&s3, Execution::default()).unwrap().table;
        let c = count_one(&s3, Some(&t3), 13, &NaiveBackend).unwrap();
        assert_eq!(c.count, resolved_count(&s3, 13).unwrap());
        assert_eq!(c.trace_mod16 % 2, 1);
        assert!(matches!(
            count_one(&s1, Some(&t3), 31, &NaiveBackend),
            Err(AssembleError::TwoAdic(TwoAdicError::FingerprintMismatch { .. }))
        ));
        assert_eq!(count_one(&s1, None, 31, &NaiveBackend), Err(AssembleError::MissingTable));
    }

    #[test]
    fn range_layout() {
        let s4 = fixtures::s4();
        let t = init_efficient(&s4, Execution::default()).unwrap().table;
        let rec = count_range(&s4, Some(&t), 3, 100, &NaiveBackend, Execution::default());
        assert_eq!(rec[0], RangeEntry::Skipped { p: 3 });
        assert_eq!(rec[1], RangeEntry::Skipped { p: 5 });
        assert!(rec[2..].iter().all(|r| matches!(r, RangeEntry::Counted(_))));
        assert_eq!(rec.last().unwrap().p(), 97);
        let ps: Vec<u64> = rec.iter().map(RangeEntry::p).collect();
        assert!(ps.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn s2_record_count_to_ten_thousand() {
        let s2 = fixtures::s2();
        let t = init_efficient(&s2, Execution::default()).unwrap().table;
        let rec = count_range(&s2, Some(&t), 2, 10_000, &NaiveBackend, Execution::default());
        let counted = rec.iter().filter(|r| matches!(r, RangeEntry::Counted(_))).count();
        // π(10^4) = 1229; 2, 3, 5 and 7 are skipped
        assert_eq!(rec.len(), 1229);
        assert_eq!(counted, 1225);
        assert!(rec.iter().all(|r| !matches!(r, RangeEntry::Failed { .. })));
    }
}
