//! Building the trace table from exact counts at small primes.

use std::collections::BTreeMap;

use crate::counters::resolved_count;
use crate::modarith::{PrimeIter, MAX_PIPELINE_PRIME};
use crate::par::Execution;
use crate::surface::SixLineSurface;

use super::{
    build_table, galois_class, trace_from_count, CongruenceSystem, Insertion, TraceCongruence,
    TraceTable, TwoAdicError,
};

/// Result of the class-by-class initialisation.
#[derive(Debug, Clone)]
pub struct DirectInit {
    pub table: TraceTable,
    /// `(class index, least good prime in that class)`, ascending by prime.
    pub witnesses: Vec<(u32, u64)>,
}

impl DirectInit {
    pub fn largest_prime(&self) -> u64 {
        self.witnesses.iter().map(|&(_, p)| p).max().unwrap_or(0)
    }
}

/// Result of the congruence-system initialisation.
#[derive(Debug, Clone)]
pub struct EfficientInit {
    pub table: TraceTable,
    pub unknowns: usize,
    /// Good primes consumed before the system became uniquely solvable.
    pub primes_used: usize,
    pub largest_prime: u64,
    /// Distinct classes among the consumed primes.
    pub classes_seen: usize,
}

fn check_applicable(surface: &SixLineSurface) -> Result<(), TwoAdicError> {
    if surface.is_rm() || !surface.trivial_galois_pic {
        return Err(TwoAdicError::NotApplicable);
    }
    Ok(())
}

/// For each class, count at the least good prime in it.
pub fn init_direct(surface: &SixLineSurface, exec: Execution) -> Result<DirectInit, TwoAdicError> {
    check_applicable(surface)?;
    let inv = surface.bad_primes();
    let len = inv.b + 2;
    let total = 1usize << len;
    let mut found: BTreeMap<u32, u64> = BTreeMap::new();
    let mut witnesses = Vec::with_capacity(total);
    for p in PrimeIter::new(3, MAX_PIPELINE_PRIME) {
        if !inv.is_good_prime(p) {
            continue;
        }
        let idx = galois_class(&inv, p)?.index();
        if let std::collections::btree_map::Entry::Vacant(e) = found.entry(idx) {
            e.insert(p);
            witnesses.push((idx, p));
            if witnesses.len() == total {
                break;
            }
        }
    }
    if witnesses.len() < total {
        return Err(TwoAdicError::Exhausted(MAX_PIPELINE_PRIME));
    }
    let counts = exec.map(&witnesses, |&(_, p)| resolved_count(surface, p));
    let mut entries = vec![0u8; total];
    for (&(idx, p), count) in witnesses.iter().zip(counts) {
        entries[idx as usize] = trace_from_count(surface.picard_rank, p, count?);
    }
    let table = TraceTable {
        surface: crate::io::fingerprint(surface),
        b: inv.b,
        n: inv.n,
        entries,
    };
    table.check_shape()?;
    Ok(DirectInit { table, witnesses })
}

/// Primes are counted in parallel batches of this size; insertion stays in
/// ascending order, so the result matches a purely sequential scan.
const BATCH: usize = 32;

/// Feeds ascending good primes into the congruence system until it is
/// uniquely solvable, checking after every new class.
pub fn init_efficient(
    surface: &SixLineSurface,
    exec: Execution,
) -> Result<EfficientInit, TwoAdicError> {
    check_applicable(surface)?;
    let inv = surface.bad_primes();
    let len = inv.b + 2;
    let mut sys = CongruenceSystem::new(len, inv.n);
    let mut primes = PrimeIter::new(3, MAX_PIPELINE_PRIME).filter(|&p| inv.is_good_prime(p));
    let mut used = 0usize;
    loop {
        let batch: Vec<u64> = primes.by_ref().take(BATCH).collect();
        if batch.is_empty() {
            return Err(TwoAdicError::Exhausted(MAX_PIPELINE_PRIME));
        }
        let counts = exec.map(&batch, |&p| resolved_count(surface, p));
        for (&p, count) in batch.iter().zip(counts) {
            used += 1;
            let cls = galois_class(&inv, p)?;
            let rhs = trace_from_count(surface.picard_rank, p, count?);
            let ins = sys.add_congruence(&TraceCongruence {
                cls,
                rhs,
                witness_prime: p,
            })?;
            if ins == Insertion::New {
                if let Some(u) = sys.solve_unknowns()? {
                    let table = build_table(&u, inv.n, inv.b, crate::io::fingerprint(surface));
                    table.check_shape()?;
                    return Ok(EfficientInit {
                        table,
                        unknowns: sys.unknowns(),
                        primes_used: used,
                        largest_prime: p,
                        classes_seen: sys.rows(),
                    });
                }
            }
        }
    }
}
