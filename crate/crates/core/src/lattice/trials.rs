//! Seeded randomized campaign over the lattice checks.
//!
//! Attempt `i` draws from `ChaCha8Rng` seeded with the campaign seed on
//! stream `i`, so results do not depend on scheduling. Attempts are
//! evaluated in parallel chunks and consumed in index order until the
//! requested number of trials has succeeded.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::checks::{
    block_valuation_check, dual_lattice_check, overdet_check, rescaled_map_check,
    trace_product_check, trace_product_restated, CheckOutcome, Variant,
};
use super::jordan::jordan_decompose;
use super::ring::Mat;
use super::sampler::{reflection_in_jordan_basis, sample_orthogonal, to_original_basis};
use super::{GramLattice, LatticeError, DEFAULT_PRECISION};
use crate::par::Execution;

const CHUNK: usize = 64;
/// Give up when this many attempts per requested trial fail to qualify.
const MAX_ATTEMPT_FACTOR: usize = 20;

#[derive(Debug, Clone)]
pub struct TrialConfig {
    pub trials: usize,
    pub seed: u64,
    /// Inclusive dimension range.
    pub dims: (usize, usize),
    pub k: u32,
    pub max_scale: u32,
    pub exec: Execution,
}

impl Default for TrialConfig {
    fn default() -> Self {
        Self {
            trials: 1000,
            seed: 0x6b33,
            dims: (2, 8),
            k: DEFAULT_PRECISION,
            max_scale: 3,
            exec: Execution::default(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CheckTally {
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrialFailure {
    pub attempt: u64,
    pub check: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrialReport {
    pub seed: u64,
    pub trials: usize,
    pub attempts: usize,
    pub rejections: usize,
    pub checks: BTreeMap<String, CheckTally>,
    pub failures: Vec<TrialFailure>,
}

impl TrialReport {
    pub fn failure_count(&self) -> usize {
        self.checks.values().map(|t| t.failed).sum()
    }
}

/// Random non-degenerate lattice: an orthogonal sum of scaled odd 1×1 and
/// even-diagonal 2×2 unit blocks, hidden by a random unimodular change of
/// basis.
pub fn random_lattice<R: Rng>(rng: &mut R, dim: usize, k: u32, max_scale: u32) -> Result<GramLattice, LatticeError> {
    let mut d = vec![vec![0i64; dim]; dim];
    let mut used = 0u32;
    let mut i = 0;
    while i < dim {
        let two = dim - i >= 2 && rng.gen_bool(0.3);
        let width = if two { 2 } else { 1 };
        // keep the determinant valuation below the precision
        let room = (k - 1 - used) / width as u32;
        let s = rng.gen_range(0..=max_scale.min(room));
        used += s * width as u32;
        let f = 1i64 << s;
        if two {
            let a = rng.gen_range(-3i64..=3);
            let c = rng.gen_range(-3i64..=3);
            let b = 2 * rng.gen_range(-2i64..=1) + 1;
            d[i][i] = 2 * a * f;
            d[i + 1][i + 1] = 2 * c * f;
            d[i][i + 1] = b * f;
            d[i + 1][i] = b * f;
        } else {
            let u = 2 * rng.gen_range(-8i64..=7) + 1;
            d[i][i] = u * f;
        }
        i += width;
    }
    let mut p = vec![vec![0i64; dim]; dim];
    for (r, row) in p.iter_mut().enumerate() {
        row[r] = 1;
    }
    for _ in 0..3 * dim {
        let a = rng.gen_range(0..dim);
        let b = rng.gen_range(0..dim);
        if a == b {
            for row in p.iter_mut() {
                row[a] = -row[a];
            }
        } else {
            let c = rng.gen_range(-2i64..=2);
            for row in p.iter_mut() {
                row[a] += c * row[b];
            }
        }
    }
    let pm = Mat::from_rows(&p, k);
    let dm = Mat::from_rows(&d, k);
    GramLattice::from_mat(pm.transpose().mul(&dm).mul(&pm))
}

enum Attempt {
    Rejected,
    Done(Vec<(&'static str, CheckOutcome)>),
}

fn run_attempt(cfg: &TrialConfig, index: u64) -> Attempt {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(index);
    let dim = rng.gen_range(cfg.dims.0..=cfg.dims.1);
    let Ok(l) = random_lattice(&mut rng, dim, cfg.k, cfg.max_scale) else {
        return Attempt::Rejected;
    };
    let Ok(dec) = jordan_decompose(&l) else {
        return Attempt::Rejected;
    };
    let (Ok(c), Ok(v)) = (
        sample_orthogonal(&l, &dec, 1, &mut rng),
        sample_orthogonal(&l, &dec, 2, &mut rng),
    ) else {
        return Attempt::Rejected;
    };
    let Some(r) = reflection_in_jordan_basis(&dec, &mut rng) else {
        return Attempt::Rejected;
    };
    let r = to_original_basis(&dec, &r);
    let (c, v) = (c.matrix, v.matrix);
    let rc = r.mul(&c);
    let id = Mat::identity(dim, cfg.k);
    let a_even = c.sub(&id).div_pow2(1).expect("C ≡ E mod 2");
    let b = v.sub(&id).div_pow2(2).expect("V ≡ E mod 4");

    let outcomes = vec![
        ("overdet_a", overdet_check(&l, &c, &c.mul(&v), Variant::A)),
        ("overdet_a_identity", overdet_check(&l, &id, &v, Variant::A)),
        ("overdet_b", overdet_check(&l, &rc, &rc.mul(&v), Variant::B)),
        ("trace_product_a", trace_product_check(&l, &a_even, &b, Variant::A)),
        ("trace_product_b", trace_product_check(&l, &rc.sub(&id), &b, Variant::B)),
        ("restated_a", trace_product_restated(&l, &c, &v, Variant::A)),
        ("restated_b", trace_product_restated(&l, &rc, &v, Variant::B)),
        ("block_valuation_e1", block_valuation_check(&l, &dec, &c, 1)),
        ("block_valuation_e2", block_valuation_check(&l, &dec, &v, 2)),
        ("dual_lattice", dual_lattice_check(&l, &dec, &rc)),
        ("rescaled_map_e1", rescaled_map_check(&l, &dec, &c, 1)),
        ("rescaled_map_e2", rescaled_map_check(&l, &dec, &v, 2)),
    ];
    if outcomes.iter().any(|(_, o)| matches!(o, CheckOutcome::Rejected(_))) {
        return Attempt::Rejected;
    }
    Attempt::Done(outcomes)
}

pub fn run_trials(cfg: &TrialConfig) -> TrialReport {
    let mut report = TrialReport {
        seed: cfg.seed,
        trials: 0,
        attempts: 0,
        rejections: 0,
        checks: BTreeMap::new(),
        failures: Vec::new(),
    };
    let limit = cfg.trials.saturating_mul(MAX_ATTEMPT_FACTOR).max(CHUNK);
    let mut next = 0u64;
    while report.trials < cfg.trials && report.attempts < limit {
        let idx: Vec<u64> = (next..next + CHUNK as u64).collect();
        next += CHUNK as u64;
        let results = cfg.exec.map(&idx, |&i| run_attempt(cfg, i));
        for (i, res) in idx.into_iter().zip(results) {
            if report.trials == cfg.trials {
                break;
            }
            report.attempts += 1;
            match res {
                Attempt::Rejected => report.rejections += 1,
                Attempt::Done(outcomes) => {
                    report.trials += 1;
                    for (name, o) in outcomes {
                        let tally = report.checks.entry(name.to_string()).or_default();
                        match o {
                            CheckOutcome::Pass => tally.passed += 1,
                            CheckOutcome::Fail(message) => {
                                tally.failed += 1;
                                report.failures.push(TrialFailure {
                                    attempt: i,
                                    check: name.to_string(),
                                    message,
                                });
                            }
                            CheckOutcome::Rejected(_) => unreachable!("filtered above"),
                        }
                    }
                }
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(seed: u64, exec: Execution) -> TrialConfig {
        TrialConfig {
            trials: 60,
            seed,
            exec,
            ..TrialConfig::default()
        }
    }

    #[test]
    fn random_lattices_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for dim in 1..=8 {
            for _ in 0..20 {
                let l = random_lattice(&mut rng, dim, 12, 3).unwrap();
                let d = jordan_decompose(&l).unwrap();
                let back = d.basis_change.transpose().mul(l.gram()).mul(&d.basis_change);
                assert_eq!(back, d.diagonal);
            }
        }
    }

    #[test]
    fn campaign_is_clean_and_accounted() {
        let r = run_trials(&small(1, Execution::default()));
        assert_eq!(r.trials, 60);
        assert_eq!(r.trials + r.rejections, r.attempts);
        assert_eq!(r.failure_count(), 0, "{:?}", r.failures);
        assert_eq!(r.checks.len(), 12);
    }

    #[test]
    fn seed_stable_across_schedules() {
        let a = run_trials(&small(9, Execution::Sequential));
        let b = run_trials(&small(9, Execution::Parallel));
        assert_eq!(a, b);
    }
}
