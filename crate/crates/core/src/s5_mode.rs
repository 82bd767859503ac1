//! Counting on the real-multiplication surface `S_5`, whose four non-rational
//! branch lines are conjugate over `Q(ζ_5)`. The transcendental trace is
//! fixed modulo 8 or 16 by explicit residue rules depending on `p mod 5`.

use thiserror::Error;

use crate::assembler::PointCount;
use crate::counters::{CountError, ModPBackend};
use crate::modarith::{crt_pair, jacobi, pow_mod, ArithError, ResidueClass};
use crate::surface::SixLineSurface;
use crate::two_adic::trace_from_count;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RmError {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Count(#[from] CountError),
    #[error("p = {0} is not a good prime for the real-multiplication surface")]
    BadPrime(u64),
    #[error("no element of order 5 found modulo {0}")]
    NoZeta(u64),
    #[error("trace rule at p = {0} depends on the choice of fifth root of unity")]
    ChoiceDependent(u64),
    #[error("p = {p}: no trace in [{t_min}, {t_max}] is compatible with the residues")]
    ImpossibleResidue { p: u64, t_min: i64, t_max: i64 },
    #[error("p = {p}: several traces {candidates:?} fit the residues")]
    Ambiguous { p: u64, candidates: Vec<i64> },
    #[error("surface is not in real-multiplication mode")]
    NotRm,
}

impl RmError {
    pub fn is_inconsistency(&self) -> bool {
        matches!(
            self,
            RmError::ChoiceDependent(_) | RmError::ImpossibleResidue { .. } | RmError::Ambiguous { .. }
        )
    }
}

/// Squareness of `ζ_5 ∓ 1` for the chosen fifth root.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ZetaFlags {
    pub zeta: u64,
    pub zeta_minus_one_square: bool,
    pub zeta_plus_one_square: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RmFrobeniusData {
    pub p: u64,
    pub p_mod_5: u8,
    pub minus_one_square: bool,
    /// Present exactly when `p ≡ 1 (mod 5)`.
    pub zeta: Option<ZetaFlags>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstraintKind {
    ExactZero,
    Mod8,
    Mod16,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RmTraceConstraint {
    pub kind: ConstraintKind,
    pub residue: u8,
    pub t_min: i64,
    pub t_max: i64,
}

fn is_square(a: u64, p: u64) -> Result<bool, RmError> {
    Ok(jacobi(a as i64, p)? == 1)
}

fn zeta_flags(zeta: u64, p: u64) -> Result<ZetaFlags, RmError> {
    Ok(ZetaFlags {
        zeta,
        zeta_minus_one_square: is_square(zeta - 1, p)?,
        zeta_plus_one_square: is_square(zeta + 1, p)?,
    })
}

/// First `x^((p−1)/5) ≠ 1` over `x = 2, 3, …`; it has order exactly 5.
pub fn find_zeta5(p: u64) -> Option<u64> {
    if p % 5 != 1 {
        return None;
    }
    (2..p).map(|x| pow_mod(x, (p - 1) / 5, p)).find(|&z| z != 1)
}

fn residue_rule(minus_one_square: bool, z: &ZetaFlags) -> u8 {
    let zeta_sq_minus_one = z.zeta_minus_one_square == z.zeta_plus_one_square;
    if minus_one_square && z.zeta_minus_one_square && zeta_sq_minus_one {
        6
    } else if minus_one_square && !z.zeta_plus_one_square {
        2
    } else {
        14
    }
}

pub fn rm_frobenius_data(p: u64) -> Result<RmFrobeniusData, RmError> {
    if p < 3 || p.is_multiple_of(2) || p == 5 {
        return Err(RmError::BadPrime(p));
    }
    let minus_one_square = jacobi(-1, p)? == 1;
    let zeta = if p % 5 == 1 {
        let z = find_zeta5(p).ok_or(RmError::NoZeta(p))?;
        let flags = zeta_flags(z, p)?;
        // the rule outcome must not depend on which root was picked
        let want = residue_rule(minus_one_square, &flags);
        for k in 2..5 {
            let other = zeta_flags(pow_mod(z, k, p), p)?;
            if residue_rule(minus_one_square, &other) != want {
                return Err(RmError::ChoiceDependent(p));
            }
        }
        Some(flags)
    } else {
        None
    };
    Ok(RmFrobeniusData {
        p,
        p_mod_5: (p % 5) as u8,
        minus_one_square,
        zeta,
    })
}

pub fn rm_trace_constraint(d: &RmFrobeniusData) -> RmTraceConstraint {
    match (d.p_mod_5, d.zeta) {
        (1, Some(z)) => RmTraceConstraint {
            kind: ConstraintKind::Mod16,
            residue: residue_rule(d.minus_one_square, &z),
            t_min: -2,
            t_max: 6,
        },
        (4, _) => RmTraceConstraint {
            kind: ConstraintKind::Mod8,
            residue: if d.minus_one_square { 6 } else { 2 },
            t_min: -6,
            t_max: 2,
        },
        _ => RmTraceConstraint {
            kind: ConstraintKind::ExactZero,
            residue: 0,
            t_min: 0,
            t_max: 0,
        },
    }
}

/// Trace of Frobenius on the algebraic classes: the hyperplane class plus
/// one exceptional curve per Frobenius-stable pair of lines.
pub fn algebraic_trace(p_mod_5: u8) -> i64 {
    match p_mod_5 {
        1 => 16,
        4 => 4,
        _ => 2,
    }
}

/// Exact count and `t mod 16`, where `t` is the transcendental trace in
/// `Z_2`: the count is `p² + T_alg·p + t·p + 1`, so only `t·p` is an
/// integer and `t` lies in `[t_min, t_max]` as a real number.
pub fn rm_count(
    surface: &SixLineSurface,
    p: u64,
    constraint: &RmTraceConstraint,
    backend: &dyn ModPBackend,
) -> Result<(u64, u8), RmError> {
    if !surface.is_rm() {
        return Err(RmError::NotRm);
    }
    let pi = p as i64;
    let t_alg = algebraic_trace((p % 5) as u8);
    let center = pi * pi + t_alg * pi + 1;
    let modp = backend.count_mod_p(surface, p)?;
    let modulus = match constraint.kind {
        ConstraintKind::ExactZero => 1,
        ConstraintKind::Mod8 => 8,
        ConstraintKind::Mod16 => 16,
    };
    // t ≡ residue in Z_2 means t·p ≡ residue·p
    let shift = (constraint.residue as i128 * p as i128).rem_euclid(modulus as i128) as u64;
    let class16 = ResidueClass::new((center as u64 + shift) % modulus, modulus)?;
    let class = crt_pair(class16, ResidueClass::new(modp, p)?)?;
    let m = class.modulus() as i64;
    let lo = center + constraint.t_min * pi;
    let hi = center + constraint.t_max * pi;
    let first = lo + (class.value() as i64 - lo).rem_euclid(m);
    let candidates: Vec<i64> = (0..)
        .map(|k| first + k * m)
        .take_while(|&c| c <= hi)
        .collect();
    let count = match candidates.as_slice() {
        [] => {
            return Err(RmError::ImpossibleResidue {
                p,
                t_min: constraint.t_min,
                t_max: constraint.t_max,
            })
        }
        [c] => *c,
        // only the two window ends survive: t = −6 would force all six
        // eigenvalues to −1, which cannot happen when Frobenius has order ≤ 2
        // on the lines
        [a, b] if constraint.kind == ConstraintKind::Mod8 && *a == lo && *b == hi => hi,
        _ => {
            return Err(RmError::Ambiguous {
                p,
                candidates: candidates.iter().map(|c| (c - center) / pi).collect(),
            })
        }
    };
    let count = count as u64;
    Ok((count, trace_from_count(t_alg as u32, p, count)))
}

/// Full per-prime pipeline for the real-multiplication surface.
pub fn rm_point_count(
    surface: &SixLineSurface,
    p: u64,
    backend: &dyn ModPBackend,
) -> Result<PointCount, RmError> {
    if !surface.bad_primes().is_good_prime(p) {
        return Err(RmError::BadPrime(p));
    }
    let d = rm_frobenius_data(p)?;
    let c = rm_trace_constraint(&d);
    let (count, t) = rm_count(surface, p, &c, backend)?;
    Ok(PointCount {
        p,
        count,
        trace_mod16: t,
        class_index: d.p_mod_5 as u32,
    })
}
