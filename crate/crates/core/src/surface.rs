//! Branch-locus model: six integral lines (or an integral sextic with a
//! declared line orbit), validation, bad primes and the Frobenius action on
//! the lines.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::modarith::{is_prime, prime_factors};
use crate::perm::Perm6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error("linear form has all coefficients zero")]
    ZeroLine,
    #[error("lines {0}, {1}, {2} are concurrent")]
    Concurrent(usize, usize, usize),
    #[error("Picard rank {0} outside 16..=20")]
    PicardRank(u32),
    #[error("sextic monomial {0:?} does not have degree 6")]
    NotHomogeneous((u32, u32, u32)),
    #[error("sextic is identically zero")]
    ZeroSextic,
    #[error("rational line {0} does not divide the sextic")]
    NotDivisible(usize),
    #[error("invalid line orbit: {0}")]
    Orbit(String),
    #[error("implausible bad-prime list: {0}")]
    BadPrimeList(String),
    #[error("coefficient magnitude too large for exact arithmetic")]
    Overflow,
}

/// Primitive integral linear form `a1·T1 + a2·T2 + a3·T3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LinearForm([i64; 3]);

impl LinearForm {
    /// Normalises `coeffs` to primitive form with positive leading
    /// coefficient; also returns the factor `f` with `coeffs = f · form`.
    pub fn new(coeffs: [i64; 3]) -> Result<(Self, i64), SurfaceError> {
        let g = coeffs
            .iter()
            .fold(0u64, |g, &c| crate::modarith::gcd(g, c.unsigned_abs()));
        if g == 0 {
            return Err(SurfaceError::ZeroLine);
        }
        let lead = coeffs.iter().find(|&&c| c != 0).copied().unwrap_or(1);
        let factor = g as i64 * lead.signum();
        Ok((Self(coeffs.map(|c| c / factor)), factor))
    }

    pub fn coeffs(&self) -> [i64; 3] {
        self.0
    }

    pub fn eval_mod(&self, pt: [u64; 3], p: u64) -> u64 {
        let mut acc: i128 = 0;
        for k in 0..3 {
            acc += self.0[k] as i128 * pt[k] as i128;
        }
        acc.rem_euclid(p as i128) as u64
    }
}

fn det3(a: [i64; 3], b: [i64; 3], c: [i64; 3]) -> i128 {
    let [a, b, c] = [a, b, c].map(|v| v.map(|x| x as i128));
    a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
        + a[2] * (b[0] * c[1] - b[1] * c[0])
}

/// Homogeneous integral ternary form of degree 6.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sextic {
    terms: BTreeMap<(u32, u32, u32), i64>,
}

impl Sextic {
    pub fn new(terms: BTreeMap<(u32, u32, u32), i64>) -> Result<Self, SurfaceError> {
        let terms: BTreeMap<_, _> = terms.into_iter().filter(|&(_, c)| c != 0).collect();
        if let Some(&k) = terms.keys().find(|(i, j, k)| i + j + k != 6) {
            return Err(SurfaceError::NotHomogeneous(k));
        }
        if terms.is_empty() {
            return Err(SurfaceError::ZeroSextic);
        }
        Ok(Self { terms })
    }

    /// `scale · l1 ⋯ l6`.
    pub fn from_lines(lines: &[LinearForm; 6], scale: i64) -> Result<Self, SurfaceError> {
        let mut poly: BTreeMap<(u32, u32, u32), i128> = BTreeMap::from([((0, 0, 0), scale as i128)]);
        for l in lines {
            let mut next = BTreeMap::new();
            for (&(i, j, k), &c) in &poly {
                let [a, b, d] = l.coeffs();
                for (e, coef) in [((i + 1, j, k), a), ((i, j + 1, k), b), ((i, j, k + 1), d)] {
                    if coef != 0 {
                        let v = c.checked_mul(coef as i128).ok_or(SurfaceError::Overflow)?;
                        *next.entry(e).or_insert(0i128) += v;
                    }
                }
            }
            poly = next;
        }
        let mut terms = BTreeMap::new();
        for (k, v) in poly {
            terms.insert(k, i64::try_from(v).map_err(|_| SurfaceError::Overflow)?);
        }
        Self::new(terms)
    }

    pub fn terms(&self) -> &BTreeMap<(u32, u32, u32), i64> {
        &self.terms
    }

    /// Exact value at an integral point.
    pub fn eval_exact(&self, pt: [i128; 3]) -> i128 {
        self.terms
            .iter()
            .map(|(&(i, j, k), &c)| c as i128 * pt[0].pow(i) * pt[1].pow(j) * pt[2].pow(k))
            .sum()
    }

    /// Whether the linear form divides the sextic over Q: the restriction to
    /// the line vanishes at seven distinct points of it.
    pub fn divisible_by(&self, l: &LinearForm) -> bool {
        let [a, b, c] = l.coeffs().map(|x| x as i128);
        // two independent integral vectors spanning the kernel of l
        let (v1, v2) = if a != 0 {
            ([-b, a, 0], [-c, 0, a])
        } else if b != 0 {
            ([1, 0, 0], [0, -c, b])
        } else {
            ([1, 0, 0], [0, 1, 0])
        };
        (0..7i128).all(|w| {
            let pt = [v1[0] + w * v2[0], v1[1] + w * v2[1], v1[2] + w * v2[2]];
            self.eval_exact(pt) == 0
        })
    }
}

/// Cyclic Galois orbit of conjugate lines indexed by powers of a generator of
/// `(Z/m)^*`: the line at position `k` carries the root `ζ^(generator^k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineOrbit {
    /// One-based line indices in orbit order.
    pub lines: Vec<u8>,
    pub modulus: u64,
    pub generator: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum BranchLocus {
    SixRationalLines {
        lines: [LinearForm; 6],
        /// Product of the normalisation factors of the input lines.
        scale: i64,
    },
    S5Rm {
        sextic: Sextic,
        /// Rational components, lines `1..=k` of the labelling.
        rational_lines: Vec<LinearForm>,
        orbit: LineOrbit,
        odd_bad_primes: Vec<u64>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SixLineSurface {
    pub name: String,
    pub locus: BranchLocus,
    pub picard_rank: u32,
    pub trivial_galois_pic: bool,
    sextic: Sextic,
}

/// Odd bad primes and the transcendental rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceInvariants {
    pub odd_bad_primes: Vec<u64>,
    pub b: usize,
    pub n: u32,
}

impl SurfaceInvariants {
    pub fn is_good_prime(&self, p: u64) -> bool {
        p % 2 == 1 && self.odd_bad_primes.binary_search(&p).is_err()
    }
}

fn check_rank(r: u32) -> Result<(), SurfaceError> {
    if !(16..=20).contains(&r) {
        return Err(SurfaceError::PicardRank(r));
    }
    Ok(())
}

impl SixLineSurface {
    /// Six rational lines given by raw integer coefficient triples.
    pub fn six_lines(
        name: impl Into<String>,
        raw: [[i64; 3]; 6],
        picard_rank: u32,
        trivial_galois_pic: bool,
    ) -> Result<Self, SurfaceError> {
        check_rank(picard_rank)?;
        let mut scale = 1i64;
        let mut lines = [LinearForm([1, 0, 0]); 6];
        for (slot, c) in lines.iter_mut().zip(raw) {
            let (l, f) = LinearForm::new(c)?;
            *slot = l;
            scale = scale.checked_mul(f).ok_or(SurfaceError::Overflow)?;
        }
        let sextic = Sextic::from_lines(&lines, scale)?;
        Ok(Self {
            name: name.into(),
            locus: BranchLocus::SixRationalLines { lines, scale },
            picard_rank,
            trivial_galois_pic,
            sextic,
        })
    }

    pub fn s5_rm(
        name: impl Into<String>,
        sextic: Sextic,
        rational_lines: Vec<LinearForm>,
        orbit: LineOrbit,
        mut odd_bad_primes: Vec<u64>,
        picard_rank: u32,
        trivial_galois_pic: bool,
    ) -> Result<Self, SurfaceError> {
        check_rank(picard_rank)?;
        odd_bad_primes.sort_unstable();
        odd_bad_primes.dedup();
        Ok(Self {
            name: name.into(),
            locus: BranchLocus::S5Rm {
                sextic: sextic.clone(),
                rational_lines,
                orbit,
                odd_bad_primes,
            },
            picard_rank,
            trivial_galois_pic,
            sextic,
        })
    }

    pub fn sextic(&self) -> &Sextic {
        &self.sextic
    }

    pub fn is_rm(&self) -> bool {
        matches!(self.locus, BranchLocus::S5Rm { .. })
    }

    pub fn transcendental_rank(&self) -> u32 {
        22 - self.picard_rank
    }

    pub fn validate(&self) -> Result<(), SurfaceError> {
        check_rank(self.picard_rank)?;
        match &self.locus {
            BranchLocus::SixRationalLines { lines, .. } => {
                for (i, j, k) in triples() {
                    if det3(lines[i].0, lines[j].0, lines[k].0) == 0 {
                        return Err(SurfaceError::Concurrent(i + 1, j + 1, k + 1));
                    }
                }
                Ok(())
            }
            BranchLocus::S5Rm {
                sextic,
                rational_lines,
                orbit,
                odd_bad_primes,
            } => {
                for (idx, l) in rational_lines.iter().enumerate() {
                    if !sextic.divisible_by(l) {
                        return Err(SurfaceError::NotDivisible(idx + 1));
                    }
                }
                let k = rational_lines.len();
                let mut labels: Vec<u8> = orbit.lines.clone();
                labels.sort_unstable();
                let expected: Vec<u8> = (k as u8 + 1..=6).collect();
                if labels != expected {
                    return Err(SurfaceError::Orbit(format!(
                        "orbit lines {:?} must be exactly {:?}",
                        orbit.lines, expected
                    )));
                }
                if !is_prime(orbit.modulus) || orbit.lines.len() as u64 != orbit.modulus - 1 {
                    return Err(SurfaceError::Orbit(
                        "orbit length must equal modulus - 1 for a prime modulus".into(),
                    ));
                }
                let m = orbit.modulus;
                let order = (1..m)
                    .find(|&e| crate::modarith::pow_mod(orbit.generator, e, m) == 1)
                    .unwrap_or(0);
                if order != m - 1 {
                    return Err(SurfaceError::Orbit(format!(
                        "{} does not generate (Z/{m})^*",
                        orbit.generator
                    )));
                }
                for &q in odd_bad_primes {
                    if q % 2 == 0 || !is_prime(q) {
                        return Err(SurfaceError::BadPrimeList(format!("{q} is not an odd prime")));
                    }
                }
                if m % 2 == 1 && !odd_bad_primes.contains(&m) {
                    return Err(SurfaceError::BadPrimeList(format!(
                        "the orbit modulus {m} ramifies and must be listed"
                    )));
                }
                Ok(())
            }
        }
    }

    /// Odd primes of bad reduction, ascending.
    pub fn bad_primes(&self) -> SurfaceInvariants {
        let odd_bad_primes = match &self.locus {
            BranchLocus::SixRationalLines { lines, scale } => {
                let mut set = std::collections::BTreeSet::new();
                for (i, j, k) in triples() {
                    let d = det3(lines[i].0, lines[j].0, lines[k].0);
                    set.extend(prime_factors(d.unsigned_abs()));
                }
                set.extend(prime_factors(scale.unsigned_abs() as u128));
                set.into_iter().filter(|&q| q != 2).collect()
            }
            BranchLocus::S5Rm { odd_bad_primes, .. } => odd_bad_primes.clone(),
        };
        SurfaceInvariants {
            b: odd_bad_primes.len(),
            odd_bad_primes,
            n: self.transcendental_rank(),
        }
    }

    /// Action of `Frob_p` on the six (geometric) branch lines.
    pub fn frobenius_line_permutation(&self, p: u64) -> Perm6 {
        match &self.locus {
            BranchLocus::SixRationalLines { .. } => Perm6::IDENTITY,
            BranchLocus::S5Rm { orbit, .. } => {
                let len = orbit.lines.len();
                let m = orbit.modulus;
                let target = p % m;
                // p ≡ generator^shift (mod m) rotates orbit positions by shift
                let shift = (0..len)
                    .find(|&s| crate::modarith::pow_mod(orbit.generator, s as u64, m) == target)
                    .unwrap_or(0);
                let mut images = [1u8, 2, 3, 4, 5, 6];
                for (pos, &line) in orbit.lines.iter().enumerate() {
                    images[(line - 1) as usize] = orbit.lines[(pos + shift) % len];
                }
                Perm6::from_images(images).expect("orbit rotation is a permutation")
            }
        }
    }
}

fn triples() -> impl Iterator<Item = (usize, usize, usize)> {
    (0..6).flat_map(|i| (i + 1..6).flat_map(move |j| (j + 1..6).map(move |k| (i, j, k))))
}
