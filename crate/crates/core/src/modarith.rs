//! Exact modular-integer primitives: Jacobi symbols, inverses, CRT and a
//! segmented prime sieve.
//!
//! Everything works on 64-bit magnitudes. Point counts for `p < 10^8` satisfy
//! `p² + 22p + 1 < 2^63`, which [`check_prime_bound`] asserts at pipeline entry.

use thiserror::Error;

/// Default sieve segment length (number of odd candidates per segment).
pub const DEFAULT_SEGMENT_LEN: usize = 1 << 20;

/// Largest prime the counting pipeline accepts.
pub const MAX_PIPELINE_PRIME: u64 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("Jacobi symbol needs an odd modulus >= 3, got {0}")]
    EvenModulus(u64),
    #[error("{a} is not invertible modulo {m}")]
    NotInvertible { a: i64, m: u64 },
    #[error("moduli {0} and {1} are not coprime")]
    NotCoprime(u64, u64),
    #[error("residue {value} out of range for modulus {modulus}")]
    OutOfRange { value: u64, modulus: u64 },
    #[error("modulus must be positive")]
    ZeroModulus,
    #[error("prime {0} exceeds the supported bound {MAX_PIPELINE_PRIME}")]
    PrimeTooLarge(u64),
}

/// A residue `value mod modulus` with `0 <= value < modulus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ResidueClass {
    value: u64,
    modulus: u64,
}

impl ResidueClass {
    pub fn new(value: u64, modulus: u64) -> Result<Self, ArithError> {
        if modulus == 0 {
            return Err(ArithError::ZeroModulus);
        }
        if value >= modulus {
            return Err(ArithError::OutOfRange { value, modulus });
        }
        Ok(Self { value, modulus })
    }

    /// Reduces an arbitrary signed integer.
    pub fn reduce(x: i128, modulus: u64) -> Result<Self, ArithError> {
        if modulus == 0 {
            return Err(ArithError::ZeroModulus);
        }
        Ok(Self {
            value: x.rem_euclid(modulus as i128) as u64,
            modulus,
        })
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }
}

impl std::fmt::Display for ResidueClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} mod {}", self.value, self.modulus)
    }
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Jacobi symbol `(a/m)` by the binary reciprocity algorithm.
pub fn jacobi(a: i64, m: u64) -> Result<i8, ArithError> {
    if m < 3 || m.is_multiple_of(2) {
        return Err(ArithError::EvenModulus(m));
    }
    let mut a = (a as i128).rem_euclid(m as i128) as u64;
    let mut m = m;
    let mut t = 1i8;
    while a != 0 {
        let tz = a.trailing_zeros();
        a >>= tz;
        // (2/m) = -1 iff m = 3, 5 (mod 8)
        if tz % 2 == 1 && matches!(m % 8, 3 | 5) {
            t = -t;
        }
        if a % 4 == 3 && m % 4 == 3 {
            t = -t;
        }
        std::mem::swap(&mut a, &mut m);
        a %= m;
    }
    Ok(if m == 1 { t } else { 0 })
}

/// Inverse of `a` modulo `m`, in `[0, m)`.
pub fn mod_inverse(a: i64, m: u64) -> Result<u64, ArithError> {
    if m == 0 {
        return Err(ArithError::ZeroModulus);
    }
    if m == 1 {
        return Ok(0);
    }
    let (mut r0, mut r1) = (m as i128, (a as i128).rem_euclid(m as i128));
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return Err(ArithError::NotInvertible { a, m });
    }
    Ok(s0.rem_euclid(m as i128) as u64)
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Combines residues with coprime moduli into one modulo their product.
pub fn crt_pair(r1: ResidueClass, r2: ResidueClass) -> Result<ResidueClass, ArithError> {
    let (m1, m2) = (r1.modulus, r2.modulus);
    if gcd(m1, m2) != 1 {
        return Err(ArithError::NotCoprime(m1, m2));
    }
    let m = m1 as u128 * m2 as u128;
    if m > u64::MAX as u128 {
        return Err(ArithError::OutOfRange {
            value: 0,
            modulus: u64::MAX,
        });
    }
    let inv = mod_inverse((m1 % m2) as i64, m2)?;
    let diff = (r2.value as i128 - r1.value as i128).rem_euclid(m2 as i128) as u64;
    let k = mul_mod(diff, inv, m2);
    let value = r1.value as u128 + m1 as u128 * k as u128;
    ResidueClass::new(value as u64, m as u64)
}

/// Rejects primes whose point counts could overflow 64-bit arithmetic.
pub fn check_prime_bound(p: u64) -> Result<(), ArithError> {
    if p > MAX_PIPELINE_PRIME {
        return Err(ArithError::PrimeTooLarge(p));
    }
    Ok(())
}

/// Trial-division primality test, used only for small validation work.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Distinct prime factors of `n` by trial division, ascending.
pub fn prime_factors(mut n: u128) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u128;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d as u64);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n as u64);
    }
    out
}

fn base_primes(limit: u64) -> Vec<u64> {
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    for i in 2..=limit {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Ascending iterator over the primes in `[lo, hi]`, sieving one segment of
/// odd candidates at a time.
#[derive(Debug)]
pub struct PrimeIter {
    hi: u64,
    next_start: u64,
    segment_len: usize,
    base: Vec<u64>,
    buffer: Vec<u64>,
    pos: usize,
    emit_two: bool,
}

impl PrimeIter {
    pub fn new(lo: u64, hi: u64) -> Self {
        Self::with_segment_len(lo, hi, DEFAULT_SEGMENT_LEN)
    }

    pub fn with_segment_len(lo: u64, hi: u64, segment_len: usize) -> Self {
        let lo = lo.max(2);
        let first_odd = if lo <= 3 { 3 } else { lo | 1 };
        Self {
            hi,
            next_start: first_odd,
            segment_len: segment_len.max(1),
            base: base_primes(isqrt(hi).max(2)),
            buffer: Vec::new(),
            pos: 0,
            emit_two: lo <= 2 && hi >= 2,
        }
    }

    fn fill(&mut self) -> bool {
        self.buffer.clear();
        self.pos = 0;
        while self.buffer.is_empty() {
            if self.next_start > self.hi {
                return false;
            }
            let start = self.next_start;
            let span = (self.segment_len as u64).saturating_mul(2);
            let end = start.saturating_add(span - 1).min(self.hi);
            let count = ((end - start) / 2 + 1) as usize;
            let mut composite = vec![false; count];
            for &q in self.base.iter().skip(1) {
                if q * q > end {
                    break;
                }
                let mut m = (start.div_ceil(q) * q).max(q * q);
                if m % 2 == 0 {
                    m += q;
                }
                while m <= end {
                    composite[((m - start) / 2) as usize] = true;
                    m += 2 * q;
                }
            }
            for (i, &c) in composite.iter().enumerate() {
                let v = start + 2 * i as u64;
                if !c && v >= 3 {
                    self.buffer.push(v);
                }
            }
            self.next_start = end + 1 + (end + 1).is_multiple_of(2) as u64;
            if end == self.hi {
                self.next_start = self.hi + 1;
            }
        }
        true
    }
}

impl Iterator for PrimeIter {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.emit_two {
            self.emit_two = false;
            return Some(2);
        }
        if self.pos >= self.buffer.len() && !self.fill() {
            return None;
        }
        let p = self.buffer[self.pos];
        self.pos += 1;
        Some(p)
    }
}

/// All primes in `[lo, hi]`, ascending.
pub fn primes_in_range(lo: u64, hi: u64) -> Vec<u64> {
    PrimeIter::new(lo, hi).collect()
}
