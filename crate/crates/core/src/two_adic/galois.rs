use crate::modarith::jacobi;
use crate::surface::SurfaceInvariants;

use super::TwoAdicError;

/// Frobenius class as exponent bits over `(−1, 2, p_1, …, p_b)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GaloisClass {
    bits: Vec<u8>,
}

impl GaloisClass {
    pub fn from_bits(bits: Vec<u8>) -> Self {
        assert!(bits.iter().all(|&b| b <= 1), "class bits must be 0 or 1");
        Self { bits }
    }

    pub fn from_index(index: u32, len: usize) -> Self {
        Self {
            bits: (0..len).map(|i| ((index >> i) & 1) as u8).collect(),
        }
    }

    /// `Σ s_i · 2^position`, positions ordered `−1, 0, 1, …, b`.
    pub fn index(&self) -> u32 {
        self.bits
            .iter()
            .enumerate()
            .map(|(i, &b)| (b as u32) << i)
            .sum()
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Positions carrying a 1.
    pub fn support(&self) -> Vec<usize> {
        (0..self.bits.len()).filter(|&i| self.bits[i] == 1).collect()
    }
}

/// `(−1, 2, p_1, …, p_b)`.
pub fn class_moduli(inv: &SurfaceInvariants) -> Vec<i64> {
    let mut m = vec![-1, 2];
    m.extend(inv.odd_bad_primes.iter().map(|&q| q as i64));
    m
}

pub fn galois_class(inv: &SurfaceInvariants, p: u64) -> Result<GaloisClass, TwoAdicError> {
    let mut bits = Vec::with_capacity(inv.b + 2);
    for d in class_moduli(inv) {
        match jacobi(d, p)? {
            1 => bits.push(0),
            -1 => bits.push(1),
            _ => return Err(TwoAdicError::SymbolZero { d, p }),
        }
    }
    Ok(GaloisClass { bits })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn symbol_by_enumeration(d: i64, p: u64) -> i8 {
        let r = d.rem_euclid(p as i64) as u64;
        if (1..p).any(|x| x * x % p == r) {
            1
        } else {
            -1
        }
    }

    #[test]
    fn examples() {
        let inv = fixtures::s4().bad_primes();
        assert_eq!(galois_class(&inv, 7).unwrap().bits(), &[1, 0, 1, 1]);
        assert_eq!(galois_class(&inv, 11).unwrap().bits(), &[1, 1, 0, 0]);
        assert!(galois_class(&inv, 5).is_err());
    }

    #[test]
    fn bits_follow_symbols() {
        let inv = fixtures::s1().bad_primes();
        for p in crate::modarith::primes_in_range(31, 400) {
            let c = galois_class(&inv, p).unwrap();
            for (bit, d) in c.bits().iter().zip(class_moduli(&inv)) {
                assert_eq!(*bit == 1, symbol_by_enumeration(d, p) == -1);
            }
            assert_eq!(GaloisClass::from_index(c.index(), c.len()), c);
        }
    }

    #[test]
    fn trivial_class() {
        // p ≡ 1 (mod 8) with 3 and 5 squares: 241 = 15² + 16
        let inv = fixtures::s4().bad_primes();
        assert_eq!(galois_class(&inv, 241).unwrap().index(), 0);
    }
}
