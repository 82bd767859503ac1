//! Square matrices over `Z/2^K`, stored as reduced `u64` entries.

use std::fmt;

pub fn mask(k: u32) -> u64 {
    if k >= 64 {
        u64::MAX
    } else {
        (1u64 << k) - 1
    }
}

/// 2-adic valuation of `x mod 2^k`, capped at `k` for zero.
pub fn val(x: u64, k: u32) -> u32 {
    let x = x & mask(k);
    if x == 0 {
        k
    } else {
        x.trailing_zeros()
    }
}

/// Inverse of an odd number modulo `2^k` by Newton iteration.
pub fn inv_odd(a: u64, k: u32) -> u64 {
    debug_assert!(a % 2 == 1);
    let mut x = a; // correct mod 8
    for _ in 0..6 {
        x = x.wrapping_mul(2u64.wrapping_sub(a.wrapping_mul(x)));
    }
    x & mask(k)
}

#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    n: usize,
    k: u32,
    a: Vec<u64>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat mod 2^{} [", self.k)?;
        for i in 0..self.n {
            writeln!(f, "  {:?}", self.row_signed(i))?;
        }
        write!(f, "]")
    }
}

impl Mat {
    pub fn zeros(n: usize, k: u32) -> Self {
        Self { n, k, a: vec![0; n * n] }
    }

    pub fn identity(n: usize, k: u32) -> Self {
        let mut m = Self::zeros(n, k);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>], k: u32) -> Self {
        let n = rows.len();
        let mut m = Self::zeros(n, k);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), n, "matrix must be square");
            for (j, &v) in r.iter().enumerate() {
                m.set_signed(i, j, v as i128);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn precision(&self) -> u32 {
        self.k
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.a[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.a[i * self.n + j] = v & mask(self.k);
    }

    pub fn set_signed(&mut self, i: usize, j: usize, v: i128) {
        let m = 1i128 << self.k;
        self.set(i, j, v.rem_euclid(m) as u64);
    }

    /// Entry as the representative in `[−2^(k−1), 2^(k−1))`.
    pub fn signed(&self, i: usize, j: usize) -> i64 {
        let v = self.get(i, j) as i64;
        if v >= 1 << (self.k - 1) {
            v - (1 << self.k)
        } else {
            v
        }
    }

    fn row_signed(&self, i: usize) -> Vec<i64> {
        (0..self.n).map(|j| self.signed(i, j)).collect()
    }

    pub fn mul(&self, o: &Mat) -> Mat {
        assert_eq!(self.n, o.n);
        let k = self.k.min(o.k);
        let mut out = Mat::zeros(self.n, k);
        for i in 0..self.n {
            for l in 0..self.n {
                let x = self.get(i, l);
                if x == 0 {
                    continue;
                }
                for j in 0..self.n {
                    let idx = i * self.n + j;
                    out.a[idx] = out.a[idx].wrapping_add(x.wrapping_mul(o.get(l, j)));
                }
            }
        }
        out.a.iter_mut().for_each(|v| *v &= mask(k));
        out
    }

    pub fn add(&self, o: &Mat) -> Mat {
        self.zip(o, u64::wrapping_add)
    }

    pub fn sub(&self, o: &Mat) -> Mat {
        self.zip(o, u64::wrapping_sub)
    }

    fn zip(&self, o: &Mat, f: impl Fn(u64, u64) -> u64) -> Mat {
        let k = self.k.min(o.k);
        let mut out = Mat::zeros(self.n, k);
        for (idx, v) in out.a.iter_mut().enumerate() {
            *v = f(self.a[idx], o.a[idx]) & mask(k);
        }
        out
    }

    pub fn scale(&self, c: u64) -> Mat {
        let mut out = self.clone();
        out.a.iter_mut().for_each(|v| *v = v.wrapping_mul(c) & mask(self.k));
        out
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zeros(self.n, self.k);
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    pub fn trace(&self) -> u64 {
        (0..self.n)
            .fold(0u64, |acc, i| acc.wrapping_add(self.get(i, i)))
            & mask(self.k)
    }

    /// Same matrix read at lower precision.
    pub fn reduce(&self, k: u32) -> Mat {
        let k = k.min(self.k);
        let mut out = self.clone();
        out.k = k;
        out.a.iter_mut().for_each(|v| *v &= mask(k));
        out
    }

    /// Every entry divisible by `2^e`.
    pub fn is_zero_mod(&self, e: u32) -> bool {
        let m = mask(e.min(self.k));
        self.a.iter().all(|&v| v & m == 0)
    }

    /// Minimum entry valuation.
    pub fn valuation(&self) -> u32 {
        self.a.iter().map(|&v| val(v, self.k)).min().unwrap_or(self.k)
    }

    /// Entrywise `x / 2^s` for a matrix divisible by `2^s`; the result is
    /// known to precision `k − s`.
    pub fn div_pow2(&self, s: u32) -> Option<Mat> {
        if !self.is_zero_mod(s) {
            return None;
        }
        let mut out = Mat::zeros(self.n, self.k - s);
        for (idx, v) in out.a.iter_mut().enumerate() {
            *v = self.a[idx] >> s;
        }
        Some(out)
    }

    /// Entrywise `x · 2^s`, known to precision `k + s`.
    pub fn mul_pow2(&self, s: u32) -> Mat {
        let k = self.k + s;
        let mut out = Mat::zeros(self.n, k);
        for (idx, v) in out.a.iter_mut().enumerate() {
            *v = (self.a[idx] << s) & mask(k);
        }
        out
    }

    /// Inverse by Gauss–Jordan elimination on odd pivots.
    pub fn inverse(&self) -> Option<Mat> {
        let n = self.n;
        let k = self.k;
        let mut a = self.clone();
        let mut inv = Mat::identity(n, k);
        for c in 0..n {
            let r = (c..n).find(|&r| a.get(r, c) % 2 == 1)?;
            if r != c {
                for j in 0..n {
                    let (x, y) = (a.get(r, j), a.get(c, j));
                    a.set(r, j, y);
                    a.set(c, j, x);
                    let (x, y) = (inv.get(r, j), inv.get(c, j));
                    inv.set(r, j, y);
                    inv.set(c, j, x);
                }
            }
            let pinv = inv_odd(a.get(c, c), k);
            for j in 0..n {
                a.set(c, j, a.get(c, j).wrapping_mul(pinv));
                inv.set(c, j, inv.get(c, j).wrapping_mul(pinv));
            }
            for r in 0..n {
                if r == c {
                    continue;
                }
                let f = a.get(r, c);
                if f == 0 {
                    continue;
                }
                for j in 0..n {
                    a.set(r, j, a.get(r, j).wrapping_sub(f.wrapping_mul(a.get(c, j))));
                    inv.set(r, j, inv.get(r, j).wrapping_sub(f.wrapping_mul(inv.get(c, j))));
                }
            }
        }
        Some(inv)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }
}
