//! The linear system in the trace unknowns. Each observed class `s` gives
//!
//! `T(s) ≡ n + 2Σ x_i + 4Σ y_ii' + 8Σ z_ii'i'' (mod 16)`
//!
//! over the indices `i ∈ M_s`. Dividing by 2 leaves a system over `Z/8` with
//! coefficients 1, 2 and 4, solved through a Smith form.

use std::collections::BTreeMap;

use itertools::Itertools;

use super::{GaloisClass, TwoAdicError};

/// Number of unknowns for `len = b + 2` class positions.
pub fn unknown_count(len: usize) -> usize {
    len + len * len.saturating_sub(1) / 2 + len * len.saturating_sub(1) * len.saturating_sub(2) / 6
}

/// `x_i mod 8`, `y_ii' mod 4`, `z_ii'i'' mod 2`; pairs and triples in
/// lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceUnknowns {
    pub len: usize,
    pub x: Vec<u8>,
    pub y: Vec<u8>,
    pub z: Vec<u8>,
}

impl TraceUnknowns {
    pub fn zero(len: usize) -> Self {
        let c = unknown_count(len);
        let pairs = len * len.saturating_sub(1) / 2;
        Self {
            len,
            x: vec![0; len],
            y: vec![0; pairs],
            z: vec![0; c - len - pairs],
        }
    }
}

fn pair_index(len: usize, i: usize, j: usize) -> usize {
    // pairs (a, b), a < b, lexicographic
    i * (2 * len - i - 1) / 2 + (j - i - 1)
}

fn triple_positions(len: usize) -> BTreeMap<(usize, usize, usize), usize> {
    (0..len)
        .tuple_combinations()
        .enumerate()
        .map(|(k, (a, b, c))| ((a, b, c), k))
        .collect()
}

/// Right-hand side of the expansion for class `s`.
pub fn trace_expansion(s: &GaloisClass, u: &TraceUnknowns, n: u32) -> u8 {
    let m = s.support();
    let triples = triple_positions(u.len);
    let mut acc = n as u64;
    for &i in &m {
        acc += 2 * u.x[i] as u64;
    }
    for (&i, &j) in m.iter().tuple_combinations() {
        acc += 4 * u.y[pair_index(u.len, i, j)] as u64;
    }
    for (&i, &j, &k) in m.iter().tuple_combinations() {
        acc += 8 * u.z[triples[&(i, j, k)]] as u64;
    }
    (acc % 16) as u8
}

/// One observed trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceCongruence {
    pub cls: GaloisClass,
    pub rhs: u8,
    pub witness_prime: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Insertion {
    /// First congruence for this class; a new row.
    New,
    /// Class seen before with the same trace.
    Duplicate,
}

#[derive(Debug, Clone)]
pub struct CongruenceSystem {
    len: usize,
    n: u32,
    rows: Vec<Vec<u8>>,
    rhs: Vec<u8>,
    seen: BTreeMap<u32, (u8, u64)>,
    triples: BTreeMap<(usize, usize, usize), usize>,
}

/// Smith form of the current system over `Z/8`.
struct Smith {
    /// Valuations of the nonzero diagonal entries.
    vals: Vec<u32>,
    /// Transformed right-hand side.
    rhs: Vec<u8>,
    /// Column transform, `unknowns × unknowns`.
    q: Vec<Vec<u8>>,
}

impl CongruenceSystem {
    pub fn new(len: usize, n: u32) -> Self {
        Self {
            len,
            n,
            rows: Vec::new(),
            rhs: Vec::new(),
            seen: BTreeMap::new(),
            triples: triple_positions(len),
        }
    }

    pub fn unknowns(&self) -> usize {
        unknown_count(self.len)
    }

    /// Number of distinct classes observed.
    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    fn row_for(&self, s: &GaloisClass) -> Vec<u8> {
        let len = self.len;
        let mut row = vec![0u8; self.unknowns()];
        let m = s.support();
        for &i in &m {
            row[i] = 1;
        }
        let off = len;
        for (&i, &j) in m.iter().tuple_combinations() {
            row[off + pair_index(len, i, j)] = 2;
        }
        let off = len + len * (len - 1) / 2;
        for (&i, &j, &k) in m.iter().tuple_combinations() {
            row[off + self.triples[&(i, j, k)]] = 4;
        }
        row
    }

    pub fn add_congruence(&mut self, c: &TraceCongruence) -> Result<Insertion, TwoAdicError> {
        if c.cls.len() != self.len {
            return Err(TwoAdicError::ClassLength {
                got: c.cls.len(),
                want: self.len,
            });
        }
        let class = c.cls.index();
        let diff = (c.rhs as i64 - self.n as i64).rem_euclid(16) as u8;
        if diff % 2 == 1 {
            return Err(TwoAdicError::OddDifference {
                class,
                rhs: c.rhs,
                n: self.n,
            });
        }
        if let Some(&(first_rhs, first)) = self.seen.get(&class) {
            if first_rhs != c.rhs {
                return Err(TwoAdicError::InconsistentDuplicate {
                    class,
                    first,
                    first_rhs,
                    second: c.witness_prime,
                    second_rhs: c.rhs,
                });
            }
            return Ok(Insertion::Duplicate);
        }
        self.seen.insert(class, (c.rhs, c.witness_prime));
        self.rows.push(self.row_for(&c.cls));
        self.rhs.push(diff / 2);
        Ok(Insertion::New)
    }

    fn smith(&self) -> Smith {
        let m = self.rows.len();
        let nv = self.unknowns();
        let mut a: Vec<Vec<u8>> = self.rows.clone();
        let mut b = self.rhs.clone();
        let mut q: Vec<Vec<u8>> = (0..nv)
            .map(|i| (0..nv).map(|j| (i == j) as u8).collect())
            .collect();
        let mut vals = Vec::new();
        for t in 0..m.min(nv) {
            // entry of least valuation in the trailing block
            let mut best: Option<(u32, usize, usize)> = None;
            'search: for (i, row) in a.iter().enumerate().skip(t) {
                for (j, &v) in row.iter().enumerate().skip(t) {
                    if v != 0 {
                        let val = v.trailing_zeros();
                        if best.is_none_or(|(bv, _, _)| val < bv) {
                            best = Some((val, i, j));
                            if val == 0 {
                                break 'search;
                            }
                        }
                    }
                }
            }
            let Some((v, pi, pj)) = best else { break };
            a.swap(t, pi);
            b.swap(t, pi);
            if pj != t {
                for row in a.iter_mut() {
                    row.swap(t, pj);
                }
                for row in q.iter_mut() {
                    row.swap(t, pj);
                }
            }
            // normalise the pivot to 2^v
            let unit = a[t][t] >> v;
            let uinv = [0, 1, 0, 3, 0, 5, 0, 7][unit as usize];
            for x in a[t].iter_mut() {
                *x = (*x * uinv) & 7;
            }
            b[t] = (b[t] * uinv) & 7;
            let pivot_row = a[t].clone();
            for i in t + 1..m {
                let f = a[i][t] >> v;
                if f != 0 {
                    for (x, &pv) in a[i].iter_mut().zip(&pivot_row) {
                        *x = x.wrapping_sub(f.wrapping_mul(pv)) & 7;
                    }
                    b[i] = b[i].wrapping_sub(f.wrapping_mul(b[t])) & 7;
                }
            }
            // column t is now zero below the pivot, so column moves touch row t only
            for j in t + 1..nv {
                let f = a[t][j] >> v;
                if f != 0 {
                    a[t][j] = 0;
                    for row in q.iter_mut() {
                        row[j] = row[j].wrapping_sub(f.wrapping_mul(row[t])) & 7;
                    }
                }
            }
            vals.push(v);
        }
        Smith { vals, rhs: b, q }
    }

    /// Whether the observed rows pin every unknown to its modulus.
    pub fn is_unique(&self) -> bool {
        self.image_bits(&self.smith()) == self.full_bits()
    }

    /// `log2` of the number of distinct values of the unknowns.
    fn full_bits(&self) -> usize {
        let pairs = self.len * (self.len - 1) / 2;
        3 * self.len + 2 * pairs + (self.unknowns() - self.len - pairs)
    }

    fn image_bits(&self, sm: &Smith) -> usize {
        sm.vals.iter().map(|v| 3 - *v as usize).sum()
    }

    /// The unique solution, `None` while underdetermined.
    pub fn solve_unknowns(&self) -> Result<Option<TraceUnknowns>, TwoAdicError> {
        let sm = self.smith();
        let r = sm.vals.len();
        for (t, &rhs) in sm.rhs.iter().enumerate() {
            let ok = if t < r {
                rhs.trailing_zeros() >= sm.vals[t] || rhs == 0
            } else {
                rhs == 0
            };
            if !ok {
                return Err(TwoAdicError::Inconsistent);
            }
        }
        let len = self.len;
        let pairs = len * (len - 1) / 2;
        if self.image_bits(&sm) != self.full_bits() {
            return Ok(None);
        }
        let nv = self.unknowns();
        let w: Vec<u8> = (0..nv)
            .map(|t| if t < r { sm.rhs[t] >> sm.vals[t] } else { 0 })
            .collect();
        let u: Vec<u8> = (0..nv)
            .map(|i| {
                sm.q[i]
                    .iter()
                    .zip(&w)
                    .fold(0u8, |acc, (&qij, &wj)| acc.wrapping_add(qij.wrapping_mul(wj)) & 7)
            })
            .collect();
        Ok(Some(TraceUnknowns {
            len,
            x: u[..len].to_vec(),
            y: u[len..len + pairs].iter().map(|v| v & 3).collect(),
            z: u[len + pairs..].iter().map(|v| v & 1).collect(),
        }))
    }
}
