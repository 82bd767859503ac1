//! Linear algebra over `F_2` on the classes `π*[l]`, `π*[e_ij]` of a double
//! plane branched over six lines: the even subspace `M`, its quotient by the
//! six relation vectors (the 2-torsion of the Brauer group), the action of
//! `Sym(6)` on it and the outer automorphism this action exhibits.
//!
//! Everything is exhaustive enumeration; nothing here is on the counting path.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::perm::Perm6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BrauerError {
    #[error("permutation {0} does not preserve the even subspace")]
    NotPreserved(String),
    #[error("permutation {perm} sends b_{index} outside the expected coset")]
    NoImage { perm: String, index: usize },
    #[error("σ ↦ σ̃ is not a homomorphism at ({0}, {1})")]
    NotHomomorphism(String, String),
}

/// Coordinates: bit 0 is `π*[l]`, bits 1..=15 the pairs `(1,2), …, (5,6)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PicVector(pub u16);

/// Bit index of the zero-based pair `{i, j}`.
pub fn pair_bit(i: usize, j: usize) -> usize {
    let (a, b) = if i < j { (i, j) } else { (j, i) };
    assert!(a != b && b < 6);
    // pairs before row a, then offset within the row
    1 + a * (11 - a) / 2 + (b - a - 1)
}

impl PicVector {
    pub const L: PicVector = PicVector(1);

    /// Sum of `π*[e_ij]` over one-based pairs.
    pub fn from_pairs(pairs: &[(usize, usize)]) -> Self {
        PicVector(pairs.iter().fold(0u16, |acc, &(i, j)| acc ^ (1 << pair_bit(i - 1, j - 1))))
    }

    pub fn add(self, o: PicVector) -> PicVector {
        PicVector(self.0 ^ o.0)
    }

    /// `σ(π*[l]) = π*[l]`, `σ(π*[e_ij]) = π*[e_σ(i)σ(j)]`.
    pub fn permute(self, s: &Perm6) -> PicVector {
        let mut out = self.0 & 1;
        for i in 0..6 {
            for j in i + 1..6 {
                if self.0 >> pair_bit(i, j) & 1 == 1 {
                    out ^= 1 << pair_bit(s.apply0(i), s.apply0(j));
                }
            }
        }
        PicVector(out)
    }

    /// `a + Σ_j a_ij = 0` for every `i`.
    pub fn is_even(self) -> bool {
        (0..6).all(|i| {
            let parity = (0..6)
                .filter(|&j| j != i)
                .fold(self.0 & 1, |acc, j| acc ^ (self.0 >> pair_bit(i, j) & 1));
            parity == 0
        })
    }
}

impl fmt::Display for PicVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        if self.0 & 1 == 1 {
            terms.push("l".to_string());
        }
        for i in 0..6 {
            for j in i + 1..6 {
                if self.0 >> pair_bit(i, j) & 1 == 1 {
                    terms.push(format!("e{}{}", i + 1, j + 1));
                }
            }
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join("+"))
        }
    }
}

/// `2[D_i] = π*[l] + Σ_{j≠i} π*[e_ij]` for zero-based `i`.
pub fn relation_vector(i: usize) -> PicVector {
    let mut v = 1u16;
    for j in (0..6).filter(|&j| j != i) {
        v ^= 1 << pair_bit(i, j);
    }
    PicVector(v)
}

/// Basis in reduced row echelon form, pivot = highest set bit.
#[derive(Debug, Clone, Default)]
struct XorBasis {
    rows: Vec<u16>,
}

fn pivot(v: u16) -> u32 {
    15 - v.leading_zeros()
}

impl XorBasis {
    fn reduce(&self, mut v: u16) -> u16 {
        for &b in &self.rows {
            if v >> pivot(b) & 1 == 1 {
                v ^= b;
            }
        }
        v
    }

    /// Returns false when `v` is already in the span.
    fn insert(&mut self, v: u16) -> bool {
        let v = self.reduce(v);
        if v == 0 {
            return false;
        }
        let p = pivot(v);
        for b in self.rows.iter_mut() {
            if *b >> p & 1 == 1 {
                *b ^= v;
            }
        }
        self.rows.push(v);
        self.rows.sort_unstable_by(|a, b| b.cmp(a));
        true
    }

    fn dim(&self) -> usize {
        self.rows.len()
    }
}

/// A 6×6 matrix over `F_2`; bit `j` of `rows[i]` is entry `(i, j)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct F2Mat6 {
    pub rows: [u8; 6],
}

impl F2Mat6 {
    pub const IDENTITY: F2Mat6 = F2Mat6 {
        rows: [1, 2, 4, 8, 16, 32],
    };

    pub fn from_rows(rows: [[u8; 6]; 6]) -> Self {
        let mut out = [0u8; 6];
        for (i, r) in rows.iter().enumerate() {
            for (j, &x) in r.iter().enumerate() {
                out[i] |= (x & 1) << j;
            }
        }
        F2Mat6 { rows: out }
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.rows[i] >> j & 1
    }

    pub fn mul(&self, o: &F2Mat6) -> F2Mat6 {
        let mut out = [0u8; 6];
        for (i, r) in out.iter_mut().enumerate() {
            for k in 0..6 {
                if self.get(i, k) == 1 {
                    *r ^= o.rows[k];
                }
            }
        }
        F2Mat6 { rows: out }
    }

    pub fn apply(&self, x: u8) -> u8 {
        (0..6).fold(0u8, |acc, i| acc | (((self.rows[i] & x).count_ones() as u8) & 1) << i)
    }

    pub fn transpose(&self) -> F2Mat6 {
        let mut out = [0u8; 6];
        for (i, r) in out.iter_mut().enumerate() {
            for j in 0..6 {
                *r |= self.get(j, i) << j;
            }
        }
        F2Mat6 { rows: out }
    }

    pub fn rank(&self) -> usize {
        let mut b = XorBasis::default();
        self.rows.iter().filter(|&&r| b.insert(r as u16)).count()
    }

    pub fn is_invertible(&self) -> bool {
        self.rank() == 6
    }

    /// Smallest `k ≥ 1` with `self^k = E`, if at most 64.
    pub fn order(&self) -> Option<usize> {
        let mut m = *self;
        for k in 1..=64 {
            if m == Self::IDENTITY {
                return Some(k);
            }
            m = m.mul(self);
        }
        None
    }

    pub fn inverse(&self) -> Option<F2Mat6> {
        let k = self.order()?;
        let mut m = Self::IDENTITY;
        for _ in 1..k {
            m = m.mul(self);
        }
        Some(m)
    }
}

impl fmt::Display for F2Mat6 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..6 {
            let row: Vec<String> = (0..6).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Canonical representative of a class in `M / ⟨relations⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BrauerElement(pub PicVector);

#[derive(Debug, Clone)]
pub struct BrauerQuotient {
    even: XorBasis,
    relations: XorBasis,
    quotient: XorBasis,
}

impl Default for BrauerQuotient {
    fn default() -> Self {
        Self::new()
    }
}

impl BrauerQuotient {
    pub fn new() -> Self {
        let mut even = XorBasis::default();
        for v in 0..=u16::MAX {
            if PicVector(v).is_even() {
                even.insert(v);
            }
        }
        let mut relations = XorBasis::default();
        for i in 0..6 {
            relations.insert(relation_vector(i).0);
        }
        let mut quotient = XorBasis::default();
        for &b in &even.rows {
            quotient.insert(relations.reduce(b));
        }
        Self {
            even,
            relations,
            quotient,
        }
    }

    pub fn even_dim(&self) -> usize {
        self.even.dim()
    }

    pub fn relation_rank(&self) -> usize {
        self.relations.dim()
    }

    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }

    pub fn contains(&self, v: PicVector) -> bool {
        self.even.reduce(v.0) == 0
    }

    pub fn class(&self, v: PicVector) -> BrauerElement {
        BrauerElement(PicVector(self.relations.reduce(v.0)))
    }

    pub fn zero(&self) -> BrauerElement {
        BrauerElement(PicVector(0))
    }

    pub fn add(&self, a: BrauerElement, b: BrauerElement) -> BrauerElement {
        self.class(a.0.add(b.0))
    }

    pub fn act(&self, s: &Perm6, x: BrauerElement) -> BrauerElement {
        self.class(x.0.permute(s))
    }

    /// Coordinates in the fixed quotient basis.
    pub fn coords(&self, x: BrauerElement) -> u8 {
        // reduced echelon basis: the coordinate is the pivot bit
        self.quotient
            .rows
            .iter()
            .enumerate()
            .fold(0u8, |acc, (k, &b)| acc | (((x.0 .0 >> pivot(b)) & 1) as u8) << k)
    }

    pub fn from_coords(&self, c: u8) -> BrauerElement {
        let v = self
            .quotient
            .rows
            .iter()
            .enumerate()
            .filter(|(k, _)| c >> k & 1 == 1)
            .fold(0u16, |acc, (_, &b)| acc ^ b);
        BrauerElement(PicVector(v))
    }

    /// Matrix of `σ` on the quotient: column `k` is the image of basis vector `k`.
    pub fn action_matrix(&self, s: &Perm6) -> F2Mat6 {
        let mut rows = [0u8; 6];
        for (k, &b) in self.quotient.rows.iter().enumerate() {
            let img = self.coords(self.act(s, BrauerElement(PicVector(b))));
            for (i, r) in rows.iter_mut().enumerate() {
                *r |= ((img >> i) & 1) << k;
            }
        }
        F2Mat6 { rows }
    }

    /// `σ` maps `M` to itself and permutes the relation vectors.
    pub fn preserves_structure(&self, s: &Perm6) -> bool {
        self.even.rows.iter().all(|&b| self.contains(PicVector(b).permute(s)))
            && (0..6).all(|i| relation_vector(i).permute(s) == relation_vector(s.apply0(i)))
    }

    /// Rank of a family of classes.
    pub fn rank(&self, xs: &[BrauerElement]) -> usize {
        let mut b = XorBasis::default();
        xs.iter().filter(|x| b.insert(x.0 .0)).count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Group {
    Sym6,
    Alt6,
}

impl Group {
    pub fn elements(self) -> Vec<Perm6> {
        let all = Perm6::all();
        match self {
            Group::Sym6 => all,
            Group::Alt6 => all.into_iter().filter(Perm6::is_even).collect(),
        }
    }
}

/// Orbit in first-seen order over the enumeration, and the stabilizer order.
pub fn orbit_stabilizer(q: &BrauerQuotient, x: BrauerElement, group: Group) -> (Vec<BrauerElement>, usize) {
    let mut orbit = Vec::new();
    let mut stab = 0;
    for s in group.elements() {
        let y = q.act(&s, x);
        if y == x {
            stab += 1;
        }
        if !orbit.contains(&y) {
            orbit.push(y);
        }
    }
    (orbit, stab)
}

pub fn b6(q: &BrauerQuotient) -> BrauerElement {
    q.class(PicVector::from_pairs(&[(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)]))
}

/// `b_1, …, b_6` and `c = Σ b_i`: the `Alt(6)`-orbit of `b_6`, with `b_6` last
/// and the rest in enumeration order.
pub fn orbit_basis(q: &BrauerQuotient) -> ([BrauerElement; 6], BrauerElement) {
    let b = b6(q);
    let (orbit, _) = orbit_stabilizer(q, b, Group::Alt6);
    let mut out = [b; 6];
    for (slot, x) in out.iter_mut().zip(orbit.iter().filter(|&&x| x != b)) {
        *slot = *x;
    }
    let c = out.iter().fold(q.zero(), |acc, &x| q.add(acc, x));
    (out, c)
}

#[derive(Debug, Clone, Serialize)]
pub struct OuterReport {
    /// `(σ, σ̃)` in cycle notation for a set of generators.
    pub table: Vec<(String, String)>,
    pub transposition_image_type: Vec<usize>,
    pub is_homomorphism: bool,
    pub is_bijective: bool,
    pub is_outer: bool,
}

/// Computes `σ̃` from `σ(b_i) = b_σ̃(i)` (plus `c` for odd `σ`) and certifies
/// that `σ ↦ σ̃` is an automorphism not preserving transpositions.
pub fn verify_outer(q: &BrauerQuotient, b: &[BrauerElement; 6], c: BrauerElement) -> Result<OuterReport, BrauerError> {
    let all = Perm6::all();
    let mut tilde = std::collections::HashMap::new();
    for s in &all {
        if !q.preserves_structure(s) {
            return Err(BrauerError::NotPreserved(s.to_string()));
        }
        let mut images = [0u8; 6];
        for (i, bi) in b.iter().enumerate() {
            let mut y = q.act(s, *bi);
            if !s.is_even() {
                y = q.add(y, c);
            }
            let j = b.iter().position(|&x| x == y).ok_or(BrauerError::NoImage {
                perm: s.to_string(),
                index: i + 1,
            })?;
            images[i] = j as u8 + 1;
        }
        let t = Perm6::from_images(images).ok_or(BrauerError::NoImage {
            perm: s.to_string(),
            index: 0,
        })?;
        tilde.insert(*s, t);
    }
    for s in &all {
        for t in &all {
            if tilde[&s.compose(t)] != tilde[s].compose(&tilde[t]) {
                return Err(BrauerError::NotHomomorphism(s.to_string(), t.to_string()));
            }
        }
    }
    let mut image: Vec<Perm6> = tilde.values().copied().collect();
    image.sort_unstable();
    image.dedup();
    let is_bijective = image.len() == 720;
    let swap = Perm6::from_cycles(&[&[1, 2]]).expect("valid cycle");
    let transposition_image_type = tilde[&swap].cycle_type();
    let is_outer = all
        .iter()
        .filter(|s| s.cycle_type() == vec![2, 1, 1, 1, 1])
        .any(|s| tilde[s].cycle_type() != vec![2, 1, 1, 1, 1]);
    let gens = [
        Perm6::from_cycles(&[&[1, 2]]),
        Perm6::from_cycles(&[&[1, 2, 3, 4, 5, 6]]),
        Perm6::from_cycles(&[&[1, 2, 3]]),
        Perm6::from_cycles(&[&[3, 4, 5, 6]]),
    ];
    let table = gens
        .iter()
        .flatten()
        .map(|s| (s.to_string(), tilde[s].to_string()))
        .collect();
    Ok(OuterReport {
        table,
        transposition_image_type,
        is_homomorphism: true,
        is_bijective,
        is_outer,
    })
}

/// Generator of the cyclic Galois action.
pub const G4_ROWS: [[u8; 6]; 6] = [
    [1, 1, 1, 0, 1, 1],
    [0, 1, 1, 1, 1, 1],
    [1, 0, 1, 1, 1, 1],
    [1, 1, 0, 1, 1, 1],
    [1, 1, 1, 1, 0, 1],
    [1, 1, 1, 1, 1, 0],
];

/// Its claimed square.
pub const G2_ROWS: [[u8; 6]; 6] = [
    [0, 1, 0, 0, 0, 0],
    [1, 0, 0, 0, 0, 0],
    [0, 0, 0, 1, 0, 0],
    [0, 0, 1, 0, 0, 0],
    [0, 0, 0, 0, 1, 0],
    [0, 0, 0, 0, 0, 1],
];

#[derive(Debug, Clone, Serialize)]
pub struct S5MatrixReport {
    pub g4_order: Option<usize>,
    /// `G4² = G2` entrywise.
    pub square_matches: bool,
    /// `G4²` and `G2` agree up to a change of basis.
    pub square_conjugate: bool,
    pub dual_order: Option<usize>,
    /// `P` with `P·G4 = A·P`, `A` the action of the line 4-cycle.
    pub conjugator: Option<F2Mat6>,
}

impl S5MatrixReport {
    pub fn ok(&self) -> bool {
        self.g4_order == Some(4) && self.square_matches && self.dual_order == Some(4) && self.conjugator.is_some()
    }
}

/// Kernel of a linear map `F_2^36 → F_2^36` given by its equations.
fn kernel36(equations: &[u64]) -> Vec<u64> {
    let mut rows: Vec<u64> = equations.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..36 {
        let Some(i) = (r..rows.len()).find(|&i| rows[i] >> col & 1 == 1) else {
            continue;
        };
        rows.swap(r, i);
        for j in 0..rows.len() {
            if j != r && rows[j] >> col & 1 == 1 {
                rows[j] ^= rows[r];
            }
        }
        pivots.push(col);
        r += 1;
    }
    let free: Vec<usize> = (0..36).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = 1u64 << f;
            for (row, &p) in rows.iter().zip(&pivots) {
                if row >> f & 1 == 1 {
                    v |= 1 << p;
                }
            }
            v
        })
        .collect()
}

fn mat_from_bits(x: u64) -> F2Mat6 {
    let mut rows = [0u8; 6];
    for (i, r) in rows.iter_mut().enumerate() {
        *r = (x >> (6 * i) & 63) as u8;
    }
    F2Mat6 { rows }
}

/// An invertible `P` with `P·X = Y·P`, searching the solution space.
pub fn find_conjugator(x: &F2Mat6, y: &F2Mat6) -> Option<F2Mat6> {
    // P entry (i, j) is unknown 6i + j; equation (i, j) of P·X − Y·P
    let mut eqs = Vec::with_capacity(36);
    for i in 0..6 {
        for j in 0..6 {
            let mut e = 0u64;
            for k in 0..6 {
                if x.get(k, j) == 1 {
                    e ^= 1 << (6 * i + k);
                }
                if y.get(i, k) == 1 {
                    e ^= 1 << (6 * k + j);
                }
            }
            eqs.push(e);
        }
    }
    let kernel = kernel36(&eqs);
    if kernel.len() > 24 {
        return None;
    }
    (1u64..1 << kernel.len()).find_map(|mask| {
        let bits = kernel
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .fold(0u64, |acc, (_, &v)| acc ^ v);
        let p = mat_from_bits(bits);
        p.is_invertible().then_some(p)
    })
}

pub fn verify_s5_matrices(q: &BrauerQuotient, g4: &F2Mat6, g2: &F2Mat6) -> S5MatrixReport {
    let dual = g4.transpose().inverse();
    let cycle = Perm6::from_cycles(&[&[3, 4, 5, 6]]).expect("valid cycle");
    let a = q.action_matrix(&cycle);
    S5MatrixReport {
        g4_order: g4.order(),
        square_matches: g4.mul(g4) == *g2,
        square_conjugate: find_conjugator(&g4.mul(g4), g2).is_some(),
        dual_order: dual.and_then(|d| d.order()),
        conjugator: find_conjugator(g4, &a),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BrauerReport {
    pub even_dim: usize,
    pub even_order: usize,
    pub relation_rank: usize,
    pub quotient_dim: usize,
    pub quotient_order: usize,
    pub b6: String,
    pub b6_alternative_matches: bool,
    pub dihedral_fixes_b6: bool,
    pub sym6_orbit: usize,
    pub sym6_stabilizer: usize,
    pub alt6_orbit: usize,
    pub alt6_orbit_rank: usize,
    pub c_orbit: usize,
    pub outer: OuterReport,
    pub s5: S5MatrixReport,
}

impl BrauerReport {
    pub fn ok(&self) -> bool {
        self.even_dim == 11
            && self.quotient_dim == 6
            && self.relation_rank == 5
            && self.b6_alternative_matches
            && self.dihedral_fixes_b6
            && self.sym6_orbit == 12
            && self.sym6_stabilizer == 60
            && self.alt6_orbit == 6
            && self.alt6_orbit_rank == 6
            && self.c_orbit == 1
            && self.outer.is_homomorphism
            && self.outer.is_bijective
            && self.outer.is_outer
            && self.outer.transposition_image_type == vec![2, 2, 2]
            && self.s5.ok()
    }
}

pub fn brauer_report() -> Result<BrauerReport, BrauerError> {
    let q = BrauerQuotient::new();
    let b = b6(&q);
    let alt = q.class(PicVector::from_pairs(&[(1, 3), (2, 3), (2, 4), (4, 6), (1, 6)]));
    let dihedral = [
        Perm6::from_cycles(&[&[1, 2, 3, 4, 5]]),
        Perm6::from_cycles(&[&[2, 5], &[3, 4]]),
    ];
    let dihedral_fixes_b6 = dihedral.iter().flatten().all(|s| q.act(s, b) == b);
    let (sym_orbit, sym_stab) = orbit_stabilizer(&q, b, Group::Sym6);
    let (alt_orbit, _) = orbit_stabilizer(&q, b, Group::Alt6);
    let (basis, c) = orbit_basis(&q);
    let (c_orbit, _) = orbit_stabilizer(&q, c, Group::Sym6);
    let outer = verify_outer(&q, &basis, c)?;
    let s5 = verify_s5_matrices(&q, &F2Mat6::from_rows(G4_ROWS), &F2Mat6::from_rows(G2_ROWS));
    Ok(BrauerReport {
        even_dim: q.even_dim(),
        even_order: 1 << q.even_dim(),
        relation_rank: q.relation_rank(),
        quotient_dim: q.dim(),
        quotient_order: 1 << q.dim(),
        b6: b.0.to_string(),
        b6_alternative_matches: alt == b,
        dihedral_fixes_b6,
        sym6_orbit: sym_orbit.len(),
        sym6_stabilizer: sym_stab,
        alt6_orbit: alt_orbit.len(),
        alt6_orbit_rank: q.rank(&alt_orbit),
        c_orbit: c_orbit.len(),
        outer,
        s5,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_bits_are_lexicographic() {
        let mut bits = Vec::new();
        for i in 0..6 {
            for j in i + 1..6 {
                bits.push(pair_bit(i, j));
            }
        }
        assert_eq!(bits, (1..=15).collect::<Vec<_>>());
    }

    #[test]
    fn even_subspace_and_quotient() {
        let q = BrauerQuotient::new();
        assert_eq!(q.even_dim(), 11);
        // brute-force count of the subspace
        assert_eq!((0..=u16::MAX).filter(|&v| PicVector(v).is_even()).count(), 2048);
        assert_eq!(q.relation_rank(), 5);
        assert_eq!(q.dim(), 6);
        for i in 0..6 {
            assert!(q.contains(relation_vector(i)));
            assert_eq!(q.class(relation_vector(i)), q.zero());
        }
        assert!(q.contains(PicVector::from_pairs(&[(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)])));
    }

    #[test]
    fn coordinates_round_trip() {
        let q = BrauerQuotient::new();
        for c in 0..64u8 {
            assert_eq!(q.coords(q.from_coords(c)), c);
        }
    }

    #[test]
    fn action_is_homomorphism() {
        let q = BrauerQuotient::new();
        assert_eq!(q.action_matrix(&Perm6::IDENTITY), F2Mat6::IDENTITY);
        let gens = [
            Perm6::from_cycles(&[&[1, 2]]).unwrap(),
            Perm6::from_cycles(&[&[1, 2, 3, 4, 5, 6]]).unwrap(),
            Perm6::from_cycles(&[&[2, 4], &[3, 6]]).unwrap(),
        ];
        for s in &gens {
            for t in &gens {
                assert_eq!(
                    q.action_matrix(&s.compose(t)),
                    q.action_matrix(s).mul(&q.action_matrix(t))
                );
            }
        }
    }

    #[test]
    fn f2_matrix_basics() {
        let g2 = F2Mat6::from_rows(G2_ROWS);
        assert_eq!(g2.order(), Some(2));
        assert_eq!(g2.transpose(), g2);
        assert_eq!(F2Mat6::IDENTITY.apply(0b101), 0b101);
        let p = find_conjugator(&g2, &g2).unwrap();
        assert_eq!(p.mul(&g2), g2.mul(&p));
    }

    #[test]
    fn report_structure() {
        let r = brauer_report().unwrap();
        assert_eq!((r.even_order, r.relation_rank, r.quotient_order), (2048, 5, 64));
        assert!(r.b6_alternative_matches && r.dihedral_fixes_b6);
        assert_eq!((r.sym6_orbit, r.sym6_stabilizer), (12, 60));
        assert_eq!((r.alt6_orbit, r.alt6_orbit_rank, r.c_orbit), (6, 6, 1));
        assert!(r.outer.is_bijective && r.outer.is_outer);
        assert_eq!(r.outer.transposition_image_type, vec![2, 2, 2]);
        assert_eq!((r.s5.g4_order, r.s5.dual_order), (Some(4), Some(4)));
        assert!(r.s5.square_conjugate);
        let p = r.s5.conjugator.unwrap();
        let q = BrauerQuotient::new();
        let a = q.action_matrix(&Perm6::from_cycles(&[&[3, 4, 5, 6]]).unwrap());
        assert!(p.is_invertible());
        assert_eq!(p.mul(&F2Mat6::from_rows(G4_ROWS)), a.mul(&p));
    }

    #[test]
    fn published_square() {
        // G4² is the involution swapping basis vectors 1 ↔ 3 and 2 ↔ 4
        let g4 = F2Mat6::from_rows(G4_ROWS);
        let sq = F2Mat6::from_rows([
            [0, 0, 1, 0, 0, 0],
            [0, 0, 0, 1, 0, 0],
            [1, 0, 0, 0, 0, 0],
            [0, 1, 0, 0, 0, 0],
            [0, 0, 0, 0, 1, 0],
            [0, 0, 0, 0, 0, 1],
        ]);
        assert_eq!(g4.mul(&g4), sq);
    }
}
