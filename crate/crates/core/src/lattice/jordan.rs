//! Jordan splitting of a symmetric form over `Z/2^K` into an orthogonal sum
//! of scaled unit blocks of dimension 1 or 2.

use super::ring::{inv_odd, val, Mat};
use super::{GramLattice, LatticeError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JordanBlock {
    pub scale: u32,
    /// First basis index of the block in the decomposition basis.
    pub start: usize,
    pub dim: usize,
    /// Unit part `B` (row-major `dim × dim`), the block being `2^scale · B`.
    pub unit: Vec<u64>,
}

#[derive(Debug, Clone)]
pub struct JordanDecomposition {
    /// Columns are the new basis; `det` is odd.
    pub basis_change: Mat,
    pub blocks: Vec<JordanBlock>,
    /// `basis_changeᵀ · gram · basis_change`, block diagonal.
    pub diagonal: Mat,
}

impl JordanDecomposition {
    /// Scale of every basis vector, in basis order.
    pub fn scales(&self) -> Vec<u32> {
        let mut s = Vec::new();
        for b in &self.blocks {
            s.extend(std::iter::repeat_n(b.scale, b.dim));
        }
        s
    }

    pub fn max_scale(&self) -> u32 {
        self.blocks.iter().map(|b| b.scale).max().unwrap_or(0)
    }

    /// Block-diagonal inverse of the unit parts.
    pub fn unit_inverse(&self) -> Mat {
        let k = self.diagonal.precision();
        let mut m = Mat::zeros(self.diagonal.dim(), k);
        for b in &self.blocks {
            let s = b.start;
            if b.dim == 1 {
                m.set(s, s, inv_odd(b.unit[0], k));
            } else {
                let (a, c, d) = (b.unit[0], b.unit[1], b.unit[3]);
                let det = a.wrapping_mul(d).wrapping_sub(c.wrapping_mul(c));
                let di = inv_odd(det & super::ring::mask(k), k);
                m.set(s, s, d.wrapping_mul(di));
                m.set(s, s + 1, c.wrapping_neg().wrapping_mul(di));
                m.set(s + 1, s, c.wrapping_neg().wrapping_mul(di));
                m.set(s + 1, s + 1, a.wrapping_mul(di));
            }
        }
        m
    }
}

/// `v_j ← v_j − c·v_i` on the basis and the matching congruence on `g`.
fn column_move(g: &mut Mat, t: &mut Mat, j: usize, i: usize, c: u64) {
    if c == 0 {
        return;
    }
    let n = g.dim();
    for r in 0..n {
        t.set(r, j, t.get(r, j).wrapping_sub(c.wrapping_mul(t.get(r, i))));
        g.set(r, j, g.get(r, j).wrapping_sub(c.wrapping_mul(g.get(r, i))));
    }
    for col in 0..n {
        g.set(j, col, g.get(j, col).wrapping_sub(c.wrapping_mul(g.get(i, col))));
    }
}

pub fn jordan_decompose(lattice: &GramLattice) -> Result<JordanDecomposition, LatticeError> {
    let gram = lattice.gram();
    let n = gram.dim();
    let k = gram.precision();
    let mut g = gram.clone();
    let mut t = Mat::identity(n, k);
    let mut remaining: Vec<usize> = (0..n).collect();
    // (scale, original indices)
    let mut found: Vec<(u32, Vec<usize>)> = Vec::new();
    let mut det_val = 0u32;

    while !remaining.is_empty() {
        let s = remaining
            .iter()
            .flat_map(|&i| remaining.iter().map(move |&j| (i, j)))
            .map(|(i, j)| val(g.get(i, j), k))
            .min()
            .unwrap_or(k);
        if s >= k {
            return Err(LatticeError::Degenerate { precision: k });
        }
        if let Some(&i) = remaining.iter().find(|&&i| val(g.get(i, i), k) == s) {
            let uinv = inv_odd(g.get(i, i) >> s, k);
            for &j in remaining.iter().filter(|&&j| j != i) {
                let c = (g.get(i, j) >> s).wrapping_mul(uinv);
                column_move(&mut g, &mut t, j, i, c);
            }
            remaining.retain(|&x| x != i);
            found.push((s, vec![i]));
            det_val += s;
        } else {
            let (i, j) = remaining
                .iter()
                .flat_map(|&i| remaining.iter().map(move |&j| (i, j)))
                .find(|&(i, j)| i < j && val(g.get(i, j), k) == s)
                .expect("minimum attained off the diagonal");
            let (a, b, d) = (g.get(i, i) >> s, g.get(i, j) >> s, g.get(j, j) >> s);
            let det = a.wrapping_mul(d).wrapping_sub(b.wrapping_mul(b));
            let di = inv_odd(det & super::ring::mask(k), k);
            for &l in remaining.iter().filter(|&&l| l != i && l != j) {
                let (x, y) = (g.get(i, l) >> s, g.get(j, l) >> s);
                // [α, β] = B⁻¹ [x, y]
                let alpha = d.wrapping_mul(x).wrapping_sub(b.wrapping_mul(y)).wrapping_mul(di);
                let beta = a.wrapping_mul(y).wrapping_sub(b.wrapping_mul(x)).wrapping_mul(di);
                column_move(&mut g, &mut t, l, i, alpha);
                column_move(&mut g, &mut t, l, j, beta);
            }
            remaining.retain(|&x| x != i && x != j);
            found.push((s, vec![i, j]));
            det_val += 2 * s;
        }
        if det_val >= k {
            return Err(LatticeError::Degenerate { precision: k });
        }
    }

    let order: Vec<usize> = found.iter().flat_map(|(_, idx)| idx.iter().copied()).collect();
    let mut basis_change = Mat::zeros(n, k);
    for (new, &old) in order.iter().enumerate() {
        for r in 0..n {
            basis_change.set(r, new, t.get(r, old));
        }
    }
    let diagonal = basis_change.transpose().mul(gram).mul(&basis_change);
    let mut blocks = Vec::new();
    let mut start = 0;
    for (scale, idx) in &found {
        let dim = idx.len();
        let mut unit = Vec::with_capacity(dim * dim);
        for a in 0..dim {
            for b in 0..dim {
                unit.push(diagonal.get(start + a, start + b) >> scale);
            }
        }
        blocks.push(JordanBlock {
            scale: *scale,
            start,
            dim,
            unit,
        });
        start += dim;
    }
    let dec = JordanDecomposition {
        basis_change,
        blocks,
        diagonal,
    };
    if !is_block_diagonal(&dec) {
        return Err(LatticeError::Internal("decomposition is not block diagonal".into()));
    }
    Ok(dec)
}

fn is_block_diagonal(dec: &JordanDecomposition) -> bool {
    let n = dec.diagonal.dim();
    let block_of: Vec<usize> = dec
        .blocks
        .iter()
        .enumerate()
        .flat_map(|(b, blk)| std::iter::repeat_n(b, blk.dim))
        .collect();
    (0..n).all(|i| (0..n).all(|j| block_of[i] == block_of[j] || dec.diagonal.get(i, j) == 0))
        && dec.blocks.iter().all(|b| {
            if b.dim == 1 {
                b.unit[0] % 2 == 1
            } else {
                (b.unit[0].wrapping_mul(b.unit[3]).wrapping_sub(b.unit[1].wrapping_mul(b.unit[2]))) % 2 == 1
            }
        })
}
