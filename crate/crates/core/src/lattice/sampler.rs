//! Random orthogonal maps: Cayley transforms of `D⁻¹A` with `A`
//! antisymmetric, and integral reflections. Both are built in the Jordan
//! basis, where `D` is block diagonal, and then conjugated back.
//!
//! The families do not exhaust the orthogonal group; they only need to
//! produce valid test vectors.

use rand::Rng;

use super::jordan::JordanDecomposition;
use super::ring::{inv_odd, mask, Mat};
use super::{is_orthogonal, GramLattice, LatticeError};

/// An orthogonal matrix with `U ≡ E (mod 2^level)`.
#[derive(Debug, Clone)]
pub struct OrthogonalMap {
    pub matrix: Mat,
    pub level: u32,
}

const CAYLEY_RETRIES: usize = 32;
const REFLECTION_RETRIES: usize = 64;

/// `U' = (E − T)(E + T)⁻¹` with `T = D⁻¹A`, `ν(A_ij) ≥ max(s_i, s_j) + e − 1`.
/// Returns `None` when `E + T` is singular.
pub fn cayley_in_jordan_basis<R: Rng>(dec: &JordanDecomposition, e: u32, rng: &mut R) -> Option<Mat> {
    let n = dec.diagonal.dim();
    let k = dec.diagonal.precision();
    if e >= k {
        return Some(Mat::identity(n, k));
    }
    let s = dec.scales();
    // A'' = diag(2^(−s)) A, built without division
    let mut a2 = Mat::zeros(n, k);
    for i in 0..n {
        for j in i + 1..n {
            let m = s[i].max(s[j]) + e - 1;
            let a: u64 = rng.gen::<u64>() & mask(k);
            a2.set(i, j, a << (m - s[i]));
            a2.set(j, i, (a << (m - s[j])).wrapping_neg());
        }
    }
    let t = dec.unit_inverse().mul(&a2);
    let id = Mat::identity(n, k);
    let inv = id.add(&t).inverse()?;
    Some(id.sub(&t).mul(&inv))
}

/// Reflection `x ↦ x − 2b(x,v)/b(v,v)·v` for a random small `v`, kept only
/// when integral: `ν(b(x_k, v)) ≥ ν(b(v, v)) − 1` for every basis vector.
pub fn reflection_in_jordan_basis<R: Rng>(dec: &JordanDecomposition, rng: &mut R) -> Option<Mat> {
    let n = dec.diagonal.dim();
    let k = dec.diagonal.precision();
    let d: Vec<Vec<i128>> = (0..n)
        .map(|i| (0..n).map(|j| dec.diagonal.get(i, j) as i128).collect())
        .collect();
    for _ in 0..REFLECTION_RETRIES {
        let v: Vec<i128> = (0..n).map(|_| rng.gen_range(-3i128..=3)).collect();
        let dv: Vec<i128> = (0..n).map(|i| (0..n).map(|j| d[i][j] * v[j]).sum()).collect();
        let bvv: i128 = (0..n).map(|i| v[i] * dv[i]).sum();
        if bvv == 0 {
            continue;
        }
        let nb = bvv.trailing_zeros();
        if nb + 1 >= k {
            continue;
        }
        if dv.iter().any(|&x| x != 0 && x.trailing_zeros() + 1 < nb) {
            continue;
        }
        let m = 1i128 << k;
        let odd_b = (bvv >> nb).rem_euclid(m) as u64;
        let ib = inv_odd(odd_b, k) as i128;
        // c_k = 2·b(x_k, v) / b(v, v) as a 2-adic integer mod 2^K
        let c: Vec<i128> = dv
            .iter()
            .map(|&x| {
                if x == 0 {
                    return 0;
                }
                let nx = x.trailing_zeros();
                let odd = (x >> nx).rem_euclid(m);
                let shift = 1 + nx - nb;
                if shift >= k {
                    0
                } else {
                    ((odd * ib).rem_euclid(m) << shift).rem_euclid(m)
                }
            })
            .collect();
        let mut r = Mat::identity(n, k);
        for i in 0..n {
            for j in 0..n {
                let delta = (i == j) as i128;
                r.set_signed(i, j, delta - v[i] * c[j]);
            }
        }
        return Some(r);
    }
    None
}

/// `T·U'·T⁻¹` for the decomposition basis change `T`.
pub fn to_original_basis(dec: &JordanDecomposition, u_prime: &Mat) -> Mat {
    let t = &dec.basis_change;
    let tinv = t.inverse().expect("basis change is unimodular");
    t.mul(u_prime).mul(&tinv)
}

/// `T⁻¹·U·T`.
pub fn to_jordan_basis(dec: &JordanDecomposition, u: &Mat) -> Mat {
    let t = &dec.basis_change;
    let tinv = t.inverse().expect("basis change is unimodular");
    tinv.mul(u).mul(t)
}

/// Samples `U ≡ E (mod 2^e)` orthogonal for the lattice; validity is checked,
/// not assumed.
pub fn sample_orthogonal<R: Rng>(
    lattice: &GramLattice,
    dec: &JordanDecomposition,
    e: u32,
    rng: &mut R,
) -> Result<OrthogonalMap, LatticeError> {
    if e == 0 {
        return Err(LatticeError::Sampler("congruence level must be at least 1".into()));
    }
    let k = lattice.precision();
    for _ in 0..CAYLEY_RETRIES {
        let Some(up) = cayley_in_jordan_basis(dec, e, rng) else {
            continue;
        };
        let u = to_original_basis(dec, &up);
        if !is_orthogonal(lattice, &u, k) {
            return Err(LatticeError::Internal("Cayley sample is not orthogonal".into()));
        }
        if !u.sub(&Mat::identity(u.dim(), k)).is_zero_mod(e.min(k)) {
            return Err(LatticeError::Internal("Cayley sample misses its congruence".into()));
        }
        return Ok(OrthogonalMap {
            matrix: u,
            level: e.min(k),
        });
    }
    Err(LatticeError::Sampler(format!(
        "E + T singular in {CAYLEY_RETRIES} attempts"
    )))
}
