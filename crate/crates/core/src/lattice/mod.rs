//! 2-adic lattices at finite precision `2^K`: Jordan splitting, sampling of
//! orthogonal maps, and property checks of the trace congruences for
//! orthogonal maps close to the identity.

mod checks;
mod jordan;
pub mod ring;
mod sampler;
mod trials;

use thiserror::Error;

pub use checks::{
    block_valuation_check, dual_lattice_check, overdet_check, rescaled_map_check,
    trace_product_check, trace_product_restated, CheckOutcome, Variant,
};
pub use jordan::{jordan_decompose, JordanBlock, JordanDecomposition};
pub use ring::Mat;
pub use sampler::{cayley_in_jordan_basis, reflection_in_jordan_basis, sample_orthogonal, OrthogonalMap};
pub use trials::{random_lattice, run_trials, CheckTally, TrialConfig, TrialReport};

/// Default working precision.
pub const DEFAULT_PRECISION: u32 = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("Gram matrix is not symmetric")]
    NotSymmetric,
    #[error("Gram matrix is degenerate at precision 2^{precision}")]
    Degenerate { precision: u32 },
    #[error("precision {0} outside 4..=62")]
    Precision(u32),
    #[error("sampler failed: {0}")]
    Sampler(String),
    #[error("internal error: {0}")]
    Internal(String),
}

/// Symmetric bilinear form on `Z^n`, entries reduced mod `2^K`.
#[derive(Debug, Clone)]
pub struct GramLattice {
    gram: Mat,
}

impl GramLattice {
    pub fn new(rows: &[Vec<i64>], k: u32) -> Result<Self, LatticeError> {
        Self::from_mat(Mat::from_rows(rows, k))
    }

    pub fn from_mat(gram: Mat) -> Result<Self, LatticeError> {
        if !(4..=62).contains(&gram.precision()) {
            return Err(LatticeError::Precision(gram.precision()));
        }
        if !gram.is_symmetric() {
            return Err(LatticeError::NotSymmetric);
        }
        let l = Self { gram };
        jordan_decompose(&l)?;
        Ok(l)
    }

    pub fn gram(&self) -> &Mat {
        &self.gram
    }

    pub fn dim(&self) -> usize {
        self.gram.dim()
    }

    pub fn precision(&self) -> u32 {
        self.gram.precision()
    }
}

/// `Uᵀ·G·U ≡ G (mod 2^check_precision)`.
pub fn is_orthogonal(lattice: &GramLattice, u: &Mat, check_precision: u32) -> bool {
    let g = lattice.gram();
    let lhs = u.transpose().mul(g).mul(u);
    lhs.sub(g).is_zero_mod(check_precision)
}

/// Gram matrix of the rescaled lattice `Γ' = ⊕ 2^(−⌊i/2⌋) Γ_i` in the
/// rescaled decomposition basis; its scales lie in `{0, 1}`. The result is
/// known to precision `K − 2⌊N/2⌋` for top scale `N`.
pub fn scaled_lattice(dec: &JordanDecomposition) -> Result<GramLattice, LatticeError> {
    let h = dec.max_scale() / 2;
    let k = dec.diagonal.precision() - 2 * h;
    let n = dec.diagonal.dim();
    let scales = dec.scales();
    let mut g = Mat::zeros(n, k);
    for i in 0..n {
        for j in 0..n {
            let shift = scales[i] / 2 + scales[j] / 2;
            g.set(i, j, dec.diagonal.get(i, j) >> shift);
        }
    }
    GramLattice::from_mat(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orthogonality_examples() {
        let l = GramLattice::new(&[vec![1, 0], vec![0, 1]], 12).unwrap();
        assert!(is_orthogonal(&l, &Mat::identity(2, 12), 12));
        assert!(is_orthogonal(&l, &Mat::identity(2, 12).scale(u64::MAX), 12));
        let shear = Mat::from_rows(&[vec![1, 1], vec![0, 1]], 12);
        // Uᵀ diag(1,1) U has (2,2) entry 2
        let prod = shear.transpose().mul(&shear);
        assert_eq!(prod.get(1, 1), 2);
        assert!(!is_orthogonal(&l, &shear, 12));
    }

    #[test]
    fn rescaling() {
        let scales_of = |rows: &[Vec<i64>]| {
            let l = GramLattice::new(rows, 12).unwrap();
            let d = jordan_decompose(&l).unwrap();
            let s = scaled_lattice(&d).unwrap();
            jordan_decompose(&s).unwrap().scales()
        };
        assert_eq!(scales_of(&[vec![1, 0], vec![0, 2]]), vec![0, 1]);
        assert_eq!(scales_of(&[vec![4]]), vec![0]);
        let mut s = scales_of(&[
            vec![1, 0, 0, 0],
            vec![0, 2, 0, 0],
            vec![0, 0, 4, 0],
            vec![0, 0, 0, 8],
        ]);
        s.sort_unstable();
        assert_eq!(s, vec![0, 0, 1, 1]);
    }
}
