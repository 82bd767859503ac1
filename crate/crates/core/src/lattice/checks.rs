//! Property checks for orthogonal maps near the identity. Each check first
//! verifies its hypotheses; a miss is `Rejected`, never `Fail`.

use super::jordan::JordanDecomposition;
use super::ring::{mask, val, Mat};
use super::sampler::to_jordan_basis;
use super::{is_orthogonal, scaled_lattice, GramLattice};

/// `A`: first map `≡ E (mod 2)`. `B`: first map squares to `E (mod 2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    A,
    B,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckOutcome {
    Pass,
    Fail(String),
    Rejected(String),
}

impl CheckOutcome {
    pub fn is_pass(&self) -> bool {
        matches!(self, CheckOutcome::Pass)
    }
}

fn identity_like(u: &Mat) -> Mat {
    Mat::identity(u.dim(), u.precision())
}

fn orthogonal(lattice: &GramLattice, u: &Mat) -> bool {
    is_orthogonal(lattice, u, u.precision().min(lattice.precision()))
}

fn congruent_to_identity(u: &Mat, e: u32) -> bool {
    u.sub(&identity_like(u)).is_zero_mod(e)
}

fn first_map_hypothesis(u: &Mat, variant: Variant) -> bool {
    match variant {
        Variant::A => congruent_to_identity(u, 1),
        Variant::B => congruent_to_identity(&u.mul(u), 1),
    }
}

fn modulus(variant: Variant) -> u64 {
    match variant {
        Variant::A => 16,
        Variant::B => 8,
    }
}

/// Orthogonal `U1 ≡ U2 (mod 4)` have equal traces mod 16 (variant A) or
/// mod 8 (variant B).
pub fn overdet_check(lattice: &GramLattice, u1: &Mat, u2: &Mat, variant: Variant) -> CheckOutcome {
    if !orthogonal(lattice, u1) || !orthogonal(lattice, u2) {
        return CheckOutcome::Rejected("input is not orthogonal".into());
    }
    if !u1.sub(u2).is_zero_mod(2) {
        return CheckOutcome::Rejected("maps differ modulo 4".into());
    }
    if !first_map_hypothesis(u1, variant) {
        return CheckOutcome::Rejected(format!("first map fails the {variant:?} hypothesis"));
    }
    let m = modulus(variant);
    let (t1, t2) = (u1.trace() % m, u2.trace() % m);
    if t1 == t2 {
        CheckOutcome::Pass
    } else {
        CheckOutcome::Fail(format!("traces {t1} and {t2} differ mod {m}"))
    }
}

/// `Tr(AB)` is even when `E + 4B` is orthogonal and `E + 2A` (variant A) or
/// `E + A` with `(E + A)² ≡ E (mod 2)` (variant B) is orthogonal.
pub fn trace_product_check(lattice: &GramLattice, a: &Mat, b: &Mat, variant: Variant) -> CheckOutcome {
    let psi = identity_like(&b.mul_pow2(2)).add(&b.mul_pow2(2));
    let phi = match variant {
        Variant::A => {
            let a2 = a.mul_pow2(1);
            identity_like(&a2).add(&a2)
        }
        Variant::B => identity_like(a).add(a),
    };
    if !orthogonal(lattice, &phi) || !orthogonal(lattice, &psi) {
        return CheckOutcome::Rejected("hypothesis map is not orthogonal".into());
    }
    if variant == Variant::B && !first_map_hypothesis(&phi, variant) {
        return CheckOutcome::Rejected("(E + A)² is not E mod 2".into());
    }
    let t = a.mul(b).trace();
    if t.is_multiple_of(2) {
        CheckOutcome::Pass
    } else {
        CheckOutcome::Fail(format!("Tr(AB) = {t} is odd"))
    }
}

/// `Tr((φ − E)(ψ − E)) ≡ 0` mod 16 (variant A) or mod 8 (variant B) for
/// orthogonal `ψ ≡ E (mod 4)`.
pub fn trace_product_restated(lattice: &GramLattice, phi: &Mat, psi: &Mat, variant: Variant) -> CheckOutcome {
    if !orthogonal(lattice, phi) || !orthogonal(lattice, psi) {
        return CheckOutcome::Rejected("input is not orthogonal".into());
    }
    if !congruent_to_identity(psi, 2) {
        return CheckOutcome::Rejected("ψ is not E mod 4".into());
    }
    if !first_map_hypothesis(phi, variant) {
        return CheckOutcome::Rejected(format!("φ fails the {variant:?} hypothesis"));
    }
    let m = modulus(variant);
    let t = phi.sub(&identity_like(phi)).mul(&psi.sub(&identity_like(psi))).trace() % m;
    if t == 0 {
        CheckOutcome::Pass
    } else {
        CheckOutcome::Fail(format!("trace is {t} mod {m}"))
    }
}

/// In the decomposition basis, entry `(a, b)` of an orthogonal map has
/// valuation at least `s_b − s_a`, and at least `s_b − s_a + e` between
/// different scales when the map is `≡ E (mod 2^e)`.
pub fn block_valuation_check(lattice: &GramLattice, dec: &JordanDecomposition, u: &Mat, e: u32) -> CheckOutcome {
    if !orthogonal(lattice, u) {
        return CheckOutcome::Rejected("input is not orthogonal".into());
    }
    if !congruent_to_identity(u, e) {
        return CheckOutcome::Rejected(format!("input is not E mod 2^{e}"));
    }
    let up = to_jordan_basis(dec, u);
    let k = up.precision();
    let s = dec.scales();
    for a in 0..up.dim() {
        for b in 0..up.dim() {
            let v = val(up.get(a, b), k) as i64;
            let (sa, sb) = (s[a] as i64, s[b] as i64);
            let mut bound = sb - sa;
            if sa != sb {
                bound += e as i64;
            }
            if v < bound {
                return CheckOutcome::Fail(format!(
                    "entry ({a}, {b}) between scales {sa}, {sb} has valuation {v} < {bound}"
                ));
            }
        }
    }
    CheckOutcome::Pass
}

/// The map preserves the dual lattice: `diag(2^s)·U'·diag(2^(−s))` is
/// integral in the decomposition basis.
pub fn dual_lattice_check(lattice: &GramLattice, dec: &JordanDecomposition, u: &Mat) -> CheckOutcome {
    if !orthogonal(lattice, u) {
        return CheckOutcome::Rejected("input is not orthogonal".into());
    }
    let up = to_jordan_basis(dec, u);
    let k = up.precision();
    let s = dec.scales();
    for a in 0..up.dim() {
        for b in 0..up.dim() {
            // exponent s_a − s_b; a negative one needs that many factors of 2
            let need = s[b].saturating_sub(s[a]);
            if val(up.get(a, b), k) < need {
                return CheckOutcome::Fail(format!("dual image entry ({a}, {b}) is not integral"));
            }
        }
    }
    CheckOutcome::Pass
}

/// The map induced on the rescaled lattice `⊕ 2^(−⌊i/2⌋)Γ_i` is integral,
/// orthogonal for the rescaled form and still `≡ E (mod 2^e)`.
pub fn rescaled_map_check(lattice: &GramLattice, dec: &JordanDecomposition, u: &Mat, e: u32) -> CheckOutcome {
    if !orthogonal(lattice, u) {
        return CheckOutcome::Rejected("input is not orthogonal".into());
    }
    if !congruent_to_identity(u, e) {
        return CheckOutcome::Rejected(format!("input is not E mod 2^{e}"));
    }
    let scaled = match scaled_lattice(dec) {
        Ok(l) => l,
        Err(err) => return CheckOutcome::Rejected(format!("rescaled lattice: {err}")),
    };
    let up = to_jordan_basis(dec, u);
    let k = up.precision();
    let kp = scaled.precision();
    let h: Vec<u32> = dec.scales().iter().map(|s| s / 2).collect();
    let mut upp = Mat::zeros(up.dim(), kp);
    for a in 0..up.dim() {
        for b in 0..up.dim() {
            let x = up.get(a, b);
            let entry = if h[a] >= h[b] {
                x << (h[a] - h[b])
            } else {
                let d = h[b] - h[a];
                if val(x, k) < d {
                    return CheckOutcome::Fail(format!("rescaled entry ({a}, {b}) is not integral"));
                }
                x >> d
            };
            upp.set(a, b, entry & mask(kp));
        }
    }
    if !is_orthogonal(&scaled, &upp, kp) {
        return CheckOutcome::Fail("rescaled map is not orthogonal".into());
    }
    if !congruent_to_identity(&upp, e) {
        return CheckOutcome::Fail(format!("rescaled map is not E mod 2^{e}"));
    }
    CheckOutcome::Pass
}
