//! Permutations of the six branch lines.

use std::fmt;

/// A permutation of `{1, …, 6}`, stored zero-based as an image array.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm6([u8; 6]);

impl Perm6 {
    pub const IDENTITY: Perm6 = Perm6([0, 1, 2, 3, 4, 5]);

    /// Builds a permutation from one-based images `σ(1), …, σ(6)`.
    pub fn from_images(images: [u8; 6]) -> Option<Self> {
        let mut seen = [false; 6];
        let mut out = [0u8; 6];
        for (i, &v) in images.iter().enumerate() {
            if !(1..=6).contains(&v) || seen[(v - 1) as usize] {
                return None;
            }
            seen[(v - 1) as usize] = true;
            out[i] = v - 1;
        }
        Some(Perm6(out))
    }

    /// Builds a permutation from disjoint one-based cycles.
    pub fn from_cycles(cycles: &[&[u8]]) -> Option<Self> {
        let mut images = [1, 2, 3, 4, 5, 6];
        let mut touched = [false; 6];
        for cycle in cycles {
            for (k, &a) in cycle.iter().enumerate() {
                if !(1..=6).contains(&a) || touched[(a - 1) as usize] {
                    return None;
                }
                touched[(a - 1) as usize] = true;
                images[(a - 1) as usize] = cycle[(k + 1) % cycle.len()];
            }
        }
        Self::from_images(images)
    }

    /// Image of a zero-based point.
    #[inline]
    pub fn apply0(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    /// Image of a one-based point.
    pub fn apply(&self, i: u8) -> u8 {
        self.0[(i - 1) as usize] + 1
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm6) -> Perm6 {
        let mut out = [0u8; 6];
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.0[other.0[i] as usize];
        }
        Perm6(out)
    }

    pub fn inverse(&self) -> Perm6 {
        let mut out = [0u8; 6];
        for (i, &v) in self.0.iter().enumerate() {
            out[v as usize] = i as u8;
        }
        Perm6(out)
    }

    /// Cycle lengths in descending order, fixed points included.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut seen = [false; 6];
        let mut lens = Vec::new();
        for start in 0..6 {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.0[i] as usize;
                len += 1;
            }
            lens.push(len);
        }
        lens.sort_unstable_by(|a, b| b.cmp(a));
        lens
    }

    pub fn is_even(&self) -> bool {
        self.cycle_type().iter().map(|l| l - 1).sum::<usize>() % 2 == 0
    }

    /// Number of unordered pairs `{i, j}` mapped onto themselves.
    pub fn fixed_pair_count(&self) -> u32 {
        let mut n = 0;
        for i in 0..6 {
            for j in i + 1..6 {
                let (a, b) = (self.0[i] as usize, self.0[j] as usize);
                if (a == i && b == j) || (a == j && b == i) {
                    n += 1;
                }
            }
        }
        n
    }

    /// All 720 permutations in lexicographic order of image arrays.
    pub fn all() -> Vec<Perm6> {
        use itertools::Itertools;
        (0u8..6)
            .permutations(6)
            .map(|v| Perm6([v[0], v[1], v[2], v[3], v[4], v[5]]))
            .collect()
    }

    pub fn images(&self) -> [u8; 6] {
        self.0.map(|v| v + 1)
    }
}

impl fmt::Display for Perm6 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = [false; 6];
        let mut wrote = false;
        for start in 0..6 {
            if seen[start] || self.0[start] as usize == start {
                continue;
            }
            write!(f, "(")?;
            let mut i = start;
            let mut first = true;
            while !seen[i] {
                seen[i] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{}", i + 1)?;
                first = false;
                i = self.0[i] as usize;
            }
            write!(f, ")")?;
            wrote = true;
        }
        if !wrote {
            write!(f, "()")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn fixed_pairs_examples() {
        assert_eq!(Perm6::IDENTITY.fixed_pair_count(), 15);
        let dt = Perm6::from_cycles(&[&[3, 5], &[4, 6]]).unwrap();
        assert_eq!(dt.fixed_pair_count(), 3);
        let c4 = Perm6::from_cycles(&[&[3, 4, 5, 6]]).unwrap();
        assert_eq!(c4.fixed_pair_count(), 1);
    }

    #[test]
    fn display_and_cycles() {
        let c = Perm6::from_cycles(&[&[1, 2], &[3, 4, 5]]).unwrap();
        assert_eq!(c.to_string(), "(1 2)(3 4 5)");
        assert_eq!(c.cycle_type(), vec![3, 2, 1]);
        assert!(!c.is_even());
        assert_eq!(Perm6::IDENTITY.to_string(), "()");
        assert!(Perm6::from_images([1, 1, 2, 3, 4, 5]).is_none());
        assert!(Perm6::from_cycles(&[&[1, 2], &[2, 3]]).is_none());
    }

    #[test]
    fn all_perms() {
        let all = Perm6::all();
        assert_eq!(all.len(), 720);
        assert_eq!(all.iter().filter(|p| p.is_even()).count(), 360);
    }

    fn arb_perm() -> impl Strategy<Value = Perm6> {
        (0usize..720).prop_map(|i| Perm6::all()[i])
    }

    proptest! {
        #[test]
        fn fixed_pairs_conjugation_invariant(a in arb_perm(), b in arb_perm()) {
            let conj = b.compose(&a).compose(&b.inverse());
            prop_assert_eq!(conj.fixed_pair_count(), a.fixed_pair_count());
        }

        #[test]
        fn group_laws(a in arb_perm(), b in arb_perm(), c in arb_perm()) {
            prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
            prop_assert_eq!(a.compose(&a.inverse()), Perm6::IDENTITY);
            prop_assert_eq!(a.compose(&b).is_even(), a.is_even() == b.is_even());
        }
    }
}
