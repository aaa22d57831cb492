//! Exact arithmetic in the dihedral group `D_2p = <ζ, τ | ζ^p = τ^2 = 1, ζτ = τζ^-1>`.
//!
//! Elements are kept in the normal form `ζ^a τ^b` with `0 <= a < p`, `b ∈ {0, 1}`.
//! Subgroups are materialized as bit masks over the `2p` elements, so every
//! coset and orbit question is answered by enumeration.

use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The group `D_2p` for an odd prime `p < 32`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Dihedral {
    p: u32,
}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

impl Dihedral {
    pub fn new(p: u32) -> Result<Self> {
        if p % 2 == 1 && p < 32 && is_prime(p) {
            Ok(Self { p })
        } else {
            Err(Error::InvalidPrime(p))
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// `(p - 1) / 2`, the number of two-dimensional irreducibles.
    pub fn half(&self) -> u32 {
        (self.p - 1) / 2
    }

    pub fn order(&self) -> usize {
        2 * self.p as usize
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement { p: self.p, rot: 0, flip: false }
    }

    pub fn zeta(&self) -> GroupElement {
        self.element(1, false)
    }

    pub fn tau(&self) -> GroupElement {
        self.element(0, true)
    }

    /// `ζ^rot τ^flip`, with `rot` reduced mod `p`.
    pub fn element(&self, rot: i64, flip: bool) -> GroupElement {
        GroupElement { p: self.p, rot: rot.rem_euclid(self.p as i64) as u32, flip }
    }

    pub fn element_at(&self, index: usize) -> GroupElement {
        let p = self.p as usize;
        self.element((index % p) as i64, index >= p)
    }

    /// All elements in index order: `ζ^0, …, ζ^{p-1}, τ, ζτ, …, ζ^{p-1}τ`.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order()).map(move |i| self.element_at(i))
    }

    /// Multiplicative inverse of `i` modulo `p`, in `1..p`.
    pub fn inverse_mod_p(&self, i: u32) -> Result<u32> {
        if i.is_multiple_of(self.p) {
            return Err(Error::OutOfRange(format!("{i} is not invertible mod {}", self.p)));
        }
        Ok((1..self.p).find(|j| (i * j) % self.p == 1).expect("p is prime"))
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup::from_mask(*self, 1)
    }

    /// The reflection subgroup `<ζ^a τ>`.
    pub fn reflection(&self, a: i64) -> Subgroup {
        let r = self.element(a, true);
        Subgroup::from_mask(*self, 1 | (1 << r.index()))
    }

    pub fn rotations(&self) -> Subgroup {
        Subgroup::from_mask(*self, (1u64 << self.p) - 1)
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup::from_mask(*self, (1u64 << self.order()) - 1)
    }

    /// The representative of a conjugacy class: `e`, `<τ>`, `<ζ>` or `G`.
    pub fn canonical(&self, class: SubgroupClass) -> Subgroup {
        match class {
            SubgroupClass::Trivial => self.trivial_subgroup(),
            SubgroupClass::Reflection => self.reflection(0),
            SubgroupClass::Rotation => self.rotations(),
            SubgroupClass::Whole => self.whole(),
        }
    }

    /// Every subgroup: `e`, the `p` reflection subgroups, `<ζ>`, `G`.
    pub fn subgroups(&self) -> Vec<Subgroup> {
        let mut all = vec![self.trivial_subgroup()];
        all.extend((0..self.p as i64).map(|a| self.reflection(a)));
        all.push(self.rotations());
        all.push(self.whole());
        all
    }

    /// Double cosets `H g K`, found by enumerating all elements.
    pub fn double_cosets(&self, h: &Subgroup, k: &Subgroup) -> Result<Vec<DoubleCoset>> {
        if h.group != *self || k.group != *self {
            return Err(Error::ParameterMismatch("subgroups of different groups".into()));
        }
        let mut seen = 0u64;
        let mut out = Vec::new();
        for g in self.elements() {
            if seen & (1 << g.index()) != 0 {
                continue;
            }
            let mut mask = 0u64;
            for x in h.elements() {
                for y in k.elements() {
                    mask |= 1 << (x * g * y).index();
                }
            }
            seen |= mask;
            out.push(DoubleCoset { representative: g, size: mask.count_ones() as usize, mask });
        }
        Ok(out)
    }
}

/// `ζ^rot τ^flip` in `D_2p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElement {
    p: u32,
    rot: u32,
    flip: bool,
}

impl GroupElement {
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn rot(&self) -> u32 {
        self.rot
    }

    pub fn flip(&self) -> bool {
        self.flip
    }

    pub fn index(&self) -> usize {
        self.rot as usize + if self.flip { self.p as usize } else { 0 }
    }

    pub fn is_identity(&self) -> bool {
        self.rot == 0 && !self.flip
    }

    /// Product `self · other`; fails when the two elements live in different groups.
    pub fn try_mul(self, other: GroupElement) -> Result<GroupElement> {
        if self.p != other.p {
            return Err(Error::ParameterMismatch(format!("cannot multiply elements of D_{} and D_{}", 2 * self.p, 2 * other.p)));
        }
        // ζ^a τ^b · ζ^c τ^d = ζ^{a ± c} τ^{b+d}, the sign coming from τζ = ζ^{-1}τ.
        let c = if self.flip { self.p - other.rot } else { other.rot };
        Ok(GroupElement { p: self.p, rot: (self.rot + c) % self.p, flip: self.flip ^ other.flip })
    }

    pub fn inverse(self) -> GroupElement {
        if self.flip {
            self
        } else {
            GroupElement { rot: (self.p - self.rot) % self.p, ..self }
        }
    }

    pub fn pow(self, n: i64) -> GroupElement {
        let base = if n < 0 { self.inverse() } else { self };
        let mut acc = GroupElement { rot: 0, flip: false, ..self };
        for _ in 0..n.unsigned_abs() {
            acc = acc * base;
        }
        acc
    }

    pub fn order(self) -> u32 {
        if self.flip {
            2
        } else if self.rot == 0 {
            1
        } else {
            self.p
        }
    }

    pub fn conjugate(self, g: GroupElement) -> GroupElement {
        g * self * g.inverse()
    }
}

impl Mul for GroupElement {
    type Output = GroupElement;

    fn mul(self, rhs: GroupElement) -> GroupElement {
        self.try_mul(rhs).expect("group elements from different dihedral groups")
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.rot, self.flip) {
            (0, false) => write!(f, "e"),
            (0, true) => write!(f, "t"),
            (1, b) => write!(f, "z{}", if b { "t" } else { "" }),
            (a, b) => write!(f, "z^{a}{}", if b { "t" } else { "" }),
        }
    }
}

/// Which concrete subgroup this is.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SubgroupTag {
    Triv,
    /// `<ζ^a τ>`
    Refl(u32),
    Rot,
    Full,
}

/// The four conjugacy classes of subgroups, ordered `e < Z/2 < Z/p < G`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SubgroupClass {
    Trivial,
    Reflection,
    Rotation,
    Whole,
}

impl SubgroupClass {
    pub const ALL: [SubgroupClass; 4] = [SubgroupClass::Trivial, SubgroupClass::Reflection, SubgroupClass::Rotation, SubgroupClass::Whole];

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for SubgroupClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SubgroupClass::Trivial => "e",
            SubgroupClass::Reflection => "Z/2",
            SubgroupClass::Rotation => "Z/p",
            SubgroupClass::Whole => "G",
        })
    }
}

/// A subgroup of `D_2p`, stored as its element set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Subgroup {
    group: Dihedral,
    mask: u64,
}

impl Subgroup {
    pub(crate) fn from_mask(group: Dihedral, mask: u64) -> Self {
        Self { group, mask }
    }

    pub fn group(&self) -> Dihedral {
        self.group
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn order(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn contains(&self, g: GroupElement) -> bool {
        self.mask & (1 << g.index()) != 0
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        self.group.elements().filter(move |g| self.contains(*g))
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.mask & !other.mask == 0
    }

    pub fn tag(&self) -> SubgroupTag {
        let p = self.group.p() as usize;
        match self.order() {
            1 => SubgroupTag::Triv,
            2 => {
                let r = self.elements().find(|g| g.flip()).expect("order-2 subgroups are reflections");
                SubgroupTag::Refl(r.rot())
            }
            n if n == p => SubgroupTag::Rot,
            _ => SubgroupTag::Full,
        }
    }

    pub fn class(&self) -> SubgroupClass {
        match self.tag() {
            SubgroupTag::Triv => SubgroupClass::Trivial,
            SubgroupTag::Refl(_) => SubgroupClass::Reflection,
            SubgroupTag::Rot => SubgroupClass::Rotation,
            SubgroupTag::Full => SubgroupClass::Whole,
        }
    }

    pub fn intersect(&self, other: &Subgroup) -> Subgroup {
        Subgroup::from_mask(self.group, self.mask & other.mask)
    }

    /// `g H g^-1`.
    pub fn conjugate(&self, g: GroupElement) -> Subgroup {
        let mask = self.elements().fold(0u64, |m, h| m | 1 << h.conjugate(g).index());
        Subgroup::from_mask(self.group, mask)
    }

    /// Some `x` with `x · canonical(class) · x^-1 = self`.
    pub fn conjugator_from_canonical(&self) -> GroupElement {
        let canon = self.group.canonical(self.class());
        self.group.elements().find(|x| canon.conjugate(*x) == *self).expect("every subgroup is conjugate to a canonical one")
    }
}

impl fmt::Display for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.tag() {
            SubgroupTag::Triv => write!(f, "e"),
            SubgroupTag::Refl(0) => write!(f, "<t>"),
            SubgroupTag::Refl(a) => write!(f, "<{}>", self.group.element(a as i64, true)),
            SubgroupTag::Rot => write!(f, "<z>"),
            SubgroupTag::Full => write!(f, "G"),
        }
    }
}

/// A double coset `H g K` with a representative and its cardinality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleCoset {
    pub representative: GroupElement,
    pub size: usize,
    pub mask: u64,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(p: u32) -> Dihedral {
        Dihedral::new(p).unwrap()
    }

    #[test]
    fn rejects_non_odd_primes() {
        for p in [0, 1, 2, 4, 9, 15, 21, 37] {
            assert_eq!(Dihedral::new(p), Err(Error::InvalidPrime(p)));
        }
        assert!(Dihedral::new(13).is_ok());
    }

    #[test]
    fn presentation_relation() {
        let d = g(5);
        let (z, t) = (d.zeta(), d.tau());
        // ζτ = τζ^{p-1}
        assert_eq!(z * t, t * z.pow(4));
        assert_eq!(z * t, d.element(1, true));
        assert!((t * t).is_identity());
        assert!(z.pow(5).is_identity());
    }

    #[test]
    fn reflections_square_to_identity() {
        let d = g(7);
        let r = d.element(3, true);
        assert!((r * r).is_identity());
        for x in d.elements().filter(|x| x.flip()) {
            assert_eq!(x.order(), 2);
        }
        for a in 1..7 {
            assert_eq!(d.element(a, false).order(), 7);
        }
    }

    #[test]
    fn mismatched_groups_error() {
        let a = g(3).zeta();
        let b = g(5).zeta();
        assert!(matches!(a.try_mul(b), Err(Error::ParameterMismatch(_))));
    }

    #[test]
    fn group_axioms_by_enumeration() {
        for p in [3, 5, 7, 11, 13] {
            let d = g(p);
            for x in d.elements() {
                assert!((x * x.inverse()).is_identity());
                for y in d.elements() {
                    for z in d.elements() {
                        assert_eq!((x * y) * z, x * (y * z));
                    }
                }
            }
        }
    }

    #[test]
    fn double_coset_examples() {
        let d = g(5);
        let t = d.reflection(0);
        let mut sizes: Vec<_> = d.double_cosets(&t, &t).unwrap().iter().map(|c| c.size).collect();
        sizes.sort();
        assert_eq!(sizes, vec![2, 4, 4]);

        let whole = d.whole();
        let dc = d.double_cosets(&whole, &whole).unwrap();
        assert_eq!(dc.len(), 1);
        assert_eq!(dc[0].size, 10);

        let d3 = g(3);
        let r = d3.rotations();
        let sizes: Vec<_> = d3.double_cosets(&r, &r).unwrap().iter().map(|c| c.size).collect();
        assert_eq!(sizes, vec![3, 3]);
    }

    #[test]
    fn double_coset_sizes_sum_to_group_order() {
        for p in [3, 5, 7] {
            let d = g(p);
            for h in d.subgroups() {
                for k in d.subgroups() {
                    let total: usize = d.double_cosets(&h, &k).unwrap().iter().map(|c| c.size).sum();
                    assert_eq!(total, 2 * p as usize);
                }
            }
        }
    }

    #[test]
    fn conjugacy_classes() {
        let d = g(7);
        let refl: Vec<_> = d.subgroups().into_iter().filter(|s| s.order() == 2).collect();
        assert_eq!(refl.len(), 7);
        for s in &refl {
            let x = s.conjugator_from_canonical();
            assert_eq!(d.reflection(0).conjugate(x), *s);
        }
        for x in d.elements() {
            assert_eq!(d.rotations().conjugate(x), d.rotations());
        }
    }
}
