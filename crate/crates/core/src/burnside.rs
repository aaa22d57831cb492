//! Burnside rings of the subgroups of `D_2p` and the two coefficient systems used
//! throughout: constant `Z` and the Burnside functor `A`.
//!
//! For a `G`-set `Y`, the value of `A` at `Y` has one basis vector per `G`-orbit of
//! pairs `(y, M)` with `M <= G_y`, taken up to conjugation. Inside a fixed orbit of `Y`
//! the class of `M` is pinned down by its index `|G_y : M|`, so a basis vector is an
//! (orbit, index) pair. The constant functor has one basis vector per orbit.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Dihedral, Subgroup, SubgroupClass};
use crate::gset::{FiniteGSet, GMap, Orbit};
use crate::matrix::Matrix;

/// Which Mackey functor supplies the coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Coefficients {
    ConstantZ,
    BurnsideA,
}

impl std::fmt::Display for Coefficients {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Coefficients::ConstantZ => "constant-z",
            Coefficients::BurnsideA => "burnside",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variance {
    Covariant,
    Contravariant,
}

/// Indices of subgroups (up to conjugacy) inside a subgroup of the given order.
pub fn subgroup_indices(order: usize, p: usize) -> Vec<usize> {
    match order {
        1 => vec![1],
        2 => vec![1, 2],
        n if n == p => vec![1, p],
        _ => vec![1, 2, p, 2 * p],
    }
}

/// Basis of a coefficient functor evaluated on a `G`-set.
#[derive(Clone, Debug)]
pub struct CoefficientBasis {
    pub coefficients: Coefficients,
    pub orbits: Vec<Orbit>,
    /// Orbit position of every element of the set.
    pub orbit_of: Vec<usize>,
    /// Stabilizer order of each orbit's representative.
    pub stabilizer_orders: Vec<usize>,
    /// Offset of each orbit's first basis vector.
    pub offsets: Vec<usize>,
    pub len: usize,
}

impl CoefficientBasis {
    pub fn new(coefficients: Coefficients, set: &FiniteGSet) -> Self {
        let orbits = set.orbits();
        let orbit_of = set.orbit_lookup(&orbits);
        let p = set.group().p() as usize;
        let stabilizer_orders: Vec<usize> = orbits.iter().map(|o| set.group().order() / o.len()).collect();
        let mut offsets = Vec::with_capacity(orbits.len());
        let mut len = 0;
        for &k in &stabilizer_orders {
            offsets.push(len);
            len += match coefficients {
                Coefficients::ConstantZ => 1,
                Coefficients::BurnsideA => subgroup_indices(k, p).len(),
            };
        }
        Self { coefficients, orbits, orbit_of, stabilizer_orders, offsets, len }
    }

    /// Basis position of `(orbit, index)`; the index is ignored for constant coefficients.
    pub fn position(&self, orbit: usize, index: usize, p: usize) -> usize {
        match self.coefficients {
            Coefficients::ConstantZ => orbit,
            Coefficients::BurnsideA => {
                let k = self.stabilizer_orders[orbit];
                let slot = subgroup_indices(k, p).iter().position(|&d| d == index).expect("index of a subgroup");
                self.offsets[orbit] + slot
            }
        }
    }

    /// `(orbit, index)` for every basis vector, in order.
    pub fn labels(&self, p: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.len);
        for (o, &k) in self.stabilizer_orders.iter().enumerate() {
            match self.coefficients {
                Coefficients::ConstantZ => out.push((o, 1)),
                Coefficients::BurnsideA => out.extend(subgroup_indices(k, p).into_iter().map(|d| (o, d))),
            }
        }
        out
    }

    /// Augmentation to the constant functor: `(y, M) ↦ |G_y : M| · [orbit of y]`.
    pub fn augmentation(&self, p: usize) -> Matrix {
        let mut m = Matrix::zeros(self.orbits.len(), self.len);
        for (col, (o, d)) in self.labels(p).into_iter().enumerate() {
            m[(o, col)] = d as i64;
        }
        m
    }
}

/// Accumulates `coeff · f_*` or `coeff · f^*` into `out` for a map given elementwise.
///
/// `map` is defined on every element of `source_set` that lies in `domain`; elements
/// outside `domain` are ignored, which lets one orbit of cells be handled at a time.
#[allow(clippy::too_many_arguments)]
pub(crate) fn accumulate_induced(
    out: &mut Matrix,
    coeff: i64,
    variance: Variance,
    source_set: &FiniteGSet,
    source: &CoefficientBasis,
    target_set: &FiniteGSet,
    target: &CoefficientBasis,
    domain_orbits: &[usize],
    map: &dyn Fn(usize) -> usize,
) {
    let group = source_set.group();
    let p = group.p() as usize;
    match (variance, source.coefficients) {
        (Variance::Covariant, Coefficients::ConstantZ) => {
            for &o in domain_orbits {
                let y = source.orbits[o].rep();
                let t = target.orbit_of[map(y)];
                let mult = source.orbits[o].len() / target.orbits[t].len();
                out.bump(t, o, coeff * mult as i64);
            }
        }
        (Variance::Covariant, Coefficients::BurnsideA) => {
            for &o in domain_orbits {
                let y = source.orbits[o].rep();
                let fy = map(y);
                let t = target.orbit_of[fy];
                let k = source.stabilizer_orders[o];
                let kt = target.stabilizer_orders[t];
                for d in subgroup_indices(k, p) {
                    let m_order = k / d;
                    out.bump(target.position(t, kt / m_order, p), source.position(o, d, p), coeff);
                }
            }
        }
        (Variance::Contravariant, Coefficients::ConstantZ) => {
            for &o in domain_orbits {
                let t = target.orbit_of[map(source.orbits[o].rep())];
                out.bump(o, t, coeff);
            }
        }
        (Variance::Contravariant, Coefficients::BurnsideA) => {
            // For each target orbit hit, pull back every (t, M) over the fibre of t.
            let mut hit: Vec<usize> = domain_orbits.iter().map(|&o| target.orbit_of[map(source.orbits[o].rep())]).collect();
            hit.sort_unstable();
            hit.dedup();
            for t_orbit in hit {
                let t = target.orbits[t_orbit].rep();
                let stab_t = target_set.stabilizer(t);
                let fibre: Vec<usize> = domain_orbits.iter().flat_map(|&o| source.orbits[o].elements.iter().copied()).filter(|&s| map(s) == t).collect();
                for d in subgroup_indices(stab_t.order(), p) {
                    let m = subgroup_of_index(&stab_t, d);
                    let col = target.position(t_orbit, d, p);
                    let mut seen: Vec<usize> = Vec::new();
                    for &s in &fibre {
                        if seen.contains(&s) {
                            continue;
                        }
                        seen.extend(m.elements().map(|g| source_set.act(g, s)));
                        let stab_s = source_set.stabilizer(s);
                        let index = stab_s.order() / stab_s.intersect(&m).order();
                        let row = source.position(source.orbit_of[s], index, p);
                        out.bump(row, col, coeff);
                    }
                }
            }
        }
    }
}

/// Some subgroup of `k` with index `d`.
pub fn subgroup_of_index(k: &Subgroup, d: usize) -> Subgroup {
    k.group().subgroups().into_iter().find(|m| m.is_subgroup_of(k) && m.order() * d == k.order()).expect("index of an existing subgroup")
}

/// The matrix of `f_*` or `f^*` between coefficient bases of source and target.
///
/// Covariant matrices map source coordinates to target coordinates; contravariant
/// matrices map target coordinates to source coordinates.
pub fn induced_matrix(f: &GMap, coefficients: Coefficients, variance: Variance) -> Matrix {
    let source = CoefficientBasis::new(coefficients, f.source());
    let target = CoefficientBasis::new(coefficients, f.target());
    let mut out = match variance {
        Variance::Covariant => Matrix::zeros(target.len, source.len),
        Variance::Contravariant => Matrix::zeros(source.len, target.len),
    };
    let all: Vec<usize> = (0..source.orbits.len()).collect();
    accumulate_induced(&mut out, 1, variance, f.source(), &source, f.target(), &target, &all, &|x| f.apply(x));
    out
}

/// `f` evaluated at level `G/H`: the induced map of `id × f` on `G/H × X → G/H × Y`.
pub fn induced_map(f: &GMap, level: SubgroupClass, coefficients: Coefficients, variance: Variance) -> Result<Matrix> {
    let s = FiniteGSet::cosets(&f.source().group().canonical(level));
    Ok(induced_matrix(&f.product_with(&s)?, coefficients, variance))
}

/// An element of `A(H)` for a canonical subgroup `H`, on the basis of orbits `H/K`
/// ordered by cardinality: `(1, t_2, t_p, t_2p)` or the relevant sub-tuple.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BurnsideElement {
    pub p: u32,
    pub level: SubgroupClass,
    pub coeffs: Vec<i64>,
}

impl BurnsideElement {
    pub fn new(p: u32, level: SubgroupClass, coeffs: Vec<i64>) -> Result<Self> {
        Dihedral::new(p)?;
        let want = rank_at(level);
        if coeffs.len() != want {
            return Err(Error::ParameterMismatch(format!("A({level}) has rank {want}, got {} coefficients", coeffs.len())));
        }
        Ok(Self { p, level, coeffs })
    }

    /// The orbit of cardinality `size`, i.e. one of `1, t_2, t_p, t_2p`.
    pub fn basis(p: u32, level: SubgroupClass, size: usize) -> Result<Self> {
        let h = Dihedral::new(p)?.canonical(level);
        let indices = subgroup_indices(h.order(), p as usize);
        let slot = indices.iter().position(|&d| d == size).ok_or_else(|| Error::OutOfRange(format!("A({level}) has no orbit of size {size}")))?;
        let mut coeffs = vec![0; indices.len()];
        coeffs[slot] = 1;
        Ok(Self { p, level, coeffs })
    }

    pub fn one(p: u32, level: SubgroupClass) -> Result<Self> {
        Self::basis(p, level, 1)
    }

    /// Total number of points, with `|t_i| = i`.
    pub fn cardinality(&self) -> i64 {
        let h = self.order_of_level();
        subgroup_indices(h, self.p as usize).iter().zip(&self.coeffs).map(|(&d, &c)| d as i64 * c).sum()
    }

    fn order_of_level(&self) -> usize {
        let p = self.p as usize;
        match self.level {
            SubgroupClass::Trivial => 1,
            SubgroupClass::Reflection => 2,
            SubgroupClass::Rotation => p,
            SubgroupClass::Whole => 2 * p,
        }
    }
}

fn rank_at(level: SubgroupClass) -> usize {
    match level {
        SubgroupClass::Trivial => 1,
        SubgroupClass::Reflection | SubgroupClass::Rotation => 2,
        SubgroupClass::Whole => 4,
    }
}

/// `H/K` as an `H`-set, realized as a `G`-set on which only `H` is used.
fn orbit_as_hset(group: Dihedral, h: &Subgroup, index: usize) -> (Vec<Vec<usize>>, usize) {
    // Elements of H/K as cosets kK listed by smallest member; action table over H.
    let k = subgroup_of_index(h, index);
    let h_elems: Vec<_> = h.elements().collect();
    let mut cosets: Vec<u64> = Vec::new();
    for &x in &h_elems {
        let mask = k.elements().fold(0u64, |m, y| m | 1 << (x * y).index());
        if !cosets.contains(&mask) {
            cosets.push(mask);
        }
    }
    let table = h_elems
        .iter()
        .map(|&g| {
            (0..cosets.len())
                .map(|c| {
                    let x = group.element_at(cosets[c].trailing_zeros() as usize);
                    let img = 1u64 << (g * x).index();
                    cosets.iter().position(|&m| m & img != 0).expect("coset")
                })
                .collect()
        })
        .collect();
    (table, cosets.len())
}

/// Product in `A(H)` by decomposing products of `H`-sets into orbits.
pub fn burnside_mul(x: &BurnsideElement, y: &BurnsideElement) -> Result<BurnsideElement> {
    if x.p != y.p || x.level != y.level {
        return Err(Error::ParameterMismatch(format!("A({}) and A({}) for p = {}, {}", x.level, y.level, x.p, y.p)));
    }
    let group = Dihedral::new(x.p)?;
    let h = group.canonical(x.level);
    let indices = subgroup_indices(h.order(), x.p as usize);
    // Structure constants: basis_i · basis_j.
    let n = indices.len();
    let mut out = vec![0i64; n];
    for (i, &a) in indices.iter().enumerate() {
        if x.coeffs[i] == 0 {
            continue;
        }
        let (ta, la) = orbit_as_hset(group, &h, a);
        for (j, &b) in indices.iter().enumerate() {
            if y.coeffs[j] == 0 {
                continue;
            }
            let (tb, lb) = orbit_as_hset(group, &h, b);
            let mut seen = vec![false; la * lb];
            for start in 0..la * lb {
                if seen[start] {
                    continue;
                }
                let mut size = 0;
                for g in 0..ta.len() {
                    let z = ta[g][start / lb] * lb + tb[g][start % lb];
                    if !seen[z] {
                        seen[z] = true;
                        size += 1;
                    }
                }
                let slot = indices.iter().position(|&d| d == size).expect("orbit sizes are indices");
                out[slot] += x.coeffs[i] * y.coeffs[j];
            }
        }
    }
    BurnsideElement::new(x.p, x.level, out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn whole(p: u32, size: usize) -> BurnsideElement {
        BurnsideElement::basis(p, SubgroupClass::Whole, size).unwrap()
    }

    #[test]
    fn products_of_orbits() {
        let t2 = whole(5, 2);
        assert_eq!(burnside_mul(&t2, &t2).unwrap().coeffs, vec![0, 2, 0, 0]);
        let tp = whole(5, 5);
        assert_eq!(burnside_mul(&BurnsideElement::one(5, SubgroupClass::Whole).unwrap(), &tp).unwrap(), tp);
        assert_eq!(burnside_mul(&tp, &tp).unwrap().coeffs, vec![0, 0, 1, 2]);
    }

    #[test]
    fn level_mismatch() {
        let a = BurnsideElement::one(5, SubgroupClass::Whole).unwrap();
        let b = BurnsideElement::one(5, SubgroupClass::Rotation).unwrap();
        assert!(matches!(burnside_mul(&a, &b), Err(Error::ParameterMismatch(_))));
    }

    #[test]
    fn projection_covariant_at_top() {
        let d = Dihedral::new(5).unwrap();
        let f = GMap::coset_map(&d.trivial_subgroup(), &d.reflection(0), d.identity()).unwrap();
        let m = induced_map(&f, SubgroupClass::Whole, Coefficients::BurnsideA, Variance::Covariant).unwrap();
        // [G/e] lands on the free orbit over G/<τ>, the t_2 slot of A(Z/2).
        assert_eq!(m, Matrix::from_rows(&[vec![0], vec![1]]));
    }

    #[test]
    fn identity_and_rotation_are_identities() {
        let d = Dihedral::new(5).unwrap();
        let t = d.reflection(0);
        let id = GMap::identity(FiniteGSet::cosets(&t));
        for c in [Coefficients::ConstantZ, Coefficients::BurnsideA] {
            let m = induced_map(&id, SubgroupClass::Whole, c, Variance::Covariant).unwrap();
            assert_eq!(m, Matrix::identity(m.rows()));
        }
        let rot = GMap::coset_map(&d.trivial_subgroup(), &d.trivial_subgroup(), d.zeta()).unwrap();
        let m = induced_map(&rot, SubgroupClass::Whole, Coefficients::BurnsideA, Variance::Covariant).unwrap();
        assert_eq!(m, Matrix::identity(1));
    }

    #[test]
    fn restriction_of_tp_to_reflection() {
        // Pullback along G/<τ> → G/G on level G: t_p ↦ 1 + (p-1)/2 t_2.
        let d = Dihedral::new(7).unwrap();
        let f = GMap::coset_map(&d.reflection(0), &d.whole(), d.identity()).unwrap();
        let m = induced_map(&f, SubgroupClass::Whole, Coefficients::BurnsideA, Variance::Contravariant).unwrap();
        assert_eq!(m.column(2), vec![1, 3]);
        assert_eq!(m.column(3), vec![0, 7]);
    }
}
