//! Levelwise evaluation of cell complexes with Mackey functor coefficients, and integer
//! (co)homology by Smith normal form.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::abelian::{group_from_diagonal, GradedGroup};
use crate::burnside::{accumulate_induced, CoefficientBasis, Coefficients, Variance};
use crate::cw::EquivariantCellComplex;
use crate::error::{Error, Result};
use crate::group::SubgroupClass;
use crate::gset::FiniteGSet;
use crate::matrix::{invariant_factors, Matrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Theory {
    Homology,
    Cohomology,
}

impl Theory {
    pub const BOTH: [Theory; 2] = [Theory::Homology, Theory::Cohomology];

    /// Homology pushes coefficients forward along boundary maps, cohomology pulls back.
    pub fn variance(self) -> Variance {
        match self {
            Theory::Homology => Variance::Covariant,
            Theory::Cohomology => Variance::Contravariant,
        }
    }

    pub fn dual(self) -> Theory {
        match self {
            Theory::Homology => Theory::Cohomology,
            Theory::Cohomology => Theory::Homology,
        }
    }
}

impl fmt::Display for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Theory::Homology => "homology",
            Theory::Cohomology => "cohomology",
        })
    }
}

/// A bounded complex of free abelian groups in degrees `offset ..`.
///
/// For homology `maps[k]` goes from degree `offset + k` down one; `maps[0]` has no rows.
/// For cohomology `maps[k]` goes up one; the last map has no rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerChainComplex {
    offset: i64,
    theory: Theory,
    reduced: bool,
    labels: Vec<Vec<String>>,
    maps: Vec<Matrix>,
}

impl IntegerChainComplex {
    pub fn new(offset: i64, theory: Theory, reduced: bool, labels: Vec<Vec<String>>, maps: Vec<Matrix>) -> Result<Self> {
        if labels.len() != maps.len() {
            return Err(Error::Validation("one map per degree is required".into()));
        }
        let n = maps.len();
        for (k, m) in maps.iter().enumerate() {
            let target = match theory {
                Theory::Homology => k.checked_sub(1).map_or(0, |j| labels[j].len()),
                Theory::Cohomology => labels.get(k + 1).map_or(0, Vec::len),
            };
            if m.cols() != labels[k].len() || m.rows() != target {
                return Err(Error::Validation(format!("map out of degree {} has shape {}x{}", offset + k as i64, m.rows(), m.cols())));
            }
        }
        let c = Self { offset, theory, reduced, labels, maps };
        for k in 0..n {
            if let Some(next) = c.incoming(k) {
                if !c.maps[k].mul(next)?.is_zero() {
                    return Err(Error::Validation(format!("d∘d ≠ 0 through degree {}", offset + k as i64)));
                }
            }
        }
        Ok(c)
    }

    /// A homological complex from boundary matrices `d_k: C_k → C_{k−1}`, `k ≥ 1`, with
    /// `ranks[k]` the rank of `C_k`.
    pub fn from_boundaries(ranks: &[usize], boundaries: &[Matrix]) -> Result<Self> {
        let labels = ranks.iter().enumerate().map(|(k, &r)| (0..r).map(|i| format!("e{k}_{i}")).collect()).collect();
        let mut maps = vec![Matrix::zeros(0, ranks.first().copied().unwrap_or(0))];
        maps.extend(boundaries.iter().cloned());
        Self::new(0, Theory::Homology, false, labels, maps)
    }

    pub fn theory(&self) -> Theory {
        self.theory
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn rank(&self, degree: i64) -> usize {
        self.index(degree).map_or(0, |k| self.labels[k].len())
    }

    pub fn labels(&self, degree: i64) -> &[String] {
        self.index(degree).map_or(&[], |k| &self.labels[k])
    }

    /// The map leaving the given degree.
    pub fn differential(&self, degree: i64) -> Option<&Matrix> {
        self.index(degree).map(|k| &self.maps[k])
    }

    fn index(&self, degree: i64) -> Option<usize> {
        let k = degree - self.offset;
        (0..self.maps.len() as i64).contains(&k).then_some(k as usize)
    }

    /// The map arriving at position `k`.
    fn incoming(&self, k: usize) -> Option<&Matrix> {
        match self.theory {
            Theory::Homology => self.maps.get(k + 1),
            Theory::Cohomology => k.checked_sub(1).map(|j| &self.maps[j]),
        }
    }

    /// `Hom(C, Z)` written as a homological complex in negated degrees.
    pub fn dual(&self) -> Result<IntegerChainComplex> {
        if self.theory != Theory::Homology {
            return Err(Error::ParameterMismatch("dual expects a homological complex".into()));
        }
        let n = self.maps.len();
        // Position k of the dual is degree −(offset + n − 1 − k).
        let labels: Vec<Vec<String>> = (0..n).rev().map(|k| self.labels[k].clone()).collect();
        let mut maps = vec![Matrix::zeros(0, labels.first().map_or(0, Vec::len))];
        for k in 1..n {
            maps.push(self.maps[n - k].transpose());
        }
        Self::new(-(self.offset + n as i64 - 1), Theory::Homology, self.reduced, labels, maps)
    }
}

/// `H_n = ker / im`, in normal form, for every degree of the complex.
pub fn homology(c: &IntegerChainComplex) -> Result<GradedGroup> {
    let groups: Vec<_> = (0..c.maps.len())
        .into_par_iter()
        .map(|k| -> Result<_> {
            let out = invariant_factors(&c.maps[k])?.len();
            let (rank_in, torsion) = match c.incoming(k) {
                Some(m) => {
                    let f = invariant_factors(m)?;
                    (f.len(), f)
                }
                None => (0, Vec::new()),
            };
            let free = c.labels[k].len() - out - rank_in;
            Ok((c.offset + k as i64, group_from_diagonal(free, &torsion)))
        })
        .collect();
    let mut g = GradedGroup::new();
    for r in groups {
        let (n, h) = r?;
        g.set(n, h);
    }
    Ok(g)
}

/// The complex `S ↦ M(G/H × X_*)` together with what is needed to reduce it.
struct Evaluation {
    bases: Vec<CoefficientBasis>,
    keep: Vec<Vec<usize>>,
    labels: Vec<Vec<String>>,
    /// Unreduced maps, `maps[n]` between degrees `n` and `n − 1` in the direction of the variance.
    maps: Vec<Matrix>,
    theory: Theory,
    reduced: bool,
}

impl Evaluation {
    fn new(x: &EquivariantCellComplex, coeff: Coefficients, level: SubgroupClass, theory: Theory) -> Result<Self> {
        let group = x.group();
        let p = group.p() as usize;
        let ex = x.expand();
        let level_set = FiniteGSet::cosets(&group.canonical(level));
        let sets = ex.sets.iter().map(|s| level_set.product(s)).collect::<Result<Vec<_>>>()?;
        let bases: Vec<CoefficientBasis> = sets.iter().map(|s| CoefficientBasis::new(coeff, s)).collect();
        let variance = theory.variance();
        let mut keep = Vec::new();
        let mut labels = Vec::new();
        for (n, basis) in bases.iter().enumerate() {
            let width = ex.cells[n].len();
            let mut k = Vec::new();
            let mut l = Vec::new();
            for (slot, (o, d)) in basis.labels(p).into_iter().enumerate() {
                let z = basis.orbits[o].rep();
                let (c, g) = ex.cells[n][z % width];
                if Some(c) == x.basepoint() {
                    continue;
                }
                let kind = &x.cells()[c].kind;
                k.push(slot);
                l.push(match coeff {
                    Coefficients::ConstantZ => format!("{g}.{kind}@{}", z / width),
                    Coefficients::BurnsideA => format!("{g}.{kind}@{}[{d}]", z / width),
                });
            }
            keep.push(k);
            labels.push(l);
        }
        let mut maps = vec![Matrix::zeros(0, 0)];
        for n in 1..bases.len() {
            let (width, below) = (ex.cells[n].len(), ex.cells[n - 1].len());
            let mut out = match variance {
                Variance::Covariant => Matrix::zeros(bases[n - 1].len, bases[n].len),
                Variance::Contravariant => Matrix::zeros(bases[n].len, bases[n - 1].len),
            };
            let mut by_cell: Vec<Vec<usize>> = vec![Vec::new(); x.cells().len()];
            for (o, orbit) in bases[n].orbits.iter().enumerate() {
                by_cell[ex.cells[n][orbit.rep() % width].0].push(o);
            }
            for (c, orbits) in by_cell.iter().enumerate() {
                if orbits.is_empty() {
                    continue;
                }
                for t in x.boundary(c) {
                    let map = |z: usize| {
                        let (_, g) = ex.cells[n][z % width];
                        (z / width) * below + ex.position[t.target][(g * t.element).index()]
                    };
                    accumulate_induced(&mut out, t.coeff, variance, &sets[n], &bases[n], &sets[n - 1], &bases[n - 1], orbits, &map);
                }
            }
            maps.push(out);
        }
        Ok(Self { bases, keep, labels, maps, theory, reduced: x.is_based() })
    }

    fn reduced_map(&self, n: usize) -> Matrix {
        match self.theory {
            Theory::Homology => self.maps[n].select(&self.keep[n - 1], &self.keep[n]),
            Theory::Cohomology => self.maps[n].select(&self.keep[n], &self.keep[n - 1]),
        }
    }

    fn complex(&self) -> Result<IntegerChainComplex> {
        let top = self.bases.len();
        let rank = |n: usize| self.keep[n].len();
        let maps = match self.theory {
            Theory::Homology => {
                let mut v = vec![Matrix::zeros(0, rank(0))];
                v.extend((1..top).map(|n| self.reduced_map(n)));
                v
            }
            Theory::Cohomology => {
                let mut v: Vec<Matrix> = (1..top).map(|n| self.reduced_map(n)).collect();
                v.push(Matrix::zeros(0, rank(top - 1)));
                v
            }
        };
        IntegerChainComplex::new(0, self.theory, self.reduced, self.labels.clone(), maps)
    }
}

/// One level of the Bredon chain (or cochain) complex. Based complexes are reduced by
/// dropping the basepoint.
pub fn evaluate_level(x: &EquivariantCellComplex, coeff: Coefficients, level: SubgroupClass, theory: Theory) -> Result<IntegerChainComplex> {
    Evaluation::new(x, coeff, level, theory)?.complex()
}

/// Bredon (co)homology at one level; reduced when `x` is based.
pub fn bredon(x: &EquivariantCellComplex, coeff: Coefficients, level: SubgroupClass, theory: Theory) -> Result<GradedGroup> {
    homology(&evaluate_level(x, coeff, level, theory)?)
}

/// The underlying non-equivariant cellular chain complex, unreduced.
pub fn underlying_complex(x: &EquivariantCellComplex) -> Result<IntegerChainComplex> {
    let ex = x.expand();
    let ranks: Vec<usize> = ex.cells.iter().map(Vec::len).collect();
    IntegerChainComplex::from_boundaries(&ranks, &ex.differentials[1..])
}

/// Whether the augmentation `A → Z` commutes with the differentials of `x` at the given
/// level, in both variances.
pub fn augmentation_commutes(x: &EquivariantCellComplex, level: SubgroupClass) -> Result<bool> {
    let p = x.group().p() as usize;
    for theory in Theory::BOTH {
        let a = Evaluation::new(x, Coefficients::BurnsideA, level, theory)?;
        let z = Evaluation::new(x, Coefficients::ConstantZ, level, theory)?;
        let aug = |n: usize| a.bases[n].augmentation(p).select(&z.keep[n], &a.keep[n]);
        for n in 1..a.bases.len() {
            let (da, dz) = (a.reduced_map(n), z.reduced_map(n));
            let ok = match theory {
                Theory::Homology => aug(n - 1).mul(&da)? == dz.mul(&aug(n))?,
                Theory::Cohomology => aug(n).mul(&da)? == dz.mul(&aug(n - 1))?,
            };
            if !ok {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::FGAbelianGroup;
    use crate::cw::{build_orbit_sphere, build_sign_sphere, orbit_space_model, plus, sphere_model, suspend};
    use SubgroupClass::*;

    fn graded(entries: &[(i64, &[u64])]) -> GradedGroup {
        let mut g = GradedGroup::new();
        for &(n, orders) in entries {
            g.add(n, &FGAbelianGroup::from_cyclic_orders(orders.iter().copied()));
        }
        g
    }

    #[test]
    fn multiplication_by_p() {
        let c = IntegerChainComplex::from_boundaries(&[1, 1], &[Matrix::from_rows(&[vec![5]])]).unwrap();
        assert_eq!(homology(&c).unwrap(), graded(&[(0, &[5])]));
    }

    #[test]
    fn d_squared_rejected() {
        let d1 = Matrix::from_rows(&[vec![1]]);
        let d2 = Matrix::from_rows(&[vec![1]]);
        assert!(matches!(IntegerChainComplex::from_boundaries(&[1, 1, 1], &[d1, d2]), Err(Error::Validation(_))));
    }

    #[test]
    fn underlying_spheres() {
        let x = build_orbit_sphere(3, 1, 2).unwrap();
        assert_eq!(homology(&underlying_complex(&x).unwrap()).unwrap(), graded(&[(0, &[0]), (3, &[0])]));
        let s = build_sign_sphere(5, 3).unwrap();
        assert_eq!(homology(&underlying_complex(&s).unwrap()).unwrap(), graded(&[(0, &[0]), (3, &[0])]));
        let t = suspend(&build_orbit_sphere(5, 2, 2).unwrap());
        assert_eq!(homology(&underlying_complex(&t).unwrap()).unwrap(), graded(&[(0, &[0]), (4, &[0])]));
    }

    #[test]
    fn bottom_level_ignores_coefficients() {
        let x = sphere_model(3, 1, 1, 2).unwrap();
        for theory in Theory::BOTH {
            let a = bredon(&x, Coefficients::BurnsideA, Trivial, theory).unwrap();
            let z = bredon(&x, Coefficients::ConstantZ, Trivial, theory).unwrap();
            assert_eq!(a, z);
        }
        assert_eq!(bredon(&x, Coefficients::ConstantZ, Trivial, Theory::Homology).unwrap(), graded(&[(5, &[0])]));
    }

    #[test]
    fn dual_matches_cohomology_at_the_bottom() {
        let x = plus(&build_orbit_sphere(5, 1, 2).unwrap());
        let chains = evaluate_level(&x, Coefficients::ConstantZ, Trivial, Theory::Homology).unwrap();
        let h = homology(&chains.dual().unwrap()).unwrap();
        let c = bredon(&x, Coefficients::ConstantZ, Trivial, Theory::Cohomology).unwrap();
        assert_eq!(h, c.negate_degrees());
    }

    #[test]
    fn orbit_circle_at_top_level() {
        let x = build_orbit_sphere(5, 1, 1).unwrap();
        let c = evaluate_level(&x, Coefficients::ConstantZ, Whole, Theory::Homology).unwrap();
        assert_eq!(c.differential(1).unwrap(), &Matrix::from_rows(&[vec![-2], vec![2]]));
        assert_eq!(homology(&c).unwrap(), graded(&[(0, &[0, 2])]));
    }

    #[test]
    fn sign_sphere_four() {
        let s = build_sign_sphere(5, 4).unwrap();
        let z = bredon(&s, Coefficients::ConstantZ, Whole, Theory::Homology).unwrap();
        assert_eq!(z, graded(&[(0, &[2]), (2, &[2]), (4, &[0])]));
        let a = bredon(&s, Coefficients::BurnsideA, Whole, Theory::Homology).unwrap();
        // 𝓒 at the top level: J ⊕ A(Z/p) at 0, A(Z/p)/2 at 2, A(Z/p) at 4, in this model.
        assert_eq!(a.get(4), FGAbelianGroup::free(2));
        assert_eq!(a.get(2), FGAbelianGroup::from_cyclic_orders([2, 2]));
        let r = bredon(&s, Coefficients::BurnsideA, Reflection, Theory::Homology).unwrap();
        assert_eq!(r, graded(&[(0, &[0]), (2, &[2]), (4, &[0])]));
    }

    #[test]
    fn sphere_of_gamma() {
        let x = sphere_model(3, 1, 0, 1).unwrap();
        let h = bredon(&x, Coefficients::ConstantZ, Whole, Theory::Homology).unwrap();
        assert_eq!(h, graded(&[(0, &[3]), (1, &[2])]));
    }

    #[test]
    fn orbit_space_five_gamma() {
        let x = orbit_space_model(5, 1, 0, 5).unwrap();
        let h = bredon(&x, Coefficients::ConstantZ, Whole, Theory::Homology).unwrap();
        assert_eq!(h, graded(&[(0, &[0]), (3, &[5]), (4, &[2]), (6, &[2]), (7, &[5]), (8, &[2])]));
    }

    #[test]
    fn zero_sphere() {
        let s = build_sign_sphere(7, 0).unwrap();
        assert_eq!(bredon(&s, Coefficients::BurnsideA, Whole, Theory::Homology).unwrap(), graded(&[(0, &[0, 0, 0, 0])]));
        assert_eq!(bredon(&s, Coefficients::ConstantZ, Whole, Theory::Homology).unwrap(), graded(&[(0, &[0])]));
    }

    #[test]
    fn augmentation_is_a_chain_map() {
        for x in [sphere_model(3, 1, 2, 1).unwrap(), orbit_space_model(5, 2, 1, 2).unwrap()] {
            for level in SubgroupClass::ALL {
                assert!(augmentation_commutes(&x, level).unwrap());
            }
        }
    }
}
