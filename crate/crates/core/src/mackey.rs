//! `D_2p`-Mackey functors stored on the four conjugacy classes of subgroups.
//!
//! Only the four lattice edges carry data; composites are derived. Conjugation by
//! `g` is the map induced by `xL ↦ xg⁻¹(gLg⁻¹)`, which on the bottom level sends the
//! basis vector of `y` to that of `g·y`.

use std::fmt::Write as _;

use crate::abelian::FGAbelianGroup;
use crate::burnside::{induced_matrix, Coefficients, Variance};
use crate::error::{Error, Result};
use crate::group::{Dihedral, GroupElement, Subgroup, SubgroupClass};
use crate::gset::{FiniteGSet, GMap};
use crate::matrix::{echelon, invariant_factors, kernel_basis, smith_normal_form, Matrix};

use SubgroupClass::{Reflection, Rotation, Trivial, Whole};

/// The four covering relations of the subgroup lattice up to conjugacy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Edge {
    TrivialReflection,
    TrivialRotation,
    ReflectionWhole,
    RotationWhole,
}

impl Edge {
    pub const ALL: [Edge; 4] = [Edge::TrivialReflection, Edge::TrivialRotation, Edge::ReflectionWhole, Edge::RotationWhole];

    pub fn lower(self) -> SubgroupClass {
        match self {
            Edge::TrivialReflection | Edge::TrivialRotation => Trivial,
            Edge::ReflectionWhole => Reflection,
            Edge::RotationWhole => Rotation,
        }
    }

    pub fn upper(self) -> SubgroupClass {
        match self {
            Edge::TrivialReflection => Reflection,
            Edge::TrivialRotation => Rotation,
            Edge::ReflectionWhole | Edge::RotationWhole => Whole,
        }
    }

    fn between(lower: SubgroupClass, upper: SubgroupClass) -> Option<Edge> {
        Edge::ALL.into_iter().find(|e| e.lower() == lower && e.upper() == upper)
    }
}

/// Which construction produced a functor; only used to recognize inputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Origin {
    Constant,
    Burnside,
    FixedPoint,
    Associated(Coefficients),
    Quotient,
}

/// A Mackey functor whose levels are free abelian groups of the given ranks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MackeyFunctor {
    group: Dihedral,
    origin: Origin,
    ranks: [usize; 4],
    /// `res[edge]`: upper level → lower level.
    res: [Matrix; 4],
    /// `tr[edge]`: lower level → upper level.
    tr: [Matrix; 4],
    /// Conjugation by `ζ` and by `τ` on the bottom level.
    weyl_e: [Matrix; 2],
    /// Conjugation by `τ` on the `Z/p` level.
    weyl_rot: Matrix,
}

impl MackeyFunctor {
    /// The functor `S ↦ M(S × Y)` for `M` constant or Burnside.
    pub fn associated(y: &FiniteGSet, coefficients: Coefficients) -> Result<Self> {
        let group = y.group();
        let lift = |f: GMap| f.times(y);
        let mut res = Vec::new();
        let mut tr = Vec::new();
        for e in Edge::ALL {
            let f = lift(GMap::coset_map(&group.canonical(e.lower()), &group.canonical(e.upper()), group.identity())?)?;
            res.push(induced_matrix(&f, coefficients, Variance::Contravariant));
            tr.push(induced_matrix(&f, coefficients, Variance::Covariant));
        }
        let conj = |class: SubgroupClass, g: GroupElement| -> Result<Matrix> {
            let h = group.canonical(class);
            let f = lift(GMap::coset_map(&h, &h, g.inverse())?)?;
            Ok(induced_matrix(&f, coefficients, Variance::Covariant))
        };
        let weyl_e = [conj(Trivial, group.zeta())?, conj(Trivial, group.tau())?];
        let weyl_rot = conj(Rotation, group.tau())?;
        let mut ranks = [0; 4];
        ranks[Trivial.index()] = res[0].rows();
        ranks[Reflection.index()] = res[0].cols();
        ranks[Rotation.index()] = res[1].cols();
        ranks[Whole.index()] = res[2].cols();
        Ok(Self {
            group,
            origin: Origin::Associated(coefficients),
            ranks,
            res: res.try_into().expect("four edges"),
            tr: tr.try_into().expect("four edges"),
            weyl_e,
            weyl_rot,
        })
    }

    /// The constant functor `Z`: every level `Z`, restrictions `1`, transfers the index.
    pub fn constant_z(p: u32) -> Result<Self> {
        let group = Dihedral::new(p)?;
        let mut m = Self::associated(&FiniteGSet::point(group), Coefficients::ConstantZ)?;
        m.origin = Origin::Constant;
        Ok(m)
    }

    /// The Burnside functor, on bases `(1)`, `(1, t2)`, `(1, tp)`, `(1, t2, tp, t2p)`.
    pub fn burnside_a(p: u32) -> Result<Self> {
        let group = Dihedral::new(p)?;
        let mut m = Self::associated(&FiniteGSet::point(group), Coefficients::BurnsideA)?;
        m.origin = Origin::Burnside;
        Ok(m)
    }

    /// `H ↦ Z[Y]^H` on orbit-sum bases, restriction by inclusion, transfer by coset sums.
    pub fn fixed_point_functor(y: &FiniteGSet) -> Result<Self> {
        let mut m = Self::associated(y, Coefficients::ConstantZ)?;
        m.origin = Origin::FixedPoint;
        Ok(m)
    }

    pub fn group(&self) -> Dihedral {
        self.group
    }

    pub fn origin(&self) -> &Origin {
        &self.origin
    }

    pub fn rank(&self, level: SubgroupClass) -> usize {
        self.ranks[level.index()]
    }

    pub fn level(&self, level: SubgroupClass) -> FGAbelianGroup {
        FGAbelianGroup::free(self.rank(level))
    }

    pub fn edge_restriction(&self, edge: Edge) -> &Matrix {
        &self.res[edge as usize]
    }

    pub fn edge_transfer(&self, edge: Edge) -> &Matrix {
        &self.tr[edge as usize]
    }

    /// Mutable access for building variants, e.g. to test the axiom checker.
    pub fn edge_transfer_mut(&mut self, edge: Edge) -> &mut Matrix {
        &mut self.tr[edge as usize]
    }

    pub fn edge_restriction_mut(&mut self, edge: Edge) -> &mut Matrix {
        &mut self.res[edge as usize]
    }

    pub fn weyl_bottom(&self) -> &[Matrix; 2] {
        &self.weyl_e
    }

    pub fn weyl_rotation(&self) -> &Matrix {
        &self.weyl_rot
    }

    /// `res^H_K`, composed through `Z/2` when `K = e` and `H = G`.
    pub fn restriction(&self, from: SubgroupClass, to: SubgroupClass) -> Result<Matrix> {
        self.restriction_via(from, to, Reflection)
    }

    /// `tr^H_K`, composed through `Z/2` when `K = e` and `H = G`.
    pub fn transfer(&self, from: SubgroupClass, to: SubgroupClass) -> Result<Matrix> {
        self.transfer_via(from, to, Reflection)
    }

    fn restriction_via(&self, from: SubgroupClass, to: SubgroupClass, via: SubgroupClass) -> Result<Matrix> {
        if from == to {
            return Ok(Matrix::identity(self.rank(from)));
        }
        if let Some(e) = Edge::between(to, from) {
            return Ok(self.res[e as usize].clone());
        }
        if from == Whole && to == Trivial {
            return self.restriction_via(via, Trivial, via)?.mul(&self.restriction_via(Whole, via, via)?);
        }
        Err(Error::OutOfRange(format!("{to} is not below {from}")))
    }

    fn transfer_via(&self, from: SubgroupClass, to: SubgroupClass, via: SubgroupClass) -> Result<Matrix> {
        if from == to {
            return Ok(Matrix::identity(self.rank(from)));
        }
        if let Some(e) = Edge::between(from, to) {
            return Ok(self.tr[e as usize].clone());
        }
        if from == Trivial && to == Whole {
            return self.transfer_via(via, Whole, via)?.mul(&self.transfer_via(Trivial, via, via)?);
        }
        Err(Error::OutOfRange(format!("{from} is not below {to}")))
    }

    /// Conjugation by `x` on a level whose canonical subgroup `x` normalizes.
    fn conjugation(&self, level: SubgroupClass, x: GroupElement) -> Result<Matrix> {
        let n = self.rank(level);
        match level {
            Trivial => {
                let mut m = Matrix::identity(n);
                for _ in 0..x.rot() {
                    m = self.weyl_e[0].mul(&m)?;
                }
                if x.flip() {
                    m = m.mul(&self.weyl_e[1])?;
                }
                Ok(m)
            }
            Rotation if x.flip() => Ok(self.weyl_rot.clone()),
            _ => Ok(Matrix::identity(n)),
        }
    }
}

fn class_of_canonical(group: &Dihedral, s: &Subgroup) -> Option<SubgroupClass> {
    SubgroupClass::ALL.into_iter().find(|&c| group.canonical(c) == *s)
}

/// Violated identities; empty when `m` satisfies every checked axiom.
pub fn check_mackey_axioms(m: &MackeyFunctor) -> Vec<String> {
    let mut report = Vec::new();
    let mut expect = |name: String, lhs: Result<Matrix>, rhs: Result<Matrix>| match (lhs, rhs) {
        (Ok(a), Ok(b)) if a == b => {}
        (Ok(_), Ok(_)) => report.push(name),
        (Err(e), _) | (_, Err(e)) => report.push(format!("{name}: {e}")),
    };
    let g = m.group;
    let p = g.p() as usize;
    let [z, t] = &m.weyl_e;
    let n_e = m.rank(Trivial);

    // The bottom level is a G-module and the Z/p level a Z/2-module.
    let zp = (0..p).try_fold(Matrix::identity(n_e), |acc, _| acc.mul(z));
    expect("zeta^p acts as identity on level e".into(), zp, Ok(Matrix::identity(n_e)));
    expect("tau^2 acts as identity on level e".into(), t.mul(t), Ok(Matrix::identity(n_e)));
    let zinv = (0..p - 1).try_fold(Matrix::identity(n_e), |acc, _| acc.mul(z));
    expect("zeta tau = tau zeta^-1 on level e".into(), z.mul(t), zinv.and_then(|zi| t.mul(&zi)));
    expect("tau^2 acts as identity on level Z/p".into(), m.weyl_rot.mul(&m.weyl_rot), Ok(Matrix::identity(m.rank(Rotation))));

    // Transitivity: the two routes from G down to e agree.
    expect("res^G_e through Z/2 equals res^G_e through Z/p".into(), m.restriction_via(Whole, Trivial, Reflection), m.restriction_via(Whole, Trivial, Rotation));
    expect("tr^G_e through Z/2 equals tr^G_e through Z/p".into(), m.transfer_via(Trivial, Whole, Reflection), m.transfer_via(Trivial, Whole, Rotation));

    // Weyl compatibility.
    for (name, edge, x) in [("Z/2", Edge::TrivialReflection, g.tau()), ("Z/p", Edge::TrivialRotation, g.zeta())] {
        let res = m.edge_restriction(edge);
        let tr = m.edge_transfer(edge);
        let c = m.conjugation(Trivial, x);
        expect(format!("res^{name}_e lands in {x}-invariants"), c.clone().and_then(|c| c.mul(res)), Ok(res.clone()));
        expect(format!("tr^{name}_e is {x}-invariant"), c.and_then(|c| tr.mul(&c)), Ok(tr.clone()));
    }
    {
        let res = m.edge_restriction(Edge::TrivialRotation);
        let tr = m.edge_transfer(Edge::TrivialRotation);
        expect("res^Z/p_e commutes with tau".into(), res.mul(&m.weyl_rot), t.mul(res));
        expect("tr^Z/p_e commutes with tau".into(), tr.mul(t), m.weyl_rot.mul(tr));
        let res = m.edge_restriction(Edge::RotationWhole);
        let tr = m.edge_transfer(Edge::RotationWhole);
        expect("res^G_Z/p lands in tau-invariants".into(), m.weyl_rot.mul(res), Ok(res.clone()));
        expect("tr^G_Z/p is tau-invariant".into(), tr.mul(&m.weyl_rot), Ok(tr.clone()));
    }

    // Double coset formula r^H_K t^H_L = Σ t^K_{K∩xLx⁻¹} c_x r^L_{x⁻¹Kx∩L}.
    let pairs = [
        (Reflection, Trivial, Trivial),
        (Rotation, Trivial, Trivial),
        (Whole, Trivial, Trivial),
        (Whole, Trivial, Reflection),
        (Whole, Reflection, Trivial),
        (Whole, Trivial, Rotation),
        (Whole, Rotation, Trivial),
        (Whole, Reflection, Reflection),
        (Whole, Reflection, Rotation),
        (Whole, Rotation, Reflection),
        (Whole, Rotation, Rotation),
    ];
    for (h, k, l) in pairs {
        let name = format!("double coset formula r^{h}_{k} t^{h}_{l}");
        let lhs = m.transfer(l, h).and_then(|t| m.restriction(h, k)?.mul(&t));
        expect(name, lhs, double_coset_sum(m, h, k, l));
    }
    report
}

fn double_coset_sum(m: &MackeyFunctor, h: SubgroupClass, k: SubgroupClass, l: SubgroupClass) -> Result<Matrix> {
    let g = m.group;
    let (hs, ks, ls) = (g.canonical(h), g.canonical(k), g.canonical(l));
    let mut sum = Matrix::zeros(m.rank(k), m.rank(l));
    for dc in g.double_cosets(&ks, &ls)?.into_iter().filter(|dc| hs.contains(dc.representative)) {
        // Pick a representative whose intersection is a canonical subgroup.
        let (x, inter) = g
            .elements()
            .filter(|x| dc.mask & (1 << x.index()) != 0)
            .find_map(|x| class_of_canonical(&g, &ks.intersect(&ls.conjugate(x))).map(|c| (x, c)))
            .ok_or_else(|| Error::Validation("no canonical double coset representative".into()))?;
        let term = m.transfer(inter, k)?.mul(&m.conjugation(inter, x)?)?.mul(&m.restriction(l, inter)?)?;
        sum = sum.add(&term)?;
    }
    Ok(sum)
}

/// `A → Z` levelwise by cardinality, with the quotient maps that realize it.
#[derive(Clone, Debug)]
pub struct AugmentationQuotient {
    pub quotient: MackeyFunctor,
    /// Row vectors `A(H) → Z`, indexed by level.
    pub maps: [Matrix; 4],
}

/// Quotient of the Burnside functor by its augmentation ideal. The constant functor
/// is returned unchanged, since its augmentation ideal is zero.
pub fn augmentation_quotient(a: &MackeyFunctor) -> Result<AugmentationQuotient> {
    let p = a.group.p();
    let constant = MackeyFunctor::constant_z(p)?;
    if *a == constant {
        let maps = SubgroupClass::ALL.map(|_| Matrix::identity(1));
        return Ok(AugmentationQuotient { quotient: constant, maps });
    }
    if *a != MackeyFunctor::burnside_a(p)? {
        return Err(Error::Validation("augmentation quotient needs the Burnside functor".into()));
    }
    let order = |c: SubgroupClass| a.group.canonical(c).order();
    let maps = SubgroupClass::ALL.map(|c| {
        let indices = crate::burnside::subgroup_indices(order(c), p as usize);
        Matrix::from_rows(&[indices.iter().map(|&d| d as i64).collect()])
    });
    let one = |c: SubgroupClass| {
        let mut v = Matrix::zeros(a.rank(c), 1);
        v[(0, 0)] = 1;
        v
    };
    let mut res = Vec::new();
    let mut tr = Vec::new();
    for e in Edge::ALL {
        let (lo, hi) = (e.lower().index(), e.upper().index());
        // The induced map is read off on the class of the unit, which maps to 1.
        res.push(maps[lo].mul(&a.res[e as usize])?.mul(&one(e.upper()))?);
        tr.push(maps[hi].mul(&a.tr[e as usize])?.mul(&one(e.lower()))?);
        // The ideal must be a sub-functor: q ∘ res = res' ∘ q, and likewise for tr.
        if maps[lo].mul(&a.res[e as usize])? != res[res.len() - 1].mul(&maps[hi])? || maps[hi].mul(&a.tr[e as usize])? != tr[tr.len() - 1].mul(&maps[lo])? {
            return Err(Error::Validation(format!("augmentation ideal not stable along {e:?}")));
        }
    }
    let quotient = MackeyFunctor {
        group: a.group,
        origin: Origin::Quotient,
        ranks: [1; 4],
        res: res.try_into().expect("four edges"),
        tr: tr.try_into().expect("four edges"),
        weyl_e: [Matrix::identity(1), Matrix::identity(1)],
        weyl_rot: Matrix::identity(1),
    };
    Ok(AugmentationQuotient { quotient, maps })
}

/// A subquotient of a Burnside ring with chosen generators (columns, in ring coordinates).
#[derive(Clone, Debug)]
pub struct NamedGroup {
    pub name: &'static str,
    pub group: FGAbelianGroup,
    pub generators: Matrix,
}

/// `I_{Z/2}`, `J_{Z/2}`, `I^{Z/p}_G`, `J^{Z/p}_G`: kernels of restriction and cokernels
/// of induction for `e ≤ Z/2` and `Z/p ≤ G`.
pub fn ij_groups(p: u32) -> Result<[NamedGroup; 4]> {
    let a = MackeyFunctor::burnside_a(p)?;
    let kernel = |name, m: &Matrix| -> Result<NamedGroup> {
        let k = kernel_basis(m)?;
        Ok(NamedGroup { name, group: FGAbelianGroup::free(k.cols()), generators: k })
    };
    let cokernel = |name, m: &Matrix| -> Result<NamedGroup> {
        let f = smith_normal_form(m)?;
        let d = f.invariant_factors();
        let mut group = FGAbelianGroup::zero();
        let mut gens = Vec::new();
        for i in 0..m.rows() {
            let di = d.get(i).copied().unwrap_or(0);
            if di != 1 {
                group = group.direct_sum(&FGAbelianGroup::cyclic(di as u64));
                gens.push(f.u_inv.column(i));
            }
        }
        let gens = echelon(gens);
        let mut g = Matrix::zeros(m.rows(), gens.len());
        for (j, v) in gens.iter().enumerate() {
            for (i, &x) in v.iter().enumerate() {
                g[(i, j)] = x;
            }
        }
        Ok(NamedGroup { name, group, generators: g })
    };
    Ok([
        kernel("I_{Z/2}", a.edge_restriction(Edge::TrivialReflection))?,
        cokernel("J_{Z/2}", a.edge_transfer(Edge::TrivialReflection))?,
        kernel("I^{Z/p}_G", a.edge_restriction(Edge::RotationWhole))?,
        cokernel("J^{Z/p}_G", a.edge_transfer(Edge::RotationWhole))?,
    ])
}

/// True when `gens` together with the columns of `image` span the whole lattice.
pub fn spans_with(image: &Matrix, gens: &Matrix) -> Result<bool> {
    let n = image.rows();
    let mut both = Matrix::zeros(n, image.cols() + gens.cols());
    for i in 0..n {
        for j in 0..image.cols() {
            both[(i, j)] = image[(i, j)];
        }
        for j in 0..gens.cols() {
            both[(i, image.cols() + j)] = gens[(i, j)];
        }
    }
    let d = invariant_factors(&both)?;
    Ok(d.len() == n && d.iter().all(|&x| x == 1))
}

/// The four-corner picture with every arrow listed underneath.
pub fn diagram(m: &MackeyFunctor) -> String {
    let lvl = |c: SubgroupClass| m.level(c).to_string();
    let mut out = String::new();
    let top = format!("M(G/e) = {}", lvl(Trivial));
    let left = format!("M(G/<t>) = {}", lvl(Reflection));
    let right = format!("M(G/<z>) = {}", lvl(Rotation));
    let bottom = format!("M(G/G) = {}", lvl(Whole));
    let width = left.len() + right.len() + 8;
    let center = |s: &str| format!("{:^width$}", s, width = width);
    let _ = writeln!(out, "{}", center(&top).trim_end());
    let _ = writeln!(out, "{}", center("/      \\").trim_end());
    let _ = writeln!(out, "{left}        {right}");
    let _ = writeln!(out, "{}", center("\\      /").trim_end());
    let _ = writeln!(out, "{}", center(&bottom).trim_end());
    for e in Edge::ALL {
        let (lo, hi) = (e.lower(), e.upper());
        let _ = write!(out, "\nres {hi} -> {lo}:\n{}", m.edge_restriction(e));
        let _ = write!(out, "tr {lo} -> {hi}:\n{}", m.edge_transfer(e));
    }
    let _ = write!(out, "\nz on level e:\n{}", m.weyl_e[0]);
    let _ = write!(out, "t on level e:\n{}", m.weyl_e[1]);
    let _ = write!(out, "t on level Z/p:\n{}", m.weyl_rot);
    out
}
