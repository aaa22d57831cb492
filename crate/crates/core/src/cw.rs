//! Equivariant cell structures on `S(mγ_i)`, `S^{ℓα}` and their suspensions and smashes.
//!
//! A complex stores one representative per orbit of cells. Its boundary is a list of
//! terms `coeff · g·target`, read on the representative. Everything else, including
//! the non-equivariant chain complex, is derived by expanding orbits along a fixed
//! transversal.

use std::collections::HashMap;
use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::group::{Dihedral, GroupElement, Subgroup, SubgroupClass};
use crate::gset::FiniteGSet;
use crate::matrix::Matrix;

/// Names of the distinguished fixed 0-cells.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FixedLabel {
    /// `s₊`, the basepoint of a sign sphere.
    Plus,
    /// `s₋`.
    Minus,
    /// South pole of a suspension; its basepoint.
    South,
    /// North pole of a suspension.
    North,
    /// Added disjoint basepoint, or the collapsed wedge of a smash.
    Base,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CellKind {
    A {
        k: usize,
        l: usize,
    },
    B {
        k: usize,
        l: usize,
    },
    C {
        k: usize,
    },
    Sign {
        d: usize,
    },
    Fixed(FixedLabel),
    Suspension(Box<CellKind>),
    /// The orbit of `(x·left, y·right)`.
    Smash {
        left: Box<CellKind>,
        x: GroupElement,
        right: Box<CellKind>,
        y: GroupElement,
    },
}

impl fmt::Display for CellKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CellKind::A { k, l } => write!(f, "a{k},{l}"),
            CellKind::B { k, l } => write!(f, "b{k},{l}"),
            CellKind::C { k } => write!(f, "c{k}"),
            CellKind::Sign { d } => write!(f, "u{d}"),
            CellKind::Fixed(FixedLabel::Plus) => write!(f, "s+"),
            CellKind::Fixed(FixedLabel::Minus) => write!(f, "s-"),
            CellKind::Fixed(FixedLabel::South) => write!(f, "S"),
            CellKind::Fixed(FixedLabel::North) => write!(f, "N"),
            CellKind::Fixed(FixedLabel::Base) => write!(f, "*"),
            CellKind::Suspension(c) => write!(f, "susp({c})"),
            CellKind::Smash { left, x, right, y } => {
                let tag = |g: &GroupElement| if g.is_identity() { String::new() } else { format!("{g}.") };
                write!(f, "({}{left} ^ {}{right})", tag(x), tag(y))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitCell {
    pub kind: CellKind,
    pub dim: usize,
    pub isotropy: Subgroup,
    /// Position in the skeletal filtration by `(k, a|b)`, used by the spectral sequence.
    pub filtration: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Term {
    pub coeff: i64,
    pub element: GroupElement,
    pub target: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivariantCellComplex {
    group: Dihedral,
    gamma: Option<u32>,
    cells: Vec<OrbitCell>,
    boundary: Vec<Vec<Term>>,
    basepoint: Option<usize>,
}

/// Non-equivariant cells of one dimension: `(orbit cell, element)` meaning `element·cell`.
#[derive(Clone, Debug)]
pub struct Expansion {
    pub cells: Vec<Vec<(usize, GroupElement)>>,
    /// `position[c][g.index()]` is the slot of `g·c` within its dimension.
    pub position: Vec<Vec<usize>>,
    pub sets: Vec<FiniteGSet>,
    /// `differentials[n]: C_n → C_{n-1}`, for `n ≥ 1`; entry 0 is an empty `0×|X_0|` map.
    pub differentials: Vec<Matrix>,
}

impl EquivariantCellComplex {
    pub fn group(&self) -> Dihedral {
        self.group
    }

    /// The `i` of `γ_i`, if the complex carries one.
    pub fn gamma(&self) -> Option<u32> {
        self.gamma
    }

    /// `ζ_i = ζ^j` with `ij ≡ 1 mod p`; plain `ζ` when no `γ_i` is involved.
    pub fn rotation(&self) -> GroupElement {
        let j = self.gamma.map(|i| self.group.inverse_mod_p(i).expect("validated at construction"));
        self.group.zeta().pow(j.unwrap_or(1) as i64)
    }

    pub fn cells(&self) -> &[OrbitCell] {
        &self.cells
    }

    pub fn boundary(&self, cell: usize) -> &[Term] {
        &self.boundary[cell]
    }

    /// Mutable access for fault injection in tests and experiments.
    pub fn boundary_mut(&mut self, cell: usize) -> &mut Vec<Term> {
        &mut self.boundary[cell]
    }

    pub fn basepoint(&self) -> Option<usize> {
        self.basepoint
    }

    pub fn is_based(&self) -> bool {
        self.basepoint.is_some()
    }

    pub fn dimension(&self) -> usize {
        self.cells.iter().map(|c| c.dim).max().unwrap_or(0)
    }

    pub fn find(&self, kind: &CellKind) -> Option<usize> {
        self.cells.iter().position(|c| &c.kind == kind)
    }

    /// `F_hi / F_{lo−1}`: the cells with filtration in `lo..=hi`, with everything below
    /// collapsed onto a fresh basepoint. The old basepoint is dropped.
    pub fn filtration_quotient(&self, lo: usize, hi: usize) -> Result<EquivariantCellComplex> {
        let mut b = Builder::new(self.group);
        let base = b.cell(CellKind::Fixed(FixedLabel::Base), 0, self.group.whole(), 0);
        let mut index = vec![None; self.cells.len()];
        for (c, cell) in self.cells.iter().enumerate() {
            if Some(c) != self.basepoint && (lo..=hi).contains(&cell.filtration) {
                index[c] = Some(b.cell(cell.kind.clone(), cell.dim, cell.isotropy, cell.filtration));
            }
        }
        for (c, cell) in self.cells.iter().enumerate() {
            let Some(source) = index[c] else { continue };
            for t in &self.boundary[c] {
                if self.cells[t.target].filtration > hi {
                    return Err(Error::Validation(format!("cell {} meets higher filtration {}", cell.kind, self.cells[t.target].kind)));
                }
                match index[t.target] {
                    Some(target) => b.term(source, t.coeff, t.element, target),
                    None if cell.dim == 1 => b.term(source, t.coeff, self.group.identity(), base),
                    None => {}
                }
            }
        }
        Ok(b.finish(self.gamma, Some(base)))
    }

    /// Coset representatives of `G/H` in the order `ζ_i^r` then `τζ_i^r`, first hit wins.
    pub fn transversal(&self, h: &Subgroup) -> Vec<GroupElement> {
        let z = self.rotation();
        let p = self.group.p() as i64;
        let candidates = (0..p).map(|r| z.pow(r)).chain((0..p).map(|r| self.group.tau() * z.pow(r)));
        let mut reps: Vec<GroupElement> = Vec::new();
        for g in candidates {
            if !reps.iter().any(|r| h.contains(r.inverse() * g)) {
                reps.push(g);
            }
        }
        reps
    }

    pub fn expand(&self) -> Expansion {
        let top = self.dimension();
        let mut cells = vec![Vec::new(); top + 1];
        let mut position = vec![vec![0; self.group.order()]; self.cells.len()];
        for (c, cell) in self.cells.iter().enumerate() {
            let reps = self.transversal(&cell.isotropy);
            let dim = &mut cells[cell.dim];
            for x in &reps {
                let slot = dim.len();
                for h in cell.isotropy.elements() {
                    position[c][(*x * h).index()] = slot;
                }
                dim.push((c, *x));
            }
        }
        let sets = cells
            .iter()
            .map(|dim| {
                FiniteGSet::from_fn(self.group, dim.len(), |g, s| {
                    let (c, x) = dim[s];
                    position[c][(g * x).index()]
                })
                .expect("orbit expansion is a G-set")
            })
            .collect();
        let mut differentials = vec![Matrix::zeros(0, cells[0].len())];
        for n in 1..=top {
            let mut d = Matrix::zeros(cells[n - 1].len(), cells[n].len());
            for (col, &(c, x)) in cells[n].iter().enumerate() {
                for t in &self.boundary[c] {
                    d.bump(position[t.target][(x * t.element).index()], col, t.coeff);
                }
            }
            differentials.push(d);
        }
        Expansion { cells, position, sets, differentials }
    }

    /// Checks the structural invariants. Never fails; problems are listed in the report.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        for (c, cell) in self.cells.iter().enumerate() {
            for t in &self.boundary[c] {
                if t.coeff.abs() != 1 {
                    report.regularity.push(format!("{} has coefficient {} on {}", cell.kind, t.coeff, self.cells[t.target].kind));
                }
                let fixed = &self.cells[t.target].isotropy;
                if cell.isotropy.elements().any(|h| !fixed.contains(t.element.inverse() * h * t.element)) {
                    report.equivariance.push(format!("{} is not fixed by the isotropy of {}", self.cells[t.target].kind, cell.kind));
                }
                if self.cells[t.target].dim + 1 != cell.dim {
                    report.dimensions.push(format!("{} (dim {}) meets {} (dim {})", cell.kind, cell.dim, self.cells[t.target].kind, self.cells[t.target].dim));
                }
            }
        }
        if !report.dimensions.is_empty() {
            return report;
        }
        let ex = self.expand();
        for n in 2..ex.differentials.len() {
            let dd = ex.differentials[n - 1].mul(&ex.differentials[n]).expect("shapes agree");
            for col in 0..dd.cols() {
                if let Some(row) = (0..dd.rows()).find(|&r| dd[(r, col)] != 0) {
                    let (c, x) = ex.cells[n][col];
                    let (t, y) = ex.cells[n - 2][row];
                    report.d_squared.push(format!("d(d({x}.{})) has {} on {y}.{}", self.cells[c].kind, dd[(row, col)], self.cells[t].kind));
                }
            }
        }
        for (n, d) in ex.differentials.iter().enumerate().skip(1) {
            for col in 0..d.cols() {
                for row in 0..d.rows() {
                    if d[(row, col)].abs() > 1 {
                        let (c, x) = ex.cells[n][col];
                        report.regularity.push(format!("{x}.{} has incidence {} after aggregation", self.cells[c].kind, d[(row, col)]));
                    }
                }
                for g in self.group.elements() {
                    let moved = ex.sets[n].act(g, col);
                    let ok = (0..d.rows()).all(|row| d[(ex.sets[n - 1].act(g, row), moved)] == d[(row, col)]);
                    if !ok {
                        let (c, x) = ex.cells[n][col];
                        report.equivariance.push(format!("d({g}.{x}.{}) differs from {g}.d(...)", self.cells[c].kind));
                        break;
                    }
                }
            }
        }
        report.euler_characteristic = ex.cells.iter().enumerate().map(|(n, v)| if n % 2 == 0 { v.len() as i64 } else { -(v.len() as i64) }).sum();
        report
    }

    /// The differential with group elements written as powers of `ζ_i` and `τ`.
    ///
    /// For orbit spheres this table does not depend on `i`.
    pub fn periodicity_table(&self) -> Vec<String> {
        let i = self.gamma.unwrap_or(1) as u64;
        let p = self.group.p() as u64;
        let word = |g: GroupElement| {
            // ζ^a = ζ_i^{a·i}
            let a = g.rot() as u64 * i % p;
            let t = if g.flip() { "t" } else { "" };
            match a {
                0 if t.is_empty() => "1".to_string(),
                0 => t.to_string(),
                1 => format!("zi{t}"),
                _ => format!("zi^{a}{t}"),
            }
        };
        let mut out = Vec::new();
        for (c, cell) in self.cells.iter().enumerate() {
            let terms: Vec<String> = self.boundary[c].iter().map(|t| format!("{:+}*{}*{}", t.coeff, word(t.element), self.cells[t.target].kind)).collect();
            out.push(format!("d{} = {}", cell.kind, if terms.is_empty() { "0".into() } else { terms.join(" ") }));
        }
        out
    }

    /// Text dump: one cell per line, then one boundary term per line.
    pub fn dump_text(&self) -> String {
        let mut s = String::new();
        for (c, cell) in self.cells.iter().enumerate() {
            let base = if Some(c) == self.basepoint { " basepoint" } else { "" };
            s.push_str(&format!("cell {c} {} dim {} isotropy {} filtration {}{base}\n", cell.kind, cell.dim, cell.isotropy, cell.filtration));
        }
        for (c, terms) in self.boundary.iter().enumerate() {
            for t in terms {
                s.push_str(&format!("d {c} {:+} {} {}\n", t.coeff, t.element, t.target));
            }
        }
        s
    }

    pub fn dump_json(&self) -> Value {
        let cells: Vec<Value> = self
            .cells
            .iter()
            .map(|c| json!({"kind": c.kind.to_string(), "dim": c.dim, "isotropy": c.isotropy.class().to_string(), "filtration": c.filtration}))
            .collect();
        let differential: Vec<Value> =
            self.boundary.iter().enumerate().flat_map(|(c, ts)| ts.iter().map(move |t| json!([c, t.coeff, t.element.to_string(), t.target]))).collect();
        json!({"p": self.group.p(), "gamma": self.gamma, "basepoint": self.basepoint, "cells": cells, "differential": differential})
    }
}

/// Outcome of [`EquivariantCellComplex::validate`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub d_squared: Vec<String>,
    pub equivariance: Vec<String>,
    pub regularity: Vec<String>,
    pub dimensions: Vec<String>,
    pub euler_characteristic: i64,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.d_squared.is_empty() && self.equivariance.is_empty() && self.regularity.is_empty() && self.dimensions.is_empty()
    }

    pub fn problems(&self) -> Vec<String> {
        let tagged = |tag: &str, v: &[String]| v.iter().map(|s| format!("{tag}: {s}")).collect::<Vec<_>>();
        [
            tagged("d^2", &self.d_squared),
            tagged("equivariance", &self.equivariance),
            tagged("regularity", &self.regularity),
            tagged("dimension", &self.dimensions),
        ]
        .concat()
    }
}

struct Builder {
    group: Dihedral,
    cells: Vec<OrbitCell>,
    boundary: Vec<Vec<Term>>,
}

impl Builder {
    fn new(group: Dihedral) -> Self {
        Self { group, cells: Vec::new(), boundary: Vec::new() }
    }

    fn cell(&mut self, kind: CellKind, dim: usize, isotropy: Subgroup, filtration: usize) -> usize {
        self.cells.push(OrbitCell { kind, dim, isotropy, filtration });
        self.boundary.push(Vec::new());
        self.cells.len() - 1
    }

    fn term(&mut self, source: usize, coeff: i64, element: GroupElement, target: usize) {
        self.boundary[source].push(Term { coeff, element, target });
    }

    fn finish(self, gamma: Option<u32>, basepoint: Option<usize>) -> EquivariantCellComplex {
        EquivariantCellComplex { group: self.group, gamma, cells: self.cells, boundary: self.boundary, basepoint }
    }
}

fn sign(n: usize) -> i64 {
    if n.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// The orbit cells `a_{k,ℓ}`, `b_{k,ℓ}`, `c_k` of the unit sphere `S(mγ_i)`.
pub fn build_orbit_sphere(p: u32, i: u32, m: usize) -> Result<EquivariantCellComplex> {
    let group = Dihedral::new(p)?;
    if i < 1 || i > group.half() {
        return Err(Error::OutOfRange(format!("gamma index {i} outside 1..={} for p = {p}", group.half())));
    }
    if m < 1 {
        return Err(Error::OutOfRange("m must be at least 1".into()));
    }
    let j = group.inverse_mod_p(i)?;
    let z = group.zeta().pow(j as i64);
    let e = group.identity();
    let tau = group.tau();
    let h = group.half() as i64;
    let g = z.pow(h + 1);
    let refl = group.reflection(0);
    let free = group.trivial_subgroup();

    let mut b = Builder::new(group);
    let mut a_idx = HashMap::new();
    let mut b_idx = HashMap::new();
    let mut c_idx = HashMap::new();
    for k in 1..=m {
        for l in 0..k {
            let iso = if l == 0 { refl } else { free };
            a_idx.insert((k, l), b.cell(CellKind::A { k, l }, k + l - 1, iso, 2 * k - 2));
        }
    }
    for k in 1..=m {
        for l in 0..k {
            let iso = if l == 0 { refl } else { free };
            b_idx.insert((k, l), b.cell(CellKind::B { k, l }, k + l - 1, iso, 2 * k - 1));
        }
    }
    for k in 1..=m {
        c_idx.insert(k, b.cell(CellKind::C { k }, 2 * k - 1, free, 2 * k - 1));
    }
    let a = |k, l| a_idx[&(k, l)];
    let bb = |k, l| b_idx[&(k, l)];
    let c = |k| c_idx[&k];

    // dc_1 = ζ_i^{(p+1)/2} b_{1,0} − a_{1,0}
    b.term(c(1), 1, g, bb(1, 0));
    b.term(c(1), -1, e, a(1, 0));
    for k in 2..=m {
        for x in [a(k, 0), bb(k, 0)] {
            b.term(x, 1, e, a(k - 1, 0));
            b.term(x, -1, e, bb(k - 1, 0));
        }
        for (x, own) in [(a(k, k - 1), &a as &dyn Fn(usize, usize) -> usize), (bb(k, k - 1), &bb)] {
            if k == 2 {
                b.term(x, -1, e, own(2, 0));
            } else {
                b.term(x, -1, e, own(k, k - 2));
                b.term(x, sign(k - 1), tau, own(k, k - 2));
            }
            // −(1+σ)c_{k−1} + (−1)^{k−2} στ c_{k−1}
            for r in 0..=h {
                b.term(x, -1, z.pow(r), c(k - 1));
            }
            for r in 1..=h {
                b.term(x, sign(k - 2), z.pow(r) * tau, c(k - 1));
            }
        }
        for (x, own) in [(a(k, 1), &a as &dyn Fn(usize, usize) -> usize), (bb(k, 1), &bb)] {
            if k > 2 {
                b.term(x, 1, e, a(k - 1, 1));
                b.term(x, -1, e, bb(k - 1, 1));
                b.term(x, sign(k - 1), e, own(k, 0));
            }
        }
        for l in 2..k.saturating_sub(1) {
            for (x, own) in [(a(k, l), &a as &dyn Fn(usize, usize) -> usize), (bb(k, l), &bb)] {
                b.term(x, 1, e, a(k - 1, l));
                b.term(x, -1, e, bb(k - 1, l));
                b.term(x, sign(k - l), e, own(k, l - 1));
                b.term(x, sign(k - 1), tau, own(k, l - 1));
            }
        }
        // dc_k = −a_{k,k−1} + (−1)^k τ a_{k,k−1} + g b_{k,k−1} + (−1)^{k−1} gτ b_{k,k−1}
        b.term(c(k), -1, e, a(k, k - 1));
        b.term(c(k), sign(k), tau, a(k, k - 1));
        b.term(c(k), 1, g, bb(k, k - 1));
        b.term(c(k), sign(k - 1), g * tau, bb(k, k - 1));
    }
    Ok(b.finish(Some(i), None))
}

/// `S^{ℓα}` for `ℓ ≥ 0`: fixed points `s₊` (basepoint) and `s₋`, and one `G/⟨ζ⟩`-cell per
/// dimension `1..=ℓ`.
pub fn build_sign_sphere(p: u32, l: i64) -> Result<EquivariantCellComplex> {
    let group = Dihedral::new(p)?;
    if l < 0 {
        return Err(Error::NoChainModel(format!("S^({l}a) is a desuspension and has no cell structure")));
    }
    let whole = group.whole();
    let rot = group.rotations();
    let mut b = Builder::new(group);
    let plus = b.cell(CellKind::Fixed(FixedLabel::Plus), 0, whole, 0);
    let minus = b.cell(CellKind::Fixed(FixedLabel::Minus), 0, whole, 0);
    let mut prev = None;
    for d in 1..=l as usize {
        let u = b.cell(CellKind::Sign { d }, d, rot, 0);
        match prev {
            None => {
                b.term(u, 1, group.identity(), minus);
                b.term(u, -1, group.identity(), plus);
            }
            Some(v) => {
                b.term(u, 1, group.identity(), v);
                b.term(u, sign(d - 1), group.tau(), v);
            }
        }
        prev = Some(u);
    }
    Ok(b.finish(None, Some(plus)))
}

/// Unreduced suspension, based at the south pole.
pub fn suspend(x: &EquivariantCellComplex) -> EquivariantCellComplex {
    let group = x.group;
    let whole = group.whole();
    let mut b = Builder::new(group);
    let south = b.cell(CellKind::Fixed(FixedLabel::South), 0, whole, 0);
    let north = b.cell(CellKind::Fixed(FixedLabel::North), 0, whole, 0);
    let offset = b.cells.len();
    for cell in &x.cells {
        b.cell(CellKind::Suspension(Box::new(cell.kind.clone())), cell.dim + 1, cell.isotropy, cell.filtration);
    }
    for (c, cell) in x.cells.iter().enumerate() {
        if cell.dim == 0 {
            b.term(offset + c, 1, group.identity(), north);
            b.term(offset + c, -1, group.identity(), south);
        } else {
            for t in &x.boundary[c] {
                b.term(offset + c, -t.coeff, t.element, offset + t.target);
            }
        }
    }
    b.finish(x.gamma, Some(south))
}

/// `X₊`: a disjoint fixed basepoint, placed first.
pub fn plus(x: &EquivariantCellComplex) -> EquivariantCellComplex {
    let group = x.group;
    let mut b = Builder::new(group);
    b.cell(CellKind::Fixed(FixedLabel::Base), 0, group.whole(), 0);
    for cell in &x.cells {
        b.cells.push(cell.clone());
    }
    for terms in &x.boundary {
        b.boundary.push(terms.iter().map(|t| Term { target: t.target + 1, ..*t }).collect());
    }
    b.finish(x.gamma, Some(0))
}

/// Smash product of based complexes. Product cells get the pointwise isotropy and the
/// boundary `d(a×b) = da×b + (−1)^{|a|} a×db`; anything landing in the wedge collapses
/// to the new basepoint.
pub fn smash(x: &EquivariantCellComplex, y: &EquivariantCellComplex) -> Result<EquivariantCellComplex> {
    if x.group != y.group {
        return Err(Error::ParameterMismatch("smash of complexes for different groups".into()));
    }
    let (Some(bx), Some(by)) = (x.basepoint, y.basepoint) else {
        return Err(Error::Unbased("smash needs based complexes; adjoin a basepoint with plus() first".into()));
    };
    let group = x.group;
    let gamma = x.gamma.or(y.gamma);
    let mut b = Builder::new(group);
    let base = b.cell(CellKind::Fixed(FixedLabel::Base), 0, group.whole(), 0);
    // (left cell, left element, right cell, right element) of each orbit representative.
    let mut reps: Vec<(usize, GroupElement, usize, GroupElement)> = Vec::new();
    // Non-equivariant pair (left cell, left coset, right cell, right coset) → (orbit cell, g).
    let mut lookup: HashMap<(usize, u64, usize, u64), (usize, GroupElement)> = HashMap::new();
    let coset = |cell: &OrbitCell, g: GroupElement| cell.isotropy.elements().map(|h| 1u64 << (g * h).index()).fold(0, |a, b| a | b);
    for (i, ci) in x.cells.iter().enumerate() {
        if i == bx {
            continue;
        }
        for (j, cj) in y.cells.iter().enumerate() {
            if j == by {
                continue;
            }
            for dc in group.double_cosets(&ci.isotropy, &cj.isotropy)? {
                let t = dc.representative;
                let stab = ci.isotropy.intersect(&cj.isotropy.conjugate(t));
                // Move the representative so its isotropy is a canonical subgroup.
                let g = stab.conjugator_from_canonical().inverse();
                let iso = stab.conjugate(g);
                let (lx, ly) = (g, g * t);
                let kind = CellKind::Smash { left: Box::new(ci.kind.clone()), x: lx, right: Box::new(cj.kind.clone()), y: ly };
                let idx = b.cell(kind, ci.dim + cj.dim, iso, ci.filtration + cj.filtration);
                for h in group.elements() {
                    lookup.entry((i, coset(ci, h * lx), j, coset(cj, h * ly))).or_insert((idx, h));
                }
                reps.push((i, lx, j, ly));
            }
        }
    }
    for (n, &(i, lx, j, ly)) in reps.iter().enumerate() {
        let source = n + 1;
        let dim = x.cells[i].dim + y.cells[j].dim;
        let add = |coeff: i64, ti: usize, gx: GroupElement, tj: usize, gy: GroupElement, b: &mut Builder| {
            if ti == bx || tj == by {
                if dim == 1 {
                    b.term(source, coeff, group.identity(), base);
                }
                return;
            }
            let (cell, h) = lookup[&(ti, coset(&x.cells[ti], gx), tj, coset(&y.cells[tj], gy))];
            b.term(source, coeff, h, cell);
        };
        for t in &x.boundary[i] {
            add(t.coeff, t.target, lx * t.element, j, ly, &mut b);
        }
        let s = sign(x.cells[i].dim);
        for t in &y.boundary[j] {
            add(s * t.coeff, i, lx, t.target, ly * t.element, &mut b);
        }
    }
    Ok(b.finish(gamma, Some(base)))
}

/// Cell model of `S^{ℓα+mγ_i}`.
pub fn sphere_model(p: u32, i: u32, l: i64, m: usize) -> Result<EquivariantCellComplex> {
    let s = build_sign_sphere(p, l)?;
    if m == 0 {
        return Ok(s);
    }
    smash(&s, &suspend(&build_orbit_sphere(p, i, m)?))
}

/// Cell model of `Σ^{ℓα} S(mγ_i)₊`.
pub fn orbit_space_model(p: u32, i: u32, l: i64, m: usize) -> Result<EquivariantCellComplex> {
    let s = build_sign_sphere(p, l)?;
    smash(&s, &plus(&build_orbit_sphere(p, i, m)?))
}

/// Canonical class of a cell's isotropy, for reporting.
pub fn isotropy_class(cell: &OrbitCell) -> SubgroupClass {
    cell.isotropy.class()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_orbit_sphere() {
        let x = build_orbit_sphere(3, 1, 1).unwrap();
        assert_eq!(x.cells().len(), 3);
        let c = x.find(&CellKind::C { k: 1 }).unwrap();
        let d = x.boundary(c);
        let g = Dihedral::new(3).unwrap().zeta().pow(2);
        assert_eq!(d[0], Term { coeff: 1, element: g, target: x.find(&CellKind::B { k: 1, l: 0 }).unwrap() });
        assert_eq!(d[1].coeff, -1);
        assert!(x.validate().is_ok());
    }

    #[test]
    fn cell_counts() {
        let x = build_orbit_sphere(3, 1, 2).unwrap();
        let ex = x.expand();
        let counts: Vec<usize> = ex.cells.iter().map(Vec::len).collect();
        assert_eq!(counts, vec![6, 12, 12, 6]);
        let r = x.validate();
        assert!(r.is_ok(), "{:?}", r.problems());
        assert_eq!(r.euler_characteristic, 0);
        for m in 1..=4 {
            let x = build_orbit_sphere(5, 2, m).unwrap();
            let count = |f: fn(&CellKind) -> bool| x.cells().iter().filter(|c| f(&c.kind)).count();
            assert_eq!(count(|k| matches!(k, CellKind::A { .. })), m * (m + 1) / 2);
            assert_eq!(count(|k| matches!(k, CellKind::B { .. })), m * (m + 1) / 2);
            assert_eq!(count(|k| matches!(k, CellKind::C { .. })), m);
        }
    }

    #[test]
    fn all_constructions_validate() {
        for p in [3, 5, 7] {
            for m in 1..=4 {
                for i in 1..=(p - 1) / 2 {
                    let x = build_orbit_sphere(p, i, m).unwrap();
                    let r = x.validate();
                    assert!(r.is_ok(), "p={p} i={i} m={m}: {:?}", r.problems());
                    assert_eq!(r.euler_characteristic, 0);
                }
            }
            for l in 0..=5 {
                assert!(build_sign_sphere(p, l).unwrap().validate().is_ok());
            }
        }
        let s = sphere_model(3, 1, 2, 2).unwrap();
        let r = s.validate();
        assert!(r.is_ok(), "{:?}", r.problems());
        assert!(orbit_space_model(5, 2, 3, 2).unwrap().validate().is_ok());
    }

    #[test]
    fn filtration_quotients_validate() {
        let x = orbit_space_model(5, 1, 2, 3).unwrap();
        for lo in 0..6 {
            for hi in lo..6 {
                let q = x.filtration_quotient(lo, hi).unwrap();
                assert!(q.validate().is_ok(), "{lo}..{hi}: {:?}", q.validate().problems());
            }
        }
        assert_eq!(x.filtration_quotient(0, 5).unwrap().cells().len(), x.cells().len());
        assert!(x.filtration_quotient(1, 1).unwrap().cells().iter().all(|c| c.filtration == 1 || c.kind == CellKind::Fixed(FixedLabel::Base)));
    }

    #[test]
    fn injected_sign_fault_is_reported() {
        let mut x = build_orbit_sphere(5, 1, 2).unwrap();
        let a21 = x.find(&CellKind::A { k: 2, l: 1 }).unwrap();
        x.boundary_mut(a21)[0].coeff = 1;
        let r = x.validate();
        assert!(!r.d_squared.is_empty());
        assert!(r.d_squared[0].contains("a2,1"), "{:?}", r.d_squared);
    }

    #[test]
    fn tables_agree_across_gamma() {
        for p in [5, 7] {
            for m in 1..=3 {
                let base = build_orbit_sphere(p, 1, m).unwrap();
                for i in 2..=(p - 1) / 2 {
                    let x = build_orbit_sphere(p, i, m).unwrap();
                    assert_eq!(x.periodicity_table(), base.periodicity_table());
                    assert_eq!(x.expand().differentials, base.expand().differentials);
                }
            }
        }
    }

    #[test]
    fn bad_parameters() {
        assert!(matches!(build_orbit_sphere(5, 3, 1), Err(Error::OutOfRange(_))));
        assert!(matches!(build_orbit_sphere(5, 1, 0), Err(Error::OutOfRange(_))));
        assert!(matches!(build_sign_sphere(5, -1), Err(Error::NoChainModel(_))));
        let x = build_orbit_sphere(3, 1, 1).unwrap();
        assert!(matches!(smash(&x, &x), Err(Error::Unbased(_))));
    }

    #[test]
    fn smash_with_s0_is_identity_on_cells() {
        let x = suspend(&build_orbit_sphere(5, 1, 2).unwrap());
        let s0 = build_sign_sphere(5, 0).unwrap();
        let y = smash(&s0, &x).unwrap();
        assert_eq!(y.cells().len(), x.cells().len());
        let ex = x.expand();
        let ey = y.expand();
        for n in 1..ex.differentials.len() {
            // The south pole of x and the collapsed basepoint of y sit in different slots.
            let (a, b) = (&ex.differentials[n], &ey.differentials[n]);
            assert_eq!((a.rows(), a.cols()), (b.rows(), b.cols()));
        }
        assert!(y.validate().is_ok());
    }

    #[test]
    fn product_isotropy_is_canonical() {
        let x = sphere_model(5, 1, 2, 2).unwrap();
        for c in x.cells() {
            assert_eq!(c.isotropy, x.group().canonical(c.isotropy.class()), "{}", c.kind);
        }
        let json = x.dump_json();
        assert_eq!(json["cells"].as_array().unwrap().len(), x.cells().len());
    }
}
