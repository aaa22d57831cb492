//! The spectral sequence of the skeletal filtration of `Σ^{ℓα} S(mγ)₊`.
//!
//! Column `2k−2` is the quotient by the `a_{k,*}` cells and column `2k−1` the one by the
//! `b_{k,*}, c_k` cells. An entry of (co)homological degree `n` in column `s` sits at
//! `(s, n − ℓ − s)`. The only nonzero first differentials join column `2k` to `2k−1`
//! (homology) or `2k−1` to `2k` (cohomology) and connect two copies of the same group.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::abelian::{group_from_diagonal, FGAbelianGroup, GradedGroup};
use crate::burnside::Coefficients;
use crate::closed_form::{b_graded, b_group, c_graded, script_b};
use crate::cw::orbit_space_model;
use crate::error::{Error, Result};
use crate::group::{Dihedral, SubgroupClass};
use crate::homology::{bredon, Theory};
use crate::matrix::{invariant_factors, Matrix};

pub type Position = (i64, i64);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DifferentialKind {
    /// An isomorphism between equal groups.
    Iso,
    /// Multiplication by `p` on `Z`.
    MultP,
    /// `1 ↦ 1 + h·t₂`, `t₂ ↦ p·t₂` on `A(Z/2)`, or its transpose, with `h = (p−1)/2`.
    BurnsideBlock,
    Zero,
}

impl fmt::Display for DifferentialKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DifferentialKind::Iso => "iso",
            DifferentialKind::MultP => "mult-p",
            DifferentialKind::BurnsideBlock => "burnside-p-block",
            DifferentialKind::Zero => "zero",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Differential {
    pub source: Position,
    pub target: Position,
    pub kind: DifferentialKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralPage {
    pub page: usize,
    pub p: u32,
    pub l: i64,
    pub m: i64,
    pub coeff: Coefficients,
    pub theory: Theory,
    pub entries: BTreeMap<Position, FGAbelianGroup>,
    pub differentials: Vec<Differential>,
}

/// What a summand of a column is, which fixes the first differential leaving it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Role {
    /// The `Z` in degree `j` of `B_j`, `j` even.
    Top,
    /// `J` or `I` in degree 0 of `𝓑_j`, `j ≠ 0`.
    Bottom,
    /// `A(Z/2)` in degree 0 of `𝓑_0`.
    Block,
    Torsion,
}

fn role(coeff: Coefficients, j: i64, n: i64) -> Role {
    match (coeff, n) {
        (Coefficients::BurnsideA, 0) if j == 0 => Role::Block,
        (Coefficients::BurnsideA, 0) => Role::Bottom,
        _ if n == j && j % 2 == 0 => Role::Top,
        _ => Role::Torsion,
    }
}

fn column_group(coeff: Coefficients, j: i64, n: i64, theory: Theory) -> FGAbelianGroup {
    match coeff {
        Coefficients::ConstantZ => b_group(j, n, theory),
        Coefficients::BurnsideA => script_b(j, n, theory),
    }
}

/// The matrix of a first differential, acting on column vectors.
fn matrix_of(kind: DifferentialKind, p: u32, theory: Theory) -> Option<Matrix> {
    let p = p as i64;
    match kind {
        DifferentialKind::MultP => Some(Matrix::from_rows(&[vec![p]])),
        DifferentialKind::BurnsideBlock => {
            let h = (p - 1) / 2;
            let block = Matrix::from_rows(&[vec![1, 0], vec![h, p]]);
            Some(match theory {
                Theory::Homology => block,
                Theory::Cohomology => block.transpose(),
            })
        }
        _ => None,
    }
}

fn kernel_cokernel(kind: DifferentialKind, group: &FGAbelianGroup, p: u32, theory: Theory) -> Result<(FGAbelianGroup, FGAbelianGroup)> {
    match kind {
        DifferentialKind::Iso => Ok((FGAbelianGroup::zero(), FGAbelianGroup::zero())),
        DifferentialKind::Zero => Ok((group.clone(), group.clone())),
        _ => {
            let m = matrix_of(kind, p, theory).expect("free differential");
            let f = invariant_factors(&m)?;
            Ok((FGAbelianGroup::free(m.cols() - f.len()), group_from_diagonal(m.rows() - f.len(), &f)))
        }
    }
}

/// Whether some homomorphism `a → b` is nonzero.
pub fn hom_nonzero(a: &FGAbelianGroup, b: &FGAbelianGroup) -> bool {
    if a.is_zero() || b.is_zero() {
        return false;
    }
    if a.free_rank() > 0 {
        return true;
    }
    a.invariant_factors().iter().any(|&x| b.invariant_factors().iter().any(|&y| x.gcd(&y) > 1))
}

/// `E¹` for `Σ^{ℓα} S(mγ)₊` at the top level, with its first differentials.
pub fn build_e1(p: u32, l: i64, m: i64, coeff: Coefficients, theory: Theory) -> Result<SpectralPage> {
    Dihedral::new(p)?;
    if m < 1 {
        return Err(Error::OutOfRange(format!("the filtration needs m ≥ 1, got {m}")));
    }
    let mut entries = BTreeMap::new();
    let mut roles = BTreeMap::new();
    for k in 1..=m {
        for (s, j) in [(2 * k - 2, k - 1 + l), (2 * k - 1, k + l)] {
            let r = j.abs() + 1;
            for n in -r..=r {
                let g = column_group(coeff, j, n, theory);
                if g.is_zero() {
                    continue;
                }
                let pos = (s, n + (k - 1) - l - s);
                entries.insert(pos, g);
                roles.insert(pos, role(coeff, j, n));
            }
        }
    }
    let mut differentials = Vec::new();
    for k in 1..m {
        let (from, to) = match theory {
            Theory::Homology => (2 * k, 2 * k - 1),
            Theory::Cohomology => (2 * k - 1, 2 * k),
        };
        for (&(s, t), g) in entries.range((from, i64::MIN)..=(from, i64::MAX)) {
            let target = (to, t);
            if entries.get(&target) != Some(g) {
                return Err(Error::Validation(format!("no matching partner for ({s},{t}) in column {to}")));
            }
            let kind = match roles[&(s, t)] {
                Role::Top => DifferentialKind::MultP,
                Role::Block => DifferentialKind::BurnsideBlock,
                Role::Bottom | Role::Torsion => DifferentialKind::Iso,
            };
            differentials.push(Differential { source: (s, t), target, kind });
        }
    }
    Ok(SpectralPage { page: 1, p, l, m, coeff, theory, entries, differentials })
}

impl SpectralPage {
    /// Total (co)homological degree of a position, undoing the `ℓ` shift.
    pub fn degree(&self, (s, t): Position) -> i64 {
        s + t + self.l
    }

    /// `(r, source, target)` for every `d_r`, `r ≥ page + 1`, that the groups would allow
    /// to be nonzero. Differentials on this page are excluded.
    pub fn possible_higher_differentials(&self) -> Vec<(usize, Position, Position)> {
        let width = 2 * self.m;
        let mut out = Vec::new();
        for r in self.page.max(1) + 1..=width as usize {
            let r = r as i64;
            for (&(s, t), a) in &self.entries {
                let target = match self.theory {
                    Theory::Homology => (s - r, t + r - 1),
                    Theory::Cohomology => (s + r, t - r + 1),
                };
                if let Some(b) = self.entries.get(&target) {
                    if hom_nonzero(a, b) {
                        out.push((r as usize, (s, t), target));
                    }
                }
            }
        }
        out
    }

    pub fn label(&self) -> String {
        let e = match self.theory {
            Theory::Homology => format!("E^{}", self.page),
            Theory::Cohomology => format!("E_{}", self.page),
        };
        format!("{e} {} p={} l={} m={} coefficients={}", self.theory, self.p, self.l, self.m, self.coeff)
    }
}

/// Takes homology of the first differentials. The sequence collapses there, so the
/// result carries no differentials; [`SpectralPage::possible_higher_differentials`] lists
/// the positions where a later differential would have room to act.
pub fn turn_page(page: &SpectralPage) -> Result<SpectralPage> {
    if page.page != 1 {
        return Err(Error::Validation(format!("only E1 is turned, got page {}", page.page)));
    }
    let mut entries = page.entries.clone();
    let mut touched = BTreeSet::new();
    for d in &page.differentials {
        if !touched.insert(d.source) || !touched.insert(d.target) {
            return Err(Error::Validation(format!("position used by two differentials near {:?}", d.source)));
        }
        let Some(g) = page.entries.get(&d.source) else {
            return Err(Error::Validation(format!("differential leaves the empty position {:?}", d.source)));
        };
        if page.entries.get(&d.target) != Some(g) {
            return Err(Error::Validation(format!("differential {:?} -> {:?} joins different groups", d.source, d.target)));
        }
        let (kernel, cokernel) = kernel_cokernel(d.kind, g, page.p, page.theory)?;
        entries.insert(d.source, kernel);
        entries.insert(d.target, cokernel);
    }
    entries.retain(|_, g| !g.is_zero());
    Ok(SpectralPage { page: 2, entries, differentials: Vec::new(), ..page.clone() })
}

/// Which column family an entry belongs to: the first column, the last, or the middle.
fn family(page: &SpectralPage, s: i64) -> usize {
    if s == 0 {
        0
    } else if s == 2 * page.m - 1 {
        2
    } else {
        1
    }
}

/// Reads off the abutment from a page past all differentials. A total degree may collect
/// one entry per column family; more would leave an extension undecided.
pub fn assemble(page: &SpectralPage) -> Result<GradedGroup> {
    if page.page < 2 || !page.differentials.is_empty() {
        return Err(Error::Validation("assemble needs a page past the first differentials".into()));
    }
    let mut seen: BTreeMap<(usize, i64), Position> = BTreeMap::new();
    let mut out = GradedGroup::new();
    for (&pos, g) in &page.entries {
        let n = page.degree(pos);
        if let Some(other) = seen.insert((family(page, pos.0), n), pos) {
            return Err(Error::Extension { degree: n, detail: format!("entries at {other:?} and {pos:?}") });
        }
        out.add(n, g);
    }
    Ok(out)
}

/// `E²` of the filtration.
pub fn e2(p: u32, l: i64, m: i64, coeff: Coefficients, theory: Theory) -> Result<SpectralPage> {
    turn_page(&build_e1(p, l, m, coeff, theory)?)
}

/// (Co)homology of `Σ^{ℓα} S(mγ)₊` through the spectral sequence.
pub fn orbit_space_spectral(p: u32, l: i64, m: i64, coeff: Coefficients, theory: Theory) -> Result<GradedGroup> {
    assemble(&e2(p, l, m, coeff, theory)?)
}

/// Degreewise difference `c − b` for `b` a subgroup or quotient of `c` with the same
/// torsion pattern, as in `0 → 𝓑 → 𝓒 → 𝓑 → 0`.
fn complement(c: &GradedGroup, b: &GradedGroup) -> Result<GradedGroup> {
    let mut out = GradedGroup::new();
    let degrees: BTreeSet<i64> = c.degrees().chain(b.degrees()).collect();
    for n in degrees {
        let (cn, bn) = (c.get(n), b.get(n));
        let mut torsion: Vec<u64> = cn.invariant_factors().to_vec();
        for d in bn.invariant_factors() {
            let Some(i) = torsion.iter().position(|x| x == d) else {
                return Err(Error::Validation(format!("degree {n}: {bn} does not sit inside {cn}")));
            };
            torsion.remove(i);
        }
        let rank = cn.free_rank().checked_sub(bn.free_rank()).ok_or_else(|| Error::Validation(format!("degree {n}: rank of {bn} exceeds {cn}")))?;
        out.set(n, FGAbelianGroup::from_cyclic_orders(std::iter::repeat_n(0, rank).chain(torsion)));
    }
    Ok(out)
}

/// (Co)homology of `S^{ℓα+mγ}` from the cofiber sequence
/// `Σ^{ℓα} S(mγ)₊ → S^{ℓα} → S^{ℓα+mγ}`. Only the first column maps nontrivially:
/// by the transfer (constant, homology), an isomorphism (constant, cohomology), the
/// induction `𝓑 → 𝓒` or the restriction `𝓒 → 𝓑` (Burnside). Extensions are taken split.
pub fn cofiber_assemble(p: u32, l: i64, m: i64, coeff: Coefficients, theory: Theory) -> Result<GradedGroup> {
    let page = e2(p, l, m, coeff, theory)?;
    assemble(&page)?;
    let mut bottom = GradedGroup::new();
    let mut rest = GradedGroup::new();
    for (&pos, g) in &page.entries {
        let n = page.degree(pos);
        if pos.0 == 0 {
            bottom.add(n, g);
        } else {
            rest.add(n, g);
        }
    }
    let from_map = match (coeff, theory) {
        (Coefficients::ConstantZ, Theory::Homology) => {
            // multiplication by p on each Z, invertible on the 2-torsion
            let mut coker = GradedGroup::new();
            for (n, g) in bottom.iter() {
                coker.set(n, FGAbelianGroup::from_cyclic_orders(std::iter::repeat_n(p as u64, g.free_rank())));
            }
            coker
        }
        (Coefficients::ConstantZ, Theory::Cohomology) => GradedGroup::new(),
        (Coefficients::BurnsideA, _) => {
            if bottom != b_graded(l, coeff, theory) {
                return Err(Error::Validation("first column is not the Z/2-level group".into()));
            }
            // cokernel of the induction, or kernel of the restriction
            complement(&c_graded(l, theory), &bottom)?
        }
    };
    Ok(from_map.direct_sum(&rest.shift(1)))
}

/// `E¹` computed from chains: the top-level (co)homology of each filtration quotient.
/// Needs `ℓ ≥ 0`.
pub fn chain_e1(p: u32, l: i64, m: i64, coeff: Coefficients, theory: Theory) -> Result<BTreeMap<Position, FGAbelianGroup>> {
    let x = orbit_space_model(p, 1, l, usize::try_from(m).map_err(|_| Error::OutOfRange(format!("m = {m}")))?)?;
    let mut out = BTreeMap::new();
    for s in 0..2 * m {
        let q = x.filtration_quotient(s as usize, s as usize)?;
        for (n, g) in bredon(&q, coeff, SubgroupClass::Whole, theory)?.iter() {
            if !g.is_zero() {
                out.insert((s, n - l - s), g.clone());
            }
        }
    }
    Ok(out)
}

/// Top-level (co)homology of the two-column quotient holding columns `2k−1` and `2k`,
/// graded by total degree. It must equal those two columns of `E²`.
pub fn chain_column_pair(p: u32, l: i64, m: i64, k: i64, coeff: Coefficients, theory: Theory) -> Result<GradedGroup> {
    let x = orbit_space_model(p, 1, l, usize::try_from(m).map_err(|_| Error::OutOfRange(format!("m = {m}")))?)?;
    let q = x.filtration_quotient((2 * k - 1) as usize, (2 * k) as usize)?;
    bredon(&q, coeff, SubgroupClass::Whole, theory)
}

/// Columns `lo..=hi` of a page, graded by total degree.
pub fn columns(page: &SpectralPage, lo: i64, hi: i64) -> GradedGroup {
    let mut out = GradedGroup::new();
    for (&pos, g) in &page.entries {
        if (lo..=hi).contains(&pos.0) {
            out.add(page.degree(pos), g);
        }
    }
    out
}

fn bounds(page: &SpectralPage) -> (i64, i64) {
    let lo = page.entries.keys().map(|k| k.1).min().unwrap_or(0).min(0);
    let hi = page.entries.keys().map(|k| k.1).max().unwrap_or(0).max(0);
    (lo, hi)
}

/// Plain-text chart, rows from the highest `t` down, zeros shown as `.`.
pub fn render_ascii(page: &SpectralPage) -> String {
    let (tlo, thi) = bounds(page);
    let width = page.entries.values().map(|g| g.to_string().len()).max().unwrap_or(1).max(3) + 1;
    let mut out = String::new();
    writeln!(out, "{}", page.label()).unwrap();
    let direction = match page.theory {
        Theory::Homology => "lowers",
        Theory::Cohomology => "raises",
    };
    writeln!(out, "(s,t) holds degree s+t+l; d{} {direction} s by {}", page.page, page.page).unwrap();
    for t in (tlo..=thi).rev() {
        write!(out, "{t:>4} |").unwrap();
        for s in 0..2 * page.m {
            let cell = page.entries.get(&(s, t)).map_or(".".to_string(), |g| g.to_string());
            write!(out, "{cell:>width$}").unwrap();
        }
        out.push('\n');
    }
    write!(out, "{:>4} +{}\n      ", "", "-".repeat(width * 2 * page.m as usize)).unwrap();
    for s in 0..2 * page.m {
        write!(out, "{s:>width$}").unwrap();
    }
    out.push('\n');
    for d in &page.differentials {
        writeln!(out, "d{}: ({},{}) -> ({},{}) {}", page.page, d.source.0, d.source.1, d.target.0, d.target.1, d.kind).unwrap();
    }
    out
}

pub fn to_json(page: &SpectralPage) -> Value {
    let entries: Vec<Value> = page
        .entries
        .iter()
        .map(|(&(s, t), g)| json!({"s": s, "t": t, "degree": page.degree((s, t)), "group": g.to_string(), "free_rank": g.free_rank(), "torsion": g.invariant_factors()}))
        .collect();
    let differentials: Vec<Value> = page
        .differentials
        .iter()
        .map(|d| json!({"source": [d.source.0, d.source.1], "target": [d.target.0, d.target.1], "kind": d.kind.to_string()}))
        .collect();
    json!({
        "page": page.page,
        "p": page.p,
        "l": page.l,
        "m": page.m,
        "coefficients": page.coeff.to_string(),
        "theory": page.theory.to_string(),
        "entries": entries,
        "differentials": differentials,
    })
}

/// Inverse of [`to_json`].
pub fn from_json(value: &Value) -> Result<SpectralPage> {
    let bad = |what: &str| Error::Parse(format!("spectral page JSON: bad or missing {what}"));
    let int = |v: &Value, what: &str| v.as_i64().ok_or_else(|| bad(what));
    let coeff = match value["coefficients"].as_str() {
        Some("constant-z") => Coefficients::ConstantZ,
        Some("burnside") => Coefficients::BurnsideA,
        _ => return Err(bad("coefficients")),
    };
    let theory = match value["theory"].as_str() {
        Some("homology") => Theory::Homology,
        Some("cohomology") => Theory::Cohomology,
        _ => return Err(bad("theory")),
    };
    let pos = |v: &Value| -> Result<Position> { Ok((int(&v[0], "position")?, int(&v[1], "position")?)) };
    let mut entries = BTreeMap::new();
    for e in value["entries"].as_array().ok_or_else(|| bad("entries"))? {
        let rank = e["free_rank"].as_u64().ok_or_else(|| bad("free_rank"))? as usize;
        let torsion =
            e["torsion"].as_array().ok_or_else(|| bad("torsion"))?.iter().map(|t| t.as_u64().ok_or_else(|| bad("torsion"))).collect::<Result<Vec<u64>>>()?;
        let group = FGAbelianGroup::from_cyclic_orders(std::iter::repeat_n(0, rank).chain(torsion));
        entries.insert((int(&e["s"], "s")?, int(&e["t"], "t")?), group);
    }
    let mut differentials = Vec::new();
    for d in value["differentials"].as_array().ok_or_else(|| bad("differentials"))? {
        let kind = match d["kind"].as_str() {
            Some("iso") => DifferentialKind::Iso,
            Some("mult-p") => DifferentialKind::MultP,
            Some("burnside-p-block") => DifferentialKind::BurnsideBlock,
            Some("zero") => DifferentialKind::Zero,
            _ => return Err(bad("differential kind")),
        };
        differentials.push(Differential { source: pos(&d["source"])?, target: pos(&d["target"])?, kind });
    }
    Ok(SpectralPage {
        page: value["page"].as_u64().ok_or_else(|| bad("page"))? as usize,
        p: value["p"].as_u64().ok_or_else(|| bad("p"))? as u32,
        l: int(&value["l"], "l")?,
        m: int(&value["m"], "m")?,
        coeff,
        theory,
        entries,
        differentials,
    })
}

pub fn render_svg(page: &SpectralPage) -> String {
    let (tlo, thi) = bounds(page);
    let (cw, ch, margin) = (64, 32, 40);
    let cols = 2 * page.m;
    let rows = thi - tlo + 1;
    let w = margin + cols * cw + 10;
    let h = margin + rows * ch + 30;
    let x = |s: i64| margin + s * cw + cw / 2;
    let y = |t: i64| 20 + (thi - t) * ch + ch / 2;
    let mut out = String::new();
    writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" font-family="monospace" font-size="12">"#).unwrap();
    writeln!(out, r#"<defs><marker id="arrow" markerWidth="8" markerHeight="8" refX="7" refY="4" orient="auto"><path d="M0,0 L8,4 L0,8 z"/></marker></defs>"#)
        .unwrap();
    writeln!(out, r#"<text x="4" y="14">{}</text>"#, page.label()).unwrap();
    for s in 0..cols {
        writeln!(out, r#"<text x="{}" y="{}" text-anchor="middle">{s}</text>"#, x(s), h - 8).unwrap();
    }
    for t in tlo..=thi {
        writeln!(out, r#"<text x="4" y="{}">{t}</text>"#, y(t) + 4).unwrap();
    }
    for (&(s, t), g) in &page.entries {
        writeln!(out, r#"<text x="{}" y="{}" text-anchor="middle">{g}</text>"#, x(s), y(t) + 4).unwrap();
    }
    for d in &page.differentials {
        let (x1, y1, x2, y2) = (x(d.source.0), y(d.source.1), x(d.target.0), y(d.target.1));
        let shrink = if x2 < x1 { 18 } else { -18 };
        writeln!(out, r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="black" marker-end="url(#arrow)"/>"#, x1 - shrink, y1 - 6, x2 + shrink, y2 - 6).unwrap();
        if d.kind == DifferentialKind::MultP || d.kind == DifferentialKind::BurnsideBlock {
            writeln!(out, r#"<text x="{}" y="{}" text-anchor="middle">p</text>"#, (x1 + x2) / 2, y1 - 10).unwrap();
        }
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use Coefficients::*;
    use Theory::*;

    #[test]
    fn block_has_cokernel_z_p() {
        for p in [3, 5, 7, 11] {
            for theory in Theory::BOTH {
                let (k, c) = kernel_cokernel(DifferentialKind::BurnsideBlock, &FGAbelianGroup::free(2), p, theory).unwrap();
                assert!(k.is_zero());
                assert_eq!(c, FGAbelianGroup::cyclic(p as u64));
            }
        }
    }

    #[test]
    fn hom_detection() {
        let z2 = FGAbelianGroup::cyclic(2);
        assert!(!hom_nonzero(&z2, &FGAbelianGroup::cyclic(5)));
        assert!(hom_nonzero(&FGAbelianGroup::free(1), &z2));
        assert!(!hom_nonzero(&z2, &FGAbelianGroup::free(1)));
        assert!(hom_nonzero(&FGAbelianGroup::cyclic(6), &FGAbelianGroup::cyclic(4)));
    }

    #[test]
    fn spectral_route_matches_formula() {
        for l in -5..=5 {
            for m in 1..=5 {
                for coeff in [ConstantZ, BurnsideA] {
                    for theory in Theory::BOTH {
                        let e2 = turn_page(&build_e1(5, l, m, coeff, theory).unwrap()).unwrap();
                        assert!(turn_page(&e2).is_err());
                        let expected = crate::closed_form::orbit_space_formula(5, l, m, coeff, theory).unwrap();
                        assert_eq!(assemble(&e2).unwrap(), expected, "l={l} m={m} {coeff} {theory}");
                    }
                }
            }
        }
    }

    #[test]
    fn room_for_higher_differentials() {
        let e2 = turn_page(&build_e1(5, 0, 2, BurnsideA, Homology).unwrap()).unwrap();
        assert_eq!(e2.possible_higher_differentials(), vec![(3, (3, -2), (0, 0))]);
        let e2 = turn_page(&build_e1(5, -4, 5, ConstantZ, Homology).unwrap()).unwrap();
        assert!(e2.possible_higher_differentials().is_empty());
    }

    #[test]
    fn assemble_refuses_e1_and_extensions() {
        let e1 = build_e1(3, 1, 4, ConstantZ, Homology).unwrap();
        assert!(assemble(&e1).is_err());
        let e2 = turn_page(&e1).unwrap();
        assert!(assemble(&e2).is_ok());
        let clash = SpectralPage { entries: [((1, 0), FGAbelianGroup::cyclic(3)), ((2, -1), FGAbelianGroup::cyclic(9))].into(), ..e2 };
        assert!(matches!(assemble(&clash), Err(Error::Extension { degree: 2, .. })));
    }

    #[test]
    fn bad_arguments() {
        assert!(build_e1(4, 0, 2, ConstantZ, Homology).is_err());
        assert!(build_e1(5, 0, 0, ConstantZ, Homology).is_err());
    }

    #[test]
    fn chain_e1_matches_small_case() {
        for coeff in [ConstantZ, BurnsideA] {
            for theory in Theory::BOTH {
                let page = build_e1(3, 1, 2, coeff, theory).unwrap();
                assert_eq!(chain_e1(3, 1, 2, coeff, theory).unwrap(), page.entries, "{coeff} {theory}");
            }
        }
    }

    #[test]
    fn renderers_are_deterministic() {
        let page = build_e1(5, 0, 2, BurnsideA, Homology).unwrap();
        assert_eq!(render_ascii(&page), render_ascii(&page.clone()));
        assert!(render_svg(&page).starts_with("<svg"));
        assert_eq!(to_json(&page)["differentials"].as_array().unwrap().len(), page.differentials.len());
        assert_eq!(from_json(&to_json(&page)).unwrap(), page);
        let e2 = turn_page(&build_e1(7, -3, 4, ConstantZ, Cohomology).unwrap()).unwrap();
        assert_eq!(from_json(&to_json(&e2)).unwrap(), e2);
        assert!(from_json(&json!({"page": 1})).is_err());
    }
}
