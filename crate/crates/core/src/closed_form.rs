//! Closed-form answers for the (co)homology of `S^{ℓα+mγ}` and `Σ^{ℓα}S(mγ)₊`, and a
//! degreewise comparator.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::abelian::{FGAbelianGroup, GradedGroup};
use crate::burnside::Coefficients;
use crate::error::{Error, Result};
use crate::homology::Theory;

/// `kε + ℓα + Σ mᵢγᵢ`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RODegree {
    pub k: i64,
    pub l: i64,
    /// Multiplicity of each `γ_i`, keyed by `i`.
    pub gammas: BTreeMap<u32, i64>,
}

impl RODegree {
    pub fn new(k: i64, l: i64, m: i64) -> Self {
        let mut gammas = BTreeMap::new();
        if m != 0 {
            gammas.insert(1, m);
        }
        Self { k, l, gammas }
    }

    /// Total multiplicity of the two-dimensional summands.
    pub fn m(&self) -> i64 {
        self.gammas.values().sum()
    }
}

/// Parses `kε + ℓα + Σ mᵢγᵢ` written as signed terms such as `5g-4a`, `0e` or `2g1+1g2`.
/// Units are `e`, `a`, `g` (meaning `g1`) and `g1 ..= g{(p−1)/2}`; a missing coefficient
/// means 1 and repeated units add up.
pub fn parse_degree(input: &str, p: u32) -> Result<RODegree> {
    let text: String = input.chars().filter(|c| !c.is_whitespace()).collect::<String>().replace('\u{2212}', "-");
    if text.is_empty() {
        return Err(Error::Parse("empty degree".into()));
    }
    let half = (p.saturating_sub(1) / 2).max(1);
    let mut degree = RODegree::default();
    let mut rest = text.as_str();
    while !rest.is_empty() {
        let (negative, body) = match rest.as_bytes()[0] {
            b'+' => (false, &rest[1..]),
            b'-' => (true, &rest[1..]),
            _ if rest.len() == text.len() => (false, rest),
            _ => return Err(Error::Parse(format!("expected + or - in {input:?}"))),
        };
        let end = body.find(['+', '-']).unwrap_or(body.len());
        let term = &body[..end];
        rest = &body[end..];
        let digits = term.find(|c: char| !c.is_ascii_digit()).unwrap_or(term.len());
        let unit = &term[digits..];
        let mut coeff: i64 = if digits == 0 { 1 } else { term[..digits].parse().map_err(|_| Error::Parse(format!("bad coefficient in {term:?}")))? };
        if negative {
            coeff = -coeff;
        }
        match unit {
            "e" => degree.k += coeff,
            "a" => degree.l += coeff,
            "" => return Err(Error::Parse(format!("missing unit in {term:?}"))),
            _ if unit.starts_with('g') => {
                let index = if unit.len() == 1 { 1 } else { unit[1..].parse::<u32>().map_err(|_| Error::Parse(format!("unknown unit {unit:?}")))? };
                if index < 1 || index > half {
                    return Err(Error::Parse(format!("gamma index {index} outside 1..={half} for p = {p}")));
                }
                *degree.gammas.entry(index).or_insert(0) += coeff;
            }
            _ => return Err(Error::Parse(format!("unknown unit {unit:?}"))),
        }
    }
    degree.gammas.retain(|_, m| *m != 0);
    Ok(degree)
}

impl fmt::Display for RODegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.k != 0 {
            parts.push(format!("{}e", self.k));
        }
        if self.l != 0 {
            parts.push(format!("{}a", self.l));
        }
        for (i, m) in &self.gammas {
            if *m != 0 {
                parts.push(format!("{m}g{i}"));
            }
        }
        if parts.is_empty() {
            return f.write_str("0");
        }
        let joined = parts.join("+").replace("+-", "-");
        f.write_str(&joined)
    }
}

/// How an answer was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    /// A closed formula evaluated directly.
    Formula,
    /// A closed formula for the dual sphere, read through Spanier–Whitehead duality.
    Duality,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Formula => "closed formula",
            Provenance::Duality => "extended by duality, not a printed formula",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormulaValue {
    pub group: GradedGroup,
    pub provenance: Provenance,
}

fn z() -> FGAbelianGroup {
    FGAbelianGroup::free(1)
}

fn z2() -> FGAbelianGroup {
    FGAbelianGroup::cyclic(2)
}

fn even(n: i64) -> bool {
    n.rem_euclid(2) == 0
}

/// `B_{ℓ,n}` (homology) or `B^{ℓ,n}` (cohomology): reduced (co)homology of `S^{ℓα}` with
/// constant coefficients.
pub fn b_group(l: i64, n: i64, theory: Theory) -> FGAbelianGroup {
    if l < 0 {
        return b_group(-l, -n, theory.dual());
    }
    if n == l && even(n) {
        return z();
    }
    let torsion = match theory {
        Theory::Homology => (0..l).contains(&n) && even(n),
        Theory::Cohomology => (3..=l).contains(&n) && !even(n),
    };
    if torsion {
        z2()
    } else {
        FGAbelianGroup::zero()
    }
}

/// `(_sA_t)_n` or `(^sA^t)^n`: `Z/p` when `2s < n < 2t − 1` and `n ≡ 3` (resp. `0`) mod 4.
pub fn a_interval(p: u32, s: i64, t: i64, n: i64, theory: Theory) -> FGAbelianGroup {
    let residue = match theory {
        Theory::Homology => 3,
        Theory::Cohomology => 0,
    };
    if 2 * s < n && n < 2 * t - 1 && n.rem_euclid(4) == residue {
        FGAbelianGroup::cyclic(p as u64)
    } else {
        FGAbelianGroup::zero()
    }
}

/// `𝓑_{ℓ,n}` or `𝓑^{ℓ,n}`: the `Z/2`-level of `S^{ℓα}` with Burnside coefficients. The
/// listed cases add up, so `𝓑_{0,0} = J ⊕ Z`.
pub fn script_b(l: i64, n: i64, theory: Theory) -> FGAbelianGroup {
    if l < 0 {
        return script_b(-l, -n, theory.dual());
    }
    let mut g = FGAbelianGroup::zero();
    if n == 0 {
        // J_{Z/2} or I_{Z/2}, both infinite cyclic.
        g = g.direct_sum(&z());
    }
    if n == l && even(n) {
        g = g.direct_sum(&z());
    }
    let torsion = match theory {
        Theory::Homology => 0 < n && n < l && even(n),
        Theory::Cohomology => (3..=l).contains(&n) && !even(n),
    };
    if torsion {
        g = g.direct_sum(&z2());
    }
    g
}

/// `𝓒_{ℓ,n}` or `𝓒^{ℓ,n}`: the top level of `S^{ℓα}` with Burnside coefficients, cases
/// read cumulatively as for [`script_b`].
pub fn script_c(l: i64, n: i64, theory: Theory) -> FGAbelianGroup {
    if l < 0 {
        return script_c(-l, -n, theory.dual());
    }
    let mut g = FGAbelianGroup::zero();
    if n == 0 {
        // J^{Z/p}_G or I^{Z/p}_G, free of rank 2.
        g = g.direct_sum(&FGAbelianGroup::free(2));
    }
    if n == l && even(n) {
        // A(Z/p)
        g = g.direct_sum(&FGAbelianGroup::free(2));
    }
    let torsion = match theory {
        Theory::Homology => 0 < n && n < l && even(n),
        Theory::Cohomology => (3..=l).contains(&n) && !even(n),
    };
    if torsion {
        // A(Z/p)/2
        g = g.direct_sum(&FGAbelianGroup::from_cyclic_orders([2, 2]));
    }
    g
}

fn graded(l: i64, f: impl Fn(i64) -> FGAbelianGroup) -> GradedGroup {
    let r = l.abs() + 1;
    let mut g = GradedGroup::new();
    for n in -r..=r {
        g.set(n, f(n));
    }
    g
}

/// `B_ℓ` (constant) or `𝓑_ℓ` (Burnside) as a graded group.
pub fn b_graded(l: i64, coeff: Coefficients, theory: Theory) -> GradedGroup {
    match coeff {
        Coefficients::ConstantZ => graded(l, |n| b_group(l, n, theory)),
        Coefficients::BurnsideA => graded(l, |n| script_b(l, n, theory)),
    }
}

/// `𝓒_ℓ` as a graded group.
pub fn c_graded(l: i64, theory: Theory) -> GradedGroup {
    graded(l, |n| script_c(l, n, theory))
}

/// `_sA_t` or `^sA^t` as a graded group.
pub fn a_graded(p: u32, s: i64, t: i64, theory: Theory) -> GradedGroup {
    let mut g = GradedGroup::new();
    for n in 2 * s + 1..2 * t - 1 {
        g.set(n, a_interval(p, s, t, n, theory));
    }
    g
}

/// (Co)homology of `S^{ℓα+mγ}` at the top level.
pub fn sphere_formula(p: u32, l: i64, m: i64, coeff: Coefficients, theory: Theory) -> FormulaValue {
    if m < 0 {
        let dual = sphere_formula(p, -l, -m, coeff, theory.dual());
        return FormulaValue { group: dual.group.negate_degrees(), provenance: Provenance::Duality };
    }
    if m == 0 {
        let group = match coeff {
            Coefficients::ConstantZ => b_graded(l, coeff, theory),
            Coefficients::BurnsideA => c_graded(l, theory),
        };
        return FormulaValue { group, provenance: Provenance::Formula };
    }
    let s = match theory {
        Theory::Homology => l - 1,
        Theory::Cohomology => l,
    };
    let mut group = a_graded(p, s, l + m, theory).shift(-l + 1).direct_sum(&b_graded(l + m, coeff, theory).shift(m));
    if coeff == Coefficients::BurnsideA {
        group = b_graded(l, coeff, theory).direct_sum(&group);
    }
    FormulaValue { group, provenance: Provenance::Formula }
}

/// [`sphere_formula`] at an arbitrary degree; `kε` is a plain shift.
pub fn formula_at(p: u32, degree: &RODegree, coeff: Coefficients, theory: Theory) -> FormulaValue {
    let v = sphere_formula(p, degree.l, degree.m(), coeff, theory);
    FormulaValue { group: v.group.shift(degree.k), ..v }
}

/// Reduced (co)homology of `Σ^{ℓα} S(mγ)₊` at the top level, `m > 0`.
pub fn orbit_space_formula(p: u32, l: i64, m: i64, coeff: Coefficients, theory: Theory) -> Result<GradedGroup> {
    if m <= 0 {
        return Err(Error::OutOfRange(format!("the orbit-space formula needs m > 0, got {m}")));
    }
    Ok(b_graded(l, coeff, theory).direct_sum(&b_graded(l + m, coeff, theory).shift(m - 1)).direct_sum(&a_graded(p, l, l + m, theory).shift(-l)))
}

/// Degrees where two graded groups differ, one line each. Empty means equal.
pub fn compare(computed: &GradedGroup, expected: &GradedGroup) -> Vec<String> {
    let mut degrees: Vec<i64> = computed.degrees().chain(expected.degrees()).collect();
    degrees.sort_unstable();
    degrees.dedup();
    degrees
        .into_iter()
        .filter(|&n| computed.get(n) != expected.get(n))
        .map(|n| format!("degree {n}: computed {}, expected {}", computed.get(n), expected.get(n)))
        .collect()
}
