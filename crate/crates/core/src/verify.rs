//! The independent routes to the same groups, and grid comparisons between them.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::abelian::GradedGroup;
use crate::burnside::Coefficients;
use crate::closed_form::{compare, formula_at, orbit_space_formula, Provenance, RODegree};
use crate::cw::{orbit_space_model, sphere_model};
use crate::error::{Error, Result};
use crate::group::SubgroupClass;
use crate::homology::{bredon, Theory};
use crate::spectral::{cofiber_assemble, orbit_space_spectral};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Method {
    Formula,
    Chain,
    Spectral,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Formula, Method::Chain, Method::Spectral];
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Formula => "formula",
            Method::Chain => "chain",
            Method::Spectral => "spectral",
        })
    }
}

/// The answer of one route, or why it could not run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RouteOutcome {
    pub method: Method,
    pub result: std::result::Result<GradedGroup, String>,
    pub note: String,
}

/// Which `γ_i` model to build for a degree; mixed indices fall back to `γ₁` with the
/// total multiplicity.
fn gamma_index(degree: &RODegree) -> (u32, Option<String>) {
    let used: Vec<u32> = degree.gammas.iter().filter(|(_, m)| **m != 0).map(|(i, _)| *i).collect();
    match used.as_slice() {
        [i] => (*i, None),
        [] => (1, None),
        _ => (1, Some(format!("mixed gamma indices replaced by m = {} copies of g1", degree.m()))),
    }
}

fn route(p: u32, degree: &RODegree, coeff: Coefficients, theory: Theory, level: SubgroupClass, method: Method) -> RouteOutcome {
    let (l, m, k) = (degree.l, degree.m(), degree.k);
    let unavailable = |why: String| RouteOutcome { method, result: Err(why), note: String::new() };
    match method {
        Method::Formula => {
            if level != SubgroupClass::Whole {
                return unavailable("closed formulas describe the top level only".into());
            }
            let v = formula_at(p, degree, coeff, theory);
            RouteOutcome { method, result: Ok(v.group), note: v.provenance.to_string() }
        }
        Method::Chain => {
            if l < 0 || m < 0 {
                return unavailable(format!("no cell model for l = {l}, m = {m}; negative degrees are served by the other routes"));
            }
            let (i, note) = gamma_index(degree);
            let result = sphere_model(p, i, l, m as usize).and_then(|x| bredon(&x, coeff, level, theory)).map(|g| g.shift(k)).map_err(|e| e.to_string());
            RouteOutcome { method, result, note: note.unwrap_or_else(|| format!("cell model with g{i}")) }
        }
        Method::Spectral => {
            if level != SubgroupClass::Whole {
                return unavailable("the spectral sequence is computed at the top level only".into());
            }
            if m == 0 {
                return unavailable("the filtration needs m != 0".into());
            }
            let (result, provenance) = if m > 0 {
                (cofiber_assemble(p, l, m, coeff, theory), Provenance::Formula)
            } else {
                (cofiber_assemble(p, -l, -m, coeff, theory.dual()).map(|g| g.negate_degrees()), Provenance::Duality)
            };
            let note = match provenance {
                Provenance::Formula => "orbit-space spectral sequence and cofiber sequence".to_string(),
                Provenance::Duality => format!("dual sphere through the spectral sequence, {provenance}"),
            };
            RouteOutcome { method, result: result.map(|g| g.shift(k)).map_err(|e| e.to_string()), note }
        }
    }
}

/// Runs the requested routes for `S^V`.
pub fn compute_routes(p: u32, degree: &RODegree, coeff: Coefficients, theory: Theory, level: SubgroupClass, methods: &[Method]) -> Vec<RouteOutcome> {
    methods.iter().map(|&m| route(p, degree, coeff, theory, level, m)).collect()
}

/// Pairwise differences among the routes that produced an answer, as
/// `(first, second, differing degrees)`.
pub fn disagreements(outcomes: &[RouteOutcome]) -> Vec<(Method, Method, Vec<String>)> {
    let done: Vec<(Method, &GradedGroup)> = outcomes.iter().filter_map(|o| o.result.as_ref().ok().map(|g| (o.method, g))).collect();
    let mut out = Vec::new();
    for (i, (a, ga)) in done.iter().enumerate() {
        for (b, gb) in &done[i + 1..] {
            let diff = compare(ga, gb);
            if !diff.is_empty() {
                out.push((*a, *b, diff));
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Space {
    /// `S^{ℓα+mγ}`
    Sphere,
    /// `Σ^{ℓα} S(mγ)₊`
    OrbitSpace,
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Space::Sphere => "sphere",
            Space::OrbitSpace => "orbit-space",
        })
    }
}

/// One cell of a verification grid.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct GridCase {
    pub space: Space,
    pub p: u32,
    pub l: i64,
    pub m: i64,
    pub coeff: Coefficients,
    pub theory: Theory,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridRow {
    pub case: GridCase,
    /// One line per disagreeing degree or route; empty when everything agrees.
    pub problems: Vec<String>,
}

impl GridRow {
    pub fn passed(&self) -> bool {
        self.problems.is_empty()
    }
}

fn check(case: &GridCase) -> Result<Vec<String>> {
    let GridCase { space, p, l, m, coeff, theory } = *case;
    let usize_m = usize::try_from(m).map_err(|_| Error::OutOfRange(format!("m = {m}")))?;
    let mut problems = Vec::new();
    match space {
        Space::Sphere => {
            let chain = bredon(&sphere_model(p, 1, l, usize_m)?, coeff, SubgroupClass::Whole, theory)?;
            let formula = formula_at(p, &RODegree::new(0, l, m), coeff, theory).group;
            problems.extend(compare(&chain, &formula).into_iter().map(|d| format!("chain vs formula, {d}")));
            if m > 0 {
                let spectral = cofiber_assemble(p, l, m, coeff, theory)?;
                problems.extend(compare(&spectral, &formula).into_iter().map(|d| format!("spectral vs formula, {d}")));
            }
        }
        Space::OrbitSpace => {
            let formula = orbit_space_formula(p, l, m, coeff, theory)?;
            if l >= 0 {
                let chain = bredon(&orbit_space_model(p, 1, l, usize_m)?, coeff, SubgroupClass::Whole, theory)?;
                problems.extend(compare(&chain, &formula).into_iter().map(|d| format!("chain vs formula, {d}")));
            }
            let spectral = orbit_space_spectral(p, l, m, coeff, theory)?;
            problems.extend(compare(&spectral, &formula).into_iter().map(|d| format!("spectral vs formula, {d}")));
        }
    }
    Ok(problems)
}

/// Checks every case in parallel; rows come back sorted by case.
pub fn run_grid(cases: &[GridCase]) -> Vec<GridRow> {
    let mut rows: Vec<GridRow> =
        cases.par_iter().map(|case| GridRow { case: case.clone(), problems: check(case).unwrap_or_else(|e| vec![format!("error: {e}")]) }).collect();
    rows.sort_by(|a, b| a.case.cmp(&b.case));
    rows
}

/// Spheres with `0 ≤ ℓ ≤ max_l`, `0 ≤ m ≤ max_m` and orbit spaces with `1 ≤ m ≤ max_m`.
pub fn standard_grid(ps: &[u32], max_l: i64, max_m: i64, coeffs: &[Coefficients], theories: &[Theory]) -> Vec<GridCase> {
    let mut cases = Vec::new();
    for &p in ps {
        for l in 0..=max_l {
            for m in 0..=max_m {
                for &coeff in coeffs {
                    for &theory in theories {
                        cases.push(GridCase { space: Space::Sphere, p, l, m, coeff, theory });
                        if m > 0 {
                            cases.push(GridCase { space: Space::OrbitSpace, p, l, m, coeff, theory });
                        }
                    }
                }
            }
        }
    }
    cases
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_routes_for_the_gamma_sphere() {
        let outcomes = compute_routes(3, &RODegree::new(0, 0, 1), Coefficients::ConstantZ, Theory::Homology, SubgroupClass::Whole, &Method::ALL);
        assert!(outcomes.iter().all(|o| o.result.is_ok()));
        assert!(disagreements(&outcomes).is_empty());
    }

    #[test]
    fn unavailable_routes_explain_themselves() {
        let d = RODegree::new(0, -4, 5);
        let outcomes = compute_routes(5, &d, Coefficients::ConstantZ, Theory::Homology, SubgroupClass::Whole, &Method::ALL);
        assert!(outcomes[1].result.is_err());
        assert!(disagreements(&outcomes).is_empty());
        let negative = compute_routes(5, &RODegree::new(1, 2, -3), Coefficients::ConstantZ, Theory::Cohomology, SubgroupClass::Whole, &Method::ALL);
        assert!(negative[2].note.contains("duality"));
        assert!(disagreements(&negative).is_empty());
        // Burnside homology at even l carries a Z/p in the closed formula that neither
        // the chains nor the cofiber sequence produce; duality carries it over.
        let burnside = compute_routes(5, &RODegree::new(1, 2, -3), Coefficients::BurnsideA, Theory::Cohomology, SubgroupClass::Whole, &Method::ALL);
        let found = disagreements(&burnside);
        assert_eq!((found.len(), found[0].0, found[0].1), (1, Method::Formula, Method::Spectral));
        assert_eq!(found[0].2, vec!["degree 3: computed Z+Z/5, expected Z".to_string()]);
        let low = compute_routes(5, &RODegree::new(0, 2, 1), Coefficients::ConstantZ, Theory::Homology, SubgroupClass::Reflection, &Method::ALL);
        assert!(low[0].result.is_err() && low[1].result.is_ok() && low[2].result.is_err());
    }

    #[test]
    fn grid_rows_are_sorted() {
        let cases = standard_grid(&[3], 1, 1, &[Coefficients::ConstantZ], &Theory::BOTH);
        let rows = run_grid(&cases);
        assert!(rows.windows(2).all(|w| w[0].case < w[1].case));
        assert!(rows.iter().all(GridRow::passed), "{rows:?}");
    }
}
