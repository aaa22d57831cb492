//! Finite `D_2p`-sets given by explicit action tables.

use crate::error::{Error, Result};
use crate::group::{Dihedral, GroupElement, Subgroup};

/// A finite left `G`-set on `0..len`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGSet {
    group: Dihedral,
    len: usize,
    // table[g.index() * len + x] = g·x
    table: Vec<usize>,
}

/// One orbit: its elements in increasing order. The representative is the smallest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    pub elements: Vec<usize>,
}

impl Orbit {
    pub fn rep(&self) -> usize {
        self.elements[0]
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

impl FiniteGSet {
    /// Builds the set from an action function and checks the action axioms.
    pub fn from_fn(group: Dihedral, len: usize, act: impl Fn(GroupElement, usize) -> usize) -> Result<Self> {
        let mut table = Vec::with_capacity(group.order() * len);
        for g in group.elements() {
            for x in 0..len {
                let y = act(g, x);
                if y >= len {
                    return Err(Error::Validation(format!("{g}·{x} = {y} is outside 0..{len}")));
                }
                table.push(y);
            }
        }
        let set = Self { group, len, table };
        set.check_axioms()?;
        Ok(set)
    }

    fn check_axioms(&self) -> Result<()> {
        for x in 0..self.len {
            if self.act(self.group.identity(), x) != x {
                return Err(Error::Validation(format!("identity moves {x}")));
            }
        }
        for g in self.group.elements() {
            for h in self.group.elements() {
                for x in 0..self.len {
                    if self.act(g * h, x) != self.act(g, self.act(h, x)) {
                        return Err(Error::Validation(format!("({g}{h})·{x} != {g}·({h}·{x})")));
                    }
                }
            }
        }
        Ok(())
    }

    /// `G/H`, cosets listed in order of their smallest element.
    pub fn cosets(sub: &Subgroup) -> Self {
        let group = sub.group();
        let mut reps: Vec<GroupElement> = Vec::new();
        for g in group.elements() {
            if !reps.iter().any(|r| sub.contains(r.inverse() * g)) {
                reps.push(g);
            }
        }
        Self::cosets_with_reps(sub, &reps).expect("a full transversal")
    }

    /// `G/H` with coset `i` equal to `reps[i]·H`; `reps` must be a transversal.
    pub fn cosets_with_reps(sub: &Subgroup, reps: &[GroupElement]) -> Result<Self> {
        let group = sub.group();
        if reps.len() * sub.order() != group.order() {
            return Err(Error::Validation(format!("{} representatives for {} cosets", reps.len(), group.order() / sub.order())));
        }
        let coset_of = |g: GroupElement| reps.iter().position(|r| sub.contains(r.inverse() * g));
        for (i, r) in reps.iter().enumerate() {
            if coset_of(*r) != Some(i) {
                return Err(Error::Validation(format!("{r} repeats an earlier coset")));
            }
        }
        Self::from_fn(group, reps.len(), |g, x| coset_of(g * reps[x]).expect("transversal"))
    }

    /// The one-point set.
    pub fn point(group: Dihedral) -> Self {
        Self { group, len: 1, table: vec![0; group.order()] }
    }

    pub fn group(&self) -> Dihedral {
        self.group
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn act(&self, g: GroupElement, x: usize) -> usize {
        self.table[g.index() * self.len + x]
    }

    /// `X × Y` with `(x, y)` stored at `x * |Y| + y`.
    pub fn product(&self, other: &FiniteGSet) -> Result<Self> {
        if self.group != other.group {
            return Err(Error::ParameterMismatch("product of sets for different groups".into()));
        }
        let n = other.len;
        Self::from_fn(self.group, self.len * n, |g, z| self.act(g, z / n) * n + other.act(g, z % n))
    }

    pub fn stabilizer(&self, x: usize) -> Subgroup {
        let mask = self.group.elements().filter(|g| self.act(*g, x) == x).fold(0u64, |m, g| m | 1 << g.index());
        Subgroup::from_mask(self.group, mask)
    }

    /// Orbits of `sub`, sorted by size (largest first) and then by smallest element.
    pub fn orbits_under(&self, sub: &Subgroup) -> Vec<Orbit> {
        let mut seen = vec![false; self.len];
        let mut out = Vec::new();
        for x in 0..self.len {
            if seen[x] {
                continue;
            }
            let mut elements: Vec<usize> = sub.elements().map(|g| self.act(g, x)).collect();
            elements.sort_unstable();
            elements.dedup();
            for &y in &elements {
                seen[y] = true;
            }
            out.push(Orbit { elements });
        }
        out.sort_by(|a, b| b.len().cmp(&a.len()).then(a.rep().cmp(&b.rep())));
        out
    }

    pub fn orbits(&self) -> Vec<Orbit> {
        self.orbits_under(&self.group.whole())
    }

    /// For each element, the position of its orbit in `orbits`.
    pub fn orbit_lookup(&self, orbits: &[Orbit]) -> Vec<usize> {
        let mut lookup = vec![0; self.len];
        for (i, o) in orbits.iter().enumerate() {
            for &x in &o.elements {
                lookup[x] = i;
            }
        }
        lookup
    }

    /// Some `g` with `g·from = to`.
    pub fn transporter(&self, from: usize, to: usize) -> Option<GroupElement> {
        self.group.elements().find(|g| self.act(*g, from) == to)
    }
}

/// An equivariant map between finite `G`-sets.
#[derive(Clone, Debug)]
pub struct GMap {
    source: FiniteGSet,
    target: FiniteGSet,
    map: Vec<usize>,
}

impl GMap {
    pub fn new(source: FiniteGSet, target: FiniteGSet, map: Vec<usize>) -> Result<Self> {
        if source.group != target.group {
            return Err(Error::ParameterMismatch("map between sets for different groups".into()));
        }
        if map.len() != source.len || map.iter().any(|&y| y >= target.len) {
            return Err(Error::Validation("map table does not fit source and target".into()));
        }
        for g in source.group.elements() {
            for x in 0..source.len {
                if map[source.act(g, x)] != target.act(g, map[x]) {
                    return Err(Error::NotEquivariant(format!("f({g}·{x}) != {g}·f({x})")));
                }
            }
        }
        Ok(Self { source, target, map })
    }

    /// The map `G/K → G/H`, `gK ↦ g·xH`, for cosets built by [`FiniteGSet::cosets`].
    pub fn coset_map(source: &Subgroup, target: &Subgroup, x: GroupElement) -> Result<Self> {
        let src = FiniteGSet::cosets(source);
        let tgt = FiniteGSet::cosets(target);
        let reps_src = coset_reps(&src, source);
        let reps_tgt = coset_reps(&tgt, target);
        let map = reps_src.iter().map(|g| reps_tgt.iter().position(|r| target.contains(r.inverse() * *g * x)).expect("transversal")).collect();
        Self::new(src, tgt, map)
    }

    pub fn identity(set: FiniteGSet) -> Self {
        let map = (0..set.len).collect();
        Self { source: set.clone(), target: set, map }
    }

    pub fn source(&self) -> &FiniteGSet {
        &self.source
    }

    pub fn target(&self) -> &FiniteGSet {
        &self.target
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &GMap) -> Result<GMap> {
        if first.target != self.source {
            return Err(Error::ParameterMismatch("composable maps must share the middle set".into()));
        }
        let map = first.map.iter().map(|&y| self.map[y]).collect();
        Ok(GMap { source: first.source.clone(), target: self.target.clone(), map })
    }

    /// `f × id : X × S → Y × S`.
    pub fn times(&self, s: &FiniteGSet) -> Result<GMap> {
        let k = s.len();
        let map = (0..self.source.len * k).map(|z| self.map[z / k] * k + z % k).collect();
        GMap::new(self.source.product(s)?, self.target.product(s)?, map)
    }

    /// `id × f : S × X → S × Y`.
    pub fn product_with(&self, s: &FiniteGSet) -> Result<GMap> {
        let n = self.source.len;
        let m = self.target.len;
        let map = (0..s.len() * n).map(|z| (z / n) * m + self.map[z % n]).collect();
        GMap::new(s.product(&self.source)?, s.product(&self.target)?, map)
    }
}

/// Coset representatives matching the element order of `G/H` built by [`FiniteGSet::cosets`].
fn coset_reps(set: &FiniteGSet, sub: &Subgroup) -> Vec<GroupElement> {
    let group = sub.group();
    let mut reps = vec![None; set.len()];
    // Coset 0 is H itself; element g sends it to gH.
    for g in group.elements() {
        let i = set.act(g, 0);
        if reps[i].is_none() {
            reps[i] = Some(g);
        }
    }
    reps.into_iter().map(|r| r.expect("transitive")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coset_space_sizes() {
        let d = Dihedral::new(5).unwrap();
        for h in d.subgroups() {
            let set = FiniteGSet::cosets(&h);
            assert_eq!(set.len() * h.order(), 10);
            assert_eq!(set.orbits().len(), 1);
            assert_eq!(set.stabilizer(0), h);
        }
    }

    #[test]
    fn orbits_partition() {
        let d = Dihedral::new(7).unwrap();
        let x = FiniteGSet::cosets(&d.reflection(0));
        let y = FiniteGSet::cosets(&d.rotations());
        let xy = x.product(&y).unwrap();
        let orbits = xy.orbits();
        let total: usize = orbits.iter().map(Orbit::len).sum();
        assert_eq!(total, xy.len());
        for o in &orbits {
            let class = xy.stabilizer(o.rep()).class();
            assert!(o.elements.iter().all(|&z| xy.stabilizer(z).class() == class));
        }
    }

    #[test]
    fn reflection_orbits_on_tau_cosets() {
        // <τ> acting on G/<τ>: one fixed coset and (p-1)/2 pairs.
        let d = Dihedral::new(5).unwrap();
        let t = d.reflection(0);
        let reps: Vec<_> = (0..5).map(|r| d.element(r, false)).collect();
        let set = FiniteGSet::cosets_with_reps(&t, &reps).unwrap();
        let sizes: Vec<_> = set.orbits_under(&t).iter().map(|o| o.elements.clone()).collect();
        assert_eq!(sizes, vec![vec![1, 4], vec![2, 3], vec![0]]);
    }

    #[test]
    fn non_equivariant_map_rejected() {
        let d = Dihedral::new(3).unwrap();
        let src = FiniteGSet::cosets(&d.trivial_subgroup());
        let tgt = src.clone();
        let mut map: Vec<usize> = (0..6).collect();
        map.swap(0, 1);
        assert!(matches!(GMap::new(src, tgt, map), Err(Error::NotEquivariant(_))));
    }

    #[test]
    fn bad_transversal_rejected() {
        let d = Dihedral::new(3).unwrap();
        let t = d.reflection(0);
        let reps = [d.identity(), d.tau(), d.zeta()];
        assert!(FiniteGSet::cosets_with_reps(&t, &reps).is_err());
    }
}
