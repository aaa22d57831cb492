//! Finitely generated abelian groups in invariant-factor form, and graded families of them.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `Z^free_rank ⊕ Z/d1 ⊕ … ⊕ Z/dk` with `d1 | d2 | … | dk`, each `di >= 2`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FGAbelianGroup {
    free_rank: usize,
    invariant_factors: Vec<u64>,
}

impl FGAbelianGroup {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        Self { free_rank: rank, invariant_factors: Vec::new() }
    }

    pub fn cyclic(n: u64) -> Self {
        match n {
            0 => Self::free(1),
            1 => Self::zero(),
            _ => Self { free_rank: 0, invariant_factors: vec![n] },
        }
    }

    /// Normalizes an arbitrary list of cyclic orders (`0` meaning `Z`, `1` dropped).
    pub fn from_cyclic_orders(orders: impl IntoIterator<Item = u64>) -> Self {
        let mut g = Self::zero();
        for n in orders {
            g = g.direct_sum(&Self::cyclic(n));
        }
        g
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.invariant_factors
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }

    /// Number of cyclic summands of order divisible by `q` in the primary decomposition.
    pub fn primary_count(&self, q: u64) -> usize {
        self.invariant_factors.iter().filter(|&&d| d % q == 0).count()
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut primes: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
        for &d in self.invariant_factors.iter().chain(&other.invariant_factors) {
            for (q, e) in factorize(d) {
                primes.entry(q).or_default().push(q.pow(e));
            }
        }
        // Largest prime powers combine into the last factor, and so on down.
        let len = primes.values().map(Vec::len).max().unwrap_or(0);
        let mut factors = vec![1u64; len];
        for powers in primes.values_mut() {
            powers.sort_unstable_by(|a, b| b.cmp(a));
            for (k, q) in powers.iter().enumerate() {
                factors[len - 1 - k] *= q;
            }
        }
        Self { free_rank: self.free_rank + other.free_rank, invariant_factors: factors }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.invariant_factors.iter().all(|&d| d >= 2) && self.invariant_factors.windows(2).all(|w| w[1] % w[0] == 0);
        if ok {
            Ok(())
        } else {
            Err(Error::Validation(format!("{:?} is not a divisibility chain", self.invariant_factors)))
        }
    }
}

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        let mut e = 0;
        while n.is_multiple_of(q) {
            n /= q;
            e += 1;
        }
        if e > 0 {
            out.push((q, e));
        }
        q += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

impl fmt::Display for FGAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        let mut i = 0;
        while i < self.invariant_factors.len() {
            let d = self.invariant_factors[i];
            let run = self.invariant_factors[i..].iter().take_while(|&&x| x == d).count();
            parts.push(if run == 1 { format!("Z/{d}") } else { format!("(Z/{d})^{run}") });
            i += run;
        }
        write!(f, "{}", parts.join("+"))
    }
}

/// One degree of a graded group, as exchanged in JSON.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedEntry {
    pub degree: i64,
    pub free_rank: usize,
    pub invariant_factors: Vec<u64>,
}

/// Finitely supported `Z`-graded abelian group. Zero entries are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GradedGroup {
    entries: BTreeMap<i64, FGAbelianGroup>,
}

impl GradedGroup {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(degree: i64, group: FGAbelianGroup) -> Self {
        let mut g = Self::new();
        g.add(degree, &group);
        g
    }

    pub fn get(&self, degree: i64) -> FGAbelianGroup {
        self.entries.get(&degree).cloned().unwrap_or_default()
    }

    /// Direct-sums `group` into the given degree.
    pub fn add(&mut self, degree: i64, group: &FGAbelianGroup) {
        if group.is_zero() {
            return;
        }
        let sum = self.get(degree).direct_sum(group);
        self.entries.insert(degree, sum);
    }

    pub fn set(&mut self, degree: i64, group: FGAbelianGroup) {
        if group.is_zero() {
            self.entries.remove(&degree);
        } else {
            self.entries.insert(degree, group);
        }
    }

    pub fn direct_sum(&self, other: &GradedGroup) -> GradedGroup {
        let mut out = self.clone();
        for (&n, g) in &other.entries {
            out.add(n, g);
        }
        out
    }

    /// Shift up by `k`: degree `n` moves to `n + k`.
    pub fn shift(&self, k: i64) -> GradedGroup {
        GradedGroup { entries: self.entries.iter().map(|(&n, g)| (n + k, g.clone())).collect() }
    }

    /// Degree `n` moves to `-n`.
    pub fn negate_degrees(&self) -> GradedGroup {
        GradedGroup { entries: self.entries.iter().map(|(&n, g)| (-n, g.clone())).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &FGAbelianGroup)> {
        self.entries.iter().map(|(&n, g)| (n, g))
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.entries.keys().copied()
    }

    pub fn to_entries(&self) -> Vec<GradedEntry> {
        self.iter().map(|(degree, g)| GradedEntry { degree, free_rank: g.free_rank(), invariant_factors: g.invariant_factors().to_vec() }).collect()
    }

    pub fn from_entries(entries: &[GradedEntry]) -> Result<Self> {
        let mut out = Self::new();
        for e in entries {
            let g = FGAbelianGroup { free_rank: e.free_rank, invariant_factors: e.invariant_factors.clone() };
            g.validate()?;
            if out.entries.contains_key(&e.degree) {
                return Err(Error::Parse(format!("degree {} listed twice", e.degree)));
            }
            out.set(e.degree, g);
        }
        Ok(out)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_entries()).expect("plain data serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let entries: Vec<GradedEntry> = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_entries(&entries)
    }
}

impl fmt::Display for GradedGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return writeln!(f, "0 in every degree");
        }
        for (n, g) in self.iter() {
            writeln!(f, "{n:>4}: {g}")?;
        }
        Ok(())
    }
}

/// `Z^rank` plus the torsion read off Smith diagonal entries.
pub fn group_from_diagonal(rank_of_kernel: usize, factors: &[i64]) -> FGAbelianGroup {
    let torsion: Vec<u64> = factors.iter().map(|&d| d.unsigned_abs()).filter(|&d| d > 1).collect();
    let mut g = FGAbelianGroup::free(rank_of_kernel);
    for d in torsion {
        g = g.direct_sum(&FGAbelianGroup::cyclic(d));
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normal_form_merges_coprime_parts() {
        let g = FGAbelianGroup::from_cyclic_orders([2, 3]);
        assert_eq!(g.invariant_factors(), &[6]);
        let h = FGAbelianGroup::from_cyclic_orders([2, 2]);
        assert_eq!(h.invariant_factors(), &[2, 2]);
        let k = FGAbelianGroup::from_cyclic_orders([4, 6, 0]);
        assert_eq!(k.invariant_factors(), &[2, 12]);
        assert_eq!(k.free_rank(), 1);
    }

    #[test]
    fn display() {
        assert_eq!(FGAbelianGroup::from_cyclic_orders([0, 0, 2, 2, 5]).to_string(), "Z^2+Z/2+Z/10");
        assert_eq!(FGAbelianGroup::from_cyclic_orders([2, 2]).to_string(), "(Z/2)^2");
        assert_eq!(FGAbelianGroup::zero().to_string(), "0");
    }

    #[test]
    fn json_round_trip() {
        let mut g = GradedGroup::new();
        g.add(-3, &FGAbelianGroup::cyclic(2));
        g.add(0, &FGAbelianGroup::free(2));
        g.add(4, &FGAbelianGroup::from_cyclic_orders([5, 2]));
        let back = GradedGroup::from_json(&g.to_json()).unwrap();
        assert_eq!(back, g);
        assert!(g.to_json().starts_with(r#"[{"degree":-3,"free_rank":0,"invariant_factors":[2]}"#));
    }

    #[test]
    fn rejects_bad_factors() {
        let bad = r#"[{"degree":0,"free_rank":0,"invariant_factors":[4,2]}]"#;
        assert!(GradedGroup::from_json(bad).is_err());
    }
}
