//! Partitions, hooks, p-cores and p-quotients via beta-sets.
//!
//! Quotient components are indexed by bead residue mod p in ascending order,
//! on an abacus whose bead count is a multiple of p.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

/// Weakly decreasing sequence of positive integers.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<usize>,
}

/// A hook of a Young diagram, anchored at a 1-based (row, column) cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hook {
    pub row: usize,
    pub col: usize,
    pub length: usize,
    pub leg: usize,
}

/// Ordered p-tuple of partitions.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct QuotientTuple {
    pub components: Vec<Partition>,
}

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) || parts.contains(&0) {
            return Err(Error::InvalidPartition(format!("{parts:?}")));
        }
        Ok(Self { parts })
    }

    /// Sorts and drops zeros.
    pub fn from_unsorted(mut parts: Vec<usize>) -> Self {
        parts.retain(|&x| x > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self { parts }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Part `i` (0-based), zero past the end.
    pub fn part(&self, i: usize) -> usize {
        self.parts.get(i).copied().unwrap_or(0)
    }

    pub fn conjugate(&self) -> Self {
        let first = self.part(0);
        let parts = (0..first)
            .map(|j| self.parts.iter().take_while(|&&x| x > j).count())
            .collect();
        Self { parts }
    }

    pub fn is_self_conjugate(&self) -> bool {
        *self == self.conjugate()
    }

    pub fn has_distinct_parts(&self) -> bool {
        self.parts.windows(2).all(|w| w[0] > w[1])
    }

    pub fn all_odd(&self) -> bool {
        self.parts.iter().all(|x| x % 2 == 1)
    }

    /// Multiplicity of each part value, as (value, count) with decreasing value.
    pub fn multiplicities(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &x in &self.parts {
            match out.last_mut() {
                Some((v, c)) if *v == x => *c += 1,
                _ => out.push((x, 1)),
            }
        }
        out
    }

    /// Order of the centralizer of a permutation of cycle type `self`.
    pub fn z(&self) -> u64 {
        self.multiplicities()
            .iter()
            .map(|&(v, c)| (v as u64).pow(c as u32) * (1..=c as u64).product::<u64>())
            .product()
    }

    /// Multiset union of parts.
    pub fn union(&self, other: &Partition) -> Partition {
        let mut v = self.parts.clone();
        v.extend_from_slice(&other.parts);
        Self::from_unsorted(v)
    }

    /// Every part multiplied by `k`.
    pub fn scaled(&self, k: usize) -> Partition {
        Self {
            parts: self.parts.iter().map(|x| x * k).collect(),
        }
    }

    /// Remove one occurrence of the part `x`.
    pub fn without_part(&self, x: usize) -> Option<Partition> {
        let pos = self.parts.iter().position(|&y| y == x)?;
        let mut v = self.parts.clone();
        v.remove(pos);
        Some(Self { parts: v })
    }

    /// All partitions of `n`, in decreasing lexicographic order.
    pub fn all(n: usize) -> Vec<Partition> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn rec(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if rest == 0 {
                out.push(Partition { parts: cur.clone() });
                return;
            }
            for x in (1..=rest.min(max)).rev() {
                cur.push(x);
                rec(rest - x, x, cur, out);
                cur.pop();
            }
        }
        rec(n, n, &mut cur, &mut out);
        out
    }

    /// Beta-set with `beads` elements, in decreasing order.
    pub fn beta_set(&self, beads: usize) -> Vec<usize> {
        assert!(beads >= self.len());
        (0..beads).map(|i| self.part(i) + beads - 1 - i).collect()
    }

    /// Partition from any finite set of distinct nonnegative bead positions.
    pub fn from_beta(beta: &[usize]) -> Partition {
        let mut b = beta.to_vec();
        b.sort_unstable_by(|a, c| c.cmp(a));
        let k = b.len();
        Self::from_unsorted(b.iter().enumerate().map(|(i, x)| x - (k - 1 - i)).collect())
    }

    /// All hooks of length `q` with the partition left after removal,
    /// ordered by anchor row, then column.
    pub fn hooks(&self, q: usize) -> Vec<(Hook, Partition)> {
        let conj = self.conjugate();
        let mut out = Vec::new();
        for (i, &row) in self.parts.iter().enumerate() {
            for j in 0..row {
                let arm = row - j - 1;
                let leg = conj.part(j) - i - 1;
                if arm + leg + 1 != q {
                    continue;
                }
                let beads = self.len();
                let mut beta = self.beta_set(beads);
                beta[i] -= q;
                out.push((
                    Hook {
                        row: i + 1,
                        col: j + 1,
                        length: q,
                        leg,
                    },
                    Self::from_beta(&beta),
                ));
            }
        }
        out
    }

    /// All hook lengths (with multiplicity).
    pub fn hook_lengths(&self) -> Vec<usize> {
        let conj = self.conjugate();
        let mut out = Vec::new();
        for (i, &row) in self.parts.iter().enumerate() {
            for j in 0..row {
                out.push(row - j + conj.part(j) - i - 1);
            }
        }
        out
    }

    /// True when no hook has length `p`.
    pub fn is_core(&self, p: usize) -> bool {
        self.hooks(p).is_empty()
    }

    fn abacus_beads(&self, p: usize) -> usize {
        self.len().div_ceil(p).max(1) * p
    }

    /// p-core and p-quotient.
    pub fn core_quotient(&self, p: usize) -> (Partition, QuotientTuple) {
        let n = self.abacus_beads(p);
        let beta = self.beta_set(n);
        let mut runners: Vec<Vec<usize>> = vec![Vec::new(); p];
        for &b in &beta {
            runners[b % p].push(b / p);
        }
        let components = runners
            .iter()
            .map(|levels| Self::from_beta(levels))
            .collect();
        let mut core_beta = Vec::new();
        for (r, levels) in runners.iter().enumerate() {
            for k in 0..levels.len() {
                core_beta.push(r + p * k);
            }
        }
        (Self::from_beta(&core_beta), QuotientTuple { components })
    }

    pub fn core(&self, p: usize) -> Partition {
        self.core_quotient(p).0
    }

    pub fn weight(&self, p: usize) -> usize {
        (self.size() - self.core(p).size()) / p
    }

    /// Inverse of [`Partition::core_quotient`].
    pub fn from_core_quotient(
        core: &Partition,
        quot: &QuotientTuple,
        p: usize,
    ) -> Result<Partition> {
        if !core.is_core(p) {
            return Err(Error::NotACore(core.to_string(), p));
        }
        if quot.components.len() != p {
            return Err(Error::InvalidParameter(format!(
                "quotient has {} components, expected {p}",
                quot.components.len()
            )));
        }
        let w = quot.weight();
        let n = (core.len() + w + 1).div_ceil(p) * p + p * (w + 1);
        let beta = core.beta_set(n);
        let mut counts = vec![0usize; p];
        for &b in &beta {
            counts[b % p] += 1;
        }
        let mut out = Vec::with_capacity(n);
        for (r, comp) in quot.components.iter().enumerate() {
            let m = counts[r];
            for lvl in comp.beta_set(m) {
                out.push(r + p * lvl);
            }
        }
        Ok(Self::from_beta(&out))
    }

    /// Removals of hooks of length `p * a`, each reported with the quotient
    /// component it lives on, its leg in `self`, its leg in the quotient, and
    /// the resulting partition.
    pub fn quotient_removals(&self, p: usize, a: usize) -> Vec<QuotientRemoval> {
        let n = self.abacus_beads(p);
        let beta = self.beta_set(n);
        let q = p * a;
        let mut out = Vec::new();
        for (idx, &b) in beta.iter().enumerate() {
            if b < q || beta.contains(&(b - q)) {
                continue;
            }
            let lo = b - q;
            let leg = beta.iter().filter(|&&x| x > lo && x < b).count();
            let qleg = beta
                .iter()
                .filter(|&&x| x > lo && x < b && x % p == b % p)
                .count();
            let mut nb = beta.clone();
            nb[idx] = lo;
            out.push(QuotientRemoval {
                component: b % p,
                leg,
                quotient_leg: qleg,
                result: Self::from_beta(&nb),
            });
        }
        out
    }

    /// Diagonal hook lengths of a self-conjugate partition.
    pub fn a_map(&self) -> Result<Partition> {
        if !self.is_self_conjugate() {
            return Err(Error::NotSelfConjugate(self.to_string()));
        }
        let conj = self.conjugate();
        let parts = (0..self.len())
            .take_while(|&i| self.part(i) > i)
            .map(|i| self.part(i) + conj.part(i) - 2 * i - 1)
            .collect();
        Ok(Partition { parts })
    }

    /// Self-conjugate partition with the given distinct odd diagonal hooks.
    pub fn a_inverse(hooks: &Partition) -> Result<Partition> {
        if !hooks.has_distinct_parts() || !hooks.all_odd() {
            return Err(Error::InvalidPartition(format!(
                "{hooks} is not a set of distinct odd parts"
            )));
        }
        let d = hooks.len();
        let mut parts: Vec<usize> = (0..d).map(|i| i + 1 + (hooks.part(i) - 1) / 2).collect();
        let mut i = d + 1;
        loop {
            let c = parts[..d].iter().filter(|&&x| x >= i).count();
            if c == 0 {
                break;
            }
            parts.push(c);
            i += 1;
        }
        Partition::new(parts)
    }

    /// The unique self-conjugate partition obtained by removing a `q`-hook,
    /// when `q` is a diagonal hook length.
    pub fn mu_lambda(&self, q: usize) -> Result<Option<Partition>> {
        let a = self.a_map()?;
        match a.without_part(q) {
            Some(rest) => Ok(Some(Self::a_inverse(&rest)?)),
            None => Ok(None),
        }
    }
}

/// One removable `p * a`-hook seen through the abacus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientRemoval {
    pub component: usize,
    pub leg: usize,
    pub quotient_leg: usize,
    pub result: Partition,
}

impl QuotientTuple {
    pub fn new(components: Vec<Partition>) -> Self {
        Self { components }
    }

    pub fn empty(p: usize) -> Self {
        Self {
            components: vec![Partition::empty(); p],
        }
    }

    pub fn weight(&self) -> usize {
        self.components.iter().map(Partition::size).sum()
    }

    /// Reverse the tuple and conjugate every component.
    pub fn conj(&self) -> Self {
        Self {
            components: self
                .components
                .iter()
                .rev()
                .map(Partition::conjugate)
                .collect(),
        }
    }
}

/// The q-sign: product of `(-1)^leg` along any q-hook removal sequence to the core.
pub fn delta_sign(lambda: &Partition, q: usize) -> i32 {
    let mut cur = lambda.clone();
    let mut sign = 1;
    while let Some((h, mu)) = cur.hooks(q).into_iter().next() {
        if h.leg % 2 == 1 {
            sign = -sign;
        }
        cur = mu;
    }
    sign
}

/// Partition with p-core `core` and the same p-quotient as `lambda`.
pub fn psi_map(lambda: &Partition, p: usize, core: &Partition) -> Result<Partition> {
    let (_, quot) = lambda.core_quotient(p);
    Partition::from_core_quotient(core, &quot, p)
}

/// All p-cores of size `n`.
pub fn cores_of_size(n: usize, p: usize) -> Vec<Partition> {
    Partition::all(n)
        .into_iter()
        .filter(|l| l.is_core(p))
        .collect()
}

/// All partitions with p-core `core` and weight `w`.
pub fn block_members(core: &Partition, p: usize, w: usize) -> Vec<Partition> {
    Partition::all(core.size() + p * w)
        .into_iter()
        .filter(|l| l.core(p) == *core)
        .collect()
}

/// All tuples of `k` partitions with total size `n`.
pub fn multipartitions(k: usize, n: usize) -> Vec<Vec<Partition>> {
    if k == 0 {
        return if n == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=n).rev() {
        for head in Partition::all(first) {
            for mut tail in multipartitions(k - 1, n - first) {
                let mut v = vec![head.clone()];
                v.append(&mut tail);
                out.push(v);
            }
        }
    }
    out
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|x| x.to_string()).collect();
        write!(f, "{}", s.join(","))
    }
}

impl fmt::Display for QuotientTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.components.iter().map(|c| format!("({c})")).collect();
        write!(f, "[{}]", s.join(","))
    }
}

impl FromStr for Partition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Self::empty());
        }
        let parts = s
            .split(',')
            .map(|x| x.trim().parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::Parse(format!("bad partition '{s}'")))?;
        if parts.contains(&0) {
            return Err(Error::InvalidPartition(s.to_string()));
        }
        Self::new(parts)
    }
}

impl Serialize for Partition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Shorthand constructor used heavily in tests.
pub fn part(v: &[usize]) -> Partition {
    Partition::new(v.to_vec()).expect("valid partition")
}
