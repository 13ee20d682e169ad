//! Class subsets, Gram-closure (KOR) blocks, core-labelled blocks, and the
//! integral lattice of restrictions for rational tables.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::barpartitions::BarPartition;
use crate::chars_wreath::{semidirect_base, BaseGroup};
use crate::error::{Error, Result};
use crate::partitions::Partition;
use crate::table::{CharLabel, CharTable, ClassLabel, Shape, Split};

/// Group families with a known block theory.
#[derive(Clone, Debug)]
pub enum Family {
    Sym,
    Alt,
    SpinSym,
    SpinAlt,
    Wreath(BaseGroup),
    WeylD,
    Hpw(usize),
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Sym => "sym",
            Family::Alt => "alt",
            Family::SpinSym => "spin-sym",
            Family::SpinAlt => "spin-alt",
            Family::Wreath(_) => "wreath",
            Family::WeylD => "weylD",
            Family::Hpw(_) => "hpw",
        }
    }

    /// Element orders of the base group classes for multipartition-labelled tables.
    fn base_orders(&self) -> Option<Vec<u64>> {
        match self {
            Family::Wreath(b) => Some(b.orders.clone()),
            Family::WeylD => Some(vec![1, 2]),
            Family::Hpw(p) => semidirect_base(*p).ok().map(|b| b.orders),
            _ => None,
        }
    }
}

/// Named class predicates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ClassPredicate {
    All,
    /// Elements of order prime to `p`.
    PRegular(usize),
    /// Preimages of permutations with no cycle of length an odd multiple of `p`.
    SpinEnlarged(usize),
    /// Multipartition classes whose last component is empty.
    LastEmpty,
    /// Multipartition classes whose first component is empty.
    FirstEmpty,
}

/// A union of classes of a table.
#[derive(Clone, Debug, Serialize)]
pub struct ClassSubset {
    pub id: String,
    pub indices: Vec<usize>,
    pub labels: Vec<ClassLabel>,
}

impl ClassSubset {
    pub fn resolve(t: &CharTable, family: &Family, pred: ClassPredicate) -> ClassSubset {
        let orders = family.base_orders();
        let indices: Vec<usize> = (0..t.num_classes())
            .filter(|&j| class_matches(&t.classes[j], family, orders.as_deref(), pred))
            .collect();
        ClassSubset {
            id: format!("{pred:?}"),
            labels: indices.iter().map(|&j| t.classes[j].clone()).collect(),
            indices,
        }
    }

    pub fn complement(&self, t: &CharTable) -> ClassSubset {
        let indices: Vec<usize> = (0..t.num_classes())
            .filter(|j| !self.indices.contains(j))
            .collect();
        ClassSubset {
            id: format!("not {}", self.id),
            labels: indices.iter().map(|&j| t.classes[j].clone()).collect(),
            indices,
        }
    }

    pub fn contains(&self, j: usize) -> bool {
        self.indices.binary_search(&j).is_ok()
    }
}

fn class_matches(
    c: &ClassLabel,
    family: &Family,
    orders: Option<&[u64]>,
    pred: ClassPredicate,
) -> bool {
    match pred {
        ClassPredicate::All => true,
        ClassPredicate::PRegular(p) => match &c.shape {
            Shape::Single(pi) => {
                let spin = matches!(family, Family::SpinSym | Family::SpinAlt);
                if spin && p == 2 {
                    pi.all_odd() && c.z == Some(0)
                } else {
                    pi.parts().iter().all(|x| x % p != 0)
                }
            }
            Shape::Multi(v) => {
                let orders = orders.expect("base element orders");
                v.iter().zip(orders).all(|(comp, &o)| {
                    comp.is_empty()
                        || (!(o as usize).is_multiple_of(p)
                            && comp.parts().iter().all(|x| x % p != 0))
                })
            }
        },
        ClassPredicate::SpinEnlarged(p) => c
            .partition()
            .parts()
            .iter()
            .all(|x| x % p != 0 || (x / p) % 2 == 0),
        ClassPredicate::LastEmpty => c.multi().last().is_none_or(Partition::is_empty),
        ClassPredicate::FirstEmpty => c.multi().first().is_none_or(Partition::is_empty),
    }
}

/// One block with optional core metadata.
#[derive(Clone, Debug, Serialize)]
pub struct Block {
    pub chars: Vec<CharLabel>,
    pub core: Option<String>,
    pub weight: Option<usize>,
    pub sign: Option<i32>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BlockPartition {
    pub blocks: Vec<Block>,
}

impl BlockPartition {
    /// The underlying set partition, forgetting metadata and order.
    pub fn groups(&self) -> BTreeSet<BTreeSet<CharLabel>> {
        self.blocks
            .iter()
            .map(|b| b.chars.iter().cloned().collect())
            .collect()
    }

    pub fn same_groups(&self, other: &BlockPartition) -> bool {
        self.groups() == other.groups()
    }

    pub fn block_of(&self, ch: &CharLabel) -> Option<&Block> {
        self.blocks.iter().find(|b| b.chars.contains(ch))
    }

    /// Restrict to the given characters (dropping blocks that become empty).
    pub fn restricted(&self, keep: &dyn Fn(&CharLabel) -> bool) -> BlockPartition {
        let blocks = self
            .blocks
            .iter()
            .filter_map(|b| {
                let chars: Vec<CharLabel> = b.chars.iter().filter(|c| keep(c)).cloned().collect();
                (!chars.is_empty()).then(|| Block { chars, ..b.clone() })
            })
            .collect();
        BlockPartition { blocks }
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn closure(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..n).collect();
    for (a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    groups.into_values().collect()
}

/// Blocks as the transitive closure of `<res_C χ, res_C ψ> ≠ 0`.
pub fn kor_blocks(t: &CharTable, c: &ClassSubset) -> BlockPartition {
    let n = t.num_chars();
    let edges: Vec<(usize, usize)> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            ((i + 1)..n)
                .filter(move |&k| {
                    !t.inner(&t.values[i], &t.values[k], Some(&c.indices))
                        .is_zero()
                })
                .map(move |k| (i, k))
        })
        .collect();
    let blocks = closure(n, edges)
        .into_iter()
        .map(|g| Block {
            chars: g.into_iter().map(|i| t.chars[i].clone()).collect(),
            core: None,
            weight: None,
            sign: None,
        })
        .collect();
    BlockPartition { blocks }
}

/// p-regular classes of a base group, read off its element orders.
pub fn base_regular(base: &BaseGroup, p: usize) -> ClassSubset {
    let indices: Vec<usize> = (0..base.table.num_classes())
        .filter(|&j| !(base.orders[j] as usize).is_multiple_of(p))
        .collect();
    ClassSubset {
        id: format!("PRegular({p})"),
        labels: indices
            .iter()
            .map(|&j| base.table.classes[j].clone())
            .collect(),
        indices,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Key {
    tag: String,
    weight: Option<usize>,
    sign: Option<i32>,
}

fn sym_key(l: &Partition, p: usize) -> Key {
    Key {
        tag: format!("({})", l.core(p)),
        weight: Some(l.weight(p)),
        sign: None,
    }
}

fn alt_key(l: &Partition, assoc: Split, p: usize) -> Key {
    let g = l.core(p);
    let gs = g.conjugate();
    let w = l.weight(p);
    let mut tag = format!("({})", g.clone().min(gs));
    if w == 0 && l.is_self_conjugate() {
        tag.push_str(if assoc == Split::Minus { "-" } else { "+" });
    }
    Key {
        tag,
        weight: Some(w),
        sign: None,
    }
}

fn spin_key(l: &Partition, assoc: Split, p: usize) -> Key {
    let b = BarPartition::new(l.parts().to_vec()).expect("bar partition");
    let (core, _) = b.bar_core_quotient(p);
    let w = b.bar_weight(p);
    let mut tag = format!("spin({core})");
    if w == 0 && assoc != Split::None {
        tag.push_str(if assoc == Split::Minus { "-" } else { "+" });
    }
    Key {
        tag,
        weight: Some(w),
        sign: Some(core.sigma()),
    }
}

fn core_weight(l: &Partition, p: usize) -> String {
    format!("({}:{})", l.core(p), l.weight(p))
}

/// Blocks predicted from cores and weights.
///
/// For `H ≀ S_w` the characters of each base block of positive defect only
/// contribute their total size, while a defect-zero base character
/// contributes the p-core and weight of its component.
pub fn theoretical_blocks(t: &CharTable, p: usize, family: &Family) -> Result<BlockPartition> {
    let spin_ok = |p: usize| -> Result<()> {
        if p == 2 {
            Err(Error::Unsupported("spin blocks need an odd prime".into()))
        } else {
            Ok(())
        }
    };
    let keys: Vec<Key> = match family {
        Family::Sym => t.chars.iter().map(|c| sym_key(c.partition(), p)).collect(),
        Family::Alt => t
            .chars
            .iter()
            .map(|c| alt_key(c.partition(), c.assoc, p))
            .collect(),
        Family::SpinSym => {
            spin_ok(p)?;
            t.chars
                .iter()
                .map(|c| {
                    if c.spin {
                        spin_key(c.partition(), c.assoc, p)
                    } else {
                        sym_key(c.partition(), p)
                    }
                })
                .collect()
        }
        Family::SpinAlt => {
            spin_ok(p)?;
            t.chars
                .iter()
                .map(|c| {
                    if c.spin {
                        spin_key(c.partition(), c.assoc, p)
                    } else {
                        alt_key(c.partition(), c.assoc, p)
                    }
                })
                .collect()
        }
        Family::Wreath(base) => {
            let bblocks: Vec<Vec<usize>> = kor_blocks(&base.table, &base_regular(base, p))
                .blocks
                .iter()
                .map(|b| {
                    b.chars
                        .iter()
                        .map(|c| base.table.char_index(c).expect("base char"))
                        .collect()
                })
                .collect();
            t.chars
                .iter()
                .map(|c| {
                    let m = c.multi();
                    let parts: Vec<String> = bblocks
                        .iter()
                        .map(|b| {
                            if b.len() == 1 {
                                core_weight(&m[b[0]], p)
                            } else {
                                b.iter().map(|&s| m[s].size()).sum::<usize>().to_string()
                            }
                        })
                        .collect();
                    Key {
                        tag: format!("[{}]", parts.join(",")),
                        weight: None,
                        sign: None,
                    }
                })
                .collect()
        }
        Family::WeylD => t
            .chars
            .iter()
            .map(|c| {
                if p == 2 {
                    return Key {
                        tag: "all".into(),
                        weight: None,
                        sign: None,
                    };
                }
                let m = c.multi();
                let mut ends = [core_weight(&m[0], p), core_weight(&m[1], p)];
                ends.sort();
                let mut tag = format!("{{{},{}}}", ends[0], ends[1]);
                if m[0] == m[1] && m[0].weight(p) == 0 && c.assoc != Split::None {
                    tag.push_str(if c.assoc == Split::Minus { "-" } else { "+" });
                }
                Key {
                    tag,
                    weight: Some(m[0].weight(p) + m[1].weight(p)),
                    sign: None,
                }
            })
            .collect(),
        Family::Hpw(q) => {
            if p != *q {
                return Err(Error::Unsupported(format!(
                    "blocks of H_{{{q},w}} at p = {p}"
                )));
            }
            // the base Z_p^w is a self-centralizing normal p-subgroup
            t.chars
                .iter()
                .map(|_| Key {
                    tag: "all".into(),
                    weight: None,
                    sign: None,
                })
                .collect()
        }
    };
    let mut groups: BTreeMap<Key, Vec<CharLabel>> = BTreeMap::new();
    for (c, k) in t.chars.iter().zip(keys) {
        groups.entry(k).or_default().push(c.clone());
    }
    let blocks = groups
        .into_iter()
        .map(|(k, chars)| Block {
            chars,
            core: Some(k.tag),
            weight: k.weight,
            sign: k.sign,
        })
        .collect();
    Ok(BlockPartition { blocks })
}

/// Integral data of a rational table restricted to a class subset.
#[derive(Clone, Debug, Serialize)]
pub struct LatticeData {
    /// Z-basis of the span of the restricted characters, one row per basis vector.
    #[serde(serialize_with = "ser_matrix")]
    pub basis: Vec<Vec<BigInt>>,
    /// `res_C χ = Σ_φ d_{χφ} b_φ`.
    #[serde(serialize_with = "ser_matrix")]
    pub decomposition: Vec<Vec<BigInt>>,
    /// `Φ_φ = Σ_χ d_{χφ} χ` on all classes.
    #[serde(serialize_with = "ser_matrix")]
    pub duals: Vec<Vec<BigInt>>,
    pub blocks: BlockPartition,
}

fn ser_matrix<S: serde::Serializer>(
    m: &[Vec<BigInt>],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    let v: Vec<Vec<String>> = m
        .iter()
        .map(|r| r.iter().map(|x| x.to_string()).collect())
        .collect();
    v.serialize(s)
}

/// Row echelon form over Z with reduced entries above pivots; returns the nonzero rows.
pub fn hermite_rows(mut m: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        // smallest nonzero |entry| in column c at or below r
        while let Some(piv) = (r..m.len())
            .filter(|&i| !m[i][c].is_zero())
            .min_by(|&a, &b| m[a][c].abs().cmp(&m[b][c].abs()))
        {
            m.swap(r, piv);
            let mut done = true;
            for i in r + 1..m.len() {
                if m[i][c].is_zero() {
                    continue;
                }
                let q = m[i][c].div_floor(&m[r][c]);
                let pr = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(&pr) {
                    *x -= &q * y;
                }
                if !m[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if m[r][c].is_zero() {
            continue;
        }
        if m[r][c].is_negative() {
            m[r].iter_mut().for_each(|x| *x = -x.clone());
        }
        for i in 0..r {
            let q = m[i][c].div_floor(&m[r][c]);
            if !q.is_zero() {
                let pr = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(&pr) {
                    *x -= &q * y;
                }
            }
        }
        r += 1;
    }
    m.truncate(r);
    m
}

fn integer_value(t: &CharTable, i: usize, j: usize) -> Result<BigInt> {
    let q = t.values[i][j].as_rational().ok_or_else(|| {
        Error::InvalidParameter(format!(
            "irrational value {} of {}",
            t.values[i][j], t.chars[i]
        ))
    })?;
    if !q.is_integer() {
        return Err(Error::InvalidParameter(format!("non-integral value {q}")));
    }
    Ok(q.to_integer())
}

/// Z-basis, decomposition matrix, dual class functions and the resulting blocks.
///
/// The basis is built block by block over the Gram-closure blocks, so the
/// decomposition matrix is block diagonal and its connected components can be
/// compared with those blocks.
pub fn rational_lattice_suite(t: &CharTable, c: &ClassSubset) -> Result<LatticeData> {
    let n = t.num_chars();
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        rows.push(
            c.indices
                .iter()
                .map(|&j| integer_value(t, i, j))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    let kor = kor_blocks(t, c);
    let mut basis = Vec::new();
    for b in &kor.blocks {
        let idx: Vec<usize> = b
            .chars
            .iter()
            .map(|ch| t.char_index(ch).expect("own char"))
            .collect();
        basis.extend(hermite_rows(idx.iter().map(|&i| rows[i].clone()).collect()));
    }
    if hermite_rows(basis.clone()) != hermite_rows(rows.clone()) {
        return Err(Error::InconsistentSplit(
            "block lattices do not span the restricted lattice".into(),
        ));
    }
    let decomposition: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| {
            solve(&basis, r)
                .ok_or_else(|| Error::InconsistentSplit("row outside the lattice".into()))
        })
        .collect::<Result<_>>()?;
    let mut duals = Vec::with_capacity(basis.len());
    for phi in 0..basis.len() {
        let mut v = vec![BigInt::zero(); t.num_classes()];
        for (i, d) in decomposition.iter().enumerate() {
            if d[phi].is_zero() {
                continue;
            }
            for (j, x) in v.iter_mut().enumerate() {
                *x += &d[phi] * integer_value(t, i, j)?;
            }
        }
        duals.push(v);
    }
    let edges = (0..n)
        .flat_map(|i| (0..n).map(move |k| (i, k)))
        .filter(|&(i, k)| {
            i < k
                && (0..basis.len())
                    .any(|f| !decomposition[i][f].is_zero() && !decomposition[k][f].is_zero())
        });
    let blocks = closure(n, edges)
        .into_iter()
        .map(|g| Block {
            chars: g.into_iter().map(|i| t.chars[i].clone()).collect(),
            core: None,
            weight: None,
            sign: None,
        })
        .collect();
    Ok(LatticeData {
        basis,
        decomposition,
        duals,
        blocks: BlockPartition { blocks },
    })
}

/// Integer coordinates of `v` in a linearly independent basis.
fn solve(basis: &[Vec<BigInt>], v: &[BigInt]) -> Option<Vec<BigInt>> {
    use num_rational::BigRational;
    let k = basis.len();
    let m = v.len();
    let mut a: Vec<Vec<BigRational>> = (0..m)
        .map(|j| {
            let mut r: Vec<BigRational> = basis
                .iter()
                .map(|b| BigRational::from(b[j].clone()))
                .collect();
            r.push(BigRational::from(v[j].clone()));
            r
        })
        .collect();
    let mut piv = Vec::new();
    let mut row = 0;
    for col in 0..k {
        let Some(p) = (row..m).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        let inv = a[row][col].recip();
        a[row].iter_mut().for_each(|x| *x *= &inv);
        for i in 0..m {
            if i != row && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                let pr = a[row].clone();
                for (x, y) in a[i].iter_mut().zip(&pr) {
                    *x -= &f * y;
                }
            }
        }
        piv.push(col);
        row += 1;
    }
    if a[row..].iter().any(|r| !r[k].is_zero()) {
        return None;
    }
    let mut out = vec![BigInt::zero(); k];
    for (r, &c) in piv.iter().enumerate() {
        if !a[r][k].is_integer() {
            return None;
        }
        out[c] = a[r][k].to_integer();
    }
    Some(out)
}

/// `<Φ_φ, b_ψ>` over the subset, which is the identity matrix for a dual basis.
pub fn dual_pairing(
    t: &CharTable,
    c: &ClassSubset,
    data: &LatticeData,
) -> Vec<Vec<num_rational::BigRational>> {
    data.duals
        .iter()
        .map(|phi| {
            data.basis
                .iter()
                .map(|b| {
                    c.indices
                        .iter()
                        .zip(b)
                        .map(|(&j, bj)| {
                            num_rational::BigRational::new(
                                &phi[j] * bj,
                                BigInt::from(t.classes[j].central_order),
                            )
                        })
                        .fold(num_rational::BigRational::zero(), |a, x| a + x)
                })
                .collect()
        })
        .collect()
}

pub fn is_identity(m: &[Vec<num_rational::BigRational>]) -> bool {
    m.iter().enumerate().all(|(i, r)| {
        r.iter()
            .enumerate()
            .all(|(j, x)| if i == j { x.is_one() } else { x.is_zero() })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chars_spin::{tilde_an_table, tilde_sn_table};
    use crate::chars_sym_alt::{an_table, sn_table};
    use crate::chars_wreath::{cyclic_base, dn_table, gpw_table, hpw_table, wreath_table};
    use crate::partitions::part;

    fn agree(t: &CharTable, p: usize, f: &Family) {
        let c = ClassSubset::resolve(t, f, ClassPredicate::PRegular(p));
        let k = kor_blocks(t, &c);
        let th = theoretical_blocks(t, p, f).unwrap();
        assert!(
            k.same_groups(&th),
            "{} p = {p}: kor {:?} vs theory {:?}",
            t.name,
            k.groups(),
            th.groups()
        );
    }

    #[test]
    fn all_classes_give_singletons() {
        let t = sn_table(5);
        let c = ClassSubset::resolve(&t, &Family::Sym, ClassPredicate::All);
        assert!(kor_blocks(&t, &c).blocks.iter().all(|b| b.chars.len() == 1));
        let d = rational_lattice_suite(&t, &c).unwrap();
        assert_eq!(d.basis.len(), t.num_chars());
        assert!(is_identity(&dual_pairing(&t, &c, &d)));
    }

    #[test]
    fn s3_at_three() {
        let t = sn_table(3);
        let c = ClassSubset::resolve(&t, &Family::Sym, ClassPredicate::PRegular(3));
        assert_eq!(c.indices.len(), 2);
        assert_eq!(kor_blocks(&t, &c).blocks.len(), 1);
        let d = rational_lattice_suite(&t, &c).unwrap();
        assert_eq!(d.decomposition.len(), 3);
        assert_eq!(d.decomposition[0].len(), 2);
        assert_eq!(d.blocks.blocks.len(), 1);
        assert!(is_identity(&dual_pairing(&t, &c, &d)));
    }

    #[test]
    fn sym_and_alt_blocks() {
        for n in 1..=8 {
            for p in [2, 3, 5] {
                agree(&sn_table(n), p, &Family::Sym);
            }
            for p in [2, 3] {
                agree(&an_table(n).unwrap(), p, &Family::Alt);
            }
        }
        let a = an_table(3).unwrap();
        let th = theoretical_blocks(&a, 5, &Family::Alt).unwrap();
        assert_eq!(
            th.block_of(&CharLabel::single(part(&[2, 1])).with_assoc(Split::Plus))
                .unwrap()
                .chars
                .len(),
            1
        );
    }

    #[test]
    fn lattice_blocks_match_kor() {
        for n in 2..=7 {
            let t = sn_table(n);
            for p in [2, 3] {
                let c = ClassSubset::resolve(&t, &Family::Sym, ClassPredicate::PRegular(p));
                let d = rational_lattice_suite(&t, &c).unwrap();
                assert!(d.blocks.same_groups(&kor_blocks(&t, &c)));
                assert!(is_identity(&dual_pairing(&t, &c, &d)));
            }
        }
        assert!(rational_lattice_suite(
            &an_table(4).unwrap(),
            &ClassSubset::resolve(&an_table(4).unwrap(), &Family::Alt, ClassPredicate::All)
        )
        .is_err());
    }

    #[test]
    fn spin_blocks() {
        for n in 1..=8 {
            let s = tilde_sn_table(n);
            let a = tilde_an_table(n).unwrap();
            agree(&s, 3, &Family::SpinSym);
            agree(&a, 3, &Family::SpinAlt);
            for (t, f) in [(&s, Family::SpinSym), (&a, Family::SpinAlt)] {
                let c1 = ClassSubset::resolve(t, &f, ClassPredicate::PRegular(3));
                let c2 = ClassSubset::resolve(t, &f, ClassPredicate::SpinEnlarged(3));
                let spin = |c: &CharLabel| c.spin;
                assert!(kor_blocks(t, &c1)
                    .restricted(&spin)
                    .same_groups(&kor_blocks(t, &c2).restricted(&spin)));
            }
        }
    }

    #[test]
    fn wreath_blocks() {
        for w in 0..=4 {
            agree(
                &wreath_table(&cyclic_base(2).unwrap(), w),
                3,
                &Family::Wreath(cyclic_base(2).unwrap()),
            );
            agree(
                &wreath_table(&cyclic_base(2).unwrap(), w),
                2,
                &Family::Wreath(cyclic_base(2).unwrap()),
            );
            agree(
                &wreath_table(&cyclic_base(3).unwrap(), w),
                2,
                &Family::Wreath(cyclic_base(3).unwrap()),
            );
            agree(
                &wreath_table(&cyclic_base(3).unwrap(), w),
                3,
                &Family::Wreath(cyclic_base(3).unwrap()),
            );
        }
        for w in 0..=3 {
            for p in [2, 3] {
                agree(
                    &gpw_table(3, w).unwrap(),
                    p,
                    &Family::Wreath(semidirect_base(3).unwrap()),
                );
            }
            agree(&hpw_table(3, w).unwrap(), 3, &Family::Hpw(3));
        }
        for n in 2..=6 {
            for p in [2, 3] {
                agree(&dn_table(n).unwrap(), p, &Family::WeylD);
            }
        }
    }
}
