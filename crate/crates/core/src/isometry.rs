//! Signed bijections between blocks, the kernel `Î`, and the generalized,
//! KOR and Broué tests. Also the Murnaghan-Nakayama commutation test
//! `I_λ ∘ r^λ = r'^λ ∘ I` over the singular cycle types of each family.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::barpartitions::{delta_bar_sign, psi_bar, BarPartition};
use crate::blocks::{ClassPredicate, ClassSubset, Family};
use crate::chars_spin::{spin_label, tilde_an_fuse, tilde_an_table, tilde_sn_fuse, tilde_sn_table};
use crate::chars_sym_alt::{an_char_label, an_fuse, an_table, sn_table};
use crate::chars_wreath::{
    cyclic_base, dn_table, hpw_fuse, hpw_table, multi_conj, multi_label, semidirect_base,
    wreath_table, BaseGroup,
};
use crate::error::{Error, Result};
use crate::exactnum::ExactScalar;
use crate::partitions::{block_members, delta_sign, multipartitions, psi_map, Partition};
use crate::table::{CharLabel, CharTable, ClassLabel, Shape, Split};

/// Which construction an isometry follows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    MainAn,
    MainAn2,
    MainAnP2,
    MainTilde,
    BroueTilde,
    BrGr,
    Osima,
    Couronne,
    DnConj,
    DnNonconj,
    Fh,
}

impl Kind {
    pub const ALL: [Kind; 11] = [
        Kind::MainAn,
        Kind::MainAn2,
        Kind::MainAnP2,
        Kind::MainTilde,
        Kind::BroueTilde,
        Kind::BrGr,
        Kind::Osima,
        Kind::Couronne,
        Kind::DnConj,
        Kind::DnNonconj,
        Kind::Fh,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Kind::MainAn => "mainAn",
            Kind::MainAn2 => "mainAn2",
            Kind::MainAnP2 => "mainAn_p2",
            Kind::MainTilde => "mainTilde",
            Kind::BroueTilde => "brouetilde",
            Kind::BrGr => "brgr",
            Kind::Osima => "osima",
            Kind::Couronne => "couronne",
            Kind::DnConj => "dn_conj",
            Kind::DnNonconj => "dn_nonconj",
            Kind::Fh => "fh",
        }
    }

    /// Strongest mode the construction is known to satisfy for weight `w`.
    pub fn asserted_mode(self, p: usize, w: usize) -> Mode {
        match self {
            Kind::Osima => Mode::Generalized,
            Kind::BrGr | Kind::Fh if p <= w => Mode::Generalized,
            _ => Mode::Broue,
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Kind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s) || (s == "mainAnP2" && *k == Kind::MainAnP2))
            .ok_or_else(|| Error::Parse(format!("unknown isometry kind '{s}'")))
    }
}

impl Serialize for Kind {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// Verification modes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Generalized,
    Kor,
    Broue,
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "generalized" => Ok(Mode::Generalized),
            "kor" => Ok(Mode::Kor),
            "broue" => Ok(Mode::Broue),
            _ => Err(Error::Parse(format!("unknown mode '{s}'"))),
        }
    }
}

/// Construction parameters. Single-partition kinds read `core1[0]`,
/// `core2[0]` and `w`; `couronne` and the type D kinds read whole tuples and
/// the componentwise `weights`.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Params {
    pub p: usize,
    pub w: usize,
    pub core1: Vec<Partition>,
    pub core2: Vec<Partition>,
    pub weights: Vec<usize>,
    /// Order of the cyclic base group for `couronne`.
    pub l: usize,
    /// `mainTilde`: take the source block in `Ã_n` instead of `S̃_n`.
    pub source_alt: bool,
}

impl Params {
    pub fn single(p: usize, w: usize, core1: Partition, core2: Partition) -> Self {
        Params {
            p,
            w,
            core1: vec![core1],
            core2: vec![core2],
            ..Default::default()
        }
    }

    pub fn tuple(
        p: usize,
        core1: Vec<Partition>,
        core2: Vec<Partition>,
        weights: Vec<usize>,
    ) -> Self {
        Params {
            p,
            w: weights.iter().sum(),
            core1,
            core2,
            weights,
            ..Default::default()
        }
    }
}

/// `source ↦ sign · target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapEntry {
    pub source: CharLabel,
    pub sign: i32,
    pub target: CharLabel,
}

impl Serialize for MapEntry {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("MapEntry", 3)?;
        st.serialize_field("source", &self.source.to_string())?;
        st.serialize_field("sign", &self.sign)?;
        st.serialize_field("target", &self.target.to_string())?;
        st.end()
    }
}

/// A signed bijection between the characters of two blocks.
#[derive(Clone, Debug)]
pub struct Isometry {
    pub kind: Kind,
    pub params: Params,
    pub source: CharTable,
    pub target: CharTable,
    pub source_family: Family,
    pub target_family: Family,
    pub map: Vec<MapEntry>,
    /// Distinguished source classes of the construction.
    pub c: ClassSubset,
    /// Distinguished target classes of the construction.
    pub c_prime: ClassSubset,
    spec: Spec,
}

#[derive(Clone, Debug)]
enum Spec {
    Alt {
        g1: Partition,
        g2: Partition,
    },
    Spin {
        g1: BarPartition,
        g2: BarPartition,
        src_alt: bool,
        tgt_alt: bool,
    },
    SymWreath {
        brgr: bool,
        g: Partition,
    },
    Couronne {
        l: usize,
        g1: Vec<Partition>,
        g2: Vec<Partition>,
        b: Vec<usize>,
    },
    Dn {
        g1: Vec<Partition>,
        g2: Vec<Partition>,
        b: Vec<usize>,
    },
    Fh {
        g: Partition,
    },
}

/// How one side of a construction is realized as a family of groups.
#[derive(Clone, Debug)]
enum Side {
    Sym,
    Alt,
    SpinSym,
    SpinAlt,
    /// `base ≀ S_w`; singular labels add cycles to the given component.
    WreathComp(BaseGroup, usize),
    /// `Z_l ≀ S_n`; singular labels add `p`-divisible cycles componentwise.
    Couronne(BaseGroup),
    WeylD,
    Hpw(usize),
}

impl Side {
    fn family(&self) -> Family {
        match self {
            Side::Sym => Family::Sym,
            Side::Alt => Family::Alt,
            Side::SpinSym => Family::SpinSym,
            Side::SpinAlt => Family::SpinAlt,
            Side::WreathComp(b, _) | Side::Couronne(b) => Family::Wreath(b.clone()),
            Side::WeylD => Family::WeylD,
            Side::Hpw(p) => Family::Hpw(*p),
        }
    }

    /// Whether singular sizes are counted in points (`p` per unit) or in wreath letters.
    fn points_per_unit(&self, p: usize) -> usize {
        match self {
            Side::WreathComp(..) | Side::Hpw(_) => 1,
            _ => p,
        }
    }

    fn table(&self, size: usize) -> Result<CharTable> {
        match self {
            Side::Sym => Ok(sn_table(size)),
            Side::Alt => an_table(size),
            Side::SpinSym => Ok(tilde_sn_table(size)),
            Side::SpinAlt => tilde_an_table(size),
            Side::WreathComp(b, _) | Side::Couronne(b) => {
                let t = wreath_table(b, size);
                if b.table.name.contains(':') {
                    Ok(CharTable {
                        name: format!("G{},{size}", b.table.num_classes()),
                        ..t
                    })
                } else {
                    Ok(t)
                }
            }
            Side::WeylD => dn_table(size),
            Side::Hpw(p) => hpw_table(*p, size),
        }
    }

    /// Whether a singular label (in units) names classes of this family.
    fn admits(&self, beta: &[Partition], p: usize) -> bool {
        match self {
            Side::Alt | Side::Hpw(_) => {
                let b = &beta[0];
                b.parts()
                    .iter()
                    .filter(|&&x| (p * x).is_multiple_of(2))
                    .count()
                    % 2
                    == 0
            }
            Side::SpinSym | Side::SpinAlt => beta[0].parts().iter().all(|&x| (p * x) % 2 == 1),
            Side::WeylD => beta[1].len().is_multiple_of(2),
            _ => true,
        }
    }

    /// The class label of `x_β · g` for `g` in `class` of the smaller group.
    fn fuse(&self, beta: &[Partition], p: usize, class: &ClassLabel) -> ClassLabel {
        match self {
            Side::Sym => ClassLabel::single(class.partition().union(&beta[0].scaled(p)), 0),
            Side::Alt => {
                let cycles: Vec<usize> = beta[0].parts().iter().map(|x| x * p).collect();
                an_fuse(&cycles, class)
            }
            Side::SpinSym => beta[0]
                .parts()
                .iter()
                .fold(class.clone(), |c, &x| tilde_sn_fuse(x * p, &c)),
            Side::SpinAlt => beta[0]
                .parts()
                .iter()
                .fold(class.clone(), |c, &x| tilde_an_fuse(x * p, &c)),
            Side::WreathComp(_, comp) => {
                let mut v = class.multi().to_vec();
                v[*comp] = v[*comp].union(&beta[0]);
                ClassLabel::new(Shape::Multi(v), 0)
            }
            Side::Couronne(_) | Side::WeylD => {
                let v: Vec<Partition> = class
                    .multi()
                    .iter()
                    .zip(beta)
                    .map(|(c, b)| c.union(&b.scaled(p)))
                    .collect();
                let splits = matches!(self, Side::WeylD)
                    && v[1].is_empty()
                    && v[0].parts().iter().all(|x| x % 2 == 0)
                    && !v[0].is_empty();
                let split = if splits {
                    if class.split == Split::None {
                        Split::Plus
                    } else {
                        class.split
                    }
                } else {
                    Split::None
                };
                ClassLabel {
                    split,
                    ..ClassLabel::new(Shape::Multi(v), 0)
                }
            }
            Side::Hpw(_) => {
                let mut c = class.clone();
                let mut evens = Vec::new();
                for &x in beta[0].parts() {
                    if x % 2 == 1 {
                        c = hpw_fuse(x, &c);
                    } else {
                        evens.push(x);
                    }
                }
                if evens.is_empty() {
                    c
                } else {
                    let mut v = c.multi().to_vec();
                    let last = v.len() - 1;
                    v[last] = v[last].union(&Partition::from_unsorted(evens));
                    ClassLabel::new(Shape::Multi(v), 0)
                }
            }
        }
    }
}

fn find(t: &CharTable, cands: &[CharLabel]) -> Result<CharLabel> {
    cands
        .iter()
        .find(|c| t.char_index(c).is_some())
        .cloned()
        .ok_or_else(|| Error::InconsistentSplit(format!("no character {} in {}", cands[0], t.name)))
}

/// One level of a construction: the block characters on both sides and
/// the map, when the block sizes allow the formula to be a bijection.
#[derive(Clone, Debug)]
struct Level {
    source_chars: Vec<CharLabel>,
    target_chars: Vec<CharLabel>,
    map: Option<Vec<MapEntry>>,
}

fn finish(entries: Vec<MapEntry>) -> Level {
    let mut by_source: BTreeMap<CharLabel, (i32, CharLabel)> = BTreeMap::new();
    let mut ok = true;
    let mut order = Vec::new();
    let all_targets: BTreeSet<CharLabel> = entries.iter().map(|e| e.target.clone()).collect();
    for e in entries {
        match by_source.get(&e.source) {
            Some((s, t)) => ok &= *s == e.sign && *t == e.target,
            None => {
                order.push(e.source.clone());
                by_source.insert(e.source.clone(), (e.sign, e.target.clone()));
            }
        }
    }
    let targets: BTreeSet<CharLabel> = by_source.values().map(|(_, t)| t.clone()).collect();
    ok &= targets.len() == by_source.len();
    let map: Vec<MapEntry> = order
        .iter()
        .map(|s| {
            let (sign, target) = by_source[s].clone();
            MapEntry {
                source: s.clone(),
                sign,
                target,
            }
        })
        .collect();
    let target_chars: Vec<CharLabel> = all_targets.into_iter().collect();
    Level {
        source_chars: order,
        target_chars,
        map: if ok { Some(map) } else { None },
    }
}

fn both_halves(t: &CharTable, base: &CharLabel) -> Vec<CharLabel> {
    let plus = base.with_assoc(Split::Plus);
    if t.char_index(&plus).is_some() {
        vec![plus, base.with_assoc(Split::Minus)]
    } else {
        vec![base.with_assoc(Split::None)]
    }
}

fn pm(s: i32) -> i32 {
    if s % 2 == 0 {
        1
    } else {
        -1
    }
}

fn alt_level(
    src: &CharTable,
    tgt: &CharTable,
    p: usize,
    g1: &Partition,
    g2: &Partition,
    w: usize,
) -> Result<Level> {
    let mut e = Vec::new();
    for lam in block_members(g1, p, w) {
        let conj = lam.conjugate();
        let self_conj = conj == lam;
        if g1.is_self_conjugate() && conj > lam {
            continue;
        }
        let mu = psi_map(&lam, p, g2)?;
        if self_conj != mu.is_self_conjugate() {
            return Err(Error::NotSelfConjugate(format!(
                "Ψ({lam}) = {mu} changes self-conjugacy"
            )));
        }
        let s = delta_sign(&lam, p) * delta_sign(&mu, p);
        if self_conj {
            let plain_l = CharLabel::single(lam.clone());
            let plain_m = CharLabel::single(mu.clone());
            for eps in [1, -1] {
                let a = find(
                    src,
                    &[an_char_label(&lam, Split::from_sign(eps)), plain_l.clone()],
                )?;
                let b = find(
                    tgt,
                    &[
                        an_char_label(&mu, Split::from_sign(eps * s)),
                        plain_m.clone(),
                    ],
                )?;
                e.push(MapEntry {
                    source: a,
                    sign: s,
                    target: b,
                });
            }
        } else {
            e.push(MapEntry {
                source: an_char_label(&lam, Split::None),
                sign: s,
                target: an_char_label(&mu, Split::None),
            });
        }
    }
    Ok(finish(e))
}

fn spin_level(
    src: &CharTable,
    tgt: &CharTable,
    p: usize,
    g1: &BarPartition,
    g2: &BarPartition,
    w: usize,
) -> Result<Level> {
    let mut e = Vec::new();
    for lam in BarPartition::all(g1.size() + p * w) {
        if lam.bar_core(p) != *g1 {
            continue;
        }
        let mu = psi_bar(&lam, p, g2)?;
        let (dl, dm) = (delta_bar_sign(&lam, p), delta_bar_sign(&mu, p));
        let s = dl * dm;
        let sa = both_halves(src, &spin_label(&lam, Split::None));
        let ta = both_halves(tgt, &spin_label(&mu, Split::None));
        match (sa.len(), ta.len()) {
            (2, 2) => {
                for eps in [1, -1] {
                    e.push(MapEntry {
                        source: spin_label(&lam, Split::from_sign(eps * dl)),
                        sign: s,
                        target: spin_label(&mu, Split::from_sign(eps * dm)),
                    });
                }
            }
            (1, 1) => e.push(MapEntry {
                source: sa[0].clone(),
                sign: s,
                target: ta[0].clone(),
            }),
            _ => {
                // one side splits and the other does not: no bijection at this level
                for (a, b) in sa.iter().cycle().zip(ta.iter().cycle()).take(2) {
                    e.push(MapEntry {
                        source: a.clone(),
                        sign: s,
                        target: b.clone(),
                    });
                }
            }
        }
    }
    Ok(finish(e))
}

/// `χ_λ ↦ (-1)^|λ_p*| δ_p(λ) θ_λ̃` (BrGr) or `χ_λ ↦ δ_p(λ) θ_λ^(p)` (Osima).
fn sym_wreath_level(p: usize, g: &Partition, w: usize, brgr: bool) -> Level {
    let mut e = Vec::new();
    for lam in block_members(g, p, w) {
        let (_, q) = lam.core_quotient(p);
        let mut comps = q.components;
        let mut sign = delta_sign(&lam, p);
        if brgr {
            let ps = middle(p);
            sign *= pm(comps[ps].size() as i32);
            comps[ps] = comps[ps].conjugate();
        }
        e.push(MapEntry {
            source: CharLabel::single(lam),
            sign,
            target: multi_label(&comps),
        });
    }
    finish(e)
}

/// 0-based index of the middle quotient component `p*`.
fn middle(p: usize) -> usize {
    if p == 2 {
        1
    } else {
        (p - 1) / 2
    }
}

fn tuples(cores: &[Partition], p: usize, b: &[usize]) -> Vec<Vec<Partition>> {
    let mut out = vec![Vec::new()];
    for (g, &bi) in cores.iter().zip(b) {
        let members = block_members(g, p, bi);
        out = out
            .into_iter()
            .flat_map(|head| {
                members.iter().map(move |m| {
                    let mut v = head.clone();
                    v.push(m.clone());
                    v
                })
            })
            .collect();
    }
    out
}

fn couronne_level(
    p: usize,
    g1: &[Partition],
    g2: &[Partition],
    weight_sets: &[Vec<usize>],
) -> Result<Level> {
    let mut e = Vec::new();
    for b in weight_sets {
        for mu in tuples(g1, p, b) {
            let mut sign = 1;
            let mut nu = Vec::new();
            for (m, g) in mu.iter().zip(g2) {
                let x = psi_map(m, p, g)?;
                sign *= delta_sign(m, p) * delta_sign(&x, p);
                nu.push(x);
            }
            e.push(MapEntry {
                source: multi_label(&mu),
                sign,
                target: multi_label(&nu),
            });
        }
    }
    Ok(finish(e))
}

fn dn_level(
    src: &CharTable,
    tgt: &CharTable,
    p: usize,
    g1: &[Partition],
    g2: &[Partition],
    weight_sets: &[Vec<usize>],
) -> Result<Level> {
    let mut e = Vec::new();
    for b in weight_sets {
        for mu in tuples(g1, p, b) {
            let nu = vec![psi_map(&mu[0], p, &g2[0])?, psi_map(&mu[1], p, &g2[1])?];
            let d: Vec<i32> = (0..2)
                .map(|i| delta_sign(&mu[i], p) * delta_sign(&nu[i], p))
                .collect();
            if mu[0] == mu[1] {
                let (lm, ln) = (multi_label(&mu), multi_label(&nu));
                for eps in [1, -1] {
                    let a = find(src, &[lm.with_assoc(Split::from_sign(eps)), lm.clone()])?;
                    let t = find(
                        tgt,
                        &[ln.with_assoc(Split::from_sign(eps * d[0])), ln.clone()],
                    )?;
                    e.push(MapEntry {
                        source: a,
                        sign: 1,
                        target: t,
                    });
                }
            } else {
                let swap = |v: &[Partition]| vec![v[1].clone(), v[0].clone()];
                let a = find(src, &[multi_label(&mu), multi_label(&swap(&mu))])?;
                let t = find(tgt, &[multi_label(&nu), multi_label(&swap(&nu))])?;
                e.push(MapEntry {
                    source: a,
                    sign: d[0] * d[1],
                    target: t,
                });
            }
        }
    }
    Ok(finish(e))
}

/// `ρ_λ^ε ↦ (-1)^|λ_p*| δ_p(λ) ϑ_λ̃^(ε δ_p(λ) twist)`.
fn fh_level(
    src: &CharTable,
    tgt: &CharTable,
    p: usize,
    g: &Partition,
    w: usize,
    twist: i32,
) -> Result<Level> {
    let mut e = Vec::new();
    for lam in block_members(g, p, w) {
        let conj = lam.conjugate();
        if conj > lam {
            continue;
        }
        let (_, q) = lam.core_quotient(p);
        let mut comps = q.components;
        let ps = middle(p);
        let d = delta_sign(&lam, p);
        let sign = pm(comps[ps].size() as i32) * d;
        comps[ps] = comps[ps].conjugate();
        let tl = multi_label(&comps);
        if conj == lam {
            for eps in [1, -1] {
                let a = find(
                    src,
                    &[
                        an_char_label(&lam, Split::from_sign(eps)),
                        CharLabel::single(lam.clone()),
                    ],
                )?;
                let t = find(
                    tgt,
                    &[tl.with_assoc(Split::from_sign(eps * d * twist)), tl.clone()],
                )?;
                e.push(MapEntry {
                    source: a,
                    sign,
                    target: t,
                });
            }
        } else {
            let t = find(tgt, &[tl.clone(), multi_label(&multi_conj(&comps))])?;
            e.push(MapEntry {
                source: an_char_label(&lam, Split::None),
                sign,
                target: t,
            });
        }
    }
    Ok(finish(e))
}

/// Weight tuples `a ≤ b` with `Σ a = Σ b - k`.
fn weight_sets(b: &[usize], k: usize) -> Vec<Vec<usize>> {
    let total: usize = b.iter().sum();
    if k > total {
        return Vec::new();
    }
    let mut out = vec![Vec::new()];
    for &bi in b {
        out = out
            .into_iter()
            .flat_map(|h: Vec<usize>| {
                (0..=bi).map(move |a| {
                    let mut v = h.clone();
                    v.push(a);
                    v
                })
            })
            .collect();
    }
    out.retain(|v| v.iter().sum::<usize>() == total - k);
    out
}

impl Spec {
    fn sides(&self, p: usize) -> Result<(Side, Side)> {
        Ok(match self {
            Spec::Alt { .. } => (Side::Alt, Side::Alt),
            Spec::Spin {
                src_alt, tgt_alt, ..
            } => (
                if *src_alt {
                    Side::SpinAlt
                } else {
                    Side::SpinSym
                },
                if *tgt_alt {
                    Side::SpinAlt
                } else {
                    Side::SpinSym
                },
            ),
            Spec::SymWreath { brgr: true, .. } => {
                (Side::Sym, Side::WreathComp(semidirect_base(p)?, p - 1))
            }
            Spec::SymWreath { brgr: false, .. } => {
                (Side::Sym, Side::WreathComp(cyclic_base(p)?, 0))
            }
            Spec::Couronne { l, .. } => (
                Side::Couronne(cyclic_base(*l)?),
                Side::Couronne(cyclic_base(*l)?),
            ),
            Spec::Dn { .. } => (Side::WeylD, Side::WeylD),
            Spec::Fh { .. } => (Side::Alt, Side::Hpw(p)),
        })
    }

    /// Group sizes (points or wreath letters) of the top level.
    fn sizes(&self, p: usize, w: usize) -> (usize, usize) {
        match self {
            Spec::Alt { g1, g2 } => (g1.size() + p * w, g2.size() + p * w),
            Spec::Spin { g1, g2, .. } => (g1.size() + p * w, g2.size() + p * w),
            Spec::SymWreath { g, .. } => (g.size() + p * w, w),
            Spec::Couronne { g1, g2, .. } | Spec::Dn { g1, g2, .. } => {
                let s1: usize = g1.iter().map(Partition::size).sum();
                let s2: usize = g2.iter().map(Partition::size).sum();
                (s1 + p * w, s2 + p * w)
            }
            Spec::Fh { g } => (g.size() + p * w, w),
        }
    }

    fn units(&self) -> usize {
        match self {
            Spec::Couronne { g1, .. } => g1.len(),
            Spec::Dn { .. } => 2,
            _ => 1,
        }
    }

    /// The construction at `k` units below the top.
    fn level(
        &self,
        p: usize,
        w: usize,
        k: usize,
        twist: i32,
        src: &CharTable,
        tgt: &CharTable,
    ) -> Result<Level> {
        let wk = w - k;
        match self {
            Spec::Alt { g1, g2 } => alt_level(src, tgt, p, g1, g2, wk),
            Spec::Spin { g1, g2, .. } => spin_level(src, tgt, p, g1, g2, wk),
            Spec::SymWreath { brgr, g } => Ok(sym_wreath_level(p, g, wk, *brgr)),
            Spec::Couronne { g1, g2, b, .. } => couronne_level(p, g1, g2, &weight_sets(b, k)),
            Spec::Dn { g1, g2, b } => dn_level(src, tgt, p, g1, g2, &weight_sets(b, k)),
            Spec::Fh { g } => fh_level(src, tgt, p, g, wk, twist),
        }
    }
}

fn single(v: &[Partition], what: &str) -> Result<Partition> {
    match v {
        [x] => Ok(x.clone()),
        _ => Err(Error::InvalidParameter(format!(
            "{what} needs exactly one partition"
        ))),
    }
}

fn check_core(g: &Partition, p: usize) -> Result<()> {
    if g.is_core(p) {
        Ok(())
    } else {
        Err(Error::NotACore(g.to_string(), p))
    }
}

fn bar_of(g: &Partition, p: usize) -> Result<BarPartition> {
    let b =
        BarPartition::new(g.parts().to_vec()).map_err(|_| Error::NotABarCore(g.to_string(), p))?;
    if !b.is_bar_core(p) {
        return Err(Error::NotABarCore(g.to_string(), p));
    }
    Ok(b)
}

fn odd_p(kind: Kind, p: usize) -> Result<()> {
    if p.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "{kind} needs an odd prime, got p = {p}"
        )));
    }
    Ok(())
}

fn spec_for(kind: Kind, params: &Params) -> Result<Spec> {
    let p = params.p;
    if !(2..=7).contains(&p) || p == 4 || p == 6 {
        return Err(Error::InvalidParameter(format!(
            "p = {p} is not a supported prime"
        )));
    }
    Ok(match kind {
        Kind::MainAn | Kind::MainAn2 | Kind::MainAnP2 => {
            let g1 = single(&params.core1, "core1")?;
            let g2 = single(&params.core2, "core2")?;
            check_core(&g1, p)?;
            check_core(&g2, p)?;
            match kind {
                Kind::MainAnP2 if p != 2 => {
                    return Err(Error::InvalidParameter(
                        "mainAn_p2 is the p = 2 construction".into(),
                    ))
                }
                Kind::MainAn | Kind::MainAn2 => odd_p(kind, p)?,
                _ => {}
            }
            let sc = (g1.is_self_conjugate(), g2.is_self_conjugate());
            match kind {
                Kind::MainAn if sc != (true, true) => {
                    return Err(Error::NotSelfConjugate(format!(
                        "mainAn needs self-conjugate cores, got {g1} and {g2}"
                    )))
                }
                Kind::MainAn2 if sc != (false, false) => {
                    return Err(Error::InvalidParameter(format!(
                        "mainAn2 needs non-self-conjugate cores, got {g1} and {g2}"
                    )))
                }
                _ => {}
            }
            Spec::Alt { g1, g2 }
        }
        Kind::MainTilde | Kind::BroueTilde => {
            odd_p(kind, p)?;
            let g1 = bar_of(&single(&params.core1, "core1")?, p)?;
            let g2 = bar_of(&single(&params.core2, "core2")?, p)?;
            let same = g1.sigma() == g2.sigma();
            if kind == Kind::BroueTilde {
                if !same {
                    return Err(Error::SignPrecondition(format!(
                        "brouetilde needs σ({g1}) = σ({g2})"
                    )));
                }
                Spec::Spin {
                    g1,
                    g2,
                    src_alt: true,
                    tgt_alt: true,
                }
            } else if params.source_alt {
                if same {
                    return Err(Error::SignPrecondition(format!(
                        "an Ã_n source needs σ({g1}) = -σ({g2}); use brouetilde for equal signs"
                    )));
                }
                Spec::Spin {
                    g1,
                    g2,
                    src_alt: true,
                    tgt_alt: false,
                }
            } else {
                Spec::Spin {
                    g1,
                    g2,
                    src_alt: false,
                    tgt_alt: !same,
                }
            }
        }
        Kind::BrGr | Kind::Osima => {
            if p > 3 {
                return Err(Error::Unsupported(format!("{kind} base group for p = {p}")));
            }
            let g = single(&params.core1, "core1")?;
            check_core(&g, p)?;
            Spec::SymWreath {
                brgr: kind == Kind::BrGr,
                g,
            }
        }
        Kind::Couronne => {
            let l = params.l;
            if l == 0 || l.is_multiple_of(p) {
                return Err(Error::InvalidParameter(format!(
                    "couronne needs p ∤ l, got l = {l}"
                )));
            }
            if params.core1.len() != l || params.core2.len() != l || params.weights.len() != l {
                return Err(Error::InvalidParameter(format!(
                    "couronne needs {l} cores and weights per side"
                )));
            }
            for g in params.core1.iter().chain(&params.core2) {
                check_core(g, p)?;
            }
            Spec::Couronne {
                l,
                g1: params.core1.clone(),
                g2: params.core2.clone(),
                b: params.weights.clone(),
            }
        }
        Kind::DnConj | Kind::DnNonconj => {
            odd_p(kind, p)?;
            if params.core1.len() != 2 || params.core2.len() != 2 || params.weights.len() != 2 {
                return Err(Error::InvalidParameter(
                    "type D needs two cores per side and two weights".into(),
                ));
            }
            for g in params.core1.iter().chain(&params.core2) {
                check_core(g, p)?;
            }
            let (g1, g2, b) = (
                params.core1.clone(),
                params.core2.clone(),
                params.weights.clone(),
            );
            let conj = (g1[0] == g1[1], g2[0] == g2[1]);
            if kind == Kind::DnConj && (conj != (true, true) || b[0] != b[1]) {
                return Err(Error::InvalidParameter(
                    "dn_conj needs cores (γ,γ), (γ',γ') and weight (b,b)".into(),
                ));
            }
            if kind == Kind::DnNonconj && conj != (false, false) {
                return Err(Error::InvalidParameter(
                    "dn_nonconj needs γ1 ≠ γ2 on both sides".into(),
                ));
            }
            Spec::Dn { g1, g2, b }
        }
        Kind::Fh => {
            odd_p(kind, p)?;
            if p != 3 {
                return Err(Error::Unsupported(format!(
                    "H_{{{p},w}} tables for p = {p}"
                )));
            }
            let g = single(&params.core1, "core1")?;
            check_core(&g, p)?;
            if !g.is_self_conjugate() {
                return Err(Error::NotSelfConjugate(g.to_string()));
            }
            Spec::Fh { g }
        }
    })
}

fn effective_weight(kind: Kind, params: &Params) -> usize {
    match kind {
        Kind::Couronne | Kind::DnConj | Kind::DnNonconj => params.weights.iter().sum(),
        _ => params.w,
    }
}

/// Builds the isometry of the given kind.
pub fn build_isometry(kind: Kind, params: &Params) -> Result<Isometry> {
    let spec = spec_for(kind, params)?;
    let p = params.p;
    let w = effective_weight(kind, params);
    if matches!(kind, Kind::Couronne | Kind::DnConj | Kind::DnNonconj)
        && params.w != 0
        && params.w != w
    {
        return Err(Error::WeightMismatch(params.w, w));
    }
    let (s_side, t_side) = spec.sides(p)?;
    let (n, m) = spec.sizes(p, w);
    let source = s_side.table(n)?;
    let target = t_side.table(m)?;
    let level = spec.level(p, w, 0, 1, &source, &target)?;
    let mut map = level.map.ok_or_else(|| {
        Error::InconsistentSplit(format!(
            "{kind}: the formula is not a bijection on these blocks"
        ))
    })?;
    if kind == Kind::BroueTilde {
        map = compose_through_sym(&spec, p, w, &source, &target, &map)?;
    }
    let source_family = s_side.family();
    let target_family = t_side.family();
    let preg = ClassPredicate::PRegular(p);
    let c = ClassSubset::resolve(&source, &source_family, preg);
    let c_prime = match kind {
        Kind::BrGr | Kind::Fh => {
            ClassSubset::resolve(&target, &target_family, ClassPredicate::LastEmpty)
        }
        Kind::Osima => ClassSubset::resolve(&target, &target_family, ClassPredicate::FirstEmpty),
        _ => ClassSubset::resolve(&target, &target_family, preg),
    };
    Ok(Isometry {
        kind,
        params: params.clone(),
        source,
        target,
        source_family,
        target_family,
        map,
        c,
        c_prime,
        spec,
    })
}

/// `I₂⁻¹ ∘ I₁` through a block of `S̃` whose core has the opposite sign.
/// Errors if the composition disagrees with the direct formula.
fn compose_through_sym(
    spec: &Spec,
    p: usize,
    w: usize,
    source: &CharTable,
    target: &CharTable,
    direct: &[MapEntry],
) -> Result<Vec<MapEntry>> {
    let Spec::Spin { g1, g2, .. } = spec else {
        unreachable!()
    };
    let mid = (0..=12)
        .flat_map(|k| crate::barpartitions::bar_cores_of_size(k, p))
        .find(|c| c.sigma() != g1.sigma())
        .ok_or_else(|| Error::Unsupported("no bar core of opposite sign".into()))?;
    let mid_t = tilde_sn_table(mid.size() + p * w);
    let i1 = spin_level(source, &mid_t, p, g1, &mid, w)?.map;
    let i2 = spin_level(target, &mid_t, p, g2, &mid, w)?.map;
    let (Some(i1), Some(i2)) = (i1, i2) else {
        return Err(Error::InconsistentSplit(
            "crossover halves are not bijections".into(),
        ));
    };
    let inv: BTreeMap<&CharLabel, (&CharLabel, i32)> = i2
        .iter()
        .map(|e| (&e.target, (&e.source, e.sign)))
        .collect();
    let mut out = Vec::new();
    for e in &i1 {
        let (src2, s2) = inv.get(&e.target).ok_or_else(|| {
            Error::InconsistentSplit(format!("{} not in the image of I₂", e.target))
        })?;
        out.push(MapEntry {
            source: e.source.clone(),
            sign: e.sign * s2,
            target: (*src2).clone(),
        });
    }
    let mut a = out.clone();
    let mut b = direct.to_vec();
    a.sort_by(|x, y| x.source.cmp(&y.source));
    b.sort_by(|x, y| x.source.cmp(&y.source));
    if a != b {
        return Err(Error::InconsistentSplit(
            "composition differs from the direct formula".into(),
        ));
    }
    Ok(out)
}

impl Isometry {
    pub fn weight(&self) -> usize {
        effective_weight(self.kind, &self.params)
    }

    pub fn asserted_mode(&self) -> Mode {
        self.kind.asserted_mode(self.params.p, self.weight())
    }

    /// `I⁻¹`, a signed bijection from the target block back to the source.
    pub fn inverse(&self) -> Isometry {
        Isometry {
            source: self.target.clone(),
            target: self.source.clone(),
            source_family: self.target_family.clone(),
            target_family: self.source_family.clone(),
            map: self
                .map
                .iter()
                .map(|e| MapEntry {
                    source: e.target.clone(),
                    sign: e.sign,
                    target: e.source.clone(),
                })
                .collect(),
            c: self.c_prime.clone(),
            c_prime: self.c.clone(),
            ..self.clone()
        }
    }

    /// The same isometry with a replaced map (used for perturbations).
    pub fn with_map(&self, map: Vec<MapEntry>) -> Isometry {
        Isometry {
            map,
            ..self.clone()
        }
    }

    fn rows(&self) -> Vec<(usize, i32, usize)> {
        self.map
            .iter()
            .map(|e| {
                (
                    self.source.char_index(&e.source).expect("source label"),
                    e.sign,
                    self.target.char_index(&e.target).expect("target label"),
                )
            })
            .collect()
    }
}

/// `Î(x, x') = Σ_χ conj(χ(x)) · sign · (Iχ)(x')`, rows indexed by source classes.
pub fn i_hat(iso: &Isometry) -> Vec<Vec<ExactScalar>> {
    let rows = iso.rows();
    let conj: Vec<Vec<ExactScalar>> = rows
        .iter()
        .map(|&(i, s, _)| {
            iso.source.values[i]
                .iter()
                .map(|v| v.conj().scale_int(s as i64))
                .collect()
        })
        .collect();
    let nt = iso.target.num_classes();
    (0..iso.source.num_classes())
        .into_par_iter()
        .map(|x| {
            (0..nt)
                .map(|y| {
                    let mut acc = ExactScalar::zero();
                    for (r, &(_, _, k)) in rows.iter().enumerate() {
                        let a = &conj[r][x];
                        let b = &iso.target.values[k][y];
                        if !a.is_zero() && !b.is_zero() {
                            acc += a * b;
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// `Î(I) = conj(Î(I⁻¹) ∘ τ)` where `τ` swaps the arguments.
pub fn adjoint_identity_holds(iso: &Isometry) -> bool {
    let a = i_hat(iso);
    let b = i_hat(&iso.inverse());
    a.iter()
        .enumerate()
        .all(|(x, row)| row.iter().enumerate().all(|(y, v)| *v == b[y][x].conj()))
}

/// A concrete counterexample to one of the checks.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub x: String,
    pub y: String,
    pub value: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

/// Outcome of one check.
#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub pass: bool,
    /// Number of pairs (or types) examined.
    pub checked: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl CheckResult {
    fn from(checked: usize, witness: Option<Witness>) -> Self {
        CheckResult {
            pass: witness.is_none(),
            checked,
            witness,
        }
    }
}

/// Sizes of the verified data.
#[derive(Clone, Debug, Serialize)]
pub struct Sizes {
    pub block: usize,
    pub source_classes: usize,
    pub target_classes: usize,
    pub c: usize,
    pub c_prime: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub kind: Kind,
    pub mode: Mode,
    pub source: String,
    pub target: String,
    pub c: String,
    pub c_prime: String,
    pub sizes: Sizes,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mixed_vanishing: Option<CheckResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub broue_integrality: Option<CheckResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kor_gram: Option<CheckResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_commutation: Option<CheckResult>,
    /// Wall-clock time, only when requested (it would break byte-identical output).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        [
            &self.mixed_vanishing,
            &self.broue_integrality,
            &self.kor_gram,
            &self.r_commutation,
        ]
        .iter()
        .all(|c| c.as_ref().is_none_or(|c| c.pass))
    }

    /// The first witness of a failing check, if any.
    pub fn witness(&self) -> Option<&Witness> {
        [
            &self.mixed_vanishing,
            &self.broue_integrality,
            &self.kor_gram,
            &self.r_commutation,
        ]
        .into_iter()
        .flatten()
        .find_map(|c| c.witness.as_ref())
    }
}

fn mixed_vanishing(
    iso: &Isometry,
    ih: &[Vec<ExactScalar>],
    c: &ClassSubset,
    cp: &ClassSubset,
) -> CheckResult {
    let mut checked = 0;
    for (x, row) in ih.iter().enumerate() {
        for (y, v) in row.iter().enumerate() {
            if c.contains(x) == cp.contains(y) {
                continue;
            }
            checked += 1;
            if !v.is_zero() {
                return CheckResult::from(
                    checked,
                    Some(Witness {
                        x: iso.source.classes[x].to_string(),
                        y: iso.target.classes[y].to_string(),
                        value: v.to_string(),
                        detail: Some(format!(
                            "x {} C, x' {} C'",
                            if c.contains(x) { "in" } else { "not in" },
                            if cp.contains(y) { "in" } else { "not in" }
                        )),
                    }),
                );
            }
        }
    }
    CheckResult::from(checked, None)
}

fn integrality(iso: &Isometry, ih: &[Vec<ExactScalar>]) -> CheckResult {
    let p = iso.params.p as u64;
    let pairs: Vec<(usize, usize)> = (0..ih.len())
        .flat_map(|x| (0..iso.target.num_classes()).map(move |y| (x, y)))
        .collect();
    let bad = pairs.par_iter().find_first(|&&(x, y)| {
        let v = &ih[x][y];
        if v.is_zero() {
            return false;
        }
        let cx = iso.source.classes[x].central_order as i64;
        let cy = iso.target.classes[y].central_order as i64;
        !(v.scale(&frac(1, cx)).is_p_integral(p) && v.scale(&frac(1, cy)).is_p_integral(p))
    });
    let witness = bad.map(|&(x, y)| {
        let v = &ih[x][y];
        let cx = iso.source.classes[x].central_order as i64;
        let cy = iso.target.classes[y].central_order as i64;
        let (which, d) = if !v.scale(&frac(1, cx)).is_p_integral(p) {
            ("|C_G(x)|", cx)
        } else {
            ("|C_G'(x')|", cy)
        };
        let vals: Vec<String> = v
            .scale(&frac(1, d))
            .root_valuations(p)
            .iter()
            .map(|q| q.to_string())
            .collect();
        Witness {
            x: iso.source.classes[x].to_string(),
            y: iso.target.classes[y].to_string(),
            value: v.to_string(),
            detail: Some(format!(
                "divided by {which} = {d}: conjugate valuations [{}], all must be >= 0",
                vals.join(", ")
            )),
        }
    });
    CheckResult::from(pairs.len(), witness)
}

fn frac(a: i64, b: i64) -> num_rational::BigRational {
    num_rational::BigRational::new(a.into(), b.into())
}

fn kor_gram(iso: &Isometry, c: &ClassSubset, cp: &ClassSubset) -> CheckResult {
    let rows = iso.rows();
    let mut checked = 0;
    for (a, &(i, si, k)) in rows.iter().enumerate() {
        for &(j, sj, l) in &rows[a..] {
            checked += 1;
            let lhs = iso.source.inner(
                &iso.source.values[i],
                &iso.source.values[j],
                Some(&c.indices),
            );
            let rhs = iso
                .target
                .inner(
                    &iso.target.values[k],
                    &iso.target.values[l],
                    Some(&cp.indices),
                )
                .scale_int((si * sj) as i64);
            if lhs != rhs {
                return CheckResult::from(
                    checked,
                    Some(Witness {
                        x: iso.source.chars[i].to_string(),
                        y: iso.source.chars[j].to_string(),
                        value: format!("{lhs} vs {rhs}"),
                        detail: Some("restricted Gram entries differ".into()),
                    }),
                );
            }
        }
    }
    CheckResult::from(checked, None)
}

fn sizes(iso: &Isometry, c: &ClassSubset, cp: &ClassSubset) -> Sizes {
    Sizes {
        block: iso.map.len(),
        source_classes: iso.source.num_classes(),
        target_classes: iso.target.num_classes(),
        c: c.indices.len(),
        c_prime: cp.indices.len(),
    }
}

/// Runs the checks of `mode`. Generalized and KOR use the construction's
/// class subsets; Broué uses the `p`-regular classes on both sides.
pub fn verify(iso: &Isometry, mode: Mode) -> VerificationReport {
    verify_timed(iso, mode, false)
}

pub fn verify_timed(iso: &Isometry, mode: Mode, timing: bool) -> VerificationReport {
    let start = Instant::now();
    let preg = ClassPredicate::PRegular(iso.params.p);
    let (c, cp) = match mode {
        Mode::Broue => (
            ClassSubset::resolve(&iso.source, &iso.source_family, preg),
            ClassSubset::resolve(&iso.target, &iso.target_family, preg),
        ),
        _ => (iso.c.clone(), iso.c_prime.clone()),
    };
    let mut report = VerificationReport {
        kind: iso.kind,
        mode,
        source: iso.source.name.clone(),
        target: iso.target.name.clone(),
        c: c.id.clone(),
        c_prime: cp.id.clone(),
        sizes: sizes(iso, &c, &cp),
        mixed_vanishing: None,
        broue_integrality: None,
        kor_gram: None,
        r_commutation: None,
        timing_ms: None,
    };
    match mode {
        Mode::Kor => report.kor_gram = Some(kor_gram(iso, &c, &cp)),
        Mode::Generalized | Mode::Broue => {
            let ih = i_hat(iso);
            report.mixed_vanishing = Some(mixed_vanishing(iso, &ih, &c, &cp));
            if mode == Mode::Broue {
                report.broue_integrality = Some(integrality(iso, &ih));
            }
        }
    }
    if timing {
        report.timing_ms = Some(start.elapsed().as_millis() as u64);
    }
    report
}

/// A corrupted copy of an isometry.
#[derive(Clone, Debug)]
pub struct Perturbation {
    pub description: String,
    pub iso: Isometry,
}

/// Every single sign flip and every exchange of two target labels.
pub fn perturbations(iso: &Isometry) -> Vec<Perturbation> {
    let mut out = Vec::new();
    for i in 0..iso.map.len() {
        let mut m = iso.map.clone();
        m[i].sign = -m[i].sign;
        out.push(Perturbation {
            description: format!("flip sign of {}", m[i].source),
            iso: iso.with_map(m),
        });
    }
    for i in 0..iso.map.len() {
        for j in i + 1..iso.map.len() {
            let mut m = iso.map.clone();
            let t = m[i].target.clone();
            m[i].target = m[j].target.clone();
            m[j].target = t;
            out.push(Perturbation {
                description: format!("swap targets of {} and {}", m[i].source, m[j].source),
                iso: iso.with_map(m),
            });
        }
    }
    out
}

/// Character permutation induced by exchanging the `+` and `-` halves of
/// every split class, when that class permutation preserves the table.
fn split_swap(t: &CharTable) -> Option<BTreeMap<CharLabel, CharLabel>> {
    let perm: Vec<usize> = t
        .classes
        .iter()
        .map(|c| {
            let flipped = match c.split {
                Split::Plus => Split::Minus,
                Split::Minus => Split::Plus,
                Split::None => Split::None,
            };
            t.class_index(&ClassLabel {
                split: flipped,
                ..c.clone()
            })
            .expect("split partner")
        })
        .collect();
    if perm.iter().enumerate().all(|(j, &k)| j == k) {
        return None;
    }
    let mut out = BTreeMap::new();
    for (i, row) in t.values.iter().enumerate() {
        let moved: Vec<ExactScalar> = perm.iter().map(|&k| row[k].clone()).collect();
        let k = t.find_row(&moved)?;
        out.insert(t.chars[i].clone(), t.chars[k].clone());
    }
    Some(out)
}

/// Character permutations `χ ↦ λχ` for the nontrivial linear characters `λ`.
fn linear_twists(t: &CharTable) -> Vec<BTreeMap<CharLabel, CharLabel>> {
    let id = t.identity_class();
    (0..t.num_chars())
        .filter(|&i| {
            t.values[i][id] == ExactScalar::one()
                && t.values[i].iter().any(|v| *v != ExactScalar::one())
        })
        .filter_map(|i| {
            let mut out = BTreeMap::new();
            for (k, row) in t.values.iter().enumerate() {
                let k2 = t.find_row(&t.tensor(&t.values[i], row))?;
                out.insert(t.chars[k].clone(), t.chars[k2].clone());
            }
            Some(out)
        })
        .collect()
}

/// Identity, split-class swap, linear twists, and swap after twist.
fn symmetries(t: &CharTable) -> Vec<BTreeMap<CharLabel, CharLabel>> {
    let mut out = vec![t
        .chars
        .iter()
        .map(|c| (c.clone(), c.clone()))
        .collect::<BTreeMap<_, _>>()];
    let twists = linear_twists(t);
    out.extend(twists.iter().cloned());
    if let Some(sw) = split_swap(t) {
        for tw in twists.iter() {
            out.push(tw.iter().map(|(a, b)| (a.clone(), sw[b].clone())).collect());
        }
        out.push(sw);
    }
    out
}

/// Whether `m` equals `I` composed with a symmetry of the source and/or
/// target table: the split-class swap or tensoring with a linear character.
/// Such maps are perfect isometries in their own right.
pub fn automorphism_equivalent(iso: &Isometry, m: &[MapEntry]) -> bool {
    let ss = symmetries(&iso.source);
    let ts = symmetries(&iso.target);
    let base: BTreeMap<&CharLabel, (i32, &CharLabel)> = iso
        .map
        .iter()
        .map(|e| (&e.source, (e.sign, &e.target)))
        .collect();
    for (a, s) in ss.iter().enumerate() {
        for (b, t) in ts.iter().enumerate() {
            if a == 0 && b == 0 {
                continue;
            }
            let same = m.iter().all(|e| {
                base.get(&s[&e.source])
                    .is_some_and(|&(sign, tgt)| sign == e.sign && t[tgt] == e.target)
            });
            if same {
                return true;
            }
        }
    }
    false
}

/// Summary of the negative controls for one isometry.
#[derive(Clone, Debug, Serialize)]
pub struct NegativeControls {
    pub mode: Mode,
    pub total: usize,
    pub failed_with_witness: usize,
    /// Perturbations equal to `I` twisted by a table symmetry; they are
    /// genuine perfect isometries and are not counted as corruptions.
    pub automorphic: Vec<String>,
    /// Other perturbations that still pass. Passing is the definition, so
    /// each is a different perfect isometry between the same blocks, such as
    /// `-I` on a one-character block or `I` composed with a self-isometry
    /// permuting block characters.
    pub escaped: Vec<String>,
}

impl NegativeControls {
    pub fn pass(&self) -> bool {
        self.escaped.is_empty()
    }
}

pub fn negative_controls(iso: &Isometry, mode: Mode) -> NegativeControls {
    let ps = perturbations(iso);
    let results: Vec<(String, bool, bool)> = ps
        .par_iter()
        .map(|pt| {
            let r = verify(&pt.iso, mode);
            let failed = !r.passed() && r.witness().is_some();
            let auto = !failed && automorphism_equivalent(iso, &pt.iso.map);
            (pt.description.clone(), failed, auto)
        })
        .collect();
    let mut nc = NegativeControls {
        mode,
        total: results.len(),
        failed_with_witness: 0,
        automorphic: vec![],
        escaped: vec![],
    };
    for (d, failed, auto) in results {
        if failed {
            nc.failed_with_witness += 1;
        } else if auto {
            nc.automorphic.push(d);
        } else {
            nc.escaped.push(d);
        }
    }
    nc
}

/// One side of one singular type: the smaller table and where each of its
/// classes lands, per variant (`x_β` itself, then the other half of its
/// class, when the type labels two classes).
struct Step {
    small: CharTable,
    fused: Vec<Vec<usize>>,
}

fn step(
    side: &Side,
    big: &CharTable,
    beta: &[Partition],
    p: usize,
    small_size: usize,
) -> Result<Step> {
    let small = side.table(small_size)?;
    let labels: Vec<ClassLabel> = small
        .classes
        .iter()
        .map(|c| side.fuse(beta, p, c))
        .collect();
    let id = small.identity_class();
    let two = small.order <= 2 && labels[id].split != Split::None;
    let flip = |s: Split| match s {
        Split::Plus => Split::Minus,
        Split::Minus => Split::Plus,
        Split::None => Split::None,
    };
    let lookup = |l: &ClassLabel| -> Result<usize> {
        big.class_index(l)
            .or_else(|| {
                big.class_index(&ClassLabel {
                    split: Split::None,
                    ..l.clone()
                })
            })
            .ok_or_else(|| Error::InconsistentSplit(format!("fused class {l} not in {}", big.name)))
    };
    let mut fused = Vec::new();
    if two {
        // variant 0 is x_β itself, variant 1 the other half of its class
        for keep in [true, false] {
            let row = labels
                .iter()
                .map(|l| {
                    lookup(&ClassLabel {
                        split: if keep { l.split } else { flip(l.split) },
                        ..l.clone()
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            fused.push(row);
        }
    } else {
        fused.push(labels.iter().map(&lookup).collect::<Result<Vec<_>>>()?);
    }
    Ok(Step { small, fused })
}

/// Coefficients of `x ↦ row(x_β · x)` on the characters of the smaller group.
fn coefficients(st: &Step, v: usize, row: &[ExactScalar]) -> BTreeMap<CharLabel, ExactScalar> {
    let restricted: Vec<ExactScalar> = st.fused[v].iter().map(|&j| row[j].clone()).collect();
    let mut out = BTreeMap::new();
    for (i, ch) in st.small.chars.iter().enumerate() {
        let c = st.small.inner(&restricted, &st.small.values[i], None);
        if !c.is_zero() {
            out.insert(ch.clone(), c);
        }
    }
    out
}

fn singular_labels(units: usize, k: usize) -> Vec<Vec<Partition>> {
    if units == 1 {
        Partition::all(k).into_iter().map(|b| vec![b]).collect()
    } else {
        multipartitions(units, k)
    }
}

fn label_string(beta: &[Partition]) -> String {
    let s: Vec<String> = beta.iter().map(|b| format!("({b})")).collect();
    s.join("")
}

fn fail(lambda: &[Partition], ch: &CharLabel, what: String) -> Witness {
    Witness {
        x: label_string(lambda),
        y: ch.to_string(),
        value: what,
        detail: None,
    }
}

/// `I_λ ∘ r^λ = r'^λ ∘ I` for every singular type of weight at most `w`,
/// and `r^λ = 0` on the block for every heavier type that fits in the group.
pub fn r_commutation_check(iso: &Isometry) -> Result<CheckResult> {
    let p = iso.params.p;
    let w = iso.weight();
    let spec = &iso.spec;
    let (s_side, t_side) = spec.sides(p)?;
    let (n, m) = spec.sizes(p, w);
    let (ks, kt) = (n / s_side.points_per_unit(p), m / t_side.points_per_unit(p));
    let units = spec.units();
    let src_rows: Vec<(CharLabel, Vec<ExactScalar>)> = iso
        .map
        .iter()
        .map(|e| {
            (
                e.source.clone(),
                iso.source.row(&e.source).expect("source").to_vec(),
            )
        })
        .collect();
    let tgt_rows: Vec<Vec<ExactScalar>> = iso
        .map
        .iter()
        .map(|e| {
            iso.target
                .row(&e.target)
                .expect("target")
                .iter()
                .map(|v| v.scale_int(e.sign as i64))
                .collect()
        })
        .collect();
    let mut checked = 0;
    for k in 1..=ks.max(kt) {
        for beta in singular_labels(units, k) {
            if !s_side.admits(&beta, p) {
                continue;
            }
            checked += 1;
            if k > w {
                // weight exhaustion on whichever sides the type fits
                for (side, big, rows, cap, size) in [
                    (
                        &s_side,
                        &iso.source,
                        src_rows.iter().map(|r| r.1.clone()).collect::<Vec<_>>(),
                        ks,
                        n,
                    ),
                    (&t_side, &iso.target, tgt_rows.clone(), kt, m),
                ] {
                    if k > cap {
                        continue;
                    }
                    let st = step(side, big, &beta, p, size - k * side.points_per_unit(p))?;
                    for (r, row) in rows.iter().enumerate() {
                        for v in 0..st.fused.len() {
                            if let Some((ch, c)) = coefficients(&st, v, row).into_iter().next() {
                                return Ok(CheckResult::from(
                                    checked,
                                    Some(fail(
                                        &beta,
                                        &iso.map[r].source,
                                        format!(
                                            "over-weight type has nonzero coefficient {c} on {ch}"
                                        ),
                                    )),
                                ));
                            }
                        }
                    }
                }
                continue;
            }
            let sst = step(
                &s_side,
                &iso.source,
                &beta,
                p,
                n - k * s_side.points_per_unit(p),
            )?;
            let tst = step(
                &t_side,
                &iso.target,
                &beta,
                p,
                m - k * t_side.points_per_unit(p),
            )?;
            let twist = if matches!(spec, Spec::Fh { .. }) {
                pm(beta[0].len() as i32)
            } else {
                1
            };
            let lvl = spec.level(p, w, k, twist, &sst.small, &tst.small)?;
            for (r, (src_label, srow)) in src_rows.iter().enumerate() {
                let rs: Vec<_> = (0..sst.fused.len())
                    .map(|v| coefficients(&sst, v, srow))
                    .collect();
                let rt: Vec<_> = (0..tst.fused.len())
                    .map(|v| coefficients(&tst, v, &tgt_rows[r]))
                    .collect();
                if let Some(msg) = compare(&lvl, &rs, &rt, twist) {
                    return Ok(CheckResult::from(
                        checked,
                        Some(fail(&beta, src_label, msg)),
                    ));
                }
            }
        }
    }
    Ok(CheckResult::from(checked, None))
}

type Coefs = BTreeMap<CharLabel, ExactScalar>;

fn get(c: &Coefs, l: &CharLabel) -> ExactScalar {
    c.get(l).cloned().unwrap_or_default()
}

/// Compares `I_λ(r^λ χ)` with `r'^λ(Iχ)`; returns a description on mismatch.
fn compare(lvl: &Level, rs: &[Coefs], rt: &[Coefs], twist: i32) -> Option<String> {
    for c in rs {
        if let Some(l) = c.keys().find(|l| !lvl.source_chars.contains(l)) {
            return Some(format!("r(χ) leaves the block through {l}"));
        }
    }
    for c in rt {
        if let Some(l) = c.keys().find(|l| !lvl.target_chars.contains(l)) {
            return Some(format!("r'(Iχ) leaves the block through {l}"));
        }
    }
    let (sc, tc) = (&lvl.source_chars, &lvl.target_chars);
    let eq = |a: ExactScalar, b: ExactScalar, what: &str| -> Option<String> {
        if a == b {
            None
        } else {
            Some(format!("{what}: {a} vs {b}"))
        }
    };
    match (rs.len(), rt.len()) {
        (1, 1) => {
            if let Some(map) = &lvl.map {
                let mut pred: Coefs = BTreeMap::new();
                for e in map {
                    let c = get(&rs[0], &e.source);
                    if !c.is_zero() {
                        pred.insert(e.target.clone(), c.scale_int(e.sign as i64));
                    }
                }
                if pred != rt[0] {
                    let l = tc
                        .iter()
                        .find(|l| get(&pred, l) != get(&rt[0], l))
                        .expect("difference");
                    return eq(
                        get(&pred, l),
                        get(&rt[0], l),
                        &format!("coefficient on {l}"),
                    );
                }
                None
            } else if sc.len() == 1 && tc.len() == 2 {
                let c = get(&rs[0], &sc[0]);
                eq(c.clone(), get(&rt[0], &tc[0]), "merged coefficient")
                    .or_else(|| eq(c, get(&rt[0], &tc[1]), "merged coefficient"))
            } else if sc.len() == 2 && tc.len() == 1 {
                let c = get(&rt[0], &tc[0]);
                eq(get(&rs[0], &sc[0]), c.clone(), "merged coefficient")
                    .or_else(|| eq(get(&rs[0], &sc[1]), c, "merged coefficient"))
            } else {
                Some(format!(
                    "no small isometry between {} and {} characters",
                    sc.len(),
                    tc.len()
                ))
            }
        }
        (2, 1) if sc.len() == 1 && tc.len() == 2 => {
            // I_λ(1_λ±) = the ± character of the target core
            let (tp, tm) = halves(tc)?;
            let (tp, tm) = if twist == 1 { (tp, tm) } else { (tm, tp) };
            eq(get(&rs[0], &sc[0]), get(&rt[0], &tp), "boundary + half")
                .or_else(|| eq(get(&rs[1], &sc[0]), get(&rt[0], &tm), "boundary - half"))
        }
        (1, 2) if sc.len() == 2 && tc.len() == 1 => {
            let (sp, sm) = halves(sc)?;
            let (sp, sm) = if twist == 1 { (sp, sm) } else { (sm, sp) };
            eq(get(&rs[0], &sp), get(&rt[0], &tc[0]), "boundary + half")
                .or_else(|| eq(get(&rs[0], &sm), get(&rt[1], &tc[0]), "boundary - half"))
        }
        (2, 2) if sc.len() == 1 && tc.len() == 1 => {
            let (a, b) = if twist == 1 { (0, 1) } else { (1, 0) };
            eq(get(&rs[0], &sc[0]), get(&rt[a], &tc[0]), "variant +")
                .or_else(|| eq(get(&rs[1], &sc[0]), get(&rt[b], &tc[0]), "variant -"))
        }
        (a, b) => Some(format!(
            "{a} source and {b} target variants over {} and {} characters",
            sc.len(),
            tc.len()
        )),
    }
}

fn halves(v: &[CharLabel]) -> Option<(CharLabel, CharLabel)> {
    let p = v.iter().find(|l| l.assoc == Split::Plus)?;
    let m = v.iter().find(|l| l.assoc == Split::Minus)?;
    Some((p.clone(), m.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::part;

    fn e() -> Partition {
        Partition::empty()
    }

    #[test]
    fn identity_kernel_is_diagonal() {
        let iso =
            build_isometry(Kind::MainAn, &Params::single(3, 1, part(&[1]), part(&[1]))).unwrap();
        assert!(iso.map.iter().all(|m| m.sign == 1 && m.source == m.target));
        let full: Vec<MapEntry> = iso
            .source
            .chars
            .iter()
            .map(|c| MapEntry {
                source: c.clone(),
                sign: 1,
                target: c.clone(),
            })
            .collect();
        let ih = i_hat(&iso.with_map(full));
        for (x, row) in ih.iter().enumerate() {
            for (y, v) in row.iter().enumerate() {
                let want = if x == y {
                    iso.source.classes[x].central_order as i64
                } else {
                    0
                };
                assert_eq!(*v, ExactScalar::from_int(want));
            }
        }
    }

    #[test]
    fn osima_s3() {
        let iso = build_isometry(Kind::Osima, &Params::single(3, 1, e(), e())).unwrap();
        assert_eq!(iso.map.len(), 3);
        let r = verify(&iso, Mode::Generalized);
        assert!(r.passed(), "{r:?}");
        assert!(verify(&iso, Mode::Kor).passed());
        // the block has two Brauer characters, Z_3 has one
        let b = verify(&iso, Mode::Broue);
        assert!(!b.passed() && b.witness().is_some());
        assert!(r_commutation_check(&iso).unwrap().pass);
    }

    #[test]
    fn main_an_a7_a6() {
        let iso = build_isometry(Kind::MainAn, &Params::single(3, 2, part(&[1]), e())).unwrap();
        let r = verify(&iso, Mode::Broue);
        assert!(r.passed(), "{r:?}");
        assert!(verify(&iso, Mode::Kor).passed());
        let rc = r_commutation_check(&iso).unwrap();
        assert!(rc.pass, "{rc:?}");
        assert!(adjoint_identity_holds(&iso));
    }

    #[test]
    fn flipped_sign_fails_with_witness() {
        let iso = build_isometry(Kind::Osima, &Params::single(3, 1, e(), e())).unwrap();
        let mut m = iso.map.clone();
        m[0].sign = -m[0].sign;
        let r = verify(&iso.with_map(m), Mode::Generalized);
        assert!(!r.passed());
        assert!(r.mixed_vanishing.unwrap().witness.is_some());
    }

    #[test]
    fn preconditions() {
        assert!(matches!(
            build_isometry(Kind::MainAn, &Params::single(2, 1, e(), e())),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            build_isometry(Kind::MainAn, &Params::single(3, 1, part(&[2]), e())),
            Err(Error::NotACore(..)) | Err(Error::NotSelfConjugate(_))
        ));
        assert!(matches!(
            build_isometry(Kind::BroueTilde, &Params::single(3, 1, e(), part(&[2]))),
            Err(Error::SignPrecondition(_))
        ));
        assert!("nope".parse::<Kind>().is_err());
        assert_eq!("mainAn_p2".parse::<Kind>().unwrap(), Kind::MainAnP2);
    }

    #[test]
    fn weight_sets_sum() {
        assert_eq!(weight_sets(&[1, 1], 1), vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(weight_sets(&[2, 0], 0), vec![vec![2, 0]]);
        assert!(weight_sets(&[1], 2).is_empty());
    }
}
