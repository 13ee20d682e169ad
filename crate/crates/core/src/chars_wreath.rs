//! Wreath products `H ≀ S_w` over small base groups, Weyl groups of type D
//! and the sign kernels `H_{p,w}` of `(Z_p ⋊ Z_{p-1}) ≀ S_w`.
//!
//! Classes and characters of `H ≀ S_w` are tuples of partitions indexed by
//! the classes (resp. characters) of the base table, in its order.

use std::collections::HashMap;

use crate::chars_sym_alt::sn_value;
use crate::error::{Error, Result};
use crate::exactnum::ExactScalar;
use crate::partitions::{multipartitions, Partition};
use crate::table::{index2_descent, CharLabel, CharTable, ClassLabel, Descent, Shape, Split};

/// `exp(2πi k/12)` for `k` a multiple of 2 or 3.
fn twelfth_root(k: usize) -> ExactScalar {
    let h =
        |a: i64, b: i64| ExactScalar::frac(a, 2) + ExactScalar::rt(-3).scale_int(b).scale(&half());
    match k % 12 {
        0 => ExactScalar::one(),
        2 => h(1, 1),
        3 => ExactScalar::i(),
        4 => h(-1, 1),
        6 => ExactScalar::from_int(-1),
        8 => h(-1, -1),
        9 => -ExactScalar::i(),
        10 => h(1, -1),
        _ => unreachable!("not a sixth or fourth root of unity"),
    }
}

fn half() -> num_rational::BigRational {
    num_rational::BigRational::new(1.into(), 2.into())
}

fn index_label(k: usize) -> Shape {
    Shape::Single(Partition::from_unsorted(vec![k]))
}

/// A base group table together with the element order of each class.
#[derive(Clone, Debug)]
pub struct BaseGroup {
    pub table: CharTable,
    pub orders: Vec<u64>,
}

/// `Z_l` with classes `ζ^0, …, ζ^(l-1)` and `ψ_j(ζ^k) = ζ^((j-1)k)`.
pub fn cyclic_base(l: usize) -> Result<BaseGroup> {
    if ![1, 2, 3, 4, 6].contains(&l) {
        return Err(Error::Unsupported(format!(
            "Z_{l} needs roots of unity beyond quadratic radicals"
        )));
    }
    let classes = (1..=l)
        .map(|k| ClassLabel::new(index_label(k), l as u64))
        .collect();
    let chars = (1..=l)
        .map(|j| CharLabel::ordinary(index_label(j)))
        .collect();
    let values = (0..l)
        .map(|j| (0..l).map(|k| twelfth_root(12 / l * (j * k % l))).collect())
        .collect();
    let orders = (0..l)
        .map(|k| (l / num_integer::gcd(l, k)) as u64)
        .collect();
    Ok(BaseGroup {
        table: CharTable {
            name: format!("Z{l}"),
            order: l as u64,
            classes,
            chars,
            values,
        },
        orders,
    })
}

/// `Z_p ⋊ Z_{p-1}` with `ψ_1 = ε_H`, `ψ_p = 1_H`, `ψ_{p*}` of degree `p - 1`,
/// and classes `η, …, η^(p-1), ω`. For `p = 2` we have `p* = p`, so `ψ_2` is
/// the sign of `Z_2` and `ψ_1` is trivial.
pub fn semidirect_base(p: usize) -> Result<BaseGroup> {
    let (order, cent, orders, values): (u64, Vec<u64>, Vec<u64>, Vec<Vec<i64>>) = match p {
        2 => (2, vec![2, 2], vec![1, 2], vec![vec![1, 1], vec![1, -1]]),
        // η a transposition, η² = 1
        3 => (
            6,
            vec![2, 6, 3],
            vec![2, 1, 3],
            vec![vec![-1, 1, 1], vec![0, 2, -1], vec![1, 1, 1]],
        ),
        _ => return Err(Error::Unsupported(format!("base group for p = {p}"))),
    };
    let classes = cent
        .iter()
        .enumerate()
        .map(|(k, &c)| ClassLabel::new(index_label(k + 1), c))
        .collect();
    let chars = (1..=p)
        .map(|j| CharLabel::ordinary(index_label(j)))
        .collect();
    let values = values
        .into_iter()
        .map(|r| r.into_iter().map(ExactScalar::from_int).collect())
        .collect();
    Ok(BaseGroup {
        table: CharTable {
            name: format!("Z{p}:Z{}", p - 1),
            order,
            classes,
            chars,
            values,
        },
        orders,
    })
}

type WrKey = (Vec<Partition>, Vec<Partition>);

fn wreath_value(
    base: &CharTable,
    mu: &[Partition],
    pi: &[Partition],
    memo: &mut HashMap<WrKey, ExactScalar>,
) -> ExactScalar {
    let Some(t) = pi.iter().position(|c| !c.is_empty()) else {
        return if mu.iter().all(Partition::is_empty) {
            ExactScalar::one()
        } else {
            ExactScalar::zero()
        };
    };
    let key = (mu.to_vec(), pi.to_vec());
    if let Some(v) = memo.get(&key) {
        return v.clone();
    }
    let k = pi[t].part(0);
    let mut rest = pi.to_vec();
    rest[t] = pi[t].without_part(k).expect("part present");
    let mut acc = ExactScalar::zero();
    for (s, ms) in mu.iter().enumerate() {
        let psi = &base.values[s][t];
        if psi.is_zero() {
            continue;
        }
        for (h, nu) in ms.hooks(k) {
            let mut m = mu.to_vec();
            m[s] = nu;
            let v = wreath_value(base, &m, &rest, memo);
            if !v.is_zero() {
                let v = psi * &v;
                acc += if h.leg % 2 == 0 { v } else { -v };
            }
        }
    }
    memo.insert(key, acc.clone());
    acc
}

/// Centralizer order of the class with cycle structure `pi`.
pub fn wreath_centralizer(base: &CharTable, pi: &[Partition]) -> u64 {
    pi.iter()
        .zip(&base.classes)
        .map(|(c, g)| {
            c.multiplicities()
                .into_iter()
                .map(|(j, m)| {
                    (j as u64).pow(m as u32)
                        * (1..=m as u64).product::<u64>()
                        * g.central_order.pow(m as u32)
                })
                .product::<u64>()
        })
        .product()
}

pub fn multi_label(v: &[Partition]) -> CharLabel {
    CharLabel::ordinary(Shape::Multi(v.to_vec()))
}

pub fn multi_class(v: &[Partition]) -> ClassLabel {
    ClassLabel::new(Shape::Multi(v.to_vec()), 0)
}

/// Character table of `base ≀ S_w` by the wreath Murnaghan-Nakayama rule.
pub fn wreath_table(base: &BaseGroup, w: usize) -> CharTable {
    let base = &base.table;
    let n = base.num_classes();
    let labels = multipartitions(n, w);
    let mut memo = HashMap::new();
    let classes = labels
        .iter()
        .map(|pi| ClassLabel::new(Shape::Multi(pi.clone()), wreath_centralizer(base, pi)))
        .collect();
    let chars = labels.iter().map(|m| multi_label(m)).collect();
    let values = labels
        .iter()
        .map(|m| {
            labels
                .iter()
                .map(|pi| wreath_value(base, m, pi, &mut memo))
                .collect()
        })
        .collect();
    let order = base.order.pow(w as u32) * (1..=w as u64).product::<u64>();
    CharTable {
        name: format!("{}wrS{w}", base.name),
        order,
        classes,
        chars,
        values,
    }
}

/// `(Z_p ⋊ Z_{p-1}) ≀ S_w`.
pub fn gpw_table(p: usize, w: usize) -> Result<CharTable> {
    let t = wreath_table(&semidirect_base(p)?, w);
    Ok(CharTable {
        name: format!("G{p},{w}"),
        ..t
    })
}

/// `μ* = (μ_p*, …, μ_1*)`.
pub fn multi_conj(mu: &[Partition]) -> Vec<Partition> {
    mu.iter().rev().map(Partition::conjugate).collect()
}

/// Weyl group of type `D_n` as the kernel of `θ_(∅,(n))` in `Z_2 ≀ S_n`.
///
/// Split classes `(2π, ∅)` carry `±`; `χ_(μ,μ)^+ - χ_(μ,μ)^-` is
/// `2^ℓ(π) χ_μ(π)` on the `+` class. `D_0` is the trivial group with the
/// single character `χ_(∅,∅)`, and `D_1` is trivial as well.
pub fn dn_table(n: usize) -> Result<CharTable> {
    let parent = wreath_table(&cyclic_base(2)?, n);
    if n == 0 {
        return Ok(CharTable {
            name: "D0".into(),
            ..parent
        });
    }
    let alpha = parent
        .char_index(&multi_label(&[
            Partition::empty(),
            Partition::from_unsorted(vec![n]),
        ]))
        .expect("linear character");
    let split_classes: Vec<usize> = parent
        .classes
        .iter()
        .enumerate()
        .filter(|(_, c)| {
            let v = c.multi();
            v[1].is_empty() && v[0].parts().iter().all(|x| x % 2 == 0)
        })
        .map(|(j, _)| j)
        .collect();
    let mut diff_values = HashMap::new();
    for (i, ch) in parent.chars.iter().enumerate() {
        let m = ch.multi();
        if m[0] != m[1] {
            continue;
        }
        for &j in &split_classes {
            let pi = halve(&parent.classes[j].multi()[0]);
            let v = sn_value(&m[0], &pi) << pi.len();
            if v != 0 {
                diff_values.insert((i, j), ExactScalar::from_int(v));
            }
        }
    }
    let label = |c: &ClassLabel, first: bool| ClassLabel {
        split: if first { Split::Plus } else { Split::Minus },
        ..c.clone()
    };
    index2_descent(
        &parent,
        &Descent {
            name: format!("D{n}"),
            eps: alpha,
            split_classes,
            split_label: &label,
            diff_values,
        },
    )
}

fn halve(p: &Partition) -> Partition {
    Partition::from_unsorted(p.parts().iter().map(|x| x / 2).collect())
}

fn is_even_parts(p: &Partition) -> bool {
    p.parts().iter().all(|x| x % 2 == 0)
}

/// Whether a class of `G_{p,w}` lies in the splitting set `𝒯`.
pub fn in_splitting_set(pi: &[Partition]) -> bool {
    let p = pi.len();
    (0..p - 1).all(|i| {
        if i % 2 == 0 {
            is_even_parts(&pi[i])
        } else {
            pi[i].is_empty()
        }
    }) && pi[p - 1].has_distinct_parts()
        && pi[p - 1].all_odd()
}

/// The bijection from self-dual multipartitions to splitting classes.
pub fn a_bijection(mu: &[Partition]) -> Result<Vec<Partition>> {
    let p = mu.len();
    if multi_conj(mu) != mu {
        return Err(Error::NotSelfConjugate(format!("{mu:?}")));
    }
    let ps = p.div_ceil(2);
    let mut out = vec![Partition::empty(); p];
    for i in 1..ps {
        out[2 * i - 2] = mu[i - 1].scaled(2);
    }
    out[p - 1] = mu[ps - 1].a_map()?;
    Ok(out)
}

/// Inverse of [`a_bijection`].
pub fn a_bijection_inverse(pi: &[Partition]) -> Result<Vec<Partition>> {
    let p = pi.len();
    if !in_splitting_set(pi) {
        return Err(Error::InvalidParameter(format!(
            "{pi:?} is not a splitting class"
        )));
    }
    let ps = p.div_ceil(2);
    let mut out = vec![Partition::empty(); p];
    out[ps - 1] = Partition::a_inverse(&pi[p - 1])?;
    for i in 1..ps {
        out[i - 1] = halve(&pi[2 * i - 2]);
        out[p - i] = out[i - 1].conjugate();
    }
    Ok(out)
}

/// `(-1)^((q-1)/2) q` for odd `q`.
fn signed_odd(q: usize) -> i64 {
    if ((q - 1) / 2).is_multiple_of(2) {
        q as i64
    } else {
        -(q as i64)
    }
}

/// `ϑ_μ^+ - ϑ_μ^-` on the `+` class of the parent class `pi`, for self-dual `mu`.
pub fn hpw_difference(mu: &[Partition], pi: &[Partition]) -> ExactScalar {
    // p = 3 only: mu = (μ1, μ2, μ1*), pi = (2ρ, ∅, a(μ2))
    let Ok(a) = mu[1].a_map() else {
        return ExactScalar::zero();
    };
    if pi[2] != a || !is_even_parts(&pi[0]) || !pi[1].is_empty() || pi[0].size() != 2 * mu[0].size()
    {
        return ExactScalar::zero();
    }
    let rho = halve(&pi[0]);
    let chi = sn_value(&mu[0], &rho) << rho.len();
    if chi == 0 {
        return ExactScalar::zero();
    }
    let d = a.len();
    let eps_mu = if ((mu[1].size() - d) / 2).is_multiple_of(2) {
        1
    } else {
        -1
    };
    let ph: i64 = a.parts().iter().map(|&x| x as i64).product();
    let mut v = ExactScalar::from_int(chi) * ExactScalar::rt(eps_mu * ph);
    for _ in 0..d {
        v = v * ExactScalar::rt(signed_odd(3));
    }
    v
}

/// Sign kernel `H_{p,w}` of `G_{p,w}`; only `p = 3` is supported.
pub fn hpw_table(p: usize, w: usize) -> Result<CharTable> {
    if p == 2 {
        return Err(Error::InvalidParameter("H_{p,w} needs an odd prime".into()));
    }
    if p != 3 {
        return Err(Error::Unsupported(format!(
            "H_{{{p},w}} needs p-th roots of unity"
        )));
    }
    let parent = gpw_table(p, w)?;
    let mut sign = vec![Partition::empty(); p];
    sign[0] = Partition::new(vec![1; w])?;
    let eps = parent
        .char_index(&multi_label(&sign))
        .expect("sign character");
    if w == 0 {
        return Ok(CharTable {
            name: format!("H{p},{w}"),
            ..parent
        });
    }
    let split_classes: Vec<usize> = (0..parent.num_classes())
        .filter(|&j| in_splitting_set(parent.classes[j].multi()))
        .collect();
    let mut diff_values = HashMap::new();
    for (i, ch) in parent.chars.iter().enumerate() {
        let m = ch.multi();
        if multi_conj(m) != m {
            continue;
        }
        for &j in &split_classes {
            let v = hpw_difference(m, parent.classes[j].multi());
            if !v.is_zero() {
                diff_values.insert((i, j), v);
            }
        }
    }
    let label = |c: &ClassLabel, first: bool| ClassLabel {
        split: if first { Split::Plus } else { Split::Minus },
        ..c.clone()
    };
    index2_descent(
        &parent,
        &Descent {
            name: format!("H{p},{w}"),
            eps,
            split_classes,
            split_label: &label,
            diff_values,
        },
    )
}

/// Class of `H_{3,w}` containing `x g`, `x` with structure `(∅, ∅, (c))`
/// for odd `c` and `g` in `class` of `H_{3,w-c}`.
pub fn hpw_fuse(c: usize, class: &ClassLabel) -> ClassLabel {
    let mut v = class.multi().to_vec();
    let old = v[2].clone();
    v[2] = old.union(&Partition::from_unsorted(vec![c]));
    let split = if in_splitting_set(&v) {
        // keep Δ(xg) = rt((-1)^((q-1)/2) q) Δ(g) with principal roots, q = 3c
        let t = if signed_odd(c) < 0 && rad_of(&old) > 0 {
            -1
        } else {
            1
        };
        Split::from_sign(class.split.sign() * t)
    } else {
        Split::None
    };
    ClassLabel {
        split,
        ..multi_class(&v)
    }
}

fn rad_of(a: &Partition) -> i64 {
    let ph: i64 = a.parts().iter().map(|&x| x as i64).product();
    let e = (a.size() - a.len()) / 2;
    if e.is_multiple_of(2) {
        ph
    } else {
        -ph
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::part;

    fn e() -> Partition {
        Partition::empty()
    }

    /// Oracle: B_2 = Z_2 ≀ S_2 as signed permutations of {1,2}, with
    /// characters computed by summing over all 8 elements.
    #[test]
    fn b2_by_enumeration() {
        let t = wreath_table(&cyclic_base(2).unwrap(), 2);
        assert_eq!(t.num_classes(), 5);
        t.check_orthogonality().unwrap();
        // elements (signs, swap); cycle structure from cycle products
        let mut sizes: HashMap<Vec<Partition>, u64> = HashMap::new();
        for s0 in [1i32, -1] {
            for s1 in [1i32, -1] {
                for swap in [false, true] {
                    let pi = if swap {
                        if s0 * s1 == 1 {
                            vec![part(&[2]), e()]
                        } else {
                            vec![e(), part(&[2])]
                        }
                    } else {
                        let pos = [s0, s1].iter().filter(|&&x| x == 1).count();
                        vec![
                            Partition::new(vec![1; pos]).unwrap(),
                            Partition::new(vec![1; 2 - pos]).unwrap(),
                        ]
                    };
                    *sizes.entry(pi).or_default() += 1;
                }
            }
        }
        for (pi, sz) in sizes {
            let j = t.class_index(&multi_class(&pi)).unwrap();
            assert_eq!(t.class_size(j), sz, "{pi:?}");
        }
        // θ_(∅,(2)) is the product of the signs
        let a = t.char_index(&multi_label(&[e(), part(&[2])])).unwrap();
        for (j, c) in t.classes.iter().enumerate() {
            let s = if c.multi()[1].len() % 2 == 0 { 1 } else { -1 };
            assert_eq!(t.values[a][j], ExactScalar::from_int(s));
        }
    }

    #[test]
    fn wreath_orthogonality() {
        for (l, wmax) in [(1, 5), (2, 6), (3, 4), (4, 3), (6, 2)] {
            let b = cyclic_base(l).unwrap();
            b.table.check_orthogonality().unwrap();
            for w in 0..=wmax {
                wreath_table(&b, w)
                    .check_orthogonality()
                    .unwrap_or_else(|e| panic!("Z{l} wr S{w}: {e}"));
            }
        }
        assert!(cyclic_base(5).is_err());
        for w in 0..=3 {
            gpw_table(3, w).unwrap().check_orthogonality().unwrap();
        }
        assert!(gpw_table(5, 1).is_err());
    }

    #[test]
    fn sign_twist_conjugates_multipartition() {
        for w in 0..=4 {
            let t = gpw_table(3, w).unwrap();
            let mut s = vec![e(); 3];
            s[0] = Partition::new(vec![1; w]).unwrap();
            let eps = &t.values[t.char_index(&multi_label(&s)).unwrap()];
            for (i, ch) in t.chars.iter().enumerate() {
                let tw = t.tensor(&t.values[i], eps);
                let k = t.char_index(&multi_label(&multi_conj(ch.multi()))).unwrap();
                assert_eq!(tw, t.values[k]);
            }
            // the sign of (∅,∅,β) is the parity of the number of even parts
            for (j, c) in t.classes.iter().enumerate() {
                let v = c.multi();
                if v[0].is_empty() && v[1].is_empty() {
                    let even = v[2].parts().iter().filter(|x| *x % 2 == 0).count();
                    assert_eq!(eps[j] == ExactScalar::one(), even % 2 == 0);
                }
            }
        }
    }

    #[test]
    fn dn_tables() {
        for n in 2..=6 {
            let t = dn_table(n).unwrap();
            t.check_orthogonality()
                .unwrap_or_else(|e| panic!("D{n}: {e}"));
        }
        assert_eq!(dn_table(2).unwrap().num_chars(), 4);
        assert_eq!(dn_table(1).unwrap().num_chars(), 1);
        assert_eq!(dn_table(0).unwrap().num_chars(), 1);
        // split value formula on D_4 for μ = (2) and (1,1)
        let t = dn_table(4).unwrap();
        let b = wreath_table(&cyclic_base(2).unwrap(), 4);
        for mu in [part(&[2]), part(&[1, 1])] {
            let m = vec![mu.clone(), mu.clone()];
            let th = b.char_index(&multi_label(&m)).unwrap();
            for eps in [Split::Plus, Split::Minus] {
                let i = t.char_index(&multi_label(&m).with_assoc(eps)).unwrap();
                for pi in Partition::all(2) {
                    let cls = vec![pi.scaled(2), e()];
                    let bj = b.class_index(&multi_class(&cls)).unwrap();
                    for delta in [Split::Plus, Split::Minus] {
                        let j = t
                            .class_index(&ClassLabel {
                                split: delta,
                                ..multi_class(&cls)
                            })
                            .unwrap();
                        let d = ExactScalar::from_int(
                            (sn_value(&mu, &pi) << pi.len()) * (eps.sign() * delta.sign()) as i64,
                        );
                        let want = (b.values[th][bj].clone() + d).scale(&half());
                        assert_eq!(t.values[i][j], want);
                    }
                }
            }
        }
    }

    #[test]
    fn a_bijection_round_trip() {
        for w in 0..=6 {
            let mut count = 0;
            for mu in multipartitions(3, w) {
                if multi_conj(&mu) != mu {
                    continue;
                }
                count += 1;
                let pi = a_bijection(&mu).unwrap();
                assert!(in_splitting_set(&pi));
                assert_eq!(a_bijection_inverse(&pi).unwrap(), mu);
            }
            let classes = multipartitions(3, w)
                .into_iter()
                .filter(|p| in_splitting_set(p))
                .count();
            assert_eq!(count, classes);
        }
    }

    #[test]
    fn hpw_tables() {
        for w in 0..=3 {
            let t = hpw_table(3, w).unwrap();
            t.check_orthogonality()
                .unwrap_or_else(|e| panic!("H3,{w}: {e}"));
            for row in &t.values {
                for v in row {
                    assert!(v.is_p_integral(2), "{v}");
                }
            }
        }
        assert!(hpw_table(2, 1).is_err());
        assert!(hpw_table(5, 1).is_err());
    }

    #[test]
    fn fusion_keeps_difference_relation() {
        for w in 1..=4 {
            let big = hpw_table(3, w).unwrap();
            for mu in multipartitions(3, w)
                .into_iter()
                .filter(|m| multi_conj(m) == *m)
            {
                let dl = diff_row(&big, &mu);
                for c in mu[1].a_map().unwrap().parts().to_vec() {
                    let small = hpw_table(3, w - c).unwrap();
                    let mut mc = mu.clone();
                    mc[1] = mu[1].mu_lambda(c).unwrap().unwrap();
                    let ds = diff_row(&small, &mc);
                    let f = ExactScalar::rt(signed_odd(3 * c));
                    for (j, cl) in small.classes.iter().enumerate() {
                        let bj = big.class_index(&hpw_fuse(c, cl)).unwrap();
                        assert_eq!(dl[bj], &f * &ds[j], "{mu:?} c = {c} at {cl}");
                    }
                }
            }
        }
    }

    fn diff_row(t: &CharTable, mu: &[Partition]) -> Vec<ExactScalar> {
        let l = multi_label(mu);
        match (
            t.char_index(&l.with_assoc(Split::Plus)),
            t.char_index(&l.with_assoc(Split::Minus)),
        ) {
            (Some(p), Some(m)) => t.values[p]
                .iter()
                .zip(&t.values[m])
                .map(|(a, b)| a - b)
                .collect(),
            // H_{3,0}: the trivial character on both halves
            _ => vec![ExactScalar::one(); t.num_classes()],
        }
    }
}
