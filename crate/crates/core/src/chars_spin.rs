//! Spin character tables of the double covers `S̃_n` and `Ã_n`.
//!
//! Classes of `S̃_n` over types in `O ∪ D⁻` split into `t_π` and `z t_π`
//! (`z = Some(0)` and `Some(1)`); `t_π` is the odd-order lift for `π ∈ O`.
//! All other types give one class containing both lifts.

use std::collections::HashMap;
use std::sync::Mutex;

use crate::barpartitions::BarPartition;
use crate::chars_sym_alt::{an_radicand, sn_table};
use crate::error::Result;
use crate::exactnum::ExactScalar;
use crate::partitions::Partition;
use crate::table::{index2_descent, CharLabel, CharTable, ClassLabel, Descent, Shape, Split};

type SpinKey = (BarPartition, Partition);

static SPIN_CACHE: Mutex<Option<HashMap<SpinKey, i64>>> = Mutex::new(None);

fn in_o(p: &Partition) -> bool {
    p.all_odd()
}

fn in_d(p: &Partition) -> bool {
    p.has_distinct_parts()
}

fn is_even_perm(p: &Partition) -> bool {
    (p.size() - p.len()).is_multiple_of(2)
}

/// `O ∪ D⁻`: types whose two lifts are not conjugate in `S̃_n`.
pub fn splits_in_tilde_sn(p: &Partition) -> bool {
    in_o(p) || (in_d(p) && !is_even_perm(p))
}

/// `(-1)^((q²-1)/8)` for odd `q`.
pub fn schur_sign(q: usize) -> i32 {
    if ((q * q - 1) / 8).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn sign(e: usize) -> i64 {
    if e.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `i^((q-1)/2) rt(q)`.
fn root_q(q: usize) -> ExactScalar {
    ExactScalar::i_pow(((q - 1) / 2) as i64) * ExactScalar::rt(q as i64)
}

/// `α(λ, μ) = (-1)^L 2^m` summed over the `q`-bars of `λ`.
fn bar_alpha(l: &BarPartition, q: usize) -> HashMap<BarPartition, i64> {
    let mut out: HashMap<BarPartition, i64> = HashMap::new();
    for (b, mu) in l.bars(q) {
        let m = if l.sigma() == 1 && mu.sigma() == -1 {
            2
        } else {
            1
        };
        *out.entry(mu).or_default() += sign(b.leg) * m;
    }
    out
}

/// `ξ_λ(t_π)` for `π ∈ O`, removing the largest part of `π` as a bar.
pub fn spin_value_odd(lambda: &BarPartition, pi: &Partition) -> i64 {
    debug_assert!(in_o(pi));
    let key = (lambda.clone(), pi.clone());
    if let Some(v) = SPIN_CACHE
        .lock()
        .unwrap()
        .get_or_insert_with(HashMap::new)
        .get(&key)
    {
        return *v;
    }
    let v = if pi.is_empty() {
        i64::from(lambda.is_empty())
    } else {
        let q = pi.part(0);
        let rest = pi.without_part(q).expect("part present");
        let s = schur_sign(q) as i64;
        bar_alpha(lambda, q)
            .into_iter()
            .map(|(mu, a)| s * a * spin_value_odd(&mu, &rest))
            .sum()
    };
    SPIN_CACHE
        .lock()
        .unwrap()
        .get_or_insert_with(HashMap::new)
        .insert(key, v);
    v
}

/// `ξ_λ^±(t_λ)` for `λ ∈ D⁻`: `± i^((n-ℓ+1)/2) rt(z_λ/2)`.
pub fn spin_value_dminus(lambda: &BarPartition, plus: bool) -> ExactScalar {
    let e = (lambda.size() - lambda.len()).div_ceil(2);
    let v = ExactScalar::i_pow(e as i64) * ExactScalar::rt(2 * lambda.z() as i64).scale(&half());
    if plus {
        v
    } else {
        -v
    }
}

fn half() -> num_rational::BigRational {
    num_rational::BigRational::new(1.into(), 2.into())
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

pub fn spin_label(lambda: &BarPartition, assoc: Split) -> CharLabel {
    CharLabel {
        shape: Shape::Single(lambda.as_partition()),
        spin: true,
        assoc,
    }
}

fn tilde_classes(n: usize) -> Vec<ClassLabel> {
    let mut out = Vec::new();
    for p in Partition::all(n) {
        if splits_in_tilde_sn(&p) {
            for k in 0..2 {
                out.push(ClassLabel {
                    z: Some(k),
                    ..ClassLabel::single(p.clone(), 2 * p.z())
                });
            }
        } else {
            out.push(ClassLabel::single(p.clone(), p.z()));
        }
    }
    out
}

/// Value of a spin character of `S̃_n` on a class.
pub fn spin_value(lambda: &BarPartition, assoc: Split, class: &ClassLabel) -> ExactScalar {
    let pi = class.partition();
    let Some(k) = class.z else {
        return ExactScalar::zero();
    };
    let v = if in_o(pi) {
        ExactScalar::from_int(spin_value_odd(lambda, pi))
    } else if pi == &lambda.as_partition() {
        spin_value_dminus(lambda, assoc != Split::Minus)
    } else {
        ExactScalar::zero()
    };
    if k == 1 {
        -v
    } else {
        v
    }
}

/// Character table of `S̃_n`: lifted characters of `S_n`, then spin
/// characters `ξ_λ` (`σ(λ) = 1`) or `ξ_λ^±` (`σ(λ) = -1`).
pub fn tilde_sn_table(n: usize) -> CharTable {
    let base = sn_table(n);
    let classes = tilde_classes(n);
    let mut chars = Vec::new();
    let mut values = Vec::new();
    for (i, ch) in base.chars.iter().enumerate() {
        chars.push(ch.clone());
        values.push(
            classes
                .iter()
                .map(|c| {
                    let j = base
                        .class_index(&ClassLabel::single(c.partition().clone(), 0))
                        .expect("type");
                    base.values[i][j].clone()
                })
                .collect(),
        );
    }
    for l in BarPartition::all(n) {
        let assocs = if l.sigma() == 1 {
            vec![Split::None]
        } else {
            vec![Split::Plus, Split::Minus]
        };
        for a in assocs {
            chars.push(spin_label(&l, a));
            values.push(classes.iter().map(|c| spin_value(&l, a, c)).collect());
        }
    }
    CharTable {
        name: format!("2.S{n}"),
        order: 2 * factorial(n),
        classes,
        chars,
        values,
    }
}

/// Character table of `Ã_n` by descent from `S̃_n`.
///
/// Types in `OD` give four classes labelled by `z` and `±`; types in
/// `D⁺ \ O` give the two classes `t_π`, `z t_π`.
pub fn tilde_an_table(n: usize) -> Result<CharTable> {
    let parent = tilde_sn_table(n);
    if n <= 1 {
        return Ok(CharTable {
            name: format!("2.A{n}"),
            ..parent
        });
    }
    let eps = parent
        .char_index(&CharLabel::single(Partition::new(vec![1; n])?))
        .expect("sign");
    let mut split_classes = Vec::new();
    for (j, c) in parent.classes.iter().enumerate() {
        let p = c.partition();
        if in_d(p) && is_even_perm(p) {
            split_classes.push(j);
        }
    }
    let find = |p: &Partition, z: Option<u8>| {
        parent
            .class_index(&ClassLabel {
                z,
                ..ClassLabel::single(p.clone(), 0)
            })
            .expect("class present")
    };
    let mut diff_values = HashMap::new();
    for (i, ch) in parent.chars.iter().enumerate() {
        let p = ch.partition();
        if !ch.spin {
            if p.is_self_conjugate() {
                let a = p.a_map()?;
                let v = ExactScalar::rt(an_radicand(p));
                diff_values.insert((i, find(&a, Some(0))), v.clone());
                diff_values.insert((i, find(&a, Some(1))), v);
            }
            continue;
        }
        if !is_even_perm(p) {
            continue;
        }
        let v =
            ExactScalar::i_pow(((p.size() - p.len()) / 2) as i64) * ExactScalar::rt(p.z() as i64);
        if in_o(p) {
            diff_values.insert((i, find(p, Some(0))), v.clone());
            diff_values.insert((i, find(p, Some(1))), -v);
        } else {
            diff_values.insert((i, find(p, None)), v);
        }
    }
    let label = |c: &ClassLabel, first: bool| {
        if in_o(c.partition()) {
            ClassLabel {
                split: if first { Split::Plus } else { Split::Minus },
                ..c.clone()
            }
        } else {
            ClassLabel {
                z: Some(if first { 0 } else { 1 }),
                ..c.clone()
            }
        }
    };
    index2_descent(
        &parent,
        &Descent {
            name: format!("2.A{n}"),
            eps,
            split_classes,
            split_label: &label,
            diff_values,
        },
    )
}

/// Class of `S̃_n` containing `x g`, with `x` the odd-order lift of a
/// `q`-cycle on fresh points and `g` in `class` of `S̃_{n-q}`.
pub fn tilde_sn_fuse(q: usize, class: &ClassLabel) -> ClassLabel {
    assert!(q % 2 == 1);
    let l = class.partition().union(&Partition::from_unsorted(vec![q]));
    let z = if in_o(&l) {
        class.z
    } else if in_d(&l) && !is_even_perm(&l) {
        class.z.map(|k| k ^ u8::from(schur_sign(q) == -1))
    } else {
        None
    };
    ClassLabel {
        z,
        ..ClassLabel::single(l, 0)
    }
}

/// Class of `Ã_n` containing `x g` for `g` in `class` of `Ã_{n-q}`.
pub fn tilde_an_fuse(q: usize, class: &ClassLabel) -> ClassLabel {
    assert!(q % 2 == 1);
    let l = class.partition().union(&Partition::from_unsorted(vec![q]));
    let s = schur_sign(q);
    let (z, split) = if in_o(&l) && in_d(&l) {
        (class.z, Split::from_sign(class.split.sign() * s))
    } else if in_o(&l) {
        (class.z, Split::None)
    } else if in_d(&l) && is_even_perm(&l) {
        (class.z.map(|k| k ^ u8::from(s == -1)), Split::None)
    } else {
        (None, Split::None)
    };
    ClassLabel {
        z,
        split,
        ..ClassLabel::single(l, 0)
    }
}

/// Coefficient of `ξ_μ^η` in `ξ_λ^ε(x ·)` on `S̃_{n-q}`.
fn coef_sn(
    l: &BarPartition,
    eps: Split,
    mu: &BarPartition,
    eta: Split,
    q: usize,
    al: &HashMap<BarPartition, i64>,
) -> ExactScalar {
    let Some(&a) = al.get(mu) else {
        return ExactScalar::zero();
    };
    let s = schur_sign(q) as i64;
    if mu.sigma() == 1 {
        return ExactScalar::from_int(s * a);
    }
    let base = ExactScalar::from_int(a);
    let is_rem =
        l.contains(q) && l.as_partition().without_part(q).as_ref() == Some(&mu.as_partition());
    let v = if is_rem {
        // ξ^- swaps the roles of ξ_μ^±
        let same = (eps == Split::Minus) == (eta == Split::Minus);
        let r = root_q(q);
        if same {
            base + r
        } else {
            base - r
        }
    } else {
        base
    };
    v.scale(&half()).scale_int(s)
}

fn rhs(small: &CharTable, coef: &[ExactScalar], j: usize) -> ExactScalar {
    let mut acc = ExactScalar::zero();
    for (k, c) in coef.iter().enumerate() {
        if !c.is_zero() {
            acc += c * &small.values[k][j];
        }
    }
    acc
}

fn bar_of(ch: &CharLabel) -> BarPartition {
    BarPartition::new(ch.partition().parts().to_vec()).expect("distinct parts")
}

/// Checks the odd-cycle Murnaghan-Nakayama rule for spin characters of `S̃_n`.
pub fn check_mn_tilde_sn(n: usize, q: usize) -> std::result::Result<(), String> {
    assert!(q % 2 == 1 && q <= n);
    let big = tilde_sn_table(n);
    let small = tilde_sn_table(n - q);
    for (i, ch) in big.chars.iter().enumerate().filter(|(_, c)| c.spin) {
        let l = bar_of(ch);
        let al = bar_alpha(&l, q);
        let coef: Vec<ExactScalar> = small
            .chars
            .iter()
            .map(|sc| {
                if sc.spin {
                    coef_sn(&l, ch.assoc, &bar_of(sc), sc.assoc, q, &al)
                } else {
                    ExactScalar::zero()
                }
            })
            .collect();
        for (j, cl) in small.classes.iter().enumerate() {
            let target = tilde_sn_fuse(q, cl);
            let bj = big
                .class_index(&target)
                .ok_or_else(|| format!("no class {target}"))?;
            let r = rhs(&small, &coef, j);
            if r != big.values[i][bj] {
                return Err(format!(
                    "{ch} at {q}-cycle times {cl}: table {} vs rule {r}",
                    big.values[i][bj]
                ));
            }
        }
    }
    Ok(())
}

/// Coefficient of `ζ_μ^η` in `ζ_λ^ε(x ·)` on `Ã_{n-q}`.
fn coef_an(
    l: &BarPartition,
    eps: Split,
    mu: &BarPartition,
    eta: Split,
    q: usize,
    al: &HashMap<BarPartition, i64>,
) -> ExactScalar {
    let Some(&a) = al.get(mu) else {
        return ExactScalar::zero();
    };
    let s = schur_sign(q) as i64;
    if l.sigma() == -1 || mu.sigma() == -1 {
        // for σ(λ) = 1 the factor 2^m cancels the 1/2
        let v = if l.sigma() == 1 {
            ExactScalar::frac(a, 2)
        } else {
            ExactScalar::from_int(a)
        };
        return v.scale_int(s);
    }
    let r = root_q(q).scale_int((eps.sign() * eta.sign()) as i64);
    (ExactScalar::from_int(a) + r).scale(&half()).scale_int(s)
}

/// Checks the odd-cycle Murnaghan-Nakayama rule for spin characters of `Ã_n`.
pub fn check_mn_tilde_an(n: usize, q: usize) -> std::result::Result<(), String> {
    assert!(q % 2 == 1 && q <= n);
    let big = tilde_an_table(n).map_err(|e| e.to_string())?;
    let small = tilde_an_table(n - q).map_err(|e| e.to_string())?;
    for (i, ch) in big.chars.iter().enumerate().filter(|(_, c)| c.spin) {
        let l = bar_of(ch);
        let al = bar_alpha(&l, q);
        let coef: Vec<ExactScalar> = small
            .chars
            .iter()
            .map(|sc| {
                if sc.spin {
                    coef_an(&l, ch.assoc, &bar_of(sc), sc.assoc, q, &al)
                } else {
                    ExactScalar::zero()
                }
            })
            .collect();
        for (j, cl) in small.classes.iter().enumerate() {
            let target = tilde_an_fuse(q, cl);
            let bj = big
                .class_index(&target)
                .ok_or_else(|| format!("no class {target}"))?;
            let r = rhs(&small, &coef, j);
            if r != big.values[i][bj] {
                return Err(format!(
                    "{ch} at {q}-cycle times {cl}: table {} vs rule {r}",
                    big.values[i][bj]
                ));
            }
        }
    }
    Ok(())
}

/// `Δ_λ = ζ_λ^+ - ζ_λ^-` as a row of the `Ã_n` table, for `σ(λ) = 1`.
pub fn delta_row(t: &CharTable, lambda: &BarPartition) -> Option<Vec<ExactScalar>> {
    let p = t.char_index(&spin_label(lambda, Split::Plus))?;
    let m = t.char_index(&spin_label(lambda, Split::Minus))?;
    Some(
        t.values[p]
            .iter()
            .zip(&t.values[m])
            .map(|(a, b)| a - b)
            .collect(),
    )
}

/// Checks `Δ_λ(x g) = s i^((q-1)/2) rt(q) Δ_μ(g)` for `λ = μ ∪ {q}` in `D⁺`.
pub fn check_delta_relation(n: usize, q: usize) -> std::result::Result<(), String> {
    let big = tilde_an_table(n).map_err(|e| e.to_string())?;
    let small = tilde_an_table(n - q).map_err(|e| e.to_string())?;
    let factor = root_q(q).scale_int(schur_sign(q) as i64);
    for l in BarPartition::all(n)
        .into_iter()
        .filter(|l| l.sigma() == 1 && l.contains(q))
    {
        let mu = BarPartition::new(l.parts().iter().copied().filter(|&x| x != q).collect())
            .expect("bar");
        let (Some(dl), Some(dm)) = (delta_row(&big, &l), delta_row(&small, &mu)) else {
            continue;
        };
        for (j, cl) in small.classes.iter().enumerate() {
            let bj = big
                .class_index(&tilde_an_fuse(q, cl))
                .ok_or("missing class")?;
            if dl[bj] != &factor * &dm[j] {
                return Err(format!(
                    "Δ{l} at {q}-cycle times {cl}: {} vs {}",
                    dl[bj],
                    &factor * &dm[j]
                ));
            }
        }
    }
    Ok(())
}
