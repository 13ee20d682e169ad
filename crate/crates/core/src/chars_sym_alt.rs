//! Character tables of the symmetric groups (Murnaghan-Nakayama) and the
//! alternating groups (index-2 descent).

use std::collections::HashMap;
use std::sync::Mutex;

use crate::error::Result;
use crate::exactnum::ExactScalar;
use crate::partitions::Partition;
use crate::table::{index2_descent, CharLabel, CharTable, ClassLabel, Descent, Shape, Split};

type MnKey = (Partition, Partition);

static MN_CACHE: Mutex<Option<HashMap<MnKey, i64>>> = Mutex::new(None);

/// `χ_λ` on the class of cycle type `π`, by removing the largest cycle as a rim hook.
pub fn sn_value(lambda: &Partition, pi: &Partition) -> i64 {
    if let Some(v) = MN_CACHE
        .lock()
        .unwrap()
        .get_or_insert_with(HashMap::new)
        .get(&(lambda.clone(), pi.clone()))
    {
        return *v;
    }
    let v = if pi.is_empty() {
        i64::from(lambda.is_empty())
    } else {
        let q = pi.part(0);
        let rest = pi.without_part(q).expect("part present");
        lambda
            .hooks(q)
            .iter()
            .map(|(h, mu)| if h.leg % 2 == 0 { 1 } else { -1 } * sn_value(mu, &rest))
            .sum()
    };
    MN_CACHE
        .lock()
        .unwrap()
        .get_or_insert_with(HashMap::new)
        .insert((lambda.clone(), pi.clone()), v);
    v
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Character table of `S_n`; classes and characters in decreasing lexicographic order.
pub fn sn_table(n: usize) -> CharTable {
    let parts = Partition::all(n);
    let classes = parts
        .iter()
        .map(|p| ClassLabel::single(p.clone(), p.z()))
        .collect();
    let chars = parts.iter().map(|p| CharLabel::single(p.clone())).collect();
    let values = parts
        .iter()
        .map(|l| {
            parts
                .iter()
                .map(|p| ExactScalar::from_int(sn_value(l, p)))
                .collect()
        })
        .collect();
    CharTable {
        name: format!("S{n}"),
        order: factorial(n),
        classes,
        chars,
        values,
    }
}

/// `(-1)^((n-k)/2) h_1 ... h_k` for a self-conjugate `λ` with diagonal hooks `h`.
pub fn an_radicand(lambda: &Partition) -> i64 {
    let a = lambda.a_map().expect("self-conjugate");
    let prod: i64 = a.parts().iter().map(|&h| h as i64).product();
    let e = (lambda.size() - a.len()) / 2;
    if e.is_multiple_of(2) {
        prod
    } else {
        -prod
    }
}

/// Label of `ρ_λ` (or `ρ_λ^±` when `λ` is self-conjugate and `assoc` is set).
pub fn an_char_label(lambda: &Partition, assoc: Split) -> CharLabel {
    let c = lambda.conjugate();
    if c == *lambda {
        CharLabel::single(lambda.clone()).with_assoc(assoc)
    } else {
        CharLabel::single(lambda.clone().max(c))
    }
}

/// Character table of `A_n`.
pub fn an_table(n: usize) -> Result<CharTable> {
    let parent = sn_table(n);
    if n <= 1 {
        return Ok(CharTable {
            name: format!("A{n}"),
            ..parent
        });
    }
    let eps = parent
        .char_index(&CharLabel::single(Partition::new(vec![1; n])?))
        .expect("sign character");
    let split_classes: Vec<usize> = parent
        .classes
        .iter()
        .enumerate()
        .filter(|(_, c)| c.partition().has_distinct_parts() && c.partition().all_odd())
        .map(|(j, _)| j)
        .collect();
    let mut diff_values = HashMap::new();
    for (i, ch) in parent.chars.iter().enumerate() {
        let l = ch.partition();
        if !l.is_self_conjugate() {
            continue;
        }
        let a = l.a_map()?;
        let j = parent
            .class_index(&ClassLabel::single(a, 0))
            .expect("split class");
        diff_values.insert((i, j), ExactScalar::rt(an_radicand(l)));
    }
    let label = |c: &ClassLabel, first: bool| ClassLabel {
        split: if first { Split::Plus } else { Split::Minus },
        ..c.clone()
    };
    index2_descent(
        &parent,
        &Descent {
            name: format!("A{n}"),
            eps,
            split_classes,
            split_label: &label,
            diff_values,
        },
    )
}

/// Class of `A_n` containing `σ g`, where `σ` is a product of disjoint cycles
/// of the given lengths on fresh points and `g` lies in `class` of `A_{n - Σ q}`.
///
/// A split class gains a cycle so that the difference character picks up the
/// principal root `rt((-1)^((q-1)/2) q)`.
pub fn an_fuse(cycles: &[usize], class: &ClassLabel) -> ClassLabel {
    let mut pi = class.partition().clone();
    let mut split = class.split;
    for &q in cycles {
        let new = pi.union(&Partition::from_unsorted(vec![q]));
        let new_split = new.has_distinct_parts() && new.all_odd();
        split = if !new_split {
            Split::None
        } else {
            let old_sign = if pi.is_empty() { 1 } else { split.sign() };
            let c = if (q - 1) / 2 % 2 == 0 {
                q as i64
            } else {
                -(q as i64)
            };
            let old_rad = radicand_of_type(&pi);
            let t = if c < 0 && old_rad < 0 { -1 } else { 1 };
            Split::from_sign(old_sign * t)
        };
        pi = new;
    }
    ClassLabel {
        shape: Shape::Single(pi),
        z: None,
        split,
        central_order: 0,
    }
}

/// Radicand of the difference character on an OD type.
fn radicand_of_type(pi: &Partition) -> i64 {
    let prod: i64 = pi.parts().iter().map(|&h| h as i64).product();
    if ((pi.size() - pi.len()) / 2).is_multiple_of(2) {
        prod
    } else {
        -prod
    }
}

fn alpha(l: &Partition, q: usize) -> HashMap<Partition, i64> {
    l.hooks(q)
        .into_iter()
        .map(|(h, m)| (m, if h.leg % 2 == 0 { 1 } else { -1 }))
        .collect()
}

/// Checks the single-cycle Murnaghan-Nakayama rule on `A_n` for an odd `q`:
/// every value `ρ(σ g)` equals the coefficient expansion over `A_{n-q}`.
pub fn check_mn_an(n: usize, q: usize) -> std::result::Result<(), String> {
    assert!(q % 2 == 1 && q <= n);
    let big = an_table(n).map_err(|e| e.to_string())?;
    let small = an_table(n - q).map_err(|e| e.to_string())?;
    let small_deg = n - q >= 2;
    for (i, ch) in big.chars.iter().enumerate() {
        let l = ch.partition();
        let eps = ch.assoc.sign();
        let al = if l.is_self_conjugate() { 2 } else { 1 };
        let m = alpha(l, q);
        let mu_l = if l.is_self_conjugate() {
            l.mu_lambda(q).ok().flatten()
        } else {
            None
        };
        // coefficient vector over the characters of the small group
        let mut coef: Vec<ExactScalar> = vec![ExactScalar::zero(); small.num_chars()];
        for (k, sch) in small.chars.iter().enumerate() {
            let mu = sch.partition();
            let eta = sch.assoc.sign();
            let mus = mu.conjugate();
            let mut v = ExactScalar::zero();
            if mus != *mu {
                let a1 = m.get(mu).copied().unwrap_or(0) + m.get(&mus).copied().unwrap_or(0);
                v = ExactScalar::frac(a1, al);
            } else if let Some(&a) = m.get(mu) {
                if Some(mu) == mu_l.as_ref() && small_deg {
                    let c = if ((q - 1) / 2).is_multiple_of(2) {
                        q as i64
                    } else {
                        -(q as i64)
                    };
                    v = (ExactScalar::from_int(a)
                        + ExactScalar::rt(c).scale_int((eps * eta) as i64))
                    .scale(&num_rational::BigRational::new(1.into(), 2.into()));
                } else {
                    v = ExactScalar::frac(a, al);
                }
            }
            coef[k] = v;
        }
        for (j, cl) in small.classes.iter().enumerate() {
            let target = an_fuse(&[q], cl);
            let bj = big
                .class_index(&target)
                .ok_or_else(|| format!("no class {target}"))?;
            let mut rhs = ExactScalar::zero();
            for (k, c) in coef.iter().enumerate() {
                if !c.is_zero() {
                    rhs += c * &small.values[k][j];
                }
            }
            if rhs != big.values[i][bj] {
                return Err(format!(
                    "{ch} at {q}-cycle times {cl}: table {} vs rule {rhs}",
                    big.values[i][bj]
                ));
            }
        }
    }
    Ok(())
}

/// Checks the two-cycle rule on `A_n` for even `q1`, `q2`.
pub fn check_mn_an2(n: usize, q1: usize, q2: usize) -> std::result::Result<(), String> {
    assert!(q1.is_multiple_of(2) && q2.is_multiple_of(2) && q1 + q2 <= n);
    let big = an_table(n).map_err(|e| e.to_string())?;
    let small = an_table(n - q1 - q2).map_err(|e| e.to_string())?;
    for (i, ch) in big.chars.iter().enumerate() {
        let l = ch.partition();
        let al = if l.is_self_conjugate() { 2 } else { 1 };
        let mut paths: HashMap<Partition, i64> = HashMap::new();
        for (nu, a) in alpha(l, q1) {
            for (mu, b) in alpha(&nu, q2) {
                *paths.entry(mu).or_default() += a * b;
            }
        }
        for (j, cl) in small.classes.iter().enumerate() {
            let target = an_fuse(&[q1, q2], cl);
            let bj = big
                .class_index(&target)
                .ok_or_else(|| format!("no class {target}"))?;
            let mut rhs = ExactScalar::zero();
            for (k, sch) in small.chars.iter().enumerate() {
                let mu = sch.partition();
                let mus = mu.conjugate();
                let s = if mus != *mu {
                    paths.get(mu).copied().unwrap_or(0) + paths.get(&mus).copied().unwrap_or(0)
                } else {
                    paths.get(mu).copied().unwrap_or(0)
                };
                if s != 0 {
                    rhs += ExactScalar::frac(s, al) * small.values[k][j].clone();
                }
            }
            if rhs != big.values[i][bj] {
                return Err(format!(
                    "{ch} at ({q1},{q2}) times {cl}: table {} vs rule {rhs}",
                    big.values[i][bj]
                ));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::part;

    /// Oracle: the natural permutation character minus the trivial one is `χ_(n-1,1)`.
    fn perm_char_minus_one(pi: &Partition) -> i64 {
        pi.parts().iter().filter(|&&x| x == 1).count() as i64 - 1
    }

    #[test]
    fn small_values() {
        let t = sn_table(1);
        assert_eq!(t.values, vec![vec![ExactScalar::one()]]);
        assert_eq!(sn_value(&part(&[2, 1]), &part(&[3])), -1);
        for n in 2..=7 {
            for pi in Partition::all(n) {
                assert_eq!(sn_value(&part(&[n]), &pi), 1);
                assert_eq!(sn_value(&part(&[n - 1, 1]), &pi), perm_char_minus_one(&pi));
            }
        }
    }

    #[test]
    fn sn_orthogonality_and_twist() {
        for n in 0..=8 {
            let t = sn_table(n);
            t.check_orthogonality().unwrap();
            let sign = t
                .row(&CharLabel::single(Partition::new(vec![1; n]).unwrap()))
                .unwrap()
                .to_vec();
            for (i, ch) in t.chars.iter().enumerate() {
                let tw = t.tensor(&t.values[i], &sign);
                let c = t
                    .row(&CharLabel::single(ch.partition().conjugate()))
                    .unwrap();
                assert_eq!(tw, c);
            }
        }
    }

    /// Brute-force class sizes of `A_4` and direct evaluation of the
    /// three linear characters through the Klein quotient.
    #[test]
    fn a4_matches_direct_summation() {
        let t = an_table(4).unwrap();
        t.check_orthogonality().unwrap();
        assert_eq!(t.num_classes(), 4);
        let mut sizes: Vec<u64> = (0..4).map(|j| t.class_size(j)).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 3, 4, 4]);
        // the split 3-cycle classes carry ω and ω² for the two split characters
        let w = ExactScalar::frac(-1, 2)
            + ExactScalar::rt(-3).scale(&num_rational::BigRational::new(1.into(), 2.into()));
        let cp = t
            .class_index(&an_fuse(&[3], &ClassLabel::single(part(&[1]), 0)))
            .unwrap();
        let vals: Vec<&ExactScalar> = t
            .chars
            .iter()
            .enumerate()
            .filter(|(_, c)| c.assoc != Split::None)
            .map(|(i, _)| &t.values[i][cp])
            .collect();
        assert!(vals.contains(&&w) && vals.contains(&&w.conj()));
    }

    #[test]
    fn a3_values() {
        let t = an_table(3).unwrap();
        t.check_orthogonality().unwrap();
        let plus = an_char_label(&part(&[2, 1]), Split::Plus);
        let cl = ClassLabel {
            split: Split::Plus,
            ..ClassLabel::single(part(&[3]), 0)
        };
        let w = ExactScalar::frac(-1, 2)
            + ExactScalar::rt(-3).scale(&num_rational::BigRational::new(1.into(), 2.into()));
        assert_eq!(t.value(&plus, &cl).unwrap(), &w);
    }

    #[test]
    fn an_orthogonality_and_off_class_values() {
        for n in 0..=8 {
            let t = an_table(n).unwrap();
            t.check_orthogonality().unwrap();
            let s = sn_table(n);
            for (i, ch) in t.chars.iter().enumerate() {
                if ch.assoc == Split::None {
                    continue;
                }
                let a = ch.partition().a_map().unwrap();
                for (j, cl) in t.classes.iter().enumerate() {
                    if *cl.partition() != a {
                        let parent = s
                            .value(
                                &CharLabel::single(ch.partition().clone()),
                                &ClassLabel::single(cl.partition().clone(), 0),
                            )
                            .unwrap();
                        assert_eq!(t.values[i][j].scale_int(2), *parent);
                    }
                }
            }
        }
    }

    #[test]
    fn mn_rule_on_alternating_groups() {
        for n in 3..=8 {
            for q in [3, 5, 7] {
                if q <= n && n - q >= 2 {
                    check_mn_an(n, q).unwrap();
                }
            }
        }
        for n in 4..=8 {
            check_mn_an2(n, 2, 2).unwrap();
        }
    }
}
