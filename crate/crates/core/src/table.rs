//! Character tables with labeled classes and characters, exact orthogonality
//! checks and the index-2 Clifford descent.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::ExactScalar;
use crate::partitions::Partition;

/// Combinatorial part of a class or character label.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Shape {
    Single(Partition),
    Multi(Vec<Partition>),
}

/// Which half of a split class or a split character.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Split {
    None,
    Plus,
    Minus,
}

impl Split {
    pub fn sign(self) -> i32 {
        match self {
            Split::Minus => -1,
            _ => 1,
        }
    }

    pub fn from_sign(s: i32) -> Self {
        if s < 0 {
            Split::Minus
        } else {
            Split::Plus
        }
    }

    fn suffix(self) -> &'static str {
        match self {
            Split::None => "",
            Split::Plus => "+",
            Split::Minus => "-",
        }
    }
}

/// A conjugacy class. `z` is the power of the central element of a double
/// cover when the class sees it (`None` for ordinary groups and for classes
/// that contain both `t` and `zt`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ClassLabel {
    pub shape: Shape,
    pub z: Option<u8>,
    pub split: Split,
    pub central_order: u64,
}

/// An irreducible character.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CharLabel {
    pub shape: Shape,
    pub spin: bool,
    pub assoc: Split,
}

impl ClassLabel {
    pub fn new(shape: Shape, central_order: u64) -> Self {
        Self {
            shape,
            z: None,
            split: Split::None,
            central_order,
        }
    }

    pub fn single(p: Partition, central_order: u64) -> Self {
        Self::new(Shape::Single(p), central_order)
    }

    pub fn partition(&self) -> &Partition {
        match &self.shape {
            Shape::Single(p) => p,
            Shape::Multi(_) => panic!("class label is a multipartition"),
        }
    }

    pub fn multi(&self) -> &[Partition] {
        match &self.shape {
            Shape::Multi(v) => v,
            Shape::Single(_) => panic!("class label is a partition"),
        }
    }

    /// Same class ignoring the centralizer order.
    pub fn same_class(&self, other: &ClassLabel) -> bool {
        self.shape == other.shape && self.z == other.z && self.split == other.split
    }
}

impl CharLabel {
    pub fn ordinary(shape: Shape) -> Self {
        Self {
            shape,
            spin: false,
            assoc: Split::None,
        }
    }

    pub fn single(p: Partition) -> Self {
        Self::ordinary(Shape::Single(p))
    }

    pub fn partition(&self) -> &Partition {
        match &self.shape {
            Shape::Single(p) => p,
            Shape::Multi(_) => panic!("character label is a multipartition"),
        }
    }

    pub fn multi(&self) -> &[Partition] {
        match &self.shape {
            Shape::Multi(v) => v,
            Shape::Single(_) => panic!("character label is a partition"),
        }
    }

    pub fn with_assoc(&self, assoc: Split) -> Self {
        Self {
            assoc,
            ..self.clone()
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::Single(p) => write!(f, "({p})"),
            Shape::Multi(v) => {
                let s: Vec<String> = v.iter().map(|p| p.to_string()).collect();
                write!(f, "({})", s.join("|"))
            }
        }
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.z == Some(1) {
            write!(f, "z")?;
        }
        write!(f, "{}{}", self.shape, self.split.suffix())
    }
}

impl fmt::Display for CharLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let head = if self.spin { "xi" } else { "chi" };
        write!(f, "{head}{}{}", self.shape, self.assoc.suffix())
    }
}

impl Serialize for Shape {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A group with labeled classes, labeled irreducible characters and exact values.
#[derive(Clone, Debug, Serialize)]
pub struct CharTable {
    pub name: String,
    pub order: u64,
    pub classes: Vec<ClassLabel>,
    pub chars: Vec<CharLabel>,
    /// `values[i][j]` is character `i` on class `j`.
    pub values: Vec<Vec<ExactScalar>>,
}

fn inv(n: u64) -> BigRational {
    BigRational::new(BigInt::from(1), BigInt::from(n))
}

impl CharTable {
    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn num_chars(&self) -> usize {
        self.chars.len()
    }

    pub fn class_size(&self, j: usize) -> u64 {
        self.order / self.classes[j].central_order
    }

    pub fn char_index(&self, label: &CharLabel) -> Option<usize> {
        self.chars.iter().position(|c| c == label)
    }

    pub fn class_index(&self, label: &ClassLabel) -> Option<usize> {
        self.classes.iter().position(|c| c.same_class(label))
    }

    /// Index of the identity class (the first class with trivial shape and no central factor).
    pub fn identity_class(&self) -> usize {
        (0..self.num_classes())
            .max_by_key(|&j| self.classes[j].central_order)
            .expect("nonempty table")
    }

    /// `<a, b>` restricted to the classes in `subset` (all classes when `None`).
    pub fn inner(
        &self,
        a: &[ExactScalar],
        b: &[ExactScalar],
        subset: Option<&[usize]>,
    ) -> ExactScalar {
        let mut acc = ExactScalar::zero();
        let mut add = |j: usize| {
            if a[j].is_zero() || b[j].is_zero() {
                return;
            }
            acc += (&a[j] * &b[j].conj()).scale(&inv(self.classes[j].central_order));
        };
        match subset {
            Some(s) => s.iter().for_each(|&j| add(j)),
            None => (0..self.num_classes()).for_each(add),
        }
        acc
    }

    pub fn inner_chars(&self, i: usize, k: usize) -> ExactScalar {
        self.inner(&self.values[i], &self.values[k], None)
    }

    /// Pointwise product of two rows.
    pub fn tensor(&self, a: &[ExactScalar], b: &[ExactScalar]) -> Vec<ExactScalar> {
        a.iter().zip(b).map(|(x, y)| x * y).collect()
    }

    /// Row equal to `v`, if any.
    pub fn find_row(&self, v: &[ExactScalar]) -> Option<usize> {
        self.values.iter().position(|r| r.as_slice() == v)
    }

    /// Both orthogonality relations, exactly. Returns the first violation.
    pub fn check_orthogonality(&self) -> std::result::Result<(), String> {
        let nc = self.num_classes();
        if self.num_chars() != nc {
            return Err(format!("{} characters for {nc} classes", self.num_chars()));
        }
        let total: u64 = (0..nc).map(|j| self.class_size(j)).sum();
        if total != self.order {
            return Err(format!(
                "class sizes sum to {total}, group order {}",
                self.order
            ));
        }
        for j in 0..nc {
            if !self.order.is_multiple_of(self.classes[j].central_order) {
                return Err(format!(
                    "centralizer of {} does not divide the order",
                    self.classes[j]
                ));
            }
        }
        for i in 0..nc {
            for k in i..nc {
                let v = self.inner_chars(i, k);
                let want = if i == k {
                    ExactScalar::one()
                } else {
                    ExactScalar::zero()
                };
                if v != want {
                    return Err(format!("<{}, {}> = {v}", self.chars[i], self.chars[k]));
                }
            }
        }
        for j in 0..nc {
            for l in j..nc {
                let mut acc = ExactScalar::zero();
                for i in 0..nc {
                    acc += &self.values[i][j] * &self.values[i][l].conj();
                }
                let want = if j == l {
                    ExactScalar::from_int(self.classes[j].central_order as i64)
                } else {
                    ExactScalar::zero()
                };
                if acc != want {
                    return Err(format!(
                        "column sum at ({}, {}) = {acc}",
                        self.classes[j], self.classes[l]
                    ));
                }
            }
        }
        Ok(())
    }

    /// The character values of `label` on every class.
    pub fn row(&self, label: &CharLabel) -> Option<&[ExactScalar]> {
        self.char_index(label).map(|i| self.values[i].as_slice())
    }

    /// Value of a character on a class, by label.
    pub fn value(&self, ch: &CharLabel, cl: &ClassLabel) -> Option<&ExactScalar> {
        let i = self.char_index(ch)?;
        let j = self.class_index(cl)?;
        Some(&self.values[i][j])
    }

    /// Plain-text rendering with aligned columns.
    pub fn render_text(&self) -> String {
        let mut rows: Vec<Vec<String>> = Vec::new();
        let mut head = vec![String::new()];
        head.extend(self.classes.iter().map(|c| c.to_string()));
        rows.push(head);
        let mut cent = vec!["|C|".to_string()];
        cent.extend(self.classes.iter().map(|c| c.central_order.to_string()));
        rows.push(cent);
        for (i, ch) in self.chars.iter().enumerate() {
            let mut r = vec![ch.to_string()];
            r.extend(self.values[i].iter().map(|v| v.to_string()));
            rows.push(r);
        }
        let ncol = rows[0].len();
        let widths: Vec<usize> = (0..ncol)
            .map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
            .collect();
        let mut out = format!("{} (order {})\n", self.name, self.order);
        for r in rows {
            let cells: Vec<String> = r
                .iter()
                .zip(&widths)
                .map(|(s, w)| format!("{s:>w$}"))
                .collect();
            out.push_str(cells.join("  ").trim_end());
            out.push('\n');
        }
        out
    }
}

/// Input for [`index2_descent`].
pub struct Descent<'a> {
    pub name: String,
    /// Row index of the order-two linear character whose kernel is the subgroup.
    pub eps: usize,
    /// Parent classes (inside the kernel) that split in the subgroup.
    pub split_classes: Vec<usize>,
    /// Labels for the two halves of a split parent class.
    pub split_label: &'a dyn Fn(&ClassLabel, bool) -> ClassLabel,
    /// `(χ+ - χ-)` on the first half of a split class, keyed by (parent char, parent class).
    pub diff_values: HashMap<(usize, usize), ExactScalar>,
}

/// Characters and classes of an index-2 subgroup from the parent table by
/// Clifford theory. Pairs `χ ≠ χ⊗ε` merge into one restriction carrying the
/// label of the pair member listed first; fixed characters split into
/// `χ± = (Res χ ± Δ)/2`.
pub fn index2_descent(parent: &CharTable, d: &Descent) -> Result<CharTable> {
    let eps = &parent.values[d.eps];
    let one = ExactScalar::one();
    let kernel: Vec<usize> = (0..parent.num_classes())
        .filter(|&j| eps[j] == one)
        .collect();
    for &s in &d.split_classes {
        if !kernel.contains(&s) {
            return Err(Error::InconsistentSplit(format!(
                "class {} is outside the kernel",
                parent.classes[s]
            )));
        }
    }
    // subgroup classes: (parent index, half) with half 0/1 for split classes
    let mut classes = Vec::new();
    let mut origin: Vec<(usize, Option<bool>)> = Vec::new();
    for &j in &kernel {
        let c = &parent.classes[j];
        if d.split_classes.contains(&j) {
            for half in [true, false] {
                let mut l = (d.split_label)(c, half);
                l.central_order = c.central_order;
                classes.push(l);
                origin.push((j, Some(half)));
            }
        } else {
            let mut l = c.clone();
            if !c.central_order.is_multiple_of(2) {
                return Err(Error::InconsistentSplit(format!(
                    "class {c} cannot fuse with odd centralizer"
                )));
            }
            l.central_order = c.central_order / 2;
            classes.push(l);
            origin.push((j, None));
        }
    }
    let restrict = |row: &[ExactScalar]| -> Vec<ExactScalar> {
        origin.iter().map(|&(j, _)| row[j].clone()).collect()
    };
    let mut chars = Vec::new();
    let mut values = Vec::new();
    let mut done = vec![false; parent.num_chars()];
    for i in 0..parent.num_chars() {
        if done[i] {
            continue;
        }
        done[i] = true;
        let twisted = parent.tensor(&parent.values[i], eps);
        if twisted != parent.values[i] {
            let partner = parent.find_row(&twisted).ok_or_else(|| {
                Error::InconsistentSplit(format!("{}⊗ε is not in the table", parent.chars[i]))
            })?;
            done[partner] = true;
            chars.push(parent.chars[i].with_assoc(Split::None));
            values.push(restrict(&parent.values[i]));
            continue;
        }
        let res = restrict(&parent.values[i]);
        let half = ExactScalar::frac(1, 2);
        let mut delta = vec![ExactScalar::zero(); classes.len()];
        let mut found = false;
        for (k, &(j, h)) in origin.iter().enumerate() {
            if let (Some(first), Some(v)) = (h, d.diff_values.get(&(i, j))) {
                found = true;
                delta[k] = if first { v.clone() } else { -v };
            }
        }
        if !found {
            return Err(Error::InconsistentSplit(format!(
                "no difference values for self-dual {}",
                parent.chars[i]
            )));
        }
        for (s, assoc) in [(1, Split::Plus), (-1, Split::Minus)] {
            chars.push(parent.chars[i].with_assoc(assoc));
            values.push(
                res.iter()
                    .zip(&delta)
                    .map(|(r, dl)| &half * &(r + &dl.scale_int(s)))
                    .collect(),
            );
        }
    }
    let t = CharTable {
        name: d.name.clone(),
        order: parent.order / 2,
        classes,
        chars,
        values,
    };
    t.check_orthogonality().map_err(Error::InconsistentSplit)?;
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::part;

    fn cyclic3() -> CharTable {
        let w = ExactScalar::frac(-1, 2)
            + ExactScalar::rt(-3).scale(&BigRational::new(1.into(), 2.into()));
        let one = ExactScalar::one();
        let classes = (0..3)
            .map(|k| ClassLabel::single(Partition::from_unsorted(vec![k + 1]), 3))
            .collect();
        let chars = (0..3)
            .map(|k| CharLabel::single(Partition::from_unsorted(vec![k + 1])))
            .collect();
        CharTable {
            name: "Z3".into(),
            order: 3,
            classes,
            chars,
            values: vec![
                vec![one.clone(), one.clone(), one.clone()],
                vec![one.clone(), w.clone(), w.conj()],
                vec![one.clone(), w.conj(), w.clone()],
            ],
        }
    }

    #[test]
    fn orthogonality_detects_errors() {
        let mut t = cyclic3();
        assert!(t.check_orthogonality().is_ok());
        t.values[1][1] = ExactScalar::one();
        assert!(t.check_orthogonality().is_err());
    }

    #[test]
    fn text_rendering_lists_every_label() {
        let t = cyclic3();
        let s = t.render_text();
        assert!(s.contains("chi(2)"));
        assert!(s.contains("-1/2 + 1/2*rt(-3)"));
        assert_eq!(part(&[1]).to_string(), "1");
    }
}
