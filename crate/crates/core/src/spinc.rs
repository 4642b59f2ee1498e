//! Characteristic covectors, their classes modulo `2q(V)`, and the group
//! `H = V*/q(V)` acting on the classes by `c + 2[α]`.
//!
//! Classes are labelled by elements of `H` written in Smith normal form
//! coordinates, relative to the base covector `diag(Q)`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::goeritz::GoeritzForm;
use crate::linalg::{smith_normal_form, IntMatrix};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum SpincError {
    #[error("covector has length {got}, form has rank {want}")]
    Length { got: usize, want: usize },
    #[error("covector {0:?} is not characteristic")]
    NotCharacteristic(Vec<i64>),
    #[error("element {0} is not 2-torsion")]
    NotTwoTorsion(HElement),
    #[error("the zero element has no genus bound")]
    ZeroElement,
}

/// Integer row vector `κ` with `κ_i ≡ Q_ii (mod 2)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CharVector(Vec<i64>);

impl CharVector {
    pub fn new(f: &GoeritzForm, entries: Vec<i64>) -> Result<Self, SpincError> {
        if entries.len() != f.rank() {
            return Err(SpincError::Length { got: entries.len(), want: f.rank() });
        }
        let q = f.matrix();
        if entries.iter().enumerate().any(|(i, &k)| (k - q[(i, i)]).rem_euclid(2) != 0) {
            return Err(SpincError::NotCharacteristic(entries));
        }
        Ok(Self(entries))
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn negated(&self) -> Self {
        Self(self.0.iter().map(|x| -x).collect())
    }
}

impl fmt::Display for CharVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", e.join(", "))
    }
}

/// Element of `H` in Smith coordinates: entry `i` lies in `0..d_i`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HElement(pub Vec<i64>);

impl HElement {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }
}

impl fmt::Display for HElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", e.join(", "))
    }
}

/// `H = Z^b / Q Z^b ≅ ⊕ Z/d_i`, with `left · Q · right = diag(d)`.
#[derive(Clone, Debug)]
pub struct HomologyGroup {
    factors: Vec<i64>,
    left: IntMatrix,
    left_inv: IntMatrix,
    right: IntMatrix,
}

impl HomologyGroup {
    /// All `b` invariant factors, including trivial ones.
    pub fn factors(&self) -> &[i64] {
        &self.factors
    }

    /// Invariant factors greater than one.
    pub fn nontrivial_factors(&self) -> Vec<i64> {
        self.factors.iter().copied().filter(|&d| d > 1).collect()
    }

    pub fn order(&self) -> u128 {
        self.factors.iter().map(|&d| d as u128).product()
    }

    pub fn left(&self) -> &IntMatrix {
        &self.left
    }

    pub fn left_inv(&self) -> &IntMatrix {
        &self.left_inv
    }

    pub fn right(&self) -> &IntMatrix {
        &self.right
    }

    pub fn zero(&self) -> HElement {
        HElement(vec![0; self.factors.len()])
    }

    /// Class of a covector `α ∈ V*`.
    pub fn reduce(&self, alpha: &[i64]) -> HElement {
        let y = self.left.mul_vec(alpha);
        HElement(y.iter().zip(&self.factors).map(|(&v, &d)| v.rem_euclid(d)).collect())
    }

    /// A covector representing `t`.
    pub fn lift(&self, t: &HElement) -> Vec<i64> {
        self.left_inv.mul_vec(&t.0)
    }

    pub fn add(&self, x: &HElement, y: &HElement) -> HElement {
        HElement(
            x.0.iter().zip(&y.0).zip(&self.factors).map(|((&a, &b), &d)| (a + b).rem_euclid(d)).collect(),
        )
    }

    pub fn neg(&self, x: &HElement) -> HElement {
        HElement(x.0.iter().zip(&self.factors).map(|(&a, &d)| (-a).rem_euclid(d)).collect())
    }

    pub fn is_two_torsion(&self, x: &HElement) -> bool {
        self.add(x, x).is_zero()
    }

    /// Mixed-radix position of `x` in [`Self::elements`].
    pub fn index_of(&self, x: &HElement) -> usize {
        x.0.iter().zip(&self.factors).fold(0usize, |acc, (&v, &d)| acc * d as usize + v as usize)
    }

    /// Every element, lexicographic in Smith coordinates.
    pub fn elements(&self) -> impl Iterator<Item = HElement> + '_ {
        let order = self.order() as usize;
        (0..order).map(move |mut idx| {
            let mut coords = vec![0i64; self.factors.len()];
            for (c, &d) in coords.iter_mut().zip(&self.factors).rev() {
                *c = (idx % d as usize) as i64;
                idx /= d as usize;
            }
            HElement(coords)
        })
    }
}

pub fn homology_group(f: &GoeritzForm) -> HomologyGroup {
    let s = smith_normal_form(f.matrix());
    debug_assert!(s.diagonal.iter().all(|&d| d > 0), "nonsingular form");
    HomologyGroup { factors: s.diagonal, left: s.left, left_inv: s.left_inv, right: s.right }
}

/// Every `t` with `2t = 0`, including zero, lexicographic.
pub fn two_torsion_elements(h: &HomologyGroup) -> Vec<HElement> {
    let choices: Vec<Vec<i64>> =
        h.factors.iter().map(|&d| if d % 2 == 0 { vec![0, d / 2] } else { vec![0] }).collect();
    let mut out = vec![Vec::new()];
    for c in &choices {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<i64>| {
                c.iter().map(move |&x| {
                    let mut p = prefix.clone();
                    p.push(x);
                    p
                })
            })
            .collect();
    }
    out.into_iter().map(HElement).collect()
}

/// A characteristic class, labelled by `(κ - diag Q)/2` in `H`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SpincClass {
    pub representative: CharVector,
    pub class_id: HElement,
}

/// The affine space of characteristic classes over `H`.
#[derive(Clone, Debug)]
pub struct SpincSpace {
    base: CharVector,
    group: HomologyGroup,
}

impl SpincSpace {
    pub fn new(f: &GoeritzForm) -> Self {
        Self { base: base_characteristic(f), group: homology_group(f) }
    }

    pub fn base(&self) -> &CharVector {
        &self.base
    }

    pub fn group(&self) -> &HomologyGroup {
        &self.group
    }

    pub fn class_count(&self) -> u128 {
        self.group.order()
    }

    pub fn class_of(&self, kappa: &CharVector) -> SpincClass {
        SpincClass { representative: kappa.clone(), class_id: self.group.reduce(&self.half_offset(kappa)) }
    }

    /// The class with the given label, represented by `diag Q + 2·lift(t)`.
    pub fn class_with_id(&self, t: &HElement) -> SpincClass {
        let lift = self.group.lift(t);
        let rep = self.base.0.iter().zip(&lift).map(|(&k, &a)| k + 2 * a).collect();
        SpincClass { representative: CharVector(rep), class_id: t.clone() }
    }

    fn half_offset(&self, kappa: &CharVector) -> Vec<i64> {
        kappa.0.iter().zip(&self.base.0).map(|(&k, &b)| (k - b) / 2).collect()
    }

    pub fn enumerate_classes(&self) -> Vec<SpincClass> {
        self.group.elements().map(|t| self.class_with_id(&t)).collect()
    }

    /// `κ₁ - κ₂ ∈ 2q(V)`.
    pub fn same_class(&self, k1: &CharVector, k2: &CharVector) -> bool {
        self.class_of(k1).class_id == self.class_of(k2).class_id
    }

    /// `c + 2[α]`, with `α` lifted to a covector.
    pub fn shift_class(&self, c: &SpincClass, alpha: &HElement) -> SpincClass {
        let lift = self.group.lift(alpha);
        let rep = c.representative.0.iter().zip(&lift).map(|(&k, &a)| k + 2 * a).collect();
        SpincClass { representative: CharVector(rep), class_id: self.group.add(&c.class_id, alpha) }
    }

    /// Class of `-κ`.
    pub fn conjugate(&self, c: &SpincClass) -> SpincClass {
        self.class_of(&c.representative.negated())
    }
}

pub fn base_characteristic(f: &GoeritzForm) -> CharVector {
    CharVector(f.matrix().diagonal())
}

pub fn enumerate_classes(f: &GoeritzForm) -> Vec<SpincClass> {
    SpincSpace::new(f).enumerate_classes()
}

/// Validates both covectors and tests `κ₁ - κ₂ ∈ 2q(V)`.
pub fn same_class(f: &GoeritzForm, k1: &[i64], k2: &[i64]) -> Result<bool, SpincError> {
    let (k1, k2) = (CharVector::new(f, k1.to_vec())?, CharVector::new(f, k2.to_vec())?);
    Ok(SpincSpace::new(f).same_class(&k1, &k2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn form(rows: &[&[i64]]) -> GoeritzForm {
        GoeritzForm::from_rows(rows).unwrap()
    }

    fn case_one() -> GoeritzForm {
        form(&[&[-4, 2], &[2, -6]])
    }

    fn odd_zero() -> GoeritzForm {
        form(&[&[-3, 1, 1], &[1, -3, 1], &[1, 1, -3]])
    }

    #[test]
    fn base_vectors() {
        assert_eq!(base_characteristic(&form(&[&[-2]])).entries(), &[-2]);
        let f = case_one();
        let base = base_characteristic(&f);
        assert_eq!(base.entries(), &[-4, -6]);
        // 2Qv = (-4,-6) forces v = (9/10, 7/10), so diag Q and 0 differ.
        assert_eq!(f.q_of(&[9, 7]), vec![-22, -24]);
        assert!(!same_class(&f, &[-4, -6], &[0, 0]).unwrap());
        // (4,-10) - (-4,-6) = 2 q((-1,0))
        assert!(same_class(&f, &[-4, -6], &[4, -10]).unwrap());
        let base = base_characteristic(&odd_zero());
        assert_eq!(base.entries(), &[-3, -3, -3]);
        assert!(CharVector::new(&odd_zero(), vec![1, -1, 1]).is_ok());
        assert!(CharVector::new(&odd_zero(), vec![0, -1, 1]).is_err());
    }

    #[test]
    fn groups() {
        assert_eq!(homology_group(&form(&[&[-2]])).factors(), &[2]);
        assert_eq!(homology_group(&case_one()).factors(), &[2, 10]);
        let h = homology_group(&odd_zero());
        assert_eq!(h.order(), 16);
        assert_eq!(h.nontrivial_factors(), vec![4, 4]);
    }

    #[test]
    fn class_enumeration() {
        let f = form(&[&[-2]]);
        let classes = enumerate_classes(&f);
        assert_eq!(classes.len(), 2);
        // mod 4Z the characteristic values are 0 and 2
        let residues: HashSet<i64> =
            classes.iter().map(|c| c.representative.entries()[0].rem_euclid(4)).collect();
        assert_eq!(residues, HashSet::from([0, 2]));
        assert_eq!(enumerate_classes(&case_one()).len(), 20);

        let empty = GoeritzForm::from_matrix(IntMatrix::zeros(0, 0)).unwrap();
        let classes = enumerate_classes(&empty);
        assert_eq!(classes.len(), 1);
        assert!(classes[0].representative.entries().is_empty());
    }

    #[test]
    fn class_equality() {
        let f = case_one();
        assert!(same_class(&f, &[0, 0], &[0, 0]).unwrap());
        assert!(!same_class(&f, &[0, 0], &[-4, 2]).unwrap());
        assert!(same_class(&form(&[&[-2]]), &[0], &[4]).unwrap());
        assert!(matches!(same_class(&f, &[1, 0], &[0, 0]), Err(SpincError::NotCharacteristic(_))));
        assert!(matches!(same_class(&f, &[0], &[0, 0]), Err(SpincError::Length { .. })));
    }

    #[test]
    fn torsion() {
        let h = homology_group(&case_one());
        let t = two_torsion_elements(&h);
        assert_eq!(t.len(), 4);
        assert_eq!(t.iter().filter(|x| !x.is_zero()).count(), 3);
        assert!(t.iter().all(|x| h.is_two_torsion(x)));
        let z3 = homology_group(&form(&[&[-3]]));
        assert_eq!(two_torsion_elements(&z3), vec![z3.zero()]);
        assert!(two_torsion_elements(&homology_group(&odd_zero())).len() >= 4);
    }

    #[test]
    fn shifting() {
        let f = case_one();
        let s = SpincSpace::new(&f);
        let k0 = s.class_of(&CharVector::new(&f, vec![0, 0]).unwrap());
        let k1 = CharVector::new(&f, vec![-4, 2]).unwrap();
        assert_eq!(s.shift_class(&k0, &s.group().zero()).class_id, k0.class_id);
        let alpha = s.group().reduce(&[-2, 1]);
        let shifted = s.shift_class(&k0, &alpha);
        assert!(s.same_class(&shifted.representative, &k1));
        assert_eq!(shifted.class_id, s.class_of(&k1).class_id);
        for t in two_torsion_elements(s.group()) {
            let twice = s.shift_class(&s.shift_class(&k0, &t), &t);
            assert_eq!(twice.class_id, k0.class_id);
            assert!(s.same_class(&twice.representative, &k0.representative));
        }
    }

    #[test]
    fn shifts_act_freely_and_transitively() {
        for f in [case_one(), odd_zero(), form(&[&[-5, 1, 1], &[1, -3, 1], &[1, 1, -3]])] {
            let s = SpincSpace::new(&f);
            let classes = s.enumerate_classes();
            let ids: HashSet<HElement> = classes.iter().map(|c| c.class_id.clone()).collect();
            assert_eq!(ids.len() as i128, f.det_abs());
            let c0 = &classes[0];
            let hit: HashSet<HElement> =
                s.group().elements().map(|t| s.shift_class(c0, &t).class_id).collect();
            assert_eq!(hit, ids);
            for c in &classes {
                assert_eq!(s.class_of(&c.representative).class_id, c.class_id);
            }
        }
    }
}
