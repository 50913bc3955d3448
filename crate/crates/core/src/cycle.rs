//! Labelled cycles and finite or parametric families of forbidden cycles.

use crate::error::{Error, Result};
use crate::semigroup::{Elem, Semigroup};
use serde::Serialize;
use std::collections::BTreeSet;

/// A cycle of edge labels, stored in canonical form: the lexicographically
/// smallest sequence over all rotations and the reflection.
///
/// Length 2 encodes the degenerate "two edges of different lengths" cycle.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct LabelledCycle {
    labels: Vec<Elem>,
}

impl LabelledCycle {
    pub fn new(labels: Vec<Elem>) -> Result<Self> {
        if labels.len() < 2 {
            return Err(Error::input("a cycle needs at least two edges"));
        }
        Ok(LabelledCycle {
            labels: canonical_rotation(&labels),
        })
    }

    pub fn labels(&self) -> &[Elem] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `⊕`-length of the whole cycle.
    pub fn total(&self, s: &Semigroup) -> Elem {
        s.fold(&self.labels).expect("cycles are nonempty")
    }

    /// Some label fails `a_i ⪯ ⊕_{j≠i} a_j`, so the cycle has no
    /// completion. For two-edge cycles this means differing labels.
    pub fn is_nonmetric(&self, s: &Semigroup) -> bool {
        if self.labels.len() == 2 {
            return self.labels[0] != self.labels[1];
        }
        self.violating_edge(s).is_some()
    }

    /// Index of a label with `a_i ⪯̸ ⊕_{j≠i} a_j`, if any.
    pub fn violating_edge(&self, s: &Semigroup) -> Option<usize> {
        let k = self.labels.len();
        (0..k).find(|&i| {
            let others: Vec<Elem> = (0..k)
                .filter(|&j| j != i)
                .map(|j| self.labels[j])
                .collect();
            let sum = s.fold(&others).unwrap();
            !s.le(self.labels[i], sum)
        })
    }

    /// Some label satisfies `a_i = ⊕_{j≠i} a_j` exactly.
    pub fn is_geodesic(&self, s: &Semigroup) -> bool {
        let k = self.labels.len();
        (0..k).any(|i| {
            let others: Vec<Elem> = (0..k)
                .filter(|&j| j != i)
                .map(|j| self.labels[j])
                .collect();
            s.fold(&others).unwrap() == self.labels[i]
        })
    }

    pub fn names(&self, s: &Semigroup) -> Vec<String> {
        s.names(&self.labels)
    }
}

/// Lexicographically smallest sequence among all rotations of `labels`
/// and of its reversal.
fn canonical_rotation(labels: &[Elem]) -> Vec<Elem> {
    let k = labels.len();
    let mut best: Option<Vec<Elem>> = None;
    let mut consider = |candidate: Vec<Elem>| {
        if best.as_ref().map_or(true, |b| candidate < *b) {
            best = Some(candidate);
        }
    };
    for start in 0..k {
        let rot: Vec<Elem> = (0..k).map(|i| labels[(start + i) % k]).collect();
        consider(rot);
        let refl: Vec<Elem> = (0..k).map(|i| labels[(start + k - i) % k]).collect();
        consider(refl);
    }
    best.unwrap()
}

/// A finite set of forbidden cycles, duplicate-free up to rotation and
/// reflection.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CycleFamily {
    cycles: BTreeSet<LabelledCycle>,
}

impl CycleFamily {
    pub fn new() -> Self {
        CycleFamily::default()
    }

    pub fn from_cycles(cycles: impl IntoIterator<Item = LabelledCycle>) -> Self {
        CycleFamily {
            cycles: cycles.into_iter().collect(),
        }
    }

    pub fn insert(&mut self, c: LabelledCycle) -> bool {
        self.cycles.insert(c)
    }

    pub fn contains(&self, c: &LabelledCycle) -> bool {
        self.cycles.contains(c)
    }

    pub fn iter(&self) -> impl Iterator<Item = &LabelledCycle> {
        self.cycles.iter()
    }

    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    /// Longest member length, or 0 for the empty family.
    pub fn max_len(&self) -> usize {
        self.cycles.iter().map(|c| c.len()).max().unwrap_or(0)
    }
}

/// A forbidden family: either an explicit finite set of cycles or a
/// parametric rule. The parametric `OddPerimeterBelow` family consists of
/// all metric cycles whose integer perimeter is odd and smaller than `p`
/// (labels must parse as positive integers).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum FamilySpec {
    Finite(CycleFamily),
    OddPerimeterBelow { p: u64 },
}

impl FamilySpec {
    pub fn empty() -> Self {
        FamilySpec::Finite(CycleFamily::new())
    }

    pub fn is_empty_family(&self) -> bool {
        matches!(self, FamilySpec::Finite(f) if f.is_empty())
    }

    pub fn contains(&self, s: &Semigroup, c: &LabelledCycle) -> Result<bool> {
        match self {
            FamilySpec::Finite(f) => Ok(f.contains(c)),
            FamilySpec::OddPerimeterBelow { p } => {
                let perim = integer_perimeter(s, c)?;
                Ok(perim % 2 == 1 && perim < *p && !c.is_nonmetric(s) && c.len() >= 3)
            }
        }
    }

    /// Materializes all members with at most `max_len` edges whose labels
    /// come from `allowed` (every element when `allowed` is `None`).
    pub fn enumerate(
        &self,
        s: &Semigroup,
        max_len: usize,
        allowed: Option<&[Elem]>,
    ) -> Result<CycleFamily> {
        match self {
            FamilySpec::Finite(f) => Ok(CycleFamily::from_cycles(
                f.iter()
                    .filter(|c| {
                        c.len() <= max_len
                            && allowed.map_or(true, |a| {
                                c.labels().iter().all(|l| a.contains(l))
                            })
                    })
                    .cloned(),
            )),
            FamilySpec::OddPerimeterBelow { .. } => {
                let alphabet: Vec<Elem> = match allowed {
                    Some(a) => a.to_vec(),
                    None => s.elems().collect(),
                };
                let mut out = CycleFamily::new();
                let mut labels = Vec::new();
                self.enumerate_rec(s, &alphabet, max_len, &mut labels, &mut out)?;
                Ok(out)
            }
        }
    }

    fn enumerate_rec(
        &self,
        s: &Semigroup,
        alphabet: &[Elem],
        max_len: usize,
        labels: &mut Vec<Elem>,
        out: &mut CycleFamily,
    ) -> Result<()> {
        if labels.len() >= 3 {
            let c = LabelledCycle::new(labels.clone())?;
            if c.labels() == labels.as_slice() && self.contains(s, &c)? {
                out.insert(c);
            }
        }
        if labels.len() == max_len {
            return Ok(());
        }
        for &a in alphabet {
            labels.push(a);
            self.enumerate_rec(s, alphabet, max_len, labels, out)?;
            labels.pop();
        }
        Ok(())
    }
}

/// Sum of the labels read as integers (for parametric families over
/// integer-named semigroups).
pub fn integer_perimeter(s: &Semigroup, c: &LabelledCycle) -> Result<u64> {
    c.labels()
        .iter()
        .map(|&l| {
            s.name(l)
                .parse::<u64>()
                .map_err(|_| Error::input("parametric families need integer labels"))
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use proptest::prelude::*;

    #[test]
    fn canonical_form_identifies_rotations_and_reflections() {
        let a = Elem(0);
        let b = Elem(1);
        let c = Elem(2);
        let c1 = LabelledCycle::new(vec![a, b, c]).unwrap();
        let c2 = LabelledCycle::new(vec![b, c, a]).unwrap();
        let c3 = LabelledCycle::new(vec![c, b, a]).unwrap();
        assert_eq!(c1, c2);
        assert_eq!(c1, c3);
    }

    #[test]
    fn two_edge_cycles() {
        let s = fixtures::un(2);
        let one = Elem(0);
        let two = Elem(1);
        assert!(LabelledCycle::new(vec![one, two]).unwrap().is_nonmetric(&s));
        assert!(!LabelledCycle::new(vec![one, one]).unwrap().is_nonmetric(&s));
        assert!(LabelledCycle::new(vec![one]).is_err());
    }

    #[test]
    fn odd_perimeter_family_membership() {
        let z5 = fixtures::zk(5);
        let f = FamilySpec::OddPerimeterBelow { p: 7 };
        let e = |n: &str| z5.elem_by_name(n).unwrap();
        let tri = LabelledCycle::new(vec![e("1"), e("1"), e("1")]).unwrap();
        assert!(f.contains(&z5, &tri).unwrap());
        let even = LabelledCycle::new(vec![e("1"), e("1"), e("2")]).unwrap();
        assert!(!f.contains(&z5, &even).unwrap());
        // Non-metric cycles are excluded even with odd perimeter.
        let bad = LabelledCycle::new(vec![e("1"), e("1"), e("5")]).unwrap();
        assert!(!f.contains(&z5, &bad).unwrap());
    }

    proptest! {
        #[test]
        fn canonical_form_is_a_normal_form(
            labels in proptest::collection::vec(0usize..4, 2..7),
            rot in 0usize..7,
            flip in proptest::bool::ANY,
        ) {
            let elems: Vec<Elem> = labels.iter().map(|&l| Elem(l)).collect();
            let k = elems.len();
            let r = rot % k;
            let mut variant: Vec<Elem> = (0..k).map(|i| elems[(r + i) % k]).collect();
            if flip {
                variant.reverse();
            }
            let c1 = LabelledCycle::new(elems).unwrap();
            let c2 = LabelledCycle::new(variant).unwrap();
            prop_assert_eq!(c1, c2);
        }
    }
}
