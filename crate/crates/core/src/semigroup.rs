//! Finite partially ordered commutative semigroups.
//!
//! Elements are referenced by index into a canonical ordered list of names;
//! the operation and the order are index-based tables so that structures
//! serialize bit-exactly.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Index of an element in a [`Semigroup`]'s element list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Elem(pub usize);

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A finite commutative semigroup with a compatible partial order.
///
/// Invariants (checked by [`Semigroup::new`]):
/// * `oplus` is commutative and associative,
/// * `leq` is a reflexive partial order,
/// * `a ⪯ a ⊕ b` for all `a, b`,
/// * `b ⪯ c` implies `a ⊕ b ⪯ a ⊕ c`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Semigroup {
    pub elements: Vec<String>,
    pub oplus: Vec<Vec<usize>>,
    pub leq: Vec<Vec<bool>>,
}

/// One violated axiom together with a concrete witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomViolation {
    pub axiom: String,
    pub witness: Vec<String>,
}

impl Semigroup {
    /// Builds a semigroup after verifying all axioms.
    pub fn new(elements: Vec<String>, oplus: Vec<Vec<usize>>, leq: Vec<Vec<bool>>) -> Result<Self> {
        let s = Semigroup {
            elements,
            oplus,
            leq,
        };
        s.check_dimensions()?;
        let report = s.verify();
        if let Some(v) = report.first() {
            return Err(Error::input(format!(
                "not a valid partially ordered commutative semigroup: {} (witness {:?})",
                v.axiom, v.witness
            )));
        }
        Ok(s)
    }

    /// Builds a semigroup without running the axiom checks.
    ///
    /// Used for tables that are valid by construction (fixtures) and for
    /// assembling the inputs of [`Semigroup::verify`] itself.
    pub fn new_unchecked(
        elements: Vec<String>,
        oplus: Vec<Vec<usize>>,
        leq: Vec<Vec<bool>>,
    ) -> Self {
        Semigroup {
            elements,
            oplus,
            leq,
        }
    }

    fn check_dimensions(&self) -> Result<()> {
        let n = self.elements.len();
        if n == 0 {
            return Err(Error::input("semigroup must have at least one element"));
        }
        if self.oplus.len() != n || self.oplus.iter().any(|r| r.len() != n) {
            return Err(Error::input("operation table is not square over the element list"));
        }
        if self.leq.len() != n || self.leq.iter().any(|r| r.len() != n) {
            return Err(Error::input("order matrix is not square over the element list"));
        }
        if let Some(&bad) = self.oplus.iter().flatten().find(|&&v| v >= n) {
            return Err(Error::input(format!(
                "operation table entry {bad} out of range (only {n} elements)"
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elems(&self) -> impl Iterator<Item = Elem> {
        (0..self.elements.len()).map(Elem)
    }

    pub fn name(&self, a: Elem) -> &str {
        &self.elements[a.0]
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        Elem(self.oplus[a.0][b.0])
    }

    #[inline]
    pub fn le(&self, a: Elem, b: Elem) -> bool {
        self.leq[a.0][b.0]
    }

    #[inline]
    pub fn lt(&self, a: Elem, b: Elem) -> bool {
        a != b && self.leq[a.0][b.0]
    }

    pub fn incomparable(&self, a: Elem, b: Elem) -> bool {
        !self.le(a, b) && !self.le(b, a)
    }

    /// `⊕`-fold of a nonempty sequence.
    pub fn fold(&self, xs: &[Elem]) -> Result<Elem> {
        let (&first, rest) = xs
            .split_first()
            .ok_or_else(|| Error::input("cannot fold an empty sequence (no neutral element)"))?;
        Ok(rest.iter().fold(first, |acc, &x| self.add(acc, x)))
    }

    /// The n-fold sum `a ⊕ a ⊕ … ⊕ a`. `n` must be at least 1.
    pub fn scalar_multiple(&self, a: Elem, n: usize) -> Result<Elem> {
        if n == 0 {
            return Err(Error::input(
                "scalar multiple needs n >= 1: the semigroup has no neutral element",
            ));
        }
        let mut acc = a;
        for _ in 1..n {
            acc = self.add(acc, a);
        }
        Ok(acc)
    }

    /// Checks every axiom and reports each violation with a witness.
    /// An empty report means the tables form a valid semigroup.
    pub fn verify(&self) -> Vec<AxiomViolation> {
        let mut out = Vec::new();
        let n = self.len();
        let name = |i: usize| self.elements[i].clone();
        for a in 0..n {
            for b in 0..n {
                if self.oplus[a][b] != self.oplus[b][a] {
                    out.push(AxiomViolation {
                        axiom: "commutativity".into(),
                        witness: vec![name(a), name(b)],
                    });
                }
            }
        }
        'assoc: for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let left = self.oplus[self.oplus[a][b]][c];
                    let right = self.oplus[a][self.oplus[b][c]];
                    if left != right {
                        out.push(AxiomViolation {
                            axiom: "associativity".into(),
                            witness: vec![name(a), name(b), name(c)],
                        });
                        break 'assoc;
                    }
                }
            }
        }
        for a in 0..n {
            if !self.leq[a][a] {
                out.push(AxiomViolation {
                    axiom: "order reflexivity".into(),
                    witness: vec![name(a)],
                });
            }
        }
        for a in 0..n {
            for b in 0..n {
                if a != b && self.leq[a][b] && self.leq[b][a] {
                    out.push(AxiomViolation {
                        axiom: "order antisymmetry".into(),
                        witness: vec![name(a), name(b)],
                    });
                }
            }
        }
        'trans: for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if self.leq[a][b] && self.leq[b][c] && !self.leq[a][c] {
                        out.push(AxiomViolation {
                            axiom: "order transitivity".into(),
                            witness: vec![name(a), name(b), name(c)],
                        });
                        break 'trans;
                    }
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                if !self.leq[a][self.oplus[a][b]] {
                    out.push(AxiomViolation {
                        axiom: "a ⪯ a⊕b".into(),
                        witness: vec![name(a), name(b)],
                    });
                }
            }
        }
        'mono: for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if self.leq[b][c] && !self.leq[self.oplus[a][b]][self.oplus[a][c]] {
                        out.push(AxiomViolation {
                            axiom: "monotonicity of ⊕".into(),
                            witness: vec![name(a), name(b), name(c)],
                        });
                        break 'mono;
                    }
                }
            }
        }
        out
    }

    /// Lower bounds of a nonempty set of elements.
    pub fn lower_bounds(&self, xs: &[Elem]) -> Vec<Elem> {
        self.elems()
            .filter(|&c| xs.iter().all(|&x| self.le(c, x)))
            .collect()
    }

    /// The infimum of a nonempty set: the unique maximum of the set of
    /// lower bounds, or `None` when no such unique maximum exists.
    pub fn infimum(&self, xs: &[Elem]) -> Option<Elem> {
        let lb = self.lower_bounds(xs);
        lb.iter()
            .copied()
            .find(|&m| lb.iter().all(|&x| self.le(x, m)))
    }

    /// The supremum of a nonempty set: the unique minimum of the set of
    /// upper bounds, or `None`.
    pub fn supremum(&self, xs: &[Elem]) -> Option<Elem> {
        let ub: Vec<Elem> = self
            .elems()
            .filter(|&c| xs.iter().all(|&x| self.le(x, c)))
            .collect();
        ub.iter()
            .copied()
            .find(|&m| ub.iter().all(|&x| self.le(m, x)))
    }

    /// The `⪯`-maximum element, if one exists.
    pub fn maximum_element(&self) -> Option<Elem> {
        self.elems()
            .find(|&m| self.elems().all(|x| self.le(x, m)))
    }

    /// Elements that are neither a sum `b ⊕ c` nor a proper infimum
    /// `inf(b, c)` with `a ∉ {b, c}`.
    pub fn irreducible_elements(&self) -> Vec<Elem> {
        self.elems()
            .filter(|&a| {
                let sum = self
                    .elems()
                    .any(|b| self.elems().any(|c| self.add(b, c) == a));
                if sum {
                    return false;
                }
                let inf = self.elems().any(|b| {
                    self.elems().any(|c| {
                        a != b && a != c && self.infimum(&[b, c]) == Some(a)
                    })
                });
                !inf
            })
            .collect()
    }

    /// Resolves an element name to its index.
    pub fn elem_by_name(&self, name: &str) -> Result<Elem> {
        self.elements
            .iter()
            .position(|e| e == name)
            .map(Elem)
            .ok_or_else(|| Error::input(format!("unknown element {name:?}")))
    }

    pub fn names(&self, xs: &[Elem]) -> Vec<String> {
        xs.iter().map(|&x| self.name(x).to_string()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn sauer_is_valid() {
        let s = fixtures::sauer();
        assert!(s.verify().is_empty());
    }

    #[test]
    fn one_element_semigroup_is_valid() {
        let s = Semigroup::new(vec!["a".into()], vec![vec![0]], vec![vec![true]]).unwrap();
        assert!(s.verify().is_empty());
    }

    #[test]
    fn mutated_z5_reports_associativity_with_witness() {
        let mut z5 = fixtures::zk(5);
        // 1 ⊕ 2 := 5 (indices 0 ⊕ 1 := 4)
        z5.oplus[0][1] = 4;
        z5.oplus[1][0] = 4;
        let report = z5.verify();
        assert!(report.iter().any(|v| v.axiom == "associativity"));
        let v = report.iter().find(|v| v.axiom == "associativity").unwrap();
        assert_eq!(v.witness.len(), 3);
    }

    #[test]
    fn scalar_multiples() {
        let z5 = fixtures::zk(5);
        let one = z5.elem_by_name("1").unwrap();
        assert_eq!(z5.name(z5.scalar_multiple(one, 3).unwrap()), "3");
        assert_eq!(z5.scalar_multiple(one, 1).unwrap(), one);
        assert!(z5.scalar_multiple(one, 0).is_err());
        let u3 = fixtures::un(3);
        let two = u3.elem_by_name("2").unwrap();
        assert_eq!(u3.scalar_multiple(two, 7).unwrap(), two);
    }

    #[test]
    fn irreducibles() {
        // Four-element semigroup {a,b,c,M} with x⊕y = M and x ⪯ M.
        let names: Vec<String> = ["a", "b", "c", "M"].iter().map(|s| s.to_string()).collect();
        let oplus = vec![vec![3; 4]; 4];
        let mut leq = vec![vec![false; 4]; 4];
        for i in 0..4 {
            leq[i][i] = true;
            leq[i][3] = true;
        }
        let s = Semigroup::new(names, oplus, leq).unwrap();
        let irr = s.irreducible_elements();
        assert_eq!(s.names(&irr), vec!["a", "b", "c"]);

        let z5 = fixtures::zk(5);
        assert_eq!(z5.names(&z5.irreducible_elements()), vec!["1"]);
    }

    #[test]
    fn monoid_like_all_reducible() {
        // 0 acts as a neutral element, so a = a ⊕ 0 for every a.
        let names: Vec<String> = ["0", "1"].iter().map(|s| s.to_string()).collect();
        let oplus = vec![vec![0, 1], vec![1, 1]];
        let leq = vec![vec![true, true], vec![false, true]];
        let s = Semigroup::new(names, oplus, leq).unwrap();
        assert!(s.irreducible_elements().is_empty());
    }

    #[test]
    fn infimum_of_incomparables() {
        let dt2 = fixtures::dt(2);
        let a = dt2.elem_by_name("(1,0,0)").unwrap();
        let b = dt2.elem_by_name("(0,1,0)").unwrap();
        let inf = dt2.infimum(&[a, b]).unwrap();
        assert_eq!(dt2.name(inf), "(0,0,0)");
    }
}
