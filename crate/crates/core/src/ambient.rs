//! Generated subsemigroups of (possibly infinite) ambient semigroups.
//!
//! Infinite ambients are supported through explicit parametric families
//! with truncation or saturation; the closure of a finite seed set under
//! `⊕` is extracted as a standalone finite [`Semigroup`].

use crate::error::{Error, Result};
use crate::semigroup::{Elem, Semigroup};
use std::collections::BTreeSet;

/// An oracle for a (possibly infinite) partially ordered commutative
/// semigroup: enough structure to close a finite set under `⊕` and read
/// off the induced order.
pub trait Ambient {
    type Point: Clone + Ord;
    fn add(&self, a: &Self::Point, b: &Self::Point) -> Self::Point;
    fn le(&self, a: &Self::Point, b: &Self::Point) -> bool;
    fn name(&self, a: &Self::Point) -> String;
}

/// `{1, 2, …}` with addition saturating at `cap` and the usual order.
pub struct CappedAdd {
    pub cap: u64,
}

impl Ambient for CappedAdd {
    type Point = u64;
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b).min(self.cap)
    }
    fn le(&self, a: &u64, b: &u64) -> bool {
        a <= b
    }
    fn name(&self, a: &u64) -> String {
        a.to_string()
    }
}

/// `ℕ^d` with coordinate-wise addition saturating at `cap` and the
/// coordinate-wise order.
pub struct TruncatedNat {
    pub dims: usize,
    pub cap: u64,
}

impl Ambient for TruncatedNat {
    type Point = Vec<u64>;
    fn add(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x + y).min(self.cap))
            .collect()
    }
    fn le(&self, a: &Vec<u64>, b: &Vec<u64>) -> bool {
        a.iter().zip(b).all(|(x, y)| x <= y)
    }
    fn name(&self, a: &Vec<u64>) -> String {
        let coords: Vec<String> = a.iter().map(|x| x.to_string()).collect();
        format!("({})", coords.join(","))
    }
}

/// A finite list of positive reals `S` with `a ⊕ b = sup{c ∈ S : c ≤ a+b}`.
/// Points are indices into the sorted level list.
pub struct SauerLevels {
    pub levels: Vec<f64>,
}

impl SauerLevels {
    pub fn new(mut levels: Vec<f64>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::input("level list must be nonempty"));
        }
        levels.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(SauerLevels { levels })
    }
}

impl Ambient for SauerLevels {
    type Point = usize;
    fn add(&self, a: &usize, b: &usize) -> usize {
        let sum = self.levels[*a] + self.levels[*b];
        // a ≤ a + b, so at least index a qualifies.
        (0..self.levels.len())
            .rev()
            .find(|&i| self.levels[i] <= sum)
            .unwrap_or(*a.min(b))
    }
    fn le(&self, a: &usize, b: &usize) -> bool {
        a <= b
    }
    fn name(&self, a: &usize) -> String {
        let v = self.levels[*a];
        if v.fract() == 0.0 {
            format!("{}", v as i64)
        } else {
            format!("{v}")
        }
    }
}

/// Positive integers under least common multiple, ordered by divisibility.
pub struct DivisorLcm;

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl Ambient for DivisorLcm {
    type Point = u64;
    fn add(&self, a: &u64, b: &u64) -> u64 {
        a / gcd(*a, *b) * b
    }
    fn le(&self, a: &u64, b: &u64) -> bool {
        b % a == 0
    }
    fn name(&self, a: &u64) -> String {
        a.to_string()
    }
}

/// A finite table semigroup viewed as an ambient for its own subsemigroups.
pub struct FiniteAmbient<'a>(pub &'a Semigroup);

impl Ambient for FiniteAmbient<'_> {
    type Point = Elem;
    fn add(&self, a: &Elem, b: &Elem) -> Elem {
        self.0.add(*a, *b)
    }
    fn le(&self, a: &Elem, b: &Elem) -> bool {
        self.0.le(*a, *b)
    }
    fn name(&self, a: &Elem) -> String {
        self.0.name(*a).to_string()
    }
}

/// Closes `seeds` under `⊕` and packages the result, with the induced
/// order, as a standalone [`Semigroup`]. Elements are sorted by the
/// ambient's canonical point order.
pub fn generated_subsemigroup<A: Ambient>(
    ambient: &A,
    seeds: &[A::Point],
    cap: usize,
) -> Result<Semigroup> {
    if seeds.is_empty() {
        return Err(Error::input("seed set must be nonempty"));
    }
    let mut closure: BTreeSet<A::Point> = seeds.iter().cloned().collect();
    let mut frontier: Vec<A::Point> = closure.iter().cloned().collect();
    while let Some(x) = frontier.pop() {
        let known: Vec<A::Point> = closure.iter().cloned().collect();
        for y in &known {
            let z = ambient.add(&x, y);
            if closure.insert(z.clone()) {
                if closure.len() > cap {
                    return Err(Error::ResourceLimit {
                        what: "generated subsemigroup closure".into(),
                        limit: cap,
                        reached: closure.len(),
                    });
                }
                frontier.push(z);
            }
        }
    }
    let points: Vec<A::Point> = closure.into_iter().collect();
    let index = |p: &A::Point| points.binary_search(p).unwrap();
    let n = points.len();
    let mut oplus = vec![vec![0usize; n]; n];
    let mut leq = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            oplus[i][j] = index(&ambient.add(&points[i], &points[j]));
            leq[i][j] = ambient.le(&points[i], &points[j]);
        }
    }
    let elements = points.iter().map(|p| ambient.name(p)).collect();
    Semigroup::new(elements, oplus, leq)
}

/// Builds the full finite semigroup of a parametric ambient from an
/// explicit point list (used by the fixtures).
pub fn from_points<A: Ambient>(ambient: &A, points: Vec<A::Point>) -> Result<Semigroup> {
    generated_subsemigroup(ambient, &points, points.len().max(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn z5_generated_by_two() {
        let z5 = fixtures::zk(5);
        let two = z5.elem_by_name("2").unwrap();
        let sub = generated_subsemigroup(&FiniteAmbient(&z5), &[two], 10).unwrap();
        assert_eq!(sub.elements, vec!["2", "4", "5"]);
    }

    #[test]
    fn z5_generated_by_absorbing() {
        let z5 = fixtures::zk(5);
        let five = z5.elem_by_name("5").unwrap();
        let sub = generated_subsemigroup(&FiniteAmbient(&z5), &[five], 10).unwrap();
        assert_eq!(sub.elements, vec!["5"]);
    }

    #[test]
    fn sauer_generated_by_three() {
        let s = fixtures::sauer();
        let three = s.elem_by_name("3").unwrap();
        let sub = generated_subsemigroup(&FiniteAmbient(&s), &[three], 10).unwrap();
        assert_eq!(sub.elements, vec!["3", "6", "7"]);
    }

    #[test]
    fn cap_overflow_reports_partial_size() {
        let z9 = fixtures::zk(9);
        let one = z9.elem_by_name("1").unwrap();
        let err = generated_subsemigroup(&FiniteAmbient(&z9), &[one], 3).unwrap_err();
        match err {
            crate::error::Error::ResourceLimit { reached, .. } => assert!(reached > 3),
            other => panic!("unexpected error {other:?}"),
        }
    }
}
