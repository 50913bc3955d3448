//! Built-in semigroup fixtures.
//!
//! * `U{n}` — the ultrametric `({1,…,n}, max, ≤)`.
//! * `Z{k}` — `({1,…,k}, +, ≤)` with addition capped at `k`.
//! * `SAUER` — `{1,3,4,6,7}` under `a ⊕ b = sup{c : c ≤ a+b}`.
//! * `DT{k}` — `ℕ³` with coordinate-wise addition saturating at `k`.
//! * `DIV{n}` — divisors of `n` under lcm, ordered by divisibility.
//! * `MAG-δ-M-C` — the magic semigroup (see [`crate::magic`]).

use crate::ambient;
use crate::error::{Error, Result};
use crate::semigroup::Semigroup;

/// The ultrametric `({1,…,n}, max, ≤)`.
pub fn un(n: u64) -> Semigroup {
    let elements: Vec<String> = (1..=n).map(|x| x.to_string()).collect();
    let size = n as usize;
    let oplus = (0..size)
        .map(|i| (0..size).map(|j| i.max(j)).collect())
        .collect();
    let leq = (0..size)
        .map(|i| (0..size).map(|j| i <= j).collect())
        .collect();
    Semigroup::new(elements, oplus, leq).expect("ultrametric fixture is valid")
}

/// `({1,…,k}, +, ≤)` with addition capped at `k`.
pub fn zk(k: u64) -> Semigroup {
    let points: Vec<u64> = (1..=k).collect();
    ambient::from_points(&ambient::CappedAdd { cap: k }, points)
        .expect("capped addition fixture is valid")
}

/// `{1,3,4,6,7}` with `a ⊕ b = sup{c ∈ S : c ≤ a + b}`.
pub fn sauer() -> Semigroup {
    let levels = ambient::SauerLevels::new(vec![1.0, 3.0, 4.0, 6.0, 7.0]).unwrap();
    ambient::from_points(&levels, (0..5).collect()).expect("sauer fixture is valid")
}

/// `ℕ³` truncated by saturating every coordinate at `cap`.
pub fn dt(cap: u64) -> Semigroup {
    let ambient = ambient::TruncatedNat { dims: 3, cap };
    let mut points = Vec::new();
    for a in 0..=cap {
        for b in 0..=cap {
            for c in 0..=cap {
                points.push(vec![a, b, c]);
            }
        }
    }
    ambient::from_points(&ambient, points).expect("truncated ℕ³ fixture is valid")
}

/// Divisors of `n` under least common multiple and divisibility.
pub fn div(n: u64) -> Semigroup {
    let points: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
    ambient::from_points(&ambient::DivisorLcm, points).expect("divisor fixture is valid")
}

/// The magic semigroup `MAG-δ-M-C`; see [`crate::magic::magic_semigroup`].
pub fn magic_semigroup(delta: u32, m: u32, c: u32) -> Result<Semigroup> {
    crate::magic::magic_semigroup(delta, m, c)
}

/// Resolves a fixture by name: `U3`, `Z5`, `SAUER`, `DT2`, `DIV12`,
/// `MAG-3-2-8`.
pub fn by_name(name: &str) -> Result<Semigroup> {
    let upper = name.to_ascii_uppercase();
    let parse = |s: &str| -> Result<u64> {
        s.parse()
            .map_err(|_| Error::input(format!("bad fixture parameter in {name:?}")))
    };
    if upper == "SAUER" {
        return Ok(sauer());
    }
    if let Some(rest) = upper.strip_prefix("MAG-") {
        let parts: Vec<&str> = rest.split('-').collect();
        if parts.len() != 3 {
            return Err(Error::input(format!(
                "magic fixture must be MAG-delta-M-C, got {name:?}"
            )));
        }
        return magic_semigroup(
            parse(parts[0])? as u32,
            parse(parts[1])? as u32,
            parse(parts[2])? as u32,
        );
    }
    if let Some(rest) = upper.strip_prefix("DIV") {
        return Ok(div(parse(rest)?));
    }
    if let Some(rest) = upper.strip_prefix("DT") {
        return Ok(dt(parse(rest)?));
    }
    if let Some(rest) = upper.strip_prefix("U") {
        return Ok(un(parse(rest)?));
    }
    if let Some(rest) = upper.strip_prefix("Z") {
        return Ok(zk(parse(rest)?));
    }
    Err(Error::input(format!("unknown fixture {name:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_fixtures_satisfy_axioms() {
        for s in [un(3), zk(5), sauer(), dt(2), div(12)] {
            assert!(s.verify().is_empty(), "fixture violates axioms");
        }
        assert!(magic_semigroup(3, 2, 8).unwrap().verify().is_empty());
    }

    #[test]
    fn sauer_table_spot_checks() {
        let s = sauer();
        let e = |n: &str| s.elem_by_name(n).unwrap();
        assert_eq!(s.name(s.add(e("1"), e("3"))), "4");
        assert_eq!(s.name(s.add(e("3"), e("3"))), "6");
        assert_eq!(s.name(s.add(e("3"), e("4"))), "7");
        assert_eq!(s.name(s.add(e("6"), e("7"))), "7");
        assert_eq!(s.name(s.add(e("1"), e("1"))), "1");
    }

    #[test]
    fn div12_is_the_divisor_lattice() {
        let s = div(12);
        assert_eq!(s.elements, vec!["1", "2", "3", "4", "6", "12"]);
        let e = |n: &str| s.elem_by_name(n).unwrap();
        assert_eq!(s.name(s.add(e("4"), e("6"))), "12");
        assert!(s.le(e("2"), e("4")));
        assert!(!s.le(e("4"), e("6")));
    }

    #[test]
    fn by_name_resolves() {
        assert!(by_name("U3").is_ok());
        assert!(by_name("z5").is_ok());
        assert!(by_name("SAUER").is_ok());
        assert!(by_name("DT2").is_ok());
        assert!(by_name("DIV12").is_ok());
        assert!(by_name("MAG-3-2-8").is_ok());
        assert!(by_name("XYZ").is_err());
    }
}
