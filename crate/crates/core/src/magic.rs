//! The magic semigroup behind Cherlin's primitive 3-constrained metrically
//! homogeneous graphs: construction of the `(δ, M, C)` operation and order,
//! the C/K1/K2 cycle taxonomy, the forbidden family, and triangle-based
//! class membership.

use crate::cycle::{CycleFamily, LabelledCycle};
use crate::error::{Error, Result};
use crate::graph::EdgeLabelledGraph;
use crate::semigroup::{Elem, Semigroup};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MagicParams {
    pub delta: u32,
    pub k1: u32,
    pub k2: u32,
    pub c: u32,
    pub m: u32,
}

#[derive(Debug, Clone, Serialize)]
pub struct RelevanceReport {
    pub relevant: bool,
    pub failed_clauses: Vec<String>,
}

/// Evaluates every relevance clause on `(δ, K1, K2, C)` literally and
/// reports the ones that fail.
pub fn check_relevant(delta: u32, k1: u32, k2: u32, c: u32) -> RelevanceReport {
    let mut failed = Vec::new();
    if delta < 3 {
        failed.push("3 <= delta".to_string());
    }
    if !(1 <= k1 && k1 <= k2 && k2 <= delta) {
        failed.push("1 <= K1 <= K2 <= delta".to_string());
    }
    if !(2 * delta + 2 <= c && c <= 3 * delta + 2) {
        failed.push("2*delta+2 <= C <= 3*delta+2".to_string());
    }
    let case_ii = c <= 2 * delta + k1
        && c == 2 * k1 + 2 * k2 + 1
        && k1 + k2 >= delta
        && k1 + 2 * k2 <= 2 * delta - 1;
    let case_iii = c >= 2 * delta + k1 + 1
        && k1 + 2 * k2 >= 2 * delta - 1
        && 3 * k2 >= 2 * delta
        && (k1 + 2 * k2 != 2 * delta - 1 || c >= 2 * delta + k1 + 2);
    if !case_ii && !case_iii {
        failed.push("neither case II nor case III holds".to_string());
    }
    RelevanceReport {
        relevant: failed.is_empty(),
        failed_clauses: failed,
    }
}

impl MagicParams {
    pub fn new(delta: u32, k1: u32, k2: u32, c: u32, m: u32) -> Result<Self> {
        let p = MagicParams { delta, k1, k2, c, m };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let rep = check_relevant(self.delta, self.k1, self.k2, self.c);
        if !rep.relevant {
            return Err(Error::input(format!(
                "parameters not relevant: {}",
                rep.failed_clauses.join("; ")
            )));
        }
        check_m_range(self.delta, self.m, self.c)?;
        if !(self.k1 <= self.m && self.m <= self.k2) {
            return Err(Error::input("M must satisfy K1 <= M <= K2"));
        }
        Ok(())
    }
}

fn check_m_range(delta: u32, m: u32, c: u32) -> Result<()> {
    if delta < 3 {
        return Err(Error::input("delta must be at least 3"));
    }
    if !(2 * delta + 2 <= c && c <= 3 * delta + 1) {
        return Err(Error::input("C must satisfy 2*delta+2 <= C <= 3*delta+1"));
    }
    let lo = delta.div_ceil(2);
    if !(lo <= m && 2 * m <= c - delta - 1) {
        return Err(Error::input(
            "M must satisfy ceil(delta/2) <= M <= (C-delta-1)/2",
        ));
    }
    Ok(())
}

fn magic_add(delta: u32, m: u32, c: u32, x: u32, y: u32) -> u32 {
    let diff = x.abs_diff(y);
    if diff > m {
        return diff;
    }
    let alt = (x + y).min(c - 1 - x - y);
    debug_assert!(alt >= 1 && alt <= delta || alt >= m);
    if alt < m {
        alt
    } else {
        m
    }
}

/// The order given directly by the operation: `a ⪯ b` iff `a = b` or some
/// `c` has `b = a ⊕ c`.
fn natural_le(delta: u32, m: u32, c: u32, a: u32, b: u32) -> bool {
    a == b || (1..=delta).any(|x| magic_add(delta, m, c, a, x) == b)
}

/// Closed form of the same order. The last clause covers the jumps
/// `a ⪯ a ⊕ (a+b) = b` that exist whenever `M ≤ δ - 2`; the first three
/// clauses alone characterize the order only for `M ≥ δ - 1`.
fn closed_form_le(delta: u32, m: u32, c: u32, a: u32, b: u32) -> bool {
    (a <= b && b <= m)
        || (a >= b && b >= m)
        || (a >= m && (c - 1).saturating_sub(delta + a) <= b && b <= m)
        || (a <= m && m <= b && a + b <= delta)
}

/// Builds the magic semigroup on `{1,…,δ}`. The order is computed both
/// from the operation table and from its closed form; the two must agree.
pub fn magic_semigroup(delta: u32, m: u32, c: u32) -> Result<Semigroup> {
    check_m_range(delta, m, c)?;
    let n = delta as usize;
    let elements: Vec<String> = (1..=delta).map(|x| x.to_string()).collect();
    let mut oplus = vec![vec![0usize; n]; n];
    let mut leq = vec![vec![false; n]; n];
    for a in 1..=delta {
        for b in 1..=delta {
            let sum = magic_add(delta, m, c, a, b);
            if !(1 <= sum && sum <= delta) {
                return Err(Error::Internal(format!(
                    "magic operation leaves the label range: {a} ⊕ {b} = {sum}"
                )));
            }
            oplus[(a - 1) as usize][(b - 1) as usize] = (sum - 1) as usize;
            let nat = natural_le(delta, m, c, a, b);
            let closed = closed_form_le(delta, m, c, a, b);
            if nat != closed {
                return Err(Error::Internal(format!(
                    "natural order and closed form disagree on {a} ⪯ {b}: {nat} vs {closed}"
                )));
            }
            leq[(a - 1) as usize][(b - 1) as usize] = nat;
        }
    }
    Semigroup::new(elements, oplus, leq)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CycleClass {
    /// Perimeter too long for an odd number of long edges. `nonmetric`
    /// records a witness with a single long edge; every cycle without a
    /// completion is of that shape.
    C {
        nonmetric: bool,
    },
    K1,
    K2,
    Metric,
}

/// Classifies a cycle of labels from `{1,…,δ}` by scanning every
/// decomposition of its edges into long (`d`) and short (`x`) roles.
///
/// C-cycles take precedence, then K1, then K2; the K classes apply only to
/// non-C-cycles of odd perimeter.
pub fn classify_cycle(labels: &[u32], p: &MagicParams) -> Result<CycleClass> {
    if labels.len() < 2 {
        return Err(Error::input("a cycle needs at least two edges"));
    }
    if labels.iter().any(|&x| x < 1 || x > p.delta) {
        return Err(Error::input("cycle labels must lie in 1..=delta"));
    }
    let total: u64 = labels.iter().map(|&x| x as u64).sum();
    let mut sorted: Vec<u64> = labels.iter().map(|&x| x as u64).collect();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let prefix: Vec<u64> = sorted
        .iter()
        .scan(0u64, |acc, &x| {
            *acc += x;
            Some(*acc)
        })
        .collect();
    let cm1 = (p.c - 1) as u64;

    // C: some odd-size set D of edges with Σ_D > n(C-1) + Σ_rest where
    // |D| = 2n+1. For each size it suffices to test the largest labels.
    let mut is_c = false;
    let mut nonmetric = false;
    let mut size = 1usize;
    while size <= labels.len() {
        let n = ((size - 1) / 2) as u64;
        let sum_d = prefix[size - 1];
        let sum_x = total - sum_d;
        if sum_d > n * cm1 + sum_x {
            is_c = true;
            if size == 1 {
                nonmetric = true;
            }
        }
        size += 2;
    }
    if is_c {
        return Ok(CycleClass::C { nonmetric });
    }

    if total % 2 == 1 {
        if 2 * (p.k1 as u64) > total {
            return Ok(CycleClass::K1);
        }
        let mut size = 2usize;
        while size <= labels.len() {
            let n = ((size - 2) / 2) as u64;
            let sum_d = prefix[size - 1];
            let sum_x = total - sum_d;
            if sum_d > 2 * (p.k2 as u64) + n * cm1 + sum_x {
                return Ok(CycleClass::K2);
            }
            size += 2;
        }
    }

    // No inequality fires; the cycle is admitted by the class.
    Ok(CycleClass::Metric)
}

/// Is the cycle completable, i.e. does every edge satisfy
/// `a_i ⪯ ⊕_{j≠i} a_j` in the magic order?
pub fn cycle_is_metric(labels: &[u32], p: &MagicParams) -> bool {
    labels.iter().enumerate().all(|(i, &a)| {
        let mut sum = None;
        for (j, &v) in labels.iter().enumerate() {
            if j == i {
                continue;
            }
            sum = Some(match sum {
                None => v,
                Some(acc) => magic_add(p.delta, p.m, p.c, acc, v),
            });
        }
        match sum {
            Some(s) => closed_form_le(p.delta, p.m, p.c, a, s),
            None => false,
        }
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct MagicSumResult {
    /// 1-based label value of the fold.
    pub value: u32,
    /// Which closed-form case applied: 1 (`= M`), 2 (`< M`, even count of
    /// long labels) or 3 (`> M`, odd count).
    pub case: u8,
}

/// Folds short labels `xs` (< M) and long labels `ds` (> M) through the
/// operation table and checks the result against the closed form.
pub fn magic_sum(xs: &[u32], ds: &[u32], p: &MagicParams) -> Result<MagicSumResult> {
    if xs.iter().any(|&x| !(1 <= x && x < p.m)) {
        return Err(Error::input("every x must satisfy 1 <= x < M"));
    }
    if ds.iter().any(|&d| !(p.m < d && d <= p.delta)) {
        return Err(Error::input("every d must satisfy M < d <= delta"));
    }
    if xs.is_empty() && ds.is_empty() {
        return Err(Error::input("need at least one label"));
    }
    let all: Vec<u32> = xs.iter().chain(ds.iter()).copied().collect();
    let mut fold = all[0];
    for &v in &all[1..] {
        fold = magic_add(p.delta, p.m, p.c, fold, v);
    }

    let n = ds.len() as i64;
    let sum_x: i64 = xs.iter().map(|&x| x as i64).sum();
    let sum_d: i64 = ds.iter().map(|&d| d as i64).sum();
    let cm1 = (p.c - 1) as i64;
    let case = if fold == p.m {
        1
    } else if fold < p.m {
        if n % 2 != 0 {
            return Err(Error::Internal(format!(
                "fold {fold} < M with an odd number of long labels"
            )));
        }
        let expect = (n / 2) * cm1 + sum_x - sum_d;
        if expect != fold as i64 {
            return Err(Error::Internal(format!(
                "closed form gives {expect}, table fold gives {fold}"
            )));
        }
        2
    } else {
        if n % 2 != 1 {
            return Err(Error::Internal(format!(
                "fold {fold} > M with an even number of long labels"
            )));
        }
        let expect = sum_d - ((n - 1) / 2) * cm1 - sum_x;
        if expect != fold as i64 {
            return Err(Error::Internal(format!(
                "closed form gives {expect}, table fold gives {fold}"
            )));
        }
        3
    };
    Ok(MagicSumResult { value: fold, case })
}

/// All metric C-cycles plus all K1- and K2-cycles with at most `max_len`
/// edges, canonicalized. Also reports the largest member length, which
/// stabilizes once `max_len` passes the finite family's true bound.
pub fn build_forbidden_family(
    p: &MagicParams,
    max_len: usize,
) -> Result<(CycleFamily, Option<usize>)> {
    p.validate()?;
    if max_len < 3 {
        return Err(Error::input("max_len must be at least 3"));
    }
    let mut family = CycleFamily::new();
    let mut longest = None;
    let mut labels = vec![1u32; 0];
    // Enumerate label sequences in canonical (necklace) form only.
    fn rec(
        labels: &mut Vec<u32>,
        len: usize,
        p: &MagicParams,
        family: &mut CycleFamily,
        longest: &mut Option<usize>,
    ) -> Result<()> {
        if labels.len() == len {
            let elems: Vec<Elem> = labels
                .iter()
                .map(|&x| Elem((x - 1) as usize))
                .collect();
            let cycle = LabelledCycle::new(elems.clone())?;
            if cycle.labels() != elems.as_slice() {
                return Ok(()); // not in canonical rotation/reflection
            }
            let qualifies = match classify_cycle(labels, p)? {
                CycleClass::C { .. } => cycle_is_metric(labels, p),
                CycleClass::K1 | CycleClass::K2 => true,
                _ => false,
            };
            if qualifies {
                *longest = Some((*longest).unwrap_or(0).max(len));
                family.insert(cycle);
            }
            return Ok(());
        }
        for x in 1..=p.delta {
            labels.push(x);
            rec(labels, len, p, family, longest)?;
            labels.pop();
        }
        Ok(())
    }
    for len in 3..=max_len {
        rec(&mut labels, len, p, &mut family, &mut longest)?;
    }
    Ok((family, longest))
}

/// Triangle-based membership: a complete graph belongs to the class iff
/// no triangle is non-metric or a K1/K2/C-triangle.
pub fn membership(g: &EdgeLabelledGraph, p: &MagicParams) -> Result<bool> {
    if !g.is_complete() {
        return Err(Error::input("membership needs a complete graph"));
    }
    let s = g.semigroup();
    let n = g.vertex_count();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let a = g.label(i, j).unwrap();
                let b = g.label(j, k).unwrap();
                let c = g.label(i, k).unwrap();
                let labels: Vec<u32> = [a, b, c]
                    .iter()
                    .map(|&e| s.name(e).parse::<u32>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| Error::input("graph labels must be integers 1..=delta"))?;
                match classify_cycle(&labels, p)? {
                    CycleClass::C { .. } | CycleClass::K1 | CycleClass::K2 => return Ok(false),
                    _ => {}
                }
            }
        }
    }
    Ok(true)
}
