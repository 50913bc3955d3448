//! Census of triangle-constrained classes of complete edge-labelled
//! graphs: canonical forms under label permutation, bounded strong
//! amalgamation and primitivity filters, semigroup fitting, and a
//! brute-force partition-arrow check.

use crate::blocks::is_archimedean;
use crate::cycle::{CycleFamily, FamilySpec, LabelledCycle};
use crate::error::{Error, Result};
use crate::families::{check_meet_sync, check_omissible, find_disobedient, BoundedCheckConfig};
use crate::graph::EdgeLabelledGraph;
use crate::par;
use crate::semigroup::{Elem, Semigroup};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// All multisets of three labels out of `n`, in lexicographic order.
pub fn triple_list(n: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for a in 0..n {
        for b in a..n {
            for c in b..n {
                out.push([a, b, c]);
            }
        }
    }
    out
}

/// A triangle-constrained class: the set of allowed triangles, encoded as
/// a bitmask over [`triple_list`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct TriangleClass {
    pub n_labels: usize,
    pub mask: u64,
}

/// Precomputed tables for one label count.
pub struct ClassTables {
    pub n: usize,
    pub triples: Vec<[usize; 3]>,
    /// Permutations of the labels, each as a bit-relocation table.
    perm_maps: Vec<Vec<usize>>,
    /// For each unordered label pair index `p*n+q` (p ≤ q) the list of
    /// (third label, triple bit).
    pair_thirds: Vec<Vec<(usize, usize)>>,
    /// Triples violating closure of each label subset.
    subset_viol: Vec<u64>,
    /// Triples using only labels of each subset? bit per subset for the
    /// "label used" filter.
    label_bits: Vec<u64>,
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    fn rec(k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == cur.len() {
            out.push(cur.clone());
            return;
        }
        for i in k..cur.len() {
            cur.swap(k, i);
            rec(k + 1, cur, out);
            cur.swap(k, i);
        }
    }
    rec(0, &mut cur, &mut out);
    out.sort();
    out
}

impl ClassTables {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > 5 {
            return Err(Error::input("label count must be between 1 and 5"));
        }
        let triples = triple_list(n);
        let index = |t: [usize; 3]| -> usize {
            let mut s = t;
            s.sort_unstable();
            triples.iter().position(|&x| x == s).unwrap()
        };
        let perm_maps = permutations(n)
            .into_iter()
            .map(|p| {
                triples
                    .iter()
                    .map(|&[a, b, c]| index([p[a], p[b], p[c]]))
                    .collect()
            })
            .collect();
        let mut pair_thirds = vec![Vec::new(); n * n];
        for p in 0..n {
            for q in p..n {
                let mut thirds = Vec::new();
                for r in 0..n {
                    thirds.push((r, index([p, q, r])));
                }
                pair_thirds[p * n + q] = thirds.clone();
                pair_thirds[q * n + p] = thirds;
            }
        }
        let mut subset_viol = vec![0u64; 1 << n];
        for s in 0..(1usize << n) {
            let mut viol = 0u64;
            for (i, &[a, b, c]) in triples.iter().enumerate() {
                let inside = [a, b, c]
                    .iter()
                    .filter(|&&x| s & (1 << x) != 0)
                    .count();
                let outside = 3 - inside;
                if inside >= 2 && outside >= 1 {
                    viol |= 1 << i;
                }
            }
            subset_viol[s] = viol;
        }
        let mut label_bits = vec![0u64; n];
        for (i, &[a, b, c]) in triples.iter().enumerate() {
            for x in [a, b, c] {
                label_bits[x] |= 1 << i;
            }
        }
        Ok(ClassTables {
            n,
            triples,
            perm_maps,
            pair_thirds,
            subset_viol,
            label_bits,
        })
    }

    pub fn bit_count(&self) -> usize {
        self.triples.len()
    }

    fn apply_perm(&self, mask: u64, perm: &[usize]) -> u64 {
        let mut out = 0u64;
        let mut m = mask;
        while m != 0 {
            let b = m.trailing_zeros() as usize;
            out |= 1 << perm[b];
            m &= m - 1;
        }
        out
    }

    /// Lexicographic minimum of the orbit under label permutations.
    pub fn canonical(&self, mask: u64) -> u64 {
        self.perm_maps
            .iter()
            .map(|p| self.apply_perm(mask, p))
            .min()
            .unwrap()
    }

    pub fn is_canonical(&self, mask: u64) -> bool {
        self.perm_maps
            .iter()
            .all(|p| self.apply_perm(mask, p) >= mask)
    }

    /// Bitmask over labels of the admissible third sides for a pair.
    fn allowed(&self, mask: u64, p: usize, q: usize) -> u32 {
        let mut out = 0u32;
        for &(r, bit) in &self.pair_thirds[p * self.n + q] {
            if mask & (1 << bit) != 0 {
                out |= 1 << r;
            }
        }
        out
    }

    pub fn every_label_used(&self, mask: u64) -> bool {
        self.label_bits.iter().all(|&lb| mask & lb != 0)
    }

    pub fn every_pair_admissible(&self, mask: u64) -> bool {
        let n = self.n;
        for p in 0..n {
            for q in p..n {
                if self.allowed(mask, p, q) == 0 {
                    return false;
                }
            }
        }
        true
    }

    /// Primitive iff no nonempty proper label subset is triangle-closed.
    /// Returns the witness subset otherwise.
    pub fn primitivity_witness(&self, mask: u64) -> Option<Vec<usize>> {
        for s in 1..((1usize << self.n) - 1) {
            if mask & self.subset_viol[s] == 0 {
                // The subset must actually occur to define an equivalence.
                return Some((0..self.n).filter(|&x| s & (1 << x) != 0).collect());
            }
        }
        None
    }

    /// A quick necessary condition for two-point amalgamation over
    /// one-edge bases.
    fn two_point_quick(&self, mask: u64) -> bool {
        let n = self.n;
        for p in 0..n {
            for q in 0..n {
                for r in 0..n {
                    for s in 0..n {
                        // Realizable over a one-edge base?
                        if self.allowed(mask, p, r) & self.allowed(mask, q, s) == 0 {
                            continue;
                        }
                        if self.allowed(mask, p, q) & self.allowed(mask, r, s) == 0 {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SaVerdict {
    PassUpToBound,
    Fail,
}

/// Bounded strong-amalgamation check: over every realizable set of
/// distance-pair constraints (one base vertex per pair, bases up to the
/// cap), some label for the new edge satisfies every constraint.
///
/// The constraint set of a base depends only on the set of pairs present,
/// and any realizable pair set is realizable with one vertex per pair, so
/// scanning pair sets up to the cap is exact for those base sizes.
pub fn check_strong_amalgamation_bounded(
    tables: &ClassTables,
    mask: u64,
    base_cap: usize,
) -> (SaVerdict, Option<Vec<(usize, usize)>>) {
    let n = tables.n;
    let mut pair_types: Vec<(usize, usize)> = Vec::new();
    for p in 0..n {
        for q in p..n {
            pair_types.push((p, q));
        }
    }
    // Depth-first search over pair sets with pruning: extend a realizable
    // base by one vertex at a time and keep the running intersection.
    struct Ctx<'a> {
        tables: &'a ClassTables,
        mask: u64,
        cap: usize,
        pair_types: Vec<(usize, usize)>,
    }
    fn realizable(ctx: &Ctx, chosen: &[(usize, usize)]) -> bool {
        // The new-edge constraint of a base vertex is symmetric in its
        // two tower distances, but realizing the base is not: each vertex
        // may put either distance on the x side. Try every orientation.
        let k = chosen.len();
        if k <= 1 {
            return true;
        }
        let mut oriented = chosen.to_vec();
        fn orient(ctx: &Ctx, oriented: &mut Vec<(usize, usize)>, at: usize) -> bool {
            if at == oriented.len() {
                let k = oriented.len();
                let mut base = vec![vec![usize::MAX; k]; k];
                return assign(ctx, oriented, &mut base, 0, 1);
            }
            if orient(ctx, oriented, at + 1) {
                return true;
            }
            let (p, q) = oriented[at];
            if p != q {
                oriented[at] = (q, p);
                let ok = orient(ctx, oriented, at + 1);
                oriented[at] = (p, q);
                if ok {
                    return true;
                }
            }
            false
        }
        fn assign(
            ctx: &Ctx,
            chosen: &[(usize, usize)],
            base: &mut Vec<Vec<usize>>,
            i: usize,
            j: usize,
        ) -> bool {
            let k = chosen.len();
            if i >= k || (i == k - 1 && j >= k) {
                return true;
            }
            if j >= k {
                return assign(ctx, chosen, base, i + 1, i + 2);
            }
            let (p1, q1) = chosen[i];
            let (p2, q2) = chosen[j];
            let mut cand = ctx.tables.allowed(ctx.mask, p1, p2)
                & ctx.tables.allowed(ctx.mask, q1, q2);
            // Base triangles with earlier vertices.
            while cand != 0 {
                let e = cand.trailing_zeros() as usize;
                cand &= cand - 1;
                let ok = (0..i).all(|w| {
                    if base[w][i] == usize::MAX || base[w][j] == usize::MAX {
                        return true;
                    }
                    let t = {
                        let mut t = [base[w][i], base[w][j], e];
                        t.sort_unstable();
                        t
                    };
                    let bit = ctx
                        .tables
                        .triples
                        .iter()
                        .position(|&x| x == t)
                        .unwrap();
                    ctx.mask & (1 << bit) != 0
                });
                if !ok {
                    continue;
                }
                base[i][j] = e;
                base[j][i] = e;
                if assign(ctx, chosen, base, i, j + 1) {
                    return true;
                }
                base[i][j] = usize::MAX;
                base[j][i] = usize::MAX;
            }
            false
        }
        orient(ctx, &mut oriented, 0)
    }
    fn search(
        ctx: &Ctx,
        start: usize,
        chosen: &mut Vec<(usize, usize)>,
        inter: u32,
    ) -> Option<Vec<(usize, usize)>> {
        if inter == 0 {
            // The intersection died; a realizable base with these pairs
            // is a counterexample.
            if realizable(ctx, chosen) {
                return Some(chosen.clone());
            }
            return None;
        }
        if chosen.len() == ctx.cap {
            return None;
        }
        for idx in start..ctx.pair_types.len() {
            let (p, q) = ctx.pair_types[idx];
            let next = inter & ctx.tables.allowed(ctx.mask, p, q);
            if next == inter && !chosen.is_empty() {
                continue; // adding this pair changes nothing
            }
            chosen.push((p, q));
            if let Some(w) = search(ctx, idx, chosen, next) {
                return Some(w);
            }
            chosen.pop();
        }
        None
    }
    let ctx = Ctx {
        tables,
        mask,
        cap: base_cap,
        pair_types,
    };
    let full = (1u32 << n) - 1;
    let mut chosen = Vec::new();
    match search(&ctx, 0, &mut chosen, full) {
        Some(w) => (SaVerdict::Fail, Some(w)),
        None => (SaVerdict::PassUpToBound, None),
    }
}

/// Every two-point amalgamation admits every label: the allowed-third set
/// of each pair of labels is full.
pub fn is_free_like(tables: &ClassTables, mask: u64) -> bool {
    let n = tables.n;
    let full = (1u32 << n) - 1;
    for p in 0..n {
        for q in p..n {
            if tables.allowed(mask, p, q) != full {
                return false;
            }
        }
    }
    true
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassRecord {
    pub triangles: Vec<[usize; 3]>,
    pub mask: u64,
    pub strong: bool,
    pub primitive: bool,
    pub free_like: bool,
    pub all_labels_used: bool,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CensusOptions {
    pub base_cap: Option<usize>,
    pub require_strong: bool,
    pub require_primitive: bool,
    pub require_nonfree: bool,
    pub require_all_labels: bool,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions {
            base_cap: None,
            require_strong: true,
            require_primitive: true,
            require_nonfree: true,
            require_all_labels: true,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Checkpoint {
    pub n_labels: usize,
    pub options: CensusOptions,
    pub cursor: u64,
    pub scanned: u64,
    pub records: Vec<ClassRecord>,
}

/// Scans one contiguous window of triangle-set masks and returns the
/// canonical classes passing the filters.
pub fn census_window(
    tables: &ClassTables,
    opts: &CensusOptions,
    from: u64,
    to: u64,
) -> Vec<ClassRecord> {
    let base_cap = opts.base_cap.unwrap_or(tables.n * tables.n);
    let chunk = 1u64 << 16;
    let chunks: Vec<(u64, u64)> = {
        let mut v = Vec::new();
        let mut lo = from;
        while lo < to {
            let hi = (lo + chunk).min(to);
            v.push((lo, hi));
            lo = hi;
        }
        v
    };
    let results: Vec<Vec<ClassRecord>> = par::map(&chunks, |&(lo, hi)| {
        let mut found = Vec::new();
        for mask in lo..hi {
            if mask == 0 {
                continue;
            }
            let all_used = tables.every_label_used(mask);
            if opts.require_all_labels && !all_used {
                continue;
            }
            if opts.require_strong && !tables.every_pair_admissible(mask) {
                continue;
            }
            let primitive = tables.primitivity_witness(mask).is_none();
            if opts.require_primitive && !primitive {
                continue;
            }
            if !tables.is_canonical(mask) {
                continue;
            }
            if opts.require_strong && !tables.two_point_quick(mask) {
                continue;
            }
            let (sa, _) = check_strong_amalgamation_bounded(tables, mask, base_cap);
            let strong = sa == SaVerdict::PassUpToBound;
            if opts.require_strong && !strong {
                continue;
            }
            let free_like = is_free_like(tables, mask);
            if opts.require_nonfree && free_like {
                continue;
            }
            found.push(ClassRecord {
                triangles: mask_triples(tables, mask),
                mask,
                strong,
                primitive,
                free_like,
                all_labels_used: all_used,
            });
        }
        found
    });
    results.into_iter().flatten().collect()
}

pub fn mask_triples(tables: &ClassTables, mask: u64) -> Vec<[usize; 3]> {
    tables
        .triples
        .iter()
        .enumerate()
        .filter(|&(i, _)| mask & (1 << i) != 0)
        .map(|(_, &t)| t)
        .collect()
}

/// Full census for one label count. Records come out in mask order, so
/// the catalog is deterministic and independent of the thread count.
pub fn enumerate_triangle_classes(n: usize, opts: &CensusOptions) -> Result<Vec<ClassRecord>> {
    let tables = ClassTables::new(n)?;
    let total = 1u64 << tables.bit_count();
    Ok(census_window(&tables, opts, 0, total))
}

/// Triangle class of a semigroup-with-family pair: the metric triangles
/// minus the forbidden ones.
pub fn class_of_semigroup(s: &Semigroup, family: &CycleFamily) -> Result<TriangleClass> {
    let n = s.len();
    if n > 5 {
        return Err(Error::input("triangle classes support at most 5 labels"));
    }
    let triples = triple_list(n);
    let mut mask = 0u64;
    for (i, &[a, b, c]) in triples.iter().enumerate() {
        let (ea, eb, ec) = (Elem(a), Elem(b), Elem(c));
        let metric = s.le(ec, s.add(ea, eb)) && s.le(ea, s.add(ec, eb)) && s.le(eb, s.add(ea, ec));
        if !metric {
            continue;
        }
        let cycle = LabelledCycle::new(vec![ea, eb, ec])?;
        if family.contains(&cycle) {
            continue;
        }
        mask |= 1 << i;
    }
    Ok(TriangleClass { n_labels: n, mask })
}

#[derive(Debug, Clone, Serialize)]
pub struct SemigroupFit {
    pub semigroup: Semigroup,
    pub family: Vec<Vec<String>>,
}

/// Exhaustive search for archimedean partially ordered commutative
/// semigroups on the label set that reproduce the class's allowed
/// triangles as "metric minus a forbidden triangle family" with the
/// family passing the bounded omissibility, disobedience and meet
/// synchronization checks.
pub fn fit_semigroup(
    n: usize,
    mask: u64,
    cfg: &BoundedCheckConfig,
) -> Result<Vec<SemigroupFit>> {
    if n > 4 {
        return Err(Error::input("exhaustive fitting supports at most 4 labels"));
    }
    let triples = triple_list(n);
    let orders = all_partial_orders(n);
    let tables = commutative_associative_tables(n);
    let jobs: Vec<(Vec<Vec<usize>>, Vec<Vec<bool>>)> = tables
        .iter()
        .flat_map(|t| orders.iter().map(move |o| (t.clone(), o.clone())))
        .collect();
    let results: Vec<Option<SemigroupFit>> = par::map(&jobs, |(table, order)| {
        fit_one(n, mask, &triples, table, order, cfg).ok().flatten()
    });
    Ok(results.into_iter().flatten().collect())
}

fn fit_one(
    n: usize,
    mask: u64,
    triples: &[[usize; 3]],
    table: &[Vec<usize>],
    order: &[Vec<bool>],
    cfg: &BoundedCheckConfig,
) -> Result<Option<SemigroupFit>> {
    let elements: Vec<String> = (0..n).map(|i| format!("L{i}")).collect();
    let Ok(s) = Semigroup::new(elements, table.to_vec(), order.to_vec()) else {
        return Ok(None);
    };
    if is_archimedean(&s).is_err() {
        return Ok(None);
    }
    // Metric triangles must cover the class; the complement is the family.
    let mut forbidden = CycleFamily::new();
    for (i, &[a, b, c]) in triples.iter().enumerate() {
        let (ea, eb, ec) = (Elem(a), Elem(b), Elem(c));
        let metric = s.le(ec, s.add(ea, eb)) && s.le(ea, s.add(ec, eb)) && s.le(eb, s.add(ea, ec));
        let wanted = mask & (1 << i) != 0;
        match (metric, wanted) {
            (false, true) => return Ok(None),
            (true, false) => {
                forbidden.insert(LabelledCycle::new(vec![ea, eb, ec])?);
            }
            _ => {}
        }
    }
    let arc = Arc::new(s);
    let spec = FamilySpec::Finite(forbidden.clone());
    if !check_omissible(&arc, &spec, cfg)?.passed() {
        return Ok(None);
    }
    if !find_disobedient(&arc, &spec, cfg)?.is_empty() {
        return Ok(None);
    }
    if !check_meet_sync(&arc, &spec, cfg)?.passed() {
        return Ok(None);
    }
    let family: Vec<Vec<String>> = forbidden.iter().map(|c| c.names(&arc)).collect();
    Ok(Some(SemigroupFit {
        semigroup: Arc::try_unwrap(arc).unwrap_or_else(|a| (*a).clone()),
        family,
    }))
}

fn all_partial_orders(n: usize) -> Vec<Vec<Vec<bool>>> {
    // Reflexive, antisymmetric, transitive boolean matrices.
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| i != j)
        .collect();
    let mut out = Vec::new();
    let total = 1usize << pairs.len();
    'mask: for m in 0..total {
        let mut leq = vec![vec![false; n]; n];
        for i in 0..n {
            leq[i][i] = true;
        }
        for (k, &(i, j)) in pairs.iter().enumerate() {
            if m & (1 << k) != 0 {
                leq[i][j] = true;
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && leq[i][j] && leq[j][i] {
                    continue 'mask;
                }
                for k in 0..n {
                    if leq[i][j] && leq[j][k] && !leq[i][k] {
                        continue 'mask;
                    }
                }
            }
        }
        out.push(leq);
    }
    out
}

fn commutative_associative_tables(n: usize) -> Vec<Vec<Vec<usize>>> {
    // Fill the upper triangle cell by cell; associativity is checked on
    // fully determined triples as soon as possible.
    let cells: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i..n).map(move |j| (i, j)))
        .collect();
    let mut out = Vec::new();
    let mut table = vec![vec![usize::MAX; n]; n];
    fn assoc_ok(table: &[Vec<usize>], n: usize) -> bool {
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let ab = table[a][b];
                    let bc = table[b][c];
                    if ab == usize::MAX || bc == usize::MAX {
                        continue;
                    }
                    let left = table[ab][c];
                    let right = table[a][bc];
                    if left != usize::MAX && right != usize::MAX && left != right {
                        return false;
                    }
                }
            }
        }
        true
    }
    fn rec(
        cells: &[(usize, usize)],
        idx: usize,
        table: &mut Vec<Vec<usize>>,
        n: usize,
        out: &mut Vec<Vec<Vec<usize>>>,
    ) {
        if idx == cells.len() {
            out.push(table.clone());
            return;
        }
        let (i, j) = cells[idx];
        for v in 0..n {
            table[i][j] = v;
            table[j][i] = v;
            if assoc_ok(table, n) {
                rec(cells, idx + 1, table, n, out);
            }
        }
        table[i][j] = usize::MAX;
        table[j][i] = usize::MAX;
    }
    rec(&cells, 0, &mut table, n, &mut out);
    out
}

#[derive(Debug, Clone, Serialize)]
pub enum ArrowVerdict {
    Holds,
    Fails { colouring: Vec<usize> },
    Unknown,
}

/// All injective label-preserving maps of `a` into `c`, in lexicographic
/// order of the image tuples.
pub fn embeddings(a: &EdgeLabelledGraph, c: &EdgeLabelledGraph) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut map = Vec::new();
    let mut used = vec![false; c.vertex_count()];
    fn rec(
        a: &EdgeLabelledGraph,
        c: &EdgeLabelledGraph,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let pos = map.len();
        if pos == a.vertex_count() {
            out.push(map.clone());
            return;
        }
        'target: for t in 0..c.vertex_count() {
            if used[t] {
                continue;
            }
            for (i, &m) in map.iter().enumerate() {
                if a.label(i, pos) != c.label(m, t) {
                    continue 'target;
                }
            }
            map.push(t);
            used[t] = true;
            rec(a, c, map, used, out);
            map.pop();
            used[t] = false;
        }
    }
    rec(a, c, &mut map, &mut used, &mut out);
    out
}

/// Does every `k`-colouring of the embeddings of `a` into `c` admit a
/// monochromatic copy of `b`? Exhaustive below the budget; otherwise an
/// adversarial colouring built from a nontrivial automorphism of `a` can
/// still refute the arrow.
pub fn brute_force_arrow(
    c: &EdgeLabelledGraph,
    b: &EdgeLabelledGraph,
    a: &EdgeLabelledGraph,
    k: usize,
    budget: usize,
) -> Result<ArrowVerdict> {
    if k == 0 {
        return Err(Error::input("at least one colour is needed"));
    }
    let emb_ac = embeddings(a, c);
    let emb_bc = embeddings(b, c);
    let emb_ab = embeddings(a, b);
    if emb_bc.is_empty() {
        // No copy of b at all: any colouring refutes the arrow.
        return Ok(ArrowVerdict::Fails {
            colouring: vec![0; emb_ac.len()],
        });
    }
    if k == 1 {
        return Ok(ArrowVerdict::Holds);
    }
    // Copies of a inside each copy of b, as indices into emb_ac.
    let index_of = |img: &Vec<usize>| emb_ac.iter().position(|e| e == img);
    let copies: Vec<Vec<usize>> = emb_bc
        .iter()
        .map(|g| {
            emb_ab
                .iter()
                .map(|h| {
                    let img: Vec<usize> = h.iter().map(|&x| g[x]).collect();
                    index_of(&img).expect("composite embedding exists")
                })
                .collect()
        })
        .collect();

    let mono_exists = |colouring: &[usize]| {
        copies.iter().any(|copy| {
            let mut cols = copy.iter().map(|&i| colouring[i]);
            match cols.next() {
                None => true,
                Some(first) => cols.all(|c| c == first),
            }
        })
    };

    // Adversarial attempt: split the orbit of a nontrivial automorphism.
    let auts = a.automorphisms(8)?;
    if let Some(sigma) = auts.iter().find(|p| **p != (0..a.vertex_count()).collect::<Vec<_>>()) {
        let mut colouring = vec![usize::MAX; emb_ac.len()];
        for (i, e) in emb_ac.iter().enumerate() {
            if colouring[i] != usize::MAX {
                continue;
            }
            colouring[i] = 0;
            let mut cur: Vec<usize> = sigma.iter().map(|&x| e[x]).collect();
            let mut colour = 1usize;
            while let Some(j) = index_of(&cur) {
                if colouring[j] != usize::MAX {
                    break;
                }
                colouring[j] = colour % k;
                colour += 1;
                cur = sigma.iter().map(|&x| cur[x]).collect();
            }
        }
        for c in colouring.iter_mut() {
            if *c == usize::MAX {
                *c = 0;
            }
        }
        if !mono_exists(&colouring) {
            return Ok(ArrowVerdict::Fails { colouring });
        }
    }

    if emb_ac.len() > budget {
        return Err(Error::ResourceLimit {
            what: "embedding count for the exhaustive arrow check".into(),
            limit: budget,
            reached: emb_ac.len(),
        });
    }
    // Exhaustive scan of all colourings.
    let total = (k as u128).pow(emb_ac.len() as u32);
    let mut colouring = vec![0usize; emb_ac.len()];
    for step in 0..total {
        let mut x = step;
        for c in colouring.iter_mut() {
            *c = (x % k as u128) as usize;
            x /= k as u128;
        }
        if !mono_exists(&colouring) {
            return Ok(ArrowVerdict::Fails { colouring });
        }
    }
    Ok(ArrowVerdict::Holds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    #[test]
    fn single_label_census() {
        let opts = CensusOptions {
            require_nonfree: false,
            ..CensusOptions::default()
        };
        let records = enumerate_triangle_classes(1, &opts).unwrap();
        assert_eq!(records.len(), 1);
        assert!(records[0].strong);
        assert!(records[0].primitive);
    }

    #[test]
    fn all_triangles_class_is_primitive_and_free() {
        let tables = ClassTables::new(2).unwrap();
        let full = (1u64 << tables.bit_count()) - 1;
        assert!(tables.primitivity_witness(full).is_none());
        assert!(is_free_like(&tables, full));
        let (sa, _) = check_strong_amalgamation_bounded(&tables, full, 4);
        assert_eq!(sa, SaVerdict::PassUpToBound);
    }

    #[test]
    fn equivalence_pattern_is_imprimitive_but_strong() {
        // Two labels, mixed triangle (a,a,b) forbidden: label a becomes an
        // equivalence. The class still amalgamates.
        let tables = ClassTables::new(2).unwrap();
        // triples: [0,0,0], [0,0,1], [0,1,1], [1,1,1]
        let mask: u64 = 0b1101;
        let witness = tables.primitivity_witness(mask).unwrap();
        assert_eq!(witness, vec![0]);
        let (sa, _) = check_strong_amalgamation_bounded(&tables, mask, 4);
        assert_eq!(sa, SaVerdict::PassUpToBound);
    }

    #[test]
    fn missing_pair_label_fails_amalgamation() {
        // Forbid every triangle containing the pair (0,1): the pair scan
        // rejects the class outright.
        let tables = ClassTables::new(2).unwrap();
        let mask: u64 = 0b1001; // only (0,0,0) and (1,1,1) allowed
        assert!(!tables.every_pair_admissible(mask));
    }

    #[test]
    fn canonicalization_is_a_normal_form() {
        for n in 1..=3 {
            let tables = ClassTables::new(n).unwrap();
            let total = 1u64 << tables.bit_count();
            for mask in 0..total {
                let canon = tables.canonical(mask);
                assert_eq!(tables.canonical(canon), canon);
                assert!(tables.is_canonical(canon));
            }
        }
    }

    #[test]
    fn magic_class_is_primitive() {
        let p = crate::magic::MagicParams::new(3, 1, 3, 8, 2).unwrap();
        let s = crate::magic::magic_semigroup(3, 2, 8).unwrap();
        let (family, _) = crate::magic::build_forbidden_family(&p, 3).unwrap();
        let class = class_of_semigroup(&s, &family).unwrap();
        let tables = ClassTables::new(3).unwrap();
        assert!(tables.primitivity_witness(class.mask).is_none());
    }

    #[test]
    fn arrow_fails_for_an_edge_with_two_colours() {
        let s = Arc::new(crate::fixtures::un(1));
        let one = Elem(0);
        let mut edge = EdgeLabelledGraph::with_size(Arc::clone(&s), 2);
        edge.add_edge(0, 1, one).unwrap();
        let mut c = EdgeLabelledGraph::with_size(Arc::clone(&s), 4);
        for u in 0..4 {
            for v in u + 1..4 {
                c.add_edge(u, v, one).unwrap();
            }
        }
        let verdict = brute_force_arrow(&c, &edge, &edge, 2, 1 << 16).unwrap();
        assert!(matches!(verdict, ArrowVerdict::Fails { .. }));
    }

    #[test]
    fn arrow_trivial_cases() {
        let s = Arc::new(crate::fixtures::un(1));
        let one = Elem(0);
        let vertex = EdgeLabelledGraph::with_size(Arc::clone(&s), 1);
        let mut c = EdgeLabelledGraph::with_size(Arc::clone(&s), 3);
        for u in 0..3 {
            for v in u + 1..3 {
                c.add_edge(u, v, one).unwrap();
            }
        }
        // One colour always holds.
        assert!(matches!(
            brute_force_arrow(&c, &c, &vertex, 1, 1 << 16).unwrap(),
            ArrowVerdict::Holds
        ));
        // The empty structure has a single embedding.
        let empty = EdgeLabelledGraph::with_size(Arc::clone(&s), 0);
        assert!(matches!(
            brute_force_arrow(&c, &vertex, &empty, 2, 1 << 16).unwrap(),
            ArrowVerdict::Holds
        ));
    }

    #[test]
    fn fit_recovers_capped_addition_for_the_two_label_path_class() {
        // All triangles allowed on 2 labels: capped addition fits with an
        // empty family.
        let cfg = BoundedCheckConfig {
            max_cycle_len: 4,
            max_path_len: 3,
            max_family_size: 2,
            max_space_vertices: 4,
        };
        let fits = fit_semigroup(2, 0b1111, &cfg).unwrap();
        assert!(!fits.is_empty());
        assert!(fits.iter().any(|f| f.family.is_empty()));
    }
}
