//! Enumerative reference implementations.
//!
//! These deliberately avoid the shortest-path machinery: completions are
//! found by assigning labels to missing pairs one by one under the
//! triangle constraints. The test suites use them as independent oracles
//! for the completion algorithm, and the instance generators piggyback on
//! the same search with randomized value order.

use crate::error::{Error, Result};
use crate::graph::EdgeLabelledGraph;
use crate::semigroup::{Elem, Semigroup};
use rand::Rng;

/// For every label pair `(a, b)` the bitmask of labels `c` such that the
/// triangle `(a, b, c)` satisfies the triangle inequality all ways round.
/// Limited to semigroups with at most 64 elements.
pub struct TriangleTable {
    n: usize,
    allowed: Vec<u64>,
}

impl TriangleTable {
    pub fn new(s: &Semigroup) -> Result<Self> {
        let n = s.len();
        if n > 64 {
            return Err(Error::ResourceLimit {
                what: "triangle table element cap".into(),
                limit: 64,
                reached: n,
            });
        }
        let mut allowed = vec![0u64; n * n];
        for a in s.elems() {
            for b in s.elems() {
                let mut mask = 0u64;
                for c in s.elems() {
                    let ok = s.le(c, s.add(a, b))
                        && s.le(a, s.add(c, b))
                        && s.le(b, s.add(a, c));
                    if ok {
                        mask |= 1 << c.0;
                    }
                }
                allowed[a.0 * n + b.0] = mask;
            }
        }
        Ok(TriangleTable { n, allowed })
    }

    #[inline]
    pub fn allowed(&self, a: Elem, b: Elem) -> u64 {
        self.allowed[a.0 * self.n + b.0]
    }

    pub fn full_mask(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }
}

struct Search<'a> {
    n: usize,
    labels: Vec<Option<Elem>>,
    unknown: Vec<(usize, usize)>,
    tt: &'a TriangleTable,
}

impl<'a> Search<'a> {
    fn new(g: &EdgeLabelledGraph, tt: &'a TriangleTable) -> Search<'a> {
        let n = g.vertex_count();
        let mut labels = vec![None; n * n];
        for (u, v, l) in g.edges() {
            labels[u * n + v] = Some(l);
            labels[v * n + u] = Some(l);
        }
        let unknown: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|&(u, v)| labels[u * n + v].is_none())
            .collect();
        Search {
            n,
            labels,
            unknown,
            tt,
        }
    }

    fn initial_domains(&self, extra: &[((usize, usize), u64)]) -> Option<Vec<u64>> {
        let mut domains = vec![self.tt.full_mask(); self.unknown.len()];
        for (i, &(u, v)) in self.unknown.iter().enumerate() {
            for w in 0..self.n {
                if w == u || w == v {
                    continue;
                }
                if let (Some(a), Some(b)) =
                    (self.labels[u * self.n + w], self.labels[v * self.n + w])
                {
                    domains[i] &= self.tt.allowed(a, b);
                }
            }
            for &((eu, ev), mask) in extra {
                if (eu, ev) == (u, v) || (ev, eu) == (u, v) {
                    domains[i] &= mask;
                }
            }
            if domains[i] == 0 {
                return None;
            }
        }
        Some(domains)
    }

    /// Depth-first search over the unknown pairs. `order` permutes the
    /// candidate labels of each domain before trying them.
    fn solve(
        &mut self,
        domains: &[u64],
        assigned: &mut Vec<((usize, usize), Elem)>,
        order: &mut dyn FnMut(u64) -> Vec<u32>,
    ) -> bool {
        // Most constrained pair first.
        let next = (0..self.unknown.len())
            .filter(|&i| {
                let (u, v) = self.unknown[i];
                self.labels[u * self.n + v].is_none()
            })
            .min_by_key(|&i| domains[i].count_ones());
        let Some(i) = next else {
            return true;
        };
        let (u, v) = self.unknown[i];
        for bit in order(domains[i]) {
            let x = Elem(bit as usize);
            let mut new_domains = domains.to_vec();
            let mut ok = true;
            for (j, &(a, b)) in self.unknown.iter().enumerate() {
                if j == i || self.labels[a * self.n + b].is_some() {
                    continue;
                }
                // Tighten pairs sharing a vertex with (u, v).
                let shared = if a == u || b == u {
                    let other = if a == u { b } else { a };
                    self.labels[v * self.n + other].map(|d| (x, d))
                } else if a == v || b == v {
                    let other = if a == v { b } else { a };
                    self.labels[u * self.n + other].map(|d| (x, d))
                } else {
                    None
                };
                if let Some((p, q)) = shared {
                    new_domains[j] &= self.tt.allowed(p, q);
                    if new_domains[j] == 0 {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                continue;
            }
            self.labels[u * self.n + v] = Some(x);
            self.labels[v * self.n + u] = Some(x);
            new_domains[i] = 1 << bit;
            assigned.push(((u, v), x));
            if self.solve(&new_domains, assigned, order) {
                return true;
            }
            assigned.pop();
            self.labels[u * self.n + v] = None;
            self.labels[v * self.n + u] = None;
        }
        false
    }
}

fn ascending(mask: u64) -> Vec<u32> {
    let mut bits = Vec::with_capacity(mask.count_ones() as usize);
    let mut m = mask;
    while m != 0 {
        let b = m.trailing_zeros();
        bits.push(b);
        m &= m - 1;
    }
    bits
}

/// Finds one metric completion honouring the extra per-pair label masks,
/// or proves none exists. Returns the assignment of the missing pairs.
pub fn find_completion(
    g: &EdgeLabelledGraph,
    tt: &TriangleTable,
    extra: &[((usize, usize), u64)],
) -> Option<Vec<((usize, usize), Elem)>> {
    if !known_triangles_ok(g, tt) {
        return None;
    }
    let mut search = Search::new(g, tt);
    let domains = search.initial_domains(extra)?;
    let mut assigned = Vec::new();
    if search.solve(&domains, &mut assigned, &mut ascending) {
        Some(assigned)
    } else {
        None
    }
}

/// Every fully labelled triangle of the input must already be metric.
fn known_triangles_ok(g: &EdgeLabelledGraph, tt: &TriangleTable) -> bool {
    let n = g.vertex_count();
    for u in 0..n {
        for v in u + 1..n {
            for w in v + 1..n {
                if let (Some(a), Some(b), Some(c)) =
                    (g.label(u, v), g.label(v, w), g.label(u, w))
                {
                    if tt.allowed(a, b) & (1 << c.0) == 0 {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Does any metric completion exist?
pub fn has_completion(g: &EdgeLabelledGraph, tt: &TriangleTable) -> bool {
    find_completion(g, tt, &[]).is_some()
}

/// Is there a completion assigning to `pair` a label from `mask`?
pub fn completion_with_pair_in(
    g: &EdgeLabelledGraph,
    tt: &TriangleTable,
    pair: (usize, usize),
    mask: u64,
) -> bool {
    if g.label(pair.0, pair.1).is_some() {
        return g
            .label(pair.0, pair.1)
            .is_some_and(|l| mask & (1 << l.0) != 0);
    }
    find_completion(g, tt, &[(pair, mask)]).is_some()
}

/// Materializes a completion as a graph.
pub fn completed_graph(
    g: &EdgeLabelledGraph,
    assignment: &[((usize, usize), Elem)],
) -> EdgeLabelledGraph {
    let mut out = g.clone();
    for &((u, v), x) in assignment {
        out.add_edge(u, v, x).expect("assignment extends the graph");
    }
    out
}

/// Finds a metric completion with a uniformly shuffled value order,
/// deterministic in the RNG seed.
pub fn random_completion<R: Rng>(
    g: &EdgeLabelledGraph,
    tt: &TriangleTable,
    rng: &mut R,
) -> Option<EdgeLabelledGraph> {
    if !known_triangles_ok(g, tt) {
        return None;
    }
    let mut search = Search::new(g, tt);
    let domains = search.initial_domains(&[])?;
    let mut assigned = Vec::new();
    let mut order = |mask: u64| {
        let mut bits = ascending(mask);
        for i in (1..bits.len()).rev() {
            let j = rng.gen_range(0..=i);
            bits.swap(i, j);
        }
        bits
    };
    if search.solve(&domains, &mut assigned, &mut order) {
        Some(completed_graph(g, &assigned))
    } else {
        None
    }
}

/// Exhaustive enumeration of labelled graphs on `n` vertices up to
/// vertex permutation: cell vectors over `0..alphabet` (cells are the
/// vertex pairs in the order (0,1),(0,2),(1,2),(0,3),…), restricted to
/// the lexicographic minimum of each permutation orbit. Subtrees that can
/// no longer reach a canonical leaf are pruned early.
pub struct IsoScan {
    pub n: usize,
    pub alphabet: usize,
    pub cells: Vec<(usize, usize)>,
    /// For each vertex permutation the induced cell permutation.
    cell_perms: Vec<Vec<usize>>,
}

impl IsoScan {
    pub fn new(n: usize, alphabet: usize) -> Self {
        let mut cells = Vec::new();
        for k in 1..n {
            for i in 0..k {
                cells.push((i, k));
            }
        }
        let cell_index = |u: usize, v: usize| -> usize {
            let (a, b) = (u.min(v), u.max(v));
            cells.iter().position(|&c| c == (a, b)).unwrap()
        };
        let mut perms: Vec<Vec<usize>> = Vec::new();
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
        rec(0, &mut cur, &mut perms);
        let identity: Vec<usize> = (0..n).collect();
        let cell_perms = perms
            .iter()
            .filter(|p| **p != identity)
            .map(|p| {
                cells
                    .iter()
                    .map(|&(u, v)| cell_index(p[u], p[v]))
                    .collect()
            })
            .collect();
        IsoScan {
            n,
            alphabet,
            cells,
            cell_perms,
        }
    }

    /// Is some permuted image lexicographically smaller, judged from the
    /// first `len` assigned cells only? Inconclusive comparisons keep the
    /// prefix alive.
    fn image_smaller(&self, vec: &[usize], len: usize) -> bool {
        'perm: for cp in &self.cell_perms {
            for p in 0..len {
                let q = cp[p];
                if q >= len {
                    continue 'perm;
                }
                if vec[q] < vec[p] {
                    return true;
                }
                if vec[q] > vec[p] {
                    continue 'perm;
                }
            }
        }
        false
    }

    /// Canonical-viable prefixes of the given depth, for sharding.
    pub fn prefixes(&self, depth: usize) -> Vec<Vec<usize>> {
        let depth = depth.min(self.cells.len());
        let mut out = Vec::new();
        let mut vec = vec![0usize; depth];
        fn rec(scan: &IsoScan, vec: &mut Vec<usize>, d: usize, depth: usize, out: &mut Vec<Vec<usize>>) {
            if d == depth {
                out.push(vec.clone());
                return;
            }
            for v in 0..scan.alphabet {
                vec[d] = v;
                if !scan.image_smaller(vec, d + 1) {
                    rec(scan, vec, d + 1, depth, out);
                }
            }
        }
        rec(self, &mut vec, 0, depth, &mut out);
        out
    }

    /// Runs `f` on every canonical full assignment extending `prefix`.
    pub fn for_each_leaf(&self, prefix: &[usize], f: &mut dyn FnMut(&[usize])) {
        let total = self.cells.len();
        let mut vec = vec![0usize; total];
        vec[..prefix.len()].copy_from_slice(prefix);
        if self.image_smaller(&vec, prefix.len()) {
            return;
        }
        fn rec(scan: &IsoScan, vec: &mut Vec<usize>, d: usize, f: &mut dyn FnMut(&[usize])) {
            if d == scan.cells.len() {
                f(vec);
                return;
            }
            for v in 0..scan.alphabet {
                vec[d] = v;
                if !scan.image_smaller(vec, d + 1) {
                    rec(scan, vec, d + 1, f);
                }
            }
        }
        if prefix.len() == total {
            f(&vec);
            return;
        }
        rec(self, &mut vec, prefix.len(), f);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use std::sync::Arc;

    #[test]
    fn iso_scan_counts_plain_graphs() {
        // Unlabelled-graph counts up to isomorphism: 4, 11, 34 for
        // 3, 4, 5 vertices.
        for (n, expect) in [(3usize, 4usize), (4, 11), (5, 34)] {
            let scan = IsoScan::new(n, 2);
            let mut count = 0usize;
            for prefix in scan.prefixes(1) {
                scan.for_each_leaf(&prefix, &mut |_| count += 1);
            }
            assert_eq!(count, expect);
        }
    }

    #[test]
    fn oracle_agrees_with_triangle_facts() {
        let z5 = Arc::new(fixtures::zk(5));
        let tt = TriangleTable::new(&z5).unwrap();
        let mut g = EdgeLabelledGraph::with_size(Arc::clone(&z5), 3);
        let e = |n: &str| z5.elem_by_name(n).unwrap();
        g.add_edge(0, 1, e("5")).unwrap();
        g.add_edge(1, 2, e("1")).unwrap();
        g.add_edge(0, 2, e("1")).unwrap();
        assert!(!has_completion(&g, &tt));

        let mut h = EdgeLabelledGraph::with_size(Arc::clone(&z5), 3);
        h.add_edge(0, 1, e("1")).unwrap();
        h.add_edge(1, 2, e("2")).unwrap();
        assert!(has_completion(&h, &tt));
        let sol = find_completion(&h, &tt, &[]).unwrap();
        let done = completed_graph(&h, &sol);
        assert!(done.is_metric_space());
    }

    #[test]
    fn random_completion_is_metric_and_seeded() {
        use rand::SeedableRng;
        let s = Arc::new(fixtures::sauer());
        let tt = TriangleTable::new(&s).unwrap();
        let g = EdgeLabelledGraph::with_size(Arc::clone(&s), 5);
        let mut rng1 = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut rng2 = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let c1 = random_completion(&g, &tt, &mut rng1).unwrap();
        let c2 = random_completion(&g, &tt, &mut rng2).unwrap();
        assert!(c1.is_metric_space());
        assert_eq!(c1, c2);
    }
}
