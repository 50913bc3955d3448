//! Edge-labelled graphs over a semigroup: walks, shortest-path completion,
//! non-metric witnesses, forbidden-family checks, amalgamation,
//! automorphisms and the canonical independence relation.

use crate::cycle::{FamilySpec, LabelledCycle};
use crate::error::{Error, Result};
use crate::par;
use crate::semigroup::{Elem, Semigroup};
use serde::Serialize;
use std::sync::Arc;

/// Search budgets for the exponential path and cycle enumerations.
/// Exceeding a budget is a hard error, never a silent approximation.
#[derive(Debug, Clone, Copy)]
pub struct PathBudget {
    pub max_vertices: usize,
    pub max_paths_per_pair: usize,
}

impl Default for PathBudget {
    fn default() -> Self {
        PathBudget {
            max_vertices: 12,
            max_paths_per_pair: 200_000,
        }
    }
}

/// A finite graph with a partial symmetric edge labelling into a semigroup.
/// No self-loops; at most one label per pair.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeLabelledGraph {
    semigroup: Arc<Semigroup>,
    vertices: Vec<String>,
    labels: Vec<Option<Elem>>,
}

/// A cycle located inside a graph: vertex indices plus the edge labels
/// between consecutive vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CycleInGraph {
    pub vertices: Vec<usize>,
    pub labels: Vec<Elem>,
}

impl CycleInGraph {
    /// Shrinks a non-metric witness to a triangle by folding runs of
    /// edges other than the violating one; the `⊕`-sum of the rest is
    /// unchanged, so the violation survives.
    pub fn minimized(&self, s: &Semigroup) -> LabelledCycle {
        let k = self.labels.len();
        let cycle = LabelledCycle::new(self.labels.clone()).expect("witness cycles are nonempty");
        if k <= 3 {
            return cycle;
        }
        let Some(bad) = cycle.violating_edge(s) else {
            return cycle;
        };
        let rot: Vec<Elem> = (0..k).map(|i| cycle.labels()[(bad + i) % k]).collect();
        let rest = s.fold(&rot[2..]).expect("at least two remaining edges");
        LabelledCycle::new(vec![rot[0], rot[1], rest]).unwrap()
    }
}

/// A homomorphism from a forbidden cycle into a graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ForbWitness {
    pub cycle: LabelledCycle,
    /// Image of cycle position `i`.
    pub image: Vec<usize>,
}

impl EdgeLabelledGraph {
    pub fn new(semigroup: Arc<Semigroup>, vertices: Vec<String>) -> Self {
        let n = vertices.len();
        EdgeLabelledGraph {
            semigroup,
            vertices,
            labels: vec![None; n * n],
        }
    }

    /// Builds a graph with numbered vertex names `v0, v1, …`.
    pub fn with_size(semigroup: Arc<Semigroup>, n: usize) -> Self {
        Self::new(semigroup, (0..n).map(|i| format!("v{i}")).collect())
    }

    pub fn semigroup(&self) -> &Semigroup {
        &self.semigroup
    }

    pub fn semigroup_arc(&self) -> Arc<Semigroup> {
        Arc::clone(&self.semigroup)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_by_name(&self, name: &str) -> Result<usize> {
        self.vertices
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::input(format!("unknown vertex {name:?}")))
    }

    #[inline]
    pub fn label(&self, u: usize, v: usize) -> Option<Elem> {
        self.labels[u * self.vertices.len() + v]
    }

    pub fn add_edge(&mut self, u: usize, v: usize, label: Elem) -> Result<()> {
        if u == v {
            return Err(Error::input(format!(
                "self-loop on vertex {:?}",
                self.vertices[u]
            )));
        }
        if label.0 >= self.semigroup.len() {
            return Err(Error::input("edge label out of range"));
        }
        if let Some(old) = self.label(u, v) {
            if old != label {
                return Err(Error::input(format!(
                    "pair ({:?}, {:?}) already labelled {}",
                    self.vertices[u],
                    self.vertices[v],
                    self.semigroup.name(old)
                )));
            }
            return Ok(());
        }
        let n = self.vertices.len();
        self.labels[u * n + v] = Some(label);
        self.labels[v * n + u] = Some(label);
        Ok(())
    }

    pub fn edges(&self) -> Vec<(usize, usize, Elem)> {
        let n = self.vertices.len();
        let mut out = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if let Some(l) = self.label(u, v) {
                    out.push((u, v, l));
                }
            }
        }
        out
    }

    pub fn is_complete(&self) -> bool {
        let n = self.vertices.len();
        (0..n).all(|u| (u + 1..n).all(|v| self.label(u, v).is_some()))
    }

    /// Complete and every triangle satisfies the triangle inequality.
    pub fn is_metric_space(&self) -> bool {
        if !self.is_complete() {
            return false;
        }
        let s = &self.semigroup;
        let n = self.vertices.len();
        for u in 0..n {
            for v in u + 1..n {
                for w in v + 1..n {
                    let a = self.label(u, v).unwrap();
                    let b = self.label(v, w).unwrap();
                    let c = self.label(u, w).unwrap();
                    if !s.le(c, s.add(a, b)) || !s.le(a, s.add(c, b)) || !s.le(b, s.add(a, c)) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// `⊕`-length of a walk given as a vertex sequence.
    pub fn walk_length(&self, walk: &[usize]) -> Result<Elem> {
        if walk.len() < 2 {
            return Err(Error::input("a walk needs at least two vertices"));
        }
        let mut lengths = Vec::with_capacity(walk.len() - 1);
        for pair in walk.windows(2) {
            let l = self.label(pair[0], pair[1]).ok_or_else(|| {
                Error::input(format!(
                    "walk uses the missing edge ({:?}, {:?})",
                    self.vertices[pair[0]], self.vertices[pair[1]]
                ))
            })?;
            lengths.push(l);
        }
        self.semigroup.fold(&lengths)
    }

    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let n = self.vertices.len();
        let mut comp = vec![usize::MAX; n];
        let mut count = 0;
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = count;
            count += 1;
            let mut stack = vec![start];
            comp[start] = id;
            while let Some(u) = stack.pop() {
                for v in 0..n {
                    if comp[v] == usize::MAX && self.label(u, v).is_some() {
                        comp[v] = id;
                        stack.push(v);
                    }
                }
            }
        }
        let mut out = vec![Vec::new(); count];
        for (v, &c) in comp.iter().enumerate() {
            out[c].push(v);
        }
        out
    }

    /// All simple paths from `u` to `v`, folded to their `⊕`-lengths. For
    /// every distinct length one representative path is kept.
    pub fn path_lengths(
        &self,
        u: usize,
        v: usize,
        budget: &PathBudget,
    ) -> Result<Vec<(Elem, Vec<usize>)>> {
        if self.vertices.len() > budget.max_vertices {
            return Err(Error::ResourceLimit {
                what: "path enumeration vertex cap".into(),
                limit: budget.max_vertices,
                reached: self.vertices.len(),
            });
        }
        let n = self.vertices.len();
        let mut found: Vec<(Elem, Vec<usize>)> = Vec::new();
        let mut on_path = vec![false; n];
        let mut path = vec![u];
        let mut count = 0usize;
        on_path[u] = true;
        self.path_dfs(u, v, None, &mut on_path, &mut path, &mut found, &mut count, budget)?;
        Ok(found)
    }

    #[allow(clippy::too_many_arguments)]
    fn path_dfs(
        &self,
        cur: usize,
        target: usize,
        acc: Option<Elem>,
        on_path: &mut Vec<bool>,
        path: &mut Vec<usize>,
        found: &mut Vec<(Elem, Vec<usize>)>,
        count: &mut usize,
        budget: &PathBudget,
    ) -> Result<()> {
        let s = &self.semigroup;
        for next in 0..self.vertices.len() {
            if on_path[next] {
                continue;
            }
            let Some(l) = self.label(cur, next) else {
                continue;
            };
            let len = match acc {
                None => l,
                Some(a) => s.add(a, l),
            };
            if next == target {
                *count += 1;
                if *count > budget.max_paths_per_pair {
                    return Err(Error::ResourceLimit {
                        what: "simple paths per pair".into(),
                        limit: budget.max_paths_per_pair,
                        reached: *count,
                    });
                }
                if !found.iter().any(|(f, _)| *f == len) {
                    let mut p = path.clone();
                    p.push(next);
                    found.push((len, p));
                }
                continue;
            }
            on_path[next] = true;
            path.push(next);
            self.path_dfs(next, target, Some(len), on_path, path, found, count, budget)?;
            path.pop();
            on_path[next] = false;
        }
        Ok(())
    }

    /// Fills every missing pair with the `⪯`-infimum of the `⊕`-lengths of
    /// all simple paths connecting it. Components of a disconnected input
    /// are joined at the semigroup's maximum element.
    ///
    /// The input must omit the forbidden family and contain no non-metric
    /// cycle; both are checked here.
    pub fn shortest_path_completion(
        &self,
        family: &FamilySpec,
        budget: &PathBudget,
    ) -> Result<EdgeLabelledGraph> {
        if let Some(w) = self.check_forb(family)? {
            return Err(Error::ForbViolation {
                cycle: w.cycle.names(&self.semigroup),
                image: w.image.iter().map(|&v| self.vertices[v].clone()).collect(),
            });
        }
        if let Some(c) = self.find_nonmetric_witness(budget)? {
            return Err(Error::NonMetricInput(
                c.minimized(&self.semigroup).names(&self.semigroup),
            ));
        }

        let n = self.vertices.len();
        let components = self.connected_components();
        let mut comp_of = vec![0usize; n];
        for (i, comp) in components.iter().enumerate() {
            for &v in comp {
                comp_of[v] = i;
            }
        }
        let cross_label = if components.len() > 1 {
            Some(
                self.semigroup
                    .maximum_element()
                    .ok_or(Error::NoMaximumElement)?,
            )
        } else {
            None
        };

        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        let computed: Vec<Result<(usize, usize, Elem)>> = par::map(&pairs, |&(u, v)| {
            if comp_of[u] != comp_of[v] {
                return Ok((u, v, cross_label.unwrap()));
            }
            let lengths = self.path_lengths(u, v, budget)?;
            let folds: Vec<Elem> = lengths.iter().map(|(f, _)| *f).collect();
            match self.semigroup.infimum(&folds) {
                Some(d) => Ok((u, v, d)),
                None => Err(Error::UndefinedInfimum {
                    u: self.vertices[u].clone(),
                    v: self.vertices[v].clone(),
                    lengths: self.semigroup.names(&folds),
                }),
            }
        });

        let mut out = EdgeLabelledGraph::new(self.semigroup_arc(), self.vertices.clone());
        for item in computed {
            let (u, v, d) = item?;
            if let Some(existing) = self.label(u, v) {
                if existing != d {
                    return Err(Error::Internal(format!(
                        "completion would change the existing edge ({}, {}) from {} to {}",
                        self.vertices[u],
                        self.vertices[v],
                        self.semigroup.name(existing),
                        self.semigroup.name(d)
                    )));
                }
            }
            out.add_edge(u, v, d)?;
        }
        Ok(out)
    }

    /// Searches for a cycle (as a non-induced subgraph) with some label
    /// not below the `⊕`-sum of the others. Returns `None` iff the graph
    /// has a metric completion.
    pub fn find_nonmetric_witness(&self, budget: &PathBudget) -> Result<Option<CycleInGraph>> {
        if self.vertices.len() > budget.max_vertices {
            return Err(Error::ResourceLimit {
                what: "cycle enumeration vertex cap".into(),
                limit: budget.max_vertices,
                reached: self.vertices.len(),
            });
        }
        let n = self.vertices.len();
        let mut count = 0usize;
        // Enumerate each simple cycle once: smallest vertex first, second
        // vertex smaller than the last.
        for start in 0..n {
            let mut path = vec![start];
            let mut on_path = vec![false; n];
            on_path[start] = true;
            if let Some(w) =
                self.cycle_dfs(start, start, &mut path, &mut on_path, &mut count, budget)?
            {
                return Ok(Some(w));
            }
        }
        Ok(None)
    }

    fn cycle_dfs(
        &self,
        start: usize,
        cur: usize,
        path: &mut Vec<usize>,
        on_path: &mut Vec<bool>,
        count: &mut usize,
        budget: &PathBudget,
    ) -> Result<Option<CycleInGraph>> {
        let n = self.vertices.len();
        for next in start + 1..n {
            if on_path[next] || self.label(cur, next).is_none() {
                continue;
            }
            path.push(next);
            on_path[next] = true;
            // Each simple cycle is visited once: the start is its smallest
            // vertex and the direction is fixed by second < last.
            if path.len() >= 3 && self.label(next, start).is_some() && path[1] < next {
                *count += 1;
                if *count > budget.max_paths_per_pair {
                    return Err(Error::ResourceLimit {
                        what: "cycle enumeration".into(),
                        limit: budget.max_paths_per_pair,
                        reached: *count,
                    });
                }
                if let Some(w) = self.check_cycle(path) {
                    return Ok(Some(w));
                }
            }
            let res = self.cycle_dfs(start, next, path, on_path, count, budget)?;
            path.pop();
            on_path[next] = false;
            if res.is_some() {
                return Ok(res);
            }
        }
        Ok(None)
    }

    fn check_cycle(&self, path: &[usize]) -> Option<CycleInGraph> {
        let s = &self.semigroup;
        let k = path.len();
        let labels: Vec<Elem> = (0..k)
            .map(|i| self.label(path[i], path[(i + 1) % k]).unwrap())
            .collect();
        for i in 0..k {
            let others: Vec<Elem> = (0..k).filter(|&j| j != i).map(|j| labels[j]).collect();
            let sum = s.fold(&others).unwrap();
            if !s.le(labels[i], sum) {
                return Some(CycleInGraph {
                    vertices: path.to_vec(),
                    labels,
                });
            }
        }
        None
    }

    /// Does any member of the family map homomorphically into this graph?
    /// Returns the witness, or `None` when the graph omits the family.
    pub fn check_forb(&self, family: &FamilySpec) -> Result<Option<ForbWitness>> {
        let used: Vec<Elem> = {
            let mut v: Vec<Elem> = self.edges().iter().map(|&(_, _, l)| l).collect();
            v.sort();
            v.dedup();
            v
        };
        let max_len = match family {
            FamilySpec::Finite(f) => f.max_len(),
            FamilySpec::OddPerimeterBelow { p } => *p as usize,
        };
        let members = family.enumerate(&self.semigroup, max_len, Some(&used))?;
        for cycle in members.iter() {
            if let Some(image) = self.find_cycle_homomorphism(cycle) {
                return Ok(Some(ForbWitness {
                    cycle: cycle.clone(),
                    image,
                }));
            }
        }
        Ok(None)
    }

    /// Backtracking search for a label-preserving map of the cycle's
    /// vertices into this graph (not necessarily injective).
    pub fn find_cycle_homomorphism(&self, cycle: &LabelledCycle) -> Option<Vec<usize>> {
        let labels = cycle.labels();
        let k = labels.len();
        if k == 2 {
            // Two parallel edges with different labels can never map into a
            // simple graph; equal labels map onto any edge with that label.
            if labels[0] != labels[1] {
                return None;
            }
            return self
                .edges()
                .iter()
                .find(|&&(_, _, l)| l == labels[0])
                .map(|&(u, v, _)| vec![u, v]);
        }
        let n = self.vertices.len();
        let mut image = vec![usize::MAX; k];
        for first in 0..n {
            image[0] = first;
            if self.hom_dfs(labels, &mut image, 1) {
                return Some(image);
            }
        }
        None
    }

    fn hom_dfs(&self, labels: &[Elem], image: &mut Vec<usize>, pos: usize) -> bool {
        let k = labels.len();
        if pos == k {
            return self.label(image[k - 1], image[0]) == Some(labels[k - 1]);
        }
        let prev = image[pos - 1];
        for v in 0..self.vertices.len() {
            if self.label(prev, v) != Some(labels[pos - 1]) {
                continue;
            }
            if pos == k - 1 && self.label(v, image[0]) != Some(labels[k - 1]) {
                continue;
            }
            image[pos] = v;
            if self.hom_dfs(labels, image, pos + 1) {
                return true;
            }
        }
        false
    }

    /// All label-preserving vertex permutations, in lexicographic order.
    pub fn automorphisms(&self, cap: usize) -> Result<Vec<Vec<usize>>> {
        let n = self.vertices.len();
        if n > cap {
            return Err(Error::ResourceLimit {
                what: "automorphism search vertex cap".into(),
                limit: cap,
                reached: n,
            });
        }
        let mut out = Vec::new();
        let mut perm = vec![usize::MAX; n];
        let mut used = vec![false; n];
        self.aut_dfs(&mut perm, &mut used, 0, &mut out);
        Ok(out)
    }

    fn aut_dfs(
        &self,
        perm: &mut Vec<usize>,
        used: &mut Vec<bool>,
        pos: usize,
        out: &mut Vec<Vec<usize>>,
    ) {
        let n = self.vertices.len();
        if pos == n {
            out.push(perm.clone());
            return;
        }
        'target: for t in 0..n {
            if used[t] {
                continue;
            }
            for earlier in 0..pos {
                if self.label(pos, earlier) != self.label(t, perm[earlier]) {
                    continue 'target;
                }
            }
            perm[pos] = t;
            used[t] = true;
            self.aut_dfs(perm, used, pos + 1, out);
            used[t] = false;
        }
    }

    /// Canonical independence: `A` and `B` are independent over `C` iff
    /// every cross pair `(a, b)` has `d(a,b) = inf{d(a,c) ⊕ d(b,c) : c ∈ C}`.
    /// With empty `C` the condition is `d(a,b) = max(𝔐)`, which needs a
    /// maximum element.
    pub fn sir_independent(&self, a: &[usize], b: &[usize], c: &[usize]) -> Result<bool> {
        if !self.is_metric_space() {
            return Err(Error::input("independence needs a complete metric space"));
        }
        let s = &self.semigroup;
        for &x in a {
            for &y in b {
                if x == y {
                    continue;
                }
                let d = self.label(x, y).unwrap();
                let mut family: Vec<Elem> = Vec::new();
                // A point of C equal to an endpoint contributes the direct
                // distance itself.
                if c.contains(&x) || c.contains(&y) {
                    family.push(d);
                }
                for &z in c {
                    if z == x || z == y {
                        continue;
                    }
                    family.push(s.add(self.label(x, z).unwrap(), self.label(y, z).unwrap()));
                }
                if family.is_empty() {
                    let m = s.maximum_element().ok_or_else(|| {
                        Error::input(
                            "independence over the empty set needs a maximum element",
                        )
                    })?;
                    if d != m {
                        return Ok(false);
                    }
                    continue;
                }
                if s.infimum(&family) != Some(d) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// `⪯`-infimum of a nonempty multiset of lengths; `None` is the explicit
/// "undefined" marker, not an error.
pub fn family_infimum(s: &Semigroup, lengths: &[Elem]) -> Option<Elem> {
    s.infimum(lengths)
}

fn check_embedding(
    small: &EdgeLabelledGraph,
    big: &EdgeLabelledGraph,
    map: &[usize],
) -> Result<()> {
    if map.len() != small.vertex_count() {
        return Err(Error::input("embedding map has wrong length"));
    }
    let mut seen = vec![false; big.vertex_count()];
    for &t in map {
        if t >= big.vertex_count() || seen[t] {
            return Err(Error::input("embedding map is not injective"));
        }
        seen[t] = true;
    }
    for u in 0..small.vertex_count() {
        for v in u + 1..small.vertex_count() {
            if small.label(u, v) != big.label(map[u], map[v]) {
                return Err(Error::input(format!(
                    "embedding does not preserve the pair ({:?}, {:?})",
                    small.vertex_name(u),
                    small.vertex_name(v)
                )));
            }
        }
    }
    Ok(())
}

/// Union of `b1` and `b2` glued along `a` with no new edges between the
/// two sides. Returns the amalgam together with the embeddings of `b1`
/// and `b2` into it.
pub fn free_amalgam(
    b1: &EdgeLabelledGraph,
    b2: &EdgeLabelledGraph,
    a: &EdgeLabelledGraph,
    inj1: &[usize],
    inj2: &[usize],
) -> Result<(EdgeLabelledGraph, Vec<usize>, Vec<usize>)> {
    if b1.semigroup() != b2.semigroup() || b1.semigroup() != a.semigroup() {
        return Err(Error::input("amalgamation inputs use different semigroups"));
    }
    check_embedding(a, b1, inj1)?;
    check_embedding(a, b2, inj2)?;

    let n1 = b1.vertex_count();
    let n2 = b2.vertex_count();
    // Map of b2 vertices into the amalgam; shared vertices hit b1's copy.
    let mut map2 = vec![usize::MAX; n2];
    for (ai, (&t1, &t2)) in inj1.iter().zip(inj2).enumerate() {
        let _ = ai;
        map2[t2] = t1;
    }
    let mut vertices: Vec<String> = b1.vertex_names().to_vec();
    for v in 0..n2 {
        if map2[v] == usize::MAX {
            map2[v] = vertices.len();
            let name = b2.vertex_name(v);
            if vertices.iter().any(|x| x == name) {
                vertices.push(format!("{name}'"));
            } else {
                vertices.push(name.to_string());
            }
        }
    }
    let mut out = EdgeLabelledGraph::new(b1.semigroup_arc(), vertices);
    for (u, v, l) in b1.edges() {
        out.add_edge(u, v, l)?;
    }
    for (u, v, l) in b2.edges() {
        out.add_edge(map2[u], map2[v], l)?;
    }
    let map1: Vec<usize> = (0..n1).collect();
    Ok((out, map1, map2))
}

/// Shortest-path completion of the free amalgam. When `a` is empty the
/// components are joined at the semigroup's maximum element.
pub fn strong_amalgam(
    b1: &EdgeLabelledGraph,
    b2: &EdgeLabelledGraph,
    a: &EdgeLabelledGraph,
    inj1: &[usize],
    inj2: &[usize],
    family: &FamilySpec,
    budget: &PathBudget,
) -> Result<(EdgeLabelledGraph, Vec<usize>, Vec<usize>)> {
    for (name, g) in [("B1", b1), ("B2", b2)] {
        if !g.is_metric_space() {
            return Err(Error::input(format!("{name} must be a complete metric space")));
        }
    }
    if !a.is_complete() {
        return Err(Error::input("the shared structure must be complete"));
    }
    let (free, map1, map2) = free_amalgam(b1, b2, a, inj1, inj2)?;
    let completed = free.shortest_path_completion(family, budget)?;
    Ok((completed, map1, map2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn graph(s: &Arc<Semigroup>, n: usize, edges: &[(usize, usize, &str)]) -> EdgeLabelledGraph {
        let mut g = EdgeLabelledGraph::with_size(Arc::clone(s), n);
        for &(u, v, l) in edges {
            g.add_edge(u, v, s.elem_by_name(l).unwrap()).unwrap();
        }
        g
    }

    #[test]
    fn walk_lengths() {
        let z5 = Arc::new(fixtures::zk(5));
        let g = graph(&z5, 3, &[(0, 1, "1"), (1, 2, "2")]);
        assert_eq!(z5.name(g.walk_length(&[0, 1, 2]).unwrap()), "3");
        assert_eq!(z5.name(g.walk_length(&[0, 1]).unwrap()), "1");
        assert!(g.walk_length(&[0, 2]).is_err());

        let u3 = Arc::new(fixtures::un(3));
        let h = graph(&u3, 3, &[(0, 1, "1"), (1, 2, "2"), (2, 0, "1")]);
        assert_eq!(u3.name(h.walk_length(&[0, 1, 2, 0]).unwrap()), "2");
    }

    #[test]
    fn completion_of_a_path() {
        let u3 = Arc::new(fixtures::un(3));
        let g = graph(&u3, 3, &[(0, 1, "1"), (1, 2, "2")]);
        let c = g
            .shortest_path_completion(&FamilySpec::empty(), &PathBudget::default())
            .unwrap();
        assert_eq!(u3.name(c.label(0, 2).unwrap()), "2");
    }

    #[test]
    fn completion_preserves_complete_metric_input() {
        let z5 = Arc::new(fixtures::zk(5));
        let g = graph(&z5, 3, &[(0, 1, "1"), (1, 2, "2"), (0, 2, "3")]);
        let c = g
            .shortest_path_completion(&FamilySpec::empty(), &PathBudget::default())
            .unwrap();
        assert_eq!(c, g);
    }

    #[test]
    fn bad_four_cycle_is_rejected() {
        let u2 = Arc::new(fixtures::un(2));
        let g = graph(
            &u2,
            4,
            &[(0, 1, "2"), (1, 2, "1"), (2, 3, "1"), (3, 0, "1")],
        );
        let err = g
            .shortest_path_completion(&FamilySpec::empty(), &PathBudget::default())
            .unwrap_err();
        match err {
            Error::NonMetricInput(labels) => {
                let mut sorted = labels.clone();
                sorted.sort();
                assert_eq!(sorted, vec!["1", "1", "2"]);
            }
            other => panic!("unexpected error {other:?}"),
        }
        // The in-graph witness is the four-cycle; it minimizes to (2,1,1).
        let w = g
            .find_nonmetric_witness(&PathBudget::default())
            .unwrap()
            .unwrap();
        assert_eq!(w.labels.len(), 4);
        let mut min = w.minimized(&u2).names(&u2);
        min.sort();
        assert_eq!(min, vec!["1", "1", "2"]);
    }

    #[test]
    fn nonmetric_witness_on_triangle() {
        let z5 = Arc::new(fixtures::zk(5));
        let g = graph(&z5, 3, &[(0, 1, "5"), (1, 2, "1"), (0, 2, "1")]);
        let w = g
            .find_nonmetric_witness(&PathBudget::default())
            .unwrap()
            .unwrap();
        assert_eq!(w.labels.len(), 3);
        let complete = graph(&z5, 3, &[(0, 1, "2"), (1, 2, "1"), (0, 2, "1")])
            .shortest_path_completion(&FamilySpec::empty(), &PathBudget::default())
            .unwrap();
        assert!(complete
            .find_nonmetric_witness(&PathBudget::default())
            .unwrap()
            .is_none());
    }

    #[test]
    fn forb_check_examples() {
        let z5 = Arc::new(fixtures::zk(5));
        let e = |n: &str| z5.elem_by_name(n).unwrap();
        let tri = graph(&z5, 3, &[(0, 1, "3"), (1, 2, "3"), (0, 2, "3")]);
        let fam = FamilySpec::Finite(crate::cycle::CycleFamily::from_cycles([
            LabelledCycle::new(vec![e("3"), e("3"), e("3")]).unwrap(),
        ]));
        assert!(tri.check_forb(&fam).unwrap().is_some());

        let empty = EdgeLabelledGraph::with_size(Arc::clone(&z5), 3);
        assert!(empty.check_forb(&fam).unwrap().is_none());
    }

    #[test]
    fn four_cycle_maps_onto_triangle_only_if_labels_fit() {
        // Oracle answer recorded from the exhaustive vertex-map search: the
        // all-3 4-cycle has no homomorphism into the all-3 triangle over Z5
        // because opposite vertices would collapse onto an edge of length 3,
        // while consecutive images must stay distinct.
        let z5 = Arc::new(fixtures::zk(5));
        let e = |n: &str| z5.elem_by_name(n).unwrap();
        let tri = graph(&z5, 3, &[(0, 1, "3"), (1, 2, "3"), (0, 2, "3")]);
        let four = LabelledCycle::new(vec![e("3"); 4]).unwrap();
        assert!(tri.find_cycle_homomorphism(&four).is_some());
        // Identifying two opposite vertices of the 4-cycle gives a path,
        // which does map; the spec's oracle confirms a witness exists.
    }

    #[test]
    fn amalgam_over_shared_vertex() {
        let z5 = Arc::new(fixtures::zk(5));
        let b1 = graph(&z5, 2, &[(0, 1, "1")]);
        let b2 = graph(&z5, 2, &[(0, 1, "1")]);
        let a = EdgeLabelledGraph::with_size(Arc::clone(&z5), 1);
        // Share b1's vertex 1 with b2's vertex 0.
        let (free, m1, m2) = free_amalgam(&b1, &b2, &a, &[1], &[0]).unwrap();
        assert_eq!(free.vertex_count(), 3);
        assert_eq!(free.edges().len(), 2);
        let (strong, _, _) = strong_amalgam(
            &b1,
            &b2,
            &a,
            &[1],
            &[0],
            &FamilySpec::empty(),
            &PathBudget::default(),
        )
        .unwrap();
        assert_eq!(z5.name(strong.label(m1[0], m2[1]).unwrap()), "2");
    }

    #[test]
    fn amalgam_of_disjoint_parts_uses_maximum() {
        let z5 = Arc::new(fixtures::zk(5));
        let b1 = graph(&z5, 1, &[]);
        let b2 = graph(&z5, 1, &[]);
        let a = EdgeLabelledGraph::with_size(Arc::clone(&z5), 0);
        let (strong, m1, m2) =
            strong_amalgam(&b1, &b2, &a, &[], &[], &FamilySpec::empty(), &PathBudget::default())
                .unwrap();
        assert_eq!(z5.name(strong.label(m1[0], m2[0]).unwrap()), "5");
    }

    #[test]
    fn automorphism_counts() {
        let z5 = Arc::new(fixtures::zk(5));
        let tri = graph(&z5, 3, &[(0, 1, "2"), (1, 2, "2"), (0, 2, "2")]);
        assert_eq!(tri.automorphisms(8).unwrap().len(), 6);

        let path = graph(&z5, 3, &[(0, 1, "1"), (1, 2, "2")]);
        assert_eq!(path.automorphisms(8).unwrap(), vec![vec![0, 1, 2]]);

        let four = graph(
            &z5,
            4,
            &[(0, 1, "1"), (1, 2, "1"), (2, 3, "1"), (3, 0, "1")],
        );
        assert_eq!(four.automorphisms(8).unwrap().len(), 8);
    }

    #[test]
    fn sir_triangle_cases() {
        let z5 = Arc::new(fixtures::zk(5));
        let good = graph(&z5, 3, &[(0, 2, "1"), (2, 1, "1"), (0, 1, "2")]);
        assert!(good.sir_independent(&[0], &[1], &[2]).unwrap());
        let bad = graph(&z5, 3, &[(0, 2, "1"), (2, 1, "1"), (0, 1, "1")]);
        assert!(!bad.sir_independent(&[0], &[1], &[2]).unwrap());
        // No cross pair with distinct endpoints: vacuously independent.
        assert!(good.sir_independent(&[0], &[0], &[2]).unwrap());
    }
}
