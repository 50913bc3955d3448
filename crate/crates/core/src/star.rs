//! The ball-vertex expansion of metric spaces.
//!
//! Every ball of meet-irreducible diameter gets an explicit ball vertex;
//! originals point to their balls through unary functions, balls point to
//! the balls containing them, and higher-arity type relations record
//! which distance sets can appear between tuples of balls. The expansion
//! and its inverse are mutually inverse on expanded metric spaces, and
//! structures with consistent pieces can be completed by gluing witness
//! gadgets on missing pairs and running the shortest-path completion.

use crate::blocks::{compute_blocks, BlockId, BlockLattice};
use crate::cycle::{FamilySpec, LabelledCycle};
use crate::error::{Error, Result};
use crate::graph::{EdgeLabelledGraph, PathBudget};
use crate::semigroup::{Elem, Semigroup};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

/// Canonical identity of a distance type: its member set.
pub type TypeKey = Vec<Elem>;

/// A distance type `t(B, ℓ)`: the distances that can appear between balls
/// of diameter `B` when `ℓ` appears between them. Member sets are
/// bound-relative (computed from four-point witnesses).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DistanceType {
    pub block: BlockId,
    pub rep: Elem,
    pub members: Vec<Elem>,
}

/// Distance-type classes per block, from four-point witness patterns.
#[derive(Debug, Clone)]
pub struct TypeTable {
    class_of: Vec<Vec<usize>>,
    classes: Vec<Vec<Vec<Elem>>>,
}

impl TypeTable {
    pub fn key(&self, b: BlockId, l: Elem) -> &[Elem] {
        &self.classes[b.0][self.class_of[b.0][l.0]]
    }

    pub fn type_of(&self, b: BlockId, l: Elem) -> DistanceType {
        DistanceType {
            block: b,
            rep: l,
            members: self.key(b, l).to_vec(),
        }
    }
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        if self.0[x] != x {
            let r = self.find(self.0[x]);
            self.0[x] = r;
        }
        self.0[x]
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Checks whether the four-point pattern `d(u,v) = a`, `d(u',v') = l`,
/// `d(u,u') = b1`, `d(v,v') = b2` (with optional identifications) embeds
/// into some metric space omitting the family.
fn four_point_witness(
    s: &Arc<Semigroup>,
    family: &FamilySpec,
    forb_cache: &mut BTreeMap<LabelledCycle, bool>,
    a: Elem,
    l: Elem,
    below: &[Elem],
) -> Result<bool> {
    if a == l {
        return Ok(true);
    }
    let mut cycle_ok = |labels: Vec<Elem>| -> Result<bool> {
        let cycle = LabelledCycle::new(labels)?;
        if cycle.is_nonmetric(s) {
            return Ok(false);
        }
        if family.is_empty_family() {
            return Ok(true);
        }
        if let Some(&cached) = forb_cache.get(&cycle) {
            return Ok(cached);
        }
        let mut g = EdgeLabelledGraph::with_size(Arc::clone(s), cycle.len());
        for (i, &lab) in cycle.labels().iter().enumerate() {
            g.add_edge(i, (i + 1) % cycle.len(), lab)?;
        }
        let ok = g.check_forb(family)?.is_none();
        forb_cache.insert(cycle, ok);
        Ok(ok)
    };
    // One identification: a triangle with a within-ball side.
    for &x in below {
        if cycle_ok(vec![a, l, x])? {
            return Ok(true);
        }
    }
    // No identification: a four-cycle with two within-ball sides.
    for &b1 in below {
        for &b2 in below {
            if cycle_ok(vec![a, b2, l, b1])? {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Computes the distance-type classes of every block as the transitive
/// closure of the four-point witness relation.
pub fn compute_types(
    s: &Arc<Semigroup>,
    lattice: &BlockLattice,
    family: &FamilySpec,
) -> Result<TypeTable> {
    let n = s.len();
    let mut class_of = Vec::new();
    let mut classes = Vec::new();
    let mut forb_cache = BTreeMap::new();
    for b in lattice.ids() {
        let below = lattice.elements_below(b);
        let mut dsu = Dsu::new(n);
        for a in 0..n {
            for l in a + 1..n {
                if four_point_witness(s, family, &mut forb_cache, Elem(a), Elem(l), &below)? {
                    dsu.union(a, l);
                }
            }
        }
        let mut reps: BTreeMap<usize, usize> = BTreeMap::new();
        let mut block_classes: Vec<Vec<Elem>> = Vec::new();
        let mut block_class_of = vec![0usize; n];
        for x in 0..n {
            let r = dsu.find(x);
            let idx = *reps.entry(r).or_insert_with(|| {
                block_classes.push(Vec::new());
                block_classes.len() - 1
            });
            block_classes[idx].push(Elem(x));
            block_class_of[x] = idx;
        }
        class_of.push(block_class_of);
        classes.push(block_classes);
    }
    Ok(TypeTable { class_of, classes })
}

/// Everything the expansion operations need about one semigroup and one
/// forbidden family: the block lattice (all meets of non-bottom blocks
/// must exist and be non-bottom) and the distance-type table.
pub struct StarContext {
    pub semigroup: Arc<Semigroup>,
    pub lattice: Arc<BlockLattice>,
    pub family: FamilySpec,
    pub types: TypeTable,
}

impl StarContext {
    pub fn new(semigroup: Arc<Semigroup>, family: FamilySpec) -> Result<Self> {
        let lattice = Arc::new(compute_blocks(&semigroup));
        for a in lattice.ids() {
            for b in lattice.ids() {
                if lattice.block(a).is_zero() || lattice.block(b).is_zero() {
                    continue;
                }
                match lattice.meet(a, b) {
                    Some(m) if !lattice.block(m).is_zero() => {}
                    _ => {
                        return Err(Error::input(format!(
                            "meet of blocks {} and {} is missing or bottom; the expansion \
                             needs all meets of non-bottom blocks defined and non-bottom",
                            a.0, b.0
                        )))
                    }
                }
            }
        }
        let types = compute_types(&semigroup, &lattice, &family)?;
        Ok(StarContext {
            semigroup,
            lattice,
            family,
            types,
        })
    }

    /// Meet-irreducible blocks other than the bottom block, ascending.
    pub fn irr_blocks(&self) -> Vec<BlockId> {
        self.lattice
            .meet_irreducibles
            .iter()
            .copied()
            .filter(|&b| !self.lattice.block(b).is_zero())
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum VertexKind {
    Original,
    Ball(BlockId),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StarVertex {
    pub name: String,
    pub kind: VertexKind,
}

/// A type relation: the balls `xs` and the balls `ys` (for the listed
/// meet-irreducible blocks) bound originals whose distance lies in the
/// type with key `key`. Stored canonically: blocks ascending and
/// `xs ≤ ys` lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct TypeRel {
    pub blocks: Vec<BlockId>,
    pub key: TypeKey,
    pub xs: Vec<usize>,
    pub ys: Vec<usize>,
}

impl TypeRel {
    pub fn canonical(blocks: Vec<BlockId>, key: TypeKey, xs: Vec<usize>, ys: Vec<usize>) -> Self {
        let mut idx: Vec<usize> = (0..blocks.len()).collect();
        idx.sort_by_key(|&i| blocks[i]);
        let blocks2: Vec<BlockId> = idx.iter().map(|&i| blocks[i]).collect();
        let xs2: Vec<usize> = idx.iter().map(|&i| xs[i]).collect();
        let ys2: Vec<usize> = idx.iter().map(|&i| ys[i]).collect();
        if xs2 <= ys2 {
            TypeRel {
                blocks: blocks2,
                key,
                xs: xs2,
                ys: ys2,
            }
        } else {
            TypeRel {
                blocks: blocks2,
                key,
                xs: ys2,
                ys: xs2,
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StarStructure {
    pub vertices: Vec<StarVertex>,
    /// Partial symmetric distances between original vertices.
    pub distances: Vec<Option<Elem>>,
    /// `(original, block) → ball vertex` for meet-irreducible blocks.
    pub f_b: BTreeMap<(usize, BlockId), usize>,
    /// `(ball, larger block) → ball vertex` between meet-irreducible blocks.
    pub f_bb: BTreeMap<(usize, BlockId), usize>,
    pub type_rels: BTreeSet<TypeRel>,
    /// Optional linear order: vertex indices, first to last.
    pub order: Option<Vec<usize>>,
}

impl StarStructure {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn originals(&self) -> Vec<usize> {
        (0..self.vertices.len())
            .filter(|&v| self.vertices[v].kind == VertexKind::Original)
            .collect()
    }

    pub fn balls(&self) -> Vec<usize> {
        (0..self.vertices.len())
            .filter(|&v| matches!(self.vertices[v].kind, VertexKind::Ball(_)))
            .collect()
    }

    pub fn distance(&self, u: usize, v: usize) -> Option<Elem> {
        self.distances[u * self.vertices.len() + v]
    }

    pub fn set_distance(&mut self, u: usize, v: usize, d: Elem) -> Result<()> {
        if u == v {
            return Err(Error::input("no self distances"));
        }
        for x in [u, v] {
            if self.vertices[x].kind != VertexKind::Original {
                return Err(Error::input("distances connect original vertices only"));
            }
        }
        let n = self.vertices.len();
        self.distances[u * n + v] = Some(d);
        self.distances[v * n + u] = Some(d);
        Ok(())
    }

    pub fn fb(&self, original: usize, b: BlockId) -> Option<usize> {
        self.f_b.get(&(original, b)).copied()
    }

    pub fn fbb(&self, ball: usize, b: BlockId) -> Option<usize> {
        self.f_bb.get(&(ball, b)).copied()
    }

    /// Balls nobody points at.
    pub fn orphans(&self) -> Vec<usize> {
        let pointed: BTreeSet<usize> = self.f_b.values().copied().collect();
        self.balls()
            .into_iter()
            .filter(|b| !pointed.contains(b))
            .collect()
    }

    /// The edge-labelled graph induced on the original vertices.
    pub fn original_graph(&self, s: &Arc<Semigroup>) -> EdgeLabelledGraph {
        let originals = self.originals();
        let names: Vec<String> = originals
            .iter()
            .map(|&v| self.vertices[v].name.clone())
            .collect();
        let mut g = EdgeLabelledGraph::new(Arc::clone(s), names);
        for (i, &u) in originals.iter().enumerate() {
            for (j, &v) in originals.iter().enumerate().skip(i + 1) {
                if let Some(d) = self.distance(u, v) {
                    g.add_edge(i, j, d).expect("distance matrix is symmetric");
                }
            }
        }
        g
    }

    fn empty(vertices: Vec<StarVertex>) -> Self {
        let n = vertices.len();
        StarStructure {
            vertices,
            distances: vec![None; n * n],
            f_b: BTreeMap::new(),
            f_bb: BTreeMap::new(),
            type_rels: BTreeSet::new(),
            order: None,
        }
    }

    /// Extends the vertex list, reallocating the distance matrix.
    fn push_vertices(&mut self, extra: Vec<StarVertex>) -> Vec<usize> {
        let old_n = self.vertices.len();
        let added: Vec<usize> = (old_n..old_n + extra.len()).collect();
        self.vertices.extend(extra);
        let n = self.vertices.len();
        let mut dist = vec![None; n * n];
        for u in 0..old_n {
            for v in 0..old_n {
                dist[u * n + v] = self.distances[u * old_n + v];
            }
        }
        self.distances = dist;
        added
    }
}

/// Equivalence classes of "within a common ball of diameter `b`";
/// singletons for the bottom block.
pub fn ball_partition(
    space: &EdgeLabelledGraph,
    lattice: &BlockLattice,
    b: BlockId,
) -> Vec<Vec<usize>> {
    let n = space.vertex_count();
    if lattice.block(b).is_zero() {
        return (0..n).map(|v| vec![v]).collect();
    }
    let below: BTreeSet<Elem> = lattice.elements_below(b).into_iter().collect();
    let mut dsu = Dsu::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if let Some(d) = space.label(u, v) {
                if below.contains(&d) {
                    dsu.union(u, v);
                }
            }
        }
    }
    let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in 0..n {
        let r = dsu.find(v);
        by_root.entry(r).or_default().push(v);
    }
    by_root.into_values().collect()
}

/// Intersection of a ball of diameter `b1` with a ball of diameter `b2`:
/// empty, or exactly one ball of diameter `b1 ∧ b2`.
pub fn intersect_balls(
    space: &EdgeLabelledGraph,
    lattice: &BlockLattice,
    b1: BlockId,
    ball1: &[usize],
    b2: BlockId,
    ball2: &[usize],
) -> Result<Vec<usize>> {
    let meet = lattice
        .meet(b1, b2)
        .ok_or_else(|| Error::input("meet of the two diameters is undefined"))?;
    if lattice.block(meet).is_zero() {
        return Err(Error::input("meet of the two diameters is the bottom block"));
    }
    let s2: BTreeSet<usize> = ball2.iter().copied().collect();
    let inter: Vec<usize> = ball1.iter().copied().filter(|v| s2.contains(v)).collect();
    if !inter.is_empty() {
        let parts = ball_partition(space, lattice, meet);
        if !parts.contains(&inter) {
            return Err(Error::Internal(
                "ball intersection is not a single ball of the meet diameter".into(),
            ));
        }
    }
    Ok(inter)
}

/// Nonempty subsets of the meet-irreducible blocks whose meet is `target`.
fn subsets_with_meet(ctx: &StarContext, target: BlockId) -> Result<Vec<Vec<BlockId>>> {
    let irr = ctx.irr_blocks();
    let mut out = Vec::new();
    let total = 1usize << irr.len();
    for mask in 1..total {
        let subset: Vec<BlockId> = irr
            .iter()
            .enumerate()
            .filter(|&(i, _)| mask & (1 << i) != 0)
            .map(|(_, &b)| b)
            .collect();
        if ctx.lattice.meet_all(&subset)? == target {
            out.push(subset);
        }
    }
    Ok(out)
}

/// Expands a complete metric space: ball vertices for every ball of
/// meet-irreducible diameter, the pointing functions, and the type
/// relations between distinct ball tuples sharing originals.
pub fn lift_star(ctx: &StarContext, space: &EdgeLabelledGraph) -> Result<StarStructure> {
    if !space.is_metric_space() {
        return Err(Error::input("the expansion takes a complete metric space"));
    }
    if let Some(w) = space.check_forb(&ctx.family)? {
        return Err(Error::ForbViolation {
            cycle: w.cycle.names(&ctx.semigroup),
            image: w
                .image
                .iter()
                .map(|&v| space.vertex_name(v).to_string())
                .collect(),
        });
    }
    let n = space.vertex_count();
    let mut vertices: Vec<StarVertex> = (0..n)
        .map(|v| StarVertex {
            name: space.vertex_name(v).to_string(),
            kind: VertexKind::Original,
        })
        .collect();

    let irr = ctx.irr_blocks();
    let mut ball_ids: BTreeMap<(BlockId, usize), usize> = BTreeMap::new();
    let mut ball_of_vertex: BTreeMap<(usize, BlockId), usize> = BTreeMap::new();
    for &b in &irr {
        let parts = ball_partition(space, &ctx.lattice, b);
        for (i, part) in parts.iter().enumerate() {
            let id = vertices.len();
            vertices.push(StarVertex {
                name: format!("b{}_{}", b.0, i),
                kind: VertexKind::Ball(b),
            });
            ball_ids.insert((b, i), id);
            for &v in part {
                ball_of_vertex.insert((v, b), id);
            }
        }
    }

    let mut st = StarStructure::empty(vertices);
    for u in 0..n {
        for v in u + 1..n {
            st.set_distance(u, v, space.label(u, v).unwrap())?;
        }
    }
    for (&(v, b), &ball) in &ball_of_vertex {
        st.f_b.insert((v, b), ball);
    }
    // Ball-to-ball functions between comparable meet-irreducible blocks.
    for &b in &irr {
        for &b2 in &irr {
            if !ctx.lattice.lt(b, b2) {
                continue;
            }
            for (&(bb, _i), &ball) in ball_ids.iter().filter(|&(&(blk, _), _)| blk == b) {
                let _ = bb;
                // Any original in the ball determines the larger ball.
                let member = st
                    .f_b
                    .iter()
                    .find(|&(_, &target)| target == ball)
                    .map(|(&(v, _), _)| v)
                    .expect("every lifted ball has a member");
                let bigger = st.f_b[&(member, b2)];
                st.f_bb.insert((ball, b2), bigger);
            }
        }
    }
    // Type relations for every block expressible as a meet of
    // meet-irreducibles, on distinct ball tuples sharing originals.
    for target in ctx.lattice.ids() {
        if ctx.lattice.block(target).is_zero() || Some(target) == ctx.lattice.maximum_block {
            continue;
        }
        for subset in subsets_with_meet(ctx, target)? {
            for u in 0..n {
                for v in u + 1..n {
                    let xs: Vec<usize> = subset.iter().map(|&b| st.f_b[&(u, b)]).collect();
                    let ys: Vec<usize> = subset.iter().map(|&b| st.f_b[&(v, b)]).collect();
                    if xs == ys {
                        continue;
                    }
                    let d = space.label(u, v).unwrap();
                    let key = ctx.types.key(target, d).to_vec();
                    st.type_rels.insert(TypeRel::canonical(
                        subset.clone(),
                        key,
                        xs,
                        ys,
                    ));
                }
            }
        }
    }
    Ok(st)
}

/// Inverse of the expansion: forgets balls, functions and relations.
/// The input must be an exact expansion image.
pub fn drop_star(ctx: &StarContext, st: &StarStructure) -> Result<EdgeLabelledGraph> {
    if !st.orphans().is_empty() {
        return Err(Error::input("structure has orphaned ball vertices"));
    }
    let originals = st.originals();
    for (i, &u) in originals.iter().enumerate() {
        for &v in originals.iter().skip(i + 1) {
            if st.distance(u, v).is_none() {
                return Err(Error::input(format!(
                    "missing distance between {:?} and {:?}",
                    st.vertices[u].name, st.vertices[v].name
                )));
            }
        }
    }
    let space = st.original_graph(&ctx.semigroup);
    let lifted = lift_star(ctx, &space)?;
    if !same_expansion(ctx, st, &lifted) {
        return Err(Error::input(
            "structure is not the expansion of its underlying metric space",
        ));
    }
    Ok(space)
}

/// Structural equality of two star structures over the same originals,
/// up to renaming of ball vertices.
pub fn same_expansion(ctx: &StarContext, a: &StarStructure, b: &StarStructure) -> bool {
    let orig_a = a.originals();
    let orig_b = b.originals();
    if orig_a.len() != orig_b.len() {
        return false;
    }
    for (&u, &v) in orig_a.iter().zip(&orig_b) {
        if a.vertices[u].name != b.vertices[v].name {
            return false;
        }
    }
    for (i, &u) in orig_a.iter().enumerate() {
        for (j, &v) in orig_a.iter().enumerate().skip(i + 1) {
            if a.distance(u, v) != b.distance(orig_b[i], orig_b[j]) {
                return false;
            }
        }
    }
    // Ball correspondence through any pointing original.
    let mut map: BTreeMap<usize, usize> = BTreeMap::new();
    for (i, &u) in orig_a.iter().enumerate() {
        for &blk in &ctx.irr_blocks() {
            let (Some(ball_a), Some(ball_b)) = (a.fb(u, blk), b.fb(orig_b[i], blk)) else {
                return false;
            };
            if let Some(&prev) = map.get(&ball_a) {
                if prev != ball_b {
                    return false;
                }
            } else {
                map.insert(ball_a, ball_b);
            }
        }
    }
    if a.balls().len() != b.balls().len() || map.len() != a.balls().len() {
        return false;
    }
    let image: BTreeSet<usize> = map.values().copied().collect();
    if image.len() != map.len() {
        return false;
    }
    // Functions and relations must translate exactly.
    for (&(ball, blk), &target) in &a.f_bb {
        if b.fbb(map[&ball], blk) != Some(map[&target]) {
            return false;
        }
    }
    if a.f_bb.len() != b.f_bb.len() {
        return false;
    }
    let translated: BTreeSet<TypeRel> = a
        .type_rels
        .iter()
        .map(|r| {
            TypeRel::canonical(
                r.blocks.clone(),
                r.key.clone(),
                r.xs.iter().map(|x| map[x]).collect(),
                r.ys.iter().map(|y| map[y]).collect(),
            )
        })
        .collect();
    translated == b.type_rels
}

/// The set of distances a completion may assign to a pair of originals:
/// the members of the block forced by shared balls, intersected with the
/// inclusion-minimal applicable type.
pub fn block_distance(ctx: &StarContext, st: &StarStructure, u: usize, v: usize) -> Result<Vec<Elem>> {
    let (bd, _, _) = block_distance_full(ctx, st, u, v)?;
    Ok(bd)
}

/// Block-distance plus its provenance: the forced block and the
/// similarity block of the applicable type (equal to the forced block
/// when no type relation applies).
pub fn block_distance_full(
    ctx: &StarContext,
    st: &StarStructure,
    u: usize,
    v: usize,
) -> Result<(Vec<Elem>, BlockId, BlockId)> {
    if u == v {
        return Err(Error::input("block-distance needs two distinct originals"));
    }
    for x in [u, v] {
        if st.vertices[x].kind != VertexKind::Original {
            return Err(Error::input("block-distance is defined on original vertices"));
        }
    }
    let mut shared: Vec<BlockId> = Vec::new();
    for &blk in &ctx.irr_blocks() {
        if let (Some(a), Some(b)) = (st.fb(u, blk), st.fb(v, blk)) {
            if a == b {
                shared.push(blk);
            }
        }
    }
    let forced = ctx.lattice.meet_all(&shared)?;

    // Inclusion-minimal applicable type, if any relation matches the
    // ball tuples of u and v (in either orientation).
    let mut applicable: Vec<&TypeRel> = Vec::new();
    for rel in &st.type_rels {
        let fwd = rel
            .blocks
            .iter()
            .enumerate()
            .all(|(i, &blk)| st.fb(u, blk) == Some(rel.xs[i]) && st.fb(v, blk) == Some(rel.ys[i]));
        let bwd = rel
            .blocks
            .iter()
            .enumerate()
            .all(|(i, &blk)| st.fb(v, blk) == Some(rel.xs[i]) && st.fb(u, blk) == Some(rel.ys[i]));
        if fwd || bwd {
            applicable.push(rel);
        }
    }
    let mut sim_block = forced;
    let members: Vec<Elem> = if applicable.is_empty() {
        ctx.lattice.block(forced).members.clone()
    } else {
        let minimal = applicable
            .iter()
            .find(|r| {
                applicable
                    .iter()
                    .all(|o| r.key.iter().all(|x| o.key.contains(x)))
            })
            .ok_or_else(|| {
                Error::input("inconsistent star structure: no inclusion-minimal type applies")
            })?;
        sim_block = ctx.lattice.meet_all(&minimal.blocks)?;
        let block_members = &ctx.lattice.block(forced).members;
        minimal
            .key
            .iter()
            .copied()
            .filter(|x| block_members.contains(x))
            .collect()
    };
    if members.is_empty() {
        return Err(Error::input(format!(
            "inconsistent star structure: empty block-distance between {:?} and {:?}",
            st.vertices[u].name, st.vertices[v].name
        )));
    }
    Ok((members, forced, sim_block))
}

#[derive(Debug, Clone, Serialize)]
pub struct StarCycleWitness {
    pub vertices: Vec<usize>,
    pub names: Vec<String>,
    pub choices: Vec<Vec<Elem>>,
}

/// Searches for a cyclic arrangement of original vertices whose distance
/// constraints (own distances intersected with block-distances) admit no
/// metric assignment. `None` means no such obstruction up to the budget.
pub fn find_star_cycle(
    ctx: &StarContext,
    st: &StarStructure,
    budget: &PathBudget,
) -> Result<Option<StarCycleWitness>> {
    let originals = st.originals();
    let n = originals.len();
    if n > budget.max_vertices {
        return Err(Error::ResourceLimit {
            what: "star cycle search vertex cap".into(),
            limit: budget.max_vertices,
            reached: n,
        });
    }
    // Constraint set of a pair: defined distance (as singleton) meets the
    // block-distance; an empty set is already an obstruction.
    let constraint = |u: usize, v: usize| -> Result<Vec<Elem>> {
        let bd = block_distance(ctx, st, u, v)?;
        match st.distance(u, v) {
            Some(d) => Ok(if bd.contains(&d) { vec![d] } else { vec![] }),
            None => Ok(bd),
        }
    };
    // Pairs first: every two-vertex arrangement is a cycle on its own.
    for i in 0..n {
        for j in i + 1..n {
            let c = constraint(originals[i], originals[j])?;
            if c.is_empty() {
                return Ok(Some(StarCycleWitness {
                    vertices: vec![originals[i], originals[j]],
                    names: vec![
                        st.vertices[originals[i]].name.clone(),
                        st.vertices[originals[j]].name.clone(),
                    ],
                    choices: vec![c],
                }));
            }
        }
    }
    // Longer cycles: every subset in every cyclic order.
    let s = &ctx.semigroup;
    let mut order: Vec<usize> = Vec::new();
    let mut used = vec![false; n];

    fn assignable(s: &Semigroup, sets: &[Vec<Elem>], budget: usize) -> Result<bool> {
        let mut product = 1usize;
        for set in sets {
            product = product.saturating_mul(set.len());
        }
        if product > budget {
            return Err(Error::ResourceLimit {
                what: "star cycle assignment product".into(),
                limit: budget,
                reached: product,
            });
        }
        fn rec(s: &Semigroup, sets: &[Vec<Elem>], chosen: &mut Vec<Elem>) -> bool {
            if chosen.len() == sets.len() {
                let k = chosen.len();
                return (0..k).all(|i| {
                    let others: Vec<Elem> = (0..k)
                        .filter(|&j| j != i)
                        .map(|j| chosen[j])
                        .collect();
                    s.le(chosen[i], s.fold(&others).unwrap())
                });
            }
            for &x in &sets[chosen.len()] {
                chosen.push(x);
                if rec(s, sets, chosen) {
                    return true;
                }
                chosen.pop();
            }
            false
        }
        let mut chosen = Vec::new();
        Ok(rec(s, sets, &mut chosen))
    }

    #[allow(clippy::too_many_arguments)]
    fn search(
        ctx: &StarContext,
        st: &StarStructure,
        s: &Arc<Semigroup>,
        originals: &[usize],
        order: &mut Vec<usize>,
        used: &mut Vec<bool>,
        k: usize,
        budget: &PathBudget,
    ) -> Result<Option<StarCycleWitness>> {
        if order.len() == k {
            if order[1] > order[k - 1] {
                return Ok(None); // direction canonicalization
            }
            let mut sets = Vec::with_capacity(k);
            for i in 0..k {
                let u = originals[order[i]];
                let v = originals[order[(i + 1) % k]];
                let bd = block_distance(ctx, st, u, v)?;
                let set = match st.distance(u, v) {
                    Some(d) => {
                        if bd.contains(&d) {
                            vec![d]
                        } else {
                            vec![]
                        }
                    }
                    None => bd,
                };
                if set.is_empty() {
                    // Caught by the pair scan already, but stay safe.
                    sets.push(set);
                    break;
                }
                sets.push(set);
            }
            if sets.len() < k || !assignable(s, &sets, budget.max_paths_per_pair)? {
                return Ok(Some(StarCycleWitness {
                    vertices: order.iter().map(|&i| originals[i]).collect(),
                    names: order
                        .iter()
                        .map(|&i| st.vertices[originals[i]].name.clone())
                        .collect(),
                    choices: sets,
                }));
            }
            return Ok(None);
        }
        let start = order[0];
        for next in start + 1..originals.len() {
            if used[next] {
                continue;
            }
            order.push(next);
            used[next] = true;
            let found = search(ctx, st, s, originals, order, used, k, budget)?;
            order.pop();
            used[next] = false;
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }

    for k in 3..=n {
        for first in 0..n {
            order.clear();
            order.push(first);
            used.fill(false);
            used[first] = true;
            if let Some(w) = search(ctx, st, s, &originals, &mut order, &mut used, k, budget)? {
                return Ok(Some(w));
            }
            used[first] = false;
        }
    }
    Ok(None)
}

/// Adds, per orphaned ball of diameter `B`, one original vertex pointing
/// at it, reusing the orphan's own larger balls and creating fresh balls
/// for the blocks not above `B`.
pub fn deorphan(ctx: &StarContext, st: &StarStructure) -> Result<StarStructure> {
    let mut out = st.clone();
    let irr = ctx.irr_blocks();
    let mut counter = 0usize;
    loop {
        let mut orphans = out.orphans();
        if orphans.is_empty() {
            return Ok(out);
        }
        // Smaller-diameter orphans first: fixing them also fixes the
        // larger balls they point at.
        orphans.sort_by_key(|&b| {
            let VertexKind::Ball(blk) = out.vertices[b].kind else {
                unreachable!()
            };
            let below = ctx.lattice.ids().filter(|&c| ctx.lattice.le(c, blk)).count();
            (below, b)
        });
        let orphan = orphans[0];
        let VertexKind::Ball(block) = out.vertices[orphan].kind else {
            unreachable!()
        };
        let mut extra = vec![StarVertex {
            name: format!("o{counter}"),
            kind: VertexKind::Original,
        }];
        let fresh_blocks: Vec<BlockId> = irr
            .iter()
            .copied()
            .filter(|&b| b != block && !ctx.lattice.le(block, b))
            .collect();
        for &b in &fresh_blocks {
            extra.push(StarVertex {
                name: format!("o{counter}b{}", b.0),
                kind: VertexKind::Ball(b),
            });
        }
        counter += 1;
        let added = out.push_vertices(extra);
        let o = added[0];
        let mut ball_for: BTreeMap<BlockId, usize> = BTreeMap::new();
        ball_for.insert(block, orphan);
        for (i, &b) in fresh_blocks.iter().enumerate() {
            ball_for.insert(b, added[i + 1]);
        }
        for &b in &irr {
            if ctx.lattice.lt(block, b) {
                let target = out.fbb(orphan, b).ok_or_else(|| {
                    Error::input(format!(
                        "orphan ball {:?} lacks its function to block {}",
                        out.vertices[orphan].name, b.0
                    ))
                })?;
                ball_for.insert(b, target);
            }
        }
        for &b in &irr {
            out.f_b.insert((o, b), ball_for[&b]);
        }
        // Function links of the fresh balls to everything above them.
        for &b in &fresh_blocks {
            for &b2 in &irr {
                if ctx.lattice.lt(b, b2) {
                    out.f_bb.insert((ball_for[&b], b2), ball_for[&b2]);
                }
            }
        }
    }
}

/// Free amalgam of two star structures over the originals they share by
/// name: shared originals are identified, balls are glued exactly when a
/// shared original points at both, and everything else is kept side by
/// side with no new distances or relations.
pub fn star_free_amalgam(
    ctx: &StarContext,
    st1: &StarStructure,
    st2: &StarStructure,
) -> Result<StarStructure> {
    let o1 = st1.originals();
    let o2 = st2.originals();
    let shared: Vec<(usize, usize)> = o1
        .iter()
        .copied()
        .filter_map(|u| {
            o2.iter()
                .copied()
                .find(|&v| st1.vertices[u].name == st2.vertices[v].name)
                .map(|v| (u, v))
        })
        .collect();
    for &(u1, v1) in &shared {
        for &(u2, v2) in &shared {
            if u1 < u2 && st1.distance(u1, u2) != st2.distance(v1, v2) {
                return Err(Error::input(format!(
                    "shared vertices {:?} and {:?} disagree on their distance",
                    st1.vertices[u1].name, st1.vertices[u2].name
                )));
            }
        }
    }
    let mut out = st1.clone();
    out.order = None;
    // Ball gluing via shared originals.
    let mut map2: BTreeMap<usize, usize> = BTreeMap::new();
    for &(u, v) in &shared {
        map2.insert(v, u);
        for &blk in &ctx.irr_blocks() {
            if let (Some(b1), Some(b2)) = (st1.fb(u, blk), st2.fb(v, blk)) {
                if let Some(&prev) = map2.get(&b2) {
                    if prev != b1 {
                        return Err(Error::input(
                            "shared originals glue the same ball to two different balls",
                        ));
                    }
                } else {
                    map2.insert(b2, b1);
                }
            }
        }
    }
    let fresh: Vec<usize> = (0..st2.vertex_count())
        .filter(|v| !map2.contains_key(v))
        .collect();
    let mut extra = Vec::new();
    for &v in &fresh {
        let mut vert = st2.vertices[v].clone();
        if out.vertices.iter().any(|x| x.name == vert.name) {
            vert.name = format!("{}'", vert.name);
        }
        extra.push(vert);
    }
    let added = out.push_vertices(extra);
    for (&v, &idx) in fresh.iter().zip(&added) {
        map2.insert(v, idx);
    }
    for (i, &u) in o2.iter().enumerate() {
        for &v in o2.iter().skip(i + 1) {
            if let Some(d) = st2.distance(u, v) {
                out.set_distance(map2[&u], map2[&v], d)?;
            }
        }
    }
    for (&(v, blk), &ball) in &st2.f_b {
        let prev = out.f_b.insert((map2[&v], blk), map2[&ball]);
        if prev.is_some_and(|p| p != map2[&ball]) {
            return Err(Error::input("conflicting ball functions in the amalgam"));
        }
    }
    for (&(ball, blk), &target) in &st2.f_bb {
        let prev = out.f_bb.insert((map2[&ball], blk), map2[&target]);
        if prev.is_some_and(|p| p != map2[&target]) {
            return Err(Error::input("conflicting superball functions in the amalgam"));
        }
    }
    for rel in &st2.type_rels {
        out.type_rels.insert(TypeRel::canonical(
            rel.blocks.clone(),
            rel.key.clone(),
            rel.xs.iter().map(|x| map2[x]).collect(),
            rel.ys.iter().map(|y| map2[y]).collect(),
        ));
    }
    Ok(out)
}

/// Structural validity of the pieces: functions where they belong,
/// consistency of the two function layers, distances compatible with
/// ball sharing, and well-formed type relations.
pub fn validate_star(ctx: &StarContext, st: &StarStructure) -> Result<()> {
    let irr = ctx.irr_blocks();
    let n = st.vertex_count();
    for v in 0..n {
        match st.vertices[v].kind {
            VertexKind::Original => {
                for &b in &irr {
                    let ball = st.fb(v, b).ok_or_else(|| {
                        Error::input(format!(
                            "original {:?} lacks its ball for block {}",
                            st.vertices[v].name, b.0
                        ))
                    })?;
                    if st.vertices[ball].kind != VertexKind::Ball(b) {
                        return Err(Error::input(format!(
                            "original {:?} points to a non-ball for block {}",
                            st.vertices[v].name, b.0
                        )));
                    }
                }
            }
            VertexKind::Ball(b) => {
                if !irr.contains(&b) {
                    return Err(Error::input(format!(
                        "ball {:?} has a non-meet-irreducible diameter",
                        st.vertices[v].name
                    )));
                }
                for &b2 in &irr {
                    if ctx.lattice.lt(b, b2) {
                        let target = st.fbb(v, b2).ok_or_else(|| {
                            Error::input(format!(
                                "ball {:?} lacks its function to block {}",
                                st.vertices[v].name, b2.0
                            ))
                        })?;
                        if st.vertices[target].kind != VertexKind::Ball(b2) {
                            return Err(Error::input("ball function targets a wrong block"));
                        }
                    }
                }
            }
        }
    }
    // Layer consistency.
    for (&(v, b), &ball) in &st.f_b {
        for &b2 in &irr {
            if ctx.lattice.lt(b, b2) {
                if st.fbb(ball, b2) != st.fb(v, b2) {
                    return Err(Error::input(format!(
                        "inconsistent functions at original {:?} between blocks {} and {}",
                        st.vertices[v].name, b.0, b2.0
                    )));
                }
            }
        }
    }
    // Distances against ball sharing.
    let originals = st.originals();
    for (i, &u) in originals.iter().enumerate() {
        for &v in originals.iter().skip(i + 1) {
            if let Some(d) = st.distance(u, v) {
                let bd = ctx.lattice.block_of(d);
                for &b in &irr {
                    let same = st.fb(u, b) == st.fb(v, b);
                    if same != ctx.lattice.le(bd, b) {
                        return Err(Error::input(format!(
                            "distance {} between {:?} and {:?} contradicts ball sharing at block {}",
                            ctx.semigroup.name(d),
                            st.vertices[u].name,
                            st.vertices[v].name,
                            b.0
                        )));
                    }
                }
            }
        }
    }
    // Type relations.
    for rel in &st.type_rels {
        if rel.blocks.is_empty()
            || rel.blocks.len() != rel.xs.len()
            || rel.blocks.len() != rel.ys.len()
        {
            return Err(Error::input("malformed type relation"));
        }
        let mut distinct = rel.blocks.clone();
        distinct.dedup();
        if distinct.len() != rel.blocks.len() {
            return Err(Error::input("type relation repeats a block"));
        }
        for (i, &b) in rel.blocks.iter().enumerate() {
            if !irr.contains(&b) {
                return Err(Error::input("type relation uses a non-meet-irreducible block"));
            }
            for &x in [&rel.xs[i], &rel.ys[i]] {
                if x >= n || st.vertices[x].kind != VertexKind::Ball(b) {
                    return Err(Error::input("type relation points at a wrong ball"));
                }
            }
        }
        if rel.xs == rel.ys {
            return Err(Error::input("type relation relates a tuple to itself"));
        }
        let meet = ctx.lattice.meet_all(&rel.blocks)?;
        if ctx.lattice.block(meet).is_zero() || Some(meet) == ctx.lattice.maximum_block {
            return Err(Error::input(
                "type relation block set meets to the bottom or the maximum block",
            ));
        }
        // The key must be one of the computed classes over the meet block.
        let sample = *rel.key.first().ok_or_else(|| Error::input("empty type key"))?;
        if ctx.types.key(meet, sample) != rel.key.as_slice() {
            return Err(Error::input(
                "type relation key is not a distance-type class of its meet block",
            ));
        }
    }
    Ok(())
}

/// Membership in the completable class: valid pieces, family omitted,
/// and no non-metric star cycle.
pub fn check_star_class(
    ctx: &StarContext,
    st: &StarStructure,
    budget: &PathBudget,
) -> Result<()> {
    validate_star(ctx, st)?;
    let g = st.original_graph(&ctx.semigroup);
    if let Some(w) = g.check_forb(&ctx.family)? {
        return Err(Error::ForbViolation {
            cycle: w.cycle.names(&ctx.semigroup),
            image: w.image.iter().map(|&v| g.vertex_name(v).to_string()).collect(),
        });
    }
    if let Some(w) = find_star_cycle(ctx, st, budget)? {
        return Err(Error::StarCycle { vertices: w.names });
    }
    Ok(())
}
