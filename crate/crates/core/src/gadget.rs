//! Block maxima relative to a distance set, important-summand selection,
//! witness gadgets for block-distances, and the completion of star
//! structures.

use crate::blocks::{BlockId, BlockLattice};
use crate::error::{Error, Result};
use crate::graph::{EdgeLabelledGraph, PathBudget};
use crate::semigroup::{Elem, Semigroup};
use crate::star::{
    block_distance_full, check_star_class, deorphan, lift_star, StarContext, StarStructure,
};
use std::collections::BTreeSet;
use std::sync::Arc;

/// Closure of a finite set under `⊕`.
pub fn oplus_closure(s: &Semigroup, set: &[Elem]) -> Vec<Elem> {
    let mut closure: BTreeSet<Elem> = set.iter().copied().collect();
    let mut frontier: Vec<Elem> = closure.iter().copied().collect();
    while let Some(x) = frontier.pop() {
        let known: Vec<Elem> = closure.iter().copied().collect();
        for y in known {
            let z = s.add(x, y);
            if closure.insert(z) {
                frontier.push(z);
            }
        }
    }
    closure.into_iter().collect()
}

/// The maximum useful distance of a block relative to a finite set `S`:
/// an element `m ∈ B` such that for every `ℓ ∈ S` and every sum `e` of
/// elements of `S`, either `e ⊕ m ⪰ ℓ` or no element of `B` helps at all.
///
/// For finite semigroups the block maximum always works, and it lies in
/// the closure of `S` whenever the block meets that closure.
pub fn compute_mus(s: &Semigroup, lattice: &BlockLattice, b: BlockId, _set: &[Elem]) -> Result<Elem> {
    if lattice.block(b).is_zero() {
        return Err(Error::input("the bottom block has no elements"));
    }
    lattice.block_max(s, b)
}

/// The dichotomy the chosen element must satisfy. Any element of the
/// block passing this check is a valid choice.
pub fn validate_mus(
    s: &Semigroup,
    lattice: &BlockLattice,
    b: BlockId,
    set: &[Elem],
    candidate: Elem,
) -> bool {
    if lattice.block_of(candidate) != b {
        return false;
    }
    let closure = oplus_closure(s, set);
    for &l in set {
        for &e in &closure {
            if s.le(l, s.add(e, candidate)) {
                continue;
            }
            if lattice.block(b).members.iter().any(|&x| s.le(l, s.add(e, x))) {
                return false;
            }
        }
    }
    true
}

/// Smallest `n ≥ 1` with `n × a ⪰ target`; both must share a block.
fn multiples_to_reach(s: &Semigroup, a: Elem, target: Elem) -> Result<usize> {
    let mut seen = vec![false; s.len()];
    let mut cur = a;
    let mut n = 1usize;
    loop {
        if s.le(target, cur) {
            return Ok(n);
        }
        if seen[cur.0] {
            return Err(Error::input(format!(
                "no multiple of {} dominates {}",
                s.name(a),
                s.name(target)
            )));
        }
        seen[cur.0] = true;
        cur = s.add(cur, a);
        n += 1;
    }
}

#[derive(Debug, Clone)]
pub struct ImportantSubsequence {
    pub kept: Vec<Elem>,
    pub kept_positions: Vec<usize>,
    pub bound: usize,
}

/// Selects the important entries of a sequence: per-block accumulators
/// keep summands until they reach the block's maximum useful distance,
/// guaranteeing at most `Σ_s n_s` survivors while preserving
/// `ℓ ⪯̸ (sum)` against arbitrary replacements of the dropped entries.
pub fn important_subsequence(
    s: &Semigroup,
    lattice: &BlockLattice,
    l: Elem,
    seq: &[Elem],
    set: &[Elem],
) -> Result<ImportantSubsequence> {
    if !set.contains(&l) {
        return Err(Error::input("the target must belong to the distance set"));
    }
    if let Some(&bad) = seq.iter().find(|e| !set.contains(e)) {
        return Err(Error::input(format!(
            "sequence entry {} is outside the distance set",
            s.name(bad)
        )));
    }
    if seq.is_empty() {
        return Err(Error::input("sequence must be nonempty"));
    }
    let total = s.fold(seq)?;
    if s.le(l, total) {
        return Err(Error::input(
            "the target is below the sequence sum; nothing to witness",
        ));
    }
    let mut bound = 0usize;
    for &x in set {
        let mus = compute_mus(s, lattice, lattice.block_of(x), set)?;
        bound += multiples_to_reach(s, x, mus)?;
    }
    let mut acc: Vec<Option<Elem>> = vec![None; lattice.blocks.len()];
    let mut kept = Vec::new();
    let mut kept_positions = Vec::new();
    for (pos, &e) in seq.iter().enumerate() {
        let blk = lattice.block_of(e);
        let mus = compute_mus(s, lattice, blk, set)?;
        let saturated = matches!(acc[blk.0], Some(c) if s.le(mus, c));
        if saturated {
            continue;
        }
        kept.push(e);
        kept_positions.push(pos);
        acc[blk.0] = Some(match acc[blk.0] {
            None => e,
            Some(c) => s.add(c, e),
        });
    }
    Ok(ImportantSubsequence {
        kept,
        kept_positions,
        bound,
    })
}

/// A constraint on one missing pair: the distance must come from
/// `members` (a subset of one block), certified by witnesses tied to
/// `sim_block`-balls.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct GadgetType {
    pub sim_block: BlockId,
    pub members: Vec<Elem>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Gadget {
    /// Length of the two outer edges; `None` when the similarity block is
    /// the bottom block and the gadget degenerates to the direct edge.
    pub a: Option<Elem>,
    /// Length of the middle edge, drawn from the constraint set.
    pub b: Elem,
}

/// Chooses the witness-gadget distances for each constraint: the middle
/// edge `b(t)` comes from the constraint set (inside the closure of `S`
/// and dominating the block's useful maximum when possible, otherwise
/// the largest constraint member), and the outer edges are
/// `q × mus(sim_block, S')` with `q` the longest family member over the
/// extended label set.
pub fn witness_gadgets(
    s: &Semigroup,
    lattice: &BlockLattice,
    family: &crate::cycle::FamilySpec,
    types: &[GadgetType],
    base_set: &[Elem],
) -> Result<Vec<Gadget>> {
    // Hypothesis: the distance set must meet every non-bottom block and
    // every constraint set.
    let mut set: Vec<Elem> = base_set.to_vec();
    let mut missing = Vec::new();
    for blk in lattice.ids() {
        if lattice.block(blk).is_zero() {
            continue;
        }
        if !set.iter().any(|&x| lattice.block_of(x) == blk) {
            missing.push(format!("block {}", blk.0));
            set.push(lattice.block_max(s, blk)?);
        }
    }
    for t in types {
        if !set.iter().any(|x| t.members.contains(x)) {
            missing.push(format!(
                "type {{{}}}",
                s.names(&t.members).join(",")
            ));
            set.push(*t.members.last().unwrap());
        }
    }
    let _ = missing; // the hypothesis is repaired by extension, not an error
    set.sort();
    set.dedup();

    let closure = oplus_closure(s, &set);
    let mut bs = Vec::with_capacity(types.len());
    for t in types {
        if t.members.is_empty() {
            return Err(Error::input("empty constraint set"));
        }
        let value_block = lattice.block_of(t.members[0]);
        let mus = compute_mus(s, lattice, value_block, &set)?;
        let choice = t
            .members
            .iter()
            .copied()
            .find(|&x| closure.contains(&x) && s.le(mus, x));
        let b = match choice {
            Some(x) => x,
            None => {
                // Fall back to the ⪯-largest member; error when none exists.
                t.members
                    .iter()
                    .copied()
                    .find(|&m| t.members.iter().all(|&o| s.le(o, m)))
                    .ok_or_else(|| {
                        Error::input(format!(
                            "constraint {{{}}} has no ⪯-largest member to fall back to",
                            s.names(&t.members).join(",")
                        ))
                    })?
            }
        };
        bs.push(b);
    }

    let mut extended = set.clone();
    extended.extend(bs.iter().copied());
    extended.sort();
    extended.dedup();
    let q = family
        .enumerate(s, longest_family_member_cap(family), Some(&extended))?
        .max_len()
        .max(1);

    let mut out = Vec::with_capacity(types.len());
    for (t, &b) in types.iter().zip(&bs) {
        if lattice.block(t.sim_block).is_zero() {
            out.push(Gadget { a: None, b });
            continue;
        }
        let mus = compute_mus(s, lattice, t.sim_block, &extended)?;
        let a = s.scalar_multiple(mus, q)?;
        out.push(Gadget { a: Some(a), b });
    }
    Ok(out)
}

fn longest_family_member_cap(family: &crate::cycle::FamilySpec) -> usize {
    match family {
        crate::cycle::FamilySpec::Finite(f) => f.max_len(),
        crate::cycle::FamilySpec::OddPerimeterBelow { p } => *p as usize,
    }
}

/// Completes a star structure: after the class checks and orphan removal,
/// every missing original pair gets a witness gadget realizing its
/// block-distance, the resulting graph is closed by the shortest-path
/// completion, and the completed space is expanded again.
pub fn complete_star(
    ctx: &StarContext,
    st: &StarStructure,
    budget: &PathBudget,
) -> Result<StarStructure> {
    check_star_class(ctx, st, budget)?;
    let de = deorphan(ctx, st)?;
    let originals = de.originals();
    let base = de.original_graph(&ctx.semigroup);
    let s = &ctx.semigroup;

    // Distances already present, extended to hit every block.
    let mut base_set: Vec<Elem> = base.edges().iter().map(|&(_, _, l)| l).collect();
    base_set.sort();
    base_set.dedup();

    // Constraints of the missing pairs.
    let mut pairs = Vec::new();
    let mut types: Vec<GadgetType> = Vec::new();
    for i in 0..originals.len() {
        for j in i + 1..originals.len() {
            if base.label(i, j).is_some() {
                continue;
            }
            let (members, _forced, sim_block) =
                block_distance_full(ctx, &de, originals[i], originals[j])?;
            let t = GadgetType { sim_block, members };
            let idx = match types.iter().position(|x| *x == t) {
                Some(k) => k,
                None => {
                    types.push(t);
                    types.len() - 1
                }
            };
            pairs.push((i, j, idx));
        }
    }
    let gadgets = witness_gadgets(s, &ctx.lattice, &ctx.family, &types, &base_set)?;

    let mut names: Vec<String> = base.vertex_names().to_vec();
    let mut edges: Vec<(usize, usize, Elem)> = base.edges();
    for (k, &(i, j, t)) in pairs.iter().enumerate() {
        let g = gadgets[t];
        match g.a {
            None => edges.push((i, j, g.b)),
            Some(a) => {
                let x = names.len();
                names.push(format!("g{k}x"));
                let y = names.len();
                names.push(format!("g{k}y"));
                edges.push((i, x, a));
                edges.push((x, y, g.b));
                edges.push((y, j, a));
            }
        }
    }
    let mut gadgeted = EdgeLabelledGraph::new(Arc::clone(s), names);
    for (u, v, l) in edges {
        gadgeted.add_edge(u, v, l)?;
    }
    let completion_budget = PathBudget {
        max_vertices: gadgeted.vertex_count().max(budget.max_vertices),
        max_paths_per_pair: budget.max_paths_per_pair,
    };
    let completed = gadgeted.shortest_path_completion(&ctx.family, &completion_budget)?;
    let lifted = lift_star(ctx, &completed)?;
    verify_completion(ctx, &de, &lifted)?;
    if let Some(order) = &st.order {
        // Orders are completed separately; keep the reduct order-free.
        let _ = order;
    }
    Ok(lifted)
}

/// The expanded completion must embed the input: distances preserved,
/// distinct balls kept distinct, functions and relations carried over.
fn verify_completion(
    ctx: &StarContext,
    small: &StarStructure,
    big: &StarStructure,
) -> Result<()> {
    let originals = small.originals();
    let big_originals = big.originals();
    // Originals map by name (the completion keeps them first).
    let mut orig_map = Vec::with_capacity(originals.len());
    for &u in &originals {
        let name = &small.vertices[u].name;
        let target = big_originals
            .iter()
            .copied()
            .find(|&v| &big.vertices[v].name == name)
            .ok_or_else(|| Error::Internal(format!("completion lost original {name:?}")))?;
        orig_map.push(target);
    }
    for (i, &u) in originals.iter().enumerate() {
        for (j, &v) in originals.iter().enumerate().skip(i + 1) {
            if let Some(d) = small.distance(u, v) {
                if big.distance(orig_map[i], orig_map[j]) != Some(d) {
                    return Err(Error::Internal(
                        "completion changed an existing distance".into(),
                    ));
                }
            }
        }
    }
    let mut ball_map: std::collections::BTreeMap<usize, usize> = Default::default();
    for (i, &u) in originals.iter().enumerate() {
        for &blk in &ctx.irr_blocks() {
            let (Some(a), Some(b)) = (small.fb(u, blk), big.fb(orig_map[i], blk)) else {
                return Err(Error::Internal("completion lost a ball function".into()));
            };
            if let Some(&prev) = ball_map.get(&a) {
                if prev != b {
                    return Err(Error::Internal("completion split a ball".into()));
                }
            } else {
                ball_map.insert(a, b);
            }
        }
    }
    let distinct: BTreeSet<usize> = ball_map.values().copied().collect();
    if distinct.len() != ball_map.len() {
        return Err(Error::Internal("completion glued distinct balls".into()));
    }
    Ok(())
}
