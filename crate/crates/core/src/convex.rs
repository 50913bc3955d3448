//! Convex orderings of metric spaces: per-block partial orders encoding
//! linear orders of balls, the derived ball orders, the ordered expansion
//! and its inverse, and order completion.

use crate::blocks::{BlockId, BlockLattice};
use crate::error::{Error, Result};
use crate::graph::{EdgeLabelledGraph, PathBudget};
use crate::gadget::complete_star;
use crate::star::{ball_partition, lift_star, StarContext, StarStructure, VertexKind};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

/// A metric space together with, for each meet-irreducible block `B`, a
/// partial order `≤ᴮ` defined on a pair exactly when the two points lie
/// in different `B`-balls but in a common ball of every larger block.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexOrderedSpace {
    pub base: EdgeLabelledGraph,
    /// Directed pairs per meet-irreducible block id.
    pub orders: BTreeMap<BlockId, BTreeSet<(usize, usize)>>,
}

/// A fixed linear order of blocks refining the reversed block order:
/// larger blocks come first, the bottom block last.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockTieBreak {
    /// Block ids from first to last.
    pub sequence: Vec<BlockId>,
}

impl BlockTieBreak {
    /// Default choice: decreasing height in the block order, ties by the
    /// smallest member element, bottom block last.
    pub fn default_for(lattice: &BlockLattice) -> Self {
        let up_chain = |b: BlockId| -> usize {
            // Longest strictly increasing chain starting at b.
            fn rec(lattice: &BlockLattice, b: BlockId, memo: &mut BTreeMap<BlockId, usize>) -> usize {
                if let Some(&v) = memo.get(&b) {
                    return v;
                }
                let best = lattice
                    .ids()
                    .filter(|&c| lattice.lt(b, c))
                    .map(|c| 1 + rec(lattice, c, memo))
                    .max()
                    .unwrap_or(0);
                memo.insert(b, best);
                best
            }
            let mut memo = BTreeMap::new();
            rec(lattice, b, &mut memo)
        };
        let mut ids: Vec<BlockId> = lattice.ids().collect();
        ids.sort_by_key(|&b| {
            let min_member = lattice
                .block(b)
                .members
                .first()
                .map(|e| e.0)
                .unwrap_or(usize::MAX);
            (up_chain(b), min_member)
        });
        BlockTieBreak { sequence: ids }
    }

    pub fn position(&self, b: BlockId) -> usize {
        self.sequence.iter().position(|&x| x == b).unwrap_or(usize::MAX)
    }

    pub fn validate(&self, lattice: &BlockLattice) -> Result<()> {
        for &a in &self.sequence {
            for &b in &self.sequence {
                if lattice.lt(b, a) && self.position(a) > self.position(b) {
                    return Err(Error::input(
                        "tie-break order must list larger blocks before smaller ones",
                    ));
                }
            }
        }
        if self.sequence.len() != lattice.blocks.len() {
            return Err(Error::input("tie-break order must list every block"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OrderViolation {
    pub block: BlockId,
    pub rule: String,
    pub witness: Vec<String>,
}

impl ConvexOrderedSpace {
    pub fn unordered(base: EdgeLabelledGraph) -> Self {
        ConvexOrderedSpace {
            base,
            orders: BTreeMap::new(),
        }
    }

    fn le(&self, b: BlockId, u: usize, v: usize) -> bool {
        self.orders.get(&b).is_some_and(|set| set.contains(&(u, v)))
    }
}

fn same_ball(parts: &[Vec<usize>], u: usize, v: usize) -> bool {
    parts.iter().any(|p| p.contains(&u) && p.contains(&v))
}

/// Checks the two defining conditions of a convex order, per block.
pub fn validate_convex_order(
    ctx: &StarContext,
    a: &ConvexOrderedSpace,
) -> Result<Vec<OrderViolation>> {
    if !a.base.is_metric_space() {
        return Err(Error::input("the base must be a complete metric space"));
    }
    let mut out = Vec::new();
    let irr: Vec<BlockId> = ctx
        .lattice
        .meet_irreducibles
        .iter()
        .copied()
        .collect();
    for b in a.orders.keys() {
        if !irr.contains(b) {
            out.push(OrderViolation {
                block: *b,
                rule: "orders exist only for meet-irreducible blocks".into(),
                witness: vec![],
            });
        }
    }
    let n = a.base.vertex_count();
    let name = |v: usize| a.base.vertex_name(v).to_string();
    for &b in &irr {
        let parts = ball_partition(&a.base, &ctx.lattice, b);
        let bigger: Vec<Vec<Vec<usize>>> = ctx
            .lattice
            .ids()
            .filter(|&c| ctx.lattice.lt(b, c))
            .map(|c| ball_partition(&a.base, &ctx.lattice, c))
            .collect();
        for u in 0..n {
            for v in 0..n {
                if u == v {
                    continue;
                }
                let should = !same_ball(&parts, u, v)
                    && bigger.iter().all(|p| same_ball(p, u, v));
                let fwd = a.le(b, u, v);
                let bwd = a.le(b, v, u);
                if should && !(fwd ^ bwd) {
                    out.push(OrderViolation {
                        block: b,
                        rule: "pair must be ordered in exactly one direction".into(),
                        witness: vec![name(u), name(v)],
                    });
                }
                if !should && (fwd || bwd) {
                    out.push(OrderViolation {
                        block: b,
                        rule: "pair must not be ordered".into(),
                        witness: vec![name(u), name(v)],
                    });
                }
                // Class invariance in the left argument.
                if fwd {
                    for w in 0..n {
                        if w != v && same_ball(&parts, u, w) && !a.le(b, w, v) {
                            out.push(OrderViolation {
                                block: b,
                                rule: "order must be invariant on the ball of the left argument"
                                    .into(),
                                witness: vec![name(u), name(w), name(v)],
                            });
                        }
                    }
                }
            }
        }
        // Partial order axioms on the domain.
        if let Some(set) = a.orders.get(&b) {
            for &(u, v) in set {
                if set.contains(&(v, u)) {
                    out.push(OrderViolation {
                        block: b,
                        rule: "antisymmetry".into(),
                        witness: vec![name(u), name(v)],
                    });
                }
            }
        }
    }
    Ok(out)
}

/// The linear orders of balls derived from a convex order:
/// meet-reducible blocks order lexicographically through their canonical
/// meet pair, meet-irreducible blocks read `≤ᴮ` inside each ball of the
/// successor block and inherit the successor order across them.
pub fn derived_ball_orders(
    ctx: &StarContext,
    a: &ConvexOrderedSpace,
    tb: &BlockTieBreak,
) -> Result<BTreeMap<BlockId, Vec<Vec<usize>>>> {
    tb.validate(&ctx.lattice)?;
    let violations = validate_convex_order(ctx, a)?;
    if let Some(v) = violations.first() {
        return Err(Error::input(format!(
            "invalid convex order at block {}: {} ({:?})",
            v.block.0, v.rule, v.witness
        )));
    }
    let lattice = &ctx.lattice;
    // Process blocks from the maximum downwards.
    let mut order_of: BTreeMap<BlockId, Vec<Vec<usize>>> = BTreeMap::new();
    let mut ids: Vec<BlockId> = lattice.ids().collect();
    ids.sort_by_key(|&b| tb.position(b));
    for &b in &ids {
        let parts = ball_partition(&a.base, lattice, b);
        if Some(b) == lattice.maximum_block {
            order_of.insert(b, parts);
            continue;
        }
        let mut sorted = parts.clone();
        if lattice.meet_reducibles.contains(&b) {
            // Canonical pair: the tie-break-lexicographically smallest
            // pair of other blocks meeting to b.
            let mut best: Option<(BlockId, BlockId)> = None;
            for &b1 in &ids {
                for &b2 in &ids {
                    if b1 != b && b2 != b && lattice.meet(b1, b2) == Some(b) {
                        let cand = (b1, b2);
                        if best.is_none()
                            || (tb.position(cand.0), tb.position(cand.1))
                                < (tb.position(best.unwrap().0), tb.position(best.unwrap().1))
                        {
                            best = Some(cand);
                        }
                    }
                }
            }
            let (b1, b2) = best.ok_or_else(|| {
                Error::Internal("meet-reducible block without a meet pair".into())
            })?;
            let pos = |orders: &Vec<Vec<usize>>, v: usize| {
                orders.iter().position(|ball| ball.contains(&v)).unwrap()
            };
            let o1 = order_of[&b1].clone();
            let o2 = order_of[&b2].clone();
            sorted.sort_by_key(|ball| (pos(&o1, ball[0]), pos(&o2, ball[0])));
        } else {
            // Within a successor ball the input order decides; across
            // successor balls the successor order decides.
            let succ = lattice.successor(b)?;
            let succ_order = order_of
                .get(&succ)
                .ok_or_else(|| Error::Internal("successor processed out of order".into()))?;
            let spos = |v: usize| {
                succ_order
                    .iter()
                    .position(|ball| ball.contains(&v))
                    .unwrap()
            };
            let mut err = None;
            sorted.sort_by(|x, y| {
                let (sx, sy) = (spos(x[0]), spos(y[0]));
                if sx != sy {
                    return sx.cmp(&sy);
                }
                if a.le(b, x[0], y[0]) {
                    std::cmp::Ordering::Less
                } else if a.le(b, y[0], x[0]) {
                    std::cmp::Ordering::Greater
                } else {
                    err = Some(format!(
                        "balls of block {} in one successor ball are unordered",
                        b.0
                    ));
                    std::cmp::Ordering::Equal
                }
            });
            if let Some(e) = err {
                return Err(Error::Internal(e));
            }
        }
        order_of.insert(b, sorted);
    }
    // Linearity check: derived orders are total by construction; verify
    // they are genuine orders of the balls.
    for (b, balls) in &order_of {
        let expect = ball_partition(&a.base, lattice, *b).len();
        if balls.len() != expect {
            return Err(Error::Internal(format!(
                "derived order of block {} lost a ball",
                b.0
            )));
        }
    }
    Ok(order_of)
}

/// Expands a convexly ordered space: the plain expansion of the reduct
/// plus one linear order putting originals first (by the derived vertex
/// order) and ball vertices after (by block, then by ball order).
pub fn lift_ordered(
    ctx: &StarContext,
    a: &ConvexOrderedSpace,
    tb: &BlockTieBreak,
) -> Result<StarStructure> {
    let orders = derived_ball_orders(ctx, a, tb)?;
    let mut st = lift_star(ctx, &a.base)?;
    let zero_order = &orders[&ctx.lattice.zero()];
    let mut sequence: Vec<usize> = Vec::with_capacity(st.vertex_count());
    let originals = st.originals();
    for ball in zero_order {
        // Bottom-block balls are singleton vertices.
        sequence.push(originals[ball[0]]);
    }
    let mut balls: Vec<usize> = st.balls();
    let ball_pos = |idx: usize, st: &StarStructure| -> (usize, usize) {
        let VertexKind::Ball(b) = st.vertices[idx].kind else {
            unreachable!()
        };
        // Position of this ball in the derived order of its block.
        let members: Vec<usize> = originals
            .iter()
            .enumerate()
            .filter(|&(_, &o)| st.fb(o, b) == Some(idx))
            .map(|(i, _)| i)
            .collect();
        let pos = orders[&b]
            .iter()
            .position(|ball| members.iter().all(|m| ball.contains(m)) && !members.is_empty())
            .unwrap_or(usize::MAX);
        (tb.position(b), pos)
    };
    balls.sort_by_key(|&idx| ball_pos(idx, &st));
    sequence.extend(balls);
    st.order = Some(sequence);
    Ok(st)
}

/// Reconstructs the convex order from an ordered expansion: `u ≤ᴮ v` iff
/// the two lie in different `B`-balls, in common larger balls, and `u`'s
/// ball vertex comes first in the linear order.
pub fn drop_ordered(ctx: &StarContext, st: &StarStructure) -> Result<ConvexOrderedSpace> {
    let order = st
        .order
        .as_ref()
        .ok_or_else(|| Error::input("structure carries no linear order"))?;
    if order.len() != st.vertex_count() {
        return Err(Error::input("linear order must list every vertex"));
    }
    let base = crate::star::drop_star(ctx, st)?;
    let position: BTreeMap<usize, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let originals = st.originals();
    let mut orders: BTreeMap<BlockId, BTreeSet<(usize, usize)>> = BTreeMap::new();
    let irr: Vec<BlockId> = ctx.lattice.meet_irreducibles.to_vec();
    for &b in &irr {
        let mut set = BTreeSet::new();
        let parts = ball_partition(&base, &ctx.lattice, b);
        let bigger: Vec<Vec<Vec<usize>>> = ctx
            .lattice
            .ids()
            .filter(|&c| ctx.lattice.lt(b, c))
            .map(|c| ball_partition(&base, &ctx.lattice, c))
            .collect();
        for (i, &u) in originals.iter().enumerate() {
            for (j, &v) in originals.iter().enumerate() {
                if i == j {
                    continue;
                }
                if same_ball(&parts, i, j) || !bigger.iter().all(|p| same_ball(p, i, j)) {
                    continue;
                }
                let before = if ctx.lattice.block(b).is_zero() {
                    position[&u] < position[&v]
                } else {
                    let (Some(bu), Some(bv)) = (st.fb(u, b), st.fb(v, b)) else {
                        return Err(Error::input("original lacks a ball vertex"));
                    };
                    position[&bu] < position[&bv]
                };
                if before {
                    set.insert((i, j));
                }
            }
        }
        if !set.is_empty() {
            orders.insert(b, set);
        }
    }
    Ok(ConvexOrderedSpace { base, orders })
}

/// Completes a partially ordered star structure: the reduct is completed
/// by the gadget pipeline, then a linear order extending the input is
/// rebuilt by the lexicographic rules (originals by their ball-vertex
/// sequences, balls by block and their own function sequences).
pub fn complete_ordered(
    ctx: &StarContext,
    st: &StarStructure,
    extension: Option<&[usize]>,
    budget: &PathBudget,
) -> Result<StarStructure> {
    let base_order: Vec<usize> = match (&st.order, extension) {
        (_, Some(ext)) => {
            // The supplied extension must be a linear order of the input
            // vertices extending the input order.
            let mut seen = vec![false; st.vertex_count()];
            for &v in ext {
                if v >= st.vertex_count() || seen[v] {
                    return Err(Error::input("extension is not a permutation of the vertices"));
                }
                seen[v] = true;
            }
            if !seen.iter().all(|&x| x) {
                return Err(Error::input("extension must list every vertex"));
            }
            if let Some(order) = &st.order {
                let pos: BTreeMap<usize, usize> =
                    ext.iter().enumerate().map(|(i, &v)| (v, i)).collect();
                for w in order.windows(2) {
                    if pos[&w[0]] > pos[&w[1]] {
                        return Err(Error::input(
                            "extension does not extend the structure's order",
                        ));
                    }
                }
            }
            ext.to_vec()
        }
        (Some(order), None) => order.clone(),
        (None, None) => (0..st.vertex_count()).collect(),
    };

    let mut reduct = st.clone();
    reduct.order = None;
    let completed = complete_star(ctx, &reduct, budget)?;

    // Positions of the input vertices; fresh vertices follow by index.
    let originals = completed.originals();
    let small_names: BTreeMap<&str, usize> = base_order
        .iter()
        .enumerate()
        .map(|(i, &v)| (st.vertices[v].name.as_str(), i))
        .collect();
    let rank0 = |v: usize, completed: &StarStructure| -> (usize, usize) {
        match small_names.get(completed.vertices[v].name.as_str()) {
            Some(&i) => (0, i),
            None => (1, v),
        }
    };

    let tb = BlockTieBreak::default_for(&ctx.lattice);
    let irr = ctx.irr_blocks();
    let mut irr_sorted = irr.clone();
    irr_sorted.sort_by_key(|&b| tb.position(b));

    // Originals first, ordered lexicographically by their ball sequence
    // under the base order, then by the base order.
    let key_orig = |&u: &usize| -> (Vec<(usize, usize)>, (usize, usize)) {
        let seq: Vec<(usize, usize)> = irr_sorted
            .iter()
            .map(|&b| rank0(completed.fb(u, b).unwrap(), &completed))
            .collect();
        (seq, rank0(u, &completed))
    };
    let mut ordered: Vec<usize> = originals.clone();
    ordered.sort_by_key(key_orig);

    let mut balls = completed.balls();
    let key_ball = |&v: &usize| -> (usize, Vec<(usize, usize)>, (usize, usize)) {
        let VertexKind::Ball(b) = completed.vertices[v].kind else {
            unreachable!()
        };
        let seq: Vec<(usize, usize)> = irr_sorted
            .iter()
            .filter(|&&b2| ctx.lattice.lt(b, b2))
            .map(|&b2| rank0(completed.fbb(v, b2).unwrap(), &completed))
            .collect();
        (tb.position(b), seq, rank0(v, &completed))
    };
    balls.sort_by_key(key_ball);
    ordered.extend(balls);

    let mut out = completed;
    out.order = Some(ordered);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycle::FamilySpec;
    use crate::fixtures;
    use std::sync::Arc;

    fn space(
        s: &Arc<crate::semigroup::Semigroup>,
        n: usize,
        edges: &[(usize, usize, &str)],
    ) -> EdgeLabelledGraph {
        let mut g = EdgeLabelledGraph::with_size(Arc::clone(s), n);
        for &(u, v, l) in edges {
            g.add_edge(u, v, s.elem_by_name(l).unwrap()).unwrap();
        }
        g
    }

    #[test]
    fn archimedean_needs_only_the_vertex_order() {
        // One non-bottom block: only ≤ at the bottom block is populated,
        // and it must be a linear order of the vertices.
        let z5 = Arc::new(fixtures::zk(5));
        let ctx = StarContext::new(Arc::clone(&z5), FamilySpec::empty()).unwrap();
        let g = space(&z5, 3, &[(0, 1, "1"), (1, 2, "1"), (0, 2, "2")]);
        let zero = ctx.lattice.zero();
        let mut orders = BTreeMap::new();
        orders.insert(
            zero,
            [(0usize, 1usize), (1, 2), (0, 2)].into_iter().collect(),
        );
        let a = ConvexOrderedSpace { base: g, orders };
        assert!(validate_convex_order(&ctx, &a).unwrap().is_empty());
    }

    #[test]
    fn bottom_order_on_distant_pair_is_invalid() {
        let dt2 = Arc::new(fixtures::dt(2));
        let ctx = StarContext::new(Arc::clone(&dt2), FamilySpec::empty()).unwrap();
        let g = space(&dt2, 2, &[(0, 1, "(1,0,0)")]);
        let zero = ctx.lattice.zero();
        let mut orders = BTreeMap::new();
        orders.insert(zero, [(0usize, 1usize)].into_iter().collect());
        let a = ConvexOrderedSpace { base: g, orders };
        let violations = validate_convex_order(&ctx, &a).unwrap();
        assert!(violations
            .iter()
            .any(|v| v.rule == "pair must not be ordered"));
    }

    #[test]
    fn empty_space_is_valid() {
        let z5 = Arc::new(fixtures::zk(5));
        let ctx = StarContext::new(Arc::clone(&z5), FamilySpec::empty()).unwrap();
        let g = EdgeLabelledGraph::with_size(Arc::clone(&z5), 0);
        let a = ConvexOrderedSpace::unordered(g);
        assert!(validate_convex_order(&ctx, &a).unwrap().is_empty());
    }

    #[test]
    fn ordered_round_trip() {
        let u2 = Arc::new(fixtures::un(2));
        let ctx = StarContext::new(Arc::clone(&u2), FamilySpec::empty()).unwrap();
        let tb = BlockTieBreak::default_for(&ctx.lattice);
        let g = space(&u2, 2, &[(0, 1, "1")]);
        let zero = ctx.lattice.zero();
        let mut orders = BTreeMap::new();
        orders.insert(zero, [(0usize, 1usize)].into_iter().collect());
        let a = ConvexOrderedSpace { base: g, orders };
        let st = lift_ordered(&ctx, &a, &tb).unwrap();
        // Order: the two originals by the vertex order, then the shared
        // ball vertex and the top-block ball (if meet-irreducible).
        let order = st.order.clone().unwrap();
        assert_eq!(&order[..2], &[0, 1]);
        let back = drop_ordered(&ctx, &st).unwrap();
        assert_eq!(back, a);
    }
}
