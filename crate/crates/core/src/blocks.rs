//! Block structure of a partially ordered commutative semigroup.
//!
//! A block is a maximal archimedean subsemigroup; together with the
//! synthetic bottom block `𝟎` (block id 0, empty member set) the blocks
//! partition the elements. The induced order on blocks carries partial
//! meet/join tables and the meet-irreducible / meet-reducible split.

use crate::error::{Error, Result};
use crate::semigroup::{Elem, Semigroup};
use serde::Serialize;

/// Identifier of a block inside a [`BlockLattice`]. Id 0 is always `𝟎`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct BlockId(pub usize);

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Block {
    pub id: BlockId,
    /// Empty exactly for the synthetic bottom block.
    pub members: Vec<Elem>,
}

impl Block {
    pub fn is_zero(&self) -> bool {
        self.members.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockLattice {
    pub blocks: Vec<Block>,
    /// `block_leq[i][j]` iff block i ⪯ block j.
    pub block_leq: Vec<Vec<bool>>,
    /// Partial meet table; `None` where no greatest lower bound exists.
    pub meet_table: Vec<Vec<Option<BlockId>>>,
    /// Partial join table; always total for finite semigroups but kept
    /// partial for symmetry with meets.
    pub join_table: Vec<Vec<Option<BlockId>>>,
    /// Non-maximal meet-irreducible blocks.
    pub meet_irreducibles: Vec<BlockId>,
    /// Non-maximal meet-reducible blocks.
    pub meet_reducibles: Vec<BlockId>,
    pub maximum_block: Option<BlockId>,
    pub is_lattice: bool,
    pub is_distributive: bool,
    /// Block containing each element.
    pub block_of: Vec<BlockId>,
}

impl BlockLattice {
    pub fn zero(&self) -> BlockId {
        BlockId(0)
    }

    pub fn block(&self, id: BlockId) -> &Block {
        &self.blocks[id.0]
    }

    pub fn block_of(&self, a: Elem) -> BlockId {
        self.block_of[a.0]
    }

    pub fn le(&self, a: BlockId, b: BlockId) -> bool {
        self.block_leq[a.0][b.0]
    }

    pub fn lt(&self, a: BlockId, b: BlockId) -> bool {
        a != b && self.le(a, b)
    }

    pub fn meet(&self, a: BlockId, b: BlockId) -> Option<BlockId> {
        self.meet_table[a.0][b.0]
    }

    pub fn join(&self, a: BlockId, b: BlockId) -> Option<BlockId> {
        self.join_table[a.0][b.0]
    }

    pub fn ids(&self) -> impl Iterator<Item = BlockId> {
        (0..self.blocks.len()).map(BlockId)
    }

    /// Meet of a set of blocks, where the empty meet is the maximum block.
    pub fn meet_all(&self, ids: &[BlockId]) -> Result<BlockId> {
        match ids.split_first() {
            None => self
                .maximum_block
                .ok_or_else(|| Error::Internal("no maximum block".into())),
            Some((&first, rest)) => rest.iter().try_fold(first, |acc, &b| {
                self.meet(acc, b).ok_or_else(|| {
                    Error::input(format!("meet of blocks {} and {} undefined", acc.0, b.0))
                })
            }),
        }
    }

    /// The `⪯`-maximum member of a non-`𝟎` block (the fold of its members).
    pub fn block_max(&self, s: &Semigroup, id: BlockId) -> Result<Elem> {
        s.fold(&self.block(id).members)
            .map_err(|_| Error::input("the bottom block has no members"))
    }

    /// Members of every block `⪯ id`, i.e. all distances that fit inside
    /// a ball of diameter `id`.
    pub fn elements_below(&self, id: BlockId) -> Vec<Elem> {
        let mut out: Vec<Elem> = self
            .ids()
            .filter(|&b| self.le(b, id))
            .flat_map(|b| self.block(b).members.iter().copied())
            .collect();
        out.sort();
        out
    }

    /// Decomposes a block as a meet of meet-irreducible blocks.
    ///
    /// Returns the empty set exactly for the maximum block and `{B}` for a
    /// meet-irreducible block; otherwise all meet-irreducibles above `b`
    /// (their meet equals `b` whenever all pairwise meets are defined).
    pub fn meet_decompose(&self, b: BlockId) -> Result<Vec<BlockId>> {
        if Some(b) == self.maximum_block {
            return Ok(vec![]);
        }
        if self.meet_irreducibles.contains(&b) {
            return Ok(vec![b]);
        }
        let candidates: Vec<BlockId> = self
            .meet_irreducibles
            .iter()
            .copied()
            .filter(|&i| self.le(b, i))
            .collect();
        let met = self.meet_all(&candidates)?;
        if met != b {
            return Err(Error::input(format!(
                "block {} is not a meet of meet-irreducibles (some meets are undefined)",
                b.0
            )));
        }
        Ok(candidates)
    }

    /// Least block strictly above `b` such that every block strictly above
    /// `b` is above it. Exists and is unique when all meets are defined.
    pub fn successor(&self, b: BlockId) -> Result<BlockId> {
        let above: Vec<BlockId> = self.ids().filter(|&c| self.lt(b, c)).collect();
        if above.is_empty() {
            return Err(Error::input(format!("block {} has no strict upper bound", b.0)));
        }
        above
            .iter()
            .copied()
            .find(|&c| above.iter().all(|&d| self.le(c, d)))
            .ok_or_else(|| {
                Error::input(format!(
                    "no unique least block above block {} (meets missing)",
                    b.0
                ))
            })
    }
}

/// Is there an `n ≥ 1` with `n × a ⪰ b`? The orbit of `a` under `⊕ a` is
/// eventually periodic, so scanning one full orbit decides it.
pub fn reaches(s: &Semigroup, a: Elem, b: Elem) -> bool {
    let mut seen = vec![false; s.len()];
    let mut cur = a;
    loop {
        if s.le(b, cur) {
            return true;
        }
        if seen[cur.0] {
            return false;
        }
        seen[cur.0] = true;
        cur = s.add(cur, a);
    }
}

fn same_block(s: &Semigroup, a: Elem, b: Elem) -> bool {
    reaches(s, a, b) && reaches(s, b, a)
}

/// Partitions the elements into blocks and computes the block order,
/// meets, joins and the meet-irreducible / meet-reducible split.
pub fn compute_blocks(s: &Semigroup) -> BlockLattice {
    let n = s.len();
    // Partition by mutual reachability; blocks keep the order of their
    // smallest member, after the synthetic bottom block.
    let mut block_of_elem = vec![usize::MAX; n];
    let mut blocks: Vec<Block> = vec![Block {
        id: BlockId(0),
        members: vec![],
    }];
    for a in s.elems() {
        if block_of_elem[a.0] != usize::MAX {
            continue;
        }
        let id = blocks.len();
        let members: Vec<Elem> = s
            .elems()
            .filter(|&b| block_of_elem[b.0] == usize::MAX && same_block(s, a, b))
            .collect();
        for &m in &members {
            block_of_elem[m.0] = id;
        }
        blocks.push(Block {
            id: BlockId(id),
            members,
        });
    }

    let k = blocks.len();
    // Block order: B ⪯ B' iff every member of B is below some member of B'.
    // The bottom block is below everything and above only itself.
    let mut block_leq = vec![vec![false; k]; k];
    for i in 0..k {
        for j in 0..k {
            block_leq[i][j] = if blocks[i].is_zero() {
                true
            } else if blocks[j].is_zero() {
                false
            } else {
                blocks[i].members.iter().all(|&a| {
                    blocks[j].members.iter().any(|&b| s.le(a, b))
                })
            };
        }
    }

    let le = |i: usize, j: usize| block_leq[i][j];
    let glb = |i: usize, j: usize| -> Option<usize> {
        let lower: Vec<usize> = (0..k).filter(|&c| le(c, i) && le(c, j)).collect();
        lower
            .iter()
            .copied()
            .find(|&m| lower.iter().all(|&x| le(x, m)))
    };
    let lub = |i: usize, j: usize| -> Option<usize> {
        let upper: Vec<usize> = (0..k).filter(|&c| le(i, c) && le(j, c)).collect();
        upper
            .iter()
            .copied()
            .find(|&m| upper.iter().all(|&x| le(m, x)))
    };

    let mut meet_table = vec![vec![None; k]; k];
    let mut join_table = vec![vec![None; k]; k];
    for i in 0..k {
        for j in 0..k {
            meet_table[i][j] = glb(i, j).map(BlockId);
            join_table[i][j] = lub(i, j).map(BlockId);
        }
    }

    let maximum_block = (0..k)
        .find(|&m| (0..k).all(|x| le(x, m)))
        .map(BlockId);

    let mut meet_irreducibles = Vec::new();
    let mut meet_reducibles = Vec::new();
    for b in 0..k {
        if Some(BlockId(b)) == maximum_block {
            continue;
        }
        let reducible = (0..k).any(|i| {
            (0..k).any(|j| {
                i != b && j != b && meet_table[i][j] == Some(BlockId(b))
            })
        });
        if reducible {
            meet_reducibles.push(BlockId(b));
        } else {
            meet_irreducibles.push(BlockId(b));
        }
    }

    let is_lattice = (0..k).all(|i| (0..k).all(|j| meet_table[i][j].is_some()));
    let is_distributive = is_lattice
        && (0..k).all(|a| {
            (0..k).all(|b| {
                (0..k).all(|c| {
                    let bc = join_table[b][c].unwrap().0;
                    let left = meet_table[a][bc];
                    let ab = meet_table[a][b].unwrap().0;
                    let ac = meet_table[a][c].unwrap().0;
                    let right = join_table[ab][ac];
                    left == right
                })
            })
        });

    BlockLattice {
        blocks,
        block_leq,
        meet_table,
        join_table,
        meet_irreducibles,
        meet_reducibles,
        maximum_block,
        is_lattice,
        is_distributive,
        block_of: block_of_elem.into_iter().map(BlockId).collect(),
    }
}

/// True iff the semigroup has exactly one non-`𝟎` block; otherwise returns
/// a pair `(a, b)` where no multiple of `a` dominates `b`.
pub fn is_archimedean(s: &Semigroup) -> std::result::Result<(), (Elem, Elem)> {
    for a in s.elems() {
        for b in s.elems() {
            if !reaches(s, a, b) {
                return Err((a, b));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn member_names(s: &Semigroup, b: &Block) -> Vec<String> {
        s.names(&b.members)
    }

    #[test]
    fn sauer_blocks() {
        let s = fixtures::sauer();
        let l = compute_blocks(&s);
        assert_eq!(l.blocks.len(), 3);
        assert!(l.blocks[0].is_zero());
        assert_eq!(member_names(&s, &l.blocks[1]), vec!["1"]);
        assert_eq!(member_names(&s, &l.blocks[2]), vec!["3", "4", "6", "7"]);
    }

    #[test]
    fn dt2_blocks_and_irreducibles() {
        let s = fixtures::dt(2);
        let l = compute_blocks(&s);
        assert_eq!(l.blocks.len(), 9);
        // Identify blocks by their coordinate support.
        let support = |b: &Block| -> Vec<bool> {
            let mut sup = vec![false; 3];
            for &m in &b.members {
                let name = s.name(m);
                let coords: Vec<u32> = name
                    .trim_matches(|c| c == '(' || c == ')')
                    .split(',')
                    .map(|x| x.parse().unwrap())
                    .collect();
                for i in 0..3 {
                    if coords[i] > 0 {
                        sup[i] = true;
                    }
                }
            }
            sup
        };
        let find = |sup: [bool; 3]| -> BlockId {
            l.blocks
                .iter()
                .find(|b| !b.is_zero() && support(b) == sup)
                .unwrap()
                .id
        };
        let b12 = find([true, true, false]);
        let b13 = find([true, false, true]);
        let b23 = find([false, true, true]);
        let bmax = find([true, true, true]);
        let bempty = find([false, false, false]);
        let b1 = find([true, false, false]);
        let b2 = find([false, true, false]);
        let b3 = find([false, false, true]);

        let mut irr = l.meet_irreducibles.clone();
        irr.sort();
        let mut expect_irr = vec![l.zero(), b12, b13, b23];
        expect_irr.sort();
        assert_eq!(irr, expect_irr);

        let mut red = l.meet_reducibles.clone();
        red.sort();
        let mut expect_red = vec![bempty, b1, b2, b3];
        expect_red.sort();
        assert_eq!(red, expect_red);

        assert_eq!(l.maximum_block, Some(bmax));
        assert!(l.is_lattice);
        assert!(l.is_distributive);

        // Meet decomposition examples.
        let mut d = l.meet_decompose(b1).unwrap();
        d.sort();
        let mut expect = vec![b12, b13];
        expect.sort();
        assert_eq!(d, expect);
        assert_eq!(l.meet_decompose(bmax).unwrap(), vec![]);
        assert_eq!(l.meet_decompose(b12).unwrap(), vec![b12]);
    }

    #[test]
    fn u3_blocks_linear() {
        let s = fixtures::un(3);
        let l = compute_blocks(&s);
        assert_eq!(l.blocks.len(), 4);
        for b in &l.blocks[1..] {
            assert_eq!(b.members.len(), 1);
        }
        // Linearly ordered, so every block is comparable to every other.
        for i in l.ids() {
            for j in l.ids() {
                assert!(l.le(i, j) || l.le(j, i));
            }
        }
    }

    #[test]
    fn archimedean_checks() {
        assert!(is_archimedean(&fixtures::zk(5)).is_ok());
        let u2 = fixtures::un(2);
        let err = is_archimedean(&u2).unwrap_err();
        assert_eq!(u2.name(err.0), "1");
        assert_eq!(u2.name(err.1), "2");
        assert!(is_archimedean(&fixtures::magic_semigroup(3, 2, 8).unwrap()).is_ok());
    }

    #[test]
    fn join_matches_sum_block() {
        for s in [fixtures::zk(5), fixtures::sauer(), fixtures::dt(2), fixtures::div(12)] {
            let l = compute_blocks(&s);
            for a in s.elems() {
                for b in s.elems() {
                    let join = l.join(l.block_of(a), l.block_of(b)).unwrap();
                    assert_eq!(join, l.block_of(s.add(a, b)));
                }
            }
        }
    }
}
