//! Acceptance gate: one test per criterion, each printing a PASS line
//! with its runtime. Run with `cargo test --test acceptance -- --nocapture`.

use smv_core::blocks::{compute_blocks, BlockId};
use smv_core::bruteforce::{self, IsoScan, TriangleTable};
use smv_core::census;
use smv_core::convex::{self, BlockTieBreak, ConvexOrderedSpace};
use smv_core::cycle::FamilySpec;
use smv_core::fixtures;
use smv_core::gadget;
use smv_core::gen;
use smv_core::graph::{strong_amalgam, EdgeLabelledGraph, PathBudget};
use smv_core::magic::{self, CycleClass, MagicParams};
use rand::Rng;
use smv_core::par;
use smv_core::semigroup::{Elem, Semigroup};
use smv_core::star::{self, StarContext};
use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::Instant;

fn report(criterion: &str, start: Instant) {
    println!(
        "acceptance {criterion}: PASS ({:.2}s)",
        start.elapsed().as_secs_f64()
    );
}

fn graph_from_cells(
    s: &Arc<Semigroup>,
    scan: &IsoScan,
    cells: &[usize],
    with_absent: bool,
) -> EdgeLabelledGraph {
    let mut g = EdgeLabelledGraph::with_size(Arc::clone(s), scan.n);
    for (idx, &(u, v)) in scan.cells.iter().enumerate() {
        let val = cells[idx];
        if with_absent {
            if val > 0 {
                g.add_edge(u, v, Elem(val - 1)).unwrap();
            }
        } else {
            g.add_edge(u, v, Elem(val)).unwrap();
        }
    }
    g
}

/// Criterion 1: exact block censuses of the Sauer set and the truncated
/// coordinate semigroup.
#[test]
fn criterion_01_block_census() {
    let start = Instant::now();
    let s = fixtures::sauer();
    let l = compute_blocks(&s);
    assert_eq!(l.blocks.len(), 3);
    assert!(l.blocks[0].is_zero());
    assert_eq!(s.names(&l.blocks[1].members), vec!["1"]);
    assert_eq!(s.names(&l.blocks[2].members), vec!["3", "4", "6", "7"]);

    let dt2 = fixtures::dt(2);
    let l = compute_blocks(&dt2);
    assert_eq!(l.blocks.len(), 9);
    let support = |b: &smv_core::blocks::Block| -> [bool; 3] {
        let mut sup = [false; 3];
        for &m in &b.members {
            let coords: Vec<u32> = dt2
                .name(m)
                .trim_matches(|c| c == '(' || c == ')')
                .split(',')
                .map(|x| x.parse().unwrap())
                .collect();
            for i in 0..3 {
                sup[i] |= coords[i] > 0;
            }
        }
        sup
    };
    let id_of = |sup: [bool; 3]| -> BlockId {
        l.blocks
            .iter()
            .find(|b| !b.is_zero() && support(b) == sup)
            .unwrap()
            .id
    };
    let mut irr: Vec<BlockId> = l.meet_irreducibles.clone();
    irr.sort();
    let mut expected_irr = vec![
        l.zero(),
        id_of([true, true, false]),
        id_of([true, false, true]),
        id_of([false, true, true]),
    ];
    expected_irr.sort();
    assert_eq!(irr, expected_irr);
    let mut red: Vec<BlockId> = l.meet_reducibles.clone();
    red.sort();
    let mut expected_red = vec![
        id_of([false, false, false]),
        id_of([true, false, false]),
        id_of([false, true, false]),
        id_of([false, false, true]),
    ];
    expected_red.sort();
    assert_eq!(red, expected_red);
    assert_eq!(l.maximum_block, Some(id_of([true, true, true])));
    report("1 (block census)", start);
}

/// Criterion 2: on every graph with at most 4 vertices over the four
/// fixtures, the completion succeeds exactly when the enumeration oracle
/// finds a completion, and its result dominates every completion.
#[test]
fn criterion_02_completion_soundness() {
    let start = Instant::now();
    for name in ["U3", "Z5", "SAUER", "DT2"] {
        let s = Arc::new(fixtures::by_name(name).unwrap());
        let tt = TriangleTable::new(&s).unwrap();
        let budget = PathBudget::default();
        for n in 1..=4usize {
            let scan = IsoScan::new(n, s.len() + 1);
            let prefixes = scan.prefixes(2);
            let checked: Vec<u64> = par::map(&prefixes, |prefix| {
                let mut count = 0u64;
                scan.for_each_leaf(prefix, &mut |cells| {
                    count += 1;
                    let g = graph_from_cells(&s, &scan, cells, true);
                    let completed = g.shortest_path_completion(&FamilySpec::empty(), &budget);
                    let oracle = bruteforce::has_completion(&g, &tt);
                    match completed {
                        Err(smv_core::Error::NonMetricInput(_)) => {
                            assert!(!oracle, "{name}: oracle completes a rejected graph");
                        }
                        Err(e) => panic!("{name}: unexpected completion error {e}"),
                        Ok(done) => {
                            assert!(oracle, "{name}: completion succeeded, oracle failed");
                            // Dominance: no completion may exceed or dodge
                            // the computed value anywhere.
                            for (idx, &(u, v)) in scan.cells.iter().enumerate() {
                                let d = done.label(u, v).unwrap();
                                if cells[idx] > 0 {
                                    assert_eq!(d, Elem(cells[idx] - 1));
                                    continue;
                                }
                                let mut mask = 0u64;
                                for x in s.elems() {
                                    if !s.le(x, d) {
                                        mask |= 1 << x.0;
                                    }
                                }
                                if mask != 0 {
                                    assert!(
                                        !bruteforce::completion_with_pair_in(&g, &tt, (u, v), mask),
                                        "{name}: a completion escapes the computed value"
                                    );
                                }
                            }
                        }
                    }
                });
                count
            });
            let total: u64 = checked.iter().sum();
            assert!(total > 0, "{name}: empty sweep at n={n}");
        }
    }
    report("2 (completion soundness)", start);
}

/// Criterion 3: the completion preserves the automorphism group on every
/// metric graph with at most 5 vertices over U3 and Z5.
#[test]
fn criterion_03_automorphism_preservation() {
    let start = Instant::now();
    for name in ["U3", "Z5"] {
        let s = Arc::new(fixtures::by_name(name).unwrap());
        let budget = PathBudget::default();
        for n in 1..=5usize {
            let scan = IsoScan::new(n, s.len() + 1);
            let prefixes = scan.prefixes(2);
            let _: Vec<()> = par::map(&prefixes, |prefix| {
                scan.for_each_leaf(prefix, &mut |cells| {
                    let g = graph_from_cells(&s, &scan, cells, true);
                    if g.find_nonmetric_witness(&budget).unwrap().is_some() {
                        return;
                    }
                    let done = g.shortest_path_completion(&FamilySpec::empty(), &budget).unwrap();
                    let before = g.automorphisms(8).unwrap();
                    let after = done.automorphisms(8).unwrap();
                    assert_eq!(before, after, "{name}: automorphism group changed");
                });
            });
        }
    }
    report("3 (automorphism preservation)", start);
}

/// Criterion 4: seeded random strong amalgamations embed both sides with
/// intersection exactly the shared part.
#[test]
fn criterion_04_strong_amalgamation() {
    let start = Instant::now();
    for name in ["U3", "Z5", "SAUER", "DT2", "DIV12", "MAG-3-2-8"] {
        let s = Arc::new(fixtures::by_name(name).unwrap());
        let tt = TriangleTable::new(&s).unwrap();
        let mut rng = gen::rng_from_seed(0x5eed_0004);
        for case in 0..1000usize {
            let shared = case % 3;
            let extra1 = 1 + case % 2;
            let extra2 = 1 + (case / 2) % 2;
            let a = gen::random_metric_space(&s, &tt, shared, &mut rng).unwrap();
            let b1 = gen::random_metric_extension(&a, &tt, extra1, &mut rng).unwrap();
            let b2 = gen::random_metric_extension(&a, &tt, extra2, &mut rng).unwrap();
            let inj: Vec<usize> = (0..shared).collect();
            let (amalgam, m1, m2) = strong_amalgam(
                &b1,
                &b2,
                &a,
                &inj,
                &inj,
                &FamilySpec::empty(),
                &PathBudget::default(),
            )
            .unwrap();
            // Embeddings preserve labels.
            for u in 0..b1.vertex_count() {
                for v in u + 1..b1.vertex_count() {
                    assert_eq!(b1.label(u, v), amalgam.label(m1[u], m1[v]));
                }
            }
            for u in 0..b2.vertex_count() {
                for v in u + 1..b2.vertex_count() {
                    assert_eq!(b2.label(u, v), amalgam.label(m2[u], m2[v]));
                }
            }
            // Images intersect exactly in the shared part.
            let i1: BTreeSet<usize> = m1.iter().copied().collect();
            let i2: BTreeSet<usize> = m2.iter().copied().collect();
            let inter: Vec<usize> = i1.intersection(&i2).copied().collect();
            let expected: Vec<usize> = (0..shared).map(|i| m1[i]).collect();
            let mut expected = expected;
            expected.sort_unstable();
            assert_eq!(inter, expected);
            assert!(amalgam.is_metric_space());
        }
    }
    report("4 (strong amalgamation)", start);
}

fn valid_magic_triples(delta_max: u32) -> Vec<(u32, u32, u32)> {
    let mut out = Vec::new();
    for delta in 3..=delta_max {
        for c in 2 * delta + 2..=3 * delta + 1 {
            for m in delta.div_ceil(2)..=(c - delta - 1) / 2 {
                out.push((delta, m, c));
            }
        }
    }
    out
}

/// Criterion 5: the magic order's closed form matches the operation table
/// (asserted inside the constructor), the fold formula matches the table
/// on every sequence up to 6 labels, and incomparable folds force the
/// long-cycle class.
#[test]
fn criterion_05_magic_consistency() {
    let start = Instant::now();
    let triples = valid_magic_triples(6);
    assert!(!triples.is_empty());
    let _: Vec<()> = par::map(&triples, |&(delta, m, c)| {
        // Constructor cross-checks the closed form against the natural
        // order on every pair.
        let s = magic::magic_semigroup(delta, m, c).unwrap();
        assert_eq!(s.len() as u32, delta);
        let params = MagicParams {
            delta,
            k1: 1,
            k2: delta,
            c,
            m,
        };

        // Fold formula on all multisets of non-M labels, sizes 1..=6.
        let labels: Vec<u32> = (1..=delta).filter(|&x| x != m).collect();
        let mut stack: Vec<(Vec<u32>, usize)> = vec![(Vec::new(), 0)];
        while let Some((multiset, from)) = stack.pop() {
            if !multiset.is_empty() {
                let xs: Vec<u32> = multiset.iter().copied().filter(|&x| x < m).collect();
                let ds: Vec<u32> = multiset.iter().copied().filter(|&x| x > m).collect();
                let result = magic::magic_sum(&xs, &ds, &params).unwrap();
                // Cross-check the value against the semigroup table.
                let elems: Vec<Elem> = multiset
                    .iter()
                    .map(|&x| s.elem_by_name(&x.to_string()).unwrap())
                    .collect();
                let fold = s.fold(&elems).unwrap();
                assert_eq!(s.name(fold), result.value.to_string());
            }
            if multiset.len() == 6 {
                continue;
            }
            for (i, &x) in labels.iter().enumerate().skip(from) {
                let mut next = multiset.clone();
                next.push(x);
                stack.push((next, i));
            }
        }

        // Incomparable arc folds make the whole cycle a C-cycle.
        let all: Vec<u32> = (1..=delta).collect();
        let mut multisets: Vec<Vec<u32>> = Vec::new();
        let mut stack: Vec<(Vec<u32>, usize)> = vec![(Vec::new(), 0)];
        while let Some((multiset, from)) = stack.pop() {
            if !multiset.is_empty() {
                multisets.push(multiset.clone());
            }
            if multiset.len() == 5 {
                continue;
            }
            for (i, &x) in all.iter().enumerate().skip(from) {
                let mut next = multiset.clone();
                next.push(x);
                stack.push((next, i));
            }
        }
        let fold_of = |ms: &[u32]| -> Elem {
            let elems: Vec<Elem> = ms
                .iter()
                .map(|&x| s.elem_by_name(&x.to_string()).unwrap())
                .collect();
            s.fold(&elems).unwrap()
        };
        for m1 in &multisets {
            for m2 in &multisets {
                if m1.len() + m2.len() > 6 || m1.len() + m2.len() < 3 {
                    continue;
                }
                let (fa, fb) = (fold_of(m1), fold_of(m2));
                if !s.incomparable(fa, fb) {
                    continue;
                }
                let mut cycle: Vec<u32> = m1.clone();
                cycle.extend(m2.iter());
                assert!(
                    matches!(
                        magic::classify_cycle(&cycle, &params).unwrap(),
                        CycleClass::C { .. }
                    ),
                    "cycle {cycle:?} with incomparable arc folds must be a C-cycle \
                     (δ={delta}, M={m}, C={c})"
                );
            }
        }
    });
    report("5 (magic consistency)", start);
}

fn relevant_tuples(delta_max: u32) -> Vec<MagicParams> {
    let mut out = Vec::new();
    for delta in 3..=delta_max {
        for k1 in 1..=delta {
            for k2 in k1..=delta {
                for c in 2 * delta + 2..=3 * delta + 2 {
                    if !magic::check_relevant(delta, k1, k2, c).relevant {
                        continue;
                    }
                    for m in delta.div_ceil(2).max(k1)..=((c.saturating_sub(delta + 1)) / 2).min(k2)
                    {
                        if 2 * delta + 2 <= c && c <= 3 * delta + 1 {
                            out.push(MagicParams {
                                delta,
                                k1,
                                k2,
                                c,
                                m,
                            });
                        }
                    }
                }
            }
        }
    }
    out
}

/// Criterion 6: triangle-based membership agrees with "metric space
/// omitting the forbidden family" on every complete graph with at most 4
/// vertices, for every relevant parameter tuple with δ ≤ 4.
#[test]
fn criterion_06_membership_agreement() {
    let start = Instant::now();
    let tuples = relevant_tuples(4);
    assert!(!tuples.is_empty());
    let _: Vec<()> = par::map(&tuples, |params| {
        let s = Arc::new(magic::magic_semigroup(params.delta, params.m, params.c).unwrap());
        let (family, longest) =
            magic::build_forbidden_family(params, 2 * params.delta as usize).unwrap();
        // The family is finite: nothing appears beyond 2δ - 1 edges.
        assert!(longest.unwrap_or(0) <= 2 * params.delta as usize - 1);
        let spec = FamilySpec::Finite(family);
        for n in 1..=4usize {
            let scan = IsoScan::new(n, s.len());
            for prefix in scan.prefixes(0) {
                scan.for_each_leaf(&prefix, &mut |cells| {
                    let g = graph_from_cells(&s, &scan, cells, false);
                    let by_triangles = magic::membership(&g, params).unwrap();
                    let by_class = g.is_metric_space() && g.check_forb(&spec).unwrap().is_none();
                    assert_eq!(
                        by_triangles, by_class,
                        "membership mismatch at {params:?} on {cells:?}"
                    );
                });
            }
        }
    });
    report("6 (membership agreement)", start);
}

/// Criterion 7: the census of 4-label triangle classes under the strong,
/// primitive and non-free filters reports exactly 26 classes.
#[test]
fn criterion_07_census_26() {
    let start = Instant::now();
    let opts = census::CensusOptions::default();
    let records = census::enumerate_triangle_classes(4, &opts).unwrap();
    // Breakdown for the free-like flag: rerun without the non-free filter.
    let with_free = census::enumerate_triangle_classes(
        4,
        &census::CensusOptions {
            require_nonfree: false,
            ..opts
        },
    )
    .unwrap();
    let free_count = with_free.iter().filter(|r| r.free_like).count();
    println!(
        "census n=4: {} non-free classes, {} free-like classes, {} total",
        records.len(),
        free_count,
        with_free.len()
    );
    assert_eq!(records.len(), 26, "expected exactly 26 classes");
    report("7 (census of 4-label classes)", start);
}

fn acceptance_fixture_contexts() -> Vec<(String, StarContext)> {
    ["U3", "Z5", "SAUER", "DT2", "DIV12", "MAG-3-2-8"]
        .iter()
        .map(|name| {
            let s = Arc::new(fixtures::by_name(name).unwrap());
            (
                name.to_string(),
                StarContext::new(s, FamilySpec::empty()).unwrap(),
            )
        })
        .collect()
}

/// Criterion 8: expansion and ordered expansion round-trip exactly on
/// seeded random fixture spaces and 200 random convex orders.
#[test]
fn criterion_08_round_trips() {
    let start = Instant::now();
    let contexts = acceptance_fixture_contexts();
    let mut rng = gen::rng_from_seed(0x5eed_0008);
    let mut ordered_cases = 0usize;
    while ordered_cases < 200 {
        for (name, ctx) in &contexts {
            let tt = TriangleTable::new(&ctx.semigroup).unwrap();
            let n = 1 + ordered_cases % 6;
            let space = gen::random_metric_space(&ctx.semigroup, &tt, n, &mut rng).unwrap();
            let st = star::lift_star(ctx, &space).unwrap();
            let back = star::drop_star(ctx, &st).unwrap();
            assert_eq!(back, space, "{name}: plain round trip failed");

            let ordered = random_convex_order(ctx, &space, &mut rng);
            let tb = BlockTieBreak::default_for(&ctx.lattice);
            let lifted = convex::lift_ordered(ctx, &ordered, &tb).unwrap();
            let back = convex::drop_ordered(ctx, &lifted).unwrap();
            assert_eq!(back, ordered, "{name}: ordered round trip failed");
            ordered_cases += 1;
        }
    }
    report("8 (expansion round trips)", start);
}

/// A random valid convex order: shuffle the balls of each block inside
/// each successor ball and read the pair orders off the shuffles.
fn random_convex_order<R: rand::Rng>(
    ctx: &StarContext,
    space: &EdgeLabelledGraph,
    rng: &mut R,
) -> ConvexOrderedSpace {
    use smv_core::star::ball_partition;
    let mut orders = std::collections::BTreeMap::new();
    for &b in ctx
        .lattice
        .meet_irreducibles
        .iter()
        .filter(|&&b| Some(b) != ctx.lattice.maximum_block)
    {
        let parts = ball_partition(space, &ctx.lattice, b);
        let bigger: Vec<Vec<Vec<usize>>> = ctx
            .lattice
            .ids()
            .filter(|&c| ctx.lattice.lt(b, c))
            .map(|c| ball_partition(space, &ctx.lattice, c))
            .collect();
        // Random priority per ball.
        let mut priority: Vec<usize> = (0..parts.len()).collect();
        for i in (1..priority.len()).rev() {
            let j = rng.gen_range(0..=i);
            priority.swap(i, j);
        }
        let ball_of = |v: usize| parts.iter().position(|p| p.contains(&v)).unwrap();
        let same_bigger =
            |u: usize, v: usize| bigger.iter().all(|p| p.iter().any(|ball| ball.contains(&u) && ball.contains(&v)));
        let mut set = BTreeSet::new();
        for u in 0..space.vertex_count() {
            for v in 0..space.vertex_count() {
                if u == v || ball_of(u) == ball_of(v) || !same_bigger(u, v) {
                    continue;
                }
                if priority[ball_of(u)] < priority[ball_of(v)] {
                    set.insert((u, v));
                }
            }
        }
        if !set.is_empty() {
            orders.insert(b, set);
        }
    }
    ConvexOrderedSpace {
        base: space.clone(),
        orders,
    }
}

/// Criterion 9: the computed maximum useful distance passes the validity
/// dichotomy for every fixture, block, and distance set of size up to 3.
#[test]
fn criterion_09_mus_validity() {
    let start = Instant::now();
    for name in ["U3", "Z5", "SAUER", "DT2", "DIV12", "MAG-3-2-8"] {
        let s = Arc::new(fixtures::by_name(name).unwrap());
        let lattice = compute_blocks(&s);
        let elems: Vec<Elem> = s.elems().collect();
        let mut sets: Vec<Vec<Elem>> = Vec::new();
        for i in 0..elems.len() {
            sets.push(vec![elems[i]]);
            for j in i + 1..elems.len() {
                sets.push(vec![elems[i], elems[j]]);
                for k in j + 1..elems.len() {
                    sets.push(vec![elems[i], elems[j], elems[k]]);
                }
            }
        }
        let _: Vec<()> = par::map(&sets, |set| {
            for block in lattice.ids() {
                if lattice.block(block).is_zero() {
                    continue;
                }
                let mus = gadget::compute_mus(&s, &lattice, block, set).unwrap();
                assert!(
                    gadget::validate_mus(&s, &lattice, block, set, mus),
                    "{name}: mus {} fails for block {} and set {:?}",
                    s.name(mus),
                    block.0,
                    s.names(set)
                );
            }
        });
    }
    report("9 (mus validity)", start);
}

/// Criterion 10: the important-subsequence selection respects its size
/// bound and keeps the target unreachable against arbitrary replacements
/// from the dropped blocks' join.
#[test]
fn criterion_10_important_subsequence() {
    let start = Instant::now();
    for name in ["U3", "Z5", "SAUER", "DT2", "DIV12", "MAG-3-2-8"] {
        let s = Arc::new(fixtures::by_name(name).unwrap());
        let lattice = Arc::new(compute_blocks(&s));
        let elems: Vec<Elem> = s.elems().collect();
        let mut sets: Vec<Vec<Elem>> = Vec::new();
        for i in 0..elems.len() {
            for j in i..elems.len() {
                for k in j..elems.len() {
                    let mut set = vec![elems[i], elems[j], elems[k]];
                    set.dedup();
                    sets.push(set);
                }
            }
        }
        sets.sort();
        sets.dedup();
        let _: Vec<()> = par::map(&sets, |set| {
            for &l in set.iter() {
                // All sequences over the set, length 1..=6.
                let mut stack: Vec<Vec<Elem>> = set.iter().map(|&e| vec![e]).collect();
                while let Some(seq) = stack.pop() {
                    let total = s.fold(&seq).unwrap();
                    if !s.le(l, total) {
                        let r =
                            gadget::important_subsequence(&s, &lattice, l, &seq, set).unwrap();
                        assert!(r.kept.len() <= r.bound, "{name}: bound exceeded");
                        let dropped: Vec<Elem> = seq
                            .iter()
                            .enumerate()
                            .filter(|(i, _)| !r.kept_positions.contains(i))
                            .map(|(_, &e)| e)
                            .collect();
                        if !dropped.is_empty() {
                            let join = dropped
                                .iter()
                                .map(|&e| lattice.block_of(e))
                                .reduce(|a, b| lattice.join(a, b).unwrap())
                                .unwrap();
                            let kept_sum = s.fold(&r.kept).unwrap();
                            for &b in &lattice.block(join).members {
                                assert!(
                                    !s.le(l, s.add(b, kept_sum)),
                                    "{name}: dropped entries were load-bearing"
                                );
                            }
                        }
                    }
                    if seq.len() < 6 {
                        for &e in set.iter() {
                            let mut next = seq.clone();
                            next.push(e);
                            stack.push(next);
                        }
                    }
                }
            }
        });
    }
    report("10 (important subsequences)", start);
}

/// Criterion 11: the star completion succeeds on seeded free amalgams of
/// expanded fixture spaces, and rejects a shared-ball conflict without
/// type relations with a star-cycle witness.
#[test]
fn criterion_11_star_completion() {
    let start = Instant::now();
    let contexts = acceptance_fixture_contexts();
    let mut rng = gen::rng_from_seed(0x5eed_0011);
    let budget = PathBudget {
        max_vertices: 64,
        max_paths_per_pair: 500_000,
    };
    let mut done = 0usize;
    while done < 500 {
        for (name, ctx) in &contexts {
            if done >= 500 {
                break;
            }
            let tt = TriangleTable::new(&ctx.semigroup).unwrap();
            let shared = done % 3;
            let base = gen::random_metric_space(&ctx.semigroup, &tt, shared, &mut rng).unwrap();
            let b1 = gen::random_metric_extension(&base, &tt, 1 + done % 2, &mut rng).unwrap();
            let b2 = gen::random_metric_extension(&base, &tt, 1 + (done / 2) % 2, &mut rng).unwrap();
            let st1 = star::lift_star(ctx, &b1).unwrap();
            let st2 = star::lift_star(ctx, &b2).unwrap();
            let amalgam = star::star_free_amalgam(ctx, &st1, &st2).unwrap();
            star::check_star_class(ctx, &amalgam, &budget)
                .unwrap_or_else(|e| panic!("{name}: free amalgam left the class: {e}"));
            let completed = gadget::complete_star(ctx, &amalgam, &budget)
                .unwrap_or_else(|e| panic!("{name}: completion failed: {e}"));
            assert!(star::drop_star(ctx, &completed).is_ok());
            done += 1;
        }
    }

    // Negative side: gluing two small-support balls without the type
    // relations that would certify them yields a star-cycle rejection.
    let dt3 = Arc::new(fixtures::dt(3));
    let ctx = StarContext::new(Arc::clone(&dt3), FamilySpec::empty()).unwrap();
    let e = |n: &str| dt3.elem_by_name(n).unwrap();
    let b12 = ctx.lattice.block_of(e("(1,1,0)"));
    let b13 = ctx.lattice.block_of(e("(1,0,1)"));
    let b23 = ctx.lattice.block_of(e("(0,1,1)"));
    use smv_core::star::{StarStructure, StarVertex, VertexKind};
    let mut vertices = vec![
        StarVertex {
            name: "x".into(),
            kind: VertexKind::Original,
        },
        StarVertex {
            name: "s".into(),
            kind: VertexKind::Original,
        },
        StarVertex {
            name: "y".into(),
            kind: VertexKind::Original,
        },
    ];
    for (n, b) in [
        ("bx12", b12),
        ("bx13", b13),
        ("bx23", b23),
        ("bs12", b12),
        ("bs13", b13),
        ("bs23", b23),
        ("by23", b23),
    ] {
        vertices.push(StarVertex {
            name: n.into(),
            kind: VertexKind::Ball(b),
        });
    }
    let mut st = StarStructure {
        distances: vec![None; vertices.len() * vertices.len()],
        vertices,
        f_b: Default::default(),
        f_bb: Default::default(),
        type_rels: Default::default(),
        order: None,
    };
    st.set_distance(0, 1, e("(1,2,3)")).unwrap();
    st.set_distance(1, 2, e("(1,1,1)")).unwrap();
    st.f_b.insert((0, b12), 3);
    st.f_b.insert((0, b13), 4);
    st.f_b.insert((0, b23), 5);
    st.f_b.insert((1, b12), 6);
    st.f_b.insert((1, b13), 7);
    st.f_b.insert((1, b23), 8);
    st.f_b.insert((2, b12), 3);
    st.f_b.insert((2, b13), 4);
    st.f_b.insert((2, b23), 9);
    let err = gadget::complete_star(&ctx, &st, &budget).unwrap_err();
    assert!(matches!(err, smv_core::Error::StarCycle { .. }));
    report("11 (star completion)", start);
}

/// Criterion 12: colouring the two embeddings of an edge differently
/// refutes the arrow for every graph on at most 5 vertices.
#[test]
fn criterion_12_arrow_failure() {
    let start = Instant::now();
    let s = Arc::new(fixtures::un(1));
    let one = Elem(0);
    let mut edge = EdgeLabelledGraph::with_size(Arc::clone(&s), 2);
    edge.add_edge(0, 1, one).unwrap();
    for n in 1..=5usize {
        let scan = IsoScan::new(n, 2);
        for prefix in scan.prefixes(0) {
            scan.for_each_leaf(&prefix, &mut |cells| {
                let c = graph_from_cells(&s, &scan, cells, true);
                let verdict = census::brute_force_arrow(&c, &edge, &edge, 2, 1 << 20).unwrap();
                assert!(
                    matches!(verdict, census::ArrowVerdict::Fails { .. }),
                    "arrow unexpectedly holds on {cells:?}"
                );
            });
        }
    }
    report("12 (arrow micro-check)", start);
}

/// Criterion 13: symmetry and monotonicity of the canonical independence
/// relation on seeded subset triples of completed fixture spaces.
#[test]
fn criterion_13_sir_checks() {
    let start = Instant::now();
    let fixture_names = ["U3", "Z5", "SAUER", "DT2", "DIV12", "MAG-3-2-8"];
    let mut rng = gen::rng_from_seed(0x5eed_0013);
    let mut done = 0usize;
    while done < 1000 {
        for name in fixture_names {
            if done >= 1000 {
                break;
            }
            let s = Arc::new(fixtures::by_name(name).unwrap());
            let tt = TriangleTable::new(&s).unwrap();
            let n = 3 + done % 6; // up to 8 vertices
            let space = gen::random_metric_space(&s, &tt, n, &mut rng).unwrap();
            let mut pick = |max: usize| -> Vec<usize> {
                let size = 1 + rng.gen_range(0..max);
                let mut set = BTreeSet::new();
                for _ in 0..size {
                    set.insert(rng.gen_range(0..n));
                }
                set.into_iter().collect()
            };
            let a = pick(2);
            let b = pick(2);
            let d = pick(2);
            let c = pick(2);
            let bd: Vec<usize> = b.iter().chain(d.iter()).copied().collect();
            let bc: Vec<usize> = b.iter().chain(c.iter()).copied().collect();
            // Symmetry.
            assert_eq!(
                space.sir_independent(&a, &b, &c).unwrap(),
                space.sir_independent(&b, &a, &c).unwrap(),
                "{name}: symmetry failed"
            );
            // Monotonicity.
            if space.sir_independent(&a, &bd, &c).unwrap() {
                assert!(
                    space.sir_independent(&a, &b, &c).unwrap(),
                    "{name}: monotonicity (restriction) failed"
                );
                assert!(
                    space.sir_independent(&a, &d, &bc).unwrap(),
                    "{name}: monotonicity (base extension) failed"
                );
            }
            done += 1;
        }
    }
    report("13 (independence relation checks)", start);
}
