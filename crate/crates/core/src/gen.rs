//! Seeded random instance generation for the property suites and the CLI.

use crate::bruteforce::{random_completion, TriangleTable};
use crate::error::{Error, Result};
use crate::graph::EdgeLabelledGraph;
use crate::semigroup::Semigroup;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

/// A uniformly seeded random complete metric space on `n` points.
pub fn random_metric_space<R: Rng>(
    s: &Arc<Semigroup>,
    tt: &TriangleTable,
    n: usize,
    rng: &mut R,
) -> Result<EdgeLabelledGraph> {
    let empty = EdgeLabelledGraph::with_size(Arc::clone(s), n);
    random_completion(&empty, tt, rng)
        .ok_or_else(|| Error::Internal("the empty graph always has a completion".into()))
}

/// A random metric extension of `base` by `extra` new points.
pub fn random_metric_extension<R: Rng>(
    base: &EdgeLabelledGraph,
    tt: &TriangleTable,
    extra: usize,
    rng: &mut R,
) -> Result<EdgeLabelledGraph> {
    let n = base.vertex_count() + extra;
    let mut g = EdgeLabelledGraph::with_size(base.semigroup_arc(), n);
    for (u, v, l) in base.edges() {
        g.add_edge(u, v, l)?;
    }
    random_completion(&g, tt, rng).ok_or_else(|| {
        Error::Internal("every metric space extends by fresh points".into())
    })
}
