//! JSON wire formats: semigroups serialize directly; graphs, families,
//! convex orders and star structures resolve element names against a
//! semigroup on load.

use crate::blocks::BlockId;
use crate::convex::ConvexOrderedSpace;
use crate::cycle::{CycleFamily, FamilySpec, LabelledCycle};
use crate::error::{Error, Result};
use crate::graph::EdgeLabelledGraph;
use crate::semigroup::Semigroup;
use crate::star::{StarContext, StarStructure, StarVertex, TypeRel, VertexKind};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

pub fn semigroup_to_json(s: &Semigroup) -> serde_json::Value {
    serde_json::json!({
        "elements": s.elements,
        "oplus": s.oplus,
        "leq": s.leq,
    })
}

pub fn semigroup_from_json(v: &serde_json::Value) -> Result<Semigroup> {
    #[derive(Deserialize)]
    struct Raw {
        elements: Vec<String>,
        oplus: Vec<Vec<usize>>,
        leq: Vec<Vec<bool>>,
    }
    let raw: Raw = serde_json::from_value(v.clone())
        .map_err(|e| Error::input(format!("bad semigroup JSON: {e}")))?;
    Semigroup::new(raw.elements, raw.oplus, raw.leq)
}

#[derive(Serialize, Deserialize)]
struct EdgeJson {
    u: String,
    v: String,
    d: String,
}

pub fn graph_to_json(g: &EdgeLabelledGraph) -> serde_json::Value {
    let edges: Vec<EdgeJson> = g
        .edges()
        .into_iter()
        .map(|(u, v, d)| EdgeJson {
            u: g.vertex_name(u).to_string(),
            v: g.vertex_name(v).to_string(),
            d: g.semigroup().name(d).to_string(),
        })
        .collect();
    serde_json::json!({
        "vertices": g.vertex_names(),
        "edges": edges,
    })
}

pub fn graph_from_json(s: &Arc<Semigroup>, v: &serde_json::Value) -> Result<EdgeLabelledGraph> {
    #[derive(Deserialize)]
    struct Raw {
        vertices: Vec<String>,
        #[serde(default)]
        edges: Vec<EdgeJson>,
    }
    let raw: Raw =
        serde_json::from_value(v.clone()).map_err(|e| Error::input(format!("bad graph JSON: {e}")))?;
    let mut g = EdgeLabelledGraph::new(Arc::clone(s), raw.vertices);
    for e in raw.edges {
        let u = g.vertex_by_name(&e.u)?;
        let w = g.vertex_by_name(&e.v)?;
        let d = s.elem_by_name(&e.d)?;
        g.add_edge(u, w, d)?;
    }
    Ok(g)
}

pub fn family_to_json(s: &Semigroup, f: &FamilySpec) -> serde_json::Value {
    match f {
        FamilySpec::Finite(fam) => {
            let cycles: Vec<Vec<String>> = fam.iter().map(|c| c.names(s)).collect();
            serde_json::json!({ "cycles": cycles })
        }
        FamilySpec::OddPerimeterBelow { p } => {
            serde_json::json!({ "kind": "odd_perimeter_below", "p": p })
        }
    }
}

pub fn family_from_json(s: &Semigroup, v: &serde_json::Value) -> Result<FamilySpec> {
    if let Some(kind) = v.get("kind") {
        let kind = kind
            .as_str()
            .ok_or_else(|| Error::input("family kind must be a string"))?;
        match kind {
            "odd_perimeter_below" => {
                let p = v
                    .get("p")
                    .and_then(|x| x.as_u64())
                    .ok_or_else(|| Error::input("odd_perimeter_below needs integer p"))?;
                return Ok(FamilySpec::OddPerimeterBelow { p });
            }
            other => return Err(Error::input(format!("unknown family kind {other:?}"))),
        }
    }
    #[derive(Deserialize)]
    struct Raw {
        cycles: Vec<Vec<String>>,
    }
    let raw: Raw = serde_json::from_value(v.clone())
        .map_err(|e| Error::input(format!("bad family JSON: {e}")))?;
    let mut fam = CycleFamily::new();
    for labels in raw.cycles {
        let elems = labels
            .iter()
            .map(|l| s.elem_by_name(l))
            .collect::<Result<Vec<_>>>()?;
        fam.insert(LabelledCycle::new(elems)?);
    }
    Ok(FamilySpec::Finite(fam))
}

pub fn ordered_space_to_json(a: &ConvexOrderedSpace) -> serde_json::Value {
    let mut base = graph_to_json(&a.base);
    let orders: BTreeMap<String, Vec<[String; 2]>> = a
        .orders
        .iter()
        .map(|(b, set)| {
            (
                b.0.to_string(),
                set.iter()
                    .map(|&(u, v)| {
                        [
                            a.base.vertex_name(u).to_string(),
                            a.base.vertex_name(v).to_string(),
                        ]
                    })
                    .collect(),
            )
        })
        .collect();
    base["orders"] = serde_json::json!(orders);
    base
}

pub fn ordered_space_from_json(
    s: &Arc<Semigroup>,
    v: &serde_json::Value,
) -> Result<ConvexOrderedSpace> {
    let base = graph_from_json(s, v)?;
    let mut orders: BTreeMap<BlockId, BTreeSet<(usize, usize)>> = BTreeMap::new();
    if let Some(map) = v.get("orders") {
        let map = map
            .as_object()
            .ok_or_else(|| Error::input("orders must be an object keyed by block id"))?;
        for (key, pairs) in map {
            let block = BlockId(
                key.parse()
                    .map_err(|_| Error::input(format!("bad block id {key:?}")))?,
            );
            let pairs: Vec<[String; 2]> = serde_json::from_value(pairs.clone())
                .map_err(|e| Error::input(format!("bad order pairs: {e}")))?;
            let mut set = BTreeSet::new();
            for [u, w] in pairs {
                set.insert((base.vertex_by_name(&u)?, base.vertex_by_name(&w)?));
            }
            orders.insert(block, set);
        }
    }
    Ok(ConvexOrderedSpace { base, orders })
}

pub fn star_to_json(ctx: &StarContext, st: &StarStructure) -> serde_json::Value {
    let s = &ctx.semigroup;
    let vertices: Vec<serde_json::Value> = st
        .vertices
        .iter()
        .map(|v| match v.kind {
            VertexKind::Original => serde_json::json!({"id": v.name, "kind": "original"}),
            VertexKind::Ball(b) => serde_json::json!({"id": v.name, "kind": {"ball": b.0}}),
        })
        .collect();
    let originals = st.originals();
    let mut distances = Vec::new();
    for (i, &u) in originals.iter().enumerate() {
        for &v in originals.iter().skip(i + 1) {
            if let Some(d) = st.distance(u, v) {
                distances.push(serde_json::json!({
                    "u": st.vertices[u].name,
                    "v": st.vertices[v].name,
                    "d": s.name(d),
                }));
            }
        }
    }
    let fb: Vec<serde_json::Value> = st
        .f_b
        .iter()
        .map(|(&(v, b), &ball)| {
            serde_json::json!({
                "v": st.vertices[v].name,
                "block": b.0,
                "ball": st.vertices[ball].name,
            })
        })
        .collect();
    let fbb: Vec<serde_json::Value> = st
        .f_bb
        .iter()
        .map(|(&(ball, b), &target)| {
            serde_json::json!({
                "v": st.vertices[ball].name,
                "block": b.0,
                "ball": st.vertices[target].name,
            })
        })
        .collect();
    let rels: Vec<serde_json::Value> = st
        .type_rels
        .iter()
        .map(|r| {
            serde_json::json!({
                "k": r.blocks.len(),
                "type": r.key.iter().map(|&e| s.name(e)).collect::<Vec<_>>(),
                "xs": r.xs.iter().map(|&x| st.vertices[x].name.clone()).collect::<Vec<_>>(),
                "ys": r.ys.iter().map(|&y| st.vertices[y].name.clone()).collect::<Vec<_>>(),
            })
        })
        .collect();
    let mut out = serde_json::json!({
        "vertices": vertices,
        "distances": distances,
        "fB": fb,
        "fBB": fbb,
        "type_rels": rels,
    });
    if let Some(order) = &st.order {
        out["order"] = serde_json::json!(order
            .iter()
            .map(|&v| st.vertices[v].name.clone())
            .collect::<Vec<_>>());
    }
    out
}

pub fn star_from_json(ctx: &StarContext, v: &serde_json::Value) -> Result<StarStructure> {
    let s = &ctx.semigroup;
    let verts = v
        .get("vertices")
        .and_then(|x| x.as_array())
        .ok_or_else(|| Error::input("star JSON needs a vertices array"))?;
    let mut vertices = Vec::new();
    for item in verts {
        let id = item
            .get("id")
            .and_then(|x| x.as_str())
            .ok_or_else(|| Error::input("vertex needs an id"))?;
        let kind = item
            .get("kind")
            .ok_or_else(|| Error::input("vertex needs a kind"))?;
        let kind = if kind.as_str() == Some("original") {
            VertexKind::Original
        } else if let Some(b) = kind.get("ball").and_then(|x| x.as_u64()) {
            let b = BlockId(b as usize);
            if b.0 >= ctx.lattice.blocks.len() {
                return Err(Error::input(format!("unknown block id {}", b.0)));
            }
            VertexKind::Ball(b)
        } else {
            return Err(Error::input("vertex kind must be \"original\" or {\"ball\": id}"));
        };
        vertices.push(StarVertex {
            name: id.to_string(),
            kind,
        });
    }
    let n = vertices.len();
    let by_name = |name: &str| -> Result<usize> {
        vertices
            .iter()
            .position(|x| x.name == name)
            .ok_or_else(|| Error::input(format!("unknown vertex {name:?}")))
    };
    let mut st = StarStructure {
        vertices: vertices.clone(),
        distances: vec![None; n * n],
        f_b: BTreeMap::new(),
        f_bb: BTreeMap::new(),
        type_rels: BTreeSet::new(),
        order: None,
    };
    for item in v
        .get("distances")
        .and_then(|x| x.as_array())
        .unwrap_or(&vec![])
    {
        let u = by_name(item.get("u").and_then(|x| x.as_str()).unwrap_or_default())?;
        let w = by_name(item.get("v").and_then(|x| x.as_str()).unwrap_or_default())?;
        let d = s.elem_by_name(item.get("d").and_then(|x| x.as_str()).unwrap_or_default())?;
        st.set_distance(u, w, d)?;
    }
    for item in v.get("fB").and_then(|x| x.as_array()).unwrap_or(&vec![]) {
        let vtx = by_name(item.get("v").and_then(|x| x.as_str()).unwrap_or_default())?;
        let block = BlockId(
            item.get("block")
                .and_then(|x| x.as_u64())
                .ok_or_else(|| Error::input("fB entry needs a block id"))? as usize,
        );
        let ball = by_name(item.get("ball").and_then(|x| x.as_str()).unwrap_or_default())?;
        st.f_b.insert((vtx, block), ball);
    }
    for item in v.get("fBB").and_then(|x| x.as_array()).unwrap_or(&vec![]) {
        let vtx = by_name(item.get("v").and_then(|x| x.as_str()).unwrap_or_default())?;
        let block = BlockId(
            item.get("block")
                .and_then(|x| x.as_u64())
                .ok_or_else(|| Error::input("fBB entry needs a block id"))? as usize,
        );
        let ball = by_name(item.get("ball").and_then(|x| x.as_str()).unwrap_or_default())?;
        st.f_bb.insert((vtx, block), ball);
    }
    for item in v
        .get("type_rels")
        .and_then(|x| x.as_array())
        .unwrap_or(&vec![])
    {
        let key: Vec<String> = serde_json::from_value(
            item.get("type")
                .cloned()
                .ok_or_else(|| Error::input("type relation needs a type key"))?,
        )
        .map_err(|e| Error::input(format!("bad type key: {e}")))?;
        let mut key = key
            .iter()
            .map(|l| s.elem_by_name(l))
            .collect::<Result<Vec<_>>>()?;
        key.sort();
        let xs: Vec<String> = serde_json::from_value(item.get("xs").cloned().unwrap_or_default())
            .map_err(|e| Error::input(format!("bad xs: {e}")))?;
        let ys: Vec<String> = serde_json::from_value(item.get("ys").cloned().unwrap_or_default())
            .map_err(|e| Error::input(format!("bad ys: {e}")))?;
        let xs = xs.iter().map(|x| by_name(x)).collect::<Result<Vec<_>>>()?;
        let ys = ys.iter().map(|y| by_name(y)).collect::<Result<Vec<_>>>()?;
        let blocks = xs
            .iter()
            .map(|&x| match vertices[x].kind {
                VertexKind::Ball(b) => Ok(b),
                VertexKind::Original => Err(Error::input("type relation entries must be balls")),
            })
            .collect::<Result<Vec<_>>>()?;
        st.type_rels.insert(TypeRel::canonical(blocks, key, xs, ys));
    }
    if let Some(order) = v.get("order").and_then(|x| x.as_array()) {
        let mut seq = Vec::new();
        for item in order {
            seq.push(by_name(item.as_str().unwrap_or_default())?);
        }
        st.order = Some(seq);
    }
    Ok(st)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::star::lift_star;

    #[test]
    fn semigroup_round_trip() {
        let s = fixtures::sauer();
        let json = semigroup_to_json(&s);
        let back = semigroup_from_json(&json).unwrap();
        assert_eq!(s, back);
    }

    #[test]
    fn graph_round_trip() {
        let s = Arc::new(fixtures::zk(5));
        let mut g = EdgeLabelledGraph::with_size(Arc::clone(&s), 3);
        g.add_edge(0, 1, s.elem_by_name("2").unwrap()).unwrap();
        let json = graph_to_json(&g);
        let back = graph_from_json(&s, &json).unwrap();
        assert_eq!(g, back);
    }

    #[test]
    fn family_round_trips() {
        let s = fixtures::zk(5);
        let f = FamilySpec::OddPerimeterBelow { p: 7 };
        let back = family_from_json(&s, &family_to_json(&s, &f)).unwrap();
        assert_eq!(f, back);
    }

    #[test]
    fn star_round_trip() {
        let s = Arc::new(fixtures::sauer());
        let ctx = StarContext::new(Arc::clone(&s), FamilySpec::empty()).unwrap();
        let mut g = EdgeLabelledGraph::with_size(Arc::clone(&s), 3);
        let e = |n: &str| s.elem_by_name(n).unwrap();
        g.add_edge(0, 1, e("1")).unwrap();
        g.add_edge(0, 2, e("3")).unwrap();
        g.add_edge(1, 2, e("4")).unwrap();
        let st = lift_star(&ctx, &g).unwrap();
        let json = star_to_json(&ctx, &st);
        let back = star_from_json(&ctx, &json).unwrap();
        assert_eq!(st, back);
    }
}
