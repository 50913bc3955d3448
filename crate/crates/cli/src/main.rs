//! Command-line front end. All data goes to stdout as JSON (or as plain
//! tables with --human), diagnostics to stderr. Exit codes: 0 success or
//! property holds, 1 property fails (witness printed), 2 input error,
//! 3 resource limit.

use clap::{Parser, Subcommand};
use smv_core::blocks::{compute_blocks, is_archimedean};
use smv_core::census;
use smv_core::convex::{self, BlockTieBreak};
use smv_core::cycle::FamilySpec;
use smv_core::error::Error;
use smv_core::families::{self, BoundedCheckConfig};
use smv_core::fixtures;
use smv_core::gadget;
use smv_core::graph::{strong_amalgam, EdgeLabelledGraph, PathBudget};
use smv_core::json;
use smv_core::magic;
use smv_core::semigroup::Semigroup;
use smv_core::star::{self, StarContext};
use std::path::Path;
use std::sync::Arc;

#[derive(Parser)]
#[command(name = "smv", about = "Semigroup-valued metric space toolkit")]
struct Cli {
    /// Thread count for parallel sweeps (default: all cores). Output is
    /// identical for every thread count.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Seed for randomized suites exposed through the CLI.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Render human-readable tables instead of JSON.
    #[arg(long, global = true)]
    human: bool,

    /// Write the JSON output to a file instead of stdout.
    #[arg(long, global = true)]
    output: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the semigroup axioms and report violations with witnesses.
    VerifySemigroup {
        #[arg(long)]
        semigroup: String,
    },
    /// Block partition, block order, meets/joins and lattice flags.
    Blocks {
        #[arg(long)]
        semigroup: String,
    },
    /// Shortest-path completion of an edge-labelled graph.
    Complete {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        semigroup: Option<String>,
        #[arg(long)]
        family: Option<String>,
        #[arg(long, default_value_t = 12)]
        max_vertices: usize,
        #[arg(long, default_value_t = 200_000)]
        max_paths: usize,
    },
    /// Strong amalgam of two complete metric spaces over the substructure
    /// they share by vertex name.
    Amalgamate {
        #[arg(long)]
        b1: String,
        #[arg(long)]
        b2: String,
        #[arg(long)]
        semigroup: Option<String>,
        #[arg(long)]
        family: Option<String>,
    },
    /// Does the graph omit homomorphic images of the family?
    ForbCheck {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        semigroup: Option<String>,
        #[arg(long)]
        family: String,
    },
    /// Bounded family property checks.
    FamilyCheck {
        #[arg(long)]
        semigroup: String,
        #[arg(long)]
        family: String,
        #[arg(long, value_parser = ["omissible", "disobedient", "meet-sync", "confined", "irreducible"])]
        property: String,
        /// Label subset for the confined count (element names).
        #[arg(long, value_delimiter = ',')]
        subset: Vec<String>,
        #[arg(long, default_value_t = 8)]
        max_cycle_len: usize,
        #[arg(long, default_value_t = 4)]
        max_path_len: usize,
        #[arg(long, default_value_t = 3)]
        max_family_size: usize,
        #[arg(long, default_value_t = 6)]
        max_space_vertices: usize,
    },
    /// Ball-vertex expansion of a complete metric space; with orders in
    /// the input, the ordered expansion.
    Lift {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        semigroup: Option<String>,
        #[arg(long)]
        family: Option<String>,
    },
    /// Complete a star structure through the witness-gadget pipeline.
    CompleteStar {
        #[arg(long)]
        star: String,
        #[arg(long)]
        semigroup: String,
        #[arg(long)]
        family: Option<String>,
    },
    /// Validate the convex-order conditions of an ordered space.
    ConvexValidate {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        semigroup: Option<String>,
        #[arg(long)]
        family: Option<String>,
    },
    /// Complete an ordered star structure, extending its order.
    ConvexComplete {
        #[arg(long)]
        star: String,
        #[arg(long)]
        semigroup: String,
        #[arg(long)]
        family: Option<String>,
    },
    /// Emit the magic semigroup and forbidden family for the parameters.
    Magic {
        #[arg(long)]
        delta: u32,
        #[arg(long)]
        k1: u32,
        #[arg(long)]
        k2: u32,
        #[arg(long)]
        c: Option<u32>,
        #[arg(long)]
        c0: Option<u32>,
        #[arg(long)]
        c1: Option<u32>,
        #[arg(long)]
        m: Option<u32>,
        #[arg(long, default_value_t = 12)]
        max_len: usize,
    },
    /// Census of triangle-constrained classes.
    Enumerate {
        #[arg(long)]
        labels: usize,
        #[arg(long)]
        base_cap: Option<usize>,
        #[arg(long, default_value_t = true)]
        strong: bool,
        #[arg(long, default_value_t = true)]
        primitive: bool,
        #[arg(long, default_value_t = true)]
        nonfree: bool,
        #[arg(long, default_value_t = true)]
        all_labels: bool,
        /// Resume from / write progress to this checkpoint file.
        #[arg(long)]
        checkpoint: Option<String>,
        /// Masks per checkpoint step.
        #[arg(long, default_value_t = 1 << 24)]
        step: u64,
    },
    /// Fit archimedean semigroups to a triangle class.
    FitSemigroup {
        #[arg(long)]
        labels: usize,
        /// Allowed triangles as a bitmask over the sorted triple list.
        #[arg(long)]
        mask: u64,
    },
    /// Brute-force partition arrow check.
    Arrow {
        #[arg(long)]
        c: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        a: String,
        #[arg(short = 'k', long, default_value_t = 2)]
        colours: usize,
        #[arg(long, default_value_t = 16)]
        budget: usize,
        #[arg(long)]
        semigroup: Option<String>,
    },
    /// Canonical independence of two vertex sets over a third.
    SirCheck {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        semigroup: Option<String>,
        #[arg(long, value_delimiter = ',')]
        a: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        b: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        c: Vec<String>,
    },
}

fn read_json(path: &str) -> Result<serde_json::Value, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::input(format!("cannot read {path:?}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| Error::input(format!("bad JSON in {path:?}: {e}")))
}

/// Resolves a semigroup argument: a JSON file path, a fixture name, or a
/// file under $SMV_FIXTURES.
fn load_semigroup(spec: &str) -> Result<Arc<Semigroup>, Error> {
    if let Ok(dir) = std::env::var("SMV_FIXTURES") {
        let candidate = format!("{dir}/{spec}.json");
        if Path::new(&candidate).exists() {
            return Ok(Arc::new(json::semigroup_from_json(&read_json(&candidate)?)?));
        }
    }
    if Path::new(spec).exists() {
        return Ok(Arc::new(json::semigroup_from_json(&read_json(spec)?)?));
    }
    fixtures::by_name(spec).map(Arc::new)
}

/// Loads a graph file, taking the semigroup from --semigroup or from the
/// file's own "semigroup" key (inline object, path, or fixture name).
fn load_graph(
    path: &str,
    semigroup: &Option<String>,
) -> Result<(Arc<Semigroup>, serde_json::Value), Error> {
    let value = read_json(path)?;
    let s = match semigroup {
        Some(spec) => load_semigroup(spec)?,
        None => match value.get("semigroup") {
            Some(serde_json::Value::String(spec)) => load_semigroup(spec)?,
            Some(inline) => Arc::new(json::semigroup_from_json(inline)?),
            None => {
                return Err(Error::input(
                    "no semigroup: pass --semigroup or embed a \"semigroup\" key",
                ))
            }
        },
    };
    Ok((s, value))
}

fn load_family(s: &Semigroup, family: &Option<String>) -> Result<FamilySpec, Error> {
    match family {
        None => Ok(FamilySpec::empty()),
        Some(path) => json::family_from_json(s, &read_json(path)?),
    }
}

fn emit(cli: &Cli, value: &serde_json::Value) {
    let text = if cli.human {
        human_render(value)
    } else {
        serde_json::to_string_pretty(value).expect("serializable")
    };
    match &cli.output {
        Some(path) => std::fs::write(path, text + "\n").expect("write output"),
        None => println!("{text}"),
    }
}

fn human_render(value: &serde_json::Value) -> String {
    fn rec(v: &serde_json::Value, indent: usize, out: &mut String) {
        let pad = "  ".repeat(indent);
        match v {
            serde_json::Value::Object(map) => {
                for (k, x) in map {
                    if x.is_object() || (x.is_array() && x.as_array().unwrap().len() > 4) {
                        out.push_str(&format!("{pad}{k}:\n"));
                        rec(x, indent + 1, out);
                    } else {
                        out.push_str(&format!("{pad}{k}: {x}\n"));
                    }
                }
            }
            serde_json::Value::Array(items) => {
                for x in items {
                    if x.is_object() {
                        rec(x, indent, out);
                        out.push('\n');
                    } else {
                        out.push_str(&format!("{pad}- {x}\n"));
                    }
                }
            }
            other => out.push_str(&format!("{pad}{other}\n")),
        }
    }
    let mut out = String::new();
    rec(value, 0, &mut out);
    out
}

fn run(cli: &Cli) -> Result<(serde_json::Value, i32), Error> {
    match &cli.command {
        Command::VerifySemigroup { semigroup } => {
            let value = if Path::new(semigroup).exists() {
                read_json(semigroup)?
            } else {
                json::semigroup_to_json(&fixtures::by_name(semigroup)?)
            };
            // Parse without axioms, then verify explicitly.
            let parse = |key: &str| -> Result<serde_json::Value, Error> {
                value
                    .get(key)
                    .cloned()
                    .ok_or_else(|| Error::input(format!("semigroup JSON needs {key:?}")))
            };
            let elements: Vec<String> = serde_json::from_value(parse("elements")?)
                .map_err(|e| Error::input(format!("bad elements: {e}")))?;
            let oplus: Vec<Vec<usize>> = serde_json::from_value(parse("oplus")?)
                .map_err(|e| Error::input(format!("bad oplus: {e}")))?;
            let leq: Vec<Vec<bool>> = serde_json::from_value(parse("leq")?)
                .map_err(|e| Error::input(format!("bad leq: {e}")))?;
            let s = Semigroup::new_unchecked(elements, oplus, leq);
            if s.oplus.len() != s.elements.len()
                || s.oplus.iter().any(|r| r.len() != s.elements.len())
                || s.leq.len() != s.elements.len()
                || s.leq.iter().any(|r| r.len() != s.elements.len())
                || s.oplus.iter().flatten().any(|&v| v >= s.elements.len())
            {
                return Err(Error::input("tables are not square over the element list"));
            }
            let report = s.verify();
            let ok = report.is_empty();
            Ok((
                serde_json::json!({ "valid": ok, "violations": report }),
                if ok { 0 } else { 1 },
            ))
        }
        Command::Blocks { semigroup } => {
            let s = load_semigroup(semigroup)?;
            let l = compute_blocks(&s);
            let blocks: Vec<_> = l
                .blocks
                .iter()
                .map(|b| {
                    serde_json::json!({
                        "id": b.id.0,
                        "members": s.names(&b.members),
                    })
                })
                .collect();
            let arch = is_archimedean(&s);
            Ok((
                serde_json::json!({
                    "blocks": blocks,
                    "block_leq": l.block_leq,
                    "meet_table": l.meet_table,
                    "join_table": l.join_table,
                    "meet_irreducibles": l.meet_irreducibles,
                    "meet_reducibles": l.meet_reducibles,
                    "maximum_block": l.maximum_block,
                    "is_lattice": l.is_lattice,
                    "is_distributive": l.is_distributive,
                    "archimedean": arch.is_ok(),
                }),
                0,
            ))
        }
        Command::Complete {
            graph,
            semigroup,
            family,
            max_vertices,
            max_paths,
        } => {
            let (s, value) = load_graph(graph, semigroup)?;
            let g = json::graph_from_json(&s, &value)?;
            let fam = load_family(&s, family)?;
            let budget = PathBudget {
                max_vertices: *max_vertices,
                max_paths_per_pair: *max_paths,
            };
            let done = g.shortest_path_completion(&fam, &budget)?;
            Ok((json::graph_to_json(&done), 0))
        }
        Command::Amalgamate {
            b1,
            b2,
            semigroup,
            family,
        } => {
            let (s, v1) = load_graph(b1, semigroup)?;
            let g1 = json::graph_from_json(&s, &v1)?;
            let v2 = read_json(b2)?;
            let g2 = json::graph_from_json(&s, &v2)?;
            let fam = load_family(&s, family)?;
            // Shared substructure: the vertices common to both by name.
            let shared: Vec<String> = g1
                .vertex_names()
                .iter()
                .filter(|n| g2.vertex_names().contains(n))
                .cloned()
                .collect();
            let mut a = EdgeLabelledGraph::new(Arc::clone(&s), shared.clone());
            let inj1: Vec<usize> = shared
                .iter()
                .map(|n| g1.vertex_by_name(n))
                .collect::<Result<_, _>>()?;
            let inj2: Vec<usize> = shared
                .iter()
                .map(|n| g2.vertex_by_name(n))
                .collect::<Result<_, _>>()?;
            for i in 0..shared.len() {
                for j in i + 1..shared.len() {
                    if let Some(d) = g1.label(inj1[i], inj1[j]) {
                        a.add_edge(i, j, d)?;
                    }
                }
            }
            let (result, _, _) =
                strong_amalgam(&g1, &g2, &a, &inj1, &inj2, &fam, &PathBudget::default())?;
            Ok((json::graph_to_json(&result), 0))
        }
        Command::ForbCheck {
            graph,
            semigroup,
            family,
        } => {
            let (s, value) = load_graph(graph, semigroup)?;
            let g = json::graph_from_json(&s, &value)?;
            let fam = json::family_from_json(&s, &read_json(family)?)?;
            match g.check_forb(&fam)? {
                None => Ok((serde_json::json!({ "omits": true }), 0)),
                Some(w) => Ok((
                    serde_json::json!({
                        "omits": false,
                        "cycle": w.cycle.names(&s),
                        "image": w.image.iter().map(|&v| g.vertex_name(v)).collect::<Vec<_>>(),
                    }),
                    1,
                )),
            }
        }
        Command::FamilyCheck {
            semigroup,
            family,
            property,
            subset,
            max_cycle_len,
            max_path_len,
            max_family_size,
            max_space_vertices,
        } => {
            let s = load_semigroup(semigroup)?;
            let fam = json::family_from_json(&s, &read_json(family)?)?;
            let cfg = BoundedCheckConfig {
                max_cycle_len: *max_cycle_len,
                max_path_len: *max_path_len,
                max_family_size: *max_family_size,
                max_space_vertices: *max_space_vertices,
            };
            match property.as_str() {
                "omissible" => {
                    let rep = families::check_omissible(&s, &fam, &cfg)?;
                    let code = if rep.passed() { 0 } else { 1 };
                    Ok((serde_json::to_value(&rep).unwrap(), code))
                }
                "disobedient" => {
                    let found = families::find_disobedient(&s, &fam, &cfg)?;
                    let cycles: Vec<Vec<String>> = found.iter().map(|c| c.names(&s)).collect();
                    let code = if cycles.is_empty() { 0 } else { 1 };
                    Ok((
                        serde_json::json!({
                            "contains_all_disobedient_up_to_bound": cycles.is_empty(),
                            "witnesses": cycles,
                        }),
                        code,
                    ))
                }
                "meet-sync" => {
                    let rep = families::check_meet_sync(&s, &fam, &cfg)?;
                    let code = if rep.passed() { 0 } else { 1 };
                    Ok((serde_json::to_value(&rep).unwrap(), code))
                }
                "confined" => {
                    let elems = subset
                        .iter()
                        .map(|n| s.elem_by_name(n))
                        .collect::<Result<Vec<_>, _>>()?;
                    let rep = families::is_confined(&s, &fam, &elems)?;
                    Ok((serde_json::to_value(&rep).unwrap(), 0))
                }
                "irreducible" => {
                    let irr = families::irreducible_wrt_family(&s, &fam, &cfg)?;
                    Ok((serde_json::json!({ "irreducible": s.names(&irr) }), 0))
                }
                _ => unreachable!("clap validates the property"),
            }
        }
        Command::Lift {
            graph,
            semigroup,
            family,
        } => {
            let (s, value) = load_graph(graph, semigroup)?;
            let fam = load_family(&s, family)?;
            let ctx = StarContext::new(Arc::clone(&s), fam)?;
            if value.get("orders").is_some() {
                let a = json::ordered_space_from_json(&s, &value)?;
                let tb = BlockTieBreak::default_for(&ctx.lattice);
                let st = convex::lift_ordered(&ctx, &a, &tb)?;
                Ok((json::star_to_json(&ctx, &st), 0))
            } else {
                let g = json::graph_from_json(&s, &value)?;
                let st = star::lift_star(&ctx, &g)?;
                Ok((json::star_to_json(&ctx, &st), 0))
            }
        }
        Command::CompleteStar {
            star: star_path,
            semigroup,
            family,
        } => {
            let s = load_semigroup(semigroup)?;
            let fam = load_family(&s, family)?;
            let ctx = StarContext::new(Arc::clone(&s), fam)?;
            let st = json::star_from_json(&ctx, &read_json(star_path)?)?;
            let done = gadget::complete_star(&ctx, &st, &PathBudget::default())?;
            Ok((json::star_to_json(&ctx, &done), 0))
        }
        Command::ConvexValidate {
            graph,
            semigroup,
            family,
        } => {
            let (s, value) = load_graph(graph, semigroup)?;
            let fam = load_family(&s, family)?;
            let ctx = StarContext::new(Arc::clone(&s), fam)?;
            let a = json::ordered_space_from_json(&s, &value)?;
            let violations = convex::validate_convex_order(&ctx, &a)?;
            let ok = violations.is_empty();
            Ok((
                serde_json::json!({ "valid": ok, "violations": violations }),
                if ok { 0 } else { 1 },
            ))
        }
        Command::ConvexComplete {
            star: star_path,
            semigroup,
            family,
        } => {
            let s = load_semigroup(semigroup)?;
            let fam = load_family(&s, family)?;
            let ctx = StarContext::new(Arc::clone(&s), fam)?;
            let st = json::star_from_json(&ctx, &read_json(star_path)?)?;
            let done = convex::complete_ordered(&ctx, &st, None, &PathBudget::default())?;
            Ok((json::star_to_json(&ctx, &done), 0))
        }
        Command::Magic {
            delta,
            k1,
            k2,
            c,
            c0,
            c1,
            m,
            max_len,
        } => {
            let c = match (c, c0, c1) {
                (Some(c), None, None) => *c,
                (None, Some(c0), Some(c1)) => {
                    if c0.abs_diff(*c1) > 1 {
                        return Err(Error::input(
                            "parameters with |C0 - C1| > 1 are outside this toolkit's scope \
                             (the two-periodicity cases are not covered)",
                        ));
                    }
                    *c0.min(c1)
                }
                _ => {
                    return Err(Error::input(
                        "pass either --c or both --c0 and --c1",
                    ))
                }
            };
            let relevance = magic::check_relevant(*delta, *k1, *k2, c);
            if !relevance.relevant {
                return Ok((
                    serde_json::json!({
                        "relevant": false,
                        "failed_clauses": relevance.failed_clauses,
                    }),
                    1,
                ));
            }
            // Default M: the largest admissible value within [K1, K2].
            let m = match m {
                Some(m) => *m,
                None => ((c - delta - 1) / 2).min(*k2).max(delta.div_ceil(2)).max(*k1),
            };
            let params = magic::MagicParams::new(*delta, *k1, *k2, c, m)?;
            let s = magic::magic_semigroup(*delta, m, c)?;
            let (family, longest) = magic::build_forbidden_family(&params, *max_len)?;
            Ok((
                serde_json::json!({
                    "relevant": true,
                    "params": params,
                    "semigroup": json::semigroup_to_json(&s),
                    "family": json::family_to_json(&s, &FamilySpec::Finite(family)),
                    "longest_member": longest,
                }),
                0,
            ))
        }
        Command::Enumerate {
            labels,
            base_cap,
            strong,
            primitive,
            nonfree,
            all_labels,
            checkpoint,
            step,
        } => {
            let opts = census::CensusOptions {
                base_cap: *base_cap,
                require_strong: *strong,
                require_primitive: *primitive,
                require_nonfree: *nonfree,
                require_all_labels: *all_labels,
            };
            let tables = census::ClassTables::new(*labels)?;
            let total = 1u64 << tables.bit_count();
            let mut state = match checkpoint.as_ref().filter(|p| Path::new(p).exists()) {
                Some(p) => {
                    let v: census::Checkpoint = serde_json::from_value(read_json(p)?)
                        .map_err(|e| Error::input(format!("bad checkpoint: {e}")))?;
                    if v.n_labels != *labels {
                        return Err(Error::input("checkpoint is for a different label count"));
                    }
                    v
                }
                None => census::Checkpoint {
                    n_labels: *labels,
                    options: opts,
                    cursor: 0,
                    scanned: 0,
                    records: Vec::new(),
                },
            };
            while state.cursor < total {
                let to = (state.cursor + step).min(total);
                let found = census::census_window(&tables, &opts, state.cursor, to);
                state.scanned += to - state.cursor;
                state.records.extend(found);
                state.cursor = to;
                if let Some(p) = checkpoint {
                    std::fs::write(p, serde_json::to_string(&state).unwrap())
                        .map_err(|e| Error::input(format!("cannot write checkpoint: {e}")))?;
                    eprintln!(
                        "checkpoint: {}/{} masks scanned, {} classes",
                        state.cursor,
                        total,
                        state.records.len()
                    );
                }
            }
            state.records.sort_by_key(|r| r.mask);
            let lines: Vec<serde_json::Value> = state
                .records
                .iter()
                .map(|r| serde_json::to_value(r).unwrap())
                .collect();
            Ok((
                serde_json::json!({
                    "labels": labels,
                    "count": state.records.len(),
                    "classes": lines,
                }),
                0,
            ))
        }
        Command::FitSemigroup { labels, mask } => {
            let cfg = BoundedCheckConfig {
                max_cycle_len: 6,
                max_path_len: 3,
                max_family_size: 2,
                max_space_vertices: 4,
            };
            let fits = census::fit_semigroup(*labels, *mask, &cfg)?;
            let values: Vec<serde_json::Value> = fits
                .iter()
                .map(|f| {
                    serde_json::json!({
                        "semigroup": json::semigroup_to_json(&f.semigroup),
                        "family": f.family,
                    })
                })
                .collect();
            Ok((
                serde_json::json!({ "count": fits.len(), "fits": values }),
                0,
            ))
        }
        Command::Arrow {
            c,
            b,
            a,
            colours,
            budget,
            semigroup,
        } => {
            let (s, vc) = load_graph(c, semigroup)?;
            let gc = json::graph_from_json(&s, &vc)?;
            let gb = json::graph_from_json(&s, &read_json(b)?)?;
            let ga = json::graph_from_json(&s, &read_json(a)?)?;
            let verdict = census::brute_force_arrow(&gc, &gb, &ga, *colours, *budget)?;
            let code = match &verdict {
                census::ArrowVerdict::Holds => 0,
                census::ArrowVerdict::Fails { .. } => 1,
                census::ArrowVerdict::Unknown => 3,
            };
            Ok((serde_json::to_value(&verdict).unwrap(), code))
        }
        Command::SirCheck {
            graph,
            semigroup,
            a,
            b,
            c,
        } => {
            let (s, value) = load_graph(graph, semigroup)?;
            let g = json::graph_from_json(&s, &value)?;
            let resolve = |names: &[String]| -> Result<Vec<usize>, Error> {
                names.iter().map(|n| g.vertex_by_name(n)).collect()
            };
            let independent = g.sir_independent(&resolve(a)?, &resolve(b)?, &resolve(c)?)?;
            Ok((
                serde_json::json!({ "independent": independent }),
                if independent { 0 } else { 1 },
            ))
        }
    }
}

fn error_json(err: &Error) -> serde_json::Value {
    match err {
        Error::NonMetricInput(cycle) => {
            serde_json::json!({ "error": "non_metric_input", "cycle": cycle })
        }
        Error::UndefinedInfimum { u, v, lengths } => serde_json::json!({
            "error": "undefined_infimum", "u": u, "v": v, "lengths": lengths,
        }),
        Error::ForbViolation { cycle, image } => serde_json::json!({
            "error": "forbidden_family_violation", "cycle": cycle, "image": image,
        }),
        Error::StarCycle { vertices } => serde_json::json!({
            "error": "non_metric_star_cycle", "vertices": vertices,
        }),
        Error::NoMaximumElement => serde_json::json!({ "error": "no_maximum_element" }),
        other => serde_json::json!({ "error": other.to_string() }),
    }
}

fn main() {
    let cli = Cli::parse();
    let outcome = smv_core::par::with_threads(cli.threads, || run(&cli));
    match outcome {
        Ok((value, code)) => {
            emit(&cli, &value);
            std::process::exit(code);
        }
        Err(err) => {
            let code = err.exit_code();
            if code == 1 {
                // Property failures print their witness as JSON on stdout.
                emit(&cli, &error_json(&err));
            }
            eprintln!("error: {err}");
            std::process::exit(code);
        }
    }
}
