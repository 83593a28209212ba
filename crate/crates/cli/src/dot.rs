//! Graphviz output for one tree under one spec.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use braid_regions::fast::analyze;
use braid_regions::ish::classify_tree;
use braid_regions::{ArrangementSpec, PlaneTree, Result};
use clap::ValueEnum;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RenderWhat {
    /// One cluster per maximal S-cadet sequence.
    Boxes,
    /// One cluster per S-connected component.
    Connected,
    /// Boxes plus the class quadruple as the graph label.
    Classification,
}

const PALETTE: [&str; 8] = [
    "#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462", "#b3de69", "#fccde5",
];

fn braces(nodes: &[usize]) -> String {
    let inner: Vec<String> = nodes.iter().map(ToString::to_string).collect();
    format!("{{{}}}", inner.join(","))
}

pub fn render(spec: &ArrangementSpec, tree: &PlaneTree, what: RenderWhat) -> Result<String> {
    let analysis = analyze(spec, tree)?;
    let label = match what {
        RenderWhat::Classification => Some(match classify_tree(spec, tree)? {
            Some(c) => c.to_string(),
            None => "zero-contribution".to_string(),
        }),
        _ => None,
    };

    // clusters hold (members, component); `boxed` counts boxes per node
    let mut clusters: Vec<(Vec<usize>, usize)> = Vec::new();
    let mut color: BTreeMap<usize, usize> = BTreeMap::new();
    let mut boxed: BTreeMap<usize, usize> = BTreeMap::new();
    let mut component = 0;
    for seq in &analysis.sequences {
        for comp in &seq.components {
            let ctx = &comp.context;
            for &v in ctx.nodes() {
                color.insert(v, component);
            }
            match what {
                RenderWhat::Connected => {
                    if ctx.nodes().len() > 1 {
                        clusters.push((ctx.nodes().to_vec(), component));
                    }
                }
                _ => {
                    for r in 1..=ctx.box_count() {
                        let members = ctx.box_nodes(r);
                        for &v in members {
                            *boxed.entry(v).or_default() += 1;
                        }
                        if members.len() > 1 {
                            clusters.push((members.to_vec(), component));
                        }
                    }
                }
            }
            component += 1;
        }
    }

    let mut out = String::from("digraph tree {\n");
    if let Some(l) = &label {
        let _ = writeln!(out, "  label=\"{l}\";\n  labelloc=t;");
    }
    out.push_str("  node [shape=circle, style=filled];\n");
    let mut placed = BTreeMap::new();
    for (i, (members, comp)) in clusters.iter().enumerate() {
        let _ = writeln!(out, "  subgraph cluster_{i} {{");
        let _ = writeln!(
            out,
            "    label=\"{}\";\n    color=\"{}\";",
            braces(members),
            PALETTE[comp % PALETTE.len()]
        );
        for &v in members {
            if placed.insert(v, i).is_none() {
                let _ = writeln!(out, "    {v};");
            }
        }
        out.push_str("  }\n");
    }
    for v in tree.preorder() {
        let fill = PALETTE[color[&v] % PALETTE.len()];
        let peripheries = if boxed.get(&v).copied().unwrap_or(0) > 1 {
            ", peripheries=2"
        } else {
            ""
        };
        let _ = writeln!(out, "  {v} [fillcolor=\"{fill}\"{peripheries}];");
    }
    for v in tree.preorder() {
        for (slot, c) in tree.children(v).iter().enumerate() {
            if let Some(c) = c {
                let _ = writeln!(out, "  {v} -> {c} [label=\"{slot}\"];");
            }
        }
    }
    out.push_str("}\n");
    Ok(out)
}
