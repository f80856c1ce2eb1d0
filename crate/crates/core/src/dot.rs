//! DOT (Graphviz) export for models and life trees.

use std::fmt::Write;

use crate::formula::AgentId;
use crate::lifetree::LifeTree;
use crate::model::SimplicialModel;

const PALETTE: &[&str] = &[
    "lightblue",
    "lightsalmon",
    "palegreen",
    "plum",
    "khaki",
    "lightgray",
];

fn agent_color(m: &SimplicialModel, agent: &AgentId) -> &'static str {
    let idx = m.agents().iter().position(|a| a == agent).unwrap_or(0);
    PALETTE[idx % PALETTE.len()]
}

/// Renders a model as an undirected graph: one node per vertex, colored
/// by agent, with each facet drawn as a clique. Shared edges are drawn
/// once; singleton facets show up as isolated nodes.
pub fn model_to_dot(m: &SimplicialModel) -> String {
    let mut out = String::new();
    writeln!(out, "graph model {{").unwrap();
    writeln!(out, "  node [style=filled];").unwrap();
    for (v, data) in m.vertices() {
        writeln!(
            out,
            "  \"{}\" [label=\"{}\\n{}\", fillcolor={}];",
            v.as_str(),
            v.as_str(),
            data.agent.as_str(),
            agent_color(m, &data.agent)
        )
        .unwrap();
    }
    let mut edges = std::collections::BTreeSet::new();
    for facet in m.facets() {
        let vs = facet.vertices();
        for i in 0..vs.len() {
            for j in i + 1..vs.len() {
                edges.insert((vs[i].clone(), vs[j].clone()));
            }
        }
    }
    for (u, v) in edges {
        writeln!(out, "  \"{}\" -- \"{}\";", u.as_str(), v.as_str()).unwrap();
    }
    writeln!(out, "}}").unwrap();
    out
}

/// Renders a life tree in the figure style: node labels are agent sets,
/// edge labels are single agents.
pub fn life_tree_to_dot(t: &LifeTree) -> String {
    let mut out = String::new();
    writeln!(out, "graph lifetree {{").unwrap();
    writeln!(out, "  node [shape=circle];").unwrap();
    for node in 0..t.len() {
        let label: Vec<&str> = t.label(node).iter().map(|a| a.as_str()).collect();
        writeln!(
            out,
            "  n{} [label=\"{{{}}}\"];",
            node,
            label.join(",")
        )
        .unwrap();
    }
    for node in 1..t.len() {
        let (parent, edge) = t.parent(node).expect("non-root has a parent");
        writeln!(
            out,
            "  n{} -- n{} [label=\"{}\"];",
            parent,
            node,
            edge.as_str()
        )
        .unwrap();
    }
    writeln!(out, "}}").unwrap();
    out
}
