use std::fmt::Write;

use super::dfs::{NodeStatus, SearchNode, SearchTree};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TreeFormat {
    Dot,
    Json,
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn label(n: &SearchNode) -> String {
    match &n.state {
        None => "error".to_owned(),
        Some(s) => match s.first() {
            None => "QED".to_owned(),
            Some(o) => format!("{} [{}]", o.obligation.goal, s.len()),
        },
    }
}

fn style(status: &NodeStatus) -> &'static str {
    match status {
        NodeStatus::Solved => ", style=filled, fillcolor=green",
        NodeStatus::Pruned { .. } => ", style=filled, fillcolor=orange",
        NodeStatus::Failed(_) => ", style=filled, fillcolor=lightgray",
        NodeStatus::DepthLimited => ", style=dashed",
        NodeStatus::Exhausted | NodeStatus::Unexplored => "",
    }
}

pub fn to_dot(tree: &SearchTree) -> String {
    let mut out = String::from("digraph search {\n  node [shape=box, fontname=\"monospace\"];\n");
    for (i, n) in tree.nodes.iter().enumerate() {
        let _ = writeln!(out, "  n{i} [label=\"{}\"{}];", escape(&label(n)), style(&n.status));
    }
    for (i, n) in tree.nodes.iter().enumerate() {
        for &c in &n.children {
            let cmd = tree.nodes[c]
                .command
                .as_ref()
                .map(|c| c.to_string())
                .unwrap_or_default();
            let _ = writeln!(out, "  n{i} -> n{c} [label=\"{}\"];", escape(&cmd));
        }
    }
    out.push_str("}\n");
    out
}

pub fn to_json(tree: &SearchTree) -> String {
    serde_json::to_string_pretty(tree).expect("search trees serialize")
}

pub fn emit_tree(tree: &SearchTree, format: TreeFormat) -> Vec<u8> {
    match format {
        TreeFormat::Dot => to_dot(tree).into_bytes(),
        TreeFormat::Json => to_json(tree).into_bytes(),
    }
}
