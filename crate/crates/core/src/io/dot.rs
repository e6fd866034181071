//! Graphviz DOT emission.

use std::fmt::Write;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DotGraph {
    pub name: String,
    pub nodes: Vec<(String, Option<String>)>,
    pub edges: Vec<(String, String, Option<String>)>,
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

impl DotGraph {
    pub fn new(name: &str) -> Self {
        DotGraph {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn node(&mut self, id: &str, label: Option<&str>) {
        if !self.nodes.iter().any(|n| n.0 == id) {
            self.nodes.push((id.into(), label.map(str::to_string)));
        }
    }

    pub fn edge(&mut self, a: &str, b: &str, label: Option<&str>) {
        self.edges.push((a.into(), b.into(), label.map(str::to_string)));
    }

    /// Undirected graph text; nodes and edges appear in insertion order.
    pub fn render(&self) -> String {
        let mut out = String::new();
        writeln!(out, "graph {} {{", quote(&self.name)).unwrap();
        for (id, label) in &self.nodes {
            match label {
                Some(l) => writeln!(out, "  {} [label={}];", quote(id), quote(l)).unwrap(),
                None => writeln!(out, "  {};", quote(id)).unwrap(),
            }
        }
        for (a, b, label) in &self.edges {
            match label {
                Some(l) => writeln!(out, "  {} -- {} [label={}];", quote(a), quote(b), quote(l)).unwrap(),
                None => writeln!(out, "  {} -- {};", quote(a), quote(b)).unwrap(),
            }
        }
        out.push_str("}\n");
        out
    }
}
