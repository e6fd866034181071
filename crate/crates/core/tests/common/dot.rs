//! Minimal reader for the undirected DOT emitted by the library, and a
//! complete-bipartite 3+3 checker.

use std::collections::{BTreeMap, BTreeSet};

pub struct Graph {
    pub nodes: Vec<String>,
    pub edges: Vec<(String, String, Option<String>)>,
}

fn quoted(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = None::<String>;
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        match (&mut cur, c) {
            (None, '"') => cur = Some(String::new()),
            (Some(_), '"') => out.push(cur.take().unwrap()),
            (Some(buf), '\\') => buf.push(chars.next().unwrap()),
            (Some(buf), c) => buf.push(c),
            (None, _) => {}
        }
    }
    out
}

pub fn parse(text: &str) -> Graph {
    let mut lines = text.lines();
    let head = lines.next().unwrap();
    assert!(head.starts_with("graph "), "undirected graph expected");
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    for l in lines {
        let l = l.trim();
        if l == "}" || l.is_empty() {
            continue;
        }
        assert!(l.ends_with(';'), "statement without `;`: {l}");
        let q = quoted(l);
        if l.contains(" -- ") {
            edges.push((q[0].clone(), q[1].clone(), q.get(2).cloned()));
        } else {
            nodes.push(q[0].clone());
        }
    }
    Graph { nodes, edges }
}

/// Ok when the graph is K3,3 with nine distinct edge labels.
pub fn check_k33(g: &Graph) -> Result<(), String> {
    let nodes: BTreeSet<&String> = g.nodes.iter().collect();
    if nodes.len() != 6 || g.nodes.len() != 6 {
        return Err(format!("{} nodes", g.nodes.len()));
    }
    let pairs: BTreeSet<(&String, &String)> = g.edges.iter().map(|(a, b, _)| if a < b { (a, b) } else { (b, a) }).collect();
    if g.edges.len() != 9 || pairs.len() != 9 {
        return Err(format!("{} edges, {} distinct", g.edges.len(), pairs.len()));
    }
    let labels: BTreeSet<&Option<String>> = g.edges.iter().map(|e| &e.2).collect();
    if labels.len() != 9 || labels.contains(&None) {
        return Err("edge labels missing or repeated".into());
    }
    // two-colour by BFS
    let mut colour: BTreeMap<&String, bool> = BTreeMap::new();
    let start = g.nodes.first().unwrap();
    colour.insert(start, false);
    let mut queue = vec![start];
    while let Some(v) = queue.pop() {
        let c = colour[v];
        for (a, b, _) in &g.edges {
            let w = if a == v {
                b
            } else if b == v {
                a
            } else {
                continue;
            };
            match colour.get(w) {
                Some(&cw) if cw == c => return Err("odd cycle".into()),
                Some(_) => {}
                None => {
                    colour.insert(w, !c);
                    queue.push(w);
                }
            }
        }
    }
    if colour.len() != 6 {
        return Err("disconnected".into());
    }
    let left: Vec<&&String> = colour.iter().filter(|(_, c)| !**c).map(|(n, _)| n).collect();
    let right: Vec<&&String> = colour.iter().filter(|(_, c)| **c).map(|(n, _)| n).collect();
    if left.len() != 3 || right.len() != 3 {
        return Err("parts are not 3 + 3".into());
    }
    for l in &left {
        for r in &right {
            if !pairs.contains(&(if l < r { (**l, **r) } else { (**r, **l) })) {
                return Err(format!("missing {l} -- {r}"));
            }
        }
    }
    Ok(())
}
