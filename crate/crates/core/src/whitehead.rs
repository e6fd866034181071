//! Directional Whitehead graphs at finite depth, the pattern detector and
//! K₃,₃ certificates.

use std::collections::BTreeSet;

use rayon::prelude::*;
use thiserror::Error;

use crate::forest::{Direction, MetricForest, Point};
use crate::io::dot::DotGraph;
use crate::isometry::BandSystem;
use crate::lamination::{enumerate, format_word, pair_up, DottedWord, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WhiteheadError {
    #[error("{0} is not a direction at the base point")]
    InvalidDirection(String),
    #[error("malformed certificate: {0}")]
    MalformedCertificate(String),
}

/// Notes on vertex identifications that a larger depth could revise.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum VertexFlag {
    /// The half-word ends several edges; those ends agree only up to depth.
    Shared { vertex: usize, edges: usize },
    /// One half-word is the other shifted by `shift` letters; kept apart.
    SuffixShift { a: usize, b: usize, shift: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectionalWhiteheadGraph {
    pub point: Point,
    pub direction: Direction,
    pub depth: usize,
    /// Half-words of length `depth` at `point` into `direction`, sorted.
    pub vertices: Vec<Word>,
    /// Edges as index pairs into `vertices`, with their dotted words.
    pub edges: Vec<(usize, usize, DottedWord)>,
    pub flags: Vec<VertexFlag>,
}

impl DirectionalWhiteheadGraph {
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn dot(&self, s: &BandSystem) -> DotGraph {
        let f = s.forest();
        let mut g = DotGraph::new(&format!("Wh {} depth {}", f.direction_name(&self.direction), self.depth));
        for v in &self.vertices {
            let name = format_word(s, v);
            g.node(&name, None);
        }
        for (i, j, w) in &self.edges {
            g.edge(
                &format_word(s, &self.vertices[*i]),
                &format_word(s, &self.vertices[*j]),
                Some(&w.display(s)),
            );
        }
        g
    }
}

fn shift_of(a: &Word, b: &Word) -> Option<usize> {
    (1..a.len()).find(|&k| a[k..] == b[..b.len() - k])
}

pub fn directional_whitehead(
    s: &BandSystem,
    x: &Point,
    d: &Direction,
    depth: usize,
) -> Result<DirectionalWhiteheadGraph, WhiteheadError> {
    let f = s.forest();
    if !f.is_direction_at(d, x) {
        return Err(WhiteheadError::InvalidDirection(f.direction_name(d)));
    }
    let mut half: Vec<(Word, _)> = enumerate(s, depth, |m| m.domain().contains(x) && m.domain().has_germ(d, f))
        .into_iter()
        .filter(|(w, _)| w.len() == depth)
        .map(|(w, m)| (w, m.domain().clone()))
        .collect();
    half.sort_by(|a, b| a.0.cmp(&b.0));
    let vertices: Vec<Word> = half.iter().map(|(w, _)| w.clone()).collect();
    let index = |w: &Word| vertices.binary_search(w).unwrap();
    let edges: Vec<(usize, usize, DottedWord)> = pair_up(&half, f)
        .into_iter()
        .map(|dw| (index(&dw.left), index(&dw.right), dw))
        .collect();

    let mut flags = Vec::new();
    for v in 0..vertices.len() {
        let n = edges.iter().filter(|(i, j, _)| *i == v || *j == v).count();
        if n > 1 {
            flags.push(VertexFlag::Shared { vertex: v, edges: n });
        }
    }
    for a in 0..vertices.len() {
        for b in 0..vertices.len() {
            if a != b {
                if let Some(shift) = shift_of(&vertices[a], &vertices[b]) {
                    flags.push(VertexFlag::SuffixShift { a, b, shift });
                }
            }
        }
    }
    flags.sort();
    Ok(DirectionalWhiteheadGraph {
        point: x.clone(),
        direction: d.clone(),
        depth,
        vertices,
        edges,
        flags,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanEntry {
    pub point: Point,
    pub direction: Direction,
    pub edges: usize,
}

/// Vertices in the support, extremal points of every domain and range, and
/// branch points of the support, deduplicated and sorted.
pub fn candidate_points(s: &BandSystem) -> Vec<Point> {
    let f = s.forest();
    let mut pts: BTreeSet<Point> = s.support().vertices().map(Point::Vertex).collect();
    pts.extend(s.support().branch_points(f));
    for b in s.bands() {
        pts.extend(b.domain().extremal_points(f));
        pts.extend(b.range().extremal_points(f));
    }
    pts.into_iter().collect()
}

/// Edge counts at every candidate `(x, d)`, largest first.
pub fn wh_scan(s: &BandSystem, depth: usize) -> Vec<ScanEntry> {
    let f = s.forest();
    let pairs: Vec<(Point, Direction)> = candidate_points(s)
        .into_iter()
        .flat_map(|p| f.directions_at(&p).into_iter().map(move |d| (p.clone(), d)))
        .collect();
    let mut out: Vec<ScanEntry> = pairs
        .into_par_iter()
        .map(|(p, d)| {
            let edges = directional_whitehead(s, &p, &d, depth)
                .map(|g| g.edge_count())
                .unwrap_or(0);
            ScanEntry {
                point: p,
                direction: d,
                edges,
            }
        })
        .collect();
    out.sort_by(|a, b| {
        b.edges
            .cmp(&a.edges)
            .then_with(|| a.point.cmp(&b.point))
            .then_with(|| (a.direction.edge, a.direction.forward).cmp(&(b.direction.edge, b.direction.forward)))
    });
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternCertificate {
    pub point: Point,
    pub direction: Direction,
    pub depth: usize,
    pub leaf1: DottedWord,
    pub leaf2: DottedWord,
    pub b: Point,
    pub c: Point,
    pub leaf_b: DottedWord,
    pub leaf_c: DottedWord,
    /// Rendered names of `a`, `b`, `c` and `d`.
    pub labels: [String; 4],
    /// Distinct half-words among the four ends of `leaf1` and `leaf2`.
    pub end_classes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PatternResult {
    Found(Box<PatternCertificate>),
    NotFound { depth: usize },
}

fn end_classes(l1: &DottedWord, l2: &DottedWord) -> Vec<Word> {
    let set: BTreeSet<Word> = [&l1.left, &l1.right, &l2.left, &l2.right].into_iter().cloned().collect();
    set.into_iter().collect()
}

fn witness(f: &MetricForest, a: &Point, d: &Direction, l1: &DottedWord, l2: &DottedWord) -> Option<(Point, Point)> {
    let common = l1.domain.intersect(l2.domain.region(), f)?;
    let e = common
        .extremal_points(f)
        .into_iter()
        .find(|p| p != a && f.direction_towards(a, p).as_ref() == Some(d))?;
    let c = f.midpoint(a, &e).ok()?;
    Some((e, c))
}

/// Searches the scan for a directional graph with two edges whose ends
/// fall in at least three classes.
pub fn detect_pattern(s: &BandSystem, depth: usize) -> PatternResult {
    let f = s.forest();
    for entry in wh_scan(s, depth).into_iter().take_while(|e| e.edges >= 2) {
        let g = match directional_whitehead(s, &entry.point, &entry.direction, depth) {
            Ok(g) => g,
            Err(_) => continue,
        };
        for (i, (_, _, l1)) in g.edges.iter().enumerate() {
            for (_, _, l2) in &g.edges[i + 1..] {
                let classes = end_classes(l1, l2);
                if classes.len() < 3 {
                    continue;
                }
                let Some((b, c)) = witness(f, &entry.point, &entry.direction, l1, l2) else {
                    continue;
                };
                return PatternResult::Found(Box::new(PatternCertificate {
                    labels: [
                        f.point_name(&entry.point),
                        f.point_name(&b),
                        f.point_name(&c),
                        f.direction_name(&entry.direction),
                    ],
                    end_classes: classes.iter().map(|w| format_word(s, w)).collect(),
                    point: entry.point.clone(),
                    direction: entry.direction.clone(),
                    depth,
                    leaf1: l1.clone(),
                    leaf2: l2.clone(),
                    b,
                    c,
                    leaf_b: l1.clone(),
                    leaf_c: l2.clone(),
                }));
            }
        }
    }
    PatternResult::NotFound { depth }
}

/// Abstract K₃,₃ with parts `{α, β, γ}` and `{π₁, π₂, π₃}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct K33Certificate {
    pub left: [String; 3],
    pub right: [String; 3],
    /// `(left index, right index, annotation)`.
    pub edges: Vec<(usize, usize, String)>,
    pub pattern: PatternCertificate,
}

pub fn k33_certificate(p: &PatternCertificate) -> Result<K33Certificate, WhiteheadError> {
    let distinct: BTreeSet<&String> = p.end_classes.iter().collect();
    if distinct.len() != p.end_classes.len() {
        return Err(WhiteheadError::MalformedCertificate("repeated end class".into()));
    }
    if distinct.len() < 3 {
        return Err(WhiteheadError::MalformedCertificate(format!(
            "{} end classes, need 3",
            distinct.len()
        )));
    }
    if p.b == p.point || p.c == p.point || p.b == p.c {
        return Err(WhiteheadError::MalformedCertificate("witness points coincide".into()));
    }
    let left = ["alpha".to_string(), "beta".into(), "gamma".into()];
    let right = ["pi1".to_string(), "pi2".into(), "pi3".into()];
    let arcs = [
        format!("leaf at {}", p.labels[0]),
        format!("leaf at {}", p.labels[1]),
        format!("leaf at {}", p.labels[2]),
    ];
    let mut edges = Vec::new();
    for (i, arc) in arcs.iter().enumerate() {
        for (j, class) in p.end_classes.iter().take(3).enumerate() {
            edges.push((i, j, format!("{arc} to end {class}")));
        }
    }
    let cert = K33Certificate {
        left,
        right,
        edges,
        pattern: p.clone(),
    };
    cert.check()?;
    Ok(cert)
}

impl K33Certificate {
    /// Complete bipartite 3+3 with distinct annotations.
    pub fn check(&self) -> Result<(), WhiteheadError> {
        let pairs: BTreeSet<(usize, usize)> = self.edges.iter().map(|(i, j, _)| (*i, *j)).collect();
        let notes: BTreeSet<&String> = self.edges.iter().map(|e| &e.2).collect();
        let complete = (0..3).all(|i| (0..3).all(|j| pairs.contains(&(i, j))));
        if self.edges.len() != 9 || !complete || notes.len() != 9 {
            return Err(WhiteheadError::MalformedCertificate("not K3,3".into()));
        }
        Ok(())
    }

    pub fn dot(&self) -> DotGraph {
        let mut g = DotGraph::new("K33");
        let point_labels = [&self.pattern.labels[0], &self.pattern.labels[1], &self.pattern.labels[2]];
        for (n, l) in self.left.iter().zip(point_labels) {
            g.node(n, Some(&format!("{n} @ {l}")));
        }
        for (n, l) in self.right.iter().zip(&self.pattern.end_classes) {
            g.node(n, Some(&format!("{n} = {l}")));
        }
        for (i, j, note) in &self.edges {
            g.edge(&self.left[*i], &self.right[*j], Some(note));
        }
        g
    }
}
