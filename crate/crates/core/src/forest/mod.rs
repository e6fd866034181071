//! Finite simplicial metric forests with exact edge lengths.
//!
//! Points are addressed either by vertex or by `(edge, offset)` with the
//! offset measured from the edge's `from` endpoint. Subsets that arise in
//! the Rips machine are closed and described by [`Region`].

mod refine;
mod region;

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::scalar::Scalar;

pub use refine::Relabel;
pub use region::{Region, Span, Subtree};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub usize);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ForestError {
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("edge `{0}` must have positive length")]
    NonPositiveLength(String),
    #[error("edge `{0}` is a loop")]
    SelfLoop(String),
    #[error("edge `{0}` closes a cycle")]
    Cycle(String),
    #[error("offset {offset} outside edge `{edge}` of length {length}")]
    OffsetOutOfRange {
        edge: String,
        offset: String,
        length: String,
    },
    #[error("points lie in different components")]
    DifferentComponents,
    #[error("direction is not based at the given point")]
    InvalidDirection,
}

#[derive(Debug, Clone)]
pub struct Edge {
    pub name: String,
    pub from: VertexId,
    pub to: VertexId,
    pub length: Scalar,
}

/// A point of a forest. Offsets `0` and the full edge length never occur:
/// such points are stored as the corresponding vertex.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Point {
    Vertex(VertexId),
    Edge(EdgeId, Scalar),
}

/// A germ of segments leaving `base` along `edge`. `forward` means towards
/// the edge's `to` endpoint (increasing offset).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Direction {
    pub base: Point,
    pub edge: EdgeId,
    pub forward: bool,
}

/// One edge traversal of a path: offsets run from `start` to `end` on `edge`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Piece {
    pub edge: EdgeId,
    pub start: Scalar,
    pub end: Scalar,
}

impl Piece {
    pub fn length(&self) -> Scalar {
        (&self.end - &self.start).abs()
    }
}

#[derive(Debug, Clone)]
pub struct MetricForest {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    incident: Vec<Vec<EdgeId>>,
    component: Vec<usize>,
    n_components: usize,
    parent: Vec<Option<(VertexId, EdgeId)>>,
    depth: Vec<usize>,
    root_dist: Vec<Scalar>,
    vertex_index: HashMap<String, VertexId>,
    edge_index: HashMap<String, EdgeId>,
}

impl MetricForest {
    /// Builds a forest from vertex names and `(name, from, to, length)` edges.
    pub fn new(
        vertices: Vec<String>,
        edges: Vec<(String, VertexId, VertexId, Scalar)>,
    ) -> Result<Self, ForestError> {
        let mut vertex_index = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if vertex_index.insert(v.clone(), VertexId(i)).is_some() {
                return Err(ForestError::DuplicateName(v.clone()));
            }
        }
        let mut edge_index = HashMap::new();
        let mut incident = vec![Vec::new(); vertices.len()];
        let mut uf: Vec<usize> = (0..vertices.len()).collect();
        fn find(uf: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while uf[r] != r {
                r = uf[r];
            }
            let mut y = x;
            while uf[y] != r {
                let n = uf[y];
                uf[y] = r;
                y = n;
            }
            r
        }
        let mut out = Vec::with_capacity(edges.len());
        for (i, (name, from, to, length)) in edges.into_iter().enumerate() {
            if vertex_index.contains_key(&name) || edge_index.insert(name.clone(), EdgeId(i)).is_some() {
                return Err(ForestError::DuplicateName(name));
            }
            if from.0 >= vertices.len() {
                return Err(ForestError::UnknownVertex(format!("#{}", from.0)));
            }
            if to.0 >= vertices.len() {
                return Err(ForestError::UnknownVertex(format!("#{}", to.0)));
            }
            if from == to {
                return Err(ForestError::SelfLoop(name));
            }
            if !length.is_positive() {
                return Err(ForestError::NonPositiveLength(name));
            }
            let (ra, rb) = (find(&mut uf, from.0), find(&mut uf, to.0));
            if ra == rb {
                return Err(ForestError::Cycle(name));
            }
            uf[ra] = rb;
            incident[from.0].push(EdgeId(i));
            incident[to.0].push(EdgeId(i));
            out.push(Edge { name, from, to, length });
        }
        let n = vertices.len();
        let mut f = MetricForest {
            vertices,
            edges: out,
            incident,
            component: vec![usize::MAX; n],
            n_components: 0,
            parent: vec![None; n],
            depth: vec![0; n],
            root_dist: vec![Scalar::zero(); n],
            vertex_index,
            edge_index,
        };
        f.root();
        Ok(f)
    }

    /// A single segment `[0, length]` with vertices `lo`, `hi` and edge `e`.
    pub fn interval(length: Scalar) -> Self {
        MetricForest::new(
            vec!["lo".into(), "hi".into()],
            vec![("e".into(), VertexId(0), VertexId(1), length)],
        )
        .expect("interval with positive length")
    }

    fn root(&mut self) {
        for r in 0..self.vertices.len() {
            if self.component[r] != usize::MAX {
                continue;
            }
            let c = self.n_components;
            self.n_components += 1;
            self.component[r] = c;
            let mut stack = vec![r];
            while let Some(v) = stack.pop() {
                for &e in &self.incident[v] {
                    let edge = &self.edges[e.0];
                    let w = if edge.from.0 == v { edge.to.0 } else { edge.from.0 };
                    if self.component[w] != usize::MAX {
                        continue;
                    }
                    self.component[w] = c;
                    self.parent[w] = Some((VertexId(v), e));
                    self.depth[w] = self.depth[v] + 1;
                    self.root_dist[w] = &self.root_dist[v] + &edge.length;
                    stack.push(w);
                }
            }
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertices.len()).map(VertexId)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edges.len()).map(EdgeId)
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v.0]
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.0]
    }

    pub fn edge_length(&self, e: EdgeId) -> &Scalar {
        &self.edges[e.0].length
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<VertexId> {
        self.vertex_index.get(name).copied()
    }

    pub fn edge_by_name(&self, name: &str) -> Option<EdgeId> {
        self.edge_index.get(name).copied()
    }

    pub fn incident_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.incident[v.0]
    }

    pub fn component_count(&self) -> usize {
        self.n_components
    }

    pub fn component_of(&self, p: &Point) -> usize {
        match p {
            Point::Vertex(v) => self.component[v.0],
            Point::Edge(e, _) => self.component[self.edges[e.0].from.0],
        }
    }

    /// The point at `offset` along `e`, canonicalized at the endpoints.
    pub fn point_on_edge(&self, e: EdgeId, offset: Scalar) -> Result<Point, ForestError> {
        let edge = &self.edges[e.0];
        if offset.is_negative() || offset > edge.length {
            return Err(ForestError::OffsetOutOfRange {
                edge: edge.name.clone(),
                offset: offset.to_string(),
                length: edge.length.to_string(),
            });
        }
        Ok(if offset.is_zero() {
            Point::Vertex(edge.from)
        } else if offset == edge.length {
            Point::Vertex(edge.to)
        } else {
            Point::Edge(e, offset)
        })
    }

    /// Offset of an endpoint of `e` (0 for `from`, the length for `to`).
    pub fn end_offset(&self, e: EdgeId, v: VertexId) -> Scalar {
        let edge = &self.edges[e.0];
        if edge.from == v {
            Scalar::zero()
        } else {
            debug_assert_eq!(edge.to, v);
            edge.length.clone()
        }
    }

    /// Canonical textual address: vertex name or `edge@offset`.
    pub fn point_name(&self, p: &Point) -> String {
        match p {
            Point::Vertex(v) => self.vertices[v.0].clone(),
            Point::Edge(e, t) => format!("{}@{}", self.edges[e.0].name, t),
        }
    }

    pub fn direction_name(&self, d: &Direction) -> String {
        format!(
            "{}:{}{}",
            self.point_name(&d.base),
            self.edges[d.edge.0].name,
            if d.forward { "+" } else { "-" }
        )
    }

    /// Every direction at `p`.
    pub fn directions_at(&self, p: &Point) -> Vec<Direction> {
        match p {
            Point::Vertex(v) => self.incident[v.0]
                .iter()
                .map(|&e| Direction {
                    base: p.clone(),
                    edge: e,
                    forward: self.edges[e.0].from == *v,
                })
                .collect(),
            Point::Edge(e, _) => vec![
                Direction {
                    base: p.clone(),
                    edge: *e,
                    forward: false,
                },
                Direction {
                    base: p.clone(),
                    edge: *e,
                    forward: true,
                },
            ],
        }
    }

    pub fn is_direction_at(&self, d: &Direction, p: &Point) -> bool {
        d.base == *p && self.directions_at(p).contains(d)
    }

    fn lca(&self, mut a: usize, mut b: usize) -> usize {
        while self.depth[a] > self.depth[b] {
            a = self.parent[a].unwrap().0 .0;
        }
        while self.depth[b] > self.depth[a] {
            b = self.parent[b].unwrap().0 .0;
        }
        while a != b {
            a = self.parent[a].unwrap().0 .0;
            b = self.parent[b].unwrap().0 .0;
        }
        a
    }

    fn vertex_distance(&self, a: VertexId, b: VertexId) -> Scalar {
        let l = self.lca(a.0, b.0);
        &(&self.root_dist[a.0] + &self.root_dist[b.0]) - &(&self.root_dist[l] + &self.root_dist[l])
    }

    /// Edge traversals along the vertex path from `a` to `b`.
    fn vertex_path(&self, a: VertexId, b: VertexId) -> Vec<Piece> {
        let l = self.lca(a.0, b.0);
        let mut up = Vec::new();
        let mut x = a.0;
        while x != l {
            let (p, e) = self.parent[x].unwrap();
            up.push(self.traverse(e, VertexId(x)));
            x = p.0;
        }
        let mut down = Vec::new();
        let mut y = b.0;
        while y != l {
            let (p, e) = self.parent[y].unwrap();
            down.push(self.traverse(e, p));
            y = p.0;
        }
        down.reverse();
        up.extend(down);
        up
    }

    /// Full traversal of `e` starting at its endpoint `start`.
    fn traverse(&self, e: EdgeId, start: VertexId) -> Piece {
        let edge = &self.edges[e.0];
        if edge.from == start {
            Piece {
                edge: e,
                start: Scalar::zero(),
                end: edge.length.clone(),
            }
        } else {
            Piece {
                edge: e,
                start: edge.length.clone(),
                end: Scalar::zero(),
            }
        }
    }

    /// Ways to leave a point towards a vertex: (vertex, partial piece).
    fn exits(&self, p: &Point) -> Vec<(VertexId, Option<Piece>)> {
        match p {
            Point::Vertex(v) => vec![(*v, None)],
            Point::Edge(e, t) => {
                let edge = &self.edges[e.0];
                vec![
                    (
                        edge.from,
                        Some(Piece {
                            edge: *e,
                            start: t.clone(),
                            end: Scalar::zero(),
                        }),
                    ),
                    (
                        edge.to,
                        Some(Piece {
                            edge: *e,
                            start: t.clone(),
                            end: edge.length.clone(),
                        }),
                    ),
                ]
            }
        }
    }

    /// The geodesic from `p` to `q` as a list of edge traversals.
    pub fn path(&self, p: &Point, q: &Point) -> Result<Vec<Piece>, ForestError> {
        if self.component_of(p) != self.component_of(q) {
            return Err(ForestError::DifferentComponents);
        }
        if p == q {
            return Ok(Vec::new());
        }
        if let (Point::Edge(e1, t1), Point::Edge(e2, t2)) = (p, q) {
            if e1 == e2 {
                return Ok(vec![Piece {
                    edge: *e1,
                    start: t1.clone(),
                    end: t2.clone(),
                }]);
            }
        }
        let mut best: Option<(Scalar, Vec<Piece>)> = None;
        for (u, pre) in self.exits(p) {
            for (v, post) in self.exits(q) {
                let mut len = self.vertex_distance(u, v);
                if let Some(pc) = &pre {
                    len = &len + &pc.length();
                }
                if let Some(pc) = &post {
                    len = &len + &pc.length();
                }
                if best.as_ref().is_some_and(|(b, _)| *b <= len) {
                    continue;
                }
                let mut pieces = Vec::new();
                pieces.extend(pre.clone());
                pieces.extend(self.vertex_path(u, v));
                if let Some(pc) = &post {
                    pieces.push(Piece {
                        edge: pc.edge,
                        start: pc.end.clone(),
                        end: pc.start.clone(),
                    });
                }
                best = Some((len, pieces));
            }
        }
        let mut pieces = best.unwrap().1;
        pieces.retain(|pc| pc.start != pc.end);
        Ok(pieces)
    }

    pub fn distance(&self, p: &Point, q: &Point) -> Result<Scalar, ForestError> {
        Ok(self.path(p, q)?.iter().map(Piece::length).sum())
    }

    /// The arc `[p, q]`.
    pub fn segment(&self, p: &Point, q: &Point) -> Result<Subtree, ForestError> {
        let pieces = self.path(p, q)?;
        let mut r = Region::from_point(p);
        for pc in &pieces {
            let (lo, hi) = if pc.start <= pc.end {
                (pc.start.clone(), pc.end.clone())
            } else {
                (pc.end.clone(), pc.start.clone())
            };
            r.add_span(pc.edge, lo, hi);
        }
        r.add_point(q);
        r.normalize(self);
        Ok(Subtree::from_region_unchecked(r))
    }

    /// The point at distance `dist` from `p` along `[p, q]`.
    pub fn walk(&self, p: &Point, q: &Point, dist: &Scalar) -> Result<Point, ForestError> {
        let mut left = dist.clone();
        for pc in self.path(p, q)? {
            let len = pc.length();
            if left <= len {
                let off = if pc.start <= pc.end {
                    &pc.start + &left
                } else {
                    &pc.start - &left
                };
                return self.point_on_edge(pc.edge, off);
            }
            left = &left - &len;
        }
        if left.is_zero() {
            Ok(q.clone())
        } else {
            Err(ForestError::OffsetOutOfRange {
                edge: "path".into(),
                offset: dist.to_string(),
                length: self.distance(p, q)?.to_string(),
            })
        }
    }

    /// Midpoint of `[p, q]`.
    pub fn midpoint(&self, p: &Point, q: &Point) -> Result<Point, ForestError> {
        let d = self.distance(p, q)?;
        self.walk(p, q, &d.half())
    }

    /// The direction at `a` containing `p`, or `None` when `p == a` or the
    /// points lie in different components.
    pub fn direction_towards(&self, a: &Point, p: &Point) -> Option<Direction> {
        let first = self.path(a, p).ok()?.into_iter().next()?;
        Some(Direction {
            base: a.clone(),
            edge: first.edge,
            forward: first.start < first.end,
        })
    }

    /// True when `p` lies on `[a, b]`.
    pub fn between(&self, a: &Point, p: &Point, b: &Point) -> bool {
        match (self.distance(a, p), self.distance(p, b), self.distance(a, b)) {
            (Ok(x), Ok(y), Ok(z)) => &x + &y == z,
            _ => false,
        }
    }

    /// The whole forest as a region.
    pub fn full_region(&self) -> Region {
        let mut r = Region::empty();
        for v in self.vertex_ids() {
            r.add_point(&Point::Vertex(v));
        }
        for e in self.edge_ids() {
            r.add_span(e, Scalar::zero(), self.edges[e.0].length.clone());
        }
        r.normalize(self);
        r
    }

    pub fn volume(&self) -> Scalar {
        self.edges.iter().map(|e| e.length.clone()).sum()
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}
