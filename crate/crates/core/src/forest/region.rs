use std::collections::{BTreeMap, BTreeSet};
use std::ops::Deref;

use super::{Direction, EdgeId, MetricForest, Point, VertexId};
use crate::scalar::Scalar;

/// Closed interval `[lo, hi]` of offsets along one edge.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Span {
    pub lo: Scalar,
    pub hi: Scalar,
}

/// A closed subset of a forest made of finitely many vertices, arcs and
/// points.
///
/// For every edge the stored spans are the closure of the set's trace on
/// the open edge: sorted, pairwise disjoint and non-touching. Spans reduced
/// to an endpoint of the edge are never stored (the point is the vertex),
/// and the endpoint vertex of any span touching it is always included. With
/// these rules two regions describe the same set iff they are equal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Region {
    vertices: BTreeSet<VertexId>,
    spans: BTreeMap<EdgeId, Vec<Span>>,
}

impl Region {
    pub fn empty() -> Self {
        Region::default()
    }

    pub fn from_point(p: &Point) -> Self {
        let mut r = Region::empty();
        r.add_point(p);
        r
    }

    /// Adds a point without normalizing.
    pub(crate) fn add_point(&mut self, p: &Point) {
        match p {
            Point::Vertex(v) => {
                self.vertices.insert(*v);
            }
            Point::Edge(e, t) => self.add_span(*e, t.clone(), t.clone()),
        }
    }

    /// Adds a span without normalizing.
    pub(crate) fn add_span(&mut self, e: EdgeId, lo: Scalar, hi: Scalar) {
        self.spans.entry(e).or_default().push(Span { lo, hi });
    }

    /// Restores the canonical form.
    pub(crate) fn normalize(&mut self, f: &MetricForest) {
        let mut spans = BTreeMap::new();
        for (e, list) in std::mem::take(&mut self.spans) {
            let len = f.edge_length(e).clone();
            let edge = f.edge(e);
            let mut list = list;
            list.sort();
            let mut merged: Vec<Span> = Vec::new();
            for s in list {
                if let Some(last) = merged.last_mut() {
                    if s.lo <= last.hi {
                        if s.hi > last.hi {
                            last.hi = s.hi;
                        }
                        continue;
                    }
                }
                merged.push(s);
            }
            let mut kept = Vec::new();
            for s in merged {
                if s.lo.is_zero() {
                    self.vertices.insert(edge.from);
                }
                if s.hi == len {
                    self.vertices.insert(edge.to);
                }
                if s.hi.is_zero() || s.lo == len {
                    continue;
                }
                kept.push(s);
            }
            if !kept.is_empty() {
                spans.insert(e, kept);
            }
        }
        self.spans = spans;
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty() && self.spans.is_empty()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.iter().copied()
    }

    pub fn spans(&self) -> impl Iterator<Item = (EdgeId, &Span)> + '_ {
        self.spans.iter().flat_map(|(e, l)| l.iter().map(move |s| (*e, s)))
    }

    pub fn edge_spans(&self, e: EdgeId) -> &[Span] {
        self.spans.get(&e).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn contains(&self, p: &Point) -> bool {
        match p {
            Point::Vertex(v) => self.vertices.contains(v),
            Point::Edge(e, t) => self.edge_spans(*e).iter().any(|s| s.lo <= *t && *t <= s.hi),
        }
    }

    pub fn union(&self, other: &Region, f: &MetricForest) -> Region {
        let mut r = self.clone();
        r.vertices.extend(other.vertices.iter().copied());
        for (e, s) in other.spans() {
            r.add_span(e, s.lo.clone(), s.hi.clone());
        }
        r.normalize(f);
        r
    }

    pub fn intersect(&self, other: &Region, f: &MetricForest) -> Region {
        let mut r = Region::empty();
        r.vertices = self.vertices.intersection(&other.vertices).copied().collect();
        for (e, mine) in &self.spans {
            let theirs = other.edge_spans(*e);
            let (mut i, mut j) = (0, 0);
            while i < mine.len() && j < theirs.len() {
                let lo = Scalar::max(&mine[i].lo, &theirs[j].lo);
                let hi = Scalar::min(&mine[i].hi, &theirs[j].hi);
                if lo <= hi {
                    r.add_span(*e, lo, hi);
                }
                if mine[i].hi < theirs[j].hi {
                    i += 1;
                } else {
                    j += 1;
                }
            }
        }
        r.normalize(f);
        r
    }

    pub fn is_subset(&self, other: &Region, f: &MetricForest) -> bool {
        self.intersect(other, f) == *self
    }

    /// Total length of the arcs.
    pub fn volume(&self) -> Scalar {
        self.spans().map(|(_, s)| &s.hi - &s.lo).sum()
    }

    /// Smallest point in the canonical point order.
    pub fn first_point(&self) -> Option<Point> {
        if let Some(v) = self.vertices.iter().next() {
            return Some(Point::Vertex(*v));
        }
        self.spans().next().map(|(e, s)| Point::Edge(e, s.lo.clone()))
    }

    /// Number of directions at the vertex `v` along which the region
    /// leaves `v`.
    pub fn vertex_degree(&self, v: VertexId, f: &MetricForest) -> usize {
        f.incident_edges(v)
            .iter()
            .filter(|&&e| self.leaves_vertex(v, e, f))
            .count()
    }

    fn leaves_vertex(&self, v: VertexId, e: EdgeId, f: &MetricForest) -> bool {
        let edge = f.edge(e);
        let spans = self.edge_spans(e);
        if edge.from == v {
            spans.first().is_some_and(|s| s.lo.is_zero())
        } else {
            spans.last().is_some_and(|s| s.hi == edge.length)
        }
    }

    /// True when the region contains an initial segment of `d`.
    pub fn has_germ(&self, d: &Direction, f: &MetricForest) -> bool {
        match &d.base {
            Point::Vertex(v) => {
                if !self.vertices.contains(v) {
                    return false;
                }
                let edge = f.edge(d.edge);
                if (edge.from == *v) != d.forward {
                    return false;
                }
                self.leaves_vertex(*v, d.edge, f)
            }
            Point::Edge(e, t) => {
                if *e != d.edge {
                    return false;
                }
                self.edge_spans(*e).iter().any(|s| {
                    if d.forward {
                        s.lo <= *t && *t < s.hi
                    } else {
                        s.lo < *t && *t <= s.hi
                    }
                })
            }
        }
    }

    /// Connected components, ordered by their first point.
    pub fn components(&self, f: &MetricForest) -> Vec<Region> {
        // nodes: vertices then spans
        let verts: Vec<VertexId> = self.vertices.iter().copied().collect();
        let spans: Vec<(EdgeId, Span)> = self.spans().map(|(e, s)| (e, s.clone())).collect();
        let n = verts.len() + spans.len();
        let mut uf: Vec<usize> = (0..n).collect();
        fn find(uf: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while uf[r] != r {
                r = uf[r];
            }
            uf[x] = r;
            r
        }
        let vpos = |v: VertexId| verts.binary_search(&v).ok();
        for (i, (e, s)) in spans.iter().enumerate() {
            let edge = f.edge(*e);
            let node = verts.len() + i;
            if s.lo.is_zero() {
                if let Some(j) = vpos(edge.from) {
                    let (a, b) = (find(&mut uf, node), find(&mut uf, j));
                    uf[a] = b;
                }
            }
            if s.hi == edge.length {
                if let Some(j) = vpos(edge.to) {
                    let (a, b) = (find(&mut uf, node), find(&mut uf, j));
                    uf[a] = b;
                }
            }
        }
        let mut groups: BTreeMap<usize, Region> = BTreeMap::new();
        for (j, v) in verts.iter().enumerate() {
            let r = find(&mut uf, j);
            groups.entry(r).or_default().vertices.insert(*v);
        }
        for (i, (e, s)) in spans.into_iter().enumerate() {
            let r = find(&mut uf, verts.len() + i);
            groups.entry(r).or_default().spans.entry(e).or_default().push(s);
        }
        let mut out: Vec<Region> = groups.into_values().collect();
        out.sort_by(|a, b| a.first_point().cmp(&b.first_point()));
        out
    }

    pub fn is_connected(&self, f: &MetricForest) -> bool {
        self.components(f).len() == 1
    }

    /// True when the region is a single point.
    pub fn is_point(&self) -> bool {
        match (self.vertices.len(), self.spans.len()) {
            (1, 0) => true,
            (0, 1) => {
                let s = &self.spans.values().next().unwrap();
                s.len() == 1 && s[0].lo == s[0].hi
            }
            _ => false,
        }
    }

    /// Points of the region that do not lie in the interior of an arc of the
    /// region: leaves of each component, and isolated points.
    pub fn extremal_points(&self, f: &MetricForest) -> Vec<Point> {
        let mut out = Vec::new();
        for &v in &self.vertices {
            if self.vertex_degree(v, f) <= 1 {
                out.push(Point::Vertex(v));
            }
        }
        for (e, s) in self.spans() {
            if s.lo.is_positive() {
                out.push(Point::Edge(e, s.lo.clone()));
            }
            if s.hi < *f.edge_length(e) && s.hi != s.lo {
                out.push(Point::Edge(e, s.hi.clone()));
            }
        }
        out.sort();
        out
    }

    /// Vertices of the region with at least three directions in the region.
    pub fn branch_points(&self, f: &MetricForest) -> Vec<Point> {
        self.vertices
            .iter()
            .filter(|&&v| self.vertex_degree(v, f) >= 3)
            .map(|&v| Point::Vertex(v))
            .collect()
    }

    /// All span endpoints and vertices, in point order.
    pub fn breakpoints(&self, f: &MetricForest) -> Vec<Point> {
        let mut out: Vec<Point> = self.vertices.iter().map(|&v| Point::Vertex(v)).collect();
        for (e, s) in self.spans() {
            out.push(f.point_on_edge(e, s.lo.clone()).unwrap());
            out.push(f.point_on_edge(e, s.hi.clone()).unwrap());
        }
        out.sort();
        out.dedup();
        out
    }

    /// Human-readable rendering, e.g. `[e@1/10, e@3/10] ∪ {v}`.
    pub fn describe(&self, f: &MetricForest) -> String {
        if self.is_empty() {
            return "∅".into();
        }
        let mut parts = Vec::new();
        let mut covered = BTreeSet::new();
        for (e, s) in self.spans() {
            let edge = f.edge(e);
            let lo = f.point_on_edge(e, s.lo.clone()).unwrap();
            let hi = f.point_on_edge(e, s.hi.clone()).unwrap();
            if s.lo.is_zero() {
                covered.insert(edge.from);
            }
            if s.hi == edge.length {
                covered.insert(edge.to);
            }
            if lo == hi {
                parts.push(format!("{{{}}}", f.point_name(&lo)));
            } else {
                parts.push(format!("[{}, {}]", f.point_name(&lo), f.point_name(&hi)));
            }
        }
        for v in &self.vertices {
            if !covered.contains(v) {
                parts.push(format!("{{{}}}", f.vertex_name(*v)));
            }
        }
        parts.join(" ∪ ")
    }

    /// Convex hull of a nonempty point set lying in one component.
    pub fn hull(points: &[Point], f: &MetricForest) -> Option<Subtree> {
        let first = points.first()?;
        let mut r = Region::from_point(first);
        for p in &points[1..] {
            let seg = f.segment(first, p).ok()?;
            r = r.union(&seg, f);
        }
        r.normalize(f);
        Some(Subtree(r))
    }
}

/// A nonempty connected [`Region`]: a compact subtree of one component.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Subtree(Region);

impl Subtree {
    pub fn new(r: Region, f: &MetricForest) -> Option<Self> {
        if r.is_empty() || !r.is_connected(f) {
            None
        } else {
            Some(Subtree(r))
        }
    }

    pub(crate) fn from_region_unchecked(r: Region) -> Self {
        Subtree(r)
    }

    pub fn point(p: &Point) -> Self {
        Subtree(Region::from_point(p))
    }

    pub fn region(&self) -> &Region {
        &self.0
    }

    pub fn into_region(self) -> Region {
        self.0
    }

    /// Intersection of two subtrees (always connected in a forest).
    pub fn intersect(&self, other: &Region, f: &MetricForest) -> Option<Subtree> {
        let r = self.0.intersect(other, f);
        if r.is_empty() {
            None
        } else {
            Some(Subtree(r))
        }
    }

    /// Largest distance between two extremal points.
    pub fn diameter(&self, f: &MetricForest) -> Scalar {
        let ext = self.extremal_points(f);
        let mut best = Scalar::zero();
        for (i, p) in ext.iter().enumerate() {
            for q in &ext[i + 1..] {
                let d = f.distance(p, q).expect("subtree within one component");
                if d > best {
                    best = d;
                }
            }
        }
        best
    }
}

impl Deref for Subtree {
    type Target = Region;
    fn deref(&self) -> &Region {
        &self.0
    }
}
