use super::{EdgeId, MetricForest, Point, Region, VertexId};
use crate::scalar::Scalar;

/// Address translation from a forest to one of its subdivisions.
#[derive(Debug, Clone)]
pub struct Relabel {
    // per old edge: new edges in order with the old offset where each starts
    pieces: Vec<Vec<(EdgeId, Scalar)>>,
    // per old edge: the old offsets of the new interior vertices, with ids
    cuts: Vec<Vec<(Scalar, VertexId)>>,
}

impl Relabel {
    pub fn map_point(&self, p: &Point, f: &MetricForest) -> Point {
        match p {
            Point::Vertex(v) => Point::Vertex(*v),
            Point::Edge(e, t) => {
                if let Some((_, v)) = self.cuts[e.0].iter().find(|(c, _)| c == t) {
                    return Point::Vertex(*v);
                }
                let (ne, start) = self.locate(*e, t);
                f.point_on_edge(ne, t - start).expect("offset within piece")
            }
        }
    }

    fn locate(&self, e: EdgeId, t: &Scalar) -> (EdgeId, &Scalar) {
        let pcs = &self.pieces[e.0];
        let i = pcs.iter().rposition(|(_, s)| s < t).unwrap_or(0);
        (pcs[i].0, &pcs[i].1)
    }

    /// Image of a region of the coarse forest in the refined forest `f`.
    pub fn map_region(&self, r: &Region, f: &MetricForest) -> Region {
        let mut out = Region::empty();
        for v in r.vertices() {
            out.add_point(&Point::Vertex(v));
        }
        for (e, s) in r.spans() {
            for (k, (ne, start)) in self.pieces[e.0].iter().enumerate() {
                let end = match self.pieces[e.0].get(k + 1) {
                    Some((_, next)) => next.clone(),
                    None => start + f.edge_length(*ne),
                };
                let lo = Scalar::max(&s.lo, start);
                let hi = Scalar::min(&s.hi, &end);
                if lo <= hi {
                    out.add_span(*ne, &lo - start, &hi - start);
                }
            }
        }
        out.normalize(f);
        out
    }
}

impl MetricForest {
    /// Subdivides edges so that every mark becomes a vertex. Existing vertex
    /// ids are preserved; new vertices are appended and named `edge~k`, and a
    /// split edge `e` becomes `e.0, e.1, ...`.
    pub fn refine(&self, marks: &[Point]) -> (MetricForest, Relabel) {
        let mut cuts: Vec<Vec<Scalar>> = vec![Vec::new(); self.edge_count()];
        for m in marks {
            if let Point::Edge(e, t) = m {
                cuts[e.0].push(t.clone());
            }
        }
        let mut vertices: Vec<String> = self.vertex_ids().map(|v| self.vertex_name(v).to_string()).collect();
        let mut edges = Vec::new();
        let mut pieces = Vec::new();
        let mut cut_ids = Vec::new();
        for e in self.edge_ids() {
            let edge = self.edge(e);
            let c = &mut cuts[e.0];
            c.sort();
            c.dedup();
            if c.is_empty() {
                pieces.push(vec![(EdgeId(edges.len()), Scalar::zero())]);
                cut_ids.push(Vec::new());
                edges.push((edge.name.clone(), edge.from, edge.to, edge.length.clone()));
                continue;
            }
            let mut ids = Vec::new();
            for k in 0..c.len() {
                ids.push((c[k].clone(), VertexId(vertices.len())));
                vertices.push(format!("{}~{}", edge.name, k));
            }
            let mut pcs = Vec::new();
            let mut start = Scalar::zero();
            let mut from = edge.from;
            for k in 0..=c.len() {
                let (end, to) = match ids.get(k) {
                    Some((t, v)) => (t.clone(), *v),
                    None => (edge.length.clone(), edge.to),
                };
                pcs.push((EdgeId(edges.len()), start.clone()));
                edges.push((format!("{}.{}", edge.name, k), from, to, &end - &start));
                start = end;
                from = to;
            }
            pieces.push(pcs);
            cut_ids.push(ids);
        }
        let f = MetricForest::new(vertices, edges).expect("subdivision of a valid forest");
        (
            f,
            Relabel {
                pieces,
                cuts: cut_ids,
            },
        )
    }
}
