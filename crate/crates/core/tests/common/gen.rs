//! Proptest strategies for random band systems and forests.

use std::sync::Arc;

use proptest::prelude::*;
use ripslab::forest::{EdgeId, MetricForest, Point, VertexId};
use ripslab::isometry::{BandSystem, PartialIsometry};
use ripslab::scalar::Scalar;

fn q(n: i64, d: i64) -> Scalar {
    Scalar::from_ratio(n, d)
}

/// `(start, length, target, flip)` in twelfths of the unit interval.
pub type BandShape = (u8, u8, u8, bool);

pub fn interval_system_from(shapes: &[BandShape]) -> Option<BandSystem> {
    let f = Arc::new(MetricForest::interval(q(1, 1)));
    let p = |k: i64| f.point_on_edge(EdgeId(0), q(k, 12)).unwrap();
    let mut bands = Vec::new();
    for (i, &(a, l, b, flip)) in shapes.iter().enumerate() {
        let l = 1 + l as i64 % 6;
        let a = a as i64 % (13 - l);
        let b = b as i64 % (13 - l);
        let (b0, b1) = if flip { (b + l, b) } else { (b, b + l) };
        let name = ["a", "b", "c", "d"][i].to_string();
        bands.push(PartialIsometry::from_markers(name, vec![(p(a), p(b0)), (p(a + l), p(b1))], &f).ok()?);
    }
    BandSystem::on_forest(f, bands).ok()
}

/// Systems of one to four bands on `[0, 1]` with endpoints in `Z/12`.
pub fn interval_system() -> impl Strategy<Value = BandSystem> {
    prop::collection::vec((any::<u8>(), any::<u8>(), any::<u8>(), any::<bool>()), 1..=4)
        .prop_filter_map("invalid system", |shapes| interval_system_from(&shapes))
}

/// Translations only, so the interval oracle applies.
pub fn translation_system() -> impl Strategy<Value = BandSystem> {
    prop::collection::vec((any::<u8>(), any::<u8>(), any::<u8>()), 1..=4).prop_filter_map("invalid system", |shapes| {
        let shapes: Vec<BandShape> = shapes.into_iter().map(|(a, l, b)| (a, l, b, false)).collect();
        interval_system_from(&shapes)
    })
}

/// A tree on `n` vertices: vertex `i > 0` hangs off `parents[i] % i` with
/// length `(lengths[i] % 8 + 1) / 4`.
pub fn tree_from(n: usize, parents: &[u8], lengths: &[u8]) -> MetricForest {
    let names = (0..n).map(|i| format!("v{i}")).collect();
    let edges = (1..n)
        .map(|i| {
            (
                format!("e{i}"),
                VertexId(parents[i] as usize % i),
                VertexId(i),
                q(lengths[i] as i64 % 8 + 1, 4),
            )
        })
        .collect();
    MetricForest::new(names, edges).unwrap()
}

pub fn tree() -> impl Strategy<Value = MetricForest> {
    (2usize..=6, prop::collection::vec(any::<u8>(), 6), prop::collection::vec(any::<u8>(), 6))
        .prop_map(|(n, p, l)| tree_from(n, &p, &l))
}

/// Point on edge `e % m` at `k/8` of its length.
pub fn point_on(f: &MetricForest, e: u8, k: u8) -> Point {
    let id = EdgeId(e as usize % f.edge_count());
    let t = f.edge_length(id) * &q(k as i64 % 9, 8);
    f.point_on_edge(id, t).unwrap()
}

/// `(edge, offset, vertex, edge', offset', vertex')`: an arc from a point
/// towards a vertex, copied onto an arc of equal length from a second
/// point towards a second vertex.
pub type TreeBandShape = (u8, u8, u8, u8, u8, u8);

pub fn tree_system_from(f: MetricForest, shapes: &[TreeBandShape]) -> Option<BandSystem> {
    let n = f.vertex_count();
    let mut bands = Vec::new();
    for (i, &(e, k, v, e2, k2, v2)) in shapes.iter().enumerate() {
        let p = point_on(&f, e, k);
        let qv = Point::Vertex(VertexId(v as usize % n));
        let len = f.distance(&p, &qv).ok()?;
        if len.is_zero() {
            return None;
        }
        let p2 = point_on(&f, e2, k2);
        let t2 = Point::Vertex(VertexId(v2 as usize % n));
        if f.distance(&p2, &t2).ok()? < len {
            return None;
        }
        let q2 = f.walk(&p2, &t2, &len).ok()?;
        let name = ["a", "b", "c"][i].to_string();
        bands.push(PartialIsometry::from_markers(name, vec![(p, p2), (qv, q2)], &f).ok()?);
    }
    BandSystem::on_forest(Arc::new(f), bands).ok()
}

pub fn tree_system() -> impl Strategy<Value = BandSystem> {
    (
        (2usize..=5, prop::collection::vec(any::<u8>(), 6), prop::collection::vec(any::<u8>(), 6)),
        prop::collection::vec(any::<(u8, u8, u8, u8, u8, u8)>(), 1..=3),
    )
        .prop_filter_map("invalid system", |((n, p, l), shapes)| tree_system_from(tree_from(n, &p, &l), &shapes))
}
