//! Distances, segments and hulls in a tripod.

use ripslab::forest::{EdgeId, MetricForest, Point, Region, VertexId};
use ripslab::scalar::Scalar;

fn main() {
    let q = |n, d| Scalar::from_ratio(n, d);
    let f = MetricForest::new(
        ["c", "x", "y", "z"].map(String::from).to_vec(),
        vec![
            ("ex".into(), VertexId(0), VertexId(1), q(1, 1)),
            ("ey".into(), VertexId(0), VertexId(2), q(2, 1)),
            ("ez".into(), VertexId(0), VertexId(3), q(4, 1)),
        ],
    )
    .unwrap();
    let v = |name: &str| Point::Vertex(f.vertex_by_name(name).unwrap());
    let p = f.point_on_edge(EdgeId(2), q(3, 2)).unwrap();

    println!("d(x, z) = {}", f.distance(&v("x"), &v("z")).unwrap());
    println!("d(y, {}) = {}", f.point_name(&p), f.distance(&v("y"), &p).unwrap());
    println!("[x, y] = {}", f.segment(&v("x"), &v("y")).unwrap().describe(&f));
    println!("midpoint of [y, z] = {}", f.point_name(&f.midpoint(&v("y"), &v("z")).unwrap()));

    let hull = Region::hull(&[v("x"), v("y"), p.clone()], &f).unwrap();
    println!("hull(x, y, {}) = {} with volume {}", f.point_name(&p), hull.describe(&f), hull.volume());
    for d in f.directions_at(&v("c")) {
        println!("direction at c: {}", f.direction_name(&d));
    }
}
