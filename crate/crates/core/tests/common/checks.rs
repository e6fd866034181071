//! Invariant checks. Each returns the number of assertions it made.

use ripslab::forest::{MetricForest, Point};
use ripslab::isometry::BandSystem;
use ripslab::lamination::{admissible_words, limit_set};
use ripslab::rips::{self, valence, RipsOptions};
use ripslab::whitehead::{candidate_points, directional_whitehead};

/// Nesting, volume, strata and lineage along `max_iter` steps.
pub fn trace_invariants(s: &BandSystem, max_iter: usize) -> usize {
    let opts = RipsOptions::default();
    let t = rips::run(s, max_iter, opts);
    let f = s.forest();
    let mut n = 0;
    for st in &t.steps {
        n += strata_nesting(&st.system);
    }
    for w in t.steps.windows(2) {
        let (a, b) = (&w[0].system, &w[1].system);
        assert!(b.support().is_subset(a.support(), f), "K_{} not inside K_{}", w[1].index, w[0].index);
        assert_eq!(b.volume(), valence(a).at_least(2, f).volume(), "vol K_{}", w[1].index);
        rips::check_lineage(a, b).unwrap();
        n += 3;
        for band in b.bands() {
            assert!(band.domain().region().is_subset(b.support(), f));
            assert!(band.range().region().is_subset(b.support(), f));
            n += 2;
        }
    }
    n
}

/// `K^{≥i+1} ⊆ K^{≥i}` and `K^{≥0}` is the support.
pub fn strata_nesting(s: &BandSystem) -> usize {
    let f = s.forest();
    let v = valence(s);
    let top = v.max_valence() + 1;
    assert_eq!(&v.at_least(0, f), s.support());
    let mut n = 1;
    for i in 0..top {
        assert!(v.at_least(i + 1, f).is_subset(&v.at_least(i, f), f), "stratum {i}");
        n += 1;
    }
    assert!(v.at_least(top, f).is_empty());
    n + 1
}

/// Sample points of a region: extremal points and midpoints between them.
pub fn samples(pts: &[Point], f: &MetricForest) -> Vec<Point> {
    let mut out = pts.to_vec();
    for (i, p) in pts.iter().enumerate() {
        for q in &pts[i + 1..] {
            out.push(f.midpoint(p, q).unwrap());
        }
    }
    out
}

/// Every band and its inverse preserve distances between sample points.
pub fn isometry_preservation(s: &BandSystem) -> usize {
    let f = s.forest();
    let mut n = 0;
    for b in s.signed_bands() {
        let pts = samples(&b.domain().extremal_points(f), f);
        for (i, p) in pts.iter().enumerate() {
            let bp = b.apply(p, f).unwrap();
            assert!(b.range().contains(&bp));
            n += 1;
            for q in &pts[i..] {
                let bq = b.apply(q, f).unwrap();
                assert_eq!(f.distance(p, q).unwrap(), f.distance(&bp, &bq).unwrap(), "{}", b.name);
                n += 1;
            }
        }
    }
    n
}

/// Among the three pair sums of four points the two largest agree.
pub fn four_point(f: &MetricForest, p: &[Point; 4]) -> usize {
    let d = |i: usize, j: usize| f.distance(&p[i], &p[j]).unwrap();
    let mut sums = [&d(0, 1) + &d(2, 3), &d(0, 2) + &d(1, 3), &d(0, 3) + &d(1, 2)];
    sums.sort();
    assert_eq!(sums[1], sums[2]);
    // triangle inequality on one triple as well
    assert!(d(0, 2) <= &d(0, 1) + &d(1, 2));
    2
}

/// Trace summaries and halting index agree after refining at `marks`.
pub fn refine_invariance(s: &BandSystem, marks: &[Point], max_iter: usize) -> usize {
    let opts = RipsOptions::default();
    let a = rips::run(s, max_iter, opts);
    let b = rips::run(&s.refined(marks), max_iter, opts);
    assert_eq!(a.halted, b.halted);
    assert_eq!(a.summaries(), b.summaries());
    2 + a.steps.len()
}

/// Prefixes of admissible words are admissible with larger domains.
pub fn prefix_closure(s: &BandSystem, depth: usize) -> usize {
    let f = s.forest();
    let words = admissible_words(s, depth);
    let mut n = 0;
    for (w, d) in &words {
        for k in 1..w.len() {
            let (_, pd) = words
                .iter()
                .find(|(v, _)| v[..] == w[..k])
                .unwrap_or_else(|| panic!("prefix of {w:?} missing"));
            assert!(d.region().is_subset(pd.region(), f));
            n += 2;
        }
    }
    n
}

/// `Ω_{d+1} ⊆ Ω_d` for `d < depth`.
pub fn limit_antitone(s: &BandSystem, depth: usize) -> usize {
    let f = s.forest();
    let mut prev = limit_set(s, 1).region;
    for d in 2..=depth {
        let next = limit_set(s, d).region;
        assert!(next.is_subset(&prev, f), "depth {d}");
        prev = next;
    }
    depth.saturating_sub(1)
}

/// Every edge at depth `L + 1` truncates to an edge at depth `L`.
pub fn whitehead_monotone(s: &BandSystem, depth: usize) -> usize {
    let f = s.forest();
    let mut n = 0;
    for x in candidate_points(s) {
        for d in f.directions_at(&x) {
            let mut prev = directional_whitehead(s, &x, &d, 1).unwrap();
            for l in 2..=depth {
                let g = directional_whitehead(s, &x, &d, l).unwrap();
                for (_, _, e) in &g.edges {
                    let (u, v) = (&e.left[..l - 1], &e.right[..l - 1]);
                    assert!(
                        prev.edges.iter().any(|(_, _, p)| p.left == u && p.right == v),
                        "edge at depth {l} lost its truncation"
                    );
                    n += 1;
                }
                prev = g;
            }
        }
    }
    n
}
