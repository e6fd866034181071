//! Independent reference computations for interval systems whose bands are
//! translations. Inputs are read straight from the `.bands` text; only the
//! scalar layer is shared with the library.

use std::collections::BTreeSet;
use std::sync::Arc;

use ripslab::io::system::{parse_poly, parse_rational};
use ripslab::scalar::{NumberField, Scalar};

/// `x ↦ x + shift` on `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct IBand {
    pub lo: Scalar,
    pub hi: Scalar,
    pub shift: Scalar,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ISystem {
    pub length: Scalar,
    /// Disjoint closed intervals, sorted; points allowed.
    pub support: Vec<(Scalar, Scalar)>,
    pub bands: Vec<IBand>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ISummary {
    pub volume: Scalar,
    pub volume_ge3: Scalar,
    pub max_domain_diameter: Scalar,
    pub band_count: usize,
}

fn scalar(tok: &str, field: &Option<Arc<NumberField>>) -> Scalar {
    if let Some(q) = parse_rational(tok) {
        return Scalar::from_rational(q);
    }
    let p = parse_poly(tok).expect("scalar");
    Scalar::from_poly(field.as_ref().expect("field"), p)
}

/// Reads a single-edge `.bands` file with `vertex lo hi`.
pub fn parse_interval_system(text: &str) -> ISystem {
    let mut field = None;
    let mut length = None;
    let mut maps: Vec<Vec<(Scalar, Scalar)>> = Vec::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap().trim();
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks.first() {
            Some(&"field") if toks[1] == "algebraic" => {
                let p = parse_poly(toks[2]).unwrap();
                let lo = parse_rational(toks[4]).unwrap();
                let hi = parse_rational(toks[5]).unwrap();
                field = Some(NumberField::define(p, lo, hi).unwrap());
            }
            Some(&"edge") => {
                assert!(length.is_none(), "one edge only");
                length = Some(scalar(toks[4], &field));
            }
            Some(&"band") => maps.push(Vec::new()),
            Some(&"map") => {
                let len = length.clone().unwrap();
                let at = |t: &str| match t {
                    "lo" => Scalar::zero(),
                    "hi" => len.clone(),
                    _ => scalar(t.split_once('@').unwrap().1, &field),
                };
                maps.last_mut().unwrap().push((at(toks[1]), at(toks[3])));
            }
            _ => {}
        }
    }
    let length = length.expect("edge");
    let bands = maps
        .into_iter()
        .map(|pairs| {
            let shift = &pairs[0].1 - &pairs[0].0;
            for (p, q) in &pairs {
                assert_eq!(q - p, shift, "oracle handles translations only");
            }
            let lo = pairs.iter().map(|p| p.0.clone()).min().unwrap();
            let hi = pairs.iter().map(|p| p.0.clone()).max().unwrap();
            IBand { lo, hi, shift }
        })
        .collect();
    ISystem {
        support: vec![(Scalar::zero(), length.clone())],
        length,
        bands,
    }
}

impl ISystem {
    /// Domains of the bands and their inverses, bands first.
    pub fn signed(&self) -> Vec<(Scalar, Scalar, Scalar)> {
        let mut v: Vec<_> = self
            .bands
            .iter()
            .map(|b| (b.lo.clone(), b.hi.clone(), b.shift.clone()))
            .collect();
        v.extend(
            self.bands
                .iter()
                .map(|b| (&b.lo + &b.shift, &b.hi + &b.shift, -&b.shift)),
        );
        v
    }

    fn valence_at(&self, x: &Scalar) -> usize {
        self.signed().iter().filter(|(lo, hi, _)| lo <= x && x <= hi).count()
    }

    pub fn summary(&self) -> ISummary {
        let mut cuts: BTreeSet<Scalar> = BTreeSet::new();
        for (lo, hi, _) in self.signed() {
            cuts.insert(lo);
            cuts.insert(hi);
        }
        let cuts: Vec<Scalar> = cuts.into_iter().collect();
        let mut volume_ge3 = Scalar::zero();
        for w in cuts.windows(2) {
            let mid = (&w[0] + &w[1]).half();
            if self.valence_at(&mid) >= 3 {
                volume_ge3 = volume_ge3 + (&w[1] - &w[0]);
            }
        }
        ISummary {
            volume: self.support.iter().map(|(a, b)| b - a).sum(),
            volume_ge3,
            max_domain_diameter: self
                .bands
                .iter()
                .map(|b| &b.hi - &b.lo)
                .max()
                .unwrap_or_else(Scalar::zero),
            band_count: self.bands.len(),
        }
    }

    /// One step: keep points covered by two signed domains, drop isolated
    /// points unless `keep_points`, restrict bands to component pairs.
    pub fn step(&self, keep_points: bool) -> ISystem {
        let signed = self.signed();
        let mut pieces = Vec::new();
        for i in 0..signed.len() {
            for j in i + 1..signed.len() {
                let lo = std::cmp::max(signed[i].0.clone(), signed[j].0.clone());
                let hi = std::cmp::min(signed[i].1.clone(), signed[j].1.clone());
                if lo <= hi {
                    pieces.push((lo, hi));
                }
            }
        }
        pieces.sort();
        let mut comps: Vec<(Scalar, Scalar)> = Vec::new();
        for (lo, hi) in pieces {
            match comps.last_mut() {
                Some(last) if lo <= last.1 => {
                    if hi > last.1 {
                        last.1 = hi;
                    }
                }
                _ => comps.push((lo, hi)),
            }
        }
        if !keep_points {
            comps.retain(|(a, b)| a < b);
        }
        let mut bands = Vec::new();
        for b in &self.bands {
            for c in &comps {
                for c2 in &comps {
                    let lo = [b.lo.clone(), c.0.clone(), &c2.0 - &b.shift].into_iter().max().unwrap();
                    let hi = [b.hi.clone(), c.1.clone(), &c2.1 - &b.shift].into_iter().min().unwrap();
                    if lo <= hi {
                        bands.push(IBand {
                            lo,
                            hi,
                            shift: b.shift.clone(),
                        });
                    }
                }
            }
        }
        ISystem {
            length: self.length.clone(),
            support: comps,
            bands,
        }
    }

    fn same(&self, other: &ISystem) -> bool {
        let mut a = self.bands.clone();
        let mut b = other.bands.clone();
        a.sort();
        b.sort();
        self.support == other.support && a == b
    }
}

/// Summaries of `S_0, S_1, ...` and the halting index, as the library
/// stores them.
pub fn trace(s: &ISystem, max_iter: usize, keep_points: bool) -> (Vec<ISummary>, Option<usize>) {
    let mut cur = s.clone();
    let mut out = vec![cur.summary()];
    for i in 0..max_iter {
        let next = cur.step(keep_points);
        if next.same(&cur) {
            return (out, Some(i));
        }
        out.push(next.summary());
        cur = next;
    }
    (out, None)
}

/// A letter as `(inverse, band)`, ordered like the library's letters.
pub type OLetter = (bool, usize);

/// Reduced words of exactly `depth` letters whose domain satisfies `keep`
/// (checked on every prefix), with domains.
pub fn words<K>(s: &ISystem, depth: usize, keep: K) -> Vec<(Vec<OLetter>, (Scalar, Scalar))>
where
    K: Fn(&Scalar, &Scalar) -> bool + Copy,
{
    let n = s.bands.len();
    let signed = s.signed();
    let letter = |i: usize| -> OLetter { (i >= n, i % n.max(1)) };
    let mut out = Vec::new();
    #[allow(clippy::too_many_arguments)]
    fn go<K: Fn(&Scalar, &Scalar) -> bool + Copy>(
        signed: &[(Scalar, Scalar, Scalar)],
        n: usize,
        depth: usize,
        word: &mut Vec<usize>,
        lo: Scalar,
        hi: Scalar,
        offset: Scalar,
        keep: K,
        out: &mut Vec<(Vec<usize>, (Scalar, Scalar))>,
    ) {
        if word.len() == depth {
            out.push((word.clone(), (lo, hi)));
            return;
        }
        for (i, (a, b, t)) in signed.iter().enumerate() {
            if let Some(&last) = word.last() {
                if (last + n) % (2 * n) == i {
                    continue;
                }
            }
            // the point x + offset must lie in [a, b]
            let nlo = std::cmp::max(lo.clone(), a - &offset);
            let nhi = std::cmp::min(hi.clone(), b - &offset);
            if nlo <= nhi && keep(&nlo, &nhi) {
                word.push(i);
                go(signed, n, depth, word, nlo, nhi, &offset + t, keep, out);
                word.pop();
            }
        }
    }
    let mut raw = Vec::new();
    if n > 0 {
        go(
            &signed,
            n,
            depth,
            &mut Vec::new(),
            Scalar::zero(),
            s.length.clone(),
            Scalar::zero(),
            keep,
            &mut raw,
        );
    }
    for (w, d) in raw {
        out.push((w.into_iter().map(letter).collect(), d));
    }
    out
}

/// Dotted words `(left, right, domain)` of side `depth` through `x`.
pub fn leaves_at(s: &ISystem, x: &Scalar, depth: usize) -> Vec<(Vec<OLetter>, Vec<OLetter>, (Scalar, Scalar))> {
    let half = words(s, depth, |lo, hi| lo <= x && x <= hi);
    let mut out = Vec::new();
    for (i, (u, du)) in half.iter().enumerate() {
        for (v, dv) in &half[i + 1..] {
            if u[0] == v[0] {
                continue;
            }
            let lo = std::cmp::max(du.0.clone(), dv.0.clone());
            let hi = std::cmp::min(du.1.clone(), dv.1.clone());
            let (l, r) = if u < v { (u, v) } else { (v, u) };
            out.push((l.clone(), r.clone(), (lo, hi)));
        }
    }
    out.sort();
    out
}

/// `(offset, forward, edges)` for every candidate point and direction.
pub fn wh_scan(s: &ISystem, depth: usize) -> Vec<(Scalar, bool, usize)> {
    let mut pts: BTreeSet<Scalar> = BTreeSet::from([Scalar::zero(), s.length.clone()]);
    for (lo, hi, _) in s.signed() {
        pts.insert(lo);
        pts.insert(hi);
    }
    let mut out = Vec::new();
    for x in pts {
        for forward in [false, true] {
            if (forward && x == s.length) || (!forward && x.is_zero()) {
                continue;
            }
            let germ = |lo: &Scalar, hi: &Scalar| {
                if forward {
                    lo <= &x && &x < hi
                } else {
                    lo < &x && &x <= hi
                }
            };
            let half = words(s, depth, germ);
            let mut edges = 0;
            for (i, (u, _)) in half.iter().enumerate() {
                edges += half[i + 1..].iter().filter(|(v, _)| v[0] != u[0]).count();
            }
            out.push((x.clone(), forward, edges));
        }
    }
    out.sort();
    out
}

/// Union over dotted words of side `depth` of their domains, as sorted
/// merged intervals.
pub fn limit_set_volume(s: &ISystem, depth: usize) -> Scalar {
    let half = words(s, depth, |_, _| true);
    let mut pieces = Vec::new();
    for (i, (u, du)) in half.iter().enumerate() {
        for (v, dv) in &half[i + 1..] {
            if u[0] == v[0] {
                continue;
            }
            let lo = std::cmp::max(du.0.clone(), dv.0.clone());
            let hi = std::cmp::min(du.1.clone(), dv.1.clone());
            if lo <= hi {
                pieces.push((lo, hi));
            }
        }
    }
    pieces.sort();
    let mut total = Scalar::zero();
    let mut cur: Option<(Scalar, Scalar)> = None;
    for (lo, hi) in pieces {
        cur = match cur {
            Some((a, b)) if lo <= b => Some((a, std::cmp::max(b, hi))),
            Some((a, b)) => {
                total = total + (b - a);
                Some((lo, hi))
            }
            None => Some((lo, hi)),
        };
    }
    if let Some((a, b)) = cur {
        total = total + (b - a);
    }
    total
}

/// Reads a library system on a single edge back into oracle form, for
/// comparing outputs. Band order is kept.
pub fn observe(s: &ripslab::isometry::BandSystem) -> ISystem {
    use ripslab::forest::{EdgeId, Point};
    let f = s.forest();
    let length = f.edge_length(EdgeId(0)).clone();
    let at = |p: &Point| match p {
        Point::Vertex(v) if f.vertex_name(*v) == "lo" => Scalar::zero(),
        Point::Vertex(_) => length.clone(),
        Point::Edge(_, t) => t.clone(),
    };
    let ends = |pts: Vec<Point>| {
        let v: Vec<Scalar> = pts.iter().map(at).collect();
        (v.iter().min().unwrap().clone(), v.iter().max().unwrap().clone())
    };
    let mut support: Vec<(Scalar, Scalar)> = s.support().components(f).iter().map(|c| ends(c.extremal_points(f))).collect();
    support.sort();
    let bands: Vec<IBand> = s
        .bands()
        .iter()
        .map(|b| {
            let (lo, hi) = ends(b.domain().extremal_points(f));
            let shift = &at(&b.apply(&b.domain().extremal_points(f)[0], f).unwrap()) - &at(&b.domain().extremal_points(f)[0]);
            IBand { lo, hi, shift }
        })
        .collect();
    ISystem { length, support, bands }
}

impl ISystem {
    pub fn sorted(mut self) -> ISystem {
        self.bands.sort();
        self
    }
}

/// Offset of a point on a single-edge forest.
pub fn offset(f: &ripslab::forest::MetricForest, p: &ripslab::forest::Point) -> Scalar {
    use ripslab::forest::{EdgeId, Point};
    match p {
        Point::Vertex(v) if f.vertex_name(*v) == "lo" => Scalar::zero(),
        Point::Vertex(_) => f.edge_length(EdgeId(0)).clone(),
        Point::Edge(_, t) => t.clone(),
    }
}

/// The library's scan in oracle form, sorted.
pub fn observe_scan(s: &ripslab::isometry::BandSystem, depth: usize) -> Vec<(Scalar, bool, usize)> {
    let f = s.forest();
    let mut out: Vec<_> = ripslab::whitehead::wh_scan(s, depth)
        .into_iter()
        .map(|e| (offset(f, &e.point), e.direction.forward, e.edges))
        .collect();
    out.sort();
    out
}

pub type OLeaf = (Vec<OLetter>, Vec<OLetter>, (Scalar, Scalar));

/// The library's leaves through offset `x`, in oracle form, sorted.
pub fn observe_leaves(s: &ripslab::isometry::BandSystem, x: &Scalar, depth: usize) -> Vec<OLeaf> {
    use ripslab::forest::EdgeId;
    use ripslab::lamination::Letter;
    let f = s.forest();
    let p = f.point_on_edge(EdgeId(0), x.clone()).unwrap();
    let conv = |w: &[Letter]| w.iter().map(|l| (l.inverse, l.band)).collect::<Vec<_>>();
    let mut out: Vec<OLeaf> = ripslab::lamination::leaves_at(s, &p, depth)
        .into_iter()
        .map(|dw| {
            let ends: Vec<Scalar> = dw.domain.extremal_points(f).iter().map(|q| offset(f, q)).collect();
            let lo = ends.iter().min().unwrap().clone();
            let hi = ends.iter().max().unwrap().clone();
            (conv(&dw.left), conv(&dw.right), (lo, hi))
        })
        .collect();
    out.sort();
    out
}
