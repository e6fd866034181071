//! The Rips machine: valence strata, the induction step, halting and the
//! surface/Levitt classifier.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use crate::forest::{EdgeId, MetricForest, Point, Region};
use crate::isometry::{BandSystem, PartialIsometry};
use crate::scalar::Scalar;

/// What to do with components of `K'` that are single points.
///
/// Such points are endpoints where two domains merely touch (for instance
/// where `dom(a)` meets `dom(a⁻¹)`). `Keep` follows the set-theoretic
/// definition literally; `Discard` drops them, which keeps point residue
/// from propagating and is the default.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PointComponents {
    #[default]
    Discard,
    Keep,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RipsOptions {
    pub point_components: PointComponents,
}

/// Valence `v(x) = #{a ∈ A± : x ∈ dom(a)}` on the support, piecewise
/// constant between breakpoints.
#[derive(Debug, Clone)]
pub struct ValenceStratification {
    /// Open edge pieces `(edge, lo, hi, valence)` covering the support.
    pub segments: Vec<(EdgeId, Scalar, Scalar, usize)>,
    /// Vertices and interior breakpoints of the support with their valence.
    pub points: Vec<(Point, usize)>,
}

impl ValenceStratification {
    pub fn max_valence(&self) -> usize {
        let s = self.segments.iter().map(|s| s.3);
        let p = self.points.iter().map(|p| p.1);
        s.chain(p).max().unwrap_or(0)
    }

    /// `K^{≥i}`.
    pub fn at_least(&self, i: usize, f: &MetricForest) -> Region {
        let mut r = Region::empty();
        for (e, lo, hi, v) in &self.segments {
            if *v >= i {
                r.add_span(*e, lo.clone(), hi.clone());
            }
        }
        for (p, v) in &self.points {
            if *v >= i {
                r.add_point(p);
            }
        }
        r.normalize(f);
        r
    }

    /// `K^{=i}` as (open pieces, points).
    pub fn exactly(&self, i: usize) -> (Vec<(EdgeId, Scalar, Scalar)>, Vec<Point>) {
        let segs = self
            .segments
            .iter()
            .filter(|s| s.3 == i)
            .map(|s| (s.0, s.1.clone(), s.2.clone()))
            .collect();
        let pts = self.points.iter().filter(|p| p.1 == i).map(|p| p.0.clone()).collect();
        (segs, pts)
    }
}

pub fn valence(s: &BandSystem) -> ValenceStratification {
    let f = s.forest();
    let domains: Vec<Region> = s.signed_bands().iter().map(|b| b.domain().region().clone()).collect();
    let count = |p: &Point| domains.iter().filter(|d| d.contains(p)).count();
    let support = s.support();
    let mut segments = Vec::new();
    let mut points = Vec::new();
    for v in support.vertices() {
        let p = Point::Vertex(v);
        points.push((p.clone(), count(&p)));
    }
    for e in f.edge_ids() {
        let len = f.edge_length(e).clone();
        let mut cuts = vec![Scalar::zero(), len.clone()];
        for r in domains.iter().chain(std::iter::once(support)) {
            for sp in r.edge_spans(e) {
                cuts.push(sp.lo.clone());
                cuts.push(sp.hi.clone());
            }
        }
        cuts.sort();
        cuts.dedup();
        for w in cuts.windows(2) {
            let mid = Point::Edge(e, (&w[0] + &w[1]).half());
            if support.contains(&mid) {
                segments.push((e, w[0].clone(), w[1].clone(), count(&mid)));
            }
        }
        for t in &cuts[1..cuts.len() - 1] {
            let p = Point::Edge(e, t.clone());
            if support.contains(&p) {
                points.push((p.clone(), count(&p)));
            }
        }
    }
    points.sort();
    ValenceStratification { segments, points }
}

/// `K' = ⋃ dom(a) ∩ dom(a')` over distinct `a, a' ∈ A±`.
pub fn k_prime(s: &BandSystem, opts: RipsOptions) -> Region {
    let f = s.forest();
    let signed = s.signed_bands();
    let mut k = Region::empty();
    for (i, a) in signed.iter().enumerate() {
        for b in &signed[i + 1..] {
            let x = a.domain().intersect(b.domain().region(), f);
            if let Some(x) = x {
                k = k.union(x.region(), f);
            }
        }
    }
    if opts.point_components == PointComponents::Discard {
        let mut kept = Region::empty();
        for c in k.components(f) {
            if !c.is_point() {
                kept = kept.union(&c, f);
            }
        }
        k = kept;
    }
    k
}

/// One iteration: restrict to `K'` and split every band by the pair of
/// components containing its domain and range pieces.
pub fn rips_step(s: &BandSystem, opts: RipsOptions) -> BandSystem {
    let f = s.forest();
    let k = k_prime(s, opts);
    let comps = k.components(f);
    let mut bands: Vec<PartialIsometry> = Vec::new();
    let mut names = HashSet::new();
    for a in s.bands() {
        for (ci, c) in comps.iter().enumerate() {
            let Some(dc) = a.domain().intersect(c, f) else {
                continue;
            };
            for (cj, c2) in comps.iter().enumerate() {
                let Some(pre) = a.preimage(c2, f) else {
                    continue;
                };
                let Some(piece) = dc.intersect(pre.region(), f) else {
                    continue;
                };
                let mut r = a.restrict(piece.region(), f).expect("nonempty restriction");
                let mut name = format!("{}.{}.{}", a.root(), ci, cj);
                let mut k = 1;
                while names.contains(&name) {
                    name = format!("{}.{}.{}.{}", a.root(), ci, cj, k);
                    k += 1;
                }
                names.insert(name.clone());
                r.name = name;
                r.parent = Some(a.name.clone());
                bands.push(r);
            }
        }
    }
    BandSystem::from_parts(s.forest_arc().clone(), k, bands)
}

/// Band sets equal up to relabeling.
pub fn same_bands(a: &BandSystem, b: &BandSystem) -> bool {
    let f = a.forest();
    let mut ka: Vec<_> = a.bands().iter().map(|x| x.key(f)).collect();
    let mut kb: Vec<_> = b.bands().iter().map(|x| x.key(f)).collect();
    ka.sort();
    kb.sort();
    ka == kb
}

/// True when `next = rips_step(s)` leaves the system unchanged.
pub fn halts(s: &BandSystem, next: &BandSystem) -> bool {
    s.support() == next.support() && same_bands(s, next)
}

/// Every extremal point of every domain in `A±` survives one step. On
/// failure the offending band and point are returned.
pub fn is_reduced(s: &BandSystem, opts: RipsOptions) -> Result<(), (String, Point)> {
    let f = s.forest();
    let k1 = k_prime(s, opts);
    for b in s.signed_bands() {
        for p in b.domain().extremal_points(f) {
            if !k1.contains(&p) {
                return Err((b.name.clone(), p));
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepSummary {
    pub volume: Scalar,
    pub volume_ge3: Scalar,
    pub max_domain_diameter: Scalar,
    pub band_count: usize,
}

impl StepSummary {
    pub fn of(s: &BandSystem) -> Self {
        let f = s.forest();
        StepSummary {
            volume: s.volume(),
            volume_ge3: valence(s).at_least(3, f).volume(),
            max_domain_diameter: s.max_domain_diameter(),
            band_count: s.bands().len(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct TraceStep {
    pub index: usize,
    pub system: BandSystem,
    pub summary: StepSummary,
}

/// Systems `S_0, S_1, ...` up to the halting step or the budget.
#[derive(Debug, Clone)]
pub struct RipsTrace {
    pub steps: Vec<TraceStep>,
    /// Index `i` with `S_i = S_{i+1}`, if observed.
    pub halted: Option<usize>,
}

impl RipsTrace {
    pub fn last(&self) -> &TraceStep {
        self.steps.last().expect("trace is never empty")
    }

    pub fn summaries(&self) -> Vec<&StepSummary> {
        self.steps.iter().map(|s| &s.summary).collect()
    }
}

/// Iterates the machine for at most `max_iter` steps. `on_step` sees every
/// stored system (for checkpointing).
pub fn run_with<F>(s: &BandSystem, first_index: usize, max_iter: usize, opts: RipsOptions, mut on_step: F) -> RipsTrace
where
    F: FnMut(usize, &BandSystem),
{
    let mut steps = vec![TraceStep {
        index: first_index,
        summary: StepSummary::of(s),
        system: s.clone(),
    }];
    on_step(first_index, s);
    let mut halted = None;
    for i in first_index..first_index + max_iter {
        let cur = &steps.last().unwrap().system;
        let next = rips_step(cur, opts);
        if halts(cur, &next) {
            halted = Some(i);
            break;
        }
        on_step(i + 1, &next);
        steps.push(TraceStep {
            index: i + 1,
            summary: StepSummary::of(&next),
            system: next,
        });
    }
    RipsTrace { steps, halted }
}

pub fn run(s: &BandSystem, max_iter: usize, opts: RipsOptions) -> RipsTrace {
    run_with(s, 0, max_iter, opts, |_, _| {})
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    SurfaceType {
        step: usize,
    },
    LevittEvidence {
        iterations: usize,
        diameters: Vec<Scalar>,
        volumes_ge3: Vec<Scalar>,
    },
    Inconclusive {
        reason: String,
    },
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::SurfaceType { step } => write!(f, "SurfaceType({step})"),
            Verdict::LevittEvidence { iterations, .. } => write!(f, "LevittEvidence({iterations})"),
            Verdict::Inconclusive { reason } => write!(f, "Inconclusive({reason})"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Classification {
    pub verdict: Verdict,
    pub max_iter: usize,
    pub diam_ratio: Scalar,
    pub trace: RipsTrace,
}

/// Surface type on an exact halt; Levitt evidence when the machine runs the
/// whole budget with `vol(K^{≥3}) > 0` throughout and the largest domain
/// shrinks below `diam_ratio` times its initial size.
pub fn classify(s: &BandSystem, max_iter: usize, diam_ratio: &Scalar, opts: RipsOptions) -> Classification {
    let trace = run(s, max_iter, opts);
    let verdict = classify_trace(&trace, diam_ratio);
    Classification {
        verdict,
        max_iter,
        diam_ratio: diam_ratio.clone(),
        trace,
    }
}

pub fn classify_trace(trace: &RipsTrace, diam_ratio: &Scalar) -> Verdict {
    if let Some(step) = trace.halted {
        return Verdict::SurfaceType { step };
    }
    let sums = trace.summaries();
    if let Some(bad) = sums.iter().position(|s| !s.volume_ge3.is_positive()) {
        return Verdict::Inconclusive {
            reason: format!("vol(K^>=3) = 0 at step {}", trace.steps[bad].index),
        };
    }
    let first = &sums[0].max_domain_diameter;
    let last = &sums[sums.len() - 1].max_domain_diameter;
    if *last >= diam_ratio * first {
        return Verdict::Inconclusive {
            reason: format!("final diameter {last} not below {diam_ratio} of initial {first}"),
        };
    }
    Verdict::LevittEvidence {
        iterations: sums.len() - 1,
        diameters: sums.iter().map(|s| s.max_domain_diameter.clone()).collect(),
        volumes_ge3: sums.iter().map(|s| s.volume_ge3.clone()).collect(),
    }
}

/// Lineage: every band of `next` restricts the band of `prev` named as its
/// parent.
pub fn check_lineage(prev: &BandSystem, next: &BandSystem) -> Result<(), String> {
    let f = prev.forest();
    let by_name: BTreeMap<&str, &PartialIsometry> = prev.bands().iter().map(|b| (b.name.as_str(), b)).collect();
    for b in next.bands() {
        let parent = b.parent.as_deref().ok_or_else(|| format!("{} has no parent", b.name))?;
        let p = by_name
            .get(parent)
            .ok_or_else(|| format!("{}: unknown parent {parent}", b.name))?;
        let r = p
            .restrict(b.domain().region(), f)
            .ok_or_else(|| format!("{} does not meet its parent", b.name))?;
        if r.key(f) != b.key(f) {
            return Err(format!("{} is not a restriction of {parent}", b.name));
        }
    }
    Ok(())
}
