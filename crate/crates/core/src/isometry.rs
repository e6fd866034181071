//! Partial isometries between compact subtrees and band systems built from
//! them.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::forest::{ForestError, MetricForest, Point, Region, Subtree};
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IsometryError {
    #[error("point {0} is outside the domain of `{1}`")]
    OutOfDomain(String, String),
    #[error("band `{0}` has no markers")]
    NoMarkers(String),
    #[error(transparent)]
    Forest(#[from] ForestError),
    #[error("band `{band}` is invalid: {}", .violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid {
        band: String,
        violations: Vec<Violation>,
    },
    #[error("duplicate band label `{0}`")]
    DuplicateLabel(String),
    #[error("band `{0}` is not contained in the forest support")]
    OutsideSupport(String),
    #[error("bands `{0}` and `{1}` are inverse to each other")]
    InversePair(String, String),
}

/// One failed check of [`PartialIsometry::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Distance {
        i: usize,
        j: usize,
        domain: String,
        range: String,
    },
    Surjectivity {
        expected: String,
        found: String,
    },
    Hull {
        expected: String,
        found: String,
    },
    MissingExtremalMarker(String),
    MarkerOutside(String),
    BranchInconsistent(String),
    DifferentComponents(usize),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Distance { i, j, domain, range } => {
                write!(f, "markers {i},{j}: domain distance {domain} but range distance {range}")
            }
            Violation::Surjectivity { expected, found } => {
                write!(f, "range {expected} differs from the marker image hull {found}")
            }
            Violation::Hull { expected, found } => {
                write!(f, "domain {expected} differs from the marker hull {found}")
            }
            Violation::MissingExtremalMarker(p) => write!(f, "extremal point {p} of the domain is not a marker"),
            Violation::MarkerOutside(p) => write!(f, "marker {p} lies outside its subtree"),
            Violation::BranchInconsistent(p) => write!(f, "images of branch point {p} disagree"),
            Violation::DifferentComponents(i) => write!(f, "marker {i} is in another component"),
        }
    }
}

/// An isometry between two compact subtrees, stored by a correspondence of
/// marker points that includes every extremal point of the domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialIsometry {
    pub name: String,
    domain: Subtree,
    range: Subtree,
    markers: Vec<(Point, Point)>,
    /// Label of the band this one was restricted from.
    pub parent: Option<String>,
}

impl PartialIsometry {
    /// Domain and range are the hulls of the marker points.
    pub fn from_markers(
        name: impl Into<String>,
        markers: Vec<(Point, Point)>,
        f: &MetricForest,
    ) -> Result<Self, IsometryError> {
        let name = name.into();
        if markers.is_empty() {
            return Err(IsometryError::NoMarkers(name));
        }
        let src: Vec<Point> = markers.iter().map(|m| m.0.clone()).collect();
        let dst: Vec<Point> = markers.iter().map(|m| m.1.clone()).collect();
        let domain = Region::hull(&src, f).ok_or(ForestError::DifferentComponents)?;
        let range = Region::hull(&dst, f).ok_or(ForestError::DifferentComponents)?;
        Ok(PartialIsometry {
            name,
            domain,
            range,
            markers,
            parent: None,
        })
    }

    /// Explicit domain and range, unchecked; see [`PartialIsometry::validate`].
    pub fn from_parts(
        name: impl Into<String>,
        domain: Subtree,
        range: Subtree,
        markers: Vec<(Point, Point)>,
    ) -> Self {
        PartialIsometry {
            name: name.into(),
            domain,
            range,
            markers,
            parent: None,
        }
    }

    pub fn domain(&self) -> &Subtree {
        &self.domain
    }

    pub fn range(&self) -> &Subtree {
        &self.range
    }

    pub fn markers(&self) -> &[(Point, Point)] {
        &self.markers
    }

    /// Label root: the part of the name before the first `.`.
    pub fn root(&self) -> &str {
        self.name.split('.').next().unwrap_or(&self.name)
    }

    pub fn is_point(&self) -> bool {
        self.domain.is_point()
    }

    pub fn inverse(&self) -> PartialIsometry {
        PartialIsometry {
            name: format!("{}^-1", self.name),
            domain: self.range.clone(),
            range: self.domain.clone(),
            markers: self.markers.iter().map(|(a, b)| (b.clone(), a.clone())).collect(),
            parent: self.parent.as_ref().map(|p| format!("{p}^-1")),
        }
    }

    pub fn apply(&self, p: &Point, f: &MetricForest) -> Result<Point, IsometryError> {
        let (m0, n0) = &self.markers[0];
        if p == m0 {
            return Ok(n0.clone());
        }
        if !self.domain.contains(p) {
            return Err(IsometryError::OutOfDomain(f.point_name(p), self.name.clone()));
        }
        let d = f.distance(m0, p)?;
        for (mj, nj) in &self.markers[1..] {
            if f.between(m0, p, mj) {
                return Ok(f.walk(n0, nj, &d)?);
            }
        }
        Err(IsometryError::OutOfDomain(f.point_name(p), self.name.clone()))
    }

    /// Restriction to `domain ∩ d`; `None` when that is empty.
    pub fn restrict(&self, d: &Region, f: &MetricForest) -> Option<PartialIsometry> {
        let dom = self.domain.intersect(d, f)?;
        if dom == self.domain {
            let mut out = self.clone();
            out.parent = Some(self.name.clone());
            return Some(out);
        }
        let markers: Vec<(Point, Point)> = dom
            .extremal_points(f)
            .into_iter()
            .map(|p| {
                let q = self.apply(&p, f).expect("restricted point lies in the domain");
                (p, q)
            })
            .collect();
        let imgs: Vec<Point> = markers.iter().map(|m| m.1.clone()).collect();
        let range = Region::hull(&imgs, f).expect("images lie in one component");
        Some(PartialIsometry {
            name: self.name.clone(),
            domain: dom,
            range,
            markers,
            parent: Some(self.name.clone()),
        })
    }

    /// The points of the domain mapped into `r`.
    pub fn preimage(&self, r: &Region, f: &MetricForest) -> Option<Subtree> {
        self.inverse().restrict(r, f).map(|inv| inv.range)
    }

    /// `then ∘ self` on the largest domain where it is defined.
    pub fn compose(&self, then: &PartialIsometry, f: &MetricForest) -> Option<PartialIsometry> {
        let mid = self.range.intersect(then.domain(), f)?;
        let dom = self.preimage(&mid, f)?;
        let markers: Vec<(Point, Point)> = dom
            .extremal_points(f)
            .into_iter()
            .map(|p| {
                let q = self.apply(&p, f).expect("in domain");
                let r = then.apply(&q, f).expect("in domain");
                (p, r)
            })
            .collect();
        let imgs: Vec<Point> = markers.iter().map(|m| m.1.clone()).collect();
        let range = Region::hull(&imgs, f)?;
        Some(PartialIsometry {
            name: format!("{}{}", self.name, then.name),
            domain: dom,
            range,
            markers,
            parent: None,
        })
    }

    /// Canonical geometric content: domain, range and the images of the
    /// domain's extremal points. Two bands with equal keys are the same map.
    pub fn key(&self, f: &MetricForest) -> (Region, Region, Vec<Point>) {
        let imgs = self
            .domain
            .extremal_points(f)
            .iter()
            .map(|p| self.apply(p, f).expect("extremal point in domain"))
            .collect();
        (self.domain.region().clone(), self.range.region().clone(), imgs)
    }

    /// Structured consistency check; an empty list means valid.
    pub fn validate(&self, f: &MetricForest) -> Vec<Violation> {
        let mut out = Vec::new();
        let n = self.markers.len();
        let c_dom = f.component_of(&self.markers[0].0);
        let c_ran = f.component_of(&self.markers[0].1);
        for (i, (a, b)) in self.markers.iter().enumerate() {
            if f.component_of(a) != c_dom || f.component_of(b) != c_ran {
                out.push(Violation::DifferentComponents(i));
            }
        }
        if !out.is_empty() {
            return out;
        }
        for i in 0..n {
            for j in i + 1..n {
                let d1 = f.distance(&self.markers[i].0, &self.markers[j].0).unwrap();
                let d2 = f.distance(&self.markers[i].1, &self.markers[j].1).unwrap();
                if d1 != d2 {
                    out.push(Violation::Distance {
                        i,
                        j,
                        domain: d1.to_string(),
                        range: d2.to_string(),
                    });
                }
            }
        }
        for (a, b) in &self.markers {
            if !self.domain.contains(a) {
                out.push(Violation::MarkerOutside(f.point_name(a)));
            }
            if !self.range.contains(b) {
                out.push(Violation::MarkerOutside(f.point_name(b)));
            }
        }
        let src: Vec<Point> = self.markers.iter().map(|m| m.0.clone()).collect();
        let dst: Vec<Point> = self.markers.iter().map(|m| m.1.clone()).collect();
        let shull = Region::hull(&src, f).unwrap();
        if shull != self.domain {
            out.push(Violation::Hull {
                expected: self.domain.describe(f),
                found: shull.describe(f),
            });
        }
        let rhull = Region::hull(&dst, f).unwrap();
        if rhull != self.range {
            out.push(Violation::Surjectivity {
                expected: self.range.describe(f),
                found: rhull.describe(f),
            });
        }
        for p in self.domain.extremal_points(f) {
            if !src.contains(&p) {
                out.push(Violation::MissingExtremalMarker(f.point_name(&p)));
            }
        }
        if out.is_empty() {
            // a branch point's image must not depend on the marker path used
            for b in self.domain.branch_points(f) {
                let mut images = Vec::new();
                for (i, (mi, ni)) in self.markers.iter().enumerate() {
                    for (mj, nj) in &self.markers[i + 1..] {
                        if f.between(mi, &b, mj) {
                            let d = f.distance(mi, &b).unwrap();
                            if let Ok(q) = f.walk(ni, nj, &d) {
                                images.push(q);
                            }
                        }
                    }
                }
                images.dedup();
                if images.len() > 1 {
                    out.push(Violation::BranchInconsistent(f.point_name(&b)));
                }
            }
        }
        out
    }

    pub fn describe(&self, f: &MetricForest) -> String {
        format!("{}: {} -> {}", self.name, self.domain.describe(f), self.range.describe(f))
    }
}

/// A compact forest (a closed region of a host forest) together with a
/// finite set of partial isometries between its subtrees.
#[derive(Debug, Clone)]
pub struct BandSystem {
    forest: Arc<MetricForest>,
    support: Region,
    bands: Vec<PartialIsometry>,
}

impl BandSystem {
    /// Checks every band and the standing assumptions (unique labels, bands
    /// inside the support, no band inverse to a band).
    pub fn new(
        forest: Arc<MetricForest>,
        support: Region,
        bands: Vec<PartialIsometry>,
    ) -> Result<Self, IsometryError> {
        BandSystem::checked(forest, support, bands, true)
    }

    /// Like [`BandSystem::new`]; `inverse_pairs` toggles the `A ∩ A⁻¹ = ∅`
    /// check.
    pub fn checked(
        forest: Arc<MetricForest>,
        support: Region,
        bands: Vec<PartialIsometry>,
        inverse_pairs: bool,
    ) -> Result<Self, IsometryError> {
        let f = &*forest;
        let mut seen = HashSet::new();
        for b in &bands {
            if !seen.insert(b.name.clone()) {
                return Err(IsometryError::DuplicateLabel(b.name.clone()));
            }
            let v = b.validate(f);
            if !v.is_empty() {
                return Err(IsometryError::Invalid {
                    band: b.name.clone(),
                    violations: v,
                });
            }
            if !b.domain.is_subset(&support, f) || !b.range.is_subset(&support, f) {
                return Err(IsometryError::OutsideSupport(b.name.clone()));
            }
        }
        for (i, a) in bands.iter().enumerate().filter(|_| inverse_pairs) {
            for b in &bands[i + 1..] {
                if a.key(f) == b.inverse().key(f) {
                    return Err(IsometryError::InversePair(a.name.clone(), b.name.clone()));
                }
            }
        }
        Ok(BandSystem { forest, support, bands })
    }

    /// Whole host forest as support.
    pub fn on_forest(forest: Arc<MetricForest>, bands: Vec<PartialIsometry>) -> Result<Self, IsometryError> {
        let support = forest.full_region();
        BandSystem::new(forest, support, bands)
    }

    /// No validation; for systems produced by trusted transformations.
    pub(crate) fn from_parts(forest: Arc<MetricForest>, support: Region, bands: Vec<PartialIsometry>) -> Self {
        BandSystem { forest, support, bands }
    }

    pub fn forest(&self) -> &MetricForest {
        &self.forest
    }

    pub fn forest_arc(&self) -> &Arc<MetricForest> {
        &self.forest
    }

    /// The compact forest K as a region of the host forest.
    pub fn support(&self) -> &Region {
        &self.support
    }

    pub fn bands(&self) -> &[PartialIsometry] {
        &self.bands
    }

    pub fn band(&self, name: &str) -> Option<&PartialIsometry> {
        self.bands.iter().find(|b| b.name == name)
    }

    /// `A ∪ A⁻¹`: each band followed by its inverse.
    pub fn signed_bands(&self) -> Vec<PartialIsometry> {
        self.bands.iter().flat_map(|b| [b.clone(), b.inverse()]).collect()
    }

    pub fn volume(&self) -> Scalar {
        self.support.volume()
    }

    /// Largest diameter of a band domain (0 without bands).
    pub fn max_domain_diameter(&self) -> Scalar {
        self.bands
            .iter()
            .map(|b| b.domain.diameter(&self.forest))
            .max()
            .unwrap_or_else(Scalar::zero)
    }

    /// Subdivides the host forest at the given marks and transports the
    /// system.
    pub fn refined(&self, marks: &[Point]) -> BandSystem {
        let (g, rl) = self.forest.refine(marks);
        let bands = self
            .bands
            .iter()
            .map(|b| {
                let markers = b
                    .markers
                    .iter()
                    .map(|(p, q)| (rl.map_point(p, &g), rl.map_point(q, &g)))
                    .collect();
                PartialIsometry {
                    name: b.name.clone(),
                    domain: Subtree::from_region_unchecked(rl.map_region(b.domain.region(), &g)),
                    range: Subtree::from_region_unchecked(rl.map_region(b.range.region(), &g)),
                    markers,
                    parent: b.parent.clone(),
                }
            })
            .collect();
        let support = rl.map_region(&self.support, &g);
        BandSystem::from_parts(Arc::new(g), support, bands)
    }
}
