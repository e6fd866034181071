//! Endomorphisms of a free group given by generator images on a rose:
//! parsing, automorphism checks, transition data, direction dynamics,
//! train-track and rotationless checks, stable Whitehead graphs.

mod matrix;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_integer::Integer;
use thiserror::Error;

use crate::io::dot::DotGraph;

pub use matrix::{primitivity, transition, transition_matrix, Matrix, NotPrimitive, TransitionData};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TrainTrackError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown generator `{name}`")]
    UnknownGenerator { line: usize, name: char },
    #[error("no image given for generator `{0}`")]
    MissingImage(char),
    #[error("image of `{0}` reduces to the empty word")]
    EmptyImage(char),
    #[error("no inverse images supplied")]
    MissingInverse,
    #[error("transition matrix is not primitive: {0}")]
    NotPrimitive(NotPrimitive),
    #[error("map is not rotationless")]
    NotRotationless,
    #[error("map is not a train track")]
    NotTrainTrack,
    #[error("maps have different ranks")]
    RankMismatch,
    #[error("{0}")]
    Field(String),
}

/// A generator or its inverse. Also names a direction at the rose vertex:
/// the initial germ of that oriented edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sym {
    pub inverse: bool,
    pub gen: usize,
}

impl Sym {
    pub fn new(gen: usize, inverse: bool) -> Self {
        Sym { inverse, gen }
    }

    pub fn inv(self) -> Self {
        Sym::new(self.gen, !self.inverse)
    }
}

pub type FWord = Vec<Sym>;

pub fn inverse_word(w: &[Sym]) -> FWord {
    w.iter().rev().map(|s| s.inv()).collect()
}

/// Free reduction; also returns the number of cancelled pairs.
pub fn reduce(w: &[Sym]) -> (FWord, usize) {
    let mut out: FWord = Vec::with_capacity(w.len());
    let mut cancelled = 0;
    for &s in w {
        if out.last() == Some(&s.inv()) {
            out.pop();
            cancelled += 1;
        } else {
            out.push(s);
        }
    }
    (out, cancelled)
}

/// Unordered pair of directions, smaller first.
pub type Turn = (Sym, Sym);

pub fn turn(a: Sym, b: Sym) -> Turn {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Turns crossed by a path: between `x` and `y` the path leaves through
/// the end of `x` (direction `x⁻¹`) and enters `y`.
pub fn turns_of(w: &[Sym]) -> Vec<Turn> {
    w.windows(2).map(|p| turn(p[0].inv(), p[1])).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoseMap {
    pub names: Vec<char>,
    pub images: Vec<FWord>,
    pub inverse: Option<Vec<FWord>>,
    pub atoroidal_asserted: bool,
    /// Notes produced while parsing, e.g. free reductions applied.
    pub warnings: Vec<String>,
}

impl RoseMap {
    pub fn new(names: Vec<char>, images: Vec<FWord>) -> Self {
        RoseMap {
            names,
            images,
            inverse: None,
            atoroidal_asserted: false,
            warnings: Vec::new(),
        }
    }

    pub fn identity(names: Vec<char>) -> Self {
        let images = (0..names.len()).map(|i| vec![Sym::new(i, false)]).collect();
        RoseMap::new(names, images)
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    /// Image of a word, without reduction.
    pub fn apply_raw(&self, w: &[Sym]) -> FWord {
        let mut out = Vec::new();
        for &s in w {
            if s.inverse {
                out.extend(inverse_word(&self.images[s.gen]));
            } else {
                out.extend_from_slice(&self.images[s.gen]);
            }
        }
        out
    }

    pub fn apply(&self, w: &[Sym]) -> FWord {
        reduce(&self.apply_raw(w)).0
    }

    pub fn image_of(&self, s: Sym) -> FWord {
        self.apply(&[s])
    }

    /// `self ∘ g`: apply `g`, then `self`.
    pub fn compose(&self, g: &RoseMap) -> Result<RoseMap, TrainTrackError> {
        if self.rank() != g.rank() {
            return Err(TrainTrackError::RankMismatch);
        }
        let images = g.images.iter().map(|w| self.apply(w)).collect();
        Ok(RoseMap::new(self.names.clone(), images))
    }

    /// `f` followed by `g`, i.e. `g ∘ f`.
    pub fn then(&self, g: &RoseMap) -> Result<RoseMap, TrainTrackError> {
        g.compose(self)
    }

    pub fn power(&self, k: usize) -> RoseMap {
        let mut acc = RoseMap::identity(self.names.clone());
        for _ in 0..k {
            acc = self.compose(&acc).unwrap();
        }
        acc
    }

    pub fn sym_name(&self, s: Sym) -> char {
        let c = self.names[s.gen];
        if s.inverse {
            c.to_ascii_uppercase()
        } else {
            c
        }
    }

    pub fn word_name(&self, w: &[Sym]) -> String {
        if w.is_empty() {
            return "1".into();
        }
        w.iter().map(|&s| self.sym_name(s)).collect()
    }

    pub fn turn_name(&self, t: Turn) -> String {
        format!("{{{}, {}}}", self.sym_name(t.0), self.sym_name(t.1))
    }

    /// All `2n` directions, positive ones first.
    pub fn directions(&self) -> Vec<Sym> {
        let n = self.rank();
        (0..n)
            .map(|i| Sym::new(i, false))
            .chain((0..n).map(|i| Sym::new(i, true)))
            .collect()
    }

    /// The derivative map on directions: first letter of the image.
    pub fn df(&self, d: Sym) -> Sym {
        self.image_of(d)[0]
    }
}

impl fmt::Display for RoseMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = (0..self.rank())
            .map(|i| format!("{} -> {}", self.names[i], self.word_name(&self.images[i])))
            .collect();
        write!(f, "{}", parts.join("; "))
    }
}

fn parse_word(text: &str, names: &[char], line: usize) -> Result<FWord, TrainTrackError> {
    let mut w = Vec::new();
    for c in text.chars().filter(|c| !c.is_whitespace()) {
        let lower = c.to_ascii_lowercase();
        let gen = names
            .iter()
            .position(|&n| n == lower)
            .ok_or(TrainTrackError::UnknownGenerator { line, name: c })?;
        w.push(Sym::new(gen, c.is_ascii_uppercase()));
    }
    Ok(w)
}

struct Statement {
    line: usize,
    lhs: char,
    rhs: String,
    inverse: bool,
}

/// Reads `a -> ab; b -> ac; c -> a`. Statements are separated by `;` or
/// newlines; `#` starts a comment. A line starting with `inverse:` gives
/// images of the inverse automorphism; `atoroidal: asserted` sets a flag.
pub fn parse_map(text: &str) -> Result<RoseMap, TrainTrackError> {
    let mut statements = Vec::new();
    let mut atoroidal = false;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let mut body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        if let Some(rest) = body.strip_prefix("atoroidal:") {
            if rest.trim() != "asserted" {
                return Err(TrainTrackError::Syntax {
                    line,
                    message: format!("expected `atoroidal: asserted`, found `{body}`"),
                });
            }
            atoroidal = true;
            continue;
        }
        let inverse = match body.strip_prefix("inverse:") {
            Some(rest) => {
                body = rest.trim();
                true
            }
            None => false,
        };
        for st in body.split(';').map(str::trim).filter(|s| !s.is_empty()) {
            let mut parts = st.split("->");
            let (lhs, rhs) = match (parts.next(), parts.next(), parts.next()) {
                (Some(l), Some(r), None) => (l.trim(), r.trim()),
                _ => {
                    return Err(TrainTrackError::Syntax {
                        line,
                        message: format!("expected `x -> word`, found `{st}`"),
                    })
                }
            };
            let mut chars = lhs.chars();
            let name = match (chars.next(), chars.next()) {
                (Some(c), None) if c.is_ascii_lowercase() => c,
                _ => {
                    return Err(TrainTrackError::Syntax {
                        line,
                        message: format!("generator must be one lowercase letter, found `{lhs}`"),
                    })
                }
            };
            if rhs.is_empty() || !rhs.chars().all(|c| c.is_ascii_alphabetic() || c.is_whitespace()) {
                return Err(TrainTrackError::Syntax {
                    line,
                    message: format!("bad image word `{rhs}`"),
                });
            }
            statements.push(Statement {
                line,
                lhs: name,
                rhs: rhs.into(),
                inverse,
            });
        }
    }
    let mut names: Vec<char> = Vec::new();
    for st in statements.iter().filter(|s| !s.inverse) {
        if names.contains(&st.lhs) {
            return Err(TrainTrackError::Syntax {
                line: st.line,
                message: format!("second image for `{}`", st.lhs),
            });
        }
        names.push(st.lhs);
    }
    let mut warnings = Vec::new();
    let mut collect = |inverse: bool| -> Result<Option<Vec<FWord>>, TrainTrackError> {
        let mut images: Vec<Option<FWord>> = vec![None; names.len()];
        let mut any = false;
        for st in statements.iter().filter(|s| s.inverse == inverse) {
            any = true;
            let gen = names
                .iter()
                .position(|&n| n == st.lhs)
                .ok_or(TrainTrackError::UnknownGenerator { line: st.line, name: st.lhs })?;
            let w = parse_word(&st.rhs, &names, st.line)?;
            let (r, cancelled) = reduce(&w);
            if cancelled > 0 {
                warnings.push(format!("line {}: image of `{}` freely reduced", st.line, st.lhs));
            }
            if r.is_empty() {
                return Err(TrainTrackError::EmptyImage(st.lhs));
            }
            images[gen] = Some(r);
        }
        if !any {
            return Ok(None);
        }
        images
            .into_iter()
            .enumerate()
            .map(|(i, w)| w.ok_or(TrainTrackError::MissingImage(names[i])))
            .collect::<Result<Vec<_>, _>>()
            .map(Some)
    };
    let images = collect(false)?.unwrap_or_default();
    let inverse = collect(true)?;
    Ok(RoseMap {
        names,
        images,
        inverse,
        atoroidal_asserted: atoroidal,
        warnings,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutomorphismCheck {
    pub ok: bool,
    /// One line per generator and composition order.
    pub transcript: Vec<String>,
}

/// Checks that both compositions with the supplied inverse reduce to the
/// identity on every generator.
pub fn verify_automorphism(m: &RoseMap) -> Result<AutomorphismCheck, TrainTrackError> {
    let inv_images = m.inverse.as_ref().ok_or(TrainTrackError::MissingInverse)?;
    let inv = RoseMap::new(m.names.clone(), inv_images.clone());
    let mut ok = true;
    let mut transcript = Vec::new();
    for (label, outer, inner) in [("f(g(x))", m, &inv), ("g(f(x))", &inv, m)] {
        for i in 0..m.rank() {
            let x = Sym::new(i, false);
            let raw = outer.apply_raw(&inner.image_of(x));
            let (r, cancelled) = reduce(&raw);
            let good = r == [x];
            ok &= good;
            transcript.push(format!(
                "{} for x = {}: {} -> {} ({} cancellations){}",
                label,
                m.names[i],
                m.word_name(&raw),
                m.word_name(&r),
                cancelled,
                if good { "" } else { " NOT IDENTITY" }
            ));
        }
    }
    Ok(AutomorphismCheck { ok, transcript })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectionMap {
    pub table: BTreeMap<Sym, Sym>,
    /// Periodic orbits, each starting at its smallest direction.
    pub orbits: Vec<Vec<Sym>>,
    pub fixed: Vec<Sym>,
}

impl DirectionMap {
    pub fn periods(&self) -> Vec<usize> {
        self.orbits.iter().map(Vec::len).collect()
    }
}

pub fn direction_dynamics(m: &RoseMap) -> DirectionMap {
    let dirs = m.directions();
    let table: BTreeMap<Sym, Sym> = dirs.iter().map(|&d| (d, m.df(d))).collect();
    let mut periodic = BTreeSet::new();
    for &d in &dirs {
        // iterate 2n times to land on a cycle
        let mut x = d;
        for _ in 0..dirs.len() {
            x = table[&x];
        }
        periodic.insert(x);
        let mut y = table[&x];
        while y != x {
            periodic.insert(y);
            y = table[&y];
        }
    }
    let mut orbits = Vec::new();
    let mut seen = BTreeSet::new();
    for &d in &periodic {
        if seen.contains(&d) {
            continue;
        }
        let mut orbit = vec![d];
        seen.insert(d);
        let mut y = table[&d];
        while y != d {
            orbit.push(y);
            seen.insert(y);
            y = table[&y];
        }
        orbits.push(orbit);
    }
    let fixed = orbits.iter().filter(|o| o.len() == 1).map(|o| o[0]).collect();
    DirectionMap { table, orbits, fixed }
}

/// Every periodic direction is fixed.
pub fn is_rotationless(m: &RoseMap) -> bool {
    direction_dynamics(m).orbits.iter().all(|o| o.len() == 1)
}

/// Least `p` (lcm of the periods) with `f^p` rotationless, and `f^p`.
pub fn rotationless_power(m: &RoseMap) -> (usize, RoseMap) {
    let p = direction_dynamics(m).periods().into_iter().fold(1, |a, b| a.lcm(&b));
    let fp = m.power(p);
    debug_assert!(is_rotationless(&fp));
    (p, fp)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TrainTrackWitness {
    /// `f(e)` is not reduced.
    Unreduced { generator: usize },
    /// A turn crossed by `f^k(e)` whose Df-iterate degenerates.
    IllegalTurn { turn: Turn, iteration: usize, generator: usize, steps: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrainTrackCheck {
    pub ok: bool,
    pub witness: Option<TrainTrackWitness>,
}

fn degenerates(m: &RoseMap, t: Turn) -> Option<usize> {
    let (mut a, mut b) = t;
    for step in 0..=2 * m.rank() * 2 * m.rank() {
        if a == b {
            return Some(step);
        }
        a = m.df(a);
        b = m.df(b);
    }
    None
}

/// Turns crossed by `f^k(e)` for `k = 1..=budget`, found without expanding
/// the words: new turns are Df-images of old ones or turns inside `f(x)`
/// for a letter `x` already present.
fn taken_turns(m: &RoseMap, e: usize, budget: usize) -> Vec<BTreeSet<Turn>> {
    let mut letters: BTreeSet<Sym> = BTreeSet::from([Sym::new(e, false)]);
    let mut turns: BTreeSet<Turn> = BTreeSet::new();
    let mut out = Vec::new();
    for _ in 0..budget {
        let mut next_turns: BTreeSet<Turn> = turns.iter().map(|&(a, b)| turn(m.df(a), m.df(b))).collect();
        let mut next_letters = BTreeSet::new();
        for &x in &letters {
            let img = m.image_of(x);
            next_turns.extend(turns_of(&img));
            next_letters.extend(img);
        }
        letters = next_letters;
        turns = next_turns;
        out.push(turns.clone());
    }
    out
}

/// Default budget: Df acts on `2n` directions, so `2n` iterates suffice.
pub fn default_power_budget(m: &RoseMap) -> usize {
    2 * m.rank()
}

pub fn check_train_track(m: &RoseMap, power_budget: usize) -> TrainTrackCheck {
    for (g, img) in m.images.iter().enumerate() {
        if reduce(img).1 > 0 {
            return TrainTrackCheck {
                ok: false,
                witness: Some(TrainTrackWitness::Unreduced { generator: g }),
            };
        }
    }
    for e in 0..m.rank() {
        for (k, turns) in taken_turns(m, e, power_budget).into_iter().enumerate() {
            for &t in &turns {
                if let Some(steps) = degenerates(m, t) {
                    return TrainTrackCheck {
                        ok: false,
                        witness: Some(TrainTrackWitness::IllegalTurn {
                            turn: t,
                            iteration: k + 1,
                            generator: e,
                            steps,
                        }),
                    };
                }
            }
        }
    }
    TrainTrackCheck { ok: true, witness: None }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StableWhiteheadGraph {
    pub vertices: Vec<Sym>,
    pub edges: Vec<Turn>,
    pub budget: usize,
}

impl StableWhiteheadGraph {
    pub fn dot(&self, m: &RoseMap) -> DotGraph {
        let mut g = DotGraph::new("stable Whitehead graph");
        for &v in &self.vertices {
            g.node(&m.sym_name(v).to_string(), None);
        }
        for &(a, b) in &self.edges {
            g.edge(&m.sym_name(a).to_string(), &m.sym_name(b).to_string(), None);
        }
        g
    }
}

/// Graph on the fixed directions whose edges are the turns between fixed
/// directions crossed by some `f^k(e)`, `k <= budget`. Requires a
/// rotationless train-track map.
pub fn stable_whitehead_graph(m: &RoseMap, budget: usize) -> Result<StableWhiteheadGraph, TrainTrackError> {
    let dm = direction_dynamics(m);
    if dm.orbits.iter().any(|o| o.len() > 1) {
        return Err(TrainTrackError::NotRotationless);
    }
    if !check_train_track(m, default_power_budget(m)).ok {
        return Err(TrainTrackError::NotTrainTrack);
    }
    let fixed: BTreeSet<Sym> = dm.fixed.iter().copied().collect();
    let mut edges = BTreeSet::new();
    for e in 0..m.rank() {
        for turns in taken_turns(m, e, budget) {
            edges.extend(
                turns
                    .into_iter()
                    .filter(|(a, b)| a != b && fixed.contains(a) && fixed.contains(b)),
            );
        }
    }
    Ok(StableWhiteheadGraph {
        vertices: dm.fixed,
        edges: edges.into_iter().collect(),
        budget,
    })
}
