//! Finite-depth leaf combinatorics: admissible words over `A±`, their
//! domains, leaves through a point and approximations of the limit set.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

use crate::forest::{MetricForest, Point, Region, Subtree};
use crate::isometry::{BandSystem, PartialIsometry};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LaminationError {
    #[error("word is not reduced at position {0}")]
    NotReduced(usize),
    #[error("unknown letter `{0}`")]
    UnknownLetter(String),
}

/// A band or its inverse. Positive letters sort before inverse ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub inverse: bool,
    pub band: usize,
}

impl Letter {
    pub fn new(band: usize, inverse: bool) -> Self {
        Letter { inverse, band }
    }

    pub fn inv(self) -> Self {
        Letter {
            inverse: !self.inverse,
            band: self.band,
        }
    }
}

pub type Word = Vec<Letter>;

/// All letters of a system: positives in band order, then inverses.
pub fn alphabet(s: &BandSystem) -> Vec<Letter> {
    let n = s.bands().len();
    (0..n)
        .map(|b| Letter::new(b, false))
        .chain((0..n).map(|b| Letter::new(b, true)))
        .collect()
}

pub fn is_reduced(w: &[Letter]) -> Result<(), LaminationError> {
    for (i, p) in w.windows(2).enumerate() {
        if p[1] == p[0].inv() {
            return Err(LaminationError::NotReduced(i + 1));
        }
    }
    Ok(())
}

/// The partial isometry a letter stands for.
pub fn letter_map(s: &BandSystem, l: Letter) -> PartialIsometry {
    let b = &s.bands()[l.band];
    if l.inverse {
        b.inverse()
    } else {
        b.clone()
    }
}

pub fn letter_name(s: &BandSystem, l: Letter) -> String {
    let name = &s.bands()[l.band].name;
    if !l.inverse {
        return name.clone();
    }
    let mut chars = name.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) if c.is_ascii_lowercase() => c.to_ascii_uppercase().to_string(),
        _ => format!("{name}^-1"),
    }
}

fn single_char_names(s: &BandSystem) -> bool {
    s.bands()
        .iter()
        .all(|b| b.name.len() == 1 && b.name.chars().all(|c| c.is_ascii_lowercase()))
}

pub fn format_word(s: &BandSystem, w: &[Letter]) -> String {
    let sep = if single_char_names(s) { "" } else { " " };
    w.iter().map(|&l| letter_name(s, l)).collect::<Vec<_>>().join(sep)
}

/// Parses `aB` (single-letter names, uppercase = inverse) or
/// space-separated names with `^-1` suffixes.
pub fn parse_word(s: &BandSystem, text: &str) -> Result<Word, LaminationError> {
    let find = |name: &str| s.bands().iter().position(|b| b.name == name);
    let mut out = Vec::new();
    if text.contains(char::is_whitespace) || text.contains("^-1") {
        for tok in text.split_whitespace() {
            let (name, inv) = match tok.strip_suffix("^-1") {
                Some(n) => (n, true),
                None => (tok, false),
            };
            let b = find(name).ok_or_else(|| LaminationError::UnknownLetter(tok.into()))?;
            out.push(Letter::new(b, inv));
        }
    } else {
        for c in text.chars() {
            let lower = c.to_ascii_lowercase().to_string();
            let b = find(&lower).ok_or_else(|| LaminationError::UnknownLetter(c.into()))?;
            out.push(Letter::new(b, c.is_ascii_uppercase()));
        }
    }
    is_reduced(&out)?;
    Ok(out)
}

/// `dom(a_k ∘ ... ∘ a_1)` for `w = a_1 ... a_k`, letters applied left to
/// right; `None` when the word is not admissible.
pub fn word_domain(s: &BandSystem, w: &[Letter]) -> Result<Option<Subtree>, LaminationError> {
    is_reduced(w)?;
    Ok(word_map(s, w).map(|m| m.domain().clone()))
}

/// The composed partial isometry of a nonempty word.
pub fn word_map(s: &BandSystem, w: &[Letter]) -> Option<PartialIsometry> {
    let f = s.forest();
    let mut it = w.iter();
    let mut acc = letter_map(s, *it.next()?);
    for &l in it {
        acc = acc.compose(&letter_map(s, l), f)?;
    }
    Some(acc)
}

/// Depth-first enumeration of reduced words of length `1..=depth`; a branch
/// is explored only while `keep` accepts the composed map.
pub(crate) fn enumerate<K>(s: &BandSystem, depth: usize, keep: K) -> Vec<(Word, PartialIsometry)>
where
    K: Fn(&PartialIsometry) -> bool,
{
    let f = s.forest();
    let letters = alphabet(s);
    let maps: Vec<PartialIsometry> = letters.iter().map(|&l| letter_map(s, l)).collect();
    let mut out = Vec::new();
    let mut stack: Vec<(Word, PartialIsometry)> = Vec::new();
    for (i, &l) in letters.iter().enumerate().rev() {
        if keep(&maps[i]) {
            stack.push((vec![l], maps[i].clone()));
        }
    }
    while let Some((w, m)) = stack.pop() {
        if w.len() < depth {
            let last = *w.last().unwrap();
            for (i, &l) in letters.iter().enumerate().rev() {
                if l == last.inv() {
                    continue;
                }
                if let Some(c) = m.compose(&maps[i], f) {
                    if keep(&c) {
                        let mut w2 = w.clone();
                        w2.push(l);
                        stack.push((w2, c));
                    }
                }
            }
        }
        out.push((w, m));
    }
    out
}

/// All admissible reduced words of length at most `depth`, with domains,
/// ordered by length and then letterwise.
pub fn admissible_words(s: &BandSystem, depth: usize) -> Vec<(Word, Subtree)> {
    let mut out: Vec<(Word, Subtree)> = enumerate(s, depth, |_| true)
        .into_iter()
        .map(|(w, m)| (w, m.domain().clone()))
        .collect();
    out.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));
    out
}

/// Admissible words of exactly `depth` letters.
pub fn words_of_length(s: &BandSystem, depth: usize) -> Vec<(Word, Subtree)> {
    admissible_words(s, depth)
        .into_iter()
        .filter(|(w, _)| w.len() == depth)
        .collect()
}

/// A two-sided word `u⁻¹.v`: `left = u` is read from the dot leftwards,
/// `right = v` from the dot rightwards. First letters differ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DottedWord {
    pub left: Word,
    pub right: Word,
    pub domain: Subtree,
}

impl DottedWord {
    /// Conventional rendering `z₋ₖ…z₋₁.z₀…zₖ₋₁`.
    pub fn display(&self, s: &BandSystem) -> String {
        let left: Word = self.left.iter().rev().map(|l| l.inv()).collect();
        format!("{}.{}", format_word(s, &left), format_word(s, &self.right))
    }

    /// The two half-words, smaller first.
    pub fn ends(&self) -> (&Word, &Word) {
        (&self.left, &self.right)
    }
}

impl PartialOrd for DottedWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DottedWord {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.left, &self.right).cmp(&(&other.left, &other.right))
    }
}

/// Pairs of half-words with distinct first letters whose domains meet,
/// each unordered pair once with `left < right`.
pub(crate) fn pair_up(half: &[(Word, Subtree)], f: &MetricForest) -> Vec<DottedWord> {
    let mut out = Vec::new();
    for (i, (u, du)) in half.iter().enumerate() {
        for (v, dv) in &half[i + 1..] {
            if u[0] == v[0] {
                continue;
            }
            if let Some(d) = du.intersect(dv.region(), f) {
                let (left, right) = if u < v { (u, v) } else { (v, u) };
                out.push(DottedWord {
                    left: left.clone(),
                    right: right.clone(),
                    domain: d,
                });
            }
        }
    }
    out.sort();
    out
}

/// Every dotted word of side length `depth` whose domain contains `x`.
pub fn leaves_at(s: &BandSystem, x: &Point, depth: usize) -> Vec<DottedWord> {
    let half: Vec<(Word, Subtree)> = enumerate(s, depth, |m| m.domain().contains(x))
        .into_iter()
        .filter(|(w, _)| w.len() == depth)
        .map(|(w, m)| (w, m.domain().clone()))
        .collect();
    pair_up(&half, s.forest())
}

/// Union of the domains of all dotted words of side length `depth`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LimitSetApprox {
    pub depth: usize,
    pub region: Region,
}

/// Streams `word<TAB>domain` lines for every admissible word.
pub fn write_words<W: std::io::Write + ?Sized>(s: &BandSystem, depth: usize, out: &mut W) -> std::io::Result<usize> {
    let words = admissible_words(s, depth);
    for (w, d) in &words {
        writeln!(out, "{}\t{}", format_word(s, w), d.describe(s.forest()))?;
    }
    Ok(words.len())
}

pub fn limit_set(s: &BandSystem, depth: usize) -> LimitSetApprox {
    let f = s.forest();
    let letters = alphabet(s);
    let mut by_first: Vec<Region> = vec![Region::empty(); letters.len()];
    for (w, d) in words_of_length(s, depth) {
        let i = letters.iter().position(|l| *l == w[0]).unwrap();
        by_first[i] = by_first[i].union(d.region(), f);
    }
    let mut region = Region::empty();
    for i in 0..letters.len() {
        for j in i + 1..letters.len() {
            region = region.union(&by_first[i].intersect(&by_first[j], f), f);
        }
    }
    LimitSetApprox { depth, region }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.band, if self.inverse { "⁻" } else { "" })
    }
}
