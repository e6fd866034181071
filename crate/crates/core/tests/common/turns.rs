//! Reference stable Whitehead graph: expand `f^k(e)` literally, collect the
//! turns crossed, close the set under Df and keep turns between distinct
//! fixed directions.

use std::collections::BTreeSet;

/// `(generator, inverse)`.
pub type D = (usize, bool);

pub struct Map {
    pub images: Vec<Vec<D>>,
}

fn inv(d: D) -> D {
    (d.0, !d.1)
}

fn free_reduce(w: Vec<D>) -> Vec<D> {
    let mut out: Vec<D> = Vec::new();
    for d in w {
        if out.last() == Some(&inv(d)) {
            out.pop();
        } else {
            out.push(d);
        }
    }
    out
}

impl Map {
    /// Reads `x -> word` statements, ignoring `inverse:` lines.
    pub fn parse(text: &str) -> Map {
        let mut names = Vec::new();
        let mut rhs = Vec::new();
        for line in text.lines() {
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() || line.starts_with("inverse:") || line.starts_with("atoroidal:") {
                continue;
            }
            for st in line.split(';').filter(|s| !s.trim().is_empty()) {
                let (l, r) = st.split_once("->").unwrap();
                names.push(l.trim().chars().next().unwrap());
                rhs.push(r.trim().to_string());
            }
        }
        let images = rhs
            .iter()
            .map(|r| {
                r.chars()
                    .map(|c| {
                        let g = names.iter().position(|&n| n == c.to_ascii_lowercase()).unwrap();
                        (g, c.is_ascii_uppercase())
                    })
                    .collect()
            })
            .collect();
        Map { images }
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, d: D) -> Vec<D> {
        let w = &self.images[d.0];
        if d.1 {
            w.iter().rev().map(|&x| inv(x)).collect()
        } else {
            w.clone()
        }
    }

    pub fn apply(&self, w: &[D]) -> Vec<D> {
        free_reduce(w.iter().flat_map(|&d| self.image(d)).collect())
    }

    pub fn compose(&self, g: &Map) -> Map {
        Map {
            images: g.images.iter().map(|w| self.apply(w)).collect(),
        }
    }

    pub fn df(&self, d: D) -> D {
        self.apply(&[d])[0]
    }

    pub fn directions(&self) -> Vec<D> {
        (0..self.rank()).flat_map(|g| [(g, false), (g, true)]).collect()
    }

    /// Least common multiple of the periods of periodic directions.
    pub fn rotationless_exponent(&self) -> usize {
        let dirs = self.directions();
        let mut l = 1;
        for &d in &dirs {
            let mut x = d;
            for _ in 0..dirs.len() {
                x = self.df(x);
            }
            let mut p = 1;
            let mut y = self.df(x);
            while y != x {
                y = self.df(y);
                p += 1;
            }
            l = num_integer::lcm(l, p);
        }
        l
    }

    pub fn power(&self, p: usize) -> Map {
        let mut acc = Map {
            images: (0..self.rank()).map(|g| vec![(g, false)]).collect(),
        };
        for _ in 0..p {
            acc = self.compose(&acc);
        }
        acc
    }

    /// True when some `f^k(e)`, `k <= budget`, cancels on expansion.
    pub fn cancels_within(&self, budget: usize) -> bool {
        for g in 0..self.rank() {
            let mut w = vec![(g, false)];
            for _ in 0..budget {
                let raw: Vec<D> = w.iter().flat_map(|&d| self.image(d)).collect();
                let red = free_reduce(raw.clone());
                if red.len() != raw.len() {
                    return true;
                }
                w = red;
            }
        }
        false
    }
}

fn turn(a: D, b: D) -> (D, D) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Edge list of the stable graph of `m` (assumed rotationless).
pub fn stable_graph(m: &Map, budget: usize) -> Vec<(D, D)> {
    let fixed: BTreeSet<D> = m.directions().into_iter().filter(|&d| m.df(d) == d).collect();
    let mut turns = BTreeSet::new();
    for g in 0..m.rank() {
        let mut w = vec![(g, false)];
        for _ in 0..budget {
            w = m.apply(&w);
            for p in w.windows(2) {
                turns.insert(turn(inv(p[0]), p[1]));
            }
        }
    }
    loop {
        let next: BTreeSet<(D, D)> = turns
            .iter()
            .map(|&(a, b)| turn(m.df(a), m.df(b)))
            .filter(|(a, b)| a != b)
            .collect();
        let before = turns.len();
        turns.extend(next);
        if turns.len() == before {
            break;
        }
    }
    turns
        .into_iter()
        .filter(|(a, b)| a != b && fixed.contains(a) && fixed.contains(b))
        .collect()
}
