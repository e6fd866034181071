//! The `.bands` text format.
//!
//! ```text
//! # comment
//! field rational                      | field algebraic <poly> root-in <lo> <hi>
//! step 3                              (optional, written by checkpoints)
//! tree
//! vertex p q r
//! edge e p q 1
//! support e@1/10 e@3/10               (optional, repeatable; hull per line)
//! band a
//! parent a                            (optional)
//! domain e@0 e@1/2                    (optional hull generators)
//! range e@1/2 q                       (optional hull generators)
//! map e@0 -> e@1/2
//! map e@1/2 -> q
//! ```
//!
//! Scalars are rationals (`3/10`) or polynomials in the field generator
//! written without spaces (`1-λ+λ^2`, `lambda^2`, `1/2*λ`). Points are a
//! vertex name or `edge@offset`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::InputError;
use crate::forest::{MetricForest, Point, Region, VertexId};
use crate::isometry::{BandSystem, PartialIsometry};
use crate::scalar::{NumberField, Poly, Scalar};

/// A parsed `.bands` file.
#[derive(Debug, Clone)]
pub struct SystemFile {
    pub system: BandSystem,
    pub field: Option<Arc<NumberField>>,
    pub step: Option<usize>,
}

struct BandDraft {
    name: String,
    line: usize,
    parent: Option<String>,
    domain: Option<Vec<Point>>,
    range: Option<Vec<Point>>,
    maps: Vec<(Point, Point)>,
}

fn syntax(line: usize, column: usize, msg: impl Into<String>) -> InputError {
    InputError::Syntax {
        line,
        column,
        message: msg.into(),
    }
}

/// Parses a rational such as `-3/10` or `7`.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(BigRational::new(n, d))
}

/// Parses a polynomial in `λ` (also spelled `lambda`), no spaces.
pub fn parse_poly(s: &str) -> Option<Poly> {
    let s = s.replace("lambda", "λ").replace('x', "λ");
    if s.is_empty() {
        return None;
    }
    let mut terms = Vec::new();
    let mut cur = String::new();
    for (i, ch) in s.char_indices() {
        if (ch == '+' || ch == '-') && i > 0 && !cur.ends_with('^') {
            terms.push(std::mem::take(&mut cur));
        }
        cur.push(ch);
    }
    terms.push(cur);
    let mut acc = Poly::zero();
    for t in terms {
        let (neg, body) = match t.strip_prefix('-') {
            Some(b) => (true, b),
            None => (false, t.strip_prefix('+').unwrap_or(&t)),
        };
        let (coef, deg) = match body.find('λ') {
            None => (parse_rational(body)?, 0usize),
            Some(pos) => {
                let c = &body[..pos];
                let c = c.strip_suffix('*').unwrap_or(c);
                let coef = if c.is_empty() { BigRational::one() } else { parse_rational(c)? };
                let rest = &body[pos + 'λ'.len_utf8()..];
                let deg = if rest.is_empty() {
                    1
                } else {
                    rest.strip_prefix('^')?.parse().ok()?
                };
                (coef, deg)
            }
        };
        let mut v = vec![BigRational::zero(); deg + 1];
        v[deg] = if neg { -coef } else { coef };
        acc = acc.add(&Poly::new(v));
    }
    Some(acc)
}

/// Renders a scalar in the file syntax.
pub fn format_scalar(x: &Scalar) -> String {
    x.display_with("λ").replace(' ', "")
}

pub fn format_point(p: &Point, f: &MetricForest) -> String {
    match p {
        Point::Vertex(v) => f.vertex_name(*v).to_string(),
        Point::Edge(e, t) => format!("{}@{}", f.edge(*e).name, format_scalar(t)),
    }
}

struct Ctx {
    field: Option<Arc<NumberField>>,
}

impl Ctx {
    fn scalar(&self, s: &str, line: usize, col: usize) -> Result<Scalar, InputError> {
        if let Some(q) = parse_rational(s) {
            return Ok(Scalar::from_rational(q));
        }
        let p = parse_poly(s).ok_or_else(|| syntax(line, col, format!("bad scalar `{s}`")))?;
        if p.degree().unwrap_or(0) == 0 {
            return Ok(Scalar::from_rational(p.coeff(0)));
        }
        match &self.field {
            Some(f) => Ok(Scalar::from_poly(f, p)),
            None => Err(InputError::FieldMismatch {
                line,
                message: format!("`{s}` uses λ in a rational system"),
            }),
        }
    }
}

fn parse_point(tok: &str, f: &MetricForest, ctx: &Ctx, line: usize, col: usize) -> Result<Point, InputError> {
    match tok.split_once('@') {
        None => f
            .vertex_by_name(tok)
            .map(Point::Vertex)
            .ok_or_else(|| syntax(line, col, format!("unknown vertex `{tok}`"))),
        Some((e, off)) => {
            let eid = f
                .edge_by_name(e)
                .ok_or_else(|| syntax(line, col, format!("unknown edge `{e}`")))?;
            let t = ctx.scalar(off, line, col + e.len() + 1)?;
            f.point_on_edge(eid, t).map_err(|err| syntax(line, col, err.to_string()))
        }
    }
}

/// Parses a point written as in the file format, e.g. for command-line
/// arguments.
pub fn parse_point_str(tok: &str, f: &MetricForest, field: Option<&Arc<NumberField>>) -> Result<Point, InputError> {
    let ctx = Ctx { field: field.cloned() };
    parse_point(tok, f, &ctx, 1, 1)
}

/// Column (1-based) of the `k`-th whitespace token of `line`.
fn columns(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out.into_iter()
        .map(|(i, t)| (line[..i].chars().count() + 1, t))
        .collect()
}

pub fn parse_system(text: &str) -> Result<SystemFile, InputError> {
    let mut ctx = Ctx { field: None };
    let mut field_seen = false;
    let mut step = None;
    let mut vertices: Vec<String> = Vec::new();
    let mut edges: Vec<(String, String, String, String, usize, usize)> = Vec::new();
    let mut support_lines: Vec<(usize, Vec<(usize, String)>)> = Vec::new();
    let mut drafts_raw: Vec<(usize, Vec<(usize, String)>)> = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let content = raw.split('#').next().unwrap_or("");
        let toks = columns(content);
        let Some(&(c0, kw)) = toks.first() else {
            continue;
        };
        match kw {
            "field" => {
                if field_seen {
                    return Err(InputError::FieldMismatch {
                        line,
                        message: "a system uses a single field".into(),
                    });
                }
                field_seen = true;
                match toks.get(1).map(|t| t.1) {
                    Some("rational") if toks.len() == 2 => {}
                    Some("algebraic") => {
                        if toks.len() != 6 || toks[3].1 != "root-in" {
                            return Err(syntax(line, c0, "expected `field algebraic <poly> root-in <lo> <hi>`"));
                        }
                        let poly = parse_poly(toks[2].1)
                            .ok_or_else(|| syntax(line, toks[2].0, "bad minimal polynomial"))?;
                        let lo = parse_rational(toks[4].1).ok_or_else(|| syntax(line, toks[4].0, "bad rational"))?;
                        let hi = parse_rational(toks[5].1).ok_or_else(|| syntax(line, toks[5].0, "bad rational"))?;
                        let nf = NumberField::define(poly, lo, hi).map_err(|e| InputError::Field { line, source: e })?;
                        ctx.field = Some(nf);
                    }
                    _ => return Err(syntax(line, c0, "expected `field rational` or `field algebraic ...`")),
                }
            }
            "step" => {
                let n = toks
                    .get(1)
                    .and_then(|t| t.1.parse().ok())
                    .ok_or_else(|| syntax(line, c0, "expected `step <n>`"))?;
                step = Some(n);
            }
            "tree" => {}
            "vertex" => {
                if toks.len() < 2 {
                    return Err(syntax(line, c0, "expected vertex names"));
                }
                vertices.extend(toks[1..].iter().map(|t| t.1.to_string()));
            }
            "edge" => {
                if toks.len() != 5 {
                    return Err(syntax(line, c0, "expected `edge <name> <from> <to> <length>`"));
                }
                edges.push((
                    toks[1].1.into(),
                    toks[2].1.into(),
                    toks[3].1.into(),
                    toks[4].1.into(),
                    line,
                    toks[4].0,
                ));
            }
            "support" => {
                if toks.len() < 2 {
                    return Err(syntax(line, c0, "expected support points"));
                }
                support_lines.push((line, toks[1..].iter().map(|(c, t)| (*c, t.to_string())).collect()));
            }
            "band" | "parent" | "domain" | "range" | "map" => {
                drafts_raw.push((line, toks.iter().map(|(c, t)| (*c, t.to_string())).collect()));
            }
            other => return Err(syntax(line, c0, format!("unknown keyword `{other}`"))),
        }
    }
    if !field_seen {
        return Err(syntax(1, 1, "missing `field` line"));
    }
    // forest
    let mut edge_decls = Vec::new();
    for (name, from, to, len, line, col) in &edges {
        let idx = |v: &str| {
            vertices
                .iter()
                .position(|x| x == v)
                .map(VertexId)
                .ok_or_else(|| syntax(*line, 1, format!("unknown vertex `{v}`")))
        };
        let length = ctx.scalar(len, *line, *col)?;
        edge_decls.push((name.clone(), idx(from)?, idx(to)?, length));
    }
    let forest = MetricForest::new(vertices, edge_decls).map_err(InputError::Forest)?;
    // support
    let support = if support_lines.is_empty() {
        forest.full_region()
    } else if support_lines.len() == 1 && support_lines[0].1.len() == 1 && support_lines[0].1[0].1 == "none" {
        Region::empty()
    } else {
        let mut r = Region::empty();
        for (line, pts) in &support_lines {
            let pts: Vec<Point> = pts
                .iter()
                .map(|(c, t)| parse_point(t, &forest, &ctx, *line, *c))
                .collect::<Result<_, _>>()?;
            let h = Region::hull(&pts, &forest)
                .ok_or_else(|| syntax(*line, 1, "support points lie in different components"))?;
            r = r.union(h.region(), &forest);
        }
        r
    };
    // bands
    let mut drafts: Vec<BandDraft> = Vec::new();
    for (line, toks) in drafts_raw {
        let kw = toks[0].1.as_str();
        if kw == "band" {
            if toks.len() != 2 {
                return Err(syntax(line, toks[0].0, "expected `band <name>`"));
            }
            drafts.push(BandDraft {
                name: toks[1].1.clone(),
                line,
                parent: None,
                domain: None,
                range: None,
                maps: Vec::new(),
            });
            continue;
        }
        let d = drafts
            .last_mut()
            .ok_or_else(|| syntax(line, toks[0].0, format!("`{kw}` outside a band")))?;
        match kw {
            "parent" => {
                if toks.len() != 2 {
                    return Err(syntax(line, toks[0].0, "expected `parent <name>`"));
                }
                d.parent = Some(toks[1].1.clone());
            }
            "domain" | "range" => {
                let pts: Vec<Point> = toks[1..]
                    .iter()
                    .map(|(c, t)| parse_point(t, &forest, &ctx, line, *c))
                    .collect::<Result<_, _>>()?;
                if pts.is_empty() {
                    return Err(syntax(line, toks[0].0, "expected points"));
                }
                if kw == "domain" {
                    d.domain = Some(pts);
                } else {
                    d.range = Some(pts);
                }
            }
            "map" => {
                if toks.len() != 4 || toks[2].1 != "->" {
                    return Err(syntax(line, toks[0].0, "expected `map <point> -> <point>`"));
                }
                let p = parse_point(&toks[1].1, &forest, &ctx, line, toks[1].0)?;
                let q = parse_point(&toks[3].1, &forest, &ctx, line, toks[3].0)?;
                d.maps.push((p, q));
            }
            _ => unreachable!(),
        }
    }
    let mut bands = Vec::new();
    for d in drafts {
        if d.maps.is_empty() {
            return Err(syntax(d.line, 1, format!("band `{}` has no `map` lines", d.name)));
        }
        let mut b = match (&d.domain, &d.range) {
            (None, None) => PartialIsometry::from_markers(d.name.clone(), d.maps, &forest)
                .map_err(|e| InputError::Validation(e.to_string()))?,
            _ => {
                let src: Vec<Point> = d.maps.iter().map(|m| m.0.clone()).collect();
                let dst: Vec<Point> = d.maps.iter().map(|m| m.1.clone()).collect();
                let hull = |pts: &[Point]| {
                    Region::hull(pts, &forest)
                        .ok_or_else(|| syntax(d.line, 1, format!("band `{}` spans two components", d.name)))
                };
                let dom = hull(d.domain.as_deref().unwrap_or(&src))?;
                let ran = hull(d.range.as_deref().unwrap_or(&dst))?;
                PartialIsometry::from_parts(d.name.clone(), dom, ran, d.maps)
            }
        };
        b.parent = d.parent;
        bands.push(b);
    }
    let forest = Arc::new(forest);
    // iterates of the machine may legitimately contain mutually inverse pieces
    let system = BandSystem::checked(forest, support, bands, step.is_none())
        .map_err(|e| InputError::Validation(e.to_string()))?;
    Ok(SystemFile {
        system,
        field: ctx.field,
        step,
    })
}

/// Field of a system, found from its scalars.
pub fn system_field(s: &BandSystem) -> Option<Arc<NumberField>> {
    let f = s.forest();
    f.edge_ids().find_map(|e| f.edge_length(e).field().cloned()).or_else(|| {
        s.bands().iter().find_map(|b| {
            b.markers().iter().find_map(|(p, q)| {
                [p, q].into_iter().find_map(|x| match x {
                    Point::Edge(_, t) => t.field().cloned(),
                    _ => None,
                })
            })
        })
    })
}

/// Serializes a system; `parse_system` reads it back to an equal system.
pub fn write_system(s: &BandSystem, field: Option<&NumberField>, step: Option<usize>) -> String {
    let f = s.forest();
    let mut out = String::new();
    match field {
        None => out.push_str("field rational\n"),
        Some(nf) => {
            let (lo, hi) = nf.isolating_interval();
            out.push_str(&format!(
                "field algebraic {} root-in {} {}\n",
                nf.minimal_polynomial().display_with("λ").replace(' ', ""),
                crate::scalar::poly::fmt_rational(lo),
                crate::scalar::poly::fmt_rational(hi)
            ));
        }
    }
    if let Some(i) = step {
        out.push_str(&format!("step {i}\n"));
    }
    out.push_str("tree\n");
    let names: Vec<&str> = f.vertex_ids().map(|v| f.vertex_name(v)).collect();
    out.push_str(&format!("vertex {}\n", names.join(" ")));
    for e in f.edge_ids() {
        let edge = f.edge(e);
        out.push_str(&format!(
            "edge {} {} {} {}\n",
            edge.name,
            f.vertex_name(edge.from),
            f.vertex_name(edge.to),
            format_scalar(&edge.length)
        ));
    }
    if *s.support() != f.full_region() {
        for c in s.support().components(f) {
            let pts: Vec<String> = c.extremal_points(f).iter().map(|p| format_point(p, f)).collect();
            out.push_str(&format!("support {}\n", pts.join(" ")));
        }
        if s.support().is_empty() {
            out.push_str("support none\n");
        }
    }
    for b in s.bands() {
        out.push_str(&format!("band {}\n", b.name));
        if let Some(p) = &b.parent {
            out.push_str(&format!("parent {p}\n"));
        }
        for (p, q) in b.markers() {
            out.push_str(&format!("map {} -> {}\n", format_point(p, f), format_point(q, f)));
        }
    }
    out
}
