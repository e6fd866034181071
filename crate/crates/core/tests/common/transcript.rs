//! Pinned per-entry transcripts in `corpus/<name>.transcript`.
//!
//! Valid entries are rendered twice, once from the oracles and once from
//! the library; both must equal the file. `RIPSLAB_BLESS=1` rewrites the
//! files from the oracle rendering.

use std::fmt::Write;
use std::path::PathBuf;

use ripslab::io::corpus::{Entry, Kind};
use ripslab::io::system::{format_scalar, parse_system};
use ripslab::rips::{self, RipsOptions};
use ripslab::traintrack as tt;

use super::{oracle, turns};

pub const SWG_BUDGET: usize = 6;
pub const TT_BUDGET: usize = 12;

pub fn iterations(name: &str) -> usize {
    match name {
        "bk_itm" => 30,
        "single_band" | "empty" => 5,
        _ => 10,
    }
}

pub fn scan_depth(name: &str) -> usize {
    if name == "bk_itm" {
        12
    } else {
        8
    }
}

pub const LIMIT_DEPTH: usize = 4;

pub fn path(e: &Entry) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("corpus")
        .join(format!("{}.transcript", stem(e)))
}

pub fn stem(e: &Entry) -> &'static str {
    e.file.split('.').next().unwrap()
}

fn head(e: &Entry) -> String {
    format!("# {}\n", e.file)
}

fn dname(d: turns::D) -> char {
    let c = (b'a' + d.0 as u8) as char;
    if d.1 {
        c.to_ascii_uppercase()
    } else {
        c
    }
}

fn bands_body(
    name: &str,
    trace: Vec<(String, String, String, usize)>,
    halted: Option<usize>,
    scan: Vec<(String, bool, usize)>,
    limit: String,
) -> String {
    let mut t = String::new();
    writeln!(t, "iterations\t{}", iterations(name)).unwrap();
    for (i, (v, v3, d, n)) in trace.iter().enumerate() {
        writeln!(t, "step\t{i}\t{v}\t{v3}\t{d}\t{n}").unwrap();
    }
    match halted {
        Some(i) => writeln!(t, "halted\t{i}").unwrap(),
        None => writeln!(t, "halted\tnone").unwrap(),
    }
    writeln!(t, "scan-depth\t{}", scan_depth(name)).unwrap();
    for (x, fwd, n) in scan.into_iter().filter(|s| s.2 > 0) {
        writeln!(t, "scan\t{x}\t{}\t{n}", if fwd { '+' } else { '-' }).unwrap();
    }
    writeln!(t, "limitset-depth\t{LIMIT_DEPTH}").unwrap();
    writeln!(t, "limitset-volume\t{limit}").unwrap();
    t
}

fn map_body(matrix: Vec<Vec<u64>>, power: usize, train_track: bool, swg: Option<Vec<(turns::D, turns::D)>>) -> String {
    let mut t = String::new();
    let rows: Vec<String> = matrix
        .iter()
        .map(|r| r.iter().map(u64::to_string).collect::<Vec<_>>().join(" "))
        .collect();
    writeln!(t, "matrix\t{}", rows.join("; ")).unwrap();
    writeln!(t, "rotationless-power\t{power}").unwrap();
    writeln!(t, "train-track\t{train_track}").unwrap();
    writeln!(t, "swg-budget\t{SWG_BUDGET}").unwrap();
    match swg {
        Some(edges) => {
            for (a, b) in edges {
                writeln!(t, "swg\t{}{}", dname(a), dname(b)).unwrap();
            }
        }
        None => writeln!(t, "swg\tnot-train-track").unwrap(),
    }
    t
}

/// `None` for invalid entries.
pub fn from_oracle(e: &Entry) -> Option<String> {
    let name = stem(e);
    let body = match e.kind {
        Kind::Bands => {
            let o = oracle::parse_interval_system(e.text);
            let (sums, halted) = oracle::trace(&o, iterations(name), false);
            let trace = sums
                .iter()
                .map(|s| {
                    (
                        format_scalar(&s.volume),
                        format_scalar(&s.volume_ge3),
                        format_scalar(&s.max_domain_diameter),
                        s.band_count,
                    )
                })
                .collect();
            let scan = oracle::wh_scan(&o, scan_depth(name))
                .into_iter()
                .map(|(x, f, n)| (format_scalar(&x), f, n))
                .collect();
            let limit = format_scalar(&oracle::limit_set_volume(&o, LIMIT_DEPTH));
            bands_body(name, trace, halted, scan, limit)
        }
        Kind::Map => {
            let m = turns::Map::parse(e.text);
            let n = m.rank();
            let matrix = (0..n)
                .map(|i| (0..n).map(|j| m.images[j].iter().filter(|d| d.0 == i).count() as u64).collect())
                .collect();
            let p = m.rotationless_exponent();
            let ok = !m.cancels_within(TT_BUDGET);
            let swg = ok.then(|| turns::stable_graph(&m.power(p), SWG_BUDGET));
            map_body(matrix, p, ok, swg)
        }
        Kind::Invalid => return None,
    };
    Some(head(e) + &body)
}

/// Why the library rejects an invalid entry.
pub fn rejection(e: &Entry) -> String {
    if e.file.ends_with(".map") {
        let m = tt::parse_map(e.text).unwrap();
        let check = tt::verify_automorphism(&m).unwrap();
        assert!(!check.ok, "{} passes the inverse check", e.file);
        return "inverse words do not invert the map".into();
    }
    parse_system(e.text).unwrap_err().to_string()
}

pub fn from_library(e: &Entry) -> Option<String> {
    let name = stem(e);
    let body = match e.kind {
        Kind::Bands => {
            let s = parse_system(e.text).unwrap().system;
            let t = rips::run(&s, iterations(name), RipsOptions::default());
            let trace = t
                .summaries()
                .iter()
                .map(|s| {
                    (
                        format_scalar(&s.volume),
                        format_scalar(&s.volume_ge3),
                        format_scalar(&s.max_domain_diameter),
                        s.band_count,
                    )
                })
                .collect();
            let scan = oracle::observe_scan(&s, scan_depth(name))
                .into_iter()
                .map(|(x, f, n)| (format_scalar(&x), f, n))
                .collect();
            let limit = format_scalar(&ripslab::lamination::limit_set(&s, LIMIT_DEPTH).region.volume());
            bands_body(name, trace, t.halted, scan, limit)
        }
        Kind::Map => {
            let m = tt::parse_map(e.text).unwrap();
            let (p, fp) = tt::rotationless_power(&m);
            let ok = tt::check_train_track(&m, tt::default_power_budget(&m)).ok;
            let swg = match tt::stable_whitehead_graph(&fp, SWG_BUDGET) {
                Ok(g) => {
                    let mut v: Vec<(turns::D, turns::D)> = g
                        .edges
                        .iter()
                        .map(|&(a, b)| {
                            let (a, b) = ((a.gen, a.inverse), (b.gen, b.inverse));
                            if a <= b {
                                (a, b)
                            } else {
                                (b, a)
                            }
                        })
                        .collect();
                    v.sort();
                    Some(v)
                }
                Err(tt::TrainTrackError::NotTrainTrack) => None,
                Err(err) => panic!("{}: {err}", e.file),
            };
            map_body(tt::transition_matrix(&m).0, p, ok, swg)
        }
        Kind::Invalid => return None,
    };
    Some(head(e) + &body)
}

pub fn blessing() -> bool {
    std::env::var("RIPSLAB_BLESS").is_ok_and(|v| v == "1")
}

/// Pinned text, rewritten first when blessing: from the oracle for valid
/// entries, from the rejection for invalid ones.
pub fn pinned(e: &Entry) -> String {
    let fresh = from_oracle(e).unwrap_or_else(|| format!("{}rejected\t{}\n", head(e), rejection(e)));
    if blessing() {
        std::fs::write(path(e), &fresh).unwrap();
    }
    std::fs::read_to_string(path(e)).unwrap_or_else(|err| panic!("{}: {err}", path(e).display()))
}
