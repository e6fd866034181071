mod common;

use common::{gen, oracle};
use proptest::prelude::*;
use ripslab::forest::{EdgeId, Point};
use ripslab::io::corpus;
use ripslab::io::system::parse_system;
use ripslab::isometry::BandSystem;
use ripslab::lamination::{
    admissible_words, leaves_at, limit_set, parse_word, word_domain, words_of_length, write_words, LaminationError,
    Letter,
};
use ripslab::rips::{self, PointComponents, RipsOptions};
use ripslab::scalar::Scalar;

fn q(n: i64, d: i64) -> Scalar {
    Scalar::from_ratio(n, d)
}

fn load(name: &str) -> BandSystem {
    parse_system(corpus::get(name).unwrap().text).unwrap().system
}

fn at(s: &BandSystem, t: Scalar) -> Point {
    s.forest().point_on_edge(EdgeId(0), t).unwrap()
}

fn seg(s: &BandSystem, a: i64, b: i64) -> String {
    s.forest().segment(&at(s, q(a, 1)), &at(s, q(b, 1))).unwrap().describe(s.forest())
}

#[test]
fn word_domains() {
    let s = load("e_surf");
    let a = parse_word(&s, "a").unwrap();
    assert_eq!(word_domain(&s, &a).unwrap().unwrap().describe(s.forest()), seg(&s, 0, 2));
    let ab = parse_word(&s, "ab").unwrap();
    let d = word_domain(&s, &ab).unwrap().unwrap();
    assert!(d.is_point());
    assert!(d.contains(&at(&s, q(0, 1))));
    let bad = vec![Letter::new(0, false), Letter::new(0, true)];
    assert_eq!(word_domain(&s, &bad).unwrap_err(), LaminationError::NotReduced(1));
    assert_eq!(parse_word(&s, "aA").unwrap_err(), LaminationError::NotReduced(1));
    assert!(matches!(parse_word(&s, "z"), Err(LaminationError::UnknownLetter(_))));
}

#[test]
fn depth_one_words() {
    let s = load("e_surf");
    let got: Vec<(String, String)> = admissible_words(&s, 1)
        .iter()
        .map(|(w, d)| (ripslab::lamination::format_word(&s, w), d.describe(s.forest())))
        .collect();
    assert_eq!(
        got,
        vec![
            ("a".to_string(), seg(&s, 0, 2)),
            ("b".into(), seg(&s, 0, 1)),
            ("A".into(), seg(&s, 1, 3)),
            ("B".into(), seg(&s, 2, 3)),
        ]
    );

    let one = load("single_band");
    let names: Vec<String> = admissible_words(&one, 2)
        .iter()
        .map(|(w, _)| ripslab::lamination::format_word(&one, w))
        .collect();
    assert_eq!(names, vec!["a", "A"]);
    assert!(admissible_words(&load("empty"), 3).is_empty());
}

#[test]
fn streaming_output() {
    let s = load("e_surf");
    let mut out = Vec::new();
    let n = write_words(&s, 2, &mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    assert_eq!(text.lines().count(), n);
    assert!(text.lines().all(|l| l.split('\t').count() == 2));
}

#[test]
fn limit_sets() {
    let s = load("e_surf");
    assert_eq!(&limit_set(&s, 1).region, s.support());
    assert!(limit_set(&load("single_band"), 1).region.is_empty());
    let o = oracle::parse_interval_system(corpus::get("e_surf").unwrap().text);
    for d in 1..=5 {
        assert_eq!(limit_set(&s, d).region.volume(), oracle::limit_set_volume(&o, d));
    }
}

#[test]
fn limit_set_survives_steps() {
    for name in ["e_surf", "e_trim", "bk_itm"] {
        let s = load(name);
        // isolated points of K' belong to the depth-d limit set, so keep them
        let keep = RipsOptions {
            point_components: PointComponents::Keep,
        };
        let t = rips::run(&s, 6, keep);
        for d in 1..=6 {
            let omega = limit_set(&s, d).region;
            for st in t.steps.iter().take(d + 1) {
                assert!(omega.is_subset(st.system.support(), s.forest()), "{name} depth {d} step {}", st.index);
            }
        }
    }
}

#[test]
fn word_count_bound() {
    for name in ["e_surf", "e_trim", "bk_itm"] {
        let s = load(name);
        let m = 2 * s.bands().len();
        for d in 1..=8 {
            let n = words_of_length(&s, d).len();
            assert!(n <= m * (m - 1).pow(d as u32 - 1), "{name} {d}");
        }
    }
}

#[test]
fn leaves_outside_limit_set() {
    let s = load("e_trim");
    let omega = limit_set(&s, 3).region;
    for k in 0..=20 {
        let x = at(&s, q(k, 20));
        if !omega.contains(&x) {
            assert!(leaves_at(&s, &x, 3).is_empty());
        }
    }
    assert!(leaves_at(&load("empty"), &at(&load("empty"), q(1, 2)), 2).is_empty());
}

#[test]
fn equivariance_under_step() {
    for name in ["e_trim", "bk_itm"] {
        let s = load(name);
        let t = rips::run(&s, 4, RipsOptions::default());
        for w in t.steps.windows(2) {
            let (prev, next) = (&w[0].system, &w[1].system);
            let f = prev.forest();
            let parent: Vec<usize> = next
                .bands()
                .iter()
                .map(|b| prev.bands().iter().position(|p| Some(&p.name) == b.parent.as_ref()).unwrap())
                .collect();
            for (word, dom) in admissible_words(next, 4) {
                let lifted: Vec<Letter> = word.iter().map(|l| Letter::new(parent[l.band], l.inverse)).collect();
                if ripslab::lamination::is_reduced(&lifted).is_err() {
                    continue;
                }
                let pd = word_domain(prev, &lifted).unwrap().expect("lifted word admissible");
                assert!(dom.is_subset(pd.region(), f));
            }
        }
    }
}

fn lib_leaves(s: &BandSystem, x: &Scalar, depth: usize) -> Vec<oracle::OLeaf> {
    oracle::observe_leaves(s, x, depth)
}

#[test]
fn e_surf_leaves_at_one() {
    let s = load("e_surf");
    let o = oracle::parse_interval_system(corpus::get("e_surf").unwrap().text);
    let got = lib_leaves(&s, &q(1, 1), 1);
    assert_eq!(got, oracle::leaves_at(&o, &q(1, 1), 1));
    // B has domain [2, 3], so no leaf through 1 uses it
    assert!(got.iter().all(|(l, r, _)| l[0] != (true, 1) && r[0] != (true, 1)));
    assert!(!got.is_empty());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn leaves_match_oracle(s in gen::translation_system(), k in 0i64..=12, depth in 1usize..=4) {
        let o = oracle::observe(&s);
        let x = q(k, 12);
        prop_assert_eq!(lib_leaves(&s, &x, depth), oracle::leaves_at(&o, &x, depth));
    }

    #[test]
    fn words_match_oracle(s in gen::translation_system(), depth in 1usize..=4) {
        let o = oracle::observe(&s);
        let mut want: Vec<Vec<oracle::OLetter>> = oracle::words(&o, depth, |_, _| true).into_iter().map(|(w, _)| w).collect();
        want.sort();
        let mut got: Vec<Vec<oracle::OLetter>> = words_of_length(&s, depth)
            .into_iter()
            .map(|(w, _)| w.iter().map(|l| (l.inverse, l.band)).collect())
            .collect();
        got.sort();
        prop_assert_eq!(got, want);
    }
}
