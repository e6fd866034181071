//! Admissible words, leaves through a point and the finite-depth limit set.

use ripslab::forest::EdgeId;
use ripslab::io::corpus;
use ripslab::io::system::parse_system;
use ripslab::lamination::{self, format_word};
use ripslab::scalar::Scalar;

fn main() {
    let s = parse_system(corpus::get("e_surf").unwrap().text).unwrap().system;
    let f = s.forest();

    let mut out = std::io::stdout();
    lamination::write_words(&s, 2, &mut out).unwrap();

    let x = f.point_on_edge(EdgeId(0), Scalar::from_ratio(3, 2)).unwrap();
    for leaf in lamination::leaves_at(&s, &x, 3) {
        println!("leaf {} on {}", leaf.display(&s), leaf.domain.describe(f));
    }
    for d in 1..=4 {
        let omega = lamination::limit_set(&s, d);
        println!("depth {d}: {} (volume {})", omega.region.describe(f), omega.region.volume());
    }
    let w = lamination::parse_word(&s, "abA").unwrap();
    println!("{} has domain {:?}", format_word(&s, &w), lamination::word_domain(&s, &w).unwrap().map(|d| d.describe(f)));
}
