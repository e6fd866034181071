//! Surface type versus Levitt evidence for every bundled system.

use ripslab::io::corpus::{self, Kind};
use ripslab::io::system::{format_scalar, parse_system};
use ripslab::rips::{self, RipsOptions};
use ripslab::scalar::Scalar;

fn main() {
    let half = Scalar::from_ratio(1, 2);
    for e in corpus::ENTRIES.iter().filter(|e| e.kind == Kind::Bands) {
        let s = parse_system(e.text).unwrap().system;
        let c = rips::classify(&s, 30, &half, RipsOptions::default());
        let sums = c.trace.summaries();
        let last = sums.last().unwrap();
        println!(
            "{:<18} {:<40} vol K>=3 {} -> {}",
            e.file,
            c.verdict.to_string(),
            format_scalar(&sums[0].volume_ge3),
            format_scalar(&last.volume_ge3)
        );
    }
}
