//! Directional Whitehead graphs, the pattern detector and a K3,3 in DOT.

use ripslab::io::corpus;
use ripslab::io::system::parse_system;
use ripslab::whitehead::{self as wh, PatternResult};

fn main() {
    for (name, depth) in [("e_surf", 8), ("bk_itm", 12)] {
        let s = parse_system(corpus::get(name).unwrap().text).unwrap().system;
        let f = s.forest();
        let scan = wh::wh_scan(&s, depth);
        println!("{name} at depth {depth}:");
        for e in scan.iter().take(4) {
            println!("  {} edges at {}", e.edges, f.direction_name(&e.direction));
        }
        match wh::detect_pattern(&s, depth) {
            PatternResult::NotFound { depth } => println!("  no pattern at depth {depth}"),
            PatternResult::Found(p) => {
                println!("  pattern at {} with end classes {}", p.labels[0], p.end_classes.join(", "));
                let k = wh::k33_certificate(&p).unwrap();
                print!("{}", k.dot().render());
            }
        }
    }
}
