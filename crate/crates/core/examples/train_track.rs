//! Transition matrix, dilatation, direction dynamics and the stable
//! Whitehead graph of a rose map.

use ripslab::io::corpus;
use ripslab::traintrack as tt;

fn main() {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path).unwrap(),
        None => corpus::get("tribonacci").unwrap().text.to_string(),
    };
    let m = tt::parse_map(&text).unwrap();
    println!("map: {m}");
    println!("train track: {}", tt::check_train_track(&m, tt::default_power_budget(&m)).ok);

    let t = tt::transition(&m).unwrap();
    println!("matrix {} primitive with exponent {}", t.matrix, t.exponent);
    println!("charpoly {}", t.characteristic);
    println!("lambda = {} ~ {}", t.lambda, t.lambda.to_decimal(9));
    let v: Vec<String> = t.eigenvector.iter().map(|x| x.to_string()).collect();
    println!("eigenvector ({})", v.join(", "));

    let dm = tt::direction_dynamics(&m);
    for o in &dm.orbits {
        let names: Vec<String> = o.iter().map(|&d| m.sym_name(d).to_string()).collect();
        println!("Df orbit {}", names.join(" -> "));
    }
    let (p, fp) = tt::rotationless_power(&m);
    println!("rotationless power {p}: {fp}");
    let g = tt::stable_whitehead_graph(&fp, 6).unwrap();
    print!("{}", g.dot(&fp).render());
}
