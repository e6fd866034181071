//! Steps of the Rips machine on a bundled system, with checkpoints.

use ripslab::io::corpus;
use ripslab::io::system::{format_scalar, parse_system};
use ripslab::io::write_checkpoint;
use ripslab::rips::{self, RipsOptions};

fn main() {
    let name = std::env::args().nth(1).unwrap_or_else(|| "e_trim".into());
    let entry = corpus::get(&name).expect("corpus entry");
    let sf = parse_system(entry.text).unwrap();
    let dir = std::env::temp_dir().join(format!("ripslab-{name}"));

    let trace = rips::run(&sf.system, 10, RipsOptions::default());
    for st in &trace.steps {
        let f = st.system.forest();
        println!(
            "K{}: volume {}, {} bands, support {}",
            st.index,
            format_scalar(&st.summary.volume),
            st.summary.band_count,
            st.system.support().describe(f)
        );
        for b in st.system.bands() {
            println!("    {}: {} -> {}", b.name, b.domain().describe(f), b.range().describe(f));
        }
        write_checkpoint(&dir, st.index, &st.system, sf.field.as_deref()).unwrap();
    }
    match trace.halted {
        Some(i) => println!("halted at step {i}"),
        None => println!("no halt within the budget"),
    }
    println!("checkpoints in {}", dir.display());
}
