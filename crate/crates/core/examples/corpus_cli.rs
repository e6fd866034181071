//! Drives the command-line front end in-process over the bundled corpus.

use ripslab::io::corpus::{self, Kind};
use ripslab::io::Report;

fn main() {
    for e in corpus::ENTRIES {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = ripslab::cli::run(["ripslab", "validate", e.file], &mut out, &mut err);
        let kind = match e.kind {
            Kind::Bands => "bands",
            Kind::Map => "map",
            Kind::Invalid => "invalid",
        };
        let msg = if code == 0 {
            let r = Report::parse(&String::from_utf8_lossy(&out));
            match (r.get("volume"), r.get("automorphism")) {
                (Some(v), _) => format!("volume {v}"),
                (None, Some(a)) => format!("automorphism {a}"),
                _ => format!("rank {}", r.get("rank").unwrap_or("?")),
            }
        } else {
            String::from_utf8_lossy(&err).trim().to_string()
        };
        println!("{:<26} {kind:<8} exit {code}  {msg}", e.file);
    }
}
