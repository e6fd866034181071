//! Systems and maps shipped with the crate.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Bands,
    Map,
    /// Deliberately malformed input used to exercise error paths.
    Invalid,
}

#[derive(Debug, Clone, Copy)]
pub struct Entry {
    pub file: &'static str,
    pub kind: Kind,
    pub text: &'static str,
}

macro_rules! entry {
    ($file:literal, $kind:expr) => {
        Entry {
            file: $file,
            kind: $kind,
            text: include_str!(concat!("../../corpus/", $file)),
        }
    };
}

pub const ENTRIES: &[Entry] = &[
    entry!("e_surf.bands", Kind::Bands),
    entry!("e_trim.bands", Kind::Bands),
    entry!("bk_itm.bands", Kind::Bands),
    entry!("single_band.bands", Kind::Bands),
    entry!("empty.bands", Kind::Bands),
    entry!("tribonacci.map", Kind::Map),
    entry!("fibonacci.map", Kind::Map),
    entry!("illegal_turn.map", Kind::Map),
    entry!("bad_inverse.map", Kind::Invalid),
    entry!("bad_distance.bands", Kind::Invalid),
    entry!("bad_range.bands", Kind::Invalid),
    entry!("mixed_field.bands", Kind::Invalid),
    entry!("lambda_in_rational.bands", Kind::Invalid),
    entry!("syntax_error.bands", Kind::Invalid),
];

pub fn get(file: &str) -> Option<&'static Entry> {
    ENTRIES
        .iter()
        .find(|e| e.file == file || e.file.split('.').next() == Some(file))
}

/// First comment line of the entry.
pub fn summary(e: &Entry) -> &'static str {
    e.text
        .lines()
        .find_map(|l| l.strip_prefix('#'))
        .map(str::trim)
        .unwrap_or("")
}
