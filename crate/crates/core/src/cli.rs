//! Command-line front end. The `ripslab` binary only forwards to [`run`].
//!
//! Exit codes: 0 success, 1 usage error, 2 input error, 3 internal
//! invariant violation.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::forest::{Direction, MetricForest, Point};
use crate::io::corpus::{self, Kind};
use crate::io::system::{format_point, format_scalar, parse_point_str, parse_rational};
use crate::io::{self as rio, checkpoint_name, parse_system, write_checkpoint, write_system, Report, SystemFile};
use crate::isometry::{BandSystem, PartialIsometry};
use crate::lamination::{self, format_word};
use crate::rips::{self, PointComponents, RipsOptions, RipsTrace, Verdict};
use crate::scalar::Scalar;
use crate::traintrack::{self as tt, RoseMap};
use crate::whitehead::{self as wh, PatternResult};

#[derive(Parser, Debug)]
#[command(name = "ripslab", version, about = "Rips induction and free group automorphism toolkit")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Parse and validate a `.bands` or `.map` file
    Validate { file: PathBuf },
    /// Rips machine
    Rips {
        #[command(subcommand)]
        cmd: RipsCmd,
    },
    /// Valence strata of a system
    Strata { file: PathBuf },
    /// Admissible words with their domains, one `word<TAB>domain` per line
    Words {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// Finite-depth approximation of the limit set
    Limitset {
        file: PathBuf,
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
    /// Directional Whitehead graphs
    Wh {
        #[command(subcommand)]
        cmd: WhCmd,
    },
    /// Search for the pattern of two leaves with three end classes
    Pattern {
        file: PathBuf,
        #[arg(long, default_value_t = 12)]
        depth: usize,
    },
    /// K3,3 certificate in DOT form
    K33 {
        file: PathBuf,
        #[arg(long, default_value_t = 12)]
        depth: usize,
    },
    /// Train-track analysis of a `.map` file
    Tt {
        #[command(subcommand)]
        cmd: TtCmd,
    },
    /// Bundled example inputs
    Corpus {
        #[command(subcommand)]
        cmd: CorpusCmd,
    },
}

#[derive(clap::Args, Debug)]
struct PointOpt {
    /// Keep isolated points of K' instead of discarding them
    #[arg(long)]
    keep_point_components: bool,
}

impl PointOpt {
    fn options(&self) -> RipsOptions {
        RipsOptions {
            point_components: if self.keep_point_components {
                PointComponents::Keep
            } else {
                PointComponents::Discard
            },
        }
    }
}

#[derive(Subcommand, Debug)]
enum RipsCmd {
    /// One step; prints the summary, optionally writes the new system
    Step {
        file: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        points: PointOpt,
    },
    /// Iterate until halting or the budget
    Run {
        file: PathBuf,
        #[arg(long, default_value_t = 10)]
        max_iter: usize,
        /// Write `step-<i>.bands` for every step into this directory
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Continue from the latest checkpoint in this directory
        #[arg(long)]
        resume: Option<PathBuf>,
        #[command(flatten)]
        points: PointOpt,
    },
    /// Surface type, Levitt evidence or inconclusive
    Classify {
        file: PathBuf,
        #[arg(long, default_value_t = 30)]
        max_iter: usize,
        #[arg(long, default_value = "1/2")]
        diam_ratio: String,
        #[command(flatten)]
        points: PointOpt,
    },
}

#[derive(Subcommand, Debug)]
enum WhCmd {
    /// Edge counts at every candidate point and direction
    Scan {
        file: PathBuf,
        #[arg(long, default_value_t = 12)]
        depth: usize,
    },
    /// The graph at one point and direction
    At {
        file: PathBuf,
        #[arg(long, default_value_t = 12)]
        depth: usize,
        /// Vertex name or `edge@offset`
        #[arg(long)]
        point: String,
        /// Edge name followed by `+` or `-`
        #[arg(long)]
        direction: String,
        #[arg(long)]
        dot: bool,
    },
}

#[derive(Subcommand, Debug)]
enum TtCmd {
    /// Train-track property
    Check {
        file: PathBuf,
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Transition matrix and primitivity
    Matrix { file: PathBuf },
    /// Dilatation and eigenvector
    Pf { file: PathBuf },
    /// Direction dynamics and rotationless power
    Rotationless { file: PathBuf },
    /// Stable Whitehead graph of the rotationless power
    Swg {
        file: PathBuf,
        #[arg(long, default_value_t = 6)]
        budget: usize,
        #[arg(long)]
        dot: bool,
    },
}

#[derive(Subcommand, Debug)]
enum CorpusCmd {
    List,
    Show { name: String },
}

enum Failure {
    Input(String),
    Invariant(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Input(_) => 2,
            Failure::Invariant(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Invariant(m) => m,
        }
    }
}

impl From<rio::InputError> for Failure {
    fn from(e: rio::InputError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<tt::TrainTrackError> for Failure {
    fn from(e: tt::TrainTrackError) -> Self {
        Failure::Input(e.to_string())
    }
}

type Out<'a> = &'a mut dyn Write;

/// Runs one command, writing results to `out` and diagnostics to `err`.
pub fn run<I, T>(args: I, out: Out, err: Out) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    0
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    1
                }
            };
        }
    };
    match dispatch(cli.cmd, out) {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message());
            f.code()
        }
    }
}

/// File contents, falling back to the bundled corpus when the path does
/// not exist but names a corpus entry.
fn load(path: &Path) -> Result<String, Failure> {
    match fs::read_to_string(path) {
        Ok(t) => Ok(t),
        Err(e) => {
            let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("");
            match corpus::get(name) {
                Some(entry) if e.kind() == std::io::ErrorKind::NotFound => Ok(entry.text.to_string()),
                _ => Err(Failure::Input(format!("{}: {e}", path.display()))),
            }
        }
    }
}

fn load_system(path: &Path) -> Result<SystemFile, Failure> {
    Ok(parse_system(&load(path)?)?)
}

fn load_map(path: &Path) -> Result<RoseMap, Failure> {
    Ok(tt::parse_map(&load(path)?)?)
}

fn emit(out: Out, text: impl std::fmt::Display) -> Result<(), Failure> {
    write!(out, "{text}").map_err(|e| Failure::Input(format!("write failed: {e}")))
}

fn pt(p: &Point, f: &MetricForest) -> String {
    format_point(p, f)
}

fn dir_name(d: &Direction, f: &MetricForest) -> String {
    format!("{}:{}{}", pt(&d.base, f), f.edge(d.edge).name, if d.forward { "+" } else { "-" })
}

/// `name: domain -> range` followed by the images of the domain's extremal
/// points.
pub fn band_line(b: &PartialIsometry, f: &MetricForest) -> String {
    let (_, _, images) = b.key(f);
    let ext = b.domain().extremal_points(f);
    let pairs: Vec<String> = ext
        .iter()
        .zip(&images)
        .map(|(p, q)| format!("{} -> {}", pt(p, f), pt(q, f)))
        .collect();
    format!("{}; {}", b.describe(f), pairs.join(", "))
}

fn steps_table(r: &mut Report, trace: &RipsTrace) {
    r.table(
        "steps",
        &["index", "volume", "volume_ge3", "max_domain_diameter", "bands", "support"],
    );
    for st in &trace.steps {
        let m = &st.summary;
        let f = st.system.forest();
        r.row(
            "steps",
            [
                st.index.to_string(),
                format_scalar(&m.volume),
                format_scalar(&m.volume_ge3),
                format_scalar(&m.max_domain_diameter),
                m.band_count.to_string(),
                st.system.support().describe(f),
            ],
        );
    }
    r.table("bands", &["index", "band"]);
    for st in &trace.steps {
        for b in st.system.bands() {
            r.row("bands", [st.index.to_string(), band_line(b, st.system.forest())]);
        }
    }
}

fn points_param(opts: RipsOptions) -> &'static str {
    match opts.point_components {
        PointComponents::Discard => "discard",
        PointComponents::Keep => "keep",
    }
}

fn latest_checkpoint(dir: &Path) -> Result<(usize, PathBuf), Failure> {
    let entries = fs::read_dir(dir).map_err(|e| Failure::Input(format!("{}: {e}", dir.display())))?;
    let mut best: Option<(usize, PathBuf)> = None;
    for e in entries.flatten() {
        let name = e.file_name().to_string_lossy().to_string();
        let idx = name
            .strip_prefix("step-")
            .and_then(|r| r.strip_suffix(".bands"))
            .and_then(|n| n.parse::<usize>().ok());
        if let Some(i) = idx {
            if best.as_ref().is_none_or(|b| i > b.0) {
                best = Some((i, e.path()));
            }
        }
    }
    best.ok_or_else(|| Failure::Input(format!("no checkpoint in {}", dir.display())))
}

fn lineage(trace: &RipsTrace) -> Result<(), Failure> {
    for w in trace.steps.windows(2) {
        rips::check_lineage(&w[0].system, &w[1].system)
            .map_err(|m| Failure::Invariant(format!("step {}: {m}", w[1].index)))?;
        if !w[1].system.support().is_subset(w[0].system.support(), w[0].system.forest()) {
            return Err(Failure::Invariant(format!("step {}: support grew", w[1].index)));
        }
    }
    Ok(())
}

fn dispatch(cmd: Cmd, out: Out) -> Result<(), Failure> {
    match cmd {
        Cmd::Validate { file } => validate(&file, out),
        Cmd::Rips { cmd } => rips_cmd(cmd, out),
        Cmd::Strata { file } => {
            let sf = load_system(&file)?;
            emit(out, strata_report(&sf.system))
        }
        Cmd::Words { file, depth } => {
            let s = load_system(&file)?.system;
            lamination::write_words(&s, depth, out).map_err(|e| Failure::Input(format!("write failed: {e}")))?;
            Ok(())
        }
        Cmd::Limitset { file, depth } => {
            let s = load_system(&file)?.system;
            let ls = lamination::limit_set(&s, depth);
            let mut r = Report::new("limitset");
            r.param("depth", depth)
                .result("volume", format_scalar(&ls.region.volume()))
                .result("region", ls.region.describe(s.forest()));
            emit(out, r)
        }
        Cmd::Wh { cmd } => wh_cmd(cmd, out),
        Cmd::Pattern { file, depth } => {
            let s = load_system(&file)?.system;
            emit(out, pattern_report(&s, depth))
        }
        Cmd::K33 { file, depth } => {
            let s = load_system(&file)?.system;
            match wh::detect_pattern(&s, depth) {
                PatternResult::Found(p) => {
                    let k = wh::k33_certificate(&p).map_err(|e| Failure::Invariant(e.to_string()))?;
                    emit(out, k.dot().render())
                }
                PatternResult::NotFound { depth } => Err(Failure::Input(format!(
                    "no pattern certificate at depth {depth}"
                ))),
            }
        }
        Cmd::Tt { cmd } => tt_cmd(cmd, out),
        Cmd::Corpus { cmd } => match cmd {
            CorpusCmd::List => {
                let mut r = Report::new("corpus list");
                r.table("corpus", &["file", "kind", "summary"]);
                for e in corpus::ENTRIES {
                    let kind = match e.kind {
                        Kind::Bands => "bands",
                        Kind::Map => "map",
                        Kind::Invalid => "invalid",
                    };
                    r.row("corpus", [e.file, kind, corpus::summary(e)]);
                }
                emit(out, r)
            }
            CorpusCmd::Show { name } => {
                let e = corpus::get(&name).ok_or_else(|| Failure::Input(format!("no corpus entry `{name}`")))?;
                emit(out, e.text)
            }
        },
    }
}

fn is_map_file(file: &Path) -> bool {
    file.extension().is_some_and(|e| e == "map")
}

fn validate(file: &Path, out: Out) -> Result<(), Failure> {
    if is_map_file(file) {
        let m = load_map(file)?;
        let mut r = Report::new("validate");
        r.param("file", file.display())
            .result("kind", "map")
            .result("rank", m.rank())
            .result("map", &m)
            .result("atoroidal", if m.atoroidal_asserted { "asserted" } else { "unknown" });
        if m.inverse.is_some() {
            let check = tt::verify_automorphism(&m)?;
            r.result("automorphism", check.ok);
            for l in &check.transcript {
                r.note(l);
            }
        }
        for w in &m.warnings {
            r.note(w);
        }
        return emit(out, r);
    }
    let sf = load_system(file)?;
    let s = &sf.system;
    let mut r = Report::new("validate");
    r.param("file", file.display())
        .result("kind", "bands")
        .result(
            "field",
            match &sf.field {
                Some(f) => format!("algebraic {}", f.minimal_polynomial().display_with("λ")),
                None => "rational".into(),
            },
        )
        .result("bands", s.bands().len())
        .result("volume", format_scalar(&s.volume()));
    if let Some(i) = sf.step {
        r.result("step", i);
    }
    r.table("band", &["band"]);
    for b in s.bands() {
        r.row("band", [band_line(b, s.forest())]);
    }
    emit(out, r)
}

fn rips_cmd(cmd: RipsCmd, out: Out) -> Result<(), Failure> {
    match cmd {
        RipsCmd::Step { file, output, points } => {
            let sf = load_system(&file)?;
            let opts = points.options();
            let next = rips::rips_step(&sf.system, opts);
            let i = sf.step.unwrap_or(0);
            let trace = RipsTrace {
                halted: rips::halts(&sf.system, &next).then_some(i),
                steps: vec![
                    rips::TraceStep {
                        index: i,
                        summary: rips::StepSummary::of(&sf.system),
                        system: sf.system.clone(),
                    },
                    rips::TraceStep {
                        index: i + 1,
                        summary: rips::StepSummary::of(&next),
                        system: next.clone(),
                    },
                ],
            };
            lineage(&trace)?;
            let mut r = Report::new("rips step");
            r.param("point-components", points_param(opts))
                .result("halted", trace.halted.is_some());
            steps_table(&mut r, &trace);
            if let Some(path) = output {
                fs::write(&path, write_system(&next, sf.field.as_deref(), Some(i + 1)))
                    .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
                r.result("written", path.display());
            }
            emit(out, r)
        }
        RipsCmd::Run {
            file,
            max_iter,
            checkpoint,
            resume,
            points,
        } => {
            let opts = points.options();
            let (start, sf) = match &resume {
                Some(dir) => {
                    let (i, path) = latest_checkpoint(dir)?;
                    let sf = rio::read_system(&path)?;
                    (i, sf)
                }
                None => {
                    let sf = load_system(&file)?;
                    (sf.step.unwrap_or(0), sf)
                }
            };
            let budget = max_iter.saturating_sub(start);
            let mut write_err = None;
            let trace = rips::run_with(&sf.system, start, budget, opts, |i, s| {
                if let Some(dir) = &checkpoint {
                    if let Err(e) = write_checkpoint(dir, i, s, sf.field.as_deref()) {
                        write_err.get_or_insert(format!("{}: {e}", dir.join(checkpoint_name(i)).display()));
                    }
                }
            });
            if let Some(e) = write_err {
                return Err(Failure::Input(e));
            }
            lineage(&trace)?;
            let mut r = Report::new("rips run");
            r.param("max-iter", max_iter)
                .param("point-components", points_param(opts));
            if resume.is_some() {
                r.param("resumed-from", start);
            }
            r.result(
                "halted",
                trace.halted.map_or("none".to_string(), |i| i.to_string()),
            )
            .result("last-step", trace.last().index);
            steps_table(&mut r, &trace);
            emit(out, r)
        }
        RipsCmd::Classify {
            file,
            max_iter,
            diam_ratio,
            points,
        } => {
            let ratio = parse_rational(&diam_ratio)
                .map(Scalar::from_rational)
                .ok_or_else(|| Failure::Input(format!("bad --diam-ratio `{diam_ratio}`")))?;
            let s = load_system(&file)?.system;
            let opts = points.options();
            let c = rips::classify(&s, max_iter, &ratio, opts);
            lineage(&c.trace)?;
            let mut r = Report::new("rips classify");
            r.param("max-iter", max_iter)
                .param("diam-ratio", format_scalar(&ratio))
                .param("point-components", points_param(opts))
                .result("verdict", &c.verdict);
            if let Verdict::Inconclusive { reason } = &c.verdict {
                r.result("reason", reason);
            }
            let sums = c.trace.summaries();
            r.result("initial-diameter", format_scalar(&sums[0].max_domain_diameter))
                .result("final-diameter", format_scalar(&sums[sums.len() - 1].max_domain_diameter))
                .result("final-diameter-decimal", sums[sums.len() - 1].max_domain_diameter.to_decimal(6))
                .result("volume-ge3-initial", format_scalar(&sums[0].volume_ge3));
            steps_table(&mut r, &c.trace);
            emit(out, r)
        }
    }
}

pub fn strata_report(s: &BandSystem) -> Report {
    let f = s.forest();
    let v = rips::valence(s);
    let mut r = Report::new("strata");
    r.result("max-valence", v.max_valence());
    for i in 1..=v.max_valence().max(3) {
        r.result(&format!("volume-ge{i}"), format_scalar(&v.at_least(i, f).volume()));
    }
    r.table("segments", &["edge", "lo", "hi", "valence"]);
    for (e, lo, hi, n) in &v.segments {
        r.row("segments", [f.edge(*e).name.clone(), format_scalar(lo), format_scalar(hi), n.to_string()]);
    }
    r.table("points", &["point", "valence"]);
    for (p, n) in &v.points {
        r.row("points", [pt(p, f), n.to_string()]);
    }
    r
}

fn parse_direction(text: &str, p: &Point, f: &MetricForest) -> Result<Direction, Failure> {
    let bad = || Failure::Input(format!("bad direction `{text}`, expected <edge>+ or <edge>-"));
    let (name, forward) = match text.strip_suffix('+') {
        Some(n) => (n, true),
        None => (text.strip_suffix('-').ok_or_else(bad)?, false),
    };
    let edge = f.edge_by_name(name).ok_or_else(bad)?;
    let d = Direction {
        base: p.clone(),
        edge,
        forward,
    };
    if !f.is_direction_at(&d, p) {
        return Err(Failure::Input(
            wh::WhiteheadError::InvalidDirection(dir_name(&d, f)).to_string(),
        ));
    }
    Ok(d)
}

fn wh_cmd(cmd: WhCmd, out: Out) -> Result<(), Failure> {
    match cmd {
        WhCmd::Scan { file, depth } => {
            let s = load_system(&file)?.system;
            let f = s.forest();
            let scan = wh::wh_scan(&s, depth);
            let mut r = Report::new("wh scan");
            r.param("depth", depth)
                .result("max-edges", scan.first().map_or(0, |e| e.edges))
                .table("scan", &["point", "direction", "edges"]);
            for e in &scan {
                r.row("scan", [pt(&e.point, f), dir_name(&e.direction, f), e.edges.to_string()]);
            }
            emit(out, r)
        }
        WhCmd::At {
            file,
            depth,
            point,
            direction,
            dot,
        } => {
            let sf = load_system(&file)?;
            let s = &sf.system;
            let f = s.forest();
            let p = parse_point_str(&point, f, sf.field.as_ref())?;
            let d = parse_direction(&direction, &p, f)?;
            let g = wh::directional_whitehead(s, &p, &d, depth).map_err(|e| Failure::Input(e.to_string()))?;
            if dot {
                return emit(out, g.dot(s).render());
            }
            let mut r = Report::new("wh at");
            r.param("depth", depth)
                .param("point", pt(&p, f))
                .param("direction", dir_name(&d, f))
                .result("edges", g.edge_count())
                .result("vertices", g.vertices.len());
            r.table("vertex", &["index", "half-word"]);
            for (i, v) in g.vertices.iter().enumerate() {
                r.row("vertex", [i.to_string(), format_word(s, v)]);
            }
            r.table("edge", &["from", "to", "leaf", "domain"]);
            for (i, j, w) in &g.edges {
                r.row("edge", [i.to_string(), j.to_string(), w.display(s), w.domain.describe(f)]);
            }
            r.table("flag", &["flag"]);
            for fl in &g.flags {
                r.row("flag", [format!("{fl:?}")]);
            }
            emit(out, r)
        }
    }
}

pub fn pattern_report(s: &BandSystem, depth: usize) -> Report {
    let f = s.forest();
    let mut r = Report::new("pattern");
    r.param("depth", depth);
    match wh::detect_pattern(s, depth) {
        PatternResult::NotFound { depth } => {
            r.result("pattern", format!("NotFound({depth})"));
        }
        PatternResult::Found(p) => {
            r.result("pattern", "found")
                .result("a", pt(&p.point, f))
                .result("direction", dir_name(&p.direction, f))
                .result("leaf1", p.leaf1.display(s))
                .result("leaf2", p.leaf2.display(s))
                .result("b", pt(&p.b, f))
                .result("leaf-b", p.leaf_b.display(s))
                .result("c", pt(&p.c, f))
                .result("leaf-c", p.leaf_c.display(s))
                .result("end-classes", p.end_classes.join(" "));
        }
    }
    r
}

fn tt_cmd(cmd: TtCmd, out: Out) -> Result<(), Failure> {
    match cmd {
        TtCmd::Check { file, budget } => {
            let m = load_map(&file)?;
            let budget = budget.unwrap_or_else(|| tt::default_power_budget(&m));
            let c = tt::check_train_track(&m, budget);
            let mut r = Report::new("tt check");
            r.param("budget", budget).result("map", &m).result("train-track", c.ok);
            match c.witness {
                Some(tt::TrainTrackWitness::Unreduced { generator }) => {
                    r.result("witness", format!("image of {} is not reduced", m.names[generator]));
                }
                Some(tt::TrainTrackWitness::IllegalTurn {
                    turn,
                    iteration,
                    generator,
                    steps,
                }) => {
                    r.result(
                        "witness",
                        format!(
                            "turn {} in f^{}({}) degenerates after {} Df steps",
                            m.turn_name(turn),
                            iteration,
                            m.names[generator],
                            steps
                        ),
                    );
                }
                None => {}
            }
            emit(out, r)
        }
        TtCmd::Matrix { file } => {
            let m = load_map(&file)?;
            let mat = tt::transition_matrix(&m);
            let mut r = Report::new("tt matrix");
            r.result("map", &m).result("matrix", &mat);
            match tt::primitivity(&mat) {
                Ok(k) => r.result("primitive", true).result("exponent", k),
                Err(w) => r.result("primitive", false).result("witness", w),
            };
            emit(out, r)
        }
        TtCmd::Pf { file } => {
            let m = load_map(&file)?;
            let t = tt::transition(&m)?;
            if !t.residual().iter().all(Scalar::is_zero) {
                return Err(Failure::Invariant("eigenvector residual is not zero".into()));
            }
            let (lo, hi) = t.field.isolating_interval();
            let mut r = Report::new("tt pf");
            r.result("map", &m)
                .result("matrix", &t.matrix)
                .result("exponent", t.exponent)
                .result("characteristic-polynomial", &t.characteristic)
                .result("minimal-polynomial", t.field.minimal_polynomial())
                .result("root-in", format!("{} {}", crate::scalar::poly::fmt_rational(lo), crate::scalar::poly::fmt_rational(hi)))
                .result("lambda", t.lambda.to_decimal(6))
                .result(
                    "eigenvector",
                    t.eigenvector.iter().map(format_scalar).collect::<Vec<_>>().join(" "),
                )
                .result("residual", "0");
            emit(out, r)
        }
        TtCmd::Rotationless { file } => {
            let m = load_map(&file)?;
            let dm = tt::direction_dynamics(&m);
            let (p, fp) = tt::rotationless_power(&m);
            let recheck = tt::is_rotationless(&fp);
            if !recheck {
                return Err(Failure::Invariant("rotationless power fails the check".into()));
            }
            let mut r = Report::new("tt rotationless");
            r.result("map", &m)
                .result("rotationless", dm.orbits.iter().all(|o| o.len() == 1))
                .result("power", p)
                .result("power-map", &fp)
                .result("power-rotationless", recheck)
                .result(
                    "fixed",
                    dm.fixed.iter().map(|&d| m.sym_name(d).to_string()).collect::<Vec<_>>().join(" "),
                );
            r.table("df", &["direction", "image"]);
            for (d, e) in &dm.table {
                r.row("df", [m.sym_name(*d), m.sym_name(*e)]);
            }
            r.table("orbit", &["period", "directions"]);
            for o in &dm.orbits {
                r.row("orbit", [o.len().to_string(), o.iter().map(|&d| m.sym_name(d).to_string()).collect::<Vec<_>>().join(" ")]);
            }
            emit(out, r)
        }
        TtCmd::Swg { file, budget, dot } => {
            let m = load_map(&file)?;
            let (p, fp) = tt::rotationless_power(&m);
            let g = tt::stable_whitehead_graph(&fp, budget)?;
            if dot {
                return emit(out, g.dot(&fp).render());
            }
            let mut r = Report::new("tt swg");
            r.param("budget", budget)
                .result("power", p)
                .result("vertices", g.vertices.iter().map(|&d| fp.sym_name(d).to_string()).collect::<Vec<_>>().join(" "))
                .result("edges", g.edges.len());
            r.table("edge", &["from", "to"]);
            for &(a, b) in &g.edges {
                r.row("edge", [fp.sym_name(a), fp.sym_name(b)]);
            }
            emit(out, r)
        }
    }
}
