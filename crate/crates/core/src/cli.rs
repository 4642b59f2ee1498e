//! Command-line front end. [`run`] is the whole program, minus the process.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::blackgraph::{load_graph, BlackGraph, GraphError};
use crate::bounds::{
    analyze, family_designated_kappas, Analysis, BoundsError, BoundsReport, Input, Options,
};
use crate::braidlang::{parse_braid, st_length_upper_bound, Family, FamilyKind, ParseError};
use crate::dinv::{brute_force_max, certified_radius, max_kappa_norm_sq, DEntry, DinvError};
use crate::goeritz::{goeritz_form, Rational};
use crate::openbook::{compile_layering, crosscheck_h1, h1_open_book, AbelianGroup, Flip, Mat2};
use crate::spinc::{CharVector, HElement, SpincSpace};

/// Tables with more classes are cut down unless `--full` is given.
pub const ELIDE_ABOVE: usize = 200;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "corrterm", version, about = "Correction terms and complexity bounds for alternating 3-braid closures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// d-invariant of every Spin^c class
    Dinv(Common),
    /// Nonorientable genus bounds and Z2-Thurston norms
    Norms(Common),
    /// Complexity interval
    Complexity(Common),
    /// Layered triangulation of the genus-one open book
    Layer(Common),
    /// Run the brute-force oracle and the H1 cross-check
    Check(Common),
}

#[derive(Args, Debug)]
struct Common {
    /// Braid word, e.g. "1 -2 -2 1 2^-4"
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["family", "graph"])]
    braid: Option<String>,
    /// Family kind (even|odd) followed by its parameters
    #[arg(long, num_args = 2.., value_names = ["KIND", "PARAMS"], allow_negative_numbers = true, conflicts_with = "graph")]
    family: Option<Vec<String>>,
    /// Black graph file
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Machine-readable output
    #[arg(long)]
    json: bool,
    /// Never elide the d-table
    #[arg(long)]
    full: bool,
    /// Largest |k| for conjugation by σ₂^k in the rewriting search
    #[arg(long, default_value_t = 2)]
    kmax: u32,
    /// Maximum number of Spin^c classes
    #[arg(long, default_value_t = crate::dinv::DEFAULT_BUDGET)]
    budget: u128,
}

#[derive(Error, Debug)]
enum CliError {
    #[error("one of --braid, --family or --graph is required")]
    NoInput,
    #[error("unknown family kind `{0}` (expected even or odd)")]
    FamilyKind(String),
    #[error("bad family parameter `{0}`")]
    FamilyParam(String),
    #[error(transparent)]
    Family(#[from] crate::braidlang::FamilyError),
    #[error("cannot parse braid: {0}")]
    Braid(#[from] ParseError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error("layering needs a braid or family input")]
    LayerNeedsBraid,
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Bounds(BoundsError::Dinv(DinvError::BudgetExceeded { .. })) => EXIT_BUDGET,
            _ => EXIT_USAGE,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputEcho {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub braid: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<BlackGraph>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DTable {
    pub total: u64,
    pub elided: bool,
    pub entries: Vec<DEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Designated {
    pub label: String,
    pub kappa: CharVector,
    pub class_id: HElement,
    #[serde(with = "crate::ratio_str")]
    pub norm_sq: Rational,
    #[serde(with = "crate::ratio_str")]
    pub d: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Layering {
    pub st_word: String,
    pub rotation: usize,
    pub conjugation: i64,
    pub flips: Vec<Flip>,
    pub tetrahedron_count: usize,
    pub monodromy: String,
    pub matrix: Mat2,
    pub h1: AbelianGroup,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub classes: u64,
    pub oracle_agree: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h1_open_book: Option<AbelianGroup>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h1_goeritz: Option<AbelianGroup>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h1_agree: Option<bool>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub input: InputEcho,
    pub q: Vec<Vec<i64>>,
    pub det_abs: u64,
    /// Invariant factors of `H₁`, trivial ones dropped.
    pub homology: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_table: Option<DTable>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub designated: Option<Vec<Designated>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<BoundsReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub layering: Option<Layering>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub check: Option<Check>,
}

fn read_input(c: &Common) -> Result<Input, CliError> {
    if let Some(b) = &c.braid {
        return Ok(Input::Braid(parse_braid(b)?));
    }
    if let Some(f) = &c.family {
        let kind = match f[0].as_str() {
            "even" => FamilyKind::Even,
            "odd" => FamilyKind::Odd,
            other => return Err(CliError::FamilyKind(other.to_string())),
        };
        let params = f[1..]
            .iter()
            .map(|p| p.parse::<i64>().map_err(|_| CliError::FamilyParam(p.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(Input::Family(Family::new(kind, &params)?));
    }
    if let Some(path) = &c.graph {
        return Ok(Input::Graph(load_graph(path)?));
    }
    Err(CliError::NoInput)
}

fn echo(input: &Input) -> InputEcho {
    match input {
        Input::Braid(w) => InputEcho { kind: "braid".into(), braid: Some(w.to_string()), family: None, graph: None },
        Input::Family(f) => {
            InputEcho { kind: "family".into(), braid: Some(f.braid().to_string()), family: Some(f.to_string()), graph: None }
        }
        Input::Graph(g) => InputEcho { kind: "graph".into(), braid: None, family: None, graph: Some(g.clone()) },
    }
}

fn designated(a: &Analysis) -> Option<Vec<Designated>> {
    let fam = a.family.as_ref()?;
    Some(
        family_designated_kappas(&a.form, fam)
            .into_iter()
            .map(|(label, k)| {
                let kappa = CharVector::new(&a.form, k).expect("designated vectors are characteristic");
                let class_id = a.table.space.class_of(&kappa).class_id;
                let e = a.table.entry(&class_id);
                Designated { label, kappa, class_id, norm_sq: e.norm_sq, d: e.d }
            })
            .collect(),
    )
}

fn d_section(a: &Analysis, designated: Option<&[Designated]>, full: bool) -> DTable {
    let total = a.table.len();
    if full || total <= ELIDE_ABOVE {
        return DTable { total: total as u64, elided: false, entries: a.table.entries.clone() };
    }
    let (lo, hi) = (a.table.min_d(), a.table.max_d());
    let keep: Vec<&HElement> = designated.unwrap_or(&[]).iter().map(|d| &d.class_id).collect();
    let entries = a
        .table
        .entries
        .iter()
        .filter(|e| e.d == lo || e.d == hi || keep.contains(&&e.class_id))
        .cloned()
        .collect();
    DTable { total: total as u64, elided: true, entries }
}

fn layering(input: &Input, k_max: u32) -> Result<Layering, CliError> {
    let w = match input {
        Input::Braid(w) => w.clone(),
        Input::Family(f) => f.braid(),
        Input::Graph(_) => return Err(CliError::LayerNeedsBraid),
    };
    let rw = st_length_upper_bound(&w, k_max);
    let plan = compile_layering(&rw.witness);
    Ok(Layering {
        st_word: rw.witness.to_string(),
        rotation: rw.rotation,
        conjugation: rw.conjugation,
        tetrahedron_count: plan.tetrahedron_count,
        h1: h1_open_book(&plan.monodromy),
        monodromy: plan.monodromy.to_string(),
        matrix: plan.matrix,
        flips: plan.flips,
    })
}

fn oracle_check(a: &Analysis) -> bool {
    SpincSpace::new(&a.form).enumerate_classes().iter().all(|c| {
        let brute = brute_force_max(&a.form, c, certified_radius(&a.form, c)).expect("certified radius");
        brute == max_kappa_norm_sq(&a.form, c).norm_sq
    })
}

fn build(cmd: &str, c: &Common) -> Result<Report, CliError> {
    let input = read_input(c)?;
    let opts = Options { budget: c.budget, k_max: c.kmax };
    if cmd == "layer" {
        let lay = layering(&input, c.kmax)?;
        let graph = match &input {
            Input::Braid(w) => crate::blackgraph::black_graph_of_braid(w).ok(),
            Input::Family(f) => crate::blackgraph::wheel_graph(&f.blocks()).ok(),
            Input::Graph(_) => None,
        };
        let form = graph.map(|g| goeritz_form(&g));
        return Ok(Report {
            command: cmd.into(),
            input: echo(&input),
            q: form.as_ref().map(|f| f.matrix().to_rows()).unwrap_or_default(),
            det_abs: form.as_ref().map_or(0, |f| f.det_abs() as u64),
            homology: form.as_ref().map(|f| crate::openbook::cokernel(f.matrix()).torsion).unwrap_or_default(),
            d_table: None,
            designated: None,
            bounds: None,
            layering: Some(lay),
            check: None,
        });
    }
    let a = analyze(&input, opts)?;
    let des = designated(&a);
    let mut report = Report {
        command: cmd.into(),
        input: echo(&input),
        q: a.form.matrix().to_rows(),
        det_abs: a.form.det_abs() as u64,
        homology: a.table.space.group().nontrivial_factors(),
        d_table: None,
        designated: None,
        bounds: None,
        layering: None,
        check: None,
    };
    match cmd {
        "dinv" => {
            report.d_table = Some(d_section(&a, des.as_deref(), c.full));
            report.designated = des;
        }
        "norms" => {
            report.designated = des;
            report.bounds = Some(a.report.clone());
        }
        "complexity" => {
            report.bounds = Some(a.report.clone());
            if a.braid.is_some() {
                report.layering = Some(layering(&input, c.kmax)?);
            }
        }
        "check" => {
            let oracle_agree = oracle_check(&a);
            let h1 = match &a.braid {
                Some(w) => Some(crosscheck_h1(w)?),
                None => None,
            };
            let h1_agree = h1.as_ref().map(|h| h.agree);
            report.check = Some(Check {
                classes: a.table.len() as u64,
                oracle_agree,
                passed: oracle_agree && h1_agree.unwrap_or(true),
                h1_open_book: h1.as_ref().map(|h| h.open_book.clone()),
                h1_goeritz: h1.map(|h| h.goeritz),
                h1_agree,
            });
        }
        _ => unreachable!("subcommand names are fixed"),
    }
    Ok(report)
}

fn fmt_r(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn fmt_group(factors: &[i64]) -> String {
    if factors.is_empty() {
        "0".into()
    } else {
        factors.iter().map(|d| format!("Z/{d}")).collect::<Vec<_>>().join(" + ")
    }
}

/// Human-readable rendering.
pub fn render_text(r: &Report) -> String {
    let mut s = String::new();
    let mut line = |l: String| {
        s.push_str(&l);
        s.push('\n');
    };
    match (&r.input.family, &r.input.braid, &r.input.graph) {
        (Some(f), Some(b), _) => line(format!("input: family {f}, braid {b}")),
        (None, Some(b), _) => line(format!("input: braid {b}")),
        (_, _, Some(g)) => line(format!("input: graph with {} vertices, {} edges", g.vertex_count(), g.edge_count())),
        _ => {}
    }
    if !r.q.is_empty() {
        let rows: Vec<String> = r.q.iter().map(|row| format!("{row:?}")).collect();
        line(format!("Q = [{}]", rows.join(", ")));
        line(format!("|det Q| = {}", r.det_abs));
        line(format!("H1 = {}", fmt_group(&r.homology)));
    }
    if let Some(t) = &r.d_table {
        let note = if t.elided { format!(" (showing {} of {})", t.entries.len(), t.total) } else { String::new() };
        line(format!("d-invariants: {} classes{note}", t.total));
        for e in &t.entries {
            line(format!("  {}  d = {}  |κ|² = {}  κ = {}", e.class_id, fmt_r(&e.d), fmt_r(&e.norm_sq), e.maximizer));
        }
    }
    if let Some(ds) = &r.designated {
        line("designated classes:".into());
        for d in ds {
            line(format!("  {} = {}  class {}  |κ|² = {}  d = {}", d.label, d.kappa, d.class_id, fmt_r(&d.norm_sq), fmt_r(&d.d)));
        }
    }
    if let Some(b) = &r.bounds {
        line(format!("2-torsion rank: {}", b.two_rank));
        for g in &b.genus {
            line(format!("  genus bound for {}: h ≥ {} (bound {})", g.element, g.genus_at_least, fmt_r(&g.bound)));
        }
        if let Some(norms) = &b.norms {
            for (i, n) in norms.iter().enumerate() {
                let v = match (n.exact, n.lower, n.upper) {
                    (Some(e), _, _) => format!("= {e}"),
                    (None, Some(l), Some(u)) => format!("∈ [{l}, {u}]"),
                    (None, Some(l), None) => format!("≥ {l}"),
                    (None, None, Some(u)) => format!("≤ {u}"),
                    (None, None, None) => "unknown".into(),
                };
                line(format!("  ‖A{}‖ {v}", i + 1));
            }
        }
        match (b.complexity.lower, b.complexity.upper) {
            (Some(l), Some(u)) => line(format!("C ∈ [{l}, {u}]")),
            (Some(l), None) => line(format!("C ≥ {l}")),
            (None, Some(u)) => line(format!("C ≤ {u}")),
            (None, None) => {}
        }
        for f in &b.flags {
            line(format!("  note: {f}"));
        }
    }
    if let Some(l) = &r.layering {
        line(format!("ST word: {} (rotation {}, conjugation σ₂^{})", l.st_word, l.rotation, l.conjugation));
        let flips: Vec<String> = l.flips.iter().map(|f| f.to_string()).collect();
        line(format!("flips ({}): {}", l.tetrahedron_count, flips.join(" ")));
        line(format!("monodromy: {}", l.monodromy));
        line(format!("matrix: {}", l.matrix));
        let order = l.h1.order().map_or("infinite".to_string(), |o| o.to_string());
        line(format!("H1 of open book: {} (order {order})", l.h1));
    }
    if let Some(c) = &r.check {
        line(format!("oracle: {} on {} classes", if c.oracle_agree { "agree" } else { "DISAGREE" }, c.classes));
        if let (Some(a), Some(o), Some(g)) = (c.h1_agree, &c.h1_open_book, &c.h1_goeritz) {
            line(format!("H1 cross-check: {} (open book {o}, Goeritz {g})", if a { "agree" } else { "DISAGREE" }));
        }
        line(format!("check: {}", if c.passed { "PASS" } else { "FAIL" }));
    }
    s
}

/// Runs the program on `argv` (program name first) and returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    let (name, common) = match &cli.command {
        Command::Dinv(c) => ("dinv", c),
        Command::Norms(c) => ("norms", c),
        Command::Complexity(c) => ("complexity", c),
        Command::Layer(c) => ("layer", c),
        Command::Check(c) => ("check", c),
    };
    let report = match build(name, common) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return e.exit_code();
        }
    };
    let text = if common.json {
        serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
    } else {
        render_text(&report)
    };
    if out.write_all(text.as_bytes()).is_err() {
        return EXIT_USAGE;
    }
    match &report.check {
        Some(c) if !c.passed => EXIT_CHECK_FAILED,
        _ => EXIT_OK,
    }
}
