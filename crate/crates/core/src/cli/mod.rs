//! Command-line front end: `.tcx` input, subcommand dispatch, text and JSON
//! reports.
//!
//! [`run`] never exits the process; it returns the exit code together with
//! the rendered streams so the binary and the tests share one path.

mod tcx;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::gkm::GkmData;
use crate::gysin::GysinData;
use crate::intlinalg::IntMatrix;
use crate::koszul_tor::{depth_estimate, regular_sequence_check, KoszulComplex, Verdict};
use crate::simplicial::{
    check_connected_kernel, check_local_freeness, Face, LocalFreeness, SubgroupData,
};
use crate::stanley_reisner::{
    annihilator_search, hilbert_coefficient, parse_polynomial, LinearForm,
};

pub use tcx::{parse_problem, Options, ProblemSpec};

#[derive(Debug, Parser)]
#[command(
    name = "srtor",
    version,
    about = "Integral Koszul homology of Stanley-Reisner rings"
)]
struct Cli {
    /// Problem file in `.tcx` format.
    #[arg(long, global = true, value_name = "FILE")]
    input: Option<PathBuf>,
    /// Largest internal degree j examined.
    #[arg(long, global = true, default_value_t = 12, value_name = "D")]
    max_degree: u32,
    /// Report dimensions over Q instead of integral groups.
    #[arg(long, global = true)]
    rational: bool,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Bigraded Tor table and its cohomological view.
    Tor,
    /// Whether Tor_1 vanishes, cross-checked against a direct regular-sequence test.
    CheckBigcm,
    /// Freeness of Z[K] over the subring and the depth estimate.
    CheckFree,
    /// Local freeness of the action: determinants of B on maximal faces.
    CheckLocalFree,
    /// Whether the kernel subgroup is connected.
    CheckConnected,
    /// Restrictions of a polynomial to the fixed points.
    Gkm {
        #[arg(long)]
        element: String,
    },
    /// A torsion element of Z[K] over the subring with one extra form.
    FindTorsion {
        /// Name of a form in the input file, or a linear expression.
        #[arg(long)]
        extra: String,
        /// Maximal face, e.g. "1 2" or "{1,2}".
        #[arg(long)]
        vertex: String,
    },
    /// Annihilators of an element in degrees up to --max-degree.
    Annihilate {
        #[arg(long)]
        element: String,
        /// Forms appended to B, by name or expression.
        #[arg(long)]
        extra: Vec<String>,
    },
    /// The long exact sequence obtained by splitting off one row of B.
    Gysin {
        /// 1-based row of B to split off; defaults to the last.
        #[arg(long)]
        split: Option<usize>,
    },
    /// Hilbert function of Z[K].
    Hilbert,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Tor => "tor",
            Command::CheckBigcm => "check-bigcm",
            Command::CheckFree => "check-free",
            Command::CheckLocalFree => "check-local-free",
            Command::CheckConnected => "check-connected",
            Command::Gkm { .. } => "gkm",
            Command::FindTorsion { .. } => "find-torsion",
            Command::Annihilate { .. } => "annihilate",
            Command::Gysin { .. } => "gysin",
            Command::Hilbert => "hilbert",
        }
    }
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// A computed report. A nonzero `code` marks a failed self-check; the report
/// is still printed.
struct Report {
    text: String,
    json: Value,
    code: i32,
    message: Option<String>,
}

impl Report {
    fn ok(text: String, json: Value) -> Self {
        Report {
            text,
            json,
            code: 0,
            message: None,
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: 1,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    match execute(&cli) {
        Ok(report) => {
            let stdout = if cli.json {
                let doc = json!({
                    "command": cli.command.name(),
                    "input": cli.input.as_ref().map(|p| p.display().to_string()),
                    "max_degree": cli.max_degree,
                    "result": report.json,
                });
                serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
            } else {
                report.text
            };
            Outcome {
                code: report.code,
                stdout,
                stderr: report.message.map(|m| m + "\n").unwrap_or_default(),
            }
        }
        Err(e) => Outcome {
            code: e.exit_code(),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn load(cli: &Cli) -> Result<ProblemSpec> {
    let path = cli
        .input
        .as_ref()
        .ok_or_else(|| Error::input("--input <FILE> is required"))?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::input(format!("cannot read {}: {e}", path.display())))?;
    let mut spec = parse_problem(&text).map_err(|e| match e {
        Error::Parse { .. } => Error::input(format!("{}: {e}", path.display())),
        other => other,
    })?;
    spec.options = Options {
        max_degree: cli.max_degree,
        rational: cli.rational,
        split: match &cli.command {
            Command::Gysin { split } => *split,
            _ => None,
        },
    };
    Ok(spec)
}

fn require_b(spec: &ProblemSpec) -> Result<&SubgroupData> {
    spec.b
        .as_ref()
        .ok_or_else(|| Error::input("this command needs a matrix `B = [...]` in the input"))
}

/// A form given by name or as an expression.
fn resolve_form(spec: &ProblemSpec, text: &str) -> Result<LinearForm> {
    match spec.form(text.trim()) {
        Some(f) => Ok(f.clone()),
        None => LinearForm::parse(text, spec.complex.vertex_count()),
    }
}

fn parse_face(text: &str, m: usize) -> Result<Face> {
    let inner = text.trim().trim_start_matches('{').trim_end_matches('}');
    let vs = inner
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<usize>()
                .map_err(|_| Error::input(format!("bad vertex `{s}` in face `{text}`")))
        })
        .collect::<Result<Vec<_>>>()?;
    Face::from_vertices(m, &vs)
}

fn execute(cli: &Cli) -> Result<Report> {
    let spec = load(cli)?;
    let d = spec.options.max_degree;
    match &cli.command {
        Command::Tor => tor(&spec, d),
        Command::CheckBigcm => check_bigcm(&spec, d),
        Command::CheckFree => check_free(&spec, d),
        Command::CheckLocalFree => check_local_free(&spec),
        Command::CheckConnected => check_connected(&spec),
        Command::Gkm { element } => gkm(&spec, element),
        Command::FindTorsion { extra, vertex } => find_torsion(&spec, extra, vertex),
        Command::Annihilate { element, extra } => annihilate(&spec, element, extra, d),
        Command::Gysin { .. } => gysin(&spec, d),
        Command::Hilbert => hilbert(&spec, d),
    }
}

fn koszul(spec: &ProblemSpec, d: u32) -> Result<KoszulComplex> {
    KoszulComplex::new(&spec.complex, require_b(spec)?, d)
}

fn tor(spec: &ProblemSpec, d: u32) -> Result<Report> {
    let kc = koszul(spec, d)?;
    if spec.options.rational {
        let dims = kc.rational_dimensions()?;
        let mut text = format!("dim_Q Tor_(p,j) for j <= {d}\n");
        let entries: Vec<Value> = dims
            .iter()
            .filter(|(_, &r)| r > 0)
            .map(|(&(p, j), &r)| {
                let _ = writeln!(text, "  p={p} j={j} q={}: {r}", i64::from(j) - p as i64);
                json!({"p": p, "j": j, "q": i64::from(j) - p as i64, "dim": r})
            })
            .collect();
        return Ok(Report::ok(text, json!({ "entries": entries })));
    }
    let table = kc.tor_table()?;
    let mut text = format!("Tor_(p,j) for j <= {d}\n{table}\nby cohomological degree q = j - p\n");
    for (q, es) in table.by_cohomological_degree() {
        let cells: Vec<String> = es
            .iter()
            .map(|e| format!("{} at (p={}, j={})", table.get(e.p, e.j), e.p, e.j))
            .collect();
        let _ = writeln!(text, "  q={q}: {}", cells.join(", "));
    }
    Ok(Report::ok(text, json!({ "entries": table.entries() })))
}

fn verdict_line(name: &str, v: &Verdict) -> String {
    match v {
        Verdict::Fails {
            witness: Some(w), ..
        } => format!("{name}: FAILS: {w}"),
        Verdict::NotApplicable { reason } => format!("{name}: NOT_APPLICABLE ({reason})"),
        v => format!("{name}: {}", v.label()),
    }
}

fn check_bigcm(spec: &ProblemSpec, d: u32) -> Result<Report> {
    let kc = koszul(spec, d)?;
    let table = kc.tor_table()?;
    let verdicts = kc.verdicts(&table)?;
    let regularity = regular_sequence_check(&kc)?;
    let mut text = verdict_line("bigcm", &verdicts.bigcm) + "\n";
    text += &verdict_line("odd_vanishing", &verdicts.odd_vanishing);
    text.push('\n');
    match &regularity.failure {
        None => {
            let _ = writeln!(text, "regular sequence: HOLDS_UP_TO({})", regularity.bound);
        }
        Some(f) => {
            let _ = writeln!(
                text,
                "regular sequence: FAILS: u{} kills the nonzero class of {} (degree {}) modulo the earlier forms",
                f.index, f.element, f.degree
            );
        }
    }
    let mut report = Report::ok(
        text,
        json!({
            "bigcm": verdicts.bigcm,
            "odd_vanishing": verdicts.odd_vanishing,
            "regular_sequence": regularity,
        }),
    );
    if verdicts.bigcm.holds() != regularity.holds() {
        report.code = 2;
        report.message = Some(format!(
            "error: {}",
            Error::internal("Tor_1 verdict and regular-sequence check disagree")
        ));
    }
    Ok(report)
}

fn check_free(spec: &ProblemSpec, d: u32) -> Result<Report> {
    let kc = koszul(spec, d)?;
    let table = kc.tor_table()?;
    let verdicts = kc.verdicts(&table)?;
    let depth = depth_estimate(&table);
    let text = format!(
        "{}\n{}\n{}\n{}\ndepth estimate: {depth}\n",
        verdict_line("free_over_R", &verdicts.free_over_r),
        verdict_line("bigcm", &verdicts.bigcm),
        verdict_line("odd_vanishing", &verdicts.odd_vanishing),
        verdict_line("tor0_torsion_free", &verdicts.tor0_torsion_free),
    );
    Ok(Report::ok(
        text,
        json!({ "verdicts": verdicts, "depth": depth }),
    ))
}

fn check_local_free(spec: &ProblemSpec) -> Result<Report> {
    let report = check_local_freeness(&spec.complex, require_b(spec)?);
    let mut text = String::new();
    match &report.verdict {
        LocalFreeness::Pass { faces } | LocalFreeness::Fail { faces, .. } => {
            let status = if matches!(report.verdict, LocalFreeness::Pass { .. }) {
                "PASS"
            } else {
                "FAIL"
            };
            let _ = writeln!(text, "{status}");
            for fd in faces {
                let _ = writeln!(text, "  det B_{} = {}", fd.face, fd.det);
            }
        }
        LocalFreeness::NotApplicable { reason } => {
            let _ = writeln!(text, "NOT_APPLICABLE ({reason})");
        }
    }
    if let Some(w) = &report.warning {
        let _ = writeln!(text, "warning: {w}");
    }
    Ok(Report::ok(
        text,
        serde_json::to_value(&report).expect("serializable"),
    ))
}

fn check_connected(spec: &ProblemSpec) -> Result<Report> {
    let b = require_b(spec)?;
    let connected = check_connected_kernel(b);
    let factors = crate::intlinalg::invariant_factors(b.matrix());
    let shown: Vec<String> = factors.iter().map(ToString::to_string).collect();
    let text = format!(
        "connected: {connected}\ninvariant factors of B: [{}]\n",
        shown.join(", ")
    );
    Ok(Report::ok(
        text,
        json!({
            "connected": connected,
            "invariant_factors": factors.iter().map(ToString::to_string).collect::<Vec<_>>(),
        }),
    ))
}

fn gkm(spec: &ProblemSpec, element: &str) -> Result<Report> {
    let data = GkmData::new(&spec.complex, require_b(spec)?)?;
    let p = parse_polynomial(element, spec.complex.vertex_count())?;
    let tuple = data.phi(&p);
    let check = data.gkm_check(&tuple)?;
    let mut text = format!("Phi({p}) = {tuple}\n");
    for (v, e) in data.vertices().iter().zip(tuple.texts()) {
        let _ = writeln!(text, "  at {}: {e}", v.face);
    }
    let _ = writeln!(
        text,
        "edge divisibility: {}",
        if check.holds { "holds" } else { "fails" }
    );
    let vertices: Vec<Face> = data.vertices().iter().map(|v| v.face).collect();
    Ok(Report::ok(
        text,
        json!({
            "element": p.to_string(),
            "vertices": vertices,
            "restrictions": tuple.texts(),
            "integral": tuple.is_integral(),
            "edge_check": check,
        }),
    ))
}

fn find_torsion(spec: &ProblemSpec, extra: &str, vertex: &str) -> Result<Report> {
    let data = GkmData::new(&spec.complex, require_b(spec)?)?;
    let extra = resolve_form(spec, extra)?;
    let face = parse_face(vertex, spec.complex.vertex_count())?;
    let t = data.find_torsion(&extra, face)?;
    let text = format!(
        "vertex {}: f = {}, g = {}, g*f = 0 in Z[K]: {}\n",
        t.vertex,
        t.f,
        t.g.to_text("u"),
        t.verified
    );
    let mut report = Report::ok(text, serde_json::to_value(&t).expect("serializable"));
    if !t.verified {
        report.code = 2;
        report.message = Some(format!(
            "error: {}",
            Error::internal("torsion element failed verification")
        ));
    }
    Ok(report)
}

fn annihilate(spec: &ProblemSpec, element: &str, extra: &[String], e: u32) -> Result<Report> {
    let b = require_b(spec)?;
    let m = spec.complex.vertex_count();
    let s = if extra.is_empty() {
        b.clone()
    } else {
        let mut rows = b.matrix().to_rows();
        for x in extra {
            rows.push(resolve_form(spec, x)?.coefficients().to_vec());
        }
        SubgroupData::new(IntMatrix::from_rows(rows)?)?
    };
    let f = parse_polynomial(element, m)?;
    let found = annihilator_search(&spec.complex, &s, &f, e)?;
    let mut text = format!("annihilators of {f} in degrees <= {e}\n");
    if found.is_empty() {
        text += "  none\n";
    }
    for a in &found {
        let _ = writeln!(text, "  degree {}: {}", a.degree, a.text());
    }
    let list: Vec<Value> = found
        .iter()
        .map(|a| json!({"degree": a.degree, "element": a.text()}))
        .collect();
    Ok(Report::ok(
        text,
        json!({ "element": f.to_string(), "annihilators": list }),
    ))
}

fn gysin(spec: &ProblemSpec, d: u32) -> Result<Report> {
    let data = GysinData::new(&spec.complex, require_b(spec)?, spec.options.split, d)?;
    let report = data.build_and_verify_exactness()?;
    let connecting = data.connecting_map_check()?;
    let mut text = format!(
        "splitting off row {} (n = {}), j <= {}\n",
        report.split, report.n, report.bound
    );
    for node in &report.nodes {
        if node.group.is_zero() && node.pass {
            continue;
        }
        let _ = writeln!(
            text,
            "  {}: {}  image {}  kernel {}  {}",
            node.term,
            node.group,
            node.image,
            node.kernel,
            if node.pass { "ok" } else { "NOT EXACT" }
        );
    }
    let _ = writeln!(
        text,
        "chain-level checks: {} ({} failures)",
        report.chain_level.checked,
        report.chain_level.failures.len()
    );
    let disagreements = connecting.iter().filter(|c| !c.agrees).count();
    let _ = writeln!(
        text,
        "connecting map: {} nodes checked, {} nonzero sources, {disagreements} disagreements",
        connecting.len(),
        connecting.iter().filter(|c| c.is_nonzero_node()).count()
    );
    let _ = writeln!(text, "exact: {}", report.exact);
    let ok = report.exact && disagreements == 0;
    let mut out = Report::ok(
        text,
        json!({ "exactness": report, "connecting": connecting }),
    );
    if !ok {
        out.code = 2;
        out.message = Some(format!(
            "error: {}",
            Error::internal("Gysin sequence check failed")
        ));
    }
    Ok(out)
}

fn hilbert(spec: &ProblemSpec, d: u32) -> Result<Report> {
    let k = &spec.complex;
    let coeffs = (0..=d)
        .step_by(2)
        .map(|j| Ok((j, hilbert_coefficient(k, j)?)))
        .collect::<Result<Vec<_>>>()?;
    let mut text = format!("face counts: {:?}\n", k.face_counts());
    for (j, c) in &coeffs {
        let _ = writeln!(text, "  dim Z[K]_{j} = {c}");
    }
    let list: Vec<Value> = coeffs
        .iter()
        .map(|(j, c)| json!({"j": j, "rank": c}))
        .collect();
    Ok(Report::ok(
        text,
        json!({ "face_counts": k.face_counts(), "coefficients": list }),
    ))
}
