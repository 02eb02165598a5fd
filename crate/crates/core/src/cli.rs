//! The `sq` command line: per-permutation reports, point counts and the
//! batch verification driver.

use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::bsmap::{bs_flag_constraints, bs_vertex_assignment, Target};
use crate::dimvec::{
    apply_simple_update, crossing_pairs, extract_inclusions, free_vertices, rank_vector,
    smooth_vector, ColumnBounds, FreeVertex,
};
use crate::error::Error;
use crate::fforacle::{
    bruhat_interval_point_count, count_bott_samelson_points, count_schubert_points,
    count_subrepresentations, Budget, PointCount,
};
use crate::gridquiver::{hom_dimension, DimensionVector, GridQuiver, GridRep};
use crate::linalg::FieldSpec;
use crate::perm::{Permutation, SimpleTransposition};
use crate::words::{
    compatible_word_with_transcript, geometrically_compatible_word, is_geometrically_compatible,
    Move, ReducedWord,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Largest window for the counting commands and suites.
pub const MAX_COUNT_WINDOW: usize = 4;
/// Largest window for the word and vector suites.
pub const MAX_WORD_WINDOW: usize = 5;

#[derive(Parser, Debug)]
#[command(
    name = "sq",
    version,
    about = "Schubert varieties as quiver Grassmannians"
)]
pub struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Rank vector, free vertices, smoothness and expected dimensions.
    Analyze { perm: String },
    /// A geometrically compatible word and its vertex assignment.
    Decompose { perm: String },
    /// Vertex assignment and Bott-Samelson step table for a word.
    BsMap {
        perm: String,
        /// Letters left to right, e.g. "1 2 1"; defaults to a compatible word.
        #[arg(long)]
        word: Option<String>,
    },
    /// Euler form dimension of a dimension vector.
    Euler {
        perm: String,
        #[arg(long, value_enum)]
        vector: VectorKind,
    },
    /// Point count over F_q.
    Count {
        perm: String,
        #[arg(long, value_enum)]
        vector: VectorKind,
        #[arg(long)]
        q: u32,
        #[arg(long, value_enum, default_value_t = Oracle::Subrep)]
        oracle: Oracle,
    },
    /// Run invariant suites over a whole symmetric group.
    Verify {
        #[arg(long)]
        window: usize,
        #[arg(long, default_value_t = 2)]
        q: u32,
        #[arg(long, value_enum)]
        suite: Option<Suite>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VectorKind {
    R,
    E,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Oracle {
    Subrep,
    Schubert,
    BottSamelson,
    Bruhat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Perm,
    Dimvec,
    Words,
    Bsmap,
    Gridquiver,
    Counts,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Perm => "perm",
            Suite::Dimvec => "dimvec",
            Suite::Words => "words",
            Suite::Bsmap => "bsmap",
            Suite::Gridquiver => "gridquiver",
            Suite::Counts => "counts",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerDims {
    pub rank: i64,
    pub smooth: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub permutation: Permutation,
    pub length: usize,
    pub smooth: bool,
    pub rank_vector: DimensionVector,
    pub smooth_vector: Option<DimensionVector>,
    pub free_vertices: Vec<FreeVertex>,
    pub inclusions: Option<Vec<ColumnBounds>>,
    pub compatible_word: Vec<usize>,
    pub vertex_assignment: Vec<Target>,
    pub euler_dimensions: EulerDims,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecomposeReport {
    pub permutation: Permutation,
    pub word: Vec<usize>,
    pub transcript: Vec<Move>,
    pub letter_counts: Vec<usize>,
    pub vertex_assignment: Vec<Target>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BsMapReport {
    pub permutation: Permutation,
    pub word: Vec<usize>,
    pub vertex_assignment: Vec<Target>,
    pub flags: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerReport {
    pub permutation: Permutation,
    pub vector: VectorKind,
    pub dimension_vector: DimensionVector,
    pub expected_dimension: i64,
    pub length: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountReport {
    pub count: PointCount,
    pub oracle: Oracle,
    pub q: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub suite: String,
    pub check: String,
    pub cases: usize,
    pub passed: bool,
    pub failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub window: usize,
    pub q: u32,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExceeded(_) => EXIT_FAILED,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

fn parse_perm(text: &str) -> Result<Permutation, Failure> {
    let w: Permutation = text.parse()?;
    if w.window() < 3 {
        return Err(Error::WindowTooSmall(w.window()).into());
    }
    Ok(w)
}

pub fn analyze(w: &Permutation) -> crate::Result<Report> {
    let rv = rank_vector(w)?;
    let quiver = GridQuiver::new(w.window() - 1)?;
    let smooth = w.is_smooth();
    let (smooth_vector, inclusions, smooth_dim) = if smooth {
        let e = smooth_vector(w)?;
        let dim = quiver.expected_grassmannian_dim(&e)?;
        (Some(e), Some(extract_inclusions(w)?.columns), Some(dim))
    } else {
        (None, None, None)
    };
    let word = geometrically_compatible_word(w);
    let assignment = bs_vertex_assignment(&word, w)?;
    Ok(Report {
        permutation: w.clone(),
        length: w.length(),
        smooth,
        euler_dimensions: EulerDims {
            rank: quiver.expected_grassmannian_dim(&rv)?,
            smooth: smooth_dim,
        },
        free_vertices: free_vertices(&rv),
        rank_vector: rv,
        smooth_vector,
        inclusions,
        compatible_word: word.letters().to_vec(),
        vertex_assignment: assignment.targets,
    })
}

fn word_text(letters: &[usize]) -> String {
    if letters.is_empty() {
        "(empty)".into()
    } else {
        letters
            .iter()
            .map(|l| format!("s{l}"))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn targets_text(targets: &[Target]) -> String {
    targets
        .iter()
        .map(|t| format!("  k={} s{} -> ({},{})\n", t.k, t.letter, t.row, t.col))
        .collect()
}

fn render_report(r: &Report) -> String {
    let mut s = format!(
        "permutation {}\nlength {}\nsmooth {}\n\nrank vector\n{}\n",
        r.permutation, r.length, r.smooth, r.rank_vector
    );
    if let Some(e) = &r.smooth_vector {
        s += &format!("\nsmooth vector\n{e}\n");
    }
    if let Some(inc) = &r.inclusions {
        s += "\ninclusions\n";
        for c in inc {
            s += &format!("  F{} ⊆ V{} ⊆ F{}\n", c.lower, c.q, c.upper);
        }
    }
    let fv: Vec<String> = r
        .free_vertices
        .iter()
        .map(|f| format!("({},{}):{}", f.row, f.col, f.value))
        .collect();
    s += &format!("\nfree vertices ({}) {}\n", fv.len(), fv.join(" "));
    s += &format!("compatible word {}\n", word_text(&r.compatible_word));
    s += &targets_text(&r.vertex_assignment);
    s += &format!("expected dimension r^w {}", r.euler_dimensions.rank);
    if let Some(d) = r.euler_dimensions.smooth {
        s += &format!(", e^w {d}");
    }
    s.push('\n');
    s
}

fn emit<T: Serialize>(
    out: &mut dyn Write,
    json: bool,
    value: &T,
    text: String,
) -> Result<(), Failure> {
    let rendered = if json {
        serde_json::to_string_pretty(value).expect("reports serialize") + "\n"
    } else {
        text
    };
    out.write_all(rendered.as_bytes()).map_err(|e| Failure {
        code: EXIT_FAILED,
        message: e.to_string(),
    })
}

fn dimension_vector(w: &Permutation, kind: VectorKind) -> crate::Result<DimensionVector> {
    match kind {
        VectorKind::R => rank_vector(w),
        VectorKind::E => smooth_vector(w),
    }
}

/// Runs one count, checking the window limits up front.
pub fn count(
    w: &Permutation,
    kind: VectorKind,
    q: u32,
    oracle: Oracle,
    budget: Budget,
) -> crate::Result<PointCount> {
    let n = w.window() - 1;
    match oracle {
        Oracle::Subrep => {
            let e = dimension_vector(w, kind)?;
            count_subrepresentations(n, q, &e, budget)
        }
        Oracle::Schubert => count_schubert_points(w, q, budget),
        Oracle::BottSamelson => {
            count_bott_samelson_points(&geometrically_compatible_word(w), q, budget)
        }
        Oracle::Bruhat => bruhat_interval_point_count(w, q),
    }
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    let json = cli.json;
    match cli.command {
        Command::Analyze { perm } => {
            let w = parse_perm(&perm)?;
            let report = analyze(&w)?;
            let text = render_report(&report);
            emit(out, json, &report, text)?;
        }
        Command::Decompose { perm } => {
            let w = parse_perm(&perm)?;
            let (word, transcript) = compatible_word_with_transcript(&w);
            let assignment = bs_vertex_assignment(&word, &w)?;
            let report = DecomposeReport {
                permutation: w.clone(),
                word: word.letters().to_vec(),
                transcript,
                letter_counts: word.letter_counts(),
                vertex_assignment: assignment.targets,
            };
            let text = format!(
                "permutation {}\nword {}\nmoves {}\n{}",
                w,
                word_text(&report.word),
                report.transcript.len(),
                targets_text(&report.vertex_assignment)
            );
            emit(out, json, &report, text)?;
        }
        Command::BsMap { perm, word } => {
            let w = parse_perm(&perm)?;
            let word = match word {
                Some(text) => ReducedWord::parse(w.window(), &text)?,
                None => geometrically_compatible_word(&w),
            };
            if word.evaluate() != w {
                return Err(Error::WordDoesNotEvaluateToW(word.to_string()).into());
            }
            let assignment = bs_vertex_assignment(&word, &w)?;
            let table = bs_flag_constraints(&word);
            let flags: Vec<String> = (0..=word.len()).map(|k| table.render_chain(k)).collect();
            let mut text = format!("permutation {}\nword {}\n", w, word_text(word.letters()));
            text += &targets_text(&assignment.targets);
            for (k, f) in flags.iter().enumerate() {
                text += &format!("  V{k}: {f}\n");
            }
            let report = BsMapReport {
                permutation: w,
                word: word.letters().to_vec(),
                vertex_assignment: assignment.targets,
                flags,
            };
            emit(out, json, &report, text)?;
        }
        Command::Euler { perm, vector } => {
            let w = parse_perm(&perm)?;
            let dv = dimension_vector(&w, vector)?;
            let quiver = GridQuiver::new(w.window() - 1)?;
            let report = EulerReport {
                expected_dimension: quiver.expected_grassmannian_dim(&dv)?,
                length: w.length(),
                permutation: w,
                vector,
                dimension_vector: dv,
            };
            let text = format!(
                "{}\nexpected dimension {}\nlength {}\n",
                report.dimension_vector, report.expected_dimension, report.length
            );
            emit(out, json, &report, text)?;
        }
        Command::Count {
            perm,
            vector,
            q,
            oracle,
        } => {
            let w = parse_perm(&perm)?;
            if w.window() > MAX_COUNT_WINDOW {
                return Err(usage(format!(
                    "counting supports windows up to {MAX_COUNT_WINDOW}, got {}",
                    w.window()
                )));
            }
            if !matches!(q, 2 | 3) {
                return Err(usage(format!("q must be 2 or 3, got {q}")));
            }
            let c = count(&w, vector, q, oracle, Budget::from_env())?;
            let report = CountReport {
                count: c,
                oracle,
                q,
            };
            let text = format!("{c}\n");
            emit(out, json, &report, text)?;
        }
        Command::Verify { window, q, suite } => {
            let suites: Vec<Suite> = match suite {
                Some(s) => vec![s],
                None => {
                    let mut all = vec![
                        Suite::Perm,
                        Suite::Dimvec,
                        Suite::Words,
                        Suite::Bsmap,
                        Suite::Gridquiver,
                    ];
                    if window <= MAX_COUNT_WINDOW {
                        all.push(Suite::Counts);
                    }
                    all
                }
            };
            if window < 3 {
                return Err(usage(format!("window must be at least 3, got {window}")));
            }
            for s in &suites {
                let max = if *s == Suite::Counts {
                    MAX_COUNT_WINDOW
                } else {
                    MAX_WORD_WINDOW
                };
                if window > max {
                    return Err(usage(format!(
                        "suite {} supports windows up to {max}, got {window}",
                        s.name()
                    )));
                }
            }
            if suites.contains(&Suite::Counts) && !matches!(q, 2 | 3) {
                return Err(usage(format!("q must be 2 or 3, got {q}")));
            }
            let budget = Budget::from_env();
            let mut checks = Vec::new();
            for s in suites {
                checks.extend(run_suite(s, window, q, budget)?);
            }
            let passed = checks.iter().all(|c| c.passed);
            let report = VerifyReport {
                window,
                q,
                checks,
                passed,
            };
            let mut text = String::new();
            for c in &report.checks {
                text += &format!(
                    "{:<5} {:<11} {:<44} {} cases",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.suite,
                    c.check,
                    c.cases
                );
                if let Some(f) = &c.failure {
                    text += &format!("  ({f})");
                }
                text.push('\n');
            }
            emit(out, json, &report, text)?;
            return Ok(if passed { EXIT_OK } else { EXIT_FAILED });
        }
    }
    Ok(EXIT_OK)
}

/// Collects the first counterexample of a property over `cases`.
fn check<T>(
    suite: Suite,
    name: &str,
    cases: &[T],
    mut property: impl FnMut(&T) -> crate::Result<Option<String>>,
) -> crate::Result<CheckResult> {
    let mut failure = None;
    for case in cases {
        if let Some(msg) = property(case)? {
            failure = Some(msg);
            break;
        }
    }
    Ok(CheckResult {
        suite: suite.name().into(),
        check: name.into(),
        cases: cases.len(),
        passed: failure.is_none(),
        failure,
    })
}

fn fail_if(bad: bool, msg: impl FnOnce() -> String) -> Option<String> {
    bad.then(msg)
}

fn run_suite(
    suite: Suite,
    window: usize,
    q: u32,
    budget: Budget,
) -> crate::Result<Vec<CheckResult>> {
    let all = Permutation::all(window);
    let smooth: Vec<Permutation> = all.iter().filter(|w| w.is_smooth()).cloned().collect();
    let n = window - 1;
    let mut out = Vec::new();
    match suite {
        Suite::Perm => {
            out.push(check(suite, "reduced word has length ℓ(w)", &all, |w| {
                let word = w.some_reduced_word();
                Ok(fail_if(
                    word.evaluate() != *w || word.len() != w.length(),
                    || w.to_string(),
                ))
            })?);
            out.push(check(suite, "s_i w changes length by one", &all, |w| {
                for i in 1..window {
                    let v = w.left_multiply_simple(SimpleTransposition::new(i)?)?;
                    if v.length().abs_diff(w.length()) != 1 {
                        return Ok(Some(format!("{w} at s{i}")));
                    }
                }
                Ok(None)
            })?);
            out.push(check(
                suite,
                "w lies below the longest element",
                &all,
                |w| {
                    Ok(fail_if(
                        !w.bruhat_leq(&Permutation::longest(window))?,
                        || w.to_string(),
                    ))
                },
            )?);
        }
        Suite::Dimvec => {
            out.push(check(
                suite,
                "free-vertex count equals length",
                &all,
                |w| {
                    let fv = free_vertices(&rank_vector(w)?);
                    Ok(fail_if(fv.len() != w.length(), || w.to_string()))
                },
            )?);
            out.push(check(
                suite,
                "simple update matches rank vector",
                &all,
                |w| {
                    let rv = rank_vector(w)?;
                    for i in 1..window {
                        if w.is_left_ascent(i) {
                            let v = w.left_multiply_simple(SimpleTransposition::new(i)?)?;
                            if apply_simple_update(&rv, w, i)? != rank_vector(&v)? {
                                return Ok(Some(format!("{w} at s{i}")));
                            }
                        }
                    }
                    Ok(None)
                },
            )?);
            out.push(check(
                suite,
                "smooth inclusions never cross",
                &smooth,
                |w| {
                    let inc = extract_inclusions(w)?;
                    Ok(fail_if(!crossing_pairs(&inc).is_empty(), || w.to_string()))
                },
            )?);
        }
        Suite::Words => {
            out.push(check(suite, "compatible word exists", &all, |w| {
                let word = geometrically_compatible_word(w);
                Ok(fail_if(!is_geometrically_compatible(&word, w)?, || {
                    w.to_string()
                }))
            })?);
            out.push(check(suite, "transcript replays to the word", &all, |w| {
                let (word, moves) = compatible_word_with_transcript(w);
                let mut current = w.some_reduced_word();
                for mv in moves {
                    current = current.apply(mv)?;
                    if current.evaluate() != *w {
                        return Ok(Some(format!("{w}: evaluation changed")));
                    }
                }
                Ok(fail_if(current != word, || w.to_string()))
            })?);
        }
        Suite::Bsmap => {
            out.push(check(
                suite,
                "assignment is a bijection onto free vertices",
                &all,
                |w| {
                    let word = geometrically_compatible_word(w);
                    let a = bs_vertex_assignment(&word, w)?;
                    let mut hit: Vec<_> =
                        a.targets.iter().map(|t| (t.row, t.col, t.letter)).collect();
                    hit.sort();
                    let free: Vec<_> = free_vertices(&rank_vector(w)?)
                        .iter()
                        .map(|f| (f.row, f.col, f.value))
                        .collect();
                    Ok(fail_if(hit != free, || w.to_string()))
                },
            )?);
        }
        Suite::Gridquiver => {
            let quiver = GridQuiver::new(n)?;
            out.push(check(
                suite,
                "expected dimension of r^w is ℓ(w)",
                &all,
                |w| {
                    let d = quiver.expected_grassmannian_dim(&rank_vector(w)?)?;
                    Ok(fail_if(d != w.length() as i64, || w.to_string()))
                },
            )?);
            out.push(check(
                suite,
                "expected dimension of e^w is ℓ(w)",
                &smooth,
                |w| {
                    let d = quiver.expected_grassmannian_dim(&smooth_vector(w)?)?;
                    Ok(fail_if(d != w.length() as i64, || w.to_string()))
                },
            )?);
            out.push(check(
                suite,
                "dim Hom(M,M) equals the Euler form",
                &[n],
                |&n| {
                    let m = GridRep::canonical(&quiver, FieldSpec::Rationals);
                    let hom = hom_dimension(&m, &m)? as i64;
                    let euler = quiver.euler_form(&quiver.dim_m(), &quiver.dim_m())?;
                    let expected = ((n + 1) * (n + 2) / 2) as i64;
                    Ok(fail_if(hom != euler || hom != expected, || {
                        format!("hom {hom}, euler {euler}")
                    }))
                },
            )?);
        }
        Suite::Counts => {
            let base = q as PointCount + 1;
            out.push(check(
                suite,
                "r^w count equals Bott-Samelson count",
                &all,
                |w| {
                    let expected = base.pow(w.length() as u32);
                    let subrep = count_subrepresentations(n, q, &rank_vector(w)?, budget)?;
                    let bs =
                        count_bott_samelson_points(&geometrically_compatible_word(w), q, budget)?;
                    Ok(fail_if(subrep != expected || bs != expected, || {
                        format!("{w}: {subrep} / {bs} / {expected}")
                    }))
                },
            )?);
            out.push(check(
                suite,
                "e^w count equals Schubert count",
                &smooth,
                |w| {
                    let subrep = count_subrepresentations(n, q, &smooth_vector(w)?, budget)?;
                    let schubert = count_schubert_points(w, q, budget)?;
                    let cells = bruhat_interval_point_count(w, q)?;
                    Ok(fail_if(subrep != schubert || schubert != cells, || {
                        format!("{w}: {subrep} / {schubert} / {cells}")
                    }))
                },
            )?);
        }
    }
    Ok(out)
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match execute(cli, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("sq").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn analyze_identity() {
        let (code, out, _) = run_capture(&["analyze", "12345"]);
        assert_eq!(code, 0);
        assert!(out.contains("length 0"));
        assert!(out.contains("smooth true"));
    }

    #[test]
    fn malformed_input_exits_two() {
        assert_eq!(run_capture(&["analyze", "1224"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(
            run_capture(&["verify", "--window", "9", "--suite", "counts"]).0,
            EXIT_USAGE
        );
        assert_eq!(
            run_capture(&["count", "12345", "--vector", "r", "--q", "2"]).0,
            EXIT_USAGE
        );
    }

    #[test]
    fn count_json() {
        let (code, out, _) = run_capture(&["--json", "count", "321", "--vector", "r", "--q", "2"]);
        assert_eq!(code, 0);
        let report: CountReport = serde_json::from_str(&out).unwrap();
        assert_eq!(
            report,
            CountReport {
                count: 27,
                oracle: Oracle::Subrep,
                q: 2
            }
        );
    }
}
