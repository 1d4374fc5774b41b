//! Command-line front end. Exit codes: 0 success, 1 verification failure,
//! 2 usage or input error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::CoreError;
use crate::pipeline::{
    classify_algebra, load_algebra, parse_vertex, verify_record, ClassificationDocument, ClassificationRecord, SCHEMA,
};
use crate::roots::{AlgebraLabel, RootSystem};
use crate::uq::hopf::check_hopf;
use crate::uq::limit::check_limit;
use crate::uq::presentation::{affine_exponent, kd_expression, Mode, Presentation};

/// Environment variable setting the worker thread count.
pub const THREADS_ENV: &str = "CYBE_FORGE_THREADS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "cybe-forge", version, about = "Quasi-trigonometric solutions of the classical Yang-Baxter equation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify solutions for an algebra, one record per triple.
    Enumerate {
        #[arg(long)]
        algebra: String,
        /// Restrict to one vertex, written `alphaN`.
        #[arg(long)]
        vertex: Option<String>,
        /// Also emit the empty triple at each vertex.
        #[arg(long)]
        include_empty: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Recompute the flags of previously emitted records.
    Verify {
        #[arg(long)]
        input: PathBuf,
    },
    /// Checks on the quantized current algebra.
    Uq {
        #[arg(long)]
        algebra: String,
        #[arg(long, value_enum)]
        check: UqCheck,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum UqCheck {
    Presentation,
    Hopf,
    Limit,
}

fn exit_code(e: &CoreError) -> i32 {
    match e {
        CoreError::Parse(_)
        | CoreError::UnsupportedRootSystem { .. }
        | CoreError::DiagramOnly(_)
        | CoreError::NotSimpleRoot(_) => EXIT_USAGE,
        _ => EXIT_FAILURE,
    }
}

fn thread_count() -> Result<Option<usize>, String> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(s) => s
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|n| *n > 0)
            .map(Some)
            .ok_or_else(|| format!("{THREADS_ENV} must be a positive integer, got {s:?}")),
    }
}

/// Parse `args` (including the program name) and run, writing to the given
/// streams. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    let threads = match thread_count() {
        Ok(t) => t,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_USAGE;
        }
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_FAILURE;
        }
    };
    // Output is buffered so it is emitted in one deterministic block.
    let (result, obuf, ebuf) = pool.install(|| {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        let r = dispatch(cli.command, &mut o, &mut e);
        (r, o, e)
    });
    let _ = out.write_all(&obuf);
    let _ = err.write_all(&ebuf);
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CoreError> {
    match cmd {
        Command::Enumerate {
            algebra,
            vertex,
            include_empty,
            format,
        } => enumerate(&algebra, vertex.as_deref(), include_empty, format, out),
        Command::Verify { input } => verify(&input, out, err),
        Command::Uq { algebra, check, format } => uq(&algebra, check, format, out),
    }
}

fn io(e: std::io::Error) -> CoreError {
    CoreError::Internal(format!("write failed: {e}"))
}

fn enumerate(
    algebra: &str,
    vertex: Option<&str>,
    include_empty: bool,
    format: Format,
    out: &mut dyn Write,
) -> Result<i32, CoreError> {
    let g = load_algebra(algebra)?;
    let node = vertex.map(parse_vertex).transpose()?;
    let records = classify_algebra(&g, node, include_empty)?;
    match format {
        Format::Json => {
            let doc = ClassificationDocument::new(records.clone());
            let text = serde_json::to_string_pretty(&doc).map_err(|e| CoreError::Internal(e.to_string()))?;
            writeln!(out, "{text}").map_err(io)?;
        }
        Format::Text => {
            for r in &records {
                write_record_text(g.root_system(), r, out).map_err(io)?;
            }
            writeln!(out, "{} record(s)", records.len()).map_err(io)?;
        }
    }
    Ok(if records.iter().all(|r| r.flags.all()) { EXIT_OK } else { EXIT_FAILURE })
}

/// Extended diagram as a node row (`x` marks the crossed vertex) followed by
/// its bonds, the number of dashes giving the bond multiplicity.
pub fn diagram_ascii(rs: &RootSystem, crossed: usize) -> String {
    let n = rs.rank();
    let nodes: Vec<String> = (0..=n)
        .map(|i| format!("{}{}", if i == crossed { 'x' } else { 'o' }, i))
        .collect();
    let mut bonds = Vec::new();
    for a in 0..=n {
        for b in a + 1..=n {
            let (ra, rb) = (rs.node_root(a), rs.node_root(b));
            let ab = rs.inner(&ra, &rb);
            let m = 4 * ab * ab / (rs.inner(&ra, &ra) * rs.inner(&rb, &rb));
            if m > 0 {
                bonds.push(format!("{a}{}{b}", "-".repeat(m as usize)));
            }
        }
    }
    format!("{}\n  bonds: {}", nodes.join(" "), bonds.join(" "))
}

fn write_record_text(rs: &RootSystem, r: &ClassificationRecord, out: &mut dyn Write) -> std::io::Result<()> {
    let node = parse_vertex(&r.vertex).unwrap_or(0);
    writeln!(out, "{} at {} ({} triple, class {})", r.algebra, r.vertex, r.triple_type, r.automorphism_class)?;
    writeln!(out, "  {}", diagram_ascii(rs, node))?;
    let map: Vec<String> = r.map.iter().map(|(a, b)| format!("{a}->{b}")).collect();
    writeln!(out, "  map: {{{}}}", map.join(", "))?;
    writeln!(
        out,
        "  dims: L_alpha {}, Delta {}, i' {}; degrees u^{} v^{}; sqrt discriminant {}",
        r.dim_l_alpha, r.dim_delta, r.dim_i_prime, r.deg_u, r.deg_v, r.sqrt_discriminant
    )?;
    let failed: Vec<&str> = r.flags.named().iter().filter(|(_, v)| !v).map(|(k, _)| *k).collect();
    if failed.is_empty() {
        writeln!(out, "  all checks pass")
    } else {
        writeln!(out, "  FAILED: {}", failed.join(", "))
    }
}

fn parse_records(text: &str) -> Result<Vec<ClassificationRecord>, CoreError> {
    if let Ok(doc) = serde_json::from_str::<ClassificationDocument>(text) {
        if doc.schema != SCHEMA {
            return Err(CoreError::Parse(format!("unsupported schema {:?}", doc.schema)));
        }
        return Ok(doc.records);
    }
    serde_json::from_str::<Vec<ClassificationRecord>>(text).map_err(|e| CoreError::Parse(e.to_string()))
}

fn verify(input: &std::path::Path, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CoreError> {
    let text = std::fs::read_to_string(input).map_err(|e| CoreError::Parse(format!("{}: {e}", input.display())))?;
    let records = parse_records(&text)?;
    let mut code = EXIT_OK;
    for (i, r) in records.iter().enumerate() {
        let fresh = match verify_record(r) {
            Ok(f) => f,
            Err(e) if exit_code(&e) == EXIT_USAGE => return Err(e),
            Err(e) => {
                writeln!(err, "record {i}: {e}").map_err(io)?;
                code = EXIT_FAILURE;
                continue;
            }
        };
        let changed = r.flags.diff(&fresh);
        let failing: Vec<&str> = fresh.named().iter().filter(|(_, v)| !v).map(|(k, _)| *k).collect();
        if !changed.is_empty() {
            writeln!(err, "record {i} ({} {}): changed fields: {}", r.algebra, r.vertex, changed.join(", ")).map_err(io)?;
            code = EXIT_FAILURE;
        }
        if !failing.is_empty() {
            writeln!(err, "record {i} ({} {}): failing fields: {}", r.algebra, r.vertex, failing.join(", ")).map_err(io)?;
            code = EXIT_FAILURE;
        }
    }
    writeln!(out, "{} record(s) checked", records.len()).map_err(io)?;
    Ok(code)
}

fn uq(algebra: &str, check: UqCheck, format: Format, out: &mut dyn Write) -> Result<i32, CoreError> {
    let label: AlgebraLabel = algebra.parse()?;
    let rs = RootSystem::from_label(label)?;
    let json = |v: &dyn erased::Json| v.to_json();
    match check {
        UqCheck::Presentation => {
            let p = Presentation::generate(&rs, Mode::Quantum);
            if format == Format::Json {
                writeln!(out, "{}", json(&p.records())).map_err(io)?;
                return Ok(EXIT_OK);
            }
            writeln!(out, "{label}: {} generators, {} relations", p.generators().len(), p.relation_count()).map_err(io)?;
            writeln!(out, "k_(delta-theta) = {}", kd_expression(&rs)).map_err(io)?;
            let affine: Vec<String> = (0..rs.rank()).map(|i| format!("n_{}0 = {}", i + 1, affine_exponent(&rs, i))).collect();
            writeln!(out, "{}", affine.join(", ")).map_err(io)?;
            for r in p.quantum_relations() {
                writeln!(out, "{} {:?}: {}", r.tag, r.indices, r.poly).map_err(io)?;
            }
            Ok(EXIT_OK)
        }
        UqCheck::Hopf => {
            let report = check_hopf(&rs);
            if format == Format::Json {
                writeln!(out, "{}", json(&report)).map_err(io)?;
            } else {
                for g in &report.generators {
                    writeln!(
                        out,
                        "{}: coassociative {}, counit {}, antipode {}",
                        g.generator, g.coassociative, g.counit, g.antipode
                    )
                    .map_err(io)?;
                }
                writeln!(out, "counit vanishes on relations: {}", report.counit_kills_relations).map_err(io)?;
                writeln!(out, "hopf: {}", if report.passed() { "pass" } else { "FAIL" }).map_err(io)?;
            }
            Ok(if report.passed() { EXIT_OK } else { EXIT_FAILURE })
        }
        UqCheck::Limit => {
            let entries = check_limit(&rs);
            let ok = entries.iter().all(|e| e.matches);
            if format == Format::Json {
                writeln!(out, "{}", json(&entries)).map_err(io)?;
            } else {
                for e in &entries {
                    let order = e.order.map_or("none".to_string(), |o| format!("hbar^{o}"));
                    let target = e.classical_tag.as_deref().unwrap_or("-");
                    writeln!(out, "{} {:?} -> {} at {}: {}", e.tag, e.indices, target, order, if e.matches { "ok" } else { "FAIL" })
                        .map_err(io)?;
                }
                writeln!(out, "limit: {}", if ok { "pass" } else { "FAIL" }).map_err(io)?;
            }
            Ok(if ok { EXIT_OK } else { EXIT_FAILURE })
        }
    }
}

mod erased {
    pub trait Json {
        fn to_json(&self) -> String;
    }

    impl<T: serde::Serialize> Json for T {
        fn to_json(&self) -> String {
            serde_json::to_string_pretty(self).unwrap_or_else(|e| format!("{{\"error\": \"{e}\"}}"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("cybe-forge").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn unknown_algebra_is_usage_error() {
        assert_eq!(run_str(&["enumerate", "--algebra", "Q7"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["enumerate", "--algebra", "E6"]).0, EXIT_USAGE);
    }

    #[test]
    fn bad_check_name_is_usage_error() {
        assert_eq!(run_str(&["uq", "--algebra", "A1", "--check", "serre"]).0, EXIT_USAGE);
    }

    #[test]
    fn b2_presentation_prints_kd() {
        let (code, out, _) = run_str(&["uq", "--algebra", "B2", "--check", "presentation"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("k_(delta-theta) = k1^-2 k2^-1"));
    }

    #[test]
    fn text_diagram_marks_vertex() {
        let rs = RootSystem::from_label("B2".parse().unwrap()).unwrap();
        let d = diagram_ascii(&rs, 2);
        assert!(d.starts_with("o0 o1 x2"));
        assert!(d.contains("0--1") && d.contains("1--2") && !d.contains("0--2"), "{d}");
    }
}
