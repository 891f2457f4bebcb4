//! Command line front end. `run` is kept separate from `main` so it can be
//! driven from tests with in-memory output.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::complex::{SimplicialComplex, VertexScalarField};
use crate::correspond::{correspondence, verify_correspondence, CorrespondenceCertificate, CorrespondenceMap};
use crate::error::{Error, Result};
use crate::fixtures::random_injective_field;
use crate::gvf::{check_relative_perfectness, GradientField, RpCertificate};
use crate::homology::FieldChoice;
use crate::io::{field_to_json, read_document, read_field, ComplexDocument, Format};
use crate::plcrit::{classify_all, ClassifyOptions};
use crate::report::{analyze, emit_report, export_colored_mesh, gradient_summary, AnalysisOptions, GradientSummary};
use crate::rpbuild::{build_rp_gradient_traced, BuildOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CERTIFICATE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "plmorse", version, about = "PL critical points and relatively perfect discrete gradient fields")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Coefficient field for homology.
    #[arg(long = "field", id = "coefficients", global = true, default_value = "gf2", value_name = "gf2|rational")]
    coefficients: FieldChoice,
    /// Input format; detected from the extension when omitted.
    #[arg(long, global = true, value_name = "json|off")]
    format: Option<Format>,
    /// Fail unless the input is a combinatorial manifold.
    #[arg(long, global = true)]
    check_manifold: bool,
    /// Replace the input values by a seeded random permutation of 1..n.
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,
    /// Suppress the summary on stderr.
    #[arg(long, short, global = true)]
    quiet: bool,
    /// Values file for OFF input (default: the OFF path with extension .vals).
    #[arg(long, global = true, value_name = "PATH")]
    values: Option<PathBuf>,
    /// Write the main output here instead of stdout.
    #[arg(long, short, global = true, value_name = "PATH")]
    output: Option<PathBuf>,
    /// Include wall-clock timings in reports (makes output non-deterministic).
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify every vertex under all applicable definitions.
    Classify { input: PathBuf },
    /// Build a relatively perfect gradient field and print its pairs.
    Build { input: PathBuf },
    /// Check a gradient field: matching, acyclicity, weak Morse, RP.
    Verify {
        input: PathBuf,
        #[arg(value_name = "FIELD")]
        gradient: PathBuf,
    },
    /// Match PL critical vertices with critical simplices (builds a field if none is given).
    Correspond {
        input: PathBuf,
        #[arg(value_name = "FIELD")]
        gradient: Option<PathBuf>,
    },
    /// Colored mesh (COFF for surfaces with coordinates, JSON otherwise).
    Export {
        input: PathBuf,
        #[arg(value_name = "FIELD")]
        gradient: Option<PathBuf>,
    },
    /// Everything at once as one JSON report.
    Report {
        input: PathBuf,
        #[arg(value_name = "FIELD")]
        gradient: Option<PathBuf>,
    },
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_INPUT
                }
            };
        }
    };
    match execute(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}

struct Input {
    doc: ComplexDocument,
    k: SimplicialComplex,
    f: VertexScalarField,
}

fn load(path: &Path, g: &Global) -> Result<Input> {
    let mut doc = read_document(path, g.format, g.values.as_deref())?.normalized()?;
    if let Some(seed) = g.seed {
        doc.values = vec![0.0; doc.referenced_vertices().len()];
        let (k, _) = doc.build()?;
        let f = random_injective_field(&k, seed);
        doc.values = f.iter().map(|(_, x)| x).collect();
    }
    let (k, f) = doc.build()?;
    if g.check_manifold {
        let d = k.dimension();
        if !(1..=3).contains(&d) {
            return Err(Error::UnsupportedDimension(d));
        }
        let check = crate::complex::is_combinatorial_manifold(&k, d as usize)?;
        if let (false, Some(vertex)) = (check.is_manifold, check.failing_vertex) {
            return Err(Error::NotManifold { vertex, reason: check.diagnostic.unwrap_or_default() });
        }
    }
    Ok(Input { doc, k, f })
}

fn emit(g: &Global, out: &mut dyn Write, text: &str) -> Result<()> {
    match &g.output {
        Some(p) => std::fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn say(g: &Global, err: &mut dyn Write, line: impl AsRef<str>) {
    if !g.quiet {
        let _ = writeln!(err, "{}", line.as_ref());
    }
}

#[derive(Serialize)]
struct VerifyOutput<'a> {
    gradient: &'a GradientSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    rp: Option<&'a RpCertificate>,
}

#[derive(Serialize)]
struct CorrespondOutput<'a> {
    correspondence: &'a CorrespondenceMap,
    check: &'a CorrespondenceCertificate,
}

fn field_or_build(input: &Input, path: Option<&Path>, g: &Global) -> Result<GradientField> {
    match path {
        Some(p) => read_field(p),
        None => {
            Ok(build_rp_gradient_traced(&input.k, &input.f, BuildOptions { require_manifold: g.check_manifold })?.field)
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let g = &cli.global;
    let opts = ClassifyOptions { field: g.coefficients, allow_boundary: !g.check_manifold };
    match &cli.command {
        Command::Classify { input } => {
            let inp = load(input, g)?;
            let report = classify_all(&inp.k, &inp.f, opts)?;
            emit(g, out, &emit_report(&report))?;
            let crit: Vec<String> = report
                .critical()
                .map(|c| format!("{}({:?}, k={})", c.vertex, c.kind, c.total_multiplicity()))
                .collect();
            say(
                g,
                err,
                format!(
                    "{} critical vertices [{}], agreement={}, pl_morse={}, skipped={}",
                    crit.len(),
                    crit.join(", "),
                    report.agreement(),
                    report.is_pl_morse(),
                    report.skipped.len()
                ),
            );
            for d in &report.disagreements {
                say(g, err, format!("disagreement at vertex {}", d.vertex));
            }
            Ok(if report.agreement() { EXIT_OK } else { EXIT_CERTIFICATE })
        }
        Command::Build { input } => {
            let inp = load(input, g)?;
            let built = build_rp_gradient_traced(&inp.k, &inp.f, BuildOptions { require_manifold: g.check_manifold })?;
            emit(g, out, &field_to_json(&built.field))?;
            let cert = check_relative_perfectness(&inp.k, &inp.f, &built.field, g.coefficients)?;
            say(
                g,
                err,
                format!(
                    "{} pairs, critical counts {:?}, rp={}",
                    built.field.len(),
                    built.field.morse_counts(&inp.k),
                    cert.is_rp()
                ),
            );
            Ok(if cert.is_rp() { EXIT_OK } else { EXIT_CERTIFICATE })
        }
        Command::Verify { input, gradient: field } => {
            let inp = load(input, g)?;
            let v = read_field(field)?;
            let summary = gradient_summary(&inp.k, &inp.f, &v, g.coefficients)?;
            let rp = if summary.is_gradient() {
                Some(check_relative_perfectness(&inp.k, &inp.f, &v, g.coefficients)?)
            } else {
                None
            };
            emit(g, out, &emit_report(&VerifyOutput { gradient: &summary, rp: rp.as_ref() }))?;
            for violation in &summary.violations {
                say(g, err, format!("invalid: {violation}"));
            }
            if let Some(path) = &summary.closed_path {
                let steps: Vec<String> = path.iter().map(|(t, h)| format!("{t}->{h}")).collect();
                say(g, err, format!("closed V-path: {}", steps.join(", ")));
            }
            if let Some(rp) = &rp {
                for m in &rp.mismatches {
                    say(g, err, format!("not RP: {m}"));
                }
            }
            let ok = summary.is_gradient() && summary.weak_morse.holds && rp.as_ref().is_some_and(|c| c.is_rp());
            say(
                g,
                err,
                format!(
                    "valid={}, acyclic={}, weak_morse={}, perfect={}, rp={}",
                    summary.valid,
                    summary.acyclic,
                    summary.weak_morse.holds,
                    summary.weak_morse.perfect,
                    rp.as_ref().is_some_and(|c| c.is_rp())
                ),
            );
            Ok(if ok { EXIT_OK } else { EXIT_CERTIFICATE })
        }
        Command::Correspond { input, gradient: field } => {
            let inp = load(input, g)?;
            let v = field_or_build(&inp, field.as_deref(), g)?;
            let summary = gradient_summary(&inp.k, &inp.f, &v, g.coefficients)?;
            if !summary.is_gradient() {
                say(g, err, "the field is not a valid acyclic matching; run verify for details");
                return Ok(EXIT_CERTIFICATE);
            }
            let map = correspondence(&inp.k, &inp.f, &v, g.coefficients)?;
            let classes = classify_all(&inp.k, &inp.f, opts)?;
            let pl_morse = classes.skipped.is_empty() && classes.is_pl_morse();
            let check = verify_correspondence(&map, Some(&inp.f), pl_morse && map.relatively_perfect);
            emit(g, out, &emit_report(&CorrespondOutput { correspondence: &map, check: &check }))?;
            for e in map.critical_entries() {
                let list: Vec<String> = e.simplices.iter().map(ToString::to_string).collect();
                say(
                    g,
                    err,
                    format!("vertex {} index {} (k={}) <-> [{}]", e.vertex, e.index, e.multiplicity, list.join(", ")),
                );
            }
            for violation in &check.violations {
                say(g, err, format!("violation: {violation}"));
            }
            say(g, err, format!("rp={}, bijective={}", map.relatively_perfect, map.bijective));
            let ok = map.relatively_perfect && check.is_clean();
            Ok(if ok { EXIT_OK } else { EXIT_CERTIFICATE })
        }
        Command::Export { input, gradient: field } => {
            let inp = load(input, g)?;
            let v = match field {
                Some(p) => Some(read_field(p)?),
                None => None,
            };
            let classes = classify_all(&inp.k, &inp.f, ClassifyOptions { allow_boundary: true, ..opts })?;
            let text = export_colored_mesh(&inp.k, &inp.f, inp.doc.coordinates.as_deref(), &classes, v.as_ref())?;
            emit(g, out, &text)?;
            Ok(EXIT_OK)
        }
        Command::Report { input, gradient: field } => {
            let inp = load(input, g)?;
            let v = match field {
                Some(p) => Some(read_field(p)?),
                None => None,
            };
            let name = inp.doc.name.clone().or_else(|| input.file_stem().map(|s| s.to_string_lossy().into_owned()));
            let report = analyze(
                &inp.k,
                &inp.f,
                v.as_ref(),
                name,
                AnalysisOptions { field: g.coefficients, check_manifold: g.check_manifold, timings: g.timings },
            )?;
            emit(g, out, &emit_report(&report))?;
            say(g, err, format!("passes={}", report.passes()));
            Ok(if report.passes() { EXIT_OK } else { EXIT_CERTIFICATE })
        }
    }
}
