//! Command-line driver. [`run_command`] takes an argv, returns the exit
//! code and the full output, and never panics on bad input; the thin binary
//! just forwards to it.
//!
//! Exit codes: 0 success / all checked properties hold; 1 some checked
//! property is false (a verdict, not a malfunction); 2 parse error (of the
//! command line or a workbench file); 3 semantic error; 4 resource cap
//! exceeded.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, Subcommand};

use crate::dsl::{self, WorkbenchFile};
use crate::error::{Error, Result};
use crate::explorer::{
    galois_identity_sweep, run_suite_over_bounds, search_counterexamples, DedupMode,
    InstanceFamily, InstanceKind,
};
use crate::report::{EmitFormat, InstanceBlock, Report, Verdict};
use crate::rickard;
use crate::support::{SupportDatum, SupportKind};

#[derive(Parser)]
#[command(
    name = "ttg",
    about = "workbench for support data on finite spectral spaces",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the support axioms and decidable properties of every support
    /// declared in a workbench file.
    Check { file: PathBuf },
    /// Print the extended support of a declared object (and the preimage
    /// extension when the support is a pullback).
    Extend {
        file: PathBuf,
        #[arg(long)]
        object: String,
        #[arg(long)]
        support: Option<String>,
    },
    /// Print the support of the point-local idempotent at a target point.
    Gamma {
        file: PathBuf,
        #[arg(long)]
        support: String,
        #[arg(long)]
        point: String,
    },
    /// Print the universal map of a tensorial realizing support, and the
    /// comparison map when one exists.
    Universal {
        file: PathBuf,
        #[arg(long)]
        support: String,
    },
    /// Search enumerated instances for a registered predicate.
    Search {
        #[arg(long)]
        predicate: String,
        #[arg(long = "max-base")]
        max_base: usize,
        #[arg(long = "max-target")]
        max_target: Option<usize>,
    },
    /// Run the theorem suite over every enumerated instance up to a size.
    Suite {
        #[arg(long = "max-base")]
        max_base: usize,
    },
    /// Emit a machine-readable report (json) or the spaces and maps (dot).
    Report {
        file: PathBuf,
        #[arg(long)]
        format: String,
    },
}

/// Runs one command line; returns (exit code, output).
pub fn run_command<I, S>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // help/version requests are not errors
            let code = if e.use_stderr() { 2 } else { 0 };
            return (code, e.to_string());
        }
    };
    match dispatch(cli.command) {
        Ok((code, out)) => (code, out),
        Err(e) => (exit_code_of(&e), format!("error: {e}\n")),
    }
}

fn exit_code_of(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } => 2,
        Error::Semantic { .. } | Error::Input(_) | Error::Contract(_) | Error::NotRepresentable(_) => 3,
        Error::CapExceeded(_) => 4,
    }
}

fn dispatch(command: Command) -> Result<(i32, String)> {
    match command {
        Command::Check { file } => check(&load(&file)?),
        Command::Extend {
            file,
            object,
            support,
        } => extend(&load(&file)?, &object, support.as_deref()),
        Command::Gamma {
            file,
            support,
            point,
        } => gamma(&load(&file)?, &support, &point),
        Command::Universal { file, support } => universal(&load(&file)?, &support),
        Command::Search {
            predicate,
            max_base,
            max_target,
        } => search(&predicate, max_base, max_target.unwrap_or(max_base)),
        Command::Suite { max_base } => suite(max_base),
        Command::Report { file, format } => report(&load(&file)?, &format),
    }
}

fn load(path: &PathBuf) -> Result<WorkbenchFile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::input(format!("cannot read {}: {e}", path.display())))?;
    dsl::parse(&text)
}

/// The decidable properties of one support datum as report entries, with
/// the defining/universal maps as computations.
pub fn support_report(datum: &Arc<SupportDatum>) -> Report {
    let mut report = datum.check_axioms();

    let t = datum.is_tensorial();
    report.push_property(
        "tensorial",
        verdict(t.holds),
        t.witness.map(|(w1, w2)| {
            format!(
                "({},{})",
                datum.base().render_set(w1),
                datum.base().render_set(w2)
            )
        }),
    );
    let f = datum.is_faithful();
    report.push_property(
        "faithful",
        verdict(f.holds),
        f.witness.map(|w| datum.base().render_set(w)),
    );
    let r = datum.is_realizing();
    report.push_property(
        "realizing",
        verdict(r.holds),
        r.witness.map(|w| datum.target().render_set(w)),
    );

    if t.holds && r.holds {
        let eta = datum.universal_eta().expect("tensorial realizing");
        report.push_computation("eta", render_assignment(&eta));
        let check = datum.is_comparative().expect("tensorial realizing");
        report.push_property(
            "comparative",
            verdict(check.comparative),
            check
                .witness
                .map(|p| datum.base().point_name(p).to_string()),
        );
        if let Some(rho) = &check.rho {
            report.push_computation("rho", render_assignment(rho));
        }
    } else {
        report.push_property("comparative", Verdict::NotApplicable, None);
    }

    let extension_applicable =
        datum.is_pushforward() || (t.holds && r.holds && f.holds && !datum.is_pushforward());
    if extension_applicable {
        let ext = rickard::is_extension_faithful(datum).expect("applicability checked");
        report.push_property(
            "extension-faithful",
            verdict(ext.faithful),
            ext.witness_point
                .map(|p| datum.base().point_name(p).to_string()),
        );
        if let Some(object) = &ext.witness_object {
            report.push_computation(
                "extension-witness-object-supp",
                datum.base().render_set(object.supp()),
            );
            let tilde = rickard::extended_support(datum, object).expect("same base");
            report.push_computation(
                "extension-witness-object-extension",
                datum.target().render_set(tilde),
            );
        }
    } else {
        report.push_property("extension-faithful", Verdict::NotApplicable, None);
    }

    report
}

fn verdict(b: bool) -> Verdict {
    if b {
        Verdict::True
    } else {
        Verdict::False
    }
}

fn render_assignment(map: &crate::space::SpaceMap) -> String {
    let mut out = String::new();
    for (i, &v) in map.assignment().iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        let _ = write!(
            out,
            "{} -> {}",
            map.domain().point_name(i),
            map.codomain().point_name(v)
        );
    }
    out
}

/// Full report for a file: every support's properties, names prefixed with
/// the support name when the file declares more than one.
pub fn file_report(file: &WorkbenchFile) -> Report {
    let mut report = Report::new();
    report.instance = Some(instance_block(file));
    let prefix_names = file.supports.len() > 1;
    for support in &file.supports {
        let sub = support_report(&support.datum);
        let prefix = if prefix_names {
            format!("{}.", support.name)
        } else {
            String::new()
        };
        report.absorb(&prefix, sub);
    }
    report
}

fn instance_block(file: &WorkbenchFile) -> InstanceBlock {
    InstanceBlock {
        spaces: file.spaces.iter().map(|s| s.render()).collect(),
        maps: file.maps.iter().map(|m| m.render()).collect(),
        supports: file
            .supports
            .iter()
            .map(|s| s.datum.render_decl(&s.name))
            .collect(),
        objects: file
            .objects
            .iter()
            .map(|o| {
                // canonical object line, reusing the renderer
                let single = WorkbenchFile {
                    objects: vec![o.clone()],
                    ..WorkbenchFile::default()
                };
                single.render().trim_end().to_string()
            })
            .collect(),
    }
}

fn check(file: &WorkbenchFile) -> Result<(i32, String)> {
    if file.supports.is_empty() {
        return Err(Error::input("file declares no support"));
    }
    let mut out = String::new();
    let mut any_false = false;
    for support in &file.supports {
        let _ = writeln!(out, "support {}: {}", support.name, support.datum.describe());
        let report = support_report(&support.datum);
        for p in &report.properties {
            let mark = match p.verdict {
                Verdict::True => "\u{2713}",
                Verdict::False => "\u{2717}",
                Verdict::NotApplicable => "n/a",
            };
            any_false |= p.verdict == Verdict::False;
            match &p.witness {
                Some(w) => {
                    let _ = writeln!(out, "  {} {} (witness {})", p.name, mark, w);
                }
                None => {
                    let _ = writeln!(out, "  {} {}", p.name, mark);
                }
            }
        }
        for c in &report.computations {
            let _ = writeln!(out, "  {}: {}", c.name, c.value);
        }
    }
    Ok((i32::from(any_false), out))
}

fn extend(file: &WorkbenchFile, object: &str, support: Option<&str>) -> Result<(i32, String)> {
    let named = file
        .object(object)
        .ok_or_else(|| Error::input(format!("unknown object {object}")))?;
    let datum = pick_support(file, support, named)?;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "object {}: supp {}",
        named.name,
        named.object.base().render_set(named.object.supp())
    );
    let tilde = rickard::extended_support(&datum, &named.object)?;
    let _ = writeln!(out, "sigma-tilde: {}", datum.target().render_set(tilde));
    if matches!(datum.kind(), SupportKind::Pullback(_)) {
        let hat = rickard::eta_pullback_extension(&datum, &named.object)?;
        let _ = writeln!(out, "sigma-hat: {}", datum.target().render_set(hat));
    }
    Ok((0, out))
}

fn pick_support(
    file: &WorkbenchFile,
    requested: Option<&str>,
    object: &dsl::NamedObject,
) -> Result<Arc<SupportDatum>> {
    match requested {
        Some(name) => Ok(Arc::clone(
            &file
                .support(name)
                .ok_or_else(|| Error::input(format!("unknown support {name}")))?
                .datum,
        )),
        None => {
            // unambiguous when exactly one declared support lives over the
            // object's base space
            let candidates: Vec<&dsl::NamedSupport> = file
                .supports
                .iter()
                .filter(|s| s.datum.base() == object.object.base())
                .collect();
            match candidates.as_slice() {
                [single] => Ok(Arc::clone(&single.datum)),
                [] => Err(Error::input(format!(
                    "no support declared over space {}",
                    object.object.base().name()
                ))),
                _ => Err(Error::input(
                    "several supports declared; pass --support NAME",
                )),
            }
        }
    }
}

fn gamma(file: &WorkbenchFile, support: &str, point: &str) -> Result<(i32, String)> {
    let named = file
        .support(support)
        .ok_or_else(|| Error::input(format!("unknown support {support}")))?;
    let x = named.datum.target().point_index(point)?;
    let supp = rickard::gamma_point_support(&named.datum, x)?;
    Ok((0, format!("{}\n", named.datum.base().render_set(supp))))
}

fn universal(file: &WorkbenchFile, support: &str) -> Result<(i32, String)> {
    let named = file
        .support(support)
        .ok_or_else(|| Error::input(format!("unknown support {support}")))?;
    let eta = named.datum.universal_eta()?;
    let mut out = format!("eta: {}\n", render_assignment(&eta));
    let check = named.datum.is_comparative()?;
    match check.rho {
        Some(rho) => {
            let _ = writeln!(out, "rho: {}", render_assignment(&rho));
        }
        None => {
            let _ = writeln!(
                out,
                "not comparative (witness {})",
                named
                    .datum
                    .base()
                    .point_name(check.witness.expect("witness"))
            );
        }
    }
    Ok((0, out))
}

fn search(predicate: &str, max_base: usize, max_target: usize) -> Result<(i32, String)> {
    let family = InstanceFamily::new(InstanceKind::PullbackInjective, max_base, max_target)
        .with_dedup(DedupMode::UpToIso);
    let outcome = search_counterexamples(predicate, &family)?;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "predicate {}: scanned {} instances, {} witness(es) up to isomorphism",
        outcome.predicate,
        outcome.instances_scanned,
        outcome.witnesses.len()
    );
    const SHOWN: usize = 10;
    for w in outcome.witnesses.iter().take(SHOWN) {
        let _ = writeln!(out, "---\n{}\n{}", w.detail, w.instance.render());
    }
    if outcome.witnesses.len() > SHOWN {
        let _ = writeln!(out, "--- and {} more", outcome.witnesses.len() - SHOWN);
    }
    let code = i32::from(outcome.expect_empty && !outcome.witnesses.is_empty());
    if outcome.expect_empty && !outcome.witnesses.is_empty() {
        let _ = writeln!(
            out,
            "HARD FAILURE: witnesses found for a predicate that must be empty"
        );
    }
    Ok((code, out))
}

fn suite(max_base: usize) -> Result<(i32, String)> {
    let summary = run_suite_over_bounds(max_base, max_base)?;
    let galois = galois_identity_sweep(max_base)?;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "suite over {} instances (base and target up to {max_base} points)",
        summary.instances
    );
    for entry in &summary.entries {
        let _ = writeln!(
            out,
            "  {}: pass={} fail={} n/a={}",
            entry.name, entry.pass, entry.fail, entry.not_applicable
        );
        if let Some(first) = &entry.first_failure {
            let _ = writeln!(out, "    first failure: {first}");
        }
    }
    let _ = writeln!(out, "  galois-identity: {galois} violation(s)");
    let violations = summary.violations() + galois;
    let _ = writeln!(out, "theorem violations: {violations}");
    Ok((i32::from(violations > 0), out))
}

fn report(file: &WorkbenchFile, format: &str) -> Result<(i32, String)> {
    let format: EmitFormat = format.parse()?;
    let bytes = crate::report::emit(&file_report(file), file, format);
    Ok((0, String::from_utf8(bytes).expect("emitters produce utf-8")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture_path(name: &str) -> String {
        format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
    }

    #[test]
    fn check_p1_exits_one_with_expected_verdicts() {
        let (code, out) = run_command(["ttg", "check", &fixture_path("p1.ttg")]);
        assert_eq!(code, 1, "{out}");
        assert!(out.contains("tensorial \u{2713}"), "{out}");
        assert!(out.contains("faithful \u{2713}"), "{out}");
        assert!(out.contains("realizing \u{2713}"), "{out}");
        assert!(out.contains("comparative \u{2717} (witness x)"), "{out}");
        assert!(out.contains("extension-faithful \u{2717} (witness x)"), "{out}");
    }

    #[test]
    fn check_p3_exits_zero_and_prints_rho() {
        let (code, out) = run_command(["ttg", "check", &fixture_path("p3.ttg")]);
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("comparative \u{2713}"), "{out}");
        assert!(
            out.contains("rho: a -> bh, b -> bh, c -> dh, d -> dh"),
            "{out}"
        );
    }

    #[test]
    fn unknown_file_is_a_semantic_class_error() {
        let (code, out) = run_command(["ttg", "check", "/nonexistent.ttg"]);
        assert_eq!(code, 3, "{out}");
    }

    #[test]
    fn parse_error_exits_two() {
        let dir = std::env::temp_dir().join("ttg-cli-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("broken.ttg");
        std::fs::write(&path, "space E { points: ; }").unwrap();
        let (code, out) = run_command(["ttg", "check", path.to_str().unwrap()]);
        assert_eq!(code, 2, "{out}");
    }

    #[test]
    fn gamma_prints_point_support() {
        let (code, out) = run_command([
            "ttg",
            "gamma",
            &fixture_path("p1.ttg"),
            "--support",
            "sigma",
            "--point",
            "yh",
        ]);
        assert_eq!(code, 0, "{out}");
        assert_eq!(out, "{y}\n");
    }

    #[test]
    fn extend_prints_both_extensions() {
        let (code, out) = run_command([
            "ttg",
            "extend",
            &fixture_path("p1_objects.ttg"),
            "--object",
            "a",
            "--support",
            "sigma",
        ]);
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("object a: supp {x}"), "{out}");
        assert!(out.contains("sigma-tilde: {}"), "{out}");
        assert!(out.contains("sigma-hat: {}"), "{out}");
    }

    #[test]
    fn universal_prints_eta_and_rho() {
        let (code, out) = run_command([
            "ttg",
            "universal",
            &fixture_path("p3.ttg"),
            "--support",
            "sigma",
        ]);
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("eta: bh -> b, dh -> d"), "{out}");
        assert!(out.contains("rho: a -> bh, b -> bh, c -> dh, d -> dh"), "{out}");
    }

    #[test]
    fn search_cap_exceeded_exits_four() {
        let (code, out) = run_command([
            "ttg",
            "search",
            "--predicate",
            "non-faithful-extension",
            "--max-base",
            "40",
        ]);
        assert_eq!(code, 4, "{out}");
    }

    #[test]
    fn report_rejects_unknown_format() {
        let (code, out) = run_command([
            "ttg",
            "report",
            &fixture_path("p1.ttg"),
            "--format",
            "xml",
        ]);
        assert_eq!(code, 3, "{out}");
    }
}
