//! Command-line front end. Every command returns a [`CommandResult`]; the
//! binary only prints it and exits.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::{self, EntryRun};
use crate::counting::{verify_corollary, verify_main, Verdict, VerificationReport};
use crate::descriptor::MorseBottDescriptor;
use crate::error::{Error, Result};
use crate::flow::{audit_all, boundary_entries, build_complex, FlowAudit, FlowDataset};
use crate::homology::{homology_profile, CellModel, SignCocycle};
use crate::intpoly::IntPolynomial;
use crate::morsify::{
    check_counting_identity, morse_counting_n, morsify, resolve_choices, verify_main_via_morsification, Choices,
    MorsificationReport,
};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// Environment variable capping the number of concurrent verifications.
pub const MAX_PARALLEL_ENV: &str = "MBKIT_MAX_PARALLEL";

#[derive(Debug, Parser)]
#[command(
    name = "mbkit",
    version,
    about = "Exact certificates for Morse–Bott inequalities on manifolds with boundary"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Md,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Certify the main inequality (and optionally the dual one) for descriptor files.
    Verify {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        /// Also certify MB^D - P(M, ∂M) = (1+t) R.
        #[arg(long)]
        corollary: bool,
        /// Also certify through a morsification.
        #[arg(long)]
        via_morsification: bool,
        /// Morse vectors keyed by submanifold name.
        #[arg(long)]
        choices: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "md")]
        format: Format,
    },
    /// Homology of a cell model, optionally twisted by a sign cocycle.
    Homology {
        path: PathBuf,
        #[arg(long)]
        twist: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "md")]
        format: Format,
    },
    /// Critical point counts of a morsified descriptor.
    Morsify {
        path: PathBuf,
        #[arg(long)]
        choices: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "md")]
        format: Format,
    },
    /// Builtin examples.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Audit the Morse complex of a flow dataset.
    Flow {
        path: PathBuf,
        /// Expected Poincaré polynomial as an integer array, e.g. "[1,0,1]".
        #[arg(long)]
        expect: Option<String>,
        /// Per-block dataset for the sign/transport audit.
        #[arg(long)]
        restricted: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "md")]
        format: Format,
    },
}

#[derive(Debug, Subcommand)]
pub enum CatalogAction {
    List,
    Show {
        name: String,
    },
    Run {
        #[arg(long, value_enum, default_value = "md")]
        format: Format,
    },
    Export {
        dir: PathBuf,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandResult {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CommandResult {
    fn ok(exit_code: i32, stdout: String) -> Self {
        Self {
            exit_code,
            stdout,
            stderr: String::new(),
        }
    }

    fn input_error(e: &Error) -> Self {
        Self {
            exit_code: EXIT_INPUT,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        }
    }
}

/// Parse `args` (program name first) and run the command.
pub fn run_from<I, T>(args: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_PASS };
            let text = e.render().to_string();
            if e.use_stderr() {
                CommandResult {
                    exit_code: code,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                CommandResult::ok(code, text)
            }
        }
    }
}

pub fn run(cli: Cli) -> CommandResult {
    let result = match cli.command {
        Command::Verify {
            paths,
            corollary,
            via_morsification,
            choices,
            format,
        } => cmd_verify(&paths, corollary, via_morsification, choices.as_deref(), format),
        Command::Homology { path, twist, format } => cmd_homology(&path, twist.as_deref(), format),
        Command::Morsify { path, choices, format } => cmd_morsify(&path, choices.as_deref(), format),
        Command::Catalog { action } => cmd_catalog(action),
        Command::Flow {
            path,
            expect,
            restricted,
            format,
        } => cmd_flow(&path, expect.as_deref(), restricted.as_deref(), format),
    };
    result.unwrap_or_else(|e| CommandResult::input_error(&e))
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn parse_json<T: serde::de::DeserializeOwned>(text: &str, what: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| Error::Parse {
        context: format!("{what} at `{}`", e.path()),
        message: e.inner().to_string(),
    })
}

fn load_descriptor(path: &Path) -> Result<MorseBottDescriptor> {
    let d = MorseBottDescriptor::from_json(&read(path)?).map_err(|e| Error::Parse {
        context: path.display().to_string(),
        message: e.to_string(),
    })?;
    let violations = d.validate();
    if violations.is_empty() {
        Ok(d)
    } else {
        Err(Error::InvalidDescriptor(violations))
    }
}

fn load_choices(path: Option<&Path>) -> Result<Choices> {
    match path {
        Some(p) => parse_json(&read(p)?, &format!("choices {}", p.display())),
        None => Ok(Choices::new()),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

/// Number of worker threads for `n` independent jobs.
pub fn parallelism(n: usize) -> usize {
    let cap = std::env::var(MAX_PARALLEL_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&c| c > 0)
        .unwrap_or(n);
    cap.min(n).max(1)
}

/// Map `f` over `items` on a bounded pool; results keep input order.
pub fn fan_out<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    match rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism(items.len()))
        .build()
    {
        Ok(pool) => pool.install(|| items.par_iter().map(&f).collect()),
        Err(_) => items.iter().map(f).collect(),
    }
}

#[derive(Debug, Serialize)]
struct VerifyItem {
    input: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    reports: Vec<VerificationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    morsification: Option<MorsificationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

impl VerifyItem {
    fn exit_code(&self) -> i32 {
        if self.error.is_some() {
            EXIT_INPUT
        } else if self.reports.iter().all(|r| r.verdict.is_pass())
            && self.morsification.as_ref().is_none_or(|m| m.verdict.is_pass())
        {
            EXIT_PASS
        } else {
            EXIT_FAIL
        }
    }
}

fn verify_one(path: &Path, corollary: bool, via: bool, choices: &Choices) -> VerifyItem {
    let run = || -> Result<(Vec<VerificationReport>, Option<MorsificationReport>)> {
        let d = load_descriptor(path)?;
        let mut reports = vec![verify_main(&d)?];
        if corollary {
            reports.push(verify_corollary(&d)?);
        }
        let morsification = if via {
            // Choices naming other descriptors' submanifolds are ignored.
            let own: Choices = choices
                .iter()
                .filter(|(k, _)| d.find(k).is_some())
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect();
            Some(verify_main_via_morsification(&d, &own)?)
        } else {
            None
        };
        Ok((reports, morsification))
    };
    let input = path.display().to_string();
    match run() {
        Ok((reports, morsification)) => VerifyItem {
            input,
            reports,
            morsification,
            error: None,
        },
        Err(e) => VerifyItem {
            input,
            reports: vec![],
            morsification: None,
            error: Some(e.to_string()),
        },
    }
}

fn verify_markdown(items: &[VerifyItem]) -> String {
    let mut out = String::from(
        "| input | theorem | lhs | R(t) | exact | nonnegative | verdict | detail |\n|---|---|---|---|---|---|---|---|\n",
    );
    for item in items {
        if let Some(e) = &item.error {
            out.push_str(&format!("| {} | - | - | - | - | - | error | {e} |\n", item.input));
        }
        for r in &item.reports {
            out.push_str(&format!(
                "| {} | {} | {} | {} | {} | {} | {} | {} |\n",
                item.input,
                serde_json::to_value(r.theorem)
                    .ok()
                    .and_then(|v| v.as_str().map(str::to_owned))
                    .unwrap_or_default(),
                r.lhs,
                r.quotient,
                r.exact_division,
                r.nonnegative,
                r.verdict,
                r.failure_detail.as_deref().unwrap_or("")
            ));
        }
        if let Some(m) = &item.morsification {
            out.push_str(&format!(
                "| {} | morsification | {} | R_h = {}, R = {} | {} | {} | {} | {} |\n",
                item.input,
                m.h_report.lhs,
                m.h_report.quotient,
                m.difference,
                m.h_report.exact_division,
                m.difference.is_nonnegative(),
                m.verdict,
                m.failure_detail.as_deref().unwrap_or("")
            ));
        }
    }
    out
}

pub fn cmd_verify(
    paths: &[PathBuf],
    corollary: bool,
    via_morsification: bool,
    choices: Option<&Path>,
    format: Format,
) -> Result<CommandResult> {
    let choices = load_choices(choices)?;
    let items = fan_out(paths, |p| verify_one(p, corollary, via_morsification, &choices));
    let exit_code = items.iter().map(VerifyItem::exit_code).max().unwrap_or(EXIT_PASS);
    let stdout = match format {
        Format::Json => to_json(&items),
        Format::Md => verify_markdown(&items),
    };
    let stderr: String = items
        .iter()
        .filter_map(|i| i.error.as_ref().map(|e| format!("error: {}: {e}\n", i.input)))
        .collect();
    Ok(CommandResult {
        exit_code,
        stdout,
        stderr,
    })
}

pub fn cmd_homology(path: &Path, twist: Option<&Path>, format: Format) -> Result<CommandResult> {
    let model: CellModel = parse_json(&read(path)?, &format!("cell model {}", path.display()))?;
    let twist: Option<SignCocycle> = twist
        .map(|p| -> Result<SignCocycle> { parse_json(&read(p)?, &format!("sign cocycle {}", p.display())) })
        .transpose()?;
    let profile = homology_profile(&model, twist.as_ref())?;
    let stdout = match format {
        Format::Json => to_json(&serde_json::json!({
            "poincare_polynomial": profile.poincare_polynomial(),
            "profile": profile,
        })),
        Format::Md => format!("{profile}\n"),
    };
    Ok(CommandResult::ok(EXIT_PASS, stdout))
}

#[derive(Serialize)]
struct MorsifyOutput {
    descriptor: String,
    morse_descriptor: crate::morsify::MorseDescriptor,
    morse_counting_n: IntPolynomial,
    block_sum: IntPolynomial,
    identity_holds: bool,
}

pub fn cmd_morsify(path: &Path, choices: Option<&Path>, format: Format) -> Result<CommandResult> {
    let d = load_descriptor(path)?;
    let choices = load_choices(choices)?;
    let md = morsify(&d, &choices)?;
    let block_sum: IntPolynomial = resolve_choices(&d, &choices)?
        .iter()
        .filter(|rc| rc.kind != crate::descriptor::SubmanifoldKind::BoundaryD)
        .map(|rc| rc.vector.polynomial().shift(rc.shift))
        .sum();
    let out = MorsifyOutput {
        descriptor: d.name.clone(),
        morse_counting_n: morse_counting_n(&md),
        morse_descriptor: md,
        block_sum,
        identity_holds: check_counting_identity(&d, &choices)?,
    };
    let code = if out.identity_holds { EXIT_PASS } else { EXIT_FAIL };
    let stdout = match format {
        Format::Json => to_json(&out),
        Format::Md => format!(
            "{}\nM^N_t(h) = {}\nsum M_t(f_j) t^shift = {}\nidentity: {}\n",
            out.morse_descriptor.to_table(),
            out.morse_counting_n,
            out.block_sum,
            if out.identity_holds { "holds" } else { "FAILS" }
        ),
    };
    Ok(CommandResult::ok(code, stdout))
}

#[derive(Debug, Serialize)]
struct FlowRun {
    fixture: String,
    expected_to_pass: bool,
    as_expected: bool,
    audit: FlowAudit,
}

#[derive(Debug, Serialize)]
struct CatalogRun {
    entries: Vec<EntryRun>,
    flows: Vec<FlowRun>,
}

fn run_catalog() -> Result<CatalogRun> {
    let entries = catalog::run_all()?;
    let fixtures = catalog::all_flows();
    let flows = fan_out(&fixtures, |f| -> Result<FlowRun> {
        let audit = audit_all(&f.dataset, Some(&f.expected_homology), f.restricted.as_ref())?;
        let defect_ok = match &f.expected_defect {
            Some((src, dst)) => audit
                .d_squared
                .defects
                .first()
                .is_some_and(|d| &d.source == src && &d.target == dst),
            None => true,
        };
        Ok(FlowRun {
            fixture: f.name.clone(),
            expected_to_pass: f.should_pass,
            as_expected: audit.verdict.is_pass() == f.should_pass && defect_ok,
            audit,
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(CatalogRun { entries, flows })
}

pub fn cmd_catalog(action: CatalogAction) -> Result<CommandResult> {
    match action {
        CatalogAction::List => {
            let mut out = String::new();
            for e in catalog::entries() {
                out.push_str(&format!("{}\n", e.descriptor.name));
            }
            Ok(CommandResult::ok(EXIT_PASS, out))
        }
        CatalogAction::Show { name } => Ok(CommandResult::ok(EXIT_PASS, to_json(&catalog::get(&name)?.descriptor))),
        CatalogAction::Export { dir } => {
            let files = catalog::export(&dir)?;
            Ok(CommandResult::ok(
                EXIT_PASS,
                files.iter().map(|f| format!("{f}\n")).collect(),
            ))
        }
        CatalogAction::Run { format } => {
            let run = run_catalog()?;
            let ok = run.entries.iter().all(EntryRun::passed) && run.flows.iter().all(|f| f.as_expected);
            let stdout = match format {
                Format::Json => to_json(&run),
                Format::Md => {
                    let mut out = String::from("| entry | R_main | R_corollary | verdict |\n|---|---|---|---|\n");
                    for e in &run.entries {
                        out.push_str(&format!(
                            "| {} | {} | {} | {} |\n",
                            e.entry,
                            e.main.quotient,
                            e.corollary.as_ref().map_or("-".to_owned(), |c| c.quotient.to_string()),
                            if e.passed() { "pass" } else { "FAIL" }
                        ));
                        for m in &e.mismatches {
                            out.push_str(&format!("|  | {m} | | |\n"));
                        }
                    }
                    out.push_str("\n| flow fixture | audit verdict | as expected |\n|---|---|---|\n");
                    for f in &run.flows {
                        out.push_str(&format!(
                            "| {} | {} | {} |\n",
                            f.fixture,
                            f.audit.verdict,
                            if f.as_expected { "yes" } else { "NO" }
                        ));
                    }
                    out
                }
            };
            Ok(CommandResult::ok(if ok { EXIT_PASS } else { EXIT_FAIL }, stdout))
        }
    }
}

#[derive(Serialize)]
struct FlowOutput {
    generators: Vec<Vec<String>>,
    boundaries: Vec<Vec<Vec<serde_json::Number>>>,
    audit: FlowAudit,
}

pub fn cmd_flow(path: &Path, expect: Option<&str>, restricted: Option<&Path>, format: Format) -> Result<CommandResult> {
    let fd = FlowDataset::from_json(&read(path)?)?;
    let restricted = restricted
        .map(|p| -> Result<FlowDataset> { FlowDataset::from_json(&read(p)?) })
        .transpose()?;
    let expected: Option<IntPolynomial> = expect.map(|e| parse_json(e, "--expect")).transpose()?;
    let cc = build_complex(&fd)?;
    let audit = audit_all(&fd, expected.as_ref(), restricted.as_ref())?;
    let code = if audit.verdict == Verdict::Pass {
        EXIT_PASS
    } else {
        EXIT_FAIL
    };
    let stdout = match format {
        Format::Json => {
            let boundaries = boundary_entries(&cc)
                .into_iter()
                .map(|m| {
                    m.into_iter()
                        .map(|row| row.iter().map(|v| v.to_string().parse().expect("integer")).collect())
                        .collect()
                })
                .collect();
            to_json(&FlowOutput {
                generators: cc.generators.clone(),
                boundaries,
                audit,
            })
        }
        Format::Md => flow_markdown(&audit),
    };
    Ok(CommandResult::ok(code, stdout))
}

fn flow_markdown(a: &FlowAudit) -> String {
    let yes = |b: bool| if b { "pass" } else { "fail" };
    let mut out = String::from("| check | result |\n|---|---|\n");
    let d2 = match a.d_squared.defects.first() {
        None => "pass".to_owned(),
        Some(d) => format!("fail: {d}"),
    };
    out.push_str(&format!("| ∂²=0 | {d2} |\n"));
    if let Some(h) = &a.homology {
        out.push_str(&format!("| homology | {h} |\n"));
    }
    if let Some(m) = a.matches_expected {
        out.push_str(&format!("| matches expected | {} |\n", yes(m)));
    }
    if let Some(s) = &a.sign_transport {
        out.push_str(&format!(
            "| sign/transport ({} lines) | {} |\n",
            s.checked,
            yes(s.holds)
        ));
    }
    if let Some(k) = &a.kernel_rank {
        out.push_str(&format!(
            "| kernel ranks (blocks {:?} vs full {:?}) | {} |\n",
            k.lhs,
            k.rhs,
            yes(k.holds)
        ));
    }
    if let Some(r) = a.reconstruction {
        out.push_str(&format!("| rank reconstruction | {} |\n", yes(r)));
    }
    out.push_str(&format!("| verdict | {} |\n", a.verdict));
    if let Some(d) = &a.failure_detail {
        out.push_str(&format!("\n{d}\n"));
    }
    out
}
