use clap::{Parser, Subcommand};
use kmw_core::forms::DiagonalForm;
use kmw_core::kmw::{kmw_compare, normalize, parse, theta, MWExpr};
use kmw_core::symbols::Verdict;
use kmw_core::verify::{run_suite, SuiteReport, VerifyConfig, REPORT_SCHEMA, SUITES};
use kmw_core::witt::{
    chain_equiv_search, gw_equal, in_ideal_power, pfister_class, pfister_decompose, ChainBudget, GWElement,
    IFiltClass, WittClass,
};
use kmw_core::{Error, Field, FieldElement};
use serde_json::{json, Value};
use std::io::Write;
use std::process::ExitCode;

/// Exact computations in Milnor-Witt K-theory, Witt rings and quadratic forms
/// over finite fields and their rational function fields.
#[derive(Parser, Debug)]
#[command(name = "kmw", version)]
struct Cli {
    /// Field, e.g. `GF(7)`, `GF(9; x^2+1)`, `GF(2)(t,u)`.
    #[arg(long, global = true, default_value = "GF(3)")]
    field: String,
    /// Seed for random instances.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Instances per identity.
    #[arg(long, global = true, default_value_t = 100)]
    cases: usize,
    /// Degree bound for random function-field elements.
    #[arg(long = "degree-bound", global = true)]
    degree_bound: Option<usize>,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Bind a name to a field element, e.g. `--let a=t+1`.
    #[arg(long = "let", global = true, value_name = "NAME=VALUE")]
    lets: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Canonical value and degree of a homogeneous expression.
    Normalize { expr: String },
    /// Compare two expressions of the same degree.
    Equal { lhs: String, rhs: String },
    /// Image in I^n of an expression, via [a] -> <<a>>, eta -> -1.
    Theta { expr: String },
    /// Witt decomposition of a diagonal form, with Pfister decomposition when
    /// the class lies in I or I^2 (characteristic 2).
    Decompose {
        /// Comma-separated diagonal entries.
        #[arg(long)]
        witt: String,
    },
    /// Chain of two-entry rewrites between diagonal forms of equal GW class.
    Chain { from: String, to: String },
    /// Run verification suites; all applicable suites when none is given.
    Verify {
        #[arg(long)]
        suite: Option<String>,
    },
}

/// Exit codes: 0 success, 1 a check failed or a comparison came out unequal,
/// 2 an error, 3 undecided.
enum Outcome {
    Pass,
    Fail,
    Undecided,
}

type Lets = Vec<(String, FieldElement)>;
type CliResult<T> = Result<T, Box<dyn std::error::Error>>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Ok(Outcome::Undecided) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> CliResult<Outcome> {
    let mut field = Field::parse(&cli.field)?;
    if let Some(bound) = cli.degree_bound {
        field = field.with_degree_bound(bound);
    }
    let lets = bindings(&field, &cli.lets)?;
    match &cli.command {
        Command::Normalize { expr } => cmd_normalize(cli, &field, &lets, expr),
        Command::Equal { lhs, rhs } => cmd_equal(cli, &field, &lets, lhs, rhs),
        Command::Theta { expr } => cmd_theta(cli, &field, &lets, expr),
        Command::Decompose { witt } => cmd_decompose(cli, &field, &lets, witt),
        Command::Chain { from, to } => cmd_chain(cli, &field, &lets, from, to),
        Command::Verify { suite } => cmd_verify(cli, &field, suite.as_deref()),
    }
}

/// Later bindings may refer to earlier ones.
fn bindings(field: &Field, specs: &[String]) -> CliResult<Lets> {
    let mut lets: Lets = Vec::new();
    for spec in specs {
        let (name, value) = spec
            .split_once('=')
            .ok_or_else(|| format!("--let {spec}: expected NAME=VALUE"))?;
        let name = name.trim();
        let valid = name.starts_with(|c: char| c.is_ascii_alphabetic())
            && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !valid {
            return Err(format!("--let {spec}: invalid name `{name}`").into());
        }
        let v = field
            .parse_element_with(value, &lets)
            .map_err(|e| format!("--let {spec}: {e}"))?;
        lets.retain(|(n, _)| n != name);
        lets.push((name.to_string(), v));
    }
    Ok(lets)
}

fn entries(field: &Field, lets: &Lets, text: &str) -> Result<Vec<FieldElement>, Error> {
    let text = text.trim();
    let inner = text.strip_prefix('<').and_then(|t| t.strip_suffix('>')).unwrap_or(text);
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner.split(',').map(|s| field.parse_element_with(s, lets)).collect()
}

fn show(field: &Field, xs: &[FieldElement]) -> String {
    format!("<{}>", xs.iter().map(|x| field.format(x)).collect::<Vec<_>>().join(", "))
}

/// Output errors (a closed pipe) are ignored.
fn emit(cli: &Cli, value: Value, text: String) {
    let mut out = std::io::stdout().lock();
    let _ = if cli.json {
        writeln!(out, "{}", serde_json::to_string_pretty(&value).expect("serializable"))
    } else {
        write!(out, "{text}")
    };
}

fn verdict_outcome(v: Verdict) -> Outcome {
    match v {
        Verdict::Equal => Outcome::Pass,
        Verdict::NotEqual => Outcome::Fail,
        Verdict::Undecided => Outcome::Undecided,
    }
}

fn cmd_normalize(cli: &Cli, field: &Field, lets: &Lets, expr: &str) -> CliResult<Outcome> {
    let e = parse(expr, field, lets)?;
    let c = normalize(&e, field)?;
    let zero = c.is_zero();
    let mut value = c.to_json();
    value["zero"] = json!(zero.to_string());
    let zero_text = match zero {
        Verdict::Equal => "yes",
        Verdict::NotEqual => "no",
        Verdict::Undecided => "undecided",
    };
    emit(
        cli,
        value,
        format!("degree: {}\nvalue: {c}\nzero: {zero_text}\n", c.degree()),
    );
    Ok(Outcome::Pass)
}

fn cmd_equal(cli: &Cli, field: &Field, lets: &Lets, lhs: &str, rhs: &str) -> CliResult<Outcome> {
    let l = parse(lhs, field, lets)?;
    let r = parse(rhs, field, lets)?;
    let c = kmw_compare(&l, &r, field)?;
    emit(
        cli,
        json!({"verdict": c.verdict.to_string(), "degree": c.degree, "report": c.report}),
        format!("{}\ndegree: {}\n{}\n", c.verdict, c.degree, c.report),
    );
    Ok(verdict_outcome(c.verdict))
}

fn cmd_theta(cli: &Cli, field: &Field, lets: &Lets, expr: &str) -> CliResult<Outcome> {
    let e: MWExpr = parse(expr, field, lets)?;
    let t = theta(&e, field)?;
    let certified = t.class.verify();
    let mut value = t.to_json();
    value["certified"] = json!(certified);
    emit(
        cli,
        value,
        format!(
            "I^{} class: {}\nanisotropic: {}\ncertified: {certified}\n{}",
            t.degree(),
            t.witt(),
            show(field, t.witt().anisotropic()),
            if t.complete { "" } else { "note: K^W equality is not decided by this class in odd characteristic\n" }
        ),
    );
    Ok(if certified { Outcome::Pass } else { Outcome::Fail })
}

fn cmd_decompose(cli: &Cli, field: &Field, lets: &Lets, witt: &str) -> CliResult<Outcome> {
    let form = DiagonalForm::new(field, entries(field, lets, witt)?)?;
    let d = form.witt_decompose();
    let class = WittClass::from_form(&form);
    // the anisotropic part must be the class's own representative, and anisotropic
    let mut verified = WittClass::from_form(&d.anisotropic).witt_equal(&class)?
        && d.anisotropic.rank() + d.metabolic_rank == form.rank()
        && (d.anisotropic.rank() < 2 || d.anisotropic.is_isotropic().is_none());

    let mut value = json!({
        "form": form.to_json(),
        "anisotropic": d.anisotropic.to_json(),
        "anisotropic_rank": d.anisotropic.rank(),
        "metabolic_rank": d.metabolic_rank,
    });
    let mut text = format!(
        "form: {}\nanisotropic part: {}\nanisotropic rank: {}\nmetabolic rank: {}\n",
        show(field, form.entries()),
        show(field, d.anisotropic.entries()),
        d.anisotropic.rank(),
        d.metabolic_rank
    );
    if field.is_char2() && !class.is_zero() {
        for n in [2, 1] {
            if !in_ideal_power(&class, n) {
                continue;
            }
            let specs = pfister_decompose(&IFiltClass::new(class.clone(), n)?)?;
            let sum = specs
                .iter()
                .try_fold(WittClass::zero(field), |acc, p| acc.add(&pfister_class(field, p.slots())))?;
            let ok = sum.witt_equal(&class)?;
            verified &= ok;
            let shown: Vec<String> = specs
                .iter()
                .map(|p| format!("<<{}>>", p.slots().iter().map(|x| field.format(x)).collect::<Vec<_>>().join(", ")))
                .collect();
            value["pfister"] = json!({"degree": n, "forms": shown, "verified": ok});
            text.push_str(&format!("Pfister decomposition in I^{n}: {}\n", shown.join(" + ")));
            break;
        }
    }
    value["verified"] = json!(verified);
    text.push_str(&format!("verified: {verified}\n"));
    emit(cli, value, text);
    Ok(if verified { Outcome::Pass } else { Outcome::Fail })
}

fn cmd_chain(cli: &Cli, field: &Field, lets: &Lets, from: &str, to: &str) -> CliResult<Outcome> {
    let t1 = entries(field, lets, from)?;
    let t2 = entries(field, lets, to)?;
    let class = |t: &[FieldElement]| GWElement::from_terms(field, t.iter().map(|u| (u.clone(), 1)));
    let same = t1.len() == t2.len() && gw_equal(&class(&t1)?, &class(&t2)?)?;
    if !same {
        emit(
            cli,
            json!({"gw_equal": false, "path": null}),
            format!("{} and {} have different GW classes\n", show(field, &t1), show(field, &t2)),
        );
        return Ok(Outcome::Fail);
    }
    match chain_equiv_search(field, &t1, &t2, ChainBudget::default())? {
        Some(path) => {
            let ok = path.verify(field)?;
            emit(
                cli,
                json!({"gw_equal": true, "path": path.to_json(field), "verified": ok}),
                format!("{}{} steps, verified: {ok}\n", path.describe(field), path.steps.len()),
            );
            Ok(if ok { Outcome::Pass } else { Outcome::Fail })
        }
        None => {
            emit(
                cli,
                json!({"gw_equal": true, "path": null}),
                "equal GW classes, but no chain found within the search budget\n".to_string(),
            );
            Ok(Outcome::Undecided)
        }
    }
}

fn cmd_verify(cli: &Cli, field: &Field, suite: Option<&str>) -> CliResult<Outcome> {
    let config = VerifyConfig {
        field: field.clone(),
        seed: cli.seed,
        cases: cli.cases,
    };
    let report_outcome = |reports: &[SuiteReport]| {
        if reports.iter().all(SuiteReport::all_passed) { Outcome::Pass } else { Outcome::Fail }
    };
    match suite {
        Some(name) if name != "all" => {
            let r = run_suite(name, &config)?;
            emit(cli, r.to_json(), r.summary());
            Ok(report_outcome(&[r]))
        }
        _ => {
            let mut reports = Vec::new();
            let mut skipped = Vec::new();
            for name in SUITES {
                match run_suite(name, &config) {
                    Ok(r) => reports.push(r),
                    Err(Error::Unsupported(why)) => skipped.push((name.to_string(), why)),
                    Err(e) => return Err(e.into()),
                }
            }
            let mut text: String = reports.iter().map(SuiteReport::summary).collect();
            for (name, why) in &skipped {
                text.push_str(&format!("suite {name} skipped: needs {why}\n"));
            }
            emit(
                cli,
                json!({
                    "schema": REPORT_SCHEMA,
                    "field": field.name(),
                    "seed": cli.seed,
                    "suites": reports.iter().map(SuiteReport::to_json).collect::<Vec<_>>(),
                    "skipped": skipped.iter().map(|(n, _)| n).collect::<Vec<_>>(),
                }),
                text,
            );
            Ok(report_outcome(&reports))
        }
    }
}
