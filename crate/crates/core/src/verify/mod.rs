//! Randomized verification suites: each suite checks a family of identities
//! on seeded random instances and reports per-identity pass counts.

mod suites;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::kmw::{kmw_equal, kw_equal, parse};
use crate::symbols::Verdict;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

pub const REPORT_SCHEMA: &str = "kmw-verify/1";

/// Suite names accepted by [`run_suite`].
pub const SUITES: &[&str] = &[
    "relations",
    "lemma1",
    "lemma2",
    "puissances",
    "gw",
    "prop_iso",
    "kw_char2",
    "theta",
    "kato",
    "vanishing",
    "cartesian",
    "localize",
];

/// Field (with its degree bound for random elements), seed and case count.
#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub field: Field,
    pub seed: u64,
    pub cases: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub case: usize,
    pub inputs: Vec<String>,
    pub expected: String,
    pub got: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityReport {
    pub identity: String,
    pub cases: usize,
    pub passed: usize,
    pub failures: Vec<Failure>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub field: String,
    pub suite: String,
    pub seed: u64,
    pub identities: Vec<IdentityReport>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.identities.iter().all(|r| r.passed == r.cases)
    }

    pub fn cases(&self) -> usize {
        self.identities.iter().map(|r| r.cases).sum()
    }

    pub fn passed(&self) -> usize {
        self.identities.iter().map(|r| r.passed).sum()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema": REPORT_SCHEMA,
            "field": self.field,
            "suite": self.suite,
            "seed": self.seed,
            "cases": self.cases(),
            "passed": self.passed(),
            "identities": self.identities.iter().map(|r| json!({
                "identity": r.identity,
                "cases": r.cases,
                "passed": r.passed,
                "failures": r.failures.iter().map(|f| json!({
                    "case": f.case,
                    "inputs": f.inputs,
                    "expected": f.expected,
                    "got": f.got,
                })).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }

    /// One line per identity.
    pub fn summary(&self) -> String {
        let mut out = format!("suite {} over {} (seed {})\n", self.suite, self.field, self.seed);
        for r in &self.identities {
            let mark = if r.passed == r.cases { "ok  " } else { "FAIL" };
            out.push_str(&format!("  {mark} {:<48} {}/{}\n", r.identity, r.passed, r.cases));
            for f in r.failures.iter().take(3) {
                out.push_str(&format!(
                    "       case {}: {} expected {}, got {}\n",
                    f.case,
                    f.inputs.join(", "),
                    f.expected,
                    f.got
                ));
            }
        }
        out
    }
}

/// What a single random case asserts.
pub(crate) enum Check {
    /// `lhs = rhs` in `K^MW_*(F)`; both sides in the expression grammar.
    Kmw(String, String),
    /// `lhs = rhs` in `K^W_*(F)`, decided through `θ`.
    Kw(String, String),
    /// A computed fact, with its expected and observed descriptions.
    Holds { ok: bool, expected: String, got: String },
}

pub(crate) struct Case {
    pub inputs: Vec<(String, FieldElement)>,
    pub check: Check,
}

impl Case {
    pub fn kmw(inputs: Vec<(String, FieldElement)>, lhs: impl Into<String>, rhs: impl Into<String>) -> Self {
        Case {
            inputs,
            check: Check::Kmw(lhs.into(), rhs.into()),
        }
    }

    pub fn kw(inputs: Vec<(String, FieldElement)>, lhs: impl Into<String>, rhs: impl Into<String>) -> Self {
        Case {
            inputs,
            check: Check::Kw(lhs.into(), rhs.into()),
        }
    }

    pub fn holds(inputs: Vec<(String, FieldElement)>, ok: bool, expected: impl Into<String>, got: impl Into<String>) -> Self {
        Case {
            inputs,
            check: Check::Holds {
                ok,
                expected: expected.into(),
                got: got.into(),
            },
        }
    }
}

/// Draws one case; `Ok(None)` asks for a redraw (a side condition failed).
pub(crate) type Generator = Box<dyn Fn(&Field, &mut ChaCha8Rng, usize) -> Result<Option<Case>>>;

pub(crate) struct Identity {
    pub name: String,
    pub gen: Generator,
    /// False when the side conditions have no solution over the field, as
    /// `a != 1` over GF(2); such identities are left out of the report.
    pub applies: fn(&Field) -> bool,
}

impl Identity {
    pub fn new(name: impl Into<String>, gen: impl Fn(&Field, &mut ChaCha8Rng, usize) -> Result<Option<Case>> + 'static) -> Self {
        Identity {
            name: name.into(),
            gen: Box::new(gen),
            applies: |_| true,
        }
    }

    /// Skips the identity over GF(2), where no unit other than 1 exists.
    pub fn beyond_gf2(mut self) -> Self {
        self.applies = |f| f.order() != Some(2);
        self
    }
}

const MAX_REDRAWS: usize = 200;

/// Runs one suite. Each identity draws from its own random stream, derived
/// from the seed and the identity name, so reports do not depend on the
/// order in which identities run.
pub fn run_suite(suite: &str, config: &VerifyConfig) -> Result<SuiteReport> {
    let identities = suites::identities(suite, &config.field)?;
    let mut reports: Vec<IdentityReport> = identities
        .iter()
        .filter(|id| (id.applies)(&config.field))
        .map(|id| run_identity(id, config)).collect::<Result<_>>()?;
    reports.sort_by(|a, b| a.identity.cmp(&b.identity));
    Ok(SuiteReport {
        field: config.field.name(),
        suite: suite.to_string(),
        seed: config.seed,
        identities: reports,
    })
}

fn run_identity(id: &Identity, config: &VerifyConfig) -> Result<IdentityReport> {
    let f = &config.field;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(stream_id(&id.name));
    let mut report = IdentityReport {
        identity: id.name.clone(),
        cases: 0,
        passed: 0,
        failures: Vec::new(),
    };
    for case_index in 0..config.cases {
        let mut case = None;
        for _ in 0..MAX_REDRAWS {
            case = (id.gen)(f, &mut rng, case_index)?;
            if case.is_some() {
                break;
            }
        }
        let Some(case) = case else {
            return Err(Error::Verification(format!(
                "{}: no admissible instance over {} after {MAX_REDRAWS} draws",
                id.name,
                f.name()
            )));
        };
        report.cases += 1;
        let (ok, expected, got) = evaluate(f, &case);
        if ok {
            report.passed += 1;
        } else {
            report.failures.push(Failure {
                case: case_index,
                inputs: case.inputs.iter().map(|(n, v)| format!("{n} = {}", f.format(v))).collect(),
                expected,
                got,
            });
        }
    }
    Ok(report)
}

fn evaluate(f: &Field, case: &Case) -> (bool, String, String) {
    let show = |r: Result<String>| r.unwrap_or_else(|e| format!("error: {e}"));
    match &case.check {
        Check::Kmw(lhs, rhs) => {
            let got = parse(lhs, f, &case.inputs)
                .and_then(|l| Ok((l, parse(rhs, f, &case.inputs)?)))
                .and_then(|(l, r)| kmw_equal(&l, &r, f));
            let ok = matches!(got, Ok(Verdict::Equal));
            (ok, format!("{lhs} = {rhs}: Equal"), show(got.map(|v| v.to_string())))
        }
        Check::Kw(lhs, rhs) => {
            let got = parse(lhs, f, &case.inputs)
                .and_then(|l| Ok((l, parse(rhs, f, &case.inputs)?)))
                .and_then(|(l, r)| kw_equal(&l, &r, f));
            let ok = matches!(got, Ok(true));
            (ok, format!("{lhs} = {rhs} in K^W: true"), show(got.map(|v| v.to_string())))
        }
        Check::Holds { ok, expected, got } => (*ok, expected.clone(), got.clone()),
    }
}

/// FNV-1a, so streams are stable across platforms and releases.
fn stream_id(name: &str) -> u64 {
    name.bytes()
        .fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}
