//! Acceptance gate: runs each criterion and prints one PASS/FAIL line for it.
//! Exits nonzero if any criterion fails.

use kmw_core::forms::DiagonalForm;
use kmw_core::kmw::{kmw_equal, normalize, parse, phi_neg, CanonicalKMW, MWExpr};
use kmw_core::symbols::{kato_equal, MilnorSymbolSum, Verdict};
use kmw_core::verify::{run_suite, SuiteReport, VerifyConfig};
use kmw_core::witt::WittClass;
use kmw_core::{Field, FieldElement, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::OnceLock;
use std::time::Instant;

const SEED: u64 = 20_240_601;

/// Whether the criterion holds, with a one-line account.
type Criterion = fn() -> Result<(bool, String)>;

const FIELDS: [&str; 10] = [
    "GF(3)",
    "GF(5)",
    "GF(7)",
    "GF(9)",
    "GF(2)",
    "GF(4)",
    "GF(8)",
    "GF(2)(t)",
    "GF(4)(t)",
    "GF(2)(t,u)",
];

fn field(spec: &str) -> Field {
    spec.parse::<Field>().expect("valid field")
}

fn config(spec: &str, cases: usize) -> VerifyConfig {
    VerifyConfig {
        field: field(spec),
        seed: SEED,
        cases,
    }
}

/// Runs suites and returns (cases, passed, first failure description).
fn run_all(runs: &[(&str, &str, usize)]) -> Result<(usize, usize, Option<String>)> {
    let mut cases = 0;
    let mut passed = 0;
    let mut first = None;
    for &(suite, spec, n) in runs {
        let r: SuiteReport = run_suite(suite, &config(spec, n))?;
        cases += r.cases();
        passed += r.passed();
        if first.is_none() && !r.all_passed() {
            first = Some(r.summary());
        }
    }
    Ok((cases, passed, first))
}

fn outcome(ok: bool, detail: String) -> (bool, String) {
    (ok, detail)
}

fn criterion_1() -> Result<(bool, String)> {
    let start = Instant::now();
    let mut runs = Vec::new();
    for spec in FIELDS {
        for suite in ["relations", "lemma1", "lemma2", "puissances", "gw"] {
            runs.push((suite, spec, 500));
        }
        if spec.starts_with("GF(2") || spec.starts_with("GF(4") || spec.starts_with("GF(8") {
            runs.push(("kw_char2", spec, 500));
        }
    }
    let (cases, passed, first) = run_all(&runs)?;
    let secs = start.elapsed().as_secs_f64();
    let ok = cases == passed && secs < 300.0;
    let mut detail = format!("{passed}/{cases} identity instances Equal in {secs:.1}s");
    if let Some(f) = first {
        detail.push_str(&format!("\n{f}"));
    }
    Ok(outcome(ok, detail))
}

/// All vectors of length `n` over `elements`.
fn vectors(elements: &[FieldElement], n: usize) -> Vec<Vec<FieldElement>> {
    (0..n).fold(vec![Vec::new()], |acc, _| {
        acc.into_iter()
            .flat_map(|v| {
                elements.iter().map(move |e| {
                    let mut w = v.clone();
                    w.push(e.clone());
                    w
                })
            })
            .collect()
    })
}

fn bilinear(f: &Field, a: &[FieldElement], x: &[FieldElement], y: &[FieldElement]) -> FieldElement {
    f.sum(
        a.iter()
            .zip(x.iter().zip(y))
            .map(|(ai, (xi, yi))| f.mul(ai, &f.mul(xi, yi)))
            .collect::<Vec<_>>()
            .iter(),
    )
}

/// Largest dimension (at most 2) of a totally isotropic subspace, by search
/// over isotropic vectors normalized to leading coefficient 1.
fn witt_index(f: &Field, a: &[FieldElement], vs: &[Vec<FieldElement>]) -> usize {
    let iso: Vec<&Vec<FieldElement>> = vs
        .iter()
        .filter(|v| v.iter().find(|x| !f.is_zero(x)).is_some_and(|x| f.is_one(x)))
        .filter(|v| f.is_zero(&bilinear(f, a, v, v)))
        .collect();
    if iso.is_empty() {
        return 0;
    }
    for (i, v) in iso.iter().enumerate() {
        for w in &iso[i + 1..] {
            if f.is_zero(&bilinear(f, a, v, w)) {
                return 2;
            }
        }
    }
    1
}

fn multisets(units: &[FieldElement], n: usize, from: usize) -> Vec<Vec<FieldElement>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    (from..units.len())
        .flat_map(|i| {
            multisets(units, n - 1, i).into_iter().map(move |mut rest| {
                rest.insert(0, units[i].clone());
                rest
            })
        })
        .collect()
}

fn criterion_2() -> Result<(bool, String)> {
    let mut forms = 0;
    let mut agree = 0;
    let mut first = None;
    for q in [2, 3, 4, 5, 7, 9] {
        let f = field(&format!("GF({q})"));
        let elements = f.elements().unwrap();
        let units = f.units().unwrap();
        for n in 1..=4 {
            let vs = vectors(&elements, n);
            for a in multisets(&units, n, 0) {
                forms += 1;
                let form = DiagonalForm::new(&f, a.clone())?;
                let index = witt_index(&f, &a, &vs);
                let witness = form.is_isotropic();
                let witness_ok = witness
                    .as_ref()
                    .is_none_or(|x| x.iter().any(|c| !f.is_zero(c)) && f.is_zero(&form.evaluate(x)));
                let d = form.witt_decompose();
                let an_vs = vectors(&elements, d.anisotropic.rank());
                let an_ok = d.anisotropic.rank() == 0
                    || witt_index(&f, d.anisotropic.entries(), &an_vs) == 0;
                let ok = witness.is_some() == (index > 0)
                    && witness_ok
                    && d.anisotropic.rank() == n - 2 * index
                    && d.metabolic_rank == 2 * index
                    && an_ok;
                if ok {
                    agree += 1;
                } else if first.is_none() {
                    first = Some(format!("GF({q}) {a:?}: index {index}, decomposition {:?}", d.anisotropic.entries()));
                }
            }
        }
    }
    let mut detail = format!("{agree}/{forms} diagonal forms agree with exhaustive enumeration");
    if let Some(x) = first {
        detail.push_str(&format!("; first disagreement {x}"));
    }
    Ok(outcome(agree == forms, detail))
}

fn distinct(classes: impl IntoIterator<Item = WittClass>) -> Result<Vec<WittClass>> {
    let mut reps: Vec<WittClass> = Vec::new();
    for w in classes {
        let mut seen = false;
        for r in &reps {
            if r.witt_equal(&w)? {
                seen = true;
                break;
            }
        }
        if !seen {
            reps.push(w);
        }
    }
    Ok(reps)
}

fn all_forms(f: &Field, max_rank: usize) -> Vec<Vec<FieldElement>> {
    let units = f.units().unwrap();
    (0..=max_rank).flat_map(|n| multisets(&units, n, 0)).collect()
}

fn criterion_3() -> Result<(bool, String)> {
    let mut ok = true;
    let mut parts = Vec::new();
    for (spec, want) in [("GF(3)", 4), ("GF(5)", 4), ("GF(2)", 2), ("GF(4)", 2), ("GF(8)", 2)] {
        let f = field(spec);
        let forms = all_forms(&f, 3);
        let classes = distinct(forms.iter().map(|a| {
            WittClass::from_form(&DiagonalForm::new(&f, a.clone()).expect("units"))
        }))?;
        let mut phi_counts = Vec::new();
        for n in 1..=3u32 {
            let images = classes
                .iter()
                .map(|w| normalize(&phi_neg(w, n), &f).map(|c| c.witt().clone()))
                .collect::<Result<Vec<_>>>()?;
            // images of η^n⟨u⟩ sums for every form, not only the representatives
            let all = forms
                .iter()
                .map(|a| {
                    let terms: Vec<MWExpr> = a
                        .iter()
                        .map(|u| MWExpr::Eta.pow(n).times(MWExpr::Angle(u.clone())))
                        .collect();
                    normalize(&MWExpr::Sum(terms), &f).map(|c| c.witt().clone())
                })
                .collect::<Result<Vec<_>>>()?;
            let c1 = distinct(images)?.len();
            let c2 = distinct(all)?.len();
            ok &= c1 == want && c2 == want;
            phi_counts.push(c2);
        }
        ok &= classes.len() == want;
        parts.push(format!("{spec}: {} classes, eta^n images {:?}", classes.len(), phi_counts));
    }
    Ok(outcome(ok, parts.join("; ")))
}

/// The theta suite over GF(2)(t,u), shared by criteria 4 and 5.
fn theta_two_variables() -> Result<&'static SuiteReport> {
    static REPORT: OnceLock<SuiteReport> = OnceLock::new();
    if let Some(r) = REPORT.get() {
        return Ok(r);
    }
    let r = run_suite("theta", &config("GF(2)(t,u)", 200))?;
    Ok(REPORT.get_or_init(|| r))
}

fn criterion_4() -> Result<(bool, String)> {
    let one_variable = run_suite("theta", &config("GF(2)(t)", 200))?;
    let mut cases = 0;
    let mut passed = 0;
    for r in [&one_variable, theta_two_variables()?] {
        for id in r.identities.iter().filter(|id| id.identity.starts_with("theta kills")) {
            cases += id.cases;
            passed += id.passed;
        }
    }
    Ok(outcome(
        cases == passed && cases == 2 * 5 * 200,
        format!("{passed}/{cases} relation instances times monomials map to zero under theta"),
    ))
}

fn criterion_5() -> Result<(bool, String)> {
    let r = theta_two_variables()?;
    let ids: Vec<_> = r
        .identities
        .iter()
        .filter(|id| id.identity.starts_with("theta surjects"))
        .collect();
    let cases: usize = ids.iter().map(|id| id.cases).sum();
    let passed: usize = ids.iter().map(|id| id.passed).sum();
    Ok(outcome(
        ids.len() == 2 && cases == 400 && passed == cases,
        format!("{passed}/{cases} members of I^1 and I^2 reconstructed from Pfister decompositions"),
    ))
}

fn criterion_6() -> Result<(bool, String)> {
    // degree bound 2 leaves fewer than 50 square classes to draw from
    let f = field("GF(2)(t)").with_degree_bound(4);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut units: Vec<FieldElement> = Vec::new();
    for _ in 0..100_000 {
        if units.len() == 50 {
            break;
        }
        let u = f.random_unit(&mut rng);
        if units.iter().all(|v| !f.same_square_class(&u, v)) {
            units.push(u);
        }
    }
    if units.len() < 50 {
        return Ok(outcome(false, format!("only {} square classes found", units.len())));
    }
    let mut pairs = 0;
    let mut separated = 0;
    for i in 0..units.len() {
        for j in i + 1..units.len() {
            pairs += 1;
            let a = MilnorSymbolSum::symbol(&f, vec![units[i].clone()])?;
            let b = MilnorSymbolSum::symbol(&f, vec![units[j].clone()])?;
            if !kato_equal(&a, &b)? {
                separated += 1;
            }
        }
    }
    let r = run_suite("kato", &config("GF(2)(t)", 200))?;
    let pick = |prefix: &str| {
        r.identities
            .iter()
            .find(|id| id.identity.starts_with(prefix))
            .map(|id| (id.passed, id.cases))
            .unwrap_or((0, 1))
    };
    let steinberg = pick("Steinberg");
    let degree2 = pick("degree-2 symbols");
    let ok = separated == pairs && steinberg.0 == steinberg.1 && degree2.0 == degree2.1;
    Ok(outcome(
        ok,
        format!(
            "{separated}/{pairs} pairs of s_1 classes distinct; Steinberg {}/{}; degree-2 mod-2 zero {}/{}",
            steinberg.0, steinberg.1, degree2.0, degree2.1
        ),
    ))
}

fn criterion_7() -> Result<(bool, String)> {
    let mut parts = Vec::new();
    let mut ok = true;
    // the zero test through invariants takes I^3 = 0 for granted, so the
    // Pfister forms are also reduced to nothing directly
    for (spec, n) in [("GF(2)(t)", 2), ("GF(2)(t,u)", 3)] {
        let r = run_suite("vanishing", &config(spec, 100))?;
        let count = |prefix: String| {
            let id = r.identities.iter().find(|id| id.identity.starts_with(&prefix));
            id.map_or((0, 0), |id| (id.passed, id.cases))
        };
        let (p, c) = count(format!("K^W_{n}"));
        let (pm, cm) = count(format!("{n}-fold Pfister"));
        ok &= c == 100 && p == c && cm == 100 && pm == cm;
        parts.push(format!("{spec}: {p}/{c} products zero in K^W_{n}, {pm}/{cm} {n}-fold Pfister forms metabolic"));
    }
    Ok(outcome(ok, parts.join("; ")))
}

fn criterion_8() -> Result<(bool, String)> {
    let runs: Vec<_> = FIELDS.iter().map(|s| ("cartesian", *s, 500)).collect();
    let (cases, passed, first) = run_all(&runs)?;
    let chains: usize = ["GF(3)", "GF(5)"]
        .iter()
        .map(|s| {
            run_suite("cartesian", &config(s, 1)).map(|r| {
                r.identities.iter().filter(|id| id.identity.starts_with("chain")).count()
            })
        })
        .sum::<Result<usize>>()?;
    let mut detail = format!("{passed}/{cases} checks (including chain witnesses over GF(3), GF(5): {chains} suites)");
    if let Some(f) = first {
        detail.push_str(&format!("\n{f}"));
    }
    Ok(outcome(cases == passed && chains == 2, detail))
}

fn criterion_9() -> Result<(bool, String)> {
    let f = field("GF(4)");
    let mut ok = true;
    let forms = all_forms(&f, 3);
    let mut counts = Vec::new();
    for n in 1..=3u32 {
        let classes = forms
            .iter()
            .map(|a| {
                let terms: Vec<MWExpr> = a
                    .iter()
                    .map(|u| MWExpr::Eta.pow(n).times(MWExpr::Angle(u.clone())))
                    .collect();
                normalize(&MWExpr::Sum(terms), &f).map(|c| c.witt().clone())
            })
            .collect::<Result<Vec<_>>>()?;
        let c = distinct(classes)?.len();
        ok &= c == 2;
        counts.push(c);
    }
    let two_eta = kmw_equal(&parse("2 eta", &f, &[])?, &MWExpr::Int(0), &f)? == Verdict::Equal;
    ok &= two_eta;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut eta_brackets = 0;
    let mut factors = 0;
    for _ in 0..100 {
        let u = f.random_unit(&mut rng);
        let e = MWExpr::Eta.times(MWExpr::Bracket(u.clone()));
        eta_brackets += usize::from(kmw_equal(&e, &MWExpr::Int(0), &f)? == Verdict::Equal);
        // in degree 0 the value is its rank; in degree 1 the Milnor symbol
        let k = rng.gen_range(0..5u64);
        let zero_deg = MWExpr::Int(k).plus(MWExpr::Angle(u.clone())).plus(MWExpr::Eta.times(MWExpr::Bracket(f.random_unit(&mut rng))));
        let c = normalize(&zero_deg, &f)?;
        let rank_only = matches!(&c, CanonicalKMW::Zero(gw) if gw.rank == k as i64 + 1
            && gw.witt.witt_equal(&WittClass::one(&f).scale(k as i64 + 1)).unwrap_or(false));
        let v = f.random_unit(&mut rng);
        let one_deg = MWExpr::Angle(v).times(MWExpr::Bracket(u.clone()));
        let milnor = kmw_equal(&one_deg, &MWExpr::Bracket(u), &f)? == Verdict::Equal;
        factors += usize::from(rank_only && milnor);
    }
    ok &= eta_brackets == 100 && factors == 100;
    Ok(outcome(
        ok,
        format!(
            "negative-degree classes {counts:?}; 2 eta = 0: {two_eta}; eta[u] = 0 {eta_brackets}/100; degree >= 0 through symbols {factors}/100"
        ),
    ))
}

fn random_expr(f: &Field, rng: &mut ChaCha8Rng, depth: u32) -> MWExpr {
    let leaf = |rng: &mut ChaCha8Rng| match rng.gen_range(0..7) {
        0 => MWExpr::Bracket(f.random_unit(rng)),
        1 => MWExpr::Eta,
        2 => MWExpr::Int(rng.gen_range(0..10)),
        3 => MWExpr::Angle(f.random_unit(rng)),
        4 => MWExpr::NEps(rng.gen_range(-4..5)),
        5 => MWExpr::Eps,
        _ => MWExpr::H,
    };
    if depth == 0 {
        return leaf(rng);
    }
    match rng.gen_range(0..5) {
        0 => MWExpr::Sum((0..rng.gen_range(2..4)).map(|_| random_expr(f, rng, depth - 1)).collect()),
        1 => MWExpr::Product((0..rng.gen_range(2..4)).map(|_| random_expr(f, rng, depth - 1)).collect()),
        2 => random_expr(f, rng, depth - 1).negated(),
        3 => random_expr(f, rng, depth - 1).pow(rng.gen_range(0..4)),
        _ => leaf(rng),
    }
}

fn criterion_10() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut round_trips = 0;
    for i in 0..200 {
        let f = field(FIELDS[i % FIELDS.len()]);
        let e = random_expr(&f, &mut rng, 4).flatten();
        let text = e.to_text(&f);
        if parse(&text, &f, &[]).map(|p| p.flatten()) == Ok(e) {
            round_trips += 1;
        }
    }
    let mut deterministic = 0;
    let checks = [("lemma1", "GF(2)(t)"), ("cartesian", "GF(5)"), ("kato", "GF(2)(t,u)")];
    for (suite, spec) in checks {
        let a = run_suite(suite, &config(spec, 30))?.to_json().to_string();
        let b = run_suite(suite, &config(spec, 30))?.to_json().to_string();
        deterministic += usize::from(a == b);
    }
    Ok(outcome(
        round_trips == 200 && deterministic == checks.len(),
        format!("{round_trips}/200 expressions round trip; {deterministic}/{} reports byte-identical", checks.len()),
    ))
}

fn main() {
    let criteria: [(&str, Criterion); 10] = [
        ("relation and lemma identities", criterion_1),
        ("isotropy and Witt decomposition oracle", criterion_2),
        ("Witt class counts", criterion_3),
        ("theta kills relations", criterion_4),
        ("theta surjectivity round trip", criterion_5),
        ("Milnor map mod 2", criterion_6),
        ("vanishing of I^n", criterion_7),
        ("cartesian squares", criterion_8),
        ("every unit a square", criterion_9),
        ("parser round trip and determinism", criterion_10),
    ];
    // optional criterion numbers select a subset; harness flags are ignored
    let selected: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        if !selected.is_empty() && !selected.contains(&(i + 1)) {
            continue;
        }
        let start = Instant::now();
        let (ok, detail) = run().unwrap_or_else(|e| (false, format!("error: {e}")));
        failed += usize::from(!ok);
        println!(
            "criterion {:>2} {}: {} ({detail}) [{:.1}s]",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            name,
            start.elapsed().as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
