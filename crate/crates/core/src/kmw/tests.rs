use super::*;
use crate::field::{Field, FieldElement};
use crate::forms::DiagonalForm;
use crate::symbols::{eta_act, Verdict};
use crate::witt::{in_ideal_power, pfister_class, pfister_decompose, witt_class, IFiltClass, WittClass};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn field(s: &str) -> Field {
    s.parse().unwrap()
}

fn el(f: &Field, s: &str) -> FieldElement {
    f.parse_element(s).unwrap()
}

fn ex(f: &Field, s: &str) -> MWExpr {
    parse(s, f, &[]).unwrap()
}

fn bound(names: &[&str], values: &[FieldElement]) -> Vec<(String, FieldElement)> {
    names.iter().map(|n| n.to_string()).zip(values.iter().cloned()).collect()
}

fn verdict(f: &Field, lets: &[(String, FieldElement)], a: &str, b: &str) -> Verdict {
    kmw_equal(&parse(a, f, lets).unwrap(), &parse(b, f, lets).unwrap(), f).unwrap()
}

#[test]
fn parse_examples() {
    let f = field("GF(2)(t)");
    let e = ex(&f, "eta [t] + 2");
    assert_eq!(
        e,
        MWExpr::Sum(vec![
            MWExpr::Product(vec![MWExpr::Eta, MWExpr::Bracket(el(&f, "t"))]),
            MWExpr::Int(2)
        ])
    );
    assert!(matches!(parse("[0]", &f, &[]), Err(crate::Error::Parse { pos: 0, .. })));
    assert!(matches!(parse("[t] + [t-t]", &f, &[]), Err(crate::Error::Parse { pos: 6, .. })));
    assert!(parse("[t] +", &f, &[]).is_err());
    assert!(parse("foo", &f, &[]).is_err());
    assert_eq!(
        ex(&f, "<t>").desugar(&f),
        MWExpr::Sum(vec![
            MWExpr::Int(1),
            MWExpr::Product(vec![MWExpr::Eta, MWExpr::Bracket(el(&f, "t"))])
        ])
    );
    let e = ex(&f, "-eta [t]^2 (1 - <t+1>) + n_eps(-3) eps h");
    assert_eq!(ex(&f, &e.flatten().to_text(&f)).flatten(), e.flatten());
}

#[test]
fn expansion_examples() {
    let f = field("GF(5)");
    let lets = bound(&["a", "b"], &[el(&f, "2"), el(&f, "3")]);
    let e = parse("<a><b>", &f, &lets).unwrap();
    let got = monomial_expand(&e, &f).homogeneous(None).unwrap();
    let want = parse("1 + eta [a] + eta [b] + eta^2 [a][b]", &f, &lets).unwrap();
    assert_eq!(got, monomial_expand(&want, &f).homogeneous(None).unwrap());
    assert_eq!(got.terms().len(), 4);

    let eh = monomial_expand(&ex(&f, "eta h"), &f).homogeneous(None).unwrap();
    let want = monomial_expand(&ex(&f, "eta^2 [-1] + 2 eta"), &f).homogeneous(None).unwrap();
    assert_eq!(eh, want);

    let b = monomial_expand(&ex(&f, "[2]"), &f);
    assert_eq!(b.degree().unwrap(), Some(1));
    let m = b.parts()[&1].terms().keys().next().unwrap().clone();
    assert_eq!((m.eta, m.units.len()), (0, 1));

    let mixed = monomial_expand(&ex(&f, "[2] + eta"), &f);
    assert!(matches!(mixed.degree(), Err(crate::Error::Inhomogeneous(_))));
    // cancelling coefficients keep their degree
    assert_eq!(monomial_expand(&ex(&f, "[2] - [2]"), &f).degree().unwrap(), Some(1));
    assert_eq!(monomial_expand(&ex(&f, "0"), &f).degree().unwrap(), None);
}

#[test]
fn normalize_examples() {
    let f = field("GF(2)(t)");
    let one = normalize(&ex(&f, "[1]"), &f).unwrap();
    assert_eq!((one.degree(), one.is_zero()), (1, Verdict::Equal));
    let g = field("GF(5)");
    let eh = normalize(&ex(&g, "eta h"), &g).unwrap();
    assert_eq!((eh.degree(), eh.is_zero()), (-1, Verdict::Equal));
    let lets = bound(&["a"], &[el(&f, "t+1")]);
    let s = normalize(&parse("[a][-a]", &f, &lets).unwrap(), &f).unwrap();
    assert_eq!((s.degree(), s.is_zero()), (2, Verdict::Equal));
    let st = normalize(&ex(&f, "[t][1-t]"), &f).unwrap();
    assert_eq!((st.degree(), st.is_zero()), (2, Verdict::Equal));
    let h = normalize(&ex(&g, "h"), &g).unwrap();
    let CanonicalKMW::Zero(gw) = h else { panic!() };
    assert_eq!(gw.rank, 2);
    assert!(gw.witt.is_zero());
    assert_eq!(normalize(&ex(&g, "[2]"), &g).unwrap().is_zero(), Verdict::NotEqual);
}

#[test]
fn equality_examples() {
    let f = field("GF(2)(t,u)");
    let lets = bound(&["a", "b"], &[el(&f, "t"), el(&f, "u+1")]);
    assert_eq!(verdict(&f, &lets, "[a b]", "[a] + [b] + eta [a][b]"), Verdict::Equal);
    assert_eq!(verdict(&f, &lets, "[a][b]", "eps [b][a]"), Verdict::Equal);
    // differs by 2[a][b], invisible to the Witt part and to the mod-2 comparison
    assert_eq!(verdict(&f, &lets, "[a][b]", "[b][a]"), Verdict::Undecided);
    assert_eq!(verdict(&f, &lets, "[a]", "[b]"), Verdict::NotEqual);
    assert_eq!(verdict(&f, &lets, "[a][b]", "0"), Verdict::NotEqual);
    // 3{x, t} vanishes over GF(4)(t) while {x, t} is not decided
    let g = field("GF(4)(t)");
    assert_eq!(verdict(&g, &[], "3 [x][t]", "0"), Verdict::Equal);
    let c = kmw_compare(&ex(&g, "[x][t]"), &ex(&g, "0"), &g).unwrap();
    assert_eq!(c.verdict, Verdict::Undecided);
    assert!(c.report.contains("not decided"));

    let f3 = field("GF(3)");
    assert_eq!(verdict(&f3, &[], "eta^2 <2>", "eta^2 <1>"), Verdict::NotEqual);
    assert_eq!(verdict(&f3, &[], "eta^2 <2>", "eta^2 <2>"), Verdict::Equal);
    assert!(matches!(
        kmw_equal(&ex(&f3, "[2]"), &ex(&f3, "eta"), &f3),
        Err(crate::Error::DegreeMismatch(1, -1))
    ));
}

#[test]
fn theta_examples() {
    let f = field("GF(2)(t,u)");
    let t = theta(&ex(&f, "[t]"), &f).unwrap();
    assert_eq!(t.degree(), 1);
    assert!(t.witt().witt_equal(&WittClass::from_form(&DiagonalForm::parse(&f, "1,t").unwrap())).unwrap());
    let tu = theta(&ex(&f, "[t][u]"), &f).unwrap();
    assert_eq!(tu.degree(), 2);
    let want = witt_class(&DiagonalForm::parse(&f, "1,t,u,t u").unwrap());
    assert!(tu.witt().witt_equal(&want).unwrap());
    let e = theta(&ex(&f, "eta"), &f).unwrap();
    assert_eq!(e.degree(), -1);
    assert!(e.witt().witt_equal(&WittClass::one(&f).neg()).unwrap());
    assert!(theta(&ex(&f, "h"), &f).unwrap().is_zero());
    let odd = theta(&ex(&field("GF(5)"), "[2]"), &field("GF(5)")).unwrap();
    assert!(!odd.complete);
    assert!(kw_equal(&ex(&field("GF(5)"), "1"), &ex(&field("GF(5)"), "1"), &field("GF(5)")).is_err());
}

#[test]
fn phi_examples() {
    let f = field("GF(3)");
    let u = WittClass::angle(&f, &el(&f, "2"));
    assert_eq!(phi_neg(&u, 2), MWExpr::Product(vec![MWExpr::Eta.pow(2), MWExpr::Angle(el(&f, "2"))]));
    assert_eq!(phi_neg(&WittClass::zero(&f), 3), MWExpr::Int(0));
    assert_eq!(phi_neg(&WittClass::one(&f), 1), MWExpr::Eta);
    for n in 0..4 {
        let c = normalize(&phi_neg(&u, n), &f).unwrap();
        assert!(c.witt().witt_equal(&u).unwrap());
    }
}

#[test]
fn localize_examples() {
    let f = field("GF(5)");
    let l = localize_eta(&ex(&f, "[2]"), &f).unwrap();
    assert_eq!(l.support(), vec![-1]);
    assert!(l.coeff(-1).witt_equal(&WittClass::angle_minus_one(&f, &el(&f, "2"))).unwrap());
    assert!(localize_eta(&ex(&f, "h"), &f).unwrap().is_zero());
    let e = localize_eta(&ex(&f, "eta"), &f).unwrap();
    assert_eq!(e.support(), vec![1]);
    assert!(e.coeff(1).witt_equal(&WittClass::one(&f)).unwrap());
}

#[test]
fn constants_examples() {
    let f2 = field("GF(2)(t)");
    for n in -3..=3 {
        assert_eq!(
            kmw_equal(&constants::n_epsilon(n), &MWExpr::int(n), &f2).unwrap(),
            Verdict::Equal
        );
    }
    let f = field("GF(7)");
    assert_eq!(kmw_equal(&constants::n_epsilon(2), &constants::h(), &f).unwrap(), Verdict::Equal);
    assert_eq!(kmw_equal(&constants::n_epsilon(0), &MWExpr::Int(0), &f).unwrap(), Verdict::Equal);
    let eps2 = constants::epsilon().pow(2);
    assert_eq!(kmw_equal(&eps2, &MWExpr::Int(1), &f).unwrap(), Verdict::Equal);
    assert_eq!(kmw_equal(&constants::epsilon().times(MWExpr::Eta), &MWExpr::Eta, &f).unwrap(), Verdict::Equal);
    assert!(constants::bracket(&f, &f.zero()).is_err());
    let three = el(&f, "3");
    assert_eq!(
        kmw_equal(&constants::angle(&f, &three).unwrap(), &ex(&f, "1 + eta [3]"), &f).unwrap(),
        Verdict::Equal
    );
}

#[test]
fn every_unit_a_square() {
    let f = field("GF(4)");
    assert_eq!(kmw_equal(&ex(&f, "2 eta"), &ex(&f, "0"), &f).unwrap(), Verdict::Equal);
    for u in f.units().unwrap() {
        let e = MWExpr::Eta.times(MWExpr::Bracket(u));
        assert_eq!(kmw_equal(&e, &MWExpr::Int(0), &f).unwrap(), Verdict::Equal);
    }
}

const FIELDS: [&str; 7] = ["GF(3)", "GF(5)", "GF(9)", "GF(2)", "GF(4)", "GF(2)(t)", "GF(2)(t,u)"];

fn units(f: &Field, seed: u64, n: usize) -> Vec<FieldElement> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| f.random_unit(&mut rng)).collect()
}

fn random_expr(f: &Field, rng: &mut ChaCha8Rng, depth: u32) -> MWExpr {
    use rand::Rng;
    let leaf = |rng: &mut ChaCha8Rng| match rng.gen_range(0..6) {
        0 => MWExpr::Bracket(f.random_unit(rng)),
        1 => MWExpr::Eta,
        2 => MWExpr::Int(rng.gen_range(0..4)),
        3 => MWExpr::Angle(f.random_unit(rng)),
        4 => MWExpr::NEps(rng.gen_range(-3..4)),
        _ => [MWExpr::Eps, MWExpr::H][rng.gen_range(0..2)].clone(),
    };
    if depth == 0 {
        return leaf(rng);
    }
    match rng.gen_range(0..5) {
        0 => MWExpr::Sum((0..rng.gen_range(2..4)).map(|_| random_expr(f, rng, depth - 1)).collect()),
        1 => MWExpr::Product((0..rng.gen_range(2..4)).map(|_| random_expr(f, rng, depth - 1)).collect()),
        2 => random_expr(f, rng, depth - 1).negated(),
        3 => random_expr(f, rng, depth - 1).pow(rng.gen_range(0..3)),
        _ => leaf(rng),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn defining_relations_hold(idx in 0..FIELDS.len(), seed in any::<u64>()) {
        let f = field(FIELDS[idx]).with_degree_bound(2);
        let v = units(&f, seed, 2);
        let lets = bound(&["a", "b"], &v);
        prop_assert_eq!(verdict(&f, &lets, "[a b]", "[a] + [b] + eta [a][b]"), Verdict::Equal);
        prop_assert_eq!(verdict(&f, &lets, "eta [a]", "[a] eta"), Verdict::Equal);
        prop_assert_eq!(verdict(&f, &lets, "eta h", "0"), Verdict::Equal);
        if !f.is_one(&v[0]) {
            prop_assert_eq!(verdict(&f, &lets, "[a][1 - a]", "0"), Verdict::Equal);
        }
        prop_assert_eq!(verdict(&f, &lets, "<a><a^-1>", "1"), Verdict::Equal);
        prop_assert_eq!(verdict(&f, &lets, "[a/b]", "[a] - <a/b>[b]"), Verdict::Equal);
        prop_assert_eq!(verdict(&f, &lets, "[a][a]", "[a][-1]"), Verdict::Equal);
    }

    #[test]
    fn print_parse_round_trip(idx in 0..FIELDS.len(), seed in any::<u64>()) {
        let f = field(FIELDS[idx]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = random_expr(&f, &mut rng, 3).flatten();
        let text = e.to_text(&f);
        let back = parse(&text, &f, &[]).unwrap().flatten();
        prop_assert_eq!(back, e, "{}", text);
    }

    #[test]
    fn eta_action_matches_multiplication(idx in 0..FIELDS.len(), seed in any::<u64>()) {
        let f = field(FIELDS[idx]).with_degree_bound(2);
        let v = units(&f, seed, 2);
        let e = MWExpr::Product(vec![MWExpr::Bracket(v[0].clone()), MWExpr::Bracket(v[1].clone())]);
        let j = psi(&monomial_expand(&e, &f).homogeneous(None).unwrap()).unwrap();
        let twice = eta_act(&eta_act(&j).unwrap()).unwrap();
        let direct = psi(&monomial_expand(&MWExpr::Eta.pow(2).times(e), &f).homogeneous(None).unwrap()).unwrap();
        prop_assert_eq!(twice.degree(), 0);
        prop_assert!(twice.witt().class().witt_equal(direct.witt().class()).unwrap());
        prop_assert_eq!(direct.milnor().terms().len(), 0);
        prop_assert!(twice.verify());
    }

    #[test]
    fn localization_is_multiplicative(idx in 0..FIELDS.len(), seed in any::<u64>()) {
        let f = field(FIELDS[idx]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_expr(&f, &mut rng, 2);
        let b = random_expr(&f, &mut rng, 2);
        let lhs = localize_eta(&a.clone().times(b.clone()), &f).unwrap();
        let rhs = localize_eta(&a, &f).unwrap().mul(&localize_eta(&b, &f).unwrap()).unwrap();
        prop_assert!(lhs.equals(&rhs).unwrap());
    }

    #[test]
    fn theta_inverts_pfister_decomposition(seed in any::<u64>(), n in 1i64..3) {
        let f = field("GF(2)(t,u)");
        let v = units(&f, seed, 4);
        let w = WittClass::from_signed(&f, v.into_iter().map(|u| (u, 1)));
        prop_assume!(in_ideal_power(&w, n));
        let specs = pfister_decompose(&IFiltClass::new(w.clone(), n).unwrap()).unwrap();
        let back = theta(&theta_preimage(&specs), &f).unwrap();
        prop_assert!(back.witt().witt_equal(&w).unwrap());
    }

    #[test]
    fn theta_matches_pfister_forms(seed in any::<u64>()) {
        let f = field("GF(2)(t)");
        let v = units(&f, seed, 1);
        let e = MWExpr::Bracket(v[0].clone());
        prop_assert!(theta(&e, &f).unwrap().witt().witt_equal(&pfister_class(&f, &v)).unwrap());
    }
}
