use super::{Case, Identity};
use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::forms::{DiagonalForm, PfisterSpec};
use crate::kmw::{localize_eta, monomial_expand, normalize, normalize_in_degree, phi_neg, psi, theta, theta_preimage, CanonicalKMW, MWExpr};
use crate::symbols::{kato_equal, milnor_equal, milnor_normalize, MilnorNormalForm, MilnorSymbolSum, Verdict};
use crate::witt::{chain_equiv_search, gw_equal, in_ideal_power, pfister_decompose, ChainBudget, GWElement, IFiltClass, WittClass};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

type Lets = Vec<(String, FieldElement)>;

pub(super) fn identities(suite: &str, f: &Field) -> Result<Vec<Identity>> {
    Ok(match suite {
        "relations" => relations(),
        "lemma1" => lemma1(),
        "lemma2" => lemma2(),
        "puissances" => puissances(),
        "gw" => gw(),
        "prop_iso" => prop_iso(f),
        "kw_char2" => {
            require_char2(f, suite)?;
            kw_char2()
        }
        "theta" => theta_suite(f),
        "kato" => {
            require_char2(f, suite)?;
            kato(f)?
        }
        "vanishing" => vanishing(f)?,
        "cartesian" => cartesian(f),
        "localize" => localize(),
        other => return Err(Error::UnknownSuite(other.to_string())),
    })
}

fn require_char2(f: &Field, suite: &str) -> Result<()> {
    if f.is_char2() {
        Ok(())
    } else {
        Err(Error::Unsupported(format!("a characteristic-2 field for suite {suite}")))
    }
}

fn draw(f: &Field, rng: &mut ChaCha8Rng, names: &[&str]) -> Lets {
    names.iter().map(|n| (n.to_string(), f.random_unit(rng))).collect()
}

fn values(lets: &Lets) -> Vec<FieldElement> {
    lets.iter().map(|(_, v)| v.clone()).collect()
}

/// `lhs = rhs` in `K^MW` for units named in `vars`.
fn kmw(name: &str, vars: &'static [&'static str], lhs: &'static str, rhs: &'static str) -> Identity {
    Identity::new(name, move |f, rng, _| Ok(Some(Case::kmw(draw(f, rng, vars), lhs, rhs))))
}

/// As [`kmw`], redrawing until `cond` holds.
fn kmw_if(
    name: &str,
    vars: &'static [&'static str],
    cond: fn(&Field, &[FieldElement]) -> bool,
    lhs: &'static str,
    rhs: &'static str,
) -> Identity {
    Identity::new(name, move |f, rng, _| {
        let lets = draw(f, rng, vars);
        Ok(cond(f, &values(&lets)).then(|| Case::kmw(lets, lhs, rhs)))
    })
}

fn kw(name: &str, vars: &'static [&'static str], lhs: &'static str, rhs: &'static str) -> Identity {
    Identity::new(name, move |f, rng, _| Ok(Some(Case::kw(draw(f, rng, vars), lhs, rhs))))
}

fn not_one(f: &Field, v: &[FieldElement]) -> bool {
    !f.is_one(&v[0])
}

fn sum_nonzero(f: &Field, v: &[FieldElement]) -> bool {
    !f.is_zero(&f.add(&v[0], &v[1]))
}

/// Each defining relation as `(name, variables, side condition, lhs, rhs)`.
type Relation = (&'static str, &'static [&'static str], fn(&Field, &[FieldElement]) -> bool, &'static str, &'static str);

const RELATIONS: [Relation; 4] = [
    ("Steinberg [a][1-a] = 0", &["a"], not_one, "[a][1 - a]", "0"),
    ("twisted additivity [ab] = [a] + [b] + eta[a][b]", &["a", "b"], |_, _| true, "[a b]", "[a] + [b] + eta [a][b]"),
    ("eta commutes eta[a] = [a]eta", &["a"], |_, _| true, "eta [a]", "[a] eta"),
    ("eta h = 0", &[], |_, _| true, "eta (eta [-1] + 2)", "0"),
];

/// Short labels of [`RELATIONS`], for names of derived identities.
const RELATION_LABELS: [&str; 4] = ["Steinberg", "twisted additivity", "eta commutation", "eta h"];

/// Only the Steinberg relation has a side condition unsatisfiable over GF(2).
fn relation_identity(rel: &Relation, id: Identity) -> Identity {
    if rel.1.is_empty() || rel.0 != RELATIONS[0].0 { id } else { id.beyond_gf2() }
}

fn relations() -> Vec<Identity> {
    let mut out: Vec<Identity> = RELATIONS
        .iter()
        .map(|rel| relation_identity(rel, kmw_if(rel.0, rel.1, rel.2, rel.3, rel.4)))
        .collect();
    out.push(kmw("eps^2 = 1", &[], "eps eps", "1"));
    out.push(kmw("eps eta = eta", &[], "eps eta", "eta"));
    out
}

fn lemma1() -> Vec<Identity> {
    vec![
        kmw("[ab] = [a] + <a>[b]", &["a", "b"], "[a b]", "[a] + <a>[b]"),
        kmw("[ab] = [a]<b> + [b]", &["a", "b"], "[a b]", "[a]<b> + [b]"),
        kmw("<ab> = <a><b>", &["a", "b"], "<a b>", "<a><b>"),
        kmw("<a>[b] = [b]<a>", &["a", "b"], "<a>[b]", "[b]<a>"),
        kmw("<1> = 1", &[], "<1>", "1"),
        kmw("[1] = 0", &[], "[1]", "0"),
        kmw("<a><a^-1> = 1", &["a"], "<a><a^-1>", "1"),
        kmw("[a/b] = [a] - <a/b>[b]", &["a", "b"], "[a/b]", "[a] - <a/b>[b]"),
        kmw("[a^-1] = -<a^-1>[a]", &["a"], "[a^-1]", "-<a^-1>[a]"),
    ]
}

fn lemma2() -> Vec<Identity> {
    vec![
        kmw("[a][-a] = 0", &["a"], "[a][-a]", "0"),
        kmw("[a][a] = [a][-1]", &["a"], "[a][a]", "[a][-1]"),
        kmw("[a][-1] = eps[a][-1]", &["a"], "[a][-1]", "eps [a][-1]"),
        kmw("[a][-1] = [-1][a]", &["a"], "[a][-1]", "[-1][a]"),
        kmw("[-1][a] = eps[-1][a]", &["a"], "[-1][a]", "eps [-1][a]"),
        kmw("<a^2> = 1", &["a"], "<a^2>", "1"),
        kmw("<a> + <-a> = h", &["a"], "<a> + <-a>", "h"),
        kmw("[a][b] = eps[b][a]", &["a", "b"], "[a][b]", "eps [b][a]"),
    ]
}

fn puissances() -> Vec<Identity> {
    vec![Identity::new("[a^n] = n_eps [a], n in [-5, 5]", |f, rng, case| {
        let n = (case % 11) as i64 - 5;
        let lets = draw(f, rng, &["a"]);
        Ok(Some(Case::kmw(lets, format!("[a^({n})]"), format!("n_eps({n}) [a]"))))
    })]
}

fn gw_of(f: &Field, items: &[FieldElement]) -> Result<GWElement> {
    GWElement::from_terms(f, items.iter().map(|u| (u.clone(), 1)))
}

fn gw() -> Vec<Identity> {
    vec![
        kmw("<ab^2> = <a>", &["a", "b"], "<a b^2>", "<a>"),
        kmw("<a> + <-a> = 1 + <-1>", &["a"], "<a> + <-a>", "1 + <-1>"),
        kmw_if("<a> + <b> = <a+b> + <(a+b)ab>", &["a", "b"], sum_nonzero, "<a> + <b>", "<a + b> + <(a + b) a b>").beyond_gf2(),
        Identity::new("<a> + <b> = <a+b> + <(a+b)ab> in GW arithmetic", |f, rng, _| {
            let lets = draw(f, rng, &["a", "b"]);
            let v = values(&lets);
            let s = f.add(&v[0], &v[1]);
            if f.is_zero(&s) {
                return Ok(None);
            }
            let d = f.mul(&s, &f.mul(&v[0], &v[1]));
            let ok = gw_equal(&gw_of(f, &v)?, &gw_of(f, &[s, d])?)?;
            Ok(Some(Case::holds(lets, ok, "gw_equal: true", ok.to_string())))
        })
        .beyond_gf2(),
        Identity::new("<a> + <-a> = 1 + <-1> in GW arithmetic", |f, rng, _| {
            let lets = draw(f, rng, &["a"]);
            let a = &lets[0].1;
            let m1 = f.neg(&f.one());
            let ok = gw_equal(&gw_of(f, &[a.clone(), f.neg(a)])?, &gw_of(f, &[f.one(), m1])?)?;
            Ok(Some(Case::holds(lets, ok, "gw_equal: true", ok.to_string())))
        }),
    ]
}

fn random_witt(f: &Field, rng: &mut ChaCha8Rng) -> WittClass {
    let rank = rng.gen_range(1..=3);
    let items: Vec<(FieldElement, i64)> = (0..rank)
        .map(|_| (f.random_unit(rng), if rng.gen_bool(0.7) { 1 } else { -1 }))
        .collect();
    WittClass::from_signed(f, items)
}

fn prop_iso(f: &Field) -> Vec<Identity> {
    let mut out: Vec<Identity> = (1..=3u32)
        .map(|n| {
            Identity::new(format!("phi_-{n} then normalize is the identity"), move |f, rng, _| {
                let w = random_witt(f, rng);
                let e = phi_neg(&w, n);
                let c = normalize_in_degree(&e, f, Some(-(n as i64)))?;
                let ok = c.witt().witt_equal(&w)?;
                let lets = w.anisotropic().iter().enumerate().map(|(i, u)| (format!("w{i}"), u.clone())).collect();
                Ok(Some(Case::holds(lets, ok, format!("W class {w}"), format!("{}", c.witt()))))
            })
        })
        .collect();
    out.push(Identity::new("eta^n<u> distinguishes Witt classes", |f, rng, _| {
        let lets = draw(f, rng, &["a", "b"]);
        let v = values(&lets);
        let n = rng.gen_range(1..=3u32);
        let ea = phi_neg(&WittClass::angle(f, &v[0]), n);
        let eb = phi_neg(&WittClass::angle(f, &v[1]), n);
        let got = crate::kmw::kmw_equal(&ea, &eb, f)?;
        let expected = if f.same_square_class(&v[0], &v[1]) { Verdict::Equal } else { Verdict::NotEqual };
        Ok(Some(Case::holds(lets, got == expected, expected.to_string(), got.to_string())))
    }));
    if f.is_finite() && f.is_char2() {
        // every unit is a square
        out.push(kmw("eta[a] = 0 when every unit is a square", &["a"], "eta [a]", "0"));
        out.push(kmw("2 eta = 0 when every unit is a square", &[], "2 eta", "0"));
    }
    out
}

fn kw_char2() -> Vec<Identity> {
    vec![
        kw("h = 2", &[], "h", "2"),
        kmw("h = 2 in K^MW", &[], "h", "2"),
        kw("eps = -1", &[], "eps", "-1"),
        kmw("eps = -1 in K^MW", &[], "eps", "-1"),
        kw("[a]^2 = 0", &["a"], "[a]^2", "0"),
        kmw("[a]^2 = 0 in K^MW", &["a"], "[a]^2", "0"),
        Identity::new("n_eps = n", |f, rng, case| {
            let n = (case % 11) as i64 - 5;
            let lets = draw(f, rng, &["a"]);
            Ok(Some(Case::kmw(lets, format!("n_eps({n}) [a]"), format!("({n}) [a]"))))
        }),
        kw("[a^2] = 0", &["a"], "[a^2]", "0"),
        kw("[a^2 b] = [b]", &["a", "b"], "[a^2 b]", "[b]"),
        kw("[a] + [-a] = [1] + [-1]", &["a"], "[a] + [-a]", "[1] + [-1]"),
        Identity::new("[a] + [b] = [a+b] + [ab(a+b)]", |f, rng, _| {
            let lets = draw(f, rng, &["a", "b"]);
            Ok(sum_nonzero(f, &values(&lets)).then(|| Case::kw(lets, "[a] + [b]", "[a + b] + [a b (a + b)]")))
        })
        .beyond_gf2(),
        kw("product rewrite [a][b] = [a][ab]", &["a", "b"], "[a][b]", "[a][a b]"),
        Identity::new("product rewrite [a][b] = [a][bc], c = p^2 + q^2 a", |f, rng, _| {
            let mut lets = draw(f, rng, &["a", "b"]);
            lets.push(("p".into(), f.random_element(rng)));
            lets.push(("q".into(), f.random_element(rng)));
            let v = values(&lets);
            let c = f.add(&f.square(&v[2]), &f.mul(&f.square(&v[3]), &v[0]));
            Ok((!f.is_zero(&c)).then(|| Case::kw(lets, "[a][b]", "[a][b (p^2 + q^2 a)]")))
        }),
        Identity::new("product rewrite [a][b] = [ab][c], c = p^2 a + q^2 b", |f, rng, _| {
            let mut lets = draw(f, rng, &["a", "b"]);
            lets.push(("p".into(), f.random_element(rng)));
            lets.push(("q".into(), f.random_element(rng)));
            let v = values(&lets);
            let c = f.add(&f.mul(&f.square(&v[2]), &v[0]), &f.mul(&f.square(&v[3]), &v[1]));
            Ok((!f.is_zero(&c)).then(|| Case::kw(lets, "[a][b]", "[a b][p^2 a + q^2 b]")))
        }),
    ]
}

/// A random monomial `η^m [m_1]⋯[m_r]` with `m, r <= 2`, its bindings and text.
fn random_monomial(f: &Field, rng: &mut ChaCha8Rng, tag: &str) -> (Lets, String) {
    let m = rng.gen_range(0..=2);
    let r = rng.gen_range(0..=2);
    let lets: Lets = (0..r).map(|i| (format!("{tag}{i}"), f.random_unit(rng))).collect();
    let mut text = match m {
        0 => "1".to_string(),
        1 => "eta".to_string(),
        k => format!("eta^{k}"),
    };
    for (n, _) in &lets {
        text.push_str(&format!(" [{n}]"));
    }
    (lets, text)
}

/// Draws bindings for a relation, respecting its side condition.
fn relation_instance(f: &Field, rng: &mut ChaCha8Rng, rel: &Relation) -> Option<Lets> {
    let (_, vars, cond, _, _) = *rel;
    let lets = draw(f, rng, vars);
    cond(f, &values(&lets)).then_some(lets)
}

fn theta_suite(f: &Field) -> Vec<Identity> {
    let mut out: Vec<Identity> = RELATIONS
        .iter()
        .enumerate()
        .map(|(k, _)| {
            let id = Identity::new(format!("theta kills {} times monomials", RELATION_LABELS[k]), move |f, rng, _| {
                let rel = &RELATIONS[k];
                let Some(mut lets) = relation_instance(f, rng, rel) else { return Ok(None) };
                let (l1, left) = random_monomial(f, rng, "l");
                let (l2, right) = random_monomial(f, rng, "r");
                lets.extend(l1);
                lets.extend(l2);
                let text = format!("{left} (({}) - ({})) {right}", rel.3, rel.4);
                let e = crate::kmw::parse(&text, f, &lets)?;
                let t = theta(&e, f)?;
                Ok(Some(Case::holds(lets, t.is_zero(), format!("theta({text}) = 0"), t.to_string())))
            });
            relation_identity(&RELATIONS[k], id)
        })
        .collect();
    out.push(Identity::new("theta kills h times monomials", |f, rng, _| {
        let (lets, mono) = random_monomial(f, rng, "m");
        let text = format!("{mono} h");
        let t = theta(&crate::kmw::parse(&text, f, &lets)?, f)?;
        Ok(Some(Case::holds(lets, t.is_zero(), format!("theta({text}) = 0"), t.to_string())))
    }));
    if f.is_char2() {
        out.push(Identity::new("theta[a] = <<a>> and back", |f, rng, _| {
            let lets = draw(f, rng, &["a"]);
            let a = lets[0].1.clone();
            let t = theta(&MWExpr::Bracket(a.clone()), f)?;
            let form = WittClass::from_form(&DiagonalForm::new(f, vec![f.one(), a.clone()])?);
            let forward = t.degree() == 1 && t.witt().witt_equal(&form)?;
            // <<a>> back to K^W_1 through its Pfister decomposition
            let specs = pfister_decompose(&IFiltClass::new(form.clone(), 1)?)?;
            let pre = theta_preimage(&specs);
            let ok = forward
                && crate::kmw::kw_equal(&pre, &MWExpr::Bracket(a), f)?
                && theta(&pre, f)?.witt().witt_equal(&form)?;
            Ok(Some(Case::holds(lets, ok, "round trip holds", ok.to_string())))
        }));
        for n in 1..=2i64 {
            out.push(Identity::new(format!("theta surjects onto I^{n}"), move |f, rng, _| {
                let w = random_member(f, rng, n);
                if !in_ideal_power(&w, n) {
                    return Ok(None);
                }
                let specs = pfister_decompose(&IFiltClass::new(w.clone(), n)?)?;
                let back = theta(&theta_preimage(&specs), f)?;
                let ok = back.witt().witt_equal(&w)?;
                let lets = w.diagonal_entries().into_iter().enumerate().map(|(i, u)| (format!("w{i}"), u)).collect();
                Ok(Some(Case::holds(lets, ok, format!("{w}"), back.to_string())))
            }));
        }
    }
    out
}

/// A random even-rank diagonal; for `n >= 2` the last entry is adjusted half
/// the time so that the discriminant is a square.
fn random_member(f: &Field, rng: &mut ChaCha8Rng, n: i64) -> WittClass {
    let rank = 2 * rng.gen_range(1..=2);
    let mut entries: Vec<FieldElement> = (0..rank).map(|_| f.random_unit(rng)).collect();
    if n >= 2 && rng.gen_bool(0.5) {
        let rest = f.product(entries[..rank - 1].iter());
        let s = f.random_unit(rng);
        entries[rank - 1] = f.mul(&rest, &f.square(&s));
    }
    WittClass::from_signed(f, entries.into_iter().map(|u| (u, 1)))
}

fn symbol(f: &Field, xs: &[FieldElement]) -> Result<MilnorSymbolSum> {
    MilnorSymbolSum::symbol(f, xs.to_vec())
}

/// The least `n` with `I^n(F) = 0`: `2^n > [F : F^2]` in characteristic 2,
/// and 2 for finite fields of odd order.
fn vanishing_degree(f: &Field) -> Result<usize> {
    if f.is_char2() {
        Ok((0..).find(|n| 1usize << n > f.square_degree()).unwrap())
    } else if f.is_finite() {
        Ok(2)
    } else {
        Err(Error::Unsupported("a finite field or a characteristic-2 function field".into()))
    }
}

fn kato(f: &Field) -> Result<Vec<Identity>> {
    let bound = vanishing_degree(f)?;
    Ok(vec![
        Identity::new("s_1 separates square classes", |f, rng, _| {
            let mut lets = draw(f, rng, &["a", "b"]);
            if rng.gen_bool(0.5) {
                lets[1].1 = f.mul(&lets[0].1, &f.square(&lets[1].1));
            }
            let v = values(&lets);
            let got = kato_equal(&symbol(f, &v[..1])?, &symbol(f, &v[1..])?)?;
            let expected = f.same_square_class(&v[0], &v[1]);
            Ok(Some(Case::holds(lets, got == expected, expected.to_string(), got.to_string())))
        }),
        Identity::new("Steinberg symbols vanish", |f, rng, _| {
            let lets = draw(f, rng, &["a"]);
            let a = &lets[0].1;
            if f.is_one(a) {
                return Ok(None);
            }
            let s = symbol(f, &[a.clone(), f.sub(&f.one(), a)])?;
            let zero = MilnorSymbolSum::zero(f, 2);
            let ok = kato_equal(&s, &zero)? && milnor_equal(&s, &zero)? == Verdict::Equal;
            Ok(Some(Case::holds(lets, ok, "zero mod 2 and integrally", ok.to_string())))
        })
        .beyond_gf2(),
        Identity::new("rewritten sums agree: {ab, c} = {a, c} + {b, c}", |f, rng, _| {
            let lets = draw(f, rng, &["a", "b", "c"]);
            let v = values(&lets);
            let lhs = symbol(f, &[f.mul(&v[0], &v[1]), v[2].clone()])?;
            let rhs = symbol(f, &[v[0].clone(), v[2].clone()])?.add(&symbol(f, &[v[1].clone(), v[2].clone()])?)?;
            let integral = milnor_equal(&lhs, &rhs)?;
            let ok = integral == Verdict::Equal && kato_equal(&lhs, &rhs)?;
            Ok(Some(Case::holds(lets, ok, "Equal and equal mod 2", format!("{integral}"))))
        }),
        Identity::new("mod-2 comparison is symmetric", |f, rng, _| {
            let lets = draw(f, rng, &["a", "b", "c", "d"]);
            let v = values(&lets);
            let s1 = symbol(f, &v[..2])?;
            let s2 = symbol(f, &v[2..])?;
            let ok = kato_equal(&s1, &s2)? == kato_equal(&s2, &s1)? && kato_equal(&s1, &s1)?;
            Ok(Some(Case::holds(lets, ok, "symmetric and reflexive", ok.to_string())))
        }),
        Identity::new(format!("degree-{bound} symbols vanish mod 2"), move |f, rng, _| {
            let names: Vec<String> = (0..bound).map(|i| format!("a{i}")).collect();
            let lets: Lets = names.iter().map(|n| (n.clone(), f.random_unit(rng))).collect();
            let s = symbol(f, &values(&lets))?;
            let ok = kato_equal(&s, &MilnorSymbolSum::zero(f, bound as i64))?;
            Ok(Some(Case::holds(lets, ok, "true", ok.to_string())))
        }),
    ])
}

fn vanishing(f: &Field) -> Result<Vec<Identity>> {
    let n = vanishing_degree(f)?;
    let mut out = vec![
        Identity::new(format!("K^W_{n} products vanish through theta"), move |f, rng, _| {
            let lets: Lets = (0..n).map(|i| (format!("a{i}"), f.random_unit(rng))).collect();
            let e = MWExpr::Product(values(&lets).into_iter().map(MWExpr::Bracket).collect());
            let t = theta(&e, f)?;
            Ok(Some(Case::holds(lets, t.is_zero(), "0", t.to_string())))
        }),
        Identity::new(format!("{n}-fold Pfister forms are metabolic"), move |f, rng, _| {
            let lets: Lets = (0..n).map(|i| (format!("a{i}"), f.random_unit(rng))).collect();
            let form = PfisterSpec::new(f, values(&lets))?.pfister();
            let d = form.witt_decompose();
            let ok = d.anisotropic.rank() == 0;
            Ok(Some(Case::holds(lets, ok, "anisotropic rank 0", format!("anisotropic rank {}", d.anisotropic.rank()))))
        }),
    ];
    if f.is_finite() {
        out.push(Identity::new(format!("K^M_{} of a finite field vanishes", n.max(2)), move |f, rng, _| {
            let k = n.max(2);
            let lets: Lets = (0..k).map(|i| (format!("a{i}"), f.random_unit(rng))).collect();
            let nf = milnor_normalize(&symbol(f, &values(&lets))?)?;
            let ok = nf == MilnorNormalForm::Zero;
            Ok(Some(Case::holds(lets, ok, "Zero", format!("{nf:?}"))))
        }));
    }
    Ok(out)
}

/// `t` rewritten by a few random instances of the defining relations of `GW`.
fn rewrite(f: &Field, rng: &mut ChaCha8Rng, mut t: Vec<FieldElement>) -> Vec<FieldElement> {
    for _ in 0..rng.gen_range(1..=3) {
        let i = rng.gen_range(0..t.len());
        let j = rng.gen_range(0..t.len());
        if i != j && rng.gen_bool(0.6) {
            let s = f.add(&t[i], &t[j]);
            if !f.is_zero(&s) {
                let d = f.mul(&s, &f.mul(&t[i], &t[j]));
                t[i] = s;
                t[j] = d;
            }
        } else {
            t[i] = f.mul(&t[i], &f.square(&f.random_unit(rng)));
        }
    }
    t
}

fn random_pair(f: &Field, rng: &mut ChaCha8Rng, max_rank: usize) -> (Vec<FieldElement>, Vec<FieldElement>) {
    let r1 = rng.gen_range(1..=max_rank);
    let t1: Vec<FieldElement> = (0..r1).map(|_| f.random_unit(rng)).collect();
    let t2 = if rng.gen_bool(0.5) {
        rewrite(f, rng, t1.clone())
    } else {
        let r2 = if rng.gen_bool(0.7) { r1 } else { rng.gen_range(1..=max_rank) };
        (0..r2).map(|_| f.random_unit(rng)).collect()
    };
    (t1, t2)
}

fn pair_lets(t1: &[FieldElement], t2: &[FieldElement]) -> Lets {
    t1.iter()
        .enumerate()
        .map(|(i, u)| (format!("x{i}"), u.clone()))
        .chain(t2.iter().enumerate().map(|(i, u)| (format!("y{i}"), u.clone())))
        .collect()
}

fn cartesian(f: &Field) -> Vec<Identity> {
    let mut out = vec![
        Identity::new("gw_equal iff ranks and Witt classes agree", |f, rng, _| {
            let (t1, t2) = random_pair(f, rng, 3);
            let got = gw_equal(&gw_of(f, &t1)?, &gw_of(f, &t2)?)?;
            let w1 = WittClass::from_form(&DiagonalForm::new(f, t1.clone())?);
            let w2 = WittClass::from_form(&DiagonalForm::new(f, t2.clone())?);
            let expected = t1.len() == t2.len() && w1.witt_equal(&w2)?;
            Ok(Some(Case::holds(pair_lets(&t1, &t2), got == expected, expected.to_string(), got.to_string())))
        }),
        Identity::new("relation rewrites preserve the GW class", |f, rng, _| {
            let r = rng.gen_range(1..=3);
            let t1: Vec<FieldElement> = (0..r).map(|_| f.random_unit(rng)).collect();
            let t2 = rewrite(f, rng, t1.clone());
            let ok = gw_equal(&gw_of(f, &t1)?, &gw_of(f, &t2)?)?;
            Ok(Some(Case::holds(pair_lets(&t1, &t2), ok, "true", ok.to_string())))
        }),
        Identity::new("psi lands in J^n", |f, rng, _| {
            let n = rng.gen_range(1..=2);
            let terms = rng.gen_range(1..=3);
            let mut lets = Lets::new();
            let mut parts = Vec::new();
            for k in 0..terms {
                let m = rng.gen_range(0..=1);
                let mut factors = vec![MWExpr::Eta; m];
                for i in 0..n + m {
                    let u = f.random_unit(rng);
                    lets.push((format!("a{k}{i}"), u.clone()));
                    factors.push(MWExpr::Bracket(u));
                }
                parts.push(MWExpr::Product(factors));
            }
            let sum = monomial_expand(&MWExpr::Sum(parts), f).homogeneous(Some(n as i64))?;
            let ok = psi(&sum)?.verify();
            Ok(Some(Case::holds(lets, ok, "certified pair", ok.to_string())))
        }),
        Identity::new("degree-0 rank parity matches the Witt class", |f, rng, _| {
            let lets = draw(f, rng, &["a", "b", "c"]);
            let k = rng.gen_range(0..4);
            let text = format!("{k} + <a> - <b><c> + eta [a]");
            let c = normalize(&crate::kmw::parse(&text, f, &lets)?, f)?;
            let CanonicalKMW::Zero(gw) = &c else {
                return Ok(Some(Case::holds(lets, false, "degree 0", c.to_string())));
            };
            let ok = gw.rank.rem_euclid(2) as u8 == gw.witt.rank_parity() && gw.rank == k as i64;
            Ok(Some(Case::holds(lets, ok, format!("rank {k} with matching parity"), c.to_string())))
        }),
    ];
    if f.is_finite() {
        out.push(Identity::new("GW of a finite field: rank and discriminant", |f, rng, _| {
            let (t1, t2) = random_pair(f, rng, 3);
            let got = gw_equal(&gw_of(f, &t1)?, &gw_of(f, &t2)?)?;
            let disc = f.same_square_class(&f.product(t1.iter()), &f.product(t2.iter()));
            let expected = t1.len() == t2.len() && (f.is_char2() || disc);
            Ok(Some(Case::holds(pair_lets(&t1, &t2), got == expected, expected.to_string(), got.to_string())))
        }));
    }
    if matches!(f.order(), Some(3 | 5)) {
        out.push(Identity::new("chain witnesses for equal classes", |f, rng, _| {
            let r = rng.gen_range(1..=3);
            let t1: Vec<FieldElement> = (0..r).map(|_| f.random_unit(rng)).collect();
            let t2: Vec<FieldElement> = (0..r).map(|_| f.random_unit(rng)).collect();
            let equal = gw_equal(&gw_of(f, &t1)?, &gw_of(f, &t2)?)?;
            let path = chain_equiv_search(f, &t1, &t2, ChainBudget::default())?;
            let got = match &path {
                Some(p) if p.verify(f)? => "verified path",
                Some(_) => "unverified path",
                None => "no path",
            };
            let expected = if equal { "verified path" } else { "no path" };
            Ok(Some(Case::holds(pair_lets(&t1, &t2), got == expected, expected, got)))
        }));
    }
    out
}

fn random_expr(f: &Field, rng: &mut ChaCha8Rng, depth: u32) -> MWExpr {
    let leaf = |rng: &mut ChaCha8Rng| match rng.gen_range(0..5) {
        0 => MWExpr::Bracket(f.random_unit(rng)),
        1 => MWExpr::Eta,
        2 => MWExpr::Int(rng.gen_range(0..4)),
        3 => MWExpr::Angle(f.random_unit(rng)),
        _ => MWExpr::H,
    };
    if depth == 0 {
        return leaf(rng);
    }
    match rng.gen_range(0..4) {
        0 => MWExpr::Sum((0..2).map(|_| random_expr(f, rng, depth - 1)).collect()),
        1 => MWExpr::Product((0..2).map(|_| random_expr(f, rng, depth - 1)).collect()),
        2 => random_expr(f, rng, depth - 1).negated(),
        _ => leaf(rng),
    }
}

fn localize() -> Vec<Identity> {
    let mut out = vec![
        Identity::new("localization is multiplicative", |f, rng, _| {
            let a = random_expr(f, rng, 2);
            let b = random_expr(f, rng, 2);
            let lhs = localize_eta(&a.clone().times(b.clone()), f)?;
            let rhs = localize_eta(&a, f)?.mul(&localize_eta(&b, f)?)?;
            let ok = lhs.equals(&rhs)?;
            let expected = format!("({}) ({})", a.to_text(f), b.to_text(f));
            Ok(Some(Case::holds(Vec::new(), ok, expected, format!("{lhs} vs {rhs}"))))
        }),
        Identity::new("[u] maps to t^-1(<u> - 1)", |f, rng, _| {
            let lets = draw(f, rng, &["a"]);
            let a = &lets[0].1;
            let l = localize_eta(&MWExpr::Bracket(a.clone()), f)?;
            let ok = l.coeff(-1).witt_equal(&WittClass::angle_minus_one(f, a))?
                && l.support().iter().all(|&k| k == -1);
            Ok(Some(Case::holds(lets, ok, "t^-1 (<a> - 1)", l.to_string())))
        }),
        Identity::new("h maps to 0", |f, _, _| {
            let l = localize_eta(&MWExpr::H, f)?;
            Ok(Some(Case::holds(Vec::new(), l.is_zero(), "0", l.to_string())))
        }),
    ];
    for (k, _) in RELATIONS.iter().enumerate() {
        let id = Identity::new(format!("localization kills {}", RELATION_LABELS[k]), move |f, rng, _| {
            let rel = &RELATIONS[k];
            let Some(lets) = relation_instance(f, rng, rel) else { return Ok(None) };
            let text = format!("({}) - ({})", rel.3, rel.4);
            let l = localize_eta(&crate::kmw::parse(&text, f, &lets)?, f)?;
            Ok(Some(Case::holds(lets, l.is_zero(), "0", l.to_string())))
        });
        out.push(relation_identity(&RELATIONS[k], id));
    }
    out
}
