//! Milnor K-theory symbols and the fiber-product groups `J^n(F)`.
//!
//! Integral equality of symbol sums is decided in degrees 0 and 1 (unit-group
//! arithmetic) and over finite fields in every degree. Over characteristic-2
//! function fields in degree `>= 2` equality is certified by rewriting when the
//! difference reduces to zero, refuted modulo 2 through the Milnor map, and
//! otherwise left [`Verdict::Undecided`].

use crate::error::{Error, Result};
use crate::field::{BiPoly, Field, FieldElement};
use crate::witt::{in_ideal_power, membership, pfister_class, IFiltClass, Membership, WittClass};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::fmt;

/// Outcome of an equality test that may be out of reach of the engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Equal,
    NotEqual,
    Undecided,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Equal => "Equal",
            Verdict::NotEqual => "NotEqual",
            Verdict::Undecided => "Undecided",
        })
    }
}

/// `sum c_i {a_i1, ..., a_in}` in `K^M_n(F)`. Degree 0 is `Z` (the empty
/// symbol); negative degrees are zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MilnorSymbolSum {
    field: Field,
    degree: i64,
    terms: BTreeMap<Vec<FieldElement>, i64>,
}

impl MilnorSymbolSum {
    pub fn zero(field: &Field, degree: i64) -> Self {
        MilnorSymbolSum {
            field: field.clone(),
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// The integer `n` in degree 0.
    pub fn integer(field: &Field, n: i64) -> Self {
        Self::from_terms(field, 0, [(Vec::new(), n)]).expect("degree 0")
    }

    pub fn symbol(field: &Field, entries: Vec<FieldElement>) -> Result<Self> {
        let n = entries.len() as i64;
        Self::from_terms(field, n, [(entries, 1)])
    }

    pub fn from_terms(
        field: &Field,
        degree: i64,
        items: impl IntoIterator<Item = (Vec<FieldElement>, i64)>,
    ) -> Result<Self> {
        let mut terms = BTreeMap::new();
        for (s, c) in items {
            if s.len() as i64 != degree {
                return Err(Error::DegreeMismatch(s.len() as i64, degree));
            }
            if let Some(a) = s.iter().find(|a| field.is_zero(a) || !field.contains(a)) {
                return Err(Error::NotAUnit(field.format(a)));
            }
            *terms.entry(s).or_insert(0) += c;
        }
        terms.retain(|_, c| *c != 0);
        Ok(MilnorSymbolSum {
            field: field.clone(),
            degree,
            terms,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Vec<FieldElement>, i64> {
        &self.terms
    }

    pub fn is_formally_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.field.ensure_same(&other.field)?;
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch(self.degree, other.degree));
        }
        Self::from_terms(
            &self.field,
            self.degree,
            self.terms.iter().chain(&other.terms).map(|(s, c)| (s.clone(), *c)),
        )
    }

    pub fn scale(&self, n: i64) -> Self {
        let mut out = self.clone();
        out.terms.values_mut().for_each(|c| *c *= n);
        out.terms.retain(|_, c| *c != 0);
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(-1)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Graded product: concatenation of symbols.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.field.ensure_same(&other.field)?;
        let degree = self.degree + other.degree;
        if self.degree < 0 || other.degree < 0 {
            return Ok(Self::zero(&self.field, degree));
        }
        let items: Vec<_> = self
            .terms
            .iter()
            .flat_map(|(s, c)| {
                other.terms.iter().map(move |(t, d)| {
                    let mut st = s.clone();
                    st.extend(t.iter().cloned());
                    (st, c * d)
                })
            })
            .collect();
        Self::from_terms(&self.field, degree, items)
    }

    /// Image under the Milnor map `s_n` as a Witt class (no certificate).
    pub fn milnor_image(&self) -> WittClass {
        let f = &self.field;
        self.terms.iter().fold(WittClass::zero(f), |acc, (s, c)| {
            acc.add(&pfister_class(f, s).reduced().scale(*c)).expect("same field")
        })
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(s, c)| {
                    json!({
                        "symbol": s.iter().map(|a| self.field.format(a)).collect::<Vec<_>>(),
                        "coefficient": c,
                    })
                })
                .collect(),
        )
    }

    pub fn from_json(field: &Field, degree: i64, v: &Value) -> Result<Self> {
        let items = v
            .as_array()
            .ok_or_else(|| Error::Json("expected an array of {symbol, coefficient}".into()))?
            .iter()
            .map(|item| {
                let s = item["symbol"]
                    .as_array()
                    .ok_or_else(|| Error::Json("missing symbol".into()))?
                    .iter()
                    .map(|x| {
                        x.as_str()
                            .ok_or_else(|| Error::Json("symbol entries are strings".into()))
                            .and_then(|x| field.parse_element(x))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let c = item["coefficient"]
                    .as_i64()
                    .ok_or_else(|| Error::Json("missing coefficient".into()))?;
                Ok((s, c))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_terms(field, degree, items)
    }
}

impl fmt::Display for MilnorSymbolSum {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(out, "0");
        }
        for (k, (s, c)) in self.terms.iter().enumerate() {
            let c = match (k, c.signum()) {
                (0, _) => *c,
                (_, -1) => {
                    write!(out, " - ")?;
                    -c
                }
                _ => {
                    write!(out, " + ")?;
                    *c
                }
            };
            if s.is_empty() {
                write!(out, "{c}")?;
                continue;
            }
            let sym = s.iter().map(|a| self.field.format(a)).collect::<Vec<_>>().join(", ");
            match c {
                1 => write!(out, "{{{sym}}}")?,
                -1 => write!(out, "-{{{sym}}}")?,
                c => write!(out, "{c}{{{sym}}}")?,
            }
        }
        Ok(())
    }
}

/// A rewritten form of a symbol sum, together with how far it can be trusted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MilnorNormalForm {
    /// Degree 0: `K^M_0 = Z`.
    Integer(i64),
    /// Degree 1: `K^M_1 = F^×`, written multiplicatively.
    Unit(FieldElement),
    /// Zero for a structural reason: negative degree, or degree `>= 2` over a
    /// finite field.
    Zero,
    /// Degree `>= 2` over a function field: a combination of symbols in
    /// pairwise coprime irreducible-free atoms. A zero combination proves the
    /// sum is zero; a nonzero one proves nothing.
    Atoms {
        atoms: Vec<FieldElement>,
        terms: BTreeMap<Vec<usize>, i64>,
    },
}

impl MilnorNormalForm {
    /// `Some(true)` when the normal form certifies zero, `Some(false)` when it
    /// certifies a nonzero class, `None` when it cannot tell.
    pub fn is_zero(&self, f: &Field) -> Option<bool> {
        match self {
            MilnorNormalForm::Integer(n) => Some(*n == 0),
            MilnorNormalForm::Unit(u) => Some(f.is_one(u)),
            MilnorNormalForm::Zero => Some(true),
            MilnorNormalForm::Atoms { terms, .. } => terms.is_empty().then_some(true),
        }
    }
}

/// Rewrites `s` by multilinearity and the Steinberg relation.
pub fn milnor_normalize(s: &MilnorSymbolSum) -> Result<MilnorNormalForm> {
    let f = &s.field;
    let n = s.degree;
    if n < 0 {
        return Ok(MilnorNormalForm::Zero);
    }
    if n == 0 {
        return Ok(MilnorNormalForm::Integer(s.terms.values().sum()));
    }
    if n == 1 {
        let mut u = f.one();
        for (sym, c) in &s.terms {
            u = f.mul(&u, &f.pow(&sym[0], *c)?);
        }
        return Ok(MilnorNormalForm::Unit(u));
    }
    if f.is_finite() {
        finite_field_milnor_vanishes(s)?;
        return Ok(MilnorNormalForm::Zero);
    }
    Ok(atom_normal_form(s))
}

/// `K^M_n(F_q) = 0` for `n >= 2` (a classical computation, used here without
/// proof). Cross-checked against the independently decided vanishing of the
/// Milnor-map image, which lies in `I^n(F_q) = 0`.
fn finite_field_milnor_vanishes(s: &MilnorSymbolSum) -> Result<()> {
    for sym in s.terms.keys() {
        if !pfister_class(&s.field, sym).is_zero() {
            return Err(Error::Verification(format!(
                "Milnor image of a degree-{} symbol over {} is nonzero",
                s.degree,
                s.field.name()
            )));
        }
    }
    Ok(())
}

/// Degree `>= 2` over `GF(2^k)(t, u)`. Symbols containing a Steinberg pair
/// `(a, 1 - a)` or `(a, -a)` are dropped; the remaining entries are factored
/// over a gcd-refined coprime base plus the generator of the constants, and
/// expanded multilinearly. In the expansion `{.., x, .., x, ..} = 0`
/// (`{x, x} = {x, -1}` and `-1 = 1`), reordering contributes a sign, and
/// symbols containing the constant generator `g` are reduced modulo the order
/// of `g` since `{g^(q-1), ..} = 0`.
fn atom_normal_form(s: &MilnorSymbolSum) -> MilnorNormalForm {
    let f = &s.field;
    let kept: Vec<(&Vec<FieldElement>, i64)> = s
        .terms
        .iter()
        .filter(|(sym, _)| !has_steinberg_pair(f, sym))
        .map(|(sym, c)| (sym, *c))
        .collect();
    let mut polys: Vec<BiPoly> = Vec::new();
    for (sym, _) in &kept {
        for a in sym.iter() {
            let FieldElement::Rational(r) = a else { unreachable!("function-field element") };
            polys.push(r.num().clone());
            polys.push(r.den().clone());
        }
    }
    let fq = f.fq();
    let base = coprime_base(f, &polys);
    let const_order = (fq.q() - 1) as i64;
    // atom index base.len() is the constant generator
    let gen_atom = base.len();
    let mut terms: BTreeMap<Vec<usize>, i64> = BTreeMap::new();
    for (sym, c) in kept {
        let factored: Vec<Vec<(usize, i64)>> = sym
            .iter()
            .map(|a| {
                let FieldElement::Rational(r) = a else { unreachable!() };
                let (cn, mut en) = factor_over(f, &base, r.num());
                let (cd, ed) = factor_over(f, &base, r.den());
                for (x, y) in en.iter_mut().zip(&ed) {
                    *x -= y;
                }
                let log = (fq.log(cn).unwrap() as i64 - fq.log(cd).unwrap() as i64)
                    .rem_euclid(const_order);
                let mut out: Vec<(usize, i64)> = en
                    .into_iter()
                    .enumerate()
                    .filter(|(_, e)| *e != 0)
                    .collect();
                if log != 0 {
                    out.push((gen_atom, log));
                }
                out
            })
            .collect();
        let mut partial: Vec<(Vec<usize>, i64)> = vec![(Vec::new(), c)];
        for choices in &factored {
            let mut next = Vec::new();
            for (tuple, coeff) in &partial {
                for (atom, e) in choices {
                    if tuple.contains(atom) {
                        continue;
                    }
                    let mut t = tuple.clone();
                    t.push(*atom);
                    next.push((t, coeff * e));
                }
            }
            partial = next;
        }
        for (tuple, coeff) in partial {
            let (sorted, sign) = sort_with_sign(tuple);
            *terms.entry(sorted).or_insert(0) += sign * coeff;
        }
    }
    for (tuple, c) in terms.iter_mut() {
        if tuple.contains(&gen_atom) {
            *c = c.rem_euclid(const_order);
        }
    }
    terms.retain(|_, c| *c != 0);
    let mut atoms: Vec<FieldElement> = base
        .into_iter()
        .map(|p| FieldElement::Rational(crate::field::RatFn::from_poly(p)))
        .collect();
    atoms.push(f.gen_x());
    MilnorNormalForm::Atoms { atoms, terms }
}

fn has_steinberg_pair(f: &Field, sym: &[FieldElement]) -> bool {
    let one = f.one();
    sym.iter().enumerate().any(|(i, a)| {
        f.is_one(a)
            || sym[i + 1..]
                .iter()
                .any(|b| f.add(a, b) == one || f.is_zero(&f.add(a, b)))
    })
}

fn sort_with_sign(mut t: Vec<usize>) -> (Vec<usize>, i64) {
    let mut sign = 1;
    for i in 0..t.len() {
        for j in 0..t.len() - 1 - i {
            if t[j] > t[j + 1] {
                t.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    (t, sign)
}

/// Pairwise coprime monic nonconstant polynomials generating every input
/// multiplicatively up to constants.
fn coprime_base(f: &Field, polys: &[BiPoly]) -> Vec<BiPoly> {
    let fq = f.fq();
    let mut base: Vec<BiPoly> = Vec::new();
    let mut work: Vec<BiPoly> = polys
        .iter()
        .filter(|p| p.as_constant().is_none())
        .map(|p| p.monic(fq))
        .collect();
    'outer: while let Some(p) = work.pop() {
        if p.as_constant().is_some() {
            continue;
        }
        for i in 0..base.len() {
            let g = base[i].gcd(fq, &p);
            if g.as_constant().is_none() {
                let b = base.swap_remove(i);
                work.push(b.div_exact(fq, &g).expect("gcd divides").monic(fq));
                work.push(p.div_exact(fq, &g).expect("gcd divides").monic(fq));
                work.push(g);
                continue 'outer;
            }
        }
        base.push(p);
    }
    base.sort();
    base
}

/// `p = c * prod base_i^(e_i)`; returns `(c, e)`.
fn factor_over(f: &Field, base: &[BiPoly], p: &BiPoly) -> (u32, Vec<i64>) {
    let fq = f.fq();
    let mut rest = p.clone();
    let mut exps = vec![0i64; base.len()];
    for (b, e) in base.iter().zip(exps.iter_mut()) {
        while let Some(q) = rest.div_exact(fq, b) {
            if rest.as_constant().is_some() {
                break;
            }
            rest = q;
            *e += 1;
        }
    }
    let c = rest.as_constant().expect("base generates every input");
    (c, exps)
}

/// Decides `s1 = s2` in `K^M_n(F)` where the engine can.
pub fn milnor_equal(s1: &MilnorSymbolSum, s2: &MilnorSymbolSum) -> Result<Verdict> {
    let diff = s1.sub(s2)?;
    let nf = milnor_normalize(&diff)?;
    Ok(match nf.is_zero(&diff.field) {
        Some(true) => Verdict::Equal,
        Some(false) => Verdict::NotEqual,
        None => {
            if diff.field.is_char2() && !kato_equal(s1, s2)? {
                Verdict::NotEqual
            } else {
                Verdict::Undecided
            }
        }
    })
}

/// Equality in `K^M_n(F)/2`, decided through the Milnor map: the images must
/// agree modulo `I^{n+1}`. Characteristic 2 only.
pub fn kato_equal(s1: &MilnorSymbolSum, s2: &MilnorSymbolSum) -> Result<bool> {
    if !s1.field.is_char2() {
        return Err(Error::Unsupported(
            "characteristic 2 for the mod-2 comparison; use milnor_equal".into(),
        ));
    }
    let diff = s1.sub(s2)?;
    Ok(in_ideal_power(&diff.milnor_image(), diff.degree + 1))
}

/// A pair `(m, w)` in `J^n(F) = K^M_n(F) ×_{i^n(F)} I^n(F)`.
#[derive(Debug, Clone)]
pub struct JElement {
    milnor: MilnorSymbolSum,
    witt: IFiltClass,
    certificate: Membership,
}

/// Builds `(m, w)` after checking `w - s_n(m) ∈ I^{n+1}`.
pub fn j_make(m: MilnorSymbolSum, w: IFiltClass) -> Result<JElement> {
    m.field.ensure_same(w.field())?;
    let n = m.degree;
    if w.degree() != n {
        return Err(Error::DegreeMismatch(n, w.degree()));
    }
    let diff = w.class().sub(&m.milnor_image())?;
    let certificate = membership(&diff, n + 1).ok_or_else(|| {
        Error::Membership(format!(
            "witt part minus the Milnor image, {diff}, is not in I^{}",
            n + 1
        ))
    })?;
    Ok(JElement {
        milnor: m,
        witt: w,
        certificate,
    })
}

impl JElement {
    pub fn zero(field: &Field, degree: i64) -> Self {
        j_make(MilnorSymbolSum::zero(field, degree), IFiltClass::zero(field, degree))
            .expect("zero is compatible")
    }

    pub fn degree(&self) -> i64 {
        self.milnor.degree
    }

    pub fn field(&self) -> &Field {
        &self.milnor.field
    }

    pub fn milnor(&self) -> &MilnorSymbolSum {
        &self.milnor
    }

    pub fn witt(&self) -> &IFiltClass {
        &self.witt
    }

    pub fn certificate(&self) -> &Membership {
        &self.certificate
    }

    /// Re-checks both stored certificates.
    pub fn verify(&self) -> bool {
        let n = self.degree();
        self.witt.verify()
            && self
                .witt
                .class()
                .sub(&self.milnor.milnor_image())
                .is_ok_and(|d| self.certificate.verify(&d, n + 1))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "degree": self.degree(),
            "milnor": self.milnor.to_json(),
            "witt": self.witt.to_json(),
        })
    }
}

impl fmt::Display for JElement {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "({}, {})", self.milnor, self.witt.class())
    }
}

pub fn j_add(a: &JElement, b: &JElement) -> Result<JElement> {
    j_make(a.milnor.add(&b.milnor)?, a.witt.add(&b.witt)?)
}

pub fn j_mul(a: &JElement, b: &JElement) -> Result<JElement> {
    j_make(a.milnor.mul(&b.milnor)?, a.witt.mul(&b.witt)?)
}

/// Multiplication by `η`: `(m, w) ↦ (0, w)` one degree lower.
pub fn eta_act(j: &JElement) -> Result<JElement> {
    let n = j.degree() - 1;
    j_make(MilnorSymbolSum::zero(j.field(), n), j.witt.lower())
}
