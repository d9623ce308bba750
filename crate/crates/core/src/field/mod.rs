//! Exact coefficient fields: GF(p^k) and the characteristic-2 function
//! fields GF(2^k)(t) and GF(2^k)(t,u), together with the square-theory
//! decision procedures the rest of the crate relies on.

mod finite;
pub(crate) mod linalg;
mod parse;
mod poly;
mod ratfunc;

use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;
use std::sync::Arc;

pub use finite::Fq;
pub use poly::BiPoly;
pub use ratfunc::RatFn;

/// Default bound on the total degree of numerator and denominator of random
/// function-field elements.
pub const DEFAULT_DEGREE_BOUND: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldKind {
    Prime,
    Galois,
    RationalFunction,
}

/// A parsed or structured field description.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSpec {
    pub kind: FieldKind,
    pub p: u64,
    pub k: u32,
    /// Monic modulus of the (coefficient) extension, lowest degree first.
    pub modulus: Option<Vec<u32>>,
    pub vars: Vec<String>,
}

impl FieldSpec {
    /// Parses `GF(q)`, `GF(p^k)`, an optional `; modulus` suffix such as
    /// `GF(9; x^2+1)`, and the function-field forms `GF(2^k)(t)` / `GF(2^k)(t,u)`.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = |why: &str| Error::FieldSpec(text.to_string(), why.to_string());
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let rest = s
            .strip_prefix("GF(")
            .or_else(|| s.strip_prefix("F("))
            .ok_or_else(|| bad("expected `GF(`"))?;
        let close = rest.find(')').ok_or_else(|| bad("missing `)`"))?;
        let inner = &rest[..close];
        let tail = &rest[close + 1..];
        let (order, modulus_text) = match inner.split_once(';') {
            Some((o, m)) => (o, Some(m)),
            None => (inner, None),
        };
        let (p, k) = match order.split_once('^') {
            Some((p, k)) => {
                let p: u64 = p.parse().map_err(|_| bad("bad characteristic"))?;
                let k: u32 = k.parse().map_err(|_| bad("bad exponent"))?;
                if !finite::is_prime(p) {
                    return Err(Error::NotPrime(p));
                }
                (p, k)
            }
            None => {
                let q: u64 = order.parse().map_err(|_| bad("bad field order"))?;
                let (p, k) = finite::prime_power(q).ok_or(Error::NotPrimePower(q))?;
                (p, k)
            }
        };
        if k == 0 {
            return Err(bad("extension degree must be positive"));
        }
        let modulus = match modulus_text {
            None => None,
            Some(m) => Some(parse::parse_prime_poly(m, p as u32, "x")?),
        };
        let vars: Vec<String> = if tail.is_empty() {
            Vec::new()
        } else {
            let v = tail
                .strip_prefix('(')
                .and_then(|t| t.strip_suffix(')'))
                .ok_or_else(|| bad("expected `(vars)` after the coefficient field"))?;
            v.split(',').map(str::to_string).collect()
        };
        for v in &vars {
            let ok = v.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                && v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ok || v == "x" {
                return Err(bad("variable names must be identifiers other than `x`"));
            }
        }
        let kind = if !vars.is_empty() {
            FieldKind::RationalFunction
        } else if k == 1 {
            FieldKind::Prime
        } else {
            FieldKind::Galois
        };
        Ok(FieldSpec {
            kind,
            p,
            k,
            modulus,
            vars,
        })
    }
}

struct FieldInner {
    spec: FieldSpec,
    fq: Fq,
    degree_bound: usize,
}

/// A field handle. Cheap to clone; equality compares the resolved specification.
#[derive(Clone)]
pub struct Field(Arc<FieldInner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }
}
impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field({})", self.name())
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// An element of a [`Field`]. The representation is canonical, so derived
/// equality, hashing and ordering agree with field equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldElement {
    Finite(u32),
    Rational(RatFn),
}

/// Coordinates of `a = sum_e b_e^2 t^e` over the subfield of squares, indexed
/// by the exponent vector `e` in `{0,1}^m` encoded as `e_0 + 2 e_1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrobeniusCoords {
    nvars: usize,
    coords: Vec<FieldElement>,
}

impl FrobeniusCoords {
    pub fn len(&self) -> usize {
        self.coords.len()
    }
    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }
    pub fn get(&self, exponent: &[u8]) -> Option<&FieldElement> {
        if exponent.len() != self.nvars || exponent.iter().any(|&e| e > 1) {
            return None;
        }
        let idx = exponent
            .iter()
            .enumerate()
            .map(|(i, &e)| (e as usize) << i)
            .sum::<usize>();
        self.coords.get(idx)
    }
    /// `(exponent vector, b_e)` pairs in basis order.
    pub fn iter(&self) -> impl Iterator<Item = (Vec<u8>, &FieldElement)> {
        let m = self.nvars;
        self.coords
            .iter()
            .enumerate()
            .map(move |(idx, b)| ((0..m).map(|i| ((idx >> i) & 1) as u8).collect(), b))
    }
    pub fn values(&self) -> &[FieldElement] {
        &self.coords
    }
}

/// Builds a field from its specification, verifying every invariant.
pub fn make_field(spec: &FieldSpec) -> Result<Field> {
    let q = spec.p.saturating_pow(spec.k);
    let name = if spec.vars.is_empty() {
        format!("GF({q})")
    } else {
        format!("GF({q})({})", spec.vars.join(","))
    };
    if spec.kind == FieldKind::RationalFunction {
        if spec.p != 2 {
            return Err(Error::FieldSpec(
                name,
                "function fields are supported in characteristic 2 only".into(),
            ));
        }
        if spec.vars.is_empty() || spec.vars.len() > 2 {
            return Err(Error::FieldSpec(
                name,
                "function fields take one or two variables".into(),
            ));
        }
        let mut seen = spec.vars.clone();
        seen.dedup();
        if seen.len() != spec.vars.len() {
            return Err(Error::FieldSpec(name, "repeated variable".into()));
        }
    } else if !spec.vars.is_empty() {
        return Err(Error::FieldSpec(name, "finite fields take no variables".into()));
    }
    let fq = Fq::new(spec.p, spec.k, spec.modulus.clone())?;
    let mut resolved = spec.clone();
    resolved.modulus = Some(fq.modulus().to_vec());
    resolved.kind = match (spec.kind, spec.k) {
        (FieldKind::RationalFunction, _) => FieldKind::RationalFunction,
        (_, 1) => FieldKind::Prime,
        _ => FieldKind::Galois,
    };
    Ok(Field(Arc::new(FieldInner {
        spec: resolved,
        fq,
        degree_bound: DEFAULT_DEGREE_BOUND,
    })))
}

impl std::str::FromStr for Field {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        make_field(&FieldSpec::parse(s)?)
    }
}

impl Field {
    pub fn parse(spec: &str) -> Result<Self> {
        spec.parse()
    }

    /// Same field with a different bound for random function-field elements.
    pub fn with_degree_bound(&self, bound: usize) -> Field {
        Field(Arc::new(FieldInner {
            spec: self.0.spec.clone(),
            fq: self.0.fq.clone(),
            degree_bound: bound.max(1),
        }))
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.0.spec
    }

    pub(crate) fn fq(&self) -> &Fq {
        &self.0.fq
    }

    pub fn degree_bound(&self) -> usize {
        self.0.degree_bound
    }

    pub fn name(&self) -> String {
        let s = &self.0.spec;
        let q = s.p.pow(s.k);
        let base = format!("GF({q})");
        if s.vars.is_empty() {
            base
        } else {
            format!("{base}({})", s.vars.join(","))
        }
    }

    pub fn characteristic(&self) -> u32 {
        self.0.fq.p()
    }

    pub fn is_char2(&self) -> bool {
        self.characteristic() == 2
    }

    pub fn is_finite(&self) -> bool {
        self.0.spec.vars.is_empty()
    }

    pub fn is_function_field(&self) -> bool {
        !self.is_finite()
    }

    /// Number of elements for finite fields.
    pub fn order(&self) -> Option<u32> {
        self.is_finite().then(|| self.0.fq.q())
    }

    pub fn nvars(&self) -> usize {
        self.0.spec.vars.len()
    }

    pub fn var_names(&self) -> &[String] {
        &self.0.spec.vars
    }

    /// `[F : F^2]`: 1 for perfect fields, `2^m` for the function fields.
    pub fn square_degree(&self) -> usize {
        1 << self.nvars()
    }

    pub fn ensure_same(&self, other: &Field) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::MixedFields(self.name(), other.name()))
        }
    }

    fn require_function_field(&self, what: &str) -> Result<()> {
        if self.is_function_field() {
            Ok(())
        } else {
            Err(Error::Unsupported(format!(
                "a characteristic-2 function field for {what}, got {}",
                self.name()
            )))
        }
    }

    // ----- constructors -----

    pub fn zero(&self) -> FieldElement {
        if self.is_finite() {
            FieldElement::Finite(0)
        } else {
            FieldElement::Rational(RatFn::zero())
        }
    }

    pub fn one(&self) -> FieldElement {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> FieldElement {
        let c = self.0.fq.from_int(n);
        self.constant(c)
    }

    pub(crate) fn constant(&self, c: u32) -> FieldElement {
        if self.is_finite() {
            FieldElement::Finite(c)
        } else {
            FieldElement::Rational(RatFn::from_poly(BiPoly::constant(c)))
        }
    }

    /// The generator `x` of GF(p^k) (or of the coefficient field).
    pub fn gen_x(&self) -> FieldElement {
        self.constant(self.0.fq.x())
    }

    /// The `i`-th function-field variable.
    pub fn var(&self, i: usize) -> Result<FieldElement> {
        if i >= self.nvars() {
            return Err(Error::Unsupported(format!(
                "variable index {i} in {}",
                self.name()
            )));
        }
        let (a, b) = if i == 0 { (1, 0) } else { (0, 1) };
        Ok(FieldElement::Rational(RatFn::from_poly(BiPoly::monomial(
            1, a, b,
        ))))
    }

    /// All elements of a finite field in encoding order.
    pub fn elements(&self) -> Option<Vec<FieldElement>> {
        self.order()
            .map(|q| (0..q).map(FieldElement::Finite).collect())
    }

    /// All nonzero elements of a finite field.
    pub fn units(&self) -> Option<Vec<FieldElement>> {
        self.order()
            .map(|q| (1..q).map(FieldElement::Finite).collect())
    }

    // ----- arithmetic -----

    fn rat(a: &FieldElement) -> &RatFn {
        match a {
            FieldElement::Rational(r) => r,
            FieldElement::Finite(_) => panic!("finite-field element passed to a function field"),
        }
    }

    /// Checks that `a` is a valid element of this field.
    pub fn contains(&self, a: &FieldElement) -> bool {
        match a {
            FieldElement::Finite(x) => self.is_finite() && *x < self.0.fq.q(),
            FieldElement::Rational(r) => {
                self.is_function_field()
                    && (self.nvars() == 2 || r.num.deg_u().unwrap_or(0) == 0 && r.den.deg_u() == Some(0))
            }
        }
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let f = &self.0.fq;
        match (a, b) {
            (FieldElement::Finite(x), FieldElement::Finite(y)) => FieldElement::Finite(f.add(*x, *y)),
            _ => FieldElement::Rational(Self::rat(a).add(f, Self::rat(b))),
        }
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        match a {
            FieldElement::Finite(x) => FieldElement::Finite(self.0.fq.neg(*x)),
            // characteristic 2
            FieldElement::Rational(_) => a.clone(),
        }
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let f = &self.0.fq;
        match (a, b) {
            (FieldElement::Finite(x), FieldElement::Finite(y)) => FieldElement::Finite(f.mul(*x, *y)),
            _ => FieldElement::Rational(Self::rat(a).mul(f, Self::rat(b))),
        }
    }

    pub fn square(&self, a: &FieldElement) -> FieldElement {
        self.mul(a, a)
    }

    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement> {
        let f = &self.0.fq;
        match a {
            FieldElement::Finite(x) => f.inv(*x).map(FieldElement::Finite),
            FieldElement::Rational(r) => r.inv(f).map(FieldElement::Rational),
        }
        .ok_or(Error::DivisionByZero)
    }

    pub fn div(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &FieldElement, e: i64) -> Result<FieldElement> {
        if let FieldElement::Finite(x) = a {
            return self
                .0
                .fq
                .pow(*x, e)
                .map(FieldElement::Finite)
                .ok_or(Error::DivisionByZero);
        }
        let base = if e < 0 { self.inv(a)? } else { a.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = self.one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &sq);
            }
            e >>= 1;
            if e > 0 {
                sq = self.mul(&sq, &sq);
            }
        }
        Ok(acc)
    }

    pub fn is_zero(&self, a: &FieldElement) -> bool {
        match a {
            FieldElement::Finite(x) => *x == 0,
            FieldElement::Rational(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self, a: &FieldElement) -> bool {
        match a {
            FieldElement::Finite(x) => *x == 1,
            FieldElement::Rational(r) => r.is_one(),
        }
    }

    pub fn sum<'a>(&self, items: impl IntoIterator<Item = &'a FieldElement>) -> FieldElement {
        items
            .into_iter()
            .fold(self.zero(), |acc, x| self.add(&acc, x))
    }

    pub fn product<'a>(&self, items: impl IntoIterator<Item = &'a FieldElement>) -> FieldElement {
        items
            .into_iter()
            .fold(self.one(), |acc, x| self.mul(&acc, x))
    }

    // ----- squares -----

    /// Square test. Finite fields of odd order use the Euler criterion (via
    /// the log table), perfect fields of characteristic 2 are all squares, and
    /// function-field fractions are squares iff numerator and denominator have
    /// only even exponents.
    pub fn is_square(&self, a: &FieldElement) -> bool {
        match a {
            FieldElement::Finite(x) => self.0.fq.is_square(*x),
            FieldElement::Rational(r) => r.is_square(),
        }
    }

    pub fn sqrt(&self, a: &FieldElement) -> Result<FieldElement> {
        let f = &self.0.fq;
        match a {
            FieldElement::Finite(x) => f.sqrt(*x).map(FieldElement::Finite),
            FieldElement::Rational(r) => r.sqrt(f).map(FieldElement::Rational),
        }
        .ok_or_else(|| Error::NotASquare(self.format(a)))
    }

    /// Whether `sum_i (∂_t a_i)(∂_u a_i) / a_i^2` vanishes, for units `a_i` of
    /// GF(2^k)(t,u). For a form `<a_1, ..., a_n>` in `I^2` this sum is the
    /// coefficient of `dt ∧ du` in its image under Kato's isomorphism
    /// `I^2/I^3 → ν(2) ⊂ Ω^2`, `⟪a, b⟫ ↦ da/a ∧ db/b`.
    ///
    /// Each `a = f/g` is replaced by the polynomial `f g` of the same square
    /// class, and the fractions are added pairwise over products of
    /// denominators, so no gcd is taken.
    pub fn differential_invariant_vanishes(&self, entries: &[FieldElement]) -> Result<bool> {
        if self.nvars() != 2 || !self.is_char2() {
            return Err(Error::Unsupported("the differential invariant over GF(2^k)(t,u)".into()));
        }
        let f = &self.0.fq;
        let mut fractions: Vec<(BiPoly, BiPoly)> = entries
            .iter()
            .map(|a| {
                let r = Self::rat(a);
                let p = if r.is_poly() { r.num.clone() } else { r.num.mul(f, &r.den) };
                let num = p.derivative_t().mul(f, &p.derivative_u());
                (num, p.mul(f, &p))
            })
            .filter(|(num, _)| !num.is_zero())
            .collect();
        while fractions.len() > 1 {
            fractions = fractions
                .chunks(2)
                .map(|pair| match pair {
                    [(n1, d1), (n2, d2)] => (n1.mul(f, d2).add(&n2.mul(f, d1)), d1.mul(f, d2)),
                    [one] => one.clone(),
                    _ => unreachable!(),
                })
                .filter(|(num, _)| !num.is_zero())
                .collect();
        }
        Ok(fractions.is_empty())
    }

    /// Whether two units lie in the same square class, decided as a square test
    /// of their quotient.
    pub fn same_square_class(&self, a: &FieldElement, b: &FieldElement) -> bool {
        if self.is_char2() {
            self.is_square(&self.mul(a, b))
        } else {
            self.div(a, b).map(|q| self.is_square(&q)).unwrap_or(false)
        }
    }

    /// A reduced representative of the square class of a unit.
    ///
    /// For function fields, `f/g` is first replaced by the polynomial `f g`;
    /// the gcd `G` of its Frobenius coordinates is the largest polynomial whose
    /// square divides it, and `f g / G^2` made monic is returned. Finite fields
    /// map squares to 1 and non-squares to the primitive element.
    pub fn square_class_rep(&self, a: &FieldElement) -> FieldElement {
        let f = &self.0.fq;
        match a {
            FieldElement::Finite(x) => {
                if *x == 0 || f.is_square(*x) {
                    FieldElement::Finite(if *x == 0 { 0 } else { 1 })
                } else {
                    FieldElement::Finite(f.generator())
                }
            }
            FieldElement::Rational(r) => {
                if r.is_zero() {
                    return a.clone();
                }
                let p = if r.is_poly() {
                    r.num.clone()
                } else {
                    r.num.mul(f, &r.den)
                };
                let parts = p.frobenius_split(f);
                let mut g = BiPoly::zero();
                for part in parts.iter().filter(|q| !q.is_zero()) {
                    g = if g.is_zero() { part.monic(f) } else { g.gcd(f, part) };
                    if g.is_one() {
                        break;
                    }
                }
                let reduced = if g.is_one() {
                    p
                } else {
                    p.div_exact(f, &g.mul(f, &g)).expect("square of coordinate gcd divides")
                };
                FieldElement::Rational(RatFn::from_poly(reduced.monic(f)))
            }
        }
    }

    /// Coordinates of `a` over the subfield of squares in the monomial basis
    /// `{t^e0 u^e1}`: `a = f g / g^2` and `f g = sum_e t^e Q_e^2`, so `b_e = Q_e / g`.
    pub fn frobenius_coords(&self, a: &FieldElement) -> Result<FrobeniusCoords> {
        self.require_function_field("Frobenius coordinates")?;
        let f = &self.0.fq;
        let r = Self::rat(a);
        let m = self.nvars();
        let p = r.num.mul(f, &r.den);
        let parts = p.frobenius_split(f);
        let coords = parts
            .into_iter()
            .take(1 << m)
            .map(|q| FieldElement::Rational(RatFn::new(f, q, r.den.clone())))
            .collect();
        Ok(FrobeniusCoords { nvars: m, coords })
    }

    /// Rebuilds `sum_e b_e^2 t^e` from coordinates.
    pub fn from_frobenius_coords(&self, c: &FrobeniusCoords) -> Result<FieldElement> {
        self.require_function_field("Frobenius coordinates")?;
        let mut acc = self.zero();
        for (idx, b) in c.coords.iter().enumerate() {
            let basis = FieldElement::Rational(RatFn::from_poly(BiPoly::monomial(
                1,
                idx & 1,
                idx >> 1,
            )));
            acc = self.add(&acc, &self.mul(&self.square(b), &basis));
        }
        Ok(acc)
    }

    /// A nonzero `c` with `sum c_i^2 v_i = 0`, or `None` when the `v_i` are
    /// linearly independent over the subfield of squares.
    ///
    /// Writing `v_i = sum_e b_{i,e}^2 t^e`, the condition becomes the linear
    /// system `sum_i c_i b_{i,e} = 0` for every `e` (characteristic 2).
    pub fn square_dependence(&self, v: &[FieldElement]) -> Result<Option<Vec<FieldElement>>> {
        self.require_function_field("square dependence")?;
        if v.is_empty() {
            return Err(Error::Empty("square_dependence needs at least one vector".into()));
        }
        let (rows, scales) = self.coordinate_rows(v);
        Ok(linalg::kernel_vector(self, &rows, v.len()).map(|c| {
            c.iter()
                .zip(&scales)
                .map(|(ci, s)| self.mul(ci, s))
                .collect()
        }))
    }

    /// Solves `sum_i a_i x_i^2 = b` in a characteristic-2 function field.
    pub fn solve_square_combination(
        &self,
        a: &[FieldElement],
        b: &FieldElement,
    ) -> Result<Option<Vec<FieldElement>>> {
        self.require_function_field("square combinations")?;
        if a.is_empty() {
            return Ok(self.is_zero(b).then(Vec::new));
        }
        let (rows, scales) = self.coordinate_rows(a);
        let target = self.frobenius_coords(b)?;
        let sol = linalg::solve(self, &rows, a.len(), target.values());
        Ok(sol.map(|x| {
            x.iter()
                .zip(&scales)
                .map(|(xi, s)| self.mul(xi, s))
                .collect()
        }))
    }

    /// Frobenius-coordinate matrix (one row per basis monomial) of the
    /// polynomials `f_i g_i`, and the factors `g_i` that convert a solution for
    /// those polynomials back to one for `v_i = f_i/g_i = f_i g_i / g_i^2`.
    fn coordinate_rows(&self, v: &[FieldElement]) -> (Vec<Vec<FieldElement>>, Vec<FieldElement>) {
        let f = &self.0.fq;
        let m = 1 << self.nvars();
        let mut rows = vec![Vec::with_capacity(v.len()); m];
        let mut scales = Vec::with_capacity(v.len());
        for vi in v {
            let r = Self::rat(vi);
            let p = if r.is_poly() {
                r.num.clone()
            } else {
                r.num.mul(f, &r.den)
            };
            let parts = p.frobenius_split(f);
            for (e, part) in parts.into_iter().take(m).enumerate() {
                rows[e].push(FieldElement::Rational(RatFn::from_poly(part)));
            }
            scales.push(FieldElement::Rational(RatFn::from_poly(r.den.clone())));
        }
        (rows, scales)
    }

    /// Rescales a vector so that function-field entries become coprime
    /// polynomials.
    pub(crate) fn clear_denominators(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        if self.is_finite() {
            return v.to_vec();
        }
        let f = &self.0.fq;
        let mut l = BiPoly::one();
        for x in v {
            let d = &Self::rat(x).den;
            if d.is_one() {
                continue;
            }
            let g = l.gcd(f, d);
            l = l.mul(f, &d.div_exact(f, &g).expect("gcd divides"));
        }
        let l = FieldElement::Rational(RatFn::from_poly(l));
        let polys: Vec<FieldElement> = v.iter().map(|x| self.mul(x, &l)).collect();
        let mut g = BiPoly::zero();
        for x in &polys {
            let n = &Self::rat(x).num;
            if !n.is_zero() {
                g = if g.is_zero() { n.monic(f) } else { g.gcd(f, n) };
            }
        }
        if g.is_zero() || g.is_one() {
            return polys;
        }
        polys
            .iter()
            .map(|x| {
                let n = Self::rat(x).num.div_exact(f, &g).expect("content divides");
                FieldElement::Rational(RatFn::from_poly(n))
            })
            .collect()
    }

    // ----- randomness -----

    /// A uniformly chosen unit of a finite field, or a random reduced fraction
    /// whose numerator and denominator have total degree at most the bound.
    pub fn random_unit<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        let f = &self.0.fq;
        if self.is_finite() {
            return FieldElement::Finite(rng.gen_range(1..f.q()));
        }
        let num = self.random_poly(rng);
        let den = if rng.gen_bool(0.3) {
            BiPoly::one()
        } else {
            self.random_poly(rng)
        };
        FieldElement::Rational(RatFn::new(f, num, den))
    }

    fn random_poly<R: Rng + ?Sized>(&self, rng: &mut R) -> BiPoly {
        let f = &self.0.fq;
        let bound = rng.gen_range(0..=self.degree_bound());
        let two_vars = self.nvars() == 2;
        loop {
            let mut p = BiPoly::zero();
            for total in 0..=bound {
                for j in 0..=(if two_vars { total } else { 0 }) {
                    let i = total - j;
                    if rng.gen_bool(0.5) {
                        let c = rng.gen_range(1..f.q());
                        p = p.add(&BiPoly::monomial(c, i, j));
                    }
                }
            }
            if !p.is_zero() {
                return p;
            }
        }
    }

    /// Deterministic random unit for a fixed seed.
    pub fn random_unit_seeded(&self, seed: u64) -> FieldElement {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.random_unit(&mut rng)
    }

    /// A random element that may be zero (used for witness coefficients).
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        if rng.gen_bool(0.15) {
            self.zero()
        } else {
            self.random_unit(rng)
        }
    }

    // ----- text -----

    /// Parses an element expression such as `(t^2+t+1)/(u+1)`; names bound in
    /// `lets` take precedence over the field's own variables.
    pub fn parse_element(&self, text: &str) -> Result<FieldElement> {
        parse::parse_element(self, text, &[])
    }

    pub fn parse_element_with(
        &self,
        text: &str,
        lets: &[(String, FieldElement)],
    ) -> Result<FieldElement> {
        parse::parse_element(self, text, lets)
    }

    pub fn format(&self, a: &FieldElement) -> String {
        parse::format_element(self, a)
    }

    /// Formats so the result can be embedded in a product without ambiguity.
    pub fn format_atom(&self, a: &FieldElement) -> String {
        let s = self.format(a);
        if s.contains(['+', '-', '/', '*', ' ']) && !(s.starts_with('(') && parse::balanced_outer(&s)) {
            format!("({s})")
        } else {
            s
        }
    }
}

#[cfg(test)]
mod tests;
