//! Symmetric bilinear forms: Gram matrices, diagonal forms, diagonalization
//! (with the characteristic-2 symplectic split), isotropy, representation,
//! Witt decomposition and Pfister forms.

use crate::error::{Error, Result};
use crate::field::{linalg, Field, FieldElement};
use serde_json::Value;

/// A nondegenerate symmetric Gram matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GramMatrix {
    field: Field,
    rows: Vec<Vec<FieldElement>>,
}

/// `⟨a_1, ..., a_r⟩` with unit entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalForm {
    field: Field,
    entries: Vec<FieldElement>,
}

/// Result of [`GramMatrix::diagonalize`]: the form in the new basis is
/// `diagonal ⊥ H_s` where `H_s = [[0, I_s], [I_s, 0]]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagonalization {
    pub diagonal: DiagonalForm,
    pub symplectic_rank: usize,
    /// New basis vectors as rows, in original coordinates: diagonal vectors
    /// first, then `e_1..e_s`, then `f_1..f_s`.
    pub basis: Vec<Vec<FieldElement>>,
}

/// Metabolic ⊥ anisotropic splitting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WittDecomposition {
    pub anisotropic: DiagonalForm,
    pub metabolic_rank: usize,
}

/// Slots `(a_1, ..., a_n)` of the Pfister form `⟪a_1, ..., a_n⟫ = ⊗ ⟨1, a_i⟩`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PfisterSpec {
    field: Field,
    slots: Vec<FieldElement>,
}

fn to_json_list(f: &Field, xs: &[FieldElement]) -> Value {
    Value::Array(xs.iter().map(|x| Value::String(f.format(x))).collect())
}

fn dot(f: &Field, x: &[FieldElement], y: &[FieldElement]) -> FieldElement {
    x.iter()
        .zip(y)
        .fold(f.zero(), |acc, (a, b)| f.add(&acc, &f.mul(a, b)))
}

impl GramMatrix {
    pub fn new(field: &Field, rows: Vec<Vec<FieldElement>>) -> Result<Self> {
        let n = rows.len();
        for row in &rows {
            if row.len() != n {
                return Err(Error::Degenerate("Gram matrix is not square".into()));
            }
            if let Some(bad) = row.iter().find(|x| !field.contains(x)) {
                return Err(Error::MixedFields(format!("{bad:?}"), field.name()));
            }
        }
        for i in 0..n {
            for j in 0..i {
                if rows[i][j] != rows[j][i] {
                    return Err(Error::Degenerate(format!(
                        "Gram matrix is not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        if n > 0 && field.is_zero(&linalg::determinant(field, &rows)) {
            return Err(Error::Degenerate("determinant is zero".into()));
        }
        Ok(GramMatrix {
            field: field.clone(),
            rows,
        })
    }

    /// Parses `[[a,b],[c,d]]`-style text (or a JSON array of element strings).
    pub fn parse(field: &Field, text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(&quote_bare(text)).map_err(|e| Error::Json(e.to_string()))?;
        Self::from_json(field, &v)
    }

    pub fn from_json(field: &Field, v: &Value) -> Result<Self> {
        let rows = v
            .as_array()
            .ok_or_else(|| Error::Json("expected an array of rows".into()))?
            .iter()
            .map(|row| elements_from_json(field, row))
            .collect::<Result<Vec<_>>>()?;
        Self::new(field, rows)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|r| to_json_list(&self.field, r))
                .collect(),
        )
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<FieldElement>] {
        &self.rows
    }

    /// `B(x, y) = x G y^T`.
    pub fn bilinear(&self, x: &[FieldElement], y: &[FieldElement]) -> FieldElement {
        let f = &self.field;
        let gy: Vec<FieldElement> = self.rows.iter().map(|row| dot(f, row, y)).collect();
        dot(f, x, &gy)
    }

    /// `P G P^T` for a basis given as rows of `P`.
    pub fn transform(&self, basis: &[Vec<FieldElement>]) -> Vec<Vec<FieldElement>> {
        basis
            .iter()
            .map(|x| basis.iter().map(|y| self.bilinear(x, y)).collect())
            .collect()
    }

    pub fn orthogonal_sum(&self, other: &GramMatrix) -> Result<GramMatrix> {
        self.field.ensure_same(&other.field)?;
        let f = &self.field;
        let (n, m) = (self.dim(), other.dim());
        let mut rows = vec![vec![f.zero(); n + m]; n + m];
        for i in 0..n {
            rows[i][..n].clone_from_slice(&self.rows[i]);
        }
        for i in 0..m {
            rows[n + i][n..].clone_from_slice(&other.rows[i]);
        }
        Ok(GramMatrix {
            field: f.clone(),
            rows,
        })
    }

    /// Kronecker product.
    pub fn tensor(&self, other: &GramMatrix) -> Result<GramMatrix> {
        self.field.ensure_same(&other.field)?;
        let f = &self.field;
        let (n, m) = (self.dim(), other.dim());
        let rows = (0..n * m)
            .map(|r| {
                (0..n * m)
                    .map(|c| f.mul(&self.rows[r / m][c / m], &other.rows[r % m][c % m]))
                    .collect()
            })
            .collect();
        Ok(GramMatrix {
            field: f.clone(),
            rows,
        })
    }

    /// Orthogonal basis for the non-alternating part plus a symplectic basis
    /// for the rest; the transported Gram matrix is checked before returning.
    pub fn diagonalize(&self) -> Result<Diagonalization> {
        let raw = diagonalize_raw(&self.field, &self.rows, true)?;
        let diagonal = DiagonalForm {
            field: self.field.clone(),
            entries: raw.diagonal,
        };
        let d = Diagonalization {
            diagonal,
            symplectic_rank: raw.symplectic_rank,
            basis: raw.basis,
        };
        if self.transform(&d.basis) != d.expected_gram() {
            return Err(Error::Verification(
                "diagonalizing basis does not transport the Gram matrix".into(),
            ));
        }
        Ok(d)
    }

    /// A nonzero vector `v` with `B(v, v) = 0`, if any.
    pub fn is_isotropic(&self) -> Result<Option<Vec<FieldElement>>> {
        let d = self.diagonalize()?;
        if d.symplectic_rank > 0 {
            return Ok(Some(d.basis[d.diagonal.rank()].clone()));
        }
        Ok(d.diagonal.is_isotropic().map(|y| {
            let f = &self.field;
            (0..self.dim())
                .map(|c| {
                    y.iter()
                        .zip(&d.basis)
                        .fold(f.zero(), |acc, (yi, b)| f.add(&acc, &f.mul(yi, &b[c])))
                })
                .collect()
        }))
    }

    pub fn witt_decompose(&self) -> Result<WittDecomposition> {
        let d = self.diagonalize()?;
        let mut w = d.diagonal.witt_decompose();
        w.metabolic_rank += 2 * d.symplectic_rank;
        Ok(w)
    }
}

impl Diagonalization {
    /// `diag(a_1..a_r) ⊥ H_s`.
    pub fn expected_gram(&self) -> Vec<Vec<FieldElement>> {
        let f = &self.diagonal.field;
        let r = self.diagonal.rank();
        let s = self.symplectic_rank;
        let n = r + 2 * s;
        let mut g = vec![vec![f.zero(); n]; n];
        for (i, a) in self.diagonal.entries.iter().enumerate() {
            g[i][i] = a.clone();
        }
        for i in 0..s {
            g[r + i][r + s + i] = f.one();
            g[r + s + i][r + i] = f.one();
        }
        g
    }
}

struct RawDiagonalization {
    diagonal: Vec<FieldElement>,
    symplectic_rank: usize,
    basis: Vec<Vec<FieldElement>>,
}

/// Greedy diagonalization. Works on the Gram block of the remaining vectors;
/// coordinates are tracked only when `track` is set.
fn diagonalize_raw(
    f: &Field,
    gram: &[Vec<FieldElement>],
    track: bool,
) -> Result<RawDiagonalization> {
    let n = gram.len();
    let mut m: Vec<Vec<FieldElement>> = gram.to_vec();
    let mut vecs: Vec<Vec<FieldElement>> = if track {
        (0..n)
            .map(|i| (0..n).map(|j| if i == j { f.one() } else { f.zero() }).collect())
            .collect()
    } else {
        Vec::new()
    };
    let mut diagonal = Vec::new();
    let mut diag_basis = Vec::new();
    let mut sym_e = Vec::new();
    let mut sym_f = Vec::new();

    let axpy = |f: &Field, x: &mut Vec<FieldElement>, a: &FieldElement, y: &[FieldElement]| {
        if f.is_zero(a) {
            return;
        }
        for (xi, yi) in x.iter_mut().zip(y) {
            if !f.is_zero(yi) {
                *xi = f.add(xi, &f.mul(a, yi));
            }
        }
    };

    while !m.is_empty() {
        let len = m.len();
        if let Some(r) = (0..len).find(|&i| !f.is_zero(&m[i][i])) {
            let dr = m[r][r].clone();
            let inv = f.inv(&dr)?;
            let col: Vec<FieldElement> = (0..len).map(|i| m[i][r].clone()).collect();
            let mut next = Vec::with_capacity(len - 1);
            let mut next_vecs = Vec::new();
            for s in (0..len).filter(|&s| s != r) {
                let cs = f.mul(&col[s], &inv);
                let row: Vec<FieldElement> = (0..len)
                    .filter(|&t| t != r)
                    .map(|t| {
                        if f.is_zero(&cs) || f.is_zero(&col[t]) {
                            m[s][t].clone()
                        } else {
                            f.sub(&m[s][t], &f.mul(&cs, &col[t]))
                        }
                    })
                    .collect();
                next.push(row);
                if track {
                    let mut v = vecs[s].clone();
                    axpy(f, &mut v, &f.neg(&cs), &vecs[r]);
                    next_vecs.push(v);
                }
            }
            diagonal.push(dr);
            if track {
                diag_basis.push(vecs[r].clone());
                vecs = next_vecs;
            }
            m = next;
            continue;
        }
        // every remaining diagonal entry is zero
        let Some((i, j)) = (0..len)
            .flat_map(|i| (i + 1..len).map(move |j| (i, j)))
            .find(|&(i, j)| !f.is_zero(&m[i][j]))
        else {
            return Err(Error::Degenerate(format!(
                "radical of dimension {len} found while diagonalizing"
            )));
        };
        if !f.is_char2() {
            // e_i <- e_i + e_j has B = 2 B(e_i, e_j) != 0
            let rj = m[j].clone();
            let two_mij = f.add(&m[i][j], &m[i][j]);
            for t in (0..len).filter(|&t| t != i) {
                m[i][t] = f.add(&m[i][t], &rj[t]);
                m[t][i] = m[i][t].clone();
            }
            m[i][i] = f.add(&f.add(&m[i][i], &two_mij), &rj[j]);
            if track {
                let vj = vecs[j].clone();
                axpy(f, &mut vecs[i], &f.one(), &vj);
            }
            continue;
        }
        // characteristic 2, alternating block: split off a symplectic plane
        let c_inv = f.inv(&m[i][j])?;
        let alpha: Vec<FieldElement> = (0..len).map(|x| f.mul(&m[x][j], &c_inv)).collect();
        let beta: Vec<FieldElement> = (0..len).map(|x| m[x][i].clone()).collect();
        let keep: Vec<usize> = (0..len).filter(|&x| x != i && x != j).collect();
        let next: Vec<Vec<FieldElement>> = keep
            .iter()
            .map(|&x| {
                keep.iter()
                    .map(|&y| {
                        let t1 = f.mul(&alpha[x], &beta[y]);
                        let t2 = f.mul(&beta[x], &alpha[y]);
                        f.sub(&f.sub(&m[x][y], &t1), &t2)
                    })
                    .collect()
            })
            .collect();
        if track {
            let ei = vecs[i].clone();
            let mut fj = vecs[j].clone();
            for c in fj.iter_mut() {
                *c = f.mul(c, &c_inv);
            }
            let next_vecs = keep
                .iter()
                .map(|&x| {
                    let mut v = vecs[x].clone();
                    axpy(f, &mut v, &f.neg(&alpha[x]), &ei);
                    axpy(f, &mut v, &f.neg(&beta[x]), &fj);
                    v
                })
                .collect();
            sym_e.push(ei);
            sym_f.push(fj);
            vecs = next_vecs;
        } else {
            sym_e.push(Vec::new());
        }
        m = next;
    }
    let symplectic_rank = sym_e.len();
    let basis = if track {
        diag_basis.into_iter().chain(sym_e).chain(sym_f).collect()
    } else {
        Vec::new()
    };
    Ok(RawDiagonalization {
        diagonal,
        symplectic_rank,
        basis,
    })
}

impl DiagonalForm {
    pub fn new(field: &Field, entries: Vec<FieldElement>) -> Result<Self> {
        for e in &entries {
            if !field.contains(e) {
                return Err(Error::MixedFields(format!("{e:?}"), field.name()));
            }
            if field.is_zero(e) {
                return Err(Error::Degenerate("diagonal entries must be units".into()));
            }
        }
        Ok(DiagonalForm {
            field: field.clone(),
            entries,
        })
    }

    pub(crate) fn new_unchecked(field: &Field, entries: Vec<FieldElement>) -> Self {
        DiagonalForm {
            field: field.clone(),
            entries,
        }
    }

    /// Rank-0 form.
    pub fn zero(field: &Field) -> Self {
        Self::new_unchecked(field, Vec::new())
    }

    /// Parses a comma-separated list of elements such as `t,t^3`.
    pub fn parse(field: &Field, text: &str) -> Result<Self> {
        let text = text.trim();
        let inner = text
            .strip_prefix('<')
            .and_then(|t| t.strip_suffix('>'))
            .unwrap_or(text);
        if inner.trim().is_empty() {
            return Ok(Self::zero(field));
        }
        let entries = inner
            .split(',')
            .map(|s| field.parse_element(s))
            .collect::<Result<Vec<_>>>()?;
        Self::new(field, entries)
    }

    pub fn from_json(field: &Field, v: &Value) -> Result<Self> {
        Self::new(field, elements_from_json(field, v)?)
    }

    pub fn to_json(&self) -> Value {
        to_json_list(&self.field, &self.entries)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[FieldElement] {
        &self.entries
    }

    pub fn to_gram(&self) -> GramMatrix {
        let f = &self.field;
        let n = self.rank();
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { self.entries[i].clone() } else { f.zero() })
                    .collect()
            })
            .collect();
        GramMatrix {
            field: f.clone(),
            rows,
        }
    }

    pub fn orthogonal_sum(&self, other: &DiagonalForm) -> Result<DiagonalForm> {
        self.field.ensure_same(&other.field)?;
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        Ok(Self::new_unchecked(&self.field, entries))
    }

    /// Kronecker product of the diagonals.
    pub fn tensor(&self, other: &DiagonalForm) -> Result<DiagonalForm> {
        self.field.ensure_same(&other.field)?;
        let f = &self.field;
        let entries = self
            .entries
            .iter()
            .flat_map(|a| other.entries.iter().map(move |b| f.mul(a, b)))
            .collect();
        Ok(Self::new_unchecked(f, entries))
    }

    /// `⟨c a_1, ..., c a_r⟩`.
    pub fn scale(&self, c: &FieldElement) -> Result<DiagonalForm> {
        if self.field.is_zero(c) {
            return Err(Error::Degenerate("scaling by zero".into()));
        }
        let f = &self.field;
        Ok(Self::new_unchecked(
            f,
            self.entries.iter().map(|a| f.mul(a, c)).collect(),
        ))
    }

    /// `⟨-a_1, ..., -a_r⟩`, the additive inverse in the Witt ring.
    pub fn negated(&self) -> DiagonalForm {
        let f = &self.field;
        Self::new_unchecked(f, self.entries.iter().map(|a| f.neg(a)).collect())
    }

    /// `sum a_i x_i^2`.
    pub fn evaluate(&self, x: &[FieldElement]) -> FieldElement {
        let f = &self.field;
        self.entries
            .iter()
            .zip(x)
            .fold(f.zero(), |acc, (a, xi)| f.add(&acc, &f.mul(a, &f.square(xi))))
    }

    /// A nonzero `x` with `sum a_i x_i^2 = 0`, if one exists.
    pub fn is_isotropic(&self) -> Option<Vec<FieldElement>> {
        isotropic_vector(&self.field, &self.entries)
    }

    /// A vector `x` with `sum a_i x_i^2 = b`; for `b = 0` this is an isotropy witness.
    pub fn represents(&self, b: &FieldElement) -> Result<Option<Vec<FieldElement>>> {
        let f = &self.field;
        if !f.contains(b) {
            return Err(Error::MixedFields(format!("{b:?}"), f.name()));
        }
        if f.is_zero(b) {
            return Ok(self.is_isotropic());
        }
        let a = &self.entries;
        let witness = if f.is_function_field() {
            f.solve_square_combination(a, b)?
        } else if a.is_empty() {
            None
        } else if f.is_char2() {
            let mut x = vec![f.zero(); a.len()];
            x[0] = f.sqrt(&f.div(b, &a[0])?)?;
            Some(x)
        } else {
            finite_represent(f, a, b)
        };
        if let Some(x) = &witness {
            if &self.evaluate(x) != b {
                return Err(Error::Verification("representation witness".into()));
            }
        }
        Ok(witness)
    }

    /// Splits off metabolic planes until the remainder is anisotropic. The
    /// anisotropic entries are reduced square-class representatives, sorted.
    pub fn witt_decompose(&self) -> WittDecomposition {
        let aniso = anisotropic_part(&self.field, &self.entries);
        WittDecomposition {
            metabolic_rank: self.rank() - aniso.len(),
            anisotropic: Self::new_unchecked(&self.field, aniso),
        }
    }
}

fn elements_from_json(field: &Field, v: &Value) -> Result<Vec<FieldElement>> {
    v.as_array()
        .ok_or_else(|| Error::Json("expected an array of elements".into()))?
        .iter()
        .map(|x| match x {
            Value::String(s) => field.parse_element(s),
            Value::Number(n) => n
                .as_i64()
                .map(|n| field.from_int(n))
                .ok_or_else(|| Error::Json(format!("bad number {n}"))),
            other => Err(Error::Json(format!("expected an element, got {other}"))),
        })
        .collect()
}

/// Wraps bare element tokens of `[[1,t],[t,0]]` in quotes so it reads as JSON.
fn quote_bare(text: &str) -> String {
    let mut out = String::new();
    let mut token = String::new();
    let mut depth = 0i32;
    let flush = |token: &mut String, out: &mut String| {
        let t = token.trim();
        if !t.is_empty() {
            if t.starts_with('"') {
                out.push_str(t);
            } else {
                out.push('"');
                out.push_str(t);
                out.push('"');
            }
        }
        token.clear();
    };
    for c in text.chars() {
        match c {
            '[' if token.trim().is_empty() && depth == 0 => out.push('['),
            ']' | ',' if depth == 0 => {
                flush(&mut token, &mut out);
                out.push(c);
            }
            '(' => {
                depth += 1;
                token.push(c);
            }
            ')' => {
                depth -= 1;
                token.push(c);
            }
            _ => token.push(c),
        }
    }
    flush(&mut token, &mut out);
    out
}

/// Finite fields of odd order: `a_1 x^2 + a_2 y^2` already represents every unit.
fn finite_represent(f: &Field, a: &[FieldElement], b: &FieldElement) -> Option<Vec<FieldElement>> {
    let mut x = vec![f.zero(); a.len()];
    let q = f.div(b, &a[0]).ok()?;
    if f.is_square(&q) {
        x[0] = f.sqrt(&q).ok()?;
        return Some(x);
    }
    if a.len() < 2 {
        return None;
    }
    for x0 in f.elements()? {
        let rest = f.sub(b, &f.mul(&a[0], &f.square(&x0)));
        let q = f.div(&rest, &a[1]).ok()?;
        if f.is_square(&q) {
            x[0] = x0;
            x[1] = f.sqrt(&q).ok()?;
            return Some(x);
        }
    }
    None
}

pub(crate) fn isotropic_vector(f: &Field, a: &[FieldElement]) -> Option<Vec<FieldElement>> {
    let r = a.len();
    if r < 2 {
        return None;
    }
    if f.is_function_field() {
        return f.square_dependence(a).ok().flatten();
    }
    let mut x = vec![f.zero(); r];
    if f.is_char2() {
        // every element of a perfect field is a square
        x[0] = f.sqrt(&f.div(&a[1], &a[0]).ok()?).ok()?;
        x[1] = f.one();
        return Some(x);
    }
    let minus_ratio = f.neg(&f.div(&a[1], &a[0]).ok()?);
    if f.is_square(&minus_ratio) {
        x[0] = f.sqrt(&minus_ratio).ok()?;
        x[1] = f.one();
        return Some(x);
    }
    if r == 2 {
        return None;
    }
    // a_0 y^2 + a_1 z^2 = -a_2 is solvable over a finite field
    let y = finite_represent(f, &a[..2], &f.neg(&a[2]))?;
    x[0] = y[0].clone();
    x[1] = y[1].clone();
    x[2] = f.one();
    Some(x)
}

/// Anisotropic kernel of `⟨a_1..a_r⟩` as sorted square-class representatives.
///
/// Entries are folded in one at a time; when the accumulator becomes isotropic
/// with witness `x`, the plane spanned by `v = sum x_i e_i` and
/// `w = e_j / (a_j x_j)` is split off and the orthogonal complement, with Gram
/// matrix `δ_il a_i + d a_i x_i a_l x_l` for `d = B(w,w)`, is re-diagonalized.
pub(crate) fn anisotropic_part(f: &Field, entries: &[FieldElement]) -> Vec<FieldElement> {
    let reps: Vec<FieldElement> = entries.iter().map(|a| f.square_class_rep(a)).collect();
    let mut acc = if f.is_char2() {
        fold_char2(f, reps)
    } else {
        let mut acc: Vec<FieldElement> = Vec::new();
        for r in reps {
            acc.push(r);
            while let Some(x) = isotropic_vector(f, &acc) {
                acc = split_metabolic_plane(f, &acc, &x);
            }
        }
        acc
    };
    acc.sort();
    acc
}

/// Characteristic 2. Each cancellation can enlarge the remaining entries, so
/// long inputs are reduced half by half and the (short) results merged; this
/// bounds how many cancellations any entry passes through.
fn fold_char2(f: &Field, mut reps: Vec<FieldElement>) -> Vec<FieldElement> {
    if reps.len() > 8 {
        let right = reps.split_off(reps.len() / 2);
        reps = fold_char2(f, reps);
        reps.extend(fold_char2(f, right));
    }
    // ⟨a, a⟩ is metabolic in characteristic 2
    reps.sort();
    let mut kept: Vec<FieldElement> = Vec::with_capacity(reps.len());
    for r in reps {
        if kept.last() == Some(&r) {
            kept.pop();
        } else {
            kept.push(r);
        }
    }
    // folding small entries first keeps intermediate values small
    kept.sort_by_key(element_size);
    let mut acc: Vec<FieldElement> = Vec::new();
    for r in kept {
        acc.push(r);
        if let Some(x) = isotropic_vector(f, &acc) {
            acc = cancel_dependent_entry(f, &acc, &x);
        }
    }
    acc
}

/// Characteristic 2: `acc[..n]` is anisotropic and `x` is an isotropy witness
/// for `acc`, so the last entry `c` satisfies `c x_n^2 = sum_S x_i^2 b_i` with
/// `b_S` independent over the squares. With `b'_i = x_i^2 b_i` and partial sums
/// `P_k`, repeated `⟨P, b'⟩ = ⟨P + b', (P + b') P b'⟩` turns `⟨b'_S⟩` into
/// `⟨c'⟩ ⊥ ⟨...⟩` where `c' = P_|S|` lies in the class of `c`; `⟨c, c'⟩` is
/// metabolic and drops out.
fn cancel_dependent_entry(f: &Field, acc: &[FieldElement], x: &[FieldElement]) -> Vec<FieldElement> {
    let n = acc.len() - 1;
    let x = f.clear_denominators(x);
    debug_assert!(!f.is_zero(&x[n]));
    let mut out: Vec<FieldElement> = Vec::with_capacity(n);
    // partial sums with their square classes; b = x_i^2 a_i is in the class of a_i
    let mut partial: Option<(FieldElement, FieldElement)> = None;
    for i in 0..n {
        if f.is_zero(&x[i]) {
            out.push(acc[i].clone());
            continue;
        }
        let b = f.mul(&f.square(&x[i]), &acc[i]);
        partial = Some(match partial {
            None => (b, acc[i].clone()),
            Some((p, p_class)) => {
                let next = f.add(&p, &b);
                let next_class = f.square_class_rep(&next);
                out.push(f.square_class_rep(&f.mul(&f.mul(&next_class, &p_class), &acc[i])));
                (next, next_class)
            }
        });
    }
    debug_assert!(partial.is_some_and(|(p, _)| f.same_square_class(&p, &acc[n])));
    out
}

fn element_size(a: &FieldElement) -> usize {
    match a {
        FieldElement::Finite(_) => 0,
        FieldElement::Rational(r) => r.num().terms().count() + r.den().terms().count(),
    }
}

fn split_metabolic_plane(f: &Field, a: &[FieldElement], x: &[FieldElement]) -> Vec<FieldElement> {
    let nz: Vec<usize> = (0..a.len()).filter(|&i| !f.is_zero(&x[i])).collect();
    let (j, k) = (nz[0], nz[1]);
    let d = f
        .inv(&f.mul(&a[j], &f.square(&x[j])))
        .expect("anisotropic coordinate");
    let rest: Vec<usize> = (0..a.len()).filter(|&i| i != j && i != k).collect();
    let ax: Vec<FieldElement> = rest.iter().map(|&i| f.mul(&a[i], &x[i])).collect();
    let gram: Vec<Vec<FieldElement>> = (0..rest.len())
        .map(|p| {
            (0..rest.len())
                .map(|q| {
                    let off = if f.is_zero(&ax[p]) || f.is_zero(&ax[q]) {
                        f.zero()
                    } else {
                        f.mul(&d, &f.mul(&ax[p], &ax[q]))
                    };
                    if p == q {
                        f.add(&a[rest[p]], &off)
                    } else {
                        off
                    }
                })
                .collect()
        })
        .collect();
    let raw = diagonalize_raw(f, &gram, false).expect("complement of a metabolic plane is nondegenerate");
    raw.diagonal.iter().map(|e| f.square_class_rep(e)).collect()
}

impl PfisterSpec {
    pub fn new(field: &Field, slots: Vec<FieldElement>) -> Result<Self> {
        if slots.iter().any(|s| field.is_zero(s)) {
            return Err(Error::Degenerate("Pfister slots must be units".into()));
        }
        Ok(PfisterSpec {
            field: field.clone(),
            slots,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn slots(&self) -> &[FieldElement] {
        &self.slots
    }

    /// `⊗ ⟨1, a_i⟩`: entry `S` (a bitmask over slots) is `prod_{i in S} a_i`.
    pub fn pfister(&self) -> DiagonalForm {
        let f = &self.field;
        let mut entries = vec![f.one()];
        for (i, a) in self.slots.iter().enumerate() {
            for s in 0..(1usize << i) {
                let e = f.mul(&entries[s], a);
                entries.push(e);
            }
        }
        DiagonalForm::new_unchecked(f, entries)
    }

    /// The Pfister form without its `⟨1⟩` slot.
    pub fn pure_part(&self) -> Result<DiagonalForm> {
        if self.slots.is_empty() {
            return Err(Error::Empty("pure part of the empty Pfister form".into()));
        }
        let mut p = self.pfister();
        p.entries.remove(0);
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn field(s: &str) -> Field {
        s.parse().unwrap()
    }

    fn diag(f: &Field, s: &str) -> DiagonalForm {
        DiagonalForm::parse(f, s).unwrap()
    }

    #[test]
    fn combine_examples() {
        let f = field("GF(2)(t,u)");
        let sum = diag(&f, "1").orthogonal_sum(&diag(&f, "t")).unwrap();
        assert_eq!(sum, diag(&f, "1,t"));
        let prod = diag(&f, "1,t").tensor(&diag(&f, "1,u")).unwrap();
        assert_eq!(prod, diag(&f, "1,u,t,t u"));
        assert_eq!(sum.orthogonal_sum(&DiagonalForm::zero(&f)).unwrap(), sum);
        let g = sum.to_gram().tensor(&diag(&f, "1,u").to_gram()).unwrap();
        assert_eq!(g, prod.to_gram());
        let other = field("GF(2)(t)");
        assert!(matches!(
            sum.orthogonal_sum(&diag(&other, "t")),
            Err(Error::MixedFields(_, _))
        ));
    }

    #[test]
    fn diagonalize_examples() {
        let f2 = field("GF(2)");
        let h = GramMatrix::parse(&f2, "[[0,1],[1,0]]").unwrap();
        let d = h.diagonalize().unwrap();
        assert_eq!((d.diagonal.rank(), d.symplectic_rank), (0, 1));

        let g = GramMatrix::parse(&f2, "[[1,1],[1,0]]").unwrap();
        let d = g.diagonalize().unwrap();
        assert_eq!(d.diagonal, diag(&f2, "1,1"));
        assert_eq!(d.symplectic_rank, 0);
        let one = f2.one();
        let zero = f2.zero();
        assert_eq!(d.basis, vec![vec![one.clone(), zero], vec![one.clone(), one]]);

        let f7 = field("GF(7)");
        let id = diag(&f7, "1,1,1").to_gram();
        assert_eq!(id.diagonalize().unwrap().diagonal, diag(&f7, "1,1,1"));

        let f5 = field("GF(5)");
        let h5 = GramMatrix::parse(&f5, "[[0,1],[1,0]]").unwrap();
        let d = h5.diagonalize().unwrap();
        assert_eq!(d.symplectic_rank, 0);
        assert_eq!(d.diagonal.rank(), 2);

        assert!(matches!(
            GramMatrix::parse(&f5, "[[1,1],[1,1]]"),
            Err(Error::Degenerate(_))
        ));
        assert!(matches!(
            GramMatrix::parse(&f5, "[[1,2],[1,1]]"),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn three_ones_is_one_plus_hyperbolic_plane() {
        let f = field("GF(2)(t)");
        let g = diag(&f, "1,1,1").to_gram();
        let e = |v: [i64; 3]| v.iter().map(|&c| f.from_int(c)).collect::<Vec<_>>();
        let basis = vec![e([1, 1, 1]), e([1, 0, 1]), e([0, 1, 1])];
        let expected = Diagonalization {
            diagonal: diag(&f, "1"),
            symplectic_rank: 1,
            basis: basis.clone(),
        }
        .expected_gram();
        assert_eq!(g.transform(&basis), expected);
        assert!(!f.is_zero(&linalg::determinant(&f, &basis)));
        let w = g.witt_decompose().unwrap();
        assert_eq!((w.anisotropic.rank(), w.metabolic_rank), (1, 2));
    }

    #[test]
    fn isotropy_examples() {
        let f3 = field("GF(3)");
        let x = diag(&f3, "1,1,1").is_isotropic().unwrap();
        assert!(f3.is_zero(&diag(&f3, "1,1,1").evaluate(&x)));
        assert_eq!(x, vec![f3.one(), f3.one(), f3.one()]);
        assert_eq!(diag(&f3, "1,1").is_isotropic(), None);

        let ft = field("GF(2)(t)");
        let x = diag(&ft, "t,t^3").is_isotropic().unwrap();
        assert_eq!(x, vec![ft.parse_element("t").unwrap(), ft.one()]);
        let g = GramMatrix::parse(&ft, "[[t,1],[1,0]]").unwrap();
        let v = g.is_isotropic().unwrap().unwrap();
        assert!(ft.is_zero(&g.bilinear(&v, &v)));
    }

    #[test]
    fn decomposition_examples() {
        let f3 = field("GF(3)");
        let w = diag(&f3, "1,1,1").witt_decompose();
        assert_eq!((w.anisotropic.rank(), w.metabolic_rank), (1, 2));
        let ft = field("GF(2)(t)");
        let w = diag(&ft, "t,t^3").witt_decompose();
        assert_eq!((w.anisotropic.rank(), w.metabolic_rank), (0, 2));
        for f in [field("GF(5)"), ft.clone(), field("GF(4)(t,u)")] {
            let w = diag(&f, "1").witt_decompose();
            assert_eq!(w.anisotropic, diag(&f, "1"));
            assert_eq!(w.metabolic_rank, 0);
        }
    }

    #[test]
    fn pfister_examples() {
        let f = field("GF(2)(t,u)");
        let t = f.parse_element("t").unwrap();
        let u = f.parse_element("u").unwrap();
        let p1 = PfisterSpec::new(&f, vec![t.clone()]).unwrap();
        assert_eq!(p1.pfister(), diag(&f, "1,t"));
        let p2 = PfisterSpec::new(&f, vec![t, u]).unwrap();
        assert_eq!(p2.pfister(), diag(&f, "1,t,u,t u"));
        assert_eq!(p2.pure_part().unwrap(), diag(&f, "t,u,t u"));
        let empty = PfisterSpec::new(&f, vec![]).unwrap();
        assert_eq!(empty.pfister(), diag(&f, "1"));
        assert!(empty.pure_part().is_err());
    }

    #[test]
    fn represents_examples() {
        let ft = field("GF(2)(t)");
        let target = ft.parse_element("t^2+t").unwrap();
        let x = diag(&ft, "1,t").represents(&target).unwrap().unwrap();
        assert_eq!(x, vec![ft.parse_element("t").unwrap(), ft.one()]);
        let f5 = field("GF(5)");
        let x = diag(&f5, "1").represents(&f5.from_int(4)).unwrap().unwrap();
        assert_eq!(f5.square(&x[0]), f5.from_int(4));
        let ftu = field("GF(2)(t,u)");
        let u = ftu.parse_element("u").unwrap();
        assert_eq!(diag(&ftu, "t").represents(&u).unwrap(), None);
    }

    const FIELDS: [&str; 8] = [
        "GF(3)", "GF(5)", "GF(9)", "GF(2)", "GF(8)", "GF(2)(t)", "GF(4)(t)", "GF(2)(t,u)",
    ];

    fn random_diag(f: &Field, rng: &mut ChaCha8Rng, max_rank: usize) -> DiagonalForm {
        use rand::Rng;
        let r = rng.gen_range(0..=max_rank);
        DiagonalForm::new(f, (0..r).map(|_| f.random_unit(rng)).collect()).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn decomposition_bookkeeping(idx in 0..FIELDS.len(), seed in any::<u64>()) {
            let f = field(FIELDS[idx]);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let d = random_diag(&f, &mut rng, if f.nvars() == 2 { 5 } else { 7 });
            let w = d.witt_decompose();
            prop_assert_eq!(d.rank(), w.anisotropic.rank() + w.metabolic_rank);
            prop_assert_eq!(w.metabolic_rank % 2, 0);
            prop_assert!(w.anisotropic.is_isotropic().is_none());
            prop_assert!(w.anisotropic.rank() <= 2 * f.square_degree());
        }

        #[test]
        fn diagonalization_transports_gram(idx in 0..FIELDS.len(), seed in any::<u64>()) {
            use rand::Rng;
            let f = field(FIELDS[idx]);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = rng.gen_range(1..=4);
            let mut rows = vec![vec![f.zero(); n]; n];
            for i in 0..n {
                for j in i..n {
                    let x = if rng.gen_bool(0.4) { f.zero() } else { f.random_unit(&mut rng) };
                    rows[i][j] = x.clone();
                    rows[j][i] = x;
                }
            }
            if let Ok(g) = GramMatrix::new(&f, rows) {
                let d = g.diagonalize().unwrap();
                prop_assert_eq!(g.transform(&d.basis), d.expected_gram());
                if !f.is_char2() {
                    prop_assert_eq!(d.symplectic_rank, 0);
                }
                let w = g.witt_decompose().unwrap();
                prop_assert_eq!(w.anisotropic.rank() + w.metabolic_rank, n);
                if let Some(v) = g.is_isotropic().unwrap() {
                    prop_assert!(f.is_zero(&g.bilinear(&v, &v)));
                    prop_assert!(v.iter().any(|c| !f.is_zero(c)));
                }
            }
        }

        #[test]
        fn witnesses_verify(idx in 0..FIELDS.len(), seed in any::<u64>()) {
            let f = field(FIELDS[idx]);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let d = random_diag(&f, &mut rng, 5);
            if let Some(x) = d.is_isotropic() {
                prop_assert!(f.is_zero(&d.evaluate(&x)));
                prop_assert!(x.iter().any(|c| !f.is_zero(c)));
            }
            let b = f.random_unit(&mut rng);
            if let Some(x) = d.represents(&b).unwrap() {
                prop_assert_eq!(d.evaluate(&x), b);
            }
        }
    }
}
