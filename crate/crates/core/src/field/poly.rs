//! Dense polynomials in at most two variables over GF(2^k).
//!
//! A [`BiPoly`] is stored as a vector indexed by the exponent of the second
//! variable `u`, whose entries are univariate polynomials in the first
//! variable `t` (coefficient of `t^i` at index `i`). Both levels are kept
//! trimmed so that structural equality is polynomial equality. All routines
//! assume characteristic 2: subtraction is addition.

use super::finite::Fq;
use std::cmp::Ordering;

pub type UPoly = Vec<u32>;

/// Ordered by `u`-degree, then row by row from the top `u`-power, each row by
/// `t`-degree and then coefficients from the top; so `1 < t < u < tu`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct BiPoly(pub(crate) Vec<UPoly>);

impl Ord for BiPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        let row = |a: &UPoly, b: &UPoly| a.len().cmp(&b.len()).then_with(|| a.iter().rev().cmp(b.iter().rev()));
        self.0.len().cmp(&other.0.len()).then_with(|| {
            self.0
                .iter()
                .rev()
                .zip(other.0.iter().rev())
                .map(|(a, b)| row(a, b))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
    }
}

impl PartialOrd for BiPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn trim(a: &mut UPoly) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

pub fn u_add(a: &[u32], b: &[u32]) -> UPoly {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut r = long.to_vec();
    for (x, &y) in r.iter_mut().zip(short) {
        *x ^= y;
    }
    trim(&mut r);
    r
}

pub fn u_mul(f: &Fq, a: &[u32], b: &[u32]) -> UPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            r[i + j] ^= f.mul(x, y);
        }
    }
    trim(&mut r);
    r
}

pub fn u_scale(f: &Fq, a: &[u32], c: u32) -> UPoly {
    if c == 0 {
        return Vec::new();
    }
    a.iter().map(|&x| f.mul(x, c)).collect()
}

pub fn u_divrem(f: &Fq, a: &[u32], b: &[u32]) -> (UPoly, UPoly) {
    assert!(!b.is_empty(), "univariate division by zero");
    let mut r = a.to_vec();
    trim(&mut r);
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let db = b.len() - 1;
    let inv = f.inv(b[db]).expect("trimmed leading coefficient is nonzero");
    let mut q = vec![0u32; r.len() - db];
    while r.len() > db {
        let lead = r.len() - 1;
        let c = f.mul(r[lead], inv);
        let shift = lead - db;
        q[shift] = c;
        for (i, &bi) in b.iter().enumerate() {
            r[shift + i] ^= f.mul(c, bi);
        }
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

pub fn u_monic(f: &Fq, a: &[u32]) -> UPoly {
    match a.last() {
        None => Vec::new(),
        Some(&l) => u_scale(f, a, f.inv(l).unwrap()),
    }
}

pub fn u_gcd(f: &Fq, a: &[u32], b: &[u32]) -> UPoly {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    if a.len() == 1 || b.len() == 1 {
        return vec![1];
    }
    while !b.is_empty() {
        let (_, r) = u_divrem(f, &a, &b);
        a = b;
        b = r;
        if b.len() == 1 {
            return vec![1];
        }
    }
    u_monic(f, &a)
}

fn u_is_one(a: &[u32]) -> bool {
    a.len() == 1 && a[0] == 1
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly(Vec::new())
    }

    pub fn constant(c: u32) -> Self {
        if c == 0 {
            Self::zero()
        } else {
            BiPoly(vec![vec![c]])
        }
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    /// The monomial `c t^i u^j`.
    pub fn monomial(c: u32, i: usize, j: usize) -> Self {
        if c == 0 {
            return Self::zero();
        }
        let mut row = vec![0u32; i + 1];
        row[i] = c;
        let mut rows = vec![Vec::new(); j + 1];
        rows[j] = row;
        BiPoly(rows)
    }

    fn normalized(mut rows: Vec<UPoly>) -> Self {
        for r in rows.iter_mut() {
            trim(r);
        }
        while rows.last().is_some_and(|r| r.is_empty()) {
            rows.pop();
        }
        BiPoly(rows)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0.len() == 1 && u_is_one(&self.0[0])
    }

    /// Constant term if the polynomial has degree zero.
    pub fn as_constant(&self) -> Option<u32> {
        match self.0.as_slice() {
            [] => Some(0),
            [row] if row.len() == 1 => Some(row[0]),
            _ => None,
        }
    }

    pub fn deg_u(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn deg_t(&self) -> Option<usize> {
        self.0.iter().filter_map(|r| r.len().checked_sub(1)).max()
    }

    pub fn total_degree(&self) -> Option<usize> {
        self.terms().map(|(i, j, _)| i + j).max()
    }

    /// Nonzero terms `(i, j, c)` for `c t^i u^j`.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        self.0.iter().enumerate().flat_map(|(j, row)| {
            row.iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(move |(i, &c)| (i, j, c))
        })
    }

    /// Graded-lexicographic comparison of exponents, with `t > u`.
    pub fn grlex_cmp(a: (usize, usize), b: (usize, usize)) -> Ordering {
        (a.0 + a.1, a.0).cmp(&(b.0 + b.1, b.0))
    }

    /// Leading term under graded-lexicographic order.
    pub fn leading_term(&self) -> Option<(usize, usize, u32)> {
        self.terms()
            .max_by(|x, y| Self::grlex_cmp((x.0, x.1), (y.0, y.1)))
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        let rows = (0..n)
            .map(|j| {
                let a = self.0.get(j).map(Vec::as_slice).unwrap_or(&[]);
                let b = other.0.get(j).map(Vec::as_slice).unwrap_or(&[]);
                u_add(a, b)
            })
            .collect();
        Self::normalized(rows)
    }

    pub fn mul(&self, f: &Fq, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if let Some(c) = self.as_constant() {
            return other.scale(f, c);
        }
        if let Some(c) = other.as_constant() {
            return self.scale(f, c);
        }
        let dt = self.deg_t().unwrap() + other.deg_t().unwrap() + 1;
        let mut rows = vec![vec![0u32; dt]; self.0.len() + other.0.len() - 1];
        for (ja, ra) in self.0.iter().enumerate() {
            for (ia, &ca) in ra.iter().enumerate() {
                if ca == 0 {
                    continue;
                }
                for (jb, rb) in other.0.iter().enumerate() {
                    let out = &mut rows[ja + jb];
                    for (ib, &cb) in rb.iter().enumerate() {
                        if cb != 0 {
                            out[ia + ib] ^= f.mul(ca, cb);
                        }
                    }
                }
            }
        }
        Self::normalized(rows)
    }

    pub fn scale(&self, f: &Fq, c: u32) -> Self {
        if c == 0 {
            return Self::zero();
        }
        if c == 1 {
            return self.clone();
        }
        BiPoly(self.0.iter().map(|r| u_scale(f, r, c)).collect())
    }

    fn mul_upoly(&self, f: &Fq, c: &[u32]) -> Self {
        Self::normalized(self.0.iter().map(|r| u_mul(f, r, c)).collect())
    }

    fn div_upoly(&self, f: &Fq, c: &[u32]) -> Self {
        if u_is_one(c) {
            return self.clone();
        }
        Self::normalized(
            self.0
                .iter()
                .map(|r| {
                    let (q, rem) = u_divrem(f, r, c);
                    debug_assert!(rem.is_empty(), "content division must be exact");
                    q
                })
                .collect(),
        )
    }

    fn shift_u(&self, d: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut rows = vec![Vec::new(); d];
        rows.extend(self.0.iter().cloned());
        BiPoly(rows)
    }

    /// gcd of the `t`-polynomial coefficients (monic).
    pub fn content(&self, f: &Fq) -> UPoly {
        let mut g: UPoly = Vec::new();
        for r in &self.0 {
            if r.is_empty() {
                continue;
            }
            g = if g.is_empty() {
                u_monic(f, r)
            } else {
                u_gcd(f, &g, r)
            };
            if u_is_one(&g) {
                break;
            }
        }
        g
    }

    /// Pseudo-remainder with respect to `u`, dividing out common leading-coefficient factors.
    fn prem(&self, f: &Fq, b: &Self) -> Self {
        let db = b.deg_u().expect("nonzero divisor");
        let lb = &b.0[db];
        let mut a = self.clone();
        while let Some(da) = a.deg_u() {
            if da < db {
                break;
            }
            let la = a.0[da].clone();
            let g = u_gcd(f, &la, lb);
            let (cb, _) = u_divrem(f, lb, &g);
            let (ca, _) = u_divrem(f, &la, &g);
            a = a.mul_upoly(f, &cb).add(&b.mul_upoly(f, &ca).shift_u(da - db));
        }
        a
    }

    /// Scales so that the graded-lexicographic leading coefficient is 1.
    pub fn monic(&self, f: &Fq) -> Self {
        match self.leading_term() {
            None => Self::zero(),
            Some((_, _, c)) => self.scale(f, f.inv(c).unwrap()),
        }
    }

    pub fn gcd(&self, f: &Fq, other: &Self) -> Self {
        if self.is_zero() {
            return other.monic(f);
        }
        if other.is_zero() {
            return self.monic(f);
        }
        if self.as_constant().is_some() || other.as_constant().is_some() {
            return Self::one();
        }
        let ca = self.content(f);
        let cb = other.content(f);
        let c = u_gcd(f, &ca, &cb);
        let mut a = self.div_upoly(f, &ca);
        let mut b = other.div_upoly(f, &cb);
        if a.deg_u() < b.deg_u() {
            std::mem::swap(&mut a, &mut b);
        }
        let g = loop {
            if b.deg_u() == Some(0) {
                break Self::one();
            }
            let r = a.prem(f, &b);
            if r.is_zero() {
                break b;
            }
            let cr = r.content(f);
            a = b;
            b = r.div_upoly(f, &cr);
        };
        g.mul_upoly(f, &c).monic(f)
    }

    /// Exact quotient `self / d`; `None` when `d` does not divide `self`.
    pub fn div_exact(&self, f: &Fq, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if let Some(c) = d.as_constant() {
            return Some(self.scale(f, f.inv(c)?));
        }
        if d.deg_u() == Some(0) {
            let rows: Option<Vec<UPoly>> = self
                .0
                .iter()
                .map(|r| {
                    let (q, rem) = u_divrem(f, r, &d.0[0]);
                    rem.is_empty().then_some(q)
                })
                .collect();
            return rows.map(Self::normalized);
        }
        let db = d.deg_u().unwrap();
        let ld = &d.0[db];
        let mut rem = self.clone();
        let mut rows: Vec<UPoly> = Vec::new();
        while let Some(da) = rem.deg_u() {
            if da < db {
                return None;
            }
            let (qc, r) = u_divrem(f, &rem.0[da], ld);
            if !r.is_empty() {
                return None;
            }
            let shift = da - db;
            if rows.len() <= shift {
                rows.resize(shift + 1, Vec::new());
            }
            rows[shift] = u_add(&rows[shift], &qc);
            let term = BiPoly::normalized({
                let mut v = vec![Vec::new(); shift];
                v.push(qc);
                v
            });
            rem = rem.add(&term.mul(f, d));
        }
        Some(Self::normalized(rows))
    }

    /// `∂/∂t`; only odd powers of `t` survive in characteristic 2.
    pub fn derivative_t(&self) -> Self {
        Self::normalized(
            self.0
                .iter()
                .map(|r| {
                    let mut d: UPoly = r.iter().enumerate().skip(1).map(|(i, &c)| if i % 2 == 1 { c } else { 0 }).collect();
                    trim(&mut d);
                    d
                })
                .collect(),
        )
    }

    /// `∂/∂u`.
    pub fn derivative_u(&self) -> Self {
        Self::normalized(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, r)| if j % 2 == 1 { r.clone() } else { Vec::new() })
                .collect(),
        )
    }

    /// True when every exponent is even (coefficients are squares in a perfect field).
    pub fn is_square(&self) -> bool {
        self.terms().all(|(i, j, _)| i % 2 == 0 && j % 2 == 0)
    }

    /// Square root of a polynomial all of whose exponents are even.
    pub fn sqrt(&self, f: &Fq) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let mut out = Self::zero();
        let mut rows: Vec<UPoly> = Vec::new();
        for (i, j, c) in self.terms() {
            let (i, j) = (i / 2, j / 2);
            if rows.len() <= j {
                rows.resize(j + 1, Vec::new());
            }
            if rows[j].len() <= i {
                rows[j].resize(i + 1, 0);
            }
            rows[j][i] = f.sqrt(c).unwrap();
        }
        if !rows.is_empty() {
            out = Self::normalized(rows);
        }
        Some(out)
    }

    /// Splits `self = sum_e t^e0 u^e1 Q_e^2` over parity classes `e`, returning
    /// `Q_e` indexed by `e0 + 2 e1`.
    pub fn frobenius_split(&self, f: &Fq) -> [Self; 4] {
        let mut parts: [Vec<UPoly>; 4] = Default::default();
        for (i, j, c) in self.terms() {
            let e = (i % 2) + 2 * (j % 2);
            let (ii, jj) = (i / 2, j / 2);
            let rows = &mut parts[e];
            if rows.len() <= jj {
                rows.resize(jj + 1, Vec::new());
            }
            if rows[jj].len() <= ii {
                rows[jj].resize(ii + 1, 0);
            }
            rows[jj][ii] = f.sqrt(c).unwrap();
        }
        parts.map(Self::normalized)
    }

    /// Inverse of [`frobenius_split`](Self::frobenius_split).
    pub fn frobenius_join(f: &Fq, parts: &[Self]) -> Self {
        let mut acc = Self::zero();
        for (e, q) in parts.iter().enumerate() {
            let sq = q.mul(f, q);
            acc = acc.add(&sq.mul(f, &Self::monomial(1, e % 2, e / 2)));
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf2() -> Fq {
        Fq::new(2, 1, None).unwrap()
    }

    fn p(terms: &[(usize, usize)]) -> BiPoly {
        terms
            .iter()
            .fold(BiPoly::zero(), |acc, &(i, j)| acc.add(&BiPoly::monomial(1, i, j)))
    }

    #[test]
    fn gcd_of_products() {
        let f = gf2();
        let a = p(&[(1, 0), (0, 1)]); // t + u
        let b = p(&[(1, 1), (0, 0)]); // tu + 1
        let c = p(&[(2, 0), (0, 0), (1, 0)]); // t^2 + t + 1
        let x = a.mul(&f, &b).mul(&f, &c);
        let y = a.mul(&f, &c).mul(&f, &p(&[(0, 2), (1, 0)]));
        let g = x.gcd(&f, &y);
        assert_eq!(g, a.mul(&f, &c).monic(&f));
        assert_eq!(x.div_exact(&f, &g).unwrap(), b);
    }

    #[test]
    fn coprime_gcd_is_one() {
        let f = gf2();
        let a = p(&[(1, 0), (0, 1)]);
        let b = p(&[(1, 0), (0, 1), (0, 0)]);
        assert!(a.gcd(&f, &b).is_one());
        assert!(a.div_exact(&f, &b).is_none());
    }

    #[test]
    fn frobenius_split_roundtrip() {
        let f = Fq::new(2, 2, None).unwrap();
        let a = p(&[(3, 0), (1, 0), (1, 1), (2, 2), (0, 0)]).scale(&f, 2);
        let parts = a.frobenius_split(&f);
        assert_eq!(BiPoly::frobenius_join(&f, &parts), a);
    }

    #[test]
    fn partial_derivatives() {
        // t^3 u^2 + t u + u^3
        let a = p(&[(3, 2), (1, 1), (0, 3)]);
        assert_eq!(a.derivative_t(), p(&[(2, 2), (0, 1)]));
        assert_eq!(a.derivative_u(), p(&[(1, 0), (0, 2)]));
        assert!(a.mul(&gf2(), &a).derivative_t().is_zero());
    }

    #[test]
    fn square_roots() {
        let f = gf2();
        let a = p(&[(1, 0), (0, 0)]);
        let sq = a.mul(&f, &a);
        assert!(sq.is_square());
        assert_eq!(sq.sqrt(&f).unwrap(), a);
        assert!(a.sqrt(&f).is_none());
    }
}
