//! Table-driven arithmetic in GF(p^k).
//!
//! Elements are encoded as integers in `0..q` whose base-`p` digits are the
//! coefficients of the residue polynomial, lowest degree first. Multiplication
//! goes through discrete-log tables built from a primitive element.

use crate::error::{Error, Result};

/// Largest field order handled by the log tables.
pub const MAX_ORDER: u64 = 1 << 16;

#[derive(Debug, Clone)]
pub struct Fq {
    p: u32,
    k: u32,
    q: u32,
    /// Monic modulus, coefficients lowest degree first, length `k + 1`.
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k && self.modulus == other.modulus
    }
}
impl Eq for Fq {}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` as `p^k` with `p` prime.
pub(crate) fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q;
    }
    let (mut r, mut k) = (q, 0);
    while r % p == 0 {
        r /= p;
        k += 1;
    }
    (r == 1).then_some((p, k))
}

// Dense polynomials over F_p, lowest degree first, used only while setting up a field.

fn trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_mod(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    let inv_lead = inv_mod(m[dm], p);
    while r.len() > dm {
        let lead = r.len() - 1;
        let c = (r[lead] as u64 * inv_lead as u64 % p as u64) as u32;
        let shift = lead - dm;
        for (i, &mi) in m.iter().enumerate() {
            let sub = (c as u64 * mi as u64 % p as u64) as u32;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
        trim(&mut r);
    }
    r
}

fn poly_mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            r[i + j] = (r[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    let r: Vec<u32> = r.into_iter().map(|v| v as u32).collect();
    poly_mod(&r, m, p)
}

fn poly_gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = poly_mod(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn inv_mod(a: u32, p: u32) -> u32 {
    pow_mod(a as u64, p as u64 - 2, p as u64) as u32
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// Rabin-style test: a monic `f` of degree `k` is irreducible over F_p iff
/// `gcd(x^(p^i) - x, f) = 1` for every `1 <= i <= k/2`.
pub(crate) fn is_irreducible(f: &[u32], p: u32) -> bool {
    let k = f.len() - 1;
    if k == 0 {
        return false;
    }
    if k == 1 {
        return true;
    }
    let x = vec![0, 1];
    let mut xp = x.clone();
    for _ in 1..=k / 2 {
        // xp <- xp^p mod f
        let mut acc = vec![1];
        for _ in 0..p {
            acc = poly_mulmod(&acc, &xp, f, p);
        }
        xp = acc;
        let mut diff = xp.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        trim(&mut diff);
        let g = poly_gcd(&diff, f, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

/// Least monic irreducible polynomial of degree `k`, ordering candidates by
/// their coefficient vector read from degree `k-1` down to the constant term.
pub(crate) fn least_irreducible(p: u32, k: u32) -> Vec<u32> {
    let total = (p as u64).pow(k);
    for code in 0..total {
        let mut f = vec![0u32; k as usize + 1];
        f[k as usize] = 1;
        let mut c = code;
        for slot in f.iter_mut().take(k as usize) {
            *slot = (c % p as u64) as u32;
            c /= p as u64;
        }
        if k == 1 || (f[0] != 0 && is_irreducible(&f, p)) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl Fq {
    /// Builds GF(p^k) with the given monic modulus, or the least irreducible one.
    pub fn new(p: u64, k: u32, modulus: Option<Vec<u32>>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::NotPrimePower(1));
        }
        let q = p
            .checked_pow(k)
            .filter(|&q| q <= MAX_ORDER)
            .ok_or(Error::FieldTooLarge(p.saturating_pow(k)))?;
        let p = p as u32;
        let modulus = match modulus {
            Some(mut m) => {
                for c in m.iter_mut() {
                    *c %= p;
                }
                trim(&mut m);
                if m.len() != k as usize + 1 || m[k as usize] != 1 || !is_irreducible(&m, p) {
                    return Err(Error::ReducibleModulus(format!("{m:?}")));
                }
                m
            }
            None => least_irreducible(p, k),
        };
        let q = q as u32;
        let mut field = Fq {
            p,
            k,
            q,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
        };
        field.build_tables();
        Ok(field)
    }

    fn decode(&self, a: u32) -> Vec<u32> {
        let mut v = Vec::with_capacity(self.k as usize);
        let mut a = a;
        for _ in 0..self.k {
            v.push(a % self.p);
            a /= self.p;
        }
        trim(&mut v);
        v
    }

    fn encode(&self, v: &[u32]) -> u32 {
        v.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }

    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let r = poly_mulmod(&self.decode(a), &self.decode(b), &self.modulus, self.p);
        self.encode(&r)
    }

    fn build_tables(&mut self) {
        let q = self.q;
        let order = q - 1;
        let mut exp = vec![0u32; order as usize];
        let mut log = vec![0u32; q as usize];
        'search: for g in 1..q {
            let mut x = 1u32;
            for i in 0..order {
                if i > 0 && x == 1 {
                    continue 'search;
                }
                exp[i as usize] = x;
                x = self.slow_mul(x, g);
            }
            break;
        }
        for (i, &e) in exp.iter().enumerate() {
            log[e as usize] = i as u32;
        }
        self.exp = exp;
        self.log = log;
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn k(&self) -> u32 {
        self.k
    }
    pub fn q(&self) -> u32 {
        self.q
    }
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
    /// The primitive element used for the log tables.
    pub fn generator(&self) -> u32 {
        if self.q == 2 {
            1
        } else {
            self.exp[1]
        }
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        if self.k == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b) = (a, b);
        let (mut r, mut place) = (0, 1);
        for _ in 0..self.k {
            r += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        r
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if self.p == 2 {
            return a;
        }
        if self.k == 1 {
            return (self.p - a) % self.p;
        }
        let mut a = a;
        let (mut r, mut place) = (0, 1);
        for _ in 0..self.k {
            r += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        r
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let order = self.q - 1;
        let s = self.log[a as usize] + self.log[b as usize];
        self.exp[(if s >= order { s - order } else { s }) as usize]
    }

    #[inline]
    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let order = self.q - 1;
        Some(self.exp[((order - self.log[a as usize]) % order) as usize])
    }

    pub fn pow(&self, a: u32, e: i64) -> Option<u32> {
        if a == 0 {
            return match e {
                0 => Some(1),
                e if e > 0 => Some(0),
                _ => None,
            };
        }
        let order = (self.q - 1) as i64;
        let l = (self.log[a as usize] as i64 * e.rem_euclid(order)).rem_euclid(order);
        Some(self.exp[l as usize])
    }

    pub fn log(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.log[a as usize])
    }

    pub fn is_square(&self, a: u32) -> bool {
        a == 0 || self.p == 2 || self.log[a as usize].is_multiple_of(2)
    }

    pub fn sqrt(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return Some(0);
        }
        let order = self.q - 1;
        let l = self.log[a as usize];
        if self.p == 2 {
            // q - 1 is odd, so halving the exponent is multiplication by q/2
            let half = (l as u64 * (self.q as u64 / 2)) % order as u64;
            return Some(self.exp[half as usize]);
        }
        l.is_multiple_of(2).then(|| self.exp[(l / 2) as usize])
    }

    /// Reduces an integer into the prime subfield.
    pub fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }

    /// Coefficients of the residue polynomial, lowest degree first (untrimmed, length k).
    pub fn digits(&self, a: u32) -> Vec<u32> {
        let mut v = Vec::with_capacity(self.k as usize);
        let mut a = a;
        for _ in 0..self.k {
            v.push(a % self.p);
            a /= self.p;
        }
        v
    }

    pub fn from_digits(&self, digits: &[u32]) -> u32 {
        self.encode(digits)
    }

    /// The class of the generator `x` of the residue ring.
    pub fn x(&self) -> u32 {
        if self.k == 1 {
            // the residue ring is F_p itself; x is the root of the linear modulus
            self.neg(self.modulus[0])
        } else {
            self.p
        }
    }
}
