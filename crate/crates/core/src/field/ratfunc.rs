//! Reduced fractions of [`BiPoly`] over GF(2^k).

use super::finite::Fq;
use super::poly::BiPoly;

/// `num / den` with `gcd(num, den) = 1` and `den` graded-lex monic; zero is `0 / 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatFn {
    pub(crate) num: BiPoly,
    pub(crate) den: BiPoly,
}

impl RatFn {
    pub fn zero() -> Self {
        RatFn {
            num: BiPoly::zero(),
            den: BiPoly::one(),
        }
    }

    pub fn from_poly(p: BiPoly) -> Self {
        RatFn {
            num: p,
            den: BiPoly::one(),
        }
    }

    /// Reduces an arbitrary fraction; `den` must be nonzero.
    pub fn new(f: &Fq, num: BiPoly, den: BiPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.gcd(f, &den);
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_exact(f, &g).expect("gcd divides"),
                den.div_exact(f, &g).expect("gcd divides"),
            )
        };
        let (_, _, lc) = den.leading_term().unwrap();
        if lc != 1 {
            let inv = f.inv(lc).unwrap();
            num = num.scale(f, inv);
            den = den.scale(f, inv);
        }
        RatFn { num, den }
    }

    pub fn num(&self) -> &BiPoly {
        &self.num
    }
    pub fn den(&self) -> &BiPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    pub fn add(&self, f: &Fq, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            if self.den.is_one() {
                return RatFn::from_poly(self.num.add(&o.num));
            }
            return RatFn::new(f, self.num.add(&o.num), self.den.clone());
        }
        // b = g b1, d = g d1: a/b + c/d = (a d1 + c b1) / (g b1 d1)
        let g = self.den.gcd(f, &o.den);
        let b1 = self.den.div_exact(f, &g).unwrap();
        let d1 = o.den.div_exact(f, &g).unwrap();
        let num = self.num.mul(f, &d1).add(&o.num.mul(f, &b1));
        if num.is_zero() {
            return Self::zero();
        }
        let g2 = num.gcd(f, &g);
        let num = num.div_exact(f, &g2).unwrap();
        let den = b1.mul(f, &d1).mul(f, &g.div_exact(f, &g2).unwrap());
        RatFn::new_coprime(f, num, den)
    }

    pub fn mul(&self, f: &Fq, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        if self.is_poly() && o.is_poly() {
            return RatFn::from_poly(self.num.mul(f, &o.num));
        }
        let g1 = self.num.gcd(f, &o.den);
        let g2 = o.num.gcd(f, &self.den);
        let num = self
            .num
            .div_exact(f, &g1)
            .unwrap()
            .mul(f, &o.num.div_exact(f, &g2).unwrap());
        let den = self
            .den
            .div_exact(f, &g2)
            .unwrap()
            .mul(f, &o.den.div_exact(f, &g1).unwrap());
        RatFn::new_coprime(f, num, den)
    }

    pub fn scale(&self, f: &Fq, c: u32) -> Self {
        if c == 0 {
            return Self::zero();
        }
        RatFn {
            num: self.num.scale(f, c),
            den: self.den.clone(),
        }
    }

    pub fn inv(&self, f: &Fq) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(RatFn::new_coprime(f, self.den.clone(), self.num.clone()))
    }

    /// Normalizes the denominator's leading coefficient of an already coprime pair.
    fn new_coprime(f: &Fq, num: BiPoly, den: BiPoly) -> Self {
        let (_, _, lc) = den.leading_term().expect("nonzero denominator");
        if lc == 1 {
            return RatFn { num, den };
        }
        let inv = f.inv(lc).unwrap();
        RatFn {
            num: num.scale(f, inv),
            den: den.scale(f, inv),
        }
    }

    pub fn is_square(&self) -> bool {
        // coprime numerator and denominator: f g is a square iff both are
        self.num.is_square() && self.den.is_square()
    }

    pub fn sqrt(&self, f: &Fq) -> Option<Self> {
        // numerator and denominator are coprime, so both must be squares
        let n = self.num.sqrt(f)?;
        let d = self.den.sqrt(f)?;
        Some(RatFn::new_coprime(f, n, d))
    }
}
