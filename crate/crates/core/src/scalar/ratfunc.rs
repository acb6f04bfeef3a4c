//! Quotients of polynomials. No gcd reduction is attempted: equality is
//! decided by cross multiplication, and a quotient is collapsed back to a
//! polynomial whenever the denominator divides the numerator exactly.

use super::{GaussRational, Poly};
use std::fmt;

#[derive(Clone, Debug)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn from_poly(p: Poly) -> Self {
        let den = Poly::one(p.ctx());
        RatFunc { num: p, den }
    }

    /// `None` when the denominator is zero.
    pub fn new(num: Poly, den: Poly) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        Some(RatFunc { num, den }.normalized())
    }

    fn normalized(self) -> Self {
        if self.num.is_zero() {
            return RatFunc::from_poly(Poly::zero(self.num.ctx()));
        }
        if let Some(q) = self.num.div_exact(&self.den) {
            return RatFunc::from_poly(q);
        }
        // Make the leading denominator coefficient 1.
        let lc = self.den.leading().map(|(_, c)| c.clone()).unwrap();
        let inv = lc.inv().unwrap();
        RatFunc { num: self.num.scale(&inv), den: self.den.scale(&inv) }
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    /// The polynomial value, if the denominator has cancelled.
    pub fn as_poly(&self) -> Option<Poly> {
        self.den.is_one().then(|| self.num.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn inv(&self) -> Option<Self> {
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return RatFunc { num: &self.num + &o.num, den: self.den.clone() }.normalized();
        }
        RatFunc { num: &(&self.num * &o.den) + &(&o.num * &self.den), den: &self.den * &o.den }.normalized()
    }

    pub fn mul(&self, o: &Self) -> Self {
        RatFunc { num: &self.num * &o.num, den: &self.den * &o.den }.normalized()
    }

    pub fn neg(&self) -> Self {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }

    pub fn scale(&self, c: &GaussRational) -> Self {
        RatFunc { num: self.num.scale(c), den: self.den.clone() }.normalized()
    }
}

impl PartialEq for RatFunc {
    fn eq(&self, o: &Self) -> bool {
        &self.num * &o.den == &o.num * &self.den
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}
