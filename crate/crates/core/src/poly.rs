//! Dense univariate polynomials and rational functions over a quadratic
//! cyclotomic field, the coefficient layer of the function-field engine.


use std::fmt;

use crate::error::{Error, Result};
use crate::exact::{QuadElem, Rational, RingTag};

/// Polynomial in one variable with [`QuadElem`] coefficients, lowest
/// degree first, no trailing zeros (the zero polynomial has no
/// coefficients at all).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Poly {
    pub ring: RingTag,
    coeffs: Vec<QuadElem>,
}

impl Poly {
    pub fn new(ring: RingTag, mut coeffs: Vec<QuadElem>) -> Poly {
        debug_assert!(coeffs.iter().all(|c| c.ring == ring));
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { ring, coeffs }
    }

    pub fn zero(ring: RingTag) -> Poly {
        Poly::new(ring, Vec::new())
    }

    pub fn constant(c: QuadElem) -> Poly {
        let ring = c.ring;
        Poly::new(ring, vec![c])
    }

    pub fn one(ring: RingTag) -> Poly {
        Poly::constant(QuadElem::one(ring))
    }

    /// The monomial `x`.
    pub fn x(ring: RingTag) -> Poly {
        Poly::new(ring, vec![QuadElem::zero(ring), QuadElem::one(ring)])
    }

    pub fn from_int_coeffs(ring: RingTag, coeffs: &[i64]) -> Poly {
        Poly::new(
            ring,
            coeffs
                .iter()
                .map(|&c| QuadElem::from_rational(ring, Rational::from_integer(c.into())))
                .collect(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == QuadElem::one(self.ring)
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> QuadElem {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| QuadElem::zero(self.ring))
    }

    pub fn leading(&self) -> Option<&QuadElem> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| self.coeff(i).add(&other.coeff(i)).expect("same ring"))
            .collect();
        Poly::new(self.ring, coeffs)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly::new(self.ring, self.coeffs.iter().map(|c| c.neg()).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.ring);
        }
        let mut coeffs =
            vec![QuadElem::zero(self.ring); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let prod = a.mul(b).expect("same ring");
                coeffs[i + j] = coeffs[i + j].add(&prod).expect("same ring");
            }
        }
        Poly::new(self.ring, coeffs)
    }

    pub fn scale(&self, c: &QuadElem) -> Poly {
        Poly::new(
            self.ring,
            self.coeffs
                .iter()
                .map(|a| a.mul(c).expect("same ring"))
                .collect(),
        )
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(self.ring);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Euclidean division: `self = q * div + r` with `deg r < deg div`.
    pub fn divrem(&self, div: &Poly) -> Result<(Poly, Poly)> {
        if div.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut rem = self.coeffs.clone();
        let dd = div.coeffs.len() - 1;
        let lead_inv = div.leading().unwrap().inv()?;
        let mut quot = vec![QuadElem::zero(self.ring); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd || (dd == 0 && !rem.is_empty()) {
            if rem.last().is_some_and(|c| c.is_zero()) {
                rem.pop();
                continue;
            }
            if rem.len() <= dd {
                break;
            }
            let shift = rem.len() - 1 - dd;
            let factor = rem.last().unwrap().mul(&lead_inv).expect("same ring");
            for (i, c) in div.coeffs.iter().enumerate() {
                let t = c.mul(&factor).expect("same ring");
                rem[shift + i] = rem[shift + i].sub(&t).expect("same ring");
            }
            debug_assert!(rem.last().unwrap().is_zero());
            rem.pop();
            quot[shift] = factor;
        }
        Ok((Poly::new(self.ring, quot), Poly::new(self.ring, rem)))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b).expect("b nonzero");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Scale to leading coefficient one (zero stays zero).
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => self.clone(),
            Some(lead) => self.scale(&lead.inv().expect("nonzero leading coefficient")),
        }
    }

    pub fn eval(&self, x: &QuadElem) -> QuadElem {
        let mut acc = QuadElem::zero(self.ring);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).expect("same ring").add(c).expect("same ring");
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.scale(&Rational::from_integer((i as i64).into())))
            .collect();
        Poly::new(self.ring, coeffs)
    }

    /// Remove every factor shared with `other`, repeatedly.
    pub fn strip_common_factors(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        loop {
            let g = out.gcd(other);
            match g.degree() {
                Some(d) if d > 0 => {
                    let (q, r) = out.divrem(&g).expect("gcd divides");
                    debug_assert!(r.is_zero());
                    out = q;
                }
                _ => return out,
            }
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("({c})"),
                1 => format!("({c})*x"),
                _ => format!("({c})*x^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// Rational function in canonical form: coprime numerator and denominator
/// with monic denominator.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RatFn {
    num: Poly,
    den: Poly,
}

impl RatFn {
    pub fn new(num: Poly, den: Poly) -> Result<RatFn> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let g = num.gcd(&den);
        let (num, den) = if g.degree().is_some_and(|d| d > 0) {
            (
                num.divrem(&g)?.0,
                den.divrem(&g)?.0,
            )
        } else {
            (num, den)
        };
        let lead_inv = den.leading().unwrap().inv()?;
        Ok(RatFn {
            num: num.scale(&lead_inv),
            den: den.scale(&lead_inv),
        })
    }

    pub fn from_poly(p: Poly) -> RatFn {
        let ring = p.ring;
        RatFn {
            num: p,
            den: Poly::one(ring),
        }
    }

    pub fn zero(ring: RingTag) -> RatFn {
        RatFn::from_poly(Poly::zero(ring))
    }

    pub fn one(ring: RingTag) -> RatFn {
        RatFn::from_poly(Poly::one(ring))
    }

    pub fn ring(&self) -> RingTag {
        self.num.ring
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Constant means both numerator and denominator have degree zero.
    pub fn as_constant(&self) -> Option<QuadElem> {
        if self.den.is_one() && self.num.degree().is_none_or(|d| d == 0) {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }

    pub fn add(&self, other: &RatFn) -> RatFn {
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        let den = self.den.mul(&other.den);
        RatFn::new(num, den).expect("denominators nonzero")
    }

    pub fn sub(&self, other: &RatFn) -> RatFn {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RatFn {
        RatFn {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &RatFn) -> RatFn {
        RatFn::new(self.num.mul(&other.num), self.den.mul(&other.den))
            .expect("denominators nonzero")
    }

    pub fn inv(&self) -> Result<RatFn> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        RatFn::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &RatFn) -> Result<RatFn> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn scale(&self, c: &QuadElem) -> RatFn {
        RatFn::new(self.num.scale(c), self.den.clone()).expect("denominator nonzero")
    }

    pub fn pow(&self, e: u32) -> RatFn {
        let mut acc = RatFn::one(self.ring());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}
