//! Exact rational arithmetic, the quadratic cyclotomic fields Q(e3) = Q(e6)
//! and Q(e4), and 2x2 integer matrices.
//!
//! Everything here is exact; there is no floating point anywhere in the
//! crate. Elements of Q(e_l) are stored as `a + b*zeta` with `zeta = e_l`,
//! reduced via the minimal polynomial `e_l^2 + eps*e_l + 1 = 0` where
//! `eps = 1, 0, -1` for `l = 3, 4, 6`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with positive
/// denominator (the backing type maintains both invariants).
pub type Rational = BigRational;

pub fn int(n: i64) -> BigInt {
    BigInt::from(n)
}

/// `n/d` as a [`Rational`]. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(int(n), int(d))
}

pub fn rat_int(n: i64) -> Rational {
    BigRational::from_integer(int(n))
}

/// Selects the quadratic field: `l = 1` means plain Q, otherwise Q(e_l)
/// with `l` in {3, 4, 6}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RingTag {
    Rational,
    Eisenstein, // zeta = e3
    Gauss,      // zeta = e4
    Hexic,      // zeta = e6
}

impl RingTag {
    pub fn from_l(l: u32) -> Result<RingTag> {
        match l {
            1 => Ok(RingTag::Rational),
            3 => Ok(RingTag::Eisenstein),
            4 => Ok(RingTag::Gauss),
            6 => Ok(RingTag::Hexic),
            _ => Err(Error::Invalid(format!("no quadratic ring for l = {l}"))),
        }
    }

    pub fn l(self) -> u32 {
        match self {
            RingTag::Rational => 1,
            RingTag::Eisenstein => 3,
            RingTag::Gauss => 4,
            RingTag::Hexic => 6,
        }
    }

    /// `eps` in `zeta^2 + eps*zeta + 1 = 0`; undefined for plain Q.
    pub fn epsilon(self) -> i64 {
        match self {
            RingTag::Rational => panic!("epsilon is undefined for the rational tag"),
            RingTag::Eisenstein => 1,
            RingTag::Gauss => 0,
            RingTag::Hexic => -1,
        }
    }
}

impl fmt::Display for RingTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingTag::Rational => write!(f, "Q"),
            RingTag::Eisenstein => write!(f, "Q(e3)"),
            RingTag::Gauss => write!(f, "Q(e4)"),
            RingTag::Hexic => write!(f, "Q(e6)"),
        }
    }
}

/// Exact element `a + b*zeta` of a quadratic cyclotomic field.
///
/// For the rational tag `b` is identically zero.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QuadElem {
    pub ring: RingTag,
    pub a: Rational,
    pub b: Rational,
}

impl QuadElem {
    pub fn new(ring: RingTag, a: Rational, b: Rational) -> QuadElem {
        debug_assert!(
            ring != RingTag::Rational || b.is_zero(),
            "rational-tagged element with nonzero zeta part"
        );
        QuadElem { ring, a, b }
    }

    pub fn from_rational(ring: RingTag, a: Rational) -> QuadElem {
        QuadElem::new(ring, a, Rational::zero())
    }

    pub fn zero(ring: RingTag) -> QuadElem {
        QuadElem::from_rational(ring, Rational::zero())
    }

    pub fn one(ring: RingTag) -> QuadElem {
        QuadElem::from_rational(ring, Rational::one())
    }

    /// The generator `zeta` itself. Errors on the rational tag.
    pub fn zeta(ring: RingTag) -> Result<QuadElem> {
        if ring == RingTag::Rational {
            return Err(Error::Invalid("Q has no zeta generator".into()));
        }
        Ok(QuadElem::new(ring, Rational::zero(), Rational::one()))
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    fn check_tag(&self, other: &QuadElem) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::TagMismatch {
                left: self.ring.l(),
                right: other.ring.l(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &QuadElem) -> Result<QuadElem> {
        self.check_tag(other)?;
        Ok(QuadElem::new(
            self.ring,
            &self.a + &other.a,
            &self.b + &other.b,
        ))
    }

    pub fn sub(&self, other: &QuadElem) -> Result<QuadElem> {
        self.check_tag(other)?;
        Ok(QuadElem::new(
            self.ring,
            &self.a - &other.a,
            &self.b - &other.b,
        ))
    }

    pub fn neg(&self) -> QuadElem {
        QuadElem::new(self.ring, -&self.a, -&self.b)
    }

    /// Product, reduced to canonical `a + b*zeta` form via
    /// `zeta^2 = -eps*zeta - 1`.
    pub fn mul(&self, other: &QuadElem) -> Result<QuadElem> {
        self.check_tag(other)?;
        if self.ring == RingTag::Rational {
            return Ok(QuadElem::from_rational(self.ring, &self.a * &other.a));
        }
        let eps = rat_int(self.ring.epsilon());
        let cross = &self.b * &other.b;
        let a = &self.a * &other.a - &cross;
        let b = &self.a * &other.b + &self.b * &other.a - eps * cross;
        Ok(QuadElem::new(self.ring, a, b))
    }

    pub fn scale(&self, c: &Rational) -> QuadElem {
        QuadElem::new(self.ring, &self.a * c, &self.b * c)
    }

    /// Complex conjugate: `conj(zeta) = -eps - zeta`.
    pub fn conj(&self) -> QuadElem {
        if self.ring == RingTag::Rational {
            return self.clone();
        }
        let eps = rat_int(self.ring.epsilon());
        QuadElem::new(self.ring, &self.a - eps * &self.b, -&self.b)
    }

    /// `u * conj(u) = a^2 - eps*a*b + b^2`; nonnegative, zero iff `u = 0`.
    pub fn norm(&self) -> Rational {
        if self.ring == RingTag::Rational {
            return &self.a * &self.a;
        }
        let eps = rat_int(self.ring.epsilon());
        &self.a * &self.a - eps * &self.a * &self.b + &self.b * &self.b
    }

    pub fn inv(&self) -> Result<QuadElem> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm();
        Ok(self.conj().scale(&n.recip()))
    }

    pub fn pow(&self, mut e: u32) -> QuadElem {
        let mut acc = QuadElem::one(self.ring);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("tags agree");
            }
            base = base.mul(&base).expect("tags agree");
            e >>= 1;
        }
        acc
    }

    /// Re-express between the e3 and e6 bases of the common field
    /// (e6 = 1 + e3). Identity for matching tags; other conversions error.
    pub fn to_ring(&self, target: RingTag) -> Result<QuadElem> {
        if self.ring == target {
            return Ok(self.clone());
        }
        match (self.ring, target) {
            (RingTag::Eisenstein, RingTag::Hexic) => {
                // a + b*e3 = (a - b) + b*e6
                Ok(QuadElem::new(target, &self.a - &self.b, self.b.clone()))
            }
            (RingTag::Hexic, RingTag::Eisenstein) => {
                // a + b*e6 = (a + b) + b*e3
                Ok(QuadElem::new(target, &self.a + &self.b, self.b.clone()))
            }
            (RingTag::Rational, _) => Ok(QuadElem::from_rational(target, self.a.clone())),
            _ => Err(Error::TagMismatch {
                left: self.ring.l(),
                right: target.l(),
            }),
        }
    }
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let zeta = format!("e{}", self.ring.l());
        if self.a.is_zero() {
            if self.b.is_one() {
                return write!(f, "{zeta}");
            }
            return write!(f, "{}*{zeta}", self.b);
        }
        if self.b.is_negative() {
            write!(f, "{} - {}*{zeta}", self.a, -&self.b)
        } else {
            write!(f, "{} + {}*{zeta}", self.a, self.b)
        }
    }
}

/// 2x2 integer matrix with columns `(p, q)` and `(r, s)`:
///
/// ```text
/// | p  r |
/// | q  s |
/// ```
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix2 {
    pub p: BigInt,
    pub r: BigInt,
    pub q: BigInt,
    pub s: BigInt,
}

impl IntMatrix2 {
    /// Build from rows: `[[p, r], [q, s]]`.
    pub fn from_rows(p: i64, r: i64, q: i64, s: i64) -> IntMatrix2 {
        IntMatrix2 {
            p: int(p),
            r: int(r),
            q: int(q),
            s: int(s),
        }
    }

    pub fn identity() -> IntMatrix2 {
        IntMatrix2::from_rows(1, 0, 0, 1)
    }

    pub fn det(&self) -> BigInt {
        &self.p * &self.s - &self.r * &self.q
    }

    pub fn mul(&self, other: &IntMatrix2) -> IntMatrix2 {
        IntMatrix2 {
            p: &self.p * &other.p + &self.r * &other.q,
            r: &self.p * &other.r + &self.r * &other.s,
            q: &self.q * &other.p + &self.s * &other.q,
            s: &self.q * &other.r + &self.s * &other.s,
        }
    }

    pub fn neg(&self) -> IntMatrix2 {
        IntMatrix2 {
            p: -&self.p,
            r: -&self.r,
            q: -&self.q,
            s: -&self.s,
        }
    }

    /// Adjugate: `adj(M) * M = det(M) * I`.
    pub fn adjugate(&self) -> IntMatrix2 {
        IntMatrix2 {
            p: self.s.clone(),
            r: -&self.r,
            q: -&self.q,
            s: self.p.clone(),
        }
    }

    /// Exact inverse for unimodular matrices; errors when `det != +-1`.
    pub fn inv_unimodular(&self) -> Result<IntMatrix2> {
        let d = self.det();
        if !(d.clone() == int(1) || d.clone() == int(-1)) {
            return Err(Error::NonUnimodular { det: d.to_string() });
        }
        let adj = self.adjugate();
        // 1/det = det for det = +-1
        if d == int(1) {
            Ok(adj)
        } else {
            Ok(adj.neg())
        }
    }

    pub fn pow(&self, e: u32) -> IntMatrix2 {
        let mut acc = IntMatrix2::identity();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Column-vector action on exact rational coordinates.
    pub fn apply(&self, u: &Rational, v: &Rational) -> (Rational, Rational) {
        let p = BigRational::from_integer(self.p.clone());
        let r = BigRational::from_integer(self.r.clone());
        let q = BigRational::from_integer(self.q.clone());
        let s = BigRational::from_integer(self.s.clone());
        (p * u + r * v, q * u + s * v)
    }
}

impl fmt::Display for IntMatrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}; {}, {})", self.p, self.r, self.q, self.s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn q(ring: RingTag, a: (i64, i64), b: (i64, i64)) -> QuadElem {
        QuadElem::new(ring, rat(a.0, a.1), rat(b.0, b.1))
    }

    #[test]
    fn e4_squares_to_minus_one() {
        let i = QuadElem::zeta(RingTag::Gauss).unwrap();
        let prod = i.mul(&i).unwrap();
        assert_eq!(prod, q(RingTag::Gauss, (-1, 1), (0, 1)));
    }

    #[test]
    fn one_plus_e3_squares_to_e3() {
        let u = q(RingTag::Eisenstein, (1, 1), (1, 1));
        assert_eq!(u.mul(&u).unwrap(), QuadElem::zeta(RingTag::Eisenstein).unwrap());
    }

    #[test]
    fn gauss_norm_product() {
        let u = q(RingTag::Gauss, (2, 1), (1, 1));
        let v = u.conj();
        assert_eq!(u.mul(&v).unwrap(), QuadElem::from_rational(RingTag::Gauss, rat_int(5)));
    }

    #[test]
    fn norms() {
        assert_eq!(QuadElem::zero(RingTag::Gauss).norm(), rat_int(0));
        assert_eq!(q(RingTag::Eisenstein, (3, 1), (1, 1)).norm(), rat_int(7));
        assert_eq!(QuadElem::zeta(RingTag::Hexic).unwrap().norm(), rat_int(1));
    }

    #[test]
    fn zeta_has_exact_order_l() {
        for ring in [RingTag::Eisenstein, RingTag::Gauss, RingTag::Hexic] {
            let l = ring.l();
            let z = QuadElem::zeta(ring).unwrap();
            assert_eq!(z.pow(l), QuadElem::one(ring));
            for j in 1..l {
                assert_ne!(z.pow(j), QuadElem::one(ring), "zeta^{j} = 1 for l = {l}");
            }
        }
    }

    #[test]
    fn conversion_between_e3_and_e6() {
        let e3 = QuadElem::zeta(RingTag::Eisenstein).unwrap();
        let e6 = QuadElem::zeta(RingTag::Hexic).unwrap();
        // e6 = 1 + e3
        let one_plus_e3 = q(RingTag::Eisenstein, (1, 1), (1, 1));
        assert_eq!(one_plus_e3.to_ring(RingTag::Hexic).unwrap(), e6);
        // e3 = e6 - 1
        let e6_minus_one = q(RingTag::Hexic, (-1, 1), (1, 1));
        assert_eq!(e6_minus_one.to_ring(RingTag::Eisenstein).unwrap(), e3);
        // round-trip
        let u = q(RingTag::Eisenstein, (5, 7), (-3, 2));
        assert_eq!(u.to_ring(RingTag::Hexic).unwrap().to_ring(RingTag::Eisenstein).unwrap(), u);
    }

    #[test]
    fn tag_mismatch_is_an_error() {
        let u = QuadElem::zeta(RingTag::Gauss).unwrap();
        let v = QuadElem::zeta(RingTag::Eisenstein).unwrap();
        assert!(matches!(u.mul(&v), Err(Error::TagMismatch { .. })));
    }

    fn random_elem(rng: &mut SplitMix64, ring: RingTag) -> QuadElem {
        let small = |rng: &mut SplitMix64| {
            let n = (rng.next_u64() % 17) as i64 - 8;
            let d = (rng.next_u64() % 5) as i64 + 1;
            rat(n, d)
        };
        let b = if ring == RingTag::Rational {
            Rational::zero()
        } else {
            small(rng)
        };
        QuadElem::new(ring, small(rng), b)
    }

    #[test]
    fn ring_axioms_on_random_triples() {
        let mut rng = SplitMix64::new(0x5eed_0001);
        for ring in [RingTag::Rational, RingTag::Eisenstein, RingTag::Gauss, RingTag::Hexic] {
            for _ in 0..2_500 {
                let u = random_elem(&mut rng, ring);
                let v = random_elem(&mut rng, ring);
                let w = random_elem(&mut rng, ring);
                // associativity and commutativity of multiplication
                let uv_w = u.mul(&v).unwrap().mul(&w).unwrap();
                let u_vw = u.mul(&v.mul(&w).unwrap()).unwrap();
                assert_eq!(uv_w, u_vw);
                assert_eq!(u.mul(&v).unwrap(), v.mul(&u).unwrap());
                // distributivity
                let lhs = u.mul(&v.add(&w).unwrap()).unwrap();
                let rhs = u.mul(&v).unwrap().add(&u.mul(&w).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
                // norm multiplicativity and conjugation
                assert_eq!(u.mul(&v).unwrap().norm(), u.norm() * v.norm());
                assert_eq!(u.mul(&u.conj()).unwrap(), QuadElem::from_rational(ring, u.norm()));
                assert_eq!(u.norm().is_zero(), u.is_zero());
            }
        }
    }

    #[test]
    fn det_examples() {
        assert_eq!(IntMatrix2::from_rows(5, -2, 13, -5).det(), int(1));
        assert_eq!(IntMatrix2::identity().det(), int(1));
    }

    #[test]
    fn unimodular_inverse() {
        let m = IntMatrix2::from_rows(1, 1, 3, 2);
        let inv = m.inv_unimodular().unwrap();
        assert_eq!(inv, IntMatrix2::from_rows(-2, 1, 3, -1));
        assert_eq!(m.mul(&inv), IntMatrix2::identity());
        assert_eq!(inv.mul(&m), IntMatrix2::identity());

        let bad = IntMatrix2::from_rows(2, 0, 0, 2);
        assert!(matches!(bad.inv_unimodular(), Err(Error::NonUnimodular { .. })));
    }
}
