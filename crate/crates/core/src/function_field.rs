//! Exact arithmetic in the function field of a Weierstrass or Legendre
//! curve, curve self-maps as pairs of rational expressions, translation
//! maps from the group law, fiber-counting degree computation, and the
//! Galois-cover certificate.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exact::{QuadElem, Rational, RingTag};
use crate::group::{self, MulTable};
use crate::label::GroupLabel;
use crate::poly::{Poly, RatFn};
use crate::realize;
use crate::rng::SplitMix64;

pub const DEFAULT_ORDER_CAP: u32 = 24;
pub const DEFAULT_DEGREE_SEED: u64 = 0x0ddba11;

/// Smooth cubic model `y^2 = f(x)` with `f` monic of degree 3 over the
/// chosen coefficient field.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CurveModel {
    pub ring: RingTag,
    pub f: Poly,
}

impl CurveModel {
    pub fn from_cubic(f: Poly) -> Result<Arc<CurveModel>> {
        if f.degree() != Some(3) {
            return Err(Error::Invalid(format!(
                "curve polynomial must be cubic (degree {:?})",
                f.degree()
            )));
        }
        if !f.leading().unwrap().is_zero() && f.leading() != Some(&QuadElem::one(f.ring)) {
            let monic = f.monic();
            return CurveModel::from_cubic(monic);
        }
        let g = f.gcd(&f.derivative());
        if g.degree() != Some(0) {
            return Err(Error::Invalid(
                "curve is singular: the cubic has a repeated root".into(),
            ));
        }
        Ok(Arc::new(CurveModel { ring: f.ring, f }))
    }

    /// `y^2 = x^3 + p x + q`.
    pub fn weierstrass(ring: RingTag, p: QuadElem, q: QuadElem) -> Result<Arc<CurveModel>> {
        let f = Poly::new(
            ring,
            vec![q, p, QuadElem::zero(ring), QuadElem::one(ring)],
        );
        CurveModel::from_cubic(f)
    }

    /// `y^2 = x (x - 1) (x - b)`.
    pub fn legendre(ring: RingTag, b: QuadElem) -> Result<Arc<CurveModel>> {
        let x = Poly::x(ring);
        let one = Poly::one(ring);
        let f = x
            .mul(&x.sub(&one))
            .mul(&x.sub(&Poly::constant(b)));
        CurveModel::from_cubic(f)
    }

    /// Coefficient of `x^2` in `f`.
    pub fn a2(&self) -> QuadElem {
        self.f.coeff(2)
    }

    pub fn contains(&self, x: &QuadElem, y: &QuadElem) -> bool {
        y.mul(y).expect("same ring") == self.f.eval(x)
    }
}

/// Affine point or the point at infinity, with exact coordinates.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CurvePoint {
    Infinity,
    Affine(QuadElem, QuadElem),
}

impl CurvePoint {
    pub fn affine(x: QuadElem, y: QuadElem) -> CurvePoint {
        CurvePoint::Affine(x, y)
    }

    pub fn neg(&self) -> CurvePoint {
        match self {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine(x, y) => CurvePoint::Affine(x.clone(), y.neg()),
        }
    }
}

impl fmt::Display for CurvePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurvePoint::Infinity => write!(f, "infinity"),
            CurvePoint::Affine(x, y) => write!(f, "({x}, {y})"),
        }
    }
}

/// Chord-tangent addition with the zero at the point at infinity.
pub fn add_points(curve: &CurveModel, p: &CurvePoint, q: &CurvePoint) -> Result<CurvePoint> {
    let (x1, y1, x2, y2) = match (p, q) {
        (CurvePoint::Infinity, _) => return Ok(q.clone()),
        (_, CurvePoint::Infinity) => return Ok(p.clone()),
        (CurvePoint::Affine(x1, y1), CurvePoint::Affine(x2, y2)) => (x1, y1, x2, y2),
    };
    let lambda = if x1 == x2 {
        if *y1 == y2.neg() {
            return Ok(CurvePoint::Infinity);
        }
        // tangent: f'(x) / (2y)
        let fp = curve.f.derivative().eval(x1);
        let two_y = y1.scale(&Rational::from_integer(2.into()));
        fp.mul(&two_y.inv()?)?
    } else {
        y2.sub(y1)?.mul(&x2.sub(x1)?.inv()?)?
    };
    let x3 = lambda
        .mul(&lambda)?
        .sub(&curve.a2())?
        .sub(x1)?
        .sub(x2)?;
    let y3 = lambda.mul(&x1.sub(&x3)?)?.sub(y1)?;
    Ok(CurvePoint::Affine(x3, y3))
}

/// Order of a point in the curve group, by repeated addition.
pub fn point_order(curve: &CurveModel, p: &CurvePoint, cap: u32) -> Result<u32> {
    let mut acc = p.clone();
    for n in 1..=cap {
        if acc == CurvePoint::Infinity {
            return Ok(n);
        }
        acc = add_points(curve, &acc, p)?;
    }
    Err(Error::OrderCapExceeded { cap })
}

/// Element `r(x) + s(x) * y` of the function field, modulo `y^2 - f(x)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FFElem {
    pub curve: Arc<CurveModel>,
    r: RatFn,
    s: RatFn,
}

impl FFElem {
    pub fn new(curve: Arc<CurveModel>, r: RatFn, s: RatFn) -> FFElem {
        FFElem { curve, r, s }
    }

    pub fn x(curve: &Arc<CurveModel>) -> FFElem {
        FFElem::new(
            curve.clone(),
            RatFn::from_poly(Poly::x(curve.ring)),
            RatFn::zero(curve.ring),
        )
    }

    pub fn y(curve: &Arc<CurveModel>) -> FFElem {
        FFElem::new(
            curve.clone(),
            RatFn::zero(curve.ring),
            RatFn::one(curve.ring),
        )
    }

    pub fn constant(curve: &Arc<CurveModel>, c: QuadElem) -> FFElem {
        FFElem::new(
            curve.clone(),
            RatFn::from_poly(Poly::constant(c)),
            RatFn::zero(curve.ring),
        )
    }

    pub fn rational_part(&self) -> &RatFn {
        &self.r
    }

    pub fn y_part(&self) -> &RatFn {
        &self.s
    }

    pub fn is_zero(&self) -> bool {
        self.r.is_zero() && self.s.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.s.is_zero() && self.r.as_constant().is_some()
    }

    pub fn add(&self, other: &FFElem) -> FFElem {
        FFElem::new(
            self.curve.clone(),
            self.r.add(&other.r),
            self.s.add(&other.s),
        )
    }

    pub fn sub(&self, other: &FFElem) -> FFElem {
        FFElem::new(
            self.curve.clone(),
            self.r.sub(&other.r),
            self.s.sub(&other.s),
        )
    }

    pub fn neg(&self) -> FFElem {
        FFElem::new(self.curve.clone(), self.r.neg(), self.s.neg())
    }

    pub fn mul(&self, other: &FFElem) -> FFElem {
        let f = RatFn::from_poly(self.curve.f.clone());
        let r = self
            .r
            .mul(&other.r)
            .add(&self.s.mul(&other.s).mul(&f));
        let s = self.r.mul(&other.s).add(&self.s.mul(&other.r));
        FFElem::new(self.curve.clone(), r, s)
    }

    /// `(r + s y)^{-1} = (r - s y) / (r^2 - s^2 f)`; the norm vanishes
    /// only on zero because `y^2 - f` is irreducible over the rational
    /// functions.
    pub fn inv(&self) -> Result<FFElem> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f = RatFn::from_poly(self.curve.f.clone());
        let norm = self.r.mul(&self.r).sub(&self.s.mul(&self.s).mul(&f));
        let norm_inv = norm.inv()?;
        Ok(FFElem::new(
            self.curve.clone(),
            self.r.mul(&norm_inv),
            self.s.neg().mul(&norm_inv),
        ))
    }

    pub fn div(&self, other: &FFElem) -> Result<FFElem> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: u32) -> FFElem {
        let mut acc = FFElem::constant(&self.curve, QuadElem::one(self.curve.ring));
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn scale(&self, c: &QuadElem) -> FFElem {
        FFElem::new(self.curve.clone(), self.r.scale(c), self.s.scale(c))
    }
}

impl fmt::Display for FFElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.s.is_zero() {
            return write!(f, "{}", self.r);
        }
        if self.r.is_zero() {
            return write!(f, "({}) * y", self.s);
        }
        write!(f, "{} + ({}) * y", self.r, self.s)
    }
}

fn eval_poly_ff(p: &Poly, at: &FFElem) -> FFElem {
    let curve = &at.curve;
    let mut acc = FFElem::constant(curve, QuadElem::zero(curve.ring));
    let deg = match p.degree() {
        None => return acc,
        Some(d) => d,
    };
    for i in (0..=deg).rev() {
        acc = acc.mul(at).add(&FFElem::constant(curve, p.coeff(i)));
    }
    acc
}

fn eval_ratfn_ff(r: &RatFn, at: &FFElem) -> Result<FFElem> {
    let num = eval_poly_ff(r.num(), at);
    let den = eval_poly_ff(r.den(), at);
    num.div(&den)
}

/// Self-map of the curve given by the images of `x` and `y`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AutMap {
    pub xi: FFElem,
    pub eta: FFElem,
}

impl AutMap {
    pub fn new(xi: FFElem, eta: FFElem) -> AutMap {
        AutMap { xi, eta }
    }

    pub fn identity(curve: &Arc<CurveModel>) -> AutMap {
        AutMap::new(FFElem::x(curve), FFElem::y(curve))
    }

    pub fn is_identity(&self) -> bool {
        *self == AutMap::identity(&self.xi.curve)
    }

    /// Whether the image lands on the curve: `eta^2 = f(xi)` identically.
    pub fn on_curve(&self) -> bool {
        let lhs = self.eta.mul(&self.eta);
        let rhs = eval_poly_ff(&self.xi.curve.f, &self.xi);
        lhs == rhs
    }

    /// Pullback of a function along this map: `g(xi, eta)`.
    pub fn pullback(&self, g: &FFElem) -> Result<FFElem> {
        let r = eval_ratfn_ff(g.rational_part(), &self.xi)?;
        let s = eval_ratfn_ff(g.y_part(), &self.xi)?;
        Ok(r.add(&s.mul(&self.eta)))
    }

    /// Map composition `self . other` (apply `other` first): substitutes
    /// the images of `other` into the formulas of `self`.
    pub fn compose(&self, other: &AutMap) -> Result<AutMap> {
        Ok(AutMap::new(
            other.pullback(&self.xi)?,
            other.pullback(&self.eta)?,
        ))
    }

    /// Least `n >= 1` with the n-fold composite equal to the identity.
    pub fn order(&self, cap: u32) -> Result<u32> {
        let id = AutMap::identity(&self.xi.curve);
        let mut acc = self.clone();
        for n in 1..=cap {
            if acc == id {
                return Ok(n);
            }
            acc = acc.compose(self)?;
        }
        Err(Error::OrderCapExceeded { cap })
    }
}

impl fmt::Display for AutMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x -> {} ; y -> {}", self.xi, self.eta)
    }
}

/// Translation by an affine point, via the chord through the generic
/// point, or the identity map for the point at infinity.
pub fn translation_map(curve: &Arc<CurveModel>, p: &CurvePoint) -> Result<AutMap> {
    let (a, b) = match p {
        CurvePoint::Infinity => return Ok(AutMap::identity(curve)),
        CurvePoint::Affine(a, b) => (a, b),
    };
    if !curve.contains(a, b) {
        return Err(Error::NotOnCurve {
            x: a.to_string(),
            y: b.to_string(),
        });
    }
    let x = FFElem::x(curve);
    let y = FFElem::y(curve);
    let ca = FFElem::constant(curve, a.clone());
    let cb = FFElem::constant(curve, b.clone());
    let lambda = y.sub(&cb).div(&x.sub(&ca))?;
    let xi = lambda
        .mul(&lambda)
        .sub(&FFElem::constant(curve, curve.a2()))
        .sub(&x)
        .sub(&ca);
    let eta = lambda.mul(&x.sub(&xi)).sub(&y);
    Ok(AutMap::new(xi, eta))
}

/// Whether `s` is fixed by the map: `s . m = s` in canonical form.
pub fn is_invariant(s: &FFElem, m: &AutMap) -> Result<bool> {
    Ok(m.pullback(s)? == *s)
}

/// Degree of the map to the projective line defined by a nonconstant
/// function, computed by counting a generic fiber.
///
/// Writing `s = (U(x) + V(x) y) / W(x)` over a common denominator, the
/// fiber over `c` is cut out by `(U - cW)^2 - V^2 f` once factors shared
/// with `W` (poles of `s`) are removed; its `x`-degree counts the fiber
/// with the two sheets built in. Three independent random values of `c`
/// must agree.
pub fn map_degree(s: &FFElem, seed: u64) -> Result<usize> {
    if s.is_constant() || s.is_zero() {
        return Err(Error::ConstantFunction);
    }
    let curve = &s.curve;
    let ring = curve.ring;
    // common denominator
    let (rn, rd) = (s.rational_part().num(), s.rational_part().den());
    let (sn, sd) = (s.y_part().num(), s.y_part().den());
    let g = rd.gcd(sd);
    let w = rd.mul(&sd.divrem(&g)?.0);
    let u = rn.mul(&w.divrem(rd)?.0);
    let v = sn.mul(&w.divrem(sd)?.0);

    // value of s at the infinite place, when finite: avoid sampling it
    let deg_u = u.degree().map_or(-1, |d| d as i64);
    let deg_v = v.degree().map_or(-1, |d| d as i64);
    let deg_w = w.degree().map_or(-1, |d| d as i64);
    let value_at_infinity: Option<QuadElem> =
        if 2 * deg_u <= 2 * deg_w && 2 * deg_v + 3 <= 2 * deg_w {
            if deg_u == deg_w {
                Some(
                    u.leading()
                        .unwrap()
                        .mul(&w.leading().unwrap().inv()?)
                        .expect("same ring"),
                )
            } else {
                Some(QuadElem::zero(ring))
            }
        } else {
            None
        };

    let mut rng = SplitMix64::new(seed);
    let degree_at = |rng: &mut SplitMix64| -> usize {
        loop {
            let c_int = rng.next_range(2, 1 << 31) as i64;
            let c = QuadElem::from_rational(ring, Rational::from_integer(c_int.into()));
            if value_at_infinity.as_ref() == Some(&c) {
                continue;
            }
            let uc = u.sub(&w.scale(&c));
            let fiber = uc.mul(&uc).sub(&v.mul(&v).mul(&curve.f));
            if fiber.is_zero() {
                continue;
            }
            let cleaned = fiber.strip_common_factors(&w);
            return cleaned.degree().unwrap_or(0);
        }
    };

    for _ in 0..2 {
        let d1 = degree_at(&mut rng);
        let d2 = degree_at(&mut rng);
        let d3 = degree_at(&mut rng);
        if d1 == d2 && d2 == d3 {
            return Ok(d1);
        }
    }
    Err(Error::DegenerateDegree)
}

/// Polynomial in the two formal variables `s` and `t` over a quadratic
/// field, used for defining equations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BivarPoly {
    pub ring: RingTag,
    terms: BTreeMap<(u32, u32), QuadElem>,
}

impl BivarPoly {
    pub fn zero(ring: RingTag) -> BivarPoly {
        BivarPoly {
            ring,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: QuadElem) -> BivarPoly {
        let ring = c.ring;
        let mut p = BivarPoly::zero(ring);
        p.add_term(0, 0, c);
        p
    }

    pub fn var_s(ring: RingTag) -> BivarPoly {
        let mut p = BivarPoly::zero(ring);
        p.add_term(1, 0, QuadElem::one(ring));
        p
    }

    pub fn var_t(ring: RingTag) -> BivarPoly {
        let mut p = BivarPoly::zero(ring);
        p.add_term(0, 1, QuadElem::one(ring));
        p
    }

    fn add_term(&mut self, i: u32, j: u32, c: QuadElem) {
        if c.is_zero() {
            return;
        }
        let entry = self
            .terms
            .entry((i, j))
            .or_insert_with(|| QuadElem::zero(self.ring));
        *entry = entry.add(&c).expect("same ring");
        if entry.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &QuadElem)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn add(&self, other: &BivarPoly) -> BivarPoly {
        let mut out = self.clone();
        for (&(i, j), c) in &other.terms {
            out.add_term(i, j, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &BivarPoly) -> BivarPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> BivarPoly {
        BivarPoly {
            ring: self.ring,
            terms: self
                .terms
                .iter()
                .map(|(&k, c)| (k, c.neg()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &BivarPoly) -> BivarPoly {
        let mut out = BivarPoly::zero(self.ring);
        for (&(i1, j1), c1) in &self.terms {
            for (&(i2, j2), c2) in &other.terms {
                out.add_term(i1 + i2, j1 + j2, c1.mul(c2).expect("same ring"));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> BivarPoly {
        let mut acc = BivarPoly::constant(QuadElem::one(self.ring));
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn deg_t(&self) -> u32 {
        self.terms.keys().map(|&(_, j)| j).max().unwrap_or(0)
    }

    pub fn deg_s(&self) -> u32 {
        self.terms.keys().map(|&(i, _)| i).max().unwrap_or(0)
    }

    /// Evaluate at function-field elements, with memoized powers.
    pub fn substitute(&self, s: &FFElem, t: &FFElem) -> FFElem {
        let curve = &s.curve;
        let mut s_pow: Vec<FFElem> =
            vec![FFElem::constant(curve, QuadElem::one(curve.ring))];
        let mut t_pow = s_pow.clone();
        for _ in 0..self.deg_s() {
            s_pow.push(s_pow.last().unwrap().mul(s));
        }
        for _ in 0..self.deg_t() {
            t_pow.push(t_pow.last().unwrap().mul(t));
        }
        let mut acc = FFElem::constant(curve, QuadElem::zero(curve.ring));
        for (&(i, j), c) in &self.terms {
            let term = s_pow[i as usize]
                .mul(&t_pow[j as usize])
                .scale(&c.to_ring(curve.ring).expect("compatible fields"));
            acc = acc.add(&term);
        }
        acc
    }

    /// Every single-coefficient perturbation (coefficient + 1), for
    /// mutation controls.
    pub fn single_coefficient_mutations(&self) -> Vec<BivarPoly> {
        self.terms
            .keys()
            .map(|&(i, j)| {
                let mut m = self.clone();
                m.add_term(i, j, QuadElem::one(self.ring));
                m
            })
            .collect()
    }
}

impl fmt::Display for BivarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(&(i, j), c)| {
                let mut part = format!("({c})");
                if i > 0 {
                    part.push_str(&format!("*s^{i}"));
                }
                if j > 0 {
                    part.push_str(&format!("*t^{j}"));
                }
                part
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Whether `F(s, t)` vanishes identically in the function field.
pub fn verify_relation(relation: &BivarPoly, s: &FFElem, t: &FFElem) -> bool {
    relation.substitute(s, t).is_zero()
}

/// One Galois-cover verification problem: a curve, generating self-maps,
/// the invariant coordinate `s`, the second coordinate `t`, the claimed
/// defining equation `F(s, t) = 0`, and the expected group.
#[derive(Debug, Clone)]
pub struct CoverSpec {
    pub id: String,
    pub curve: Arc<CurveModel>,
    pub generators: Vec<AutMap>,
    pub s: FFElem,
    pub t: FFElem,
    pub relation: BivarPoly,
    pub expected_group: GroupLabel,
}

#[derive(Debug, Clone)]
pub struct ClauseReport {
    pub index: u32,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

/// Certificate report for one cover specification.
#[derive(Debug, Clone)]
pub struct CoverReport {
    pub id: String,
    pub pass: bool,
    pub group_order: Option<usize>,
    pub degree: Option<usize>,
    pub clauses: Vec<ClauseReport>,
}

/// Run the six-clause Galois-cover certificate:
/// (1) the generators are finite-order curve automorphisms;
/// (2) their closure has the expected order and is isomorphic to the
///     expected group;
/// (3) `s` is fixed by every group element;
/// (4) the degree of `s` equals the group order, so the extension it cuts
///     out is exactly the quotient by the group;
/// (5) the claimed relation `F(s, t) = 0` holds and `deg_t F` equals the
///     group order;
/// (6) the pullbacks of `t` along the group are pairwise distinct, so `t`
///     has trivial stabilizer and generates the field over the invariants.
pub fn verify_galois_cover(spec: &CoverSpec, seed: u64) -> CoverReport {
    let mut clauses = Vec::new();
    let n = spec.expected_group.order() as usize;
    let mut group_order = None;
    let mut degree = None;

    // (1) generators are automorphisms of finite order
    {
        let mut pass = true;
        let mut detail = String::new();
        for (i, g) in spec.generators.iter().enumerate() {
            if !g.on_curve() {
                pass = false;
                detail = format!("generator {i} does not map onto the curve");
                break;
            }
            match g.order(DEFAULT_ORDER_CAP) {
                Ok(_) => {}
                Err(_) => {
                    pass = false;
                    detail = format!("generator {i} has order past the cap");
                    break;
                }
            }
        }
        if pass {
            detail = format!("{} generators verified", spec.generators.len());
        }
        clauses.push(ClauseReport {
            index: 1,
            name: "generators-are-automorphisms",
            pass,
            detail,
        });
    }

    // (2) closure has the expected order and isomorphism type
    let elements = group::close_group(
        AutMap::identity(&spec.curve),
        &spec.generators,
        |a, b| a.compose(b).expect("composition of automorphisms"),
        4 * n + 16,
    );
    let elements = elements.unwrap_or_default();
    {
        let mut pass = !elements.is_empty() && elements.len() == n;
        let mut detail;
        if elements.is_empty() {
            detail = "closure exceeded the cap".to_string();
        } else {
            group_order = Some(elements.len());
            detail = format!("closure has order {}", elements.len());
            if pass {
                let table = MulTable::from_elements(&elements, |a, b| {
                    a.compose(b).expect("closed under composition")
                });
                match realize::realize(&spec.expected_group)
                    .and_then(|w| crate::autgroup::FiniteSubgroup::generate(&w.generators))
                {
                    Ok(canonical) => {
                        if !group::isomorphic(&table, &canonical.mul_table()) {
                            pass = false;
                            detail = format!(
                                "closure of order {} is not isomorphic to {}",
                                elements.len(),
                                spec.expected_group
                            );
                        } else {
                            detail = format!(
                                "closure of order {} matches {}",
                                elements.len(),
                                spec.expected_group
                            );
                        }
                    }
                    Err(e) => {
                        pass = false;
                        detail = format!("expected group has no witness: {e}");
                    }
                }
            }
        }
        clauses.push(ClauseReport {
            index: 2,
            name: "group-order-and-type",
            pass,
            detail,
        });
    }

    // (3) s is invariant under the whole group
    {
        let mut pass = true;
        let mut detail = String::new();
        for (i, g) in elements.iter().enumerate() {
            match is_invariant(&spec.s, g) {
                Ok(true) => {}
                Ok(false) => {
                    pass = false;
                    detail = format!("element {i} moves s");
                    break;
                }
                Err(e) => {
                    pass = false;
                    detail = format!("pullback of s failed: {e}");
                    break;
                }
            }
        }
        if pass {
            detail = format!("s fixed by all {} elements", elements.len());
        }
        clauses.push(ClauseReport {
            index: 3,
            name: "s-is-invariant",
            pass,
            detail,
        });
    }

    // (4) deg(s) = n
    {
        let (pass, detail) = match map_degree(&spec.s, seed) {
            Ok(d) => {
                degree = Some(d);
                (d == n, format!("degree of s is {d}, group order is {n}"))
            }
            Err(e) => (false, format!("degree computation failed: {e}")),
        };
        clauses.push(ClauseReport {
            index: 4,
            name: "degree-matches-order",
            pass,
            detail,
        });
    }

    // (5) F(s, t) = 0 and deg_t F = n
    {
        let holds = verify_relation(&spec.relation, &spec.s, &spec.t);
        let dt = spec.relation.deg_t() as usize;
        let pass = holds && dt == n;
        let detail = if !holds {
            "relation does not vanish".to_string()
        } else {
            format!("relation vanishes, deg_t = {dt}")
        };
        clauses.push(ClauseReport {
            index: 5,
            name: "defining-equation",
            pass,
            detail,
        });
    }

    // (6) pullbacks of t are pairwise distinct
    {
        let mut images = Vec::new();
        let mut pass = true;
        let mut detail = String::new();
        for g in &elements {
            match g.pullback(&spec.t) {
                Ok(img) => images.push(img),
                Err(e) => {
                    pass = false;
                    detail = format!("pullback of t failed: {e}");
                    break;
                }
            }
        }
        if pass {
            let mut sorted = images.clone();
            sorted.sort();
            sorted.dedup();
            pass = sorted.len() == elements.len();
            detail = format!(
                "{} distinct conjugates of t out of {}",
                sorted.len(),
                elements.len()
            );
        }
        clauses.push(ClauseReport {
            index: 6,
            name: "t-has-trivial-stabilizer",
            pass,
            detail,
        });
    }

    CoverReport {
        id: spec.id.clone(),
        pass: clauses.iter().all(|c| c.pass),
        group_order,
        degree,
        clauses,
    }
}

/// Unit scalars of the coefficient field (powers of zeta and negations).
pub fn field_units(ring: RingTag) -> Vec<QuadElem> {
    let mut units = vec![QuadElem::one(ring)];
    if let Ok(z) = QuadElem::zeta(ring) {
        let mut acc = z.clone();
        while !units.contains(&acc) {
            units.push(acc.clone());
            acc = acc.mul(&z).expect("same ring");
        }
    }
    let negs: Vec<QuadElem> = units.iter().map(|u| u.neg()).collect();
    for n in negs {
        if !units.contains(&n) {
            units.push(n);
        }
    }
    units
}

/// Candidate automorphisms: coordinate scalings `(x, y) -> (zx, wy)` that
/// preserve the curve, composed with translations by the given points.
pub fn rotation_candidates(
    curve: &Arc<CurveModel>,
    translation_points: &[CurvePoint],
) -> Result<Vec<AutMap>> {
    let x = FFElem::x(curve);
    let y = FFElem::y(curve);
    let mut rotations = Vec::new();
    for z in field_units(curve.ring) {
        for w in field_units(curve.ring) {
            let m = AutMap::new(x.scale(&z), y.scale(&w));
            if m.on_curve() {
                rotations.push(m);
            }
        }
    }
    let mut translations = vec![AutMap::identity(curve)];
    for p in translation_points {
        translations.push(translation_map(curve, p)?);
    }
    let mut out = Vec::new();
    for t in &translations {
        for r in &rotations {
            let m = t.compose(r)?;
            if !out.contains(&m) {
                out.push(m);
            }
        }
    }
    Ok(out)
}

/// First nonidentity candidate fixing `s`, if any.
pub fn find_stabilizing_automorphism(
    s: &FFElem,
    candidates: &[AutMap],
) -> Result<Option<AutMap>> {
    for m in candidates {
        if m.is_identity() {
            continue;
        }
        if is_invariant(s, m)? {
            return Ok(Some(m.clone()));
        }
    }
    Ok(None)
}
