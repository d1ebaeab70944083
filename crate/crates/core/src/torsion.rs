//! Torsion points of the quotient (Q + Q*zeta)/L for the three lattice
//! classes, the multiplication-by-unit matrices, and subgroup structure via
//! integer normal forms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::{HashSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::exact::{rat_int, IntMatrix2, QuadElem, Rational, RingTag};

pub const DEFAULT_CLOSURE_CAP: usize = 1_000_000;

/// The three homothety classes of lattice that matter here: generic
/// (units +-1), square (`Z[e4]`), hexagonal (`Z[e6]` = `Z[e3]`).
///
/// The canonical hexagonal basis is (1, e6); e3-based data is converted on
/// entry via e3 = e6 - 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LatticeClass {
    Generic,
    Square,
    Hexagonal,
}

impl LatticeClass {
    /// Order of the unit group acting on the lattice: 2, 4 or 6.
    pub fn unit_order(self) -> u32 {
        match self {
            LatticeClass::Generic => 2,
            LatticeClass::Square => 4,
            LatticeClass::Hexagonal => 6,
        }
    }

    /// Ring tag of the basis generator, where one exists.
    pub fn ring(self) -> Option<RingTag> {
        match self {
            LatticeClass::Generic => None,
            LatticeClass::Square => Some(RingTag::Gauss),
            LatticeClass::Hexagonal => Some(RingTag::Hexic),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            LatticeClass::Generic => "generic",
            LatticeClass::Square => "square",
            LatticeClass::Hexagonal => "hex",
        }
    }

    pub fn parse(text: &str) -> Result<LatticeClass> {
        match text {
            "generic" => Ok(LatticeClass::Generic),
            "square" => Ok(LatticeClass::Square),
            "hex" | "hexagonal" => Ok(LatticeClass::Hexagonal),
            other => Err(Error::Invalid(format!("unknown lattice class `{other}`"))),
        }
    }

    /// Matrix of multiplication by the primitive unit of order `l` on
    /// coordinates w.r.t. the basis (1, zeta).
    ///
    /// `l = 2` is allowed on every class (it is -I); `l = 4` only on the
    /// square class; `l = 3, 6` only on the hexagonal class.
    pub fn unit_matrix(self, l: u32) -> Result<IntMatrix2> {
        match (self, l) {
            (_, 2) => Ok(IntMatrix2::from_rows(-1, 0, 0, -1)),
            (LatticeClass::Square, 4) => Ok(IntMatrix2::from_rows(0, -1, 1, 0)),
            (LatticeClass::Hexagonal, 6) => Ok(IntMatrix2::from_rows(0, -1, 1, 1)),
            // e3 = e6^2, expressed in the (1, e6) basis
            (LatticeClass::Hexagonal, 3) => Ok(IntMatrix2::from_rows(-1, -1, 1, 0)),
            _ => Err(Error::UnsupportedRotation {
                lattice: self.name(),
                l,
            }),
        }
    }

    /// Matrix of the maximal unit (order = `unit_order`) raised to `j`.
    pub fn unit_power(self, j: u32) -> IntMatrix2 {
        let n = self.unit_order();
        let j = j % n;
        let base = match self {
            LatticeClass::Generic => IntMatrix2::from_rows(-1, 0, 0, -1),
            LatticeClass::Square => self.unit_matrix(4).expect("supported"),
            LatticeClass::Hexagonal => self.unit_matrix(6).expect("supported"),
        };
        base.pow(j)
    }
}

impl fmt::Display for LatticeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// A point of the torsion quotient, stored as canonical coordinates
/// `(u, v)` with `0 <= u, v < 1` w.r.t. the basis (1, zeta).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TorsionPoint {
    pub lattice: LatticeClass,
    u: Rational,
    v: Rational,
}

fn frac_mod_one(x: &Rational) -> Rational {
    let f = x - x.floor();
    debug_assert!(!f.is_negative() && f < Rational::one());
    f
}

impl TorsionPoint {
    pub fn new(lattice: LatticeClass, u: Rational, v: Rational) -> TorsionPoint {
        TorsionPoint {
            lattice,
            u: frac_mod_one(&u),
            v: frac_mod_one(&v),
        }
    }

    pub fn zero(lattice: LatticeClass) -> TorsionPoint {
        TorsionPoint::new(lattice, Rational::zero(), Rational::zero())
    }

    /// Build from an exact field element `beta` of Q(e3/e4/e6); e3-based
    /// elements are re-expressed in the canonical (1, e6) basis first.
    pub fn from_quad(lattice: LatticeClass, beta: &QuadElem) -> Result<TorsionPoint> {
        let ring = lattice
            .ring()
            .ok_or_else(|| Error::Invalid("generic lattice has no field coordinates".into()))?;
        let beta = beta.to_ring(ring)?;
        Ok(TorsionPoint::new(lattice, beta.a, beta.b))
    }

    pub fn coords(&self) -> (&Rational, &Rational) {
        (&self.u, &self.v)
    }

    pub fn is_zero(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }

    pub fn add(&self, other: &TorsionPoint) -> TorsionPoint {
        debug_assert_eq!(self.lattice, other.lattice);
        TorsionPoint::new(self.lattice, &self.u + &other.u, &self.v + &other.v)
    }

    pub fn neg(&self) -> TorsionPoint {
        TorsionPoint::new(self.lattice, -&self.u, -&self.v)
    }

    pub fn scalar_mul(&self, n: i64) -> TorsionPoint {
        let n = rat_int(n);
        TorsionPoint::new(self.lattice, &self.u * &n, &self.v * &n)
    }

    /// Smallest `n >= 1` with `n * beta` in the lattice: the lcm of the
    /// reduced denominators of the two coordinates.
    pub fn order(&self) -> BigInt {
        self.u.denom().lcm(self.v.denom())
    }

    /// Coordinates of `e^j * beta` where `e` is the maximal unit of the
    /// lattice class.
    pub fn unit_action(&self, j: u32) -> TorsionPoint {
        let m = self.lattice.unit_power(j);
        let (u, v) = m.apply(&self.u, &self.v);
        TorsionPoint::new(self.lattice, u, v)
    }

    /// Integer coordinate vector `(u*n, v*n) mod n` for a common
    /// denominator `n` (must be divisible by the point's order).
    pub fn scaled_coords(&self, n: &BigInt) -> (BigInt, BigInt) {
        let scale = |x: &Rational| {
            let s = x * BigRational::from_integer(n.clone());
            debug_assert!(s.denom().is_one(), "scale not divisible by the order");
            s.numer().mod_floor(n)
        };
        (scale(&self.u), scale(&self.v))
    }
}

impl fmt::Display for TorsionPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.u, self.v)
    }
}

/// Finite subgroup of the torsion quotient with its full element set and
/// invariant factors `(d1, d2)`, `d1 | d2`.
#[derive(Debug, Clone)]
pub struct TorsionSubgroup {
    pub lattice: LatticeClass,
    pub elements: Vec<TorsionPoint>,
    pub generators: Vec<TorsionPoint>,
    pub invariant_factors: (BigInt, BigInt),
}

impl TorsionSubgroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn factors_u64(&self) -> (u64, u64) {
        let to = |b: &BigInt| u64::try_from(b.clone()).expect("factor fits in u64");
        (to(&self.invariant_factors.0), to(&self.invariant_factors.1))
    }

    pub fn contains(&self, p: &TorsionPoint) -> bool {
        self.elements.contains(p)
    }
}

/// Hermite-style accumulator for the column lattice of a 2-row integer
/// matrix: folds columns one at a time into an upper-triangular basis
/// `[[x1, x2], [0, y2]]`.
#[derive(Debug, Clone, Default)]
struct ColumnLattice {
    x1: BigInt, // (x1, 0)
    x2: BigInt, // (x2, y2)
    y2: BigInt,
}

impl ColumnLattice {
    fn push(&mut self, mut cx: BigInt, mut cy: BigInt) {
        if !cy.is_zero() {
            if self.y2.is_zero() {
                self.x2 = cx;
                self.y2 = cy;
                return;
            }
            // Extended gcd on the second coordinates; the complementary
            // combination has second coordinate zero and folds into x1.
            let e = self.y2.extended_gcd(&cy);
            let (g, a, b) = (e.gcd, e.x, e.y);
            let new_x2 = &a * &self.x2 + &b * &cx;
            let leftover = (&self.y2 / &g) * &cx - (&cy / &g) * &self.x2;
            self.x2 = new_x2;
            self.y2 = g;
            cx = leftover;
            cy = BigInt::zero();
        }
        debug_assert!(cy.is_zero());
        self.x1 = self.x1.gcd(&cx);
        if !self.x1.is_zero() {
            self.x2 = self.x2.mod_floor(&self.x1);
        }
    }

    /// Elementary divisors `(s1, s2)` with `s1 | s2`; zero entries mean a
    /// free (unconstrained) direction.
    fn smith(&self) -> (BigInt, BigInt) {
        let s1 = self.x1.gcd(&self.x2).gcd(&self.y2);
        if s1.is_zero() {
            return (BigInt::zero(), BigInt::zero());
        }
        let index = (&self.x1 * &self.y2).abs();
        let s2 = if index.is_zero() {
            BigInt::zero()
        } else {
            index / &s1
        };
        (s1, s2)
    }
}

/// Elementary divisors `(d1, d2)` with `d1 | d2` of a 2-row integer
/// matrix. The zero matrix reports `(0, 0)`.
pub fn smith_form(rows: &[Vec<BigInt>; 2]) -> (BigInt, BigInt) {
    assert_eq!(rows[0].len(), rows[1].len());
    let mut acc = ColumnLattice::default();
    for (cx, cy) in rows[0].iter().zip(rows[1].iter()) {
        acc.push(cx.clone(), cy.clone());
    }
    acc.smith()
}

/// Additive closure of the generators with full element set and invariant
/// factors. The factors come from the Smith form of the relation lattice
/// and are cross-checked against the element count.
pub fn subgroup_structure(gens: &[TorsionPoint]) -> Result<TorsionSubgroup> {
    subgroup_structure_with_cap(gens, DEFAULT_CLOSURE_CAP)
}

pub fn subgroup_structure_with_cap(
    gens: &[TorsionPoint],
    cap: usize,
) -> Result<TorsionSubgroup> {
    let lattice = gens
        .first()
        .map(|g| g.lattice)
        .ok_or_else(|| Error::Invalid("at least one generator required".into()))?;
    if gens.iter().any(|g| g.lattice != lattice) {
        return Err(Error::Invalid("generators on different lattices".into()));
    }

    // BFS closure under addition.
    let mut seen: HashSet<TorsionPoint> = HashSet::new();
    let mut elements = Vec::new();
    let mut queue: VecDeque<TorsionPoint> = VecDeque::new();
    queue.push_back(TorsionPoint::zero(lattice));
    while let Some(p) = queue.pop_front() {
        if !seen.insert(p.clone()) {
            continue;
        }
        if seen.len() > cap {
            return Err(Error::CapExceeded {
                what: "torsion closure",
                cap,
            });
        }
        for g in gens {
            queue.push_back(p.add(g));
        }
        elements.push(p);
    }

    elements.sort();
    let factors = invariant_factors_of_points(gens);
    debug_assert!((&factors.0 * &factors.1) == BigInt::from(elements.len()));
    Ok(TorsionSubgroup {
        lattice,
        elements,
        generators: gens.to_vec(),
        invariant_factors: factors,
    })
}

/// Invariant factors `(d1, d2)` of the subgroup generated by the given
/// points, without materializing elements: with N the lcm of the point
/// orders, the subgroup is Lambda / N*Z^2 where Lambda is spanned by the
/// scaled coordinate columns together with (N, 0) and (0, N); the Smith
/// form diag(s1, s2) of that span gives (N/s2, N/s1).
pub fn invariant_factors_of_points(points: &[TorsionPoint]) -> (BigInt, BigInt) {
    let mut n = BigInt::one();
    for g in points {
        n = n.lcm(&g.order());
    }
    let mut acc = ColumnLattice::default();
    acc.push(n.clone(), BigInt::zero());
    acc.push(BigInt::zero(), n.clone());
    for g in points {
        let (a, b) = g.scaled_coords(&n);
        acc.push(a, b);
    }
    let (s1, s2) = acc.smith();
    let d1 = &n / &s2;
    let d2 = &n / &s1;
    debug_assert!(d2.mod_floor(&d1).is_zero());
    (d1, d2)
}

/// Wrap an already-closed element set as a [`TorsionSubgroup`].
pub fn subgroup_from_closed_set(
    lattice: LatticeClass,
    mut elements: Vec<TorsionPoint>,
    generators: Vec<TorsionPoint>,
) -> TorsionSubgroup {
    elements.sort();
    elements.dedup();
    let factors = invariant_factors_of_points(&elements);
    debug_assert!((&factors.0 * &factors.1) == BigInt::from(elements.len()));
    TorsionSubgroup {
        lattice,
        elements,
        generators,
        invariant_factors: factors,
    }
}
