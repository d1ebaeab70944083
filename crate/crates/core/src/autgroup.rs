//! Finite subgroups of the automorphism group of an elliptic curve, as
//! sets of affine maps `z -> e^j z + beta`: closure, the decomposition
//! into torsion part and rotation image, action matrices on a torsion
//! generator pair, and classification into the label taxonomy.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use std::fmt;

use crate::error::{Error, Result};
use crate::exact::{rat, IntMatrix2, Rational};
use crate::group::{self, MulTable};
use crate::label::{exists_h, GroupLabel};
use crate::realize;
use crate::torsion::{
    invariant_factors_of_points, subgroup_from_closed_set, LatticeClass, TorsionPoint,
    TorsionSubgroup, DEFAULT_CLOSURE_CAP,
};

pub const DEFAULT_ISO_BOUND: usize = 2000;

/// Affine automorphism `z -> e^j z + beta`, where `e` is the maximal unit
/// of the lattice class and `beta` a torsion point.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AffineAut {
    pub lattice: LatticeClass,
    pub j: u32,
    pub beta: TorsionPoint,
}

impl AffineAut {
    pub fn new(lattice: LatticeClass, j: u32, beta: TorsionPoint) -> AffineAut {
        debug_assert_eq!(beta.lattice, lattice);
        AffineAut {
            lattice,
            j: j % lattice.unit_order(),
            beta,
        }
    }

    pub fn identity(lattice: LatticeClass) -> AffineAut {
        AffineAut::new(lattice, 0, TorsionPoint::zero(lattice))
    }

    pub fn rotation(lattice: LatticeClass, j: u32) -> AffineAut {
        AffineAut::new(lattice, j, TorsionPoint::zero(lattice))
    }

    pub fn translation(beta: TorsionPoint) -> AffineAut {
        AffineAut::new(beta.lattice, 0, beta)
    }

    pub fn is_translation(&self) -> bool {
        self.j == 0
    }

    /// `(j1, b1) o (j2, b2) = (j1 + j2, b1 + e^j1 b2)`.
    pub fn compose(&self, other: &AffineAut) -> AffineAut {
        debug_assert_eq!(self.lattice, other.lattice);
        AffineAut::new(
            self.lattice,
            self.j + other.j,
            self.beta.add(&other.beta.unit_action(self.j)),
        )
    }

    pub fn inverse(&self) -> AffineAut {
        let n = self.lattice.unit_order();
        let jinv = (n - self.j % n) % n;
        AffineAut::new(self.lattice, jinv, self.beta.neg().unit_action(jinv))
    }

    /// Order in the group: a nontrivial rotation part forces the order of
    /// the rotation, otherwise the torsion order of the translation.
    pub fn order(&self) -> u64 {
        let n = self.lattice.unit_order();
        if self.j % n != 0 {
            (n / self.j.gcd(&n)) as u64
        } else {
            self.beta.order().to_u64().expect("torsion order fits u64")
        }
    }
}

impl fmt::Display for AffineAut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (u, v) = self.beta.coords();
        write!(f, "{}:{}:{}", self.j, u, v)
    }
}

/// Compact integer form of a group of affine maps: translations are scaled
/// to Z/N coordinates. Used for fast multiplication tables.
struct CompactGroup {
    n_unit: u32,
    modulus: i64,
    unit_powers: Vec<[[i64; 2]; 2]>,
}

impl CompactGroup {
    fn new(lattice: LatticeClass, modulus: BigInt) -> CompactGroup {
        let m = modulus.to_i64().expect("torsion level fits i64");
        let n_unit = lattice.unit_order();
        let unit_powers = (0..n_unit)
            .map(|j| {
                let mat = lattice.unit_power(j);
                let red = |x: &BigInt| x.mod_floor(&modulus).to_i64().unwrap();
                [[red(&mat.p), red(&mat.r)], [red(&mat.q), red(&mat.s)]]
            })
            .collect();
        CompactGroup {
            n_unit,
            modulus: m,
            unit_powers,
        }
    }

    fn encode(&self, aut: &AffineAut) -> (u32, i64, i64) {
        let modulus = BigInt::from(self.modulus);
        let (a, b) = aut.beta.scaled_coords(&modulus);
        (aut.j, a.to_i64().unwrap(), b.to_i64().unwrap())
    }

    fn mul(&self, x: &(u32, i64, i64), y: &(u32, i64, i64)) -> (u32, i64, i64) {
        let m = self.unit_powers[x.0 as usize];
        let a = (x.1 + m[0][0] * y.1 + m[0][1] * y.2).rem_euclid(self.modulus);
        let b = (x.2 + m[1][0] * y.1 + m[1][1] * y.2).rem_euclid(self.modulus);
        ((x.0 + y.0) % self.n_unit, a, b)
    }
}

/// A finite subgroup of affine automorphisms with its cached
/// decomposition `1 -> G_T -> G -> G_0 -> 1`.
#[derive(Debug, Clone)]
pub struct FiniteSubgroup {
    pub lattice: LatticeClass,
    pub elements: Vec<AffineAut>,
    pub generators: Vec<AffineAut>,
    pub torsion_part: TorsionSubgroup,
    pub unit_part_order: u32,
}

impl FiniteSubgroup {
    pub fn generate(gens: &[AffineAut]) -> Result<FiniteSubgroup> {
        FiniteSubgroup::generate_with_cap(gens, DEFAULT_CLOSURE_CAP)
    }

    pub fn generate_with_cap(gens: &[AffineAut], cap: usize) -> Result<FiniteSubgroup> {
        let lattice = gens
            .first()
            .map(|g| g.lattice)
            .ok_or_else(|| Error::Invalid("at least one generator required".into()))?;
        if gens.iter().any(|g| g.lattice != lattice) {
            return Err(Error::Invalid("generators on different lattices".into()));
        }
        let elements = group::close_group(
            AffineAut::identity(lattice),
            gens,
            |a, b| a.compose(b),
            cap,
        )?;
        Ok(FiniteSubgroup::from_closed_elements(
            lattice,
            elements,
            gens.to_vec(),
        ))
    }

    /// Wrap an element list already closed under composition.
    pub fn from_closed_elements(
        lattice: LatticeClass,
        elements: Vec<AffineAut>,
        generators: Vec<AffineAut>,
    ) -> FiniteSubgroup {
        let torsion_betas: Vec<TorsionPoint> = elements
            .iter()
            .filter(|g| g.is_translation())
            .map(|g| g.beta.clone())
            .collect();
        let torsion_gens: Vec<TorsionPoint> = generators
            .iter()
            .filter(|g| g.is_translation())
            .map(|g| g.beta.clone())
            .collect();
        let torsion_part = subgroup_from_closed_set(lattice, torsion_betas, torsion_gens);
        let mut images: Vec<u32> = elements.iter().map(|g| g.j).collect();
        images.sort_unstable();
        images.dedup();
        let unit_part_order = images.len() as u32;
        debug_assert_eq!(
            torsion_part.order() * unit_part_order as usize,
            elements.len(),
            "exactness of the torsion/rotation decomposition"
        );
        FiniteSubgroup {
            lattice,
            elements,
            generators,
            torsion_part,
            unit_part_order,
        }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// The decomposition data `(G_T, |G_0|)`.
    pub fn decompose(&self) -> (&TorsionSubgroup, u32) {
        (&self.torsion_part, self.unit_part_order)
    }

    /// Rotation order of a generator of the image `G_0` (the actual unit
    /// acting, e.g. 3 when only squares of the hexagonal unit appear).
    pub fn rotation_order(&self) -> u32 {
        self.unit_part_order
    }

    /// Smallest positive unit exponent appearing, i.e. the generator of
    /// the image subgroup of Z_{unit_order}.
    pub fn rotation_generator_exponent(&self) -> u32 {
        let n = self.lattice.unit_order();
        if self.unit_part_order <= 1 {
            0
        } else {
            n / self.unit_part_order
        }
    }

    pub fn is_abelian(&self) -> bool {
        for (i, a) in self.generators.iter().enumerate() {
            for b in &self.generators[i + 1..] {
                if a.compose(b) != b.compose(a) {
                    return false;
                }
            }
        }
        true
    }

    pub fn contains(&self, g: &AffineAut) -> bool {
        self.elements.contains(g)
    }

    /// Dense multiplication table over compact integer coordinates.
    pub fn mul_table(&self) -> MulTable {
        let modulus = self
            .elements
            .iter()
            .fold(BigInt::from(1), |acc, g| acc.lcm(&g.beta.order()));
        let ctx = CompactGroup::new(self.lattice, modulus);
        let compact: Vec<(u32, i64, i64)> = self.elements.iter().map(|g| ctx.encode(g)).collect();
        MulTable::from_elements(&compact, |a, b| ctx.mul(a, b))
    }
}

/// Abstract invariant factors of an abelian subgroup: the torsion factors
/// joined with the split rotation image.
fn abelian_factors(group: &FiniteSubgroup) -> Vec<u64> {
    let (d1, d2) = group.torsion_part.factors_u64();
    match GroupLabel::abelian(&[d1, d2, group.unit_part_order as u64]) {
        GroupLabel::Abelian(fs) => fs,
        _ => unreachable!(),
    }
}

/// Deterministic generator pair for a rank-2 torsion part: `beta'` is an
/// element of maximal order, `beta` one of minimal order completing a
/// generating pair; ties break lexicographically on coordinates.
pub fn torsion_generator_pair(sub: &TorsionSubgroup) -> Result<(TorsionPoint, TorsionPoint)> {
    let (d1, d2) = (&sub.invariant_factors.0, &sub.invariant_factors.1);
    if d1 <= &BigInt::from(1) {
        return Err(Error::RankDeficient);
    }
    let beta_prime = sub
        .elements
        .iter()
        .filter(|p| &p.order() == d2)
        .min_by(|a, b| a.coords().cmp(&b.coords()))
        .cloned()
        .ok_or(Error::RankDeficient)?;
    let full = sub.order();
    let mut orders: Vec<BigInt> = sub.elements.iter().map(|p| p.order()).collect();
    orders.sort();
    orders.dedup();
    for ord in orders {
        let mut candidates: Vec<&TorsionPoint> = sub
            .elements
            .iter()
            .filter(|p| p.order() == ord)
            .collect();
        candidates.sort_by(|a, b| a.coords().cmp(&b.coords()));
        for beta in candidates {
            let (e1, e2) = {
                let f = invariant_factors_of_points(&[beta.clone(), beta_prime.clone()]);
                (f.0, f.1)
            };
            if e1.clone() * e2 == BigInt::from(full) {
                return Ok((beta.clone(), beta_prime.clone()));
            }
        }
    }
    Err(Error::RankDeficient)
}

/// Integer matrix `A` with `e_l (beta, beta') = (beta, beta') A` modulo the
/// lattice, for the rotation `e_l = e^j` given by exponent `j` of the
/// lattice's maximal unit. Entries are canonical: first row reduced mod
/// ord(beta), second row mod ord(beta').
pub fn action_matrix_for_pair(
    j: u32,
    beta: &TorsionPoint,
    beta_prime: &TorsionPoint,
) -> Result<IntMatrix2> {
    let solve = |target: &TorsionPoint| -> Result<(i64, i64)> {
        let ord_b = beta.order().to_i64().unwrap();
        let ord_bp = beta_prime.order().to_i64().unwrap();
        for x in 0..ord_b {
            for y in 0..ord_bp {
                if beta.scalar_mul(x).add(&beta_prime.scalar_mul(y)) == *target {
                    return Ok((x, y));
                }
            }
        }
        Err(Error::Invalid(
            "rotation does not stabilize the span of the generator pair".into(),
        ))
    };
    let (a11, a21) = solve(&beta.unit_action(j))?;
    let (a12, a22) = solve(&beta_prime.unit_action(j))?;
    Ok(IntMatrix2::from_rows(a11, a12, a21, a22))
}

/// Action matrix of the rotation generator on the deterministic torsion
/// generator pair of a nonabelian group with rotation order in {3, 4, 6}.
pub fn action_matrix(group: &FiniteSubgroup) -> Result<IntMatrix2> {
    let l = group.rotation_order();
    if !matches!(l, 3 | 4 | 6) {
        return Err(Error::Invalid(format!(
            "action matrix needs rotation order 3, 4 or 6 (got {l})"
        )));
    }
    let (beta, beta_prime) = torsion_generator_pair(&group.torsion_part)?;
    action_matrix_for_pair(group.rotation_generator_exponent(), &beta, &beta_prime)
}

/// Whether `e^j (beta, beta') = (beta, beta') M` holds modulo the lattice.
pub fn action_relation_holds(
    j: u32,
    beta: &TorsionPoint,
    beta_prime: &TorsionPoint,
    m: &IntMatrix2,
) -> bool {
    let combine = |x: &BigInt, y: &BigInt| {
        let xr = Rational::from_integer(x.clone());
        let yr = Rational::from_integer(y.clone());
        let (u1, v1) = beta.coords();
        let (u2, v2) = beta_prime.coords();
        TorsionPoint::new(beta.lattice, u1 * &xr + u2 * &yr, v1 * &xr + v2 * &yr)
    };
    beta.unit_action(j) == combine(&m.p, &m.q) && beta_prime.unit_action(j) == combine(&m.r, &m.s)
}

/// `A_l = M^{-1} B_l M` for a unimodular base change `M`, where
/// `B_l = (0, -1; 1, -eps)` is the rotation matrix on the basis (1, e_l).
pub fn action_matrix_from_base_change(m: &IntMatrix2, l: u32) -> Result<IntMatrix2> {
    let b = rotation_matrix(l)?;
    let minv = m.inv_unimodular()?;
    let direct = minv.mul(&b).mul(m);
    // Cross-check against the adjugate closed form, which differs from the
    // conjugate exactly by the sign det(M).
    let closed = action_closed_form(m, l)?;
    let expected = if m.det() == BigInt::from(1) {
        closed
    } else {
        closed.neg()
    };
    debug_assert_eq!(direct, expected);
    Ok(direct)
}

/// Closed form adj(M) * B_l * M of the conjugated rotation matrix:
///
/// ```text
/// ( -pr + eps*qr - qs    -r^2 + eps*sr - s^2 )
/// ( p^2 - eps*pq + q^2    pr - eps*ps + qs   )
/// ```
///
/// Equals `det(M) * (M^{-1} B_l M)` for unimodular `M`.
pub fn action_closed_form(m: &IntMatrix2, l: u32) -> Result<IntMatrix2> {
    let b = rotation_matrix(l)?;
    Ok(m.adjugate().mul(&b).mul(m))
}

/// `B_l = (0, -1; 1, -eps)`, `eps = 1, 0, -1` for `l = 3, 4, 6`.
pub fn rotation_matrix(l: u32) -> Result<IntMatrix2> {
    let eps = match l {
        3 => 1i64,
        4 => 0,
        6 => -1,
        _ => {
            return Err(Error::Invalid(format!(
                "rotation matrix defined for l = 3, 4, 6 (got {l})"
            )))
        }
    };
    Ok(IntMatrix2::from_rows(0, -1, 1, -eps))
}

/// Classify a finite subgroup into the label taxonomy; total on every
/// subgroup of an automorphism group.
pub fn classify(group: &FiniteSubgroup) -> Result<GroupLabel> {
    let (torsion, l) = group.decompose();
    let (d1, d2) = torsion.factors_u64();
    if group.is_abelian() {
        return Ok(GroupLabel::Abelian(abelian_factors(group)));
    }
    match l {
        2 => {
            if d1 == 1 {
                if d2 < 3 {
                    return Err(Error::ClassificationFailure {
                        detail: format!(
                            "nonabelian group with inversion on torsion of order {d2}"
                        ),
                    });
                }
                Ok(GroupLabel::dihedral(d2))
            } else {
                Ok(GroupLabel::bidihedral(d1, d2))
            }
        }
        3 | 4 | 6 => {
            let k = d2 / d1.max(1);
            if exists_h(k, l).is_none() {
                return Err(Error::ClassificationFailure {
                    detail: format!("no action exponent exists for k = {k}, l = {l}"),
                });
            }
            if d1 == 1 {
                Ok(GroupLabel::exc1(d2, l))
            } else {
                Ok(GroupLabel::exc2(d1, k, l))
            }
        }
        other => Err(Error::ClassificationFailure {
            detail: format!("unexpected rotation image order {other}"),
        }),
    }
}

/// Action exponent `h` with `e_l beta = h beta` recovered from a cyclic
/// torsion part; `None` when the torsion part is trivial or has rank 2.
pub fn action_exponent(group: &FiniteSubgroup) -> Option<u64> {
    let (torsion, l) = group.decompose();
    if !matches!(l, 3 | 4 | 6) {
        return None;
    }
    let (d1, d2) = torsion.factors_u64();
    if d1 != 1 || d2 == 1 {
        return None;
    }
    let beta = torsion
        .elements
        .iter()
        .find(|p| p.order() == BigInt::from(d2))?;
    let rotated = beta.unit_action(group.rotation_generator_exponent());
    (0..d2 as i64).find(|&h| beta.scalar_mul(h) == rotated).map(|h| h as u64)
}

/// Brute-force isomorphism check between a subgroup and the canonical
/// witness group of a label. Independent of `classify`: it compares
/// multiplication tables.
pub fn iso_check(group: &FiniteSubgroup, label: &GroupLabel) -> Result<bool> {
    iso_check_with_bound(group, label, DEFAULT_ISO_BOUND)
}

pub fn iso_check_with_bound(
    group: &FiniteSubgroup,
    label: &GroupLabel,
    bound: usize,
) -> Result<bool> {
    if group.order() > bound {
        return Err(Error::IsoBoundExceeded {
            order: group.order(),
            bound,
        });
    }
    if group.order() as u64 != label.order() {
        return Ok(false);
    }
    let witness = realize::realize(label)?;
    let canonical = FiniteSubgroup::generate(&witness.generators)?;
    Ok(group::isomorphic(&group.mul_table(), &canonical.mul_table()))
}

/// Conjugate of `tau` by `sigma`.
pub fn conjugate(sigma: &AffineAut, tau: &AffineAut) -> AffineAut {
    sigma.compose(tau).compose(&sigma.inverse())
}

pub fn affine(lattice: LatticeClass, j: u32, u: (i64, i64), v: (i64, i64)) -> AffineAut {
    AffineAut::new(
        lattice,
        j,
        TorsionPoint::new(lattice, rat(u.0, u.1), rat(v.0, v.1)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    fn square_pt(u: (i64, i64), v: (i64, i64)) -> TorsionPoint {
        TorsionPoint::new(LatticeClass::Square, rat(u.0, u.1), rat(v.0, v.1))
    }

    #[test]
    fn composition_law_and_inverse() {
        let s = affine(LatticeClass::Square, 1, (1, 3), (0, 1));
        let t = affine(LatticeClass::Square, 2, (1, 2), (1, 4));
        let st = s.compose(&t);
        assert_eq!(st.j, 3);
        // beta = b_s + i*b_t = (1/3, 0) + i(1/2, 1/4) = (1/3 - 1/4, 1/2)
        assert_eq!(st.beta, square_pt((1, 12), (1, 2)));
        for g in [&s, &t, &st] {
            assert_eq!(g.compose(&g.inverse()), AffineAut::identity(LatticeClass::Square));
            assert_eq!(g.inverse().compose(g), AffineAut::identity(LatticeClass::Square));
        }
    }

    #[test]
    fn rotation_closure_is_cyclic() {
        let g = FiniteSubgroup::generate(&[AffineAut::rotation(LatticeClass::Square, 1)]).unwrap();
        assert_eq!(g.order(), 4);
        let (torsion, l) = g.decompose();
        assert_eq!(torsion.order(), 1);
        assert_eq!(l, 4);
        assert_eq!(classify(&g).unwrap(), GroupLabel::Abelian(vec![4]));
    }

    #[test]
    fn exceptional_order_21_closure() {
        // rotation by e3 (j = 2 on the hexagonal unit), beta = (3 + e3)/7
        let sigma = AffineAut::rotation(LatticeClass::Hexagonal, 2);
        let beta = affine(LatticeClass::Hexagonal, 0, (2, 7), (1, 7));
        let g = FiniteSubgroup::generate(&[sigma, beta]).unwrap();
        assert_eq!(g.order(), 21);
        assert!(!g.is_abelian());
        let (torsion, l) = g.decompose();
        assert_eq!(torsion.factors_u64(), (1, 7));
        assert_eq!(l, 3);
        assert_eq!(classify(&g).unwrap(), GroupLabel::Exc1(7, 3));
        assert_eq!(action_exponent(&g), Some(2));
    }

    fn order_1300_group(m: i64) -> FiniteSubgroup {
        let sigma = AffineAut::rotation(LatticeClass::Square, 1);
        let tau = AffineAut::translation(square_pt((1, 5 * m), (0, 1)));
        let tau_p = AffineAut::translation(square_pt((-5, 65 * m), (1, 65 * m)));
        FiniteSubgroup::generate(&[sigma, tau, tau_p]).unwrap()
    }

    #[test]
    fn order_1300_family() {
        let g = order_1300_group(1);
        assert_eq!(g.order(), 1300);
        let (torsion, l) = g.decompose();
        assert_eq!(torsion.factors_u64(), (5, 65));
        assert_eq!(l, 4);
        assert_eq!(classify(&g).unwrap(), GroupLabel::Exc2(5, 13, 4));
    }

    #[test]
    fn diagonal_action_of_the_order_50_pair() {
        let beta = square_pt((2, 5), (1, 5));
        let beta_p = square_pt((3, 10), (1, 10));
        let a = action_matrix_for_pair(1, &beta, &beta_p).unwrap();
        assert_eq!(a, IntMatrix2::from_rows(2, 0, 0, 3));
        assert!(action_relation_holds(1, &beta, &beta_p, &a));
    }

    #[test]
    fn standard_torsion_basis_inverts_under_the_half_turn() {
        // the half turn (j = 2 on the square lattice) acts as -identity,
        // reduced mod the basis order m
        for m in [2i64, 3, 5] {
            let beta = square_pt((1, m), (0, 1));
            let beta_p = square_pt((0, 1), (1, m));
            let a = action_matrix_for_pair(2, &beta, &beta_p).unwrap();
            let neg = (m - 1).rem_euclid(m);
            assert_eq!(a, IntMatrix2::from_rows(neg, 0, 0, neg), "m = {m}");
        }
    }

    #[test]
    fn base_change_action_matrix() {
        let m = IntMatrix2::from_rows(1, 1, 3, 2);
        let a = action_matrix_from_base_change(&m, 4).unwrap();
        assert_eq!(a, IntMatrix2::from_rows(7, 5, -10, -7));
        assert_eq!(
            action_matrix_from_base_change(&IntMatrix2::identity(), 4).unwrap(),
            IntMatrix2::from_rows(0, -1, 1, 0)
        );
        // the companion base change yields the same action up to sign
        let m2 = IntMatrix2::from_rows(3, 2, -1, -1);
        let a2 = action_matrix_from_base_change(&m2, 4).unwrap();
        assert_eq!(a2, a);
        assert!(matches!(
            action_matrix_from_base_change(&IntMatrix2::from_rows(2, 0, 0, 2), 4),
            Err(Error::NonUnimodular { .. })
        ));
    }

    #[test]
    fn closed_form_matches_conjugation_for_random_unimodular_matrices() {
        use crate::rng::SplitMix64;
        let mut rng = SplitMix64::new(0xbadc0de);
        for _ in 0..200 {
            // random product of elementary matrices is unimodular
            let mut m = IntMatrix2::identity();
            for _ in 0..4 {
                let t = rng.next_u64() as i64 % 5 - 2;
                let e = if rng.next_u64() % 2 == 0 {
                    IntMatrix2::from_rows(1, t, 0, 1)
                } else {
                    IntMatrix2::from_rows(1, 0, t, 1)
                };
                m = m.mul(&e);
            }
            if rng.next_u64() % 2 == 0 {
                m = m.mul(&IntMatrix2::from_rows(0, 1, 1, 0)); // det -1
            }
            for l in [3u32, 4, 6] {
                let a = action_matrix_from_base_change(&m, l).unwrap();
                // conjugation preserves the rotation order and determinant
                assert_eq!(a.det(), int(1));
                assert_eq!(a.pow(l), IntMatrix2::identity());
                for j in 1..l {
                    assert_ne!(a.pow(j), IntMatrix2::identity());
                }
                let closed = action_closed_form(&m, l).unwrap();
                let expected = if m.det() == int(1) { closed } else { closed.neg() };
                assert_eq!(a, expected);
            }
        }
    }

    #[test]
    fn base_change_agrees_with_pair_action_mod_orders() {
        // pair (2 + i)/5, (3 + i)/10 has base change (1, 1; 3, 2)
        let a = action_matrix_from_base_change(&IntMatrix2::from_rows(1, 1, 3, 2), 4).unwrap();
        let diag = IntMatrix2::from_rows(2, 0, 0, 3);
        // congruent mod ord(beta) = 5 on row 1 and ord(beta') = 10 on row 2
        assert_eq!(a.p.mod_floor(&int(5)), diag.p);
        assert_eq!(a.r.mod_floor(&int(5)), diag.r);
        assert_eq!(a.q.mod_floor(&int(10)), diag.q);
        assert_eq!(a.s.mod_floor(&int(10)), diag.s);
    }

    #[test]
    fn action_matrix_with_deterministic_pair() {
        let g = order_1300_group(1);
        let (beta, beta_p) = torsion_generator_pair(&g.torsion_part).unwrap();
        assert_eq!(beta_p.order(), int(65));
        assert_eq!(beta.order(), int(5));
        let a = action_matrix(&g).unwrap();
        assert!(action_relation_holds(1, &beta, &beta_p, &a));
        // canonical entries: first row mod ord(beta), second mod ord(beta')
        assert!(a.p >= int(0) && a.p < int(5) && a.r >= int(0) && a.r < int(5));
        assert!(a.q >= int(0) && a.q < int(65) && a.s >= int(0) && a.s < int(65));
        // rank-one torsion parts admit no action matrix
        let small = FiniteSubgroup::generate(&[
            AffineAut::rotation(LatticeClass::Square, 1),
            affine(LatticeClass::Square, 0, (5, 13), (1, 13)),
        ])
        .unwrap();
        assert!(matches!(action_matrix(&small), Err(Error::RankDeficient)));
    }

    #[test]
    fn dihedral_closure() {
        let sigma = AffineAut::rotation(LatticeClass::Generic, 1);
        let tau = affine(LatticeClass::Generic, 0, (1, 3), (0, 1));
        let g = FiniteSubgroup::generate(&[sigma.clone(), tau.clone()]).unwrap();
        assert_eq!(g.order(), 6);
        assert_eq!(classify(&g).unwrap(), GroupLabel::Dihedral(3));
        // conjugation law: sigma tau sigma^-1 = translation by -beta
        assert_eq!(
            conjugate(&sigma, &tau),
            AffineAut::translation(tau.beta.unit_action(1))
        );
    }

    #[test]
    fn exponent_two_closure_is_abelian_of_rank_three() {
        let sigma = AffineAut::rotation(LatticeClass::Generic, 1);
        let t1 = affine(LatticeClass::Generic, 0, (1, 2), (0, 1));
        let t2 = affine(LatticeClass::Generic, 0, (0, 1), (1, 2));
        let g = FiniteSubgroup::generate(&[sigma, t1, t2]).unwrap();
        assert_eq!(g.order(), 8);
        assert!(g.is_abelian());
        assert_eq!(classify(&g).unwrap(), GroupLabel::Abelian(vec![2, 2, 2]));
    }

    #[test]
    fn iso_check_examples() {
        let sigma = AffineAut::rotation(LatticeClass::Generic, 1);
        let tau = affine(LatticeClass::Generic, 0, (1, 3), (0, 1));
        let s3 = FiniteSubgroup::generate(&[sigma, tau]).unwrap();
        assert!(iso_check(&s3, &GroupLabel::Dihedral(3)).unwrap());
        assert!(!iso_check(&s3, &GroupLabel::abelian(&[6])).unwrap());

        let z9 = FiniteSubgroup::generate(&[affine(LatticeClass::Generic, 0, (1, 9), (0, 1))])
            .unwrap();
        assert!(!iso_check(&z9, &GroupLabel::abelian(&[3, 3])).unwrap());
        assert!(iso_check(&z9, &GroupLabel::abelian(&[9])).unwrap());

        let big = order_1300_group(1);
        assert!(iso_check(&big, &GroupLabel::Exc2(5, 13, 4)).unwrap());
        assert!(matches!(
            iso_check_with_bound(&big, &GroupLabel::Exc2(5, 13, 4), 100),
            Err(Error::IsoBoundExceeded { .. })
        ));
    }

    #[test]
    fn classification_is_total_on_random_subgroups() {
        use crate::rng::SplitMix64;
        let mut rng = SplitMix64::new(0xc1a551f7);
        let lattices = [LatticeClass::Generic, LatticeClass::Square, LatticeClass::Hexagonal];
        for round in 0..200 {
            let lattice = lattices[(round % 3) as usize];
            let n_gens = 1 + (rng.next_u64() % 3) as usize;
            let gens: Vec<AffineAut> = (0..n_gens)
                .map(|_| {
                    let j = (rng.next_u64() % lattice.unit_order() as u64) as u32;
                    let den = 1 + (rng.next_u64() % 4) as i64;
                    let u = rat(rng.next_u64() as i64 % den, den);
                    let mut den2 = 1 + (rng.next_u64() % 4) as i64;
                    if lattice == LatticeClass::Generic && rng.next_u64() % 2 == 0 {
                        den2 = 1;
                    }
                    let v = rat(rng.next_u64() as i64 % den2, den2);
                    AffineAut::new(lattice, j, TorsionPoint::new(lattice, u, v))
                })
                .collect();
            let group = FiniteSubgroup::generate(&gens).expect("torsion closure is finite");
            let label = classify(&group).expect("classification must not fail");
            assert_eq!(group.order() as u64, {
                let (torsion, l) = group.decompose();
                torsion.order() as u64 * l as u64
            });
            // abelian labels round-trip through their own invariants
            if let GroupLabel::Abelian(fs) = &label {
                assert_eq!(fs.iter().product::<u64>(), group.order() as u64);
            }
        }
    }

    #[test]
    fn exactness_and_conjugation_on_samples() {
        let samples = vec![
            vec![AffineAut::rotation(LatticeClass::Hexagonal, 1)],
            vec![
                AffineAut::rotation(LatticeClass::Square, 1),
                affine(LatticeClass::Square, 0, (1, 2), (1, 2)),
            ],
            vec![
                AffineAut::rotation(LatticeClass::Generic, 1),
                affine(LatticeClass::Generic, 0, (1, 4), (0, 1)),
                affine(LatticeClass::Generic, 0, (0, 1), (1, 2)),
            ],
        ];
        for gens in samples {
            let g = FiniteSubgroup::generate(&gens).unwrap();
            let (torsion, l) = g.decompose();
            assert_eq!(torsion.order() * l as usize, g.order());
            for sigma in &g.elements {
                for tau in g.elements.iter().filter(|t| t.is_translation()) {
                    assert_eq!(
                        conjugate(sigma, tau),
                        AffineAut::translation(tau.beta.unit_action(sigma.j))
                    );
                }
            }
        }
    }
}
