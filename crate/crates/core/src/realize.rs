//! Admissibility oracles and witness construction: which labels occur as
//! subgroups of an elliptic-curve automorphism group, which occur as
//! Galois groups at an outer Galois point, and explicit generators
//! realizing each admissible label.

use num_integer::Integer;

use crate::autgroup::AffineAut;
use crate::error::{Error, Result};
use crate::exact::{rat, IntMatrix2, QuadElem, Rational, RingTag};
use crate::label::{exists_h, GroupLabel};
use crate::torsion::{LatticeClass, TorsionPoint};

/// Explicit generators realizing a label, plus the scaled-lattice data of
/// the rank-two construction when applicable.
#[derive(Debug, Clone)]
pub struct Witness {
    pub lattice: LatticeClass,
    pub generators: Vec<AffineAut>,
    pub scale_data: Option<ScaleData>,
}

/// Bookkeeping of the rank-two construction: a coprime norm-form
/// representation `k = a^2 - eps*a*b + b^2`, the unimodular base change
/// `M = (p, r; q, s)` with `p = a - eps*b`, `q = -b`, and the scale
/// `lambda = d (a + b e_l) / (m k)`.
#[derive(Debug, Clone)]
pub struct ScaleData {
    pub a: i64,
    pub b: i64,
    pub d: i64,
    pub h: u64,
    pub base_change: IntMatrix2,
    pub lambda: QuadElem,
}

/// Outcome of the two admissibility oracles for one label.
#[derive(Debug, Clone)]
pub struct AdmissibilityReport {
    pub label: GroupLabel,
    pub subgroup_realizable: bool,
    pub galois_realizable: bool,
    pub h: Option<u64>,
    pub norm_form_pair: Option<(i64, i64)>,
    pub failure_reason: String,
}

fn unit_fraction(d: u64) -> Rational {
    Rational::new(1.into(), d.into())
}

fn eps_of(l: u32) -> i64 {
    match l {
        3 => 1,
        4 => 0,
        6 => -1,
        _ => panic!("eps defined for l = 3, 4, 6"),
    }
}

/// Coprime `(a, b)` with `k = a^2 - eps*a*b + b^2`, searched over
/// `0 <= a, b <= ceil(sqrt(2k))` (the form dominates `(a^2 + b^2)/2`, and
/// the unit group of the ring moves every representation into the
/// nonnegative quadrant without changing gcd(a, b)).
pub fn norm_form_rep(k: u64, l: u32) -> Option<(i64, i64)> {
    let eps = eps_of(l) as i128;
    let k = k as i128;
    let bound = (2.0 * k as f64).sqrt().ceil() as i128;
    for b in 0..=bound {
        for a in 0..=bound {
            if a * a - eps * a * b + b * b == k && (a as i64).gcd(&(b as i64)) == 1 {
                return Some((a as i64, b as i64));
            }
        }
    }
    None
}

/// Every prime factor of `k` satisfies the congruence forced by the
/// rotation order: `p = 3` or `p = 1 (mod 3)` when `l` is 3 or 6, and
/// `p = 2` or `p = 1 (mod 4)` when `l = 4`.
pub fn prime_condition(k: u64, l: u32) -> bool {
    let mut n = k;
    let mut p = 2u64;
    let ok = |p: u64| match l {
        3 | 6 => p == 3 || p % 3 == 1,
        4 => p == 2 || p % 4 == 1,
        _ => false,
    };
    while p * p <= n {
        if n % p == 0 {
            if !ok(p) {
                return false;
            }
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 && !ok(n) {
        return false;
    }
    true
}

/// The two gcd equalities of the rank-two generator construction:
/// `gcd(ap - bq, bp - eps*bq + aq, mk) = k` and
/// `gcd(ar - bs, br - eps*bs + as, mk) = 1`.
pub fn check_condition_e(
    a: i64,
    b: i64,
    p: i64,
    q: i64,
    r: i64,
    s: i64,
    m: i64,
    k: i64,
    l: u32,
) -> Result<bool> {
    let eps = eps_of(l) as i128;
    let (a, b, p, q, r, s) = (a as i128, b as i128, p as i128, q as i128, r as i128, s as i128);
    let (m, k) = (m as i128, k as i128);
    if a.gcd(&b) != 1 {
        return Err(Error::Invalid(format!("gcd({a}, {b}) must be 1")));
    }
    if p * s - q * r != 1 {
        return Err(Error::Invalid(format!(
            "base change ({p}, {r}; {q}, {s}) must have determinant 1"
        )));
    }
    let g1 = (a * p - b * q).gcd(&(b * p - eps * b * q + a * q)).gcd(&(m * k));
    let g2 = (a * r - b * s).gcd(&(b * r - eps * b * s + a * s)).gcd(&(m * k));
    Ok(g1 == k && g2 == 1)
}

/// Whether the label occurs as a subgroup of the automorphism group of
/// some elliptic curve.
pub fn subgroup_admissible(label: &GroupLabel) -> AdmissibilityReport {
    let mut report = AdmissibilityReport {
        label: label.clone(),
        subgroup_realizable: false,
        galois_realizable: false,
        h: None,
        norm_form_pair: None,
        failure_reason: String::new(),
    };
    match label {
        GroupLabel::Abelian(fs) => {
            // rank <= 2 arises from pure torsion; the only rank-3 group is
            // the exponent-two group of order 8
            if fs.len() <= 2 || fs == &vec![2, 2, 2] {
                report.subgroup_realizable = true;
            } else {
                report.failure_reason =
                    "abelian groups of rank 3 other than the exponent-two group of order 8 \
                     do not embed"
                        .into();
            }
        }
        GroupLabel::Dihedral(_) | GroupLabel::Bidihedral(_, _) => {
            report.subgroup_realizable = true;
        }
        GroupLabel::Exc1(k, l) | GroupLabel::Exc2(_, k, l) => match exists_h(*k, *l) {
            Some(h) => {
                report.subgroup_realizable = true;
                report.h = Some(h);
                report.norm_form_pair = norm_form_rep(*k, *l);
            }
            None => {
                report.failure_reason =
                    format!("k = {k} divides no value of h^2 + eps*h + 1 for l = {l}");
            }
        },
    }
    report
}

/// Abelian groups acceptable at a Galois point: exactly the rank-limited
/// list realizable with a nontrivial rotation part.
fn galois_abelian(fs: &[u64]) -> bool {
    matches!(
        fs,
        [2, 2] | [2, 2, 2] | [3] | [3, 3] | [4] | [2, 4] | [6]
    )
}

/// Whether the label occurs as the Galois group at an outer Galois point:
/// the group must embed, have order at least 3, and admit a realization
/// whose rotation image is nontrivial.
pub fn galois_admissible(label: &GroupLabel) -> AdmissibilityReport {
    let mut report = subgroup_admissible(label);
    if !report.subgroup_realizable {
        return report;
    }
    match label {
        GroupLabel::Abelian(fs) => {
            if label.order() < 3 {
                report.failure_reason = format!("|G| = {} < 3", label.order());
            } else if !galois_abelian(fs) {
                report.failure_reason =
                    "every realization of this abelian group is by pure translations \
                     (|G_0| = 1)"
                        .into();
            } else {
                report.galois_realizable = true;
            }
        }
        // nonabelian labels always realize with |G_0| > 1 and |G| >= 6
        _ => report.galois_realizable = true,
    }
    report
}

fn not_realizable(label: &GroupLabel, reason: &str) -> Error {
    Error::NotRealizable {
        label: label.to_string(),
        reason: reason.to_string(),
    }
}

/// Exceptional translation generator `beta = ((h + eps) + e_l)/k`,
/// expressed in canonical lattice coordinates.
fn exceptional_beta(lattice: LatticeClass, l: u32, h: u64, k: u64) -> TorsionPoint {
    let eps = eps_of(l);
    let ring = lattice.ring().expect("CM lattice");
    let tag = RingTag::from_l(l).expect("l in {3, 4, 6}");
    let numer = num_bigint::BigInt::from(h) + num_bigint::BigInt::from(eps);
    let beta = QuadElem::new(
        tag,
        Rational::new(numer, k.into()),
        unit_fraction(k),
    )
    .to_ring(ring)
    .expect("compatible fields");
    TorsionPoint::from_quad(lattice, &beta).expect("CM lattice")
}

/// Rotation of order `l` on the matching lattice.
fn rotation_of_order(l: u32) -> (LatticeClass, AffineAut) {
    match l {
        2 => (
            LatticeClass::Generic,
            AffineAut::rotation(LatticeClass::Generic, 1),
        ),
        3 => (
            LatticeClass::Hexagonal,
            AffineAut::rotation(LatticeClass::Hexagonal, 2),
        ),
        4 => (
            LatticeClass::Square,
            AffineAut::rotation(LatticeClass::Square, 1),
        ),
        6 => (
            LatticeClass::Hexagonal,
            AffineAut::rotation(LatticeClass::Hexagonal, 1),
        ),
        _ => panic!("rotation order must be 2, 3, 4 or 6"),
    }
}

/// Scale data of the rank-two construction for parameters `(m, k, l)`
/// with the default scale `d = 1`.
fn scale_data(m: u64, k: u64, l: u32) -> Option<ScaleData> {
    scale_data_with_d(m, k, l, 1).ok().flatten()
}

/// Scale data with an explicit `d`; any positive `d` coprime to `m k` is
/// accepted (it rescales lambda without changing the group).
pub fn scale_data_with_d(m: u64, k: u64, l: u32, d: i64) -> Result<Option<ScaleData>> {
    let mk = (m * k) as i64;
    if d <= 0 || d.gcd(&mk) != 1 {
        return Err(Error::Invalid(format!(
            "scale d = {d} must be positive and coprime to mk = {mk}"
        )));
    }
    let h = match exists_h(k, l) {
        Some(h) => h,
        None => return Ok(None),
    };
    let (a, b) = match norm_form_rep(k, l) {
        Some(rep) => rep,
        None => return Ok(None),
    };
    let eps = eps_of(l);
    let p = a - eps * b;
    let q = -b;
    // r, s with s*a + (r - eps*s)*b = 1, i.e. s*(a - eps*b) + r*b = 1
    let e = p.extended_gcd(&b);
    debug_assert_eq!(e.gcd, 1);
    let (s, r) = (e.x, e.y);
    let base_change = IntMatrix2::from_rows(p, r, q, s);
    debug_assert_eq!(base_change.det(), 1.into());
    let tag = RingTag::from_l(l).expect("l in {3, 4, 6}");
    let lambda = QuadElem::new(
        tag,
        Rational::new((d * a).into(), mk.into()),
        Rational::new((d * b).into(), mk.into()),
    );
    Ok(Some(ScaleData {
        a,
        b,
        d,
        h,
        base_change,
        lambda,
    }))
}

/// Construct explicit generators whose closure realizes the label.
pub fn realize(label: &GroupLabel) -> Result<Witness> {
    match label {
        GroupLabel::Abelian(fs) => realize_abelian(label, fs),
        GroupLabel::Dihedral(n) => {
            let (lattice, sigma) = rotation_of_order(2);
            let tau = AffineAut::translation(TorsionPoint::new(
                lattice,
                unit_fraction(*n),
                Rational::from_integer(0.into()),
            ));
            Ok(Witness {
                lattice,
                generators: vec![sigma, tau],
                scale_data: None,
            })
        }
        GroupLabel::Bidihedral(m, n) => {
            let (lattice, sigma) = rotation_of_order(2);
            let tau = AffineAut::translation(TorsionPoint::new(
                lattice,
                unit_fraction(*n),
                Rational::from_integer(0.into()),
            ));
            let tau_p = AffineAut::translation(TorsionPoint::new(
                lattice,
                Rational::from_integer(0.into()),
                unit_fraction(*m),
            ));
            Ok(Witness {
                lattice,
                generators: vec![sigma, tau, tau_p],
                scale_data: None,
            })
        }
        GroupLabel::Exc1(k, l) => {
            let h = exists_h(*k, *l)
                .ok_or_else(|| not_realizable(label, "no admissible action exponent"))?;
            let (lattice, sigma) = rotation_of_order(*l);
            let tau = AffineAut::translation(exceptional_beta(lattice, *l, h, *k));
            Ok(Witness {
                lattice,
                generators: vec![sigma, tau],
                scale_data: scale_data(1, *k, *l),
            })
        }
        GroupLabel::Exc2(m, k, l) => {
            let h = exists_h(*k, *l)
                .ok_or_else(|| not_realizable(label, "no admissible action exponent"))?;
            let (lattice, sigma) = rotation_of_order(*l);
            let t1 = AffineAut::translation(TorsionPoint::new(
                lattice,
                unit_fraction(*m),
                Rational::from_integer(0.into()),
            ));
            let t2 = AffineAut::translation(TorsionPoint::new(
                lattice,
                Rational::from_integer(0.into()),
                unit_fraction(*m),
            ));
            let t3 = AffineAut::translation(exceptional_beta(
                lattice,
                *l,
                h,
                m.checked_mul(*k).expect("m*k fits in u64"),
            ));
            Ok(Witness {
                lattice,
                generators: vec![sigma, t1, t2, t3],
                scale_data: scale_data(*m, *k, *l),
            })
        }
    }
}

fn realize_abelian(label: &GroupLabel, fs: &[u64]) -> Result<Witness> {
    // the short list realizable with a nontrivial rotation part gets the
    // rotation-style witness; every other rank <= 2 group is realized by
    // pure translations on the generic lattice
    match fs {
        [] => Ok(Witness {
            lattice: LatticeClass::Generic,
            generators: vec![AffineAut::identity(LatticeClass::Generic)],
            scale_data: None,
        }),
        [2] => {
            let (lattice, sigma) = rotation_of_order(2);
            Ok(Witness {
                lattice,
                generators: vec![sigma],
                scale_data: None,
            })
        }
        [2, 2] => {
            let (lattice, sigma) = rotation_of_order(2);
            let tau = AffineAut::translation(TorsionPoint::new(
                lattice,
                rat(1, 2),
                Rational::from_integer(0.into()),
            ));
            Ok(Witness {
                lattice,
                generators: vec![sigma, tau],
                scale_data: None,
            })
        }
        [2, 2, 2] => {
            let (lattice, sigma) = rotation_of_order(2);
            let tau = AffineAut::translation(TorsionPoint::new(
                lattice,
                rat(1, 2),
                Rational::from_integer(0.into()),
            ));
            let tau_p = AffineAut::translation(TorsionPoint::new(
                lattice,
                Rational::from_integer(0.into()),
                rat(1, 2),
            ));
            Ok(Witness {
                lattice,
                generators: vec![sigma, tau, tau_p],
                scale_data: None,
            })
        }
        [3] => {
            let (lattice, sigma) = rotation_of_order(3);
            Ok(Witness {
                lattice,
                generators: vec![sigma],
                scale_data: None,
            })
        }
        [3, 3] => {
            // beta = (1 + 2 e3)/3 is fixed by the order-3 rotation
            let (lattice, sigma) = rotation_of_order(3);
            let beta = QuadElem::new(RingTag::Eisenstein, rat(1, 3), rat(2, 3));
            let tau = AffineAut::translation(TorsionPoint::from_quad(lattice, &beta)?);
            Ok(Witness {
                lattice,
                generators: vec![sigma, tau],
                scale_data: None,
            })
        }
        [4] => {
            let (lattice, sigma) = rotation_of_order(4);
            Ok(Witness {
                lattice,
                generators: vec![sigma],
                scale_data: None,
            })
        }
        [2, 4] => {
            // beta = (1 + e4)/2 is fixed by the quarter turn
            let (lattice, sigma) = rotation_of_order(4);
            let tau = AffineAut::translation(TorsionPoint::new(lattice, rat(1, 2), rat(1, 2)));
            Ok(Witness {
                lattice,
                generators: vec![sigma, tau],
                scale_data: None,
            })
        }
        [6] => {
            let (lattice, sigma) = rotation_of_order(6);
            Ok(Witness {
                lattice,
                generators: vec![sigma],
                scale_data: None,
            })
        }
        [d2] => Ok(translation_witness(1, *d2)),
        [d1, d2] => Ok(translation_witness(*d1, *d2)),
        _ => Err(not_realizable(
            label,
            "abelian groups of rank 3 embed only as the exponent-two group of order 8",
        )),
    }
}

fn translation_witness(d1: u64, d2: u64) -> Witness {
    let lattice = LatticeClass::Generic;
    let mut generators = Vec::new();
    if d1 > 1 {
        generators.push(AffineAut::translation(TorsionPoint::new(
            lattice,
            Rational::from_integer(0.into()),
            unit_fraction(d1),
        )));
    }
    generators.push(AffineAut::translation(TorsionPoint::new(
        lattice,
        unit_fraction(d2),
        Rational::from_integer(0.into()),
    )));
    Witness {
        lattice,
        generators,
        scale_data: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::autgroup::{classify, FiniteSubgroup};

    #[test]
    fn exists_h_and_norm_form_agree_on_examples() {
        assert_eq!(norm_form_rep(13, 4), Some((3, 2)));
        assert_eq!(norm_form_rep(7, 3), Some((3, 1)));
        assert_eq!(norm_form_rep(2, 3), None);
        assert_eq!(exists_h(2, 3), None);
    }

    #[test]
    fn prime_condition_examples() {
        assert!(prime_condition(13, 4));
        assert!(!prime_condition(5, 3));
        assert!(prime_condition(1, 3));
        assert!(prime_condition(1, 4));
        // necessary but not sufficient
        assert!(prime_condition(4, 4));
        assert_eq!(exists_h(4, 4), None);
        assert!(prime_condition(9, 3));
        assert_eq!(exists_h(9, 3), None);
    }

    #[test]
    fn condition_e_examples() {
        assert!(check_condition_e(3, 1, 2, -1, 1, 0, 2, 7, 3).unwrap());
        assert!(!check_condition_e(1, 1, 1, 0, 0, 1, 1, 3, 3).unwrap());
        assert!(check_condition_e(1, 0, 1, 0, 0, 1, 1, 1, 4).unwrap());
        assert!(check_condition_e(1, 1, 1, 0, 0, 1, 1, 3, 3).is_ok());
        assert!(check_condition_e(2, 2, 1, 0, 0, 1, 1, 3, 3).is_err());
        assert!(check_condition_e(1, 1, 2, 0, 0, 2, 1, 3, 3).is_err());
    }

    #[test]
    fn scale_data_satisfies_condition_e() {
        for (m, k, l) in [(1u64, 7u64, 3u32), (2, 7, 3), (1, 13, 4), (3, 13, 6), (2, 1, 4)] {
            let data = scale_data(m, k, l).unwrap();
            let mb = &data.base_change;
            let to = |x: &num_bigint::BigInt| i64::try_from(x.clone()).unwrap();
            assert!(check_condition_e(
                data.a,
                data.b,
                to(&mb.p),
                to(&mb.q),
                to(&mb.r),
                to(&mb.s),
                m as i64,
                k as i64,
                l
            )
            .unwrap());
        }
    }

    #[test]
    fn scale_parameter_must_be_coprime() {
        assert!(scale_data_with_d(2, 7, 3, 3).unwrap().is_some());
        assert_eq!(scale_data_with_d(2, 7, 3, 3).unwrap().unwrap().d, 3);
        assert!(scale_data_with_d(2, 7, 3, 7).is_err());
        assert!(scale_data_with_d(2, 7, 3, 0).is_err());
        assert!(scale_data_with_d(1, 5, 3, 1).unwrap().is_none());
    }

    #[test]
    fn realize_exceptional_rank_one() {
        let w = realize(&GroupLabel::Exc1(13, 4)).unwrap();
        assert_eq!(w.lattice, LatticeClass::Square);
        // sigma = quarter turn, beta = (5 + e4)/13
        assert_eq!(w.generators.len(), 2);
        let beta = &w.generators[1].beta;
        assert_eq!(beta.coords().0, &rat(5, 13));
        assert_eq!(beta.coords().1, &rat(1, 13));
        // the quarter turn acts on beta as multiplication by h = 5
        assert_eq!(beta.unit_action(1), beta.scalar_mul(5));
        let g = FiniteSubgroup::generate(&w.generators).unwrap();
        assert_eq!(g.order(), 52);
        assert_eq!(classify(&g).unwrap(), GroupLabel::Exc1(13, 4));
    }

    #[test]
    fn realize_hexic_rotation_only() {
        let w = realize(&GroupLabel::abelian(&[6])).unwrap();
        assert_eq!(w.lattice, LatticeClass::Hexagonal);
        assert_eq!(w.generators.len(), 1);
        let g = FiniteSubgroup::generate(&w.generators).unwrap();
        assert_eq!(classify(&g).unwrap(), GroupLabel::abelian(&[6]));
    }

    #[test]
    fn realize_rank_two_exceptional() {
        let label = GroupLabel::Exc2(5, 13, 4);
        let w = realize(&label).unwrap();
        let g = FiniteSubgroup::generate(&w.generators).unwrap();
        assert_eq!(g.order(), 1300);
        assert_eq!(g.torsion_part.factors_u64(), (5, 65));
        assert_eq!(classify(&g).unwrap(), label);
    }

    #[test]
    fn inadmissible_labels_error() {
        assert!(matches!(
            realize(&GroupLabel::Exc1(5, 3)),
            Err(Error::NotRealizable { .. })
        ));
        assert!(matches!(
            realize(&GroupLabel::abelian(&[3, 3, 3])),
            Err(Error::NotRealizable { .. })
        ));
    }

    #[test]
    fn admissibility_gate_examples() {
        assert!(subgroup_admissible(&GroupLabel::abelian(&[3, 3])).subgroup_realizable);
        assert!(subgroup_admissible(&GroupLabel::abelian(&[4, 4])).subgroup_realizable);
        assert!(!subgroup_admissible(&GroupLabel::abelian(&[3, 3, 3])).subgroup_realizable);
        assert!(subgroup_admissible(&GroupLabel::Exc1(7, 3)).subgroup_realizable);
        assert!(!subgroup_admissible(&GroupLabel::Exc1(5, 3)).subgroup_realizable);

        // the Galois gate is strictly stronger
        assert!(!galois_admissible(&GroupLabel::abelian(&[4, 4])).galois_realizable);
        assert!(!galois_admissible(&GroupLabel::abelian(&[5])).galois_realizable);
        assert!(!galois_admissible(&GroupLabel::abelian(&[2])).galois_realizable);
        assert!(galois_admissible(&GroupLabel::abelian(&[2, 2])).galois_realizable);
        assert!(galois_admissible(&GroupLabel::Dihedral(5)).galois_realizable);
        assert!(galois_admissible(&GroupLabel::Exc2(2, 7, 3)).galois_realizable);
    }
}
