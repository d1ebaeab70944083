//! Exhaustive enumeration of all subgroups of the ambient finite group
//! `E[N] x| mu_l` for a lattice class and torsion level N, plus the census
//! checks that cross-validate the classification against it.

use num_traits::ToPrimitive;
use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt::Write as _;

use crate::autgroup::{classify, AffineAut, FiniteSubgroup};
use crate::error::{Error, Result};
use crate::exact::rat;
use crate::label::{exists_h, GroupLabel};
use crate::realize::galois_admissible;
use crate::torsion::{LatticeClass, TorsionPoint};

pub const DEFAULT_AMBIENT_CAP: usize = 2000;

pub const CENSUS_FORMAT_VERSION: u32 = 1;

/// All subgroups of one ambient group, with their labels.
#[derive(Debug, Clone)]
pub struct EnumerationResult {
    pub lattice: LatticeClass,
    pub n: u32,
    pub subgroups: Vec<FiniteSubgroup>,
    pub label_census: BTreeMap<String, usize>,
}

/// Compact ambient element: unit exponent and scaled torsion coordinates.
type Compact = (u32, u32, u32);

/// Ambient group with a dense precomputed multiplication table, so that
/// subgroup closures are pure index operations.
struct Ambient {
    lattice: LatticeClass,
    n: u32,
    size: usize,
    elements: Vec<Compact>,
    table: Vec<u16>,
    #[cfg_attr(not(test), allow(dead_code))]
    inverse: Vec<u16>,
}

impl Ambient {
    fn new(lattice: LatticeClass, n: u32, cap: usize) -> Result<Ambient> {
        let unit_order = lattice.unit_order();
        let size = (n as usize) * (n as usize) * unit_order as usize;
        if size > cap {
            return Err(Error::CapExceeded {
                what: "ambient enumeration group",
                cap,
            });
        }
        let unit_powers: Vec<[[i64; 2]; 2]> = (0..unit_order)
            .map(|j| {
                let m = lattice.unit_power(j);
                let red = |x: &num_bigint::BigInt| {
                    num_integer::Integer::mod_floor(x, &num_bigint::BigInt::from(n))
                        .to_i64()
                        .unwrap()
                };
                [[red(&m.p), red(&m.r)], [red(&m.q), red(&m.s)]]
            })
            .collect();
        let mut elements = Vec::with_capacity(size);
        for j in 0..unit_order {
            for a in 0..n {
                for b in 0..n {
                    elements.push((j, a, b));
                }
            }
        }
        let encode = |(j, a, b): Compact| ((j * n + a) * n + b) as usize;
        let mul = |x: Compact, y: Compact| -> Compact {
            let m = &unit_powers[x.0 as usize];
            let ni = n as i64;
            let a = (x.1 as i64 + m[0][0] * y.1 as i64 + m[0][1] * y.2 as i64).rem_euclid(ni);
            let b = (x.2 as i64 + m[1][0] * y.1 as i64 + m[1][1] * y.2 as i64).rem_euclid(ni);
            ((x.0 + y.0) % unit_order, a as u32, b as u32)
        };
        let mut table = vec![0u16; size * size];
        for (i, &x) in elements.iter().enumerate() {
            for (k, &y) in elements.iter().enumerate() {
                table[i * size + k] = encode(mul(x, y)) as u16;
            }
        }
        let mut inverse = vec![0u16; size];
        for i in 0..size {
            inverse[i] = (0..size)
                .find(|&k| table[i * size + k] == 0)
                .expect("group has inverses") as u16;
        }
        Ok(Ambient {
            lattice,
            n,
            size,
            elements,
            table,
            inverse,
        })
    }

    #[inline]
    fn mul(&self, x: u16, y: u16) -> u16 {
        self.table[x as usize * self.size + y as usize]
    }

    #[cfg(test)]
    fn inv(&self, x: u16) -> u16 {
        self.inverse[x as usize]
    }

    /// Closure of `seed + {extra}` as a sorted index list. The seed must
    /// already be closed.
    fn close(&self, seed: &[u16], extra: u16) -> Vec<u16> {
        let mut seen = vec![false; self.size];
        let mut queue: VecDeque<u16> = VecDeque::new();
        queue.push_back(0);
        let mut gens: Vec<u16> = seed.to_vec();
        gens.push(extra);
        let mut count = 0usize;
        while let Some(g) = queue.pop_front() {
            if seen[g as usize] {
                continue;
            }
            seen[g as usize] = true;
            count += 1;
            for &h in &gens {
                let p = self.mul(g, h);
                if !seen[p as usize] {
                    queue.push_back(p);
                }
            }
        }
        let mut out = Vec::with_capacity(count);
        for (i, &flag) in seen.iter().enumerate() {
            if flag {
                out.push(i as u16);
            }
        }
        out
    }

    fn materialize(&self, set: &[u16], gens: &[u16]) -> FiniteSubgroup {
        let to_aut = |&i: &u16| {
            let (j, a, b) = self.elements[i as usize];
            AffineAut::new(
                self.lattice,
                j,
                TorsionPoint::new(
                    self.lattice,
                    rat(a as i64, self.n as i64),
                    rat(b as i64, self.n as i64),
                ),
            )
        };
        let elements: Vec<AffineAut> = set.iter().map(to_aut).collect();
        let generators: Vec<AffineAut> = if gens.is_empty() {
            vec![AffineAut::identity(self.lattice)]
        } else {
            gens.iter().map(to_aut).collect()
        };
        FiniteSubgroup::from_closed_elements(self.lattice, elements, generators)
    }
}

/// Enumerate every subgroup of `E[N] x| mu_l` by iterated one-element
/// extensions from the trivial subgroup, deduplicated by element set.
pub fn enumerate_subgroups(lattice: LatticeClass, n: u32) -> Result<EnumerationResult> {
    enumerate_subgroups_with_cap(lattice, n, DEFAULT_AMBIENT_CAP)
}

pub fn enumerate_subgroups_with_cap(
    lattice: LatticeClass,
    n: u32,
    cap: usize,
) -> Result<EnumerationResult> {
    let ambient = Ambient::new(lattice, n, cap)?;
    let trivial: Vec<u16> = vec![0];
    let mut known: HashSet<Vec<u16>> = HashSet::new();
    let mut gens_of: Vec<(Vec<u16>, Vec<u16>)> = Vec::new();
    let mut queue: VecDeque<(Vec<u16>, Vec<u16>)> = VecDeque::new();
    known.insert(trivial.clone());
    gens_of.push((trivial.clone(), Vec::new()));
    queue.push_back((trivial, Vec::new()));

    while let Some((set, gens)) = queue.pop_front() {
        for g in 0..ambient.size as u16 {
            if set.binary_search(&g).is_ok() {
                continue;
            }
            let bigger = ambient.close(&set, g);
            if !known.contains(&bigger) {
                let mut new_gens = gens.clone();
                new_gens.push(g);
                known.insert(bigger.clone());
                gens_of.push((bigger.clone(), new_gens.clone()));
                queue.push_back((bigger, new_gens));
            }
        }
    }

    gens_of.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));
    let subgroups: Vec<FiniteSubgroup> = gens_of
        .iter()
        .map(|(set, gens)| ambient.materialize(set, gens))
        .collect();

    let mut label_census: BTreeMap<String, usize> = BTreeMap::new();
    for sub in &subgroups {
        let label = classify(sub).map_err(|e| Error::ClassificationFailure {
            detail: format!("{lattice} N={n}: {e}"),
        })?;
        *label_census.entry(label.to_string()).or_insert(0) += 1;
    }

    Ok(EnumerationResult {
        lattice,
        n,
        subgroups,
        label_census,
    })
}

/// One failed check discovered by [`census_check`].
#[derive(Debug, Clone)]
pub struct CensusViolation {
    pub order: usize,
    pub label: Option<GroupLabel>,
    pub generators: Vec<AffineAut>,
    pub reason: String,
}

/// Outcome of the census cross-checks.
#[derive(Debug, Clone)]
pub struct CensusReport {
    pub lattice: LatticeClass,
    pub n: u32,
    pub subgroup_count: usize,
    pub violations: Vec<CensusViolation>,
}

impl CensusReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

const ROTATING_ABELIAN: [&[u64]; 8] = [
    &[2],
    &[2, 2],
    &[2, 2, 2],
    &[3],
    &[3, 3],
    &[4],
    &[2, 4],
    &[6],
];

/// Validate every enumerated subgroup against the taxonomy: classification
/// is total, abelian groups with a nontrivial rotation part fall in the
/// short list, exceptional labels satisfy the action-exponent condition,
/// the torsion commutation bound holds, and Galois-admissible abelian
/// labels have order at most 9.
pub fn census_check(result: &EnumerationResult) -> CensusReport {
    let mut violations = Vec::new();
    for sub in &result.subgroups {
        let violation = |label: Option<GroupLabel>, reason: String| CensusViolation {
            order: sub.order(),
            label,
            generators: sub.generators.clone(),
            reason,
        };
        let label = match classify(sub) {
            Ok(label) => label,
            Err(e) => {
                violations.push(violation(None, format!("classification failed: {e}")));
                continue;
            }
        };
        let (torsion, l) = sub.decompose();
        if label.is_abelian() {
            if l > 1 {
                if let GroupLabel::Abelian(fs) = &label {
                    if !ROTATING_ABELIAN.contains(&fs.as_slice()) {
                        violations.push(violation(
                            Some(label.clone()),
                            "abelian subgroup with a rotation part outside the short list"
                                .into(),
                        ));
                    }
                }
            }
            // commutation bound: rotations of order 2, 3, 4, 6 force
            // torsion annihilated by 2, 3, 2, 1 respectively
            let bound = match l {
                2 => Some(2),
                3 => Some(3),
                4 => Some(2),
                6 => Some(1),
                _ => None,
            };
            if let Some(bound) = bound {
                for beta in &torsion.elements {
                    if !beta.scalar_mul(bound).is_zero() {
                        violations.push(violation(
                            Some(label.clone()),
                            format!("torsion element {beta} not annihilated by {bound}"),
                        ));
                    }
                }
            }
            if galois_admissible(&label).galois_realizable && label.order() > 9 {
                violations.push(violation(
                    Some(label.clone()),
                    "Galois-admissible abelian label of order > 9".into(),
                ));
            }
        }
        match &label {
            GroupLabel::Exc1(k, l) | GroupLabel::Exc2(_, k, l) => {
                if exists_h(*k, *l).is_none() {
                    violations.push(violation(
                        Some(label.clone()),
                        format!("exceptional label with inadmissible k = {k}"),
                    ));
                }
            }
            _ => {}
        }
        // the existence direction of the taxonomy: anything enumerated
        // must be declared realizable
        if !crate::realize::subgroup_admissible(&label).subgroup_realizable {
            violations.push(violation(
                Some(label.clone()),
                "enumerated subgroup whose label is declared unrealizable".into(),
            ));
        }
        // rank-2 torsion parts have Q-linearly independent generator pairs
        let (d1, _) = torsion.factors_u64();
        if d1 > 1 {
            if let Ok((beta, beta_p)) = crate::autgroup::torsion_generator_pair(torsion) {
                let (u1, v1) = beta.coords();
                let (u2, v2) = beta_p.coords();
                if num_traits::Zero::is_zero(&(u1 * v2 - u2 * v1)) {
                    violations.push(violation(
                        Some(label.clone()),
                        "rank-2 torsion generators are rationally dependent".into(),
                    ));
                }
            }
        }
    }
    CensusReport {
        lattice: result.lattice,
        n: result.n,
        subgroup_count: result.subgroups.len(),
        violations,
    }
}

/// Line-oriented census snapshot with stable field order, for regression
/// comparison.
pub fn write_snapshot(result: &EnumerationResult) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "census v{} lattice={} N={} subgroups={}",
        CENSUS_FORMAT_VERSION,
        result.lattice,
        result.n,
        result.subgroups.len()
    )
    .unwrap();
    for sub in &result.subgroups {
        let label = classify(sub).map(|l| l.to_string()).unwrap_or_else(|_| "?".into());
        let gens: Vec<String> = sub.generators.iter().map(|g| g.to_string()).collect();
        writeln!(
            out,
            "subgroup lattice={} N={} order={} label={} gens={}",
            result.lattice,
            result.n,
            sub.order(),
            label,
            gens.join(";")
        )
        .unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiny_ambient_counts() {
        // subgroups of mu_2, mu_4, mu_6: one per divisor of the order
        assert_eq!(enumerate_subgroups(LatticeClass::Generic, 1).unwrap().subgroups.len(), 2);
        assert_eq!(enumerate_subgroups(LatticeClass::Square, 1).unwrap().subgroups.len(), 3);
        assert_eq!(enumerate_subgroups(LatticeClass::Hexagonal, 1).unwrap().subgroups.len(), 4);
    }

    #[test]
    fn generic_two_torsion_is_elementary_abelian_of_rank_three() {
        // E[2] x| {+-1} = Z2^3 has exactly 16 subgroups
        let result = enumerate_subgroups(LatticeClass::Generic, 2).unwrap();
        assert_eq!(result.subgroups.len(), 16);
        assert!(census_check(&result).passed());
    }

    #[test]
    fn square_two_torsion_census() {
        let result = enumerate_subgroups(LatticeClass::Square, 2).unwrap();
        let report = census_check(&result);
        assert!(report.passed(), "violations: {:?}", report.violations);
        assert!(result.label_census.contains_key("Z2xZ4"));
        assert!(result.label_census.contains_key("Z2^2"));
    }

    #[test]
    fn hexagonal_three_torsion_census() {
        let result = enumerate_subgroups(LatticeClass::Hexagonal, 3).unwrap();
        let report = census_check(&result);
        assert!(report.passed(), "violations: {:?}", report.violations);
        assert!(result.label_census.contains_key("Z3^2"));
        assert!(result.label_census.contains_key("D3"));
    }

    #[test]
    fn ambient_cap() {
        assert!(matches!(
            enumerate_subgroups_with_cap(LatticeClass::Square, 100, 2000),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn conjugation_closure_and_idempotence() {
        let result = enumerate_subgroups(LatticeClass::Square, 2).unwrap();
        let ambient = Ambient::new(LatticeClass::Square, 2, DEFAULT_AMBIENT_CAP).unwrap();
        let keys: HashSet<Vec<u16>> = result
            .subgroups
            .iter()
            .map(|sub| {
                let mut ids: Vec<u16> = sub
                    .elements
                    .iter()
                    .map(|g| {
                        let (u, v) = g.beta.coords();
                        let scale = |x: &crate::exact::Rational| {
                            (x * crate::exact::rat_int(2)).to_integer().to_u32().unwrap() % 2
                        };
                        (((g.j * 2) + scale(u)) * 2 + scale(v)) as u16
                    })
                    .collect();
                ids.sort_unstable();
                ids
            })
            .collect();
        for set in &keys {
            for g in 0..ambient.size as u16 {
                let mut conj: Vec<u16> = set
                    .iter()
                    .map(|&x| ambient.mul(ambient.mul(g, x), ambient.inv(g)))
                    .collect();
                conj.sort_unstable();
                assert!(keys.contains(&conj), "conjugate subgroup missing");
            }
            // idempotence: re-closing the subgroup reproduces it
            let reclosed = ambient.close(set, 0);
            assert!(keys.contains(&reclosed));
        }
        // re-running the closure from each stored generator list
        // reproduces exactly the subgroup it came from
        for sub in &result.subgroups {
            let regenerated = FiniteSubgroup::generate(&sub.generators).unwrap();
            let mut a = regenerated.elements.clone();
            let mut b = sub.elements.clone();
            a.sort();
            b.sort();
            assert_eq!(a, b, "generators do not regenerate their subgroup");
        }
    }

    #[test]
    fn every_census_label_realizes_and_round_trips() {
        use crate::realize::realize;
        let sweep = [
            (LatticeClass::Generic, 3),
            (LatticeClass::Square, 2),
            (LatticeClass::Square, 3),
            (LatticeClass::Hexagonal, 2),
            (LatticeClass::Hexagonal, 3),
        ];
        let mut seen = std::collections::BTreeSet::new();
        for (lattice, n) in sweep {
            let result = enumerate_subgroups(lattice, n).unwrap();
            for label_text in result.label_census.keys() {
                seen.insert(label_text.clone());
            }
        }
        for label_text in seen {
            let label = GroupLabel::parse(&label_text).unwrap();
            let witness = realize(&label).unwrap_or_else(|e| {
                panic!("census label {label_text} failed to realize: {e}")
            });
            let group = FiniteSubgroup::generate(&witness.generators).unwrap();
            assert_eq!(classify(&group).unwrap(), label, "round trip of {label_text}");
            assert_eq!(group.order() as u64, label.order());
        }
    }

    #[test]
    fn snapshot_format_is_stable() {
        let result = enumerate_subgroups(LatticeClass::Generic, 1).unwrap();
        let text = write_snapshot(&result);
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "census v1 lattice=generic N=1 subgroups=2");
        assert_eq!(
            lines.next().unwrap(),
            "subgroup lattice=generic N=1 order=1 label=Z1 gens=0:0:0"
        );
        assert_eq!(
            lines.next().unwrap(),
            "subgroup lattice=generic N=1 order=2 label=Z2 gens=1:0:0"
        );
    }
}
