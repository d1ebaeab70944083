//! The taxonomy of group labels: abelian invariant factors, dihedral,
//! bidihedral, and the two exceptional elliptic families E(k, l) and
//! E(m, k, l).
//!
//! Constructors canonicalize degenerate parameters so that every abstract
//! group has exactly one name: bidihedral parameters are reduced to
//! invariant factors, a cyclic bidihedral collapses to a dihedral label,
//! dihedral n <= 2 collapses to an abelian label, E(m, k, l) with m = 1
//! collapses to E(k, l), and E(k, l) whose only action exponent is h = 1
//! collapses to the abelian group it actually is.

use num_integer::Integer;
use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GroupLabel {
    /// Finite abelian group with invariant factors `d1 | d2 | ...`
    /// (ascending, no factors of 1; the trivial group has an empty list).
    Abelian(Vec<u64>),
    /// Dihedral group of order `2n`, `n >= 3`.
    Dihedral(u64),
    /// (Z_m + Z_n) extended by an inverting involution, with `m | n`,
    /// `m >= 2`, `n >= 3`.
    Bidihedral(u64, u64),
    /// Z_k extended by a rotation of order `l` in {3, 4, 6}.
    Exc1(u64, u32),
    /// (Z_m + Z_mk) extended by a rotation of order `l`, `m >= 2`.
    Exc2(u64, u64, u32),
}

/// Smallest `h` in `[0, k)` with `k | h^2 + eps*h + 1`, for the rotation
/// order `l` in {3, 4, 6} (`eps = 1, 0, -1`).
pub fn exists_h(k: u64, l: u32) -> Option<u64> {
    let eps: i128 = match l {
        3 => 1,
        4 => 0,
        6 => -1,
        _ => return None,
    };
    let k_i = k as i128;
    (0..k as i128).find_map(|h| {
        let val = h * h + eps * h + 1;
        (val.rem_euclid(k_i) == 0).then_some(h as u64)
    })
}

/// Whether `E(k, l)` degenerates: every admissible action exponent is
/// `h = 1 (mod k)`, making the would-be exceptional group abelian. This
/// happens exactly for k = 1, (k, l) = (3, 3) and (k, l) = (2, 4).
fn exc1_degenerate(k: u64, l: u32) -> bool {
    k == 1 || (k == 3 && l == 3) || (k == 2 && l == 4)
}

fn merge_invariant_factors(orders: &[u64]) -> Vec<u64> {
    // Prime-power exponents, largest first per prime; d_i multiplies the
    // i-th largest power of every prime.
    let mut primes: Vec<(u64, Vec<u32>)> = Vec::new();
    for &n in orders {
        let mut n = n;
        let mut p = 2;
        while p * p <= n {
            if n % p == 0 {
                let mut e = 0;
                while n % p == 0 {
                    n /= p;
                    e += 1;
                }
                match primes.iter_mut().find(|(q, _)| *q == p) {
                    Some((_, es)) => es.push(e),
                    None => primes.push((p, vec![e])),
                }
            }
            p += 1;
        }
        if n > 1 {
            match primes.iter_mut().find(|(q, _)| *q == n) {
                Some((_, es)) => es.push(1),
                None => primes.push((n, vec![1])),
            }
        }
    }
    let rank = primes.iter().map(|(_, es)| es.len()).max().unwrap_or(0);
    let mut factors = Vec::new();
    for i in 0..rank {
        let mut d = 1u64;
        for (p, es) in &mut primes {
            es.sort_unstable_by(|a, b| b.cmp(a));
            if let Some(&e) = es.get(i) {
                d *= p.pow(e);
            }
        }
        factors.push(d);
    }
    factors.sort_unstable();
    factors.retain(|&d| d > 1);
    factors
}

impl GroupLabel {
    /// Abelian label from any list of cyclic orders (not necessarily a
    /// divisor chain); canonicalized to invariant factors.
    pub fn abelian(orders: &[u64]) -> GroupLabel {
        GroupLabel::Abelian(merge_invariant_factors(orders))
    }

    pub fn trivial() -> GroupLabel {
        GroupLabel::Abelian(Vec::new())
    }

    pub fn dihedral(n: u64) -> GroupLabel {
        match n {
            0 | 1 => GroupLabel::abelian(&[2]),
            2 => GroupLabel::abelian(&[2, 2]),
            _ => GroupLabel::Dihedral(n),
        }
    }

    pub fn bidihedral(m: u64, n: u64) -> GroupLabel {
        let (d1, d2) = (m.gcd(&n), m.lcm(&n));
        if d1 <= 1 {
            return GroupLabel::dihedral(d2);
        }
        if d2 <= 2 {
            // exponent-two torsion is centralized by inversion
            return GroupLabel::abelian(&[2, 2, 2]);
        }
        GroupLabel::Bidihedral(d1, d2)
    }

    pub fn exc1(k: u64, l: u32) -> GroupLabel {
        debug_assert!(matches!(l, 3 | 4 | 6));
        if exc1_degenerate(k, l) {
            return GroupLabel::abelian(&[k, l as u64]);
        }
        GroupLabel::Exc1(k, l)
    }

    pub fn exc2(m: u64, k: u64, l: u32) -> GroupLabel {
        debug_assert!(matches!(l, 3 | 4 | 6));
        if m == 1 {
            return GroupLabel::exc1(k, l);
        }
        GroupLabel::Exc2(m, k, l)
    }

    pub fn is_abelian(&self) -> bool {
        matches!(self, GroupLabel::Abelian(_))
    }

    /// Group order the label names (saturating on absurd parameters).
    pub fn order(&self) -> u64 {
        let prod = |xs: &[u64]| xs.iter().fold(1u64, |a, &b| a.saturating_mul(b));
        match self {
            GroupLabel::Abelian(fs) => prod(fs),
            GroupLabel::Dihedral(n) => prod(&[2, *n]),
            GroupLabel::Bidihedral(m, n) => prod(&[2, *m, *n]),
            GroupLabel::Exc1(k, l) => prod(&[*k, *l as u64]),
            GroupLabel::Exc2(m, k, l) => prod(&[*m, *m, *k, *l as u64]),
        }
    }

    /// Parse the grammar `Z<m>`, `Z<m>xZ<n>...`, `Z<m>^<r>`, `D<n>`,
    /// `BD(<m>,<n>)`, `E(<k>,<l>)`, `E(<m>,<k>,<l>)`.
    pub fn parse(text: &str) -> Result<GroupLabel> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let err = |pos: usize, msg: &str| Error::Parse {
            pos,
            msg: msg.to_string(),
        };
        let parse_u64 = |part: &str, pos: usize| -> Result<u64> {
            part.parse::<u64>()
                .map_err(|_| err(pos, &format!("expected a positive integer, got `{part}`")))
        };

        if let Some(rest) = s.strip_prefix("BD(") {
            let inner = rest
                .strip_suffix(')')
                .ok_or_else(|| err(s.len(), "expected closing `)`"))?;
            let parts: Vec<&str> = inner.split(',').collect();
            if parts.len() != 2 {
                return Err(err(3, "BD takes exactly two parameters"));
            }
            let m = parse_u64(parts[0], 3)?;
            let n = parse_u64(parts[1], 3 + parts[0].len() + 1)?;
            if m < 2 || n < m || n < 3 {
                return Err(err(3, "BD(m,n) requires n >= m >= 2 and n >= 3"));
            }
            return Ok(GroupLabel::bidihedral(m, n));
        }
        if let Some(rest) = s.strip_prefix("E(") {
            let inner = rest
                .strip_suffix(')')
                .ok_or_else(|| err(s.len(), "expected closing `)`"))?;
            let parts: Vec<&str> = inner.split(',').collect();
            let nums: Vec<u64> = parts
                .iter()
                .map(|p| parse_u64(p, 2))
                .collect::<Result<_>>()?;
            let check_l = |l: u64| -> Result<u32> {
                if matches!(l, 3 | 4 | 6) {
                    Ok(l as u32)
                } else {
                    Err(err(2, "rotation order must be 3, 4 or 6"))
                }
            };
            return match nums.as_slice() {
                [k, l] => {
                    if *k == 0 {
                        return Err(err(2, "k must be positive"));
                    }
                    Ok(GroupLabel::exc1(*k, check_l(*l)?))
                }
                [m, k, l] => {
                    if *m == 0 || *k == 0 {
                        return Err(err(2, "m and k must be positive"));
                    }
                    Ok(GroupLabel::exc2(*m, *k, check_l(*l)?))
                }
                _ => Err(err(2, "E takes two or three parameters")),
            };
        }
        if let Some(rest) = s.strip_prefix('D') {
            let n = parse_u64(rest, 1)?;
            if n == 0 {
                return Err(err(1, "D0 is not a group"));
            }
            return Ok(GroupLabel::dihedral(n));
        }
        if s.starts_with('Z') {
            let mut orders = Vec::new();
            let mut pos = 0;
            for part in s.split('x') {
                let body = part
                    .strip_prefix('Z')
                    .ok_or_else(|| err(pos, "expected `Z<m>`"))?;
                if let Some((base, exp)) = body.split_once('^') {
                    let base = parse_u64(base, pos + 1)?;
                    let exp = parse_u64(exp, pos + 1)?;
                    if exp == 0 || exp > 8 {
                        return Err(err(pos, "exponent out of range"));
                    }
                    for _ in 0..exp {
                        orders.push(base);
                    }
                } else {
                    orders.push(parse_u64(body, pos + 1)?);
                }
                pos += part.len() + 1;
            }
            if orders.contains(&0) {
                return Err(err(0, "cyclic order must be positive"));
            }
            return Ok(GroupLabel::abelian(&orders));
        }
        Err(err(0, &format!("unrecognized group label `{text}`")))
    }
}

impl fmt::Display for GroupLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupLabel::Abelian(fs) => {
                if fs.is_empty() {
                    return write!(f, "Z1");
                }
                if fs.len() > 1 && fs.iter().all(|&d| d == fs[0]) {
                    return write!(f, "Z{}^{}", fs[0], fs.len());
                }
                let parts: Vec<String> = fs.iter().map(|d| format!("Z{d}")).collect();
                write!(f, "{}", parts.join("x"))
            }
            GroupLabel::Dihedral(n) => write!(f, "D{n}"),
            GroupLabel::Bidihedral(m, n) => write!(f, "BD({m},{n})"),
            GroupLabel::Exc1(k, l) => write!(f, "E({k},{l})"),
            GroupLabel::Exc2(m, k, l) => write!(f, "E({m},{k},{l})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        assert_eq!(
            GroupLabel::parse("Z2^3").unwrap(),
            GroupLabel::Abelian(vec![2, 2, 2])
        );
        assert_eq!(
            GroupLabel::parse("E(5,13,4)").unwrap(),
            GroupLabel::Exc2(5, 13, 4)
        );
        assert_eq!(GroupLabel::parse("D3").unwrap(), GroupLabel::Dihedral(3));
        assert_eq!(
            GroupLabel::parse("Z2xZ4").unwrap(),
            GroupLabel::Abelian(vec![2, 4])
        );
        assert_eq!(GroupLabel::parse("Z1").unwrap(), GroupLabel::trivial());
        assert!(GroupLabel::parse("Z2yZ4").is_err());
        assert!(GroupLabel::parse("E(5)").is_err());
        assert!(GroupLabel::parse("E(5,5)").is_err());
        assert!(GroupLabel::parse("").is_err());
    }

    #[test]
    fn canonicalization() {
        // Z2 x Z3 = Z6
        assert_eq!(
            GroupLabel::parse("Z2xZ3").unwrap(),
            GroupLabel::Abelian(vec![6])
        );
        // D2 is the Klein group, D1 is Z2
        assert_eq!(GroupLabel::dihedral(2), GroupLabel::Abelian(vec![2, 2]));
        assert_eq!(GroupLabel::dihedral(1), GroupLabel::Abelian(vec![2]));
        // coprime bidihedral parameters collapse to a dihedral group
        assert_eq!(GroupLabel::bidihedral(2, 3), GroupLabel::Dihedral(6));
        assert_eq!(GroupLabel::bidihedral(2, 2), GroupLabel::Abelian(vec![2, 2, 2]));
        // degenerate exceptional labels are abelian
        assert_eq!(GroupLabel::exc1(1, 6), GroupLabel::Abelian(vec![6]));
        assert_eq!(GroupLabel::exc1(3, 3), GroupLabel::Abelian(vec![3, 3]));
        assert_eq!(GroupLabel::exc1(2, 4), GroupLabel::Abelian(vec![2, 4]));
        assert_eq!(GroupLabel::exc2(1, 13, 4), GroupLabel::Exc1(13, 4));
        assert_eq!(GroupLabel::exc2(2, 1, 4), GroupLabel::Exc2(2, 1, 4));
    }

    #[test]
    fn orders() {
        assert_eq!(GroupLabel::parse("Z2^3").unwrap().order(), 8);
        assert_eq!(GroupLabel::Dihedral(5).order(), 10);
        assert_eq!(GroupLabel::Bidihedral(2, 6).order(), 24);
        assert_eq!(GroupLabel::Exc1(13, 4).order(), 52);
        assert_eq!(GroupLabel::Exc2(5, 13, 4).order(), 1300);
    }

    #[test]
    fn print_parse_round_trip() {
        let labels = vec![
            GroupLabel::trivial(),
            GroupLabel::abelian(&[6]),
            GroupLabel::abelian(&[2, 4]),
            GroupLabel::abelian(&[3, 3]),
            GroupLabel::abelian(&[2, 2, 2]),
            GroupLabel::Dihedral(7),
            GroupLabel::Bidihedral(2, 8),
            GroupLabel::Exc1(7, 3),
            GroupLabel::Exc2(5, 13, 4),
        ];
        for label in labels {
            let text = label.to_string();
            assert_eq!(GroupLabel::parse(&text).unwrap(), label, "round trip of {text}");
        }
    }

    #[test]
    fn exists_h_values() {
        assert_eq!(exists_h(13, 4), Some(5));
        assert_eq!(exists_h(1, 3), Some(0));
        assert_eq!(exists_h(1, 4), Some(0));
        assert_eq!(exists_h(4, 4), None);
        assert_eq!(exists_h(7, 3), Some(2));
        assert_eq!(exists_h(9, 3), None);
        assert_eq!(exists_h(3, 6), Some(2));
    }
}
