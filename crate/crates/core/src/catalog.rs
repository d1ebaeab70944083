//! The bundled verification catalog: the cover registry with its seven
//! worked entries, the two action-matrix reproductions, and the bounded
//! search for extra degree-three projection stabilizers.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::autgroup::{
    action_matrix_for_pair, action_relation_holds, classify, AffineAut, FiniteSubgroup,
};
use crate::error::{Error, Result};
use crate::exact::{rat, IntMatrix2, QuadElem, Rational, RingTag};
use crate::expr::{self, BivarContext, FunctionFieldContext, PolyContext};
use crate::function_field::{
    find_stabilizing_automorphism, rotation_candidates, verify_galois_cover, AutMap, CoverReport,
    CoverSpec, CurveModel, CurvePoint, FFElem,
};
use crate::label::GroupLabel;
use crate::torsion::{LatticeClass, TorsionPoint};

pub const REGISTRY_TEXT: &str = include_str!("../data/registry.txt");

pub const REGISTRY_FORMAT_VERSION: u32 = 1;

/// One parsed registry record, still in textual form; compile it against
/// a parameter specialization to obtain a [`CoverSpec`].
#[derive(Debug, Clone)]
pub struct RegistryEntry {
    pub id: u32,
    pub curve_text: String,
    pub field: RingTag,
    pub expected: GroupLabel,
    pub param_sets: Vec<BTreeMap<String, Rational>>,
    pub generator_texts: Vec<(String, String)>,
    pub s_text: String,
    pub t_text: String,
    pub relation_text: String,
}

fn field_tag(text: &str) -> Result<RingTag> {
    match text {
        "q" => Ok(RingTag::Rational),
        "w3" => Ok(RingTag::Eisenstein),
        "w4" => Ok(RingTag::Gauss),
        "w6" => Ok(RingTag::Hexic),
        other => Err(Error::Invalid(format!("unknown field tag `{other}`"))),
    }
}

fn parse_param_sets(text: &str) -> Result<Vec<BTreeMap<String, Rational>>> {
    let mut sets = Vec::new();
    for chunk in text.split('|') {
        let mut set = BTreeMap::new();
        for assign in chunk.split(',') {
            let (name, value) = assign.split_once('=').ok_or_else(|| Error::Parse {
                pos: 0,
                msg: format!("expected name=value in `{assign}`"),
            })?;
            set.insert(name.trim().to_string(), expr::parse_rational(value)?);
        }
        sets.push(set);
    }
    Ok(sets)
}

/// Parse registry text into entries.
pub fn parse_registry(text: &str) -> Result<Vec<RegistryEntry>> {
    struct Draft {
        id: u32,
        fields: BTreeMap<String, String>,
        gens: Vec<(String, String)>,
    }
    let mut drafts: Vec<Draft> = Vec::new();
    let mut version_seen = false;
    for raw in text.lines() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let inner = rest.strip_suffix(']').ok_or_else(|| Error::Parse {
                pos: 0,
                msg: format!("unterminated section header `{line}`"),
            })?;
            let id_text = inner.strip_prefix("example").map(str::trim).ok_or_else(|| {
                Error::Parse {
                    pos: 0,
                    msg: format!("expected `[example <id>]`, got `{line}`"),
                }
            })?;
            let id: u32 = id_text.parse().map_err(|_| Error::Parse {
                pos: 0,
                msg: format!("invalid entry id `{id_text}`"),
            })?;
            drafts.push(Draft {
                id,
                fields: BTreeMap::new(),
                gens: Vec::new(),
            });
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
            pos: 0,
            msg: format!("expected `key = value`, got `{line}`"),
        })?;
        let key = key.trim();
        let value = value.trim().to_string();
        match drafts.last_mut() {
            None => {
                if key == "version" {
                    if value != REGISTRY_FORMAT_VERSION.to_string() {
                        return Err(Error::Invalid(format!(
                            "unsupported registry version {value}"
                        )));
                    }
                    version_seen = true;
                } else {
                    return Err(Error::Parse {
                        pos: 0,
                        msg: format!("field `{key}` outside any entry"),
                    });
                }
            }
            Some(draft) => {
                if key == "gen" {
                    let (xi, eta) = value.split_once(';').ok_or_else(|| Error::Parse {
                        pos: 0,
                        msg: "generator needs `x-image ; y-image`".into(),
                    })?;
                    draft.gens.push((xi.trim().to_string(), eta.trim().to_string()));
                } else {
                    draft.fields.insert(key.to_string(), value);
                }
            }
        }
    }
    if !version_seen {
        return Err(Error::Invalid("registry is missing a version field".into()));
    }

    let mut entries = Vec::new();
    for draft in drafts {
        let get = |key: &str| -> Result<String> {
            draft.fields.get(key).cloned().ok_or_else(|| Error::Parse {
                pos: 0,
                msg: format!("entry {} is missing `{key}`", draft.id),
            })
        };
        let param_sets = match draft.fields.get("params") {
            Some(text) => parse_param_sets(text)?,
            None => vec![BTreeMap::new()],
        };
        entries.push(RegistryEntry {
            id: draft.id,
            curve_text: get("curve")?,
            field: field_tag(&get("field")?)?,
            expected: GroupLabel::parse(&get("group")?)?,
            param_sets,
            generator_texts: draft.gens,
            s_text: get("s")?,
            t_text: get("t")?,
            relation_text: get("F")?,
        });
    }
    Ok(entries)
}

/// The built-in entries.
pub fn builtin_entries() -> Vec<RegistryEntry> {
    parse_registry(REGISTRY_TEXT).expect("bundled registry parses")
}

pub fn builtin_entry(id: u32) -> Result<RegistryEntry> {
    builtin_entries()
        .into_iter()
        .find(|e| e.id == id)
        .ok_or_else(|| Error::Invalid(format!("no registry entry {id}")))
}

/// Compile an entry against one parameter specialization.
pub fn compile_entry(
    entry: &RegistryEntry,
    params: &BTreeMap<String, Rational>,
) -> Result<CoverSpec> {
    let poly_ctx = PolyContext {
        ring: entry.field,
        params: params.clone(),
    };
    let cubic = expr::eval(&expr::parse(&entry.curve_text)?, &poly_ctx)?;
    let curve = CurveModel::from_cubic(cubic)?;
    let ff_ctx = FunctionFieldContext {
        curve: curve.clone(),
        params: params.clone(),
    };
    let mut generators = Vec::new();
    for (xi_text, eta_text) in &entry.generator_texts {
        let xi = expr::eval(&expr::parse(xi_text)?, &ff_ctx)?;
        let eta = expr::eval(&expr::parse(eta_text)?, &ff_ctx)?;
        generators.push(AutMap::new(xi, eta));
    }
    let s = expr::eval(&expr::parse(&entry.s_text)?, &ff_ctx)?;
    let t = expr::eval(&expr::parse(&entry.t_text)?, &ff_ctx)?;
    let bivar_ctx = BivarContext {
        ring: entry.field,
        params: params.clone(),
    };
    let relation = expr::eval(&expr::parse(&entry.relation_text)?, &bivar_ctx)?;
    let suffix = if params.is_empty() {
        String::new()
    } else {
        let parts: Vec<String> = params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!(" [{}]", parts.join(","))
    };
    Ok(CoverSpec {
        id: format!("example {}{}", entry.id, suffix),
        curve,
        generators,
        s,
        t,
        relation,
        expected_group: entry.expected.clone(),
    })
}

/// Verify one entry at every parameter specialization.
pub fn verify_entry(entry: &RegistryEntry, seed: u64) -> Result<Vec<CoverReport>> {
    entry
        .param_sets
        .iter()
        .map(|params| Ok(verify_galois_cover(&compile_entry(entry, params)?, seed)))
        .collect()
}

/// A named pass/fail outcome with a one-line explanation.
#[derive(Debug, Clone)]
pub struct NamedCheck {
    pub id: String,
    pub pass: bool,
    pub detail: String,
}

fn check(id: &str, pass: bool, detail: String) -> NamedCheck {
    NamedCheck {
        id: id.to_string(),
        pass,
        detail,
    }
}

/// Reproduction of the order-50 torsion pair: the quarter turn acts
/// diagonally as (2, 3) on the pair beta = (2 + e4)/5, beta' = (3 + e4)/10,
/// and the base change (1, 1; 3, 2) conjugates the rotation matrix to
/// (7, 5; -10, -7), congruent to the diagonal action modulo the orders.
pub fn diagonal_action_check() -> NamedCheck {
    let id = "diag-action";
    let beta = TorsionPoint::new(LatticeClass::Square, rat(2, 5), rat(1, 5));
    let beta_p = TorsionPoint::new(LatticeClass::Square, rat(3, 10), rat(1, 10));
    let action = match action_matrix_for_pair(1, &beta, &beta_p) {
        Ok(a) => a,
        Err(e) => return check(id, false, format!("action solve failed: {e}")),
    };
    let diag = IntMatrix2::from_rows(2, 0, 0, 3);
    if action != diag {
        return check(id, false, format!("action is {action}, expected {diag}"));
    }
    let base = match crate::autgroup::action_matrix_from_base_change(
        &IntMatrix2::from_rows(1, 1, 3, 2),
        4,
    ) {
        Ok(a) => a,
        Err(e) => return check(id, false, format!("base change failed: {e}")),
    };
    let expected = IntMatrix2::from_rows(7, 5, -10, -7);
    if base != expected {
        return check(id, false, format!("conjugate is {base}, expected {expected}"));
    }
    // congruence of the two routes modulo the generator orders
    let congruent = num_integer::Integer::mod_floor(&base.p, &5.into()) == action.p
        && num_integer::Integer::mod_floor(&base.r, &5.into()) == action.r
        && num_integer::Integer::mod_floor(&base.q, &10.into()) == action.q
        && num_integer::Integer::mod_floor(&base.s, &10.into()) == action.s;
    if !congruent {
        return check(id, false, "routes disagree modulo the orders".into());
    }
    check(
        id,
        true,
        format!("action {action} and conjugate {base} agree modulo (5, 10)"),
    )
}

/// Data for one member of the order-1300 m^2 family.
#[derive(Debug, Clone)]
pub struct FamilyMember {
    pub description: String,
    pub generators: Vec<AffineAut>,
    pub stated_matrix: IntMatrix2,
    pub expected_factors: (u64, u64),
    pub expected_label: GroupLabel,
}

/// The two rank-two constructions of order 1300 m^2 on the square lattice.
pub fn order_1300_family(m: u64) -> Vec<FamilyMember> {
    let m_i = m as i64;
    let sigma = AffineAut::rotation(LatticeClass::Square, 1);
    let beta1 = TorsionPoint::new(LatticeClass::Square, rat(1, 5 * m_i), rat(0, 1));
    let beta1_p = TorsionPoint::new(LatticeClass::Square, rat(-5, 65 * m_i), rat(1, 65 * m_i));
    let beta2 = TorsionPoint::new(LatticeClass::Square, rat(1, m_i), rat(0, 1));
    let beta2_p = TorsionPoint::new(LatticeClass::Square, rat(57, 325 * m_i), rat(1, 325 * m_i));
    vec![
        FamilyMember {
            description: format!("beta = 1/{}, beta' = (-5 + e4)/{}", 5 * m, 65 * m),
            generators: vec![
                sigma.clone(),
                AffineAut::translation(beta1),
                AffineAut::translation(beta1_p),
            ],
            stated_matrix: IntMatrix2::from_rows(5, -2, 13, -5),
            expected_factors: (5 * m, 65 * m),
            expected_label: GroupLabel::exc2(5 * m, 13, 4),
        },
        FamilyMember {
            description: format!("beta = 1/{}, beta' = (57 + e4)/{}", m, 325 * m),
            generators: vec![
                sigma,
                AffineAut::translation(beta2),
                AffineAut::translation(beta2_p),
            ],
            stated_matrix: IntMatrix2::from_rows(-57, -10, 325, 57),
            expected_factors: (m, 325 * m),
            expected_label: GroupLabel::exc2(m, 325, 4),
        },
    ]
}

/// Verify both constructions for one scale factor `m`: closure order
/// 1300 m^2, torsion invariant factors, classified label, determinant one
/// of the stated matrices, and the stated action relations.
pub fn order_1300_family_check(m: u64) -> NamedCheck {
    let id = format!("family-1300 m={m}");
    for member in order_1300_family(m) {
        let group = match FiniteSubgroup::generate(&member.generators) {
            Ok(g) => g,
            Err(e) => return check(&id, false, format!("{}: closure failed: {e}", member.description)),
        };
        let expected_order = 1300 * (m * m) as usize;
        if group.order() != expected_order {
            return check(
                &id,
                false,
                format!(
                    "{}: order {} != {expected_order}",
                    member.description,
                    group.order()
                ),
            );
        }
        if group.torsion_part.factors_u64() != member.expected_factors {
            return check(
                &id,
                false,
                format!(
                    "{}: torsion factors {:?} != {:?}",
                    member.description,
                    group.torsion_part.factors_u64(),
                    member.expected_factors
                ),
            );
        }
        match classify(&group) {
            Ok(label) if label == member.expected_label => {}
            Ok(label) => {
                return check(
                    &id,
                    false,
                    format!("{}: label {label} != {}", member.description, member.expected_label),
                )
            }
            Err(e) => return check(&id, false, format!("{}: {e}", member.description)),
        }
        if member.stated_matrix.det() != 1.into() {
            return check(&id, false, format!("{}: stated matrix not in SL2", member.description));
        }
        let beta = &member.generators[1].beta;
        let beta_p = &member.generators[2].beta;
        if !action_relation_holds(1, beta, beta_p, &member.stated_matrix) {
            return check(
                &id,
                false,
                format!("{}: stated action relation fails", member.description),
            );
        }
    }
    check(
        &id,
        true,
        format!(
            "both constructions have order {}, stated matrices verified",
            1300 * m * m
        ),
    )
}

/// Result of the bounded stabilizer search for one alternative
/// degree-three projection of the curve y^2 = x^3 + 1.
#[derive(Debug, Clone)]
pub struct StabilizerSearch {
    pub center: String,
    pub stabilizer: Option<String>,
    pub order: Option<u32>,
}

/// Search a natural candidate set (coordinate scalings composed with
/// translations by field-rational torsion points) for automorphisms
/// fixing the slope coordinate of the pencils through (0, c) with
/// c^2 = -3.
pub fn extra_projection_stabilizers() -> Result<Vec<StabilizerSearch>> {
    let ring = RingTag::Eisenstein;
    let curve = CurveModel::weierstrass(ring, QuadElem::zero(ring), QuadElem::one(ring))?;
    let q = |n: i64| QuadElem::from_rational(ring, Rational::from_integer(n.into()));
    let torsion_points = vec![
        CurvePoint::affine(q(0), q(1)),
        CurvePoint::affine(q(0), q(-1)),
        CurvePoint::affine(q(-1), q(0)),
        CurvePoint::affine(q(2), q(3)),
        CurvePoint::affine(q(2), q(-3)),
    ];
    let candidates = rotation_candidates(&curve, &torsion_points)?;
    let x = FFElem::x(&curve);
    let y = FFElem::y(&curve);
    let mut out = Vec::new();
    for sign in [1i64, -1] {
        // c = ±(1 + 2 e3) squares to -3
        let c = QuadElem::new(ring, rat(sign, 1), rat(2 * sign, 1));
        debug_assert_eq!(c.mul(&c).unwrap(), q(-3));
        let s = y.sub(&FFElem::constant(&curve, c.clone())).div(&x)?;
        let found = find_stabilizing_automorphism(&s, &candidates)?;
        let order = match &found {
            Some(m) => Some(m.order(12)?),
            None => None,
        };
        out.push(StabilizerSearch {
            center: format!("(0, {c})"),
            stabilizer: found.map(|m| m.to_string()),
            order,
        });
    }
    Ok(out)
}

/// Curve model referenced by a registry entry id, for external callers.
pub fn entry_curve(entry: &RegistryEntry) -> Result<Arc<CurveModel>> {
    let params = entry.param_sets.first().cloned().unwrap_or_default();
    let poly_ctx = PolyContext {
        ring: entry.field,
        params,
    };
    let cubic = expr::eval(&expr::parse(&entry.curve_text)?, &poly_ctx)?;
    CurveModel::from_cubic(cubic)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function_field::DEFAULT_DEGREE_SEED;

    #[test]
    fn bundled_registry_parses() {
        let entries = builtin_entries();
        assert_eq!(entries.len(), 7);
        let ids: Vec<u32> = entries.iter().map(|e| e.id).collect();
        assert_eq!(ids, vec![13, 14, 15, 16, 17, 18, 19]);
        let e16 = builtin_entry(16).unwrap();
        assert_eq!(e16.param_sets.len(), 3);
        assert_eq!(e16.generator_texts.len(), 2);
        assert!(builtin_entry(20).is_err());
    }

    #[test]
    fn registry_rejects_malformed_text() {
        assert!(parse_registry("curve = x").is_err());
        assert!(parse_registry("version = 2\n[example 1]\n").is_err());
        assert!(parse_registry("version = 1\n[example one]\n").is_err());
        assert!(matches!(
            parse_registry("version = 1\n[example 1]\ncurve = x^3+1\n"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn compile_smallest_entry() {
        let entry = builtin_entry(13).unwrap();
        let spec = compile_entry(&entry, &BTreeMap::new()).unwrap();
        assert_eq!(spec.generators.len(), 1);
        assert_eq!(spec.expected_group, GroupLabel::abelian(&[3]));
        assert_eq!(spec.relation.deg_t(), 3);
    }

    #[test]
    fn diag_action_reproduction() {
        let check = diagonal_action_check();
        assert!(check.pass, "{}", check.detail);
    }

    #[test]
    fn family_m1_reproduction() {
        let check = order_1300_family_check(1);
        assert!(check.pass, "{}", check.detail);
    }

    #[test]
    fn entry_14_verifies() {
        let entry = builtin_entry(14).unwrap();
        let reports = verify_entry(&entry, DEFAULT_DEGREE_SEED).unwrap();
        assert_eq!(reports.len(), 1);
        let report = &reports[0];
        assert!(report.pass, "clauses: {:?}", report.clauses);
        assert_eq!(report.degree, Some(4));
        assert_eq!(report.group_order, Some(4));
    }

    #[test]
    fn certificate_clauses_fail_under_sabotage() {
        use crate::function_field::{verify_galois_cover, AutMap, FFElem};
        let entry = builtin_entry(14).unwrap();
        let base = compile_entry(&entry, &BTreeMap::new()).unwrap();
        let failed = |spec: &crate::function_field::CoverSpec, index: u32| {
            let report = verify_galois_cover(spec, DEFAULT_DEGREE_SEED);
            assert!(!report.pass, "sabotage at clause {index} still passed");
            report
                .clauses
                .iter()
                .find(|c| c.index == index)
                .map(|c| !c.pass)
                .unwrap_or(false)
        };

        // (1) a generator that lands off the curve
        let mut spec = base.clone();
        let x = FFElem::x(&spec.curve);
        spec.generators.push(AutMap::new(x.clone(), x.clone()));
        assert!(failed(&spec, 1));

        // (3) an s moved by the group
        let mut spec = base.clone();
        spec.s = x.clone();
        assert!(failed(&spec, 3));

        // (6) a t with a nontrivial stabilizer
        let mut spec = base.clone();
        spec.t = base.s.clone();
        assert!(failed(&spec, 6));

        // the honest data still passes
        assert!(verify_galois_cover(&base, DEFAULT_DEGREE_SEED).pass);
    }

    #[test]
    fn stabilizer_search_finds_order_three_elements() {
        let results = extra_projection_stabilizers().unwrap();
        assert_eq!(results.len(), 2);
        for r in &results {
            assert!(r.stabilizer.is_some(), "no stabilizer found for {}", r.center);
            assert_eq!(r.order, Some(3), "stabilizer for {} has wrong order", r.center);
        }
    }
}
