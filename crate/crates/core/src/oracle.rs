//! Exhaustive comparison over a prime field `F_q`: the points of `P^N(F_q)`
//! where all 2-minors vanish, against the image of `P^n(F_q)` under the
//! Veronese map and against the vanishing set of all balanced quadrics.
//!
//! The minor-vanishing arguments (chart cover, chart agreement, and the
//! rewrite identities) only use field arithmetic and `z^2 = 0 => z = 0`, so a
//! finite field is a legitimate setting for a desk-scale check.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::toric_quadrics;
use crate::projective::{
    normalize, projective_point_count, render_point, Field, PointEnumerator, PrimeField,
    ProjectivePoint,
};
use crate::veronese::{CompiledBinomial, Veronese};

/// Default cap on `points x generators` membership tests per vanishing-set run.
pub const DEFAULT_BUDGET: u128 = 5_000_000;

/// Witnesses kept in a report.
pub const MAX_WITNESSES: usize = 10;

const CHUNK: u128 = 4096;

pub const FIELD_NOTE: &str = "exhaustive check over a prime field; the cover, \
chart-agreement and rewrite arguments use only field arithmetic and z^2 = 0 => z = 0, \
so equality over F_q is evidence for, not a proof of, equality over an algebraically closed field";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    pub budget: u128,
    pub parallel: bool,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            budget: DEFAULT_BUDGET,
            parallel: true,
        }
    }
}

/// Work needed to test `generators` at every point of `P^N(F_q)`.
pub fn required_tests(ver: &Veronese, q: u64, generators: usize) -> u128 {
    projective_point_count(ver.ctx().ambient_dim(), q).saturating_mul(generators.max(1) as u128)
}

fn vanishing_set(
    ver: &Veronese,
    field: PrimeField,
    generators: &[CompiledBinomial],
    cfg: &OracleConfig,
) -> Result<BTreeSet<ProjectivePoint<u64>>> {
    let required = required_tests(ver, field.modulus(), generators.len());
    if required > cfg.budget {
        return Err(Error::BudgetExceeded {
            required,
            budget: cfg.budget,
        });
    }
    let points = PointEnumerator::new(field, ver.ctx().ambient_dim());
    let keep = |p: &ProjectivePoint<u64>| generators.iter().all(|g| g.vanishes(&field, p.coords()));
    if !cfg.parallel {
        return Ok(points.iter().filter(keep).collect());
    }
    let chunks = points.len().div_ceil(CHUNK);
    let found: Vec<Vec<ProjectivePoint<u64>>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            points
                .range(c * CHUNK, (c + 1) * CHUNK)
                .filter(keep)
                .collect()
        })
        .collect();
    Ok(found.into_iter().flatten().collect())
}

/// Canonical points of `P^N(F_q)` at which every 2-minor vanishes.
pub fn brute_force_variety(
    ver: &Veronese,
    field: PrimeField,
    cfg: &OracleConfig,
) -> Result<BTreeSet<ProjectivePoint<u64>>> {
    vanishing_set(ver, field, ver.compiled_minors(), cfg)
}

/// Canonical points of `P^N(F_q)` at which every balanced quadric vanishes.
pub fn brute_force_toric_variety(
    ver: &Veronese,
    field: PrimeField,
    cfg: &OracleConfig,
) -> Result<BTreeSet<ProjectivePoint<u64>>> {
    let toric: Vec<CompiledBinomial> = toric_quadrics(ver.ctx())
        .iter()
        .map(CompiledBinomial::new)
        .collect();
    vanishing_set(ver, field, &toric, cfg)
}

/// `nu_d(P^n(F_q))`, normalized.
pub fn brute_force_image(ver: &Veronese, field: PrimeField) -> BTreeSet<ProjectivePoint<u64>> {
    PointEnumerator::new(field, ver.ctx().n())
        .iter()
        .map(|x| {
            normalize(&field, &ver.eval_coords(&field, x.coords()))
                .expect("image of a point is nonzero")
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    /// `V(minors)` against the Veronese image.
    VeroneseImage,
    /// `V(minors)` against `V(all balanced quadrics)`.
    ToricQuadrics,
}

/// A point found in only one of the two compared sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub point: String,
    /// `"variety"` if the point satisfies the minors only, `"reference"` otherwise.
    pub only_in: String,
}

/// Outcome of comparing `V(minors)(F_q)` with a reference set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EqualityReport {
    pub comparison: Comparison,
    pub n: usize,
    pub d: u32,
    pub q: u64,
    /// `|V(minors)(F_q)|`.
    pub variety_count: u64,
    /// Size of the reference set: the image, or the toric vanishing set.
    pub reference_count: u64,
    /// `|P^n(F_q)| = (q^{n+1} - 1) / (q - 1)`.
    pub expected_count: u64,
    /// Points of `V(minors)(F_q)` with every pure-power coordinate zero.
    pub chartless_count: u64,
    pub discrepancy_count: u64,
    pub equal: bool,
    pub witnesses: Vec<Witness>,
    pub note: String,
}

fn compare(
    ver: &Veronese,
    field: PrimeField,
    comparison: Comparison,
    variety: &BTreeSet<ProjectivePoint<u64>>,
    reference: &BTreeSet<ProjectivePoint<u64>>,
) -> EqualityReport {
    let mut witnesses = Vec::new();
    let mut discrepancy_count = 0u64;
    for (set, label) in [
        (variety.difference(reference), "variety"),
        (reference.difference(variety), "reference"),
    ] {
        for p in set {
            discrepancy_count += 1;
            if witnesses.len() < MAX_WITNESSES {
                witnesses.push(Witness {
                    point: render_point(&field, p),
                    only_in: label.to_string(),
                });
            }
        }
    }
    let chartless_count = variety
        .iter()
        .filter(|p| {
            (0..ver.ctx().nvars()).all(|i| field.is_zero(&p.coords()[ver.pure_power_index(i)]))
        })
        .count() as u64;
    let equal = discrepancy_count == 0 && variety.len() == reference.len();
    EqualityReport {
        comparison,
        n: ver.ctx().n(),
        d: ver.ctx().d(),
        q: field.modulus(),
        variety_count: variety.len() as u64,
        reference_count: reference.len() as u64,
        expected_count: projective_point_count(ver.ctx().n(), field.modulus()) as u64,
        chartless_count,
        discrepancy_count,
        equal,
        witnesses,
        note: FIELD_NOTE.to_string(),
    }
}

/// `V(minors)(F_q)` against `nu_d(P^n(F_q))`.
pub fn check_set_equality(
    ver: &Veronese,
    field: PrimeField,
    cfg: &OracleConfig,
) -> Result<EqualityReport> {
    let variety = brute_force_variety(ver, field, cfg)?;
    let image = brute_force_image(ver, field);
    Ok(compare(
        ver,
        field,
        Comparison::VeroneseImage,
        &variety,
        &image,
    ))
}

/// `V(minors)(F_q)` against `V(all balanced quadrics)(F_q)`.
pub fn check_toric_equality(
    ver: &Veronese,
    field: PrimeField,
    cfg: &OracleConfig,
) -> Result<EqualityReport> {
    let variety = brute_force_variety(ver, field, cfg)?;
    let toric = brute_force_toric_variety(ver, field, cfg)?;
    Ok(compare(
        ver,
        field,
        Comparison::ToricQuadrics,
        &variety,
        &toric,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiindex::VeroneseContext;
    use crate::projective::enumerate_projective_points;

    fn ver(n: usize, d: u32) -> Veronese {
        Veronese::new(&VeroneseContext::new(n, d).unwrap()).unwrap()
    }

    fn fp(q: u64) -> PrimeField {
        PrimeField::new(q).unwrap()
    }

    fn serial() -> OracleConfig {
        OracleConfig {
            parallel: false,
            ..OracleConfig::default()
        }
    }

    #[test]
    fn conic_over_f3() {
        // independent count: points of P^2(F_3) with z0 z2 = z1^2
        let direct = enumerate_projective_points(2, 3)
            .unwrap()
            .filter(|p| {
                let z = p.coords();
                z[0] * z[2] % 3 == z[1] * z[1] % 3
            })
            .count();
        assert_eq!(direct, 4);
        let v = brute_force_variety(&ver(1, 2), fp(3), &serial()).unwrap();
        assert_eq!(v.len(), 4);
    }

    #[test]
    fn degree_one_is_everything() {
        let v = brute_force_variety(&ver(1, 1), fp(2), &serial()).unwrap();
        assert_eq!(v.len(), 3);
        let r = check_set_equality(&ver(1, 1), fp(5), &serial()).unwrap();
        assert!(r.equal);
        assert_eq!((r.variety_count, r.reference_count), (6, 6));
    }

    #[test]
    fn veronese_surface_over_f2() {
        let v = brute_force_variety(&ver(2, 2), fp(2), &serial()).unwrap();
        assert_eq!(v.len(), 7);
    }

    #[test]
    fn image_examples() {
        let img = brute_force_image(&ver(1, 2), fp(2));
        let want: BTreeSet<Vec<u64>> = [vec![0, 0, 1], vec![1, 0, 0], vec![1, 1, 1]].into();
        assert_eq!(
            img.into_iter()
                .map(|p| p.into_coords())
                .collect::<BTreeSet<_>>(),
            want
        );
        assert_eq!(brute_force_image(&ver(0, 3), fp(5)).len(), 1);
        assert_eq!(brute_force_image(&ver(1, 3), fp(3)).len(), 4);
    }

    #[test]
    fn set_equality_examples() {
        let r = check_set_equality(&ver(1, 2), fp(3), &serial()).unwrap();
        assert!(r.equal);
        assert_eq!(
            (r.variety_count, r.reference_count, r.expected_count),
            (4, 4, 4)
        );
        let r = check_set_equality(&ver(2, 2), fp(3), &OracleConfig::default()).unwrap();
        assert!(r.equal);
        assert_eq!((r.variety_count, r.reference_count), (13, 13));
        assert_eq!(r.chartless_count, 0);
        assert!(r.witnesses.is_empty());
    }

    #[test]
    fn toric_equality_examples() {
        let r = check_toric_equality(&ver(1, 3), fp(2), &serial()).unwrap();
        assert!(r.equal);
        let r = check_toric_equality(&ver(2, 2), fp(2), &serial()).unwrap();
        assert!(r.equal);
        assert_eq!(r.variety_count, 7);
    }

    #[test]
    fn budget_refusal() {
        let cfg = OracleConfig {
            budget: 100,
            parallel: false,
        };
        match brute_force_variety(&ver(1, 3), fp(3), &cfg) {
            Err(Error::BudgetExceeded { required, budget }) => {
                assert_eq!(required, 40 * 3);
                assert_eq!(budget, 100);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            check_set_equality(&ver(2, 3), fp(5), &OracleConfig::default()),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn parallel_matches_serial() {
        for (n, d, q) in [(1, 3, 3), (2, 2, 3), (1, 4, 3)] {
            let a = brute_force_variety(&ver(n, d), fp(q), &serial()).unwrap();
            let b = brute_force_variety(&ver(n, d), fp(q), &OracleConfig::default()).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn witnesses_reported_on_mismatch() {
        // comparing against a deliberately wrong reference exercises the diff path
        let v = ver(1, 2);
        let field = fp(3);
        let variety = brute_force_variety(&v, field, &serial()).unwrap();
        let mut reference = variety.clone();
        let extra = reference.iter().next().unwrap().clone();
        reference.remove(&extra);
        let r = compare(&v, field, Comparison::VeroneseImage, &variety, &reference);
        assert!(!r.equal);
        assert_eq!(r.discrepancy_count, 1);
        assert_eq!(r.witnesses[0].only_in, "variety");
    }
}
