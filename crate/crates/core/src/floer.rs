//! SH⁺ and WH⁺ from vanishing formulas, the tautological-sequence bound and
//! the contact and Legendrian distinguishers built on them.
//!
//! Nothing here touches Floer data: every input is either cohomology fed
//! through a vanishing formula or a profile supplied by the caller.

use crate::error::{invalid, Result};
use crate::graded::{AbelianGroup, Coefficients, GradedGroup};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileKind {
    /// SH_k⁺(W)
    ShPlus,
    /// WH_k⁺(L, L; W)
    WhPlus,
    /// WH_k(T*_x M, T*_x M; T*M)
    Wrapped,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    VanishingFormula,
    UserSupplied,
}

/// A Floer-type group in each degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Profile {
    pub kind: ProfileKind,
    pub n: i64,
    pub groups: GradedGroup,
    pub coefficients: Coefficients,
    pub provenance: Provenance,
    /// Degree window outside which nothing is claimed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<(i64, i64)>,
}

pub type ShPlusProfile = Profile;

impl Profile {
    pub fn support(&self) -> BTreeSet<i64> {
        self.groups.support().into_iter().collect()
    }
}

fn coefficients_of(g: &GradedGroup) -> Coefficients {
    if g.iter().all(|(_, a)| a.is_free()) {
        Coefficients::Q
    } else {
        Coefficients::Z
    }
}

/// SH_k⁺(W) ≅ H^{n−k+1}(W) when SH(W) = 0. With `weinstein` set, W has the
/// homotopy type of an n-dimensional complex, so nothing may sit above H^n.
pub fn sh_plus_from_vanishing(cohomology: &GradedGroup, n: i64, weinstein: bool) -> Result<Profile> {
    if n < 1 {
        return invalid(format!("half-dimension n = {n} must be positive"));
    }
    if let Some(d) = cohomology.min_degree().filter(|&d| d < 0) {
        return invalid(format!("cohomology in negative degree {d}"));
    }
    if weinstein {
        if let Some(d) = cohomology.max_degree().filter(|&d| d > n) {
            return invalid(format!(
                "H^{d}(W) != 0 with d > n = {n}; a Weinstein domain has SH_k+ = 0 for k <= 0"
            ));
        }
    }
    Ok(Profile {
        kind: ProfileKind::ShPlus,
        n,
        groups: cohomology.reindex(|d| n - d + 1),
        coefficients: Coefficients::Z,
        provenance: Provenance::VanishingFormula,
        horizon: None,
    })
}

/// Inverse of [`sh_plus_from_vanishing`]: H^d(W) ≅ SH⁺_{n−d+1}(W).
pub fn cohomology_from_sh_plus(profile: &Profile) -> GradedGroup {
    let n = profile.n;
    profile.groups.reindex(|k| n - k + 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundDirection {
    /// Bounds on dim SH_k⁺ from dim SH_k.
    PlusFromFull,
    /// Bounds on dim SH_k from dim SH_k⁺.
    FullFromPlus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimensionInterval {
    pub k: i64,
    pub known: i64,
    /// dim H^{n−k}(W) + dim H^{n−k+1}(W)
    pub slack: i64,
    pub lower: i64,
    pub upper: i64,
}

/// |dim SH_k − dim SH_k⁺| ≤ dim H^{n−k}(W) + dim H^{n−k+1}(W): the interval
/// each unknown dimension must lie in, for every degree where either side is nonzero.
pub fn taut_les_bounds(
    known: &BTreeMap<i64, i64>,
    cohomology: &BTreeMap<i64, i64>,
    n: i64,
) -> Result<Vec<DimensionInterval>> {
    for (name, table) in [("Floer", known), ("cohomology", cohomology)] {
        if let Some((k, d)) = table.iter().find(|(_, d)| **d < 0) {
            return invalid(format!("negative {name} dimension {d} in degree {k}"));
        }
    }
    let h = |d: i64| cohomology.get(&d).copied().unwrap_or(0);
    let mut degrees: BTreeSet<i64> = known.keys().copied().collect();
    for &d in cohomology.keys() {
        degrees.insert(n - d);
        degrees.insert(n - d + 1);
    }
    Ok(degrees
        .into_iter()
        .map(|k| {
            let s = known.get(&k).copied().unwrap_or(0);
            let slack = h(n - k) + h(n - k + 1);
            DimensionInterval { k, known: s, slack, lower: (s - slack).max(0), upper: s + slack }
        })
        .collect())
}

/// Outcome of a distinguisher. "Contactomorphic" is never claimed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Distinct { witness_degree: Option<i64>, detail: String },
    Indistinguishable { detail: String },
}

impl Verdict {
    pub fn is_distinct(&self) -> bool {
        matches!(self, Verdict::Distinct { .. })
    }
}

fn first_difference(a: &GradedGroup, b: &GradedGroup) -> Option<i64> {
    let mut degrees: BTreeSet<i64> = a.support().into_iter().collect();
    degrees.extend(b.support());
    degrees.into_iter().find(|&k| a.get(k) != b.get(k))
}

/// Flexible fillings (c₁ = 0) of one contact manifold have isomorphic
/// integral cohomology, so differing cohomology separates the boundaries.
pub fn distinguish_flexible_fillings(a: &GradedGroup, b: &GradedGroup, n: i64) -> Result<Verdict> {
    if n < 3 {
        return invalid(format!("flexibility is only defined for n >= 3, got n = {n}"));
    }
    Ok(match first_difference(a, b) {
        Some(k) => Verdict::Distinct {
            witness_degree: Some(k),
            detail: format!("H^{k}: {} vs {}", a.get(k), b.get(k)),
        },
        None => Verdict::Indistinguishable {
            detail: "integral cohomology agrees in every degree".into(),
        },
    })
}

/// True when k copies force dim H¹(Y;ℤ/2) ≥ k − 1 to fail, i.e. no flexible filling exists.
pub fn cem_flexible_obstruction(k: u64, dim_h1_mod2: u64) -> Result<bool> {
    if k < 1 {
        return invalid("the number of copies must be at least 1");
    }
    Ok(k >= dim_h1_mod2 + 2)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum FillingVerdict {
    NoFlexibleFilling { witness_degree: i64, detail: String },
    Inconclusive { detail: String },
}

/// A flexible filling has SH_k⁺ supported in 1 ≤ k ≤ n + 1.
pub fn flexible_support_test(support: &BTreeSet<i64>, n: i64) -> FillingVerdict {
    match support.iter().find(|&&k| k <= 0 || k >= n + 2) {
        Some(&k) => FillingVerdict::NoFlexibleFilling {
            witness_degree: k,
            detail: format!("SH+_{k} != 0 but flexible fillings have SH+ supported in [1, {}]", n + 1),
        },
        None => FillingVerdict::Inconclusive {
            detail: format!("support lies in [1, {}]", n + 1),
        },
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum AdcVerdict {
    NotAdc { witness_degree: i64, detail: String },
    Inconclusive { detail: String },
}

/// An ADC boundary forces SH_k⁺(W) = 0 for k ≤ 3 − n.
pub fn adc_homological_obstruction(profile: &Profile) -> Result<AdcVerdict> {
    if profile.kind != ProfileKind::ShPlus {
        return invalid("the ADC obstruction reads an SH+ profile");
    }
    let n = profile.n;
    Ok(match profile.groups.support().into_iter().find(|&k| k <= 3 - n) {
        Some(k) => AdcVerdict::NotAdc {
            witness_degree: k,
            detail: format!("SH+_{k} = {} with k <= 3 - n = {}", profile.groups.get(k), 3 - n),
        },
        None => AdcVerdict::Inconclusive { detail: format!("SH+ vanishes in degrees <= {}", 3 - n) },
    })
}

/// Rational homology of a free loop space on a finite window of degrees,
/// together with H_*(M;ℚ) for the constant-loop lower bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoopHomologyTable {
    pub horizon: (i64, i64),
    pub dims: BTreeMap<i64, usize>,
    #[serde(default)]
    pub base: BTreeMap<i64, usize>,
}

impl LoopHomologyTable {
    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.horizon;
        if lo > hi {
            return invalid(format!("empty horizon [{lo}, {hi}]"));
        }
        if let Some(k) = self.dims.keys().find(|&&k| k < lo || k > hi) {
            return invalid(format!("loop homology given in degree {k} outside the horizon [{lo}, {hi}]"));
        }
        for (&k, &b) in &self.base {
            if k < lo || k > hi {
                continue;
            }
            let d = self.dims.get(&k).copied().unwrap_or(0);
            if d < b {
                return invalid(format!(
                    "dim H_{k}(LM) = {d} < dim H_{k}(M) = {b}; constant loops split off H_*(M)"
                ));
            }
        }
        Ok(())
    }

    pub fn dim(&self, k: i64) -> usize {
        self.dims.get(&k).copied().unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LoopComparison {
    pub k: i64,
    pub difference: i64,
    pub threshold: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LoopVerdict {
    pub verdict: Verdict,
    pub probed: (i64, i64),
    pub witness: Option<LoopComparison>,
}

/// Separates ξ_M from ξ_N when |dim H_k(ΛM) − dim H_k(ΛN)| exceeds
/// 2 dim H^{n−k}(Y) + 2 dim H^{n−k+1}(Y) for some k ≥ 2.
pub fn boundedinfinite_distinguisher(
    lm: &LoopHomologyTable,
    ln: &LoopHomologyTable,
    hy: &BTreeMap<i64, usize>,
    n: i64,
) -> Result<LoopVerdict> {
    if n < 4 {
        return invalid(format!("this construction needs n >= 4, got n = {n}"));
    }
    lm.validate()?;
    ln.validate()?;
    let lo = lm.horizon.0.max(ln.horizon.0).max(2);
    let hi = lm.horizon.1.min(ln.horizon.1);
    if lo > hi {
        return invalid(format!(
            "horizons {:?} and {:?} share no degree k >= 2",
            lm.horizon, ln.horizon
        ));
    }
    let y = |d: i64| hy.get(&d).copied().unwrap_or(0) as i64;
    for k in lo..=hi {
        let difference = lm.dim(k) as i64 - ln.dim(k) as i64;
        let threshold = 2 * y(n - k) + 2 * y(n - k + 1);
        if difference.abs() > threshold {
            let detail = format!("|{} - {}| = {} > {threshold}", lm.dim(k), ln.dim(k), difference.abs());
            return Ok(LoopVerdict {
                verdict: Verdict::Distinct { witness_degree: Some(k), detail },
                probed: (lo, hi),
                witness: Some(LoopComparison { k, difference, threshold }),
            });
        }
    }
    Ok(LoopVerdict {
        verdict: Verdict::Indistinguishable {
            detail: format!("no degree in [{lo}, {hi}] beats the tautological slack"),
        },
        probed: (lo, hi),
        witness: None,
    })
}

/// WH_k⁺(L, L; W) ≅ H^{n−k−1}(L) when WH(L, L; W) = 0.
pub fn wh_plus_from_vanishing(cohomology_l: &GradedGroup, n: i64) -> Result<Profile> {
    if n < 1 {
        return invalid(format!("half-dimension n = {n} must be positive"));
    }
    if let Some(d) = cohomology_l.support().into_iter().find(|&d| d < 0 || d > n) {
        return invalid(format!("H^{d}(L) != 0 outside [0, {n}] for an n-dimensional L"));
    }
    Ok(Profile {
        kind: ProfileKind::WhPlus,
        n,
        groups: cohomology_l.reindex(|d| n - d - 1),
        coefficients: coefficients_of(cohomology_l),
        provenance: Provenance::VanishingFormula,
        horizon: None,
    })
}

/// Based loop space homology on a degree window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasedLoopTable {
    pub horizon: (i64, i64),
    pub dims: BTreeMap<i64, usize>,
}

/// WH_k(T*_x M, T*_x M; T*M) ≅ H_{k−n+2}(ΩM).
pub fn wrapped_loop_grading(table: &BasedLoopTable, n: i64) -> Result<Profile> {
    let (lo, hi) = table.horizon;
    if lo > hi {
        return invalid(format!("empty horizon [{lo}, {hi}]"));
    }
    if let Some(k) = table.dims.keys().find(|&&k| k < lo || k > hi) {
        return invalid(format!("based loop homology given in degree {k} outside the horizon [{lo}, {hi}]"));
    }
    let mut groups = GradedGroup::new();
    for (&d, &r) in &table.dims {
        groups.set(d + n - 2, AbelianGroup::free(r));
    }
    Ok(Profile {
        kind: ProfileKind::Wrapped,
        n,
        groups,
        coefficients: Coefficients::Q,
        provenance: Provenance::UserSupplied,
        horizon: Some((lo + n - 2, hi + n - 2)),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum NearbyVerdict {
    /// π_* : H_*(L) → H_*(M) is an isomorphism.
    Isomorphism { detail: String },
    Inconclusive { detail: String },
}

/// A surjection between isomorphic finitely generated abelian groups is an
/// isomorphism; with a degree ±1 projection this upgrades π_* to one.
pub fn nearby_conclusion(hl: &GradedGroup, hm: &GradedGroup, degree_pm1: bool) -> Result<NearbyVerdict> {
    if hl.max_degree() != hm.max_degree() {
        return invalid(format!(
            "top degrees differ ({:?} vs {:?}); L and M must be closed of the same dimension",
            hl.max_degree(),
            hm.max_degree()
        ));
    }
    Ok(match (first_difference(hl, hm), degree_pm1) {
        (None, true) => NearbyVerdict::Isomorphism {
            detail: "H_*(L) = H_*(M) and pi_* is surjective, hence an isomorphism".into(),
        },
        (None, false) => NearbyVerdict::Inconclusive {
            detail: "surjectivity of pi_* needs a degree +-1 projection".into(),
        },
        (Some(k), _) => NearbyVerdict::Inconclusive {
            detail: format!("H_{k}(L) = {} differs from H_{k}(M) = {}", hl.get(k), hm.get(k)),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dims(pairs: &[(i64, i64)]) -> BTreeMap<i64, i64> {
        pairs.iter().copied().collect()
    }

    #[test]
    fn sh_plus_of_ball_and_subcritical() {
        let ball = GradedGroup::free(&[(0, 1)]);
        let p = sh_plus_from_vanishing(&ball, 4, true).unwrap();
        assert_eq!(p.groups, GradedGroup::free(&[(5, 1)]));
        // An index-2 handle contributes to SH+_{n-1}.
        let w = GradedGroup::free(&[(0, 1), (2, 1)]);
        let p = sh_plus_from_vanishing(&w, 4, true).unwrap();
        assert_eq!(p.groups, GradedGroup::free(&[(3, 1), (5, 1)]));
        assert_eq!(cohomology_from_sh_plus(&p), w);
        assert!(sh_plus_from_vanishing(&GradedGroup::free(&[(5, 1)]), 4, true).is_err());
    }

    #[test]
    fn tautological_intervals() {
        let h = dims(&[(0, 1)]);
        let n = 3;
        // With SH = 0 the only room is the cohomology slack.
        let iv = taut_les_bounds(&BTreeMap::new(), &h, n).unwrap();
        assert!(iv.iter().all(|i| i.lower == 0 && i.upper == i.slack));
        // dim SH_n >= k and dim H^0 = 1 leave dim SH+_n >= k - 1.
        let k = 7;
        let iv = taut_les_bounds(&dims(&[(n, k)]), &h, n).unwrap();
        let at_n = iv.iter().find(|i| i.k == n).unwrap();
        assert_eq!(at_n.lower, k - 1);
        assert!(taut_les_bounds(&dims(&[(1, -1)]), &h, n).is_err());
        assert!(taut_les_bounds(&BTreeMap::new(), &BTreeMap::new(), n).unwrap().is_empty());
    }

    #[test]
    fn fillings() {
        let a = GradedGroup::free(&[(0, 1), (3, 2)]);
        let b = GradedGroup::free(&[(0, 1), (3, 3)]);
        assert!(distinguish_flexible_fillings(&a, &b, 3).unwrap().is_distinct());
        assert!(!distinguish_flexible_fillings(&a, &a, 3).unwrap().is_distinct());
        let mut t2 = GradedGroup::free(&[(0, 1)]);
        t2.set(3, AbelianGroup::from_i64(0, &[2]));
        let mut t3 = GradedGroup::free(&[(0, 1)]);
        t3.set(3, AbelianGroup::from_i64(0, &[3]));
        assert!(distinguish_flexible_fillings(&t2, &t3, 3).unwrap().is_distinct());
        assert!(distinguish_flexible_fillings(&a, &b, 2).is_err());
    }

    #[test]
    fn cem_bound() {
        assert!(cem_flexible_obstruction(2, 0).unwrap());
        assert!(!cem_flexible_obstruction(1, 0).unwrap());
        assert!(cem_flexible_obstruction(5, 3).unwrap());
        assert!(!cem_flexible_obstruction(4, 3).unwrap());
        assert!(cem_flexible_obstruction(0, 3).is_err());
    }

    #[test]
    fn support_test() {
        let n = 5;
        let brieskorn: BTreeSet<i64> = (0..5).map(|i| n + 2 + 2 * i).collect();
        assert!(matches!(flexible_support_test(&brieskorn, n), FillingVerdict::NoFlexibleFilling { .. }));
        let inside: BTreeSet<i64> = (1..=n + 1).collect();
        assert!(matches!(flexible_support_test(&inside, n), FillingVerdict::Inconclusive { .. }));
        let zero: BTreeSet<i64> = [0].into();
        assert!(matches!(
            flexible_support_test(&zero, n),
            FillingVerdict::NoFlexibleFilling { witness_degree: 0, .. }
        ));
    }

    #[test]
    fn adc_obstruction_for_four_dimensional_fillings() {
        // n = 2 with H^2(W) != 0 puts SH+ in degree 1 = 3 - n.
        let w = GradedGroup::free(&[(0, 1), (2, 1)]);
        let p = sh_plus_from_vanishing(&w, 2, true).unwrap();
        assert_eq!(
            adc_homological_obstruction(&p).unwrap(),
            AdcVerdict::NotAdc { witness_degree: 1, detail: "SH+_1 = Z with k <= 3 - n = 1".into() }
        );
        let ball = sh_plus_from_vanishing(&GradedGroup::free(&[(0, 1)]), 4, true).unwrap();
        assert!(matches!(adc_homological_obstruction(&ball).unwrap(), AdcVerdict::Inconclusive { .. }));
    }

    fn table(pairs: &[(i64, usize)]) -> LoopHomologyTable {
        LoopHomologyTable { horizon: (0, 10), dims: pairs.iter().copied().collect(), base: BTreeMap::new() }
    }

    #[test]
    fn loop_space_distinguisher() {
        let lm = table(&[(0, 1), (2, 10)]);
        let ln = table(&[(0, 1)]);
        let v = boundedinfinite_distinguisher(&lm, &ln, &BTreeMap::new(), 5).unwrap();
        assert_eq!(v.witness.unwrap().k, 2);
        let same = boundedinfinite_distinguisher(&lm, &lm, &BTreeMap::new(), 5).unwrap();
        assert!(!same.verdict.is_distinct());
        // Slack from H^*(Y) absorbs the gap.
        let hy: BTreeMap<i64, usize> = [(3, 5)].into();
        let v = boundedinfinite_distinguisher(&lm, &ln, &hy, 5).unwrap();
        assert!(!v.verdict.is_distinct());

        let mut bad = table(&[(2, 1)]);
        bad.base = [(2, 3)].into();
        assert!(boundedinfinite_distinguisher(&bad, &ln, &BTreeMap::new(), 5).is_err());
        assert!(boundedinfinite_distinguisher(&lm, &ln, &BTreeMap::new(), 3).is_err());
    }

    #[test]
    fn wrapped_formulas() {
        let n = 4;
        let disk = GradedGroup::free(&[(0, 1)]);
        let p = wh_plus_from_vanishing(&disk, n).unwrap();
        assert_eq!(p.groups, GradedGroup::free(&[(n - 1, 1)]));

        let loops = BasedLoopTable { horizon: (0, 6), dims: [(0, 1), (3, 1), (6, 1)].into() };
        let w = wrapped_loop_grading(&loops, n).unwrap();
        assert_eq!(w.groups, GradedGroup::free(&[(2, 1), (5, 1), (8, 1)]));
        assert_eq!(w.horizon, Some((2, 8)));

        let s = GradedGroup::free(&[(0, 1), (4, 1)]);
        assert!(matches!(nearby_conclusion(&s, &s, true).unwrap(), NearbyVerdict::Isomorphism { .. }));
        assert!(matches!(nearby_conclusion(&s, &s, false).unwrap(), NearbyVerdict::Inconclusive { .. }));
        let t = GradedGroup::free(&[(0, 1), (1, 2), (4, 1)]);
        assert!(matches!(nearby_conclusion(&t, &s, true).unwrap(), NearbyVerdict::Inconclusive { .. }));
        assert!(nearby_conclusion(&GradedGroup::free(&[(0, 1), (3, 1)]), &s, true).is_err());
    }
}
