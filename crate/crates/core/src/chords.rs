//! Reeb chords of a Legendrian with front-projection provenance, the degree
//! formula, zig-zag stabilization and the regular-homotopy index.

use crate::error::{invalid, Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashSet};

/// Front data of a chord: cusps crossed downward and upward along the
/// capping path, and the Morse index of the height difference at the chord.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FrontData {
    pub down: u32,
    pub up: u32,
    pub index: u32,
}

impl FrontData {
    pub fn degree(&self) -> i64 {
        self.down as i64 - self.up as i64 + self.index as i64 - 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChordRecord {
    pub id: String,
    pub degree: i64,
    #[serde(with = "crate::num::rational")]
    pub action: BigRational,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub front: Option<FrontData>,
    #[serde(default = "yes")]
    pub null_homotopic: bool,
}

fn yes() -> bool {
    true
}

impl ChordRecord {
    pub fn new(id: impl Into<String>, degree: i64, action: BigRational) -> Self {
        ChordRecord { id: id.into(), degree, action, front: None, null_homotopic: true }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.action.is_positive() {
            return invalid(format!("chord {:?} has non-positive action {}", self.id, self.action));
        }
        if let Some(f) = &self.front {
            if f.degree() != self.degree {
                return invalid(format!(
                    "chord {:?}: stored degree {} but front data give {}",
                    self.id,
                    self.degree,
                    f.degree()
                ));
            }
        }
        Ok(())
    }
}

/// The chords of action below `bound`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SpectrumRaw")]
pub struct ChordSpectrum {
    pub n: u32,
    #[serde(with = "crate::num::rational")]
    pub bound: BigRational,
    pub chords: Vec<ChordRecord>,
}

#[derive(Deserialize)]
struct SpectrumRaw {
    n: u32,
    #[serde(with = "crate::num::rational")]
    bound: BigRational,
    #[serde(default)]
    chords: Vec<ChordRecord>,
}

impl TryFrom<SpectrumRaw> for ChordSpectrum {
    type Error = Error;

    fn try_from(raw: SpectrumRaw) -> Result<Self> {
        ChordSpectrum::new(raw.n, raw.bound, raw.chords)
    }
}

impl ChordSpectrum {
    pub fn new(n: u32, bound: BigRational, chords: Vec<ChordRecord>) -> Result<Self> {
        let s = ChordSpectrum { n, bound, chords };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return invalid("half-dimension n must be at least 1");
        }
        if !self.bound.is_positive() {
            return invalid(format!("action bound {} must be positive", self.bound));
        }
        let mut ids = BTreeSet::new();
        for c in &self.chords {
            c.validate()?;
            if c.action >= self.bound {
                return invalid(format!(
                    "chord {:?} has action {} >= bound {}",
                    c.id, c.action, self.bound
                ));
            }
            if !ids.insert(c.id.as_str()) {
                return invalid(format!("duplicate chord id {:?}", c.id));
            }
        }
        Ok(())
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.chords.iter().map(|c| c.degree).min()
    }

    /// Chords of action below `bound`, with the bound lowered to match.
    pub fn restrict(&self, bound: &BigRational) -> ChordSpectrum {
        let bound = bound.min(&self.bound).clone();
        let chords = self.chords.iter().filter(|c| c.action < bound).cloned().collect();
        ChordSpectrum { n: self.n, bound, chords }
    }
}

/// A closed manifold Q carried only through a Morse function on it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MorseRaw")]
pub struct MorseData {
    pub name: String,
    pub dim: u32,
    pub euler_characteristic: i64,
    pub orientable: bool,
    pub critical_indices: Vec<u32>,
}

#[derive(Deserialize)]
struct MorseRaw {
    name: String,
    dim: u32,
    euler_characteristic: i64,
    orientable: bool,
    critical_indices: Vec<u32>,
}

impl TryFrom<MorseRaw> for MorseData {
    type Error = Error;

    fn try_from(r: MorseRaw) -> Result<Self> {
        MorseData::new(r.name, r.dim, r.euler_characteristic, r.orientable, r.critical_indices)
    }
}

impl MorseData {
    pub fn new(
        name: impl Into<String>,
        dim: u32,
        euler_characteristic: i64,
        orientable: bool,
        mut critical_indices: Vec<u32>,
    ) -> Result<Self> {
        let name = name.into();
        if let Some(i) = critical_indices.iter().find(|&&i| i > dim) {
            return invalid(format!("{name}: critical point of index {i} on a {dim}-manifold"));
        }
        let alternating: i64 = critical_indices.iter().map(|&i| if i % 2 == 0 { 1 } else { -1 }).sum();
        if alternating != euler_characteristic {
            return invalid(format!(
                "{name}: critical points give Euler characteristic {alternating}, declared {euler_characteristic}"
            ));
        }
        critical_indices.sort_unstable();
        Ok(MorseData { name, dim, euler_characteristic, orientable, critical_indices })
    }

    pub fn critical_count(&self) -> usize {
        self.critical_indices.len()
    }
}

/// |c| = D − U + ind − 1.
pub fn chord_degree(down: i64, up: i64, index: i64) -> Result<i64> {
    if down < 0 || up < 0 || index < 0 {
        return invalid(format!("cusp counts and Morse index must be non-negative, got ({down}, {up}, {index})"));
    }
    Ok(down - up + index - 1)
}

/// Smallest N making every chord positive after stabilization: 1 − min degree, or 0.
pub fn min_positive_n(s: &ChordSpectrum) -> u64 {
    match s.min_degree() {
        Some(m) if m <= 0 => (1 - m) as u64,
        _ => 0,
    }
}

/// Zig-zag stabilization along Q at `sites` endpoints (default: one per chord).
///
/// Each old chord gains 2N in degree through N extra downward cusp pairs.
/// Each site and each critical point p of Q produce 2N new chords of degree
/// 1 + ind(p); their actions are distinct and lie in (ε/2, ε).
pub fn stabilize(
    s: &ChordSpectrum,
    big_n: u64,
    q: &MorseData,
    epsilon: &BigRational,
    sites: Option<usize>,
) -> Result<ChordSpectrum> {
    if s.n < 2 || q.dim + 2 != s.n {
        return invalid(format!(
            "Q must have dimension n - 2 = {}, got {}",
            s.n as i64 - 2,
            q.dim
        ));
    }
    if !epsilon.is_positive() {
        return invalid(format!("zig-zag action {epsilon} must be positive"));
    }
    if *epsilon >= s.bound {
        return invalid(format!(
            "zig-zag action {epsilon} is not below the spectrum bound {}",
            s.bound
        ));
    }
    if big_n == 0 {
        return Ok(s.clone());
    }
    let shift = 2 * big_n as i64;
    let mut chords: Vec<ChordRecord> = s
        .chords
        .iter()
        .map(|c| {
            let mut c = c.clone();
            c.degree += shift;
            if let Some(f) = &mut c.front {
                f.down += shift as u32;
            }
            c
        })
        .collect();

    let sites = sites.unwrap_or(s.chords.len());
    let total = 2 * big_n as usize * q.critical_count() * sites;
    let denom = epsilon.denom() * BigInt::from(2 * total + 1);
    // New ids are distinct among themselves; only clashes with old ones matter.
    let taken: HashSet<&str> = s.chords.iter().map(|c| c.id.as_str()).collect();
    chords.reserve(total);
    let mut j = 0usize;
    for site in 0..sites {
        for (p, &ind) in q.critical_indices.iter().enumerate() {
            for z in 0..2 * big_n {
                j += 1;
                let id = format!("z{site}.{p}.{z}");
                if taken.contains(id.as_str()) {
                    return invalid(format!("new chord id {id:?} collides with an existing chord"));
                }
                let action = BigRational::new(epsilon.numer() * BigInt::from(total + j), denom.clone());
                chords.push(ChordRecord {
                    id,
                    degree: 1 + ind as i64,
                    action,
                    front: Some(FrontData { down: 2, up: 0, index: ind }),
                    null_homotopic: true,
                });
            }
        }
    }
    // Old chords were valid and new ones lie in (ε/2, ε) with consistent fronts.
    Ok(ChordSpectrum { n: s.n, bound: s.bound.clone(), chords })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "group", content = "value", rename_all = "snake_case")]
pub enum SelfIntersection {
    Integer(i64),
    Mod2(u8),
}

impl SelfIntersection {
    pub fn is_zero(&self) -> bool {
        matches!(self, SelfIntersection::Integer(0) | SelfIntersection::Mod2(0))
    }
}

/// (−1)^{(n−1)(n−2)/2}.
pub fn regular_homotopy_sign(n: i64) -> i64 {
    if ((n - 1) * (n - 2) / 2) % 2 == 0 {
        1
    } else {
        -1
    }
}

/// I = (−1)^{(n−1)(n−2)/2} · N · χ(Q), integral for n even and Q orientable.
pub fn self_intersection_index(n: i64, big_n: i64, q: &MorseData) -> Result<SelfIntersection> {
    if n < 2 {
        return invalid(format!("n = {n} must be at least 2"));
    }
    let value = regular_homotopy_sign(n) * big_n * q.euler_characteristic;
    Ok(if n % 2 == 0 && q.orientable {
        SelfIntersection::Integer(value)
    } else {
        SelfIntersection::Mod2(value.rem_euclid(2) as u8)
    })
}

/// An orientable Q^{n−2} ⊂ ℝ^{n−1} with χ(Q) = 0 and a minimal Morse function.
pub fn choose_q(n: u32) -> Result<MorseData> {
    match n {
        0..=2 => invalid(format!(
            "no closed {}-manifold has Euler characteristic zero for n = {n}",
            n.saturating_sub(2)
        )),
        3 => MorseData::new("S1", 1, 0, true, vec![0, 1]),
        _ => MorseData::new(format!("S1xS{}", n - 3), n - 2, 0, true, vec![0, 1, n - 3, n - 2]),
    }
}

/// Ids of chords that cannot be graded because their class in π₁(Y, Λ) is nonzero.
pub fn ungraded_chords(s: &ChordSpectrum) -> Vec<&str> {
    s.chords.iter().filter(|c| !c.null_homotopic).map(|c| c.id.as_str()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    fn spectrum(n: u32, degrees: &[i64]) -> ChordSpectrum {
        let chords = degrees
            .iter()
            .enumerate()
            .map(|(i, &d)| ChordRecord::new(format!("c{i}"), d, q(i as i64 + 1, 1)))
            .collect();
        ChordSpectrum::new(n, q(100, 1), chords).unwrap()
    }

    #[test]
    fn degree_formula() {
        assert_eq!(chord_degree(2, 0, 0).unwrap(), 1);
        assert_eq!(chord_degree(0, 0, 0).unwrap(), -1);
        for j in 0..=10 {
            assert_eq!(chord_degree(2, 0, j).unwrap(), 1 + j);
        }
        assert!(chord_degree(-1, 0, 0).is_err());
    }

    #[test]
    fn front_round_trip() {
        let mut c = ChordRecord::new("a", 1, q(1, 2));
        c.front = Some(FrontData { down: 2, up: 0, index: 0 });
        assert!(c.validate().is_ok());
        c.degree = 2;
        assert!(c.validate().is_err());
    }

    #[test]
    fn stabilize_negative_chord() {
        let s = spectrum(3, &[-2]);
        let n = min_positive_n(&s);
        assert_eq!(n, 3);
        let out = stabilize(&s, n, &choose_q(3).unwrap(), &q(1, 2), None).unwrap();
        assert_eq!(out.chords[0].degree, 4);
        assert!(out.chords.iter().all(|c| c.degree >= 1));
        assert_eq!(out.chords.len(), 1 + 2 * 3 * 2);
    }

    #[test]
    fn stabilize_counts_and_degrees() {
        let n = 6;
        let s = spectrum(n, &[0]);
        let out = stabilize(&s, 3, &choose_q(n).unwrap(), &q(1, 2), None).unwrap();
        let new: Vec<i64> = out.chords[1..].iter().map(|c| c.degree).collect();
        assert_eq!(new.len(), 24);
        for d in [1, 2, n as i64 - 2, n as i64 - 1] {
            assert_eq!(new.iter().filter(|&&x| x == d).count(), 6);
        }
        let half = q(1, 4);
        assert!(out.chords[1..].iter().all(|c| c.action > half && c.action < q(1, 2)));
        let actions: BTreeSet<_> = out.chords[1..].iter().map(|c| c.action.clone()).collect();
        assert_eq!(actions.len(), 24);
    }

    #[test]
    fn stabilize_edge_cases() {
        let s = spectrum(3, &[1, 2]);
        assert_eq!(min_positive_n(&s), 0);
        let same = stabilize(&s, 0, &choose_q(3).unwrap(), &q(1, 2), None).unwrap();
        assert_eq!(same, s);
        assert!(stabilize(&s, 1, &choose_q(3).unwrap(), &q(100, 1), None).is_err());
        assert!(stabilize(&s, 1, &choose_q(4).unwrap(), &q(1, 2), None).is_err());
        assert_eq!(min_positive_n(&spectrum(3, &[-5, 3])), 6);
        assert_eq!(min_positive_n(&spectrum(3, &[0])), 1);
    }

    #[test]
    fn index_table() {
        assert_eq!(self_intersection_index(3, 5, &choose_q(3).unwrap()).unwrap(), SelfIntersection::Mod2(0));
        assert_eq!(self_intersection_index(6, 5, &choose_q(6).unwrap()).unwrap(), SelfIntersection::Integer(0));
        let s2 = MorseData::new("S2", 2, 2, true, vec![0, 2]).unwrap();
        assert_eq!(self_intersection_index(4, 2, &s2).unwrap(), SelfIntersection::Integer(-4));
        assert!(choose_q(2).is_err());
        assert_eq!(choose_q(4).unwrap().critical_indices, vec![0, 1, 1, 2]);
    }

    #[test]
    fn morse_data_checks_euler_characteristic() {
        assert!(MorseData::new("S2", 2, 0, true, vec![0, 2]).is_err());
        assert!(MorseData::new("S1", 1, 0, true, vec![0, 2]).is_err());
    }

    #[test]
    fn spectrum_validation() {
        let c = ChordRecord::new("a", 1, q(5, 1));
        assert!(ChordSpectrum::new(3, q(5, 1), vec![c.clone()]).is_err());
        assert!(ChordSpectrum::new(3, q(6, 1), vec![c.clone(), c.clone()]).is_err());
        assert!(ChordSpectrum::new(3, q(6, 1), vec![ChordRecord::new("z", 1, q(0, 1))]).is_err());
    }
}
