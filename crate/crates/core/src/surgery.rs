//! Reeb orbits created by contact surgery, word enumeration, and ADC
//! certificates with the transformations surgery induces on them.

use crate::chords::{choose_q, min_positive_n, stabilize, ChordRecord, ChordSpectrum, MorseData};
use crate::error::{invalid, Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// Hard cap on enumerated words; beyond it the caller should lower the bound.
pub const MAX_WORDS: usize = 2_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OrbitOrigin {
    Old {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
    Word { letters: Vec<String> },
    /// j-th iterate of the orbit in the belt sphere of a subcritical handle.
    Belt { iterate: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrbitRecord {
    pub degree: i64,
    #[serde(with = "crate::num::rational")]
    pub action: BigRational,
    pub origin: OrbitOrigin,
    #[serde(default = "yes")]
    pub contractible: bool,
}

fn yes() -> bool {
    true
}

impl OrbitRecord {
    pub fn old(degree: i64, action: BigRational) -> Self {
        OrbitRecord { degree, action, origin: OrbitOrigin::Old { label: None }, contractible: true }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.action.is_positive() {
            return invalid(format!("orbit with non-positive action {}", self.action));
        }
        if let OrbitOrigin::Belt { iterate: 0 } = self.origin {
            return invalid("belt-sphere orbits are iterates j >= 1");
        }
        Ok(())
    }
}

/// Orbits of action below `bound`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "OrbitSpectrumRaw")]
pub struct OrbitSpectrum {
    pub n: u32,
    #[serde(with = "crate::num::rational")]
    pub bound: BigRational,
    pub orbits: Vec<OrbitRecord>,
}

#[derive(Deserialize)]
struct OrbitSpectrumRaw {
    n: u32,
    #[serde(with = "crate::num::rational")]
    bound: BigRational,
    #[serde(default)]
    orbits: Vec<OrbitRecord>,
}

impl TryFrom<OrbitSpectrumRaw> for OrbitSpectrum {
    type Error = Error;

    fn try_from(r: OrbitSpectrumRaw) -> Result<Self> {
        OrbitSpectrum::new(r.n, r.bound, r.orbits)
    }
}

impl OrbitSpectrum {
    pub fn new(n: u32, bound: BigRational, orbits: Vec<OrbitRecord>) -> Result<Self> {
        if n < 1 {
            return invalid("half-dimension n must be at least 1");
        }
        if !bound.is_positive() {
            return invalid(format!("action bound {bound} must be positive"));
        }
        for o in &orbits {
            o.validate()?;
            if o.action >= bound {
                return invalid(format!("orbit action {} is not below the bound {bound}", o.action));
            }
        }
        Ok(OrbitSpectrum { n, bound, orbits })
    }

    pub fn restrict(&self, bound: &BigRational) -> OrbitSpectrum {
        let bound = bound.min(&self.bound).clone();
        let orbits = self.orbits.iter().filter(|o| o.action < bound).cloned().collect();
        OrbitSpectrum { n: self.n, bound, orbits }
    }
}

/// Multiplying the contact form by s multiplies actions and the bound by s.
pub trait Rescale: Sized {
    fn rescale(&self, s: &BigRational) -> Result<Self>;
}

fn check_scale(s: &BigRational) -> Result<()> {
    if !s.is_positive() {
        return invalid(format!("rescaling factor {s} must be positive"));
    }
    Ok(())
}

impl Rescale for OrbitSpectrum {
    fn rescale(&self, s: &BigRational) -> Result<Self> {
        check_scale(s)?;
        let orbits = self
            .orbits
            .iter()
            .map(|o| OrbitRecord { action: &o.action * s, ..o.clone() })
            .collect();
        Ok(OrbitSpectrum { n: self.n, bound: &self.bound * s, orbits })
    }
}

impl Rescale for ChordSpectrum {
    fn rescale(&self, s: &BigRational) -> Result<Self> {
        check_scale(s)?;
        let chords = self
            .chords
            .iter()
            .map(|c| ChordRecord { action: &c.action * s, ..c.clone() })
            .collect();
        Ok(ChordSpectrum { n: self.n, bound: &self.bound * s, chords })
    }
}

/// A word of chords. For cyclic classes `letters` is the least rotation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word {
    pub letters: Vec<String>,
    #[serde(with = "crate::num::rational")]
    pub action: BigRational,
    pub degree: i64,
}

pub type CyclicWord = Word;

/// Least rotation of a sequence.
pub fn canonical_rotation<T: Ord + Clone>(seq: &[T]) -> Vec<T> {
    (0..seq.len().max(1))
        .map(|r| {
            let mut v = seq[r.min(seq.len())..].to_vec();
            v.extend_from_slice(&seq[..r.min(seq.len())]);
            v
        })
        .min()
        .unwrap_or_default()
}

fn is_least_rotation(seq: &[usize]) -> bool {
    let n = seq.len();
    (1..n).all(|r| {
        for i in 0..n {
            let a = seq[(r + i) % n];
            let b = seq[i];
            if a != b {
                return a > b;
            }
        }
        true
    })
}

struct Alphabet<'a> {
    chords: Vec<&'a ChordRecord>,
}

impl<'a> Alphabet<'a> {
    /// Graded chords sorted by id, so index order is id order.
    fn new(s: &'a ChordSpectrum) -> Self {
        let mut chords: Vec<&ChordRecord> = s.chords.iter().filter(|c| c.null_homotopic).collect();
        chords.sort_by(|a, b| a.id.cmp(&b.id));
        Alphabet { chords }
    }

    fn word(&self, seq: &[usize], action: &BigRational) -> Word {
        Word {
            letters: seq.iter().map(|&i| self.chords[i].id.clone()).collect(),
            action: action.clone(),
            degree: seq.iter().map(|&i| self.chords[i].degree).sum(),
        }
    }

    fn walk(
        &self,
        bound: &BigRational,
        cyclic: bool,
        seq: &mut Vec<usize>,
        action: &BigRational,
        out: &mut Vec<Word>,
    ) -> Result<()> {
        let start = if cyclic { seq.first().copied().unwrap_or(0) } else { 0 };
        for i in start..self.chords.len() {
            let next = action + &self.chords[i].action;
            if next >= *bound {
                continue;
            }
            seq.push(i);
            if !cyclic || is_least_rotation(seq) {
                if out.len() >= MAX_WORDS {
                    return Err(Error::Infeasible(format!(
                        "more than {MAX_WORDS} words below action {bound}"
                    )));
                }
                out.push(self.word(seq, &next));
            }
            self.walk(bound, cyclic, seq, &next, out)?;
            seq.pop();
        }
        Ok(())
    }
}

fn enumerate(s: &ChordSpectrum, bound: &BigRational, cyclic: bool) -> Result<Vec<Word>> {
    if !bound.is_positive() {
        return invalid(format!("word action bound {bound} must be positive"));
    }
    if *bound > s.bound {
        return invalid(format!(
            "word bound {bound} exceeds the chord spectrum bound {}; chords in between are unknown",
            s.bound
        ));
    }
    let alphabet = Alphabet::new(s);
    let mut out = Vec::new();
    alphabet.walk(bound, cyclic, &mut Vec::new(), &BigRational::zero(), &mut out)?;
    Ok(out)
}

/// Every cyclic class of nonempty chord words with total action below `bound`,
/// once each. Chords that are not null-homotopic are left out.
pub fn enumerate_words(s: &ChordSpectrum, bound: &BigRational) -> Result<Vec<CyclicWord>> {
    enumerate(s, bound, true)
}

/// Every nonempty chord word (not up to rotation) with total action below `bound`.
pub fn enumerate_linear_words(s: &ChordSpectrum, bound: &BigRational) -> Result<Vec<Word>> {
    enumerate(s, bound, false)
}

/// Orbits after flexible surgery along Λ: the old orbits below D together
/// with one orbit γ_w per cyclic word, |γ_w| = |w| + n − 3.
pub fn bee_surgery(y: &OrbitSpectrum, s: &ChordSpectrum, bound: &BigRational) -> Result<OrbitSpectrum> {
    if y.n != s.n {
        return invalid(format!("orbit spectrum has n = {} but chord spectrum n = {}", y.n, s.n));
    }
    if y.n < 2 {
        return invalid("surgery along a Legendrian needs n >= 2");
    }
    if *bound > y.bound {
        return invalid(format!(
            "bound {bound} exceeds the orbit spectrum bound {}; orbits in between are unknown",
            y.bound
        ));
    }
    let shift = y.n as i64 - 3;
    let mut orbits = y.restrict(bound).orbits;
    for w in enumerate_words(s, bound)? {
        orbits.push(OrbitRecord {
            degree: w.degree + shift,
            action: w.action,
            origin: OrbitOrigin::Word { letters: w.letters },
            contractible: true,
        });
    }
    OrbitSpectrum::new(y.n, bound.clone(), orbits)
}

/// Index-k subcritical surgery adds the iterates γ^j, |γ^j| = 2n − k − 4 + 2j,
/// at actions ε·j for j = 1..=iterates. Index 2 needs the caller to assert
/// that the attaching circle or all relevant orbits are contractible.
pub fn subcritical_surgery(
    y: &OrbitSpectrum,
    k: u32,
    iterates: u32,
    epsilon: &BigRational,
    index_two_hypotheses: bool,
) -> Result<OrbitSpectrum> {
    let n = y.n;
    if k < 1 || k >= n {
        return invalid(format!("index {k} surgery is not subcritical for n = {n} (need 1 <= k < n)"));
    }
    if k == 2 && !index_two_hypotheses {
        return invalid("index 2 surgery needs the contractibility hypotheses to be asserted");
    }
    if !epsilon.is_positive() {
        return invalid(format!("handle size {epsilon} must be positive"));
    }
    let top = epsilon * BigRational::from_integer(BigInt::from(iterates));
    if iterates > 0 && top >= y.bound {
        return invalid(format!(
            "the {iterates}-th iterate has action {top} >= bound {}; shrink the handle",
            y.bound
        ));
    }
    let mut orbits = y.orbits.clone();
    for j in 1..=iterates {
        orbits.push(OrbitRecord {
            degree: subcritical_degree(n as i64, k as i64, j as i64),
            action: epsilon * BigRational::from_integer(BigInt::from(j)),
            origin: OrbitOrigin::Belt { iterate: j },
            contractible: true,
        });
    }
    OrbitSpectrum::new(n, y.bound.clone(), orbits)
}

/// 2n − k − 4 + 2j
pub fn subcritical_degree(n: i64, k: i64, j: i64) -> i64 {
    2 * n - k - 4 + 2 * j
}

/// Chords from a Legendrian Λ⁻ through the auxiliary sphere Λ and back.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MixedChords {
    /// Chords from Λ⁻ to Λ.
    pub outgoing: Vec<ChordRecord>,
    /// Chords from Λ to Λ⁻.
    pub incoming: Vec<ChordRecord>,
    /// Chords of Λ.
    pub internal: Vec<ChordRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum LegendrianSurgery {
    /// Subcritical ambient surgery along an isotropic D^k.
    Ambient {
        k: u32,
        #[serde(with = "crate::num::rational")]
        action: BigRational,
    },
    /// Contact and Legendrian surgery along Λ^{k−1} ⊂ Λ⁻ at once.
    Simultaneous {
        k: u32,
        #[serde(with = "crate::num::rational")]
        action: BigRational,
    },
    /// The belt sphere after critical surgery along the input Legendrian sphere.
    BeltSphere {
        #[serde(with = "crate::num::rational")]
        bound: BigRational,
    },
    /// Contact surgery along a Λ disjoint from Λ⁻ and loose in its complement.
    Nonsimultaneous {
        mixed: MixedChords,
        #[serde(with = "crate::num::rational")]
        bound: BigRational,
    },
}

/// The chord spectrum of the Legendrian produced by `rule`.
pub fn legendrian_surgery(s: &ChordSpectrum, rule: &LegendrianSurgery) -> Result<ChordSpectrum> {
    let n = s.n;
    match rule {
        LegendrianSurgery::Ambient { k, action } | LegendrianSurgery::Simultaneous { k, action } => {
            if *k < 1 || *k + 1 >= n {
                return invalid(format!(
                    "index {k} is not subcritical for Legendrian surgery with n = {n} (need k < n - 1)"
                ));
            }
            if !action.is_positive() || *action >= s.bound {
                return invalid(format!("new chord action {action} must lie in (0, {})", s.bound));
            }
            let id = fresh_id(s, "belt");
            let mut chords = s.chords.clone();
            chords.push(ChordRecord::new(id, n as i64 - *k as i64 - 1, action.clone()));
            ChordSpectrum::new(n, s.bound.clone(), chords)
        }
        LegendrianSurgery::BeltSphere { bound } => belt_sphere_chords(s, bound),
        LegendrianSurgery::Nonsimultaneous { mixed, bound } => nonsimultaneous_chords(s, mixed, bound),
    }
}

fn fresh_id(s: &ChordSpectrum, stem: &str) -> String {
    let mut id = stem.to_string();
    let mut i = 0;
    while s.chords.iter().any(|c| c.id == id) {
        i += 1;
        id = format!("{stem}{i}");
    }
    id
}

/// Chords c_w of the belt sphere, one per word w of chords of the attaching
/// sphere, |c_w| = |w| + n − 2.
pub fn belt_sphere_chords(s: &ChordSpectrum, bound: &BigRational) -> Result<ChordSpectrum> {
    if s.n < 2 {
        return invalid("belt sphere chords need n >= 2");
    }
    let shift = s.n as i64 - 2;
    let chords = enumerate_linear_words(s, bound)?
        .into_iter()
        .map(|w| ChordRecord::new(format!("({})", w.letters.join(" ")), w.degree + shift, w.action))
        .collect();
    ChordSpectrum::new(s.n, bound.clone(), chords)
}

/// Chords of Λ⁻ after surgery along Λ: the old chords and the words
/// a c₁⋯c_m b. Chords touching Λ are first stabilized to positive degree.
pub fn nonsimultaneous_chords(
    s: &ChordSpectrum,
    mixed: &MixedChords,
    bound: &BigRational,
) -> Result<ChordSpectrum> {
    let n = s.n;
    if n < 3 {
        return invalid("stabilizing the auxiliary Legendrian needs n >= 3");
    }
    if *bound > s.bound {
        return invalid(format!("bound {bound} exceeds the chord spectrum bound {}", s.bound));
    }
    let tagged = |list: &[ChordRecord], tag: &str| -> Vec<ChordRecord> {
        list.iter().map(|c| ChordRecord { id: format!("{tag}:{}", c.id), ..c.clone() }).collect()
    };
    let mut aux = tagged(&mixed.outgoing, "a");
    aux.extend(tagged(&mixed.incoming, "b"));
    aux.extend(tagged(&mixed.internal, "c"));
    let aux = ChordSpectrum::new(n, bound.clone(), aux.into_iter().filter(|c| c.action < *bound).collect())?;
    let big_n = min_positive_n(&aux);
    let aux = if big_n > 0 {
        let q: MorseData = choose_q(n)?;
        let eps = zigzag_epsilon(bound, &aux, big_n, &q);
        stabilize(&aux, big_n, &q, &eps, None)?
    } else {
        aux
    };
    let pick = |prefix: &str| -> Vec<&ChordRecord> {
        aux.chords.iter().filter(|c| c.id.starts_with(prefix)).collect()
    };
    let (outs, ins) = (pick("a:"), pick("b:"));
    let inner: Vec<&ChordRecord> = aux
        .chords
        .iter()
        .filter(|c| !c.id.starts_with("a:") && !c.id.starts_with("b:"))
        .collect();

    let mut chords = s.restrict(bound).chords;
    let mut count = 0usize;
    for a in &outs {
        let mut stack: Vec<(Vec<&ChordRecord>, BigRational)> = vec![(vec![*a], a.action.clone())];
        while let Some((path, action)) = stack.pop() {
            for b in &ins {
                let total = &action + &b.action;
                if total < *bound {
                    let mut word = path.clone();
                    word.push(b);
                    count += 1;
                    if count > MAX_WORDS {
                        return Err(Error::Infeasible(format!("more than {MAX_WORDS} mixed words")));
                    }
                    chords.push(ChordRecord::new(
                        format!("({})", word.iter().map(|c| c.id.as_str()).collect::<Vec<_>>().join(" ")),
                        word.iter().map(|c| c.degree).sum(),
                        total,
                    ));
                }
            }
            for c in &inner {
                let total = &action + &c.action;
                if total < *bound {
                    let mut next = path.clone();
                    next.push(c);
                    stack.push((next, total));
                }
            }
        }
    }
    ChordSpectrum::new(n, bound.clone(), chords)
}

/// Zig-zag size putting every new chord in (B/2, B): two of them never fit in one word.
fn zigzag_epsilon(bound: &BigRational, s: &ChordSpectrum, big_n: u64, q: &MorseData) -> BigRational {
    let m = 2 * big_n as usize * q.critical_count() * s.chords.len();
    bound * BigRational::new(BigInt::from(2 * m + 1), BigInt::from(2 * m + 2))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stage {
    /// Contact form α_k = scale · α_1.
    #[serde(with = "crate::num::rational")]
    pub scale: BigRational,
    #[serde(with = "crate::num::rational")]
    pub bound: BigRational,
    #[serde(default)]
    pub orbits: Vec<OrbitRecord>,
}

impl Stage {
    pub fn spectrum(&self, n: u32) -> Result<OrbitSpectrum> {
        OrbitSpectrum::new(n, self.bound.clone(), self.orbits.clone())
    }
}

/// Contact forms α_1 ≥ α_2 ≥ … with bounds D_1 < D_2 < … such that every
/// contractible orbit of α_k with action below D_k has positive degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdcCertificate {
    pub n: u32,
    #[serde(default)]
    pub stages: Vec<Stage>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    NonPositiveScale,
    NonPositiveBound,
    ScaleIncreases,
    BoundNotIncreasing,
    ActionOutOfRange,
    NonPositiveDegree,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    /// 1-based stage number.
    pub stage: usize,
    /// 0-based record index within the stage, when a record is at fault.
    pub record: Option<usize>,
    pub kind: ViolationKind,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdcCheck {
    pub pass: bool,
    pub stages: usize,
    pub violation: Option<Violation>,
}

/// Checks a certificate and reports the first violation.
pub fn adc_check(c: &AdcCertificate) -> AdcCheck {
    let fail = |v: Violation| AdcCheck { pass: false, stages: c.stages.len(), violation: Some(v) };
    for (i, st) in c.stages.iter().enumerate() {
        let stage = i + 1;
        let v = |kind, record, detail: String| Violation { stage, record, kind, detail };
        if !st.scale.is_positive() {
            return fail(v(ViolationKind::NonPositiveScale, None, format!("scale {}", st.scale)));
        }
        if !st.bound.is_positive() {
            return fail(v(ViolationKind::NonPositiveBound, None, format!("bound {}", st.bound)));
        }
        if i > 0 {
            let prev = &c.stages[i - 1];
            if st.scale > prev.scale {
                return fail(v(
                    ViolationKind::ScaleIncreases,
                    None,
                    format!("scale {} > previous {}", st.scale, prev.scale),
                ));
            }
            if st.bound <= prev.bound {
                return fail(v(
                    ViolationKind::BoundNotIncreasing,
                    None,
                    format!("bound {} <= previous {}", st.bound, prev.bound),
                ));
            }
        }
        for (r, o) in st.orbits.iter().enumerate() {
            if !o.action.is_positive() || o.action >= st.bound {
                return fail(v(
                    ViolationKind::ActionOutOfRange,
                    Some(r),
                    format!("action {} outside (0, {})", o.action, st.bound),
                ));
            }
            if o.contractible && o.degree <= 0 {
                return fail(v(
                    ViolationKind::NonPositiveDegree,
                    Some(r),
                    format!("contractible orbit of degree {} at action {}", o.degree, o.action),
                ));
            }
        }
    }
    AdcCheck { pass: true, stages: c.stages.len(), violation: None }
}

fn pow(x: &BigRational, e: usize) -> BigRational {
    num_traits::pow(x.clone(), e)
}

/// Passes to a subsequence with D_{k+1} ≥ ε⁻² D_k and replaces stage k by
/// ε^{k−1} times itself, so that α'_{k+1} ≤ ε α'_k and D'_{k+1} ≥ D'_k / ε.
pub fn normalize_certificate(c: &AdcCertificate, epsilon: &BigRational) -> Result<AdcCertificate> {
    if !epsilon.is_positive() || *epsilon >= BigRational::one() {
        return invalid(format!("epsilon {epsilon} must lie in (0, 1)"));
    }
    if c.stages.is_empty() {
        return invalid("an empty certificate has no subsequence to normalize");
    }
    monotone(c)?;
    let factor = pow(&epsilon.recip(), 2);
    let mut picks = vec![0usize];
    for j in 1..c.stages.len() {
        let last = &c.stages[*picks.last().expect("nonempty")];
        if c.stages[j].bound >= &last.bound * &factor {
            picks.push(j);
        }
    }
    let mut stages = Vec::with_capacity(picks.len());
    for (k, &j) in picks.iter().enumerate() {
        let s = pow(epsilon, k);
        let st = &c.stages[j];
        let sp = st.spectrum(c.n)?.rescale(&s)?;
        stages.push(Stage { scale: &st.scale * &s, bound: sp.bound, orbits: sp.orbits });
    }
    Ok(AdcCertificate { n: c.n, stages })
}

fn monotone(c: &AdcCertificate) -> Result<()> {
    let check = adc_check(c);
    if let Some(v) = check.violation {
        if matches!(
            v.kind,
            ViolationKind::ScaleIncreases
                | ViolationKind::BoundNotIncreasing
                | ViolationKind::NonPositiveScale
                | ViolationKind::NonPositiveBound
                | ViolationKind::ActionOutOfRange
        ) {
            return invalid(format!("certificate is malformed at stage {}: {}", v.stage, v.detail));
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlexibleStageNote {
    /// Output stage k (1-based) and the input stage it came from.
    pub k: usize,
    pub source_stage: usize,
    pub stabilization: u64,
    pub word_orbits: usize,
    pub ungraded_chords: usize,
}

/// Flexible surgery along Legendrians Λ_k with chord spectra `chords[k]`.
///
/// Picks greedily a subsequence with D_k > k·4^k, stabilizes each Λ_k until
/// its chords below k·4^k are positive, adds the word orbits and rescales
/// stage k by 4^{−k}, so the output has bounds D″_k = k.
pub fn flexible_surgery_certificate(
    c: &AdcCertificate,
    chords: &[ChordSpectrum],
) -> Result<(AdcCertificate, Vec<FlexibleStageNote>)> {
    let n = c.n;
    if n < 3 {
        return invalid(format!("flexible Weinstein domains need n >= 3, got n = {n}"));
    }
    if chords.len() != c.stages.len() {
        return invalid(format!(
            "{} chord spectra for {} certificate stages",
            chords.len(),
            c.stages.len()
        ));
    }
    let check = adc_check(c);
    if let Some(v) = check.violation {
        return invalid(format!("input certificate fails at stage {}: {}", v.stage, v.detail));
    }
    let mut stages = Vec::new();
    let mut notes = Vec::new();
    let mut k = 1usize;
    for (j, st) in c.stages.iter().enumerate() {
        let four_k = BigRational::from_integer(num_traits::pow(BigInt::from(4), k));
        let target = &four_k * BigRational::from_integer(BigInt::from(k));
        if st.bound <= target {
            continue;
        }
        let s = &chords[j];
        if s.n != n {
            return invalid(format!("chord spectrum {} has n = {}, expected {n}", j + 1, s.n));
        }
        if s.bound < target {
            return invalid(format!(
                "chord spectrum {} stops at {} but chords below {target} are needed",
                j + 1,
                s.bound
            ));
        }
        let graded: Vec<ChordRecord> = s.chords.iter().filter(|c| c.null_homotopic).cloned().collect();
        let ungraded = s.chords.len() - graded.len();
        let below = ChordSpectrum::new(n, s.bound.clone(), graded)?.restrict(&target);
        let big_n = min_positive_n(&below);
        let positive = if big_n > 0 {
            let q = choose_q(n)?;
            let eps = zigzag_epsilon(&target, &below, big_n, &q);
            stabilize(&below, big_n, &q, &eps, None)?
        } else {
            below
        };
        let after = bee_surgery(&st.spectrum(n)?, &positive, &target)?;
        let words = after.orbits.iter().filter(|o| matches!(o.origin, OrbitOrigin::Word { .. })).count();
        let scaled = after.rescale(&four_k.recip())?;
        stages.push(Stage { scale: &st.scale / &four_k, bound: scaled.bound, orbits: scaled.orbits });
        notes.push(FlexibleStageNote { k, source_stage: j + 1, stabilization: big_n, word_orbits: words, ungraded_chords: ungraded });
        k += 1;
    }
    if stages.is_empty() {
        return Err(Error::Infeasible("no stage satisfies D_k > k 4^k".into()));
    }
    let out = AdcCertificate { n, stages };
    let verdict = adc_check(&out);
    assert!(verdict.pass, "flexible surgery produced a non-ADC certificate: {verdict:?}");
    Ok((out, notes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    fn chords(n: u32, bound: BigRational, list: &[(&str, i64, BigRational)]) -> ChordSpectrum {
        let cs = list.iter().map(|(id, d, a)| ChordRecord::new(*id, *d, a.clone())).collect();
        ChordSpectrum::new(n, bound, cs).unwrap()
    }

    /// All sequences below the bound, each reduced to its least rotation.
    fn brute_force(s: &ChordSpectrum, bound: &BigRational) -> BTreeSet<Vec<String>> {
        let mut out = BTreeSet::new();
        let mut frontier: Vec<(Vec<String>, BigRational)> = vec![(vec![], q(0, 1))];
        while let Some((w, a)) = frontier.pop() {
            for c in &s.chords {
                let next = &a + &c.action;
                if next < *bound {
                    let mut v = w.clone();
                    v.push(c.id.clone());
                    out.insert(canonical_rotation(&v));
                    frontier.push((v, next));
                }
            }
        }
        out
    }

    #[test]
    fn seven_classes() {
        let s = chords(3, q(10, 1), &[("a", 1, q(1, 1)), ("b", 2, q(3, 2))]);
        let words = enumerate_words(&s, &q(4, 1)).unwrap();
        let mut got: Vec<(String, i64)> = words.iter().map(|w| (w.letters.concat(), w.degree)).collect();
        got.sort();
        let want = [("a", 1), ("aa", 2), ("aaa", 3), ("aab", 4), ("ab", 3), ("b", 2), ("bb", 4)];
        let want: Vec<(String, i64)> = want.iter().map(|(w, d)| (w.to_string(), *d)).collect();
        assert_eq!(got, want);
        let brute = brute_force(&s, &q(4, 1));
        let ours: BTreeSet<Vec<String>> = words.into_iter().map(|w| w.letters).collect();
        assert_eq!(ours, brute);
    }

    #[test]
    fn small_alphabets() {
        let empty = chords(3, q(5, 1), &[]);
        assert!(enumerate_words(&empty, &q(4, 1)).unwrap().is_empty());
        let single = chords(3, q(5, 1), &[("c", 1, q(1, 1))]);
        let w = enumerate_words(&single, &q(5, 2)).unwrap();
        assert_eq!(w.len(), 2);
        assert!(enumerate_words(&single, &q(0, 1)).is_err());
        assert!(enumerate_words(&single, &q(6, 1)).is_err());
    }

    #[test]
    fn periodic_words_appear_once() {
        let s = chords(3, q(10, 1), &[("a", 1, q(1, 1)), ("b", 1, q(1, 1))]);
        let words = enumerate_words(&s, &q(9, 2)).unwrap();
        let abab = words.iter().filter(|w| w.letters == ["a", "b", "a", "b"]).count();
        assert_eq!(abab, 1);
        assert_eq!(words.iter().filter(|w| w.letters.len() == 4).count(), 6);
        assert_eq!(words.into_iter().map(|w| w.letters).collect::<BTreeSet<_>>(), brute_force(&s, &q(9, 2)));
    }

    #[test]
    fn bee_degrees() {
        let y = OrbitSpectrum::new(3, q(10, 1), vec![OrbitRecord::old(2, q(5, 1))]).unwrap();
        let s = chords(3, q(10, 1), &[("c", 1, q(1, 1))]);
        let out = bee_surgery(&y, &s, &q(7, 2)).unwrap();
        let degrees: Vec<i64> = out.orbits.iter().map(|o| o.degree).collect();
        assert_eq!(degrees, vec![1, 2, 3]);
        let none = bee_surgery(&y, &chords(3, q(10, 1), &[]), &q(10, 1)).unwrap();
        assert_eq!(none.orbits, y.orbits);
    }

    #[test]
    fn subcritical_iterates() {
        let y = OrbitSpectrum::new(3, q(10, 1), vec![]).unwrap();
        let out = subcritical_surgery(&y, 1, 4, &q(1, 1), false).unwrap();
        let degrees: Vec<i64> = out.orbits.iter().map(|o| o.degree).collect();
        assert_eq!(degrees, vec![3, 5, 7, 9]);
        assert!(subcritical_surgery(&y, 3, 1, &q(1, 1), false).is_err());
        assert!(subcritical_surgery(&y, 2, 1, &q(1, 1), false).is_err());
        assert!(subcritical_surgery(&y, 2, 1, &q(1, 1), true).is_ok());
        assert!(subcritical_surgery(&y, 1, 10, &q(1, 1), false).is_err());
        assert_eq!(subcritical_surgery(&y, 1, 0, &q(1, 1), false).unwrap(), y);
    }

    #[test]
    fn legendrian_rules() {
        let s = chords(5, q(10, 1), &[("c", 1, q(1, 1))]);
        let out = legendrian_surgery(&s, &LegendrianSurgery::Ambient { k: 2, action: q(1, 10) }).unwrap();
        assert_eq!(out.chords.last().unwrap().degree, 2);
        assert!(legendrian_surgery(&s, &LegendrianSurgery::Simultaneous { k: 4, action: q(1, 10) }).is_err());

        let s3 = chords(3, q(10, 1), &[("c", 1, q(1, 1))]);
        let belt = legendrian_surgery(&s3, &LegendrianSurgery::BeltSphere { bound: q(5, 2) }).unwrap();
        let degrees: Vec<i64> = belt.chords.iter().map(|c| c.degree).collect();
        assert_eq!(degrees, vec![2, 3]);
    }

    #[test]
    fn belt_sphere_counts_linear_words() {
        let s = chords(3, q(10, 1), &[("a", 1, q(1, 1)), ("b", 1, q(1, 1))]);
        let belt = belt_sphere_chords(&s, &q(5, 2)).unwrap();
        // a, b, aa, ab, ba, bb
        assert_eq!(belt.chords.len(), 6);
    }

    #[test]
    fn nonsimultaneous_words_are_positive() {
        let s = chords(4, q(20, 1), &[("x", 2, q(3, 1))]);
        let rec = |id: &str, d: i64, a: BigRational| ChordRecord::new(id, d, a);
        let mixed = MixedChords {
            outgoing: vec![rec("a", -3, q(1, 1))],
            incoming: vec![rec("b", 0, q(2, 1))],
            internal: vec![rec("c", -1, q(3, 1))],
        };
        let out = nonsimultaneous_chords(&s, &mixed, &q(20, 1)).unwrap();
        assert!(out.chords.iter().all(|c| c.degree >= 1));
        assert!(out.chords.iter().any(|c| c.id == "(a:a c:c b:b)"));
        assert_eq!(out.chords[0].id, "x");
    }

    #[test]
    fn rescale_round_trip() {
        let y = OrbitSpectrum::new(3, q(10, 1), vec![OrbitRecord::old(2, q(5, 1))]).unwrap();
        assert_eq!(y.rescale(&q(1, 1)).unwrap(), y);
        assert_eq!(y.rescale(&q(3, 7)).unwrap().rescale(&q(7, 3)).unwrap(), y);
        assert!(y.rescale(&q(0, 1)).is_err());
        let s = chords(3, q(1, 1), &[("c", 1, q(1, 2))]);
        let big = s.rescale(&q(64, 1)).unwrap();
        assert_eq!(big.bound, q(64, 1));
    }

    fn stage(scale: BigRational, bound: BigRational, orbits: Vec<OrbitRecord>) -> Stage {
        Stage { scale, bound, orbits }
    }

    #[test]
    fn adc_check_reports_first_violation() {
        let empty = AdcCertificate { n: 3, stages: vec![] };
        assert!(adc_check(&empty).pass);
        let bad = AdcCertificate {
            n: 3,
            stages: vec![
                stage(q(1, 1), q(1, 1), vec![]),
                stage(q(1, 1), q(2, 1), vec![OrbitRecord::old(1, q(1, 2)), OrbitRecord::old(0, q(1, 1))]),
            ],
        };
        let v = adc_check(&bad).violation.unwrap();
        assert_eq!((v.stage, v.record, v.kind), (2, Some(1), ViolationKind::NonPositiveDegree));
        let mut free = bad.clone();
        free.stages[1].orbits[1].contractible = false;
        assert!(adc_check(&free).pass);
        let up = AdcCertificate { n: 3, stages: vec![stage(q(1, 1), q(1, 1), vec![]), stage(q(2, 1), q(2, 1), vec![])] };
        assert_eq!(adc_check(&up).violation.unwrap().kind, ViolationKind::ScaleIncreases);
    }

    #[test]
    fn normalize() {
        let eps = q(1, 2);
        let c = AdcCertificate {
            n: 3,
            stages: (1..=6).map(|k| stage(q(1, 1), q(k * k, 1), vec![])).collect(),
        };
        let out = normalize_certificate(&c, &eps).unwrap();
        // Bounds 1, 4, 16 are kept (each at least 4x the last kept one).
        assert_eq!(out.stages.len(), 3);
        for w in out.stages.windows(2) {
            assert!(w[1].scale <= &w[0].scale * &eps);
            assert!(w[1].bound >= &w[0].bound / &eps);
        }
        let single = AdcCertificate { n: 3, stages: vec![stage(q(1, 1), q(3, 1), vec![OrbitRecord::old(1, q(1, 1))])] };
        assert_eq!(normalize_certificate(&single, &eps).unwrap(), single);
        assert!(normalize_certificate(&AdcCertificate { n: 3, stages: vec![] }, &eps).is_err());
        assert!(normalize_certificate(&single, &q(1, 1)).is_err());
    }

    #[test]
    fn flexible_pipeline_with_negative_chord() {
        let c = AdcCertificate { n: 3, stages: vec![stage(q(1, 1), q(5, 1), vec![OrbitRecord::old(2, q(3, 1))])] };
        let s = chords(3, q(5, 1), &[("c", -2, q(1, 1))]);
        let (out, notes) = flexible_surgery_certificate(&c, &[s]).unwrap();
        assert!(adc_check(&out).pass);
        assert_eq!(notes[0].stabilization, 3);
        assert_eq!(out.stages[0].bound, q(1, 1));
        assert_eq!(out.stages[0].scale, q(1, 4));
    }

    #[test]
    fn flexible_pipeline_without_chords_rescales() {
        let c = AdcCertificate {
            n: 4,
            stages: vec![
                stage(q(1, 1), q(5, 1), vec![OrbitRecord::old(1, q(1, 1))]),
                stage(q(1, 2), q(40, 1), vec![OrbitRecord::old(3, q(33, 1))]),
            ],
        };
        let empty: Vec<ChordSpectrum> = c.stages.iter().map(|s| chords(4, s.bound.clone(), &[])).collect();
        let (out, _) = flexible_surgery_certificate(&c, &empty).unwrap();
        assert_eq!(out.stages.len(), 2);
        assert_eq!(out.stages[0].orbits[0].action, q(1, 4));
        assert_eq!(out.stages[1].bound, q(2, 1));
        assert!(out.stages[1].orbits.is_empty());
        let low = AdcCertificate { n: 4, stages: vec![stage(q(1, 1), q(4, 1), vec![])] };
        assert!(matches!(
            flexible_surgery_certificate(&low, &[chords(4, q(4, 1), &[])]),
            Err(Error::Infeasible(_))
        ));
        assert!(flexible_surgery_certificate(&AdcCertificate { n: 2, stages: vec![] }, &[]).is_err());
    }
}
