use super::group::{AbelianGroup, GradedGroup};
use super::matrix::IntegerMatrix;
use super::snf::{smith_normal_form, Smith};
use crate::error::{Error, Result};
use crate::num::IntOrString;
use num_traits::One;
use serde::{Deserialize, Serialize, Serializer};
use std::collections::BTreeMap;

/// Free chain complex over ℤ. `∂_k` maps degree k to k−1 and is stored as
/// an `n_{k−1} × n_k` matrix acting on column vectors.
#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(try_from = "ComplexRaw")]
pub struct ChainComplex {
    counts: BTreeMap<i64, usize>,
    boundaries: BTreeMap<i64, IntegerMatrix>,
}

#[derive(Deserialize)]
struct ComplexRaw {
    generators: BTreeMap<i64, usize>,
    #[serde(default)]
    boundaries: BTreeMap<i64, Vec<Vec<IntOrString>>>,
}

impl TryFrom<ComplexRaw> for ChainComplex {
    type Error = Error;

    fn try_from(raw: ComplexRaw) -> Result<Self> {
        let mut boundaries = BTreeMap::new();
        for (k, rows) in raw.boundaries {
            let cols = raw.generators.get(&k).copied().unwrap_or(0);
            boundaries.insert(k, parse_matrix(rows, cols)?);
        }
        ChainComplex::new(raw.generators, boundaries)
    }
}

pub(crate) fn parse_matrix(rows: Vec<Vec<IntOrString>>, cols: usize) -> Result<IntegerMatrix> {
    let rows = rows
        .into_iter()
        .map(|r| r.into_iter().map(|x| x.into_bigint().map_err(Error::Invalid)).collect())
        .collect::<Result<Vec<_>>>()?;
    IntegerMatrix::from_rows(rows, cols)
}

pub(crate) fn matrix_rows(m: &IntegerMatrix) -> Vec<Vec<String>> {
    m.to_rows().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect()
}

impl Serialize for ChainComplex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Out<'a> {
            generators: &'a BTreeMap<i64, usize>,
            boundaries: BTreeMap<i64, Vec<Vec<String>>>,
        }
        let boundaries = self
            .boundaries
            .iter()
            .filter(|(_, m)| !m.is_zero())
            .map(|(k, m)| (*k, matrix_rows(m)))
            .collect();
        Out { generators: &self.counts, boundaries }.serialize(s)
    }
}

impl ChainComplex {
    /// Validates shapes and ∂∂ = 0. Missing boundary maps are zero.
    pub fn new(counts: BTreeMap<i64, usize>, boundaries: BTreeMap<i64, IntegerMatrix>) -> Result<Self> {
        let counts: BTreeMap<i64, usize> = counts.into_iter().filter(|(_, n)| *n > 0).collect();
        let c = ChainComplex { counts, boundaries };
        for (&k, m) in &c.boundaries {
            let (r, s) = (c.count(k - 1), c.count(k));
            if m.rows() != r || m.cols() != s {
                return Err(Error::Shape(format!(
                    "boundary d_{k} is {}x{}, expected {r}x{s}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        for (&k, m) in &c.boundaries {
            if let Some(prev) = c.boundaries.get(&(k - 1)) {
                if !(prev * m).is_zero() {
                    return Err(Error::NotAComplex(k));
                }
            }
        }
        Ok(c)
    }

    pub fn count(&self, k: i64) -> usize {
        self.counts.get(&k).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> &BTreeMap<i64, usize> {
        &self.counts
    }

    pub fn boundary(&self, k: i64) -> IntegerMatrix {
        self.boundaries
            .get(&k)
            .cloned()
            .unwrap_or_else(|| IntegerMatrix::zeros(self.count(k - 1), self.count(k)))
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.counts.keys().next_back().copied()
    }

    /// Σ(−1)^k n_k.
    pub fn euler_characteristic(&self) -> i64 {
        self.counts
            .iter()
            .map(|(k, n)| if k.rem_euclid(2) == 0 { *n as i64 } else { -(*n as i64) })
            .sum()
    }

    fn smith(&self, k: i64) -> Smith {
        smith_normal_form(&self.boundary(k))
    }

    /// H_k = ker ∂_k / im ∂_{k+1}.
    pub fn homology(&self) -> GradedGroup {
        let mut smiths: BTreeMap<i64, Smith> = BTreeMap::new();
        for &k in self.counts.keys() {
            for j in [k, k + 1] {
                smiths.entry(j).or_insert_with(|| self.smith(j));
            }
        }
        let mut h = GradedGroup::new();
        for (&k, &n) in &self.counts {
            let out = smiths[&k].rank();
            let into = &smiths[&(k + 1)];
            let rank = n - out - into.rank();
            let torsion: Vec<_> = into.invariant_factors().into_iter().filter(|d| !d.is_one()).collect();
            h.set(k, AbelianGroup::from_cyclic(rank, &torsion).expect("positive factors"));
        }
        h
    }

    /// H^k ≅ Hom(H_k, ℤ) ⊕ Ext(H_{k−1}, ℤ).
    pub fn cohomology(&self) -> GradedGroup {
        cohomology_from_homology(&self.homology())
    }

    /// Kernel of ∂_k as a saturated basis (columns).
    pub fn cycles(&self, k: i64) -> IntegerMatrix {
        self.smith(k).kernel_basis()
    }
}

/// Universal coefficients for a free complex of finite type.
pub fn cohomology_from_homology(h: &GradedGroup) -> GradedGroup {
    let mut out = GradedGroup::new();
    let mut degrees: Vec<i64> = h.support();
    degrees.extend(h.support().into_iter().map(|k| k + 1));
    degrees.sort_unstable();
    degrees.dedup();
    for k in degrees {
        let g = AbelianGroup { rank: h.rank(k), torsion: h.get(k - 1).torsion };
        out.set(k, g);
    }
    out
}
