use super::matrix::IntegerMatrix;
use super::snf::smith_normal_form;
use crate::error::{invalid, Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// Coefficient choice for dimension counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum Coefficients {
    Z,
    #[default]
    Q,
    F2,
}

impl fmt::Display for Coefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Coefficients::Z => "Z",
            Coefficients::Q => "Q",
            Coefficients::F2 => "F2",
        })
    }
}

impl std::str::FromStr for Coefficients {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "Z" | "z" => Ok(Coefficients::Z),
            "Q" | "q" => Ok(Coefficients::Q),
            "F2" | "f2" | "Z2" | "Z/2" => Ok(Coefficients::F2),
            _ => Err(format!("unknown coefficients {s:?} (expected Z, Q or F2)")),
        }
    }
}

/// ℤ^rank ⊕ ℤ/d₁ ⊕ … ⊕ ℤ/d_m with d₁ | d₂ | … and every dᵢ ≥ 2.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "AbelianRaw")]
pub struct AbelianGroup {
    pub rank: usize,
    #[serde(with = "crate::num::int_vec")]
    pub torsion: Vec<BigInt>,
}

#[derive(Deserialize)]
struct AbelianRaw {
    #[serde(default)]
    rank: usize,
    #[serde(default, with = "crate::num::int_vec")]
    torsion: Vec<BigInt>,
}

impl TryFrom<AbelianRaw> for AbelianGroup {
    type Error = Error;

    fn try_from(raw: AbelianRaw) -> Result<Self> {
        AbelianGroup::from_cyclic(raw.rank, &raw.torsion)
    }
}

impl AbelianGroup {
    pub fn zero() -> Self {
        AbelianGroup::default()
    }

    pub fn free(rank: usize) -> Self {
        AbelianGroup { rank, torsion: Vec::new() }
    }

    /// Normalizes an arbitrary list of cyclic orders (each ≥ 1) to invariant factors.
    pub fn from_cyclic(rank: usize, orders: &[BigInt]) -> Result<Self> {
        if let Some(bad) = orders.iter().find(|d| !d.is_positive()) {
            return invalid(format!("cyclic order must be positive, got {bad}"));
        }
        Ok(AbelianGroup { rank, torsion: invariant_factors(orders) })
    }

    pub fn from_i64(rank: usize, orders: &[i64]) -> Self {
        let orders: Vec<BigInt> = orders.iter().map(|&x| BigInt::from(x)).collect();
        Self::from_cyclic(rank, &orders).expect("positive orders")
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    pub fn direct_sum(&self, other: &AbelianGroup) -> AbelianGroup {
        let mut orders = self.torsion.clone();
        orders.extend(other.torsion.iter().cloned());
        AbelianGroup { rank: self.rank + other.rank, torsion: invariant_factors(&orders) }
    }

    /// Number of cyclic summands of even order, i.e. dim of (ℤ/2 ⊗ torsion).
    pub fn even_torsion_count(&self) -> usize {
        self.torsion.iter().filter(|d| d.is_even()).count()
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join("+"))
        }
    }
}

fn invariant_factors(orders: &[BigInt]) -> Vec<BigInt> {
    let orders: Vec<BigInt> = orders.iter().filter(|d| !d.is_one()).cloned().collect();
    if orders.len() <= 1 {
        return orders;
    }
    let k = orders.len();
    let smith = smith_normal_form(&IntegerMatrix::diagonal(k, k, &orders));
    smith.invariant_factors().into_iter().filter(|d| !d.is_one()).collect()
}

/// A finitely generated abelian group in each degree; absent degrees are zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "GradedRaw")]
pub struct GradedGroup {
    degrees: BTreeMap<i64, AbelianGroup>,
}

#[derive(Deserialize)]
struct GradedRaw {
    degrees: BTreeMap<i64, AbelianGroup>,
}

impl TryFrom<GradedRaw> for GradedGroup {
    type Error = Error;

    fn try_from(raw: GradedRaw) -> Result<Self> {
        Ok(GradedGroup::from_map(raw.degrees))
    }
}

impl GradedGroup {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_map(map: BTreeMap<i64, AbelianGroup>) -> Self {
        let degrees = map.into_iter().filter(|(_, g)| !g.is_zero()).collect();
        GradedGroup { degrees }
    }

    /// Free groups with the given ranks.
    pub fn free(ranks: &[(i64, usize)]) -> Self {
        let mut g = Self::new();
        for &(k, r) in ranks {
            g.set(k, AbelianGroup::free(r));
        }
        g
    }

    pub fn set(&mut self, degree: i64, group: AbelianGroup) {
        if group.is_zero() {
            self.degrees.remove(&degree);
        } else {
            self.degrees.insert(degree, group);
        }
    }

    pub fn get(&self, degree: i64) -> AbelianGroup {
        self.degrees.get(&degree).cloned().unwrap_or_default()
    }

    pub fn rank(&self, degree: i64) -> usize {
        self.degrees.get(&degree).map_or(0, |g| g.rank)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &AbelianGroup)> {
        self.degrees.iter().map(|(k, g)| (*k, g))
    }

    pub fn support(&self) -> Vec<i64> {
        self.degrees.keys().copied().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.degrees.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.degrees.keys().next_back().copied()
    }

    pub fn direct_sum(&self, other: &GradedGroup) -> GradedGroup {
        let mut out = self.clone();
        for (k, g) in other.iter() {
            let s = out.get(k).direct_sum(g);
            out.set(k, s);
        }
        out
    }

    /// Moves degree k to `f(k)`; `f` must be injective on the support.
    pub fn reindex(&self, f: impl Fn(i64) -> i64) -> GradedGroup {
        let mut out = GradedGroup::new();
        for (k, g) in self.iter() {
            let prev = out.degrees.insert(f(k), g.clone());
            assert!(prev.is_none(), "reindexing map must be injective");
        }
        out
    }

    /// Rational dimensions per degree, zeros omitted.
    pub fn rank_table(&self) -> BTreeMap<i64, usize> {
        self.iter().filter(|(_, g)| g.rank > 0).map(|(k, g)| (k, g.rank)).collect()
    }

    /// Reading `self` as integral homology, the dimension of H_k with field coefficients.
    /// Over ℤ/2 the universal coefficient theorem adds the even torsion of H_k and H_{k−1}.
    pub fn homology_dim(&self, k: i64, coeff: Coefficients) -> Result<usize> {
        match coeff {
            Coefficients::Q => Ok(self.rank(k)),
            Coefficients::F2 => Ok(self.rank(k)
                + self.get(k).even_torsion_count()
                + self.get(k - 1).even_torsion_count()),
            Coefficients::Z => invalid("a dimension count needs field coefficients (Q or F2)"),
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.iter()
            .map(|(k, g)| if k.rem_euclid(2) == 0 { g.rank as i64 } else { -(g.rank as i64) })
            .sum()
    }

    /// Σ_{i ≤ (n−1)/2} dim H_i mod 2, for odd n.
    pub fn semi_characteristic(&self, n: i64, coeff: Coefficients) -> Result<u8> {
        if n.rem_euclid(2) == 0 {
            return invalid(format!("the semi-characteristic needs odd dimension, got n = {n}"));
        }
        let top = (n - 1) / 2;
        let mut sum = 0usize;
        for i in 0..=top {
            sum += self.homology_dim(i, coeff)?;
        }
        Ok((sum % 2) as u8)
    }
}

impl fmt::Display for GradedGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.iter().map(|(k, g)| format!("[{k}] {g}")).collect();
        f.write_str(&parts.join(", "))
    }
}

/// Splits a list of integers ≥ 2 into a pairwise coprime base.
fn coprime_base(values: &[BigInt]) -> Vec<BigInt> {
    let mut base: Vec<BigInt> = values.iter().filter(|d| !d.is_one()).cloned().collect();
    base.sort();
    base.dedup();
    loop {
        let mut split = None;
        'outer: for i in 0..base.len() {
            for j in i + 1..base.len() {
                let g = base[i].gcd(&base[j]);
                if !g.is_one() {
                    split = Some((i, j, g));
                    break 'outer;
                }
            }
        }
        let Some((i, j, g)) = split else { break };
        let a = &base[i] / &g;
        let b = &base[j] / &g;
        base.remove(j);
        base.remove(i);
        for x in [a, b, g] {
            if !x.is_one() {
                base.push(x);
            }
        }
        base.sort();
        base.dedup();
    }
    base
}

fn valuation(mut d: BigInt, b: &BigInt) -> usize {
    let mut e = 0;
    while d.is_multiple_of(b) {
        d /= b;
        e += 1;
    }
    e
}

/// Exponent multiset of each base element across the cyclic factors.
fn exponents(torsion: &[BigInt], base: &[BigInt]) -> Vec<Vec<usize>> {
    base.iter()
        .map(|b| {
            let mut es: Vec<usize> =
                torsion.iter().map(|d| valuation(d.clone(), b)).filter(|&e| e > 0).collect();
            es.sort_unstable();
            es
        })
        .collect()
}

/// Removes the multiset `sub` from `from`; None unless `sub ⊆ from`.
fn multiset_minus(from: &[usize], sub: &[usize]) -> Option<Vec<usize>> {
    let mut rest = from.to_vec();
    for e in sub {
        let pos = rest.iter().position(|x| x == e)?;
        rest.remove(pos);
    }
    Some(rest)
}

fn complement(x: &AbelianGroup, c: &AbelianGroup, degree: i64, which: &str) -> Result<AbelianGroup> {
    let rank = x.rank.checked_sub(c.rank).ok_or_else(|| {
        Error::NotASummand(format!("degree {degree}: rank of C exceeds rank of {which}"))
    })?;
    let mut all = x.torsion.clone();
    all.extend(c.torsion.iter().cloned());
    let base = coprime_base(&all);
    let ex = exponents(&x.torsion, &base);
    let ec = exponents(&c.torsion, &base);
    let mut orders = Vec::new();
    for ((b, ex), ec) in base.iter().zip(&ex).zip(&ec) {
        let rest = multiset_minus(ex, ec).ok_or_else(|| {
            Error::NotASummand(format!("degree {degree}: torsion of C is not a summand of {which}"))
        })?;
        orders.extend(rest.into_iter().map(|e| num_traits::pow(b.clone(), e)));
    }
    AbelianGroup::from_cyclic(rank, &orders)
}

/// Cancels a common summand: from A⊕C and B⊕C recover A and B and decide A ≅ B.
/// Finitely generated abelian groups cancel, so `iso` is true whenever the inputs agree.
pub fn cancel_summand(
    a_plus_c: &GradedGroup,
    b_plus_c: &GradedGroup,
    c: &GradedGroup,
) -> Result<(GradedGroup, GradedGroup, bool)> {
    let mut degrees: Vec<i64> = a_plus_c.support();
    degrees.extend(b_plus_c.support());
    degrees.extend(c.support());
    degrees.sort_unstable();
    degrees.dedup();
    let mut a = GradedGroup::new();
    let mut b = GradedGroup::new();
    for k in degrees {
        let ck = c.get(k);
        a.set(k, complement(&a_plus_c.get(k), &ck, k, "the first input")?);
        b.set(k, complement(&b_plus_c.get(k), &ck, k, "the second input")?);
    }
    let iso = a == b;
    Ok((a, b, iso))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab(rank: usize, t: &[i64]) -> AbelianGroup {
        AbelianGroup::from_i64(rank, t)
    }

    fn single(k: i64, g: AbelianGroup) -> GradedGroup {
        let mut out = GradedGroup::new();
        out.set(k, g);
        out
    }

    #[test]
    fn invariant_factor_normalization() {
        assert_eq!(ab(0, &[2, 3]).torsion, vec![BigInt::from(6)]);
        assert_eq!(ab(0, &[4, 2]).torsion, vec![BigInt::from(2), BigInt::from(4)]);
        assert_eq!(ab(0, &[6, 10]).torsion, vec![BigInt::from(2), BigInt::from(30)]);
        assert!(ab(0, &[1, 1]).is_zero());
        assert!(AbelianGroup::from_cyclic(0, &[BigInt::from(0)]).is_err());
    }

    #[test]
    fn cancel_equal_inputs() {
        let x = single(0, ab(2, &[2]));
        let c = single(0, ab(1, &[]));
        let (a, b, iso) = cancel_summand(&x, &x, &c).unwrap();
        assert_eq!(a, single(0, ab(1, &[2])));
        assert_eq!(b, a);
        assert!(iso);
    }

    #[test]
    fn cancel_rank_versus_torsion() {
        let (a, b, iso) = cancel_summand(
            &single(0, ab(3, &[])),
            &single(0, ab(2, &[3])),
            &single(0, ab(2, &[])),
        )
        .unwrap();
        assert_eq!(a, single(0, ab(1, &[])));
        assert_eq!(b, single(0, ab(0, &[3])));
        assert!(!iso);
    }

    #[test]
    fn cancel_torsion_summand() {
        let x = single(1, ab(1, &[4, 2]));
        let (a, _, iso) = cancel_summand(&x, &x, &single(1, ab(0, &[2]))).unwrap();
        assert_eq!(a, single(1, ab(1, &[4])));
        assert!(iso);
    }

    #[test]
    fn cancel_across_presentations() {
        // Z/6 ⊕ Z/2 = Z/2 ⊕ Z/2 ⊕ Z/3; removing Z/2 leaves Z/6.
        let x = single(2, ab(0, &[6, 2]));
        let (a, _, _) = cancel_summand(&x, &x, &single(2, ab(0, &[2]))).unwrap();
        assert_eq!(a, single(2, ab(0, &[6])));
        // Z/4 does not contain Z/2 as a summand.
        assert!(cancel_summand(&single(0, ab(0, &[4])), &single(0, ab(0, &[4])), &single(0, ab(0, &[2]))).is_err());
        // Torsion cannot come out of a free group.
        assert!(cancel_summand(&single(0, ab(2, &[])), &single(0, ab(2, &[])), &single(0, ab(0, &[2]))).is_err());
    }

    #[test]
    fn characteristics() {
        let even_sphere = GradedGroup::free(&[(0, 1), (4, 1)]);
        assert_eq!(even_sphere.euler_characteristic(), 2);
        let point = GradedGroup::free(&[(0, 1)]);
        assert_eq!(point.euler_characteristic(), 1);
        assert_eq!(point.semi_characteristic(1, Coefficients::Q).unwrap(), 1);
        assert!(point.semi_characteristic(4, Coefficients::Q).is_err());
    }

    #[test]
    fn semi_characteristic_over_f2_sees_torsion() {
        // RP^3: H0 = Z, H1 = Z/2, H3 = Z. Over Q: 1. Over F2: 1 + 1 = 0.
        let mut rp3 = GradedGroup::free(&[(0, 1), (3, 1)]);
        rp3.set(1, ab(0, &[2]));
        assert_eq!(rp3.semi_characteristic(3, Coefficients::Q).unwrap(), 1);
        assert_eq!(rp3.semi_characteristic(3, Coefficients::F2).unwrap(), 0);
        assert_eq!(rp3.homology_dim(2, Coefficients::F2).unwrap(), 1);
    }

    #[test]
    fn display() {
        let mut g = GradedGroup::free(&[(0, 1), (2, 3)]);
        g.set(1, ab(0, &[2, 4]));
        assert_eq!(g.to_string(), "[0] Z, [1] Z/2+Z/4, [2] Z^3");
    }
}
