//! Weinstein domains as handle data: (co)homology, the homology of the
//! contact boundary, the intersection form and the Ω^n membership test.

use crate::error::{invalid, Error, Result};
use crate::graded::{
    cohomology_from_homology, smith_normal_form, AbelianGroup, ChainComplex, Coefficients,
    GradedGroup, IntegerMatrix,
};
use crate::num::IntOrString;
use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize, Serializer};
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Handle {
    pub index: u32,
    #[serde(default)]
    pub label: String,
}

/// A handle decomposition reduced to its cellular chain complex.
///
/// `dim` is the total dimension: `2n` for a Weinstein domain, `2n + 1` for
/// the odd thickenings that appear as fillings of even-dimensional manifolds.
/// The optional intersection form is given on the index-`n` handles and is
/// only consulted on cycles; when absent it is taken to be zero.
#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(try_from = "PresentationRaw")]
pub struct HandlePresentation {
    n: u32,
    dim: u32,
    handles: Vec<Handle>,
    chain: ChainComplex,
    intersection_form: Option<IntegerMatrix>,
    multiple_zero_handles: bool,
}

#[derive(Deserialize)]
struct PresentationRaw {
    n: u32,
    dim: Option<u32>,
    handles: Vec<Handle>,
    #[serde(default)]
    boundary_matrices: BTreeMap<i64, Vec<Vec<IntOrString>>>,
    intersection_form: Option<Vec<Vec<IntOrString>>>,
    #[serde(default)]
    multiple_zero_handles: bool,
}

impl TryFrom<PresentationRaw> for HandlePresentation {
    type Error = Error;

    fn try_from(raw: PresentationRaw) -> Result<Self> {
        let counts = handle_counts(&raw.handles);
        let mut maps = BTreeMap::new();
        for (k, rows) in raw.boundary_matrices {
            let cols = counts.get(&k).copied().unwrap_or(0);
            maps.insert(k, crate::graded_parse_matrix(rows, cols)?);
        }
        let chain = ChainComplex::new(counts.clone(), maps)?;
        let form = match raw.intersection_form {
            Some(rows) => {
                let width = counts.get(&(raw.n as i64)).copied().unwrap_or(0);
                Some(crate::graded_parse_matrix(rows, width)?)
            }
            None => None,
        };
        HandlePresentation::new(
            raw.n,
            raw.dim.unwrap_or(2 * raw.n),
            raw.handles,
            chain,
            form,
            raw.multiple_zero_handles,
        )
    }
}

impl Serialize for HandlePresentation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Out<'a> {
            schema: u32,
            n: u32,
            dim: u32,
            handles: &'a [Handle],
            boundary_matrices: BTreeMap<i64, Vec<Vec<String>>>,
            #[serde(skip_serializing_if = "Option::is_none")]
            intersection_form: Option<Vec<Vec<String>>>,
            #[serde(skip_serializing_if = "std::ops::Not::not")]
            multiple_zero_handles: bool,
        }
        let boundary_matrices = self
            .chain
            .counts()
            .keys()
            .map(|&k| (k, self.chain.boundary(k)))
            .filter(|(_, m)| !m.is_zero())
            .map(|(k, m)| (k, crate::graded_matrix_rows(&m)))
            .collect();
        Out {
            schema: 1,
            n: self.n,
            dim: self.dim,
            handles: &self.handles,
            boundary_matrices,
            intersection_form: self.intersection_form.as_ref().map(crate::graded_matrix_rows),
            multiple_zero_handles: self.multiple_zero_handles,
        }
        .serialize(s)
    }
}

fn handle_counts(handles: &[Handle]) -> BTreeMap<i64, usize> {
    let mut counts = BTreeMap::new();
    for h in handles {
        *counts.entry(h.index as i64).or_insert(0) += 1;
    }
    counts
}

impl HandlePresentation {
    pub fn new(
        n: u32,
        dim: u32,
        handles: Vec<Handle>,
        chain: ChainComplex,
        intersection_form: Option<IntegerMatrix>,
        multiple_zero_handles: bool,
    ) -> Result<Self> {
        if n < 1 {
            return invalid("half-dimension n must be at least 1");
        }
        if dim != 2 * n && dim != 2 * n + 1 {
            return invalid(format!("total dimension {dim} must be 2n or 2n+1 for n = {n}"));
        }
        if let Some(h) = handles.iter().find(|h| h.index > n) {
            return invalid(format!(
                "handle {:?} has index {} > n = {n}; Weinstein handles have index at most n",
                h.label, h.index
            ));
        }
        let zeros = handles.iter().filter(|h| h.index == 0).count();
        if zeros == 0 || (zeros > 1 && !multiple_zero_handles) {
            return invalid(format!("expected exactly one 0-handle, found {zeros}"));
        }
        let counts = handle_counts(&handles);
        if chain.counts() != &counts {
            return Err(Error::Shape("chain generator counts differ from the handle list".into()));
        }
        if let Some(q) = &intersection_form {
            let m = chain.count(n as i64);
            if dim != 2 * n {
                return invalid("an intersection form needs total dimension 2n");
            }
            if q.rows() != m || q.cols() != m {
                return Err(Error::Shape(format!(
                    "intersection form is {}x{}, expected {m}x{m}",
                    q.rows(),
                    q.cols()
                )));
            }
            let sign = if n % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            for i in 0..m {
                for j in 0..m {
                    if *q.get(j, i) != q.get(i, j) * &sign {
                        return invalid("intersection form must satisfy Q^T = (-1)^n Q");
                    }
                }
            }
        }
        Ok(HandlePresentation { n, dim, handles, chain, intersection_form, multiple_zero_handles })
    }

    /// B^{2n}: a single 0-handle.
    pub fn ball(n: u32) -> Self {
        let handles = vec![Handle { index: 0, label: "h0".into() }];
        let chain = ChainComplex::new(handle_counts(&handles), BTreeMap::new()).expect("valid");
        Self::new(n, 2 * n, handles, chain, None, false).expect("valid")
    }

    /// T*S^n: a 0-handle and an n-handle with self-intersection χ(S^n).
    pub fn cotangent_sphere(n: u32) -> Self {
        let handles = vec![
            Handle { index: 0, label: "h0".into() },
            Handle { index: n, label: format!("S{n}") },
        ];
        let chain = ChainComplex::new(handle_counts(&handles), BTreeMap::new()).expect("valid");
        let chi = if n % 2 == 0 { 2 } else { 0 };
        let form = IntegerMatrix::from_i64(1, 1, &[chi]);
        Self::new(n, 2 * n, handles, chain, Some(form), false).expect("valid")
    }

    /// Regular neighbourhood in ℝ^dim of a wedge of `copies` copies of the
    /// spheres listed in `sphere_dims`. All boundary maps vanish.
    pub fn wedge_thickening(copies: usize, sphere_dims: &[u32], dim: u32) -> Result<Self> {
        let n = dim / 2;
        let mut handles = vec![Handle { index: 0, label: "h0".into() }];
        for c in 1..=copies {
            for &d in sphere_dims {
                if d == 0 {
                    return invalid("wedge summands must be spheres of positive dimension");
                }
                handles.push(Handle { index: d, label: format!("S{d}.{c}") });
            }
        }
        handles.sort_by_key(|h| h.index);
        let chain = ChainComplex::new(handle_counts(&handles), BTreeMap::new())?;
        Self::new(n, dim, handles, chain, None, false)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn handles(&self) -> &[Handle] {
        &self.handles
    }

    pub fn chain(&self) -> &ChainComplex {
        &self.chain
    }

    pub fn intersection_form(&self) -> Option<&IntegerMatrix> {
        self.intersection_form.as_ref()
    }

    pub fn max_index(&self) -> u32 {
        self.handles.iter().map(|h| h.index).max().unwrap_or(0)
    }

    /// H_*(W;ℤ).
    pub fn homology(&self) -> GradedGroup {
        self.chain.homology()
    }

    /// H^*(W;ℤ) by universal coefficients.
    pub fn cohomology(&self) -> GradedGroup {
        self.chain.cohomology()
    }

    /// The form restricted to H_n(W) = ker ∂_n, in a basis of that lattice.
    /// None when the total dimension is odd or there is no middle homology.
    pub fn gram_matrix(&self) -> Option<IntegerMatrix> {
        if self.dim != 2 * self.n {
            return None;
        }
        let k = self.chain.cycles(self.n as i64);
        if k.cols() == 0 {
            return None;
        }
        let q = self
            .intersection_form
            .clone()
            .unwrap_or_else(|| IntegerMatrix::zeros(k.rows(), k.rows()));
        Some(&(&k.transpose() * &q) * &k)
    }

    pub fn gram_rank(&self) -> usize {
        self.gram_matrix().map_or(0, |g| smith_normal_form(&g).rank())
    }
}

/// Either a group forced by the exact sequence or the reason it is not.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum IntegralGroup {
    Determined { group: AbelianGroup },
    Undetermined { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundaryHomologyReport {
    /// Dimension of the boundary manifold.
    pub dim: u32,
    /// dim_ℚ H_k(∂W) for every k in 0..=dim.
    pub rational: BTreeMap<i64, usize>,
    pub integral: BTreeMap<i64, IntegralGroup>,
    pub euler_characteristic: i64,
    pub filling_euler_characteristic: i64,
    pub assumptions: Vec<String>,
}

impl BoundaryHomologyReport {
    pub fn rational_dim(&self, k: i64) -> usize {
        self.rational.get(&k).copied().unwrap_or(0)
    }

    /// The integral homology as a graded group, if every degree is determined.
    pub fn integral_homology(&self) -> Option<GradedGroup> {
        let mut g = GradedGroup::new();
        for (&k, entry) in &self.integral {
            match entry {
                IntegralGroup::Determined { group } => g.set(k, group.clone()),
                IntegralGroup::Undetermined { .. } => return None,
            }
        }
        Some(g)
    }
}

/// Homology of Y = ∂W from the sequence of the pair (W, Y) with
/// H_k(W, Y) ≅ H^{m−k}(W). The only map that can be nonzero is
/// H_n(W) → H^n(W) when m = 2n, given by the intersection form.
pub fn boundary_homology(p: &HandlePresentation) -> Result<BoundaryHomologyReport> {
    if p.n < 2 {
        return invalid("boundary homology needs n >= 2");
    }
    let m = p.dim as i64;
    let n = p.n as i64;
    let h = p.homology();
    let coh = cohomology_from_homology(&h);
    let mut assumptions = Vec::new();

    let middle = m == 2 * n && h.rank(n) > 0;
    let gram = if middle { p.gram_matrix() } else { None };
    if middle && p.intersection_form.is_none() {
        assumptions.push(format!(
            "no intersection form given; H_{n}(W) -> H^{n}(W) taken to be zero"
        ));
    }
    let gram_smith = gram.as_ref().map(smith_normal_form);
    let j_rank = |k: i64| -> usize {
        match &gram_smith {
            Some(s) if k == n => s.rank(),
            _ => 0,
        }
    };
    let middle_torsion_free = h.get(n - 1).is_free();

    let mut rational = BTreeMap::new();
    let mut integral = BTreeMap::new();
    for k in 0..m {
        let coker_dim = coh.rank(m - k - 1) - j_rank(k + 1);
        let ker_dim = h.rank(k) - j_rank(k);
        let dim = coker_dim + ker_dim;
        rational.insert(k, dim);

        let coker = if k + 1 == n && middle {
            if !middle_torsion_free {
                Err(format!("H^{n}(W) has an Ext summand whose image is not fixed by the form"))
            } else {
                let s = gram_smith.as_ref().expect("middle gram");
                let r = s.d.rows();
                let factors: Vec<BigInt> =
                    s.invariant_factors().into_iter().filter(|d| !d.is_one()).collect();
                Ok(AbelianGroup::from_cyclic(r - s.rank(), &factors)?)
            }
        } else {
            Ok(coh.get(m - k - 1))
        };
        let kernel = if k == n && middle {
            if !middle_torsion_free {
                Err(format!("the map H_{n}(W) -> H^{n}(W) is only known modulo torsion"))
            } else {
                Ok(AbelianGroup::free(ker_dim))
            }
        } else {
            Ok(h.get(k))
        };
        let entry = match (coker, kernel) {
            (Ok(c), Ok(kg)) if kg.is_free() || c.is_zero() => {
                IntegralGroup::Determined { group: c.direct_sum(&kg) }
            }
            (Ok(_), Ok(_)) => IntegralGroup::Undetermined {
                reason: format!("extension of torsion in H_{k}(W) by the cokernel is not split by the data"),
            },
            (Err(r), _) | (_, Err(r)) => IntegralGroup::Undetermined { reason: r },
        };
        if let IntegralGroup::Determined { group } = &entry {
            debug_assert_eq!(group.rank, dim);
        }
        integral.insert(k, entry);
    }

    let ydim = m - 1;
    for k in 0..=ydim {
        if rational[&k] != rational[&(ydim - k)] {
            return invalid(format!(
                "boundary fails rational Poincare duality in degrees {k} and {}; check the intersection form",
                ydim - k
            ));
        }
    }
    let chi_y: i64 = rational
        .iter()
        .map(|(k, d)| if k % 2 == 0 { *d as i64 } else { -(*d as i64) })
        .sum();
    let chi_w = h.euler_characteristic();
    let expected = if ydim % 2 == 0 { 2 * chi_w } else { 0 };
    if chi_y != expected {
        return invalid(format!("boundary Euler characteristic {chi_y}, expected {expected}"));
    }

    Ok(BoundaryHomologyReport {
        dim: ydim as u32,
        rational,
        integral,
        euler_characteristic: chi_y,
        filling_euler_characteristic: chi_w,
        assumptions,
    })
}

/// dim H^n(W;ℚ) + dim H^{n−1}(W;ℚ) − dim H^n(∂W;ℚ).
pub fn intersection_form_rank(p: &HandlePresentation) -> Result<usize> {
    if p.dim != 2 * p.n {
        return invalid("the intersection form rank needs total dimension 2n");
    }
    let n = p.n as i64;
    let report = boundary_homology(p)?;
    let coh = p.cohomology();
    let value = (coh.rank(n) + coh.rank(n - 1)) as i64 - report.rational_dim(n) as i64;
    usize::try_from(value).map_err(|_| Error::Invalid(format!("negative rank {value}")))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifoldFlags {
    #[serde(default)]
    pub closed: bool,
    #[serde(default)]
    pub simply_connected: bool,
    #[serde(default)]
    pub stably_parallelizable: bool,
}

impl ManifoldFlags {
    pub fn all() -> Self {
        ManifoldFlags { closed: true, simply_connected: true, stably_parallelizable: true }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OmegaVerdict {
    pub member: bool,
    pub n: i64,
    /// χ(M) for even n, χ_{1/2}(M) for odd n.
    pub invariant: String,
    pub value: i64,
    pub coefficients: Coefficients,
    pub reason: String,
}

/// Membership of M^n in Ω^n: closed, simply connected, stably parallelizable,
/// with χ(M) = 2 for even n and χ_{1/2}(M) ≡ 1 mod 2 for odd n.
pub fn omega_membership(
    homology: &GradedGroup,
    n: i64,
    flags: ManifoldFlags,
    coeff: Coefficients,
) -> Result<OmegaVerdict> {
    if n < 1 {
        return invalid(format!("dimension n = {n} must be at least 1"));
    }
    let (invariant, value, holds) = if n % 2 == 0 {
        let chi = homology.euler_characteristic();
        ("euler_characteristic", chi, chi == 2)
    } else {
        let s = homology.semi_characteristic(n, coeff)? as i64;
        ("semi_characteristic", s, s == 1)
    };
    let mut missing = Vec::new();
    if !flags.closed {
        missing.push("closed");
    }
    if !flags.simply_connected {
        missing.push("simply connected");
    }
    if !flags.stably_parallelizable {
        missing.push("stably parallelizable");
    }
    let reason = if !missing.is_empty() {
        format!("not asserted: {}", missing.join(", "))
    } else if holds {
        format!("{invariant} = {value} as required")
    } else if n % 2 == 0 {
        format!("euler characteristic is {value}, not 2")
    } else {
        format!("semi-characteristic is {value} mod 2, not 1")
    };
    Ok(OmegaVerdict {
        member: missing.is_empty() && holds,
        n,
        invariant: invariant.to_string(),
        value,
        coefficients: if n % 2 == 0 { Coefficients::Z } else { coeff },
        reason,
    })
}

/// Boundary connected sum: the two 0-handles are identified and all other
/// handles are kept side by side.
pub fn boundary_connect_sum(p: &HandlePresentation, q: &HandlePresentation) -> Result<HandlePresentation> {
    if p.n != q.n || p.dim != q.dim {
        return invalid(format!(
            "cannot form a boundary connected sum of dimensions {} and {}",
            p.dim, q.dim
        ));
    }
    for (name, x) in [("first", p), ("second", q)] {
        if x.handles.iter().filter(|h| h.index == 0).count() != 1 {
            return invalid(format!("the {name} summand must have exactly one 0-handle"));
        }
    }
    let top = p.max_index().max(q.max_index()) as i64;
    let mut handles = vec![p.handles.iter().find(|h| h.index == 0).expect("0-handle").clone()];
    let mut maps = BTreeMap::new();
    for k in 1..=top {
        let pick = |x: &HandlePresentation| -> Vec<Handle> {
            x.handles.iter().filter(|h| h.index as i64 == k).cloned().collect()
        };
        handles.extend(pick(p));
        handles.extend(pick(q));
        let merged = if k == 1 {
            p.chain.boundary(1).hconcat(&q.chain.boundary(1))?
        } else {
            p.chain.boundary(k).block_diag(&q.chain.boundary(k))
        };
        maps.insert(k, merged);
    }
    let chain = ChainComplex::new(handle_counts(&handles), maps)?;
    let form = match (&p.intersection_form, &q.intersection_form) {
        (None, None) => None,
        (a, b) => {
            let zero = |x: &HandlePresentation| {
                let m = x.chain.count(x.n as i64);
                IntegerMatrix::zeros(m, m)
            };
            let a = a.clone().unwrap_or_else(|| zero(p));
            let b = b.clone().unwrap_or_else(|| zero(q));
            Some(a.block_diag(&b))
        }
    };
    HandlePresentation::new(p.n, p.dim, handles, chain, form, false)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum C1Status {
    /// Empty negative end: c₁ of the upper boundary vanishes iff c₁ of the cobordism does.
    EmptyNegativeEnd,
    /// H²(W, Y₋) = 0: vanishing of c₁ on either end and on W are equivalent.
    Equivalent,
    /// Index 2: H²(W, Y₋) ≅ ℤ, so propagation depends on the framing of the attaching sphere.
    FramingDependent,
    /// The equivalence is stated for n ≥ 3 only.
    LowDimension,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct C1HandleEntry {
    pub label: String,
    pub index: u32,
    pub status: C1Status,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct C1Report {
    pub n: u32,
    /// c₁(∂W) = 0 ⇔ c₁(W) = 0 for the whole domain.
    pub domain_equivalence: bool,
    pub handles: Vec<C1HandleEntry>,
}

/// Hypothesis checklist for propagating c₁ = 0 through each elementary cobordism.
pub fn c1_propagation_check(p: &HandlePresentation) -> Result<C1Report> {
    if p.dim != 2 * p.n {
        return invalid("first Chern class bookkeeping needs an almost complex 2n-manifold");
    }
    let high = p.n >= 3;
    let handles = p
        .handles
        .iter()
        .map(|h| {
            let status = match (high, h.index) {
                (false, _) => C1Status::LowDimension,
                (true, 0) => C1Status::EmptyNegativeEnd,
                (true, 2) => C1Status::FramingDependent,
                (true, _) => C1Status::Equivalent,
            };
            C1HandleEntry { label: h.label.clone(), index: h.index, status }
        })
        .collect();
    Ok(C1Report { n: p.n, domain_equivalence: high, handles })
}
