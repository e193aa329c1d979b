//! The one-dimensional profile g on [0, 1], the family h_t(z) = z + t·G(z)
//! with G' = g, and the derivative and conformal-factor bounds they satisfy.

use crate::error::{invalid, Error, Result};
use serde::Serialize;
use std::io::Write;

pub const DEFAULT_NODES: usize = 2001;
pub const DEFAULT_T_MAX: f64 = 0.999;
pub const RATIO_TOL: f64 = 1e-6;
pub const INTEGRAL_TOL: f64 = 1e-8;
pub const FD_STEP: f64 = 1e-3;
pub const FD_TOL: f64 = 1e-4;
pub const CONVERGENCE_TOL: f64 = 1e-4;
/// Identity checks on h are exact up to rounding.
pub const IDENTITY_TOL: f64 = 1e-12;
/// Nodes used to fix the hump amplitude before verification on coarser grids.
const AMPLITUDE_NODES: usize = 40_001;

fn psi(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        (-1.0 / x).exp()
    }
}

/// C^∞ step: 0 for x ≤ 0, 1 for x ≥ 1.
pub fn smooth_step(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        let a = psi(x);
        a / (a + psi(1.0 - x))
    }
}

/// Composite Simpson rule on `nodes` (odd, ≥ 3) equally spaced points.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, nodes: usize) -> f64 {
    assert!(nodes >= 3 && nodes % 2 == 1, "Simpson needs an odd node count >= 3");
    let h = (b - a) / (nodes - 1) as f64;
    let mut sum = f(a) + f(b);
    for i in 1..nodes - 1 {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + i as f64 * h);
    }
    sum * h / 3.0
}

/// 5-point Gauss–Legendre on [a, b].
fn gauss5(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    const X: [f64; 5] = [0.0, 0.538_469_310_105_683_1, -0.538_469_310_105_683_1, 0.906_179_845_938_664, -0.906_179_845_938_664];
    const W: [f64; 5] = [
        0.568_888_888_888_888_9,
        0.478_628_670_499_366_5,
        0.478_628_670_499_366_5,
        0.236_926_885_056_189_1,
        0.236_926_885_056_189_1,
    ];
    let (m, r) = ((a + b) / 2.0, (b - a) / 2.0);
    r * X.iter().zip(W).map(|(x, w)| w * f(m + r * x)).sum::<f64>()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GParams {
    /// Cap on the hump height.
    pub height: f64,
    /// Width of the rise out of the −1 plateau, starting at 1/2.
    pub rise: f64,
    /// Width of the fall back to 0.
    pub fall: f64,
    /// g vanishes on [1 − margin, 1].
    pub margin: f64,
    pub nodes: usize,
}

impl Default for GParams {
    fn default() -> Self {
        GParams { height: 1.25, rise: 0.06, fall: 0.08, margin: 0.005, nodes: DEFAULT_NODES }
    }
}

/// g = −(1 − σ₁) + A·σ₁·(1 − σ₂), with σ₁ rising on [1/2, 1/2 + rise] and
/// σ₂ rising on [1 − margin − fall, 1 − margin].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProfileG {
    pub params: GParams,
    pub amplitude: f64,
    /// The amplitude from the closed form of the two integrals.
    pub analytic_amplitude: f64,
    #[serde(skip)]
    pub values: Vec<f64>,
}

impl ProfileG {
    fn sigma1(&self, x: f64) -> f64 {
        smooth_step((x - 0.5) / self.params.rise)
    }

    fn sigma2(&self, x: f64) -> f64 {
        let p = &self.params;
        smooth_step((x - (1.0 - p.margin - p.fall)) / p.fall)
    }

    /// g(x) for x ∈ [0, 1].
    pub fn eval(&self, x: f64) -> f64 {
        let s1 = self.sigma1(x);
        -(1.0 - s1) + self.amplitude * s1 * (1.0 - self.sigma2(x))
    }

    pub fn grid(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let h = 1.0 / (self.values.len() - 1) as f64;
        self.values.iter().enumerate().map(move |(i, &v)| (i as f64 * h, v))
    }

    pub fn integral(&self, nodes: usize) -> f64 {
        simpson(|x| self.eval(x), 0.0, 1.0, nodes)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

pub fn build_g(params: GParams) -> Result<ProfileG> {
    let GParams { height, rise, fall, margin, nodes } = params;
    if !(rise > 0.0 && fall > 0.0 && margin > 0.0) {
        return invalid("transition widths and margin must be positive");
    }
    if nodes < 3 || nodes % 2 == 0 {
        return invalid(format!("grid needs an odd node count >= 3, got {nodes}"));
    }
    if 0.5 + rise > 1.0 - margin - fall {
        return invalid("the rise and fall transitions overlap");
    }
    // ∫(1 − σ₁) = 1/2 + rise/2 and ∫σ₁(1 − σ₂) = 1/2 − margin − rise/2 − fall/2.
    let analytic = (0.5 + rise / 2.0) / (0.5 - margin - rise / 2.0 - fall / 2.0);
    if analytic > height {
        return Err(Error::Infeasible(format!(
            "a hump of height {height} cannot balance the plateau; it needs {analytic:.6}"
        )));
    }
    let mut g = ProfileG { params, amplitude: 0.0, analytic_amplitude: analytic, values: vec![] };
    let neg = simpson(|x| 1.0 - g.sigma1(x), 0.0, 1.0, AMPLITUDE_NODES);
    let hump = simpson(|x| g.sigma1(x) * (1.0 - g.sigma2(x)), 0.0, 1.0, AMPLITUDE_NODES);
    g.amplitude = neg / hump;
    let h = 1.0 / (nodes - 1) as f64;
    g.values = (0..nodes).map(|i| g.eval(i as f64 * h)).collect();
    Ok(g)
}

/// Uniform grid of `nodes` values of t on [0, t_max].
pub fn t_grid(t_max: f64, nodes: usize) -> Result<Vec<f64>> {
    if !(0.0..1.0).contains(&t_max) {
        return invalid(format!("t_max = {t_max} must lie in [0, 1); the family degenerates at t = 1"));
    }
    if nodes < 2 {
        return invalid("t grid needs at least 2 nodes");
    }
    Ok((0..nodes).map(|i| t_max * i as f64 / (nodes - 1) as f64).collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioSweep {
    pub max: f64,
    pub argmax_t: f64,
    pub argmax_z: f64,
    /// max over z of g/(tg + 1) for each t on the grid.
    #[serde(skip)]
    pub per_t: Vec<f64>,
    /// Largest ratio where g ≤ 0.
    pub max_where_g_nonpositive: f64,
}

/// Sweeps g(z)/(t·g(z) + 1) over the g grid and `ts`.
pub fn bound_ratio(g: &ProfileG, ts: &[f64]) -> Result<RatioSweep> {
    if let Some(t) = ts.iter().find(|t| !(0.0..1.0).contains(*t)) {
        return invalid(format!("t = {t} outside [0, 1)"));
    }
    let mut sweep = RatioSweep {
        max: f64::NEG_INFINITY,
        argmax_t: 0.0,
        argmax_z: 0.0,
        per_t: Vec::with_capacity(ts.len()),
        max_where_g_nonpositive: f64::NEG_INFINITY,
    };
    for &t in ts {
        let mut best = f64::NEG_INFINITY;
        for (z, v) in g.grid() {
            let r = v / (t * v + 1.0);
            if v <= 0.0 {
                sweep.max_where_g_nonpositive = sweep.max_where_g_nonpositive.max(r);
            }
            if r > best {
                best = r;
                if r > sweep.max {
                    sweep.max = r;
                    sweep.argmax_t = t;
                    sweep.argmax_z = z;
                }
            }
        }
        sweep.per_t.push(best);
    }
    Ok(sweep)
}

/// exp(x) by its Taylor series, to cross-check the libm value.
pub fn exp_series(x: f64) -> f64 {
    let (mut term, mut sum) = (1.0, 1.0);
    for k in 1..60 {
        term *= x / k as f64;
        sum += term;
    }
    sum
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConformalBound {
    /// exp of the integral of the per-t maxima up to t_max.
    pub achieved: f64,
    /// e^{height}, bounding γ_t for all t < 1.
    pub supremum: f64,
    pub supremum_series: f64,
    pub below_four: bool,
}

/// γ_t = exp(∫₀ᵗ μ_s ds) with μ_s ≤ height.
pub fn conformal_bound(g: &ProfileG, ts: &[f64], sweep: &RatioSweep) -> ConformalBound {
    let integral: f64 = ts
        .windows(2)
        .zip(sweep.per_t.windows(2))
        .map(|(t, m)| (t[1] - t[0]) * (m[0] + m[1]) / 2.0)
        .sum();
    let supremum = g.params.height.exp();
    ConformalBound {
        achieved: integral.exp(),
        supremum,
        supremum_series: exp_series(g.params.height),
        below_four: supremum < 4.0,
    }
}

/// h(t, z) = z + t·G(z) with G(z) = ∫₀^z g on [0, 1], odd, and h = z for |z| > 1.
pub struct ProfileH<'a> {
    pub g: &'a ProfileG,
    knots: Vec<f64>,
    step: f64,
}

impl<'a> ProfileH<'a> {
    pub fn new(g: &'a ProfileG) -> Self {
        let panels = 4000;
        let step = 1.0 / panels as f64;
        let f = |x: f64| g.eval(x);
        let mut knots = Vec::with_capacity(panels + 1);
        let mut acc = 0.0;
        knots.push(0.0);
        for i in 0..panels {
            acc += gauss5(&f, i as f64 * step, (i + 1) as f64 * step);
            knots.push(acc);
        }
        ProfileH { g, knots, step }
    }

    /// G(z) for z ∈ [0, 1].
    fn primitive(&self, z: f64) -> f64 {
        let i = ((z / self.step) as usize).min(self.knots.len() - 2);
        let a = i as f64 * self.step;
        self.knots[i] + gauss5(&|x| self.g.eval(x), a, z)
    }

    pub fn big_g(&self, z: f64) -> f64 {
        if z.abs() > 1.0 {
            0.0
        } else if z < 0.0 {
            -self.primitive(-z)
        } else {
            self.primitive(z)
        }
    }

    pub fn h(&self, t: f64, z: f64) -> f64 {
        if z.abs() > 1.0 {
            z
        } else {
            z + t * self.big_g(z)
        }
    }

    /// ∂²h/∂t∂z = g(|z|) inside [−1, 1] and 0 outside.
    pub fn mixed(&self, z: f64) -> f64 {
        if z.abs() > 1.0 {
            0.0
        } else {
            self.g.eval(z.abs())
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridViolation {
    pub check: &'static str,
    pub t: f64,
    pub z: f64,
    pub value: f64,
    pub expected: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HReport {
    pub t_nodes: usize,
    pub z_nodes: usize,
    pub z_max: f64,
    pub min_dz: f64,
    pub fd_step: f64,
    /// Fourth-order stencil in z, central difference in t.
    pub fd_max_error: f64,
    /// Plain second-order central stencil, for comparison only.
    pub fd_second_order_error: f64,
    pub pass: bool,
    pub violation: Option<GridViolation>,
}

/// Checks h₀ = id, h_t = (1 − t)z on [−1/2, 1/2], h_t = z for |z| > 1,
/// ∂h/∂z > 0, odd symmetry, and finite differences of ∂²h/∂t∂z against g.
pub fn verify_h_family(h: &ProfileH, ts: &[f64], z_max: f64, z_nodes: usize) -> Result<HReport> {
    if z_max <= 1.0 || z_nodes < 3 {
        return invalid("z grid must reach past 1 with at least 3 nodes");
    }
    if let Some(t) = ts.iter().find(|t| !(0.0..1.0).contains(*t)) {
        return invalid(format!("t = {t} outside [0, 1)"));
    }
    let k = FD_STEP;
    let zs: Vec<f64> = (0..z_nodes).map(|j| -z_max + 2.0 * z_max * j as f64 / (z_nodes - 1) as f64).collect();
    let mut report = HReport {
        t_nodes: ts.len(),
        z_nodes,
        z_max,
        min_dz: f64::INFINITY,
        fd_step: k,
        fd_max_error: 0.0,
        fd_second_order_error: 0.0,
        pass: true,
        violation: None,
    };
    let flag = |report: &mut HReport, check, t, z, value: f64, expected: f64, ok: bool| {
        if !ok && report.violation.is_none() {
            report.pass = false;
            report.violation = Some(GridViolation { check, t, z, value, expected });
        }
    };
    // G at the stencil points, shared by every t.
    let stencil: Vec<[f64; 5]> = zs
        .iter()
        .map(|&z| [-2.0, -1.0, 0.0, 1.0, 2.0].map(|s| h.big_g(z + s * k)))
        .collect();
    for &t in ts {
        for &z in &zs {
            let v = h.h(t, z);
            if t == 0.0 {
                flag(&mut report, "identity at t = 0", t, z, v, z, (v - z).abs() <= IDENTITY_TOL);
            }
            if z.abs() <= 0.5 {
                let e = (1.0 - t) * z;
                flag(&mut report, "linear on [-1/2, 1/2]", t, z, v, e, (v - e).abs() <= IDENTITY_TOL);
            }
            if z.abs() > 1.0 {
                flag(&mut report, "identity outside [-1, 1]", t, z, v, z, v == z);
            }
            let odd = h.h(t, -z);
            flag(&mut report, "odd symmetry", t, z, odd, -v, odd == -v);
            let dz = if z.abs() > 1.0 { 1.0 } else { t * h.g.eval(z.abs()) + 1.0 };
            report.min_dz = report.min_dz.min(dz);
            flag(&mut report, "dh/dz > 0", t, z, dz, 0.0, dz > 0.0);
        }
    }
    // h is affine in t, so the t-difference can use any interior pair.
    let t_pairs: Vec<(f64, f64)> = ts.iter().filter(|&&t| t >= k && t + k < 1.0).map(|&t| (t - k, t + k)).collect();
    for (lo, hi) in t_pairs {
        let t = (lo + hi) / 2.0;
        for (j, &z) in zs.iter().enumerate() {
            let g_at = |s: usize| {
                let zz = z + (s as f64 - 2.0) * k;
                let big_g = stencil[j][s];
                (h_from(hi, zz, big_g) - h_from(lo, zz, big_g)) / (hi - lo)
            };
            let d: [f64; 5] = [0, 1, 2, 3, 4].map(g_at);
            let fourth = (d[0] - 8.0 * d[1] + 8.0 * d[3] - d[4]) / (12.0 * k);
            let second = (d[3] - d[1]) / (2.0 * k);
            let exact = h.mixed(z);
            let err = (fourth - exact).abs();
            report.fd_max_error = report.fd_max_error.max(err);
            report.fd_second_order_error = report.fd_second_order_error.max((second - exact).abs());
            flag(&mut report, "finite-difference mixed derivative", t, z, fourth, exact, err < FD_TOL);
        }
    }
    Ok(report)
}

/// h(t, z) given G(z).
fn h_from(t: f64, z: f64, big_g: f64) -> f64 {
    if z.abs() > 1.0 {
        z
    } else {
        z + t * big_g
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingReport {
    pub profile: ProfileG,
    pub g_min: f64,
    pub g_max: f64,
    pub plateau_value: f64,
    pub integral: f64,
    pub integral_doubled: f64,
    pub ratio: RatioSweep,
    pub ratio_doubled_max: f64,
    pub conformal: ConformalBound,
    pub h_family: HReport,
    pub tolerances: Tolerances,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    pub ratio: f64,
    pub integral: f64,
    pub finite_difference: f64,
    pub convergence: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepParams {
    pub t_max: f64,
    pub t_nodes: usize,
    /// t grid for the h-family checks, which cost more per node.
    pub h_t_nodes: usize,
    pub z_max: f64,
    pub ratio_tol: f64,
}

impl Default for SweepParams {
    fn default() -> Self {
        SweepParams { t_max: DEFAULT_T_MAX, t_nodes: DEFAULT_NODES, h_t_nodes: 101, z_max: 1.5, ratio_tol: RATIO_TOL }
    }
}

/// Every check at once.
pub fn verify_scaling(params: GParams, sweep: SweepParams) -> Result<ScalingReport> {
    let g = build_g(params)?;
    let doubled = build_g(GParams { nodes: 2 * params.nodes - 1, ..params })?;
    let ts = t_grid(sweep.t_max, sweep.t_nodes)?;
    let ratio = bound_ratio(&g, &ts)?;
    let ratio_doubled_max = bound_ratio(&doubled, &ts)?.max;
    let conformal = conformal_bound(&g, &ts, &ratio);
    let h = ProfileH::new(&g);
    let h_family = verify_h_family(&h, &t_grid(sweep.t_max, sweep.h_t_nodes)?, sweep.z_max, params.nodes)?;
    let integral = g.integral(params.nodes);
    let integral_doubled = doubled.integral(doubled.params.nodes);
    let (g_min, g_max) = (g.min(), g.max());
    let pass = g_min >= -1.0
        && g_max <= params.height
        && integral.abs() < INTEGRAL_TOL
        && integral_doubled.abs() < INTEGRAL_TOL
        && ratio.max <= params.height + sweep.ratio_tol
        && ratio.max_where_g_nonpositive <= 0.0
        && (ratio.max - ratio_doubled_max).abs() < CONVERGENCE_TOL
        && conformal.below_four
        && h_family.pass;
    Ok(ScalingReport {
        plateau_value: g.eval(0.25),
        profile: g,
        g_min,
        g_max,
        integral,
        integral_doubled,
        ratio,
        ratio_doubled_max,
        conformal,
        h_family,
        tolerances: Tolerances {
            ratio: sweep.ratio_tol,
            integral: INTEGRAL_TOL,
            finite_difference: FD_TOL,
            convergence: CONVERGENCE_TOL,
        },
        pass,
    })
}

/// `z,g` rows for plotting.
pub fn write_g_csv(g: &ProfileG, mut out: impl Write) -> std::io::Result<()> {
    writeln!(out, "z,g")?;
    for (z, v) in g.grid() {
        writeln!(out, "{z},{v}")?;
    }
    Ok(())
}

/// `t,z,h` rows on the given grids.
pub fn write_h_csv(h: &ProfileH, ts: &[f64], zs: &[f64], mut out: impl Write) -> std::io::Result<()> {
    writeln!(out, "t,z,h")?;
    for &t in ts {
        for &z in zs {
            writeln!(out, "{t},{z},{}", h.h(t, z))?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plateau_and_range() {
        let g = build_g(GParams::default()).unwrap();
        assert_eq!(g.eval(0.25), -1.0);
        assert_eq!(g.eval(0.999), 0.0);
        assert!(g.max() <= 1.25 && g.min() >= -1.0);
        assert!((g.amplitude - g.analytic_amplitude).abs() < 1e-9);
        assert!(g.integral(DEFAULT_NODES).abs() < INTEGRAL_TOL);
        assert!(g.integral(2 * DEFAULT_NODES - 1).abs() < INTEGRAL_TOL);
    }

    #[test]
    fn infeasible_heights() {
        let low = GParams { height: 1.1, ..GParams::default() };
        assert!(matches!(build_g(low), Err(Error::Infeasible(_))));
        let overlap = GParams { rise: 0.3, fall: 0.3, ..GParams::default() };
        assert!(build_g(overlap).is_err());
    }

    #[test]
    fn ratio_at_t_zero_is_max_g() {
        let g = build_g(GParams::default()).unwrap();
        let r = bound_ratio(&g, &[0.0]).unwrap();
        assert_eq!(r.max, g.max());
        assert!(bound_ratio(&g, &[1.0]).is_err());
    }

    #[test]
    fn exp_two_ways() {
        for x in [0.0f64, 0.5, 1.25, 1.3] {
            assert!((x.exp() - exp_series(x)).abs() < 1e-12);
        }
    }

    #[test]
    fn h_identities() {
        let g = build_g(GParams::default()).unwrap();
        let h = ProfileH::new(&g);
        assert_eq!(h.h(0.0, 0.3), 0.3);
        for t in [0.1, 0.5, 0.9] {
            assert!((h.h(t, 0.25) - (1.0 - t) * 0.25).abs() < 1e-12);
        }
        assert!(h.big_g(1.0).abs() < 1e-10);
    }
}
