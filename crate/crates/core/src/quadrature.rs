//! Adaptive two-dimensional integration over truncated half-plane
//! regions.
//!
//! Two engines live here. The cartesian engine handles arbitrary
//! pointwise integrands over rectangles, boxes and tents: tensor
//! Gauss–Legendre panels, geometric layering toward the boundary
//! y = 0, and a Richardson two-level error estimate obtained by
//! splitting every panel. The polar engine (crate-internal) integrates
//! over origin-centered annular sectors and is used by the structured
//! norm routines, which know their integrands' radial and angular
//! exponents analytically.
//!
//! Determinism: cells are evaluated in parallel but merged with
//! compensated summation in a fixed index order, so identical inputs
//! give bit-identical results regardless of thread count.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{CarlesonBox, HalfPlanePoint, Rect, Tent};
use crate::special::{gauss_legendre, sin_power_integral, CompensatedSum};

/// Truncation and resolution settings for quadrature.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureConfig {
    /// Truncation rectangle [x0, x1] x (0, y_max].
    pub x_range: (f64, f64),
    pub y_max: f64,
    /// Base panel counts in x and (log-spaced) y.
    pub base_nx: usize,
    pub base_ny: usize,
    /// Relative error target.
    pub tolerance: f64,
    /// Maximum refinement depth (panel splittings).
    pub max_depth: u32,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            x_range: (-64.0, 64.0),
            y_max: 64.0,
            base_nx: 16,
            base_ny: 24,
            tolerance: 1e-6,
            max_depth: 3,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.x_range.0 < self.x_range.1) || !(self.y_max > 0.0) {
            return Err(Error::invalid("quadrature truncation must satisfy x0 < x1, y_max > 0"));
        }
        if !(self.tolerance > 0.0) || self.base_nx == 0 || self.base_ny == 0 {
            return Err(Error::invalid("quadrature needs tolerance > 0 and nonzero mesh counts"));
        }
        Ok(())
    }

    /// Same config with the tolerance replaced.
    pub fn with_tolerance(&self, tol: f64) -> Self {
        QuadratureConfig { tolerance: tol, ..self.clone() }
    }
}

/// Outcome of a quadrature computation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralResult {
    pub value: f64,
    /// Richardson difference between the last two refinement levels.
    pub error_estimate: f64,
    /// Analytic bound on mass outside the resolved region.
    pub tail_bound: f64,
    /// Set when error_estimate + tail_bound meets the tolerance.
    pub converged: bool,
}

impl IntegralResult {
    pub fn exact(value: f64) -> Self {
        IntegralResult { value, error_estimate: 0.0, tail_bound: 0.0, converged: true }
    }

    pub(crate) fn budget_met(value: f64, err: f64, tail: f64, tol: f64) -> bool {
        let scale = value.abs().max(1e-12);
        err + tail <= tol * scale
    }

    /// Fails with `ToleranceNotMet` (carrying the best estimate) when
    /// the refinement did not converge.
    pub fn require_converged(self) -> Result<f64> {
        if self.converged {
            Ok(self.value)
        } else {
            Err(Error::ToleranceNotMet { value: self.value, error_estimate: self.error_estimate })
        }
    }
}

/// Integration domains accepted by [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IntegrationRegion {
    Rectangle(Rect),
    Box(CarlesonBox),
    Tent(Tent),
}

impl IntegrationRegion {
    pub(crate) fn bounds(&self) -> (f64, f64, f64, f64) {
        match self {
            IntegrationRegion::Rectangle(r) => (r.x0, r.x1, r.y0, r.y1),
            IntegrationRegion::Box(q) => {
                let b = q.base();
                (b.left(), b.right(), 0.0, q.height())
            }
            IntegrationRegion::Tent(t) => {
                let b = t.base();
                (b.left(), b.right(), 0.5 * b.length(), b.length())
            }
        }
    }
}

/// Decay classes for analytic tail accounting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DecayRate {
    /// |g(z)| <= coeff * |z|^{-rate} outside |z| = radius.
    RadialAtInfinity { coeff: f64, rate: f64, radius: f64 },
    /// |g(z)| <= coeff * y^{rate} for y below `height`, across a strip
    /// of the given x-width.
    HeightAtZero { coeff: f64, rate: f64, height: f64, width: f64 },
}

/// Closed-form bound on the dV_alpha mass omitted by a truncation.
///
/// Errors with `Divergent` when the stated rate is not integrable
/// against y^alpha dx dy on the omitted region.
pub fn tail_bound(decay: &DecayRate, alpha: f64) -> Result<f64> {
    if !(alpha > -1.0) {
        return Err(Error::NonIntegrableMeasure { alpha });
    }
    match *decay {
        DecayRate::RadialAtInfinity { coeff, rate, radius } => {
            // ∫_{r>R} r^{-rate} r^{alpha+1} dr dθ against sin^alpha θ
            let exp = alpha + 2.0 - rate;
            if exp >= 0.0 {
                return Err(Error::divergent(format!(
                    "radial rate {rate} is not integrable against dV_{alpha} at infinity"
                )));
            }
            Ok(coeff * sin_power_integral(alpha) * radius.powf(exp) / (-exp))
        }
        DecayRate::HeightAtZero { coeff, rate, height, width } => {
            let exp = rate + alpha + 1.0;
            if exp <= 0.0 {
                return Err(Error::divergent(format!(
                    "height rate {rate} is not integrable against dV_{alpha} at the boundary"
                )));
            }
            Ok(coeff * width * height.powf(exp) / exp)
        }
    }
}

/// Fraction of y_max used as the resolution floor when a region
/// touches the boundary; mass below it is unresolved for generic
/// integrands (the structured routines account for it analytically).
const BOUNDARY_FLOOR_FACTOR: f64 = 3.552713678800501e-15; // 2^-48

/// Panel breakpoints along one axis.
#[derive(Debug, Clone)]
pub(crate) struct Axis {
    pub breaks: Vec<f64>,
}

impl Axis {
    /// Uniform panels over [a, b].
    pub fn uniform(a: f64, b: f64, n: usize) -> Axis {
        let n = n.max(1);
        let mut breaks: Vec<f64> = (0..=n)
            .map(|k| a + (b - a) * (k as f64) / (n as f64))
            .collect();
        breaks[0] = a;
        *breaks.last_mut().expect("nonempty") = b;
        Axis { breaks }
    }

    /// Geometric panels from `lo` to `hi` (lo > 0), at most `per_octave`
    /// panels per factor of two, at least `min_panels` overall.
    pub fn geometric(lo: f64, hi: f64, min_panels: usize) -> Axis {
        assert!(lo > 0.0 && hi > lo);
        let octaves = (hi / lo).log2().ceil().max(1.0) as usize;
        let n = octaves.max(min_panels);
        let ratio = (hi / lo).powf(1.0 / n as f64);
        let mut breaks = Vec::with_capacity(n + 1);
        let mut v = lo;
        for _ in 0..n {
            breaks.push(v);
            v *= ratio;
        }
        breaks.push(hi);
        Axis { breaks }
    }

    /// Splits every panel into 2^level equal pieces.
    pub fn refined(&self, level: u32) -> Axis {
        if level == 0 {
            return self.clone();
        }
        let pieces = 1usize << level;
        let mut breaks = Vec::with_capacity((self.breaks.len() - 1) * pieces + 1);
        for w in self.breaks.windows(2) {
            let (a, b) = (w[0], w[1]);
            for k in 0..pieces {
                breaks.push(a + (b - a) * (k as f64) / (pieces as f64));
            }
        }
        breaks.push(*self.breaks.last().expect("nonempty"));
        Axis { breaks }
    }

    /// Merge in extra breakpoints (clipped to the axis range).
    pub fn with_anchors(mut self, anchors: &[f64]) -> Axis {
        let lo = self.breaks[0];
        let hi = *self.breaks.last().expect("nonempty");
        for &a in anchors {
            if a > lo && a < hi {
                self.breaks.push(a);
            }
        }
        self.breaks.sort_by(|a, b| a.partial_cmp(b).expect("finite breaks"));
        self.breaks.dedup();
        Axis { breaks: self.breaks }
    }
}

/// Tensor-product Gauss evaluation over an axis pair, NaN-checked,
/// parallel over cells with a fixed merge order.
pub(crate) fn tensor_integrate<F>(f: &F, xs: &Axis, ys: &Axis, order: usize) -> Result<f64>
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    let (nodes, weights) = gauss_legendre(order);
    let cells: Vec<(f64, f64, f64, f64)> = xs
        .breaks
        .windows(2)
        .flat_map(|xw| {
            ys.breaks
                .windows(2)
                .map(move |yw| (xw[0], xw[1], yw[0], yw[1]))
                .collect::<Vec<_>>()
        })
        .collect();
    let partials: Vec<Result<f64>> = cells
        .par_iter()
        .map(|&(xa, xb, ya, yb)| {
            let hx = 0.5 * (xb - xa);
            let cx = 0.5 * (xb + xa);
            let hy = 0.5 * (yb - ya);
            let cy = 0.5 * (yb + ya);
            let mut acc = CompensatedSum::new();
            for (xi, wx) in nodes.iter().zip(weights) {
                let x = cx + hx * xi;
                for (yi, wy) in nodes.iter().zip(weights) {
                    let y = cy + hy * yi;
                    let v = f(x, y);
                    if !v.is_finite() {
                        return Err(Error::NonFiniteSample { x, y });
                    }
                    acc.add(wx * wy * v);
                }
            }
            Ok(acc.value() * hx * hy)
        })
        .collect();
    let mut total = CompensatedSum::new();
    for p in partials {
        total.add(p?);
    }
    Ok(total.value())
}

/// Extra structure the cartesian engine can exploit. Default is a
/// plain uniform-by-geometric mesh.
#[derive(Debug, Clone, Default)]
pub(crate) struct CartesianHints {
    /// x-locations the mesh should refine toward geometrically, with a
    /// minimum resolved scale (center, scale).
    pub x_refine: Vec<(f64, f64)>,
    /// Overrides the boundary resolution floor.
    pub y_floor: Option<f64>,
}

pub(crate) fn cartesian_axes(
    bounds: (f64, f64, f64, f64),
    qc: &QuadratureConfig,
    hints: &CartesianHints,
) -> (Axis, Axis) {
    let (x0, x1, y0, y1) = bounds;
    let mut anchors = Vec::new();
    for &(c, scale) in &hints.x_refine {
        let scale = scale.abs().max(1e-300);
        let mut s = scale;
        while s < (x1 - x0) {
            anchors.push(c - s);
            anchors.push(c + s);
            s *= 2.0;
        }
        anchors.push(c);
    }
    let xs = Axis::uniform(x0, x1, qc.base_nx).with_anchors(&anchors);
    let floor = hints.y_floor.unwrap_or(y1 * BOUNDARY_FLOOR_FACTOR);
    let ys = if y0 > 0.0 {
        if y1 / y0 > 4.0 {
            Axis::geometric(y0, y1, qc.base_ny)
        } else {
            Axis::uniform(y0, y1, qc.base_ny)
        }
    } else {
        Axis::geometric(floor, y1, qc.base_ny)
    };
    (xs, ys)
}

/// Runs the two-level Richardson loop over refinement levels of a
/// deterministic mesh builder.
pub(crate) fn refine_to_tolerance<F>(
    eval_level: F,
    qc: &QuadratureConfig,
    tail: f64,
) -> Result<IntegralResult>
where
    F: Fn(u32) -> Result<f64>,
{
    let mut prev = eval_level(0)?;
    let mut best = IntegralResult {
        value: prev,
        error_estimate: f64::INFINITY,
        tail_bound: tail,
        converged: false,
    };
    for level in 1..=qc.max_depth {
        let cur = eval_level(level)?;
        let err = (cur - prev).abs();
        best = IntegralResult {
            value: cur,
            error_estimate: err,
            tail_bound: tail,
            converged: IntegralResult::budget_met(cur, err, tail, qc.tolerance),
        };
        if best.converged {
            return Ok(best);
        }
        prev = cur;
    }
    Ok(best)
}

/// Nested-refinement quadrature of a pointwise integrand over a
/// truncated region, against plain Lebesgue measure dx dy (callers
/// fold any y^alpha factor into the integrand).
pub fn integrate<F>(
    integrand: F,
    region: &IntegrationRegion,
    qc: &QuadratureConfig,
) -> Result<IntegralResult>
where
    F: Fn(HalfPlanePoint) -> f64 + Sync,
{
    qc.validate()?;
    integrate_with_hints(&integrand, region, qc, &CartesianHints::default())
}

pub(crate) fn integrate_with_hints<F>(
    integrand: &F,
    region: &IntegrationRegion,
    qc: &QuadratureConfig,
    hints: &CartesianHints,
) -> Result<IntegralResult>
where
    F: Fn(HalfPlanePoint) -> f64 + Sync,
{
    let bounds = region.bounds();
    if !(bounds.0 < bounds.1) || !(bounds.2 < bounds.3) {
        return Err(Error::invalid("degenerate integration region"));
    }
    let (xs, ys) = cartesian_axes(bounds, qc, hints);
    let h = |x: f64, y: f64| -> f64 {
        match HalfPlanePoint::new(x, y) {
            Ok(z) => integrand(z),
            Err(_) => f64::NAN,
        }
    };
    refine_to_tolerance(
        |level| tensor_integrate(&h, &xs.refined(level), &ys.refined(level), 8),
        qc,
        0.0,
    )
}

/// One-dimensional Gauss integration over an axis, NaN-checked, with
/// ordered compensated merging.
pub(crate) fn line_integrate<F>(f: &F, axis: &Axis, order: usize) -> Result<f64>
where
    F: Fn(f64) -> f64 + Sync,
{
    let (nodes, weights) = gauss_legendre(order);
    let partials: Vec<Result<f64>> = axis
        .breaks
        .windows(2)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|w| {
            let (a, b) = (w[0], w[1]);
            let half = 0.5 * (b - a);
            let mid = 0.5 * (b + a);
            let mut acc = CompensatedSum::new();
            for (xi, wi) in nodes.iter().zip(weights) {
                let x = mid + half * xi;
                let v = f(x);
                if !v.is_finite() {
                    return Err(Error::NonFiniteSample { x, y: f64::NAN });
                }
                acc.add(wi * v);
            }
            Ok(acc.value() * half)
        })
        .collect();
    let mut total = CompensatedSum::new();
    for p in partials {
        total.add(p?);
    }
    Ok(total.value())
}

/// The angular variable over (0, pi), parameterized on each side by
/// the distance u to the nearest endpoint. Evaluating through
/// (cos, sin) of u keeps boundary panels accurate far below the f64
/// resolution of pi - u.
#[derive(Debug, Clone)]
pub(crate) struct AngularAxes {
    /// distances from theta = 0, covering (floor, pi/2]
    pub left: Axis,
    /// distances from theta = pi, covering (floor, pi/2)
    pub right: Axis,
}

/// Geometric panels from `floor` toward both endpoints, split at the
/// given anchor angles (anchors are theta values in (0, pi)).
pub(crate) fn angular_axes(floor: f64, anchors: &[f64]) -> AngularAxes {
    angular_axes_two_floors(floor, floor, anchors)
}

/// As [`angular_axes`] with separate endpoint floors; useful when only
/// one side carries a ridge or singularity.
pub(crate) fn angular_axes_two_floors(
    floor_left: f64,
    floor_right: f64,
    anchors: &[f64],
) -> AngularAxes {
    let half = std::f64::consts::FRAC_PI_2;
    let pi = std::f64::consts::PI;
    let left_anchors: Vec<f64> = anchors.iter().copied().filter(|&a| a < half).collect();
    let right_anchors: Vec<f64> =
        anchors.iter().map(|&a| pi - a).filter(|&u| u > 0.0 && u < half).collect();
    let build = |floor: f64, extra: &[f64]| {
        Axis::geometric(floor.clamp(1e-300, 0.5), half, 4).with_anchors(extra)
    };
    AngularAxes {
        left: build(floor_left, &left_anchors),
        right: build(floor_right, &right_anchors),
    }
}

/// Integrates g(cos theta, sin theta) over theta in (0, pi), skipping
/// the floor neighborhoods of the endpoints (the caller accounts for
/// that mass analytically or chooses the floor so it is negligible).
pub(crate) fn angular_line_integrate<F>(
    g: &F,
    axes: &AngularAxes,
    level: u32,
    order: usize,
) -> Result<f64>
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    let left = line_integrate(&|u: f64| g(u.cos(), u.sin()), &axes.left.refined(level), order)?;
    let right = line_integrate(&|u: f64| g(-u.cos(), u.sin()), &axes.right.refined(level), order)?;
    Ok(left + right)
}

/// Tensor integration of h(r, cos theta, sin theta) over an annular
/// half-sector, geometric in r and in the endpoint distances.
pub(crate) fn polar_tensor_integrate<F>(
    h: &F,
    r_axis: &Axis,
    axes: &AngularAxes,
    level: u32,
    order: usize,
) -> Result<f64>
where
    F: Fn(f64, f64, f64) -> f64 + Sync,
{
    let r = r_axis.refined(level);
    let left = tensor_integrate(
        &|rv: f64, u: f64| h(rv, u.cos(), u.sin()),
        &r,
        &axes.left.refined(level),
        order,
    )?;
    let right = tensor_integrate(
        &|rv: f64, u: f64| h(rv, -u.cos(), u.sin()),
        &r,
        &axes.right.refined(level),
        order,
    )?;
    Ok(left + right)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Interval;

    fn unit_box_region() -> IntegrationRegion {
        IntegrationRegion::Box(CarlesonBox::new(Interval::new(0.0, 1.0).unwrap()))
    }

    #[test]
    fn constant_over_unit_box() {
        let qc = QuadratureConfig::default();
        let r = integrate(|_| 1.0, &unit_box_region(), &qc).unwrap();
        assert!(r.converged);
        assert!((r.value - 1.0).abs() < 1e-6);
    }

    #[test]
    fn height_over_unit_box() {
        let qc = QuadratureConfig::default();
        let r = integrate(|z| z.y(), &unit_box_region(), &qc).unwrap();
        assert!(r.converged);
        assert!((r.value - 0.5).abs() < 1e-7);
    }

    #[test]
    fn kernel_integrand_cross_checked_against_finer_mesh() {
        // |z - conj(w)|^{-2} for w = (0, 1) over [-1,1] x (0,1]
        let w = HalfPlanePoint::new(0.0, 1.0).unwrap();
        let f = move |z: HalfPlanePoint| z.dist_to_conjugate(w).powi(-2);
        let region = IntegrationRegion::Rectangle(Rect::new(-1.0, 1.0, 0.0, 1.0).unwrap());
        let qc = QuadratureConfig { tolerance: 1e-8, ..QuadratureConfig::default() };
        let coarse = integrate(f, &region, &qc).unwrap();
        // reference: 4x finer base mesh
        let fine_qc = QuadratureConfig { base_nx: 64, base_ny: 96, ..qc.clone() };
        let fine = integrate(f, &region, &fine_qc).unwrap();
        assert!(coarse.converged);
        assert!((coarse.value - fine.value).abs() < 1e-7 * fine.value.abs());
    }

    #[test]
    fn non_finite_sample_is_reported() {
        let qc = QuadratureConfig::default();
        let r = integrate(
            |z| if z.x() > 0.5 { f64::NAN } else { 1.0 },
            &unit_box_region(),
            &qc,
        );
        match r {
            Err(Error::NonFiniteSample { x, .. }) => assert!(x > 0.5),
            other => panic!("expected NonFiniteSample, got {other:?}"),
        }
    }

    #[test]
    fn depth_exhaustion_clears_converged_flag() {
        // An integrand rough enough that depth 0->1 cannot meet 1e-14.
        let qc = QuadratureConfig {
            tolerance: 1e-14,
            max_depth: 1,
            base_nx: 2,
            base_ny: 2,
            ..QuadratureConfig::default()
        };
        let r = integrate(|z| (37.0 * z.x()).sin().abs() + z.y().sqrt(), &unit_box_region(), &qc)
            .unwrap();
        assert!(!r.converged);
        assert!(r.require_converged().is_err());
    }

    #[test]
    fn refinement_error_estimates_decrease() {
        // Monotone refinement on a smooth integrand: halving the mesh
        // never increases the reported Richardson estimate.
        let region = unit_box_region();
        let f = |z: HalfPlanePoint| (z.x() + 2.0 * z.y()).exp();
        let mut prev_err = f64::INFINITY;
        for depth in 1..=3 {
            let qc = QuadratureConfig {
                tolerance: 1e-300, // force full depth
                max_depth: depth,
                ..QuadratureConfig::default()
            };
            let r = integrate(f, &region, &qc).unwrap();
            assert!(r.error_estimate <= prev_err);
            prev_err = r.error_estimate;
        }
    }

    #[test]
    fn separable_integrand_matches_1d_product() {
        // f(x) g(y) = x^2 * e^{-y} over [0,2] x (0,1]
        let region = IntegrationRegion::Rectangle(Rect::new(0.0, 2.0, 0.0, 1.0).unwrap());
        let qc = QuadratureConfig { tolerance: 1e-9, ..QuadratureConfig::default() };
        let r = integrate(|z| z.x() * z.x() * (-z.y()).exp(), &region, &qc).unwrap();
        let expect = (8.0 / 3.0) * (1.0 - (-1.0f64).exp());
        assert!((r.value - expect).abs() < 1e-7 * expect);
    }

    #[test]
    fn tail_bounds_closed_forms() {
        // |z|^{-4} outside R, alpha = 0: S(0) * R^{-2} / 2 = pi R^{-2}/2
        let b = tail_bound(
            &DecayRate::RadialAtInfinity { coeff: 1.0, rate: 4.0, radius: 10.0 },
            0.0,
        )
        .unwrap();
        assert!((b - std::f64::consts::PI * 0.01 / 2.0).abs() < 1e-12);

        // y^0 below h against y^alpha: width * h^{alpha+1}/(alpha+1)
        let b2 = tail_bound(
            &DecayRate::HeightAtZero { coeff: 1.0, rate: 0.0, height: 0.5, width: 2.0 },
            1.0,
        )
        .unwrap();
        assert!((b2 - 2.0 * 0.25 / 2.0).abs() < 1e-12);

        // non-integrable radial rate
        assert!(tail_bound(
            &DecayRate::RadialAtInfinity { coeff: 1.0, rate: 2.0, radius: 1.0 },
            0.0
        )
        .is_err());
    }

    #[test]
    fn deterministic_across_repeat_runs() {
        let qc = QuadratureConfig::default();
        let w = HalfPlanePoint::new(0.3, 0.7).unwrap();
        let f = move |z: HalfPlanePoint| z.dist_to_conjugate(w).powf(-1.3) * z.y().sqrt();
        let a = integrate(f, &unit_box_region(), &qc).unwrap();
        let b = integrate(f, &unit_box_region(), &qc).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.error_estimate.to_bits(), b.error_estimate.to_bits());
    }

    #[test]
    fn tent_region_measure() {
        // ∫_{T_[0,1)} y^2 dx dy = ∫_{1/2}^{1} y^2 dy = 7/24
        let region = IntegrationRegion::Tent(Tent::new(Interval::new(0.0, 1.0).unwrap()));
        let qc = QuadratureConfig { tolerance: 1e-10, ..QuadratureConfig::default() };
        let r = integrate(|z| z.y() * z.y(), &region, &qc).unwrap();
        assert!((r.value - 7.0 / 24.0).abs() < 1e-10);
    }
}
