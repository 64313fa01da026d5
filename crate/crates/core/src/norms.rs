//! Weighted region measures, duality pairings and L^p norms of
//! symbolic functions.
//!
//! Dispatch is structural. Pure power integrands (coeff * |z|^m * y^h
//! with box / tent / radius cuts) are integrated in polar coordinates:
//! every ray from the origin meets the region in one interval, so the
//! radial integral is a closed form and only a one-dimensional angular
//! quadrature remains. This keeps steeply singular weights such as
//! |z|^{delta - 2 - alpha} exact down to the origin. Products with
//! shifted-kernel factors fall back to the numeric polar or cartesian
//! engines with analytic tail accounting.
//!
//! Divergence is decided from the integrand's exponents before any
//! quadrature runs, so error reporting is deterministic.

use crate::error::{Error, Result};
use crate::geometry::HalfPlanePoint;
use crate::quadrature::{
    angular_axes, angular_line_integrate, polar_tensor_integrate, refine_to_tolerance, Axis,
    CartesianHints, IntegralResult, IntegrationRegion, QuadratureConfig,
};
use crate::special::sin_power_integral;
use crate::symbolic::{NormalForm, SymbolicFunction};

/// A radially convex truncation: x in [x0, x1), y in (y_lo, y_hi),
/// |z| <= radius; any bound may be absent.
#[derive(Debug, Clone, Copy, Default)]
struct RadialRegion {
    x: Option<(f64, f64)>,
    y_lo: f64,
    y_hi: Option<f64>,
    radius: Option<f64>,
}

impl RadialRegion {
    fn from_integration_region(region: &IntegrationRegion) -> Self {
        let (x0, x1, y0, y1) = region.bounds();
        RadialRegion { x: Some((x0, x1)), y_lo: y0, y_hi: Some(y1), radius: None }
    }

    fn intersect_cuts(mut self, nf: &NormalForm) -> Self {
        if let Some((a, b)) = nf.x_cut {
            self.x = Some(match self.x {
                Some((c, d)) => (c.max(a), d.min(b)),
                None => (a, b),
            });
        }
        if let Some(h) = nf.height_cut {
            self.y_hi = Some(match self.y_hi {
                Some(g) => g.min(h),
                None => h,
            });
        }
        if let Some(r) = nf.radius_cut {
            self.radius = Some(match self.radius {
                Some(s) => s.min(r),
                None => r,
            });
        }
        self
    }

    fn is_empty(&self) -> bool {
        if let Some((a, b)) = self.x {
            if !(a < b) {
                return true;
            }
        }
        if let Some(h) = self.y_hi {
            if !(self.y_lo < h) {
                return true;
            }
        }
        if let Some(r) = self.radius {
            if !(self.y_lo < r) {
                return true;
            }
            if let Some((a, _)) = self.x {
                if a >= r {
                    return true;
                }
            }
            if let Some((_, b)) = self.x {
                if b <= -r {
                    return true;
                }
            }
        }
        false
    }

    fn is_bounded(&self) -> bool {
        self.radius.is_some() || (self.x.is_some() && self.y_hi.is_some())
    }

    /// Whether the closure reaches the origin.
    fn touches_origin(&self) -> bool {
        if self.y_lo > 0.0 {
            return false;
        }
        match self.x {
            Some((a, b)) => a <= 0.0 && b >= 0.0,
            None => true,
        }
    }

    /// Whether the region has points at angle theta -> 0 (positive
    /// x-axis side) or theta -> pi.
    fn touches_positive_axis(&self) -> bool {
        self.y_lo == 0.0 && self.x.map_or(true, |(_, b)| b > 0.0)
    }

    fn touches_negative_axis(&self) -> bool {
        self.y_lo == 0.0 && self.x.map_or(true, |(a, _)| a < 0.0)
    }

    /// The radial section [r_in, r_out) of the ray in direction
    /// (cos, sin) = (c, s); r_out may be infinite. Empty sections
    /// return None.
    fn radial_section(&self, c: f64, s: f64) -> Option<(f64, f64)> {
        let mut lo = self.y_lo / s;
        let mut hi = f64::INFINITY;
        if let Some(h) = self.y_hi {
            hi = hi.min(h / s);
        }
        if let Some(r) = self.radius {
            hi = hi.min(r);
        }
        if let Some((a, b)) = self.x {
            if c > 0.0 {
                if b <= 0.0 {
                    return None;
                }
                hi = hi.min(b / c);
                if a > 0.0 {
                    lo = lo.max(a / c);
                }
            } else if c < 0.0 {
                if a >= 0.0 {
                    return None;
                }
                hi = hi.min(a / c);
                if b < 0.0 {
                    lo = lo.max(b / c);
                }
            } else if !(a <= 0.0 && b >= 0.0) {
                return None;
            }
        }
        if hi > lo {
            Some((lo, hi))
        } else {
            None
        }
    }

    /// Corner and crossing angles where the radial section's formula
    /// changes; quadrature panels are split there.
    fn corner_angles(&self) -> Vec<f64> {
        let mut angles = Vec::new();
        let mut push = |x: f64, y: f64| {
            if y > 0.0 {
                let a = y.atan2(x);
                if a > 0.0 && a < std::f64::consts::PI {
                    angles.push(a);
                }
            }
        };
        let xs: Vec<f64> = match self.x {
            Some((a, b)) => vec![a, b],
            None => vec![],
        };
        let mut ys: Vec<f64> = vec![self.y_lo];
        if let Some(h) = self.y_hi {
            ys.push(h);
        }
        for &cx in &xs {
            for &cy in &ys {
                push(cx, cy);
            }
        }
        if let Some(r) = self.radius {
            for &cx in &xs {
                if cx.abs() < r {
                    push(cx, (r * r - cx * cx).sqrt());
                }
            }
            for &cy in &ys {
                if cy > 0.0 && cy < r {
                    let x = (r * r - cy * cy).sqrt();
                    push(x, cy);
                    push(-x, cy);
                }
            }
        }
        angles
    }
}

/// (r_out^e - r_in^e)/e, with the logarithmic limit at e = 0.
fn radial_primitive(e: f64, r_in: f64, r_out: f64) -> f64 {
    if e.abs() < 1e-12 {
        (r_out / r_in).ln()
    } else if r_out.is_infinite() {
        -r_in.powf(e) / e
    } else if r_in == 0.0 {
        r_out.powf(e) / e
    } else {
        (r_out.powf(e) - r_in.powf(e)) / e
    }
}

/// ∫ coeff · |z|^m · y^h dx dy over a radially convex region, by exact
/// radial integration and adaptive angular quadrature.
fn power_polar_integral(
    coeff: f64,
    m: f64,
    h: f64,
    region: &RadialRegion,
    qc: &QuadratureConfig,
) -> Result<IntegralResult> {
    if coeff == 0.0 || region.is_empty() {
        return Ok(IntegralResult::exact(0.0));
    }
    let e = m + h + 2.0;
    if region.touches_origin() && e <= 0.0 {
        return Err(Error::divergent(format!(
            "|z|^{m} y^{h} has radial exponent {e} <= 0 at the origin"
        )));
    }
    if !region.is_bounded() && e >= 0.0 {
        return Err(Error::divergent(format!(
            "|z|^{m} y^{h} has radial exponent {e} >= 0 at infinity"
        )));
    }
    let touches_axis = region.touches_positive_axis() || region.touches_negative_axis();
    if touches_axis && h <= -1.0 {
        return Err(Error::divergent(format!(
            "angular factor sin^{h} is not integrable along the boundary"
        )));
    }
    // theta floor: below it the angular mass is < ~1e-16 relative
    let floor = if touches_axis {
        10f64.powf((-16.0 / (h + 1.0)).max(-200.0))
    } else {
        let min_corner = region
            .corner_angles()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        let min_corner = min_corner
            .min(std::f64::consts::PI - region.corner_angles().iter().copied().fold(0.0, f64::max));
        (min_corner * 0.25).clamp(1e-18, 0.5)
    };
    let anchors = region.corner_angles();
    let angular = |c: f64, s: f64| -> f64 {
        match region.radial_section(c, s) {
            Some((r_in, r_out)) => s.powf(h) * radial_primitive(e, r_in, r_out),
            None => 0.0,
        }
    };
    let axes = angular_axes(floor, &anchors);
    let mut out = refine_to_tolerance(
        |level| angular_line_integrate(&angular, &axes, level, 12),
        qc,
        0.0,
    )?;
    out.value *= coeff;
    out.error_estimate *= coeff.abs();
    Ok(out)
}

/// Upper bound for the kernel factors at radius >= 2 * max shift.
fn kernel_tail_coeff(nf: &NormalForm) -> f64 {
    nf.kernels
        .iter()
        .map(|&(_, g)| if g >= 0.0 { 2f64.powf(g) } else { 1.5f64.powf(-g) })
        .product()
}

/// ∫ f(z) y^nu dx dy over the region obtained by intersecting `base`
/// with f's support cuts.
fn integral_nf(
    nf: &NormalForm,
    base: RadialRegion,
    nu: f64,
    qc: &QuadratureConfig,
) -> Result<IntegralResult> {
    qc.validate()?;
    if nf.is_trivially_zero() {
        return Ok(IntegralResult::exact(0.0));
    }
    let region = base.intersect_cuts(nf);
    if region.is_empty() {
        return Ok(IntegralResult::exact(0.0));
    }
    let m = nf.modulus_exp;
    let h = nf.height_exp + nu;
    if nf.is_pure_power() {
        return power_polar_integral(nf.coeff, m, h, &region, qc);
    }
    // Kernel factors present.
    let gamma_sum: f64 = nf.kernels.iter().map(|&(_, g)| g).sum();
    let min_shift = nf.kernels.iter().map(|&(t, _)| t).fold(f64::INFINITY, f64::min);
    let max_shift = nf.kernels.iter().map(|&(t, _)| t).fold(0.0, f64::max);
    if region.touches_origin() && m + h + 2.0 <= 0.0 {
        return Err(Error::divergent(format!(
            "radial exponent {} <= 0 at the origin",
            m + h + 2.0
        )));
    }
    if (region.touches_positive_axis() || region.touches_negative_axis()) && h <= -1.0 {
        return Err(Error::divergent(format!("boundary exponent {h} <= -1")));
    }
    let infinity_exp = m + h - gamma_sum + 2.0;
    if !region.is_bounded() && infinity_exp >= 0.0 {
        return Err(Error::divergent(format!(
            "decay exponent {infinity_exp} >= 0 at infinity (kernel decay too weak)"
        )));
    }
    let integrand = move |z: HalfPlanePoint| nf.eval(z) * z.y().powf(nu);
    if region.x.is_some() {
        // bounded box-like region: cartesian engine
        let (x0, x1) = region.x.expect("checked");
        let y_hi = region
            .y_hi
            .unwrap_or_else(|| region.radius.expect("bounded region"))
            .min(region.radius.unwrap_or(f64::INFINITY));
        let rect = crate::geometry::Rect::new(x0, x1, region.y_lo, y_hi)?;
        let hints = CartesianHints {
            x_refine: if m != 0.0 && x0 <= 0.0 && x1 >= 0.0 {
                vec![(0.0, (min_shift / 8.0).min(1e-6))]
            } else {
                vec![]
            },
            y_floor: None,
        };
        return crate::quadrature::integrate_with_hints(
            &integrand,
            &IntegrationRegion::Rectangle(rect),
            qc,
            &hints,
        );
    }
    // Full-plane (possibly radius-cut) polar quadrature.
    let origin_mass_exp = m + h + 2.0;
    let mut r_lo = (qc.tolerance * 1e-3).powf(1.0 / origin_mass_exp).min(min_shift * 1e-2);
    r_lo = r_lo.clamp(1e-220, 1.0);
    // mass below r_lo: kernels are bounded by (shift/2)^{-gamma} there
    let origin_coeff: f64 = nf
        .kernels
        .iter()
        .map(|&(t, g)| if g >= 0.0 { t.powf(-g) } else { (2.0 * t).powf(-g) })
        .product();
    let origin_tail = nf.coeff * origin_coeff * sin_power_integral(h)
        * r_lo.powf(origin_mass_exp)
        / origin_mass_exp;
    let infinity_tail_at = |r: f64| -> f64 {
        if region.radius.is_some() {
            0.0
        } else {
            nf.coeff * kernel_tail_coeff(nf) * sin_power_integral(h) * r.powf(infinity_exp)
                / (-infinity_exp)
        }
    };
    let theta_floor = 10f64.powf((-16.0 / (h + 1.0)).max(-200.0));
    let r_anchors: Vec<f64> = nf.kernels.iter().map(|&(t, _)| t).collect();
    let polar_integrand = move |r: f64, c: f64, s: f64| -> f64 {
        match HalfPlanePoint::new(r * c, r * s) {
            Ok(z) => integrand(z) * r,
            Err(_) => 0.0,
        }
    };
    let axes = angular_axes(theta_floor, &[]);
    let mut r_hi = region.radius.unwrap_or_else(|| (4.0 * max_shift).max(64.0));
    if region.radius.is_none() {
        // pilot pass, then extend the domain until the analytic tail
        // sits well under tolerance relative to the pilot value
        let pilot_axis = Axis::geometric(r_lo, r_hi, 8).with_anchors(&r_anchors);
        let pilot = polar_tensor_integrate(&polar_integrand, &pilot_axis, &axes, 0, 8)?;
        let budget = qc.tolerance * 0.25 * pilot.abs().max(1e-300);
        let mut guard = 0;
        while guard < 4000 && infinity_tail_at(r_hi) > budget {
            r_hi *= 2.0;
            guard += 1;
        }
    }
    let tail = infinity_tail_at(r_hi) + origin_tail;
    let r_axis = Axis::geometric(r_lo, r_hi, 8).with_anchors(&r_anchors);
    refine_to_tolerance(
        |level| polar_tensor_integrate(&polar_integrand, &r_axis, &axes, level, 8),
        qc,
        tail,
    )
}

/// |E|_{w,alpha} = ∫_E w dV_alpha with a reported error estimate.
pub fn weighted_region_measure(
    region: &IntegrationRegion,
    w: &SymbolicFunction,
    alpha: f64,
    qc: &QuadratureConfig,
) -> Result<IntegralResult> {
    if !(alpha > -1.0) {
        return Err(Error::NonIntegrableMeasure { alpha });
    }
    let nf = w.normal_form();
    integral_nf(&nf, RadialRegion::from_integration_region(region), alpha, qc)
}

/// ∫_H f dV_nu over the whole half-plane (finite when f's decay or
/// support cuts make it so).
pub fn integral_dv(f: &SymbolicFunction, nu: f64, qc: &QuadratureConfig) -> Result<IntegralResult> {
    if !(nu > -1.0) {
        return Err(Error::NonIntegrableMeasure { alpha: nu });
    }
    integral_nf(&f.normal_form(), RadialRegion::default(), nu, qc)
}

/// The duality pairing <f, g>_alpha = ∫_H f g dV_alpha.
pub fn pairing(
    f: &SymbolicFunction,
    g: &SymbolicFunction,
    alpha: f64,
    qc: &QuadratureConfig,
) -> Result<IntegralResult> {
    integral_dv(&f.times(g), alpha, qc)
}

/// ‖f‖_{p,nu} = (∫_H |f|^p y^nu dx dy)^{1/p}.
///
/// Divergence (from the descriptor's exponents, e.g. a shifted kernel
/// power with gamma <= (nu+2)/p) is reported before any quadrature.
pub fn lp_norm(f: &SymbolicFunction, p: f64, nu: f64, qc: &QuadratureConfig) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::invalid(format!("lp_norm needs p >= 1, got {p}")));
    }
    let powered = f.powf(p);
    let res = integral_dv(&powered, nu, qc)?;
    let val = res.require_converged()?;
    Ok(val.powf(1.0 / p))
}
