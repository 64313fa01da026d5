//! Kernel operators on the half-plane: the positive Bergman operator,
//! its fractional variants, and the general two-exponent positive
//! operator. Pointwise application integrates against the symbolic
//! test function's support with ridge-aware meshes (the kernel peaks
//! along w = (x, 0) when z = x + iy sits low), and norm ratios
//! integrate the applied operator over a truncation.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{HalfPlanePoint, Rect};
use crate::norms::weighted_region_measure;
use crate::quadrature::{
    angular_axes, integrate_with_hints, polar_tensor_integrate, refine_to_tolerance, Axis,
    CartesianHints, IntegralResult, IntegrationRegion, QuadratureConfig,
};
use crate::special::sin_power_integral;
use crate::symbolic::SymbolicFunction;

/// The operator family. All kernels are positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OperatorSpec {
    /// P_alpha^+: kernel |z - conj w|^{-(2+alpha)} against dV_alpha.
    PositiveBergman { alpha: f64 },
    /// S_{alpha,a}: (Im z)^a |z - conj w|^{-(2+alpha)} against dV_alpha.
    FractionalS { alpha: f64, a: f64 },
    /// T_{alpha,a}: |z - conj w|^{-(2+alpha-a)} against dV_alpha.
    FractionalT { alpha: f64, a: f64 },
    /// T^+: |z - conj w|^{-(1+b)} (Im w)^a against plain dV.
    GeneralTPlus { a: f64, b: f64 },
}

/// (exponent of Im z prefactor, kernel distance exponent, power of
/// Im w folded in with the measure).
#[derive(Debug, Clone, Copy)]
pub(crate) struct KernelShape {
    pub z_height_exp: f64,
    pub distance_exp: f64,
    pub w_height_exp: f64,
}

impl OperatorSpec {
    pub(crate) fn shape(&self) -> KernelShape {
        match *self {
            OperatorSpec::PositiveBergman { alpha } => KernelShape {
                z_height_exp: 0.0,
                distance_exp: 2.0 + alpha,
                w_height_exp: alpha,
            },
            OperatorSpec::FractionalS { alpha, a } => KernelShape {
                z_height_exp: a,
                distance_exp: 2.0 + alpha,
                w_height_exp: alpha,
            },
            OperatorSpec::FractionalT { alpha, a } => KernelShape {
                z_height_exp: 0.0,
                distance_exp: 2.0 + alpha - a,
                w_height_exp: alpha,
            },
            OperatorSpec::GeneralTPlus { a, b } => KernelShape {
                z_height_exp: 0.0,
                distance_exp: 1.0 + b,
                w_height_exp: a,
            },
        }
    }

    /// Full kernel value, measure power of Im w included.
    pub fn kernel(&self, z: HalfPlanePoint, w: HalfPlanePoint) -> f64 {
        let s = self.shape();
        z.y().powf(s.z_height_exp)
            * z.dist_to_conjugate(w).powf(-s.distance_exp)
            * w.y().powf(s.w_height_exp)
    }

    /// Applies the operator to a symbolic f at the point z, with the
    /// full refinement diagnostics.
    pub fn apply_detailed(
        &self,
        f: &SymbolicFunction,
        z: HalfPlanePoint,
        qc: &QuadratureConfig,
    ) -> Result<IntegralResult> {
        qc.validate()?;
        let shape = self.shape();
        let nf = f.normal_form();
        if nf.is_trivially_zero() {
            return Ok(IntegralResult::exact(0.0));
        }
        let prefactor = nf.coeff * z.y().powf(shape.z_height_exp);
        let m = nf.modulus_exp;
        let h = nf.height_exp + shape.w_height_exp;
        // integrability of f v^{w_exp} near the origin and the boundary
        if h <= -1.0 {
            return Err(Error::divergent(format!(
                "boundary exponent {h} <= -1 in the operator integral"
            )));
        }
        let touches_origin = match nf.x_cut {
            Some((lo, hi)) => lo <= 0.0 && hi >= 0.0,
            None => true,
        };
        if touches_origin && m + h + 2.0 <= 0.0 {
            return Err(Error::divergent(format!(
                "origin exponent {} <= 0 in the operator integral",
                m + h + 2.0
            )));
        }
        let gamma_sum: f64 = nf.kernels.iter().map(|&(_, g)| g).sum();
        let infinity_exp = m + h - gamma_sum - shape.distance_exp + 2.0;
        if !nf.has_bounded_support() && infinity_exp >= 0.0 {
            return Err(Error::divergent(format!(
                "decay exponent {infinity_exp} >= 0: the operator integral diverges at infinity"
            )));
        }
        // strip the coefficient so scalar multiples factor exactly
        let mut core = nf.clone();
        core.coeff = 1.0;
        let integrand = move |w: HalfPlanePoint| {
            core.eval(w) * w.y().powf(shape.w_height_exp) * z.dist_to_conjugate(w).powf(-shape.distance_exp)
        };
        let mut out = if let Some((x_lo, x_hi)) = nf.x_cut {
            // box-supported f: cartesian with ridge refinement at x = Re z
            let y_hi = nf
                .height_cut
                .unwrap_or(f64::INFINITY)
                .min(nf.radius_cut.unwrap_or(f64::INFINITY));
            if !y_hi.is_finite() {
                return Err(Error::divergent(
                    "x-cut support without height bound is not integrable here",
                ));
            }
            let rect = Rect::new(x_lo, x_hi, 0.0, y_hi)?;
            // ridge width is y + v; resolving x much below the box's
            // own v-floor buys nothing
            let ridge_scale = (z.y() / 16.0).clamp(y_hi * 2f64.powi(-34), 0.25);
            let mut hints = CartesianHints {
                x_refine: vec![(z.x(), ridge_scale)],
                y_floor: None,
            };
            if m != 0.0 && x_lo <= 0.0 && x_hi >= 0.0 {
                hints.x_refine.push((0.0, 1e-8));
            }
            integrate_with_hints(&integrand, &IntegrationRegion::Rectangle(rect), qc, &hints)?
        } else {
            // radial or unbounded support: polar mesh with ridge-aware
            // angular floor and radial anchors near |x|
            let origin_exp = m + h + 2.0;
            let mut r_lo = (qc.tolerance * 1e-3).powf(1.0 / origin_exp);
            for &(t, _) in &nf.kernels {
                r_lo = r_lo.min(t * 1e-2);
            }
            r_lo = r_lo.clamp(1e-220, 0.5 * nf.radius_cut.unwrap_or(1.0));
            let mut r_hi = nf.radius_cut.unwrap_or(0.0);
            let tail = if nf.radius_cut.is_none() {
                r_hi = (4.0 * z.modulus()).max(64.0);
                let coeff_bound: f64 = nf
                    .kernels
                    .iter()
                    .map(|&(_, g)| if g >= 0.0 { 2f64.powf(g) } else { 1.5f64.powf(-g) })
                    .product::<f64>()
                    * 2f64.powf(shape.distance_exp);
                let tail_at = |r: f64| {
                    coeff_bound * sin_power_integral(h) * r.powf(infinity_exp) / (-infinity_exp)
                };
                // crude scale: kernel value at height max(1, |z|)
                let scale_pt = HalfPlanePoint::new(0.0, z.modulus().max(1.0)).expect("y > 0");
                let scale = (integrand(scale_pt) * scale_pt.y().powi(2)).abs().max(1e-300);
                let mut guard = 0;
                while guard < 2000 && tail_at(r_hi) > qc.tolerance * 0.25 * scale {
                    r_hi *= 2.0;
                    guard += 1;
                }
                tail_at(r_hi)
            } else {
                0.0
            };
            let ridge_floor = if z.x().abs() > r_lo {
                (z.y() / z.x().abs() * 2f64.powi(-8)).clamp(1e-240, 0.1)
            } else {
                1e-16
            };
            let theta_floor = ridge_floor.min(10f64.powf((-16.0 / (h + 1.0)).max(-200.0)));
            let axes = angular_axes(theta_floor, &[]);
            let mut r_anchors: Vec<f64> = nf.kernels.iter().map(|&(t, _)| t).collect();
            let xa = z.x().abs();
            if xa > r_lo && xa < r_hi {
                let mut s = z.y().max(xa * 1e-12);
                r_anchors.push(xa);
                while s < xa {
                    if xa - s > r_lo {
                        r_anchors.push(xa - s);
                    }
                    r_anchors.push(xa + s);
                    s *= 2.0;
                }
            }
            r_anchors.push(z.modulus());
            let r_axis = Axis::geometric(r_lo, r_hi, 8).with_anchors(&r_anchors);
            let polar_integrand = move |r: f64, c: f64, s: f64| -> f64 {
                match HalfPlanePoint::new(r * c, r * s) {
                    Ok(w) => integrand(w) * r,
                    Err(_) => 0.0,
                }
            };
            refine_to_tolerance(
                |level| polar_tensor_integrate(&polar_integrand, &r_axis, &axes, level, 8),
                qc,
                tail,
            )?
        };
        out.value *= prefactor;
        out.error_estimate *= prefactor.abs();
        out.tail_bound *= prefactor.abs();
        Ok(out)
    }

    /// Pointwise value, requiring the refinement to converge.
    pub fn apply(
        &self,
        f: &SymbolicFunction,
        z: HalfPlanePoint,
        qc: &QuadratureConfig,
    ) -> Result<f64> {
        self.apply_detailed(f, z, qc)?.require_converged()
    }
}

/// ‖(op f) tw‖_{L^q(y^{nu2} dxdy)} / ‖f sw‖_{L^p(y^{nu1} dxdy)} with
/// both norms restricted to `outer`, the operator evaluated pointwise
/// on a mesh over that region.
#[allow(clippy::too_many_arguments)]
pub fn norm_ratio_on_region(
    op: &OperatorSpec,
    f: &SymbolicFunction,
    p: f64,
    q: f64,
    source_weight: &SymbolicFunction,
    target_weight: &SymbolicFunction,
    nu1: f64,
    nu2: f64,
    outer: &Rect,
    qc: &QuadratureConfig,
) -> Result<f64> {
    if !(p >= 1.0 && q >= 1.0) {
        return Err(Error::invalid("norm_ratio needs p, q >= 1"));
    }
    let weighted_src = f.times(source_weight).powf(p);
    let denom_region = IntegrationRegion::Rectangle(*outer);
    let denom = weighted_region_measure(&denom_region, &weighted_src, nu1, qc)?.value;
    if !(denom > 0.0) || !denom.is_finite() {
        return Err(Error::divergent(format!("source norm^p = {denom}")));
    }
    // Pointwise operator values are expensive, so the outer mesh is
    // deliberately coarse: a handful of geometric layers with low-order
    // Gauss cells, one refinement level for the error estimate. Norm
    // ratios feed stability/growth classification, not tight bounds.
    let outer_qc = QuadratureConfig {
        base_nx: 6,
        base_ny: 10,
        max_depth: 1,
        ..qc.clone()
    };
    let inner_qc = QuadratureConfig {
        tolerance: (qc.tolerance * 100.0).clamp(1e-6, 1e-3),
        base_nx: 6,
        base_ny: 10,
        max_depth: 1,
        ..qc.clone()
    };
    let tw = target_weight.clone();
    let numer_integrand = move |z: HalfPlanePoint| -> Result<f64> {
        let v = op.apply_detailed(f, z, &inner_qc)?.value;
        Ok((v * tw.eval(z)).powf(q) * z.y().powf(nu2))
    };
    // evaluate on the cartesian mesh by hand to propagate errors; the
    // outer integrand grows at worst logarithmically toward y = 0, so
    // a 2^-12 floor costs well under a percent of the mass
    let outer_hints =
        CartesianHints { x_refine: vec![], y_floor: Some(outer.y1 * 2f64.powi(-12)) };
    let (xs, ys) = crate::quadrature::cartesian_axes(
        (outer.x0, outer.x1, outer.y0, outer.y1),
        &outer_qc,
        &outer_hints,
    );
    let eval_level = |level: u32| -> Result<f64> {
        let xs = xs.refined(level);
        let ys = ys.refined(level);
        let (nodes, weights) = crate::special::gauss_legendre(4);
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
                let mut acc = crate::special::CompensatedSum::new();
                for (xi, wx) in nodes.iter().zip(weights) {
                    for (yi, wy) in nodes.iter().zip(weights) {
                        let z = HalfPlanePoint::new(cx + hx * xi, cy + hy * yi)
                            .map_err(|_| Error::NonFiniteSample { x: cx, y: cy })?;
                        acc.add(wx * wy * numer_integrand(z)?);
                    }
                }
                Ok(acc.value() * hx * hy)
            })
            .collect();
        let mut total = crate::special::CompensatedSum::new();
        for p in partials {
            total.add(p?);
        }
        Ok(total.value())
    };
    let numer = refine_to_tolerance(eval_level, &outer_qc, 0.0)?;
    Ok(numer.value.powf(1.0 / q) / denom.powf(1.0 / p))
}

/// Convenience wrapper using the quadrature truncation as the region,
/// with the boundary floor of the mesh.
#[allow(clippy::too_many_arguments)]
pub fn norm_ratio(
    op: &OperatorSpec,
    f: &SymbolicFunction,
    p: f64,
    q: f64,
    source_weight: &SymbolicFunction,
    target_weight: &SymbolicFunction,
    nu1: f64,
    nu2: f64,
    qc: &QuadratureConfig,
) -> Result<f64> {
    let outer = Rect::new(qc.x_range.0, qc.x_range.1, 0.0, qc.y_max)?;
    norm_ratio_on_region(op, f, p, q, source_weight, target_weight, nu1, nu2, &outer, qc)
}

/// Result of checking M_{alpha,a} f <= S_{alpha,a} |f| at sample
/// points.
#[derive(Debug, Clone)]
pub struct MinorizationReport {
    pub samples: usize,
    pub max_ratio: f64,
    /// points where M exceeds S beyond the relative slack
    pub violations: Vec<(f64, f64, f64)>,
}

impl MinorizationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the unweighted fractional maximal function against the
/// fractional operator pointwise on seeded random samples.
#[allow(clippy::too_many_arguments)]
pub fn maximal_minorization_check(
    f: &SymbolicFunction,
    alpha: f64,
    a: f64,
    grid: &crate::dyadic::TruncatedGrid,
    region: &Rect,
    samples: usize,
    seed: u64,
    qc: &QuadratureConfig,
) -> Result<MinorizationReport> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<HalfPlanePoint> = (0..samples)
        .map(|_| {
            let x = rng.gen_range(region.x0..region.x1);
            // log-uniform heights exercise every scale
            let ln_lo = region.y0.max(1e-6).ln();
            let ln_hi = region.y1.ln();
            let y = (ln_lo + rng.gen::<f64>() * (ln_hi - ln_lo)).exp();
            HalfPlanePoint::new(x, y).expect("sampled in the half-plane")
        })
        .collect();
    let maximal = crate::dyadic::FractionalMaximal::new(grid.clone(), alpha, a)?;
    let m_vals = maximal.apply_many(f, &SymbolicFunction::one(), &points, qc)?;
    let op = OperatorSpec::FractionalS { alpha, a };
    let s_vals: Vec<Result<f64>> =
        points.par_iter().map(|&z| op.apply(f, z, qc)).collect();
    let mut max_ratio: f64 = 0.0;
    let mut violations = Vec::new();
    for (z, (m, s)) in points.iter().zip(m_vals.iter().zip(s_vals)) {
        let s = s?;
        if *m == 0.0 && s == 0.0 {
            continue;
        }
        let ratio = m / s;
        max_ratio = max_ratio.max(ratio);
        if *m > s * (1.0 + 1e-6) {
            violations.push((z.x(), z.y(), ratio));
        }
    }
    Ok(MinorizationReport { samples, max_ratio, violations })
}
