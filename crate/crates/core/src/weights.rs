//! Bekolle–Bonami weight classes: exponent bookkeeping, dual weights,
//! box averages and the B_{p,alpha} / B_{p,q,alpha} constants.
//!
//! The supremum over all intervals is replaced by a documented finite
//! search family: dyadic intervals from the two grid systems up to a
//! configurable depth (positions capped near the origin), plus
//! origin-centered intervals with log-spaced lengths. For positively
//! homogeneous weights (pure powers of |z| and y) the per-interval
//! bracket is exactly dilation invariant, so the family collapses to
//! one representative per interval shape at unit scale.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{CarlesonBox, Interval};
use crate::norms::weighted_region_measure;
use crate::quadrature::{IntegrationRegion, QuadratureConfig};
use crate::symbolic::SymbolicFunction;

/// The exponent tuple (p, q, alpha, a) with derived conjugates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentConfig {
    p: f64,
    q: f64,
    alpha: f64,
    a: f64,
}

impl ExponentConfig {
    pub fn new(p: f64, q: f64, alpha: f64, a: f64) -> Result<Self> {
        if !(p > 1.0) || !p.is_finite() {
            return Err(Error::invalid(format!("p must lie in (1, inf), got {p}")));
        }
        if !(q >= p) || !q.is_finite() {
            return Err(Error::invalid(format!("q must lie in [p, inf), got q={q}, p={p}")));
        }
        if !(alpha > -1.0) {
            return Err(Error::NonIntegrableMeasure { alpha });
        }
        if !(0.0 <= a && a < 2.0 + alpha) {
            return Err(Error::invalid(format!(
                "a must lie in [0, 2+alpha) = [0, {}), got {a}",
                2.0 + alpha
            )));
        }
        Ok(ExponentConfig { p, q, alpha, a })
    }

    /// Derives q from the balance relation 1/q = 1/p - a/(2+alpha).
    pub fn balanced(p: f64, alpha: f64, a: f64) -> Result<Self> {
        if !(p > 1.0) {
            return Err(Error::invalid(format!("p must lie in (1, inf), got {p}")));
        }
        let inv_q = 1.0 / p - a / (2.0 + alpha);
        if !(inv_q > 0.0) {
            return Err(Error::invalid(format!(
                "balance relation gives 1/q = {inv_q} <= 0; need p < (2+alpha)/a"
            )));
        }
        ExponentConfig::new(p, 1.0 / inv_q, alpha, a)
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// p' = p/(p-1).
    pub fn p_conj(&self) -> f64 {
        self.p / (self.p - 1.0)
    }

    /// q' = q/(q-1).
    pub fn q_conj(&self) -> f64 {
        self.q / (self.q - 1.0)
    }

    /// The fractional gap a/(2+alpha).
    pub fn fractional_gap(&self) -> f64 {
        self.a / (2.0 + self.alpha)
    }

    /// Whether 1/p - 1/q = a/(2+alpha) holds to machine precision.
    pub fn is_balanced(&self) -> bool {
        (1.0 / self.p - 1.0 / self.q - self.fractional_gap()).abs() < 1e-12
    }
}

/// A weight omega with its companions sigma = omega^{-p'} and
/// u = omega^q.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightPair {
    omega: SymbolicFunction,
    sigma: SymbolicFunction,
    u: SymbolicFunction,
}

impl WeightPair {
    pub fn new(omega: SymbolicFunction, cfg: &ExponentConfig) -> Self {
        let sigma = omega.powf(-cfg.p_conj());
        let u = omega.powf(cfg.q());
        WeightPair { omega, sigma, u }
    }

    pub fn omega(&self) -> &SymbolicFunction {
        &self.omega
    }

    pub fn sigma(&self) -> &SymbolicFunction {
        &self.sigma
    }

    pub fn u(&self) -> &SymbolicFunction {
        &self.u
    }
}

/// The finite interval family the supremum is taken over.
#[derive(Debug, Clone)]
pub struct SearchFamily {
    /// dyadic depth: scales 2^j for |j| <= depth
    pub depth: i32,
    /// positions per scale capped to |m| <= position_cap
    pub position_cap: i64,
    /// x-truncation; intervals must meet [-x_extent, x_extent]
    pub x_extent: f64,
    /// origin-centered intervals with log-spaced lengths, count per
    /// decade of length between 2^-depth and 2^depth
    pub centered_per_scale: usize,
}

impl Default for SearchFamily {
    fn default() -> Self {
        SearchFamily { depth: 12, position_cap: 64, x_extent: 64.0, centered_per_scale: 1 }
    }
}

impl SearchFamily {
    pub fn with_depth(depth: i32) -> Self {
        SearchFamily { depth, ..SearchFamily::default() }
    }

    /// Enumerates the family, sorted lexicographically by
    /// (left, length) for deterministic tie-breaking downstream.
    pub fn intervals(&self) -> Vec<Interval> {
        let mut out = Vec::new();
        for j in -self.depth..=self.depth {
            let len = 2f64.powi(j);
            for &beta in &[0.0, 1.0 / 3.0] {
                let shift = if j.rem_euclid(2) == 0 { beta } else { -beta };
                let m_max = (self.x_extent / len).min(self.position_cap as f64) as i64;
                for m in -(m_max + 1)..=m_max {
                    let left = len * (m as f64 + shift);
                    if left.abs() > self.x_extent && (left + len).abs() > self.x_extent {
                        continue;
                    }
                    out.push(Interval::new(left, len).expect("positive dyadic length"));
                }
            }
        }
        for j in -self.depth..=self.depth {
            let len = 2f64.powi(j);
            out.push(Interval::new(-0.5 * len, len).expect("positive length"));
        }
        out.sort_by(|a, b| {
            (a.left(), a.length())
                .partial_cmp(&(b.left(), b.length()))
                .expect("finite interval data")
        });
        out.dedup_by(|a, b| a.left() == b.left() && a.length() == b.length());
        out
    }

    /// The dilation-reduced family for homogeneous weights: one
    /// representative per interval shape, at unit scale.
    pub fn reduced_shapes(&self) -> Vec<Interval> {
        let mut shapes: Vec<f64> = Vec::new();
        let cap = self.position_cap;
        for m in -(cap + 1)..=cap {
            shapes.push(m as f64);
            shapes.push(m as f64 + 1.0 / 3.0);
            shapes.push(m as f64 - 1.0 / 3.0);
        }
        shapes.push(-0.5);
        shapes.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        shapes.dedup();
        shapes
            .into_iter()
            .map(|s| Interval::new(s, 1.0).expect("unit length"))
            .collect()
    }
}

/// A weight-class constant together with the interval attaining it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightConstant {
    pub value: f64,
    pub argmax: Interval,
}

fn box_integral(
    w: &SymbolicFunction,
    i: &Interval,
    alpha: f64,
    qc: &QuadratureConfig,
) -> Result<f64> {
    let region = IntegrationRegion::Box(CarlesonBox::new(*i));
    match weighted_region_measure(&region, w, alpha, qc) {
        Ok(res) => Ok(res.value),
        Err(Error::Divergent { .. }) => Err(Error::WeightNotInClass {
            left: i.left(),
            right: i.right(),
        }),
        Err(e) => Err(e),
    }
}

/// One bracket of the B_{p,q,alpha} product on a single interval:
/// (|I|^{-(2+alpha)} ∫_{Q_I} w^q dV_alpha)
///   (|I|^{-(2+alpha)} ∫_{Q_I} w^{-p'} dV_alpha)^{q/p'}.
pub fn bpq_bracket(
    w: &WeightPair,
    cfg: &ExponentConfig,
    i: &Interval,
    qc: &QuadratureConfig,
) -> Result<f64> {
    let norm = i.length().powf(2.0 + cfg.alpha());
    let u_avg = box_integral(w.u(), i, cfg.alpha(), qc)? / norm;
    let sigma_avg = box_integral(w.sigma(), i, cfg.alpha(), qc)? / norm;
    Ok(u_avg * sigma_avg.powf(cfg.q() / cfg.p_conj()))
}

fn supremum_over<F>(intervals: &[Interval], bracket: F) -> Result<WeightConstant>
where
    F: Fn(&Interval) -> Result<f64> + Sync,
{
    let evals: Vec<Result<f64>> = intervals.par_iter().map(&bracket).collect();
    let mut best: Option<WeightConstant> = None;
    for (i, val) in intervals.iter().zip(evals) {
        let v = val?;
        let better = match &best {
            None => true,
            // strict improvement only: ties keep the lexicographically
            // earlier interval (the list is sorted)
            Some(b) => v > b.value,
        };
        if better {
            best = Some(WeightConstant { value: v, argmax: *i });
        }
    }
    best.ok_or_else(|| Error::invalid("empty search family"))
}

/// [w]_{B_{p,q,alpha}} over the search family. Homogeneous weights use
/// the dilation-reduced family; the bracket value is scale-free for
/// them, so this equals the supremum over all scales of the family.
pub fn bpq_constant(
    w: &WeightPair,
    cfg: &ExponentConfig,
    family: &SearchFamily,
    qc: &QuadratureConfig,
) -> Result<WeightConstant> {
    let intervals = if w.omega().normal_form().is_homogeneous() {
        family.reduced_shapes()
    } else {
        family.intervals()
    };
    supremum_over(&intervals, |i| bpq_bracket(w, cfg, i, qc))
}

/// [w]_{B_{p,alpha}}: (avg of w) (avg of w^{1-p'})^{p-1} over boxes.
pub fn bp_constant(
    w: &SymbolicFunction,
    p: f64,
    alpha: f64,
    family: &SearchFamily,
    qc: &QuadratureConfig,
) -> Result<WeightConstant> {
    if !(p > 1.0) {
        return Err(Error::invalid(format!("p must lie in (1, inf), got {p}")));
    }
    let p_conj = p / (p - 1.0);
    let dual = w.powf(1.0 - p_conj);
    let intervals = if w.normal_form().is_homogeneous() {
        SearchFamily::default().reduced_shapes()
    } else {
        family.intervals()
    };
    supremum_over(&intervals, |i| {
        let norm = i.length().powf(2.0 + alpha);
        let w_avg = box_integral(w, i, alpha, qc)? / norm;
        let dual_avg = box_integral(&dual, i, alpha, qc)? / norm;
        Ok(w_avg * dual_avg.powf(p - 1.0))
    })
}

/// B_{sigma,alpha}(f, Q_I) = (1/|Q_I|_{sigma,alpha}) ∫_{Q_I} f sigma dV_alpha.
pub fn box_average_sigma(
    f: &SymbolicFunction,
    i: &Interval,
    w: &WeightPair,
    alpha: f64,
    qc: &QuadratureConfig,
) -> Result<f64> {
    let denom = box_integral(w.sigma(), i, alpha, qc)?;
    if !(denom > 0.0) || !denom.is_finite() {
        return Err(Error::DegenerateAverage {
            reason: format!("|Q_[{}, {})|_sigma,alpha = {denom}", i.left(), i.right()),
        });
    }
    let numer = box_integral(&f.times(w.sigma()), i, alpha, qc)?;
    Ok(numer / denom)
}

/// B_{u,alpha,a}(g, Q_I) = |Q_I|_{u,alpha}^{-(1-a/(2+alpha))} ∫_{Q_I} g u dV_alpha.
pub fn box_average_u_fractional(
    g: &SymbolicFunction,
    i: &Interval,
    w: &WeightPair,
    cfg: &ExponentConfig,
    qc: &QuadratureConfig,
) -> Result<f64> {
    let denom = box_integral(w.u(), i, cfg.alpha(), qc)?;
    if !(denom > 0.0) || !denom.is_finite() {
        return Err(Error::DegenerateAverage {
            reason: format!("|Q_[{}, {})|_u,alpha = {denom}", i.left(), i.right()),
        });
    }
    let numer = box_integral(&g.times(w.u()), i, cfg.alpha(), qc)?;
    Ok(numer / denom.powf(1.0 - cfg.fractional_gap()))
}
