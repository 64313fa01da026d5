//! Experiment drivers: the sharpness sweep for the weight-constant
//! exponent, the off-diagonal boundedness/growth classification, and
//! log-log slope fitting.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::Rect;
use crate::norms::integral_dv;
use crate::operators::OperatorSpec;
use crate::quadrature::QuadratureConfig;
use crate::radial::SAppliedRadial;
use crate::schur::OffDiagonalConfig;
use crate::symbolic::SymbolicFunction;
use crate::weights::{bpq_constant, ExponentConfig, SearchFamily, WeightPair};

/// Least-squares line on (log x, log y).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    /// max over points of |y - fit|/fit
    pub max_rel_residual: f64,
}

/// Fits y = exp(intercept) * x^slope. Needs at least three points with
/// distinct positive x and positive y.
pub fn fit_loglog(points: &[(f64, f64)]) -> Result<FitResult> {
    if points.len() < 3 {
        return Err(Error::invalid(format!(
            "log-log fit needs at least 3 points, got {}",
            points.len()
        )));
    }
    for &(x, y) in points {
        if !(x > 0.0 && y > 0.0) {
            return Err(Error::invalid(format!("log-log fit needs positive data, got ({x}, {y})")));
        }
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let n = logs.len() as f64;
    let sx: f64 = logs.iter().map(|p| p.0).sum();
    let sy: f64 = logs.iter().map(|p| p.1).sum();
    let sxx: f64 = logs.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = logs.iter().map(|p| p.0 * p.1).sum();
    let det = n * sxx - sx * sx;
    if det.abs() < 1e-12 * (n * sxx).abs().max(1.0) {
        return Err(Error::invalid("log-log fit needs distinct x values"));
    }
    let slope = (n * sxy - sx * sy) / det;
    let intercept = (sy - slope * sx) / n;
    let max_rel_residual = logs
        .iter()
        .map(|&(lx, ly)| ((ly - (intercept + slope * lx)).exp() - 1.0).abs())
        .fold(0.0, f64::max);
    Ok(FitResult { slope, intercept, max_rel_residual })
}

/// Settings for the sharp-exponent experiment: the weight
/// |z|^{(2+alpha-delta)/p'} against the function
/// |z|^{delta-(2+alpha)} 1_{|z|<=1}, swept over delta.
#[derive(Debug, Clone)]
pub struct SharpnessConfig {
    pub cfg: ExponentConfig,
    pub deltas: Vec<f64>,
    pub qc: QuadratureConfig,
    pub family: SearchFamily,
}

impl SharpnessConfig {
    pub fn new(cfg: ExponentConfig, deltas: Vec<f64>, qc: QuadratureConfig) -> Result<Self> {
        if !cfg.is_balanced() {
            return Err(Error::invalid(
                "sharpness sweep needs the balanced relation 1/p - 1/q = a/(2+alpha)",
            ));
        }
        if cfg.p_conj() < cfg.q() {
            return Err(Error::invalid(format!(
                "sharpness sweep runs in the regime p'/q >= 1, got p' = {} < q = {}",
                cfg.p_conj(),
                cfg.q()
            )));
        }
        if deltas.len() < 3 || deltas.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::invalid("delta list must be decreasing with at least 3 entries"));
        }
        if deltas.iter().any(|&d| !(0.0 < d && d < 1.0)) {
            return Err(Error::invalid("every delta must lie in (0, 1)"));
        }
        Ok(SharpnessConfig { cfg, deltas, qc, family: SearchFamily::default() })
    }

    pub fn standard(cfg: ExponentConfig, qc: QuadratureConfig) -> Result<Self> {
        SharpnessConfig::new(cfg, vec![0.4, 0.2, 0.1, 0.05], qc)
    }
}

/// One row of the sharpness table.
#[derive(Debug, Clone, Copy)]
pub struct SharpnessRow {
    pub delta: f64,
    pub weight_constant: f64,
    pub source_norm: f64,
    pub image_norm: f64,
    pub ratio: f64,
}

/// The sharpness table with its three fitted slopes (in log(1/delta)).
#[derive(Debug, Clone)]
pub struct SharpnessOutcome {
    pub rows: Vec<SharpnessRow>,
    pub weight_fit: FitResult,
    pub source_fit: FitResult,
    pub ratio_fit: FitResult,
}

impl SharpnessOutcome {
    /// Expected slope of the weight constant: q/p'.
    pub fn expected_weight_slope(cfg: &ExponentConfig) -> f64 {
        cfg.q() / cfg.p_conj()
    }

    /// Expected slope of the source norm: 1/p.
    pub fn expected_source_slope(cfg: &ExponentConfig) -> f64 {
        1.0 / cfg.p()
    }

    /// The sharp ratio exponent 1/p' + 1/q.
    pub fn sharp_ratio_slope(cfg: &ExponentConfig) -> f64 {
        1.0 / cfg.p_conj() + 1.0 / cfg.q()
    }
}

/// Runs the sharpness experiment: per delta, the weight constant, the
/// source norm ‖f‖_{L^p(omega^p dV_alpha)}, and the image norm
/// ‖S_{alpha,a} f‖_{L^q(omega^q dV_alpha)}, then fits the three
/// log-log slopes against 1/delta.
pub fn sharpness_run(sc: &SharpnessConfig) -> Result<SharpnessOutcome> {
    let cfg = &sc.cfg;
    let two_alpha = 2.0 + cfg.alpha();
    let rows: Vec<Result<SharpnessRow>> = sc
        .deltas
        .par_iter()
        .map(|&delta| {
            let omega_exp = (two_alpha - delta) / cfg.p_conj();
            let omega = SymbolicFunction::modulus_power(omega_exp);
            let pair = WeightPair::new(omega.clone(), cfg);
            let weight_constant = bpq_constant(&pair, cfg, &sc.family, &sc.qc)?.value;
            // source norm: |f omega|^p collapses to |z|^{delta-2-alpha},
            // integrated exactly over the unit half-disk
            let f = SymbolicFunction::truncated_power(delta - two_alpha, 1.0)?;
            let weighted = f.times(&omega).powf(cfg.p());
            let source_norm =
                integral_dv(&weighted, cfg.alpha(), &sc.qc)?.value.powf(1.0 / cfg.p());
            // image norm via the radial fast path
            let ev = SAppliedRadial::new(cfg.alpha(), cfg.a(), delta - two_alpha, 1.0, 1.0)?;
            let image_norm = ev.weighted_norm(
                cfg.q(),
                omega_exp * cfg.q(),
                cfg.alpha(),
                &sc.qc.with_tolerance(sc.qc.tolerance.max(1e-5)),
            )?;
            Ok(SharpnessRow {
                delta,
                weight_constant,
                source_norm,
                image_norm,
                ratio: image_norm / source_norm,
            })
        })
        .collect();
    let rows: Result<Vec<SharpnessRow>> = rows.into_iter().collect();
    let rows = rows?;
    let against_inv_delta = |get: &dyn Fn(&SharpnessRow) -> f64| -> Vec<(f64, f64)> {
        rows.iter().map(|r| (1.0 / r.delta, get(r))).collect()
    };
    Ok(SharpnessOutcome {
        weight_fit: fit_loglog(&against_inv_delta(&|r| r.weight_constant))?,
        source_fit: fit_loglog(&against_inv_delta(&|r| r.source_norm))?,
        ratio_fit: fit_loglog(&against_inv_delta(&|r| r.ratio))?,
        rows,
    })
}

/// Classification of one off-diagonal configuration.
#[derive(Debug, Clone)]
pub struct OffDiagRow {
    pub cfg: OffDiagonalConfig,
    pub admissible: bool,
    /// norm ratios across the three nested truncations
    pub ratios: [f64; 3],
    /// ratio varies by < 10% across truncations
    pub stable: bool,
    /// ratio at least doubles from first to last truncation
    pub growing: bool,
}

/// Sweeps off-diagonal configurations, classifying each as stable or
/// growing under truncation refinement toward the boundary.
///
/// The witness function is v^c 1_{Q_{[0,1)}} with c slightly above the
/// source-integrability threshold -(1+alpha)/p: under the scaling
/// relation for b, enlarging the region at the top cannot distinguish
/// the admissible from the inadmissible side, but refining the
/// boundary floor does, because the admissibility condition
/// alpha + 1 < p(a+1) is exactly source-side boundary integrability.
pub fn offdiag_sweep(configs: &[OffDiagonalConfig], qc: &QuadratureConfig) -> Result<Vec<OffDiagRow>> {
    configs
        .iter()
        .map(|cfg| {
            let admissible = cfg.admissible();
            let margin = cfg.boundary_margin();
            // eta keeps the witness p-integrable; for inadmissible
            // configs half the deficit survives and the image grows
            let eta = if admissible { 0.3 } else { (0.5 * margin.abs()).min(0.3) };
            let c = -(1.0 + cfg.alpha_src()) / cfg.p() + eta;
            let witness = SymbolicFunction::height_power(c).times(
                &SymbolicFunction::box_indicator(crate::geometry::Interval::new(0.0, 1.0)?),
            );
            let op = OperatorSpec::GeneralTPlus { a: cfg.a(), b: cfg.b() };
            let one = SymbolicFunction::one();
            let mut ratios = [0.0; 3];
            for (k, floor_octaves) in [8i32, 18, 28].into_iter().enumerate() {
                let outer = Rect::new(
                    qc.x_range.0,
                    qc.x_range.1,
                    qc.y_max * 2f64.powi(-floor_octaves),
                    qc.y_max,
                )?;
                ratios[k] = crate::operators::norm_ratio_on_region(
                    &op,
                    &witness,
                    cfg.p(),
                    cfg.q(),
                    &one,
                    &one,
                    cfg.alpha_src(),
                    cfg.beta_tgt(),
                    &outer,
                    qc,
                )?;
            }
            let spread = ratios
                .iter()
                .fold((f64::INFINITY, 0.0f64), |(lo, hi), &r| (lo.min(r), hi.max(r)));
            let stable = spread.1 <= 1.10 * spread.0;
            let growing = ratios[2] >= 2.0 * ratios[0];
            Ok(OffDiagRow { cfg: *cfg, admissible, ratios, stable, growing })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loglog_fit_exact_power() {
        let pts = [(1.0, 1.0), (2.0, 4.0), (4.0, 16.0)];
        let fit = fit_loglog(&pts).unwrap();
        assert!((fit.slope - 2.0).abs() < 1e-12);
        assert!(fit.max_rel_residual < 1e-12);
    }

    #[test]
    fn loglog_fit_constant() {
        let pts = [(1.0, 5.0), (2.0, 5.0), (4.0, 5.0), (8.0, 5.0)];
        let fit = fit_loglog(&pts).unwrap();
        assert!(fit.slope.abs() < 1e-12);
        assert!((fit.intercept - 5f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn loglog_fit_with_synthetic_noise() {
        // y = x^{-1.5} with +-1% multiplicative noise (fixed pattern)
        let noise = [1.01, 0.99, 1.008, 0.994, 1.002];
        let pts: Vec<(f64, f64)> = (0..5)
            .map(|i| {
                let x = 2f64.powi(i);
                (x, x.powf(-1.5) * noise[i as usize])
            })
            .collect();
        let fit = fit_loglog(&pts).unwrap();
        assert!((fit.slope + 1.5).abs() < 0.05, "slope {}", fit.slope);
        assert!(fit.max_rel_residual < 0.02);
    }

    #[test]
    fn loglog_fit_input_errors() {
        assert!(fit_loglog(&[(1.0, 1.0), (2.0, 2.0)]).is_err());
        assert!(fit_loglog(&[(1.0, 1.0), (1.0, 2.0), (1.0, 3.0)]).is_err());
        assert!(fit_loglog(&[(1.0, 1.0), (2.0, -2.0), (3.0, 3.0)]).is_err());
    }

    #[test]
    fn sharpness_config_validation() {
        let qc = QuadratureConfig::default();
        let cfg = ExponentConfig::new(2.0, 2.0, 0.0, 0.0).unwrap();
        assert!(SharpnessConfig::standard(cfg, qc.clone()).is_ok());
        // p = 2, q = 4 balanced has p'/q = 1/2 < 1: outside the regime
        let unbalanced = ExponentConfig::balanced(2.0, 0.0, 0.5).unwrap();
        assert!(SharpnessConfig::standard(unbalanced, qc.clone()).is_err());
        // increasing delta list rejected
        assert!(SharpnessConfig::new(cfg, vec![0.1, 0.2, 0.4], qc).is_err());
    }
}
