//! The two dyadic grid systems D^0 and D^{1/3}, the dyadic model
//! operators built from box kernels, and fractional dyadic maximal
//! functions.
//!
//! An index (j, m, beta) names the interval 2^j([0,1) + m + (-1)^j beta).
//! Only the shifts beta in {0, 1/3} appear: together their boxes
//! dominate the continuous kernel pointwise, which is what the model
//! operators are for.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{CarlesonBox, HalfPlanePoint, Interval, Rect, Tent};
use crate::norms::weighted_region_measure;
use crate::quadrature::{IntegrationRegion, QuadratureConfig};
use crate::special::CompensatedSum;
use crate::symbolic::SymbolicFunction;

/// Grid shift tag: the two translated dyadic systems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GridShift {
    Zero,
    Third,
}

impl GridShift {
    pub fn offset(&self) -> f64 {
        match self {
            GridShift::Zero => 0.0,
            GridShift::Third => 1.0 / 3.0,
        }
    }

    pub const BOTH: [GridShift; 2] = [GridShift::Zero, GridShift::Third];
}

impl std::fmt::Display for GridShift {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GridShift::Zero => write!(f, "0"),
            GridShift::Third => write!(f, "1/3"),
        }
    }
}

/// A single grid element: scale j, position m, shift tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DyadicIndex {
    pub j: i32,
    pub m: i64,
    pub beta: GridShift,
}

/// The interval 2^j([0,1) + m + (-1)^j beta).
pub fn interval_of(idx: &DyadicIndex) -> Interval {
    let len = 2f64.powi(idx.j);
    let sign = if idx.j.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let left = len * (idx.m as f64 + sign * idx.beta.offset());
    Interval::new(left, len).expect("dyadic interval has positive length")
}

/// A finite window of one grid: scales j in [j_min, j_max], positions
/// whose intervals meet the bounding interval.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedGrid {
    pub beta: GridShift,
    pub j_min: i32,
    pub j_max: i32,
    pub bound: Interval,
}

impl TruncatedGrid {
    pub fn new(beta: GridShift, j_min: i32, j_max: i32, bound: Interval) -> Result<Self> {
        if j_min > j_max {
            return Err(Error::invalid(format!("scale range [{j_min}, {j_max}] is empty")));
        }
        Ok(TruncatedGrid { beta, j_min, j_max, bound })
    }

    /// Default window: scales 2^-14 .. 2^7, positions within |x| <= 256.
    pub fn standard(beta: GridShift) -> Self {
        TruncatedGrid {
            beta,
            j_min: -14,
            j_max: 7,
            bound: Interval::new(-256.0, 512.0).expect("positive length"),
        }
    }

    fn sign(&self, j: i32) -> f64 {
        if j.rem_euclid(2) == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// Position index of the interval at scale j containing x, if its
    /// interval meets the bounding window.
    fn position_containing(&self, j: i32, x: f64) -> Option<DyadicIndex> {
        let len = 2f64.powi(j);
        let shift = self.sign(j) * self.beta.offset();
        let mut m = (x / len - shift).floor() as i64;
        // guard against rounding at interval endpoints
        for _ in 0..2 {
            let idx = DyadicIndex { j, m, beta: self.beta };
            let i = interval_of(&idx);
            if i.contains(x) {
                return self.bound.intersect(&i).map(|_| idx);
            }
            m += if x >= i.right() { 1 } else { -1 };
        }
        None
    }

    /// Exactly the members whose Carleson boxes intersect the region,
    /// sorted by (j, m).
    pub fn members_in(&self, region: &Rect) -> Vec<DyadicIndex> {
        let mut out = Vec::new();
        for j in self.j_min..=self.j_max {
            let len = 2f64.powi(j);
            if region.y0 >= len {
                continue; // box tops out below the region
            }
            let shift = self.sign(j) * self.beta.offset();
            let x_lo = region.x0.max(self.bound.left());
            let x_hi = region.x1.min(self.bound.right());
            if x_lo >= x_hi {
                continue;
            }
            let m_lo = (x_lo / len - shift).floor() as i64 - 1;
            let m_hi = (x_hi / len - shift).ceil() as i64 + 1;
            for m in m_lo..=m_hi {
                let idx = DyadicIndex { j, m, beta: self.beta };
                let i = interval_of(&idx);
                let meets_region = i.left() < x_hi && i.right() > x_lo;
                if meets_region {
                    out.push(idx);
                }
            }
        }
        out.sort();
        out
    }

    /// Members whose boxes contain z (at most one per scale), smallest
    /// scale first.
    pub fn containing(&self, z: HalfPlanePoint) -> Vec<DyadicIndex> {
        let mut out = Vec::new();
        for j in self.j_min..=self.j_max {
            let len = 2f64.powi(j);
            if len <= z.y() {
                continue; // box height 2^j must exceed y
            }
            if let Some(idx) = self.position_containing(j, z.x()) {
                out.push(idx);
            }
        }
        out
    }

    /// The unique grid tent containing z, if the scale window covers
    /// its height.
    pub fn tent_containing(&self, z: HalfPlanePoint) -> Option<DyadicIndex> {
        // tents at scale j hold 2^{j-1} <= y < 2^j
        let j = z.y().log2().floor() as i32 + 1;
        if j < self.j_min || j > self.j_max {
            return None;
        }
        let idx = self.position_containing(j, z.x())?;
        let t = Tent::new(interval_of(&idx));
        t.contains(z).then_some(idx)
    }
}

/// The dyadic model operator sum_I |I|^a <f, 1_{Q_I}/|I|^{2+alpha}>_alpha 1_{Q_I}.
#[derive(Debug, Clone)]
pub struct DyadicModel {
    pub grid: TruncatedGrid,
    pub alpha: f64,
    pub a: f64,
}

impl DyadicModel {
    pub fn new(grid: TruncatedGrid, alpha: f64, a: f64) -> Result<Self> {
        if !(alpha > -1.0) {
            return Err(Error::NonIntegrableMeasure { alpha });
        }
        Ok(DyadicModel { grid, alpha, a })
    }

    fn box_pairing(
        &self,
        f: &SymbolicFunction,
        idx: &DyadicIndex,
        qc: &QuadratureConfig,
    ) -> Result<f64> {
        let region = IntegrationRegion::Box(CarlesonBox::new(interval_of(idx)));
        Ok(weighted_region_measure(&region, f, self.alpha, qc)?.value)
    }

    /// Evaluates the finite-grid partial sum at several points,
    /// computing each box pairing once.
    pub fn apply_many(
        &self,
        f: &SymbolicFunction,
        points: &[HalfPlanePoint],
        qc: &QuadratureConfig,
    ) -> Result<Vec<f64>> {
        let chains: Vec<Vec<DyadicIndex>> =
            points.iter().map(|&z| self.grid.containing(z)).collect();
        let mut needed: Vec<DyadicIndex> = chains.iter().flatten().copied().collect();
        needed.sort();
        needed.dedup();
        let pairings: Vec<Result<f64>> = needed
            .par_iter()
            .map(|idx| self.box_pairing(f, idx, qc))
            .collect();
        let mut table: HashMap<DyadicIndex, f64> = HashMap::with_capacity(needed.len());
        for (idx, val) in needed.iter().zip(pairings) {
            table.insert(*idx, val?);
        }
        Ok(chains
            .iter()
            .map(|chain| {
                let mut acc = CompensatedSum::new();
                for idx in chain {
                    let len = interval_of(idx).length();
                    let pairing = table[idx];
                    acc.add(len.powf(self.a - 2.0 - self.alpha) * pairing);
                }
                acc.value()
            })
            .collect())
    }

    pub fn apply(
        &self,
        f: &SymbolicFunction,
        z: HalfPlanePoint,
        qc: &QuadratureConfig,
    ) -> Result<f64> {
        Ok(self.apply_many(f, &[z], qc)?[0])
    }

    /// The pairing <Q f, g>_alpha, expanded by linearity over the grid:
    /// sum_I |I|^{a-2-alpha} <f, 1_{Q_I}>_alpha <1_{Q_I}, g>_alpha.
    ///
    /// The grouping multiplies f's pairing by the coefficient first, so
    /// <Q f, g> and <Q g, f> run through genuinely different floating
    /// point paths.
    pub fn pairing_with(
        &self,
        f: &SymbolicFunction,
        g: &SymbolicFunction,
        qc: &QuadratureConfig,
    ) -> Result<f64> {
        let support = |h: &SymbolicFunction| -> Option<(f64, f64)> {
            let nf = h.normal_form();
            match (nf.x_cut, nf.radius_cut) {
                (Some((a, b)), Some(r)) => Some((a.max(-r), b.min(r))),
                (Some((a, b)), None) => Some((a, b)),
                (None, Some(r)) => Some((-r, r)),
                (None, None) => None,
            }
        };
        let (fx, gx) = (support(f), support(g));
        let overlap = match (fx, gx) {
            (Some((a, b)), Some((c, d))) => (a.max(c), b.min(d)),
            (Some(ab), None) | (None, Some(ab)) => ab,
            (None, None) => (self.grid.bound.left(), self.grid.bound.right()),
        };
        if !(overlap.0 < overlap.1) {
            return Ok(0.0);
        }
        // every box whose base meets both supports
        let region = Rect::new(overlap.0, overlap.1, 0.0, f64::INFINITY)
            .unwrap_or(Rect { x0: overlap.0, x1: overlap.1, y0: 0.0, y1: f64::MAX });
        let members = self.grid.members_in(&region);
        let terms: Vec<Result<f64>> = members
            .par_iter()
            .map(|idx| {
                let len = interval_of(idx).length();
                let fu = self.box_pairing(f, idx, qc)?;
                if fu == 0.0 {
                    return Ok(0.0);
                }
                let gv = self.box_pairing(g, idx, qc)?;
                Ok((len.powf(self.a - 2.0 - self.alpha) * fu) * gv)
            })
            .collect();
        let mut acc = CompensatedSum::new();
        for t in terms {
            acc.add(t?);
        }
        Ok(acc.value())
    }
}

/// Spec-level convenience wrapper around [`DyadicModel::apply`].
pub fn dyadic_model_apply(
    f: &SymbolicFunction,
    alpha: f64,
    a: f64,
    grid: &TruncatedGrid,
    z: HalfPlanePoint,
    qc: &QuadratureConfig,
) -> Result<f64> {
    DyadicModel::new(grid.clone(), alpha, a)?.apply(f, z, qc)
}

/// The fractional dyadic maximal function
/// sup_I 1_{Q_I} |Q_I|_{w,alpha}^{-(1-a/(2+alpha))} ∫_{Q_I} |f| w dV_alpha
/// over one truncated grid.
#[derive(Debug, Clone)]
pub struct FractionalMaximal {
    pub grid: TruncatedGrid,
    pub alpha: f64,
    pub a: f64,
}

impl FractionalMaximal {
    pub fn new(grid: TruncatedGrid, alpha: f64, a: f64) -> Result<Self> {
        if !(alpha > -1.0) {
            return Err(Error::NonIntegrableMeasure { alpha });
        }
        Ok(FractionalMaximal { grid, alpha, a })
    }

    pub fn apply_many(
        &self,
        f: &SymbolicFunction,
        w: &SymbolicFunction,
        points: &[HalfPlanePoint],
        qc: &QuadratureConfig,
    ) -> Result<Vec<f64>> {
        let exponent = 1.0 - self.a / (2.0 + self.alpha);
        let chains: Vec<Vec<DyadicIndex>> =
            points.iter().map(|&z| self.grid.containing(z)).collect();
        let mut needed: Vec<DyadicIndex> = chains.iter().flatten().copied().collect();
        needed.sort();
        needed.dedup();
        let fw = f.times(w);
        let quotients: Vec<Result<f64>> = needed
            .par_iter()
            .map(|idx| {
                let region = IntegrationRegion::Box(CarlesonBox::new(interval_of(idx)));
                let denom = weighted_region_measure(&region, w, self.alpha, qc)?.value;
                if !(denom > 0.0) || !denom.is_finite() {
                    return Err(Error::DegenerateAverage {
                        reason: format!("weighted measure {denom} on box {idx:?}"),
                    });
                }
                let numer = weighted_region_measure(&region, &fw, self.alpha, qc)?.value;
                Ok(numer / denom.powf(exponent))
            })
            .collect();
        let mut table: HashMap<DyadicIndex, f64> = HashMap::with_capacity(needed.len());
        for (idx, val) in needed.iter().zip(quotients) {
            table.insert(*idx, val?);
        }
        Ok(chains
            .iter()
            .map(|chain| chain.iter().map(|idx| table[idx]).fold(0.0, f64::max))
            .collect())
    }

    pub fn apply(
        &self,
        f: &SymbolicFunction,
        w: &SymbolicFunction,
        z: HalfPlanePoint,
        qc: &QuadratureConfig,
    ) -> Result<f64> {
        Ok(self.apply_many(f, w, &[z], qc)?[0])
    }
}

/// Findings of a tent tiling check.
#[derive(Debug, Clone)]
pub struct TilingReport {
    pub samples: usize,
    pub violations: Vec<TilingViolation>,
}

#[derive(Debug, Clone, Copy)]
pub struct TilingViolation {
    pub x: f64,
    pub y: f64,
    pub tent_count: usize,
}

impl TilingReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Samples points in the region and counts, by exhaustive enumeration
/// over the grid's scales, how many tents contain each; a tiling has
/// exactly one.
pub fn tent_tiling_check(
    grid: &TruncatedGrid,
    region: &Rect,
    samples: usize,
    seed: u64,
) -> TilingReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = Vec::new();
    for _ in 0..samples {
        let x = rng.gen_range(region.x0..region.x1);
        let y = rng.gen_range(region.y0.max(f64::MIN_POSITIVE)..region.y1);
        let z = HalfPlanePoint::new(x, y).expect("sampled inside the half-plane");
        let mut count = 0usize;
        for j in grid.j_min..=grid.j_max {
            let len = 2f64.powi(j);
            if !(0.5 * len <= y && y < len) {
                continue;
            }
            // scan neighboring positions to be safe against rounding
            let shift = grid.sign(j) * grid.beta.offset();
            let m0 = (x / len - shift).floor() as i64;
            for m in (m0 - 1)..=(m0 + 1) {
                let idx = DyadicIndex { j, m, beta: grid.beta };
                if Tent::new(interval_of(&idx)).contains(z) {
                    count += 1;
                }
            }
        }
        if count != 1 {
            violations.push(TilingViolation { x, y, tent_count: count });
        }
    }
    TilingReport { samples, violations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn qc() -> QuadratureConfig {
        QuadratureConfig { tolerance: 1e-9, ..QuadratureConfig::default() }
    }

    fn pt(x: f64, y: f64) -> HalfPlanePoint {
        HalfPlanePoint::new(x, y).unwrap()
    }

    #[test]
    fn interval_of_examples() {
        let i = interval_of(&DyadicIndex { j: 0, m: 3, beta: GridShift::Zero });
        assert_eq!((i.left(), i.right()), (3.0, 4.0));
        let i2 = interval_of(&DyadicIndex { j: 1, m: 0, beta: GridShift::Third });
        assert!((i2.left() - (-2.0 / 3.0)).abs() < 1e-15);
        assert!((i2.right() - (4.0 / 3.0)).abs() < 1e-15);
        let i3 = interval_of(&DyadicIndex { j: -1, m: 0, beta: GridShift::Third });
        assert!((i3.left() - (-1.0 / 6.0)).abs() < 1e-15);
        assert!((i3.right() - (1.0 / 3.0)).abs() < 1e-15);
    }

    #[test]
    fn members_enumeration_matches_examples() {
        let grid = TruncatedGrid::new(
            GridShift::Zero,
            0,
            1,
            Interval::new(-64.0, 128.0).unwrap(),
        )
        .unwrap();
        let region = Rect::new(0.0, 2.0, 0.0, 2.0).unwrap();
        let members = grid.members_in(&region);
        let intervals: Vec<(f64, f64)> = members
            .iter()
            .map(|i| {
                let iv = interval_of(i);
                (iv.left(), iv.right())
            })
            .collect();
        assert_eq!(intervals, vec![(0.0, 1.0), (1.0, 2.0), (0.0, 2.0)]);

        let grid3 = TruncatedGrid::new(
            GridShift::Third,
            0,
            0,
            Interval::new(-64.0, 128.0).unwrap(),
        )
        .unwrap();
        let region3 = Rect::new(0.0, 1.0, 0.0, 1.0).unwrap();
        let ms: Vec<i64> = grid3.members_in(&region3).iter().map(|i| i.m).collect();
        assert_eq!(ms, vec![-1, 0]);
    }

    #[test]
    fn geometric_series_value_of_model_operator() {
        // f = 1_{Q_[0,1)}, alpha = 0, a = 0, z = (0.5, 0.5):
        // containing boxes [0, 2^k), inner products all 1, terms 4^{-k}
        let grid = TruncatedGrid::new(
            GridShift::Zero,
            -5,
            31,
            Interval::new(-260.0, 2100000000.0).unwrap(),
        )
        .unwrap();
        let f = SymbolicFunction::box_indicator(Interval::new(0.0, 1.0).unwrap());
        let model = DyadicModel::new(grid.clone(), 0.0, 0.0).unwrap();
        let v = model.apply(&f, pt(0.5, 0.5), &qc()).unwrap();
        let oracle: f64 = (0..=30).map(|k| 0.25f64.powi(k)).sum();
        assert!((v - oracle).abs() < 1e-7, "got {v}, oracle {oracle}");
        // a = 1: terms 2^k 4^{-k} = 2^{-k}
        let model1 = DyadicModel::new(grid, 0.0, 1.0).unwrap();
        let v1 = model1.apply(&f, pt(0.5, 0.5), &qc()).unwrap();
        let oracle1: f64 = (0..=30).map(|k| 0.5f64.powi(k)).sum();
        assert!((v1 - oracle1).abs() < 1e-7, "got {v1}, oracle {oracle1}");
    }

    #[test]
    fn point_above_all_boxes_gives_zero() {
        let grid = TruncatedGrid::new(GridShift::Zero, -4, 3, Interval::new(-64.0, 128.0).unwrap())
            .unwrap();
        let f = SymbolicFunction::box_indicator(Interval::new(0.0, 1.0).unwrap());
        let model = DyadicModel::new(grid, 0.0, 0.0).unwrap();
        let v = model.apply(&f, pt(0.5, 9.0), &qc()).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn maximal_function_examples() {
        let grid = TruncatedGrid::standard(GridShift::Zero);
        let one = SymbolicFunction::one();
        let f = SymbolicFunction::box_indicator(Interval::new(0.0, 1.0).unwrap());
        // a = 0: averages of an indicator never exceed 1, and the unit
        // box attains 1
        let m0 = FractionalMaximal::new(grid.clone(), 0.0, 0.0).unwrap();
        let v = m0.apply(&f, &one, pt(0.5, 0.5), &qc()).unwrap();
        assert!((v - 1.0).abs() < 1e-7, "got {v}");
        // constant f: every average is that constant
        let c = SymbolicFunction::Scalar(2.5);
        let vc = m0.apply(&c, &one, pt(-3.0, 0.25), &qc()).unwrap();
        assert!((vc - 2.5).abs() < 1e-7, "got {vc}");
        // a = 1: quotient 2^{-k} over box [0, 2^k), max 1 at k = 0
        let m1 = FractionalMaximal::new(grid, 0.0, 1.0).unwrap();
        let v1 = m1.apply(&f, &one, pt(0.5, 0.5), &qc()).unwrap();
        assert!((v1 - 1.0).abs() < 1e-7, "got {v1}");
    }

    #[test]
    fn tent_membership_spec_points() {
        let grid = TruncatedGrid::standard(GridShift::Zero);
        let idx = grid.tent_containing(pt(0.3, 0.6)).unwrap();
        assert_eq!((idx.j, idx.m), (0, 0));
        let idx2 = grid.tent_containing(pt(0.3, 0.4)).unwrap();
        assert_eq!((idx2.j, idx2.m), (-1, 0));
    }

    #[test]
    fn tiling_check_clean_on_both_grids() {
        let region = Rect::new(-4.0, 4.0, 0.01, 7.9).unwrap();
        for beta in GridShift::BOTH {
            let grid = TruncatedGrid::standard(beta);
            let report = tent_tiling_check(&grid, &region, 2000, 7);
            assert!(report.ok(), "beta={beta}: {:?}", report.violations);
        }
    }

    #[test]
    fn tiling_check_reports_coverage_gaps() {
        // scales too coarse for the sampled heights: zero tents
        let grid =
            TruncatedGrid::new(GridShift::Zero, 5, 7, Interval::new(-64.0, 128.0).unwrap())
                .unwrap();
        let region = Rect::new(0.0, 1.0, 0.001, 0.01).unwrap();
        let report = tent_tiling_check(&grid, &region, 50, 3);
        assert_eq!(report.violations.len(), 50);
        assert!(report.violations.iter().all(|v| v.tent_count == 0));
    }

    #[test]
    fn model_pairing_is_symmetric_for_indicator_pairs() {
        let grid = TruncatedGrid::new(
            GridShift::Third,
            -8,
            5,
            Interval::new(-64.0, 128.0).unwrap(),
        )
        .unwrap();
        let model = DyadicModel::new(grid, 0.5, 0.75).unwrap();
        let f = SymbolicFunction::box_indicator(Interval::new(-0.7, 1.3).unwrap());
        let g = SymbolicFunction::box_indicator(Interval::new(0.4, 2.2).unwrap());
        let left = model.pairing_with(&f, &g, &qc()).unwrap();
        let right = model.pairing_with(&g, &f, &qc()).unwrap();
        assert!(left > 0.0);
        assert!(
            (left - right).abs() <= 1e-10 * left.abs().max(1.0),
            "asymmetry: {left} vs {right}"
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn same_scale_boxes_partition(
            j in -6i32..6,
            m1 in -40i64..40,
            m2 in -40i64..40,
            beta_third in proptest::bool::ANY,
        ) {
            let beta = if beta_third { GridShift::Third } else { GridShift::Zero };
            prop_assume!(m1 != m2);
            let a = interval_of(&DyadicIndex { j, m: m1, beta });
            let b = interval_of(&DyadicIndex { j, m: m2, beta });
            prop_assert!(a.intersect(&b).is_none());
        }

        #[test]
        fn different_scale_boxes_nest_or_miss(
            j1 in -6i32..6,
            j2 in -6i32..6,
            m1 in -40i64..40,
            m2 in -40i64..40,
            beta_third in proptest::bool::ANY,
        ) {
            let beta = if beta_third { GridShift::Third } else { GridShift::Zero };
            prop_assume!(j1 < j2);
            let small = interval_of(&DyadicIndex { j: j1, m: m1, beta });
            let big = interval_of(&DyadicIndex { j: j2, m: m2, beta });
            match small.intersect(&big) {
                None => {}
                Some(common) => {
                    // overlap must be the whole smaller interval
                    prop_assert!((common.left() - small.left()).abs() < 1e-9 * small.length());
                    prop_assert!((common.length() - small.length()).abs() < 1e-9 * small.length());
                }
            }
        }

        #[test]
        fn containing_chain_is_consistent(
            x in -30.0f64..30.0,
            y in 0.001f64..100.0,
            beta_third in proptest::bool::ANY,
        ) {
            let beta = if beta_third { GridShift::Third } else { GridShift::Zero };
            let grid = TruncatedGrid::standard(beta);
            let z = HalfPlanePoint::new(x, y).unwrap();
            let chain = grid.containing(z);
            for idx in &chain {
                let b = CarlesonBox::new(interval_of(idx));
                prop_assert!(b.contains(z), "{idx:?} does not contain ({x}, {y})");
            }
            // one box per admissible scale
            let mut scales: Vec<i32> = chain.iter().map(|i| i.j).collect();
            scales.dedup();
            prop_assert_eq!(scales.len(), chain.len());
        }
    }
}
