//! Points, intervals, Carleson boxes and tents over the upper
//! half-plane, together with the exact dV_alpha measures of boxes and
//! tents.
//!
//! Conventions: intervals are half-open [left, left + length); a box
//! Q_I inherits the half-open convention in x and is open in y at both
//! ends (0 < y < |I|); a tent T_I is closed at its lower height and
//! open at the top, so the tents of one dyadic grid tile the
//! half-plane exactly.

use crate::error::{Error, Result};

/// A point z = x + iy with y > 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlanePoint {
    x: f64,
    y: f64,
}

impl HalfPlanePoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(y > 0.0) || !x.is_finite() || !y.is_finite() {
            return Err(Error::invalid(format!(
                "half-plane point needs finite x and y > 0, got ({x}, {y})"
            )));
        }
        Ok(Self { x, y })
    }

    #[inline]
    pub fn x(&self) -> f64 {
        self.x
    }

    /// The height above the boundary, Im z.
    #[inline]
    pub fn y(&self) -> f64 {
        self.y
    }

    /// |z| = sqrt(x^2 + y^2).
    #[inline]
    pub fn modulus(&self) -> f64 {
        self.x.hypot(self.y)
    }

    /// |z - conj(w)|; bounded below by Im z + Im w, so it never
    /// vanishes on H x H.
    #[inline]
    pub fn dist_to_conjugate(&self, w: HalfPlanePoint) -> f64 {
        (self.x - w.x).hypot(self.y + w.y)
    }
}

/// A bounded interval [left, left + length) with length > 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    left: f64,
    length: f64,
}

impl Interval {
    pub fn new(left: f64, length: f64) -> Result<Self> {
        if !(length > 0.0) || !left.is_finite() || !length.is_finite() {
            return Err(Error::invalid(format!(
                "interval needs finite left and length > 0, got left={left}, length={length}"
            )));
        }
        Ok(Self { left, length })
    }

    #[inline]
    pub fn left(&self) -> f64 {
        self.left
    }

    #[inline]
    pub fn right(&self) -> f64 {
        self.left + self.length
    }

    #[inline]
    pub fn length(&self) -> f64 {
        self.length
    }

    #[inline]
    pub fn center(&self) -> f64 {
        self.left + 0.5 * self.length
    }

    #[inline]
    pub fn contains(&self, x: f64) -> bool {
        self.left <= x && x < self.right()
    }

    /// Half-open intersection; `None` when the overlap has zero length.
    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.left.max(other.left);
        let hi = self.right().min(other.right());
        if hi > lo {
            Some(Interval { left: lo, length: hi - lo })
        } else {
            None
        }
    }

    /// Whether the closure [left, right] contains 0; boxes over such
    /// intervals get the polar (origin-centered) integration path.
    pub fn closure_contains_origin(&self) -> bool {
        self.left <= 0.0 && self.right() >= 0.0
    }

    /// Dilation about the origin by lambda > 0.
    pub fn dilate(&self, lambda: f64) -> Interval {
        Interval { left: self.left * lambda, length: self.length * lambda }
    }
}

/// The Carleson box Q_I = {x in I, 0 < y < |I|}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CarlesonBox {
    base: Interval,
}

impl CarlesonBox {
    pub fn new(base: Interval) -> Self {
        Self { base }
    }

    #[inline]
    pub fn base(&self) -> Interval {
        self.base
    }

    #[inline]
    pub fn height(&self) -> f64 {
        self.base.length()
    }

    pub fn contains(&self, z: HalfPlanePoint) -> bool {
        self.base.contains(z.x()) && z.y() > 0.0 && z.y() < self.height()
    }
}

/// The tent T_I, the upper half of Q_I.
///
/// Membership uses |I|/2 <= y < |I|: the upper boundary belongs to the
/// parent tent, which makes the dyadic tent tiling exact pointwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tent {
    base: Interval,
}

impl Tent {
    pub fn new(base: Interval) -> Self {
        Self { base }
    }

    #[inline]
    pub fn base(&self) -> Interval {
        self.base
    }

    pub fn contains(&self, z: HalfPlanePoint) -> bool {
        let h = self.base.length();
        self.base.contains(z.x()) && z.y() >= 0.5 * h && z.y() < h
    }
}

/// An axis-aligned rectangle [x0, x1) x (y0, y1), used as a truncation
/// or search region. y0 = 0 means the region reaches the boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Result<Self> {
        if !(x0 < x1) || !(y0 < y1) || y0 < 0.0 {
            return Err(Error::invalid(format!(
                "rectangle needs x0 < x1 and 0 <= y0 < y1, got [{x0},{x1})x({y0},{y1})"
            )));
        }
        Ok(Self { x0, x1, y0, y1 })
    }

    pub fn contains(&self, z: HalfPlanePoint) -> bool {
        self.x0 <= z.x() && z.x() < self.x1 && self.y0 < z.y() && z.y() < self.y1
    }
}

/// Exact value of |Q_I|_alpha = ∫_{Q_I} y^alpha dx dy = |I|^{2+alpha}/(1+alpha).
pub fn alpha_measure_box(i: &Interval, alpha: f64) -> Result<f64> {
    if !(alpha > -1.0) {
        return Err(Error::NonIntegrableMeasure { alpha });
    }
    Ok(i.length().powf(2.0 + alpha) / (1.0 + alpha))
}

/// Exact value of |T_I|_alpha = |I|^{2+alpha} (1 - 2^{-(1+alpha)})/(1+alpha).
pub fn alpha_measure_tent(i: &Interval, alpha: f64) -> Result<f64> {
    if !(alpha > -1.0) {
        return Err(Error::NonIntegrableMeasure { alpha });
    }
    let l = i.length();
    Ok(l.powf(2.0 + alpha) * (1.0 - 0.5f64.powf(1.0 + alpha)) / (1.0 + alpha))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_points() {
        assert!(HalfPlanePoint::new(0.0, 0.0).is_err());
        assert!(HalfPlanePoint::new(1.0, -2.0).is_err());
        assert!(HalfPlanePoint::new(f64::NAN, 1.0).is_err());
        assert!(HalfPlanePoint::new(0.0, 1e-300).is_ok());
    }

    #[test]
    fn box_measure_closed_forms() {
        let unit = Interval::new(0.0, 1.0).unwrap();
        assert_eq!(alpha_measure_box(&unit, 0.0).unwrap(), 1.0);
        let two = Interval::new(0.0, 2.0).unwrap();
        assert!((alpha_measure_box(&two, 1.0).unwrap() - 4.0).abs() < 1e-15);
        // generic length: L^{2+alpha}/(1+alpha)
        let l = 3.7;
        let i = Interval::new(-1.0, l).unwrap();
        let a = 0.35;
        assert!(
            (alpha_measure_box(&i, a).unwrap() - l.powf(2.0 + a) / (1.0 + a)).abs() < 1e-14
        );
        assert!(alpha_measure_box(&unit, -1.0).is_err());
    }

    #[test]
    fn tent_measure_closed_forms() {
        let unit = Interval::new(0.0, 1.0).unwrap();
        assert!((alpha_measure_tent(&unit, 0.0).unwrap() - 0.5).abs() < 1e-15);
        // ∫_{1/2}^{1} y dy = 3/8
        assert!((alpha_measure_tent(&unit, 1.0).unwrap() - 3.0 / 8.0).abs() < 1e-15);
    }

    #[test]
    fn box_to_tent_ratio_is_exact() {
        for &(left, len, alpha) in
            &[(0.0, 1.0, 0.0), (-3.0, 0.25, 1.5), (2.0, 8.0, -0.5), (1.0, 0.125, 2.0)]
        {
            let i = Interval::new(left, len).unwrap();
            let qb = alpha_measure_box(&i, alpha).unwrap();
            let tt = alpha_measure_tent(&i, alpha).unwrap();
            let expect = 1.0 / (1.0 - 0.5f64.powf(1.0 + alpha));
            assert!((qb / tt - expect).abs() < 1e-12 * expect);
        }
    }

    #[test]
    fn tent_membership_convention() {
        let t = Tent::new(Interval::new(0.0, 1.0).unwrap());
        assert!(t.contains(HalfPlanePoint::new(0.3, 0.6).unwrap()));
        // lower boundary belongs to this tent, upper to the parent
        assert!(t.contains(HalfPlanePoint::new(0.3, 0.5).unwrap()));
        assert!(!t.contains(HalfPlanePoint::new(0.3, 1.0).unwrap()));
        let half = Tent::new(Interval::new(0.0, 0.5).unwrap());
        assert!(half.contains(HalfPlanePoint::new(0.3, 0.4).unwrap()));
        assert!(!t.contains(HalfPlanePoint::new(0.3, 0.4).unwrap()));
    }

    #[test]
    fn box_membership_half_open() {
        let q = CarlesonBox::new(Interval::new(0.0, 1.0).unwrap());
        assert!(q.contains(HalfPlanePoint::new(0.0, 0.5).unwrap()));
        assert!(!q.contains(HalfPlanePoint::new(1.0, 0.5).unwrap()));
        assert!(!q.contains(HalfPlanePoint::new(0.5, 1.0).unwrap()));
    }
}
