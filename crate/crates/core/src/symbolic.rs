//! The closed-form function family on the half-plane.
//!
//! Every weight and test function in the toolkit is a finite product
//! drawn from this family, so pointwise evaluation is exact and each
//! function carries enough structure for the integrators to pick
//! closed-form or polar fast paths and to reason about decay.
//!
//! # Textual grammar
//!
//! A descriptor serializes to a `*`-separated product of factors:
//!
//! ```text
//! factor := <number>                  -- constant
//!         | modpow(s)                 -- |z|^s
//!         | heightpow(s)              -- y^s
//!         | truncpow(s, R)            -- |z|^s on {|z| <= R}, 0 outside
//!         | kernelpow(t, g)           -- |z + it|^{-g} = (x^2+(y+t)^2)^{-g/2}, t > 0
//!         | boxind(left, length)      -- indicator of the Carleson box over [left, left+length)
//! ```
//!
//! `parse` accepts any whitespace around factors; `to_string` emits the
//! canonical form, and parsing it back reproduces the descriptor
//! exactly (floats round-trip through shortest decimal).

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geometry::{HalfPlanePoint, Interval};

#[derive(Debug, Clone, PartialEq)]
pub enum SymbolicFunction {
    /// Constant c >= 0.
    Scalar(f64),
    /// |z|^s.
    PowerOfModulus { exponent: f64 },
    /// y^s.
    PowerOfHeight { exponent: f64 },
    /// |z|^s restricted to {|z| <= radius}.
    TruncatedPower { exponent: f64, radius: f64 },
    /// |(z + it)/i|^{-gamma} = (x^2 + (y+t)^2)^{-gamma/2}, shift t > 0.
    ShiftedKernelPower { shift: f64, exponent: f64 },
    /// Indicator of the Carleson box Q_I.
    BoxIndicator(Interval),
    Product(Vec<SymbolicFunction>),
}

impl SymbolicFunction {
    pub fn one() -> Self {
        SymbolicFunction::Scalar(1.0)
    }

    pub fn constant(c: f64) -> Result<Self> {
        if !c.is_finite() || c < 0.0 {
            return Err(Error::invalid(format!("scalar factor must be finite and >= 0, got {c}")));
        }
        Ok(SymbolicFunction::Scalar(c))
    }

    pub fn modulus_power(exponent: f64) -> Self {
        SymbolicFunction::PowerOfModulus { exponent }
    }

    pub fn height_power(exponent: f64) -> Self {
        SymbolicFunction::PowerOfHeight { exponent }
    }

    pub fn truncated_power(exponent: f64, radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::invalid(format!("truncation radius must be > 0, got {radius}")));
        }
        Ok(SymbolicFunction::TruncatedPower { exponent, radius })
    }

    pub fn kernel_power(shift: f64, exponent: f64) -> Result<Self> {
        if !(shift > 0.0) {
            return Err(Error::invalid(format!("kernel shift must be > 0, got {shift}")));
        }
        Ok(SymbolicFunction::ShiftedKernelPower { shift, exponent })
    }

    pub fn box_indicator(base: Interval) -> Self {
        SymbolicFunction::BoxIndicator(base)
    }

    /// Exact pointwise value. All descriptors are nonnegative.
    pub fn eval(&self, z: HalfPlanePoint) -> f64 {
        match self {
            SymbolicFunction::Scalar(c) => *c,
            SymbolicFunction::PowerOfModulus { exponent } => z.modulus().powf(*exponent),
            SymbolicFunction::PowerOfHeight { exponent } => z.y().powf(*exponent),
            SymbolicFunction::TruncatedPower { exponent, radius } => {
                let r = z.modulus();
                if r <= *radius {
                    r.powf(*exponent)
                } else {
                    0.0
                }
            }
            SymbolicFunction::ShiftedKernelPower { shift, exponent } => {
                z.x().hypot(z.y() + shift).powf(-exponent)
            }
            SymbolicFunction::BoxIndicator(i) => {
                if i.contains(z.x()) && z.y() < i.length() {
                    1.0
                } else {
                    0.0
                }
            }
            SymbolicFunction::Product(fs) => fs.iter().map(|f| f.eval(z)).product(),
        }
    }

    /// Structural power f^e: exponents scale, indicator supports are
    /// preserved. The value semantics are f(z)^e on {f > 0} and 0
    /// outside, the usual convention for weights.
    pub fn powf(&self, e: f64) -> Self {
        match self {
            SymbolicFunction::Scalar(c) => SymbolicFunction::Scalar(c.powf(e)),
            SymbolicFunction::PowerOfModulus { exponent } => {
                SymbolicFunction::PowerOfModulus { exponent: exponent * e }
            }
            SymbolicFunction::PowerOfHeight { exponent } => {
                SymbolicFunction::PowerOfHeight { exponent: exponent * e }
            }
            SymbolicFunction::TruncatedPower { exponent, radius } => {
                SymbolicFunction::TruncatedPower { exponent: exponent * e, radius: *radius }
            }
            SymbolicFunction::ShiftedKernelPower { shift, exponent } => {
                SymbolicFunction::ShiftedKernelPower { shift: *shift, exponent: exponent * e }
            }
            SymbolicFunction::BoxIndicator(i) => SymbolicFunction::BoxIndicator(*i),
            SymbolicFunction::Product(fs) => {
                SymbolicFunction::Product(fs.iter().map(|f| f.powf(e)).collect())
            }
        }
    }

    /// Pointwise product.
    pub fn times(&self, other: &SymbolicFunction) -> Self {
        let mut factors = Vec::new();
        match self {
            SymbolicFunction::Product(fs) => factors.extend(fs.iter().cloned()),
            f => factors.push(f.clone()),
        }
        match other {
            SymbolicFunction::Product(fs) => factors.extend(fs.iter().cloned()),
            f => factors.push(f.clone()),
        }
        SymbolicFunction::Product(factors)
    }

    pub fn scaled(&self, c: f64) -> Self {
        SymbolicFunction::Scalar(c).times(self)
    }

    /// Multiplicative normal form; flattens products and merges cuts.
    pub fn normal_form(&self) -> NormalForm {
        let mut nf = NormalForm::unit();
        self.fold_into(&mut nf);
        nf
    }

    fn fold_into(&self, nf: &mut NormalForm) {
        match self {
            SymbolicFunction::Scalar(c) => nf.coeff *= c,
            SymbolicFunction::PowerOfModulus { exponent } => nf.modulus_exp += exponent,
            SymbolicFunction::PowerOfHeight { exponent } => nf.height_exp += exponent,
            SymbolicFunction::TruncatedPower { exponent, radius } => {
                nf.modulus_exp += exponent;
                nf.radius_cut = Some(match nf.radius_cut {
                    Some(r) => r.min(*radius),
                    None => *radius,
                });
            }
            SymbolicFunction::ShiftedKernelPower { shift, exponent } => {
                nf.kernels.push((*shift, *exponent));
            }
            SymbolicFunction::BoxIndicator(i) => {
                let (lo, hi) = match nf.x_cut {
                    Some((a, b)) => (a.max(i.left()), b.min(i.right())),
                    None => (i.left(), i.right()),
                };
                nf.x_cut = Some((lo, hi));
                nf.height_cut = Some(match nf.height_cut {
                    Some(h) => h.min(i.length()),
                    None => i.length(),
                });
            }
            SymbolicFunction::Product(fs) => {
                for f in fs {
                    f.fold_into(nf);
                }
            }
        }
    }
}

/// Flattened product form: coeff * |z|^a * y^b * Π_k |z + i t_k|^{-g_k}
/// restricted to the (optional) radius, x-range and height cuts.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalForm {
    pub coeff: f64,
    pub modulus_exp: f64,
    pub height_exp: f64,
    /// (shift, exponent) pairs; shift > 0 keeps each factor smooth on H.
    pub kernels: Vec<(f64, f64)>,
    pub radius_cut: Option<f64>,
    pub x_cut: Option<(f64, f64)>,
    pub height_cut: Option<f64>,
}

impl NormalForm {
    pub fn unit() -> Self {
        NormalForm {
            coeff: 1.0,
            modulus_exp: 0.0,
            height_exp: 0.0,
            kernels: Vec::new(),
            radius_cut: None,
            x_cut: None,
            height_cut: None,
        }
    }

    /// True when the support has empty interior (zero function).
    pub fn is_trivially_zero(&self) -> bool {
        if self.coeff == 0.0 {
            return true;
        }
        if let Some((a, b)) = self.x_cut {
            if !(a < b) {
                return true;
            }
        }
        if let Some(h) = self.height_cut {
            if !(h > 0.0) {
                return true;
            }
        }
        false
    }

    /// Pure power form = no kernel factors.
    pub fn is_pure_power(&self) -> bool {
        self.kernels.is_empty()
    }

    /// Positively homogeneous (no intrinsic scale): pure powers with no
    /// cuts. Dilation acts on integrals of such functions exactly.
    pub fn is_homogeneous(&self) -> bool {
        self.is_pure_power()
            && self.radius_cut.is_none()
            && self.x_cut.is_none()
            && self.height_cut.is_none()
    }

    /// Whether the support is bounded.
    pub fn has_bounded_support(&self) -> bool {
        self.radius_cut.is_some() || (self.x_cut.is_some() && self.height_cut.is_some())
    }

    /// Radial growth exponent near the origin: f ~ r^this (times the
    /// angular factor from the height power).
    pub fn origin_radial_exp(&self) -> f64 {
        self.modulus_exp + self.height_exp
    }

    /// Power of y near the boundary, away from the origin.
    pub fn boundary_height_exp(&self) -> f64 {
        self.height_exp
    }

    /// Radial decay exponent at infinity (kernels decay like r^{-g}).
    pub fn infinity_radial_exp(&self) -> f64 {
        let kernel_sum: f64 = self.kernels.iter().map(|(_, g)| g).sum();
        self.modulus_exp + self.height_exp - kernel_sum
    }

    pub fn eval(&self, z: HalfPlanePoint) -> f64 {
        let r = z.modulus();
        if let Some(rc) = self.radius_cut {
            if r > rc {
                return 0.0;
            }
        }
        if let Some((a, b)) = self.x_cut {
            if !(a <= z.x() && z.x() < b) {
                return 0.0;
            }
        }
        if let Some(h) = self.height_cut {
            if z.y() >= h {
                return 0.0;
            }
        }
        let mut v = self.coeff;
        if self.modulus_exp != 0.0 {
            v *= r.powf(self.modulus_exp);
        }
        if self.height_exp != 0.0 {
            v *= z.y().powf(self.height_exp);
        }
        for &(t, g) in &self.kernels {
            v *= z.x().hypot(z.y() + t).powf(-g);
        }
        v
    }
}

impl fmt::Display for SymbolicFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymbolicFunction::Scalar(c) => write!(f, "{c}"),
            SymbolicFunction::PowerOfModulus { exponent } => write!(f, "modpow({exponent})"),
            SymbolicFunction::PowerOfHeight { exponent } => write!(f, "heightpow({exponent})"),
            SymbolicFunction::TruncatedPower { exponent, radius } => {
                write!(f, "truncpow({exponent}, {radius})")
            }
            SymbolicFunction::ShiftedKernelPower { shift, exponent } => {
                write!(f, "kernelpow({shift}, {exponent})")
            }
            SymbolicFunction::BoxIndicator(i) => {
                write!(f, "boxind({}, {})", i.left(), i.length())
            }
            SymbolicFunction::Product(fs) => {
                if fs.is_empty() {
                    return write!(f, "1");
                }
                let parts: Vec<String> = fs.iter().map(|x| x.to_string()).collect();
                write!(f, "{}", parts.join(" * "))
            }
        }
    }
}

impl FromStr for SymbolicFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let factors = split_product(s)?;
        if factors.is_empty() {
            return Err(Error::invalid("empty function expression"));
        }
        let parsed: Result<Vec<SymbolicFunction>> =
            factors.iter().map(|f| parse_factor(f)).collect();
        let parsed = parsed?;
        if parsed.len() == 1 {
            Ok(parsed.into_iter().next().expect("one factor"))
        } else {
            Ok(SymbolicFunction::Product(parsed))
        }
    }
}

/// Split on top-level '*', respecting parentheses.
fn split_product(s: &str) -> Result<Vec<String>> {
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut current = String::new();
    for ch in s.chars() {
        match ch {
            '(' => {
                depth += 1;
                current.push(ch);
            }
            ')' => {
                depth = depth
                    .checked_sub(1)
                    .ok_or_else(|| Error::invalid(format!("unbalanced ')' in '{s}'")))?;
                current.push(ch);
            }
            '*' if depth == 0 => {
                parts.push(current.trim().to_string());
                current.clear();
            }
            _ => current.push(ch),
        }
    }
    if depth != 0 {
        return Err(Error::invalid(format!("unbalanced '(' in '{s}'")));
    }
    let last = current.trim();
    if !last.is_empty() {
        parts.push(last.to_string());
    }
    Ok(parts)
}

fn parse_factor(s: &str) -> Result<SymbolicFunction> {
    let s = s.trim();
    if let Ok(c) = s.parse::<f64>() {
        return SymbolicFunction::constant(c);
    }
    let open = s
        .find('(')
        .ok_or_else(|| Error::invalid(format!("unrecognized factor '{s}'")))?;
    if !s.ends_with(')') {
        return Err(Error::invalid(format!("factor '{s}' is missing a closing ')'")));
    }
    let name = s[..open].trim();
    let args: Vec<f64> = s[open + 1..s.len() - 1]
        .split(',')
        .map(|a| {
            a.trim()
                .parse::<f64>()
                .map_err(|_| Error::invalid(format!("bad number '{}' in '{s}'", a.trim())))
        })
        .collect::<Result<_>>()?;
    let arity = |n: usize| -> Result<()> {
        if args.len() == n {
            Ok(())
        } else {
            Err(Error::invalid(format!("{name} takes {n} argument(s), got {}", args.len())))
        }
    };
    match name {
        "scalar" => {
            arity(1)?;
            SymbolicFunction::constant(args[0])
        }
        "modpow" => {
            arity(1)?;
            Ok(SymbolicFunction::modulus_power(args[0]))
        }
        "heightpow" => {
            arity(1)?;
            Ok(SymbolicFunction::height_power(args[0]))
        }
        "truncpow" => {
            arity(2)?;
            SymbolicFunction::truncated_power(args[0], args[1])
        }
        "kernelpow" => {
            arity(2)?;
            SymbolicFunction::kernel_power(args[0], args[1])
        }
        "boxind" => {
            arity(2)?;
            Ok(SymbolicFunction::box_indicator(Interval::new(args[0], args[1])?))
        }
        other => Err(Error::invalid(format!("unknown factor '{other}'"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pt(x: f64, y: f64) -> HalfPlanePoint {
        HalfPlanePoint::new(x, y).unwrap()
    }

    #[test]
    fn evaluation_matches_closed_forms() {
        let f = SymbolicFunction::modulus_power(2.0);
        assert!((f.eval(pt(3.0, 4.0)) - 25.0).abs() < 1e-12);

        let g = SymbolicFunction::kernel_power(1.0, 2.0).unwrap();
        // |(z+i)/i| at z = (0,1) is 2
        assert!((g.eval(pt(0.0, 1.0)) - 0.25).abs() < 1e-14);

        let b = SymbolicFunction::box_indicator(Interval::new(0.0, 1.0).unwrap());
        assert_eq!(b.eval(pt(0.5, 0.5)), 1.0);
        assert_eq!(b.eval(pt(0.5, 1.5)), 0.0);
        assert_eq!(b.eval(pt(1.0, 0.5)), 0.0);

        let t = SymbolicFunction::truncated_power(-1.0, 1.0).unwrap();
        assert_eq!(t.eval(pt(0.3, 0.4)), 2.0);
        assert_eq!(t.eval(pt(3.0, 4.0)), 0.0);
    }

    #[test]
    fn product_is_product_of_factors() {
        let f = SymbolicFunction::modulus_power(0.7)
            .times(&SymbolicFunction::height_power(-0.2))
            .times(&SymbolicFunction::Scalar(3.0));
        let z = pt(1.2, 0.8);
        let expect = z.modulus().powf(0.7) * z.y().powf(-0.2) * 3.0;
        assert!((f.eval(z) - expect).abs() < 1e-14 * expect);
    }

    #[test]
    fn structural_power_matches_pointwise_power() {
        let w = SymbolicFunction::modulus_power(0.6)
            .times(&SymbolicFunction::height_power(0.2));
        let wp = w.powf(-1.7);
        for &(x, y) in &[(0.4, 0.9), (-2.0, 0.1), (5.0, 3.0)] {
            let z = pt(x, y);
            assert!((wp.eval(z) - w.eval(z).powf(-1.7)).abs() < 1e-12 * wp.eval(z).abs());
        }
    }

    #[test]
    fn normal_form_merges_cuts() {
        let f = SymbolicFunction::box_indicator(Interval::new(0.0, 2.0).unwrap())
            .times(&SymbolicFunction::box_indicator(Interval::new(1.0, 4.0).unwrap()))
            .times(&SymbolicFunction::truncated_power(-0.5, 3.0).unwrap());
        let nf = f.normal_form();
        assert_eq!(nf.x_cut, Some((1.0, 2.0)));
        assert_eq!(nf.height_cut, Some(2.0));
        assert_eq!(nf.radius_cut, Some(3.0));
        assert_eq!(nf.modulus_exp, -0.5);
        // normal form evaluates identically
        for &(x, y) in &[(1.5, 0.5), (0.5, 0.5), (1.5, 2.5), (1.2, 1.9)] {
            let z = pt(x, y);
            assert_eq!(nf.eval(z), f.eval(z));
        }
    }

    #[test]
    fn grammar_rejects_junk() {
        assert!("frob(1)".parse::<SymbolicFunction>().is_err());
        assert!("modpow(1".parse::<SymbolicFunction>().is_err());
        assert!("kernelpow(-1, 2)".parse::<SymbolicFunction>().is_err());
        assert!("boxind(0, -1)".parse::<SymbolicFunction>().is_err());
        assert!("".parse::<SymbolicFunction>().is_err());
        assert!("modpow(1) * * modpow(2)".parse::<SymbolicFunction>().is_err());
    }

    #[test]
    fn grammar_examples() {
        let f: SymbolicFunction = "modpow(0.75) * heightpow(-0.25)".parse().unwrap();
        let nf = f.normal_form();
        assert_eq!(nf.modulus_exp, 0.75);
        assert_eq!(nf.height_exp, -0.25);
        let g: SymbolicFunction = "truncpow(-1.8, 1) * 2.5".parse().unwrap();
        assert!((g.eval(pt(0.0, 0.5)) - 2.5 * 0.5f64.powf(-1.8)).abs() < 1e-12);
    }

    fn arb_leaf() -> impl Strategy<Value = SymbolicFunction> {
        prop_oneof![
            (0.0f64..10.0).prop_map(|c| SymbolicFunction::Scalar(c)),
            (-3.0f64..3.0).prop_map(SymbolicFunction::modulus_power),
            (-3.0f64..3.0).prop_map(SymbolicFunction::height_power),
            ((-3.0f64..3.0), (0.01f64..10.0))
                .prop_map(|(s, r)| SymbolicFunction::truncated_power(s, r).unwrap()),
            ((0.01f64..10.0), (-3.0f64..5.0))
                .prop_map(|(t, g)| SymbolicFunction::kernel_power(t, g).unwrap()),
            ((-5.0f64..5.0), (0.01f64..8.0)).prop_map(|(l, len)| {
                SymbolicFunction::box_indicator(Interval::new(l, len).unwrap())
            }),
        ]
    }

    proptest! {
        #[test]
        fn grammar_round_trips(fs in proptest::collection::vec(arb_leaf(), 1..5)) {
            let f = if fs.len() == 1 {
                fs[0].clone()
            } else {
                SymbolicFunction::Product(fs)
            };
            let text = f.to_string();
            let back: SymbolicFunction = text.parse().unwrap();
            prop_assert_eq!(back, f);
        }

        #[test]
        fn product_eval_matches_factor_product(
            fs in proptest::collection::vec(arb_leaf(), 2..5),
            x in -5.0f64..5.0,
            y in 0.01f64..5.0,
        ) {
            let z = HalfPlanePoint::new(x, y).unwrap();
            let prod = SymbolicFunction::Product(fs.clone());
            let direct: f64 = fs.iter().map(|f| f.eval(z)).product();
            let got = prod.eval(z);
            if direct == 0.0 {
                prop_assert_eq!(got, 0.0);
            } else {
                prop_assert!((got - direct).abs() <= 1e-12 * direct.abs());
            }
        }
    }
}
