//! Special functions and quadrature primitives.

pub(crate) mod gk;
mod oscillatory;

pub use gk::{integrate, integrate_vec};
pub use oscillatory::{integrate_oscillatory, wynn_epsilon, SinePair};

use crate::error::{domain, Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const FRAC_1_SQRT_PI: f64 = 0.564_189_583_547_756_3;

/// Tolerances and limits shared by the integrators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Bisection budget for a single adaptive panel.
    pub max_subdivisions: usize,
    /// Tail truncation: stop once a panel contributes less than this
    /// fraction of the running total.
    pub tail_cutoff_envelope: f64,
    /// Width of the first panel of a semi-infinite integral; later panels double.
    pub initial_panel: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_subdivisions: 200,
            tail_cutoff_envelope: 1e-12,
            initial_panel: 1.0,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0 && self.tail_cutoff_envelope > 0.0) {
            return Err(Error::Validation("quadrature tolerances must be > 0".into()));
        }
        if self.max_subdivisions < 1 {
            return Err(Error::Validation("max_subdivisions must be >= 1".into()));
        }
        if !(self.initial_panel > 0.0) {
            return Err(Error::Validation("initial_panel must be > 0".into()));
        }
        Ok(())
    }

    pub fn with_initial_panel(mut self, width: f64) -> Self {
        self.initial_panel = width;
        self
    }

    pub fn with_tolerances(mut self, abs_tol: f64, rel_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self.rel_tol = rel_tol;
        self
    }

    pub(crate) fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

/// A quadrature value together with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub abs_error: f64,
}

/// Exponential integral E1(x) = ∫ₓ^∞ e^(−t)/t dt.
pub fn exp_integral_e1(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(domain(format!("E1 requires x > 0, got {x}")));
    }
    if x < 1.0 {
        // -γ - ln x - Σ (-x)^k / (k k!)
        let mut sum = 0.0;
        let mut term = 1.0;
        for k in 1..200 {
            term *= -x / k as f64;
            let add = term / k as f64;
            sum += add;
            if add.abs() < 1e-17 * sum.abs() {
                break;
            }
        }
        return Ok(-EULER_GAMMA - x.ln() - sum);
    }
    if x > 740.0 {
        return Ok(0.0);
    }
    // modified Lentz on the continued fraction e^{-x} / (x + 1 - 1²/(x + 3 - 2²/(x + 5 - ...)))
    let tiny = 1e-300;
    let mut b = x + 1.0;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..10_000 {
        let an = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            return Ok(h * (-x).exp());
        }
    }
    Err(Error::Numerical(format!("E1 continued fraction stalled at x = {x}")))
}

/// Complementary error function.
pub fn erfc(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 0.0 {
        return 2.0 - erfc(-x);
    }
    if x < 2.0 {
        return 1.0 - erf_series(x);
    }
    if x > 27.3 {
        return 0.0;
    }
    (-x * x).exp() * FRAC_1_SQRT_PI / erfc_fraction(x)
}

/// Scaled complementary error function e^(x²)·erfc(x), for x ≥ 0 without overflow.
pub fn erfcx(x: f64) -> f64 {
    if x < 2.0 {
        return (x * x).exp() * erfc(x);
    }
    FRAC_1_SQRT_PI / erfc_fraction(x)
}

fn erfc_fraction(x: f64) -> f64 {
    // Lentz on x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))
    let tiny = 1e-300;
    let mut f = x;
    let mut c = x;
    let mut d = 0.0;
    for n in 1..5000 {
        let a = n as f64 * 0.5;
        d = x + a * d;
        d = if d == 0.0 { tiny } else { d };
        c = x + a / c;
        c = if c == 0.0 { tiny } else { c };
        d = 1.0 / d;
        let del = c * d;
        f *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    f
}

fn erf_series(x: f64) -> f64 {
    // 2/√π e^{-x²} Σ 2ⁿ x^{2n+1} / (2n+1)!!
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    for n in 1..400 {
        term *= 2.0 * x2 / (2 * n + 1) as f64;
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    2.0 * FRAC_1_SQRT_PI * (-x2).exp() * sum
}

/// ∫_lower^∞ f(x) dx by doubling panels.
pub fn integrate_semi_infinite<F: FnMut(f64) -> f64>(
    mut f: F,
    lower: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let (v, _, ok) = gk::semi_infinite::<1, _>(|x| [f(x)], lower, spec);
    if ok {
        Ok(v[0])
    } else {
        Err(Error::NonConvergence { partial: v[0], bound: f64::INFINITY })
    }
}

/// Same as [`integrate_semi_infinite`] but also returns the error estimate.
pub fn integrate_semi_infinite_estimate<F: FnMut(f64) -> f64>(
    mut f: F,
    lower: f64,
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    let (v, err, ok) = gk::semi_infinite::<1, _>(|x| [f(x)], lower, spec);
    if ok {
        Ok(Estimate { value: v[0], abs_error: err })
    } else {
        Err(Error::NonConvergence { partial: v[0], bound: err })
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn e1_reference_values() {
        assert_relative_eq!(exp_integral_e1(1.0).unwrap(), 0.219_383_934_395_520_27, max_relative = 1e-12);
        assert_relative_eq!(exp_integral_e1(10.0).unwrap(), 4.156_968_929_685_324e-6, max_relative = 1e-12);
        assert_relative_eq!(exp_integral_e1(0.1).unwrap(), 1.822_923_958_419_390_7, max_relative = 1e-12);
        assert!(exp_integral_e1(0.0).is_err());
        assert!(exp_integral_e1(-1.0).is_err());
    }

    #[test]
    fn e1_continuous_at_split() {
        let a = exp_integral_e1(1.0 - 1e-12).unwrap();
        let b = exp_integral_e1(1.0).unwrap();
        assert_relative_eq!(a, b, max_relative = 1e-10);
    }

    #[test]
    fn erfc_reference_values() {
        assert_eq!(erfc(0.0), 1.0);
        assert_relative_eq!(erfc(1.0), 0.157_299_207_050_285_13, max_relative = 1e-13);
        assert_relative_eq!(erfc(3.0), 2.209_049_699_858_544e-5, max_relative = 1e-12);
        assert_relative_eq!(erfc(-1.0), 1.842_700_792_949_714_9, max_relative = 1e-13);
    }

    #[test]
    fn erfcx_matches_unscaled() {
        for x in [0.0, 0.5, 1.9, 2.0, 3.0, 5.0] {
            assert_relative_eq!(erfcx(x), (x * x).exp() * erfc(x), max_relative = 1e-12);
        }
        // large-x asymptote 1/(x√π)
        assert_relative_eq!(erfcx(1e4), FRAC_1_SQRT_PI / 1e4, max_relative = 1e-8);
    }

    #[test]
    fn erfc_continuous_at_split() {
        assert_relative_eq!(erfc(2.0 - 1e-13), erfc(2.0), max_relative = 1e-11);
    }

    #[test]
    fn spec_validation() {
        assert!(QuadratureSpec::default().validate().is_ok());
        let bad = QuadratureSpec { max_subdivisions: 0, ..Default::default() };
        assert!(bad.validate().is_err());
    }
}
