//! Exact affine-in-time coefficients.
//!
//! Every residue contribution to a population is an affine function of the
//! dimensionless time τ = Γt, `intercept + slope·τ`, multiplying one decaying
//! exponential e^{−h·τ}. Simple poles produce constants (slope 0); double
//! poles produce genuine affine terms. Both parts are exact rationals and no
//! rounding happens at construction or combination.

use std::fmt;
use std::ops::{Add, AddAssign};

use rug::ops::NegAssign;
use rug::{Float, Rational};

/// Coefficient `intercept + slope·τ` of one exponential e^{−h·τ}, exact.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AffineCoefficient {
    /// Constant part.
    pub intercept: Rational,
    /// Coefficient of τ = Γt; zero for simple-pole contributions.
    pub slope: Rational,
}

impl AffineCoefficient {
    /// A constant coefficient (slope 0), as produced by simple poles.
    pub fn constant(intercept: Rational) -> Self {
        AffineCoefficient {
            intercept,
            slope: Rational::new(),
        }
    }

    /// Zero coefficient.
    pub fn zero() -> Self {
        AffineCoefficient::default()
    }

    pub fn new(intercept: Rational, slope: Rational) -> Self {
        AffineCoefficient { intercept, slope }
    }

    pub fn is_zero(&self) -> bool {
        self.intercept == 0 && self.slope == 0
    }

    /// Exact evaluation at rational τ.
    pub fn eval_exact(&self, tau: &Rational) -> Rational {
        Rational::from(&self.slope * tau) + &self.intercept
    }

    /// Evaluation at big-float τ with `prec`-bit arithmetic.
    pub fn eval_float(&self, tau: &Float, prec: u32) -> Float {
        let mut v = Float::with_val(prec, &self.slope);
        v *= tau;
        v += Float::with_val(prec, &self.intercept);
        v
    }

    /// In-place `self += w · other`, exact.
    pub fn add_scaled(&mut self, w: &Rational, other: &AffineCoefficient) {
        self.intercept += Rational::from(w * &other.intercept);
        self.slope += Rational::from(w * &other.slope);
    }

    pub fn neg_assign(&mut self) {
        self.intercept.neg_assign();
        self.slope.neg_assign();
    }
}

impl Add for AffineCoefficient {
    type Output = AffineCoefficient;

    fn add(mut self, rhs: AffineCoefficient) -> AffineCoefficient {
        self += rhs;
        self
    }
}

impl AddAssign for AffineCoefficient {
    fn add_assign(&mut self, rhs: AffineCoefficient) {
        self.intercept += rhs.intercept;
        self.slope += rhs.slope;
    }
}

impl fmt::Display for AffineCoefficient {
    /// Renders as `p/q` (lowest terms, `/1` omitted), with ` + p/q τ` when
    /// the slope is nonzero.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.intercept)?;
        if self.slope != 0 {
            write!(f, " + {} τ", self.slope)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluates_exactly() {
        let c = AffineCoefficient::new(Rational::from((-36, 1)), Rational::from(36));
        let tau = Rational::from((1, 2));
        assert_eq!(c.eval_exact(&tau), Rational::from(-18));
    }

    #[test]
    fn add_scaled_is_exact() {
        let mut a = AffineCoefficient::constant(Rational::from((1, 3)));
        let b = AffineCoefficient::new(Rational::from((1, 6)), Rational::from(2));
        a.add_scaled(&Rational::from((1, 2)), &b);
        assert_eq!(a.intercept, Rational::from((5, 12)));
        assert_eq!(a.slope, Rational::from(1));
    }

    #[test]
    fn display_lowest_terms() {
        let c = AffineCoefficient::constant(Rational::from((4, 8)));
        assert_eq!(c.to_string(), "1/2");
        let d = AffineCoefficient::new(Rational::from(-6), Rational::from(-12));
        assert_eq!(d.to_string(), "-6 + -12 τ");
    }
}
