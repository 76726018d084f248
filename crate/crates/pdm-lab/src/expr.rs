//! Expression trees for holomorphic functions f(ζ).
//!
//! The grammar is a closed set — constants, the identity ζ, scalar multiples,
//! integer powers, sums, products, and the exponential — so every expression
//! has an exactly computable derivative tree. Derivatives are built by the
//! chain/product/power rules, never by numerical differencing.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A holomorphic function of one complex variable ζ = x + iy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HolomorphicExpr {
    /// A complex constant.
    Constant { value: Complex64 },
    /// The identity map ζ ↦ ζ.
    Zeta,
    /// A scalar multiple A·g(ζ).
    Scale {
        factor: Complex64,
        arg: Box<HolomorphicExpr>,
    },
    /// An integer power g(ζ)ⁿ with n ≥ 1.
    Pow { base: Box<HolomorphicExpr>, n: u32 },
    /// A sum of subexpressions.
    Sum { terms: Vec<HolomorphicExpr> },
    /// A product of subexpressions.
    Product { factors: Vec<HolomorphicExpr> },
    /// The exponential exp(g(ζ)).
    Exp { arg: Box<HolomorphicExpr> },
}

impl HolomorphicExpr {
    pub fn constant(value: impl Into<Complex64>) -> Self {
        HolomorphicExpr::Constant {
            value: value.into(),
        }
    }

    pub fn zeta() -> Self {
        HolomorphicExpr::Zeta
    }

    /// A·g(ζ).
    pub fn scale(factor: impl Into<Complex64>, arg: HolomorphicExpr) -> Self {
        HolomorphicExpr::Scale {
            factor: factor.into(),
            arg: Box::new(arg),
        }
    }

    /// The linear map ζ ↦ A·ζ.
    pub fn linear(factor: impl Into<Complex64>) -> Self {
        Self::scale(factor, Self::zeta())
    }

    /// g(ζ)ⁿ. Panics if n = 0; the grammar requires n ≥ 1.
    pub fn pow(base: HolomorphicExpr, n: u32) -> Self {
        assert!(n >= 1, "integer power requires n >= 1");
        HolomorphicExpr::Pow {
            base: Box::new(base),
            n,
        }
    }

    pub fn sum(terms: Vec<HolomorphicExpr>) -> Self {
        HolomorphicExpr::Sum { terms }
    }

    pub fn product(factors: Vec<HolomorphicExpr>) -> Self {
        HolomorphicExpr::Product { factors }
    }

    pub fn exp(arg: HolomorphicExpr) -> Self {
        HolomorphicExpr::Exp { arg: Box::new(arg) }
    }

    /// Checks grammar invariants (powers need n ≥ 1). Deserialized trees must
    /// pass through here before use.
    pub fn validate(&self) -> Result<()> {
        match self {
            HolomorphicExpr::Constant { value } => {
                if !value.re.is_finite() || !value.im.is_finite() {
                    return Err(Error::InvalidParameter {
                        name: "f",
                        reason: "constant coefficient is not finite".into(),
                    });
                }
            }
            HolomorphicExpr::Zeta => {}
            HolomorphicExpr::Scale { factor, arg } => {
                if !factor.re.is_finite() || !factor.im.is_finite() {
                    return Err(Error::InvalidParameter {
                        name: "f",
                        reason: "scale factor is not finite".into(),
                    });
                }
                arg.validate()?;
            }
            HolomorphicExpr::Pow { base, n } => {
                if *n < 1 {
                    return Err(Error::InvalidParameter {
                        name: "f",
                        reason: "integer power requires n >= 1".into(),
                    });
                }
                base.validate()?;
            }
            HolomorphicExpr::Sum { terms } => {
                for t in terms {
                    t.validate()?;
                }
            }
            HolomorphicExpr::Product { factors } => {
                for f in factors {
                    f.validate()?;
                }
            }
            HolomorphicExpr::Exp { arg } => arg.validate()?,
        }
        Ok(())
    }

    fn eval_raw(&self, zeta: Complex64) -> Complex64 {
        match self {
            HolomorphicExpr::Constant { value } => *value,
            HolomorphicExpr::Zeta => zeta,
            HolomorphicExpr::Scale { factor, arg } => factor * arg.eval_raw(zeta),
            HolomorphicExpr::Pow { base, n } => base.eval_raw(zeta).powi(*n as i32),
            HolomorphicExpr::Sum { terms } => {
                terms.iter().map(|t| t.eval_raw(zeta)).sum()
            }
            HolomorphicExpr::Product { factors } => factors
                .iter()
                .map(|f| f.eval_raw(zeta))
                .fold(Complex64::new(1.0, 0.0), |acc, v| acc * v),
            HolomorphicExpr::Exp { arg } => arg.eval_raw(zeta).exp(),
        }
    }

    /// Evaluates f(ζ). Overflow (e.g. exp of a large argument) is reported as
    /// a numerical-range error rather than propagating non-finite values.
    pub fn eval(&self, zeta: Complex64) -> Result<Complex64> {
        let v = self.eval_raw(zeta);
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(Error::NumericalRange {
                context: format!("f(ζ) at ζ = {zeta}"),
            })
        }
    }

    /// Builds the exact derivative expression f'(ζ).
    ///
    /// Trivial terms (zero summands, unit factors) are folded away so repeated
    /// differentiation — needed for f'' in force evaluations — stays compact.
    pub fn derivative(&self) -> HolomorphicExpr {
        match self {
            HolomorphicExpr::Constant { .. } => HolomorphicExpr::constant(0.0),
            HolomorphicExpr::Zeta => HolomorphicExpr::constant(1.0),
            HolomorphicExpr::Scale { factor, arg } => {
                scale_simplified(*factor, arg.derivative())
            }
            HolomorphicExpr::Pow { base, n } => {
                let dbase = base.derivative();
                if *n == 1 {
                    dbase
                } else {
                    // n·gⁿ⁻¹·g'
                    let power = if *n == 2 {
                        (**base).clone()
                    } else {
                        HolomorphicExpr::pow((**base).clone(), n - 1)
                    };
                    scale_simplified(
                        Complex64::new(f64::from(*n), 0.0),
                        product_simplified(vec![power, dbase]),
                    )
                }
            }
            HolomorphicExpr::Sum { terms } => {
                let dterms: Vec<_> = terms
                    .iter()
                    .map(|t| t.derivative())
                    .filter(|d| !d.is_zero())
                    .collect();
                match dterms.len() {
                    0 => HolomorphicExpr::constant(0.0),
                    1 => dterms.into_iter().next().unwrap(),
                    _ => HolomorphicExpr::sum(dterms),
                }
            }
            HolomorphicExpr::Product { factors } => {
                // Leibniz rule: sum over factors of (factor replaced by its derivative).
                let mut terms = Vec::new();
                for (i, _) in factors.iter().enumerate() {
                    let mut parts = Vec::with_capacity(factors.len());
                    let mut zero = false;
                    for (j, f) in factors.iter().enumerate() {
                        let part = if i == j { f.derivative() } else { f.clone() };
                        if part.is_zero() {
                            zero = true;
                            break;
                        }
                        parts.push(part);
                    }
                    if !zero {
                        terms.push(product_simplified(parts));
                    }
                }
                match terms.len() {
                    0 => HolomorphicExpr::constant(0.0),
                    1 => terms.into_iter().next().unwrap(),
                    _ => HolomorphicExpr::sum(terms),
                }
            }
            HolomorphicExpr::Exp { arg } => {
                let darg = arg.derivative();
                if darg.is_zero() {
                    HolomorphicExpr::constant(0.0)
                } else {
                    product_simplified(vec![self.clone(), darg])
                }
            }
        }
    }

    /// Evaluates the exact analytic derivative f'(ζ).
    pub fn eval_df(&self, zeta: Complex64) -> Result<Complex64> {
        let v = self.derivative().eval_raw(zeta);
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(Error::NumericalRange {
                context: format!("f'(ζ) at ζ = {zeta}"),
            })
        }
    }

    fn is_zero(&self) -> bool {
        matches!(self, HolomorphicExpr::Constant { value } if value.re == 0.0 && value.im == 0.0)
    }

    fn is_one(&self) -> bool {
        matches!(self, HolomorphicExpr::Constant { value } if value.re == 1.0 && value.im == 0.0)
    }
}

fn scale_simplified(factor: Complex64, arg: HolomorphicExpr) -> HolomorphicExpr {
    if arg.is_zero() || factor == Complex64::new(0.0, 0.0) {
        HolomorphicExpr::constant(0.0)
    } else if let HolomorphicExpr::Constant { value } = arg {
        HolomorphicExpr::constant(factor * value)
    } else if factor == Complex64::new(1.0, 0.0) {
        arg
    } else {
        HolomorphicExpr::Scale {
            factor,
            arg: Box::new(arg),
        }
    }
}

fn product_simplified(factors: Vec<HolomorphicExpr>) -> HolomorphicExpr {
    let kept: Vec<_> = factors.into_iter().filter(|f| !f.is_one()).collect();
    match kept.len() {
        0 => HolomorphicExpr::constant(1.0),
        1 => kept.into_iter().next().unwrap(),
        _ => HolomorphicExpr::product(kept),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn linear_map_evaluates() {
        let f = HolomorphicExpr::linear(2.0);
        let v = f.eval(c(1.0, 1.0)).unwrap();
        assert_eq!(v, c(2.0, 2.0));
    }

    #[test]
    fn square_of_i_is_minus_one() {
        let f = HolomorphicExpr::pow(HolomorphicExpr::zeta(), 2);
        let v = f.eval(c(0.0, 1.0)).unwrap();
        assert_abs_diff_eq!(v.re, -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn euler_identity() {
        let f = HolomorphicExpr::exp(HolomorphicExpr::zeta());
        let v = f.eval(c(0.0, PI)).unwrap();
        assert_abs_diff_eq!(v.re, -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn derivative_of_linear_is_constant() {
        let f = HolomorphicExpr::linear(c(3.0, -1.0));
        assert_eq!(f.derivative(), HolomorphicExpr::constant(c(3.0, -1.0)));
        let d = f.eval_df(c(5.0, 7.0)).unwrap();
        assert_eq!(d, c(3.0, -1.0));
    }

    #[test]
    fn derivative_power_rule() {
        let f = HolomorphicExpr::pow(HolomorphicExpr::zeta(), 2);
        let d = f.eval_df(c(1.0, 1.0)).unwrap();
        assert_abs_diff_eq!(d.re, 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(d.im, 2.0, epsilon = 1e-15);
    }

    #[test]
    fn exponential_is_its_own_derivative() {
        let f = HolomorphicExpr::exp(HolomorphicExpr::zeta());
        for z in [c(0.0, 0.0), c(1.0, -2.0), c(-0.3, 0.7)] {
            let v = f.eval(z).unwrap();
            let d = f.eval_df(z).unwrap();
            assert_abs_diff_eq!(d.re, v.re, epsilon = 1e-14);
            assert_abs_diff_eq!(d.im, v.im, epsilon = 1e-14);
        }
    }

    #[test]
    fn second_derivative_of_linear_vanishes() {
        let f = HolomorphicExpr::linear(4.0);
        let d2 = f.derivative().derivative();
        assert!(d2.is_zero());
    }

    #[test]
    fn exp_overflow_is_range_error() {
        let f = HolomorphicExpr::exp(HolomorphicExpr::zeta());
        let err = f.eval(c(1.0e4, 0.0)).unwrap_err();
        assert!(matches!(err, Error::NumericalRange { .. }));
    }

    #[test]
    fn zero_power_rejected_on_validate() {
        let bad = HolomorphicExpr::Pow {
            base: Box::new(HolomorphicExpr::Zeta),
            n: 0,
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn json_round_trip() {
        let f = HolomorphicExpr::sum(vec![
            HolomorphicExpr::scale(c(0.5, 0.0), HolomorphicExpr::pow(HolomorphicExpr::zeta(), 3)),
            HolomorphicExpr::exp(HolomorphicExpr::linear(c(0.0, 1.0))),
        ]);
        let json = serde_json::to_string(&f).unwrap();
        let back: HolomorphicExpr = serde_json::from_str(&json).unwrap();
        assert_eq!(f, back);
    }

    // Derivative trees must agree with a central finite difference of eval to
    // O(h²); checked across the whole grammar.
    #[test]
    fn derivative_matches_central_difference() {
        let exprs = vec![
            HolomorphicExpr::linear(1.5),
            HolomorphicExpr::pow(HolomorphicExpr::zeta(), 4),
            HolomorphicExpr::exp(HolomorphicExpr::scale(c(0.5, 0.2), HolomorphicExpr::zeta())),
            HolomorphicExpr::product(vec![
                HolomorphicExpr::zeta(),
                HolomorphicExpr::exp(HolomorphicExpr::zeta()),
            ]),
            HolomorphicExpr::sum(vec![
                HolomorphicExpr::pow(HolomorphicExpr::zeta(), 2),
                HolomorphicExpr::scale(c(0.0, 2.0), HolomorphicExpr::zeta()),
                HolomorphicExpr::constant(c(1.0, -1.0)),
            ]),
        ];
        let z = c(0.4, -0.3);
        let h = 1e-5;
        for f in exprs {
            let exact = f.eval_df(z).unwrap();
            let fd = (f.eval(z + c(h, 0.0)).unwrap() - f.eval(z - c(h, 0.0)).unwrap())
                / c(2.0 * h, 0.0);
            assert_abs_diff_eq!(exact.re, fd.re, epsilon = 1e-8);
            assert_abs_diff_eq!(exact.im, fd.im, epsilon = 1e-8);
        }
    }
}
