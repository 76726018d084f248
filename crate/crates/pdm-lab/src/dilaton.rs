//! Exact static dilaton backgrounds from the 2D Liouville equation.
//!
//! A background is a holomorphic function f(ζ) plus physical constants
//! (κ, Λ). It yields the extra-dimensional scale factor b, the dilaton
//! φ = (1/a)·ln b, and the effective particle mass m = m₀·b^{-1/2}:
//!
//!   b⁻¹ = (2κ²/κ̃²|Λ|) · |f'(ζ)|² / (|f(ζ)|² ± 1)²,   Λ = ∓|Λ|
//!
//! with a = √(2/3)·κ and κ̃ = −a/2. Everything here is a pure function of
//! immutable inputs, so concurrent evaluation over parameter sweeps is safe.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::HolomorphicExpr;

/// Multiple of the grid spacing below which a node is considered too close
/// to a singular locus or a zero of f'.
pub const SINGULARITY_MARGIN_CELLS: f64 = 10.0;

/// Physical constants in natural units (ħ = 1 by default, κ defaults to 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    /// Gravitational coupling κ.
    pub kappa: f64,
    /// Cosmological constant Λ with its sign.
    pub lambda: f64,
    /// Reduced Planck constant.
    pub hbar: f64,
    /// Reference mass m₀.
    pub m0: f64,
}

impl PhysicalConstants {
    pub fn new(kappa: f64, lambda: f64) -> Result<Self> {
        let c = PhysicalConstants {
            kappa,
            lambda,
            hbar: 1.0,
            m0: 1.0,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.kappa.is_finite() && self.kappa > 0.0) {
            return Err(Error::InvalidParameter {
                name: "kappa",
                reason: format!("must be finite and positive, got {}", self.kappa),
            });
        }
        if !(self.lambda.is_finite() && self.lambda != 0.0) {
            return Err(Error::InvalidParameter {
                name: "lambda",
                reason: "Liouville backgrounds need a nonzero cosmological constant".into(),
            });
        }
        if !(self.hbar.is_finite() && self.hbar > 0.0) {
            return Err(Error::InvalidParameter {
                name: "hbar",
                reason: format!("must be finite and positive, got {}", self.hbar),
            });
        }
        if !(self.m0.is_finite() && self.m0 > 0.0) {
            return Err(Error::InvalidParameter {
                name: "m0",
                reason: format!("must be finite and positive, got {}", self.m0),
            });
        }
        Ok(())
    }

    /// a = √(2/3)·κ, fixed by canonical normalization of the dilaton kinetic term.
    pub fn dilaton_slope(&self) -> f64 {
        (2.0f64 / 3.0).sqrt() * self.kappa
    }

    /// κ̃ = −a/2 < 0.
    pub fn kappa_tilde(&self) -> f64 {
        -0.5 * self.dilaton_slope()
    }

    /// κ̃² = κ²/6, computed algebraically (no square-root round trip).
    pub fn kappa_tilde_sq(&self) -> f64 {
        self.kappa * self.kappa / 6.0
    }

    pub fn branch(&self) -> Branch {
        if self.lambda < 0.0 {
            Branch::NegativeLambda
        } else {
            Branch::PositiveLambda
        }
    }
}

/// Sign of Λ selects which Liouville solution family applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// Λ < 0: denominator (|f|² + 1)², smooth everywhere f' is.
    NegativeLambda,
    /// Λ > 0: denominator (|f|² − 1)², singular on the locus |f| = 1.
    PositiveLambda,
}

impl Branch {
    fn denominator_offset(self) -> f64 {
        match self {
            Branch::NegativeLambda => 1.0,
            Branch::PositiveLambda => -1.0,
        }
    }
}

/// All background fields at one point.
#[derive(Debug, Clone, Copy)]
pub struct FieldPoint {
    pub phi: f64,
    pub b: f64,
    pub b_inv: f64,
    pub sqrt_b: f64,
    pub inv_sqrt_b: f64,
    pub quarter_b: f64,
    pub mass: f64,
}

/// Normalization data for the f(ζ) = Aζ family: the constant
/// C = √2·κ·A/(|κ̃|·√|Λ|) ties A, κ and |Λ| together, so fixing either C
/// or |Λ| determines the other.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct LinearBackgroundInfo {
    pub a_coeff: f64,
    pub c: f64,
    pub abs_lambda: f64,
}

/// How to normalize a linear background: pin |Λ| and report C, or pin C and
/// derive |Λ|.
#[derive(Debug, Clone, Copy)]
pub enum LinearNormalization {
    AbsLambda(f64),
    CTarget(f64),
}

/// An exact static solution of the 2D Liouville equation.
#[derive(Debug, Clone)]
pub struct DilatonBackground {
    constants: PhysicalConstants,
    f: HolomorphicExpr,
    df: HolomorphicExpr,
    d2f: HolomorphicExpr,
    branch: Branch,
}

/// Serialized form of a background: constants, f-expression tree, branch.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BackgroundDescriptor {
    pub constants: PhysicalConstants,
    pub f: HolomorphicExpr,
    pub branch: Branch,
}

impl DilatonBackground {
    pub fn new(constants: PhysicalConstants, f: HolomorphicExpr) -> Result<Self> {
        constants.validate()?;
        f.validate()?;
        let df = f.derivative();
        let d2f = df.derivative();
        let branch = constants.branch();
        Ok(DilatonBackground {
            constants,
            f,
            df,
            d2f,
            branch,
        })
    }

    /// The f(ζ) = Aζ background on the Λ < 0 branch, normalized either by
    /// |Λ| or by a target C. Returns the background and the resolved
    /// normalization (both C and |Λ|).
    pub fn linear(
        kappa: f64,
        a_coeff: f64,
        normalization: LinearNormalization,
    ) -> Result<(Self, LinearBackgroundInfo)> {
        if !(a_coeff.is_finite() && a_coeff > 0.0) {
            return Err(Error::InvalidParameter {
                name: "a_coeff",
                reason: format!("must be finite and positive, got {a_coeff}"),
            });
        }
        if !(kappa.is_finite() && kappa > 0.0) {
            return Err(Error::InvalidParameter {
                name: "kappa",
                reason: format!("must be finite and positive, got {kappa}"),
            });
        }
        let kt_sq = kappa * kappa / 6.0;
        let (c, abs_lambda) = match normalization {
            LinearNormalization::AbsLambda(abs_lambda) => {
                if !(abs_lambda.is_finite() && abs_lambda > 0.0) {
                    return Err(Error::InvalidParameter {
                        name: "abs_lambda",
                        reason: format!("must be finite and positive, got {abs_lambda}"),
                    });
                }
                let c = (2.0f64).sqrt() * kappa * a_coeff / (kt_sq.sqrt() * abs_lambda.sqrt());
                (c, abs_lambda)
            }
            LinearNormalization::CTarget(c) => {
                if !(c.is_finite() && c > 0.0) {
                    return Err(Error::InvalidParameter {
                        name: "c_target",
                        reason: format!("must be finite and positive, got {c}"),
                    });
                }
                let abs_lambda = 2.0 * kappa * kappa * a_coeff * a_coeff / (kt_sq * c * c);
                (c, abs_lambda)
            }
        };
        let constants = PhysicalConstants::new(kappa, -abs_lambda)?;
        let bg = DilatonBackground::new(constants, HolomorphicExpr::linear(a_coeff))?;
        let info = LinearBackgroundInfo {
            a_coeff,
            c,
            abs_lambda,
        };
        Ok((bg, info))
    }

    pub fn constants(&self) -> &PhysicalConstants {
        &self.constants
    }

    pub fn f_expr(&self) -> &HolomorphicExpr {
        &self.f
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }

    pub fn descriptor(&self) -> BackgroundDescriptor {
        BackgroundDescriptor {
            constants: self.constants,
            f: self.f.clone(),
            branch: self.branch,
        }
    }

    pub fn from_descriptor(d: &BackgroundDescriptor) -> Result<Self> {
        let bg = DilatonBackground::new(d.constants, d.f.clone())?;
        if bg.branch != d.branch {
            return Err(Error::InvalidParameter {
                name: "branch",
                reason: "descriptor branch disagrees with the sign of lambda".into(),
            });
        }
        Ok(bg)
    }

    fn prefactor(&self) -> f64 {
        2.0 * self.constants.kappa * self.constants.kappa
            / (self.constants.kappa_tilde_sq() * self.constants.lambda.abs())
    }

    fn point(&self, x: f64, y: f64) -> Result<PointData> {
        let zeta = Complex64::new(x, y);
        let f = self.f.eval(zeta)?;
        let df = self.df.eval(zeta)?;
        let d2f = self.d2f.eval(zeta)?;
        let fsq = f.norm_sqr();
        let q = df.norm_sqr();
        let denom = fsq + self.branch.denominator_offset();
        if denom == 0.0 {
            return Err(Error::SingularLocus { x, y });
        }
        if q == 0.0 {
            return Err(Error::DegenerateBackground { x, y });
        }
        Ok(PointData {
            f,
            df,
            d2f,
            q,
            denom,
        })
    }

    /// b⁻¹ = e^{2κ̃φ}, strictly positive off the singular set.
    pub fn inverse_b(&self, x: f64, y: f64) -> Result<f64> {
        let p = self.point(x, y)?;
        let b_inv = self.prefactor() * p.q / (p.denom * p.denom);
        if !b_inv.is_finite() || b_inv <= 0.0 {
            return Err(Error::NumericalRange {
                context: format!("b⁻¹ at ({x}, {y})"),
            });
        }
        Ok(b_inv)
    }

    /// The matter coupling b^{-1/2} = e^{κ̃φ}.
    pub fn inv_sqrt_b(&self, x: f64, y: f64) -> Result<f64> {
        Ok(self.inverse_b(x, y)?.sqrt())
    }

    /// φ = (1/a)·ln b.
    pub fn phi(&self, x: f64, y: f64) -> Result<f64> {
        let b_inv = self.inverse_b(x, y)?;
        Ok(-b_inv.ln() / self.constants.dilaton_slope())
    }

    /// Effective particle mass m = m₀·b^{-1/2} = m₀·e^{-aφ/2}.
    pub fn effective_mass(&self, x: f64, y: f64) -> Result<f64> {
        Ok(self.constants.m0 * self.inv_sqrt_b(x, y)?)
    }

    /// All fields at once; cheaper than separate calls and keeps the
    /// power-identity chain (b^{1/4}·b^{1/4} = b^{1/2}, ...) consistent.
    pub fn eval(&self, x: f64, y: f64) -> Result<FieldPoint> {
        let b_inv = self.inverse_b(x, y)?;
        let inv_sqrt_b = b_inv.sqrt();
        let sqrt_b = 1.0 / inv_sqrt_b;
        let b = 1.0 / b_inv;
        let quarter_b = sqrt_b.sqrt();
        let phi = -b_inv.ln() / self.constants.dilaton_slope();
        let mass = self.constants.m0 * inv_sqrt_b;
        let p = FieldPoint {
            phi,
            b,
            b_inv,
            sqrt_b,
            inv_sqrt_b,
            quarter_b,
            mass,
        };
        if !(p.b.is_finite() && p.phi.is_finite()) {
            return Err(Error::NumericalRange {
                context: format!("background fields at ({x}, {y})"),
            });
        }
        Ok(p)
    }

    /// Analytic gradient (∂ₓ, ∂ᵧ) of b^{-1/2}, via f, f' and f''.
    pub fn grad_inv_sqrt_b(&self, x: f64, y: f64) -> Result<[f64; 2]> {
        let p = self.point(x, y)?;
        let grad_b_inv = self.grad_inverse_b_from(&p);
        let b_inv = self.prefactor() * p.q / (p.denom * p.denom);
        let u = b_inv.sqrt();
        Ok([grad_b_inv[0] / (2.0 * u), grad_b_inv[1] / (2.0 * u)])
    }

    /// Analytic gradient of b^{1/2} = 1/b^{-1/2}.
    pub fn grad_sqrt_b(&self, x: f64, y: f64) -> Result<[f64; 2]> {
        let p = self.point(x, y)?;
        let grad_b_inv = self.grad_inverse_b_from(&p);
        let b_inv = self.prefactor() * p.q / (p.denom * p.denom);
        let u = b_inv.sqrt();
        let scale = -1.0 / (2.0 * u * b_inv);
        Ok([scale * grad_b_inv[0], scale * grad_b_inv[1]])
    }

    fn grad_inverse_b_from(&self, p: &PointData) -> [f64; 2] {
        // ∇|f|² = (2Re(f'·conj f), -2Im(f'·conj f)); same shape for |f'|² with f''.
        let fpf = p.df * p.f.conj();
        let grad_fsq = [2.0 * fpf.re, -2.0 * fpf.im];
        let fppfp = p.d2f * p.df.conj();
        let grad_q = [2.0 * fppfp.re, -2.0 * fppfp.im];
        let k = self.prefactor();
        let d = p.denom;
        [
            k * (grad_q[0] - 2.0 * p.q * grad_fsq[0] / d) / (d * d),
            k * (grad_q[1] - 2.0 * p.q * grad_fsq[1] / d) / (d * d),
        ]
    }

    /// First-order (Newton-step) estimate of the distance from (x, y) to the
    /// nearest singular locus or zero of f'. Returns +∞ when no nearby
    /// obstruction is detectable.
    pub fn singularity_distance(&self, x: f64, y: f64) -> f64 {
        let zeta = Complex64::new(x, y);
        let (f, df, d2f) = match (
            self.f.eval(zeta),
            self.df.eval(zeta),
            self.d2f.eval(zeta),
        ) {
            (Ok(f), Ok(df), Ok(d2f)) => (f, df, d2f),
            _ => return 0.0,
        };
        let mut dist = f64::INFINITY;
        // zero of f': |f'|/|f''|
        let dfn = df.norm();
        if dfn == 0.0 {
            return 0.0;
        }
        let d2fn = d2f.norm();
        if d2fn > 0.0 {
            dist = dist.min(dfn / d2fn);
        }
        if self.branch == Branch::PositiveLambda {
            // locus |f|² = 1: |g|/|∇g| with g = |f|²-1, |∇g| = 2|f||f'|
            let g = f.norm_sqr() - 1.0;
            let slope = 2.0 * f.norm() * dfn;
            if g == 0.0 {
                return 0.0;
            }
            if slope > 0.0 {
                dist = dist.min(g.abs() / slope);
            }
        }
        dist
    }
}

struct PointData {
    f: Complex64,
    df: Complex64,
    d2f: Complex64,
    q: f64,
    denom: f64,
}

/// Uniform 2D grid: shared spacing h in x and y.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec2D {
    pub x_min: f64,
    pub y_min: f64,
    pub nx: usize,
    pub ny: usize,
    pub h: f64,
}

impl GridSpec2D {
    /// Grid from explicit ranges; both directions must share the spacing to
    /// within 1e-9 relative.
    pub fn from_ranges(
        x_min: f64,
        x_max: f64,
        nx: usize,
        y_min: f64,
        y_max: f64,
        ny: usize,
    ) -> Result<Self> {
        if nx < 3 || ny < 3 {
            return Err(Error::InvalidGrid(format!(
                "node counts must be >= 3, got ({nx}, {ny})"
            )));
        }
        if !(x_max > x_min && y_max > y_min) {
            return Err(Error::InvalidGrid("ranges must be increasing".into()));
        }
        let hx = (x_max - x_min) / (nx - 1) as f64;
        let hy = (y_max - y_min) / (ny - 1) as f64;
        if ((hx - hy) / hx).abs() > 1e-9 {
            return Err(Error::InvalidGrid(format!(
                "spacing must be uniform in x and y, got hx = {hx}, hy = {hy}"
            )));
        }
        Ok(GridSpec2D {
            x_min,
            y_min,
            nx,
            ny,
            h: hx,
        })
    }

    /// Grid anchored at (x_min, y_min) with explicit spacing.
    pub fn with_spacing(x_min: f64, y_min: f64, h: f64, nx: usize, ny: usize) -> Result<Self> {
        if nx < 3 || ny < 3 {
            return Err(Error::InvalidGrid(format!(
                "node counts must be >= 3, got ({nx}, {ny})"
            )));
        }
        if !(h.is_finite() && h > 0.0) {
            return Err(Error::InvalidGrid(format!("spacing must be positive, got {h}")));
        }
        Ok(GridSpec2D {
            x_min,
            y_min,
            nx,
            ny,
            h,
        })
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.h
    }

    pub fn y(&self, j: usize) -> f64 {
        self.y_min + j as f64 * self.h
    }

    pub fn x_max(&self) -> f64 {
        self.x(self.nx - 1)
    }

    pub fn y_max(&self) -> f64 {
        self.y(self.ny - 1)
    }
}

/// Residual statistics of the discrete Liouville operator.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ResidualStats {
    /// max |R| over interior nodes.
    pub max_abs: f64,
    /// Discrete L2 norm sqrt(Σ R²·h²).
    pub l2: f64,
    /// Number of interior nodes sampled.
    pub interior_nodes: usize,
}

/// One row of a field-grid export.
#[derive(Debug, Clone, Copy)]
pub struct FieldSample {
    pub x: f64,
    pub y: f64,
    pub phi: f64,
    pub b_inv: f64,
    pub b: f64,
    pub mass: f64,
}

fn check_margin(bg: &DilatonBackground, grid: &GridSpec2D) -> Result<()> {
    let margin = SINGULARITY_MARGIN_CELLS * grid.h;
    for j in 0..grid.ny {
        for i in 0..grid.nx {
            let (x, y) = (grid.x(i), grid.y(j));
            let distance = bg.singularity_distance(x, y);
            if distance < margin {
                return Err(Error::GridTouchesSingularity {
                    x,
                    y,
                    margin,
                    distance,
                });
            }
        }
    }
    Ok(())
}

/// Evaluates R = (∂²ₓ + ∂²ᵧ)φ − 2κ̃(Λ/κ²)e^{2κ̃φ} for an arbitrary φ field
/// with second-order central differences.
///
/// This is the oracle form: it never looks at how φ was produced, so it can
/// check exact backgrounds and negative controls alike.
pub fn liouville_residual_of<F>(
    phi_at: F,
    constants: &PhysicalConstants,
    grid: &GridSpec2D,
) -> Result<ResidualStats>
where
    F: Fn(f64, f64) -> Result<f64>,
{
    constants.validate()?;
    let (nx, ny, h) = (grid.nx, grid.ny, grid.h);
    let mut phi = vec![0.0f64; nx * ny];
    for j in 0..ny {
        for i in 0..nx {
            phi[j * nx + i] = phi_at(grid.x(i), grid.y(j))?;
        }
    }
    let kt = constants.kappa_tilde();
    let source_scale = 2.0 * kt * constants.lambda / (constants.kappa * constants.kappa);
    let inv_h2 = 1.0 / (h * h);
    let mut max_abs = 0.0f64;
    let mut sum_sq = 0.0f64;
    let mut count = 0usize;
    for j in 1..ny - 1 {
        for i in 1..nx - 1 {
            let p = phi[j * nx + i];
            let lap = (phi[j * nx + i - 1] + phi[j * nx + i + 1] + phi[(j - 1) * nx + i]
                + phi[(j + 1) * nx + i]
                - 4.0 * p)
                * inv_h2;
            let r = lap - source_scale * (2.0 * kt * p).exp();
            max_abs = max_abs.max(r.abs());
            sum_sq += r * r;
            count += 1;
        }
    }
    if count == 0 {
        return Err(Error::InvalidGrid("no interior nodes".into()));
    }
    Ok(ResidualStats {
        max_abs,
        l2: (sum_sq * h * h).sqrt(),
        interior_nodes: count,
    })
}

/// Residual of an exact background on a grid. The grid must keep the stated
/// margin from singular loci and zeros of f'.
pub fn liouville_residual(bg: &DilatonBackground, grid: &GridSpec2D) -> Result<ResidualStats> {
    check_margin(bg, grid)?;
    liouville_residual_of(|x, y| bg.phi(x, y), bg.constants(), grid)
}

/// Samples all exported fields on a grid (CSV rows `x,y,phi,b_inv,b,mass`).
pub fn field_grid(bg: &DilatonBackground, grid: &GridSpec2D) -> Result<Vec<FieldSample>> {
    check_margin(bg, grid)?;
    let mut rows = Vec::with_capacity(grid.nx * grid.ny);
    for j in 0..grid.ny {
        for i in 0..grid.nx {
            let (x, y) = (grid.x(i), grid.y(j));
            let p = bg.eval(x, y)?;
            rows.push(FieldSample {
                x,
                y,
                phi: p.phi,
                b_inv: p.b_inv,
                b: p.b,
                mass: p.mass,
            });
        }
    }
    Ok(rows)
}
