//! Dilaton-string energetics for the f(ζ) = Aζ background on the Λ < 0
//! branch, with C = 1 and A² = λ.
//!
//! The string profile is φ(ξ) = −(1/κ̃)·ln(ξ + 1) with ξ = λr². Its energy
//! density ℋ = ½(∂ᵣφ)² + V(φ) carries a negative potential part
//! V = −(|Λ|/κ²)·b⁻¹, so the weak energy condition fails inside a critical
//! radius while the total tension stays positive for large enough cutoffs.
//! Everything here has both a quadrature route and a closed form; the two are
//! kept independent so each can check the other.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad;

/// Relative tolerance used for tension quadrature.
pub const TENSION_QUAD_REL_TOL: f64 = 1e-12;

/// Parameters of a dilaton string: nonlinearity λ = A², cosmological constant
/// magnitude |Λ| (the branch is Λ = −|Λ|), coupling κ, and the dimensionless
/// large-distance cutoff ξ_C = λ·r_C².
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StringConfig {
    pub lambda: f64,
    pub abs_lambda: f64,
    pub kappa: f64,
    pub xi_c: f64,
}

impl StringConfig {
    pub fn new(lambda: f64, abs_lambda: f64, kappa: f64, xi_c: f64) -> Result<Self> {
        let cfg = StringConfig {
            lambda,
            abs_lambda,
            kappa,
            xi_c,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// The C = 1 consistency point at unit coupling: (κ=1, λ, |Λ|=12λ).
    pub fn c_unity(lambda: f64, xi_c: f64) -> Result<Self> {
        StringConfig::new(lambda, 12.0 * lambda, 1.0, xi_c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda.is_finite() && self.lambda > 0.0) {
            return Err(Error::InvalidParameter {
                name: "lambda",
                reason: format!("must be finite and positive, got {}", self.lambda),
            });
        }
        if !(self.abs_lambda.is_finite() && self.abs_lambda > 0.0) {
            return Err(Error::InvalidParameter {
                name: "abs_lambda",
                reason: format!("must be finite and positive, got {}", self.abs_lambda),
            });
        }
        if !(self.kappa.is_finite() && self.kappa > 0.0) {
            return Err(Error::InvalidParameter {
                name: "kappa",
                reason: format!("must be finite and positive, got {}", self.kappa),
            });
        }
        if !(self.xi_c.is_finite() && self.xi_c >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "xi_c",
                reason: format!("must be finite and non-negative, got {}", self.xi_c),
            });
        }
        Ok(())
    }

    pub fn kappa_tilde_sq(&self) -> f64 {
        self.kappa * self.kappa / 6.0
    }

    fn kappa_tilde(&self) -> f64 {
        -self.kappa_tilde_sq().sqrt()
    }

    pub fn kappa_sq(&self) -> f64 {
        self.kappa * self.kappa
    }

    /// Radial cutoff r_C = √(ξ_C/λ).
    pub fn r_c(&self) -> f64 {
        (self.xi_c / self.lambda).sqrt()
    }

    /// ξ_crit = |Λ|κ̃²/(2λκ²); the energy density is non-positive for ξ ≤ ξ_crit.
    pub fn xi_crit(&self) -> f64 {
        self.abs_lambda * self.kappa_tilde_sq() / (2.0 * self.lambda * self.kappa_sq())
    }

    /// r_crit = √(|Λ|)·|κ̃| / (√2·λ·κ).
    pub fn r_crit(&self) -> f64 {
        self.abs_lambda.sqrt() * self.kappa_tilde_sq().sqrt()
            / ((2.0f64).sqrt() * self.lambda * self.kappa)
    }

    /// Dilaton profile φ(r) = −(1/κ̃)·ln(λr² + 1).
    pub fn phi(&self, r: f64) -> f64 {
        -(self.lambda * r * r + 1.0).ln() / self.kappa_tilde()
    }
}

/// String potential V(φ) = −(|Λ|/κ²)·e^{2κ̃φ}.
pub fn potential_v(phi: f64, cfg: &StringConfig) -> f64 {
    -(cfg.abs_lambda / cfg.kappa_sq()) * (2.0 * cfg.kappa_tilde() * phi).exp()
}

/// Energy density split at radius r.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DensityPoint {
    pub r: f64,
    pub xi: f64,
    pub kinetic: f64,
    pub potential: f64,
    pub total: f64,
}

/// ℋ(r) = ½(∂ᵣφ)² + V(φ) = [2λξ/κ̃² − |Λ|/κ²] / (1+ξ)².
pub fn energy_density(r: f64, cfg: &StringConfig) -> DensityPoint {
    let xi = cfg.lambda * r * r;
    let denom = (1.0 + xi) * (1.0 + xi);
    let kinetic = 2.0 * cfg.lambda * xi / cfg.kappa_tilde_sq() / denom;
    let potential = -(cfg.abs_lambda / cfg.kappa_sq()) / denom;
    DensityPoint {
        r,
        xi,
        kinetic,
        potential,
        total: kinetic + potential,
    }
}

/// Samples `n` density points uniformly on [0, r_max].
pub fn density_profile(cfg: &StringConfig, r_max: f64, n: usize) -> Vec<DensityPoint> {
    let h = if n > 1 { r_max / (n - 1) as f64 } else { 0.0 };
    (0..n).map(|i| energy_density(i as f64 * h, cfg)).collect()
}

/// Tension parts from adaptive quadrature of μ = 2π∫₀^{r_C} ℋ(r)·r dr.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct QuadratureTension {
    pub mu_kin: f64,
    pub mu_pot: f64,
    pub mu: f64,
}

/// Integrates the kinetic and potential energy densities separately; each has
/// a fixed sign, so no cancellation enters the individual quadratures.
pub fn tension_quadrature(cfg: &StringConfig) -> Result<QuadratureTension> {
    cfg.validate()?;
    let r_c = cfg.r_c();
    if r_c == 0.0 {
        return Ok(QuadratureTension {
            mu_kin: 0.0,
            mu_pot: 0.0,
            mu: 0.0,
        });
    }
    let two_pi = 2.0 * std::f64::consts::PI;
    let kin = quad::integrate(
        |r| energy_density(r, cfg).kinetic * r,
        0.0,
        r_c,
        TENSION_QUAD_REL_TOL,
        1e-15,
    )?;
    let pot = quad::integrate(
        |r| energy_density(r, cfg).potential * r,
        0.0,
        r_c,
        TENSION_QUAD_REL_TOL,
        1e-15,
    )?;
    let mu_kin = two_pi * kin.value;
    let mu_pot = two_pi * pot.value;
    Ok(QuadratureTension {
        mu_kin,
        mu_pot,
        mu: mu_kin + mu_pot,
    })
}

/// Closed-form tension and its large-cutoff asymptotic form.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ClosedTension {
    pub mu_kin: f64,
    pub mu_pot: f64,
    pub mu: f64,
    /// (2π/κ̃²)(ln ξ_C − 1) − 2π|Λ|/(2λκ²), valid for ξ_C ≫ 1.
    pub mu_asymptotic: f64,
}

/// μ/2π = (1/κ̃²)[ln(ξ_C+1) + 1/(ξ_C+1) − 1] − (|Λ|/2λκ²)[1 − 1/(ξ_C+1)].
pub fn tension_closed_form(cfg: &StringConfig) -> ClosedTension {
    let two_pi = 2.0 * std::f64::consts::PI;
    let u = cfg.xi_c + 1.0;
    let mu_kin = two_pi / cfg.kappa_tilde_sq() * (u.ln() + 1.0 / u - 1.0);
    let mu_pot =
        -two_pi * cfg.abs_lambda / (2.0 * cfg.lambda * cfg.kappa_sq()) * (1.0 - 1.0 / u);
    let mu_asymptotic = two_pi / cfg.kappa_tilde_sq() * (cfg.xi_c.ln() - 1.0)
        - two_pi * cfg.abs_lambda / (2.0 * cfg.lambda * cfg.kappa_sq());
    ClosedTension {
        mu_kin,
        mu_pot,
        mu: mu_kin + mu_pot,
        mu_asymptotic,
    }
}

/// Weak-energy-condition core diagnostics.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct WecReport {
    pub r_crit: f64,
    pub xi_crit: f64,
    /// Bracketing cell [lo, hi] where the sampled ℋ changes sign.
    pub sign_change_lo: f64,
    pub sign_change_hi: f64,
    pub grid_step: f64,
    /// ℋ ≤ 0 on every sample left of the cell and > 0 right of it.
    pub sign_profile_consistent: bool,
}

/// Locates the sign change of ℋ(r) on a sample grid and compares it against
/// the closed-form critical radius.
pub fn critical_radius(cfg: &StringConfig) -> Result<WecReport> {
    cfg.validate()?;
    let r_crit = cfg.r_crit();
    let xi_crit = cfg.xi_crit();
    // sample out to 3·r_crit with a grid fine enough to isolate the crossing
    let n = 3001usize;
    let r_max = 3.0 * r_crit;
    let h = r_max / (n - 1) as f64;
    let mut lo = f64::NAN;
    let mut hi = f64::NAN;
    let mut consistent = true;
    let mut prev = energy_density(0.0, cfg).total;
    for i in 1..n {
        let r = i as f64 * h;
        let cur = energy_density(r, cfg).total;
        if prev <= 0.0 && cur > 0.0 {
            if lo.is_nan() {
                lo = r - h;
                hi = r;
            } else {
                consistent = false; // more than one crossing
            }
        }
        if prev > 0.0 && cur <= 0.0 {
            consistent = false;
        }
        prev = cur;
    }
    if lo.is_nan() {
        return Err(Error::NumericalRange {
            context: format!("no sign change of the energy density found below r = {r_max}"),
        });
    }
    Ok(WecReport {
        r_crit,
        xi_crit,
        sign_change_lo: lo,
        sign_change_hi: hi,
        grid_step: h,
        sign_profile_consistent: consistent,
    })
}

/// The sufficient tension-positivity condition ln(ξ_C + 1) > 1 + ξ_crit.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Positivity {
    pub flag: bool,
    /// ln(ξ_C + 1) − 1 − ξ_crit.
    pub margin: f64,
    /// Cutoff at which the margin vanishes: ξ_C = e^{1 + ξ_crit} − 1.
    pub threshold_xi_c: f64,
}

pub fn positivity_condition(cfg: &StringConfig) -> Positivity {
    let xi_crit = cfg.xi_crit();
    let margin = (cfg.xi_c + 1.0).ln() - 1.0 - xi_crit;
    Positivity {
        flag: margin > 0.0,
        margin,
        threshold_xi_c: (1.0 + xi_crit).exp() - 1.0,
    }
}

/// Full tension report: quadrature vs. closed form, asymptotics, WEC core and
/// the positivity criterion.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TensionReport {
    pub config: StringConfig,
    pub mu_kin: f64,
    pub mu_pot: f64,
    pub mu_closed: f64,
    pub mu_quadrature: f64,
    /// `None` when the large-cutoff form is meaningless (ξ_C = 0).
    pub mu_asymptotic: Option<f64>,
    /// |μ_quad − μ_closed| relative to the larger tension part; stable even
    /// near the cutoff where μ itself crosses zero.
    pub rel_discrepancy: f64,
    pub r_crit: f64,
    pub xi_crit: f64,
    pub positivity: Positivity,
}

pub fn tension_report(cfg: &StringConfig) -> Result<TensionReport> {
    let q = tension_quadrature(cfg)?;
    let c = tension_closed_form(cfg);
    let scale = c.mu_kin.abs().max(c.mu_pot.abs()).max(f64::MIN_POSITIVE);
    Ok(TensionReport {
        config: *cfg,
        mu_kin: q.mu_kin,
        mu_pot: q.mu_pot,
        mu_closed: c.mu,
        mu_quadrature: q.mu,
        mu_asymptotic: c.mu_asymptotic.is_finite().then_some(c.mu_asymptotic),
        rel_discrepancy: (q.mu - c.mu).abs() / scale,
        r_crit: cfg.r_crit(),
        xi_crit: cfg.xi_crit(),
        positivity: positivity_condition(cfg),
    })
}
