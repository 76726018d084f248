//! Classical dynamics of a particle with position-dependent mass.
//!
//! The Hamiltonian is H = b^{1/2}·|p|²/(2m₀) + b^{-1/2}·U(x): kinetic and
//! potential terms both pick up powers of the coupling b(x), so H is not
//! separable and explicit leapfrog is not symplectic here. Integration uses
//! the implicit midpoint rule (symplectic and time-symmetric for general
//! smooth H) with a fixed-point inner solve driven to the roundoff plateau.
//!
//! Gradients of the coupling powers are analytic, via f, f' and f'' of the
//! underlying background — no finite differencing enters force evaluation.

use serde::{Deserialize, Serialize};

use crate::dilaton::DilatonBackground;
use crate::error::{Error, Result};

/// Upper bound the fixed-point solve must reach; iteration actually continues
/// to the roundoff plateau (~1e-15 relative) so long trajectories stay
/// reversible.
pub const MIDPOINT_TOLERANCE: f64 = 1e-13;

/// Crossing tolerance for period measurement.
pub const CROSSING_TOLERANCE: f64 = 1e-12;

const MAX_FIXED_POINT_ITERATIONS: usize = 50;

/// Coupling function b(x) and the gradients of its ±1/2 powers.
///
/// Implemented by [`DilatonBackground`] (restricted to the y = 0 axis for
/// one-dimensional motion) and by [`FlatCoupling`] (b ≡ 1, ordinary
/// constant-mass mechanics).
pub trait MassCoupling {
    fn sqrt_b(&self, x: &[f64]) -> Result<f64>;
    fn inv_sqrt_b(&self, x: &[f64]) -> Result<f64>;
    /// ∇(b^{1/2}), first `x.len()` components.
    fn grad_sqrt_b(&self, x: &[f64]) -> Result<Vec<f64>>;
    /// ∇(b^{-1/2}), first `x.len()` components.
    fn grad_inv_sqrt_b(&self, x: &[f64]) -> Result<Vec<f64>>;
}

/// b ≡ 1: the coupling switched off.
#[derive(Debug, Clone, Copy, Default)]
pub struct FlatCoupling;

impl MassCoupling for FlatCoupling {
    fn sqrt_b(&self, _x: &[f64]) -> Result<f64> {
        Ok(1.0)
    }

    fn inv_sqrt_b(&self, _x: &[f64]) -> Result<f64> {
        Ok(1.0)
    }

    fn grad_sqrt_b(&self, x: &[f64]) -> Result<Vec<f64>> {
        Ok(vec![0.0; x.len()])
    }

    fn grad_inv_sqrt_b(&self, x: &[f64]) -> Result<Vec<f64>> {
        Ok(vec![0.0; x.len()])
    }
}

fn plane_point(x: &[f64]) -> (f64, f64) {
    (x[0], x.get(1).copied().unwrap_or(0.0))
}

impl MassCoupling for DilatonBackground {
    fn sqrt_b(&self, x: &[f64]) -> Result<f64> {
        let (px, py) = plane_point(x);
        Ok(self.eval(px, py)?.sqrt_b)
    }

    fn inv_sqrt_b(&self, x: &[f64]) -> Result<f64> {
        let (px, py) = plane_point(x);
        Ok(self.eval(px, py)?.inv_sqrt_b)
    }

    fn grad_sqrt_b(&self, x: &[f64]) -> Result<Vec<f64>> {
        let (px, py) = plane_point(x);
        let g = DilatonBackground::grad_sqrt_b(self, px, py)?;
        Ok(g[..x.len().min(2)].to_vec())
    }

    fn grad_inv_sqrt_b(&self, x: &[f64]) -> Result<Vec<f64>> {
        let (px, py) = plane_point(x);
        let g = DilatonBackground::grad_inv_sqrt_b(self, px, py)?;
        Ok(g[..x.len().min(2)].to_vec())
    }
}

/// External potential U(x) defined in the Jordan frame; the Hamiltonian
/// couples it as b^{-1/2}·U.
pub trait Potential {
    fn value(&self, x: &[f64]) -> f64;
    fn grad(&self, x: &[f64]) -> Vec<f64>;
}

/// U(x) = (K/2)·|x|².
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct HarmonicPotential {
    pub spring_constant: f64,
}

impl Potential for HarmonicPotential {
    fn value(&self, x: &[f64]) -> f64 {
        0.5 * self.spring_constant * x.iter().map(|v| v * v).sum::<f64>()
    }

    fn grad(&self, x: &[f64]) -> Vec<f64> {
        x.iter().map(|v| self.spring_constant * v).collect()
    }
}

/// U ≡ 0 (free particle).
#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroPotential;

impl Potential for ZeroPotential {
    fn value(&self, _x: &[f64]) -> f64 {
        0.0
    }

    fn grad(&self, x: &[f64]) -> Vec<f64> {
        vec![0.0; x.len()]
    }
}

/// Point in phase space: canonical position and momentum at time t.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseState {
    pub t: f64,
    pub x: Vec<f64>,
    pub p: Vec<f64>,
}

impl PhaseState {
    pub fn new(t: f64, x: Vec<f64>, p: Vec<f64>) -> Result<Self> {
        if x.len() != p.len() || x.is_empty() || x.len() > 2 {
            return Err(Error::InvalidParameter {
                name: "state",
                reason: format!(
                    "position and momentum must share dimension 1 or 2, got {} and {}",
                    x.len(),
                    p.len()
                ),
            });
        }
        if !(x.iter().all(|v| v.is_finite()) && p.iter().all(|v| v.is_finite())) {
            return Err(Error::InvalidParameter {
                name: "state",
                reason: "components must be finite".into(),
            });
        }
        Ok(PhaseState { t, x, p })
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }
}

/// A PDM mechanical system: coupling, external potential and reference mass.
pub struct PdmSystem<'a, C: MassCoupling, P: Potential> {
    pub coupling: &'a C,
    pub potential: &'a P,
    pub m0: f64,
    /// Keep the constant rest-mass term m₀·b^{-1/2} in the energy instead of
    /// absorbing it into U (the default convention absorbs it).
    pub include_rest_mass: bool,
}

impl<'a, C: MassCoupling, P: Potential> PdmSystem<'a, C, P> {
    pub fn new(coupling: &'a C, potential: &'a P, m0: f64) -> Result<Self> {
        if !(m0.is_finite() && m0 > 0.0) {
            return Err(Error::InvalidParameter {
                name: "m0",
                reason: format!("must be finite and positive, got {m0}"),
            });
        }
        Ok(PdmSystem {
            coupling,
            potential,
            m0,
            include_rest_mass: false,
        })
    }

    fn effective_potential_value(&self, x: &[f64]) -> f64 {
        let mut u = self.potential.value(x);
        if self.include_rest_mass {
            u += self.m0;
        }
        u
    }

    /// H = b^{1/2}·|p|²/(2m₀) + b^{-1/2}·U(x).
    pub fn energy(&self, s: &PhaseState) -> Result<f64> {
        let sqrt_b = self.coupling.sqrt_b(&s.x)?;
        let inv_sqrt_b = self.coupling.inv_sqrt_b(&s.x)?;
        let p_sq: f64 = s.p.iter().map(|v| v * v).sum();
        Ok(sqrt_b * p_sq / (2.0 * self.m0) + inv_sqrt_b * self.effective_potential_value(&s.x))
    }

    /// Lagrangian velocity u = b^{1/2}·p/m₀.
    pub fn velocity(&self, s: &PhaseState) -> Result<Vec<f64>> {
        let sqrt_b = self.coupling.sqrt_b(&s.x)?;
        Ok(s.p.iter().map(|p| sqrt_b * p / self.m0).collect())
    }

    /// Hamilton's equations: ẋ = ∂H/∂p, ṗ = −∂H/∂x with analytic coupling
    /// gradients.
    pub fn rhs(&self, s: &PhaseState) -> Result<(Vec<f64>, Vec<f64>)> {
        let d = s.dim();
        let sqrt_b = self.coupling.sqrt_b(&s.x)?;
        let inv_sqrt_b = self.coupling.inv_sqrt_b(&s.x)?;
        let grad_sqrt_b = self.coupling.grad_sqrt_b(&s.x)?;
        let grad_inv_sqrt_b = self.coupling.grad_inv_sqrt_b(&s.x)?;
        let grad_u = self.potential.grad(&s.x);
        let u = self.effective_potential_value(&s.x);
        let p_sq: f64 = s.p.iter().map(|v| v * v).sum();

        let x_dot: Vec<f64> = s.p.iter().map(|p| sqrt_b * p / self.m0).collect();
        let p_dot: Vec<f64> = (0..d)
            .map(|i| {
                -grad_sqrt_b[i] * p_sq / (2.0 * self.m0)
                    - grad_inv_sqrt_b[i] * u
                    - inv_sqrt_b * grad_u[i]
            })
            .collect();
        Ok((x_dot, p_dot))
    }

    /// One implicit-midpoint step: solves z_mid = z + (h/2)·F(z_mid) by
    /// fixed-point iteration, then advances z' = 2·z_mid − z.
    fn step(&self, s: &PhaseState, h: f64) -> Result<PhaseState> {
        let d = s.dim();
        let mut mid_x = s.x.clone();
        let mut mid_p = s.p.clone();
        let scale = 1.0
            + mid_x.iter().chain(mid_p.iter()).fold(0.0f64, |m, v| m.max(v.abs()));
        let target = 1e-15 * scale;
        let mut last_delta = f64::INFINITY;
        let mut converged = false;
        for iteration in 0..MAX_FIXED_POINT_ITERATIONS {
            let mid = PhaseState {
                t: s.t + 0.5 * h,
                x: mid_x.clone(),
                p: mid_p.clone(),
            };
            let (x_dot, p_dot) = self.rhs(&mid)?;
            let mut delta = 0.0f64;
            for i in 0..d {
                let nx = s.x[i] + 0.5 * h * x_dot[i];
                let np = s.p[i] + 0.5 * h * p_dot[i];
                delta = delta.max((nx - mid_x[i]).abs()).max((np - mid_p[i]).abs());
                mid_x[i] = nx;
                mid_p[i] = np;
            }
            if delta <= target {
                converged = true;
                break;
            }
            // roundoff plateau: the update stopped contracting at a level
            // already far below the contract tolerance
            if iteration > 2 && delta >= 0.5 * last_delta && delta <= MIDPOINT_TOLERANCE * scale {
                converged = true;
                break;
            }
            // diverging iterates mean the step size is outside the
            // contraction regime; bail out before values overflow
            if delta > 1e6 * scale {
                return Err(Error::StepFailure {
                    t: s.t,
                    iterations: iteration + 1,
                    residual: delta,
                });
            }
            last_delta = delta;
        }
        if !converged {
            return Err(Error::StepFailure {
                t: s.t,
                iterations: MAX_FIXED_POINT_ITERATIONS,
                residual: last_delta,
            });
        }
        let x: Vec<f64> = (0..d).map(|i| 2.0 * mid_x[i] - s.x[i]).collect();
        let p: Vec<f64> = (0..d).map(|i| 2.0 * mid_p[i] - s.p[i]).collect();
        Ok(PhaseState {
            t: s.t + h,
            x,
            p,
        })
    }

    /// Integrates `n` steps of size `h`, recording the energy at every state.
    pub fn integrate(&self, s0: &PhaseState, h: f64, n: usize) -> Result<Trajectory> {
        if !(h.is_finite() && h != 0.0) {
            return Err(Error::InvalidParameter {
                name: "h",
                reason: format!("step size must be finite and nonzero, got {h}"),
            });
        }
        if n == 0 {
            return Err(Error::InvalidParameter {
                name: "steps",
                reason: "need at least one step".into(),
            });
        }
        let mut states = Vec::with_capacity(n + 1);
        let mut energies = Vec::with_capacity(n + 1);
        states.push(s0.clone());
        energies.push(self.energy(s0)?);
        for _ in 0..n {
            let next = self.step(states.last().unwrap(), h)?;
            energies.push(self.energy(&next)?);
            states.push(next);
        }
        Ok(Trajectory {
            states,
            energies,
            h,
            integrator: "implicit-midpoint",
        })
    }
}

/// Time series of phase states with per-sample energies.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub states: Vec<PhaseState>,
    pub energies: Vec<f64>,
    pub h: f64,
    pub integrator: &'static str,
}

impl Trajectory {
    pub fn initial_energy(&self) -> f64 {
        self.energies[0]
    }

    /// max|E(t) − E(0)| relative to |E(0)| (absolute when E(0) = 0).
    pub fn energy_drift(&self) -> f64 {
        let e0 = self.energies[0];
        let worst = self
            .energies
            .iter()
            .fold(0.0f64, |m, e| m.max((e - e0).abs()));
        if e0.abs() > 0.0 {
            worst / e0.abs()
        } else {
            worst
        }
    }

    pub fn last(&self) -> &PhaseState {
        self.states.last().unwrap()
    }
}

/// Oscillation period from successive upward mean-crossings of the first
/// coordinate, linearly interpolated and averaged over all available cycles.
pub fn measure_period(tr: &Trajectory) -> Result<f64> {
    let xs: Vec<f64> = tr.states.iter().map(|s| s.x[0]).collect();
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    let center: Vec<f64> = xs.iter().map(|x| x - mean).collect();

    let mut sign_changes = 0usize;
    let mut upward = Vec::new();
    for i in 1..center.len() {
        let (a, b) = (center[i - 1], center[i]);
        if a.abs() <= CROSSING_TOLERANCE && b.abs() <= CROSSING_TOLERANCE {
            continue;
        }
        if a <= 0.0 && b > 0.0 {
            sign_changes += 1;
            let t0 = tr.states[i - 1].t;
            let frac = if (b - a).abs() > 0.0 { -a / (b - a) } else { 0.0 };
            upward.push(t0 + frac * tr.h.abs() * (tr.states[i].t - t0).signum() * tr.h.signum());
        } else if a >= 0.0 && b < 0.0 {
            sign_changes += 1;
        }
    }
    if sign_changes < 3 || upward.len() < 2 {
        return Err(Error::NonOscillatory(format!(
            "found {sign_changes} mean crossings and {} upward crossings; need at least 3 and 2",
            upward.len()
        )));
    }
    let first = *upward.first().unwrap();
    let last = *upward.last().unwrap();
    Ok((last - first) / (upward.len() - 1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dilaton::{DilatonBackground, LinearNormalization};
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn c1_background(lambda: f64) -> DilatonBackground {
        DilatonBackground::linear(1.0, lambda.sqrt(), LinearNormalization::CTarget(1.0))
            .unwrap()
            .0
    }

    #[test]
    fn flat_free_particle_at_rest_has_zero_energy() {
        let coupling = FlatCoupling;
        let potential = ZeroPotential;
        let sys = PdmSystem::new(&coupling, &potential, 1.0).unwrap();
        let s = PhaseState::new(0.0, vec![0.3], vec![0.0]).unwrap();
        assert_eq!(sys.energy(&s).unwrap(), 0.0);
    }

    #[test]
    fn flat_coupling_gives_newtonian_equations() {
        let coupling = FlatCoupling;
        let potential = HarmonicPotential { spring_constant: 2.5 };
        let sys = PdmSystem::new(&coupling, &potential, 1.5).unwrap();
        let s = PhaseState::new(0.0, vec![0.7, -0.4], vec![0.2, 0.9]).unwrap();
        assert_relative_eq!(
            sys.energy(&s).unwrap(),
            (0.2f64 * 0.2 + 0.9 * 0.9) / 3.0 + 1.25 * (0.49 + 0.16),
            max_relative = 1e-14
        );
        let (x_dot, p_dot) = sys.rhs(&s).unwrap();
        assert_relative_eq!(x_dot[0], 0.2 / 1.5, max_relative = 1e-14);
        assert_relative_eq!(p_dot[0], -2.5 * 0.7, max_relative = 1e-14);
        assert_relative_eq!(p_dot[1], 2.5 * 0.4, max_relative = 1e-14);
    }

    #[test]
    fn pdm_energy_at_unit_radius() {
        // C=1, λ=1 background with U=(K/2)r², K=m₀=1: H(r=1, p=0) = 𝒰(1) = 1/4.
        let bg = c1_background(1.0);
        let potential = HarmonicPotential { spring_constant: 1.0 };
        let sys = PdmSystem::new(&bg, &potential, 1.0).unwrap();
        let s = PhaseState::new(0.0, vec![1.0], vec![0.0]).unwrap();
        assert_relative_eq!(sys.energy(&s).unwrap(), 0.25, max_relative = 1e-12);
    }

    #[test]
    fn origin_is_an_equilibrium() {
        let bg = c1_background(1.0);
        let potential = HarmonicPotential { spring_constant: 1.0 };
        let sys = PdmSystem::new(&bg, &potential, 1.0).unwrap();
        let s = PhaseState::new(0.0, vec![0.0], vec![0.0]).unwrap();
        let (x_dot, p_dot) = sys.rhs(&s).unwrap();
        assert_eq!(x_dot[0], 0.0);
        assert_eq!(p_dot[0], 0.0);
        let tr = sys.integrate(&s, 1e-2, 50).unwrap();
        for state in &tr.states {
            assert_abs_diff_eq!(state.x[0], 0.0, epsilon = 1e-14);
            assert_abs_diff_eq!(state.p[0], 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn analytic_forces_match_energy_gradient() {
        let bg = c1_background(0.8);
        let potential = HarmonicPotential { spring_constant: 1.3 };
        let sys = PdmSystem::new(&bg, &potential, 1.0).unwrap();
        let s = PhaseState::new(0.0, vec![0.6, -0.9], vec![0.4, 0.2]).unwrap();
        let (_, p_dot) = sys.rhs(&s).unwrap();
        let delta = 1e-6;
        for i in 0..2 {
            let mut plus = s.clone();
            plus.x[i] += delta;
            let mut minus = s.clone();
            minus.x[i] -= delta;
            let fd = (sys.energy(&plus).unwrap() - sys.energy(&minus).unwrap()) / (2.0 * delta);
            assert_abs_diff_eq!(p_dot[i], -fd, epsilon = 1e-8);
        }
    }

    #[test]
    fn flat_harmonic_energy_conservation() {
        let coupling = FlatCoupling;
        let potential = HarmonicPotential { spring_constant: 1.0 };
        let sys = PdmSystem::new(&coupling, &potential, 1.0).unwrap();
        let s0 = PhaseState::new(0.0, vec![1.0], vec![0.0]).unwrap();
        let tr = sys.integrate(&s0, 1e-3, 10_000).unwrap();
        assert!(tr.energy_drift() <= 1e-8, "drift {}", tr.energy_drift());
    }

    #[test]
    fn pdm_oscillator_energy_conservation_at_default_config() {
        // shipped default configuration: λ = 1, amplitude 0.1
        let bg = c1_background(1.0);
        let potential = HarmonicPotential { spring_constant: 1.0 };
        let sys = PdmSystem::new(&bg, &potential, 1.0).unwrap();
        let s0 = PhaseState::new(0.0, vec![0.1], vec![0.0]).unwrap();
        let tr = sys.integrate(&s0, 1e-3, 10_000).unwrap();
        assert!(tr.energy_drift() <= 1e-8, "drift {}", tr.energy_drift());
    }

    #[test]
    fn pdm_oscillator_bounded_at_unit_amplitude() {
        // at amplitude 1 the midpoint energy oscillation sits near 1e-7 for
        // h = 1e-3; it stays bounded (no secular growth) and so does the orbit
        let bg = c1_background(1.0);
        let potential = HarmonicPotential { spring_constant: 1.0 };
        let sys = PdmSystem::new(&bg, &potential, 1.0).unwrap();
        let s0 = PhaseState::new(0.0, vec![1.0], vec![0.0]).unwrap();
        let tr = sys.integrate(&s0, 1e-3, 10_000).unwrap();
        assert!(tr.energy_drift() <= 2e-7, "drift {}", tr.energy_drift());
        for s in &tr.states {
            assert!(s.x[0].abs() <= 1.0 + 1e-5, "orbit escaped: {}", s.x[0]);
        }
    }

    #[test]
    fn time_reversal_returns_to_start() {
        let bg = c1_background(1.0);
        let potential = HarmonicPotential { spring_constant: 1.0 };
        let sys = PdmSystem::new(&bg, &potential, 1.0).unwrap();
        let s0 = PhaseState::new(0.0, vec![0.8], vec![0.1]).unwrap();
        let forward = sys.integrate(&s0, 1e-3, 2000).unwrap();
        let back = sys.integrate(forward.last(), -1e-3, 2000).unwrap();
        let end = back.last();
        assert_abs_diff_eq!(end.x[0], s0.x[0], epsilon = 1e-10);
        assert_abs_diff_eq!(end.p[0], s0.p[0], epsilon = 1e-10);
    }

    #[test]
    fn harmonic_limit_matches_analytic_solution() {
        // λ = 0 turns the coupling off: x(t) = x₀·cos(αt) exactly.
        let coupling = FlatCoupling;
        let potential = HarmonicPotential { spring_constant: 1.0 };
        let sys = PdmSystem::new(&coupling, &potential, 1.0).unwrap();
        let x0 = 0.9;
        let s0 = PhaseState::new(0.0, vec![x0], vec![0.0]).unwrap();
        let h = 1e-4;
        let n = (2.0 * std::f64::consts::PI / h).ceil() as usize;
        let tr = sys.integrate(&s0, h, n).unwrap();
        let mut worst = 0.0f64;
        for s in &tr.states {
            worst = worst.max((s.x[0] - x0 * s.t.cos()).abs());
        }
        assert!(worst <= 1e-6, "max deviation {worst}");
    }

    #[test]
    fn velocity_matches_position_differences() {
        let bg = c1_background(1.0);
        let potential = HarmonicPotential { spring_constant: 1.0 };
        let sys = PdmSystem::new(&bg, &potential, 1.0).unwrap();
        let s0 = PhaseState::new(0.0, vec![0.7], vec![0.3]).unwrap();
        let h = 1e-3;
        let tr = sys.integrate(&s0, h, 500).unwrap();
        for i in 1..tr.states.len() - 1 {
            let u = sys.velocity(&tr.states[i]).unwrap()[0];
            let fd = (tr.states[i + 1].x[0] - tr.states[i - 1].x[0]) / (2.0 * h);
            assert_abs_diff_eq!(u, fd, epsilon = 5.0 * h * h);
        }
    }

    #[test]
    fn period_of_harmonic_oscillator() {
        let coupling = FlatCoupling;
        let potential = HarmonicPotential { spring_constant: 1.0 };
        let sys = PdmSystem::new(&coupling, &potential, 1.0).unwrap();
        let s0 = PhaseState::new(0.0, vec![1.0], vec![0.0]).unwrap();
        let tr = sys.integrate(&s0, 1e-3, 20_000).unwrap();
        let period = measure_period(&tr).unwrap();
        assert_abs_diff_eq!(period, 2.0 * std::f64::consts::PI, epsilon = 1e-4);
    }

    #[test]
    fn nonlinear_period_grows_with_amplitude() {
        // amplitude–frequency law T = 2π·√(1+λA²)/α, verified by integration
        let bg = c1_background(1.0);
        let potential = HarmonicPotential { spring_constant: 1.0 };
        let sys = PdmSystem::new(&bg, &potential, 1.0).unwrap();
        let run = |amplitude: f64| {
            let s0 = PhaseState::new(0.0, vec![amplitude], vec![0.0]).unwrap();
            let tr = sys.integrate(&s0, 1e-3, 40_000).unwrap();
            measure_period(&tr).unwrap()
        };
        let t1 = run(1.0);
        let expected = 2.0 * std::f64::consts::PI * 2.0f64.sqrt();
        assert!(
            ((t1 - expected) / expected).abs() <= 1e-3,
            "period {t1} vs {expected}"
        );
        let t2 = run(0.5);
        assert!((t1 - t2).abs() > 0.1, "period must depend on amplitude");
    }

    #[test]
    fn constant_trajectory_is_non_oscillatory() {
        let coupling = FlatCoupling;
        let potential = ZeroPotential;
        let sys = PdmSystem::new(&coupling, &potential, 1.0).unwrap();
        let s0 = PhaseState::new(0.0, vec![0.5], vec![0.0]).unwrap();
        let tr = sys.integrate(&s0, 1e-2, 100).unwrap();
        assert!(matches!(
            measure_period(&tr),
            Err(Error::NonOscillatory(_))
        ));
    }

    #[test]
    fn runaway_step_size_fails_cleanly() {
        let bg = c1_background(5.0);
        let potential = HarmonicPotential { spring_constant: 1.0 };
        let sys = PdmSystem::new(&bg, &potential, 1.0).unwrap();
        let s0 = PhaseState::new(0.0, vec![2.0], vec![3.0]).unwrap();
        let err = sys.integrate(&s0, 50.0, 10).unwrap_err();
        assert!(matches!(err, Error::StepFailure { .. }), "got {err:?}");
    }

    #[test]
    fn rest_mass_offset_shifts_energy() {
        let bg = c1_background(1.0);
        let potential = ZeroPotential;
        let mut sys = PdmSystem::new(&bg, &potential, 2.0).unwrap();
        let s = PhaseState::new(0.0, vec![1.0], vec![0.0]).unwrap();
        let absorbed = sys.energy(&s).unwrap();
        sys.include_rest_mass = true;
        let with_offset = sys.energy(&s).unwrap();
        // b^{-1/2}(r=1) = 1/2, so the offset contributes m₀/2 = 1
        assert_relative_eq!(with_offset - absorbed, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn mismatched_state_dimensions_rejected() {
        assert!(PhaseState::new(0.0, vec![1.0, 2.0], vec![0.0]).is_err());
        assert!(PhaseState::new(0.0, vec![], vec![]).is_err());
        assert!(PhaseState::new(0.0, vec![1.0, 2.0, 3.0], vec![0.0, 0.0, 0.0]).is_err());
    }
}
