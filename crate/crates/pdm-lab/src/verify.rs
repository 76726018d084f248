//! The bundled verification suite: every module's invariants as pass/fail
//! checks with measured values and pinned thresholds.
//!
//! Checks are pure and independent, so they can fan out across worker
//! threads; results are ordered by check index regardless of scheduling, and
//! identical builds produce byte-identical reports.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::classical::{
    measure_period, FlatCoupling, HarmonicPotential, PdmSystem, PhaseState,
};
use crate::dilaton::{
    liouville_residual, DilatonBackground, GridSpec2D, LinearNormalization, PhysicalConstants,
};
use crate::expr::HolomorphicExpr;
use crate::quantum::{
    build_radial_hamiltonian, check_orthonormality, gram_deviation_with_measure,
    kinetic_from_spec, richardson_extrapolate, solve_spectrum, Dimension, OscillatorSpec,
    RadialGridParams,
};
use crate::string::{
    critical_radius, energy_density, positivity_condition, tension_closed_form,
    tension_quadrature, StringConfig,
};

/// Outcome of one invariant check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckResult {
    pub module: String,
    pub name: String,
    pub passed: bool,
    /// Headline measured quantity (meaning given in `detail`).
    pub measured: f64,
    pub threshold: f64,
    /// How `measured` compares against `threshold` for a pass.
    pub comparison: String,
    pub detail: String,
}

/// Aggregated verification report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyReport {
    pub passed: bool,
    pub checks_total: usize,
    pub checks_failed: usize,
    pub checks: Vec<CheckResult>,
}

struct Outcome {
    passed: bool,
    measured: f64,
    threshold: f64,
    comparison: &'static str,
    detail: String,
}

impl Outcome {
    fn le(measured: f64, threshold: f64, detail: impl Into<String>) -> Self {
        Outcome {
            passed: measured <= threshold,
            measured,
            threshold,
            comparison: "<=",
            detail: detail.into(),
        }
    }

    fn ge(measured: f64, threshold: f64, detail: impl Into<String>) -> Self {
        Outcome {
            passed: measured >= threshold,
            measured,
            threshold,
            comparison: ">=",
            detail: detail.into(),
        }
    }
}

type CheckFn = Box<dyn Fn() -> Outcome + Send + Sync>;

struct Check {
    module: &'static str,
    name: &'static str,
    run: CheckFn,
}

fn c1_background(lambda: f64) -> DilatonBackground {
    DilatonBackground::linear(1.0, lambda.sqrt(), LinearNormalization::CTarget(1.0))
        .unwrap()
        .0
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

// ---------------------------------------------------------------------------
// dilaton checks

fn check_identity_chain() -> Outcome {
    let backgrounds = vec![
        c1_background(1.0),
        DilatonBackground::new(
            PhysicalConstants::new(1.0, -12.0).unwrap(),
            HolomorphicExpr::exp(HolomorphicExpr::zeta()),
        )
        .unwrap(),
    ];
    let mut worst = 0.0f64;
    for bg in &backgrounds {
        for &(x, y) in &[(0.3, -0.2), (1.1, 0.7), (-0.6, 1.4)] {
            match bg.eval(x, y) {
                Ok(p) => {
                    let a = bg.constants().dilaton_slope();
                    worst = worst.max(rel(p.quarter_b * p.quarter_b, p.sqrt_b));
                    worst = worst.max((p.sqrt_b * p.inv_sqrt_b - 1.0).abs());
                    worst = worst.max(rel((a * p.phi).exp(), p.b));
                }
                Err(e) => {
                    return Outcome::le(
                        f64::INFINITY,
                        1e-12,
                        format!("background evaluation failed: {e}"),
                    )
                }
            }
        }
    }
    Outcome::le(
        worst,
        1e-12,
        "max relative error of b^{1/4}·b^{1/4}=b^{1/2}, b^{1/2}·b^{-1/2}=1, exp(aφ)=b",
    )
}

fn check_analytic_derivative() -> Outcome {
    let exprs = vec![
        HolomorphicExpr::linear(1.5),
        HolomorphicExpr::pow(HolomorphicExpr::zeta(), 3),
        HolomorphicExpr::exp(HolomorphicExpr::scale(
            Complex64::new(0.4, 0.3),
            HolomorphicExpr::zeta(),
        )),
        HolomorphicExpr::product(vec![
            HolomorphicExpr::zeta(),
            HolomorphicExpr::exp(HolomorphicExpr::zeta()),
        ]),
    ];
    let z = Complex64::new(0.37, -0.21);
    let h = 1e-5;
    let mut worst = 0.0f64;
    for f in &exprs {
        let exact = f.eval_df(z).unwrap();
        let fd = (f.eval(z + Complex64::new(h, 0.0)).unwrap()
            - f.eval(z - Complex64::new(h, 0.0)).unwrap())
            / Complex64::new(2.0 * h, 0.0);
        worst = worst.max((exact - fd).norm());
    }
    Outcome::le(
        worst,
        1e-8,
        "max |f'(ζ) − central difference| over the expression basket at h=1e-5",
    )
}

fn check_radial_symmetry() -> Outcome {
    let bg = c1_background(1.0);
    let mut worst = 0.0f64;
    for &r in &[0.4, 1.3, 2.6] {
        let base = bg.eval(r, 0.0).unwrap();
        for k in 1..8 {
            let theta = k as f64 * std::f64::consts::FRAC_PI_4;
            let p = bg.eval(r * theta.cos(), r * theta.sin()).unwrap();
            worst = worst.max(rel(p.b_inv, base.b_inv));
        }
    }
    Outcome::le(worst, 1e-14, "b⁻¹ variation around circles for f = Aζ")
}

fn residual_order(bg: &DilatonBackground) -> f64 {
    let coarse = GridSpec2D::from_ranges(-0.5, 0.5, 126, -0.5, 0.5, 126).unwrap();
    let fine = GridSpec2D::from_ranges(-0.5, 0.5, 251, -0.5, 0.5, 251).unwrap();
    let rc = liouville_residual(bg, &coarse).unwrap();
    let rf = liouville_residual(bg, &fine).unwrap();
    (rc.max_abs / rf.max_abs).log2()
}

fn check_liouville_order_linear() -> Outcome {
    let order = residual_order(&c1_background(1.0));
    Outcome::le(
        (order - 2.0).abs(),
        0.2,
        format!("discrete Liouville residual order {order:.3} for f = Aζ (target 2.0)"),
    )
}

fn check_liouville_order_exp() -> Outcome {
    let bg = DilatonBackground::new(
        PhysicalConstants::new(1.0, -12.0).unwrap(),
        HolomorphicExpr::exp(HolomorphicExpr::zeta()),
    )
    .unwrap();
    let order = residual_order(&bg);
    Outcome::le(
        (order - 2.0).abs(),
        0.2,
        format!("discrete Liouville residual order {order:.3} for f = exp(ζ) (target 2.0)"),
    )
}

// ---------------------------------------------------------------------------
// quantum checks

fn ladder_error(dimension: Dimension, exact: impl Fn(usize) -> f64) -> f64 {
    let spec = OscillatorSpec::new(0.0, 1.0, 1.0, dimension).unwrap();
    let (n1, n2) = match dimension {
        Dimension::One => (1000, 2001),
        Dimension::Two { .. } => (1000, 2000),
    };
    let solve = |n: usize| {
        let op = build_radial_hamiltonian(&spec, &RadialGridParams { n, r_max: 8.0 }).unwrap();
        let s = solve_spectrum(&op, 4).unwrap();
        (s.eigenvalues, op.h)
    };
    let (e1, h1) = solve(n1);
    let (e2, h2) = solve(n2);
    let mut worst = 0.0f64;
    for n in 0..4 {
        let extrapolated = richardson_extrapolate(e1[n], h1, e2[n], h2);
        worst = worst.max(rel(extrapolated, exact(n)));
    }
    worst
}

fn check_ladder_d1() -> Outcome {
    let worst = ladder_error(Dimension::One, |n| n as f64 + 0.5);
    Outcome::le(
        worst,
        1e-4,
        "harmonic ladder (n+1/2)ħα in d=1, Richardson-extrapolated, first 4 states",
    )
}

fn check_ladder_d2() -> Outcome {
    let worst = ladder_error(Dimension::Two { ell: 0 }, |n| 2.0 * n as f64 + 1.0);
    Outcome::le(
        worst,
        1e-4,
        "harmonic ladder (2n+1)ħα in d=2 ℓ=0, Richardson-extrapolated, first 4 states",
    )
}

fn check_kinetic_consistency() -> Outcome {
    let mut worst = 0.0f64;
    for dimension in [Dimension::One, Dimension::Two { ell: 0 }] {
        let spec = OscillatorSpec::new(0.25, 1.0, 1.0, dimension).unwrap();
        let params = RadialGridParams { n: 300, r_max: 9.0 };
        let op = build_radial_hamiltonian(&spec, &params).unwrap();
        let psi: Vec<f64> = op.nodes.iter().map(|&r| (-0.5 * r * r).exp()).collect();
        let free = kinetic_from_spec(&spec, &params, &psi).unwrap();
        let assembled = op.apply(&psi);
        let scale = free.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for (j, (a, b)) in free.iter().zip(&assembled).enumerate() {
            worst = worst.max((a - (b - op.potential[j] * psi[j])).abs() / scale);
        }
    }
    Outcome::le(
        worst,
        1e-12,
        "matrix-free factorized kinetic vs assembled matrix action",
    )
}

fn lambda_tenth_spectrum(n: usize) -> (crate::quantum::RadialOperator, crate::quantum::Spectrum) {
    let spec = OscillatorSpec::new(0.1, 1.0, 1.0, Dimension::One).unwrap();
    let op = build_radial_hamiltonian(&spec, &RadialGridParams { n, r_max: 26.0 }).unwrap();
    let s = solve_spectrum(&op, 6).unwrap();
    (op, s)
}

fn check_weighted_gram() -> Outcome {
    let (_, s) = lambda_tenth_spectrum(1500);
    Outcome::le(
        s.gram_deviation,
        1e-8,
        "Gram deviation of 6 eigenvectors under the weighted measure (λ=0.1)",
    )
}

fn check_unweighted_gram_negative_control() -> Outcome {
    let (op, s) = lambda_tenth_spectrum(1500);
    let plain = vec![op.h; op.len()];
    let deviation = gram_deviation_with_measure(&s.eigenvectors, &plain);
    Outcome::ge(
        deviation,
        1e-4,
        "Gram deviation without the weight must blow up (proves the measure matters)",
    )
}

fn check_rayleigh_bound() -> Outcome {
    let (op, s) = lambda_tenth_spectrum(800);
    let mut worst = f64::NEG_INFINITY;
    for &width in &[0.6f64, 1.0, 1.7] {
        let trial: Vec<f64> = op.nodes.iter().map(|&x| (-width * x * x).exp()).collect();
        worst = worst.max(s.eigenvalues[0] - op.rayleigh_quotient(&trial));
    }
    Outcome::le(
        worst,
        1e-12,
        "E₀ − min Rayleigh quotient over Gaussian trials (variational bound)",
    )
}

fn check_dirichlet_monotonicity() -> Outcome {
    let spec = OscillatorSpec::new(0.1, 1.0, 1.0, Dimension::One).unwrap();
    let e_at = |r_max: f64, n: usize| {
        let op = build_radial_hamiltonian(&spec, &RadialGridParams { n, r_max }).unwrap();
        solve_spectrum(&op, 3).unwrap().eigenvalues
    };
    let small = e_at(20.0, 1000);
    let large = e_at(25.0, 1250);
    let mut worst = f64::NEG_INFINITY;
    for (s, l) in small.iter().zip(&large) {
        worst = worst.max(l - s);
    }
    Outcome::le(
        worst,
        1e-7,
        "growing the Dirichlet box never raises an eigenvalue beyond tolerance",
    )
}

fn check_expanded_form_order() -> Outcome {
    let error_at = |n: usize| {
        let spec = OscillatorSpec::new(0.3, 1.0, 1.0, Dimension::Two { ell: 0 }).unwrap();
        let params = RadialGridParams { n, r_max: 8.0 };
        let op = build_radial_hamiltonian(&spec, &params).unwrap();
        let psi: Vec<f64> = op.nodes.iter().map(|&r| (-0.5 * r * r).exp()).collect();
        let t = kinetic_from_spec(&spec, &params, &psi).unwrap();
        let mut worst = 0.0f64;
        for (j, &r) in op.nodes.iter().enumerate() {
            if r > 4.0 {
                continue;
            }
            let g = psi[j];
            let dpsi = -r * g;
            let d2psi = (r * r - 1.0) * g;
            let exact =
                -0.5 * ((1.0 + 0.3 * r * r) * (d2psi + dpsi / r) + 0.3 * r * dpsi);
            worst = worst.max((t[j] - exact).abs());
        }
        worst
    };
    let order = (error_at(400) / error_at(800)).log2();
    Outcome::le(
        (order - 2.0).abs(),
        0.35,
        format!("expanded-operator agreement order {order:.3} (target 2.0)"),
    )
}

fn check_spectral_self_convergence() -> Outcome {
    let e0 = |n: usize| {
        let (op, s) = lambda_tenth_spectrum(n);
        (s.eigenvalues[0], op.h)
    };
    let (e1, h1) = e0(1300);
    let (e2, h2) = e0(2601);
    let (e3, h3) = e0(5203);
    let r12 = richardson_extrapolate(e1, h1, e2, h2);
    let r23 = richardson_extrapolate(e2, h2, e3, h3);
    Outcome::le(
        rel(r12, r23),
        1e-6,
        "agreement of Richardson-extrapolated E₀ from (h,h/2) and (h/2,h/4) at λ=0.1",
    )
}

fn check_bound_count_stability() -> Outcome {
    let count = |n: usize| {
        let (_, s) = lambda_tenth_spectrum(n);
        s.classification.flags.iter().filter(|&&b| b).count() as f64
    };
    let diff = (count(1200) - count(2400)).abs();
    Outcome::le(diff, 0.0, "bound-state count identical on h and h/2 grids (λ=0.1)")
}

// ---------------------------------------------------------------------------
// classical checks

fn default_classical_system(
    lambda: f64,
) -> (DilatonBackground, HarmonicPotential) {
    (
        c1_background(lambda),
        HarmonicPotential { spring_constant: 1.0 },
    )
}

fn check_energy_drift_default() -> Outcome {
    let (bg, potential) = default_classical_system(1.0);
    let sys = PdmSystem::new(&bg, &potential, 1.0).unwrap();
    let s0 = PhaseState::new(0.0, vec![0.1], vec![0.0]).unwrap();
    let tr = sys.integrate(&s0, 1e-3, 10_000).unwrap();
    Outcome::le(
        tr.energy_drift(),
        1e-8,
        "relative energy deviation over 10⁴ implicit-midpoint steps, shipped default config",
    )
}

fn check_time_reversal() -> Outcome {
    let (bg, potential) = default_classical_system(1.0);
    let sys = PdmSystem::new(&bg, &potential, 1.0).unwrap();
    let s0 = PhaseState::new(0.0, vec![0.8], vec![0.1]).unwrap();
    let forward = sys.integrate(&s0, 1e-3, 10_000).unwrap();
    let back = sys.integrate(forward.last(), -1e-3, 10_000).unwrap();
    let end = back.last();
    let worst = (end.x[0] - s0.x[0]).abs().max((end.p[0] - s0.p[0]).abs());
    Outcome::le(worst, 1e-10, "max component mismatch after 10⁴ steps forward + backward")
}

fn check_harmonic_limit() -> Outcome {
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
    Outcome::le(worst, 1e-6, "max deviation from x₀·cos(αt) over one period at λ=0, h=1e-4")
}

fn check_period_harmonic() -> Outcome {
    let coupling = FlatCoupling;
    let potential = HarmonicPotential { spring_constant: 1.0 };
    let sys = PdmSystem::new(&coupling, &potential, 1.0).unwrap();
    let s0 = PhaseState::new(0.0, vec![1.0], vec![0.0]).unwrap();
    let tr = sys.integrate(&s0, 1e-3, 20_000).unwrap();
    let period = measure_period(&tr).unwrap();
    Outcome::le(
        (period - 2.0 * std::f64::consts::PI).abs(),
        1e-4,
        "measured period vs 2π/α for the λ=0 oscillator",
    )
}

fn check_period_amplitude_law() -> Outcome {
    let (bg, potential) = default_classical_system(1.0);
    let sys = PdmSystem::new(&bg, &potential, 1.0).unwrap();
    let s0 = PhaseState::new(0.0, vec![1.0], vec![0.0]).unwrap();
    let tr = sys.integrate(&s0, 1e-3, 40_000).unwrap();
    let period = measure_period(&tr).unwrap();
    let expected = 2.0 * std::f64::consts::PI * 2.0f64.sqrt();
    Outcome::le(
        rel(period, expected),
        1e-3,
        "measured period vs 2π√(1+λA²)/α at λ=1, amplitude 1",
    )
}

fn check_velocity_consistency() -> Outcome {
    let (bg, potential) = default_classical_system(1.0);
    let sys = PdmSystem::new(&bg, &potential, 1.0).unwrap();
    let s0 = PhaseState::new(0.0, vec![0.7], vec![0.3]).unwrap();
    let h = 1e-3;
    let tr = sys.integrate(&s0, h, 1000).unwrap();
    let mut worst = 0.0f64;
    for i in 1..tr.states.len() - 1 {
        let u = sys.velocity(&tr.states[i]).unwrap()[0];
        let fd = (tr.states[i + 1].x[0] - tr.states[i - 1].x[0]) / (2.0 * h);
        worst = worst.max((u - fd).abs());
    }
    Outcome::le(
        worst,
        5.0 * h * h,
        "Lagrangian velocity b^{1/2}p/m₀ vs centered position differences",
    )
}

// ---------------------------------------------------------------------------
// string checks

fn check_tension_quadrature_match() -> Outcome {
    let mut worst = 0.0f64;
    for &xi_c in &[0.1, 1.0, 10.0, 100.0, 1.0e4] {
        let cfg = StringConfig::c_unity(1.0, xi_c).unwrap();
        let q = tension_quadrature(&cfg).unwrap();
        let c = tension_closed_form(&cfg);
        worst = worst.max(rel(q.mu, c.mu));
    }
    Outcome::le(
        worst,
        1e-10,
        "quadrature vs closed-form tension over ξ_C ∈ {0.1, 1, 10, 100, 10⁴}",
    )
}

fn check_asymptotic_gap() -> Outcome {
    let gap_at = |xi_c: f64| {
        let c = tension_closed_form(&StringConfig::c_unity(1.0, xi_c).unwrap());
        (c.mu - c.mu_asymptotic).abs() / c.mu.abs()
    };
    let mut monotone = true;
    let mut prev = f64::INFINITY;
    for k in 2..=6 {
        let g = gap_at(10.0f64.powi(k));
        if g >= prev {
            monotone = false;
        }
        prev = g;
    }
    let gap4 = gap_at(1.0e4);
    let mut out = Outcome::le(
        gap4,
        2e-3,
        format!("closed form vs asymptotic at ξ_C=10⁴; gap monotone on ladder: {monotone}"),
    );
    out.passed = out.passed && monotone;
    out
}

fn check_ratio_law() -> Outcome {
    let cfg = StringConfig::new(0.7, 5.0, 1.3, 10.0).unwrap();
    let mut worst = 0.0f64;
    for &r in &[0.2, 0.9, 1.7, 3.1, 6.4] {
        let d = energy_density(r, &cfg);
        let expected = 2.0 * cfg.lambda * cfg.lambda * cfg.kappa_sq() * r * r
            / (cfg.abs_lambda * cfg.kappa_tilde_sq());
        worst = worst.max(rel(d.kinetic / d.potential.abs(), expected));
    }
    Outcome::le(worst, 1e-12, "|ℋ_kin/ℋ_pot| against 2λ²κ²r²/(|Λ|κ̃²)")
}

fn check_wec_sign_structure() -> Outcome {
    let cfg = StringConfig::c_unity(1.0, 10.0).unwrap();
    let axis = energy_density(0.0, &cfg).total;
    let exact_axis = axis == -cfg.abs_lambda / cfg.kappa_sq();
    let w = critical_radius(&cfg).unwrap();
    let cells_off = if w.r_crit >= w.sign_change_lo && w.r_crit <= w.sign_change_hi {
        0.0
    } else {
        ((w.r_crit - w.sign_change_hi).max(w.sign_change_lo - w.r_crit) / w.grid_step).ceil()
    };
    let mut out = Outcome::le(
        cells_off,
        1.0,
        format!(
            "sign change within one cell of r_crit; ℋ(0) exact: {exact_axis}; profile consistent: {}",
            w.sign_profile_consistent
        ),
    );
    out.passed = out.passed && exact_axis && w.sign_profile_consistent;
    out
}

fn check_positivity_threshold() -> Outcome {
    let p = positivity_condition(&StringConfig::c_unity(1.0, 1.0).unwrap());
    let expected = std::f64::consts::E * std::f64::consts::E - 1.0;
    Outcome::le(
        rel(p.threshold_xi_c, expected),
        1e-12,
        "positivity threshold cutoff vs e² − 1 at ξ_crit = 1",
    )
}

fn check_positivity_vs_exact_sign() -> Outcome {
    // at ξ_crit = 1 the criterion and the exact sign agree for every ξ_C ≥ 50;
    // across a ξ_crit sweep the criterion must stay strictly sufficient
    let mut disagreements = 0usize;
    for &xi_c in &[50.0, 100.0, 1.0e3, 1.0e6] {
        let cfg = StringConfig::c_unity(1.0, xi_c).unwrap();
        let p = positivity_condition(&cfg);
        let mu = tension_closed_form(&cfg).mu;
        if p.flag != (mu > 0.0) {
            disagreements += 1;
        }
    }
    let mut sufficiency_violations = 0usize;
    let mut conservative = 0usize;
    for i in 0..50 {
        let xi_crit = 0.1 + 0.1 * i as f64;
        for &xi_c in &[5.0, 20.0, 50.0, 200.0, 1000.0] {
            let cfg = StringConfig::new(1.0, 12.0 * xi_crit, 1.0, xi_c).unwrap();
            let p = positivity_condition(&cfg);
            let mu = tension_closed_form(&cfg).mu;
            if p.flag && mu <= 0.0 {
                sufficiency_violations += 1;
            }
            if !p.flag && mu > 0.0 {
                conservative += 1;
            }
        }
    }
    let mut out = Outcome::le(
        disagreements as f64,
        0.0,
        format!(
            "criterion vs sign(μ) at ξ_crit=1 for ξ_C ≥ 50; sweep: {sufficiency_violations} \
             sufficiency violations, {conservative} conservative cases (allowed, reported)"
        ),
    );
    out.passed = out.passed && sufficiency_violations == 0;
    out
}

// ---------------------------------------------------------------------------
// cross-cutting

fn check_rerun_determinism() -> Outcome {
    let spec = OscillatorSpec::new(0.1, 1.0, 1.0, Dimension::One).unwrap();
    let run = || {
        let op =
            build_radial_hamiltonian(&spec, &RadialGridParams { n: 400, r_max: 26.0 }).unwrap();
        let s = solve_spectrum(&op, 4).unwrap();
        let t = tension_quadrature(&StringConfig::c_unity(1.0, 100.0).unwrap()).unwrap();
        (s.eigenvalues, s.eigenvectors, t.mu)
    };
    let (e1, v1, m1) = run();
    let (e2, v2, m2) = run();
    let identical = e1 == e2 && v1 == v2 && m1.to_bits() == m2.to_bits();
    Outcome::le(
        if identical { 0.0 } else { 1.0 },
        0.0,
        "bit-identical eigenpairs and tension across repeated in-process runs",
    )
}

fn check_orthonormality_single_vector() -> Outcome {
    let (op, s) = lambda_tenth_spectrum(800);
    let deviation = check_orthonormality(&op, &s.eigenvectors[..1]);
    Outcome::le(deviation, 1e-12, "|⟨ψ₀,ψ₀⟩ − 1| for a single normalized eigenvector")
}

fn checks() -> Vec<Check> {
    macro_rules! check {
        ($module:literal, $name:literal, $f:expr) => {
            Check {
                module: $module,
                name: $name,
                run: Box::new($f),
            }
        };
    }
    vec![
        check!("dilaton", "identity_chain", check_identity_chain),
        check!("dilaton", "analytic_derivative", check_analytic_derivative),
        check!("dilaton", "radial_symmetry", check_radial_symmetry),
        check!("dilaton", "liouville_order_linear", check_liouville_order_linear),
        check!("dilaton", "liouville_order_exp", check_liouville_order_exp),
        check!("quantum", "harmonic_ladder_d1", check_ladder_d1),
        check!("quantum", "harmonic_ladder_d2", check_ladder_d2),
        check!("quantum", "kinetic_consistency", check_kinetic_consistency),
        check!("quantum", "weighted_gram", check_weighted_gram),
        check!(
            "quantum",
            "unweighted_gram_negative_control",
            check_unweighted_gram_negative_control
        ),
        check!("quantum", "single_vector_norm", check_orthonormality_single_vector),
        check!("quantum", "rayleigh_bound", check_rayleigh_bound),
        check!("quantum", "dirichlet_monotonicity", check_dirichlet_monotonicity),
        check!("quantum", "expanded_form_order", check_expanded_form_order),
        check!("quantum", "spectral_self_convergence", check_spectral_self_convergence),
        check!("quantum", "bound_count_stability", check_bound_count_stability),
        check!("classical", "energy_drift_default", check_energy_drift_default),
        check!("classical", "time_reversal", check_time_reversal),
        check!("classical", "harmonic_limit", check_harmonic_limit),
        check!("classical", "period_harmonic", check_period_harmonic),
        check!("classical", "period_amplitude_law", check_period_amplitude_law),
        check!("classical", "velocity_consistency", check_velocity_consistency),
        check!("string", "tension_quadrature_match", check_tension_quadrature_match),
        check!("string", "asymptotic_gap", check_asymptotic_gap),
        check!("string", "ratio_law", check_ratio_law),
        check!("string", "wec_sign_structure", check_wec_sign_structure),
        check!("string", "positivity_threshold", check_positivity_threshold),
        check!("string", "positivity_vs_exact_sign", check_positivity_vs_exact_sign),
        check!("cross", "rerun_determinism", check_rerun_determinism),
    ]
}

/// Runs the whole suite on up to `threads` workers (1 = sequential). Results
/// are ordered by check index independent of scheduling.
pub fn run_all(threads: usize) -> VerifyReport {
    let list = checks();
    let total = list.len();
    let slots: Mutex<Vec<Option<CheckResult>>> = Mutex::new(vec![None; total]);
    let cursor = AtomicUsize::new(0);
    let workers = threads.clamp(1, total);

    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let idx = cursor.fetch_add(1, Ordering::Relaxed);
                if idx >= total {
                    break;
                }
                let check = &list[idx];
                let outcome = (check.run)();
                let result = CheckResult {
                    module: check.module.to_string(),
                    name: check.name.to_string(),
                    passed: outcome.passed,
                    measured: outcome.measured,
                    threshold: outcome.threshold,
                    comparison: outcome.comparison.to_string(),
                    detail: outcome.detail,
                };
                slots.lock().unwrap()[idx] = Some(result);
            });
        }
    });

    let checks: Vec<CheckResult> = slots
        .into_inner()
        .unwrap()
        .into_iter()
        .map(|r| r.expect("every check slot is filled"))
        .collect();
    let failed = checks.iter().filter(|c| !c.passed).count();
    VerifyReport {
        passed: failed == 0,
        checks_total: total,
        checks_failed: failed,
        checks,
    }
}

/// Plain-text table for the console.
pub fn format_table(report: &VerifyReport) -> String {
    use std::fmt::Write as _;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<10} {:<34} {:>12} {:>4} {:>12}  {}",
        "module", "check", "measured", "", "threshold", "status"
    );
    let _ = writeln!(out, "{}", "-".repeat(92));
    for c in &report.checks {
        let _ = writeln!(
            out,
            "{:<10} {:<34} {:>12.4e} {:>4} {:>12.4e}  {}",
            c.module,
            c.name,
            c.measured,
            c.comparison,
            c.threshold,
            if c.passed { "PASS" } else { "FAIL" }
        );
    }
    let _ = writeln!(out, "{}", "-".repeat(92));
    let _ = writeln!(
        out,
        "{} of {} checks passed",
        report.checks_total - report.checks_failed,
        report.checks_total
    );
    out
}
