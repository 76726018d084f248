//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//!
//! Run with `cargo test -p pdm-lab --test acceptance -- --nocapture` to see
//! every line. Tolerances are pinned in the assertions, not configurable.

use std::time::Instant;

use pdm_lab::classical::{
    measure_period, FlatCoupling, HarmonicPotential, PdmSystem, PhaseState,
};
use pdm_lab::dilaton::{
    liouville_residual, DilatonBackground, GridSpec2D, LinearNormalization, PhysicalConstants,
};
use pdm_lab::expr::HolomorphicExpr;
use pdm_lab::quantum::{
    build_radial_hamiltonian, gram_deviation_with_measure, richardson_extrapolate,
    solve_spectrum, Dimension, OscillatorSpec, RadialGridParams,
};
use pdm_lab::string::{
    energy_density, positivity_condition, tension_closed_form, tension_quadrature, StringConfig,
};

fn report(criterion: u32, label: &str, passed: bool, detail: &str) {
    println!(
        "criterion {criterion:2} ({label}): {} — {detail}",
        if passed { "PASS" } else { "FAIL" }
    );
    assert!(passed, "criterion {criterion} ({label}) failed: {detail}");
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn c1_background(lambda: f64) -> DilatonBackground {
    DilatonBackground::linear(1.0, lambda.sqrt(), LinearNormalization::CTarget(1.0))
        .unwrap()
        .0
}

fn exp_background() -> DilatonBackground {
    DilatonBackground::new(
        PhysicalConstants::new(1.0, -12.0).unwrap(),
        HolomorphicExpr::exp(HolomorphicExpr::zeta()),
    )
    .unwrap()
}

#[test]
fn criterion_01_liouville_exactness() {
    let start = Instant::now();
    let mut orders = Vec::new();
    let mut fine_max = Vec::new();
    for bg in [c1_background(1.0), exp_background()] {
        let coarse = GridSpec2D::from_ranges(-0.5, 0.5, 126, -0.5, 0.5, 126).unwrap();
        let halved = GridSpec2D::from_ranges(-0.5, 0.5, 251, -0.5, 0.5, 251).unwrap();
        let rc = liouville_residual(&bg, &coarse).unwrap();
        let rh = liouville_residual(&bg, &halved).unwrap();
        orders.push((rc.max_abs / rh.max_abs).log2());

        let fine = GridSpec2D::from_ranges(-0.5, 0.5, 1001, -0.5, 0.5, 1001).unwrap();
        assert!((fine.h - 1e-3).abs() < 1e-12);
        fine_max.push(liouville_residual(&bg, &fine).unwrap().max_abs);
    }
    let elapsed = start.elapsed().as_secs_f64();
    let order_ok = orders.iter().all(|o| (o - 2.0).abs() <= 0.2);
    let residual_ok = fine_max.iter().all(|&m| m < 1e-4);
    report(
        1,
        "liouville exactness",
        order_ok && residual_ok && elapsed < 5.0,
        &format!(
            "orders {:.3}/{:.3} (2.0±0.2), max residual at h=1e-3: {:.3e}/{:.3e} (<1e-4), {elapsed:.2}s (<5s)",
            orders[0], orders[1], fine_max[0], fine_max[1]
        ),
    );
}

#[test]
fn criterion_02_tension_oracle() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for &xi_c in &[0.1, 1.0, 10.0, 100.0, 1.0e4] {
        let cfg = StringConfig::c_unity(1.0, xi_c).unwrap();
        let q = tension_quadrature(&cfg).unwrap();
        let c = tension_closed_form(&cfg);
        worst = worst.max(rel(q.mu, c.mu));
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        2,
        "tension oracle",
        worst <= 1e-10 && elapsed < 1.0,
        &format!("worst relative error {worst:.3e} (≤1e-10), {elapsed:.3}s (<1s)"),
    );
}

#[test]
fn criterion_03_asymptotic_tension() {
    let gap_at = |xi_c: f64| {
        let c = tension_closed_form(&StringConfig::c_unity(1.0, xi_c).unwrap());
        (c.mu - c.mu_asymptotic).abs() / c.mu.abs()
    };
    let gap4 = gap_at(1.0e4);
    let mut monotone = true;
    let mut prev = f64::INFINITY;
    for k in 2..=6 {
        let g = gap_at(10.0f64.powi(k));
        if g >= prev {
            monotone = false;
        }
        prev = g;
    }
    report(
        3,
        "asymptotic tension",
        gap4 <= 2e-3 && monotone,
        &format!("gap at ξ_C=1e4: {gap4:.3e} (≤2e-3), monotone on 1e2..1e6 ladder: {monotone}"),
    );
}

#[test]
fn criterion_04_wec_core() {
    let lambda = 1.0f64;
    let cfg = StringConfig::c_unity(lambda, 10.0).unwrap();
    // ℋ(0) = −|Λ|/κ² with no rounding at κ = 1
    let axis = energy_density(0.0, &cfg).total;
    let axis_exact = axis == -cfg.abs_lambda / cfg.kappa_sq();
    let w = pdm_lab::string::critical_radius(&cfg).unwrap();
    let r_exact = 1.0 / lambda.sqrt();
    let within_cell = w.sign_change_lo - w.grid_step <= r_exact
        && r_exact <= w.sign_change_hi + w.grid_step;
    report(
        4,
        "WEC core",
        axis_exact && within_cell && w.sign_profile_consistent,
        &format!(
            "ℋ(0) = {axis} (exact), sign change in [{:.6}, {:.6}] vs r_crit = {r_exact} (cell {:.1e})",
            w.sign_change_lo, w.sign_change_hi, w.grid_step
        ),
    );
}

#[test]
fn criterion_05_positivity() {
    let cfg = StringConfig::c_unity(1.0, 1.0).unwrap();
    let p = positivity_condition(&cfg);
    let threshold_expected = std::f64::consts::E * std::f64::consts::E - 1.0;
    let threshold_ok = rel(p.threshold_xi_c, threshold_expected) <= 1e-12;
    let mut verdicts_ok = true;
    for &xi_c in &[50.0, 75.0, 100.0, 500.0, 1.0e3, 1.0e4, 1.0e6] {
        let cfg = StringConfig::c_unity(1.0, xi_c).unwrap();
        let flag = positivity_condition(&cfg).flag;
        let mu = tension_closed_form(&cfg).mu;
        if flag != (mu > 0.0) {
            verdicts_ok = false;
        }
    }
    report(
        5,
        "positivity",
        threshold_ok && verdicts_ok,
        &format!(
            "threshold {:.12} vs e²−1 = {threshold_expected:.12}; verdict matches sign(μ) for all ξ_C ≥ 50: {verdicts_ok}",
            p.threshold_xi_c
        ),
    );
}

#[test]
fn criterion_06_quantum_reduction() {
    let start = Instant::now();
    let ladder = |dimension: Dimension, n1: usize, n2: usize, exact: fn(usize) -> f64| {
        let spec = OscillatorSpec::new(0.0, 1.0, 1.0, dimension).unwrap();
        let solve = |n: usize| {
            let op =
                build_radial_hamiltonian(&spec, &RadialGridParams { n, r_max: 8.0 }).unwrap();
            (solve_spectrum(&op, 4).unwrap().eigenvalues, op.h)
        };
        let (e1, h1) = solve(n1);
        let (e2, h2) = solve(n2);
        (0..4)
            .map(|i| rel(richardson_extrapolate(e1[i], h1, e2[i], h2), exact(i)))
            .fold(0.0f64, f64::max)
    };
    // one Richardson step ending on the N = 4000 grid
    let worst_d1 = ladder(Dimension::One, 2000, 4001, |n| n as f64 + 0.5);
    let worst_d2 = ladder(Dimension::Two { ell: 0 }, 2000, 4000, |n| 2.0 * n as f64 + 1.0);
    let elapsed = start.elapsed().as_secs_f64();
    report(
        6,
        "quantum reduction",
        worst_d1 <= 1e-4 && worst_d2 <= 1e-4 && elapsed < 10.0,
        &format!(
            "ladder errors d=1: {worst_d1:.3e}, d=2: {worst_d2:.3e} (≤1e-4), {elapsed:.2}s (<10s at N=4000)"
        ),
    );
}

#[test]
fn criterion_07_operator_hygiene() {
    let spec = OscillatorSpec::new(0.1, 1.0, 1.0, Dimension::One).unwrap();
    let op = build_radial_hamiltonian(&spec, &RadialGridParams { n: 1500, r_max: 26.0 }).unwrap();

    // exact symmetry: the (i,j) and (j,i) actions share one stored entry
    let n = op.len();
    let mut symmetric = true;
    for &j in &[0usize, 1, n / 2, n - 2] {
        let mut e_j = vec![0.0; n];
        e_j[j] = 1.0;
        let col_j = op.apply_weighted(&e_j);
        let mut e_next = vec![0.0; n];
        e_next[j + 1] = 1.0;
        let col_next = op.apply_weighted(&e_next);
        if col_j[j + 1].to_bits() != col_next[j].to_bits() {
            symmetric = false;
        }
    }

    let s = solve_spectrum(&op, 6).unwrap();
    let weighted = s.gram_deviation;
    let plain = vec![op.h; n];
    let unweighted = gram_deviation_with_measure(&s.eigenvectors, &plain);
    report(
        7,
        "operator hygiene",
        symmetric && weighted <= 1e-8 && unweighted > 1e-4,
        &format!(
            "bitwise symmetric: {symmetric}; weighted Gram {weighted:.3e} (≤1e-8); unweighted {unweighted:.3e} (>1e-4)"
        ),
    );
}

#[test]
fn criterion_08_spectral_self_consistency() {
    let solve = |n: usize| {
        let spec = OscillatorSpec::new(0.1, 1.0, 1.0, Dimension::One).unwrap();
        let op =
            build_radial_hamiltonian(&spec, &RadialGridParams { n, r_max: 26.0 }).unwrap();
        let s = solve_spectrum(&op, 6).unwrap();
        let bound = s.classification.flags.iter().filter(|&&b| b).count();
        (s.eigenvalues[0], op.h, bound)
    };
    let (e1, h1, bound1) = solve(1300);
    let (e2, h2, bound2) = solve(2601);
    let (e3, h3, _) = solve(5203);
    let r12 = richardson_extrapolate(e1, h1, e2, h2);
    let r23 = richardson_extrapolate(e2, h2, e3, h3);
    let agreement = rel(r12, r23);
    report(
        8,
        "spectral self-consistency",
        agreement <= 1e-6 && bound1 == bound2,
        &format!(
            "extrapolated E₀ agreement {agreement:.3e} (≤1e-6); bound counts {bound1}/{bound2} stable"
        ),
    );
}

#[test]
fn criterion_09_classical_dynamics() {
    // shipped default configuration: C=1 background at λ=1, amplitude 0.1
    let bg = c1_background(1.0);
    let potential = HarmonicPotential { spring_constant: 1.0 };
    let sys = PdmSystem::new(&bg, &potential, 1.0).unwrap();
    let s0 = PhaseState::new(0.0, vec![0.1], vec![0.0]).unwrap();
    let tr = sys.integrate(&s0, 1e-3, 10_000).unwrap();
    let drift = tr.energy_drift();

    let back = sys.integrate(tr.last(), -1e-3, 10_000).unwrap();
    let end = back.last();
    let reversal = (end.x[0] - s0.x[0]).abs().max((end.p[0] - s0.p[0]).abs());

    let flat = FlatCoupling;
    let sys0 = PdmSystem::new(&flat, &potential, 1.0).unwrap();
    let tr0 = sys0
        .integrate(&PhaseState::new(0.0, vec![1.0], vec![0.0]).unwrap(), 1e-3, 20_000)
        .unwrap();
    let period_err = (measure_period(&tr0).unwrap() - 2.0 * std::f64::consts::PI).abs();

    report(
        9,
        "classical dynamics",
        drift <= 1e-8 && reversal <= 1e-10 && period_err <= 1e-4,
        &format!(
            "drift {drift:.3e} (≤1e-8); reversal {reversal:.3e} (≤1e-10); λ=0 period error {period_err:.3e} (≤1e-4)"
        ),
    );
}

#[test]
fn criterion_10_amplitude_frequency_law() {
    let bg = c1_background(1.0);
    let potential = HarmonicPotential { spring_constant: 1.0 };
    let sys = PdmSystem::new(&bg, &potential, 1.0).unwrap();
    let s0 = PhaseState::new(0.0, vec![1.0], vec![0.0]).unwrap();
    let tr = sys.integrate(&s0, 1e-3, 40_000).unwrap();
    let period = measure_period(&tr).unwrap();
    let expected = 2.0 * std::f64::consts::PI * 2.0f64.sqrt();
    let err = rel(period, expected);
    report(
        10,
        "amplitude-frequency law",
        err <= 1e-3,
        &format!("measured {period:.6} vs 2π√2 = {expected:.6}, relative error {err:.3e} (≤1e-3)"),
    );
}

#[test]
fn criterion_11_verify_determinism() {
    let bin = env!("CARGO_BIN_EXE_pdm-lab");
    let tmp = tempfile::tempdir().unwrap();
    let run = |dir: &str| {
        let out = tmp.path().join(dir);
        let output = std::process::Command::new(bin)
            .args(["verify", "--threads", "4", "--out"])
            .arg(&out)
            .output()
            .expect("verify run");
        assert!(
            output.status.success(),
            "verify exited with {:?}: {}",
            output.status.code(),
            String::from_utf8_lossy(&output.stderr)
        );
        let report = std::fs::read_to_string(out.join("verify_report.json")).unwrap();
        // timestamp and output path identify the run, not the results
        let metadata: String = std::fs::read_to_string(out.join("metadata.json"))
            .unwrap()
            .lines()
            .filter(|l| !l.contains("timestamp_unix") && !l.contains("out_dir"))
            .collect::<Vec<_>>()
            .join("\n");
        (String::from_utf8(output.stdout).unwrap(), report, metadata)
    };
    let (stdout1, report1, meta1) = run("first");
    let (stdout2, report2, meta2) = run("second");
    let identical = stdout1 == stdout2 && report1 == report2 && meta1 == meta2;
    report(
        11,
        "verify determinism",
        identical,
        "two verify runs produce byte-identical stdout, report and metadata (timestamp excluded)",
    );
}
