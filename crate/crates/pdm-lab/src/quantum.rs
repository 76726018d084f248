//! Quantum mechanics of the position-dependent-mass oscillator.
//!
//! The kinetic operator is the symmetric factorization
//! T̂ = −(ħ²/2m₀)(b^{1/4}∇)·(b^{1/4}∇); for the Aζ background with C = 1 it
//! expands to −(ħ²/2m₀)[(1+λr²)∇² + λr∂ᵣ], and the full Hamiltonian adds
//! 𝒰(r) = (K/2)·r²/(1+λr²).
//!
//! Discretization is a uniform-grid flux (Sturm–Liouville) form with
//! p(r) = w(r)·r^{d-1}·(1+λr²) and weight w(r) = (1+λr²)^{-1/2}; the weight
//! makes the expanded operator self-adjoint under ⟨ψ,χ⟩ = Σψχ·w·r^{d-1}·h.
//! The assembled matrix is exactly symmetric because its off-diagonals are
//! stored once and shared.
//!
//! d = 1 solves on a symmetric full-line grid (both parity sectors appear in
//! one matrix, so the spectrum interleaves even and odd states); d = 2 uses a
//! cell-centered radial grid whose r = 0 flux face vanishes identically,
//! which encodes regularity at the origin without ghost nodes. Dirichlet
//! truncation applies at r_max in both cases.

use serde::{Deserialize, Serialize};

use crate::dilaton::DilatonBackground;
use crate::eigen;
use crate::error::{Error, Result};

/// Fraction of weighted norm allowed beyond the tail radius for a state to
/// count as bound.
pub const BOUND_TAIL_THRESHOLD: f64 = 0.01;

/// Spatial dimension of the oscillator problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dimension {
    /// Full-line problem in one dimension.
    One,
    /// Planar problem reduced to the radial sector with angular number ℓ.
    Two { ell: u32 },
}

impl Dimension {
    pub fn d(&self) -> u32 {
        match self {
            Dimension::One => 1,
            Dimension::Two { .. } => 2,
        }
    }

    pub fn ell(&self) -> u32 {
        match self {
            Dimension::One => 0,
            Dimension::Two { ell } => *ell,
        }
    }
}

/// Parameters of the nonlinear oscillator: mass m(r) = m₀/(1+λr²) in a
/// potential 𝒰(r) = (K/2)·r²/(1+λr²) with K = m₀α².
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscillatorSpec {
    pub lambda: f64,
    pub alpha: f64,
    pub m0: f64,
    pub hbar: f64,
    pub dimension: Dimension,
}

impl OscillatorSpec {
    pub fn new(lambda: f64, alpha: f64, m0: f64, dimension: Dimension) -> Result<Self> {
        let spec = OscillatorSpec {
            lambda,
            alpha,
            m0,
            hbar: 1.0,
            dimension,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda.is_finite() && self.lambda >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "lambda",
                reason: format!("must be finite and non-negative, got {}", self.lambda),
            });
        }
        if !(self.alpha.is_finite() && self.alpha > 0.0) {
            return Err(Error::InvalidParameter {
                name: "alpha",
                reason: format!("must be finite and positive, got {}", self.alpha),
            });
        }
        if !(self.m0.is_finite() && self.m0 > 0.0) {
            return Err(Error::InvalidParameter {
                name: "m0",
                reason: format!("must be finite and positive, got {}", self.m0),
            });
        }
        if !(self.hbar.is_finite() && self.hbar > 0.0) {
            return Err(Error::InvalidParameter {
                name: "hbar",
                reason: format!("must be finite and positive, got {}", self.hbar),
            });
        }
        Ok(())
    }

    /// Spring constant K = m₀α².
    pub fn spring_constant(&self) -> f64 {
        self.m0 * self.alpha * self.alpha
    }

    /// b^{1/4}(r) = (1+λr²)^{1/2} for the C = 1 background.
    pub fn b_quarter(&self, r: f64) -> f64 {
        (1.0 + self.lambda * r * r).sqrt()
    }

    /// Oscillator potential 𝒰(r) = (K/2)·r²/(1+λr²).
    pub fn potential(&self, r: f64) -> f64 {
        0.5 * self.spring_constant() * r * r / (1.0 + self.lambda * r * r)
    }

    /// Asymptotic potential level 𝒰_∞ = K/(2λ); `None` when λ = 0 (the
    /// potential confines everywhere).
    pub fn u_inf(&self) -> Option<f64> {
        if self.lambda > 0.0 {
            Some(self.spring_constant() / (2.0 * self.lambda))
        } else {
            None
        }
    }

    /// Radius beyond which a bound state must hold almost no weight.
    pub fn tail_radius(&self) -> Option<f64> {
        if self.lambda > 0.0 {
            Some(4.0 / self.lambda.sqrt())
        } else {
            None
        }
    }
}

/// Grid request: `n` interior nodes inside a Dirichlet box of radius `r_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialGridParams {
    pub n: usize,
    pub r_max: f64,
}

impl RadialGridParams {
    pub fn validate(&self) -> Result<()> {
        if self.n < 100 {
            return Err(Error::InvalidParameter {
                name: "n",
                reason: format!("need at least 100 grid nodes, got {}", self.n),
            });
        }
        if self.n > 100_000 {
            return Err(Error::InvalidParameter {
                name: "n",
                reason: format!("grid too large ({}), cap is 100000", self.n),
            });
        }
        if !(self.r_max.is_finite() && self.r_max > 0.0) {
            return Err(Error::InvalidParameter {
                name: "r_max",
                reason: format!("must be finite and positive, got {}", self.r_max),
            });
        }
        Ok(())
    }
}

/// Default grid for a spec: box radius 10× the larger characteristic length
/// (oscillator length or 1/√λ), spacing two decades finer, n capped to
/// [100, 10000].
pub fn default_grid(spec: &OscillatorSpec) -> RadialGridParams {
    let osc_len = (spec.hbar / (spec.m0 * spec.alpha)).sqrt();
    let nl_len = if spec.lambda > 0.0 {
        1.0 / spec.lambda.sqrt()
    } else {
        osc_len
    };
    let r_max = 10.0 * osc_len.max(nl_len);
    let h = 0.01 * osc_len.min(nl_len);
    let span = match spec.dimension {
        Dimension::One => 2.0 * r_max,
        Dimension::Two { .. } => r_max,
    };
    let n = ((span / h).round() as usize).clamp(100, 10_000);
    RadialGridParams { n, r_max }
}

/// Symmetric discretization of the PDM Hamiltonian.
#[derive(Debug, Clone)]
pub struct RadialOperator {
    pub spec: OscillatorSpec,
    /// Node coordinates (full line for d = 1, cell centers for d = 2).
    pub nodes: Vec<f64>,
    pub h: f64,
    pub r_max: f64,
    /// Weight samples w(rᵢ) = (1+λrᵢ²)^{-1/2}.
    pub weight: Vec<f64>,
    /// Measure per node, w(rᵢ)·|rᵢ|^{d-1} (spacing not included).
    pub measure: Vec<f64>,
    /// Potential samples 𝒰(rᵢ) (centrifugal term not included).
    pub potential: Vec<f64>,
    /// Matrix diagonal in the symmetrized basis φ = √measure·ψ.
    pub diag: Vec<f64>,
    /// Shared off-diagonal entries (exact symmetry by construction).
    pub offdiag: Vec<f64>,
    /// 𝒰_∞ = K/(2λ); `None` for λ = 0.
    pub u_inf: Option<f64>,
    pub warnings: Vec<String>,
}

struct GridGeometry {
    nodes: Vec<f64>,
    faces: Vec<f64>,
    h: f64,
    dim_power: u32,
}

fn grid_geometry(dimension: Dimension, params: &RadialGridParams) -> GridGeometry {
    let n = params.n;
    match dimension {
        Dimension::One => {
            let h = 2.0 * params.r_max / (n as f64 + 1.0);
            let nodes = (0..n)
                .map(|j| -params.r_max + (j as f64 + 1.0) * h)
                .collect();
            let faces = (0..=n)
                .map(|k| -params.r_max + (k as f64 + 0.5) * h)
                .collect();
            GridGeometry {
                nodes,
                faces,
                h,
                dim_power: 0,
            }
        }
        Dimension::Two { .. } => {
            let h = params.r_max / (n as f64 + 0.5);
            let nodes = (0..n).map(|j| (j as f64 + 0.5) * h).collect();
            let faces = (0..=n).map(|k| k as f64 * h).collect();
            GridGeometry {
                nodes,
                faces,
                h,
                dim_power: 1,
            }
        }
    }
}

fn radial_power(r: f64, dim_power: u32) -> f64 {
    match dim_power {
        0 => 1.0,
        _ => r.abs(),
    }
}

/// Builds the oscillator Hamiltonian as an exactly symmetric tridiagonal
/// matrix in flux form.
pub fn build_radial_hamiltonian(
    spec: &OscillatorSpec,
    params: &RadialGridParams,
) -> Result<RadialOperator> {
    spec.validate()?;
    params.validate()?;
    let mut warnings = Vec::new();
    if spec.lambda > 0.0 {
        let reach = params.r_max * spec.lambda.sqrt();
        if reach < 8.0 {
            warnings.push(format!(
                "r_max·√λ = {reach:.3} < 8; the box may truncate shallow bound states"
            ));
        }
    }

    let geom = grid_geometry(spec.dimension, params);
    let n = geom.nodes.len();
    let ts = spec.hbar * spec.hbar / (2.0 * spec.m0 * geom.h * geom.h);
    let ell = spec.dimension.ell();

    let bq_nodes: Vec<f64> = geom.nodes.iter().map(|&r| spec.b_quarter(r)).collect();
    let weight: Vec<f64> = bq_nodes.iter().map(|&b| 1.0 / b).collect();
    let measure: Vec<f64> = geom
        .nodes
        .iter()
        .zip(&weight)
        .map(|(&r, &w)| w * radial_power(r, geom.dim_power))
        .collect();
    // flux coefficient p = w·r^{d-1}·(1+λr²) = r^{d-1}·b^{1/4} at the faces
    let p_faces: Vec<f64> = geom
        .faces
        .iter()
        .map(|&rf| radial_power(rf, geom.dim_power) * spec.b_quarter(rf))
        .collect();
    let potential: Vec<f64> = geom.nodes.iter().map(|&r| spec.potential(r)).collect();

    let mut diag = Vec::with_capacity(n);
    let mut offdiag = Vec::with_capacity(n - 1);
    for j in 0..n {
        let mut v = potential[j];
        if ell > 0 {
            let r = geom.nodes[j];
            v += spec.hbar * spec.hbar * (ell * ell) as f64 / (2.0 * spec.m0)
                * (1.0 + spec.lambda * r * r)
                / (r * r);
        }
        diag.push(ts * (p_faces[j] + p_faces[j + 1]) / measure[j] + v);
        if j + 1 < n {
            offdiag.push(-ts * p_faces[j + 1] / (measure[j] * measure[j + 1]).sqrt());
        }
    }

    Ok(RadialOperator {
        spec: *spec,
        nodes: geom.nodes,
        h: geom.h,
        r_max: params.r_max,
        weight,
        measure,
        potential,
        diag,
        offdiag,
        u_inf: spec.u_inf(),
        warnings,
    })
}

impl RadialOperator {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Action of the Hamiltonian on physical samples ψ(rᵢ).
    pub fn apply(&self, psi: &[f64]) -> Vec<f64> {
        let n = self.len();
        assert_eq!(psi.len(), n, "sample count must match the grid");
        let phi: Vec<f64> = (0..n).map(|j| self.measure[j].sqrt() * psi[j]).collect();
        let tphi = self.apply_weighted(&phi);
        (0..n).map(|j| tphi[j] / self.measure[j].sqrt()).collect()
    }

    /// Raw tridiagonal action in the symmetrized basis.
    pub fn apply_weighted(&self, phi: &[f64]) -> Vec<f64> {
        let n = self.len();
        assert_eq!(phi.len(), n, "sample count must match the grid");
        (0..n)
            .map(|j| {
                let mut t = self.diag[j] * phi[j];
                if j > 0 {
                    t += self.offdiag[j - 1] * phi[j - 1];
                }
                if j + 1 < n {
                    t += self.offdiag[j] * phi[j + 1];
                }
                t
            })
            .collect()
    }

    /// Weighted inner product ⟨ψ,χ⟩ = Σψχ·w·|r|^{d-1}·h.
    pub fn inner_product(&self, a: &[f64], b: &[f64]) -> f64 {
        self.nodes
            .iter()
            .enumerate()
            .map(|(j, _)| a[j] * b[j] * self.measure[j] * self.h)
            .sum()
    }

    /// Rayleigh quotient ⟨ψ,Hψ⟩/⟨ψ,ψ⟩ of a trial vector.
    pub fn rayleigh_quotient(&self, psi: &[f64]) -> f64 {
        let h_psi = self.apply(psi);
        self.inner_product(psi, &h_psi) / self.inner_product(psi, psi)
    }
}

/// Matrix-free application of T̂ = −(ħ²/2m₀)(b^{1/4}∇)·(b^{1/4}∇) by nested
/// first differences. Dirichlet ghosts close both ends.
#[allow(clippy::too_many_arguments)]
pub fn apply_factorized_kinetic(
    hbar: f64,
    m0: f64,
    dim_power: u32,
    nodes: &[f64],
    faces: &[f64],
    h: f64,
    b_quarter_nodes: &[f64],
    b_quarter_faces: &[f64],
    psi: &[f64],
) -> Result<Vec<f64>> {
    let n = nodes.len();
    if n < 3 {
        return Err(Error::InvalidGrid(format!(
            "factorized kinetic application needs at least 3 nodes, got {n}"
        )));
    }
    if faces.len() != n + 1 || b_quarter_faces.len() != n + 1 || b_quarter_nodes.len() != n
        || psi.len() != n
    {
        return Err(Error::InvalidGrid(
            "inconsistent node/face/sample array lengths".into(),
        ));
    }
    let scale = -hbar * hbar / (2.0 * m0 * h * h);
    let mut out = Vec::with_capacity(n);
    for j in 0..n {
        let left = psi.get(j.wrapping_sub(1)).copied().unwrap_or(0.0);
        let right = psi.get(j + 1).copied().unwrap_or(0.0);
        let flux_r = radial_power(faces[j + 1], dim_power) * b_quarter_faces[j + 1]
            * (right - psi[j]);
        let flux_l = radial_power(faces[j], dim_power) * b_quarter_faces[j] * (psi[j] - left);
        out.push(
            scale * b_quarter_nodes[j] / radial_power(nodes[j], dim_power) * (flux_r - flux_l),
        );
    }
    Ok(out)
}

/// Factorized kinetic action for an oscillator spec (C = 1 background).
pub fn kinetic_from_spec(
    spec: &OscillatorSpec,
    params: &RadialGridParams,
    psi: &[f64],
) -> Result<Vec<f64>> {
    spec.validate()?;
    let geom = grid_geometry(spec.dimension, params);
    let bq_nodes: Vec<f64> = geom.nodes.iter().map(|&r| spec.b_quarter(r)).collect();
    let bq_faces: Vec<f64> = geom.faces.iter().map(|&r| spec.b_quarter(r)).collect();
    apply_factorized_kinetic(
        spec.hbar,
        spec.m0,
        geom.dim_power,
        &geom.nodes,
        &geom.faces,
        geom.h,
        &bq_nodes,
        &bq_faces,
        psi,
    )
}

/// Factorized kinetic action with b^{1/4} sampled from a dilaton background
/// along the x-axis ray (y = 0).
pub fn kinetic_from_background(
    bg: &DilatonBackground,
    dimension: Dimension,
    params: &RadialGridParams,
    psi: &[f64],
) -> Result<Vec<f64>> {
    let geom = grid_geometry(dimension, params);
    let mut bq_nodes = Vec::with_capacity(geom.nodes.len());
    for &r in &geom.nodes {
        bq_nodes.push(bg.eval(r, 0.0)?.quarter_b);
    }
    let mut bq_faces = Vec::with_capacity(geom.faces.len());
    for &r in &geom.faces {
        bq_faces.push(bg.eval(r, 0.0)?.quarter_b);
    }
    let c = bg.constants();
    apply_factorized_kinetic(
        c.hbar,
        c.m0,
        geom.dim_power,
        &geom.nodes,
        &geom.faces,
        geom.h,
        &bq_nodes,
        &bq_faces,
        psi,
    )
}

/// Bound/unbound classification of computed eigenstates.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundClassification {
    pub flags: Vec<bool>,
    pub u_inf: Option<f64>,
    pub tail_radius: Option<f64>,
    pub tail_threshold: f64,
    /// Weighted norm fraction beyond the tail radius, per state.
    pub tail_fractions: Vec<f64>,
}

/// Marks state n bound iff Eₙ < 𝒰_∞ and its weighted tail mass beyond
/// 4/√λ stays below 1%. For λ = 0 every computed state is bound.
pub fn classify_bound(
    op: &RadialOperator,
    eigenvalues: &[f64],
    eigenvectors: &[Vec<f64>],
) -> BoundClassification {
    let (u_inf, tail_radius) = (op.u_inf, op.spec.tail_radius());
    let mut flags = Vec::with_capacity(eigenvalues.len());
    let mut tail_fractions = Vec::with_capacity(eigenvalues.len());
    for (e, psi) in eigenvalues.iter().zip(eigenvectors) {
        match (u_inf, tail_radius) {
            (Some(u), Some(rt)) => {
                let total = op.inner_product(psi, psi);
                let tail: f64 = op
                    .nodes
                    .iter()
                    .enumerate()
                    .filter(|(_, &r)| r.abs() > rt)
                    .map(|(j, _)| psi[j] * psi[j] * op.measure[j] * op.h)
                    .sum();
                let fraction = tail / total;
                tail_fractions.push(fraction);
                flags.push(*e < u && fraction < BOUND_TAIL_THRESHOLD);
            }
            _ => {
                tail_fractions.push(0.0);
                flags.push(true);
            }
        }
    }
    BoundClassification {
        flags,
        u_inf,
        tail_radius,
        tail_threshold: BOUND_TAIL_THRESHOLD,
        tail_fractions,
    }
}

/// Gram-matrix deviation max|⟨ψᵢ,ψⱼ⟩ − δᵢⱼ| under a per-node measure
/// (including the spacing factor).
pub fn gram_deviation_with_measure(vectors: &[Vec<f64>], measure_h: &[f64]) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..vectors.len() {
        for j in 0..=i {
            let dot: f64 = vectors[i]
                .iter()
                .zip(&vectors[j])
                .zip(measure_h)
                .map(|((a, b), m)| a * b * m)
                .sum();
            let expected = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((dot - expected).abs());
        }
    }
    worst
}

/// Orthonormality check under the operator's weighted measure.
pub fn check_orthonormality(op: &RadialOperator, vectors: &[Vec<f64>]) -> f64 {
    let measure_h: Vec<f64> = op.measure.iter().map(|m| m * op.h).collect();
    gram_deviation_with_measure(vectors, &measure_h)
}

/// Solved spectrum: eigenvalues ascending, eigenvectors weighted-normalized
/// with a deterministic sign, bound flags, and grid metadata.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    /// ψ samples per state, normalized to ⟨ψ,ψ⟩ = 1 under the weighted measure.
    pub eigenvectors: Vec<Vec<f64>>,
    pub classification: BoundClassification,
    pub gram_deviation: f64,
    pub nodes: Vec<f64>,
    pub h: f64,
}

/// Serializable spectrum report (eigenfunctions go to CSV instead).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub spec: OscillatorSpec,
    pub grid: RadialGridParams,
    pub h: f64,
    pub eigenvalues: Vec<f64>,
    pub bound_flags: Vec<bool>,
    pub u_inf: Option<f64>,
    pub gram_deviation: f64,
    pub warnings: Vec<String>,
}

/// Computes the k lowest eigenpairs of the assembled operator.
pub fn solve_spectrum(op: &RadialOperator, k: usize) -> Result<Spectrum> {
    let n = op.len();
    if k == 0 || k > n {
        return Err(Error::InvalidParameter {
            name: "k",
            reason: format!("eigenpair count must be in 1..={n}, got {k}"),
        });
    }
    let (eigenvalues, phi_vectors) = eigen::eigenpairs_lowest(&op.diag, &op.offdiag, k)?;
    // back-transform: ψ = φ/√(measure·h); ‖φ‖₂ = 1 makes ψ weighted-normalized
    let sqrt_h = op.h.sqrt();
    let eigenvectors: Vec<Vec<f64>> = phi_vectors
        .iter()
        .map(|phi| {
            (0..n)
                .map(|j| phi[j] / (op.measure[j].sqrt() * sqrt_h))
                .collect()
        })
        .collect();
    let classification = classify_bound(op, &eigenvalues, &eigenvectors);
    let gram_deviation = check_orthonormality(op, &eigenvectors);
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
        classification,
        gram_deviation,
        nodes: op.nodes.clone(),
        h: op.h,
    })
}

impl Spectrum {
    pub fn report(&self, op: &RadialOperator, params: &RadialGridParams) -> SpectrumReport {
        SpectrumReport {
            spec: op.spec,
            grid: *params,
            h: self.h,
            eigenvalues: self.eigenvalues.clone(),
            bound_flags: self.classification.flags.clone(),
            u_inf: self.classification.u_inf,
            gram_deviation: self.gram_deviation,
            warnings: op.warnings.clone(),
        }
    }
}

/// Richardson extrapolation for second-order eigenvalue convergence, with an
/// explicit grid ratio (staggered radial grids do not nest exactly).
pub fn richardson_extrapolate(e_coarse: f64, h_coarse: f64, e_fine: f64, h_fine: f64) -> f64 {
    let rho_sq = (h_coarse / h_fine) * (h_coarse / h_fine);
    (rho_sq * e_fine - e_coarse) / (rho_sq - 1.0)
}
