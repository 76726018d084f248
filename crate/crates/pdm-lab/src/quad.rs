//! Adaptive Gauss–Kronrod quadrature.
//!
//! A 7-point Gauss / 15-point Kronrod pair drives interval bisection: the
//! worst interval (largest error estimate) is split until the summed error
//! estimate meets the requested tolerance. The integrands in this crate are
//! smooth, so no singular-endpoint handling is provided.

use crate::error::{Error, Result};

// Abscissae and weights of the (G7, K15) pair on [-1, 1].
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    /// Summed error estimate over all intervals.
    pub error_estimate: f64,
    pub intervals: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn kronrod_15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let f_center = f(center);
    let mut result_gauss = 0.0;
    let mut result_kronrod = f_center * WGK[7];

    // odd Kronrod points carry the embedded Gauss rule
    for (j, &wg) in WG.iter().enumerate().take(3) {
        let jtw = 2 * j + 1;
        let x = half * XGK[jtw];
        let fsum = f(center - x) + f(center + x);
        result_gauss += wg * fsum;
        result_kronrod += WGK[jtw] * fsum;
    }
    result_gauss += WG[3] * f_center;

    for j in 0..4 {
        let jtw = 2 * j;
        let x = half * XGK[jtw];
        result_kronrod += WGK[jtw] * (f(center - x) + f(center + x));
    }

    let value = result_kronrod * half;
    let error = ((result_kronrod - result_gauss) * half).abs();
    (value, error)
}

/// Integrates `f` over [a, b] until |error| <= max(abs_tol, rel_tol·|I|).
///
/// Fails after `max_intervals` subdivisions without meeting the tolerance.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<QuadResult> {
    const MAX_INTERVALS: usize = 10_000;
    if a == b {
        return Ok(QuadResult {
            value: 0.0,
            error_estimate: 0.0,
            intervals: 0,
        });
    }
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "bounds",
            reason: format!("integration bounds must be finite, got [{a}, {b}]"),
        });
    }

    let (value, error) = kronrod_15(&f, a, b);
    let mut segments = vec![Segment {
        a,
        b,
        value,
        error,
    }];

    loop {
        let total: f64 = segments.iter().map(|s| s.value).sum();
        let total_err: f64 = segments.iter().map(|s| s.error).sum();
        let tol = abs_tol.max(rel_tol * total.abs());
        if total_err <= tol {
            return Ok(QuadResult {
                value: total,
                error_estimate: total_err,
                intervals: segments.len(),
            });
        }
        if segments.len() >= MAX_INTERVALS {
            return Err(Error::QuadratureFailure(format!(
                "error estimate {total_err:e} above tolerance {tol:e} after {} intervals",
                segments.len()
            )));
        }
        // split the worst interval
        let (worst, _) = segments
            .iter()
            .enumerate()
            .max_by(|(_, s), (_, t)| s.error.total_cmp(&t.error))
            .expect("segments is never empty");
        let seg = segments.swap_remove(worst);
        let mid = 0.5 * (seg.a + seg.b);
        if mid <= seg.a || mid >= seg.b {
            return Err(Error::QuadratureFailure(format!(
                "interval [{}, {}] cannot be split further",
                seg.a, seg.b
            )));
        }
        let (lv, le) = kronrod_15(&f, seg.a, mid);
        let (rv, re) = kronrod_15(&f, mid, seg.b);
        segments.push(Segment {
            a: seg.a,
            b: mid,
            value: lv,
            error: le,
        });
        segments.push(Segment {
            a: mid,
            b: seg.b,
            value: rv,
            error: re,
        });
    }
}
