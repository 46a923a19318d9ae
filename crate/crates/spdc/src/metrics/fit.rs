//! Weighted least-squares fits: straight lines for power scans and the
//! cos²-with-offset model for polarization scans.

use super::MetricsError;

/// Straight-line fit y = slope·x + intercept.
///
/// With per-point errors the parameter errors are absolute (taken from the
/// error bars); without, they are scaled by the reduced χ², following the
/// usual straight-line-fit prescription.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_error: f64,
    pub intercept_error: f64,
    pub r_squared: f64,
}

fn check_points(
    n: usize,
    needed: usize,
    sigmas: Option<&[f64]>,
    len: usize,
) -> Result<(), MetricsError> {
    if n < needed {
        return Err(MetricsError::TooFewPoints { needed, got: n });
    }
    if let Some(s) = sigmas {
        if s.len() != len {
            return Err(MetricsError::LengthMismatch);
        }
        for &sigma in s {
            if !sigma.is_finite() || sigma <= 0.0 {
                return Err(MetricsError::NonPositiveError(sigma));
            }
        }
    }
    Ok(())
}

/// Weighted least squares on (x, y) points; weights are 1/σ² when `sigmas`
/// is given, unity otherwise.
pub fn fit_linear(
    points: &[(f64, f64)],
    sigmas: Option<&[f64]>,
) -> Result<LinearFit, MetricsError> {
    let n = points.len();
    check_points(n, 2, sigmas, n)?;
    if points.iter().all(|&(x, _)| x == points[0].0) {
        return Err(MetricsError::DegenerateAbscissa);
    }
    let weight = |i: usize| sigmas.map_or(1.0, |s| 1.0 / (s[i] * s[i]));

    let mut s = 0.0;
    let mut sx = 0.0;
    let mut sy = 0.0;
    for (i, &(x, y)) in points.iter().enumerate() {
        let w = weight(i);
        s += w;
        sx += w * x;
        sy += w * y;
    }
    // shifted abscissa t = x - <x> for numerical stability
    let mut stt = 0.0;
    let mut sty = 0.0;
    for (i, &(x, y)) in points.iter().enumerate() {
        let w = weight(i);
        let t = x - sx / s;
        stt += w * t * t;
        sty += w * t * y;
    }
    if stt <= 0.0 {
        return Err(MetricsError::DegenerateAbscissa);
    }
    let slope = sty / stt;
    let intercept = (sy - sx * slope) / s;

    let mut chi2 = 0.0;
    let mut ss_tot = 0.0;
    let y_mean = sy / s;
    for (i, &(x, y)) in points.iter().enumerate() {
        let w = weight(i);
        chi2 += w * (y - intercept - slope * x).powi(2);
        ss_tot += w * (y - y_mean).powi(2);
    }
    let r_squared = if ss_tot > 0.0 {
        (1.0 - chi2 / ss_tot).clamp(0.0, 1.0)
    } else {
        1.0
    };

    let mut slope_var = 1.0 / stt;
    let mut intercept_var = (1.0 + sx * sx / (s * stt)) / s;
    if sigmas.is_none() {
        // unknown errors: scale by reduced chi-squared (0 for an exact
        // 2-point interpolation)
        let scale = if n > 2 { chi2 / (n - 2) as f64 } else { 0.0 };
        slope_var *= scale;
        intercept_var *= scale;
    }
    Ok(LinearFit {
        slope,
        intercept,
        slope_error: slope_var.sqrt(),
        intercept_error: intercept_var.sqrt(),
        r_squared,
    })
}

/// Result of fitting rate(θ) = offset + amplitude·cos²(θ − θ₀).
///
/// θ₀ is reported in [0, 180)°. A flat scan cannot constrain θ₀: the fit
/// then sets `degenerate`, reports θ₀ = 0 and infinite θ₀ error. Errors are
/// 1σ, propagated from the linear-basis covariance by the delta method.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizationFit {
    pub amplitude: f64,
    pub offset: f64,
    pub theta0_deg: f64,
    pub amplitude_error: f64,
    pub offset_error: f64,
    pub theta0_error_deg: f64,
    /// √χ² of the (weighted) residuals.
    pub residual_norm: f64,
    pub degenerate: bool,
}

/// Fits offset + amplitude·cos²(θ − θ₀) by linear least squares in the
/// basis {1, cos 2θ, sin 2θ} (since cos²(θ−θ₀) = ½ + ½cos(2θ−2θ₀)).
/// Needs ≥ 4 points spanning ≥ 90° of angle.
pub fn fit_polarization(
    points: &[(f64, f64)],
    sigmas: Option<&[f64]>,
) -> Result<PolarizationFit, MetricsError> {
    let n = points.len();
    check_points(n, 4, sigmas, n)?;
    let span = points
        .iter()
        .map(|&(t, _)| t)
        .fold(f64::NEG_INFINITY, f64::max)
        - points
            .iter()
            .map(|&(t, _)| t)
            .fold(f64::INFINITY, f64::min);
    if span < 90.0 || span.is_nan() {
        return Err(MetricsError::InsufficientAngularSpan { span_deg: span });
    }
    let weight = |i: usize| sigmas.map_or(1.0, |s| 1.0 / (s[i] * s[i]));

    // normal equations for the 3-parameter linear model
    let mut m = [[0.0f64; 3]; 3];
    let mut v = [0.0f64; 3];
    for (i, &(theta_deg, y)) in points.iter().enumerate() {
        let w = weight(i);
        let phi = 2.0 * theta_deg.to_radians();
        let row = [1.0, phi.cos(), phi.sin()];
        for a in 0..3 {
            for b in 0..3 {
                m[a][b] += w * row[a] * row[b];
            }
            v[a] += w * row[a] * y;
        }
    }
    let m_inv = invert3(&m).ok_or(MetricsError::DegenerateAbscissa)?;
    let mut c = [0.0f64; 3];
    for a in 0..3 {
        for b in 0..3 {
            c[a] += m_inv[a][b] * v[b];
        }
    }

    let mut chi2 = 0.0;
    for (i, &(theta_deg, y)) in points.iter().enumerate() {
        let w = weight(i);
        let phi = 2.0 * theta_deg.to_radians();
        let model = c[0] + c[1] * phi.cos() + c[2] * phi.sin();
        chi2 += w * (y - model).powi(2);
    }

    // covariance of the basis coefficients
    let cov_scale = if sigmas.is_some() {
        1.0
    } else if n > 3 {
        chi2 / (n - 3) as f64
    } else {
        0.0
    };
    let cov = |a: usize, b: usize| m_inv[a][b] * cov_scale;

    let r = c[1].hypot(c[2]);
    let amplitude = 2.0 * r;
    let offset = c[0] - r;
    let degenerate = amplitude <= 1e-10 * c[0].abs().max(f64::MIN_POSITIVE);

    let theta0_deg = if degenerate {
        0.0
    } else {
        let mut t = 0.5 * c[2].atan2(c[1]).to_degrees();
        if t < 0.0 {
            t += 180.0;
        }
        // atan2 can return exactly -0.0; keep the interval half-open
        if t >= 180.0 {
            t -= 180.0;
        }
        t
    };

    let (amplitude_error, offset_error, theta0_error_deg) = if degenerate {
        ((4.0 * cov(1, 1)).sqrt(), cov(0, 0).sqrt(), f64::INFINITY)
    } else {
        // delta method through A = 2r, offset = c0 - r, θ0 = ½ atan2(c2, c1)
        let grad_a = [0.0, 2.0 * c[1] / r, 2.0 * c[2] / r];
        let grad_off = [1.0, -c[1] / r, -c[2] / r];
        let grad_t0 = [0.0, -c[2] / (2.0 * r * r), c[1] / (2.0 * r * r)];
        let quad = |g: [f64; 3]| {
            let mut acc = 0.0;
            for a in 0..3 {
                for b in 0..3 {
                    acc += g[a] * cov(a, b) * g[b];
                }
            }
            acc.max(0.0)
        };
        (
            quad(grad_a).sqrt(),
            quad(grad_off).sqrt(),
            quad(grad_t0).sqrt().to_degrees(),
        )
    };

    Ok(PolarizationFit {
        amplitude,
        offset,
        theta0_deg,
        amplitude_error,
        offset_error,
        theta0_error_deg,
        residual_norm: chi2.max(0.0).sqrt(),
        degenerate,
    })
}

// indexed loops keep the 3x3 cofactor algebra legible
#[allow(clippy::needless_range_loop)]
fn invert3(m: &[[f64; 3]; 3]) -> Option<[[f64; 3]; 3]> {
    let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    if det == 0.0 || !det.is_finite() {
        return None;
    }
    let inv_det = 1.0 / det;
    let mut out = [[0.0f64; 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            let (a1, a2) = ((a + 1) % 3, (a + 2) % 3);
            let (b1, b2) = ((b + 1) % 3, (b + 2) % 3);
            // transpose of the cofactor matrix
            out[b][a] = (m[a1][b1] * m[a2][b2] - m[a1][b2] * m[a2][b1]) * inv_det;
        }
    }
    Some(out)
}
