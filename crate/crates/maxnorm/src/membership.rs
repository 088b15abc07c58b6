//! Numerical criteria for membership in the algebra of absolutely
//! convergent Fourier integrals, and its radial-majorant subalgebra.
//!
//! Every criterion here is an improper integral. None of them can be
//! decided rigorously in floating point, so each one is evaluated on an
//! explicit truncation ladder and classified by the behavior of the
//! partial integrals; the full ladder is part of the report.

use rayon::prelude::*;

use crate::profile::{modulus_l1, ModulusTarget, Profile, SampledCurve};
use crate::quadrature::{self, Oscillation, QuadOpts, Range};
use crate::report::{linear_fit, Classification, ConvergenceReport, LadderPoint};
use crate::transform::GFunction;
use crate::{Error, Result};

// ---------------------------------------------------------------------------
// Ladder classification
// ---------------------------------------------------------------------------

/// Ratio of successive ladder increments at or below this is read as a
/// geometric tail, hence convergence.
const CONVERGENT_RATIO: f64 = 0.98;
/// Ratio at or above this means the increments themselves grow, which for
/// a nonnegative integrand is divergence outright.
const DIVERGENT_RATIO: f64 = 1.02;

/// Classify a ladder of partial integrals of a nonnegative integrand.
/// `fit_abscissae` are the x-values for the growth fit (ln(1/eps) for
/// shrinking cutoffs, ln T for growing ones); `fitted_exponent` is the
/// OLS slope over the last 8 points.
pub(crate) fn classify_partials(
    ladder: Vec<LadderPoint>,
    fit_abscissae: &[f64],
) -> ConvergenceReport {
    assert_eq!(ladder.len(), fit_abscissae.len());
    let partials: Vec<f64> = ladder.iter().map(|p| p.partial_integral).collect();
    let n = partials.len();
    let last = *partials.last().expect("ladder nonempty");
    let scale = 1.0 + last.abs();

    let k = n.min(8);
    let fit = linear_fit(&fit_abscissae[n - k..], &partials[n - k..]);

    let increments: Vec<f64> = partials.windows(2).map(|w| w[1] - w[0]).collect();
    let last_increment = increments.last().copied().unwrap_or(0.0);

    // Limiting ratio of successive increments. Increments of the form
    // rho^k * poly(k) have ratios rho * (1 + c/k + ...), so the raw mean
    // is biased away from rho; with enough samples the ratios are
    // extrapolated linearly in 1/x to their limit instead.
    let ratio = {
        let start = increments.len().saturating_sub(7);
        let mut rs = Vec::new();
        let mut us = Vec::new();
        for (i, w) in increments[start..].windows(2).enumerate() {
            let x = fit_abscissae[start + i + 2];
            if w[0].abs() > 1e-14 * scale && x > 0.0 {
                rs.push(w[1] / w[0]);
                us.push(1.0 / x);
            }
        }
        if rs.is_empty() {
            None
        } else if rs.len() >= 4 {
            let fit = linear_fit(&us, &rs);
            if fit.intercept.is_finite() {
                Some(fit.intercept)
            } else {
                Some(rs.iter().sum::<f64>() / rs.len() as f64)
            }
        } else {
            Some(rs.iter().sum::<f64>() / rs.len() as f64)
        }
    };

    let (classification, value_if_convergent) = if last_increment.abs() < 1e-12 * scale {
        (Classification::Convergent, Some(last))
    } else {
        match ratio {
            Some(rho) if rho <= CONVERGENT_RATIO => {
                let extrapolated = if rho > 0.0 {
                    last + last_increment * rho / (1.0 - rho)
                } else {
                    last
                };
                (Classification::Convergent, Some(extrapolated))
            }
            Some(rho) if rho >= DIVERGENT_RATIO => (Classification::Divergent, None),
            Some(rho) if fit.slope > 0.2 && fit.r_squared > 0.99 && rho >= 0.99 => {
                (Classification::Divergent, None)
            }
            _ => (Classification::Inconclusive, None),
        }
    };

    ConvergenceReport {
        classification,
        epsilon_ladder: ladder,
        fitted_exponent: fit.slope,
        r_squared: fit.r_squared,
        increment_ratio: ratio,
        value_if_convergent,
    }
}

fn require_unit_support(p: &Profile) -> Result<()> {
    match p.support_radius() {
        Some(r) if (r - 1.0).abs() < 1e-9 => Ok(()),
        other => Err(Error::InvalidParameter(format!(
            "criterion needs support radius 1, profile has {other:?}"
        ))),
    }
}

/// Shared dyadic-cutoff ladder: partial integrals of `weight(t) *
/// f0(1 - t)` over `[eps, 1]` for `eps = 2^-k`, `k = 4..=20`, accumulated
/// by segments so increments are exact to quadrature accuracy.
fn boundary_ladder(
    p: &Profile,
    weight: impl Fn(f64) -> f64 + Sync,
    opts: &QuadOpts,
) -> Result<ConvergenceReport> {
    require_unit_support(p)?;
    let ks: Vec<i32> = (4..=20).collect();
    let segments: Vec<f64> = ks
        .par_iter()
        .map(|&k| {
            let hi = if k == 4 { 1.0 } else { 0.5f64.powi(k - 1) };
            let lo = 0.5f64.powi(k);
            let seg = quadrature::integrate(
                |t| p.value(1.0 - t) * weight(t),
                Range::Finite(lo, hi),
                Oscillation::None,
                &[],
                opts,
            )?;
            seg.strict("boundary criterion segment")
        })
        .collect::<Result<_>>()?;
    let mut ladder = Vec::with_capacity(ks.len());
    let mut acc = 0.0;
    for (i, &k) in ks.iter().enumerate() {
        acc += segments[i];
        ladder.push(LadderPoint {
            epsilon: 0.5f64.powi(k),
            partial_integral: acc,
        });
    }
    let abscissae: Vec<f64> = ks.iter().map(|&k| k as f64 * std::f64::consts::LN_2).collect();
    Ok(classify_partials(ladder, &abscissae))
}

/// Boundary criterion with logarithmic weight:
/// `int_0^1 f0(1-t) ln(2/t) / t dt`, the membership test for profiles
/// that are concave and decreasing near the support edge.
pub fn boundary_log_criterion(p: &Profile, opts: &QuadOpts) -> Result<ConvergenceReport> {
    boundary_ladder(p, |t| (2.0 / t).ln() / t, opts)
}

/// Radial analogue with the stronger weight `t^{-3/2}`:
/// `int_0^1 f0(1-t) t^{-3/2} dt`. Profiles can pass the logarithmic
/// criterion and fail this one, which is the max-norm versus euclidean
/// gap made quantitative.
pub fn boundary_radial_criterion(p: &Profile, opts: &QuadOpts) -> Result<ConvergenceReport> {
    boundary_ladder(p, |t| t.powf(-1.5), opts)
}

// ---------------------------------------------------------------------------
// Sufficient smoothness criterion
// ---------------------------------------------------------------------------

/// The four integrals of the sufficient membership test. All four finite
/// implies membership; the converse fails.
#[derive(Clone, Debug, serde::Serialize)]
pub struct SmoothnessReport {
    /// `int_0^1 |f0'(t)| ln^2(2/t) dt`
    pub derivative_log_squared: ConvergenceReport,
    /// `int_1^inf t^2 |f0'(t)| dt`
    pub tail_second_moment: ConvergenceReport,
    /// `int_0^1 w(f0'; t)_1 / t * ln(2/t) dt`
    pub derivative_modulus: ConvergenceReport,
    /// `int_0^1 w(f1'; t)_1 / t dt`
    pub companion_derivative_modulus: ConvergenceReport,
    pub satisfied: bool,
}

pub fn sufficient_smoothness_criterion(p: &Profile, opts: &QuadOpts) -> Result<SmoothnessReport> {
    if p.derivative_order_available() < 1 {
        return Err(Error::Unsupported(
            "smoothness criterion needs a differentiable profile".into(),
        ));
    }

    // int_0^1 |f0'| ln^2(2/t) dt on a shrinking dyadic cutoff.
    let derivative_log_squared = {
        let ks: Vec<i32> = (1..=20).collect();
        let segments: Vec<f64> = ks
            .par_iter()
            .map(|&k| {
                let hi = 0.5f64.powi(k - 1);
                let lo = 0.5f64.powi(k);
                let seg = quadrature::integrate(
                    |t| p.derivative(t).abs() * (2.0 / t).ln().powi(2),
                    Range::Finite(lo, hi),
                    Oscillation::None,
                    &[],
                    opts,
                )?;
                seg.strict("derivative log-squared segment")
            })
            .collect::<Result<_>>()?;
        let mut ladder = Vec::new();
        let mut acc = 0.0;
        for (i, &k) in ks.iter().enumerate() {
            acc += segments[i];
            ladder.push(LadderPoint {
                epsilon: 0.5f64.powi(k),
                partial_integral: acc,
            });
        }
        let xs: Vec<f64> = ks.iter().map(|&k| k as f64 * std::f64::consts::LN_2).collect();
        classify_partials(ladder, &xs)
    };

    // int_1^T t^2 |f0'| dt on a doubling T-ladder.
    let tail_second_moment = {
        let js: Vec<i32> = (1..=10).collect();
        let segments: Vec<f64> = js
            .par_iter()
            .map(|&j| {
                let lo = 2f64.powi(j - 1);
                let hi = 2f64.powi(j);
                if let Some(r) = p.support_radius() {
                    if lo >= r {
                        return Ok(0.0);
                    }
                }
                let seg = quadrature::integrate(
                    |t| t * t * p.derivative(t).abs(),
                    Range::Finite(lo, hi),
                    Oscillation::None,
                    &p.breakpoints(),
                    opts,
                )?;
                seg.strict("tail second-moment segment")
            })
            .collect::<Result<_>>()?;
        let mut ladder = Vec::new();
        let mut acc = 0.0;
        for (i, &j) in js.iter().enumerate() {
            acc += segments[i];
            ladder.push(LadderPoint {
                epsilon: 2f64.powi(j),
                partial_integral: acc,
            });
        }
        let xs: Vec<f64> = js.iter().map(|&j| j as f64 * std::f64::consts::LN_2).collect();
        classify_partials(ladder, &xs)
    };

    let derivative_modulus = modulus_ladder(p, ModulusTarget::ProfileDerivative, true, opts)?;
    let companion_derivative_modulus =
        modulus_ladder(p, ModulusTarget::CompanionDerivative, false, opts)?;

    let all = [
        &derivative_log_squared,
        &tail_second_moment,
        &derivative_modulus,
        &companion_derivative_modulus,
    ];
    let satisfied = all
        .iter()
        .all(|r| r.classification == Classification::Convergent);
    Ok(SmoothnessReport {
        derivative_log_squared,
        tail_second_moment,
        derivative_modulus,
        companion_derivative_modulus,
        satisfied,
    })
}

/// `int_0^1 w(target; t)/t * (ln(2/t) if log_weight) dt` via the
/// substitution `t = 2^-s`, which turns the integral into a plain sum of
/// modulus values on the dyadic ladder, handled by the trapezoid rule.
fn modulus_ladder(
    p: &Profile,
    target: ModulusTarget,
    log_weight: bool,
    opts: &QuadOpts,
) -> Result<ConvergenceReport> {
    let j_max = 20usize;
    let moduli: Vec<f64> = (0..=j_max)
        .into_par_iter()
        .map(|j| {
            let delta = 0.5f64.powi(j as i32);
            modulus_l1(p, target, delta, opts).map(|m| m.value)
        })
        .collect::<Result<_>>()?;
    let ln2 = std::f64::consts::LN_2;
    // With t = 2^-s: dt/t = -ln2 ds and ln(2/t) = ln2 * (1 + s).
    let weighted: Vec<f64> = moduli
        .iter()
        .enumerate()
        .map(|(j, &w)| {
            if log_weight {
                ln2 * ln2 * w * (1.0 + j as f64)
            } else {
                ln2 * w
            }
        })
        .collect();
    let mut ladder = Vec::new();
    for j_hi in 1..=j_max {
        let mut acc = 0.5 * weighted[0] + 0.5 * weighted[j_hi];
        for w in &weighted[1..j_hi] {
            acc += w;
        }
        ladder.push(LadderPoint {
            epsilon: 0.5f64.powi(j_hi as i32),
            partial_integral: acc,
        });
    }
    let xs: Vec<f64> = (1..=j_max).map(|j| j as f64 * ln2).collect();
    Ok(classify_partials(ladder, &xs))
}

// ---------------------------------------------------------------------------
// Annulus-supremum tail profile
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct TailScanSpec {
    pub t_min: f64,
    pub t_max: f64,
    pub points: usize,
    /// Outer radius of the frequency scan; the supremum over `|y| >= t`
    /// is approximated on `[t, y_radius]`.
    pub y_radius: f64,
    /// Angular samples on `[0, pi/4]`; the full circle follows from the
    /// eightfold symmetry of the transform.
    pub angles: usize,
    pub partial_ts: Vec<f64>,
}

impl Default for TailScanSpec {
    fn default() -> Self {
        TailScanSpec {
            t_min: 1.0,
            t_max: 64.0,
            points: 512,
            y_radius: 128.0,
            angles: 91,
            partial_ts: vec![8.0, 16.0, 32.0, 64.0],
        }
    }
}

/// `S(t) = t * sup |fhat(y)|` over the annulus `t <= |y| <= y_radius`,
/// whose integral over `[1, inf)` is the radial-subalgebra norm. The
/// report classifies the partial integrals on the T-ladder.
#[derive(Clone, Debug, serde::Serialize)]
pub struct TailProfile {
    pub curve: SampledCurve,
    pub report: ConvergenceReport,
    /// Set when the annulus supremum is attained at the outer scan
    /// radius, meaning `y_radius` truncates the true supremum.
    pub boundary_attained: bool,
    /// Number of directions on the full circle represented by the scan.
    pub directions: usize,
}

pub fn sup_tail_profile(p: &Profile, spec: &TailScanSpec) -> Result<TailProfile> {
    if !(spec.t_min > 0.0) || !(spec.t_max > spec.t_min) || !(spec.y_radius >= spec.t_max) {
        return Err(Error::InvalidParameter(
            "tail scan needs 0 < t_min < t_max <= y_radius".into(),
        ));
    }
    if spec.angles < 2 || spec.points < 8 {
        return Err(Error::InvalidParameter(
            "tail scan needs at least 2 angles and 8 radial points".into(),
        ));
    }
    let g = GFunction::build(p, 1.01 * std::f64::consts::SQRT_2 * spec.y_radius)?;

    let n_rho = (((spec.y_radius - spec.t_min) / 0.05).ceil() as usize).clamp(spec.points, 6000);
    let rhos: Vec<f64> = (0..=n_rho)
        .map(|i| spec.t_min + (spec.y_radius - spec.t_min) * i as f64 / n_rho as f64)
        .collect();
    let quarter_pi = std::f64::consts::FRAC_PI_4;
    let ring_max: Vec<f64> = rhos
        .par_iter()
        .map(|&rho| {
            let mut m = 0.0f64;
            for k in 0..spec.angles {
                let theta = quarter_pi * k as f64 / (spec.angles - 1) as f64;
                let v = g.fhat(rho * theta.cos(), rho * theta.sin()).abs();
                m = m.max(v);
            }
            m
        })
        .collect();

    // Suffix maxima turn ring maxima into annulus suprema.
    let mut suffix = ring_max.clone();
    for i in (0..suffix.len() - 1).rev() {
        suffix[i] = suffix[i].max(suffix[i + 1]);
    }
    let mut argmax_global = 0;
    for (i, &v) in ring_max.iter().enumerate() {
        if v > ring_max[argmax_global] {
            argmax_global = i;
        }
    }
    let outer_start = rhos.partition_point(|&r| r < spec.t_max);
    let boundary_attained = {
        let tail = &ring_max[outer_start.min(ring_max.len() - 1)..];
        let mut idx = 0;
        for (i, &v) in tail.iter().enumerate() {
            if v > tail[idx] {
                idx = i;
            }
        }
        idx + outer_start.min(ring_max.len() - 1) == ring_max.len() - 1 && *tail.last().unwrap() > 0.0
    };

    let sup_at = |t: f64| -> f64 {
        let i = rhos.partition_point(|&r| r < t).min(suffix.len() - 1);
        suffix[i]
    };
    let t_grid: Vec<f64> = (0..spec.points)
        .map(|i| spec.t_min + (spec.t_max - spec.t_min) * i as f64 / (spec.points - 1) as f64)
        .collect();
    let s_vals: Vec<f64> = t_grid.iter().map(|&t| t * sup_at(t)).collect();

    let mut ladder = Vec::new();
    for &t_end in &spec.partial_ts {
        let mut acc = 0.0;
        for w in t_grid.windows(2).zip(s_vals.windows(2)) {
            let (ts, ss) = w;
            if ts[1] > t_end {
                break;
            }
            acc += 0.5 * (ss[0] + ss[1]) * (ts[1] - ts[0]);
        }
        ladder.push(LadderPoint {
            epsilon: t_end,
            partial_integral: acc,
        });
    }
    let xs: Vec<f64> = spec.partial_ts.iter().map(|&t| t.ln()).collect();
    let report = classify_partials(ladder, &xs);

    Ok(TailProfile {
        curve: SampledCurve::new(t_grid, s_vals, 1)?,
        report,
        boundary_attained,
        directions: 8 * (spec.angles - 1),
    })
}

// ---------------------------------------------------------------------------
// Reference profiles for the borderline cases
// ---------------------------------------------------------------------------

/// Tabulated profile with `f0(1-t) = 1/ln(2e/t)`: continuous, vanishing
/// at the support edge, yet just slow enough that the boundary
/// criterion's integrand behaves like `1/t`. The grid is geometric in
/// the distance to the edge down to `2^-24`.
pub fn log_borderline_profile() -> Profile {
    let mut grid = Vec::new();
    let mut values = Vec::new();
    for i in 0..=96 {
        let gap = 0.5f64.powf(i as f64 / 4.0);
        let s = 1.0 - gap;
        grid.push(s);
        values.push(1.0 / (2.0 * std::f64::consts::E / gap).ln());
    }
    grid.push(1.0);
    values.push(0.0);
    Profile::Tabulated(SampledCurve::new(grid, values, 1).expect("valid grid"))
}

/// Indicator of `[0, 1)` as a tabulated profile; the discontinuity at the
/// edge fails the boundary criterion maximally.
pub fn indicator_profile() -> Profile {
    Profile::Tabulated(SampledCurve::new(vec![0.0, 1.0], vec![1.0, 1.0], 1).expect("valid grid"))
}
