//! The self-test suite: one check per headline capability, runnable from
//! the test harness and from the command line tool.
//!
//! Every criterion owns its tolerances, pinned here as code rather than
//! configuration. The final criterion reruns the whole suite and demands
//! byte-identical canonical reports, so nothing below may consult clocks,
//! unseeded randomness, or unordered parallel reductions inside payload
//! values; wall-clock timings live outside the serialized payload.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dimwalk;
use crate::membership::{self, TailScanSpec};
use crate::positivity::{self, ScanSpec};
use crate::profile::{rat_i64, Profile, SampledCurve, SplinePoly};
use crate::quadrature::QuadOpts;
use crate::report::{to_canonical_json, Classification, Verdict};
use crate::splines::{self, SplineSpec};
use crate::summability::{self, Generator};
use crate::transform::{self, PlaneMethod};
use crate::Result;

/// One criterion outcome. `seconds` stays out of the serialized form so
/// repeated runs can be compared byte for byte.
#[derive(Clone, Debug, serde::Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    #[serde(skip)]
    pub seconds: f64,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct AcceptanceSummary {
    pub results: Vec<CriterionResult>,
    pub all_passed: bool,
}

fn run_criterion(
    id: u32,
    name: &str,
    body: impl FnOnce() -> Result<(bool, String)>,
) -> CriterionResult {
    let start = Instant::now();
    let (passed, detail) = match body() {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    CriterionResult {
        id,
        name: name.to_string(),
        passed,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

/// Runs criteria 1 through 12 once, in order.
pub fn run_once() -> Vec<CriterionResult> {
    let mut results = vec![
        run_criterion(1, "plane_mass_matches_profile_moment", mass_identity),
        run_criterion(2, "reduction_three_way_agreement", reduction_agreement),
        run_criterion(3, "g_derivative_two_path_identity", g_two_paths),
        run_criterion(4, "companion_transform_and_pd_verdicts", exponential_pd),
        run_criterion(5, "indefinite_witness_location", indefinite_witness),
        run_criterion(6, "spline_construction_exact", spline_exact),
        run_criterion(7, "beta_family_proportionality", beta_proportionality),
        run_criterion(8, "endpoint_asymptotic_error_bound", endpoint_bound),
        run_criterion(9, "boundary_criterion_classification", boundary_classes),
        run_criterion(10, "tail_supremum_divergence", tail_divergence),
        run_criterion(11, "dimension_walk_round_trip", dimension_round_trip),
        run_criterion(12, "summability_kernels", summability_checks),
    ];
    // Per-criterion runtime budgets, part of the contract.
    let budgets = [
        (1, 20.0),
        (2, 60.0),
        (9, 15.0),
        (12, 120.0),
    ];
    for (id, limit) in budgets {
        let r = results.iter_mut().find(|r| r.id == id).expect("id exists");
        if r.seconds >= limit {
            r.passed = false;
            r.detail = format!("{} [exceeded {limit} s budget]", r.detail);
        }
    }
    results
}

/// Runs the suite twice and appends the determinism criterion comparing
/// the two canonical payloads byte for byte.
pub fn run_all() -> AcceptanceSummary {
    let start = Instant::now();
    let first = run_once();
    let second = run_once();
    let a = to_canonical_json(&first);
    let b = to_canonical_json(&second);
    let identical = a == b;
    let mut results = first;
    results.push(CriterionResult {
        id: 13,
        name: "repeat_determinism".to_string(),
        passed: identical,
        detail: format!(
            "two consecutive runs, {} byte payloads, {}",
            a.len(),
            if identical { "identical" } else { "DIFFER" }
        ),
        seconds: start.elapsed().as_secs_f64(),
    });
    AcceptanceSummary {
        all_passed: results.iter().all(|r| r.passed),
        results,
    }
}

// ---------------------------------------------------------------------------
// Criterion bodies
// ---------------------------------------------------------------------------

/// Plane mass of `|f|` by blind 2D cubature against `8 int t |f0|`.
fn mass_identity() -> Result<(bool, String)> {
    let mut pass = true;
    let mut parts = Vec::new();
    for (label, p) in [
        ("exp(1)", Profile::exponential(1.0)?),
        ("power(2)", Profile::power(2.0)?),
    ] {
        let oracle = transform::plane_transform_oracle(&p, 0.0, 0.0, None)?.value;
        let closed = 8.0 * p.moment_abs(1.0)?.value;
        let rel = (oracle - closed).abs() / closed.abs();
        pass &= rel <= 1e-6;
        parts.push(format!("{label}: rel diff {rel:.2e}"));
    }
    Ok((pass, parts.join("; ")))
}

/// The two reduction routes and the blind cubature oracle agree at seeded
/// pseudo-random frequencies.
fn reduction_agreement() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1f2e_3d4c_5b6a_7988);
    let points: Vec<(f64, f64)> = (0..25)
        .map(|_| (rng.gen_range(0.1..10.0), rng.gen_range(0.1..10.0)))
        .collect();
    let opts = QuadOpts::default();
    let a13 = splines::compensated_spline(&SplineSpec::new(1, 3)?)?;
    let cases = [
        ("power(2)", Profile::power(2.0)?, 1e-6),
        ("spline", Profile::Spline(a13), 1e-6),
        ("exp(1)", Profile::exponential(1.0)?, 1e-5),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (label, p, tol) in cases {
        let mut worst = 0.0f64;
        for &(y1, y2) in &points {
            let via_hat = transform::plane_transform(&p, y1, y2, PlaneMethod::ViaF0Hat, &opts)?;
            let via_der = transform::plane_transform(&p, y1, y2, PlaneMethod::ViaDerivative, &opts)?;
            let oracle = transform::plane_transform_oracle(&p, y1, y2, None)?.value;
            worst = worst
                .max((via_hat - via_der).abs())
                .max((via_hat - oracle).abs())
                .max((via_der - oracle).abs());
        }
        pass &= worst <= tol;
        parts.push(format!("{label}: max diff {worst:.2e} (tol {tol:.0e})"));
    }
    Ok((pass, parts.join("; ")))
}

/// Derivative of `g` through the profile derivative and through the
/// companion profile.
fn g_two_paths() -> Result<(bool, String)> {
    let opts = QuadOpts::default();
    let a13 = splines::compensated_spline(&SplineSpec::new(1, 3)?)?;
    let mut pass = true;
    let mut worst_overall = 0.0f64;
    for p in [Profile::exponential(1.0)?, Profile::Spline(a13)] {
        for t in [0.5, 1.0, 2.0, 5.0, 10.0] {
            let d = transform::g_derivative(&p, t, &opts)?.discrepancy;
            worst_overall = worst_overall.max(d);
            pass &= d <= 1e-6;
        }
    }
    Ok((pass, format!("max two-path discrepancy {worst_overall:.2e}")))
}

/// Companion cosine transform of the unit exponential against its closed
/// form, plus both positivity verdicts.
fn exponential_pd() -> Result<(bool, String)> {
    let p = Profile::exponential(1.0)?;
    let f1 = p.companion();
    let opts = QuadOpts::default();
    let mut worst = 0.0f64;
    for i in 0..50 {
        let x = 10.0 * i as f64 / 49.0;
        let numeric = positivity::cos_transform_f1(&f1, x, &opts)?.strict("closed-form check")?;
        let closed = 2.0 / (1.0 + x * x).powi(2);
        worst = worst.max((numeric - closed).abs());
    }
    let mut pass = worst <= 1e-8;

    let via_f1 = positivity::check_pd_via_f1(&p, &ScanSpec::default(), &opts)?;
    let direct = positivity::check_pd_direct(&p, &ScanSpec::default_2d(), &opts)?;
    pass &= via_f1.verdict.verdict == Verdict::StrictlyPositive && via_f1.verdict.min_margin > 0.0;
    pass &= direct.verdict == Verdict::StrictlyPositive && direct.min_margin > 0.0;
    Ok((
        pass,
        format!(
            "closed form max diff {worst:.2e}; verdicts {:?}/{:?}, margins {:.3e}/{:.3e}",
            via_f1.verdict.verdict, direct.verdict, via_f1.verdict.min_margin, direct.min_margin
        ),
    ))
}

/// The unit power profile is not positive definite; the scan's first
/// crossing must sit at the root of `sin x = x cos x`, located here by an
/// independent bisection.
fn indefinite_witness() -> Result<(bool, String)> {
    let p = Profile::power(1.0)?;
    let opts = QuadOpts::default();
    let scan = positivity::check_pd_via_f1(&p, &ScanSpec::default(), &opts)?;

    let s = |x: f64| x.sin() - x * x.cos();
    let (mut lo, mut hi) = (std::f64::consts::PI, 1.5 * std::f64::consts::PI);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if s(lo) * s(mid) <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let root = 0.5 * (lo + hi);

    let crossing = scan.verdict.first_crossing;
    let dist = crossing.map(|c| (c - root).abs());
    let pass = scan.verdict.verdict == Verdict::Indefinite
        && scan.verdict.is_consistent()
        && dist.map_or(false, |d| d <= 0.01);
    Ok((
        pass,
        format!(
            "verdict {:?}, first crossing {:?} vs bisection root {root:.6} (dist {:?})",
            scan.verdict.verdict, crossing, dist
        ),
    ))
}

/// Exact rational construction of the compensated family, and the
/// low-exponent variant flagged by the verifier.
fn spline_exact() -> Result<(bool, String)> {
    let mut pass = true;
    for d in [1u32, 3, 5, 7] {
        let a = splines::compensated_spline(&SplineSpec::new(1, d)?)?;
        let e = rat_i64((d as i64 + 5) / 2, 1);
        pass &= a.m == e && a.coeffs.len() == 2 && a.coeffs[1] == e;
    }
    let a23 = splines::compensated_spline(&SplineSpec::new(2, 3)?)?;
    pass &= a23.coeffs == vec![rat_i64(1, 1), rat_i64(6, 1), rat_i64(35, 3)];

    let spec23 = SplineSpec::new(2, 3)?;
    let variant = splines::low_exponent_r2(3)?;
    let report = splines::verify_properties(&variant, &spec23)?;
    let flagged = !report.degree_matches_claim && !report.positive_definite;
    pass &= flagged;
    Ok((
        pass,
        format!(
            "first-order family and a_1=6, a_2=35/3 exact; variant degree {} vs {} claimed, \
             dimension scan min {:.3e} (flagged: {flagged})",
            report.degree, report.degree_claimed, report.dimension_scan.min_value
        ),
    ))
}

/// `h(2,2)` against the first-order spline: the ratio is constant.
fn beta_proportionality() -> Result<(bool, String)> {
    let a11 = splines::compensated_spline(&SplineSpec::new(1, 1)?)?;
    let opts = QuadOpts::default();
    let mut ratios = Vec::new();
    for i in 0..20 {
        let x = (i as f64 + 0.5) / 20.0;
        let h = splines::eval_h(2.0, 2.0, x, &opts)?;
        ratios.push(h / a11.value(x));
    }
    let max = ratios.iter().cloned().fold(f64::MIN, f64::max);
    let min = ratios.iter().cloned().fold(f64::MAX, f64::min);
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    let spread = (max - min) / mean.abs();
    Ok((
        spread <= 1e-7,
        format!("ratio mean {mean:.9}, relative spread {spread:.2e}"),
    ))
}

/// Oscillatory endpoint asymptotics against direct quadrature, with the
/// advertised `O(1/x^3)`-scaled error window.
fn endpoint_bound() -> Result<(bool, String)> {
    let opts = QuadOpts::default();
    let mut pass = true;
    let mut worst_margin = 0.0f64;
    for alpha in [-0.5, 0.0, 0.7, 2.5] {
        for x in [50.0, 100.0] {
            let asym = transform::endpoint_asymptotic(alpha, x, 3)?;
            let reference = transform::endpoint_reference(alpha, x, &opts)?;
            let err = (asym - reference).norm();
            let allowed = 10.0 * alpha.abs().max(1.0) / (x * x * x);
            pass &= err <= allowed;
            worst_margin = worst_margin.max(err / allowed);
        }
    }
    Ok((
        pass,
        format!("worst error at {worst_margin:.3} of the allowed window"),
    ))
}

/// Boundary integral ladders: convergent across the power family,
/// divergent for the log-borderline curve, each ladder within budget.
fn boundary_classes() -> Result<(bool, String)> {
    let opts = QuadOpts::default();
    let mut pass = true;
    let mut parts = Vec::new();
    for alpha in [0.1, 0.5, 1.0, 2.0] {
        let t0 = Instant::now();
        let report = membership::boundary_log_criterion(&Profile::power(alpha)?, &opts)?;
        let dt = t0.elapsed().as_secs_f64();
        let ok = report.classification == Classification::Convergent && dt < 5.0;
        pass &= ok;
        parts.push(format!("alpha {alpha}: {:?}", report.classification));
    }
    let t0 = Instant::now();
    let borderline = membership::boundary_log_criterion(&membership::log_borderline_profile(), &opts)?;
    let dt = t0.elapsed().as_secs_f64();
    pass &= borderline.classification == Classification::Divergent && dt < 5.0;
    parts.push(format!("log-borderline: {:?}", borderline.classification));
    Ok((pass, parts.join("; ")))
}

/// Annulus-supremum partial integrals of the unit power profile grow like
/// a positive multiple of `ln T`.
fn tail_divergence() -> Result<(bool, String)> {
    let profile = membership::sup_tail_profile(&Profile::power(1.0)?, &TailScanSpec::default())?;
    let fit_slope = profile.report.fitted_exponent;
    let r2 = profile.report.r_squared;
    let pass = fit_slope > 0.0
        && r2 >= 0.98
        && profile.report.classification == Classification::Divergent;
    Ok((
        pass,
        format!(
            "partial integrals vs ln T: slope {fit_slope:.3}, r^2 {r2:.4}, {:?}",
            profile.report.classification
        ),
    ))
}

/// Descent to dimension three and numeric ascent back, plus the moment
/// condition that makes a descended profile vanish beyond the support.
fn dimension_round_trip() -> Result<(bool, String)> {
    let opts = QuadOpts::default();
    let f1 = Profile::Spline(SplinePoly::new(
        rat_i64(1, 1),
        vec![rat_i64(1, 2), rat_i64(1, 2)],
    )?);

    // Tabulate the numeric descent, then ascend numerically from the table.
    let n = 1200;
    let top = 1.6;
    let grid: Vec<f64> = (0..=n).map(|i| top * i as f64 / n as f64).collect();
    let mut values = Vec::with_capacity(grid.len());
    for &t in &grid {
        values.push(dimwalk::descend(&f1, 3, t, &opts)?);
    }
    let table = Profile::Tabulated(SampledCurve::new(grid, values, 3)?);
    let mut worst = 0.0f64;
    for i in 0..=30 {
        let t = 0.05 + 0.9 * i as f64 / 30.0;
        let back = dimwalk::ascend_odd(&table, 3, t)?;
        worst = worst.max((back - f1.value(t)).abs());
    }
    let mut pass = worst <= 1e-6;

    // Balanced profile: zero companion mass, so the descended profile
    // carries no `m0 / t` tail.
    let balanced = Profile::Spline(SplinePoly::from_ints(2, &[1, -4]));
    let mut worst_tail = 0.0f64;
    for t in [1.1, 2.0, 5.0] {
        worst_tail = worst_tail.max(dimwalk::descend(&balanced, 3, t, &opts)?.abs());
    }
    pass &= worst_tail <= 1e-8;
    Ok((
        pass,
        format!("round trip max err {worst:.2e}; balanced tail max {worst_tail:.2e}"),
    ))
}

/// Kernel positivity for the exponential generator and the sharp-cut norm
/// growth rate.
fn summability_checks() -> Result<(bool, String)> {
    let mut pass = true;
    let mut parts = Vec::new();
    for (eps, truncation) in [(0.1, 320), (0.5, 64), (1.0, 32)] {
        let field = summability::sample_multiplier(&Generator::Abel { eps }, truncation)?;
        let scan = summability::kernel_positivity(&field, 256);
        pass &= scan.nonnegative;
        parts.push(format!("eps {eps}: min {:.2e}", scan.min_value));
    }

    let scales = [8u32, 16, 32, 64];
    let mut norms = Vec::new();
    for &n in &scales {
        let field = summability::sample_multiplier(&Generator::SharpCut { n }, n)?;
        norms.push(summability::kernel_l1_norm(&field, summability::DEFAULT_NORM_DENSITY)?.value);
    }
    let fit = summability::norm_growth_slope(&scales, &norms)?;
    let in_window = fit.slope >= 1.5 && fit.slope <= 2.5;
    pass &= in_window;
    parts.push(format!("sharp-cut growth slope {:.3}", fit.slope));
    Ok((pass, parts.join("; ")))
}
