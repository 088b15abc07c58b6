//! Walking radial functions between dimensions. A univariate profile and
//! the d-dimensional radial function built from it share one spectral
//! measure; `descend` transports the profile up in dimension by an
//! averaging integral, `ascend_odd` inverts that in odd dimensions by
//! differentiation, and `bessel_j` is the kernel that makes the pair work.

use num::rational::BigRational;
use num::{BigInt, One, Zero};

use crate::profile::{rat_i64, Profile, SplinePoly};
use crate::quadrature::{self, Oscillation, QuadOpts, Range};
use crate::special;
use crate::{Error, Result};

/// A radial function on `R^d`, as its profile in `t = |x|`.
#[derive(Clone, Debug, serde::Serialize, serde::Deserialize)]
pub struct RadialProfile {
    pub dimension: u32,
    pub profile: Profile,
}

impl RadialProfile {
    pub fn new(dimension: u32, profile: Profile) -> Result<Self> {
        if dimension < 1 {
            return Err(Error::InvalidParameter("dimension must be >= 1".into()));
        }
        Ok(RadialProfile { dimension, profile })
    }

    pub fn value(&self, t: f64) -> f64 {
        self.profile.value(t)
    }
}

// ---------------------------------------------------------------------------
// Descent
// ---------------------------------------------------------------------------

/// `f_d(t) = int_0^1 (1-u^2)^((d-3)/2) f1(ut) du` for an arbitrary
/// evaluable integrand, written as an integral over `u = sin(theta)` so
/// the `d = 2` endpoint weight stays bounded. `theta_breaks` marks angles
/// where the integrand loses smoothness.
pub fn descend_fn(
    f1: impl Fn(f64) -> f64,
    d: u32,
    t: f64,
    theta_breaks: &[f64],
    opts: &QuadOpts,
) -> Result<f64> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!(
            "descent is defined for dimension >= 2, got {d}"
        )));
    }
    if !(t >= 0.0) {
        return Err(Error::InvalidParameter(format!("negative radius {t}")));
    }
    let pow = (d - 2) as i32;
    let out = quadrature::integrate(
        |theta| theta.cos().powi(pow) * f1(t * theta.sin()),
        Range::Finite(0.0, std::f64::consts::FRAC_PI_2),
        Oscillation::None,
        theta_breaks,
        opts,
    )?;
    out.strict("descent integral")
}

/// Descent of a profile, with the support edge mapped to its angle.
pub fn descend(f1: &Profile, d: u32, t: f64, opts: &QuadOpts) -> Result<f64> {
    let mut breaks = Vec::new();
    if t > 0.0 {
        for b in f1.breakpoints() {
            if b < t {
                breaks.push((b / t).asin());
            }
        }
    }
    descend_fn(|u| f1.value(u), d, t, &breaks, opts)
}

/// `int_0^1 u^k (1-u^2)^((d-3)/2) du` as an exact rational, odd `d`.
fn descend_factor(k: usize, half: u32) -> BigRational {
    // (half-1)! 2^(half-1) / ((k+1)(k+3)...(k+2*half-1))
    let mut num = BigInt::one();
    for i in 1..half as i64 {
        num *= BigInt::from(2 * i);
    }
    let mut den = BigInt::one();
    for i in 0..half as i64 {
        den *= BigInt::from(k as i64 + 1 + 2 * i);
    }
    BigRational::new(num, den)
}

/// The multiplier that `ascend_odd` applies to `t^k`, derived from
/// differentiating `s^(half - 1/2 + k/2)` `half` times.
fn ascend_factor(k: usize, half: u32) -> BigRational {
    let mut fact = BigInt::one();
    for i in 1..half as i64 {
        fact *= BigInt::from(i);
    }
    let mut prod = BigRational::new(BigInt::from(2), fact);
    for j in 0..half as i64 {
        prod *= rat_i64(2 * half as i64 - 1 + k as i64 - 2 * j, 2);
    }
    prod
}

fn odd_half(d: u32, what: &str) -> Result<u32> {
    if d % 2 == 0 {
        return Err(Error::Unsupported(format!(
            "{what} in even dimension {d} needs half-integer derivatives"
        )));
    }
    if d < 3 {
        return Err(Error::InvalidParameter(format!(
            "{what} needs dimension >= 3, got {d}"
        )));
    }
    Ok((d - 1) / 2)
}

/// Exact descent of a polynomial profile, valid on the support of `f1`.
/// Beyond it the true `f_d` is no longer polynomial, so the result only
/// represents the descent on `[0, support]`.
pub fn descend_exact_poly(f1: &SplinePoly, d: u32) -> Result<SplinePoly> {
    let half = odd_half(d, "exact descent")?;
    let q = f1.expand()?;
    let mapped: Vec<BigRational> = q
        .iter()
        .enumerate()
        .map(|(k, c)| c * descend_factor(k, half))
        .collect();
    SplinePoly::new(BigRational::zero(), mapped)
}

/// Exact inverse of [`descend_exact_poly`] on the polynomial coefficients.
pub fn ascend_exact_poly(fd: &SplinePoly, d: u32) -> Result<SplinePoly> {
    let half = odd_half(d, "exact ascent")?;
    let q = fd.expand()?;
    let mapped: Vec<BigRational> = q
        .iter()
        .enumerate()
        .map(|(k, c)| c * ascend_factor(k, half))
        .collect();
    SplinePoly::new(BigRational::zero(), mapped)
}

// ---------------------------------------------------------------------------
// Ascent
// ---------------------------------------------------------------------------

const EPS: f64 = f64::EPSILON;

fn stencil1(g: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (-g(x + 2.0 * h) + 8.0 * g(x + h) - 8.0 * g(x - h) + g(x - 2.0 * h)) / (12.0 * h)
}

fn stencil2(g: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (-g(x + 2.0 * h) + 16.0 * g(x + h) - 30.0 * g(x) + 16.0 * g(x - h) - g(x - 2.0 * h))
        / (12.0 * h * h)
}

fn stencil3(g: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (g(x - 3.0 * h) - 8.0 * g(x - 2.0 * h) + 13.0 * g(x - h) - 13.0 * g(x + h)
        + 8.0 * g(x + 2.0 * h)
        - g(x + 3.0 * h))
        / (8.0 * h * h * h)
}

/// One difference estimate plus a doubled-step consistency check; the gap
/// between the two is the instability signal for profiles that are not
/// smooth enough to ascend.
fn checked_difference(est: impl Fn(f64) -> f64, h: f64, context: &str) -> Result<f64> {
    let fine = est(h);
    let coarse = est(2.0 * h);
    let err = (fine - coarse).abs() / 15.0;
    if !fine.is_finite() || err > 1e-3 * (1.0 + fine.abs()) {
        return Err(Error::NonConvergent {
            context: context.into(),
            best: fine,
            err,
        });
    }
    Ok(fine)
}

/// Recover `f1(t)` from the dimension-`d` profile, odd `d` in `3..=7`.
///
/// Spline profiles go through the exact coefficient map; everything else
/// uses fourth-order difference stencils on `F(s) = s^(half-1/2) f_d(sqrt s)`
/// at `s = t^2`, with the step chosen for the order of the derivative
/// being taken. In dimension 3 the equivalent form `(t f_d(t))'` avoids
/// the substitution and works down to `t = 0` through the odd extension.
pub fn ascend_odd(fd: &Profile, d: u32, t: f64) -> Result<f64> {
    let half = odd_half(d, "ascent")?;
    if half > 3 {
        return Err(Error::Unsupported(format!(
            "ascent beyond dimension 7 is not implemented, got {d}"
        )));
    }
    if !(t > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "ascent is defined for t > 0, got {t}"
        )));
    }
    if let Profile::Spline(s) = fd {
        if let Ok(f1) = ascend_exact_poly(s, d) {
            return Ok(f1.value(t));
        }
    }

    if half == 1 {
        let g = |x: f64| x * fd.value(x.abs());
        let h = EPS.powf(0.2) * t.max(0.1);
        return checked_difference(|h| stencil1(g, t, h), h, "dimension-3 ascent stencil");
    }

    let s0 = t * t;
    let fs = |s: f64| s.powf(half as f64 - 0.5) * fd.value(s.sqrt());
    let reach = if half == 2 { 2.0 } else { 3.0 };
    let h = EPS.powf(1.0 / (half as f64 + 4.0)) * s0.max(0.1);
    if s0 - 2.0 * reach * h <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "t = {t} too close to zero for the dimension-{d} difference stencil"
        )));
    }
    let fact: f64 = (1..half).map(|i| i as f64).product();
    let scale = 2.0 * t / fact;
    if half == 2 {
        checked_difference(
            |h| scale * stencil2(&fs, s0, h),
            h,
            "dimension-5 ascent stencil",
        )
    } else {
        checked_difference(
            |h| scale * stencil3(&fs, s0, h),
            h,
            "dimension-7 ascent stencil",
        )
    }
}

// ---------------------------------------------------------------------------
// Bessel kernel
// ---------------------------------------------------------------------------

/// `j_lambda(t) = int_0^1 (1-u^2)^(lambda-1/2) cos(ut) du`, the radial
/// transform kernel. `lambda = -1/2` is the boundary convention `cos t`;
/// below it the integral does not exist.
pub fn bessel_j(lambda: f64, t: f64, opts: &QuadOpts) -> Result<f64> {
    if lambda == -0.5 {
        return Ok(t.cos());
    }
    if !(lambda > -0.5) {
        return Err(Error::InvalidParameter(format!(
            "kernel order must be > -1/2, got {lambda}"
        )));
    }
    let e = lambda - 0.5;
    if e >= 0.0 {
        let out = quadrature::integrate(
            |u| (1.0 - u * u).powf(e),
            Range::Finite(0.0, 1.0),
            Oscillation::Cos(t),
            &[],
            opts,
        )?;
        return out.strict("kernel integral");
    }
    // Integrable endpoint singularity at u = 1: substitute 1-u = v^q with
    // q = 1/(lambda+1/2), which flattens the weight to v^0.
    let q = 1.0 / (lambda + 0.5);
    let smooth = quadrature::integrate(
        |u| (1.0 - u * u).powf(e),
        Range::Finite(0.0, 0.5),
        Oscillation::Cos(t),
        &[],
        opts,
    )?;
    let v1 = 0.5f64.powf(1.0 / q);
    let endpoint = quadrature::integrate(
        |v| {
            let u = 1.0 - v.powf(q);
            q * (1.0 + u).powf(e) * (u * t).cos()
        },
        Range::Finite(0.0, v1),
        Oscillation::None,
        &[],
        opts,
    )?;
    Ok(smooth.strict("kernel integral")? + endpoint.strict("kernel endpoint integral")?)
}

/// `j_lambda(0)`, in closed form.
fn bessel_j_at_zero(lambda: f64) -> f64 {
    if lambda == -0.5 {
        return 1.0;
    }
    0.5 * std::f64::consts::PI.sqrt() * special::gamma(lambda + 0.5) / special::gamma(lambda + 1.0)
}

/// Kernel normalized to 1 at the origin.
pub fn bessel_j_normalized(lambda: f64, t: f64, opts: &QuadOpts) -> Result<f64> {
    Ok(bessel_j(lambda, t, opts)? / bessel_j_at_zero(lambda))
}

// ---------------------------------------------------------------------------
// Support moments
// ---------------------------------------------------------------------------

/// The even moments `int_0^1 t^(2k) f1(t) dt` for `0 <= k <= (d-3)/2`.
/// All of them vanishing is equivalent to the descent to dimension `d`
/// being supported in the unit ball, so they measure how much mass leaks
/// past the support edge.
pub fn support_moment_conditions(f1: &Profile, d: u32, opts: &QuadOpts) -> Result<Vec<f64>> {
    let half = odd_half(d, "support moments")?;
    match f1.support_radius() {
        Some(r) if r <= 1.0 + 1e-9 => {}
        other => {
            return Err(Error::InvalidParameter(format!(
                "support moments need support inside [0, 1], got radius {other:?}"
            )))
        }
    }
    (0..half)
        .map(|k| {
            let out = quadrature::integrate(
                |t| t.powi(2 * k as i32) * f1.value(t),
                Range::Finite(0.0, 1.0),
                Oscillation::None,
                &f1.breakpoints(),
                opts,
            )?;
            out.strict("support moment")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::SampledCurve;
    use approx::assert_abs_diff_eq;
    use rayon::prelude::*;

    fn opts() -> QuadOpts {
        QuadOpts::default()
    }

    fn half_circle_profile() -> SplinePoly {
        // (1 - t^2) / 2 as a plain polynomial on [0, 1].
        SplinePoly::new(
            BigRational::zero(),
            vec![rat_i64(1, 2), rat_i64(0, 1), rat_i64(-1, 2)],
        )
        .unwrap()
    }

    #[test]
    fn descent_to_d3_has_the_antiderivative_form() {
        let f1 = Profile::Spline(half_circle_profile());
        for &t in &[0.2, 0.5, 0.9, 1.0] {
            let got = descend(&f1, 3, t, &opts()).unwrap();
            assert_abs_diff_eq!(got, 0.5 - t * t / 6.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn descent_at_origin_is_a_beta_constant() {
        let p = Profile::exponential(1.0).unwrap();
        for &(d, c) in &[
            (2u32, std::f64::consts::FRAC_PI_2),
            (3, 1.0),
            (5, 2.0 / 3.0),
        ] {
            let got = descend(&p, d, 0.0, &opts()).unwrap();
            assert_abs_diff_eq!(got, c, epsilon = 1e-10);
        }
    }

    #[test]
    fn descent_of_zero_vanishes() {
        let z = Profile::Spline(SplinePoly::from_ints(0, &[0]));
        for &t in &[0.0, 0.7, 3.0] {
            assert_eq!(descend(&z, 4, t, &opts()).unwrap(), 0.0);
        }
    }

    #[test]
    fn exact_descent_matches_the_closed_form() {
        let f3 = descend_exact_poly(&half_circle_profile(), 3).unwrap();
        let want = SplinePoly::new(
            BigRational::zero(),
            vec![rat_i64(1, 2), rat_i64(0, 1), rat_i64(-1, 6)],
        )
        .unwrap();
        assert_eq!(f3.coeffs, want.coeffs);
    }

    #[test]
    fn exact_walk_round_trips_exactly() {
        let q = SplinePoly::from_ints(0, &[3, -1, 2, 5]);
        for d in [3u32, 5, 7] {
            let down = descend_exact_poly(&q, d).unwrap();
            let back = ascend_exact_poly(&down, d).unwrap();
            assert_eq!(back.coeffs, q.coeffs, "dimension {d}");
        }
    }

    #[test]
    fn exact_descent_matches_quadrature() {
        let q = SplinePoly::from_ints(0, &[3, -1, 2, 5]);
        let down = descend_exact_poly(&q, 5).unwrap();
        let p = Profile::Spline(q);
        for &t in &[0.3, 0.7, 1.0] {
            let via_quad = descend(&p, 5, t, &opts()).unwrap();
            assert_abs_diff_eq!(down.value(t), via_quad, epsilon = 1e-9);
        }
    }

    #[test]
    fn numeric_ascent_round_trips_through_a_table() {
        let f1 = Profile::Spline(half_circle_profile());
        let n = 800usize;
        let t_max = 1.6;
        let grid: Vec<f64> = (0..=n).map(|i| t_max * i as f64 / n as f64).collect();
        let vals: Vec<f64> = grid
            .par_iter()
            .map(|&t| descend(&f1, 3, t, &opts()).unwrap())
            .collect();
        let f3 = Profile::Tabulated(SampledCurve::new(grid, vals, 3).unwrap());
        for &t in &[0.1, 0.3, 0.5, 0.7, 0.9] {
            let got = ascend_odd(&f3, 3, t).unwrap();
            assert_abs_diff_eq!(got, (1.0 - t * t) / 2.0, epsilon = 1e-6);
        }
    }

    #[test]
    fn exact_and_numeric_ascent_agree_on_smooth_profiles() {
        // Dimension 3: compare the spline fast path against the stencil
        // on the same function presented as a table.
        let f3_poly = descend_exact_poly(&half_circle_profile(), 3).unwrap();
        let f3_spline = Profile::Spline(f3_poly.clone());
        let n = 3000usize;
        let grid: Vec<f64> = (0..=n).map(|i| 1.2 * i as f64 / n as f64).collect();
        let vals: Vec<f64> = grid.iter().map(|&t| f3_poly.value(t)).collect();
        let f3_table = Profile::Tabulated(SampledCurve::new(grid, vals, 3).unwrap());
        for &t in &[0.2, 0.5, 0.8] {
            let exact = ascend_odd(&f3_spline, 3, t).unwrap();
            let numeric = ascend_odd(&f3_table, 3, t).unwrap();
            assert_abs_diff_eq!(exact, (1.0 - t * t) / 2.0, epsilon = 1e-12);
            assert_abs_diff_eq!(exact, numeric, epsilon = 1e-7);
        }

        // Dimensions 5 and 7: the stencil path runs on the spline profile
        // directly (bypassing the fast path) via a tabulated copy.
        for d in [5u32, 7] {
            let q = SplinePoly::from_ints(0, &[1, 2, -3]);
            let down = descend_exact_poly(&q, d).unwrap();
            let back = ascend_exact_poly(&down, d).unwrap();
            let n = 4000usize;
            let grid: Vec<f64> = (0..=n).map(|i| 1.4 * i as f64 / n as f64).collect();
            let vals: Vec<f64> = grid.iter().map(|&t| down.value(t)).collect();
            let table = Profile::Tabulated(SampledCurve::new(grid, vals, 3).unwrap());
            for &t in &[0.6, 0.8] {
                let numeric = ascend_odd(&table, d, t).unwrap();
                assert_abs_diff_eq!(numeric, back.value(t), epsilon = 1e-6);
            }
        }
    }

    #[test]
    fn ascent_vanishes_where_the_descent_vanishes() {
        // Zero mean kills the descent beyond the support edge, and the
        // ascent formula is local, so it must return zero out there.
        let f1 = Profile::Spline(SplinePoly::new(
            BigRational::zero(),
            vec![rat_i64(-1, 3), rat_i64(0, 1), rat_i64(1, 1)],
        )
        .unwrap());
        let n = 1000usize;
        let grid: Vec<f64> = (0..=n).map(|i| 2.0 * i as f64 / n as f64).collect();
        let vals: Vec<f64> = grid
            .par_iter()
            .map(|&t| descend(&f1, 3, t, &opts()).unwrap())
            .collect();
        let f3 = Profile::Tabulated(SampledCurve::new(grid, vals, 3).unwrap());
        let got = ascend_odd(&f3, 3, 1.5).unwrap();
        assert_abs_diff_eq!(got, 0.0, epsilon = 1e-8);
    }

    #[test]
    fn moment_conditions_control_the_descent_tail() {
        let balanced = Profile::Spline(SplinePoly::new(
            BigRational::zero(),
            vec![rat_i64(-1, 3), rat_i64(0, 1), rat_i64(1, 1)],
        )
        .unwrap());
        let ms = support_moment_conditions(&balanced, 3, &opts()).unwrap();
        assert_eq!(ms.len(), 1);
        assert_abs_diff_eq!(ms[0], 0.0, epsilon = 1e-12);
        for &t in &[1.1, 2.0, 5.0] {
            let v = descend(&balanced, 3, t, &opts()).unwrap();
            assert_abs_diff_eq!(v, 0.0, epsilon = 1e-12);
        }

        // In dimension 5 the same profile has a nonzero second moment, so
        // the descent leaks past the edge.
        let ms5 = support_moment_conditions(&balanced, 5, &opts()).unwrap();
        assert_eq!(ms5.len(), 2);
        assert!(ms5[1].abs() > 1e-3);

        // A nonnegative profile: the tail is m0 / t exactly in d = 3.
        let pos = Profile::Spline(half_circle_profile());
        let m0 = support_moment_conditions(&pos, 3, &opts()).unwrap()[0];
        assert_abs_diff_eq!(m0, 1.0 / 3.0, epsilon = 1e-12);
        for &t in &[2.0, 5.0, 10.0] {
            let v = descend(&pos, 3, t, &opts()).unwrap();
            assert_abs_diff_eq!(v * t, m0, epsilon = 1e-10);
        }
    }

    #[test]
    fn kernel_matches_sinc_at_half() {
        let o = QuadOpts {
            abs_tol: 1e-13,
            rel_tol: 1e-12,
            ..QuadOpts::default()
        };
        for &t in &[0.5, 2.0, 10.0, 31.0] {
            let got = bessel_j(0.5, t, &o).unwrap();
            assert_abs_diff_eq!(got, t.sin() / t, epsilon = 1e-11);
        }
        assert_abs_diff_eq!(bessel_j(0.5, 0.0, &o).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn kernel_closed_forms_at_zero() {
        for &(lambda, want) in &[
            (0.0, std::f64::consts::FRAC_PI_2),
            (1.0, std::f64::consts::FRAC_PI_4),
            (0.25, bessel_j_at_zero(0.25)),
        ] {
            let got = bessel_j(lambda, 0.0, &opts()).unwrap();
            assert_abs_diff_eq!(got, want, epsilon = 1e-9);
        }
        assert_abs_diff_eq!(
            bessel_j_normalized(0.25, 0.0, &opts()).unwrap(),
            1.0,
            epsilon = 1e-9
        );
    }

    #[test]
    fn kernel_boundary_and_domain() {
        assert_eq!(bessel_j(-0.5, 2.0, &opts()).unwrap(), 2.0f64.cos());
        assert!(bessel_j(-0.6, 1.0, &opts()).is_err());
    }

    #[test]
    fn kernel_zeros_sit_at_multiples_of_pi() {
        let o = QuadOpts {
            abs_tol: 1e-14,
            rel_tol: 1e-13,
            ..QuadOpts::default()
        };
        for k in 1..=3u32 {
            let target = k as f64 * std::f64::consts::PI;
            let mut lo = target - 0.5;
            let mut hi = target + 0.5;
            let f = |t: f64| bessel_j(0.5, t, &o).unwrap();
            assert!(f(lo) * f(hi) < 0.0);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if f(lo) * f(mid) <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            let root = 0.5 * (lo + hi);
            assert_abs_diff_eq!(root, target, epsilon = 1e-10);
        }
    }

    #[test]
    fn descent_transports_positive_definiteness_to_d3() {
        // Companion of the exponential profile has a nonnegative cosine
        // transform; its dimension-3 descent must have a nonnegative
        // sine-moment transform. The conditionally convergent tail of
        // t*f3(t) -> m_inf is summed in closed form; the leftover beyond
        // t_max is below (3 + t_max) exp(-t_max).
        let comp = Profile::exponential(1.0).unwrap().companion();
        let t_max = 40.0;
        let n = 2000usize;
        let grid: Vec<f64> = (0..=n).map(|i| t_max * i as f64 / n as f64).collect();
        let vals: Vec<f64> = grid
            .par_iter()
            .map(|&t| descend_fn(|u| comp.value(u), 3, t, &[], &opts()).unwrap())
            .collect();
        let f3 = SampledCurve::new(grid, vals, 3).unwrap();
        let m_inf = quadrature::integrate(
            |u| comp.value(u),
            Range::SemiInfinite(0.0),
            Oscillation::None,
            &[],
            &opts(),
        )
        .unwrap()
        .strict("companion mass")
        .unwrap();
        assert_abs_diff_eq!(m_inf, 2.0, epsilon = 1e-9);

        for &s in &[0.25f64, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 6.0] {
            let head = quadrature::integrate(
                |t| f3.value(t) * t,
                Range::Finite(0.0, t_max),
                Oscillation::Sin(s),
                &[],
                &opts(),
            )
            .unwrap()
            .strict("sine moment")
            .unwrap();
            let got = head + m_inf * (s * t_max).cos() / s;
            // Laplace sine moments of (2+t)e^{-t} give the closed form.
            let want = 2.0 / (s * (1.0 + s * s) * (1.0 + s * s));
            assert!(got > -1e-6, "negative transform {got} at s={s}");
            assert_abs_diff_eq!(got, want, epsilon = 1e-4);
        }
    }

    #[test]
    fn dimension_arguments_are_validated() {
        let p = Profile::power(1.0).unwrap();
        assert!(descend(&p, 1, 0.5, &opts()).is_err());
        assert!(ascend_odd(&p, 4, 0.5).is_err());
        assert!(ascend_odd(&p, 9, 0.5).is_err());
        assert!(ascend_odd(&p, 3, 0.0).is_err());
        assert!(support_moment_conditions(&Profile::exponential(1.0).unwrap(), 3, &opts()).is_err());
        assert!(support_moment_conditions(&p, 4, &opts()).is_err());
    }
}
