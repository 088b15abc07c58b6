//! Fourier machinery for max-norm radial functions.
//!
//! The plane transform of `f(x) = f0(max(|x1|, |x2|))` reduces to the 1D
//! sine transform of the profile:
//!
//! ```text
//! fhat(y1, y2) = 2 [ (1/y1 + 1/y2) f0hat(y1+y2) - (1/y1 - 1/y2) f0hat(y2-y1) ]
//! ```
//!
//! with the continuous extensions `fhat(0, y2) = (2/y2) g'(y2)` on the
//! axes and `fhat(0, 0) = 8 int t f0(t) dt` at the origin, where
//! `g(t) = t f0hat(t)`. Everything here is cross-checked against a
//! brute-force two-dimensional panel oracle that knows nothing about the
//! reduction.

use num::complex::Complex64;
use rayon::prelude::*;

use crate::profile::{Profile, SampledCurve};
use crate::quadrature::{self, Integral, Oscillation, QuadOpts, Range};
use crate::report::{linear_fit, LinearFit};
use crate::special;
use crate::{Error, Result};

/// Frequencies below this go through the continuous axis extension
/// instead of the 0/0 reduction formula.
pub const AXIS_EPS: f64 = 1e-6;

// ---------------------------------------------------------------------------
// 1D transforms
// ---------------------------------------------------------------------------

/// Sine transform `int_0^inf f0(u) sin(ut) du`, extended to all real `t`
/// as an odd function.
pub fn sine_transform(p: &Profile, t: f64, opts: &QuadOpts) -> Result<Integral> {
    let sign = if t < 0.0 { -1.0 } else { 1.0 };
    let t = t.abs();
    let range = match p.support_radius() {
        Some(r) => Range::Finite(0.0, r),
        None => Range::SemiInfinite(0.0),
    };
    let mut out = quadrature::integrate(
        |u| p.value(u),
        range,
        Oscillation::Sin(t),
        &p.breakpoints(),
        opts,
    )?;
    out.value *= sign;
    Ok(out)
}

/// `g(t) = t * f0hat(t)`; monotone `g` is the positivity criterion.
pub fn g_value(p: &Profile, t: f64, opts: &QuadOpts) -> Result<Integral> {
    let mut s = sine_transform(p, t, opts)?;
    s.value *= t;
    s.err *= t.abs();
    Ok(s)
}

/// Both computations of `g'(t)` together with their discrepancy. Path (a)
/// integrates the profile derivative against a sine, path (b) integrates
/// the companion profile against a cosine; their agreement is a pointwise
/// identity, so a large discrepancy flags a hypothesis violation
/// (non-integrable `t f0'` or a tail that does not vanish).
#[derive(Clone, Copy, Debug)]
pub struct GDerivative {
    pub via_profile_derivative: f64,
    pub via_companion: f64,
    pub discrepancy: f64,
}

impl GDerivative {
    pub fn value(&self) -> f64 {
        self.via_profile_derivative
    }
}

pub fn g_derivative(p: &Profile, t: f64, opts: &QuadOpts) -> Result<GDerivative> {
    let range = match p.support_radius() {
        Some(r) => Range::Finite(0.0, r),
        None => Range::SemiInfinite(0.0),
    };
    let cuts = p.breakpoints();
    // (a)  g'(t) = - int u f0'(u) sin(ut) du
    let a = quadrature::integrate(
        |u| -u * p.derivative(u),
        range,
        Oscillation::Sin(t),
        &cuts,
        opts,
    )?;
    // (b)  g'(t) = t * int f1(u) cos(ut) du
    let f1 = p.companion();
    let b = quadrature::integrate(
        |u| f1.value(u),
        range,
        Oscillation::Cos(t),
        &cuts,
        opts,
    )?;
    let bv = t * b.value;
    Ok(GDerivative {
        via_profile_derivative: a.value,
        via_companion: bv,
        discrepancy: (a.value - bv).abs(),
    })
}

// ---------------------------------------------------------------------------
// Cached g-curve for dense scans
// ---------------------------------------------------------------------------

/// `g(t) = t f0hat(t)` tabulated on a uniform grid with a cubic
/// interpolant, for scans that need millions of plane-transform values.
/// `g(0) = 0` is pinned exactly.
pub struct GFunction {
    profile: Profile,
    curve: SampledCurve,
    t_max: f64,
}

impl GFunction {
    /// Step choice: a compact support of radius R makes `f0hat` oscillate
    /// with period `2 pi / R`, which the grid must resolve; exponential
    /// profiles vary on the scale `1/lambda` instead.
    pub fn build(p: &Profile, t_max: f64) -> Result<GFunction> {
        if !(t_max > 0.0) || !t_max.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "g-curve domain must be positive and finite, got {t_max}"
            )));
        }
        let step = match p {
            Profile::Exponential { lambda } => 0.05 / lambda,
            _ => {
                let r = p.support_radius().expect("non-exponential families are compact");
                (2.0 * std::f64::consts::PI / (32.0 * r)).min(0.05)
            }
        };
        let n = (t_max / step).ceil() as usize + 1;
        if n > 400_000 {
            return Err(Error::InvalidParameter(format!(
                "g-curve would need {n} nodes; shrink the domain"
            )));
        }
        let opts = QuadOpts::default();
        let values: Vec<f64> = (0..=n)
            .into_par_iter()
            .map(|i| {
                if i == 0 {
                    return Ok(0.0);
                }
                let t = i as f64 * step;
                g_value(p, t, &opts).map(|g| g.value)
            })
            .collect::<Result<_>>()?;
        let grid: Vec<f64> = (0..=n).map(|i| i as f64 * step).collect();
        let t_max = *grid.last().unwrap();
        Ok(GFunction {
            profile: p.clone(),
            curve: SampledCurve::new(grid, values, 3)?,
            t_max,
        })
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn value(&self, t: f64) -> f64 {
        debug_assert!((-self.t_max..=self.t_max).contains(&t), "t={t} outside the cache");
        // Odd extension matches the sine transform's parity.
        if t < 0.0 {
            -self.curve.value(-t)
        } else {
            self.curve.value(t)
        }
    }

    pub fn derivative(&self, t: f64) -> f64 {
        debug_assert!((0.0..=self.t_max).contains(&t));
        self.curve.derivative(t)
    }

    /// Plane transform from the cache; arguments must keep `|y1| + |y2|`
    /// within the cached domain.
    pub fn fhat(&self, y1: f64, y2: f64) -> f64 {
        let a = y1.abs().min(y2.abs());
        let b = y1.abs().max(y2.abs());
        if b < AXIS_EPS {
            // Continuous limit at the origin; the first moment is cheap
            // relative to a cache build, so compute it on demand.
            return 8.0
                * self
                    .profile
                    .moment(1.0)
                    .map(|m| m.value)
                    .unwrap_or(f64::NAN);
        }
        if a < AXIS_EPS {
            return 2.0 / b * self.derivative(b);
        }
        2.0 / (a * b) * (self.value(a + b) - self.value(b - a))
    }
}

// ---------------------------------------------------------------------------
// The 2D reduction
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlaneMethod {
    /// Reduction through the 1D sine transform.
    ViaF0Hat,
    /// Product integral against the profile derivative, folded into two
    /// cosine quadratures.
    ViaDerivative,
}

/// `fhat(y1, y2)` by the reduction formula. Even in each coordinate and
/// symmetric under swapping, which the implementation uses to put the
/// arguments in canonical order first.
pub fn plane_transform(
    p: &Profile,
    y1: f64,
    y2: f64,
    method: PlaneMethod,
    opts: &QuadOpts,
) -> Result<f64> {
    if !y1.is_finite() || !y2.is_finite() {
        return Err(Error::InvalidParameter("plane frequencies must be finite".into()));
    }
    let a = y1.abs().min(y2.abs());
    let b = y1.abs().max(y2.abs());
    if b < AXIS_EPS {
        return Ok(8.0 * p.moment(1.0)?.value);
    }
    if a < AXIS_EPS {
        return Ok(2.0 / b * g_derivative(p, b, opts)?.value());
    }
    match method {
        PlaneMethod::ViaF0Hat => {
            let sum = sine_transform(p, a + b, opts)?.value;
            let diff = sine_transform(p, b - a, opts)?.value;
            Ok(2.0 * ((1.0 / a + 1.0 / b) * sum - (1.0 / a - 1.0 / b) * diff))
        }
        PlaneMethod::ViaDerivative => {
            // -4/(ab) int f0'(t) sin(ta) sin(tb) dt, with the product of
            // sines opened into cosines of the difference and the sum.
            let range = match p.support_radius() {
                Some(r) => Range::Finite(0.0, r),
                None => Range::SemiInfinite(0.0),
            };
            let cuts = p.breakpoints();
            let c_diff = quadrature::integrate(
                |t| p.derivative(t),
                range,
                Oscillation::Cos(b - a),
                &cuts,
                opts,
            )?;
            let c_sum = quadrature::integrate(
                |t| p.derivative(t),
                range,
                Oscillation::Cos(b + a),
                &cuts,
                opts,
            )?;
            Ok(-2.0 / (a * b) * (c_diff.value - c_sum.value))
        }
    }
}

// ---------------------------------------------------------------------------
// Brute-force oracle
// ---------------------------------------------------------------------------

const GAUSS7_NODES: [f64; 7] = [
    -0.949_107_912_342_758_5,
    -0.741_531_185_599_394_4,
    -0.405_845_151_377_397_2,
    0.0,
    0.405_845_151_377_397_2,
    0.741_531_185_599_394_4,
    0.949_107_912_342_758_5,
];
const GAUSS7_WEIGHTS: [f64; 7] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
    0.381_830_050_505_118_9,
    0.279_705_391_489_276_7,
    0.129_484_966_168_869_7,
];

/// Direct cubature of `4 int_0^W int_0^W f0(max(x1,x2)) cos(x1 y1)
/// cos(x2 y2) dx`, which is the full plane integral folded onto the first
/// quadrant by evenness. Knows nothing about the reduction formula.
///
/// The quadrant is cut into a common panel grid on both axes, so the crease
/// of `max` runs through panel diagonals only; diagonal panels are split
/// into two triangles that are each mapped smoothly onto the unit square.
/// The result refines the panel grid once and reports the difference as
/// the error estimate, plus the truncated tail mass for unbounded
/// supports.
pub fn plane_transform_oracle(
    p: &Profile,
    y1: f64,
    y2: f64,
    box_half_width: Option<f64>,
) -> Result<Integral> {
    let w = box_half_width.unwrap_or_else(|| p.effective_radius());
    if !(w > 0.0) || !w.is_finite() {
        return Err(Error::InvalidParameter(format!("oracle box width {w} invalid")));
    }
    if let Some(r) = p.support_radius() {
        if w < r {
            return Err(Error::InvalidParameter(format!(
                "oracle box half-width {w} is smaller than the support radius {r}"
            )));
        }
    }
    let coarse = oracle_pass(p, y1, y2, w, 1)?;
    let fine = oracle_pass(p, y1, y2, w, 2)?;
    let tail = match p {
        Profile::Exponential { lambda } => {
            // Mass of |f| outside the box: 8 int_W^inf t f0(t) dt.
            8.0 * (-lambda * w).exp() * (w / lambda + 1.0 / (lambda * lambda))
        }
        _ => 0.0,
    };
    Ok(Integral {
        value: fine,
        err: (fine - coarse).abs() + tail,
        converged: true,
        panels: 0,
    })
}

fn oracle_pass(p: &Profile, y1: f64, y2: f64, w: f64, refine: usize) -> Result<f64> {
    let freq = y1.abs().max(y2.abs());
    let base = ((w * freq / 1.5).ceil() as usize).max(16).min(4000);
    let n = base * refine;
    // Panel edges, with profile breakpoints snapped onto the grid so the
    // integrand stays smooth inside every panel.
    let mut edges: Vec<f64> = (0..=n).map(|i| w * i as f64 / n as f64).collect();
    for bp in p.breakpoints() {
        if bp > 0.0 && bp < w {
            let i = (bp / w * n as f64).round() as usize;
            if i > 0 && i < n {
                edges[i] = bp;
            }
        }
    }

    // Precompute Gauss nodes and 1D factors per panel.
    let nodes: Vec<[f64; 7]> = edges
        .windows(2)
        .map(|e| {
            let c = 0.5 * (e[0] + e[1]);
            let h = 0.5 * (e[1] - e[0]);
            let mut out = [0.0; 7];
            for (k, &u) in GAUSS7_NODES.iter().enumerate() {
                out[k] = c + h * u;
            }
            out
        })
        .collect();
    let halfw: Vec<f64> = edges.windows(2).map(|e| 0.5 * (e[1] - e[0])).collect();

    let cos1: Vec<[f64; 7]> = nodes
        .iter()
        .map(|xs| xs.map(|x| (x * y1).cos()))
        .collect();
    let cos2: Vec<[f64; 7]> = nodes
        .iter()
        .map(|xs| xs.map(|x| (x * y2).cos()))
        .collect();
    let fvals: Vec<[f64; 7]> = nodes.iter().map(|xs| xs.map(|x| p.value(x))).collect();

    // Off-diagonal panel pairs: max(x1, x2) is decided by the panel pair,
    // so the integrand factorizes into 1D pieces.
    // For i < j (x2 panel j dominates): sum_i [int cos(x1 y1)] * int_j f0 cos(x2 y2).
    let col_cos1: Vec<f64> = (0..nodes.len())
        .map(|i| {
            let mut s = 0.0;
            for k in 0..7 {
                s += GAUSS7_WEIGHTS[k] * cos1[i][k];
            }
            s * halfw[i]
        })
        .collect();
    let col_cos2: Vec<f64> = (0..nodes.len())
        .map(|i| {
            let mut s = 0.0;
            for k in 0..7 {
                s += GAUSS7_WEIGHTS[k] * cos2[i][k];
            }
            s * halfw[i]
        })
        .collect();
    let col_f_cos2: Vec<f64> = (0..nodes.len())
        .map(|j| {
            let mut s = 0.0;
            for k in 0..7 {
                s += GAUSS7_WEIGHTS[k] * fvals[j][k] * cos2[j][k];
            }
            s * halfw[j]
        })
        .collect();
    let col_f_cos1: Vec<f64> = (0..nodes.len())
        .map(|j| {
            let mut s = 0.0;
            for k in 0..7 {
                s += GAUSS7_WEIGHTS[k] * fvals[j][k] * cos1[j][k];
            }
            s * halfw[j]
        })
        .collect();

    let mut prefix1 = vec![0.0; nodes.len() + 1];
    let mut prefix2 = vec![0.0; nodes.len() + 1];
    for i in 0..nodes.len() {
        prefix1[i + 1] = prefix1[i] + col_cos1[i];
        prefix2[i + 1] = prefix2[i] + col_cos2[i];
    }

    let mut total = 0.0;
    for j in 0..nodes.len() {
        // x2 in panel j larger than all of panels 0..j on the x1 axis.
        total += prefix1[j] * col_f_cos2[j];
        // x1 in panel j larger than all of panels 0..j on the x2 axis.
        total += prefix2[j] * col_f_cos1[j];
    }

    // Diagonal panels, two triangles each. Lower: x2 = a + (x1 - a) v.
    for (j, e) in edges.windows(2).enumerate() {
        let (a, b) = (e[0], e[1]);
        let _ = j;
        let mut tri = 0.0;
        for k1 in 0..7 {
            let u = 0.5 * (GAUSS7_NODES[k1] + 1.0);
            let x1 = a + (b - a) * u;
            let jac = (b - a) * (b - a) * u * 0.25; // d(x1,x2)/d(u,v) with both Gauss maps
            for k2 in 0..7 {
                let v = 0.5 * (GAUSS7_NODES[k2] + 1.0);
                let x2 = a + (x1 - a) * v;
                let wgt = GAUSS7_WEIGHTS[k1] * GAUSS7_WEIGHTS[k2] * jac;
                // Lower triangle: max = x1.
                tri += wgt * p.value(x1) * (x1 * y1).cos() * (x2 * y2).cos();
                // Upper triangle by reflection: max = x2 coordinate.
                tri += wgt * p.value(x1) * (x1 * y2).cos() * (x2 * y1).cos();
            }
        }
        total += tri;
    }

    Ok(4.0 * total)
}

// ---------------------------------------------------------------------------
// L1 mass of the plane transform vs the variation of g
// ---------------------------------------------------------------------------

/// Numerical sides of the bound `||fhat||_1 <= C int |g'|`, with the plane
/// mass taken in the inversion-normalized scale `(2 pi)^-2 int |fhat|` so
/// that a transform of unit mass at the origin reports mass near 1.
#[derive(Clone, Debug, serde::Serialize)]
pub struct L1MassComparison {
    /// Total variation of g on [0, t_max], from the cached curve.
    pub variation: f64,
    /// `(2 pi)^-2` times the integral of |fhat| over the matched box.
    pub plane_mass: f64,
    pub ratio: f64,
    pub t_max: f64,
}

pub fn l1_mass_comparison(
    g: &GFunction,
    t_max: f64,
    grid_density: usize,
) -> Result<L1MassComparison> {
    if t_max > g.t_max() / 2.0 {
        return Err(Error::InvalidParameter(format!(
            "t_max {t_max} needs a cache reaching {}",
            2.0 * t_max
        )));
    }
    let variation = g_total_variation(g, t_max);
    // Midpoint rule over the first quadrant of [-T, T]^2, folded by
    // evenness; midpoints never land on the axes.
    let n = grid_density.max(16);
    let h = t_max / n as f64;
    let rows: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let yi = (i as f64 + 0.5) * h;
            let mut s = 0.0;
            for jj in 0..n {
                let yj = (jj as f64 + 0.5) * h;
                s += g.fhat(yi, yj).abs();
            }
            s
        })
        .collect();
    let quadrant: f64 = rows.iter().sum::<f64>() * h * h;
    let plane_mass = 4.0 * quadrant / (4.0 * std::f64::consts::PI * std::f64::consts::PI);
    Ok(L1MassComparison {
        variation,
        plane_mass,
        ratio: if variation > 0.0 {
            plane_mass / variation
        } else {
            0.0
        },
        t_max,
    })
}

/// Total variation of the cached g on [0, t_max]: the polyline variation
/// on the cache grid, which converges from below as the grid refines.
pub fn g_total_variation(g: &GFunction, t_max: f64) -> f64 {
    let grid = g_cache_grid(g, t_max);
    let mut var = 0.0;
    let mut prev = g.value(grid[0]);
    for &t in &grid[1..] {
        let v = g.value(t);
        var += (v - prev).abs();
        prev = v;
    }
    var
}

fn g_cache_grid(g: &GFunction, t_max: f64) -> Vec<f64> {
    let n = ((t_max / g.t_max()) * 2.0 * 200_000.0).min(200_000.0) as usize;
    let n = n.max(1000);
    (0..=n).map(|i| t_max * i as f64 / n as f64).collect()
}

/// Growth of the variation with the cutoff, fitted against ln T. A
/// logarithmically divergent variation shows a stable positive slope.
pub fn variation_growth(g: &GFunction, t_ladder: &[f64]) -> (Vec<f64>, LinearFit) {
    let vars: Vec<f64> = t_ladder.iter().map(|&t| g_total_variation(g, t)).collect();
    let lnt: Vec<f64> = t_ladder.iter().map(|&t| t.ln()).collect();
    let fit = linear_fit(&lnt, &vars);
    (vars, fit)
}

// ---------------------------------------------------------------------------
// Endpoint asymptotics of int_0^1 (1-t)^alpha e^{itx} dt
// ---------------------------------------------------------------------------

/// Asymptotic value for large `x`:
///
/// ```text
/// Gamma(alpha+1)/x^{1+alpha} e^{i(x - pi(alpha+1)/2)} + i/x + alpha/x^2 + O(|alpha|/x^3)
/// ```
///
/// valid directly for `alpha` in (-1, 0]; larger exponents are reduced by
/// integrating by parts, `I(alpha) = i/x - (alpha i / x) I(alpha-1)`,
/// until the exponent lands in the base window. `n_terms` keeps the first
/// 1 to 3 displayed terms.
pub fn endpoint_asymptotic(alpha: f64, x: f64, n_terms: usize) -> Result<Complex64> {
    if !(alpha > -1.0) {
        return Err(Error::InvalidParameter(format!(
            "endpoint exponent must exceed -1, got {alpha}"
        )));
    }
    if !(x > 0.0) {
        return Err(Error::InvalidParameter(format!("x must be positive, got {x}")));
    }
    if !(1..=3).contains(&n_terms) {
        return Err(Error::InvalidParameter(format!(
            "n_terms must be 1..=3, got {n_terms}"
        )));
    }
    // Peel the exponent down to (-1, 0].
    let mut stack = Vec::new();
    let mut a = alpha;
    while a > 0.0 {
        stack.push(a);
        a -= 1.0;
    }
    let mut value = base_asymptotic(a, x, n_terms);
    let i_over_x = Complex64::new(0.0, 1.0 / x);
    while let Some(a) = stack.pop() {
        value = i_over_x - i_over_x * a * value;
    }
    Ok(value)
}

fn base_asymptotic(alpha: f64, x: f64, n_terms: usize) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    if n_terms >= 1 {
        let phase = x - std::f64::consts::PI * (alpha + 1.0) / 2.0;
        let amp = special::gamma(alpha + 1.0) / x.powf(1.0 + alpha);
        acc += Complex64::from_polar(amp, phase);
    }
    if n_terms >= 2 {
        acc += Complex64::new(0.0, 1.0 / x);
    }
    if n_terms >= 3 {
        acc += Complex64::new(alpha / (x * x), 0.0);
    }
    acc
}

/// Quadrature reference for the same integral, written as
/// `e^{ix} int_0^1 w^alpha e^{-ixw} dw`. Negative exponents are first
/// smoothed by `u = w^{alpha+1}`, which turns the integrand into
/// `e^{-ix u^{1/(alpha+1)}} / (alpha+1)` with a bounded phase derivative.
pub fn endpoint_reference(alpha: f64, x: f64, opts: &QuadOpts) -> Result<Complex64> {
    if !(alpha > -1.0) {
        return Err(Error::InvalidParameter(format!(
            "endpoint exponent must exceed -1, got {alpha}"
        )));
    }
    let (re, im) = if alpha < 0.0 {
        let q = 1.0 / (alpha + 1.0);
        let re = quadrature::integrate(
            |u| (x * u.powf(q)).cos() * (alpha + 1.0).recip(),
            Range::Finite(0.0, 1.0),
            Oscillation::None,
            &[],
            opts,
        )?;
        let im = quadrature::integrate(
            |u| -(x * u.powf(q)).sin() * (alpha + 1.0).recip(),
            Range::Finite(0.0, 1.0),
            Oscillation::None,
            &[],
            opts,
        )?;
        (re.strict("endpoint reference")?, im.strict("endpoint reference")?)
    } else {
        let re = quadrature::integrate(
            |w| w.powf(alpha),
            Range::Finite(0.0, 1.0),
            Oscillation::Cos(x),
            &[],
            opts,
        )?;
        let im = quadrature::integrate(
            |w| -w.powf(alpha),
            Range::Finite(0.0, 1.0),
            Oscillation::Sin(x),
            &[],
            opts,
        )?;
        (re.strict("endpoint reference")?, im.strict("endpoint reference")?)
    };
    Ok(Complex64::from_polar(1.0, x) * Complex64::new(re, im))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn opts() -> QuadOpts {
        QuadOpts::default()
    }

    #[test]
    fn sine_transform_of_the_unit_exponential() {
        // int_0^inf e^{-u} sin(ut) du = t / (1 + t^2).
        let p = Profile::exponential(1.0).unwrap();
        for &t in &[0.5, 2.0, 10.0] {
            let s = sine_transform(&p, t, &opts()).unwrap();
            assert_abs_diff_eq!(s.value, t / (1.0 + t * t), epsilon = 1e-9);
        }
        assert_abs_diff_eq!(
            sine_transform(&p, 2.0, &opts()).unwrap().value,
            0.4,
            epsilon = 1e-9
        );
    }

    #[test]
    fn sine_transform_is_odd_and_vanishes_at_zero() {
        let p = Profile::power(1.0).unwrap();
        let plus = sine_transform(&p, 3.0, &opts()).unwrap().value;
        let minus = sine_transform(&p, -3.0, &opts()).unwrap().value;
        assert_abs_diff_eq!(plus, -minus, epsilon = 1e-14);
        assert_eq!(sine_transform(&p, 0.0, &opts()).unwrap().value, 0.0);
    }

    #[test]
    fn sine_transform_of_the_unit_power_profile() {
        // (t - sin t)/t^2, which at t = pi is 1/pi.
        let p = Profile::power(1.0).unwrap();
        let pi = std::f64::consts::PI;
        let s = sine_transform(&p, pi, &opts()).unwrap();
        assert_abs_diff_eq!(s.value, 1.0 / pi, epsilon = 1e-10);
        let t = 2.5;
        let s = sine_transform(&p, t, &opts()).unwrap();
        assert_abs_diff_eq!(s.value, (t - t.sin()) / (t * t), epsilon = 1e-10);
    }

    #[test]
    fn plane_transform_at_the_origin_is_the_moment() {
        let exp = Profile::exponential(1.0).unwrap();
        let v = plane_transform(&exp, 0.0, 0.0, PlaneMethod::ViaF0Hat, &opts()).unwrap();
        assert_relative_eq!(v, 8.0, max_relative = 1e-10);
        let pp = Profile::power(1.0).unwrap();
        let v = plane_transform(&pp, 0.0, 0.0, PlaneMethod::ViaF0Hat, &opts()).unwrap();
        assert_relative_eq!(v, 4.0 / 3.0, max_relative = 1e-10);
    }

    #[test]
    fn plane_transform_axis_extension() {
        // fhat(0, y2) = (2/y2) g'(y2); for the unit exponential
        // g'(t) = 2t/(1+t^2)^2.
        let p = Profile::exponential(1.0).unwrap();
        let y2 = 1.5;
        let v = plane_transform(&p, 0.0, y2, PlaneMethod::ViaF0Hat, &opts()).unwrap();
        let expect = 2.0 / y2 * 2.0 * y2 / (1.0 + y2 * y2).powi(2);
        assert_abs_diff_eq!(v, expect, epsilon = 1e-8);
    }

    #[test]
    fn plane_transform_even_and_symmetric() {
        let p = Profile::power(2.0).unwrap();
        let base = plane_transform(&p, 1.3, 2.6, PlaneMethod::ViaF0Hat, &opts()).unwrap();
        for &(a, b) in &[(2.6, 1.3), (-1.3, 2.6), (1.3, -2.6), (-2.6, -1.3)] {
            let v = plane_transform(&p, a, b, PlaneMethod::ViaF0Hat, &opts()).unwrap();
            assert_abs_diff_eq!(v, base, epsilon = 1e-12);
        }
    }

    #[test]
    fn reduction_methods_agree_with_each_other() {
        // Exponential at (1, 2): the two reduction routes to 1e-7.
        let p = Profile::exponential(1.0).unwrap();
        let a = plane_transform(&p, 1.0, 2.0, PlaneMethod::ViaF0Hat, &opts()).unwrap();
        let b = plane_transform(&p, 1.0, 2.0, PlaneMethod::ViaDerivative, &opts()).unwrap();
        assert_abs_diff_eq!(a, b, epsilon = 1e-7);
    }

    #[test]
    fn reduction_agrees_with_the_brute_force_oracle() {
        let p = Profile::exponential(1.0).unwrap();
        let a = plane_transform(&p, 1.0, 2.0, PlaneMethod::ViaF0Hat, &opts()).unwrap();
        let o = plane_transform_oracle(&p, 1.0, 2.0, None).unwrap();
        assert_abs_diff_eq!(a, o.value, epsilon = 1e-5);

        let p = Profile::power(2.0).unwrap();
        for &(y1, y2) in &[(0.7, 1.9), (3.0, 5.5)] {
            let a = plane_transform(&p, y1, y2, PlaneMethod::ViaF0Hat, &opts()).unwrap();
            let o = plane_transform_oracle(&p, y1, y2, None).unwrap();
            assert_abs_diff_eq!(a, o.value, epsilon = 1e-6);
        }
    }

    #[test]
    fn oracle_exact_at_the_origin_for_compact_support() {
        // With y = 0 and W = 1 the oracle integrates 4 f0(max) over the
        // unit square, which equals 8 * first moment = 4/3 for (1-t)+.
        let p = Profile::power(1.0).unwrap();
        let o = plane_transform_oracle(&p, 0.0, 0.0, Some(1.0)).unwrap();
        assert_relative_eq!(o.value, 4.0 / 3.0, max_relative = 1e-9);
    }

    #[test]
    fn norm_identity_against_the_moment() {
        // Mass identity: the plane integral of |f| equals 8 int t |f0|.
        let p = Profile::power(2.0).unwrap();
        let o = plane_transform_oracle(&p, 0.0, 0.0, None).unwrap();
        let m = p.moment_abs(1.0).unwrap();
        assert_relative_eq!(o.value, 8.0 * m.value, max_relative = 1e-9);
    }

    #[test]
    fn g_derivative_two_paths() {
        // Exponential: g'(t) = 2t/(1+t^2)^2, so g'(1) = 0.5.
        let p = Profile::exponential(1.0).unwrap();
        let d = g_derivative(&p, 1.0, &opts()).unwrap();
        assert_abs_diff_eq!(d.via_profile_derivative, 0.5, epsilon = 1e-8);
        assert_abs_diff_eq!(d.via_companion, 0.5, epsilon = 1e-8);
        assert!(d.discrepancy < 1e-7);

        let p = Profile::power(3.0).unwrap();
        for &t in &[0.5, 2.0, 5.0] {
            let d = g_derivative(&p, t, &opts()).unwrap();
            assert!(d.discrepancy < 1e-7, "t={t} disc={}", d.discrepancy);
        }
    }

    #[test]
    fn g_derivative_vanishes_at_zero() {
        let p = Profile::exponential(1.0).unwrap();
        let d = g_derivative(&p, 1e-5, &opts()).unwrap();
        assert!(d.value().abs() < 1e-4);
        let d = g_derivative(&p, 0.0, &opts()).unwrap();
        assert_eq!(d.via_companion, 0.0);
        assert_abs_diff_eq!(d.via_profile_derivative, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn cached_g_matches_direct_evaluation() {
        let p = Profile::exponential(1.0).unwrap();
        let g = GFunction::build(&p, 20.0).unwrap();
        for &t in &[0.3, 1.7, 8.1, 19.5] {
            let direct = t * t / (1.0 + t * t);
            assert_abs_diff_eq!(g.value(t), direct, epsilon = 1e-6);
        }
        // fhat through the cache vs the quadrature reduction.
        let via_cache = g.fhat(1.0, 2.0);
        let direct = plane_transform(&p, 1.0, 2.0, PlaneMethod::ViaF0Hat, &opts()).unwrap();
        assert_abs_diff_eq!(via_cache, direct, epsilon = 1e-6);
    }

    #[test]
    fn l1_masses_exponential_bounded_power_growing() {
        // Exponential: variation tends to 1 and the normalized plane mass
        // stays within a small constant multiple of it.
        let p = Profile::exponential(1.0).unwrap();
        let g = GFunction::build(&p, 60.0).unwrap();
        let cmp = l1_mass_comparison(&g, 30.0, 200).unwrap();
        assert!(cmp.variation > 0.9 && cmp.variation < 1.01, "var={}", cmp.variation);
        assert!(
            cmp.plane_mass <= 30.0 * cmp.variation,
            "mass={} var={}",
            cmp.plane_mass,
            cmp.variation
        );

        // Unit power profile: variation grows like a positive multiple of
        // ln T.
        let p = Profile::power(1.0).unwrap();
        let g = GFunction::build(&p, 420.0).unwrap();
        let ladder = [50.0, 100.0, 200.0, 400.0];
        let (vars, fit) = variation_growth(&g, &ladder);
        assert!(vars.windows(2).all(|w| w[1] > w[0]));
        assert!(fit.slope > 0.3, "slope={}", fit.slope);
        assert!(fit.r_squared > 0.95, "r2={}", fit.r_squared);
    }

    #[test]
    fn endpoint_asymptotic_alpha_zero_is_exact() {
        // alpha = 0: the integral is (e^{ix} - 1)/(ix) = i(1 - e^{ix})/x.
        for &x in &[10.0, 50.0, 200.0] {
            let asym = endpoint_asymptotic(0.0, x, 3).unwrap();
            let exact = Complex64::new(0.0, 1.0) * (1.0 - Complex64::from_polar(1.0, x)) / x;
            assert!((asym - exact).norm() < 1e-13, "x={x}");
        }
    }

    #[test]
    fn endpoint_asymptotic_vs_quadrature() {
        // Negative exponent at large x.
        let a = -0.5;
        let x = 100.0;
        let asym = endpoint_asymptotic(a, x, 3).unwrap();
        let reference = endpoint_reference(a, x, &opts()).unwrap();
        assert!(
            (asym - reference).norm() <= 5.0 * a.abs() / (x * x * x),
            "diff={}",
            (asym - reference).norm()
        );
        // Positive exponent through the recursion.
        let a = 2.5;
        let x = 50.0;
        let asym = endpoint_asymptotic(a, x, 3).unwrap();
        let reference = endpoint_reference(a, x, &opts()).unwrap();
        assert!(
            (asym - reference).norm() / reference.norm() <= 1e-4,
            "rel={}",
            (asym - reference).norm() / reference.norm()
        );
    }

    #[test]
    fn endpoint_reference_matches_closed_form_at_alpha_zero() {
        let x = 7.0;
        let reference = endpoint_reference(0.0, x, &opts()).unwrap();
        let exact = Complex64::new(0.0, 1.0) * (1.0 - Complex64::from_polar(1.0, x)) / x;
        assert!((reference - exact).norm() < 1e-9);
    }

    #[test]
    fn invalid_arguments_are_rejected() {
        assert!(endpoint_asymptotic(-1.0, 10.0, 3).is_err());
        assert!(endpoint_asymptotic(0.5, -1.0, 3).is_err());
        assert!(endpoint_asymptotic(0.5, 10.0, 0).is_err());
        let p = Profile::power(1.0).unwrap();
        assert!(plane_transform_oracle(&p, 0.0, 0.0, Some(0.5)).is_err());
    }
}
