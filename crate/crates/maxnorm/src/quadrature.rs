//! Adaptive one-dimensional quadrature with oscillatory support.
//!
//! The engine is a 15-point Gauss-Kronrod rule on panels, refined by
//! bisecting whichever panel carries the largest error estimate. Three
//! features matter for the rest of the crate:
//!
//! * Integrands are passed as a smooth factor `h` plus an explicit
//!   oscillation `h(u) * sin(freq * u)` or `h(u) * cos(freq * u)`. Knowing
//!   the trig factor lets the engine split finite ranges at the factor's
//!   zeros and sum semi-infinite ranges half-period by half-period.
//! * Semi-infinite oscillatory integrals are summed over half-periods with
//!   iterated averaging of the partial sums, which converges even when the
//!   envelope decays slowly. Summation stops once a half-period contributes
//!   less than a tenth of the absolute tolerance.
//! * Non-convergence is reported as a flag plus the best estimate, never as
//!   a silent NaN. Callers that need a hard failure use [`Integral::strict`].
//!
//! Declared breakpoints (support edges, kinks) are honored as initial panel
//! boundaries so the adaptive stage never straddles a known discontinuity.

use crate::{Error, Result};

/// Oscillating factor multiplying the smooth part of an integrand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Oscillation {
    /// No oscillating factor.
    None,
    /// Multiply by `sin(freq * u)`.
    Sin(f64),
    /// Multiply by `cos(freq * u)`.
    Cos(f64),
}

impl Oscillation {
    fn factor(&self, u: f64) -> f64 {
        match *self {
            Oscillation::None => 1.0,
            Oscillation::Sin(f) => (f * u).sin(),
            Oscillation::Cos(f) => (f * u).cos(),
        }
    }

    fn freq(&self) -> f64 {
        match *self {
            Oscillation::None => 0.0,
            Oscillation::Sin(f) | Oscillation::Cos(f) => f,
        }
    }
}

/// Integration range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Range {
    /// Closed interval `[a, b]`.
    Finite(f64, f64),
    /// Half line `[a, infinity)`.
    SemiInfinite(f64),
}

/// Tolerances and budgets for one integration call.
#[derive(Debug, Clone)]
pub struct QuadOpts {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Budget for adaptive panels and for half-periods on the half line.
    pub max_panels: usize,
    /// When true, finite oscillatory ranges are pre-split at the zeros of
    /// the trig factor before adaptive refinement starts.
    pub oscillation_splitting: bool,
}

impl Default for QuadOpts {
    fn default() -> Self {
        QuadOpts {
            abs_tol: 1e-10,
            rel_tol: 1e-8,
            max_panels: 4000,
            oscillation_splitting: true,
        }
    }
}

impl QuadOpts {
    /// Same budgets with a different absolute tolerance.
    pub fn with_abs_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

/// Outcome of an integration: best estimate, error estimate, and whether
/// the requested tolerance was met within budget.
#[derive(Debug, Clone, Copy)]
pub struct Integral {
    pub value: f64,
    pub err: f64,
    pub converged: bool,
    /// Panels (or half-periods) actually used.
    pub panels: usize,
}

impl Integral {
    /// Unwrap the value, turning a non-converged result into an error.
    pub fn strict(self, context: &str) -> Result<f64> {
        if self.converged {
            Ok(self.value)
        } else {
            Err(Error::NonConvergent {
                context: context.to_string(),
                best: self.value,
                err: self.err,
            })
        }
    }

    fn exact_zero() -> Self {
        Integral {
            value: 0.0,
            err: 0.0,
            converged: true,
            panels: 0,
        }
    }
}

/// Frequencies below this threshold take the non-oscillatory path; the trig
/// factor is still applied pointwise.
pub const OSC_FREQ_EPS: f64 = 1e-8;

// 15-point Kronrod extension of 7-point Gauss, nodes on [-1, 1].
const XGK15: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WG7: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];
const WGK15: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// Scale a raw Gauss-Kronrod difference into a defensible error estimate.
/// Standard practice inherited from the classic adaptive integrators.
fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

/// One 15-point Gauss-Kronrod evaluation on `[a, b]`.
/// Returns `(value, error_estimate)` or an error if the integrand produced
/// a non-finite value.
pub fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<(f64, f64)> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let mut fv1 = [0.0f64; 7];
    let mut fv2 = [0.0f64; 7];
    let fc = eval_checked(f, center)?;

    let mut gauss = 0.0;
    let mut kronrod = fc * WGK15[7];
    let mut res_abs = kronrod.abs();

    for (j, wg) in WG7.iter().enumerate().take(3) {
        let jtw = j * 2 + 1;
        let x = half * XGK15[jtw];
        let f1 = eval_checked(f, center - x)?;
        let f2 = eval_checked(f, center + x)?;
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        gauss += *wg * (f1 + f2);
        kronrod += WGK15[jtw] * (f1 + f2);
        res_abs += WGK15[jtw] * (f1.abs() + f2.abs());
    }
    gauss += WG7[3] * fc;

    for j in 0..4 {
        let jtw = j * 2;
        if jtw == 7 {
            continue;
        }
        let x = half * XGK15[jtw];
        let f1 = eval_checked(f, center - x)?;
        let f2 = eval_checked(f, center + x)?;
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        kronrod += WGK15[jtw] * (f1 + f2);
        res_abs += WGK15[jtw] * (f1.abs() + f2.abs());
    }

    let mean = kronrod * 0.5;
    let mut res_asc = WGK15[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK15[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let err = (kronrod - gauss) * half;
    Ok((
        kronrod * half,
        rescale_error(err, res_abs * half.abs(), res_asc * half.abs()),
    ))
}

fn eval_checked<F: Fn(f64) -> f64>(f: &F, u: f64) -> Result<f64> {
    let v = f(u);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFiniteValue { at: u })
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

/// Integrate `h(u) * factor(u)` over `range`.
///
/// `breakpoints` are abscissas where `h` is known to be non-smooth (support
/// edges, kinks); points outside the range are ignored. The oscillation, if
/// any, is applied by the engine itself.
pub fn integrate<F: Fn(f64) -> f64>(
    h: F,
    range: Range,
    osc: Oscillation,
    breakpoints: &[f64],
    opts: &QuadOpts,
) -> Result<Integral> {
    match range {
        Range::Finite(a, b) => integrate_finite(&h, a, b, osc, breakpoints, opts),
        Range::SemiInfinite(a) => {
            if !a.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "semi-infinite range must start at a finite point, got {a}"
                )));
            }
            if osc.freq().abs() >= OSC_FREQ_EPS {
                half_period_sum(&h, a, osc, breakpoints, opts)
            } else {
                integrate_tail_mapped(&h, a, osc, breakpoints, opts)
            }
        }
    }
}

fn integrate_finite<F: Fn(f64) -> f64>(
    h: &F,
    a: f64,
    b: f64,
    osc: Oscillation,
    breakpoints: &[f64],
    opts: &QuadOpts,
) -> Result<Integral> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "finite range endpoints must be finite, got [{a}, {b}]"
        )));
    }
    if a == b {
        return Ok(Integral::exact_zero());
    }
    if a > b {
        let mut flipped = integrate_finite(h, b, a, osc, breakpoints, opts)?;
        flipped.value = -flipped.value;
        return Ok(flipped);
    }

    let g = |u: f64| h(u) * osc.factor(u);

    let mut cuts: Vec<f64> = vec![a, b];
    for &p in breakpoints {
        if p > a && p < b {
            cuts.push(p);
        }
    }
    if opts.oscillation_splitting {
        append_trig_zeros(&mut cuts, a, b, osc, opts.max_panels);
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let mut panels: Vec<Panel> = Vec::with_capacity(cuts.len() - 1);
    for w in cuts.windows(2) {
        let (value, err) = kronrod15(&g, w[0], w[1])?;
        panels.push(Panel {
            a: w[0],
            b: w[1],
            value,
            err,
        });
    }

    adaptive_refine(&g, panels, opts)
}

/// Insert the zeros of the trig factor lying strictly inside `(a, b)`.
/// Skipped when the factor barely oscillates across the range or when the
/// zero count alone would exhaust the panel budget; the adaptive stage
/// still resolves those cases.
fn append_trig_zeros(cuts: &mut Vec<f64>, a: f64, b: f64, osc: Oscillation, max_panels: usize) {
    let f = osc.freq().abs();
    if f < OSC_FREQ_EPS {
        return;
    }
    let half_period = std::f64::consts::PI / f;
    if (b - a) < half_period {
        return;
    }
    let count = ((b - a) / half_period) as usize;
    if count + 2 > max_panels {
        return;
    }
    // Zeros at k*pi/f for sin, (k + 1/2)*pi/f for cos.
    let shift = match osc {
        Oscillation::Cos(_) => 0.5,
        _ => 0.0,
    };
    let mut k = (a / half_period - shift).floor() as i64;
    loop {
        let z = (k as f64 + shift) * half_period;
        if z >= b {
            break;
        }
        if z > a {
            cuts.push(z);
        }
        k += 1;
    }
}

fn adaptive_refine<G: Fn(f64) -> f64>(
    g: &G,
    mut panels: Vec<Panel>,
    opts: &QuadOpts,
) -> Result<Integral> {
    use std::cmp::Ordering;

    let total = |panels: &[Panel]| -> (f64, f64) {
        let mut v = 0.0;
        let mut e = 0.0;
        for p in panels {
            v += p.value;
            e += p.err;
        }
        (v, e)
    };

    // Worst panel first; ties resolved by position so refinement order is
    // deterministic.
    let worse = |x: &Panel, y: &Panel| -> Ordering {
        x.err
            .total_cmp(&y.err)
            .then_with(|| y.a.total_cmp(&x.a))
            .reverse()
    };

    loop {
        let (value, err) = total(&panels);
        if err <= opts.target(value) {
            return Ok(Integral {
                value: sum_ordered(&mut panels),
                err,
                converged: true,
                panels: panels.len(),
            });
        }
        if panels.len() >= opts.max_panels {
            return Ok(Integral {
                value: sum_ordered(&mut panels),
                err,
                converged: false,
                panels: panels.len(),
            });
        }

        let (idx, _) = panels
            .iter()
            .enumerate()
            .min_by(|(_, x), (_, y)| worse(x, y))
            .expect("panel list never empty here");
        let worst = panels[idx];
        let mid = 0.5 * (worst.a + worst.b);
        if !(worst.a < mid && mid < worst.b) {
            // Panel has collapsed to machine width; its error cannot be
            // reduced further.
            let (value, err) = total(&panels);
            return Ok(Integral {
                value: sum_ordered(&mut panels),
                err,
                converged: err <= opts.target(value) * 10.0,
                panels: panels.len(),
            });
        }
        let (lv, le) = kronrod15(g, worst.a, mid)?;
        let (rv, re) = kronrod15(g, mid, worst.b)?;
        panels[idx] = Panel {
            a: worst.a,
            b: mid,
            value: lv,
            err: le,
        };
        panels.push(Panel {
            a: mid,
            b: worst.b,
            value: rv,
            err: re,
        });
    }
}

/// Sum panel values in position order for a reproducible rounding pattern.
fn sum_ordered(panels: &mut [Panel]) -> f64 {
    panels.sort_by(|x, y| x.a.total_cmp(&y.a));
    panels.iter().map(|p| p.value).sum()
}

/// Map `[a, infinity)` onto `(0, 1)` via `u = a + s/(1-s)` and integrate
/// adaptively. Suitable when the integrand decays faster than `1/u^2`.
fn integrate_tail_mapped<F: Fn(f64) -> f64>(
    h: &F,
    a: f64,
    osc: Oscillation,
    breakpoints: &[f64],
    opts: &QuadOpts,
) -> Result<Integral> {
    let transformed = |s: f64| {
        let om = 1.0 - s;
        if om <= 0.0 {
            return 0.0;
        }
        let u = a + s / om;
        let hv = h(u);
        // A fully decayed factor short-circuits so the Jacobian cannot
        // manufacture inf * 0.
        if hv == 0.0 {
            return 0.0;
        }
        hv * osc.factor(u) / (om * om)
    };

    let mapped: Vec<f64> = breakpoints
        .iter()
        .filter(|&&p| p > a && p.is_finite())
        .map(|&p| (p - a) / (1.0 + p - a))
        .collect();

    integrate_finite(&transformed, 0.0, 1.0, Oscillation::None, &mapped, opts)
}

/// Sum a semi-infinite oscillatory integral half-period by half-period,
/// accelerating the partial sums with an iterated-mean table. Stops once a
/// half-period contributes below a tenth of the absolute tolerance.
fn half_period_sum<F: Fn(f64) -> f64>(
    h: &F,
    a: f64,
    osc: Oscillation,
    breakpoints: &[f64],
    opts: &QuadOpts,
) -> Result<Integral> {
    let freq = osc.freq().abs();
    let half_period = std::f64::consts::PI / freq;

    // Segment ends at consecutive zeros of the trig factor past `a`.
    let shift = match osc {
        Oscillation::Cos(_) => 0.5,
        _ => 0.0,
    };
    let mut k = (a / half_period - shift).floor() as i64 + 1;
    let mut lo = a;

    let inner = QuadOpts {
        abs_tol: (opts.abs_tol * 1e-2).max(1e-300),
        rel_tol: opts.rel_tol * 1e-2,
        max_panels: 64,
        oscillation_splitting: false,
    };

    let cut_base = opts.abs_tol / 10.0;
    let max_terms = opts.max_panels.max(64);

    let mut partial = 0.0;
    let mut inner_err = 0.0f64;
    // Iterated means of the partial sums: slot k holds the k-fold average.
    let mut table: Vec<f64> = Vec::new();
    let mut prev_estimate = f64::NAN;
    let mut terms = 0usize;
    let mut stable = 0usize;

    loop {
        let hi = (k as f64 + shift) * half_period;
        let seg = if hi > lo {
            integrate_finite(h, lo, hi, osc, breakpoints, &inner)?
        } else {
            k += 1;
            continue;
        };
        partial += seg.value;
        inner_err = inner_err.max(seg.err);
        terms += 1;

        // Update the averaging table in place: the new partial sum
        // propagates down the diagonal.
        let mut carry = partial;
        for slot in table.iter_mut() {
            let avg = 0.5 * (*slot + carry);
            *slot = carry;
            carry = avg;
        }
        if table.len() < 24 {
            table.push(carry);
        }

        // Truncate the diagonal where successive averages are closest.
        // A fast-converging series keeps the raw partial sum; a slow
        // alternating one benefits from the deep averages.
        let mut estimate = table[0];
        let mut best_diff = f64::INFINITY;
        for j in 0..table.len() - 1 {
            let d = (table[j + 1] - table[j]).abs();
            if d <= best_diff {
                best_diff = d;
                estimate = table[j + 1];
            }
        }

        // Convergence is judged on the accelerated sequence; a slowly
        // decaying envelope never makes the raw segments small, but the
        // averaged estimates settle geometrically.
        let cut = cut_base.max(opts.rel_tol * estimate.abs() * 0.1);
        let increment = (estimate - prev_estimate).abs();
        if increment < cut || seg.value.abs() < cut {
            stable += 1;
        } else {
            stable = 0;
        }
        if terms >= 6 && stable >= 3 {
            return Ok(Integral {
                value: estimate,
                err: increment.max(inner_err),
                converged: true,
                panels: terms,
            });
        }
        if terms >= max_terms {
            return Ok(Integral {
                value: estimate,
                err: increment.max(inner_err).max(cut),
                converged: false,
                panels: terms,
            });
        }
        prev_estimate = estimate;
        lo = hi;
        k += 1;
    }
}
