//! Profile families and the companion profile.
//!
//! A profile `f0` is a function on `[0, infinity)`, typically nonincreasing
//! and either compactly supported or rapidly decaying. It generates the
//! planar function `f(x) = f0(max(|x1|, |x2|))`. The companion profile
//!
//! ```text
//! f1(t) = t f0(t) + int_t^inf f0(u) du
//! ```
//!
//! carries the same information in a form better suited to transform and
//! positivity work; its derivative satisfies `f1'(t) = t f0'(t)`.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::quadrature::{self, Integral, Oscillation, QuadOpts, Range};
use crate::special;
use crate::{Error, Result};

// ---------------------------------------------------------------------------
// Exact rational spline pieces
// ---------------------------------------------------------------------------

/// A compactly supported piece `(1-t)_+^m * (a0 + a1 t + ... + ak t^k)` on
/// `[0, 1]` with exact rational exponent and coefficients.
///
/// The representation is closed under the operations the crate needs:
/// differentiation, multiplication by `t`, and the tail integral entering
/// the companion profile. All of those are carried out exactly; floating
/// point enters only at evaluation time.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplinePoly {
    /// Exponent of the `(1-t)` factor, a nonnegative rational.
    #[serde(with = "rational_string")]
    pub m: BigRational,
    /// Polynomial part in powers of `t`, constant term first.
    #[serde(with = "rational_string_vec")]
    pub coeffs: Vec<BigRational>,
}

pub(crate) fn rat_i64(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub(crate) fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

impl SplinePoly {
    pub fn new(m: BigRational, coeffs: Vec<BigRational>) -> Result<Self> {
        if m.is_negative() {
            return Err(Error::InvalidParameter(format!(
                "spline exponent must be nonnegative, got {m}"
            )));
        }
        if coeffs.is_empty() {
            return Err(Error::InvalidParameter(
                "spline polynomial part must have at least one coefficient".into(),
            ));
        }
        Ok(SplinePoly { m, coeffs })
    }

    /// Convenience constructor from small integers.
    pub fn from_ints(m: i64, coeffs: &[i64]) -> Self {
        SplinePoly {
            m: rat_i64(m, 1),
            coeffs: coeffs.iter().map(|&c| rat_i64(c, 1)).collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    fn m_f64(&self) -> f64 {
        self.m.to_f64().expect("rational exponent fits in f64")
    }

    /// Value at `t >= 0`; zero beyond the support `[0, 1]`.
    pub fn value(&self, t: f64) -> f64 {
        if !(0.0..1.0).contains(&t) {
            return if t == 1.0 && self.m.is_zero() {
                self.poly_value(1.0)
            } else {
                0.0
            };
        }
        (1.0 - t).powf(self.m_f64()) * self.poly_value(t)
    }

    fn poly_value(&self, t: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * t + c.to_f64().expect("rational coefficient fits in f64");
        }
        acc
    }

    /// Derivative value at `t`, evaluated directly in floating point.
    ///
    /// Uses `d/dt [(1-t)^m p] = (1-t)^(m-1) ((1-t) p' - m p)`, which is
    /// valid for any positive exponent, including fractional ones where
    /// the exact form leaves the family.
    pub fn derivative_value(&self, t: f64) -> f64 {
        if !(0.0..1.0).contains(&t) {
            return 0.0;
        }
        let m = self.m_f64();
        let p = self.poly_value(t);
        let dp = self.poly_derivative_value(t);
        if m == 0.0 {
            dp
        } else {
            (1.0 - t).powf(m - 1.0) * ((1.0 - t) * dp - m * p)
        }
    }

    fn poly_derivative_value(&self, t: f64) -> f64 {
        let mut acc = 0.0;
        for (i, c) in self.coeffs.iter().enumerate().skip(1).rev() {
            acc = acc * t + i as f64 * c.to_f64().expect("coefficient fits in f64");
        }
        acc
    }

    fn poly_derivative2_value(&self, t: f64) -> f64 {
        let mut acc = 0.0;
        for (i, c) in self.coeffs.iter().enumerate().skip(2).rev() {
            acc = acc * t
                + (i * (i - 1)) as f64 * c.to_f64().expect("coefficient fits in f64");
        }
        acc
    }

    /// Second derivative value, by the same direct evaluation scheme as
    /// [`SplinePoly::derivative_value`].
    pub fn derivative2_value(&self, t: f64) -> f64 {
        if !(0.0..1.0).contains(&t) {
            return 0.0;
        }
        let m = self.m_f64();
        let p = self.poly_value(t);
        let dp = self.poly_derivative_value(t);
        let d2p = self.poly_derivative2_value(t);
        if m == 0.0 {
            return d2p;
        }
        let w = 1.0 - t;
        w.powf(m - 2.0) * (m * (m - 1.0) * p - 2.0 * m * w * dp + w * w * d2p)
    }

    /// Exact derivative, valid on `[0, 1)`.
    ///
    /// For `m >= 1` the result is `(1-t)^(m-1) * ((1-t) p'(t) - m p(t))`;
    /// for `m = 0` it is the plain polynomial derivative. Exponents in
    /// `(0, 1)` would leave the family, so they are rejected.
    pub fn derivative(&self) -> Result<SplinePoly> {
        let one = BigRational::one();
        if self.m.is_zero() {
            let d = self.poly_derivative();
            return SplinePoly::new(BigRational::zero(), d);
        }
        if self.m < one {
            return Err(Error::Unsupported(format!(
                "derivative of a spline piece with fractional exponent {} below 1",
                self.m
            )));
        }
        let dp = self.poly_derivative();
        // (1-t) p'(t)
        let mut shifted = vec![BigRational::zero(); dp.len() + 1];
        for (i, c) in dp.iter().enumerate() {
            shifted[i] += c;
            shifted[i + 1] -= c;
        }
        // minus m p(t)
        for (i, c) in self.coeffs.iter().enumerate() {
            if shifted.len() <= i {
                shifted.push(BigRational::zero());
            }
            shifted[i] -= &self.m * c;
        }
        trim(&mut shifted);
        SplinePoly::new(&self.m - one, shifted)
    }

    fn poly_derivative(&self) -> Vec<BigRational> {
        if self.coeffs.len() == 1 {
            return vec![BigRational::zero()];
        }
        let mut d = Vec::with_capacity(self.coeffs.len() - 1);
        for (i, c) in self.coeffs.iter().enumerate().skip(1) {
            d.push(c * rat_i64(i as i64, 1));
        }
        d
    }

    /// Coefficients on the shifted basis `(1-t)^j`: `p(t) = sum c_j (1-t)^j`.
    pub(crate) fn shifted_basis(&self) -> Vec<BigRational> {
        let deg = self.degree();
        let mut c = vec![BigRational::zero(); deg + 1];
        for (k, a) in self.coeffs.iter().enumerate() {
            // t^k = sum_j C(k, j) (-1)^j (1-t)^j
            for (j, cj) in c.iter_mut().enumerate().take(k + 1) {
                let mut term = BigRational::from(binomial(k, j));
                if j % 2 == 1 {
                    term = -term;
                }
                *cj += a * term;
            }
        }
        c
    }

    fn from_shifted_basis(m: BigRational, c: &[BigRational]) -> Result<SplinePoly> {
        let mut coeffs = vec![BigRational::zero(); c.len()];
        for (j, cj) in c.iter().enumerate() {
            // (1-t)^j = sum_i C(j, i) (-1)^i t^i
            for (i, bi) in coeffs.iter_mut().enumerate().take(j + 1) {
                let mut term = BigRational::from(binomial(j, i));
                if i % 2 == 1 {
                    term = -term;
                }
                *bi += cj * term;
            }
        }
        trim(&mut coeffs);
        SplinePoly::new(m, coeffs)
    }

    /// Exact companion of this piece: `t P(t) + int_t^1 P(u) du`.
    ///
    /// Writing `P = sum c_j (1-t)^(m+j)`, the tail integral contributes
    /// `c_j (1-t)^(m+j+1) / (m+j+1)` and `t P` contributes
    /// `c_j ((1-t)^(m+j) - (1-t)^(m+j+1))`, so the result stays inside the
    /// same family with the same exponent.
    pub fn companion(&self) -> SplinePoly {
        let c = self.shifted_basis();
        let mut out = vec![BigRational::zero(); c.len() + 1];
        for (j, cj) in c.iter().enumerate() {
            let mpj1 = &self.m + rat_i64(j as i64 + 1, 1);
            out[j] += cj;
            out[j + 1] += cj * (BigRational::one() / &mpj1 - BigRational::one());
        }
        trim(&mut out);
        SplinePoly::from_shifted_basis(self.m.clone(), &out)
            .expect("companion stays in the family")
    }

    /// Full power-basis expansion; defined when the exponent is an integer.
    pub fn expand(&self) -> Result<Vec<BigRational>> {
        if !self.m.is_integer() {
            return Err(Error::Unsupported(format!(
                "power-basis expansion needs an integer exponent, got {}",
                self.m
            )));
        }
        let m = self
            .m
            .to_integer()
            .to_usize()
            .ok_or_else(|| Error::InvalidParameter("exponent too large".into()))?;
        let mut out = vec![BigRational::zero(); m + self.coeffs.len()];
        for (k, a) in self.coeffs.iter().enumerate() {
            for i in 0..=m {
                let mut term = BigRational::from(binomial(m, i));
                if i % 2 == 1 {
                    term = -term;
                }
                out[k + i] += a * term;
            }
        }
        trim(&mut out);
        Ok(out)
    }

    /// Exact moment `int_0^1 t^k (1-t)^m p(t) dt` for integer exponents.
    pub fn moment_exact(&self, k: u32) -> Result<BigRational> {
        if !self.m.is_integer() {
            return Err(Error::Unsupported(
                "exact moments need an integer exponent".into(),
            ));
        }
        // t^k p(t) in the shifted basis, then integrate term by term.
        let mut tk = vec![BigRational::zero(); k as usize + 1];
        tk[k as usize] = BigRational::one();
        let mut prod = vec![BigRational::zero(); k as usize + self.coeffs.len()];
        for (i, a) in tk.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in self.coeffs.iter().enumerate() {
                prod[i + j] += a * b;
            }
        }
        let shifted = SplinePoly {
            m: self.m.clone(),
            coeffs: prod,
        }
        .shifted_basis();
        let mut acc = BigRational::zero();
        for (j, cj) in shifted.iter().enumerate() {
            let e = &self.m + rat_i64(j as i64 + 1, 1);
            acc += cj / e;
        }
        Ok(acc)
    }
}

fn trim(v: &mut Vec<BigRational>) {
    while v.len() > 1 && v.last().map_or(false, Zero::is_zero) {
        v.pop();
    }
}

pub(crate) mod rational_string {
    use num::rational::BigRational;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let raw = String::deserialize(d)?;
        raw.parse().map_err(de::Error::custom)
    }
}

mod rational_string_vec {
    use num::rational::BigRational;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|r| r.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.into_iter()
            .map(|s| s.parse().map_err(de::Error::custom))
            .collect()
    }
}

// ---------------------------------------------------------------------------
// Tabulated curves
// ---------------------------------------------------------------------------

/// Samples of a function on a strictly increasing grid, evaluated by linear
/// (`order` 1) or natural cubic (`order` 3) interpolation. Left of the grid
/// the first value is held; right of the grid the curve is zero.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "SampledCurveRaw", into = "SampledCurveRaw")]
pub struct SampledCurve {
    grid: Vec<f64>,
    values: Vec<f64>,
    order: u8,
    /// Second derivatives of the natural cubic spline; empty for linear.
    second: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct SampledCurveRaw {
    grid: Vec<f64>,
    values: Vec<f64>,
    order: u8,
}

impl From<SampledCurve> for SampledCurveRaw {
    fn from(c: SampledCurve) -> Self {
        SampledCurveRaw {
            grid: c.grid,
            values: c.values,
            order: c.order,
        }
    }
}

impl TryFrom<SampledCurveRaw> for SampledCurve {
    type Error = Error;
    fn try_from(raw: SampledCurveRaw) -> Result<Self> {
        SampledCurve::new(raw.grid, raw.values, raw.order)
    }
}

impl SampledCurve {
    pub fn new(grid: Vec<f64>, values: Vec<f64>, order: u8) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(Error::InvalidParameter(format!(
                "grid and values lengths differ: {} vs {}",
                grid.len(),
                values.len()
            )));
        }
        let min_len = if order == 3 { 4 } else { 2 };
        if grid.len() < min_len {
            return Err(Error::InvalidParameter(format!(
                "need at least {min_len} samples for order {order}"
            )));
        }
        if order != 1 && order != 3 {
            return Err(Error::InvalidParameter(format!(
                "interpolation order must be 1 or 3, got {order}"
            )));
        }
        if !grid.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidParameter(
                "grid must be strictly increasing".into(),
            ));
        }
        if grid.iter().chain(values.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(
                "grid and values must be finite".into(),
            ));
        }
        let second = if order == 3 {
            natural_spline_second_derivatives(&grid, &values)
        } else {
            Vec::new()
        };
        Ok(SampledCurve {
            grid,
            values,
            order,
            second,
        })
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn order(&self) -> u8 {
        self.order
    }

    pub fn last_abscissa(&self) -> f64 {
        *self.grid.last().expect("grid never empty")
    }

    pub fn value(&self, t: f64) -> f64 {
        if t <= self.grid[0] {
            return self.values[0];
        }
        if t >= self.last_abscissa() {
            return 0.0;
        }
        let i = self.segment(t);
        let h = self.grid[i + 1] - self.grid[i];
        let a = (self.grid[i + 1] - t) / h;
        let b = (t - self.grid[i]) / h;
        let lin = a * self.values[i] + b * self.values[i + 1];
        if self.order == 1 {
            lin
        } else {
            lin + ((a * a * a - a) * self.second[i] + (b * b * b - b) * self.second[i + 1])
                * (h * h)
                / 6.0
        }
    }

    pub fn derivative(&self, t: f64) -> f64 {
        if t <= self.grid[0] || t >= self.last_abscissa() {
            return 0.0;
        }
        let i = self.segment(t);
        let h = self.grid[i + 1] - self.grid[i];
        let slope = (self.values[i + 1] - self.values[i]) / h;
        if self.order == 1 {
            slope
        } else {
            let a = (self.grid[i + 1] - t) / h;
            let b = (t - self.grid[i]) / h;
            slope
                + ((3.0 * b * b - 1.0) * self.second[i + 1] - (3.0 * a * a - 1.0) * self.second[i])
                    * h
                    / 6.0
        }
    }

    /// Second derivative of the cubic interpolant (zero for linear order).
    pub fn second_derivative(&self, t: f64) -> f64 {
        if self.order != 3 || t <= self.grid[0] || t >= self.last_abscissa() {
            return 0.0;
        }
        let i = self.segment(t);
        let h = self.grid[i + 1] - self.grid[i];
        let a = (self.grid[i + 1] - t) / h;
        let b = (t - self.grid[i]) / h;
        a * self.second[i] + b * self.second[i + 1]
    }

    fn segment(&self, t: f64) -> usize {
        // Index of the segment [grid[i], grid[i+1]) containing t.
        let i = self.grid.partition_point(|&x| x <= t);
        i.clamp(1, self.grid.len() - 1) - 1
    }
}

fn natural_spline_second_derivatives(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut y2 = vec![0.0; n];
    let mut u = vec![0.0; n - 1];
    for i in 1..n - 1 {
        let sig = (x[i] - x[i - 1]) / (x[i + 1] - x[i - 1]);
        let p = sig * y2[i - 1] + 2.0;
        y2[i] = (sig - 1.0) / p;
        let d = (y[i + 1] - y[i]) / (x[i + 1] - x[i]) - (y[i] - y[i - 1]) / (x[i] - x[i - 1]);
        u[i] = (6.0 * d / (x[i + 1] - x[i - 1]) - sig * u[i - 1]) / p;
    }
    for i in (0..n - 1).rev() {
        y2[i] = y2[i] * y2[i + 1] + u[i];
    }
    y2
}

// ---------------------------------------------------------------------------
// Profile families
// ---------------------------------------------------------------------------

/// A one-dimensional profile generating a planar function of the max norm.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "family")]
pub enum Profile {
    /// `(1 - t)_+^alpha` with `alpha > 0`.
    #[serde(rename = "power")]
    PowerPlus { alpha: f64 },
    /// `exp(-lambda t)` with `lambda > 0`.
    #[serde(rename = "exp")]
    Exponential { lambda: f64 },
    /// Exact rational spline piece on `[0, 1]`.
    #[serde(rename = "spline")]
    Spline(SplinePoly),
    /// Tabulated curve, the escape hatch for everything else.
    #[serde(rename = "table")]
    Tabulated(SampledCurve),
}

impl Profile {
    pub fn power(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "power profile needs alpha > 0, got {alpha}"
            )));
        }
        Ok(Profile::PowerPlus { alpha })
    }

    pub fn exponential(lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "exponential profile needs lambda > 0, got {lambda}"
            )));
        }
        Ok(Profile::Exponential { lambda })
    }

    /// Profile value `f0(t)` for `t >= 0`.
    pub fn value(&self, t: f64) -> f64 {
        match self {
            Profile::PowerPlus { alpha } => {
                if t < 1.0 {
                    (1.0 - t).powf(*alpha)
                } else {
                    0.0
                }
            }
            Profile::Exponential { lambda } => (-lambda * t).exp(),
            Profile::Spline(s) => s.value(t),
            Profile::Tabulated(c) => c.value(t),
        }
    }

    /// Derivative `f0'(t)`, taken one-sided into the support at kinks and
    /// zero beyond it. Unbounded near the support edge for `alpha < 1`.
    pub fn derivative(&self, t: f64) -> f64 {
        match self {
            Profile::PowerPlus { alpha } => {
                if t < 1.0 {
                    -alpha * (1.0 - t).powf(alpha - 1.0)
                } else {
                    0.0
                }
            }
            Profile::Exponential { lambda } => -lambda * (-lambda * t).exp(),
            Profile::Spline(s) => s.derivative_value(t),
            Profile::Tabulated(c) => c.derivative(t),
        }
    }

    /// Second derivative, where the family supports it.
    pub fn derivative2(&self, t: f64) -> Result<f64> {
        match self {
            Profile::PowerPlus { alpha } => Ok(if t < 1.0 {
                alpha * (alpha - 1.0) * (1.0 - t).powf(alpha - 2.0)
            } else {
                0.0
            }),
            Profile::Exponential { lambda } => Ok(lambda * lambda * (-lambda * t).exp()),
            Profile::Spline(s) => Ok(s.derivative2_value(t)),
            Profile::Tabulated(c) if c.order() == 3 => Ok(c.second_derivative(t)),
            Profile::Tabulated(_) => Err(Error::Unsupported(
                "second derivative of a linearly interpolated table".into(),
            )),
        }
    }

    /// Support radius; `None` means unbounded support.
    pub fn support_radius(&self) -> Option<f64> {
        match self {
            Profile::PowerPlus { .. } | Profile::Spline(_) => Some(1.0),
            Profile::Exponential { .. } => None,
            Profile::Tabulated(c) => Some(c.last_abscissa()),
        }
    }

    /// Parameter checks for profiles that arrived through serde instead of
    /// a constructor. Tabulated curves are already validated when their
    /// raw form is converted.
    pub fn validate(&self) -> Result<()> {
        match self {
            Profile::PowerPlus { alpha } => {
                if !(*alpha > 0.0) || !alpha.is_finite() {
                    return Err(Error::InvalidParameter(format!(
                        "power profile needs alpha > 0, got {alpha}"
                    )));
                }
            }
            Profile::Exponential { lambda } => {
                if !(*lambda > 0.0) || !lambda.is_finite() {
                    return Err(Error::InvalidParameter(format!(
                        "exponential profile needs lambda > 0, got {lambda}"
                    )));
                }
            }
            Profile::Spline(s) => {
                SplinePoly::new(s.m.clone(), s.coeffs.clone())?;
            }
            Profile::Tabulated(_) => {}
        }
        Ok(())
    }

    /// Abscissas where `f0` or its derivative is known to be non-smooth.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self.support_radius() {
            Some(r) => vec![r],
            None => vec![],
        }
    }

    /// How many derivatives can be evaluated meaningfully.
    pub fn derivative_order_available(&self) -> u32 {
        match self {
            Profile::Tabulated(c) => {
                if c.order() == 1 {
                    0
                } else {
                    1
                }
            }
            _ => u32::MAX,
        }
    }

    /// A practical truncation point for semi-infinite integrals: the
    /// support edge, or the point where an exponential tail falls below
    /// any tolerance used in this crate.
    pub fn effective_radius(&self) -> f64 {
        match self {
            Profile::Exponential { lambda } => 40.0 / lambda,
            _ => self.support_radius().expect("compact families have a radius"),
        }
    }

    /// Moment `int_0^inf t^power f0(t) dt` for `power > -1`. Closed forms
    /// where the family has one, quadrature otherwise.
    pub fn moment(&self, power: f64) -> Result<Integral> {
        self.moment_impl(power, false)
    }

    /// Same integral with `|f0|` in place of `f0`.
    pub fn moment_abs(&self, power: f64) -> Result<Integral> {
        self.moment_impl(power, true)
    }

    fn moment_impl(&self, power: f64, abs: bool) -> Result<Integral> {
        if !(power > -1.0) {
            return Err(Error::InvalidParameter(format!(
                "moment power must exceed -1, got {power}"
            )));
        }
        let exact = |v: f64| Integral {
            value: v,
            err: v.abs() * 1e-15,
            converged: true,
            panels: 0,
        };
        // The closed-form families are nonnegative, so abs changes nothing.
        match self {
            Profile::PowerPlus { alpha } => {
                Ok(exact(special::beta(power + 1.0, alpha + 1.0)))
            }
            Profile::Exponential { lambda } => {
                Ok(exact(special::gamma(power + 1.0) / lambda.powf(power + 1.0)))
            }
            Profile::Spline(s) if !abs && power >= 0.0 && power.fract() == 0.0 => {
                match s.moment_exact(power as u32) {
                    Ok(r) => Ok(exact(r.to_f64().expect("moment fits in f64"))),
                    Err(_) => self.moment_by_quadrature(power, abs),
                }
            }
            _ => self.moment_by_quadrature(power, abs),
        }
    }

    fn moment_by_quadrature(&self, power: f64, abs: bool) -> Result<Integral> {
        let r = self.effective_radius();
        quadrature::integrate(
            |t| {
                let v = if abs { self.value(t).abs() } else { self.value(t) };
                t.powf(power) * v
            },
            Range::Finite(0.0, r),
            Oscillation::None,
            &self.breakpoints(),
            &QuadOpts::default(),
        )
    }

    /// The companion profile `f1`.
    pub fn companion(&self) -> Companion {
        let form = match self {
            Profile::PowerPlus { alpha } => CompanionForm::Power { alpha: *alpha },
            Profile::Exponential { lambda } => CompanionForm::Exp { lambda: *lambda },
            Profile::Spline(s) => CompanionForm::Spline(s.companion()),
            Profile::Tabulated(_) => CompanionForm::Quadrature,
        };
        Companion {
            profile: self.clone(),
            form,
        }
    }
}

// ---------------------------------------------------------------------------
// Companion profile
// ---------------------------------------------------------------------------

/// The companion profile `f1(t) = t f0(t) + int_t^inf f0`.
#[derive(Clone, Debug)]
pub struct Companion {
    profile: Profile,
    form: CompanionForm,
}

#[derive(Clone, Debug)]
enum CompanionForm {
    Power { alpha: f64 },
    Exp { lambda: f64 },
    Spline(SplinePoly),
    Quadrature,
}

impl Companion {
    pub fn value(&self, t: f64) -> f64 {
        match &self.form {
            CompanionForm::Power { alpha } => {
                if t < 1.0 {
                    (1.0 - t).powf(*alpha) * (1.0 + alpha * t) / (alpha + 1.0)
                } else {
                    0.0
                }
            }
            CompanionForm::Exp { lambda } => (t + 1.0 / lambda) * (-lambda * t).exp(),
            CompanionForm::Spline(s) => s.value(t),
            CompanionForm::Quadrature => {
                let r = self.profile.effective_radius();
                if t >= r {
                    return 0.0;
                }
                let tail = quadrature::integrate(
                    |u| self.profile.value(u),
                    Range::Finite(t, r),
                    Oscillation::None,
                    &self.profile.breakpoints(),
                    &QuadOpts::default(),
                )
                .map(|i| i.value)
                .unwrap_or(f64::NAN);
                t * self.profile.value(t) + tail
            }
        }
    }

    /// `f1'(t) = t f0'(t)`, an identity that holds for every profile with
    /// an integrable derivative.
    pub fn derivative(&self, t: f64) -> f64 {
        t * self.profile.derivative(t)
    }

    pub fn support_radius(&self) -> Option<f64> {
        self.profile.support_radius()
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    /// Exact spline form when the source profile was a spline.
    pub fn as_spline(&self) -> Option<&SplinePoly> {
        match &self.form {
            CompanionForm::Spline(s) => Some(s),
            _ => None,
        }
    }
}

/// Recover `f0(t)` from companion values alone:
///
/// ```text
/// f0(t) = f1(t)/t - int_t^inf f1(u)/u^2 du
/// ```
///
/// valid for `t > 0`. The two terms cancel to `O(1)` as `t -> 0`, so small
/// `t` loses relative accuracy; callers probing `t` below about `1e-3`
/// should prefer the companion directly.
pub fn profile_from_companion(
    f1: &dyn Fn(f64) -> f64,
    support_radius: Option<f64>,
    t: f64,
    opts: &QuadOpts,
) -> Result<Integral> {
    if !(t > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "recovery from the companion needs t > 0, got {t}"
        )));
    }
    let range = match support_radius {
        Some(r) if t >= r => {
            return Ok(Integral {
                value: 0.0,
                err: 0.0,
                converged: true,
                panels: 0,
            })
        }
        Some(r) => Range::Finite(t, r),
        None => Range::SemiInfinite(t),
    };
    let tail = quadrature::integrate(|u| f1(u) / (u * u), range, Oscillation::None, &[], opts)?;
    Ok(Integral {
        value: f1(t) / t - tail.value,
        err: tail.err,
        converged: tail.converged,
        panels: tail.panels,
    })
}

// ---------------------------------------------------------------------------
// Integral modulus of continuity
// ---------------------------------------------------------------------------

/// Which derived function a modulus request targets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModulusTarget {
    /// `f0'`
    ProfileDerivative,
    /// `f1' = t f0'(t)`
    CompanionDerivative,
}

/// Estimate of the L1 modulus of continuity `w(g; t)`, reported as a lower
/// bound: a maximum of shift differences over a geometric grid of shifts.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ModulusEstimate {
    pub value: f64,
    /// The shift achieving the maximum.
    pub at_delta: f64,
    /// Number of shift evaluations behind the maximum.
    pub evaluations: usize,
}

/// `int_0^inf |g(u) - g(u + delta)| du` for one shift.
pub fn shift_difference_l1(
    g: &dyn Fn(f64) -> f64,
    support_hi: Option<f64>,
    delta: f64,
    opts: &QuadOpts,
) -> Result<Integral> {
    let integrand = |u: f64| (g(u) - g(u + delta)).abs();
    match support_hi {
        Some(r) => {
            // Beyond r both terms vanish; kinks sit at the support edge of
            // each copy.
            let cuts = [r - delta, r];
            quadrature::integrate(
                integrand,
                Range::Finite(0.0, r),
                Oscillation::None,
                &cuts,
                opts,
            )
        }
        None => quadrature::integrate(
            integrand,
            Range::SemiInfinite(0.0),
            Oscillation::None,
            &[],
            opts,
        ),
    }
}

/// Shifts per decade in the geometric grid used by [`modulus_l1`]. The sup
/// over shifts is approximated from above the largest shift down three
/// decades.
pub const MODULUS_SHIFTS_PER_DECADE: usize = 64;
const MODULUS_DECADES: usize = 3;

/// Approximate `w(g; t) = sup_(0 < delta <= t) int |g(u) - g(u+delta)| du`
/// for `g` one of the profile's derived derivatives.
pub fn modulus_l1(
    p: &Profile,
    target: ModulusTarget,
    t: f64,
    opts: &QuadOpts,
) -> Result<ModulusEstimate> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "modulus scale must be positive and finite, got {t}"
        )));
    }
    if p.derivative_order_available() < 1 {
        return Err(Error::Unsupported(
            "modulus of a derivative needs a differentiable profile".into(),
        ));
    }
    let g: Box<dyn Fn(f64) -> f64> = match target {
        ModulusTarget::ProfileDerivative => Box::new(|u| p.derivative(u)),
        ModulusTarget::CompanionDerivative => Box::new(|u| u * p.derivative(u)),
    };
    let support = p.support_radius();

    let mut best = f64::NEG_INFINITY;
    let mut best_delta = t;
    let mut evals = 0usize;
    let total = MODULUS_SHIFTS_PER_DECADE * MODULUS_DECADES;
    for i in 0..=total {
        let delta = t * 10f64.powf(-(i as f64) / MODULUS_SHIFTS_PER_DECADE as f64);
        let d = shift_difference_l1(g.as_ref(), support, delta, opts)?;
        evals += 1;
        if d.value > best {
            best = d.value;
            best_delta = delta;
        }
    }
    Ok(ModulusEstimate {
        value: best,
        at_delta: best_delta,
        evaluations: evals,
    })
}
