//! Report structures shared by the analysis modules and the command line
//! tool, plus the canonical JSON writer that keeps reports byte-identical
//! across runs.

use serde::ser::Serialize;
use serde::Serialize as SerializeDerive;

// ---------------------------------------------------------------------------
// Convergence ladders
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, SerializeDerive)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    Convergent,
    Divergent,
    Inconclusive,
}

/// One rung of an improper-integral ladder: the partial integral obtained
/// by cutting the singular end at `epsilon`.
#[derive(Clone, Copy, Debug, SerializeDerive)]
pub struct LadderPoint {
    pub epsilon: f64,
    pub partial_integral: f64,
}

/// Verdict on an improper criterion integral, with the evidence attached.
///
/// `fitted_exponent` is the least-squares slope of the partial integrals
/// against `ln(1/epsilon)`, so a clean logarithmic divergence fits slope
/// close to the integrand's constant and a convergent tail fits slope
/// close to zero. `increment_ratio` is the ratio of successive partial-sum
/// increments along the dyadic ladder; a ratio bounded away from 1 means a
/// geometrically summable tail.
#[derive(Clone, Debug, SerializeDerive)]
pub struct ConvergenceReport {
    pub classification: Classification,
    pub epsilon_ladder: Vec<LadderPoint>,
    pub fitted_exponent: f64,
    pub r_squared: f64,
    pub increment_ratio: Option<f64>,
    pub value_if_convergent: Option<f64>,
}

// ---------------------------------------------------------------------------
// Positive definiteness
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, SerializeDerive)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    StrictlyPositive,
    Nonnegative,
    Indefinite,
    Inconclusive,
}

/// The most negative sample found by a scan; one coordinate for profile
/// scans, two for plane scans.
#[derive(Clone, Debug, SerializeDerive)]
pub struct Witness {
    pub point: Vec<f64>,
    pub value: f64,
}

#[derive(Clone, Debug, SerializeDerive)]
pub struct PdVerdict {
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub min_margin: f64,
    /// Smallest abscissa where the scanned transform crosses below zero,
    /// refined by bisection; absent when no sign change was seen.
    pub first_crossing: Option<f64>,
    pub grid_spec: String,
    pub tolerance: f64,
}

impl PdVerdict {
    /// Verdict consistency: an indefinite call must expose its witness.
    pub fn is_consistent(&self) -> bool {
        match self.verdict {
            Verdict::Indefinite => self
                .witness
                .as_ref()
                .map_or(false, |w| w.value < -self.tolerance),
            _ => true,
        }
    }
}

// ---------------------------------------------------------------------------
// Least-squares line fits
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, SerializeDerive)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Ordinary least squares of `y` against `x`. Two or more points required;
/// with exactly collinear data `r_squared` is 1.
pub fn linear_fit(x: &[f64], y: &[f64]) -> LinearFit {
    assert_eq!(x.len(), y.len());
    assert!(x.len() >= 2, "a line fit needs at least two points");
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (&xi, &yi) in x.iter().zip(y) {
        sxx += (xi - mx) * (xi - mx);
        sxy += (xi - mx) * (yi - my);
        syy += (yi - my) * (yi - my);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        (sxy * sxy) / (sxx * syy)
    };
    LinearFit {
        slope,
        intercept,
        r_squared,
    }
}

// ---------------------------------------------------------------------------
// Canonical JSON
// ---------------------------------------------------------------------------

/// Serializes with every float written as `{:.16e}` (17 significant
/// digits), which round-trips f64 exactly and never depends on the
/// shortest-representation algorithm. Struct fields keep declaration
/// order, so equal values give equal bytes.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, CanonicalFormatter);
    value
        .serialize(&mut ser)
        .expect("report serialization is infallible");
    String::from_utf8(out).expect("serde_json emits UTF-8")
}

struct CanonicalFormatter;

impl serde_json::ser::Formatter for CanonicalFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        // Infinities and NaN are not valid JSON; reports must not carry
        // them, so surface the bug loudly instead of emitting garbage.
        assert!(value.is_finite(), "non-finite value in a report");
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        self.write_f64(writer, value as f64)
    }
}
