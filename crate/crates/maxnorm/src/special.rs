//! Minimal special functions used internally: gamma and beta for positive
//! arguments via the Lanczos approximation.

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma function for `x > 0`. Accurate to about 14 significant digits.
pub(crate) fn gamma(x: f64) -> f64 {
    assert!(x > 0.0, "gamma requires a positive argument, got {x}");
    if x < 0.5 {
        // Reflection keeps the Lanczos sum in its accurate range.
        std::f64::consts::PI / ((std::f64::consts::PI * x).sin() * gamma(1.0 - x))
    } else {
        let x = x - 1.0;
        let mut acc = LANCZOS[0];
        for (i, c) in LANCZOS.iter().enumerate().skip(1) {
            acc += c / (x + i as f64);
        }
        let t = x + LANCZOS_G + 0.5;
        (2.0 * std::f64::consts::PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc
    }
}

/// Beta function for positive arguments.
pub(crate) fn beta(a: f64, b: f64) -> f64 {
    // Ratio form keeps intermediate magnitudes in range for the small
    // arguments used in this crate.
    gamma(a) * gamma(b) / gamma(a + b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn integer_and_half_integer_values() {
        assert_relative_eq!(gamma(1.0), 1.0, max_relative = 1e-13);
        assert_relative_eq!(gamma(5.0), 24.0, max_relative = 1e-13);
        assert_relative_eq!(
            gamma(0.5),
            std::f64::consts::PI.sqrt(),
            max_relative = 1e-13
        );
        assert_relative_eq!(
            gamma(2.5),
            1.5 * 0.5 * std::f64::consts::PI.sqrt(),
            max_relative = 1e-13
        );
    }

    #[test]
    fn beta_matches_factorial_identity() {
        // B(3, 4) = 2! 3! / 6! = 1/60
        assert_relative_eq!(beta(3.0, 4.0), 1.0 / 60.0, max_relative = 1e-12);
    }
}
