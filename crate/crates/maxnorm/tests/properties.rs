//! Randomized invariant checks over the public API. Each block pins its
//! own case count so the whole target stays fast; every expected value
//! comes from a closed form or an independent brute-force sum.

use num::complex::Complex;
use proptest::prelude::*;

use maxnorm::membership;
use maxnorm::profile::{Profile, SplinePoly};
use maxnorm::quadrature::{self, Oscillation, QuadOpts, Range};
use maxnorm::report::Classification;
use maxnorm::splines::{self, SplineSpec};
use maxnorm::summability::{self, Generator};
use maxnorm::transform::{self, PlaneMethod};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // Plain panels against the closed-form antiderivative of a cubic.
    #[test]
    fn cubic_integrals_match_antiderivative(
        c in proptest::array::uniform4(-3.0f64..3.0),
        a in -5.0f64..5.0,
        w in 0.1f64..8.0,
    ) {
        let h = |u: f64| c[0] + u * (c[1] + u * (c[2] + u * c[3]));
        let anti = |u: f64| {
            u * (c[0] + u * (c[1] / 2.0 + u * (c[2] / 3.0 + u * c[3] / 4.0)))
        };
        let b = a + w;
        let got = quadrature::integrate(h, Range::Finite(a, b), Oscillation::None, &[], &QuadOpts::default())
            .unwrap()
            .strict("cubic")
            .unwrap();
        let want = anti(b) - anti(a);
        let scale = 1.0 + want.abs();
        prop_assert!((got - want).abs() <= 1e-9 * scale, "got {got}, want {want}");
    }

    // The companion profile's slope is `t` times the profile's slope.
    #[test]
    fn companion_derivative_identity(
        m in 2i64..6,
        a1 in -4i64..=4,
        a2 in -4i64..=4,
        t in 0.01f64..0.99,
    ) {
        let f0 = SplinePoly::from_ints(m, &[1, a1, a2]);
        let f1 = f0.companion();
        let lhs = f1.derivative_value(t);
        let rhs = t * f0.derivative_value(t);
        prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + rhs.abs()), "lhs {lhs}, rhs {rhs}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    // Semi-infinite oscillatory path against the Laplace closed forms.
    #[test]
    fn exponential_trig_integrals(lambda in 0.4f64..3.0, x in 0.5f64..20.0) {
        let opts = QuadOpts::default();
        let cos = quadrature::integrate(
            |u| (-lambda * u).exp(),
            Range::SemiInfinite(0.0),
            Oscillation::Cos(x),
            &[],
            &opts,
        )
        .unwrap()
        .strict("cos")
        .unwrap();
        let sin = quadrature::integrate(
            |u| (-lambda * u).exp(),
            Range::SemiInfinite(0.0),
            Oscillation::Sin(x),
            &[],
            &opts,
        )
        .unwrap()
        .strict("sin")
        .unwrap();
        let denom = lambda * lambda + x * x;
        prop_assert!((cos - lambda / denom).abs() <= 1e-8);
        prop_assert!((sin - x / denom).abs() <= 1e-8);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    // The plane transform only feels `(|y1|, |y2|)` as an unordered pair.
    #[test]
    fn plane_transform_symmetry(y1 in 0.2f64..8.0, y2 in 0.2f64..8.0) {
        let p = Profile::power(2.0).unwrap();
        let opts = QuadOpts::default();
        let base = transform::plane_transform(&p, y1, y2, PlaneMethod::ViaF0Hat, &opts).unwrap();
        let swapped = transform::plane_transform(&p, y2, y1, PlaneMethod::ViaF0Hat, &opts).unwrap();
        let mirrored = transform::plane_transform(&p, -y1, y2, PlaneMethod::ViaF0Hat, &opts).unwrap();
        prop_assert!((base - swapped).abs() <= 1e-9 * (1.0 + base.abs()));
        prop_assert!((base - mirrored).abs() <= 1e-9 * (1.0 + base.abs()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    // Ladder rungs of a nonnegative integrand never decrease, and the
    // power family always converges.
    #[test]
    fn boundary_ladder_is_monotone(alpha in 0.2f64..2.5) {
        let report =
            membership::boundary_log_criterion(&Profile::power(alpha).unwrap(), &QuadOpts::default())
                .unwrap();
        prop_assert_eq!(report.classification, Classification::Convergent);
        for pair in report.epsilon_ladder.windows(2) {
            prop_assert!(pair[1].partial_integral >= pair[0].partial_integral - 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    // Construction is reproducible and kills every targeted odd term.
    #[test]
    fn spline_construction_parity(r in 1u32..=2, half_d in 0u32..=4) {
        let d = 2 * half_d + 1;
        let spec = SplineSpec::new(r, d).unwrap();
        let a = splines::compensated_spline(&spec).unwrap();
        let b = splines::compensated_spline(&spec).unwrap();
        prop_assert_eq!(&a.m, &b.m);
        prop_assert_eq!(&a.coeffs, &b.coeffs);

        let power_basis = a.expand().unwrap();
        for j in (1..2 * r as usize).step_by(2) {
            prop_assert!(power_basis[j] == num::BigRational::from_integer(0.into()),
                "t^{j} coefficient survives");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    // Quadrant-stored kernel against the naive complex lattice sum.
    #[test]
    fn kernel_matches_complex_sum(
        eps in 0.3f64..1.2,
        truncation in 4u32..=8,
        xs in proptest::collection::vec(-3.1f64..3.1, 3),
        ys in proptest::collection::vec(-3.1f64..3.1, 3),
    ) {
        let field = summability::sample_multiplier(&Generator::Abel { eps }, truncation).unwrap();
        let grid = summability::kernel(&field, &xs, &ys);
        let k = truncation as i64;
        for (ix, &x) in xs.iter().enumerate() {
            for (iy, &y) in ys.iter().enumerate() {
                let mut acc = Complex::new(0.0, 0.0);
                for k1 in -k..=k {
                    for k2 in -k..=k {
                        let phase = Complex::new(0.0, k1 as f64 * x + k2 as f64 * y).exp();
                        acc += field.value(k1, k2) * phase;
                    }
                }
                prop_assert!(acc.im.abs() <= 1e-9);
                let got = grid.values[ix][iy];
                prop_assert!((got - acc.re).abs() <= 1e-9 * (1.0 + acc.re.abs()),
                    "kernel {got} vs sum {}", acc.re);
            }
        }
    }
}
