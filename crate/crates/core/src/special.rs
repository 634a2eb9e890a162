//! Complex gamma, beta, Pochhammer and generalized binomial.
//!
//! Log-gamma uses the 15-term Lanczos sum with `g = 607/128`, reflected
//! through `Γ(z)Γ(1-z) = π / sin(πz)` for `Re z < 1/2`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Double-precision complex scalar used throughout the crate.
pub type ComplexValue = Complex64;

const LANCZOS_G: f64 = 607.0 / 128.0;
const LANCZOS_COEF: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_747,
    -0.491_913_816_097_620_2,
    0.339_946_499_848_118_9e-4,
    0.465_236_289_270_485_8e-4,
    -0.983_744_753_048_795_6e-4,
    0.158_088_703_224_912_5e-3,
    -0.210_264_441_724_104_9e-3,
    0.217_439_618_115_212_6e-3,
    -0.164_318_106_536_763_9e-3,
    0.844_182_239_838_527_4e-4,
    -0.261_908_384_015_814_1e-4,
    0.368_991_826_595_316_2e-5,
];
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
const LN_PI: f64 = 1.144_729_885_849_400_2;

/// Largest `x` with `exp(x)` finite.
pub(crate) const MAX_EXP_ARG: f64 = 709.78;

/// Rising factorial `(base)_order = base (base+1) ... (base+order-1)`.
pub fn pochhammer(base: ComplexValue, order: usize) -> Result<ComplexValue> {
    let mut acc = Complex64::new(1.0, 0.0);
    for k in 0..order {
        acc *= base + k as f64;
    }
    if !(acc.re.is_finite() && acc.im.is_finite()) {
        return Err(Error::Overflow { context: "pochhammer" });
    }
    Ok(acc)
}

/// Real rising factorial.
pub fn pochhammer_real(base: f64, order: usize) -> Result<f64> {
    let acc: f64 = (0..order).map(|k| base + k as f64).product();
    if !acc.is_finite() {
        return Err(Error::Overflow { context: "pochhammer" });
    }
    Ok(acc)
}

fn is_pole(z: ComplexValue) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

fn lanczos_log_gamma(z: ComplexValue) -> ComplexValue {
    // Valid for Re z >= 1/2.
    let mut series = Complex64::new(LANCZOS_COEF[0], 0.0);
    for (j, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        series += c / (z + j as f64);
    }
    let t = z + (LANCZOS_G + 0.5);
    (z + 0.5) * t.ln() - t + LN_SQRT_2PI + (series / z).ln()
}

/// `log Γ(z)`, reflected for `Re z < 1/2`.
///
/// The imaginary part is determined only modulo `2π`; callers exponentiate.
pub fn log_gamma(z: ComplexValue) -> Result<ComplexValue> {
    if is_pole(z) {
        return Err(Error::Pole { re: z.re, im: z.im });
    }
    if z.im == 0.0 && z.re > 0.0 {
        return Ok(Complex64::new(log_gamma_real_positive(z.re), 0.0));
    }
    if z.re < 0.5 {
        // log Γ(z) = log π - log sin(πz) - log Γ(1-z)
        let s = (z * PI).sin();
        let lg = lanczos_log_gamma(1.0 - z);
        Ok(Complex64::new(LN_PI, 0.0) - s.ln() - lg)
    } else {
        Ok(lanczos_log_gamma(z))
    }
}

fn log_gamma_real_positive(x: f64) -> f64 {
    if x >= 0.5 {
        return lanczos_log_gamma(Complex64::new(x, 0.0)).re;
    }
    // 0 < x < 1/2: Γ(x) Γ(1-x) = π / sin(πx), all factors positive
    LN_PI - (PI * x).sin().ln() - lanczos_log_gamma(Complex64::new(1.0 - x, 0.0)).re
}

/// Real `log|Γ(x)|` for `x > 0`.
pub fn ln_gamma_pos(x: f64) -> Result<f64> {
    if x <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "ln_gamma_pos requires x > 0, got {x}"
        )));
    }
    Ok(log_gamma_real_positive(x))
}

/// Exponentiate a complex logarithm, turning overflow into an error.
pub(crate) fn exp_checked(log_value: ComplexValue, context: &'static str) -> Result<ComplexValue> {
    if log_value.re > MAX_EXP_ARG {
        return Err(Error::Overflow { context });
    }
    let out = log_value.exp();
    if log_value.im == 0.0 {
        return Ok(Complex64::new(out.re, 0.0));
    }
    Ok(out)
}

/// `Γ(z)` on the principal sheet.
pub fn gamma(z: ComplexValue) -> Result<ComplexValue> {
    exp_checked(log_gamma(z)?, "gamma")
}

/// `B(a, b) = Γ(a) Γ(b) / Γ(a+b)`, assembled in log space.
pub fn beta(a: ComplexValue, b: ComplexValue) -> Result<ComplexValue> {
    let lb = log_gamma(a)? + log_gamma(b)? - log_gamma(a + b)?;
    exp_checked(lb, "beta")
}

/// `binom(alpha, k) = alpha (alpha-1) ... (alpha-k+1) / k!` for real `alpha`.
pub fn generalized_binomial(alpha: f64, k: usize) -> f64 {
    let mut acc = 1.0;
    for i in 0..k {
        acc *= (alpha - i as f64) / (i + 1) as f64;
    }
    acc
}

/// `n!` as a float.
pub fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn pochhammer_values() {
        assert_eq!(pochhammer(c(0.3, 1.2), 0).unwrap(), c(1.0, 0.0));
        assert_eq!(pochhammer(c(3.0, 0.0), 4).unwrap(), c(360.0, 0.0));
        assert_eq!(pochhammer(c(0.5, 0.0), 2).unwrap(), c(0.75, 0.0));
        assert!(matches!(
            pochhammer(c(1e300, 0.0), 3),
            Err(Error::Overflow { .. })
        ));
    }

    #[test]
    fn log_gamma_values() {
        assert!(log_gamma(c(1.0, 0.0)).unwrap().re.abs() < 1e-15);
        assert_relative_eq!(log_gamma(c(5.0, 0.0)).unwrap().re, 24f64.ln(), max_relative = 1e-14);
        assert_relative_eq!(log_gamma(c(0.5, 0.0)).unwrap().re, 0.572_364_942_924_700_1, max_relative = 1e-14);
    }

    #[test]
    fn poles_are_errors() {
        for z in [0.0, -1.0, -2.0, -17.0] {
            assert!(matches!(gamma(c(z, 0.0)), Err(Error::Pole { .. })));
        }
        assert!(gamma(c(-1.0, 1e-9)).is_ok());
    }

    #[test]
    fn gamma_overflow_is_an_error() {
        assert!(matches!(gamma(c(200.0, 0.0)), Err(Error::Overflow { .. })));
        assert!(gamma(c(170.0, 0.0)).is_ok());
    }

    #[test]
    fn gamma_against_high_precision_reference() {
        // 50-digit reference values
        let cases = [
            (c(1.0, 1.0), c(0.498_015_668_118_356_04, -0.154_949_828_301_810_69)),
            (c(0.5, 3.0), c(0.021_445_670_552_430_646, 0.006_865_364_837_261_678)),
            (c(-2.5, 0.7), c(-0.159_818_716_362_932_93, -0.157_566_549_081_515_28)),
            (c(7.25, -4.5), c(-244.703_444_024_693_35, -144.229_824_635_276_61)),
            (c(0.1, 0.0), c(9.513_507_698_668_731, 0.0)),
        ];
        for (z, want) in cases {
            let got = gamma(z).unwrap();
            assert!(rel(got, want) < 1e-13, "z={z}: {got} vs {want}");
        }
    }

    #[test]
    fn gamma_real_argument_has_zero_imaginary_part() {
        for x in [0.1, 0.5, 1.0, 2.75, 10.0, 33.3] {
            assert_eq!(gamma(c(x, 0.0)).unwrap().im, 0.0);
        }
        assert_relative_eq!(gamma(c(0.5, 0.0)).unwrap().re, PI.sqrt(), max_relative = 1e-14);
    }

    #[test]
    fn beta_values() {
        assert_relative_eq!(beta(c(1.0, 0.0), c(1.0, 0.0)).unwrap().re, 1.0, max_relative = 1e-14);
        assert_relative_eq!(beta(c(2.0, 0.0), c(3.0, 0.0)).unwrap().re, 1.0 / 12.0, max_relative = 1e-14);
        assert_relative_eq!(beta(c(0.5, 0.0), c(0.5, 0.0)).unwrap().re, PI, max_relative = 1e-14);
    }

    #[test]
    fn binomials() {
        assert_eq!(generalized_binomial(3.7, 0), 1.0);
        assert_relative_eq!(generalized_binomial(4.0, 2), 6.0, max_relative = 1e-15);
        assert_relative_eq!(generalized_binomial(2.5, 2), 1.875, max_relative = 1e-15);
    }

    fn away_from_poles() -> impl Strategy<Value = Complex64> {
        (-10.0f64..10.0, -10.0f64..10.0)
            .prop_filter("near pole", |(re, im)| {
                let d = (re - re.round()).abs().hypot(*im);
                re.hypot(*im) <= 10.0 && !(re.round() <= 0.0 && d < 0.05)
            })
            .prop_map(|(re, im)| Complex64::new(re, im))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn reflection(z in away_from_poles()) {
            let lhs = gamma(z).unwrap() * gamma(1.0 - z).unwrap() * (z * PI).sin() / PI;
            prop_assert!((lhs - 1.0).norm() < 1e-12, "{}", lhs);
        }

        #[test]
        fn recurrence(z in away_from_poles()) {
            let lhs = gamma(z + 1.0).unwrap();
            let rhs = z * gamma(z).unwrap();
            prop_assert!(rel(lhs, rhs) < 1e-13, "{} vs {}", lhs, rhs);
        }

        #[test]
        fn conjugate_symmetry(z in away_from_poles()) {
            let a = gamma(z.conj()).unwrap();
            let b = gamma(z).unwrap().conj();
            let ulps = |x: f64, y: f64| (x - y).abs() <= 4.0 * f64::EPSILON * x.abs().max(y.abs());
            prop_assert!(ulps(a.re, b.re) && ulps(a.im, b.im), "{} vs {}", a, b);
        }

        #[test]
        fn gamma_pair_is_positive(a in 0.01f64..8.0, x in -20.0f64..20.0) {
            let v = gamma(c(a, x)).unwrap() * gamma(c(a, -x)).unwrap();
            prop_assert!(v.re > 0.0);
            prop_assert!(v.im.abs() <= 1e-14 * v.norm());
        }

        #[test]
        fn pochhammer_split(re in -5.0f64..5.0, im in -3.0f64..3.0, m in 0usize..8, n in 0usize..8) {
            let b = c(re, im);
            let lhs = pochhammer(b, m + n).unwrap();
            let rhs = pochhammer(b, m).unwrap() * pochhammer(b + m as f64, n).unwrap();
            prop_assert!((lhs - rhs).norm() <= 1e-13 * lhs.norm().max(1e-300) + 1e-300);
        }
    }
}
