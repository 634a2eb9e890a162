//! Terminating generalized hypergeometric sums.
//!
//! Every series handled here has a numerator parameter equal to `-N` for a
//! nonnegative integer `N`, so the sum has exactly `N + 1` terms. Terms are
//! generated by the ratio recurrence and accumulated with Kahan compensation
//! in index order.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::special::ComplexValue;

/// Cancellation threshold below which a sum is reported as low confidence.
pub const LOW_CONFIDENCE_RATIO: f64 = 1e-10;

/// A terminating `pFq` series.
#[derive(Debug, Clone, PartialEq)]
pub struct HypergeometricSpec {
    pub numerator: Vec<ComplexValue>,
    pub denominator: Vec<ComplexValue>,
    pub argument: ComplexValue,
    pub termination_order: usize,
}

impl HypergeometricSpec {
    pub fn new(
        numerator: Vec<ComplexValue>,
        denominator: Vec<ComplexValue>,
        argument: ComplexValue,
        termination_order: usize,
    ) -> Self {
        Self {
            numerator,
            denominator,
            argument,
            termination_order,
        }
    }

    fn check_terminates(&self) -> Result<()> {
        let target = -(self.termination_order as f64);
        if self
            .numerator
            .iter()
            .any(|p| p.im == 0.0 && p.re == target)
        {
            Ok(())
        } else {
            Err(Error::NotTerminating {
                order: self.termination_order,
            })
        }
    }
}

/// Value of a terminating sum together with the largest partial-sum magnitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSum {
    pub value: ComplexValue,
    pub max_partial: f64,
}

impl SeriesSum {
    /// True when the result is much smaller than the partial sums it came from.
    pub fn low_confidence(&self) -> bool {
        self.value.norm() < LOW_CONFIDENCE_RATIO * self.max_partial
    }
}

/// Scalars the series engine can sum over.
pub(crate) trait SeriesScalar:
    Copy
    + PartialEq
    + std::ops::Add<Output = Self>
    + std::ops::Sub<Output = Self>
    + std::ops::Mul<Output = Self>
    + std::ops::Div<Output = Self>
{
    const ZERO: Self;
    const ONE: Self;
    fn from_f64(x: f64) -> Self;
    fn magnitude(self) -> f64;
}

impl SeriesScalar for f64 {
    const ZERO: Self = 0.0;
    const ONE: Self = 1.0;
    fn from_f64(x: f64) -> Self {
        x
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl SeriesScalar for Complex64 {
    const ZERO: Self = Complex64::new(0.0, 0.0);
    const ONE: Self = Complex64::new(1.0, 0.0);
    fn from_f64(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn magnitude(self) -> f64 {
        self.norm()
    }
}

/// Term-ratio recurrence with Kahan accumulation; `n + 1` terms.
pub(crate) fn terminating_sum<T: SeriesScalar>(
    numerator: &[T],
    denominator: &[T],
    argument: T,
    n: usize,
) -> Result<(T, f64)> {
    let mut sum = T::ONE;
    let mut carry = T::ZERO;
    let mut term = T::ONE;
    let mut max_partial = 1.0f64;
    for k in 0..n {
        let kf = T::from_f64(k as f64);
        let mut num = argument / T::from_f64(k as f64 + 1.0);
        for &p in numerator {
            num = num * (p + kf);
        }
        let mut den = T::ONE;
        for &q in denominator {
            den = den * (q + kf);
        }
        if den == T::ZERO {
            return Err(Error::DenominatorPole { term: k });
        }
        term = term * num / den;
        if !term.magnitude().is_finite() {
            return Err(Error::Overflow { context: "hypergeometric term" });
        }
        let y = term - carry;
        let t = sum + y;
        carry = (t - sum) - y;
        sum = t;
        max_partial = max_partial.max(sum.magnitude()).max(term.magnitude());
    }
    Ok((sum, max_partial))
}

/// Sum a terminating series and report the cancellation diagnostic.
pub fn pfq_terminating_sum(spec: &HypergeometricSpec) -> Result<SeriesSum> {
    spec.check_terminates()?;
    let (value, max_partial) = terminating_sum(
        &spec.numerator,
        &spec.denominator,
        spec.argument,
        spec.termination_order,
    )?;
    Ok(SeriesSum { value, max_partial })
}

/// `pFq` for a terminating parameter set.
pub fn pfq_terminating(spec: &HypergeometricSpec) -> Result<ComplexValue> {
    pfq_terminating_sum(spec).map(|s| s.value)
}

/// `3F2(-n, upper2, upper3; lower1, lower2; 1)`.
pub fn hyp3f2_unit(
    n: usize,
    upper2: ComplexValue,
    upper3: ComplexValue,
    lower1: ComplexValue,
    lower2: ComplexValue,
) -> Result<ComplexValue> {
    terminating_sum(
        &[Complex64::new(-(n as f64), 0.0), upper2, upper3],
        &[lower1, lower2],
        Complex64::new(1.0, 0.0),
        n,
    )
    .map(|(v, _)| v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    /// Direct sum of Pochhammer ratios, no recurrence.
    fn direct_sum(num: &[Complex64], den: &[Complex64], z: Complex64, n: usize) -> Complex64 {
        let poch = |b: Complex64, k: usize| (0..k).fold(c(1.0), |acc, i| acc * (b + i as f64));
        (0..=n)
            .map(|k| {
                let fact: f64 = (1..=k).map(|i| i as f64).product();
                let top = num.iter().fold(c(1.0), |acc, p| acc * poch(*p, k));
                let bot = den.iter().fold(c(1.0), |acc, q| acc * poch(*q, k));
                top / bot * z.powu(k as u32) / fact
            })
            .sum()
    }

    #[test]
    fn zero_order_is_one() {
        let spec = HypergeometricSpec::new(vec![c(-0.0), c(3.3)], vec![c(0.7)], c(2.0), 0);
        assert_eq!(pfq_terminating(&spec).unwrap(), c(1.0));
    }

    #[test]
    fn two_term_2f1() {
        let spec = HypergeometricSpec::new(vec![c(-1.0), c(2.0)], vec![c(3.0)], c(0.5), 1);
        let v = pfq_terminating(&spec).unwrap();
        assert!((v - c(2.0 / 3.0)).norm() < 1e-15);
    }

    #[test]
    fn three_term_3f2() {
        // 1 - 2.4 + 150/105
        let want = 1.0 - 2.4 + 150.0 / 105.0;
        let v = hyp3f2_unit(2, c(4.0), c(1.5), c(2.0), c(2.5)).unwrap();
        assert!((v - c(want)).norm() < 1e-14, "{v}");
        assert!((want - 0.028_571_428_571_428_6).abs() < 1e-15);
    }

    #[test]
    fn unit_shape_examples() {
        assert_eq!(hyp3f2_unit(0, c(9.0), c(1.0), c(2.0), c(3.0)).unwrap(), c(1.0));
        // mu = 0.5, a = 1: 1 - (2 mu + 1) a / (2 * 1)
        let v = hyp3f2_unit(1, c(2.0), c(1.0), c(2.0), c(1.0)).unwrap();
        assert!(v.norm() < 1e-15);
    }

    #[test]
    fn non_terminating_is_rejected() {
        let spec = HypergeometricSpec::new(vec![c(-1.5), c(2.0)], vec![c(3.0)], c(0.5), 2);
        assert!(matches!(
            pfq_terminating(&spec),
            Err(Error::NotTerminating { .. })
        ));
    }

    #[test]
    fn denominator_pole_is_reported() {
        let spec = HypergeometricSpec::new(vec![c(-3.0), c(2.0)], vec![c(-1.0)], c(0.5), 3);
        assert!(matches!(
            pfq_terminating(&spec),
            Err(Error::DenominatorPole { term: 1 })
        ));
    }

    #[test]
    fn low_confidence_flag_on_cancellation() {
        let s = pfq_terminating_sum(&HypergeometricSpec::new(
            vec![c(-1.0), c(2.0)],
            vec![c(1.0)],
            c(0.5),
            1,
        ))
        .unwrap();
        assert!(s.low_confidence());
    }

    fn cplx() -> impl Strategy<Value = Complex64> {
        (0.1f64..4.0, -3.0f64..3.0).prop_map(|(r, i)| Complex64::new(r, i))
    }

    proptest! {
        #[test]
        fn matches_direct_pochhammer_sum(n in 0usize..12, u2 in cplx(), u3 in cplx(), l1 in cplx(), l2 in cplx()) {
            let v = hyp3f2_unit(n, u2, u3, l1, l2).unwrap();
            let w = direct_sum(&[c(-(n as f64)), u2, u3], &[l1, l2], c(1.0), n);
            let scale = pfq_terminating_sum(&HypergeometricSpec::new(
                vec![c(-(n as f64)), u2, u3], vec![l1, l2], c(1.0), n)).unwrap().max_partial;
            prop_assert!((v - w).norm() <= 1e-12 * scale);
        }

        #[test]
        fn hyp3f2_is_pfq(n in 0usize..10, u2 in cplx(), u3 in cplx(), l1 in cplx(), l2 in cplx()) {
            let v = hyp3f2_unit(n, u2, u3, l1, l2).unwrap();
            let w = pfq_terminating(&HypergeometricSpec::new(
                vec![c(-(n as f64)), u2, u3], vec![l1, l2], c(1.0), n)).unwrap();
            prop_assert_eq!(v, w);
        }

        #[test]
        fn extra_terms_vanish(n in 0usize..10, u2 in cplx(), l1 in cplx(), z in cplx()) {
            // Forcing the recurrence past the terminating index only adds zeros.
            let spec = HypergeometricSpec::new(vec![c(-(n as f64)), u2], vec![l1], z, n);
            let longer = HypergeometricSpec { termination_order: n + 3, numerator: vec![c(-(n as f64)), u2, c(-((n + 3) as f64))], denominator: vec![l1, c(-((n + 3) as f64))], argument: z };
            let a = pfq_terminating(&spec).unwrap();
            let b = pfq_terminating(&longer).unwrap();
            let scale = pfq_terminating_sum(&spec).unwrap().max_partial;
            prop_assert!((a - b).norm() <= 1e-13 * scale);
        }

        #[test]
        fn conjugation(n in 0usize..10, u2 in cplx(), u3 in cplx(), l1 in cplx(), l2 in cplx()) {
            let a = hyp3f2_unit(n, u2, u3, l1, l2).unwrap().conj();
            let b = hyp3f2_unit(n, u2.conj(), u3.conj(), l1.conj(), l2.conj()).unwrap();
            let tol = 4.0 * f64::EPSILON * a.norm().max(1.0) * (n as f64 + 1.0);
            prop_assert!((a - b).norm() <= tol, "{} vs {}", a, b);
        }
    }
}
