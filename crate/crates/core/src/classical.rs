//! Univariate Jacobi, Gegenbauer and continuous Hahn polynomials.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hypergeometric::{hyp3f2_unit, terminating_sum};
use crate::special::{
    exp_checked, factorial, generalized_binomial, ln_gamma_pos, pochhammer, pochhammer_real,
    ComplexValue,
};

/// Degree and parameter of `C_n^(λ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GegenbauerParams {
    pub degree: usize,
    pub lambda: f64,
}

impl GegenbauerParams {
    pub fn new(degree: usize, lambda: f64) -> Result<Self> {
        check_lambda(lambda)?;
        Ok(Self { degree, lambda })
    }
}

pub(crate) fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > -0.5) || lambda == 0.0 || !lambda.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "gegenbauer lambda must be > -1/2 and nonzero, got {lambda}"
        )));
    }
    Ok(())
}

/// Parameters `(a, b, c, d)` of `p_n(x; a, b, c, d)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HahnParameters {
    pub a: ComplexValue,
    pub b: ComplexValue,
    pub c: ComplexValue,
    pub d: ComplexValue,
}

impl HahnParameters {
    pub fn new(a: ComplexValue, b: ComplexValue, c: ComplexValue, d: ComplexValue) -> Result<Self> {
        if [a, b, c, d].iter().any(|p| !(p.re > 0.0)) {
            return Err(Error::InvalidParameter(
                "continuous Hahn parameters need positive real parts".into(),
            ));
        }
        Ok(Self { a, b, c, d })
    }

    /// Skips the positivity check; for evaluating the polynomial outside the
    /// parameter range where the orthogonality weight is defined.
    pub fn unchecked(a: ComplexValue, b: ComplexValue, c: ComplexValue, d: ComplexValue) -> Self {
        Self { a, b, c, d }
    }

    /// Real parameters in the order `(a, b, c, d)`.
    pub fn real(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let r = |x: f64| Complex64::new(x, 0.0);
        Self::new(r(a), r(b), r(c), r(d))
    }
}

/// `P_n^(α,β)(x)` from the explicit binomial sum.
pub fn jacobi(n: usize, alpha: f64, beta: f64, x: f64) -> Result<f64> {
    if !(alpha > -1.0 && beta > -1.0) {
        return Err(Error::InvalidParameter(format!(
            "jacobi requires alpha, beta > -1, got ({alpha}, {beta})"
        )));
    }
    let nf = n as f64;
    let sum: f64 = (0..=n)
        .map(|k| {
            generalized_binomial(nf + alpha, k)
                * generalized_binomial(nf + beta, n - k)
                * (x + 1.0).powi(k as i32)
                * (x - 1.0).powi((n - k) as i32)
        })
        .sum();
    Ok(sum * 0.5f64.powi(n as i32))
}

/// `C_n^(λ)(x) = (2λ)_n / n! · 2F1(-n, n+2λ; λ+1/2; (1-x)/2)`.
pub fn gegenbauer(n: usize, lambda: f64, x: ComplexValue) -> Result<ComplexValue> {
    check_lambda(lambda)?;
    if n == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let nf = n as f64;
    let (series, _) = terminating_sum(
        &[Complex64::new(-nf, 0.0), Complex64::new(nf + 2.0 * lambda, 0.0)],
        &[Complex64::new(lambda + 0.5, 0.0)],
        (1.0 - x) * 0.5,
        n,
    )?;
    Ok(series * (pochhammer_real(2.0 * lambda, n)? / factorial(n)))
}

/// `C_n^(λ)(x)` for real `x` by the three-term recurrence
/// `(k+1) C_{k+1} = 2(k+λ) x C_k - (k+2λ-1) C_{k-1}`.
pub fn gegenbauer_real(n: usize, lambda: f64, x: f64) -> Result<f64> {
    check_lambda(lambda)?;
    let (mut prev, mut cur) = (1.0, 2.0 * lambda * x);
    if n == 0 {
        return Ok(prev);
    }
    for k in 1..n {
        let kf = k as f64;
        let next = (2.0 * (kf + lambda) * x * cur - (kf + 2.0 * lambda - 1.0) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// `h_n^λ = ∫ (1-x²)^(λ-1/2) [C_n^(λ)]² dx`.
pub fn gegenbauer_norm(n: usize, lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    let nf = n as f64;
    // (2λ)_n may be negative for -1/2 < λ < 0; carry its sign separately.
    let poch = pochhammer_real(2.0 * lambda, n)?;
    let gamma_lambda_sign = if lambda > 0.0 { 1.0 } else { -1.0 };
    let log_mag = poch.abs().ln() + ln_gamma_pos(lambda + 0.5)? + 0.5 * PI.ln()
        - ln_gamma_pos(nf + 1.0)?
        - (nf + lambda).abs().ln()
        - ln_gamma_abs(lambda)?;
    let sign = poch.signum() * gamma_lambda_sign * (nf + lambda).signum();
    let v = exp_checked(Complex64::new(log_mag, 0.0), "gegenbauer_norm")?.re;
    Ok(sign * v)
}

fn ln_gamma_abs(x: f64) -> Result<f64> {
    if x > 0.0 {
        return ln_gamma_pos(x);
    }
    // -1 < x < 0: Γ(x) = Γ(x+1)/x
    Ok(ln_gamma_pos(x + 1.0)? - x.abs().ln())
}

/// `p_n(x; a, b, c, d) = iⁿ (a+c)_n (a+d)_n / n! · 3F2(-n, n+a+b+c+d-1, a+ix; a+c, a+d; 1)`.
pub fn continuous_hahn(n: usize, x: ComplexValue, params: &HahnParameters) -> Result<ComplexValue> {
    let HahnParameters { a, b, c, d } = *params;
    let i = Complex64::new(0.0, 1.0);
    let nf = n as f64;
    let series = hyp3f2_unit(n, nf + a + b + c + d - 1.0, a + i * x, a + c, a + d)?;
    let prefactor = i.powu(n as u32) * pochhammer(a + c, n)? * pochhammer(a + d, n)? / factorial(n);
    Ok(prefactor * series)
}

/// Norm of `p_n(·; a1, a2, a2, a1)` under the weight `|Γ(a1+ix) Γ(a2+ix)|²`.
pub fn hahn_orthogonality_constant(n: usize, a1: f64, a2: f64) -> Result<f64> {
    if !(a1 > 0.0 && a2 > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "hahn constant needs a1, a2 > 0, got ({a1}, {a2})"
        )));
    }
    let nf = n as f64;
    let s = a1 + a2;
    let lg = PI.ln() + ln_gamma_pos(2.0 * a1 + nf)? + ln_gamma_pos(2.0 * a2 + nf)?
        + 2.0 * ln_gamma_pos(s + nf)?
        - ln_gamma_pos(nf + 1.0)?
        - (nf + s - 0.5).ln()
        - ln_gamma_pos(2.0 * s + nf - 1.0)?;
    Ok(exp_checked(Complex64::new(lg, 0.0), "hahn_orthogonality_constant")?.re)
}

/// The Hahn weight `Γ(a1+ix) Γ(a1-ix) Γ(a2+ix) Γ(a2-ix)` at real `x`.
pub fn hahn_weight(x: f64, a1: f64, a2: f64) -> Result<f64> {
    use crate::special::log_gamma;
    let lg = 2.0 * log_gamma(Complex64::new(a1, x))?.re + 2.0 * log_gamma(Complex64::new(a2, x))?.re;
    Ok(exp_checked(Complex64::new(lg, 0.0), "hahn_weight")?.re)
}
