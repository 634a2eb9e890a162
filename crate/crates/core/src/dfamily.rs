//! The function family `_rD_n(x; a1, a2)` obtained from the Parseval
//! pairing of two tanh-family transforms with the shared weight
//! `μ = a1 + a2 - 1/2`.

use num_complex::Complex64;

use crate::ball::{ball_norm, BallParams, MultiIndex, SignedLog};
use crate::classical::{continuous_hahn, HahnParameters};
use crate::error::{Error, Result};
use crate::hypergeometric::hyp3f2_unit;
use crate::special::{factorial, gamma, ln_gamma_pos, pochhammer_real, ComplexValue};

/// `(a1, a2, n)` with `a1, a2 > 0` and `a1 + a2 != 1/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct DParams {
    pub a1: f64,
    pub a2: f64,
    pub n: MultiIndex,
}

impl DParams {
    pub fn new(a1: f64, a2: f64, n: MultiIndex) -> Result<Self> {
        check_pair(a1, a2)?;
        Ok(Self { a1, a2, n })
    }

    pub fn r(&self) -> usize {
        self.n.dim()
    }

    /// `|a| = a1 + a2`.
    pub fn abs_a(&self) -> f64 {
        self.a1 + self.a2
    }

    /// The coupled ball weight `μ = |a| - 1/2`.
    pub fn mu(&self) -> f64 {
        self.abs_a() - 0.5
    }

    /// The same index with `a1` and `a2` exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            a1: self.a2,
            a2: self.a1,
            n: self.n.clone(),
        }
    }

    /// `a_k + |n^{j+1}|/2 + (r-j)/4` for `k = 1, 2`.
    fn shifted(&self, j: usize) -> (f64, f64) {
        let s = self.n.tail_sum(j + 1) as f64 / 2.0 + (self.r() - j) as f64 / 4.0;
        (self.a1 + s, self.a2 + s)
    }

    /// `λ_j` of the coupled ball basis.
    fn lambda(&self, j: usize) -> f64 {
        self.mu() + self.n.tail_sum(j + 1) as f64 + (self.r() - j) as f64 / 2.0
    }
}

fn check_pair(a1: f64, a2: f64) -> Result<()> {
    if !(a1 > 0.0 && a2 > 0.0 && a1.is_finite() && a2.is_finite()) {
        return Err(Error::InvalidParameter(format!("D-family needs a1, a2 > 0, got ({a1}, {a2})")));
    }
    if a1 + a2 == 0.5 {
        return Err(Error::InvalidParameter("D-family needs a1 + a2 != 1/2".into()));
    }
    Ok(())
}

fn check_dims(x: &[ComplexValue], params: &DParams) -> Result<()> {
    if x.len() != params.r() {
        return Err(Error::InvalidParameter(format!(
            "{} coordinates given for r = {}",
            x.len(),
            params.r()
        )));
    }
    Ok(())
}

/// `Π_j Γ(A1 - x_j/2) Γ(A1 + x_j/2) 3F2(-n_j, n_j + 2λ_j, A1 + x_j/2; λ_j + 1/2, 2 A1; 1)`
/// with `A1 = a1 + |n^{j+1}|/2 + (r-j)/4`.
pub fn d_family_eval(x: &[ComplexValue], params: &DParams) -> Result<ComplexValue> {
    check_dims(x, params)?;
    let mut acc = Complex64::new(1.0, 0.0);
    for (j, &xj) in (1..=params.r()).zip(x) {
        let nj = params.n.get(j);
        let (big_a1, _) = params.shifted(j);
        let lambda = params.lambda(j);
        let plus = big_a1 + xj / 2.0;
        let minus = big_a1 - xj / 2.0;
        let c = |v: f64| Complex64::new(v, 0.0);
        let series = hyp3f2_unit(nj, c(nj as f64 + 2.0 * lambda), plus, c(lambda + 0.5), c(2.0 * big_a1))?;
        acc *= gamma(minus)? * gamma(plus)? * series;
    }
    Ok(acc)
}

/// The same product written with `p_{n_j}(-i x_j/2; A1, A2, A2, A1)`.
pub fn d_family_eval_hahn(x: &[ComplexValue], params: &DParams) -> Result<ComplexValue> {
    check_dims(x, params)?;
    let i = Complex64::new(0.0, 1.0);
    let mut acc = Complex64::new(1.0, 0.0);
    for (j, &xj) in (1..=params.r()).zip(x) {
        let nj = params.n.get(j);
        let (big_a1, big_a2) = params.shifted(j);
        let c = |v: f64| Complex64::new(v, 0.0);
        let hahn = HahnParameters::unchecked(c(big_a1), c(big_a2), c(big_a2), c(big_a1));
        let p = continuous_hahn(nj, -i * xj / 2.0, &hahn)?;
        let prefactor = factorial(nj) * i.powu(nj as u32).inv()
            / (pochhammer_real(2.0 * big_a1, nj)? * pochhammer_real(params.lambda(j) + 0.5, nj)?);
        acc *= prefactor * gamma(big_a1 - xj / 2.0)? * gamma(big_a1 + xj / 2.0)? * p;
    }
    Ok(acc)
}

fn constant_with_exponent(n: &MultiIndex, a1: f64, a2: f64, two_exp: f64) -> Result<f64> {
    check_pair(a1, a2)?;
    let r = n.dim();
    let rf = r as f64;
    let abs_a = a1 + a2;
    let mut acc = SignedLog::one();
    acc.mul_log(rf * (2.0 * std::f64::consts::PI).ln());
    acc.mul_log(two_exp * std::f64::consts::LN_2);
    acc.mul(ball_norm(n, BallParams::new(abs_a - 0.5)?)?);
    for j in 1..=r {
        let nj = n.get(j);
        let tail = n.tail_sum(j + 1) as f64;
        let rj = (r - j) as f64;
        acc.mul_log(2.0 * factorial(nj).ln());
        acc.mul_log(ln_gamma_pos(tail + 2.0 * a1 + rj / 2.0)?);
        acc.mul_log(ln_gamma_pos(tail + 2.0 * a2 + rj / 2.0)?);
        acc.mul_log(-2.0 * tail * std::f64::consts::LN_2);
        let poch = pochhammer_real(2.0 * tail + 2.0 * abs_a + rj - 1.0, nj)?;
        acc.div(poch * poch);
    }
    acc.value("d_orthogonality_constant")
}

/// `∫ _rD_n(ix; a1, a2) _rD_n(-ix; a2, a1) dx` in the form
/// `(2π)^r 2^(-2r|a| + r + 1) h_n^(|a|-1/2) Π_j (n_j!)² Γ(|n^{j+1}| + 2a1 + (r-j)/2) Γ(|n^{j+1}| + 2a2 + (r-j)/2)
///  / (2^(2|n^{j+1}|) ((2|n^{j+1}| + 2|a| + r - j - 1)_{n_j})²)`.
///
/// This form is exact for `r <= 2`. For `r >= 3` it differs from the pairing
/// by `2^(r + 1 - r(5-r)/2)`; see [`d_orthogonality_constant_parseval`].
pub fn d_orthogonality_constant(n: &MultiIndex, a1: f64, a2: f64) -> Result<f64> {
    let rf = n.dim() as f64;
    constant_with_exponent(n, a1, a2, -2.0 * rf * (a1 + a2) + rf + 1.0)
}

/// The pairing constant for every `r`, with power of two `-2r|a| + r(5-r)/2`.
pub fn d_orthogonality_constant_parseval(n: &MultiIndex, a1: f64, a2: f64) -> Result<f64> {
    let rf = n.dim() as f64;
    constant_with_exponent(n, a1, a2, -2.0 * rf * (a1 + a2) + rf * (5.0 - rf) / 2.0)
}

/// The univariate constant in gamma form,
/// `2π n! Γ(2a1) Γ(2a2) Γ(|a|)² / ((n + |a| - 1/2) Γ(2|a| + n - 1))`.
pub fn d_constant_univariate(n: usize, a1: f64, a2: f64) -> Result<f64> {
    check_pair(a1, a2)?;
    let nf = n as f64;
    let s = a1 + a2;
    let mut acc = SignedLog::one();
    acc.mul_log((2.0 * std::f64::consts::PI).ln() + ln_gamma_pos(nf + 1.0)?);
    acc.mul_log(ln_gamma_pos(2.0 * a1)? + ln_gamma_pos(2.0 * a2)? + 2.0 * ln_gamma_pos(s)?);
    acc.div(nf + s - 0.5);
    acc.mul_log(-ln_gamma_pos(2.0 * s + nf - 1.0)?);
    acc.value("d_constant_univariate")
}

/// The univariate constant in norm form,
/// `2π (n!)² Γ(2a1) Γ(2a2) h_n^(|a|-1/2) / (2^(2(|a|-1)) ((2|a|-1)_n)²)`.
pub fn d_constant_univariate_norm_form(n: usize, a1: f64, a2: f64) -> Result<f64> {
    check_pair(a1, a2)?;
    let s = a1 + a2;
    let h = ball_norm(&MultiIndex::new(vec![n])?, BallParams::new(s - 0.5)?)?;
    let poch = pochhammer_real(2.0 * s - 1.0, n)?;
    let mut acc = SignedLog::one();
    acc.mul_log((2.0 * std::f64::consts::PI).ln() + 2.0 * factorial(n).ln());
    acc.mul_log(ln_gamma_pos(2.0 * a1)? + ln_gamma_pos(2.0 * a2)?);
    acc.mul(h);
    acc.mul_log(-2.0 * (s - 1.0) * std::f64::consts::LN_2);
    acc.div(poch * poch);
    acc.value("d_constant_univariate_norm_form")
}

/// The bivariate constant
/// `Γ(2a1) Γ(2a2) Γ(2a1 + n2 + 1/2) Γ(2a2 + n2 + 1/2) 4π² (n1!)² (n2!)² h_{n1,n2}
///  / (2^(2n2 + 4a1 + 4a2 - 3) ((2(n2 + |a|))_{n1})² ((2|a| - 1)_{n2})²)`.
pub fn d_constant_bivariate(n1: usize, n2: usize, a1: f64, a2: f64) -> Result<f64> {
    check_pair(a1, a2)?;
    let s = a1 + a2;
    let n2f = n2 as f64;
    let h = ball_norm(&MultiIndex::new(vec![n1, n2])?, BallParams::new(s - 0.5)?)?;
    let p1 = pochhammer_real(2.0 * (n2f + s), n1)?;
    let p2 = pochhammer_real(2.0 * s - 1.0, n2)?;
    let mut acc = SignedLog::one();
    acc.mul_log(ln_gamma_pos(2.0 * a1)? + ln_gamma_pos(2.0 * a2)?);
    acc.mul_log(ln_gamma_pos(2.0 * a1 + n2f + 0.5)? + ln_gamma_pos(2.0 * a2 + n2f + 0.5)?);
    acc.mul_log((4.0 * std::f64::consts::PI * std::f64::consts::PI).ln());
    acc.mul_log(2.0 * (factorial(n1).ln() + factorial(n2).ln()));
    acc.mul(h);
    acc.mul_log(-(2.0 * n2f + 4.0 * a1 + 4.0 * a2 - 3.0) * std::f64::consts::LN_2);
    acc.div(p1 * p1);
    acc.div(p2 * p2);
    acc.value("d_constant_bivariate")
}

/// `_rD_n(ix; a1, a2) · _rD_m(-ix; a2, a1)` at real `x`.
pub fn d_pairing_integrand(x: &[f64], n: &DParams, m: &MultiIndex) -> Result<ComplexValue> {
    let plus: Vec<ComplexValue> = x.iter().map(|&v| Complex64::new(0.0, v)).collect();
    let minus: Vec<ComplexValue> = x.iter().map(|&v| Complex64::new(0.0, -v)).collect();
    let other = DParams::new(n.a2, n.a1, m.clone())?;
    Ok(d_family_eval(&plus, n)? * d_family_eval(&minus, &other)?)
}
