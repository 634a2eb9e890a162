//! The family `f_r(x; n, a, μ) = Π_j sech(x_j)^(2a + (r-j)/2) P_n^μ(υ(x))` and
//! its Fourier transform `∫ e^{-iξ·x} f_r(x) dx`.
//!
//! `υ` maps `R^r` onto the open unit ball by
//! `υ_j = tanh x_j · Π_{k<j} sech x_k`, so that `1 - |υ|² = Π_j sech² x_j`.
//! The transform is available in closed form as a product of beta functions
//! and unit-argument `3F2` sums, through either one-variable peeling
//! recursion, and through continuous Hahn polynomials.

use std::f64::consts::LN_2;

use num_complex::Complex64;

use crate::ball::{basis_eval_coords, check_family_mu, BallPoint, MultiIndex};
use crate::classical::{continuous_hahn, gegenbauer_real, HahnParameters};
use crate::error::{Error, Result};
use crate::hypergeometric::{hyp3f2_unit, terminating_sum};
use crate::special::{beta, factorial, log_gamma, pochhammer, pochhammer_real, ComplexValue};

/// Largest accepted real part of the log of the transform's scale factor.
pub const LOG_SCALE_LIMIT: f64 = 700.0;

/// `(a, μ, n)` with `a > 0`, `μ > -1/2`, `μ != 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyParams {
    pub a: f64,
    pub mu: f64,
    pub n: MultiIndex,
}

impl FamilyParams {
    pub fn new(a: f64, mu: f64, n: MultiIndex) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::InvalidParameter(format!("family needs a > 0, got {a}")));
        }
        check_family_mu(mu)?;
        Ok(Self { a, mu, n })
    }

    pub fn r(&self) -> usize {
        self.n.dim()
    }

    /// `a + |n^{j+1}|/2 + (r-j)/4`, the real part of every beta argument of factor `j`.
    pub fn shifted_a(&self, j: usize) -> f64 {
        self.a + self.n.tail_sum(j + 1) as f64 / 2.0 + (self.r() - j) as f64 / 4.0
    }

    /// `λ_j = μ + |n^{j+1}| + (r-j)/2`.
    pub fn lambda(&self, j: usize) -> f64 {
        self.mu + self.n.tail_sum(j + 1) as f64 + (self.r() - j) as f64 / 2.0
    }
}

/// `ξ = (ξ_1, ..., ξ_r)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyVector(Vec<f64>);

impl FrequencyVector {
    pub fn new(xi: Vec<f64>) -> Result<Self> {
        if xi.is_empty() || xi.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!("bad frequency vector {xi:?}")));
        }
        Ok(Self(xi))
    }

    pub fn components(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

/// `ln cosh x` without overflow.
pub(crate) fn ln_cosh(x: f64) -> f64 {
    let ax = x.abs();
    ax + (-2.0 * ax).exp().ln_1p() - LN_2
}

/// `sech(x)^power` for `power >= 0`.
pub(crate) fn sech_pow(x: f64, power: f64) -> f64 {
    (-power * ln_cosh(x)).exp()
}

pub(crate) fn upsilon_into(x: &[f64], out: &mut Vec<f64>) {
    out.clear();
    let mut radius = 1.0;
    for &xj in x {
        out.push(xj.tanh() * radius);
        radius /= xj.cosh();
    }
}

/// The map `υ` from `R^r` into the open unit ball.
pub fn upsilon_map(x: &[f64]) -> BallPoint {
    let mut out = Vec::with_capacity(x.len());
    upsilon_into(x, &mut out);
    BallPoint::new(out).expect("tanh map stays inside the ball")
}

fn check_dims(x_len: usize, params: &FamilyParams) -> Result<()> {
    if x_len != params.r() {
        return Err(Error::InvalidParameter(format!(
            "{x_len} coordinates given for r = {}",
            params.r()
        )));
    }
    Ok(())
}

/// `f_r(x; n, a, μ)` through the ball basis at `υ(x)`.
pub fn f_r_eval(x: &[f64], params: &FamilyParams) -> Result<f64> {
    check_dims(x.len(), params)?;
    let mut ups = Vec::with_capacity(x.len());
    f_r_eval_with(x, params, &mut ups)
}

/// Power of `sech(x_j)` in the envelope of `f_r`, for 0-based `axis`.
pub(crate) fn envelope_power(params: &FamilyParams, axis: usize) -> f64 {
    2.0 * params.a + (params.r() - axis - 1) as f64 / 2.0
}

/// As [`f_r_eval`] with a caller-provided scratch buffer.
pub(crate) fn f_r_eval_with(x: &[f64], params: &FamilyParams, scratch: &mut Vec<f64>) -> Result<f64> {
    let mut log_envelope = 0.0;
    for (j, &xj) in x.iter().enumerate() {
        log_envelope -= envelope_power(params, j) * ln_cosh(xj);
    }
    if log_envelope < -745.0 {
        return Ok(0.0);
    }
    upsilon_into(x, scratch);
    Ok(log_envelope.exp() * basis_eval_coords(&params.n, params.mu, scratch)?)
}

/// `f_r` by peeling `x_1`: `sech(x_1)^(2a + |n^2| + (r-1)/2) C_{n_1}^(λ_1)(tanh x_1) f_{r-1}(x_2, ...)`.
pub fn f_r_via_g1(x: &[f64], params: &FamilyParams) -> Result<f64> {
    check_dims(x.len(), params)?;
    let r = params.r();
    let n1 = params.n.get(1);
    let tail = params.n.tail_sum(2) as f64;
    let lambda = tail + params.mu + (r - 1) as f64 / 2.0;
    let head = sech_pow(x[0], 2.0 * params.a + tail + (r - 1) as f64 / 2.0)
        * gegenbauer_real(n1, lambda, x[0].tanh())?;
    if r == 1 {
        return Ok(head);
    }
    let rest = FamilyParams {
        a: params.a,
        mu: params.mu,
        n: params.n.without_first(),
    };
    Ok(head * f_r_via_g1(&x[1..], &rest)?)
}

/// `f_r` by peeling `x_r`:
/// `sech(x_r)^(2a) C_{n_r}^(μ)(tanh x_r) f_{r-1}(x_1, ..., x_{r-1}; a + n_r/2 + 1/4, μ + n_r + 1/2)`.
pub fn f_r_via_g2(x: &[f64], params: &FamilyParams) -> Result<f64> {
    check_dims(x.len(), params)?;
    let r = params.r();
    let nr = params.n.get(r);
    let head = sech_pow(x[r - 1], 2.0 * params.a) * gegenbauer_real(nr, params.mu, x[r - 1].tanh())?;
    if r == 1 {
        return Ok(head);
    }
    let rest = FamilyParams {
        a: params.a + nr as f64 / 2.0 + 0.25,
        mu: params.mu + nr as f64 + 0.5,
        n: params.n.without_last(),
    };
    Ok(head * f_r_via_g2(&x[..r - 1], &rest)?)
}

fn check_j(j: usize, params: &FamilyParams) -> Result<()> {
    if j == 0 || j > params.r() {
        return Err(Error::InvalidParameter(format!("factor index {j} outside 1..={}", params.r())));
    }
    Ok(())
}

fn beta_pair(shifted_a: f64, xi: f64) -> Result<ComplexValue> {
    beta(Complex64::new(shifted_a, xi / 2.0), Complex64::new(shifted_a, -xi / 2.0))
}

fn log_beta_pair(shifted_a: f64, xi: f64) -> Result<ComplexValue> {
    let p = Complex64::new(shifted_a, xi / 2.0);
    Ok(log_gamma(p)? + log_gamma(p.conj())? - log_gamma(Complex64::new(2.0 * shifted_a, 0.0))?)
}

fn theta_series(j: usize, params: &FamilyParams, xi_j: f64) -> Result<ComplexValue> {
    let nj = params.n.get(j);
    let b = params.shifted_a(j);
    let lambda = params.lambda(j);
    let c = |v: f64| Complex64::new(v, 0.0);
    hyp3f2_unit(
        nj,
        c(nj as f64 + 2.0 * lambda),
        Complex64::new(b, xi_j / 2.0),
        c(lambda + 0.5),
        c(2.0 * b),
    )
}

/// `Θ_j^r(a, μ, n; ξ_j) = B(b + iξ_j/2, b - iξ_j/2) · 3F2(-n_j, n_j + 2λ_j, b + iξ_j/2; λ_j + 1/2, 2b; 1)`
/// with `b = a + |n^{j+1}|/2 + (r-j)/4`.
pub fn theta_factor(j: usize, params: &FamilyParams, xi_j: f64) -> Result<ComplexValue> {
    check_j(j, params)?;
    Ok(beta_pair(params.shifted_a(j), xi_j)? * theta_series(j, params, xi_j)?)
}

/// `Θ_j^r` through `p_{n_j}(ξ_j/2; A, B, B, A)` with `A = b`,
/// `B = μ - a + (|n^{j+1}| + 1)/2 + (r-j)/4`.
pub fn theta_factor_hahn(j: usize, params: &FamilyParams, xi_j: f64) -> Result<ComplexValue> {
    check_j(j, params)?;
    let r = params.r();
    let nj = params.n.get(j);
    let tail = params.n.tail_sum(j + 1) as f64;
    let big_a = params.shifted_a(j);
    let big_b = params.mu - params.a + (tail + 1.0) / 2.0 + (r - j) as f64 / 4.0;
    let c = |v: f64| Complex64::new(v, 0.0);
    let hahn = HahnParameters::unchecked(c(big_a), c(big_b), c(big_b), c(big_a));
    let p = continuous_hahn(nj, c(xi_j / 2.0), &hahn)?;
    let i_pow = Complex64::new(0.0, 1.0).powu(nj as u32);
    let norm = i_pow
        * pochhammer_real(params.lambda(j) + 0.5, nj)?
        * pochhammer_real(2.0 * big_a, nj)?;
    Ok(factorial(nj) / norm * beta_pair(big_a, xi_j)? * p)
}

/// `2ra + r(r-5)/4 + Σ_{j=1}^{r-1} j n_{j+1}`.
pub fn two_exponent(params: &FamilyParams) -> f64 {
    let r = params.r();
    let rf = r as f64;
    let weighted: usize = (1..r).map(|j| j * params.n.get(j + 1)).sum();
    2.0 * rf * params.a + rf * (rf - 5.0) / 4.0 + weighted as f64
}

fn check_xi(params: &FamilyParams, xi: &FrequencyVector) -> Result<()> {
    if xi.dim() != params.r() {
        return Err(Error::InvalidParameter(format!(
            "frequency has {} components for r = {}",
            xi.dim(),
            params.r()
        )));
    }
    Ok(())
}

/// Closed-form transform
/// `2^E Π_j (2λ_j)_{n_j} / n_j! · Θ_j^r(a, μ, n; ξ_j)`, with every gamma
/// factor combined in log space before a single exponentiation.
pub fn fourier_closed_form(params: &FamilyParams, xi: &FrequencyVector) -> Result<ComplexValue> {
    check_xi(params, xi)?;
    let mut log_scale = Complex64::new(two_exponent(params) * LN_2, 0.0);
    let mut series = Complex64::new(1.0, 0.0);
    for (j, &xi_j) in (1..=params.r()).zip(xi.components()) {
        let nj = params.n.get(j);
        let poch = pochhammer_real(2.0 * params.lambda(j), nj)?;
        log_scale += Complex64::new(poch, 0.0).ln() - factorial(nj).ln();
        log_scale += log_beta_pair(params.shifted_a(j), xi_j)?;
        series *= theta_series(j, params, xi_j)?;
    }
    if log_scale.re > LOG_SCALE_LIMIT {
        return Err(Error::Overflow { context: "fourier scale factor" });
    }
    Ok(log_scale.exp() * series)
}

/// Size of the terms that cancel in [`fourier_closed_form`]: the modulus of
/// the scale factor times the largest partial sum of every `3F2`.
pub fn fourier_closed_form_scale(params: &FamilyParams, xi: &FrequencyVector) -> Result<f64> {
    check_xi(params, xi)?;
    let c = |v: f64| Complex64::new(v, 0.0);
    let mut log_scale = two_exponent(params) * LN_2;
    for (j, &xi_j) in (1..=params.r()).zip(xi.components()) {
        let nj = params.n.get(j);
        let b = params.shifted_a(j);
        let lambda = params.lambda(j);
        log_scale += pochhammer_real(2.0 * lambda, nj)?.abs().ln() - factorial(nj).ln();
        log_scale += log_beta_pair(b, xi_j)?.re;
        let (_, max_partial) = terminating_sum(
            &[c(-(nj as f64)), c(nj as f64 + 2.0 * lambda), Complex64::new(b, xi_j / 2.0)],
            &[c(lambda + 0.5), c(2.0 * b)],
            c(1.0),
            nj,
        )?;
        log_scale += max_partial.ln();
    }
    Ok(log_scale.exp())
}

/// Which variable the recursion peels at each step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PeelMode {
    /// `ξ_1` first, remaining parameters unchanged.
    First,
    /// `ξ_r` first, remaining family at `(a + n_r/2 + 1/4, μ + n_r + 1/2)`.
    Last,
}

/// One-variable transform of `sech(x)^(2b) C_n^(λ)(tanh x)`:
/// `2^(2b-1) (2λ)_n / n! · B(b + iξ/2, b - iξ/2) · 3F2(-n, n + 2λ, b + iξ/2; 2b, λ + 1/2; 1)`.
fn peeled_transform(n: usize, b: f64, lambda: f64, xi: f64) -> Result<ComplexValue> {
    let c = |v: f64| Complex64::new(v, 0.0);
    let prefactor = 2f64.powf(2.0 * b - 1.0) * pochhammer_real(2.0 * lambda, n)? / factorial(n);
    let series = hyp3f2_unit(n, c(n as f64 + 2.0 * lambda), Complex64::new(b, xi / 2.0), c(2.0 * b), c(lambda + 0.5))?;
    Ok(prefactor * beta_pair(b, xi)? * series)
}

/// Transform by repeated one-variable peeling.
pub fn fourier_via_recursion(
    params: &FamilyParams,
    xi: &FrequencyVector,
    mode: PeelMode,
) -> Result<ComplexValue> {
    check_xi(params, xi)?;
    let r = params.r();
    let xs = xi.components();
    match mode {
        PeelMode::First => {
            let tail = params.n.tail_sum(2) as f64;
            let b = params.a + tail / 2.0 + (r - 1) as f64 / 4.0;
            let lambda = tail + params.mu + (r - 1) as f64 / 2.0;
            let head = peeled_transform(params.n.get(1), b, lambda, xs[0])?;
            if r == 1 {
                return Ok(head);
            }
            let rest = FamilyParams {
                a: params.a,
                mu: params.mu,
                n: params.n.without_first(),
            };
            Ok(head * fourier_via_recursion(&rest, &FrequencyVector(xs[1..].to_vec()), mode)?)
        }
        PeelMode::Last => {
            let nr = params.n.get(r);
            let head = peeled_transform(nr, params.a, params.mu, xs[r - 1])?;
            if r == 1 {
                return Ok(head);
            }
            let rest = FamilyParams {
                a: params.a + nr as f64 / 2.0 + 0.25,
                mu: params.mu + nr as f64 + 0.5,
                n: params.n.without_last(),
            };
            Ok(head * fourier_via_recursion(&rest, &FrequencyVector(xs[..r - 1].to_vec()), mode)?)
        }
    }
}

/// The closed form with every `Θ_j^r` taken from [`theta_factor_hahn`].
pub fn fourier_hahn_product(params: &FamilyParams, xi: &FrequencyVector) -> Result<ComplexValue> {
    check_xi(params, xi)?;
    let mut acc = Complex64::new(2f64.powf(two_exponent(params)), 0.0);
    for (j, &xi_j) in (1..=params.r()).zip(xi.components()) {
        let nj = params.n.get(j);
        acc *= pochhammer(Complex64::new(2.0 * params.lambda(j), 0.0), nj)? / factorial(nj);
        acc *= theta_factor_hahn(j, params, xi_j)?;
    }
    if !(acc.re.is_finite() && acc.im.is_finite()) {
        return Err(Error::Overflow { context: "fourier hahn product" });
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn mi(v: &[usize]) -> MultiIndex {
        MultiIndex::new(v.to_vec()).unwrap()
    }

    fn fv(v: &[f64]) -> FrequencyVector {
        FrequencyVector::new(v.to_vec()).unwrap()
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm().max(1e-300)
    }

    fn random_index(rng: &mut ChaCha8Rng, r: usize, max_total: usize) -> MultiIndex {
        loop {
            let v: Vec<usize> = (0..r).map(|_| rng.gen_range(0..=max_total)).collect();
            if v.iter().sum::<usize>() <= max_total {
                return MultiIndex::new(v).unwrap();
            }
        }
    }

    #[test]
    fn upsilon_examples() {
        assert_eq!(upsilon_map(&[0.0, 0.0]).coords(), &[0.0, 0.0]);
        assert_relative_eq!(upsilon_map(&[1.0]).coords()[0], 0.761_594_155_955_764_9, max_relative = 1e-15);
        let u = upsilon_map(&[1.0, 1.0]);
        assert_relative_eq!(u.coords()[0], 0.761_594_155_955_764_9, max_relative = 1e-15);
        assert_relative_eq!(u.coords()[1], 1f64.tanh() / 1f64.cosh(), max_relative = 1e-15);
        let n2: f64 = u.coords().iter().map(|v| v * v).sum();
        assert_relative_eq!(n2, 1.0 - 1.0 / 1f64.cosh().powi(4), max_relative = 1e-14);
    }

    #[test]
    fn f_r_examples() {
        let p = FamilyParams::new(0.8, 1.3, mi(&[3])).unwrap();
        let x = 0.37f64;
        let want = (1.0 - x.tanh().powi(2)).powf(0.8) * gegenbauer_real(3, 1.3, x.tanh()).unwrap();
        assert_relative_eq!(f_r_eval(&[x], &p).unwrap(), want, max_relative = 1e-13);
        for r in 1..=3 {
            let q = FamilyParams::new(0.3, 0.9, MultiIndex::zeros(r)).unwrap();
            assert_relative_eq!(f_r_eval(&vec![0.0; r], &q).unwrap(), 1.0, max_relative = 1e-15);
        }
        let p2 = FamilyParams::new(1.0, 0.5, mi(&[1, 0])).unwrap();
        let f1 = FamilyParams::new(1.0, 0.5, mi(&[0])).unwrap();
        let want = (1.0 - 0.3f64.tanh().powi(2)).powf(1.25)
            * gegenbauer_real(1, 1.0, 0.3f64.tanh()).unwrap()
            * f_r_eval(&[-0.2], &f1).unwrap();
        assert_relative_eq!(f_r_eval(&[0.3, -0.2], &p2).unwrap(), want, max_relative = 1e-13);
    }

    #[test]
    fn g2_example() {
        let p = FamilyParams::new(0.6, 0.7, mi(&[0, 1])).unwrap();
        let x = [0.4f64, -0.9];
        let shifted = FamilyParams::new(0.6 + 0.75, 0.7 + 1.5, mi(&[0])).unwrap();
        let want = (1.0 - x[1].tanh().powi(2)).powf(0.6)
            * gegenbauer_real(1, 0.7, x[1].tanh()).unwrap()
            * f_r_eval(&[x[0]], &shifted).unwrap();
        assert_relative_eq!(f_r_via_g2(&x, &p).unwrap(), want, max_relative = 1e-13);
    }

    #[test]
    fn three_evaluation_paths_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..100 {
            let r = rng.gen_range(2..=3);
            let n = random_index(&mut rng, r, 4);
            let p = FamilyParams::new(rng.gen_range(0.2..2.0), rng.gen_range(0.1..2.0), n).unwrap();
            let x: Vec<f64> = (0..r).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let a = f_r_eval(&x, &p).unwrap();
            let b = f_r_via_g1(&x, &p).unwrap();
            let c = f_r_via_g2(&x, &p).unwrap();
            let scale = a.abs().max(b.abs()).max(1e-300);
            assert!((a - b).abs() <= 1e-12 * scale.max(1e-3 * sech_pow(0.0, 1.0)), "{a} vs {b}");
            assert!((a - c).abs() <= 1e-12 * scale.max(1e-3), "{a} vs {c}");
        }
    }

    #[test]
    fn f_r_far_tail_is_zero_not_nan() {
        let p = FamilyParams::new(0.5, 1.0, mi(&[2, 1])).unwrap();
        let v = f_r_eval(&[900.0, -900.0], &p).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn theta_examples() {
        let p = FamilyParams::new(0.9, 1.1, mi(&[0])).unwrap();
        let t = theta_factor(1, &p, 0.0).unwrap();
        assert_relative_eq!(t.re, beta(Complex64::new(0.9, 0.0), Complex64::new(0.9, 0.0)).unwrap().re, max_relative = 1e-14);
        assert!(theta_factor(2, &p, 0.0).is_err());
        assert!(theta_factor(0, &p, 0.0).is_err());
    }

    #[test]
    fn theta_univariate_matches_explicit_form() {
        let (a, mu, xi) = (0.7, 1.4, 0.9);
        for n in 0..6 {
            let p = FamilyParams::new(a, mu, mi(&[n])).unwrap();
            let c = |v: f64| Complex64::new(v, 0.0);
            let want = hyp3f2_unit(n, c(n as f64 + 2.0 * mu), Complex64::new(a, xi / 2.0), c(2.0 * a), c(mu + 0.5)).unwrap()
                * beta(Complex64::new(a, xi / 2.0), Complex64::new(a, -xi / 2.0)).unwrap();
            assert!(rel(theta_factor(1, &p, xi).unwrap(), want) < 1e-14);
        }
    }

    #[test]
    fn theta_conjugation() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let r = rng.gen_range(1..=3);
            let n = random_index(&mut rng, r, 5);
            let p = FamilyParams::new(rng.gen_range(0.2..2.0), rng.gen_range(0.1..2.0), n).unwrap();
            let j = rng.gen_range(1..=r);
            let xi = rng.gen_range(-3.0..3.0);
            let a = theta_factor(j, &p, xi).unwrap().conj();
            let b = theta_factor(j, &p, -xi).unwrap();
            assert!(rel(a, b) < 1e-13);
        }
    }

    #[test]
    fn theta_hahn_dual_path() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..200 {
            let r = rng.gen_range(1..=3);
            let mut n = random_index(&mut rng, r, 8).entries().to_vec();
            let j = rng.gen_range(1..=r);
            n[j - 1] = n[j - 1].min(6);
            let p = FamilyParams::new(rng.gen_range(0.2..2.0), rng.gen_range(0.1..2.0), MultiIndex::new(n).unwrap()).unwrap();
            let xi = rng.gen_range(-3.0..3.0);
            let a = theta_factor(j, &p, xi).unwrap();
            let b = theta_factor_hahn(j, &p, xi).unwrap();
            assert!(rel(b, a) < 1e-11, "{a} vs {b}");
        }
    }

    #[test]
    fn theta_hahn_term_by_term() {
        // r = 1, n = 2, a = 1, μ = 1.5, ξ = 0.7 against an explicit sum of
        // i² (A+B)_2 (2A)_2 / 2! Σ_k (-2)_k (1+2A+2B)_k (A + iξ/2)_k / ((A+B)_k (2A)_k k!)
        let (a, mu, xi) = (1.0f64, 1.5f64, 0.7f64);
        let (big_a, big_b) = (a, mu - a + 0.5);
        let poch = |b: Complex64, k: usize| (0..k).fold(Complex64::new(1.0, 0.0), |acc, i| acc * (b + i as f64));
        let c = |v: f64| Complex64::new(v, 0.0);
        let mut s = c(0.0);
        for k in 0..=2 {
            s += poch(c(-2.0), k) * poch(c(1.0 + 2.0 * big_a + 2.0 * big_b), k) * poch(Complex64::new(big_a, xi / 2.0), k)
                / (poch(c(big_a + big_b), k) * poch(c(2.0 * big_a), k) * factorial(k));
        }
        let p_direct = Complex64::new(0.0, 1.0).powu(2) * poch(c(big_a + big_b), 2) * poch(c(2.0 * big_a), 2) / 2.0 * s;
        let want = 2.0 / (Complex64::new(0.0, 1.0).powu(2) * (mu + 0.5) * (mu + 1.5) * (2.0 * a) * (2.0 * a + 1.0))
            * beta(Complex64::new(a, xi / 2.0), Complex64::new(a, -xi / 2.0)).unwrap()
            * p_direct;
        let p = FamilyParams::new(a, mu, mi(&[2])).unwrap();
        assert!(rel(theta_factor_hahn(1, &p, xi).unwrap(), want) < 1e-13);
    }

    #[test]
    fn closed_form_sech_integral() {
        let p = FamilyParams::new(0.5, 0.5, mi(&[0])).unwrap();
        let v = fourier_closed_form(&p, &fv(&[0.0])).unwrap();
        assert!((v - Complex64::new(PI, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn closed_form_univariate_and_bivariate_shapes() {
        let c = |v: f64| Complex64::new(v, 0.0);
        let (a, mu) = (0.85, 1.2);
        for n in 0..5 {
            let p = FamilyParams::new(a, mu, mi(&[n])).unwrap();
            let want = 2f64.powf(2.0 * a - 1.0) * pochhammer_real(2.0 * mu, n).unwrap() / factorial(n)
                * theta_factor(1, &p, 1.3).unwrap();
            assert!(rel(fourier_closed_form(&p, &fv(&[1.3])).unwrap(), want) < 1e-13);
        }
        for (n1, n2) in [(0, 0), (1, 2), (3, 1), (2, 2)] {
            let p = FamilyParams::new(a, mu, mi(&[n1, n2])).unwrap();
            let (x1, x2) = (0.4, -1.7);
            let n2f = n2 as f64;
            let t1 = beta(Complex64::new(a + n2f / 2.0 + 0.25, x1 / 2.0), Complex64::new(a + n2f / 2.0 + 0.25, -x1 / 2.0)).unwrap()
                * hyp3f2_unit(n1, c(n1 as f64 + 2.0 * (n2f + mu + 0.5)), Complex64::new(a + n2f / 2.0 + 0.25, x1 / 2.0), c(n2f + 2.0 * a + 0.5), c(n2f + mu + 1.0)).unwrap();
            let t2 = beta(Complex64::new(a, x2 / 2.0), Complex64::new(a, -x2 / 2.0)).unwrap()
                * hyp3f2_unit(n2, c(n2f + 2.0 * mu), Complex64::new(a, x2 / 2.0), c(2.0 * a), c(mu + 0.5)).unwrap();
            let want = 2f64.powf(n2f + 4.0 * a - 1.5) * pochhammer_real(2.0 * mu, n2).unwrap()
                * pochhammer_real(2.0 * (n2f + mu + 0.5), n1).unwrap()
                / (factorial(n1) * factorial(n2))
                * t1 * t2;
            assert!(rel(fourier_closed_form(&p, &fv(&[x1, x2])).unwrap(), want) < 1e-13);
        }
    }

    #[test]
    fn recursion_modes_agree_with_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..200 {
            let r = rng.gen_range(1..=3);
            let n = random_index(&mut rng, r, 4);
            let p = FamilyParams::new(rng.gen_range(0.2..2.0), rng.gen_range(0.1..2.0), n).unwrap();
            let xi = fv(&(0..r).map(|_| rng.gen_range(-3.0..3.0)).collect::<Vec<_>>());
            let closed = fourier_closed_form(&p, &xi).unwrap();
            for mode in [PeelMode::First, PeelMode::Last] {
                let v = fourier_via_recursion(&p, &xi, mode).unwrap();
                assert!(rel(v, closed) < 1e-11, "{mode:?}: {v} vs {closed}");
            }
            assert!(rel(fourier_hahn_product(&p, &xi).unwrap(), closed) < 1e-11);
        }
    }

    #[test]
    fn scale_bounds_the_value() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..100 {
            let r = rng.gen_range(1..=3);
            let n = random_index(&mut rng, r, 6);
            let p = FamilyParams::new(rng.gen_range(0.2..2.0), rng.gen_range(0.1..2.0), n).unwrap();
            let xi = fv(&(0..r).map(|_| rng.gen_range(-3.0..3.0)).collect::<Vec<_>>());
            let v = fourier_closed_form(&p, &xi).unwrap();
            assert!(v.norm() <= fourier_closed_form_scale(&p, &xi).unwrap() * (1.0 + 1e-12));
        }
    }

    #[test]
    fn univariate_modes_identical() {
        let p = FamilyParams::new(0.7, 0.4, mi(&[3])).unwrap();
        let xi = fv(&[0.9]);
        assert_eq!(
            fourier_via_recursion(&p, &xi, PeelMode::First).unwrap(),
            fourier_via_recursion(&p, &xi, PeelMode::Last).unwrap()
        );
    }

    #[test]
    fn hermitian_symmetry_and_even_parity() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let r = rng.gen_range(1..=3);
            let n = random_index(&mut rng, r, 4);
            let p = FamilyParams::new(rng.gen_range(0.2..2.0), rng.gen_range(0.1..2.0), n.clone()).unwrap();
            let xs: Vec<f64> = (0..r).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let neg: Vec<f64> = xs.iter().map(|v| -v).collect();
            let a = fourier_closed_form(&p, &fv(&xs)).unwrap();
            let b = fourier_closed_form(&p, &fv(&neg)).unwrap();
            assert!(rel(b, a.conj()) < 1e-12);
            if n.entries().iter().all(|k| k % 2 == 0) {
                assert!(a.im.abs() <= 1e-10 * a.norm());
            }
        }
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let p = FamilyParams::new(0.5, 0.5, mi(&[1, 1])).unwrap();
        assert!(fourier_closed_form(&p, &fv(&[0.0])).is_err());
        assert!(f_r_eval(&[0.0], &p).is_err());
        assert!(FamilyParams::new(0.0, 0.5, mi(&[1])).is_err());
        assert!(FamilyParams::new(0.5, 0.0, mi(&[1])).is_err());
    }

    #[test]
    fn large_a_stays_finite() {
        // ∫ sech^(2a) = √π Γ(a) / Γ(a + 1/2) while 2^(2a-1) alone overflows
        let a = 600.0;
        let p = FamilyParams::new(a, 0.5, mi(&[0])).unwrap();
        let v = fourier_closed_form(&p, &fv(&[0.0])).unwrap();
        let want = (0.5 * PI.ln() + crate::special::ln_gamma_pos(a).unwrap() - crate::special::ln_gamma_pos(a + 0.5).unwrap()).exp();
        assert!((v.re / want - 1.0).abs() < 1e-12);
        assert!(fourier_via_recursion(&p, &fv(&[0.0]), PeelMode::First).map_or(true, |v| !v.re.is_finite()));
    }
}
