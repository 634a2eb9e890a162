//! The Gegenbauer-product orthogonal basis on the unit ball `B^r` with weight
//! `W_μ(x) = (1 - |x|²)^(μ - 1/2)`.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::classical::{check_lambda, gegenbauer_real};
use crate::error::{Error, Result};
use crate::special::{factorial, ln_gamma_pos, pochhammer_real, MAX_EXP_ARG};

/// Points with `|x| <= 1 + BALL_TOLERANCE` are accepted.
pub const BALL_TOLERANCE: f64 = 1e-12;
/// Partial radii `1 - |x_{j-1}|²` at or below this are treated as the boundary.
pub const BOUNDARY_TOLERANCE: f64 = 1e-14;

/// `n = (n_1, ..., n_r)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn new(entries: Vec<usize>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidParameter("multi-index needs r >= 1".into()));
        }
        Ok(Self(entries))
    }

    pub fn zeros(r: usize) -> Self {
        Self(vec![0; r.max(1)])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    /// `n_j` with 1-based `j`.
    pub fn get(&self, j: usize) -> usize {
        self.0[j - 1]
    }

    /// `|n^j| = n_j + ... + n_r` with 1-based `j`; zero for `j = r + 1`.
    pub fn tail_sum(&self, j: usize) -> usize {
        self.0[(j - 1).min(self.0.len())..].iter().sum()
    }

    pub fn total_degree(&self) -> usize {
        self.0.iter().sum()
    }

    /// Drop `n_1`.
    pub fn without_first(&self) -> Self {
        Self(self.0[1..].to_vec())
    }

    /// Drop `n_r`.
    pub fn without_last(&self) -> Self {
        Self(self.0[..self.0.len() - 1].to_vec())
    }

    /// Every multi-index in `r` variables of total degree exactly `degree`,
    /// in lexicographic order.
    pub fn with_total_degree(degree: usize, r: usize) -> Vec<Self> {
        fn fill(rest: usize, slots: usize, prefix: &mut Vec<usize>, out: &mut Vec<MultiIndex>) {
            if slots == 1 {
                prefix.push(rest);
                out.push(MultiIndex(prefix.clone()));
                prefix.pop();
                return;
            }
            for k in 0..=rest {
                prefix.push(k);
                fill(rest - k, slots - 1, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if r > 0 {
            fill(degree, r, &mut Vec::with_capacity(r), &mut out);
        }
        out
    }

    /// Every multi-index in `r` variables with total degree at most `max_degree`.
    pub fn up_to_degree(max_degree: usize, r: usize) -> Vec<Self> {
        (0..=max_degree)
            .flat_map(|d| Self::with_total_degree(d, r))
            .collect()
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|n| n.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl std::str::FromStr for MultiIndex {
    type Err = Error;

    /// Comma-separated entries, e.g. `1,0,2`.
    fn from_str(s: &str) -> Result<Self> {
        let entries = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidParameter(format!("bad multi-index entry '{t}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(entries)
    }
}

/// A point of the closed unit ball.
#[derive(Debug, Clone, PartialEq)]
pub struct BallPoint(Vec<f64>);

impl BallPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        let norm2: f64 = coords.iter().map(|x| x * x).sum();
        if coords.iter().any(|x| !x.is_finite()) || norm2.sqrt() > 1.0 + BALL_TOLERANCE {
            return Err(Error::Domain(format!("{coords:?} lies outside the unit ball")));
        }
        Ok(Self(coords))
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

/// Weight parameter `μ > -1/2`, `μ != 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallParams {
    mu: f64,
}

impl BallParams {
    pub fn new(mu: f64) -> Result<Self> {
        check_lambda(mu).map_err(|_| {
            Error::InvalidParameter(format!("ball weight needs mu > -1/2 and mu != 0, got {mu}"))
        })?;
        Ok(Self { mu })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }
}

/// `dim V_n^r = binom(n + r - 1, n)`.
pub fn ball_space_dim(n: usize, r: usize) -> usize {
    if r == 0 {
        return usize::from(n == 0);
    }
    // exact integer recurrence: binom(n+r-1, k) built up one factor at a time
    let mut acc: u128 = 1;
    for k in 1..=n {
        acc = acc * (r - 1 + k) as u128 / k as u128;
    }
    acc as usize
}

pub(crate) fn check_family_mu(mu: f64) -> Result<()> {
    BallParams::new(mu).map(|_| ())
}

/// `λ_j = μ + |n^{j+1}| + (r - j)/2`.
pub(crate) fn lambda_j(n: &MultiIndex, mu: f64, j: usize) -> f64 {
    let r = n.dim();
    mu + n.tail_sum(j + 1) as f64 + (r - j) as f64 / 2.0
}

/// `P_n^μ(x)` from raw coordinates, used by the quadrature loops.
pub(crate) fn basis_eval_coords(n: &MultiIndex, mu: f64, x: &[f64]) -> Result<f64> {
    let r = n.dim();
    if x.len() != r {
        return Err(Error::InvalidParameter(format!(
            "point has {} coordinates, multi-index has {r}",
            x.len()
        )));
    }
    let norm2: f64 = x.iter().map(|v| v * v).sum();
    if !(norm2.sqrt() <= 1.0 + BALL_TOLERANCE) {
        return Err(Error::Domain(format!("{x:?} lies outside the unit ball")));
    }
    let mut partial = 0.0f64;
    let mut value = 1.0f64;
    for j in 1..=r {
        let nj = n.get(j);
        let xj = x[j - 1];
        if nj > 0 {
            let room = 1.0 - partial;
            if room <= BOUNDARY_TOLERANCE {
                return Ok(0.0);
            }
            let s = room.sqrt();
            let c = gegenbauer_real(nj, lambda_j(n, mu, j), xj / s)?;
            value *= s.powi(nj as i32) * c;
        }
        partial += xj * xj;
    }
    Ok(value)
}

/// `P_n^μ(x) = Π_j (1 - |x_{j-1}|²)^(n_j/2) C_{n_j}^(λ_j)(x_j / sqrt(1 - |x_{j-1}|²))`.
///
/// Factors whose partial radius has collapsed to the boundary evaluate to
/// zero when `n_j > 0` and to one otherwise.
pub fn ball_basis_eval(n: &MultiIndex, params: BallParams, x: &BallPoint) -> Result<f64> {
    basis_eval_coords(n, params.mu, x.coords())
}

/// Signed logarithmic accumulator for products of real factors.
#[derive(Debug, Clone, Copy)]
pub(crate) struct SignedLog {
    pub log_abs: f64,
    pub sign: f64,
}

impl SignedLog {
    pub fn one() -> Self {
        Self { log_abs: 0.0, sign: 1.0 }
    }

    pub fn mul(&mut self, x: f64) {
        self.log_abs += x.abs().ln();
        self.sign *= x.signum();
    }

    pub fn div(&mut self, x: f64) {
        self.log_abs -= x.abs().ln();
        self.sign *= x.signum();
    }

    pub fn mul_log(&mut self, log_abs: f64) {
        self.log_abs += log_abs;
    }

    pub fn value(self, context: &'static str) -> Result<f64> {
        if self.log_abs > MAX_EXP_ARG {
            return Err(Error::Overflow { context });
        }
        Ok(self.sign * self.log_abs.exp())
    }
}

/// `h_n^μ = <P_n^μ, P_n^μ>_μ`.
pub fn ball_norm(n: &MultiIndex, params: BallParams) -> Result<f64> {
    let mu = params.mu;
    let r = n.dim();
    let rf = r as f64;
    let total = n.total_degree();
    let mut acc = SignedLog::one();
    acc.mul_log(0.5 * rf * PI.ln() + ln_gamma_pos(mu + 0.5)?);
    acc.mul(pochhammer_real(mu + rf / 2.0, total)?);
    acc.mul_log(-ln_gamma_pos(mu + (rf + 1.0) / 2.0 + total as f64)?);
    for j in 1..=r {
        let nj = n.get(j);
        let tail_j = n.tail_sum(j);
        let tail_next = n.tail_sum(j + 1) as f64;
        let rj = (r - j) as f64;
        acc.mul(pochhammer_real(mu + rj / 2.0, tail_j)?);
        acc.mul(pochhammer_real(2.0 * mu + 2.0 * tail_next + rj, nj)?);
        acc.div(factorial(nj));
        acc.div(pochhammer_real(mu + (rj + 1.0) / 2.0, tail_j)?);
    }
    acc.value("ball_norm")
}

/// `|L[P](x) + (|n| + r)(|n| + 2μ - 1) P(x)|` with
/// `L = Δ - Σ_j ∂_j x_j (2μ - 1 + Σ_i x_i ∂_i)` discretised by nested central
/// differences of step `h`.
pub fn ball_operator_residual(
    n: &MultiIndex,
    params: BallParams,
    x: &BallPoint,
    h: f64,
) -> Result<f64> {
    let r = n.dim();
    if x.dim() != r {
        return Err(Error::InvalidParameter("point and multi-index differ in dimension".into()));
    }
    if !(h > 0.0) {
        return Err(Error::InvalidParameter(format!("step must be positive, got {h}")));
    }
    let radius: f64 = x.coords().iter().map(|v| v * v).sum::<f64>().sqrt();
    if radius + 2.0 * h >= 1.0 {
        return Err(Error::Domain(format!(
            "stencil of half-width {} around |x| = {radius} leaves the ball",
            2.0 * h
        )));
    }
    let mu = params.mu;
    let p = |y: &[f64]| basis_eval_coords(n, mu, y);
    let shifted = |y: &[f64], axis: usize, delta: f64| {
        let mut z = y.to_vec();
        z[axis] += delta;
        z
    };
    let d = |f: &dyn Fn(&[f64]) -> Result<f64>, y: &[f64], axis: usize| -> Result<f64> {
        Ok((f(&shifted(y, axis, h))? - f(&shifted(y, axis, -h))?) / (2.0 * h))
    };

    let xs = x.coords();
    let center = p(xs)?;
    let mut laplacian = 0.0;
    for i in 0..r {
        laplacian += (p(&shifted(xs, i, h))? - 2.0 * center + p(&shifted(xs, i, -h))?) / (h * h);
    }

    // Q(y) = (2μ - 1) P(y) + Σ_i y_i ∂_i P(y)
    let q = |y: &[f64]| -> Result<f64> {
        let mut acc = (2.0 * mu - 1.0) * p(y)?;
        for i in 0..r {
            acc += y[i] * d(&p, y, i)?;
        }
        Ok(acc)
    };
    let mut transport = 0.0;
    for j in 0..r {
        let yq = |y: &[f64]| -> Result<f64> { Ok(y[j] * q(y)?) };
        transport += d(&yq, xs, j)?;
    }
    let degree = n.total_degree() as f64;
    let eigen = (degree + r as f64) * (degree + 2.0 * mu - 1.0);
    Ok((laplacian - transport + eigen * center).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn mi(v: &[usize]) -> MultiIndex {
        MultiIndex::new(v.to_vec()).unwrap()
    }

    #[test]
    fn tail_sums() {
        let n = mi(&[1, 0, 2]);
        assert_eq!(n.tail_sum(1), 3);
        assert_eq!(n.tail_sum(2), 2);
        assert_eq!(n.tail_sum(3), 2);
        assert_eq!(n.tail_sum(4), 0);
        assert_eq!(n.total_degree(), 3);
        assert_eq!("1,0,2".parse::<MultiIndex>().unwrap(), n);
        assert!("1,x".parse::<MultiIndex>().is_err());
        assert!(MultiIndex::new(vec![]).is_err());
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(ball_space_dim(0, 5), 1);
        assert_eq!(ball_space_dim(3, 2), 4);
        assert_eq!(ball_space_dim(2, 3), 6);
    }

    #[test]
    fn enumeration_matches_dimension() {
        for r in 1..=4 {
            for n in 0..=6 {
                assert_eq!(MultiIndex::with_total_degree(n, r).len(), ball_space_dim(n, r));
            }
        }
    }

    #[test]
    fn basis_examples() {
        let p = BallParams::new(1.0).unwrap();
        let x = BallPoint::new(vec![0.3, 0.4]).unwrap();
        assert_eq!(ball_basis_eval(&mi(&[0, 0]), p, &x).unwrap(), 1.0);
        assert_relative_eq!(ball_basis_eval(&mi(&[0, 1]), p, &x).unwrap(), 0.8, max_relative = 1e-14);
        let q = BallParams::new(0.7).unwrap();
        let y = BallPoint::new(vec![0.35]).unwrap();
        assert_relative_eq!(
            ball_basis_eval(&mi(&[3]), q, &y).unwrap(),
            gegenbauer_real(3, 0.7, 0.35).unwrap(),
            max_relative = 1e-15
        );
    }

    #[test]
    fn outside_points_are_rejected() {
        assert!(BallPoint::new(vec![0.8, 0.7]).is_err());
        assert!(BallPoint::new(vec![1.0 + 1e-13]).is_ok());
        assert!(BallParams::new(0.0).is_err());
        assert!(BallParams::new(-0.5).is_err());
    }

    #[test]
    fn boundary_factor_vanishes() {
        let p = BallParams::new(0.8).unwrap();
        let s = 1e-7f64;
        let x1 = (1.0f64 - s * s).sqrt();
        for n2 in [1usize, 2, 3] {
            let x = BallPoint::new(vec![x1, 0.5 * s]).unwrap();
            let v = ball_basis_eval(&mi(&[0, n2]), p, &x).unwrap();
            assert!(v.abs() <= 1e-6, "n2={n2}: {v}");
        }
        // exactly on the boundary: the n_2 = 0 factor is one
        let edge = BallPoint::new(vec![1.0, 0.0]).unwrap();
        assert_eq!(ball_basis_eval(&mi(&[0, 2]), p, &edge).unwrap(), 0.0);
        assert_relative_eq!(
            ball_basis_eval(&mi(&[1, 0]), p, &edge).unwrap(),
            gegenbauer_real(1, 0.8 + 0.5, 1.0).unwrap(),
            max_relative = 1e-15
        );
    }

    #[test]
    fn norm_examples() {
        assert_relative_eq!(ball_norm(&mi(&[0]), BallParams::new(0.5).unwrap()).unwrap(), 2.0, max_relative = 1e-14);
        assert_relative_eq!(ball_norm(&mi(&[0, 0]), BallParams::new(0.5).unwrap()).unwrap(), PI, max_relative = 1e-14);
    }

    #[test]
    fn univariate_norm_is_gegenbauer_norm() {
        for &mu in &[-0.3, 0.25, 1.0, 2.5] {
            for n in 0..8 {
                let a = ball_norm(&mi(&[n]), BallParams::new(mu).unwrap()).unwrap();
                let b = crate::classical::gegenbauer_norm(n, mu).unwrap();
                assert_relative_eq!(a, b, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn residual_examples() {
        let x = BallPoint::new(vec![0.2]).unwrap();
        let r0 = ball_operator_residual(&mi(&[0]), BallParams::new(1.0).unwrap(), &x, 1e-3).unwrap();
        assert!(r0 < 1e-9);
        let r1 = ball_operator_residual(&mi(&[2]), BallParams::new(1.0).unwrap(), &x, 1e-3).unwrap();
        assert!(r1 <= 1e-4, "{r1}");
        let y = BallPoint::new(vec![0.1, 0.2]).unwrap();
        let r2 = ball_operator_residual(&mi(&[1, 1]), BallParams::new(0.5).unwrap(), &y, 1e-3).unwrap();
        assert!(r2 <= 1e-4, "{r2}");
    }

    #[test]
    fn residual_stencil_must_fit() {
        let x = BallPoint::new(vec![0.99]).unwrap();
        assert!(matches!(
            ball_operator_residual(&mi(&[1]), BallParams::new(1.0).unwrap(), &x, 1e-2),
            Err(Error::Domain(_))
        ));
    }
}
