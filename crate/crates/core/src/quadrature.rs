//! Numerical oracles: composite Gauss–Legendre rules on the line, tensor
//! products of them for the Fourier integral and the `D` pairing, a polar
//! parameterisation of the ball, and Gauss–Gegenbauer rules on `[-1, 1]`.
//!
//! Everything here is evaluated directly from the defining integrals and
//! never calls a closed form it is meant to check.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::ball::{basis_eval_coords, BallParams, MultiIndex};
use crate::classical::{continuous_hahn, hahn_weight, HahnParameters};
use crate::dfamily::{d_family_eval, DParams};
use crate::error::{Error, Result};
use crate::special::{ln_gamma_pos, ComplexValue};
use crate::tanh_family::{envelope_power, f_r_eval_with, ln_cosh, FamilyParams, FrequencyVector};

/// Quadrature family used on every axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadratureRule {
    GaussLegendre,
}

/// Composite rule on `[-T, T]`: `nodes_per_axis / panel_order` panels, placed
/// symmetrically about 0 with widths growing by `grading` away from the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureSpec {
    pub nodes_per_axis: usize,
    pub panel_order: usize,
    pub truncation_halfwidth: f64,
    pub grading: f64,
    pub rule: QuadratureRule,
}

impl QuadratureSpec {
    /// Uniform panels of order 10.
    pub fn new(nodes_per_axis: usize, truncation_halfwidth: f64) -> Result<Self> {
        let spec = Self {
            nodes_per_axis,
            panel_order: 10.min(nodes_per_axis.max(2)),
            truncation_halfwidth,
            grading: 1.0,
            rule: QuadratureRule::GaussLegendre,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// 64 uniform panels of order 12 on `[-40, 40]`.
    pub fn line() -> Self {
        Self {
            nodes_per_axis: 768,
            panel_order: 12,
            truncation_halfwidth: 40.0,
            grading: 1.0,
            rule: QuadratureRule::GaussLegendre,
        }
    }

    /// Graded rule for `∫ e^{-iξ·x} f_r(x) dx` with `|ξ_j| <= 3`, sized by
    /// the slowest envelope `sech(x)^(2a)`.
    pub fn fourier(r: usize, a: f64) -> Self {
        Self {
            nodes_per_axis: if r >= 3 { 144 } else { 192 },
            panel_order: 12,
            truncation_halfwidth: (15.0 / a).clamp(8.0, 30.0),
            grading: 1.6,
            rule: QuadratureRule::GaussLegendre,
        }
    }

    /// Rule for the `D` pairing: `|x_j| <= 40/(a1 + a2)`, 400 nodes per axis
    /// in panels widening by 15% away from the origin.
    pub fn dfamily(a1: f64, a2: f64) -> Self {
        Self {
            nodes_per_axis: 400,
            panel_order: 10,
            truncation_halfwidth: 40.0 / (a1 + a2),
            grading: 1.15,
            rule: QuadratureRule::GaussLegendre,
        }
    }

    /// Twice as many panels of the same order.
    pub fn doubled(&self) -> Self {
        Self {
            nodes_per_axis: 2 * self.nodes_per_axis,
            grading: self.grading.sqrt(),
            ..self.clone()
        }
    }

    pub fn with_grading(mut self, grading: f64) -> Result<Self> {
        self.grading = grading;
        self.validate()?;
        Ok(self)
    }

    pub fn with_panel_order(mut self, order: usize) -> Result<Self> {
        self.panel_order = order;
        self.validate()?;
        Ok(self)
    }

    pub fn with_truncation(mut self, halfwidth: f64) -> Result<Self> {
        self.truncation_halfwidth = halfwidth;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes_per_axis < 2 {
            return Err(Error::InvalidParameter("nodes_per_axis must be at least 2".into()));
        }
        if self.panel_order < 1 || self.panel_order > self.nodes_per_axis {
            return Err(Error::InvalidParameter(format!(
                "panel order {} incompatible with {} nodes",
                self.panel_order, self.nodes_per_axis
            )));
        }
        if !(self.truncation_halfwidth > 0.0) || !self.truncation_halfwidth.is_finite() {
            return Err(Error::InvalidParameter("truncation_halfwidth must be positive".into()));
        }
        if !(self.grading >= 1.0) || !self.grading.is_finite() {
            return Err(Error::InvalidParameter("grading must be at least 1".into()));
        }
        Ok(())
    }

    fn panels_per_side(&self) -> usize {
        (self.nodes_per_axis / self.panel_order / 2).max(1)
    }

    /// Panel edges in `[0, T]`, starting at 0.
    fn half_edges(&self) -> Vec<f64> {
        let k = self.panels_per_side();
        let t = self.truncation_halfwidth;
        let g = self.grading;
        let first = if g == 1.0 { t / k as f64 } else { t * (g - 1.0) / (g.powi(k as i32) - 1.0) };
        let mut edges = Vec::with_capacity(k + 1);
        edges.push(0.0);
        let mut width = first;
        for i in 1..=k {
            edges.push(if i == k { t } else { edges[i - 1] + width });
            width *= g;
        }
        edges
    }

    /// Nodes and weights on `[-T, T]`, ordered by increasing node.
    pub fn nodes(&self) -> Result<(Vec<f64>, Vec<f64>)> {
        self.validate()?;
        let (gx, gw) = gauss_legendre(self.panel_order)?;
        let edges = self.half_edges();
        let mut xs = Vec::with_capacity(2 * gx.len() * (edges.len() - 1));
        let mut ws = Vec::with_capacity(xs.capacity());
        for pair in edges.windows(2).rev() {
            push_panel(-pair[1], -pair[0], &gx, &gw, &mut xs, &mut ws);
        }
        for pair in edges.windows(2) {
            push_panel(pair[0], pair[1], &gx, &gw, &mut xs, &mut ws);
        }
        Ok((xs, ws))
    }
}

fn push_panel(lo: f64, hi: f64, gx: &[f64], gw: &[f64], xs: &mut Vec<f64>, ws: &mut Vec<f64>) {
    let half = 0.5 * (hi - lo);
    let mid = 0.5 * (hi + lo);
    for (&x, &w) in gx.iter().zip(gw) {
        xs.push(mid + half * x);
        ws.push(half * w);
    }
}

/// Gauss–Legendre nodes (ascending) and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 {
        return Err(Error::InvalidParameter("Gauss–Legendre needs at least one node".into()));
    }
    let mut xs = vec![0.0; n];
    let mut ws = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let step = p / d;
            x -= step;
            if step.abs() <= 1e-16 * x.abs().max(1.0) {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        xs[i] = -x;
        xs[n - 1 - i] = x;
        ws[i] = w;
        ws[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        xs[n / 2] = 0.0;
    }
    Ok((xs, ws))
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let prev = if n == 0 { 0.0 } else { p0 };
    let d = n as f64 * (x * p - prev) / (x * x - 1.0);
    (p, d)
}

/// Gauss rule for the weight `(1 - x²)^(λ - 1/2)` on `[-1, 1]`: nodes are the
/// eigenvalues of its Jacobi matrix, weights the Christoffel numbers.
pub fn gauss_gegenbauer(n: usize, lambda: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 || !(lambda > -0.5) {
        return Err(Error::InvalidParameter(format!(
            "Gauss–Gegenbauer needs n >= 1 and λ > -1/2, got n = {n}, λ = {lambda}"
        )));
    }
    let off: Vec<f64> = (1..n)
        .map(|k| {
            let kf = k as f64;
            (kf * (kf + 2.0 * lambda - 1.0) / (4.0 * (kf + lambda) * (kf + lambda - 1.0))).sqrt()
        })
        .collect();
    let mut jm = DMatrix::<f64>::zeros(n, n);
    for (k, &b) in off.iter().enumerate() {
        jm[(k + 1, k)] = b;
        jm[(k, k + 1)] = b;
    }
    let mass = (0.5 * PI.ln() + ln_gamma_pos(lambda + 0.5)? - ln_gamma_pos(lambda + 1.0)?).exp();
    let mut nodes: Vec<f64> = jm.symmetric_eigenvalues().iter().copied().collect();
    nodes.sort_by(f64::total_cmp);
    let weights = nodes
        .iter()
        .map(|&x| {
            // orthonormal recurrence: b_{k+1} q_{k+1} = x q_k - b_k q_{k-1}
            let (mut prev, mut cur) = (0.0, 1.0 / mass.sqrt());
            let mut sum = cur * cur;
            for k in 0..n - 1 {
                let b_prev = if k == 0 { 0.0 } else { off[k - 1] };
                let next = (x * cur - b_prev * prev) / off[k];
                prev = cur;
                cur = next;
                sum += cur * cur;
            }
            1.0 / sum
        })
        .collect();
    Ok((nodes, weights))
}

fn check_finite(v: ComplexValue, node: f64) -> Result<ComplexValue> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFiniteIntegrand { node })
    }
}

/// `∫_{-T}^{T} f` by the composite rule of `spec`.
pub fn integrate_line<F>(f: F, spec: &QuadratureSpec) -> Result<ComplexValue>
where
    F: Fn(f64) -> Result<ComplexValue>,
{
    let (xs, ws) = spec.nodes()?;
    let mut acc = Complex64::new(0.0, 0.0);
    for (&x, &w) in xs.iter().zip(&ws) {
        acc += w * check_finite(f(x)?, x)?;
    }
    Ok(acc)
}

/// `f_r` times the tensor weight at every node of `[-T, T]^r`, in row-major order.
///
/// Per-axis factors (weight times envelope, `tanh`, `sech`) are tabulated
/// once; each grid point then only maps to the ball and evaluates `P_n^μ`.
fn weighted_samples(params: &FamilyParams, xs: &[f64], ws: &[f64]) -> Result<Vec<f64>> {
    let r = params.r();
    let n = xs.len();
    let inner = n.pow(r as u32 - 1);
    let tanh: Vec<f64> = xs.iter().map(|x| x.tanh()).collect();
    let sech: Vec<f64> = xs.iter().map(|x| (-ln_cosh(*x)).exp()).collect();
    let scaled: Vec<Vec<f64>> = (0..r)
        .map(|axis| {
            let p = envelope_power(params, axis);
            xs.iter().zip(ws).map(|(x, w)| w * (-p * ln_cosh(*x)).exp()).collect()
        })
        .collect();
    let slabs: Vec<Result<Vec<f64>>> = (0..n)
        .into_par_iter()
        .map(|i0| {
            let mut out = Vec::with_capacity(inner);
            let mut idx = vec![0; r];
            let mut ups = vec![0.0; r];
            idx[0] = i0;
            for flat in 0..inner {
                let mut rest = flat;
                for axis in (1..r).rev() {
                    idx[axis] = rest % n;
                    rest /= n;
                }
                let mut factor = 1.0;
                let mut radius = 1.0;
                for (axis, &i) in idx.iter().enumerate() {
                    factor *= scaled[axis][i];
                    ups[axis] = tanh[i] * radius;
                    radius *= sech[i];
                }
                if factor == 0.0 {
                    out.push(0.0);
                    continue;
                }
                let v = factor * basis_eval_coords(&params.n, params.mu, &ups)?;
                if !v.is_finite() {
                    return Err(Error::NonFiniteIntegrand { node: xs[i0] });
                }
                out.push(v);
            }
            Ok(out)
        })
        .collect();
    let mut all = Vec::with_capacity(n * inner);
    for slab in slabs {
        all.extend(slab?);
    }
    Ok(all)
}

/// Contracts the last axis of a row-major tensor `(outer, n)` against
/// `phase[g][k]`, producing `(outer', g)` with the contracted axis moved to
/// the back of the frequency block.
fn contract(data: &[Complex64], outer: usize, n: usize, trailing: usize, phase: &[Vec<Complex64>]) -> Vec<Complex64> {
    // layout in: [outer][n][trailing], out: [outer][g][trailing]
    let g = phase.len();
    let mut out = vec![Complex64::new(0.0, 0.0); outer * g * trailing];
    for o in 0..outer {
        for (gi, row) in phase.iter().enumerate() {
            let dst = &mut out[(o * g + gi) * trailing..(o * g + gi + 1) * trailing];
            for (k, &e) in row.iter().enumerate() {
                let src = &data[(o * n + k) * trailing..(o * n + k + 1) * trailing];
                for (d, &s) in dst.iter_mut().zip(src) {
                    *d += e * s;
                }
            }
        }
    }
    out
}

/// `∫ e^{-iξ·x} f_r(x) dx` over `[-T, T]^r` for every `ξ` of the tensor grid
/// `axes[0] × ... × axes[r-1]`, returned in row-major order.
pub fn fourier_numeric_grid(params: &FamilyParams, axes: &[Vec<f64>], spec: &QuadratureSpec) -> Result<Vec<ComplexValue>> {
    let r = params.r();
    if axes.len() != r || axes.iter().any(|a| a.is_empty()) {
        return Err(Error::InvalidParameter(format!("need {r} non-empty frequency axes")));
    }
    let (xs, ws) = spec.nodes()?;
    let n = xs.len();
    let samples = weighted_samples(params, &xs, &ws)?;
    let mut data: Vec<Complex64> = samples.into_iter().map(|v| Complex64::new(v, 0.0)).collect();
    let mut trailing = 1;
    for axis in (0..r).rev() {
        let phase: Vec<Vec<Complex64>> = axes[axis]
            .iter()
            .map(|&xi| xs.iter().map(|&x| Complex64::from_polar(1.0, -xi * x)).collect())
            .collect();
        let outer = n.pow(axis as u32);
        data = contract(&data, outer, n, trailing, &phase);
        trailing *= axes[axis].len();
    }
    Ok(data)
}

/// `∫ e^{-iξ·x} f_r(x) dx` over `[-T, T]^r`.
pub fn fourier_numeric(params: &FamilyParams, xi: &FrequencyVector, spec: &QuadratureSpec) -> Result<ComplexValue> {
    let axes: Vec<Vec<f64>> = xi.components().iter().map(|&v| vec![v]).collect();
    Ok(fourier_numeric_grid(params, &axes, spec)?[0])
}

/// Univariate transform after `u = tanh x`:
/// `∫_{-1}^{1} (1 - u²)^(a-1) ((1+u)/(1-u))^(-iξ/2) C_n^(μ)(u) du`,
/// integrated in the distance `v = 1 - |u|` to the nearer endpoint on panels
/// `[q^{k+1}, q^k]`, `k < levels`, plus `[0, q^levels]`.
pub fn fourier_numeric_tanh(params: &FamilyParams, xi: &FrequencyVector, levels: usize, order: usize) -> Result<ComplexValue> {
    if params.r() != 1 || xi.dim() != 1 {
        return Err(Error::InvalidParameter("the tanh-substituted oracle is univariate".into()));
    }
    let xi = xi.components()[0];
    let (gx, gw) = gauss_legendre(order)?;
    const RATIO: f64 = 0.25;
    let mut edges: Vec<f64> = (0..=levels).map(|k| RATIO.powi(k as i32)).collect();
    edges.push(0.0);
    let mut acc = Complex64::new(0.0, 0.0);
    for side in [1.0, -1.0] {
        for pair in edges.windows(2) {
            let (hi, lo) = (pair[0], pair[1]);
            let half = 0.5 * (hi - lo);
            let mid = 0.5 * (hi + lo);
            for (&t, &w) in gx.iter().zip(&gw) {
                let v = mid + half * t;
                let u = side * (1.0 - v);
                // ln((1+u)/(1-u)) = side * (ln(2-v) - ln v)
                let log_ratio = side * ((2.0 - v).ln() - v.ln());
                let envelope = ((params.a - 1.0) * (v.ln() + (2.0 - v).ln())).exp();
                let poly = basis_eval_coords(&params.n, params.mu, &[u])?;
                let kernel = Complex64::from_polar(1.0, -xi / 2.0 * log_ratio);
                acc += check_finite(half * w * envelope * poly * kernel, u)?;
            }
        }
    }
    Ok(acc)
}

/// Gram matrix `<P_n, P_m>_μ` over `indices`, all of the same dimension `r`.
///
/// Uses `x_j = cos θ_1 ⋯ cos θ_{j-1} sin θ_j`, for which
/// `1 - |x|² = Π cos² θ_k` and `dx = Π cos^(r-k+1) θ_k dθ`.
pub fn ball_gram(indices: &[MultiIndex], params: BallParams, nodes_per_axis: usize) -> Result<Vec<Vec<f64>>> {
    let r = indices.first().map(MultiIndex::dim).unwrap_or(0);
    if r == 0 || indices.iter().any(|n| n.dim() != r) {
        return Err(Error::InvalidParameter("ball Gram matrix needs indices of one positive dimension".into()));
    }
    let mu = params.mu();
    let (gx, gw) = gauss_legendre(nodes_per_axis)?;
    let thetas: Vec<f64> = gx.iter().map(|t| FRAC_PI_2 * t).collect();
    let total = nodes_per_axis.pow(r as u32);
    let k = indices.len();
    let rows: Vec<Result<(f64, Vec<f64>)>> = (0..total)
        .into_par_iter()
        .map(|flat| {
            let mut rest = flat;
            let mut idx = vec![0; r];
            for axis in (0..r).rev() {
                idx[axis] = rest % nodes_per_axis;
                rest /= nodes_per_axis;
            }
            let mut x = Vec::with_capacity(r);
            let mut radius = 1.0;
            let mut weight = 1.0;
            for (axis, &i) in idx.iter().enumerate() {
                let (s, c) = thetas[i].sin_cos();
                x.push(radius * s);
                radius *= c;
                let power = 2.0 * mu - 1.0 + (r - axis) as f64;
                weight *= FRAC_PI_2 * gw[i] * c.max(0.0).powf(power);
            }
            let values = indices
                .iter()
                .map(|n| basis_eval_coords(n, mu, &x))
                .collect::<Result<Vec<f64>>>()?;
            Ok((weight, values))
        })
        .collect();
    let mut gram = vec![vec![0.0; k]; k];
    for row in rows {
        let (w, v) = row?;
        for i in 0..k {
            let wi = w * v[i];
            for j in i..k {
                gram[i][j] += wi * v[j];
            }
        }
    }
    for i in 0..k {
        for j in 0..i {
            gram[i][j] = gram[j][i];
        }
    }
    Ok(gram)
}

/// `<P_n, P_m>_μ = ∫_B P_n P_m (1 - |x|²)^(μ - 1/2) dx`.
pub fn ball_inner_product_numeric(n: &MultiIndex, m: &MultiIndex, params: BallParams, nodes_per_axis: usize) -> Result<f64> {
    if n.dim() != m.dim() {
        return Err(Error::InvalidParameter("indices of different dimension".into()));
    }
    let g = ball_gram(&[n.clone(), m.clone()], params, nodes_per_axis)?;
    Ok(g[0][1])
}

/// `∫ C_n^(λ) C_m^(λ) (1 - x²)^(λ - 1/2) dx` for `n, m <= max_degree` by an
/// `nodes`-point Gauss–Gegenbauer rule.
pub fn gegenbauer_gram(max_degree: usize, lambda: f64, nodes: usize) -> Result<Vec<Vec<f64>>> {
    let (xs, ws) = gauss_gegenbauer(nodes, lambda)?;
    let k = max_degree + 1;
    let mut gram = vec![vec![0.0; k]; k];
    for (&x, &w) in xs.iter().zip(&ws) {
        let vals = (0..k)
            .map(|n| crate::classical::gegenbauer_real(n, lambda, x))
            .collect::<Result<Vec<f64>>>()?;
        for i in 0..k {
            for j in 0..k {
                gram[i][j] += w * vals[i] * vals[j];
            }
        }
    }
    Ok(gram)
}

/// `∫ |Γ(a1 + ix) Γ(a2 + ix)|² p_n(x) conj(p_m(x)) dx` for
/// `p_k = p_k(·; a1, a2, a2, a1)`, `n, m <= max_degree`.
pub fn hahn_gram(max_degree: usize, a1: f64, a2: f64, spec: &QuadratureSpec) -> Result<Vec<Vec<ComplexValue>>> {
    let hahn = HahnParameters::real(a1, a2, a2, a1)?;
    let (xs, ws) = spec.nodes()?;
    let k = max_degree + 1;
    let mut gram = vec![vec![Complex64::new(0.0, 0.0); k]; k];
    for (&x, &w) in xs.iter().zip(&ws) {
        let weight = w * hahn_weight(x, a1, a2)?;
        if weight == 0.0 {
            continue;
        }
        let vals = (0..k)
            .map(|n| continuous_hahn(n, Complex64::new(x, 0.0), &hahn))
            .collect::<Result<Vec<_>>>()?;
        for i in 0..k {
            for j in 0..k {
                gram[i][j] += check_finite(weight * vals[i] * vals[j].conj(), x)?;
            }
        }
    }
    Ok(gram)
}

/// `∫ _rD_n(ix; a1, a2) _rD_m(-ix; a2, a1) dx` over `[-T, T]^r` for every
/// pair of `indices`.
pub fn dfamily_gram(a1: f64, a2: f64, indices: &[MultiIndex], spec: &QuadratureSpec) -> Result<Vec<Vec<ComplexValue>>> {
    let r = indices.first().map(MultiIndex::dim).unwrap_or(0);
    if r == 0 || indices.iter().any(|n| n.dim() != r) {
        return Err(Error::InvalidParameter("D pairing needs indices of one positive dimension".into()));
    }
    let left: Vec<DParams> = indices.iter().map(|n| DParams::new(a1, a2, n.clone())).collect::<Result<_>>()?;
    let right: Vec<DParams> = indices.iter().map(|n| DParams::new(a2, a1, n.clone())).collect::<Result<_>>()?;
    let (xs, ws) = spec.nodes()?;
    let n = xs.len();
    let total = n.pow(r as u32);
    let k = indices.len();
    let rows: Vec<Result<Vec<ComplexValue>>> = (0..total)
        .into_par_iter()
        .map(|flat| {
            let mut rest = flat;
            let mut plus = vec![Complex64::new(0.0, 0.0); r];
            let mut minus = plus.clone();
            let mut w = 1.0;
            for axis in (0..r).rev() {
                let i = rest % n;
                rest /= n;
                plus[axis] = Complex64::new(0.0, xs[i]);
                minus[axis] = Complex64::new(0.0, -xs[i]);
                w *= ws[i];
            }
            let mut out = Vec::with_capacity(2 * k);
            for p in &left {
                out.push(w * d_family_eval(&plus, p)?);
            }
            for p in &right {
                out.push(d_family_eval(&minus, p)?);
            }
            Ok(out)
        })
        .collect();
    let mut gram = vec![vec![Complex64::new(0.0, 0.0); k]; k];
    for row in rows {
        let v = row?;
        for i in 0..k {
            for j in 0..k {
                gram[i][j] += v[i] * v[k + j];
            }
        }
    }
    Ok(gram)
}

/// Both sides of Parseval's identity for `f = f_r(·; n, a1, μ)` and
/// `g = f_r(·; m, a2, μ)` with `μ = a1 + a2 - 1/2`:
/// `(2π)^r ∫ f g dx` and `∫ F(f)(ξ) conj(F(g)(ξ)) dξ`, the latter with the
/// transforms taken from `transform`.
pub fn parseval_sides<T>(
    d: &DParams,
    m: &MultiIndex,
    x_spec: &QuadratureSpec,
    xi_spec: &QuadratureSpec,
    transform: T,
) -> Result<(ComplexValue, ComplexValue)>
where
    T: Fn(&FamilyParams, &FrequencyVector) -> Result<ComplexValue> + Sync,
{
    let r = d.r();
    if m.dim() != r {
        return Err(Error::InvalidParameter("indices of different dimension".into()));
    }
    let mu = d.mu();
    let f = FamilyParams::new(d.a1, mu, d.n.clone())?;
    let g = FamilyParams::new(d.a2, mu, m.clone())?;
    let x_side = tensor_integral(r, x_spec, |x| {
        let mut s = Vec::with_capacity(r);
        let fv = f_r_eval_with(x, &f, &mut s)?;
        let gv = f_r_eval_with(x, &g, &mut s)?;
        Ok(Complex64::new(fv * gv, 0.0))
    })?;
    let xi_side = tensor_integral(r, xi_spec, |xi| {
        let v = FrequencyVector::new(xi.to_vec())?;
        Ok(transform(&f, &v)? * transform(&g, &v)?.conj())
    })?;
    Ok(((2.0 * PI).powi(r as i32) * x_side, xi_side))
}

/// `∫_{[-T,T]^r} h` by the tensor rule of `spec`, summed in node order.
pub fn tensor_integral<H>(r: usize, spec: &QuadratureSpec, h: H) -> Result<ComplexValue>
where
    H: Fn(&[f64]) -> Result<ComplexValue> + Sync,
{
    let (xs, ws) = spec.nodes()?;
    let n = xs.len();
    let inner = n.pow(r as u32 - 1);
    let slabs: Vec<Result<ComplexValue>> = (0..n)
        .into_par_iter()
        .map(|i0| {
            let mut x = vec![0.0; r];
            x[0] = xs[i0];
            let mut acc = Complex64::new(0.0, 0.0);
            for flat in 0..inner {
                let mut rest = flat;
                let mut w = ws[i0];
                for axis in (1..r).rev() {
                    let k = rest % n;
                    rest /= n;
                    x[axis] = xs[k];
                    w *= ws[k];
                }
                acc += w * check_finite(h(&x)?, x[0])?;
            }
            Ok(acc)
        })
        .collect();
    let mut total = Complex64::new(0.0, 0.0);
    for s in slabs {
        total += s?;
    }
    Ok(total)
}
