//! Identity-verification suites: each check compares a closed form with an
//! independent evaluation and produces one [`VerificationReport`].

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ball::{ball_norm, ball_operator_residual, BallParams, BallPoint, MultiIndex};
use crate::classical::{gegenbauer_norm, gegenbauer_real, hahn_orthogonality_constant, jacobi};
use crate::dfamily::{
    d_constant_bivariate, d_constant_univariate, d_constant_univariate_norm_form, d_orthogonality_constant,
    d_pairing_integrand, DParams,
};
use crate::error::{Error, Result};
use crate::params;
use crate::quadrature::{
    ball_gram, dfamily_gram, fourier_numeric_grid, gegenbauer_gram, hahn_gram, parseval_sides, QuadratureSpec,
};
use crate::report::{sort_reports, Parameters, VerificationReport};
use crate::special::{factorial, pochhammer_real, ComplexValue};
use crate::tanh_family::{
    fourier_closed_form, fourier_closed_form_scale, fourier_hahn_product, fourier_via_recursion, FamilyParams,
    FrequencyVector, PeelMode,
};

/// A named group of checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    GegenbauerOrt,
    BallOrt,
    BallPde,
    FourierPaths,
    FourierOracle,
    HahnOrt,
    Parseval,
    DfamilyOrt,
    All,
}

impl Suite {
    /// Every suite except [`Suite::All`], in run order.
    pub const INDIVIDUAL: [Suite; 8] = [
        Suite::GegenbauerOrt,
        Suite::BallOrt,
        Suite::BallPde,
        Suite::FourierPaths,
        Suite::FourierOracle,
        Suite::HahnOrt,
        Suite::Parseval,
        Suite::DfamilyOrt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::GegenbauerOrt => "gegenbauer-ort",
            Suite::BallOrt => "ball-ort",
            Suite::BallPde => "ball-pde",
            Suite::FourierPaths => "fourier-paths",
            Suite::FourierOracle => "fourier-oracle",
            Suite::HahnOrt => "hahn-ort",
            Suite::Parseval => "parseval",
            Suite::DfamilyOrt => "dfamily-ort",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::INDIVIDUAL
            .iter()
            .chain([Suite::All].iter())
            .copied()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown suite '{s}'")))
    }
}

/// Knobs shared by every suite.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    /// Largest number of variables exercised (1 to 3).
    pub r_max: usize,
    /// Seed for the ChaCha8 generator behind random parameter draws.
    pub seed: u64,
    /// Replaces every relative tolerance when set.
    pub tolerance: Option<f64>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            r_max: 3,
            seed: 0,
            tolerance: None,
        }
    }
}

impl SuiteConfig {
    fn tol(&self, default: f64) -> f64 {
        self.tolerance.unwrap_or(default)
    }

    fn dims(&self, cap: usize) -> std::ops::RangeInclusive<usize> {
        1..=self.r_max.clamp(1, cap)
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }
}

/// Runs `suite` and returns its reports in canonical order.
pub fn run_suite(suite: Suite, config: &SuiteConfig) -> Vec<VerificationReport> {
    let mut out = match suite {
        Suite::All => Suite::INDIVIDUAL.iter().flat_map(|s| run_one(*s, config)).collect(),
        other => run_one(other, config),
    };
    sort_reports(&mut out);
    out
}

fn run_one(suite: Suite, config: &SuiteConfig) -> Vec<VerificationReport> {
    match suite {
        Suite::GegenbauerOrt => {
            let mut v = gegenbauer_orthogonality(config);
            v.extend(jacobi_relation(config));
            v
        }
        Suite::BallOrt => ball_orthogonality(config),
        Suite::BallPde => ball_pde(config),
        Suite::FourierPaths => fourier_paths(config),
        Suite::FourierOracle => fourier_oracle(config),
        Suite::HahnOrt => hahn_orthogonality(config),
        Suite::Parseval => parseval(config),
        Suite::DfamilyOrt => {
            let mut v = dfamily_orthogonality(config);
            v.extend(dfamily_constants(config));
            v
        }
        Suite::All => unreachable!("expanded by run_suite"),
    }
}

/// Turns an error into a failing report so a suite always returns data.
fn or_failed(name: &str, params: &Parameters, result: Result<Vec<VerificationReport>>) -> Vec<VerificationReport> {
    result.unwrap_or_else(|e| vec![VerificationReport::failed(name, params.clone(), &e.to_string())])
}

/// Fails `report` unless the coarse value moved by at most the report's
/// tolerance when the rule was refined.
pub fn refinement_gate(mut report: VerificationReport, fine: ComplexValue, floor: f64) -> VerificationReport {
    let drift = (report.lhs - fine).norm();
    if drift > (report.tolerance * fine.norm()).max(floor) {
        report.passed = false;
        report.low_confidence = true;
    }
    report
}

fn c(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

/// Orthogonality of `C_n^(λ)`, `n, m <= 6`, by a 200-node Gauss–Gegenbauer rule.
pub fn gegenbauer_orthogonality(config: &SuiteConfig) -> Vec<VerificationReport> {
    const NAME: &str = "gegenbauer-orthogonality";
    let tol = config.tol(1e-10);
    let mut out = Vec::new();
    for lambda in [0.3, 1.0, 2.5] {
        let base = params! {"lambda" => lambda};
        out.extend(or_failed(NAME, &base, (|| {
            let gram = gegenbauer_gram(6, lambda, 200)?;
            let fine = gegenbauer_gram(6, lambda, 400)?;
            let mut v = Vec::new();
            for n in 0..=6 {
                let h = gegenbauer_norm(n, lambda)?;
                for m in 0..=6 {
                    let p = params! {"lambda" => lambda, "n" => n, "m" => m};
                    let report = if n == m {
                        VerificationReport::compare_real(NAME, p, gram[n][m], h, tol, 0.0)
                    } else {
                        VerificationReport::compare_real(NAME, p, gram[n][m], 0.0, tol, tol * h)
                    };
                    v.push(refinement_gate(report, c(fine[n][m]), tol * h));
                }
            }
            Ok(v)
        })()));
    }
    out
}

/// `C_n^(λ) = (2λ)_n / (λ+1/2)_n · P_n^(λ-1/2, λ-1/2)` at random points.
pub fn jacobi_relation(config: &SuiteConfig) -> Vec<VerificationReport> {
    const NAME: &str = "jacobi-gegenbauer";
    let tol = config.tol(1e-12);
    let mut rng = config.rng(1);
    (0..100)
        .map(|_| {
            let x: f64 = rng.gen_range(-1.0..=1.0);
            let n: usize = rng.gen_range(0..=10);
            let lambda: f64 = rng.gen_range(0.05..3.0);
            let p = params! {"x" => x, "n" => n, "lambda" => lambda};
            let check = || -> Result<VerificationReport> {
                let g = gegenbauer_real(n, lambda, x)?;
                let ratio = pochhammer_real(2.0 * lambda, n)? / pochhammer_real(lambda + 0.5, n)?;
                let j = ratio * jacobi(n, lambda - 0.5, lambda - 0.5, x)?;
                // sup of |C_n| on [-1, 1]
                let sup = pochhammer_real(2.0 * lambda, n)? / factorial(n);
                Ok(VerificationReport::compare_real(NAME, p.clone(), g, j, tol, tol * sup))
            };
            check().unwrap_or_else(|e| VerificationReport::failed(NAME, p.clone(), &e.to_string()))
        })
        .collect()
}

/// `<P_n, P_m>_μ = h_n δ_{nm}` by quadrature on the ball.
pub fn ball_orthogonality(config: &SuiteConfig) -> Vec<VerificationReport> {
    const NAME: &str = "ball-orthogonality";
    let mut out = Vec::new();
    for r in config.dims(3) {
        let (max_degree, tol) = if r <= 2 { (3, config.tol(1e-8)) } else { (2, config.tol(1e-6)) };
        let indices = MultiIndex::up_to_degree(max_degree, r);
        for mu in [0.5, 1.5] {
            let base = params! {"r" => r, "mu" => mu};
            out.extend(or_failed(NAME, &base, (|| {
                let bp = BallParams::new(mu)?;
                let gram = ball_gram(&indices, bp, 32)?;
                let fine = ball_gram(&indices, bp, 64)?;
                let norms: Vec<f64> = indices.iter().map(|n| ball_norm(n, bp)).collect::<Result<_>>()?;
                let mut v = Vec::new();
                for (i, n) in indices.iter().enumerate() {
                    for (j, m) in indices.iter().enumerate() {
                        let p = params! {"r" => r, "mu" => mu, "n" => n, "m" => m};
                        let floor = tol * (norms[i] * norms[j]).sqrt();
                        let report = if i == j {
                            VerificationReport::compare_real(NAME, p, gram[i][j], norms[i], tol, 0.0)
                        } else {
                            VerificationReport::compare_real(NAME, p, gram[i][j], 0.0, tol, floor)
                        };
                        v.push(refinement_gate(report, c(fine[i][j]), floor));
                    }
                }
                Ok(v)
            })()));
        }
    }
    out
}

/// Step sizes of the finite-difference residual.
pub const PDE_STEPS: [f64; 3] = [1e-2, 5e-3, 2.5e-3];

/// Least-squares slope of `log residual` against `log h`.
pub fn log_log_slope(hs: &[f64], residuals: &[f64]) -> f64 {
    let xs: Vec<f64> = hs.iter().map(|h| h.ln()).collect();
    let ys: Vec<f64> = residuals.iter().map(|r| r.ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    num / den
}

/// The eigen-equation residual of `P_n^μ` decays like `h²`; for `|n| <= 1`
/// every stencil is exact and the residual itself must vanish.
pub fn ball_pde(config: &SuiteConfig) -> Vec<VerificationReport> {
    let tol = config.tol(0.1);
    let mut rng = config.rng(2);
    let dims: Vec<usize> = config.dims(3).collect();
    (0..20)
        .map(|_| {
            let r = dims[rng.gen_range(0..dims.len())];
            let total = rng.gen_range(0..=3);
            let candidates = MultiIndex::with_total_degree(total, r);
            let n = candidates[rng.gen_range(0..candidates.len())].clone();
            let mu: f64 = rng.gen_range(0.3..2.0);
            let dir: Vec<f64> = (0..r).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let len = dir.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-12);
            let radius = rng.gen_range(0.0..0.85);
            let x: Vec<f64> = dir.iter().map(|v| v / len * radius).collect();
            let p = params! {"r" => r, "n" => &n, "mu" => mu, "x" => x.as_slice()};
            let name = if total <= 1 { "ball-pde-exact" } else { "ball-pde-slope" };
            let check = || -> Result<VerificationReport> {
                let point = BallPoint::new(x.clone())?;
                let bp = BallParams::new(mu)?;
                let res = PDE_STEPS
                    .iter()
                    .map(|&h| ball_operator_residual(&n, bp, &point, h))
                    .collect::<Result<Vec<f64>>>()?;
                if total <= 1 {
                    Ok(VerificationReport::compare_real(name, p.clone(), res[0], 0.0, tol, 1e-8))
                } else {
                    let slope = log_log_slope(&PDE_STEPS, &res);
                    Ok(VerificationReport::compare_real(name, p.clone(), slope, 2.0, tol, 0.0))
                }
            };
            check().unwrap_or_else(|e| VerificationReport::failed(name, p.clone(), &e.to_string()))
        })
        .collect()
}

/// Closed form against both peeling recursions and the Hahn product on 500 draws.
pub fn fourier_paths(config: &SuiteConfig) -> Vec<VerificationReport> {
    let tol = config.tol(1e-11);
    let mut rng = config.rng(3);
    let dims: Vec<usize> = config.dims(3).collect();
    let mut out = Vec::with_capacity(1500);
    for _ in 0..500 {
        let r = dims[rng.gen_range(0..dims.len())];
        let n = loop {
            let v: Vec<usize> = (0..r).map(|_| rng.gen_range(0..=5)).collect();
            if v.iter().sum::<usize>() <= 6 {
                break MultiIndex::new(v).expect("nonempty");
            }
        };
        let a: f64 = rng.gen_range(0.2..2.5);
        let mu: f64 = rng.gen_range(0.05..2.5);
        let xi: Vec<f64> = (0..r).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let p = params! {"r" => r, "n" => &n, "a" => a, "mu" => mu, "xi" => xi.as_slice()};
        let check = || -> Result<Vec<VerificationReport>> {
            let fam = FamilyParams::new(a, mu, n.clone())?;
            let xv = FrequencyVector::new(xi.clone())?;
            let closed = fourier_closed_form(&fam, &xv)?;
            let scale = fourier_closed_form_scale(&fam, &xv)?;
            let low = closed.norm() < 1e-10 * scale;
            let paths = [
                ("fourier-path-first", fourier_via_recursion(&fam, &xv, PeelMode::First)?),
                ("fourier-path-last", fourier_via_recursion(&fam, &xv, PeelMode::Last)?),
                ("fourier-path-hahn", fourier_hahn_product(&fam, &xv)?),
            ];
            Ok(paths
                .into_iter()
                .map(|(name, v)| {
                    VerificationReport::compare(name, p.clone(), v, closed, tol, tol * scale).with_low_confidence(low)
                })
                .collect())
        };
        out.extend(or_failed("fourier-path", &p, check()));
    }
    out
}

/// Frequencies per axis on which the oracle is compared, by dimension.
pub fn oracle_axis(r: usize) -> Vec<f64> {
    match r {
        1 => (0..=12).map(|k| -3.0 + 0.5 * k as f64).collect(),
        2 => vec![-3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0],
        _ => vec![-3.0, -0.5, 1.0, 3.0],
    }
}

fn oracle_gated(r: usize, a: f64, mu: f64, n: &MultiIndex) -> bool {
    if r <= 2 {
        return true;
    }
    let e = n.entries();
    a == 0.5 && mu == 1.25 && (n.total_degree() == 0 || e == [4, 0, 0] || e == [0, 0, 4] || e == [1, 2, 1])
}

/// Closed-form transform against tensor quadrature of the defining integral.
pub fn fourier_oracle(config: &SuiteConfig) -> Vec<VerificationReport> {
    const NAME: &str = "fourier-oracle";
    let tol = config.tol(1e-6);
    let floor = 1e-9;
    let mut out = Vec::new();
    for r in config.dims(3) {
        let axis = oracle_axis(r);
        let axes = vec![axis.clone(); r];
        for a in [0.5, 1.0, 1.75] {
            for mu in [0.5, 1.25] {
                for n in MultiIndex::up_to_degree(4, r) {
                    let base = params! {"r" => r, "n" => &n, "a" => a, "mu" => mu};
                    out.extend(or_failed(NAME, &base, (|| {
                        let fam = FamilyParams::new(a, mu, n.clone())?;
                        let spec = QuadratureSpec::fourier(r, a);
                        let numeric = fourier_numeric_grid(&fam, &axes, &spec)?;
                        let fine = if oracle_gated(r, a, mu, &n) {
                            Some(fourier_numeric_grid(&fam, &axes, &spec.doubled())?)
                        } else {
                            None
                        };
                        let mut v = Vec::with_capacity(numeric.len());
                        for (k, value) in numeric.iter().enumerate() {
                            let mut rest = k;
                            let mut xi = vec![0.0; r];
                            for slot in xi.iter_mut().rev() {
                                *slot = axis[rest % axis.len()];
                                rest /= axis.len();
                            }
                            let closed = fourier_closed_form(&fam, &FrequencyVector::new(xi.clone())?)?;
                            let mut p = base.clone();
                            p.insert("xi".into(), xi.as_slice().into());
                            let report = VerificationReport::compare(NAME, p, *value, closed, tol, floor);
                            v.push(match &fine {
                                Some(f) => refinement_gate(report, f[k], floor),
                                None => report,
                            });
                        }
                        Ok(v)
                    })()));
                }
            }
        }
    }
    out.extend(known_fourier_value(config));
    out
}

/// `∫ sech x e^{-i0x} dx = π` in closed form and by quadrature.
pub fn known_fourier_value(config: &SuiteConfig) -> Vec<VerificationReport> {
    let tol = config.tol(1e-12);
    let p = params! {"r" => 1usize, "n" => 0usize, "a" => 0.5, "mu" => 0.5, "xi" => 0.0};
    let check = || -> Result<Vec<VerificationReport>> {
        let fam = FamilyParams::new(0.5, 0.5, MultiIndex::new(vec![0])?)?;
        let xi = FrequencyVector::new(vec![0.0])?;
        let closed = fourier_closed_form(&fam, &xi)?;
        let numeric = fourier_numeric_grid(&fam, &[vec![0.0]], &QuadratureSpec::fourier(1, 0.5))?[0];
        Ok(vec![
            VerificationReport::compare("fourier-known-value-closed", p.clone(), closed, c(PI), tol, 0.0),
            VerificationReport::compare("fourier-known-value-oracle", p.clone(), numeric, c(PI), tol, 0.0),
        ])
    };
    or_failed("fourier-known-value", &p, check())
}

/// Orthogonality of `p_n(·; a1, a2, a2, a1)` under `|Γ(a1+ix) Γ(a2+ix)|²`.
pub fn hahn_orthogonality(config: &SuiteConfig) -> Vec<VerificationReport> {
    const NAME: &str = "hahn-orthogonality";
    let tol = config.tol(1e-6);
    let mut out = Vec::new();
    for (a1, a2) in [(0.5, 0.5), (1.0, 0.75)] {
        let base = params! {"a1" => a1, "a2" => a2};
        out.extend(or_failed(NAME, &base, (|| {
            let spec = QuadratureSpec::new(480, 12.0)?;
            let gram = hahn_gram(4, a1, a2, &spec)?;
            let fine = hahn_gram(4, a1, a2, &spec.doubled())?;
            let norms = (0..=4).map(|n| hahn_orthogonality_constant(n, a1, a2)).collect::<Result<Vec<_>>>()?;
            let mut v = Vec::new();
            for n in 0..=4 {
                for m in 0..=4 {
                    let p = params! {"a1" => a1, "a2" => a2, "n" => n, "m" => m};
                    let floor = tol * (norms[n] * norms[m]).sqrt();
                    let report = if n == m {
                        VerificationReport::compare(NAME, p, gram[n][m], c(norms[n]), tol, 0.0)
                    } else {
                        VerificationReport::compare(NAME, p, gram[n][m], c(0.0), tol, floor)
                    };
                    v.push(refinement_gate(report, fine[n][m], floor));
                }
            }
            Ok(v)
        })()));
    }
    let p = params! {"a1" => 0.5, "a2" => 0.5, "n" => 0usize};
    out.extend(or_failed("hahn-known-value", &p, (|| {
        Ok(vec![VerificationReport::compare_real(
            "hahn-known-value",
            p.clone(),
            hahn_orthogonality_constant(0, 0.5, 0.5)?,
            2.0 * PI,
            config.tol(1e-14),
            0.0,
        )])
    })()));
    out
}

/// Parseval's identity for pairs of tanh-family members and the three
/// quantities it ties together: the spatial pairing, the frequency pairing,
/// and the `D` pairing.
pub fn parseval(config: &SuiteConfig) -> Vec<VerificationReport> {
    let tol = config.tol(1e-6);
    let floor: f64 = 1e-8;
    let cases: Vec<(f64, f64, Vec<usize>, Vec<usize>)> = vec![
        (0.5, 0.5, vec![0], vec![0]),
        (0.5, 0.5, vec![1], vec![0]),
        (1.0, 0.75, vec![2], vec![2]),
        (1.0, 0.5, vec![1, 0], vec![1, 0]),
        (1.0, 0.5, vec![0, 1], vec![1, 0]),
        (0.75, 0.75, vec![1, 1], vec![1, 1]),
    ];
    let mut out = Vec::new();
    for (a1, a2, n, m) in cases {
        let r = n.len();
        if r > config.r_max {
            continue;
        }
        let n = MultiIndex::new(n).expect("nonempty");
        let m = MultiIndex::new(m).expect("nonempty");
        let p = params! {"r" => r, "a1" => a1, "a2" => a2, "n" => &n, "m" => &m};
        out.extend(or_failed("parseval", &p, (|| {
            let d = DParams::new(a1, a2, n.clone())?;
            let x_spec = QuadratureSpec::fourier(r, a1 + a2);
            let xi_spec = QuadratureSpec::dfamily(a1, a2);
            let (x_side, xi_side) = parseval_sides(&d, &m, &x_spec, &xi_spec, fourier_closed_form)?;
            let diag = n == m;
            let h = if diag { ball_norm(&n, BallParams::new(d.mu())?)? } else { 0.0 };
            let spatial = x_side / (2.0 * PI).powi(r as i32);
            let pairing = dfamily_gram(a1, a2, &[n.clone(), m.clone()], &xi_spec)?[0][1];
            let constant = if diag { d_orthogonality_constant(&n, a1, a2)? } else { 0.0 };
            let d_floor = floor.max(tol * constant);
            Ok(vec![
                VerificationReport::compare("parseval-fourier", p.clone(), x_side, xi_side, tol, floor),
                VerificationReport::compare("parseval-ball", p.clone(), spatial, c(h), tol, floor),
                VerificationReport::compare("parseval-dfamily", p.clone(), pairing, c(constant), config.tol(1e-4), d_floor),
            ])
        })()));
    }
    out
}

/// Biorthogonality of `_rD_n` for `r <= 2`, `|n|, |m| <= 3`.
pub fn dfamily_orthogonality(config: &SuiteConfig) -> Vec<VerificationReport> {
    const NAME: &str = "dfamily-orthogonality";
    let diag_tol = config.tol(1e-4);
    let off_tol = config.tol(1e-5);
    let mut out = Vec::new();
    for r in config.dims(2) {
        let indices = MultiIndex::up_to_degree(3, r);
        for (a1, a2) in [(0.5, 0.5), (1.0, 0.75)] {
            let base = params! {"r" => r, "a1" => a1, "a2" => a2};
            out.extend(or_failed(NAME, &base, (|| {
                let spec = QuadratureSpec::dfamily(a1, a2);
                let gram = dfamily_gram(a1, a2, &indices, &spec)?;
                let fine = dfamily_gram(a1, a2, &indices, &spec.doubled())?;
                let consts = indices
                    .iter()
                    .map(|n| d_orthogonality_constant(n, a1, a2))
                    .collect::<Result<Vec<_>>>()?;
                let mut v = Vec::new();
                for (i, n) in indices.iter().enumerate() {
                    for (j, m) in indices.iter().enumerate() {
                        let p = params! {"r" => r, "a1" => a1, "a2" => a2, "n" => n, "m" => m};
                        let report = if i == j {
                            VerificationReport::compare(NAME, p, gram[i][j], c(consts[i]), diag_tol, 0.0)
                        } else {
                            let floor = off_tol * (consts[i] * consts[j]).sqrt();
                            VerificationReport::compare(NAME, p, gram[i][j], c(0.0), off_tol, floor)
                        };
                        let floor = off_tol * (consts[i] * consts[j]).sqrt();
                        v.push(refinement_gate(report, fine[i][j], floor));
                    }
                }
                Ok(v)
            })()));
        }
    }
    let p = params! {"r" => 1usize, "a1" => 0.5, "a2" => 0.5, "n" => 0usize};
    out.extend(or_failed("dfamily-known-value", &p, (|| {
        let zero = MultiIndex::new(vec![0])?;
        let g = dfamily_gram(0.5, 0.5, &[zero], &QuadratureSpec::dfamily(0.5, 0.5))?[0][0];
        Ok(vec![VerificationReport::compare(
            "dfamily-known-value",
            p.clone(),
            g,
            c(4.0 * PI),
            config.tol(1e-10),
            0.0,
        )])
    })()));
    out.extend(diagonal_integrand_sign(config));
    out
}

/// `_rD_n(ix; a1, a2) _rD_n(-ix; a2, a1)` is real and nonnegative on the real grid.
fn diagonal_integrand_sign(config: &SuiteConfig) -> Vec<VerificationReport> {
    const NAME: &str = "dfamily-diagonal-integrand";
    let tol = config.tol(1e-10);
    let mut rng = config.rng(4);
    let mut out = Vec::new();
    for r in config.dims(2) {
        for (a1, a2) in [(0.5, 0.5), (1.0, 0.75)] {
            for n in MultiIndex::up_to_degree(3, r) {
                let x: Vec<f64> = (0..r).map(|_| rng.gen_range(-6.0..6.0)).collect();
                let p = params! {"r" => r, "a1" => a1, "a2" => a2, "n" => &n, "x" => x.as_slice()};
                out.extend(or_failed(NAME, &p, (|| {
                    let d = DParams::new(a1, a2, n.clone())?;
                    let v = d_pairing_integrand(&x, &d, &n)?;
                    let target = c(v.re.abs());
                    Ok(vec![VerificationReport::compare(NAME, p.clone(), v, target, tol, 0.0)])
                })()));
            }
        }
    }
    out
}

/// The general-`r` constant against its univariate and bivariate displays.
pub fn dfamily_constants(config: &SuiteConfig) -> Vec<VerificationReport> {
    let tol = config.tol(1e-12);
    let mut out = Vec::new();
    for (a1, a2) in [(0.5, 0.5), (1.0, 0.75), (0.3, 1.9)] {
        for n in 0..=6 {
            let p = params! {"a1" => a1, "a2" => a2, "n" => n};
            out.extend(or_failed("dfamily-constant-r1", &p, (|| {
                let general = d_orthogonality_constant(&MultiIndex::new(vec![n])?, a1, a2)?;
                Ok(vec![
                    VerificationReport::compare_real(
                        "dfamily-constant-r1-gamma",
                        p.clone(),
                        general,
                        d_constant_univariate(n, a1, a2)?,
                        tol,
                        0.0,
                    ),
                    VerificationReport::compare_real(
                        "dfamily-constant-r1-norm",
                        p.clone(),
                        general,
                        d_constant_univariate_norm_form(n, a1, a2)?,
                        tol,
                        0.0,
                    ),
                ])
            })()));
        }
        if config.r_max >= 2 {
            for n1 in 0..=3 {
                for n2 in 0..=3 {
                    let n = MultiIndex::new(vec![n1, n2]).expect("nonempty");
                    let p = params! {"a1" => a1, "a2" => a2, "n" => &n};
                    out.extend(or_failed("dfamily-constant-r2", &p, (|| {
                        Ok(vec![VerificationReport::compare_real(
                            "dfamily-constant-r2",
                            p.clone(),
                            d_orthogonality_constant(&n, a1, a2)?,
                            d_constant_bivariate(n1, n2, a1, a2)?,
                            tol,
                            0.0,
                        )])
                    })()));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::INDIVIDUAL.iter().chain([Suite::All].iter()) {
            assert_eq!(s.name().parse::<Suite>().unwrap(), *s);
        }
        assert!("nonsense".parse::<Suite>().is_err());
    }

    #[test]
    fn slope_of_a_power_law() {
        let res: Vec<f64> = PDE_STEPS.iter().map(|h| 3.0 * h * h).collect();
        assert!((log_log_slope(&PDE_STEPS, &res) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn gate_fails_drifting_values() {
        let r = VerificationReport::compare_real("x", Parameters::new(), 1.0, 1.0, 1e-8, 0.0);
        assert!(refinement_gate(r.clone(), c(1.0 + 1e-10), 0.0).passed);
        let g = refinement_gate(r, c(1.1), 0.0);
        assert!(!g.passed && g.low_confidence);
    }

    #[test]
    fn fast_suites_pass() {
        let cfg = SuiteConfig { r_max: 2, ..SuiteConfig::default() };
        for suite in [Suite::GegenbauerOrt, Suite::BallPde, Suite::FourierPaths] {
            let reports = run_suite(suite, &cfg);
            assert!(!reports.is_empty());
            let failed: Vec<_> = reports.iter().filter(|r| !r.passed).collect();
            assert!(failed.is_empty(), "{suite}: {:?}", failed.first());
        }
    }

    #[test]
    fn reports_are_sorted_and_deterministic() {
        let cfg = SuiteConfig { r_max: 2, seed: 7, tolerance: None };
        let a = run_suite(Suite::FourierPaths, &cfg);
        let b = run_suite(Suite::FourierPaths, &cfg);
        assert_eq!(format!("{a:?}"), format!("{b:?}"));
        assert!(a.windows(2).all(|w| w[0].sort_key() <= w[1].sort_key()));
    }
}
