use anyhow::{anyhow, bail, ensure, Context, Result};
use ballfourier::ball::{ball_basis_eval, BallParams, BallPoint, MultiIndex};
use ballfourier::classical::{continuous_hahn, gegenbauer, jacobi, HahnParameters};
use ballfourier::dfamily::{d_family_eval, DParams};
use ballfourier::quadrature::{fourier_numeric, QuadratureSpec};
use ballfourier::report::{sort_reports, VerificationReport, DEFAULT_ABS_FLOOR};
use ballfourier::tanh_family::{f_r_eval, fourier_closed_form, theta_factor, FamilyParams, FrequencyVector};
use ballfourier::verify::{refinement_gate, run_suite, Suite, SuiteConfig};
use ballfourier::ComplexValue;

use crate::args::{EvalArgs, EvalFn, FamilyArgs, Format, FourierArgs, OutputArgs, TableArgs, TableFn, VerifyArgs};
use crate::output::{emit, records_csv, reports_csv, to_json, Input, Inputs, Record};

/// Whether every check a command ran came out as expected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Passed,
    Failed,
}

const MAX_GRID_POINTS: usize = 100_000;

fn require<T: Copy>(value: Option<T>, flag: &str) -> Result<T> {
    value.ok_or_else(|| anyhow!("missing {flag}"))
}

fn require_vec<'a, T>(value: &'a Option<Vec<T>>, flag: &str) -> Result<&'a [T]> {
    match value {
        Some(v) if !v.is_empty() => Ok(v),
        _ => bail!("missing {flag}"),
    }
}

fn reject(present: bool, flag: &str, why: &str) -> Result<()> {
    ensure!(!present, "{flag} is not accepted here: {why}");
    Ok(())
}

impl FamilyArgs {
    fn multi_index(&self) -> Result<MultiIndex> {
        let n = require_vec(&self.n, "--n")?;
        if let Some(r) = self.r {
            ensure!(r == n.len(), "--n has {} entries but --r is {r}", n.len());
        }
        MultiIndex::new(n.to_vec()).context("--n")
    }

    fn degree(&self) -> Result<usize> {
        let n = require_vec(&self.n, "--n")?;
        ensure!(n.len() == 1, "--n must be a single degree for this function");
        Ok(n[0])
    }

    fn family(&self) -> Result<FamilyParams> {
        let n = self.multi_index()?;
        let a = require(self.a, "--a")?;
        let mu = require(self.mu, "--mu")?;
        FamilyParams::new(a, mu, n).context("--a/--mu")
    }

    fn dparams(&self) -> Result<DParams> {
        reject(self.mu.is_some(), "--mu", "the D family uses mu = a1 + a2 - 1/2")?;
        let n = self.multi_index()?;
        let a1 = require(self.a1, "--a1")?;
        let a2 = require(self.a2, "--a2")?;
        DParams::new(a1, a2, n).context("--a1/--a2")
    }
}

fn family_inputs(p: &FamilyParams) -> Inputs {
    let mut inputs = Inputs::new();
    inputs.insert("a".into(), Input::Real(p.a));
    inputs.insert("mu".into(), Input::Real(p.mu));
    inputs.insert("n".into(), index_input(&p.n));
    inputs
}

fn d_inputs(p: &DParams) -> Inputs {
    let mut inputs = Inputs::new();
    inputs.insert("a1".into(), Input::Real(p.a1));
    inputs.insert("a2".into(), Input::Real(p.a2));
    inputs.insert("n".into(), index_input(&p.n));
    inputs
}

fn index_input(n: &MultiIndex) -> Input {
    Input::Ints(n.entries().iter().map(|&k| k as u64).collect())
}

fn point(x: &[f64], r: usize, flag: &str) -> Result<()> {
    ensure!(x.len() == r, "{flag} has {} entries but the multi-index has {r}", x.len());
    Ok(())
}

fn complex_point(args: &EvalArgs, r: usize) -> Result<Vec<ComplexValue>> {
    let x = require_vec(&args.x, "--x")?;
    point(x, r, "--x")?;
    let im = match &args.x_im {
        Some(v) => {
            point(v, r, "--x-im")?;
            v.clone()
        }
        None => vec![0.0; r],
    };
    Ok(x.iter().zip(im).map(|(&re, im)| ComplexValue::new(re, im)).collect())
}

fn write_records(records: &[Record], out: &OutputArgs, default: Format) -> Result<()> {
    let text = match out.format.unwrap_or(default) {
        Format::Json => to_json(records)?,
        Format::Csv => records_csv(records)?,
    };
    emit(&text, out.output.as_deref())
}

fn write_reports(reports: &[VerificationReport], out: &OutputArgs) -> Result<Outcome> {
    let text = match out.format.unwrap_or(Format::Json) {
        Format::Json => to_json(reports)?,
        Format::Csv => reports_csv(reports)?,
    };
    emit(&text, out.output.as_deref())?;
    Ok(if reports.iter().all(|r| r.passed) { Outcome::Passed } else { Outcome::Failed })
}

pub fn eval(args: &EvalArgs) -> Result<Outcome> {
    let fam = &args.family;
    let mut inputs = Inputs::new();
    let value = match args.function {
        EvalFn::Gegenbauer => {
            let n = fam.degree()?;
            let lambda = require(args.lambda, "--lambda")?;
            let x = complex_point(args, 1)?[0];
            inputs.insert("n".into(), Input::Int(n as u64));
            inputs.insert("lambda".into(), Input::Real(lambda));
            gegenbauer(n, lambda, x).context("--lambda")?
        }
        EvalFn::Jacobi => {
            let n = fam.degree()?;
            let alpha = require(args.alpha, "--alpha")?;
            let beta = require(args.beta, "--beta")?;
            reject(args.x_im.is_some(), "--x-im", "jacobi takes a real argument")?;
            let x = require_vec(&args.x, "--x")?;
            point(x, 1, "--x")?;
            inputs.insert("n".into(), Input::Int(n as u64));
            inputs.insert("alpha".into(), Input::Real(alpha));
            inputs.insert("beta".into(), Input::Real(beta));
            ComplexValue::new(jacobi(n, alpha, beta, x[0]).context("--alpha/--beta")?, 0.0)
        }
        EvalFn::Hahn => {
            let n = fam.degree()?;
            let abcd = require_vec(&args.hahn_params, "--hahn-params")?;
            ensure!(abcd.len() == 4, "--hahn-params needs four values a,b,c,d");
            let hp = HahnParameters::real(abcd[0], abcd[1], abcd[2], abcd[3]).context("--hahn-params")?;
            let x = complex_point(args, 1)?[0];
            inputs.insert("n".into(), Input::Int(n as u64));
            inputs.insert("hahn_params".into(), Input::Reals(abcd.to_vec()));
            continuous_hahn(n, x, &hp)?
        }
        EvalFn::Ball => {
            let n = fam.multi_index()?;
            let mu = require(fam.mu, "--mu")?;
            reject(args.x_im.is_some(), "--x-im", "ball polynomials take a real point")?;
            let x = require_vec(&args.x, "--x")?;
            point(x, n.dim(), "--x")?;
            let p = BallPoint::new(x.to_vec()).context("--x")?;
            let bp = BallParams::new(mu).context("--mu")?;
            inputs.insert("mu".into(), Input::Real(mu));
            inputs.insert("n".into(), index_input(&n));
            ComplexValue::new(ball_basis_eval(&n, bp, &p)?, 0.0)
        }
        EvalFn::FR => {
            let p = fam.family()?;
            reject(args.x_im.is_some(), "--x-im", "f_r takes a real point")?;
            let x = require_vec(&args.x, "--x")?;
            point(x, p.r(), "--x")?;
            inputs = family_inputs(&p);
            ComplexValue::new(f_r_eval(x, &p)?, 0.0)
        }
        EvalFn::DFamily => {
            let p = fam.dparams()?;
            let x = complex_point(args, p.r())?;
            inputs = d_inputs(&p);
            d_family_eval(&x, &p)?
        }
    };
    inputs.insert("x".into(), point_input(args.x.as_deref().unwrap_or_default(), args.function));
    if let Some(im) = &args.x_im {
        inputs.insert("x_im".into(), point_input(im, args.function));
    }
    write_records(&[Record::new(inputs, value)], &args.out, Format::Json)?;
    Ok(Outcome::Passed)
}

fn point_input(x: &[f64], function: EvalFn) -> Input {
    match function {
        EvalFn::Gegenbauer | EvalFn::Jacobi | EvalFn::Hahn => Input::Real(x[0]),
        _ => Input::Reals(x.to_vec()),
    }
}

pub fn fourier(args: &FourierArgs) -> Result<Outcome> {
    let p = args.family.family()?;
    let xi = require_vec(&args.xi, "--xi")?;
    point(xi, p.r(), "--xi")?;
    let xi = FrequencyVector::new(xi.to_vec()).context("--xi")?;
    let closed = fourier_closed_form(&p, &xi)?;
    let mut inputs = family_inputs(&p);
    inputs.insert("xi".into(), Input::Reals(xi.components().to_vec()));
    if !args.check {
        write_records(&[Record::new(inputs, closed)], &args.out, Format::Json)?;
        return Ok(Outcome::Passed);
    }
    ensure!(args.tolerance > 0.0, "--tolerance must be positive");
    let spec = QuadratureSpec::fourier(p.r(), p.a);
    let oracle = fourier_numeric(&p, &xi, &spec)?;
    let fine = fourier_numeric(&p, &xi, &spec.doubled())?;
    let mut params = ballfourier::params! {"a" => p.a, "mu" => p.mu, "n" => &p.n, "xi" => xi.components()};
    params.insert("r".into(), p.r().into());
    let report = VerificationReport::compare("fourier-oracle", params, oracle, closed, args.tolerance, DEFAULT_ABS_FLOOR.min(args.tolerance));
    let report = refinement_gate(report, fine, DEFAULT_ABS_FLOOR.min(args.tolerance));
    write_reports(&[report], &args.out)
}

pub fn verify(args: &VerifyArgs) -> Result<Outcome> {
    let suite: Suite = args.suite.parse().context("--suite")?;
    ensure!((1..=3).contains(&args.r_max), "--r-max must be 1, 2 or 3");
    if let Some(t) = args.tolerance {
        ensure!(t > 0.0 && t.is_finite(), "--tolerance must be a positive number");
    }
    let config = SuiteConfig {
        r_max: args.r_max,
        seed: args.seed,
        tolerance: args.tolerance,
    };
    let mut reports = run_suite(suite, &config);
    sort_reports(&mut reports);
    let failed = reports.iter().filter(|r| !r.passed).count();
    eprintln!("{suite}: {} checks, {failed} failed", reports.len());
    write_reports(&reports, &args.out)
}

fn axis(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    ensure!(step > 0.0 && step.is_finite(), "--step must be positive");
    ensure!(start.is_finite() && stop.is_finite() && stop >= start, "--stop must not be below --start");
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    ensure!(count <= MAX_GRID_POINTS, "grid has more than {MAX_GRID_POINTS} points per axis");
    Ok((0..count).map(|k| start + k as f64 * step).collect())
}

/// Row-major tensor grid, last axis fastest.
fn tensor(axis: &[f64], r: usize) -> Result<Vec<Vec<f64>>> {
    let total = axis.len().checked_pow(r as u32).filter(|&t| t <= MAX_GRID_POINTS);
    let total = total.ok_or_else(|| anyhow!("grid has more than {MAX_GRID_POINTS} points"))?;
    Ok((0..total)
        .map(|mut k| {
            let mut x = vec![0.0; r];
            for slot in x.iter_mut().rev() {
                *slot = axis[k % axis.len()];
                k /= axis.len();
            }
            x
        })
        .collect())
}

pub fn table(args: &TableArgs) -> Result<Outcome> {
    let fam = &args.family;
    let grid = |default: Option<(f64, f64, f64)>| -> Result<Vec<f64>> {
        let (s, e, h) = default.unwrap_or((f64::NAN, f64::NAN, f64::NAN));
        let start = args.start.or(default.map(|_| s));
        let stop = args.stop.or(default.map(|_| e));
        let step = args.step.or(default.map(|_| h));
        axis(require(start, "--start")?, require(stop, "--stop")?, require(step, "--step")?)
    };
    let mut records = Vec::new();
    match args.function {
        TableFn::Theta => {
            let p = fam.family()?;
            ensure!((1..=p.r()).contains(&args.j), "--j must lie in 1..={}", p.r());
            for xi in grid(None)? {
                let mut inputs = family_inputs(&p);
                inputs.insert("j".into(), Input::Int(args.j as u64));
                inputs.insert("xi".into(), Input::Real(xi));
                records.push(Record::new(inputs, theta_factor(args.j, &p, xi)?));
            }
        }
        TableFn::Ball => {
            let n = fam.multi_index()?;
            let mu = require(fam.mu, "--mu")?;
            let bp = BallParams::new(mu).context("--mu")?;
            for x in tensor(&grid(Some((-1.0, 1.0, 0.5)))?, n.dim())? {
                if x.iter().map(|v| v * v).sum::<f64>() > 1.0 {
                    continue;
                }
                let value = ball_basis_eval(&n, bp, &BallPoint::new(x.clone())?)?;
                let mut inputs = Inputs::new();
                inputs.insert("mu".into(), Input::Real(mu));
                inputs.insert("n".into(), index_input(&n));
                inputs.insert("x".into(), Input::Reals(x));
                records.push(Record::new(inputs, ComplexValue::new(value, 0.0)));
            }
        }
        TableFn::DFamily => {
            let p = fam.dparams()?;
            for x in tensor(&grid(None)?, p.r())? {
                let z: Vec<ComplexValue> = x.iter().map(|&v| ComplexValue::new(v, 0.0)).collect();
                let mut inputs = d_inputs(&p);
                inputs.insert("x".into(), Input::Reals(x));
                records.push(Record::new(inputs, d_family_eval(&z, &p)?));
            }
        }
    }
    write_records(&records, &args.out, Format::Csv)?;
    Ok(Outcome::Passed)
}
