use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use ballfourier::report::VerificationReport;
use ballfourier::ComplexValue;
use serde::{Deserialize, Serialize};

/// A single input value as it appears in output records.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Input {
    Int(u64),
    Real(f64),
    Ints(Vec<u64>),
    Reals(Vec<f64>),
    Text(String),
}

impl Input {
    fn csv_cells(&self) -> Vec<String> {
        match self {
            Input::Int(v) => vec![v.to_string()],
            Input::Real(v) => vec![float(*v)],
            Input::Ints(v) => v.iter().map(|k| k.to_string()).collect(),
            Input::Reals(v) => v.iter().map(|x| float(*x)).collect(),
            Input::Text(s) => vec![s.clone()],
        }
    }

    fn width(&self) -> usize {
        match self {
            Input::Ints(v) => v.len(),
            Input::Reals(v) => v.len(),
            _ => 1,
        }
    }
}

pub type Inputs = BTreeMap<String, Input>;

/// One evaluated value and the inputs that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub inputs: Inputs,
    pub value_re: Option<f64>,
    pub value_im: Option<f64>,
}

impl Record {
    pub fn new(inputs: Inputs, value: ComplexValue) -> Self {
        let finite = |v: f64| v.is_finite().then_some(v);
        Self {
            inputs,
            value_re: finite(value.re),
            value_im: finite(value.im),
        }
    }
}

/// Shortest representation that parses back to the same binary64.
pub fn float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:?}")
    } else {
        String::new()
    }
}

fn csv_escape(cell: &str) -> String {
    if cell.contains([',', '"', '\n']) {
        format!("\"{}\"", cell.replace('"', "\"\""))
    } else {
        cell.to_owned()
    }
}

fn header_for(inputs: &Inputs) -> Vec<String> {
    let mut out = Vec::new();
    for (key, value) in inputs {
        match value.width() {
            1 if !matches!(value, Input::Ints(_) | Input::Reals(_)) => out.push(key.clone()),
            w => out.extend((1..=w).map(|k| format!("{key}{k}"))),
        }
    }
    out
}

pub fn records_csv(records: &[Record]) -> Result<String> {
    let mut out = String::new();
    let header = records.first().map(|r| header_for(&r.inputs)).unwrap_or_default();
    let mut line: Vec<String> = header.clone();
    line.extend(["value_re".into(), "value_im".into()]);
    writeln!(out, "{}", line.join(","))?;
    for rec in records {
        anyhow::ensure!(header_for(&rec.inputs) == header, "records do not share one column layout");
        let mut cells: Vec<String> = rec.inputs.values().flat_map(Input::csv_cells).map(|c| csv_escape(&c)).collect();
        cells.push(rec.value_re.map(float).unwrap_or_default());
        cells.push(rec.value_im.map(float).unwrap_or_default());
        writeln!(out, "{}", cells.join(","))?;
    }
    Ok(out)
}

pub fn reports_csv(reports: &[VerificationReport]) -> Result<String> {
    let mut out = String::from(
        "identity_name,parameters,lhs_re,lhs_im,rhs_re,rhs_im,abs_error,rel_error,tolerance,passed,low_confidence\n",
    );
    for r in reports {
        let params: Vec<String> = r.parameters.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let cells = [
            csv_escape(&r.identity_name),
            csv_escape(&params.join(";")),
            float(r.lhs.re),
            float(r.lhs.im),
            float(r.rhs.re),
            float(r.rhs.im),
            float(r.abs_error),
            float(r.rel_error),
            float(r.tolerance),
            r.passed.to_string(),
            r.low_confidence.to_string(),
        ];
        writeln!(out, "{}", cells.join(","))?;
    }
    Ok(out)
}

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn emit(text: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}
