//! Verification records shared by the oracle, the suites, and the CLI.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::ball::MultiIndex;
use crate::special::ComplexValue;

/// Absolute error below which a comparison passes regardless of the relative error.
pub const DEFAULT_ABS_FLOOR: f64 = 1e-9;

/// One entry of a report's parameter record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Int(i64),
    Real(f64),
    Index(Vec<usize>),
    Text(String),
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamValue::Int(v) => write!(f, "{v}"),
            ParamValue::Real(v) => write!(f, "{v:?}"),
            ParamValue::Index(v) => {
                let parts: Vec<String> = v.iter().map(|k| k.to_string()).collect();
                write!(f, "({})", parts.join(","))
            }
            ParamValue::Text(v) => f.write_str(v),
        }
    }
}

impl From<f64> for ParamValue {
    fn from(v: f64) -> Self {
        ParamValue::Real(v)
    }
}

impl From<usize> for ParamValue {
    fn from(v: usize) -> Self {
        ParamValue::Int(v as i64)
    }
}

impl From<i64> for ParamValue {
    fn from(v: i64) -> Self {
        ParamValue::Int(v)
    }
}

impl From<&MultiIndex> for ParamValue {
    fn from(v: &MultiIndex) -> Self {
        ParamValue::Index(v.entries().to_vec())
    }
}

impl From<&[f64]> for ParamValue {
    fn from(v: &[f64]) -> Self {
        ParamValue::Text(
            v.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(","),
        )
    }
}

impl From<&str> for ParamValue {
    fn from(v: &str) -> Self {
        ParamValue::Text(v.to_owned())
    }
}

pub type Parameters = BTreeMap<String, ParamValue>;

/// Builds a [`Parameters`] map from `key => value` pairs.
#[macro_export]
macro_rules! params {
    ($($key:expr => $value:expr),* $(,)?) => {{
        let mut map = $crate::report::Parameters::new();
        $(map.insert(String::from($key), $crate::report::ParamValue::from($value));)*
        map
    }};
}

/// The outcome of comparing a computed quantity against its reference.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "WireReport", from = "WireReport")]
pub struct VerificationReport {
    pub identity_name: String,
    pub parameters: Parameters,
    pub lhs: ComplexValue,
    pub rhs: ComplexValue,
    pub abs_error: f64,
    pub rel_error: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub low_confidence: bool,
}

impl VerificationReport {
    /// Compares `lhs` to `rhs`; passes when the relative error is within
    /// `tolerance` or the absolute error within `abs_floor`.
    pub fn compare(
        identity_name: impl Into<String>,
        parameters: Parameters,
        lhs: ComplexValue,
        rhs: ComplexValue,
        tolerance: f64,
        abs_floor: f64,
    ) -> Self {
        let abs_error = (lhs - rhs).norm();
        let rel_error = abs_error / rhs.norm().max(1e-300);
        let finite = lhs.re.is_finite() && lhs.im.is_finite() && rhs.re.is_finite() && rhs.im.is_finite();
        Self {
            identity_name: identity_name.into(),
            parameters,
            lhs,
            rhs,
            abs_error,
            rel_error,
            tolerance,
            passed: finite && (rel_error <= tolerance || abs_error <= abs_floor),
            low_confidence: false,
        }
    }

    /// Real-valued comparison.
    pub fn compare_real(
        identity_name: impl Into<String>,
        parameters: Parameters,
        lhs: f64,
        rhs: f64,
        tolerance: f64,
        abs_floor: f64,
    ) -> Self {
        Self::compare(
            identity_name,
            parameters,
            Complex64::new(lhs, 0.0),
            Complex64::new(rhs, 0.0),
            tolerance,
            abs_floor,
        )
    }

    /// A report for a check that could not be carried out.
    pub fn failed(identity_name: impl Into<String>, mut parameters: Parameters, reason: &str) -> Self {
        parameters.insert("error".into(), ParamValue::Text(reason.to_owned()));
        let nan = Complex64::new(f64::NAN, 0.0);
        Self {
            identity_name: identity_name.into(),
            parameters,
            lhs: nan,
            rhs: nan,
            abs_error: f64::INFINITY,
            rel_error: f64::INFINITY,
            tolerance: 0.0,
            passed: false,
            low_confidence: false,
        }
    }

    pub fn with_low_confidence(mut self, flag: bool) -> Self {
        self.low_confidence |= flag;
        self
    }

    /// Key used for canonical ordering: identity name, then the rendered parameters.
    pub fn sort_key(&self) -> (String, String) {
        let rendered: Vec<String> = self.parameters.iter().map(|(k, v)| format!("{k}={v}")).collect();
        (self.identity_name.clone(), rendered.join(";"))
    }
}

/// Sorts reports by identity name, then parameters.
pub fn sort_reports(reports: &mut [VerificationReport]) {
    reports.sort_by_cached_key(VerificationReport::sort_key);
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireReport {
    identity_name: String,
    parameters: Parameters,
    lhs_re: Option<f64>,
    lhs_im: Option<f64>,
    rhs_re: Option<f64>,
    rhs_im: Option<f64>,
    abs_error: Option<f64>,
    rel_error: Option<f64>,
    tolerance: f64,
    passed: bool,
    low_confidence: bool,
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

impl From<VerificationReport> for WireReport {
    fn from(r: VerificationReport) -> Self {
        Self {
            identity_name: r.identity_name,
            parameters: r.parameters,
            lhs_re: finite(r.lhs.re),
            lhs_im: finite(r.lhs.im),
            rhs_re: finite(r.rhs.re),
            rhs_im: finite(r.rhs.im),
            abs_error: finite(r.abs_error),
            rel_error: finite(r.rel_error),
            tolerance: r.tolerance,
            passed: r.passed,
            low_confidence: r.low_confidence,
        }
    }
}

impl From<WireReport> for VerificationReport {
    fn from(w: WireReport) -> Self {
        let nan = |v: Option<f64>| v.unwrap_or(f64::NAN);
        let inf = |v: Option<f64>| v.unwrap_or(f64::INFINITY);
        Self {
            identity_name: w.identity_name,
            parameters: w.parameters,
            lhs: Complex64::new(nan(w.lhs_re), nan(w.lhs_im)),
            rhs: Complex64::new(nan(w.rhs_re), nan(w.rhs_im)),
            abs_error: inf(w.abs_error),
            rel_error: inf(w.rel_error),
            tolerance: w.tolerance,
            passed: w.passed,
            low_confidence: w.low_confidence,
        }
    }
}
