//! Parsers for `--s`, `--model` and `--point` values.

use std::str::FromStr;

use kahler_pinch::{ChartPoint, MetricModel, Rational};
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::UsageError;

/// A Kähler parameter given either as a decimal or as an exact fraction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SValue {
    pub value: f64,
    /// `(p, q)` in lowest terms when written as `p/q`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ratio: Option<(i64, i64)>,
}

impl SValue {
    pub fn exact(&self) -> Option<Rational> {
        self.ratio.map(|(p, q)| kahler_pinch::hirzebruch::rational(p, q))
    }
}

impl FromStr for SValue {
    type Err = UsageError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let text = text.trim();
        let bad = || UsageError(format!("cannot parse s = {text:?}; expected a decimal or p/q"));
        if let Some((p, q)) = text.split_once('/') {
            let p: i64 = p.trim().parse().map_err(|_| bad())?;
            let q: i64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            let r = Ratio::new(p, q);
            return Ok(Self { value: *r.numer() as f64 / *r.denom() as f64, ratio: Some((*r.numer(), *r.denom())) });
        }
        let value: f64 = text.parse().map_err(|_| bad())?;
        if !value.is_finite() {
            return Err(bad());
        }
        Ok(Self { value, ratio: None })
    }
}

/// `fsM`, `hitchin:N:S`, or an inline JSON descriptor such as
/// `{"kind":"hitchin","n":2,"s":0.1}`.
pub fn parse_model(text: &str) -> Result<(MetricModel<f64>, Option<SValue>), UsageError> {
    let text = text.trim();
    let invalid = |e: kahler_pinch::Error| UsageError(format!("model {text:?}: {e}"));
    if text.starts_with('{') {
        let model: MetricModel<f64> =
            serde_json::from_str(text).map_err(|e| UsageError(format!("model descriptor {text:?}: {e}")))?;
        model.validate().map_err(invalid)?;
        return Ok((model, None));
    }
    if let Some(m) = text.strip_prefix("fs") {
        let m: usize = m.parse().map_err(|_| UsageError(format!("unknown model {text:?}")))?;
        if m == 0 {
            return Err(UsageError("fs0 is not a model".into()));
        }
        return Ok((MetricModel::fubini_study(m), None));
    }
    if let Some(rest) = text.strip_prefix("hitchin:") {
        let (n, s) = rest.split_once(':').ok_or_else(|| UsageError(format!("expected hitchin:N:S, got {text:?}")))?;
        let n: u32 = n.parse().map_err(|_| UsageError(format!("bad n in {text:?}")))?;
        let s: SValue = s.parse()?;
        let model = MetricModel::hitchin(n, s.value).map_err(invalid)?;
        return Ok((model, Some(s)));
    }
    Err(UsageError(format!("unknown model {text:?}; use fsM, hitchin:N:S or a JSON descriptor")))
}

/// Comma-separated complex coordinates, e.g. `0.5,1+2i`.
pub fn parse_point(text: &str) -> Result<ChartPoint<f64>, UsageError> {
    let coords = text
        .split(',')
        .map(|part| {
            num_complex::Complex64::from_str(part.trim())
                .map_err(|_| UsageError(format!("cannot parse coordinate {part:?}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    ChartPoint::new(coords).map_err(|e| UsageError(e.to_string()))
}

pub fn format_point(p: &ChartPoint<f64>) -> String {
    p.coords.iter().map(|z| format!("{}{:+}i", z.re, z.im)).collect::<Vec<_>>().join(";")
}
