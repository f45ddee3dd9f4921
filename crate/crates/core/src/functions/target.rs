use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::Pow;
use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};

use super::frequency::{multiplicities, FrequencyFunction};
use super::FunctionError;
use crate::graph::Value;
use crate::linalg::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FunctionClass {
    SetBased,
    FrequencyBased,
    MultisetBased,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    Discrete,
    Euclidean,
}

/// Threshold parameter: an exact rational, or an irrational number known
/// through a tight enclosure `lo < r < hi`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Threshold {
    Exact(Rational),
    Irrational { label: String, lo: Rational, hi: Rational },
}

const ENCLOSURE_DIGITS: u32 = 40;

impl Threshold {
    /// `sqrt(k) / m` as an exact value when `k` is a perfect square, else as
    /// an enclosure of width about `10^-40`.
    pub fn sqrt_over(k: u64, m: u64) -> Result<Self, FunctionError> {
        if m == 0 {
            return Err(FunctionError::Parse("zero divisor in threshold".into()));
        }
        let root = k.sqrt();
        if root * root == k {
            return Ok(Threshold::Exact(Rational::frac(root as i64, m as i64)));
        }
        let scale = BigInt::from(10u32).pow(ENCLOSURE_DIGITS);
        let floor = (BigInt::from(k) * &scale * &scale).sqrt();
        let denom = &scale * BigInt::from(m);
        Ok(Threshold::Irrational {
            label: format!("sqrt{k}/{m}"),
            lo: Rational::new(floor.clone(), denom.clone()).expect("positive"),
            hi: Rational::new(floor + 1, denom).expect("positive"),
        })
    }

    pub fn is_irrational(&self) -> bool {
        matches!(self, Threshold::Irrational { .. })
    }

    /// `x >= r`. Against an irrational `r` the enclosure decides; a rational
    /// inside the enclosure is compared with its midpoint.
    pub fn is_reached_by(&self, x: &Rational) -> bool {
        match self {
            Threshold::Exact(r) => x >= r,
            Threshold::Irrational { lo, hi, .. } => {
                if x >= hi {
                    true
                } else if x <= lo {
                    false
                } else {
                    x * &Rational::from(2i64) >= lo + hi
                }
            }
        }
    }

    pub fn approx(&self) -> f64 {
        match self {
            Threshold::Exact(r) => r.to_f64(),
            Threshold::Irrational { lo, .. } => lo.to_f64(),
        }
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Threshold::Exact(r) => write!(f, "{r}"),
            Threshold::Irrational { label, .. } => write!(f, "{label}"),
        }
    }
}

impl FromStr for Threshold {
    type Err = FunctionError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("sqrt") {
            let (k, m) = rest.split_once('/').unwrap_or((rest, "1"));
            let bad = || FunctionError::Parse(format!("threshold {s:?}"));
            return Threshold::sqrt_over(k.parse().map_err(|_| bad())?, m.parse().map_err(|_| bad())?);
        }
        s.parse::<Rational>().map(Threshold::Exact).map_err(|_| FunctionError::Parse(format!("threshold {s:?}")))
    }
}

/// Catalog of target functions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TargetFunction {
    Max,
    Min,
    SetOfValues,
    Average,
    Threshold { omega: Value, r: Threshold },
    Frequency,
    Sum,
    Multiset,
    Multiplicity(Value),
}

/// A function's value.
#[derive(Debug, Clone, PartialEq)]
pub enum Output {
    Value(Value),
    Number(Rational),
    Bool(bool),
    Set(BTreeSet<Value>),
    Frequency(FrequencyFunction),
    Multiset(BTreeMap<Value, usize>),
    Real(f64),
}

impl Output {
    /// Distance under `metric`; `None` when the two points are incomparable.
    pub fn distance(&self, other: &Output, metric: Metric) -> Option<f64> {
        match metric {
            Metric::Discrete => Some(if self == other { 0.0 } else { 1.0 }),
            Metric::Euclidean => Some((self.as_f64()? - other.as_f64()?).abs()),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Output::Number(r) => Some(r.to_f64()),
            Output::Real(x) => Some(*x),
            Output::Value(Value::Num(r)) => Some(r.to_f64()),
            Output::Bool(b) => Some(if *b { 1.0 } else { 0.0 }),
            _ => None,
        }
    }
}

impl fmt::Display for Output {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Output::Value(v) => write!(f, "{v}"),
            Output::Number(r) => write!(f, "{r}"),
            Output::Bool(b) => write!(f, "{}", u8::from(*b)),
            Output::Set(s) => write!(f, "{s:?}"),
            Output::Frequency(fr) => write!(f, "{fr:?}"),
            Output::Multiset(m) => write!(f, "{m:?}"),
            Output::Real(x) => write!(f, "{x}"),
        }
    }
}

impl Serialize for Output {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Output::Value(v) => v.serialize(serializer),
            Output::Number(r) => Value::Num(r.clone()).serialize(serializer),
            Output::Bool(b) => serializer.serialize_bool(*b),
            Output::Set(s) => {
                let mut seq = serializer.serialize_seq(Some(s.len()))?;
                for v in s {
                    seq.serialize_element(v)?;
                }
                seq.end()
            }
            Output::Frequency(fr) => fr.serialize(serializer),
            Output::Multiset(m) => {
                let mut map = serializer.serialize_map(Some(m.len()))?;
                for (k, v) in m {
                    map.serialize_entry(&k.to_string(), v)?;
                }
                map.end()
            }
            Output::Real(x) => serializer.serialize_f64(*x),
        }
    }
}

fn number(v: &Value) -> Result<&Rational, FunctionError> {
    v.as_number().ok_or_else(|| FunctionError::NonNumeric(v.clone()))
}

impl TargetFunction {
    pub fn class(&self) -> FunctionClass {
        use TargetFunction::*;
        match self {
            Max | Min | SetOfValues => FunctionClass::SetBased,
            Average | Threshold { .. } | Frequency => FunctionClass::FrequencyBased,
            Sum | Multiset | Multiplicity(_) => FunctionClass::MultisetBased,
        }
    }

    pub fn metric(&self) -> Metric {
        match self {
            TargetFunction::Average => Metric::Euclidean,
            _ => Metric::Discrete,
        }
    }

    /// Declared continuity of the frequency-to-output map.
    pub fn is_continuous_in_frequency(&self) -> bool {
        match self {
            TargetFunction::Average => true,
            TargetFunction::Threshold { r, .. } => r.is_irrational(),
            _ => false,
        }
    }

    pub fn needs_numbers(&self) -> bool {
        matches!(self, TargetFunction::Average | TargetFunction::Sum)
    }

    pub fn evaluate(&self, values: &[Value]) -> Result<Output, FunctionError> {
        if values.is_empty() {
            return Err(FunctionError::EmptyInput);
        }
        self.evaluate_multiplicities(&multiplicities(values))
    }

    /// Evaluate from value counts; valid for every class.
    pub fn evaluate_multiplicities(&self, m: &BTreeMap<Value, usize>) -> Result<Output, FunctionError> {
        let m: BTreeMap<Value, usize> = m.iter().filter(|(_, &k)| k > 0).map(|(v, &k)| (v.clone(), k)).collect();
        if m.is_empty() {
            return Err(FunctionError::EmptyInput);
        }
        match self {
            TargetFunction::Sum => {
                let mut total = Rational::zero();
                for (v, &k) in &m {
                    total += &(number(v)? * &Rational::from(k));
                }
                Ok(Output::Number(total))
            }
            TargetFunction::Multiset => Ok(Output::Multiset(m)),
            TargetFunction::Multiplicity(w) => Ok(Output::Number(Rational::from(m.get(w).copied().unwrap_or(0)))),
            _ => self.evaluate_frequency(&FrequencyFunction::from_multiplicities(&m)?),
        }
    }

    /// Evaluate from frequencies; rejected for multiset-based functions.
    pub fn evaluate_frequency(&self, nu: &FrequencyFunction) -> Result<Output, FunctionError> {
        let support = nu.support();
        match self {
            TargetFunction::Max => Ok(Output::Value(support.keys().next_back().expect("non-empty").clone())),
            TargetFunction::Min => Ok(Output::Value(support.keys().next().expect("non-empty").clone())),
            TargetFunction::SetOfValues => Ok(Output::Set(support.keys().cloned().collect())),
            TargetFunction::Average => {
                let mut acc = Rational::zero();
                for (v, r) in support {
                    acc += &(number(v)? * r);
                }
                Ok(Output::Number(acc))
            }
            TargetFunction::Threshold { omega, r } => Ok(Output::Bool(r.is_reached_by(&nu.get(omega)))),
            TargetFunction::Frequency => Ok(Output::Frequency(nu.clone())),
            TargetFunction::Sum | TargetFunction::Multiset | TargetFunction::Multiplicity(_) => {
                Err(FunctionError::NeedsMultiplicities(self.to_string()))
            }
        }
    }

    /// Evaluate a continuous-in-frequency function at approximate
    /// frequencies (weights need not sum exactly to one).
    pub fn evaluate_approximate(&self, weights: &BTreeMap<Value, f64>) -> Result<Output, FunctionError> {
        let total: f64 = weights.values().sum();
        if !(total > 0.0) {
            return Err(FunctionError::EmptyInput);
        }
        match self {
            TargetFunction::Average => {
                let mut acc = 0.0;
                for (v, w) in weights {
                    acc += number(v)?.to_f64() * w;
                }
                Ok(Output::Real(acc / total))
            }
            TargetFunction::Threshold { omega, r } => {
                Ok(Output::Bool(weights.get(omega).copied().unwrap_or(0.0) / total >= r.approx()))
            }
            _ => Err(FunctionError::NotContinuous(self.to_string())),
        }
    }
}

impl fmt::Display for TargetFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TargetFunction::Max => write!(f, "max"),
            TargetFunction::Min => write!(f, "min"),
            TargetFunction::SetOfValues => write!(f, "set"),
            TargetFunction::Average => write!(f, "average"),
            TargetFunction::Threshold { omega, r } => write!(f, "threshold:omega={omega},r={r}"),
            TargetFunction::Frequency => write!(f, "frequency"),
            TargetFunction::Sum => write!(f, "sum"),
            TargetFunction::Multiset => write!(f, "multiset"),
            TargetFunction::Multiplicity(w) => write!(f, "multiplicity:omega={w}"),
        }
    }
}

impl FromStr for TargetFunction {
    type Err = FunctionError;

    /// Names such as `average`, `threshold:omega=a,r=sqrt2/2` or
    /// `multiplicity:omega=a`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, params) = s.trim().split_once(':').unwrap_or((s.trim(), ""));
        let mut kv = BTreeMap::new();
        for part in params.split(',').filter(|p| !p.is_empty()) {
            let (k, v) = part.split_once('=').ok_or_else(|| FunctionError::Parse(format!("parameter {part:?}")))?;
            kv.insert(k.trim(), v.trim());
        }
        let omega = |kv: &BTreeMap<&str, &str>| {
            kv.get("omega").map(|w| Value::parse(w)).ok_or_else(|| FunctionError::Parse(format!("{name} needs omega")))
        };
        let f = match name {
            "max" => TargetFunction::Max,
            "min" => TargetFunction::Min,
            "set" | "set-of-values" => TargetFunction::SetOfValues,
            "average" | "avg" => TargetFunction::Average,
            "frequency" => TargetFunction::Frequency,
            "sum" => TargetFunction::Sum,
            "multiset" => TargetFunction::Multiset,
            "threshold" => TargetFunction::Threshold {
                omega: omega(&kv)?,
                r: kv.get("r").ok_or_else(|| FunctionError::Parse("threshold needs r".into()))?.parse()?,
            },
            "multiplicity" => TargetFunction::Multiplicity(omega(&kv)?),
            _ => return Err(FunctionError::Parse(format!("unknown function {name:?}"))),
        };
        Ok(f)
    }
}
