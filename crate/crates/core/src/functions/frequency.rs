use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::FunctionError;
use crate::graph::Value;
use crate::linalg::{lcm_all, Rational};

/// Finite-support map from values to positive rationals summing to one.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "BTreeMap<String, Rational>", into = "BTreeMap<String, Rational>")]
pub struct FrequencyFunction {
    support: BTreeMap<Value, Rational>,
}

impl FrequencyFunction {
    pub fn new(support: BTreeMap<Value, Rational>) -> Result<Self, FunctionError> {
        if support.is_empty() {
            return Err(FunctionError::EmptyInput);
        }
        if let Some((v, _)) = support.iter().find(|(_, r)| !r.is_positive()) {
            return Err(FunctionError::InvalidFrequency(format!("non-positive entry for {v}")));
        }
        let total: Rational = support.values().sum();
        if total != Rational::one() {
            return Err(FunctionError::InvalidFrequency(format!("entries sum to {total}")));
        }
        Ok(FrequencyFunction { support })
    }

    /// `nu(w) = multiplicity(w) / n`.
    pub fn of(values: &[Value]) -> Result<Self, FunctionError> {
        Self::from_multiplicities(&multiplicities(values))
    }

    pub fn from_multiplicities(m: &BTreeMap<Value, usize>) -> Result<Self, FunctionError> {
        let n: usize = m.values().sum();
        if n == 0 {
            return Err(FunctionError::EmptyInput);
        }
        Ok(FrequencyFunction {
            support: m
                .iter()
                .filter(|(_, &k)| k > 0)
                .map(|(v, &k)| (v.clone(), Rational::frac(k as i64, n as i64)))
                .collect(),
        })
    }

    pub fn support(&self) -> &BTreeMap<Value, Rational> {
        &self.support
    }

    pub fn get(&self, w: &Value) -> Rational {
        self.support.get(w).cloned().unwrap_or_else(Rational::zero)
    }

    /// `lcm` of the reduced denominators: the length of the canonical vector.
    pub fn canonical_length(&self) -> BigInt {
        lcm_all(self.support.values().map(Rational::denom))
    }

    /// Shortest vector with these frequencies, values in sorted order.
    pub fn canonical_vector(&self) -> Vec<Value> {
        let q = self.canonical_length();
        let mut out = Vec::new();
        for (v, r) in &self.support {
            let k = (r.numer() * &q / r.denom()).to_usize().expect("canonical vector fits in memory");
            out.extend(std::iter::repeat_n(v.clone(), k));
        }
        out
    }

    /// Multiplicities in a population of `n` agents, if integral.
    pub fn scaled(&self, n: usize) -> Option<BTreeMap<Value, usize>> {
        let n = Rational::from(n);
        self.support
            .iter()
            .map(|(v, r)| {
                let m = r * &n;
                if m.is_integer() {
                    m.numer().to_usize().map(|k| (v.clone(), k))
                } else {
                    None
                }
            })
            .collect()
    }
}

impl fmt::Debug for FrequencyFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.support.iter()).finish()
    }
}

impl TryFrom<BTreeMap<String, Rational>> for FrequencyFunction {
    type Error = FunctionError;
    fn try_from(m: BTreeMap<String, Rational>) -> Result<Self, Self::Error> {
        FrequencyFunction::new(m.into_iter().map(|(k, v)| (Value::parse(&k), v)).collect())
    }
}

impl From<FrequencyFunction> for BTreeMap<String, Rational> {
    fn from(f: FrequencyFunction) -> Self {
        f.support.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
    }
}

pub fn multiplicities(values: &[Value]) -> BTreeMap<Value, usize> {
    let mut m = BTreeMap::new();
    for v in values {
        *m.entry(v.clone()).or_insert(0) += 1;
    }
    m
}

pub fn frequency_of(values: &[Value]) -> Result<FrequencyFunction, FunctionError> {
    FrequencyFunction::of(values)
}

pub fn equivalent_in_frequency(v: &[Value], w: &[Value]) -> bool {
    match (FrequencyFunction::of(v), FrequencyFunction::of(w)) {
        (Ok(a), Ok(b)) => a == b,
        _ => v.is_empty() && w.is_empty(),
    }
}

/// `(sum v_k) / (sum w_k)`.
pub fn quot_sum(pairs: &[(Rational, Rational)]) -> Result<Rational, FunctionError> {
    if pairs.is_empty() {
        return Err(FunctionError::EmptyInput);
    }
    if pairs.iter().any(|(_, w)| !w.is_positive()) {
        return Err(FunctionError::NonPositiveWeight);
    }
    let v: Rational = pairs.iter().map(|(v, _)| v).sum();
    let w: Rational = pairs.iter().map(|(_, w)| w).sum();
    Ok(v / w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vals(s: &str) -> Vec<Value> {
        s.split(',').map(Value::parse).collect()
    }

    fn r(p: i64, q: i64) -> Rational {
        Rational::frac(p, q)
    }

    #[test]
    fn frequency_examples() {
        let f = frequency_of(&vals("a,b,a")).unwrap();
        assert_eq!(f.get(&Value::token("a")), r(2, 3));
        assert_eq!(frequency_of(&vals("a,a,a,a")).unwrap().get(&Value::token("a")), r(1, 1));
        let f = frequency_of(&vals("1,2,2,3,3,3")).unwrap();
        assert_eq!(f.get(&Value::int(1)), r(1, 6));
        assert_eq!(f.get(&Value::int(2)), r(1, 3));
        assert_eq!(f.get(&Value::int(3)), r(1, 2));
        assert!(frequency_of(&[]).is_err());
    }

    #[test]
    fn canonical_vectors() {
        let f = FrequencyFunction::new(
            [(Value::token("a"), r(1, 2)), (Value::token("b"), r(1, 3)), (Value::token("c"), r(1, 6))].into(),
        )
        .unwrap();
        assert_eq!(f.canonical_vector(), vals("a,a,a,b,b,c"));
        let f = FrequencyFunction::new([(Value::token("a"), r(2, 3)), (Value::token("b"), r(1, 3))].into()).unwrap();
        assert_eq!(f.canonical_vector(), vals("a,a,b"));
        assert!(FrequencyFunction::new([(Value::token("a"), r(1, 2))].into()).is_err());
    }

    #[test]
    fn frequency_equivalence() {
        assert!(equivalent_in_frequency(&vals("a,b"), &vals("a,a,b,b")));
        assert!(!equivalent_in_frequency(&vals("a,b"), &vals("a,b,b")));
        assert!(equivalent_in_frequency(&vals("a,b,a"), &vals("b,a,a")));
    }

    #[test]
    fn quot_sum_examples() {
        assert_eq!(quot_sum(&[(r(0, 1), r(1, 1)), (r(1, 1), r(1, 1))]).unwrap(), r(1, 2));
        assert_eq!(quot_sum(&[(r(3, 1), r(2, 1))]).unwrap(), r(3, 2));
        assert_eq!(quot_sum(&[(r(1, 1), r(0, 1))]), Err(FunctionError::NonPositiveWeight));
    }

    #[test]
    fn json_form() {
        let f = frequency_of(&vals("a,b,b")).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"a":"1/3","b":"2/3"}"#);
        assert_eq!(serde_json::from_str::<FrequencyFunction>(&s).unwrap(), f);
    }
}
