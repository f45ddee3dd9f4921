use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::linalg::Rational;

/// Input symbol of an agent: an exact number or an opaque token.
///
/// Numbers sort before tokens; within each kind the natural order applies.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Num(Rational),
    Token(String),
}

impl Value {
    pub fn int(n: i64) -> Self {
        Value::Num(Rational::from(n))
    }

    pub fn token(s: impl Into<String>) -> Self {
        Value::Token(s.into())
    }

    pub fn as_number(&self) -> Option<&Rational> {
        match self {
            Value::Num(r) => Some(r),
            Value::Token(_) => None,
        }
    }

    /// Parse config text: anything that reads as `p` or `p/q` is a number.
    pub fn parse(s: &str) -> Self {
        match s.parse::<Rational>() {
            Ok(r) => Value::Num(r),
            Err(_) => Value::Token(s.to_string()),
        }
    }
}

impl From<Rational> for Value {
    fn from(r: Rational) -> Self {
        Value::Num(r)
    }
}

impl From<i64> for Value {
    fn from(n: i64) -> Self {
        Value::int(n)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::parse(s)
    }
}

impl FromStr for Value {
    type Err = std::convert::Infallible;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(Value::parse(s))
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Num(r) => write!(f, "{r}"),
            Value::Token(s) => write!(f, "{s}"),
        }
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Num(r) => write!(f, "{r}"),
            Value::Token(s) => write!(f, "{s:?}"),
        }
    }
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Value::Num(r) if r.is_integer() => match num_traits::ToPrimitive::to_i64(r.numer()) {
                Some(n) => serializer.serialize_i64(n),
                None => serializer.serialize_str(&r.to_string()),
            },
            Value::Num(r) => serializer.serialize_str(&r.to_string()),
            Value::Token(s) => serializer.serialize_str(s),
        }
    }
}

impl<'de> Deserialize<'de> for Value {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Int(i64),
            Str(String),
        }
        Ok(match Repr::deserialize(deserializer)? {
            Repr::Int(n) => Value::int(n),
            Repr::Str(s) => Value::parse(&s),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_sort_before_tokens() {
        let mut v = vec![Value::token("b"), Value::int(3), Value::token("a"), Value::int(-1)];
        v.sort();
        assert_eq!(v, vec![Value::int(-1), Value::int(3), Value::token("a"), Value::token("b")]);
    }

    #[test]
    fn json_round_trip() {
        let v: Vec<Value> = serde_json::from_str(r#"[1, "2/4", "a", "-3"]"#).unwrap();
        assert_eq!(v, vec![Value::int(1), Value::Num(Rational::frac(1, 2)), Value::token("a"), Value::int(-3)]);
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"[1,"1/2","a",-3]"#);
    }
}
