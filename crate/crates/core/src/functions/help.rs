use std::fmt;
use std::str::FromStr;

use super::FunctionError;

/// Extra knowledge available to every agent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Help {
    #[default]
    None,
    /// An upper bound on the network size.
    Bound(usize),
    /// The exact network size.
    ExactSize(usize),
    /// The number of leader agents; leaders are flagged in the inputs.
    Leaders(usize),
}

impl fmt::Display for Help {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Help::None => write!(f, "none"),
            Help::Bound(n) => write!(f, "bound={n}"),
            Help::ExactSize(n) => write!(f, "n={n}"),
            Help::Leaders(l) => write!(f, "leaders={l}"),
        }
    }
}

impl FromStr for Help {
    type Err = FunctionError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "none" {
            return Ok(Help::None);
        }
        let bad = || FunctionError::Parse(format!("help mode {s:?}"));
        let (k, v) = s.split_once('=').ok_or_else(bad)?;
        let v: usize = v.trim().parse().map_err(|_| bad())?;
        match k.trim() {
            "bound" => Ok(Help::Bound(v)),
            "n" => Ok(Help::ExactSize(v)),
            "leaders" => Ok(Help::Leaders(v)),
            _ => Err(bad()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trip() {
        for s in ["none", "bound=4", "n=6", "leaders=2"] {
            assert_eq!(s.parse::<Help>().unwrap().to_string(), s);
        }
        assert!("bound".parse::<Help>().is_err());
        assert!("size=3".parse::<Help>().is_err());
    }
}
