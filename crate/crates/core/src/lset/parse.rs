use std::str::FromStr;

use super::error::LsetError;
use super::set::IntSet;

/// Parses the set-spec mini-language:
/// `primes`, `squares`, `powers:<b>`, `factorials`, `arith:<a>,<m>`,
/// `explicit:<n1>,<n2>,...`, `file:<path>`, `perturb:<spec>`.
pub fn parse_set_spec(spec: &str) -> Result<IntSet, LsetError> {
    let bad = |reason: String| LsetError::Spec {
        spec: spec.to_string(),
        reason,
    };
    let spec_trimmed = spec.trim();
    let (head, arg) = match spec_trimmed.split_once(':') {
        Some((h, a)) => (h, Some(a)),
        None => (spec_trimmed, None),
    };
    let number = |s: &str| {
        s.trim()
            .parse::<u128>()
            .map_err(|_| bad(format!("`{}` is not a nonnegative integer", s.trim())))
    };
    match (head, arg) {
        ("primes", None) => Ok(IntSet::primes()),
        ("squares", None) => Ok(IntSet::squares()),
        ("factorials", None) => Ok(IntSet::factorials()),
        ("powers", Some(b)) => IntSet::powers(number(b)?).map_err(|e| bad(e.to_string())),
        ("arith", Some(args)) => {
            let (a, m) = args
                .split_once(',')
                .ok_or_else(|| bad("expected `arith:<a>,<m>`".into()))?;
            IntSet::arithmetic(number(a)?, number(m)?).map_err(|e| bad(e.to_string()))
        }
        ("explicit", Some(list)) => {
            let values = list
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(number)
                .collect::<Result<Vec<_>, _>>()?;
            IntSet::explicit(values).map_err(|e| bad(e.to_string()))
        }
        ("file", Some(path)) if !path.is_empty() => IntSet::from_file(path),
        ("perturb", Some(inner)) => Ok(IntSet::perturbed(parse_set_spec(inner)?)),
        ("primes" | "squares" | "factorials", Some(_)) => {
            Err(bad(format!("`{head}` takes no argument")))
        }
        ("powers" | "arith" | "explicit" | "file" | "perturb", _) => {
            Err(bad(format!("`{head}` needs an argument")))
        }
        _ => Err(bad(format!("unknown set kind `{head}`"))),
    }
}

impl FromStr for IntSet {
    type Err = LsetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_set_spec(s)
    }
}
