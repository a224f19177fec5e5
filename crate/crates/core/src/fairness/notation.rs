//! Compressed allocation notation: distinct values in non-increasing order
//! with multiplicities as exponents, e.g. `6,5^3,4,2^2,1^5,0^2`.
//!
//! The braced exponent form `5^{2},0^{12}` is accepted as well and can be
//! produced with [`SortedAllocation::to_braced`].

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use thiserror::Error;

use super::{Penalty, SortedAllocation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NotationError {
    #[error("empty term at position {0}")]
    EmptyTerm(usize),
    #[error("invalid number `{0}`")]
    BadNumber(String),
    #[error("zero multiplicity in `{0}`")]
    ZeroMultiplicity(String),
    #[error("value {value} follows smaller value {previous}")]
    Increasing { previous: Penalty, value: Penalty },
}

impl SortedAllocation {
    fn runs(&self) -> impl Iterator<Item = (Penalty, usize)> + '_ {
        self.values().chunk_by(|a, b| a == b).map(|run| (run[0], run.len()))
    }

    fn write_compressed(&self, f: &mut impl fmt::Write, braced: bool) -> fmt::Result {
        for (i, (value, count)) in self.runs().enumerate() {
            if i > 0 {
                f.write_char(',')?;
            }
            match (count, braced) {
                (1, _) => write!(f, "{value}")?,
                (_, true) => write!(f, "{value}^{{{count}}}")?,
                (_, false) => write!(f, "{value}^{count}")?,
            }
        }
        Ok(())
    }

    /// Compressed form with braced exponents, `2^{32},1^{5},0^{33}`.
    pub fn to_braced(&self) -> String {
        let mut out = String::new();
        self.write_compressed(&mut out, true).expect("writing to a String");
        out
    }
}

impl fmt::Display for SortedAllocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_compressed(f, false)
    }
}

impl FromStr for SortedAllocation {
    type Err = NotationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(SortedAllocation::default());
        }
        let mut values: Vec<Penalty> = Vec::new();
        for (pos, term) in s.split(',').enumerate() {
            let term = term.trim();
            if term.is_empty() {
                return Err(NotationError::EmptyTerm(pos));
            }
            let (value, count) = match term.split_once('^') {
                None => (parse_num(term)?, 1),
                Some((v, e)) => {
                    let e = e.trim();
                    let e = e.strip_prefix('{').and_then(|e| e.strip_suffix('}')).unwrap_or(e);
                    let count: usize = parse_num(e)? as usize;
                    if count == 0 {
                        return Err(NotationError::ZeroMultiplicity(term.to_string()));
                    }
                    (parse_num(v)?, count)
                }
            };
            if let Some(&previous) = values.last() {
                if previous < value {
                    return Err(NotationError::Increasing { previous, value });
                }
            }
            values.extend(core::iter::repeat_n(value, count));
        }
        Ok(SortedAllocation::new(values).expect("checked while parsing"))
    }
}

fn parse_num(s: &str) -> Result<Penalty, NotationError> {
    let s = s.trim();
    s.parse().map_err(|_| NotationError::BadNumber(s.to_string()))
}
