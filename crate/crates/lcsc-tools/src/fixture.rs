//! Fixture names such as `KG(4)` or `SEP(3,2)`.

use core::fmt;
use core::str::FromStr;

use lcsc_core::{fixtures, SmallCategory};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fixture {
    Group(usize),
    Par,
    Kg(usize),
    Sep(usize, usize),
    Nsq(usize),
    Free2(usize),
    /// Free group on a, b, c1..cn, words of length at most L.
    Fg(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FixtureError {
    #[error("unknown fixture `{0}`")]
    Unknown(String),
    #[error("{name} takes {expected} parameter(s)")]
    Arity { name: String, expected: usize },
    #[error("parameter `{0}` is not a positive integer")]
    Parameter(String),
    #[error("SEP needs an odd p > 1, got {0}")]
    EvenP(usize),
    #[error("{0} is a group model, not a category")]
    NotACategory(Fixture),
}

impl FromStr for Fixture {
    type Err = FixtureError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (name, args) = match s.split_once('(') {
            Some((n, rest)) => {
                let inner = rest.strip_suffix(')').ok_or_else(|| FixtureError::Unknown(s.into()))?;
                let args = inner
                    .split(',')
                    .map(|a| match a.trim().parse::<usize>() {
                        Ok(v) if v > 0 => Ok(v),
                        _ => Err(FixtureError::Parameter(a.trim().into())),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                (n.trim().to_ascii_uppercase(), args)
            }
            None => (s.to_ascii_uppercase(), Vec::new()),
        };
        let arity = |expected: usize| {
            if args.len() == expected {
                Ok(())
            } else {
                Err(FixtureError::Arity {
                    name: name.clone(),
                    expected,
                })
            }
        };
        let f = match name.as_str() {
            "GROUP" => arity(1).map(|_| Fixture::Group(args[0])),
            "PAR" => arity(0).map(|_| Fixture::Par),
            "KG" => arity(1).map(|_| Fixture::Kg(args[0])),
            "SEP" => arity(2).and_then(|_| {
                if args[0] % 2 == 0 || args[0] < 3 {
                    Err(FixtureError::EvenP(args[0]))
                } else {
                    Ok(Fixture::Sep(args[0], args[1]))
                }
            }),
            "NSQ" => arity(1).map(|_| Fixture::Nsq(args[0])),
            "FREE2" => arity(1).map(|_| Fixture::Free2(args[0])),
            "FG" => arity(2).map(|_| Fixture::Fg(args[0], args[1])),
            _ => Err(FixtureError::Unknown(s.into())),
        }?;
        Ok(f)
    }
}

impl fmt::Display for Fixture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Fixture::Group(n) => write!(f, "GROUP({n})"),
            Fixture::Par => write!(f, "PAR"),
            Fixture::Kg(n) => write!(f, "KG({n})"),
            Fixture::Sep(p, m) => write!(f, "SEP({p},{m})"),
            Fixture::Nsq(l) => write!(f, "NSQ({l})"),
            Fixture::Free2(l) => write!(f, "FREE2({l})"),
            Fixture::Fg(n, l) => write!(f, "FG({n},{l})"),
        }
    }
}

impl Fixture {
    pub fn category(&self) -> Result<SmallCategory, FixtureError> {
        Ok(match *self {
            Fixture::Group(n) => fixtures::group(n),
            Fixture::Par => fixtures::par(),
            Fixture::Kg(n) => fixtures::kg(n),
            Fixture::Sep(p, m) => fixtures::sep(p, m),
            Fixture::Nsq(l) => fixtures::nsq(l),
            Fixture::Free2(l) => fixtures::free2(l),
            Fixture::Fg(..) => return Err(FixtureError::NotACategory(*self)),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_names() {
        assert_eq!("GROUP(2)".parse(), Ok(Fixture::Group(2)));
        assert_eq!("par".parse(), Ok(Fixture::Par));
        assert_eq!("SEP(3, 4)".parse(), Ok(Fixture::Sep(3, 4)));
        assert_eq!("FG(2,3)".parse::<Fixture>().unwrap().to_string(), "FG(2,3)");
        assert_eq!("SEP(4,1)".parse::<Fixture>(), Err(FixtureError::EvenP(4)));
        assert!(matches!("KG(0)".parse::<Fixture>(), Err(FixtureError::Parameter(_))));
        assert!(matches!("KG".parse::<Fixture>(), Err(FixtureError::Arity { .. })));
        assert!(matches!("TREE(3)".parse::<Fixture>(), Err(FixtureError::Unknown(_))));
    }

    #[test]
    fn builds_categories() {
        assert_eq!("KG(2)".parse::<Fixture>().unwrap().category().unwrap().num_morphisms(), 12);
        assert!("FG(1,2)".parse::<Fixture>().unwrap().category().is_err());
    }
}
