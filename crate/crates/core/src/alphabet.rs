//! Ranked alphabets and interned symbol names.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A symbol name. Cheap to clone and safe to share across threads.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(name: &str) -> Self {
        Symbol(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Self {
        Symbol::new(s)
    }
}

impl From<String> for Symbol {
    fn from(s: String) -> Self {
        Symbol(Arc::from(s))
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

impl std::borrow::Borrow<str> for Symbol {
    fn borrow(&self) -> &str {
        &self.0
    }
}

/// A finite set of symbols, each with exactly one rank.
///
/// Rank-0 symbols are the constants; every other symbol belongs to the
/// non-constant part. The two parts partition the alphabet.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RankedAlphabet {
    ranks: BTreeMap<Symbol, usize>,
}

impl RankedAlphabet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds an alphabet from `(name, rank)` pairs.
    pub fn from_pairs<'a, I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, usize)>,
    {
        let mut alphabet = Self::new();
        for (name, rank) in pairs {
            alphabet.insert(Symbol::new(name), rank)?;
        }
        Ok(alphabet)
    }

    /// Adds a symbol. Re-declaring a symbol with the same rank is a no-op.
    pub fn insert(&mut self, symbol: Symbol, rank: usize) -> Result<()> {
        match self.ranks.get(&symbol) {
            Some(&first) if first != rank => Err(Error::RankConflict {
                symbol,
                first,
                second: rank,
            }),
            Some(_) => Ok(()),
            None => {
                self.ranks.insert(symbol, rank);
                Ok(())
            }
        }
    }

    pub fn rank(&self, symbol: &str) -> Option<usize> {
        self.ranks.get(symbol).copied()
    }

    pub fn contains(&self, symbol: &str) -> bool {
        self.ranks.contains_key(symbol)
    }

    /// Returns the interned symbol with this name, if declared.
    pub fn symbol(&self, name: &str) -> Option<&Symbol> {
        self.ranks.get_key_value(name).map(|(s, _)| s)
    }

    pub fn is_constant(&self, symbol: &str) -> bool {
        self.rank(symbol) == Some(0)
    }

    pub fn constants(&self) -> impl Iterator<Item = &Symbol> + '_ {
        self.ranks.iter().filter(|(_, &r)| r == 0).map(|(s, _)| s)
    }

    pub fn non_constants(&self) -> impl Iterator<Item = &Symbol> + '_ {
        self.ranks.iter().filter(|(_, &r)| r > 0).map(|(s, _)| s)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Symbol, usize)> + '_ {
        self.ranks.iter().map(|(s, &r)| (s, r))
    }

    pub fn max_rank(&self) -> usize {
        self.ranks.values().copied().max().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    /// Merges another alphabet into this one, failing on a rank conflict.
    pub fn extend(&mut self, other: &RankedAlphabet) -> Result<()> {
        for (s, r) in other.iter() {
            self.insert(s.clone(), r)?;
        }
        Ok(())
    }
}

impl fmt::Display for RankedAlphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (s, r) in self.iter() {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "{s}:{r}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_and_non_constants_partition() {
        let a = RankedAlphabet::from_pairs([("a", 0), ("b", 0), ("f", 1), ("g", 2)]).unwrap();
        let consts: Vec<_> = a.constants().map(Symbol::as_str).collect();
        let others: Vec<_> = a.non_constants().map(Symbol::as_str).collect();
        assert_eq!(consts, ["a", "b"]);
        assert_eq!(others, ["f", "g"]);
        assert_eq!(a.max_rank(), 2);
        assert_eq!(consts.len() + others.len(), a.len());
    }

    #[test]
    fn conflicting_rank_is_rejected() {
        let err = RankedAlphabet::from_pairs([("f", 1), ("f", 2)]).unwrap_err();
        assert!(matches!(
            err,
            Error::RankConflict {
                first: 1,
                second: 2,
                ..
            }
        ));
        assert!(RankedAlphabet::from_pairs([("f", 1), ("f", 1)]).is_ok());
    }

    #[test]
    fn display_lists_declarations() {
        let a = RankedAlphabet::from_pairs([("g", 2), ("a", 0)]).unwrap();
        assert_eq!(a.to_string(), "a:0 g:2");
    }
}
