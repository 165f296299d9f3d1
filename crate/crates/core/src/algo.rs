//! One entry point over the interchangeable Follow algorithms.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linear::LinearizedExpr;
use crate::positions::{self, PositionSet};
use crate::zpc::{build_zpc, FollowMap};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FollowAlgorithm {
    /// Inductive Follow, one slot at a time.
    Naive,
    /// Constant part and rank ≥ 1 part computed separately.
    Decomposed,
    /// Product of First sets along the γ chain.
    Gamma,
    /// Two-phase walk on the ZPC structure, one slot at a time.
    Zpc,
    /// All slots at once, sharing work across the children of a position.
    Improved,
}

impl FollowAlgorithm {
    pub const ALL: [FollowAlgorithm; 5] = [
        FollowAlgorithm::Naive,
        FollowAlgorithm::Decomposed,
        FollowAlgorithm::Gamma,
        FollowAlgorithm::Zpc,
        FollowAlgorithm::Improved,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FollowAlgorithm::Naive => "naive",
            FollowAlgorithm::Decomposed => "decomposed",
            FollowAlgorithm::Gamma => "gamma",
            FollowAlgorithm::Zpc => "zpc",
            FollowAlgorithm::Improved => "improved",
        }
    }
}

impl fmt::Display for FollowAlgorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FollowAlgorithm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown algorithm `{s}`"))
    }
}

/// First of a star-normalized linear expression.
pub fn first_set(lin: &LinearizedExpr, algo: FollowAlgorithm) -> Result<PositionSet> {
    if !lin.is_star_normalized() {
        return Err(Error::NotNormalized);
    }
    Ok(match algo {
        FollowAlgorithm::Naive => positions::first_naive(lin),
        FollowAlgorithm::Decomposed => positions::first_decomposed(lin),
        _ => {
            let z = build_zpc(lin)?;
            z.first_at(z.root())?
        }
    })
}

/// Every Follow set of a star-normalized linear expression.
pub fn follow_sets(lin: &LinearizedExpr, algo: FollowAlgorithm) -> Result<FollowMap> {
    if !lin.is_star_normalized() {
        return Err(Error::NotNormalized);
    }
    let per_slot = |f: &dyn Fn(&crate::Position, usize) -> Result<PositionSet>| {
        lin.slots()
            .into_iter()
            .map(|(p, k)| {
                let set = f(&p, k)?;
                Ok(((p, k), set))
            })
            .collect::<Result<FollowMap>>()
    };
    match algo {
        FollowAlgorithm::Naive => per_slot(&|p, k| positions::follow_naive(lin, p, k)),
        FollowAlgorithm::Decomposed => per_slot(&|p, k| positions::follow_decomposed(lin, p, k)),
        FollowAlgorithm::Gamma => {
            let z = build_zpc(lin)?;
            per_slot(&|p, k| z.follow_via_gamma(p, k))
        }
        FollowAlgorithm::Zpc => {
            let z = build_zpc(lin)?;
            per_slot(&|p, k| z.follow_fast(p, k))
        }
        FollowAlgorithm::Improved => Ok(build_zpc(lin)?.follow_all()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linear::linearize;
    use crate::parse::parse_unchecked;

    #[test]
    fn names_round_trip() {
        for a in FollowAlgorithm::ALL {
            assert_eq!(a.name().parse::<FollowAlgorithm>(), Ok(a));
        }
        assert!("quick".parse::<FollowAlgorithm>().is_err());
    }

    #[test]
    fn all_algorithms_agree_on_a_small_case() {
        let lin = linearize(
            &parse_unchecked("g(f(a)*a, b) .b (h(b) + c)")
                .unwrap()
                .normalize_stars(),
        );
        let want = follow_sets(&lin, FollowAlgorithm::Naive).unwrap();
        assert_eq!(want.len(), 4);
        for a in FollowAlgorithm::ALL {
            assert_eq!(follow_sets(&lin, a).unwrap(), want, "{a}");
            assert_eq!(
                first_set(&lin, a).unwrap(),
                first_set(&lin, FollowAlgorithm::Naive).unwrap()
            );
        }
    }

    #[test]
    fn unnormalized_is_rejected() {
        let lin = linearize(&parse_unchecked("f(a)*a").unwrap());
        for a in FollowAlgorithm::ALL {
            assert!(matches!(follow_sets(&lin, a), Err(Error::NotNormalized)));
        }
    }
}
