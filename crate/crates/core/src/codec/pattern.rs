//! Index patterns: length-`n` strings over `{*} ∪ [q]` with exactly `m` stars.
//!
//! Patterns are ordered left to right with `* < 0 < 1 < … < q−1`; ranks are
//! computed positionally by counting the completions of each prefix.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::params::{binomial, MAX_ALPHABET};
use crate::error::{Error, Result};

/// One position of a star pattern.
///
/// The derived order puts `Star` before every digit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PatternSymbol {
    Star,
    /// A 0-based channel symbol.
    Digit(u8),
}

/// A star pattern. Digits are 0-based; `Display` prints them 1-based.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StarPattern {
    symbols: Vec<PatternSymbol>,
}

impl StarPattern {
    pub fn new(symbols: Vec<PatternSymbol>) -> Self {
        StarPattern { symbols }
    }

    pub fn symbols(&self) -> &[PatternSymbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn star_count(&self) -> usize {
        self.symbols
            .iter()
            .filter(|s| **s == PatternSymbol::Star)
            .count()
    }

    /// Positions holding stars, in order.
    pub fn star_positions(&self) -> impl Iterator<Item = usize> + '_ {
        self.symbols
            .iter()
            .enumerate()
            .filter(|(_, s)| **s == PatternSymbol::Star)
            .map(|(k, _)| k)
    }
}

impl fmt::Display for StarPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, s) in self.symbols.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            match s {
                PatternSymbol::Star => f.write_str("*")?,
                PatternSymbol::Digit(d) => write!(f, "{}", *d as usize + 1)?,
            }
        }
        f.write_str(")")
    }
}

/// The set of star patterns for fixed `(q, n, m)` with a precomputed
/// completion-count table.
#[derive(Debug, Clone)]
pub struct PatternSpace {
    q: usize,
    n: usize,
    m: usize,
    /// `completions[len][stars] = C(len, stars) q^(len − stars)`.
    completions: Vec<Vec<BigUint>>,
}

impl PatternSpace {
    pub fn new(q: usize, n: usize, m: usize) -> Result<Self> {
        if !(2..=MAX_ALPHABET).contains(&q) {
            return Err(Error::Alphabet {
                q,
                need: "2 <= q <= 256",
            });
        }
        if m > n {
            return Err(Error::InvalidPattern(format!("m = {m} exceeds n = {n}")));
        }
        let qb = BigUint::from(q);
        let mut powers = vec![BigUint::from(1u32)];
        for k in 1..=n {
            let next = &powers[k - 1] * &qb;
            powers.push(next);
        }
        let completions = (0..=n)
            .map(|len| {
                (0..=m)
                    .map(|stars| {
                        if stars > len {
                            BigUint::zero()
                        } else {
                            binomial(len, stars) * &powers[len - stars]
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(PatternSpace {
            q,
            n,
            m,
            completions,
        })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// `|S| = C(n, m) q^(n−m)`.
    pub fn count(&self) -> &BigUint {
        &self.completions[self.n][self.m]
    }

    fn completions(&self, len: usize, stars: usize) -> &BigUint {
        &self.completions[len][stars]
    }

    /// The pattern with the given rank.
    pub fn unrank(&self, rank: &BigUint) -> Result<StarPattern> {
        if rank >= self.count() {
            return Err(Error::RankOutOfRange {
                rank: rank.clone(),
                count: self.count().clone(),
            });
        }
        let mut rank = rank.clone();
        let mut stars = self.m;
        let mut symbols = Vec::with_capacity(self.n);
        for k in 0..self.n {
            let rest = self.n - k - 1;
            if stars > 0 {
                let with_star = self.completions(rest, stars - 1);
                if &rank < with_star {
                    symbols.push(PatternSymbol::Star);
                    stars -= 1;
                    continue;
                }
                rank -= with_star;
            }
            let per_digit = self.completions(rest, stars);
            let (digit, rem) = rank.div_rem(per_digit);
            let digit = digit
                .to_u8()
                .filter(|d| (*d as usize) < self.q)
                .expect("rank bounded by the completion count");
            symbols.push(PatternSymbol::Digit(digit));
            rank = rem;
        }
        Ok(StarPattern { symbols })
    }

    /// Rank of `pattern`, validating its length, star count and digits.
    pub fn rank(&self, pattern: &StarPattern) -> Result<BigUint> {
        if pattern.len() != self.n {
            return Err(Error::InvalidPattern(format!(
                "length {} differs from n = {}",
                pattern.len(),
                self.n
            )));
        }
        if pattern.star_count() != self.m {
            return Err(Error::InvalidPattern(format!(
                "{} stars, expected {}",
                pattern.star_count(),
                self.m
            )));
        }
        let mut rank = BigUint::zero();
        let mut stars = self.m;
        for (k, sym) in pattern.symbols.iter().enumerate() {
            let rest = self.n - k - 1;
            match *sym {
                PatternSymbol::Star => stars -= 1,
                PatternSymbol::Digit(d) => {
                    if d as usize >= self.q {
                        return Err(Error::InvalidPattern(format!(
                            "digit {d} is not below q = {}",
                            self.q
                        )));
                    }
                    if stars > 0 {
                        rank += self.completions(rest, stars - 1);
                    }
                    rank += self.completions(rest, stars) * BigUint::from(d);
                }
            }
        }
        Ok(rank)
    }
}

/// Pattern with rank `rank` among all `(q, n, m)` patterns.
pub fn unrank_pattern(rank: &BigUint, q: usize, n: usize, m: usize) -> Result<StarPattern> {
    PatternSpace::new(q, n, m)?.unrank(rank)
}

/// Rank of `pattern` among all length-`pattern.len()` patterns with `m`
/// stars over `q` symbols.
pub fn rank_pattern(pattern: &StarPattern, q: usize, m: usize) -> Result<BigUint> {
    PatternSpace::new(q, pattern.len(), m)?.rank(pattern)
}

/// The first patterns of a space, unranked on demand and kept for reuse.
#[derive(Debug, Clone)]
pub struct PatternCache {
    space: PatternSpace,
    patterns: Vec<StarPattern>,
}

impl PatternCache {
    pub fn new(space: PatternSpace) -> Self {
        PatternCache {
            space,
            patterns: Vec::new(),
        }
    }

    pub fn space(&self) -> &PatternSpace {
        &self.space
    }

    /// Makes sure the first `len` patterns are available.
    pub fn ensure(&mut self, len: usize) -> Result<()> {
        while self.patterns.len() < len {
            let next = self.space.unrank(&BigUint::from(self.patterns.len()))?;
            self.patterns.push(next);
        }
        Ok(())
    }

    /// Pattern of rank `index`; call [`ensure`](Self::ensure) first.
    pub fn get(&self, index: usize) -> &StarPattern {
        &self.patterns[index]
    }

    pub fn cached(&self) -> &[StarPattern] {
        &self.patterns
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use PatternSymbol::{Digit, Star};

    /// All patterns by brute force, sorted under the derived order.
    fn enumerate(q: usize, n: usize, m: usize) -> Vec<StarPattern> {
        let alphabet = q + 1;
        let total = alphabet.pow(n as u32);
        let mut out: Vec<StarPattern> = (0..total)
            .map(|mut code| {
                let symbols = (0..n)
                    .map(|_| {
                        let s = code % alphabet;
                        code /= alphabet;
                        if s == 0 {
                            Star
                        } else {
                            Digit((s - 1) as u8)
                        }
                    })
                    .collect();
                StarPattern::new(symbols)
            })
            .filter(|p| p.star_count() == m)
            .collect();
        out.sort();
        out
    }

    #[test]
    fn small_space_by_hand() {
        let space = PatternSpace::new(2, 2, 1).unwrap();
        assert_eq!(space.count(), &BigUint::from(4u32));
        let all: Vec<String> = (0..4u32)
            .map(|r| space.unrank(&BigUint::from(r)).unwrap().to_string())
            .collect();
        assert_eq!(all, ["(*,1)", "(*,2)", "(1,*)", "(2,*)"]);
    }

    #[test]
    fn matches_brute_force_order() {
        for (q, n, m) in [
            (2, 2, 1),
            (2, 6, 3),
            (3, 4, 2),
            (4, 3, 0),
            (3, 5, 5),
            (2, 5, 4),
        ] {
            let expected = enumerate(q, n, m);
            let space = PatternSpace::new(q, n, m).unwrap();
            assert_eq!(space.count(), &BigUint::from(expected.len()));
            for (r, p) in expected.iter().enumerate() {
                assert_eq!(&space.unrank(&BigUint::from(r)).unwrap(), p);
                assert_eq!(space.rank(p).unwrap(), BigUint::from(r));
            }
        }
    }

    #[test]
    fn round_trip_q2_n6_m3() {
        let space = PatternSpace::new(2, 6, 3).unwrap();
        assert_eq!(space.count(), &BigUint::from(160u32));
        for r in 0..160u32 {
            let r = BigUint::from(r);
            assert_eq!(space.rank(&space.unrank(&r).unwrap()).unwrap(), r);
        }
    }

    #[test]
    fn rank_zero_is_stars_then_ones() {
        for (q, n, m) in [(2, 17, 13), (5, 9, 4), (3, 1, 0)] {
            let p = unrank_pattern(&BigUint::zero(), q, n, m).unwrap();
            let mut expected = vec![Star; m];
            expected.extend(std::iter::repeat_n(Digit(0), n - m));
            assert_eq!(p.symbols(), &expected[..]);
        }
    }

    #[test]
    fn errors() {
        let space = PatternSpace::new(2, 2, 1).unwrap();
        assert!(matches!(
            space.unrank(&BigUint::from(4u32)),
            Err(Error::RankOutOfRange { .. })
        ));
        let two_stars = StarPattern::new(vec![Star, Star]);
        assert!(space.rank(&two_stars).is_err());
        assert!(space.rank(&StarPattern::new(vec![Star, Digit(2)])).is_err());
        assert!(space.rank(&StarPattern::new(vec![Star])).is_err());
        assert!(rank_pattern(&two_stars, 2, 1).is_err());
        assert!(PatternSpace::new(1, 2, 1).is_err());
        assert!(PatternSpace::new(2, 2, 3).is_err());
    }

    #[test]
    fn cache_agrees_with_unrank() {
        let mut cache = PatternCache::new(PatternSpace::new(3, 5, 3).unwrap());
        cache.ensure(50).unwrap();
        assert_eq!(cache.cached().len(), 50);
        for i in 0..50 {
            assert_eq!(
                cache.get(i),
                &unrank_pattern(&BigUint::from(i), 3, 5, 3).unwrap()
            );
        }
        assert!(cache.ensure(10_000).is_err());
    }
}
