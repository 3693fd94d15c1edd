//! Variable-length partial permutations over the alphabet `[q] = {0, .., q-1}`.
//!
//! A partial permutation is an ordered sequence of distinct symbols from `[q]`
//! of any length between 1 and q. The leftmost position is the weak tail: all
//! error operators in this crate act there. Symbols are 0-based internally;
//! the canonical text form is 1-based (so `[2,1,3,4]` over q=6 prints as
//! `"3245"`), plain digits for q <= 9 and dot-separated numbers otherwise.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("alphabet size must be at least 1")]
    ZeroAlphabet,
    #[error("a partial permutation must contain at least one symbol")]
    Empty,
    #[error("duplicate symbol {0}")]
    DuplicateSymbol(u8),
    #[error("symbol {symbol} out of range for alphabet size {q}")]
    SymbolOutOfRange { symbol: u8, q: u8 },
    #[error("stratum length {m} out of range for alphabet size {q}")]
    StratumOutOfRange { m: usize, q: u8 },
    #[error("rank {rank} out of range for stratum ({q}, {m})")]
    RankOutOfRange { rank: u128, q: u8, m: usize },
    #[error("cannot parse {0:?} as a partial permutation")]
    Parse(String),
}

/// An ordered sequence of distinct symbols from `[q]`, leftmost = weakest rank.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PartialPermutation {
    symbols: Vec<u8>,
    q: u8,
}

impl PartialPermutation {
    /// Validates symbols (pairwise distinct, each `< q`, nonempty) and builds
    /// the permutation.
    pub fn new(symbols: Vec<u8>, q: u8) -> Result<Self, PermError> {
        if q == 0 {
            return Err(PermError::ZeroAlphabet);
        }
        if symbols.is_empty() {
            return Err(PermError::Empty);
        }
        let mut seen = vec![false; q as usize];
        for &s in &symbols {
            if s >= q {
                return Err(PermError::SymbolOutOfRange { symbol: s, q });
            }
            if seen[s as usize] {
                return Err(PermError::DuplicateSymbol(s));
            }
            seen[s as usize] = true;
        }
        Ok(Self { symbols, q })
    }

    pub fn q(&self) -> u8 {
        self.q
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        false // length is always >= 1
    }

    /// True when every symbol of the alphabet appears.
    pub fn is_full(&self) -> bool {
        self.symbols.len() == self.q as usize
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    /// Symbols of the alphabet not present, in increasing order.
    pub fn unused_symbols(&self) -> Vec<u8> {
        let mut used = vec![false; self.q as usize];
        for &s in &self.symbols {
            used[s as usize] = true;
        }
        (0..self.q).filter(|&s| !used[s as usize]).collect()
    }

    /// True when `self` is a (contiguous) right tail of `other`.
    pub fn is_suffix_of(&self, other: &PartialPermutation) -> bool {
        self.q == other.q
            && self.len() <= other.len()
            && other.symbols[other.len() - self.len()..] == self.symbols[..]
    }

    /// Parses the canonical text form: 1-based digits for q <= 9, 1-based
    /// dot-separated decimal numbers otherwise. Over wide alphabets an
    /// undotted string is a single symbol ("10" over q=12 is the symbol 10,
    /// not 1 then 0).
    pub fn parse(text: &str, q: u8) -> Result<Self, PermError> {
        let one_based: Vec<u16> = if text.contains('.') || q > 9 {
            text.split('.')
                .map(|part| part.parse::<u16>().map_err(|_| PermError::Parse(text.to_string())))
                .collect::<Result<_, _>>()?
        } else {
            text.chars()
                .map(|c| c.to_digit(10).map(|d| d as u16).ok_or_else(|| PermError::Parse(text.to_string())))
                .collect::<Result<_, _>>()?
        };
        let symbols = one_based
            .into_iter()
            .map(|d| {
                if d == 0 || d > u8::MAX as u16 {
                    Err(PermError::Parse(text.to_string()))
                } else {
                    Ok((d - 1) as u8)
                }
            })
            .collect::<Result<Vec<u8>, _>>()?;
        Self::new(symbols, q)
    }
}

// Lexicographic on the symbol sequence; this single order is used everywhere
// an order matters (stratum enumeration, sphere indexing, canonical output).
impl Ord for PartialPermutation {
    fn cmp(&self, other: &Self) -> Ordering {
        self.symbols.cmp(&other.symbols).then(self.q.cmp(&other.q))
    }
}

impl PartialOrd for PartialPermutation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PartialPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q <= 9 {
            for &s in &self.symbols {
                write!(f, "{}", s + 1)?;
            }
        } else {
            for (i, &s) in self.symbols.iter().enumerate() {
                if i > 0 {
                    write!(f, ".")?;
                }
                write!(f, "{}", s as u16 + 1)?;
            }
        }
        Ok(())
    }
}

/// `n!` as an exact 128-bit integer. Panics for n > 34 where u128 overflows;
/// every exact routine in this crate stays far below that.
pub fn factorial(n: u64) -> u128 {
    (1..=n as u128).product()
}

/// Falling factorial `n * (n-1) * .. * (n-k+1)`, i.e. `n!/(n-k)!`.
pub fn falling_factorial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    ((n - k + 1) as u128..=n as u128).product()
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    falling_factorial(n, k) / factorial(k)
}

/// All partial permutations of length `m` over `[q]`, lexicographically
/// increasing. The stratum has exactly `q!/(q-m)!` elements.
pub fn enumerate_stratum(q: u8, m: usize) -> Result<Vec<PartialPermutation>, PermError> {
    if q == 0 {
        return Err(PermError::ZeroAlphabet);
    }
    if m < 1 || m > q as usize {
        return Err(PermError::StratumOutOfRange { m, q });
    }
    let mut out = Vec::with_capacity(falling_factorial(q as u64, m as u64) as usize);
    let mut used = vec![false; q as usize];
    let mut prefix = Vec::with_capacity(m);
    fill_stratum(q, m, &mut used, &mut prefix, &mut out);
    Ok(out)
}

fn fill_stratum(
    q: u8,
    m: usize,
    used: &mut [bool],
    prefix: &mut Vec<u8>,
    out: &mut Vec<PartialPermutation>,
) {
    if prefix.len() == m {
        out.push(PartialPermutation {
            symbols: prefix.clone(),
            q,
        });
        return;
    }
    for s in 0..q {
        if !used[s as usize] {
            used[s as usize] = true;
            prefix.push(s);
            fill_stratum(q, m, used, prefix, out);
            prefix.pop();
            used[s as usize] = false;
        }
    }
}

/// The universe of all partial permutations over `[q]`, stratified by length.
#[derive(Debug, Clone, Copy)]
pub struct PermUniverse {
    q: u8,
}

impl PermUniverse {
    pub fn new(q: u8) -> Result<Self, PermError> {
        if q == 0 {
            return Err(PermError::ZeroAlphabet);
        }
        Ok(Self { q })
    }

    pub fn q(&self) -> u8 {
        self.q
    }

    pub fn stratum(&self, m: usize) -> Result<Vec<PartialPermutation>, PermError> {
        enumerate_stratum(self.q, m)
    }

    /// Every partial permutation over `[q]`, all lengths 1..=q, each stratum
    /// in lexicographic order.
    pub fn all(&self) -> Vec<PartialPermutation> {
        let mut out = Vec::new();
        for m in 1..=self.q as usize {
            out.extend(enumerate_stratum(self.q, m).expect("valid stratum"));
        }
        out
    }

    pub fn size(&self) -> u128 {
        universe_size(self.q)
    }
}

/// Exact count of all partial permutations over `[q]` of lengths 1..=q:
/// `sum_{i=0}^{q-1} q!/i!`.
pub fn universe_size(q: u8) -> u128 {
    (0..q as u64).map(|i| falling_factorial(q as u64, q as u64 - i)).sum()
}

/// Position of `pi` in the lexicographic enumeration of its stratum.
pub fn lex_rank(pi: &PartialPermutation) -> u128 {
    let q = pi.q() as u64;
    let m = pi.len() as u64;
    let mut used = vec![false; pi.q() as usize];
    let mut rank: u128 = 0;
    for (k, &s) in pi.symbols().iter().enumerate() {
        let smaller_free = (0..s).filter(|&x| !used[x as usize]).count() as u128;
        rank += smaller_free * falling_factorial(q - k as u64 - 1, m - k as u64 - 1);
        used[s as usize] = true;
    }
    rank
}

/// Inverse of [`lex_rank`] on the stratum `(q, m)`.
pub fn lex_unrank(q: u8, m: usize, rank: u128) -> Result<PartialPermutation, PermError> {
    if q == 0 {
        return Err(PermError::ZeroAlphabet);
    }
    if m < 1 || m > q as usize {
        return Err(PermError::StratumOutOfRange { m, q });
    }
    if rank >= falling_factorial(q as u64, m as u64) {
        return Err(PermError::RankOutOfRange { rank, q, m });
    }
    let mut remaining = rank;
    let mut used = vec![false; q as usize];
    let mut symbols = Vec::with_capacity(m);
    for k in 0..m {
        let block = falling_factorial(q as u64 - k as u64 - 1, m as u64 - k as u64 - 1);
        let index = (remaining / block) as usize;
        remaining %= block;
        let s = (0..q)
            .filter(|&x| !used[x as usize])
            .nth(index)
            .expect("index within free symbols");
        used[s as usize] = true;
        symbols.push(s);
    }
    Ok(PartialPermutation { symbols, q })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(text: &str, q: u8) -> PartialPermutation {
        PartialPermutation::parse(text, q).unwrap()
    }

    #[test]
    fn build_and_display() {
        let pi = PartialPermutation::new(vec![2, 1, 3, 4], 6).unwrap();
        assert_eq!(pi.len(), 4);
        assert_eq!(pi.to_string(), "3245");
        assert_eq!(p("3245", 6), pi);

        let single = PartialPermutation::new(vec![0], 1).unwrap();
        assert_eq!(single.to_string(), "1");
    }

    #[test]
    fn build_rejects_invalid() {
        assert_eq!(
            PartialPermutation::new(vec![1, 1], 3),
            Err(PermError::DuplicateSymbol(1))
        );
        assert_eq!(
            PartialPermutation::new(vec![3], 3),
            Err(PermError::SymbolOutOfRange { symbol: 3, q: 3 })
        );
        assert_eq!(PartialPermutation::new(vec![], 3), Err(PermError::Empty));
        assert_eq!(PartialPermutation::new(vec![0], 0), Err(PermError::ZeroAlphabet));
    }

    #[test]
    fn wide_alphabet_uses_dotted_form() {
        let pi = PartialPermutation::new(vec![9, 2, 0], 12).unwrap();
        assert_eq!(pi.to_string(), "10.3.1");
        assert_eq!(PartialPermutation::parse("10.3.1", 12).unwrap(), pi);
    }

    #[test]
    fn stratum_q3_m2_matches_known_set() {
        let got: Vec<String> = enumerate_stratum(3, 2)
            .unwrap()
            .iter()
            .map(|x| x.to_string())
            .collect();
        // the set {12, 21, 23, 32, 13, 31} in lexicographic order
        assert_eq!(got, vec!["12", "13", "21", "23", "31", "32"]);
    }

    #[test]
    fn stratum_sizes() {
        assert_eq!(enumerate_stratum(1, 1).unwrap().len(), 1);
        assert_eq!(enumerate_stratum(5, 3).unwrap().len(), 60);
        for q in 1..=6u8 {
            for m in 1..=q as usize {
                let stratum = enumerate_stratum(q, m).unwrap();
                assert_eq!(stratum.len() as u128, falling_factorial(q as u64, m as u64));
                assert!(stratum.windows(2).all(|w| w[0] < w[1]), "not strictly increasing");
            }
        }
        assert!(enumerate_stratum(3, 4).is_err());
        assert!(enumerate_stratum(3, 0).is_err());
    }

    #[test]
    fn universe_size_matches_enumeration() {
        assert_eq!(universe_size(1), 1);
        assert_eq!(universe_size(3), 15);
        assert_eq!(universe_size(4), 64);
        for q in 1..=6u8 {
            let all = PermUniverse::new(q).unwrap().all();
            assert_eq!(all.len() as u128, universe_size(q));
            let dedup: std::collections::BTreeSet<_> = all.iter().cloned().collect();
            assert_eq!(dedup.len(), all.len(), "strata overlap at q={q}");
        }
    }

    #[test]
    fn rank_unrank_roundtrip() {
        let stratum = enumerate_stratum(3, 2).unwrap();
        assert_eq!(lex_rank(&stratum[0]), 0);
        assert_eq!(lex_unrank(3, 2, 5).unwrap(), *stratum.last().unwrap());

        for q in 1..=6u8 {
            for m in 1..=q as usize {
                for (r, pi) in enumerate_stratum(q, m).unwrap().iter().enumerate() {
                    assert_eq!(lex_rank(pi), r as u128);
                    assert_eq!(&lex_unrank(q, m, r as u128).unwrap(), pi);
                }
            }
        }
        assert!(lex_unrank(5, 3, 60).is_err());
    }

    #[test]
    fn suffix_relation() {
        assert!(p("45", 6).is_suffix_of(&p("3245", 6)));
        assert!(p("3245", 6).is_suffix_of(&p("3245", 6)));
        assert!(!p("32", 6).is_suffix_of(&p("3245", 6)));
        assert!(!p("45", 5).is_suffix_of(&p("3245", 6)));
    }

    #[test]
    fn counting_helpers() {
        assert_eq!(factorial(0), 1);
        assert_eq!(factorial(8), 40320);
        assert_eq!(falling_factorial(5, 3), 60);
        assert_eq!(falling_factorial(3, 5), 0);
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(3, 5), 0);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arbitrary_perm() -> impl Strategy<Value = PartialPermutation> {
            (2u8..=20, 1usize..=20).prop_flat_map(|(q, len)| {
                let len = len.min(q as usize);
                Just((q, len)).prop_perturb(move |(q, len), mut rng| {
                    let mut symbols: Vec<u8> = (0..q).collect();
                    for i in 0..len {
                        let pick = rng.random_range(i..symbols.len());
                        symbols.swap(i, pick);
                    }
                    symbols.truncate(len);
                    PartialPermutation::new(symbols, q).expect("sampled symbols are distinct")
                })
            })
        }

        proptest! {
            #[test]
            fn display_parse_roundtrip(pi in arbitrary_perm()) {
                let text = pi.to_string();
                prop_assert_eq!(PartialPermutation::parse(&text, pi.q()).unwrap(), pi);
            }

            #[test]
            fn unrank_rank_identity_q8(m in 1usize..=8, raw in 0u128..40320) {
                let rank = raw % falling_factorial(8, m as u64);
                let pi = lex_unrank(8, m, rank).unwrap();
                prop_assert_eq!(lex_rank(&pi), rank);
                prop_assert_eq!(pi.len(), m);
            }
        }
    }
}
