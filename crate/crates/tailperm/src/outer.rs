//! Outer block codes over a small alphabet `{0..ell-1}` with erasure
//! decoding: repetition, single parity, prime-field MDS evaluation codes, and
//! greedy lexicographic search for everything else that is small enough to
//! enumerate.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OuterError {
    #[error("no supported outer-code family for ell={ell}, n={n}, d={d}: {reason}")]
    Unsupported {
        ell: u8,
        n: usize,
        d: usize,
        reason: String,
    },
    #[error("invalid outer-code parameters: {0}")]
    ParamInvalid(String),
    #[error("search space {space} exceeds enumeration budget {budget}")]
    SearchTooLarge { space: u128, budget: u128 },
    #[error("erasure pattern is not uniquely decodable ({0})")]
    ErasureDecode(String),
    #[error("word length {found} does not match code length {expected}")]
    LengthMismatch { found: usize, expected: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OuterFamily {
    #[serde(rename = "rep")]
    Repetition,
    Parity,
    Mds,
    Search,
    Auto,
}

impl fmt::Display for OuterFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OuterFamily::Repetition => write!(f, "rep"),
            OuterFamily::Parity => write!(f, "parity"),
            OuterFamily::Mds => write!(f, "mds"),
            OuterFamily::Search => write!(f, "search"),
            OuterFamily::Auto => write!(f, "auto"),
        }
    }
}

impl FromStr for OuterFamily {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "rep" | "repetition" => Ok(OuterFamily::Repetition),
            "parity" => Ok(OuterFamily::Parity),
            "mds" => Ok(OuterFamily::Mds),
            "search" => Ok(OuterFamily::Search),
            "auto" => Ok(OuterFamily::Auto),
            other => Err(format!(
                "unknown outer family {other:?} (expected rep|parity|mds|search|auto)"
            )),
        }
    }
}

/// A length-n block code over `{0..ell-1}` with a known minimum distance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OuterCode {
    Repetition { ell: u8, n: usize },
    Parity { ell: u8, n: usize },
    Mds(MdsCode),
    List(ListCode),
}

pub const DEFAULT_SEARCH_BUDGET: u128 = 1 << 22;

/// Picks or builds a code with minimum distance at least `d`. `Auto` prefers
/// MDS when the alphabet is a prime field large enough for the length, then
/// the closed families, then greedy search; anything else is an explicit
/// unsupported error, never a silently weaker distance.
pub fn outer_code_factory(
    ell: u8,
    n: usize,
    d: usize,
    family: OuterFamily,
) -> Result<OuterCode, OuterError> {
    if ell == 0 || n == 0 {
        return Err(OuterError::ParamInvalid(format!("ell={ell}, n={n}")));
    }
    if d > n {
        return Err(OuterError::ParamInvalid(format!(
            "minimum distance {d} exceeds length {n}"
        )));
    }
    // a one-letter alphabet has a single codeword; every distance holds vacuously
    if ell == 1 {
        return Ok(OuterCode::Repetition { ell, n });
    }
    match family {
        OuterFamily::Repetition => {
            Ok(OuterCode::Repetition { ell, n })
        }
        OuterFamily::Parity => {
            if d <= 2 {
                Ok(OuterCode::Parity { ell, n })
            } else {
                Err(OuterError::Unsupported {
                    ell,
                    n,
                    d,
                    reason: "single parity only reaches distance 2".to_string(),
                })
            }
        }
        OuterFamily::Mds => MdsCode::new(ell, n, d).map(OuterCode::Mds),
        OuterFamily::Search => {
            ListCode::lexicode(ell, n, d, DEFAULT_SEARCH_BUDGET).map(OuterCode::List)
        }
        OuterFamily::Auto => {
            if is_prime(ell) && n <= ell as usize {
                return MdsCode::new(ell, n, d).map(OuterCode::Mds);
            }
            if d == n {
                return Ok(OuterCode::Repetition { ell, n });
            }
            if d <= 2 {
                return Ok(OuterCode::Parity { ell, n });
            }
            ListCode::lexicode(ell, n, d, DEFAULT_SEARCH_BUDGET)
                .map(OuterCode::List)
                .map_err(|_| OuterError::Unsupported {
                    ell,
                    n,
                    d,
                    reason: "no closed family applies and the space is too big to search"
                        .to_string(),
                })
        }
    }
}

impl OuterCode {
    pub fn ell(&self) -> u8 {
        match self {
            OuterCode::Repetition { ell, .. } | OuterCode::Parity { ell, .. } => *ell,
            OuterCode::Mds(c) => c.p,
            OuterCode::List(c) => c.ell,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            OuterCode::Repetition { n, .. } | OuterCode::Parity { n, .. } => *n,
            OuterCode::Mds(c) => c.n,
            OuterCode::List(c) => c.n,
        }
    }

    pub fn family(&self) -> OuterFamily {
        match self {
            OuterCode::Repetition { .. } => OuterFamily::Repetition,
            OuterCode::Parity { .. } => OuterFamily::Parity,
            OuterCode::Mds(_) => OuterFamily::Mds,
            OuterCode::List(_) => OuterFamily::Search,
        }
    }

    pub fn min_distance(&self) -> usize {
        match self {
            OuterCode::Repetition { n, .. } => *n,
            OuterCode::Parity { n, .. } => 2.min(*n),
            OuterCode::Mds(c) => c.n - c.k + 1,
            OuterCode::List(c) => c.d,
        }
    }

    pub fn size(&self) -> u128 {
        match self {
            OuterCode::Repetition { ell, .. } => *ell as u128,
            OuterCode::Parity { ell, n } => (*ell as u128).pow(*n as u32 - 1),
            OuterCode::Mds(c) => (c.p as u128).pow(c.k as u32),
            OuterCode::List(c) => c.words.len() as u128,
        }
    }

    pub fn contains(&self, word: &[u8]) -> bool {
        if word.len() != self.n() || word.iter().any(|&s| s >= self.ell()) {
            return false;
        }
        match self {
            OuterCode::Repetition { .. } => word.iter().all(|&s| s == word[0]),
            OuterCode::Parity { ell, .. } => {
                word.iter().map(|&s| s as u64).sum::<u64>() % *ell as u64 == 0
            }
            OuterCode::Mds(c) => c.contains(word),
            OuterCode::List(c) => c.words.binary_search_by(|w| w.as_slice().cmp(word)).is_ok(),
        }
    }

    /// The `index`-th codeword under a fixed enumeration of the code.
    pub fn codeword(&self, index: u128) -> Option<Vec<u8>> {
        if index >= self.size() {
            return None;
        }
        match self {
            OuterCode::Repetition { n, .. } => Some(vec![index as u8; *n]),
            OuterCode::Parity { ell, n } => {
                let mut word = digits(index, *ell, *n - 1);
                let sum: u64 = word.iter().map(|&s| s as u64).sum();
                let parity = (*ell as u64 - sum % *ell as u64) % *ell as u64;
                word.push(parity as u8);
                Some(word)
            }
            OuterCode::Mds(c) => Some(c.codeword(&digits(index, c.p, c.k))),
            OuterCode::List(c) => c.words.get(index as usize).cloned(),
        }
    }

    /// Inverse of [`OuterCode::codeword`]; None when the word is not in the code.
    pub fn index_of(&self, word: &[u8]) -> Option<u128> {
        if !self.contains(word) {
            return None;
        }
        match self {
            OuterCode::Repetition { .. } => Some(word[0] as u128),
            OuterCode::Parity { ell, .. } => {
                Some(undigits(&word[..word.len() - 1], *ell))
            }
            OuterCode::Mds(c) => Some(undigits(&c.coefficients(word), c.p)),
            OuterCode::List(c) => c
                .words
                .binary_search_by(|w| w.as_slice().cmp(word))
                .ok()
                .map(|i| i as u128),
        }
    }

    /// Fills erased coordinates (None entries) so that the result is the
    /// unique codeword agreeing with every known coordinate. Fails when no
    /// codeword matches or more than one does.
    pub fn decode_erasures(&self, word: &[Option<u8>]) -> Result<Vec<u8>, OuterError> {
        if word.len() != self.n() {
            return Err(OuterError::LengthMismatch {
                found: word.len(),
                expected: self.n(),
            });
        }
        match self {
            OuterCode::Repetition { ell, n } => {
                let known: Vec<u8> = word.iter().flatten().copied().collect();
                let symbol = match known.first() {
                    Some(&s) => s,
                    None if *ell == 1 => 0,
                    None => {
                        return Err(OuterError::ErasureDecode(
                            "every coordinate erased".to_string(),
                        ))
                    }
                };
                if known.iter().any(|&s| s != symbol) {
                    return Err(OuterError::ErasureDecode(
                        "known coordinates disagree".to_string(),
                    ));
                }
                Ok(vec![symbol; *n])
            }
            OuterCode::Parity { ell, .. } => {
                let erased: Vec<usize> = word
                    .iter()
                    .enumerate()
                    .filter(|(_, s)| s.is_none())
                    .map(|(i, _)| i)
                    .collect();
                let sum: u64 = word.iter().flatten().map(|&s| s as u64).sum();
                match erased.as_slice() {
                    [] => {
                        if sum.is_multiple_of(*ell as u64) {
                            Ok(word.iter().map(|s| s.unwrap()).collect())
                        } else {
                            Err(OuterError::ErasureDecode("parity violated".to_string()))
                        }
                    }
                    [at] => {
                        let fill = (*ell as u64 - sum % *ell as u64) % *ell as u64;
                        let mut out: Vec<u8> =
                            word.iter().map(|s| s.unwrap_or(fill as u8)).collect();
                        out[*at] = fill as u8;
                        Ok(out)
                    }
                    _ => Err(OuterError::ErasureDecode(format!(
                        "{} erasures exceed the single-parity capability",
                        erased.len()
                    ))),
                }
            }
            OuterCode::Mds(c) => c.decode_erasures(word),
            OuterCode::List(c) => {
                let mut matches = c.words.iter().filter(|w| {
                    w.iter()
                        .zip(word.iter())
                        .all(|(&have, want)| want.is_none() || *want == Some(have))
                });
                let first = matches.next().cloned();
                match (first, matches.next()) {
                    (Some(w), None) => Ok(w),
                    (Some(_), Some(_)) => Err(OuterError::ErasureDecode(
                        "multiple codewords match".to_string(),
                    )),
                    (None, _) => {
                        Err(OuterError::ErasureDecode("no codeword matches".to_string()))
                    }
                }
            }
        }
    }

    /// Exhaustively checks the pairwise minimum distance when the code is
    /// small enough; None when it is not.
    pub fn verify_min_distance(&self, pair_budget: u128) -> Option<bool> {
        let size = self.size();
        if size.checked_mul(size)? > pair_budget {
            return None;
        }
        let words: Vec<Vec<u8>> = (0..size).map(|i| self.codeword(i).unwrap()).collect();
        let d = self.min_distance();
        for (i, a) in words.iter().enumerate() {
            for b in &words[i + 1..] {
                if hamming(a, b) < d {
                    return Some(false);
                }
            }
        }
        Some(true)
    }
}

pub fn hamming(a: &[u8], b: &[u8]) -> usize {
    a.iter().zip(b.iter()).filter(|(x, y)| x != y).count()
}

fn digits(mut value: u128, base: u8, len: usize) -> Vec<u8> {
    let mut out = vec![0u8; len];
    for slot in out.iter_mut() {
        *slot = (value % base as u128) as u8;
        value /= base as u128;
    }
    out
}

fn undigits(word: &[u8], base: u8) -> u128 {
    word.iter()
        .rev()
        .fold(0u128, |acc, &d| acc * base as u128 + d as u128)
}

fn is_prime(p: u8) -> bool {
    if p < 2 {
        return false;
    }
    (2..=(p as u16).isqrt() as u8).all(|f| !p.is_multiple_of(f))
}

/// Reed-Solomon style evaluation code over the prime field GF(p): messages
/// are polynomials of degree < k evaluated at the points 0..n-1, so the
/// minimum distance is n-k+1 and any k known coordinates recover the word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MdsCode {
    p: u8,
    n: usize,
    k: usize,
}

impl MdsCode {
    pub fn new(p: u8, n: usize, d: usize) -> Result<Self, OuterError> {
        if !is_prime(p) {
            return Err(OuterError::Unsupported {
                ell: p,
                n,
                d,
                reason: format!("{p} is not a prime field size"),
            });
        }
        if n > p as usize {
            return Err(OuterError::Unsupported {
                ell: p,
                n,
                d,
                reason: format!("length {n} exceeds the {p} evaluation points"),
            });
        }
        if d < 1 || d > n {
            return Err(OuterError::ParamInvalid(format!("d={d} out of 1..={n}")));
        }
        Ok(Self { p, n, k: n - d + 1 })
    }

    pub fn dimension(&self) -> usize {
        self.k
    }

    fn eval(&self, coeffs: &[u8], x: u64) -> u8 {
        let p = self.p as u64;
        let mut acc = 0u64;
        for &c in coeffs.iter().rev() {
            acc = (acc * x + c as u64) % p;
        }
        acc as u8
    }

    fn codeword(&self, coeffs: &[u8]) -> Vec<u8> {
        (0..self.n as u64).map(|x| self.eval(coeffs, x)).collect()
    }

    fn contains(&self, word: &[u8]) -> bool {
        let coeffs = self.interpolate(
            &(0..self.k as u64).collect::<Vec<_>>(),
            &word[..self.k],
        );
        (self.k..self.n).all(|x| self.eval(&coeffs, x as u64) == word[x])
    }

    /// Coefficient vector of a codeword (interpolated from its first k
    /// coordinates; only meaningful when the word is in the code).
    fn coefficients(&self, word: &[u8]) -> Vec<u8> {
        self.interpolate(&(0..self.k as u64).collect::<Vec<_>>(), &word[..self.k])
    }

    /// Lagrange interpolation in coefficient form through (xs[i], ys[i]).
    fn interpolate(&self, xs: &[u64], ys: &[u8]) -> Vec<u8> {
        let p = self.p as u64;
        let k = xs.len();
        let mut coeffs = vec![0u64; k];
        for i in 0..k {
            // basis_i(x) = prod_{j != i} (x - xs[j]) / (xs[i] - xs[j])
            let mut basis = vec![0u64; k];
            basis[0] = 1;
            let mut degree = 0;
            let mut denom = 1u64;
            for j in 0..k {
                if i == j {
                    continue;
                }
                // multiply basis by (x - xs[j])
                let neg = (p - xs[j] % p) % p;
                for idx in (0..=degree).rev() {
                    let carry = basis[idx];
                    basis[idx] = carry * neg % p;
                    basis[idx + 1] = (basis[idx + 1] + carry) % p;
                }
                degree += 1;
                denom = denom * ((xs[i] + p - xs[j] % p) % p) % p;
            }
            let scale = ys[i] as u64 * mod_inverse(denom, p) % p;
            for idx in 0..k {
                coeffs[idx] = (coeffs[idx] + basis[idx] * scale) % p;
            }
        }
        coeffs.into_iter().map(|c| c as u8).collect()
    }

    fn decode_erasures(&self, word: &[Option<u8>]) -> Result<Vec<u8>, OuterError> {
        let known: Vec<(u64, u8)> = word
            .iter()
            .enumerate()
            .filter_map(|(x, s)| s.map(|v| (x as u64, v)))
            .collect();
        if known.len() < self.k {
            return Err(OuterError::ErasureDecode(format!(
                "{} known coordinates, polynomial needs {}",
                known.len(),
                self.k
            )));
        }
        let xs: Vec<u64> = known[..self.k].iter().map(|&(x, _)| x).collect();
        let ys: Vec<u8> = known[..self.k].iter().map(|&(_, y)| y).collect();
        let coeffs = self.interpolate(&xs, &ys);
        // remaining known coordinates must agree, otherwise the pattern was
        // not a pure erasure pattern of a codeword
        for &(x, y) in &known[self.k..] {
            if self.eval(&coeffs, x) != y {
                return Err(OuterError::ErasureDecode(
                    "known coordinates are inconsistent with the code".to_string(),
                ));
            }
        }
        Ok(self.codeword(&coeffs))
    }
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // Fermat: a^(p-2) mod p
    let mut base = a % p;
    let mut exp = p - 2;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

/// An explicit codeword list built greedily in lexicographic order; keeps a
/// word whenever it has distance at least d to everything kept so far.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ListCode {
    ell: u8,
    n: usize,
    d: usize,
    words: Vec<Vec<u8>>,
}

impl ListCode {
    pub fn lexicode(ell: u8, n: usize, d: usize, budget: u128) -> Result<Self, OuterError> {
        let space = (ell as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
        if space > budget {
            return Err(OuterError::SearchTooLarge { space, budget });
        }
        let mut words: Vec<Vec<u8>> = Vec::new();
        let mut current = vec![0u8; n];
        loop {
            if words.iter().all(|w| hamming(w, &current) >= d) {
                words.push(current.clone());
            }
            // advance to the next word in lexicographic order
            let mut pos = n;
            loop {
                if pos == 0 {
                    return Ok(Self { ell, n, d, words });
                }
                pos -= 1;
                if current[pos] + 1 < ell {
                    current[pos] += 1;
                    for slot in current[pos + 1..].iter_mut() {
                        *slot = 0;
                    }
                    break;
                }
            }
        }
    }

    pub fn words(&self) -> &[Vec<u8>] {
        &self.words
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn repetition_basics() {
        let code = outer_code_factory(2, 3, 3, OuterFamily::Auto).unwrap();
        assert_eq!(code.family(), OuterFamily::Repetition);
        assert_eq!(code.size(), 2);
        assert!(code.contains(&[1, 1, 1]));
        assert!(!code.contains(&[1, 0, 1]));
        assert_eq!(code.decode_erasures(&[None, Some(1), None]).unwrap(), vec![1, 1, 1]);
        assert!(code.decode_erasures(&[None, None, None]).is_err());
    }

    #[test]
    fn trivial_alphabet() {
        let code = outer_code_factory(1, 5, 3, OuterFamily::Auto).unwrap();
        assert_eq!(code.size(), 1);
        assert_eq!(code.codeword(0).unwrap(), vec![0; 5]);
        assert_eq!(code.decode_erasures(&[None; 5]).unwrap(), vec![0; 5]);
    }

    #[test]
    fn parity_code() {
        let code = outer_code_factory(3, 4, 2, OuterFamily::Parity).unwrap();
        assert_eq!(code.size(), 27);
        assert!(code.contains(&[1, 2, 0, 0]));
        assert!(!code.contains(&[1, 1, 0, 0]));
        assert_eq!(
            code.decode_erasures(&[Some(1), None, Some(0), Some(0)]).unwrap(),
            vec![1, 2, 0, 0]
        );
        assert!(code.decode_erasures(&[None, None, Some(0), Some(0)]).is_err());
        assert_eq!(code.verify_min_distance(1 << 20), Some(true));
    }

    #[test]
    fn lexicode_finds_the_hamming_code() {
        let code = outer_code_factory(2, 7, 3, OuterFamily::Search).unwrap();
        assert_eq!(code.size(), 16);
        assert_eq!(code.verify_min_distance(1 << 20), Some(true));
    }

    #[test]
    fn mds_evaluation_code() {
        let code = outer_code_factory(5, 4, 3, OuterFamily::Mds).unwrap();
        assert_eq!(code.size(), 25);
        assert_eq!(code.min_distance(), 3);
        assert_eq!(code.verify_min_distance(1 << 20), Some(true));

        // erasure fill: any two erasures recover
        for index in 0..code.size() {
            let word = code.codeword(index).unwrap();
            let mut punctured: Vec<Option<u8>> = word.iter().map(|&s| Some(s)).collect();
            punctured[0] = None;
            punctured[2] = None;
            assert_eq!(code.decode_erasures(&punctured).unwrap(), word);
        }
    }

    #[test]
    fn mds_requires_prime_field() {
        assert!(matches!(
            outer_code_factory(6, 4, 3, OuterFamily::Mds),
            Err(OuterError::Unsupported { .. })
        ));
        assert!(matches!(
            outer_code_factory(5, 7, 3, OuterFamily::Mds),
            Err(OuterError::Unsupported { .. })
        ));
    }

    #[test]
    fn indexing_roundtrip() {
        for code in [
            outer_code_factory(2, 7, 3, OuterFamily::Search).unwrap(),
            outer_code_factory(5, 4, 3, OuterFamily::Mds).unwrap(),
            outer_code_factory(3, 4, 2, OuterFamily::Parity).unwrap(),
            outer_code_factory(4, 3, 3, OuterFamily::Repetition).unwrap(),
        ] {
            for index in 0..code.size() {
                let word = code.codeword(index).unwrap();
                assert!(code.contains(&word));
                assert_eq!(code.index_of(&word), Some(index));
            }
            assert_eq!(code.codeword(code.size()), None);
        }
    }

    #[test]
    fn erasure_decode_consistency_check() {
        let code = outer_code_factory(5, 4, 3, OuterFamily::Mds).unwrap();
        // corrupt a known coordinate: the survivor check must reject
        let word = code.codeword(7).unwrap();
        let mut tampered: Vec<Option<u8>> = word.iter().map(|&s| Some(s)).collect();
        tampered[3] = Some((word[3] + 1) % 5);
        tampered[0] = None;
        assert!(code.decode_erasures(&tampered).is_err());
    }

    #[test]
    fn factory_validation() {
        assert!(outer_code_factory(0, 3, 1, OuterFamily::Auto).is_err());
        assert!(outer_code_factory(2, 0, 0, OuterFamily::Auto).is_err());
        assert!(outer_code_factory(2, 3, 4, OuterFamily::Auto).is_err());
        assert!(matches!(
            outer_code_factory(2, 3, 3, OuterFamily::Parity),
            Err(OuterError::Unsupported { .. })
        ));
    }
}
