//! Exact and Monte Carlo simulation of the composite read channel.
//!
//! A stored partial permutation is synthesized as a mixture whose k-th
//! weakest symbol carries weight k/(m(m+1)/2); sequencing draws N reads from
//! that mixture (plus an optional error mass) and the decoder sees only the
//! ranking of the observed counts. Everything here is generic over the
//! probability scalar [`Weight`], so the same enumeration runs in exact
//! rational arithmetic or in f64.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use thiserror::Error;

use crate::perm::PartialPermutation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChannelError {
    #[error("error probability must lie in [0, 1), got {0}")]
    EpsilonOutOfRange(String),
    #[error("designated error symbol {symbol} collides with the stored permutation")]
    DesignatedCollision { symbol: u8 },
    #[error("designated error symbol {symbol} out of range for alphabet size {q}")]
    DesignatedOutOfRange { symbol: u8, q: u8 },
    #[error("no unused symbol can carry the error mass (the permutation is full)")]
    NoUnusedSymbol,
    #[error("read count must be at least 1")]
    ZeroReads,
    #[error("exact enumeration needs {needed} count vectors, budget is {budget}")]
    Budget { needed: u128, budget: u128 },
    #[error("cannot parse {0:?} as a decimal fraction")]
    ParseFraction(String),
}

/// Probability scalar: exact rationals or floating point behind one API.
pub trait Weight:
    Clone
    + PartialEq
    + PartialOrd
    + Zero
    + One
    + std::ops::Sub<Output = Self>
    + std::ops::Div<Output = Self>
{
    fn ratio(numerator: u64, denominator: u64) -> Self;
    fn as_f64(&self) -> f64;
}

impl Weight for f64 {
    fn ratio(numerator: u64, denominator: u64) -> Self {
        numerator as f64 / denominator as f64
    }

    fn as_f64(&self) -> f64 {
        *self
    }
}

impl Weight for num_rational::BigRational {
    fn ratio(numerator: u64, denominator: u64) -> Self {
        num_rational::BigRational::new(numerator.into(), denominator.into())
    }

    fn as_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

/// An exact nonnegative fraction, kept as integers so designs stay exactly
/// representable in rational arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Fraction {
    pub numerator: u64,
    pub denominator: u64,
}

impl Fraction {
    pub const ZERO: Fraction = Fraction {
        numerator: 0,
        denominator: 1,
    };

    pub fn new(numerator: u64, denominator: u64) -> Self {
        assert!(denominator != 0, "zero denominator");
        if numerator == 0 {
            return Fraction::ZERO;
        }
        let g = gcd(numerator, denominator);
        Fraction {
            numerator: numerator / g,
            denominator: denominator / g,
        }
    }

    /// Parses a plain decimal like `"0.01"` or `"1/100"` exactly.
    pub fn parse(text: &str) -> Result<Self, ChannelError> {
        let bad = || ChannelError::ParseFraction(text.to_string());
        if let Some((num, den)) = text.split_once('/') {
            let numerator = num.trim().parse::<u64>().map_err(|_| bad())?;
            let denominator = den.trim().parse::<u64>().map_err(|_| bad())?;
            if denominator == 0 {
                return Err(bad());
            }
            return Ok(Fraction::new(numerator, denominator));
        }
        let (int_part, frac_part) = match text.split_once('.') {
            Some((i, f)) => (i, f),
            None => (text, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        let int_val = if int_part.is_empty() {
            0
        } else {
            int_part.parse::<u64>().map_err(|_| bad())?
        };
        if frac_part.is_empty() {
            return Ok(Fraction::new(int_val, 1));
        }
        if frac_part.len() > 18 || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let scale = 10u64.pow(frac_part.len() as u32);
        let frac_val = frac_part.parse::<u64>().map_err(|_| bad())?;
        let numerator = int_val
            .checked_mul(scale)
            .and_then(|v| v.checked_add(frac_val))
            .ok_or_else(bad)?;
        Ok(Fraction::new(numerator, scale))
    }

    pub fn is_zero(&self) -> bool {
        self.numerator == 0
    }

    fn less_than_one(&self) -> bool {
        self.numerator < self.denominator
    }

    fn to_weight<W: Weight>(self) -> W {
        W::ratio(self.numerator, self.denominator)
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator)
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Where the synthesis error mass goes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ErrorSpec {
    None,
    /// All of `eps` lands on one symbol not present in the permutation.
    Designated { symbol: u8, eps: Fraction },
    /// `eps` is split evenly over every unused symbol.
    UniformUnused { eps: Fraction },
}

impl ErrorSpec {
    fn eps(&self) -> Fraction {
        match self {
            ErrorSpec::None => Fraction::ZERO,
            ErrorSpec::Designated { eps, .. } | ErrorSpec::UniformUnused { eps } => *eps,
        }
    }
}

/// How the mixture weights of the stored ranking are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightRule {
    /// The k-th weakest symbol gets weight `k / (m(m+1)/2)`; reproduces the
    /// (1/3, 2/3) two-symbol design.
    RankProportional,
    /// The k-th weakest symbol gets weight proportional to `ratio^k`. Larger
    /// ratios separate the ranks, making tail deletions dominate over swaps.
    Geometric { ratio: Fraction },
}

/// A composite design: what gets synthesized for one stored partial
/// permutation, and how many reads the sequencer takes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositeDesign {
    perm: PartialPermutation,
    reads: u32,
    error: ErrorSpec,
    rule: WeightRule,
}

impl CompositeDesign {
    pub fn new(
        perm: PartialPermutation,
        reads: u32,
        error: ErrorSpec,
    ) -> Result<Self, ChannelError> {
        Self::with_rule(perm, reads, error, WeightRule::RankProportional)
    }

    pub fn with_rule(
        perm: PartialPermutation,
        reads: u32,
        error: ErrorSpec,
        rule: WeightRule,
    ) -> Result<Self, ChannelError> {
        if reads == 0 {
            return Err(ChannelError::ZeroReads);
        }
        let eps = error.eps();
        if !eps.less_than_one() {
            return Err(ChannelError::EpsilonOutOfRange(eps.to_string()));
        }
        match error {
            ErrorSpec::Designated { symbol, .. } if !eps.is_zero() => {
                if symbol >= perm.q() {
                    return Err(ChannelError::DesignatedOutOfRange {
                        symbol,
                        q: perm.q(),
                    });
                }
                if perm.symbols().contains(&symbol) {
                    return Err(ChannelError::DesignatedCollision { symbol });
                }
            }
            ErrorSpec::UniformUnused { .. } if !eps.is_zero() && perm.is_full() => {
                return Err(ChannelError::NoUnusedSymbol);
            }
            _ => {}
        }
        if let WeightRule::Geometric { ratio } = rule {
            if ratio.is_zero() {
                return Err(ChannelError::EpsilonOutOfRange("geometric ratio 0".to_string()));
            }
        }
        Ok(Self {
            perm,
            reads,
            error,
            rule,
        })
    }

    pub fn perm(&self) -> &PartialPermutation {
        &self.perm
    }

    pub fn reads(&self) -> u32 {
        self.reads
    }

    pub fn error(&self) -> ErrorSpec {
        self.error
    }

    /// Per-read symbol probabilities over the whole alphabet `[q]`: the
    /// stored symbols carry the weight-rule masses scaled by `1 - eps`; the
    /// error mass is placed according to the error spec.
    pub fn distribution<W: Weight>(&self) -> Vec<W> {
        let q = self.perm.q() as usize;
        let m = self.perm.len() as u64;
        let eps = self.error.eps();
        let keep = W::one() - eps.to_weight::<W>();
        let rank_weights: Vec<W> = match self.rule {
            WeightRule::RankProportional => {
                let total = m * (m + 1) / 2;
                (1..=m).map(|rank| W::ratio(rank, total)).collect()
            }
            WeightRule::Geometric { ratio } => {
                let r = ratio.to_weight::<W>();
                let mut power = W::one();
                let powers: Vec<W> = (0..m)
                    .map(|_| {
                        power = power.clone() * r.clone();
                        power.clone()
                    })
                    .collect();
                let sum = powers.iter().fold(W::zero(), |acc, p| acc + p.clone());
                powers.into_iter().map(|p| p / sum.clone()).collect()
            }
        };
        let mut probs = vec![W::zero(); q];
        for (idx, &s) in self.perm.symbols().iter().enumerate() {
            probs[s as usize] = keep.clone() * rank_weights[idx].clone();
        }
        match self.error {
            ErrorSpec::None => {}
            ErrorSpec::Designated { symbol, eps } => {
                if !eps.is_zero() {
                    probs[symbol as usize] = eps.to_weight::<W>();
                }
            }
            ErrorSpec::UniformUnused { eps } => {
                if !eps.is_zero() {
                    let unused = self.perm.unused_symbols();
                    let share =
                        eps.to_weight::<W>() / W::ratio(unused.len() as u64, 1);
                    for s in unused {
                        probs[s as usize] = share.clone();
                    }
                }
            }
        }
        probs
    }
}

/// What the ranking of observed read counts looks like.
///
/// `Ranking` lists exactly the symbols with nonzero counts, weakest (lowest
/// count) first, and exists only when all nonzero counts are distinct; any
/// exact tie collapses into the single `Tie` class.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Outcome {
    Ranking(Vec<u8>),
    Tie,
}

impl Outcome {
    /// Canonical text: symbols as a 1-based permutation string, or "tie".
    pub fn label(&self, q: u8) -> String {
        match self {
            Outcome::Tie => "tie".to_string(),
            Outcome::Ranking(symbols) => {
                PartialPermutation::new(symbols.clone(), q)
                    .map(|p| p.to_string())
                    .unwrap_or_else(|_| "?".to_string())
            }
        }
    }

    /// Text with caller-supplied symbol names joined by " < ".
    pub fn label_with(&self, names: &dyn Fn(u8) -> String) -> String {
        match self {
            Outcome::Tie => "tie".to_string(),
            Outcome::Ranking(symbols) => symbols
                .iter()
                .map(|&s| names(s))
                .collect::<Vec<_>>()
                .join(" < "),
        }
    }
}

/// Sorts the nonzero counts into an [`Outcome`].
pub fn classify_counts(counts: &[u32]) -> Outcome {
    let mut present: Vec<(u32, u8)> = counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(s, &c)| (c, s as u8))
        .collect();
    present.sort();
    if present.windows(2).any(|w| w[0].0 == w[1].0) {
        Outcome::Tie
    } else {
        Outcome::Ranking(present.into_iter().map(|(_, s)| s).collect())
    }
}

/// Exact probability map over ranking outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDistribution<W> {
    map: BTreeMap<Outcome, W>,
    q: u8,
    reads: u32,
}

impl<W: Weight> OutcomeDistribution<W> {
    pub fn probability(&self, outcome: &Outcome) -> W {
        self.map.get(outcome).cloned().unwrap_or_else(W::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Outcome, &W)> {
        self.map.iter()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn q(&self) -> u8 {
        self.q
    }

    pub fn reads(&self) -> u32 {
        self.reads
    }

    pub fn total(&self) -> W {
        self.map
            .values()
            .fold(W::zero(), |acc, p| acc + p.clone())
    }

    pub fn tie_probability(&self) -> W {
        self.probability(&Outcome::Tie)
    }

    /// Outcomes by decreasing probability (ties broken by outcome order).
    pub fn sorted_desc(&self) -> Vec<(Outcome, W)> {
        let mut rows: Vec<(Outcome, W)> =
            self.map.iter().map(|(o, p)| (o.clone(), p.clone())).collect();
        rows.sort_by(|a, b| {
            b.1.partial_cmp(&a.1)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then_with(|| a.0.cmp(&b.0))
        });
        rows
    }

    /// The most likely outcome.
    pub fn modal(&self) -> Option<Outcome> {
        self.sorted_desc().into_iter().next().map(|(o, _)| o)
    }
}

pub const DEFAULT_ENUMERATION_BUDGET: u128 = 5_000_000;

/// Exact outcome distribution by enumerating every multinomial count vector
/// of `reads` over the design's support and classifying its ranking.
pub fn exact_outcomes<W: Weight>(
    design: &CompositeDesign,
    budget: u128,
) -> Result<OutcomeDistribution<W>, ChannelError> {
    let probs: Vec<W> = design.distribution();
    let support: Vec<usize> = (0..probs.len())
        .filter(|&s| probs[s] > W::zero())
        .collect();
    let n = design.reads();
    let needed = crate::perm::binomial(n as u64 + support.len() as u64 - 1, support.len() as u64 - 1);
    if needed > budget {
        return Err(ChannelError::Budget { needed, budget });
    }

    let mut map: BTreeMap<Outcome, W> = BTreeMap::new();
    let mut counts = vec![0u32; support.len()];
    let mut full_counts = vec![0u32; probs.len()];
    enumerate_counts(
        &mut counts,
        0,
        n,
        &mut |counts| {
            let p = multinomial_probability::<W>(n, counts, &support, &probs);
            for (&s, &c) in support.iter().zip(counts.iter()) {
                full_counts[s] = c;
            }
            let outcome = classify_counts(&full_counts);
            for &s in &support {
                full_counts[s] = 0;
            }
            let slot = map.entry(outcome).or_insert_with(W::zero);
            *slot = slot.clone() + p;
        },
    );
    Ok(OutcomeDistribution {
        map,
        q: design.perm().q(),
        reads: n,
    })
}

fn enumerate_counts(
    counts: &mut Vec<u32>,
    index: usize,
    remaining: u32,
    visit: &mut impl FnMut(&[u32]),
) {
    if index == counts.len() - 1 {
        counts[index] = remaining;
        visit(counts);
        return;
    }
    for c in 0..=remaining {
        counts[index] = c;
        enumerate_counts(counts, index + 1, remaining - c, visit);
    }
}

/// `multinomial(n; counts) * prod p_i^counts_i`, computed in `W` so that the
/// coefficient never overflows a machine integer.
fn multinomial_probability<W: Weight>(
    n: u32,
    counts: &[u32],
    support: &[usize],
    probs: &[W],
) -> W {
    let mut value = W::one();
    let mut remaining = n as u64;
    for (&s, &c) in support.iter().zip(counts.iter()) {
        // C(remaining, c) as a running product of ratios
        for j in 1..=c as u64 {
            value = value * W::ratio(remaining - c as u64 + j, j);
        }
        remaining -= c as u64;
        for _ in 0..c {
            value = value * probs[s].clone();
        }
    }
    value
}

/// One seeded multinomial draw, classified like [`exact_outcomes`].
pub fn sample_outcome(design: &CompositeDesign, rng: &mut impl Rng) -> Outcome {
    let probs: Vec<f64> = design.distribution();
    let mut counts = vec![0u32; probs.len()];
    for _ in 0..design.reads() {
        let mut x: f64 = rng.random();
        let mut drawn = probs.len() - 1;
        for (s, p) in probs.iter().enumerate() {
            if x < *p {
                drawn = s;
                break;
            }
            x -= p;
        }
        counts[drawn] += 1;
    }
    classify_counts(&counts)
}

/// Empirical outcome frequencies over `trials` seeded draws.
pub fn empirical_outcomes(
    design: &CompositeDesign,
    trials: u64,
    seed: u64,
) -> BTreeMap<Outcome, u64> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut freq: BTreeMap<Outcome, u64> = BTreeMap::new();
    for _ in 0..trials {
        *freq.entry(sample_outcome(design, &mut rng)).or_insert(0) += 1;
    }
    freq
}

/// How one transmitted coordinate came out of the channel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChannelEvent {
    Clean,
    Deletions(usize),
    Insertions(usize),
    /// Swap, tie, or any ranking that is not a pure tail event.
    OutOfModel,
}

/// Reads an observed outcome as a partial permutation relative to what was
/// sent: a suffix of the sent word is a tail deletion, an extension is a tail
/// insertion, anything else is out of model.
pub fn interpret_outcome(
    sent: &PartialPermutation,
    outcome: &Outcome,
) -> (Option<PartialPermutation>, ChannelEvent) {
    match outcome {
        Outcome::Tie => (None, ChannelEvent::OutOfModel),
        Outcome::Ranking(symbols) => {
            let word = match PartialPermutation::new(symbols.clone(), sent.q()) {
                Ok(w) => w,
                Err(_) => return (None, ChannelEvent::OutOfModel),
            };
            if &word == sent {
                (Some(word), ChannelEvent::Clean)
            } else if word.is_suffix_of(sent) {
                let k = sent.len() - word.len();
                (Some(word), ChannelEvent::Deletions(k))
            } else if sent.is_suffix_of(&word) {
                let k = word.len() - sent.len();
                (Some(word), ChannelEvent::Insertions(k))
            } else {
                (None, ChannelEvent::OutOfModel)
            }
        }
    }
}

/// Aggregate statistics of seeded end-to-end encode/transmit/decode trials.
///
/// A trial is *in model* when every coordinate came out clean or as at most t
/// tail deletions, with at most e coordinates affected; on that subset the
/// decoder must never fail. Swaps, ties, and insertions are counted as out of
/// model (a deletion-correcting code makes no promise there), echoing the
/// swap row of the read-outcome table.
#[derive(Debug, Clone, serde::Serialize)]
pub struct TrialReport {
    pub trials: u64,
    pub seed: u64,
    pub successes: u64,
    pub failures: u64,
    /// Failures where no decoded word was produced (decoder error or an
    /// uninterpretable outcome), as opposed to a wrong word.
    pub decode_errors: u64,
    pub in_model: u64,
    pub in_model_successes: u64,
    /// In-model trials where at least one actual deletion happened.
    pub in_model_with_deletions: u64,
    pub out_of_model: u64,
    pub success_rate: f64,
    pub wilson95: (f64, f64),
}

struct TrialTally {
    successes: u64,
    failures: u64,
    decode_errors: u64,
    in_model: u64,
    in_model_successes: u64,
    in_model_with_deletions: u64,
    out_of_model: u64,
}

impl TrialTally {
    fn new() -> Self {
        TrialTally {
            successes: 0,
            failures: 0,
            decode_errors: 0,
            in_model: 0,
            in_model_successes: 0,
            in_model_with_deletions: 0,
            out_of_model: 0,
        }
    }

    fn record(&mut self, in_model: bool, deletions: bool, decoded_ok: Option<bool>) {
        match decoded_ok {
            Some(true) => self.successes += 1,
            Some(false) => self.failures += 1,
            None => {
                self.failures += 1;
                self.decode_errors += 1;
            }
        }
        if in_model {
            self.in_model += 1;
            if decoded_ok == Some(true) {
                self.in_model_successes += 1;
            }
            if deletions {
                self.in_model_with_deletions += 1;
            }
        } else {
            self.out_of_model += 1;
        }
    }

    fn report(self, trials: u64, seed: u64) -> TrialReport {
        TrialReport {
            trials,
            seed,
            success_rate: if trials == 0 {
                0.0
            } else {
                self.successes as f64 / trials as f64
            },
            wilson95: wilson95(self.successes, trials),
            successes: self.successes,
            failures: self.failures,
            decode_errors: self.decode_errors,
            in_model: self.in_model,
            in_model_successes: self.in_model_successes,
            in_model_with_deletions: self.in_model_with_deletions,
            out_of_model: self.out_of_model,
        }
    }
}

/// What happens to each transmitted coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReadProcess {
    /// The infinite-read-depth limit: the observed ranking is the sent one.
    Noiseless,
    /// `reads` multinomial draws from the composite design.
    Multinomial {
        reads: u32,
        eps: Fraction,
        rule: WeightRule,
    },
}

fn transmit(
    sent: &PartialPermutation,
    process: ReadProcess,
    rng: &mut ChaCha12Rng,
) -> (Option<PartialPermutation>, ChannelEvent) {
    match process {
        ReadProcess::Noiseless => (Some(sent.clone()), ChannelEvent::Clean),
        ReadProcess::Multinomial { reads, eps, rule } => {
            let design =
                CompositeDesign::with_rule(sent.clone(), reads, coordinate_error(sent, eps), rule)
                    .expect("per-coordinate design is valid");
            let outcome = sample_outcome(&design, rng);
            interpret_outcome(sent, &outcome)
        }
    }
}

fn wilson95(successes: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959963984540054_f64;
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let center = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
    let half = (z / (1.0 + z2 / n)) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Error spec for one transmitted coordinate: the requested uniform-unused
/// mass, dropped to none when the word is full (no symbol can be spurious).
fn coordinate_error(word: &PartialPermutation, eps: Fraction) -> ErrorSpec {
    if eps.is_zero() || word.is_full() {
        ErrorSpec::None
    } else {
        ErrorSpec::UniformUnused { eps }
    }
}

/// Seeded end-to-end trials for a single-coordinate correcting code: pick a
/// codeword uniformly, push it through the composite read channel, decode.
pub fn end_to_end_single(
    decoder: &crate::construct::CorDecoder,
    process: ReadProcess,
    trials: u64,
    seed: u64,
) -> TrialReport {
    let codewords: Vec<PartialPermutation> = decoder.code().iter().cloned().collect();
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut tally = TrialTally::new();
    for _ in 0..trials {
        let sent = &codewords[rng.random_range(0..codewords.len())];
        let (received, event) = transmit(sent, process, &mut rng);
        let deletions = matches!(event, ChannelEvent::Deletions(_));
        let in_model = matches!(event, ChannelEvent::Clean)
            || matches!(event, ChannelEvent::Deletions(k) if k <= decoder.t());
        let decoded_ok = received
            .as_ref()
            .map(|word| decoder.decode(word).ok().as_ref() == Some(sent));
        tally.record(in_model, deletions, decoded_ok);
    }
    tally.report(trials, seed)
}

/// Seeded end-to-end trials for a (t,e) tensor code: encode a random message,
/// push every coordinate through the channel, decode the vector.
pub fn end_to_end_ttpc(
    code: &crate::tensor::TailTensorCorrecting,
    process: ReadProcess,
    trials: u64,
    seed: u64,
) -> TrialReport {
    let space = code.message_space().expect("message space fits in u128");
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut tally = TrialTally::new();
    for _ in 0..trials {
        let message = rng.random_range(0..space);
        let sent = code.encode(message).expect("message within the space");
        let mut received = Vec::with_capacity(code.n());
        let mut affected = 0usize;
        let mut in_model = true;
        for word in sent.entries() {
            let (coordinate, event) = transmit(word, process, &mut rng);
            match event {
                ChannelEvent::Clean => {}
                ChannelEvent::Deletions(k) if k <= code.t() => affected += 1,
                _ => in_model = false,
            }
            received.push(coordinate);
        }
        let in_model = in_model && affected <= code.e();
        let decoded_ok = received
            .into_iter()
            .collect::<Option<Vec<PartialPermutation>>>()
            .map(|entries| {
                let vector = crate::tensor::PermVector::new(entries)
                    .expect("coordinates share the alphabet");
                code.decode(&vector).ok() == Some(sent.clone())
            });
        tally.record(in_model, in_model && affected > 0, decoded_ok);
    }
    tally.report(trials, seed)
}
