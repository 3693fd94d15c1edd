//! Codes over length-n vectors of partial permutations: partial partitions,
//! the indicator map, the tail tensor construction (inner partition + outer
//! block code), encoders/decoders for the deletion-correcting and
//! deletion-detecting instantiations, and the derived size bounds.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use thiserror::Error;

use crate::check::TailCode;
use crate::construct::{base_size, base_strata_lengths, build_cor_family_member, cor_size};
use crate::outer::{outer_code_factory, OuterCode, OuterError, OuterFamily};
use crate::perm::{enumerate_stratum, factorial, PartialPermutation, PermError};
use crate::tail::{delete_tail, insertion_sphere_element, insertion_sphere_index};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TensorError {
    #[error("vector must have at least one coordinate")]
    EmptyVector,
    #[error("coordinate {index} has alphabet size {found}, vector expects {expected}")]
    QMismatch {
        index: usize,
        found: u8,
        expected: u8,
    },
    #[error("partition classes overlap on {word}")]
    ClassOverlap { word: String },
    #[error("partition has {classes} classes but the outer code alphabet is {ell}")]
    EllMismatch { classes: usize, ell: u8 },
    #[error("message {message} out of range for message space {space}")]
    MessageOutOfRange { message: u128, space: u128 },
    #[error("message space overflows 128 bits")]
    MessageSpaceOverflow,
    #[error("vector length {found} does not match code length {expected}")]
    LengthMismatch { found: usize, expected: usize },
    #[error("pattern length {found} does not match vector length {expected}")]
    PatternLength { found: usize, expected: usize },
    #[error("coordinate {index} ({word}) is not decodable against the inner family")]
    CoordinateUndecodable { index: usize, word: String },
    #[error("vector is not an encoder image: {0}")]
    NotInImage(String),
    #[error("family needs {needed} classes, more than the 255 the label alphabet allows")]
    TooManyClasses { needed: u128 },
    #[error(transparent)]
    Outer(#[from] OuterError),
    #[error(transparent)]
    Construct(#[from] crate::construct::ConstructError),
    #[error(transparent)]
    Perm(#[from] PermError),
}

/// A fixed-length vector of partial permutations over a common alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PermVector {
    entries: Vec<PartialPermutation>,
}

impl PermVector {
    pub fn new(entries: Vec<PartialPermutation>) -> Result<Self, TensorError> {
        let q = match entries.first() {
            Some(first) => first.q(),
            None => return Err(TensorError::EmptyVector),
        };
        for (index, entry) in entries.iter().enumerate() {
            if entry.q() != q {
                return Err(TensorError::QMismatch {
                    index,
                    found: entry.q(),
                    expected: q,
                });
            }
        }
        Ok(Self { entries })
    }

    pub fn parse(text: &str, q: u8) -> Result<Self, TensorError> {
        let entries = text
            .split(',')
            .map(|part| PartialPermutation::parse(part.trim(), q))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(entries)
    }

    pub fn q(&self) -> u8 {
        self.entries[0].q()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false // length is always >= 1
    }

    pub fn entries(&self) -> &[PartialPermutation] {
        &self.entries
    }
}

impl fmt::Display for PermVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, entry) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{entry}")?;
        }
        Ok(())
    }
}

/// Applies `pattern[i]` tail deletions to coordinate i.
pub fn apply_vector_deletions(
    u: &PermVector,
    pattern: &[usize],
) -> Result<PermVector, TensorError> {
    if pattern.len() != u.len() {
        return Err(TensorError::PatternLength {
            found: pattern.len(),
            expected: u.len(),
        });
    }
    let entries = u
        .entries()
        .iter()
        .zip(pattern)
        .map(|(entry, &k)| delete_tail(entry, k))
        .collect();
    PermVector::new(entries)
}

/// An ordered family of pairwise disjoint codes over the same alphabet, the
/// inner layer of the tensor construction.
#[derive(Debug, Clone)]
pub struct PartialPartition {
    q: u8,
    classes: Vec<Vec<PartialPermutation>>,
    lookup: HashMap<PartialPermutation, usize>,
}

impl PartialPartition {
    pub fn new(classes: Vec<TailCode>) -> Result<Self, TensorError> {
        let q = match classes.first() {
            Some(first) => first.q(),
            None => return Err(TensorError::EmptyVector),
        };
        let mut lookup = HashMap::new();
        let mut sorted_classes = Vec::with_capacity(classes.len());
        for (index, class) in classes.iter().enumerate() {
            if class.q() != q {
                return Err(TensorError::QMismatch {
                    index,
                    found: class.q(),
                    expected: q,
                });
            }
            let members: Vec<PartialPermutation> = class.iter().cloned().collect();
            for member in &members {
                if lookup.insert(member.clone(), index).is_some() {
                    return Err(TensorError::ClassOverlap {
                        word: member.to_string(),
                    });
                }
            }
            sorted_classes.push(members); // TailCode iterates in lexicographic order
        }
        Ok(Self {
            q,
            classes: sorted_classes,
            lookup,
        })
    }

    pub fn q(&self) -> u8 {
        self.q
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// Members of class `i` in lexicographic order.
    pub fn class(&self, i: usize) -> &[PartialPermutation] {
        &self.classes[i]
    }

    pub fn class_of(&self, word: &PartialPermutation) -> Option<usize> {
        self.lookup.get(word).copied()
    }

    pub fn min_class_size(&self) -> usize {
        self.classes.iter().map(|c| c.len()).min().unwrap_or(0)
    }
}

/// Per-coordinate class labels, `None` for words in no class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Indicator(pub Vec<Option<u8>>);

impl Indicator {
    pub fn known(&self) -> Option<Vec<u8>> {
        self.0.iter().copied().collect()
    }
}

impl fmt::Display for Indicator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, label) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            match label {
                Some(j) => write!(f, "{j}")?,
                None => write!(f, "?")?,
            }
        }
        write!(f, ")")
    }
}

/// The indicator vector of `c` under the partition.
pub fn lambda_map(c: &PermVector, partition: &PartialPartition) -> Indicator {
    Indicator(
        c.entries()
            .iter()
            .map(|entry| partition.class_of(entry).map(|j| j as u8))
            .collect(),
    )
}

/// The tensor construction: a vector is a codeword exactly when its indicator
/// vector (no unknowns allowed) lies in the outer code.
#[derive(Debug, Clone)]
pub struct TensorCode {
    partition: PartialPartition,
    outer: OuterCode,
    n: usize,
}

impl TensorCode {
    pub fn new(partition: PartialPartition, outer: OuterCode) -> Result<Self, TensorError> {
        if partition.class_count() != outer.ell() as usize {
            return Err(TensorError::EllMismatch {
                classes: partition.class_count(),
                ell: outer.ell(),
            });
        }
        let n = outer.n();
        Ok(Self {
            partition,
            outer,
            n,
        })
    }

    pub fn partition(&self) -> &PartialPartition {
        &self.partition
    }

    pub fn outer(&self) -> &OuterCode {
        &self.outer
    }

    pub fn q(&self) -> u8 {
        self.partition.q()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn membership(&self, c: &PermVector) -> bool {
        if c.len() != self.n || c.q() != self.q() {
            return false;
        }
        match lambda_map(c, &self.partition).known() {
            Some(labels) => self.outer.contains(&labels),
            None => false,
        }
    }

    /// `A^n * |outer|` with `A` the minimum class size: the number of
    /// distinct messages the encoder can carry.
    pub fn message_space(&self) -> Result<u128, TensorError> {
        let a = self.partition.min_class_size() as u128;
        let per_coordinate = a
            .checked_pow(self.n as u32)
            .ok_or(TensorError::MessageSpaceOverflow)?;
        per_coordinate
            .checked_mul(self.outer.size())
            .ok_or(TensorError::MessageSpaceOverflow)
    }

    /// Deterministic injective map: the message splits into an outer-codeword
    /// index and one within-class rank per coordinate.
    pub fn encode(&self, message: u128) -> Result<PermVector, TensorError> {
        let space = self.message_space()?;
        if message >= space {
            return Err(TensorError::MessageOutOfRange { message, space });
        }
        let a = self.partition.min_class_size() as u128;
        let per_coordinate = a.pow(self.n as u32);
        let outer_index = message / per_coordinate;
        let mut ranks = message % per_coordinate;
        let labels = self
            .outer
            .codeword(outer_index)
            .expect("index bounded by the outer size");
        let mut entries = Vec::with_capacity(self.n);
        for &label in &labels {
            let rank = (ranks % a) as usize;
            ranks /= a;
            entries.push(self.partition.class(label as usize)[rank].clone());
        }
        PermVector::new(entries)
    }

    /// Inverse of [`TensorCode::encode`] on noiseless codewords.
    pub fn message_of(&self, codeword: &PermVector) -> Result<u128, TensorError> {
        let labels = lambda_map(codeword, &self.partition)
            .known()
            .ok_or_else(|| TensorError::NotInImage("a coordinate is in no class".to_string()))?;
        let outer_index = self
            .outer
            .index_of(&labels)
            .ok_or_else(|| TensorError::NotInImage("indicator not in the outer code".to_string()))?;
        let a = self.partition.min_class_size() as u128;
        let mut ranks = 0u128;
        for (entry, &label) in codeword.entries().iter().zip(&labels).rev() {
            let class = self.partition.class(label as usize);
            let rank = class
                .binary_search(entry)
                .map_err(|_| TensorError::NotInImage("entry missing from its class".to_string()))?;
            if rank as u128 >= a {
                return Err(TensorError::NotInImage(
                    "entry rank beyond the message alphabet".to_string(),
                ));
            }
            ranks = ranks * a + rank as u128;
        }
        Ok(outer_index * a.pow(self.n as u32) + ranks)
    }
}

/// The (t,e)-tail-deletion-correcting tensor code: inner partition made of
/// the t! sphere-indexed correcting codes, outer code of distance 2e+1 over
/// the alphabet {0..t!-1}.
#[derive(Debug, Clone)]
pub struct TailTensorCorrecting {
    code: TensorCode,
    q: u8,
    t: usize,
    e: usize,
    codeword_lengths: Vec<usize>,
}

impl TailTensorCorrecting {
    pub fn new(
        q: u8,
        t: usize,
        n: usize,
        e: usize,
        family: OuterFamily,
    ) -> Result<Self, TensorError> {
        let ell = factorial(t as u64);
        if ell > 255 {
            return Err(TensorError::TooManyClasses { needed: ell });
        }
        let classes: Vec<TailCode> = (1..=ell)
            .map(|j| build_cor_family_member(q, t, j))
            .collect::<Result<_, _>>()?;
        let partition = PartialPartition::new(classes)?;
        let outer = outer_code_factory(ell as u8, n, 2 * e + 1, family)?;
        let code = TensorCode::new(partition, outer)?;
        let codeword_lengths: Vec<usize> =
            base_strata_lengths(q, t).iter().map(|m| m + t).collect();
        // the received-length intervals [L-t, L] must tile without overlap
        debug_assert!(codeword_lengths
            .windows(2)
            .all(|w| w[0] - w[1] == t + 1));
        Ok(Self {
            code,
            q,
            t,
            e,
            codeword_lengths,
        })
    }

    pub fn tensor(&self) -> &TensorCode {
        &self.code
    }

    pub fn q(&self) -> u8 {
        self.q
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn e(&self) -> usize {
        self.e
    }

    pub fn n(&self) -> usize {
        self.code.n()
    }

    pub fn membership(&self, c: &PermVector) -> bool {
        self.code.membership(c)
    }

    pub fn message_space(&self) -> Result<u128, TensorError> {
        self.code.message_space()
    }

    pub fn encode(&self, message: u128) -> Result<PermVector, TensorError> {
        self.code.encode(message)
    }

    pub fn message_of(&self, codeword: &PermVector) -> Result<u128, TensorError> {
        self.code.message_of(codeword)
    }

    fn stratum_of_length(&self, len: usize) -> Option<(usize, usize)> {
        self.codeword_lengths
            .iter()
            .find(|&&full| len <= full && full - len <= self.t)
            .map(|&full| (full, full - len))
    }

    /// Corrects any (t,e)-tail-deletion pattern. Per coordinate the received
    /// length fixes the stratum and deletion count; intact coordinates read
    /// their class label off the prefix, deleted ones become erasures for the
    /// outer code, and erased prefixes are rebuilt as sphere elements.
    pub fn decode(&self, received: &PermVector) -> Result<PermVector, TensorError> {
        if received.len() != self.n() {
            return Err(TensorError::LengthMismatch {
                found: received.len(),
                expected: self.n(),
            });
        }
        let ell = self.code.partition().class_count() as u128;
        let mut labels: Vec<Option<u8>> = Vec::with_capacity(self.n());
        let mut strata: Vec<(usize, usize)> = Vec::with_capacity(self.n());
        for (index, word) in received.entries().iter().enumerate() {
            let undecodable = || TensorError::CoordinateUndecodable {
                index,
                word: word.to_string(),
            };
            let (full, deletions) = self.stratum_of_length(word.len()).ok_or_else(undecodable)?;
            strata.push((full, deletions));
            if deletions == 0 {
                let sphere_index = insertion_sphere_index(word, self.t).ok_or_else(undecodable)?;
                if sphere_index > ell {
                    // the word is full length but belongs to none of the t! classes
                    return Err(undecodable());
                }
                labels.push(Some((sphere_index - 1) as u8));
            } else {
                labels.push(None);
            }
        }
        let labels = self.code.outer().decode_erasures(&labels)?;
        let mut entries = Vec::with_capacity(self.n());
        for (index, (word, &label)) in received.entries().iter().zip(&labels).enumerate() {
            let (full, deletions) = strata[index];
            let base_len = full - self.t;
            let base = delete_tail(word, word.len() - base_len);
            let rebuilt = insertion_sphere_element(&base, self.t, label as u128 + 1)
                .ok_or_else(|| TensorError::CoordinateUndecodable {
                    index,
                    word: word.to_string(),
                })?;
            if delete_tail(&rebuilt, deletions) != *word {
                return Err(TensorError::CoordinateUndecodable {
                    index,
                    word: word.to_string(),
                });
            }
            entries.push(rebuilt);
        }
        PermVector::new(entries)
    }
}

/// The (t,e)-tail-deletion-detecting tensor code: inner partition made of the
/// t+1 shifted detecting codes (a full partition of the universe), outer code
/// of distance e+1 over the alphabet {0..t}.
///
/// Any deletion count k in 1..=t moves a word's length class by k mod (t+1),
/// so every actually-deleted coordinate changes its label; outer distance
/// e+1 then keeps the damaged indicator vector outside the outer code.
#[derive(Debug, Clone)]
pub struct TailTensorDetecting {
    code: TensorCode,
    q: u8,
    t: usize,
    e: usize,
}

impl TailTensorDetecting {
    pub fn new(
        q: u8,
        t: usize,
        n: usize,
        e: usize,
        family: OuterFamily,
    ) -> Result<Self, TensorError> {
        if t < 1 || t >= q as usize {
            return Err(TensorError::Construct(
                crate::construct::ConstructError::ParamOutOfRange { q, t },
            ));
        }
        if t + 1 > 255 {
            return Err(TensorError::TooManyClasses {
                needed: t as u128 + 1,
            });
        }
        let classes: Vec<TailCode> = (0..=t)
            .map(|j| detecting_class(q, t, j))
            .collect::<Result<_, _>>()?;
        let partition = PartialPartition::new(classes)?;
        let outer = outer_code_factory((t + 1) as u8, n, e + 1, family)?;
        let code = TensorCode::new(partition, outer)?;
        Ok(Self { code, q, t, e })
    }

    pub fn tensor(&self) -> &TensorCode {
        &self.code
    }

    pub fn q(&self) -> u8 {
        self.q
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn e(&self) -> usize {
        self.e
    }

    pub fn n(&self) -> usize {
        self.code.n()
    }

    pub fn membership(&self, c: &PermVector) -> bool {
        self.code.membership(c)
    }

    pub fn encode(&self, message: u128) -> Result<PermVector, TensorError> {
        self.code.encode(message)
    }

    pub fn message_space(&self) -> Result<u128, TensorError> {
        self.code.message_space()
    }

    /// Accepts exactly the codewords; any within-design deletion pattern with
    /// at least one actual deletion lands outside.
    pub fn detect(&self, received: &PermVector) -> bool {
        self.membership(received)
    }
}

/// Class j of the detecting family: strata of lengths `q - j - i(t+1)`.
fn detecting_class(q: u8, t: usize, j: usize) -> Result<TailCode, TensorError> {
    let step = t + 1;
    let mut members = Vec::new();
    let mut len = q as usize - j;
    while len >= 1 {
        members.extend(enumerate_stratum(q, len)?);
        if len < step {
            break;
        }
        len -= step;
    }
    Ok(TailCode::new(q, members).expect("strata share the alphabet"))
}

/// Numeric lower bounds on the size of (t,e) tensor codes, with the achieved
/// outer-code sizes spelled out. Values are decimal strings (they outgrow
/// u128 quickly).
#[derive(Debug, Clone, serde::Serialize)]
pub struct SizeBoundReport {
    pub q: u8,
    pub t: usize,
    pub n: usize,
    pub e: usize,
    /// |optimal single-coordinate correcting code|^n * outer size, the stated
    /// correcting bound.
    pub correcting_bound: Option<String>,
    /// (min inner class size)^n * outer size: what the construction itself
    /// guarantees. Differs from the stated bound only when q is not divisible
    /// by t+1.
    pub correcting_construction_bound: Option<String>,
    pub correcting_outer_size: Option<String>,
    pub correcting_outer_distance: usize,
    /// Detecting bound with the t+1 label alphabet the class family actually
    /// uses.
    pub detecting_bound: Option<String>,
    pub detecting_outer_size: Option<String>,
    /// Detecting bound as printed with a t-letter alphabet, for comparison.
    pub detecting_bound_alphabet_t: Option<String>,
    pub detecting_outer_distance: usize,
    pub notes: Vec<String>,
}

/// Best outer-code size this crate can realize for (ell, n, d); d <= 1 means
/// the whole space.
fn achieved_outer_size(ell: u128, n: usize, d: usize) -> Option<BigUint> {
    if ell == 0 {
        return None;
    }
    if d <= 1 {
        return Some(BigUint::from(ell).pow(n as u32));
    }
    if ell > 255 {
        return None;
    }
    outer_code_factory(ell as u8, n, d, OuterFamily::Auto)
        .ok()
        .map(|code| BigUint::from(code.size()))
}

pub fn ttpc_size_bounds(q: u8, t: usize, n: usize, e: usize) -> Result<SizeBoundReport, TensorError> {
    if t < 1 || t >= q as usize {
        return Err(TensorError::Construct(
            crate::construct::ConstructError::ParamOutOfRange { q, t },
        ));
    }
    let mut notes = Vec::new();
    let cor_d = 2 * e + 1;
    let det_d = e;
    let ell_cor = factorial(t as u64);

    let cor_outer = achieved_outer_size(ell_cor, n, cor_d);
    let correcting_bound = cor_outer
        .as_ref()
        .map(|outer| (BigUint::from(cor_size(q, t)).pow(n as u32) * outer).to_string());
    let correcting_construction_bound = cor_outer
        .as_ref()
        .map(|outer| (BigUint::from(base_size(q, t)).pow(n as u32) * outer).to_string());
    if !(q as usize).is_multiple_of(t + 1) {
        notes.push(
            "q not divisible by t+1: the partition classes are smaller than the optimal \
             single-coordinate code, so the construction bound is the smaller one"
                .to_string(),
        );
    }
    if ell_cor == 1 {
        notes.push("t! = 1: a single inner class, the correcting tensor code is degenerate".to_string());
    }

    let det_outer_proof = achieved_outer_size(t as u128 + 1, n, det_d);
    let det_outer_statement = achieved_outer_size(t as u128, n, det_d);
    let inner = BigUint::from(base_size(q, t)).pow(n as u32);
    let detecting_bound = det_outer_proof.as_ref().map(|o| (inner.clone() * o).to_string());
    let detecting_bound_alphabet_t =
        det_outer_statement.as_ref().map(|o| (inner.clone() * o).to_string());
    notes.push(
        "achieved outer sizes are lower bounds on the best block codes; a better outer code \
         lifts the bound directly"
            .to_string(),
    );

    Ok(SizeBoundReport {
        q,
        t,
        n,
        e,
        correcting_bound,
        correcting_construction_bound,
        correcting_outer_size: cor_outer.map(|v| v.to_string()),
        correcting_outer_distance: cor_d,
        detecting_bound,
        detecting_outer_size: det_outer_proof.map(|v| v.to_string()),
        detecting_bound_alphabet_t,
        detecting_outer_distance: det_d,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::check::TailCode;
    use crate::tail::deletion_ball;

    fn v(text: &str, q: u8) -> PermVector {
        PermVector::parse(text, q).unwrap()
    }

    fn example_partition() -> PartialPartition {
        let a0 = TailCode::from_texts(4, &["123", "21"]).unwrap();
        let a1 = TailCode::from_texts(4, &["1", "231", "24", "2"]).unwrap();
        PartialPartition::new(vec![a0, a1]).unwrap()
    }

    #[test]
    fn vector_deletions_fixture() {
        let u = v("1345,135", 5);
        let got = apply_vector_deletions(&u, &[2, 0]).unwrap();
        assert_eq!(got, v("45,135", 5));

        assert_eq!(apply_vector_deletions(&u, &[0, 0]).unwrap(), u);
        let saturated = apply_vector_deletions(&v("41", 4), &[3]).unwrap();
        assert_eq!(saturated, v("1", 4));
        assert!(apply_vector_deletions(&u, &[1]).is_err());
    }

    #[test]
    fn lambda_fixtures() {
        let partition = example_partition();
        let cases = [
            ("123,123,3", "(0,0,?)"),
            ("123,21,21", "(0,0,0)"),
            ("321,24,21", "(?,1,0)"),
        ];
        for (vector, want) in cases {
            let got = lambda_map(&v(vector, 4), &partition);
            assert_eq!(got.to_string(), want, "vector {vector}");
        }
    }

    #[test]
    fn partition_rejects_overlap() {
        let a0 = TailCode::from_texts(4, &["123", "21"]).unwrap();
        let a1 = TailCode::from_texts(4, &["21", "24"]).unwrap();
        assert!(matches!(
            PartialPartition::new(vec![a0, a1]),
            Err(TensorError::ClassOverlap { .. })
        ));
    }

    #[test]
    fn membership_with_repetition_outer() {
        let partition = example_partition();
        let outer = outer_code_factory(2, 2, 2, OuterFamily::Repetition).unwrap();
        let code = TensorCode::new(partition, outer).unwrap();
        assert!(code.membership(&v("123,21", 4)));
        assert!(code.membership(&v("1,24", 4)));
        assert!(!code.membership(&v("123,24", 4))); // labels (0,1) not in {00,11}
        assert!(!code.membership(&v("123,3", 4))); // unknown label
    }

    #[test]
    fn encode_decode_roundtrip_noiseless() {
        let code = TailTensorCorrecting::new(6, 2, 4, 1, OuterFamily::Auto).unwrap();
        let space = code.message_space().unwrap();
        assert_eq!(space, 366u128.pow(4) * 2); // lexicode(2,4,3) has 2 words
        for message in [0u128, 1, 366, space - 1, space / 2] {
            let word = code.encode(message).unwrap();
            assert!(code.membership(&word));
            assert_eq!(code.message_of(&word).unwrap(), message);
            assert_eq!(code.decode(&word).unwrap(), word);
        }
        assert!(code.encode(space).is_err());
    }

    #[test]
    fn message_zero_uses_first_elements() {
        let code = TailTensorCorrecting::new(4, 1, 3, 0, OuterFamily::Auto).unwrap();
        let word = code.encode(0).unwrap();
        let first_class = code.tensor().partition().class(0);
        let labels = code.tensor().outer().codeword(0).unwrap();
        for (entry, &label) in word.entries().iter().zip(&labels) {
            assert_eq!(label, 0);
            assert_eq!(entry, &first_class[0]);
        }
    }

    #[test]
    fn correcting_roundtrip_under_all_patterns() {
        // q=6, t=2, n=4, e=1: every \le 2-deletion pattern at one coordinate
        let code = TailTensorCorrecting::new(6, 2, 4, 1, OuterFamily::Auto).unwrap();
        let space = code.message_space().unwrap();
        let step = (space / 57).max(1);
        let mut message = 0u128;
        while message < space {
            let sent = code.encode(message).unwrap();
            for coordinate in 0..code.n() {
                for k in 0..=code.t() {
                    let mut pattern = vec![0usize; code.n()];
                    pattern[coordinate] = k;
                    let received = apply_vector_deletions(&sent, &pattern).unwrap();
                    let decoded = code.decode(&received).unwrap();
                    assert_eq!(decoded, sent, "message {message} pattern {pattern:?}");
                }
            }
            message += step;
        }
    }

    #[test]
    fn correcting_flags_excess_erasures() {
        let code = TailTensorCorrecting::new(6, 2, 4, 1, OuterFamily::Auto).unwrap();
        let sent = code.encode(12345).unwrap();
        // two deleted coordinates exceed e=1 for a distance-3 outer code with
        // 2 words only if the erasure fill is ambiguous; with 2 codewords at
        // distance 3, two erasures can still be unique, so force three
        let received = apply_vector_deletions(&sent, &[1, 1, 1, 0]).unwrap();
        match code.decode(&received) {
            Ok(decoded) => assert_eq!(decoded, sent),
            Err(TensorError::Outer(_)) => {}
            Err(other) => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn overweight_patterns_never_decode_silently_wrong() {
        // deletions only erase labels, never corrupt them, so even patterns
        // beyond (t,e) must yield the sent word or an error, never another
        // codeword
        use rand::Rng;
        use rand::SeedableRng;
        let code = TailTensorCorrecting::new(6, 2, 4, 1, OuterFamily::Auto).unwrap();
        let space = code.message_space().unwrap();
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(0xBAD);
        let mut failures = 0u64;
        for _ in 0..3000 {
            let message = rng.random_range(0..space);
            let sent = code.encode(message).unwrap();
            let pattern: Vec<usize> = (0..4).map(|_| rng.random_range(0..=2usize)).collect();
            let received = apply_vector_deletions(&sent, &pattern).unwrap();
            match code.decode(&received) {
                Ok(decoded) => assert_eq!(decoded, sent, "pattern {pattern:?}"),
                Err(_) => failures += 1,
            }
        }
        // with only two outer codewords at distance 3 some multi-coordinate
        // erasure patterns stay uniquely fillable, but not all
        assert!(failures > 0);
    }

    #[test]
    fn size_bound_census_small() {
        // exact census over all vectors of (S_all^4)^2
        let code = TailTensorCorrecting::new(4, 2, 2, 0, OuterFamily::Auto).unwrap();
        let universe = crate::perm::PermUniverse::new(4).unwrap().all();
        let mut count = 0u128;
        for a in &universe {
            for b in &universe {
                let vector = PermVector::new(vec![a.clone(), b.clone()]).unwrap();
                if code.membership(&vector) {
                    count += 1;
                }
            }
        }
        let bound = code.message_space().unwrap();
        assert!(count >= bound, "census {count} below bound {bound}");
    }

    #[test]
    fn detecting_family_is_a_full_partition() {
        for q in 2..=5u8 {
            for t in 1..q as usize {
                let classes: Vec<TailCode> = (0..=t)
                    .map(|j| detecting_class(q, t, j).unwrap())
                    .collect();
                let total: usize = classes.iter().map(|c| c.len()).sum();
                assert_eq!(total as u128, crate::perm::universe_size(q), "q={q} t={t}");
                for class in &classes {
                    assert!(class.is_detecting(crate::tail::ErrorModel::Deletion, t).holds());
                }
            }
        }
    }

    #[test]
    fn detection_catches_single_deletions() {
        let code = TailTensorDetecting::new(4, 1, 4, 1, OuterFamily::Auto).unwrap();
        let space = code.message_space().unwrap();
        let step = (space / 193).max(1);
        let mut message = 0u128;
        let mut checked = 0usize;
        while message < space {
            let sent = code.encode(message).unwrap();
            assert!(code.detect(&sent));
            for coordinate in 0..code.n() {
                for k in 1..=code.t() {
                    let mut pattern = vec![0usize; code.n()];
                    pattern[coordinate] = k;
                    let received = apply_vector_deletions(&sent, &pattern).unwrap();
                    if received == sent {
                        continue; // saturated deletion, nothing happened
                    }
                    assert!(!code.detect(&received), "message {message} pattern {pattern:?}");
                    checked += 1;
                }
            }
            message += step;
        }
        assert!(checked > 100);
    }

    #[test]
    fn decode_matches_single_code_balls() {
        // each decoded coordinate really is within the deletion ball promise
        let code = TailTensorCorrecting::new(5, 2, 3, 1, OuterFamily::Auto).unwrap();
        let sent = code.encode(999).unwrap();
        let received = apply_vector_deletions(&sent, &[0, 2, 0]).unwrap();
        let decoded = code.decode(&received).unwrap();
        for (word, original) in decoded.entries().iter().zip(sent.entries()) {
            assert_eq!(word, original);
            assert!(deletion_ball(word, 2).contains(word));
        }
    }

    #[test]
    fn bounds_report() {
        let report = ttpc_size_bounds(6, 2, 7, 1).unwrap();
        // 366^7 * 16: the lexicode over two letters of length 7, distance 3,
        // has 16 words
        let expected = BigUint::from(366u32).pow(7) * BigUint::from(16u32);
        assert_eq!(report.correcting_bound.as_deref(), Some(expected.to_string().as_str()));
        assert_eq!(report.correcting_construction_bound.as_deref(), Some(expected.to_string().as_str()));
        assert_eq!(report.correcting_outer_size.as_deref(), Some("16"));

        let degenerate = ttpc_size_bounds(4, 1, 3, 1).unwrap();
        assert_eq!(degenerate.correcting_outer_size.as_deref(), Some("1"));
        assert_eq!(
            degenerate.correcting_bound.as_deref(),
            Some(28u128.pow(3).to_string().as_str())
        );
        assert!(degenerate.notes.iter().any(|n| n.contains("degenerate")));

        let zero_e = ttpc_size_bounds(4, 1, 3, 0).unwrap();
        assert_eq!(
            zero_e.correcting_bound.as_deref(),
            Some(28u128.pow(3).to_string().as_str())
        );
    }
}
