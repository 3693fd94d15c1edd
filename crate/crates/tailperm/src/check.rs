//! Detecting/correcting predicates, the pairwise conflict graph, an exact
//! brute-force maximum-code oracle, and the randomized equivalence suite for
//! the relations between the three error models.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use thiserror::Error;

use crate::perm::{PartialPermutation, PermUniverse};
use crate::tail::{ball, ErrorModel};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error("member {member} has alphabet size {found}, code expects {expected}")]
    AlphabetMismatch {
        member: String,
        found: u8,
        expected: u8,
    },
    #[error("alphabet size must be at least 1")]
    ZeroAlphabet,
}

/// What a code claims to do against an error model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Capability {
    Detect,
    Correct,
}

impl fmt::Display for Capability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Capability::Detect => write!(f, "detect"),
            Capability::Correct => write!(f, "correct"),
        }
    }
}

impl FromStr for Capability {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "detect" | "detecting" => Ok(Capability::Detect),
            "correct" | "correcting" => Ok(Capability::Correct),
            other => Err(format!("unknown capability {other:?} (expected detect|correct)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Claim {
    pub model: ErrorModel,
    pub t: usize,
    pub capability: Capability,
}

/// A set of partial permutations over a common alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TailCode {
    q: u8,
    members: BTreeSet<PartialPermutation>,
    claim: Option<Claim>,
}

impl TailCode {
    pub fn new(
        q: u8,
        members: impl IntoIterator<Item = PartialPermutation>,
    ) -> Result<Self, CodeError> {
        if q == 0 {
            return Err(CodeError::ZeroAlphabet);
        }
        let members: BTreeSet<PartialPermutation> = members.into_iter().collect();
        for member in &members {
            if member.q() != q {
                return Err(CodeError::AlphabetMismatch {
                    member: member.to_string(),
                    found: member.q(),
                    expected: q,
                });
            }
        }
        Ok(Self {
            q,
            members,
            claim: None,
        })
    }

    /// Convenience constructor from canonical text forms.
    pub fn from_texts(q: u8, texts: &[&str]) -> Result<Self, crate::perm::PermError> {
        let members = texts
            .iter()
            .map(|s| PartialPermutation::parse(s, q))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::new(q, members).expect("parsed members share the alphabet"))
    }

    pub fn with_claim(mut self, claim: Claim) -> Self {
        self.claim = Some(claim);
        self
    }

    pub fn claim(&self) -> Option<Claim> {
        self.claim
    }

    /// Re-checks a declared claim; `Holds` when no claim is attached is vacuous.
    pub fn verify_claim(&self) -> bool {
        match self.claim {
            None => true,
            Some(Claim {
                model,
                t,
                capability: Capability::Detect,
            }) => self.is_detecting(model, t).holds(),
            Some(Claim {
                model,
                t,
                capability: Capability::Correct,
            }) => self.is_correcting(model, t).holds(),
        }
    }

    pub fn q(&self) -> u8 {
        self.q
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, pi: &PartialPermutation) -> bool {
        self.members.contains(pi)
    }

    pub fn iter(&self) -> impl Iterator<Item = &PartialPermutation> {
        self.members.iter()
    }

    pub fn members(&self) -> &BTreeSet<PartialPermutation> {
        &self.members
    }

    pub fn is_disjoint(&self, other: &TailCode) -> bool {
        self.members.is_disjoint(&other.members)
    }

    pub fn union(&self, other: &TailCode) -> Result<TailCode, CodeError> {
        TailCode::new(self.q, self.members.iter().chain(other.members.iter()).cloned())
    }

    /// No codeword lies in another codeword's ball.
    pub fn is_detecting(&self, model: ErrorModel, t: usize) -> Verdict<DetectViolation> {
        for center in &self.members {
            for word in ball(model, center, t) {
                if &word != center && self.members.contains(&word) {
                    return Verdict::Violated(DetectViolation {
                        center: center.clone(),
                        intruder: word,
                    });
                }
            }
        }
        Verdict::Holds
    }

    /// Balls of distinct codewords are pairwise disjoint.
    pub fn is_correcting(&self, model: ErrorModel, t: usize) -> Verdict<CorrectViolation> {
        let mut reached: HashMap<PartialPermutation, &PartialPermutation> = HashMap::new();
        for center in &self.members {
            for word in ball(model, center, t) {
                if let Some(&previous) = reached.get(&word) {
                    return Verdict::Violated(CorrectViolation {
                        first: previous.clone(),
                        second: center.clone(),
                        common: word,
                    });
                }
                reached.insert(word, center);
            }
        }
        Verdict::Holds
    }
}

/// Outcome of a predicate check, carrying a witness on failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict<V> {
    Holds,
    Violated(V),
}

impl<V> Verdict<V> {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn violation(&self) -> Option<&V> {
        match self {
            Verdict::Holds => None,
            Verdict::Violated(v) => Some(v),
        }
    }
}

/// `intruder` is a codeword inside `center`'s ball.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetectViolation {
    pub center: PartialPermutation,
    pub intruder: PartialPermutation,
}

impl fmt::Display for DetectViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "codeword {} lies in the ball of {}", self.intruder, self.center)
    }
}

/// `common` is reachable from both `first` and `second`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrectViolation {
    pub first: PartialPermutation,
    pub second: PartialPermutation,
    pub common: PartialPermutation,
}

impl fmt::Display for CorrectViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "balls of {} and {} share {}",
            self.first, self.second, self.common
        )
    }
}

fn fixed_words(bits: &[u64]) -> impl Iterator<Item = usize> + '_ {
    bits.iter().enumerate().flat_map(|(w, &word)| {
        let mut bits_left = word;
        std::iter::from_fn(move || {
            if bits_left == 0 {
                None
            } else {
                let b = bits_left.trailing_zeros() as usize;
                bits_left &= bits_left - 1;
                Some(w * 64 + b)
            }
        })
    })
}

#[derive(Clone, PartialEq, Eq)]
struct Bits {
    words: Vec<u64>,
}

impl Bits {
    fn empty(n: usize) -> Self {
        Self {
            words: vec![0; n.div_ceil(64)],
        }
    }

    fn full(n: usize) -> Self {
        let mut bits = Self::empty(n);
        for i in 0..n {
            bits.insert(i);
        }
        bits
    }

    fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1u64 << (i % 64);
    }

    fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1u64 << (i % 64));
    }

    fn contains(&self, i: usize) -> bool {
        self.words[i / 64] & (1u64 << (i % 64)) != 0
    }

    fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    fn intersect(&mut self, other: &Bits) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    fn subtract(&mut self, other: &Bits) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    fn first(&self) -> Option<usize> {
        fixed_words(&self.words).next()
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        fixed_words(&self.words)
    }

    fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }
}

/// Pairwise conflict structure of an error model over the full universe.
///
/// Detect conflicts join words where one lies in the other's ball; correct
/// conflicts join words whose balls intersect. A code has the corresponding
/// capability exactly when it is an independent set here.
pub struct ConflictGraph {
    vertices: Vec<PartialPermutation>,
    adjacency: Vec<Bits>,
    q: u8,
}

impl ConflictGraph {
    pub fn build(q: u8, model: ErrorModel, t: usize, capability: Capability) -> Self {
        let mut vertices = PermUniverse::new(q).expect("q >= 1").all();
        vertices.sort();
        let index: HashMap<&PartialPermutation, usize> =
            vertices.iter().enumerate().map(|(i, v)| (v, i)).collect();
        let n = vertices.len();
        let mut adjacency = vec![Bits::empty(n); n];
        let mut connect = |a: usize, b: usize| {
            if a != b {
                adjacency[a].insert(b);
                adjacency[b].insert(a);
            }
        };
        match capability {
            Capability::Detect => {
                for (i, v) in vertices.iter().enumerate() {
                    for word in ball(model, v, t) {
                        if let Some(&j) = index.get(&word) {
                            connect(i, j);
                        }
                    }
                }
            }
            Capability::Correct => {
                let mut reached: HashMap<PartialPermutation, Vec<usize>> = HashMap::new();
                for (i, v) in vertices.iter().enumerate() {
                    for word in ball(model, v, t) {
                        reached.entry(word).or_default().push(i);
                    }
                }
                for sources in reached.values() {
                    for (k, &a) in sources.iter().enumerate() {
                        for &b in &sources[k + 1..] {
                            connect(a, b);
                        }
                    }
                }
            }
        }
        Self {
            vertices,
            adjacency,
            q,
        }
    }

    pub fn q(&self) -> u8 {
        self.q
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[PartialPermutation] {
        &self.vertices
    }

    pub fn in_conflict(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].contains(b)
    }

    pub fn is_independent(&self, chosen: &[usize]) -> bool {
        for (k, &a) in chosen.iter().enumerate() {
            for &b in &chosen[k + 1..] {
                if self.in_conflict(a, b) {
                    return false;
                }
            }
        }
        true
    }
}

/// Result of the exact maximum-code search.
#[derive(Debug, Clone)]
pub struct OracleResult {
    pub size: usize,
    pub witness: TailCode,
    /// False when the node budget ran out; `size` is then only a lower bound.
    pub exact: bool,
    pub nodes: u64,
}

pub const DEFAULT_ORACLE_BUDGET: u64 = 50_000_000;

/// Exact maximum code size for `(q, t, model, capability)` by branch-and-bound
/// maximum-clique search on the complement of the conflict graph, with greedy
/// coloring bounds. Deterministic: vertex order is complement-degree
/// descending with lexicographic tie-breaking.
pub fn max_code_oracle(
    q: u8,
    t: usize,
    model: ErrorModel,
    capability: Capability,
    budget: u64,
) -> OracleResult {
    let graph = ConflictGraph::build(q, model, t, capability);
    let n = graph.vertex_count();

    // complement adjacency: clique there = independent set in the conflict graph
    let mut complement = vec![Bits::empty(n); n];
    for (a, row) in complement.iter_mut().enumerate() {
        for b in 0..n {
            if a != b && !graph.in_conflict(a, b) {
                row.insert(b);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(complement[v].count()), v));
    let position: Vec<usize> = {
        let mut pos = vec![0; n];
        for (p, &v) in order.iter().enumerate() {
            pos[v] = p;
        }
        pos
    };
    let relabeled: Vec<Bits> = order
        .iter()
        .map(|&v| {
            let mut row = Bits::empty(n);
            for w in complement[v].iter() {
                row.insert(position[w]);
            }
            row
        })
        .collect();

    let mut search = CliqueSearch {
        adjacency: &relabeled,
        best: Vec::new(),
        nodes: 0,
        budget,
        truncated: false,
    };
    search.seed_greedy(n);
    search.expand(&mut Vec::new(), Bits::full(n));

    let witness_members: Vec<PartialPermutation> = search
        .best
        .iter()
        .map(|&p| graph.vertices()[order[p]].clone())
        .collect();
    let witness = TailCode::new(q, witness_members).expect("witness over the same alphabet");
    debug_assert!(match capability {
        Capability::Detect => witness.is_detecting(model, t).holds(),
        Capability::Correct => witness.is_correcting(model, t).holds(),
    });
    OracleResult {
        size: search.best.len(),
        witness,
        exact: !search.truncated,
        nodes: search.nodes,
    }
}

struct CliqueSearch<'a> {
    adjacency: &'a [Bits],
    best: Vec<usize>,
    nodes: u64,
    budget: u64,
    truncated: bool,
}

impl CliqueSearch<'_> {
    fn seed_greedy(&mut self, n: usize) {
        let mut clique = Vec::new();
        let mut candidates = Bits::full(n);
        while let Some(v) = candidates.first() {
            clique.push(v);
            candidates.intersect(&self.adjacency[v]);
        }
        self.best = clique;
    }

    fn expand(&mut self, current: &mut Vec<usize>, candidates: Bits) {
        if self.truncated {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            self.truncated = true;
            return;
        }
        if candidates.is_empty() {
            if current.len() > self.best.len() {
                self.best = current.clone();
            }
            return;
        }

        // greedy coloring: vertices grouped by color, ascending
        let mut ordered = Vec::with_capacity(candidates.count());
        let mut colors = Vec::with_capacity(ordered.capacity());
        let mut uncolored = candidates.clone();
        let mut color = 0usize;
        while !uncolored.is_empty() {
            color += 1;
            let mut class = uncolored.clone();
            while let Some(v) = class.first() {
                class.remove(v);
                uncolored.remove(v);
                class.subtract(&self.adjacency[v]);
                ordered.push(v);
                colors.push(color);
            }
        }

        let mut remaining = candidates;
        for i in (0..ordered.len()).rev() {
            let v = ordered[i];
            if current.len() + colors[i] <= self.best.len() {
                return; // every earlier candidate has an equal or smaller color
            }
            current.push(v);
            let mut next = remaining.clone();
            next.intersect(&self.adjacency[v]);
            self.expand(current, next);
            current.pop();
            remaining.remove(v);
            if self.truncated {
                return;
            }
        }
    }
}

/// One randomized pass over the four relations between error models, plus the
/// fixed counterexample codes separating them.
#[derive(Debug, Clone, serde::Serialize)]
pub struct SuiteReport {
    pub q: u8,
    pub t: usize,
    pub trials: u64,
    pub seed: u64,
    pub codes_checked: u64,
    pub violations: Vec<String>,
    pub fixtures: Vec<FixtureResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.fixtures.iter().all(|f| f.passed)
    }
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct FixtureResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Samples `trials` random codes over the `q` universe (seeded, reproducible)
/// and asserts, for each:
///
/// 1. t-deletion-detecting holds iff t-insertion-detecting holds;
/// 2. after repair to t-insertion-detecting, the code t-insertion-corrects;
/// 3. after repair to t-deletion-correcting, the code t-insertion-corrects;
/// 4. after repair to 2t-deletion-correcting, the code t-indel-corrects.
pub fn equivalence_suite(q: u8, t: usize, trials: u64, seed: u64) -> SuiteReport {
    let universe = {
        let mut all = PermUniverse::new(q).expect("q >= 1").all();
        all.sort();
        all
    };
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut violations = Vec::new();
    let mut checked = 0u64;

    for trial in 0..trials {
        let code = sample_code(q, &universe, &mut rng);
        checked += 1;

        let del_det = code.is_detecting(ErrorModel::Deletion, t).holds();
        let ins_det = code.is_detecting(ErrorModel::Insertion, t).holds();
        if del_det != ins_det {
            violations.push(format!(
                "trial {trial}: del-detect={del_det} but ins-detect={ins_det} for {}",
                describe(&code)
            ));
        }

        let ins_det_code = repair_detecting(&code, ErrorModel::Insertion, t);
        if let Verdict::Violated(v) = ins_det_code.is_correcting(ErrorModel::Insertion, t) {
            violations.push(format!(
                "trial {trial}: ins-detecting code fails ins-correct: {v} in {}",
                describe(&ins_det_code)
            ));
        }

        let del_cor_code = repair_correcting(&code, ErrorModel::Deletion, t);
        if let Verdict::Violated(v) = del_cor_code.is_correcting(ErrorModel::Insertion, t) {
            violations.push(format!(
                "trial {trial}: del-correcting code fails ins-correct: {v} in {}",
                describe(&del_cor_code)
            ));
        }

        let del_cor_2t = repair_correcting(&code, ErrorModel::Deletion, 2 * t);
        if let Verdict::Violated(v) = del_cor_2t.is_correcting(ErrorModel::Indel, t) {
            violations.push(format!(
                "trial {trial}: 2t-del-correcting code fails t-indel-correct: {v} in {}",
                describe(&del_cor_2t)
            ));
        }
    }

    SuiteReport {
        q,
        t,
        trials,
        seed,
        codes_checked: checked,
        violations,
        fixtures: counterexample_fixtures(),
    }
}

fn describe(code: &TailCode) -> String {
    let members: Vec<String> = code.iter().map(|m| m.to_string()).collect();
    format!("{{{}}} over q={}", members.join(","), code.q())
}

fn sample_code(q: u8, universe: &[PartialPermutation], rng: &mut ChaCha12Rng) -> TailCode {
    use rand::Rng;
    let max_len = universe.len().min(24);
    let len = rng.random_range(2..=max_len.max(2));
    let picks = rand::seq::index::sample(rng, universe.len(), len.min(universe.len()));
    TailCode::new(q, picks.iter().map(|i| universe[i].clone())).expect("sampled over the alphabet")
}

/// Removes the lexicographically larger word of each violating pair until the
/// detecting predicate holds.
pub fn repair_detecting(code: &TailCode, model: ErrorModel, t: usize) -> TailCode {
    let mut current = code.clone();
    while let Verdict::Violated(v) = current.is_detecting(model, t) {
        let drop = v.center.max(v.intruder);
        current = TailCode::new(
            current.q(),
            current.iter().filter(|&m| *m != drop).cloned(),
        )
        .expect("subset over the same alphabet");
    }
    current
}

/// Removes the lexicographically larger word of each violating pair until the
/// correcting predicate holds.
pub fn repair_correcting(code: &TailCode, model: ErrorModel, t: usize) -> TailCode {
    let mut current = code.clone();
    while let Verdict::Violated(v) = current.is_correcting(model, t) {
        let drop = v.first.max(v.second);
        current = TailCode::new(
            current.q(),
            current.iter().filter(|&m| *m != drop).cloned(),
        )
        .expect("subset over the same alphabet");
    }
    current
}

/// The fixed codes that separate the notions, checked exactly as the
/// relations require.
pub fn counterexample_fixtures() -> Vec<FixtureResult> {
    let mut out = Vec::new();
    let mut push = |name: &str, passed: bool, detail: String| {
        out.push(FixtureResult {
            name: name.to_string(),
            passed,
            detail,
        });
    };

    // {12, 32} over q=3: deletion-detecting for every t >= 1, yet not
    // 2-indel-detecting (12 is reachable from 32 by one deletion + one insertion).
    let c = TailCode::from_texts(3, &["12", "32"]).unwrap();
    let det_all = (1..=3).all(|t| c.is_detecting(ErrorModel::Deletion, t).holds());
    let indel2 = c.is_detecting(ErrorModel::Indel, 2).holds();
    push(
        "del-detect vs indel-detect {12,32}",
        det_all && !indel2,
        format!("del-detect(1..3)={det_all}, indel-detect(2)={indel2} (want true, false)"),
    );

    // {23, 43} over q=4: insertion-correcting for every t, yet not
    // 1-deletion-correcting (both balls contain 3).
    let c = TailCode::from_texts(4, &["23", "43"]).unwrap();
    let ins_all = (1..=3).all(|t| c.is_correcting(ErrorModel::Insertion, t).holds());
    let del1 = c.is_correcting(ErrorModel::Deletion, 1);
    let witness_ok = matches!(
        del1.violation(),
        Some(v) if v.common == PartialPermutation::parse("3", 4).unwrap()
    );
    push(
        "ins-correct vs del-correct {23,43}",
        ins_all && witness_ok,
        format!("ins-correct(1..3)={ins_all}, del-correct(1) violation={:?}", del1.violation().map(|v| v.to_string())),
    );

    // {321, 241} over q=4: 1-indel-correcting but not 2-deletion-correcting.
    // The radius-1 deletion balls are disjoint; the shared word 1 appears only
    // at radius 2.
    let c = TailCode::from_texts(4, &["321", "241"]).unwrap();
    let indel1 = c.is_correcting(ErrorModel::Indel, 1).holds();
    let del1_disjoint = c.is_correcting(ErrorModel::Deletion, 1).holds();
    let del2 = c.is_correcting(ErrorModel::Deletion, 2);
    let del2_witness = matches!(
        del2.violation(),
        Some(v) if v.common == PartialPermutation::parse("1", 4).unwrap()
    );
    push(
        "indel-correct vs 2-del-correct {321,241}",
        indel1 && del1_disjoint && del2_witness,
        format!(
            "indel-correct(1)={indel1}, del-correct(1)={del1_disjoint}, del-correct(2) violation={:?}",
            del2.violation().map(|v| v.to_string())
        ),
    );

    // Searched separation: some 1-deletion-correcting pair over q=3 that is
    // not 1-indel-correcting.
    let found = find_del_not_indel_pair(3, 1);
    push(
        "(2t-1)-del-correct vs t-indel-correct, t=1",
        found.is_some(),
        match &found {
            Some(code) => format!("found {}", describe(code)),
            None => "no separating pair found".to_string(),
        },
    );

    out
}

/// Brute-force search for a pair that is (2t-1)-deletion-correcting but not
/// t-indel-correcting.
pub fn find_del_not_indel_pair(q: u8, t: usize) -> Option<TailCode> {
    let mut universe = PermUniverse::new(q).ok()?.all();
    universe.sort();
    for (i, x) in universe.iter().enumerate() {
        for y in &universe[i + 1..] {
            let code = TailCode::new(q, [x.clone(), y.clone()]).expect("pair over the alphabet");
            if code.is_correcting(ErrorModel::Deletion, 2 * t - 1).holds()
                && !code.is_correcting(ErrorModel::Indel, t).holds()
            {
                return Some(code);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::PartialPermutation;

    fn p(text: &str, q: u8) -> PartialPermutation {
        PartialPermutation::parse(text, q).unwrap()
    }

    #[test]
    fn detect_fixture_12_32() {
        let code = TailCode::from_texts(3, &["12", "32"]).unwrap();
        for t in 1..=3 {
            assert!(code.is_detecting(ErrorModel::Deletion, t).holds());
        }
        let verdict = code.is_detecting(ErrorModel::Indel, 2);
        assert!(!verdict.holds());
    }

    #[test]
    fn correct_fixture_23_43() {
        let code = TailCode::from_texts(4, &["23", "43"]).unwrap();
        assert!(code.is_correcting(ErrorModel::Insertion, 1).holds());
        let verdict = code.is_correcting(ErrorModel::Deletion, 1);
        let v = verdict.violation().expect("deletion balls overlap");
        assert_eq!(v.common, p("3", 4));
    }

    #[test]
    fn singleton_always_corrects() {
        let code = TailCode::from_texts(5, &["123"]).unwrap();
        for model in [ErrorModel::Deletion, ErrorModel::Insertion, ErrorModel::Indel] {
            assert!(code.is_correcting(model, 3).holds());
            assert!(code.is_detecting(model, 3).holds());
        }
    }

    #[test]
    fn correcting_implies_detecting() {
        // balls contain their centers, so disjoint balls forbid mutual hits
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        for q in 2..=4u8 {
            let mut universe = PermUniverse::new(q).unwrap().all();
            universe.sort();
            for _ in 0..200 {
                let code = sample_code(q, &universe, &mut rng);
                for t in 1..=2 {
                    for model in [ErrorModel::Deletion, ErrorModel::Insertion] {
                        if code.is_correcting(model, t).holds() {
                            assert!(code.is_detecting(model, t).holds());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn subsets_inherit_capabilities() {
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        let mut universe = PermUniverse::new(4).unwrap().all();
        universe.sort();
        for _ in 0..100 {
            let code = sample_code(4, &universe, &mut rng);
            let detecting = repair_detecting(&code, ErrorModel::Deletion, 1);
            let half: Vec<_> = detecting.iter().step_by(2).cloned().collect();
            let subset = TailCode::new(4, half).unwrap();
            assert!(subset.is_detecting(ErrorModel::Deletion, 1).holds());

            let correcting = repair_correcting(&code, ErrorModel::Deletion, 1);
            let half: Vec<_> = correcting.iter().step_by(2).cloned().collect();
            let subset = TailCode::new(4, half).unwrap();
            assert!(subset.is_correcting(ErrorModel::Deletion, 1).holds());
        }
    }

    #[test]
    fn conflict_graph_matches_pairwise_predicates() {
        for q in 2..=4u8 {
            for t in 1..=2usize {
                for model in [ErrorModel::Deletion, ErrorModel::Insertion, ErrorModel::Indel] {
                    for capability in [Capability::Detect, Capability::Correct] {
                        let graph = ConflictGraph::build(q, model, t, capability);
                        let vertices = graph.vertices();
                        for a in 0..vertices.len() {
                            for b in a + 1..vertices.len() {
                                let pair = TailCode::new(
                                    q,
                                    [vertices[a].clone(), vertices[b].clone()],
                                )
                                .unwrap();
                                let pair_ok = match capability {
                                    Capability::Detect => pair.is_detecting(model, t).holds(),
                                    Capability::Correct => pair.is_correcting(model, t).holds(),
                                };
                                assert_eq!(
                                    graph.in_conflict(a, b),
                                    !pair_ok,
                                    "q={q} t={t} model={model} cap={capability} pair=({}, {})",
                                    vertices[a],
                                    vertices[b]
                                );
                            }
                        }
                    }
                }
            }
        }
    }

    /// Independent oracle: maximum independent set by raw subset enumeration.
    fn naive_max_independent(graph: &ConflictGraph) -> usize {
        let n = graph.vertex_count();
        assert!(n <= 20, "naive search only for tiny universes");
        let mut best = 0usize;
        for mask in 0u32..(1 << n) {
            let chosen: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
            if chosen.len() > best && graph.is_independent(&chosen) {
                best = chosen.len();
            }
        }
        best
    }

    #[test]
    fn oracle_agrees_with_naive_subset_search() {
        for q in 2..=3u8 {
            for t in 1..=2usize {
                for model in [ErrorModel::Deletion, ErrorModel::Insertion, ErrorModel::Indel] {
                    for capability in [Capability::Detect, Capability::Correct] {
                        let graph = ConflictGraph::build(q, model, t, capability);
                        let naive = naive_max_independent(&graph);
                        let oracle = max_code_oracle(q, t, model, capability, 1 << 24);
                        assert!(oracle.exact);
                        assert_eq!(
                            oracle.size, naive,
                            "q={q} t={t} model={model} capability={capability}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn oracle_small_cases() {
        let r = max_code_oracle(2, 1, ErrorModel::Deletion, Capability::Detect, 1 << 20);
        assert!(r.exact);
        assert_eq!(r.size, 2);

        let r = max_code_oracle(3, 1, ErrorModel::Deletion, Capability::Detect, 1 << 20);
        assert!(r.exact);
        assert_eq!(r.size, 9);

        let r = max_code_oracle(4, 1, ErrorModel::Deletion, Capability::Correct, 1 << 24);
        assert!(r.exact);
        assert_eq!(r.size, 28);
    }

    #[test]
    fn oracle_witness_is_valid_and_exhausts_budget_gracefully() {
        let r = max_code_oracle(3, 1, ErrorModel::Indel, Capability::Correct, 1 << 20);
        assert!(r.exact);
        assert!(r.witness.is_correcting(ErrorModel::Indel, 1).holds());

        let truncated = max_code_oracle(4, 1, ErrorModel::Deletion, Capability::Detect, 2);
        assert!(!truncated.exact);
        assert!(truncated.size >= 1);
        assert!(truncated.witness.is_detecting(ErrorModel::Deletion, 1).holds());
    }

    #[test]
    fn oracle_size_chain_across_models() {
        // the size relations the model implications force, checked on exact
        // oracle values: indel_det <= del_det = ins_det = ins_cor,
        // del_cor <= ins_cor, and del_cor(2t) <= indel_cor(t) <= del_cor(t)
        let budget = 1 << 26;
        for q in 2..=5u8 {
            for t in 1..=2usize.min(q as usize - 1) {
                let size = |model, capability, radius| {
                    let r = max_code_oracle(q, radius, model, capability, budget);
                    assert!(r.exact, "budget exhausted at q={q} t={radius} {model} {capability}");
                    r.size
                };
                let del_det = size(ErrorModel::Deletion, Capability::Detect, t);
                let ins_det = size(ErrorModel::Insertion, Capability::Detect, t);
                let ins_cor = size(ErrorModel::Insertion, Capability::Correct, t);
                let del_cor = size(ErrorModel::Deletion, Capability::Correct, t);
                let indel_det = size(ErrorModel::Indel, Capability::Detect, t);
                let indel_cor = size(ErrorModel::Indel, Capability::Correct, t);
                let del_cor_2t = size(ErrorModel::Deletion, Capability::Correct, 2 * t);
                assert!(indel_det <= del_det, "q={q} t={t}");
                assert_eq!(del_det, ins_det, "q={q} t={t}");
                assert_eq!(ins_det, ins_cor, "q={q} t={t}");
                assert!(del_cor <= ins_cor, "q={q} t={t}");
                assert!(del_cor_2t <= indel_cor, "q={q} t={t}");
                assert!(indel_cor <= del_cor, "q={q} t={t}");
            }
        }
    }

    #[test]
    fn equivalence_suite_small() {
        let report = equivalence_suite(4, 1, 300, 0xFEED);
        assert!(report.passed(), "violations: {:?}", report.violations);
        assert_eq!(report.codes_checked, 300);
    }

    #[test]
    fn counterexamples_separate_the_notions() {
        for fixture in counterexample_fixtures() {
            assert!(fixture.passed, "{}: {}", fixture.name, fixture.detail);
        }
    }

    #[test]
    fn searched_pair_exists_for_t1() {
        let code = find_del_not_indel_pair(3, 1).expect("separating pair over q=3");
        assert!(code.is_correcting(ErrorModel::Deletion, 1).holds());
        assert!(!code.is_correcting(ErrorModel::Indel, 1).holds());
    }

    #[test]
    fn claims_verify() {
        let claim = Claim {
            model: ErrorModel::Deletion,
            t: 1,
            capability: Capability::Detect,
        };
        let good = TailCode::from_texts(3, &["12", "32"]).unwrap().with_claim(claim);
        assert!(good.verify_claim());
        let bad = TailCode::from_texts(3, &["12", "2"]).unwrap().with_claim(claim);
        assert!(!bad.verify_claim());
    }
}
