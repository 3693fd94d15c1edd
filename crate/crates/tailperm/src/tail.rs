//! Tail deletion/insertion/indel operators and their balls and spheres.
//!
//! All errors act on the left tail (the weak end of the ranking). Deletions
//! saturate: the last symbol can never be removed. Insertions prepend symbols
//! not already present, so a word never grows past length q.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::perm::{falling_factorial, PartialPermutation};

/// The three tail error models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ErrorModel {
    #[serde(rename = "del")]
    Deletion,
    #[serde(rename = "ins")]
    Insertion,
    Indel,
}

impl fmt::Display for ErrorModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ErrorModel::Deletion => write!(f, "del"),
            ErrorModel::Insertion => write!(f, "ins"),
            ErrorModel::Indel => write!(f, "indel"),
        }
    }
}

impl FromStr for ErrorModel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "del" | "deletion" => Ok(ErrorModel::Deletion),
            "ins" | "insertion" => Ok(ErrorModel::Insertion),
            "indel" => Ok(ErrorModel::Indel),
            other => Err(format!("unknown error model {other:?} (expected del|ins|indel)")),
        }
    }
}

/// An error model together with a radius.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BallSpec {
    pub model: ErrorModel,
    pub radius: usize,
}

impl BallSpec {
    pub fn ball(&self, pi: &PartialPermutation) -> BTreeSet<PartialPermutation> {
        ball(self.model, pi, self.radius)
    }
}

/// `pi` after `j` tail deletions; saturates so the last symbol survives.
pub fn delete_tail(pi: &PartialPermutation, j: usize) -> PartialPermutation {
    let drop = j.min(pi.len() - 1);
    PartialPermutation::new(pi.symbols()[drop..].to_vec(), pi.q()).expect("suffix stays valid")
}

/// All words reachable by at most `t` tail deletions; always contains `pi`.
pub fn deletion_ball(pi: &PartialPermutation, t: usize) -> BTreeSet<PartialPermutation> {
    (0..=t).map(|j| delete_tail(pi, j)).collect()
}

/// Words that give back `pi` after exactly `t` tail deletions, in
/// lexicographic increasing order. Empty when `t > q - |pi|`.
pub fn insertion_sphere(pi: &PartialPermutation, t: usize) -> Vec<PartialPermutation> {
    let unused = pi.unused_symbols();
    if t > unused.len() {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(sphere_size(pi.q(), pi.len(), t) as usize);
    let mut taken = vec![false; unused.len()];
    let mut prefix = Vec::with_capacity(t);
    extend_prefixes(pi, &unused, t, &mut taken, &mut prefix, &mut out);
    out
}

fn extend_prefixes(
    pi: &PartialPermutation,
    unused: &[u8],
    t: usize,
    taken: &mut [bool],
    prefix: &mut Vec<u8>,
    out: &mut Vec<PartialPermutation>,
) {
    if prefix.len() == t {
        let mut symbols = prefix.clone();
        symbols.extend_from_slice(pi.symbols());
        out.push(PartialPermutation::new(symbols, pi.q()).expect("prefixed word stays valid"));
        return;
    }
    for i in 0..unused.len() {
        if !taken[i] {
            taken[i] = true;
            prefix.push(unused[i]);
            extend_prefixes(pi, unused, t, taken, prefix, out);
            prefix.pop();
            taken[i] = false;
        }
    }
}

/// The `j`-th (1-based) element of the lexicographically ordered insertion
/// sphere, computed by direct unranking of the prefix.
pub fn insertion_sphere_element(
    pi: &PartialPermutation,
    t: usize,
    j: u128,
) -> Option<PartialPermutation> {
    let unused = pi.unused_symbols();
    if t > unused.len() || j == 0 || j > sphere_size(pi.q(), pi.len(), t) {
        return None;
    }
    let u = unused.len() as u64;
    let mut remaining = j - 1;
    let mut taken = vec![false; unused.len()];
    let mut prefix = Vec::with_capacity(t);
    for k in 0..t {
        let block = falling_factorial(u - k as u64 - 1, t as u64 - k as u64 - 1);
        let index = (remaining / block) as usize;
        remaining %= block;
        let pick = (0..unused.len())
            .filter(|&i| !taken[i])
            .nth(index)
            .expect("index within free prefix symbols");
        taken[pick] = true;
        prefix.push(unused[pick]);
    }
    prefix.extend_from_slice(pi.symbols());
    Some(PartialPermutation::new(prefix, pi.q()).expect("prefixed word stays valid"))
}

/// The 1-based position of `word` in the insertion sphere of its own
/// length-`(|word| - t)` suffix. None when `t >= |word|`.
pub fn insertion_sphere_index(word: &PartialPermutation, t: usize) -> Option<u128> {
    if t >= word.len() {
        return None;
    }
    let base = delete_tail(word, t);
    let unused = base.unused_symbols();
    let u = unused.len() as u64;
    let prefix = &word.symbols()[..t];
    let mut taken = vec![false; unused.len()];
    let mut rank: u128 = 0;
    for (k, &s) in prefix.iter().enumerate() {
        let position = unused.iter().position(|&x| x == s).expect("prefix symbol unused in base");
        let smaller_free = (0..position).filter(|&i| !taken[i]).count() as u128;
        rank += smaller_free * falling_factorial(u - k as u64 - 1, t as u64 - k as u64 - 1);
        taken[position] = true;
    }
    Some(rank + 1)
}

/// All words reachable by at most `t` tail insertions; always contains `pi`.
pub fn insertion_ball(pi: &PartialPermutation, t: usize) -> BTreeSet<PartialPermutation> {
    let mut out = BTreeSet::new();
    for i in 0..=t {
        out.extend(insertion_sphere(pi, i));
    }
    out
}

/// Size of the insertion sphere of radius `t` around any word of length `i`
/// over `[q]`: `C(q-i, t) * t!`, zero when `t > q - i`. The product collapses
/// to the falling factorial `(q-i) * (q-i-1) * .. * (q-i-t+1)`.
pub fn sphere_size(q: u8, i: usize, t: usize) -> u128 {
    let free = q as u64 - i as u64;
    if t as u64 > free {
        return 0;
    }
    falling_factorial(free, t as u64)
}

/// Words reachable by at most `t` single tail operations, each either one
/// tail deletion (saturating at length 1) or one tail insertion of an unused
/// symbol, interleaved arbitrarily. Contains `pi` (zero operations).
pub fn indel_ball(pi: &PartialPermutation, t: usize) -> BTreeSet<PartialPermutation> {
    indel_shells(pi, t).into_iter().flatten().collect()
}

/// Breadth-first shells of the indel ball: `shells[r]` holds the words whose
/// minimum operation count from `pi` is exactly `r`.
pub fn indel_shells(pi: &PartialPermutation, t: usize) -> Vec<BTreeSet<PartialPermutation>> {
    let mut visited: BTreeSet<PartialPermutation> = BTreeSet::new();
    visited.insert(pi.clone());
    let mut shells = vec![BTreeSet::from([pi.clone()])];
    for _ in 0..t {
        let mut next = BTreeSet::new();
        for word in shells.last().expect("at least the center shell") {
            for succ in indel_successors(word) {
                if visited.insert(succ.clone()) {
                    next.insert(succ);
                }
            }
        }
        shells.push(next);
    }
    shells
}

fn indel_successors(pi: &PartialPermutation) -> Vec<PartialPermutation> {
    let mut out = Vec::new();
    if pi.len() >= 2 {
        out.push(delete_tail(pi, 1));
    }
    if !pi.is_full() {
        for s in pi.unused_symbols() {
            let mut symbols = Vec::with_capacity(pi.len() + 1);
            symbols.push(s);
            symbols.extend_from_slice(pi.symbols());
            out.push(PartialPermutation::new(symbols, pi.q()).expect("prepended word stays valid"));
        }
    }
    out
}

/// Ball of the given model around `pi`.
pub fn ball(model: ErrorModel, pi: &PartialPermutation, t: usize) -> BTreeSet<PartialPermutation> {
    match model {
        ErrorModel::Deletion => deletion_ball(pi, t),
        ErrorModel::Insertion => insertion_ball(pi, t),
        ErrorModel::Indel => indel_ball(pi, t),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::PermUniverse;

    fn p(text: &str, q: u8) -> PartialPermutation {
        PartialPermutation::parse(text, q).unwrap()
    }

    fn names(set: &BTreeSet<PartialPermutation>) -> Vec<String> {
        set.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn delete_tail_fixtures() {
        assert_eq!(delete_tail(&p("2341", 4), 2), p("41", 4));
        assert_eq!(delete_tail(&p("41", 4), 2), p("1", 4));
        let pi = p("3245", 6);
        assert_eq!(delete_tail(&pi, 0), pi);
    }

    #[test]
    fn deletion_ball_fixtures() {
        assert_eq!(
            names(&deletion_ball(&p("3245", 6), 2)),
            vec!["245", "3245", "45"]
        );
        assert_eq!(names(&deletion_ball(&p("1", 4), 3)), vec!["1"]);
        assert_eq!(names(&deletion_ball(&p("41", 4), 3)), vec!["1", "41"]);
    }

    #[test]
    fn insertion_sphere_fixtures() {
        let sphere = insertion_sphere(&p("41", 4), 2);
        assert_eq!(
            sphere.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            vec!["2341", "3241"]
        );

        let sphere = insertion_sphere(&p("1", 4), 2);
        assert_eq!(sphere.len(), 6);
        let expected: BTreeSet<_> = ["231", "241", "321", "341", "421", "431"]
            .iter()
            .map(|s| p(s, 4))
            .collect();
        assert_eq!(sphere.iter().cloned().collect::<BTreeSet<_>>(), expected);

        let pi = p("3245", 6);
        assert_eq!(insertion_sphere(&pi, 0), vec![pi.clone()]);
        assert!(insertion_sphere(&pi, 3).is_empty());
    }

    #[test]
    fn insertion_ball_fixtures() {
        assert_eq!(
            names(&insertion_ball(&p("3245", 6), 1)),
            vec!["13245", "3245", "63245"]
        );
        assert_eq!(names(&insertion_ball(&p("341", 4), 2)), vec!["2341", "341"]);
        let full = p("4321", 4);
        assert_eq!(insertion_ball(&full, 1), BTreeSet::from([full.clone()]));
    }

    #[test]
    fn sphere_size_fixtures() {
        assert_eq!(sphere_size(4, 1, 2), 6);
        assert_eq!(sphere_size(4, 2, 2), 2);
        assert_eq!(sphere_size(7, 7, 1), 0);
    }

    #[test]
    fn sphere_matches_size_formula() {
        for q in 1..=6u8 {
            for pi in PermUniverse::new(q).unwrap().all() {
                for t in 0..=3usize {
                    assert_eq!(
                        insertion_sphere(&pi, t).len() as u128,
                        sphere_size(q, pi.len(), t),
                        "q={q} pi={pi} t={t}"
                    );
                }
            }
        }
    }

    #[test]
    fn sphere_characterisation() {
        // membership in the sphere is exactly "t deletions recover pi"
        for q in 1..=5u8 {
            let all = PermUniverse::new(q).unwrap().all();
            for pi in &all {
                for t in 0..=3usize {
                    let sphere: BTreeSet<_> = insertion_sphere(pi, t).into_iter().collect();
                    for word in &all {
                        let reaches =
                            word.len() == pi.len() + t && &delete_tail(word, t) == pi;
                        assert_eq!(sphere.contains(word), reaches, "pi={pi} word={word} t={t}");
                    }
                }
            }
        }
    }

    #[test]
    fn sphere_unrank_and_rank_agree_with_enumeration() {
        for q in 1..=5u8 {
            for pi in PermUniverse::new(q).unwrap().all() {
                for t in 0..=3usize {
                    let sphere = insertion_sphere(&pi, t);
                    for (idx, word) in sphere.iter().enumerate() {
                        let j = idx as u128 + 1;
                        assert_eq!(insertion_sphere_element(&pi, t, j).as_ref(), Some(word));
                        if t < word.len() {
                            assert_eq!(insertion_sphere_index(word, t), Some(j));
                        }
                    }
                    assert_eq!(insertion_sphere_element(&pi, t, sphere.len() as u128 + 1), None);
                }
            }
        }
    }

    #[test]
    fn ball_is_union_of_disjoint_spheres() {
        for q in 1..=5u8 {
            for pi in PermUniverse::new(q).unwrap().all() {
                for t in 0..=3usize {
                    let mut union = BTreeSet::new();
                    for i in 0..=t {
                        for word in insertion_sphere(&pi, i) {
                            assert!(union.insert(word), "spheres overlap");
                        }
                    }
                    assert_eq!(union, insertion_ball(&pi, t));
                }
            }
        }
    }

    #[test]
    fn deletion_insertion_symmetry() {
        for q in 1..=5u8 {
            let all = PermUniverse::new(q).unwrap().all();
            for t in 0..=3usize {
                for x in &all {
                    let del = deletion_ball(x, t);
                    for y in &all {
                        assert_eq!(
                            del.contains(y),
                            insertion_ball(y, t).contains(x),
                            "x={x} y={y} t={t}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn indel_fixtures() {
        let shells = indel_shells(&p("3245", 6), 1);
        assert_eq!(names(&shells[1]), vec!["13245", "245", "63245"]);

        let ball4 = indel_ball(&p("3245", 6), 4);
        assert!(ball4.contains(&p("2345", 6)));
        // 3245 -> 245 -> 45 -> 645 -> 3645
        assert!(ball4.contains(&p("3645", 6)));
    }

    #[test]
    fn indel_ball_contains_both_one_sided_balls() {
        for q in 1..=5u8 {
            for pi in PermUniverse::new(q).unwrap().all() {
                for t in 0..=2usize {
                    let indel = indel_ball(&pi, t);
                    assert!(indel.contains(&pi));
                    assert!(deletion_ball(&pi, t).is_subset(&indel));
                    assert!(insertion_ball(&pi, t).is_subset(&indel));
                }
            }
        }
    }

    #[test]
    fn model_parsing() {
        assert_eq!("del".parse::<ErrorModel>().unwrap(), ErrorModel::Deletion);
        assert_eq!("ins".parse::<ErrorModel>().unwrap(), ErrorModel::Insertion);
        assert_eq!("indel".parse::<ErrorModel>().unwrap(), ErrorModel::Indel);
        assert!("swap".parse::<ErrorModel>().is_err());
    }
}
