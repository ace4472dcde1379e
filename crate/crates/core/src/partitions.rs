//! Noncrossing partitions, noncrossing pairings and the maximal alternating
//! interval partition of a `{1,*}` word.
//!
//! Positions are 1-based throughout, matching the usual `{1, …, n}` convention.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Largest `n` for which full enumeration of `NC(n)` is allowed.
pub const NC_GUARD: usize = 12;

/// A letter of a word in `a` and `a*`.
///
/// As an `ε ∈ {1,*}^n` letter `A` is `1` and `Star` is `*`; as a cumulant index
/// `j ∈ {1,2}^n` `A` is `1` and `Star` is `2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    A,
    Star,
}

impl Letter {
    pub fn dual(self) -> Letter {
        match self {
            Letter::A => Letter::Star,
            Letter::Star => Letter::A,
        }
    }

    pub fn index_char(self) -> char {
        match self {
            Letter::A => '1',
            Letter::Star => '2',
        }
    }

    pub fn eps_char(self) -> char {
        match self {
            Letter::A => '1',
            Letter::Star => '*',
        }
    }

    pub fn from_char(c: char) -> Option<Letter> {
        match c {
            '1' => Some(Letter::A),
            '2' | '*' => Some(Letter::Star),
            _ => None,
        }
    }
}

/// Parse `"1212"` or `"1*1*"` into letters.
pub fn parse_word(s: &str) -> Option<Vec<Letter>> {
    let w: Option<Vec<Letter>> = s.chars().filter(|c| !matches!(c, ',' | ' ')).map(Letter::from_char).collect();
    w.filter(|w| !w.is_empty())
}

/// Format as a cumulant index, e.g. `"12"`.
pub fn word_index_string(w: &[Letter]) -> String {
    w.iter().map(|l| l.index_char()).collect()
}

/// Format as an `ε` word, e.g. `"1*"`.
pub fn word_eps_string(w: &[Letter]) -> String {
    w.iter().map(|l| l.eps_char()).collect()
}

/// All words of length `n` in lexicographic order (`1` before `*`).
pub fn all_words(n: usize) -> Vec<Vec<Letter>> {
    (0..1usize << n)
        .map(|bits| {
            (0..n)
                .map(|i| {
                    if bits >> (n - 1 - i) & 1 == 0 {
                        Letter::A
                    } else {
                        Letter::Star
                    }
                })
                .collect()
        })
        .collect()
}

/// A noncrossing partition of `{1, …, n}`; blocks are sorted and ordered by least element.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NCPartition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl NCPartition {
    /// Validate and canonicalize.
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let blocks = canonical_blocks(n, blocks)?;
        if !crossing_free(&blocks) {
            return Err(Error::MalformedPartition(format!(
                "blocks {blocks:?} cross"
            )));
        }
        Ok(NCPartition { n, blocks })
    }

    /// The one-block partition `1_n`.
    pub fn full(n: usize) -> Self {
        NCPartition {
            n,
            blocks: vec![(1..=n).collect()],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn is_full(&self) -> bool {
        self.blocks.len() == 1
    }

    pub fn is_pairing(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 2)
    }

    /// The leftmost block consisting of consecutive integers.
    pub fn leftmost_interval_block(&self) -> &[usize] {
        self.blocks
            .iter()
            .find(|b| b.windows(2).all(|w| w[1] == w[0] + 1))
            .expect("a noncrossing partition always has an interval block")
    }

    /// Remove an interval block and relabel the remaining points `1..n-|V|`.
    pub fn remove_interval(&self, block: &[usize]) -> NCPartition {
        let (lo, len) = (block[0], block.len());
        let blocks = self
            .blocks
            .iter()
            .filter(|b| b[0] != lo)
            .map(|b| b.iter().map(|&i| if i > lo { i - len } else { i }).collect())
            .collect();
        NCPartition {
            n: self.n - len,
            blocks,
        }
    }
}

impl fmt::Debug for NCPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str("{")?;
            for (k, x) in b.iter().enumerate() {
                if k > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str("}")?;
        }
        f.write_str("}")
    }
}

fn canonical_blocks(n: usize, mut blocks: Vec<Vec<usize>>) -> Result<Vec<Vec<usize>>> {
    let mut seen = vec![false; n + 1];
    for b in blocks.iter_mut() {
        if b.is_empty() {
            return Err(Error::MalformedPartition("empty block".into()));
        }
        b.sort_unstable();
        for &i in b.iter() {
            if i == 0 || i > n {
                return Err(Error::MalformedPartition(format!(
                    "index {i} outside 1..={n}"
                )));
            }
            if seen[i] {
                return Err(Error::MalformedPartition(format!(
                    "index {i} appears twice"
                )));
            }
            seen[i] = true;
        }
    }
    if let Some(missing) = (1..=n).find(|&i| !seen[i]) {
        return Err(Error::MalformedPartition(format!(
            "index {missing} is not covered"
        )));
    }
    blocks.sort_unstable_by_key(|b| b[0]);
    Ok(blocks)
}

fn crossing_free(blocks: &[Vec<usize>]) -> bool {
    // Two blocks cross iff one has consecutive elements a < c with a point
    // of the other strictly between them and a point of the other outside [a, c].
    for (x, bx) in blocks.iter().enumerate() {
        for by in blocks.iter().skip(x + 1) {
            for w in bx.windows(2) {
                let (a, c) = (w[0], w[1]);
                let inside = by.iter().any(|&y| a < y && y < c);
                let outside = by.iter().any(|&y| y < a || y > c);
                if inside && outside {
                    return false;
                }
            }
            for w in by.windows(2) {
                let (a, c) = (w[0], w[1]);
                let inside = bx.iter().any(|&y| a < y && y < c);
                let outside = bx.iter().any(|&y| y < a || y > c);
                if inside && outside {
                    return false;
                }
            }
        }
    }
    true
}

/// Whether a candidate partition of `{1..n}` is noncrossing.
pub fn is_noncrossing(n: usize, blocks: &[Vec<usize>]) -> Result<bool> {
    let blocks = canonical_blocks(n, blocks.to_vec())?;
    Ok(crossing_free(&blocks))
}

pub fn catalan(n: usize) -> u64 {
    let mut c: u64 = 1;
    for k in 0..n as u64 {
        c = c * 2 * (2 * k + 1) / (k + 2);
    }
    c
}

fn check_guard(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParams("partition size must be positive".into()));
    }
    if n > NC_GUARD {
        return Err(Error::GuardExceeded {
            guard: "nc_enumeration",
            limit: NC_GUARD,
            value: n,
        });
    }
    Ok(())
}

/// All of `NC(n)`, in lexicographic order of restricted growth strings
/// (so `1_n` comes first and the partition into singletons last).
pub fn enumerate_noncrossing(n: usize) -> Result<Vec<NCPartition>> {
    enumerate_noncrossing_where(n, |_| true)
}

/// All noncrossing pairings of `{1..n}`.
pub fn enumerate_noncrossing_pairings(n: usize) -> Result<Vec<NCPartition>> {
    if n % 2 == 1 {
        return Err(Error::OddLength(n));
    }
    enumerate_noncrossing_where(n, |b| b.len() == 2)
}

/// The partitions in `NC(n)` all of whose blocks satisfy `keep`.
///
/// Blocks are tested as soon as no later point can join them, so rejected
/// blocks prune whole subtrees.
pub fn enumerate_noncrossing_where(
    n: usize,
    keep: impl Fn(&[usize]) -> bool,
) -> Result<Vec<NCPartition>> {
    check_guard(n)?;
    let mut out = Vec::new();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    grow(1, n, &mut blocks, &keep, &mut out);
    Ok(out)
}

/// A block whose last element is enclosed by another block can never grow again.
fn is_closed(blocks: &[Vec<usize>], b: usize) -> bool {
    let last = *blocks[b].last().unwrap();
    blocks.iter().enumerate().any(|(c, bc)| {
        c != b && bc[0] < last && *bc.last().unwrap() > last
    })
}

fn grow(
    i: usize,
    n: usize,
    blocks: &mut Vec<Vec<usize>>,
    keep: &dyn Fn(&[usize]) -> bool,
    out: &mut Vec<NCPartition>,
) {
    if i > n {
        if blocks.iter().all(|b| keep(b)) {
            out.push(NCPartition {
                n,
                blocks: blocks.clone(),
            });
        }
        return;
    }
    for b in 0..blocks.len() {
        if is_closed(blocks, b) {
            continue;
        }
        blocks[b].push(i);
        let ok = (0..blocks.len()).all(|c| c == b || !is_closed(blocks, c) || keep(&blocks[c]));
        if ok {
            grow(i + 1, n, blocks, keep, out);
        }
        blocks[b].pop();
    }
    blocks.push(vec![i]);
    let ok = (0..blocks.len() - 1).all(|c| !is_closed(blocks, c) || keep(&blocks[c]));
    if ok {
        grow(i + 1, n, blocks, keep, out);
    }
    blocks.pop();
}

/// The maximal alternating interval partition `σ(ε)` as 1-based intervals.
pub fn max_alt_interval_partition(eps: &[Letter]) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    for (i, &l) in eps.iter().enumerate() {
        match out.last_mut() {
            Some(block) if eps[i - 1] != l => block.push(i + 1),
            _ => out.push(vec![i + 1]),
        }
    }
    out
}

/// The subword of `j` at the given 1-based positions.
pub fn restrict_word(j: &[Letter], block: &[usize]) -> Result<Vec<Letter>> {
    block
        .iter()
        .map(|&i| {
            if i == 0 || i > j.len() {
                Err(Error::IndexOutOfRange {
                    index: i,
                    len: j.len(),
                })
            } else {
                Ok(j[i - 1])
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> Vec<Letter> {
        parse_word(s).unwrap()
    }

    #[test]
    fn catalan_counts() {
        let expected = [1u64, 2, 5, 14, 42, 132, 429, 1430];
        for (n, &c) in (1..=8).zip(&expected) {
            assert_eq!(catalan(n), c);
            assert_eq!(enumerate_noncrossing(n).unwrap().len() as u64, c);
        }
    }

    #[test]
    fn guard_and_odd_errors() {
        assert!(matches!(
            enumerate_noncrossing(13),
            Err(Error::GuardExceeded { limit: 12, value: 13, .. })
        ));
        assert_eq!(enumerate_noncrossing_pairings(5), Err(Error::OddLength(5)));
    }

    #[test]
    fn small_pairings() {
        let p2 = enumerate_noncrossing_pairings(2).unwrap();
        assert_eq!(p2, vec![NCPartition::new(2, vec![vec![1, 2]]).unwrap()]);
        let p4: Vec<_> = enumerate_noncrossing_pairings(4)
            .unwrap()
            .into_iter()
            .map(|p| p.blocks().to_vec())
            .collect();
        assert_eq!(p4, vec![vec![vec![1, 2], vec![3, 4]], vec![vec![1, 4], vec![2, 3]]]);
        assert_eq!(enumerate_noncrossing_pairings(6).unwrap().len(), 5);
    }

    #[test]
    fn enumeration_order_is_canonical() {
        let all = enumerate_noncrossing(3).unwrap();
        assert!(all.first().unwrap().is_full());
        assert_eq!(all.last().unwrap().blocks(), &[vec![1], vec![2], vec![3]]);
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(max_alt_interval_partition(&w("1*1*")), vec![vec![1, 2, 3, 4]]);
        assert_eq!(
            max_alt_interval_partition(&w("111")),
            vec![vec![1], vec![2], vec![3]]
        );
        assert_eq!(
            max_alt_interval_partition(&w("1*11*")),
            vec![vec![1, 2, 3], vec![4, 5]]
        );
    }

    #[test]
    fn noncrossing_predicate() {
        assert!(!is_noncrossing(4, &[vec![1, 3], vec![2, 4]]).unwrap());
        assert!(is_noncrossing(4, &[vec![1, 4], vec![2, 3]]).unwrap());
        assert!(is_noncrossing(5, &[vec![1, 2, 5], vec![3, 4]]).unwrap());
        assert!(matches!(
            is_noncrossing(3, &[vec![1, 2]]),
            Err(Error::MalformedPartition(_))
        ));
        assert!(is_noncrossing(3, &[vec![1, 2], vec![2, 3]]).is_err());
        assert!(NCPartition::new(4, vec![vec![1, 3], vec![2, 4]]).is_err());
    }

    #[test]
    fn restriction() {
        assert_eq!(restrict_word(&w("1212"), &[1, 4]).unwrap(), w("12"));
        assert_eq!(restrict_word(&w("1212"), &[2, 3]).unwrap(), w("21"));
        assert_eq!(restrict_word(&w("212121"), &[1, 2, 5, 6]).unwrap(), w("2121"));
        assert_eq!(
            restrict_word(&w("12"), &[3]),
            Err(Error::IndexOutOfRange { index: 3, len: 2 })
        );
    }

    #[test]
    fn interval_peeling() {
        let p = NCPartition::new(5, vec![vec![1, 5], vec![2, 4], vec![3]]).unwrap();
        assert_eq!(p.leftmost_interval_block(), &[3]);
        let r = p.remove_interval(&[3]);
        assert_eq!(r.blocks(), &[vec![1, 4], vec![2, 3]]);
    }

    fn arb_eps() -> impl Strategy<Value = Vec<Letter>> {
        proptest::collection::vec(prop_oneof![Just(Letter::A), Just(Letter::Star)], 1..12)
    }

    proptest! {
        #[test]
        fn sigma_is_maximal_alternating(eps in arb_eps()) {
            let blocks = max_alt_interval_partition(&eps);
            let flat: Vec<usize> = blocks.iter().flatten().copied().collect();
            prop_assert_eq!(flat, (1..=eps.len()).collect::<Vec<_>>());
            for b in &blocks {
                for pair in b.windows(2) {
                    prop_assert_ne!(eps[pair[0] - 1], eps[pair[1] - 1]);
                }
            }
            for pair in blocks.windows(2) {
                let end = *pair[0].last().unwrap();
                prop_assert_eq!(eps[end - 1], eps[end]);
            }
        }

        #[test]
        fn enumerated_partitions_are_valid(n in 1usize..8) {
            let all = enumerate_noncrossing(n).unwrap();
            let mut sorted = all.clone();
            sorted.sort();
            sorted.dedup();
            prop_assert_eq!(sorted.len(), all.len());
            for p in &all {
                prop_assert!(is_noncrossing(n, p.blocks()).unwrap());
            }
        }

        #[test]
        fn pairings_are_pairings(k in 1usize..6) {
            let all = enumerate_noncrossing_pairings(2 * k).unwrap();
            prop_assert_eq!(all.len() as u64, catalan(k));
            prop_assert!(all.iter().all(|p| p.is_pairing()));
        }
    }
}
