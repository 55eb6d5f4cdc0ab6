//! Permutations in one-line notation, pattern occurrences, and the
//! direct/skew sum combinators.
//!
//! A [`Permutation`] doubles as a pattern. Occurrence counting walks index
//! tuples in lexicographic order and abandons a prefix as soon as its
//! entries stop being order-isomorphic to the matching pattern prefix.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;

use crate::error::{Error, Result};

/// A permutation of `1..=n` in one-line notation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<u32>);

impl Permutation {
    pub fn new(entries: Vec<u32>) -> Result<Self> {
        let n = entries.len();
        let mut seen = vec![false; n + 1];
        for &e in &entries {
            let i = e as usize;
            if e == 0 || i > n {
                return Err(Error::InvalidPermutation(format!(
                    "entry {e} out of range 1..={n}"
                )));
            }
            if seen[i] {
                return Err(Error::InvalidPermutation(format!("entry {e} repeated")));
            }
            seen[i] = true;
        }
        Ok(Permutation(entries))
    }

    /// Caller guarantees `entries` is a permutation of `1..=len`.
    pub(crate) fn from_vec_unchecked(entries: Vec<u32>) -> Self {
        debug_assert!(Permutation::new(entries.clone()).is_ok());
        Permutation(entries)
    }

    pub fn empty() -> Self {
        Permutation(Vec::new())
    }

    /// The increasing pattern `1 2 ... u`.
    pub fn increasing(u: usize) -> Result<Self> {
        if u == 0 {
            return Err(Error::ZeroLength);
        }
        Ok(Self::identity(u))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((1..=n as u32).collect())
    }

    pub fn decreasing(n: usize) -> Self {
        Permutation((1..=n as u32).rev().collect())
    }

    /// The permutation order-isomorphic to `values`, which must be distinct.
    pub fn standardize(values: &[u32]) -> Self {
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by_key(|&i| values[i]);
        let mut out = vec![0u32; values.len()];
        for (rank, &i) in order.iter().enumerate() {
            out[i] = rank as u32 + 1;
        }
        Permutation(out)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<u32> {
        self.0
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u32; self.len()];
        for (i, &e) in self.0.iter().enumerate() {
            inv[e as usize - 1] = i as u32 + 1;
        }
        Permutation(inv)
    }

    /// True when the last entry is the largest one.
    pub fn ends_in_max(&self) -> bool {
        self.0.last().is_some_and(|&e| e as usize == self.len())
    }

    /// Direct sum: `self` followed by `t` shifted above it.
    pub fn oplus(&self, t: &Permutation) -> Result<Self> {
        if self.is_empty() && t.is_empty() {
            return Err(Error::EmptyOperands("oplus"));
        }
        let k = self.len() as u32;
        let mut out = self.0.clone();
        out.extend(t.0.iter().map(|&e| e + k));
        Ok(Permutation(out))
    }

    /// Skew sum: `self` shifted above `t`, followed by `t`.
    pub fn ominus(&self, t: &Permutation) -> Result<Self> {
        if self.is_empty() && t.is_empty() {
            return Err(Error::EmptyOperands("ominus"));
        }
        let m = t.len() as u32;
        let mut out: Vec<u32> = self.0.iter().map(|&e| e + m).collect();
        out.extend_from_slice(&t.0);
        Ok(Permutation(out))
    }

    /// Number of occurrences of the pattern `q` in `self`.
    pub fn count_occurrences(&self, q: &Permutation) -> BigUint {
        BigUint::from(PatternMatcher::new(q).count_raw(&self.0))
    }

    pub fn contains(&self, q: &Permutation) -> bool {
        PatternMatcher::new(q).contains(&self.0)
    }

    pub fn avoids(&self, q: &Permutation) -> bool {
        !self.contains(q)
    }

    /// Every occurrence of `q`, in lexicographic order of index tuples.
    pub fn occurrences<'a>(&'a self, q: &Permutation) -> Occurrences<'a> {
        Occurrences::new(&self.0, PatternMatcher::new(q))
    }

    /// Lexicographic rank among all permutations of the same length.
    pub fn rank(&self) -> u64 {
        let n = self.len();
        let mut rank = 0u64;
        for i in 0..n {
            let smaller_after = self.0[i + 1..].iter().filter(|&&e| e < self.0[i]).count() as u64;
            rank = rank * (n - i) as u64 + smaller_after;
        }
        rank
    }

    /// Inverse of [`Permutation::rank`].
    pub fn from_rank(n: usize, mut rank: u64) -> Self {
        let mut digits = vec![0u64; n];
        for i in (0..n).rev() {
            let base = (n - i) as u64;
            digits[i] = rank % base;
            rank /= base;
        }
        let mut pool: Vec<u32> = (1..=n as u32).collect();
        let entries = digits.iter().map(|&d| pool.remove(d as usize)).collect();
        Permutation(entries)
    }

    /// All permutations of length `n` in lexicographic order.
    pub fn all(n: usize) -> AllPermutations {
        AllPermutations { current: Some((1..=n as u32).collect()) }
    }
}

impl fmt::Display for Permutation {
    /// Compact digits up to length 9, space separated beyond that.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.len() <= 9 { "" } else { " " };
        let parts: Vec<String> = self.0.iter().map(|e| e.to_string()).collect();
        f.write_str(&parts.join(sep))
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let err = |msg: String| Error::Parse { what: "permutation", msg };
        if s.is_empty() {
            return Err(err("empty input".into()));
        }
        let entries: Vec<u32> = if s.contains(|c: char| c == ',' || c.is_whitespace()) {
            s.split(|c: char| c == ',' || c.is_whitespace())
                .filter(|tok| !tok.is_empty())
                .map(|tok| tok.parse::<u32>().map_err(|e| err(format!("{tok:?}: {e}"))))
                .collect::<Result<_>>()?
        } else {
            if !s.chars().all(|c| c.is_ascii_digit()) {
                return Err(err(format!("unexpected characters in {s:?}")));
            }
            if s.len() > 9 {
                return Err(err(format!(
                    "compact digit form is only accepted for n <= 9, got {s:?}; separate entries with commas or spaces"
                )));
            }
            s.chars().map(|c| c.to_digit(10).unwrap()).collect()
        };
        Permutation::new(entries)
    }
}

/// Iterator over all permutations of a fixed length, lexicographically.
pub struct AllPermutations {
    current: Option<Vec<u32>>,
}

impl Iterator for AllPermutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let cur = self.current.take()?;
        let mut next = cur.clone();
        let n = next.len();
        // standard next-permutation step
        if n >= 2 {
            if let Some(i) = (0..n - 1).rev().find(|&i| next[i] < next[i + 1]) {
                let j = (i + 1..n).rev().find(|&j| next[j] > next[i]).unwrap();
                next.swap(i, j);
                next[i + 1..].reverse();
                self.current = Some(next);
            }
        }
        Some(Permutation(cur))
    }
}

/// A set of strictly increasing 1-based positions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Occurrence(Vec<usize>);

impl Occurrence {
    pub fn new(positions: Vec<usize>) -> Result<Self> {
        if positions.first() == Some(&0) {
            return Err(Error::InvalidArgument("occurrence positions are 1-based".into()));
        }
        if positions.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(
                "occurrence positions must be strictly increasing".into(),
            ));
        }
        Ok(Occurrence(positions))
    }

    pub fn positions(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The entries of `p` at these positions.
    pub fn values(&self, p: &Permutation) -> Result<Vec<u32>> {
        self.0
            .iter()
            .map(|&i| {
                p.entries().get(i - 1).copied().ok_or_else(|| {
                    Error::InvalidArgument(format!("position {i} exceeds length {}", p.len()))
                })
            })
            .collect()
    }
}

impl fmt::Display for Occurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for Occurrence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let positions = s
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|tok| !tok.is_empty())
            .map(|tok| {
                tok.parse::<usize>().map_err(|e| Error::Parse {
                    what: "occurrence",
                    msg: format!("{tok:?}: {e}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Occurrence::new(positions)
    }
}

/// Precomputed matcher for one pattern.
///
/// For each pattern slot `j`, `below[j]` / `above[j]` name the earlier slot
/// holding the closest smaller / larger pattern value, so extending a
/// matched prefix by one entry is an O(1) comparison.
#[derive(Debug, Clone)]
pub struct PatternMatcher {
    pattern: Permutation,
    below: Vec<Option<usize>>,
    above: Vec<Option<usize>>,
}

impl PatternMatcher {
    pub fn new(q: &Permutation) -> Self {
        let e = q.entries();
        let mut below = Vec::with_capacity(e.len());
        let mut above = Vec::with_capacity(e.len());
        for j in 0..e.len() {
            below.push((0..j).filter(|&i| e[i] < e[j]).max_by_key(|&i| e[i]));
            above.push((0..j).filter(|&i| e[i] > e[j]).min_by_key(|&i| e[i]));
        }
        PatternMatcher { pattern: q.clone(), below, above }
    }

    pub fn pattern(&self) -> &Permutation {
        &self.pattern
    }

    #[inline]
    fn fits(&self, chosen: &[u32], slot: usize, v: u32) -> bool {
        self.below[slot].is_none_or(|s| chosen[s] < v)
            && self.above[slot].is_none_or(|s| v < chosen[s])
    }

    /// Occurrences in a sequence of distinct values.
    pub fn count(&self, seq: &[u32]) -> BigUint {
        BigUint::from(self.count_raw(seq))
    }

    pub(crate) fn count_raw(&self, seq: &[u32]) -> u64 {
        let k = self.pattern.len();
        if k > seq.len() {
            return 0;
        }
        let mut chosen = vec![0u32; k];
        self.count_from(seq, 0, 0, &mut chosen)
    }

    fn count_from(&self, seq: &[u32], start: usize, slot: usize, chosen: &mut [u32]) -> u64 {
        let k = chosen.len();
        if slot == k {
            return 1;
        }
        let last = seq.len() - (k - slot);
        let mut total = 0;
        for i in start..=last {
            let v = seq[i];
            if self.fits(chosen, slot, v) {
                chosen[slot] = v;
                total += self.count_from(seq, i + 1, slot + 1, chosen);
            }
        }
        total
    }

    pub fn contains(&self, seq: &[u32]) -> bool {
        let k = self.pattern.len();
        if k > seq.len() {
            return false;
        }
        let mut chosen = vec![0u32; k];
        self.find_from(seq, 0, 0, &mut chosen)
    }

    fn find_from(&self, seq: &[u32], start: usize, slot: usize, chosen: &mut [u32]) -> bool {
        let k = chosen.len();
        if slot == k {
            return true;
        }
        let last = seq.len() - (k - slot);
        for i in start..=last {
            let v = seq[i];
            if self.fits(chosen, slot, v) {
                chosen[slot] = v;
                if self.find_from(seq, i + 1, slot + 1, chosen) {
                    return true;
                }
            }
        }
        false
    }

    /// Whether some occurrence uses the last element of `seq` as its last slot.
    pub(crate) fn contains_ending_at_last(&self, seq: &[u32]) -> bool {
        let k = self.pattern.len();
        if k == 0 || k > seq.len() {
            return false;
        }
        let (head, tail) = seq.split_at(seq.len() - 1);
        let mut chosen = vec![0u32; k];
        self.find_ending(head, tail[0], 0, 0, &mut chosen)
    }

    fn find_ending(&self, head: &[u32], v: u32, start: usize, slot: usize, chosen: &mut [u32]) -> bool {
        let k = chosen.len();
        if slot == k - 1 {
            return self.fits(chosen, slot, v);
        }
        if head.len() < k - 1 - slot {
            return false;
        }
        let last = head.len() - (k - 1 - slot);
        for i in start..=last {
            let w = head[i];
            if self.fits(chosen, slot, w) {
                chosen[slot] = w;
                if self.find_ending(head, v, i + 1, slot + 1, chosen) {
                    return true;
                }
            }
        }
        false
    }
}

/// Streaming iterator over occurrences; see [`Permutation::occurrences`].
pub struct Occurrences<'a> {
    seq: &'a [u32],
    matcher: PatternMatcher,
    idx: Vec<usize>,
    vals: Vec<u32>,
    started: bool,
    done: bool,
}

impl<'a> Occurrences<'a> {
    pub(crate) fn new(seq: &'a [u32], matcher: PatternMatcher) -> Self {
        Occurrences { seq, matcher, idx: Vec::new(), vals: Vec::new(), started: false, done: false }
    }
}

impl Iterator for Occurrences<'_> {
    type Item = Occurrence;

    fn next(&mut self) -> Option<Occurrence> {
        if self.done {
            return None;
        }
        let n = self.seq.len();
        let k = self.matcher.pattern.len();
        if k > n {
            self.done = true;
            return None;
        }
        if k == 0 {
            self.done = true;
            return Some(Occurrence(Vec::new()));
        }
        let mut next_start = if self.started {
            self.vals.pop();
            self.idx.pop().map_or(0, |i| i + 1)
        } else {
            self.started = true;
            0
        };
        loop {
            let slot = self.idx.len();
            let last = n - (k - slot);
            let found = (next_start..=last)
                .find(|&i| self.matcher.fits(&self.vals, slot, self.seq[i]));
            match found {
                Some(i) => {
                    self.idx.push(i);
                    self.vals.push(self.seq[i]);
                    if self.idx.len() == k {
                        return Some(Occurrence(self.idx.iter().map(|&i| i + 1).collect()));
                    }
                    next_start = i + 1;
                }
                None => match self.idx.pop() {
                    Some(i) => {
                        self.vals.pop();
                        next_start = i + 1;
                    }
                    None => {
                        self.done = true;
                        return None;
                    }
                },
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    /// Brute force: standardize every k-subset.
    fn brute_count(p: &Permutation, q: &Permutation) -> u64 {
        fn go(p: &[u32], q: &Permutation, start: usize, picked: &mut Vec<u32>) -> u64 {
            if picked.len() == q.len() {
                return (Permutation::standardize(picked) == *q) as u64;
            }
            let mut total = 0;
            for i in start..p.len() {
                picked.push(p[i]);
                total += go(p, q, i + 1, picked);
                picked.pop();
            }
            total
        }
        go(p.entries(), q, 0, &mut Vec::new())
    }

    #[test]
    fn containment_example() {
        let perm = p("214653");
        assert_eq!(brute_count(&perm, &p("231")), 2);
        assert_eq!(perm.count_occurrences(&p("231")), BigUint::from(2u32));
        assert_eq!(perm.count_occurrences(&p("4321")), BigUint::from(0u32));
        assert!(perm.avoids(&p("4321")));
        assert!(!perm.avoids(&p("231")));
        assert!(!p("132").avoids(&p("132")));
    }

    #[test]
    fn identity_counts() {
        let perm = p("3 1 4 2 6 5");
        assert_eq!(perm.count_occurrences(&perm), BigUint::from(1u32));
        assert_eq!(perm.count_occurrences(&p("1")), BigUint::from(6u32));
        assert_eq!(p("12").count_occurrences(&p("123")), BigUint::from(0u32));
    }

    #[test]
    fn listing() {
        let occ: Vec<String> = p("214653").occurrences(&p("231")).map(|o| o.to_string()).collect();
        assert_eq!(occ, ["3,4,6", "3,5,6"]);
        let occ: Vec<String> = p("123").occurrences(&p("12")).map(|o| o.to_string()).collect();
        assert_eq!(occ, ["1,2", "1,3", "2,3"]);
        assert_eq!(p("321").occurrences(&p("12")).count(), 0);
    }

    #[test]
    fn listing_matches_count_exhaustively() {
        for n in 0..=6 {
            for perm in Permutation::all(n) {
                for q in Permutation::all(3).chain(Permutation::all(2)) {
                    let listed: Vec<_> = perm.occurrences(&q).collect();
                    assert_eq!(listed.len() as u64, brute_count(&perm, &q));
                    assert!(listed.windows(2).all(|w| w[0] < w[1]));
                    for o in &listed {
                        assert_eq!(Permutation::standardize(&o.values(&perm).unwrap()), q);
                    }
                }
            }
        }
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(p("231").inverse(), p("312"));
        assert_eq!(p("132").inverse(), p("132"));
        assert_eq!(p("3142").inverse(), p("2413"));
    }

    #[test]
    fn sums() {
        assert_eq!(p("3142").oplus(&p("132")).unwrap(), p("3142576"));
        assert_eq!(p("3142").ominus(&p("132")).unwrap(), p("6475132"));
        assert_eq!(p("1").oplus(&p("1")).unwrap(), p("12"));
        assert_eq!(p("1").ominus(&p("1")).unwrap(), p("21"));
        assert_eq!(p("12").oplus(&Permutation::increasing(2).unwrap()).unwrap(), p("1234"));
        assert_eq!(p("12").ominus(&p("1")).unwrap(), p("231"));
        assert_eq!(p("12").oplus(&Permutation::empty()).unwrap(), p("12"));
        assert_eq!(
            Permutation::empty().oplus(&Permutation::empty()),
            Err(Error::EmptyOperands("oplus"))
        );
        assert!(Permutation::empty().ominus(&Permutation::empty()).is_err());
    }

    #[test]
    fn increasing_patterns() {
        assert_eq!(Permutation::increasing(1).unwrap(), p("1"));
        assert_eq!(Permutation::increasing(2).unwrap(), p("12"));
        assert_eq!(Permutation::increasing(3).unwrap(), p("123"));
        assert_eq!(Permutation::increasing(0), Err(Error::ZeroLength));
    }

    #[test]
    fn parsing() {
        assert_eq!(p("2,1,3"), p("213"));
        assert_eq!(p(" 2 1  3 "), p("213"));
        let long: Permutation = "10 9 8 7 6 5 4 3 2 1".parse().unwrap();
        assert_eq!(long, Permutation::decreasing(10));
        assert_eq!(long.to_string(), "10 9 8 7 6 5 4 3 2 1");
        assert_eq!(long.to_string().parse::<Permutation>().unwrap(), long);
        assert!("1234567891".parse::<Permutation>().is_err());
        assert!("1,1".parse::<Permutation>().is_err());
        assert!("13".parse::<Permutation>().is_err());
        assert!("".parse::<Permutation>().is_err());
        assert!("2a1".parse::<Permutation>().is_err());
        assert_eq!("3,5,6".parse::<Occurrence>().unwrap().positions(), &[3, 5, 6]);
        assert!("3,3".parse::<Occurrence>().is_err());
        assert!("0,1".parse::<Occurrence>().is_err());
    }

    #[test]
    fn ranks_round_trip() {
        for (r, perm) in Permutation::all(5).enumerate() {
            assert_eq!(perm.rank(), r as u64);
            assert_eq!(Permutation::from_rank(5, r as u64), perm);
        }
        assert_eq!(Permutation::all(0).count(), 1);
        assert_eq!(Permutation::all(4).count(), 24);
    }

    #[test]
    fn ending_at_last() {
        let m = PatternMatcher::new(&p("132"));
        assert!(m.contains_ending_at_last(&[1, 3, 2]));
        assert!(!m.contains_ending_at_last(&[1, 3, 2, 4]));
        assert!(m.contains_ending_at_last(&[5, 1, 7, 2, 4]));
    }
}
