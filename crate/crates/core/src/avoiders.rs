//! Streams of pattern-avoiding permutations and brute-force totals
//! `S_{n,r}(q)`.
//!
//! These totals are the oracle every other module is checked against, so
//! they are computed the plain way: walk the avoiders, count occurrences in
//! each one, add up.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numbers::{binomial, factorial};
use crate::perm::{PatternMatcher, Permutation};

/// Largest length the bitmask-based streams support.
pub const MAX_STREAM_LEN: usize = 62;

pub use crate::numbers::catalan;

/// The pattern 132.
pub fn p132() -> Permutation {
    Permutation::from_vec_unchecked(vec![1, 3, 2])
}

#[derive(Debug, Clone)]
enum Mode {
    /// Prefix DFS with an exact extendability test, no dead ends.
    Avoid132,
    /// Prefix DFS pruned by the avoidance test; exponential in general.
    General(PatternMatcher),
}

#[derive(Debug, Clone, Copy)]
struct Frame {
    used: u64,
    /// Union of the open intervals `(a, b)` over pairs `a` before `b`,
    /// `a < b`, in the prefix. Only meaningful for [`Mode::Avoid132`].
    forbidden: u64,
    min: u32,
    next: u32,
}

impl Frame {
    fn root() -> Self {
        Frame { used: 0, forbidden: 0, min: u32::MAX, next: 1 }
    }
}

#[inline]
fn open_interval(a: u32, b: u32) -> u64 {
    if b <= a + 1 {
        return 0;
    }
    let upto_b = (1u64 << b) - 1;
    let upto_a = (1u64 << (a + 1)) - 1;
    upto_b & !upto_a
}

/// Every permutation of length `n` avoiding `r`, in lexicographic order.
///
/// For `r = 132` a value `v` may follow a prefix iff it lies outside every
/// interval `(a, b)` spanned by an increasing pair of the prefix, and no
/// value still to be placed falls inside the enlarged union. The second
/// check is exact: appending the smallest remaining value always keeps it
/// satisfied, so every surviving prefix completes.
#[derive(Debug, Clone)]
pub struct AvoiderStream {
    n: usize,
    avoided: Permutation,
    mode: Mode,
    prefix: Vec<u32>,
    frames: Vec<Frame>,
    full: u64,
    base: usize,
    started: bool,
    done: bool,
}

impl AvoiderStream {
    pub fn new(n: usize, avoided: &Permutation) -> Result<Self> {
        Self::with_prefix(n, avoided, &[])
    }

    /// The sub-stream of avoiders starting with `prefix`. A prefix that no
    /// avoider starts with gives an empty stream.
    pub fn with_prefix(n: usize, avoided: &Permutation, prefix: &[u32]) -> Result<Self> {
        if avoided.is_empty() {
            return Err(Error::InvalidArgument("avoided pattern must be non-empty".into()));
        }
        if n > MAX_STREAM_LEN {
            return Err(Error::GuardExceeded(format!(
                "avoider streams support n <= {MAX_STREAM_LEN}, got {n}"
            )));
        }
        if prefix.len() > n {
            return Err(Error::InvalidArgument("prefix longer than n".into()));
        }
        let mode = if *avoided == p132() {
            Mode::Avoid132
        } else {
            Mode::General(PatternMatcher::new(avoided))
        };
        let full = if n == 0 { 0 } else { ((1u64 << (n + 1)) - 1) & !1 };
        let mut stream = AvoiderStream {
            n,
            avoided: avoided.clone(),
            mode,
            prefix: Vec::with_capacity(n),
            frames: vec![Frame::root()],
            full,
            base: 0,
            started: false,
            done: false,
        };
        for &v in prefix {
            if v == 0 || v as usize > n {
                return Err(Error::InvalidArgument(format!("prefix entry {v} out of range 1..={n}")));
            }
            let frame = *stream.frames.last().unwrap();
            if frame.used & (1 << v) != 0 {
                return Err(Error::InvalidArgument(format!("prefix entry {v} repeated")));
            }
            match stream.accept(&frame, v) {
                Some(child) => {
                    stream.prefix.push(v);
                    stream.frames.push(child);
                }
                None => {
                    stream.done = true;
                    break;
                }
            }
        }
        stream.base = stream.prefix.len();
        Ok(stream)
    }

    pub fn len_param(&self) -> usize {
        self.n
    }

    pub fn avoided(&self) -> &Permutation {
        &self.avoided
    }

    /// The frame reached by appending `v`, if that keeps the prefix viable.
    fn accept(&mut self, frame: &Frame, v: u32) -> Option<Frame> {
        let bit = 1u64 << v;
        if frame.used & bit != 0 {
            return None;
        }
        let used = frame.used | bit;
        match &self.mode {
            Mode::Avoid132 => {
                if frame.forbidden & bit != 0 {
                    return None;
                }
                let forbidden = if frame.min < v {
                    frame.forbidden | open_interval(frame.min, v)
                } else {
                    frame.forbidden
                };
                if self.full & !used & forbidden != 0 {
                    return None;
                }
                Some(Frame { used, forbidden, min: frame.min.min(v), next: 1 })
            }
            Mode::General(matcher) => {
                self.prefix.push(v);
                let bad = matcher.contains_ending_at_last(&self.prefix);
                self.prefix.pop();
                (!bad).then_some(Frame { used, forbidden: 0, min: 0, next: 1 })
            }
        }
    }
}

impl Iterator for AvoiderStream {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            if self.prefix.len() == self.n {
                self.done = true;
                return Some(Permutation::from_vec_unchecked(self.prefix.clone()));
            }
        }
        let n = self.n as u32;
        loop {
            let frame = *self.frames.last().unwrap();
            let mut found = None;
            for v in frame.next..=n {
                if let Some(child) = self.accept(&frame, v) {
                    found = Some((v, child));
                    break;
                }
            }
            match found {
                Some((v, child)) => {
                    self.frames.last_mut().unwrap().next = v + 1;
                    self.prefix.push(v);
                    if self.prefix.len() == self.n {
                        let out = Permutation::from_vec_unchecked(self.prefix.clone());
                        self.prefix.pop();
                        return Some(out);
                    }
                    self.frames.push(child);
                }
                None => {
                    if self.prefix.len() == self.base {
                        self.done = true;
                        return None;
                    }
                    self.frames.pop();
                    self.prefix.pop();
                }
            }
        }
    }
}

/// Avoiders of `r` of length `n`, lexicographically.
pub fn enumerate_avoiders(n: usize, avoided: &Permutation) -> Result<AvoiderStream> {
    AvoiderStream::new(n, avoided)
}

/// Disjoint sub-streams (by first entry) whose concatenation is the full
/// stream, in order.
pub fn partitions(n: usize, avoided: &Permutation) -> Result<Vec<AvoiderStream>> {
    if n == 0 {
        return Ok(vec![AvoiderStream::new(0, avoided)?]);
    }
    (1..=n as u32)
        .map(|v| AvoiderStream::with_prefix(n, avoided, &[v]))
        .collect()
}

pub fn count_avoiders(n: usize, avoided: &Permutation) -> Result<BigUint> {
    let parts = partitions(n, avoided)?;
    Ok(parts.into_par_iter().map(|s| BigUint::from(s.count())).sum())
}

/// `S_{n,r}(q)`: occurrences of `q` summed over all `r`-avoiders of length `n`.
pub fn total_occurrences(n: usize, q: &Permutation, avoided: &Permutation) -> Result<BigUint> {
    let matcher = PatternMatcher::new(q);
    let parts = partitions(n, avoided)?;
    Ok(parts
        .into_par_iter()
        .map(|stream| {
            let sum: u128 = stream.map(|p| matcher.count_raw(p.entries()) as u128).sum();
            BigUint::from(sum)
        })
        .sum())
}

/// Totals `S_{n,r}(q)` for every `q` of length `h` in one pass, indexed by
/// [`Permutation::rank`].
pub fn totals_by_pattern(n: usize, h: usize, avoided: &Permutation) -> Result<Vec<BigUint>> {
    if h > 20 {
        return Err(Error::GuardExceeded(format!("pattern length {h} too large")));
    }
    let size = (1..=h as u64).product::<u64>() as usize;
    let mut fact = vec![1u64; h.max(1)];
    for i in 1..h {
        fact[i] = fact[i - 1] * i as u64;
    }
    let parts = partitions(n, avoided)?;
    let tallies: Vec<Vec<u128>> = parts
        .into_par_iter()
        .map(|stream| {
            let mut tally = vec![0u128; size];
            let mut picked = Vec::with_capacity(h);
            for p in stream {
                tally_subsets(p.entries(), h, 0, &mut picked, &fact, &mut tally);
            }
            tally
        })
        .collect();
    let mut out = vec![BigUint::default(); size];
    for tally in tallies {
        for (slot, c) in out.iter_mut().zip(tally) {
            *slot += BigUint::from(c);
        }
    }
    Ok(out)
}

fn tally_subsets(seq: &[u32], h: usize, start: usize, picked: &mut Vec<u32>, fact: &[u64], tally: &mut [u128]) {
    if picked.len() == h {
        let mut rank = 0u64;
        for i in 0..h {
            let smaller = picked[i + 1..].iter().filter(|&&e| e < picked[i]).count() as u64;
            rank += smaller * fact[h - 1 - i];
        }
        tally[rank as usize] += 1;
        return;
    }
    let need = h - picked.len();
    if seq.len() < need {
        return;
    }
    for i in start..=seq.len() - need {
        picked.push(seq[i]);
        tally_subsets(seq, h, i + 1, picked, fact, tally);
        picked.pop();
    }
}

/// Totals `S_{n,132}(q)` for `n` in `n_min..=n_max`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Signature {
    pub q: Permutation,
    pub n_min: usize,
    pub n_max: usize,
    pub values: Vec<BigUint>,
}

impl Signature {
    pub fn compute(q: &Permutation, n_min: usize, n_max: usize) -> Result<Self> {
        Self::compute_avoiding(q, n_min, n_max, &p132())
    }

    pub fn compute_avoiding(q: &Permutation, n_min: usize, n_max: usize, avoided: &Permutation) -> Result<Self> {
        if n_min > n_max {
            return Err(Error::InvalidArgument(format!("empty range {n_min}..{n_max}")));
        }
        let values = (n_min..=n_max)
            .map(|n| total_occurrences(n, q, avoided))
            .collect::<Result<_>>()?;
        Ok(Signature { q: q.clone(), n_min, n_max, values })
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| *v == BigUint::default())
    }
}

/// `signature(q, n_min, n_max)` over 132-avoiders.
pub fn signature(q: &Permutation, n_min: usize, n_max: usize) -> Result<Signature> {
    Signature::compute(q, n_min, n_max)
}

/// Mean number of copies of a fixed length-`k` pattern in a uniformly random
/// permutation of length `n`: `C(n,k) / k!`.
pub fn expected_random_count(n: u64, k: u64) -> Result<BigRational> {
    if k > n {
        return Err(Error::InvalidArgument(format!("k = {k} exceeds n = {n}")));
    }
    Ok(BigRational::new(BigInt::from(binomial(n, k)), BigInt::from(factorial(k))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn filtered(n: usize, r: &Permutation) -> Vec<Permutation> {
        Permutation::all(n).filter(|x| x.avoids(r)).collect()
    }

    #[test]
    fn small_streams() {
        let got: Vec<String> = enumerate_avoiders(3, &p132()).unwrap().map(|x| x.to_string()).collect();
        assert_eq!(got, ["123", "213", "231", "312", "321"]);
        let got: Vec<String> = enumerate_avoiders(2, &p132()).unwrap().map(|x| x.to_string()).collect();
        assert_eq!(got, ["12", "21"]);
        assert_eq!(enumerate_avoiders(4, &p132()).unwrap().count(), 14);
        assert_eq!(enumerate_avoiders(0, &p132()).unwrap().collect::<Vec<_>>(), vec![Permutation::empty()]);
        assert_eq!(enumerate_avoiders(1, &p132()).unwrap().count(), 1);
    }

    #[test]
    fn stream_equals_filter_in_order() {
        for n in 0..=8 {
            for r in ["132", "123", "321", "2413", "21"] {
                let r = p(r);
                let streamed: Vec<_> = enumerate_avoiders(n, &r).unwrap().collect();
                assert_eq!(streamed, filtered(n, &r), "n={n} r={r}");
            }
        }
    }

    #[test]
    fn catalan_counts() {
        for n in 0..=12 {
            assert_eq!(count_avoiders(n, &p132()).unwrap(), catalan(n as u64), "n={n}");
        }
    }

    #[test]
    fn partitions_concatenate_to_stream() {
        for n in 0..=7 {
            let whole: Vec<_> = enumerate_avoiders(n, &p132()).unwrap().collect();
            let parts: Vec<_> = partitions(n, &p132()).unwrap().into_iter().flatten().collect();
            assert_eq!(whole, parts);
        }
    }

    #[test]
    fn prefixes() {
        let s: Vec<String> = AvoiderStream::with_prefix(3, &p132(), &[1, 3]).unwrap().map(|x| x.to_string()).collect();
        assert!(s.is_empty());
        let s: Vec<String> = AvoiderStream::with_prefix(3, &p132(), &[2, 3, 1]).unwrap().map(|x| x.to_string()).collect();
        assert_eq!(s, ["231"]);
        assert!(AvoiderStream::with_prefix(3, &p132(), &[4]).is_err());
        assert!(AvoiderStream::with_prefix(3, &p132(), &[1, 1]).is_err());
        assert!(AvoiderStream::new(3, &Permutation::empty()).is_err());
        assert!(AvoiderStream::new(63, &p132()).is_err());
    }

    #[test]
    fn totals() {
        assert_eq!(total_occurrences(3, &p("213"), &p132()).unwrap(), BigUint::from(1u32));
        assert_eq!(total_occurrences(3, &p("231"), &p132()).unwrap(), BigUint::from(1u32));
        assert_eq!(total_occurrences(4, &p("213"), &p132()).unwrap(), BigUint::from(11u32));
        for n in 0..=8 {
            assert_eq!(total_occurrences(n, &p132(), &p132()).unwrap(), BigUint::default());
        }
    }

    #[test]
    fn signatures() {
        let s = signature(&p("213"), 3, 4).unwrap();
        assert_eq!(s.values, vec![BigUint::from(1u32), BigUint::from(11u32)]);
        assert!(signature(&p("132"), 3, 6).unwrap().is_zero());
        assert_eq!(signature(&p("123"), 3, 3).unwrap().values, vec![BigUint::from(1u32)]);
        assert!(signature(&p("123"), 4, 3).is_err());
        // below the pattern length everything is zero
        let s = signature(&p("2134"), 1, 4).unwrap();
        assert_eq!(s.values[..3], [BigUint::default(), BigUint::default(), BigUint::default()]);
    }

    #[test]
    fn totals_by_pattern_agree_with_single_totals() {
        for n in 0..=7 {
            for h in 1..=4 {
                let all = totals_by_pattern(n, h, &p132()).unwrap();
                for q in Permutation::all(h) {
                    assert_eq!(all[q.rank() as usize], total_occurrences(n, &q, &p132()).unwrap());
                }
            }
        }
    }

    #[test]
    fn expected_counts() {
        let e = expected_random_count(3, 3).unwrap();
        assert_eq!(e, BigRational::new(1.into(), 6.into()));
        let e = expected_random_count(4, 3).unwrap();
        assert_eq!(e, BigRational::new(2.into(), 3.into()));
        for k in 0..8u64 {
            let e = expected_random_count(k, k).unwrap();
            assert_eq!(e.recip().to_integer().to_u64().unwrap(), (1..=k).product::<u64>().max(1));
        }
        assert!(expected_random_count(2, 3).is_err());
    }

    #[test]
    fn expectation_matches_all_permutations() {
        // summing a pattern's count over S_n gives n! * C(n,k) / k!
        let q = p("231");
        for n in 3..=6 {
            let total: u64 = Permutation::all(n)
                .map(|x| x.count_occurrences(&q).to_u64().unwrap())
                .sum();
            let e = expected_random_count(n as u64, 3).unwrap() * BigRational::from(BigInt::from(factorial(n as u64)));
            assert_eq!(e, BigRational::from(BigInt::from(total)));
        }
    }
}
