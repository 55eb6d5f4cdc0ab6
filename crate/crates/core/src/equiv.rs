//! Pattern equivalence search: group patterns of one length by their totals
//! over 132-avoiders and name the mechanism behind an equality.
//!
//! All results are finite-range evidence; a class only records agreement on
//! the tested `n`.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use num_bigint::BigUint;

use crate::avoiders::{p132, partitions, totals_by_pattern, Signature};
use crate::bijection::{Guard, PatternPair};
use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Default search limits.
pub const MAX_SEARCH_H: usize = 6;
pub const MAX_SEARCH_N: usize = 12;

fn check_search(guard: Guard, h: usize, n_max: usize) -> Result<()> {
    if h == 0 {
        return Err(Error::InvalidArgument("pattern length must be at least 1".into()));
    }
    if h > 9 || n_max > Guard::ABSOLUTE_MAX_N {
        return Err(Error::GuardExceeded(format!("h = {h}, n = {n_max} beyond hard limits (9, {})", Guard::ABSOLUTE_MAX_N)));
    }
    if (h > MAX_SEARCH_H || n_max > MAX_SEARCH_N) && !guard.allow_large {
        return Err(Error::GuardExceeded(format!(
            "h = {h}, n = {n_max} exceeds h <= {MAX_SEARCH_H}, n <= {MAX_SEARCH_N}; override to force"
        )));
    }
    Ok(())
}

/// Default signature range `[h, h+4]`.
pub fn default_range(h: usize) -> (usize, usize) {
    (h, h + 4)
}

/// Patterns of length `h` sharing one signature.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivClass {
    /// Sorted lexicographically.
    pub members: Vec<Permutation>,
    /// Signature of the first member.
    pub signature: Signature,
}

impl EquivClass {
    /// All-zero signature: every member contains 132, or the range is too short.
    pub fn is_degenerate(&self) -> bool {
        self.signature.is_zero()
    }

    pub fn contains(&self, q: &Permutation) -> bool {
        self.members.binary_search(q).is_ok()
    }
}

/// Partition all `h!` patterns by their totals for `n_min..=n_max`.
///
/// Classes come out ordered by their smallest member.
pub fn classify_patterns(h: usize, n_min: usize, n_max: usize, guard: Guard) -> Result<Vec<EquivClass>> {
    if n_min > n_max {
        return Err(Error::InvalidArgument(format!("empty range {n_min}..{n_max}")));
    }
    check_search(guard, h, n_max)?;
    let size: usize = (1..=h).product();
    let mut columns: Vec<Vec<BigUint>> = vec![Vec::with_capacity(n_max - n_min + 1); size];
    for n in n_min..=n_max {
        for (col, v) in columns.iter_mut().zip(totals_by_pattern(n, h, &p132())?) {
            col.push(v);
        }
    }
    let mut groups: BTreeMap<Vec<BigUint>, Vec<Permutation>> = BTreeMap::new();
    for (rank, col) in columns.into_iter().enumerate() {
        groups.entry(col).or_default().push(Permutation::from_rank(h, rank as u64));
    }
    let mut classes: Vec<EquivClass> = groups
        .into_iter()
        .map(|(values, members)| EquivClass {
            signature: Signature { q: members[0].clone(), n_min, n_max, values },
            members,
        })
        .collect();
    classes.sort_by(|a, b| a.members[0].cmp(&b.members[0]));
    Ok(classes)
}

/// One pair of side patterns with the `(q, t, u)` that produces it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoremPair {
    pub a: Permutation,
    pub b: Permutation,
    pub witness: PatternPair,
}

fn avoiders_ending_in_max(len: usize) -> Result<Vec<Permutation>> {
    let mut out = Vec::new();
    for stream in partitions(len, &p132())? {
        out.extend(stream.filter(|p| p.ends_in_max()));
    }
    Ok(out)
}

/// Every pair `{(q ⊖ t) ⊕ i_u, (q ⊕ i_u) ⊖ t}` of length `h` with `q`, `t`
/// 132-avoiding and ending in their largest entry.
///
/// Ordered by `u`, then `|q|`, then `q` and `t`. A pair reached twice keeps
/// its first witness.
pub fn theorem_pairs(h: usize) -> Result<Vec<TheoremPair>> {
    if h < 3 {
        return Err(Error::InvalidArgument(format!("pairs need length at least 3, got {h}")));
    }
    if h > 12 {
        return Err(Error::GuardExceeded(format!("pattern length {h} above 12")));
    }
    let by_len: Vec<Vec<Permutation>> = (0..h).map(avoiders_ending_in_max).collect::<Result<_>>()?;
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for u in 1..=h - 2 {
        for k in 1..=h - u - 1 {
            let m = h - u - k;
            for q in &by_len[k] {
                for t in &by_len[m] {
                    let witness = PatternPair::new(q.clone(), t.clone(), u)?;
                    let (a, b) = (witness.a_side(), witness.b_side());
                    let key = if a < b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
                    if seen.insert(key) {
                        out.push(TheoremPair { a, b, witness });
                    }
                }
            }
        }
    }
    Ok(out)
}

/// `((q ⊕ i_v) ⊖ t) ⊕ i_{u-v}` for `0 <= v <= u`. The ends are the two
/// sides of the pair.
pub fn corollary_pattern(pair: &PatternPair, v: usize) -> Result<Permutation> {
    let u = pair.u();
    if v > u {
        return Err(Error::InvalidArgument(format!("v = {v} exceeds u = {u}")));
    }
    let inc = |len: usize| if len == 0 { Ok(Permutation::empty()) } else { Permutation::increasing(len) };
    pair.q().oplus(&inc(v)?)?.ominus(pair.t())?.oplus(&inc(u - v)?)
}

/// Why two patterns have equal totals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Explanation {
    /// The patterns are equal.
    Identical,
    /// One is the inverse of the other.
    InverseTrivial,
    /// The two sides of one `(q, t, u)`.
    TheoremGeneral { witness: PatternPair },
    /// `((q ⊕ i_v) ⊖ t) ⊕ i_{u-v}` for two values of `v`, not both ends.
    Corollary { witness: PatternPair, v: usize, v2: usize },
    /// Both contain 132, so both totals vanish.
    Degenerate,
    /// A path of the above steps.
    Chained(Vec<ChainStep>),
    Unexplained,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainStep {
    pub from: Permutation,
    pub to: Permutation,
    pub reason: Explanation,
}

impl Explanation {
    pub fn tag(&self) -> &'static str {
        match self {
            Explanation::Identical => "identical",
            Explanation::InverseTrivial => "inverse-trivial",
            Explanation::TheoremGeneral { .. } => "theorem-general",
            Explanation::Corollary { .. } => "corollary",
            Explanation::Degenerate => "degenerate",
            Explanation::Chained(_) => "chained",
            Explanation::Unexplained => "unexplained",
        }
    }

    pub fn is_explained(&self) -> bool {
        !matches!(self, Explanation::Unexplained)
    }
}

impl fmt::Display for Explanation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Explanation::TheoremGeneral { witness } => {
                write!(f, "theorem-general q={} t={} u={}", witness.q(), witness.t(), witness.u())
            }
            Explanation::Corollary { witness, v, v2 } => write!(
                f,
                "corollary q={} t={} u={} v={v},{v2}",
                witness.q(),
                witness.t(),
                witness.u()
            ),
            Explanation::Chained(steps) => {
                write!(f, "chained")?;
                for s in steps {
                    write!(f, " [{} -> {}: {}]", s.from, s.to, s.reason)?;
                }
                Ok(())
            }
            other => f.write_str(other.tag()),
        }
    }
}

/// Result of [`explain_pair`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairExplanation {
    pub q: Permutation,
    pub q2: Permutation,
    pub n_min: usize,
    pub n_max: usize,
    pub explanation: Explanation,
}

/// Known equalities among patterns of one length.
pub struct Mechanisms {
    h: usize,
    pairs: Vec<TheoremPair>,
    /// Corollary families with `u >= 2`, as `(witness, patterns by v)`.
    families: Vec<(PatternPair, Vec<Permutation>)>,
}

impl Mechanisms {
    pub fn new(h: usize) -> Result<Self> {
        let pairs = if h >= 3 { theorem_pairs(h)? } else { Vec::new() };
        let mut families = Vec::new();
        for tp in &pairs {
            if tp.witness.u() >= 2 {
                let fam = (0..=tp.witness.u())
                    .map(|v| corollary_pattern(&tp.witness, v))
                    .collect::<Result<Vec<_>>>()?;
                families.push((tp.witness.clone(), fam));
            }
        }
        Ok(Mechanisms { h, pairs, families })
    }

    pub fn pairs(&self) -> &[TheoremPair] {
        &self.pairs
    }

    /// A single mechanism linking `q` and `q2`, without chaining.
    fn direct(&self, q: &Permutation, q2: &Permutation) -> Option<Explanation> {
        if q == q2 {
            return Some(Explanation::Identical);
        }
        if &q.inverse() == q2 {
            return Some(Explanation::InverseTrivial);
        }
        for tp in &self.pairs {
            if (&tp.a == q && &tp.b == q2) || (&tp.b == q && &tp.a == q2) {
                return Some(Explanation::TheoremGeneral { witness: tp.witness.clone() });
            }
        }
        for (witness, fam) in &self.families {
            let v = fam.iter().position(|p| p == q);
            let v2 = fam.iter().position(|p| p == q2);
            if let (Some(v), Some(v2)) = (v, v2) {
                return Some(Explanation::Corollary { witness: witness.clone(), v, v2 });
            }
        }
        let pat = p132();
        if q.contains(&pat) && q2.contains(&pat) {
            return Some(Explanation::Degenerate);
        }
        None
    }

    fn neighbours(&self, p: &Permutation) -> Vec<Permutation> {
        let mut out = vec![p.inverse()];
        for tp in &self.pairs {
            if &tp.a == p {
                out.push(tp.b.clone());
            } else if &tp.b == p {
                out.push(tp.a.clone());
            }
        }
        for (_, fam) in &self.families {
            if fam.contains(p) {
                out.extend(fam.iter().filter(|x| *x != p).cloned());
            }
        }
        out
    }

    /// Explain `q = q2` by the first matching mechanism, then by the
    /// shortest chain. Signatures are not checked here.
    pub fn explain(&self, q: &Permutation, q2: &Permutation) -> Explanation {
        if q.len() != self.h || q2.len() != self.h {
            return Explanation::Unexplained;
        }
        if let Some(e) = self.direct(q, q2) {
            return e;
        }
        let mut prev: HashMap<Permutation, Permutation> = HashMap::new();
        let mut queue = VecDeque::from([q.clone()]);
        prev.insert(q.clone(), q.clone());
        while let Some(p) = queue.pop_front() {
            if &p == q2 {
                let mut path = vec![p.clone()];
                while path.last() != Some(q) {
                    let back = prev[path.last().unwrap()].clone();
                    path.push(back);
                }
                path.reverse();
                let steps = path
                    .windows(2)
                    .map(|w| ChainStep {
                        from: w[0].clone(),
                        to: w[1].clone(),
                        reason: self.direct(&w[0], &w[1]).expect("edge has a mechanism"),
                    })
                    .collect();
                return Explanation::Chained(steps);
            }
            for n in self.neighbours(&p) {
                if !prev.contains_key(&n) {
                    prev.insert(n.clone(), p.clone());
                    queue.push_back(n);
                }
            }
        }
        Explanation::Unexplained
    }
}

/// Check that `q` and `q2` have equal totals on `n_min..=n_max`, then
/// explain the equality.
pub fn explain_pair(q: &Permutation, q2: &Permutation, n_min: usize, n_max: usize, guard: Guard) -> Result<PairExplanation> {
    if q.len() != q2.len() {
        return Err(Error::InvalidArgument(format!("lengths differ: {q} and {q2}")));
    }
    if n_min > n_max {
        return Err(Error::InvalidArgument(format!("empty range {n_min}..{n_max}")));
    }
    check_search(guard, q.len().min(MAX_SEARCH_H), n_max)?;
    let s1 = Signature::compute(q, n_min, n_max)?;
    let s2 = Signature::compute(q2, n_min, n_max)?;
    if s1.values != s2.values {
        return Err(Error::NotEquivalent(q.to_string(), q2.to_string()));
    }
    let explanation = Mechanisms::new(q.len())?.explain(q, q2);
    Ok(PairExplanation { q: q.clone(), q2: q2.clone(), n_min, n_max, explanation })
}

/// Explain every member of a class against its first member.
pub fn explain_class(class: &EquivClass, mechanisms: &Mechanisms) -> Vec<PairExplanation> {
    let first = &class.members[0];
    class.members[1..]
        .iter()
        .map(|m| PairExplanation {
            q: first.clone(),
            q2: m.clone(),
            n_min: class.signature.n_min,
            n_max: class.signature.n_max,
            explanation: mechanisms.explain(first, m),
        })
        .collect()
}
