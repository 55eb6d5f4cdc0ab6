//! Colored plane trees and the subtree-swapping bijections between copies
//! of `(q ⊖ t) ⊕ i_u` and copies of `(q ⊕ i_u) ⊖ t` in 132-avoiders.
//!
//! A colored tree is a tree `T(p)` with `h = k + m + u` black nodes whose
//! entries form the side pattern. The A side carries `(q ⊖ t) ⊕ i_u`, the B
//! side `(q ⊕ i_u) ⊖ t`. [`apply_f`] is the three-letter map (213 to 231),
//! written from its own case description; [`GeneralBijection`] is the map
//! for arbitrary `q`, `t` ending in their largest entries.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::avoiders::{p132, partitions, total_occurrences};
use crate::error::{Error, Result};
use crate::perm::{Occurrence, PatternMatcher, Permutation};
use crate::tree::{perm_to_tree, BinaryPlaneTree};

/// Block sizes `(k, m, u)` of the black vertices, left to right.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Decomposition {
    pub k: usize,
    pub m: usize,
    pub u: usize,
}

impl Decomposition {
    pub fn new(k: usize, m: usize, u: usize) -> Result<Self> {
        if k == 0 || m == 0 || u == 0 {
            return Err(Error::InvalidArgument(format!("k, m, u must be positive, got {k},{m},{u}")));
        }
        Ok(Decomposition { k, m, u })
    }

    pub fn total(&self) -> usize {
        self.k + self.m + self.u
    }
}

impl fmt::Display for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.k, self.m, self.u)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    A,
    B,
}

/// The data `(q, t, u)` behind a pair of equinumerous patterns.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PatternPair {
    q: Permutation,
    t: Permutation,
    u: usize,
}

impl PatternPair {
    pub fn new(q: Permutation, t: Permutation, u: usize) -> Result<Self> {
        for pat in [&q, &t] {
            if !pat.ends_in_max() {
                return Err(Error::NotEndingInMax(pat.to_string()));
            }
        }
        if u == 0 {
            return Err(Error::ZeroLength);
        }
        Ok(PatternPair { q, t, u })
    }

    /// `q = t = 1`, `u = 1`: the 213 / 231 pair.
    pub fn basic() -> Self {
        let one = Permutation::identity(1);
        PatternPair { q: one.clone(), t: one, u: 1 }
    }

    pub fn q(&self) -> &Permutation {
        &self.q
    }

    pub fn t(&self) -> &Permutation {
        &self.t
    }

    pub fn u(&self) -> usize {
        self.u
    }

    /// `(q ⊖ t) ⊕ i_u`
    pub fn a_side(&self) -> Permutation {
        let inc = Permutation::identity(self.u);
        self.q.ominus(&self.t).and_then(|s| s.oplus(&inc)).expect("operands are non-empty")
    }

    /// `(q ⊕ i_u) ⊖ t`
    pub fn b_side(&self) -> Permutation {
        let inc = Permutation::identity(self.u);
        self.q.oplus(&inc).and_then(|s| s.ominus(&self.t)).expect("operands are non-empty")
    }

    pub fn side(&self, side: Side) -> Permutation {
        match side {
            Side::A => self.a_side(),
            Side::B => self.b_side(),
        }
    }

    pub fn decomposition(&self) -> Decomposition {
        Decomposition { k: self.q.len(), m: self.t.len(), u: self.u }
    }
}

/// A plane tree with an increasing list of black nodes (in-order indices).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ColoredTree {
    tree: BinaryPlaneTree,
    black: Vec<usize>,
    decomposition: Decomposition,
}

impl ColoredTree {
    pub fn new(tree: BinaryPlaneTree, mut black: Vec<usize>, decomposition: Decomposition) -> Result<Self> {
        black.sort_unstable();
        if black.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidColoring("black nodes repeated".into()));
        }
        if black.last().is_some_and(|&b| b >= tree.len()) {
            return Err(Error::InvalidColoring(format!("black node out of range for {} nodes", tree.len())));
        }
        if black.len() != decomposition.total() {
            return Err(Error::InvalidColoring(format!(
                "{} black nodes but decomposition {decomposition} needs {}",
                black.len(),
                decomposition.total()
            )));
        }
        Ok(ColoredTree { tree, black, decomposition })
    }

    pub fn tree(&self) -> &BinaryPlaneTree {
        &self.tree
    }

    /// Black nodes in in-order (0-based).
    pub fn black(&self) -> &[usize] {
        &self.black
    }

    pub fn decomposition(&self) -> Decomposition {
        self.decomposition
    }

    pub fn permutation(&self) -> Permutation {
        self.tree.to_permutation()
    }

    /// The pattern formed by the black entries.
    pub fn black_pattern(&self) -> Permutation {
        let labels = self.tree.entry_labels();
        let vals: Vec<u32> = self.black.iter().map(|&b| labels.label(b)).collect();
        Permutation::standardize(&vals)
    }

    /// Black nodes as a 1-based occurrence in [`ColoredTree::permutation`].
    pub fn occurrence(&self) -> Occurrence {
        Occurrence::new(self.black.iter().map(|b| b + 1).collect()).expect("black nodes are increasing")
    }

    fn expect_pattern(&self, decomposition: Decomposition, pattern: &Permutation) -> Result<()> {
        if self.decomposition != decomposition {
            return Err(Error::InvalidColoring(format!(
                "decomposition {} does not match {decomposition}",
                self.decomposition
            )));
        }
        let found = self.black_pattern();
        if found != *pattern {
            return Err(Error::PatternMismatch { expected: pattern.to_string(), found: found.to_string() });
        }
        Ok(())
    }

    /// Packs the permutation and the black set into one integer key.
    fn key(&self) -> u128 {
        let labels = self.tree.entry_labels();
        let mut key = 0u128;
        for &l in &labels.labels {
            key = (key << 5) | l as u128;
        }
        let mut mask = 0u128;
        for &b in &self.black {
            mask |= 1 << b;
        }
        (key << 20) | mask
    }

    /// Whether one black node is an ancestor of every other black node.
    pub fn has_black_apex(&self) -> bool {
        self.black
            .iter()
            .any(|&x| self.black.iter().all(|&y| y == x || self.tree.is_ancestor(x, y)))
    }
}

impl fmt::Display for ColoredTree {
    /// `tree;black indices (1-based);k,m,u`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let black: Vec<String> = self.black.iter().map(|b| (b + 1).to_string()).collect();
        write!(f, "{};{};{}", self.tree, black.join(","), self.decomposition)
    }
}

impl FromStr for ColoredTree {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = |msg: String| Error::Parse { what: "colored tree", msg };
        let parts: Vec<&str> = s.split(';').collect();
        let [tree, black, kmu] = parts[..] else {
            return Err(err(format!("expected three ';'-separated fields, got {}", parts.len())));
        };
        let tree: BinaryPlaneTree = tree.parse()?;
        let black: Occurrence = black.parse()?;
        let sizes: Vec<usize> = kmu
            .split(',')
            .map(|x| x.trim().parse::<usize>().map_err(|e| err(format!("{x:?}: {e}"))))
            .collect::<Result<_>>()?;
        let [k, m, u] = sizes[..] else {
            return Err(err("decomposition needs exactly k,m,u".into()));
        };
        let black = black.positions().iter().map(|b| b - 1).collect();
        ColoredTree::new(tree, black, Decomposition::new(k, m, u)?)
    }
}

/// Color the nodes of `T(p)` at the positions of `occ`, which must be an
/// occurrence of the chosen side pattern of `pair`.
pub fn make_colored(p: &Permutation, occ: &Occurrence, pair: &PatternPair, side: Side) -> Result<ColoredTree> {
    let tree = perm_to_tree(p)?;
    let expected = pair.side(side);
    let found = Permutation::standardize(&occ.values(p)?);
    if found != expected {
        return Err(Error::PatternMismatch { expected: expected.to_string(), found: found.to_string() });
    }
    let black = occ.positions().iter().map(|i| i - 1).collect();
    ColoredTree::new(tree, black, pair.decomposition())
}

/// Which rule of the map applies to an A-side colored tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseTag {
    /// `Q_a` is a right descendant of `Q_b`.
    Case1,
    /// `pivot` is the lowest node with `Q_b` on its left and `Q_a` on its right.
    Case2 { pivot: usize },
}

fn map_black(map: &[usize], black: impl IntoIterator<Item = usize>) -> Vec<usize> {
    let mut out: Vec<usize> = black.into_iter().map(|b| map[b]).collect();
    out.sort_unstable();
    out
}

fn basic_decomposition() -> Decomposition {
    Decomposition { k: 1, m: 1, u: 1 }
}

/// The 213-to-231 map.
///
/// With black nodes `Q_2, Q_1, Q_3` in in-order: if `Q_1` is a right
/// descendant of `Q_2` and `Q_2` a left descendant of `Q_3`, swap the right
/// subtrees of `Q_2` and `Q_3`. Otherwise take the lowest left descendant
/// `Q_x` of `Q_3` having `Q_2` on its left and `Q_1` on its right, swap the
/// right subtrees of `Q_x` and `Q_3`, and blacken `Q_x` in place of `Q_3`.
pub fn apply_f(ct: &ColoredTree) -> Result<ColoredTree> {
    let pat213 = Permutation::from_vec_unchecked(vec![2, 1, 3]);
    let pat231 = Permutation::from_vec_unchecked(vec![2, 3, 1]);
    ct.expect_pattern(basic_decomposition(), &pat213)?;
    let tree = &ct.tree;
    let [q2, q1, q3] = ct.black[..] else { unreachable!() };
    let image = if tree.is_right_descendant(q1, q2) && tree.is_left_descendant(q2, q3) {
        let (swapped, map) = tree.swap_right_subtrees(q2, q3)?;
        ColoredTree { tree: swapped, black: map_black(&map, [q2, q1, q3]), decomposition: ct.decomposition }
    } else {
        let qx = (0..tree.len())
            .filter(|&x| {
                tree.is_left_descendant(x, q3) && tree.is_left_descendant(q2, x) && tree.is_right_descendant(q1, x)
            })
            .min_by_key(|&x| tree.subtree_size(x))
            .ok_or_else(|| Error::Structural(format!("no pivot below Q_3 in {ct}")))?;
        let (swapped, map) = tree.swap_right_subtrees(qx, q3)?;
        ColoredTree { tree: swapped, black: map_black(&map, [q2, qx, q1]), decomposition: ct.decomposition }
    };
    image.expect_pattern(basic_decomposition(), &pat231)?;
    Ok(image)
}

/// Inverse of [`apply_f`], from a 231-colored tree with black nodes
/// `K_2, K_3, K_1` in in-order.
pub fn apply_f_inverse(ct: &ColoredTree) -> Result<ColoredTree> {
    let pat213 = Permutation::from_vec_unchecked(vec![2, 1, 3]);
    let pat231 = Permutation::from_vec_unchecked(vec![2, 3, 1]);
    ct.expect_pattern(basic_decomposition(), &pat231)?;
    let tree = &ct.tree;
    let [k2, k3, k1] = ct.black[..] else { unreachable!() };
    let image = if tree.is_ancestor(k3, k2) && tree.is_ancestor(k3, k1) {
        let (swapped, map) = tree.swap_right_subtrees(k3, k2)?;
        ColoredTree { tree: swapped, black: map_black(&map, [k2, k3, k1]), decomposition: ct.decomposition }
    } else {
        let kx = tree.lowest_common_ancestor(k3, k1);
        let (swapped, map) = tree.swap_right_subtrees(k3, kx)?;
        ColoredTree { tree: swapped, black: map_black(&map, [k2, kx, k1]), decomposition: ct.decomposition }
    };
    image.expect_pattern(basic_decomposition(), &pat213)?;
    Ok(image)
}

/// The map from A-side to B-side colored trees for a fixed [`PatternPair`].
///
/// Let `Q_b`, `Q_a`, `Q_c` be the `k`-th, `(k+m)`-th and last black nodes.
/// Case 1 swaps the right subtrees of `Q_b` and `Q_c`; Case 2 swaps those
/// of the pivot and `Q_c` and moves the black color from `Q_c` to the pivot.
#[derive(Debug, Clone)]
pub struct GeneralBijection {
    pair: PatternPair,
    a_pattern: Permutation,
    b_pattern: Permutation,
    decomposition: Decomposition,
}

impl GeneralBijection {
    pub fn new(pair: PatternPair) -> Self {
        GeneralBijection {
            a_pattern: pair.a_side(),
            b_pattern: pair.b_side(),
            decomposition: pair.decomposition(),
            pair,
        }
    }

    pub fn pair(&self) -> &PatternPair {
        &self.pair
    }

    pub fn a_pattern(&self) -> &Permutation {
        &self.a_pattern
    }

    pub fn b_pattern(&self) -> &Permutation {
        &self.b_pattern
    }

    pub fn classify(&self, ct: &ColoredTree) -> Result<CaseTag> {
        ct.expect_pattern(self.decomposition, &self.a_pattern)?;
        self.classify_unchecked(ct)
    }

    fn classify_unchecked(&self, ct: &ColoredTree) -> Result<CaseTag> {
        let Decomposition { k, m, .. } = self.decomposition;
        let tree = &ct.tree;
        let (qb, qa) = (ct.black[k - 1], ct.black[k + m - 1]);
        if tree.is_right_descendant(qa, qb) {
            return Ok(CaseTag::Case1);
        }
        let pivot = tree.lowest_common_ancestor(qb, qa);
        if !(tree.is_left_descendant(qb, pivot) && tree.is_right_descendant(qa, pivot)) {
            return Err(Error::Structural(format!("neither case applies to {ct}")));
        }
        if ct.black.binary_search(&pivot).is_ok() {
            return Err(Error::Structural(format!("pivot {} is black in {ct}", pivot + 1)));
        }
        Ok(CaseTag::Case2 { pivot })
    }

    pub fn forward(&self, ct: &ColoredTree) -> Result<ColoredTree> {
        self.forward_traced(ct).map(|(image, _, _)| image)
    }

    /// Forward map, also returning the case and the old-to-new node map.
    fn forward_traced(&self, ct: &ColoredTree) -> Result<(ColoredTree, CaseTag, Vec<usize>)> {
        ct.expect_pattern(self.decomposition, &self.a_pattern)?;
        let case = self.classify_unchecked(ct)?;
        let qc = *ct.black.last().unwrap();
        let (tree, map, black) = match case {
            CaseTag::Case1 => {
                let qb = ct.black[self.decomposition.k - 1];
                let (tree, map) = ct.tree.swap_right_subtrees(qb, qc)?;
                let black = map_black(&map, ct.black.iter().copied());
                (tree, map, black)
            }
            CaseTag::Case2 { pivot } => {
                let (tree, map) = ct.tree.swap_right_subtrees(pivot, qc)?;
                let recolored = ct.black.iter().copied().filter(|&b| b != qc).chain([pivot]);
                let black = map_black(&map, recolored);
                (tree, map, black)
            }
        };
        let image = ColoredTree { tree, black, decomposition: self.decomposition };
        image.expect_pattern(self.decomposition, &self.b_pattern)?;
        Ok((image, case, map))
    }

    pub fn inverse(&self, ct: &ColoredTree) -> Result<ColoredTree> {
        ct.expect_pattern(self.decomposition, &self.b_pattern)?;
        let Decomposition { k, u, .. } = self.decomposition;
        let (tree, black) = if ct.has_black_apex() {
            let (ub, uc) = (ct.black[k - 1], ct.black[k + u - 1]);
            let (tree, map) = ct.tree.swap_right_subtrees(ub, uc)?;
            let black = map_black(&map, ct.black.iter().copied());
            (tree, black)
        } else {
            let ux = ct.black[k];
            let ua = *ct.black.last().unwrap();
            let uc = ct.tree.lowest_common_ancestor(ux, ua);
            let (tree, map) = ct.tree.swap_right_subtrees(ux, uc)?;
            let recolored = ct.black.iter().copied().filter(|&b| b != ux).chain([uc]);
            (tree, map_black(&map, recolored))
        };
        let image = ColoredTree { tree, black, decomposition: self.decomposition };
        image.expect_pattern(self.decomposition, &self.a_pattern)?;
        Ok(image)
    }
}

/// Outcome of an exhaustive check of a bijection at one length `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BijectionReport {
    pub n: usize,
    pub pair: PatternPair,
    pub a_pattern: Permutation,
    pub b_pattern: Permutation,
    /// `|A_n|` and `|B_n|` counted by listing colored trees.
    pub a_count: BigUint,
    pub b_count: BigUint,
    /// `S_{n,132}` of each side pattern from brute-force totals.
    pub a_expected: BigUint,
    pub b_expected: BigUint,
    pub case1: BigUint,
    pub case2: BigUint,
    /// Every image is a valid B-side colored tree.
    pub image_in_b: bool,
    pub injective: bool,
    pub surjective: bool,
    /// `F⁻¹(F(x)) = x` on A_n.
    pub round_trip_a: bool,
    /// `F(F⁻¹(y)) = y` on B_n.
    pub round_trip_b: bool,
    /// Left subtrees of the first `k + m` black nodes are unchanged.
    pub left_subtrees_preserved: bool,
    /// Case 1 images have a black apex, Case 2 images do not.
    pub apex_property: bool,
    /// In Case 1, `Q_b` is also a left descendant of `Q_c`.
    pub case1_left_clause: bool,
    /// For `q = t = u = 1` only: the general map agrees with [`apply_f`].
    pub agrees_with_f: Option<bool>,
    /// Up to [`MAX_WITNESSES`] counterexamples, sorted.
    pub failures: Vec<String>,
}

pub const MAX_WITNESSES: usize = 10;

impl BijectionReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
            && self.a_count == self.a_expected
            && self.b_count == self.b_expected
            && self.a_count == self.b_count
            && self.image_in_b
            && self.injective
            && self.surjective
            && self.round_trip_a
            && self.round_trip_b
            && self.left_subtrees_preserved
            && self.apex_property
            && self.case1_left_clause
            && self.agrees_with_f != Some(false)
    }
}

/// Size limits for exhaustive runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Guard {
    pub allow_large: bool,
}

impl Guard {
    pub const DEFAULT: Guard = Guard { allow_large: false };
    /// Hard limit from the packed image keys.
    pub const ABSOLUTE_MAX_N: usize = 20;

    fn check_bijection(&self, n: usize, pattern_len: usize) -> Result<()> {
        if n > Self::ABSOLUTE_MAX_N {
            return Err(Error::GuardExceeded(format!("n = {n} exceeds {}", Self::ABSOLUTE_MAX_N)));
        }
        let limit = if pattern_len <= 3 { 12 } else { 11 };
        if n > limit && !self.allow_large {
            return Err(Error::GuardExceeded(format!(
                "n = {n} exceeds {limit} for patterns of length {pattern_len}; override to force"
            )));
        }
        Ok(())
    }
}

impl Default for Guard {
    fn default() -> Self {
        Guard::DEFAULT
    }
}

#[derive(Default)]
struct SideTally {
    count: u64,
    case1: u64,
    case2: u64,
    image_in_other: bool,
    round_trip: bool,
    left_preserved: bool,
    apex: bool,
    left_clause: bool,
    agrees_with_f: bool,
    keys: Vec<u128>,
    failures: Vec<String>,
}

impl SideTally {
    fn new() -> Self {
        SideTally {
            image_in_other: true,
            round_trip: true,
            left_preserved: true,
            apex: true,
            left_clause: true,
            agrees_with_f: true,
            ..Default::default()
        }
    }

    fn fail(&mut self, msg: String) {
        if self.failures.len() < MAX_WITNESSES {
            self.failures.push(msg);
        }
    }

    fn merge(mut self, other: SideTally) -> SideTally {
        self.count += other.count;
        self.case1 += other.case1;
        self.case2 += other.case2;
        self.image_in_other &= other.image_in_other;
        self.round_trip &= other.round_trip;
        self.left_preserved &= other.left_preserved;
        self.apex &= other.apex;
        self.left_clause &= other.left_clause;
        self.agrees_with_f &= other.agrees_with_f;
        self.keys.extend(other.keys);
        self.failures.extend(other.failures);
        self
    }
}

/// Every colored tree on one side, streamed per avoider partition.
fn colored_trees_of(stream: crate::avoiders::AvoiderStream, matcher: &PatternMatcher, dec: Decomposition) -> impl Iterator<Item = ColoredTree> + '_ {
    stream.flat_map(move |p| {
        let tree = perm_to_tree(&p).expect("stream yields avoiders");
        let occs: Vec<Occurrence> = crate::perm::Occurrences::new(p.entries(), matcher.clone()).collect();
        occs.into_iter().map(move |o| ColoredTree {
            tree: tree.clone(),
            black: o.positions().iter().map(|i| i - 1).collect(),
            decomposition: dec,
        })
    })
}

/// Exhaustively check the bijection for `pair` on trees with `n` nodes.
pub fn verify_bijection(n: usize, pair: &PatternPair, guard: Guard) -> Result<BijectionReport> {
    let bij = GeneralBijection::new(pair.clone());
    let dec = bij.decomposition;
    guard.check_bijection(n, dec.total())?;
    let basic = *pair == PatternPair::basic();
    let first_blocks = dec.k + dec.m;

    let a_matcher = PatternMatcher::new(&bij.a_pattern);
    let forward = partitions(n, &p132())?
        .into_par_iter()
        .map(|stream| {
            let mut tally = SideTally::new();
            for ct in colored_trees_of(stream, &a_matcher, dec) {
                tally.count += 1;
                let (image, case, map) = match bij.forward_traced(&ct) {
                    Ok(x) => x,
                    Err(e) => {
                        tally.image_in_other = false;
                        tally.fail(format!("F({ct}): {e}"));
                        continue;
                    }
                };
                tally.keys.push(image.key());
                match case {
                    CaseTag::Case1 => {
                        tally.case1 += 1;
                        let qb = ct.black[dec.k - 1];
                        let qc = *ct.black.last().unwrap();
                        if !ct.tree.is_left_descendant(qb, qc) {
                            tally.left_clause = false;
                            tally.fail(format!("Case 1 without Q_b left of Q_c: {ct}"));
                        }
                        if !image.has_black_apex() {
                            tally.apex = false;
                            tally.fail(format!("Case 1 image lacks a black apex: {ct} -> {image}"));
                        }
                    }
                    CaseTag::Case2 { .. } => {
                        tally.case2 += 1;
                        if image.has_black_apex() {
                            tally.apex = false;
                            tally.fail(format!("Case 2 image has a black apex: {ct} -> {image}"));
                        }
                    }
                }
                for &b in &ct.black[..first_blocks] {
                    let before = ct.tree.left(b);
                    let after = image.tree.left(map[b]);
                    if !ct.tree.same_shape(before, &image.tree, after) {
                        tally.left_preserved = false;
                        tally.fail(format!("left subtree of black node {} changed: {ct} -> {image}", b + 1));
                    }
                }
                match bij.inverse(&image) {
                    Ok(back) if back == ct => {}
                    Ok(back) => {
                        tally.round_trip = false;
                        tally.fail(format!("F^-1(F({ct})) = {back}"));
                    }
                    Err(e) => {
                        tally.round_trip = false;
                        tally.fail(format!("F^-1({image}): {e}"));
                    }
                }
                if basic {
                    match apply_f(&ct) {
                        Ok(f_image) if f_image == image => {}
                        other => {
                            tally.agrees_with_f = false;
                            tally.fail(format!("f({ct}) = {other:?} differs from F = {image}"));
                        }
                    }
                }
            }
            tally
        })
        .reduce(SideTally::new, SideTally::merge);

    let b_matcher = PatternMatcher::new(&bij.b_pattern);
    let backward = partitions(n, &p132())?
        .into_par_iter()
        .map(|stream| {
            let mut tally = SideTally::new();
            for ct in colored_trees_of(stream, &b_matcher, dec) {
                tally.count += 1;
                tally.keys.push(ct.key());
                match bij.inverse(&ct).and_then(|pre| bij.forward(&pre)) {
                    Ok(again) if again == ct => {}
                    Ok(again) => {
                        tally.round_trip = false;
                        tally.fail(format!("F(F^-1({ct})) = {again}"));
                    }
                    Err(e) => {
                        tally.round_trip = false;
                        tally.fail(format!("F(F^-1({ct})): {e}"));
                    }
                }
            }
            tally
        })
        .reduce(SideTally::new, SideTally::merge);

    let mut images = forward.keys.clone();
    images.sort_unstable();
    images.dedup();
    let injective = images.len() as u64 == forward.count;
    let b_keys: HashSet<u128> = backward.keys.iter().copied().collect();
    let surjective = forward.image_in_other
        && images.len() == b_keys.len()
        && images.iter().all(|k| b_keys.contains(k));

    let mut failures = forward.failures;
    failures.extend(backward.failures);
    failures.sort();
    failures.truncate(MAX_WITNESSES);

    Ok(BijectionReport {
        n,
        pair: pair.clone(),
        a_expected: total_occurrences(n, &bij.a_pattern, &p132())?,
        b_expected: total_occurrences(n, &bij.b_pattern, &p132())?,
        a_pattern: bij.a_pattern,
        b_pattern: bij.b_pattern,
        a_count: forward.count.into(),
        b_count: backward.count.into(),
        case1: forward.case1.into(),
        case2: forward.case2.into(),
        image_in_b: forward.image_in_other,
        injective,
        surjective,
        round_trip_a: forward.round_trip,
        round_trip_b: backward.round_trip,
        left_subtrees_preserved: forward.left_preserved,
        apex_property: forward.apex,
        case1_left_clause: forward.left_clause,
        agrees_with_f: basic.then_some(forward.agrees_with_f),
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn occ(s: &str) -> Occurrence {
        s.parse().unwrap()
    }

    fn basic_colored(perm: &str, positions: &str, side: Side) -> ColoredTree {
        make_colored(&p(perm), &occ(positions), &PatternPair::basic(), side).unwrap()
    }

    fn black_entries(ct: &ColoredTree) -> Vec<u32> {
        let labels = ct.tree().entry_labels();
        ct.black().iter().map(|&b| labels.label(b)).collect()
    }

    #[test]
    fn side_patterns() {
        let pair = PatternPair::basic();
        assert_eq!(pair.a_side(), p("213"));
        assert_eq!(pair.b_side(), p("231"));
        let pair = PatternPair::new(p("12"), p("12"), 2).unwrap();
        assert_eq!(pair.a_side(), p("341256"));
        assert_eq!(pair.b_side(), p("345612"));
        let pair = PatternPair::new(p("3124"), p("213"), 2).unwrap();
        assert_eq!(pair.a_side(), p("645721389"));
        assert_eq!(pair.b_side(), p("645789213"));
        assert_eq!(PatternPair::new(p("21"), p("1"), 1), Err(Error::NotEndingInMax("21".into())));
        assert!(PatternPair::new(p("1"), p("12"), 0).is_err());
    }

    #[test]
    fn make_colored_examples() {
        let ct = basic_colored("213", "1,2,3", Side::A);
        assert_eq!(ct.black(), &[0, 1, 2]);
        let ct = basic_colored("2314", "1,3,4", Side::A);
        assert_eq!(black_entries(&ct), vec![2, 1, 4]);
        let ct = basic_colored("2341", "1,2,4", Side::B);
        assert_eq!(black_entries(&ct), vec![2, 3, 1]);
        let wrong = make_colored(&p("2341"), &occ("1,2,4"), &PatternPair::basic(), Side::A);
        assert!(matches!(wrong, Err(Error::PatternMismatch { .. })));
        assert!(make_colored(&p("132"), &occ("1,2,3"), &PatternPair::basic(), Side::A).is_err());
    }

    #[test]
    fn classify_examples() {
        let bij = GeneralBijection::new(PatternPair::basic());
        assert_eq!(bij.classify(&basic_colored("213", "1,2,3", Side::A)).unwrap(), CaseTag::Case1);
        let ct = basic_colored("2314", "1,3,4", Side::A);
        let labels = ct.tree().entry_labels();
        match bij.classify(&ct).unwrap() {
            CaseTag::Case2 { pivot } => assert_eq!(labels.label(pivot), 3),
            other => panic!("expected Case2, got {other:?}"),
        }
        assert_eq!(bij.classify(&basic_colored("2314", "2,3,4", Side::A)).unwrap(), CaseTag::Case1);
    }

    #[test]
    fn f_examples() {
        let image = apply_f(&basic_colored("213", "1,2,3", Side::A)).unwrap();
        assert_eq!(image.permutation(), p("231"));
        assert_eq!(image.black(), &[0, 1, 2]);
        let image = apply_f(&basic_colored("2314", "1,3,4", Side::A)).unwrap();
        assert_eq!(image.permutation(), p("2341"));
        assert_eq!(image.black(), &[0, 1, 3]);
        assert_eq!(black_entries(&image), vec![2, 3, 1]);

        let back = apply_f_inverse(&basic_colored("231", "1,2,3", Side::B)).unwrap();
        assert_eq!(back, basic_colored("213", "1,2,3", Side::A));
        let back = apply_f_inverse(&basic_colored("2341", "1,2,4", Side::B)).unwrap();
        assert_eq!(back, basic_colored("2314", "1,3,4", Side::A));
        assert!(apply_f(&basic_colored("231", "1,2,3", Side::B)).is_err());
    }

    #[test]
    fn f_round_trips_up_to_nine() {
        for n in 3..=9 {
            let mut a_count = 0u64;
            for perm in crate::avoiders::enumerate_avoiders(n, &p132()).unwrap() {
                for o in perm.occurrences(&p("213")) {
                    let ct = make_colored(&perm, &o, &PatternPair::basic(), Side::A).unwrap();
                    let image = apply_f(&ct).unwrap();
                    assert_eq!(apply_f_inverse(&image).unwrap(), ct);
                    a_count += 1;
                }
                for o in perm.occurrences(&p("231")) {
                    let ct = make_colored(&perm, &o, &PatternPair::basic(), Side::B).unwrap();
                    assert_eq!(apply_f(&apply_f_inverse(&ct).unwrap()).unwrap(), ct);
                }
            }
            assert_eq!(BigUint::from(a_count), total_occurrences(n, &p("213"), &p132()).unwrap());
        }
    }

    #[test]
    fn general_rejects_wrong_side() {
        let bij = GeneralBijection::new(PatternPair::basic());
        let b_side = basic_colored("231", "1,2,3", Side::B);
        assert!(matches!(bij.forward(&b_side), Err(Error::PatternMismatch { .. })));
        let a_side = basic_colored("213", "1,2,3", Side::A);
        assert!(matches!(bij.inverse(&a_side), Err(Error::PatternMismatch { .. })));
        let other = GeneralBijection::new(PatternPair::new(p("1"), p("1"), 2).unwrap());
        assert!(matches!(other.forward(&a_side), Err(Error::InvalidColoring(_))));
    }

    #[test]
    fn six_letter_pair_maps_across() {
        let pair = PatternPair::new(p("12"), p("12"), 2).unwrap();
        let bij = GeneralBijection::new(pair.clone());
        let perm = p("341256");
        let ct = make_colored(&perm, &occ("1,2,3,4,5,6"), &pair, Side::A).unwrap();
        let image = bij.forward(&ct).unwrap();
        assert_eq!(image.black_pattern(), p("345612"));
        assert_eq!(bij.inverse(&image).unwrap(), ct);
    }

    #[test]
    fn small_reports() {
        let r = verify_bijection(3, &PatternPair::basic(), Guard::DEFAULT).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.a_count, BigUint::from(1u32));
        assert_eq!(r.b_count, BigUint::from(1u32));
        let r = verify_bijection(6, &PatternPair::basic(), Guard::DEFAULT).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.a_count, BigUint::from(500u32));
        assert_eq!(r.agrees_with_f, Some(true));
        let pair = PatternPair::new(p("1"), p("1"), 2).unwrap();
        let r = verify_bijection(5, &pair, Guard::DEFAULT).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.a_count, total_occurrences(5, &p("2134"), &p132()).unwrap());
        assert_eq!(r.agrees_with_f, None);
    }

    #[test]
    fn guards() {
        assert!(matches!(
            verify_bijection(13, &PatternPair::basic(), Guard::DEFAULT),
            Err(Error::GuardExceeded(_))
        ));
        let pair = PatternPair::new(p("1"), p("1"), 2).unwrap();
        assert!(verify_bijection(12, &pair, Guard::DEFAULT).is_err());
        assert!(verify_bijection(21, &pair, Guard { allow_large: true }).is_err());
    }

    #[test]
    fn text_format() {
        let ct = basic_colored("2314", "1,3,4", Side::A);
        let s = ct.to_string();
        assert_eq!(s, "(((..)(..)).);1,3,4;1,1,1");
        assert_eq!(s.parse::<ColoredTree>().unwrap(), ct);
        assert!("(..);1;1,1,1".parse::<ColoredTree>().is_err());
        assert!("(..);1".parse::<ColoredTree>().is_err());
        assert!("((..).);1,2;1,1".parse::<ColoredTree>().is_err());
    }
}
