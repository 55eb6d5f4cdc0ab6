//! Binary plane trees and their correspondence with 132-avoiding
//! permutations.
//!
//! Nodes are identified by their in-order index (0-based here, 1-based in
//! text formats). With that convention the node of entry `p_i` is simply
//! node `i - 1`, and black-vertex sets survive serialization unchanged.
//!
//! Text form: `T ::= "." | "(" T T ")"`, left subtree first, whitespace
//! ignored. JSON form: `null` or `{"l": T, "r": T}`.

use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};

use crate::avoiders::p132;
use crate::error::{Error, Result};
use crate::perm::Permutation;

/// A rooted binary plane tree. Child handedness is part of the structure.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryPlaneTree {
    root: Option<usize>,
    left: Vec<Option<usize>>,
    right: Vec<Option<usize>>,
    parent: Vec<Option<usize>>,
    /// Inclusive in-order interval covered by each node's subtree.
    span: Vec<(usize, usize)>,
}

impl BinaryPlaneTree {
    pub fn empty() -> Self {
        BinaryPlaneTree { root: None, left: vec![], right: vec![], parent: vec![], span: vec![] }
    }

    pub fn len(&self) -> usize {
        self.left.len()
    }

    pub fn is_empty(&self) -> bool {
        self.left.is_empty()
    }

    pub fn root(&self) -> Option<usize> {
        self.root
    }

    pub fn left(&self, node: usize) -> Option<usize> {
        self.left[node]
    }

    pub fn right(&self, node: usize) -> Option<usize> {
        self.right[node]
    }

    pub fn parent(&self, node: usize) -> Option<usize> {
        self.parent[node]
    }

    pub fn subtree_size(&self, node: usize) -> usize {
        let (a, b) = self.span[node];
        b - a + 1
    }

    /// Rebuild a tree from an arbitrary child relation, renumbering the
    /// nodes in in-order. Returns the tree and the old-to-new id map.
    ///
    /// Fails if the relation reachable from `root` is not a tree on exactly
    /// `n` nodes.
    fn rebuild(
        n: usize,
        root: Option<usize>,
        left: impl Fn(usize) -> Option<usize>,
        right: impl Fn(usize) -> Option<usize>,
    ) -> Result<(Self, Vec<usize>)> {
        let mut tree = BinaryPlaneTree {
            root: None,
            left: vec![None; n],
            right: vec![None; n],
            parent: vec![None; n],
            span: vec![(0, 0); n],
        };
        let mut map = vec![usize::MAX; n];
        let mut counter = 0usize;

        // iterative in-order traversal; the stack holds (old id, new parent)
        enum Step {
            Descend(usize),
            Visit(usize),
        }
        let Some(r) = root else {
            if n != 0 {
                return Err(Error::Structural(format!("{n} nodes but no root")));
            }
            return Ok((tree, map));
        };
        let mut stack = vec![Step::Descend(r)];
        let mut seen = vec![false; n];
        while let Some(step) = stack.pop() {
            match step {
                Step::Descend(x) => {
                    if x >= n || seen[x] {
                        return Err(Error::Structural(format!("node {x} reached twice or out of range")));
                    }
                    seen[x] = true;
                    if let Some(rc) = right(x) {
                        stack.push(Step::Descend(rc));
                    }
                    stack.push(Step::Visit(x));
                    if let Some(lc) = left(x) {
                        stack.push(Step::Descend(lc));
                    }
                }
                Step::Visit(x) => {
                    map[x] = counter;
                    counter += 1;
                }
            }
        }
        if counter != n {
            return Err(Error::Structural(format!("{counter} of {n} nodes reachable from the root")));
        }
        for old in 0..n {
            let new = map[old];
            tree.left[new] = left(old).map(|c| map[c]);
            tree.right[new] = right(old).map(|c| map[c]);
            for c in [tree.left[new], tree.right[new]].into_iter().flatten() {
                tree.parent[c] = Some(new);
            }
        }
        tree.root = Some(map[r]);
        tree.compute_spans();
        Ok((tree, map))
    }

    fn compute_spans(&mut self) {
        // children have larger depth; process in reverse BFS order
        let Some(r) = self.root else { return };
        let mut order = vec![r];
        let mut i = 0;
        while i < order.len() {
            let x = order[i];
            order.extend(self.left[x]);
            order.extend(self.right[x]);
            i += 1;
        }
        for &x in order.iter().rev() {
            let lo = self.left[x].map_or(x, |c| self.span[c].0);
            let hi = self.right[x].map_or(x, |c| self.span[c].1);
            self.span[x] = (lo, hi);
        }
    }

    /// `T(p)`: the root is the maximum entry, the prefix before it forms the
    /// left subtree and the suffix after it the right subtree.
    pub fn from_permutation(p: &Permutation) -> Result<Self> {
        if p.contains(&p132()) {
            return Err(Error::NotAvoider(p.to_string()));
        }
        let e = p.entries();
        let n = e.len();
        let mut left = vec![None; n];
        let mut right = vec![None; n];
        fn build(e: &[u32], lo: usize, hi: usize, left: &mut [Option<usize>], right: &mut [Option<usize>]) -> Option<usize> {
            if lo >= hi {
                return None;
            }
            let m = (lo..hi).max_by_key(|&i| e[i]).unwrap();
            left[m] = build(e, lo, m, left, right);
            right[m] = build(e, m + 1, hi, left, right);
            Some(m)
        }
        let root = build(e, 0, n, &mut left, &mut right);
        let (tree, map) = Self::rebuild(n, root, |x| left[x], |x| right[x])?;
        debug_assert!(map.iter().enumerate().all(|(i, &j)| i == j));
        Ok(tree)
    }

    /// The unique 132-avoider whose tree is `self`.
    pub fn to_permutation(&self) -> Permutation {
        Permutation::from_vec_unchecked(self.entry_labels().labels)
    }

    /// Entry values attached to the nodes: a subtree occupying values
    /// `lo..lo+s` puts its right subtree on the bottom values, its left
    /// subtree above those, and the maximum on its root.
    pub fn entry_labels(&self) -> EntryLabeling {
        let mut labels = vec![0u32; self.len()];
        let mut stack: Vec<(usize, u32)> = self.root.map(|r| (r, 1)).into_iter().collect();
        while let Some((x, lo)) = stack.pop() {
            let size = self.subtree_size(x) as u32;
            labels[x] = lo + size - 1;
            let right_size = self.right[x].map_or(0, |c| self.subtree_size(c) as u32);
            if let Some(c) = self.right[x] {
                stack.push((c, lo));
            }
            if let Some(c) = self.left[x] {
                stack.push((c, lo + right_size));
            }
        }
        EntryLabeling { labels }
    }

    /// `a` lies in the left subtree of `b`.
    pub fn is_left_descendant(&self, a: usize, b: usize) -> bool {
        let (lo, _) = self.span[b];
        lo <= a && a < b
    }

    /// `a` lies in the right subtree of `b`.
    pub fn is_right_descendant(&self, a: usize, b: usize) -> bool {
        let (_, hi) = self.span[b];
        b < a && a <= hi
    }

    /// `a` is a proper ancestor of `b`.
    pub fn is_ancestor(&self, a: usize, b: usize) -> bool {
        a != b && self.in_subtree(b, a)
    }

    /// `a` lies in the subtree rooted at `b` (including `b` itself).
    pub fn in_subtree(&self, a: usize, b: usize) -> bool {
        let (lo, hi) = self.span[b];
        lo <= a && a <= hi
    }

    /// Deepest node whose subtree holds both `a` and `b`; a node counts as
    /// its own ancestor here.
    pub fn lowest_common_ancestor(&self, a: usize, b: usize) -> usize {
        let mut x = a;
        while !self.in_subtree(b, x) {
            x = self.parent[x].expect("root spans every node");
        }
        x
    }

    /// Swap the right subtrees of `a` and `b`.
    ///
    /// Returns the new tree together with the map from old to new in-order
    /// indices. Fails unless the two right subtrees are disjoint and neither
    /// node sits inside the other's right subtree.
    pub fn swap_right_subtrees(&self, a: usize, b: usize) -> Result<(Self, Vec<usize>)> {
        let n = self.len();
        if a >= n || b >= n || a == b {
            return Err(Error::Structural(format!("cannot swap right subtrees of {a} and {b}")));
        }
        if self.is_right_descendant(a, b) || self.is_right_descendant(b, a) {
            return Err(Error::Structural(format!("node {a} and node {b} nest through a right subtree")));
        }
        if let (Some(ra), Some(rb)) = (self.right[a], self.right[b]) {
            let (a0, a1) = self.span[ra];
            let (b0, b1) = self.span[rb];
            if a0 <= b1 && b0 <= a1 {
                return Err(Error::Structural(format!("right subtrees of {a} and {b} overlap")));
            }
        }
        let right = |x: usize| match x {
            x if x == a => self.right[b],
            x if x == b => self.right[a],
            x => self.right[x],
        };
        Self::rebuild(n, self.root, |x| self.left[x], right)
    }

    /// Structural equality of the subtree below `a` here and below `b` in `other`.
    pub fn same_shape(&self, a: Option<usize>, other: &Self, b: Option<usize>) -> bool {
        match (a, b) {
            (None, None) => true,
            (Some(a), Some(b)) => {
                self.subtree_size(a) == other.subtree_size(b)
                    && self.same_shape(self.left[a], other, other.left[b])
                    && self.same_shape(self.right[a], other, other.right[b])
            }
            _ => false,
        }
    }

    /// Every binary plane tree on `n` nodes, each exactly once.
    pub fn all(n: usize) -> Vec<Self> {
        Shape::all(n).iter().map(Shape::to_tree).collect()
    }

    pub fn to_json(&self) -> Value {
        fn go(t: &BinaryPlaneTree, x: Option<usize>) -> Value {
            match x {
                None => Value::Null,
                Some(x) => json!({ "l": go(t, t.left[x]), "r": go(t, t.right[x]) }),
            }
        }
        go(self, self.root)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        fn go(v: &Value) -> Result<Shape> {
            match v {
                Value::Null => Ok(Shape::Leaf),
                Value::Object(m) if m.len() == 2 && m.contains_key("l") && m.contains_key("r") => {
                    Ok(Shape::Node(Box::new(go(&m["l"])?), Box::new(go(&m["r"])?)))
                }
                other => Err(Error::Parse { what: "tree JSON", msg: format!("unexpected value {other}") }),
            }
        }
        Ok(go(v)?.to_tree())
    }

    fn write_node(&self, x: Option<usize>, out: &mut String) {
        match x {
            None => out.push('.'),
            Some(x) => {
                out.push('(');
                self.write_node(self.left[x], out);
                self.write_node(self.right[x], out);
                out.push(')');
            }
        }
    }
}

impl fmt::Display for BinaryPlaneTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::with_capacity(3 * self.len() + 1);
        self.write_node(self.root, &mut s);
        f.write_str(&s)
    }
}

impl FromStr for BinaryPlaneTree {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        let err = |msg: String| Error::Parse { what: "tree", msg };
        // explicit stack so deep trees do not overflow
        let mut stack: Vec<Vec<Shape>> = vec![Vec::new()];
        for (i, &c) in chars.iter().enumerate() {
            match c {
                '.' => stack.last_mut().unwrap().push(Shape::Leaf),
                '(' => stack.push(Vec::new()),
                ')' => {
                    let kids = stack.pop().unwrap();
                    let [l, r]: [Shape; 2] = kids
                        .try_into()
                        .map_err(|_| err(format!("node closed at offset {i} needs exactly two children")))?;
                    let parent = stack.last_mut().ok_or_else(|| err(format!("unbalanced ')' at offset {i}")))?;
                    parent.push(Shape::Node(Box::new(l), Box::new(r)));
                }
                other => return Err(err(format!("unexpected character {other:?}"))),
            }
        }
        if stack.len() != 1 {
            return Err(err("unbalanced '('".into()));
        }
        let top = stack.pop().unwrap();
        let [shape]: [Shape; 1] = top.try_into().map_err(|_| err("expected exactly one tree".into()))?;
        Ok(shape.to_tree())
    }
}

/// Owned recursive shape; used for parsing and exhaustive generation.
#[derive(Debug, Clone)]
enum Shape {
    Leaf,
    Node(Box<Shape>, Box<Shape>),
}

impl Shape {
    fn all(n: usize) -> Vec<Shape> {
        if n == 0 {
            return vec![Shape::Leaf];
        }
        let mut out = Vec::new();
        for left_size in 0..n {
            let lefts = Shape::all(left_size);
            let rights = Shape::all(n - 1 - left_size);
            for l in &lefts {
                for r in &rights {
                    out.push(Shape::Node(Box::new(l.clone()), Box::new(r.clone())));
                }
            }
        }
        out
    }

    fn to_tree(&self) -> BinaryPlaneTree {
        // number nodes in pre-order, then let `rebuild` renumber in-order
        let mut left = Vec::new();
        let mut right = Vec::new();
        let mut stack: Vec<(&Shape, Option<(usize, bool)>)> = vec![(self, None)];
        let mut root = None;
        while let Some((s, attach)) = stack.pop() {
            let Shape::Node(l, r) = s else { continue };
            let id = left.len();
            left.push(None);
            right.push(None);
            match attach {
                None => root = Some(id),
                Some((p, true)) => left[p] = Some(id),
                Some((p, false)) => right[p] = Some(id),
            }
            stack.push((r, Some((id, false))));
            stack.push((l, Some((id, true))));
        }
        let n = left.len();
        BinaryPlaneTree::rebuild(n, root, |x| left[x], |x| right[x])
            .expect("shapes are trees")
            .0
    }
}

/// Entry value carried by each node (indexed by in-order position).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntryLabeling {
    pub labels: Vec<u32>,
}

impl EntryLabeling {
    pub fn label(&self, node: usize) -> u32 {
        self.labels[node]
    }
}

/// `T(p)` for a 132-avoider `p`.
pub fn perm_to_tree(p: &Permutation) -> Result<BinaryPlaneTree> {
    BinaryPlaneTree::from_permutation(p)
}

pub fn tree_to_perm(t: &BinaryPlaneTree) -> Permutation {
    t.to_permutation()
}
