//! Rooted k-trees, nested families, and the complex T^k_n.
//!
//! A k-tree on leaves `1..m` has every internal outdegree `> 1` and `≡ 1 (mod k)`.
//! Its non-root internal vertices, read as leaf sets, form a nested family in
//! `G`; the complex T^k_n is enumerated on that side.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::atomic::AtomicUsize;

use rayon::prelude::*;
use serde::Serialize;

use crate::bitset::BitRow;
use crate::error::{resource_limit, Error, Result};
use crate::partition::{KInstance, Partition};
use crate::perm::Permutation;
use crate::simplicial::SimplicialComplex;
use crate::subdivision::nested::{antichains_ok, grow, unique_bound_outside};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TreeNode {
    Leaf(usize),
    Internal(Vec<TreeNode>),
}

impl TreeNode {
    pub fn min_leaf(&self) -> usize {
        match self {
            TreeNode::Leaf(l) => *l,
            TreeNode::Internal(ch) => ch.iter().map(TreeNode::min_leaf).min().unwrap_or(usize::MAX),
        }
    }

    /// Leaves below this node as a bitmask (bit `i` is leaf `i + 1`).
    pub fn leaf_mask(&self) -> u64 {
        match self {
            TreeNode::Leaf(l) => 1u64 << (l - 1),
            TreeNode::Internal(ch) => ch.iter().fold(0, |acc, c| acc | c.leaf_mask()),
        }
    }

    fn canonicalize(&mut self) {
        if let TreeNode::Internal(ch) = self {
            ch.iter_mut().for_each(TreeNode::canonicalize);
            ch.sort_by_key(TreeNode::min_leaf);
        }
    }

    fn collect_internal(&self, is_root: bool, out: &mut Vec<u64>) {
        if let TreeNode::Internal(ch) = self {
            if !is_root {
                out.push(self.leaf_mask());
            }
            for c in ch {
                c.collect_internal(false, out);
            }
        }
    }

    fn write_newick(&self, out: &mut String) {
        match self {
            TreeNode::Leaf(l) => out.push_str(&l.to_string()),
            TreeNode::Internal(ch) => {
                out.push('(');
                for (i, c) in ch.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    c.write_newick(out);
                }
                out.push(')');
            }
        }
    }

    fn relabel(&self, perm: &Permutation) -> TreeNode {
        match self {
            TreeNode::Leaf(l) => TreeNode::Leaf(perm.apply(l - 1) + 1),
            TreeNode::Internal(ch) => TreeNode::Internal(ch.iter().map(|c| c.relabel(perm)).collect()),
        }
    }

    /// Splice out every non-root internal node whose leaf mask is in `masks`.
    fn contract(self, masks: &BTreeSet<u64>) -> Vec<TreeNode> {
        match self {
            TreeNode::Leaf(_) => vec![self],
            TreeNode::Internal(ch) => {
                let mask = ch.iter().fold(0, |acc, c| acc | c.leaf_mask());
                let children: Vec<TreeNode> = ch
                    .into_iter()
                    .flat_map(|c| c.contract(masks))
                    .collect();
                if masks.contains(&mask) {
                    children
                } else {
                    vec![TreeNode::Internal(children)]
                }
            }
        }
    }
}

/// A rooted tree on leaves `1..m` with internal outdegrees `> 1`, `≡ 1 (mod k)`.
/// Children are kept sorted by least leaf, so equality is structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KTree {
    m: usize,
    k: usize,
    root: TreeNode,
}

impl KTree {
    pub fn new(m: usize, k: usize, mut root: TreeNode) -> Result<Self> {
        if k == 0 || !(2..=64).contains(&m) {
            return Err(Error::InvalidArgument(format!("need k ≥ 1 and 2 ≤ m ≤ 64, got m = {m}, k = {k}")));
        }
        if matches!(root, TreeNode::Leaf(_)) {
            return Err(Error::InvalidArgument("the root must be internal".into()));
        }
        let mut seen = 0u64;
        fn check(node: &TreeNode, m: usize, k: usize, seen: &mut u64) -> Result<()> {
            match node {
                TreeNode::Leaf(l) => {
                    if *l == 0 || *l > m || *seen >> (l - 1) & 1 == 1 {
                        return Err(Error::InvalidArgument(format!("leaf {l} is out of range or repeated")));
                    }
                    *seen |= 1 << (l - 1);
                }
                TreeNode::Internal(ch) => {
                    if ch.len() <= 1 || ch.len() % k != 1 % k {
                        return Err(Error::InvalidArgument(format!(
                            "internal outdegree {} is not > 1 and ≡ 1 (mod {k})",
                            ch.len()
                        )));
                    }
                    for c in ch {
                        check(c, m, k, seen)?;
                    }
                }
            }
            Ok(())
        }
        check(&root, m, k, &mut seen)?;
        if seen.count_ones() as usize != m {
            return Err(Error::InvalidArgument(format!("leaves do not cover 1..{m}")));
        }
        root.canonicalize();
        Ok(KTree { m, k, root })
    }

    /// Root with `m` leaf children.
    pub fn star(m: usize, k: usize) -> Result<Self> {
        Self::new(m, k, TreeNode::Internal((1..=m).map(TreeNode::Leaf).collect()))
    }

    /// Reads `((1,2,3),4,5);`; the leaf count is inferred.
    pub fn from_newick(s: &str, k: usize) -> Result<Self> {
        let bytes: Vec<char> = s.trim().chars().filter(|c| !c.is_whitespace()).collect();
        let mut pos = 0;
        fn node(b: &[char], pos: &mut usize) -> Result<TreeNode> {
            let bad = |p: usize| Error::Parse(format!("unexpected input at position {p} in newick string"));
            if b.get(*pos) == Some(&'(') {
                *pos += 1;
                let mut ch = vec![node(b, pos)?];
                loop {
                    match b.get(*pos) {
                        Some(',') => {
                            *pos += 1;
                            ch.push(node(b, pos)?);
                        }
                        Some(')') => {
                            *pos += 1;
                            return Ok(TreeNode::Internal(ch));
                        }
                        _ => return Err(bad(*pos)),
                    }
                }
            }
            let start = *pos;
            while b.get(*pos).is_some_and(|c| c.is_ascii_digit()) {
                *pos += 1;
            }
            if start == *pos {
                return Err(bad(start));
            }
            let digits: String = b[start..*pos].iter().collect();
            Ok(TreeNode::Leaf(digits.parse().map_err(|_| bad(start))?))
        }
        let root = node(&bytes, &mut pos)?;
        if bytes.get(pos) != Some(&';') || pos + 1 != bytes.len() {
            return Err(Error::Parse("newick string must end with a single ';'".into()));
        }
        fn leaf_count(n: &TreeNode) -> usize {
            match n {
                TreeNode::Leaf(_) => 1,
                TreeNode::Internal(ch) => ch.iter().map(leaf_count).sum(),
            }
        }
        let m = leaf_count(&root);
        Self::new(m, k, root).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn root(&self) -> &TreeNode {
        &self.root
    }

    pub fn newick(&self) -> String {
        let mut s = String::new();
        self.root.write_newick(&mut s);
        s.push(';');
        s
    }

    /// Leaf sets of the non-root internal vertices, sorted.
    /// Each one is the lower end of an internal edge.
    pub fn internal_edges(&self) -> Vec<u64> {
        let mut out = Vec::new();
        self.root.collect_internal(true, &mut out);
        out.sort_unstable();
        out
    }

    /// Contract the internal edges given by their lower vertices' leaf sets.
    pub fn contract(&self, edges: &[u64]) -> Result<KTree> {
        let present = self.internal_edges();
        if let Some(e) = edges.iter().find(|e| present.binary_search(e).is_err()) {
            return Err(Error::InvalidArgument(format!("no internal edge above leaf set {e:#b}")));
        }
        let masks: BTreeSet<u64> = edges.iter().copied().collect();
        let children = match self.root.clone() {
            TreeNode::Internal(ch) => ch.into_iter().flat_map(|c| c.contract(&masks)).collect(),
            TreeNode::Leaf(_) => unreachable!("root is internal"),
        };
        KTree::new(self.m, self.k, TreeNode::Internal(children))
    }

    pub fn permuted(&self, perm: &Permutation) -> KTree {
        KTree::new(self.m, self.k, self.root.relabel(perm)).expect("relabelling keeps a valid tree")
    }
}

impl fmt::Display for KTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.newick())
    }
}

/// A set of elements of `G` (none equal to 1̂), sorted canonically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct NestedFamily {
    m: usize,
    k: usize,
    members: Vec<Partition>,
}

impl NestedFamily {
    /// Checks k-nestedness literally inside Π^(k)_m.
    pub fn new(inst: &KInstance, members: Vec<Partition>) -> Result<Self> {
        let fam = Self::from_members_unchecked(inst.m, inst.k, members);
        if !is_k_nested(inst, &fam.members) {
            let shown: Vec<String> = fam.members.iter().map(|p| p.to_string()).collect();
            return Err(Error::NotNested(format!("{{{}}}", shown.join(", "))));
        }
        Ok(fam)
    }

    pub(crate) fn from_members_unchecked(m: usize, k: usize, mut members: Vec<Partition>) -> Self {
        members.sort();
        members.dedup();
        NestedFamily { m, k, members }
    }

    pub fn empty(m: usize, k: usize) -> Self {
        NestedFamily { m, k, members: Vec::new() }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn members(&self) -> &[Partition] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Non-singleton blocks of the members.
    pub fn blocks(&self) -> Vec<u64> {
        self.members.iter().filter_map(Partition::sole_block).collect()
    }

    pub fn permuted(&self, perm: &Permutation) -> NestedFamily {
        Self::from_members_unchecked(self.m, self.k, self.members.iter().map(|x| x.permuted(perm)).collect())
    }
}

/// Literal k-nestedness: every antichain of two or more members has exactly
/// one minimal upper bound in Π^(k)_m, and that bound is not in `G`.
pub fn is_k_nested(inst: &KInstance, family: &[Partition]) -> bool {
    let mut idx = Vec::with_capacity(family.len());
    for x in family {
        if !inst.g.contains(x) || x.num_blocks() == 1 {
            return false;
        }
        match inst.poset.index_of(x) {
            Some(i) => idx.push(i),
            None => return false,
        }
    }
    idx.sort_unstable();
    idx.dedup();
    antichains_ok(inst.poset.poset(), &inst.g_row, &idx, 0, None, &mut Vec::new())
}

/// Pairwise nested-or-disjoint check on blocks. Equivalent to
/// [`is_k_nested`] on subsets of `G \ {1̂}`; used as a cross-check.
pub fn is_laminar(blocks: &[u64]) -> bool {
    blocks.iter().enumerate().all(|(i, &a)| {
        blocks[i + 1..]
            .iter()
            .all(|&b| a & b == 0 || a & b == a || a & b == b)
    })
}

/// The nested family of a tree: leaf sets of non-root internal vertices.
pub fn tree_to_nested(t: &KTree) -> NestedFamily {
    let members = t
        .internal_edges()
        .into_iter()
        .map(|b| Partition::single_block(t.m, b).expect("internal leaf set"))
        .collect();
    NestedFamily::from_members_unchecked(t.m, t.k, members)
}

/// The tree of a nested family: the members plus the full set, each placed
/// under the smallest member that strictly contains it.
pub fn nested_to_tree(n: &NestedFamily) -> Result<KTree> {
    let m = n.m;
    let full = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
    let not_nested = |why: &str| Error::NotNested(why.to_string());
    let blocks = n.blocks();
    if blocks.len() != n.members.len() {
        return Err(not_nested("a member has more than one non-singleton block"));
    }
    if blocks.contains(&full) {
        return Err(not_nested("the one-block partition cannot be a member"));
    }
    if blocks.iter().any(|b| b.count_ones() as usize % n.k != 1 % n.k) {
        return Err(not_nested("a block size is not 1 mod k"));
    }
    if !is_laminar(&blocks) {
        return Err(not_nested("two blocks overlap without nesting"));
    }
    let mut all = blocks;
    all.push(full);
    all.sort_by_key(|b| b.count_ones());
    fn build(u: u64, all: &[u64]) -> TreeNode {
        // maximal members strictly inside u
        let inside: Vec<u64> = all.iter().copied().filter(|&v| v != u && v & u == v).collect();
        let maximal: Vec<u64> = inside
            .iter()
            .copied()
            .filter(|&v| !inside.iter().any(|&w| w != v && w & v == v))
            .collect();
        let covered = maximal.iter().fold(0, |acc, v| acc | v);
        let mut ch: Vec<TreeNode> = maximal.iter().map(|&v| build(v, all)).collect();
        let mut rest = u & !covered;
        while rest != 0 {
            ch.push(TreeNode::Leaf(rest.trailing_zeros() as usize + 1));
            rest &= rest - 1;
        }
        TreeNode::Internal(ch)
    }
    KTree::new(m, n.k, build(full, &all)).map_err(|e| Error::NotNested(e.to_string()))
}

/// T^k_n with `m = (n − 1)k + 1`, built from scratch.
pub fn enumerate_ktree_complex(n: usize, k: usize, element_cap: usize, face_cap: usize) -> Result<SimplicialComplex<Partition>> {
    let inst = KInstance::new(k, n, element_cap)?;
    ktree_complex(&inst, face_cap)
}

/// T^k_n: vertices `G \ {1̂}` in canonical order, faces the nonempty
/// k-nested subsets.
pub fn ktree_complex(inst: &KInstance, face_cap: usize) -> Result<SimplicialComplex<Partition>> {
    let verts = inst.g.without_top();
    if verts.len() > face_cap {
        return Err(resource_limit("k-tree complex faces", verts.len(), face_cap));
    }
    let p = inst.poset.poset();
    let idx: Vec<usize> = verts
        .iter()
        .map(|x| inst.poset.index_of(x).expect("G lies in the restricted poset"))
        .collect();
    let nv = verts.len();
    let compat: Vec<BitRow> = (0..nv)
        .into_par_iter()
        .map(|i| {
            let mut row = BitRow::new(nv);
            for j in 0..nv {
                if j != i && (p.comparable(idx[i], idx[j]) || unique_bound_outside(p, &inst.g_row, &[idx[i], idx[j]])) {
                    row.insert(j);
                }
            }
            row
        })
        .collect();
    let counter = AtomicUsize::new(0);
    let per_root: Vec<Result<Vec<Vec<usize>>>> = (0..nv)
        .into_par_iter()
        .map(|v| {
            let mut faces = Vec::new();
            grow(p, &inst.g_row, &idx, &compat, &mut vec![v], &mut faces, &counter, face_cap).map_err(|e| match e {
                Error::ResourceLimit { needed, limit, .. } => Error::ResourceLimit {
                    what: "k-tree complex faces",
                    needed,
                    limit,
                },
                e => e,
            })?;
            Ok(faces)
        })
        .collect();
    let mut faces = Vec::new();
    for r in per_root {
        faces.extend(r?);
    }
    Ok(SimplicialComplex::from_closed_faces(verts, faces))
}
