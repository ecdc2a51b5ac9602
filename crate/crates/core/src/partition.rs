//! Set partitions of `{1..m}` and the posets Π_m and Π^(k)_m.
//!
//! A partition stores its blocks as bitmasks (bit `i` is the point `i + 1`),
//! sorted by least element. The distinguished subsets used throughout the
//! crate live here as well: the minimal building set `I` of Π_m (one
//! non-singleton block) and its restriction `G` to blocks of size ≡ 1 mod k.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bitset::BitRow;
use crate::error::{resource_limit, Error, Result};
use crate::perm::Permutation;
use crate::poset::Poset;

pub const MAX_GROUND_SET: usize = 64;

/// Default cap on the number of enumerated partitions.
pub const DEFAULT_ELEMENT_CAP: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    m: usize,
    blocks: Vec<u64>,
}

fn mask_elements(mask: u64) -> impl Iterator<Item = usize> {
    let mut rest = mask;
    std::iter::from_fn(move || {
        if rest == 0 {
            None
        } else {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(i + 1)
        }
    })
}

fn full_mask(m: usize) -> u64 {
    if m == 64 {
        u64::MAX
    } else {
        (1u64 << m) - 1
    }
}

impl Partition {
    /// From one-based blocks; order within and between blocks is irrelevant.
    pub fn new(m: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let masks = blocks
            .iter()
            .map(|b| {
                b.iter().try_fold(0u64, |acc, &e| {
                    if e == 0 || e > m || m > MAX_GROUND_SET {
                        Err(Error::InvalidArgument(format!("element {e} outside 1..{m}")))
                    } else if acc >> (e - 1) & 1 == 1 {
                        Err(Error::InvalidArgument(format!("element {e} repeated")))
                    } else {
                        Ok(acc | 1 << (e - 1))
                    }
                })
            })
            .collect::<Result<Vec<u64>>>()?;
        Self::from_masks(m, masks)
    }

    pub fn from_masks(m: usize, mut masks: Vec<u64>) -> Result<Self> {
        if m == 0 || m > MAX_GROUND_SET {
            return Err(Error::InvalidArgument(format!(
                "ground set size must be in 1..={MAX_GROUND_SET}, got {m}"
            )));
        }
        let mut seen = 0u64;
        for &b in &masks {
            if b == 0 || b & seen != 0 || b & !full_mask(m) != 0 {
                return Err(Error::InvalidArgument(format!(
                    "blocks are empty, overlapping or out of range for m = {m}"
                )));
            }
            seen |= b;
        }
        if seen != full_mask(m) {
            return Err(Error::InvalidArgument(format!("blocks do not cover 1..{m}")));
        }
        masks.sort_unstable_by_key(|b| b.trailing_zeros());
        Ok(Partition { m, blocks: masks })
    }

    /// The partition into singletons (0̂).
    pub fn finest(m: usize) -> Self {
        Partition {
            m,
            blocks: (0..m).map(|i| 1u64 << i).collect(),
        }
    }

    /// The one-block partition (1̂).
    pub fn coarsest(m: usize) -> Self {
        Partition {
            m,
            blocks: vec![full_mask(m)],
        }
    }

    /// The partition whose only non-singleton block is `block` (a mask).
    pub fn single_block(m: usize, block: u64) -> Result<Self> {
        let mut masks = vec![block];
        let rest = full_mask(m) & !block;
        masks.extend(mask_elements(rest).map(|e| 1u64 << (e - 1)));
        Self::from_masks(m, masks)
    }

    pub fn ground_size(&self) -> usize {
        self.m
    }

    pub fn block_masks(&self) -> &[u64] {
        &self.blocks
    }

    /// Blocks as sorted one-based element lists.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        self.blocks.iter().map(|&b| mask_elements(b).collect()).collect()
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// `m − #blocks`.
    pub fn rank(&self) -> usize {
        self.m - self.blocks.len()
    }

    pub fn non_singleton_blocks(&self) -> impl Iterator<Item = u64> + '_ {
        self.blocks.iter().copied().filter(|b| b.count_ones() > 1)
    }

    /// The unique non-singleton block, if there is exactly one.
    pub fn sole_block(&self) -> Option<u64> {
        let mut it = self.non_singleton_blocks();
        match (it.next(), it.next()) {
            (Some(b), None) => Some(b),
            _ => None,
        }
    }

    pub fn all_blocks_one_mod(&self, k: usize) -> bool {
        self.blocks.iter().all(|b| b.count_ones() as usize % k == 1 % k)
    }

    /// Refinement order: every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        self.m == other.m
            && self
                .blocks
                .iter()
                .all(|&a| other.blocks.iter().any(|&b| a & b == a))
    }

    /// Finest common coarsening, by union–find on the points.
    ///
    /// Panics if the ground sets differ.
    pub fn join(&self, other: &Partition) -> Partition {
        assert_eq!(self.m, other.m, "partitions of different ground sets");
        let mut parent: Vec<usize> = (0..self.m).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for &b in self.blocks.iter().chain(&other.blocks) {
            let first = b.trailing_zeros() as usize;
            for e in mask_elements(b) {
                let (ra, rb) = (find(&mut parent, first), find(&mut parent, e - 1));
                if ra != rb {
                    parent[rb.max(ra)] = rb.min(ra);
                }
            }
        }
        let mut by_root: HashMap<usize, u64> = HashMap::new();
        for i in 0..self.m {
            *by_root.entry(find(&mut parent, i)).or_default() |= 1 << i;
        }
        Partition::from_masks(self.m, by_root.into_values().collect()).expect("union-find yields a partition")
    }

    /// Relabel points by `perm` and recanonicalise.
    pub fn permuted(&self, perm: &Permutation) -> Partition {
        assert_eq!(perm.degree(), self.m, "permutation degree differs from ground set");
        let masks = self.blocks.iter().map(|&b| perm.apply_mask(b)).collect();
        Partition::from_masks(self.m, masks).expect("permutation preserves partitions")
    }

    fn block_key(b: u64) -> Vec<usize> {
        mask_elements(b).collect()
    }
}

impl Ord for Partition {
    /// Lexicographic on the sorted block lists.
    fn cmp(&self, other: &Self) -> Ordering {
        self.m.cmp(&other.m).then_with(|| {
            for (a, b) in self.blocks.iter().zip(&other.blocks) {
                match Self::block_key(*a).cmp(&Self::block_key(*b)) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            self.blocks.len().cmp(&other.blocks.len())
        })
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    /// `(123)4567` for `m ≤ 9`; `1,2,3|4|5|…` otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m <= 9 {
            for &b in &self.blocks {
                let digits: String = mask_elements(b).map(|e| e.to_string()).collect();
                if b.count_ones() > 1 {
                    write!(f, "({digits})")?;
                } else {
                    write!(f, "{digits}")?;
                }
            }
            Ok(())
        } else {
            let parts: Vec<String> = self
                .blocks
                .iter()
                .map(|&b| mask_elements(b).map(|e| e.to_string()).collect::<Vec<_>>().join(","))
                .collect();
            write!(f, "{}", parts.join("|"))
        }
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Accepts the shorthand `(123)4567` (single-digit points) and the
    /// block-list form `1,2,3|4|5`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("cannot read partition from {s:?}"));
        let blocks: Vec<Vec<usize>> = if s.contains('|') || s.contains(',') {
            s.split('|')
                .map(|b| b.split(',').map(|e| e.trim().parse::<usize>().map_err(|_| bad())).collect())
                .collect::<Result<_>>()?
        } else {
            let mut blocks = Vec::new();
            let mut open: Option<Vec<usize>> = None;
            for c in s.chars() {
                match (c, open.as_mut()) {
                    ('(', None) => open = Some(Vec::new()),
                    (')', Some(_)) => blocks.push(open.take().expect("open block")),
                    (d, Some(b)) if d.is_ascii_digit() => b.push(d.to_digit(10).unwrap() as usize),
                    (d, None) if d.is_ascii_digit() => blocks.push(vec![d.to_digit(10).unwrap() as usize]),
                    _ => return Err(bad()),
                }
            }
            if open.is_some() {
                return Err(bad());
            }
            blocks
        };
        let m = blocks.iter().map(Vec::len).sum();
        Partition::new(m, &blocks).map_err(|e| Error::Parse(e.to_string()))
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.blocks().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let blocks: Vec<Vec<usize>> = Vec::deserialize(d)?;
        let m = blocks.iter().map(Vec::len).sum();
        Partition::new(m, &blocks).map_err(serde::de::Error::custom)
    }
}

/// Number of partitions of `{1..m}` with all block sizes ≡ 1 (mod k), or
/// `None` on overflow.
pub fn count_partitions(m: usize, k: usize) -> Option<u128> {
    let mut binom = vec![vec![0u128; m + 1]; m + 1];
    for n in 0..=m {
        binom[n][0] = 1;
        for r in 1..=n {
            binom[n][r] = binom[n - 1][r - 1].checked_add(binom[n - 1][r])?;
        }
    }
    let mut count = vec![0u128; m + 1];
    count[0] = 1;
    for n in 1..=m {
        let mut total = 0u128;
        // block containing the least point has size s ≡ 1 (mod k)
        for s in (1..=n).filter(|s| s % k == 1 % k) {
            total = total.checked_add(binom[n - 1][s - 1].checked_mul(count[n - s])?)?;
        }
        count[n] = total;
    }
    Some(count[m])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PosetKind {
    /// Π_m.
    Full,
    /// Π^(k)_m for k ≥ 2.
    Restricted,
}

/// Π_m or Π^(k)_m with refinement order, 0̂ and (when present) 1̂ designated.
/// Elements are indexed by rank, then canonical order.
#[derive(Clone, Debug)]
pub struct PartitionPoset {
    kind: PosetKind,
    m: usize,
    k: usize,
    poset: Poset<Partition>,
    index: HashMap<Partition, usize>,
}

impl PartitionPoset {
    /// All partitions of `{1..m}` whose block sizes are ≡ 1 (mod k).
    pub fn enumerate(m: usize, k: usize, cap: usize) -> Result<Self> {
        if m == 0 || m > MAX_GROUND_SET {
            return Err(Error::InvalidArgument(format!(
                "m must be in 1..={MAX_GROUND_SET}, got {m}"
            )));
        }
        if k == 0 {
            return Err(Error::InvalidArgument("k must be positive".into()));
        }
        match count_partitions(m, k) {
            Some(c) if c <= cap as u128 => {}
            Some(c) => return Err(resource_limit("partition poset elements", c, cap)),
            None => return Err(resource_limit("partition poset elements", "more than 2^128", cap)),
        }
        let mut out = Vec::new();
        let mut blocks = Vec::new();
        grow_blocks(full_mask(m), k, &mut blocks, &mut |bs| {
            out.push(Partition::from_masks(m, bs.to_vec()).expect("generated blocks partition the ground set"));
        });
        out.sort_by(|a, b| a.rank().cmp(&b.rank()).then_with(|| a.cmp(b)));
        let poset = Poset::from_leq(out.clone(), |i, j| out[i].refines(&out[j]))?;
        let zero = 0;
        let one = out.iter().position(|p| p.num_blocks() == 1);
        let poset = poset.with_bounds(Some(zero), one)?;
        let index = out.into_iter().enumerate().map(|(i, p)| (p, i)).collect();
        Ok(PartitionPoset {
            kind: if k == 1 { PosetKind::Full } else { PosetKind::Restricted },
            m,
            k,
            poset,
            index,
        })
    }

    /// Π_m.
    pub fn full(m: usize, cap: usize) -> Result<Self> {
        Self::enumerate(m, 1, cap)
    }

    pub fn kind(&self) -> PosetKind {
        self.kind
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn poset(&self) -> &Poset<Partition> {
        &self.poset
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poset.is_empty()
    }

    pub fn partition(&self, i: usize) -> &Partition {
        self.poset.label(i)
    }

    pub fn index_of(&self, p: &Partition) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn contains(&self, p: &Partition) -> bool {
        self.index.contains_key(p)
    }

    fn indices(&self, parts: &[Partition]) -> Result<Vec<usize>> {
        parts
            .iter()
            .map(|p| {
                self.index_of(p)
                    .ok_or_else(|| Error::InvalidArgument(format!("{p} is not an element of this poset")))
            })
            .collect()
    }

    /// The set ∨^k of minimal upper bounds, computed inside this poset.
    pub fn minimal_upper_bounds(&self, parts: &[Partition]) -> Result<Vec<Partition>> {
        let idx = self.indices(parts)?;
        Ok(self
            .poset
            .minimal_upper_bounds(&idx)?
            .into_iter()
            .map(|i| self.partition(i).clone())
            .collect())
    }

    pub fn join(&self, parts: &[Partition]) -> Result<Partition> {
        let idx = self.indices(parts)?;
        Ok(self.partition(self.poset.join(&idx)?).clone())
    }

    pub fn meet(&self, parts: &[Partition]) -> Result<Partition> {
        let idx = self.indices(parts)?;
        Ok(self.partition(self.poset.meet(&idx)?).clone())
    }

    pub fn to_json(&self) -> serde_json::Value {
        self.poset.to_json()
    }
}

/// Depth-first generation: the block containing the least remaining point
/// takes `k·j` further points for every feasible `j`.
fn grow_blocks(rest: u64, k: usize, blocks: &mut Vec<u64>, emit: &mut dyn FnMut(&[u64])) {
    if rest == 0 {
        emit(blocks);
        return;
    }
    let lead = rest & rest.wrapping_neg();
    let others = rest & !lead;
    let pool: Vec<u64> = mask_elements(others).map(|e| 1u64 << (e - 1)).collect();
    let mut extra = 0usize;
    while extra <= pool.len() {
        for_each_subset(&pool, extra, 0, 0, &mut |sub| {
            blocks.push(lead | sub);
            grow_blocks(rest & !(lead | sub), k, blocks, emit);
            blocks.pop();
        });
        extra += k;
    }
}

fn for_each_subset(pool: &[u64], size: usize, start: usize, acc: u64, f: &mut dyn FnMut(u64)) {
    if size == 0 {
        f(acc);
        return;
    }
    for i in start..pool.len() {
        if pool.len() - i < size {
            break;
        }
        for_each_subset(pool, size - 1, i + 1, acc | pool[i], f);
    }
}

/// The minimal building set `I` of Π_m: partitions with exactly one
/// non-singleton block.
pub fn building_set_i(m: usize) -> Vec<Partition> {
    let mut out: Vec<Partition> = (1..=full_mask(m))
        .filter(|b| b.count_ones() > 1)
        .map(|b| Partition::single_block(m, b).expect("valid block"))
        .collect();
    out.sort();
    out
}

/// Factors of `x` with respect to `I`: one single-block partition per
/// non-singleton block of `x`.
pub fn factors_i(x: &Partition) -> Vec<Partition> {
    let mut out: Vec<Partition> = x
        .non_singleton_blocks()
        .map(|b| Partition::single_block(x.ground_size(), b).expect("block of x"))
        .collect();
    out.sort();
    out
}

/// The set `G` of elements of `I` whose rank is divisible by `k`.
#[derive(Clone, Debug)]
pub struct GSet {
    m: usize,
    k: usize,
    elements: Vec<Partition>,
    members: HashSet<Partition>,
}

impl GSet {
    pub fn new(m: usize, k: usize) -> Result<Self> {
        if m == 0 || m > 20 || k == 0 {
            return Err(Error::InvalidArgument(format!(
                "G is enumerated for 1 ≤ m ≤ 20 and k ≥ 1, got m = {m}, k = {k}"
            )));
        }
        let elements: Vec<Partition> = building_set_i(m)
            .into_iter()
            .filter(|x| x.rank() % k == 0)
            .collect();
        let members = elements.iter().cloned().collect();
        Ok(GSet { m, k, elements, members })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn elements(&self) -> &[Partition] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: &Partition) -> bool {
        self.members.contains(x)
    }

    /// `G` without the one-block partition.
    pub fn without_top(&self) -> Vec<Partition> {
        self.elements.iter().filter(|x| x.num_blocks() > 1).cloned().collect()
    }

    /// `F^k(x) = max G_{≤x}`, computed by filtering `G`.
    pub fn factors(&self, x: &Partition) -> Vec<Partition> {
        let below: Vec<&Partition> = self.elements.iter().filter(|g| g.refines(x)).collect();
        let mut out: Vec<Partition> = below
            .iter()
            .filter(|g| !below.iter().any(|h| h != *g && g.refines(h)))
            .map(|g| (*g).clone())
            .collect();
        out.sort();
        out
    }

    /// `F^k(ω)`: union of factors over a chain of the proper part.
    pub fn factors_of_chain(&self, chain: &[Partition]) -> Result<BTreeSet<Partition>> {
        for (i, a) in chain.iter().enumerate() {
            if a.ground_size() != self.m {
                return Err(Error::InvalidArgument(format!("{a} is not a partition of 1..{}", self.m)));
            }
            if a.num_blocks() == 1 {
                return Err(Error::InvalidArgument("chains must avoid the one-block partition".into()));
            }
            for b in &chain[i + 1..] {
                if !a.refines(b) && !b.refines(a) {
                    return Err(Error::InvalidArgument(format!("{a} and {b} are not comparable")));
                }
            }
        }
        Ok(chain.iter().flat_map(|x| self.factors(x)).collect())
    }
}

/// All partitions of `{1..m}` with block sizes ≡ 1 (mod k).
pub fn enumerate_partitions(m: usize, k: usize, cap: usize) -> Result<PartitionPoset> {
    PartitionPoset::enumerate(m, k, cap)
}

/// Join in Π_m.
pub fn partition_join(a: &Partition, b: &Partition) -> Result<Partition> {
    if a.ground_size() != b.ground_size() {
        return Err(Error::InvalidArgument(format!("{a} and {b} have different ground sets")));
    }
    Ok(a.join(b))
}

/// `∨^k`: minimal upper bounds inside the restricted poset.
pub fn k_minimal_upper_bounds(p: &PartitionPoset, s: &[Partition]) -> Result<Vec<Partition>> {
    p.minimal_upper_bounds(s)
}

pub fn g_set(m: usize, k: usize) -> Result<GSet> {
    GSet::new(m, k)
}

pub fn factors_k(g: &GSet, x: &Partition) -> Vec<Partition> {
    g.factors(x)
}

pub fn apply_permutation(x: &Partition, perm: &Permutation) -> Partition {
    x.permuted(perm)
}

/// Π^(k)_m together with `G`, for `m = (n − 1)k + 1`.
#[derive(Clone, Debug)]
pub struct KInstance {
    pub k: usize,
    pub n: usize,
    pub m: usize,
    pub poset: PartitionPoset,
    pub g: GSet,
    /// Poset indices of the members of `G`.
    pub g_indices: Vec<usize>,
    /// `G` as a row over the poset.
    pub g_row: BitRow,
}

impl KInstance {
    pub fn new(k: usize, n: usize, cap: usize) -> Result<Self> {
        if k == 0 || n < 3 {
            return Err(Error::InvalidArgument(format!("need k ≥ 1 and n ≥ 3, got k = {k}, n = {n}")));
        }
        let m = (n - 1)
            .checked_mul(k)
            .and_then(|x| x.checked_add(1))
            .filter(|&m| m <= MAX_GROUND_SET)
            .ok_or_else(|| resource_limit("ground set size", format!("(n-1)k+1 for n = {n}, k = {k}"), MAX_GROUND_SET))?;
        if m > 20 {
            return Err(resource_limit("ground set size", m, 20));
        }
        let poset = PartitionPoset::enumerate(m, k, cap)?;
        let g = GSet::new(m, k)?;
        let g_indices: Vec<usize> = g
            .elements()
            .iter()
            .map(|x| poset.index_of(x).expect("G lies in the restricted poset"))
            .collect();
        let g_row = poset.poset().row_of(&g_indices);
        Ok(KInstance { k, n, m, poset, g, g_indices, g_row })
    }

    /// `∨^k` of a set of partitions.
    pub fn k_join_set(&self, s: &[Partition]) -> Result<Vec<Partition>> {
        self.poset.minimal_upper_bounds(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn shorthand_round_trip() {
        let x = p("(123)4567");
        assert_eq!(x.to_string(), "(123)4567");
        assert_eq!(x.blocks(), vec![vec![1, 2, 3], vec![4], vec![5], vec![6], vec![7]]);
        assert_eq!(p("1(234)567").to_string(), "1(234)567");
        assert_eq!(p("(23)14"), p("1(23)4"));
        assert!("(12".parse::<Partition>().is_err());
        assert!("(12)2".parse::<Partition>().is_err());
    }

    #[test]
    fn long_form_for_large_ground_sets() {
        let x = Partition::single_block(10, 0b11_0000_0001).unwrap();
        assert_eq!(x.to_string(), "1,9,10|2|3|4|5|6|7|8");
        assert_eq!(x.to_string().parse::<Partition>().unwrap(), x);
    }

    #[test]
    fn json_form() {
        let x = p("(123)4567");
        assert_eq!(serde_json::to_value(&x).unwrap(), serde_json::json!([[1, 2, 3], [4], [5], [6], [7]]));
        let y: Partition = serde_json::from_value(serde_json::json!([[4], [1, 2, 3], [5]])).unwrap();
        assert_eq!(y, p("(123)45"));
        assert!(serde_json::from_value::<Partition>(serde_json::json!([[1, 2], [2]])).is_err());
    }

    #[test]
    fn joins() {
        assert_eq!(p("(123)4567").join(&p("1(234)567")), p("(1234)567"));
        let x = p("(12)(34)");
        assert_eq!(x.join(&Partition::finest(4)), x);
        assert_eq!(p("(12)(34)").join(&p("(14)(23)")), p("(1234)"));
    }

    #[test]
    fn refinement_is_join_absorption() {
        let all = PartitionPoset::full(5, DEFAULT_ELEMENT_CAP).unwrap();
        for a in all.poset().labels() {
            for b in all.poset().labels() {
                assert_eq!(a.refines(b), a.join(b) == *b);
            }
        }
    }

    #[test]
    fn rank_bounds() {
        assert_eq!(Partition::finest(6).rank(), 0);
        assert_eq!(Partition::coarsest(6).rank(), 5);
    }

    #[test]
    fn spec_named_wrappers() {
        let p72 = enumerate_partitions(7, 2, DEFAULT_ELEMENT_CAP).unwrap();
        let mut bounds = k_minimal_upper_bounds(&p72, &[p("(123)4567"), p("1(234)567")]).unwrap();
        bounds.sort();
        let mut want = vec![p("(12345)67"), p("(12346)57"), p("(12347)56")];
        want.sort();
        assert_eq!(bounds, want);
        assert_eq!(k_minimal_upper_bounds(&p72, &[p("(123)4567")]).unwrap(), vec![p("(123)4567")]);
        assert_eq!(
            k_minimal_upper_bounds(&p72, &[p("(123)4567"), p("123(456)7")]).unwrap(),
            vec![p("(123)(456)7")]
        );
        assert!(partition_join(&p("(12)3"), &p("(12)34")).is_err());
        assert_eq!(apply_permutation(&p("(12)34"), &Permutation::transposition(4, 1, 3).unwrap()), p("1(23)4"));
        assert_eq!(g_set(5, 2).unwrap().len(), 11);
        let g = g_set(7, 2).unwrap();
        assert_eq!(factors_k(&g, &p("1(234)567")), vec![p("1(234)567")]);
    }

    #[test]
    fn instances() {
        let inst = KInstance::new(2, 4, DEFAULT_ELEMENT_CAP).unwrap();
        assert_eq!((inst.m, inst.poset.len(), inst.g.len()), (7, 128, 57));
        assert!(matches!(KInstance::new(1, 2, 10), Err(Error::InvalidArgument(_))));
        assert!(matches!(KInstance::new(1, 99, 10), Err(Error::ResourceLimit { .. })));
    }

    #[test]
    fn counting() {
        assert_eq!(count_partitions(3, 1), Some(5));
        assert_eq!(count_partitions(7, 1), Some(877));
        assert_eq!(count_partitions(5, 2), Some(12));
        assert_eq!(count_partitions(7, 2), Some(128));
        assert_eq!(count_partitions(200, 1), None);
    }

    #[test]
    fn enumeration_cap() {
        let err = PartitionPoset::enumerate(7, 1, 100).unwrap_err();
        assert!(matches!(err, Error::ResourceLimit { .. }));
        assert!(matches!(PartitionPoset::enumerate(0, 2, 100), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn designated_bounds() {
        let p52 = PartitionPoset::enumerate(5, 2, DEFAULT_ELEMENT_CAP).unwrap();
        assert_eq!(p52.poset().min(), Some(0));
        assert_eq!(p52.partition(0), &Partition::finest(5));
        let top = p52.poset().max().unwrap();
        assert_eq!(p52.partition(top), &Partition::coarsest(5));
        // 6 ≢ 1 (mod 2): no one-block partition
        let p62 = PartitionPoset::enumerate(6, 2, DEFAULT_ELEMENT_CAP).unwrap();
        assert_eq!(p62.poset().max(), None);
    }

    #[test]
    fn building_set_sizes() {
        assert_eq!(building_set_i(3).len(), 4);
        assert_eq!(building_set_i(4).len(), 11);
        assert!(building_set_i(5).iter().all(|x| x.sole_block().is_some()));
    }

    #[test]
    fn g_set_sizes() {
        assert_eq!(GSet::new(5, 2).unwrap().len(), 11);
        assert_eq!(GSet::new(7, 2).unwrap().len(), 57);
        assert_eq!(GSet::new(6, 1).unwrap().len(), building_set_i(6).len());
        let g = GSet::new(7, 3).unwrap();
        assert!(g.elements().iter().all(|x| x.sole_block().unwrap().count_ones() % 3 == 1));
    }

    #[test]
    fn factors() {
        assert_eq!(factors_i(&p("(12)(34)")), vec![p("12(34)"), p("(12)34")]);
        assert_eq!(factors_i(&p("(12)34")), vec![p("(12)34")]);
        assert_eq!(factors_i(&p("(123)(45)6")).len(), 2);
        let g = GSet::new(7, 2).unwrap();
        assert_eq!(g.factors(&p("(123)(456)7")), vec![p("123(456)7"), p("(123)4567")]);
        assert_eq!(g.factors(&p("1(234)567")), vec![p("1(234)567")]);
        assert!(g.factors(&Partition::finest(7)).is_empty());
    }

    #[test]
    fn factors_of_chains() {
        let g = GSet::new(7, 2).unwrap();
        let x = p("(123)4567");
        let y = p("(123)(456)7");
        assert_eq!(g.factors_of_chain(&[x.clone()]).unwrap().into_iter().collect::<Vec<_>>(), g.factors(&x));
        let both = g.factors_of_chain(&[x.clone(), y.clone()]).unwrap();
        assert_eq!(both.len(), 2);
        assert!(g.factors_of_chain(&[Partition::coarsest(7)]).is_err());
        assert!(g.factors_of_chain(&[x, p("1(234)567")]).is_err());
    }

    #[test]
    fn permutation_action() {
        let x = p("(12)34");
        assert_eq!(x.permuted(&Permutation::identity(4)), x);
        assert_eq!(x.permuted(&Permutation::transposition(4, 1, 2).unwrap()), x);
        assert_eq!(x.permuted(&Permutation::transposition(4, 1, 3).unwrap()), p("1(23)4"));
    }

    #[test]
    fn permutations_commute_with_join_and_preserve_restricted_poset() {
        let p72 = PartitionPoset::enumerate(7, 2, DEFAULT_ELEMENT_CAP).unwrap();
        for perm in Permutation::sample(7, 10, 11) {
            for a in p72.poset().labels().iter().step_by(7) {
                assert!(p72.contains(&a.permuted(&perm)));
                for b in p72.poset().labels().iter().step_by(5) {
                    assert_eq!(a.join(b).permuted(&perm), a.permuted(&perm).join(&b.permuted(&perm)));
                }
            }
        }
    }
}
