//! Finite posets over dense element indices.
//!
//! The order relation is stored twice, as up-set and down-set bit rows, so
//! that `leq` is a single bit test and bound computations reduce to row
//! intersections. Labels are opaque payloads carried along for output and
//! for canonical tie-breaking.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::bitset::BitRow;
use crate::error::{resource_limit, Error, Result};
use crate::simplicial::SimplicialComplex;

#[derive(Clone, Debug)]
pub struct Poset<L> {
    labels: Vec<L>,
    up: Vec<BitRow>,
    down: Vec<BitRow>,
    covers: Vec<(usize, usize)>,
    rank: Vec<usize>,
    min: Option<usize>,
    max: Option<usize>,
}

/// A strictly increasing sequence of pairwise comparable elements.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Chain(Vec<usize>);

impl Chain {
    pub fn new<L>(poset: &Poset<L>, mut elements: Vec<usize>) -> Result<Chain> {
        for &e in &elements {
            poset.check_index(e)?;
        }
        elements.sort_by_key(|&e| poset.down[e].count());
        elements.dedup();
        for w in elements.windows(2) {
            if !poset.lt(w[0], w[1]) {
                return Err(Error::NotComparable(w[0], w[1]));
            }
        }
        Ok(Chain(elements))
    }

    pub fn elements(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Tie-breaking rule for [`Poset::linear_extension`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExtensionPolicy {
    /// Sort by rank, then by label order.
    RankThenCanonical,
    /// Random topological sort driven by a seeded generator.
    SeededRandom(u64),
}

impl<L> Poset<L> {
    /// Builds a poset as the reflexive-transitive closure of `covers`.
    pub fn from_covers(labels: Vec<L>, covers: &[(usize, usize)]) -> Result<Self> {
        let n = labels.len();
        let mut succ = vec![Vec::new(); n];
        let mut indeg = vec![0usize; n];
        for &(a, b) in covers {
            if a >= n || b >= n {
                return Err(Error::IndexOutOfRange {
                    index: a.max(b),
                    len: n,
                });
            }
            if a == b {
                return Err(Error::CycleDetected(a, b));
            }
            succ[a].push(b);
            indeg[b] += 1;
        }
        let mut order = Vec::with_capacity(n);
        let mut queue: VecDeque<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &w in &succ[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    queue.push_back(w);
                }
            }
        }
        if order.len() < n {
            let (a, b) = covers
                .iter()
                .copied()
                .find(|&(a, b)| indeg[a] > 0 && indeg[b] > 0)
                .unwrap_or(covers[0]);
            return Err(Error::CycleDetected(a, b));
        }
        let mut down: Vec<BitRow> = (0..n)
            .map(|i| {
                let mut r = BitRow::new(n);
                r.insert(i);
                r
            })
            .collect();
        for &v in &order {
            for &w in &succ[v] {
                let row = down[v].clone();
                down[w].union_with(&row);
            }
        }
        Ok(Self::from_down_rows(labels, down))
    }

    /// Builds a poset from an order predicate. `leq` must be a partial order;
    /// antisymmetry violations are reported as cycles.
    pub fn from_leq(labels: Vec<L>, leq: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let n = labels.len();
        let mut down = vec![BitRow::new(n); n];
        for (j, row) in down.iter_mut().enumerate() {
            row.insert(j);
            for i in 0..n {
                if i != j && leq(i, j) {
                    row.insert(i);
                }
            }
        }
        for j in 0..n {
            for i in down[j].iter() {
                if i != j && down[i].contains(j) {
                    return Err(Error::CycleDetected(i, j));
                }
            }
        }
        Ok(Self::from_down_rows(labels, down))
    }

    fn from_down_rows(labels: Vec<L>, down: Vec<BitRow>) -> Self {
        let n = labels.len();
        let mut up = vec![BitRow::new(n); n];
        for (j, row) in down.iter().enumerate() {
            for i in row.iter() {
                up[i].insert(j);
            }
        }
        let mut covers = Vec::new();
        for j in 0..n {
            for i in down[j].iter() {
                if i != j && up[i].intersection_count(&down[j]) == 2 {
                    covers.push((i, j));
                }
            }
        }
        covers.sort_unstable();
        let mut topo: Vec<usize> = (0..n).collect();
        topo.sort_by_key(|&i| down[i].count());
        let mut rank = vec![0usize; n];
        let mut lower: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(a, b) in &covers {
            lower[b].push(a);
        }
        for &v in &topo {
            rank[v] = lower[v].iter().map(|&a| rank[a] + 1).max().unwrap_or(0);
        }
        Poset {
            labels,
            up,
            down,
            covers,
            rank,
            min: None,
            max: None,
        }
    }

    /// Designates a minimum and/or maximum. Each must be comparable to (below,
    /// resp. above) every element.
    pub fn with_bounds(mut self, min: Option<usize>, max: Option<usize>) -> Result<Self> {
        if let Some(z) = min {
            self.check_index(z)?;
            if self.up[z].count() != self.len() {
                return Err(Error::InvalidArgument(format!(
                    "element {z} is not below every element"
                )));
            }
        }
        if let Some(o) = max {
            self.check_index(o)?;
            if self.down[o].count() != self.len() {
                return Err(Error::InvalidArgument(format!(
                    "element {o} is not above every element"
                )));
            }
        }
        self.min = min;
        self.max = max;
        Ok(self)
    }

    /// Designates the global minimum and maximum when they exist.
    pub fn detect_bounds(mut self) -> Self {
        let n = self.len();
        self.min = (0..n).find(|&i| self.up[i].count() == n);
        self.max = (0..n).find(|&i| self.down[i].count() == n);
        self
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i < self.len() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: i,
                len: self.len(),
            })
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[L] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &L {
        &self.labels[i]
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.up[a].contains(b)
    }

    #[inline]
    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.leq(a, b) || self.leq(b, a)
    }

    pub fn up_set(&self, a: usize) -> &BitRow {
        &self.up[a]
    }

    pub fn down_set(&self, a: usize) -> &BitRow {
        &self.down[a]
    }

    /// Cover pairs `(a, b)` with `a` covered by `b`, sorted.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    /// Length of the longest chain from a minimal element up to `a`.
    pub fn rank(&self, a: usize) -> usize {
        self.rank[a]
    }

    pub fn min(&self) -> Option<usize> {
        self.min
    }

    pub fn max(&self) -> Option<usize> {
        self.max
    }

    /// Number of `true` entries of the order relation.
    pub fn relation_size(&self) -> usize {
        self.up.iter().map(BitRow::count).sum()
    }

    /// Elements other than the designated minimum and maximum.
    pub fn proper_part(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| Some(i) != self.min && Some(i) != self.max)
            .collect()
    }

    pub fn minimal_of(&self, set: &BitRow) -> Vec<usize> {
        set.iter()
            .filter(|&u| self.down[u].intersection_count(set) == 1)
            .collect()
    }

    pub fn maximal_of(&self, set: &BitRow) -> Vec<usize> {
        set.iter()
            .filter(|&u| self.up[u].intersection_count(set) == 1)
            .collect()
    }

    pub fn row_of(&self, elements: &[usize]) -> BitRow {
        let mut r = BitRow::new(self.len());
        for &e in elements {
            r.insert(e);
        }
        r
    }

    fn common(&self, s: &[usize], rows: &[BitRow]) -> Result<BitRow> {
        if s.is_empty() {
            return Err(Error::InvalidArgument("empty element set".into()));
        }
        let mut acc = BitRow::full(self.len());
        for &e in s {
            self.check_index(e)?;
            acc.intersect_with(&rows[e]);
        }
        Ok(acc)
    }

    /// Minimal elements among the common upper bounds of `s`.
    pub fn minimal_upper_bounds(&self, s: &[usize]) -> Result<Vec<usize>> {
        let ub = self.common(s, &self.up)?;
        Ok(self.minimal_of(&ub))
    }

    /// Maximal elements among the common lower bounds of `s`.
    pub fn maximal_lower_bounds(&self, s: &[usize]) -> Result<Vec<usize>> {
        let lb = self.common(s, &self.down)?;
        Ok(self.maximal_of(&lb))
    }

    pub fn join(&self, s: &[usize]) -> Result<usize> {
        let mub = self.minimal_upper_bounds(s)?;
        match mub.len() {
            0 => Err(Error::NoUpperBound),
            1 => Ok(mub[0]),
            _ => Err(Error::NotUnique(mub)),
        }
    }

    pub fn meet(&self, s: &[usize]) -> Result<usize> {
        let mlb = self.maximal_lower_bounds(s)?;
        match mlb.len() {
            0 => Err(Error::NoLowerBound),
            1 => Ok(mlb[0]),
            _ => Err(Error::NotUnique(mlb)),
        }
    }

    /// True if every pair of elements has a join and a meet.
    pub fn is_lattice(&self) -> bool {
        let n = self.len();
        (0..n).all(|a| {
            (a + 1..n).all(|b| self.join(&[a, b]).is_ok() && self.meet(&[a, b]).is_ok())
        })
    }

    pub fn interval_indices(&self, a: usize, b: usize) -> Result<Vec<usize>> {
        self.check_index(a)?;
        self.check_index(b)?;
        if !self.leq(a, b) {
            return Err(Error::NotComparable(a, b));
        }
        let mut r = self.up[a].clone();
        r.intersect_with(&self.down[b]);
        Ok(r.iter().collect())
    }

    /// Whether `seq` lists distinct elements in an order compatible with `≤`.
    pub fn is_linear_extension(&self, seq: &[usize]) -> bool {
        let mut seen = BitRow::new(self.len());
        for &x in seq {
            if x >= self.len() || seen.contains(x) {
                return false;
            }
            seen.insert(x);
        }
        seq.iter()
            .enumerate()
            .all(|(i, &x)| seq[i + 1..].iter().all(|&y| !self.lt(y, x)))
    }
}

impl<L: Clone> Poset<L> {
    /// Induced subposet on `subset` (kept in the given order).
    pub fn induced(&self, subset: &[usize]) -> Poset<L> {
        let labels = subset.iter().map(|&i| self.labels[i].clone()).collect();
        Poset::from_leq(labels, |i, j| self.leq(subset[i], subset[j]))
            .expect("restriction of a partial order is a partial order")
    }

    /// The closed interval `[a, b]` with `a` and `b` designated as bounds.
    pub fn interval(&self, a: usize, b: usize) -> Result<Poset<L>> {
        let idx = self.interval_indices(a, b)?;
        let lo = idx.iter().position(|&x| x == a);
        let hi = idx.iter().position(|&x| x == b);
        self.induced(&idx).with_bounds(lo, hi)
    }

    /// Cartesian product with componentwise order. Tuples are enumerated in
    /// mixed radix with the last coordinate varying fastest.
    pub fn product(posets: &[&Poset<L>]) -> Poset<Vec<L>> {
        let sizes: Vec<usize> = posets.iter().map(|p| p.len()).collect();
        let total: usize = sizes.iter().product();
        let decode = |mut t: usize| -> Vec<usize> {
            let mut coords = vec![0; sizes.len()];
            for (c, &s) in coords.iter_mut().zip(&sizes).rev() {
                *c = t % s;
                t /= s;
            }
            coords
        };
        let tuples: Vec<Vec<usize>> = (0..total).map(decode).collect();
        let labels = tuples
            .iter()
            .map(|c| {
                c.iter()
                    .zip(posets)
                    .map(|(&i, p)| p.labels[i].clone())
                    .collect()
            })
            .collect();
        let poset = Poset::from_leq(labels, |a, b| {
            tuples[a]
                .iter()
                .zip(&tuples[b])
                .zip(posets)
                .all(|((&x, &y), p)| p.leq(x, y))
        })
        .expect("product of partial orders is a partial order");
        let encode = |pick: &dyn Fn(&Poset<L>) -> Option<usize>| -> Option<usize> {
            posets
                .iter()
                .zip(&sizes)
                .try_fold(0usize, |acc, (p, &s)| pick(p).map(|i| acc * s + i))
        };
        let lo = encode(&|p: &Poset<L>| p.min);
        let hi = encode(&|p: &Poset<L>| p.max);
        poset
            .with_bounds(lo, hi)
            .expect("componentwise bounds are bounds")
    }

    /// Order complex of the proper part: vertices are the non-designated
    /// elements, faces are nonempty chains.
    pub fn order_complex(&self) -> SimplicialComplex<L> {
        self.order_complex_capped(usize::MAX)
            .expect("uncapped enumeration")
    }

    pub fn order_complex_capped(&self, max_faces: usize) -> Result<SimplicialComplex<L>> {
        let proper = self.proper_part();
        let mut pos = vec![usize::MAX; self.len()];
        for (i, &e) in proper.iter().enumerate() {
            pos[e] = i;
        }
        let mut faces: Vec<Vec<usize>> = Vec::new();
        let mut stack: Vec<usize> = Vec::new();
        fn extend<L>(
            p: &Poset<L>,
            proper: &[usize],
            pos: &[usize],
            stack: &mut Vec<usize>,
            faces: &mut Vec<Vec<usize>>,
            cap: usize,
        ) -> Result<()> {
            let mut face: Vec<usize> = stack.iter().map(|&e| pos[e]).collect();
            face.sort_unstable();
            faces.push(face);
            if faces.len() > cap {
                return Err(resource_limit("order complex faces", faces.len(), cap));
            }
            let last = *stack.last().expect("nonempty chain");
            for &next in proper {
                if p.lt(last, next) {
                    stack.push(next);
                    extend(p, proper, pos, stack, faces, cap)?;
                    stack.pop();
                }
            }
            Ok(())
        }
        for &v in &proper {
            stack.push(v);
            extend(self, &proper, &pos, &mut stack, &mut faces, max_faces)?;
            stack.pop();
        }
        let labels = proper.iter().map(|&e| self.labels[e].clone()).collect();
        Ok(SimplicialComplex::from_closed_faces(labels, faces))
    }
}

impl<L: Ord> Poset<L> {
    /// A total order on `subset` compatible with `≤`.
    pub fn linear_extension(&self, subset: &[usize], policy: ExtensionPolicy) -> Result<Vec<usize>> {
        for &e in subset {
            self.check_index(e)?;
        }
        let mut items: Vec<usize> = subset.to_vec();
        items.sort_unstable();
        items.dedup();
        match policy {
            ExtensionPolicy::RankThenCanonical => {
                // rank is the longest chain below, hence strictly monotone
                items.sort_by(|&a, &b| {
                    self.rank[a]
                        .cmp(&self.rank[b])
                        .then_with(|| self.labels[a].cmp(&self.labels[b]))
                        .then_with(|| a.cmp(&b))
                });
                Ok(items)
            }
            ExtensionPolicy::SeededRandom(seed) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                items.shuffle(&mut rng);
                Ok(self.topological_repair(items, &mut rng))
            }
        }
    }

    /// Kahn's algorithm restricted to `items`, picking uniformly among the
    /// currently available elements.
    fn topological_repair(&self, items: Vec<usize>, rng: &mut ChaCha8Rng) -> Vec<usize> {
        use rand::Rng;
        let n = items.len();
        let mut indeg: Vec<usize> = items
            .iter()
            .map(|&x| items.iter().filter(|&&y| self.lt(y, x)).count())
            .collect();
        let mut done = vec![false; n];
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            let avail: Vec<usize> = (0..n).filter(|&i| !done[i] && indeg[i] == 0).collect();
            let pick = avail[rng.gen_range(0..avail.len())];
            done[pick] = true;
            out.push(items[pick]);
            for i in 0..n {
                if !done[i] && self.lt(items[pick], items[i]) {
                    indeg[i] -= 1;
                }
            }
        }
        out
    }
}

/// Invariant used to prune isomorphism search.
fn poset_signature<L>(p: &Poset<L>, i: usize) -> (usize, usize, usize, usize, usize) {
    let lower_covers = p.covers.iter().filter(|c| c.1 == i).count();
    let upper_covers = p.covers.iter().filter(|c| c.0 == i).count();
    (
        p.rank[i],
        p.down[i].count(),
        p.up[i].count(),
        lower_covers,
        upper_covers,
    )
}

/// Searches for an order isomorphism `P → Q`. Returns `image[i]` for every
/// element `i` of `P`.
pub fn is_isomorphic<A, B>(p: &Poset<A>, q: &Poset<B>) -> Option<Vec<usize>> {
    is_isomorphic_with(p, q, &[])
}

/// As [`is_isomorphic`], with some images prescribed.
pub fn is_isomorphic_with<A, B>(
    p: &Poset<A>,
    q: &Poset<B>,
    fixed: &[(usize, usize)],
) -> Option<Vec<usize>> {
    let n = p.len();
    if n != q.len() || p.covers.len() != q.covers.len() {
        return None;
    }
    let sp: Vec<_> = (0..n).map(|i| poset_signature(p, i)).collect();
    let sq: Vec<_> = (0..n).map(|i| poset_signature(q, i)).collect();
    let mut a = sp.clone();
    let mut b = sq.clone();
    a.sort_unstable();
    b.sort_unstable();
    if a != b {
        return None;
    }
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    for &(s, t) in fixed {
        if s >= n || t >= n || sp[s] != sq[t] || image[s] != usize::MAX || used[t] {
            return None;
        }
        image[s] = t;
        used[t] = true;
    }
    for &(s, t) in fixed {
        for &(s2, t2) in fixed {
            if p.leq(s, s2) != q.leq(t, t2) {
                return None;
            }
        }
    }
    let mut order: Vec<usize> = (0..n).filter(|&i| image[i] == usize::MAX).collect();
    order.sort_by_key(|&i| (p.rank[i], i));
    let mut mapped: Vec<usize> = fixed.iter().map(|f| f.0).collect();

    fn go<A, B>(
        p: &Poset<A>,
        q: &Poset<B>,
        sp: &[(usize, usize, usize, usize, usize)],
        sq: &[(usize, usize, usize, usize, usize)],
        order: &[usize],
        depth: usize,
        image: &mut [usize],
        used: &mut [bool],
        mapped: &mut Vec<usize>,
    ) -> bool {
        if depth == order.len() {
            return true;
        }
        let s = order[depth];
        for t in 0..q.len() {
            if used[t] || sp[s] != sq[t] {
                continue;
            }
            let consistent = mapped
                .iter()
                .all(|&s2| p.leq(s, s2) == q.leq(t, image[s2]) && p.leq(s2, s) == q.leq(image[s2], t));
            if !consistent {
                continue;
            }
            image[s] = t;
            used[t] = true;
            mapped.push(s);
            if go(p, q, sp, sq, order, depth + 1, image, used, mapped) {
                return true;
            }
            mapped.pop();
            used[t] = false;
            image[s] = usize::MAX;
        }
        false
    }

    if go(p, q, &sp, &sq, &order, 0, &mut image, &mut used, &mut mapped) {
        Some(image)
    } else {
        None
    }
}

#[derive(Serialize, Deserialize)]
struct PosetJson<L> {
    elements: Vec<L>,
    covers: Vec<[usize; 2]>,
    min: Option<usize>,
    max: Option<usize>,
}

impl<L: Serialize + Clone> Poset<L> {
    pub fn to_json(&self) -> serde_json::Value {
        let doc = PosetJson {
            elements: self.labels.clone(),
            covers: self.covers.iter().map(|&(a, b)| [a, b]).collect(),
            min: self.min,
            max: self.max,
        };
        serde_json::to_value(doc).expect("poset serializes")
    }
}

impl<L: DeserializeOwned> Poset<L> {
    pub fn from_json(value: serde_json::Value) -> Result<Self> {
        let doc: PosetJson<L> =
            serde_json::from_value(value).map_err(|e| Error::Parse(e.to_string()))?;
        let covers: Vec<(usize, usize)> = doc.covers.iter().map(|c| (c[0], c[1])).collect();
        Poset::from_covers(doc.elements, &covers)?.with_bounds(doc.min, doc.max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn chain(n: usize) -> Poset<usize> {
        let covers: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Poset::from_covers((0..n).collect(), &covers).unwrap()
    }

    fn antichain(n: usize) -> Poset<usize> {
        Poset::from_covers((0..n).collect(), &[]).unwrap()
    }

    #[test]
    fn three_chain_relation() {
        let p = chain(3);
        assert_eq!(p.relation_size(), 6);
        assert!(p.leq(0, 2));
        assert!(!p.leq(2, 0));
    }

    #[test]
    fn singleton_relation() {
        let p = chain(1);
        assert_eq!(p.relation_size(), 1);
        assert!(p.leq(0, 0));
    }

    #[test]
    fn two_cycle_rejected() {
        let err = Poset::from_covers(vec![0, 1], &[(0, 1), (1, 0)]).unwrap_err();
        assert!(matches!(err, Error::CycleDetected(..)));
    }

    #[test]
    fn upper_bounds_without_top() {
        // 0 < a, 0 < b
        let p = Poset::from_covers(vec!['0', 'a', 'b'], &[(0, 1), (0, 2)]).unwrap();
        assert!(p.minimal_upper_bounds(&[1, 2]).unwrap().is_empty());
        assert_eq!(p.join(&[1, 2]), Err(Error::NoUpperBound));
        assert_eq!(p.minimal_upper_bounds(&[1]).unwrap(), vec![1]);
        assert_eq!(p.join(&[2]).unwrap(), 2);
        assert_eq!(p.meet(&[1, 2]).unwrap(), 0);
    }

    #[test]
    fn bowtie_join_not_unique() {
        // a, b < c, d
        let p = Poset::from_covers(vec![0, 1, 2, 3], &[(0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
        assert_eq!(p.join(&[0, 1]), Err(Error::NotUnique(vec![2, 3])));
        assert_eq!(p.meet(&[2, 3]), Err(Error::NotUnique(vec![0, 1])));
        assert!(!p.is_lattice());
    }

    #[test]
    fn interval_of_a_point() {
        let p = chain(4);
        assert_eq!(p.interval(2, 2).unwrap().len(), 1);
        assert_eq!(p.interval(1, 3).unwrap().len(), 3);
        assert!(matches!(p.interval(3, 1), Err(Error::NotComparable(3, 1))));
    }

    #[test]
    fn product_of_two_chains_is_a_diamond() {
        let c = chain(2).detect_bounds();
        let d = Poset::product(&[&c, &c]);
        assert_eq!(d.len(), 4);
        assert_eq!(d.covers().len(), 4);
        assert_eq!(d.min(), Some(0));
        assert_eq!(d.max(), Some(3));
        let diamond =
            Poset::from_covers(vec![0, 1, 2, 3], &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        assert!(is_isomorphic(&d, &diamond).is_some());
        let single = Poset::product(&[&c]);
        assert!(is_isomorphic(&single, &c).is_some());
    }

    #[test]
    fn isomorphism_basic() {
        let c = chain(3);
        assert_eq!(is_isomorphic(&c, &c), Some(vec![0, 1, 2]));
        assert_eq!(is_isomorphic(&c, &antichain(3)), None);
        // fixed assignment that is inconsistent
        let a = antichain(2);
        assert_eq!(is_isomorphic_with(&a, &a, &[(0, 1)]), Some(vec![1, 0]));
    }

    #[test]
    fn order_complex_of_bounded_chain() {
        let p = chain(4).detect_bounds();
        let k = p.order_complex();
        assert_eq!(k.f_vector(), vec![2, 1]);
        assert_eq!(k.labels(), &[1, 2]);
    }

    #[test]
    fn empty_proper_part_gives_empty_complex() {
        let p = chain(2).detect_bounds();
        assert_eq!(p.order_complex().num_vertices(), 0);
    }

    #[test]
    fn linear_extensions_on_chain_and_antichain() {
        let c = chain(4);
        let ext = c.linear_extension(&[3, 1, 2], ExtensionPolicy::RankThenCanonical).unwrap();
        assert_eq!(ext, vec![1, 2, 3]);
        let ext = c.linear_extension(&[3, 1, 2], ExtensionPolicy::SeededRandom(9)).unwrap();
        assert_eq!(ext, vec![1, 2, 3]);
        let a = antichain(4);
        let ext = a.linear_extension(&[3, 0, 2], ExtensionPolicy::RankThenCanonical).unwrap();
        assert_eq!(ext, vec![0, 2, 3]);
    }

    #[test]
    fn chain_validation() {
        let p = Poset::from_covers(vec![0, 1, 2], &[(0, 1), (0, 2)]).unwrap();
        assert_eq!(Chain::new(&p, vec![1, 0]).unwrap().elements(), &[0, 1]);
        assert!(Chain::new(&p, vec![1, 2]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let p = Poset::from_covers(vec![10, 20, 30], &[(0, 1), (0, 2)])
            .unwrap()
            .detect_bounds();
        let v = p.to_json();
        assert_eq!(v["min"], serde_json::json!(0));
        assert_eq!(v["max"], serde_json::Value::Null);
        let q: Poset<i32> = Poset::from_json(v).unwrap();
        assert_eq!(q.covers(), p.covers());
        assert_eq!(q.min(), Some(0));
    }

    /// Floyd–Warshall closure, used as an oracle.
    fn closure(n: usize, covers: &[(usize, usize)]) -> Vec<Vec<bool>> {
        let mut r = vec![vec![false; n]; n];
        for (i, row) in r.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in covers {
            r[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if r[i][k] && r[k][j] {
                        r[i][j] = true;
                    }
                }
            }
        }
        r
    }

    fn dag_strategy() -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
        (1usize..12).prop_flat_map(|n| {
            let pairs = proptest::collection::vec((0..n, 0..n), 0..3 * n);
            (Just(n), pairs).prop_map(|(n, ps)| {
                let covers = ps
                    .into_iter()
                    .filter(|(a, b)| a != b)
                    .map(|(a, b)| (a.min(b), a.max(b)))
                    .collect();
                (n, covers)
            })
        })
    }

    proptest! {
        #[test]
        fn closure_matches_floyd_warshall((n, covers) in dag_strategy()) {
            let p = Poset::from_covers((0..n).collect::<Vec<_>>(), &covers).unwrap();
            let oracle = closure(n, &covers);
            for i in 0..n {
                for j in 0..n {
                    prop_assert_eq!(p.leq(i, j), oracle[i][j]);
                }
            }
        }

        #[test]
        fn minimal_upper_bounds_are_incomparable_bounds(
            (n, covers) in dag_strategy(), picks in proptest::collection::vec(0usize..12, 1..4)
        ) {
            let p = Poset::from_covers((0..n).collect::<Vec<_>>(), &covers).unwrap();
            let s: Vec<usize> = picks.into_iter().map(|x| x % n).collect();
            let mub = p.minimal_upper_bounds(&s).unwrap();
            for &u in &mub {
                for &x in &s {
                    prop_assert!(p.leq(x, u));
                }
                for &v in &mub {
                    prop_assert!(u == v || !p.comparable(u, v));
                }
            }
            match p.join(&s) {
                Ok(j) => prop_assert_eq!(mub, vec![j]),
                Err(_) => prop_assert!(mub.len() != 1),
            }
        }

        #[test]
        fn order_complex_dimension_is_longest_chain((n, covers) in dag_strategy()) {
            let p = Poset::from_covers((0..n).collect::<Vec<_>>(), &covers).unwrap();
            let k = p.order_complex();
            let longest = (0..n).map(|i| p.rank(i)).max().unwrap() as isize;
            prop_assert_eq!(k.dimension(), longest);
            prop_assert!(k.is_downward_closed());
        }

        #[test]
        fn isomorphism_is_symmetric_and_order_preserving((n, covers) in dag_strategy(), seed in 0u64..1000) {
            let p = Poset::from_covers((0..n).collect::<Vec<_>>(), &covers).unwrap();
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            let relabeled: Vec<(usize, usize)> = covers.iter().map(|&(a, b)| (perm[a], perm[b])).collect();
            let q = Poset::from_covers((0..n).collect::<Vec<_>>(), &relabeled).unwrap();
            let f = is_isomorphic(&p, &q).expect("relabeled poset is isomorphic");
            for i in 0..n {
                for j in 0..n {
                    prop_assert_eq!(p.leq(i, j), q.leq(f[i], f[j]));
                }
            }
            prop_assert!(is_isomorphic(&q, &p).is_some());
        }

        #[test]
        fn seeded_extensions_are_valid((n, covers) in dag_strategy(), seed in 0u64..1000) {
            let p = Poset::from_covers((0..n).collect::<Vec<_>>(), &covers).unwrap();
            let all: Vec<usize> = (0..n).collect();
            let ext = p.linear_extension(&all, ExtensionPolicy::SeededRandom(seed)).unwrap();
            prop_assert!(p.is_linear_extension(&ext));
            prop_assert_eq!(ext.len(), n);
            let ext = p.linear_extension(&all, ExtensionPolicy::RankThenCanonical).unwrap();
            prop_assert!(p.is_linear_extension(&ext));
        }
    }
}
