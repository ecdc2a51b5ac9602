//! Σ(N): all `∨^k`-joins of subsets of a nested family.

use crate::error::{Error, Result};
use crate::ktrees::NestedFamily;
use crate::partition::{KInstance, Partition};
use crate::poset::Poset;
use crate::subdivision::building::is_building_set;

#[derive(Clone, Debug)]
pub struct SigmaLattice {
    base: NestedFamily,
    poset: Poset<Partition>,
    /// Positions of the members of `N` in `poset`.
    base_indices: Vec<usize>,
}

/// Closes `N` under `∨^k`; the empty join is 0̂. Elements are ordered by
/// rank, then canonically.
pub fn sigma_lattice(inst: &KInstance, n: &NestedFamily) -> Result<SigmaLattice> {
    if n.len() >= 20 {
        return Err(Error::InvalidArgument(format!("nested family of size {} is too large", n.len())));
    }
    let pp = &inst.poset;
    let idx: Vec<usize> = n
        .members()
        .iter()
        .map(|x| {
            pp.index_of(x)
                .ok_or_else(|| Error::InvalidArgument(format!("{x} is not in the restricted poset")))
        })
        .collect::<Result<_>>()?;
    let zero = pp.poset().min().expect("0̂ is designated");
    let mut elems = vec![zero];
    for mask in 1u32..(1 << idx.len()) {
        let subset: Vec<usize> = (0..idx.len()).filter(|&i| mask >> i & 1 == 1).map(|i| idx[i]).collect();
        let bounds = pp.poset().minimal_upper_bounds(&subset)?;
        if bounds.len() != 1 {
            let shown: Vec<String> = subset.iter().map(|&i| pp.partition(i).to_string()).collect();
            return Err(Error::NotNested(format!(
                "{{{}}} has {} minimal upper bounds",
                shown.join(", "),
                bounds.len()
            )));
        }
        elems.push(bounds[0]);
    }
    elems.sort_unstable();
    elems.dedup();
    let labels: Vec<Partition> = elems.iter().map(|&i| pp.partition(i).clone()).collect();
    let poset = Poset::from_leq(labels, |a, b| pp.poset().leq(elems[a], elems[b]))?.detect_bounds();
    let base_indices = idx
        .iter()
        .map(|i| elems.binary_search(i).expect("members are joins of singletons"))
        .collect();
    Ok(SigmaLattice {
        base: n.clone(),
        poset,
        base_indices,
    })
}

impl SigmaLattice {
    pub fn base(&self) -> &NestedFamily {
        &self.base
    }

    pub fn poset(&self) -> &Poset<Partition> {
        &self.poset
    }

    pub fn base_indices(&self) -> &[usize] {
        &self.base_indices
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poset.is_empty()
    }

    pub fn zero(&self) -> usize {
        self.poset.min().expect("Σ(N) contains 0̂")
    }

    /// Elements other than 0̂, in index order.
    pub fn nonzero(&self) -> Vec<usize> {
        (0..self.len()).filter(|&a| a != self.zero()).collect()
    }

    /// `max N_{≤a}`, as indices into the lattice.
    pub fn factors(&self, a: usize) -> Vec<usize> {
        let mut below = self.poset.down_set(a).clone();
        below.intersect_with(&self.poset.row_of(&self.base_indices));
        self.poset.maximal_of(&below)
    }

    fn join_or_zero(&self, s: &[usize]) -> Result<usize> {
        if s.is_empty() {
            Ok(self.zero())
        } else {
            self.poset.join(s)
        }
    }

    /// `a = ∨ max N_{≤a}` for every element.
    pub fn check_join_of_factors(&self) -> Option<usize> {
        (0..self.len()).find(|&a| self.join_or_zero(&self.factors(a)).ok() != Some(a))
    }

    /// The meet of `a` and `b` equals `∨ max(N_{≤a} ∩ N_{≤b})`; returns a
    /// failing pair.
    pub fn check_meet_formula(&self) -> Option<(usize, usize)> {
        let n_row = self.poset.row_of(&self.base_indices);
        for a in 0..self.len() {
            for b in a + 1..self.len() {
                let mut common = self.poset.down_set(a).clone();
                common.intersect_with(self.poset.down_set(b));
                common.intersect_with(&n_row);
                let formula = self.join_or_zero(&self.poset.maximal_of(&common));
                if formula.is_err() || formula.ok() != self.poset.meet(&[a, b]).ok() {
                    return Some((a, b));
                }
            }
        }
        None
    }

    pub fn is_lattice(&self) -> bool {
        self.poset.is_lattice()
    }

    /// Whether `N` is a building set of Σ(N).
    pub fn base_is_building_set(&self) -> Result<bool> {
        Ok(is_building_set(&self.poset, &self.base_indices)?.holds)
    }
}
