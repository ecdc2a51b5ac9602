//! Building sets: every lower interval factors along the maximal building-set
//! elements beneath it.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::poset::{is_isomorphic_with, Poset};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BuildingSetCheck {
    pub holds: bool,
    /// An element whose lower interval does not factor.
    pub witness: Option<usize>,
}

/// Checks, for every `x` above the minimum, that `∏_{z ∈ max G_{≤x}} [0̂, z]`
/// is isomorphic to `[0̂, x]` by a map sending each unit tuple to its entry.
pub fn is_building_set<L: Clone>(p: &Poset<L>, g: &[usize]) -> Result<BuildingSetCheck> {
    let Some(zero) = p.min() else {
        return Err(Error::InvalidArgument("the poset needs a designated minimum".into()));
    };
    if let Some(&bad) = g.iter().find(|&&x| x >= p.len()) {
        return Err(Error::IndexOutOfRange { index: bad, len: p.len() });
    }
    if g.contains(&zero) {
        return Err(Error::InvalidArgument("the minimum cannot belong to a building set".into()));
    }
    let in_g = p.row_of(g);
    for x in (0..p.len()).filter(|&x| x != zero) {
        if !interval_factors(p, zero, x, &in_g)? {
            return Ok(BuildingSetCheck {
                holds: false,
                witness: Some(x),
            });
        }
    }
    Ok(BuildingSetCheck {
        holds: true,
        witness: None,
    })
}

fn interval_factors<L: Clone>(p: &Poset<L>, zero: usize, x: usize, in_g: &crate::bitset::BitRow) -> Result<bool> {
    let mut below = p.down_set(x).clone();
    below.intersect_with(in_g);
    let factors = p.maximal_of(&below);
    if factors.is_empty() {
        return Ok(false);
    }
    let target_idx = p.interval_indices(zero, x)?;
    let target = p.interval(zero, x)?;
    let pieces: Vec<Vec<usize>> = factors
        .iter()
        .map(|&z| p.interval_indices(zero, z))
        .collect::<Result<_>>()?;
    let intervals: Vec<Poset<L>> = factors.iter().map(|&z| p.interval(zero, z)).collect::<Result<_>>()?;
    let sizes: Vec<usize> = pieces.iter().map(Vec::len).collect();
    let total = sizes.iter().try_fold(1usize, |acc, &s| acc.checked_mul(s));
    if total != Some(target_idx.len()) {
        return Ok(false);
    }
    let refs: Vec<&Poset<L>> = intervals.iter().collect();
    let product = Poset::product(&refs);
    // unit tuple (0̂, …, y, …, 0̂) ↦ y; tuples are mixed radix, last coordinate fastest
    let zero_pos: Vec<usize> = pieces
        .iter()
        .map(|pc| pc.iter().position(|&e| e == zero).expect("interval contains its bottom"))
        .collect();
    let mut fixed = Vec::new();
    for (c, pc) in pieces.iter().enumerate() {
        for (pos, &y) in pc.iter().enumerate() {
            let mut code = 0usize;
            for (d, &s) in sizes.iter().enumerate() {
                code = code * s + if d == c { pos } else { zero_pos[d] };
            }
            let t = target_idx.binary_search(&y).expect("factor interval lies in the target interval");
            if !fixed.contains(&(code, t)) {
                fixed.push((code, t));
            }
        }
    }
    Ok(is_isomorphic_with(&product, &target, &fixed).is_some())
}
