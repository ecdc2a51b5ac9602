//! Nested sets with respect to a building set, and their complexes.

use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;

use crate::bitset::BitRow;
use crate::error::{resource_limit, Error, Result};
use crate::poset::Poset;
use crate::simplicial::SimplicialComplex;

/// Exactly one minimal upper bound, and it lies outside `in_g`.
pub(crate) fn unique_bound_outside<L>(p: &Poset<L>, in_g: &BitRow, s: &[usize]) -> bool {
    match p.minimal_upper_bounds(s) {
        Ok(b) => b.len() == 1 && !in_g.contains(b[0]),
        Err(_) => false,
    }
}

/// Walks the antichains of `elems` of size at least two (only those through
/// `anchor`, if given) and stops at the first one whose join fails.
/// With an anchor, `chosen` must start as `[anchor]`.
pub(crate) fn antichains_ok<L>(
    p: &Poset<L>,
    in_g: &BitRow,
    elems: &[usize],
    start: usize,
    anchor: Option<usize>,
    chosen: &mut Vec<usize>,
) -> bool {
    for i in start..elems.len() {
        let e = elems[i];
        if Some(e) == anchor || chosen.iter().any(|&c| p.comparable(c, e)) {
            continue;
        }
        chosen.push(e);
        if chosen.len() >= 2 && !unique_bound_outside(p, in_g, chosen) {
            return false;
        }
        if !antichains_ok(p, in_g, elems, i + 1, anchor, chosen) {
            return false;
        }
        chosen.pop();
    }
    true
}

/// Whether `set ⊆ g` is `g`-nested in `p`.
pub fn is_nested<L>(p: &Poset<L>, g: &[usize], set: &[usize]) -> bool {
    let in_g = p.row_of(g);
    if set.iter().any(|&x| x >= p.len() || !in_g.contains(x)) {
        return false;
    }
    let mut s = set.to_vec();
    s.sort_unstable();
    s.dedup();
    antichains_ok(p, &in_g, &s, 0, None, &mut Vec::new())
}

/// The complex of nonempty `g`-nested sets. Vertices are the members of `g`
/// in index order; the top of `p`, if it is in `g`, is dropped unless
/// `keep_apex` is set.
pub fn nested_set_complex<L: Clone + Sync>(p: &Poset<L>, g: &[usize], keep_apex: bool) -> Result<SimplicialComplex<L>> {
    nested_set_complex_capped(p, g, keep_apex, usize::MAX)
}

pub fn nested_set_complex_capped<L: Clone + Sync>(
    p: &Poset<L>,
    g: &[usize],
    keep_apex: bool,
    max_faces: usize,
) -> Result<SimplicialComplex<L>> {
    let Some(zero) = p.min() else {
        return Err(Error::InvalidArgument("the poset needs a designated minimum".into()));
    };
    let mut members = g.to_vec();
    members.sort_unstable();
    members.dedup();
    if let Some(&bad) = members.iter().find(|&&x| x >= p.len()) {
        return Err(Error::IndexOutOfRange { index: bad, len: p.len() });
    }
    if members.contains(&zero) {
        return Err(Error::InvalidArgument("the minimum cannot belong to a building set".into()));
    }
    let in_g = p.row_of(&members);
    let verts: Vec<usize> = members
        .iter()
        .copied()
        .filter(|&x| keep_apex || Some(x) != p.max())
        .collect();
    let nv = verts.len();
    let compat: Vec<BitRow> = (0..nv)
        .into_par_iter()
        .map(|i| {
            let mut row = BitRow::new(nv);
            for j in 0..nv {
                if j != i && (p.comparable(verts[i], verts[j]) || unique_bound_outside(p, &in_g, &[verts[i], verts[j]])) {
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
            let mut out = Vec::new();
            grow(p, &in_g, &verts, &compat, &mut vec![v], &mut out, &counter, max_faces)?;
            Ok(out)
        })
        .collect();
    let mut faces = Vec::new();
    for r in per_root {
        faces.extend(r?);
    }
    let labels = verts.iter().map(|&x| p.label(x).clone()).collect();
    Ok(SimplicialComplex::from_closed_faces(labels, faces))
}

/// Depth-first growth of nested sets in increasing vertex order; shared by
/// the k-tree enumerator.
#[allow(clippy::too_many_arguments)]
pub(crate) fn grow<L>(
    p: &Poset<L>,
    in_g: &BitRow,
    idx: &[usize],
    compat: &[BitRow],
    face: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
    counter: &AtomicUsize,
    cap: usize,
) -> Result<()> {
    let total = counter.fetch_add(1, Ordering::Relaxed) + 1;
    if total > cap {
        return Err(resource_limit("nested set complex faces", format!("more than {cap}"), cap));
    }
    out.push(face.clone());
    let last = *face.last().expect("nonempty face");
    let mut cand = compat[last].clone();
    for &f in face.iter() {
        cand.intersect_with(&compat[f]);
    }
    let elems: Vec<usize> = face.iter().map(|&f| idx[f]).collect();
    for c in cand.iter().filter(|&c| c > last) {
        // pairs are settled by `compat`; longer antichains through c are checked here
        if face.len() >= 2 {
            let mut with_c = elems.clone();
            with_c.push(idx[c]);
            if !antichains_ok(p, in_g, &with_c, 0, Some(idx[c]), &mut vec![idx[c]]) {
                continue;
            }
        }
        face.push(c);
        grow(p, in_g, idx, compat, face, out, counter, cap)?;
        face.pop();
    }
    Ok(())
}
