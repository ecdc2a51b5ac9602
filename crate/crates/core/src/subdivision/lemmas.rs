//! Exhaustive checks of the structural facts the subdivision rests on.

use rayon::prelude::*;

use crate::error::Result;
use crate::ktrees::{is_k_nested, NestedFamily};
use crate::partition::{factors_i, KInstance, Partition};
use crate::simplicial::SimplicialComplex;
use crate::subdivision::nested::is_nested;
use crate::subdivision::report::CheckResult;
use crate::subdivision::sigma::sigma_lattice;

/// `max G_{≤x}` equals the per-block factors of `x`, for every `x`.
pub fn check_factor_lemma(inst: &KInstance) -> CheckResult {
    let w = inst
        .poset
        .poset()
        .labels()
        .iter()
        .find(|x| inst.g.factors(x) != factors_i(x))
        .map(|x| x.to_string());
    CheckResult::from_witness("g-factors-are-block-factors", w)
}

/// For distinct `a, b ∈ G`: the blocks are disjoint exactly when `∨^k{a, b}`
/// is a single element outside `G`.
pub fn check_disjointness_lemma(inst: &KInstance) -> CheckResult {
    let g = inst.g.elements();
    let p = inst.poset.poset();
    let w = (0..g.len()).into_par_iter().find_map_first(|i| {
        for j in i + 1..g.len() {
            let (a, b) = (&g[i], &g[j]);
            let disjoint = a.sole_block().unwrap() & b.sole_block().unwrap() == 0;
            let bounds = p
                .minimal_upper_bounds(&[inst.g_indices[i], inst.g_indices[j]])
                .unwrap_or_default();
            let unique_outside = bounds.len() == 1 && !inst.g_row.contains(bounds[0]);
            if disjoint != unique_outside {
                return Some(format!("{a} and {b}"));
            }
        }
        None
    });
    CheckResult::from_witness("g-disjoint-iff-unique-join-outside", w)
}

/// `F^k(ω)` is a face of T^k_n for every chain `ω` of the proper part.
pub fn check_chain_factors(
    inst: &KInstance,
    source: &SimplicialComplex<Partition>,
    target: &SimplicialComplex<Partition>,
) -> CheckResult {
    let lookup = target.vertex_lookup();
    let faces: Vec<&Vec<usize>> = source.faces().collect();
    let w = faces.par_iter().find_map_first(|f| {
        let chain: Vec<Partition> = f.iter().map(|&v| source.label(v).clone()).collect();
        let union = match inst.g.factors_of_chain(&chain) {
            Ok(u) => u,
            Err(e) => return Some(e.to_string()),
        };
        let image: Option<Vec<usize>> = union.iter().map(|x| lookup.get(x).copied()).collect();
        let ok = image.is_some_and(|mut img| {
            img.sort_unstable();
            target.contains(&img)
        });
        (!ok).then(|| chain.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" < "))
    });
    CheckResult::from_witness("chain-factors-form-a-face", w)
}

fn each_face(target: &SimplicialComplex<Partition>) -> Vec<Vec<Partition>> {
    let mut out = vec![Vec::new()];
    out.extend(target.faces().map(|f| f.iter().map(|&v| target.label(v).clone()).collect()));
    out
}

fn show(face: &[Partition]) -> String {
    format!("{{{}}}", face.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
}

/// For every face `N`, including the empty one: Σ(N) is a lattice, `N` is a
/// building set of it, every element is the join of its factors, and meets
/// are joins of common factors.
pub fn check_sigma_lattices(inst: &KInstance, target: &SimplicialComplex<Partition>) -> Result<Vec<CheckResult>> {
    let faces = each_face(target);
    let results: Vec<Result<[Option<String>; 4]>> = faces
        .par_iter()
        .map(|face| {
            let n = NestedFamily::from_members_unchecked(inst.m, inst.k, face.clone());
            let s = sigma_lattice(inst, &n)?;
            let fail = |bad: bool| bad.then(|| show(face));
            Ok([
                fail(!s.is_lattice()),
                fail(!s.base_is_building_set()?),
                fail(s.check_join_of_factors().is_some()),
                fail(s.check_meet_formula().is_some()),
            ])
        })
        .collect();
    let mut first: [Option<String>; 4] = Default::default();
    for r in results {
        for (slot, w) in first.iter_mut().zip(r?) {
            if slot.is_none() {
                *slot = w;
            }
        }
    }
    let names = [
        "sigma-is-lattice",
        "sigma-base-is-building-set",
        "sigma-elements-are-joins-of-factors",
        "sigma-meet-formula",
    ];
    Ok(names
        .into_iter()
        .zip(first)
        .map(|(n, w)| CheckResult::from_witness(n, w))
        .collect())
}

/// For comparable `x < y`, `F(x) ∪ F(y)` is nested: in Π^(k)_m with `G`, and
/// in every Σ(N) with `N`.
pub fn check_factor_union_claim(inst: &KInstance, target: &SimplicialComplex<Partition>) -> Result<CheckResult> {
    let p = inst.poset.poset();
    let proper = p.proper_part();
    let global = proper.par_iter().find_map_first(|&x| {
        for &y in &proper {
            if p.lt(x, y) {
                let mut u = inst.g.factors(p.label(x));
                u.extend(inst.g.factors(p.label(y)));
                u.sort();
                u.dedup();
                if !is_k_nested(inst, &u) {
                    return Some(format!("{} < {}", p.label(x), p.label(y)));
                }
            }
        }
        None
    });
    if global.is_some() {
        return Ok(CheckResult::from_witness("factor-union-nested", global));
    }
    let faces = each_face(target);
    let local: Vec<Result<Option<String>>> = faces
        .par_iter()
        .map(|face| {
            let n = NestedFamily::from_members_unchecked(inst.m, inst.k, face.clone());
            let s = sigma_lattice(inst, &n)?;
            let q = s.poset();
            for x in 0..q.len() {
                for y in 0..q.len() {
                    if q.lt(x, y) {
                        let mut u = s.factors(x);
                        u.extend(s.factors(y));
                        if !is_nested(q, s.base_indices(), &u) {
                            return Ok(Some(format!("{} < {} in Σ({})", q.label(x), q.label(y), show(face))));
                        }
                    }
                }
            }
            Ok(None)
        })
        .collect();
    for r in local {
        if let Some(w) = r? {
            return Ok(CheckResult::fail("factor-union-nested", w));
        }
    }
    Ok(CheckResult::pass("factor-union-nested"))
}

/// All of the above.
pub fn check_all(
    inst: &KInstance,
    source: &SimplicialComplex<Partition>,
    target: &SimplicialComplex<Partition>,
) -> Result<Vec<CheckResult>> {
    let mut out = vec![
        check_factor_lemma(inst),
        check_disjointness_lemma(inst),
        check_chain_factors(inst, source, target),
    ];
    out.extend(check_sigma_lattices(inst, target)?);
    out.push(check_factor_union_claim(inst, target)?);
    Ok(out)
}
