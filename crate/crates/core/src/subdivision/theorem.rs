//! End-to-end check that Δ(Π^(k)_m) subdivides T^k_n.

use std::collections::HashSet;

use crate::error::Result;
use crate::homology::reduced_homology;
use crate::ktrees::{ktree_complex, nested_to_tree, tree_to_nested, NestedFamily};
use crate::partition::{KInstance, Partition, DEFAULT_ELEMENT_CAP};
use crate::perm::Permutation;
use crate::poset::ExtensionPolicy;
use crate::simplicial::{is_isomorphic, SimplicialComplex};
use crate::subdivision::blowup::blowup_sequence;
use crate::subdivision::carrier::{
    carrier_map_between, check_compatibility, check_local_against_global, check_local_preimage, check_surjective,
    local_carrier_maps, verify_carrier_map,
};
use crate::subdivision::equivariance::check_map_equivariance;
use crate::subdivision::lemmas;
use crate::subdivision::nested::nested_set_complex_capped;
use crate::subdivision::report::{CheckResult, FVectors, HomologyPair, Instance, Sizes, SubdivisionReport, Verdict};

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// Number of distinct linear extensions to run the stellar sequence on.
    pub extensions: usize,
    /// First seed for the alternate extensions.
    pub seed: u64,
    pub element_cap: usize,
    pub face_cap: usize,
    /// Random permutations for the equivariance spot check (0 to skip).
    pub equivariance_sample: usize,
    /// Run the structural lemma checks as well.
    pub lemmas: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            extensions: 1,
            seed: 0,
            element_cap: DEFAULT_ELEMENT_CAP,
            face_cap: 1_000_000,
            equivariance_sample: 8,
            lemmas: true,
        }
    }
}

/// Up to `count` distinct linear extensions of `proper part \ G`: the
/// rank-then-canonical one first, then seeded random ones.
pub fn linear_extensions(inst: &KInstance, count: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    let p = inst.poset.poset();
    let subset: Vec<usize> = p
        .proper_part()
        .into_iter()
        .filter(|&x| !inst.g_row.contains(x))
        .collect();
    let mut out = vec![p.linear_extension(&subset, ExtensionPolicy::RankThenCanonical)?];
    let mut seen: HashSet<Vec<usize>> = out.iter().cloned().collect();
    let attempts = 50 * count as u64 + 50;
    let mut s = seed;
    while out.len() < count && s < seed + attempts {
        let e = p.linear_extension(&subset, ExtensionPolicy::SeededRandom(s))?;
        if seen.insert(e.clone()) {
            out.push(e);
        }
        s += 1;
    }
    out.truncate(count.max(1));
    Ok(out)
}

fn ktree_bijection(inst: &KInstance, target: &SimplicialComplex<Partition>) -> CheckResult {
    let mut faces: Vec<Vec<Partition>> = vec![Vec::new()];
    faces.extend(target.faces().map(|f| f.iter().map(|&v| target.label(v).clone()).collect()));
    let w = faces.into_iter().find_map(|members| {
        let n = NestedFamily::from_members_unchecked(inst.m, inst.k, members);
        match nested_to_tree(&n) {
            Ok(t) if tree_to_nested(&t) == n && t.internal_edges().len() == n.len() => None,
            Ok(t) => Some(t.newick()),
            Err(e) => Some(e.to_string()),
        }
    });
    CheckResult::from_witness("tree-nested-bijection", w)
}

pub fn verify_theorem(k: usize, n: usize, opts: &VerifyOptions) -> Result<SubdivisionReport> {
    let inst = KInstance::new(k, n, opts.element_cap)?;
    let p = inst.poset.poset();
    let source = p.order_complex_capped(opts.face_cap)?;
    let target = ktree_complex(&inst, opts.face_cap)?;
    let mut checks = Vec::new();

    let nested = nested_set_complex_capped(p, &inst.g_indices, false, opts.face_cap)?;
    checks.push(if nested.same_labelled_faces(&target) {
        CheckResult::pass("ktree-complex-is-nested-set-complex")
    } else {
        CheckResult::fail("ktree-complex-is-nested-set-complex", format!("f-vectors {:?} and {:?}", nested.f_vector(), target.f_vector()))
    });
    checks.push(ktree_bijection(&inst, &target));
    if target.dimension() != n as isize - 3 || !target.is_pure() {
        checks.push(CheckResult::fail("target-pure-of-dimension-n-3", format!("dimension {}", target.dimension())));
    } else {
        checks.push(CheckResult::pass("target-pure-of-dimension-n-3"));
    }

    // stellar subdivisions, top of each extension first
    let exts = linear_extensions(&inst, opts.extensions, opts.seed)?;
    let nonzero: Vec<usize> = (0..p.len()).filter(|&x| Some(x) != p.min()).collect();
    let mut results = Vec::new();
    for (i, ext) in exts.iter().enumerate() {
        let b = blowup_sequence(p, &inst.g_indices, &nonzero, ext, false)?;
        let name = format!("stellar-sequence-{i}");
        checks.push(if b.result.same_labelled_faces(&source) {
            CheckResult::pass_with(name, format!("{} steps, isomorphic via labels", b.steps.len()))
        } else if is_isomorphic(&b.result, &source).is_some() {
            CheckResult::fail(name, "isomorphic, but labels differ")
        } else {
            CheckResult::fail(name, format!("result f-vector {:?}", b.result.f_vector()))
        });
        results.push(b.result);
    }
    let agree = results.windows(2).all(|w| w[0].same_labelled_faces(&w[1]));
    checks.push(match (agree, exts.len() < opts.extensions) {
        (false, _) => CheckResult::fail("stellar-sequences-agree", "two extensions give different complexes"),
        (true, true) => CheckResult::pass_with(
            "stellar-sequences-agree",
            format!("only {} distinct extension(s) found", exts.len()),
        ),
        (true, false) => CheckResult::pass("stellar-sequences-agree"),
    });

    let cm = carrier_map_between(&inst, source.clone(), target.clone())?;
    checks.extend(verify_carrier_map(&cm));
    checks.push(check_surjective(&cm));
    let maps = local_carrier_maps(&inst, &target)?;
    checks.push(check_compatibility(&maps));
    checks.push(check_local_against_global(&inst, &cm, &maps));
    checks.push(check_local_preimage(&inst, &cm, &maps));

    let (es, et) = (source.euler_characteristic(), target.euler_characteristic());
    checks.push(if es == et {
        CheckResult::pass_with("euler-characteristic-equal", es.to_string())
    } else {
        CheckResult::fail("euler-characteristic-equal", format!("{es} vs {et}"))
    });
    let hs = reduced_homology(&source)?;
    let ht = reduced_homology(&target)?;
    checks.push(if hs == ht {
        CheckResult::pass("reduced-homology-equal")
    } else {
        CheckResult::fail(
            "reduced-homology-equal",
            format!("{:?} vs {:?}", hs.betti_numbers(), ht.betti_numbers()),
        )
    });

    if opts.lemmas {
        checks.extend(lemmas::check_all(&inst, &source, &target)?);
    }
    if opts.equivariance_sample > 0 {
        let mut perms = vec![Permutation::identity(inst.m)];
        perms.extend(Permutation::sample(inst.m, opts.equivariance_sample, opts.seed));
        checks.extend(check_map_equivariance(&cm, &perms));
    }

    let verdict = Verdict::of(&checks);
    Ok(SubdivisionReport {
        instance: Instance { k, n, m: inst.m },
        sizes: Sizes {
            poset_elements: p.len(),
            proper_part: p.proper_part().len(),
            g_set: inst.g.len(),
            source_faces: source.num_faces(),
            target_faces: target.num_faces(),
        },
        f_vectors: FVectors {
            source: source.f_vector(),
            target: target.f_vector(),
        },
        extension_used: exts
            .iter()
            .map(|e| e.iter().map(|&x| p.label(x).to_string()).collect())
            .collect(),
        checks,
        homology: HomologyPair { source: hs, target: ht },
        verdict,
    })
}
