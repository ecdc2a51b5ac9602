//! S_m-equivariance of the global carrier map.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{resource_limit, Result};
use crate::homology::reduced_homology;
use crate::partition::{KInstance, Partition};
use crate::perm::Permutation;
use crate::simplicial::SimplicialComplex;
use crate::subdivision::carrier::{global_carrier_map, CarrierMap};
use crate::subdivision::report::{CheckResult, Verdict};

/// Largest `m` for which all of `S_m` is enumerated.
pub const MAX_FULL_GROUP: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PermutationSample {
    All,
    Sample { count: usize, seed: u64 },
    Identity,
    Explicit(Vec<Permutation>),
}

impl PermutationSample {
    pub fn permutations(&self, m: usize) -> Result<Vec<Permutation>> {
        match self {
            PermutationSample::All if m > MAX_FULL_GROUP => {
                Err(resource_limit("symmetric group degree", m, MAX_FULL_GROUP))
            }
            PermutationSample::All => Ok(Permutation::all(m)),
            PermutationSample::Sample { count, seed } => Ok(Permutation::sample(m, *count, *seed)),
            PermutationSample::Identity => Ok(vec![Permutation::identity(m)]),
            PermutationSample::Explicit(v) => {
                if let Some(p) = v.iter().find(|p| p.degree() != m) {
                    return Err(crate::error::Error::InvalidArgument(format!(
                        "permutation {p} does not act on 1..{m}"
                    )));
                }
                Ok(v.clone())
            }
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivarianceReport {
    pub k: usize,
    pub n: usize,
    pub m: usize,
    pub permutations_tested: usize,
    pub source_top_betti: usize,
    pub target_top_betti: usize,
    pub checks: Vec<CheckResult>,
    pub verdict: Verdict,
}

impl EquivarianceReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// Whether `k` is setwise invariant under every permutation; witness on failure.
pub fn complex_invariance(k: &SimplicialComplex<Partition>, perms: &[Permutation]) -> Option<String> {
    perms
        .par_iter()
        .find_map_first(|pi| (!k.is_invariant_under(|x| x.permuted(pi))).then(|| pi.to_string()))
}

/// Invariance of both complexes and `φ(π·ω) = π·φ(ω)` on every source face.
pub fn check_map_equivariance(cm: &CarrierMap, perms: &[Permutation]) -> Vec<CheckResult> {
    let source_inv = complex_invariance(&cm.source, perms);
    let target_inv = complex_invariance(&cm.target, perms);
    let mut checks = vec![
        CheckResult::from_witness("source-invariant", source_inv.clone()),
        CheckResult::from_witness("target-invariant", target_inv.clone()),
    ];
    if source_inv.is_some() || target_inv.is_some() {
        checks.push(CheckResult::fail("phi-equivariant", "a complex is not invariant"));
        return checks;
    }
    let src = cm.source.vertex_lookup();
    let tgt = cm.target.vertex_lookup();
    let faces: Vec<&Vec<usize>> = cm.source.faces().collect();
    let w = perms.par_iter().find_map_first(|pi| {
        let s_img: Vec<usize> = cm.source.labels().iter().map(|x| src[&x.permuted(pi)]).collect();
        let t_img: Vec<usize> = cm.target.labels().iter().map(|x| tgt[&x.permuted(pi)]).collect();
        faces.iter().find_map(|f| {
            let moved: Vec<usize> = f.iter().map(|&v| s_img[v]).collect();
            let mut lhs = cm.phi(&moved);
            lhs.sort_unstable();
            let mut rhs: Vec<usize> = cm.phi(f).iter().map(|&t| t_img[t]).collect();
            rhs.sort_unstable();
            (lhs != rhs).then(|| {
                let shown: Vec<String> = f.iter().map(|&v| cm.source.label(v).to_string()).collect();
                format!("{pi} on {{{}}}", shown.join(", "))
            })
        })
    });
    checks.push(CheckResult::from_witness("phi-equivariant", w));
    checks
}

/// Builds the global carrier map for `(k, n)` and checks it against `sample`,
/// plus equality of top reduced Betti numbers.
pub fn check_equivariance(
    k: usize,
    n: usize,
    sample: &PermutationSample,
    element_cap: usize,
    face_cap: usize,
) -> Result<EquivarianceReport> {
    let inst = KInstance::new(k, n, element_cap)?;
    let cm = global_carrier_map(&inst, face_cap)?;
    let perms = sample.permutations(inst.m)?;
    let mut checks = check_map_equivariance(&cm, &perms);
    let top = n - 3;
    let source_top_betti = reduced_homology(&cm.source)?.betti(top);
    let target_top_betti = reduced_homology(&cm.target)?.betti(top);
    checks.push(if source_top_betti == target_top_betti {
        CheckResult::pass("top-betti-equal")
    } else {
        CheckResult::fail("top-betti-equal", format!("{source_top_betti} vs {target_top_betti}"))
    });
    let verdict = Verdict::of(&checks);
    Ok(EquivarianceReport {
        k,
        n,
        m: inst.m,
        permutations_tested: perms.len(),
        source_top_betti,
        target_top_betti,
        checks,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::DEFAULT_ELEMENT_CAP;

    #[test]
    fn identity_passes() {
        let r = check_equivariance(2, 3, &PermutationSample::Identity, DEFAULT_ELEMENT_CAP, 100_000).unwrap();
        assert!(r.passed());
        assert_eq!(r.permutations_tested, 1);
        assert_eq!((r.source_top_betti, r.target_top_betti), (9, 9));
    }

    #[test]
    fn full_group_on_binary_trees() {
        let r = check_equivariance(1, 4, &PermutationSample::All, DEFAULT_ELEMENT_CAP, 100_000).unwrap();
        assert!(r.passed(), "{:?}", r.checks);
        assert_eq!(r.permutations_tested, 24);
    }

    #[test]
    fn broken_carriers_are_caught() {
        let inst = KInstance::new(1, 4, DEFAULT_ELEMENT_CAP).unwrap();
        let mut cm = global_carrier_map(&inst, 100_000).unwrap();
        let v = cm.source.vertex_lookup()[&"(12)(34)".parse::<Partition>().unwrap()];
        cm.vertex_carriers[v].pop();
        let checks = check_map_equivariance(&cm, &Permutation::all(4));
        assert!(!checks.iter().find(|c| c.name == "phi-equivariant").unwrap().pass);
    }

    #[test]
    fn group_too_large() {
        assert!(PermutationSample::All.permutations(9).is_err());
        assert_eq!(PermutationSample::Sample { count: 5, seed: 1 }.permutations(7).unwrap().len(), 5);
    }
}
