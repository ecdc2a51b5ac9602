//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any
//! gating failure.

use std::process::Command;
use std::time::{Duration, Instant};

use ktree_subdiv::homology::reduced_homology;
use ktree_subdiv::ktrees::{is_k_nested, ktree_complex};
use ktree_subdiv::partition::PartitionPoset;
use ktree_subdiv::subdivision::equivariance::{check_equivariance, PermutationSample};
use ktree_subdiv::subdivision::theorem::linear_extensions;
use ktree_subdiv::subdivision::{blowup_sequence, global_carrier_map, lemmas, verify_carrier_map};
use ktree_subdiv::{KInstance, Partition};

const CAP: usize = 100_000;
const FACES: usize = 1_000_000;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn p(s: &str) -> Partition {
    s.parse().unwrap()
}

fn run_verify(k: usize, n: usize) -> (bool, Duration, String) {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_ktree-subdiv"))
        .args(["verify", "--k", &k.to_string(), "--n", &n.to_string()])
        .output()
        .expect("binary runs");
    let elapsed = start.elapsed();
    let text = String::from_utf8_lossy(&out.stdout).into_owned();
    let needed = ["stellar-sequence-0", "cell-interiors-disjoint", "cell-volumes-sum-to-one", "local-maps-compatible"];
    let ok = out.status.code() == Some(0)
        && text.contains("verdict: pass")
        && needed.iter().all(|c| text.lines().any(|l| l.starts_with(&format!("PASS {c}"))));
    (ok, elapsed, text)
}

fn criterion_1() -> Outcome {
    let budgets = [(1, 3, 1.0), (2, 3, 1.0), (3, 3, 1.0), (1, 4, 10.0), (2, 4, 60.0)];
    let mut pass = true;
    let mut parts = Vec::new();
    for (k, n, budget) in budgets {
        let (ok, t, _) = run_verify(k, n);
        let within = t.as_secs_f64() < budget;
        pass &= ok && within;
        parts.push(format!("({k},{n}) {} {:.3}s/<{budget}s", if ok { "pass" } else { "FAIL" }, t.as_secs_f64()));
    }
    outcome(pass, parts.join(", "))
}

fn stretch() -> Outcome {
    let (ok, t, _) = run_verify(1, 5);
    outcome(ok && t.as_secs_f64() < 300.0, format!("(1,5) {:.3}s/<300s", t.as_secs_f64()))
}

fn criterion_2() -> Outcome {
    let mut bad = Vec::new();
    let mut check = |what: &str, got: String, want: &str| {
        if got != want {
            bad.push(format!("{what}: {got} != {want}"));
        }
    };
    check("|Π^(2)_5|", PartitionPoset::enumerate(5, 2, CAP).unwrap().len().to_string(), "12");
    check("|Π^(2)_7|", PartitionPoset::enumerate(7, 2, CAP).unwrap().len().to_string(), "128");
    let i14 = KInstance::new(1, 4, CAP).unwrap();
    let t14 = ktree_complex(&i14, FACES).unwrap();
    let d14 = i14.poset.poset().order_complex();
    check("f(T^1_4)", format!("{:?}", t14.f_vector()), "[10, 15]");
    check("f(Δ(Π_4))", format!("{:?}", d14.f_vector()), "[13, 18]");
    check("χ(T^1_4)", t14.euler_characteristic().to_string(), "-5");
    check("χ(Δ(Π_4))", d14.euler_characteristic().to_string(), "-5");
    let t23 = ktree_complex(&KInstance::new(2, 3, CAP).unwrap(), FACES).unwrap();
    check("f(T^2_3)", format!("{:?}", t23.f_vector()), "[10]");
    let detail = if bad.is_empty() {
        "12, 128, (10,15), 10 points, (13,18), χ = -5 twice".to_string()
    } else {
        bad.join("; ")
    };
    outcome(bad.is_empty(), detail)
}

fn criterion_3() -> Outcome {
    let i14 = KInstance::new(1, 4, CAP).unwrap();
    let hs = reduced_homology(&i14.poset.poset().order_complex()).unwrap();
    let ht = reduced_homology(&ktree_complex(&i14, FACES).unwrap()).unwrap();
    let mut pass = hs.betti(1) == 6 && ht.betti(1) == 6 && hs.is_torsion_free() && ht.is_torsion_free();
    let mut parts = vec![format!("β̃1 = {} / {}", hs.betti(1), ht.betti(1))];
    for (k, n) in [(1, 3), (1, 4), (2, 3), (2, 4), (3, 3)] {
        let inst = KInstance::new(k, n, CAP).unwrap();
        let a = reduced_homology(&inst.poset.poset().order_complex()).unwrap();
        let b = reduced_homology(&ktree_complex(&inst, FACES).unwrap()).unwrap();
        pass &= a == b;
        parts.push(format!("({k},{n}) {:?}", a.betti_numbers()));
    }
    outcome(pass, parts.join(", "))
}

fn criterion_4() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (m, k) in [(5, 2), (7, 2), (7, 3)] {
        let inst = KInstance::new(k, (m - 1) / k + 1, CAP).unwrap();
        let source = inst.poset.poset().order_complex();
        let target = ktree_complex(&inst, FACES).unwrap();
        let checks = lemmas::check_all(&inst, &source, &target).unwrap();
        let failed: Vec<String> = checks.iter().filter(|c| !c.pass).map(|c| c.to_string()).collect();
        pass &= failed.is_empty();
        parts.push(if failed.is_empty() {
            format!("(m={m},k={k}) {} checks", checks.len())
        } else {
            format!("(m={m},k={k}) {}", failed.join("; "))
        });
    }
    outcome(pass, parts.join(", "))
}

fn criterion_5() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (k, n) in [(1, 4), (2, 4)] {
        let inst = KInstance::new(k, n, CAP).unwrap();
        let q = inst.poset.poset();
        let exts = linear_extensions(&inst, 3, 0).unwrap();
        let distinct = exts.len() == 3 && exts[0] != exts[1] && exts[1] != exts[2] && exts[0] != exts[2];
        let nonzero: Vec<usize> = (0..q.len()).filter(|&x| Some(x) != q.min()).collect();
        let results: Vec<_> = exts
            .iter()
            .map(|e| blowup_sequence(q, &inst.g_indices, &nonzero, e, false).unwrap().result)
            .collect();
        let identical = results.windows(2).all(|w| w[0].same_labelled_faces(&w[1]));
        pass &= distinct && identical;
        parts.push(format!("({k},{n}) {} extensions, identical: {identical}", exts.len()));
    }
    outcome(pass, parts.join(", "))
}

fn criterion_6() -> Outcome {
    let cases = [
        (2, 3, PermutationSample::All, 120),
        (1, 4, PermutationSample::All, 24),
        (2, 4, PermutationSample::Sample { count: 200, seed: 0 }, 200),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (k, n, sample, expected) in cases {
        let r = check_equivariance(k, n, &sample, CAP, FACES).unwrap();
        pass &= r.passed() && r.permutations_tested == expected;
        parts.push(format!(
            "({k},{n}) {} perms, top β̃ {}={}",
            r.permutations_tested, r.source_top_betti, r.target_top_betti
        ));
    }
    outcome(pass, parts.join(", "))
}

fn criterion_7() -> Outcome {
    let inst = KInstance::new(1, 4, CAP).unwrap();
    let mut cm = global_carrier_map(&inst, FACES).unwrap();
    cm.swap_vertex_points(&p("(12)34"), &p("(12)(34)")).unwrap();
    let checks = verify_carrier_map(&cm);
    let disjoint = checks.iter().find(|c| c.name == "cell-interiors-disjoint").unwrap();
    let overlap = !disjoint.pass && disjoint.witness.as_deref().is_some_and(|w| w.contains("overlap"));
    let i72 = KInstance::new(2, 4, CAP).unwrap();
    let rejected = !is_k_nested(&i72, &[p("(123)4567"), p("1(234)567")]);
    let bounds = i72.k_join_set(&[p("(123)4567"), p("1(234)567")]).unwrap().len();
    outcome(
        overlap && rejected && bounds == 3,
        format!("witness: {}; non-nested family rejected: {rejected} ({bounds} upper bounds)", disjoint.witness.as_deref().unwrap_or("none")),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("1 theorem instances within time budgets", criterion_1),
        ("2 counts", criterion_2),
        ("3 homology", criterion_3),
        ("4 structural lemmas", criterion_4),
        ("5 linear-extension independence", criterion_5),
        ("6 equivariance", criterion_6),
        ("7 negative controls", criterion_7),
    ];
    let mut failures = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let o = run();
        if !o.pass {
            failures += 1;
        }
        println!(
            "{} criterion {name} [{:.3}s]: {}",
            if o.pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64(),
            o.detail
        );
    }
    let s = stretch();
    println!("{} stretch (non-gating): {}", if s.pass { "PASS" } else { "FAIL" }, s.detail);
    if failures > 0 {
        println!("{failures} criterion/criteria failed");
        std::process::exit(1);
    }
}
