//! Report types for the verification pipeline.

use std::fmt;

use serde::Serialize;

use crate::homology::ReducedHomology;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl CheckResult {
    pub fn pass(name: impl Into<String>) -> Self {
        CheckResult {
            name: name.into(),
            pass: true,
            witness: None,
        }
    }

    pub fn fail(name: impl Into<String>, witness: impl Into<String>) -> Self {
        CheckResult {
            name: name.into(),
            pass: false,
            witness: Some(witness.into()),
        }
    }

    /// Pass if `witness` is `None`.
    pub fn from_witness(name: impl Into<String>, witness: Option<String>) -> Self {
        match witness {
            None => Self::pass(name),
            Some(w) => Self::fail(name, w),
        }
    }

    /// A passing check that still carries a note.
    pub fn pass_with(name: impl Into<String>, note: impl Into<String>) -> Self {
        CheckResult {
            name: name.into(),
            pass: true,
            witness: Some(note.into()),
        }
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", if self.pass { "PASS" } else { "FAIL" }, self.name)?;
        if let Some(w) = &self.witness {
            write!(f, " ({w})")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn of(checks: &[CheckResult]) -> Self {
        if checks.iter().all(|c| c.pass) {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Instance {
    pub k: usize,
    pub n: usize,
    pub m: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Sizes {
    pub poset_elements: usize,
    pub proper_part: usize,
    pub g_set: usize,
    pub source_faces: usize,
    pub target_faces: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct FVectors {
    pub source: Vec<usize>,
    pub target: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct HomologyPair {
    pub source: ReducedHomology,
    pub target: ReducedHomology,
}

/// Outcome of the end-to-end check. The source complex is Δ(Π^(k)_m) and the
/// target is T^k_n.
#[derive(Clone, Debug, Serialize)]
pub struct SubdivisionReport {
    pub instance: Instance,
    pub sizes: Sizes,
    pub f_vectors: FVectors,
    /// Each linear extension as partitions in order, bottom first.
    pub extension_used: Vec<Vec<String>>,
    pub checks: Vec<CheckResult>,
    pub homology: HomologyPair,
    pub verdict: Verdict,
}

impl SubdivisionReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serialises")
    }

    /// Plain-text rendering, one check per line.
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "instance k={} n={} m={}\nposet elements {}, proper part {}, |G| {}\nsource f-vector {:?}\ntarget f-vector {:?}\n",
            self.instance.k,
            self.instance.n,
            self.instance.m,
            self.sizes.poset_elements,
            self.sizes.proper_part,
            self.sizes.g_set,
            self.f_vectors.source,
            self.f_vectors.target
        );
        s.push_str(&format!(
            "reduced betti source {:?} target {:?}\n",
            self.homology.source.betti_numbers(),
            self.homology.target.betti_numbers()
        ));
        for c in &self.checks {
            s.push_str(&c.to_string());
            s.push('\n');
        }
        s.push_str(match self.verdict {
            Verdict::Pass => "verdict: pass\n",
            Verdict::Fail => "verdict: fail\n",
        });
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn witness_is_omitted_when_absent() {
        let v = serde_json::to_value(CheckResult::pass("x")).unwrap();
        assert_eq!(v, serde_json::json!({"name": "x", "pass": true}));
        let f = CheckResult::fail("y", "because");
        assert_eq!(f.to_string(), "FAIL y (because)");
        assert_eq!(Verdict::of(&[CheckResult::pass("a"), f]), Verdict::Fail);
        assert_eq!(serde_json::to_value(Verdict::Pass).unwrap(), serde_json::json!("pass"));
    }
}
