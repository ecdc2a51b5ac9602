//! Sequences of stellar subdivisions that turn 𝒩(L, H) into 𝒩(L, G).

use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::poset::Poset;
use crate::simplicial::SimplicialComplex;
use crate::subdivision::nested::nested_set_complex;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupStep<L> {
    /// Label of the new vertex.
    pub label: L,
    /// Labels of the subdivided face, `max H_{≤h}`.
    pub face: Vec<L>,
}

#[derive(Clone, Debug)]
pub struct Blowup<L> {
    pub start: SimplicialComplex<L>,
    pub steps: Vec<BlowupStep<L>>,
    pub result: SimplicialComplex<L>,
}

impl<L: Clone + Eq> Blowup<L> {
    /// Carrier in the starting complex of a vertex of the result.
    pub fn carrier(&self, label: &L) -> Option<Vec<L>> {
        if let Some(step) = self.steps.iter().find(|s| &s.label == label) {
            return Some(step.face.clone());
        }
        self.start.labels().iter().find(|l| *l == label).map(|l| vec![l.clone()])
    }
}

/// Starts from 𝒩(L, H) and subdivides once per element of `G \ H`.
///
/// `ext` must list `G \ H` in an order compatible with `≤` (bottom first).
/// It is consumed from the top down, so each `h` meets the face
/// `max H_{≤h}`, none of whose vertices has been subdivided yet.
pub fn blowup_sequence<L: Clone + Eq + Hash + Debug + Sync>(
    lat: &Poset<L>,
    h: &[usize],
    g: &[usize],
    ext: &[usize],
    keep_apex: bool,
) -> Result<Blowup<L>> {
    let in_g = lat.row_of(g);
    let in_h = lat.row_of(h);
    if let Some(&x) = h.iter().find(|&&x| !in_g.contains(x)) {
        return Err(Error::InvalidArgument(format!("{:?} is in H but not in G", lat.label(x))));
    }
    let mut wanted: Vec<usize> = g.iter().copied().filter(|&x| !in_h.contains(x)).collect();
    wanted.sort_unstable();
    wanted.dedup();
    let mut given = ext.to_vec();
    given.sort_unstable();
    if given != wanted {
        return Err(Error::NotLinearExtension("the sequence does not list G \\ H exactly once".into()));
    }
    if !lat.is_linear_extension(ext) {
        return Err(Error::NotLinearExtension(
            "an element precedes something below it".into(),
        ));
    }
    let start = nested_set_complex(lat, h, keep_apex)?;
    let mut current = start.clone();
    let mut lookup: HashMap<L, usize> = start.labels().iter().cloned().enumerate().map(|(i, l)| (l, i)).collect();
    let mut steps = Vec::with_capacity(ext.len());
    for &x in ext.iter().rev() {
        let mut below = lat.down_set(x).clone();
        below.intersect_with(&in_h);
        let factors = lat.maximal_of(&below);
        let face_labels: Vec<L> = factors.iter().map(|&f| lat.label(f).clone()).collect();
        let face: Vec<usize> = face_labels
            .iter()
            .map(|l| {
                lookup
                    .get(l)
                    .copied()
                    .ok_or_else(|| Error::InvalidArgument(format!("factor {l:?} is not a vertex")))
            })
            .collect::<Result<_>>()?;
        if face.is_empty() {
            return Err(Error::InvalidArgument(format!("{:?} has no factors in H", lat.label(x))));
        }
        current = current.stellar_subdivide(&face, lat.label(x).clone())?;
        if face.len() > 1 {
            lookup.insert(lat.label(x).clone(), current.num_vertices() - 1);
        }
        steps.push(BlowupStep {
            label: lat.label(x).clone(),
            face: face_labels,
        });
    }
    Ok(Blowup {
        start,
        steps,
        result: current,
    })
}
