//! Abstract simplicial complexes on integer-identified vertices.
//!
//! Faces are sorted vertex-index vectors grouped by dimension; the empty face
//! is implicit. Every vertex in the label list is a face.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::hash::Hash;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::bitset::BitRow;
use crate::error::{resource_limit, Error, Result};
use crate::poset::Poset;

#[derive(Clone, Debug)]
pub struct SimplicialComplex<L> {
    labels: Vec<L>,
    by_dim: Vec<Vec<Vec<usize>>>,
    lookup: HashMap<Vec<usize>, usize>,
}

impl<L> SimplicialComplex<L> {
    /// Builds a complex from a family that is already downward closed.
    /// Faces are sorted and deduplicated; singletons for every label are added.
    pub fn from_closed_faces(labels: Vec<L>, faces: Vec<Vec<usize>>) -> Self {
        let n = labels.len();
        let mut set: HashSet<Vec<usize>> = faces
            .into_iter()
            .map(|mut f| {
                f.sort_unstable();
                f.dedup();
                f
            })
            .filter(|f| !f.is_empty())
            .collect();
        for v in 0..n {
            set.insert(vec![v]);
        }
        Self::from_set(labels, set)
    }

    fn from_set(labels: Vec<L>, set: HashSet<Vec<usize>>) -> Self {
        let mut by_dim: Vec<Vec<Vec<usize>>> = Vec::new();
        for f in set {
            let d = f.len() - 1;
            if by_dim.len() <= d {
                by_dim.resize(d + 1, Vec::new());
            }
            by_dim[d].push(f);
        }
        let mut lookup = HashMap::new();
        for layer in by_dim.iter_mut() {
            layer.sort_unstable();
            for (i, f) in layer.iter().enumerate() {
                lookup.insert(f.clone(), i);
            }
        }
        SimplicialComplex {
            labels,
            by_dim,
            lookup,
        }
    }

    /// Downward closure of `facets`.
    pub fn from_facets(labels: Vec<L>, facets: Vec<Vec<usize>>) -> Result<Self> {
        Self::from_facets_capped(labels, facets, usize::MAX)
    }

    pub fn from_facets_capped(labels: Vec<L>, facets: Vec<Vec<usize>>, max_faces: usize) -> Result<Self> {
        let n = labels.len();
        let mut set: HashSet<Vec<usize>> = HashSet::new();
        for mut f in facets {
            f.sort_unstable();
            f.dedup();
            if let Some(&bad) = f.iter().find(|&&v| v >= n) {
                return Err(Error::IndexOutOfRange { index: bad, len: n });
            }
            if f.len() >= usize::BITS as usize {
                return Err(resource_limit("facet size", f.len(), 63));
            }
            for mask in 1u64..(1u64 << f.len()) {
                let sub: Vec<usize> = f
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &v)| v)
                    .collect();
                set.insert(sub);
            }
            if set.len() > max_faces {
                return Err(resource_limit("complex faces", set.len(), max_faces));
            }
        }
        for v in 0..n {
            set.insert(vec![v]);
        }
        Ok(Self::from_set(labels, set))
    }

    pub fn labels(&self) -> &[L] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &L {
        &self.labels[v]
    }

    pub fn num_vertices(&self) -> usize {
        self.labels.len()
    }

    pub fn num_faces(&self) -> usize {
        self.by_dim.iter().map(Vec::len).sum()
    }

    /// Faces of dimension `d`, sorted.
    pub fn faces_of_dim(&self, d: usize) -> &[Vec<usize>] {
        self.by_dim.get(d).map(Vec::as_slice).unwrap_or(&[])
    }

    /// All faces, by increasing dimension.
    pub fn faces(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.by_dim.iter().flatten()
    }

    pub fn contains(&self, face: &[usize]) -> bool {
        self.lookup.contains_key(face)
    }

    /// Position of a (sorted) face within its dimension layer.
    pub fn face_index(&self, face: &[usize]) -> Option<usize> {
        self.lookup.get(face).copied()
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.by_dim.iter().map(Vec::len).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.by_dim
            .iter()
            .enumerate()
            .map(|(d, l)| if d % 2 == 0 { l.len() as i64 } else { -(l.len() as i64) })
            .sum()
    }

    /// Dimension, or −1 for the empty complex.
    pub fn dimension(&self) -> isize {
        self.by_dim.len() as isize - 1
    }

    pub fn facets(&self) -> Vec<Vec<usize>> {
        let mut covered: HashSet<&[usize]> = HashSet::new();
        for layer in self.by_dim.iter().skip(1) {
            for f in layer {
                for i in 0..f.len() {
                    let mut sub = f.clone();
                    sub.remove(i);
                    if let Some(idx) = self.face_index(&sub) {
                        covered.insert(&self.by_dim[sub.len() - 1][idx]);
                    }
                }
            }
        }
        self.faces()
            .filter(|f| !covered.contains(f.as_slice()))
            .cloned()
            .collect()
    }

    pub fn is_pure(&self) -> bool {
        let d = self.dimension();
        self.facets().iter().all(|f| f.len() as isize - 1 == d)
    }

    pub fn is_downward_closed(&self) -> bool {
        self.faces().all(|f| {
            f.len() == 1
                || (0..f.len()).all(|i| {
                    let mut sub = f.clone();
                    sub.remove(i);
                    self.contains(&sub)
                })
        })
    }

    /// Per vertex, the number of faces of each dimension containing it.
    pub fn vertex_profiles(&self) -> Vec<Vec<usize>> {
        let mut prof = vec![vec![0usize; self.by_dim.len()]; self.num_vertices()];
        for (d, layer) in self.by_dim.iter().enumerate() {
            for f in layer {
                for &v in f {
                    prof[v][d] += 1;
                }
            }
        }
        prof
    }

    /// Adjacency of the 1-skeleton as bit rows.
    pub fn adjacency(&self) -> Vec<BitRow> {
        let n = self.num_vertices();
        let mut adj = vec![BitRow::new(n); n];
        for e in self.faces_of_dim(1) {
            adj[e[0]].insert(e[1]);
            adj[e[1]].insert(e[0]);
        }
        adj
    }

    /// Face poset ordered by inclusion; labels are the faces themselves.
    pub fn face_poset(&self) -> Poset<Vec<usize>> {
        let faces: Vec<Vec<usize>> = self.faces().cloned().collect();
        let mut offset = vec![0usize];
        for layer in &self.by_dim {
            offset.push(offset.last().unwrap() + layer.len());
        }
        let mut covers = Vec::new();
        for (d, layer) in self.by_dim.iter().enumerate().skip(1) {
            for (j, f) in layer.iter().enumerate() {
                for i in 0..f.len() {
                    let mut sub = f.clone();
                    sub.remove(i);
                    let si = self.face_index(&sub).expect("closed family");
                    covers.push((offset[d - 1] + si, offset[d] + j));
                }
            }
        }
        Poset::from_covers(faces, &covers).expect("inclusion is acyclic")
    }

    /// Relabels vertices; faces are unchanged.
    pub fn map_labels<M>(&self, f: impl Fn(&L) -> M) -> SimplicialComplex<M> {
        SimplicialComplex {
            labels: self.labels.iter().map(f).collect(),
            by_dim: self.by_dim.clone(),
            lookup: self.lookup.clone(),
        }
    }
}

impl<L: Clone> SimplicialComplex<L> {
    /// Stellar subdivision at `face`. A vertex yields the complex unchanged;
    /// otherwise the new vertex gets index `num_vertices()` and label `label`.
    pub fn stellar_subdivide(&self, face: &[usize], label: L) -> Result<Self> {
        let mut sigma = face.to_vec();
        sigma.sort_unstable();
        sigma.dedup();
        if sigma.is_empty() || !self.contains(&sigma) {
            return Err(Error::FaceNotPresent(sigma));
        }
        if sigma.len() == 1 {
            return Ok(self.clone());
        }
        let apex = self.num_vertices();
        let mut set: HashSet<Vec<usize>> = HashSet::new();
        for f in self.faces() {
            if !is_subset(&sigma, f) {
                set.insert(f.clone());
                continue;
            }
            let rest: Vec<usize> = f.iter().copied().filter(|v| sigma.binary_search(v).is_err()).collect();
            // proper subsets of sigma, including the empty one
            for mask in 0u64..(1u64 << sigma.len()) - 1 {
                let mut g = rest.clone();
                g.extend(
                    sigma
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask >> i & 1 == 1)
                        .map(|(_, &v)| v),
                );
                g.sort_unstable();
                g.push(apex);
                set.insert(g);
            }
        }
        let mut labels = self.labels.clone();
        labels.push(label);
        Ok(Self::from_set(labels, set))
    }

    /// Cone with a new apex vertex.
    pub fn cone(&self, apex: L) -> Self {
        let a = self.num_vertices();
        let mut set: HashSet<Vec<usize>> = self.faces().cloned().collect();
        for f in self.faces() {
            let mut g = f.clone();
            g.push(a);
            set.insert(g);
        }
        set.insert(vec![a]);
        let mut labels = self.labels.clone();
        labels.push(apex);
        Self::from_set(labels, set)
    }
}

impl<L: Eq + Hash + Clone> SimplicialComplex<L> {
    pub fn vertex_lookup(&self) -> HashMap<L, usize> {
        self.labels.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect()
    }

    /// Vertex index of each label under `f`, if `f` permutes the labels.
    pub fn label_permutation(&self, f: impl Fn(&L) -> L) -> Option<Vec<usize>> {
        let lookup = self.vertex_lookup();
        let images: Vec<usize> = self
            .labels
            .iter()
            .map(|l| lookup.get(&f(l)).copied())
            .collect::<Option<_>>()?;
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if std::mem::replace(&mut seen[i], true) {
                return None;
            }
        }
        Some(images)
    }

    /// True if the vertex map `image` carries faces onto faces bijectively.
    pub fn is_automorphism(&self, image: &[usize]) -> bool {
        self.faces().all(|f| {
            let mut g: Vec<usize> = f.iter().map(|&v| image[v]).collect();
            g.sort_unstable();
            self.contains(&g)
        })
    }

    /// Setwise invariance under a label action.
    pub fn is_invariant_under(&self, f: impl Fn(&L) -> L) -> bool {
        self.label_permutation(f).is_some_and(|img| self.is_automorphism(&img))
    }

    /// Equality of the two complexes as families of label sets.
    pub fn same_labelled_faces(&self, other: &SimplicialComplex<L>) -> bool {
        if self.f_vector() != other.f_vector() || self.num_vertices() != other.num_vertices() {
            return false;
        }
        let lookup = other.vertex_lookup();
        let Some(image): Option<Vec<usize>> =
            self.labels.iter().map(|l| lookup.get(l).copied()).collect()
        else {
            return false;
        };
        self.faces().all(|f| {
            let mut g: Vec<usize> = f.iter().map(|&v| image[v]).collect();
            g.sort_unstable();
            other.contains(&g)
        })
    }
}

fn is_subset(small: &[usize], big: &[usize]) -> bool {
    let mut it = big.iter();
    small.iter().all(|x| it.any(|y| y == x))
}

/// Searches for a vertex bijection carrying faces onto faces.
///
/// Vertices are first coloured by their per-dimension face counts and the
/// colouring is refined along the 1-skeleton; the backtracking search then
/// keeps edges consistent and checks all faces at the leaves. Candidates
/// equal to the source index are tried first, so label-identical inputs
/// resolve without search.
pub fn is_isomorphic<A, B>(k1: &SimplicialComplex<A>, k2: &SimplicialComplex<B>) -> Option<Vec<usize>> {
    let n = k1.num_vertices();
    if n != k2.num_vertices() || k1.f_vector() != k2.f_vector() {
        return None;
    }
    let adj1 = k1.adjacency();
    let adj2 = k2.adjacency();
    let (c1, c2) = refine_colours(k1, k2, &adj1, &adj2)?;

    let mut class_size: HashMap<usize, usize> = HashMap::new();
    for &c in &c1 {
        *class_size.entry(c).or_default() += 1;
    }
    // search order: most already-placed neighbours, then rarest colour
    let mut order = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    let mut hits = vec![0usize; n];
    for _ in 0..n {
        let next = (0..n)
            .filter(|&v| !placed[v])
            .min_by_key(|&v| (std::cmp::Reverse(hits[v]), class_size[&c1[v]], v))
            .expect("unplaced vertex");
        placed[next] = true;
        order.push(next);
        for w in adj1[next].iter() {
            hits[w] += 1;
        }
    }

    struct Search<'a, A, B> {
        k1: &'a SimplicialComplex<A>,
        k2: &'a SimplicialComplex<B>,
        adj1: &'a [BitRow],
        adj2: &'a [BitRow],
        c1: &'a [usize],
        c2: &'a [usize],
        order: &'a [usize],
        image: Vec<usize>,
        used: Vec<bool>,
    }

    impl<A, B> Search<'_, A, B> {
        fn run(&mut self, depth: usize) -> bool {
            if depth == self.order.len() {
                return self.k1.faces().all(|f| {
                    let mut g: Vec<usize> = f.iter().map(|&v| self.image[v]).collect();
                    g.sort_unstable();
                    self.k2.contains(&g)
                });
            }
            let s = self.order[depth];
            let n = self.image.len();
            let candidates = std::iter::once(s).chain((0..n).filter(move |&t| t != s));
            for t in candidates {
                if self.used[t] || self.c1[s] != self.c2[t] {
                    continue;
                }
                let ok = self.order[..depth]
                    .iter()
                    .all(|&s2| self.adj1[s].contains(s2) == self.adj2[t].contains(self.image[s2]));
                if !ok {
                    continue;
                }
                self.image[s] = t;
                self.used[t] = true;
                if self.run(depth + 1) {
                    return true;
                }
                self.used[t] = false;
                self.image[s] = usize::MAX;
            }
            false
        }
    }

    let mut search = Search {
        k1,
        k2,
        adj1: &adj1,
        adj2: &adj2,
        c1: &c1,
        c2: &c2,
        order: &order,
        image: vec![usize::MAX; n],
        used: vec![false; n],
    };
    if search.run(0) {
        Some(search.image)
    } else {
        None
    }
}

/// Joint colour refinement of both vertex sets; `None` if the colour
/// histograms ever differ.
fn refine_colours<A, B>(
    k1: &SimplicialComplex<A>,
    k2: &SimplicialComplex<B>,
    adj1: &[BitRow],
    adj2: &[BitRow],
) -> Option<(Vec<usize>, Vec<usize>)> {
    fn recolour<T: Ord + Clone>(s1: &[T], s2: &[T]) -> Option<(Vec<usize>, Vec<usize>)> {
        let mut palette: BTreeMap<T, (usize, usize)> = BTreeMap::new();
        for s in s1 {
            palette.entry(s.clone()).or_default().0 += 1;
        }
        for s in s2 {
            palette.entry(s.clone()).or_default().1 += 1;
        }
        if palette.values().any(|(a, b)| a != b) {
            return None;
        }
        let ids: BTreeMap<&T, usize> = palette.keys().enumerate().map(|(i, k)| (k, i)).collect();
        Some((
            s1.iter().map(|s| ids[s]).collect(),
            s2.iter().map(|s| ids[s]).collect(),
        ))
    }
    let (mut c1, mut c2) = recolour(&k1.vertex_profiles(), &k2.vertex_profiles())?;
    loop {
        let sig = |c: &[usize], adj: &[BitRow]| -> Vec<(usize, Vec<usize>)> {
            adj.iter()
                .enumerate()
                .map(|(v, row)| {
                    let mut nb: Vec<usize> = row.iter().map(|w| c[w]).collect();
                    nb.sort_unstable();
                    (c[v], nb)
                })
                .collect()
        };
        let (n1, n2) = recolour(&sig(&c1, adj1), &sig(&c2, adj2))?;
        let classes = |c: &[usize]| c.iter().collect::<HashSet<_>>().len();
        if classes(&n1) == classes(&c1) {
            return Some((n1, n2));
        }
        c1 = n1;
        c2 = n2;
    }
}

#[derive(Serialize, Deserialize)]
struct ComplexJson<L> {
    vertices: Vec<L>,
    facets: Vec<Vec<usize>>,
}

impl<L: Serialize + Clone> SimplicialComplex<L> {
    pub fn to_json(&self) -> serde_json::Value {
        let doc = ComplexJson {
            vertices: self.labels.clone(),
            facets: self.facets(),
        };
        serde_json::to_value(doc).expect("complex serializes")
    }
}

impl<L: DeserializeOwned> SimplicialComplex<L> {
    pub fn from_json(value: serde_json::Value) -> Result<Self> {
        let doc: ComplexJson<L> =
            serde_json::from_value(value).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_facets(doc.vertices, doc.facets)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::reduced_homology;
    use proptest::prelude::*;

    fn simplex(n: usize) -> SimplicialComplex<usize> {
        SimplicialComplex::from_facets((0..n).collect(), vec![(0..n).collect()]).unwrap()
    }

    fn triangle_boundary() -> SimplicialComplex<usize> {
        SimplicialComplex::from_facets(vec![0, 1, 2], vec![vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap()
    }

    #[test]
    fn triangle_boundary_counts() {
        let k = triangle_boundary();
        assert_eq!(k.f_vector(), vec![3, 3]);
        assert_eq!(k.euler_characteristic(), 0);
        assert_eq!(k.dimension(), 1);
        assert!(k.is_pure());
    }

    #[test]
    fn solid_tetrahedron_counts() {
        let k = simplex(4);
        assert_eq!(k.f_vector(), vec![4, 6, 4, 1]);
        assert_eq!(k.euler_characteristic(), 1);
        assert_eq!(k.facets(), vec![vec![0, 1, 2, 3]]);
    }

    #[test]
    fn impure_complex() {
        let k = SimplicialComplex::from_facets(vec![0, 1, 2], vec![vec![0, 1]]).unwrap();
        assert!(!k.is_pure());
        assert_eq!(k.facets(), vec![vec![2], vec![0, 1]]);
    }

    #[test]
    fn stellar_at_top_face_of_triangle() {
        let k = simplex(3).stellar_subdivide(&[0, 1, 2], 3).unwrap();
        assert_eq!(k.f_vector(), vec![4, 6, 3]);
        assert_eq!(k.euler_characteristic(), 1);
        assert!(!k.contains(&[0, 1, 2]));
    }

    #[test]
    fn stellar_at_edge_of_triangle() {
        // hand oracle: faces {0},{1},{2},{v}; {0,2},{1,2},{0,v},{1,v},{2,v}; {0,2,v},{1,2,v}
        let k = simplex(3).stellar_subdivide(&[0, 1], 3).unwrap();
        assert_eq!(k.f_vector(), vec![4, 5, 2]);
        assert!(k.contains(&[0, 2, 3]) && k.contains(&[1, 2, 3]));
        assert!(!k.contains(&[0, 1]));
    }

    #[test]
    fn stellar_at_vertex_is_identity() {
        let k = simplex(3);
        let s = k.stellar_subdivide(&[1], 99).unwrap();
        assert_eq!(s.f_vector(), k.f_vector());
        assert_eq!(s.num_vertices(), 3);
    }

    #[test]
    fn stellar_at_missing_face() {
        let k = triangle_boundary();
        assert_eq!(
            k.stellar_subdivide(&[0, 1, 2], 3).unwrap_err(),
            Error::FaceNotPresent(vec![0, 1, 2])
        );
    }

    #[test]
    fn stellar_facet_f_vector_rule() {
        // subdividing a d-facet: +1 vertex, top count +(d+1)-1
        let k = simplex(4);
        let s = k.stellar_subdivide(&[0, 1, 2, 3], 4).unwrap();
        assert_eq!(s.f_vector()[0], 5);
        assert_eq!(s.f_vector()[3], 1 + 4 - 1);
    }

    #[test]
    fn isomorphism_basic() {
        let k = triangle_boundary();
        assert_eq!(is_isomorphic(&k, &k), Some(vec![0, 1, 2]));
        let path = SimplicialComplex::from_facets(vec![0, 1, 2], vec![vec![0, 1], vec![1, 2]]).unwrap();
        assert!(is_isomorphic(&path, &k).is_none());
        let path2 = SimplicialComplex::from_facets(vec![0, 1, 2], vec![vec![0, 2], vec![1, 2]]).unwrap();
        let f = is_isomorphic(&path, &path2).unwrap();
        assert_eq!(f[1], 2);
    }

    #[test]
    fn isomorphism_needs_full_face_check() {
        // hollow vs solid triangle share the 1-skeleton but differ in f-vector
        assert!(is_isomorphic(&triangle_boundary(), &simplex(3)).is_none());
    }

    #[test]
    fn permutation_action() {
        let k = SimplicialComplex::from_facets(vec![10, 20, 30], vec![vec![0, 1], vec![1, 2]]).unwrap();
        assert!(k.is_invariant_under(|&l| l));
        // swapping the two ends of a path keeps it invariant
        assert!(k.is_invariant_under(|&l| match l { 10 => 30, 30 => 10, x => x }));
        // moving the middle does not
        assert!(!k.is_invariant_under(|&l| match l { 10 => 20, 20 => 10, x => x }));
        let moved = k.map_labels(|&l| l + 1);
        assert_eq!(moved.f_vector(), k.f_vector());
    }

    #[test]
    fn face_poset_covers_are_codimension_one() {
        let k = simplex(3);
        let p = k.face_poset();
        assert_eq!(p.len(), 7);
        for &(a, b) in p.covers() {
            assert_eq!(p.label(a).len() + 1, p.label(b).len());
        }
        assert_eq!(p.covers().len(), 3 * 2 + 3);
    }

    #[test]
    fn json_round_trip() {
        let k = SimplicialComplex::from_facets(vec!["a".to_string(), "b".into(), "c".into()], vec![vec![0, 1]]).unwrap();
        let v = k.to_json();
        assert_eq!(v["facets"], serde_json::json!([[2], [0, 1]]));
        let back: SimplicialComplex<String> = SimplicialComplex::from_json(v).unwrap();
        assert!(back.same_labelled_faces(&k));
        assert!(SimplicialComplex::<String>::from_json(serde_json::json!({"vertices": ["a"], "facets": [[3]]})).is_err());
    }

    fn complex_strategy() -> impl Strategy<Value = SimplicialComplex<usize>> {
        (2usize..7).prop_flat_map(|n| {
            proptest::collection::vec(proptest::collection::vec(0..n, 1..4), 1..6)
                .prop_map(move |fs| SimplicialComplex::from_facets((0..n).collect(), fs).unwrap())
        })
    }

    proptest! {
        #[test]
        fn stellar_preserves_homology_and_closure(k in complex_strategy(), pick in 0usize..1000) {
            let faces: Vec<Vec<usize>> = k.faces().filter(|f| f.len() >= 2).cloned().collect();
            prop_assume!(!faces.is_empty());
            let sigma = &faces[pick % faces.len()];
            let s = k.stellar_subdivide(sigma, k.num_vertices()).unwrap();
            prop_assert!(s.is_downward_closed());
            prop_assert!(!s.faces().any(|f| is_subset(sigma, f)));
            prop_assert_eq!(s.euler_characteristic(), k.euler_characteristic());
            prop_assert_eq!(reduced_homology(&s).unwrap(), reduced_homology(&k).unwrap());
        }

        #[test]
        fn cones_are_acyclic(k in complex_strategy()) {
            let c = k.cone(k.num_vertices());
            let h = reduced_homology(&c).unwrap();
            prop_assert!(h.groups.iter().all(|g| g.betti == 0 && g.torsion.is_empty()));
        }
    }
}
