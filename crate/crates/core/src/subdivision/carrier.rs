//! Carrier maps from Δ(Π^(k)_m) to T^k_n and their exact verification.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ktrees::{ktree_complex, NestedFamily};
use crate::partition::{KInstance, Partition};
use crate::simplicial::SimplicialComplex;
use crate::subdivision::geometry::{rank, relative_interiors_meet, relative_volume, render, Rational};
use crate::subdivision::report::CheckResult;
use crate::subdivision::sigma::sigma_lattice;

/// Barycentric coordinates keyed by target vertex.
pub type Point = BTreeMap<usize, Rational>;

pub fn barycenter(face: &[usize]) -> Point {
    let w = Rational::new(1.into(), face.len().into());
    face.iter().map(|&v| (v, w.clone())).collect()
}

/// A face-poset map `φ` (the union of vertex carriers) together with a
/// vertex map into the realisation of the target.
#[derive(Clone, Debug)]
pub struct CarrierMap {
    pub source: SimplicialComplex<Partition>,
    pub target: SimplicialComplex<Partition>,
    /// Sorted target vertices carrying each source vertex.
    pub vertex_carriers: Vec<Vec<usize>>,
    pub vertex_points: Vec<Point>,
}

impl CarrierMap {
    /// Places every source vertex at the barycenter of its carrier.
    pub fn new(
        source: SimplicialComplex<Partition>,
        target: SimplicialComplex<Partition>,
        mut vertex_carriers: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if vertex_carriers.len() != source.num_vertices() {
            return Err(Error::InvalidArgument("one carrier per source vertex is required".into()));
        }
        for c in vertex_carriers.iter_mut() {
            c.sort_unstable();
            c.dedup();
            if c.is_empty() {
                return Err(Error::InvalidArgument("carriers must be nonempty".into()));
            }
            if let Some(&bad) = c.iter().find(|&&v| v >= target.num_vertices()) {
                return Err(Error::IndexOutOfRange {
                    index: bad,
                    len: target.num_vertices(),
                });
            }
        }
        let vertex_points = vertex_carriers.iter().map(|c| barycenter(c)).collect();
        Ok(CarrierMap {
            source,
            target,
            vertex_carriers,
            vertex_points,
        })
    }

    /// `φ(p)`: union of the vertex carriers.
    pub fn phi(&self, face: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = face.iter().flat_map(|&v| self.vertex_carriers[v].iter().copied()).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Target vertices on which some vertex point of `face` is positive.
    fn support(&self, face: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = face
            .iter()
            .flat_map(|&v| self.vertex_points[v].iter().filter(|(_, c)| !c.is_zero()).map(|(&t, _)| t))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Exchanges the vertex points of two source vertices, keeping carriers.
    pub fn swap_vertex_points(&mut self, a: &Partition, b: &Partition) -> Result<()> {
        let lookup = self.source.vertex_lookup();
        let find = |x: &Partition| {
            lookup
                .get(x)
                .copied()
                .ok_or_else(|| Error::InvalidArgument(format!("{x} is not a source vertex")))
        };
        let (i, j) = (find(a)?, find(b)?);
        self.vertex_points.swap(i, j);
        Ok(())
    }

    fn source_face_string(&self, face: &[usize]) -> String {
        labels_string(&self.source, face)
    }

    fn target_face_string(&self, face: &[usize]) -> String {
        labels_string(&self.target, face)
    }
}

fn labels_string(k: &SimplicialComplex<Partition>, face: &[usize]) -> String {
    let shown: Vec<String> = face.iter().map(|&v| k.label(v).to_string()).collect();
    format!("{{{}}}", shown.join(", "))
}

/// The map `ω ↦ F^k(ω)` between given copies of Δ(Π^(k)_m) and T^k_n.
pub fn carrier_map_between(
    inst: &KInstance,
    source: SimplicialComplex<Partition>,
    target: SimplicialComplex<Partition>,
) -> Result<CarrierMap> {
    let lookup = target.vertex_lookup();
    let carriers = source
        .labels()
        .iter()
        .map(|x| {
            inst.g
                .factors(x)
                .iter()
                .map(|f| {
                    lookup
                        .get(f)
                        .copied()
                        .ok_or_else(|| Error::InvalidArgument(format!("factor {f} of {x} is not a target vertex")))
                })
                .collect::<Result<Vec<usize>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    CarrierMap::new(source, target, carriers)
}

/// Builds Δ(Π^(k)_m), T^k_n and the map `ω ↦ F^k(ω)` with barycentric
/// vertex placement.
pub fn global_carrier_map(inst: &KInstance, face_cap: usize) -> Result<CarrierMap> {
    let source = inst.poset.poset().order_complex_capped(face_cap)?;
    let target = ktree_complex(inst, face_cap)?;
    carrier_map_between(inst, source, target)
}

const CARRIER_IS_FACE: &str = "carrier-is-face";
const ORDER_PRESERVING: &str = "carrier-order-preserving";
const POINT_ON_CARRIER: &str = "vertex-point-on-carrier";
const INJECTIVE: &str = "vertex-map-injective";
const FACET_DIMENSION: &str = "facets-keep-dimension";
const FULL_DIMENSIONAL: &str = "top-cells-full-dimensional";
const DISJOINT: &str = "cell-interiors-disjoint";
const VOLUME: &str = "cell-volumes-sum-to-one";
const LOWER_CELLS: &str = "lower-cells-are-faces";

/// Exact check that the cells mapped into each closed face of the target
/// tile it. All failures are reported; nothing is thrown.
pub fn verify_carrier_map(cm: &CarrierMap) -> Vec<CheckResult> {
    let mut failures: BTreeMap<&'static str, String> = BTreeMap::new();
    let mut note = |name: &'static str, w: String| {
        failures.entry(name).or_insert(w);
    };
    let faces: Vec<Vec<usize>> = cm.source.faces().cloned().collect();

    for f in &faces {
        let image = cm.phi(f);
        if !cm.target.contains(&image) {
            note(CARRIER_IS_FACE, format!("{} ↦ {}", cm.source_face_string(f), cm.target_face_string(&image)));
        }
        if f.len() > 1 {
            for skip in 0..f.len() {
                let sub: Vec<usize> = f.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect();
                let sub_image = cm.phi(&sub);
                if !sub_image.iter().all(|v| image.binary_search(v).is_ok()) {
                    note(ORDER_PRESERVING, cm.source_face_string(f));
                }
            }
        }
    }
    let dims = cm.source.dimension();
    for facet in cm.source.facets() {
        if cm.phi(&facet).len() != facet.len() {
            note(FACET_DIMENSION, format!("{} has dimension {}", cm.source_face_string(&facet), dims));
        }
    }
    for (v, (p, c)) in cm.vertex_points.iter().zip(&cm.vertex_carriers).enumerate() {
        let support: Vec<usize> = p.iter().filter(|(_, x)| !x.is_zero()).map(|(&t, _)| t).collect();
        let total: Rational = p.values().cloned().sum();
        if &support != c || p.values().any(|x| x.is_negative()) || !total.is_one() {
            note(POINT_ON_CARRIER, cm.source.label(v).to_string());
        }
    }
    let mut seen: HashMap<&Point, usize> = HashMap::new();
    for (v, p) in cm.vertex_points.iter().enumerate() {
        if let Some(&u) = seen.get(p) {
            note(INJECTIVE, format!("{} and {}", cm.source.label(u), cm.source.label(v)));
        }
        seen.insert(p, v);
    }

    // cells grouped by the support of their vertex points
    let mut by_support: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
    for (i, f) in faces.iter().enumerate() {
        by_support.entry(cm.support(f)).or_default().push(i);
    }
    let targets: Vec<Vec<usize>> = cm.target.faces().cloned().collect();
    let per_face: Vec<Vec<(&'static str, String)>> = targets
        .par_iter()
        .map(|q| check_target_face(cm, &faces, &by_support, q))
        .collect();
    for list in per_face {
        for (name, w) in list {
            note(name, w);
        }
    }

    [
        CARRIER_IS_FACE,
        ORDER_PRESERVING,
        POINT_ON_CARRIER,
        INJECTIVE,
        FACET_DIMENSION,
        FULL_DIMENSIONAL,
        DISJOINT,
        VOLUME,
        LOWER_CELLS,
    ]
    .into_iter()
    .map(|name| CheckResult::from_witness(name, failures.get(name).cloned()))
    .collect()
}

fn check_target_face(
    cm: &CarrierMap,
    faces: &[Vec<usize>],
    by_support: &HashMap<Vec<usize>, Vec<usize>>,
    q: &[usize],
) -> Vec<(&'static str, String)> {
    let mut out = Vec::new();
    if q.len() >= 24 {
        out.push((VOLUME, format!("target face {} is too large to check", cm.target_face_string(q))));
        return out;
    }
    let dim = q.len() - 1;
    let mut cells: Vec<usize> = Vec::new();
    for mask in 1u32..(1 << q.len()) {
        let sub: Vec<usize> = (0..q.len()).filter(|&i| mask >> i & 1 == 1).map(|i| q[i]).collect();
        if let Some(list) = by_support.get(&sub) {
            cells.extend(list);
        }
    }
    let coords = |f: &[usize]| -> Vec<Vec<Rational>> {
        f.iter()
            .map(|&v| {
                q.iter()
                    .map(|t| cm.vertex_points[v].get(t).cloned().unwrap_or_else(Rational::zero))
                    .collect()
            })
            .collect()
    };
    let top: Vec<usize> = cells.iter().copied().filter(|&c| faces[c].len() == dim + 1).collect();
    let where_ = || format!("in {}", cm.target_face_string(q));
    let mut volume = Rational::zero();
    let top_coords: Vec<Vec<Vec<Rational>>> = top.iter().map(|&c| coords(&faces[c])).collect();
    for (&c, pts) in top.iter().zip(&top_coords) {
        let v = relative_volume(pts);
        if v.is_zero() {
            out.push((FULL_DIMENSIONAL, format!("{} {}", cm.source_face_string(&faces[c]), where_())));
        }
        volume += v;
    }
    for i in 0..top.len() {
        for j in i + 1..top.len() {
            if relative_interiors_meet(&top_coords[i], &top_coords[j]) {
                out.push((
                    DISJOINT,
                    format!(
                        "{} and {} overlap {}",
                        cm.source_face_string(&faces[top[i]]),
                        cm.source_face_string(&faces[top[j]]),
                        where_()
                    ),
                ));
            }
        }
    }
    if !volume.is_one() {
        out.push((VOLUME, format!("total {} {}", render(&volume), where_())));
    }
    let top_sets: Vec<HashSet<usize>> = top.iter().map(|&c| faces[c].iter().copied().collect()).collect();
    for &c in cells.iter().filter(|&&c| faces[c].len() <= dim) {
        let f = &faces[c];
        let nondegenerate = rank(&coords(f)) == f.len();
        let in_top = top_sets.iter().any(|s| f.iter().all(|v| s.contains(v)));
        if !nondegenerate || !in_top {
            out.push((LOWER_CELLS, format!("{} {}", cm.source_face_string(f), where_())));
        }
    }
    for &c in cells.iter().filter(|&&c| faces[c].len() > dim + 1) {
        out.push((FULL_DIMENSIONAL, format!("{} is too big {}", cm.source_face_string(&faces[c]), where_())));
    }
    out
}

/// Every face of the target is `φ` of some source face.
pub fn check_surjective(cm: &CarrierMap) -> CheckResult {
    let image: HashSet<Vec<usize>> = cm.source.faces().map(|f| cm.phi(f)).collect();
    let missing = cm.target.faces().find(|q| !image.contains(*q));
    CheckResult::from_witness("phi-surjective", missing.map(|q| cm.target_face_string(q)))
}

/// The vertex map of Δ(Σ(N)) for one face `N` of the target (possibly empty).
#[derive(Clone, Debug)]
pub struct LocalCarrierMap {
    /// The face `N`, as sorted target vertices.
    pub face: Vec<usize>,
    /// Σ(N) \ {0̂}, as sorted indices into Π^(k)_m.
    pub vertices: Vec<usize>,
    /// Points aligned with `vertices`, keyed by target vertex.
    pub points: Vec<Point>,
}

/// One local map per face of the target, plus the empty face, in the
/// target's face order.
pub fn local_carrier_maps(inst: &KInstance, target: &SimplicialComplex<Partition>) -> Result<Vec<LocalCarrierMap>> {
    let lookup = target.vertex_lookup();
    let mut faces: Vec<Vec<usize>> = vec![Vec::new()];
    faces.extend(target.faces().cloned());
    faces
        .into_par_iter()
        .map(|face| {
            let members = face.iter().map(|&v| target.label(v).clone()).collect();
            let n = NestedFamily::from_members_unchecked(inst.m, inst.k, members);
            let sigma = sigma_lattice(inst, &n)?;
            let mut entries: Vec<(usize, Point)> = sigma
                .nonzero()
                .into_iter()
                .map(|a| {
                    let label = sigma.poset().label(a);
                    let mut carrier: Vec<usize> = sigma
                        .factors(a)
                        .iter()
                        .map(|&f| lookup[sigma.poset().label(f)])
                        .collect();
                    carrier.sort_unstable();
                    let idx = inst.poset.index_of(label).expect("Σ(N) lies in the restricted poset");
                    (idx, barycenter(&carrier))
                })
                .collect();
            entries.sort_by_key(|e| e.0);
            let (vertices, points) = entries.into_iter().unzip();
            Ok(LocalCarrierMap { face, vertices, points })
        })
        .collect()
}

fn intersect(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j, mut out) = (0, 0, Vec::new());
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

fn point_of(m: &LocalCarrierMap, v: usize) -> Option<&Point> {
    m.vertices.binary_search(&v).ok().map(|i| &m.points[i])
}

/// For all pairs of faces: the shared vertices are exactly Σ(N₁ ∩ N₂) \ {0̂},
/// and the two local maps agree there with the map of the intersection.
pub fn check_compatibility(maps: &[LocalCarrierMap]) -> CheckResult {
    let index: HashMap<&[usize], usize> = maps.iter().enumerate().map(|(i, m)| (m.face.as_slice(), i)).collect();
    let witness = (0..maps.len()).into_par_iter().find_map_first(|i| {
        for j in i + 1..maps.len() {
            let (a, b) = (&maps[i], &maps[j]);
            let meet = intersect(&a.face, &b.face);
            let Some(&k) = index.get(meet.as_slice()) else {
                return Some(format!("faces {:?} and {:?} meet outside the family", a.face, b.face));
            };
            let shared = intersect(&a.vertices, &b.vertices);
            if shared != maps[k].vertices {
                return Some(format!(
                    "faces {:?} and {:?} share {} vertices, their intersection has {}",
                    a.face,
                    b.face,
                    shared.len(),
                    maps[k].vertices.len()
                ));
            }
            for &v in &shared {
                let (pa, pb, pk) = (point_of(a, v), point_of(b, v), point_of(&maps[k], v));
                if pa != pb || pa != pk {
                    return Some(format!("faces {:?} and {:?} disagree at element {v}", a.face, b.face));
                }
            }
        }
        None
    });
    CheckResult::from_witness("local-maps-compatible", witness)
}

/// Each local map agrees with the global vertex map.
pub fn check_local_against_global(inst: &KInstance, cm: &CarrierMap, maps: &[LocalCarrierMap]) -> CheckResult {
    let lookup = cm.source.vertex_lookup();
    let witness = maps.iter().find_map(|m| {
        m.vertices.iter().zip(&m.points).find_map(|(&v, p)| {
            let label = inst.poset.partition(v);
            match lookup.get(label) {
                Some(&s) if &cm.vertex_points[s] == p => None,
                _ => Some(format!("{label} on face {}", cm.target_face_string(&m.face))),
            }
        })
    });
    CheckResult::from_witness("local-maps-match-global", witness)
}

/// `φ⁻¹(≤N)` is the order complex of Σ(N) \ {0̂}: a source vertex has its
/// carrier inside `N` exactly when it lies in Σ(N).
pub fn check_local_preimage(inst: &KInstance, cm: &CarrierMap, maps: &[LocalCarrierMap]) -> CheckResult {
    let source_index: Vec<usize> = cm
        .source
        .labels()
        .iter()
        .map(|x| inst.poset.index_of(x).expect("source vertices lie in the poset"))
        .collect();
    let witness = maps.par_iter().find_map_first(|m| {
        let mut pre: Vec<usize> = cm
            .vertex_carriers
            .iter()
            .enumerate()
            .filter(|(_, c)| c.iter().all(|v| m.face.binary_search(v).is_ok()))
            .map(|(s, _)| source_index[s])
            .collect();
        pre.sort_unstable();
        (pre != m.vertices).then(|| format!("face {}", cm.target_face_string(&m.face)))
    });
    CheckResult::from_witness("local-preimage", witness)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::DEFAULT_ELEMENT_CAP;
    use crate::subdivision::geometry::rational;

    fn map(k: usize, n: usize) -> (KInstance, CarrierMap) {
        let inst = KInstance::new(k, n, DEFAULT_ELEMENT_CAP).unwrap();
        let cm = global_carrier_map(&inst, 1_000_000).unwrap();
        (inst, cm)
    }

    fn all_pass(checks: &[CheckResult]) -> bool {
        checks.iter().all(|c| c.pass)
    }

    #[test]
    fn points_case() {
        let (_, cm) = map(2, 3);
        assert_eq!(cm.source.num_vertices(), 10);
        assert_eq!(cm.target.num_vertices(), 10);
        assert!(all_pass(&verify_carrier_map(&cm)));
    }

    #[test]
    fn edge_midpoint() {
        let (_, cm) = map(2, 4);
        let x: Partition = "(123)(456)7".parse().unwrap();
        let v = cm.source.vertex_lookup()[&x];
        let carrier: Vec<String> = cm.vertex_carriers[v].iter().map(|&t| cm.target.label(t).to_string()).collect();
        assert_eq!(carrier, vec!["123(456)7", "(123)4567"]);
        assert!(cm.vertex_points[v].values().all(|c| c == &rational(1, 2)));
        let g: Partition = "(123)4567".parse().unwrap();
        let u = cm.source.vertex_lookup()[&g];
        assert_eq!(cm.vertex_carriers[u].len(), 1);
    }

    #[test]
    fn binary_trees_pass() {
        let (inst, cm) = map(1, 4);
        assert!(all_pass(&verify_carrier_map(&cm)));
        assert!(check_surjective(&cm).pass);
        let maps = local_carrier_maps(&inst, &cm.target).unwrap();
        assert_eq!(maps.len(), cm.target.num_faces() + 1);
        assert!(check_compatibility(&maps).pass);
        assert!(check_local_against_global(&inst, &cm, &maps).pass);
        assert!(check_local_preimage(&inst, &cm, &maps).pass);
    }

    #[test]
    fn swapped_points_overlap() {
        let (_, mut cm) = map(1, 4);
        cm.swap_vertex_points(&"(12)34".parse().unwrap(), &"(12)(34)".parse().unwrap())
            .unwrap();
        let checks = verify_carrier_map(&cm);
        let overlap = checks.iter().find(|c| c.name == DISJOINT).unwrap();
        assert!(!overlap.pass);
        assert!(overlap.witness.as_ref().unwrap().contains("overlap"));
    }

    #[test]
    fn inconsistent_local_point() {
        let (inst, cm) = map(2, 3);
        let mut maps = local_carrier_maps(&inst, &cm.target).unwrap();
        assert!(check_compatibility(&maps).pass);
        let i = maps.iter().position(|m| m.face.len() == 1).unwrap();
        let v = *maps[i].points[0].keys().next().unwrap();
        maps[i].points[0].insert(v, rational(1, 3));
        assert!(!check_local_against_global(&inst, &cm, &maps).pass);
        // a singleton face is shared with nothing, so also corrupt the empty-face view
        let (inst, cm) = map(1, 4);
        let mut maps = local_carrier_maps(&inst, &cm.target).unwrap();
        let i = maps.iter().position(|m| m.face.len() == 2).unwrap();
        let v = *maps[i].points[0].keys().next().unwrap();
        maps[i].points[0].insert(v, rational(1, 3));
        assert!(!check_compatibility(&maps).pass);
    }

    #[test]
    fn disjoint_faces_are_vacuous() {
        let maps = vec![
            LocalCarrierMap {
                face: vec![],
                vertices: vec![],
                points: vec![],
            },
            LocalCarrierMap {
                face: vec![0],
                vertices: vec![5],
                points: vec![barycenter(&[0])],
            },
            LocalCarrierMap {
                face: vec![1],
                vertices: vec![6],
                points: vec![barycenter(&[1])],
            },
        ];
        assert!(check_compatibility(&maps).pass);
    }
}
