use proptest::prelude::*;

use ktree_subdiv::homology::reduced_homology;
use ktree_subdiv::ktrees::{ktree_complex, nested_to_tree, tree_to_nested, NestedFamily};
use ktree_subdiv::subdivision::blowup_sequence;
use ktree_subdiv::subdivision::geometry::{det, rational, Rational};
use ktree_subdiv::subdivision::theorem::linear_extensions;
use ktree_subdiv::{KInstance, KTree, Partition, Permutation, SimplicialComplex};

fn partition_of(m: usize, labels: &[usize]) -> Partition {
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut seen: Vec<usize> = Vec::new();
    for (i, &l) in labels.iter().take(m).enumerate() {
        match seen.iter().position(|&s| s == l) {
            Some(j) => blocks[j].push(i + 1),
            None => {
                seen.push(l);
                blocks.push(vec![i + 1]);
            }
        }
    }
    Partition::new(m, &blocks).unwrap()
}

fn any_partition(m: usize) -> impl Strategy<Value = Partition> {
    prop::collection::vec(0..m, m).prop_map(move |v| partition_of(m, &v))
}

fn perm(m: usize) -> impl Strategy<Value = Permutation> {
    Just((1..=m).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::from_one_based(&v).unwrap())
}

fn instance(k: usize, n: usize) -> KInstance {
    KInstance::new(k, n, 100_000).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn join_is_least_upper_bound(a in any_partition(7), b in any_partition(7), c in any_partition(7)) {
        let j = a.join(&b);
        prop_assert!(a.refines(&j) && b.refines(&j));
        prop_assert_eq!(&j, &b.join(&a));
        prop_assert_eq!(a.join(&b).join(&c), a.join(&b.join(&c)));
        if a.refines(&c) && b.refines(&c) {
            prop_assert!(j.refines(&c));
        }
        prop_assert_eq!(j.rank(), 7 - j.num_blocks());
    }

    #[test]
    fn text_round_trip(a in any_partition(8), b in any_partition(12)) {
        prop_assert_eq!(a.to_string().parse::<Partition>().unwrap(), a.clone());
        prop_assert_eq!(b.to_string().parse::<Partition>().unwrap(), b);
    }

    #[test]
    fn permutations_act_on_restricted_poset(pi in perm(7), sigma in perm(7), i in 0usize..128, j in 0usize..128) {
        let inst = instance(2, 4);
        let q = inst.poset.poset();
        let (x, y) = (q.label(i), q.label(j));
        let (px, py) = (x.permuted(&pi), y.permuted(&pi));
        prop_assert!(inst.poset.contains(&px));
        prop_assert_eq!(x.refines(y), px.refines(&py));
        prop_assert_eq!(px.permuted(&pi.inverse()), x.clone());
        prop_assert_eq!(x.permuted(&sigma).permuted(&pi), x.permuted(&pi.compose(&sigma)));
        let moved: Vec<Partition> = inst.g.factors(x).iter().map(|f| f.permuted(&pi)).collect();
        let mut moved = moved;
        moved.sort();
        prop_assert_eq!(inst.g.factors(&px), moved);
    }

    #[test]
    fn tree_round_trips(face in 0usize..336, pi in perm(7)) {
        let inst = instance(2, 4);
        let t = ktree_complex(&inst, 100_000).unwrap();
        let faces: Vec<&Vec<usize>> = t.faces().collect();
        let members: Vec<Partition> = faces[face % faces.len()].iter().map(|&v| t.label(v).clone()).collect();
        let n = NestedFamily::new(&inst, members).unwrap();
        let tree = nested_to_tree(&n).unwrap();
        prop_assert_eq!(tree_to_nested(&tree), n.clone());
        prop_assert_eq!(KTree::from_newick(&tree.newick(), 2).unwrap(), tree.clone());
        prop_assert_eq!(tree.internal_edges().len(), n.len());
        prop_assert_eq!(tree_to_nested(&tree.permuted(&pi)), n.permuted(&pi));
        prop_assert_eq!(tree.contract(&tree.internal_edges()).unwrap(), KTree::star(7, 2).unwrap());
    }

    #[test]
    fn stellar_subdivision_keeps_homology(
        facets in prop::collection::vec(prop::collection::btree_set(0usize..7, 1..4), 1..6),
        pick in 0usize..1000,
    ) {
        let facets: Vec<Vec<usize>> = facets.into_iter().map(|s| s.into_iter().collect()).collect();
        let c = SimplicialComplex::from_facets((0..7).collect(), facets).unwrap();
        let faces: Vec<&Vec<usize>> = c.faces().collect();
        let face = faces[pick % faces.len()].clone();
        let s = c.stellar_subdivide(&face, 7).unwrap();
        prop_assert!(s.is_downward_closed());
        prop_assert_eq!(s.euler_characteristic(), c.euler_characteristic());
        prop_assert_eq!(reduced_homology(&s).unwrap(), reduced_homology(&c).unwrap());
    }

    #[test]
    fn determinant_is_alternating_and_linear(
        entries in prop::collection::vec(-5i64..6, 9),
        scale in -4i64..5,
    ) {
        let m: Vec<Vec<Rational>> = entries.chunks(3).map(|r| r.iter().map(|&x| rational(x, 1)).collect()).collect();
        let mut swapped = m.clone();
        swapped.swap(0, 2);
        prop_assert_eq!(det(&swapped), -det(&m));
        let mut scaled = m.clone();
        for x in scaled[1].iter_mut() {
            *x = x.clone() * rational(scale, 1);
        }
        prop_assert_eq!(det(&scaled), det(&m) * rational(scale, 1));
        let t: Vec<Vec<Rational>> = (0..3).map(|j| (0..3).map(|i| m[i][j].clone()).collect()).collect();
        prop_assert_eq!(det(&t), det(&m));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn any_linear_extension_gives_the_order_complex(seed in any::<u64>()) {
        let inst = instance(1, 4);
        let q = inst.poset.poset();
        let source = q.order_complex();
        let nonzero: Vec<usize> = (0..q.len()).filter(|&x| Some(x) != q.min()).collect();
        for ext in linear_extensions(&inst, 3, seed).unwrap() {
            let b = blowup_sequence(q, &inst.g_indices, &nonzero, &ext, false).unwrap();
            prop_assert!(b.result.same_labelled_faces(&source));
        }
    }
}
