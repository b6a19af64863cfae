use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use treesib::canon::{brute_isomorphic, canonical_form, random_decorated_tree, relabel};
use treesib::construct::{build_t, Registry};
use treesib::embed::{find_embedding, FrontierPolicy};
use treesib::gadget::GadgetSpec;
use treesib::harness::RunConfig;
use treesib::poset::order_gadget;
use treesib::ray::{gadget_shift_embeds, shift_valid};
use treesib::rtree::{build_rball, lab_check, verify_homogeneity};
use treesib::similarity::{build_similarity, fingerprint, Fingerprint};
use treesib::spine::{build_spine, Truncation};
use treesib::tree::{GadgetPart, GadgetRole};
use treesib::{Address, DecoratedTree, Move};

fn tree_from(n: usize, seed: u64) -> DecoratedTree {
    random_decorated_tree(&mut ChaCha8Rng::seed_from_u64(seed), n)
}

fn plain_tree(parents: &[usize]) -> DecoratedTree {
    let edges: Vec<(usize, usize)> = parents.iter().enumerate().map(|(i, &p)| (p % (i + 1), i + 1)).collect();
    DecoratedTree::from_edges(parents.len() + 1, &edges).unwrap()
}

fn embeds_somewhere(g: &DecoratedTree, h: &DecoratedTree) -> bool {
    fn go(i: usize, order: &[(usize, usize)], h: &DecoratedTree, img: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
        if i == order.len() {
            return true;
        }
        let (v, p) = order[i];
        for &c in h.neighbors(img[p]) {
            if !used[c] {
                used[c] = true;
                img[v] = c;
                if go(i + 1, order, h, img, used) {
                    return true;
                }
                used[c] = false;
            }
        }
        false
    }
    // plain_tree parents precede children, so child order is a BFS-safe order
    let mut order: Vec<(usize, usize)> = g.edges().into_iter().map(|(a, b)| (a.max(b), a.min(b))).collect();
    order.sort();
    (0..h.len()).any(|x| {
        let mut img = vec![0; g.len()];
        let mut used = vec![false; h.len()];
        img[0] = x;
        used[x] = true;
        go(0, &order, h, &mut img, &mut used)
    })
}

fn arb_move() -> impl Strategy<Value = Move> {
    let role = prop_oneof![Just(GadgetRole::Label), Just(GadgetRole::Type), Just(GadgetRole::Spacer)];
    let part = prop_oneof![(0u32..20).prop_map(GadgetPart::Path), Just(GadgetPart::Hub), (0u32..6).prop_map(GadgetPart::Leaf)];
    prop_oneof![
        prop_oneof![Just(1i8), Just(-1i8)].prop_map(Move::Ray),
        (-50i32..50).prop_map(Move::Copy),
        (role, part).prop_map(|(r, p)| Move::Gadget(r, p)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_form_ignores_vertex_names(n in 1usize..40, seed: u64, rooted: bool) {
        let mut t = tree_from(n, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
        if rooted {
            t.set_root(Some(seed as usize % n));
        }
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        let u = relabel(&t, &perm).unwrap();
        prop_assert_eq!(canonical_form(&t, rooted).unwrap(), canonical_form(&u, rooted).unwrap());
    }

    #[test]
    fn canonical_equality_is_isomorphism(n in 1usize..9, s1: u64, s2: u64, rooted: bool) {
        let mut a = tree_from(n, s1);
        let mut b = tree_from(n, s2);
        if rooted {
            a.set_root(Some(0));
            b.set_root(Some(0));
        }
        let canon = canonical_form(&a, rooted).unwrap() == canonical_form(&b, rooted).unwrap();
        prop_assert_eq!(canon, brute_isomorphic(&a, &b, rooted));
    }

    #[test]
    fn address_text_round_trip(moves in prop::collection::vec(arb_move(), 0..12)) {
        let a = Address(moves);
        prop_assert_eq!(a.to_string().parse::<Address>().unwrap(), a);
    }

    #[test]
    fn tree_json_round_trip(n in 1usize..30, seed: u64) {
        let t = tree_from(n, seed);
        let back = DecoratedTree::from_json(&t.to_json().unwrap()).unwrap();
        prop_assert_eq!(back, t);
    }

    #[test]
    fn engine_embeddings_are_valid_and_complete(
        g in prop::collection::vec(0usize..100, 0..5),
        h in prop::collection::vec(0usize..100, 0..8),
    ) {
        let (g, h) = (plain_tree(&g), plain_tree(&h));
        let found = find_embedding(&g, &h, false, FrontierPolicy::Closed);
        if let Some(m) = &found {
            m.validate(&g, &h).unwrap();
        }
        prop_assert_eq!(found.is_some(), embeds_somewhere(&g, &h));
    }

    #[test]
    fn gadget_shift_matches_bit_rule(s in 0u32..3, s2 in 0u32..3, t in -6i64..7) {
        let h = 5;
        prop_assert_eq!(gadget_shift_embeds(s, s2, t, h).unwrap().is_some(), shift_valid(s, s2, t, h));
    }

    #[test]
    fn gadget_fences_are_acyclic_on_edges(n in 1u32..8, m in 1u32..5) {
        let o = order_gadget(GadgetSpec::plain(2 * n, m)).unwrap();
        o.closure().unwrap();
        prop_assert!(o.stray_covers().is_empty());
        prop_assert_eq!(o.covers.len(), o.base.edge_count());
    }

    #[test]
    fn run_config_hash_is_a_function_of_the_config(seed: u64, stage in 0u32..3) {
        let a = RunConfig { seed, ..RunConfig::for_stage(stage) };
        prop_assert_eq!(a.hash(), a.clone().hash());
        prop_assert_ne!(a.hash(), RunConfig { seed: seed.wrapping_add(1), ..a.clone() }.hash());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn r_balls_reconstruct_labels_and_are_homogeneous(radius in 2usize..8) {
        let ball = build_rball(radius, radius as u32, false).unwrap();
        prop_assert!(lab_check(&ball).passed());
        prop_assert!(verify_homogeneity(&ball, 2).unwrap().passed());
    }

    #[test]
    fn fingerprints_round_trip_and_self_similarity_is_identity(i in 0usize..1000, j in 0usize..1000) {
        let sb = build_spine(1, Truncation::for_stage(1, 7)).unwrap();
        let amal: Vec<usize> = sb.interior_tree_vertices().into_iter().filter(|&w| sb.is_amalgamated(w)).collect();
        let (u, v) = (amal[i % amal.len()], amal[j % amal.len()]);
        let f = fingerprint(&sb, u, v).unwrap();
        prop_assert_eq!(f.to_string().parse::<Fingerprint>().unwrap(), f);
        for (a, b) in build_similarity(&sb, u, u).unwrap().domain() {
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn t_balls_are_valid_trees(s in 0u32..3, k in 0u32..2) {
        let tb = build_t(s, k, Truncation::for_stage(k, 2 * (2 * k as usize + 1) + 1), &Registry::frozen()).unwrap();
        tb.tree.validate().unwrap();
        prop_assert_eq!(tb.tree.edge_count() + 1, tb.tree.len());
    }
}
