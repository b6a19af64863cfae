//! Library results checked against independent computations written here.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use treesib::canon::{canonical_form, is_isomorphic, random_decorated_tree, relabel};
use treesib::construct::{build_t, generate_registry, Registry};
use treesib::embed::{find_embedding, FrontierPolicy};
use treesib::gadget::{build_pk, GadgetSpec};
use treesib::harness::{export, export_text, import_tree, Format, RunConfig};
use treesib::ray::tp;
use treesib::rtree::{build_rball, colour, sign, spin, RBall, SignContext};
use treesib::similarity::{build_similarity, fingerprint, translation, verify_embfinite};
use treesib::spine::{build_spine, Truncation};
use treesib::{Address, DecoratedTree, Move};

/// Rooted embedding by trying every injective neighbour choice in BFS order.
fn brute_rooted_embeds(g: &DecoratedTree, h: &DecoratedTree) -> bool {
    let (gr, hr) = (g.root().unwrap(), h.root().unwrap());
    let mut order = vec![gr];
    let mut parent = vec![usize::MAX; g.len()];
    let mut seen = vec![false; g.len()];
    seen[gr] = true;
    let mut i = 0;
    while i < order.len() {
        for &n in g.neighbors(order[i]) {
            if !seen[n] {
                seen[n] = true;
                parent[n] = order[i];
                order.push(n);
            }
        }
        i += 1;
    }
    fn go(i: usize, order: &[usize], parent: &[usize], h: &DecoratedTree, img: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
        if i == order.len() {
            return true;
        }
        let v = order[i];
        for &c in h.neighbors(img[parent[v]]) {
            if used[c] {
                continue;
            }
            used[c] = true;
            img[v] = c;
            if go(i + 1, order, parent, h, img, used) {
                return true;
            }
            used[c] = false;
        }
        false
    }
    let mut img = vec![usize::MAX; g.len()];
    let mut used = vec![false; h.len()];
    img[gr] = hr;
    used[hr] = true;
    go(1, &order, &parent, h, &mut img, &mut used)
}

#[test]
fn gadget_engine_matches_brute_force() {
    let specs: Vec<GadgetSpec> = (1..=12).flat_map(|n| (1..=4).map(move |m| GadgetSpec::plain(n, m))).collect();
    let trees: Vec<DecoratedTree> = specs.iter().map(|&s| build_pk(s).unwrap()).collect();
    for (a, ta) in specs.iter().zip(&trees) {
        for (b, tb) in specs.iter().zip(&trees) {
            let engine = find_embedding(ta, tb, true, FrontierPolicy::Closed).is_some();
            assert_eq!(engine, brute_rooted_embeds(ta, tb), "{a:?} into {b:?}");
        }
    }
}

#[test]
fn pk42_against_pk22_and_pk23() {
    let pk = |n, m| build_pk(GadgetSpec::plain(n, m)).unwrap();
    for other in [pk(2, 2), pk(2, 3)] {
        assert!(!brute_rooted_embeds(&pk(4, 2), &other));
        assert!(!brute_rooted_embeds(&other, &pk(4, 2)));
        assert!(find_embedding(&pk(4, 2), &other, true, FrontierPolicy::Closed).is_none());
        assert!(find_embedding(&other, &pk(4, 2), true, FrontierPolicy::Closed).is_none());
    }
}

fn lab(ball: &RBall, v: usize) -> u32 {
    ball.tree.vertex(v).label.unwrap()
}

/// Core path by BFS parents from `from`.
fn core_path(ball: &RBall, from: usize, to: usize) -> Vec<usize> {
    let mut parent = vec![usize::MAX; ball.core];
    let mut q = VecDeque::from([from]);
    parent[from] = from;
    while let Some(x) = q.pop_front() {
        for &n in ball.tree.neighbors(x) {
            if n < ball.core && parent[n] == usize::MAX {
                parent[n] = x;
                q.push_back(n);
            }
        }
    }
    let mut p = vec![to];
    while *p.last().unwrap() != from {
        p.push(parent[*p.last().unwrap()]);
    }
    p.reverse();
    p
}

#[test]
fn labels_match_multi_source_bfs() {
    let ball = build_rball(8, 8, false).unwrap();
    let mut dist = vec![usize::MAX; ball.core];
    let mut q = VecDeque::new();
    for (v, d) in dist.iter_mut().enumerate() {
        let core_deg = ball.tree.neighbors(v).iter().filter(|&&n| n < ball.core).count();
        if core_deg == 2 && !ball.tree.vertex(v).frontier {
            *d = 0;
            q.push_back(v);
        }
    }
    while let Some(x) = q.pop_front() {
        for &n in ball.tree.neighbors(x) {
            if n < ball.core && dist[n] == usize::MAX {
                dist[n] = dist[x] + 1;
                q.push_back(n);
            }
        }
    }
    let mut checked = 0;
    for (v, &d) in dist.iter().enumerate() {
        if ball.is_label_complete(v) {
            assert_eq!(d, lab(&ball, v) as usize, "{}", ball.tree.vertex(v).address);
            checked += 1;
        }
    }
    assert!(checked > 50);
}

#[test]
fn colour_matches_right_to_left_scan() {
    let ball = build_rball(6, 6, false).unwrap();
    let tv = ball.interior_tree_vertices();
    for &v in &tv {
        for &u in &tv {
            let p = core_path(&ball, v, u);
            let mut want = 0;
            for i in (1..p.len()).rev() {
                if lab(&ball, p[i]) == lab(&ball, p[i - 1]) {
                    want = lab(&ball, p[i]);
                    break;
                }
            }
            assert_eq!(colour(&ball, v, u).unwrap(), want);
        }
    }
}

/// sign and spin straight from their definition, given the arbitrary
/// orientation at the centre.
struct SpinOracle<'a> {
    ball: &'a RBall,
    at_r: Vec<(usize, i8)>,
}

impl SpinOracle<'_> {
    fn sign(&self, v: usize, u: usize) -> i8 {
        let r = self.ball.centre;
        let pu = core_path(self.ball, v, u);
        if v == r {
            return self.at_r.iter().find(|(n, _)| *n == pu[1]).unwrap().1;
        }
        let pr = core_path(self.ball, v, r);
        let s = self.spin(r, v);
        if pu[1] == pr[1] {
            s
        } else {
            -s
        }
    }

    fn spin(&self, v: usize, u: usize) -> i8 {
        let p = core_path(self.ball, v, u);
        let cp = p.windows(2).filter(|w| lab(self.ball, w[0]) == lab(self.ball, w[1])).count();
        let tv = p.iter().filter(|&&x| lab(self.ball, x) == 0).count();
        self.sign(v, u) * if (cp + tv) % 2 == 0 { 1 } else { -1 }
    }
}

#[test]
fn sign_spin_and_lemma_clauses_from_the_definition() {
    let ball = build_rball(6, 6, false).unwrap();
    let r = ball.centre;
    let o = SpinOracle { ball: &ball, at_r: SignContext::canonical(&ball).orientation };
    let tv = ball.interior_tree_vertices();
    for &v in &tv {
        let ctx = SignContext::at(&ball, v).unwrap();
        for &u in tv.iter().filter(|&&u| u != v) {
            assert_eq!(sign(&ball, &ctx, u).unwrap(), o.sign(v, u));
            assert_eq!(spin(&ball, &ctx, u).unwrap(), o.spin(v, u));
        }
        if v == r {
            continue;
        }
        assert_eq!(o.spin(v, r), o.sign(r, v), "clause 1");
        let prv = core_path(&ball, r, v);
        for &w in tv.iter().filter(|&&w| w != r && w != v) {
            if prv.contains(&w) {
                assert_eq!(o.spin(v, w), -o.spin(r, w), "clause 3");
            } else {
                assert_eq!(o.spin(v, w), o.spin(r, w), "clause 2");
            }
        }
    }
}

#[test]
fn random_relabelled_thirty_vertex_trees_are_isomorphic() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let t = random_decorated_tree(&mut rng, 30);
        let mut perm: Vec<usize> = (0..30).collect();
        perm.shuffle(&mut rng);
        assert!(is_isomorphic(&t, &relabel(&t, &perm).unwrap(), false).unwrap());
    }
}

fn tp_oracle(s: u32, j: i64) -> u8 {
    if s == 0 {
        return u8::from(j > 0);
    }
    if j < 0 || (1..=s as i64).contains(&j) {
        0
    } else {
        1
    }
}

#[test]
fn type_assignments() {
    for s in 0..5 {
        for j in -20..=20 {
            assert_eq!(tp(s, j), tp_oracle(s, j), "tp_{s}({j})");
        }
    }
}

#[test]
fn translation_uncovers_one_leaf_per_step() {
    let reg = Registry::frozen();
    let g = build_t(0, 0, Truncation::for_stage(0, 7), &reg).unwrap();
    let h = build_t(0, 0, Truncation::for_stage(0, 10), &reg).unwrap();
    for t in 1..=3i64 {
        let rep = verify_embfinite(&g, &h, &translation(&g, &h, t).unwrap()).unwrap();
        assert!(rep.passed(), "{:?}", rep.violations);
        let note = |k: &str| rep.notes.iter().find(|(n, _)| n == k).unwrap().1.parse::<i64>().unwrap();
        let reach = note("reach");
        // host v_j is type 1 over a type-0 preimage v_{j-t}
        let want = (t - reach..=t + reach).filter(|&j| tp_oracle(0, j) == 1 && tp_oracle(0, j - t) == 0).count() as i64;
        assert_eq!(note("uncovered"), want);
        assert_eq!(want, t);
    }
}

fn shifted(a: &Address, t: i64) -> Address {
    let mut i = 0i64;
    let mut rest = &a.0[..];
    while let Some(Move::Ray(d)) = rest.first() {
        i += i64::from(*d);
        rest = &rest[1..];
    }
    let j = i + t;
    let mut out: Vec<Move> = (0..j.abs()).map(|_| Move::Ray(j.signum() as i8)).collect();
    out.extend_from_slice(rest);
    Address(out)
}

#[test]
fn similarity_along_the_central_ray_is_the_shift() {
    let sb = build_spine(0, Truncation::for_stage(0, 9)).unwrap();
    for t in 1..=2i64 {
        let zt = sb.lookup(&Address(vec![Move::Ray(1); t as usize])).unwrap();
        let phi = build_similarity(&sb, sb.centre, zt).unwrap();
        let mut n = 0;
        for (w, x) in phi.domain() {
            assert_eq!(sb.tree.vertex(x).address, shifted(&sb.tree.vertex(w).address, t));
            n += 1;
        }
        assert!(n > 100);
    }
}

#[test]
fn similarities_preserve_fingerprints() {
    let sb = build_spine(1, Truncation::for_stage(1, 9)).unwrap();
    let amal: Vec<usize> = (0..sb.tree.len()).filter(|&v| sb.is_amalgamated(v) && sb.ball_is_interior(v, 3)).collect();
    let mut compared = 0;
    for &u in amal.iter().take(4) {
        for &v in amal.iter().rev().take(3) {
            let phi = build_similarity(&sb, u, v).unwrap();
            for (w, x) in phi.domain() {
                if let (Ok(a), Ok(b)) = (fingerprint(&sb, u, w), fingerprint(&sb, v, x)) {
                    assert_eq!(a, b, "{} -> {}", sb.addr(w), sb.addr(x));
                    compared += 1;
                }
            }
        }
    }
    assert!(compared > 1000);
}

#[test]
fn registry_regenerates_to_the_pinned_file() {
    assert_eq!(generate_registry(3, 1, 1, 4).unwrap(), Registry::frozen());
}

#[test]
fn json_export_round_trips() {
    let dir = std::env::temp_dir().join(format!("treesib-export-{}", std::process::id()));
    let cfg = RunConfig { out: dir.clone(), ..RunConfig::for_stage(0) };
    for obj in ["t:2", "spine", "ray:1", "poset-gadget:4:2"] {
        assert_eq!(export_text(&cfg, obj, Format::Json).unwrap(), export_text(&cfg, obj, Format::Json).unwrap());
    }
    let t0 = build_t(0, 0, cfg.truncation(), &Registry::frozen()).unwrap();
    let back = import_tree(&export(&cfg, "t:0", Format::Json).unwrap()).unwrap();
    assert_eq!(canonical_form(&back, false).unwrap(), canonical_form(&t0.tree, false).unwrap());
    let dot = export_text(&cfg, "t:0", Format::Dot).unwrap();
    assert!(dot.starts_with(&format!("// config {}", cfg.hash())));
    assert!(dot.lines().nth(1).unwrap().starts_with("digraph"));
    std::fs::remove_dir_all(dir).ok();
}
