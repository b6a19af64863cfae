//! AHU canonical codes with decorations folded in.
//!
//! Each vertex contributes a fixed-width header (kind, label, raytype) followed
//! by the sorted codes of its children and a closing byte, so the byte string
//! decodes uniquely and sorting children is sound.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::report::Report;
use crate::tree::{Address, DecoratedTree, Kind, VertexRecord};

const OPEN: u8 = 0x02;
const CLOSE: u8 = 0x01;
const NONE: u8 = 0xFF;

fn header(r: &VertexRecord, out: &mut Vec<u8>) {
    out.push(OPEN);
    out.push(match r.kind {
        Kind::Tree => 0,
        Kind::Copy => 1,
        Kind::Ray => 2,
        Kind::Gadget => 3,
    });
    match r.label {
        Some(l) => {
            out.push(0);
            out.extend_from_slice(&l.to_be_bytes());
        }
        None => out.extend_from_slice(&[NONE; 5]),
    }
    out.push(r.raytype.unwrap_or(NONE));
}

/// Code of `t` rooted at `root`.
pub fn rooted_code(t: &DecoratedTree, root: usize) -> Vec<u8> {
    let n = t.len();
    let mut parent = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    parent[root] = root;
    let mut q = VecDeque::from([root]);
    while let Some(v) = q.pop_front() {
        order.push(v);
        for &u in t.neighbors(v) {
            if parent[u] == usize::MAX {
                parent[u] = v;
                q.push_back(u);
            }
        }
    }
    let mut codes: Vec<Vec<u8>> = vec![Vec::new(); n];
    let mut kids: Vec<Vec<Vec<u8>>> = vec![Vec::new(); n];
    for &v in order.iter().rev() {
        let mut c = Vec::new();
        header(t.vertex(v), &mut c);
        let mut ch = std::mem::take(&mut kids[v]);
        ch.sort_unstable();
        for k in ch {
            c.extend_from_slice(&k);
        }
        c.push(CLOSE);
        if v == root {
            codes[v] = c;
        } else {
            kids[parent[v]].push(c);
        }
    }
    std::mem::take(&mut codes[root])
}

/// The one or two centroids of `t`.
pub fn centroids(t: &DecoratedTree) -> Vec<usize> {
    let n = t.len();
    let mut parent = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    parent[0] = 0;
    let mut q = VecDeque::from([0]);
    while let Some(v) = q.pop_front() {
        order.push(v);
        for &u in t.neighbors(v) {
            if parent[u] == usize::MAX {
                parent[u] = v;
                q.push_back(u);
            }
        }
    }
    let mut size = vec![1usize; n];
    for &v in order.iter().rev().take(n - 1) {
        size[parent[v]] += size[v];
    }
    let mut out = Vec::new();
    for v in 0..n {
        let mut worst = n - size[v];
        for &u in t.neighbors(v) {
            if parent[u] == v {
                worst = worst.max(size[u]);
            }
        }
        if worst * 2 <= n {
            out.push(v);
        }
    }
    out
}

pub fn canonical_form(t: &DecoratedTree, rooted: bool) -> Result<Vec<u8>> {
    t.validate()?;
    if rooted {
        let r = t
            .root()
            .ok_or_else(|| Error::Structure("rooted canonical form needs a root".into()))?;
        let mut c = vec![b'R'];
        c.extend(rooted_code(t, r));
        return Ok(c);
    }
    let best = centroids(t)
        .into_iter()
        .map(|c| rooted_code(t, c))
        .min()
        .unwrap_or_default();
    let mut c = vec![b'U'];
    c.extend(best);
    Ok(c)
}

pub fn is_isomorphic(a: &DecoratedTree, b: &DecoratedTree, rooted: bool) -> Result<bool> {
    if a.len() != b.len() {
        a.validate()?;
        b.validate()?;
        return Ok(false);
    }
    Ok(canonical_form(a, rooted)? == canonical_form(b, rooted)?)
}

fn same_header(a: &VertexRecord, b: &VertexRecord) -> bool {
    a.kind == b.kind && a.label == b.label && a.raytype == b.raytype
}

/// Isomorphism by search over vertex bijections, pruned only by degree and
/// decoration. Independent of the canonical codes; meant for small trees.
pub fn brute_isomorphic(a: &DecoratedTree, b: &DecoratedTree, rooted: bool) -> bool {
    let n = a.len();
    if n != b.len() {
        return false;
    }
    if n == 0 {
        return true;
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if rooted {
        let (Some(ra), Some(rb)) = (a.root(), b.root()) else { return false };
        if a.degree(ra) != b.degree(rb) || !same_header(a.vertex(ra), b.vertex(rb)) {
            return false;
        }
        map[ra] = rb;
        used[rb] = true;
    }
    fn go(i: usize, a: &DecoratedTree, b: &DecoratedTree, map: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
        if i == a.len() {
            return true;
        }
        if map[i] != usize::MAX {
            return go(i + 1, a, b, map, used);
        }
        for y in 0..b.len() {
            if used[y] || a.degree(i) != b.degree(y) || !same_header(a.vertex(i), b.vertex(y)) {
                continue;
            }
            let ok = (0..a.len()).all(|x| map[x] == usize::MAX || a.has_edge(i, x) == b.has_edge(y, map[x]));
            if !ok {
                continue;
            }
            map[i] = y;
            used[y] = true;
            if go(i + 1, a, b, map, used) {
                return true;
            }
            map[i] = usize::MAX;
            used[y] = false;
        }
        false
    }
    go(0, a, b, &mut map, &mut used)
}

/// The tree with vertex `v` renamed `perm[v]`.
pub fn relabel(t: &DecoratedTree, perm: &[usize]) -> Result<DecoratedTree> {
    let n = t.len();
    let mut inv = vec![0; n];
    for (v, &p) in perm.iter().enumerate() {
        inv[p] = v;
    }
    let mut out = DecoratedTree::new();
    for &v in &inv {
        out.add_vertex(t.vertex(v).clone());
    }
    for (a, b) in t.edges() {
        out.add_edge(perm[a], perm[b])?;
    }
    out.set_root(t.root().map(|r| perm[r]));
    Ok(out)
}

/// One representative per isomorphism class of unlabelled free trees on
/// `n` vertices, found by running through every parent array with
/// parent(i) < i and keeping the brute-force-new ones.
pub fn free_trees(n: usize) -> Vec<DecoratedTree> {
    let mut reps: Vec<(Vec<usize>, DecoratedTree)> = Vec::new();
    if n == 0 {
        return Vec::new();
    }
    let mut parent = vec![0usize; n];
    loop {
        let edges: Vec<(usize, usize)> = (1..n).map(|i| (parent[i], i)).collect();
        let t = DecoratedTree::from_edges(n, &edges).expect("parent arrays give trees");
        let mut deg: Vec<usize> = (0..n).map(|v| t.degree(v)).collect();
        deg.sort_unstable();
        if !reps.iter().any(|(d, r)| *d == deg && brute_isomorphic(r, &t, false)) {
            reps.push((deg, t));
        }
        // next parent array in mixed radix, digit i ranging over 0..i
        let mut i = n;
        loop {
            i -= 1;
            if i == 0 {
                return reps.into_iter().map(|(_, t)| t).collect();
            }
            if parent[i] + 1 < i {
                parent[i] += 1;
                break;
            }
            parent[i] = 0;
        }
    }
}

/// A random tree on `n` vertices with random decorations drawn from the
/// kinds the constructions use.
pub fn random_decorated_tree(rng: &mut impl Rng, n: usize) -> DecoratedTree {
    let mut t = DecoratedTree::new();
    for i in 0..n {
        let rec = match rng.gen_range(0..4) {
            0 => VertexRecord { label: Some(0), ..VertexRecord::plain(Address::root()) },
            1 => VertexRecord { kind: Kind::Copy, label: Some(rng.gen_range(1..3)), ..VertexRecord::plain(Address::root()) },
            2 => VertexRecord { kind: Kind::Ray, label: Some(0), raytype: Some(rng.gen_range(0..2)), ..VertexRecord::plain(Address::root()) },
            _ => VertexRecord::gadget(Address::root()),
        };
        let v = t.add_vertex(rec);
        if i > 0 {
            t.add_edge(rng.gen_range(0..v), v).expect("fresh vertex");
        }
    }
    t
}

/// Canonical-form equality against brute-force isomorphism: all pairs of
/// free trees on up to `max_free` vertices plus a relabelled copy of each,
/// then `random` decorated trees on up to 12 vertices, each paired with a
/// relabelled copy and with a one-edge mutation.
pub fn iso_oracle_sweep(max_free: usize, random: usize, seed: u64) -> Result<Report> {
    let mut rep = Report::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut all = Vec::new();
    for n in 1..=max_free {
        let f = free_trees(n);
        rep.note(&format!("free-trees-{n}"), f.len());
        all.extend(f);
    }
    let forms: Vec<Vec<u8>> = all.iter().map(|t| canonical_form(t, false)).collect::<Result<_>>()?;
    let check = |rep: &mut Report, a: &DecoratedTree, b: &DecoratedTree, rooted: bool, fa: &[u8], fb: &[u8]| {
        let brute = brute_isomorphic(a, b, rooted);
        rep.expect(brute == (fa == fb), "iso-oracle", || vec![format!("{} vertices", a.len())], || {
            format!("brute {brute}, canonical {}", fa == fb)
        });
    };
    for i in 0..all.len() {
        for j in 0..all.len() {
            check(&mut rep, &all[i], &all[j], false, &forms[i], &forms[j]);
        }
        let mut perm: Vec<usize> = (0..all[i].len()).collect();
        perm.shuffle(&mut rng);
        let b = relabel(&all[i], &perm)?;
        check(&mut rep, &all[i], &b, false, &forms[i], &canonical_form(&b, false)?);
    }
    for _ in 0..random {
        let n = rng.gen_range(1..=12);
        let mut a = random_decorated_tree(&mut rng, n);
        let rooted = rng.gen_bool(0.5);
        if rooted {
            a.set_root(Some(rng.gen_range(0..n)));
        }
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        let b = relabel(&a, &perm)?;
        let fa = canonical_form(&a, rooted)?;
        check(&mut rep, &a, &b, rooted, &fa, &canonical_form(&b, rooted)?);
        if n >= 3 {
            // move the last vertex (a leaf) under another parent
            let mut edges: Vec<(usize, usize)> = a.edges().into_iter().filter(|&(x, y)| x != n - 1 && y != n - 1).collect();
            edges.push((rng.gen_range(0..n - 1), n - 1));
            let mut c = DecoratedTree::new();
            for v in 0..n {
                c.add_vertex(a.vertex(v).clone());
            }
            for (x, y) in edges {
                c.add_edge(x, y)?;
            }
            c.set_root(a.root());
            check(&mut rep, &a, &c, rooted, &fa, &canonical_form(&c, rooted)?);
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_vertices_agree() {
        let a = DecoratedTree::from_edges(1, &[]).unwrap();
        let b = DecoratedTree::from_edges(1, &[]).unwrap();
        assert!(is_isomorphic(&a, &b, false).unwrap());
    }

    #[test]
    fn path3_and_star_rooted_at_leaf_vs_centre() {
        let mut p = DecoratedTree::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let mut s = DecoratedTree::from_edges(3, &[(1, 0), (1, 2)]).unwrap();
        assert!(is_isomorphic(&p, &s, false).unwrap());
        p.set_root(Some(0));
        s.set_root(Some(1));
        assert!(!is_isomorphic(&p, &s, true).unwrap());
    }

    #[test]
    fn bicentral_path_has_two_centroids() {
        let p = DecoratedTree::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(centroids(&p), vec![1, 2]);
    }

    #[test]
    fn free_tree_counts() {
        let counts: Vec<usize> = (1..=8).map(|n| free_trees(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 1, 2, 3, 6, 11, 23]);
    }

    #[test]
    fn rooted_without_root_is_an_error() {
        let p = DecoratedTree::from_edges(2, &[(0, 1)]).unwrap();
        assert!(canonical_form(&p, true).is_err());
    }
}
