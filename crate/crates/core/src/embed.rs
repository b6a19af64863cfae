//! Tree embeddings: injective, edge-preserving, decoration-compatible maps.
//!
//! The search is Matula's subtree scheme: a guest vertex `g` (entered from
//! `gp`) fits a host vertex `h` (entered from `hp`) when the decorations agree
//! and the children of `g` admit a perfect matching into the children of `h`
//! under the same relation. Results are memoized per call on the directed
//! pair `(g, gp, h, hp)`.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tree::{DecoratedTree, VertexRecord};

const NIL: usize = usize::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FrontierPolicy {
    /// Frontier vertices behave as ordinary leaves.
    Closed,
    /// A host frontier vertex accepts any compatible guest subtree unverified.
    Open,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EmbeddingMap {
    pub pairs: Vec<Option<usize>>,
    pub rooted: bool,
}

impl EmbeddingMap {
    pub fn empty(n: usize, rooted: bool) -> Self {
        EmbeddingMap { pairs: vec![None; n], rooted }
    }

    pub fn identity(n: usize) -> Self {
        EmbeddingMap {
            pairs: (0..n).map(Some).collect(),
            rooted: true,
        }
    }

    pub fn get(&self, g: usize) -> Option<usize> {
        self.pairs.get(g).copied().flatten()
    }

    pub fn domain_len(&self) -> usize {
        self.pairs.iter().filter(|p| p.is_some()).count()
    }

    pub fn image(&self) -> HashSet<usize> {
        self.pairs.iter().flatten().copied().collect()
    }

    /// `after ∘ self`, defined where both are.
    pub fn then(&self, after: &EmbeddingMap) -> EmbeddingMap {
        EmbeddingMap {
            pairs: self.pairs.iter().map(|p| p.and_then(|h| after.get(h))).collect(),
            rooted: self.rooted && after.rooted,
        }
    }

    /// Check injectivity, edge preservation and decorations on the domain.
    pub fn validate(&self, guest: &DecoratedTree, host: &DecoratedTree) -> Result<()> {
        if self.pairs.len() != guest.len() {
            return Err(Error::Structure("map length differs from guest size".into()));
        }
        let mut seen = vec![false; host.len()];
        for (g, h) in self.pairs.iter().enumerate() {
            let Some(h) = *h else { continue };
            if h >= host.len() {
                return Err(Error::Structure(format!("{g} maps outside the host")));
            }
            if seen[h] {
                return Err(Error::Structure(format!("not injective at host vertex {h}")));
            }
            seen[h] = true;
            if !compatible(guest.vertex(g), host.vertex(h)) {
                return Err(Error::Structure(format!(
                    "decoration mismatch {} -> {}",
                    guest.vertex(g).address,
                    host.vertex(h).address
                )));
            }
        }
        for (a, b) in guest.edges() {
            if let (Some(x), Some(y)) = (self.get(a), self.get(b)) {
                if !host.has_edge(x, y) {
                    return Err(Error::Structure(format!(
                        "edge {}-{} not preserved",
                        guest.vertex(a).address,
                        guest.vertex(b).address
                    )));
                }
            }
        }
        if self.rooted {
            if let (Some(gr), Some(hr)) = (guest.root(), host.root()) {
                if self.get(gr) != Some(hr) {
                    return Err(Error::Structure("root not sent to root".into()));
                }
            }
        }
        Ok(())
    }
}

/// Kinds and labels must agree; a type-0 ray vertex may land on type 1.
pub fn compatible(g: &VertexRecord, h: &VertexRecord) -> bool {
    g.kind == h.kind
        && g.label == h.label
        && match (g.raytype, h.raytype) {
            (None, None) => true,
            (Some(a), Some(b)) => a <= b,
            _ => false,
        }
}

type Key = (usize, usize, usize, usize);

struct Matcher<'a> {
    guest: &'a DecoratedTree,
    host: &'a DecoratedTree,
    policy: FrontierPolicy,
    memo: HashMap<Key, Option<Vec<(usize, usize)>>>,
}

impl<'a> Matcher<'a> {
    fn new(guest: &'a DecoratedTree, host: &'a DecoratedTree, policy: FrontierPolicy) -> Self {
        Matcher {
            guest,
            host,
            policy,
            memo: HashMap::new(),
        }
    }

    fn can(&mut self, g: usize, gp: usize, h: usize, hp: usize) -> bool {
        let key = (g, gp, h, hp);
        if let Some(r) = self.memo.get(&key) {
            return r.is_some();
        }
        let r = self.solve(g, gp, h, hp);
        let ok = r.is_some();
        self.memo.insert(key, r);
        ok
    }

    fn solve(&mut self, g: usize, gp: usize, h: usize, hp: usize) -> Option<Vec<(usize, usize)>> {
        if !compatible(self.guest.vertex(g), self.host.vertex(h)) {
            return None;
        }
        if self.policy == FrontierPolicy::Open && self.host.vertex(h).frontier {
            return Some(Vec::new());
        }
        let gch: Vec<usize> = self.guest.neighbors(g).iter().copied().filter(|&x| x != gp).collect();
        let hch: Vec<usize> = self.host.neighbors(h).iter().copied().filter(|&x| x != hp).collect();
        if gch.len() > hch.len() {
            return None;
        }
        let mut adj = Vec::with_capacity(gch.len());
        for &gc in &gch {
            let opts: Vec<usize> = (0..hch.len()).filter(|&j| self.can(gc, g, hch[j], h)).collect();
            if opts.is_empty() {
                return None;
            }
            adj.push(opts);
        }
        let m = bipartite_matching(&adj, hch.len())?;
        Some(m.into_iter().enumerate().map(|(i, j)| (gch[i], hch[j])).collect())
    }

    fn fill(&self, g: usize, gp: usize, h: usize, hp: usize, map: &mut EmbeddingMap) {
        map.pairs[g] = Some(h);
        if let Some(Some(m)) = self.memo.get(&(g, gp, h, hp)) {
            for &(gc, hc) in m {
                self.fill(gc, g, hc, h, map);
            }
        }
    }
}

/// Perfect matching of the left side by augmenting paths; `adj[i]` lists the
/// right vertices admissible for left vertex `i`.
pub fn bipartite_matching(adj: &[Vec<usize>], right: usize) -> Option<Vec<usize>> {
    fn augment(i: usize, adj: &[Vec<usize>], seen: &mut [bool], owner: &mut [usize]) -> bool {
        for &j in &adj[i] {
            if seen[j] {
                continue;
            }
            seen[j] = true;
            if owner[j] == NIL || augment(owner[j], adj, seen, owner) {
                owner[j] = i;
                return true;
            }
        }
        false
    }
    let mut owner = vec![NIL; right];
    for i in 0..adj.len() {
        let mut seen = vec![false; right];
        if !augment(i, adj, &mut seen, &mut owner) {
            return None;
        }
    }
    let mut out = vec![NIL; adj.len()];
    for (j, &i) in owner.iter().enumerate() {
        if i != NIL {
            out[i] = j;
        }
    }
    Some(out)
}

/// Embedding with `g0` sent to `h0`.
pub fn find_embedding_anchored(
    guest: &DecoratedTree,
    g0: usize,
    host: &DecoratedTree,
    h0: usize,
    policy: FrontierPolicy,
) -> Option<EmbeddingMap> {
    let mut m = Matcher::new(guest, host, policy);
    if !m.can(g0, NIL, h0, NIL) {
        return None;
    }
    let mut map = EmbeddingMap::empty(guest.len(), false);
    m.fill(g0, NIL, h0, NIL, &mut map);
    Some(map)
}

pub fn find_embedding(
    guest: &DecoratedTree,
    host: &DecoratedTree,
    rooted: bool,
    policy: FrontierPolicy,
) -> Option<EmbeddingMap> {
    if guest.is_empty() {
        return Some(EmbeddingMap::empty(0, rooted));
    }
    if rooted {
        let (g0, h0) = (guest.root()?, host.root()?);
        let mut map = find_embedding_anchored(guest, g0, host, h0, policy)?;
        map.rooted = true;
        return Some(map);
    }
    let mut m = Matcher::new(guest, host, policy);
    for h0 in 0..host.len() {
        if m.can(0, NIL, h0, NIL) {
            let mut map = EmbeddingMap::empty(guest.len(), false);
            m.fill(0, NIL, h0, NIL, &mut map);
            return Some(map);
        }
    }
    None
}

/// Every closed-policy embedding, optionally anchored. Gadget leaves hanging
/// from a common vertex are interchangeable, so their images are taken in
/// increasing order: one representative per leaf permutation.
pub fn enumerate_embeddings(
    guest: &DecoratedTree,
    host: &DecoratedTree,
    anchor: Option<(usize, usize)>,
    limit: usize,
) -> Result<Vec<EmbeddingMap>> {
    let g0 = anchor.map_or(0, |a| a.0);
    let n = guest.len();
    let (order, parent, twin_prev) = bfs_twins(guest, g0);
    let mut m = Matcher::new(guest, host, FrontierPolicy::Closed);
    let mut out = Vec::new();
    let mut map = vec![None; n];
    let mut used = vec![false; host.len()];
    let starts: Vec<usize> = match anchor {
        Some((_, h0)) => vec![h0],
        None => (0..host.len()).collect(),
    };
    for h0 in starts {
        if !m.can(g0, NIL, h0, NIL) {
            continue;
        }
        map[g0] = Some(h0);
        used[h0] = true;
        extend(1, &order, &parent, &twin_prev, &mut m, &mut map, &mut used, &mut out, limit)?;
        used[h0] = false;
        map[g0] = None;
    }
    for e in &mut out {
        e.rooted = anchor.is_some();
    }
    Ok(out)
}

/// BFS order from `g0`, BFS parents, and for each gadget leaf the twin leaf
/// visited just before it under the same hub (or `usize::MAX`).
pub(crate) fn bfs_twins(guest: &DecoratedTree, g0: usize) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
    let n = guest.len();
    let mut parent = vec![NIL; n];
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    seen[g0] = true;
    let mut q = VecDeque::from([g0]);
    while let Some(v) = q.pop_front() {
        order.push(v);
        for &u in guest.neighbors(v) {
            if !seen[u] {
                seen[u] = true;
                parent[u] = v;
                q.push_back(u);
            }
        }
    }
    let mut twin_prev = vec![NIL; n];
    for (i, &v) in order.iter().enumerate().skip(1) {
        if !is_twin_leaf(guest, v) {
            continue;
        }
        let w = order[i - 1];
        if parent[w] == parent[v] && is_twin_leaf(guest, w) && same_decoration(guest.vertex(w), guest.vertex(v)) {
            twin_prev[v] = w;
        }
    }
    (order, parent, twin_prev)
}

fn same_decoration(a: &VertexRecord, b: &VertexRecord) -> bool {
    compatible(a, b) && compatible(b, a)
}

fn is_twin_leaf(t: &DecoratedTree, v: usize) -> bool {
    t.degree(v) == 1 && t.vertex(v).kind == crate::tree::Kind::Gadget
}

#[allow(clippy::too_many_arguments)]
fn extend(
    i: usize,
    order: &[usize],
    parent: &[usize],
    twin_prev: &[usize],
    m: &mut Matcher<'_>,
    map: &mut Vec<Option<usize>>,
    used: &mut Vec<bool>,
    out: &mut Vec<EmbeddingMap>,
    limit: usize,
) -> Result<()> {
    if i == order.len() {
        if out.len() >= limit {
            return Err(Error::Parameter(format!("more than {limit} embeddings")));
        }
        out.push(EmbeddingMap {
            pairs: map.clone(),
            rooted: false,
        });
        return Ok(());
    }
    let g = order[i];
    let p = parent[g];
    let hp = map[p].unwrap_or(NIL);
    let hpp = if parent[p] == NIL { NIL } else { map[parent[p]].unwrap_or(NIL) };
    let floor = match twin_prev[g] {
        NIL => None,
        w => map[w],
    };
    let cands: Vec<usize> = m.host.neighbors(hp).to_vec();
    for h in cands {
        if used[h] || h == hpp || floor.is_some_and(|f| h <= f) {
            continue;
        }
        if !m.can(g, p, h, hp) {
            continue;
        }
        map[g] = Some(h);
        used[h] = true;
        extend(i + 1, order, parent, twin_prev, m, map, used, out, limit)?;
        used[h] = false;
        map[g] = None;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> DecoratedTree {
        let e: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        DecoratedTree::from_edges(n, &e).unwrap()
    }

    #[test]
    fn edge_into_path() {
        let g = path(2);
        let h = path(4);
        let m = find_embedding(&g, &h, false, FrontierPolicy::Closed).unwrap();
        m.validate(&g, &h).unwrap();
    }

    #[test]
    fn star_does_not_fit_a_path() {
        let star = DecoratedTree::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert!(find_embedding(&star, &path(11), false, FrontierPolicy::Closed).is_none());
    }

    #[test]
    fn path_self_embeddings_are_identity_and_reversal() {
        let p = path(5);
        let all = enumerate_embeddings(&p, &p, None, 100).unwrap();
        assert_eq!(all.len(), 2);
    }

    #[test]
    fn matching_finds_augmenting_path() {
        let adj = vec![vec![0, 1], vec![0]];
        assert_eq!(bipartite_matching(&adj, 2), Some(vec![1, 0]));
        assert_eq!(bipartite_matching(&[vec![0], vec![0]], 2), None);
    }
}
