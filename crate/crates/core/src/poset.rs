//! Fence orders on gadgets, double rays and R, and the comparison between
//! graph embeddings and order embeddings.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::embed::{bfs_twins, compatible, enumerate_embeddings, EmbeddingMap};
use crate::error::{Error, Result};
use crate::gadget::{build_pk, GadgetSpec};
use crate::ray::{build_ray, RayWindow, Variant};
use crate::report::Report;
use crate::rtree::{build_rball, local_sign, CopyFrame, RBall, SignContext};
use crate::tree::{DecoratedTree, GadgetPart, Kind, Move};

const NIL: usize = usize::MAX;

/// A tree with an order on its vertices, given by covering pairs `(a, b)`
/// meaning a < b.
#[derive(Clone, Debug)]
pub struct PosetOverlay {
    pub base: DecoratedTree,
    pub covers: Vec<(usize, usize)>,
}

#[derive(Clone, Debug)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn unset(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }
    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }
    fn union_with(&mut self, o: &Bits) {
        for (a, b) in self.0.iter_mut().zip(&o.0) {
            *a |= b;
        }
    }
    /// self ∩ mask == want
    fn meets_exactly(&self, mask: &Bits, want: &Bits) -> bool {
        self.0.iter().zip(&mask.0).zip(&want.0).all(|((a, m), w)| a & m == *w)
    }
    fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(i, &w)| (0..64).filter(move |b| w >> b & 1 == 1).map(move |b| i * 64 + b))
    }
}

/// Strict upper and lower sets of every vertex.
#[derive(Clone, Debug)]
pub struct Closure {
    up: Vec<Bits>,
    down: Vec<Bits>,
}

impl Closure {
    pub fn less(&self, a: usize, b: usize) -> bool {
        self.up[a].get(b)
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.less(a, b) || self.less(b, a)
    }
}

impl PosetOverlay {
    /// Transitive closure; a cycle among the covers is a structure error.
    pub fn closure(&self) -> Result<Closure> {
        let n = self.base.len();
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut indeg = vec![0usize; n];
        for &(a, b) in &self.covers {
            out[a].push(b);
            indeg[b] += 1;
        }
        let mut topo: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut i = 0;
        while i < topo.len() {
            for &b in &out[topo[i]] {
                indeg[b] -= 1;
                if indeg[b] == 0 {
                    topo.push(b);
                }
            }
            i += 1;
        }
        if topo.len() != n {
            return Err(Error::Structure("order relation has a cycle".into()));
        }
        let mut up = vec![Bits::new(n); n];
        for &a in topo.iter().rev() {
            let mut s = Bits::new(n);
            for &b in &out[a] {
                s.set(b);
                s.union_with(&up[b]);
            }
            up[a] = s;
        }
        let mut down = vec![Bits::new(n); n];
        for (a, u) in up.iter().enumerate() {
            for b in u.ones() {
                down[b].set(a);
            }
        }
        Ok(Closure { up, down })
    }

    /// Covers that are not tree edges.
    pub fn stray_covers(&self) -> Vec<(usize, usize)> {
        self.covers.iter().copied().filter(|&(a, b)| !self.base.has_edge(a, b)).collect()
    }

    /// The same overlay with cover `i` reversed.
    pub fn flipped(&self, i: usize) -> Self {
        let mut o = self.clone();
        let (a, b) = o.covers[i];
        o.covers[i] = (b, a);
        o
    }

    /// Covers as arcs from the smaller to the larger element.
    pub fn to_dot(&self, name: &str) -> String {
        let mut s = format!("digraph \"{name}\" {{\n  rankdir=BT;\n");
        for v in 0..self.base.len() {
            let _ = writeln!(s, "  {v} [label=\"{}\"];", self.base.vertex(v).address);
        }
        for &(a, b) in &self.covers {
            let _ = writeln!(s, "  {a} -> {b};");
        }
        s.push_str("}\n");
        s
    }
}

fn gpart(t: &DecoratedTree, v: usize) -> Option<GadgetPart> {
    if t.vertex(v).kind != Kind::Gadget {
        return None;
    }
    match t.vertex(v).address.0.last() {
        Some(Move::Gadget(_, p)) => Some(*p),
        _ => None,
    }
}

/// Orient every edge: gadget edges by the fence (even path positions are
/// minima, the hub sits above u_{2n} and below the leaves), core edges by
/// `core_rule`, which returns the pair as (smaller, larger).
fn overlay_with(t: &DecoratedTree, mut core_rule: impl FnMut(usize, usize) -> Result<(usize, usize)>) -> Result<PosetOverlay> {
    let mut covers = Vec::with_capacity(t.edge_count());
    for (a, b) in t.edges() {
        let pa = gpart(t, a);
        let pb = gpart(t, b);
        let idx = |p: Option<GadgetPart>| match p {
            None => Some(0),
            Some(GadgetPart::Path(i)) => Some(i),
            _ => None,
        };
        let c = match (pa, pb) {
            (None, None) => core_rule(a, b)?,
            (Some(GadgetPart::Hub), Some(GadgetPart::Leaf(_))) => (a, b),
            (Some(GadgetPart::Leaf(_)), Some(GadgetPart::Hub)) => (b, a),
            (Some(GadgetPart::Hub), p) | (p, Some(GadgetPart::Hub)) => {
                let n = idx(p).ok_or_else(|| Error::Structure("hub joined to a non-path vertex".into()))?;
                if n % 2 == 1 {
                    return Err(Error::Parameter(format!("fence needs an even path, got length {n}")));
                }
                if pa == Some(GadgetPart::Hub) { (b, a) } else { (a, b) }
            }
            _ => {
                let (i, j) = (idx(pa), idx(pb));
                match (i, j) {
                    (Some(i), Some(j)) if i.abs_diff(j) == 1 => {
                        if i % 2 == 0 { (a, b) } else { (b, a) }
                    }
                    _ => return Err(Error::Structure(format!("unexpected gadget edge {a}-{b}"))),
                }
            }
        };
        covers.push(c);
    }
    Ok(PosetOverlay { base: t.clone(), covers })
}

/// Fence order on a standalone PK(2n, m).
pub fn order_gadget(spec: GadgetSpec) -> Result<PosetOverlay> {
    if spec.pathlen % 2 == 1 {
        return Err(Error::Parameter(format!("PK({}, {}) has odd path length", spec.pathlen, spec.fan)));
    }
    overlay_with(&build_pk(spec)?, |a, b| Err(Error::Structure(format!("core edge {a}-{b} in a gadget"))))
}

fn ray_index(t: &DecoratedTree, v: usize) -> i64 {
    t.vertex(v).address.0.iter().map(|m| if let Move::Ray(d) = m { i64::from(*d) } else { 0 }).sum()
}

/// A D' window: the ray as a fence with even indices below their
/// neighbours, plus the gadget fences.
pub fn order_ray(w: &RayWindow) -> Result<PosetOverlay> {
    overlay_with(&w.tree, |a, b| {
        let i = ray_index(&w.tree, a);
        Ok(if i.rem_euclid(2) == 0 { (a, b) } else { (b, a) })
    })
}

/// Tree vertex reached from `u` by strictly decreasing labels.
fn nearest_tree_vertex(ball: &RBall, u: usize) -> Result<usize> {
    let mut cur = u;
    while ball.label(cur) > 0 {
        let l = ball.label(cur);
        cur = ball
            .tree
            .neighbors(cur)
            .iter()
            .copied()
            .find(|&y| y < ball.core && ball.label(y) + 1 == l)
            .ok_or_else(|| Error::Truncation(format!("decreasing path from {} leaves the ball", ball.tree.vertex(u).address)))?;
    }
    Ok(cur)
}

/// The order on R: an edge from label n to n+1 points up iff the nearest
/// tree vertex sees it with sign +1; a consecutive pair u v has u above v
/// iff sign_w(u) = +1 for w nearest to u. Both nearest-tree-vertex choices
/// are evaluated and must agree. `ctx` fixes the orientation at the centre;
/// flipping it flips every sign. Nearest tree vertices are looked up in a
/// ball wider by `maxlabel`, so every edge of `ball` is oriented.
pub fn order_r(ball: &RBall, ctx: &SignContext) -> Result<PosetOverlay> {
    let c = ball.centre;
    if ctx.base != c {
        return Err(Error::Parameter("sign context must sit at the centre".into()));
    }
    let &(n0, s0) = ctx.orientation.first().ok_or_else(|| Error::Structure("empty sign context".into()))?;
    let f = s0 * local_sign(ball, c, n0)?;
    let wide = build_rball(ball.radius + ball.maxlabel as usize, ball.maxlabel, false)?;
    let idx = wide.tree.address_index();
    let lift = |v: usize| -> Result<usize> {
        idx.get(&ball.tree.vertex(v).address)
            .copied()
            .ok_or_else(|| Error::Structure(format!("{} missing from the wide ball", ball.tree.vertex(v).address)))
    };
    let sign = |w: usize, u: usize| -> Result<i8> { Ok(f * local_sign(&wide, w, u)?) };
    overlay_with(&ball.tree, |a, b| {
        let (wa, wb) = (lift(a)?, lift(b)?);
        let (la, lb) = (ball.label(a), ball.label(b));
        if la != lb {
            let (u, v, wv) = if la < lb { (a, b, wb) } else { (b, a, wa) };
            let w = nearest_tree_vertex(&wide, lift(u)?)?;
            return Ok(if sign(w, wv)? > 0 { (u, v) } else { (v, u) });
        }
        let w1 = nearest_tree_vertex(&wide, wa)?;
        let w2 = nearest_tree_vertex(&wide, wb)?;
        let by_a = if sign(w1, wa)? > 0 { (b, a) } else { (a, b) };
        let by_b = if sign(w2, wb)? > 0 { (a, b) } else { (b, a) };
        if by_a != by_b {
            return Err(Error::Structure(format!(
                "nearest-tree-vertex choices disagree on {}-{}",
                ball.tree.vertex(a).address,
                ball.tree.vertex(b).address
            )));
        }
        Ok(by_a)
    })
}

/// Injective maps that preserve and reflect the order and respect vertex
/// decorations. Twin gadget leaves take increasing images, matching the
/// quotient used by the graph enumerator.
pub fn enumerate_order_embeddings(
    guest: &PosetOverlay,
    host: &PosetOverlay,
    rooted: bool,
    limit: usize,
) -> Result<Vec<EmbeddingMap>> {
    let (gc, hc) = (guest.closure()?, host.closure()?);
    let (gt, ht) = (&guest.base, &host.base);
    let g0 = if rooted { gt.root().ok_or_else(|| Error::Parameter("guest has no root".into()))? } else { 0 };
    let (order, _, twin_prev) = bfs_twins(gt, g0);
    let starts: Vec<usize> = if rooted {
        vec![ht.root().ok_or_else(|| Error::Parameter("host has no root".into()))?]
    } else {
        (0..ht.len()).collect()
    };
    let mut st = Search {
        gt,
        ht,
        gc: &gc,
        hc: &hc,
        order: &order,
        twin_prev: &twin_prev,
        map: vec![None; gt.len()],
        placed: Bits::new(gt.len()),
        img: Bits::new(ht.len()),
        out: Vec::new(),
        limit,
        stop_at_first: false,
    };
    st.run(&starts, rooted)?;
    Ok(st.out)
}

pub fn order_embeds(guest: &PosetOverlay, host: &PosetOverlay, rooted: bool) -> Result<Option<EmbeddingMap>> {
    let (gc, hc) = (guest.closure()?, host.closure()?);
    let (gt, ht) = (&guest.base, &host.base);
    if gt.is_empty() {
        return Ok(Some(EmbeddingMap::empty(0, rooted)));
    }
    let g0 = if rooted { gt.root().ok_or_else(|| Error::Parameter("guest has no root".into()))? } else { 0 };
    let (order, _, twin_prev) = bfs_twins(gt, g0);
    let starts: Vec<usize> = if rooted {
        vec![ht.root().ok_or_else(|| Error::Parameter("host has no root".into()))?]
    } else {
        (0..ht.len()).collect()
    };
    let mut st = Search {
        gt,
        ht,
        gc: &gc,
        hc: &hc,
        order: &order,
        twin_prev: &twin_prev,
        map: vec![None; gt.len()],
        placed: Bits::new(gt.len()),
        img: Bits::new(ht.len()),
        out: Vec::new(),
        limit: 1,
        stop_at_first: true,
    };
    st.run(&starts, rooted)?;
    Ok(st.out.pop())
}

struct Search<'a> {
    gt: &'a DecoratedTree,
    ht: &'a DecoratedTree,
    gc: &'a Closure,
    hc: &'a Closure,
    /// Guest vertices in BFS order of the base tree, so every vertex after
    /// the first has a placed neighbour it is comparable with.
    order: &'a [usize],
    twin_prev: &'a [usize],
    map: Vec<Option<usize>>,
    placed: Bits,
    img: Bits,
    out: Vec<EmbeddingMap>,
    limit: usize,
    stop_at_first: bool,
}

impl Search<'_> {
    fn run(&mut self, starts: &[usize], rooted: bool) -> Result<()> {
        if self.order.is_empty() {
            return Ok(());
        }
        let g0 = self.order[0];
        for &h0 in starts {
            if !compatible(self.gt.vertex(g0), self.ht.vertex(h0)) {
                continue;
            }
            self.place(g0, h0);
            let done = self.extend(1)?;
            self.unplace(g0, h0);
            if done {
                break;
            }
        }
        for e in &mut self.out {
            e.rooted = rooted;
        }
        Ok(())
    }

    fn place(&mut self, g: usize, h: usize) {
        self.map[g] = Some(h);
        self.placed.set(g);
        self.img.set(h);
    }

    fn unplace(&mut self, g: usize, h: usize) {
        self.map[g] = None;
        self.placed.unset(g);
        self.img.unset(h);
    }

    /// Images of placed guest vertices in `set`.
    fn image_of(&self, set: &Bits) -> Bits {
        let mut b = Bits::new(self.ht.len());
        for (i, (&w, &p)) in set.0.iter().zip(&self.placed.0).enumerate() {
            let mut x = w & p;
            while x != 0 {
                let g = i * 64 + x.trailing_zeros() as usize;
                b.set(self.map[g].expect("placed"));
                x &= x - 1;
            }
        }
        b
    }

    /// Returns true once the search should stop.
    fn extend(&mut self, i: usize) -> Result<bool> {
        if i == self.order.len() {
            if self.out.len() >= self.limit && !self.stop_at_first {
                return Err(Error::Parameter(format!("more than {} order embeddings", self.limit)));
            }
            self.out.push(EmbeddingMap { pairs: self.map.clone(), rooted: false });
            return Ok(self.stop_at_first);
        }
        let g = self.order[i];
        let below = self.image_of(&self.gc.down[g]);
        let above = self.image_of(&self.gc.up[g]);
        let floor = match self.twin_prev[g] {
            NIL => None,
            w => self.map[w],
        };
        // a comparable placed neighbour narrows the candidates to its cone
        let anchor = self.gt.neighbors(g).iter().copied().find(|&x| self.placed.get(x));
        let cands: Vec<usize> = match anchor {
            Some(x) => {
                let hx = self.map[x].expect("placed");
                let cone = if self.gc.less(x, g) { &self.hc.up[hx] } else { &self.hc.down[hx] };
                cone.ones().collect()
            }
            None => (0..self.ht.len()).collect(),
        };
        for h in cands {
            if self.img.get(h) || floor.is_some_and(|f| h <= f) || !compatible(self.gt.vertex(g), self.ht.vertex(h)) {
                continue;
            }
            if !self.hc.down[h].meets_exactly(&self.img, &below) || !self.hc.up[h].meets_exactly(&self.img, &above) {
                continue;
            }
            self.place(g, h);
            let stop = self.extend(i + 1)?;
            self.unplace(g, h);
            if stop {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MonoidDomain {
    /// All even-path gadgets with path length ≤ 12 and fan ≤ 4, rooted.
    Gadgets,
    /// D'_s windows of halfwidth h into halfwidth 2h, for s in 0..3.
    RayWindows { halfwidth: i64 },
    /// Rooted self-embeddings of the R-ball with label gadgets.
    RBall { radius: usize },
}

const ENUM_LIMIT: usize = 1 << 20;

fn key_set(v: Vec<EmbeddingMap>) -> BTreeSet<Vec<Option<usize>>> {
    v.into_iter().map(|m| m.pairs).collect()
}

fn compare(rep: &mut Report, what: &str, g: Vec<EmbeddingMap>, o: Vec<EmbeddingMap>) {
    rep.case();
    let (gs, os) = (key_set(g), key_set(o));
    let only_g = gs.difference(&os).count();
    let only_o = os.difference(&gs).count();
    rep.expect(only_g == 0 && only_o == 0, "monoid", || vec![what.to_string()], || {
        format!("{} graph, {} order, {only_g} graph-only, {only_o} order-only", gs.len(), os.len())
    });
}

fn compare_overlays(rep: &mut Report, what: &str, g: &PosetOverlay, h: &PosetOverlay, rooted: bool) -> Result<()> {
    let anchor = if rooted {
        Some((g.base.root().expect("rooted"), h.base.root().expect("rooted")))
    } else {
        None
    };
    let graph = enumerate_embeddings(&g.base, &h.base, anchor, ENUM_LIMIT)?;
    let order = enumerate_order_embeddings(g, h, rooted, ENUM_LIMIT)?;
    compare(rep, what, graph, order);
    Ok(())
}

fn even_gadgets() -> Vec<GadgetSpec> {
    (1..=12u32)
        .filter(|n| n % 2 == 0)
        .flat_map(|n| (1..=4u32).map(move |m| GadgetSpec::plain(n, m)))
        .collect()
}

/// Graph embeddings and order embeddings coincide on every instance of the
/// domain; each overlay is also checked to be a DAG on tree edges.
pub fn monoid_equality_check(domain: MonoidDomain) -> Result<Report> {
    let mut rep = Report::new();
    match domain {
        MonoidDomain::Gadgets => {
            let specs = even_gadgets();
            let overlays: Vec<PosetOverlay> = specs.iter().map(|&s| order_gadget(s)).collect::<Result<_>>()?;
            for o in &overlays {
                o.closure()?;
                rep.expect(o.stray_covers().is_empty(), "cover-is-edge", Vec::new, String::new);
            }
            for (i, a) in overlays.iter().enumerate() {
                for (j, b) in overlays.iter().enumerate() {
                    let name = format!("PK({},{}) -> PK({},{})", specs[i].pathlen, specs[i].fan, specs[j].pathlen, specs[j].fan);
                    compare_overlays(&mut rep, &name, a, b, true)?;
                }
            }
        }
        MonoidDomain::RayWindows { halfwidth } => {
            for s in 0..3u32 {
                for s2 in 0..3u32 {
                    let g = order_ray(&build_ray(s, -halfwidth, halfwidth, Variant::Poset)?)?;
                    let h = order_ray(&build_ray(s2, -2 * halfwidth, 2 * halfwidth, Variant::Poset)?)?;
                    compare_overlays(&mut rep, &format!("D'_{s} -> D'_{s2}"), &g, &h, false)?;
                }
            }
        }
        MonoidDomain::RBall { radius } => {
            let ball = build_rball(radius, radius as u32, true)?;
            let o = order_r(&ball, &SignContext::canonical(&ball))?;
            let core_edges = ball.core_tree().edge_count();
            let oriented = o.covers.iter().filter(|&&(a, b)| a < ball.core && b < ball.core).count();
            rep.note("core-edges", core_edges);
            rep.note("core-edges-oriented", oriented);
            rep.expect(o.stray_covers().is_empty(), "cover-is-edge", Vec::new, String::new);
            compare_overlays(&mut rep, &format!("R-ball({radius})"), &o, &o, true)?;
        }
    }
    Ok(rep)
}

/// Flip one cover in the guest of a gadget self-comparison; the two
/// embedding sets must then differ.
pub fn corrupted_overlay_detected() -> Result<bool> {
    let o = order_gadget(GadgetSpec::plain(4, 2))?;
    let bad = o.flipped(0);
    let mut rep = Report::new();
    compare_overlays(&mut rep, "corrupted PK(4,2)", &bad, &o, true)?;
    Ok(!rep.passed())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::VertexRecord;

    fn id_of(t: &DecoratedTree, part: GadgetPart) -> usize {
        (0..t.len()).find(|&v| gpart(t, v) == Some(part)).unwrap()
    }

    #[test]
    fn pk22_fence() {
        let o = order_gadget(GadgetSpec::plain(2, 2)).unwrap();
        let c = o.closure().unwrap();
        let u = |i| id_of(&o.base, GadgetPart::Path(i));
        assert!(c.less(u(0), u(1)) && c.less(u(2), u(1)));
        for j in 0..2 {
            assert!(c.less(u(2), id_of(&o.base, GadgetPart::Leaf(j))));
        }
        assert_eq!(o.covers.len(), 2 + 2 + 1);
    }

    #[test]
    fn pk42_middle() {
        let o = order_gadget(GadgetSpec::plain(4, 2)).unwrap();
        let c = o.closure().unwrap();
        let u = |i| id_of(&o.base, GadgetPart::Path(i));
        assert!(c.less(u(2), u(1)) && c.less(u(2), u(3)));
        assert!(order_gadget(GadgetSpec::plain(3, 2)).is_err());
    }

    #[test]
    fn gadget_order_embeddings() {
        let a = order_gadget(GadgetSpec::plain(2, 2)).unwrap();
        let b = order_gadget(GadgetSpec::plain(2, 3)).unwrap();
        assert_eq!(order_embeds(&a, &a, true).unwrap().unwrap().pairs, (0..a.base.len()).map(Some).collect::<Vec<_>>());
        assert!(order_embeds(&a, &b, true).unwrap().is_some());
        assert!(order_embeds(&b, &a, true).unwrap().is_none());
    }

    #[test]
    fn chain_into_antichain() {
        let mut chain = DecoratedTree::from_edges(2, &[(0, 1)]).unwrap();
        chain.set_root(Some(0));
        let chain = PosetOverlay { base: chain, covers: vec![(0, 1)] };
        let mut anti = DecoratedTree::new();
        anti.add_vertex(VertexRecord::plain(Default::default()));
        anti.add_vertex(VertexRecord::plain(Default::default()));
        let anti = PosetOverlay { base: anti, covers: vec![] };
        assert!(order_embeds(&chain, &anti, false).unwrap().is_none());
    }

    #[test]
    fn cycle_is_rejected() {
        let t = DecoratedTree::from_edges(2, &[(0, 1)]).unwrap();
        let o = PosetOverlay { base: t, covers: vec![(0, 1), (1, 0)] };
        assert!(o.closure().is_err());
    }

    #[test]
    fn r_edges_from_the_centre() {
        let ball = build_rball(4, 4, false).unwrap();
        let ctx = SignContext::canonical(&ball);
        let o = order_r(&ball, &ctx).unwrap();
        let c = o.closure().unwrap();
        for &n in ball.tree.neighbors(ball.centre) {
            let s = crate::rtree::sign(&ball, &ctx, n).unwrap();
            assert_eq!(c.less(ball.centre, n), s > 0);
        }
    }

    #[test]
    fn dot_has_arcs() {
        let o = order_gadget(GadgetSpec::plain(2, 2)).unwrap();
        let d = o.to_dot("pk");
        assert!(d.starts_with("digraph") && d.matches("->").count() == o.covers.len());
    }
}
