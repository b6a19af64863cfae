//! Truncations of the labelled rooted tree (R, r) and its local calculus.
//!
//! R is realised as the universal cover of the graph on Z with edges
//! (n, n+1) and (-n, n): a vertex is a reduced walk from 0, identified by the
//! value it ends at, and its label is the absolute value. The neighbours of a
//! walk ending at p ≠ 0 end at p - sgn p, -p and p + sgn p, which have labels
//! |p| - 1, |p| and |p| + 1; a walk ending at 0 continues to +1 or -1.

use std::collections::{HashSet, VecDeque};

use crate::canon::canonical_form;
use crate::error::{Error, Result};
use crate::gadget::{attach, GadgetSpec};
use crate::report::Report;
use crate::tree::{Address, DecoratedTree, Kind, Move, VertexRecord};

/// Neighbours of a vertex of the covered graph, in construction order.
pub fn g_neighbors(p: i32) -> Vec<i32> {
    if p == 0 {
        vec![1, -1]
    } else {
        let s = p.signum();
        vec![p - s, -p, p + s]
    }
}

/// Read access to the copy structure a vertex lives in.
pub trait CopyFrame {
    fn tree(&self) -> &DecoratedTree;
    fn label(&self, v: usize) -> u32;
    fn value(&self, v: usize) -> i32;
    /// Walk parent inside the vertex's own copy; `None` at a copy root.
    fn copy_parent(&self, v: usize) -> Option<usize>;
    fn copy_id(&self, v: usize) -> usize;
}

fn ancestors<F: CopyFrame + ?Sized>(f: &F, u: usize) -> Vec<usize> {
    let mut out = vec![u];
    let mut x = u;
    while let Some(p) = f.copy_parent(x) {
        out.push(p);
        x = p;
    }
    out
}

pub fn copy_root<F: CopyFrame + ?Sized>(f: &F, u: usize) -> usize {
    *ancestors(f, u).last().expect("nonempty")
}

/// Path between two vertices of one copy, computed from walk parents.
pub fn copy_path<F: CopyFrame + ?Sized>(f: &F, u: usize, v: usize) -> Result<Vec<usize>> {
    if f.copy_id(u) != f.copy_id(v) {
        return Err(Error::Structure(format!("{u} and {v} lie in different copies")));
    }
    let au = ancestors(f, u);
    let av = ancestors(f, v);
    let (mut i, mut j) = (au.len(), av.len());
    while i > 0 && j > 0 && au[i - 1] == av[j - 1] {
        i -= 1;
        j -= 1;
    }
    let mut path: Vec<usize> = au[..=i].to_vec();
    path.extend(av[..j].iter().rev());
    Ok(path)
}

pub fn consecutive_pairs<F: CopyFrame + ?Sized>(f: &F, path: &[usize]) -> usize {
    path.windows(2).filter(|w| f.label(w[0]) == f.label(w[1])).count()
}

pub fn tree_vertex_count<F: CopyFrame + ?Sized>(f: &F, path: &[usize]) -> usize {
    path.iter().filter(|&&x| f.label(x) == 0).count()
}

/// Label of the last consecutive pair on `path`, 0 for a single vertex.
pub fn col_on<F: CopyFrame + ?Sized>(f: &F, path: &[usize]) -> Option<u32> {
    if path.len() == 1 {
        return Some(0);
    }
    path.windows(2)
        .rev()
        .find(|w| f.label(w[0]) == f.label(w[1]))
        .map(|w| f.label(w[0]))
}

pub fn hth_on<F: CopyFrame + ?Sized>(f: &F, path: &[usize]) -> u32 {
    path.iter().map(|&x| f.label(x)).max().unwrap_or(0)
}

fn parity(n: usize) -> i8 {
    if n.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// sign_b(u) inside the copy of `b`, with the copy root oriented by walk values.
pub fn local_sign<F: CopyFrame + ?Sized>(f: &F, b: usize, u: usize) -> Result<i8> {
    if u == b {
        return Err(Error::UndefinedAtBase);
    }
    let path = copy_path(f, b, u)?;
    let next = path[1];
    match f.copy_parent(b) {
        None => Ok(f.value(next).signum() as i8),
        Some(p) => {
            let root = copy_root(f, b);
            let s = local_spin(f, root, b)?;
            Ok(if next == p { s } else { -s })
        }
    }
}

pub fn local_spin<F: CopyFrame + ?Sized>(f: &F, b: usize, u: usize) -> Result<i8> {
    let path = copy_path(f, b, u)?;
    let s = local_sign(f, b, u)?;
    Ok(s * parity(consecutive_pairs(f, &path) + tree_vertex_count(f, &path)))
}

#[derive(Clone, Debug)]
pub struct RBall {
    pub tree: DecoratedTree,
    pub centre: usize,
    pub radius: usize,
    pub maxlabel: u32,
    /// Core vertices occupy ids `0..core`.
    pub core: usize,
    value: Vec<i32>,
    depth: Vec<usize>,
    parent: Vec<Option<usize>>,
}

impl CopyFrame for RBall {
    fn tree(&self) -> &DecoratedTree {
        &self.tree
    }
    fn label(&self, v: usize) -> u32 {
        self.tree.vertex(v).label.unwrap_or(0)
    }
    fn value(&self, v: usize) -> i32 {
        self.value[v]
    }
    fn copy_parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }
    fn copy_id(&self, _v: usize) -> usize {
        0
    }
}

pub fn build_rball(radius: usize, maxlabel: u32, with_gadgets: bool) -> Result<RBall> {
    if radius < 1 {
        return Err(Error::Parameter("radius must be at least 1".into()));
    }
    let mut tree = DecoratedTree::new();
    let mut value: Vec<i32> = Vec::new();
    let mut depth = Vec::new();
    let mut parent = Vec::new();
    let rec = |addr: Address, x: i32| VertexRecord {
        kind: if x == 0 { Kind::Tree } else { Kind::Copy },
        label: Some(x.unsigned_abs()),
        raytype: None,
        amalgamated: false,
        frontier: false,
        address: addr,
    };
    let root = tree.add_vertex(rec(Address::root(), 0i32));
    value.push(0);
    depth.push(0);
    parent.push(None);
    let mut q = VecDeque::from([root]);
    while let Some(v) = q.pop_front() {
        let x = value[v];
        if depth[v] >= radius || x.unsigned_abs() > maxlabel {
            tree.vertex_mut(v).frontier = true;
            continue;
        }
        let back = parent[v].map(|p: usize| value[p]);
        for y in g_neighbors(x) {
            if Some(y) == back {
                continue;
            }
            let addr = tree.vertex(v).address.child(Move::Copy(y));
            let c = tree.add_vertex(rec(addr, y));
            tree.add_edge(v, c)?;
            value.push(y);
            depth.push(depth[v] + 1);
            parent.push(Some(v));
            q.push_back(c);
        }
    }
    let core = tree.len();
    if with_gadgets {
        for v in 0..core {
            let l = tree.vertex(v).label.unwrap_or(0);
            attach(&mut tree, v, GadgetSpec::label(l))?;
        }
    }
    tree.set_root(Some(root));
    Ok(RBall {
        tree,
        centre: root,
        radius,
        maxlabel,
        core,
        value,
        depth,
        parent,
    })
}

impl RBall {
    pub fn depth(&self, v: usize) -> usize {
        self.depth[v]
    }

    pub fn is_interior(&self, v: usize) -> bool {
        v < self.core && !self.tree.vertex(v).frontier
    }

    /// The decreasing-label path from `v` stays strictly inside the ball.
    pub fn is_label_complete(&self, v: usize) -> bool {
        self.is_interior(v) && self.depth[v] + (self.label(v) as usize) < self.radius
    }

    pub fn interior_tree_vertices(&self) -> Vec<usize> {
        (0..self.core)
            .filter(|&v| self.is_interior(v) && self.label(v) == 0)
            .collect()
    }

    pub fn path(&self, u: usize, v: usize) -> Vec<usize> {
        copy_path(self, u, v).expect("single copy")
    }

    /// Core subtree without gadgets.
    pub fn core_tree(&self) -> DecoratedTree {
        let keep: Vec<bool> = (0..self.tree.len()).map(|v| v < self.core).collect();
        self.tree.induced(&keep).expect("core is connected").0
    }
}

fn require_tree_vertex(ball: &RBall, v: usize) -> Result<()> {
    if v >= ball.core || ball.label(v) != 0 {
        return Err(Error::Structure(format!("{v} is not a tree vertex")));
    }
    Ok(())
}

pub fn colour(ball: &RBall, v: usize, u: usize) -> Result<u32> {
    require_tree_vertex(ball, v)?;
    require_tree_vertex(ball, u)?;
    let p = ball.path(v, u);
    col_on(ball, &p).ok_or_else(|| Error::Structure("tree-vertex path without a consecutive pair".into()))
}

pub fn height(ball: &RBall, v: usize, w: usize) -> Result<u32> {
    if v >= ball.core || w >= ball.core {
        return Err(Error::Structure("height is defined on core vertices".into()));
    }
    Ok(hth_on(ball, &ball.path(v, w)))
}

/// Orientation of the two branches at a tree vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignContext {
    pub base: usize,
    pub orientation: Vec<(usize, i8)>,
}

impl SignContext {
    /// The orientation prescribed by the sign rules: walk values at the
    /// centre, spin of the centre at every other tree vertex.
    pub fn at(ball: &RBall, base: usize) -> Result<Self> {
        require_tree_vertex(ball, base)?;
        if !ball.is_interior(base) {
            return Err(Error::Truncation(format!("base {base} on the frontier")));
        }
        let mut orientation = Vec::new();
        for &n in ball.tree.neighbors(base) {
            if n < ball.core {
                orientation.push((n, local_sign(ball, base, n)?));
            }
        }
        Ok(SignContext { base, orientation })
    }

    pub fn canonical(ball: &RBall) -> Self {
        Self::at(ball, ball.centre).expect("centre is interior")
    }
}

pub fn sign(ball: &RBall, ctx: &SignContext, u: usize) -> Result<i8> {
    if u == ctx.base {
        return Err(Error::UndefinedAtBase);
    }
    let p = ball.path(ctx.base, u);
    ctx.orientation
        .iter()
        .find(|(n, _)| *n == p[1])
        .map(|&(_, s)| s)
        .ok_or_else(|| Error::Truncation(format!("branch of {} toward {u} not oriented", ctx.base)))
}

pub fn spin(ball: &RBall, ctx: &SignContext, u: usize) -> Result<i8> {
    let s = sign(ball, ctx, u)?;
    let p = ball.path(ctx.base, u);
    Ok(s * parity(consecutive_pairs(ball, &p) + tree_vertex_count(ball, &p)))
}

fn addr(ball: &RBall, v: usize) -> String {
    ball.tree.vertex(v).address.to_string()
}

/// Stored label against distance to the nearest core vertex of degree 2.
pub fn lab_check(ball: &RBall) -> Report {
    let mut rep = Report::new();
    let core = ball.core;
    let deg2: Vec<bool> = (0..ball.tree.len())
        .map(|x| x < core && ball.tree.core_degree(x) == 2)
        .collect();
    for v in 0..core {
        if !ball.is_label_complete(v) {
            continue;
        }
        let d = ball.tree.dist_to_predicate_within(v, |x| x < core, |x| deg2[x]);
        let l = ball.label(v) as usize;
        rep.expect(
            d == Some(l),
            "label-reconstruct",
            || vec![addr(ball, v)],
            || format!("label {l}, distance {d:?}"),
        );
    }
    rep
}

/// Projection of `w` onto P_{u,v} and whether the connecting path has
/// strictly decreasing labels.
fn on_decreasing_branch(ball: &RBall, on_path: &HashSet<usize>, w: usize, toward: usize) -> bool {
    let p = ball.path(w, toward);
    let k = p.iter().position(|x| on_path.contains(x)).expect("path reaches P");
    // p[k] is the projection; labels must strictly decrease from p[k] back to w
    (0..k).all(|i| ball.label(p[i]) < ball.label(p[i + 1]))
}

pub fn verify_colpreserv(ball: &RBall, u: usize, v: usize) -> Result<Report> {
    let mut rep = Report::new();
    let puv: HashSet<usize> = ball.path(u, v).into_iter().collect();
    let mut exceptions = 0usize;
    for w in ball.interior_tree_vertices() {
        let cu = colour(ball, u, w)?;
        let cv = colour(ball, v, w)?;
        rep.case();
        if cu != cv {
            exceptions += 1;
            if !on_decreasing_branch(ball, &puv, w, u) {
                rep.fail(
                    "colpreserv",
                    vec![addr(ball, u), addr(ball, v), addr(ball, w)],
                    format!("col_u = {cu}, col_v = {cv}, off the decreasing branches"),
                );
            }
        }
    }
    rep.note("exceptions", exceptions);
    Ok(rep)
}

/// Lemma colpreserv over every ordered pair of interior tree vertices.
pub fn sweep_colpreserv(ball: &RBall) -> Result<Report> {
    let tv = ball.interior_tree_vertices();
    let mut rep = Report::new();
    let mut exceptions = 0u64;
    for &u in &tv {
        for &v in &tv {
            let r = verify_colpreserv(ball, u, v)?;
            exceptions += r.notes.iter().map(|(_, x)| x.parse::<u64>().unwrap_or(0)).sum::<u64>();
            rep.cases += r.cases;
            rep.violations.extend(r.violations);
        }
    }
    rep.note("tree-vertices", tv.len());
    rep.note("exceptions", exceptions);
    Ok(rep)
}

/// Lemma spinpreserv (1)-(3) from the centre and Corollary spinpreserv3 for
/// every pair, including its stated exception.
pub fn verify_spin_lemmas(ball: &RBall) -> Result<Report> {
    let mut rep = Report::new();
    let r = ball.centre;
    let tv = ball.interior_tree_vertices();
    let ctx: Vec<SignContext> = tv.iter().map(|&v| SignContext::at(ball, v)).collect::<Result<_>>()?;
    let idx = |v: usize| tv.iter().position(|&x| x == v).expect("tree vertex");
    let spin_at = |b: usize, w: usize| spin(ball, &ctx[idx(b)], w);
    let sign_at = |b: usize, w: usize| sign(ball, &ctx[idx(b)], w);
    for &v in &tv {
        if v == r {
            continue;
        }
        let (a, b) = (spin_at(v, r)?, sign_at(r, v)?);
        rep.expect(a == b, "spinpreserv-1", || vec![addr(ball, v)], || format!("spin_v(r) = {a}, sign_r(v) = {b}"));
        let prv: HashSet<usize> = ball.path(r, v).into_iter().collect();
        for &w in &tv {
            if w == r || w == v {
                continue;
            }
            let (sv, sr) = (spin_at(v, w)?, spin_at(r, w)?);
            if prv.contains(&w) {
                rep.expect(sv == -sr, "spinpreserv-3", || vec![addr(ball, v), addr(ball, w)], || format!("{sv} vs {sr}"));
            } else {
                rep.expect(sv == sr, "spinpreserv-2", || vec![addr(ball, v), addr(ball, w)], || format!("{sv} vs {sr}"));
            }
        }
    }
    let mut stated_exceptions = 0usize;
    for &u in &tv {
        for &v in &tv {
            let puv: HashSet<usize> = ball.path(u, v).into_iter().collect();
            let pru = ball.path(r, u);
            let prv = ball.path(r, v);
            let meet = pru.iter().zip(&prv).take_while(|(a, b)| a == b).last().map(|(a, _)| *a);
            for &w in &tv {
                if w == u || w == v {
                    continue;
                }
                let (su, sv) = (spin_at(u, w)?, spin_at(v, w)?);
                if !puv.contains(&w) {
                    rep.expect(su == sv, "spinpreserv3-1", || vec![addr(ball, u), addr(ball, v), addr(ball, w)], || format!("{su} vs {sv}"));
                } else if w != r && meet == Some(w) {
                    stated_exceptions += 1;
                    rep.expect(su == sv, "spinpreserv3-2-exception", || vec![addr(ball, u), addr(ball, v), addr(ball, w)], || format!("{su} vs {sv}"));
                } else {
                    rep.expect(su == -sv, "spinpreserv3-2", || vec![addr(ball, u), addr(ball, v), addr(ball, w)], || format!("{su} vs {sv}"));
                }
            }
        }
    }
    rep.note("tree-vertices", tv.len());
    rep.note("stated-exception-instances", stated_exceptions);
    Ok(rep)
}

/// Peak of a unimodal ⟨0 1 … k k … 1 0⟩ label sequence, if it is one.
pub fn unimodal_peak(labels: &[u32]) -> Option<u32> {
    let n = labels.len().checked_sub(1)?;
    if n < 3 || n % 2 == 0 {
        return None;
    }
    let ok = labels.iter().enumerate().all(|(i, &l)| l as usize == i.min(n - i));
    ok.then_some((n / 2) as u32)
}

/// Lemma unisign for all unimodal tree-vertex pairs with peak at most `kmax`.
pub fn verify_unisign(ball: &RBall, kmax: u32) -> Result<Report> {
    let mut rep = Report::new();
    let tv = ball.interior_tree_vertices();
    let mut per_k = vec![0usize; kmax as usize + 1];
    for &a in &tv {
        for &b in &tv {
            if a == b {
                continue;
            }
            let p = ball.path(a, b);
            let labels: Vec<u32> = p.iter().map(|&x| ball.label(x)).collect();
            let Some(k) = unimodal_peak(&labels) else { continue };
            if k > kmax {
                continue;
            }
            per_k[k as usize] += 1;
            let sab = local_sign(ball, a, b)?;
            let sba = local_sign(ball, b, a)?;
            rep.expect(sab == -sba, "unisign", || vec![addr(ball, a), addr(ball, b)], || format!("{sab} vs {sba}"));
        }
    }
    for (k, n) in per_k.iter().enumerate().skip(1) {
        rep.note(&format!("pairs-k{k}"), n);
    }
    Ok(rep)
}

/// Rooted balls of radius `rho` around interior tree vertices all match the
/// ball around the centre.
pub fn verify_homogeneity(ball: &RBall, rho: usize) -> Result<Report> {
    let mut rep = Report::new();
    let core = ball.core_tree();
    let code_at = |v: usize| -> Result<Vec<u8>> {
        let d = core.bfs_distances(v);
        let keep: Vec<bool> = d.iter().map(|x| x.is_some_and(|x| x <= rho)).collect();
        let (mut t, map) = core.induced(&keep)?;
        t.set_root(map[v]);
        canonical_form(&t, true)
    };
    let reference = code_at(ball.centre)?;
    for v in ball.interior_tree_vertices() {
        if ball.depth(v) + rho > ball.radius {
            continue;
        }
        let c = code_at(v)?;
        rep.expect(c == reference, "homogeneity", || vec![addr(ball, v)], || "rooted ball differs".into());
    }
    Ok(rep)
}

/// The label- and sign-preserving automorphism taking the centre to `v`,
/// restricted to where its images are materialized.
pub fn sign_similarity(ball: &RBall, v: usize) -> Result<Vec<Option<usize>>> {
    require_tree_vertex(ball, v)?;
    let r = ball.centre;
    let mut map = vec![None; ball.core];
    map[r] = Some(v);
    let ctx_r = SignContext::at(ball, r)?;
    let ctx_v = SignContext::at(ball, v)?;
    let mut q = VecDeque::from([r]);
    while let Some(w) = q.pop_front() {
        let img = map[w].expect("queued vertices are mapped");
        if !ball.is_interior(img) || !ball.is_interior(w) {
            continue;
        }
        let back = ball.parent[w].and_then(|p| map[p]);
        for &c in ball.tree.neighbors(w) {
            if c >= ball.core || Some(c) == ball.parent[w] {
                continue;
            }
            let mut cands: Vec<usize> = ball
                .tree
                .neighbors(img)
                .iter()
                .copied()
                .filter(|&x| x < ball.core && Some(x) != back && ball.label(x) == ball.label(c))
                .collect();
            if w == r {
                let want = sign(ball, &ctx_r, c)?;
                let mut keep = Vec::new();
                for x in cands {
                    if sign(ball, &ctx_v, x)? == want {
                        keep.push(x);
                    }
                }
                cands = keep;
            }
            if cands.len() != 1 {
                return Err(Error::NoSimilarity(format!("{} candidates at {}", cands.len(), addr(ball, c))));
            }
            map[c] = Some(cands[0]);
            q.push_back(c);
        }
    }
    Ok(map)
}

/// Corollary colembpreserv: col_r(w) = col_v(Φ(w)) everywhere, and
/// col_r(w) = col_v(w) off the decreasing branches of P_{r,v}.
pub fn verify_colembpreserv(ball: &RBall, v: usize) -> Result<Report> {
    let mut rep = Report::new();
    let r = ball.centre;
    let phi = sign_similarity(ball, v)?;
    let prv: HashSet<usize> = ball.path(r, v).into_iter().collect();
    for w in ball.interior_tree_vertices() {
        let cr = colour(ball, r, w)?;
        if let Some(x) = phi[w].filter(|&x| ball.is_interior(x)) {
            let cx = colour(ball, v, x)?;
            rep.expect(cr == cx, "colembpreserv-image", || vec![addr(ball, w)], || format!("{cr} vs {cx}"));
        }
        let cv = colour(ball, v, w)?;
        if cr != cv {
            rep.expect(
                on_decreasing_branch(ball, &prv, w, r),
                "colembpreserv-exception",
                || vec![addr(ball, w)],
                || format!("{cr} vs {cv}"),
            );
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Counts from the label rules alone: a vertex entered from a neighbour of
    // label p has as children its remaining rule-mandated neighbours.
    fn count_oracle(radius: usize) -> usize {
        fn below(from: u32, l: u32, left: usize) -> usize {
            if left == 0 {
                return 1;
            }
            let kids: Vec<u32> = if l == 0 {
                vec![1]
            } else {
                let mut all = vec![l - 1, l, l + 1];
                let i = all.iter().position(|&x| x == from).unwrap();
                all.remove(i);
                all
            };
            1 + kids.into_iter().map(|c| below(l, c, left - 1)).sum::<usize>()
        }
        1 + 2 * below(0, 1, radius - 1)
    }

    #[test]
    fn radius_one_ball() {
        let b = build_rball(1, 2, false).unwrap();
        assert_eq!(b.tree.len(), 3);
        assert!(b.tree.vertex(1).frontier && b.tree.vertex(2).frontier);
        assert_eq!(b.label(1), 1);
    }

    #[test]
    fn vertex_counts_match_recursion() {
        for r in 1..=8 {
            let b = build_rball(r, r as u32 + 1, false).unwrap();
            assert_eq!(b.tree.len(), count_oracle(r), "radius {r}");
        }
    }

    #[test]
    fn interior_label_one_neighbours() {
        let b = build_rball(3, 4, false).unwrap();
        for v in 0..b.core {
            if b.is_interior(v) && b.label(v) == 1 {
                let mut ls: Vec<u32> = b.tree.neighbors(v).iter().map(|&x| b.label(x)).collect();
                ls.sort();
                assert_eq!(ls, vec![0, 1, 2]);
            }
        }
    }

    #[test]
    fn gadgets_attach_to_every_core_vertex() {
        let b = build_rball(2, 3, true).unwrap();
        let expected: usize = (0..b.core).map(|v| GadgetSpec::label(b.label(v)).extra_vertices()).sum();
        assert_eq!(b.tree.len(), b.core + expected);
        b.tree.validate().unwrap();
    }

    #[test]
    fn colour_and_height_basics() {
        let b = build_rball(6, 7, false).unwrap();
        let r = b.centre;
        assert_eq!(colour(&b, r, r).unwrap(), 0);
        assert_eq!(height(&b, r, r).unwrap(), 0);
        // 0 -> 1 -> -1 -> 0 has labels 0 1 1 0
        let idx = b.tree.address_index();
        let u = idx[&Address(vec![Move::Copy(1), Move::Copy(-1), Move::Copy(0)])];
        assert_eq!(colour(&b, r, u).unwrap(), 1);
        assert_eq!(height(&b, r, u).unwrap(), 1);
    }

    #[test]
    fn sign_undefined_at_base() {
        let b = build_rball(3, 4, false).unwrap();
        let ctx = SignContext::canonical(&b);
        assert_eq!(sign(&b, &ctx, b.centre), Err(Error::UndefinedAtBase));
        assert_eq!(ctx.orientation, vec![(1, 1), (2, -1)]);
    }

    #[test]
    fn unimodal_shapes() {
        assert_eq!(unimodal_peak(&[0, 1, 1, 0]), Some(1));
        assert_eq!(unimodal_peak(&[0, 1, 2, 2, 1, 0]), Some(2));
        assert_eq!(unimodal_peak(&[0, 1, 2, 1, 0]), None);
        assert_eq!(unimodal_peak(&[0]), None);
    }
}
