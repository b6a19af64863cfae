//! Fingerprints of spine paths and the similarity maps they determine.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::construct::TBall;
use crate::embed::{find_embedding_anchored, EmbeddingMap, FrontierPolicy};
use crate::error::{Error, Result};
use crate::report::Report;
use crate::rtree::{local_sign, CopyFrame};
use crate::spine::SpineBall;
use crate::tree::{Address, GadgetPart, GadgetRole, Move};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sym {
    Sign(i8),
    Label(u32),
    Lt,
    Gt,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fingerprint(pub Vec<Sym>);

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|s| match s {
                Sym::Sign(x) if *x > 0 => "+1".to_string(),
                Sym::Sign(_) => "-1".to_string(),
                Sym::Label(l) => l.to_string(),
                Sym::Lt => "<".to_string(),
                Sym::Gt => ">".to_string(),
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl FromStr for Fingerprint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.split_whitespace()
            .map(|t| match t {
                "+1" => Ok(Sym::Sign(1)),
                "-1" => Ok(Sym::Sign(-1)),
                "<" => Ok(Sym::Lt),
                ">" => Ok(Sym::Gt),
                _ => t
                    .parse()
                    .map(Sym::Label)
                    .map_err(|_| Error::Parameter(format!("bad fingerprint symbol {t:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Fingerprint)
    }
}

fn symbols(sb: &SpineBall, path: &[usize]) -> Result<Fingerprint> {
    let n = path.len() - 1;
    let mut out = Vec::with_capacity(path.len());
    for i in 0..=n {
        let x = path[i];
        if i < n {
            let y = path[i + 1];
            if let (Some((ra, ia)), Some((rb, ib))) = (sb.meta[x].ray, sb.meta[y].ray) {
                if ra == rb {
                    out.push(if ia < ib { Sym::Lt } else { Sym::Gt });
                    continue;
                }
            }
            let first = i == 0 || sb.copy_id(path[i - 1]) != sb.copy_id(x);
            if first && sb.copy_id(y) == sb.copy_id(x) {
                out.push(Sym::Sign(local_sign(sb, x, y)?));
                continue;
            }
        }
        out.push(Sym::Label(sb.label(x)));
    }
    Ok(Fingerprint(out))
}

/// Fingerprint of P_{u,v}; `u` must be amalgamated.
pub fn fingerprint(sb: &SpineBall, u: usize, v: usize) -> Result<Fingerprint> {
    if !sb.is_amalgamated(u) {
        return Err(Error::Structure(format!("{} is not amalgamated", sb.addr(u))));
    }
    if v >= sb.core {
        return Err(Error::Structure(format!("{} is a gadget vertex", sb.addr(v))));
    }
    symbols(sb, &sb.path(u, v))
}

/// A partial similarity: `map[w]` for guest core vertices.
#[derive(Clone, Debug)]
pub struct SimilarityMap {
    pub anchor: (usize, usize),
    pub map: Vec<Option<usize>>,
    /// Guest vertices whose image would lie past the host truncation.
    pub undetermined: Vec<usize>,
}

impl SimilarityMap {
    pub fn get(&self, w: usize) -> Result<usize> {
        self.map
            .get(w)
            .copied()
            .flatten()
            .ok_or_else(|| Error::Truncation(format!("vertex {w} outside the determined domain")))
    }

    pub fn domain(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.map.iter().enumerate().filter_map(|(w, x)| x.map(|x| (w, x)))
    }

    pub fn inverse(&self, x: usize) -> Option<usize> {
        self.map.iter().position(|&y| y == Some(x))
    }
}

pub fn build_similarity(sb: &SpineBall, u: usize, v: usize) -> Result<SimilarityMap> {
    build_similarity_between(sb, u, sb, v)
}

/// Extend u ↦ v outward, one neighbour at a time, by matching fingerprints.
pub fn build_similarity_between(g: &SpineBall, u: usize, h: &SpineBall, v: usize) -> Result<SimilarityMap> {
    for (sb, x) in [(g, u), (h, v)] {
        if !sb.is_amalgamated(x) || !sb.is_interior(x) {
            return Err(Error::Structure(format!("{} is not an interior amalgamated vertex", sb.addr(x))));
        }
    }
    let mut map = vec![None; g.core];
    let mut undetermined = Vec::new();
    map[u] = Some(v);
    let mut q = VecDeque::from([(u, usize::MAX)]);
    while let Some((w, from)) = q.pop_front() {
        let x = map[w].expect("queued vertices are mapped");
        let back = if from == usize::MAX { usize::MAX } else { map[from].expect("mapped") };
        for &c in g.tree.neighbors(w) {
            if c >= g.core || c == from {
                continue;
            }
            if !h.is_interior(x) {
                undetermined.push(c);
                continue;
            }
            let fc = fingerprint(g, u, c)?;
            let mut hit = None;
            for &y in h.tree.neighbors(x) {
                if y >= h.core || y == back || fingerprint(h, v, y)? != fc {
                    continue;
                }
                if hit.replace(y).is_some() {
                    return Err(Error::NoSimilarity(format!("two images for {}", g.addr(c))));
                }
            }
            let y = hit.ok_or_else(|| Error::NoSimilarity(format!("no image for {} with fingerprint {fc}", g.addr(c))))?;
            map[c] = Some(y);
            q.push_back((c, w));
        }
    }
    Ok(SimilarityMap { anchor: (u, v), map, undetermined })
}

fn decreasing_from(sb: &SpineBall, on: &HashSet<usize>, w: usize) -> bool {
    let anchor = *on.iter().next().expect("nonempty path");
    sb.on_decreasing_branch(on, w, anchor)
}

/// Map-level invariants and both clauses of the similarity lemma for a
/// self-similarity of `sb`.
pub fn check_similarity_properties(sb: &SpineBall, phi: &SimilarityMap) -> Result<Report> {
    let mut rep = Report::new();
    let (u, v) = phi.anchor;
    let interior = |w: usize, x: usize| sb.is_interior(w) && sb.is_interior(x);
    for (w, x) in phi.domain() {
        if !interior(w, x) {
            continue;
        }
        let (a, b) = (&sb.meta[w], &sb.meta[x]);
        rep.expect(
            sb.label(w) == sb.label(x) && a.ray.is_some() == b.ray.is_some() && sb.tree.vertex(w).kind == sb.tree.vertex(x).kind,
            "preserves-decoration",
            || vec![sb.addr(w), sb.addr(x)],
            || "label, kind or amalgamation changed".into(),
        );
        for &c in sb.tree.neighbors(w) {
            let Some(y) = phi.map.get(c).copied().flatten() else { continue };
            rep.expect(sb.tree.has_edge(x, y), "preserves-edges", || vec![sb.addr(w), sb.addr(c)], || "edge dropped".into());
            rep.expect(
                (sb.copy_id(w) == sb.copy_id(c)) == (sb.copy_id(x) == sb.copy_id(y)),
                "preserves-copies",
                || vec![sb.addr(w), sb.addr(c)],
                String::new,
            );
            if let (Some((ra, i)), Some((rc, j))) = (a.ray, sb.meta[c].ray) {
                if ra == rc {
                    let ok = matches!((b.ray, sb.meta[y].ray), (Some((rb, p)), Some((rd, q))) if rb == rd && q - p == j - i);
                    rep.expect(ok, "preserves-direction", || vec![sb.addr(w), sb.addr(c)], String::new);
                }
            }
        }
        if sb.is_amalgamated(w) {
            let (f, g) = (fingerprint(sb, u, w)?, fingerprint(sb, v, x)?);
            rep.expect(f == g, "fingerprint", || vec![sb.addr(w), sb.addr(x)], || format!("{f} vs {g}"));
        }
    }
    let puv: HashSet<usize> = sb.path(u, v).into_iter().collect();
    let (iu, iv) = (phi.inverse(u), phi.inverse(v));
    let pinv: HashSet<usize> = match (iu, iv) {
        (Some(a), Some(b)) => sb.path(a, b).into_iter().collect(),
        _ => HashSet::new(),
    };
    for w in sb.interior_tree_vertices() {
        let Some(x) = phi.map[w].filter(|&x| sb.is_interior(x)) else { continue };
        let (su_w, sv_w, sv_x, su_x) = (sb.gspin(u, w), sb.gspin(v, w), sb.gspin(v, x), sb.gspin(u, x));
        rep.expect(su_w.is_ok() == sv_x.is_ok(), "spin-domain", || vec![sb.addr(w), sb.addr(x)], || format!("{su_w:?} vs {sv_x:?}"));
        if let (Ok(a), Ok(b)) = (&su_w, &sv_x) {
            rep.expect(a == b, "spin-by-fingerprint", || vec![sb.addr(w)], || format!("{a} vs {b}"));
        }
        if let (Ok(a), Ok(b), Ok(c)) = (&su_w, &sv_w, &sv_x) {
            if !puv.contains(&w) {
                rep.expect(a == b && b == c, "similarity-spin", || vec![sb.addr(w)], || format!("{a} {b} {c}"));
            }
        }
        if let (Ok(c), Ok(d)) = (&sv_x, &su_x) {
            if (iu.is_some() && iv.is_some()) && !pinv.contains(&w) {
                rep.expect(c == d, "similarity-spin-image", || vec![sb.addr(w)], || format!("{c} vs {d}"));
            }
        }
        let (cu_w, cv_x) = (sb.gcol(u, w)?, sb.gcol(v, x)?);
        rep.expect(cu_w == cv_x, "colour-by-fingerprint", || vec![sb.addr(w)], || format!("{cu_w} vs {cv_x}"));
        let exempt = decreasing_from(sb, &puv, w) || decreasing_from(sb, &puv, x);
        if !exempt {
            let (cv_w, cu_x) = (sb.gcol(v, w)?, sb.gcol(u, x)?);
            rep.expect(
                cu_w == cv_w && cv_w == cu_x && cu_x == cv_x,
                "similarity-colour",
                || vec![sb.addr(w), sb.addr(x)],
                || format!("{cu_w} {cv_w} {cu_x} {cv_x}"),
            );
        }
    }
    Ok(rep)
}

/// Every fingerprint-preserving map of the radius-r core ball around `u`
/// that sends u to v, found by exhaustive backtracking over label- and
/// kind-preserving neighbour choices.
pub fn all_fingerprint_maps(sb: &SpineBall, u: usize, v: usize, r: usize, limit: usize) -> Result<Vec<Vec<(usize, usize)>>> {
    let dist = sb.tree.bfs_distances(u);
    let mut order = vec![u];
    let mut parent = vec![usize::MAX];
    let mut i = 0;
    while i < order.len() {
        let w = order[i];
        for &c in sb.tree.neighbors(w) {
            if c < sb.core && dist[c] == dist[w].map(|d| d + 1) && dist[c].is_some_and(|d| d <= r) {
                order.push(c);
                parent.push(i);
            }
        }
        i += 1;
    }
    let targets: Vec<Fingerprint> = order.iter().map(|&w| fingerprint(sb, u, w)).collect::<Result<_>>()?;
    let mut img = vec![usize::MAX; order.len()];
    let mut used = HashSet::new();
    let mut out = Vec::new();
    #[allow(clippy::too_many_arguments)]
    fn go(
        sb: &SpineBall,
        v: usize,
        k: usize,
        order: &[usize],
        parent: &[usize],
        targets: &[Fingerprint],
        img: &mut Vec<usize>,
        used: &mut HashSet<usize>,
        out: &mut Vec<Vec<(usize, usize)>>,
        limit: usize,
    ) -> Result<()> {
        if out.len() > limit {
            return Ok(());
        }
        if k == order.len() {
            out.push(order.iter().copied().zip(img.iter().copied()).collect());
            return Ok(());
        }
        let cands: Vec<usize> = if k == 0 {
            vec![v]
        } else {
            let p = img[parent[k]];
            if !sb.is_interior(p) {
                return Err(Error::Truncation(format!("image {} is on the frontier", sb.addr(p))));
            }
            sb.tree.neighbors(p).iter().copied().filter(|&y| y < sb.core).collect()
        };
        let w = order[k];
        for y in cands {
            if used.contains(&y)
                || sb.label(y) != sb.label(w)
                || sb.tree.vertex(y).kind != sb.tree.vertex(w).kind
                || fingerprint(sb, v, y)? != targets[k]
            {
                continue;
            }
            img[k] = y;
            used.insert(y);
            go(sb, v, k + 1, order, parent, targets, img, used, out, limit)?;
            used.remove(&y);
        }
        Ok(())
    }
    go(sb, v, 0, &order, &parent, &targets, &mut img, &mut used, &mut out, limit)?;
    if out.len() > limit {
        return Err(Error::Parameter(format!("more than {limit} maps")));
    }
    Ok(out)
}

/// Translate central-ray offsets in an address by t.
pub fn shift_address(a: &Address, t: i64) -> Address {
    let lead = a.0.iter().take_while(|m| matches!(m, Move::Ray(_))).count();
    let i: i64 = a.0[..lead].iter().map(|m| if let Move::Ray(d) = m { i64::from(*d) } else { 0 }).sum::<i64>() + t;
    let d = if i >= 0 { 1 } else { -1 };
    let mut out = vec![Move::Ray(d); i.unsigned_abs() as usize];
    out.extend_from_slice(&a.0[lead..]);
    Address(out)
}

/// The central-ray translation of `guest` into `host`, by addresses.
pub fn translation(guest: &TBall, host: &TBall, t: i64) -> Result<EmbeddingMap> {
    let idx = host.tree.address_index();
    let mut m = EmbeddingMap::empty(guest.tree.len(), false);
    for w in 0..guest.tree.len() {
        let a = shift_address(&guest.tree.vertex(w).address, t);
        m.pairs[w] = Some(*idx.get(&a).ok_or_else(|| Error::Truncation(format!("{a} not in host")))?);
    }
    Ok(m)
}

/// The negation of walk values inside the copy rooted at central-ray vertex
/// v_i, as a partial permutation of guest vertices by address. Vertices whose
/// mirror image is absent (type gadgets that differ across the mirror) map
/// to `None`.
pub fn mirror_copy(tb: &TBall, i: i64) -> Vec<Option<usize>> {
    let idx = tb.tree.address_index();
    let d = if i >= 0 { 1 } else { -1 };
    let lead = i.unsigned_abs() as usize;
    (0..tb.tree.len())
        .map(|w| {
            let a = &tb.tree.vertex(w).address.0;
            let on = a.len() > lead
                && a[..lead].iter().all(|m| *m == Move::Ray(d))
                && matches!(a[lead], Move::Copy(_));
            if !on {
                return Some(w);
            }
            let mut b = a.clone();
            for m in b[lead..].iter_mut() {
                match m {
                    Move::Copy(y) => *y = -*y,
                    _ => break,
                }
            }
            idx.get(&Address(b)).copied()
        })
        .collect()
}

/// `phi` precomposed with the mirror of the copy at v_i.
pub fn mirrored(phi: &EmbeddingMap, tb: &TBall, i: i64) -> EmbeddingMap {
    EmbeddingMap {
        pairs: mirror_copy(tb, i).into_iter().map(|m| m.and_then(|w| phi.get(w))).collect(),
        rooted: phi.rooted,
    }
}

fn host_of(host: &TBall, guest: &TBall, w: usize) -> Option<usize> {
    host.spine.lookup(&guest.tree.vertex(w).address)
}

/// Follow ⟨1 2 … p p … 1 0⟩ `reps` times from `w` through neighbour `n`,
/// inside the copy of `w`.
fn probe(sb: &SpineBall, w: usize, n: usize, peak: u32, reps: usize) -> Option<usize> {
    let mut seq: Vec<u32> = Vec::new();
    for _ in 0..reps {
        seq.extend(1..=peak);
        seq.extend((0..=peak).rev());
    }
    let (mut prev, mut cur) = (w, n);
    if sb.label(n) != seq[0] {
        return None;
    }
    for &l in &seq[1..] {
        if !sb.is_interior(cur) {
            return None;
        }
        let next = sb
            .tree
            .neighbors(cur)
            .iter()
            .copied()
            .find(|&y| y < sb.core && y != prev && sb.copy_id(y) == sb.copy_id(cur) && sb.label(y) == l)?;
        prev = cur;
        cur = next;
    }
    sb.is_interior(cur).then_some(cur)
}

/// Which model the ray through an amalgamated target reads: (0,1) at
/// indices 0 and 1 is T, (1,0) is a sibling.
fn probe_tag(tb: &TBall, x: usize) -> Option<&'static str> {
    let b0 = tb.bit(x)?;
    let a = tb.tree.vertex(x).address.child(Move::Ray(1));
    let b1 = tb.bit(tb.spine.lookup(&a)?)?;
    match (b0, b1) {
        (0, 1) => Some("T"),
        (1, 0) => Some("S"),
        _ => None,
    }
}

fn copy_neighbours(sb: &SpineBall, w: usize) -> Vec<usize> {
    sb.tree
        .neighbors(w)
        .iter()
        .copied()
        .filter(|&y| y < sb.core && sb.copy_id(y) == sb.copy_id(w))
        .collect()
}

/// φ restricted to the spine is a similarity: fingerprints from the centre
/// and from sampled amalgamated bases agree with their images, and copies,
/// amalgamation and stages are respected. Targets within one height-k crater
/// (2k+1 steps) of the guest frontier are left out: a ray there shows too
/// few type bits to fix its direction. Signs are checked at amalgamated
/// vertices whose unimodal probes fit inside the guest, where the probe
/// argument is replayed; elsewhere the truncation cannot force them.
pub fn embedding_induces_similarity(guest: &TBall, host: &TBall, phi: &EmbeddingMap) -> Result<Report> {
    let (g, h) = (&guest.spine, &host.spine);
    let mut rep = Report::new();
    let margin = 2 * guest.stage as usize + 1;
    let amal: Vec<usize> = (0..g.core)
        .filter(|&w| g.is_interior(w) && g.is_amalgamated(w))
        .filter(|&w| g.depth(w) + margin <= g.truncation.radius)
        .filter(|&w| phi.get(w).is_some_and(|x| x < h.core && h.is_interior(x)))
        .collect();
    for &w in &amal {
        rep.case();
        let x = phi.get(w).expect("filtered");
        rep.expect(h.is_amalgamated(x), "embedkcopies-amalgamated", || vec![g.addr(w)], || h.addr(x));
        for n in copy_neighbours(g, w) {
            let Some(y) = phi.get(n) else { continue };
            if y >= h.core || h.copy_id(y) != h.copy_id(x) {
                rep.fail("preserves-copies", vec![g.addr(w), g.addr(n)], "neighbour left the copy");
            }
        }
    }
    let bases: Vec<usize> = amal.iter().copied().filter(|&w| g.depth(w) <= 2).collect();
    for &u in &bases {
        let pu = phi.get(u).expect("filtered");
        for &w in &amal {
            rep.case();
            let x = phi.get(w).expect("filtered");
            let (f, fx) = (fingerprint(g, u, w)?, fingerprint(h, pu, x)?);
            rep.expect(f == fx, "fingerprint", || vec![g.addr(u), g.addr(w)], || format!("{f} vs {fx}"));
        }
    }
    let pz = phi.get(g.centre).ok_or_else(|| Error::Structure("centre unmapped".into()))?;
    let hz = host_of(host, guest, g.centre).ok_or_else(|| Error::Truncation("centre not in host".into()))?;
    let gz = h.ghth(hz, pz)?;
    for l in gz..=guest.stage {
        for &w in &amal {
            let (Some(hw), x) = (host_of(host, guest, w), phi.get(w).expect("filtered")) else { continue };
            if h.ghth(hz, hw)? <= l {
                rep.expect(h.ghth(hz, x)? <= l, "embedkcopies-stage", || vec![g.addr(w)], || format!("stage {l}"));
            }
        }
    }
    let mut used_reps = Vec::new();
    if guest.stage >= 1 {
        for &w in &amal {
            if let Some((reps, r)) = probe_check(guest, host, phi, w, hz)? {
                used_reps.push(reps);
                rep.merge(r);
            }
        }
    }
    rep.note("sign-determined", used_reps.len());
    rep.note("sign-undetermined", amal.len() - used_reps.len());
    rep.note("probe-reps-max", used_reps.iter().max().copied().unwrap_or(0));
    Ok(rep)
}

/// Witness self-embeddings of a T-ball: the identity, central translations
/// by 1..=3, and the engine's open-policy embeddings sending z to v_1..v_3.
/// The host is the same model three steps wider.
pub fn witness_embeddings(guest: &TBall, host: &TBall) -> Result<Vec<(String, EmbeddingMap)>> {
    let mut out = vec![("identity".to_string(), translation(guest, host, 0)?)];
    for t in 1..=3 {
        out.push((format!("translate-{t}"), translation(guest, host, t)?));
    }
    for t in 1..=3 {
        let v = host.central(t).ok_or_else(|| Error::Truncation(format!("v_{t} not in host")))?;
        if let Some(m) = find_embedding_anchored(&guest.tree, guest.spine.centre, &host.tree, v, FrontierPolicy::Open) {
            out.push((format!("engine-{t}"), m));
        }
    }
    for (name, m) in &out {
        m.validate(&guest.tree, &host.tree).map_err(|e| Error::Structure(format!("{name}: {e}")))?;
    }
    Ok(out)
}

/// Core vertex a gadget vertex hangs from.
fn owner(tb: &TBall, x: usize) -> usize {
    let a = &tb.tree.vertex(x).address.0;
    let cut = a.iter().position(|m| matches!(m, Move::Gadget(..))).unwrap_or(a.len());
    tb.spine.lookup(&Address(a[..cut].to_vec())).expect("gadget owner is in the core")
}

/// Host vertices missed by φ near φ(z). Within distance ρ − (2k+1) of φ(z),
/// leaving out what hangs from images of guest frontier vertices, every
/// uncovered vertex must be one type-gadget leaf at a host ray vertex
/// of type 1 whose preimage has type 0, at most one per such vertex, and
/// their number is bounded by the displacement dist(z, φ(z)) times the
/// number of type-1 ray vertices per unit step along any ray (one).
pub fn verify_embfinite(guest: &TBall, host: &TBall, phi: &EmbeddingMap) -> Result<Report> {
    let (g, h) = (&guest.spine, &host.spine);
    let mut rep = Report::new();
    let pz = phi.get(g.centre).ok_or_else(|| Error::Structure("centre unmapped".into()))?;
    let hz = host_of(host, guest, g.centre).ok_or_else(|| Error::Truncation("centre not in host".into()))?;
    let displacement = h.dist(hz, pz);
    let reach = g.truncation.radius.saturating_sub(2 * guest.stage as usize + 1);
    let mut pre = vec![None; host.tree.len()];
    for (w, x) in phi.pairs.iter().enumerate() {
        if let Some(x) = *x {
            pre[x] = Some(w);
        }
    }
    let mut per_owner: std::collections::BTreeMap<usize, usize> = std::collections::BTreeMap::new();
    for x in 0..host.tree.len() {
        let o = owner(host, x);
        if h.dist(o, pz) > reach || pre[o].is_some_and(|w| !g.is_interior(w)) {
            continue;
        }
        rep.case();
        if pre[x].is_some() {
            continue;
        }
        let v = host.tree.vertex(x);
        let leaf = matches!(v.address.0.last(), Some(Move::Gadget(GadgetRole::Type, GadgetPart::Leaf(_))));
        let downgraded = host.bit(o) == Some(1) && pre[o].and_then(|w| guest.bit(w)) == Some(0);
        rep.expect(leaf && downgraded, "uncovered-kind", || vec![v.address.to_string()], || {
            format!("owner bit {:?}, preimage bit {:?}", host.bit(o), pre[o].and_then(|w| guest.bit(w)))
        });
        *per_owner.entry(o).or_default() += 1;
    }
    for (&o, &c) in &per_owner {
        rep.expect(c == 1, "uncovered-single", || vec![h.addr(o)], || format!("{c} leaves"));
    }
    let bound = displacement;
    rep.expect(per_owner.len() <= bound, "uncovered-bound", Vec::new, || {
        format!("{} uncovered, displacement {displacement}", per_owner.len())
    });
    rep.note("displacement", displacement);
    rep.note("uncovered", per_owner.len());
    rep.note("reach", reach);
    Ok(rep)
}

fn probe_check(guest: &TBall, host: &TBall, phi: &EmbeddingMap, w: usize, hz: usize) -> Result<Option<(usize, Report)>> {
    let (g, h) = (&guest.spine, &host.spine);
    let peak = guest.stage;
    let x = phi.get(w).expect("caller checked");
    let Some(hw) = host_of(host, guest, w) else { return Ok(None) };
    let paths: Vec<HashSet<usize>> = [(hw, hz), (hw, x), (hz, x)]
        .iter()
        .map(|&(a, b)| h.path(a, b).into_iter().collect())
        .collect();
    let clear = |y: usize| paths.iter().all(|p| p.contains(&y) || !h.on_decreasing_branch(p, y, *p.iter().next().expect("nonempty")));
    let sides = copy_neighbours(g, w);
    if sides.len() != 2 {
        return Ok(None);
    }
    'reps: for reps in 1..=4 {
        let mut found = Vec::new();
        for &n in &sides {
            let Some(p) = probe(g, w, n, peak, reps) else { continue 'reps };
            let Some(y) = phi.get(n) else { continue 'reps };
            let Some(ph) = probe(h, x, y, peak, reps) else { continue 'reps };
            let Some(hp) = host_of(host, guest, p) else { continue 'reps };
            let heights_ok = [h.ghth(hw, hp)?, h.gcol(hw, hp)?, h.ghth(hz, hp)?, h.gcol(hz, hp)?].iter().all(|&v| v == peak);
            if !(heights_ok && clear(hp) && clear(ph) && !paths.iter().any(|s| s.contains(&hp) || s.contains(&ph))) {
                continue 'reps;
            }
            found.push((n, p, y, ph));
        }
        let mut r = Report::new();
        for (n, p, y, ph) in found {
            let tg = probe_tag(guest, p);
            let th = probe_tag(host, ph);
            r.expect(tg.is_some() && tg == th, "probe-tag", || vec![g.addr(w), g.addr(p)], || format!("{tg:?} vs {th:?}"));
            r.expect(phi.get(p) == Some(ph), "probe-image", || vec![g.addr(w), g.addr(p)], || format!("{:?}", phi.get(p).map(|q| host.tree.vertex(q).address.to_string())));
            let (a, b) = (local_sign(g, w, n)?, local_sign(h, x, y)?);
            r.expect(a == b, "sign", || vec![g.addr(w), g.addr(n)], || format!("{a} vs {b}"));
        }
        return Ok(Some((reps, r)));
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spine::{build_spine, Truncation};

    #[test]
    fn fingerprint_ascii_round_trip() {
        let f: Fingerprint = "+1 0 < < 0 1 1 0".parse().unwrap();
        assert_eq!(f.to_string(), "+1 0 < < 0 1 1 0");
        assert!("+1 x".parse::<Fingerprint>().is_err());
    }

    #[test]
    fn trivial_and_ray_fingerprints() {
        let sb = build_spine(1, Truncation::for_stage(1, 5)).unwrap();
        assert_eq!(fingerprint(&sb, 0, 0).unwrap().to_string(), "0");
        let r1 = sb.lookup(&Address(vec![Move::Ray(1)])).unwrap();
        let c = sb.lookup(&Address(vec![Move::Ray(1), Move::Copy(1)])).unwrap();
        assert_eq!(fingerprint(&sb, 0, c).unwrap().to_string(), "< +1 1");
        assert_eq!(fingerprint(&sb, r1, 0).unwrap().to_string(), "> 0");
    }

    #[test]
    fn identity_similarity() {
        let sb = build_spine(1, Truncation::for_stage(1, 5)).unwrap();
        let phi = build_similarity(&sb, 0, 0).unwrap();
        for (w, x) in phi.domain() {
            assert_eq!(w, x);
        }
        assert!(phi.undetermined.is_empty());
        assert!(check_similarity_properties(&sb, &phi).unwrap().passed());
    }

    #[test]
    fn shift_addresses() {
        let a = Address(vec![Move::Ray(-1), Move::Copy(1)]);
        assert_eq!(shift_address(&a, 2), Address(vec![Move::Ray(1), Move::Copy(1)]));
        assert_eq!(shift_address(&a, 1), Address(vec![Move::Copy(1)]));
    }
}
