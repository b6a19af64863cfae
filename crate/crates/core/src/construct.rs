//! Truncations of T_s(k): the spine with every ray typed.
//!
//! A ray vertex's type is a function of its address. At the top level the
//! central ray reads its pattern directly. Any other ray vertex x of global
//! height ℓ ≥ 1 lies in the crater of a unique target v, and the crater's
//! typing was copied from the tree amalgamated at v: T(ℓ-1) when
//! gspin(v) = -1, otherwise the registered sibling S_{i,j} with
//! ℓ = 2^i(2j+1). So x is re-expressed relative to v, as an address in that
//! model, and the lookup repeats with a strictly smaller height.

use std::collections::{HashMap, HashSet, VecDeque};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::canon::canonical_form;
use crate::error::{Error, Result};
use crate::gadget::{attach, GadgetSpec};
use crate::ray::tp;
use crate::report::Report;
use crate::rtree::CopyFrame;
use crate::spine::{build_spine, degree_census, SpineBall, Truncation};
use crate::tree::{Address, DecoratedTree, GadgetRole, Kind, Move};

/// k = 2^i(2j+1).
pub fn stage_decode(k: u32) -> Result<(u32, u32)> {
    if k == 0 {
        return Err(Error::Parameter("stage 0 has no decomposition".into()));
    }
    let i = k.trailing_zeros();
    Ok((i, (k >> i) / 2))
}

/// Central-ray typing: tp_base read at offset `shift`, with overrides.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Pattern {
    pub base: u32,
    pub overrides: Vec<(i64, u8)>,
    pub shift: i64,
}

impl Pattern {
    pub fn family(s: u32) -> Self {
        Pattern { base: s, overrides: Vec::new(), shift: 0 }
    }

    pub fn sibling(spec: &SiblingSpec) -> Self {
        Pattern { base: 0, overrides: spec.overrides.clone(), shift: spec.centre }
    }

    pub fn bit(&self, i: i64) -> u8 {
        let j = i + self.shift;
        self.overrides
            .iter()
            .find(|(k, _)| *k == j)
            .map(|&(_, b)| b)
            .unwrap_or_else(|| tp(self.base, j))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SiblingSpec {
    pub base_stage: u32,
    pub index: u32,
    /// Central-ray index of T(base_stage) → bit.
    pub overrides: Vec<(i64, u8)>,
    /// Central-ray index of the first type-1 vertex followed by type 0.
    pub centre: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Registry {
    pub sib_count: u32,
    /// Enumeration parameters the list was produced with.
    pub bound: usize,
    pub window: i64,
    pub siblings: Vec<SiblingSpec>,
}

const FROZEN_S3: &str = include_str!("../registry/s3.json");

impl Registry {
    pub fn empty(sib_count: u32) -> Self {
        Registry { sib_count, bound: 0, window: 0, siblings: Vec::new() }
    }

    /// The pinned registry for 𝔰 = 3.
    pub fn frozen() -> Self {
        serde_json::from_str(FROZEN_S3).expect("frozen registry parses")
    }

    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn get(&self, i: u32, j: u32) -> Result<&SiblingSpec> {
        self.siblings
            .iter()
            .find(|s| s.base_stage == i && s.index == j)
            .ok_or_else(|| Error::Config(format!("registry has no S_{{{i},{j}}}")))
    }

    /// Entries needed to build any T(k') with k' ≤ k.
    pub fn require_upto(&self, k: u32) -> Result<()> {
        for l in 1..=k {
            let (i, j) = stage_decode(l)?;
            self.get(i, j)?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Tag {
    /// (T(ℓ-1), z_0).
    T(u32),
    /// (S_{i,j}, c_{i,j}).
    S(u32, u32),
}

impl std::fmt::Display for Tag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Tag::T(l) => write!(f, "T({l})"),
            Tag::S(i, j) => write!(f, "S_{{{i},{j}}}"),
        }
    }
}

fn tag_for(l: u32, spin: i8) -> Result<Tag> {
    if spin < 0 {
        Ok(Tag::T(l - 1))
    } else {
        let (i, j) = stage_decode(l)?;
        Ok(Tag::S(i, j))
    }
}

/// One reduction step of the address recursion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    /// Target address in the frame the step was taken in.
    pub target: Address,
    pub height: u32,
    pub spin: i8,
    pub tag: Tag,
    /// Address of the same vertex in the model's frame.
    pub rest: Address,
}

struct Seg {
    start: usize,
    vals: Vec<i32>,
}

fn segments(a: &[Move]) -> Result<Vec<Seg>> {
    let mut segs = vec![Seg { start: 0, vals: vec![0] }];
    for (i, m) in a.iter().enumerate() {
        match *m {
            Move::Ray(_) => segs.push(Seg { start: i + 1, vals: vec![0] }),
            Move::Copy(y) => segs.last_mut().expect("nonempty").vals.push(y),
            Move::Gadget(..) => return Err(Error::Structure("gadget vertices carry no type".into())),
        }
    }
    Ok(segs)
}

/// spin of the end of a walk from its copy root.
pub fn walk_spin(walk: &[i32]) -> i8 {
    let sign = walk[1].signum() as i8;
    let pairs = walk.windows(2).filter(|w| w[0].abs() == w[1].abs()).count();
    let trees = walk.iter().filter(|&&x| x == 0).count();
    if (pairs + trees) % 2 == 0 {
        sign
    } else {
        -sign
    }
}

/// Move `a` one level down, into the model amalgamated at its target.
pub fn reduce(a: &[Move]) -> Result<Reduction> {
    let segs = segments(a)?;
    let l = segs.iter().flat_map(|s| s.vals.iter()).map(|v| v.unsigned_abs()).max().unwrap_or(0);
    if l == 0 {
        return Err(Error::Structure("central ray vertices do not reduce".into()));
    }
    let (si, j) = segs
        .iter()
        .enumerate()
        .rev()
        .find_map(|(si, s)| s.vals.iter().rposition(|v| v.unsigned_abs() == l).map(|j| (si, j)))
        .expect("maximum attained");
    let seg = &segs[si];
    let w = &seg.vals;
    if j == 0 || w[j - 1] != -w[j] {
        return Err(Error::Structure(format!("{} has no consecutive pair at height {l}", Address(a.to_vec()))));
    }
    let mut vf: Vec<i32> = w[..=j].to_vec();
    while *vf.last().expect("nonempty") != 0 {
        let x = *vf.last().expect("nonempty");
        vf.push(x - x.signum());
    }
    let n = vf.len();
    let common = vf.iter().zip(w.iter()).take_while(|(x, y)| x == y).count();
    let mut rel: Vec<i32> = (common - 1..n - 1).rev().map(|i| vf[i]).collect();
    rel.extend_from_slice(&w[common..]);
    let spin = walk_spin(&vf);
    if let Some(&f) = rel.first() {
        let side = if f == vf[n - 2] { spin } else { -spin };
        let eps = i32::from(side) * f;
        for x in rel.iter_mut() {
            *x *= eps;
        }
    }
    let mut target: Vec<Move> = a[..seg.start].to_vec();
    target.extend(vf[1..].iter().map(|&x| Move::Copy(x)));
    let mut rest: Vec<Move> = rel.into_iter().map(Move::Copy).collect();
    rest.extend_from_slice(&a[seg.start + w.len() - 1..]);
    Ok(Reduction { target: Address(target), height: l, spin, tag: tag_for(l, spin)?, rest: Address(rest) })
}

/// Type bit of the ray vertex at `a`, with the chain of reductions used.
pub fn type_of(pattern: &Pattern, registry: &Registry, a: &Address) -> Result<(u8, Vec<Reduction>)> {
    let mut pat = pattern.clone();
    let mut cur = a.0.clone();
    let mut trace = Vec::new();
    loop {
        if cur.iter().all(|m| matches!(m, Move::Ray(_))) {
            let i: i64 = cur.iter().map(|m| if let Move::Ray(d) = m { i64::from(*d) } else { 0 }).sum();
            return Ok((pat.bit(i), trace));
        }
        let r = reduce(&cur)?;
        pat = match r.tag {
            Tag::T(_) => Pattern::family(0),
            Tag::S(i, j) => Pattern::sibling(registry.get(i, j)?),
        };
        cur = r.rest.0.clone();
        trace.push(r);
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmalgamEntry {
    pub target: String,
    pub height: u32,
    pub spin: i8,
    pub tag: Tag,
}

#[derive(Clone, Debug)]
pub struct TBall {
    pub spine: SpineBall,
    /// Spine plus type gadgets and ray types.
    pub tree: DecoratedTree,
    pub pattern: Pattern,
    pub s: Option<u32>,
    pub stage: u32,
    pub amalgam_log: Vec<AmalgamEntry>,
}

impl CopyFrame for TBall {
    fn tree(&self) -> &DecoratedTree {
        &self.tree
    }
    fn label(&self, v: usize) -> u32 {
        self.spine.label(v)
    }
    fn value(&self, v: usize) -> i32 {
        self.spine.value(v)
    }
    fn copy_parent(&self, v: usize) -> Option<usize> {
        self.spine.copy_parent(v)
    }
    fn copy_id(&self, v: usize) -> usize {
        self.spine.copy_id(v)
    }
}

pub fn build_t(s: u32, k: u32, truncation: Truncation, registry: &Registry) -> Result<TBall> {
    if s >= registry.sib_count {
        return Err(Error::Parameter(format!("s = {s} not below 𝔰 = {}", registry.sib_count)));
    }
    let mut tb = build_t_pattern(Pattern::family(s), k, truncation, registry)?;
    tb.s = Some(s);
    Ok(tb)
}

/// The sibling S_{i,j} extended to stage k, centred at its centre.
pub fn build_sibling(spec: &SiblingSpec, k: u32, truncation: Truncation, registry: &Registry) -> Result<TBall> {
    if k < spec.base_stage {
        return Err(Error::Parameter(format!("stage {k} below base stage {}", spec.base_stage)));
    }
    build_t_pattern(Pattern::sibling(spec), k, truncation, registry)
}

pub fn build_t_pattern(pattern: Pattern, k: u32, truncation: Truncation, registry: &Registry) -> Result<TBall> {
    registry.require_upto(k)?;
    let spine = build_spine(k, truncation)?;
    let mut tree = spine.tree.clone();
    for v in 0..spine.core {
        if spine.meta[v].ray.is_none() {
            continue;
        }
        let (bit, _) = type_of(&pattern, registry, &tree.vertex(v).address)?;
        tree.vertex_mut(v).raytype = Some(bit);
        attach(&mut tree, v, GadgetSpec::for_type(bit))?;
    }
    let mut tb = TBall { spine, tree, pattern, s: None, stage: k, amalgam_log: Vec::new() };
    let mut log = Vec::new();
    for (v, l) in target_vertices(&tb)? {
        if l == 0 || l > k {
            continue;
        }
        let spin = tb.spine.gspin(0, v)?;
        log.push(AmalgamEntry { target: tb.spine.addr(v), height: l, spin, tag: tag_for(l, spin)? });
    }
    tb.amalgam_log = log;
    Ok(tb)
}

impl TBall {
    pub fn core(&self) -> usize {
        self.spine.core
    }

    pub fn bit(&self, v: usize) -> Option<u8> {
        self.tree.vertex(v).raytype
    }

    /// Ray-vertex address → bit, in vertex order.
    pub fn typing(&self) -> Vec<(Address, u8)> {
        (0..self.core())
            .filter_map(|v| self.bit(v).map(|b| (self.tree.vertex(v).address.clone(), b)))
            .collect()
    }

    /// Central-ray index → vertex.
    pub fn central(&self, i: i64) -> Option<usize> {
        let d = if i >= 0 { 1 } else { -1 };
        self.spine.lookup(&Address(vec![Move::Ray(d); i.unsigned_abs() as usize]))
    }

    /// The type-gadget-free tree.
    pub fn strip_types(&self) -> DecoratedTree {
        let keep: Vec<bool> = self
            .tree
            .vertices()
            .iter()
            .map(|r| !r.address.0.iter().any(|m| matches!(m, Move::Gadget(GadgetRole::Type, _))))
            .collect();
        let (mut t, _) = self.tree.induced(&keep).expect("type gadgets are pendant");
        for v in 0..t.len() {
            t.vertex_mut(v).raytype = None;
        }
        t
    }

    pub fn dot_with_craters(&self) -> Result<String> {
        let mut s = String::from("digraph craters {\n  node [shape=circle, fontsize=8];\n");
        let mut n = 0;
        for (v, l) in target_vertices(self)? {
            if l == 0 {
                continue;
            }
            s.push_str(&format!("  subgraph cluster_{n} {{\n    label=\"{} h{l}\";\n", self.spine.addr(v)));
            for u in crater(self, v, l) {
                s.push_str(&format!("    v{u};\n"));
            }
            s.push_str("  }\n");
            n += 1;
        }
        for u in 0..self.core() {
            let r = self.tree.vertex(u);
            let lab = match r.raytype {
                Some(b) => format!("{}/t{b}", r.label.unwrap_or(0)),
                None => format!("{}", r.label.unwrap_or(0)),
            };
            s.push_str(&format!("  v{u} [label=\"{lab}\", addr=\"{}\"];\n", r.address));
            if let Some(p) = self.spine.parent(u) {
                s.push_str(&format!("  v{p} -> v{u};\n"));
            }
        }
        s.push_str("}\n");
        Ok(s)
    }
}

/// Interior tree vertices with ghth_z = gcol_z, with that height.
pub fn target_vertices(tb: &TBall) -> Result<Vec<(usize, u32)>> {
    let sb = &tb.spine;
    let mut out = Vec::new();
    for v in sb.interior_tree_vertices() {
        let h = sb.ghth(0, v)?;
        if sb.gcol(0, v)? == h {
            out.push((v, h));
        }
    }
    Ok(out)
}

/// Interior vertices u with ghth_v(u) < ℓ; {v} when ℓ = 0.
pub fn crater(tb: &TBall, v: usize, l: u32) -> Vec<usize> {
    let sb = &tb.spine;
    if l == 0 {
        return vec![v];
    }
    let mut seen = HashSet::from([v]);
    let mut q = VecDeque::from([v]);
    let mut out = Vec::new();
    while let Some(x) = q.pop_front() {
        if sb.is_interior(x) {
            out.push(x);
        }
        for &y in tb.tree.neighbors(x) {
            if y < sb.core && sb.label(y) < l && seen.insert(y) {
                q.push_back(y);
            }
        }
    }
    out.sort_unstable();
    out
}

/// TBall invariants: central typing, amalgamation status and tags of
/// targets, the crater partition, agreement of the address recursion with
/// the crater found in the ball, and the degree census.
pub fn verify_tball(tb: &TBall) -> Result<Report> {
    let sb = &tb.spine;
    let mut rep = Report::new();
    let mut i = 0i64;
    while let Some(v) = tb.central(i) {
        rep.expect(tb.bit(v) == Some(tb.pattern.bit(i)), "central-typing", || vec![sb.addr(v)], || format!("{:?}", tb.bit(v)));
        i = if i >= 0 { -i - 1 } else { -i };
    }
    let targets = target_vertices(tb)?;
    let log: HashMap<&str, &AmalgamEntry> = tb.amalgam_log.iter().map(|e| (e.target.as_str(), e)).collect();
    let mut owner: HashMap<usize, usize> = HashMap::new();
    for &(v, l) in &targets {
        let want = l <= tb.stage;
        rep.expect(sb.is_amalgamated(v) == want, "target-amalgamation", || vec![sb.addr(v)], || format!("height {l}"));
        if l >= 1 && want {
            let e = log.get(sb.addr(v).as_str());
            let ok = e.is_some_and(|e| e.tag == tag_for(l, sb.gspin(0, v).unwrap_or(0)).unwrap_or(Tag::T(u32::MAX)));
            rep.expect(ok, "attachment-tag", || vec![sb.addr(v)], || format!("{e:?}"));
        }
        for u in crater(tb, v, l) {
            if let Some(w) = owner.insert(u, v) {
                rep.fail("crater-disjoint", vec![sb.addr(u), sb.addr(v), sb.addr(w)], "two craters");
            }
        }
    }
    rep.cases += targets.len() as u64;
    let mut truncated = 0usize;
    for x in 0..sb.core {
        if !sb.is_interior(x) || tb.bit(x).is_none() {
            continue;
        }
        let a = &tb.tree.vertex(x).address;
        if sb.ghth(0, x)? == 0 {
            rep.expect(owner.get(&x) == Some(&x), "crater-cover", || vec![a.to_string()], || "central ray".into());
            continue;
        }
        let r = reduce(&a.0)?;
        match sb.lookup(&r.target).filter(|&t| sb.is_interior(t)) {
            Some(t) => rep.expect(owner.get(&x) == Some(&t), "crater-cover", || vec![a.to_string()], || r.target.to_string()),
            None => truncated += 1,
        }
    }
    rep.note("targets", targets.len());
    rep.note("craters-beyond-truncation", truncated);
    rep.merge(degree_census(&tb.tree, |v| sb.is_interior(v)));
    Ok(rep)
}

/// Stripping type gadgets gives back the spine, by canonical form.
pub fn spine_recovered(tb: &TBall) -> Result<bool> {
    let fresh = build_spine(tb.stage, tb.spine.truncation)?;
    Ok(canonical_form(&tb.strip_types(), false)? == canonical_form(&fresh.tree, false)?)
}

/// Some shift t with |t| ≤ h maps p into q type-monotonically on [-h, h].
pub fn pattern_embeds(p: &Pattern, q: &Pattern, h: i64) -> bool {
    (-h..=h).any(|t| (-h..=h).all(|i| p.bit(i) <= q.bit(i + t)))
}

/// First i in [-w, w) with bit(i) = 1 and bit(i+1) = 0.
pub fn one_then_zero(p: &Pattern, w: i64) -> Option<i64> {
    (-w..w).find(|&i| p.bit(i) == 1 && p.bit(i + 1) == 0)
}

fn candidate_sets(window: i64, bound: usize) -> Vec<Vec<i64>> {
    let mut idx: Vec<i64> = (-window..=window).collect();
    idx.sort_by_key(|&i| (i.abs(), i));
    let mut out: Vec<Vec<i64>> = Vec::new();
    fn rec(idx: &[i64], from: usize, left: usize, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for p in from..idx.len() {
            cur.push(idx[p]);
            rec(idx, p + 1, left - 1, cur, out);
            cur.pop();
        }
    }
    for size in 1..=bound {
        rec(&idx, 0, size, &mut Vec::new(), &mut out);
    }
    out
}

/// Centred canonical form: at the 1-then-0 vertex, or at the last 0 before
/// the 1s when the pattern is monotone.
fn centred_form(p: &Pattern, k: u32, truncation: Truncation, registry: &Registry, window: i64) -> Result<Vec<u8>> {
    let c = one_then_zero(p, window + 2).unwrap_or_else(|| {
        (-window - 2..=window + 2).find(|&i| p.bit(i) == 0 && p.bit(i + 1) == 1).unwrap_or(0)
    });
    let mut q = p.clone();
    q.shift += c;
    canonical_form(&build_t_pattern(q, k, truncation, registry)?.tree, false)
}

/// Type-override siblings of T(k) on the central window, in canonical order.
pub fn enumerate_siblings(
    k: u32,
    bound: usize,
    window: i64,
    truncation: Truncation,
    registry: &Registry,
) -> Result<Vec<SiblingSpec>> {
    let h = 2 * window;
    let mut forms: Vec<Vec<u8>> = (0..registry.sib_count)
        .map(|s| canonical_form(&build_t(s, k, truncation, registry)?.tree, false))
        .collect::<Result<_>>()?;
    let base = Pattern::family(0);
    let mut out = Vec::new();
    for set in candidate_sets(window, bound) {
        let overrides: Vec<(i64, u8)> = set.iter().map(|&i| (i, 1 - tp(0, i))).collect();
        let p = Pattern { base: 0, overrides: overrides.clone(), shift: 0 };
        if !(pattern_embeds(&p, &base, h) && pattern_embeds(&base, &p, h)) {
            continue;
        }
        let Some(centre) = one_then_zero(&p, window + 2) else {
            continue;
        };
        let f = centred_form(&p, k, truncation, registry, window)?;
        if forms.contains(&f) {
            continue;
        }
        forms.push(f);
        out.push(SiblingSpec { base_stage: k, index: out.len() as u32, overrides, centre });
    }
    Ok(out)
}

/// Enumerate stages 0..=kmax in order, each using the entries before it.
pub fn generate_registry(sib_count: u32, kmax: u32, bound: usize, window: i64) -> Result<Registry> {
    let mut reg = Registry { sib_count, bound, window, siblings: Vec::new() };
    for k in 0..=kmax {
        let t = Truncation::for_stage(k, min_radius(k).max(2 * window as usize + 1));
        let found = enumerate_siblings(k, bound, window, t, &reg)?;
        reg.siblings.extend(found);
    }
    Ok(reg)
}

/// Smallest radius holding every height-≤k crater next to the centre, plus
/// one crater of margin.
pub fn min_radius(k: u32) -> usize {
    2 * (2 * k as usize + 1) + 1
}

/// Pairwise distinct forms for the T_s(k), each distinct from every
/// registered sibling extended to stage k, and a 1-then-0 in every sibling's
/// pattern. Siblings are not compared with each other.
pub fn verify_nonisomorphism(k: u32, truncation: Truncation, registry: &Registry) -> Result<Report> {
    let mut rep = Report::new();
    let mut named: Vec<(String, Vec<u8>)> = Vec::new();
    for s in 0..registry.sib_count {
        named.push((format!("T_{s}({k})"), canonical_form(&build_t(s, k, truncation, registry)?.tree, false)?));
    }
    for spec in registry.siblings.iter().filter(|sp| sp.base_stage <= k) {
        let p = Pattern::sibling(spec);
        rep.expect(
            one_then_zero(&p, 1) == Some(0),
            "nonisop0",
            || vec![format!("S_{{{},{}}}", spec.base_stage, spec.index)],
            || "centre is not 1-then-0".into(),
        );
        let tb = build_sibling(spec, k, truncation, registry)?;
        named.push((format!("S_{{{},{}}}@{k}", spec.base_stage, spec.index), canonical_form(&tb.tree, false)?));
    }
    let families = registry.sib_count as usize;
    for a in 0..families {
        for b in a + 1..named.len() {
            rep.expect(named[a].1 != named[b].1, "basenonisomorphism", || vec![named[a].0.clone(), named[b].0.clone()], || "equal canonical forms".into());
        }
    }
    rep.note("objects", named.len());
    Ok(rep)
}

/// Ray vertices of `t` with their type bits.
pub fn ray_bits(t: &DecoratedTree) -> Vec<(usize, u8)> {
    (0..t.len())
        .filter(|&v| t.vertex(v).kind == Kind::Ray)
        .filter_map(|v| t.vertex(v).raytype.map(|b| (v, b)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decode_examples() {
        assert_eq!(stage_decode(1).unwrap(), (0, 0));
        assert_eq!(stage_decode(4).unwrap(), (2, 0));
        assert_eq!(stage_decode(12).unwrap(), (2, 1));
        assert!(stage_decode(0).is_err());
    }

    #[test]
    fn walk_spin_basics() {
        // walk 0 1 -1 0: sign +1, one pair, two tree vertices
        assert_eq!(walk_spin(&[0, 1, -1, 0]), -1);
        assert_eq!(walk_spin(&[0, -1, 1, 0]), 1);
    }

    #[test]
    fn reduce_to_model_frame() {
        // x two ray steps off the height-1 target at c1.c-1.c0
        let a = Address(vec![Move::Copy(1), Move::Copy(-1), Move::Copy(0), Move::Ray(1), Move::Ray(1)]);
        let r = reduce(&a.0).unwrap();
        assert_eq!(r.height, 1);
        assert_eq!(r.target, Address(vec![Move::Copy(1), Move::Copy(-1), Move::Copy(0)]));
        assert_eq!(r.rest, Address(vec![Move::Ray(1), Move::Ray(1)]));
        assert_eq!(r.spin, walk_spin(&[0, 1, -1, 0]));
    }

    #[test]
    fn stage_zero_is_typed_by_pattern() {
        let reg = Registry::frozen();
        let tb = build_t(1, 0, Truncation::for_stage(0, 5), &reg).unwrap();
        for i in -4..=4 {
            assert_eq!(tb.bit(tb.central(i).unwrap()), Some(tp(1, i)));
        }
        assert!(tb.amalgam_log.is_empty());
        assert!(verify_tball(&tb).unwrap().passed());
    }
}
