//! Truncations of the spine S^p(k) and the global calculus across copies.
//!
//! The ball is generated outward from the centre z, which is index 0 of the
//! central ray and the root of the central copy. Every path from z enters a
//! copy at its root, so a copy is grown as a walk tree from that root. A
//! non-root tree vertex y with ghth_z(y) ≤ k becomes index 0 of a fresh
//! double ray; each other ray vertex roots a fresh copy.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gadget::{attach, GadgetSpec};
use crate::report::Report;
use crate::rtree::{col_on, g_neighbors, local_sign, local_spin, CopyFrame};
use crate::tree::{Address, DecoratedTree, GadgetPart, Kind, Move, PathOracle, VertexRecord};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Truncation {
    pub radius: usize,
    pub maxlabel: u32,
}

impl Truncation {
    pub fn for_stage(k: u32, radius: usize) -> Self {
        Truncation { radius, maxlabel: k + 1 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoreMeta {
    pub copy: usize,
    pub value: i32,
    pub copy_parent: Option<usize>,
    /// (ray id, index) for ray vertices.
    pub ray: Option<(usize, i64)>,
    pub parent: Option<usize>,
    pub depth: usize,
    /// ghth_z of this vertex.
    pub ghth: u32,
    /// Number of amalgamation rounds needed to create this vertex.
    pub round: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RayInfo {
    pub zero: usize,
    pub address: Address,
}

#[derive(Clone, Debug)]
pub struct SpineBall {
    pub tree: DecoratedTree,
    pub stage: u32,
    pub centre: usize,
    pub truncation: Truncation,
    /// Core vertices occupy ids `0..core`, in BFS order from the centre.
    pub core: usize,
    pub meta: Vec<CoreMeta>,
    /// Root vertex of each copy.
    pub copies: Vec<usize>,
    pub rays: Vec<RayInfo>,
    /// Amalgamation rounds until the truncation stops changing.
    pub rounds: usize,
    oracle: PathOracle,
    index: HashMap<Address, usize>,
}

impl CopyFrame for SpineBall {
    fn tree(&self) -> &DecoratedTree {
        &self.tree
    }
    fn label(&self, v: usize) -> u32 {
        self.meta[v].value.unsigned_abs()
    }
    fn value(&self, v: usize) -> i32 {
        self.meta[v].value
    }
    fn copy_parent(&self, v: usize) -> Option<usize> {
        self.meta[v].copy_parent
    }
    fn copy_id(&self, v: usize) -> usize {
        self.meta[v].copy
    }
}

enum Step {
    Ray(usize, i64),
    Copy(i32),
}

pub fn build_spine(k: u32, truncation: Truncation) -> Result<SpineBall> {
    if truncation.radius == 0 {
        return Err(Error::Parameter("radius must be positive".into()));
    }
    let mut tree = DecoratedTree::new();
    let mut meta: Vec<CoreMeta> = Vec::new();
    let mut copies = vec![0usize];
    let mut rays = vec![RayInfo { zero: 0, address: Address::root() }];
    tree.add_vertex(ray_record(Address::root()));
    meta.push(CoreMeta {
        copy: 0,
        value: 0,
        copy_parent: None,
        ray: Some((0, 0)),
        parent: None,
        depth: 0,
        ghth: 0,
        round: 0,
    });
    let mut q = VecDeque::from([0usize]);
    while let Some(v) = q.pop_front() {
        let m = meta[v].clone();
        if m.depth >= truncation.radius || m.value.unsigned_abs() > truncation.maxlabel {
            tree.vertex_mut(v).frontier = true;
            continue;
        }
        let mut steps = Vec::new();
        if let Some((rid, i)) = m.ray {
            if i == 0 {
                steps.push(Step::Ray(rid, 1));
                steps.push(Step::Ray(rid, -1));
            } else {
                steps.push(Step::Ray(rid, i + i.signum()));
            }
        }
        let back = m.copy_parent.map(|p| meta[p].value);
        for y in g_neighbors(m.value) {
            if Some(y) != back {
                steps.push(Step::Copy(y));
            }
        }
        for st in steps {
            let base = &tree.vertex(v).address;
            let (rec, cm) = match st {
                Step::Ray(rid, j) => {
                    let addr = base.child(Move::Ray(j.signum() as i8));
                    copies.push(tree.len());
                    let cm = CoreMeta {
                        copy: copies.len() - 1,
                        value: 0,
                        copy_parent: None,
                        ray: Some((rid, j)),
                        parent: Some(v),
                        depth: m.depth + 1,
                        ghth: m.ghth,
                        round: m.round,
                    };
                    (ray_record(addr), cm)
                }
                Step::Copy(y) => {
                    let addr = base.child(Move::Copy(y));
                    let ghth = m.ghth.max(y.unsigned_abs());
                    let mut cm = CoreMeta {
                        copy: m.copy,
                        value: y,
                        copy_parent: Some(v),
                        ray: None,
                        parent: Some(v),
                        depth: m.depth + 1,
                        ghth,
                        round: m.round,
                    };
                    let rec = if y == 0 && ghth <= k {
                        rays.push(RayInfo { zero: tree.len(), address: addr.clone() });
                        cm.ray = Some((rays.len() - 1, 0));
                        cm.round = m.round + 1;
                        ray_record(addr)
                    } else {
                        VertexRecord {
                            kind: if y == 0 { Kind::Tree } else { Kind::Copy },
                            label: Some(y.unsigned_abs()),
                            raytype: None,
                            amalgamated: false,
                            frontier: false,
                            address: addr,
                        }
                    };
                    (rec, cm)
                }
            };
            let c = tree.add_vertex(rec);
            tree.add_edge(v, c)?;
            meta.push(cm);
            q.push_back(c);
        }
    }
    let core = tree.len();
    for (v, m) in meta.iter().enumerate().take(core) {
        attach(&mut tree, v, GadgetSpec::label(m.value.unsigned_abs()))?;
    }
    tree.set_root(Some(0));
    let oracle = PathOracle::new(&tree, 0);
    let index = tree.address_index();
    let rounds = meta.iter().map(|m| m.round).max().unwrap_or(0) + 1;
    Ok(SpineBall {
        tree,
        stage: k,
        centre: 0,
        truncation,
        core,
        meta,
        copies,
        rays,
        rounds,
        oracle,
        index,
    })
}

fn ray_record(address: Address) -> VertexRecord {
    VertexRecord {
        kind: Kind::Ray,
        label: Some(0),
        raytype: None,
        amalgamated: true,
        frontier: false,
        address,
    }
}

impl SpineBall {
    pub fn is_interior(&self, v: usize) -> bool {
        v < self.core && !self.tree.vertex(v).frontier
    }

    pub fn is_tree_vertex(&self, v: usize) -> bool {
        v < self.core && self.meta[v].value == 0
    }

    pub fn is_amalgamated(&self, v: usize) -> bool {
        v < self.core && self.meta[v].ray.is_some()
    }

    pub fn interior_tree_vertices(&self) -> Vec<usize> {
        (0..self.core)
            .filter(|&v| self.is_interior(v) && self.meta[v].value == 0)
            .collect()
    }

    pub fn lookup(&self, a: &Address) -> Option<usize> {
        self.index.get(a).copied()
    }

    pub fn addr(&self, v: usize) -> String {
        self.tree.vertex(v).address.to_string()
    }

    pub fn path(&self, u: usize, v: usize) -> Vec<usize> {
        self.oracle.path(u, v)
    }

    pub fn dist(&self, u: usize, v: usize) -> usize {
        self.oracle.dist(u, v)
    }

    pub fn depth(&self, v: usize) -> usize {
        self.oracle.depth(v)
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.oracle.parent(v)
    }

    /// Every vertex within `r` of `v` is interior or a gadget of an interior vertex.
    pub fn ball_is_interior(&self, v: usize, r: usize) -> bool {
        self.meta[v].depth + r < self.truncation.radius
    }

    /// First vertex of P_{v,w} inside the copy of `w`.
    pub fn entry(&self, v: usize, w: usize) -> usize {
        let c = self.meta[w].copy;
        *self
            .path(v, w)
            .iter()
            .find(|&&x| self.meta[x].copy == c)
            .expect("w lies on its own path")
    }

    pub fn ghth(&self, v: usize, w: usize) -> Result<u32> {
        self.require_core(v)?;
        self.require_core(w)?;
        Ok(self.path(v, w).iter().map(|&x| self.label(x)).max().unwrap_or(0))
    }

    pub fn gcol(&self, v: usize, w: usize) -> Result<u32> {
        self.require_tree(v)?;
        self.require_tree(w)?;
        let e = self.entry(v, w);
        let p = self.path(e, w);
        col_on(self, &p).ok_or_else(|| Error::Structure(format!("no consecutive pair from {} to {}", self.addr(e), self.addr(w))))
    }

    pub fn gsign(&self, v: usize, w: usize) -> Result<i8> {
        self.require_tree(v)?;
        self.require_tree(w)?;
        let e = self.entry(v, w);
        if e == w {
            return Err(Error::ExcludedDomain(self.addr(w)));
        }
        local_sign(self, e, w)
    }

    pub fn gspin(&self, v: usize, w: usize) -> Result<i8> {
        self.require_tree(v)?;
        self.require_tree(w)?;
        let e = self.entry(v, w);
        if e == w {
            return Err(Error::ExcludedDomain(self.addr(w)));
        }
        local_spin(self, e, w)
    }

    fn require_core(&self, v: usize) -> Result<()> {
        if v >= self.core {
            return Err(Error::Structure(format!("{} is a gadget vertex", self.addr(v))));
        }
        Ok(())
    }

    fn require_tree(&self, v: usize) -> Result<()> {
        self.require_core(v)?;
        if self.meta[v].value != 0 {
            return Err(Error::Structure(format!("{} is not a tree vertex", self.addr(v))));
        }
        Ok(())
    }

    /// Whether `w` hangs off P_{u,v} along strictly decreasing labels.
    pub fn on_decreasing_branch(&self, on_path: &HashSet<usize>, w: usize, toward: usize) -> bool {
        let p = self.path(w, toward);
        let k = p.iter().position(|x| on_path.contains(x)).expect("path reaches P");
        (0..k).all(|i| self.label(p[i]) < self.label(p[i + 1]))
    }

    /// Core subtree without gadgets.
    pub fn core_tree(&self) -> DecoratedTree {
        let keep: Vec<bool> = (0..self.tree.len()).map(|v| v < self.core).collect();
        self.tree.induced(&keep).expect("core is connected").0
    }
}

/// Lemmas globcolpreserv and globalspinpreserving plus the exact domain of
/// gspin, for each sampled pair against every interior tree vertex.
pub fn verify_global_lemmas(sb: &SpineBall, sample: &[(usize, usize)]) -> Result<Report> {
    let mut rep = Report::new();
    let tv = sb.interior_tree_vertices();
    let mut col_exceptions = 0usize;
    for &(u, v) in sample {
        let puv: HashSet<usize> = sb.path(u, v).into_iter().collect();
        for &w in &tv {
            let (cu, cv) = (sb.gcol(u, w)?, sb.gcol(v, w)?);
            rep.case();
            if cu != cv {
                col_exceptions += 1;
                if !sb.on_decreasing_branch(&puv, w, u) {
                    rep.fail("globcolpreserv", vec![sb.addr(u), sb.addr(v), sb.addr(w)], format!("{cu} vs {cv}"));
                }
            }
            let (su, sv) = (sb.gspin(u, w), sb.gspin(v, w));
            for (b, s) in [(u, &su), (v, &sv)] {
                let excluded = sb.entry(b, w) == w;
                rep.expect(
                    excluded == matches!(s, Err(Error::ExcludedDomain(_))),
                    "gspin-domain",
                    || vec![sb.addr(b), sb.addr(w)],
                    || format!("{s:?}"),
                );
            }
            if let (Ok(a), Ok(b)) = (su, sv) {
                if !puv.contains(&w) {
                    rep.expect(a == b, "globalspinpreserving", || vec![sb.addr(u), sb.addr(v), sb.addr(w)], || format!("{a} vs {b}"));
                }
            }
        }
    }
    rep.note("tree-vertices", tv.len());
    rep.note("colour-exceptions", col_exceptions);
    Ok(rep)
}

/// Interior degrees by class, with every class pinned to its expected degree.
pub fn degree_census(t: &DecoratedTree, interior: impl Fn(usize) -> bool) -> Report {
    let mut rep = Report::new();
    let mut seen: Vec<(String, usize, usize)> = Vec::new();
    for v in 0..t.len() {
        let r = t.vertex(v);
        let (class, want) = match r.kind {
            Kind::Ray => ("ray", Some(if r.raytype.is_some() { 6 } else { 5 })),
            Kind::Tree => ("tree", Some(3)),
            Kind::Copy => ("copy", Some(4)),
            Kind::Gadget => match r.address.0.last() {
                Some(Move::Gadget(_, GadgetPart::Leaf(_))) => ("gadget-leaf", Some(1)),
                Some(Move::Gadget(_, GadgetPart::Path(_))) => ("gadget-path", Some(2)),
                _ => ("gadget-hub", None),
            },
        };
        let owner_interior = match r.kind {
            Kind::Gadget => true,
            _ => interior(v),
        };
        if !owner_interior {
            continue;
        }
        let d = t.degree(v);
        match seen.iter_mut().find(|(c, dd, _)| c == class && *dd == d) {
            Some(e) => e.2 += 1,
            None => seen.push((class.to_string(), d, 1)),
        }
        let ok = match want {
            Some(w) => d == w,
            None => d == 3 || d == 4,
        };
        rep.expect(ok, "degree-census", || vec![r.address.to_string()], || format!("{class} of degree {d}"));
    }
    seen.sort();
    for (c, d, n) in seen {
        rep.note(&format!("{c}:{d}"), n);
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stage_zero_has_only_the_central_ray() {
        let sb = build_spine(0, Truncation::for_stage(0, 5)).unwrap();
        assert_eq!(sb.rays.len(), 1);
        for v in 0..sb.core {
            if sb.is_interior(v) && sb.meta[v].ray.is_some() {
                assert_eq!(sb.meta[v].copy_parent, None, "ray vertices root copies");
            }
        }
        sb.tree.validate().unwrap();
    }

    #[test]
    fn stage_one_amalgamates_height_one_only() {
        let sb = build_spine(1, Truncation::for_stage(1, 6)).unwrap();
        let a = Address(vec![Move::Copy(1), Move::Copy(-1), Move::Copy(0)]);
        let v = sb.lookup(&a).unwrap();
        assert_eq!(sb.ghth(0, v).unwrap(), 1);
        assert!(sb.is_amalgamated(v));
        assert_eq!(sb.tree.core_degree(v), 4);
        let b = Address(vec![Move::Copy(1), Move::Copy(2), Move::Copy(-2), Move::Copy(-1), Move::Copy(0)]);
        let w = sb.lookup(&b).unwrap();
        assert_eq!(sb.ghth(0, w).unwrap(), 2);
        assert!(!sb.is_amalgamated(w));
    }

    #[test]
    fn same_copy_functions_are_local() {
        let sb = build_spine(1, Truncation::for_stage(1, 6)).unwrap();
        let v = sb.lookup(&Address(vec![Move::Copy(1), Move::Copy(-1), Move::Copy(0)])).unwrap();
        assert_eq!(sb.entry(0, v), 0);
        assert_eq!(sb.gcol(0, v).unwrap(), 1);
        assert_eq!(sb.gspin(0, 0), Err(Error::ExcludedDomain("@".into())));
        let r1 = sb.lookup(&Address(vec![Move::Ray(1)])).unwrap();
        assert_eq!(sb.ghth(0, r1).unwrap(), 0);
        assert_eq!(sb.entry(0, r1), r1);
        assert!(matches!(sb.gspin(0, r1), Err(Error::ExcludedDomain(_))));
    }
}
