//! Decorated finite trees: the carrier for every object in the crate.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Kind {
    Tree,
    Copy,
    Ray,
    Gadget,
}

/// Which decoration a gadget encodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GadgetRole {
    Label,
    Type,
    Spacer,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GadgetPart {
    Path(u32),
    Hub,
    Leaf(u32),
}

/// One construction move. `Copy(x)` steps inside the current copy of R to the
/// vertex whose value in the covered graph is `x`; `Ray(d)` steps along the
/// current double ray in direction `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Move {
    Ray(i8),
    Copy(i32),
    Gadget(GadgetRole, GadgetPart),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Address(pub Vec<Move>);

impl Address {
    pub fn root() -> Self {
        Address(Vec::new())
    }

    pub fn child(&self, m: Move) -> Self {
        let mut v = self.0.clone();
        v.push(m);
        Address(v)
    }
}

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "@");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|m| match m {
                Move::Ray(d) if *d > 0 => "r+".to_string(),
                Move::Ray(_) => "r-".to_string(),
                Move::Copy(x) => format!("c{x}"),
                Move::Gadget(role, part) => {
                    let r = match role {
                        GadgetRole::Label => "gl",
                        GadgetRole::Type => "gt",
                        GadgetRole::Spacer => "gs",
                    };
                    match part {
                        GadgetPart::Path(i) => format!("{r}p{i}"),
                        GadgetPart::Hub => format!("{r}h"),
                        GadgetPart::Leaf(i) => format!("{r}l{i}"),
                    }
                }
            })
            .collect();
        write!(f, "{}", parts.join("."))
    }
}

impl std::str::FromStr for Address {
    type Err = Error;

    /// Inverse of `Display`.
    fn from_str(s: &str) -> Result<Self> {
        if s == "@" {
            return Ok(Address::root());
        }
        let bad = || Error::Parameter(format!("bad address `{s}`"));
        let mut out = Vec::new();
        for tok in s.split('.') {
            let m = match tok {
                "r+" => Move::Ray(1),
                "r-" => Move::Ray(-1),
                _ if tok.starts_with('c') => Move::Copy(tok[1..].parse().map_err(|_| bad())?),
                _ if tok.starts_with('g') && tok.len() >= 3 => {
                    let role = match &tok[1..2] {
                        "l" => GadgetRole::Label,
                        "t" => GadgetRole::Type,
                        "s" => GadgetRole::Spacer,
                        _ => return Err(bad()),
                    };
                    let rest = &tok[2..];
                    let part = match rest.as_bytes()[0] {
                        b'p' => GadgetPart::Path(rest[1..].parse().map_err(|_| bad())?),
                        b'h' if rest.len() == 1 => GadgetPart::Hub,
                        b'l' => GadgetPart::Leaf(rest[1..].parse().map_err(|_| bad())?),
                        _ => return Err(bad()),
                    };
                    Move::Gadget(role, part)
                }
                _ => return Err(bad()),
            };
            out.push(m);
        }
        Ok(Address(out))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexRecord {
    pub kind: Kind,
    pub label: Option<u32>,
    pub raytype: Option<u8>,
    pub amalgamated: bool,
    pub frontier: bool,
    pub address: Address,
}

impl VertexRecord {
    pub fn gadget(address: Address) -> Self {
        VertexRecord {
            kind: Kind::Gadget,
            label: None,
            raytype: None,
            amalgamated: false,
            frontier: false,
            address,
        }
    }

    pub fn plain(address: Address) -> Self {
        VertexRecord {
            kind: Kind::Tree,
            label: None,
            raytype: None,
            amalgamated: false,
            frontier: false,
            address,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DecoratedTree {
    vertices: Vec<VertexRecord>,
    adj: Vec<Vec<usize>>,
    root: Option<usize>,
}

impl DecoratedTree {
    pub fn new() -> Self {
        Self::default()
    }

    /// Undecorated tree from an edge list on `n` vertices.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut t = DecoratedTree::new();
        for i in 0..n {
            t.add_vertex(VertexRecord::plain(Address(vec![Move::Copy(i as i32)])));
        }
        for &(a, b) in edges {
            t.add_edge(a, b)?;
        }
        t.validate()?;
        Ok(t)
    }

    pub fn add_vertex(&mut self, rec: VertexRecord) -> usize {
        self.vertices.push(rec);
        self.adj.push(Vec::new());
        self.vertices.len() - 1
    }

    pub fn add_edge(&mut self, a: usize, b: usize) -> Result<()> {
        let n = self.vertices.len();
        if a >= n || b >= n {
            return Err(Error::Structure(format!("edge ({a},{b}) references a missing vertex")));
        }
        if a == b {
            return Err(Error::Structure(format!("self-loop at {a}")));
        }
        if self.adj[a].contains(&b) {
            return Err(Error::Structure(format!("parallel edge ({a},{b})")));
        }
        self.adj[a].push(b);
        self.adj[b].push(a);
        Ok(())
    }

    pub fn set_root(&mut self, root: Option<usize>) {
        self.root = root;
    }

    pub fn root(&self) -> Option<usize> {
        self.root
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, v: usize) -> &VertexRecord {
        &self.vertices[v]
    }

    pub fn vertex_mut(&mut self, v: usize) -> &mut VertexRecord {
        &mut self.vertices[v]
    }

    pub fn vertices(&self) -> &[VertexRecord] {
        &self.vertices
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (a, nb) in self.adj.iter().enumerate() {
            for &b in nb {
                if a < b {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].contains(&b)
    }

    pub fn is_core(&self, v: usize) -> bool {
        self.vertices[v].kind != Kind::Gadget
    }

    /// Degree counted inside the non-gadget subgraph.
    pub fn core_degree(&self, v: usize) -> usize {
        self.adj[v].iter().filter(|&&u| self.is_core(u)).count()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.vertices.len();
        if n == 0 {
            return Err(Error::Structure("empty tree".into()));
        }
        if let Some(r) = self.root {
            if r >= n {
                return Err(Error::Structure(format!("root {r} out of range")));
            }
        }
        for (a, nb) in self.adj.iter().enumerate() {
            for (i, &b) in nb.iter().enumerate() {
                if b >= n {
                    return Err(Error::Structure(format!("edge ({a},{b}) references a missing vertex")));
                }
                if b == a {
                    return Err(Error::Structure(format!("self-loop at {a}")));
                }
                if nb[..i].contains(&b) {
                    return Err(Error::Structure(format!("parallel edge ({a},{b})")));
                }
                if !self.adj[b].contains(&a) {
                    return Err(Error::Structure(format!("asymmetric adjacency ({a},{b})")));
                }
            }
        }
        if self.edge_count() != n - 1 {
            return Err(Error::Structure(format!("{} edges on {} vertices", self.edge_count(), n)));
        }
        if self.bfs_distances(0).iter().any(Option::is_none) {
            return Err(Error::Structure("disconnected".into()));
        }
        for (v, rec) in self.vertices.iter().enumerate() {
            let ok = match rec.kind {
                Kind::Tree => rec.label == Some(0),
                Kind::Copy => rec.label.is_some_and(|l| l >= 1),
                Kind::Ray => rec.label == Some(0),
                Kind::Gadget => rec.label.is_none() && rec.raytype.is_none(),
            };
            // Undecorated trees use Kind::Tree with no label.
            let plain = rec.kind == Kind::Tree && rec.label.is_none() && rec.raytype.is_none();
            if !ok && !plain {
                return Err(Error::Structure(format!("vertex {v} decoration inconsistent with kind {:?}", rec.kind)));
            }
        }
        Ok(())
    }

    pub fn bfs_distances(&self, src: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.len()];
        dist[src] = Some(0);
        let mut q = VecDeque::from([src]);
        while let Some(v) = q.pop_front() {
            let d = dist[v].unwrap_or(0);
            for &u in &self.adj[v] {
                if dist[u].is_none() {
                    dist[u] = Some(d + 1);
                    q.push_back(u);
                }
            }
        }
        dist
    }

    /// The unique simple path from `u` to `v`, endpoints included.
    pub fn path(&self, u: usize, v: usize) -> Vec<usize> {
        let mut parent = vec![usize::MAX; self.len()];
        parent[v] = v;
        let mut q = VecDeque::from([v]);
        while let Some(x) = q.pop_front() {
            if x == u {
                break;
            }
            for &y in &self.adj[x] {
                if parent[y] == usize::MAX {
                    parent[y] = x;
                    q.push_back(y);
                }
            }
        }
        let mut out = vec![u];
        let mut x = u;
        while x != v {
            x = parent[x];
            out.push(x);
        }
        out
    }

    /// BFS distance from `v` to the nearest vertex satisfying `pred`, or `None`.
    pub fn dist_to_predicate(&self, v: usize, pred: impl Fn(usize) -> bool) -> Option<usize> {
        self.dist_to_predicate_within(v, |_| true, pred)
    }

    /// As [`Self::dist_to_predicate`], walking only through vertices accepted by `allowed`.
    pub fn dist_to_predicate_within(
        &self,
        v: usize,
        allowed: impl Fn(usize) -> bool,
        pred: impl Fn(usize) -> bool,
    ) -> Option<usize> {
        let mut seen = vec![false; self.len()];
        seen[v] = true;
        let mut q = VecDeque::from([(v, 0usize)]);
        while let Some((x, d)) = q.pop_front() {
            if pred(x) {
                return Some(d);
            }
            for &y in &self.adj[x] {
                if !seen[y] && allowed(y) {
                    seen[y] = true;
                    q.push_back((y, d + 1));
                }
            }
        }
        None
    }

    pub fn address_index(&self) -> HashMap<Address, usize> {
        self.vertices
            .iter()
            .enumerate()
            .map(|(i, r)| (r.address.clone(), i))
            .collect()
    }

    /// Subtree induced on a connected vertex set; returns the tree and old-to-new ids.
    pub fn induced(&self, keep: &[bool]) -> Result<(DecoratedTree, Vec<Option<usize>>)> {
        let mut map = vec![None; self.len()];
        let mut t = DecoratedTree::new();
        for v in 0..self.len() {
            if keep[v] {
                map[v] = Some(t.add_vertex(self.vertices[v].clone()));
            }
        }
        for (a, b) in self.edges() {
            if let (Some(x), Some(y)) = (map[a], map[b]) {
                t.add_edge(x, y)?;
            }
        }
        t.root = self.root.and_then(|r| map[r]);
        t.validate()?;
        Ok((t, map))
    }

    /// Drop the subtree hanging below `v` away from `toward`, including `v`.
    pub fn component_without(&self, v: usize, cut: usize) -> Vec<usize> {
        let mut seen = vec![false; self.len()];
        seen[v] = true;
        seen[cut] = true;
        let mut out = vec![v];
        let mut stack = vec![v];
        while let Some(x) = stack.pop() {
            for &y in &self.adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                    stack.push(y);
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&TreeJson::from(self))?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let j: TreeJson = serde_json::from_str(s)?;
        j.try_into()
    }

    /// DOT text; arcs are oriented away from the root (or vertex 0).
    pub fn to_dot(&self, name: &str) -> String {
        let mut s = format!("digraph \"{name}\" {{\n  node [shape=circle, fontsize=8];\n");
        for (i, r) in self.vertices.iter().enumerate() {
            let mut attrs = vec![format!("label=\"{}\"", dot_label(r))];
            let colour = match r.kind {
                Kind::Tree => "black",
                Kind::Copy => "steelblue",
                Kind::Ray => "firebrick",
                Kind::Gadget => "gray60",
            };
            attrs.push(format!("color={colour}"));
            if r.amalgamated {
                attrs.push("penwidth=2.5".into());
            }
            if r.frontier {
                attrs.push("style=dashed".into());
            }
            attrs.push(format!("addr=\"{}\"", r.address));
            s.push_str(&format!("  v{i} [{}];\n", attrs.join(", ")));
        }
        let start = self.root.unwrap_or(0);
        let dist = self.bfs_distances(start);
        for (a, b) in self.edges() {
            let (x, y) = if dist[a] <= dist[b] { (a, b) } else { (b, a) };
            s.push_str(&format!("  v{x} -> v{y};\n"));
        }
        s.push_str("}\n");
        s
    }
}

fn dot_label(r: &VertexRecord) -> String {
    match (r.kind, r.label, r.raytype) {
        (Kind::Gadget, _, _) => String::new(),
        (_, Some(l), Some(t)) => format!("{l}/t{t}"),
        (_, Some(l), None) => format!("{l}"),
        _ => String::new(),
    }
}

#[derive(Serialize, Deserialize)]
struct TreeJson {
    vertices: Vec<VertexRecord>,
    edges: Vec<(usize, usize)>,
    root: Option<usize>,
}

impl From<&DecoratedTree> for TreeJson {
    fn from(t: &DecoratedTree) -> Self {
        TreeJson {
            vertices: t.vertices.clone(),
            edges: t.edges(),
            root: t.root,
        }
    }
}

impl TryFrom<TreeJson> for DecoratedTree {
    type Error = Error;

    fn try_from(j: TreeJson) -> Result<Self> {
        let mut t = DecoratedTree::new();
        for v in j.vertices {
            t.add_vertex(v);
        }
        for (a, b) in j.edges {
            t.add_edge(a, b)?;
        }
        t.root = j.root;
        t.validate()?;
        Ok(t)
    }
}

/// Parent/depth arrays for repeated path queries on a large tree.
#[derive(Clone, Debug)]
pub struct PathOracle {
    parent: Vec<usize>,
    depth: Vec<usize>,
}

impl PathOracle {
    pub fn new(t: &DecoratedTree, root: usize) -> Self {
        let n = t.len();
        let mut parent = vec![usize::MAX; n];
        let mut depth = vec![0; n];
        parent[root] = root;
        let mut q = VecDeque::from([root]);
        while let Some(v) = q.pop_front() {
            for &u in t.neighbors(v) {
                if parent[u] == usize::MAX {
                    parent[u] = v;
                    depth[u] = depth[v] + 1;
                    q.push_back(u);
                }
            }
        }
        PathOracle { parent, depth }
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        (self.parent[v] != v).then_some(self.parent[v])
    }

    pub fn depth(&self, v: usize) -> usize {
        self.depth[v]
    }

    pub fn path(&self, u: usize, v: usize) -> Vec<usize> {
        let (mut a, mut b) = (u, v);
        let mut front = Vec::new();
        let mut back = Vec::new();
        while self.depth[a] > self.depth[b] {
            front.push(a);
            a = self.parent[a];
        }
        while self.depth[b] > self.depth[a] {
            back.push(b);
            b = self.parent[b];
        }
        while a != b {
            front.push(a);
            back.push(b);
            a = self.parent[a];
            b = self.parent[b];
        }
        front.push(a);
        front.extend(back.into_iter().rev());
        front
    }

    pub fn dist(&self, u: usize, v: usize) -> usize {
        self.path(u, v).len() - 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path5() -> DecoratedTree {
        DecoratedTree::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap()
    }

    #[test]
    fn path_to_self_is_singleton() {
        let t = path5();
        assert_eq!(t.path(2, 2), vec![2]);
    }

    #[test]
    fn path_across_five_path() {
        let t = path5();
        assert_eq!(t.path(0, 4), vec![0, 1, 2, 3, 4]);
        let o = PathOracle::new(&t, 2);
        assert_eq!(o.path(0, 4), vec![0, 1, 2, 3, 4]);
        assert_eq!(o.path(4, 3), vec![4, 3]);
    }

    #[test]
    fn rejects_cycles_and_loops() {
        assert!(DecoratedTree::from_edges(3, &[(0, 1), (1, 2), (2, 0)]).is_err());
        let mut t = DecoratedTree::from_edges(2, &[(0, 1)]).unwrap();
        assert!(t.add_edge(1, 1).is_err());
        assert!(t.add_edge(0, 1).is_err());
        assert!(t.add_edge(0, 7).is_err());
    }

    #[test]
    fn dist_to_predicate_finds_nearest() {
        let t = path5();
        assert_eq!(t.dist_to_predicate(0, |v| v == 3), Some(3));
        assert_eq!(t.dist_to_predicate(0, |_| false), None);
    }

    #[test]
    fn json_round_trip() {
        let mut t = path5();
        t.set_root(Some(1));
        let back = DecoratedTree::from_json(&t.to_json().unwrap()).unwrap();
        assert_eq!(back, t);
    }
}
