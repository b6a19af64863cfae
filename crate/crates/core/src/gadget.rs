//! The finite rooted trees PK(n, m): a path u_0 … u_n whose end is joined to
//! the hub of a star with m leaves. They turn labels and types into graph
//! structure.

use serde::{Deserialize, Serialize};

use crate::embed::{find_embedding, FrontierPolicy};
use crate::error::{Error, Result};
use crate::report::Report;
use crate::tree::{Address, DecoratedTree, GadgetPart, GadgetRole, Move, VertexRecord};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Purpose {
    Label(u32),
    Type0,
    Type1,
    PosetOdd,
    /// Any (pathlen, fan), used by the embedding tables.
    Plain,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GadgetSpec {
    pub pathlen: u32,
    pub fan: u32,
    pub purpose: Purpose,
}

impl GadgetSpec {
    pub fn label(l: u32) -> Self {
        GadgetSpec {
            pathlen: 2 * l + 6,
            fan: 2,
            purpose: Purpose::Label(l),
        }
    }

    pub fn for_type(bit: u8) -> Self {
        if bit == 0 {
            GadgetSpec { pathlen: 2, fan: 2, purpose: Purpose::Type0 }
        } else {
            GadgetSpec { pathlen: 2, fan: 3, purpose: Purpose::Type1 }
        }
    }

    pub fn poset_odd() -> Self {
        GadgetSpec { pathlen: 4, fan: 2, purpose: Purpose::PosetOdd }
    }

    pub fn plain(pathlen: u32, fan: u32) -> Self {
        GadgetSpec { pathlen, fan, purpose: Purpose::Plain }
    }

    pub fn role(&self) -> GadgetRole {
        match self.purpose {
            Purpose::Label(_) | Purpose::Plain => GadgetRole::Label,
            Purpose::Type0 | Purpose::Type1 => GadgetRole::Type,
            Purpose::PosetOdd => GadgetRole::Spacer,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.pathlen == 0 {
            return Err(Error::Parameter("gadget path length must be at least 1".into()));
        }
        if self.fan == 0 {
            return Err(Error::Parameter("gadget fan must be at least 1".into()));
        }
        let expected = match self.purpose {
            Purpose::Label(l) => Some((2 * l + 6, 2)),
            Purpose::Type0 => Some((2, 2)),
            Purpose::Type1 => Some((2, 3)),
            Purpose::PosetOdd => Some((4, 2)),
            Purpose::Plain => None,
        };
        match expected {
            Some(e) if e != (self.pathlen, self.fan) => Err(Error::Parameter(format!(
                "{:?} requires PK{:?}, got PK({},{})",
                self.purpose, e, self.pathlen, self.fan
            ))),
            _ => Ok(()),
        }
    }

    /// Vertices added beyond the root when attached.
    pub fn extra_vertices(&self) -> usize {
        (self.pathlen + self.fan + 1) as usize
    }
}

/// Standalone rooted PK(n, m), root u_0, vertices numbered u_0..u_n, hub, leaves.
pub fn build_pk(spec: GadgetSpec) -> Result<DecoratedTree> {
    spec.validate()?;
    let mut t = DecoratedTree::new();
    let role = spec.role();
    let root = t.add_vertex(VertexRecord::gadget(Address(vec![Move::Gadget(role, GadgetPart::Path(0))])));
    attach_from(&mut t, root, &Address::root(), spec);
    t.set_root(Some(root));
    Ok(t)
}

/// Hang PK(spec) from `at`, identifying `at` with u_0. Returns the new ids.
pub fn attach(t: &mut DecoratedTree, at: usize, spec: GadgetSpec) -> Result<Vec<usize>> {
    spec.validate()?;
    let base = t.vertex(at).address.clone();
    Ok(attach_from(t, at, &base, spec))
}

fn attach_from(t: &mut DecoratedTree, at: usize, base: &Address, spec: GadgetSpec) -> Vec<usize> {
    let role = spec.role();
    let mut out = Vec::with_capacity(spec.extra_vertices());
    let mut prev = at;
    let mk = |part| VertexRecord::gadget(base.child(Move::Gadget(role, part)));
    for i in 1..=spec.pathlen {
        let v = t.add_vertex(mk(GadgetPart::Path(i)));
        t.add_edge(prev, v).expect("fresh vertex");
        out.push(v);
        prev = v;
    }
    let hub = t.add_vertex(mk(GadgetPart::Hub));
    t.add_edge(prev, hub).expect("fresh vertex");
    out.push(hub);
    for j in 0..spec.fan {
        let l = t.add_vertex(mk(GadgetPart::Leaf(j)));
        t.add_edge(hub, l).expect("fresh vertex");
        out.push(l);
    }
    out
}

/// Closed-form rooted embeddability of PK gadgets.
pub fn pk_embeds(a: &GadgetSpec, b: &GadgetSpec) -> bool {
    a.pathlen == b.pathlen && a.fan <= b.fan
}

/// The closed form against the general engine on every pair with
/// pathlen ≤ `max_path` and fan ≤ `max_fan`.
pub fn gadget_table(max_path: u32, max_fan: u32) -> Result<Report> {
    let specs: Vec<GadgetSpec> = (1..=max_path)
        .flat_map(|n| (1..=max_fan).map(move |m| GadgetSpec::plain(n, m)))
        .collect();
    let trees: Vec<DecoratedTree> = specs.iter().map(|&s| build_pk(s)).collect::<Result<_>>()?;
    let mut rep = Report::new();
    let mut disagree_fan1 = 0;
    for (a, ta) in specs.iter().zip(&trees) {
        for (b, tb) in specs.iter().zip(&trees) {
            let engine = find_embedding(ta, tb, true, FrontierPolicy::Closed).is_some();
            let closed = pk_embeds(a, b);
            if engine != closed && a.fan == 1 {
                disagree_fan1 += 1;
            }
            rep.expect(engine == closed, "gadget-table", || vec![format!("PK({},{})", a.pathlen, a.fan), format!("PK({},{})", b.pathlen, b.fan)], || {
                format!("engine {engine}, closed form {closed}")
            });
        }
    }
    rep.note("disagreements-with-fan-1-guest", disagree_fan1);
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pk22_shape() {
        let t = build_pk(GadgetSpec::for_type(0)).unwrap();
        assert_eq!(t.len(), 6);
        assert_eq!(t.degree(t.root().unwrap()), 1);
        let hub = (0..t.len()).find(|&v| t.degree(v) == 3).unwrap();
        assert_eq!(t.vertex(hub).address.0.last(), Some(&Move::Gadget(GadgetRole::Type, GadgetPart::Hub)));
    }

    #[test]
    fn label_zero_gadget_has_ten_vertices() {
        assert_eq!(build_pk(GadgetSpec::label(0)).unwrap().len(), 10);
    }

    #[test]
    fn pk11_is_a_path() {
        let t = build_pk(GadgetSpec::plain(1, 1)).unwrap();
        assert_eq!(t.len(), 4);
        assert!((0..4).all(|v| t.degree(v) <= 2));
    }

    #[test]
    fn zero_fan_rejected() {
        assert!(build_pk(GadgetSpec::plain(2, 0)).is_err());
        assert!(GadgetSpec { pathlen: 2, fan: 3, purpose: Purpose::Type0 }.validate().is_err());
    }

    #[test]
    fn type_gadgets_embed_one_way() {
        let t0 = build_pk(GadgetSpec::for_type(0)).unwrap();
        let t1 = build_pk(GadgetSpec::for_type(1)).unwrap();
        assert!(find_embedding(&t0, &t1, true, FrontierPolicy::Closed).is_some());
        assert!(find_embedding(&t1, &t0, true, FrontierPolicy::Closed).is_none());
        assert!(pk_embeds(&GadgetSpec::for_type(0), &GadgetSpec::for_type(1)));
        assert!(!pk_embeds(&GadgetSpec::for_type(1), &GadgetSpec::for_type(0)));
    }

    #[test]
    fn spacer_is_incomparable_with_type_gadgets() {
        let odd = build_pk(GadgetSpec::poset_odd()).unwrap();
        for bit in 0..2 {
            let g = build_pk(GadgetSpec::for_type(bit)).unwrap();
            assert!(find_embedding(&odd, &g, true, FrontierPolicy::Closed).is_none());
            assert!(find_embedding(&g, &odd, true, FrontierPolicy::Closed).is_none());
        }
    }
}
