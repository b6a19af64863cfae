//! Windows of typed double rays D_s and the poset variant D'_s.

use serde::{Deserialize, Serialize};

use crate::embed::{compatible, find_embedding, find_embedding_anchored, EmbeddingMap, FrontierPolicy};
use crate::error::{Error, Result};
use crate::gadget::{attach, build_pk, GadgetSpec};
use crate::tree::{Address, DecoratedTree, Kind, Move, VertexRecord};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    Standard,
    /// Types on even indices only; odd indices carry PK(4,2).
    Poset,
}

/// tp_s(j).
pub fn tp(s: u32, j: i64) -> u8 {
    if s == 0 {
        return u8::from(j > 0);
    }
    if j < 0 || (1..=s as i64).contains(&j) {
        0
    } else {
        1
    }
}

/// Address of v_i relative to the ray's index-0 vertex.
pub fn ray_address(base: &Address, i: i64) -> Address {
    let mut a = base.clone();
    let d = if i >= 0 { 1 } else { -1 };
    for _ in 0..i.unsigned_abs() {
        a.0.push(Move::Ray(d));
    }
    a
}

#[derive(Clone, Debug)]
pub struct RayWindow {
    pub tree: DecoratedTree,
    pub lo: i64,
    pub hi: i64,
    /// Bit per index `lo..=hi`; `None` on poset spacer vertices.
    pub assignment: Vec<Option<u8>>,
    pub centre_index: i64,
    pub variant: Variant,
}

impl RayWindow {
    /// Vertex id of v_i.
    pub fn vertex(&self, i: i64) -> usize {
        assert!(self.lo <= i && i <= self.hi, "index {i} outside window");
        (i - self.lo) as usize
    }

    pub fn bit(&self, i: i64) -> Option<u8> {
        self.assignment[(i - self.lo) as usize]
    }

    pub fn centre(&self) -> usize {
        self.vertex(self.centre_index)
    }
}

/// Window of D_s on `lo..=hi` with gadgets attached per the variant.
pub fn build_ray(s: u32, lo: i64, hi: i64, variant: Variant) -> Result<RayWindow> {
    build_ray_with(lo, hi, variant, true, |j| tp(s, j))
}

/// Window of an arbitrary assignment `bit(j)`.
pub fn build_ray_with(
    lo: i64,
    hi: i64,
    variant: Variant,
    gadgets: bool,
    bit: impl Fn(i64) -> u8,
) -> Result<RayWindow> {
    if lo > 0 || hi < 0 {
        return Err(Error::Parameter(format!("window [{lo},{hi}] must contain 0")));
    }
    let mut t = DecoratedTree::new();
    let mut assignment = Vec::new();
    for i in lo..=hi {
        let b = match variant {
            Variant::Standard => Some(bit(i)),
            Variant::Poset if i.rem_euclid(2) == 0 => Some(bit(i.div_euclid(2))),
            Variant::Poset => None,
        };
        assignment.push(b);
        let v = t.add_vertex(VertexRecord {
            kind: Kind::Ray,
            label: Some(0),
            raytype: b,
            amalgamated: false,
            frontier: i == lo || i == hi,
            address: ray_address(&Address::root(), i),
        });
        if i > lo {
            t.add_edge(v - 1, v)?;
        }
    }
    if gadgets {
        for i in lo..=hi {
            let v = (i - lo) as usize;
            let spec = match assignment[v] {
                Some(b) => GadgetSpec::for_type(b),
                None => GadgetSpec::poset_odd(),
            };
            attach(&mut t, v, spec)?;
        }
    }
    let centre = (-lo) as usize;
    t.set_root(Some(centre));
    Ok(RayWindow {
        tree: t,
        lo,
        hi,
        assignment,
        centre_index: 0,
        variant,
    })
}

/// Whether the shift i ↦ i + t is type monotone from tp_s to tp_{s'} on [-h, h].
pub fn shift_valid(s: u32, s2: u32, t: i64, h: i64) -> bool {
    (-h..=h).all(|i| tp(s, i) <= tp(s2, i + t))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftReport {
    pub s: u32,
    pub s2: u32,
    pub halfwidth: i64,
    /// The centred shift (t = 0) is valid.
    pub centred: bool,
    /// All valid direction-preserving shifts with |t| ≤ 2·halfwidth.
    pub valid_shifts: Vec<i64>,
}

impl ShiftReport {
    pub fn maps_centre_to_centre(&self) -> bool {
        self.valid_shifts.contains(&0)
    }
}

/// Bit-level centred shift test plus an exhaustive sweep over shifts.
pub fn centred_shift_embeds(s: u32, s2: u32, halfwidth: i64) -> Result<ShiftReport> {
    let need = (s + s2 + 2) as i64;
    if halfwidth < need {
        return Err(Error::Parameter(format!("halfwidth {halfwidth} below {need}")));
    }
    let valid_shifts: Vec<i64> = (-2 * halfwidth..=2 * halfwidth)
        .filter(|&t| shift_valid(s, s2, t, halfwidth))
        .collect();
    Ok(ShiftReport {
        s,
        s2,
        halfwidth,
        centred: valid_shifts.contains(&0),
        valid_shifts,
    })
}

/// Gadget-level shift: map v_i to v_{i+t} and each type gadget through a
/// rooted embedding of its own, then validate the composed map. Ray
/// vertices carry no type bit here, so only the gadgets decide.
pub fn gadget_shift_embeds(s: u32, s2: u32, t: i64, h: i64) -> Result<Option<EmbeddingMap>> {
    let gw = build_ray(s, -h, h, Variant::Standard)?;
    let hw = build_ray(s2, -h + t.min(0), h + t.max(0), Variant::Standard)?;
    let (guest, host) = (strip_types(&gw), strip_types(&hw));
    let mut map = EmbeddingMap::empty(guest.len(), false);
    for i in -h..=h {
        let (gv, hv) = (gw.vertex(i), hw.vertex(i + t));
        let ga = build_pk(GadgetSpec::for_type(gw.bit(i).expect("standard")))?;
        let ha = build_pk(GadgetSpec::for_type(hw.bit(i + t).expect("standard")))?;
        let Some(m) = find_embedding(&ga, &ha, true, FrontierPolicy::Closed) else {
            return Ok(None);
        };
        // gadget vertices of v_i follow the ray vertices in attachment order
        let gs = gadget_ids(&guest, gv);
        let hs = gadget_ids(&host, hv);
        map.pairs[gv] = Some(hv);
        for (k, &g) in gs.iter().enumerate() {
            let img = m.get(k + 1).expect("total on a closed gadget");
            map.pairs[g] = Some(hs[img - 1]);
        }
    }
    map.validate(&guest, &host)?;
    Ok(Some(map))
}

/// Engine-level check of whether z_s can land on z_{s'}; type bits stripped.
pub fn gadget_centred_embeds(s: u32, s2: u32, h: i64) -> Result<bool> {
    let guest = strip_types(&build_ray(s, -h, h, Variant::Standard)?);
    let hw = build_ray(s2, -2 * h, 2 * h, Variant::Standard)?;
    let host = strip_types(&hw);
    Ok(find_embedding_anchored(&guest, h as usize, &host, hw.centre(), FrontierPolicy::Closed).is_some())
}

fn gadget_ids(t: &DecoratedTree, root: usize) -> Vec<usize> {
    // u_1 .. u_n, hub, leaves: the attachment order of `attach`
    let mut out = Vec::new();
    let prefix = &t.vertex(root).address;
    for v in 0..t.len() {
        let a = &t.vertex(v).address;
        if t.vertex(v).kind == Kind::Gadget && a.0.len() == prefix.0.len() + 1 && a.0.starts_with(&prefix.0) {
            out.push(v);
        }
    }
    out
}

pub fn strip_types(w: &RayWindow) -> DecoratedTree {
    let mut t = w.tree.clone();
    for v in 0..t.len() {
        t.vertex_mut(v).raytype = None;
    }
    t
}

/// First index i in the window with bit(i) = 1 and bit(i+1) = 0.
pub fn first_one_then_zero(w: &RayWindow) -> Option<i64> {
    (w.lo..w.hi).find(|&i| w.bit(i) == Some(1) && w.bit(i + 1) == Some(0))
}

/// Bit-level type rule agrees with rooted embeddability of the gadgets.
pub fn type_rule_matches_gadgets() -> Result<bool> {
    for a in 0..2u8 {
        for b in 0..2u8 {
            let ga = build_pk(GadgetSpec::for_type(a))?;
            let gb = build_pk(GadgetSpec::for_type(b))?;
            let engine = find_embedding(&ga, &gb, true, FrontierPolicy::Closed).is_some();
            let bits = compatible(
                &VertexRecord { raytype: Some(a), ..ray_record() },
                &VertexRecord { raytype: Some(b), ..ray_record() },
            );
            if engine != bits {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn ray_record() -> VertexRecord {
    VertexRecord {
        kind: Kind::Ray,
        label: Some(0),
        raytype: None,
        amalgamated: false,
        frontier: false,
        address: Address::root(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tp_values() {
        assert_eq!((tp(0, 0), tp(0, 1)), (0, 1));
        assert_eq!((tp(2, 1), tp(2, 3), tp(2, 0)), (0, 1, 1));
        for s in 0..5 {
            assert_eq!(tp(s, -5), 0);
        }
    }

    #[test]
    fn windows_carry_tp() {
        let w = build_ray(0, -3, 3, Variant::Standard).unwrap();
        let bits: Vec<u8> = (-3..=3).map(|i| w.bit(i).unwrap()).collect();
        assert_eq!(bits, vec![0, 0, 0, 0, 1, 1, 1]);
        let w = build_ray(1, -1, 3, Variant::Standard).unwrap();
        let bits: Vec<u8> = (0..=3).map(|i| w.bit(i).unwrap()).collect();
        assert_eq!(bits, vec![1, 0, 1, 1]);
        assert!(w.tree.vertex(w.vertex(-1)).frontier && w.tree.vertex(w.vertex(3)).frontier);
        w.tree.validate().unwrap();
    }

    #[test]
    fn poset_window_gadgets() {
        let w = build_ray(1, -4, 4, Variant::Poset).unwrap();
        for i in -4..=4i64 {
            let v = w.vertex(i);
            let extra = w.tree.degree(v) - w.tree.core_degree(v);
            assert_eq!(extra, 1);
            let g = gadget_ids(&w.tree, v).len();
            match w.bit(i) {
                Some(b) => assert_eq!(g, 5 + b as usize),
                None => assert_eq!(g, 7),
            }
            assert_eq!(w.bit(i).is_some(), i % 2 == 0);
        }
    }

    #[test]
    fn centred_shift_cases() {
        assert!(centred_shift_embeds(1, 1, 8).unwrap().centred);
        assert!(!centred_shift_embeds(0, 1, 8).unwrap().centred);
        assert!(!centred_shift_embeds(1, 0, 8).unwrap().centred);
        assert!(shift_valid(0, 0, 1, 8));
        assert!(centred_shift_embeds(3, 3, 4).is_err());
    }

    #[test]
    fn gadget_rule_is_bit_rule() {
        assert!(type_rule_matches_gadgets().unwrap());
        assert!(gadget_shift_embeds(0, 0, 1, 4).unwrap().is_some());
        assert!(gadget_shift_embeds(0, 1, 0, 4).unwrap().is_none());
    }

    #[test]
    fn centres_are_one_then_zero() {
        for s in 1..4 {
            let w = build_ray(s, -6, 6, Variant::Standard).unwrap();
            assert_eq!(first_one_then_zero(&w), Some(0));
        }
        assert_eq!(first_one_then_zero(&build_ray(0, -6, 6, Variant::Standard).unwrap()), None);
    }
}
