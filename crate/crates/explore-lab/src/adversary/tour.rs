//! The backbone tour of a finished world: every block crossed once in one
//! direction, blocks joined by backbone and exit edges.

use std::collections::BTreeMap;

use super::top::CycleKind;
use super::world::{bad, AdversaryWorld, BlockKind, Pos, H, HEAD0, NONE, R, T2, TAIL, W};
use crate::engine::Trace;
use crate::graph::{VertexId, WeightedGraph};

impl AdversaryWorld {
    fn unit(&self, p: u32, r: i32) -> R<u32> {
        let size = self.size(p);
        match self.blk(p).slots[(r + size - 1) as usize] {
            NONE => bad(format!("unit {r} of block {p} missing")),
            u => Ok(u),
        }
    }

    /// Crossing of `b` from its tail side to its head side (for origin
    /// blocks: from head 0 to head 1).
    fn cross(&self, b: u32, fwd: bool, out: &mut Vec<Pos>) -> R<()> {
        let start = out.len();
        let blk = self.blk(b);
        let Some((te, he)) = self.ends(b) else {
            return bad(format!("block {b} has no layout"));
        };
        match blk.kind {
            BlockKind::Origin if blk.level > 0 => out.push(Pos::Special(b, HEAD0)),
            BlockKind::Origin => {}
            _ => out.extend([Pos::Special(b, TAIL), Pos::Special(b, W)]),
        }
        let s = if he > te { 1 } else { -1 };
        let mut r = te;
        loop {
            if blk.level == 0 {
                out.push(Pos::Path(b, r));
            } else {
                let u = self.unit(b, r)?;
                let unit_fwd = if r == 0 { s > 0 } else { r.signum() == he.signum() };
                self.cross(u, unit_fwd, out)?;
            }
            if r == he {
                break;
            }
            r += s;
        }
        match blk.kind {
            BlockKind::Origin if blk.level > 0 => out.push(Pos::Special(b, HEAD0 + 1)),
            BlockKind::Origin => {}
            BlockKind::Closing => out.extend([Pos::Special(b, H), Pos::Special(b, T2)]),
            _ if blk.level > 0 => out.push(Pos::Special(b, H)),
            _ => {}
        }
        if !fwd {
            out[start..].reverse();
        }
        Ok(())
    }

    fn walk_list(&self, l: u32, fwd: bool, out: &mut Vec<Pos>) -> R<()> {
        let blocks = &self.lists[l as usize].blocks;
        if fwd {
            for &b in blocks {
                self.cross(b, true, out)?;
            }
        } else {
            for &b in blocks.iter().rev() {
                self.cross(b, false, out)?;
            }
        }
        Ok(())
    }

    /// Walk of cycle `c` from its anchor back to its anchor, anchor excluded.
    fn walk_cycle(&self, c: u32, out: &mut Vec<Pos>) -> R<()> {
        let cy = &self.cycles[c as usize];
        let Some((cb, s1, s2)) = cy.closing else {
            return bad(format!("cycle {c} is open"));
        };
        let (first, last) = match cy.kind {
            CycleKind::FType => {
                let Some(up) = cy.upper else {
                    return bad(format!("cycle {c} has no connection vertex"));
                };
                let lower = if cy.arms[0] == up { cy.arms[1] } else { cy.arms[0] };
                self.walk_list(up, true, out)?;
                self.cross(cy.f.expect("final block"), true, out)?;
                out.push(Pos::VCon(c));
                self.walk_cycle(c + 1, out)?;
                out.push(Pos::VCon(c));
                let vj = if s1 == lower { s2 } else { s1 };
                (vj, lower)
            }
            _ => (cy.arms[1], cy.arms[0]),
        };
        if first != s1 && first != s2 || last != s1 && last != s2 {
            return bad(format!("closing of cycle {c} does not join its walk"));
        }
        self.walk_list(first, true, out)?;
        self.cross(cb, first == s1, out)?;
        self.walk_list(last, false, out)
    }

    /// The whole backbone tour as positions, rotated to start at the origin.
    fn tour_positions(&self) -> R<Vec<Pos>> {
        let mut out = Vec::new();
        let cy = &self.cycles[0];
        let o_fwd = match cy.kind {
            CycleKind::FType => cy.upper == Some(cy.arms[1]),
            _ => true,
        };
        self.cross(self.root, o_fwd, &mut out)?;
        self.walk_cycle(0, &mut out)?;
        let Some(at) = out.iter().position(|&p| self.pos_id(p) == 0) else {
            return bad("tour misses the origin");
        };
        out.rotate_left(at);
        out.push(out[0]);
        Ok(out)
    }

    /// The explicit tour; its cost is the optimum surrogate.
    pub fn explicit_opt_tour(&self) -> R<Trace> {
        let Some(g) = self.graph() else {
            return bad("world not finalized");
        };
        let pos = self.tour_positions()?;
        let mut trace = Trace::new(VertexId(0));
        for w in pos.windows(2) {
            let (a, b) = (VertexId(self.pos_id(w[0])), VertexId(self.pos_id(w[1])));
            if a == b {
                continue;
            }
            let Some(wt) = g.weight(a, b) else {
                return bad(format!("tour steps over a non-edge {a}-{b} ({:?} to {:?})", w[0], w[1]));
            };
            trace.push(a, b, wt);
        }
        Ok(trace)
    }

    /// Top-level block ids of one kind, in creation order.
    pub fn top_blocks(&self, kind: BlockKind) -> Vec<usize> {
        (0..self.blocks.len())
            .filter(|&b| {
                let blk = &self.blocks[b];
                blk.kind == kind && blk.level == self.top && !matches!(blk.parent, super::world::Parent::Unit { .. })
            })
            .collect()
    }

    /// Blocks of a given level and kind, in creation order.
    pub fn blocks_of(&self, level: u32, kind: BlockKind) -> Vec<usize> {
        (0..self.blocks.len())
            .filter(|&b| self.blocks[b].level == level && self.blocks[b].kind == kind)
            .collect()
    }

    /// The vertices of block `b` in crossing order, tail side first.
    pub fn crossing(&self, b: usize) -> Result<Vec<VertexId>, super::AdversaryError> {
        let mut out = Vec::new();
        self.cross(b as u32, true, &mut out)?;
        Ok(out.into_iter().map(|p| VertexId(self.pos_id(p))).collect())
    }

    /// The subgraph induced by one block, relabeled so that the vertex
    /// entered from the tail side is 0 and the head-side vertex is last.
    pub fn block_subgraph(&self, b: usize) -> Result<WeightedGraph, super::AdversaryError> {
        let Some(g) = self.graph() else {
            return bad("world not finalized");
        };
        let verts = self.crossing(b)?;
        let idx: BTreeMap<VertexId, u32> = verts.iter().enumerate().map(|(i, &v)| (v, i as u32)).collect();
        let mut sub = WeightedGraph::with_vertices(verts.len());
        for (i, &v) in verts.iter().enumerate() {
            for (t, w) in g.neighbors(v) {
                if let Some(&j) = idx.get(&t) {
                    if (i as u32) < j {
                        sub.add_edge(VertexId(i as u32), VertexId(j), w)
                            .map_err(|e| super::AdversaryError::Inconsistent(e.to_string()))?;
                    }
                }
            }
        }
        Ok(sub)
    }

    /// Role labels for DOT export.
    pub fn annotations(&self) -> BTreeMap<VertexId, String> {
        let mut m = BTreeMap::new();
        for v in 0..self.revealed() as u32 {
            let Some(pos) = self.pos_of(v) else { continue };
            let label = match pos {
                Pos::Path(b, 0) if self.blk(b).kind != BlockKind::Origin || b != self.root => {
                    format!("v_start b{b}")
                }
                Pos::Path(b, r) => match self.ends(b) {
                    Some((_, he)) if r == he && self.blk(b).kind == BlockKind::Final => format!("v_e b{b}"),
                    Some((_, he)) if r == he && self.blk(b).kind == BlockKind::Closing => format!("v_ph b{b}"),
                    Some((te, he)) if r == he || (r == te && self.blk(b).kind == BlockKind::Origin) => {
                        format!("v_h b{b}")
                    }
                    Some((te, _)) if r == te => format!("v_final b{b}"),
                    _ => continue,
                },
                Pos::Special(b, W) => format!("w b{b}"),
                Pos::Special(b, TAIL) | Pos::Special(b, T2) => format!("v_t b{b}"),
                Pos::Special(b, H) => match self.blk(b).kind {
                    BlockKind::Closing => format!("v_ps b{b}"),
                    BlockKind::Final => format!("v_e b{b}"),
                    _ => format!("v_h b{b}"),
                },
                Pos::Special(b, _) => format!("v_h b{b}"),
                Pos::VCon(c) => format!("v_con c{c}"),
            };
            m.insert(VertexId(v), label);
        }
        m.insert(VertexId(0), "v_o".to_string());
        m
    }
}
