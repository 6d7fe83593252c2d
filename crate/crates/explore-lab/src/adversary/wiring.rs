//! Who is connected to whom: layouts, head vertices, predecessors and the
//! heavy-edge groups at head vertices.

use serde_json::json;

use super::top::{Anchor, ListEnd};
use super::world::{bad, sgn, AdversaryWorld, BlockKind, GroupKind, Layout, Parent, Pos, H, HEAD0, R, T2, TAIL, W};

impl AdversaryWorld {
    pub(super) fn always_head(&self, b: u32) -> bool {
        self.blk(b).level == self.top
    }

    /// Level-0 quota: the current vertex at `c` is the `(size-1)`-th explored one.
    pub(super) fn quota_fix0(&mut self, b: u32, c: i32) -> R<()> {
        let (s, a) = (sgn(c), c.abs());
        let other = if s > 0 { self.blk(b).lo } else { self.blk(b).hi };
        let lay = if self.always_head(b) || a > self.y {
            (s, a, other + 1)
        } else {
            (-s, other + 1, a)
        };
        self.set_fixed(b, lay, "quota")
    }

    /// Level >= 1 quota: the unit at `c` is the `(x+1)`-th examined one.
    pub(super) fn quota_fix1(&mut self, p: u32, c: i32) -> R<()> {
        let (s, a) = (sgn(c), c.abs());
        let other = if s > 0 { self.blk(p).lo } else { self.blk(p).hi };
        let lay = if self.always_head(p) || a >= self.y {
            (s, a + 1, other + 1)
        } else {
            (-s, other + 1, a + 1)
        };
        self.set_fixed(p, lay, "quota")
    }

    /// Fixes a block early, tail just past the shorter explored side.
    pub(super) fn force_fix(&mut self, b: u32) -> R<()> {
        if self.blk(b).layout != Layout::Free {
            return Ok(());
        }
        let size = self.size(b);
        let (lo, hi) = (self.blk(b).lo, self.blk(b).hi);
        let lay = if lo <= hi {
            (1, size - 2 - lo, lo + 1)
        } else {
            (-1, size - 2 - hi, hi + 1)
        };
        self.set_fixed(b, lay, "forced")
    }

    fn set_fixed(&mut self, b: u32, (dir, hd, td): (i32, i32, i32), reason: &'static str) -> R<()> {
        let size = self.size(b);
        if hd < 1 || td < 1 || hd + td + 1 != size {
            return bad(format!("bad layout {dir} {hd} {td} for block {b}"));
        }
        self.blocks[b as usize].layout = Layout::Fixed { dir, hd, td };
        let step = self.steps_taken();
        self.log.push(
            step,
            "layout",
            || json!({"block": b, "dir": dir, "head": hd, "tail": td, "reason": reason}),
        );
        let (te, he) = (-dir * td, dir * hd);
        let (mn, mx) = (te.min(he), te.max(he));
        for r in -(size - 1)..size {
            let s = self.blk(b).slots[(r + size - 1) as usize];
            if s == u32::MAX {
                continue;
            }
            if r < mn || r > mx {
                return bad(format!("block {b} already has unit {r} beyond its ends"));
            }
            if self.blk(b).level > 0 && (r == te || r == he) {
                let u = &mut self.blocks[s as usize];
                match u.kind {
                    BlockKind::Final => {}
                    BlockKind::Normal if !u.examined => {
                        u.kind = BlockKind::Final;
                        self.log.push(step, "convert", || json!({"block": s, "to": "final"}));
                    }
                    _ => return bad(format!("end unit {s} of block {b} cannot become final")),
                }
            }
        }
        Ok(())
    }

    /// Marks a block examined and runs the counting rules.
    pub(super) fn examine(&mut self, b: u32) -> R<()> {
        if self.blk(b).examined {
            return Ok(());
        }
        self.blocks[b as usize].examined = true;
        if self.completing || self.blk(b).kind != BlockKind::Normal {
            return Ok(());
        }
        match self.blk(b).parent {
            Parent::Unit { p, rel } => {
                if self.blk(p).layout == Layout::Free {
                    let pb = &mut self.blocks[p as usize];
                    if rel < 0 {
                        pb.lo = pb.lo.max(-rel);
                    } else {
                        pb.hi = pb.hi.max(rel);
                    }
                    if pb.lo + pb.hi >= self.x {
                        self.quota_fix1(p, rel)?;
                    }
                }
                Ok(())
            }
            Parent::List { list, .. } => self.on_list_examined(list),
            _ => Ok(()),
        }
    }

    /// Layout work before answering an observation at `pos`.
    pub(super) fn prepare(&mut self, pos: Pos) -> R<()> {
        match pos {
            Pos::Path(b, r) => {
                if self.blk(b).kind == BlockKind::Origin {
                    return Ok(());
                }
                if self.blk(b).layout == Layout::Free {
                    let q = self.path_len - 1;
                    let pb = &mut self.blocks[b as usize];
                    if r < 0 {
                        pb.lo = pb.lo.max(-r);
                    } else {
                        pb.hi = pb.hi.max(r);
                    }
                    if 1 + pb.lo + pb.hi >= q {
                        self.quota_fix0(b, r)?;
                    }
                }
                if let Some((_, he)) = self.ends(b) {
                    if r == he {
                        self.examine(b)?;
                    }
                }
                Ok(())
            }
            Pos::Special(b, W) => self.force_fix(b),
            Pos::Special(b, H) => {
                self.force_fix(b)?;
                self.examine(b)
            }
            _ => Ok(()),
        }
    }

    pub(super) fn hv_peek(&self, b: u32) -> Option<Pos> {
        if self.blk(b).level == 0 {
            self.ends(b).map(|(_, he)| Pos::Path(b, he))
        } else {
            Some(Pos::Special(b, H))
        }
    }

    /// The head (or exit) vertex of a block, fixing a level-0 layout if needed.
    pub(super) fn hv_ensure(&mut self, b: u32) -> R<Pos> {
        if self.blk(b).level == 0 {
            self.force_fix(b)?;
        }
        Ok(self.hv_peek(b).expect("fixed"))
    }

    pub(super) fn origin_head_pos(&self, o: u32, k: u8) -> R<Pos> {
        if self.blk(o).level == 0 {
            let (te, he) = self.ends_or(o)?;
            Ok(Pos::Path(o, if k == 0 { te } else { he }))
        } else {
            Ok(Pos::Special(o, HEAD0 + k))
        }
    }

    fn ends_or(&self, b: u32) -> R<(i32, i32)> {
        match self.ends(b) {
            Some(e) => Ok(e),
            None => bad(format!("block {b} has no layout")),
        }
    }

    /// Where the exit edge of a final block leads.
    pub(super) fn attach(&self, f: u32) -> R<Pos> {
        match self.blk(f).parent {
            Parent::Unit { p, rel } => {
                let (te, he) = self.ends_or(p)?;
                if self.blk(p).kind == BlockKind::Origin {
                    Ok(Pos::Special(p, if rel == te { HEAD0 } else { HEAD0 + 1 }))
                } else if rel == te {
                    Ok(Pos::Special(p, W))
                } else if rel == he {
                    Ok(Pos::Special(p, H))
                } else {
                    bad(format!("final unit {f} is not at an end"))
                }
            }
            Parent::TopF { cycle } => Ok(Pos::VCon(cycle)),
            _ => bad(format!("block {f} cannot be final")),
        }
    }

    fn anchor_head(&self, l: u32) -> R<(Pos, usize, usize)> {
        match self.lists[l as usize].anchor {
            Anchor::OriginHead(k) => Ok((self.origin_head_pos(self.root, k)?, 0, 1)),
            Anchor::VCon { cycle, j } => Ok((Pos::VCon(cycle), j as usize, 3 + j as usize)),
        }
    }

    fn head_of(&mut self, b: u32, create: bool) -> R<Option<(Pos, usize, usize)>> {
        let h = if create {
            Some(self.hv_ensure(b)?)
        } else {
            self.hv_peek(b)
        };
        Ok(h.map(|h| (h, 1, 2)))
    }

    fn list_end_head(&mut self, l: u32, create: bool) -> R<Option<(Pos, usize, usize)>> {
        match self.lists[l as usize].blocks.last() {
            Some(&b) => self.head_of(b, create),
            None => self.anchor_head(l).map(Some),
        }
    }

    /// The head vertex whose skip and backbone lead into `b` from its tail
    /// side (or from side 2 of a closing block), with the two slot numbers.
    pub(super) fn pred_head(&mut self, b: u32, side2: bool, create: bool) -> R<Option<(Pos, usize, usize)>> {
        match self.blk(b).parent {
            Parent::Unit { p, rel } => {
                if rel == 0 {
                    return Ok(None);
                }
                let r2 = rel - sgn(rel);
                if r2 == 0 {
                    match self.unit_at(p, 0, create)? {
                        Some(o) => Ok(Some((self.origin_head_pos(o, u8::from(rel > 0))?, 0, 1))),
                        None => Ok(None),
                    }
                } else {
                    match self.unit_at(p, r2, create)? {
                        Some(u) => self.head_of(u, create),
                        None => Ok(None),
                    }
                }
            }
            Parent::List { list, idx } => {
                if idx > 0 {
                    let u = self.lists[list as usize].blocks[idx as usize - 1];
                    self.head_of(u, create)
                } else {
                    self.anchor_head(list).map(Some)
                }
            }
            Parent::TopF { cycle } => {
                let Some(l) = self.cycles[cycle as usize].upper else {
                    return bad("final block without upper list");
                };
                self.list_end_head(l, create)
            }
            Parent::TopClosing { cycle } => {
                let Some((_, s1, s2)) = self.cycles[cycle as usize].closing else {
                    return bad("closing block without sides");
                };
                self.list_end_head(if side2 { s2 } else { s1 }, create)
            }
            Parent::Root => Ok(None),
        }
    }

    /// The waiting heavy edge, if any, that must end at `pos`.
    pub(super) fn incoming_port(&mut self, pos: Pos) -> R<Option<(Pos, usize)>> {
        match pos {
            Pos::Special(b, W) => Ok(if self.blk(b).kind == BlockKind::Normal {
                self.hv_peek(b).map(|h| (h, 0))
            } else {
                None
            }),
            Pos::Special(b, TAIL) => Ok(self.pred_head(b, false, false)?.map(|(h, _, bb)| (h, bb))),
            Pos::Special(b, H) if self.blk(b).kind == BlockKind::Closing => {
                Ok(self.pred_head(b, true, false)?.map(|(h, s, _)| (h, s)))
            }
            Pos::Special(b, T2) => Ok(self.pred_head(b, true, false)?.map(|(h, _, bb)| (h, bb))),
            Pos::Path(b0, 0) => {
                let mut t = b0;
                while let Parent::Unit { p, rel: 0 } = self.blk(t).parent {
                    t = p;
                }
                Ok(self.pred_head(t, false, false)?.map(|(h, s, _)| (h, s)))
            }
            _ => Ok(None),
        }
    }

    /// The block after position `k - 1` of list `l`, opening it if asked.
    /// The flag tells whether a closing block is entered from side 2.
    pub(super) fn list_next(&mut self, l: u32, k: usize, create: bool) -> R<Option<(u32, bool)>> {
        let len = self.lists[l as usize].blocks.len();
        if k < len {
            return Ok(Some((self.lists[l as usize].blocks[k], false)));
        }
        if k > len {
            return bad(format!("list {l} has no block {k}"));
        }
        match self.lists[l as usize].end {
            ListEnd::Final(f) => Ok(Some((f, false))),
            ListEnd::Closing(cb) => {
                let Parent::TopClosing { cycle } = self.blk(cb).parent else {
                    return bad("closing block off the top level");
                };
                let side2 = matches!(self.cycles[cycle as usize].closing, Some((_, _, s2)) if s2 == l);
                Ok(Some((cb, side2)))
            }
            ListEnd::Open if create => {
                self.open(l)?;
                self.list_next(l, k, false)
            }
            ListEnd::Open => Ok(None),
        }
    }

    fn group_succ(&mut self, kind: GroupKind, slot: usize, create: bool) -> R<Option<(u32, bool)>> {
        match kind {
            GroupKind::Normal(b) => match self.blk(b).parent {
                Parent::Unit { p, rel } => Ok(self.unit_at(p, rel + sgn(rel), create)?.map(|u| (u, false))),
                Parent::List { list, idx } => self.list_next(list, idx as usize + 1, create),
                _ => bad(format!("block {b} has no successor")),
            },
            GroupKind::Origin(o, k) => match self.blk(o).parent {
                Parent::Unit { p, rel: 0 } => Ok(self
                    .unit_at(p, if k == 0 { -1 } else { 1 }, create)?
                    .map(|u| (u, false))),
                Parent::Root => self.list_next(k as u32, 0, create),
                _ => bad(format!("origin block {o} off position 0")),
            },
            GroupKind::VCon(c) => {
                let Some(vl) = self.cycles[c as usize].vcon_lists else {
                    return bad("connection vertex without lists");
                };
                self.list_next(vl[slot % 3], 0, create)
            }
        }
    }

    /// Where slot `slot` of a head group leads.
    pub(super) fn slot_target(&mut self, kind: GroupKind, slot: usize, create: bool) -> R<Option<Pos>> {
        let skip = match kind {
            GroupKind::Normal(b) if slot == 0 => return Ok(Some(Pos::Special(b, W))),
            GroupKind::Normal(_) => slot == 1,
            GroupKind::Origin(..) => slot == 0,
            GroupKind::VCon(_) => slot < 3,
        };
        let Some((s, side2)) = self.group_succ(kind, slot, create)? else {
            return Ok(None);
        };
        match (skip, side2) {
            (true, true) => Ok(Some(Pos::Special(s, H))),
            (true, false) => self.start_pos(s, create),
            (false, true) => Ok(Some(Pos::Special(s, T2))),
            (false, false) => Ok(Some(Pos::Special(s, TAIL))),
        }
    }

    pub(super) fn group_slots(kind: GroupKind) -> usize {
        match kind {
            GroupKind::Normal(_) => 3,
            GroupKind::Origin(..) => 2,
            GroupKind::VCon(_) => 6,
        }
    }

    pub(super) fn group_code(&self, kind: GroupKind) -> i8 {
        match kind {
            GroupKind::Normal(b) | GroupKind::Origin(b, _) => self.blk(b).level as i8,
            GroupKind::VCon(_) => self.top as i8,
        }
    }
}
