//! Block-level state of the lazy gadget world.
//!
//! Every block is a path of units: vertices at level 0, sub-blocks above.
//! Units are addressed by their offset `rel` from the start unit, so a block
//! can be explored before its head side is known. Once the quota is reached
//! the layout is fixed to `Fixed { dir, hd, td }`: the head end sits at
//! `dir * hd` and the tail end at `-dir * td`.

use std::collections::VecDeque;

use serde::Serialize;
use serde_json::json;

use super::log::ResolutionLog;
use super::top::{Cycle, List};
use super::{AdversaryError, Params, Topology};
use crate::analysis::FormulaTable;
use crate::engine::{World, WorldError};
use crate::graph::{Edge, VertexId, Weight, WeightedGraph};

pub(super) type R<T> = Result<T, AdversaryError>;

pub(super) const NONE: u32 = u32::MAX;

// Vertex roles outside the unit path.
pub(super) const W: u8 = 0;
pub(super) const TAIL: u8 = 1;
pub(super) const H: u8 = 2;
pub(super) const T2: u8 = 3;
pub(super) const HEAD0: u8 = 4;

// Weight codes: ZERO, ONE, then level l means e_l.
pub(super) const ZERO: i8 = -2;
pub(super) const ONE: i8 = -1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum BlockKind {
    Normal,
    Origin,
    Final,
    Closing,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(super) enum Layout {
    Free,
    Fixed { dir: i32, hd: i32, td: i32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(super) enum Parent {
    Unit { p: u32, rel: i32 },
    List { list: u32, idx: u32 },
    TopF { cycle: u32 },
    TopClosing { cycle: u32 },
    Root,
}

#[derive(Clone, Debug)]
pub(super) struct Block {
    pub level: u32,
    pub kind: BlockKind,
    pub layout: Layout,
    pub parent: Parent,
    /// Vertex ids (level 0) or unit block ids, indexed by `rel + size - 1`.
    pub slots: Vec<u32>,
    pub special: [u32; 6],
    pub lo: i32,
    pub hi: i32,
    pub examined: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(super) enum Pos {
    Path(u32, i32),
    Special(u32, u8),
    VCon(u32),
}

#[derive(Clone, Copy, Debug)]
pub(super) enum VRec {
    At(Pos),
    /// Far end of a heavy edge whose role is not decided yet.
    Pending(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(super) enum GroupKind {
    /// Return, skip, backbone.
    Normal(u32),
    /// Skip, backbone of an origin head.
    Origin(u32, u8),
    /// Three skips, then three backbones.
    VCon(u32),
}

#[derive(Clone, Debug)]
pub(super) struct Group {
    pub kind: GroupKind,
    pub assigned: Vec<u32>,
    pub pending: VecDeque<u32>,
}

/// Block counts of a world, by kind, for the top level and overall.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BlockSummary {
    pub top_normal: usize,
    pub top_final: usize,
    pub top_closing: usize,
    pub top_origin: usize,
    pub cycles: usize,
    pub blocks: usize,
    pub vertices: usize,
    /// Normal blocks per cycle, in cycle order.
    pub per_cycle: Vec<usize>,
}

impl BlockSummary {
    pub fn top_total(&self) -> usize {
        self.top_normal + self.top_final + self.top_closing + self.top_origin
    }
}

/// The adaptive adversary for one run.
pub struct AdversaryWorld {
    pub(super) params: Params,
    pub(super) table: FormulaTable,
    wcodes: Vec<Weight>,
    pub(super) x: i32,
    pub(super) y: i32,
    pub(super) top: u32,
    pub(super) path_len: i32,
    pub(super) units: i32,
    pub(super) blocks: Vec<Block>,
    pub(super) lists: Vec<List>,
    pub(super) cycles: Vec<Cycle>,
    pub(super) root: u32,
    pub(super) vrec: Vec<VRec>,
    group_of: Vec<u32>,
    cache_start: Vec<u32>,
    cache_len: Vec<u8>,
    cache: Vec<(u32, i8)>,
    groups: Vec<Group>,
    pub(super) canonical: bool,
    pub(super) completing: bool,
    steps: u64,
    pub(super) log: ResolutionLog,
    graph: Option<WeightedGraph>,
}

pub(super) fn sgn(r: i32) -> i32 {
    if r < 0 {
        -1
    } else {
        1
    }
}

pub(super) fn bad<T>(m: impl Into<String>) -> R<T> {
    Err(AdversaryError::Inconsistent(m.into()))
}

impl AdversaryWorld {
    /// A world with the resolution log switched on.
    pub fn new(params: Params) -> R<Self> {
        Self::with_logging(params, true)
    }

    pub fn with_logging(params: Params, log: bool) -> R<Self> {
        params.validate()?;
        let table = FormulaTable::new(&params)?;
        let mut wcodes = vec![0, 1];
        for l in 0..=params.levels as i32 {
            wcodes.push(table.e(l));
        }
        let x = params.x as i32;
        let path_len = match params.topology {
            Topology::Simple => x + 1,
            _ => x + 3,
        };
        let mut w = AdversaryWorld {
            params,
            table,
            wcodes,
            x,
            y: params.y as i32,
            top: params.levels,
            path_len,
            units: x + 3,
            blocks: Vec::new(),
            lists: Vec::new(),
            cycles: Vec::new(),
            root: 0,
            vrec: Vec::new(),
            group_of: Vec::new(),
            cache_start: Vec::new(),
            cache_len: Vec::new(),
            cache: Vec::new(),
            groups: Vec::new(),
            canonical: false,
            completing: false,
            steps: 0,
            log: ResolutionLog::new(log),
            graph: None,
        };
        w.root = w.create_block(w.top, BlockKind::Origin, Parent::Root);
        w.init_top();
        let start = w.start_pos(w.root, true)?.expect("created");
        let origin = w.id_of(start)?;
        debug_assert_eq!(origin, 0);
        Ok(w)
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn table(&self) -> &FormulaTable {
        &self.table
    }

    pub fn log(&self) -> &ResolutionLog {
        &self.log
    }

    /// The finished graph, once `finalize` has run.
    pub fn graph(&self) -> Option<&WeightedGraph> {
        self.graph.as_ref()
    }

    /// Ids handed out so far.
    pub fn revealed(&self) -> usize {
        self.vrec.len()
    }

    /// Same construction with every weight-0 edge answered as weight 1.
    /// Must be called before the first observation.
    pub fn lifted(mut self) -> Self {
        self.wcodes[0] = 1;
        self
    }

    pub fn is_lifted(&self) -> bool {
        self.wcodes[0] == 1
    }

    pub(super) fn weight(&self, code: i8) -> Weight {
        self.wcodes[(code + 2) as usize]
    }

    pub(super) fn size(&self, b: u32) -> i32 {
        if self.blocks[b as usize].level == 0 {
            self.path_len
        } else {
            self.units
        }
    }

    pub(super) fn blk(&self, b: u32) -> &Block {
        &self.blocks[b as usize]
    }

    fn blk_mut(&mut self, b: u32) -> &mut Block {
        &mut self.blocks[b as usize]
    }

    /// `(tail end, head end)` of a fixed block.
    pub(super) fn ends(&self, b: u32) -> Option<(i32, i32)> {
        match self.blk(b).layout {
            Layout::Free => None,
            Layout::Fixed { dir, hd, td } => Some((-dir * td, dir * hd)),
        }
    }

    pub fn steps_taken(&self) -> u64 {
        self.steps
    }

    pub(super) fn create_block(&mut self, level: u32, kind: BlockKind, parent: Parent) -> u32 {
        let size = if level == 0 { self.path_len } else { self.units };
        let layout = match kind {
            BlockKind::Origin => {
                let td = (size + 1) / 2 - 1;
                Layout::Fixed {
                    dir: 1,
                    hd: size - 1 - td,
                    td,
                }
            }
            _ if self.canonical => Layout::Fixed {
                dir: 1,
                hd: size - 2,
                td: 1,
            },
            _ => Layout::Free,
        };
        let id = self.blocks.len() as u32;
        self.blocks.push(Block {
            level,
            kind,
            layout,
            parent,
            slots: vec![NONE; (2 * size - 1) as usize],
            special: [NONE; 6],
            lo: 0,
            hi: 0,
            examined: false,
        });
        let step = self.steps;
        self.log.push(
            step,
            "block",
            || json!({"block": id, "level": level, "kind": kind, "parent": format!("{parent:?}")}),
        );
        id
    }

    pub(super) fn unit_at(&mut self, p: u32, r: i32, create: bool) -> R<Option<u32>> {
        let size = self.size(p);
        if r.abs() >= size {
            return bad(format!("unit {r} outside block {p}"));
        }
        let have = self.blk(p).slots[(r + size - 1) as usize];
        if have != NONE {
            return Ok(Some(have));
        }
        if !create {
            return Ok(None);
        }
        let kind = if r == 0 {
            BlockKind::Origin
        } else {
            match self.ends(p) {
                Some((te, he)) if r == te || r == he => BlockKind::Final,
                Some((te, he)) if r < te.min(he) || r > te.max(he) => {
                    return bad(format!("unit {r} beyond the ends of block {p}"))
                }
                _ => BlockKind::Normal,
            }
        };
        let level = self.blk(p).level - 1;
        let u = self.create_block(level, kind, Parent::Unit { p, rel: r });
        self.blk_mut(p).slots[(r + size - 1) as usize] = u;
        Ok(Some(u))
    }

    pub(super) fn ensure_unit(&mut self, p: u32, r: i32) -> R<u32> {
        Ok(self.unit_at(p, r, true)?.expect("created"))
    }

    /// Where a skip edge into `b` lands.
    pub(super) fn start_pos(&mut self, mut b: u32, create: bool) -> R<Option<Pos>> {
        loop {
            if self.blk(b).level == 0 {
                return Ok(Some(Pos::Path(b, 0)));
            }
            match self.unit_at(b, 0, create)? {
                Some(u) => b = u,
                None => return Ok(None),
            }
        }
    }

    pub(super) fn pos_id(&self, pos: Pos) -> u32 {
        match pos {
            Pos::Path(b, r) => {
                let blk = self.blk(b);
                let i = r + self.path_len - 1;
                if i < 0 || i as usize >= blk.slots.len() {
                    NONE
                } else {
                    blk.slots[i as usize]
                }
            }
            Pos::Special(b, role) => self.blk(b).special[role as usize],
            Pos::VCon(c) => self.cycles[c as usize].vcon,
        }
    }

    fn set_pos_id(&mut self, pos: Pos, id: u32) {
        match pos {
            Pos::Path(b, r) => {
                let i = (r + self.path_len - 1) as usize;
                self.blk_mut(b).slots[i] = id;
            }
            Pos::Special(b, role) => self.blk_mut(b).special[role as usize] = id,
            Pos::VCon(c) => self.cycles[c as usize].vcon = id,
        }
    }

    fn fresh(&mut self, rec: VRec) -> u32 {
        let id = self.vrec.len() as u32;
        self.vrec.push(rec);
        self.group_of.push(NONE);
        self.cache_start.push(NONE);
        self.cache_len.push(0);
        id
    }

    /// The id of a position, binding a waiting heavy edge if one is meant
    /// to end here.
    pub(super) fn id_of(&mut self, pos: Pos) -> R<u32> {
        let have = self.pos_id(pos);
        if have != NONE {
            return Ok(have);
        }
        if let Some((hp, slot)) = self.incoming_port(pos)? {
            let h = self.pos_id(hp);
            if h != NONE && self.group_of[h as usize] != NONE {
                let g = self.group_of[h as usize] as usize;
                if self.groups[g].assigned[slot] == NONE {
                    let id = match self.groups[g].pending.pop_front() {
                        Some(id) => id,
                        None => return bad(format!("group at {h} ran out of ports")),
                    };
                    self.groups[g].assigned[slot] = id;
                    self.vrec[id as usize] = VRec::At(pos);
                    self.set_pos_id(pos, id);
                    let step = self.steps;
                    self.log.push(
                        step,
                        "bind",
                        || json!({"head": h, "slot": slot, "vertex": id, "at": format!("{pos:?}")}),
                    );
                    return Ok(id);
                }
            }
        }
        let id = self.fresh(VRec::At(pos));
        self.set_pos_id(pos, id);
        Ok(id)
    }
}

impl AdversaryWorld {
    /// Neighbors of `pos` that follow from the block structure, plus the
    /// heavy-edge group if `pos` is a head vertex.
    fn structural(&mut self, pos: Pos) -> R<(Vec<(Pos, i8)>, Option<GroupKind>)> {
        let mut out = Vec::with_capacity(4);
        let mut group = None;
        match pos {
            Pos::Path(b, r) => {
                let lvl = self.blk(b).level as i8;
                let kind = self.blk(b).kind;
                if r == 0 {
                    let mut t = b;
                    while let Parent::Unit { p, rel: 0 } = self.blk(t).parent {
                        t = p;
                    }
                    if t != self.root {
                        let code = self.blk(t).level as i8;
                        out.push((self.pred_pos(t, false)?, code));
                    }
                }
                match self.ends(b) {
                    None => {
                        out.push((Pos::Path(b, r - 1), ONE));
                        out.push((Pos::Path(b, r + 1), ONE));
                    }
                    Some((te, he)) => {
                        if r > te.min(he) {
                            out.push((Pos::Path(b, r - 1), ONE));
                        }
                        if r < te.max(he) {
                            out.push((Pos::Path(b, r + 1), ONE));
                        }
                        if r == te {
                            if kind == BlockKind::Origin {
                                group = Some(GroupKind::Origin(b, 0));
                            } else {
                                out.push((Pos::Special(b, W), ZERO));
                            }
                        }
                        if r == he {
                            match kind {
                                BlockKind::Origin => group = Some(GroupKind::Origin(b, 1)),
                                BlockKind::Normal => group = Some(GroupKind::Normal(b)),
                                BlockKind::Final => {
                                    out.push((Pos::Special(b, W), lvl));
                                    out.push((self.attach(b)?, ZERO));
                                }
                                BlockKind::Closing => {
                                    out.push((Pos::Special(b, H), ZERO));
                                    out.push((Pos::Special(b, W), lvl));
                                }
                            }
                        }
                    }
                }
            }
            Pos::Special(b, role) => {
                let lvl = self.blk(b).level as i8;
                let kind = self.blk(b).kind;
                match role {
                    W => {
                        out.push((Pos::Special(b, TAIL), ZERO));
                        out.push((self.contact(b, false)?, ZERO));
                        out.push((self.hv_ensure(b)?, lvl));
                    }
                    TAIL => {
                        out.push((Pos::Special(b, W), ZERO));
                        out.push((self.pred_pos(b, false)?, lvl));
                    }
                    H => match kind {
                        BlockKind::Normal => {
                            out.push((self.contact(b, true)?, ZERO));
                            group = Some(GroupKind::Normal(b));
                        }
                        BlockKind::Final => {
                            out.push((self.contact(b, true)?, ZERO));
                            out.push((Pos::Special(b, W), lvl));
                            out.push((self.attach(b)?, ZERO));
                        }
                        BlockKind::Closing => {
                            out.push((self.contact(b, true)?, ZERO));
                            out.push((Pos::Special(b, T2), ZERO));
                            if lvl > 0 {
                                out.push((Pos::Special(b, W), lvl));
                            }
                            out.push((self.pred_pos(b, true)?, lvl));
                        }
                        BlockKind::Origin => return bad(format!("origin block {b} has no head role")),
                    },
                    T2 => {
                        out.push((Pos::Special(b, H), ZERO));
                        out.push((self.pred_pos(b, true)?, lvl));
                    }
                    _ => {
                        let k = role - HEAD0;
                        let (te, he) = self.ends(b).expect("origin blocks are fixed");
                        let u = self.ensure_unit(b, if k == 0 { te } else { he })?;
                        out.push((self.hv_ensure(u)?, ZERO));
                        group = Some(GroupKind::Origin(b, k));
                    }
                }
            }
            Pos::VCon(c) => {
                let Some(f) = self.cycles[c as usize].f else {
                    return bad("connection vertex without final block");
                };
                out.push((self.hv_ensure(f)?, ZERO));
                group = Some(GroupKind::VCon(c));
            }
        }
        Ok((out, group))
    }

    /// The vertex joined by a weight-0 edge to the tail side (W) or the head
    /// side (H) of a block's unit path.
    fn contact(&mut self, b: u32, head: bool) -> R<Pos> {
        let Some((te, he)) = self.ends(b) else {
            return bad(format!("block {b} has no layout"));
        };
        let r = if head { he } else { te };
        if self.blk(b).level == 0 {
            Ok(Pos::Path(b, r))
        } else {
            let u = self.ensure_unit(b, r)?;
            self.hv_ensure(u)
        }
    }

    fn pred_pos(&mut self, b: u32, side2: bool) -> R<Pos> {
        match self.pred_head(b, side2, true)? {
            Some((h, _, _)) => Ok(h),
            None => bad(format!("block {b} has no predecessor")),
        }
    }

    fn resolve_pending(&mut self, v: u32, h: u32) -> R<Pos> {
        let g = self.group_of[h as usize] as usize;
        let Some(slot) = self.groups[g].assigned.iter().position(|&a| a == NONE) else {
            return bad(format!("no free port at {h}"));
        };
        let Some(i) = self.groups[g].pending.iter().position(|&p| p == v) else {
            return bad(format!("vertex {v} is not pending at {h}"));
        };
        self.groups[g].pending.remove(i);
        let kind = self.groups[g].kind;
        let Some(tp) = self.slot_target(kind, slot, true)? else {
            return bad(format!("port {slot} at {h} leads nowhere"));
        };
        if self.pos_id(tp) != NONE {
            return bad(format!("target {tp:?} of port {slot} at {h} already has an id"));
        }
        self.groups[g].assigned[slot] = v;
        self.vrec[v as usize] = VRec::At(tp);
        self.set_pos_id(tp, v);
        let step = self.steps;
        self.log.push(
            step,
            "port",
            || json!({"head": h, "slot": slot, "vertex": v, "group": format!("{kind:?}"), "at": format!("{tp:?}")}),
        );
        Ok(tp)
    }

    fn make_group(&mut self, v: u32, kind: GroupKind, out: &mut Vec<(u32, i8)>) -> R<()> {
        let n = Self::group_slots(kind);
        let code = self.group_code(kind);
        let mut group = Group {
            kind,
            assigned: vec![NONE; n],
            pending: VecDeque::new(),
        };
        for s in 0..n {
            if let Some(tp) = self.slot_target(kind, s, false)? {
                let id = self.pos_id(tp);
                if id != NONE {
                    group.assigned[s] = id;
                    out.push((id, code));
                    continue;
                }
            }
            let p = self.fresh(VRec::Pending(v));
            group.pending.push_back(p);
            out.push((p, code));
        }
        self.group_of[v as usize] = self.groups.len() as u32;
        self.groups.push(group);
        Ok(())
    }

    pub(super) fn observe_id(&mut self, v: u32) -> R<()> {
        if self.cache_start[v as usize] != NONE {
            return Ok(());
        }
        let pos = match self.vrec[v as usize] {
            VRec::At(p) => p,
            VRec::Pending(h) => self.resolve_pending(v, h)?,
        };
        self.prepare(pos)?;
        let (nbrs, group) = self.structural(pos)?;
        let mut out = Vec::with_capacity(nbrs.len() + 6);
        for (p, code) in nbrs {
            let id = self.id_of(p)?;
            out.push((id, code));
        }
        if let Some(kind) = group {
            self.make_group(v, kind, &mut out)?;
        }
        for (i, a) in out.iter().enumerate() {
            if a.0 == v || out[..i].iter().any(|b| b.0 == a.0) {
                return bad(format!("vertex {v} at {pos:?} would get a loop or parallel edge"));
            }
        }
        self.steps += 1;
        self.cache_start[v as usize] = self.cache.len() as u32;
        self.cache_len[v as usize] = out.len() as u8;
        self.cache.extend(out);
        Ok(())
    }

    fn cached(&self, v: u32) -> &[(u32, i8)] {
        let s = self.cache_start[v as usize] as usize;
        &self.cache[s..s + self.cache_len[v as usize] as usize]
    }

    fn edges_of(&self, v: u32) -> Vec<Edge> {
        self.cached(v)
            .iter()
            .map(|&(t, c)| Edge::new(VertexId(v), VertexId(t), self.weight(c)))
            .collect()
    }

    fn build_graph(&mut self) -> R<WeightedGraph> {
        let n = self.vrec.len();
        let mut g = WeightedGraph::with_vertices(n);
        for v in 0..n as u32 {
            if self.cache_start[v as usize] == NONE {
                return bad(format!("vertex {v} never materialized"));
            }
            if let VRec::Pending(_) = self.vrec[v as usize] {
                return bad(format!("vertex {v} left pending"));
            }
            for &(t, c) in self.cached(v) {
                let back = self.cached(t).iter().find(|e| e.0 == v);
                if back.map(|e| e.1) != Some(c) {
                    return bad(format!("edge {v}-{t} is not symmetric"));
                }
                if v < t {
                    g.add_edge(VertexId(v), VertexId(t), self.weight(c))
                        .map_err(|e| AdversaryError::Inconsistent(e.to_string()))?;
                }
            }
        }
        Ok(g)
    }

    /// Commits everything still open and returns the complete graph.
    pub fn finish(&mut self) -> R<WeightedGraph> {
        if let Some(g) = &self.graph {
            return Ok(g.clone());
        }
        self.canonical = true;
        for b in 0..self.blocks.len() as u32 {
            self.force_fix(b)?;
        }
        self.close_all_cycles()?;
        self.completing = true;
        let mut v = 0;
        while v < self.vrec.len() {
            self.observe_id(v as u32)?;
            v += 1;
        }
        let g = self.build_graph()?;
        let step = self.steps;
        let (n, nb) = (g.vertex_count(), self.blocks.len());
        self.log.push(step, "finalize", || json!({"vertices": n, "blocks": nb}));
        self.graph = Some(g.clone());
        Ok(g)
    }

    /// Checks that every answer given during the run is what the finished
    /// graph says.
    pub fn check_answers(&self, g: &WeightedGraph) -> Result<(), String> {
        for v in 0..self.vrec.len() as u32 {
            if self.cache_start[v as usize] == NONE {
                continue;
            }
            let mut said: Vec<_> = self.cached(v).iter().map(|&(t, c)| (t, self.weight(c))).collect();
            let mut have: Vec<_> = g.neighbors(VertexId(v)).map(|(t, w)| (t.0, w)).collect();
            said.sort_unstable();
            have.sort_unstable();
            if said != have {
                return Err(format!("vertex {v}: answered {said:?}, graph has {have:?}"));
            }
        }
        Ok(())
    }

    /// Which block and role a vertex belongs to. Pending vertices have none.
    pub(super) fn pos_of(&self, v: u32) -> Option<Pos> {
        match self.vrec.get(v as usize)? {
            VRec::At(p) => Some(*p),
            VRec::Pending(_) => None,
        }
    }

    /// Where vertex `v` sits in the construction, for debugging.
    pub fn describe(&self, v: u32) -> String {
        match self.vrec.get(v as usize) {
            Some(VRec::At(p)) => format!("{p:?}"),
            Some(VRec::Pending(h)) => format!("pending@{h}"),
            None => "unknown".to_string(),
        }
    }

    pub fn block_summary(&self) -> BlockSummary {
        let mut s = BlockSummary {
            cycles: self.cycles.len(),
            blocks: self.blocks.len(),
            vertices: self.vrec.len(),
            ..Default::default()
        };
        for b in &self.blocks {
            if b.level != self.top || matches!(b.parent, Parent::Unit { .. }) {
                continue;
            }
            match b.kind {
                BlockKind::Normal => s.top_normal += 1,
                BlockKind::Final => s.top_final += 1,
                BlockKind::Closing => s.top_closing += 1,
                BlockKind::Origin => s.top_origin += 1,
            }
        }
        for c in 0..self.cycles.len() {
            s.per_cycle.push(self.cycle_normals(c as u32));
        }
        s
    }
}

impl World for AdversaryWorld {
    fn origin(&self) -> VertexId {
        VertexId(0)
    }

    fn observe(&mut self, v: VertexId) -> Result<Vec<Edge>, WorldError> {
        if v.index() >= self.vrec.len() {
            return Err(WorldError::UnknownVertex(v));
        }
        if self.graph.is_some() {
            return Ok(self.edges_of(v.0));
        }
        self.observe_id(v.0)
            .map_err(|e| WorldError::Inconsistent(e.to_string()))?;
        Ok(self.edges_of(v.0))
    }

    fn finalize(&mut self) -> Result<WeightedGraph, WorldError> {
        self.finish().map_err(|e| WorldError::Inconsistent(e.to_string()))
    }
}
