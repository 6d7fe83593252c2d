//! The top level: lists of level-N blocks hanging off the origin block or a
//! connection vertex, grouped into cycles that each end in a closing block.

use serde_json::json;

use super::world::{bad, AdversaryWorld, BlockKind, Parent, NONE, R};
use super::Topology;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(super) enum Anchor {
    OriginHead(u8),
    VCon { cycle: u32, j: u8 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(super) enum ListEnd {
    Open,
    Final(u32),
    Closing(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(super) enum Owner {
    Arm(u32),
    VconOf(u32),
}

#[derive(Clone, Debug)]
pub(super) struct List {
    pub anchor: Anchor,
    pub blocks: Vec<u32>,
    pub examined: u32,
    pub end: ListEnd,
    pub owner: Owner,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(super) enum CycleKind {
    /// Closes once the arms hold this many examined blocks together.
    Ring(u32),
    /// Grows a final block and a connection vertex on one arm.
    FType,
    /// The last cycle of a chain; closes like a ring.
    Last(u32),
}

#[derive(Clone, Debug)]
pub(super) struct Cycle {
    pub kind: CycleKind,
    pub arms: [u32; 2],
    pub upper: Option<u32>,
    pub f: Option<u32>,
    pub vcon: u32,
    pub vcon_lists: Option<[u32; 3]>,
    /// Closing block with the lists on its side 1 and side 2.
    pub closing: Option<(u32, u32, u32)>,
    /// Lists the closing block will join, once one of them asks for a block.
    pub designation: Option<(u32, u32)>,
}

impl AdversaryWorld {
    fn half(&self) -> u32 {
        (self.x / 2) as u32
    }

    fn new_list(&mut self, anchor: Anchor, owner: Owner) -> u32 {
        self.lists.push(List {
            anchor,
            blocks: Vec::new(),
            examined: 0,
            end: ListEnd::Open,
            owner,
        });
        (self.lists.len() - 1) as u32
    }

    fn new_cycle(&mut self, kind: CycleKind, arms: [u32; 2]) -> u32 {
        let c = self.cycles.len() as u32;
        self.cycles.push(Cycle {
            kind,
            arms,
            upper: None,
            f: None,
            vcon: NONE,
            vcon_lists: None,
            closing: None,
            designation: None,
        });
        for l in arms {
            self.lists[l as usize].owner = Owner::Arm(c);
        }
        let step = self.steps_taken();
        self.log.push(
            step,
            "cycle",
            || json!({"cycle": c, "kind": format!("{kind:?}"), "arms": arms}),
        );
        c
    }

    pub(super) fn init_top(&mut self) {
        let a0 = self.new_list(Anchor::OriginHead(0), Owner::Arm(0));
        let a1 = self.new_list(Anchor::OriginHead(1), Owner::Arm(0));
        let kind = match self.params.topology {
            Topology::Chain => CycleKind::FType,
            _ => CycleKind::Ring(self.x as u32 + 1),
        };
        self.new_cycle(kind, [a0, a1]);
    }

    fn cycle_of(&self, l: u32) -> u32 {
        match self.lists[l as usize].owner {
            Owner::Arm(c) | Owner::VconOf(c) => c,
        }
    }

    pub(super) fn partial(&self, l: u32) -> bool {
        let list = &self.lists[l as usize];
        list.blocks.len() as u32 > list.examined
    }

    fn lower(&self, c: u32) -> Option<u32> {
        let cy = &self.cycles[c as usize];
        let up = cy.upper?;
        Some(if cy.arms[0] == up { cy.arms[1] } else { cy.arms[0] })
    }

    /// Appends the next block to list `l`.
    pub(super) fn open(&mut self, l: u32) -> R<u32> {
        let c = self.cycle_of(l);
        let top = self.top;
        let step = self.steps_taken();
        if let Some((a, b)) = self.cycles[c as usize].designation {
            if a == l || b == l {
                let other = if a == l { b } else { a };
                let cb = self.create_block(top, BlockKind::Closing, Parent::TopClosing { cycle: c });
                self.lists[l as usize].end = ListEnd::Closing(cb);
                self.lists[other as usize].end = ListEnd::Closing(cb);
                let cy = &mut self.cycles[c as usize];
                cy.closing = Some((cb, l, other));
                cy.designation = None;
                self.log.push(
                    step,
                    "closing",
                    || json!({"cycle": c, "block": cb, "side1": l, "side2": other}),
                );
                return Ok(cb);
            }
        }
        let cy = &self.cycles[c as usize];
        if self.lists[l as usize].owner == Owner::Arm(c)
            && cy.kind == CycleKind::FType
            && cy.upper.is_none()
            && self.lists[l as usize].examined > self.half()
        {
            let f = self.create_block(top, BlockKind::Final, Parent::TopF { cycle: c });
            self.lists[l as usize].end = ListEnd::Final(f);
            let vl = [0u8, 1, 2].map(|j| self.new_list(Anchor::VCon { cycle: c, j }, Owner::VconOf(c)));
            let cy = &mut self.cycles[c as usize];
            cy.upper = Some(l);
            cy.f = Some(f);
            cy.vcon_lists = Some(vl);
            self.log.push(
                step,
                "connection",
                || json!({"cycle": c, "upper": l, "final": f, "lists": vl}),
            );
            let lower = self.lower(c).expect("upper set");
            self.check_closing(c, lower)?;
            return Ok(f);
        }
        let idx = self.lists[l as usize].blocks.len() as u32;
        let b = self.create_block(top, BlockKind::Normal, Parent::List { list: l, idx });
        self.lists[l as usize].blocks.push(b);
        Ok(b)
    }

    pub(super) fn on_list_examined(&mut self, l: u32) -> R<()> {
        self.lists[l as usize].examined += 1;
        match self.lists[l as usize].owner {
            Owner::Arm(c) => match self.cycles[c as usize].kind {
                CycleKind::Ring(k) | CycleKind::Last(k) => self.sum_rule(c, k),
                CycleKind::FType if self.cycles[c as usize].upper.is_some() => self.check_closing(c, l),
                CycleKind::FType => Ok(()),
            },
            Owner::VconOf(c) => self.check_closing(c, l),
        }
    }

    fn settled(&self, c: u32) -> bool {
        let cy = &self.cycles[c as usize];
        cy.closing.is_some() || cy.designation.is_some()
    }

    fn sum_rule(&mut self, c: u32, k: u32) -> R<()> {
        if self.settled(c) {
            return Ok(());
        }
        let [a0, a1] = self.cycles[c as usize].arms;
        if self.lists[a0 as usize].examined + self.lists[a1 as usize].examined >= k {
            self.place_closing_between(c, a0, a1)?;
        }
        Ok(())
    }

    /// Places the closing block of an F-type cycle once the lower arm and
    /// one list behind the connection vertex hold `x/2 + 1` examined blocks.
    fn check_closing(&mut self, c: u32, trigger: u32) -> R<()> {
        if self.settled(c) {
            return Ok(());
        }
        let (Some(lower), Some(vl)) = (self.lower(c), self.cycles[c as usize].vcon_lists) else {
            return Ok(());
        };
        let mut order: Vec<u32> = vl.iter().copied().filter(|&v| v == trigger).collect();
        order.extend(vl.iter().copied().filter(|&v| v != trigger));
        let need = self.half() + 1;
        for v in order {
            if self.lists[lower as usize].examined + self.lists[v as usize].examined >= need
                && self.place_closing_between(c, lower, v)?
            {
                return Ok(());
            }
        }
        Ok(())
    }

    /// Returns false when both lists end in an unexamined block; the
    /// decision then waits for one of them to be examined.
    fn place_closing_between(&mut self, c: u32, a: u32, b: u32) -> R<bool> {
        let (pa, pb) = (self.partial(a), self.partial(b));
        let step = self.steps_taken();
        if pa && pb {
            self.log
                .push(step, "closing_deferred", || json!({"cycle": c, "lists": [a, b]}));
            return Ok(false);
        }
        if pa || pb {
            let (l, other) = if pa { (a, b) } else { (b, a) };
            let cb = self.lists[l as usize].blocks.pop().expect("partial list");
            let blk = &mut self.blocks[cb as usize];
            if blk.kind != BlockKind::Normal || blk.examined {
                return bad(format!("block {cb} cannot become a closing block"));
            }
            blk.kind = BlockKind::Closing;
            blk.parent = Parent::TopClosing { cycle: c };
            self.lists[l as usize].end = ListEnd::Closing(cb);
            self.lists[other as usize].end = ListEnd::Closing(cb);
            self.cycles[c as usize].closing = Some((cb, l, other));
            self.log.push(
                step,
                "closing",
                || json!({"cycle": c, "block": cb, "side1": l, "side2": other, "converted": true}),
            );
        } else {
            self.cycles[c as usize].designation = Some((a, b));
            self.log
                .push(step, "designate", || json!({"cycle": c, "lists": [a, b]}));
        }
        if self.cycles[c as usize].kind == CycleKind::FType {
            let vl = self.cycles[c as usize].vcon_lists.expect("F-type cycle has lists");
            let rest: Vec<u32> = vl.iter().copied().filter(|&v| v != a && v != b).collect();
            let next = c + 1;
            let kind = if next < self.x as u32 {
                CycleKind::FType
            } else {
                CycleKind::Last(self.x as u32)
            };
            self.new_cycle(kind, [rest[0], rest[1]]);
            if let CycleKind::Last(k) = kind {
                self.sum_rule(next, k)?;
            }
        }
        Ok(true)
    }

    fn virtual_step(&mut self, l: u32) -> R<()> {
        if self.partial(l) {
            let b = *self.lists[l as usize].blocks.last().expect("partial");
            return self.examine(b);
        }
        let b = self.open(l)?;
        if self.blocks[b as usize].kind == BlockKind::Normal {
            self.examine(b)?;
        }
        Ok(())
    }

    /// Extends every cycle the way an agent walking straight on would,
    /// until all closing blocks are placed.
    pub(super) fn close_all_cycles(&mut self) -> R<()> {
        let mut c = 0u32;
        while (c as usize) < self.cycles.len() {
            let mut guard = 0u32;
            while self.cycles[c as usize].closing.is_none() {
                guard += 1;
                if guard > 4 * self.x as u32 + 16 {
                    return bad(format!("cycle {c} does not close"));
                }
                let cy = self.cycles[c as usize].clone();
                if let Some((a, _)) = cy.designation {
                    self.open(a)?;
                    continue;
                }
                match (cy.kind, cy.upper) {
                    (CycleKind::FType, None) => {
                        let [a0, a1] = cy.arms;
                        let u = if self.lists[a0 as usize].examined > self.lists[a1 as usize].examined {
                            a0
                        } else {
                            a1
                        };
                        if self.lists[u as usize].examined > self.half() && !self.partial(u) {
                            self.open(u)?;
                        } else {
                            self.virtual_step(u)?;
                        }
                    }
                    (CycleKind::FType, Some(_)) => {
                        let lower = self.lower(c).expect("upper set");
                        self.virtual_step(lower)?;
                    }
                    _ => self.virtual_step(cy.arms[1])?,
                }
            }
            c += 1;
        }
        Ok(())
    }

    /// Normal top-level blocks that belong to cycle `c`.
    pub(super) fn cycle_normals(&self, c: u32) -> usize {
        self.lists
            .iter()
            .filter(|l| matches!(l.owner, Owner::Arm(o) | Owner::VconOf(o) if o == c))
            .map(|l| l.blocks.len())
            .sum()
    }
}
