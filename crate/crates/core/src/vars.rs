//! Per-cell variable bookkeeping for the preprocessing eliminations.
//!
//! Every cell is either a free variable, fixed to a constant, or aliased to
//! another cell with a parity (same or opposite value). Aliases form a
//! union-find forest whose class representative is the leftmost (then
//! topmost) cell, so eliminations keep the variable the reduction rules say
//! survives. Remaining free representatives get dense indices `0..k` in
//! row-major order.

use std::fmt;

use thiserror::Error;

use crate::board::{Board, CellRef};
use crate::qubo::Literal;

/// Contradiction found while fixing/aliasing cells, named after the rule
/// that exposed it.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("infeasible: {rule}")]
pub struct Infeasible {
    pub rule: String,
}

impl Infeasible {
    pub fn new(rule: impl Into<String>) -> Self {
        Infeasible { rule: rule.into() }
    }
}

#[derive(Clone, Copy, Debug)]
struct Node {
    parent: usize,
    /// Parity relative to the parent: true means opposite value.
    flip: bool,
    /// Fixed value, meaningful on roots only.
    fixed: Option<bool>,
}

/// Resolution state of one cell, for reports and tests.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CellState {
    Inactive,
    Free { var: usize },
    Fixed(bool),
    Aliased { root: CellRef, opposite: bool },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct VarSummary {
    pub cells: usize,
    pub inactive: usize,
    pub fixed_zero: usize,
    pub fixed_one: usize,
    pub aliased: usize,
    pub free: usize,
}

#[derive(Clone, Debug)]
pub struct VarMap {
    height: usize,
    width: usize,
    active: Vec<bool>,
    nodes: Vec<Node>,
    /// Dense variable index per free root cell.
    index: Vec<Option<usize>>,
    num_free: usize,
    conflict: Option<Infeasible>,
}

impl VarMap {
    pub fn new(board: &Board) -> Self {
        let n = board.num_cells();
        let mut vm = VarMap {
            height: board.height(),
            width: board.width(),
            active: board.cells().map(|c| board.is_active(c)).collect(),
            nodes: (0..n)
                .map(|i| Node {
                    parent: i,
                    flip: false,
                    fixed: None,
                })
                .collect(),
            index: vec![None; n],
            num_free: 0,
            conflict: None,
        };
        vm.reindex();
        vm
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn num_free(&self) -> usize {
        self.num_free
    }

    pub fn conflict(&self) -> Option<&Infeasible> {
        self.conflict.as_ref()
    }

    fn idx(&self, cell: CellRef) -> usize {
        debug_assert!((1..=self.height).contains(&cell.row));
        debug_assert!((1..=self.width).contains(&cell.col));
        (cell.row - 1) * self.width + (cell.col - 1)
    }

    fn cell_at(&self, idx: usize) -> CellRef {
        CellRef::new(idx / self.width + 1, idx % self.width + 1)
    }

    pub fn is_active(&self, cell: CellRef) -> bool {
        self.active[self.idx(cell)]
    }

    /// Root index and accumulated parity, read-only.
    fn find(&self, mut i: usize) -> (usize, bool) {
        let mut parity = false;
        while self.nodes[i].parent != i {
            parity ^= self.nodes[i].flip;
            i = self.nodes[i].parent;
        }
        (i, parity)
    }

    /// Root index and parity, compressing the walked path.
    fn find_mut(&mut self, start: usize) -> (usize, bool) {
        let (root, parity) = self.find(start);
        let mut i = start;
        let mut p = parity;
        while self.nodes[i].parent != i {
            let next = self.nodes[i].parent;
            let next_p = p ^ self.nodes[i].flip;
            self.nodes[i].parent = root;
            self.nodes[i].flip = p;
            i = next;
            p = next_p;
        }
        (root, parity)
    }

    fn reindex(&mut self) {
        let mut next = 0;
        for i in 0..self.nodes.len() {
            let is_free_root =
                self.active[i] && self.nodes[i].parent == i && self.nodes[i].fixed.is_none();
            self.index[i] = if is_free_root {
                next += 1;
                Some(next - 1)
            } else {
                None
            };
        }
        self.num_free = next;
    }

    fn record_conflict(&mut self, err: Infeasible) -> Result<bool, Infeasible> {
        if self.conflict.is_none() {
            self.conflict = Some(err.clone());
        }
        Err(err)
    }

    /// Fixes a cell to a constant, propagating through its alias class.
    /// Returns whether the map changed.
    pub fn fix(&mut self, cell: CellRef, value: bool, rule: &str) -> Result<bool, Infeasible> {
        if !self.is_active(cell) {
            if value {
                return self.record_conflict(Infeasible::new(format!(
                    "{rule}: cell {cell} is inactive but required to be 1"
                )));
            }
            return Ok(false);
        }
        let (root, parity) = self.find_mut(self.idx(cell));
        let root_value = value ^ parity;
        match self.nodes[root].fixed {
            Some(existing) if existing != root_value => self.record_conflict(Infeasible::new(
                format!("{rule}: cell {cell} already forced to the opposite value"),
            )),
            Some(_) => Ok(false),
            None => {
                self.nodes[root].fixed = Some(root_value);
                self.reindex();
                Ok(true)
            }
        }
    }

    pub fn alias_equal(&mut self, a: CellRef, b: CellRef, rule: &str) -> Result<bool, Infeasible> {
        self.union(a, b, false, rule)
    }

    pub fn alias_cross(&mut self, a: CellRef, b: CellRef, rule: &str) -> Result<bool, Infeasible> {
        self.union(a, b, true, rule)
    }

    fn union(&mut self, a: CellRef, b: CellRef, opposite: bool, rule: &str) -> Result<bool, Infeasible> {
        assert_ne!(a, b, "cannot alias a cell with itself");
        assert!(self.is_active(a) && self.is_active(b), "alias endpoints must be active");
        let (ra, pa) = self.find_mut(self.idx(a));
        let (rb, pb) = self.find_mut(self.idx(b));
        // value(a) = value(b) ^ opposite, so root_a = root_b ^ flip:
        let flip = pa ^ pb ^ opposite;
        if ra == rb {
            if flip {
                return self.record_conflict(Infeasible::new(format!(
                    "{rule}: cells {a} and {b} forced both equal and opposite"
                )));
            }
            return Ok(false);
        }
        // The leftmost (then topmost) representative keeps its variable.
        let (winner, loser) = if self.cell_at(ra).leftmost_topmost_key()
            <= self.cell_at(rb).leftmost_topmost_key()
        {
            (ra, rb)
        } else {
            (rb, ra)
        };
        match (self.nodes[winner].fixed, self.nodes[loser].fixed) {
            (Some(w), Some(l)) if w != (l ^ flip) => {
                return self.record_conflict(Infeasible::new(format!(
                    "{rule}: cells {a} and {b} fixed to incompatible values"
                )));
            }
            (None, Some(l)) => self.nodes[winner].fixed = Some(l ^ flip),
            _ => {}
        }
        self.nodes[loser].parent = winner;
        self.nodes[loser].flip = flip;
        self.nodes[loser].fixed = None;
        self.reindex();
        Ok(true)
    }

    /// Literal of a cell through its alias chain: the root's variable with
    /// accumulated parity, or a constant. Inactive cells resolve to 0.
    pub fn resolve(&self, cell: CellRef) -> Result<Literal, Infeasible> {
        if let Some(c) = &self.conflict {
            return Err(c.clone());
        }
        if !self.is_active(cell) {
            return Ok(Literal::Zero);
        }
        let (root, parity) = self.find(self.idx(cell));
        Ok(match self.nodes[root].fixed {
            Some(v) => Literal::from_const(v ^ parity),
            None => {
                let var = self.index[root].expect("free root has an index");
                if parity {
                    Literal::Neg(var)
                } else {
                    Literal::Pos(var)
                }
            }
        })
    }

    pub fn state(&self, cell: CellRef) -> CellState {
        let i = self.idx(cell);
        if !self.active[i] {
            return CellState::Inactive;
        }
        let (root, parity) = self.find(i);
        match self.nodes[root].fixed {
            Some(v) => CellState::Fixed(v ^ parity),
            None if root == i => CellState::Free {
                var: self.index[root].expect("free root has an index"),
            },
            None => CellState::Aliased {
                root: self.cell_at(root),
                opposite: parity,
            },
        }
    }

    pub fn cells(&self) -> impl Iterator<Item = CellRef> + '_ {
        (0..self.nodes.len()).map(|i| self.cell_at(i))
    }

    pub fn summary(&self) -> VarSummary {
        let mut s = VarSummary {
            cells: self.nodes.len(),
            ..VarSummary::default()
        };
        for cell in self.cells() {
            match self.state(cell) {
                CellState::Inactive => s.inactive += 1,
                CellState::Fixed(false) => s.fixed_zero += 1,
                CellState::Fixed(true) => s.fixed_one += 1,
                CellState::Aliased { .. } => s.aliased += 1,
                CellState::Free { .. } => s.free += 1,
            }
        }
        s
    }

    /// Expands an assignment over the free variables into full board values,
    /// row-major; inactive cells read as 0.
    pub fn decode(&self, bits: &[bool]) -> Vec<bool> {
        assert_eq!(bits.len(), self.num_free);
        self.cells()
            .map(|cell| match self.resolve(cell) {
                Ok(lit) => lit.value(bits),
                Err(_) => false,
            })
            .collect()
    }

    /// Checks that full board values are consistent with every fixing and
    /// alias in the map. Used to validate preprocessing soundness.
    pub fn is_consistent_with(&self, values: &[bool]) -> bool {
        assert_eq!(values.len(), self.nodes.len());
        self.cells().all(|cell| {
            let i = self.idx(cell);
            match self.state(cell) {
                CellState::Inactive => !values[i],
                CellState::Fixed(v) => values[i] == v,
                CellState::Aliased { root, opposite } => {
                    values[i] == values[self.idx(root)] ^ opposite
                }
                CellState::Free { .. } => true,
            }
        })
    }
}

impl fmt::Display for VarSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "cells {} (inactive {}), fixed0 {}, fixed1 {}, aliased {}, free {}",
            self.cells, self.inactive, self.fixed_zero, self.fixed_one, self.aliased, self.free
        )
    }
}
