//! Tents & Trees as a counted-placement problem: tents act like pieces that
//! attack the 8 adjacent cells, every tree needs a tent on one of its (up to
//! four) orthogonal neighbors, and rows/columns carry exact tent counts.
//!
//! Tree cells leave the variable set entirely; cells not orthogonally
//! adjacent to any tree are fixed to zero. Each tree contributes a penalty
//! centered at 3/2 (one or two adjacent tents; three would force a diagonal
//! contact), so a solvable instance has energy exactly `trees / 4`.

use std::collections::BTreeSet;

use crate::board::{Board, CellRef};
use crate::puzzle::BuildError;
use crate::qubo::{QuarterInt, Qubo};
use crate::vars::VarMap;

#[derive(Clone, Debug)]
pub struct TentsTreesProblem {
    pub size: usize,
    pub trees: BTreeSet<CellRef>,
    pub row_counts: Vec<u32>,
    pub col_counts: Vec<u32>,
}

impl TentsTreesProblem {
    pub fn new(
        size: usize,
        trees: impl IntoIterator<Item = CellRef>,
        row_counts: Vec<u32>,
        col_counts: Vec<u32>,
    ) -> Self {
        TentsTreesProblem {
            size,
            trees: trees.into_iter().collect(),
            row_counts,
            col_counts,
        }
    }

    pub fn validate(&self) -> Result<(), BuildError> {
        if self.row_counts.len() != self.size || self.col_counts.len() != self.size {
            return Err(BuildError::Invalid(format!(
                "expected {} row and column counts",
                self.size
            )));
        }
        let rows: u32 = self.row_counts.iter().sum();
        let cols: u32 = self.col_counts.iter().sum();
        if rows != cols {
            return Err(BuildError::Invalid(format!(
                "row counts sum to {rows} but column counts sum to {cols}"
            )));
        }
        for &t in &self.trees {
            if t.row < 1 || t.row > self.size || t.col < 1 || t.col > self.size {
                return Err(BuildError::Invalid(format!("tree {t} is off the board")));
            }
        }
        Ok(())
    }

    /// Board with tree cells removed from the variable set.
    pub fn board(&self) -> Board {
        let mut b = Board::rect(self.size, self.size);
        for &t in &self.trees {
            b.deactivate(t).expect("validated tree position");
        }
        b
    }

    /// Orthogonal non-tree neighbors of a tree: the cells its tent may use.
    pub fn tree_slots(&self, board: &Board, tree: CellRef) -> Vec<CellRef> {
        [(0, 1), (0, -1), (1, 0), (-1, 0)]
            .iter()
            .filter_map(|&(dr, dc)| board.step(tree, dr, dc))
            .filter(|&c| board.is_active(c))
            .collect()
    }
}

/// Compiles the instance. Returns the model, the variable map, and the
/// number of half-target penalties (= number of trees); the energy floor of
/// a solvable instance is that count over 4.
pub fn build_tents_trees(
    p: &TentsTreesProblem,
) -> Result<(Qubo, VarMap, usize), BuildError> {
    p.validate()?;
    let board = p.board();
    let mut vm = VarMap::new(&board);

    // Only cells serving some tree can hold a tent.
    let mut candidates: BTreeSet<CellRef> = BTreeSet::new();
    for &tree in &p.trees {
        candidates.extend(p.tree_slots(&board, tree));
    }
    for c in board.active_cells() {
        if !candidates.contains(&c) {
            vm.fix(c, false, "cell serves no tree")?;
        }
    }

    let mut q = Qubo::new(vm.num_free());

    for i in 1..=p.size {
        let cells: Vec<CellRef> = (1..=p.size)
            .map(|j| CellRef::new(i, j))
            .filter(|&c| board.is_active(c))
            .collect();
        add_count_term(&mut q, &vm, &cells, p.row_counts[i - 1] as i64)?;
    }
    for j in 1..=p.size {
        let cells: Vec<CellRef> = (1..=p.size)
            .map(|i| CellRef::new(i, j))
            .filter(|&c| board.is_active(c))
            .collect();
        add_count_term(&mut q, &vm, &cells, p.col_counts[j - 1] as i64)?;
    }

    // No two tents adjacent, each unordered pair exactly once.
    for a in board.active_cells() {
        for b in board.adjacency_cells(a, true, true) {
            q.add_pair_interaction(vm.resolve(a)?, vm.resolve(b)?, QuarterInt::ONE)?;
        }
    }

    // One or two tents around each tree.
    for &tree in &p.trees {
        let slots = p.tree_slots(&board, tree);
        if slots.is_empty() {
            // A tree with no usable neighbor can never be served; the
            // constant keeps the energy above the floor.
            q.add_offset(QuarterInt::from_quarters(9));
            continue;
        }
        let lits: Vec<_> = slots
            .iter()
            .map(|&c| vm.resolve(c))
            .collect::<Result<_, _>>()?;
        q.add_square_penalty(QuarterInt::from_halves(3), &lits, 1)?;
    }

    Ok((q, vm, p.trees.len()))
}

fn add_count_term(
    q: &mut Qubo,
    vm: &VarMap,
    cells: &[CellRef],
    target: i64,
) -> Result<(), BuildError> {
    if cells.is_empty() {
        q.add_offset(QuarterInt::from_quarters(4 * target * target));
        return Ok(());
    }
    let lits: Vec<_> = cells.iter().map(|&c| vm.resolve(c)).collect::<Result<_, _>>()?;
    q.add_square_penalty(QuarterInt::from_int(target), &lits, 1)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vars::CellState;

    fn cell(r: usize, c: usize) -> CellRef {
        CellRef::new(r, c)
    }

    fn exhaustive_min(q: &Qubo) -> (QuarterInt, Vec<Vec<bool>>) {
        let n = q.num_vars();
        let mut best = None;
        let mut minima = Vec::new();
        for mask in 0u64..1 << n {
            let bits: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
            let e = q.energy(&bits).unwrap();
            match best {
                None => {
                    best = Some(e);
                    minima.push(bits);
                }
                Some(b) if e < b => {
                    best = Some(e);
                    minima.clear();
                    minima.push(bits);
                }
                Some(b) if e == b => minima.push(bits),
                _ => {}
            }
        }
        (best.unwrap(), minima)
    }

    #[test]
    fn single_tree_floor_is_quarter() {
        let p = TentsTreesProblem::new(3, [cell(2, 2)], vec![0, 1, 0], vec![1, 0, 0]);
        let (q, vm, trees) = build_tents_trees(&p).unwrap();
        assert_eq!(trees, 1);
        // Only the four orthogonal neighbors of the tree stay free.
        assert_eq!(vm.num_free(), 4);
        assert_eq!(vm.state(cell(1, 1)), CellState::Fixed(false));
        let (min, minima) = exhaustive_min(&q);
        assert_eq!(min, QuarterInt::from_quarters(1));
        // Row 2 needs one tent, column 1 needs it too: only (2,1) works.
        assert_eq!(minima.len(), 1);
        let values = vm.decode(&minima[0]);
        let placed: Vec<CellRef> = (0..9)
            .filter(|&i| values[i])
            .map(|i| CellRef::new(i / 3 + 1, i % 3 + 1))
            .collect();
        assert_eq!(placed, vec![cell(2, 1)]);
    }

    #[test]
    fn adjacent_tents_cost_at_least_one_extra() {
        // Two trees in opposite corners of a 4x4; compare a valid layout
        // against one with two diagonally adjacent tents.
        let p = TentsTreesProblem::new(
            4,
            [cell(1, 1), cell(4, 4)],
            vec![1, 0, 0, 1],
            vec![0, 1, 1, 0],
        );
        let (q, vm, _) = build_tents_trees(&p).unwrap();
        let floor = QuarterInt::from_halves(1);
        let (min, minima) = exhaustive_min(&q);
        assert_eq!(min, floor);
        for bits in &minima {
            let values = vm.decode(bits);
            let tents: Vec<CellRef> = (0..16)
                .filter(|&i| values[i])
                .map(|i| CellRef::new(i / 4 + 1, i % 4 + 1))
                .collect();
            for (a, b) in [(0, 1)].map(|(x, y)| (tents[x], tents[y])) {
                assert!(a.row.abs_diff(b.row) > 1 || a.col.abs_diff(b.col) > 1);
            }
        }
    }

    #[test]
    fn inconsistent_counts_rejected() {
        let p = TentsTreesProblem::new(3, [cell(2, 2)], vec![1, 0, 0], vec![1, 1, 0]);
        assert!(build_tents_trees(&p).is_err());
    }
}
