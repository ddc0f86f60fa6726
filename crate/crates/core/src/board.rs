//! Board geometry: rectangular grids with an active-cell mask, optional
//! toroidal wrapping, regions, and the diagonal / adjacency neighborhoods
//! the penalty builders sum over.

use std::collections::BTreeSet;

use thiserror::Error;

/// 1-based cell coordinate. Ordering is row-major (row, then column).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellRef {
    pub row: usize,
    pub col: usize,
}

impl CellRef {
    pub fn new(row: usize, col: usize) -> Self {
        CellRef { row, col }
    }

    /// Lexicographic (col, row) comparison: leftmost wins, then topmost.
    /// This is the order that decides which aliased cell keeps its variable.
    pub fn leftmost_topmost_key(self) -> (usize, usize) {
        (self.col, self.row)
    }
}

impl std::fmt::Display for CellRef {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

/// A cell set with a queen/one count target.
///
/// `q` is the required count, `t = true` allows `q` or `q + 1`, and `p`
/// counts pieces already placed in the region by the initial condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Region {
    pub id: String,
    pub cells: BTreeSet<CellRef>,
    pub q: u32,
    pub t: bool,
    pub p: u32,
}

impl Region {
    pub fn new(id: impl Into<String>, cells: impl IntoIterator<Item = CellRef>, q: u32) -> Self {
        Region {
            id: id.into(),
            cells: cells.into_iter().collect(),
            q,
            t: false,
            p: 0,
        }
    }

    pub fn flexible(mut self) -> Self {
        self.t = true;
        self
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BoardError {
    #[error("board must have at least one active cell")]
    NoActiveCells,
    #[error("cell {0} is outside the {1}x{2} board")]
    OutOfBounds(CellRef, usize, usize),
    #[error("cell {0} is inactive")]
    InactiveCell(CellRef),
}

/// Rectangular grid with an active mask and independent wrap flags
/// (both set = torus, one set = cylinder).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Board {
    height: usize,
    width: usize,
    active: Vec<bool>,
    pub wrap_rows: bool,
    pub wrap_cols: bool,
}

/// Which diagonal neighborhood a penalty sums over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiagMode {
    /// All diagonal cells including the center cell itself.
    Full,
    /// Only cells in strictly greater rows, so a sum over all cells visits
    /// each unordered pair once.
    BelowOnly,
    /// All diagonal cells except the center; a sum over all cells visits
    /// symmetric pairs twice.
    AllButSelf,
}

/// Diagonal reach of a cell: none, up to `d` steps, or whole diagonals.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiagReach {
    None,
    Within(u32),
    Unbounded,
}

impl DiagReach {
    pub fn steps(self, board: &Board) -> usize {
        match self {
            DiagReach::None => 0,
            DiagReach::Within(d) => d as usize,
            // Enough steps to exhaust any diagonal, wrapped or not.
            DiagReach::Unbounded => board.height() * board.width(),
        }
    }
}

impl Board {
    pub fn rect(height: usize, width: usize) -> Self {
        assert!(height >= 1 && width >= 1);
        Board {
            height,
            width,
            active: vec![true; height * width],
            wrap_rows: false,
            wrap_cols: false,
        }
    }

    pub fn with_wrap(mut self, wrap_rows: bool, wrap_cols: bool) -> Self {
        self.wrap_rows = wrap_rows;
        self.wrap_cols = wrap_cols;
        self
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn num_cells(&self) -> usize {
        self.height * self.width
    }

    pub fn contains(&self, cell: CellRef) -> bool {
        (1..=self.height).contains(&cell.row) && (1..=self.width).contains(&cell.col)
    }

    /// Row-major index of an in-bounds cell.
    pub fn index(&self, cell: CellRef) -> usize {
        debug_assert!(self.contains(cell));
        (cell.row - 1) * self.width + (cell.col - 1)
    }

    pub fn cell_at(&self, index: usize) -> CellRef {
        CellRef::new(index / self.width + 1, index % self.width + 1)
    }

    pub fn deactivate(&mut self, cell: CellRef) -> Result<(), BoardError> {
        if !self.contains(cell) {
            return Err(BoardError::OutOfBounds(cell, self.height, self.width));
        }
        let idx = self.index(cell);
        self.active[idx] = false;
        if self.active.iter().all(|a| !a) {
            return Err(BoardError::NoActiveCells);
        }
        Ok(())
    }

    pub fn is_active(&self, cell: CellRef) -> bool {
        self.contains(cell) && self.active[self.index(cell)]
    }

    pub fn cells(&self) -> impl Iterator<Item = CellRef> + '_ {
        (0..self.num_cells()).map(|i| self.cell_at(i))
    }

    pub fn active_cells(&self) -> impl Iterator<Item = CellRef> + '_ {
        self.cells().filter(|&c| self.is_active(c))
    }

    pub fn num_active(&self) -> usize {
        self.active.iter().filter(|a| **a).count()
    }

    /// One step from `cell` in direction `(dr, dc)`, honoring wrap flags.
    /// Returns `None` when the step leaves a non-wrapping edge.
    pub fn step(&self, cell: CellRef, dr: isize, dc: isize) -> Option<CellRef> {
        let row = wrap_coord(cell.row, dr, self.height, self.wrap_rows)?;
        let col = wrap_coord(cell.col, dc, self.width, self.wrap_cols)?;
        Some(CellRef::new(row, col))
    }

    /// Walks up to `max_steps` cells from `cell` along `(dr, dc)`, stopping
    /// at a non-wrapping edge or when a wrapped walk closes its cycle.
    pub fn walk(&self, cell: CellRef, dr: isize, dc: isize, max_steps: usize) -> Vec<CellRef> {
        let mut out = Vec::new();
        let mut cur = cell;
        for _ in 0..max_steps {
            match self.step(cur, dr, dc) {
                Some(next) if next != cell => {
                    out.push(next);
                    cur = next;
                }
                _ => break,
            }
        }
        out
    }

    /// Active cells on the four diagonals of `cell` within `reach` steps.
    pub fn diagonal_cells(&self, cell: CellRef, reach: DiagReach, mode: DiagMode) -> BTreeSet<CellRef> {
        let steps = reach.steps(self);
        let dirs: &[(isize, isize)] = match mode {
            DiagMode::BelowOnly => &[(1, 1), (1, -1)],
            _ => &[(1, 1), (1, -1), (-1, 1), (-1, -1)],
        };
        let mut out = BTreeSet::new();
        for &(dr, dc) in dirs {
            for c in self.walk(cell, dr, dc, steps) {
                if self.is_active(c) && c != cell {
                    out.insert(c);
                }
            }
        }
        if mode == DiagMode::Full && self.is_active(cell) {
            out.insert(cell);
        }
        out
    }

    /// Active neighbors in the 8-neighborhood (or 4 diagonal ones when
    /// `include_orthogonal` is off). With `below_only`, keeps only the cells
    /// a left-to-right, top-to-bottom sweep has not yet visited, so pair
    /// terms count each unordered adjacent pair exactly once.
    pub fn adjacency_cells(
        &self,
        cell: CellRef,
        include_orthogonal: bool,
        below_only: bool,
    ) -> BTreeSet<CellRef> {
        let mut dirs: Vec<(isize, isize)> = vec![(1, 1), (1, -1)];
        if !below_only {
            dirs.extend([(-1, 1), (-1, -1)]);
        }
        if include_orthogonal {
            dirs.extend([(0, 1), (1, 0)]);
            if !below_only {
                dirs.extend([(0, -1), (-1, 0)]);
            }
        }
        let mut out = BTreeSet::new();
        for (dr, dc) in dirs {
            if let Some(c) = self.step(cell, dr, dc) {
                if self.is_active(c) && c != cell {
                    out.insert(c);
                }
            }
        }
        out
    }
}

fn wrap_coord(pos: usize, delta: isize, len: usize, wrap: bool) -> Option<usize> {
    let raw = pos as isize + delta;
    if (1..=len as isize).contains(&raw) {
        Some(raw as usize)
    } else if wrap {
        Some((raw - 1).rem_euclid(len as isize) as usize + 1)
    } else {
        None
    }
}

/// Smallest prime factor, used for the toroidal queens solvability warning.
pub fn min_prime_factor(n: usize) -> usize {
    if n < 2 {
        return n;
    }
    let mut f = 2;
    while f * f <= n {
        if n % f == 0 {
            return f;
        }
        f += 1;
    }
    n
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cells(list: &[(usize, usize)]) -> BTreeSet<CellRef> {
        list.iter().map(|&(r, c)| CellRef::new(r, c)).collect()
    }

    #[test]
    fn adjacent_diagonals_center() {
        let b = Board::rect(5, 5);
        let got = b.diagonal_cells(CellRef::new(3, 3), DiagReach::Within(1), DiagMode::AllButSelf);
        assert_eq!(got, cells(&[(2, 2), (2, 4), (4, 2), (4, 4)]));
    }

    #[test]
    fn below_only_full_diagonal_from_corner() {
        let b = Board::rect(5, 5);
        let got = b.diagonal_cells(CellRef::new(1, 1), DiagReach::Unbounded, DiagMode::BelowOnly);
        assert_eq!(got, cells(&[(2, 2), (3, 3), (4, 4), (5, 5)]));
    }

    #[test]
    fn toroidal_diagonal_closes_cycle() {
        // On the 5x5 torus each diagonal direction from (1,1) visits the
        // other 4 cells of its cycle; enumerate them modulo 5.
        let b = Board::rect(5, 5).with_wrap(true, true);
        let walk = b.walk(CellRef::new(1, 1), 1, 1, 100);
        let expect: Vec<CellRef> = (1..5)
            .map(|k| CellRef::new(k % 5 + 1, k % 5 + 1))
            .collect();
        assert_eq!(walk, expect);

        // All four directions together: the two wrapped diagonal cycles
        // through (1,1), minus the cell itself.
        let got = b.diagonal_cells(CellRef::new(1, 1), DiagReach::Unbounded, DiagMode::AllButSelf);
        let mut expect = BTreeSet::new();
        for k in 1..5usize {
            expect.insert(CellRef::new(k + 1, k + 1));
            expect.insert(CellRef::new(k + 1, 5 - k + 1));
        }
        assert_eq!(got, expect);
    }

    #[test]
    fn below_only_visits_each_pair_once() {
        // Brute force on 4x4: summing D-below over all cells must hit every
        // unordered same-diagonal pair exactly once.
        let b = Board::rect(4, 4);
        let mut seen = std::collections::BTreeMap::new();
        for cell in b.cells() {
            for other in b.diagonal_cells(cell, DiagReach::Unbounded, DiagMode::BelowOnly) {
                let key = if cell < other { (cell, other) } else { (other, cell) };
                *seen.entry(key).or_insert(0) += 1;
            }
        }
        let mut expect = std::collections::BTreeMap::new();
        for a in b.cells() {
            for c in b.cells() {
                if a < c {
                    let dr = a.row.abs_diff(c.row);
                    let dc = a.col.abs_diff(c.col);
                    if dr == dc && dr > 0 {
                        expect.insert((a, c), 1);
                    }
                }
            }
        }
        assert_eq!(seen, expect);
    }

    #[test]
    fn adjacency_counts() {
        let b = Board::rect(3, 3);
        assert_eq!(b.adjacency_cells(CellRef::new(2, 2), true, false).len(), 8);
        assert_eq!(b.adjacency_cells(CellRef::new(1, 1), true, false).len(), 3);
        let below = b.adjacency_cells(CellRef::new(2, 2), true, true);
        assert_eq!(below, cells(&[(2, 3), (3, 1), (3, 2), (3, 3)]));
    }

    #[test]
    fn below_adjacency_counts_each_pair_once() {
        let b = Board::rect(3, 3);
        let mut count = 0;
        for cell in b.cells() {
            count += b.adjacency_cells(cell, true, true).len();
        }
        let mut expect = 0;
        for a in b.cells() {
            for c in b.cells() {
                if a < c && a.row.abs_diff(c.row) <= 1 && a.col.abs_diff(c.col) <= 1 {
                    expect += 1;
                }
            }
        }
        assert_eq!(count, expect);
    }

    #[test]
    fn inactive_cells_are_skipped() {
        let mut b = Board::rect(3, 3);
        b.deactivate(CellRef::new(2, 2)).unwrap();
        let got = b.diagonal_cells(CellRef::new(1, 1), DiagReach::Unbounded, DiagMode::BelowOnly);
        assert_eq!(got, cells(&[(3, 3)]));
    }

    #[test]
    fn min_prime_factor_values() {
        assert_eq!(min_prime_factor(6), 2);
        assert_eq!(min_prime_factor(35), 5);
        assert_eq!(min_prime_factor(7), 7);
    }
}
