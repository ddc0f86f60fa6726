//! Ground truth independent of the QUBO pipeline: literal constraint
//! checkers and a backtracking enumerator for every puzzle family.
//!
//! This module reads problem *data* (boards, targets, symbols, move
//! patterns) but reimplements all derived geometry (diagonal walks,
//! neighborhoods, piece reach, repetition windows) with its own code, so a
//! bug shared with the builders cannot cancel out of a comparison.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::board::{Board, CellRef, DiagReach};
use crate::pieces::{MovePattern, PiecesProblem};
use crate::puzzle::Puzzle;
use crate::queens::QueensProblem;
use crate::takuzu::{SymbolKind, TakuzuProblem};
use crate::tents::TentsTreesProblem;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("assignment has {got} values, expected {expected}")]
    WrongLength { got: usize, expected: usize },
    #[error("{0}")]
    Invalid(String),
}

/// Constraint families, named after the rules they check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstraintKind {
    Initial,
    Row,
    Column,
    Diagonal,
    Region,
    Adjacency,
    Threat,
    Regularity,
    Repetition,
    EqualSymbol,
    CrossSymbol,
    NonRepetition,
}

impl std::fmt::Display for ConstraintKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            ConstraintKind::Initial => "initial",
            ConstraintKind::Row => "row",
            ConstraintKind::Column => "column",
            ConstraintKind::Diagonal => "diagonal",
            ConstraintKind::Region => "region",
            ConstraintKind::Adjacency => "adjacency",
            ConstraintKind::Threat => "threat",
            ConstraintKind::Regularity => "regularity",
            ConstraintKind::Repetition => "repetition",
            ConstraintKind::EqualSymbol => "equal-symbol",
            ConstraintKind::CrossSymbol => "cross-symbol",
            ConstraintKind::NonRepetition => "non-repetition",
        };
        f.write_str(name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub constraint: ConstraintKind,
    pub cells: Vec<CellRef>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub violations: Vec<Violation>,
}

impl VerifyReport {
    pub fn satisfied(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, constraint: ConstraintKind, cells: Vec<CellRef>) {
        self.violations.push(Violation { constraint, cells });
    }
}

/// Outcome of [`enumerate_solutions`]: all solutions in a fixed depth-first
/// order, up to the cap.
#[derive(Clone, Debug)]
pub struct Enumeration {
    pub solutions: Vec<Vec<bool>>,
    /// False when the search stopped at the cap, making the count partial.
    pub complete: bool,
}

// ---------------------------------------------------------------------------
// Oracle-local geometry. Same coordinate conventions as the rest of the
// crate, independent implementations.

fn wrap_step(len: usize, wrap: bool, pos: usize, delta: isize) -> Option<usize> {
    let raw = pos as isize + delta;
    if raw >= 1 && raw <= len as isize {
        Some(raw as usize)
    } else if wrap {
        Some((raw - 1).rem_euclid(len as isize) as usize + 1)
    } else {
        None
    }
}

fn step(board: &Board, cell: CellRef, dr: isize, dc: isize) -> Option<CellRef> {
    let row = wrap_step(board.height(), board.wrap_rows, cell.row, dr)?;
    let col = wrap_step(board.width(), board.wrap_cols, cell.col, dc)?;
    Some(CellRef::new(row, col))
}

/// Cells along one direction, stopping at a border or after a full wrap
/// cycle, at most `limit` steps.
fn ray(board: &Board, from: CellRef, dr: isize, dc: isize, limit: usize) -> Vec<CellRef> {
    let mut out = Vec::new();
    let mut cur = from;
    for _ in 0..limit {
        match step(board, cur, dr, dc) {
            Some(next) if next != from => {
                out.push(next);
                cur = next;
            }
            _ => break,
        }
    }
    out
}

fn diag_limit(board: &Board, reach: DiagReach) -> usize {
    match reach {
        DiagReach::None => 0,
        DiagReach::Within(d) => d as usize,
        DiagReach::Unbounded => board.height() * board.width(),
    }
}

/// True when `b` lies on a diagonal of `a` within `a`'s reach.
fn queen_sees(board: &Board, a: CellRef, reach: DiagReach, b: CellRef) -> bool {
    if a == b {
        return false;
    }
    let limit = diag_limit(board, reach);
    if limit == 0 {
        return false;
    }
    if !board.wrap_rows && !board.wrap_cols {
        let dr = a.row.abs_diff(b.row);
        let dc = a.col.abs_diff(b.col);
        return dr == dc && dr >= 1 && dr <= limit;
    }
    [(1, 1), (1, -1), (-1, 1), (-1, -1)]
        .iter()
        .any(|&(dr, dc)| ray(board, a, dr, dc, limit).contains(&b))
}

fn piece_reach(board: &Board, from: CellRef, pattern: &MovePattern) -> Vec<CellRef> {
    let mut out = BTreeSet::new();
    for &(dr, dc, range) in &pattern.rays {
        let limit = match range {
            Some(r) => r as usize,
            None => board.height() * board.width(),
        };
        for c in ray(board, from, dr, dc, limit) {
            if board.is_active(c) {
                out.insert(c);
            }
        }
    }
    for &(dr, dc) in &pattern.jumps {
        if let Some(c) = step(board, from, dr, dc) {
            if c != from && board.is_active(c) {
                out.insert(c);
            }
        }
    }
    out.into_iter().collect()
}

fn kings_adjacent(a: CellRef, b: CellRef) -> bool {
    a != b && a.row.abs_diff(b.row) <= 1 && a.col.abs_diff(b.col) <= 1
}

fn orthogonally_adjacent(a: CellRef, b: CellRef) -> bool {
    a.row.abs_diff(b.row) + a.col.abs_diff(b.col) == 1
}

struct Grid<'a> {
    width: usize,
    values: &'a [bool],
}

impl<'a> Grid<'a> {
    fn new(width: usize, values: &'a [bool]) -> Self {
        Grid { width, values }
    }

    fn at(&self, c: CellRef) -> bool {
        self.values[(c.row - 1) * self.width + (c.col - 1)]
    }

    fn ones(&self, cells: impl IntoIterator<Item = CellRef>) -> Vec<CellRef> {
        cells.into_iter().filter(|&c| self.at(c)).collect()
    }
}

fn expect_len(values: &[bool], expected: usize) -> Result<(), OracleError> {
    if values.len() != expected {
        return Err(OracleError::WrongLength {
            got: values.len(),
            expected,
        });
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Verification.

/// Checks every constraint of the puzzle literally against full board
/// values (row-major, `true` = queen/tent/piece/one).
pub fn verify(puzzle: &Puzzle, values: &[bool]) -> Result<VerifyReport, OracleError> {
    match puzzle {
        Puzzle::NQueens(p) | Puzzle::LQueens(p) | Puzzle::GeneralQueens(p) => {
            verify_queens(p, values)
        }
        Puzzle::Tents(p) => verify_tents(p, values),
        Puzzle::ColouredPieces(p) => verify_pieces(p, values, true),
        Puzzle::MaxPieces { problem, .. } => verify_pieces(problem, values, false),
        Puzzle::Takuzu(p) => verify_takuzu(p, values),
    }
}

fn verify_queens(p: &QueensProblem, values: &[bool]) -> Result<VerifyReport, OracleError> {
    let board = &p.board;
    expect_len(values, board.num_cells())?;
    let grid = Grid::new(board.width(), values);
    let mut report = VerifyReport::default();

    for c in board.cells() {
        if grid.at(c) && !board.is_active(c) {
            return Err(OracleError::Invalid(format!("queen on inactive cell {c}")));
        }
    }
    for &g in &p.initial {
        if !grid.at(g) {
            report.push(ConstraintKind::Initial, vec![g]);
        }
    }
    if let Some(targets) = &p.row_targets {
        for i in 1..=board.height() {
            let cells = (1..=board.width())
                .map(|j| CellRef::new(i, j))
                .filter(|&c| board.is_active(c));
            let queens = grid.ones(cells);
            if queens.len() as u32 != targets[i - 1] {
                report.push(ConstraintKind::Row, queens);
            }
        }
    }
    if let Some(targets) = &p.col_targets {
        for j in 1..=board.width() {
            let cells = (1..=board.height())
                .map(|i| CellRef::new(i, j))
                .filter(|&c| board.is_active(c));
            let queens = grid.ones(cells);
            if queens.len() as u32 != targets[j - 1] {
                report.push(ConstraintKind::Column, queens);
            }
        }
    }
    for region in &p.regions {
        let queens = grid.ones(region.cells.iter().copied());
        let n = queens.len() as u32;
        let ok = n >= region.q && n <= region.q + region.t as u32;
        if !ok {
            report.push(ConstraintKind::Region, queens);
        }
    }
    let queens: Vec<CellRef> = board.active_cells().filter(|&c| grid.at(c)).collect();
    for (idx, &a) in queens.iter().enumerate() {
        for &b in &queens[idx + 1..] {
            if queen_sees(board, a, p.diag_at(a), b) || queen_sees(board, b, p.diag_at(b), a) {
                report.push(ConstraintKind::Diagonal, vec![a, b]);
            }
        }
    }
    Ok(report)
}

fn verify_tents(p: &TentsTreesProblem, values: &[bool]) -> Result<VerifyReport, OracleError> {
    expect_len(values, p.size * p.size)?;
    let grid = Grid::new(p.size, values);
    let mut report = VerifyReport::default();
    let board = Board::rect(p.size, p.size);

    let tents: Vec<CellRef> = board.cells().filter(|&c| grid.at(c)).collect();
    for &t in &tents {
        if p.trees.contains(&t) {
            return Err(OracleError::Invalid(format!("tent on tree cell {t}")));
        }
        if !p.trees.iter().any(|&tree| orthogonally_adjacent(t, tree)) {
            report.push(ConstraintKind::Region, vec![t]);
        }
    }
    for &tree in &p.trees {
        let nearby: Vec<CellRef> = tents
            .iter()
            .copied()
            .filter(|&t| orthogonally_adjacent(t, tree))
            .collect();
        if nearby.is_empty() || nearby.len() > 2 {
            let mut cells = vec![tree];
            cells.extend(nearby);
            report.push(ConstraintKind::Region, cells);
        }
    }
    for (idx, &a) in tents.iter().enumerate() {
        for &b in &tents[idx + 1..] {
            if kings_adjacent(a, b) {
                report.push(ConstraintKind::Adjacency, vec![a, b]);
            }
        }
    }
    for i in 1..=p.size {
        let row = grid.ones((1..=p.size).map(|j| CellRef::new(i, j)));
        if row.len() as u32 != p.row_counts[i - 1] {
            report.push(ConstraintKind::Row, row);
        }
    }
    for j in 1..=p.size {
        let col = grid.ones((1..=p.size).map(|i| CellRef::new(i, j)));
        if col.len() as u32 != p.col_counts[j - 1] {
            report.push(ConstraintKind::Column, col);
        }
    }
    Ok(report)
}

fn verify_pieces(
    p: &PiecesProblem,
    values: &[bool],
    check_regions: bool,
) -> Result<VerifyReport, OracleError> {
    let board = &p.board;
    expect_len(values, board.num_cells())?;
    let grid = Grid::new(board.width(), values);
    let mut report = VerifyReport::default();

    let pieces: Vec<CellRef> = board.cells().filter(|&c| grid.at(c)).collect();
    for &c in &pieces {
        if !board.is_active(c) || p.pattern_at(c).is_none() {
            return Err(OracleError::Invalid(format!(
                "piece on a cell that cannot hold one: {c}"
            )));
        }
    }
    for &g in &p.initial {
        if !grid.at(g) {
            report.push(ConstraintKind::Initial, vec![g]);
        }
    }
    if check_regions {
        for region in &p.regions {
            let placed = grid.ones(region.cells.iter().copied());
            if placed.len() != 1 {
                report.push(ConstraintKind::Region, placed);
            }
        }
    }
    for &a in &pieces {
        let pattern = p.pattern_at(a).expect("checked above");
        for b in piece_reach(board, a, pattern) {
            if grid.at(b) {
                report.push(ConstraintKind::Threat, vec![a, b]);
            }
        }
    }
    Ok(report)
}

/// Three-in-a-row windows the repetition rule covers, oracle-side.
fn takuzu_windows(p: &TakuzuProblem) -> Vec<[CellRef; 3]> {
    let board = p.board();
    let mut out = Vec::new();
    let mut dirs: Vec<(isize, isize)> = vec![(0, 1), (1, 0)];
    if p.diagonal_repetition {
        dirs.push((1, 1));
        dirs.push((1, -1));
    }
    for c in board.cells() {
        for &(dr, dc) in &dirs {
            let Some(b) = step(&board, c, dr, dc) else { continue };
            let Some(t) = step(&board, b, dr, dc) else { continue };
            out.push([c, b, t]);
        }
    }
    out
}

fn verify_takuzu(p: &TakuzuProblem, values: &[bool]) -> Result<VerifyReport, OracleError> {
    expect_len(values, p.height * p.width)?;
    let grid = Grid::new(p.width, values);
    let mut report = VerifyReport::default();

    for &c in &p.ones {
        if !grid.at(c) {
            report.push(ConstraintKind::Initial, vec![c]);
        }
    }
    for &c in &p.zeros {
        if grid.at(c) {
            report.push(ConstraintKind::Initial, vec![c]);
        }
    }

    let row_t = p
        .effective_row_targets()
        .map_err(|e| OracleError::Invalid(e.to_string()))?;
    let col_t = p
        .effective_col_targets()
        .map_err(|e| OracleError::Invalid(e.to_string()))?;
    for i in 1..=p.height {
        let ones = grid.ones((1..=p.width).map(|j| CellRef::new(i, j)));
        if ones.len() as u32 != row_t[i - 1] {
            report.push(ConstraintKind::Regularity, ones);
        }
    }
    for j in 1..=p.width {
        let ones = grid.ones((1..=p.height).map(|i| CellRef::new(i, j)));
        if ones.len() as u32 != col_t[j - 1] {
            report.push(ConstraintKind::Regularity, ones);
        }
    }

    for w in takuzu_windows(p) {
        let sum = w.iter().filter(|&&c| grid.at(c)).count();
        if sum == 0 || sum == 3 {
            report.push(ConstraintKind::Repetition, w.to_vec());
        }
    }

    for s in &p.symbols {
        match s.kind {
            SymbolKind::Equal => {
                if grid.at(s.a) != grid.at(s.b) {
                    report.push(ConstraintKind::EqualSymbol, vec![s.a, s.b]);
                }
            }
            SymbolKind::Cross => {
                if grid.at(s.a) == grid.at(s.b) {
                    report.push(ConstraintKind::CrossSymbol, vec![s.a, s.b]);
                }
            }
        }
    }

    for region in &p.regions {
        let ones = grid.ones(region.cells.iter().copied());
        if ones.len() as u32 != region.q {
            report.push(ConstraintKind::Region, ones);
        }
    }

    // No two equal rows, no two equal columns.
    for a in 1..=p.height {
        for b in (a + 1)..=p.height {
            if (1..=p.width).all(|j| grid.at(CellRef::new(a, j)) == grid.at(CellRef::new(b, j))) {
                report.push(
                    ConstraintKind::NonRepetition,
                    vec![CellRef::new(a, 1), CellRef::new(b, 1)],
                );
            }
        }
    }
    for a in 1..=p.width {
        for b in (a + 1)..=p.width {
            if (1..=p.height).all(|i| grid.at(CellRef::new(i, a)) == grid.at(CellRef::new(i, b))) {
                report.push(
                    ConstraintKind::NonRepetition,
                    vec![CellRef::new(1, a), CellRef::new(1, b)],
                );
            }
        }
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Enumeration.

/// Depth-first enumeration of all solutions in row-major cell order (for
/// Takuzu, trying one before zero), bounded by `cap`. Candidate pruning is
/// conservative; each completed board passes through [`verify`] before it
/// counts, so the result is exact whenever `complete` is true.
pub fn enumerate_solutions(puzzle: &Puzzle, cap: usize) -> Result<Enumeration, OracleError> {
    match puzzle {
        Puzzle::MaxPieces { problem, .. } => enumerate_max_pieces(problem, cap).map(|(_, e)| e),
        _ => enumerate_generic(puzzle, cap),
    }
}

/// Maximum-weight independent sets of the threat graph: the optimum weight
/// and every attaining placement (up to the cap).
pub fn enumerate_max_pieces(
    p: &PiecesProblem,
    cap: usize,
) -> Result<(i64, Enumeration), OracleError> {
    let board = &p.board;
    let n = board.num_cells();
    let cells: Vec<CellRef> = board.cells().collect();
    let mut values = vec![false; n];
    let mut best_weight = i64::MIN;
    let mut best: Vec<Vec<bool>> = Vec::new();
    let mut complete = true;

    fn dfs(
        p: &PiecesProblem,
        cells: &[CellRef],
        idx: usize,
        weight: i64,
        values: &mut Vec<bool>,
        best_weight: &mut i64,
        best: &mut Vec<Vec<bool>>,
        complete: &mut bool,
        cap: usize,
    ) {
        if idx == cells.len() {
            if weight > *best_weight {
                *best_weight = weight;
                best.clear();
                *complete = true;
            }
            if weight == *best_weight {
                if best.len() < cap {
                    best.push(values.clone());
                } else {
                    *complete = false;
                }
            }
            return;
        }
        let c = cells[idx];
        let board = &p.board;
        let placeable = board.is_active(c) && p.pattern_at(c).is_some();
        let forced = p.initial.contains(&c);
        if placeable {
            // Try placing: no mutual threat with anything already placed.
            let pattern = p.pattern_at(c).unwrap();
            let mut ok = true;
            for prev in cells[..idx].iter().copied().filter(|&x| values[board.index(x)]) {
                let back = p.pattern_at(prev).unwrap();
                if piece_reach(board, c, pattern).contains(&prev)
                    || piece_reach(board, prev, back).contains(&c)
                {
                    ok = false;
                    break;
                }
            }
            if ok {
                values[board.index(c)] = true;
                dfs(p, cells, idx + 1, weight + p.weights[board.index(c)], values, best_weight, best, complete, cap);
                values[board.index(c)] = false;
            }
        }
        if !forced {
            dfs(p, cells, idx + 1, weight, values, best_weight, best, complete, cap);
        }
    }

    dfs(
        p,
        &cells,
        0,
        0,
        &mut values,
        &mut best_weight,
        &mut best,
        &mut complete,
        cap,
    );
    if best_weight == i64::MIN {
        return Err(OracleError::Invalid(
            "no placement satisfies the forced pieces".into(),
        ));
    }
    Ok((
        best_weight,
        Enumeration {
            solutions: best,
            complete,
        },
    ))
}

fn enumerate_generic(puzzle: &Puzzle, cap: usize) -> Result<Enumeration, OracleError> {
    let (h, w) = puzzle.dims();
    let n = h * w;
    let mut values = vec![false; n];
    let mut out = Enumeration {
        solutions: Vec::new(),
        complete: true,
    };
    let order: Vec<CellRef> = (0..n).map(|i| CellRef::new(i / w + 1, i % w + 1)).collect();
    let mut search = Search {
        puzzle,
        order,
        out: &mut out,
        cap,
    };
    search.dfs(0, &mut values);
    Ok(out)
}

struct Search<'a> {
    puzzle: &'a Puzzle,
    order: Vec<CellRef>,
    out: &'a mut Enumeration,
    cap: usize,
}

impl Search<'_> {
    fn dfs(&mut self, idx: usize, values: &mut Vec<bool>) {
        if !self.out.complete {
            return;
        }
        if idx == self.order.len() {
            if verify(self.puzzle, values).map(|r| r.satisfied()).unwrap_or(false) {
                if self.out.solutions.len() < self.cap {
                    self.out.solutions.push(values.clone());
                } else {
                    self.out.complete = false;
                }
            }
            return;
        }
        let cell = self.order[idx];
        // Takuzu explores ones first; placement puzzles try empty last so
        // solutions appear in a stable order either way.
        let candidates: [bool; 2] = [true, false];
        for v in candidates {
            if self.allowed(cell, v, values) {
                let i = (cell.row - 1) * self.dims().1 + (cell.col - 1);
                values[i] = v;
                self.dfs(idx + 1, values);
                values[i] = false;
            }
        }
    }

    fn dims(&self) -> (usize, usize) {
        self.puzzle.dims()
    }

    /// Conservative feasibility of assigning `v` to `cell` given all cells
    /// before it in row-major order are decided.
    fn allowed(&self, cell: CellRef, v: bool, values: &[bool]) -> bool {
        let (h, w) = self.dims();
        let grid = Grid::new(w, values);
        let decided =
            |c: CellRef| (c.row - 1) * w + (c.col - 1) < (cell.row - 1) * w + (cell.col - 1);
        match self.puzzle {
            Puzzle::NQueens(p) | Puzzle::LQueens(p) | Puzzle::GeneralQueens(p) => {
                let board = &p.board;
                if !board.is_active(cell) || !board.contains(cell) {
                    return !v;
                }
                if p.initial.contains(&cell) && !v {
                    return false;
                }
                if !v {
                    // Leaving the cell empty: check row completion counts.
                    if cell.col == w {
                        if let Some(t) = &p.row_targets {
                            let row_cells =
                                (1..=w - 1).map(|j| CellRef::new(cell.row, j));
                            let placed = grid.ones(row_cells).len();
                            if (placed as u32) != t[cell.row - 1] {
                                return false;
                            }
                        }
                    }
                    return true;
                }
                if let Some(t) = &p.row_targets {
                    let placed = grid
                        .ones((1..cell.col).map(|j| CellRef::new(cell.row, j)))
                        .len() as u32;
                    if placed + 1 > t[cell.row - 1] {
                        return false;
                    }
                    if cell.col == w && placed + 1 != t[cell.row - 1] {
                        return false;
                    }
                }
                if let Some(t) = &p.col_targets {
                    let placed = grid
                        .ones((1..cell.row).map(|i| CellRef::new(i, cell.col)))
                        .len() as u32;
                    if placed + 1 > t[cell.col - 1] {
                        return false;
                    }
                }
                for region in &p.regions {
                    if region.cells.contains(&cell) {
                        let placed = region
                            .cells
                            .iter()
                            .filter(|&&c| decided(c) && grid.at(c))
                            .count() as u32;
                        if placed + 1 > region.q + region.t as u32 {
                            return false;
                        }
                    }
                }
                for other in board.active_cells().filter(|&c| decided(c) && grid.at(c)) {
                    if queen_sees(board, cell, p.diag_at(cell), other)
                        || queen_sees(board, other, p.diag_at(other), cell)
                    {
                        return false;
                    }
                }
                true
            }
            Puzzle::Tents(p) => {
                if p.trees.contains(&cell) {
                    return !v;
                }
                if !v {
                    return true;
                }
                if !p.trees.iter().any(|&t| orthogonally_adjacent(cell, t)) {
                    return false;
                }
                let placed = grid
                    .ones((1..cell.col).map(|j| CellRef::new(cell.row, j)))
                    .len() as u32;
                if placed + 1 > p.row_counts[cell.row - 1] {
                    return false;
                }
                let placed_col = grid
                    .ones((1..cell.row).map(|i| CellRef::new(i, cell.col)))
                    .len() as u32;
                if placed_col + 1 > p.col_counts[cell.col - 1] {
                    return false;
                }
                // Adjacency against everything already decided.
                for i in 1..=h {
                    for j in 1..=w {
                        let c = CellRef::new(i, j);
                        if decided(c) && grid.at(c) && kings_adjacent(c, cell) {
                            return false;
                        }
                    }
                }
                true
            }
            Puzzle::ColouredPieces(p) | Puzzle::MaxPieces { problem: p, .. } => {
                let board = &p.board;
                if !board.is_active(cell) || p.pattern_at(cell).is_none() {
                    return !v;
                }
                if p.initial.contains(&cell) && !v {
                    return false;
                }
                if !v {
                    return true;
                }
                for region in &p.regions {
                    if region.cells.contains(&cell) {
                        let placed = region
                            .cells
                            .iter()
                            .filter(|&&c| decided(c) && grid.at(c))
                            .count();
                        if placed >= 1 {
                            return false;
                        }
                    }
                }
                for other in board.active_cells().filter(|&c| decided(c) && grid.at(c)) {
                    let here = p.pattern_at(cell).unwrap();
                    let there = p.pattern_at(other).unwrap();
                    if piece_reach(board, cell, here).contains(&other)
                        || piece_reach(board, other, there).contains(&cell)
                    {
                        return false;
                    }
                }
                true
            }
            Puzzle::Takuzu(p) => {
                if p.ones.contains(&cell) && !v {
                    return false;
                }
                if p.zeros.contains(&cell) && v {
                    return false;
                }
                let (row_t, col_t) = match (p.effective_row_targets(), p.effective_col_targets()) {
                    (Ok(r), Ok(c)) => (r, c),
                    _ => return false,
                };
                let row_ones = grid
                    .ones((1..cell.col).map(|j| CellRef::new(cell.row, j)))
                    .len() as u32;
                let row_zeros = cell.col as u32 - 1 - row_ones;
                if v && row_ones + 1 > row_t[cell.row - 1] {
                    return false;
                }
                if !v && row_zeros + 1 > w as u32 - row_t[cell.row - 1] {
                    return false;
                }
                let col_ones = grid
                    .ones((1..cell.row).map(|i| CellRef::new(i, cell.col)))
                    .len() as u32;
                let col_zeros = cell.row as u32 - 1 - col_ones;
                if v && col_ones + 1 > col_t[cell.col - 1] {
                    return false;
                }
                if !v && col_zeros + 1 > h as u32 - col_t[cell.col - 1] {
                    return false;
                }
                // In-board windows ending at this cell.
                if cell.col >= 3 {
                    let a = grid.at(CellRef::new(cell.row, cell.col - 2));
                    let b = grid.at(CellRef::new(cell.row, cell.col - 1));
                    if a == b && b == v {
                        return false;
                    }
                }
                if cell.row >= 3 {
                    let a = grid.at(CellRef::new(cell.row - 2, cell.col));
                    let b = grid.at(CellRef::new(cell.row - 1, cell.col));
                    if a == b && b == v {
                        return false;
                    }
                }
                if p.diagonal_repetition && cell.row >= 3 {
                    if cell.col >= 3 {
                        let a = grid.at(CellRef::new(cell.row - 2, cell.col - 2));
                        let b = grid.at(CellRef::new(cell.row - 1, cell.col - 1));
                        if a == b && b == v {
                            return false;
                        }
                    }
                    if cell.col + 2 <= w {
                        let a = grid.at(CellRef::new(cell.row - 2, cell.col + 2));
                        let b = grid.at(CellRef::new(cell.row - 1, cell.col + 1));
                        if a == b && b == v {
                            return false;
                        }
                    }
                }
                // Symbols whose other endpoint is already decided.
                for s in &p.symbols {
                    let (other, same) = if s.a == cell {
                        (s.b, s.kind == SymbolKind::Equal)
                    } else if s.b == cell {
                        (s.a, s.kind == SymbolKind::Equal)
                    } else {
                        continue;
                    };
                    if decided(other) {
                        let ov = grid.at(other);
                        if same != (ov == v) {
                            return false;
                        }
                    }
                }
                // Row distinctness once a row completes.
                if cell.col == w {
                    let mut this_row: Vec<bool> =
                        (1..w).map(|j| grid.at(CellRef::new(cell.row, j))).collect();
                    this_row.push(v);
                    for prev in 1..cell.row {
                        let other: Vec<bool> =
                            (1..=w).map(|j| grid.at(CellRef::new(prev, j))).collect();
                        if other == this_row {
                            return false;
                        }
                    }
                }
                true
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::board::Region;
    use crate::pieces::PiecesProblem;

    fn cell(r: usize, c: usize) -> CellRef {
        CellRef::new(r, c)
    }

    fn queens_board(n: usize, cols: &[usize]) -> Vec<bool> {
        let mut values = vec![false; n * n];
        for (i, &j) in cols.iter().enumerate() {
            values[i * n + (j - 1)] = true;
        }
        values
    }

    #[test]
    fn classic_four_queens_solution_verifies() {
        let p = Puzzle::NQueens(QueensProblem::nqueens(4));
        let good = queens_board(4, &[2, 4, 1, 3]);
        assert!(verify(&p, &good).unwrap().satisfied());

        let bad = queens_board(4, &[1, 2, 4, 3]);
        let report = verify(&p, &bad).unwrap();
        assert!(report
            .violations
            .iter()
            .any(|v| v.constraint == ConstraintKind::Diagonal));
    }

    #[test]
    fn four_and_eight_queens_counts() {
        let four = Puzzle::NQueens(QueensProblem::nqueens(4));
        let e = enumerate_solutions(&four, 100).unwrap();
        assert!(e.complete);
        assert_eq!(e.solutions.len(), 2);

        let eight = Puzzle::NQueens(QueensProblem::nqueens(8));
        let e = enumerate_solutions(&eight, 200).unwrap();
        assert!(e.complete);
        assert_eq!(e.solutions.len(), 92);
    }

    #[test]
    fn enumeration_cap_flags_partial_counts() {
        let eight = Puzzle::NQueens(QueensProblem::nqueens(8));
        let e = enumerate_solutions(&eight, 10).unwrap();
        assert!(!e.complete);
        assert_eq!(e.solutions.len(), 10);
    }

    #[test]
    fn takuzu_two_by_two_has_two_solutions() {
        let p = Puzzle::Takuzu(TakuzuProblem::new(2, 2));
        let e = enumerate_solutions(&p, 100).unwrap();
        assert!(e.complete);
        assert_eq!(e.solutions.len(), 2);
        for s in &e.solutions {
            assert!(verify(&p, s).unwrap().satisfied());
        }
    }

    #[test]
    fn takuzu_triple_in_row_reported() {
        let mut p = TakuzuProblem::new(4, 4);
        p.row_ones = Some(vec![3, 1, 2, 2]);
        p.col_ones = Some(vec![2, 2, 2, 2]);
        let mut values = vec![false; 16];
        for j in 0..3 {
            values[j] = true;
        }
        values[4 + 3] = true;
        values[8] = true;
        values[8 + 3] = true;
        values[12 + 1] = true;
        values[12 + 2] = true;
        let report = verify(&Puzzle::Takuzu(p), &values).unwrap();
        assert!(report
            .violations
            .iter()
            .any(|v| v.constraint == ConstraintKind::Repetition
                && v.cells == vec![cell(1, 1), cell(1, 2), cell(1, 3)]));
    }

    #[test]
    fn max_pieces_rooks_and_knights() {
        let rooks = PiecesProblem::uniform(Board::rect(2, 2), crate::pieces::MovePattern::rook(), 'R');
        let (w, e) = enumerate_max_pieces(&rooks, 100).unwrap();
        assert_eq!(w, 2);
        assert_eq!(e.solutions.len(), 2);

        let knights =
            PiecesProblem::uniform(Board::rect(3, 3), crate::pieces::MovePattern::knight(), 'N');
        let (w, _) = enumerate_max_pieces(&knights, 100).unwrap();
        assert_eq!(w, 5);
    }

    #[test]
    fn coloured_pieces_row_regions_two_solutions() {
        let mut p = PiecesProblem::uniform(Board::rect(2, 2), crate::pieces::MovePattern::rook(), 'R');
        p.regions = vec![
            Region::new("a", [cell(1, 1), cell(1, 2)], 1),
            Region::new("b", [cell(2, 1), cell(2, 2)], 1),
        ];
        let e = enumerate_solutions(&Puzzle::ColouredPieces(p), 100).unwrap();
        assert!(e.complete);
        assert_eq!(e.solutions.len(), 2);
    }

    #[test]
    fn oracle_solutions_all_verify() {
        // Soundness spot check across families.
        let puzzles = vec![
            Puzzle::NQueens(QueensProblem::nqueens(5)),
            Puzzle::Takuzu(TakuzuProblem::new(4, 4)),
        ];
        for p in puzzles {
            let e = enumerate_solutions(&p, 500).unwrap();
            assert!(!e.solutions.is_empty());
            for s in &e.solutions {
                assert!(verify(&p, s).unwrap().satisfied());
            }
        }
    }
}
