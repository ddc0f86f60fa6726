//! The Takuzu/Tango problem and its generalizations: binary grids with
//! balance targets per row/column, no three equal cells in a row (optionally
//! also on diagonals and across toroidal seams), equality/difference symbols
//! between arbitrary cell pairs, counted regions, and the global rule that
//! no two rows or columns repeat.
//!
//! Symbols never become penalty terms on the production path: preprocessing
//! aliases or fixes their endpoints, so each symbol removes one variable.
//! The explicit penalty encoding is kept only to validate that elimination
//! (see [`build_ttp_with_symbol_penalties`]).
//!
//! The row/column non-repetition rule has no quadratic encoding; it is
//! checked after solving with [`check_global_nonrepetition`].

use std::collections::BTreeSet;

use crate::board::{Board, CellRef, Region};
use crate::puzzle::BuildError;
use crate::qubo::{Literal, QuarterInt, Qubo};
use crate::vars::VarMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymbolKind {
    Equal,
    Cross,
}

/// '=' or 'x' between two cells; adjacent pairs reproduce the classic game,
/// arbitrary pairs are the long-distance generalization.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Symbol {
    pub kind: SymbolKind,
    pub a: CellRef,
    pub b: CellRef,
}

#[derive(Clone, Debug)]
pub struct TakuzuProblem {
    pub height: usize,
    pub width: usize,
    pub zeros: BTreeSet<CellRef>,
    pub ones: BTreeSet<CellRef>,
    pub symbols: Vec<Symbol>,
    /// Ones per row; `None` means the balanced default `width / 2`.
    pub row_ones: Option<Vec<u32>>,
    /// Ones per column; `None` means the balanced default `height / 2`.
    pub col_ones: Option<Vec<u32>>,
    /// Counted regions: exactly `q` ones in each (the flexible flag is not
    /// used here).
    pub regions: Vec<Region>,
    pub diagonal_repetition: bool,
    pub wrap_rows: bool,
    pub wrap_cols: bool,
}

impl TakuzuProblem {
    pub fn new(height: usize, width: usize) -> Self {
        TakuzuProblem {
            height,
            width,
            zeros: BTreeSet::new(),
            ones: BTreeSet::new(),
            symbols: Vec::new(),
            row_ones: None,
            col_ones: None,
            regions: Vec::new(),
            diagonal_repetition: false,
            wrap_rows: false,
            wrap_cols: false,
        }
    }

    pub fn board(&self) -> Board {
        Board::rect(self.height, self.width).with_wrap(self.wrap_rows, self.wrap_cols)
    }

    pub fn effective_row_targets(&self) -> Result<Vec<u32>, BuildError> {
        effective_targets(&self.row_ones, self.height, self.width, "row")
    }

    pub fn effective_col_targets(&self) -> Result<Vec<u32>, BuildError> {
        effective_targets(&self.col_ones, self.width, self.height, "column")
    }

    pub fn validate(&self) -> Result<(), BuildError> {
        let board = self.board();
        for &c in self.zeros.iter().chain(self.ones.iter()) {
            if !board.contains(c) {
                return Err(BuildError::Invalid(format!("given {c} is off the board")));
            }
        }
        if let Some(c) = self.zeros.intersection(&self.ones).next() {
            return Err(BuildError::Invalid(format!(
                "cell {c} is given as both 0 and 1"
            )));
        }
        for s in &self.symbols {
            if s.a == s.b {
                return Err(BuildError::Invalid(format!(
                    "symbol endpoints coincide at {}",
                    s.a
                )));
            }
            if !board.contains(s.a) || !board.contains(s.b) {
                return Err(BuildError::Invalid("symbol endpoint off the board".into()));
            }
        }
        self.effective_row_targets()?;
        self.effective_col_targets()?;
        for r in &self.regions {
            if r.t {
                return Err(BuildError::Invalid(format!(
                    "region {} uses a flexible target, not supported here",
                    r.id
                )));
            }
        }
        Ok(())
    }

    fn row(&self, i: usize) -> Vec<CellRef> {
        (1..=self.width).map(|j| CellRef::new(i, j)).collect()
    }

    fn col(&self, j: usize) -> Vec<CellRef> {
        (1..=self.height).map(|i| CellRef::new(i, j)).collect()
    }
}

fn effective_targets(
    explicit: &Option<Vec<u32>>,
    count: usize,
    line_len: usize,
    what: &str,
) -> Result<Vec<u32>, BuildError> {
    match explicit {
        Some(t) => {
            if t.len() != count {
                return Err(BuildError::Invalid(format!(
                    "expected {count} {what} targets, found {}",
                    t.len()
                )));
            }
            for (i, &v) in t.iter().enumerate() {
                if v as usize > line_len {
                    return Err(BuildError::Invalid(format!(
                        "{what} {} target {v} exceeds line length {line_len}",
                        i + 1
                    )));
                }
            }
            Ok(t.clone())
        }
        None => {
            if line_len % 2 != 0 {
                return Err(BuildError::Invalid(format!(
                    "balanced {what} targets need an even line length, got {line_len}"
                )));
            }
            Ok(vec![line_len as u32 / 2; count])
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct PreprocessOptions {
    /// Alias/fix symbol endpoints. Disabled only by the validation path that
    /// keeps symbols as explicit penalties.
    pub use_symbols: bool,
}

impl Default for PreprocessOptions {
    fn default() -> Self {
        PreprocessOptions { use_symbols: true }
    }
}

/// Applies the elimination rules to a fixpoint: givens fix their cells,
/// symbols fix or alias their endpoints, saturated lines force the rest to
/// the opposite value, and a fixed equal pair forces its flanking neighbors.
/// The result does not depend on rule order.
pub fn preprocess(p: &TakuzuProblem) -> Result<VarMap, BuildError> {
    preprocess_with(p, &PreprocessOptions::default())
}

pub fn preprocess_with(
    p: &TakuzuProblem,
    opts: &PreprocessOptions,
) -> Result<VarMap, BuildError> {
    p.validate()?;
    let board = p.board();
    let row_t = p.effective_row_targets()?;
    let col_t = p.effective_col_targets()?;
    let mut vm = VarMap::new(&board);

    for &c in &p.zeros {
        vm.fix(c, false, "given zero")?;
    }
    for &c in &p.ones {
        vm.fix(c, true, "given one")?;
    }

    loop {
        let mut changed = false;

        if opts.use_symbols {
            for s in &p.symbols {
                changed |= match s.kind {
                    SymbolKind::Equal => vm.alias_equal(s.a, s.b, "equal symbol")?,
                    SymbolKind::Cross => vm.alias_cross(s.a, s.b, "cross symbol")?,
                };
            }
        }

        for i in 1..=p.height {
            changed |= saturate_line(&mut vm, &p.row(i), row_t[i - 1], "row")?;
        }
        for j in 1..=p.width {
            changed |= saturate_line(&mut vm, &p.col(j), col_t[j - 1], "column")?;
        }

        changed |= fixed_pair_rule(&mut vm, &board, p.height, p.width)?;

        if !changed {
            break;
        }
    }
    Ok(vm)
}

/// Rule 3: once a line holds its full count of ones (or of zeros), the
/// remaining cells take the opposite value.
fn saturate_line(
    vm: &mut VarMap,
    cells: &[CellRef],
    ones_target: u32,
    what: &str,
) -> Result<bool, BuildError> {
    let zeros_target = cells.len() as u32 - ones_target;
    let mut ones = 0u32;
    let mut zeros = 0u32;
    let mut open = Vec::new();
    for &c in cells {
        match vm.resolve(c)? {
            Literal::One => ones += 1,
            Literal::Zero => zeros += 1,
            _ => open.push(c),
        }
    }
    if ones > ones_target {
        return Err(BuildError::Infeasible(crate::vars::Infeasible::new(
            format!("{what} saturation: more ones fixed than the target {ones_target}"),
        )));
    }
    if zeros > zeros_target {
        return Err(BuildError::Infeasible(crate::vars::Infeasible::new(
            format!("{what} saturation: more zeros fixed than the target {zeros_target}"),
        )));
    }
    let mut changed = false;
    if ones == ones_target && !open.is_empty() {
        for c in open.drain(..) {
            changed |= vm.fix(c, false, "line ones saturated")?;
        }
    } else if zeros == zeros_target && !open.is_empty() {
        for c in open.drain(..) {
            changed |= vm.fix(c, true, "line zeros saturated")?;
        }
    }
    Ok(changed)
}

/// Rule 4: two adjacent cells fixed to the same value force the cells
/// flanking the pair along its line to the opposite value.
fn fixed_pair_rule(
    vm: &mut VarMap,
    board: &Board,
    height: usize,
    width: usize,
) -> Result<bool, BuildError> {
    let mut changed = false;
    let apply = |vm: &mut VarMap, a: CellRef, dr: isize, dc: isize| -> Result<bool, BuildError> {
        let Some(b) = board.step(a, dr, dc) else {
            return Ok(false);
        };
        let (la, lb) = (vm.resolve(a)?, vm.resolve(b)?);
        let value = match (la, lb) {
            (Literal::One, Literal::One) => true,
            (Literal::Zero, Literal::Zero) => false,
            _ => return Ok(false),
        };
        let mut local = false;
        for flank in [board.step(a, -dr, -dc), board.step(b, dr, dc)].into_iter().flatten() {
            if flank != a && flank != b {
                local |= vm.fix(flank, !value, "flank of an equal fixed pair")?;
            }
        }
        Ok(local)
    };
    for i in 1..=height {
        for j in 1..=width {
            let c = CellRef::new(i, j);
            changed |= apply(vm, c, 0, 1)?;
            changed |= apply(vm, c, 1, 0)?;
        }
    }
    Ok(changed)
}

/// Three-cell windows for the repetition terms. Start positions wrap when
/// the corresponding flag is set; otherwise windows stay fully in-board.
fn windows(p: &TakuzuProblem) -> Vec<[CellRef; 3]> {
    let board = p.board();
    let mut out = Vec::new();
    let push = |start: CellRef, dr: isize, dc: isize, out: &mut Vec<[CellRef; 3]>| {
        let Some(second) = board.step(start, dr, dc) else {
            return;
        };
        let Some(third) = board.step(second, dr, dc) else {
            return;
        };
        out.push([start, second, third]);
    };

    // Horizontal: N rows x (M-2) windows, or M on a wrapped axis.
    let h_starts = if p.wrap_cols { p.width } else { p.width.saturating_sub(2) };
    for i in 1..=p.height {
        for j in 1..=h_starts {
            push(CellRef::new(i, j), 0, 1, &mut out);
        }
    }
    let v_starts = if p.wrap_rows { p.height } else { p.height.saturating_sub(2) };
    for j in 1..=p.width {
        for i in 1..=v_starts {
            push(CellRef::new(i, j), 1, 0, &mut out);
        }
    }

    if p.diagonal_repetition {
        let di = if p.wrap_rows { 1..=p.height } else { 1..=p.height.saturating_sub(2) };
        for i in di {
            // Down-left windows need j >= 3 unless columns wrap.
            let left_js: Vec<usize> = if p.wrap_cols {
                (1..=p.width).collect()
            } else {
                (3..=p.width).collect()
            };
            for &j in &left_js {
                push(CellRef::new(i, j), 1, -1, &mut out);
            }
            let right_js: Vec<usize> = if p.wrap_cols {
                (1..=p.width).collect()
            } else {
                (1..=p.width.saturating_sub(2)).collect()
            };
            for &j in &right_js {
                push(CellRef::new(i, j), 1, 1, &mut out);
            }
        }
    }
    out
}

/// Number of half-target window penalties; the floor of a solvable instance
/// is this count over 4. For the plain balanced problem it equals
/// `N(M-2) + (N-2)M`, i.e. the floor is `(NM - N - M) / 2`.
pub fn window_count(p: &TakuzuProblem) -> usize {
    windows(p).len()
}

/// Base problem terms over the reduced variables: a (3/2 - window)^2 per
/// horizontal and vertical in-board window plus per-line balance squares.
pub fn build_ttp(p: &TakuzuProblem, vm: &VarMap) -> Result<Qubo, BuildError> {
    let base = TakuzuProblem {
        diagonal_repetition: false,
        wrap_rows: false,
        wrap_cols: false,
        regions: Vec::new(),
        ..p.clone()
    };
    build_ttp_generalized(&base, vm)
}

/// All selected generalization terms: wrapped/diagonal windows and counted
/// regions on top of the base repetition and balance terms.
pub fn build_ttp_generalized(p: &TakuzuProblem, vm: &VarMap) -> Result<Qubo, BuildError> {
    let row_t = p.effective_row_targets()?;
    let col_t = p.effective_col_targets()?;
    let mut q = Qubo::new(vm.num_free());

    for w in windows(p) {
        let lits = [vm.resolve(w[0])?, vm.resolve(w[1])?, vm.resolve(w[2])?];
        q.add_square_penalty(QuarterInt::from_halves(3), &lits, 1)?;
    }
    for i in 1..=p.height {
        let lits: Vec<_> = p.row(i).iter().map(|&c| vm.resolve(c)).collect::<Result<_, _>>()?;
        q.add_square_penalty(QuarterInt::from_int(row_t[i - 1] as i64), &lits, 1)?;
    }
    for j in 1..=p.width {
        let lits: Vec<_> = p.col(j).iter().map(|&c| vm.resolve(c)).collect::<Result<_, _>>()?;
        q.add_square_penalty(QuarterInt::from_int(col_t[j - 1] as i64), &lits, 1)?;
    }
    for region in &p.regions {
        let lits: Vec<_> = region
            .cells
            .iter()
            .map(|&c| vm.resolve(c))
            .collect::<Result<_, _>>()?;
        if lits.is_empty() {
            continue;
        }
        q.add_square_penalty(QuarterInt::from_int(region.q as i64), &lits, 1)?;
    }
    Ok(q)
}

/// Validation path: the same terms plus one explicit penalty per symbol
/// (zero exactly when the symbol is honored). Production code aliases the
/// symbols away instead; this exists to check both give the same minimizers.
pub fn build_ttp_with_symbol_penalties(
    p: &TakuzuProblem,
    vm: &VarMap,
) -> Result<Qubo, BuildError> {
    let mut q = build_ttp_generalized(p, vm)?;
    for s in &p.symbols {
        let (la, lb) = (vm.resolve(s.a)?, vm.resolve(s.b)?);
        match s.kind {
            SymbolKind::Equal => {
                // a(1-b) + (1-a)b
                q.add_pair_interaction(la, lb.complement(), QuarterInt::ONE)?;
                q.add_pair_interaction(la.complement(), lb, QuarterInt::ONE)?;
            }
            SymbolKind::Cross => {
                // ab + (1-a)(1-b)
                q.add_pair_interaction(la, lb, QuarterInt::ONE)?;
                q.add_pair_interaction(la.complement(), lb.complement(), QuarterInt::ONE)?;
            }
        }
    }
    Ok(q)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    Row,
    Column,
}

/// Outcome of the post-hoc non-repetition check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonRepetitionReport {
    pub ok: bool,
    /// First offending pair: axis and the two 1-based indices.
    pub offending: Option<(Axis, usize, usize)>,
}

/// Checks that no two rows and no two columns carry the same values, via the
/// dot-product criterion: two equal-sum lines coincide exactly when their
/// product sum reaches that count. Lines with different sums differ trivially.
pub fn check_global_nonrepetition(
    p: &TakuzuProblem,
    values: &[bool],
) -> Result<NonRepetitionReport, BuildError> {
    if values.len() != p.height * p.width {
        return Err(BuildError::Invalid(format!(
            "expected {} cell values, got {}",
            p.height * p.width,
            values.len()
        )));
    }
    let at = |i: usize, j: usize| values[(i - 1) * p.width + (j - 1)];

    for a in 1..=p.height {
        for b in (a + 1)..=p.height {
            let ones_a = (1..=p.width).filter(|&j| at(a, j)).count();
            let ones_b = (1..=p.width).filter(|&j| at(b, j)).count();
            let dot = (1..=p.width).filter(|&j| at(a, j) && at(b, j)).count();
            if ones_a == ones_b && dot == ones_a {
                return Ok(NonRepetitionReport {
                    ok: false,
                    offending: Some((Axis::Row, a, b)),
                });
            }
        }
    }
    for a in 1..=p.width {
        for b in (a + 1)..=p.width {
            let ones_a = (1..=p.height).filter(|&i| at(i, a)).count();
            let ones_b = (1..=p.height).filter(|&i| at(i, b)).count();
            let dot = (1..=p.height).filter(|&i| at(i, a) && at(i, b)).count();
            if ones_a == ones_b && dot == ones_a {
                return Ok(NonRepetitionReport {
                    ok: false,
                    offending: Some((Axis::Column, a, b)),
                });
            }
        }
    }
    Ok(NonRepetitionReport {
        ok: true,
        offending: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vars::CellState;

    fn cell(r: usize, c: usize) -> CellRef {
        CellRef::new(r, c)
    }

    fn sym(kind: SymbolKind, a: (usize, usize), b: (usize, usize)) -> Symbol {
        Symbol {
            kind,
            a: cell(a.0, a.1),
            b: cell(b.0, b.1),
        }
    }

    #[test]
    fn saturated_row_fixes_rest() {
        let mut p = TakuzuProblem::new(1, 4);
        p.row_ones = Some(vec![2]);
        p.col_ones = Some(vec![1, 1, 0, 0]);
        p.ones.extend([cell(1, 1), cell(1, 2)]);
        let vm = preprocess(&p).unwrap();
        assert_eq!(vm.state(cell(1, 3)), CellState::Fixed(false));
        assert_eq!(vm.state(cell(1, 4)), CellState::Fixed(false));
        assert_eq!(vm.num_free(), 0);
    }

    #[test]
    fn symbol_propagates_given() {
        let mut p = TakuzuProblem::new(2, 2);
        p.row_ones = Some(vec![2, 0]);
        p.col_ones = Some(vec![1, 1]);
        p.ones.insert(cell(1, 1));
        p.symbols.push(sym(SymbolKind::Equal, (1, 1), (1, 2)));
        let vm = preprocess(&p).unwrap();
        assert_eq!(vm.state(cell(1, 2)), CellState::Fixed(true));
        assert_eq!(vm.state(cell(2, 1)), CellState::Fixed(false));
    }

    #[test]
    fn chain_of_symbols_collapses_to_one_variable() {
        let mut p = TakuzuProblem::new(2, 4);
        p.symbols.extend([
            sym(SymbolKind::Equal, (1, 1), (1, 2)),
            sym(SymbolKind::Equal, (1, 2), (1, 3)),
            sym(SymbolKind::Cross, (1, 3), (1, 4)),
        ]);
        let vm = preprocess(&p).unwrap();
        assert_eq!(vm.resolve(cell(1, 1)).unwrap(), Literal::Pos(0));
        assert_eq!(vm.resolve(cell(1, 2)).unwrap(), Literal::Pos(0));
        assert_eq!(vm.resolve(cell(1, 3)).unwrap(), Literal::Pos(0));
        assert_eq!(vm.resolve(cell(1, 4)).unwrap(), Literal::Neg(0));
        assert_eq!(vm.num_free(), 8 - 3);
    }

    #[test]
    fn fixed_pair_forces_flanks() {
        let mut p = TakuzuProblem::new(1, 4);
        p.row_ones = Some(vec![2]);
        p.col_ones = Some(vec![0, 1, 1, 0]);
        p.ones.extend([cell(1, 2), cell(1, 3)]);
        let vm = preprocess(&p).unwrap();
        assert_eq!(vm.state(cell(1, 1)), CellState::Fixed(false));
        assert_eq!(vm.state(cell(1, 4)), CellState::Fixed(false));
    }

    #[test]
    fn contradictory_symbols_are_infeasible() {
        let mut p = TakuzuProblem::new(1, 2);
        p.row_ones = Some(vec![1]);
        p.col_ones = Some(vec![1, 0]);
        p.symbols.push(sym(SymbolKind::Equal, (1, 1), (1, 2)));
        p.symbols.push(sym(SymbolKind::Cross, (1, 1), (1, 2)));
        assert!(matches!(preprocess(&p), Err(BuildError::Infeasible(_))));
    }

    #[test]
    fn odd_balanced_target_rejected() {
        let p = TakuzuProblem::new(3, 3);
        assert!(matches!(preprocess(&p), Err(BuildError::Invalid(_))));
    }

    #[test]
    fn two_by_two_minima_are_the_balanced_boards() {
        let p = TakuzuProblem::new(2, 2);
        let vm = preprocess(&p).unwrap();
        let q = build_ttp(&p, &vm).unwrap();
        assert_eq!(window_count(&p), 0);
        let mut minima = Vec::new();
        let mut best = QuarterInt::from_int(i64::MAX / 8);
        for mask in 0u32..16 {
            let bits: Vec<bool> = (0..4).map(|i| mask >> i & 1 == 1).collect();
            let e = q.energy(&bits).unwrap();
            if e < best {
                best = e;
                minima.clear();
            }
            if e == best {
                minima.push(vm.decode(&bits));
            }
        }
        assert_eq!(best, QuarterInt::ZERO);
        minima.sort();
        assert_eq!(
            minima,
            vec![
                vec![false, true, true, false],
                vec![true, false, false, true]
            ]
        );
    }

    #[test]
    fn window_counts_follow_dimensions() {
        let mut p = TakuzuProblem::new(4, 4);
        assert_eq!(window_count(&p), 4 * 2 + 2 * 4);
        p.diagonal_repetition = true;
        assert_eq!(window_count(&p), 16 + 2 * 2 * 2);
        let mut t = TakuzuProblem::new(4, 4);
        t.wrap_rows = true;
        t.wrap_cols = true;
        assert_eq!(window_count(&t), 16 + 16);
    }

    #[test]
    fn fully_fixed_valid_board_is_constant_offset() {
        // A valid 6x6 Takuzu board, all cells given.
        let rows: [[u8; 6]; 6] = [
            [0, 1, 0, 1, 0, 1],
            [1, 0, 1, 0, 1, 0],
            [0, 1, 1, 0, 1, 0],
            [1, 0, 0, 1, 0, 1],
            [0, 1, 0, 1, 1, 0],
            [1, 0, 1, 0, 0, 1],
        ];
        let mut p = TakuzuProblem::new(6, 6);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                let c = cell(i + 1, j + 1);
                if v == 1 {
                    p.ones.insert(c);
                } else {
                    p.zeros.insert(c);
                }
            }
        }
        let vm = preprocess(&p).unwrap();
        assert_eq!(vm.num_free(), 0);
        let q = build_ttp(&p, &vm).unwrap();
        assert_eq!(q.num_vars(), 0);
        assert_eq!(q.offset(), QuarterInt::from_int(12));
        assert_eq!(q.num_linear_terms(), 0);
        assert_eq!(q.num_quadratic_terms(), 0);
    }

    #[test]
    fn equality_regions_with_cross_link() {
        // Two 4-cell equality chains joined by one 'x': a single variable
        // drives all 8 cells with opposite values across the chains.
        let mut p = TakuzuProblem::new(2, 4);
        p.row_ones = Some(vec![2, 2]);
        p.col_ones = Some(vec![1, 1, 1, 1]);
        let top: Vec<CellRef> = (1..=4).map(|j| cell(1, j)).collect();
        let bottom: Vec<CellRef> = (1..=4).map(|j| cell(2, j)).collect();
        for w in top.windows(2).chain(bottom.windows(2)) {
            p.symbols.push(Symbol {
                kind: SymbolKind::Equal,
                a: w[0],
                b: w[1],
            });
        }
        p.symbols.push(Symbol {
            kind: SymbolKind::Cross,
            a: top[0],
            b: bottom[0],
        });
        let vm = preprocess(&p).unwrap();
        assert_eq!(vm.num_free(), 1);
        let values = vm.decode(&[true]);
        for j in 0..4 {
            assert!(values[j]);
            assert!(!values[4 + j]);
        }
    }

    #[test]
    fn nonrepetition_detects_equal_rows_and_columns() {
        let p = TakuzuProblem::new(2, 2);
        let report = check_global_nonrepetition(&p, &[true, false, true, false]).unwrap();
        assert!(!report.ok);
        assert_eq!(report.offending, Some((Axis::Row, 1, 2)));

        let ok = check_global_nonrepetition(&p, &[false, true, true, false]).unwrap();
        assert!(ok.ok);

        let cols = check_global_nonrepetition(&p, &[true, true, false, false]).unwrap();
        assert_eq!(cols.offending, Some((Axis::Column, 1, 2)));
    }

    #[test]
    fn nonrepetition_matches_direct_comparison() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let p = TakuzuProblem::new(4, 4);
        for _ in 0..200 {
            let values: Vec<bool> = (0..16).map(|_| rng.gen_bool(0.5)).collect();
            let report = check_global_nonrepetition(&p, &values).unwrap();
            let row = |i: usize| &values[(i - 1) * 4..i * 4];
            let col = |j: usize| (1..=4).map(|i| values[(i - 1) * 4 + j - 1]).collect::<Vec<_>>();
            let direct = (1..=4).all(|a| ((a + 1)..=4).all(|b| row(a) != row(b)))
                && (1..=4).all(|a| ((a + 1)..=4).all(|b| col(a) != col(b)));
            assert_eq!(report.ok, direct);
        }
    }

    #[test]
    fn preprocessing_is_order_independent() {
        // Shuffling the symbol list leaves the canonical outcome unchanged.
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let mut p = TakuzuProblem::new(4, 4);
        p.ones.extend([cell(1, 1), cell(2, 3)]);
        p.zeros.insert(cell(3, 2));
        p.symbols.extend([
            sym(SymbolKind::Equal, (1, 2), (1, 3)),
            sym(SymbolKind::Cross, (2, 1), (2, 2)),
            sym(SymbolKind::Equal, (1, 2), (2, 2)),
            sym(SymbolKind::Cross, (4, 1), (4, 2)),
        ]);
        let base = preprocess(&p).unwrap();
        let snapshot = |vm: &VarMap| -> Vec<CellState> {
            (1..=4)
                .flat_map(|i| (1..=4).map(move |j| (i, j)))
                .map(|(i, j)| vm.state(cell(i, j)))
                .collect()
        };
        let want = snapshot(&base);
        for _ in 0..10 {
            let mut shuffled = p.clone();
            shuffled.symbols.shuffle(&mut rng);
            let vm = preprocess(&shuffled).unwrap();
            assert_eq!(snapshot(&vm), want);
        }
    }
}
