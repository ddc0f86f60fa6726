//! QUBO builders for the queens family: classic N-queens, the LinkedIn
//! variant (adjacent diagonals plus colored regions), and the fully general
//! counted-region form with per-cell diagonal distances and flexible
//! ("q or q+1") region targets.
//!
//! All builders work over the reduced variable set produced by
//! [`propagate_queen_initials`]: pre-placed queens become constants, cells
//! forced empty by a saturated row/column/region or by a placed queen's
//! diagonals become zeros, and the remaining coefficients are exactly the
//! expansion of the squared count penalties plus the diagonal pair products.

use std::collections::BTreeSet;

use crate::board::{min_prime_factor, Board, CellRef, DiagMode, DiagReach, Region};
use crate::puzzle::BuildError;
use crate::qubo::{Literal, QuarterInt, Qubo};
use crate::vars::{Infeasible, VarMap};

#[derive(Clone, Debug)]
pub struct QueensProblem {
    pub board: Board,
    pub regions: Vec<Region>,
    /// Per-cell diagonal reach, row-major.
    pub diag: Vec<DiagReach>,
    /// Pre-placed queens.
    pub initial: BTreeSet<CellRef>,
    /// Exact queens per row / per column; `None` leaves the axis
    /// unconstrained.
    pub row_targets: Option<Vec<u32>>,
    pub col_targets: Option<Vec<u32>>,
}

impl QueensProblem {
    /// Classic N-queens: one queen per row and column, whole diagonals.
    pub fn nqueens(n: usize) -> Self {
        assert!(n >= 1);
        Self::strict(Board::rect(n, n), DiagReach::Unbounded)
    }

    /// LinkedIn-style queens: one per row, column and region, diagonal
    /// exclusion only at distance 1. Regions are supplied by the caller.
    pub fn lqueens(board: Board, regions: Vec<Region>) -> Self {
        let mut p = Self::strict(board, DiagReach::Within(1));
        p.regions = regions;
        p
    }

    fn strict(board: Board, reach: DiagReach) -> Self {
        let cells = board.num_cells();
        let (h, w) = (board.height(), board.width());
        QueensProblem {
            board,
            regions: Vec::new(),
            diag: vec![reach; cells],
            initial: BTreeSet::new(),
            row_targets: Some(vec![1; h]),
            col_targets: Some(vec![1; w]),
        }
    }

    /// Blank generalized problem: no axis targets, no diagonal constraints.
    pub fn general(board: Board) -> Self {
        let cells = board.num_cells();
        QueensProblem {
            board,
            regions: Vec::new(),
            diag: vec![DiagReach::None; cells],
            initial: BTreeSet::new(),
            row_targets: None,
            col_targets: None,
        }
    }

    pub fn with_uniform_diag(mut self, reach: DiagReach) -> Self {
        self.diag = vec![reach; self.board.num_cells()];
        self
    }

    pub fn diag_at(&self, cell: CellRef) -> DiagReach {
        self.diag[self.board.index(cell)]
    }

    fn row_cells(&self, i: usize) -> impl Iterator<Item = CellRef> + '_ {
        (1..=self.board.width())
            .map(move |j| CellRef::new(i, j))
            .filter(|&c| self.board.is_active(c))
    }

    fn col_cells(&self, j: usize) -> impl Iterator<Item = CellRef> + '_ {
        (1..=self.board.height())
            .map(move |i| CellRef::new(i, j))
            .filter(|&c| self.board.is_active(c))
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct QueensOptions {
    /// Keep every region in the one-hot term. The default drops the last
    /// region that still has a free cell: once all others hold their queen,
    /// the remaining one is forced.
    pub keep_all_regions: bool,
    /// Encode flexible empty regions ("zero or one queen") as pairwise
    /// products instead of a (1/2 - sum)^2 term. Changes the energy floor
    /// of those regions from 1/4 to 0 but not the minimizers.
    pub pairwise_soft: bool,
}

/// Fixes everything the initial queens imply and adjusts the remaining
/// counts: each placed queen becomes a constant 1, rows/columns/regions
/// whose remaining count hits zero have the rest of their cells zeroed, and
/// cells within a placed queen's diagonal reach (in either direction) are
/// zeroed. Returns the variable map and the adjusted problem.
pub fn propagate_queen_initials(
    p: &QueensProblem,
) -> Result<(VarMap, QueensProblem), Infeasible> {
    let board = &p.board;
    let mut vm = VarMap::new(board);
    let mut adj = p.clone();

    for &g in &p.initial {
        vm.fix(g, true, "initial condition")?;
    }

    // Remaining counts per region.
    for region in &mut adj.regions {
        region.p = region.cells.iter().filter(|c| p.initial.contains(c)).count() as u32;
        if region.q < region.p {
            return Err(Infeasible::new(format!(
                "region {} holds {} initial queens but allows only {}",
                region.id, region.p, region.q
            )));
        }
        if region.q == region.p && !region.t {
            for &c in &region.cells {
                if !p.initial.contains(&c) {
                    vm.fix(c, false, "region count saturated by initial queens")?;
                }
            }
        }
    }

    // Remaining counts per row/column.
    if let Some(targets) = &mut adj.row_targets {
        for i in 1..=board.height() {
            let placed = p.initial.iter().filter(|c| c.row == i).count() as u32;
            let t = &mut targets[i - 1];
            *t = t.checked_sub(placed).ok_or_else(|| {
                Infeasible::new(format!("row {i} holds more initial queens than its target"))
            })?;
            if *t == 0 && placed > 0 {
                for c in p.row_cells(i) {
                    if !p.initial.contains(&c) {
                        vm.fix(c, false, "row count saturated by initial queens")?;
                    }
                }
            }
        }
    }
    if let Some(targets) = &mut adj.col_targets {
        for j in 1..=board.width() {
            let placed = p.initial.iter().filter(|c| c.col == j).count() as u32;
            let t = &mut targets[j - 1];
            *t = t.checked_sub(placed).ok_or_else(|| {
                Infeasible::new(format!(
                    "column {j} holds more initial queens than its target"
                ))
            })?;
            if *t == 0 && placed > 0 {
                for c in p.col_cells(j) {
                    if !p.initial.contains(&c) {
                        vm.fix(c, false, "column count saturated by initial queens")?;
                    }
                }
            }
        }
    }

    // Diagonal threats, in both directions since reach is per-cell.
    for &g in &p.initial {
        for c in board.diagonal_cells(g, p.diag_at(g), DiagMode::AllButSelf) {
            vm.fix(c, false, "within diagonal reach of an initial queen")?;
        }
    }
    for c in board.active_cells() {
        if p.initial.contains(&c) {
            continue;
        }
        let reach = p.diag_at(c);
        if !matches!(reach, DiagReach::None)
            && board
                .diagonal_cells(c, reach, DiagMode::AllButSelf)
                .iter()
                .any(|t| p.initial.contains(t))
        {
            vm.fix(c, false, "diagonal reach hits an initial queen")?;
        }
    }

    Ok((vm, adj))
}

/// Resolves cells into penalty literals. Constant ones are skipped because
/// the caller already subtracted them from the target; zeros contribute
/// nothing either way.
fn free_literals(
    vm: &VarMap,
    cells: impl IntoIterator<Item = CellRef>,
) -> Result<Vec<Literal>, Infeasible> {
    let mut out = Vec::new();
    for cell in cells {
        match vm.resolve(cell)? {
            Literal::Zero | Literal::One => {}
            lit => out.push(lit),
        }
    }
    Ok(out)
}

/// `(halves/2)^2` on the quarter grid.
fn square_of_halves(halves: i64) -> QuarterInt {
    QuarterInt::from_quarters(halves * halves)
}

fn add_count_penalty(
    q: &mut Qubo,
    target_halves: i64,
    literals: &[Literal],
) -> Result<(), BuildError> {
    if literals.is_empty() {
        // No free cell left: the term is the constant (target - 0)^2, kept
        // so an over-constrained instance shows up as energy above the floor.
        q.add_offset(square_of_halves(target_halves));
    } else {
        q.add_square_penalty(QuarterInt::from_halves(target_halves), literals, 1)?;
    }
    Ok(())
}

/// Classic N-queens objective: one-queen row and column squares plus a
/// single product per unordered same-diagonal pair.
pub fn build_nqueens(n: usize) -> Qubo {
    let p = QueensProblem::nqueens(n);
    let (vm, adj) = propagate_queen_initials(&p).expect("no initial queens");
    build_strict(&adj, &vm, &QueensOptions::default()).expect("plain n-queens build cannot fail")
}

/// LinkedIn queens: strict rows/columns, distance-1 diagonals, one-hot
/// regions with one region dropped (its queen is implied by the others).
/// Propagates the initial queens first and builds over the reduced
/// variables.
pub fn build_lqueens(
    p: &QueensProblem,
    opts: &QueensOptions,
) -> Result<(Qubo, VarMap), BuildError> {
    validate_region_partition(p)?;
    build_strict_queens(p, opts)
}

/// Strict construction (unit axis targets, uniform diagonal reach) without
/// the LQueens region-partition requirement; used for plain N-queens boards
/// with or without initial queens.
pub fn build_strict_queens(
    p: &QueensProblem,
    opts: &QueensOptions,
) -> Result<(Qubo, VarMap), BuildError> {
    let (vm, adj) = propagate_queen_initials(p)?;
    let q = build_strict(&adj, &vm, opts)?;
    Ok((q, vm))
}

fn validate_region_partition(p: &QueensProblem) -> Result<(), BuildError> {
    if p.regions.len() != p.board.height() {
        return Err(BuildError::Invalid(format!(
            "expected {} regions, found {}",
            p.board.height(),
            p.regions.len()
        )));
    }
    let mut covered = BTreeSet::new();
    for region in &p.regions {
        for &c in &region.cells {
            if !p.board.is_active(c) {
                return Err(BuildError::Invalid(format!(
                    "region {} contains inactive cell {c}",
                    region.id
                )));
            }
            if !covered.insert(c) {
                return Err(BuildError::Invalid(format!(
                    "cell {c} belongs to more than one region"
                )));
            }
        }
    }
    if covered.len() != p.board.num_active() {
        return Err(BuildError::Invalid(
            "regions do not cover every active cell".into(),
        ));
    }
    Ok(())
}

/// Shared construction for N-queens and LQueens over the reduced variables:
/// per-row and per-column unit squares, per-region unit squares (minus the
/// dropped one), and below-only diagonal pair products within each cell's
/// reach. Requires a uniform diagonal reach so the downward walk from the
/// upper cell of a pair sees exactly the pairs the constraint names.
fn build_strict(
    adj: &QueensProblem,
    vm: &VarMap,
    opts: &QueensOptions,
) -> Result<Qubo, BuildError> {
    let board = &adj.board;
    debug_assert!(adj.diag.windows(2).all(|w| w[0] == w[1]));
    let mut q = Qubo::new(vm.num_free());

    if let Some(targets) = &adj.row_targets {
        for i in 1..=board.height() {
            let lits = free_literals(vm, adj.row_cells(i))?;
            if adj.row_cells(i).next().is_some() {
                add_count_penalty(&mut q, 2 * targets[i - 1] as i64, &lits)?;
            }
        }
    }
    if let Some(targets) = &adj.col_targets {
        for j in 1..=board.width() {
            let lits = free_literals(vm, adj.col_cells(j))?;
            if adj.col_cells(j).next().is_some() {
                add_count_penalty(&mut q, 2 * targets[j - 1] as i64, &lits)?;
            }
        }
    }

    // Regions: unit targets less the queens already placed in them. The last
    // region that still has a free cell is implied by the others and dropped.
    let region_lits: Vec<Vec<Literal>> = adj
        .regions
        .iter()
        .map(|r| free_literals(vm, r.cells.iter().copied()))
        .collect::<Result<_, _>>()?;
    let dropped = if opts.keep_all_regions {
        None
    } else {
        region_lits.iter().rposition(|lits| !lits.is_empty())
    };
    for (k, region) in adj.regions.iter().enumerate() {
        if Some(k) == dropped {
            continue;
        }
        add_count_penalty(&mut q, 2 * (region.q - region.p) as i64, &region_lits[k])?;
    }

    for a in board.active_cells() {
        for b in board.diagonal_cells(a, adj.diag_at(a), DiagMode::BelowOnly) {
            q.add_pair_interaction(vm.resolve(a)?, vm.resolve(b)?, QuarterInt::ONE)?;
        }
    }
    Ok(q)
}

/// Fully general queens: one squared count penalty per region (axis targets
/// become regions too), with flexible regions centered at `q + 1/2`, plus a
/// product per directed diagonal pair within each cell's reach (symmetric
/// pairs therefore count twice). Returns the model, the variable map and the
/// number of half-target penalties, which fixes the energy floor at that
/// count over 4.
pub fn build_general_queens(
    p: &QueensProblem,
    opts: &QueensOptions,
) -> Result<(Qubo, VarMap, usize), BuildError> {
    let (vm, adj) = propagate_queen_initials(p)?;
    let (q, fractional) = build_general_over(&adj, &vm, opts)?;
    Ok((q, vm, fractional))
}

fn build_general_over(
    adj: &QueensProblem,
    vm: &VarMap,
    opts: &QueensOptions,
) -> Result<(Qubo, usize), BuildError> {
    let board = &adj.board;
    let mut q = Qubo::new(vm.num_free());
    let mut fractional = 0usize;

    // (cells, remaining target, flexible)
    let mut groups: Vec<(Vec<CellRef>, i64, bool)> = Vec::new();
    for region in &adj.regions {
        groups.push((
            region.cells.iter().copied().collect(),
            (region.q - region.p) as i64,
            region.t,
        ));
    }
    if let Some(targets) = &adj.row_targets {
        for i in 1..=board.height() {
            groups.push((adj.row_cells(i).collect(), targets[i - 1] as i64, false));
        }
    }
    if let Some(targets) = &adj.col_targets {
        for j in 1..=board.width() {
            groups.push((adj.col_cells(j).collect(), targets[j - 1] as i64, false));
        }
    }

    for (cells, remaining, flexible) in groups {
        if cells.is_empty() {
            continue;
        }
        let lits = free_literals(vm, cells)?;
        if opts.pairwise_soft && flexible && remaining == 0 {
            // At most one queen, as products over ordered pairs.
            for (i, &a) in lits.iter().enumerate() {
                for (j, &b) in lits.iter().enumerate() {
                    if i != j {
                        q.add_pair_interaction(a, b, QuarterInt::ONE)?;
                    }
                }
            }
            continue;
        }
        if flexible {
            fractional += 1;
        }
        add_count_penalty(&mut q, 2 * remaining + flexible as i64, &lits)?;
    }

    for a in board.active_cells() {
        for b in board.diagonal_cells(a, adj.diag_at(a), DiagMode::AllButSelf) {
            q.add_pair_interaction(vm.resolve(a)?, vm.resolve(b)?, QuarterInt::ONE)?;
        }
    }
    Ok((q, fractional))
}

/// Unsolvability warning for toroidal full-diagonal queens boards whose side
/// has a small prime factor.
pub fn toroidal_warning(p: &QueensProblem) -> Option<String> {
    let board = &p.board;
    let wraps = board.wrap_rows || board.wrap_cols;
    let full_diag = p
        .diag
        .iter()
        .any(|d| matches!(d, DiagReach::Unbounded));
    if wraps && full_diag && board.height() == board.width() {
        let n = board.height();
        if min_prime_factor(n) < 5 {
            return Some(format!(
                "toroidal board of side {n} has a prime factor smaller than 5; \
                 such boards are expected to have no full-diagonal solution"
            ));
        }
    }
    None
}
