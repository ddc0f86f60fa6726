//! Chess-piece placement problems: one piece per colored region with no
//! piece threatening another, and the unconstrained maximum-pieces variant
//! where every placement lowers the energy and threats carry a large penalty.
//!
//! Threats are unblocked: a pairwise objective cannot see interposed pieces,
//! so rays reach through occupied cells.

use std::collections::BTreeSet;

use crate::board::{Board, CellRef, Region};
use crate::puzzle::BuildError;
use crate::qubo::{QuarterInt, Qubo};
use crate::vars::{Infeasible, VarMap};

/// Ray directions with an optional range plus jump offsets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MovePattern {
    pub rays: Vec<(isize, isize, Option<u32>)>,
    pub jumps: Vec<(isize, isize)>,
}

const ORTHO: [(isize, isize); 4] = [(0, 1), (0, -1), (1, 0), (-1, 0)];
const DIAG: [(isize, isize); 4] = [(1, 1), (1, -1), (-1, 1), (-1, -1)];

impl MovePattern {
    pub fn rook() -> Self {
        MovePattern {
            rays: ORTHO.iter().map(|&(r, c)| (r, c, None)).collect(),
            jumps: Vec::new(),
        }
    }

    pub fn bishop() -> Self {
        MovePattern {
            rays: DIAG.iter().map(|&(r, c)| (r, c, None)).collect(),
            jumps: Vec::new(),
        }
    }

    pub fn queen() -> Self {
        let mut p = Self::rook();
        p.rays.extend(Self::bishop().rays);
        p
    }

    pub fn king() -> Self {
        MovePattern {
            rays: Vec::new(),
            jumps: ORTHO.iter().chain(DIAG.iter()).copied().collect(),
        }
    }

    pub fn knight() -> Self {
        MovePattern {
            rays: Vec::new(),
            jumps: vec![
                (1, 2),
                (2, 1),
                (-1, 2),
                (-2, 1),
                (1, -2),
                (2, -1),
                (-1, -2),
                (-2, -1),
            ],
        }
    }

    pub fn from_letter(ch: char) -> Option<Self> {
        match ch.to_ascii_uppercase() {
            'Q' => Some(Self::queen()),
            'R' => Some(Self::rook()),
            'B' => Some(Self::bishop()),
            'N' => Some(Self::knight()),
            'K' => Some(Self::king()),
            _ => None,
        }
    }
}

/// Active cells the piece on `cell` could capture on: rays walk until a
/// non-wrapping edge (or around the torus once), jumps land with wrapping.
pub fn threat_cells(board: &Board, cell: CellRef, pattern: &MovePattern) -> BTreeSet<CellRef> {
    let mut out = BTreeSet::new();
    for &(dr, dc, range) in &pattern.rays {
        let steps = match range {
            Some(r) => r as usize,
            None => board.num_cells(),
        };
        for c in board.walk(cell, dr, dc, steps) {
            if board.is_active(c) {
                out.insert(c);
            }
        }
    }
    for &(dr, dc) in &pattern.jumps {
        if let Some(c) = board.step(cell, dr, dc) {
            if c != cell && board.is_active(c) {
                out.insert(c);
            }
        }
    }
    out
}

/// Board plus the piece each cell may host. Cells with no piece type never
/// hold anything; regions are the colored one-per-region constraint of the
/// colored variant, ignored by the max variant.
#[derive(Clone, Debug)]
pub struct PiecesProblem {
    pub board: Board,
    /// Per-cell move pattern, row-major. `None` marks a cell that cannot
    /// hold a piece.
    pub pieces: Vec<Option<MovePattern>>,
    /// Render alphabet per cell, '.' where no piece is allowed.
    pub letters: Vec<char>,
    pub regions: Vec<Region>,
    pub initial: BTreeSet<CellRef>,
    /// Placement reward per cell (all 1 unless piece types are weighted).
    pub weights: Vec<i64>,
}

impl PiecesProblem {
    pub fn uniform(board: Board, pattern: MovePattern, letter: char) -> Self {
        let cells = board.num_cells();
        PiecesProblem {
            board,
            pieces: vec![Some(pattern); cells],
            letters: vec![letter; cells],
            regions: Vec::new(),
            initial: BTreeSet::new(),
            weights: vec![1; cells],
        }
    }

    /// Board with pieceless cells removed from the variable set.
    pub fn effective_board(&self) -> Result<Board, BuildError> {
        let mut b = self.board.clone();
        for idx in 0..self.pieces.len() {
            let cell = b.cell_at(idx);
            if self.pieces[idx].is_none() && b.is_active(cell) {
                b.deactivate(cell)
                    .map_err(|e| BuildError::Invalid(e.to_string()))?;
            }
        }
        Ok(b)
    }

    pub fn pattern_at(&self, cell: CellRef) -> Option<&MovePattern> {
        self.pieces[self.board.index(cell)].as_ref()
    }

    fn validate_region_overlap(&self) -> Result<(), BuildError> {
        let mut seen = BTreeSet::new();
        for region in &self.regions {
            for &c in &region.cells {
                if !seen.insert(c) {
                    return Err(BuildError::Invalid(format!(
                        "cell {c} belongs to more than one colored region"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Fixes everything the initial pieces imply: the pieces themselves, the
/// rest of their regions, and every cell threatening or threatened by them.
fn propagate_piece_initials(
    p: &PiecesProblem,
    board: &Board,
) -> Result<(VarMap, Vec<usize>), Infeasible> {
    let mut vm = VarMap::new(board);
    for &g in &p.initial {
        vm.fix(g, true, "initial piece")?;
    }
    let mut live_regions = Vec::new();
    for (k, region) in p.regions.iter().enumerate() {
        let placed: Vec<CellRef> = region
            .cells
            .iter()
            .copied()
            .filter(|c| p.initial.contains(c))
            .collect();
        if placed.len() > 1 {
            return Err(Infeasible::new(format!(
                "region {} holds {} initial pieces",
                region.id,
                placed.len()
            )));
        }
        if placed.is_empty() {
            live_regions.push(k);
        } else {
            for &c in &region.cells {
                if !p.initial.contains(&c) {
                    vm.fix(c, false, "region occupied by an initial piece")?;
                }
            }
        }
    }
    for &g in &p.initial {
        if let Some(pattern) = p.pattern_at(g) {
            for c in threat_cells(board, g, pattern) {
                vm.fix(c, false, "threatened by an initial piece")?;
            }
        }
    }
    for c in board.active_cells() {
        if p.initial.contains(&c) {
            continue;
        }
        if let Some(pattern) = p.pattern_at(c) {
            if threat_cells(board, c, pattern)
                .iter()
                .any(|t| p.initial.contains(t))
            {
                vm.fix(c, false, "would threaten an initial piece")?;
            }
        }
    }
    Ok((vm, live_regions))
}

fn add_threat_products(
    q: &mut Qubo,
    p: &PiecesProblem,
    board: &Board,
    vm: &VarMap,
    weight: QuarterInt,
) -> Result<(), BuildError> {
    for a in board.active_cells() {
        if let Some(pattern) = p.pattern_at(a) {
            for b in threat_cells(board, a, pattern) {
                q.add_pair_interaction(vm.resolve(a)?, vm.resolve(b)?, weight)?;
            }
        }
    }
    Ok(())
}

/// Colored variant: one-hot penalty per region without an initial piece plus
/// a product per directed threat. Valid boards sit at energy zero.
pub fn build_coloured_pieces(p: &PiecesProblem) -> Result<(Qubo, VarMap), BuildError> {
    p.validate_region_overlap()?;
    let board = p.effective_board()?;
    let (vm, live_regions) = propagate_piece_initials(p, &board)?;
    let mut q = Qubo::new(vm.num_free());
    for &k in &live_regions {
        let region = &p.regions[k];
        if region.cells.is_empty() {
            return Err(BuildError::Invalid(format!("region {} is empty", region.id)));
        }
        let lits: Vec<_> = region
            .cells
            .iter()
            .map(|&c| vm.resolve(c))
            .collect::<Result<_, _>>()?;
        q.add_square_penalty(QuarterInt::ONE, &lits, 1)?;
    }
    add_threat_products(&mut q, p, &board, &vm, QuarterInt::ONE)?;
    Ok((q, vm))
}

/// Maximum-pieces variant: `-weight` per placed piece and `lambda` per
/// directed threat, so the global minimum is minus the heaviest independent
/// set of the threat graph. `lambda` defaults to the board area and must be
/// at least 2.
pub fn build_max_pieces(
    p: &PiecesProblem,
    lambda: Option<i64>,
) -> Result<(Qubo, VarMap, i64), BuildError> {
    let board = p.effective_board()?;
    let lambda = match lambda {
        Some(l) if l < 2 => return Err(BuildError::Invalid(format!("lambda must be >= 2, got {l}"))),
        Some(l) => l,
        None => (board.height() * board.width()).max(2) as i64,
    };
    let (vm, _) = propagate_piece_initials(p, &board)?;
    let mut q = Qubo::new(vm.num_free());
    for c in board.active_cells() {
        let w = p.weights[p.board.index(c)];
        q.add_linear_term(vm.resolve(c)?, QuarterInt::from_int(-w))?;
    }
    add_threat_products(&mut q, p, &board, &vm, QuarterInt::from_int(lambda))?;
    Ok((q, vm, lambda))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cell(r: usize, c: usize) -> CellRef {
        CellRef::new(r, c)
    }

    fn threat_set(board: &Board, at: CellRef, pattern: &MovePattern) -> Vec<(usize, usize)> {
        threat_cells(board, at, pattern)
            .into_iter()
            .map(|c| (c.row, c.col))
            .collect()
    }

    #[test]
    fn knight_corner_threats() {
        let b = Board::rect(3, 3);
        assert_eq!(
            threat_set(&b, cell(1, 1), &MovePattern::knight()),
            vec![(2, 3), (3, 2)]
        );
    }

    #[test]
    fn rook_center_threats() {
        let b = Board::rect(3, 3);
        assert_eq!(
            threat_set(&b, cell(2, 2), &MovePattern::rook()),
            vec![(1, 2), (2, 1), (2, 3), (3, 2)]
        );
    }

    #[test]
    fn king_center_threats_all_neighbors() {
        let b = Board::rect(3, 3);
        assert_eq!(threat_set(&b, cell(2, 2), &MovePattern::king()).len(), 8);
    }

    #[test]
    fn rook_ray_passes_inactive_cells() {
        let mut b = Board::rect(1, 3);
        b.deactivate(cell(1, 2)).unwrap();
        assert_eq!(
            threat_set(&b, cell(1, 1), &MovePattern::rook()),
            vec![(1, 3)]
        );
    }

    #[test]
    fn toroidal_rook_sees_whole_row_once() {
        let b = Board::rect(1, 5).with_wrap(false, true);
        assert_eq!(
            threat_set(&b, cell(1, 2), &MovePattern::rook()).len(),
            4
        );
    }

    #[test]
    fn max_pieces_two_by_two_rooks() {
        let p = PiecesProblem::uniform(Board::rect(2, 2), MovePattern::rook(), 'R');
        let (q, _, lambda) = build_max_pieces(&p, Some(4)).unwrap();
        assert_eq!(lambda, 4);
        let mut best = QuarterInt::from_int(i64::MAX / 8);
        for mask in 0u32..16 {
            let bits: Vec<bool> = (0..4).map(|i| mask >> i & 1 == 1).collect();
            best = best.min(q.energy(&bits).unwrap());
        }
        assert_eq!(best, QuarterInt::from_int(-2));
    }

    #[test]
    fn max_pieces_single_cell() {
        let p = PiecesProblem::uniform(Board::rect(1, 1), MovePattern::queen(), 'Q');
        let (q, _, _) = build_max_pieces(&p, None).unwrap();
        assert_eq!(q.energy(&[true]).unwrap(), QuarterInt::from_int(-1));
        assert_eq!(q.energy(&[false]).unwrap(), QuarterInt::ZERO);
    }

    #[test]
    fn lambda_must_be_at_least_two() {
        let p = PiecesProblem::uniform(Board::rect(2, 2), MovePattern::rook(), 'R');
        assert!(build_max_pieces(&p, Some(1)).is_err());
    }

    #[test]
    fn coloured_initial_piece_shrinks_problem() {
        let mut p = PiecesProblem::uniform(Board::rect(2, 2), MovePattern::rook(), 'R');
        p.regions = vec![
            Region::new("a", [cell(1, 1), cell(1, 2)], 1),
            Region::new("b", [cell(2, 1), cell(2, 2)], 1),
        ];
        p.initial.insert(cell(1, 1));
        let (q, vm) = build_coloured_pieces(&p).unwrap();
        // (1,2) shares the region, (2,1) the file: everything is forced.
        assert_eq!(vm.num_free(), 1);
        let zero = q.energy(&[true]).unwrap();
        assert_eq!(zero, QuarterInt::ZERO);
        assert_eq!(vm.decode(&[true]), vec![true, false, false, true]);
    }

    #[test]
    fn overlapping_regions_rejected() {
        let mut p = PiecesProblem::uniform(Board::rect(2, 2), MovePattern::rook(), 'R');
        p.regions = vec![
            Region::new("a", [cell(1, 1), cell(1, 2)], 1),
            Region::new("b", [cell(1, 2), cell(2, 2)], 1),
        ];
        assert!(build_coloured_pieces(&p).is_err());
    }
}
