//! Instance generators shared by the integration suites.

use rand::seq::SliceRandom;
use rand::Rng;

use quboku::board::CellRef;
use quboku::oracle;
use quboku::takuzu::{Symbol, SymbolKind, TakuzuProblem};
use quboku::Puzzle;

/// A valid board for the given empty problem, varied by seeding a few random
/// cells and taking the first completion the oracle finds.
pub fn random_valid_takuzu_board<R: Rng>(height: usize, width: usize, rng: &mut R) -> Vec<bool> {
    loop {
        let mut p = TakuzuProblem::new(height, width);
        let mut cells: Vec<CellRef> = (1..=height)
            .flat_map(|i| (1..=width).map(move |j| CellRef::new(i, j)))
            .collect();
        cells.shuffle(rng);
        for &c in cells.iter().take(3) {
            if rng.gen_bool(0.5) {
                p.ones.insert(c);
            } else {
                p.zeros.insert(c);
            }
        }
        let found = oracle::enumerate_solutions(&Puzzle::Takuzu(p), 1)
            .expect("enumeration runs")
            .solutions
            .into_iter()
            .next();
        if let Some(board) = found {
            return board;
        }
    }
}

/// Union-find over cell indices with an extra virtual node standing for
/// "already determined", used to keep generated symbols independent: a
/// symbol whose endpoints are already connected (or both given) would not
/// eliminate a variable and would break the reduction bound.
struct SymbolDsu {
    parent: Vec<usize>,
}

impl SymbolDsu {
    fn new(cells: usize) -> Self {
        SymbolDsu {
            parent: (0..=cells).collect(),
        }
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

/// Random solvable Tango-style instance: a valid board, `givens` fixed
/// cells, and `symbols` equality/difference marks consistent with it and
/// pairwise independent.
pub fn random_tango_instance<R: Rng>(
    height: usize,
    width: usize,
    givens: usize,
    symbols: usize,
    long_distance: bool,
    rng: &mut R,
) -> (TakuzuProblem, Vec<bool>) {
    let board = random_valid_takuzu_board(height, width, rng);
    let n = height * width;
    let at = |c: CellRef| board[(c.row - 1) * width + (c.col - 1)];
    let idx = |c: CellRef| (c.row - 1) * width + (c.col - 1);

    let mut p = TakuzuProblem::new(height, width);
    let mut dsu = SymbolDsu::new(n);
    let determined = n; // virtual node

    let mut cells: Vec<CellRef> = (1..=height)
        .flat_map(|i| (1..=width).map(move |j| CellRef::new(i, j)))
        .collect();
    cells.shuffle(rng);
    for &c in cells.iter().take(givens) {
        if at(c) {
            p.ones.insert(c);
        } else {
            p.zeros.insert(c);
        }
        dsu.union(idx(c), determined);
    }

    let mut placed = 0;
    let mut guard = 0;
    while placed < symbols && guard < 10_000 {
        guard += 1;
        let a = CellRef::new(rng.gen_range(1..=height), rng.gen_range(1..=width));
        let b = if long_distance && rng.gen_bool(0.3) {
            CellRef::new(rng.gen_range(1..=height), rng.gen_range(1..=width))
        } else {
            // Adjacent partner, the classic Tango placement.
            let (dr, dc) = *[(0isize, 1isize), (1, 0)].choose(rng).unwrap();
            let r = a.row as isize + dr;
            let c = a.col as isize + dc;
            if r < 1 || r > height as isize || c < 1 || c > width as isize {
                continue;
            }
            CellRef::new(r as usize, c as usize)
        };
        if a == b {
            continue;
        }
        if !dsu.union(idx(a), idx(b)) {
            continue;
        }
        let kind = if at(a) == at(b) {
            SymbolKind::Equal
        } else {
            SymbolKind::Cross
        };
        p.symbols.push(Symbol { kind, a, b });
        placed += 1;
    }
    assert_eq!(placed, symbols, "symbol placement should not starve");
    (p, board)
}
