//! Instance wrapper tying the formulation families together: one enum for
//! every supported puzzle, a shared compile entry point, and the compiled
//! artifact (model + variable map + analytic floor) the solver front ends
//! consume.

use thiserror::Error;

use crate::pieces::{build_coloured_pieces, build_max_pieces, PiecesProblem};
use crate::queens::{
    build_general_queens, build_lqueens, build_strict_queens, toroidal_warning, QueensOptions,
    QueensProblem,
};
use crate::qubo::{QuarterInt, Qubo, QuboError};
use crate::solve::{predicted_min_energy, FloorDescriptor};
use crate::takuzu::{build_ttp_generalized, preprocess, window_count, TakuzuProblem};
use crate::tents::{build_tents_trees, TentsTreesProblem};
use crate::vars::{Infeasible, VarMap};

#[derive(Debug, Error)]
pub enum BuildError {
    #[error(transparent)]
    Infeasible(#[from] Infeasible),
    #[error(transparent)]
    Qubo(#[from] QuboError),
    #[error("invalid problem: {0}")]
    Invalid(String),
}

/// Any puzzle instance this crate can compile and verify.
#[derive(Clone, Debug)]
pub enum Puzzle {
    NQueens(QueensProblem),
    LQueens(QueensProblem),
    GeneralQueens(QueensProblem),
    Tents(TentsTreesProblem),
    ColouredPieces(PiecesProblem),
    MaxPieces {
        problem: PiecesProblem,
        lambda: Option<i64>,
    },
    Takuzu(TakuzuProblem),
}

/// A compiled instance: the model over the reduced variables, the map back
/// to cells, and the analytic energy floor a solvable instance attains
/// (`None` for the open-ended maximum-pieces objective).
#[derive(Clone, Debug)]
pub struct Compiled {
    pub qubo: Qubo,
    pub vars: VarMap,
    pub floor: Option<QuarterInt>,
    pub fractional_penalties: usize,
    pub warnings: Vec<String>,
}

impl Puzzle {
    pub fn family(&self) -> &'static str {
        match self {
            Puzzle::NQueens(_) => "nqueens",
            Puzzle::LQueens(_) => "lqueens",
            Puzzle::GeneralQueens(_) => "general-queens",
            Puzzle::Tents(_) => "tents",
            Puzzle::ColouredPieces(_) => "pieces-coloured",
            Puzzle::MaxPieces { .. } => "pieces-max",
            Puzzle::Takuzu(_) => "takuzu",
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        match self {
            Puzzle::NQueens(p) | Puzzle::LQueens(p) | Puzzle::GeneralQueens(p) => {
                (p.board.height(), p.board.width())
            }
            Puzzle::Tents(p) => (p.size, p.size),
            Puzzle::ColouredPieces(p) | Puzzle::MaxPieces { problem: p, .. } => {
                (p.board.height(), p.board.width())
            }
            Puzzle::Takuzu(p) => (p.height, p.width),
        }
    }

    pub fn compile(&self, opts: &QueensOptions) -> Result<Compiled, BuildError> {
        match self {
            Puzzle::NQueens(p) => {
                let (qubo, vars) = build_strict_queens(p, opts)?;
                Ok(Compiled {
                    qubo,
                    vars,
                    floor: Some(QuarterInt::ZERO),
                    fractional_penalties: 0,
                    warnings: toroidal_warning(p).into_iter().collect(),
                })
            }
            Puzzle::LQueens(p) => {
                let (qubo, vars) = build_lqueens(p, opts)?;
                Ok(Compiled {
                    qubo,
                    vars,
                    floor: Some(QuarterInt::ZERO),
                    fractional_penalties: 0,
                    warnings: toroidal_warning(p).into_iter().collect(),
                })
            }
            Puzzle::GeneralQueens(p) => {
                let (qubo, vars, fractional) = build_general_queens(p, opts)?;
                Ok(Compiled {
                    qubo,
                    vars,
                    floor: Some(predicted_min_energy(&FloorDescriptor::SoftRegions {
                        count: fractional,
                    })),
                    fractional_penalties: fractional,
                    warnings: toroidal_warning(p).into_iter().collect(),
                })
            }
            Puzzle::Tents(p) => {
                let (qubo, vars, trees) = build_tents_trees(p)?;
                Ok(Compiled {
                    qubo,
                    vars,
                    floor: Some(predicted_min_energy(&FloorDescriptor::Tents { trees })),
                    fractional_penalties: trees,
                    warnings: Vec::new(),
                })
            }
            Puzzle::ColouredPieces(p) => {
                let (qubo, vars) = build_coloured_pieces(p)?;
                Ok(Compiled {
                    qubo,
                    vars,
                    floor: Some(QuarterInt::ZERO),
                    fractional_penalties: 0,
                    warnings: Vec::new(),
                })
            }
            Puzzle::MaxPieces { problem, lambda } => {
                let (qubo, vars, _) = build_max_pieces(problem, *lambda)?;
                Ok(Compiled {
                    qubo,
                    vars,
                    floor: None,
                    fractional_penalties: 0,
                    warnings: Vec::new(),
                })
            }
            Puzzle::Takuzu(p) => {
                let vars = preprocess(p)?;
                let qubo = build_ttp_generalized(p, &vars)?;
                let windows = window_count(p);
                Ok(Compiled {
                    qubo,
                    vars,
                    floor: Some(predicted_min_energy(&FloorDescriptor::Takuzu { windows })),
                    fractional_penalties: windows,
                    warnings: Vec::new(),
                })
            }
        }
    }
}
