//! Bridge between the compiled models and the oracle: checks that the
//! assignments sitting at the analytic floor are exactly the oracle's
//! solutions. For Takuzu the floor set is first filtered through the
//! post-hoc non-repetition check, which the quadratic model cannot express.

use thiserror::Error;

use crate::oracle::{self, OracleError};
use crate::puzzle::{BuildError, Puzzle};
use crate::queens::QueensOptions;
use crate::solve::{solve_exhaustive, SolveError};
use crate::takuzu::check_global_nonrepetition;

pub const AGREEMENT_MAX_VARS: usize = 20;

#[derive(Debug, Error)]
pub enum AgreementError {
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("agreement check handles at most {max} free variables, instance has {vars}")]
    TooLarge { vars: usize, max: usize },
}

/// True when the set of boards decoded from the model's floor-energy
/// assignments equals the oracle's solution set. Both sides are enumerated
/// completely, so this also holds (as the empty set) for infeasible
/// instances.
pub fn qubo_oracle_agreement(puzzle: &Puzzle) -> Result<bool, AgreementError> {
    let compiled = puzzle.compile(&QueensOptions::default())?;
    let free = compiled.vars.num_free();
    if free > AGREEMENT_MAX_VARS {
        return Err(AgreementError::TooLarge {
            vars: free,
            max: AGREEMENT_MAX_VARS,
        });
    }
    let cap = 1usize << free;
    let result = solve_exhaustive(&compiled.qubo, cap)?;
    debug_assert!(!result.optima_truncated());

    let mut qubo_boards: Vec<Vec<bool>> = Vec::new();
    let floor = compiled.floor.unwrap_or(result.energy);
    if result.energy == floor {
        for bits in result.optima.as_deref().unwrap_or_default() {
            let board = compiled.vars.decode(bits);
            if let Puzzle::Takuzu(p) = puzzle {
                if !check_global_nonrepetition(p, &board)?.ok {
                    continue;
                }
            }
            qubo_boards.push(board);
        }
    }

    let enumeration = oracle::enumerate_solutions(puzzle, cap.max(1024))?;
    if !enumeration.complete {
        return Err(AgreementError::TooLarge {
            vars: free,
            max: AGREEMENT_MAX_VARS,
        });
    }

    let qubo_set: std::collections::BTreeSet<Vec<bool>> = qubo_boards.into_iter().collect();
    let oracle_set: std::collections::BTreeSet<Vec<bool>> =
        enumeration.solutions.into_iter().collect();
    Ok(qubo_set == oracle_set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::board::{Board, CellRef, Region};
    use crate::pieces::{MovePattern, PiecesProblem};
    use crate::queens::QueensProblem;
    use crate::takuzu::TakuzuProblem;

    #[test]
    fn nqueens4_agrees() {
        assert!(qubo_oracle_agreement(&Puzzle::NQueens(QueensProblem::nqueens(4))).unwrap());
    }

    #[test]
    fn infeasible_instances_agree_on_empty() {
        assert!(qubo_oracle_agreement(&Puzzle::NQueens(QueensProblem::nqueens(2))).unwrap());
        assert!(qubo_oracle_agreement(&Puzzle::NQueens(QueensProblem::nqueens(3))).unwrap());
    }

    #[test]
    fn max_pieces_rooks_agree() {
        let p = PiecesProblem::uniform(Board::rect(2, 2), MovePattern::rook(), 'R');
        assert!(qubo_oracle_agreement(&Puzzle::MaxPieces {
            problem: p,
            lambda: Some(4)
        })
        .unwrap());
    }

    #[test]
    fn takuzu_small_agrees() {
        assert!(qubo_oracle_agreement(&Puzzle::Takuzu(TakuzuProblem::new(2, 2))).unwrap());
        assert!(qubo_oracle_agreement(&Puzzle::Takuzu(TakuzuProblem::new(4, 4))).unwrap());
    }

    #[test]
    fn coloured_rooks_agree() {
        let mut p = PiecesProblem::uniform(Board::rect(2, 2), MovePattern::rook(), 'R');
        p.regions = vec![
            Region::new("a", [CellRef::new(1, 1), CellRef::new(1, 2)], 1),
            Region::new("b", [CellRef::new(2, 1), CellRef::new(2, 2)], 1),
        ];
        assert!(qubo_oracle_agreement(&Puzzle::ColouredPieces(p)).unwrap());
    }
}
