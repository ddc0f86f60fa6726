//! Acceptance gate: one test per criterion, each printing a PASS/FAIL line.
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

mod common;

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use quboku::agreement::qubo_oracle_agreement;
use quboku::board::{Board, CellRef, Region};
use quboku::oracle;
use quboku::pieces::{build_max_pieces, MovePattern, PiecesProblem};
use quboku::queens::{build_nqueens, QueensProblem};
use quboku::solve::{
    solve_anneal, solve_exhaustive, AnnealParams, FlipDeltas, FloorDescriptor,
};
use quboku::takuzu::{
    build_ttp_generalized, build_ttp_with_symbol_penalties, preprocess, preprocess_with,
    PreprocessOptions, TakuzuProblem,
};
use quboku::tents::TentsTreesProblem;
use quboku::{predicted_min_energy, Literal, Puzzle, QuarterInt, Qubo};

fn criterion(n: usize, desc: &str, check: impl FnOnce() + std::panic::UnwindSafe) {
    match std::panic::catch_unwind(check) {
        Ok(()) => println!("criterion {n} ({desc}): PASS"),
        Err(e) => {
            println!("criterion {n} ({desc}): FAIL");
            std::panic::resume_unwind(e);
        }
    }
}

fn cell(r: usize, c: usize) -> CellRef {
    CellRef::new(r, c)
}

/// Boards (full cell values) sitting at `floor`, via complete enumeration.
fn floor_boards(puzzle: &Puzzle, floor: QuarterInt) -> BTreeSet<Vec<bool>> {
    let compiled = puzzle.compile(&Default::default()).expect("compiles");
    let free = compiled.vars.num_free();
    assert!(free <= 20, "test instance too large: {free} free variables");
    let result = solve_exhaustive(&compiled.qubo, 1 << free).expect("solvable size");
    let mut out = BTreeSet::new();
    if result.energy == floor {
        for bits in result.optima.as_deref().unwrap_or_default() {
            out.insert(compiled.vars.decode(bits));
        }
    }
    out
}

fn oracle_boards(puzzle: &Puzzle) -> BTreeSet<Vec<bool>> {
    let e = oracle::enumerate_solutions(puzzle, 1 << 21).expect("enumerates");
    assert!(e.complete);
    e.solutions.into_iter().collect()
}

#[test]
fn criterion_1_nqueens_correctness() {
    criterion(1, "n-queens exhaustive minima vs oracle", || {
        let start = std::time::Instant::now();
        let four = build_nqueens(4);
        let result = solve_exhaustive(&four, 1 << 16).unwrap();
        assert_eq!(result.energy, QuarterInt::ZERO);
        assert_eq!(result.num_optima, Some(2));
        let minima: BTreeSet<Vec<bool>> = result.optima.unwrap().into_iter().collect();
        let expected = oracle_boards(&Puzzle::NQueens(QueensProblem::nqueens(4)));
        assert_eq!(minima, expected);

        assert!(solve_exhaustive(&build_nqueens(2), 1).unwrap().energy > QuarterInt::ZERO);
        assert!(solve_exhaustive(&build_nqueens(3), 1).unwrap().energy > QuarterInt::ZERO);
        assert!(start.elapsed().as_secs() < 5, "criterion 1 exceeded 5 s");
    });
}

#[test]
fn criterion_2_eight_queens_annealing() {
    criterion(2, "8-queens annealing hit rate", || {
        let start = std::time::Instant::now();
        let eight = build_nqueens(8);
        let puzzle = Puzzle::NQueens(QueensProblem::nqueens(8));
        let runs = 20;
        let mut hits = 0;
        for seed in 0..runs {
            let params = AnnealParams::default().with_seed(seed);
            let result = solve_anneal(&eight, &params).unwrap();
            assert!(result.energy >= QuarterInt::ZERO);
            if result.energy == QuarterInt::ZERO {
                hits += 1;
                let report = oracle::verify(&puzzle, &result.best).unwrap();
                assert!(report.satisfied(), "returned optimum fails verification");
            }
        }
        assert!(
            hits * 100 >= runs * 95,
            "only {hits}/{runs} runs reached energy 0"
        );
        assert!(start.elapsed().as_secs() < 30, "criterion 2 exceeded 30 s");
    });
}

#[test]
fn criterion_3_ttp_floor() {
    criterion(3, "Takuzu floor (NM-N-M)/2", || {
        let start = std::time::Instant::now();

        let p4 = TakuzuProblem::new(4, 4);
        let vm = preprocess(&p4).unwrap();
        let q = build_ttp_generalized(&p4, &vm).unwrap();
        assert_eq!(q.num_vars(), 16);
        let result = solve_exhaustive(&q, 1).unwrap();
        assert_eq!(result.energy, QuarterInt::from_int(4));

        let p2 = TakuzuProblem::new(2, 2);
        let vm = preprocess(&p2).unwrap();
        let q = build_ttp_generalized(&p2, &vm).unwrap();
        let result = solve_exhaustive(&q, 16).unwrap();
        assert_eq!(result.energy, QuarterInt::ZERO);
        let minima: BTreeSet<Vec<bool>> = result
            .optima
            .unwrap()
            .iter()
            .map(|bits| vm.decode(bits))
            .collect();
        let balanced: BTreeSet<Vec<bool>> = [
            vec![false, true, true, false],
            vec![true, false, false, true],
        ]
        .into_iter()
        .collect();
        assert_eq!(minima, balanced);
        assert!(start.elapsed().as_secs() < 60, "criterion 3 exceeded 60 s");
    });
}

#[test]
fn criterion_4_tents_floor() {
    criterion(4, "Tents & Trees floor trees/4", || {
        let instances = vec![
            TentsTreesProblem::new(3, [cell(2, 2)], vec![0, 1, 0], vec![1, 0, 0]),
            TentsTreesProblem::new(
                4,
                [cell(1, 1), cell(4, 4)],
                vec![1, 0, 0, 1],
                vec![0, 1, 1, 0],
            ),
            TentsTreesProblem::new(
                5,
                [cell(1, 1), cell(3, 3), cell(5, 5)],
                vec![0, 1, 1, 0, 1],
                vec![1, 0, 0, 2, 0],
            ),
        ];
        for (k, instance) in instances.into_iter().enumerate() {
            let trees = instance.trees.len();
            assert_eq!(trees, k + 1);
            let floor = predicted_min_energy(&FloorDescriptor::Tents { trees });
            let puzzle = Puzzle::Tents(instance);
            let compiled = puzzle.compile(&Default::default()).unwrap();
            assert!(compiled.vars.num_free() <= 16);
            let minima = floor_boards(&puzzle, floor);
            assert!(!minima.is_empty(), "instance {k} should be solvable");
            assert_eq!(minima, oracle_boards(&puzzle), "instance {k}");
        }
    });
}

#[test]
fn criterion_5_variable_reduction_bound() {
    criterion(5, "Tango reduction bound and soundness", || {
        let mut rng = ChaCha8Rng::seed_from_u64(50);
        for trial in 0..20 {
            let givens = 8;
            let symbols = 6;
            let (p, _) = common::random_tango_instance(6, 6, givens, symbols, true, &mut rng);
            let vm = preprocess(&p).unwrap();
            let bound = 36 - givens - symbols;
            assert!(
                vm.num_free() <= bound,
                "trial {trial}: {} free > bound {bound}",
                vm.num_free()
            );

            // Every oracle solution stays consistent with every fixing and
            // alias, so preprocessing cannot lose (or invent) solutions.
            let solutions = oracle::enumerate_solutions(&Puzzle::Takuzu(p.clone()), 1 << 16)
                .unwrap();
            assert!(solutions.complete);
            assert!(!solutions.solutions.is_empty(), "generated instances are solvable");
            for s in &solutions.solutions {
                assert!(vm.is_consistent_with(s), "trial {trial}: fixing contradicts a solution");
            }
        }
    });
}

#[test]
fn criterion_6_alias_equivalence() {
    criterion(6, "alias vs explicit symbol penalties", || {
        let mut rng = ChaCha8Rng::seed_from_u64(60);
        for trial in 0..20 {
            let givens = rng.gen_range(2..=5);
            let symbols = rng.gen_range(1..=4);
            let (p, _) = common::random_tango_instance(4, 4, givens, symbols, true, &mut rng);

            // Aliased production path.
            let vm_aliased = preprocess(&p).unwrap();
            let q_aliased = build_ttp_generalized(&p, &vm_aliased).unwrap();
            let res_aliased = solve_exhaustive(&q_aliased, 1 << 16).unwrap();
            let boards_aliased: BTreeSet<Vec<bool>> = res_aliased
                .optima
                .unwrap()
                .iter()
                .map(|bits| vm_aliased.decode(bits))
                .collect();

            // Explicit penalties, symbols left free.
            let vm_explicit =
                preprocess_with(&p, &PreprocessOptions { use_symbols: false }).unwrap();
            let q_explicit = build_ttp_with_symbol_penalties(&p, &vm_explicit).unwrap();
            assert!(q_explicit.num_vars() <= 16);
            let res_explicit = solve_exhaustive(&q_explicit, 1 << 16).unwrap();
            let boards_explicit: BTreeSet<Vec<bool>> = res_explicit
                .optima
                .unwrap()
                .iter()
                .map(|bits| vm_explicit.decode(bits))
                .collect();

            assert_eq!(boards_aliased, boards_explicit, "trial {trial}");
        }
    });
}

#[test]
fn criterion_7_chess_problems() {
    criterion(7, "chess minima and oracle agreement", || {
        let start = std::time::Instant::now();

        let rooks = PiecesProblem::uniform(Board::rect(2, 2), MovePattern::rook(), 'R');
        let (q, _, _) = build_max_pieces(&rooks, Some(4)).unwrap();
        assert_eq!(
            solve_exhaustive(&q, 1).unwrap().energy,
            QuarterInt::from_int(-2)
        );

        let knights = PiecesProblem::uniform(Board::rect(3, 3), MovePattern::knight(), 'N');
        let (q, _, _) = build_max_pieces(&knights, Some(9)).unwrap();
        assert_eq!(
            solve_exhaustive(&q, 1).unwrap().energy,
            QuarterInt::from_int(-5)
        );
        assert!(qubo_oracle_agreement(&Puzzle::MaxPieces {
            problem: knights,
            lambda: Some(9),
        })
        .unwrap());

        // Colored: 2x2 rooks with row regions, and a mixed-piece board with
        // a unique solution.
        let mut small = PiecesProblem::uniform(Board::rect(2, 2), MovePattern::rook(), 'R');
        small.regions = vec![
            Region::new("a", [cell(1, 1), cell(1, 2)], 1),
            Region::new("b", [cell(2, 1), cell(2, 2)], 1),
        ];
        assert!(qubo_oracle_agreement(&Puzzle::ColouredPieces(small)).unwrap());

        let rows = ["BRB", "RRR", "NNR"];
        let mut pieces = Vec::new();
        let mut letters = Vec::new();
        for row in rows {
            for ch in row.chars() {
                pieces.push(Some(MovePattern::from_letter(ch).unwrap()));
                letters.push(ch);
            }
        }
        let mut mixed = PiecesProblem {
            board: Board::rect(3, 3),
            pieces,
            letters,
            regions: Vec::new(),
            initial: BTreeSet::new(),
            weights: vec![1; 9],
        };
        mixed.regions = (1..=3)
            .map(|i| Region::new(format!("r{i}"), (1..=3).map(move |j| cell(i, j)), 1))
            .collect();
        let puzzle = Puzzle::ColouredPieces(mixed);
        let solutions = oracle_boards(&puzzle);
        assert_eq!(solutions.len(), 1, "hand instance should be unique");
        assert!(qubo_oracle_agreement(&puzzle).unwrap());
        let compiled = puzzle.compile(&Default::default()).unwrap();
        let result = solve_exhaustive(&compiled.qubo, 4).unwrap();
        assert_eq!(result.energy, QuarterInt::ZERO);

        assert!(start.elapsed().as_secs() < 10, "criterion 7 exceeded 10 s");
    });
}

#[test]
fn criterion_8_expansion_soundness() {
    criterion(8, "penalty expansion and flip deltas", || {
        let mut rng = ChaCha8Rng::seed_from_u64(80);

        // 200 random squared penalties over 4 variables, checked against a
        // direct evaluation of weight * (target - sum of literals)^2 kept as
        // a symbolic term list.
        let mut built = 0;
        while built < 200 {
            let num_terms = rng.gen_range(1..=10).min(200 - built);
            let mut q = Qubo::new(4);
            let mut terms: Vec<(i64, Vec<Literal>, i64)> = Vec::new();
            for _ in 0..num_terms {
                let halves = rng.gen_range(-3..=5);
                let weight = rng.gen_range(1..=3);
                let lits: Vec<Literal> = (0..rng.gen_range(1..=4))
                    .map(|_| {
                        let var = rng.gen_range(0..4);
                        match rng.gen_range(0..4) {
                            0 => Literal::Pos(var),
                            1 => Literal::Neg(var),
                            2 => Literal::Zero,
                            _ => Literal::One,
                        }
                    })
                    .collect();
                q.add_square_penalty(QuarterInt::from_halves(halves), &lits, weight)
                    .unwrap();
                terms.push((halves, lits, weight));
            }
            for mask in 0u32..16 {
                let bits: Vec<bool> = (0..4).map(|i| mask >> i & 1 == 1).collect();
                let direct: i64 = terms
                    .iter()
                    .map(|(halves, lits, weight)| {
                        let s: i64 = lits.iter().map(|l| l.value(&bits) as i64).sum();
                        let d = halves - 2 * s;
                        weight * d * d
                    })
                    .sum();
                assert_eq!(q.energy(&bits).unwrap(), QuarterInt::from_quarters(direct));
            }
            built += num_terms;
        }

        // Incremental deltas against full re-evaluation over 10^4 flips.
        let q = Qubo::random(18, 0.4, &mut rng);
        let mut bits: Vec<bool> = (0..18).map(|_| rng.gen_bool(0.5)).collect();
        let mut fd = FlipDeltas::new(&q, &bits);
        let mut energy = q.energy(&bits).unwrap();
        for _ in 0..10_000 {
            let i = rng.gen_range(0..18);
            let predicted = fd.delta(i);
            let applied = fd.flip(&mut bits, i);
            let fresh = q.energy(&bits).unwrap();
            assert_eq!(applied, predicted);
            assert_eq!(fresh - energy, predicted);
            energy = fresh;
        }
    });
}

#[test]
fn criterion_9_serialization_roundtrip() {
    criterion(9, "QUBO text round trip", || {
        let mut rng = ChaCha8Rng::seed_from_u64(90);
        for _ in 0..50 {
            let n = rng.gen_range(0..=14);
            let q = Qubo::random(n, 0.5, &mut rng);
            let text = q.export();
            let back = Qubo::import(&text).unwrap();
            assert_eq!(q, back, "round trip must be bit-exact");
        }
    });
}

use std::collections::BTreeSet as _BTreeSetAlias;
