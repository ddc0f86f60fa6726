//! Minimizers for the compiled models: an exact exhaustive scanner for
//! small variable counts and restarted simulated annealing for the rest.
//!
//! Both have a plain sequential implementation (always available) and a
//! rayon data-parallel one behind the `parallel` feature: the exhaustive
//! scan splits the assignment range into chunks walked in Gray-code order,
//! annealing runs its restarts independently. Results are bit-identical
//! across both paths because chunks/restarts merge in a fixed order.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
#[cfg(feature = "parallel")]
use rayon::prelude::*;
use thiserror::Error;

use crate::qubo::{QuarterInt, Qubo};

pub const EXHAUSTIVE_MAX_VARS: usize = 24;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolveError {
    #[error("exhaustive search handles at most {max} variables, model has {vars}")]
    TooManyVariables { vars: usize, max: usize },
    #[error("invalid annealing parameters: {0}")]
    BadParams(String),
}

#[derive(Clone, Debug, Default)]
pub struct SolveStats {
    pub flips: u64,
    pub restarts: u32,
    pub elapsed: Duration,
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    pub best: Vec<bool>,
    pub energy: QuarterInt,
    /// All minimizing assignments up to the requested cap (exhaustive only).
    pub optima: Option<Vec<Vec<bool>>>,
    /// Exact number of minimizers, even beyond the cap (exhaustive only).
    pub num_optima: Option<u64>,
    pub stats: SolveStats,
}

impl SolveResult {
    /// True when the optima list was truncated at the cap.
    pub fn optima_truncated(&self) -> bool {
        match (&self.optima, self.num_optima) {
            (Some(list), Some(n)) => (list.len() as u64) < n,
            _ => false,
        }
    }
}

/// Simulated annealing parameters. The default temperature is picked per
/// restart as the largest absolute flip delta of its starting point.
#[derive(Clone, Copy, Debug)]
pub struct AnnealParams {
    pub restarts: u32,
    pub sweeps: u32,
    pub initial_temp: Option<f64>,
    pub cooling: f64,
    pub seed: u64,
}

impl Default for AnnealParams {
    fn default() -> Self {
        AnnealParams {
            restarts: 20,
            sweeps: 2000,
            initial_temp: None,
            cooling: 0.97,
            seed: 0,
        }
    }
}

impl AnnealParams {
    fn validate(&self) -> Result<(), SolveError> {
        if self.restarts == 0 || self.sweeps == 0 {
            return Err(SolveError::BadParams("restarts and sweeps must be positive".into()));
        }
        if !(0.0 < self.cooling && self.cooling < 1.0) {
            return Err(SolveError::BadParams(format!(
                "cooling factor must lie in (0, 1), got {}",
                self.cooling
            )));
        }
        if let Some(t) = self.initial_temp {
            if !(t > 0.0) {
                return Err(SolveError::BadParams("initial temperature must be positive".into()));
            }
        }
        Ok(())
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// Adjacency-list view of a model, coefficients in quarter units.
struct DenseModel {
    offset: i64,
    linear: Vec<i64>,
    neighbors: Vec<Vec<(usize, i64)>>,
}

impl DenseModel {
    fn new(q: &Qubo) -> Self {
        let n = q.num_vars();
        let mut linear = vec![0i64; n];
        for (&i, &a) in q.linear() {
            linear[i] = a.quarters();
        }
        let mut neighbors = vec![Vec::new(); n];
        for (&(i, j), &b) in q.quadratic() {
            neighbors[i].push((j, b.quarters()));
            neighbors[j].push((i, b.quarters()));
        }
        DenseModel {
            offset: q.offset().quarters(),
            linear,
            neighbors,
        }
    }

    fn num_vars(&self) -> usize {
        self.linear.len()
    }

    fn energy_quarters(&self, bits: &[bool]) -> i64 {
        let mut e = self.offset;
        for (i, &on) in bits.iter().enumerate() {
            if on {
                e += self.linear[i];
                for &(j, w) in &self.neighbors[i] {
                    if j > i && bits[j] {
                        e += w;
                    }
                }
            }
        }
        e
    }
}

/// Incrementally maintained single-flip energy deltas: `delta(i)` is the
/// exact energy change of flipping variable `i` in the current assignment,
/// updated in O(degree) per applied flip.
pub struct FlipDeltas {
    model: DenseModel,
    deltas: Vec<i64>,
}

impl FlipDeltas {
    pub fn new(q: &Qubo, bits: &[bool]) -> Self {
        assert_eq!(bits.len(), q.num_vars());
        let model = DenseModel::new(q);
        let deltas = Self::full_deltas(&model, bits);
        FlipDeltas { model, deltas }
    }

    fn full_deltas(model: &DenseModel, bits: &[bool]) -> Vec<i64> {
        (0..model.num_vars())
            .map(|i| {
                let mut d = model.linear[i];
                for &(j, w) in &model.neighbors[i] {
                    if bits[j] {
                        d += w;
                    }
                }
                if bits[i] {
                    -d
                } else {
                    d
                }
            })
            .collect()
    }

    pub fn delta(&self, i: usize) -> QuarterInt {
        QuarterInt::from_quarters(self.deltas[i])
    }

    /// Flips variable `i` in `bits`, updates every affected delta, and
    /// returns the energy change that flip caused.
    pub fn flip(&mut self, bits: &mut [bool], i: usize) -> QuarterInt {
        let applied = self.deltas[i];
        bits[i] = !bits[i];
        self.deltas[i] = -applied;
        let step = if bits[i] { 1 } else { -1 };
        for k in 0..self.model.neighbors[i].len() {
            let (j, w) = self.model.neighbors[i][k];
            let sign = if bits[j] { -1 } else { 1 };
            self.deltas[j] += sign * w * step;
        }
        QuarterInt::from_quarters(applied)
    }
}

struct ChunkOutcome {
    best_energy: i64,
    /// Gray masks of the minimizers, in scan order, capped.
    optima: Vec<u64>,
    count: u64,
}

/// Walks assignments `gray(lo) .. gray(hi-1)` updating the energy by one
/// flip per step.
fn scan_range(model: &DenseModel, lo: u64, hi: u64, cap: usize) -> ChunkOutcome {
    let n = model.num_vars();
    let mut mask = lo ^ (lo >> 1);
    let mut bits: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
    let mut energy = model.energy_quarters(&bits);
    let mut out = ChunkOutcome {
        best_energy: energy,
        optima: Vec::new(),
        count: 0,
    };
    for k in lo..hi {
        if energy < out.best_energy {
            out.best_energy = energy;
            out.optima.clear();
            out.count = 0;
        }
        if energy == out.best_energy {
            out.count += 1;
            if out.optima.len() < cap {
                out.optima.push(mask);
            }
        }
        if k + 1 < hi {
            let bit = (k + 1).trailing_zeros() as usize;
            let i = bit;
            let mut d = model.linear[i];
            for &(j, w) in &model.neighbors[i] {
                if bits[j] {
                    d += w;
                }
            }
            if bits[i] {
                energy -= d;
            } else {
                energy += d;
            }
            bits[i] = !bits[i];
            mask ^= 1 << i;
        }
    }
    out
}

fn bits_from_mask(mask: u64, n: usize) -> Vec<bool> {
    (0..n).map(|i| mask >> i & 1 == 1).collect()
}

fn merge_chunks(q: &Qubo, chunks: Vec<ChunkOutcome>, cap: usize, start: Instant) -> SolveResult {
    let n = q.num_vars();
    let best = chunks.iter().map(|c| c.best_energy).min().expect("nonempty");
    let mut optima = Vec::new();
    let mut count = 0u64;
    for c in &chunks {
        if c.best_energy == best {
            count += c.count;
            for &mask in &c.optima {
                if optima.len() < cap {
                    optima.push(bits_from_mask(mask, n));
                }
            }
        }
    }
    let best_bits = optima.first().cloned().unwrap_or_else(|| bits_from_mask(0, n));
    SolveResult {
        best: best_bits,
        energy: QuarterInt::from_quarters(best),
        optima: Some(optima),
        num_optima: Some(count),
        stats: SolveStats {
            flips: if n >= 64 { u64::MAX } else { 1u64 << n },
            restarts: 0,
            elapsed: start.elapsed(),
        },
    }
}

fn check_exhaustive_size(q: &Qubo) -> Result<(), SolveError> {
    if q.num_vars() > EXHAUSTIVE_MAX_VARS {
        return Err(SolveError::TooManyVariables {
            vars: q.num_vars(),
            max: EXHAUSTIVE_MAX_VARS,
        });
    }
    Ok(())
}

/// Exact global minimum by enumeration, sequential path. `cap` bounds the
/// list of returned minimizers; the count stays exact regardless.
pub fn solve_exhaustive_seq(q: &Qubo, cap: usize) -> Result<SolveResult, SolveError> {
    check_exhaustive_size(q)?;
    let start = Instant::now();
    let model = DenseModel::new(q);
    let total = 1u64 << q.num_vars();
    let chunk = scan_range(&model, 0, total, cap);
    Ok(merge_chunks(q, vec![chunk], cap, start))
}

/// Exact global minimum by enumeration; splits the range across the rayon
/// pool when the `parallel` feature is on.
#[cfg(feature = "parallel")]
pub fn solve_exhaustive(q: &Qubo, cap: usize) -> Result<SolveResult, SolveError> {
    check_exhaustive_size(q)?;
    let start = Instant::now();
    let model = DenseModel::new(q);
    let total = 1u64 << q.num_vars();
    let chunk_size = (total / 128).max(1 << 10).max(1);
    let ranges: Vec<(u64, u64)> = (0..total)
        .step_by(chunk_size as usize)
        .map(|lo| (lo, (lo + chunk_size).min(total)))
        .collect();
    let chunks: Vec<ChunkOutcome> = ranges
        .into_par_iter()
        .map(|(lo, hi)| scan_range(&model, lo, hi, cap))
        .collect();
    Ok(merge_chunks(q, chunks, cap, start))
}

#[cfg(not(feature = "parallel"))]
pub fn solve_exhaustive(q: &Qubo, cap: usize) -> Result<SolveResult, SolveError> {
    solve_exhaustive_seq(q, cap)
}

fn anneal_restart(q: &Qubo, params: &AnnealParams, restart: u32) -> (i64, Vec<bool>, u64) {
    let n = q.num_vars();
    let mut rng = ChaCha8Rng::seed_from_u64(
        params
            .seed
            .wrapping_add((restart as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)),
    );
    let mut bits: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
    let mut fd = FlipDeltas::new(q, &bits);
    let mut energy = DenseModel::new(q).energy_quarters(&bits);
    let mut best = (energy, bits.clone());
    let mut flips = 0u64;

    let mut temp = params.initial_temp.unwrap_or_else(|| {
        let hottest = (0..n).map(|i| fd.delta(i).quarters().abs()).max().unwrap_or(0);
        (hottest as f64 / 4.0).max(1.0)
    });

    for _ in 0..params.sweeps {
        for _ in 0..n {
            let i = rng.gen_range(0..n);
            let d = fd.delta(i).quarters();
            let accept = d <= 0 || rng.gen::<f64>() < (-(d as f64 / 4.0) / temp).exp();
            if accept {
                fd.flip(&mut bits, i);
                energy += d;
                flips += 1;
                if energy < best.0 {
                    best = (energy, bits.clone());
                }
            }
        }
        temp = (temp * params.cooling).max(1e-12);
    }
    (best.0, best.1, flips)
}

fn pick_best(runs: Vec<(i64, Vec<bool>, u64)>, params: &AnnealParams, start: Instant) -> SolveResult {
    let total_flips = runs.iter().map(|r| r.2).sum();
    let (energy, bits, _) = runs
        .into_iter()
        .enumerate()
        .min_by_key(|(idx, (e, _, _))| (*e, *idx))
        .map(|(_, r)| r)
        .expect("at least one restart");
    SolveResult {
        best: bits,
        energy: QuarterInt::from_quarters(energy),
        optima: None,
        num_optima: None,
        stats: SolveStats {
            flips: total_flips,
            restarts: params.restarts,
            elapsed: start.elapsed(),
        },
    }
}

fn anneal_trivial(q: &Qubo, start: Instant) -> SolveResult {
    SolveResult {
        best: Vec::new(),
        energy: q.offset(),
        optima: None,
        num_optima: None,
        stats: SolveStats {
            flips: 0,
            restarts: 0,
            elapsed: start.elapsed(),
        },
    }
}

/// Metropolis single-flip annealing with geometric cooling, sequential
/// restarts. Deterministic for a fixed seed.
pub fn solve_anneal_seq(q: &Qubo, params: &AnnealParams) -> Result<SolveResult, SolveError> {
    params.validate()?;
    let start = Instant::now();
    if q.num_vars() == 0 {
        return Ok(anneal_trivial(q, start));
    }
    let runs: Vec<_> = (0..params.restarts)
        .map(|r| anneal_restart(q, params, r))
        .collect();
    Ok(pick_best(runs, params, start))
}

/// Same annealing with restarts spread over the rayon pool. Restart RNG
/// streams depend only on (seed, restart index), so the outcome matches the
/// sequential path exactly.
#[cfg(feature = "parallel")]
pub fn solve_anneal(q: &Qubo, params: &AnnealParams) -> Result<SolveResult, SolveError> {
    params.validate()?;
    let start = Instant::now();
    if q.num_vars() == 0 {
        return Ok(anneal_trivial(q, start));
    }
    let runs: Vec<_> = (0..params.restarts)
        .into_par_iter()
        .map(|r| anneal_restart(q, params, r))
        .collect();
    Ok(pick_best(runs, params, start))
}

#[cfg(not(feature = "parallel"))]
pub fn solve_anneal(q: &Qubo, params: &AnnealParams) -> Result<SolveResult, SolveError> {
    solve_anneal_seq(q, params)
}

/// Formulation family for the analytic energy floor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FloorDescriptor {
    /// Every penalty has an integer target: valid boards sit at zero.
    HardConstraints,
    /// Queens with flexible regions: each contributes a quarter.
    SoftRegions { count: usize },
    /// Tents & Trees: a quarter per tree.
    Tents { trees: usize },
    /// Takuzu repetition windows: a quarter per window.
    Takuzu { windows: usize },
}

/// The analytic minimum of a satisfiable instance: one quarter per
/// half-target penalty in the formulation.
pub fn predicted_min_energy(d: &FloorDescriptor) -> QuarterInt {
    let quarters = match d {
        FloorDescriptor::HardConstraints => 0,
        FloorDescriptor::SoftRegions { count } => *count,
        FloorDescriptor::Tents { trees } => *trees,
        FloorDescriptor::Takuzu { windows } => *windows,
    };
    QuarterInt::from_quarters(quarters as i64)
}
