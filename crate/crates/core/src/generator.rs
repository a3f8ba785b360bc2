//! Seeded generation of puzzles with exactly one solution.
//!
//! Each attempt fills a grid at random, derives its clues and keeps it only
//! if the solver proves the solution unique (and the rating matches when a
//! difficulty was requested). Attempts are numbered; attempt `k` for seed `s`
//! always draws from the same SplitMix64 stream, so a `(dims, seed,
//! difficulty)` triple reproduces the same puzzle on every platform.

use std::fmt;
use std::str::FromStr;

use rand::RngCore;
use rand::SeedableRng;
use rand_xoshiro::SplitMix64;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::grid::{AssignmentGrid, ClueGrid, DigitSet, GridDims, GridError};
use crate::solver::{self, SolveError, SolveStats, SolveStatus, SolverConfig};

/// Bumped whenever generated output for a given config may change.
pub const GENERATOR_VERSION: &str = "partiti-gen/1 splitmix64";

/// Branch-node budget separating Medium from Hard.
pub const DEFAULT_MEDIUM_BRANCH_LIMIT: u64 = 20;

/// Relative weights for cell set sizes 1..=6.
pub const DEFAULT_SET_SIZE_WEIGHTS: [u32; 6] = [3, 4, 3, 2, 1, 1];

/// Redraw budget per cell for one random fill.
const FILL_BUDGET_PER_CELL: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Difficulty {
    Easy,
    Medium,
    Hard,
}

impl Difficulty {
    pub fn as_str(self) -> &'static str {
        match self {
            Difficulty::Easy => "easy",
            Difficulty::Medium => "medium",
            Difficulty::Hard => "hard",
        }
    }
}

impl fmt::Display for Difficulty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Difficulty {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "easy" => Ok(Difficulty::Easy),
            "medium" => Ok(Difficulty::Medium),
            "hard" => Ok(Difficulty::Hard),
            other => Err(format!("unknown difficulty '{other}'")),
        }
    }
}

/// A requested difficulty; `Any` accepts every unique puzzle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum DifficultyRequest {
    #[default]
    Any,
    Exactly(Difficulty),
}

impl DifficultyRequest {
    pub fn as_str(self) -> &'static str {
        match self {
            DifficultyRequest::Any => "any",
            DifficultyRequest::Exactly(d) => d.as_str(),
        }
    }

    pub fn accepts(self, d: Difficulty) -> bool {
        match self {
            DifficultyRequest::Any => true,
            DifficultyRequest::Exactly(want) => want == d,
        }
    }
}

impl fmt::Display for DifficultyRequest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DifficultyRequest {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("any") {
            Ok(DifficultyRequest::Any)
        } else {
            s.parse().map(DifficultyRequest::Exactly)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorConfig {
    pub dims: GridDims,
    pub seed: u64,
    pub difficulty: DifficultyRequest,
    pub max_attempts: u32,
    pub set_size_weights: [u32; 6],
    pub medium_branch_limit: u64,
    /// Node budget for each uniqueness check; hitting it rejects the attempt.
    pub node_limit: u64,
}

impl GeneratorConfig {
    pub fn new(dims: GridDims, seed: u64) -> Self {
        Self {
            dims,
            seed,
            difficulty: DifficultyRequest::Any,
            max_attempts: 10_000,
            set_size_weights: DEFAULT_SET_SIZE_WEIGHTS,
            medium_branch_limit: DEFAULT_MEDIUM_BRANCH_LIMIT,
            node_limit: solver::DEFAULT_NODE_LIMIT,
        }
    }

    pub fn with_difficulty(mut self, difficulty: DifficultyRequest) -> Self {
        self.difficulty = difficulty;
        self
    }

    fn validate(&self) -> Result<(), GenerateError> {
        if self.set_size_weights.iter().all(|&w| w == 0) {
            return Err(GenerateError::ZeroWeights);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct AttemptStats {
    pub attempts: u32,
    pub fill_failures: u32,
    pub not_unique: u32,
    pub node_limited: u32,
    pub wrong_difficulty: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error(
        "no puzzle accepted after {} attempts (fill failures {}, not unique {}, node limit {}, wrong difficulty {})",
        .0.attempts, .0.fill_failures, .0.not_unique, .0.node_limited, .0.wrong_difficulty
    )]
    Exhausted(AttemptStats),
    #[error("set size weights are all zero")]
    ZeroWeights,
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RateError {
    #[error("puzzle is not unique: found {0} solutions")]
    NotUnique(usize),
    #[error("node limit reached before uniqueness was settled")]
    NodeLimit,
    #[error(transparent)]
    Solve(#[from] SolveError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Puzzle {
    pub clues: ClueGrid,
    pub solution: AssignmentGrid,
    pub seed: u64,
    pub difficulty: Difficulty,
    /// Stable hash of the inputs that reproduce this puzzle.
    pub id: String,
    /// Zero-based index of the accepted attempt.
    pub attempt: u32,
}

/// Hex id derived from `(dims, seed, requested difficulty, generator version)`.
pub fn puzzle_id(dims: GridDims, seed: u64, difficulty: DifficultyRequest) -> String {
    let key = format!(
        "{GENERATOR_VERSION};{}x{};seed={seed};difficulty={}",
        dims.rows(),
        dims.cols(),
        difficulty.as_str()
    );
    let digest = Sha256::digest(key.as_bytes());
    digest[..8].iter().map(|b| format!("{b:02x}")).collect()
}

/// The SplitMix64 stream for one attempt. The state is the seed mixed with
/// the attempt number by a golden-ratio multiply.
pub fn attempt_rng(seed: u64, attempt: u32) -> SplitMix64 {
    let state = seed ^ (u64::from(attempt) + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    SplitMix64::from_seed(state.to_le_bytes())
}

/// Unbiased draw from `0..n` by rejection; `n > 0`.
fn below(rng: &mut SplitMix64, n: u64) -> u64 {
    debug_assert!(n > 0);
    let zone = u64::MAX - (u64::MAX % n);
    loop {
        let x = rng.next_u64();
        if x < zone {
            return x % n;
        }
    }
}

fn masks_by_size() -> [Vec<u16>; 10] {
    let mut out: [Vec<u16>; 10] = Default::default();
    for m in 1u16..512 {
        out[m.count_ones() as usize].push(m);
    }
    out
}

/// Draws one digit set: a size by weight among sizes that still have an
/// untried option, then a set of that size uniformly among the options.
fn draw_set(
    rng: &mut SplitMix64,
    by_size: &[Vec<u16>; 10],
    weights: &[u32; 6],
    allowed: DigitSet,
    tried: &[DigitSet],
) -> Option<DigitSet> {
    let options = |size: usize| -> Vec<DigitSet> {
        by_size[size]
            .iter()
            .map(|&m| DigitSet::from_mask(m))
            .filter(|s| s.is_subset(allowed) && !tried.contains(s))
            .collect()
    };
    let mut sizes: Vec<(usize, u32)> = (1..=6)
        .filter(|&s| weights[s - 1] > 0)
        .map(|s| (s, weights[s - 1]))
        .collect();
    loop {
        let total: u64 = sizes.iter().map(|&(_, w)| u64::from(w)).sum();
        if total == 0 {
            return None;
        }
        let mut pick = below(rng, total);
        let idx = sizes
            .iter()
            .position(|&(_, w)| {
                if pick < u64::from(w) {
                    true
                } else {
                    pick -= u64::from(w);
                    false
                }
            })
            .expect("pick < total");
        let opts = options(sizes[idx].0);
        if opts.is_empty() {
            sizes.remove(idx);
            continue;
        }
        return Some(opts[below(rng, opts.len() as u64) as usize]);
    }
}

/// A random complete valid assignment for attempt `attempt`, or `None` if
/// the bounded randomized backtracking fill ran out of budget.
///
/// Cells are filled row-major. Each cell draws a set size from the weights,
/// then a set of that size uniformly among those disjoint from its filled
/// neighbours. A cell with no option left sends the fill back to the filled
/// neighbour with the largest set, where that set is excluded from further
/// draws and every cell after it is redrawn.
pub fn random_assignment(config: &GeneratorConfig, attempt: u32) -> Option<AssignmentGrid> {
    let dims = config.dims;
    let mut rng = attempt_rng(config.seed, attempt);
    let by_size = masks_by_size();
    let earlier: Vec<Vec<usize>> = dims
        .cells()
        .map(|c| {
            crate::grid::neighbors_unchecked(dims, c)
                .filter(|&n| n < c)
                .map(|n| dims.index(n))
                .collect()
        })
        .collect();

    let mut cells = vec![DigitSet::EMPTY; dims.len()];
    let mut tried: Vec<Vec<DigitSet>> = vec![Vec::new(); dims.len()];
    let mut budget = FILL_BUDGET_PER_CELL * dims.len();
    let mut i = 0;
    while i < dims.len() {
        if budget == 0 {
            return None;
        }
        budget -= 1;
        let banned = earlier[i].iter().fold(DigitSet::EMPTY, |u, &n| u.union(cells[n]));
        match draw_set(
            &mut rng,
            &by_size,
            &config.set_size_weights,
            banned.complement(),
            &tried[i],
        ) {
            Some(set) => {
                cells[i] = set;
                i += 1;
            }
            None => {
                // Jump back to the filled neighbour holding the most digits
                // (latest on ties), exclude its set there and refill from it.
                let &culprit = earlier[i].iter().max_by_key(|&&n| (cells[n].len(), n))?;
                for j in culprit + 1..=i {
                    tried[j].clear();
                    cells[j] = DigitSet::EMPTY;
                }
                tried[culprit].push(cells[culprit]);
                cells[culprit] = DigitSet::EMPTY;
                i = culprit;
            }
        }
    }
    Some(AssignmentGrid::new(dims, cells).expect("shape matches"))
}

/// Each clue is the digit sum of its cell.
pub fn derive_clues(assignment: &AssignmentGrid) -> Result<ClueGrid, GridError> {
    let dims = assignment.dims();
    for cell in dims.cells() {
        if assignment.get(cell).is_empty() {
            return Err(GridError::EmptyCell {
                row: cell.row,
                col: cell.col,
            });
        }
    }
    ClueGrid::new(dims, assignment.as_slice().iter().map(|s| s.sum()).collect())
}

fn rating_from_stats(stats: &SolveStats, medium_branch_limit: u64) -> Difficulty {
    match stats.branch_nodes {
        0 => Difficulty::Easy,
        n if n <= medium_branch_limit => Difficulty::Medium,
        _ => Difficulty::Hard,
    }
}

/// Rates a unique puzzle by how much search the solver needs: Easy when
/// propagation alone solves it, Medium up to `medium_branch_limit` branch
/// nodes, Hard beyond.
pub fn rate_difficulty(clues: &ClueGrid, medium_branch_limit: u64) -> Result<Difficulty, RateError> {
    rate_with(clues, medium_branch_limit, &SolverConfig::default())
}

/// [`rate_difficulty`] with an explicit solver configuration (cap is forced to 2).
pub fn rate_with(clues: &ClueGrid, medium_branch_limit: u64, config: &SolverConfig) -> Result<Difficulty, RateError> {
    let config = SolverConfig {
        solution_cap: 2,
        ..*config
    };
    let r = solver::solve(clues, &config)?;
    match (r.status, r.count()) {
        (SolveStatus::NodeLimit, _) => Err(RateError::NodeLimit),
        (_, 1) => Ok(rating_from_stats(&r.stats, medium_branch_limit)),
        (_, n) => Err(RateError::NotUnique(n)),
    }
}

/// Runs attempts in order until one is unique and matches the requested
/// difficulty; the lowest accepted attempt wins.
pub fn generate_puzzle(config: &GeneratorConfig) -> Result<Puzzle, GenerateError> {
    config.validate()?;
    let mut stats = AttemptStats::default();
    let solver_config = SolverConfig {
        solution_cap: 2,
        node_limit: config.node_limit,
        enable_sum_cover: true,
    };
    for attempt in 0..config.max_attempts {
        stats.attempts += 1;
        let Some(solution) = random_assignment(config, attempt) else {
            stats.fill_failures += 1;
            continue;
        };
        let clues = derive_clues(&solution)?;
        let r = solver::solve(&clues, &solver_config)?;
        if r.status == SolveStatus::NodeLimit {
            stats.node_limited += 1;
            continue;
        }
        if r.count() != 1 {
            stats.not_unique += 1;
            continue;
        }
        let difficulty = rating_from_stats(&r.stats, config.medium_branch_limit);
        if !config.difficulty.accepts(difficulty) {
            stats.wrong_difficulty += 1;
            continue;
        }
        debug_assert_eq!(r.solutions[0], solution);
        return Ok(Puzzle {
            clues,
            solution,
            seed: config.seed,
            difficulty,
            id: puzzle_id(config.dims, config.seed, config.difficulty),
            attempt,
        });
    }
    Err(GenerateError::Exhausted(stats))
}
