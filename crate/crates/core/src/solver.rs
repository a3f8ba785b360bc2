//! Constraint propagation and backtracking search.
//!
//! The working state is a [`CandidateTable`]: for every cell, the digit sets
//! that still sum to its clue and avoid the digits its neighbours have
//! claimed. Three deduction rules shrink it to a fixpoint:
//!
//! - **R1 required-digit exclusion**: a digit present in every candidate of a
//!   cell is banned from all of that cell's neighbours.
//! - **R2 forbidden filter**: candidates that use a banned digit are dropped.
//! - **R3 sum cover**: for adjacent cells `a`, `b`, let `U` be every digit
//!   still used by some candidate of either. If `clue(a) + clue(b) == sum(U)`
//!   the pair must split `U` exactly, so a candidate `x` of `a` survives only
//!   if `U \ x` is a candidate of `b` (and symmetrically).
//!
//! Search picks the unsolved cell with the fewest candidates (row-major
//! tie-break) and branches over its candidates in lexicographic order, so
//! runs are reproducible including their statistics.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::grid::{
    validate_assignment, Adjacency, AssignmentGrid, CellIndex, ClueGrid, DigitSet, GridDims, GridError, Violation,
};

/// Default search budget in expanded nodes.
pub const DEFAULT_NODE_LIMIT: u64 = 10_000_000;
/// Largest Cartesian product [`brute_force_solve`] will walk.
pub const BRUTE_FORCE_LIMIT: u128 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("brute-force search space of {size} assignments exceeds {BRUTE_FORCE_LIMIT}")]
    SearchSpaceTooLarge { size: u128 },
    #[error("solution cap must be at least 1")]
    ZeroCap,
    #[error(transparent)]
    Grid(#[from] GridError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SolverConfig {
    pub solution_cap: usize,
    pub node_limit: u64,
    pub enable_sum_cover: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            solution_cap: 2,
            node_limit: DEFAULT_NODE_LIMIT,
            enable_sum_cover: true,
        }
    }
}

impl SolverConfig {
    pub fn with_cap(cap: usize) -> Self {
        Self {
            solution_cap: cap,
            ..Self::default()
        }
    }

    /// No solution cap; search runs to exhaustion or the node limit.
    pub fn uncapped() -> Self {
        Self::with_cap(usize::MAX)
    }
}

/// Removal counts per deduction rule.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct RuleCounts {
    pub required_digit_exclusion: u64,
    pub forbidden_filter: u64,
    pub sum_cover: u64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct SolveStats {
    /// Search nodes expanded, the root included.
    pub nodes: u64,
    /// Nodes at which the search had to branch.
    pub branch_nodes: u64,
    /// Full sweeps of the rule set across all propagations.
    pub propagation_passes: u64,
    /// Candidates removed, by rule.
    pub deductions: RuleCounts,
}

impl fmt::Display for SolveStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "nodes={} branch_nodes={} passes={} r1={} r2={} r3={}",
            self.nodes,
            self.branch_nodes,
            self.propagation_passes,
            self.deductions.required_digit_exclusion,
            self.deductions.forbidden_filter,
            self.deductions.sum_cover
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolveStatus {
    /// The whole search space was explored.
    Exhausted,
    /// `solution_cap` solutions were found; more may exist.
    CapReached,
    /// The node budget ran out; the count is a lower bound.
    NodeLimit,
    /// The starting table already had a cell without candidates.
    Contradiction,
}

impl SolveStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SolveStatus::Exhausted => "exhausted",
            SolveStatus::CapReached => "cap_reached",
            SolveStatus::NodeLimit => "node_limit",
            SolveStatus::Contradiction => "contradiction",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    /// Solutions in discovery order.
    pub solutions: Vec<AssignmentGrid>,
    pub status: SolveStatus,
    pub stats: SolveStats,
}

impl SolveResult {
    /// Number of solutions found, never more than the configured cap.
    pub fn count(&self) -> usize {
        self.solutions.len()
    }
}

/// Per-cell candidate lists plus per-cell banned digits.
///
/// Candidates live in one flat arena: cell `i` owns the slots
/// `start[i]..start[i] + len[i]`, kept in lexicographic order. Filtering
/// compacts within a cell's slice, so cloning a table (once per search
/// branch) costs a few flat copies.
#[derive(Clone, PartialEq, Eq)]
pub struct CandidateTable {
    dims: GridDims,
    clues: Arc<[u8]>,
    adjacency: Arc<Adjacency>,
    start: Arc<[usize]>,
    slots: Vec<DigitSet>,
    len: Vec<u16>,
    forbidden: Vec<DigitSet>,
}

impl fmt::Debug for CandidateTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for cell in self.dims.cells() {
            m.entry(&cell, &self.candidates(cell));
        }
        m.finish()
    }
}

/// What a single rule application changed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Change {
    pub cells: Vec<usize>,
    pub removed: u64,
}

impl CandidateTable {
    /// Every distinct-digit partition of each clue; nothing forbidden yet.
    pub fn initial(clues: &ClueGrid) -> Self {
        let dims = clues.dims();
        let mut start = Vec::with_capacity(dims.len() + 1);
        let mut slots = Vec::new();
        let mut len = Vec::with_capacity(dims.len());
        for &clue in clues.as_slice() {
            start.push(slots.len());
            let parts = DigitSet::partitions_of(clue);
            len.push(parts.len() as u16);
            slots.extend(parts);
        }
        start.push(slots.len());
        Self {
            dims,
            clues: clues.as_slice().into(),
            adjacency: Arc::new(Adjacency::new(dims)),
            start: start.into(),
            slots,
            len,
            forbidden: vec![DigitSet::EMPTY; dims.len()],
        }
    }

    pub fn dims(&self) -> GridDims {
        self.dims
    }

    pub fn clue(&self, cell: CellIndex) -> u8 {
        self.clues[self.dims.index(cell)]
    }

    pub fn candidates(&self, cell: CellIndex) -> &[DigitSet] {
        self.cands(self.dims.index(cell))
    }

    pub fn forbidden(&self, cell: CellIndex) -> DigitSet {
        self.forbidden[self.dims.index(cell)]
    }

    /// True when some cell has no candidates left.
    pub fn is_contradiction(&self) -> bool {
        self.len.contains(&0)
    }

    /// True when every cell has exactly one candidate.
    pub fn is_solved(&self) -> bool {
        self.len.iter().all(|&l| l == 1)
    }

    /// The assignment of single-candidate cells; other cells are left empty.
    pub fn fixed_assignment(&self) -> AssignmentGrid {
        let cells = (0..self.dims.len())
            .map(|i| {
                if self.len[i] == 1 {
                    self.slots[self.start[i]]
                } else {
                    DigitSet::EMPTY
                }
            })
            .collect();
        AssignmentGrid::new(self.dims, cells).expect("shape matches")
    }

    /// Digits common to every candidate of the cell.
    pub fn required_digits(&self, cell: CellIndex) -> DigitSet {
        required(self.cands(self.dims.index(cell)))
    }

    /// Keeps only candidates containing every digit of `digits`.
    pub fn restrict_to_supersets(&mut self, cell: CellIndex, digits: DigitSet) -> u64 {
        let i = self.dims.index(cell);
        self.retain(i, |c| digits.is_subset(c))
    }

    /// Fixes a cell to one digit set; the set need not be a current candidate.
    pub fn assign(&mut self, cell: CellIndex, digits: DigitSet) {
        let i = self.dims.index(cell);
        let keep = self.cands(i).contains(&digits);
        self.len[i] = u16::from(keep);
        if keep {
            self.slots[self.start[i]] = digits;
        }
    }

    /// Runs R1 -> R2 -> R3 sweeps until nothing changes or a contradiction appears.
    pub fn propagate(&mut self, enable_sum_cover: bool) -> PropagationReport {
        let mut report = PropagationReport::default();
        self.propagate_into(enable_sum_cover, &mut report.passes, &mut report.deductions);
        report
    }

    fn propagate_into(&mut self, sum_cover: bool, passes: &mut u64, counts: &mut RuleCounts) {
        loop {
            if self.is_contradiction() {
                return;
            }
            *passes += 1;
            let mut changed = false;
            for i in 0..self.dims.len() {
                if let Some(ch) = self.apply_exclusion(i) {
                    counts.required_digit_exclusion += ch.removed;
                    changed = true;
                }
            }
            for i in 0..self.dims.len() {
                if let Some(ch) = self.apply_forbidden_filter(i) {
                    counts.forbidden_filter += ch.removed;
                    changed = true;
                }
            }
            if sum_cover {
                let adjacency = Arc::clone(&self.adjacency);
                for (a, b) in adjacency.pairs() {
                    if let Some(ch) = self.apply_sum_cover(a, b) {
                        counts.sum_cover += ch.removed;
                        changed = true;
                    }
                }
            }
            if !changed {
                return;
            }
        }
    }

    fn cands(&self, i: usize) -> &[DigitSet] {
        &self.slots[self.start[i]..self.start[i] + self.len[i] as usize]
    }

    fn retain(&mut self, i: usize, mut keep: impl FnMut(DigitSet) -> bool) -> u64 {
        let base = self.start[i];
        let old = self.len[i] as usize;
        let mut w = 0;
        for r in 0..old {
            let c = self.slots[base + r];
            if keep(c) {
                self.slots[base + w] = c;
                w += 1;
            }
        }
        self.len[i] = w as u16;
        (old - w) as u64
    }

    /// R1 from source cell `i`. Reports a change if any neighbour gained a
    /// forbidden digit, whether or not candidates were removed.
    pub(crate) fn apply_exclusion(&mut self, i: usize) -> Option<Change> {
        if self.len[i] == 0 {
            return None;
        }
        let req = required(self.cands(i));
        if req.is_empty() {
            return None;
        }
        let adjacency = Arc::clone(&self.adjacency);
        let mut change = Change {
            cells: Vec::new(),
            removed: 0,
        };
        for &n in adjacency.of(i) {
            let fresh = req.difference(self.forbidden[n]);
            if fresh.is_empty() {
                continue;
            }
            self.forbidden[n] = self.forbidden[n].union(fresh);
            change.removed += self.retain(n, |c| c.is_disjoint(fresh));
            change.cells.push(n);
        }
        (!change.cells.is_empty()).then_some(change)
    }

    /// R2 on cell `i`.
    pub(crate) fn apply_forbidden_filter(&mut self, i: usize) -> Option<Change> {
        let banned = self.forbidden[i];
        let removed = self.retain(i, |c| c.is_disjoint(banned));
        (removed > 0).then(|| Change {
            cells: vec![i],
            removed,
        })
    }

    /// R3 on the adjacent pair `(a, b)`.
    pub(crate) fn apply_sum_cover(&mut self, a: usize, b: usize) -> Option<Change> {
        let union_a = self.cands(a).iter().fold(DigitSet::EMPTY, |u, &c| u.union(c));
        let union_b = self.cands(b).iter().fold(DigitSet::EMPTY, |u, &c| u.union(c));
        let cover = union_a.union(union_b);
        if self.clues[a] as u16 + self.clues[b] as u16 != cover.sum() as u16 {
            return None;
        }
        let keep_a: Vec<bool> = self
            .cands(a)
            .iter()
            .map(|&x| self.cands(b).contains(&cover.difference(x)))
            .collect();
        let keep_b: Vec<bool> = self
            .cands(b)
            .iter()
            .map(|&y| self.cands(a).contains(&cover.difference(y)))
            .collect();
        let mut change = Change {
            cells: Vec::new(),
            removed: 0,
        };
        for (cell, keep) in [(a, keep_a), (b, keep_b)] {
            let mut k = keep.into_iter();
            let removed = self.retain(cell, |_| k.next().unwrap_or(false));
            if removed > 0 {
                change.removed += removed;
                change.cells.push(cell);
            }
        }
        (!change.cells.is_empty()).then_some(change)
    }

    /// Unsolved cell with the fewest candidates, lowest index on ties.
    fn mrv_cell(&self) -> Option<usize> {
        let mut best: Option<(u16, usize)> = None;
        for (i, &l) in self.len.iter().enumerate() {
            if l > 1 && best.is_none_or(|(bl, _)| l < bl) {
                best = Some((l, i));
                if l == 2 {
                    break;
                }
            }
        }
        best.map(|(_, i)| i)
    }
}

fn required(cands: &[DigitSet]) -> DigitSet {
    if cands.is_empty() {
        return DigitSet::EMPTY;
    }
    cands.iter().fold(DigitSet::ALL, |acc, &c| acc.intersection(c))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PropagationReport {
    pub passes: u64,
    pub deductions: RuleCounts,
}

/// The starting table for a clue grid.
pub fn initial_candidates(clues: &ClueGrid) -> CandidateTable {
    CandidateTable::initial(clues)
}

/// Propagates a copy of `table` to its fixpoint.
pub fn propagate(table: &CandidateTable, enable_sum_cover: bool) -> CandidateTable {
    let mut t = table.clone();
    t.propagate(enable_sum_cover);
    t
}

/// Solves a clue grid.
pub fn solve(clues: &ClueGrid, config: &SolverConfig) -> Result<SolveResult, SolveError> {
    solve_table(CandidateTable::initial(clues), config)
}

/// Solves starting from an arbitrary table, e.g. one narrowed by player marks.
pub fn solve_table(table: CandidateTable, config: &SolverConfig) -> Result<SolveResult, SolveError> {
    if config.solution_cap == 0 {
        return Err(SolveError::ZeroCap);
    }
    let mut search = Search {
        config,
        stats: SolveStats::default(),
        solutions: Vec::new(),
    };
    if table.is_contradiction() {
        return Ok(SolveResult {
            solutions: Vec::new(),
            status: SolveStatus::Contradiction,
            stats: search.stats,
        });
    }
    let status = match search.run(table) {
        Flow::Continue => SolveStatus::Exhausted,
        Flow::Stop(s) => s,
    };
    Ok(SolveResult {
        solutions: search.solutions,
        status,
        stats: search.stats,
    })
}

/// Solution count up to `cap`.
pub fn count_solutions(clues: &ClueGrid, cap: usize) -> Result<usize, SolveError> {
    Ok(solve(clues, &SolverConfig::with_cap(cap))?.count())
}

enum Flow {
    Continue,
    Stop(SolveStatus),
}

struct Search<'a> {
    config: &'a SolverConfig,
    stats: SolveStats,
    solutions: Vec<AssignmentGrid>,
}

impl Search<'_> {
    fn run(&mut self, mut table: CandidateTable) -> Flow {
        if self.stats.nodes >= self.config.node_limit {
            return Flow::Stop(SolveStatus::NodeLimit);
        }
        self.stats.nodes += 1;
        table.propagate_into(
            self.config.enable_sum_cover,
            &mut self.stats.propagation_passes,
            &mut self.stats.deductions,
        );
        if table.is_contradiction() {
            return Flow::Continue;
        }
        let Some(cell) = table.mrv_cell() else {
            self.solutions.push(table.fixed_assignment());
            if self.solutions.len() >= self.config.solution_cap {
                return Flow::Stop(SolveStatus::CapReached);
            }
            return Flow::Continue;
        };
        self.stats.branch_nodes += 1;
        let choices = table.cands(cell).to_vec();
        let last = choices.len() - 1;
        let mut table = Some(table);
        for (k, choice) in choices.into_iter().enumerate() {
            let mut child = if k == last {
                table.take().expect("present")
            } else {
                table.clone().expect("present")
            };
            child.len[cell] = 1;
            child.slots[child.start[cell]] = choice;
            if let Flow::Stop(s) = self.run(child) {
                return Flow::Stop(s);
            }
        }
        Flow::Continue
    }
}

/// Every valid complete assignment, by plain enumeration over the initial
/// candidates with a rule check; no propagation. Results are sorted
/// row-major lexicographically.
///
/// Partial assignments are rejected as soon as a newly placed cell overlaps
/// an already placed neighbour, which visits the same set as a full
/// Cartesian walk with a final filter.
pub fn brute_force_solve(clues: &ClueGrid) -> Result<Vec<AssignmentGrid>, SolveError> {
    let dims = clues.dims();
    let options: Vec<Vec<DigitSet>> = clues.as_slice().iter().map(|&c| DigitSet::partitions_of(c)).collect();
    let size = options
        .iter()
        .try_fold(1u128, |acc, o| acc.checked_mul(o.len() as u128));
    match size {
        Some(s) if s <= BRUTE_FORCE_LIMIT => {}
        Some(s) => return Err(SolveError::SearchSpaceTooLarge { size: s }),
        None => return Err(SolveError::SearchSpaceTooLarge { size: u128::MAX }),
    }
    let earlier: Vec<Vec<usize>> = dims
        .cells()
        .map(|c| {
            crate::grid::neighbors_unchecked(dims, c)
                .filter(|&n| n < c)
                .map(|n| dims.index(n))
                .collect()
        })
        .collect();

    let mut out = Vec::new();
    let mut current = vec![DigitSet::EMPTY; dims.len()];
    fn walk(
        i: usize,
        options: &[Vec<DigitSet>],
        earlier: &[Vec<usize>],
        current: &mut Vec<DigitSet>,
        out: &mut Vec<Vec<DigitSet>>,
    ) {
        if i == options.len() {
            out.push(current.clone());
            return;
        }
        for &choice in &options[i] {
            if earlier[i].iter().all(|&n| current[n].is_disjoint(choice)) {
                current[i] = choice;
                walk(i + 1, options, earlier, current, out);
            }
        }
        current[i] = DigitSet::EMPTY;
    }
    let mut raw = Vec::new();
    walk(0, &options, &earlier, &mut current, &mut raw);
    for cells in raw {
        let grid = AssignmentGrid::new(dims, cells)?;
        if validate_assignment(clues, &grid, true)?.is_empty() {
            out.push(grid);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HintRule {
    OnlyCandidate,
    RequiredDigitExclusion,
    SumCover,
}

impl HintRule {
    pub fn as_str(self) -> &'static str {
        match self {
            HintRule::OnlyCandidate => "OnlyCandidate",
            HintRule::RequiredDigitExclusion => "RequiredDigitExclusion",
            HintRule::SumCover => "SumCover",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Hint {
    pub cell: CellIndex,
    /// The digit set the cell is forced to hold.
    pub forced: DigitSet,
    pub rule: HintRule,
    pub explanation: String,
}

impl Hint {
    /// The player's marks with this hint applied.
    pub fn apply(&self, partial: &AssignmentGrid) -> AssignmentGrid {
        let mut next = partial.clone();
        next.set(self.cell, self.forced);
        next
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HintError {
    #[error("the marks already break the rules: {}", join_violations(.0))]
    Violations(Vec<Violation>),
    #[error("the marks in {0} cannot be completed to its clue")]
    Unfillable(CellIndex),
    #[error("the marks lead to a contradiction at {0}")]
    Contradiction(CellIndex),
    #[error(transparent)]
    Grid(#[from] GridError),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Reason {
    Enumeration,
    Exclusion { from: usize, digits: DigitSet },
    Cover { partner: usize, digits: DigitSet },
}

/// The table implied by the clues and the player's marks: each cell keeps
/// only candidates that contain every digit already marked there.
pub fn table_for_marks(clues: &ClueGrid, partial: &AssignmentGrid) -> Result<CandidateTable, HintError> {
    if partial.dims() != clues.dims() {
        return Err(GridError::ShapeMismatch {
            expected: clues.dims().len(),
            got: partial.dims().len(),
        }
        .into());
    }
    let mut table = CandidateTable::initial(clues);
    for cell in clues.dims().cells() {
        let marks = partial.get(cell);
        if !marks.is_empty() {
            table.restrict_to_supersets(cell, marks);
            if table.candidates(cell).is_empty() {
                return Err(HintError::Unfillable(cell));
            }
        }
    }
    Ok(table)
}

/// The first forced deduction not already reflected in the player's marks.
///
/// Rules are applied one step at a time in the same order as propagation.
/// After each step every cell is checked, and the first one left with a
/// single candidate that differs from its marks becomes the hint. Returns
/// `None` once propagation stalls with nothing left to report.
pub fn hint(clues: &ClueGrid, partial: &AssignmentGrid, enable_sum_cover: bool) -> Result<Option<Hint>, HintError> {
    let violations = validate_assignment(clues, partial, false)?;
    if !violations.is_empty() {
        return Err(HintError::Violations(violations));
    }
    let mut table = table_for_marks(clues, partial)?;
    let dims = clues.dims();
    let mut reasons = vec![Reason::Enumeration; dims.len()];
    loop {
        for i in 0..dims.len() {
            if let Some(h) = unreflected(&table, partial, &reasons, i) {
                return Ok(Some(h));
            }
        }
        if !hint_step(&mut table, &mut reasons, enable_sum_cover) {
            return Ok(None);
        }
        if let Some(i) = (0..dims.len()).find(|&i| table.len[i] == 0) {
            return Err(HintError::Contradiction(dims.cell(i)));
        }
    }
}

fn hint_step(table: &mut CandidateTable, reasons: &mut [Reason], sum_cover: bool) -> bool {
    let n = table.dims.len();
    for i in 0..n {
        let req = required(table.cands(i));
        if let Some(ch) = table.apply_exclusion(i) {
            for c in ch.cells {
                reasons[c] = Reason::Exclusion { from: i, digits: req };
            }
            return true;
        }
    }
    for i in 0..n {
        if table.apply_forbidden_filter(i).is_some() {
            // Forbidden digits only come from R1; keep the exclusion reason.
            return true;
        }
    }
    if sum_cover {
        let adjacency = Arc::clone(&table.adjacency);
        for (a, b) in adjacency.pairs() {
            let before = table.clone();
            if let Some(ch) = table.apply_sum_cover(a, b) {
                let cover = [a, b]
                    .iter()
                    .flat_map(|&x| before.cands(x).iter().copied())
                    .fold(DigitSet::EMPTY, DigitSet::union);
                for c in ch.cells {
                    let partner = if c == a { b } else { a };
                    reasons[c] = Reason::Cover { partner, digits: cover };
                }
                return true;
            }
        }
    }
    false
}

fn unreflected(table: &CandidateTable, partial: &AssignmentGrid, reasons: &[Reason], i: usize) -> Option<Hint> {
    let dims = table.dims;
    let cell = dims.cell(i);
    let marks = partial.get(cell);
    let cands = table.cands(i);
    if cands.len() != 1 || cands[0] == marks {
        return None;
    }
    let forced = cands[0];
    let clue = table.clues[i];
    let what = format!("{cell} must be {}", plus_joined(forced));
    let (rule, explanation) = match reasons[i] {
        Reason::Enumeration => (
            HintRule::OnlyCandidate,
            format!(
                "the only partition of {clue} into distinct digits is {} itself, so {what}",
                plus_joined(forced)
            ),
        ),
        Reason::Exclusion { from, digits } => (
            HintRule::RequiredDigitExclusion,
            format!(
                "{} must use {}, so its neighbour {cell} cannot; of the partitions of {clue} that leaves only one option: {what}",
                dims.cell(from),
                digit_list(digits)
            ),
        ),
        Reason::Cover { partner, digits } => (
            HintRule::SumCover,
            format!(
                "{clue}+{} = {}, the sum of the digits still available to {cell} and {}, so all of them are used between these two cells: {what}",
                table.clues[partner],
                plus_joined(digits),
                dims.cell(partner)
            ),
        ),
    };
    Some(Hint {
        cell,
        forced,
        rule,
        explanation,
    })
}

fn plus_joined(s: DigitSet) -> String {
    s.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("+")
}

fn digit_list(s: DigitSet) -> String {
    s.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(", ")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(d: &[u8]) -> DigitSet {
        DigitSet::from_digits(d.iter().map(|&x| x as i64)).unwrap()
    }

    fn grid(rows: &[&[u8]]) -> ClueGrid {
        ClueGrid::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn corner() -> ClueGrid {
        grid(&[&[2, 3], &[22, 18]])
    }

    fn sorted(mut v: Vec<AssignmentGrid>) -> Vec<Vec<DigitSet>> {
        v.sort_by(|a, b| a.as_slice().cmp(b.as_slice()));
        v.into_iter().map(|a| a.as_slice().to_vec()).collect()
    }

    #[test]
    fn initial_candidates_follow_partitions() {
        let t = initial_candidates(&grid(&[&[2, 3, 45]]));
        assert_eq!(t.candidates(CellIndex::new(0, 0)), &[set(&[2])]);
        assert_eq!(t.candidates(CellIndex::new(0, 1)), &[set(&[1, 2]), set(&[3])]);
        assert_eq!(t.candidates(CellIndex::new(0, 2)), &[DigitSet::ALL]);
        assert!(t.dims().cells().all(|c| t.forbidden(c).is_empty()));
    }

    #[test]
    fn corner_propagation_fixes_two_and_three() {
        let t = propagate(&initial_candidates(&corner()), true);
        assert_eq!(t.candidates(CellIndex::new(0, 0)), &[set(&[2])]);
        assert_eq!(t.candidates(CellIndex::new(0, 1)), &[set(&[3])]);
        let union = [CellIndex::new(1, 0), CellIndex::new(1, 1)]
            .iter()
            .flat_map(|&c| t.candidates(c).iter().copied())
            .fold(DigitSet::EMPTY, DigitSet::union);
        assert_eq!(union, set(&[1, 4, 5, 6, 7, 8, 9]));
        for c in [CellIndex::new(1, 0), CellIndex::new(1, 1)] {
            assert!(t.candidates(c).iter().all(|s| s.is_disjoint(set(&[2, 3]))));
        }
    }

    #[test]
    fn propagation_is_idempotent() {
        let once = propagate(&initial_candidates(&corner()), true);
        assert_eq!(propagate(&once, true), once);
    }

    #[test]
    fn sum_cover_prunes_unpaired_candidates() {
        // 10 + 35 = 45 = sum of every digit. Once the 35-cell is narrowed to
        // sets containing 9, a 10-set may only survive if it leaves 9 over.
        let mut t = initial_candidates(&grid(&[&[10, 35]]));
        t.restrict_to_supersets(CellIndex::new(0, 1), set(&[9]));
        let change = t.apply_sum_cover(0, 1).unwrap();
        assert_eq!(change.cells, vec![0]);
        assert!(t.candidates(CellIndex::new(0, 0)).iter().all(|c| !c.contains(9)));
        assert!(!t.candidates(CellIndex::new(0, 0)).is_empty());
        // Clues that do not add up to the available digits leave R3 idle.
        let mut u = initial_candidates(&grid(&[&[10, 20]]));
        assert_eq!(u.apply_sum_cover(0, 1), None);
    }

    #[test]
    fn sum_cover_toggle_keeps_solution_set() {
        let clues = grid(&[&[9, 18, 18], &[4, 1, 12]]);
        let with = solve(&clues, &SolverConfig::uncapped()).unwrap();
        let without = solve(
            &clues,
            &SolverConfig {
                enable_sum_cover: false,
                ..SolverConfig::uncapped()
            },
        )
        .unwrap();
        assert_eq!(sorted(with.solutions.clone()), sorted(without.solutions));
        assert_eq!(sorted(with.solutions), sorted(brute_force_solve(&clues).unwrap()));
    }

    #[test]
    fn corner_has_six_solutions() {
        let r = solve(&corner(), &SolverConfig::with_cap(10)).unwrap();
        assert_eq!(r.count(), 6);
        assert_eq!(r.status, SolveStatus::Exhausted);
        let brute = brute_force_solve(&corner()).unwrap();
        assert_eq!(brute.len(), 6);
        assert_eq!(sorted(r.solutions.clone()), sorted(brute));
        for s in &r.solutions {
            assert!(validate_assignment(&corner(), s, true).unwrap().is_empty());
        }
    }

    #[test]
    fn single_cell_counts() {
        let r = solve(&grid(&[&[7]]), &SolverConfig::with_cap(10)).unwrap();
        assert_eq!(r.count(), 5);
        assert_eq!(count_solutions(&grid(&[&[45]]), 5).unwrap(), 1);
        assert_eq!(
            brute_force_solve(&grid(&[&[1]])).unwrap(),
            vec![AssignmentGrid::new(GridDims::new(1, 1).unwrap(), vec![set(&[1])]).unwrap()]
        );
    }

    #[test]
    fn cap_behaviour() {
        let r = solve(&corner(), &SolverConfig::with_cap(2)).unwrap();
        assert_eq!(r.count(), 2);
        assert_eq!(r.status, SolveStatus::CapReached);
        assert_eq!(count_solutions(&corner(), 2).unwrap(), 2);
        assert_eq!(solve(&corner(), &SolverConfig::with_cap(0)), Err(SolveError::ZeroCap));
    }

    #[test]
    fn clue_forty_is_unsolvable() {
        let r = solve(&grid(&[&[40, 1], &[2, 3]]), &SolverConfig::uncapped()).unwrap();
        assert_eq!(r.count(), 0);
        assert_eq!(r.status, SolveStatus::Exhausted);
    }

    #[test]
    fn node_limit_is_reported() {
        let clues = grid(&[&[10, 10, 10], &[10, 10, 10]]);
        let config = SolverConfig {
            solution_cap: usize::MAX,
            node_limit: 3,
            enable_sum_cover: true,
        };
        let r = solve(&clues, &config).unwrap();
        assert_eq!(r.status, SolveStatus::NodeLimit);
        assert_eq!(r.stats.nodes, 3);
    }

    #[test]
    fn contradiction_status_for_empty_table() {
        let mut t = initial_candidates(&grid(&[&[3, 4]]));
        t.restrict_to_supersets(CellIndex::new(0, 0), set(&[9]));
        let r = solve_table(t, &SolverConfig::default()).unwrap();
        assert_eq!(r.status, SolveStatus::Contradiction);
        assert_eq!(r.count(), 0);
    }

    #[test]
    fn solve_is_deterministic() {
        let clues = grid(&[&[6, 10, 7], &[12, 3, 9]]);
        let a = solve(&clues, &SolverConfig::uncapped()).unwrap();
        let b = solve(&clues, &SolverConfig::uncapped()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn brute_force_guard() {
        let clues = ClueGrid::new(GridDims::new(3, 3).unwrap(), vec![20; 9]).unwrap();
        assert!(matches!(
            brute_force_solve(&clues),
            Err(SolveError::SearchSpaceTooLarge { .. })
        ));
    }

    #[test]
    fn hint_on_empty_corner() {
        let d = corner().dims();
        let h = hint(&corner(), &AssignmentGrid::empty(d), true).unwrap().unwrap();
        assert_eq!(h.cell, CellIndex::new(0, 0));
        assert_eq!(h.forced, set(&[2]));
        assert_eq!(h.rule, HintRule::OnlyCandidate);
        assert!(h.explanation.contains("only partition of 2"), "{}", h.explanation);
    }

    #[test]
    fn hint_after_placing_two() {
        let mut p = AssignmentGrid::empty(corner().dims());
        p.set(CellIndex::new(0, 0), set(&[2]));
        let h = hint(&corner(), &p, true).unwrap().unwrap();
        assert_eq!(h.cell, CellIndex::new(0, 1));
        assert_eq!(h.forced, set(&[3]));
        assert_eq!(h.rule, HintRule::RequiredDigitExclusion);
    }

    #[test]
    fn hint_none_when_solved() {
        let s = brute_force_solve(&corner()).unwrap().remove(0);
        assert_eq!(hint(&corner(), &s, true).unwrap(), None);
    }

    #[test]
    fn hint_rejects_broken_marks() {
        let mut p = AssignmentGrid::empty(corner().dims());
        p.set(CellIndex::new(0, 0), set(&[2]));
        p.set(CellIndex::new(0, 1), set(&[2]));
        assert!(matches!(hint(&corner(), &p, true), Err(HintError::Violations(_))));
        let mut q = AssignmentGrid::empty(corner().dims());
        q.set(CellIndex::new(0, 1), set(&[2]));
        assert!(matches!(hint(&corner(), &q, true), Err(HintError::Violations(_))));
        q.set(CellIndex::new(0, 1), set(&[4]));
        assert_eq!(
            table_for_marks(&corner(), &q).unwrap_err(),
            HintError::Unfillable(CellIndex::new(0, 1))
        );
    }

    #[test]
    fn following_hints_keeps_solution_set() {
        let clues = corner();
        let reference = sorted(brute_force_solve(&clues).unwrap());
        let mut p = AssignmentGrid::empty(clues.dims());
        while let Some(h) = hint(&clues, &p, true).unwrap() {
            p = h.apply(&p);
            let t = table_for_marks(&clues, &p).unwrap();
            let r = solve_table(t, &SolverConfig::uncapped()).unwrap();
            assert_eq!(sorted(r.solutions), reference);
        }
        // Stalls once only branching remains.
        assert_eq!(p.get(CellIndex::new(0, 1)), set(&[3]));
        assert!(p.get(CellIndex::new(1, 0)).is_empty());
    }
}
