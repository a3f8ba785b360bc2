//! Grids, digit sets, Moore adjacency and rule validation.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

/// Largest grid side accepted anywhere in the crate.
pub const MAX_SIDE: usize = 32;
/// Sum of all nine digits; the largest clue a lone cell can carry.
pub const MAX_CLUE: u8 = 45;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GridError {
    #[error("grid dimensions {rows}x{cols} outside 1..={MAX_SIDE}")]
    BadDims { rows: usize, cols: usize },
    #[error("cell ({row},{col}) outside a {rows}x{cols} grid")]
    OutOfBounds {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
    #[error("clue out of range at ({row},{col}): {value}")]
    ClueOutOfRange { row: usize, col: usize, value: i64 },
    #[error("digit {0} outside 1..=9")]
    BadDigit(i64),
    #[error("expected {expected} cells, got {got}")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("cell ({row},{col}) is empty")]
    EmptyCell { row: usize, col: usize },
}

const fn build_sums() -> [u8; 512] {
    let mut table = [0u8; 512];
    let mut mask = 0;
    while mask < 512 {
        let mut d = 0;
        let mut s = 0;
        while d < 9 {
            if mask & (1 << d) != 0 {
                s += d as u8 + 1;
            }
            d += 1;
        }
        table[mask] = s;
        mask += 1;
    }
    table
}

static MASK_SUMS: [u8; 512] = build_sums();

/// A subset of the digits 1..=9, stored as a 9-bit mask (bit `d-1` for `d`).
///
/// Ordering is lexicographic on the increasing digit sequence, so
/// `{1,9} < {2} < {2,3}`, not numeric on the mask.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct DigitSet(u16);

impl DigitSet {
    pub const EMPTY: DigitSet = DigitSet(0);
    pub const ALL: DigitSet = DigitSet(0x1ff);

    pub fn from_mask(mask: u16) -> Self {
        DigitSet(mask & 0x1ff)
    }

    pub fn from_digits<I>(digits: I) -> Result<Self, GridError>
    where
        I: IntoIterator,
        I::Item: Into<i64>,
    {
        let mut set = DigitSet::EMPTY;
        for d in digits {
            let d = d.into();
            if !(1..=9).contains(&d) {
                return Err(GridError::BadDigit(d));
            }
            set.0 |= 1 << (d - 1);
        }
        Ok(set)
    }

    pub fn single(digit: u8) -> Self {
        debug_assert!((1..=9).contains(&digit));
        DigitSet(1 << (digit - 1))
    }

    pub fn mask(self) -> u16 {
        self.0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn sum(self) -> u8 {
        MASK_SUMS[self.0 as usize]
    }

    pub fn contains(self, digit: u8) -> bool {
        (1..=9).contains(&digit) && self.0 & (1 << (digit - 1)) != 0
    }

    pub fn insert(&mut self, digit: u8) {
        debug_assert!((1..=9).contains(&digit));
        self.0 |= 1 << (digit - 1);
    }

    pub fn remove(&mut self, digit: u8) {
        if (1..=9).contains(&digit) {
            self.0 &= !(1 << (digit - 1));
        }
    }

    pub fn union(self, other: Self) -> Self {
        DigitSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        DigitSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        DigitSet(self.0 & !other.0)
    }

    pub fn complement(self) -> Self {
        DigitSet(!self.0 & 0x1ff)
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// Digits in increasing order.
    pub fn iter(self) -> impl Iterator<Item = u8> {
        (1..=9u8).filter(move |&d| self.0 & (1 << (d - 1)) != 0)
    }

    pub fn to_vec(self) -> Vec<u8> {
        self.iter().collect()
    }

    /// Every non-empty subset of 1..=9 with the given sum, in lexicographic order.
    pub fn partitions_of(sum: u8) -> Vec<DigitSet> {
        crate::partition::enumerate_bounded_distinct_partitions(sum as u32, 9)
            .into_iter()
            .filter(|p| !p.parts().is_empty())
            .map(|p| DigitSet::from_digits(p.parts().iter().map(|&d| d as i64)).expect("parts <= 9"))
            .collect()
    }
}

impl Ord for DigitSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for DigitSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for DigitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for DigitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, d) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{d}")?;
        }
        f.write_str("}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GridDims {
    rows: usize,
    cols: usize,
}

impl GridDims {
    pub fn new(rows: usize, cols: usize) -> Result<Self, GridError> {
        if !(1..=MAX_SIDE).contains(&rows) || !(1..=MAX_SIDE).contains(&cols) {
            return Err(GridError::BadDims { rows, cols });
        }
        Ok(Self { rows, cols })
    }

    pub fn rows(self) -> usize {
        self.rows
    }

    pub fn cols(self) -> usize {
        self.cols
    }

    pub fn len(self) -> usize {
        self.rows * self.cols
    }

    pub fn is_empty(self) -> bool {
        false
    }

    pub fn contains(self, cell: CellIndex) -> bool {
        cell.row < self.rows && cell.col < self.cols
    }

    pub fn index(self, cell: CellIndex) -> usize {
        cell.row * self.cols + cell.col
    }

    pub fn cell(self, index: usize) -> CellIndex {
        CellIndex::new(index / self.cols, index % self.cols)
    }

    /// All cells in row-major order.
    pub fn cells(self) -> impl Iterator<Item = CellIndex> {
        (0..self.len()).map(move |i| self.cell(i))
    }

    fn check(self, cell: CellIndex) -> Result<(), GridError> {
        if self.contains(cell) {
            Ok(())
        } else {
            Err(GridError::OutOfBounds {
                row: cell.row,
                col: cell.col,
                rows: self.rows,
                cols: self.cols,
            })
        }
    }
}

impl fmt::Display for GridDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.rows, self.cols)
    }
}

/// 0-based (row, col) position. Ordering is row-major.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellIndex {
    pub row: usize,
    pub col: usize,
}

impl CellIndex {
    pub const fn new(row: usize, col: usize) -> Self {
        Self { row, col }
    }
}

impl fmt::Display for CellIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

/// In-bounds cells at Chebyshev distance exactly 1, in row-major order.
pub fn neighbors(dims: GridDims, cell: CellIndex) -> Result<Vec<CellIndex>, GridError> {
    dims.check(cell)?;
    Ok(neighbors_unchecked(dims, cell).collect())
}

pub(crate) fn neighbors_unchecked(dims: GridDims, cell: CellIndex) -> impl Iterator<Item = CellIndex> {
    let rows = cell.row.saturating_sub(1)..=(cell.row + 1).min(dims.rows - 1);
    rows.flat_map(move |r| {
        let cols = cell.col.saturating_sub(1)..=(cell.col + 1).min(dims.cols - 1);
        cols.map(move |c| CellIndex::new(r, c))
    })
    .filter(move |&n| n != cell)
}

/// Precomputed neighbor lists by flat index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Adjacency {
    lists: Vec<Vec<usize>>,
}

impl Adjacency {
    pub fn new(dims: GridDims) -> Self {
        let lists = dims
            .cells()
            .map(|c| neighbors_unchecked(dims, c).map(|n| dims.index(n)).collect())
            .collect();
        Self { lists }
    }

    pub fn of(&self, index: usize) -> &[usize] {
        &self.lists[index]
    }

    /// Adjacent pairs `(a, b)` with `a < b`, ordered by `a` then `b`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.lists
            .iter()
            .enumerate()
            .flat_map(|(a, ns)| ns.iter().filter(move |&&b| b > a).map(move |&b| (a, b)))
    }
}

/// The puzzle statement: one clue in 1..=45 per cell, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClueGrid {
    dims: GridDims,
    clues: Vec<u8>,
}

impl ClueGrid {
    pub fn new(dims: GridDims, clues: Vec<u8>) -> Result<Self, GridError> {
        if clues.len() != dims.len() {
            return Err(GridError::ShapeMismatch {
                expected: dims.len(),
                got: clues.len(),
            });
        }
        for (i, &v) in clues.iter().enumerate() {
            if !(1..=MAX_CLUE).contains(&v) {
                let c = dims.cell(i);
                return Err(GridError::ClueOutOfRange {
                    row: c.row,
                    col: c.col,
                    value: v as i64,
                });
            }
        }
        Ok(Self { dims, clues })
    }

    /// Builds from nested rows; row count and width define the dimensions.
    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self, GridError> {
        let cols = rows.first().map_or(0, Vec::len);
        let dims = GridDims::new(rows.len(), cols)?;
        let mut flat = Vec::with_capacity(dims.len());
        for row in rows {
            if row.len() != cols {
                return Err(GridError::ShapeMismatch {
                    expected: cols,
                    got: row.len(),
                });
            }
            flat.extend_from_slice(row);
        }
        Self::new(dims, flat)
    }

    pub fn dims(&self) -> GridDims {
        self.dims
    }

    pub fn clue(&self, cell: CellIndex) -> u8 {
        self.clues[self.dims.index(cell)]
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.clues
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        self.clues.chunks(self.dims.cols).map(<[u8]>::to_vec).collect()
    }
}

/// One digit set per cell; empty sets mark unfilled cells.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AssignmentGrid {
    dims: GridDims,
    cells: Vec<DigitSet>,
}

impl AssignmentGrid {
    pub fn empty(dims: GridDims) -> Self {
        Self {
            dims,
            cells: vec![DigitSet::EMPTY; dims.len()],
        }
    }

    pub fn new(dims: GridDims, cells: Vec<DigitSet>) -> Result<Self, GridError> {
        if cells.len() != dims.len() {
            return Err(GridError::ShapeMismatch {
                expected: dims.len(),
                got: cells.len(),
            });
        }
        Ok(Self { dims, cells })
    }

    pub fn dims(&self) -> GridDims {
        self.dims
    }

    pub fn get(&self, cell: CellIndex) -> DigitSet {
        self.cells[self.dims.index(cell)]
    }

    pub fn set(&mut self, cell: CellIndex, digits: DigitSet) {
        let i = self.dims.index(cell);
        self.cells[i] = digits;
    }

    pub fn as_slice(&self) -> &[DigitSet] {
        &self.cells
    }

    pub fn is_complete(&self) -> bool {
        self.cells.iter().all(|s| !s.is_empty())
    }

    pub fn to_rows(&self) -> Vec<Vec<Vec<u8>>> {
        self.cells
            .chunks(self.dims.cols)
            .map(|row| row.iter().map(|s| s.to_vec()).collect())
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ViolationKind {
    WrongSum,
    NeighborOverlap,
    EmptyCell,
}

impl ViolationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ViolationKind::WrongSum => "WrongSum",
            ViolationKind::NeighborOverlap => "NeighborOverlap",
            ViolationKind::EmptyCell => "EmptyCell",
        }
    }
}

/// A single rule breach.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Violation {
    /// A non-empty cell whose digits do not sum to its clue.
    WrongSum { cell: CellIndex, clue: u8, sum: u8 },
    /// Two adjacent cells (`first < second`) sharing at least one digit.
    NeighborOverlap {
        first: CellIndex,
        second: CellIndex,
        shared: DigitSet,
    },
    /// An empty cell where a complete assignment was required.
    EmptyCell { cell: CellIndex },
}

impl Violation {
    pub fn kind(&self) -> ViolationKind {
        match self {
            Violation::WrongSum { .. } => ViolationKind::WrongSum,
            Violation::NeighborOverlap { .. } => ViolationKind::NeighborOverlap,
            Violation::EmptyCell { .. } => ViolationKind::EmptyCell,
        }
    }

    pub fn cells(&self) -> Vec<CellIndex> {
        match *self {
            Violation::WrongSum { cell, .. } | Violation::EmptyCell { cell } => vec![cell],
            Violation::NeighborOverlap { first, second, .. } => vec![first, second],
        }
    }

    fn sort_key(&self) -> (CellIndex, ViolationKind, Option<CellIndex>) {
        match *self {
            Violation::WrongSum { cell, .. } | Violation::EmptyCell { cell } => (cell, self.kind(), None),
            Violation::NeighborOverlap { first, second, .. } => (first, self.kind(), Some(second)),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::WrongSum { cell, clue, sum } => {
                write!(f, "WrongSum at {cell}: digits sum to {sum}, clue is {clue}")
            }
            Violation::NeighborOverlap { first, second, shared } => {
                write!(f, "NeighborOverlap between {first} and {second}: shared {shared}")
            }
            Violation::EmptyCell { cell } => write!(f, "EmptyCell at {cell}"),
        }
    }
}

/// Checks an assignment against the rules.
///
/// Empty cells are skipped for the sum check and only reported when
/// `require_complete` is set. Each overlapping adjacent pair appears once.
/// The result is sorted row-major by leading cell, then by kind.
pub fn validate_assignment(
    clues: &ClueGrid,
    assignment: &AssignmentGrid,
    require_complete: bool,
) -> Result<Vec<Violation>, GridError> {
    let dims = clues.dims();
    if assignment.dims() != dims {
        return Err(GridError::ShapeMismatch {
            expected: dims.len(),
            got: assignment.dims().len(),
        });
    }
    let mut out = Vec::new();
    for cell in dims.cells() {
        let digits = assignment.get(cell);
        if digits.is_empty() {
            if require_complete {
                out.push(Violation::EmptyCell { cell });
            }
        } else if digits.sum() != clues.clue(cell) {
            out.push(Violation::WrongSum {
                cell,
                clue: clues.clue(cell),
                sum: digits.sum(),
            });
        }
        for other in neighbors_unchecked(dims, cell).filter(|&n| n > cell) {
            let shared = digits.intersection(assignment.get(other));
            if !shared.is_empty() {
                out.push(Violation::NeighborOverlap {
                    first: cell,
                    second: other,
                    shared,
                });
            }
        }
    }
    out.sort_by_key(Violation::sort_key);
    Ok(out)
}

/// Upper bound on any clue of a solvable grid with these dimensions.
///
/// A lone cell can hold all nine digits (45). In a single row or column every
/// cell has a non-empty neighbour, costing at least one digit (44). Otherwise
/// every cell sits in a 2x2 block of mutually adjacent cells whose other three
/// need three distinct digits, at least 1+2+3, leaving 39.
pub fn max_clue_bound(dims: GridDims) -> u8 {
    match (dims.rows(), dims.cols()) {
        (1, 1) => 45,
        (1, _) | (_, 1) => 44,
        _ => 39,
    }
}

/// Largest clue that some complete valid assignment places at `cell`.
///
/// Found by search rather than by formula: for each candidate sum, from the
/// universal bound downwards, try every digit set with that sum at `cell` and
/// look for singleton digits on its neighbours that avoid the set and each
/// other. Cells further away always admit a digit, since each has at most
/// eight neighbours, so the neighbourhood decides feasibility.
///
/// On grids of at least 2x2 this is 39 for every cell, interior ones
/// included: the four diagonal neighbours of an interior cell are pairwise
/// non-adjacent and can share a digit.
pub fn max_feasible_clue(dims: GridDims, cell: CellIndex) -> Result<u8, GridError> {
    dims.check(cell)?;
    let ring: Vec<CellIndex> = neighbors_unchecked(dims, cell).collect();
    for target in (1..=max_clue_bound(dims)).rev() {
        for set in DigitSet::partitions_of(target) {
            let mut chosen = vec![0u8; ring.len()];
            if color_ring(&ring, 0, set.complement(), &mut chosen) {
                return Ok(target);
            }
        }
    }
    unreachable!("clue 1 is always feasible")
}

fn color_ring(ring: &[CellIndex], at: usize, allowed: DigitSet, chosen: &mut [u8]) -> bool {
    if at == ring.len() {
        return true;
    }
    for d in allowed.iter() {
        let clash = ring[..at].iter().zip(chosen.iter()).any(|(&other, &od)| {
            od == d && other.row.abs_diff(ring[at].row) <= 1 && other.col.abs_diff(ring[at].col) <= 1
        });
        if clash {
            continue;
        }
        chosen[at] = d;
        if color_ring(ring, at + 1, allowed, chosen) {
            return true;
        }
    }
    false
}
