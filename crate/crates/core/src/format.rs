//! JSON interchange: puzzle documents, player state, and the wire forms of
//! violations and hints.
//!
//! Canonical puzzle documents use this exact layout (two-space indent, one
//! matrix row per line, keys in the order shown, trailing newline):
//!
//! ```text
//! {
//!   "version": 1,
//!   "rows": 2,
//!   "cols": 2,
//!   "clues": [
//!     [2, 3],
//!     [22, 18]
//!   ],
//!   "solution": [
//!     [[2], [3]],
//!     [[1, 5, 7, 9], [4, 6, 8]]
//!   ],
//!   "meta": {
//!     "seed": 42,
//!     "difficulty": "medium",
//!     "id": "0123456789abcdef"
//!   }
//! }
//! ```
//!
//! `solution` and `meta` are optional, as is every `meta` field.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::generator::{Difficulty, Puzzle};
use crate::grid::{AssignmentGrid, CellIndex, ClueGrid, DigitSet, GridDims, GridError, Violation, MAX_CLUE};
use crate::solver::Hint;

pub const FORMAT_VERSION: i64 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("unsupported version {0}, expected {FORMAT_VERSION}")]
    Version(i64),
    #[error("bad dimensions {rows}x{cols}")]
    Dims { rows: i64, cols: i64 },
    #[error("{what} has {got} rows, expected {expected}")]
    RowCount {
        what: &'static str,
        got: usize,
        expected: usize,
    },
    #[error("{what} row {row} has {got} entries, expected {expected}")]
    RowLength {
        what: &'static str,
        row: usize,
        got: usize,
        expected: usize,
    },
    #[error("clue out of range at ({row},{col})")]
    ClueOutOfRange { row: usize, col: usize },
    #[error("digit out of range at ({row},{col})")]
    DigitOutOfRange { row: usize, col: usize },
    #[error("digits must be strictly increasing at ({row},{col})")]
    NotIncreasing { row: usize, col: usize },
    #[error("unknown difficulty '{0}'")]
    Difficulty(String),
}

impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> Self {
        FormatError::Json(e.to_string())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct PuzzleMeta {
    pub seed: Option<u64>,
    pub difficulty: Option<Difficulty>,
    pub id: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PuzzleDocument {
    pub clues: ClueGrid,
    pub solution: Option<AssignmentGrid>,
    pub meta: Option<PuzzleMeta>,
}

impl PuzzleDocument {
    pub fn dims(&self) -> GridDims {
        self.clues.dims()
    }

    pub fn from_puzzle(p: &Puzzle) -> Self {
        Self {
            clues: p.clues.clone(),
            solution: Some(p.solution.clone()),
            meta: Some(PuzzleMeta {
                seed: Some(p.seed),
                difficulty: Some(p.difficulty),
                id: Some(p.id.clone()),
            }),
        }
    }

    /// The same document with the solution removed.
    pub fn without_solution(&self) -> Self {
        Self {
            solution: None,
            ..self.clone()
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    version: i64,
    rows: i64,
    cols: i64,
    clues: Vec<Vec<i64>>,
    #[serde(default)]
    solution: Option<Vec<Vec<Vec<i64>>>>,
    #[serde(default)]
    meta: Option<RawMeta>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMeta {
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default)]
    difficulty: Option<String>,
    #[serde(default)]
    id: Option<String>,
}

/// Strict parse of a puzzle document; every invariant is checked here.
pub fn parse_puzzle(text: &str) -> Result<PuzzleDocument, FormatError> {
    let raw: RawDocument = serde_json::from_str(text)?;
    from_raw(raw)
}

pub(crate) fn parse_puzzle_value(value: Value) -> Result<PuzzleDocument, FormatError> {
    let raw: RawDocument = serde_json::from_value(value)?;
    from_raw(raw)
}

fn from_raw(raw: RawDocument) -> Result<PuzzleDocument, FormatError> {
    if raw.version != FORMAT_VERSION {
        return Err(FormatError::Version(raw.version));
    }
    let bad_dims = FormatError::Dims {
        rows: raw.rows,
        cols: raw.cols,
    };
    let (Ok(rows), Ok(cols)) = (usize::try_from(raw.rows), usize::try_from(raw.cols)) else {
        return Err(bad_dims);
    };
    let dims = GridDims::new(rows, cols).map_err(|_| bad_dims)?;
    check_shape("clues", &raw.clues, dims)?;
    let mut flat = Vec::with_capacity(dims.len());
    for (r, row) in raw.clues.iter().enumerate() {
        for (c, &v) in row.iter().enumerate() {
            if !(1..=i64::from(MAX_CLUE)).contains(&v) {
                return Err(FormatError::ClueOutOfRange { row: r, col: c });
            }
            flat.push(v as u8);
        }
    }
    let clues = ClueGrid::new(dims, flat).expect("validated above");
    let solution = raw.solution.map(|s| digit_matrix("solution", &s, dims)).transpose()?;
    let meta = raw
        .meta
        .map(|m| -> Result<PuzzleMeta, FormatError> {
            let difficulty = m
                .difficulty
                .map(|d| d.parse::<Difficulty>().map_err(|_| FormatError::Difficulty(d)))
                .transpose()?;
            Ok(PuzzleMeta {
                seed: m.seed,
                difficulty,
                id: m.id,
            })
        })
        .transpose()?;
    Ok(PuzzleDocument { clues, solution, meta })
}

fn check_shape<T>(what: &'static str, m: &[Vec<T>], dims: GridDims) -> Result<(), FormatError> {
    if m.len() != dims.rows() {
        return Err(FormatError::RowCount {
            what,
            got: m.len(),
            expected: dims.rows(),
        });
    }
    for (r, row) in m.iter().enumerate() {
        if row.len() != dims.cols() {
            return Err(FormatError::RowLength {
                what,
                row: r,
                got: row.len(),
                expected: dims.cols(),
            });
        }
    }
    Ok(())
}

/// A row-major matrix of strictly increasing digit arrays.
pub(crate) fn digit_matrix(
    what: &'static str,
    m: &[Vec<Vec<i64>>],
    dims: GridDims,
) -> Result<AssignmentGrid, FormatError> {
    check_shape(what, m, dims)?;
    let mut cells = Vec::with_capacity(dims.len());
    for (r, row) in m.iter().enumerate() {
        for (c, digits) in row.iter().enumerate() {
            if digits.iter().any(|d| !(1..=9).contains(d)) {
                return Err(FormatError::DigitOutOfRange { row: r, col: c });
            }
            if digits.windows(2).any(|w| w[0] >= w[1]) {
                return Err(FormatError::NotIncreasing { row: r, col: c });
            }
            cells.push(DigitSet::from_digits(digits.iter().copied()).expect("validated above"));
        }
    }
    Ok(AssignmentGrid::new(dims, cells).expect("shape checked"))
}

fn join<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

/// Canonical serialization; see the module docs for the layout.
pub fn serialize_puzzle(doc: &PuzzleDocument) -> String {
    let dims = doc.dims();
    let mut out = String::new();
    out.push_str("{\n");
    let _ = writeln!(out, "  \"version\": {FORMAT_VERSION},");
    let _ = writeln!(out, "  \"rows\": {},", dims.rows());
    let _ = writeln!(out, "  \"cols\": {},", dims.cols());
    out.push_str("  \"clues\": [\n");
    let rows = doc.clues.to_rows();
    for (i, row) in rows.iter().enumerate() {
        let sep = if i + 1 < rows.len() { "," } else { "" };
        let _ = writeln!(out, "    [{}]{sep}", join(row));
    }
    out.push_str("  ]");
    if let Some(solution) = &doc.solution {
        out.push_str(",\n  \"solution\": [\n");
        let rows = solution.to_rows();
        for (i, row) in rows.iter().enumerate() {
            let sep = if i + 1 < rows.len() { "," } else { "" };
            let cells = row.iter().map(|cell| format!("[{}]", join(cell)));
            let _ = writeln!(out, "    [{}]{sep}", join(cells));
        }
        out.push_str("  ]");
    }
    if let Some(meta) = &doc.meta {
        let mut fields = Vec::new();
        if let Some(seed) = meta.seed {
            fields.push(format!("\"seed\": {seed}"));
        }
        if let Some(d) = meta.difficulty {
            fields.push(format!("\"difficulty\": \"{d}\""));
        }
        if let Some(id) = &meta.id {
            let quoted = serde_json::to_string(id).expect("strings always serialize");
            fields.push(format!("\"id\": {quoted}"));
        }
        if fields.is_empty() {
            out.push_str(",\n  \"meta\": {}");
        } else {
            out.push_str(",\n  \"meta\": {\n");
            out.push_str(
                &fields
                    .iter()
                    .map(|f| format!("    {f}"))
                    .collect::<Vec<_>>()
                    .join(",\n"),
            );
            out.push_str("\n  }");
        }
    }
    out.push_str("\n}\n");
    out
}

/// How a player state names its puzzle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum PuzzleRef {
    /// A generated puzzle, reproduced from its seed and checked against its id.
    Generated {
        id: String,
        rows: usize,
        cols: usize,
        seed: u64,
    },
    /// A full puzzle document carried in the request.
    Inline(Value),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPlayerState {
    puzzle: PuzzleRef,
    marks: Vec<Vec<Vec<i64>>>,
    #[serde(default)]
    elapsed: u64,
}

/// A player's progress: per-cell marks (possibly empty) against a puzzle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlayerState {
    pub puzzle: PuzzleRef,
    marks: Vec<Vec<Vec<i64>>>,
    pub elapsed: u64,
}

impl PlayerState {
    /// Marks as an assignment over `dims`, with shape and digit checks.
    pub fn marks(&self, dims: GridDims) -> Result<AssignmentGrid, FormatError> {
        digit_matrix("marks", &self.marks, dims)
    }
}

/// A bare marks matrix (row-major digit arrays) checked against `dims`.
pub fn marks_matrix(m: &[Vec<Vec<i64>>], dims: GridDims) -> Result<AssignmentGrid, FormatError> {
    digit_matrix("marks", m, dims)
}

pub fn parse_player_state(text: &str) -> Result<PlayerState, FormatError> {
    let raw: RawPlayerState = serde_json::from_str(text)?;
    for (r, row) in raw.marks.iter().enumerate() {
        for (c, digits) in row.iter().enumerate() {
            if digits.iter().any(|d| !(1..=9).contains(d)) {
                return Err(FormatError::DigitOutOfRange { row: r, col: c });
            }
            if digits.windows(2).any(|w| w[0] >= w[1]) {
                return Err(FormatError::NotIncreasing { row: r, col: c });
            }
        }
    }
    Ok(PlayerState {
        puzzle: raw.puzzle,
        marks: raw.marks,
        elapsed: raw.elapsed,
    })
}

/// Resolves an inline reference; generated references need a generator.
pub fn inline_document(r: &PuzzleRef) -> Option<Result<PuzzleDocument, FormatError>> {
    match r {
        PuzzleRef::Inline(v) => Some(parse_puzzle_value(v.clone())),
        PuzzleRef::Generated { .. } => None,
    }
}

fn cell_pair(c: CellIndex) -> [usize; 2] {
    [c.row, c.col]
}

/// Wire form of a [`Violation`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationWire {
    pub kind: String,
    pub cells: Vec<[usize; 2]>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub clue: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub sum: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub digits: Option<Vec<u8>>,
}

impl From<&Violation> for ViolationWire {
    fn from(v: &Violation) -> Self {
        let base = ViolationWire {
            kind: v.kind().as_str().to_owned(),
            cells: v.cells().into_iter().map(cell_pair).collect(),
            clue: None,
            sum: None,
            digits: None,
        };
        match *v {
            Violation::WrongSum { clue, sum, .. } => ViolationWire {
                clue: Some(clue),
                sum: Some(sum),
                ..base
            },
            Violation::NeighborOverlap { shared, .. } => ViolationWire {
                digits: Some(shared.to_vec()),
                ..base
            },
            Violation::EmptyCell { .. } => base,
        }
    }
}

pub fn violations_wire(v: &[Violation]) -> Vec<ViolationWire> {
    v.iter().map(ViolationWire::from).collect()
}

/// Wire form of a [`Hint`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HintWire {
    pub cell: [usize; 2],
    pub forced: Vec<u8>,
    pub rule: String,
    pub explanation: String,
}

impl From<&Hint> for HintWire {
    fn from(h: &Hint) -> Self {
        HintWire {
            cell: cell_pair(h.cell),
            forced: h.forced.to_vec(),
            rule: h.rule.as_str().to_owned(),
            explanation: h.explanation.clone(),
        }
    }
}

/// Maps grid-construction failures onto format errors with a locus.
impl From<GridError> for FormatError {
    fn from(e: GridError) -> Self {
        match e {
            GridError::ClueOutOfRange { row, col, .. } => FormatError::ClueOutOfRange { row, col },
            GridError::BadDims { rows, cols } => FormatError::Dims {
                rows: rows as i64,
                cols: cols as i64,
            },
            other => FormatError::Json(other.to_string()),
        }
    }
}
