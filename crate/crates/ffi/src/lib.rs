//! C ABI over `partiti-core`.
//!
//! Conventions:
//! - Every fallible call returns a [`PartitiStatus`]; results go through out-pointers,
//!   which are written only on `PARTITI_STATUS_OK` unless a function says otherwise.
//! - On failure, [`partiti_last_error_message`] describes the error. The message is
//!   thread-local and valid until the next call on the same thread.
//! - Handles from `partiti_puzzle_*` constructors are released with
//!   [`partiti_puzzle_free`]; strings returned through `char **` with
//!   [`partiti_string_free`].
//! - Panics never cross the boundary; they surface as `PARTITI_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use partiti_core::format::{marks_matrix, parse_puzzle, serialize_puzzle, HintWire, PuzzleDocument};
use partiti_core::generator::{generate_puzzle, Difficulty, DifficultyRequest, GenerateError, GeneratorConfig};
use partiti_core::grid::{validate_assignment, AssignmentGrid, GridDims};
use partiti_core::partition::{count_distinct_partitions, count_odd_partitions, count_partitions};
use partiti_core::solver::{hint, solve, SolveStatus, SolverConfig};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartitiStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidArgument = 4,
    OutOfRange = 5,
    NoSolution = 6,
    MultipleSolutions = 7,
    NodeLimit = 8,
    MissingSolution = 9,
    RuleViolation = 10,
    GenerationExhausted = 11,
    Panic = 99,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartitiDifficulty {
    Any = 0,
    Easy = 1,
    Medium = 2,
    Hard = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartitiPartitionKind {
    /// Unrestricted, p(n).
    All = 0,
    /// Distinct parts, q(n).
    Distinct = 1,
    /// Odd parts.
    Odd = 2,
}

/// Opaque puzzle handle: clues plus optional solution and metadata.
pub struct PartitiPuzzle {
    doc: PuzzleDocument,
}

struct Failure(PartitiStatus, String);

impl Failure {
    fn new(status: PartitiStatus, message: impl Into<String>) -> Self {
        Failure(status, message.into())
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: Option<String>) {
    let c = message.map(|m| CString::new(m.replace('\0', " ")).expect("nul bytes removed"));
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> PartitiStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error(None);
            PartitiStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_last_error(Some(message));
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_owned());
            set_last_error(Some(format!("internal panic: {message}")));
            PartitiStatus::Panic
        }
    }
}

fn non_null<'a, T>(p: *const T, name: &str) -> Result<&'a T, Failure> {
    // SAFETY: the caller guarantees non-null pointers are valid for reads.
    unsafe { p.as_ref() }.ok_or_else(|| Failure::new(PartitiStatus::NullArgument, format!("{name} is NULL")))
}

fn out_ptr<T>(p: *mut T, name: &str) -> Result<*mut T, Failure> {
    if p.is_null() {
        Err(Failure::new(PartitiStatus::NullArgument, format!("{name} is NULL")))
    } else {
        Ok(p)
    }
}

fn c_str<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::new(PartitiStatus::NullArgument, format!("{name} is NULL")));
    }
    // SAFETY: non-null and, per the contract, NUL-terminated.
    unsafe { CStr::from_ptr(p) }
        .to_str()
        .map_err(|e| Failure::new(PartitiStatus::InvalidUtf8, format!("{name}: {e}")))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).expect("JSON output has no NUL").into_raw()
}

/// Parses a puzzle document (strict JSON) into a new handle.
///
/// # Safety
/// `json` must be NUL-terminated; `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn partiti_puzzle_parse(json: *const c_char, out: *mut *mut PartitiPuzzle) -> PartitiStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let text = c_str(json, "json")?;
        let doc = parse_puzzle(text).map_err(|e| Failure::new(PartitiStatus::ParseError, e.to_string()))?;
        *out = Box::into_raw(Box::new(PartitiPuzzle { doc }));
        Ok(())
    })
}

/// Generates a puzzle with a unique solution; deterministic in all arguments.
///
/// # Safety
/// `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn partiti_puzzle_generate(
    rows: u32,
    cols: u32,
    seed: u64,
    difficulty: PartitiDifficulty,
    out: *mut *mut PartitiPuzzle,
) -> PartitiStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let dims = GridDims::new(rows as usize, cols as usize)
            .map_err(|e| Failure::new(PartitiStatus::InvalidArgument, e.to_string()))?;
        let request = match difficulty {
            PartitiDifficulty::Any => DifficultyRequest::Any,
            PartitiDifficulty::Easy => DifficultyRequest::Exactly(Difficulty::Easy),
            PartitiDifficulty::Medium => DifficultyRequest::Exactly(Difficulty::Medium),
            PartitiDifficulty::Hard => DifficultyRequest::Exactly(Difficulty::Hard),
        };
        let puzzle = generate_puzzle(&GeneratorConfig::new(dims, seed).with_difficulty(request)).map_err(|e| {
            let status = match e {
                GenerateError::Exhausted(_) => PartitiStatus::GenerationExhausted,
                _ => PartitiStatus::InvalidArgument,
            };
            Failure::new(status, e.to_string())
        })?;
        *out = Box::into_raw(Box::new(PartitiPuzzle {
            doc: PuzzleDocument::from_puzzle(&puzzle),
        }));
        Ok(())
    })
}

/// Releases a handle. NULL is ignored.
///
/// # Safety
/// `puzzle` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn partiti_puzzle_free(puzzle: *mut PartitiPuzzle) {
    if !puzzle.is_null() {
        drop(Box::from_raw(puzzle));
    }
}

/// Number of rows, or 0 for NULL.
///
/// # Safety
/// `puzzle` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn partiti_puzzle_rows(puzzle: *const PartitiPuzzle) -> u32 {
    puzzle.as_ref().map_or(0, |p| p.doc.dims().rows() as u32)
}

/// Number of columns, or 0 for NULL.
///
/// # Safety
/// `puzzle` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn partiti_puzzle_cols(puzzle: *const PartitiPuzzle) -> u32 {
    puzzle.as_ref().map_or(0, |p| p.doc.dims().cols() as u32)
}

/// Clue at `(row, col)`, or 0 when out of bounds or NULL.
///
/// # Safety
/// `puzzle` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn partiti_puzzle_clue(puzzle: *const PartitiPuzzle, row: u32, col: u32) -> u8 {
    let Some(p) = puzzle.as_ref() else { return 0 };
    let dims = p.doc.dims();
    let (row, col) = (row as usize, col as usize);
    if row < dims.rows() && col < dims.cols() {
        p.doc.clues.as_slice()[dims.index(partiti_core::CellIndex { row, col })]
    } else {
        0
    }
}

/// Whether the handle carries a solution.
///
/// # Safety
/// `puzzle` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn partiti_puzzle_has_solution(puzzle: *const PartitiPuzzle) -> bool {
    puzzle.as_ref().is_some_and(|p| p.doc.solution.is_some())
}

/// Canonical JSON. With `include_solution` false the solution is omitted.
///
/// # Safety
/// `puzzle` must be a live handle; `out` valid for a pointer write. Free the
/// result with [`partiti_string_free`].
#[no_mangle]
pub unsafe extern "C" fn partiti_puzzle_to_json(
    puzzle: *const PartitiPuzzle,
    include_solution: bool,
    out: *mut *mut c_char,
) -> PartitiStatus {
    guard(|| {
        let p = non_null(puzzle, "puzzle")?;
        let out = out_ptr(out, "out")?;
        let doc = if include_solution {
            p.doc.clone()
        } else {
            p.doc.without_solution()
        };
        *out = into_c_string(serialize_puzzle(&doc));
        Ok(())
    })
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn partiti_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Counts solutions of the clues, stopping at `cap`. `node_limit` 0 means
/// the library default. Hitting the node limit returns
/// `PARTITI_STATUS_NODE_LIMIT` and still writes the partial count.
///
/// # Safety
/// `puzzle` must be a live handle; `out_count` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn partiti_puzzle_count_solutions(
    puzzle: *const PartitiPuzzle,
    cap: u32,
    node_limit: u64,
    out_count: *mut u32,
) -> PartitiStatus {
    guard(|| {
        let p = non_null(puzzle, "puzzle")?;
        let out = out_ptr(out_count, "out_count")?;
        let mut config = SolverConfig::with_cap(cap as usize);
        if node_limit > 0 {
            config.node_limit = node_limit;
        }
        let result =
            solve(&p.doc.clues, &config).map_err(|e| Failure::new(PartitiStatus::InvalidArgument, e.to_string()))?;
        *out = result.count() as u32;
        if result.status == SolveStatus::NodeLimit {
            return Err(Failure::new(PartitiStatus::NodeLimit, "node limit reached"));
        }
        Ok(())
    })
}

/// Solves the clues and returns a new handle carrying the unique solution.
///
/// # Safety
/// `puzzle` must be a live handle; `out` valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn partiti_puzzle_solve(
    puzzle: *const PartitiPuzzle,
    out: *mut *mut PartitiPuzzle,
) -> PartitiStatus {
    guard(|| {
        let p = non_null(puzzle, "puzzle")?;
        let out = out_ptr(out, "out")?;
        let result = solve(&p.doc.clues, &SolverConfig::default())
            .map_err(|e| Failure::new(PartitiStatus::InvalidArgument, e.to_string()))?;
        match (result.count(), result.status) {
            (n, _) if n >= 2 => Err(Failure::new(PartitiStatus::MultipleSolutions, "more than one solution")),
            (_, SolveStatus::NodeLimit) => Err(Failure::new(PartitiStatus::NodeLimit, "node limit reached")),
            (0, _) => Err(Failure::new(PartitiStatus::NoSolution, "no solution")),
            _ => {
                let doc = PuzzleDocument {
                    solution: result.solutions.into_iter().next(),
                    ..p.doc.clone()
                };
                *out = Box::into_raw(Box::new(PartitiPuzzle { doc }));
                Ok(())
            }
        }
    })
}

/// Checks the handle's solution against its clues and writes the number of
/// rule violations (0 means valid).
///
/// # Safety
/// `puzzle` must be a live handle; `out_violations` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn partiti_puzzle_verify(
    puzzle: *const PartitiPuzzle,
    out_violations: *mut u32,
) -> PartitiStatus {
    guard(|| {
        let p = non_null(puzzle, "puzzle")?;
        let out = out_ptr(out_violations, "out_violations")?;
        let solution = p
            .doc
            .solution
            .as_ref()
            .ok_or_else(|| Failure::new(PartitiStatus::MissingSolution, "puzzle has no solution"))?;
        let v = validate_assignment(&p.doc.clues, solution, true)
            .map_err(|e| Failure::new(PartitiStatus::InvalidArgument, e.to_string()))?;
        *out = v.len() as u32;
        Ok(())
    })
}

/// Next deduction for `marks_json` (a row-major matrix of digit arrays; NULL
/// means all cells empty), as a JSON object, or the JSON literal `null` when
/// nothing more can be deduced.
///
/// # Safety
/// `puzzle` must be a live handle; `marks_json` NULL or NUL-terminated; `out`
/// valid for a pointer write. Free the result with [`partiti_string_free`].
#[no_mangle]
pub unsafe extern "C" fn partiti_puzzle_hint(
    puzzle: *const PartitiPuzzle,
    marks_json: *const c_char,
    out: *mut *mut c_char,
) -> PartitiStatus {
    guard(|| {
        let p = non_null(puzzle, "puzzle")?;
        let out = out_ptr(out, "out")?;
        let dims = p.doc.dims();
        let marks = if marks_json.is_null() {
            AssignmentGrid::empty(dims)
        } else {
            let text = c_str(marks_json, "marks_json")?;
            let raw: Vec<Vec<Vec<i64>>> =
                serde_json::from_str(text).map_err(|e| Failure::new(PartitiStatus::ParseError, e.to_string()))?;
            marks_matrix(&raw, dims).map_err(|e| Failure::new(PartitiStatus::ParseError, e.to_string()))?
        };
        let h =
            hint(&p.doc.clues, &marks, true).map_err(|e| Failure::new(PartitiStatus::RuleViolation, e.to_string()))?;
        let json = match h {
            Some(h) => serde_json::to_string(&HintWire::from(&h)).expect("hints serialize"),
            None => "null".to_owned(),
        };
        *out = into_c_string(json);
        Ok(())
    })
}

/// Partition count of `n` of the given kind.
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn partiti_count_partitions(n: u32, kind: PartitiPartitionKind, out: *mut u64) -> PartitiStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let count = match kind {
            PartitiPartitionKind::All => count_partitions(n),
            PartitiPartitionKind::Distinct => count_distinct_partitions(n),
            PartitiPartitionKind::Odd => count_odd_partitions(n),
        }
        .map_err(|e| Failure::new(PartitiStatus::OutOfRange, e.to_string()))?;
        *out = count.get();
        Ok(())
    })
}

/// Message for the last failed call on this thread, or NULL.
#[no_mangle]
pub extern "C" fn partiti_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn partiti_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
