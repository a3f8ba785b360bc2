//! Stateless HTTP API for the play UI.
//!
//! | Method | Path            | Body in      | Body out                               |
//! |--------|-----------------|--------------|----------------------------------------|
//! | GET    | `/api/puzzle`   | query string | canonical puzzle document, no solution |
//! | POST   | `/api/validate` | player state | violation list                         |
//! | POST   | `/api/hint`     | player state | hint object or `null`                  |
//! | POST   | `/api/check`    | player state | `{"solved": bool, "violations": [...]}`|
//!
//! `/api/puzzle` accepts `difficulty` (`any`, `easy`, `medium`, `hard`),
//! `seed`, `rows` and `cols`. Without a seed the server draws one below
//! 2^53 so it survives a round trip through JavaScript numbers.
//!
//! Generated puzzles are named in player state by `{id, rows, cols, seed}`.
//! The id hashes the requested difficulty too, so the server recovers the
//! request by matching the id and regenerates the puzzle; nothing is stored
//! beyond an in-memory cache that does not change any response.
//!
//! Errors are `{"code", "message", "locus"?}` with `code` one of
//! `bad_request`, `invalid_puzzle`, `invalid_state`, `unknown_puzzle`,
//! `rule_violation`, `generation_exhausted`, `not_found`, `internal`.

use std::collections::HashMap;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::{Arc, RwLock};

use axum::extract::{Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use serde::{Deserialize, Serialize};
use tower_http::services::ServeDir;

use crate::format::{
    inline_document, parse_player_state, serialize_puzzle, violations_wire, FormatError, HintWire, PuzzleDocument,
    PuzzleRef, ViolationWire,
};
use crate::generator::{generate_puzzle, puzzle_id, DifficultyRequest, GenerateError, GeneratorConfig, Puzzle};
use crate::grid::{validate_assignment, AssignmentGrid, ClueGrid, GridDims};
use crate::solver::{hint, HintError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ApiErrorCode {
    BadRequest,
    InvalidPuzzle,
    InvalidState,
    UnknownPuzzle,
    RuleViolation,
    GenerationExhausted,
    NotFound,
    Internal,
}

impl ApiErrorCode {
    pub fn status(self) -> StatusCode {
        match self {
            ApiErrorCode::BadRequest | ApiErrorCode::InvalidPuzzle | ApiErrorCode::InvalidState => {
                StatusCode::BAD_REQUEST
            }
            ApiErrorCode::UnknownPuzzle | ApiErrorCode::NotFound => StatusCode::NOT_FOUND,
            ApiErrorCode::RuleViolation => StatusCode::UNPROCESSABLE_ENTITY,
            ApiErrorCode::GenerationExhausted => StatusCode::SERVICE_UNAVAILABLE,
            ApiErrorCode::Internal => StatusCode::INTERNAL_SERVER_ERROR,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApiError {
    pub code: ApiErrorCode,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub locus: Option<[usize; 2]>,
}

impl ApiError {
    fn new(code: ApiErrorCode, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
            locus: None,
        }
    }

    fn at(mut self, row: usize, col: usize) -> Self {
        self.locus = Some([row, col]);
        self
    }

    fn from_format(code: ApiErrorCode, e: FormatError) -> Self {
        let locus = match e {
            FormatError::ClueOutOfRange { row, col }
            | FormatError::DigitOutOfRange { row, col }
            | FormatError::NotIncreasing { row, col } => Some([row, col]),
            _ => None,
        };
        Self {
            code,
            message: e.to_string(),
            locus,
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = serde_json::to_string(&self).expect("api errors serialize");
        (self.code.status(), [(header::CONTENT_TYPE, "application/json")], body).into_response()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
pub struct PuzzleQuery {
    pub difficulty: Option<String>,
    pub seed: Option<u64>,
    pub rows: Option<usize>,
    pub cols: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub solved: bool,
    pub violations: Vec<ViolationWire>,
}

const SEED_BOUND: u64 = 1 << 53;
const DEFAULT_SIDE: usize = 6;

/// Request handlers, independent of the HTTP layer.
#[derive(Debug, Default)]
pub struct Service {
    cache: RwLock<HashMap<String, Arc<Puzzle>>>,
}

impl Service {
    pub fn new() -> Self {
        Self::default()
    }

    /// GET /api/puzzle
    pub fn get_puzzle(&self, query: &PuzzleQuery) -> Result<PuzzleDocument, ApiError> {
        let difficulty: DifficultyRequest = match &query.difficulty {
            Some(d) => d
                .parse()
                .map_err(|e: String| ApiError::new(ApiErrorCode::BadRequest, e))?,
            None => DifficultyRequest::Any,
        };
        let rows = query.rows.unwrap_or(DEFAULT_SIDE);
        let cols = query.cols.unwrap_or(DEFAULT_SIDE);
        let dims = GridDims::new(rows, cols).map_err(|e| ApiError::new(ApiErrorCode::BadRequest, e.to_string()))?;
        let seed = query.seed.unwrap_or_else(|| rand::random::<u64>() % SEED_BOUND);
        let puzzle = self.puzzle_for(dims, seed, difficulty)?;
        Ok(PuzzleDocument::from_puzzle(&puzzle).without_solution())
    }

    /// POST /api/validate
    pub fn validate_state(&self, body: &str) -> Result<Vec<ViolationWire>, ApiError> {
        let (clues, marks) = self.resolve(body)?;
        let v = validate_assignment(&clues, &marks, false).map_err(internal)?;
        Ok(violations_wire(&v))
    }

    /// POST /api/hint
    pub fn get_hint(&self, body: &str) -> Result<Option<HintWire>, ApiError> {
        let (clues, marks) = self.resolve(body)?;
        match hint(&clues, &marks, true) {
            Ok(h) => Ok(h.as_ref().map(HintWire::from)),
            Err(HintError::Violations(v)) => {
                let first = v[0].cells()[0];
                Err(
                    ApiError::new(ApiErrorCode::RuleViolation, HintError::Violations(v).to_string())
                        .at(first.row, first.col),
                )
            }
            Err(e @ (HintError::Unfillable(c) | HintError::Contradiction(c))) => {
                Err(ApiError::new(ApiErrorCode::RuleViolation, e.to_string()).at(c.row, c.col))
            }
            Err(HintError::Grid(e)) => Err(internal(e)),
        }
    }

    /// POST /api/check
    pub fn check_solution(&self, body: &str) -> Result<CheckResult, ApiError> {
        let (clues, marks) = self.resolve(body)?;
        let v = validate_assignment(&clues, &marks, true).map_err(internal)?;
        Ok(CheckResult {
            solved: v.is_empty(),
            violations: violations_wire(&v),
        })
    }

    fn resolve(&self, body: &str) -> Result<(ClueGrid, AssignmentGrid), ApiError> {
        let state = parse_player_state(body).map_err(|e| ApiError::from_format(ApiErrorCode::InvalidState, e))?;
        let clues = match inline_document(&state.puzzle) {
            Some(doc) => {
                doc.map_err(|e| ApiError::from_format(ApiErrorCode::InvalidPuzzle, e))?
                    .clues
            }
            None => {
                let PuzzleRef::Generated { id, rows, cols, seed } = &state.puzzle else {
                    unreachable!("inline handled above")
                };
                self.reproduce(id, *rows, *cols, *seed)?.clues.clone()
            }
        };
        let marks = state
            .marks(clues.dims())
            .map_err(|e| ApiError::from_format(ApiErrorCode::InvalidState, e))?;
        Ok((clues, marks))
    }

    fn reproduce(&self, id: &str, rows: usize, cols: usize, seed: u64) -> Result<Arc<Puzzle>, ApiError> {
        let unknown = || ApiError::new(ApiErrorCode::UnknownPuzzle, format!("unknown puzzle '{id}'"));
        let dims = GridDims::new(rows, cols).map_err(|_| unknown())?;
        let request = [
            DifficultyRequest::Any,
            DifficultyRequest::Exactly(crate::generator::Difficulty::Easy),
            DifficultyRequest::Exactly(crate::generator::Difficulty::Medium),
            DifficultyRequest::Exactly(crate::generator::Difficulty::Hard),
        ]
        .into_iter()
        .find(|&r| puzzle_id(dims, seed, r) == id)
        .ok_or_else(unknown)?;
        self.puzzle_for(dims, seed, request)
    }

    fn puzzle_for(&self, dims: GridDims, seed: u64, difficulty: DifficultyRequest) -> Result<Arc<Puzzle>, ApiError> {
        let id = puzzle_id(dims, seed, difficulty);
        if let Some(p) = self.cache.read().expect("cache lock").get(&id) {
            return Ok(Arc::clone(p));
        }
        let config = GeneratorConfig::new(dims, seed).with_difficulty(difficulty);
        let puzzle = match generate_puzzle(&config) {
            Ok(p) => Arc::new(p),
            Err(e @ GenerateError::Exhausted(_)) => {
                return Err(ApiError::new(ApiErrorCode::GenerationExhausted, e.to_string()))
            }
            Err(e) => return Err(internal(e)),
        };
        self.cache
            .write()
            .expect("cache lock")
            .entry(id)
            .or_insert_with(|| Arc::clone(&puzzle));
        Ok(puzzle)
    }
}

fn internal(e: impl std::fmt::Display) -> ApiError {
    ApiError::new(ApiErrorCode::Internal, e.to_string())
}

fn json_response(status: StatusCode, body: String) -> Response {
    (status, [(header::CONTENT_TYPE, "application/json")], body).into_response()
}

fn respond<T: Serialize>(result: Result<T, ApiError>) -> Response {
    match result {
        Ok(v) => json_response(StatusCode::OK, serde_json::to_string(&v).expect("responses serialize")),
        Err(e) => e.into_response(),
    }
}

async fn puzzle_handler(State(svc): State<Arc<Service>>, Query(q): Query<PuzzleQuery>) -> Response {
    let result = tokio::task::spawn_blocking(move || svc.get_puzzle(&q)).await;
    match result {
        Ok(Ok(doc)) => json_response(StatusCode::OK, serialize_puzzle(&doc)),
        Ok(Err(e)) => e.into_response(),
        Err(e) => internal(e).into_response(),
    }
}

async fn validate_handler(State(svc): State<Arc<Service>>, body: String) -> Response {
    respond(svc.validate_state(&body))
}

async fn hint_handler(State(svc): State<Arc<Service>>, body: String) -> Response {
    let result = tokio::task::spawn_blocking(move || svc.get_hint(&body)).await;
    respond(result.unwrap_or_else(|e| Err(internal(e))))
}

async fn check_handler(State(svc): State<Arc<Service>>, body: String) -> Response {
    respond(svc.check_solution(&body))
}

async fn not_found() -> Response {
    ApiError::new(ApiErrorCode::NotFound, "no such endpoint").into_response()
}

/// The API routes, plus static files from `static_dir` when given.
pub fn router(service: Arc<Service>, static_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/api/puzzle", get(puzzle_handler))
        .route("/api/validate", post(validate_handler))
        .route("/api/hint", post(hint_handler))
        .route("/api/check", post(check_handler))
        .with_state(service);
    match static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir).fallback(get(not_found))),
        None => api.fallback(not_found),
    }
}

/// Binds `addr` and serves until the process is stopped.
pub async fn serve(addr: SocketAddr, static_dir: Option<PathBuf>) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(Arc::new(Service::new()), static_dir)).await
}

#[cfg(test)]
mod tests {
    use super::*;

    const CORNER_INLINE: &str =
        r#"{"version":1,"rows":2,"cols":2,"clues":[[2,3],[22,18]],"solution":[[[2],[3]],[[1,5,7,9],[4,6,8]]]}"#;

    fn state(marks: &str) -> String {
        format!(r#"{{"puzzle":{{"inline":{CORNER_INLINE}}},"marks":{marks},"elapsed":0}}"#)
    }

    #[test]
    fn validate_examples() {
        let svc = Service::new();
        assert!(svc.validate_state(&state("[[[],[]],[[],[]]]")).unwrap().is_empty());
        let v = svc.validate_state(&state("[[[2],[]],[[],[2]]]")).unwrap();
        assert_eq!(v.len(), 2, "{v:?}");
        assert_eq!(v.iter().filter(|x| x.kind == "NeighborOverlap").count(), 1);
        assert!(svc
            .validate_state(&state("[[[2],[3]],[[1,5,7,9],[4,6,8]]]"))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn hint_examples() {
        let svc = Service::new();
        let h = svc.get_hint(&state("[[[],[]],[[],[]]]")).unwrap().unwrap();
        assert_eq!(h.cell, [0, 0]);
        assert_eq!(h.forced, vec![2]);
        assert_eq!(h.rule, "OnlyCandidate");
        let h = svc.get_hint(&state("[[[2],[]],[[],[]]]")).unwrap().unwrap();
        assert_eq!(
            (h.cell, h.forced.clone(), h.rule.as_str()),
            ([0, 1], vec![3], "RequiredDigitExclusion")
        );
        assert_eq!(svc.get_hint(&state("[[[2],[3]],[[1,5,7,9],[4,6,8]]]")).unwrap(), None);
        let err = svc.get_hint(&state("[[[2],[2]],[[],[]]]")).unwrap_err();
        assert_eq!(err.code, ApiErrorCode::RuleViolation);
    }

    #[test]
    fn check_examples() {
        let svc = Service::new();
        let ok = svc.check_solution(&state("[[[2],[3]],[[1,5,7,9],[4,6,8]]]")).unwrap();
        assert!(ok.solved && ok.violations.is_empty());
        let moved = svc.check_solution(&state("[[[2],[3]],[[1,5,7],[4,6,8,9]]]")).unwrap();
        assert!(!moved.solved);
        assert!(moved.violations.iter().any(|v| v.kind == "WrongSum"));
        let empty = svc.check_solution(&state("[[[],[]],[[],[]]]")).unwrap();
        assert!(!empty.solved);
        assert_eq!(empty.violations.iter().filter(|v| v.kind == "EmptyCell").count(), 4);
    }

    #[test]
    fn generated_puzzles_round_trip_by_reference() {
        let svc = Service::new();
        let q = PuzzleQuery {
            difficulty: Some("medium".into()),
            seed: Some(9),
            rows: Some(4),
            cols: Some(4),
        };
        let doc = svc.get_puzzle(&q).unwrap();
        assert!(doc.solution.is_none());
        assert_eq!(svc.get_puzzle(&q).unwrap(), doc);
        let meta = doc.meta.clone().unwrap();
        let empty = vec![vec![Vec::<u8>::new(); 4]; 4];
        let body = serde_json::json!({
            "puzzle": {"generated": {"id": meta.id.clone().unwrap(), "rows": 4, "cols": 4, "seed": 9}},
            "marks": empty,
        })
        .to_string();
        // A fresh service (no cache) must answer identically.
        let fresh = Service::new();
        assert_eq!(svc.validate_state(&body).unwrap(), fresh.validate_state(&body).unwrap());
        assert!(!fresh.check_solution(&body).unwrap().solved);

        let wrong = body.replace(&meta.id.unwrap(), "ffffffffffffffff");
        assert_eq!(
            svc.validate_state(&wrong).unwrap_err().code,
            ApiErrorCode::UnknownPuzzle
        );
    }

    #[test]
    fn seed_is_drawn_when_missing() {
        let svc = Service::new();
        let doc = svc
            .get_puzzle(&PuzzleQuery {
                rows: Some(3),
                cols: Some(3),
                ..PuzzleQuery::default()
            })
            .unwrap();
        assert!(doc.meta.unwrap().seed.unwrap() < SEED_BOUND);
    }

    #[test]
    fn bad_requests() {
        let svc = Service::new();
        let q = PuzzleQuery {
            difficulty: Some("fiendish".into()),
            ..PuzzleQuery::default()
        };
        assert_eq!(svc.get_puzzle(&q).unwrap_err().code, ApiErrorCode::BadRequest);
        let q = PuzzleQuery {
            rows: Some(0),
            ..PuzzleQuery::default()
        };
        assert_eq!(svc.get_puzzle(&q).unwrap_err().code, ApiErrorCode::BadRequest);
        assert_eq!(svc.validate_state("nope").unwrap_err().code, ApiErrorCode::InvalidState);
        let err = svc.validate_state(&state("[[[3,2],[]],[[],[]]]")).unwrap_err();
        assert_eq!((err.code, err.locus), (ApiErrorCode::InvalidState, Some([0, 0])));
        let bad_inline = r#"{"puzzle":{"inline":{"version":1,"rows":1,"cols":1,"clues":[[0]]}},"marks":[[[]]]}"#;
        let err = svc.validate_state(bad_inline).unwrap_err();
        assert_eq!((err.code, err.locus), (ApiErrorCode::InvalidPuzzle, Some([0, 0])));
    }
}
