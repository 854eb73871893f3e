use serde_json::{json, Value};
use thiserror::Error;

use crate::value::ExtValue;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// One failed constraint found while validating a distance matrix.
///
/// Indices refer to the input order of the points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpaceViolation {
    /// `d(i,i) != 0`.
    NonzeroDiagonal { i: usize, value: ExtValue },
    /// `d(i,j) != d(j,i)`.
    Asymmetric { i: usize, j: usize },
    /// `d(i,k) > d(i,j) + d(j,k)`; reported as the triple `(i, k, j)`.
    Triangle { i: usize, k: usize, j: usize },
}

impl SpaceViolation {
    pub fn code(&self) -> &'static str {
        match self {
            SpaceViolation::NonzeroDiagonal { .. } => "E_NONZERO_DIAGONAL",
            SpaceViolation::Asymmetric { .. } => "E_ASYMMETRIC",
            SpaceViolation::Triangle { .. } => "E_TRIANGLE",
        }
    }

    fn to_json(&self) -> Value {
        match self {
            SpaceViolation::NonzeroDiagonal { i, value } => {
                json!({"code": self.code(), "index": i, "value": value.to_string()})
            }
            SpaceViolation::Asymmetric { i, j } => json!({"code": self.code(), "pair": [i, j]}),
            SpaceViolation::Triangle { i, k, j } => {
                json!({"code": self.code(), "triple": [i, k, j]})
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Error {
    #[error("bad rational literal {0:?}")]
    BadRational(String),
    #[error("negative value {0}")]
    Negative(String),
    #[error("distance matrix is not {rows}x{rows} (row {row} has {len} entries)")]
    Shape { rows: usize, row: usize, len: usize },
    #[error("a space needs at least one point")]
    Empty,
    #[error("duplicate point label {0:?}")]
    DuplicatePoint(String),
    #[error("invalid distance matrix: {} violation(s), first {}", .0.len(), .0[0].code())]
    InvalidSpace(Vec<SpaceViolation>),
    #[error("unknown point {label:?} in {context}")]
    UnknownPoint { label: String, context: String },
    #[error("map is not 1-Lipschitz at ({a}, {b}): {dom} < {cod}")]
    NotLipschitz { a: String, b: String, dom: ExtValue, cod: ExtValue },
    #[error("map is not an isometry at ({a}, {b}): {before} != {after}")]
    NotIsometry { context: String, a: String, b: String, before: ExtValue, after: ExtValue },
    #[error("map is not a bijection: {0}")]
    NotBijective(String),
    #[error("generated group exceeds {cap} elements")]
    GroupTooLarge { cap: usize },
    #[error("subsets belong to different spaces")]
    SpaceMismatch,
    #[error("morphisms do not compose or share the required space: {0}")]
    DomainMismatch(String),
    #[error("base distance d({b0}, {b1}) = inf between inhabited fibers")]
    InfiniteBaseDistance { b0: String, b1: String },
    #[error("map is not surjective; uncovered: {uncovered:?}")]
    NotSurjective { uncovered: Vec<String> },
    #[error("map is not a submetry: point {point} is {deficit} too far from the fiber over {target}")]
    NotSubmetry { point: String, target: String, deficit: ExtValue },
    #[error("family is not proper: {0}")]
    NotProper(String),
    #[error("map is not a section: {0}")]
    NotSection(String),
    #[error("size {size} exceeds the cap {cap}")]
    TooLarge { size: u128, cap: u128 },
    #[error("space {0} is not a metric space")]
    NotMetric(String),
    #[error("legs do not share the codomain")]
    CodomainMismatch,
    #[error("triple ({x1}, {x2}, {x3}) has no exact lift; best slack {deficit}")]
    TripleUnliftable { x1: String, x2: String, x3: String, deficit: ExtValue },
    #[error("not a covering: {0}")]
    NotCovering(String),
    #[error("pieces {i} and {j} disagree at ({u}, {v})")]
    Incompatible { i: usize, j: usize, u: String, v: String },
    #[error("transition ({i},{j}) missing for a nonempty overlap")]
    MissingTransition { i: usize, j: usize },
    #[error("transition ({i},{j}) does not lie over the overlap at {point}")]
    NotOverOverlap { i: usize, j: usize, point: String },
    #[error("cocycle fails for ({i},{j},{k}) at {point}")]
    Cocycle { i: usize, j: usize, k: usize, point: String },
    #[error("internal triangle violation at ({a}, {c}) via {b}")]
    TriangleViolation { a: String, b: String, c: String },
    #[error("infinite distance in a space handed to the Gromov-Hausdorff solver")]
    InfiniteDistance,
    #[error("search space {size} exceeds the budget {cap}")]
    Budget { size: u128, cap: u128 },
    #[error("radius must be positive and finite, got {0}")]
    DegenerateRadius(ExtValue),
    #[error("radius {r} is smaller than half the distortion {distortion}")]
    RadiusTooSmall { r: ExtValue, distortion: ExtValue },
    #[error("link {index} is not an isometry between consecutive fibers: {reason}")]
    LinkNotIsometry { index: usize, reason: String },
    #[error("relation is not a correspondence; uncovered: {uncovered:?}")]
    NotTotal { uncovered: Vec<String> },
    #[error("family is not over a two-point base: {0}")]
    NotTwoPoint(String),
}

impl Error {
    /// Stable machine-readable code, as used in violation reports.
    pub fn code(&self) -> &'static str {
        use Error::*;
        match self {
            BadRational(_) => "E_BAD_RATIONAL",
            Negative(_) => "E_NEGATIVE",
            Shape { .. } => "E_SHAPE",
            Empty => "E_EMPTY",
            DuplicatePoint(_) => "E_DUPLICATE_POINT",
            InvalidSpace(v) => v[0].code(),
            UnknownPoint { .. } => "E_UNKNOWN_POINT",
            NotLipschitz { .. } => "E_NOT_LIPSCHITZ",
            NotIsometry { .. } => "E_NOT_ISOMETRY",
            NotBijective(_) => "E_NOT_BIJECTIVE",
            GroupTooLarge { .. } => "E_GROUP_TOO_LARGE",
            SpaceMismatch => "E_SPACE_MISMATCH",
            DomainMismatch(_) => "E_DOMAIN_MISMATCH",
            InfiniteBaseDistance { .. } => "E_INFINITE_BASE_DISTANCE",
            NotSurjective { .. } => "E_NOT_SURJECTIVE",
            NotSubmetry { .. } => "E_NOT_SUBMETRY",
            NotProper(_) => "E_NOT_PROPER",
            NotSection(_) => "E_NOT_SECTION",
            TooLarge { .. } => "E_TOO_LARGE",
            NotMetric(_) => "E_NOT_METRIC",
            CodomainMismatch => "E_CODOMAIN_MISMATCH",
            TripleUnliftable { .. } => "E_TRIPLE_UNLIFTABLE",
            NotCovering(_) => "E_NOT_COVERING",
            Incompatible { .. } => "E_INCOMPATIBLE",
            MissingTransition { .. } => "E_MISSING_TRANSITION",
            NotOverOverlap { .. } => "E_NOT_OVER_OVERLAP",
            Cocycle { .. } => "E_COCYCLE",
            TriangleViolation { .. } => "E_TRIANGLE_VIOLATION",
            InfiniteDistance => "E_INFINITE_DISTANCE",
            Budget { .. } => "E_BUDGET",
            DegenerateRadius(_) => "E_DEGENERATE_RADIUS",
            RadiusTooSmall { .. } => "E_RADIUS_TOO_SMALL",
            LinkNotIsometry { .. } => "E_LINK_NOT_ISOMETRY",
            NotTotal { .. } => "E_NOT_TOTAL",
            NotTwoPoint(_) => "E_NOT_TWO_POINT",
        }
    }

    /// Structured witness data for violation reports.
    pub fn witness(&self) -> Value {
        use Error::*;
        match self {
            InvalidSpace(vs) => json!({"violations": vs.iter().map(SpaceViolation::to_json).collect::<Vec<_>>()}),
            Shape { rows, row, len } => json!({"rows": rows, "row": row, "len": len}),
            DuplicatePoint(l) => json!({"label": l}),
            UnknownPoint { label, context } => json!({"label": label, "context": context}),
            NotLipschitz { a, b, dom, cod } => json!({
                "pair": [a, b], "dom_distance": dom.to_string(), "cod_distance": cod.to_string()
            }),
            NotIsometry { context, a, b, before, after } => json!({
                "context": context, "pair": [a, b],
                "before": before.to_string(), "after": after.to_string()
            }),
            GroupTooLarge { cap } => json!({"cap": cap}),
            InfiniteBaseDistance { b0, b1 } => json!({"pair": [b0, b1]}),
            NotSurjective { uncovered } | NotTotal { uncovered } => json!({"uncovered": uncovered}),
            NotSubmetry { point, target, deficit } => json!({
                "point": point, "target": target, "deficit": deficit.to_string()
            }),
            TooLarge { size, cap } | Budget { size, cap } => {
                json!({"size": size.to_string(), "cap": cap.to_string()})
            }
            TripleUnliftable { x1, x2, x3, deficit } => json!({
                "triple": [x1, x2, x3], "deficit": deficit.to_string()
            }),
            Incompatible { i, j, u, v } => json!({"legs": [i, j], "points": [u, v]}),
            MissingTransition { i, j } => json!({"pair": [i, j]}),
            NotOverOverlap { i, j, point } => json!({"pair": [i, j], "point": point}),
            Cocycle { i, j, k, point } => json!({"triple": [i, j, k], "point": point}),
            TriangleViolation { a, b, c } => json!({"triple": [a, c, b]}),
            DegenerateRadius(r) => json!({"r": r.to_string()}),
            RadiusTooSmall { r, distortion } => json!({
                "r": r.to_string(), "distortion": distortion.to_string()
            }),
            LinkNotIsometry { index, reason } => json!({"index": index, "reason": reason}),
            _ => json!({}),
        }
    }
}
