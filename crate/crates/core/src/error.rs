use thiserror::Error;

use crate::scalar::Field;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("unknown field tag `{0}` (expected `Q` or `Fp:<p>`)")]
    UnknownField(String),
    #[error("malformed coefficient `{0}`")]
    BadCoefficient(String),
    #[error("denominator of {0} vanishes modulo {1}")]
    DenominatorVanishes(String, u64),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(Field, Field),
    #[error("shape mismatch: {0}")]
    Shape(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PresentationError {
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate arrow `{0}`")]
    DuplicateArrow(String),
    #[error("arrow `{arrow}` refers to unknown vertex `{vertex}`")]
    UnknownVertex { arrow: String, vertex: String },
    #[error("relation {relation}: unknown arrow `{arrow}`")]
    UnknownArrow { relation: usize, arrow: String },
    #[error("relation {relation}: path {first}·{second} is not composable")]
    NotComposable {
        relation: usize,
        first: String,
        second: String,
    },
    #[error("relation {relation}: terms have different endpoints")]
    MixedEndpoints { relation: usize },
    #[error("relation {relation}: {detail}")]
    BadRelation { relation: usize, detail: String },
    #[error("relation {relation}: coefficient lives in {found}, presentation is over {expected}")]
    FieldMismatch {
        relation: usize,
        expected: Field,
        found: Field,
    },
    #[error("relation {relation} is not weight homogeneous")]
    NotHomogeneous { relation: usize },
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("i/o error: {0}")]
    Io(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("element belongs to a different algebra")]
    ForeignElement,
    #[error("degree {0} exceeds the computed range and the algebra has not vanished")]
    DegreeOutOfRange(usize),
    #[error("algebra built to degree {0} without reaching a zero degree; Hilbert series not certified")]
    NotVanished(usize),
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("path {0} is not composable")]
    NotComposable(String),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModuleError {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("element is not homogeneous: {0}")]
    NotHomogeneous(String),
    #[error("element does not lie in the module: {0}")]
    Foreign(String),
    #[error("arrow action violates relation {relation} on basis vector {basis}")]
    RelationViolated { relation: usize, basis: usize },
    #[error("map is not well defined: {0}")]
    NotWellDefined(String),
    #[error("maps are not composable: {0}")]
    NotComposable(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LieError {
    #[error("the raising operators are not determined: {0}")]
    InconsistentSolve(String),
    #[error("relation space is not stable under {0}; the action does not descend")]
    NotStable(String),
    #[error("{0}")]
    Data(String),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("{0}")]
    Other(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
