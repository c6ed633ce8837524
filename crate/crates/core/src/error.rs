use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("invalid operator: {0}")]
    InvalidOperator(String),
    #[error("invalid boundary condition: {0}")]
    InvalidBoundary(String),
    #[error("boundary condition is not normal: diagonal entry {k} is not surjective at t = 0")]
    NotNormal { k: usize },
    #[error("normality lost away from tip: diagonal entry {k} drops rank at t = {t}")]
    NormalityLostAwayFromTip { k: usize, t: f64 },
    #[error("triangular inversion needs t-independent diagonal entries (entry {k} depends on t)")]
    NonConstantDiagonal { k: usize },
    #[error("characteristic boundary: the leading Green block is not invertible at the {point} endpoint")]
    CharacteristicBoundary { point: String },
    #[error("not properly elliptic: {0}")]
    NotProperlyElliptic(String),
    #[error("principal symbol degenerates: {0}")]
    PrincipalSymbol(String),
    #[error("Shapiro-Lopatinskij condition fails: {0}")]
    Lopatinskij(String),
    #[error("weight on pole: a pole at {re}{im:+}i lies on the line Re z = {line}")]
    WeightOnPole { re: f64, im: f64, line: f64 },
    #[error("endpoint pole at {re}{im:+}i: directness of the singular-function sum is undecided")]
    EndpointPole { re: f64, im: f64 },
    #[error("contour trouble: {0}")]
    Contour(String),
    #[error("Laurent extraction failed: {0}")]
    Laurent(String),
    #[error("singular matrix: {0}")]
    Singular(String),
    #[error("grid coefficients need a discretization")]
    GridSection,
    #[error("invalid weight data: {0}")]
    Weight(String),
}

pub type Result<T> = std::result::Result<T, Error>;
