use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid quadratic radicand {0}: must be square-free and not 0 or 1")]
    InvalidRadicand(i64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid projective point (0:0)")]
    InvalidProjectivePoint,
    #[error("bidegree mismatch: expected {expected}, found {found}")]
    BidegreeMismatch { expected: usize, found: usize },
    #[error("form is identically zero")]
    ZeroForm,
    #[error("form must have constant coefficients")]
    NonConstantForm,
    #[error("gluing points coincide: p1 equals p2")]
    CoincidentGluingPoints,
    #[error("gluing factor A must be nonzero")]
    ZeroGluingFactor,
    #[error("form does not satisfy the section condition for the given gluing")]
    NotASection,
    #[error("degenerate gluing data: {0}")]
    DegenerateGluing(String),
    #[error("forms are proportional or share a component; intersection is not finite")]
    DegeneratePencil,
    #[error("intersection requires Q(sqrt({needed})) but the session already uses {current}")]
    UnsupportedExtension { needed: String, current: String },
    #[error("non-generic data: {0}")]
    NonGenericData(String),
    #[error("flow constant {0} is not rational; exponential factor not representable")]
    IrrationalFlowConstant(String),
    #[error("cannot lift from pole order {from} down to {to}")]
    InvalidLift { from: usize, to: usize },
    #[error("element does not satisfy the module membership identity")]
    NotAModuleElement,
    #[error("module elements carry incompatible eigenvalue tags")]
    IncompatibleLambda,
    #[error("degenerate module: {0}")]
    DegenerateModule(String),
    #[error("witness undefined: h2 vanishes identically at the point")]
    WitnessUndefined,
    #[error("numerator does not descend to a function on the glued surface")]
    NotAFunctionOnGamma,
    #[error("function numerator depends on x, y; only spectral-parameter functions are allowed")]
    SpectralParameterOnly,
    #[error("basis does not generate: the eigen system for row {row} is inconsistent")]
    BasisNotGenerating { row: usize },
    #[error("basis is not free: the eigen system has a {nullity}-dimensional solution space")]
    BasisNotFree { nullity: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
