//! Exact construction of commuting 2×2 matrix differential operators in two
//! variables from spectral data on `CP¹ × CP¹` with two lines glued.

pub mod biform;
pub mod coeff;
pub mod error;
pub mod expr;
mod gcd;
pub mod laurent;
pub mod linalg;
pub mod module;
pub mod operator;
pub mod scalar;
pub mod solver;
pub mod surface;

pub use biform::{BiForm, ProjPoint, Slot};
pub use coeff::{normalize, CoeffElem};
pub use error::{Error, Result};
pub use expr::{parse_biform, parse_coeff, parse_operator};
pub use laurent::{Axis, ExpMonomial, LaurentPoly};
pub use module::{
    default_basis, membership_check, rank_m, ratio_witness, BAElement, BasisPair, Membership,
};
pub use operator::{DiffOp, MatrixDiffOp};
pub use scalar::FieldScalar;
pub use solver::{
    construct_operator, validate_function, verify_commute_pair, verify_eigen, verify_homomorphism,
    FunctionOnGamma, SpectralAssignment,
};
pub use surface::{
    check_distinct_witnesses, check_section, choose_flow_pair, flow_form_space,
    intersection_points, ExponentialFactor, FlowForm, GluingData, SectionForm, Session,
    SurfacePoint, Witnesses,
};
