//! Points, scalar fields and the frame calculus of the Heisenberg group.

pub mod expr;
pub mod field;
pub mod frame;
pub mod point;
pub mod volume;

pub use expr::{angle_jet, koranyi_jet, radius_jet, radius_sq_jet, FieldExpr, Monomial};
pub use field::{Axis, DerivativeMode, ScalarField, TabulatedField, DEFAULT_FD_STEP};
pub use frame::{
    apply_frame, commutator_check, euler_field, fundamental_harmonicity_check, hardy_weight,
    koranyi_norm, sub_laplacian, CommutatorReport, Frame, FrameDerivatives, VectorField,
};
pub use point::Point;
pub use volume::VolumeRule;
