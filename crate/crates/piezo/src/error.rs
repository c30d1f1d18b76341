use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// A matrix handed to [`crate::tensor::Rotation::from_matrix`] is not a
    /// proper rotation within tolerance.
    #[error("not a proper rotation: {reason} (deviation {deviation:.3e})")]
    NotARotation { reason: &'static str, deviation: f64 },

    /// A full 3x3x3 array is not symmetric in its last two indices.
    #[error("tensor not symmetric in last two indices at ({i},{j},{k}): |P_ijk - P_ikj| = {deviation:.3e}")]
    NotPiezoSymmetric {
        i: usize,
        j: usize,
        k: usize,
        deviation: f64,
    },

    /// A tensor expected to be totally symmetric is not.
    #[error("tensor not totally symmetric: max asymmetry {deviation:.3e} exceeds {allowed:.3e}")]
    NotTotallySymmetric { deviation: f64, allowed: f64 },

    /// The intermediate group does not admit a consistent third-order part.
    #[error("inconsistent intermediate group in case {case}: equation {equation} has residual {residual:.3e} (allowed {allowed:.3e})")]
    InconsistentGroup {
        case: &'static str,
        equation: &'static str,
        residual: f64,
        allowed: f64,
    },

    /// A branch hit a linear system that should be regular but is not.
    #[error("singular system in case {case}: {system} has determinant {determinant:.3e}")]
    SingularSystem {
        case: &'static str,
        system: &'static str,
        determinant: f64,
    },

    /// The group handed to `recover_a` does not match the claimed case tag.
    #[error("group is in case {found}, not the requested case {requested}")]
    CaseMismatch { requested: String, found: String },

    /// Operation undefined on the zero tensor.
    #[error("operation undefined for a zero tensor")]
    ZeroTensor,

    /// Invalid argument (tolerances, start counts, ...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
