//! Tensor algebra for piezoelectric tensors: harmonic decomposition,
//! the 260-entry hemitropic functional basis, and SO(3)-orbit
//! canonicalization with a numerical alignment oracle.
//!
//! A piezoelectric tensor is a third-order 3D tensor symmetric in its last
//! two indices (18 degrees of freedom). The library splits it into its
//! irreducible parts `(A, u, D, v)`, builds the nine intermediate tensors
//! `(B, c, F, G, H, w, D, u, v)`, evaluates the functional basis of 260
//! hemitropic invariants, and reconstructs a canonical representative of
//! the SO(3)-orbit through an explicit case tree.

pub mod canonical;
pub mod decompose;
pub mod error;
pub mod intermediates;
pub mod invariants;
pub mod io;
pub mod tensor;
pub mod verify;

pub use canonical::{
    align, canonicalize, cubic_form_argmax, orbit_equal, recover_a, resultant_certificate,
    CanonicalForm, CaseTag, OrbitReport, ResultantClass,
};
pub use decompose::{decompose, decompose_traced, recompose, HarmonicParts};
pub use error::Error;
pub use intermediates::{compute_group, e_tensor, k_from_b, IntermediateGroup};
pub use invariants::{
    degree_table, evaluate_basis, special_basis_harmonic, special_basis_symmetric,
    InvariantVector,
};
pub use tensor::{
    axial_of_skew, eps_bracket, levi_civita, random_rotation, skew_of_axial, triple_product,
    Harm2, Harm3, Mat3, PiezoTensor, Rotate, Rotation, SkewMat3, SymMat3, Tensor3, Vec3,
};
