//! Exact computational homological algebra.
//!
//! The crate builds bounded chain complexes over prime fields and the
//! rationals, realizes their suspended monoidal structure (tensor product,
//! shift, and the Koszul-signed isomorphisms between them), and uses it to
//! compute graded endomorphism rings of unit objects: group cohomology
//! `Ext_{kG}(k, k)` and Hochschild cohomology `Ext_{A^e}(A, A)`. Products are
//! computed three independent ways (Yoneda composition of lifted chain maps,
//! explicit cochain cup products, and the star product through tensors of
//! resolutions) so that graded commutativity can be checked concretely.

pub mod algebra;
pub mod cohomology;
pub mod complex;
pub mod error;
pub mod input;
pub mod linalg;
pub mod monoidal;
pub mod report;
pub mod resolution;

pub use error::{Error, Result};
pub use linalg::{Field, Matrix, Scalar, Vector};
