//! Graded invariants of nodal projective hypersurfaces, computed with exact
//! linear algebra over prime fields or the rationals.

pub mod certificate;
pub mod error;
pub mod field;
pub mod fixture;
pub(crate) mod groebner;
pub mod hodge;
pub mod koszul;
pub mod linalg;
pub mod milnor;
pub mod monomial;
pub mod nodal;
pub mod parse;
pub mod poly;
pub mod report;
pub mod session;
pub mod torelli;

pub use certificate::Certificate;
pub use error::{Error, Result};
pub use field::{Field, FieldConfig, FieldDescriptor, PrimeField, Rationals};
pub use monomial::{monomial_basis, Monomial};
pub use poly::HomogeneousPolynomial;
pub use milnor::{JacobianContext, Threshold};
