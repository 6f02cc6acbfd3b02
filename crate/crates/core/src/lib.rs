//! Exact computations for conditional independence: statements and imsets,
//! the toric ideal of the elementary imset matrix, the face lattice of the
//! elementary imset cone, and CI ideals in the ring of joint probabilities.

pub mod budget;
pub mod ci_ideal;
pub mod ci_model;
pub mod cone;
pub mod error;
pub mod imset;
pub mod linalg;
pub mod poly;
pub mod relation_lang;
pub mod reports;
pub mod toric;
pub mod verify;

pub use budget::Budget;
pub use ci_model::{CIStatement, IndexSet, Permutation, StructuralType};
pub use error::{Error, Result};
pub use imset::{Imset, ImsetMatrix};
pub use relation_lang::{BinomialExpr, CIRelation, RelationSide};
pub use poly::{DimDeg, IdealHandle, MonomialOrder, Polynomial, Ring};
pub use ci_ideal::StateVector;
