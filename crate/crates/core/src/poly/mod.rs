//! Polynomials over ℚ with exact arithmetic: monomial orders, Buchberger's
//! algorithm, elimination, saturation and Hilbert-series dimension/degree.

mod groebner;
mod hilbert;
mod ideal;
mod monomial;
mod polynomial;

pub use groebner::{groebner, groebner_verified, normal_form, reduce_basis, s_polynomial, verify_groebner};
pub use hilbert::{dim_degree_from_numerator, hilbert_numerator};
pub use ideal::{
    dim_degree, eliminate, ideal_contains, ideal_equal, ideal_membership, saturate_variable,
    saturate_variable_homogeneous, sum_ideals, DimDeg, IdealHandle,
};
pub use monomial::{Monomial, MonomialOrder};
pub use polynomial::{Display, Polynomial, Ring};
