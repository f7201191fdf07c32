//! Exact analysis of plane curve singularities and enumeration of curves
//! meeting a three-component configuration in at most two branch points.

pub mod error;
pub mod exactalg;
pub mod localgeo;
pub mod projplane;
pub mod search3c;
pub mod tangency;

pub use error::{GeomError, GeomResult};
pub use exactalg::{Budget, FieldElement, NumberField, Poly, Rational, Scalar, UniPoly};

/// Polynomials with rational coefficients.
pub type QPoly = Poly<Rational>;
/// Polynomials over a number field (or Q).
pub type KPoly = Poly<FieldElement>;
/// Floating point polynomials, used only for rendering.
pub type FloatPoly = Poly<f64>;
