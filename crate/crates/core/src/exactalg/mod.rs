//! Exact scalars, polynomials, resultants, factorization and linear algebra.

mod adjoin;
mod bivariate;
mod factor;
mod field;
mod linalg;
mod parse;
mod poly;
mod rational;
mod resultant;
mod scalar;
mod unipoly;
mod zassenhaus;

use thiserror::Error;

pub use adjoin::{adjoin_root, Extension};
pub use bivariate::{
    cmp_forms, factor_form_rational, gcd_bivariate, gcd_forms, is_squarefree_bivariate, is_squarefree_form,
    squarefree_part_bivariate, squarefree_part_form,
};
pub use factor::{factor_over, factor_small, is_irreducible_over};
pub use field::{format_field_element, FieldElement, NumberField};
pub use parse::{parse_poly, parse_poly_in};
pub use linalg::{solve_linear, AffineSolution, Matrix};
pub use poly::{Exps, Poly};
pub use rational::{common_denominator, format_rational, parse_rational, rat, ratio, rational_sqrt, Rational};
pub use resultant::{discriminant, resultant, resultant_formal};
pub(crate) use resultant::bareiss_det;
pub use scalar::Scalar;
pub use unipoly::UniPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("zero polynomial: {0}")]
    ZeroPolynomial(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("polynomial is reducible: {0}")]
    Reducible(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

/// Size limits for factorization and field towers. Work beyond these limits
/// fails with [`AlgebraError::BudgetExceeded`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Largest univariate degree factored over Q.
    pub factor_degree: usize,
    /// Largest absolute degree of a number field.
    pub field_degree: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { factor_degree: 12, field_degree: 8 }
    }
}

impl Budget {
    pub fn check_factor(&self, d: usize) -> Result<(), AlgebraError> {
        if d > self.factor_degree {
            return Err(AlgebraError::BudgetExceeded(format!(
                "factoring degree {d} exceeds the budget {}",
                self.factor_degree
            )));
        }
        Ok(())
    }

    pub fn check_field(&self, d: usize) -> Result<(), AlgebraError> {
        if d > self.field_degree {
            return Err(AlgebraError::BudgetExceeded(format!(
                "field of absolute degree {d} exceeds the budget {}",
                self.field_degree
            )));
        }
        Ok(())
    }
}
