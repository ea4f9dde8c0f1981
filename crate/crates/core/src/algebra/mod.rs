//! Coefficient field, polynomials, and the exact algorithms the other modules build on.

pub mod crit;
pub mod field;
pub mod linalg;
pub mod modp;
pub mod parse;
pub mod poly;
pub mod roots;

pub use crit::{critical_value_polynomial, critical_values, CriticalFactor};
pub use field::{FieldConfig, FieldElem, FieldError, Rational, Sigma};
pub use parse::{parse_elem, parse_poly, ParseError};
pub use poly::{base_expansion, rescale, LinearMap, Poly, PolyError};
