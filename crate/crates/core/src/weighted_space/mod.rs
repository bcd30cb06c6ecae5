//! Weights, canonical points of weighted projective spaces and their
//! products, and the size functions used for counting.

mod bound;
mod point;
mod weight;

pub use bound::{Exponent, SizeBound, SizeValue};
pub use point::{
    canonicalize, h_infinity, int_tuple, parse_point, size, size_at_most, size_divisor,
    size_divisor_value, size_value, weighted_action, weighted_content, ProductPoint, WpsPoint,
};
pub use weight::{is_well_formed, parse_weight_list, DivisorClass, Weight};

/// `(|W₁|, …, |W_k|)`.
pub fn anticanonical_divisor(weights: &[Weight]) -> DivisorClass {
    DivisorClass::anticanonical(weights)
}
