//! Special functions and quadrature engines.

pub mod quadrature;
pub mod special;

pub use quadrature::{
    freq_integrate, pairwise_sum, sphere_integrate, Estimate, GaussLegendre, QuadratureSpec,
};
pub use special::{
    atanh_over_x, atanh_over_x_minus_one, bessel_k0, bessel_k1, bessel_k2, cin, cosine_integral,
};
