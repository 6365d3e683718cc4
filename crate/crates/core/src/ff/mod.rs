//! Exact linear algebra over GF(p) for odd primes `p <= 251`.

mod gl;
mod matrix;
mod prime;
mod subspace;

pub use gl::{enumerate_gl, gl_generators, gl_order, GlEnumerator};
pub use matrix::FpMatrix;
pub use prime::{Prime, MAX_PRIME};
pub use subspace::{for_each_subspace, projective_count, projective_points, subspace_count, Subspace};

