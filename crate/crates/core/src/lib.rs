//! Exact computer algebra for filtered differential forms on symplectic
//! Lie-algebra models.
//!
//! The crate builds, on finite invariant-form models (nilmanifolds and
//! tori), the filtered complexes with their A-infinity products, the cone
//! cdgas obtained by attaching an odd generator killing a power of the
//! symplectic form, the explicit retraction between the two, and the
//! cyclic pairing — all over exact rational arithmetic. Identity suites
//! verify every structural equation on exhaustive (or seeded-sampled)
//! basis tuples, and a CLI exposes cohomology tables, pairing matrices and
//! the verification suites.

pub mod cone;
pub mod equiv;
pub mod error;
pub mod exterior;
pub mod filtered;
pub mod homology;
pub mod lefschetz;
pub mod linalg;
pub mod model;
pub mod modelfile;
pub mod report;
pub mod sample;
pub mod scalar;

pub use error::Error;
