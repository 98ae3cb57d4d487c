//! Exact arithmetic for integer circulant determinants of order 16: which
//! integers occur, explicit vectors realizing them, and the norm
//! factorization behind both.

pub mod circulant;
pub mod document;
pub mod classifier;
pub mod error;
pub mod gaussian;
pub mod number_theory;
pub mod parallel;
pub mod properties;
pub mod ring;
pub mod search;
pub mod selftest;
pub mod witness;

pub use circulant::{cyclic_convolve, det_bareiss, det_via_norms, norms, CoeffVector, NormFactorization};
pub use classifier::{classify, MembershipVerdict, Reason};
pub use error::{ClassifyError, CoreError, DocumentError, NumberTheoryError, SearchError, WitnessError};
pub use gaussian::GaussianInteger;
pub use number_theory::{factorize, FactorConfig, Factorization};
pub use witness::{build_witness, Witness, WitnessPlan};
