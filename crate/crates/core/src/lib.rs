//! Exact computations in the Temperley-Lieb algebra and its categorification
//! by dotted cobordisms: chain complexes of diagrams, delooping and Gaussian
//! elimination, truncated universal projectors, graded homology of closures,
//! colored Jones series for braid closures, and classical spin networks.

pub mod coeff;
pub mod cob;
pub mod complex;
pub mod error;
pub mod homology;
pub mod projector;
pub mod simplify;
pub mod spin;
pub mod tangle;
pub mod tl;

pub use error::Error;

pub type Result<T> = std::result::Result<T, Error>;
