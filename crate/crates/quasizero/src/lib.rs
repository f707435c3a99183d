//! Explicit zero-count bounds for weighted classes of analytic functions in
//! the unit disc, together with the brute-force machinery that validates
//! them: moment sequences and their inverses, polynomial zero counting by
//! simultaneous root iteration and by the argument principle, and standalone
//! numerical checks of the supporting inequalities (derivative flatness from
//! zero clusters, the convex-region derivative bound, the sinc-product lower
//! bound, and propagation-of-smallness sets).

pub mod analytic;
pub mod bound;
pub mod cli;
pub mod error;
pub mod logsum;
pub mod moments;
pub mod oracles;
pub mod weights;
pub mod zeros;

pub use error::{Error, Result};
