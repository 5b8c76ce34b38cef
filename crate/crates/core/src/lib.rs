//! Multiplicity varieties, divided differences and weighted growth checks for
//! interpolation problems in spaces of entire functions.

pub mod cli;
pub mod divdiff;
pub mod error;
pub mod generate;
pub mod growth;
pub mod io;
pub mod mp;
pub mod smoothing;
pub mod variety;
pub mod weights;

pub use error::{Error, Result};
pub use variety::{MultiplicityVariety, Point, Truncation};
pub use weights::{Weight, WeightKind};
