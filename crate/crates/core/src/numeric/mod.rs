//! Numerical building blocks shared by the partition, renewal and
//! thermodynamic modules.

mod extended;
pub mod format;
pub mod quad;
pub mod special;
pub mod sum;

pub use extended::Extended;
pub use sum::NeumaierSum;
