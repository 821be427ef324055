//! α-Farey and α-Lüroth interval maps for countable partitions of `(0,1]`:
//! digit expansions, sum-level renewal sequences, pressure and free energy,
//! Lyapunov spectra and phase-transition classification.

pub mod cli;
pub mod conjugacy;
pub mod dynamics;
pub mod ergodic;
pub mod error;
pub mod numeric;
pub mod partition;
pub mod renewal;
pub mod thermo;

pub use error::{Error, Result};
pub use partition::{Classification, Family, Param, PartitionSpec, Scalar, TailKind, TypeClass, Weight};
