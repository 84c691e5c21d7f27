//! Smocked metric spaces and the checkered pattern.
//!
//! * [`geom`]: points, segments and nearest-point queries.
//! * [`pattern`]: stitch patterns, the checkered lattice and pattern files.
//! * [`metric`]: the exact smocked distance by shortest paths through stitches.
//! * [`closedform`]: the estimating norm, the distance formula and network paths.
//! * [`analysis`]: seeded verification sweeps and rescaling experiments.

pub mod analysis;
pub mod closedform;
pub mod error;
pub mod exec;
pub mod geom;
pub mod metric;
pub mod pattern;

pub use error::{Error, Result};
pub use exec::Execution;
pub use geom::{DirectedSegment, Point2};
pub use pattern::{checkered_pattern, Pattern, PeriodicPattern, Stitch, StitchClass, StitchIndex};
