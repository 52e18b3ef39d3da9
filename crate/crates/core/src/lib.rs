//! Recognition, compilation and simulation for hand-drawn arrow programs.
//!
//! The crate turns photographs of arrow symbols drawn on paper into robot
//! motion commands and runs them on a simulated cost-weighted playground:
//!
//! - [`imaging`]: PGM decoding, adaptive thresholding, morphology, contours
//! - [`features`]: 42-dimensional shape descriptor per symbol
//! - [`classifier`]: MLP trained with Adam, kNN reference, confusion-matrix metrics
//! - [`dataset`]: synthetic arrow generator, stratified split, directory I/O
//! - [`compiler`]: symbol programs to motion commands
//! - [`pipeline`]: the end-to-end sheet classifier and training helpers
//! - [`playground`]: lattice map, energy model and simulator
//!
//! Runnable walkthroughs live in this crate's `examples/` directory.

pub mod classifier;
pub mod compiler;
pub mod dataset;
pub mod features;
pub mod imaging;
pub mod pipeline;
pub mod playground;
mod symbol;

pub use symbol::{SymbolClass, UnknownSymbol};
