//! Salient object detection baseline and benchmark harness.
//!
//! The pipeline separates *where to look* from *what to segment*:
//!
//! 1. a saliency frontend produces a map ([`frontend`]): precomputed model maps,
//!    blurred human fixations, leave-one-out inter-observer maps, or a built-in
//!    spectral-residual stand-in;
//! 2. the image is over-segmented with graph-based superpixels ([`superpixel`]);
//! 3. superpixels overlapping the thresholded map are kept, border-touching ones
//!    discarded and holes filled ([`salbase`]).
//!
//! [`metrics`] implements the evaluation protocol (PR, F-measure, ROC/AUC,
//! shuffled AUC, overlap, annotation agreement) and [`dataset`] the dataset
//! statistics (center bias, object distance and size, scene complexity,
//! fixation ratios). [`cli`] wires everything into the `salbase` batch driver.

pub mod cli;
pub mod dataset;
mod error;
pub mod frontend;
pub mod io;
pub mod metrics;
pub mod raster;
pub mod salbase;
pub mod superpixel;
pub mod synthetic;

pub use error::{Error, Result};
pub use frontend::{FixationSet, FrontendSpec};
pub use raster::{BinaryMask, Raster, SaliencyMap};
pub use salbase::{run_salbase, SalBaseParams, SalBaseResult};
pub use superpixel::{segment, SegmentationParams, SuperpixelLabeling};
