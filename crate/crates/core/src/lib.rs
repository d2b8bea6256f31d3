//! Shape asymmetry analysis for binary skin-lesion masks.
//!
//! The crate splits a lesion mask at its centroid into four quadrants,
//! compares their pixel counts and labels the lesion asymmetric,
//! half-symmetric or symmetric ([`gsaa`]). Around that core it provides the
//! pieces needed to use the labels in practice:
//!
//! - [`mask`]: PNG/PBM/PGM mask I/O and mirror transforms
//! - [`metrics`]: confusion matrices, precision/recall/F1, macro and weighted
//!   F1, Cohen's kappa and accuracy, all computed exactly
//! - [`svm`]: one-vs-one linear SVMs trained with SGD on feature vectors
//! - [`dataset`]: label tables, mirror augmentation, seeded splits
//! - [`synth`]: synthetic masks of known class and a reference classifier
//! - [`cli`]: the `lesion-symmetry` command line tool

pub mod cli;
pub mod dataset;
pub mod error;
pub mod gsaa;
pub mod mask;
pub mod metrics;
pub mod rng;
pub mod svm;
pub mod synth;

pub use error::{Error, Result};
pub use gsaa::{classify, GsaaConfig, GsaaResult, IndicatorMode, PairSet, QuadrantCounts, SymmetryClass};
pub use mask::{load_mask, save_mask, Axis, BinaryMask, MaskFormat};
pub use metrics::{full_report, ClassSet, ConfusionMatrix, MetricsReport};
