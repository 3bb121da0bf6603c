//! Uniform random bipartite quadrangulations of positive genus.
//!
//! The crate builds the full pipeline from exact counting to metric
//! statistics:
//!
//! * [`map_core`]: rooted combinatorial maps as permutation pairs.
//! * [`gtree`]: one-face maps (g-trees) as polygon pairings, and labelings.
//! * [`forest`]: labeled forests, contour encodings and lattice bridges.
//! * [`scheme`]: schemes and the decomposition of g-trees into quadruples.
//! * [`sampler`]: exact counts and uniform sampling of labeled g-trees.
//! * [`cms`]: the bijection between labeled g-trees and pointed
//!   quadrangulations.
//! * [`metrics`]: graph distances, label-process bounds and ball growth.
//! * [`tg`]: the asymptotic constant `t_g` and numerical cross-checks.

pub mod cms;
pub mod error;
pub mod forest;
pub mod gtree;
pub mod map_core;
pub mod metrics;
pub mod random;
pub mod sampler;
pub mod scheme;
pub mod tg;

pub use cms::PointedQuadrangulation;
pub use error::{Error, Result};
pub use forest::{ContourPair, Forest, LatticeBridgePath, MotzkinBridge, WellLabeledForest};
pub use gtree::{FacialSequence, GTree, WellLabeledGTree};
pub use map_core::CombinatorialMap;
pub use random::{Chooser, RngChooser};
pub use sampler::{Mode, Sampler, StructureVector};
pub use scheme::{DecompositionQuadruple, Scheme};
