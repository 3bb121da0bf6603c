//! Error type shared by every module of the crate.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Every failure mode reported by the library.
///
/// Variants are grouped by the module that raises them. Domain errors carry
/// enough context (indices, offending values) to locate the problem.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    // map_core
    /// `alpha` has a fixed point or is not an involution.
    #[error("alpha is not a fixed-point-free involution at half-edge {0}")]
    InvalidInvolution(usize),
    /// `sigma` is not a permutation of the half-edges.
    #[error("sigma is not a permutation (value {0} repeated or out of range)")]
    InvalidPermutation(usize),
    /// The group generated by alpha and sigma is not transitive.
    #[error("map is disconnected: {reached} of {total} half-edges reachable from the root")]
    Disconnected { reached: usize, total: usize },
    /// A half-edge index, or an array length, does not fit `2 * n_edges`.
    #[error("half-edge {index} out of range for {len} half-edges")]
    HalfEdgeOutOfRange { index: usize, len: usize },

    // gtree
    /// A map handed to the g-tree constructor has more than one face.
    #[error("a g-tree must have exactly one face, found {0}")]
    OneFaceViolation(usize),
    /// The label of the root vertex is not zero.
    #[error("root vertex label must be 0, found {0}")]
    RootLabelNonzero(i64),
    /// Two adjacent vertices have labels differing by more than one.
    #[error("labels differ by more than 1 across half-edge {half_edge} ({from} -> {to})")]
    IncrementTooLarge { half_edge: usize, from: i64, to: i64 },
    /// The label vector does not have one entry per vertex.
    #[error("expected {expected} labels, found {found}")]
    LabelCountMismatch { expected: usize, found: usize },
    /// An exhaustive enumeration was requested beyond its size guard.
    #[error("exhaustive enumeration with {n_edges} edges exceeds the cap of {cap}")]
    SizeTooLargeForExhaustive { n_edges: usize, cap: usize },

    // forest
    /// A contour pair violates one of its invariants.
    #[error("malformed contour at index {index}: {reason}")]
    MalformedContour { index: usize, reason: &'static str },
    /// A Motzkin bridge target cannot be reached in the given number of steps.
    #[error("target {target} unreachable in {sigma} Motzkin steps")]
    UnreachableTarget { sigma: usize, target: i64 },
    /// Parameters of a first-passage bridge admit no path.
    #[error("no first-passage path with {steps} steps to -{sigma}")]
    InfeasibleParameters { steps: usize, sigma: usize },
    /// A bridge lifetime differs from the tree count of its forest.
    #[error("bridge lifetime {bridge} differs from forest tree count {forest}")]
    LifetimeMismatch { bridge: usize, forest: usize },
    /// An index lies outside the admissible range.
    #[error("index {index} outside [0, {max}]")]
    IndexOutOfRange { index: usize, max: usize },

    // scheme
    /// The pruned core has no vertex of degree at least 3.
    #[error("the g-tree has no scheme (genus 0)")]
    NoSchemeExists,
    /// A decomposition quadruple fails a compatibility condition.
    #[error("incompatible quadruple: {0}")]
    IncompatibleQuadruple(String),

    // sampler
    /// Exact counting was requested beyond the configured size.
    #[error("exact mode is capped at n = {cap}, requested {n}")]
    ExactModeTooLarge { n: usize, cap: usize },
    /// Float counting was requested where the truncation error is not controlled.
    #[error("float mode loses precision for n = {n} (cap {cap})")]
    FloatModePrecisionLoss { n: usize, cap: usize },
    /// The weight tables would exceed the memory budget.
    #[error("weight tables for genus {genus}, n = {n} need about {bytes} bytes (limit {limit})")]
    TableTooLarge { genus: usize, n: usize, bytes: usize, limit: usize },
    /// A derived count is not an integer, which signals a counting bug.
    #[error("non-integer result: {0}")]
    NonIntegerResult(String),
    /// There is nothing to sample from.
    #[error("no well-labeled g-tree of genus {genus} with {n} edges")]
    EmptySupport { genus: usize, n: usize },
    /// The genus must be at least one.
    #[error("genus must be at least 1, found {0}")]
    InvalidGenus(usize),

    // cms
    /// A face of the input map does not have degree four.
    #[error("face containing half-edge {half_edge} has degree {degree}, expected 4")]
    NotAQuadrangulation { half_edge: usize, degree: usize },
    /// The input map is not bipartite.
    #[error("map is not bipartite (odd cycle through half-edge {0})")]
    NotBipartite(usize),
    /// The pointed vertex does not exist.
    #[error("pointed vertex {0} does not exist")]
    InvalidPointedVertex(usize),

    // metrics
    /// A radius grid has fewer than two distinct radii.
    #[error("radius grid too coarse: {0} distinct radii")]
    RadiusGridTooCoarse(usize),

    // tg
    /// A scheme is not dominant (some degree differs from 3).
    #[error("scheme is not dominant")]
    NotDominant,
    /// An ordering is not a bijection onto the scheme vertices.
    #[error("invalid ordering: {0}")]
    InvalidOrdering(String),
    /// Adaptive quadrature did not reach the requested tolerance.
    #[error("quadrature did not converge (error estimate {0:e})")]
    QuadratureNonconvergence(f64),
    /// A Monte Carlo estimate was requested with zero samples.
    #[error("Monte Carlo estimation needs at least one sample")]
    ZeroSamples,
    /// Ratio analysis was requested with no sizes.
    #[error("no counts available for the ratio analysis")]
    CountsUnavailable,
}
