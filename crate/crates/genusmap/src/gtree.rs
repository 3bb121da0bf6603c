//! One-face maps (g-trees) stored as pairings of the sides of a 2n-gon.
//!
//! Side `i` of the polygon is the half-edge `i`, oriented from corner `i` to
//! corner `i + 1`; the facial successor of `i` is `i + 1 mod 2n` and the root
//! is side 0. Gluing side `i` to side `pairing[i]` produces the map, whose
//! rotation is `sigma(i) = pairing[i − 1]`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::map_core::{build_map, CombinatorialMap};

/// Largest edge count accepted by the exhaustive enumerators by default.
pub const DEFAULT_EXHAUSTIVE_CAP: usize = 7;

/// A rooted one-face map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GTree {
    pairing: Vec<usize>,
    map: CombinatorialMap,
}

/// The vertices visited along the face, `t(0), …, t(2n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FacialSequence {
    pub vertices: Vec<usize>,
}

/// A g-tree together with a well-labeling of its vertices.
///
/// Equality and ordering compare the pairing, then the label vector.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "GTreeRecord", into = "GTreeRecord")]
pub struct WellLabeledGTree {
    tree: GTree,
    labels: Vec<i64>,
}

impl WellLabeledGTree {
    fn key(&self) -> (&[usize], &[i64]) {
        (&self.tree.pairing, &self.labels)
    }
}

impl PartialEq for WellLabeledGTree {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}
impl Eq for WellLabeledGTree {}
impl PartialOrd for WellLabeledGTree {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for WellLabeledGTree {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}
impl std::hash::Hash for WellLabeledGTree {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.key().hash(state);
    }
}

/// The JSON form of a well-labeled g-tree.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GTreeRecord {
    pub genus: usize,
    pub n_edges: usize,
    pub pairing: Vec<usize>,
    pub labels: Vec<i64>,
}

impl TryFrom<GTreeRecord> for WellLabeledGTree {
    type Error = Error;
    fn try_from(r: GTreeRecord) -> Result<Self> {
        let tree = from_pairing(r.n_edges, r.pairing)?;
        if tree.genus() != r.genus {
            return Err(Error::InvalidGenus(r.genus));
        }
        validate_labels(tree, r.labels)
    }
}

impl From<WellLabeledGTree> for GTreeRecord {
    fn from(t: WellLabeledGTree) -> Self {
        GTreeRecord { genus: t.tree.genus(), n_edges: t.tree.n_edges(), pairing: t.tree.pairing, labels: t.labels }
    }
}

/// Builds the g-tree obtained by gluing the sides of a 2n-gon.
pub fn from_pairing(n_edges: usize, pairing: Vec<usize>) -> Result<GTree> {
    let len = 2 * n_edges;
    if pairing.len() != len || len == 0 {
        return Err(Error::HalfEdgeOutOfRange { index: pairing.len(), len });
    }
    let sigma = (0..len).map(|j| pairing.get((j + len - 1) % len).copied().unwrap_or(usize::MAX)).collect();
    let map = build_map(n_edges, pairing.clone(), sigma, 0)?;
    debug_assert_eq!(map.face_count(), 1);
    Ok(GTree { pairing, map })
}

/// Builds a g-tree from an arbitrary rooted map, renumbering its half-edges
/// in facial order from the root.
pub fn from_map(map: &CombinatorialMap) -> Result<GTree> {
    if map.face_count() != 1 {
        return Err(Error::OneFaceViolation(map.face_count()));
    }
    let len = map.n_half_edges();
    let mut pos = vec![0; len];
    let mut h = map.root();
    for i in 0..len {
        pos[h] = i;
        h = map.phi(h);
    }
    let mut pairing = vec![0; len];
    for h in 0..len {
        pairing[pos[h]] = pos[map.alpha(h)];
    }
    from_pairing(map.n_edges(), pairing)
}

/// The facial sequence of a g-tree.
pub fn facial_sequence(tree: &GTree) -> FacialSequence {
    tree.facial_sequence()
}

impl GTree {
    /// Number of edges.
    pub fn n_edges(&self) -> usize {
        self.pairing.len() / 2
    }

    /// The side pairing.
    pub fn pairing(&self) -> &[usize] {
        &self.pairing
    }

    /// The derived rooted map.
    pub fn map(&self) -> &CombinatorialMap {
        &self.map
    }

    /// Genus, `(E + 1 − V) / 2`.
    pub fn genus(&self) -> usize {
        self.map.genus()
    }

    /// Number of vertices.
    pub fn vertex_count(&self) -> usize {
        self.map.vertex_count()
    }

    /// The vertex `t(i)`, for `0 ≤ i ≤ 2n`.
    pub fn t(&self, i: usize) -> usize {
        self.map.vertex_of(i % self.pairing.len())
    }

    /// The facial sequence `t(0), …, t(2n)`.
    pub fn facial_sequence(&self) -> FacialSequence {
        let len = self.pairing.len();
        FacialSequence { vertices: (0..=len).map(|i| self.t(i)).collect() }
    }

    /// Vertex degrees, indexed by canonical vertex id.
    pub fn degrees(&self) -> Vec<usize> {
        self.map.degrees()
    }
}

/// Checks a labeling and builds the well-labeled g-tree.
pub fn validate_labels(tree: GTree, labels: Vec<i64>) -> Result<WellLabeledGTree> {
    let v = tree.vertex_count();
    if labels.len() != v {
        return Err(Error::LabelCountMismatch { expected: v, found: labels.len() });
    }
    let root_label = labels[tree.t(0)];
    if root_label != 0 {
        return Err(Error::RootLabelNonzero(root_label));
    }
    for h in 0..tree.pairing.len() {
        let (a, b) = (labels[tree.map.vertex_of(h)], labels[tree.map.head(h)]);
        if (a - b).abs() > 1 {
            return Err(Error::IncrementTooLarge { half_edge: h, from: a, to: b });
        }
    }
    Ok(WellLabeledGTree { tree, labels })
}

impl WellLabeledGTree {
    /// The underlying g-tree.
    pub fn tree(&self) -> &GTree {
        &self.tree
    }

    /// The side pairing.
    pub fn pairing(&self) -> &[usize] {
        &self.tree.pairing
    }

    /// Labels indexed by canonical vertex id.
    pub fn labels(&self) -> &[i64] {
        &self.labels
    }

    /// Number of edges.
    pub fn n_edges(&self) -> usize {
        self.tree.n_edges()
    }

    /// Genus of the underlying g-tree.
    pub fn genus(&self) -> usize {
        self.tree.genus()
    }

    /// The label `ℓ(t(i))`, for `0 ≤ i ≤ 2n`.
    pub fn label_at(&self, i: usize) -> i64 {
        self.labels[self.tree.t(i)]
    }
}

/// Calls `f` on every fixed-point-free involution of `0..2n`, in
/// lexicographic order.
pub fn for_each_pairing(n: usize, mut f: impl FnMut(&[usize])) {
    fn rec(p: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        let Some(i) = p.iter().position(|&x| x == usize::MAX) else {
            f(p);
            return;
        };
        for j in i + 1..p.len() {
            if p[j] == usize::MAX {
                p[i] = j;
                p[j] = i;
                rec(p, f);
                p[i] = usize::MAX;
                p[j] = usize::MAX;
            }
        }
    }
    let mut p = vec![usize::MAX; 2 * n];
    rec(&mut p, &mut f);
}

/// All well-labeled g-trees of the given genus and size, ordered by pairing
/// then by label vector.
pub fn enumerate_well_labeled_gtrees(genus: usize, n_edges: usize) -> Result<Vec<WellLabeledGTree>> {
    enumerate_well_labeled_gtrees_with_cap(genus, n_edges, DEFAULT_EXHAUSTIVE_CAP)
}

/// [`enumerate_well_labeled_gtrees`] with an explicit size guard.
pub fn enumerate_well_labeled_gtrees_with_cap(genus: usize, n_edges: usize, cap: usize) -> Result<Vec<WellLabeledGTree>> {
    if genus == 0 {
        return Err(Error::InvalidGenus(0));
    }
    if n_edges > cap {
        return Err(Error::SizeTooLargeForExhaustive { n_edges, cap });
    }
    let mut out = Vec::new();
    if n_edges + 1 < 2 * genus + 1 || n_edges == 0 {
        return Ok(out);
    }
    let target_vertices = n_edges + 1 - 2 * genus;
    for_each_pairing(n_edges, |p| {
        let tree = from_pairing(n_edges, p.to_vec()).expect("enumerated pairings are valid");
        if tree.vertex_count() != target_vertices {
            return;
        }
        let mut labelings = all_labelings(&tree);
        labelings.sort();
        for labels in labelings {
            out.push(validate_labels(tree.clone(), labels).expect("enumerated labelings are valid"));
        }
    });
    Ok(out)
}

/// Every well-labeling of a g-tree, by increments along a spanning tree.
fn all_labelings(tree: &GTree) -> Vec<Vec<i64>> {
    let map = tree.map();
    let v = map.vertex_count();
    // Breadth-first spanning tree from the root vertex.
    let mut parent = vec![usize::MAX; v];
    let mut order = vec![map.vertex_of(0)];
    parent[order[0]] = order[0];
    let mut i = 0;
    while i < order.len() {
        let u = order[i];
        for h in 0..map.n_half_edges() {
            if map.vertex_of(h) == u {
                let w = map.head(h);
                if parent[w] == usize::MAX {
                    parent[w] = u;
                    order.push(w);
                }
            }
        }
        i += 1;
    }
    let mut out = Vec::new();
    let mut labels = vec![0i64; v];
    fn rec(k: usize, order: &[usize], parent: &[usize], labels: &mut Vec<i64>, map: &CombinatorialMap, out: &mut Vec<Vec<i64>>) {
        if k == order.len() {
            let ok = (0..map.n_half_edges()).all(|h| (labels[map.vertex_of(h)] - labels[map.head(h)]).abs() <= 1);
            if ok {
                out.push(labels.clone());
            }
            return;
        }
        let w = order[k];
        for d in [-1, 0, 1] {
            labels[w] = labels[parent[w]] + d;
            rec(k + 1, order, parent, labels, map, out);
        }
    }
    rec(1, &order, &parent, &mut labels, map, &mut out);
    out
}
