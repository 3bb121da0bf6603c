//! The bijection between well-labeled g-trees with a sign and pointed
//! bipartite quadrangulations of genus g.
//!
//! Forward: every corner `i` of the tree sends an arc to its successor, the
//! next corner in facial order whose shifted label is one less (or to the
//! extra vertex `v•` when the shifted label is 1). Arc `k` consists of the
//! half-edges `2k`, leaving corner `k`, and `2k + 1` at its target.
//!
//! Inverse: distances from `v•` are recomputed by breadth-first search and
//! each face contributes one tree edge by the local rule on its four
//! distances.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gtree::{from_map, validate_labels, WellLabeledGTree};
use crate::map_core::{build_map, CombinatorialMap, MapRecord};
use crate::metrics::bfs_distances;

/// A bipartite quadrangulation with a distinguished vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PointedRecord", into = "PointedRecord")]
pub struct PointedQuadrangulation {
    pub map: CombinatorialMap,
    pub pointed_vertex: usize,
    /// Orientation of the root arc relative to `t(0)`, `−1` or `+1`.
    pub epsilon: i8,
    /// Map vertex of the tree corner `i`, for `i ∈ [0, 2n]`.
    pub correspondence: Vec<usize>,
    /// Shifted label of every map vertex, 0 at the pointed vertex.
    pub labels_shifted: Vec<i64>,
}

/// The JSON form of a pointed quadrangulation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PointedRecord {
    #[serde(flatten)]
    pub map: MapRecord,
    pub pointed_vertex: usize,
    pub epsilon: i8,
    pub correspondence: Vec<usize>,
    pub labels_shifted: Vec<i64>,
}

impl TryFrom<PointedRecord> for PointedQuadrangulation {
    type Error = Error;
    fn try_from(r: PointedRecord) -> Result<Self> {
        let map = CombinatorialMap::try_from(r.map)?;
        if r.pointed_vertex >= map.vertex_count() {
            return Err(Error::InvalidPointedVertex(r.pointed_vertex));
        }
        Ok(PointedQuadrangulation {
            map,
            pointed_vertex: r.pointed_vertex,
            epsilon: r.epsilon,
            correspondence: r.correspondence,
            labels_shifted: r.labels_shifted,
        })
    }
}

impl From<PointedQuadrangulation> for PointedRecord {
    fn from(q: PointedQuadrangulation) -> Self {
        PointedRecord {
            map: q.map.into(),
            pointed_vertex: q.pointed_vertex,
            epsilon: q.epsilon,
            correspondence: q.correspondence,
            labels_shifted: q.labels_shifted,
        }
    }
}

impl PointedQuadrangulation {
    /// Number of faces, equal to the number of tree edges.
    pub fn n_faces(&self) -> usize {
        self.map.n_edges() / 2
    }

    /// Shifted label of the tree corner `i`.
    pub fn corner_label(&self, i: usize) -> i64 {
        self.labels_shifted[self.correspondence[i]]
    }
}

/// Successor corners: `succ[i]` is the target corner of the arc leaving
/// corner `i`, or `None` when the arc goes to `v•`.
pub fn successors(shifted: &[i64]) -> Vec<Option<usize>> {
    let len = shifted.len();
    let max = *shifted.iter().max().expect("trees have corners") as usize;
    let mut next: Vec<Option<usize>> = vec![None; max + 2];
    let mut succ = vec![None; len];
    for idx in (0..2 * len).rev() {
        let c = idx % len;
        let l = shifted[c] as usize;
        if idx < len && l >= 2 {
            succ[c] = next[l - 1];
        }
        next[l] = Some(c);
    }
    succ
}

/// The pointed quadrangulation of a well-labeled g-tree and a sign.
pub fn cms_forward(wlt: &WellLabeledGTree, epsilon: i8) -> PointedQuadrangulation {
    let tree = wlt.tree();
    let tmap = tree.map();
    let n = tree.n_edges();
    let len = 2 * n;
    let min = *wlt.labels().iter().min().expect("trees have vertices");
    let corner: Vec<i64> = (0..len).map(|i| wlt.label_at(i) - min + 1).collect();
    let succ = successors(&corner);
    let mut incoming: Vec<Vec<usize>> = vec![Vec::new(); len];
    let mut spokes = Vec::new();
    for (k, s) in succ.iter().enumerate() {
        match *s {
            Some(c) => incoming[c].push(k),
            None => spokes.push(2 * k + 1),
        }
    }
    let mut sigma = vec![usize::MAX; 2 * len];
    let mut seen = vec![false; len];
    let mut ring = Vec::new();
    for start in 0..len {
        if seen[start] {
            continue;
        }
        ring.clear();
        let mut c = start;
        while !seen[c] {
            seen[c] = true;
            ring.push(2 * c);
            let mut ins = std::mem::take(&mut incoming[c]);
            ins.sort_by_key(|&k| (k + len - c) % len);
            ring.extend(ins.iter().map(|&k| 2 * k + 1));
            c = tmap.sigma(c);
        }
        for i in 0..ring.len() {
            sigma[ring[i]] = ring[(i + 1) % ring.len()];
        }
    }
    for i in 0..spokes.len() {
        sigma[spokes[i]] = spokes[(i + 1) % spokes.len()];
    }
    let alpha: Vec<usize> = (0..2 * len).map(|h| h ^ 1).collect();
    let root = if epsilon < 0 { 0 } else { 1 };
    let map = build_map(len, alpha, sigma, root).expect("forward construction yields a valid map");
    let pointed_vertex = map.vertex_of(spokes[0]);
    let correspondence: Vec<usize> = (0..=len).map(|i| map.vertex_of(2 * (i % len))).collect();
    let mut labels_shifted = vec![0i64; map.vertex_count()];
    for i in 0..len {
        labels_shifted[correspondence[i]] = corner[i];
    }
    PointedQuadrangulation { map, pointed_vertex, epsilon: if epsilon < 0 { -1 } else { 1 }, correspondence, labels_shifted }
}

/// Checks that every face has degree 4 and the map is bipartite.
pub fn validate_quadrangulation(map: &CombinatorialMap) -> Result<()> {
    for face in map.faces() {
        if face.len() != 4 {
            return Err(Error::NotAQuadrangulation { half_edge: face[0], degree: face.len() });
        }
    }
    let dist = bfs_distances(map, 0);
    for h in 0..map.n_half_edges() {
        if (dist[map.vertex_of(h)] - dist[map.head(h)]).abs() != 1 {
            return Err(Error::NotBipartite(h));
        }
    }
    Ok(())
}

/// The well-labeled g-tree and sign encoding a pointed quadrangulation.
pub fn cms_inverse(pq: &PointedQuadrangulation) -> Result<(WellLabeledGTree, i8)> {
    let map = &pq.map;
    if pq.pointed_vertex >= map.vertex_count() {
        return Err(Error::InvalidPointedVertex(pq.pointed_vertex));
    }
    validate_quadrangulation(map)?;
    let d = bfs_distances(map, pq.pointed_vertex);
    let len = map.n_half_edges();
    // Tree half-edge inserted in the slot after quadrangulation half-edge h.
    let mut slot: Vec<Option<usize>> = vec![None; len];
    let mut tree_alpha = Vec::new();
    for face in map.faces() {
        let dl: Vec<i64> = face.iter().map(|&h| d[map.vertex_of(h)]).collect();
        let lo = *dl.iter().min().expect("faces are nonempty");
        let (a, b) = if dl.iter().filter(|&&x| x == lo).count() == 2 {
            // Labels (d, d+1, d, d+1): join the two corners of label d + 1.
            let i = (0..4).find(|&i| dl[i] == lo + 1).expect("a corner has label d + 1");
            (face[i], face[i + 2])
        } else {
            // Labels (d, d+1, d+2, d+1): join the d + 2 corner to the one before it.
            let i = (0..4).find(|&i| dl[i] == lo + 2).expect("a corner has label d + 2");
            (face[i], face[(i + 3) % 4])
        };
        let t = tree_alpha.len();
        tree_alpha.push(t + 1);
        tree_alpha.push(t);
        slot[a] = Some(t);
        slot[b] = Some(t + 1);
    }
    // Rotation of tree half-edges: slots in the rotation order of each vertex.
    let m = tree_alpha.len();
    let mut tree_sigma = vec![usize::MAX; m];
    let mut seen = vec![false; len];
    let mut ring = Vec::new();
    for start in 0..len {
        if seen[start] || map.vertex_of(start) == pq.pointed_vertex {
            continue;
        }
        ring.clear();
        let mut h = start;
        while !seen[h] {
            seen[h] = true;
            if let Some(t) = slot[h] {
                ring.push(t);
            }
            h = map.sigma(h);
        }
        for i in 0..ring.len() {
            tree_sigma[ring[i]] = ring[(i + 1) % ring.len()];
        }
    }
    // The root arc leaves t(0) toward smaller distance.
    let r = map.root();
    let epsilon: i8 = if d[map.vertex_of(r)] > d[map.head(r)] { -1 } else { 1 };
    let out = if epsilon < 0 { r } else { map.alpha(r) };
    let mut h = map.sigma_inv(out);
    let tree_root = loop {
        if let Some(t) = slot[h] {
            break t;
        }
        h = map.sigma_inv(h);
    };
    let tmap = build_map(m / 2, tree_alpha, tree_sigma, tree_root).map_err(|_| Error::NotAQuadrangulation { half_edge: r, degree: 0 })?;
    let tree = from_map(&tmap)?;
    // Tree half-edge i of the renumbered tree is the i-th along the face.
    let mut vertex_label = vec![0i64; tree.vertex_count()];
    let mut quad_vertex_of_tree_he = vec![usize::MAX; m];
    for (q, s) in slot.iter().enumerate() {
        if let Some(t) = s {
            quad_vertex_of_tree_he[*t] = map.vertex_of(q);
        }
    }
    let base = d[quad_vertex_of_tree_he[tree_root]];
    let mut t = tree_root;
    for i in 0..m {
        vertex_label[tree.t(i)] = d[quad_vertex_of_tree_he[t]] - base;
        t = tmap.phi(t);
    }
    Ok((validate_labels(tree, vertex_label)?, epsilon))
}

/// Whether every shifted label equals the distance to the pointed vertex.
pub fn check_label_distance(pq: &PointedQuadrangulation) -> bool {
    pq.labels_shifted.len() == pq.map.vertex_count() && bfs_distances(&pq.map, pq.pointed_vertex) == pq.labels_shifted
}

/// The label bound on the distance between the vertices of corners `i` and
/// `j`: `ℓ(i) + ℓ(j) − 2 max(min over [i → j], min over [j → i]) + 2`.
pub fn distance_upper_bound(pq: &PointedQuadrangulation, i: usize, j: usize) -> Result<i64> {
    let max = pq.correspondence.len() - 1;
    for x in [i, j] {
        if x > max {
            return Err(Error::IndexOutOfRange { index: x, max });
        }
    }
    let l = |k: usize| pq.corner_label(k);
    let arc_min = |a: usize, b: usize| -> i64 {
        if a <= b {
            (a..=b).map(l).min().expect("nonempty")
        } else {
            (a..=max).chain(0..=b).map(l).min().expect("nonempty")
        }
    };
    Ok(l(i) + l(j) - 2 * arc_min(i, j).max(arc_min(j, i)) + 2)
}
