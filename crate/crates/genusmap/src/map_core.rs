//! Rooted combinatorial maps on orientable surfaces.
//!
//! A map with `n` edges has half-edges `0..2n`. `alpha` pairs the two
//! half-edges of an edge and `sigma` rotates counterclockwise around the
//! origin vertex. Vertices are the cycles of `sigma` and faces are the cycles
//! of `phi = sigma⁻¹ ∘ alpha`, so a one-face map numbered in facial order has
//! `phi(i) = i + 1 mod 2n`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A validated rooted map.
///
/// Vertex ids are dense and assigned in increasing order of the smallest
/// half-edge of each `sigma` cycle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MapRecord", into = "MapRecord")]
pub struct CombinatorialMap {
    n_edges: usize,
    alpha: Vec<usize>,
    sigma: Vec<usize>,
    sigma_inv: Vec<usize>,
    root: usize,
    vertex_of: Vec<usize>,
    n_vertices: usize,
    n_faces: usize,
}

/// The JSON form of a map.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MapRecord {
    pub n_edges: usize,
    pub alpha: Vec<usize>,
    pub sigma: Vec<usize>,
    pub root: usize,
}

impl TryFrom<MapRecord> for CombinatorialMap {
    type Error = Error;
    fn try_from(r: MapRecord) -> Result<Self> {
        build_map(r.n_edges, r.alpha, r.sigma, r.root)
    }
}

impl From<CombinatorialMap> for MapRecord {
    fn from(m: CombinatorialMap) -> Self {
        MapRecord { n_edges: m.n_edges, alpha: m.alpha, sigma: m.sigma, root: m.root }
    }
}

/// Validates the permutation data and builds a map.
pub fn build_map(n_edges: usize, alpha: Vec<usize>, sigma: Vec<usize>, root: usize) -> Result<CombinatorialMap> {
    let len = 2 * n_edges;
    for arr_len in [alpha.len(), sigma.len()] {
        if arr_len != len {
            return Err(Error::HalfEdgeOutOfRange { index: arr_len, len });
        }
    }
    if root >= len {
        return Err(Error::HalfEdgeOutOfRange { index: root, len });
    }
    for (h, &a) in alpha.iter().enumerate() {
        if a >= len {
            return Err(Error::HalfEdgeOutOfRange { index: a, len });
        }
        if a == h || alpha[a] != h {
            return Err(Error::InvalidInvolution(h));
        }
    }
    let mut sigma_inv = vec![usize::MAX; len];
    for (h, &s) in sigma.iter().enumerate() {
        if s >= len {
            return Err(Error::HalfEdgeOutOfRange { index: s, len });
        }
        if sigma_inv[s] != usize::MAX {
            return Err(Error::InvalidPermutation(s));
        }
        sigma_inv[s] = h;
    }

    // Connectivity: orbit of the root under <alpha, sigma>.
    let mut seen = vec![false; len];
    let mut stack = vec![root];
    seen[root] = true;
    let mut reached = 1;
    while let Some(h) = stack.pop() {
        for next in [alpha[h], sigma[h]] {
            if !seen[next] {
                seen[next] = true;
                reached += 1;
                stack.push(next);
            }
        }
    }
    if reached != len {
        return Err(Error::Disconnected { reached, total: len });
    }

    let (vertex_of, n_vertices) = cycle_ids(len, |h| sigma[h]);
    let (_, n_faces) = cycle_ids(len, |h| sigma_inv[alpha[h]]);
    Ok(CombinatorialMap { n_edges, alpha, sigma, sigma_inv, root, vertex_of, n_vertices, n_faces })
}

/// Labels the cycles of a permutation by increasing smallest element.
fn cycle_ids(len: usize, next: impl Fn(usize) -> usize) -> (Vec<usize>, usize) {
    let mut id = vec![usize::MAX; len];
    let mut count = 0;
    for start in 0..len {
        if id[start] != usize::MAX {
            continue;
        }
        let mut h = start;
        while id[h] == usize::MAX {
            id[h] = count;
            h = next(h);
        }
        count += 1;
    }
    (id, count)
}

/// Genus from Euler's formula `V − E + F = 2 − 2g`.
pub fn genus(map: &CombinatorialMap) -> usize {
    map.genus()
}

/// Number of faces of a map.
pub fn face_count(map: &CombinatorialMap) -> usize {
    map.face_count()
}

impl CombinatorialMap {
    /// Number of edges.
    pub fn n_edges(&self) -> usize {
        self.n_edges
    }

    /// Number of half-edges, `2 * n_edges`.
    pub fn n_half_edges(&self) -> usize {
        2 * self.n_edges
    }

    /// The root half-edge.
    pub fn root(&self) -> usize {
        self.root
    }

    /// The opposite half-edge of the same edge.
    pub fn alpha(&self, h: usize) -> usize {
        self.alpha[h]
    }

    /// The next half-edge counterclockwise around the origin of `h`.
    pub fn sigma(&self, h: usize) -> usize {
        self.sigma[h]
    }

    /// The inverse rotation.
    pub fn sigma_inv(&self, h: usize) -> usize {
        self.sigma_inv[h]
    }

    /// The facial successor `sigma⁻¹(alpha(h))`.
    pub fn phi(&self, h: usize) -> usize {
        self.sigma_inv[self.alpha[h]]
    }

    /// The whole `alpha` array.
    pub fn alpha_slice(&self) -> &[usize] {
        &self.alpha
    }

    /// The whole `sigma` array.
    pub fn sigma_slice(&self) -> &[usize] {
        &self.sigma
    }

    /// The vertex at the origin of `h`.
    pub fn vertex_of(&self, h: usize) -> usize {
        self.vertex_of[h]
    }

    /// The vertex at the head of `h`.
    pub fn head(&self, h: usize) -> usize {
        self.vertex_of[self.alpha[h]]
    }

    /// Vertex ids of the origins of all half-edges.
    pub fn vertex_table(&self) -> &[usize] {
        &self.vertex_of
    }

    /// Number of vertices.
    pub fn vertex_count(&self) -> usize {
        self.n_vertices
    }

    /// Number of faces.
    pub fn face_count(&self) -> usize {
        self.n_faces
    }

    /// Genus from Euler's formula.
    pub fn genus(&self) -> usize {
        let chi = self.n_vertices as i64 - self.n_edges as i64 + self.n_faces as i64;
        debug_assert!(chi <= 2 && (2 - chi) % 2 == 0);
        ((2 - chi) / 2) as usize
    }

    /// Degree of every vertex.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n_vertices];
        for &v in &self.vertex_of {
            deg[v] += 1;
        }
        deg
    }

    /// The faces as cycles of `phi`, each starting at its smallest half-edge.
    pub fn faces(&self) -> Vec<Vec<usize>> {
        let len = self.n_half_edges();
        let mut seen = vec![false; len];
        let mut faces = Vec::with_capacity(self.n_faces);
        for start in 0..len {
            if seen[start] {
                continue;
            }
            let mut face = Vec::new();
            let mut h = start;
            while !seen[h] {
                seen[h] = true;
                face.push(h);
                h = self.phi(h);
            }
            faces.push(face);
        }
        faces
    }

    /// The same map with half-edge `h` renamed `perm[h]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<CombinatorialMap> {
        let len = self.n_half_edges();
        let mut alpha = vec![0; len];
        let mut sigma = vec![0; len];
        for h in 0..len {
            alpha[perm[h]] = perm[self.alpha[h]];
            sigma[perm[h]] = perm[self.sigma[h]];
        }
        build_map(self.n_edges, alpha, sigma, perm[self.root])
    }

    /// A labeling-independent key of the rooted map.
    ///
    /// Half-edges are renumbered in order of discovery from the root, always
    /// exploring `sigma` before `alpha`; two rooted maps are isomorphic iff
    /// their keys are equal.
    pub fn canonical_form(&self) -> (Vec<usize>, Vec<usize>) {
        let len = self.n_half_edges();
        let mut new_id = vec![usize::MAX; len];
        let mut order = Vec::with_capacity(len);
        new_id[self.root] = 0;
        order.push(self.root);
        let mut i = 0;
        while i < order.len() {
            let h = order[i];
            for next in [self.sigma[h], self.alpha[h]] {
                if new_id[next] == usize::MAX {
                    new_id[next] = order.len();
                    order.push(next);
                }
            }
            i += 1;
        }
        let alpha = order.iter().map(|&h| new_id[self.alpha[h]]).collect();
        let sigma = order.iter().map(|&h| new_id[self.sigma[h]]).collect();
        (alpha, sigma)
    }

    /// The same underlying map with a different root.
    pub fn with_root(&self, root: usize) -> Result<CombinatorialMap> {
        if root >= self.n_half_edges() {
            return Err(Error::HalfEdgeOutOfRange { index: root, len: self.n_half_edges() });
        }
        let mut m = self.clone();
        m.root = root;
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;

    fn one_vertex(alpha: Vec<usize>) -> CombinatorialMap {
        let len = alpha.len();
        let sigma = (0..len).map(|h| (h + 1) % len).collect();
        build_map(len / 2, alpha, sigma, 0).unwrap()
    }

    #[test]
    fn fixed_point_in_alpha_is_rejected() {
        let err = build_map(1, vec![0, 1], vec![0, 1], 0).unwrap_err();
        assert_eq!(err, Error::InvalidInvolution(0));
    }

    #[test]
    fn chord_diagrams_on_one_vertex() {
        let planar = one_vertex(vec![3, 2, 1, 0]);
        assert_eq!(planar.face_count(), 3);
        assert_eq!(planar.genus(), 0);
        let torus = one_vertex(vec![2, 3, 0, 1]);
        assert_eq!(torus.face_count(), 1);
        assert_eq!(torus.genus(), 1);
        assert_eq!(torus.vertex_count(), 1);
    }

    #[test]
    fn single_edge_is_planar_tree() {
        let m = build_map(1, vec![1, 0], vec![0, 1], 0).unwrap();
        assert_eq!((m.vertex_count(), m.face_count(), m.genus()), (2, 1, 0));
    }

    #[test]
    fn disconnected_and_out_of_range_are_rejected() {
        let err = build_map(2, vec![1, 0, 3, 2], vec![0, 1, 2, 3], 0).unwrap_err();
        assert!(matches!(err, Error::Disconnected { reached: 2, total: 4 }));
        let err = build_map(1, vec![1, 0], vec![0, 1], 2).unwrap_err();
        assert!(matches!(err, Error::HalfEdgeOutOfRange { .. }));
        let err = build_map(1, vec![1, 0], vec![1, 1], 0).unwrap_err();
        assert!(matches!(err, Error::InvalidPermutation(1)));
    }

    #[test]
    fn json_round_trip_is_exact() {
        let m = one_vertex(vec![2, 3, 0, 1]);
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"{"n_edges":2,"alpha":[2,3,0,1],"sigma":[1,2,3,0],"root":0}"#);
        let back: CombinatorialMap = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        assert!(serde_json::from_str::<CombinatorialMap>(r#"{"n_edges":1,"alpha":[0,1],"sigma":[0,1],"root":0}"#).is_err());
    }

    fn random_map(seed: u64, n: usize) -> CombinatorialMap {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        loop {
            let mut perm: Vec<usize> = (0..2 * n).collect();
            perm.shuffle(&mut rng);
            let mut alpha = vec![0; 2 * n];
            for pair in perm.chunks(2) {
                alpha[pair[0]] = pair[1];
                alpha[pair[1]] = pair[0];
            }
            let mut sigma: Vec<usize> = (0..2 * n).collect();
            sigma.shuffle(&mut rng);
            if let Ok(m) = build_map(n, alpha, sigma, 0) {
                return m;
            }
        }
    }

    proptest! {
        #[test]
        fn counts_invariant_under_conjugation(seed in 0u64..10_000, n in 1usize..9) {
            let m = random_map(seed, n);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 0xabcdef);
            let mut perm: Vec<usize> = (0..2 * n).collect();
            perm.shuffle(&mut rng);
            let r = m.relabel(&perm).unwrap();
            prop_assert_eq!(r.vertex_count(), m.vertex_count());
            prop_assert_eq!(r.face_count(), m.face_count());
            prop_assert_eq!(r.genus(), m.genus());
            prop_assert_eq!(r.canonical_form(), m.canonical_form());
            for h in 0..2 * n {
                prop_assert_eq!(m.alpha(m.alpha(h)), h);
            }
        }
    }
}
